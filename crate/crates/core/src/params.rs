//! Parametrized families: named parameters with ranges, an optional
//! linear condition, and enumeration in a fixed order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::ffield::{Field, FieldError, Fq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("missing parameter `{0}`")]
    Missing(String),
    #[error("unknown parameter `{0}`")]
    Unknown(String),
    #[error("parameter `{name}` = {value} is outside its range")]
    OutOfRange { name: String, value: usize },
    #[error("parameters violate the family condition")]
    Condition,
    #[error("parameters {0} must not all be zero")]
    AllZero(String),
    #[error("cannot parse label `{0}`")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Range of a single parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    /// `F_q^×`
    Unit,
    /// `F_q`
    Any,
    /// `F_q`, with all `Tuple` parameters of the family not all zero.
    Tuple,
    /// `{0, 1}`
    Bit,
    /// `0` or the canonical element outside the image of
    /// `t ↦ (Π quad) t^2 + (Π lin) t`, products over earlier parameters.
    NonImage { quad: Vec<&'static str>, lin: Vec<&'static str> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: &'static str,
    pub kind: Kind,
}

/// `Σ num/den = 0`; the first numerator is solved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumCondition {
    pub terms: Vec<(&'static str, &'static str)>,
}

impl SumCondition {
    pub fn target(&self) -> &'static str {
        self.terms[0].0
    }
}

/// Parameter list of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub params: Vec<Param>,
    pub condition: Option<SumCondition>,
}

/// The root index carried by a name like `a10` or `b3`; `None` for compound
/// names such as `a567`.
pub fn name_index(name: &str) -> Option<usize> {
    let digits = name.get(1..)?;
    let n: usize = digits.parse().ok()?;
    (1..=12).contains(&n).then_some(n)
}

impl Shape {
    pub fn position(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    /// Value of `name`, zero when the family has no such parameter.
    pub fn get(&self, values: &[Fq], name: &str) -> Fq {
        self.position(name).map_or(Fq::ZERO, |i| values[i])
    }

    fn product(&self, field: &Field, values: &[Fq], names: &[&'static str]) -> Fq {
        names.iter().fold(Fq::ONE, |acc, n| field.mul(acc, self.get(values, n)))
    }

    fn nonimage(&self, field: &Field, values: &[Fq], kind: &Kind) -> Result<Fq, ParamError> {
        let Kind::NonImage { quad, lin } = kind else { unreachable!() };
        let c2 = self.product(field, values, quad);
        let c1 = self.product(field, values, lin);
        Ok(field.nonimage_pick(|t| field.add(field.mul(c2, field.mul(t, t)), field.mul(c1, t)))?)
    }

    fn solve(&self, field: &Field, values: &[Fq]) -> Fq {
        let cond = self.condition.as_ref().unwrap();
        let (_, den0) = cond.terms[0];
        let mut acc = Fq::ZERO;
        for &(n, d) in &cond.terms[1..] {
            let q = field.div(self.get(values, n), self.get(values, d)).expect("unit denominator");
            acc = field.add(acc, q);
        }
        field.neg(field.mul(self.get(values, den0), acc))
    }

    fn condition_holds(&self, field: &Field, values: &[Fq]) -> bool {
        match &self.condition {
            None => true,
            Some(_) => {
                let target = self.position(self.condition.as_ref().unwrap().target()).unwrap();
                values[target] == self.solve(field, values)
            }
        }
    }

    fn tuple_ok(&self, values: &[Fq]) -> bool {
        let mut any = false;
        let mut all_zero = true;
        for (p, v) in self.params.iter().zip(values) {
            if p.kind == Kind::Tuple {
                any = true;
                all_zero &= v.is_zero();
            }
        }
        !any || !all_zero
    }

    /// Checks ranges, the non-image picks, the condition and the tuple rule.
    pub fn validate(&self, field: &Field, values: &[Fq]) -> Result<(), ParamError> {
        if values.len() != self.params.len() {
            return Err(ParamError::Parse(format!("expected {} parameters", self.params.len())));
        }
        for (p, &v) in self.params.iter().zip(values) {
            let bad = || ParamError::OutOfRange { name: p.name.to_string(), value: v.index() };
            if v.index() >= field.q() as usize {
                return Err(bad());
            }
            match &p.kind {
                Kind::Unit if v.is_zero() => return Err(bad()),
                Kind::Bit if v.index() > 1 => return Err(bad()),
                k @ Kind::NonImage { .. }
                    if !v.is_zero() && v != self.nonimage(field, values, k)? => {
                        return Err(bad());
                    }
                _ => {}
            }
        }
        if !self.condition_holds(field, values) {
            return Err(ParamError::Condition);
        }
        if !self.tuple_ok(values) {
            let names: Vec<&str> =
                self.params.iter().filter(|p| p.kind == Kind::Tuple).map(|p| p.name).collect();
            return Err(ParamError::AllZero(names.join(",")));
        }
        Ok(())
    }

    /// All admissible parameter vectors, lexicographic in the free
    /// parameters with the first one most significant.
    pub fn enumerate(&self, field: &Field) -> Result<Vec<Vec<Fq>>, ParamError> {
        let target = self.condition.as_ref().map(|c| self.position(c.target()).unwrap());
        let mut out = Vec::new();
        let mut values = vec![Fq::ZERO; self.params.len()];
        self.recurse(field, 0, target, &mut values, &mut out)?;
        Ok(out)
    }

    fn recurse(
        &self,
        field: &Field,
        i: usize,
        target: Option<usize>,
        values: &mut Vec<Fq>,
        out: &mut Vec<Vec<Fq>>,
    ) -> Result<(), ParamError> {
        if i == self.params.len() {
            if let Some(t) = target {
                values[t] = self.solve(field, values);
                if self.params[t].kind == Kind::Unit && values[t].is_zero() {
                    return Ok(());
                }
            }
            if self.tuple_ok(values) {
                out.push(values.clone());
            }
            return Ok(());
        }
        if Some(i) == target {
            return self.recurse(field, i + 1, target, values, out);
        }
        let choices: Vec<Fq> = match &self.params[i].kind {
            Kind::Unit => field.units().collect(),
            Kind::Any | Kind::Tuple => field.elements().collect(),
            Kind::Bit => vec![Fq::ZERO, Fq::ONE],
            k @ Kind::NonImage { .. } => vec![Fq::ZERO, self.nonimage(field, values, k)?],
        };
        for c in choices {
            values[i] = c;
            self.recurse(field, i + 1, target, values, out)?;
        }
        Ok(())
    }

    /// `name=value` pairs, e.g. `a3=1,a1=2`.
    pub fn format_values(&self, values: &[Fq]) -> String {
        let parts: Vec<String> =
            self.params.iter().zip(values).map(|(p, v)| format!("{}={}", p.name, v.0)).collect();
        parts.join(",")
    }

    /// Parses the inside of `[..]`; every parameter must be named once.
    pub fn parse_values(&self, field: &Field, s: &str) -> Result<Vec<Fq>, ParamError> {
        let mut values: Vec<Option<Fq>> = vec![None; self.params.len()];
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, v) = part.split_once('=').ok_or_else(|| ParamError::Parse(part.to_string()))?;
            let name = name.trim();
            let i = self.position(name).ok_or_else(|| ParamError::Unknown(name.to_string()))?;
            let v: usize = v.trim().parse().map_err(|_| ParamError::Parse(part.to_string()))?;
            values[i] = Some(Fq(u16::try_from(v).map_err(|_| ParamError::OutOfRange {
                name: name.to_string(),
                value: v,
            })?));
        }
        let values = values
            .into_iter()
            .zip(&self.params)
            .map(|(v, p)| v.ok_or_else(|| ParamError::Missing(p.name.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        self.validate(field, &values)?;
        Ok(values)
    }
}

/// Splits `Name[params]` into its two parts.
pub fn split_label(s: &str) -> Result<(&str, &str), ParamError> {
    let s = s.trim();
    match s.split_once('[') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(']').ok_or_else(|| ParamError::Parse(s.to_string()))?;
            Ok((name.trim(), inner))
        }
        None => Ok((s, "")),
    }
}

// Shorthand constructors for the family tables.

pub(crate) fn unit(name: &'static str) -> Param {
    Param { name, kind: Kind::Unit }
}

pub(crate) fn any(name: &'static str) -> Param {
    Param { name, kind: Kind::Any }
}

pub(crate) fn tuple(name: &'static str) -> Param {
    Param { name, kind: Kind::Tuple }
}

pub(crate) fn bit(name: &'static str) -> Param {
    Param { name, kind: Kind::Bit }
}

pub(crate) fn nonimage(name: &'static str, quad: &[&'static str], lin: &[&'static str]) -> Param {
    Param { name, kind: Kind::NonImage { quad: quad.to_vec(), lin: lin.to_vec() } }
}

pub(crate) fn sum(terms: &[(&'static str, &'static str)]) -> Option<SumCondition> {
    Some(SumCondition { terms: terms.to_vec() })
}
