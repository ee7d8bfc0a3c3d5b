//! Families of irreducible characters of `U(q)` and their values.
//!
//! Values are produced as [`ValueExpr`]: an integer scale, a phase
//! `φ(arg)` and optionally one of the exponential sums, so they can be
//! exported symbolically as well as evaluated exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cyclotomic::{gauss_quadratic, kloosterman, quad_linear_sum, CycInt};
use crate::ffield::{Field, Fq};
use crate::group::{format_element, GraphAuto, UElement};
use crate::params::{any, bit, name_index, nonimage, split_label, sum, unit, Param, ParamError, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("unknown character family `{0}`")]
    UnknownFamily(String),
    #[error("shape not covered by generic formulas: {label} at {elem}")]
    NotCovered { label: String, elem: String },
    #[error("family {0} is not stable under the automorphism for p = {1}")]
    Unstable(String, u32),
}

/// Exponential-sum factor of a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumTerm {
    One,
    /// `Σ_{s ∈ F_q} φ(c s^2)`
    Gauss(Fq),
    /// `[q if plus_q] + Σ_{s ≠ 0} φ(a s + b / s)`
    Kloosterman { a: Fq, b: Fq, plus_q: bool },
    /// `Σ_{s ∈ F_q} φ(α s^2 + β s)`
    QuadLinear { alpha: Fq, beta: Fq },
}

/// `scale · φ(phase) · sum`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValueExpr {
    pub scale: i128,
    pub phase: Fq,
    pub sum: SumTerm,
}

impl ValueExpr {
    pub const ZERO: ValueExpr = ValueExpr { scale: 0, phase: Fq::ZERO, sum: SumTerm::One };

    fn new(scale: i128, phase: Fq, sum: SumTerm) -> ValueExpr {
        if scale == 0 {
            ValueExpr::ZERO
        } else {
            ValueExpr { scale, phase, sum }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0
    }

    pub fn evaluate(&self, field: &Field) -> CycInt {
        let p = field.p();
        if self.scale == 0 {
            return CycInt::zero(p);
        }
        let s = match self.sum {
            SumTerm::One => CycInt::one(p),
            SumTerm::Gauss(c) => gauss_quadratic(field, c),
            SumTerm::Kloosterman { a, b, plus_q } => {
                let k = kloosterman(field, a, b);
                if plus_q {
                    k.add(&CycInt::from_int(p, field.q() as i128)).expect("same p")
                } else {
                    k
                }
            }
            SumTerm::QuadLinear { alpha, beta } => quad_linear_sum(field, alpha, beta),
        };
        s.mul_zeta(field.trace(self.phase) as i64).scale(self.scale).expect("value fits in i128")
    }

    /// Human-readable form such as `3*phi(2)*G(1)`.
    pub fn describe(&self) -> String {
        if self.scale == 0 {
            return String::from("0");
        }
        let mut s = format!("{}", self.scale);
        if !self.phase.is_zero() {
            s.push_str(&format!("*phi({})", self.phase.0));
        }
        match self.sum {
            SumTerm::One => {}
            SumTerm::Gauss(c) => s.push_str(&format!("*G({})", c.0)),
            SumTerm::Kloosterman { a, b, plus_q } => {
                s.push_str(&format!("*({}K({},{}))", if plus_q { "q+" } else { "" }, a.0, b.0))
            }
            SumTerm::QuadLinear { alpha, beta } => {
                s.push_str(&format!("*S({},{})", alpha.0, beta.0))
            }
        }
        s
    }
}

/// Which value formula a family uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    Lin,
    Star567,
    Pair89Q3,
    Pair89Q2,
    Triple,
    TripleQ3,
    TripleHalf,
    F11,
    F12,
}

#[derive(Debug, Clone)]
pub struct CharFamily {
    /// Identifier used in labels, e.g. `F8_9_q3`.
    pub name: &'static str,
    pub subs: Vec<u8>,
    /// `q3`, `q2`, `half` or empty.
    pub tag: &'static str,
    pub formula: Formula,
    /// Values are those of the base formula at `auto^{-1}(x)`, with the
    /// base parameter of index `i` read from index `auto(i)` here.
    pub auto: GraphAuto,
    pub shape: Shape,
    pub degree_exp: u32,
    pub halved: bool,
    pub count: fn(u128) -> u128,
}

impl CharFamily {
    pub fn degree(&self, q: u128) -> u128 {
        let d = q.pow(self.degree_exp);
        if self.halved {
            d / 2
        } else {
            d
        }
    }

    /// Display form, e.g. `\chi_{8,9,q^3}`.
    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self.subs.iter().map(|s| format!("{s}")).collect();
        match self.tag {
            "q3" => parts.push(String::from("q^3")),
            "q2" => parts.push(String::from("q^2")),
            "half" => parts.push(String::from("q^3/2")),
            _ => {}
        }
        if self.formula == Formula::Lin {
            return String::from("\\chi_{lin}");
        }
        format!("\\chi_{{{}}}", parts.join(","))
    }
}

/// Parameters by role: `a[i]`, `b[i]` for `a_i`, `b_i`, plus the
/// compound parameters of the half-degree family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Resolved {
    pub a: [Fq; 13],
    pub b: [Fq; 13],
    pub a567: Fq,
    pub d124: Fq,
    pub d3: Fq,
}

impl Resolved {
    pub fn from_shape(shape: &Shape, values: &[Fq]) -> Resolved {
        let mut r = Resolved::default();
        for (p, &v) in shape.params.iter().zip(values) {
            match (p.name, name_index(p.name)) {
                ("a567", _) => r.a567 = v,
                ("d124", _) => r.d124 = v,
                ("d3", _) => r.d3 = v,
                (n, Some(i)) if n.starts_with('a') => r.a[i] = v,
                (n, Some(i)) if n.starts_with('b') => r.b[i] = v,
                (n, _) => unreachable!("unexpected parameter {n}"),
            }
        }
        r
    }

    /// Parameters of `χ ∘ g` for `χ` with these parameters.
    pub fn pulled_back(&self, g: &GraphAuto) -> Resolved {
        let mut r = *self;
        for i in 1..=12 {
            r.a[i] = self.a[g.image(i)];
            r.b[i] = self.b[g.image(i)];
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharLabel {
    pub family: usize,
    pub params: Vec<Fq>,
}

#[allow(clippy::too_many_arguments)]
fn family(
    name: &'static str,
    subs: &[u8],
    tag: &'static str,
    formula: Formula,
    auto: GraphAuto,
    params: Vec<Param>,
    condition: Option<crate::params::SumCondition>,
    degree_exp: u32,
    count: fn(u128) -> u128,
) -> CharFamily {
    CharFamily {
        name,
        subs: subs.to_vec(),
        tag,
        formula,
        auto,
        shape: Shape { params, condition },
        degree_exp,
        halved: false,
        count,
    }
}

/// Two-term coset condition; for `p = 2` its first numerator is set to zero.
fn two_term(
    p: u32,
    mut params: Vec<Param>,
    terms: &[(&'static str, &'static str)],
) -> (Vec<Param>, Option<crate::params::SumCondition>) {
    if p == 2 {
        params.retain(|x| x.name != terms[0].0);
        (params, None)
    } else {
        (params, sum(terms))
    }
}

/// The families for characteristic `p`, in table order.
pub fn char_families(p: u32) -> Vec<CharFamily> {
    use Formula::*;
    let id = GraphAuto::identity;
    let tau = GraphAuto::tau;
    let tau2 = GraphAuto::tau2;
    let mut out = Vec::new();

    out.push(family(
        "F12",
        &[12],
        "",
        F12,
        id(),
        vec![unit("a12"), any("b1"), any("b2"), any("b4")],
        None,
        4,
        |q| q.pow(3) * (q - 1),
    ));
    out.push(family(
        "F11",
        &[11],
        "",
        F11,
        id(),
        vec![unit("a11"), any("b5"), any("b6"), any("b7"), any("b3")],
        None,
        3,
        |q| q.pow(4) * (q - 1),
    ));
    if p == 2 {
        out.push(family(
            "F8_9_10_q3",
            &[8, 9, 10],
            "q3",
            TripleQ3,
            id(),
            vec![unit("a8"), unit("a9"), unit("a10")],
            None,
            3,
            |q| (q - 1).pow(3),
        ));
        let mut half = family(
            "F8_9_10_half",
            &[8, 9, 10],
            "half",
            TripleHalf,
            id(),
            vec![
                unit("a8"),
                unit("a9"),
                unit("a10"),
                unit("a567"),
                bit("d124"),
                nonimage("d3", &["a8", "a9", "a10"], &["a567", "a8", "a9", "a10"]),
            ],
            None,
            3,
            |q| 4 * (q - 1).pow(4),
        );
        half.halved = true;
        out.push(half);
    } else {
        out.push(family(
            "F8_9_10",
            &[8, 9, 10],
            "",
            Triple,
            id(),
            vec![unit("a8"), unit("a9"), unit("a10"), any("b3")],
            None,
            3,
            |q| q * (q - 1).pow(3),
        ));
    }

    // degree q^3 and q^2 pair families; the last two are images of the first
    type Pair = (&'static str, &'static str, [u8; 2], fn() -> GraphAuto, [&'static str; 4]);
    let pairs: [Pair; 3] = [
        ("F8_9_q3", "F8_9_q2", [8, 9], id, ["a8", "a9", "a6", "a7"]),
        ("F8_10_q3", "F8_10_q2", [8, 10], tau2, ["a8", "a10", "a5", "a7"]),
        ("F9_10_q3", "F9_10_q2", [9, 10], tau, ["a9", "a10", "a5", "a6"]),
    ];
    let q2_params: [[&'static str; 5]; 3] = [
        ["a8", "a9", "b2", "b3", "b4"],
        ["a8", "a10", "b1", "b3", "b4"],
        ["a9", "a10", "b1", "b2", "b3"],
    ];
    // the b-parameters tied to each outer unit in the q^2 families
    let q2_terms: [[(&'static str, &'static str); 2]; 3] = [
        [("b2", "a8"), ("b4", "a9")],
        [("b1", "a8"), ("b4", "a10")],
        [("b1", "a9"), ("b2", "a10")],
    ];
    for (k, (n3, n2, subs, auto, [x, y, u, v])) in pairs.into_iter().enumerate() {
        let (params, cond) =
            two_term(p, vec![unit(x), unit(y), unit(u), unit(v)], &[(u, x), (v, y)]);
        out.push(family(n3, &subs, "q3", Pair89Q3, auto(), params, cond, 3, |q| (q - 1).pow(3)));
        let names = q2_params[k];
        let (params, cond) = two_term(
            p,
            vec![unit(names[0]), unit(names[1]), any(names[2]), any(names[3]), any(names[4])],
            &q2_terms[k],
        );
        out.push(family(n2, &subs, "q2", Pair89Q2, auto(), params, cond, 2, |q| {
            q * q * (q - 1).pow(2)
        }));
    }

    for (n3, n2, i, auto, tied, q2) in [
        ("F8_q3", "F8_q2", 8u8, id as fn() -> GraphAuto, "a7", ["b3", "b4"]),
        ("F9_q3", "F9_q2", 9, tau, "a6", ["b2", "b3"]),
        ("F10_q3", "F10_q2", 10, tau2, "a5", ["b1", "b3"]),
    ] {
        let a = match i {
            8 => "a8",
            9 => "a9",
            _ => "a10",
        };
        out.push(family(n3, &[i], "q3", Pair89Q3, auto(), vec![unit(a), unit(tied)], None, 3, |q| {
            (q - 1).pow(2)
        }));
        out.push(family(
            n2,
            &[i],
            "q2",
            Pair89Q2,
            auto(),
            vec![unit(a), any(q2[0]), any(q2[1])],
            None,
            2,
            |q| q * q * (q - 1),
        ));
    }

    if p == 3 {
        out.push(family(
            "F5_6_7",
            &[5, 6, 7],
            "",
            Star567,
            id(),
            vec![unit("a5"), unit("a6"), unit("a7"), any("b2"), any("b4")],
            None,
            1,
            |q| q * q * (q - 1).pow(3),
        ));
    } else {
        out.push(family(
            "F5_6_7",
            &[5, 6, 7],
            "",
            Star567,
            id(),
            vec![unit("a5"), unit("a6"), unit("a7"), any("b1"), any("b2"), any("b4")],
            sum(&[("b1", "a5"), ("b2", "a6"), ("b4", "a7")]),
            1,
            |q| q * q * (q - 1).pow(3),
        ));
    }
    for (name, subs, x, y, terms) in [
        ("F5_6", [5u8, 6], "a5", "a6", [("b1", "a5"), ("b2", "a6")]),
        ("F5_7", [5, 7], "a5", "a7", [("b4", "a7"), ("b1", "a5")]),
        ("F6_7", [6, 7], "a6", "a7", [("b2", "a6"), ("b4", "a7")]),
    ] {
        let (params, cond) =
            two_term(p, vec![unit(x), unit(y), any("b1"), any("b2"), any("b4")], &terms);
        out.push(family(name, &subs, "", Star567, id(), params, cond, 1, |q| {
            q * q * (q - 1).pow(2)
        }));
    }
    for (name, i, a, bs) in [
        ("F5", 5u8, "a5", ["b2", "b4"]),
        ("F6", 6, "a6", ["b1", "b4"]),
        ("F7", 7, "a7", ["b1", "b2"]),
    ] {
        out.push(family(
            name,
            &[i],
            "",
            Star567,
            id(),
            vec![unit(a), any(bs[0]), any(bs[1])],
            None,
            1,
            |q| q * q * (q - 1),
        ));
    }
    out.push(family(
        "Flin",
        &[],
        "",
        Lin,
        id(),
        vec![any("b1"), any("b2"), any("b3"), any("b4")],
        None,
        0,
        |q| q.pow(4),
    ));
    out
}

/// All character labels for a field, families in table order.
#[derive(Debug, Clone)]
pub struct CharList {
    pub families: Vec<CharFamily>,
    pub labels: Vec<CharLabel>,
    /// Start index of each family's block in `labels`, plus the total.
    pub offsets: Vec<usize>,
    resolved: Vec<Resolved>,
}

pub fn enumerate_chars(field: &Field) -> Result<CharList, CharError> {
    let families = char_families(field.p());
    let mut labels = Vec::new();
    let mut resolved = Vec::new();
    let mut offsets = Vec::with_capacity(families.len() + 1);
    for (i, f) in families.iter().enumerate() {
        offsets.push(labels.len());
        for params in f.shape.enumerate(field)? {
            resolved.push(Resolved::from_shape(&f.shape, &params));
            labels.push(CharLabel { family: i, params });
        }
    }
    offsets.push(labels.len());
    Ok(CharList { families, labels, offsets, resolved })
}

impl CharList {
    pub fn family_of(&self, l: &CharLabel) -> &CharFamily {
        &self.families[l.family]
    }

    /// Parameters of label number `i` by role.
    pub fn resolved(&self, i: usize) -> &Resolved {
        &self.resolved[i]
    }

    pub fn label(&self, l: &CharLabel) -> String {
        let f = self.family_of(l);
        format!("{}[{}]", f.name, f.shape.format_values(&l.params))
    }

    pub fn degree(&self, q: u128, l: &CharLabel) -> u128 {
        self.family_of(l).degree(q)
    }

    pub fn find_family(&self, name: &str) -> Option<usize> {
        self.families.iter().position(|f| f.name == name)
    }

    /// Parses `F11[a11=1,b5=0,b6=2,b7=0,b3=1]`.
    pub fn parse(&self, field: &Field, s: &str) -> Result<CharLabel, CharError> {
        let (name, inner) = split_label(s)?;
        let family = self.find_family(name).ok_or_else(|| CharError::UnknownFamily(name.into()))?;
        let params = self.families[family].shape.parse_values(field, inner)?;
        Ok(CharLabel { family, params })
    }

    pub fn position(&self, l: &CharLabel) -> Option<usize> {
        let range = self.offsets[l.family]..self.offsets[l.family + 1];
        range.into_iter().find(|&i| self.labels[i].params == l.params)
    }

    /// Value expression of label number `i`.
    pub fn value_expr_at(&self, field: &Field, i: usize, x: &UElement) -> Result<ValueExpr, CharError> {
        let l = &self.labels[i];
        eval_family(field, self.family_of(l), &self.resolved[i], x)
            .ok_or_else(|| self.not_covered(l, x))
    }

    pub fn value_expr(&self, field: &Field, l: &CharLabel, x: &UElement) -> Result<ValueExpr, CharError> {
        let f = self.family_of(l);
        let r = Resolved::from_shape(&f.shape, &l.params);
        eval_family(field, f, &r, x).ok_or_else(|| self.not_covered(l, x))
    }

    pub fn value(&self, field: &Field, l: &CharLabel, x: &UElement) -> Result<CycInt, CharError> {
        Ok(self.value_expr(field, l, x)?.evaluate(field))
    }

    fn not_covered(&self, l: &CharLabel, x: &UElement) -> CharError {
        CharError::NotCovered { label: self.label(l), elem: format_element(x) }
    }
}

/// Per family: name, enumerated count, count from the table polynomial.
pub fn char_family_counts(list: &CharList, q: u128) -> Vec<(String, u128, u128)> {
    list.families
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let n = (list.offsets[i + 1] - list.offsets[i]) as u128;
            (String::from(f.name), n, (f.count)(q))
        })
        .collect()
}

/// `τ`-style relabelling: the returned label's character is
/// `x ↦ χ(g^{-1} x)`.
pub fn transport_char(
    field: &Field,
    list: &CharList,
    g: &GraphAuto,
    l: &CharLabel,
) -> Result<CharLabel, CharError> {
    let f = list.family_of(l);
    let p = field.p();
    let identity = *g == GraphAuto::identity();
    if !identity && (p == 2 || (p == 3 && f.subs == [5, 6, 7])) {
        return Err(CharError::Unstable(String::from(f.name), p));
    }
    let mut subs: Vec<u8> = f.subs.iter().map(|&s| g.image(s as usize) as u8).collect();
    subs.sort_unstable();
    let target = list
        .families
        .iter()
        .position(|h| h.subs == subs && h.tag == f.tag)
        .ok_or_else(|| CharError::UnknownFamily(format!("{subs:?}")))?;
    let h = &list.families[target];
    let params = h
        .shape
        .params
        .iter()
        .map(|prm| {
            let i = name_index(prm.name).expect("transported families use indexed names");
            let src = String::from(&prm.name[..1]) + &format!("{}", g.preimage(i));
            f.shape
                .position(&src)
                .map(|k| l.params[k])
                .ok_or(CharError::Param(ParamError::Missing(src)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    h.shape.validate(field, &params)?;
    Ok(CharLabel { family: target, params })
}

fn eval_family(field: &Field, f: &CharFamily, r: &Resolved, x: &UElement) -> Option<ValueExpr> {
    if f.auto == GraphAuto::identity() {
        eval_base(field, f.formula, r, x)
    } else {
        let base = r.pulled_back(&f.auto);
        eval_base(field, f.formula, &base, &f.auto.inverse().apply(x))
    }
}

fn eval_base(field: &Field, formula: Formula, r: &Resolved, x: &UElement) -> Option<ValueExpr> {
    let e = Eval { f: field, q: field.q() as i128 };
    match formula {
        Formula::Lin => Some(e.lin(r, x)),
        Formula::Star567 => Some(e.star567(r, x)),
        Formula::Pair89Q3 => Some(e.pair_q3(r, x)),
        Formula::Pair89Q2 => Some(e.pair_q2(r, x)),
        Formula::Triple => e.with_autos(r, x, Eval::triple),
        Formula::TripleQ3 => Some(e.triple_q3(r, x)),
        Formula::TripleHalf => Some(e.triple_half(r, x)),
        Formula::F11 => e.with_autos(r, x, Eval::f11),
        Formula::F12 => e.with_autos(r, x, Eval::f12),
    }
}

struct Eval<'f> {
    f: &'f Field,
    q: i128,
}

impl Eval<'_> {
    fn add(&self, xs: &[Fq]) -> Fq {
        xs.iter().fold(Fq::ZERO, |acc, &x| self.f.add(acc, x))
    }

    fn m(&self, x: Fq, y: Fq) -> Fq {
        self.f.mul(x, y)
    }

    fn div(&self, x: Fq, y: Fq) -> Fq {
        self.f.div(x, y).expect("nonzero divisor")
    }

    /// `Σ c_i t_i` over the listed indices.
    fn dot(&self, c: &[Fq; 13], x: &UElement, idx: &[usize]) -> Fq {
        idx.iter().fold(Fq::ZERO, |acc, &i| self.f.add(acc, self.f.mul(c[i], x.t(i))))
    }

    fn zero(x: &UElement, idx: &[usize]) -> bool {
        idx.iter().all(|&i| x.t(i).is_zero())
    }

    fn val(&self, scale: i128, phase: Fq) -> ValueExpr {
        ValueExpr::new(scale, phase, SumTerm::One)
    }

    /// Tries the formula on `x` and on its images under the graph
    /// automorphisms, using `χ(x) = (χ ∘ g)(g^{-1} x)`.
    fn with_autos(
        &self,
        r: &Resolved,
        x: &UElement,
        direct: fn(&Self, &Resolved, &UElement) -> Option<ValueExpr>,
    ) -> Option<ValueExpr> {
        if let Some(v) = direct(self, r, x) {
            return Some(v);
        }
        for g in GraphAuto::all().iter().skip(1) {
            let y = g.inverse().apply(x);
            if let Some(v) = direct(self, &r.pulled_back(g), &y) {
                return Some(v);
            }
        }
        None
    }

    fn lin(&self, r: &Resolved, x: &UElement) -> ValueExpr {
        self.val(1, self.dot(&r.b, x, &[1, 2, 3, 4]))
    }

    fn star567(&self, r: &Resolved, x: &UElement) -> ValueExpr {
        let a = &r.a;
        let tied = self.add(&[self.m(a[5], x.t(1)), self.m(a[6], x.t(2)), self.m(a[7], x.t(4))]);
        if !x.t(3).is_zero() || !tied.is_zero() {
            return ValueExpr::ZERO;
        }
        let phase = self.f.add(self.dot(&r.b, x, &[1, 2, 4]), self.dot(&r.a, x, &[5, 6, 7]));
        self.val(self.q, phase)
    }

    fn pair_q3(&self, r: &Resolved, x: &UElement) -> ValueExpr {
        let a = &r.a;
        let tied = self.add(&[self.m(a[8], x.t(6)), self.m(a[9], x.t(7))]);
        if !Self::zero(x, &[1, 2, 3, 4, 5]) || !tied.is_zero() {
            return ValueExpr::ZERO;
        }
        self.val(self.q.pow(3), self.dot(a, x, &[6, 7, 8, 9]))
    }

    fn pair_q2(&self, r: &Resolved, x: &UElement) -> ValueExpr {
        let (a, b) = (&r.a, &r.b);
        let l24 = self.add(&[self.m(a[8], x.t(2)), self.m(a[9], x.t(4))]);
        let l67 = self.add(&[self.m(a[8], x.t(6)), self.m(a[9], x.t(7))]);
        let base = self.add(&[self.dot(b, x, &[2, 3, 4]), self.dot(a, x, &[8, 9])]);
        if x.t(3).is_zero() {
            if !Self::zero(x, &[1, 5]) || !l24.is_zero() || !l67.is_zero() {
                return ValueExpr::ZERO;
            }
            self.val(self.q * self.q, base)
        } else {
            if !x.t(1).is_zero() || !l24.is_zero() {
                return ValueExpr::ZERO;
            }
            let corr = self.f.sub(l24, self.div(l67, x.t(3)));
            self.val(self.q, self.f.add(base, self.m(x.t(5), corr)))
        }
    }

    fn triple(&self, r: &Resolved, x: &UElement) -> Option<ValueExpr> {
        let a = &r.a;
        if !Self::zero(x, &[1, 2, 4]) {
            return Some(ValueExpr::ZERO);
        }
        let centre = self.dot(a, x, &[8, 9, 10]);
        if x.t(3).is_zero() {
            if !Self::zero(x, &[5, 6, 7]) {
                return Some(ValueExpr::ZERO);
            }
            return Some(self.val(self.q.pow(3), centre));
        }
        if !Self::zero(x, &[5, 6, 7]) {
            return None;
        }
        let c = self.f.neg(self.f.mul_all(&[a[8], a[9], a[10], x.t(3)]));
        let phase = self.f.add(self.m(r.b[3], x.t(3)), centre);
        Some(ValueExpr::new(self.q, phase, SumTerm::Gauss(c)))
    }

    fn triple_q3(&self, r: &Resolved, x: &UElement) -> ValueExpr {
        let a = &r.a;
        let l57 = self.add(&[self.m(a[8], x.t(5)), self.m(a[10], x.t(7))]);
        let l67 = self.add(&[self.m(a[8], x.t(6)), self.m(a[9], x.t(7))]);
        if !Self::zero(x, &[1, 2, 3, 4]) || !l57.is_zero() || !l67.is_zero() {
            return ValueExpr::ZERO;
        }
        self.val(self.q.pow(3), self.dot(a, x, &[8, 9, 10]))
    }

    fn triple_half(&self, r: &Resolved, x: &UElement) -> ValueExpr {
        let f = self.f;
        let a = &r.a;
        let s = r.a567;
        let c = f.mul_all(&[a[8], a[9], a[10]]);
        let (t1, t2, t4) = (x.t(1), x.t(2), x.t(4));
        let flip = if Self::zero(x, &[1, 2, 4]) {
            false
        } else if (t1, t2, t4) == (self.m(a[10], s), self.m(a[9], s), self.m(a[8], s)) {
            r.d124 == Fq::ONE
        } else {
            return ValueExpr::ZERO;
        };
        let sign = if flip { -1 } else { 1 };
        let centre = self.dot(a, x, &[8, 9, 10]);
        if x.t(3).is_zero() {
            let t = self.div(x.t(5), a[10]);
            if x.t(6) != self.m(a[9], t) || x.t(7) != self.m(a[8], t) {
                return ValueExpr::ZERO;
            }
            let phase = f.add(f.mul_all(&[c, s, t]), centre);
            return self.val(sign * self.q.pow(3) / 2, phase);
        }
        let a_phi = f.a_phi(s).expect("unit");
        if x.t(3) != self.div(a_phi, c) {
            return ValueExpr::ZERO;
        }
        let t7a8 = self.div(x.t(7), a[8]);
        let u = f.add(self.div(x.t(5), a[10]), t7a8);
        let v = f.add(self.div(x.t(6), a[9]), t7a8);
        let quad = f.mul_all(&[self.div(self.m(c, c), a_phi), u, v]);
        // c t3 / a_phi = 1 on the support; φ(1) = -1 when [F_q : F_2] is odd
        let shift = self.div(self.m(c, x.t(3)), a_phi);
        let phase =
            self.add(&[shift, self.m(r.d3, x.t(3)), f.mul_all(&[c, s, t7a8]), quad, centre]);
        self.val(sign * self.q * self.q / 2, phase)
    }

    fn f11(&self, r: &Resolved, x: &UElement) -> Option<ValueExpr> {
        let f = self.f;
        let (a11, b) = (r.a[11], &r.b);
        let t = |i| x.t(i);
        if !Self::zero(x, &[1, 2, 4]) {
            return Some(ValueExpr::ZERO);
        }
        let centre = self.m(a11, t(11));
        if !t(3).is_zero() {
            if !Self::zero(x, &[5, 6, 7]) {
                return None;
            }
            let aa = f.add(self.m(b[5], t(3)), self.m(a11, t(10)));
            let bb = f.add(self.m(b[6], t(3)), self.m(a11, t(9)));
            let cc = f.add(self.m(b[7], t(3)), self.m(a11, t(8)));
            let kb = self.div(self.m(bb, cc), self.m(a11, t(3)));
            let phase = f.add(self.m(b[3], t(3)), centre);
            let plus_q = bb.is_zero() && cc.is_zero();
            return Some(ValueExpr::new(
                self.q,
                phase,
                SumTerm::Kloosterman { a: f.neg(aa), b: kb, plus_q },
            ));
        }
        if Self::zero(x, &[5, 6, 7]) {
            if !Self::zero(x, &[8, 9, 10]) {
                return Some(ValueExpr::ZERO);
            }
            return Some(self.val(self.q.pow(3), centre));
        }
        let lin567 = f.add(self.dot(b, x, &[5, 6, 7]), centre);
        if !t(5).is_zero() && !t(6).is_zero() && !t(7).is_zero() {
            let prod = f.mul_all(&[a11, t(5), t(6), t(7)]);
            if f.p() == 2 {
                if !Self::zero(x, &[8, 9]) {
                    return None;
                }
                let beta = f.mul_all(&[a11, t(5), t(10)]);
                return Some(ValueExpr::new(
                    self.q,
                    lin567,
                    SumTerm::QuadLinear { alpha: prod, beta },
                ));
            }
            if !Self::zero(x, &[8, 9, 10]) {
                return None;
            }
            return Some(ValueExpr::new(self.q, lin567, SumTerm::Gauss(f.neg(prod))));
        }
        if !t(5).is_zero() && t(7).is_zero() && t(8).is_zero() {
            if self.m(t(6), t(9)) != self.m(t(5), t(10)) {
                return Some(ValueExpr::ZERO);
            }
            return Some(self.val(self.q * self.q, lin567));
        }
        None
    }

    fn f12(&self, r: &Resolved, x: &UElement) -> Option<ValueExpr> {
        let f = self.f;
        let a12 = r.a[12];
        let t = |i| x.t(i);
        if !t(3).is_zero() {
            return Some(ValueExpr::ZERO);
        }
        let centre = self.m(a12, t(12));
        if Self::zero(x, &[1, 2, 4]) {
            if !Self::zero(x, &[5, 6, 7, 8, 9, 10, 11]) {
                return Some(ValueExpr::ZERO);
            }
            return Some(self.val(self.q.pow(4), centre));
        }
        if !Self::zero(x, &[5, 6, 7]) {
            // conjugating by x_3(s) moves (t5, t6, t7) along (t1, t2, t4)
            let k = [1, 2, 4].into_iter().find(|&i| !t(i).is_zero()).unwrap();
            let s = f.neg(self.div(t(pair567(k)), t(k)));
            let hits = [1, 2, 4]
                .into_iter()
                .all(|i| f.add(t(pair567(i)), self.m(s, t(i))).is_zero());
            if !hits {
                return Some(ValueExpr::ZERO);
            }
            return None;
        }
        let lin = f.add(self.dot(&r.b, x, &[1, 2, 4]), centre);
        if !t(1).is_zero() && !t(2).is_zero() && !t(4).is_zero() {
            if !Self::zero(x, &[8, 9, 11]) {
                return None;
            }
            let prod = f.mul_all(&[a12, t(1), t(2), t(4)]);
            if f.p() == 2 {
                let beta = f.mul_all(&[a12, t(1), t(10)]);
                return Some(ValueExpr::new(self.q, lin, SumTerm::QuadLinear { alpha: prod, beta }));
            }
            if !t(10).is_zero() {
                return None;
            }
            return Some(ValueExpr::new(self.q, lin, SumTerm::Gauss(f.neg(prod))));
        }
        if !t(1).is_zero() && t(4).is_zero() && t(8).is_zero() && t(11).is_zero() {
            if self.m(t(1), t(10)) != self.m(t(2), t(9)) {
                return Some(ValueExpr::ZERO);
            }
            return Some(self.val(self.q * self.q, lin));
        }
        None
    }
}

/// The coordinate among 5, 6, 7 that `x_3` conjugation attaches to 1, 2, 4.
fn pair567(i: usize) -> usize {
    match i {
        1 => 5,
        2 => 6,
        _ => 7,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::enumerate_class_reps;

    fn total_degree_squares(field: &Field, list: &CharList) -> u128 {
        let q = field.q() as u128;
        list.labels.iter().map(|l| list.degree(q, l).pow(2)).sum()
    }

    #[test]
    fn family_counts_and_degrees() {
        for (p, a) in [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2), (7, 1)] {
            let f = Field::new(p, a, None).unwrap();
            let q = f.q() as u128;
            let list = enumerate_chars(&f).unwrap();
            for (name, got, want) in char_family_counts(&list, q) {
                assert_eq!(got, want, "{name} at q = {q}");
            }
            assert_eq!(total_degree_squares(&f, &list), q.pow(12));
            let classes = enumerate_class_reps(&f).unwrap();
            assert_eq!(list.labels.len(), classes.reps.len());
        }
    }

    #[test]
    fn degree_is_value_at_identity() {
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            let list = enumerate_chars(&f).unwrap();
            for (i, l) in list.labels.iter().enumerate() {
                let v = list.value_expr_at(&f, i, &UElement::IDENTITY).unwrap().evaluate(&f);
                assert_eq!(v, CycInt::from_int(p, list.degree(p as u128, l) as i128));
            }
        }
    }

    #[test]
    fn label_round_trip() {
        let f = Field::prime(3).unwrap();
        let list = enumerate_chars(&f).unwrap();
        for l in list.labels.iter().step_by(37) {
            let s = list.label(l);
            assert_eq!(&list.parse(&f, &s).unwrap(), l);
        }
        assert!(list.parse(&f, "F11[a11=0,b5=0,b6=2,b7=0,b3=1]").is_err());
        assert!(list.parse(&f, "F13[a11=1]").is_err());
    }

    #[test]
    fn triple_example_at_q3() {
        let f = Field::prime(3).unwrap();
        let list = enumerate_chars(&f).unwrap();
        let l = list.parse(&f, "F8_9_10[a8=1,a9=1,a10=1,b3=1]").unwrap();
        let x = crate::group::Group::new(&f).parse("x3(1)").unwrap();
        let v = list.value(&f, &l, &x).unwrap();
        let g = gauss_quadratic(&f, Fq(2));
        assert_eq!(v, g.mul_zeta(1).scale(3).unwrap());
    }
}
