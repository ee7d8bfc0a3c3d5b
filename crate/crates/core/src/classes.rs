//! Families of conjugacy-class representatives of `U(q)`, including the
//! replacement families for `p = 2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::ffield::{Field, Fq};
use crate::group::{GraphAuto, UElement};
use crate::params::{any, name_index, nonimage, split_label, sum, tuple, unit, ParamError, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("unknown class family `{0}`")]
    UnknownFamily(String),
    #[error("family {0} is not stable under the automorphism for p = {1}")]
    Unstable(String, u32),
    #[error("transported element {0} does not match a representative of {1}")]
    TemplateMismatch(String, String),
}

/// One row block of the class table.
#[derive(Debug, Clone)]
pub struct ClassFamily {
    /// Subscript set, e.g. `[1, 2, 4]`.
    pub subs: Vec<u8>,
    /// Centralizer tag such as `q^6`, empty when the subscripts suffice.
    pub tag: &'static str,
    /// One of the families that only exist for `p = 2`.
    pub p2: bool,
    pub shape: Shape,
    /// Centralizer order `q^k`, doubled for the two-value `p = 2` families.
    pub centralizer_exp: u32,
    pub doubled: bool,
    /// Number of representatives as a function of `q`.
    pub count: fn(u128) -> u128,
}

impl ClassFamily {
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.subs.iter().map(|s| format!("{s}")).collect();
        if !self.tag.is_empty() {
            parts.push(String::from(self.tag));
        }
        let sup = if self.p2 { "^{p=2}" } else { "" };
        format!("C{sup}_{{{}}}", parts.join(","))
    }

    pub fn centralizer_order(&self, q: u128) -> u128 {
        let c = q.pow(self.centralizer_exp);
        if self.doubled {
            2 * c
        } else {
            c
        }
    }

    pub fn class_size(&self, q: u128) -> u128 {
        q.pow(12) / self.centralizer_order(q)
    }

    /// The representative `Π x_i(param_i)` in normal form.
    pub fn representative(&self, values: &[Fq]) -> UElement {
        let mut x = UElement::IDENTITY;
        for (p, &v) in self.shape.params.iter().zip(values) {
            x.set(name_index(p.name).expect("class parameters name coordinates"), v);
        }
        x
    }
}

/// A single representative together with its family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassRep {
    pub family: usize,
    pub params: Vec<Fq>,
    pub rep: UElement,
}

fn fam(
    subs: &[u8],
    tag: &'static str,
    params: Vec<crate::params::Param>,
    condition: Option<crate::params::SumCondition>,
    centralizer_exp: u32,
    count: fn(u128) -> u128,
) -> ClassFamily {
    ClassFamily {
        subs: subs.to_vec(),
        tag,
        p2: false,
        shape: Shape { params, condition },
        centralizer_exp,
        doubled: false,
        count,
    }
}

/// Two-term condition for `p > 2`; for `p = 2` the solved parameter is
/// dropped (set to zero) instead.
fn two_term(
    p: u32,
    mut params: Vec<crate::params::Param>,
    terms: &[(&'static str, &'static str)],
) -> (Vec<crate::params::Param>, Option<crate::params::SumCondition>) {
    if p == 2 {
        params.retain(|x| x.name != terms[0].0);
        (params, None)
    } else {
        (params, sum(terms))
    }
}

/// The families for characteristic `p`, in table order.
pub fn class_families(p: u32) -> Vec<ClassFamily> {
    let mut out = Vec::new();
    if p == 2 {
        let mut f = fam(
            &[1, 2, 3, 4],
            "",
            vec![
                unit("a3"),
                unit("a1"),
                unit("a2"),
                unit("a4"),
                nonimage("d10", &["a3", "a2", "a4"], &["a3", "a2", "a4"]),
            ],
            None,
            4,
            |q| 2 * (q - 1).pow(4),
        );
        f.p2 = true;
        f.doubled = true;
        out.push(f);
    } else {
        out.push(fam(
            &[1, 2, 3, 4],
            "",
            vec![unit("a3"), unit("a1"), unit("a2"), unit("a4")],
            None,
            4,
            |q| (q - 1).pow(4),
        ));
    }

    for (subs, a, b, c, d) in [
        ([1u8, 2, 3], "a1", "a2", "b9", "b10"),
        ([1, 3, 4], "a1", "a4", "b8", "b10"),
        ([2, 3, 4], "a2", "a4", "b8", "b9"),
    ] {
        let (params, cond) =
            two_term(p, vec![unit("a3"), unit(a), unit(b), any(c), any(d)], &[(c, a), (d, b)]);
        out.push(fam(&subs, "", params, cond, 5, |q| (q - 1).pow(3) * q));
    }

    for (subs, a, b) in [([1u8, 3], "a1", "b10"), ([2, 3], "a2", "b9"), ([3, 4], "a4", "b8")] {
        let params = vec![unit("a3"), unit(a), any(b)];
        out.push(fam(&subs, "", params, None, 5, |q| (q - 1).pow(2) * q));
    }

    if p > 3 {
        out.push(fam(
            &[1, 2, 4],
            "q^6",
            vec![unit("a1"), unit("a2"), unit("a4"), tuple("c5"), tuple("c6"), tuple("c7")],
            sum(&[("c5", "a1"), ("c6", "a2"), ("c7", "a4")]),
            6,
            |q| (q - 1).pow(3) * (q * q - 1),
        ));
    } else {
        out.push(fam(
            &[1, 2, 4],
            "q^6",
            vec![unit("a1"), unit("a2"), unit("a4"), tuple("c6"), tuple("c7")],
            None,
            6,
            |q| (q - 1).pow(3) * (q * q - 1),
        ));
    }
    if p == 2 {
        let mut f = fam(
            &[1, 2, 4],
            "2q^7",
            vec![
                unit("a1"),
                unit("a2"),
                unit("a4"),
                unit("a10"),
                nonimage("d12", &["a1", "a2", "a4"], &["a1", "a10"]),
            ],
            None,
            7,
            |q| 2 * (q - 1).pow(4),
        );
        f.p2 = true;
        f.doubled = true;
        out.push(f);
        let mut f = fam(&[1, 2, 4], "q^7", vec![unit("a1"), unit("a2"), unit("a4")], None, 7, |q| {
            (q - 1).pow(3)
        });
        f.p2 = true;
        out.push(f);
    } else {
        out.push(fam(
            &[1, 2, 4],
            "q^7",
            vec![unit("a1"), unit("a2"), unit("a4"), any("b12")],
            None,
            7,
            |q| (q - 1).pow(3) * q,
        ));
    }

    // pairs of outer nodes: (i, j, the c-coordinate tied to i, to j, the
    // remaining c, the q^7 coordinates tied to i and j)
    for (i, j, ci, cj, c_other, ai, aj) in [
        ("a1", "a2", "c5", "c6", "c7", "a9", "a10"),
        ("a1", "a4", "c5", "c7", "c6", "a8", "a10"),
        ("a2", "a4", "c6", "c7", "c5", "a8", "a9"),
    ] {
        let subs = [name_index(i).unwrap() as u8, name_index(j).unwrap() as u8];
        let mut cs = [ci, cj, c_other];
        cs.sort_by_key(|c| name_index(c));
        let (params, cond) = two_term(
            p,
            vec![unit(i), unit(j), tuple(cs[0]), tuple(cs[1]), tuple(cs[2])],
            &[(ci, i), (cj, j)],
        );
        out.push(fam(&subs, "q^6", params, cond, 6, |q| (q - 1).pow(2) * (q * q - 1)));
        let (params, cond) =
            two_term(p, vec![unit(i), unit(j), unit(ai), unit(aj)], &[(ai, i), (aj, j)]);
        out.push(fam(&subs, "q^7", params, cond, 7, |q| (q - 1).pow(3)));
        out.push(fam(&subs, "q^8", vec![unit(i), unit(j), any("b12")], None, 8, |q| {
            (q - 1).pow(2) * q
        }));
    }

    for (i, c1, c2, a) in [
        ("a1", "c6", "c7", "a10"),
        ("a2", "c5", "c7", "a9"),
        ("a4", "c5", "c6", "a8"),
    ] {
        let subs = [name_index(i).unwrap() as u8];
        out.push(fam(&subs, "q^6", vec![unit(i), tuple(c1), tuple(c2)], None, 6, |q| {
            (q - 1) * (q * q - 1)
        }));
        out.push(fam(&subs, "q^7", vec![unit(i), unit(a)], None, 7, |q| (q - 1).pow(2)));
        out.push(fam(&subs, "q^8", vec![unit(i), any("b12")], None, 8, |q| (q - 1) * q));
    }

    out.push(fam(
        &[3],
        "",
        vec![unit("a3"), any("b8"), any("b9"), any("b10"), any("b11")],
        None,
        8,
        |q| (q - 1) * q.pow(4),
    ));

    if p == 2 {
        let mut f = fam(
            &[5, 6, 7],
            "2q^8",
            vec![
                unit("a5"),
                unit("a6"),
                unit("a7"),
                unit("a10"),
                nonimage("d11", &["a5", "a6", "a7"], &["a5", "a10"]),
            ],
            None,
            8,
            |q| 2 * (q - 1).pow(4),
        );
        f.p2 = true;
        f.doubled = true;
        out.push(f);
        let mut f = fam(&[5, 6, 7], "q^8", vec![unit("a5"), unit("a6"), unit("a7")], None, 8, |q| {
            (q - 1).pow(3)
        });
        f.p2 = true;
        out.push(f);
    } else {
        out.push(fam(
            &[5, 6, 7],
            "",
            vec![unit("a5"), unit("a6"), unit("a7"), any("b11")],
            None,
            8,
            |q| (q - 1).pow(3) * q,
        ));
    }

    for (i, j, ai, aj) in [
        ("a5", "a6", "a9", "a10"),
        ("a5", "a7", "a8", "a10"),
        ("a6", "a7", "a8", "a9"),
    ] {
        let subs = [name_index(i).unwrap() as u8, name_index(j).unwrap() as u8];
        let (params, cond) =
            two_term(p, vec![unit(i), unit(j), unit(ai), unit(aj)], &[(ai, i), (aj, j)]);
        out.push(fam(&subs, "q^8", params, cond, 8, |q| (q - 1).pow(3)));
        out.push(fam(&subs, "q^9", vec![unit(i), unit(j), any("b11")], None, 9, |q| {
            (q - 1).pow(2) * q
        }));
    }

    for (i, a) in [("a5", "a10"), ("a6", "a9"), ("a7", "a8")] {
        let subs = [name_index(i).unwrap() as u8];
        out.push(fam(&subs, "q^8", vec![unit(i), unit(a)], None, 8, |q| (q - 1).pow(2)));
        out.push(fam(&subs, "q^9", vec![unit(i), any("b11")], None, 9, |q| (q - 1) * q));
    }

    out.push(fam(
        &[8, 9, 10],
        "",
        vec![tuple("c8"), tuple("c9"), tuple("c10")],
        None,
        10,
        |q| q.pow(3) - 1,
    ));
    out.push(fam(&[11], "", vec![unit("a11")], None, 11, |q| q - 1));
    out.push(fam(&[12], "", vec![any("b12")], None, 12, |q| q));
    out
}

/// All class representatives for a field, families in table order.
#[derive(Debug, Clone)]
pub struct ClassList {
    pub families: Vec<ClassFamily>,
    pub reps: Vec<ClassRep>,
    /// Start index of each family's block in `reps`, plus the total.
    pub offsets: Vec<usize>,
}

impl ClassList {
    pub fn family_of(&self, r: &ClassRep) -> &ClassFamily {
        &self.families[r.family]
    }

    pub fn label(&self, r: &ClassRep) -> String {
        let f = self.family_of(r);
        format!("{}[{}]", f.label(), f.shape.format_values(&r.params))
    }

    pub fn class_size(&self, q: u128, r: &ClassRep) -> u128 {
        self.family_of(r).class_size(q)
    }

    pub fn centralizer_order(&self, q: u128, r: &ClassRep) -> u128 {
        self.family_of(r).centralizer_order(q)
    }

    pub fn find_family(&self, label: &str) -> Option<usize> {
        self.families.iter().position(|f| f.label() == label)
    }

    /// Parses `C_{1,2,3}[a3=1,a1=1,a2=1,b9=1,b10=2]`.
    pub fn parse(&self, field: &Field, s: &str) -> Result<ClassRep, ClassError> {
        let (name, inner) = split_label(s)?;
        let family = self.find_family(name).ok_or_else(|| ClassError::UnknownFamily(name.into()))?;
        let f = &self.families[family];
        let params = f.shape.parse_values(field, inner)?;
        let rep = f.representative(&params);
        Ok(ClassRep { family, params, rep })
    }

    /// Index of the representative with exactly these coordinates.
    pub fn position(&self, rep: &UElement) -> Option<usize> {
        self.reps.iter().position(|r| r.rep == *rep)
    }
}

pub fn enumerate_class_reps(field: &Field) -> Result<ClassList, ClassError> {
    let families = class_families(field.p());
    let mut reps = Vec::new();
    let mut offsets = Vec::with_capacity(families.len() + 1);
    for (i, f) in families.iter().enumerate() {
        offsets.push(reps.len());
        for params in f.shape.enumerate(field)? {
            let rep = f.representative(&params);
            reps.push(ClassRep { family: i, params, rep });
        }
    }
    offsets.push(reps.len());
    Ok(ClassList { families, reps, offsets })
}

/// Per family: label, enumerated count, count from the table polynomial.
pub fn family_counts(list: &ClassList, q: u128) -> Vec<(String, u128, u128)> {
    list.families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.label(), (list.offsets[i + 1] - list.offsets[i]) as u128, (f.count)(q)))
        .collect()
}

/// `Σ |class| = q^12`, with the offending families reported on failure.
pub fn class_equation_check(list: &ClassList, q: u128) -> Result<(), String> {
    let bad: Vec<String> = family_counts(list, q)
        .into_iter()
        .filter(|(_, got, want)| got != want)
        .map(|(l, got, want)| format!("{l}: {got} reps, expected {want}"))
        .collect();
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    let total: u128 = list.reps.iter().map(|r| list.class_size(q, r)).sum();
    if total != q.pow(12) {
        return Err(format!("class sizes sum to {total}, expected {}", q.pow(12)));
    }
    Ok(())
}

/// Image of a representative under a graph automorphism, read as a
/// representative of the family with permuted subscripts.
pub fn transport_class(
    field: &Field,
    list: &ClassList,
    g: &GraphAuto,
    r: &ClassRep,
) -> Result<ClassRep, ClassError> {
    let f = list.family_of(r);
    let p = field.p();
    let is_identity = *g == GraphAuto::identity();
    if !is_identity && (p == 2 || (p == 3 && f.subs == [1, 2, 4] && f.tag == "q^6")) {
        return Err(ClassError::Unstable(f.label(), p));
    }
    let mut subs: Vec<u8> = f.subs.iter().map(|&s| g.image(s as usize) as u8).collect();
    subs.sort_unstable();
    let target = list
        .families
        .iter()
        .position(|h| h.subs == subs && h.tag == f.tag && h.p2 == f.p2)
        .ok_or_else(|| ClassError::UnknownFamily(format!("{subs:?}")))?;
    let h = &list.families[target];
    let image = g.apply(&r.rep);
    let params: Vec<Fq> = h
        .shape
        .params
        .iter()
        .map(|prm| image.t(name_index(prm.name).unwrap()))
        .collect();
    let mismatch = || {
        ClassError::TemplateMismatch(crate::group::format_element(&image), h.label())
    };
    if h.representative(&params) != image {
        return Err(mismatch());
    }
    h.shape.validate(field, &params).map_err(|_| mismatch())?;
    Ok(ClassRep { family: target, params, rep: image })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_polynomials() {
        for (p, a) in [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2), (7, 1)] {
            let f = Field::new(p, a, None).unwrap();
            let list = enumerate_class_reps(&f).unwrap();
            class_equation_check(&list, f.q() as u128).unwrap();
        }
    }

    #[test]
    fn table_examples() {
        let f = Field::prime(3).unwrap();
        let list = enumerate_class_reps(&f).unwrap();
        let counts = family_counts(&list, 3);
        let get = |l: &str| counts.iter().find(|c| c.0 == l).unwrap().1;
        assert_eq!(get("C_{12}"), 3);
        assert_eq!(get("C_{1,2,3,4}"), 16);
        assert_eq!(get("C_{3}"), 162);
        assert_eq!(list.reps.len(), 753);
        let r = list.parse(&f, "C_{1,2,3}[a3=1,a1=1,a2=1,b9=1,b10=2]").unwrap();
        assert_eq!(list.centralizer_order(3, &r), 3u128.pow(5));
        assert!(list.parse(&f, "C_{1,2,3}[a3=1,a1=1,a2=1,b9=1,b10=1]").is_err());

        let f2 = Field::prime(2).unwrap();
        let list2 = enumerate_class_reps(&f2).unwrap();
        let counts = family_counts(&list2, 2);
        let c = counts.iter().find(|c| c.0 == "C^{p=2}_{1,2,3,4}").unwrap();
        assert_eq!(c.1, 2);
        let i = list2.find_family("C^{p=2}_{1,2,3,4}").unwrap();
        assert_eq!(list2.families[i].centralizer_order(2), 32);
        assert_eq!(counts.iter().find(|c| c.0 == "C_{8,9,10}").unwrap().1, 7);
    }

    #[test]
    fn transport_permutes_families() {
        let f = Field::prime(5).unwrap();
        let list = enumerate_class_reps(&f).unwrap();
        for g in GraphAuto::all() {
            let mut seen = vec![false; list.reps.len()];
            for r in &list.reps {
                let t = transport_class(&f, &list, &g, r).unwrap();
                let j = list.position(&t.rep).unwrap();
                assert!(!seen[j]);
                seen[j] = true;
            }
        }
        let s12 = GraphAuto::sigma12();
        let i = list.find_family("C_{1,q^7}").unwrap();
        let r = &list.reps[list.offsets[i]];
        let t = transport_class(&f, &list, &s12, r).unwrap();
        assert_eq!(list.families[t.family].label(), "C_{2,q^7}");
    }

    #[test]
    fn p2_families_are_not_transported() {
        let f = Field::prime(2).unwrap();
        let list = enumerate_class_reps(&f).unwrap();
        let r = &list.reps[0];
        assert!(transport_class(&f, &list, &GraphAuto::tau(), r).is_err());
        assert!(transport_class(&f, &list, &GraphAuto::identity(), r).is_ok());
    }
}
