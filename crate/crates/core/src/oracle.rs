//! Brute-force certification for small `q`.
//!
//! Classes are recomputed by union-find over all of `U(q)`, and every
//! character is rebuilt by induction from a linear character of a subgroup
//! of a quotient `U/M_i`, independently of the closed value formulas.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use num_bigint::BigInt;

use crate::characters::{CharList, Formula};
use crate::classes::ClassList;
use crate::cyclotomic::{CycAccumulator, CycError, CycInt, CycRational};
use crate::ffield::{Field, Fq};
use crate::group::{format_element, GraphAuto, Group, UElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group of order {0} is too large for exhaustive search")]
    TooLarge(u128),
    #[error("subgroup for {0} is not closed: {1}")]
    NotClosed(String, String),
    #[error("character of {0} is not a homomorphism: {1}")]
    NotHomomorphism(String, String),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// Largest group searched exhaustively.
pub const MAX_BRUTE_ORDER: u128 = 1 << 20;

fn elem_index(q: usize, x: &UElement) -> usize {
    x.0.iter().rev().fold(0, |acc, t| acc * q + t.index())
}

fn elem_at(q: usize, mut n: usize) -> UElement {
    let mut x = UElement::IDENTITY;
    for i in 0..12 {
        x.0[i] = Fq((n % q) as u16);
        n /= q;
    }
    x
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let up = parent[parent[i as usize] as usize];
        parent[i as usize] = up;
        i = up;
    }
    i
}

/// Conjugacy class id of every element of `U(q)` (indexed base `q` with
/// `t_1` least significant) and the number of classes.
pub fn brute_force_classes(field: &Field) -> Result<(Vec<u32>, usize), OracleError> {
    let g = Group::new(field);
    let order = g.order();
    if order > MAX_BRUTE_ORDER {
        return Err(OracleError::TooLarge(order));
    }
    let q = field.q() as usize;
    let n = order as usize;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let basis = field.basis();
    for i in 0..n {
        let x = elem_at(q, i);
        for k in 1..=4 {
            for &e in &basis {
                let j = elem_index(q, &g.conj_by_root(&x, k, e));
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j as u32));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    let mut ids = vec![u32::MAX; n];
    let mut count = 0u32;
    let mut out = vec![0u32; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let r = find(&mut parent, i as u32) as usize;
        if ids[r] == u32::MAX {
            ids[r] = count;
            count += 1;
        }
        *slot = ids[r];
    }
    Ok((out, count as usize))
}

/// Compares a class list with the brute-force classes; returns problems.
pub fn certify_classes(field: &Field, list: &ClassList) -> Result<Vec<String>, OracleError> {
    let (ids, count) = brute_force_classes(field)?;
    let q = field.q() as usize;
    let mut sizes = vec![0u128; count];
    for &c in &ids {
        sizes[c as usize] += 1;
    }
    let mut problems = Vec::new();
    if count != list.reps.len() {
        problems.push(format!("{} classes, {} representatives", count, list.reps.len()));
    }
    let mut seen: Vec<Option<usize>> = vec![None; count];
    for (i, r) in list.reps.iter().enumerate() {
        let c = ids[elem_index(q, &r.rep)] as usize;
        if let Some(j) = seen[c] {
            problems.push(format!(
                "{} and {} are conjugate",
                list.label(&list.reps[j]),
                list.label(r)
            ));
        }
        seen[c] = Some(i);
        let want = list.class_size(q as u128, r);
        if sizes[c] != want {
            problems.push(format!("{}: class size {} not {}", list.label(r), sizes[c], want));
        }
    }
    Ok(problems)
}

/// A linear character of `V ≤ U/M_level`, optionally extended to
/// `V̄ = {1, y} V` by `λ̄(y) = -1` (flip) or `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inducing {
    /// Quotient by `M_level`; 13 means `U` itself.
    pub level: usize,
    pub v: Vec<usize>,
    /// `λ(v) = φ(Σ lambda[i] t_i)`.
    pub lambda: [Fq; 13],
    pub ybar: Option<(UElement, bool)>,
}

/// `χ(x) = Ind(λ)(auto^{-1} x) · φ(Σ tensor[i] t_i(auto^{-1} x))`.
#[derive(Debug, Clone)]
pub struct Construction {
    pub inducing: Inducing,
    pub tensor: [Fq; 5],
    pub auto: GraphAuto,
}

/// The inducing data for label number `i`.
pub fn construction(field: &Field, list: &CharList, i: usize) -> Construction {
    let fam = list.family_of(&list.labels[i]);
    let r = list.resolved(i).pulled_back(&fam.auto);
    let (a, b) = (&r.a, &r.b);
    let mut lambda = [Fq::ZERO; 13];
    let mut tensor = [Fq::ZERO; 5];
    let mut ybar = None;
    let (level, v): (usize, &[usize]) = match fam.formula {
        Formula::Lin => {
            tensor[1..5].copy_from_slice(&b[1..5]);
            (5, &[1, 2, 3, 4])
        }
        Formula::Star567 => {
            lambda[5..8].copy_from_slice(&a[5..8]);
            tensor = [Fq::ZERO, b[1], b[2], Fq::ZERO, b[4]];
            (8, &[1, 2, 4, 5, 6, 7])
        }
        Formula::Pair89Q3 => {
            lambda[6..10].copy_from_slice(&a[6..10]);
            (10, &[3, 5, 6, 7, 8, 9])
        }
        Formula::Pair89Q2 => {
            lambda[8..10].copy_from_slice(&a[8..10]);
            tensor = [Fq::ZERO, Fq::ZERO, b[2], b[3], b[4]];
            (10, &[2, 3, 4, 6, 7, 8, 9])
        }
        Formula::Triple | Formula::TripleQ3 => {
            lambda[8..11].copy_from_slice(&a[8..11]);
            tensor[3] = b[3];
            (11, &[3, 5, 6, 7, 8, 9, 10])
        }
        Formula::TripleHalf => {
            let s = r.a567;
            let m = |xs: &[Fq]| field.mul_all(xs);
            lambda[5] = m(&[a[8], a[9], s]);
            lambda[6] = m(&[a[8], a[10], s]);
            lambda[7] = m(&[a[9], a[10], s]);
            lambda[8..11].copy_from_slice(&a[8..11]);
            let mut y = UElement::IDENTITY;
            y.set(1, m(&[a[10], s]));
            y.set(2, m(&[a[9], s]));
            y.set(4, m(&[a[8], s]));
            ybar = Some((y, r.d124 == Fq::ONE));
            tensor[3] = r.d3;
            (11, &[3, 5, 6, 7, 8, 9, 10])
        }
        Formula::F11 => {
            lambda[5..8].copy_from_slice(&b[5..8]);
            lambda[11] = a[11];
            tensor[3] = b[3];
            (12, &[3, 5, 6, 7, 8, 9, 10, 11])
        }
        Formula::F12 => {
            lambda[12] = a[12];
            tensor = [Fq::ZERO, b[1], b[2], Fq::ZERO, b[4]];
            (13, &[1, 2, 4, 8, 9, 10, 11, 12])
        }
    };
    Construction {
        inducing: Inducing { level, v: v.to_vec(), lambda, ybar },
        tensor,
        auto: fam.auto.clone(),
    }
}

fn project(x: &mut UElement, level: usize) {
    for i in level..=12 {
        x.set(i, Fq::ZERO);
    }
}

/// Conjugacy classes of `U/M_level`, found on demand.
struct Quotient {
    level: usize,
    of: HashMap<UElement, u32>,
    orbits: Vec<Vec<UElement>>,
}

impl Quotient {
    fn class_of(&mut self, g: &Group, x: &UElement) -> u32 {
        if let Some(&c) = self.of.get(x) {
            return c;
        }
        let id = self.orbits.len() as u32;
        let basis = g.field().basis();
        let mut orbit = vec![*x];
        self.of.insert(*x, id);
        let mut next = 0;
        while next < orbit.len() {
            let y = orbit[next];
            next += 1;
            for k in 1..=4 {
                for &e in &basis {
                    let mut z = g.conj_by_root(&y, k, e);
                    project(&mut z, self.level);
                    if !self.of.contains_key(&z) {
                        self.of.insert(z, id);
                        orbit.push(z);
                    }
                }
            }
        }
        self.orbits.push(orbit);
        id
    }
}

/// Induced-character evaluator with caches shared across labels.
pub struct Oracle<'f> {
    field: &'f Field,
    group: Group<'f>,
    quotients: Vec<Quotient>,
    inducings: HashMap<Inducing, u32>,
    values: HashMap<(u32, u32), CycInt>,
}

impl<'f> Oracle<'f> {
    pub fn new(field: &'f Field) -> Oracle<'f> {
        let quotients = (0..=13)
            .map(|level| Quotient { level, of: HashMap::new(), orbits: Vec::new() })
            .collect();
        Oracle {
            field,
            group: Group::new(field),
            quotients,
            inducings: HashMap::new(),
            values: HashMap::new(),
        }
    }

    fn in_v(ind: &Inducing, x: &UElement) -> bool {
        (1..ind.level).all(|i| x.t(i).is_zero() || ind.v.contains(&i))
    }

    /// Exponent `e` with `λ̄(x) = ζ^e`, or `None` outside `V̄`.
    fn lambda_exp(&self, ind: &Inducing, x: &UElement) -> Option<u32> {
        let f = self.field;
        let lin = |z: &UElement| {
            let s = ind.v.iter().fold(Fq::ZERO, |acc, &i| f.add(acc, f.mul(ind.lambda[i], z.t(i))));
            f.trace(s)
        };
        if Self::in_v(ind, x) {
            return Some(lin(x));
        }
        let (y, flip) = ind.ybar?;
        let mut v = self.group.mul(&self.group.inv(&y), x);
        project(&mut v, ind.level);
        if !Self::in_v(ind, &v) {
            return None;
        }
        // only used for p = 2, where -1 = ζ
        Some((lin(&v) + flip as u32) % f.p())
    }

    fn order_exp(ind: &Inducing) -> (u32, u32) {
        ((ind.level - 1) as u32, ind.v.len() as u32)
    }

    /// `Ind(λ̄)(x)` for `x` already in `U/M_level`.
    fn induced(&mut self, ind: &Inducing, x: &UElement) -> Result<CycInt, OracleError> {
        let n = self.inducings.len() as u32;
        let id = *self.inducings.entry(ind.clone()).or_insert(n);
        let c = self.quotients[ind.level].class_of(&self.group, x);
        if let Some(v) = self.values.get(&(id, c)) {
            return Ok(v.clone());
        }
        let p = self.field.p();
        let mut counts = vec![0i128; p as usize];
        let orbit = &self.quotients[ind.level].orbits[c as usize];
        for y in orbit {
            if let Some(e) = self.lambda_exp(ind, y) {
                counts[e as usize] += 1;
            }
        }
        let q = self.field.q() as u128;
        let (qe, ve) = Self::order_exp(ind);
        let vbar = q.pow(ve) * if ind.ybar.is_some() { 2 } else { 1 };
        let sum = CycInt::from_exponent_counts(p, &counts);
        let v = sum.scale(q.pow(qe) as i128)?.div_exact(orbit.len() as u128 * vbar)?;
        self.values.insert((id, c), v.clone());
        Ok(v)
    }

    pub fn value(&mut self, c: &Construction, x: &UElement) -> Result<CycInt, OracleError> {
        let f = self.field;
        let z = c.auto.inverse().apply(x);
        let mut zq = z;
        project(&mut zq, c.inducing.level);
        let ind = self.induced(&c.inducing, &zq)?;
        let s = (1..=4).fold(Fq::ZERO, |acc, i| f.add(acc, f.mul(c.tensor[i], z.t(i))));
        Ok(ind.mul_zeta(f.trace(s) as i64))
    }

    /// Checks that `V̄` is closed and `λ̄` multiplicative, on all pairs when
    /// `|V̄|^2 <= 2^20` and on `samples` random pairs otherwise.
    pub fn check_inducing(&self, ind: &Inducing, samples: usize, seed: u64) -> Result<(), OracleError> {
        let f = self.field;
        let q = f.q() as usize;
        let p = f.p();
        let k = ind.v.len() as u32;
        let nv = q.pow(k);
        let nbar = if ind.ybar.is_some() { 2 * nv } else { nv };
        let elem = |mut n: usize| {
            let mut x = UElement::IDENTITY;
            for &i in &ind.v {
                x.set(i, Fq((n % q) as u16));
                n /= q;
            }
            if n == 1 {
                let (y, _) = ind.ybar.unwrap();
                let mut z = self.group.mul(&y, &x);
                project(&mut z, ind.level);
                z
            } else {
                x
            }
        };
        let name = || format!("level {} on {:?}", ind.level, ind.v);
        let check = |a: usize, b: usize| -> Result<(), OracleError> {
            let (x, y) = (elem(a), elem(b));
            let mut xy = self.group.mul(&x, &y);
            project(&mut xy, ind.level);
            let lx = self.lambda_exp(ind, &x).expect("generated inside");
            let ly = self.lambda_exp(ind, &y).expect("generated inside");
            let lxy = self
                .lambda_exp(ind, &xy)
                .ok_or_else(|| OracleError::NotClosed(name(), format_element(&xy)))?;
            if (lx + ly) % p != lxy {
                return Err(OracleError::NotHomomorphism(name(), format_element(&xy)));
            }
            Ok(())
        };
        if (nbar as u128).pow(2) <= MAX_BRUTE_ORDER {
            for a in 0..nbar {
                for b in 0..nbar {
                    check(a, b)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                check(rng.gen_range(0..nbar), rng.gen_range(0..nbar))?;
            }
        }
        Ok(())
    }
}

/// Outcome of comparing closed formulas with induced characters.
#[derive(Debug, Clone, Default)]
pub struct CharCertificate {
    pub cells: usize,
    pub inducings_checked: usize,
    /// First few disagreements, as readable lines.
    pub mismatches: Vec<String>,
    pub mismatch_count: usize,
    /// Labels whose induced character does not have norm 1.
    pub reducible: Vec<String>,
}

/// `(1/order) Σ_C |C| x_C conj(y_C)`, exactly.
pub fn inner_product(
    p: u32,
    order: u128,
    sizes: &[u128],
    x: &[CycInt],
    y: &[CycInt],
) -> Result<CycRational, OracleError> {
    let mut acc = CycAccumulator::new(p);
    for ((&w, a), b) in sizes.iter().zip(x).zip(y) {
        acc.add_product_conj(w as i128, a, b)?;
    }
    Ok(CycRational::new(acc.finish(), BigInt::from(order))?)
}

/// Evaluates every label on every class representative both ways.
pub fn certify_characters(
    field: &Field,
    classes: &ClassList,
    chars: &CharList,
) -> Result<CharCertificate, OracleError> {
    let mut oracle = Oracle::new(field);
    let mut cert = CharCertificate::default();
    let mut checked: HashMap<Inducing, ()> = HashMap::new();
    let q = field.q() as u128;
    let sizes: Vec<u128> = classes.reps.iter().map(|r| classes.class_size(q, r)).collect();
    let order = q.pow(12);
    for i in 0..chars.labels.len() {
        let mut row = Vec::with_capacity(classes.reps.len());
        let c = construction(field, chars, i);
        if !checked.contains_key(&c.inducing) {
            oracle.check_inducing(&c.inducing, 4096, i as u64)?;
            checked.insert(c.inducing.clone(), ());
        }
        for r in &classes.reps {
            cert.cells += 1;
            let want = oracle.value(&c, &r.rep)?;
            row.push(want.clone());
            let got = chars.value_expr_at(field, i, &r.rep).map(|v| v.evaluate(field));
            let bad = match &got {
                Ok(v) => *v != want,
                Err(_) => true,
            };
            if bad {
                cert.mismatch_count += 1;
                if cert.mismatches.len() < 20 {
                    let got = match got {
                        Ok(v) => format!("{v}"),
                        Err(e) => format!("{e}"),
                    };
                    cert.mismatches.push(format!(
                        "{} at {}: formula {}, induced {}",
                        chars.label(&chars.labels[i]),
                        classes.label(r),
                        got,
                        want
                    ));
                }
            }
        }
        let norm = inner_product(field.p(), order, &sizes, &row, &row)?;
        if norm.as_integer() != Some(BigInt::from(1)) {
            cert.reducible.push(format!("{}: norm {}", chars.label(&chars.labels[i]), norm));
        }
    }
    cert.inducings_checked = checked.len();
    Ok(cert)
}

/// Checks on `samples` random conjugates of every representative that each
/// label takes the same value there, skipping shapes the formulas do not
/// cover. Returns the number of comparisons and the failures.
pub fn class_function_check(
    field: &Field,
    classes: &ClassList,
    chars: &CharList,
    samples: usize,
    seed: u64,
) -> (usize, Vec<String>) {
    let g = Group::new(field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.q();
    let mut compared = 0;
    let mut failures = Vec::new();
    for r in &classes.reps {
        for _ in 0..samples {
            let mut h = UElement::IDENTITY;
            for t in h.0.iter_mut() {
                *t = Fq(rng.gen_range(0..q) as u16);
            }
            let y = g.conj(&r.rep, &h);
            for i in 0..chars.labels.len() {
                let Ok(vy) = chars.value_expr_at(field, i, &y) else { continue };
                let vr = chars.value_expr_at(field, i, &r.rep).map(|v| v.evaluate(field));
                compared += 1;
                if vr.as_ref().ok() != Some(&vy.evaluate(field)) && failures.len() < 20 {
                    failures.push(format!(
                        "{} at {} and its conjugate {}",
                        chars.label(&chars.labels[i]),
                        classes.label(r),
                        format_element(&y)
                    ));
                }
            }
        }
    }
    (compared, failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_chars;
    use crate::classes::enumerate_class_reps;

    #[test]
    fn indexing_round_trips() {
        for n in [0, 1, 17, 4095] {
            assert_eq!(elem_index(2, &elem_at(2, n)), n);
        }
    }

    #[test]
    fn q2_classes_and_characters() {
        let f = Field::prime(2).unwrap();
        let classes = enumerate_class_reps(&f).unwrap();
        assert_eq!(certify_classes(&f, &classes).unwrap(), Vec::<String>::new());
        let chars = enumerate_chars(&f).unwrap();
        let cert = certify_characters(&f, &classes, &chars).unwrap();
        assert_eq!(cert.mismatch_count, 0, "{:#?}", cert.mismatches);
        assert!(cert.reducible.is_empty(), "{:#?}", cert.reducible);
        let (n, bad) = class_function_check(&f, &classes, &chars, 3, 1);
        assert!(n > 0);
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn regular_character() {
        let f = Field::prime(2).unwrap();
        let mut o = Oracle::new(&f);
        let c = Construction {
            inducing: Inducing { level: 13, v: Vec::new(), lambda: [Fq::ZERO; 13], ybar: None },
            tensor: [Fq::ZERO; 5],
            auto: GraphAuto::identity(),
        };
        assert_eq!(o.value(&c, &UElement::IDENTITY).unwrap(), CycInt::from_int(2, 4096));
        let x = Group::new(&f).parse("x12(1)").unwrap();
        assert!(o.value(&c, &x).unwrap().is_zero());
    }
}


