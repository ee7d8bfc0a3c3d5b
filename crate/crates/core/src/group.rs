//! The unipotent group `U = U(q)` of type `D4`: normal forms, the
//! commutator relations, graph automorphisms and the normal series `M_i`.
//!
//! Root `α_i` (`1 <= i <= 12`) is stored at array position `i - 1`. An
//! element is written uniquely as `Π x_i(t_i)` with factors in the order
//! `3, 1, 2, 4, 5, .., 12`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use thiserror::Error;

use crate::ffield::{Field, Fq};

pub const NUM_ROOTS: usize = 12;

/// Positive roots in the basis of simple roots.
pub const ROOTS: [[u8; 4]; NUM_ROOTS] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 0, 1, 0],
    [0, 1, 1, 0],
    [0, 0, 1, 1],
    [1, 1, 1, 0],
    [1, 0, 1, 1],
    [0, 1, 1, 1],
    [1, 1, 1, 1],
    [1, 1, 2, 1],
];

/// Normal order of the factors, 1-based root numbers.
pub const NORMAL_ORDER: [u8; NUM_ROOTS] = [3, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12];

/// `[x_i(t), x_j(u)] = x_m(ε t u)` for `i < j`, as `(i, j, m, ε)`.
pub const COMMUTATORS: [(u8, u8, u8, i8); 16] = [
    (1, 3, 5, 1),
    (1, 6, 8, 1),
    (1, 7, 9, 1),
    (1, 10, 11, 1),
    (2, 3, 6, 1),
    (2, 5, 8, 1),
    (2, 7, 10, 1),
    (2, 9, 11, 1),
    (3, 4, 7, -1),
    (3, 11, 12, 1),
    (4, 5, 9, 1),
    (4, 6, 10, 1),
    (4, 8, 11, 1),
    (5, 10, 12, -1),
    (6, 9, 12, -1),
    (7, 8, 12, -1),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("root index {0} outside 1..=12")]
    BadRoot(usize),
    #[error("field index {0} out of range")]
    BadValue(usize),
    #[error("cannot parse element `{0}`")]
    Parse(String),
    #[error("permutation does not define a graph automorphism")]
    NotAutomorphism,
}

/// Coordinates `t_1, .., t_12` of an element in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UElement(pub [Fq; NUM_ROOTS]);

impl UElement {
    pub const IDENTITY: UElement = UElement([Fq::ZERO; NUM_ROOTS]);

    /// Coordinate `t_i`, 1-based.
    #[inline]
    pub fn t(&self, i: usize) -> Fq {
        self.0[i - 1]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: Fq) {
        self.0[i - 1] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Membership in `M_i = Π_{j >= i} X_j` (with `M_2` dropping only `X_3`
    /// and `M_3` dropping `X_3 X_1`); `M_1 = U`, `M_13 = 1`.
    pub fn in_m(&self, i: usize) -> bool {
        m_coordinates_zero(i).iter().all(|&j| self.t(j as usize).is_zero())
    }
}

/// Roots whose coordinates vanish on `M_i`.
pub fn m_coordinates_zero(i: usize) -> Vec<u8> {
    match i {
        0 | 1 => Vec::new(),
        2 => alloc::vec![3],
        3 => alloc::vec![3, 1],
        _ => (1..i.min(13) as u8).collect(),
    }
}

type CommTable = [[Option<(u8, bool)>; NUM_ROOTS]; NUM_ROOTS];

const fn build_comm() -> CommTable {
    let mut t: CommTable = [[None; NUM_ROOTS]; NUM_ROOTS];
    let mut k = 0;
    while k < COMMUTATORS.len() {
        let (i, j, m, e) = COMMUTATORS[k];
        let (i, j, m) = (i as usize - 1, j as usize - 1, m as usize - 1);
        // [x_i(t), x_j(u)] = x_m(ε t u) and [x_j(u), x_i(t)] = x_m(-ε t u)
        t[i][j] = Some((m as u8, e < 0));
        t[j][i] = Some((m as u8, e > 0));
        k += 1;
    }
    t
}

/// `COMM[k][j] = Some((m, negative))`: `[x_k(a), x_j(b)] = x_m(±ab)`.
static COMM: CommTable = build_comm();

const fn build_pos() -> [usize; NUM_ROOTS] {
    let mut pos = [0; NUM_ROOTS];
    let mut k = 0;
    while k < NUM_ROOTS {
        pos[NORMAL_ORDER[k] as usize - 1] = k;
        k += 1;
    }
    pos
}

static POS: [usize; NUM_ROOTS] = build_pos();

/// Multiplication and friends in `U(q)` over a fixed field.
#[derive(Debug, Clone, Copy)]
pub struct Group<'f> {
    field: &'f Field,
}

impl<'f> Group<'f> {
    pub fn new(field: &'f Field) -> Group<'f> {
        Group { field }
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    /// `q^12`.
    pub fn order(&self) -> u128 {
        (self.field.q() as u128).pow(NUM_ROOTS as u32)
    }

    /// `x_i(t)`.
    pub fn root_elem(&self, i: usize, t: Fq) -> Result<UElement, GroupError> {
        if !(1..=NUM_ROOTS).contains(&i) {
            return Err(GroupError::BadRoot(i));
        }
        if t.index() >= self.field.q() as usize {
            return Err(GroupError::BadValue(t.index()));
        }
        let mut x = UElement::IDENTITY;
        x.set(i, t);
        Ok(x)
    }

    /// Element with the given coordinates (1-based pairs).
    pub fn from_coords(&self, coords: &[(usize, Fq)]) -> Result<UElement, GroupError> {
        let mut x = UElement::IDENTITY;
        for &(i, t) in coords {
            let r = self.root_elem(i, t)?;
            x = self.mul(&x, &r);
        }
        Ok(x)
    }

    /// Right multiplication by `x_j(s)` (0-based `j`) in place.
    fn mul_root(&self, t: &mut [Fq; NUM_ROOTS], j: usize, s: Fq) {
        if s.is_zero() {
            return;
        }
        let f = self.field;
        let pj = POS[j];
        let mut suffix = [(0u8, Fq::ZERO); NUM_ROOTS];
        let mut n = 0;
        for &r in &NORMAL_ORDER[pj + 1..] {
            let k = r as usize - 1;
            if !t[k].is_zero() {
                suffix[n] = (k as u8, t[k]);
                n += 1;
                t[k] = Fq::ZERO;
            }
        }
        t[j] = f.add(t[j], s);
        // x_k(a) x_j(s) = x_j(s) x_k(a) [x_k(a), x_j(s)]
        for &(k, a) in &suffix[..n] {
            let k = k as usize;
            self.mul_root(t, k, a);
            if let Some((m, negative)) = COMM[k][j] {
                let mut c = f.mul(a, s);
                if negative {
                    c = f.neg(c);
                }
                self.mul_root(t, m as usize, c);
            }
        }
    }

    pub fn mul(&self, x: &UElement, y: &UElement) -> UElement {
        let mut t = x.0;
        for &r in &NORMAL_ORDER {
            let k = r as usize - 1;
            self.mul_root(&mut t, k, y.0[k]);
        }
        UElement(t)
    }

    pub fn inv(&self, x: &UElement) -> UElement {
        let mut t = [Fq::ZERO; NUM_ROOTS];
        for &r in NORMAL_ORDER.iter().rev() {
            let k = r as usize - 1;
            self.mul_root(&mut t, k, self.field.neg(x.0[k]));
        }
        UElement(t)
    }

    /// `h^{-1} x h`.
    pub fn conj(&self, x: &UElement, h: &UElement) -> UElement {
        self.mul(&self.mul(&self.inv(h), x), h)
    }

    /// `x_i(s)^{-1} x x_i(s)`, 1-based `i`.
    pub fn conj_by_root(&self, x: &UElement, i: usize, s: Fq) -> UElement {
        let j = i - 1;
        let f = self.field;
        let mut t = [Fq::ZERO; NUM_ROOTS];
        for &r in &NORMAL_ORDER {
            let k = r as usize - 1;
            let a = x.0[k];
            if a.is_zero() {
                continue;
            }
            self.mul_root(&mut t, k, a);
            if let Some((m, negative)) = COMM[k][j] {
                let mut c = f.mul(a, s);
                if negative {
                    c = f.neg(c);
                }
                self.mul_root(&mut t, m as usize, c);
            }
        }
        UElement(t)
    }

    /// `x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: &UElement, y: &UElement) -> UElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inv(&yx), &xy)
    }

    pub fn pow(&self, x: &UElement, mut e: u64) -> UElement {
        let mut acc = UElement::IDENTITY;
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn apply_auto(&self, g: &GraphAuto, x: &UElement) -> UElement {
        g.apply(x)
    }

    /// Parses `x3(2)*x1(1)*x12(4)`; values are field indices, factors may
    /// come in any order and are multiplied left to right. `1` is the
    /// identity.
    pub fn parse(&self, s: &str) -> Result<UElement, GroupError> {
        let err = || GroupError::Parse(String::from(s));
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(UElement::IDENTITY);
        }
        let mut x = UElement::IDENTITY;
        for factor in s.split('*') {
            let factor = factor.trim();
            let rest = factor.strip_prefix('x').ok_or_else(err)?;
            let (idx, val) = rest.split_once('(').ok_or_else(err)?;
            let val = val.strip_suffix(')').ok_or_else(err)?;
            let i: usize = idx.trim().parse().map_err(|_| err())?;
            let v: usize = val.trim().parse().map_err(|_| err())?;
            if v >= self.field.q() as usize {
                return Err(GroupError::BadValue(v));
            }
            let r = self.root_elem(i, Fq(v as u16))?;
            x = self.mul(&x, &r);
        }
        Ok(x)
    }

    /// Prints the normal form, e.g. `x3(2)*x1(1)*x12(4)`; `1` for the identity.
    pub fn format(&self, x: &UElement) -> String {
        format_element(x)
    }
}

pub fn format_element(x: &UElement) -> String {
    let mut out = String::new();
    for &r in &NORMAL_ORDER {
        let v = x.t(r as usize);
        if !v.is_zero() {
            if !out.is_empty() {
                out.push('*');
            }
            let _ = write!(out, "x{r}({})", v.0);
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// A graph automorphism of `D4` acting on coordinates: `x_i(t) ↦ x_{π(i)}(t)`.
#[derive(Debug, Clone)]
pub struct GraphAuto {
    name: &'static str,
    perm: [u8; NUM_ROOTS],
}

impl PartialEq for GraphAuto {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm
    }
}

impl Eq for GraphAuto {}

impl GraphAuto {
    /// Builds from the images of roots `1..=12`, checking that the map
    /// respects every commutator relation with its sign and needs no
    /// reordering beyond swaps of commuting factors.
    pub fn new(name: &'static str, perm: [u8; NUM_ROOTS]) -> Result<GraphAuto, GroupError> {
        let mut seen = [false; NUM_ROOTS];
        for &r in &perm {
            if !(1..=12).contains(&r) || seen[r as usize - 1] {
                return Err(GroupError::NotAutomorphism);
            }
            seen[r as usize - 1] = true;
        }
        for i in 0..NUM_ROOTS {
            for j in 0..NUM_ROOTS {
                let (pi, pj) = (perm[i] as usize - 1, perm[j] as usize - 1);
                let image = COMM[i][j].map(|(m, neg)| (perm[m as usize] - 1, neg));
                if image != COMM[pi][pj] {
                    return Err(GroupError::NotAutomorphism);
                }
                if POS[i] < POS[j] && POS[pi] > POS[pj] && COMM[pi][pj].is_some() {
                    return Err(GroupError::NotAutomorphism);
                }
            }
        }
        Ok(GraphAuto { name, perm })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// `π(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.perm[i - 1] as usize
    }

    /// `π^{-1}(i)`, 1-based.
    pub fn preimage(&self, i: usize) -> usize {
        self.perm.iter().position(|&r| r as usize == i).unwrap() + 1
    }

    pub fn perm(&self) -> &[u8; NUM_ROOTS] {
        &self.perm
    }

    pub fn apply(&self, x: &UElement) -> UElement {
        let mut y = UElement::IDENTITY;
        for i in 0..NUM_ROOTS {
            y.0[self.perm[i] as usize - 1] = x.0[i];
        }
        y
    }

    pub fn inverse(&self) -> GraphAuto {
        let mut perm = [0u8; NUM_ROOTS];
        for i in 0..NUM_ROOTS {
            perm[self.perm[i] as usize - 1] = i as u8 + 1;
        }
        GraphAuto { name: self.name, perm }
    }

    pub fn compose(&self, other: &GraphAuto) -> GraphAuto {
        // (self ∘ other)(i) = self(other(i))
        let perm = other.perm.map(|j| self.perm[j as usize - 1]);
        GraphAuto { name: self.name, perm }
    }

    pub fn identity() -> GraphAuto {
        GraphAuto { name: "id", perm: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12] }
    }

    /// Triality: `1 → 4 → 2 → 1`, `5 → 7 → 6 → 5`, `8 → 9 → 10 → 8`.
    pub fn tau() -> GraphAuto {
        GraphAuto::new("tau", [4, 1, 3, 2, 7, 5, 6, 9, 10, 8, 11, 12]).unwrap()
    }

    pub fn tau2() -> GraphAuto {
        let t = GraphAuto::tau();
        let mut t2 = t.compose(&t);
        t2.name = "tau2";
        t2
    }

    /// Swaps of two outer nodes: `σ_{12}`, `σ_{14}`, `σ_{24}`.
    pub fn sigma12() -> GraphAuto {
        GraphAuto::new("sigma12", [2, 1, 3, 4, 6, 5, 7, 8, 10, 9, 11, 12]).unwrap()
    }

    pub fn sigma14() -> GraphAuto {
        GraphAuto::new("sigma14", [4, 2, 3, 1, 7, 6, 5, 10, 9, 8, 11, 12]).unwrap()
    }

    pub fn sigma24() -> GraphAuto {
        GraphAuto::new("sigma24", [1, 4, 3, 2, 5, 7, 6, 9, 8, 10, 11, 12]).unwrap()
    }

    /// The six graph automorphisms, identity first.
    pub fn all() -> Vec<GraphAuto> {
        alloc::vec![
            GraphAuto::identity(),
            GraphAuto::tau(),
            GraphAuto::tau2(),
            GraphAuto::sigma12(),
            GraphAuto::sigma14(),
            GraphAuto::sigma24(),
        ]
    }
}

/// Checks that the structure constants agree with root addition: an entry
/// exists exactly when `α_i + α_j` is a root, and then names that root.
pub fn check_root_system() -> Result<(), String> {
    for i in 0..NUM_ROOTS {
        for j in 0..NUM_ROOTS {
            let sum: [u8; 4] = core::array::from_fn(|k| ROOTS[i][k] + ROOTS[j][k]);
            let root = ROOTS.iter().position(|r| *r == sum);
            let entry = COMM[i][j].map(|(m, _)| m as usize);
            if root != entry {
                return Err(format!("roots {} and {}: table {:?}, sum {:?}", i + 1, j + 1, entry, root));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_constants_match_roots() {
        check_root_system().unwrap();
    }

    #[test]
    fn commutator_relations_hold() {
        let f = Field::prime(5).unwrap();
        let g = Group::new(&f);
        for &(i, j, m, e) in &COMMUTATORS {
            let (t, u) = (Fq(2), Fq(3));
            let xi = g.root_elem(i as usize, t).unwrap();
            let xj = g.root_elem(j as usize, u).unwrap();
            let c = g.commutator(&xi, &xj);
            let v = f.mul(f.from_int(e as i64), f.mul(t, u));
            assert_eq!(c, g.root_elem(m as usize, v).unwrap(), "[x{i}, x{j}]");
            let c2 = g.commutator(&xj, &xi);
            assert_eq!(c2, g.root_elem(m as usize, f.neg(v)).unwrap());
        }
    }

    #[test]
    fn normal_form_product_example() {
        let f = Field::prime(3).unwrap();
        let g = Group::new(&f);
        let x1 = g.root_elem(1, Fq(1)).unwrap();
        let x3 = g.root_elem(3, Fq(1)).unwrap();
        // x1(1) x3(1) = x3(1) x1(1) x5(1)
        assert_eq!(g.format(&g.mul(&x1, &x3)), "x3(1)*x1(1)*x5(1)");
        let x = g.parse("x3(2)*x1(1)*x12(2)").unwrap();
        assert_eq!(g.format(&x), "x3(2)*x1(1)*x12(2)");
        assert!(g.mul(&x, &g.inv(&x)).is_identity());
        assert!(g.parse("x13(1)").is_err());
        assert!(g.parse("x1(3)").is_err());
        assert!(g.parse("y1(1)").is_err());
    }

    #[test]
    fn exponent_p_beyond_coxeter_number() {
        let f = Field::prime(7).unwrap();
        let g = Group::new(&f);
        let x = g.parse("x3(1)*x1(2)*x2(1)*x4(1)*x7(2)").unwrap();
        assert!(g.pow(&x, 7).is_identity());
        let f3 = Field::prime(3).unwrap();
        let g3 = Group::new(&f3);
        let y = g3.parse("x3(1)*x1(1)*x2(1)*x4(1)").unwrap();
        assert!(!g3.pow(&y, 3).is_identity());
        assert!(g3.pow(&y, 9).is_identity());
    }

    #[test]
    fn automorphisms_are_valid() {
        let autos = GraphAuto::all();
        assert_eq!(autos.len(), 6);
        let tau = GraphAuto::tau();
        assert_eq!(tau.compose(&tau.compose(&tau)), GraphAuto::identity());
        assert_eq!(GraphAuto::tau2().perm(), tau.inverse().perm());
        assert!(GraphAuto::new("bad", [2, 1, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]).is_err());
        let f = Field::prime(3).unwrap();
        let g = Group::new(&f);
        let x = g.parse("x3(1)*x1(2)*x4(1)*x6(2)").unwrap();
        let y = g.parse("x2(1)*x5(1)*x10(2)").unwrap();
        for a in &autos {
            assert_eq!(a.apply(&g.mul(&x, &y)), g.mul(&a.apply(&x), &a.apply(&y)));
        }
    }

    #[test]
    fn normal_series_membership() {
        let f = Field::prime(2).unwrap();
        let g = Group::new(&f);
        let x = g.parse("x1(1)*x12(1)").unwrap();
        assert!(x.in_m(1) && x.in_m(2) && !x.in_m(3));
        let y = g.parse("x12(1)").unwrap();
        assert!(y.in_m(12) && !y.in_m(13));
        assert!(UElement::IDENTITY.in_m(13));
    }
}
