//! Arithmetic in `F_q`, `q = p^a`, with elements addressed by their
//! enumeration index.
//!
//! An element with polynomial coefficients `(c_0, .., c_{a-1})` over `F_p`
//! has index `c_0 + c_1 p + .. + c_{a-1} p^{a-1}`, so `0` is zero, `1` is one
//! and the indices `1, p, .., p^{a-1}` form the polynomial basis.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest field size accepted by [`Field::new`].
pub const MAX_FIELD_SIZE: u32 = 10_000;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{a} exceeds the supported maximum {MAX_FIELD_SIZE}")]
    TooLarge { p: u32, a: u32 },
    #[error("defining polynomial must be monic of degree {expected}")]
    BadPolynomial { expected: u32 },
    #[error("defining polynomial is reducible over F_{0}")]
    Reducible(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("field index {0} out of range")]
    BadIndex(usize),
    #[error("map is surjective; no element outside its image")]
    Surjective,
    #[error("image of the map is not an index-2 subgroup")]
    NotIndexTwo,
}

/// An element of some [`Field`], identified by its enumeration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field `F_q` together with its lookup tables.
///
/// Immutable after construction; share it by reference.
#[derive(Clone)]
pub struct Field {
    p: u32,
    a: u32,
    q: u32,
    poly: Vec<u32>,
    add: Vec<u16>,
    neg: Vec<u16>,
    log: Vec<u32>,
    exp: Vec<u16>,
    trace: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("poly", &self.poly)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.poly == other.poly
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, lowest coefficient first.

fn poly_trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    poly_trim(&mut r);
    let dd = den.len() - 1;
    let lead_inv = inv_mod(den[dd], p);
    while r.len() > dd && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - dd;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in den.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p * p - factor * c % p) % p;
        }
        poly_trim(&mut r);
        if r.len() - 1 < dd {
            break;
        }
    }
    r
}

fn inv_mod(x: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = x as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn digits(mut idx: u32, p: u32, a: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(a as usize);
    for _ in 0..a {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// True when the monic polynomial `poly` (degree `a`) has no monic factor of
/// degree `1..=a/2`; checked by trial division against every candidate.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let a = poly.len() as u32 - 1;
    for d in 1..=a / 2 {
        let count = p.pow(d);
        for tail in 0..count {
            let mut cand = digits(tail, p, d);
            cand.push(1);
            let r = poly_rem(poly, &cand, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn default_poly(p: u32, a: u32) -> Vec<u32> {
    if a == 1 {
        return vec![0, 1];
    }
    let count = p.pow(a);
    for tail in 0..count {
        let mut cand = digits(tail, p, a);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Builds `F_{p^a}`. Without `poly`, the monic irreducible polynomial of
    /// degree `a` with the smallest coefficient index is used.
    pub fn new(p: u32, a: u32, poly: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if a == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(a).filter(|&q| q <= MAX_FIELD_SIZE as u64);
        let q = q.ok_or(FieldError::TooLarge { p, a })? as u32;
        let poly = match poly {
            Some(c) => {
                if c.len() != a as usize + 1 || c[a as usize] != 1 || c.iter().any(|&x| x >= p) {
                    return Err(FieldError::BadPolynomial { expected: a });
                }
                if !is_irreducible(c, p) {
                    return Err(FieldError::Reducible(p));
                }
                c.to_vec()
            }
            None => default_poly(p, a),
        };

        let mut field = Field {
            p,
            a,
            q,
            poly,
            add: Vec::new(),
            neg: Vec::new(),
            log: Vec::new(),
            exp: Vec::new(),
            trace: Vec::new(),
        };
        field.neg = (0..q).map(|x| field.neg_slow(x) as u16).collect();
        if q <= ADD_TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            for x in 0..q {
                for y in 0..q {
                    add.push(field.add_slow(x, y) as u16);
                }
            }
            field.add = add;
        }
        field.build_log_tables();
        field.trace = (0..q).map(|x| field.trace_slow(Fq(x as u16))).collect();
        Ok(field)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1, None)
    }

    fn add_slow(&self, x: u32, y: u32) -> u32 {
        if self.a == 1 {
            return (x + y) % self.p;
        }
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.a {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg_slow(&self, x: u32) -> u32 {
        let d: Vec<u32> = digits(x, self.p, self.a)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        from_digits(&d, self.p)
    }

    fn mul_slow(&self, x: u32, y: u32) -> u32 {
        let (p, a) = (self.p, self.a as usize);
        let dx = digits(x, p, self.a);
        let dy = digits(y, p, self.a);
        let mut prod = vec![0u32; 2 * a - 1];
        for (i, &cx) in dx.iter().enumerate() {
            for (j, &cy) in dy.iter().enumerate() {
                prod[i + j] = (prod[i + j] + cx * cy) % p;
            }
        }
        let mut r = poly_rem(&prod, &self.poly, p);
        r.resize(a, 0);
        from_digits(&r, p)
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        if q == 2 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        for g in 2..q {
            let mut exp = Vec::with_capacity(2 * (q as usize - 1));
            let mut x = 1u32;
            let mut order = 0;
            loop {
                exp.push(x as u16);
                x = self.mul_slow(x, g);
                order += 1;
                if x == 1 {
                    break;
                }
            }
            if order == q - 1 {
                let mut log = vec![0u32; q as usize];
                for (k, &e) in exp.iter().enumerate() {
                    log[e as usize] = k as u32;
                }
                let doubled = exp.clone();
                exp.extend(doubled);
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    fn trace_slow(&self, x: Fq) -> u32 {
        let mut acc = Fq::ZERO;
        let mut y = x;
        for _ in 0..self.a {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p as u16);
        acc.0 as u32
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn a(&self) -> u32 {
        self.a
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, lowest coefficient first, monic.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + Clone {
        (0..self.q).map(|i| Fq(i as u16))
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> + Clone {
        (1..self.q).map(|i| Fq(i as u16))
    }

    pub fn element(&self, index: usize) -> Result<Fq, FieldError> {
        if index < self.q as usize {
            Ok(Fq(index as u16))
        } else {
            Err(FieldError::BadIndex(index))
        }
    }

    /// Additive basis `1, x, .., x^{a-1}` of `F_q` over `F_p`.
    pub fn basis(&self) -> Vec<Fq> {
        (0..self.a).map(|i| Fq(self.p.pow(i) as u16)).collect()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn coeffs(&self, x: Fq) -> Vec<u32> {
        digits(x.0 as u32, self.p, self.a)
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        if self.add.is_empty() {
            Fq(self.add_slow(x.0 as u32, y.0 as u32) as u16)
        } else {
            Fq(self.add[x.index() * self.q as usize + y.index()])
        }
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        Fq(self.neg[x.index()])
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        if x.is_zero() || y.is_zero() {
            return Fq::ZERO;
        }
        Fq(self.exp[(self.log[x.index()] + self.log[y.index()]) as usize])
    }

    pub fn mul_all(&self, xs: &[Fq]) -> Fq {
        xs.iter().fold(Fq::ONE, |acc, &x| self.mul(acc, x))
    }

    pub fn inv(&self, x: Fq) -> Result<Fq, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(Fq(self.exp[((n - self.log[x.index()]) % n) as usize]))
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if x.is_zero() {
            return Fq::ZERO;
        }
        let n = (self.q - 1) as u64;
        let k = (self.log[x.index()] as u64 * (e % n)) % n;
        Fq(self.exp[k as usize])
    }

    /// `Tr(x) = x + x^p + .. + x^{p^{a-1}}` as a residue mod `p`.
    #[inline]
    pub fn trace(&self, x: Fq) -> u32 {
        self.trace[x.index()]
    }

    /// `a^{-p}`, the element written `a_φ` in the `p = 2` character values.
    pub fn a_phi(&self, x: Fq) -> Result<Fq, FieldError> {
        Ok(self.pow(self.inv(x)?, self.p as u64))
    }

    /// Quadratic residuosity of a nonzero element (odd `q`).
    pub fn is_square(&self, x: Fq) -> bool {
        x.is_zero() || self.p == 2 || self.log[x.index()].is_multiple_of(2)
    }

    /// Smallest-index element outside the image of `map`, for additive maps
    /// whose image has index 2 in `(F_q, +)`.
    pub fn nonimage_pick(&self, map: impl Fn(Fq) -> Fq) -> Result<Fq, FieldError> {
        let mut in_image = vec![false; self.q as usize];
        for t in self.elements() {
            in_image[map(t).index()] = true;
        }
        let size = in_image.iter().filter(|&&b| b).count();
        if size == self.q as usize {
            return Err(FieldError::Surjective);
        }
        if 2 * size != self.q as usize {
            return Err(FieldError::NotIndexTwo);
        }
        let d = self
            .elements()
            .find(|x| !in_image[x.index()])
            .expect("image is a proper subset");
        // the coset d + image must cover the complement
        if self.elements().any(|x| in_image[x.index()] && in_image[self.add(d, x).index()]) {
            return Err(FieldError::NotIndexTwo);
        }
        Ok(d)
    }

    /// Borrowing handle pairing an element with this field.
    pub fn el(&self, x: Fq) -> FieldElement<'_> {
        FieldElement { field: self, value: x }
    }
}

/// An element bundled with its field; binary operations check that both
/// operands live in the same field.
#[derive(Debug, Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    value: Fq,
}

impl<'f> FieldElement<'f> {
    pub fn value(&self) -> Fq {
        self.value
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    fn same(&self, other: &FieldElement<'_>) -> Result<(), FieldError> {
        if core::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>, FieldError> {
        self.same(other)?;
        Ok(self.field.el(self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>, FieldError> {
        self.same(other)?;
        Ok(self.field.el(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement<'f> {
        self.field.el(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement<'f>, FieldError> {
        Ok(self.field.el(self.field.inv(self.value)?))
    }

    pub fn trace(&self) -> u32 {
        self.field.trace(self.value)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same(other).is_ok() && self.value == other.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    #[test]
    fn default_polynomials() {
        assert_eq!(Field::prime(2).unwrap().poly(), &[0, 1]);
        assert_eq!(Field::new(2, 2, None).unwrap().poly(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 3, None).unwrap().poly(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(3, 2, None).unwrap().poly(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(4, 1, None), Err(FieldError::NotPrime(4)));
        assert_eq!(Field::new(2, 0, None), Err(FieldError::ZeroDegree));
        assert_eq!(Field::new(2, 2, Some(&[1, 0, 1])), Err(FieldError::Reducible(2)));
        assert_eq!(
            Field::new(2, 2, Some(&[1, 1, 0])),
            Err(FieldError::BadPolynomial { expected: 2 })
        );
        assert_eq!(Field::new(101, 2, None), Err(FieldError::TooLarge { p: 101, a: 2 }));
    }

    #[test]
    fn generator_of_f4() {
        let f = f4();
        let g = Fq(2);
        assert_eq!(f.mul(g, g), Fq(3)); // g^2 = g + 1
        assert_eq!(f.trace(g), 1);
        assert_eq!(f.a_phi(g).unwrap(), g);
        assert_eq!(f.inv(g).unwrap(), Fq(3));
    }

    #[test]
    fn prime_field_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.inv(Fq(2)).unwrap(), Fq(2));
        assert_eq!(f3.a_phi(Fq(2)).unwrap(), Fq(2));
        assert_eq!(f3.inv(Fq::ZERO), Err(FieldError::DivisionByZero));
        for x in f3.elements() {
            assert_eq!(f3.trace(x), x.0 as u32);
            assert_eq!(f3.add(x, f3.neg(x)), Fq::ZERO);
        }
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.a_phi(Fq::ONE).unwrap(), Fq::ONE);
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, a) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = Field::new(p, a, None).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for z in f.elements() {
                        let lhs = f.mul(x, f.add(y, z));
                        let rhs = f.add(f.mul(x, y), f.mul(x, z));
                        assert_eq!(lhs, rhs);
                    }
                }
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Fq::ONE);
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_onto() {
        for (p, a) in [(2, 1), (2, 2), (2, 3), (3, 2), (2, 6), (5, 2)] {
            let f = Field::new(p, a, None).unwrap();
            let mut hit = vec![false; p as usize];
            for x in f.elements() {
                hit[f.trace(x) as usize] = true;
                assert_eq!(f.trace(f.pow(x, p as u64)), f.trace(x));
                for y in f.elements().step_by(3) {
                    assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn nonimage_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.nonimage_pick(|t| f2.add(f2.mul(t, t), t)), Ok(Fq::ONE));
        let f = f4();
        assert_eq!(f.nonimage_pick(|t| f.add(f.mul(t, t), t)), Ok(Fq(2)));
        assert_eq!(f2.nonimage_pick(|t| f2.mul(t, t)), Err(FieldError::Surjective));

        let f8 = Field::new(2, 3, None).unwrap();
        let d = f8.nonimage_pick(|t| f8.add(f8.mul(t, t), t)).unwrap();
        let image: Vec<Fq> = f8.elements().map(|t| f8.add(f8.mul(t, t), t)).collect();
        assert!(!image.contains(&d));
        for x in f8.elements() {
            assert!(image.contains(&x) || image.contains(&f8.add(x, d)));
        }
    }

    #[test]
    fn element_handles_check_context() {
        let f = f4();
        let g = Field::prime(2).unwrap();
        let x = f.el(Fq(2));
        assert_eq!(x.mul(&x).unwrap().value(), Fq(3));
        assert_eq!(x.add(&x.neg()).unwrap().value(), Fq::ZERO);
        assert_eq!(x.add(&g.el(Fq::ONE)), Err(FieldError::ContextMismatch));
        let copy = f4();
        assert!(x.add(&copy.el(Fq::ONE)).is_ok());
    }

    #[test]
    fn squares_in_odd_fields() {
        let f = Field::new(3, 2, None).unwrap();
        let squares: Vec<Fq> = f.units().map(|x| f.mul(x, x)).collect();
        for x in f.units() {
            assert_eq!(f.is_square(x), squares.contains(&x));
        }
        assert!(!Field::prime(3).unwrap().is_square(Fq(2)));
    }
}
