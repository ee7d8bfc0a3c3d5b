//! Exact elements of `Z[ζ_p]` and `Q(ζ_p)`.
//!
//! An element is stored on the integral basis `1, ζ, .., ζ^{p-2}`; the
//! relation `ζ^{p-1} = -(1 + ζ + .. + ζ^{p-2})` keeps the representation
//! unique, so structural equality is equality of numbers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ffield::{Field, Fq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("operands live in different cyclotomic rings (p = {0} and p = {1})")]
    PrimeMismatch(u32, u32),
    #[error("integer overflow in cyclotomic arithmetic")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not divisible by {0}")]
    NotDivisible(u128),
}

/// An element of `Z[ζ_p]` with machine-integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i128>,
}

fn reduce_full(p: u32, full: &[i128]) -> Vec<i128> {
    let last = full[p as usize - 1];
    full[..p as usize - 1].iter().map(|&c| c - last).collect()
}

impl CycInt {
    pub fn zero(p: u32) -> CycInt {
        CycInt { p, coeffs: vec![0; p as usize - 1] }
    }

    pub fn from_int(p: u32, n: i128) -> CycInt {
        let mut z = CycInt::zero(p);
        z.coeffs[0] = n;
        z
    }

    pub fn one(p: u32) -> CycInt {
        CycInt::from_int(p, 1)
    }

    /// `ζ^k`, any integer `k`.
    pub fn zeta_pow(p: u32, k: i64) -> CycInt {
        let k = k.rem_euclid(p as i64) as usize;
        let mut full = vec![0i128; p as usize];
        full[k] = 1;
        CycInt { p, coeffs: reduce_full(p, &full) }
    }

    /// `Σ_k counts[k] ζ^k` for `k` in `0..p`.
    pub fn from_exponent_counts(p: u32, counts: &[i128]) -> CycInt {
        assert_eq!(counts.len(), p as usize);
        CycInt { p, coeffs: reduce_full(p, counts) }
    }

    /// Builds from coefficients on the basis `1, .., ζ^{p-2}`.
    pub fn from_coeffs(p: u32, coeffs: Vec<i128>) -> CycInt {
        assert_eq!(coeffs.len(), p as usize - 1);
        CycInt { p, coeffs }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as an integer, if it is one.
    pub fn as_int(&self) -> Option<i128> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &CycInt) -> Result<(), CycError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CycError::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, n: i128) -> Result<CycInt, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(n).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Exact division by an integer; fails unless every coefficient divides.
    pub fn div_exact(&self, n: u128) -> Result<CycInt, CycError> {
        if n == 0 {
            return Err(CycError::DivisionByZero);
        }
        let n = i128::try_from(n).map_err(|_| CycError::Overflow)?;
        if self.coeffs.iter().any(|c| c % n != 0) {
            return Err(CycError::NotDivisible(n as u128));
        }
        Ok(CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c / n).collect() })
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check(other)?;
        let p = self.p as usize;
        let mut full = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = (i + j) % p;
                let t = a.checked_mul(b).ok_or(CycError::Overflow)?;
                full[k] = full[k].checked_add(t).ok_or(CycError::Overflow)?;
            }
        }
        let last = full[p - 1];
        let coeffs = full[..p - 1]
            .iter()
            .map(|&c| c.checked_sub(last).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Multiplication by `ζ^k`.
    pub fn mul_zeta(&self, k: i64) -> CycInt {
        let p = self.p as usize;
        let k = k.rem_euclid(p as i64) as usize;
        let mut full = vec![0i128; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            full[(i + k) % p] = c;
        }
        CycInt { p: self.p, coeffs: reduce_full(self.p, &full) }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycInt {
        let p = self.p as usize;
        let mut full = vec![0i128; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            full[(p - i) % p] = c;
        }
        CycInt { p: self.p, coeffs: reduce_full(self.p, &full) }
    }

    /// Floating-point image under `ζ ↦ e^{2πi/p}`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let angle = 2.0 * core::f64::consts::PI * k as f64 / self.p as f64;
            re += c as f64 * libm::cos(angle);
            im += c as f64 * libm::sin(angle);
        }
        (re, im)
    }

    pub fn to_big(&self) -> CycBig {
        CycBig { p: self.p, coeffs: self.coeffs.iter().map(|&c| BigInt::from(c)).collect() }
    }
}

fn format_coeffs<T, I>(coeffs: I) -> String
where
    T: fmt::Display,
    I: Iterator<Item = Option<(T, bool, bool)>>,
{
    // Skips zero coefficients while keeping basis positions.
    let mut out = String::new();
    let mut first = true;
    for (k, item) in coeffs.enumerate() {
        let Some((abs, neg, unit)) = item else { continue };
        if !first {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        first = false;
        let _ = match (k, unit) {
            (0, _) => write!(out, "{abs}"),
            (1, true) => write!(out, "z"),
            (1, false) => write!(out, "{abs}*z"),
            (_, true) => write!(out, "z^{k}"),
            (_, false) => write!(out, "{abs}*z^{k}"),
        };
    }
    if first {
        out.push('0');
    }
    out
}

impl fmt::Display for CycInt {
    /// Polynomial in `z = ζ_p`, e.g. `1 + 2*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_coeffs(self.coeffs.iter().map(|&c| {
            (c != 0).then(|| (c.unsigned_abs(), c < 0, c.unsigned_abs() == 1))
        }));
        f.write_str(&s)
    }
}

/// An element of `Z[ζ_p]` with arbitrary-precision coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycBig {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CycBig {
    pub fn zero(p: u32) -> CycBig {
        CycBig { p, coeffs: vec![BigInt::zero(); p as usize - 1] }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &CycBig) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&self, n: &BigInt) -> CycBig {
        CycBig { p: self.p, coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }

    /// Back to machine integers when every coefficient fits.
    pub fn to_small(&self) -> Option<CycInt> {
        let coeffs = self.coeffs.iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>()?;
        Some(CycInt { p: self.p, coeffs })
    }
}

/// An element of `Q(ζ_p)`: integral numerator over a positive integer,
/// kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycRational {
    num: CycBig,
    den: BigInt,
}

impl CycRational {
    pub fn new(num: CycBig, den: BigInt) -> Result<CycRational, CycError> {
        if den.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let (mut num, mut den) = if den.is_negative() {
            (CycBig { p: num.p, coeffs: num.coeffs.iter().map(|c| -c).collect() }, -den)
        } else {
            (num, den)
        };
        let mut g = den.clone();
        for c in &num.coeffs {
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in num.coeffs.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        Ok(CycRational { num, den })
    }

    pub fn numerator(&self) -> &CycBig {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.den.is_one() && self.num.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.num.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_coeffs(self.num.coeffs.iter().map(|c| {
            (!c.is_zero()).then(|| (c.abs(), c.is_negative(), c.abs().is_one()))
        }));
        if self.den.is_one() {
            f.write_str(&s)
        } else {
            write!(f, "({s})/{}", self.den)
        }
    }
}

/// Running sum of integer multiples of cyclotomic integers.  Stays on
/// machine integers until a step would overflow, then continues exactly.
#[derive(Debug, Clone)]
pub struct CycAccumulator {
    p: u32,
    small: Vec<i128>,
    big: Option<CycBig>,
}

impl CycAccumulator {
    pub fn new(p: u32) -> CycAccumulator {
        CycAccumulator { p, small: vec![0; p as usize - 1], big: None }
    }

    fn spill(&mut self) -> &mut CycBig {
        if self.big.is_none() {
            let coeffs = self.small.iter().map(|&c| BigInt::from(c)).collect();
            self.small.iter_mut().for_each(|c| *c = 0);
            self.big = Some(CycBig { p: self.p, coeffs });
        }
        self.big.as_mut().unwrap()
    }

    /// Adds `w * x`.
    pub fn add_scaled(&mut self, w: i128, x: &CycInt) -> Result<(), CycError> {
        if x.p != self.p {
            return Err(CycError::PrimeMismatch(self.p, x.p));
        }
        if self.big.is_none() {
            let mut next = self.small.clone();
            let mut ok = true;
            for (acc, &c) in next.iter_mut().zip(&x.coeffs) {
                match w.checked_mul(c).and_then(|t| acc.checked_add(t)) {
                    Some(v) => *acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                self.small = next;
                return Ok(());
            }
        }
        let w = BigInt::from(w);
        let big = self.spill();
        for (acc, &c) in big.coeffs.iter_mut().zip(&x.coeffs) {
            *acc += &w * c;
        }
        Ok(())
    }

    /// Adds `w * x * conj(y)`.
    pub fn add_product_conj(&mut self, w: i128, x: &CycInt, y: &CycInt) -> Result<(), CycError> {
        match x.mul(&y.conj()) {
            Ok(prod) => self.add_scaled(w, &prod),
            Err(CycError::Overflow) => {
                let (xb, yb) = (x.to_big(), y.conj().to_big());
                let p = self.p as usize;
                let mut full = vec![BigInt::zero(); p];
                for (i, a) in xb.coeffs.iter().enumerate() {
                    for (j, b) in yb.coeffs.iter().enumerate() {
                        full[(i + j) % p] += a * b;
                    }
                }
                let last = full[p - 1].clone();
                let w = BigInt::from(w);
                let big = self.spill();
                for (acc, c) in big.coeffs.iter_mut().zip(&full[..p - 1]) {
                    *acc += &w * (c - &last);
                }
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    pub fn finish(self) -> CycBig {
        match self.big {
            Some(b) => b,
            None => CycBig { p: self.p, coeffs: self.small.iter().map(|&c| BigInt::from(c)).collect() },
        }
    }
}

/// `φ(x) = ζ^{Tr(x)}`.
pub fn from_phi(field: &Field, x: Fq) -> CycInt {
    CycInt::zeta_pow(field.p(), field.trace(x) as i64)
}

fn sum_over(field: &Field, values: impl Iterator<Item = Fq>) -> CycInt {
    let mut counts = vec![0i128; field.p() as usize];
    for v in values {
        counts[field.trace(v) as usize] += 1;
    }
    CycInt::from_exponent_counts(field.p(), &counts)
}

/// `Σ_{s ∈ F_q} φ(c s^2)`.
pub fn gauss_quadratic(field: &Field, c: Fq) -> CycInt {
    sum_over(field, field.elements().map(|s| field.mul(c, field.mul(s, s))))
}

/// `Σ_{s ∈ F_q^×} φ(A s + B / s)`.
pub fn kloosterman(field: &Field, a: Fq, b: Fq) -> CycInt {
    sum_over(
        field,
        field.units().map(|s| {
            let inv = field.inv(s).expect("unit");
            field.add(field.mul(a, s), field.mul(b, inv))
        }),
    )
}

/// `Σ_{s ∈ F_q} φ(α s^2 + β s)`.
pub fn quad_linear_sum(field: &Field, alpha: Fq, beta: Fq) -> CycInt {
    sum_over(
        field,
        field.elements().map(|s| field.add(field.mul(alpha, field.mul(s, s)), field.mul(beta, s))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn basis_reduction() {
        assert_eq!(CycInt::zeta_pow(2, 1), CycInt::from_int(2, -1));
        let z = CycInt::zeta_pow(3, 2);
        assert_eq!(z.coeffs(), &[-1, -1]);
        assert_eq!(CycInt::zeta_pow(5, 5), CycInt::one(5));
        assert_eq!(CycInt::zeta_pow(5, -1), CycInt::zeta_pow(5, 4));
    }

    #[test]
    fn norm_of_one_plus_two_zeta() {
        let x = CycInt::from_coeffs(3, vec![1, 2]);
        assert_eq!(x.mul(&x.conj()).unwrap(), CycInt::from_int(3, 3));
        assert_eq!(x.to_string(), "1 + 2*z");
    }

    #[test]
    fn sums_of_all_powers_vanish() {
        for p in [2u32, 3, 5, 7] {
            let mut acc = CycInt::zero(p);
            for k in 0..p as i64 {
                acc = acc.add(&CycInt::zeta_pow(p, k)).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn mismatched_primes_are_rejected() {
        let e = CycInt::one(3).add(&CycInt::one(5));
        assert_eq!(e, Err(CycError::PrimeMismatch(3, 5)));
    }

    #[test]
    fn exponential_sum_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(gauss_quadratic(&f3, Fq::ONE), CycInt::from_coeffs(3, vec![1, 2]));
        assert_eq!(gauss_quadratic(&f3, Fq::ZERO), CycInt::from_int(3, 3));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(kloosterman(&f2, Fq::ONE, Fq::ONE), CycInt::one(2));
        assert_eq!(kloosterman(&f3, Fq::ZERO, Fq::ZERO), CycInt::from_int(3, 2));
        assert_eq!(kloosterman(&f3, Fq::ONE, Fq::ZERO), CycInt::from_int(3, -1));
        assert_eq!(quad_linear_sum(&f2, Fq::ONE, Fq::ONE), CycInt::from_int(2, 2));
        assert_eq!(quad_linear_sum(&f2, Fq::ONE, Fq::ZERO), CycInt::zero(2));
        let f4 = Field::new(2, 2, None).unwrap();
        // s ↦ α s^2 + β s is additive, so the sum is q or 0
        for al in f4.elements() {
            for be in f4.elements() {
                let v = quad_linear_sum(&f4, al, be).as_int().unwrap();
                assert!(v == 0 || v == 4);
            }
        }
    }

    #[test]
    fn gauss_sum_magnitudes() {
        for p in [3u32, 5, 7, 11] {
            let f = Field::prime(p).unwrap();
            let g = gauss_quadratic(&f, Fq::ONE);
            assert_eq!(g.mul(&g.conj()).unwrap(), CycInt::from_int(p, p as i128));
            let (re, im) = g.to_complex();
            let s = libm::sqrt(p as f64);
            if p % 4 == 1 {
                assert!((re - s).abs() < 1e-9 && im.abs() < 1e-9);
            } else {
                assert!(re.abs() < 1e-9 && (im - s).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn accumulator_spills_exactly() {
        let mut acc = CycAccumulator::new(3);
        let x = CycInt::from_coeffs(3, vec![i128::MAX / 2, 1]);
        acc.add_scaled(1, &x).unwrap();
        acc.add_scaled(1, &x).unwrap();
        acc.add_scaled(1, &x).unwrap();
        let big = acc.finish();
        assert_eq!(big.coeffs()[0], BigInt::from(i128::MAX / 2) * 3);
        assert_eq!(big.coeffs()[1], BigInt::from(3));
    }

    #[test]
    fn rationals_reduce() {
        let num = CycInt::from_coeffs(3, vec![6, -4]).to_big();
        let r = CycRational::new(num, BigInt::from(-8)).unwrap();
        assert_eq!(r.denominator(), &BigInt::from(4));
        assert_eq!(r.to_string(), "(-3 + 2*z)/4");
        let one = CycRational::new(CycInt::from_int(5, 7).to_big(), BigInt::from(7)).unwrap();
        assert_eq!(one.as_integer(), Some(BigInt::one()));
    }
}
