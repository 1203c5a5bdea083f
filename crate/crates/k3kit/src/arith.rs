//! Exact and high-precision arithmetic primitives.
//!
//! Provides the Jacobi symbol, quadratic Gauss sums
//! G(a,b) = sum_{k=0}^{b-1} e^{2 pi i a k^2 / b}, and fractional parts of
//! exact rationals. Gauss sums are evaluated by direct summation with
//! `ComplexHp` values carrying at least [`MIN_PRECISION_BITS`] bits of
//! mantissa, so downstream rank computations round unambiguously.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (guaranteed by `num-rational`).
pub type Rational = BigRational;

/// Smallest accepted mantissa size for high-precision evaluation.
pub const MIN_PRECISION_BITS: usize = 64;
/// Default mantissa size; roomy enough for every sweep this crate runs.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Extra bits carried by intermediate sums so that the final rounding to the
/// requested precision is the only place accumulation error can show up.
const GUARD_BITS: usize = 32;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),
    #[error("Jacobi symbol needs an odd modulus, got {0}")]
    EvenModulus(i64),
    #[error("precision {0} is below the minimum of {MIN_PRECISION_BITS} bits")]
    PrecisionTooLow(usize),
}

/// Jacobi symbol (a/b) for odd positive b, extending the Legendre symbol.
///
/// Returns 0 exactly when gcd(a, b) > 1. Computed by the binary algorithm:
/// factor out twos (flipping sign when b = 3, 5 mod 8), then swap using
/// quadratic reciprocity (sign flips when both arguments are 3 mod 4).
pub fn jacobi(a: i64, b: i64) -> Result<i32, ArithError> {
    if b <= 0 {
        return Err(ArithError::NonPositiveModulus(b));
    }
    if b % 2 == 0 {
        return Err(ArithError::EvenModulus(b));
    }
    let mut a = a.rem_euclid(b);
    let mut b = b;
    let mut sign = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(b % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            sign = -sign;
        }
        a %= b;
    }
    Ok(if b == 1 { sign } else { 0 })
}

/// Fractional part {q} = q - floor(q), always in [0, 1).
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Complex number with both parts held at high precision.
#[derive(Clone, Debug)]
pub struct ComplexHp {
    re: BigFloat,
    im: BigFloat,
}

impl ComplexHp {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Self {
            re: BigFloat::from_i64(0, prec),
            im: BigFloat::from_i64(0, prec),
        }
    }

    /// Unit vector e^{i theta}.
    pub fn unit(theta: &BigFloat, prec: usize, cc: &mut Consts) -> Self {
        Self {
            re: theta.cos(prec, RM, cc),
            im: theta.sin(prec, RM, cc),
        }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn add(&self, other: &Self, prec: usize) -> Self {
        Self {
            re: self.re.add(&other.re, prec, RM),
            im: self.im.add(&other.im, prec, RM),
        }
    }

    pub fn mul(&self, other: &Self, prec: usize) -> Self {
        let re = self
            .re
            .mul(&other.re, prec, RM)
            .sub(&self.im.mul(&other.im, prec, RM), prec, RM);
        let im = self
            .re
            .mul(&other.im, prec, RM)
            .add(&self.im.mul(&other.re, prec, RM), prec, RM);
        Self { re, im }
    }

    fn scale_u32(&self, k: u32, prec: usize) -> Self {
        let k = BigFloat::from_u32(k, prec);
        Self {
            re: self.re.mul(&k, prec, RM),
            im: self.im.mul(&k, prec, RM),
        }
    }

    pub fn abs(&self, prec: usize) -> BigFloat {
        let rr = self.re.mul(&self.re, prec, RM);
        let ii = self.im.mul(&self.im, prec, RM);
        rr.add(&ii, prec, RM).sqrt(prec, RM)
    }

    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }

    pub fn abs_f64(&self) -> f64 {
        let prec = self
            .re
            .mantissa_max_bit_len()
            .unwrap_or(DEFAULT_PRECISION_BITS);
        bigfloat_to_f64(&self.abs(prec))
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }
}

/// Lossy conversion used when a report or a tolerance check needs a plain
/// float. Reads the top two mantissa words, so the result carries full f64
/// precision regardless of the source precision.
pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let (words, _len, sign, exp, _inexact) = x.as_raw_parts().expect("finite nonzero value");
    // Mantissa is a normalized little-endian fraction in [1/2, 1); the value
    // is fraction * 2^exp.
    let mut frac = 0.0f64;
    let mut shift = 0i32;
    for w in words.iter().rev().take(2) {
        shift += WORD_BIT_SIZE as i32;
        frac += (*w as f64) * 2f64.powi(-shift);
    }
    let v = frac * 2f64.powi(exp);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Exact rational to high-precision float. Components of every rational this
/// crate produces fit in an i128.
pub fn rational_to_bigfloat(q: &Rational, prec: usize) -> BigFloat {
    let numer = q
        .numer()
        .to_i128()
        .expect("rational numerator exceeds i128");
    let denom = q
        .denom()
        .to_i128()
        .expect("rational denominator exceeds i128");
    BigFloat::from_i128(numer, prec).div(&BigFloat::from_i128(denom, prec), prec, RM)
}

/// Quadratic Gauss sum G(a, b) = sum_{k=0}^{b-1} e^{2 pi i a k^2 / b}.
///
/// Exponents are reduced exactly: with r = a k^2 mod b each term is w^r for
/// the primitive root of unity w = e^{2 pi i / b}, and equal residues are
/// collected before summation. Powers of w are accumulated in index order at
/// `prec + GUARD_BITS` bits, so the drift after b steps stays far below the
/// final rounding; the result is then rounded to `prec` bits.
pub fn gauss_sum(a: i64, b: i64, prec: usize) -> Result<ComplexHp, ArithError> {
    if b <= 0 {
        return Err(ArithError::NonPositiveModulus(b));
    }
    if prec < MIN_PRECISION_BITS {
        return Err(ArithError::PrecisionTooLow(prec));
    }
    let wp = prec + GUARD_BITS;
    let b_us = b as usize;
    let a_red = (a.rem_euclid(b)) as i128;
    let b_i = b as i128;

    let mut counts = vec![0u32; b_us];
    for k in 0..b_i {
        let r = (a_red * ((k * k) % b_i)) % b_i;
        counts[r as usize] += 1;
    }

    let mut cc = Consts::new().expect("constants cache");
    // 2 pi / b
    let mut tau = cc.pi(wp, RM);
    tau.set_exponent(tau.exponent().expect("finite pi") + 1);
    let theta = tau.div(&BigFloat::from_i64(b, wp), wp, RM);
    let w = ComplexHp::unit(&theta, wp, &mut cc);

    let mut acc = ComplexHp::zero(wp);
    let mut pow = ComplexHp::new(BigFloat::from_i64(1, wp), BigFloat::from_i64(0, wp));
    for (r, &c) in counts.iter().enumerate() {
        if c > 0 {
            acc = acc.add(&pow.scale_u32(c, wp), wp);
        }
        if r + 1 < b_us {
            pow = pow.mul(&w, wp);
        }
    }

    let mut re = acc.re;
    let mut im = acc.im;
    re.set_precision(prec, RM)
        .expect("rounding to target precision");
    im.set_precision(prec, RM)
        .expect("rounding to target precision");
    Ok(ComplexHp::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    /// Independent slow oracle: Legendre symbol by Euler's criterion on each
    /// prime factor of b.
    fn jacobi_oracle(a: i64, b: i64) -> i32 {
        assert!(b > 0 && b % 2 == 1);
        let mut b = b;
        let mut result = 1i64;
        let mut p = 3i64;
        while b > 1 {
            while b % p == 0 {
                b /= p;
                result *= legendre(a, p);
            }
            p += 2;
            if p * p > b && b > 1 {
                result *= legendre(a, b);
                break;
            }
        }
        result as i32
    }

    fn legendre(a: i64, p: i64) -> i64 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        let mut result = 1i64;
        let mut base = a % p;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e % 2 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e /= 2;
        }
        if result == p - 1 {
            -1
        } else {
            result
        }
    }

    #[test]
    fn jacobi_small_values() {
        assert_eq!(jacobi(1, 3).unwrap(), 1);
        assert_eq!(jacobi(2, 7).unwrap(), 1);
        assert_eq!(jacobi(3, 11).unwrap(), 1);
        assert_eq!(jacobi(2, 3).unwrap(), -1);
        assert_eq!(jacobi(0, 9).unwrap(), 0);
        assert_eq!(jacobi(15, 9).unwrap(), 0);
        assert_eq!(jacobi(7, 1).unwrap(), 1);
        assert_eq!(jacobi(-1, 3).unwrap(), -1);
        assert_eq!(jacobi(-1, 5).unwrap(), 1);
    }

    #[test]
    fn jacobi_rejects_bad_modulus() {
        assert_eq!(jacobi(1, 4), Err(ArithError::EvenModulus(4)));
        assert_eq!(jacobi(1, 0), Err(ArithError::NonPositiveModulus(0)));
        assert_eq!(jacobi(1, -3), Err(ArithError::NonPositiveModulus(-3)));
    }

    #[test]
    fn jacobi_matches_euler_oracle() {
        for b in (1..100).step_by(2) {
            for a in -50..=50 {
                assert_eq!(
                    jacobi(a, b).unwrap(),
                    jacobi_oracle(a, b),
                    "jacobi({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn jacobi_multiplicative_in_a() {
        for b in (1..100).step_by(2) {
            for a1 in -20..=20i64 {
                for a2 in -20..=20i64 {
                    let lhs = jacobi(a1 * a2, b).unwrap();
                    let rhs = jacobi(a1, b).unwrap() * jacobi(a2, b).unwrap();
                    assert_eq!(lhs, rhs, "a1={a1} a2={a2} b={b}");
                }
            }
        }
    }

    #[test]
    fn frac_in_unit_interval() {
        let q = Rational::new(BigInt::from(7), BigInt::from(4));
        assert_eq!(frac(&q), Rational::new(BigInt::from(3), BigInt::from(4)));
        let q = Rational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(frac(&q), Rational::new(BigInt::from(2), BigInt::from(3)));
        let q = Rational::from_integer(BigInt::from(-5));
        assert_eq!(frac(&q), Rational::from_integer(BigInt::from(0)));
    }

    #[test]
    fn frac_plus_floor_recovers_input() {
        for n in -30..30 {
            for d in 1..12 {
                let q = Rational::new(BigInt::from(n), BigInt::from(d));
                let f = frac(&q);
                assert!(f >= Rational::from_integer(BigInt::from(0)));
                assert!(f < Rational::from_integer(BigInt::from(1)));
                assert_eq!(q.floor() + f, q);
            }
        }
    }

    #[test]
    fn gauss_sum_trivial_modulus() {
        let g = gauss_sum(5, 1, 64).unwrap();
        assert!((g.re_f64() - 1.0).abs() < 1e-15);
        assert!(g.im_f64().abs() < 1e-15);
    }

    #[test]
    fn gauss_sum_b4_is_2_plus_2i() {
        let g = gauss_sum(1, 4, 128).unwrap();
        assert!((g.re_f64() - 2.0).abs() < 1e-20);
        assert!((g.im_f64() - 2.0).abs() < 1e-20);
    }

    #[test]
    fn gauss_sum_minus1_mod_2_vanishes() {
        let g = gauss_sum(-1, 2, 128).unwrap();
        assert!(g.re_f64().abs() < 1e-20);
        assert!(g.im_f64().abs() < 1e-20);
    }

    #[test]
    fn gauss_sum_rejects_bad_input() {
        assert!(matches!(
            gauss_sum(1, 0, 128),
            Err(ArithError::NonPositiveModulus(0))
        ));
        assert!(matches!(
            gauss_sum(1, 5, 32),
            Err(ArithError::PrecisionTooLow(32))
        ));
    }

    /// Classical magnitude law on a spot-check grid; the full sweep to
    /// b = 200 lives in the acceptance suite.
    #[test]
    fn gauss_sum_magnitude_spot_checks() {
        for b in 1..=40i64 {
            for a in [1i64, 3, -1, 7] {
                if num_integer::gcd(a.rem_euclid(b.max(1)), b) != 1 {
                    continue;
                }
                let g = gauss_sum(a, b, 128).unwrap();
                let mag = g.abs_f64();
                let expected = if b % 2 == 1 {
                    (b as f64).sqrt()
                } else if b % 4 == 2 {
                    0.0
                } else {
                    (2.0 * b as f64).sqrt()
                };
                assert!(
                    (mag - expected).abs() < 1e-12,
                    "|G({a},{b})| = {mag}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn gauss_sum_periodic_in_a() {
        for b in [3i64, 8, 12] {
            let g1 = gauss_sum(5, b, 128).unwrap();
            let g2 = gauss_sum(5 + b, b, 128).unwrap();
            assert!((g1.re_f64() - g2.re_f64()).abs() < 1e-25);
            assert!((g1.im_f64() - g2.im_f64()).abs() < 1e-25);
        }
    }

    #[test]
    fn bigfloat_roundtrip_f64() {
        for x in [0.0, 1.0, -2.5, 1234.5678, -1e-9, std::f64::consts::PI] {
            let b = BigFloat::from_f64(x, 128);
            assert_eq!(bigfloat_to_f64(&b), x);
        }
    }
}
