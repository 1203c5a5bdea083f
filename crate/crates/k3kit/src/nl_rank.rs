//! Rank of the span of Heegner divisors on the moduli space of degree-2l
//! quasi-polarized K3 surfaces, computed by two independent routes.
//!
//! The Gauss route evaluates
//!
//! ```text
//! rho(l) = 31l/24 + 55/24
//!          - Re(e^{5 pi i/12} (G(-1,4l) + G(3,4l))) / (6 sqrt(6l))
//!          - Re(G(-1,2l)) / (4 sqrt(2l))
//!          - sum_{k=0}^{l} {k^2/4l} - d_eis(l)
//! ```
//!
//! with high-precision Gauss sums, while the Jacobi route uses the exact
//! closed form
//!
//! ```text
//! rho(l) = (31l + 55)/24 - alpha(l)/4 - beta(l)/6
//!          - sum_{k=0}^{l} {k^2/4l} - d_eis(l)
//! ```
//!
//! whose value must be an integer. Reports carry both values; disagreement
//! beyond [`crate::tolerances::RANK_CROSS_FORMULA`] is an error, never
//! silently rounded away.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::{
    bigfloat_to_f64, gauss_sum, jacobi, rational_to_bigfloat, ArithError, ComplexHp, Rational,
};
use crate::tolerances::RANK_CROSS_FORMULA;

const RM: RoundingMode = RoundingMode::ToEven;

/// Independently known ranks for the four smallest degrees, used as a
/// regression anchor.
pub const REFERENCE_RANKS: [(u64, i64); 4] = [(1, 2), (2, 3), (3, 4), (4, 4)];

#[derive(Debug, Error, PartialEq)]
pub enum RankError {
    #[error("degree parameter l must be positive")]
    NonPositiveL,
    #[error("closed form for l = {l} is not an integer: {value}")]
    NotIntegral { l: u64, value: Rational },
    #[error("rank routes disagree at l = {l}: jacobi {jacobi}, gauss {gauss}")]
    CrossFormula {
        l: u64,
        jacobi: Rational,
        gauss: f64,
    },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Per-degree rank computation with every ingredient retained.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RankReport {
    pub l: u64,
    pub rank: i64,
    /// Value of the Gauss-sum route, rounded to f64 for reporting.
    pub gauss_value: f64,
    /// Exact value of the Jacobi-symbol route; equals `rank`.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub jacobi_value: Rational,
    pub alpha: i32,
    pub beta: i32,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub frac_sum: Rational,
    pub d_eis: u64,
}

/// Number of k in [0, l] with 4l | k^2, the count of Eisenstein boundary
/// contributions. Always at least 1 (k = 0).
pub fn d_eis(l: u64) -> Result<u64, RankError> {
    if l == 0 {
        return Err(RankError::NonPositiveL);
    }
    let m = 4 * l as u128;
    Ok((0..=l as u128).filter(|k| (k * k) % m == 0).count() as u64)
}

/// Correction term alpha(l): zero for odd l, the Jacobi symbol (2l / 2l-1)
/// otherwise.
pub fn alpha(l: u64) -> Result<i32, RankError> {
    if l == 0 {
        return Err(RankError::NonPositiveL);
    }
    if l % 2 == 1 {
        Ok(0)
    } else {
        Ok(jacobi(2 * l as i64, 2 * l as i64 - 1)?)
    }
}

/// Correction term beta(l): (l / 4l-1) - 1 when 3 | l, and
/// (l / 4l-1) + (l / 3) otherwise.
pub fn beta(l: u64) -> Result<i32, RankError> {
    if l == 0 {
        return Err(RankError::NonPositiveL);
    }
    let li = l as i64;
    let main = jacobi(li, 4 * li - 1)?;
    if l.is_multiple_of(3) {
        Ok(main - 1)
    } else {
        Ok(main + jacobi(li, 3)?)
    }
}

/// Exact sum_{k=0}^{l} {k^2 / 4l}.
pub fn frac_square_sum(l: u64) -> Result<Rational, RankError> {
    if l == 0 {
        return Err(RankError::NonPositiveL);
    }
    let m = 4 * l as u128;
    let total: u128 = (0..=l as u128).map(|k| (k * k) % m).sum();
    Ok(Rational::new(BigInt::from(total), BigInt::from(m)))
}

/// Exact closed form via Jacobi symbols. The result is a rational that must
/// be an integer for every valid l; integrality is the caller's check.
pub fn rank_via_jacobi(l: u64) -> Result<Rational, RankError> {
    if l == 0 {
        return Err(RankError::NonPositiveL);
    }
    let main = Rational::new(BigInt::from(31 * l as i64 + 55), BigInt::from(24));
    let a = Rational::new(BigInt::from(alpha(l)?), BigInt::from(4));
    let b = Rational::new(BigInt::from(beta(l)?), BigInt::from(6));
    let fs = frac_square_sum(l)?;
    let de = Rational::from_integer(BigInt::from(d_eis(l)?));
    Ok(main - a - b - fs - de)
}

/// Gauss-sum route at the given mantissa precision.
pub fn rank_via_gauss(l: u64, prec: usize) -> Result<BigFloat, RankError> {
    if l == 0 {
        return Err(RankError::NonPositiveL);
    }
    let li = l as i64;
    let g_minus1_4l = gauss_sum(-1, 4 * li, prec)?;
    let g_3_4l = gauss_sum(3, 4 * li, prec)?;
    let g_minus1_2l = gauss_sum(-1, 2 * li, prec)?;

    let mut cc = Consts::new().expect("constants cache");
    let pi = cc.pi(prec, RM);
    // e^{5 pi i / 12}
    let angle =
        pi.mul(&BigFloat::from_i64(5, prec), prec, RM)
            .div(&BigFloat::from_i64(12, prec), prec, RM);
    let phase = ComplexHp::unit(&angle, prec, &mut cc);

    let twisted = phase.mul(&g_minus1_4l.add(&g_3_4l, prec), prec);
    let denom1 =
        BigFloat::from_i64(6 * li, prec)
            .sqrt(prec, RM)
            .mul(&BigFloat::from_i64(6, prec), prec, RM);
    let term1 = twisted.re().div(&denom1, prec, RM);

    let denom2 =
        BigFloat::from_i64(2 * li, prec)
            .sqrt(prec, RM)
            .mul(&BigFloat::from_i64(4, prec), prec, RM);
    let term2 = g_minus1_2l.re().div(&denom2, prec, RM);

    let rational_part = {
        let main = Rational::new(BigInt::from(31 * li), BigInt::from(24))
            + Rational::new(BigInt::from(55), BigInt::from(24));
        let fs = frac_square_sum(l)?;
        let de = Rational::from_integer(BigInt::from(d_eis(l)? as i64));
        main - fs - de
    };

    Ok(rational_to_bigfloat(&rational_part, prec)
        .sub(&term1, prec, RM)
        .sub(&term2, prec, RM))
}

/// Runs both routes, checks integrality of the closed form and agreement of
/// the Gauss evaluation, and assembles the report.
pub fn rank_report(l: u64, prec: usize) -> Result<RankReport, RankError> {
    let jv = rank_via_jacobi(l)?;
    if !jv.is_integer() {
        return Err(RankError::NotIntegral { l, value: jv });
    }
    let rank = jv.to_integer().to_i64().expect("rank fits in i64");
    let gauss = rank_via_gauss(l, prec)?;
    let gv = bigfloat_to_f64(&gauss);
    if (gv - rank as f64).abs() >= RANK_CROSS_FORMULA {
        return Err(RankError::CrossFormula {
            l,
            jacobi: jv,
            gauss: gv,
        });
    }
    Ok(RankReport {
        l,
        rank,
        gauss_value: gv,
        jacobi_value: jv,
        alpha: alpha(l)?,
        beta: beta(l)?,
        frac_sum: frac_square_sum(l)?,
        d_eis: d_eis(l)?,
    })
}

/// Reports for every degree parameter in [from, to].
pub fn sweep(from: u64, to: u64, prec: usize) -> Result<Vec<RankReport>, RankError> {
    (from..=to).map(|l| rank_report(l, prec)).collect()
}
