//! Torus stability analysis for cubic sections of a smooth quadric
//! threefold.
//!
//! The ambient quadric {x0x4 + x1x3 + x2^2 = 0} in P^4 has automorphism
//! group SO(5), whose normalized one-parameter subgroups are
//! diag(t^u, t^v, 1, t^-v, t^-u) with u >= v >= 0. Cubic sections live in
//! the 30-dimensional space spanned by the degree-3 monomials with
//! a0*a4 = 0 (the basis B); the weight of such a monomial is
//! (a0 - a4)u + (a1 - a3)v.
//!
//! A cubic support is destabilized by lambda when every monomial weight is
//! non-positive (not properly stable) or negative (unstable). This module
//! computes the weight sets M_{<=0}(lambda) and M_{<0}(lambda), their
//! maximal classes over the chamber decomposition of the cone, invariant
//! and fixed monomial loci, and exact torus destabilizers.
//!
//! The two table modes use different redundancy rules, both forced by the
//! chamber geometry. Non-positive sets are compared by plain inclusion,
//! which yields exactly three maximal classes. Strict sets are reduced by
//! union coverage in enumeration order: M_{<0}((3,1)) strictly contains
//! M_{<0}((1,0)) (x3^3 joins the ten x4-multiples), so pairwise inclusion
//! would promote chamber representatives (3,1) and (3,2) instead of the
//! classical pair; every strictly negative monomial already occurs in
//! M_{<0}((1,0)) or M_{<0}((1,1)), and the union rule keeps exactly those
//! two rows.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Grid bound for chamber enumeration. Critical slopes v/u are ratios of
/// integers bounded by 3 (weights use a0 - a4 and a1 - a3, both in
/// [-3, 3]), so mediants of adjacent critical rays have entries at most 6;
/// a grid up to 12 samples every ray and every open chamber.
pub const CHAMBER_GRID_BOUND: i64 = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CubicError {
    #[error("exponents {0:?} sum to {1}, expected degree 3")]
    BadDegree([u8; 5], u32),
    #[error("monomial {0:?} lies outside the basis (a0*a4 != 0)")]
    NotInBasis([u8; 5]),
    #[error("support must be non-empty")]
    EmptySupport,
    #[error(
        "one-parameter subgroup ({0},{1}) is not normalized (need u >= v >= 0, not both zero)"
    )]
    NotNormalized(i64, i64),
    #[error("weight vector {0:?} is not antisymmetric (need w_i = -w_(4-i))")]
    NotAntisymmetric([i64; 5]),
}

/// Degree-3 monomial in x0..x4, stored by exponent vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial5 {
    exps: [u8; 5],
}

impl Monomial5 {
    pub fn new(exps: [u8; 5]) -> Result<Self, CubicError> {
        let sum: u32 = exps.iter().map(|&e| e as u32).sum();
        if sum != 3 {
            return Err(CubicError::BadDegree(exps, sum));
        }
        Ok(Self { exps })
    }

    pub fn exponents(&self) -> [u8; 5] {
        self.exps
    }

    /// Monomials of the ambient basis avoid the reducible product x0x4.
    pub fn in_basis(&self) -> bool {
        self.exps[0] * self.exps[4] == 0
    }

    /// The three variable indices with multiplicity, ascending:
    /// x0x3^2 -> [0, 3, 3].
    pub fn sorted_indices(&self) -> [u8; 3] {
        let mut idx = [0u8; 3];
        let mut k = 0;
        for (i, &e) in self.exps.iter().enumerate() {
            for _ in 0..e {
                idx[k] = i as u8;
                k += 1;
            }
        }
        idx
    }

    /// Index-domination partial order: lower indices carry higher weight
    /// for every normalized 1-PS, so if self dominates other then
    /// weight(self) >= weight(other) everywhere on the cone.
    pub fn dominates(&self, other: &Self) -> bool {
        self.sorted_indices()
            .iter()
            .zip(other.sorted_indices())
            .all(|(&a, b)| a <= b)
    }
}

impl fmt::Display for Monomial5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "x{i}")?,
                _ => write!(f, "x{i}^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial5 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.exps)
    }
}

impl<'de> Deserialize<'de> for Monomial5 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let exps = <[u8; 5]>::deserialize(d)?;
        Monomial5::new(exps).map_err(D::Error::custom)
    }
}

/// Normalized 1-PS diag(t^u, t^v, 1, t^-v, t^-u) with u >= v >= 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOnePs2")]
pub struct OnePs2 {
    u: i64,
    v: i64,
}

#[derive(Deserialize)]
struct RawOnePs2 {
    u: i64,
    v: i64,
}

impl TryFrom<RawOnePs2> for OnePs2 {
    type Error = CubicError;
    fn try_from(raw: RawOnePs2) -> Result<Self, Self::Error> {
        OnePs2::new(raw.u, raw.v)
    }
}

impl OnePs2 {
    pub fn new(u: i64, v: i64) -> Result<Self, CubicError> {
        if u >= v && v >= 0 && (u, v) != (0, 0) {
            Ok(Self { u, v })
        } else {
            Err(CubicError::NotNormalized(u, v))
        }
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    pub fn weight(&self, m: &Monomial5) -> i64 {
        let e = m.exponents();
        (e[0] as i64 - e[4] as i64) * self.u + (e[1] as i64 - e[3] as i64) * self.v
    }
}

impl fmt::Display for OnePs2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// The 30 basis monomials in descending lexicographic order of exponent
/// vectors, x0^3 first and x4^3 last.
pub fn basis_b() -> Vec<Monomial5> {
    let mut out = Vec::with_capacity(30);
    for a0 in (0..=3u8).rev() {
        for a1 in (0..=3 - a0).rev() {
            for a2 in (0..=3 - a0 - a1).rev() {
                for a3 in (0..=3 - a0 - a1 - a2).rev() {
                    let a4 = 3 - a0 - a1 - a2 - a3;
                    if a0 * a4 == 0 {
                        out.push(Monomial5 {
                            exps: [a0, a1, a2, a3, a4],
                        });
                    }
                }
            }
        }
    }
    debug_assert_eq!(out.len(), 30);
    out
}

/// Non-empty subset of the basis, kept in basis (descending lex) order.
/// Serializes as a plain JSON array of exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicSupport {
    monomials: Vec<Monomial5>,
}

impl Serialize for CubicSupport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(&self.monomials)
    }
}

impl<'de> Deserialize<'de> for CubicSupport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<Monomial5>::deserialize(d)?;
        CubicSupport::new(raw).map_err(D::Error::custom)
    }
}

impl CubicSupport {
    pub fn new(monomials: impl IntoIterator<Item = Monomial5>) -> Result<Self, CubicError> {
        let set: BTreeSet<Monomial5> = monomials.into_iter().collect();
        if set.is_empty() {
            return Err(CubicError::EmptySupport);
        }
        if let Some(bad) = set.iter().find(|m| !m.in_basis()) {
            return Err(CubicError::NotInBasis(bad.exponents()));
        }
        Ok(Self {
            monomials: set.into_iter().rev().collect(),
        })
    }

    pub fn monomials(&self) -> &[Monomial5] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: &Monomial5) -> bool {
        self.monomials.contains(m)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.monomials.iter().all(|m| other.contains(m))
    }
}

/// Basis monomials with non-positive weight under lambda; never empty
/// (x4^3 has weight -3u < 0).
pub fn nonpositive_set(lambda: &OnePs2) -> CubicSupport {
    CubicSupport::new(basis_b().into_iter().filter(|m| lambda.weight(m) <= 0))
        .expect("x4^3 always qualifies")
}

/// Basis monomials with strictly negative weight under lambda.
pub fn negative_set(lambda: &OnePs2) -> CubicSupport {
    CubicSupport::new(basis_b().into_iter().filter(|m| lambda.weight(m) < 0))
        .expect("x4^3 always qualifies")
}

/// Basis monomials of weight exactly zero: the part of a lambda-limit that
/// survives. Never empty (x2^3 has weight zero for every lambda).
pub fn invariant_monomials(lambda: &OnePs2) -> CubicSupport {
    CubicSupport::new(basis_b().into_iter().filter(|m| lambda.weight(m) == 0))
        .expect("x2^3 always qualifies")
}

/// Basis monomials annihilated by an antisymmetric torus weight vector w
/// (w_i = -w_(4-i), as required of the diagonal torus of SO(5)). Rejects
/// non-antisymmetric w.
pub fn fixed_monomials(w: [i64; 5]) -> Result<CubicSupport, CubicError> {
    if (0..5).any(|i| w[i] != -w[4 - i]) {
        return Err(CubicError::NotAntisymmetric(w));
    }
    Ok(CubicSupport::new(basis_b().into_iter().filter(|m| {
        m.exponents()
            .iter()
            .zip(w)
            .map(|(&a, wi)| a as i64 * wi)
            .sum::<i64>()
            == 0
    }))
    .expect("x2^3 always qualifies"))
}

/// Which weight-set family a table row describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SetMode {
    /// Not properly stable: all support weights <= 0.
    NonPositive,
    /// Unstable: all support weights < 0.
    Negative,
}

/// One row of a maximal-class table: the first chamber representative that
/// produced the class, the full weight set, and the short presentation the
/// tables print (weight-zero elements for the non-positive rows,
/// domination-maximal elements for the strict rows).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberRow {
    pub rep: OnePs2,
    pub listed: Vec<Monomial5>,
    pub set: CubicSupport,
}

/// Elements of the set not strictly dominated by another element.
fn domination_maxima(set: &CubicSupport) -> Vec<Monomial5> {
    set.monomials()
        .iter()
        .filter(|m| {
            !set.monomials()
                .iter()
                .any(|other| other != *m && other.dominates(m))
        })
        .copied()
        .collect()
}

/// Every monomial of the basis dominated by some element of `listed`.
pub fn domination_closure(listed: &[Monomial5]) -> Vec<Monomial5> {
    basis_b()
        .into_iter()
        .filter(|m| listed.iter().any(|l| l.dominates(m)))
        .collect()
}

/// Enumerates chamber representatives over the grid 0 <= v <= u <=
/// [`CHAMBER_GRID_BOUND`], computes each weight set, and reduces to the
/// maximal classes (see the module notes for why the two modes reduce
/// differently). Rows are tagged with the first representative that
/// produced them, in enumeration order (u ascending, then v).
pub fn maximal_chamber_sets(mode: SetMode) -> Vec<ChamberRow> {
    let mut classes: Vec<(OnePs2, CubicSupport)> = Vec::new();
    for u in 1..=CHAMBER_GRID_BOUND {
        for v in 0..=u {
            let lambda = OnePs2::new(u, v).expect("grid point is normalized");
            let set = match mode {
                SetMode::NonPositive => nonpositive_set(&lambda),
                SetMode::Negative => negative_set(&lambda),
            };
            if !classes.iter().any(|(_, s)| *s == set) {
                classes.push((lambda, set));
            }
        }
    }
    let kept: Vec<(OnePs2, CubicSupport)> = match mode {
        SetMode::NonPositive => classes
            .iter()
            .filter(|(_, s)| !classes.iter().any(|(_, t)| t != s && s.is_subset_of(t)))
            .cloned()
            .collect(),
        SetMode::Negative => {
            let mut kept: Vec<(OnePs2, CubicSupport)> = Vec::new();
            let mut covered: BTreeSet<Monomial5> = BTreeSet::new();
            for (rep, set) in classes {
                if set.monomials().iter().any(|m| !covered.contains(m)) {
                    covered.extend(set.monomials().iter().copied());
                    kept.push((rep, set));
                }
            }
            kept
        }
    };
    kept.into_iter()
        .map(|(rep, set)| {
            let listed = match mode {
                SetMode::NonPositive => invariant_monomials(&rep).monomials().to_vec(),
                SetMode::Negative => domination_maxima(&set),
            };
            ChamberRow { rep, listed, set }
        })
        .collect()
}

fn mono(exps: [u8; 5]) -> Monomial5 {
    Monomial5::new(exps).expect("reference monomial is degree 3")
}

/// The frozen table rows: three non-positive classes and two strict
/// classes with their printed monomial lists.
pub fn reference_rows(mode: SetMode) -> Vec<ChamberRow> {
    let row = |u, v, listed: Vec<Monomial5>| {
        let rep = OnePs2::new(u, v).expect("reference rep is normalized");
        let set = match mode {
            SetMode::NonPositive => nonpositive_set(&rep),
            SetMode::Negative => negative_set(&rep),
        };
        ChamberRow { rep, listed, set }
    };
    match mode {
        SetMode::NonPositive => vec![
            row(
                1,
                0,
                // all ten cubic monomials in x1, x2, x3
                vec![
                    mono([0, 3, 0, 0, 0]),
                    mono([0, 2, 1, 0, 0]),
                    mono([0, 2, 0, 1, 0]),
                    mono([0, 1, 2, 0, 0]),
                    mono([0, 1, 1, 1, 0]),
                    mono([0, 1, 0, 2, 0]),
                    mono([0, 0, 3, 0, 0]),
                    mono([0, 0, 2, 1, 0]),
                    mono([0, 0, 1, 2, 0]),
                    mono([0, 0, 0, 3, 0]),
                ],
            ),
            row(
                1,
                1,
                // x0x2x3, x1x2x3, x1x2x4, x2^3
                vec![
                    mono([1, 0, 1, 1, 0]),
                    mono([0, 1, 1, 1, 0]),
                    mono([0, 1, 1, 0, 1]),
                    mono([0, 0, 3, 0, 0]),
                ],
            ),
            row(
                2,
                1,
                // x0x3^2, x1^2x4, x1x2x3, x2^3
                vec![
                    mono([1, 0, 0, 2, 0]),
                    mono([0, 2, 0, 0, 1]),
                    mono([0, 1, 1, 1, 0]),
                    mono([0, 0, 3, 0, 0]),
                ],
            ),
        ],
        SetMode::Negative => vec![
            // x1^2x4
            row(1, 0, vec![mono([0, 2, 0, 0, 1])]),
            // x0x3^2, x2^2x3
            row(1, 1, vec![mono([1, 0, 0, 2, 0]), mono([0, 0, 2, 1, 0])]),
        ],
    }
}

/// A verified destabilizer: the 1-PS and every support monomial's weight
/// under it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DestabilizerCertificate {
    pub lambda: OnePs2,
    pub strict: bool,
    pub weights: Vec<(Monomial5, i64)>,
}

/// Searches for a normalized 1-PS giving every support monomial
/// non-positive (strict: negative) weight.
///
/// The feasible region is an intersection of half-planes through the
/// origin with the cone u >= v >= 0, so feasibility is decided on finitely
/// many rays: the cone edges, the zero lines of the support weights, and
/// one interior ray (the mediant) per chamber between adjacent candidates.
/// Candidates are tested in ascending slope order and the first feasible
/// one is returned, which keeps the output deterministic and prefers the
/// simplest certificates.
pub fn torus_destabilizer(f: &CubicSupport, strict: bool) -> Option<DestabilizerCertificate> {
    let mut rays: BTreeSet<(i64, i64)> = BTreeSet::new();
    rays.insert((1, 0));
    rays.insert((1, 1));
    for m in f.monomials() {
        let e = m.exponents();
        let p = e[0] as i64 - e[4] as i64;
        let q = e[1] as i64 - e[3] as i64;
        // zero line pu + qv = 0 meets the open cone only if p, q have
        // opposite signs and the slope -p/q lies in (0, 1)
        if p * q < 0 {
            let (ru, rv) = (q.abs(), p.abs());
            if rv < ru {
                let g = num_integer::gcd(ru, rv);
                rays.insert((ru / g, rv / g));
            }
        }
    }
    let mut rays: Vec<(i64, i64)> = rays.into_iter().collect();
    // ascending slope v/u, exact comparison
    rays.sort_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)));
    let mut candidates = Vec::with_capacity(2 * rays.len() - 1);
    for (i, &ray) in rays.iter().enumerate() {
        candidates.push(ray);
        if let Some(&next) = rays.get(i + 1) {
            candidates.push((ray.0 + next.0, ray.1 + next.1));
        }
    }
    for (u, v) in candidates {
        let lambda = OnePs2::new(u, v).expect("candidate rays lie in the cone");
        let weights: Vec<(Monomial5, i64)> = f
            .monomials()
            .iter()
            .map(|m| (*m, lambda.weight(m)))
            .collect();
        let ok = if strict {
            weights.iter().all(|&(_, w)| w < 0)
        } else {
            weights.iter().all(|&(_, w)| w <= 0)
        };
        if ok {
            return Some(DestabilizerCertificate {
                lambda,
                strict,
                weights,
            });
        }
    }
    None
}

/// Support pattern families from the stability tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PatternTag {
    N1,
    N2,
    N3,
    U1,
    U2,
    Xi,
}

impl fmt::Display for PatternTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PatternTag::N1 => "N1",
            PatternTag::N2 => "N2",
            PatternTag::N3 => "N3",
            PatternTag::U1 => "U1",
            PatternTag::U2 => "U2",
            PatternTag::Xi => "xi",
        };
        write!(f, "{s}")
    }
}

/// All pattern families whose closed support set contains f. N1-N3 test
/// against the non-positive sets of the three table representatives,
/// U1/U2 against the strict sets of the two, and Xi against the common
/// specialization span {x2^3, x1x2x3}.
pub fn match_normal_form(f: &CubicSupport) -> Vec<PatternTag> {
    let xi = CubicSupport::new([mono([0, 0, 3, 0, 0]), mono([0, 1, 1, 1, 0])]).expect("xi family");
    let l10 = OnePs2::new(1, 0).expect("normalized");
    let l11 = OnePs2::new(1, 1).expect("normalized");
    let l21 = OnePs2::new(2, 1).expect("normalized");
    let families = [
        (PatternTag::N1, nonpositive_set(&l10)),
        (PatternTag::N2, nonpositive_set(&l11)),
        (PatternTag::N3, nonpositive_set(&l21)),
        (PatternTag::U1, negative_set(&l10)),
        (PatternTag::U2, negative_set(&l11)),
        (PatternTag::Xi, xi),
    ];
    families
        .into_iter()
        .filter(|(_, family)| f.is_subset_of(family))
        .map(|(tag, _)| tag)
        .collect()
}
