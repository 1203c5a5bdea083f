//! Stability of nets of quadrics in P^5 under normalized one-parameter
//! subgroups of SL(6).
//!
//! A net is a three-dimensional space of quadrics, recorded by exact
//! rational coordinates over the 21 quadratic monomials x_i x_j. For a
//! normalized 1-PS lambda = diag(t^a0, ..., t^a5) with a0 >= ... >= a5 and
//! zero sum, the weight of x_i x_j is a_i + a_j, and quadratic monomials
//! are compared by weight with ties broken by the fixed order
//! x0^2 > x0x1 > ... > x5^2. Echelon reduction of the net against the
//! lambda-sorted monomials produces leading terms m1 >_lambda m2 >_lambda
//! m3 whose weight sum is the extremal Pluecker weight: the net is not
//! properly stable for lambda exactly when that sum is non-positive.
//!
//! The admissibility conditions cut worse-than-nodal behaviour out of the
//! boundary search: a leading triple that fails one of the point
//! conditions has a singularity of multiplicity greater than two, and one
//! that fails a curve condition is singular along a curve. These
//! comparisons are made on weights alone. Refining ties by the fixed
//! monomial order is not self-consistent: the frozen row with lambda
//! (4,1,1,-2,-2,-2) has m2 = x1^2 with the same weight as x0x5 but lower
//! fixed order, so the refined reading rejects a row that the weight
//! reading (and the row's published purpose) accepts.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("monomial index {0} out of range (need 0..=5)")]
    IndexOutOfRange(u8),
    #[error("1-PS weights {0:?} are not sorted in descending order")]
    NotDescending([i64; 6]),
    #[error("1-PS weights {0:?} do not sum to zero")]
    NonZeroSum([i64; 6]),
    #[error("1-PS weight vector must be non-zero")]
    ZeroOnePs,
    #[error("coefficient denominator is zero")]
    ZeroDenominator,
    #[error("net rows are linearly dependent (rank {0} < 3)")]
    DependentNet(usize),
    #[error("triple is not strictly descending in the lambda order")]
    UnorderedTriple,
    #[error("search bound must be at least 5, got {0}")]
    BoundTooSmall(u32),
}

/// Quadratic monomial x_i x_j with 0 <= i <= j <= 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuad")]
pub struct QuadMonomial {
    i: u8,
    j: u8,
}

#[derive(Deserialize)]
struct RawQuad {
    i: u8,
    j: u8,
}

impl TryFrom<RawQuad> for QuadMonomial {
    type Error = NetError;
    fn try_from(raw: RawQuad) -> Result<Self, Self::Error> {
        QuadMonomial::new(raw.i, raw.j)
    }
}

pub const QUAD_COUNT: usize = 21;

impl QuadMonomial {
    /// Indices in either order; they are stored sorted.
    pub fn new(i: u8, j: u8) -> Result<Self, NetError> {
        if i > 5 {
            return Err(NetError::IndexOutOfRange(i));
        }
        if j > 5 {
            return Err(NetError::IndexOutOfRange(j));
        }
        Ok(Self {
            i: i.min(j),
            j: i.max(j),
        })
    }

    pub fn indices(&self) -> (u8, u8) {
        (self.i, self.j)
    }

    /// Position in the fixed descending order x0^2 > x0x1 > ... > x5^2.
    pub fn id(&self) -> usize {
        let i = self.i as usize;
        let j = self.j as usize;
        // row i starts after the 6 + 5 + ... + (6 - i + 1) earlier pairs
        i * (13 - i) / 2 + (j - i)
    }

    pub fn from_id(id: usize) -> Self {
        let mut i = 0usize;
        let mut off = 0usize;
        while off + (6 - i) <= id {
            off += 6 - i;
            i += 1;
        }
        Self {
            i: i as u8,
            j: (i + id - off) as u8,
        }
    }

    /// All 21 monomials in fixed descending order.
    pub fn all() -> Vec<Self> {
        (0..QUAD_COUNT).map(Self::from_id).collect()
    }

    pub fn weight(&self, lambda: &OnePs5) -> i64 {
        lambda.a[self.i as usize] + lambda.a[self.j as usize]
    }
}

impl fmt::Display for QuadMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i == self.j {
            write!(f, "x{}^2", self.i)
        } else {
            write!(f, "x{}x{}", self.i, self.j)
        }
    }
}

/// Normalized 1-PS of SL(6): weights descending with zero sum, not all
/// zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOnePs5")]
pub struct OnePs5 {
    a: [i64; 6],
}

#[derive(Deserialize)]
struct RawOnePs5 {
    a: [i64; 6],
}

impl TryFrom<RawOnePs5> for OnePs5 {
    type Error = NetError;
    fn try_from(raw: RawOnePs5) -> Result<Self, Self::Error> {
        OnePs5::new(raw.a)
    }
}

impl OnePs5 {
    pub fn new(a: [i64; 6]) -> Result<Self, NetError> {
        if a.windows(2).any(|w| w[0] < w[1]) {
            return Err(NetError::NotDescending(a));
        }
        if a.iter().sum::<i64>() != 0 {
            return Err(NetError::NonZeroSum(a));
        }
        if a == [0; 6] {
            return Err(NetError::ZeroOnePs);
        }
        Ok(Self { a })
    }

    pub fn weights(&self) -> [i64; 6] {
        self.a
    }
}

impl fmt::Display for OnePs5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{})",
            self.a[0], self.a[1], self.a[2], self.a[3], self.a[4], self.a[5]
        )
    }
}

/// The complete order on quadratic monomials induced by lambda: compare
/// weights, break ties by the fixed order (smaller id is larger).
pub fn order_gt(m: &QuadMonomial, n: &QuadMonomial, lambda: &OnePs5) -> bool {
    let (wm, wn) = (m.weight(lambda), n.weight(lambda));
    wm > wn || (wm == wn && m.id() < n.id())
}

/// The 21 monomials sorted descending in the lambda order.
pub fn sorted_monomials(lambda: &OnePs5) -> Vec<QuadMonomial> {
    let mut all = QuadMonomial::all();
    all.sort_by(|m, n| {
        n.weight(lambda)
            .cmp(&m.weight(lambda))
            .then(m.id().cmp(&n.id()))
    });
    all
}

/// Net of quadrics: three linearly independent coefficient vectors over
/// the 21 monomials, exact rational entries indexed by monomial id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricNet {
    rows: [Vec<Rational>; 3],
}

/// One term of a serialized net row: coefficient num/den on x_i x_j.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetTerm {
    pub i: u8,
    pub j: u8,
    pub num: i64,
    pub den: i64,
}

impl QuadricNet {
    /// Builds a net from three sparse rows, accumulating repeated
    /// monomials, and rejects rank-deficient input.
    pub fn new(rows: [Vec<(QuadMonomial, Rational)>; 3]) -> Result<Self, NetError> {
        let mut dense: [Vec<Rational>; 3] =
            std::array::from_fn(|_| vec![Rational::zero(); QUAD_COUNT]);
        for (r, row) in rows.into_iter().enumerate() {
            for (m, c) in row {
                dense[r][m.id()] += c;
            }
        }
        let rank = rank_of(&dense);
        if rank < 3 {
            return Err(NetError::DependentNet(rank));
        }
        Ok(Self { rows: dense })
    }

    pub fn from_terms(rows: [Vec<NetTerm>; 3]) -> Result<Self, NetError> {
        let mut sparse: [Vec<(QuadMonomial, Rational)>; 3] = std::array::from_fn(|_| Vec::new());
        for (r, row) in rows.into_iter().enumerate() {
            for t in row {
                if t.den == 0 {
                    return Err(NetError::ZeroDenominator);
                }
                sparse[r].push((
                    QuadMonomial::new(t.i, t.j)?,
                    Rational::new(t.num.into(), t.den.into()),
                ));
            }
        }
        Self::new(sparse)
    }

    /// Unit-coefficient net from monomial supports. Accidental
    /// cancellation between equal-support rows is not modeled; callers
    /// wanting exact coefficients should use [`QuadricNet::new`].
    pub fn from_supports(rows: [Vec<QuadMonomial>; 3]) -> Result<Self, NetError> {
        Self::new(rows.map(|row| row.into_iter().map(|m| (m, Rational::one())).collect()))
    }

    pub fn rows(&self) -> &[Vec<Rational>; 3] {
        &self.rows
    }
}

#[allow(clippy::needless_range_loop)] // elimination indexes two rows at once
fn rank_of(rows: &[Vec<Rational>; 3]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..QUAD_COUNT {
        let Some(pivot) = (rank..3).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..3 {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for c in col..QUAD_COUNT {
                    let sub = &factor * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == 3 {
            break;
        }
    }
    rank
}

/// Echelon leading monomials m1 >_lambda m2 >_lambda m3 of a net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingTriple {
    pub m1: QuadMonomial,
    pub m2: QuadMonomial,
    pub m3: QuadMonomial,
}

impl LeadingTriple {
    /// Validates the ordering m1 >_lambda m2 >_lambda m3.
    pub fn new_ordered(
        m1: QuadMonomial,
        m2: QuadMonomial,
        m3: QuadMonomial,
        lambda: &OnePs5,
    ) -> Result<Self, NetError> {
        if order_gt(&m1, &m2, lambda) && order_gt(&m2, &m3, lambda) {
            Ok(Self { m1, m2, m3 })
        } else {
            Err(NetError::UnorderedTriple)
        }
    }

    pub fn monomials(&self) -> [QuadMonomial; 3] {
        [self.m1, self.m2, self.m3]
    }
}

impl fmt::Display for LeadingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m1, self.m2, self.m3)
    }
}

/// Row-reduces the net against the monomials in descending lambda order
/// and returns the three pivot monomials. Pivot columns depend only on
/// the row space, so the result is invariant under change of basis of the
/// net.
#[allow(clippy::needless_range_loop)] // elimination indexes two rows at once
pub fn leading_terms(net: &QuadricNet, lambda: &OnePs5) -> LeadingTriple {
    let order = sorted_monomials(lambda);
    let mut m: Vec<Vec<Rational>> = net.rows().to_vec();
    let mut pivots: Vec<QuadMonomial> = Vec::with_capacity(3);
    let mut rank = 0usize;
    for mono in order {
        let col = mono.id();
        let Some(pivot) = (rank..3).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..3 {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for c in 0..QUAD_COUNT {
                    let sub = &factor * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(mono);
        rank += 1;
        if rank == 3 {
            break;
        }
    }
    debug_assert_eq!(pivots.len(), 3, "net constructor guarantees rank 3");
    LeadingTriple {
        m1: pivots[0],
        m2: pivots[1],
        m3: pivots[2],
    }
}

/// Weight of the Pluecker coordinate m1 ^ m2 ^ m3: the sum of the three
/// monomial weights.
pub fn plucker_weight(t: &LeadingTriple, lambda: &OnePs5) -> i64 {
    t.monomials().iter().map(|m| m.weight(lambda)).sum()
}

/// Outcome of the numerical criterion for one lambda.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityCertificate {
    pub lambda: OnePs5,
    pub triple: LeadingTriple,
    pub weights: [i64; 3],
    pub total: i64,
    pub not_properly_stable: bool,
}

/// Computes leading terms and their Pluecker weight; the net is not
/// properly stable with respect to lambda exactly when the weight is
/// non-positive.
pub fn not_properly_stable_wrt(net: &QuadricNet, lambda: &OnePs5) -> StabilityCertificate {
    let triple = leading_terms(net, lambda);
    let weights = triple.monomials().map(|m| m.weight(lambda));
    let total = weights.iter().sum();
    StabilityCertificate {
        lambda: *lambda,
        triple,
        weights,
        total,
        not_properly_stable: total <= 0,
    }
}

/// Per-condition report of the singularity admissibility checks. The
/// three point conditions exclude a singular point of multiplicity
/// greater than two; the three curve conditions exclude singularity along
/// a curve. All comparisons are weight comparisons (see module notes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub point_conditions: [bool; 3],
    pub curve_conditions: [bool; 3],
    pub admissible: bool,
}

/// Evaluates the six admissibility conditions for an ordered leading
/// triple.
pub fn admissibility_check(t: &LeadingTriple, lambda: &OnePs5) -> AdmissibilityReport {
    let a = lambda.weights();
    let w = |i: usize, j: usize| a[i] + a[j];
    let [w1, w2, w3] = t.monomials().map(|m| m.weight(lambda));

    let c1 = w1 >= w(0, 4);
    let c2 = if t.m1.indices() == (0, 0) {
        w2 >= w(1, 5)
    } else {
        w2 >= w(0, 5)
    };
    let c3 = if w1 < w(0, 3) { w3 >= w(3, 3) } else { true };

    let c1p = if w3 < w(1, 5) || w2 < w(1, 4) {
        w1 >= w(1, 1)
    } else {
        w1 >= w(1, 3).max(w(2, 2))
    };
    let c2p = if w3 < w(2, 5) {
        w2 >= w(2, 2)
    } else if w1 < w(1, 1) {
        w2 >= w(1, 4).max(w(3, 3))
    } else {
        w2 >= w(2, 4).max(w(3, 3))
    };
    let c3p = w3 >= w(3, 5).max(w(4, 4));

    AdmissibilityReport {
        point_conditions: [c1, c2, c3],
        curve_conditions: [c1p, c2p, c3p],
        admissible: c1 && c2 && c3 && c1p && c2p && c3p,
    }
}

/// One frozen row of the reference table: the 1-PS and the three slots of
/// equal-weight monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetTableRow {
    pub lambda: OnePs5,
    pub slots: [Vec<QuadMonomial>; 3],
}

impl NetTableRow {
    /// The distinguished triple of a row: the largest monomial of each
    /// slot in the lambda order, skipping monomials already taken by an
    /// earlier slot.
    pub fn slot_maxima(&self) -> LeadingTriple {
        let mut taken: Vec<QuadMonomial> = Vec::with_capacity(3);
        for slot in &self.slots {
            let max = slot
                .iter()
                .filter(|m| !taken.contains(m))
                .max_by(|m, n| {
                    if order_gt(m, n, &self.lambda) {
                        std::cmp::Ordering::Greater
                    } else {
                        std::cmp::Ordering::Less
                    }
                })
                .expect("slot has an unused monomial");
            taken.push(*max);
        }
        LeadingTriple::new_ordered(taken[0], taken[1], taken[2], &self.lambda)
            .expect("slot maxima descend in the lambda order")
    }
}

fn quad(i: u8, j: u8) -> QuadMonomial {
    QuadMonomial::new(i, j).expect("reference indices are in range")
}

/// The four frozen boundary rows.
pub fn reference_net_rows() -> Vec<NetTableRow> {
    let lam = |a| OnePs5::new(a).expect("reference 1-PS is normalized");
    vec![
        NetTableRow {
            lambda: lam([2, 1, 0, 0, -1, -2]),
            slots: [
                vec![quad(0, 2), quad(1, 1)],
                vec![quad(0, 5), quad(1, 4), quad(2, 2)],
                vec![quad(2, 5), quad(4, 4)],
            ],
        },
        NetTableRow {
            lambda: lam([3, 1, 1, -1, -1, -3]),
            slots: [
                vec![quad(0, 3), quad(1, 1)],
                vec![quad(0, 5), quad(1, 3)],
                vec![quad(1, 5), quad(3, 3)],
            ],
        },
        NetTableRow {
            lambda: lam([4, 1, 1, -2, -2, -2]),
            slots: [
                vec![quad(0, 3), quad(1, 1)],
                vec![quad(0, 3), quad(1, 1)],
                vec![quad(3, 3)],
            ],
        },
        NetTableRow {
            lambda: lam([5, 3, 1, -1, -3, -5]),
            slots: [
                vec![quad(0, 4), quad(1, 3), quad(2, 2)],
                vec![quad(0, 5), quad(1, 4), quad(2, 3)],
                vec![quad(1, 5), quad(2, 4), quad(3, 3)],
            ],
        },
    ]
}

/// Verification outcome for one reference row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetRowReport {
    pub lambda: OnePs5,
    pub slot_weights: [i64; 3],
    pub slots_uniform: bool,
    pub triple: LeadingTriple,
    pub plucker: i64,
    pub admissibility: AdmissibilityReport,
    pub pass: bool,
}

/// Checks each frozen row: every slot is weight-homogeneous, the
/// slot-maxima triple has non-positive Pluecker weight, and the triple is
/// admissible.
pub fn verify_reference_rows() -> Vec<NetRowReport> {
    reference_net_rows()
        .iter()
        .map(|row| {
            let slot_weights: [i64; 3] =
                std::array::from_fn(|s| row.slots[s][0].weight(&row.lambda));
            let slots_uniform = row
                .slots
                .iter()
                .zip(slot_weights)
                .all(|(slot, w)| slot.iter().all(|m| m.weight(&row.lambda) == w));
            let triple = row.slot_maxima();
            let plucker = plucker_weight(&triple, &row.lambda);
            let admissibility = admissibility_check(&triple, &row.lambda);
            NetRowReport {
                lambda: row.lambda,
                slot_weights,
                slots_uniform,
                triple,
                plucker,
                admissibility,
                pass: slots_uniform && plucker <= 0 && admissibility.admissible,
            }
        })
        .collect()
}

/// All normalized 1-PS with a0 <= bound, in deterministic lexicographic
/// order (a0 ascending, then a1, ...).
pub fn enumerate_normalized(bound: u32) -> Vec<OnePs5> {
    let b = bound as i64;
    let mut out = Vec::new();
    let mut a = [0i64; 6];
    for a0 in 1..=b {
        a[0] = a0;
        enumerate_rest(&mut a, 1, a0, &mut out);
    }
    out
}

fn enumerate_rest(a: &mut [i64; 6], idx: usize, partial: i64, out: &mut Vec<OnePs5>) {
    if idx == 5 {
        let a5 = -partial;
        if a5 <= a[4] {
            a[5] = a5;
            out.push(OnePs5 { a: *a });
        }
        return;
    }
    // entries below a[idx] cannot recover the sum once (6 - idx - 1)
    // copies of the current value fall short
    let remaining = (6 - idx - 1) as i64;
    let mut v = a[idx - 1];
    loop {
        if partial + v * (remaining + 1) < 0 {
            break;
        }
        a[idx] = v;
        enumerate_rest(a, idx + 1, partial + v, out);
        v -= 1;
    }
}

/// Bitmask over monomial ids of the closed down-set of m in the lambda
/// order: m itself and every monomial below it.
fn downset_mask(m: &QuadMonomial, lambda: &OnePs5) -> u32 {
    let mut mask = 1u32 << m.id();
    for n in QuadMonomial::all() {
        if order_gt(m, &n, lambda) {
            mask |= 1 << n.id();
        }
    }
    mask
}

/// The admissible boundary data of one lambda: every unordered triple of
/// distinct monomials whose lambda-ordered form has non-positive Pluecker
/// weight and passes the admissibility check. Triples are recorded as
/// ascending monomial ids.
pub fn admissible_triple_set(lambda: &OnePs5) -> BTreeSet<[u8; 3]> {
    admissible_data(lambda).0
}

/// Triple ids together with the down-set profile of each admissible
/// triple: the three masks of monomials allowed below the respective
/// leading term.
fn admissible_data(lambda: &OnePs5) -> (BTreeSet<[u8; 3]>, BTreeSet<[u32; 3]>) {
    let sorted = sorted_monomials(lambda);
    let w: Vec<i64> = sorted.iter().map(|m| m.weight(lambda)).collect();
    let down: Vec<u32> = sorted.iter().map(|m| downset_mask(m, lambda)).collect();
    let mut ids = BTreeSet::new();
    let mut profiles = BTreeSet::new();
    for i in 0..QUAD_COUNT {
        for j in i + 1..QUAD_COUNT {
            for k in j + 1..QUAD_COUNT {
                if w[i] + w[j] + w[k] > 0 {
                    continue;
                }
                let t = LeadingTriple {
                    m1: sorted[i],
                    m2: sorted[j],
                    m3: sorted[k],
                };
                if admissibility_check(&t, lambda).admissible {
                    let mut v = [
                        sorted[i].id() as u8,
                        sorted[j].id() as u8,
                        sorted[k].id() as u8,
                    ];
                    v.sort_unstable();
                    ids.insert(v);
                    profiles.insert([down[i], down[j], down[k]]);
                }
            }
        }
    }
    (ids, profiles)
}

/// True when every admissible profile of c fits componentwise inside
/// some admissible profile of d: each net family described by c is then
/// contained in one described by d.
fn family_subsumed(c: &BTreeSet<[u32; 3]>, d: &BTreeSet<[u32; 3]>) -> bool {
    c.iter()
        .all(|p| d.iter().any(|q| (0..3).all(|s| p[s] & !q[s] == 0)))
}

/// A group of 1-PS sharing one admissible triple set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleClass {
    /// First enumerated representative.
    pub rep: OnePs5,
    /// Number of enumerated 1-PS in the class.
    pub lambda_count: usize,
    pub triples: BTreeSet<[u8; 3]>,
    profiles: BTreeSet<[u32; 3]>,
}

impl AdmissibleClass {
    /// Membership test for a 1-PS outside the stored enumeration.
    pub fn contains(&self, lambda: &OnePs5) -> bool {
        admissible_data(lambda).1 == self.profiles
    }
}

/// Scans all normalized 1-PS with a0 <= bound and groups those with a
/// non-empty admissible triple set by their down-set profiles. A triple
/// (m1, m2, m3) under lambda stands for the nets whose i-th quadric is
/// supported below m_i in the lambda order, so classes are compared as
/// families of nets: a class is dropped when each of its profiles fits
/// inside a profile of another class. Inclusion of raw triple-id sets is
/// not the right comparison; (2,1,1,0,-1,-3) has admissible triples that
/// (3,1,1,-1,-1,-3) lacks, yet every one of its families embeds in a
/// family of the latter. Classes are returned in order of first
/// appearance. Completeness beyond the bound is not claimed.
pub fn search_admissible_classes(bound: u32) -> Result<Vec<AdmissibleClass>, NetError> {
    if bound < 5 {
        return Err(NetError::BoundTooSmall(bound));
    }
    let mut classes: Vec<AdmissibleClass> = Vec::new();
    // cache by primitive weight vector: scaling lambda rescales all
    // weights and changes no comparison
    let mut seen: Vec<(OnePs5, Option<usize>)> = Vec::new();
    for lambda in enumerate_normalized(bound) {
        let mut a = lambda.weights();
        let g = a.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        for x in &mut a {
            *x /= g;
        }
        let primitive = OnePs5 { a };
        let class_idx = match seen.iter().find(|(p, _)| *p == primitive) {
            Some(&(_, idx)) => idx,
            None => {
                let (triples, profiles) = admissible_data(&primitive);
                let idx = if triples.is_empty() {
                    None
                } else {
                    match classes.iter().position(|c| c.profiles == profiles) {
                        Some(idx) => Some(idx),
                        None => {
                            classes.push(AdmissibleClass {
                                rep: lambda,
                                lambda_count: 0,
                                triples,
                                profiles,
                            });
                            Some(classes.len() - 1)
                        }
                    }
                };
                seen.push((primitive, idx));
                idx
            }
        };
        if let Some(idx) = class_idx {
            classes[idx].lambda_count += 1;
        }
    }
    let maximal: Vec<AdmissibleClass> = (0..classes.len())
        .filter(|&i| {
            !(0..classes.len()).any(|j| {
                j != i
                    && family_subsumed(&classes[i].profiles, &classes[j].profiles)
                    // on mutual subsumption keep the first-enumerated class
                    && (!family_subsumed(&classes[j].profiles, &classes[i].profiles) || j < i)
            })
        })
        .map(|i| classes[i].clone())
        .collect();
    Ok(maximal)
}

impl Serialize for QuadricNet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let rows: Vec<Vec<NetTerm>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(id, c)| {
                        let m = QuadMonomial::from_id(id);
                        let num = i64::try_from(c.numer().clone())
                            .map_err(|_| S::Error::custom("coefficient too large"))?;
                        let den = i64::try_from(c.denom().clone())
                            .map_err(|_| S::Error::custom("coefficient too large"))?;
                        Ok(NetTerm {
                            i: m.i,
                            j: m.j,
                            num,
                            den,
                        })
                    })
                    .collect::<Result<_, S::Error>>()
            })
            .collect::<Result<_, S::Error>>()?;
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadricNet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[Vec<NetTerm>; 3]>::deserialize(d)?;
        QuadricNet::from_terms(rows).map_err(D::Error::custom)
    }
}
