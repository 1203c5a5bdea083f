//! The rank-21 period lattice of degree-2l quasi-polarized K3 surfaces and
//! the dictionary between its primitive vector classes and divisor labels.
//!
//! The lattice is Zw + U^2 + E8(-1)^2 with <w, w> = -2l, written in the
//! fixed basis (w, u1, v1, u2, v2, e1..e16). Its discriminant group is
//! cyclic of order 2l, generated by w/2l, which is what makes the (level,
//! type) classification of primitive vectors below well defined.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix must be square, got {rows} rows and {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix must be symmetric (entries ({i},{j}) and ({j},{i}) differ)")]
    NotSymmetric { i: usize, j: usize },
    #[error("even lattice needs even diagonal, entry ({0},{0}) is odd")]
    OddDiagonal(usize),
    #[error("degenerate Gram matrix (zero elementary divisor)")]
    Degenerate,
    #[error("degree parameter l must be positive")]
    NonPositiveL,
    #[error("vector has {got} coordinates, lattice has rank {want}")]
    LengthMismatch { want: usize, got: usize },
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not primitive (coordinate gcd {0})")]
    NotPrimitive(i64),
    #[error("level {level} does not divide 2l = {two_l}")]
    LevelNotDividing { level: i64, two_l: i64 },
    #[error("type must lie in [0, 2l), got {d}")]
    TypeOutOfRange { d: i64 },
    #[error("omega coefficient d*k/2l = {d}*{k}/{two_l} is not an integer")]
    NonIntegralOmega { d: i64, k: i64, two_l: i64 },
    #[error("no class with these invariants: m = N/2k^2 + d^2/4l is not an integer")]
    NonIntegralM,
    #[error("class (N={norm}, k={level}, d={d}) has no primitive representative")]
    ClassNotPrimitive { norm: i64, level: i64, d: i64 },
    #[error("discriminant d^2 - 4l(g-1) = {delta} is not positive")]
    NotADivisor { delta: i64 },
}

/// Square integral Gram matrix with even diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGram")]
pub struct EvenLattice {
    gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawGram {
    gram: Vec<Vec<i64>>,
}

impl TryFrom<RawGram> for EvenLattice {
    type Error = LatticeError;
    fn try_from(raw: RawGram) -> Result<Self, Self::Error> {
        EvenLattice::new(raw.gram)
    }
}

impl EvenLattice {
    #[allow(clippy::needless_range_loop)] // symmetry check pairs (i,j) with (j,i)
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(LatticeError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            if row[i] % 2 != 0 {
                return Err(LatticeError::OddDiagonal(i));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Gram matrix times a coordinate vector; the entries are the pairings
    /// of v with the basis vectors.
    pub fn pairings(&self, v: &LatticeVector) -> Result<Vec<i128>, LatticeError> {
        if v.coords.len() != self.rank() {
            return Err(LatticeError::LengthMismatch {
                want: self.rank(),
                got: v.coords.len(),
            });
        }
        Ok(self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v.coords)
                    .map(|(&g, &c)| g as i128 * c as i128)
                    .sum()
            })
            .collect())
    }

    /// <v, v>; even for every integral v by construction.
    pub fn norm(&self, v: &LatticeVector) -> Result<i128, LatticeError> {
        let gv = self.pairings(v)?;
        Ok(gv.iter().zip(&v.coords).map(|(&p, &c)| p * c as i128).sum())
    }

    /// Elementary divisors > 1 of the Gram matrix in divisibility order,
    /// i.e. the cyclic factors of the discriminant group. Errors on a
    /// degenerate Gram matrix.
    pub fn discriminant_group(&self) -> Result<Vec<u64>, LatticeError> {
        let mat: Vec<Vec<i128>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        let diag = smith_diagonal(mat);
        if diag.contains(&0) {
            return Err(LatticeError::Degenerate);
        }
        Ok(diag
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| d as u64)
            .collect())
    }
}

/// Coordinates in the fixed basis of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }
}

/// Diagonal of the Smith normal form, nonnegative, each entry dividing the
/// next. Standard elimination: pick the smallest nonzero entry as pivot,
/// clear its row and column, then repair divisibility by folding offending
/// rows into the pivot row.
#[allow(clippy::needless_range_loop)] // row and column operations cross-index
fn smith_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    let mut t = 0;
    while t < n {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            diag.resize(n, 0);
            return diag;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        // Clear column t and row t; restart whenever a remainder survives,
        // since the new smaller entry should become the pivot.
        let mut clean = true;
        for i in t + 1..n {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                for j in t..n {
                    m[i][j] -= q * m[t][j];
                }
            }
            if m[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..n {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for i in t..n {
                    m[i][j] -= q * m[i][t];
                }
            }
            if m[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Divisibility repair: the pivot must divide every remaining entry.
        let p = m[t][t];
        if let Some(i) = (t + 1..n).find(|&i| (t + 1..n).any(|j| m[i][j] % p != 0)) {
            for j in t..n {
                let add = m[i][j];
                m[t][j] += add;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

fn u_block() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![1, 0]]
}

/// E8 with sign reversed: -2 on the diagonal, +1 on Dynkin diagram edges.
/// Unimodular and negative definite.
fn e8_minus_block() -> Vec<Vec<i64>> {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

fn direct_sum(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut g = vec![vec![0i64; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                g[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    g
}

/// Gram matrix of the period lattice Zw + U^2 + E8(-1)^2 with
/// <w, w> = -2l, in the basis (w, u1, v1, u2, v2, e1..e16).
pub fn lambda_gram(l: u64) -> Result<EvenLattice, LatticeError> {
    if l == 0 {
        return Err(LatticeError::NonPositiveL);
    }
    let blocks = [
        vec![vec![-2 * l as i64]],
        u_block(),
        u_block(),
        e8_minus_block(),
        e8_minus_block(),
    ];
    EvenLattice::new(direct_sum(&blocks))
}

/// Invariants (norm, level, type) of a primitive vector, together with the
/// degree parameter they refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveVectorClass {
    pub norm: i64,
    pub level: i64,
    /// Type d in [0, 2l): the class of v/level in the discriminant group,
    /// expressed in the generator w/2l.
    pub d: i64,
    pub l: u64,
}

/// The period lattice of a fixed degree, carrying the structure needed for
/// level/type computations.
#[derive(Clone, Debug)]
pub struct PeriodLattice {
    l: u64,
    lattice: EvenLattice,
}

impl PeriodLattice {
    pub fn new(l: u64) -> Result<Self, LatticeError> {
        Ok(Self {
            l,
            lattice: lambda_gram(l)?,
        })
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    /// Norm, level, and type of a primitive vector.
    ///
    /// The level is the gcd of the pairings with the basis. Every non-omega
    /// coordinate of v is then divisible by the level (the U and E8(-1)
    /// blocks are unimodular), so v/level is congruent to a multiple of
    /// w/2l modulo the lattice; that multiple is the type.
    pub fn invariants_of(&self, v: &LatticeVector) -> Result<PrimitiveVectorClass, LatticeError> {
        let gv = self.lattice.pairings(v)?;
        if v.coords.iter().all(|&c| c == 0) {
            return Err(LatticeError::ZeroVector);
        }
        let content = v.coords.iter().fold(0i64, |g, &c| g.gcd(&c));
        if content != 1 {
            return Err(LatticeError::NotPrimitive(content));
        }
        let level = gv.iter().fold(0i128, |g, &p| g.gcd(&p));
        debug_assert!(level > 0, "nondegenerate lattice, nonzero vector");
        let norm: i128 = gv.iter().zip(&v.coords).map(|(&p, &c)| p * c as i128).sum();
        debug_assert!(norm % 2 == 0, "even lattice");
        let two_l = 2 * self.l as i128;
        // level divides the first pairing -2l * c_w, so t is integral.
        let t = (two_l * v.coords[0] as i128) / level;
        let d = t.rem_euclid(two_l);
        Ok(PrimitiveVectorClass {
            norm: norm.to_i64().expect("norm fits in i64"),
            level: level.to_i64().expect("level fits in i64"),
            d: d.to_i64().expect("type fits in i64"),
            l: self.l,
        })
    }

    /// Canonical primitive representative (dk/2l) w + k(u1 + m v1) of the
    /// class with invariants (norm N, level k, type d), where
    /// m = N/2k^2 + d^2/4l.
    ///
    /// Rejects invariants that name no class: the level must divide 2l, the
    /// omega coefficient dk/2l and m must be integers, and the resulting
    /// vector must be primitive (equivalently gcd(dk/2l, k) = 1; otherwise
    /// every vector with these invariants would be divisible).
    pub fn canonical_primitive(
        &self,
        norm: i64,
        level: i64,
        d: i64,
    ) -> Result<LatticeVector, LatticeError> {
        let two_l = 2 * self.l as i64;
        if level <= 0 || two_l % level != 0 {
            return Err(LatticeError::LevelNotDividing { level, two_l });
        }
        if d < 0 || d >= two_l {
            return Err(LatticeError::TypeOutOfRange { d });
        }
        let (dk, rem) = (d as i128 * level as i128).div_rem(&(two_l as i128));
        if rem != 0 {
            return Err(LatticeError::NonIntegralOmega { d, k: level, two_l });
        }
        let omega_coeff = dk;
        // m = N/2k^2 + d^2/4l over the common denominator 8lk^2.
        let k = level as i128;
        let l = self.l as i128;
        let num = 4 * l * norm as i128 + 2 * k * k * d as i128 * d as i128;
        let den = 8 * l * k * k;
        let (m, rem) = num.div_rem(&den);
        if rem != 0 {
            return Err(LatticeError::NonIntegralM);
        }
        if omega_coeff.gcd(&k) != 1 {
            return Err(LatticeError::ClassNotPrimitive { norm, level, d });
        }
        let mut coords = vec![0i64; self.lattice.rank()];
        coords[0] = omega_coeff.to_i64().expect("omega coefficient fits in i64");
        coords[1] = level;
        coords[2] = (k * m).to_i64().expect("v1 coefficient fits in i64");
        Ok(LatticeVector::new(coords))
    }
}

/// Label of an irreducible Noether-Lefschetz divisor by degree d and genus
/// g of the generic Picard lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlLabel {
    pub d: u64,
    pub g: u64,
    pub l: u64,
}

/// Heegner divisor label y_{n, gamma} with n < 0 and gamma modulo 2l.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeegnerLabel {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub n: Rational,
    pub gamma: u64,
}

impl NlLabel {
    pub fn new(d: u64, g: u64, l: u64) -> Result<Self, LatticeError> {
        if l == 0 {
            return Err(LatticeError::NonPositiveL);
        }
        Ok(Self { d, g, l })
    }

    /// Discriminant d^2 - 4l(g - 1); positive exactly when the label names
    /// a divisor.
    pub fn delta(&self) -> i64 {
        self.d as i64 * self.d as i64 - 4 * self.l as i64 * (self.g as i64 - 1)
    }
}

/// Dictionary from Noether-Lefschetz labels to Heegner labels:
/// n = -delta/4l and gamma = d mod 2l. Errors when delta <= 0, i.e. when
/// the label is not a divisor.
pub fn nl_to_heegner(label: &NlLabel) -> Result<HeegnerLabel, LatticeError> {
    let delta = label.delta();
    if delta <= 0 {
        return Err(LatticeError::NotADivisor { delta });
    }
    Ok(HeegnerLabel {
        n: Rational::new(BigInt::from(-delta), BigInt::from(4 * label.l)),
        gamma: label.d % (2 * label.l),
    })
}

/// Norm <v, v> of the projection of a degree-d, genus-g class to the
/// orthogonal complement of the polarization: (2g - 2) - d^2/2l. Computed
/// independently of [`nl_to_heegner`]; the two must satisfy <v, v> = 2n.
pub fn projected_norm(label: &NlLabel) -> Rational {
    Rational::from_integer(BigInt::from(2 * label.g as i64 - 2))
        - Rational::new(BigInt::from(label.d * label.d), BigInt::from(2 * label.l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    /// Fraction-free determinant (Bareiss) as an independent oracle for the
    /// Smith diagonal product.
    fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
        let n = m.len();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(s) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                    return 0;
                };
                m.swap(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        sign * m[n - 1][n - 1]
    }

    fn to_i128(g: &[Vec<i64>]) -> Vec<Vec<i128>> {
        g.iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect()
    }

    #[test]
    fn snf_of_known_matrices() {
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![4, 2]]), vec![2, 6]);
        assert_eq!(smith_diagonal(vec![vec![6]]), vec![6]);
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(vec![vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn snf_divisibility_and_determinant_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let m: Vec<Vec<i128>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-9i128..=9)).collect())
                .collect();
            let want_det = bareiss_det(m.clone()).abs();
            let diag = smith_diagonal(m);
            for w in diag.windows(2) {
                if w[1] == 0 {
                    continue;
                }
                assert!(w[0] != 0 && w[1] % w[0] == 0, "divisibility in {diag:?}");
            }
            let prod: i128 = diag.iter().product();
            assert_eq!(prod, want_det);
        }
    }

    #[test]
    fn hyperbolic_and_e8_blocks_are_unimodular() {
        let u = EvenLattice::new(u_block()).unwrap();
        assert_eq!(u.discriminant_group().unwrap(), Vec::<u64>::new());
        let e8 = EvenLattice::new(e8_minus_block()).unwrap();
        assert_eq!(e8.discriminant_group().unwrap(), Vec::<u64>::new());
        assert_eq!(bareiss_det(to_i128(e8.gram())).abs(), 1);
    }

    #[test]
    fn lambda_gram_shape_and_determinant() {
        let gram = lambda_gram(3).unwrap();
        assert_eq!(gram.rank(), 21);
        assert_eq!(gram.gram()[0][0], -6);
        assert_eq!(gram.gram()[1][2], 1);
        assert_eq!(bareiss_det(to_i128(gram.gram())).abs(), 6);
    }

    #[test]
    fn discriminant_group_is_cyclic_of_order_2l() {
        for l in 1..=20 {
            let gram = lambda_gram(l).unwrap();
            assert_eq!(gram.discriminant_group().unwrap(), vec![2 * l], "l = {l}");
        }
    }

    #[test]
    fn rejects_degenerate_gram() {
        let zero = EvenLattice::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(zero.discriminant_group(), Err(LatticeError::Degenerate));
    }

    #[test]
    fn invariants_of_known_vectors() {
        let lam = PeriodLattice::new(3).unwrap();
        let mut omega = vec![0i64; 21];
        omega[0] = 1;
        let c = lam.invariants_of(&LatticeVector::new(omega)).unwrap();
        assert_eq!((c.norm, c.level, c.d), (-6, 6, 1));

        let mut u1 = vec![0i64; 21];
        u1[1] = 1;
        let c = lam.invariants_of(&LatticeVector::new(u1)).unwrap();
        assert_eq!((c.norm, c.level, c.d), (0, 1, 0));

        let mut v = vec![0i64; 21];
        v[0] = 1;
        v[1] = 6;
        let c = lam.invariants_of(&LatticeVector::new(v)).unwrap();
        assert_eq!((c.norm, c.level, c.d), (-6, 6, 1));
    }

    #[test]
    fn invariants_reject_imprimitive_and_zero() {
        let lam = PeriodLattice::new(2).unwrap();
        let mut v = vec![0i64; 21];
        v[1] = 2;
        v[3] = 4;
        assert_eq!(
            lam.invariants_of(&LatticeVector::new(v)),
            Err(LatticeError::NotPrimitive(2))
        );
        assert_eq!(
            lam.invariants_of(&LatticeVector::new(vec![0; 21])),
            Err(LatticeError::ZeroVector)
        );
        assert!(matches!(
            lam.invariants_of(&LatticeVector::new(vec![1; 5])),
            Err(LatticeError::LengthMismatch { want: 21, got: 5 })
        ));
    }

    #[test]
    fn canonical_primitive_known_vectors() {
        let lam = PeriodLattice::new(3).unwrap();
        // omega + 6 u1: N = -6, level 6, type 1, m = 0.
        let v = lam.canonical_primitive(-6, 6, 1).unwrap();
        let mut want = vec![0i64; 21];
        want[0] = 1;
        want[1] = 6;
        assert_eq!(v, LatticeVector::new(want));

        let lam1 = PeriodLattice::new(1).unwrap();
        // u1 - v1: N = -2, level 1, type 0, m = -1.
        let v = lam1.canonical_primitive(-2, 1, 0).unwrap();
        assert_eq!(&v.coords[..3], &[0, 1, -1]);
    }

    #[test]
    fn canonical_primitive_rejections() {
        let lam = PeriodLattice::new(3).unwrap();
        assert!(matches!(
            lam.canonical_primitive(-6, 4, 1),
            Err(LatticeError::LevelNotDividing { level: 4, two_l: 6 })
        ));
        assert!(matches!(
            lam.canonical_primitive(-6, 6, 6),
            Err(LatticeError::TypeOutOfRange { d: 6 })
        ));
        // level 3 forces d in 3Z/6Z... d = 1 has non-integral omega coefficient.
        assert!(matches!(
            lam.canonical_primitive(-6, 3, 1),
            Err(LatticeError::NonIntegralOmega { .. })
        ));
        // m fails integrality: N = -2 with level 6, type 1 gives m = -1/36 + ...
        assert!(matches!(
            lam.canonical_primitive(-4, 6, 1),
            Err(LatticeError::NonIntegralM)
        ));
        // d = 0 with level 6 would give the divisible vector 6 u1 + ...
        assert!(matches!(
            lam.canonical_primitive(-72, 6, 0),
            Err(LatticeError::ClassNotPrimitive { .. })
        ));
    }

    #[test]
    fn roundtrip_small_degrees() {
        for l in 1..=6u64 {
            let lam = PeriodLattice::new(l).unwrap();
            let two_l = 2 * l as i64;
            for level in 1..=two_l {
                if two_l % level != 0 {
                    continue;
                }
                for d in 0..two_l {
                    for norm in (-24..=24).step_by(2) {
                        let Ok(v) = lam.canonical_primitive(norm, level, d) else {
                            continue;
                        };
                        let c = lam.invariants_of(&v).unwrap();
                        assert_eq!(
                            (c.norm, c.level, c.d),
                            (norm, level, d),
                            "l={l} N={norm} k={level} d={d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn even_norm_for_random_vectors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let lam = PeriodLattice::new(5).unwrap();
        for _ in 0..1000 {
            let v = LatticeVector::new((0..21).map(|_| rng.gen_range(-9..=9)).collect());
            let n = lam.lattice().norm(&v).unwrap();
            assert_eq!(n % 2, 0);
        }
    }

    #[test]
    fn heegner_dictionary_examples() {
        let h = nl_to_heegner(&NlLabel::new(1, 1, 3).unwrap()).unwrap();
        assert_eq!(h.n, Rational::new(BigInt::from(-1), BigInt::from(12)));
        assert_eq!(h.gamma, 1);

        for l in 1..=8 {
            let h = nl_to_heegner(&NlLabel::new(0, 0, l).unwrap()).unwrap();
            assert_eq!(h.n, Rational::from_integer(BigInt::from(-1)), "l = {l}");
            assert_eq!(h.gamma, 0);
        }

        let h = nl_to_heegner(&NlLabel::new(2, 1, 4).unwrap()).unwrap();
        assert_eq!(h.n, Rational::new(BigInt::from(-1), BigInt::from(4)));

        assert!(matches!(
            nl_to_heegner(&NlLabel::new(2, 2, 1).unwrap()),
            Err(LatticeError::NotADivisor { delta: 0 })
        ));
    }

    #[test]
    fn projected_norm_examples() {
        let q = projected_norm(&NlLabel::new(1, 1, 3).unwrap());
        assert_eq!(q, Rational::new(BigInt::from(-1), BigInt::from(6)));
        let q = projected_norm(&NlLabel::new(3, 1, 4).unwrap());
        assert_eq!(q, Rational::new(BigInt::from(-9), BigInt::from(8)));
        let q = projected_norm(&NlLabel::new(0, 0, 5).unwrap());
        assert_eq!(q, Rational::from_integer(BigInt::from(-2)));
    }

    #[test]
    fn projection_matches_heegner_index() {
        let two = Rational::from_integer(BigInt::from(2));
        for d in 0..=12 {
            for g in 0..=6 {
                for l in 1..=8 {
                    let label = NlLabel::new(d, g, l).unwrap();
                    let Ok(h) = nl_to_heegner(&label) else {
                        continue;
                    };
                    assert_eq!(projected_norm(&label), two.clone() * h.n.clone());
                    assert!(h.n < Rational::zero());
                    assert!(h.n >= -Rational::one() || h.n < Rational::zero());
                }
            }
        }
    }

    #[test]
    fn lattice_serialization_roundtrip() {
        let gram = lambda_gram(2).unwrap();
        let json = serde_json::to_string(&gram).unwrap();
        let back: EvenLattice = serde_json::from_str(&json).unwrap();
        assert_eq!(gram, back);
        // invalid gram rejected at deserialization
        let bad = r#"{"gram": [[1]]}"#;
        assert!(serde_json::from_str::<EvenLattice>(bad).is_err());

        let v = LatticeVector::new(vec![1, 0, -3]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"coords":[1,0,-3]}"#);
    }
}
