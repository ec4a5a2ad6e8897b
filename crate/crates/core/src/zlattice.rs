//! Exact integer linear algebra on small lattices.
//!
//! Everything here works on `i64` entries with checked arithmetic: an
//! intermediate value that leaves the machine range surfaces as
//! [`Error::Overflow`] instead of wrapping. Hermite and Smith normal forms
//! carry their unimodular transforms so callers can complete bases and build
//! quotient maps.

use std::fmt;
use std::ops::{Index, Neg};

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An integer vector in `N = Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(SmallVec<[i64; 3]>);

impl LatticeVector {
    pub fn new(coords: impl Into<SmallVec<[i64; 3]>>) -> Self {
        LatticeVector(coords.into())
    }

    pub fn from_slice(coords: &[i64]) -> Self {
        LatticeVector(SmallVec::from_slice(coords))
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(SmallVec::from_elem(0, dim))
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = 1;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.0.to_vec()
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Index<usize> for LatticeVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector::from_slice(&v)
    }
}

/// Shorthand for building fixtures: `lv(&[1, 0])`.
pub fn lv(coords: &[i64]) -> LatticeVector {
    LatticeVector::from_slice(coords)
}

/// Splits `v` as `k * w` with `w` primitive and `k >= 1`.
pub fn primitivize(v: &LatticeVector) -> Result<(LatticeVector, i64)> {
    let k = v.content();
    if k == 0 {
        return Err(Error::ZeroVector);
    }
    Ok((LatticeVector(v.0.iter().map(|c| c / k).collect()), k))
}

/// Dense row-major integer matrix.
pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mul_add(a: i64, q: i64, b: i64) -> Result<i64> {
    // a + q*b
    q.checked_mul(b)
        .and_then(|p| a.checked_add(p))
        .ok_or(Error::Overflow)
}

/// `row[dst] += q * row[src]` over every column.
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        m[dst][j] = mul_add(m[dst][j], q, m[src][j])?;
    }
    Ok(())
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        row[dst] = mul_add(row[dst], q, row[src])?;
    }
    Ok(())
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -*x;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    (0..inner).try_fold(0i64, |acc, k| mul_add(acc, row[k], b[k][j]))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &LatticeVector) -> Result<LatticeVector> {
    let coords = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(v.coords())
                .try_fold(0i64, |acc, (&x, &y)| mul_add(acc, x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeVector::from(coords))
}

pub fn transpose(a: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Row-style Hermite normal form `H = W * A`.
///
/// Pivots are positive, strictly increasing in column, and entries above a
/// pivot lie in `[0, pivot)`. Zero rows sit at the bottom. Returns `(H, W)`
/// with `W` unimodular.
pub fn hnf_with_transform(a: &IntMatrix, cols: usize) -> Result<(IntMatrix, IntMatrix)> {
    let m = a.len();
    let mut h = a.clone();
    let mut w = identity(m);
    let mut row = 0;
    for col in 0..cols {
        if row == m {
            break;
        }
        loop {
            // smallest nonzero |entry| in this column at or below `row`
            let best = (row..m)
                .filter(|&i| h[i][col] != 0)
                .min_by_key(|&i| (h[i][col].unsigned_abs(), i));
            let Some(p) = best else { break };
            h.swap(row, p);
            w.swap(row, p);
            let mut done = true;
            for i in row + 1..m {
                if h[i][col] != 0 {
                    let q = h[i][col].div_euclid(h[row][col]);
                    row_axpy(&mut h, i, row, -q)?;
                    row_axpy(&mut w, i, row, -q)?;
                    if h[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[row][col] == 0 {
            continue;
        }
        if h[row][col] < 0 {
            negate_row(&mut h, row);
            negate_row(&mut w, row);
        }
        for i in 0..row {
            let q = h[i][col].div_euclid(h[row][col]);
            row_axpy(&mut h, i, row, -q)?;
            row_axpy(&mut w, i, row, -q)?;
        }
        row += 1;
    }
    Ok((h, w))
}

/// Row HNF with zero rows dropped: a canonical basis of the row lattice.
pub fn hnf_basis(a: &IntMatrix, cols: usize) -> Result<IntMatrix> {
    let (h, _) = hnf_with_transform(a, cols)?;
    Ok(h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect())
}

/// Smith normal form `D = U * A * V`, also returning `V^{-1}`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diag: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith(a: &IntMatrix, cols: usize) -> Result<Smith> {
    let m = a.len();
    let n = cols;
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);

    let t_max = m.min(n);
    for t in 0..t_max {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| (d[i][j].unsigned_abs(), i, j));
            let Some((pi, pj)) = pivot else {
                return Ok(finish_smith(d, u, v, v_inv, t_max));
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            v_inv.swap(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[i][t] != 0 {
                    let q = d[i][t].div_euclid(d[t][t]);
                    row_axpy(&mut d, i, t, -q)?;
                    row_axpy(&mut u, i, t, -q)?;
                    clean &= d[i][t] == 0;
                }
            }
            for j in t + 1..n {
                if d[t][j] != 0 {
                    let q = d[t][j].div_euclid(d[t][t]);
                    col_axpy(&mut d, j, t, -q)?;
                    col_axpy(&mut v, j, t, -q)?;
                    // inverse column op acts on rows of V^{-1}
                    row_axpy(&mut v_inv, t, j, q)?;
                    clean &= d[t][j] == 0;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % d[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    row_axpy(&mut d, t, i, 1)?;
                    row_axpy(&mut u, t, i, 1)?;
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Ok(finish_smith(d, u, v, v_inv, t_max))
}

fn finish_smith(d: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix, t_max: usize) -> Smith {
    let diag = (0..t_max).map(|t| d[t][t]).collect();
    Smith { diag, u, v, v_inv }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> Result<i128> {
    let n = a.len();
    if n == 0 {
        return Ok(1);
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|x| m[i][k].checked_mul(m[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or(Error::Overflow)?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Rank of a set of vectors.
pub fn rank(vs: &[LatticeVector]) -> Result<usize> {
    let Some(first) = vs.first() else { return Ok(0) };
    let rows: IntMatrix = vs.iter().map(|v| v.to_vec()).collect();
    Ok(hnf_basis(&rows, first.dim())?.len())
}

/// A lattice basis of the saturated sublattice `N ∩ span_R(vs)`, in row HNF.
pub fn saturate_span(vs: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let Some(first) = vs.first() else {
        return Err(Error::EmptySpan);
    };
    let d = first.dim();
    let rows: IntMatrix = vs.iter().map(|v| v.to_vec()).collect();
    let snf = smith(&rows, d)?;
    let r = snf.rank();
    if r == 0 {
        return Err(Error::EmptySpan);
    }
    // A = U^{-1} D V^{-1}: the row space is spanned by the first r rows of V^{-1},
    // which extend to a unimodular basis and hence span a saturated lattice.
    let span: IntMatrix = snf.v_inv[..r].to_vec();
    Ok(hnf_basis(&span, d)?.into_iter().map(LatticeVector::from).collect())
}

/// Integer coordinates of `v` in a row-HNF basis, if `v` lies in its lattice.
pub fn coords_in_basis(basis: &[LatticeVector], v: &LatticeVector) -> Option<LatticeVector> {
    let mut rest = v.clone();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let pivot = b.coords().iter().position(|&x| x != 0)?;
        let (num, den) = (rest[pivot], b[pivot]);
        if num % den != 0 {
            return None;
        }
        let c = num / den;
        rest = rest.sub(&b.scale(c));
        out.push(c);
    }
    rest.is_zero().then(|| LatticeVector::from(out))
}

/// Maps lattice coordinates back to the ambient lattice.
pub fn from_basis(basis: &[LatticeVector], c: &LatticeVector, dim: usize) -> LatticeVector {
    basis
        .iter()
        .zip(c.coords())
        .fold(LatticeVector::zero(dim), |acc, (b, &k)| acc.add(&b.scale(k)))
}

/// The quotient map `π: N → N/N_f` for a saturated sublattice `N_f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientProjection {
    pub source_dim: usize,
    pub fiber_basis: Vec<LatticeVector>,
    /// `(d - k) × d`, row HNF.
    pub matrix: IntMatrix,
}

impl QuotientProjection {
    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        mat_vec(&self.matrix, v)
    }

    /// The primitive generator of the ray through `π(v)`.
    pub fn pibar(&self, v: &LatticeVector) -> Result<LatticeVector> {
        let image = self.apply(v)?;
        if image.is_zero() {
            return Err(Error::InFiber);
        }
        Ok(primitivize(&image)?.0)
    }
}

/// Builds `π` for the sublattice spanned by `fiber_basis` inside `Z^d`.
///
/// The matrix is normalized to row HNF, so two calls on bases of the same
/// sublattice return identical projections.
pub fn quotient_projection(fiber_basis: &[LatticeVector], d: usize) -> Result<QuotientProjection> {
    for b in fiber_basis {
        if b.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
        }
    }
    let k = fiber_basis.len();
    if k == 0 {
        return Ok(QuotientProjection {
            source_dim: d,
            fiber_basis: vec![],
            matrix: identity(d),
        });
    }
    let rows: IntMatrix = fiber_basis.iter().map(|v| v.to_vec()).collect();
    let snf = smith(&rows, d)?;
    if snf.rank() < k {
        return Err(Error::NotIndependent);
    }
    if snf.diag.iter().any(|&x| x != 1) {
        return Err(Error::NotSaturated);
    }
    // B V = U^{-1} [I 0], so the last d-k columns of V annihilate the fiber.
    let proj: IntMatrix = (k..d).map(|c| snf.v.iter().map(|row| row[c]).collect()).collect();
    let matrix = hnf_basis(&proj, d)?;
    let fiber_basis = hnf_basis(&rows, d)?.into_iter().map(LatticeVector::from).collect();
    Ok(QuotientProjection { source_dim: d, fiber_basis, matrix })
}

/// An element of `GL(d, Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntMatrix", into = "IntMatrix")]
pub struct UnimodularMap {
    matrix: IntMatrix,
}

impl TryFrom<IntMatrix> for UnimodularMap {
    type Error = Error;
    fn try_from(m: IntMatrix) -> Result<Self> {
        UnimodularMap::new(m)
    }
}

impl From<UnimodularMap> for IntMatrix {
    fn from(g: UnimodularMap) -> IntMatrix {
        g.matrix
    }
}

impl UnimodularMap {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let det = determinant(&matrix)?;
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(UnimodularMap { matrix })
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMap { matrix: identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn det(&self) -> i64 {
        determinant(&self.matrix).map(|d| d as i64).unwrap_or(0)
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        mat_vec(&self.matrix, v).expect("unimodular image overflowed i64")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            matrix: mat_mul(&self.matrix, &other.matrix).expect("overflow composing maps"),
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let d = self.dim();
        let (h, w) = hnf_with_transform(&self.matrix, d).expect("overflow inverting map");
        debug_assert_eq!(h, identity(d));
        UnimodularMap { matrix: w }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity(self.dim())
    }

    /// A random product of elementary moves; deterministic for a seeded `rng`.
    pub fn random<R: Rng>(d: usize, rng: &mut R, steps: usize) -> UnimodularMap {
        let mut m = identity(d);
        if d == 0 {
            return UnimodularMap { matrix: m };
        }
        for _ in 0..steps {
            let i = rng.gen_range(0..d);
            match rng.gen_range(0..3) {
                0 if d > 1 => {
                    let mut j = rng.gen_range(0..d - 1);
                    if j >= i {
                        j += 1;
                    }
                    let q = if rng.gen_bool(0.5) { 1 } else { -1 };
                    row_axpy(&mut m, i, j, q).expect("small entries");
                }
                1 if d > 1 => {
                    let j = (i + 1 + rng.gen_range(0..d - 1)) % d;
                    m.swap(i, j);
                }
                _ => negate_row(&mut m, i),
            }
        }
        UnimodularMap { matrix: m }
    }
}
