//! Finite majorization, the classical and finite-rank Schur-Horn checks,
//! and a rotation-chain constructor for symmetric matrices with prescribed
//! diagonal and spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Scalar, WITNESS_TOLERANCE};
use crate::sequences::{Band, DiagonalSequence, Mass};

/// An ordered list of exact reals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealVector(pub Vec<Scalar>);

impl RealVector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        RealVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn sum(&self) -> Scalar {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    /// Entries sorted ascending; two vectors are equal as multisets iff
    /// these agree.
    pub fn sorted(&self) -> Vec<Scalar> {
        let mut v = self.0.clone();
        v.sort();
        v
    }
}

impl From<Vec<Scalar>> for RealVector {
    fn from(v: Vec<Scalar>) -> Self {
        RealVector(v)
    }
}

impl FromIterator<Scalar> for RealVector {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        RealVector(iter.into_iter().collect())
    }
}

impl std::ops::Index<usize> for RealVector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

/// Nonincreasing permutation of `v`; equal entries keep their order.
pub fn decreasing_rearrangement(v: &RealVector) -> RealVector {
    let mut out = v.0.clone();
    out.sort_by(|a, b| b.cmp(a));
    RealVector(out)
}

/// `mu ≺ lambda`: equal totals and every prefix sum of the decreasing
/// rearrangement of `lambda` dominates that of `mu`.
pub fn majorizes(mu: &RealVector, lambda: &RealVector) -> Result<bool> {
    if mu.len() != lambda.len() {
        return Err(Error::LengthMismatch { left: mu.len(), right: lambda.len() });
    }
    let mu = decreasing_rearrangement(mu);
    let lambda = decreasing_rearrangement(lambda);
    let mut gap = Scalar::zero();
    for (m, l) in mu.iter().zip(lambda.iter()) {
        gap += l - m;
        if gap.is_negative() {
            return Ok(false);
        }
    }
    Ok(gap.is_zero())
}

/// Classical Schur-Horn condition: `d` is a diagonal of a symmetric matrix
/// with eigenvalues `lambda` iff `d ≺ lambda`.
pub fn schur_horn_check(lambda: &RealVector, d: &RealVector) -> Result<bool> {
    majorizes(d, lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Orientation {
    Nonincreasing,
    Nondecreasing,
}

/// Schur-Horn for a positive rank-N operator with a block of `N` aligned
/// diagonal entries and a (possibly infinite) tail of small entries.
///
/// For [`Orientation::Nonincreasing`], `lambda` and `d_interior` are
/// nonincreasing, every tail entry is at most the last interior entry, and
/// the condition is on suffix sums. [`Orientation::Nondecreasing`] is the
/// mirror image with prefix sums and the tail bounded by the first entry.
pub fn finite_rank_check(
    lambda: &RealVector,
    d_interior: &RealVector,
    d_tail: &DiagonalSequence,
    orientation: Orientation,
) -> Result<bool> {
    let n = lambda.len();
    if d_interior.len() != n {
        return Err(Error::LengthMismatch { left: n, right: d_interior.len() });
    }
    if n == 0 {
        return Err(Error::HypothesisViolated("rank must be positive".into()));
    }
    if lambda.iter().any(|l| !l.is_positive()) {
        return Err(Error::HypothesisViolated("eigenvalues must be positive".into()));
    }
    if d_interior.iter().any(Scalar::is_negative)
        || d_tail.extent().is_some_and(|(lo, _)| lo.is_negative())
    {
        return Err(Error::HypothesisViolated("diagonal must be nonnegative".into()));
    }
    let monotone = |v: &RealVector| match orientation {
        Orientation::Nonincreasing => v.0.windows(2).all(|w| w[0] >= w[1]),
        Orientation::Nondecreasing => v.0.windows(2).all(|w| w[0] <= w[1]),
    };
    if !monotone(lambda) {
        return Err(Error::HypothesisViolated("eigenvalues are not ordered".into()));
    }
    if !monotone(d_interior) {
        return Err(Error::HypothesisViolated("aligned diagonal block is not ordered".into()));
    }
    let pivot = match orientation {
        Orientation::Nonincreasing => &d_interior[n - 1],
        Orientation::Nondecreasing => &d_interior[0],
    };
    if d_tail.extent().is_some_and(|(_, hi)| &hi > pivot) {
        return Err(Error::HypothesisViolated(format!("tail entry exceeds pivot {pivot}")));
    }
    let tail_sum = match d_tail.mass_in(&Band::all(), &Scalar::zero()) {
        Mass::Finite(s) => s,
        // an infinite tail sum cannot match the finite trace
        Mass::Divergent => return Ok(false),
    };

    // Walk from the tail end toward the full sum.
    let order: Vec<usize> = match orientation {
        Orientation::Nonincreasing => (0..n).rev().collect(),
        Orientation::Nondecreasing => (0..n).collect(),
    };
    let mut d_acc = tail_sum;
    let mut l_acc = Scalar::zero();
    for &i in &order {
        d_acc += &d_interior[i];
        l_acc += &lambda[i];
        if d_acc < l_acc {
            return Ok(false);
        }
    }
    Ok(d_acc == l_acc)
}

/// One plane rotation of the construction chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationStep {
    /// Index (in the caller's order) of the diagonal entry fixed here.
    pub target: usize,
    pub slot_p: usize,
    pub slot_q: usize,
    pub cos: f64,
    pub sin: f64,
    /// Eigenvalue slot value left behind in `slot_q`.
    pub residual: Scalar,
}

/// Dense real symmetric matrix built by [`construct_matrix`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricMatrixWitness {
    dimension: usize,
    /// Upper triangle, row-major.
    packed: Vec<f64>,
    steps: Vec<RotationStep>,
}

impl SymmetricMatrixWitness {
    fn packed_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dimension - i * (i + 1) / 2 + j
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.packed[self.packed_index(i, j)]
    }

    pub fn steps(&self) -> &[RotationStep] {
        &self.steps
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dimension).map(|i| self.entry(i, i)).collect()
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dimension, self.dimension, |i, j| self.entry(i, j))
    }

    /// Eigenvalues in nonincreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.to_dmatrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Largest deviation between computed eigenvalues and `lambda`, both
    /// sorted.
    pub fn max_eigenvalue_error(&self, lambda: &RealVector) -> f64 {
        let target: Vec<f64> = decreasing_rearrangement(lambda).iter().map(Scalar::to_f64).collect();
        self.eigenvalues()
            .iter()
            .zip(&target)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Checks the eigenvalues against `lambda` within the witness tolerance.
    pub fn validate(&self, lambda: &RealVector) -> Result<f64> {
        let err = self.max_eigenvalue_error(lambda);
        if err > WITNESS_TOLERANCE {
            return Err(Error::InfeasibleInput(format!("witness eigenvalue error {err:e}")));
        }
        Ok(err)
    }

    /// One row per line, full symmetric storage.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dimension {
            let row: Vec<String> = (0..self.dimension).map(|j| format!("{:?}", self.entry(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Real symmetric matrix with diagonal `d` (in the given order) and
/// eigenvalues `lambda`, built by a chain of at most `N - 1` rotations.
///
/// Targets are processed in decreasing order. Each is matched against the
/// adjacent pair of remaining eigenvalue slots that brackets it; if a slot
/// already equals the target no rotation is needed. The diagonal of the
/// result is overwritten with the exact requested values.
pub fn construct_matrix(lambda: &RealVector, d: &RealVector) -> Result<SymmetricMatrixWitness> {
    if !schur_horn_check(lambda, d)? {
        return Err(Error::InfeasibleInput("diagonal is not majorized by the eigenvalues".into()));
    }
    let n = lambda.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (i, l) in lambda.iter().enumerate() {
        m[(i, i)] = l.to_f64();
    }
    // Exact values of unresolved slots; the unresolved block stays diagonal.
    let mut open: Vec<Option<Scalar>> = lambda.iter().cloned().map(Some).collect();
    let mut slot_of_target = vec![0usize; n];
    let mut steps = Vec::new();

    let mut targets: Vec<usize> = (0..n).collect();
    targets.sort_by(|&a, &b| d[b].cmp(&d[a]).then(a.cmp(&b)));

    for &t in &targets {
        let dt = &d[t];
        let mut above: Option<usize> = None;
        let mut below: Option<usize> = None;
        for (s, v) in open.iter().enumerate() {
            let Some(v) = v else { continue };
            if v >= dt && above.is_none_or(|a| v < open[a].as_ref().unwrap()) {
                above = Some(s);
            }
            if v <= dt && below.is_none_or(|b| v > open[b].as_ref().unwrap()) {
                below = Some(s);
            }
        }
        let (Some(p), Some(qs)) = (above, below) else {
            unreachable!("majorization guarantees a bracketing pair");
        };
        let vp = open[p].clone().unwrap();
        let vq = open[qs].clone().unwrap();
        if &vp == dt || &vq == dt {
            let s = if &vp == dt { p } else { qs };
            open[s] = None;
            slot_of_target[t] = s;
            continue;
        }
        let c2 = (dt - &vq) / (&vp - &vq);
        let c = c2.to_f64().sqrt();
        let s = (Scalar::one() - &c2).to_f64().sqrt();
        apply_rotation(&mut m, p, qs, c, s);
        let residual = &vp + &vq - dt;
        open[p] = None;
        open[qs] = Some(residual.clone());
        slot_of_target[t] = p;
        steps.push(RotationStep { target: t, slot_p: p, slot_q: qs, cos: c, sin: s, residual });
    }

    let dimension = n;
    let mut packed = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let v = if i == j { d[i].to_f64() } else { m[(slot_of_target[i], slot_of_target[j])] };
            packed.push(v);
        }
    }
    Ok(SymmetricMatrixWitness { dimension, packed, steps })
}

/// `M <- G M G^T` for the rotation with `G[p][p] = G[q][q] = c`,
/// `G[p][q] = s`, `G[q][p] = -s`.
fn apply_rotation(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = m.nrows();
    for j in 0..n {
        let (a, b) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = c * a + s * b;
        m[(q, j)] = -s * a + c * b;
    }
    for i in 0..n {
        let (a, b) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * a + s * b;
        m[(i, q)] = -s * a + c * b;
    }
}
