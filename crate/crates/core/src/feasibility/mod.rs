//! Decision engine for diagonals of self-adjoint operators with finite
//! spectrum.
//!
//! [`decide_diagonal`] dispatches on the number of infinite multiplicities:
//! none (classical Schur-Horn), one (exterior majorization plus an exact
//! trace), two (exterior conditions and either non-summability or interior
//! majorization), or more (exterior conditions plus non-summability).

mod riemann;

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::majorization::{decreasing_rearrangement, RealVector};
use crate::numerics::{ExtendedCount, Scalar};
use crate::sequences::{cut_stats_unchecked, Band, DiagonalSequence, Mass};
use crate::spectrum::{classify, normalize, NormalizedSpec, SpectrumClass, SpectrumSpec};

pub use riemann::{
    equivalence_audit, riemann_delta, riemann_interior_check, riemann_interior_search, riemann_limit,
    riemann_proof_k, ZSequence, ZSide,
};

/// Margin of one inequality; `Divergent` stands for `-inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slack {
    Finite(Scalar),
    Divergent,
}

impl Slack {
    pub fn is_nonnegative(&self) -> bool {
        matches!(self, Slack::Finite(x) if !x.is_negative())
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Slack::Finite(x) => Some(x),
            Slack::Divergent => None,
        }
    }
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slack::Finite(x) => write!(f, "{x}"),
            Slack::Divergent => f.write_str("-inf"),
        }
    }
}

impl Serialize for Slack {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slack {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "-inf" {
            Ok(Slack::Divergent)
        } else {
            s.parse().map(Slack::Finite).map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    Classical,
    OneInfinite,
    TwoInfiniteSummable,
    NonSummable,
    ManyInfinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<i64>,
    #[serde(default)]
    pub slacks: Vec<(String, Slack)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_condition: Option<String>,
}

impl FeasibilityVerdict {
    fn new(branch: Branch) -> Self {
        FeasibilityVerdict { feasible: true, branch, k0: None, slacks: Vec::new(), failed_condition: None }
    }

    fn fail(mut self, condition: impl Into<String>) -> Self {
        self.feasible = false;
        if self.failed_condition.is_none() {
            self.failed_condition = Some(condition.into());
        }
        self
    }

    /// Record slacks; the first negative one becomes the failed condition.
    fn push_slacks(&mut self, slacks: Vec<(String, Slack)>) {
        for (id, s) in slacks {
            if !s.is_nonnegative() && self.failed_condition.is_none() {
                self.feasible = false;
                self.failed_condition = Some(id.clone());
            }
            self.slacks.push((id, s));
        }
    }

    pub fn slack(&self, id: &str) -> Option<&Slack> {
        self.slacks.iter().find(|(k, _)| k == id).map(|(_, s)| s)
    }
}

fn scalar_to_i64(x: &Scalar) -> Result<i64> {
    x.to_integer()
        .and_then(|n| n.to_i64())
        .ok_or_else(|| Error::OutOfRange(format!("integer witness {x} does not fit in 64 bits")))
}

fn count_scalar(n: u64) -> Scalar {
    Scalar::from(n)
}

fn finite_mult(nspec: &NormalizedSpec, j: i64) -> u64 {
    nspec.mult(j).finite().expect("exterior and interior multiplicities are finite here")
}

/// `sum_{j<r} (A_r - A_j) N_j - sum_{d <= A_r} (A_r - d)` over the given
/// eigenvalues below `a_r`; `s` is in translated coordinates.
fn lower_slack(s: &DiagonalSequence, below: &[(Scalar, u64)], a_r: &Scalar) -> Slack {
    let budget: Scalar = below.iter().map(|(a, n)| (a_r - a) * count_scalar(*n)).sum();
    match s.mass_in(&Band::at_most(a_r), a_r) {
        // mass_in gives sum (d - A_r), which is <= 0 here
        Mass::Finite(m) => Slack::Finite(budget + m),
        Mass::Divergent => Slack::Divergent,
    }
}

/// `sum_{j>r} (A_j - A_r) N_j - sum_{d >= A_r} (d - A_r)`.
fn upper_slack(s: &DiagonalSequence, above: &[(Scalar, u64)], a_r: &Scalar) -> Slack {
    let budget: Scalar = above.iter().map(|(a, n)| (a - a_r) * count_scalar(*n)).sum();
    match s.mass_in(&Band::at_least(a_r), a_r) {
        Mass::Finite(m) => Slack::Finite(budget - m),
        Mass::Divergent => Slack::Divergent,
    }
}

fn check_bounds(seq: &DiagonalSequence, lo: &Scalar, hi: &Scalar) -> Result<()> {
    if let Some((min, max)) = seq.extent() {
        if &min < lo || &max > hi {
            return Err(Error::BoundsViolated(format!(
                "diagonal spans [{min}, {max}] but the spectrum spans [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

fn frame_bounds_check(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<()> {
    let lo = nspec.a(nspec.lowest_index()) + &nspec.translation;
    let hi = nspec.a(nspec.highest_index()) + &nspec.translation;
    check_bounds(seq, &lo, &hi)
}

/// Lower exterior majorization slacks for `r = -m..=0`, keyed by `r`.
pub fn lower_exterior_check(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<Vec<(i64, Slack)>> {
    frame_bounds_check(seq, nspec)?;
    let s = seq.translate(&-&nspec.translation);
    let mut out = Vec::new();
    for r in nspec.lowest_index()..=0 {
        let below: Vec<(Scalar, u64)> =
            (nspec.lowest_index()..r).map(|j| (nspec.a(j).clone(), finite_mult(nspec, j))).collect();
        out.push((r, lower_slack(&s, &below, nspec.a(r))));
    }
    Ok(out)
}

/// Upper exterior majorization slacks for `r = n+1..=n+p+1`, keyed by `r`.
pub fn upper_exterior_check(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<Vec<(i64, Slack)>> {
    frame_bounds_check(seq, nspec)?;
    let s = seq.translate(&-&nspec.translation);
    let mut out = Vec::new();
    for r in nspec.top_infinite()..=nspec.highest_index() {
        let above: Vec<(Scalar, u64)> = (r + 1..=nspec.highest_index())
            .map(|j| (nspec.a(j).clone(), finite_mult(nspec, j)))
            .collect();
        out.push((r, upper_slack(&s, &above, nspec.a(r))));
    }
    Ok(out)
}

/// Trace-class extension of majorization: the mass of `d` above
/// `lambda_inf` is bounded by that of the eigenvalues.
pub fn infinite_tail_exterior_check(d_values: &[Scalar], lambdas: &[(Scalar, u64)], lambda_inf: &Scalar) -> bool {
    let lhs: Scalar = d_values.iter().filter(|d| *d >= lambda_inf).map(|d| d - lambda_inf).sum();
    let rhs: Scalar = lambdas.iter().map(|(l, n)| (l - lambda_inf) * count_scalar(*n)).sum();
    lhs <= rhs
}

/// Diagonals of orthogonal projections: feasible iff a cut sum diverges at
/// `1/2` or `C(1/2) - D(1/2)` is an integer.
pub fn kadison_check(seq: &DiagonalSequence) -> Result<FeasibilityVerdict> {
    check_bounds(seq, &Scalar::zero(), &Scalar::one())?;
    let stats = cut_stats_unchecked(seq, &Scalar::ratio(1, 2), &Scalar::one());
    let Some(gap) = stats.trace_gap() else {
        return Ok(FeasibilityVerdict::new(Branch::NonSummable));
    };
    let branch = if seq.is_finite() { Branch::Classical } else { Branch::TwoInfiniteSummable };
    let mut v = FeasibilityVerdict::new(branch);
    if gap.is_integer() {
        v.k0 = Some(scalar_to_i64(&gap)?);
        Ok(v)
    } else {
        Ok(v.fail("integrality"))
    }
}

/// Partition form: `sum_{I0} d - sum_{I1} (1 - d)` is an integer.
pub fn kadison_partition_check(i0_mass: &Scalar, i1_deficiency: &Scalar) -> bool {
    (i0_mass - i1_deficiency).is_integer()
}

fn interior_preconditions(nspec: &NormalizedSpec) -> Result<()> {
    if nspec.n == 0 {
        return Err(Error::HypothesisViolated("interior majorization needs an interior eigenvalue".into()));
    }
    for j in 1..=nspec.n as i64 {
        if nspec.mult(j).is_infinite() {
            return Err(Error::InteriorInfinite((nspec.a(j) + &nspec.translation).to_string()));
        }
    }
    Ok(())
}

/// `sum_{j != 0, n+1} A_j N_j`.
fn off_frame_trace(nspec: &NormalizedSpec) -> Scalar {
    nspec
        .indices()
        .filter(|&j| j != 0 && j != nspec.top_infinite())
        .map(|j| nspec.a(j) * count_scalar(finite_mult(nspec, j)))
        .sum()
}

fn summable_translated(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<DiagonalSequence> {
    let s = seq.translate(&-&nspec.translation);
    let half = &nspec.b / Scalar::from(2i64);
    if !cut_stats_unchecked(&s, &half, &nspec.b).is_summable() {
        return Err(Error::NotSummable);
    }
    Ok(s)
}

/// Interior majorization: the trace identity fixes `k0`, then one
/// inequality per interior eigenvalue `A_1..A_n`.
pub fn interior_majorization_check(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<FeasibilityVerdict> {
    interior_preconditions(nspec)?;
    let s = summable_translated(seq, nspec)?;
    let b = &nspec.b;
    let n = nspec.n as i64;
    let a_n = nspec.a(n);
    let top = cut_stats_unchecked(&s, a_n, b);
    let residue = top.trace_gap().expect("summable") - off_frame_trace(nspec);
    let quotient = &residue / b;
    let mut v = FeasibilityVerdict::new(Branch::TwoInfiniteSummable);
    if !quotient.is_integer() {
        return Ok(v.fail("trace"));
    }
    let k0 = scalar_to_i64(&quotient)?;
    v.k0 = Some(k0);

    let mut slacks = Vec::new();
    for r in 1..=n {
        let a_r = nspec.a(r);
        let c = cut_stats_unchecked(&s, a_r, b).c.finite().expect("summable").clone();
        let between = match s.count_in(&Band::half_open(a_r, a_n)) {
            ExtendedCount::Finite(x) => x,
            ExtendedCount::Infinite => return Err(Error::NotSummable),
        };
        let below: Scalar = (nspec.lowest_index()..=r)
            .filter(|&j| j != 0)
            .map(|j| nspec.a(j) * count_scalar(finite_mult(nspec, j)))
            .sum();
        let above: Scalar = (r + 1..=nspec.highest_index())
            .filter(|&j| j != nspec.top_infinite())
            .map(|j| count_scalar(finite_mult(nspec, j)))
            .sum();
        let rhs = below + a_r * (Scalar::from(k0) - count_scalar(between) + above);
        slacks.push((format!("interior:r={r}"), Slack::Finite(c - rhs)));
    }
    v.push_slacks(slacks);
    Ok(v)
}

/// The `k`-free form of the interior inequalities,
/// `(B - A_r) C(A_r) + A_r D(A_r) - RHS`, for `r = 1..=n`.
///
/// When the trace identity holds this equals `B` times the corresponding
/// slack of [`interior_majorization_check`].
pub fn interior_gap_form(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<Vec<(i64, Scalar)>> {
    interior_preconditions(nspec)?;
    let s = summable_translated(seq, nspec)?;
    let b = &nspec.b;
    let mut out = Vec::new();
    for r in 1..=nspec.n as i64 {
        let a_r = nspec.a(r);
        let stats = cut_stats_unchecked(&s, a_r, b);
        let (c, d) = (stats.c.finite().expect("summable"), stats.d.finite().expect("summable"));
        let below: Scalar = (nspec.lowest_index()..=r)
            .filter(|&j| j != 0)
            .map(|j| nspec.a(j) * count_scalar(finite_mult(nspec, j)))
            .sum();
        let above: Scalar = (r + 1..=nspec.highest_index())
            .filter(|&j| j != nspec.top_infinite())
            .map(|j| (b - nspec.a(j)) * count_scalar(finite_mult(nspec, j)))
            .sum();
        let lhs = (b - a_r) * c + a_r * d;
        out.push((r, lhs - (b - a_r) * below - a_r * above));
    }
    Ok(out)
}

fn exterior_slacks(seq: &DiagonalSequence, nspec: &NormalizedSpec) -> Result<Vec<(String, Slack)>> {
    let mut out: Vec<(String, Slack)> =
        lower_exterior_check(seq, nspec)?.into_iter().map(|(r, s)| (format!("lower:r={r}"), s)).collect();
    out.extend(upper_exterior_check(seq, nspec)?.into_iter().map(|(r, s)| (format!("upper:r={r}"), s)));
    Ok(out)
}

fn decide_all_finite(seq: &DiagonalSequence, spec: &SpectrumSpec) -> Result<FeasibilityVerdict> {
    let v = FeasibilityVerdict::new(Branch::Classical);
    let lambda = spec.expanded().expect("all multiplicities finite");
    let d = match seq.values_in(&Band::all()) {
        Some(d) if d.len() == lambda.len() => d,
        _ => return Ok(v.fail("dimension")),
    };
    let d = decreasing_rearrangement(&RealVector(d));
    let mut v = v;
    let (mut ls, mut ds) = (Scalar::zero(), Scalar::zero());
    let mut slacks = Vec::new();
    for (i, (l, x)) in lambda.iter().zip(d.iter()).enumerate().take(lambda.len().saturating_sub(1)) {
        ls += l;
        ds += x;
        slacks.push((format!("partial-sum:n={}", i + 1), Slack::Finite(&ls - &ds)));
    }
    v.push_slacks(slacks);
    if lambda.iter().sum::<Scalar>() != d.sum() {
        v = v.fail("trace");
    }
    Ok(v)
}

fn decide_one_infinite(seq: &DiagonalSequence, spec: &SpectrumSpec) -> Result<FeasibilityVerdict> {
    let pairs = spec.pairs();
    let zero_at = pairs.iter().position(|p| p.multiplicity.is_infinite()).expect("one infinite");
    let t = pairs[zero_at].eigenvalue.clone();
    let s = seq.translate(&-&t);
    let shifted: Vec<(Scalar, u64)> = pairs
        .iter()
        .map(|p| (&p.eigenvalue - &t, p.multiplicity.finite().unwrap_or(0)))
        .collect();
    let mut v = FeasibilityVerdict::new(Branch::OneInfinite);
    let mut slacks = Vec::new();
    for r in 0..=zero_at {
        slacks.push((format!("lower:r={}", r as i64 - zero_at as i64), lower_slack(&s, &shifted[..r], &shifted[r].0)));
    }
    for r in zero_at..pairs.len() {
        slacks.push((format!("upper:r={}", r - zero_at), upper_slack(&s, &shifted[r + 1..], &shifted[r].0)));
    }
    v.push_slacks(slacks);
    if !seq.len().is_infinite() {
        return Ok(v.fail("dimension"));
    }
    let target: Scalar = shifted.iter().map(|(a, n)| a * count_scalar(*n)).sum();
    match s.mass_in(&Band::all(), &Scalar::zero()) {
        Mass::Finite(total) if total == target => Ok(v),
        _ => Ok(v.fail("trace")),
    }
}

fn decide_framed(seq: &DiagonalSequence, spec: &SpectrumSpec, class: SpectrumClass) -> Result<FeasibilityVerdict> {
    let nspec = normalize(spec)?;
    let s = seq.translate(&-&nspec.translation);
    let half = &nspec.b / Scalar::from(2i64);
    let stats = cut_stats_unchecked(&s, &half, &nspec.b);
    let summable = stats.is_summable();
    let branch = match (summable, class) {
        (false, _) => Branch::NonSummable,
        (true, SpectrumClass::TwoInfinite) => Branch::TwoInfiniteSummable,
        (true, _) => Branch::ManyInfinite,
    };
    let mut v = FeasibilityVerdict::new(branch);
    v.push_slacks(exterior_slacks(seq, &nspec)?);
    if !summable {
        return Ok(v);
    }
    if class == SpectrumClass::ManyInfinite {
        return Ok(v.fail("non-summability"));
    }
    if !(stats.count_below.is_infinite() && stats.count_at_least.is_infinite()) {
        return Ok(v.fail("infinite-cuts"));
    }
    if nspec.n >= 1 {
        let interior = interior_majorization_check(seq, &nspec)?;
        v.k0 = interior.k0;
        v.slacks.extend(interior.slacks);
        if !interior.feasible {
            v.feasible = false;
            v.failed_condition = v.failed_condition.or(interior.failed_condition);
        }
        return Ok(v);
    }
    let quotient = (stats.trace_gap().expect("summable") - off_frame_trace(&nspec)) / &nspec.b;
    if quotient.is_integer() {
        v.k0 = Some(scalar_to_i64(&quotient)?);
        Ok(v)
    } else {
        Ok(v.fail("trace"))
    }
}

/// Is `seq` the diagonal of a self-adjoint operator with eigenvalue
/// multiplicity list `spec`?
pub fn decide_diagonal(seq: &DiagonalSequence, spec: &SpectrumSpec) -> Result<FeasibilityVerdict> {
    check_bounds(seq, spec.min_eigenvalue(), spec.max_eigenvalue())?;
    let class = classify(spec);
    log::debug!("deciding diagonal against {class:?} spectrum");
    match class {
        SpectrumClass::AllFinite => decide_all_finite(seq, spec),
        SpectrumClass::OneInfinite => decide_one_infinite(seq, spec),
        SpectrumClass::TwoInfinite | SpectrumClass::ManyInfinite => decide_framed(seq, spec, class),
    }
}
