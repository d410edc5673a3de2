//! Eigenvalue lists of `N`-dimensional compressions: the sets `Λ_N` for a
//! fixed diagonal in `[0, 1]` and their minimal elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::RealVector;
use crate::numerics::{frac_mod_one, ExtendedCount, Scalar};
use crate::sequences::{cut_stats, f_value, in_class_f, Band, DiagonalSequence, GeometricTail};
use crate::transforms::truncate_to_finite;

const MAX_HALVINGS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MinimalCase {
    Case1,
    Case2,
    Case3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalEntry {
    pub k: u64,
    pub mu: RealVector,
    pub case: MinimalCase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Scalar>,
    #[serde(rename = "Na", default, skip_serializing_if = "Option::is_none")]
    pub na: Option<usize>,
    #[serde(rename = "Nb", default, skip_serializing_if = "Option::is_none")]
    pub nb: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalElementReport {
    pub eta: Scalar,
    /// Truncation level actually used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Scalar>,
    pub entries: Vec<MinimalEntry>,
}

fn check_unit_class_f(seq: &DiagonalSequence) -> Result<()> {
    if let Some((lo, hi)) = seq.extent() {
        if lo.is_negative() || hi > Scalar::one() {
            return Err(Error::BoundsViolated("entries must lie in [0, 1]".into()));
        }
    }
    if !in_class_f(seq) {
        return Err(Error::NotInClassF);
    }
    Ok(())
}

fn trace_gap_at_half(seq: &DiagonalSequence) -> Result<Scalar> {
    cut_stats(seq, &Scalar::ratio(1, 2), &Scalar::one())?.trace_gap().ok_or(Error::NotInClassF)
}

/// Fractional part of `C(1/2) - D(1/2)`.
pub fn eta_of(seq: &DiagonalSequence) -> Result<Scalar> {
    check_unit_class_f(seq)?;
    Ok(frac_mod_one(&trace_gap_at_half(seq)?))
}

/// Largest `x` with `sum_{v > x} (v - x) = target`, for `values`
/// nonincreasing and `target >= 0`. The sum keeps growing linearly past the
/// last value.
fn solve_descending(values: &[Scalar], target: &Scalar) -> Scalar {
    let mut g = Scalar::zero();
    for j in 1..values.len() {
        let next = &g + Scalar::from_integer(j as i64) * (&values[j - 1] - &values[j]);
        if &next >= target {
            return &values[j - 1] - (target - &g) / Scalar::from_integer(j as i64);
        }
        g = next;
    }
    let n = values.len() as i64;
    &values[values.len() - 1] - (target - &g) / Scalar::from_integer(n)
}

fn precondition(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(what.into()))
    }
}

/// Minimal element `μ` of `{λ ∈ (0,1)^N : d ≺ (1^{K-k}, λ, 0^{M-N-K+k})}`.
///
/// `d` must be nonincreasing in `[0, 1]` with `Σd = K + eta`, and the target
/// level `(k + eta)/N` must lie in `(0, 1)`.
pub fn minimal_element(d: &RealVector, big_k: u64, eta: &Scalar, n: usize, k: u64) -> Result<MinimalEntry> {
    let m = d.len();
    let one = Scalar::one();
    precondition(d.iter().all(|x| !x.is_negative() && x <= &one), "entries in [0, 1]")?;
    precondition(d.as_slice().windows(2).all(|w| w[0] >= w[1]), "d nonincreasing")?;
    precondition(!eta.is_negative() && eta < &one, "0 <= eta < 1")?;
    precondition(d.sum() == Scalar::from_integer(big_k as i64) + eta, "sum d = K + eta")?;
    precondition(n >= 1 && n < m, "1 <= N < M")?;
    precondition(k <= big_k, "k <= K")?;
    let level = Scalar::from_integer(k as i64) + eta;
    precondition(level.is_positive(), "k + eta > 0")?;
    let off = (big_k - k) as usize;
    precondition(off <= m - n, "K - k <= M - N")?;
    let t = &level / Scalar::from_integer(n as i64);
    precondition(t < one, "(k + eta)/N < 1")?;

    let d = d.as_slice();
    let g_budget: Scalar = d[..off].iter().map(|x| &one - x).sum();
    let h_budget: Scalar = d[off + n..].iter().sum();
    let g_at = |x: &Scalar| -> Scalar { d[off..].iter().filter(|v| *v > x).map(|v| v - x).sum() };
    let h_at = |x: &Scalar| -> Scalar { d[..off + n].iter().filter(|v| *v < x).map(|v| x - v).sum() };

    let flat = |case| MinimalEntry {
        k,
        mu: RealVector(vec![t.clone(); n]),
        case,
        a: None,
        b: None,
        na: None,
        nb: None,
    };
    if g_at(&t) <= g_budget {
        return Ok(flat(MinimalCase::Case1));
    }
    if h_at(&t) <= h_budget {
        return Ok(flat(MinimalCase::Case2));
    }

    let a = solve_descending(&d[off..], &g_budget);
    let mirrored: Vec<Scalar> = d[..off + n].iter().rev().map(|x| -x).collect();
    let b = -solve_descending(&mirrored, &h_budget);
    debug_assert!(b < t && t < a);
    let na = d[off..].iter().filter(|v| *v > &a).count();
    let nb = d[..off + n].iter().filter(|v| *v < &b).count();
    let mu: Vec<Scalar> = (0..n)
        .map(|i| {
            if i < na {
                a.clone()
            } else if i >= n - nb {
                b.clone()
            } else {
                d[i + off].clone()
            }
        })
        .collect();
    Ok(MinimalEntry { k, mu: RealVector(mu), case: MinimalCase::Case3, a: Some(a), b: Some(b), na: Some(na), nb: Some(nb) })
}

/// `(1^{ones}, λ, 0^{zeros})`.
pub fn pad_with_extremes(lambda: &RealVector, ones: usize, zeros: usize) -> RealVector {
    std::iter::repeat_n(Scalar::one(), ones)
        .chain(lambda.iter().cloned())
        .chain(std::iter::repeat_n(Scalar::zero(), zeros))
        .collect()
}

fn admissible_levels(eta: &Scalar, n: usize) -> Vec<u64> {
    let first = if eta.is_zero() { 1 } else { 0 };
    (first..n as u64).collect()
}

fn target(k: u64, eta: &Scalar, n: usize) -> Scalar {
    (Scalar::from_integer(k as i64) + eta) / Scalar::from_integer(n as i64)
}

fn at_least(count: ExtendedCount, n: usize) -> bool {
    match count {
        ExtendedCount::Infinite => true,
        ExtendedCount::Finite(c) => c >= n as u64,
    }
}

/// At least `N` entries strictly between each target level and the
/// `epsilon` margins.
fn separates(seq: &DiagonalSequence, eta: &Scalar, n: usize, epsilon: &Scalar) -> bool {
    let top = Scalar::one() - epsilon;
    admissible_levels(eta, n).into_iter().all(|k| {
        let t = target(k, eta, n);
        t > *epsilon
            && t < top
            && at_least(seq.count_in(&Band::open(&t, &top)), n)
            && at_least(seq.count_in(&Band::open(epsilon, &t)), n)
    })
}

fn check_two_sided(seq: &DiagonalSequence) -> Result<()> {
    let half = Scalar::ratio(1, 2);
    let low = seq.count_in(&Band::open(&Scalar::zero(), &half));
    let high = seq.count_in(&Band::half_open(&half, &Scalar::one()));
    if low.is_infinite() && high.is_infinite() {
        Ok(())
    } else {
        Err(Error::HypothesisViolated("need infinitely many entries in (0, 1/2) and in [1/2, 1)".into()))
    }
}

/// Minimal elements of `Λ_N(seq)`, one per admissible trace level, with an
/// explicit truncation level.
pub fn minimal_set_with_epsilon(seq: &DiagonalSequence, n: usize, epsilon: &Scalar) -> Result<MinimalElementReport> {
    check_unit_class_f(seq)?;
    check_two_sided(seq)?;
    if n == 0 {
        return Err(Error::PreconditionViolated("N >= 1".into()));
    }
    let eta = eta_of(seq)?;
    if !separates(seq, &eta, n, epsilon) {
        return Err(Error::PreconditionViolated(format!("epsilon {epsilon} does not separate the target levels")));
    }
    let (truncated, _) = truncate_to_finite(seq, epsilon)?;
    let mut interior = truncated
        .values_in(&Band::open(&Scalar::zero(), &Scalar::one()))
        .expect("truncation leaves finitely many interior entries");
    interior.reverse();
    let d = RealVector(interior);
    let big_k = (d.sum() - &eta).to_i64().filter(|v| *v >= 0).ok_or_else(|| {
        Error::PreconditionViolated("interior trace is not K + eta".into())
    })? as u64;
    let entries = admissible_levels(&eta, n)
        .into_iter()
        .map(|k| minimal_element(&d, big_k, &eta, n, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(MinimalElementReport { eta, epsilon: Some(epsilon.clone()), entries })
}

/// Minimal elements of `Λ_N(seq)` for a sequence with infinitely many
/// entries on both sides of `1/2` inside `(0, 1)`.
pub fn minimal_set(seq: &DiagonalSequence, n: usize) -> Result<MinimalElementReport> {
    check_unit_class_f(seq)?;
    check_two_sided(seq)?;
    if n == 0 {
        return Err(Error::PreconditionViolated("N >= 1".into()));
    }
    let eta = eta_of(seq)?;
    let levels = admissible_levels(&eta, n);
    if levels.is_empty() {
        return Ok(MinimalElementReport { eta, epsilon: None, entries: Vec::new() });
    }
    let mut epsilon = levels
        .iter()
        .map(|&k| {
            let t = target(k, &eta, n);
            std::cmp::min(t.clone(), Scalar::one() - t)
        })
        .min()
        .expect("nonempty")
        / Scalar::from_integer(2);
    let two = Scalar::from_integer(2);
    for _ in 0..MAX_HALVINGS {
        if separates(seq, &eta, n, &epsilon) {
            match minimal_set_with_epsilon(seq, n, &epsilon) {
                Ok(report) => return Ok(report),
                Err(Error::PreconditionViolated(why)) => log::debug!("epsilon {epsilon} rejected: {why}"),
                Err(e) => return Err(e),
            }
        }
        epsilon = epsilon / &two;
    }
    Err(Error::PreconditionViolated("no admissible truncation level found".into()))
}

/// Outcome of a membership test, naming the first failed condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_condition: Option<String>,
}

/// Like [`lambda_membership`], reporting `"trace"` or `"f:alpha=<λ_i>"` on
/// failure.
pub fn membership_report(seq: &DiagonalSequence, lambda: &RealVector) -> Result<MembershipReport> {
    check_unit_class_f(seq)?;
    let one = Scalar::one();
    if lambda.iter().any(|x| !x.is_positive() || x >= &one) {
        return Err(Error::OutOfRange("eigenvalues must lie in (0, 1)".into()));
    }
    let fail = |why: String| Ok(MembershipReport { member: false, failed_condition: Some(why) });
    if !(trace_gap_at_half(seq)? - lambda.sum()).is_integer() {
        return fail("trace".into());
    }
    let own = DiagonalSequence::finite(Scalar::zero(), one, lambda.iter().cloned())?;
    for x in lambda.iter() {
        if f_value(seq, x)? < f_value(&own, x)? {
            return fail(format!("f:alpha={x}"));
        }
    }
    Ok(MembershipReport { member: true, failed_condition: None })
}

/// `λ ∈ Λ_N(seq)`: the trace matches modulo 1 and `f_seq(λ_i) >= f_λ(λ_i)`.
pub fn lambda_membership(seq: &DiagonalSequence, lambda: &RealVector) -> Result<bool> {
    Ok(membership_report(seq, lambda)?.member)
}

/// Entries `β^i` and `1 - β^i` for `i >= 1`.
pub fn beta_sequence(beta: &Scalar) -> Result<DiagonalSequence> {
    if !(beta.is_positive() && beta < &Scalar::one()) {
        return Err(Error::OutOfRange(format!("beta {beta} not in (0, 1)")));
    }
    DiagonalSequence::new(Scalar::zero(), Scalar::one())?
        .with_tail(GeometricTail::new(Scalar::zero(), Scalar::one(), beta.clone())?)?
        .with_tail(GeometricTail::new(Scalar::one(), -Scalar::one(), beta.clone())?)
}
