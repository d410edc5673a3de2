//! Mass-moving surgeries on diagonal sequences.
//!
//! Each transform returns the new sequence and a [`TransformReceipt`]:
//! the entries removed and added, plus the aggregate sums the transform
//! is meant to shift or preserve, before and after.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ExtendedCount, Scalar};
use crate::sequences::{in_class_f, Band, DiagonalSequence, GeometricTail, Mass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub name: String,
    pub before: Mass,
    pub after: Mass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformReceipt {
    pub operation: String,
    pub moved_mass: Scalar,
    /// Named groups of entry values (selections, receivers, cutoffs).
    pub touched: Vec<(String, Vec<Scalar>)>,
    pub removed: DiagonalSequence,
    pub added: DiagonalSequence,
    pub aggregates: Vec<Aggregate>,
}

impl TransformReceipt {
    fn identity(operation: &str, seq: &DiagonalSequence) -> Self {
        let (lo, hi) = seq.bounds();
        let empty = DiagonalSequence::new(lo.clone(), hi.clone()).expect("bounds already valid");
        TransformReceipt {
            operation: operation.into(),
            moved_mass: Scalar::zero(),
            touched: Vec::new(),
            removed: empty.clone(),
            added: empty,
            aggregates: Vec::new(),
        }
    }

    pub fn aggregate(&self, name: &str) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.name == name)
    }

    /// Undo the transform on its output.
    pub fn replay_backwards(&self, transformed: &DiagonalSequence) -> Result<DiagonalSequence> {
        let mut seq = transformed.clone();
        seq.subtract(&self.added)?;
        Ok(seq.concat(&self.removed))
    }
}

fn piece(bounds: &DiagonalSequence, values: &[Scalar]) -> DiagonalSequence {
    let (lo, hi) = bounds.bounds();
    let mut p = DiagonalSequence::new(lo.clone(), hi.clone()).expect("bounds already valid");
    for v in values {
        p.widen_bounds(v, v);
        p.push_atom(v.clone(), 1);
    }
    p
}

/// Shift `eta0` of mass out of `i0` toward `a` and into `i1` toward `b`.
///
/// `i0` and `i1` are multisets of entry values drawn from `seq`. `i0` is
/// drained from its smallest entry upward, `i1` filled from its largest
/// entry downward.
pub fn move_toward_endpoints(
    seq: &DiagonalSequence,
    i0: &[Scalar],
    i1: &[Scalar],
    eta0: &Scalar,
    a: &Scalar,
    b: &Scalar,
) -> Result<(DiagonalSequence, TransformReceipt)> {
    if eta0.is_negative() {
        return Err(Error::OutOfRange(format!("moved mass {eta0} is negative")));
    }
    if i0.iter().chain(i1).any(|v| v < a || v > b) {
        return Err(Error::OutOfRange(format!("selected entries must lie in [{a}, {b}]")));
    }
    if let (Some(hi0), Some(lo1)) = (i0.iter().max(), i1.iter().min()) {
        if hi0 > lo1 {
            return Err(Error::OrderViolated(format!("max of I0 {hi0} exceeds min of I1 {lo1}")));
        }
    }
    let room0: Scalar = i0.iter().map(|v| v - a).sum();
    let room1: Scalar = i1.iter().map(|v| b - v).sum();
    let available = std::cmp::min(&room0, &room1).clone();
    if eta0 > &available {
        return Err(Error::BudgetExceeded { requested: eta0.to_string(), available: available.to_string() });
    }

    let mut out = seq.clone();
    for v in i0.iter().chain(i1) {
        out.take_value(v)?;
    }
    let mut new0 = i0.to_vec();
    new0.sort();
    let mut left = eta0.clone();
    for v in new0.iter_mut() {
        let step = std::cmp::min(&*v - a, left.clone());
        *v -= &step;
        left -= step;
    }
    let mut new1 = i1.to_vec();
    new1.sort_by(|x, y| y.cmp(x));
    let mut left = eta0.clone();
    for v in new1.iter_mut() {
        let step = std::cmp::min(b - &*v, left.clone());
        *v += &step;
        left -= step;
    }
    for v in new0.iter().chain(&new1) {
        out.push_atom(v.clone(), 1);
    }
    out.widen_bounds(a, b);

    let new_room0: Scalar = new0.iter().map(|v| v - a).sum();
    let new_room1: Scalar = new1.iter().map(|v| b - v).sum();
    let receipt = TransformReceipt {
        operation: "move".into(),
        moved_mass: eta0.clone(),
        touched: vec![("I0".into(), i0.to_vec()), ("I1".into(), i1.to_vec())],
        removed: piece(seq, &[i0, i1].concat()),
        added: piece(seq, &[new0, new1].concat()),
        aggregates: vec![
            Aggregate { name: "I0 excess over A".into(), before: Mass::Finite(room0), after: Mass::Finite(new_room0) },
            Aggregate { name: "I1 deficit below B".into(), before: Mass::Finite(room1), after: Mass::Finite(new_room1) },
        ],
    };
    Ok((out, receipt))
}

/// A monotone run of entries accumulating at a point of `[0, delta)`.
enum Group {
    Atom(Scalar),
    Tail(GeometricTail),
}

impl Group {
    /// The first `count` members, in monotone order.
    fn take(&self, band: &Band, count: usize) -> Vec<Scalar> {
        match self {
            Group::Atom(v) => vec![v.clone(); count],
            Group::Tail(t) => {
                let mut out = Vec::with_capacity(count);
                let mut i = 1;
                while out.len() < count {
                    let v = t.term(i);
                    if band.contains(&v) {
                        out.push(v);
                    }
                    i += 1;
                }
                out
            }
        }
    }

    fn nonincreasing(&self) -> bool {
        match self {
            Group::Atom(_) => true,
            Group::Tail(t) => t.coeff.is_positive(),
        }
    }

    fn limit(&self) -> &Scalar {
        match self {
            Group::Atom(v) => v,
            Group::Tail(t) => &t.limit,
        }
    }
}

fn find_group(seq: &DiagonalSequence, delta: &Scalar) -> Option<Group> {
    let band = Band::half_open(&Scalar::zero(), delta);
    if let Some(v) = seq.infinite_atoms().find(|v| band.contains(v)) {
        return Some(Group::Atom(v.clone()));
    }
    let positive = Band::closed(&Scalar::zero(), delta);
    seq.tails()
        .iter()
        .find(|t| band.contains(&t.limit) && t.members(&positive).rest_from.is_some())
        .cloned()
        .map(Group::Tail)
}

fn signed_sums(seq: &DiagonalSequence, gamma: &Scalar, delta: &Scalar) -> (Mass, Mass) {
    let zero = Scalar::zero();
    let neg = Band::half_open(&-gamma, &zero);
    let pos = Band { lower: std::ops::Bound::Excluded(zero.clone()), upper: std::ops::Bound::Included(delta.clone()) };
    (seq.mass_in(&neg, &zero), seq.mass_in(&pos, &zero))
}

/// Push `eta` of mass across zero inside the band `J = [-gamma, delta]`:
/// the negative part of `J` loses `eta`, the positive part gains `eta`.
///
/// Needs infinitely many entries of `J` accumulating strictly inside one
/// half of the band (a repeated value or a tail limit in `[0, delta)` or
/// `(-gamma, 0]`).
pub fn decouple(
    seq: &DiagonalSequence,
    gamma: &Scalar,
    delta: &Scalar,
    eta: &Scalar,
) -> Result<(DiagonalSequence, TransformReceipt)> {
    if !gamma.is_positive() || !delta.is_positive() {
        return Err(Error::OutOfRange("band half-widths must be positive".into()));
    }
    if eta.is_negative() {
        return Err(Error::OutOfRange(format!("moved mass {eta} is negative")));
    }
    let (neg_before, pos_before) = signed_sums(seq, gamma, delta);
    let finish = |out: DiagonalSequence, mut receipt: TransformReceipt| {
        let (neg_after, pos_after) = signed_sums(&out, gamma, delta);
        receipt.operation = "decouple".into();
        receipt.moved_mass = eta.clone();
        receipt.aggregates = vec![
            Aggregate { name: "J negative sum".into(), before: neg_before.clone(), after: neg_after },
            Aggregate { name: "J positive sum".into(), before: pos_before.clone(), after: pos_after },
        ];
        (out, receipt)
    };
    if eta.is_zero() {
        return Ok(finish(seq.clone(), TransformReceipt::identity("decouple", seq)));
    }
    if find_group(seq, delta).is_some() {
        let (out, receipt) = decouple_positive(seq, gamma, delta, eta)?;
        return Ok(finish(out, receipt));
    }
    if find_group(&seq.negate(), gamma).is_some() {
        // on -d the positive half diverges; the identities map back with the same eta
        let (out, receipt) = decouple_positive(&seq.negate(), delta, gamma, eta)?;
        let mirror = TransformReceipt {
            touched: receipt.touched.into_iter().map(|(k, v)| (k, v.iter().map(|x| -x).collect())).collect(),
            removed: receipt.removed.negate(),
            added: receipt.added.negate(),
            ..receipt
        };
        return Ok(finish(out.negate(), mirror));
    }
    Err(Error::HypothesisViolated(
        "no infinite family of band entries accumulates strictly inside either half of the band".into(),
    ))
}

/// Decoupling when the positive half of the band carries the divergence.
fn decouple_positive(
    seq: &DiagonalSequence,
    gamma: &Scalar,
    delta: &Scalar,
    eta: &Scalar,
) -> Result<(DiagonalSequence, TransformReceipt)> {
    let group = find_group(seq, delta).expect("checked by caller");
    let m = (eta / gamma).ceil().to_i64().expect("count fits") as usize;
    let positive = Band::closed(&Scalar::zero(), delta);
    let enough = |terms: &[Scalar], anchor: &Scalar| -> bool {
        let room: Scalar = terms.iter().map(|d| delta - d).sum();
        room > anchor * Scalar::from(m as u64) + eta
    };
    let (i0, i1) = if group.nonincreasing() {
        let mut n = 1;
        loop {
            let terms = group.take(&positive, n + m);
            let (i1, i0) = terms.split_at(n);
            if enough(i1, &i1[0]) {
                break (i0.to_vec(), i1.to_vec());
            }
            n += 1;
        }
    } else {
        let x = group.limit().clone();
        let mut n = 1;
        loop {
            let terms = group.take(&positive, m + n);
            let (i0, i1) = terms.split_at(m);
            if enough(i1, &x) {
                break (i0.to_vec(), i1.to_vec());
            }
            n += 1;
        }
    };
    let eta0 = eta + i0.iter().sum::<Scalar>();
    move_toward_endpoints(seq, &i0, &i1, &eta0, &-gamma, delta)
}

/// Split off the entries equal to `0` and to `b`.
pub fn split_extremes(seq: &DiagonalSequence, b: &Scalar) -> Result<(ExtendedCount, DiagonalSequence, ExtendedCount)> {
    if let Some((lo, hi)) = seq.extent() {
        if lo.is_negative() || &hi > b {
            return Err(Error::BoundsViolated(format!("entries must lie in [0, {b}]")));
        }
    }
    let mut interior = seq.clone();
    let zeros = interior.extract_band(&Band::closed(&Scalar::zero(), &Scalar::zero())).len();
    let tops = interior.extract_band(&Band::closed(b, b)).len();
    Ok((zeros, interior, tops))
}

/// Collapse all but finitely many entries of a class-F sequence in
/// `[0, 1]` onto `{0, 1}`, preserving the mass below `epsilon` and the
/// deficit above `1 - epsilon`.
///
/// The largest entry in `(0, epsilon)` and the smallest in
/// `(1 - epsilon, 1)` receive the collapsed mass. The cutoff is the
/// largest entry distance from `{0, 1}` at which the mass beyond it is
/// below the receivers' headroom.
pub fn truncate_to_finite(seq: &DiagonalSequence, epsilon: &Scalar) -> Result<(DiagonalSequence, TransformReceipt)> {
    let zero = Scalar::zero();
    let one = Scalar::one();
    let half = Scalar::ratio(1, 2);
    if !(epsilon.is_positive() && epsilon <= &half) {
        return Err(Error::OutOfRange(format!("epsilon {epsilon} not in (0, 1/2]")));
    }
    if let Some((lo, hi)) = seq.extent() {
        if lo.is_negative() || hi > one {
            return Err(Error::BoundsViolated("entries must lie in [0, 1]".into()));
        }
    }
    if !in_class_f(seq) {
        return Err(Error::NotInClassF);
    }
    let below_eps = Band::open(&zero, epsilon);
    let above_eps = Band::open(&(&one - epsilon), &one);
    let aggregates_of = |s: &DiagonalSequence| {
        (
            s.mass_in(&Band::below(epsilon), &zero),
            s.mass_in(&Band::above(&(&one - epsilon)), &one).neg(),
        )
    };
    let (mass_before, deficit_before) = aggregates_of(seq);
    let mut receipt = TransformReceipt::identity("truncate", seq);
    if seq.tails().is_empty() {
        receipt.aggregates = vec![
            Aggregate { name: "mass below epsilon".into(), before: mass_before.clone(), after: mass_before },
            Aggregate { name: "deficit above 1-epsilon".into(), before: deficit_before.clone(), after: deficit_before },
        ];
        return Ok((seq.clone(), receipt));
    }
    let r0 = seq.max_in(&below_eps).ok_or_else(|| Error::NoReceiver(format!("(0, {epsilon})")))?;
    let r1 = seq.min_in(&above_eps).ok_or_else(|| Error::NoReceiver(format!("({}, 1)", &one - epsilon)))?;
    let headroom = std::cmp::min(epsilon - &r0, &r1 - (&one - epsilon));

    let residual = |c: &Scalar| -> Scalar {
        let low = seq.mass_in(&Band::open(&zero, c), &zero);
        let high = seq.mass_in(&Band::open(&(&one - c), &one), &one).neg();
        low.finite().expect("class F") + high.finite().expect("class F")
    };
    let mut cut = std::cmp::min(r0.clone(), &one - &r1);
    while residual(&cut) >= headroom {
        let lower = seq.max_in(&Band::open(&zero, &cut));
        let upper = seq.min_in(&Band::open(&(&one - &cut), &one)).map(|v| &one - v);
        cut = match (lower, upper) {
            (Some(x), Some(y)) => std::cmp::max(x, y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => break,
        };
    }
    log::debug!("truncation cutoff {cut} with headroom {headroom}");

    let mut out = seq.clone();
    let low = out.extract_band(&Band::open(&zero, &cut));
    let high = out.extract_band(&Band::open(&(&one - &cut), &one));
    let low_mass = low.mass_in(&Band::all(), &zero).finite().expect("class F").clone();
    let high_deficit = high.mass_in(&Band::all(), &one).neg().finite().expect("class F").clone();

    let (lo, hi) = seq.bounds();
    let mut added = DiagonalSequence::new(lo.clone(), hi.clone())?;
    for (pieces, target) in [(&low, &zero), (&high, &one)] {
        match pieces.len() {
            ExtendedCount::Finite(c) => added.push_atom(target.clone(), c),
            ExtendedCount::Infinite => {
                if !seq.infinite_atoms().any(|v| v == target) {
                    added.push_infinite_atom(target.clone());
                }
            }
        }
    }
    let new_r0 = &r0 + &low_mass;
    let new_r1 = &r1 - &high_deficit;
    out.take_value(&r0)?;
    out.take_value(&r1)?;
    added.push_atom(new_r0.clone(), 1);
    added.push_atom(new_r1.clone(), 1);
    let mut removed = low.concat(&high);
    removed.push_atom(r0.clone(), 1);
    removed.push_atom(r1.clone(), 1);
    out = out.concat(&added);

    let (mass_after, deficit_after) = aggregates_of(&out);
    receipt.moved_mass = &low_mass + &high_deficit;
    receipt.touched = vec![
        ("receivers".into(), vec![r0, r1]),
        ("receivers after".into(), vec![new_r0, new_r1]),
        ("cutoff".into(), vec![cut]),
    ];
    receipt.removed = removed;
    receipt.added = added;
    receipt.aggregates = vec![
        Aggregate { name: "mass below epsilon".into(), before: mass_before, after: mass_after },
        Aggregate { name: "deficit above 1-epsilon".into(), before: deficit_before, after: deficit_after },
    ];
    Ok((out, receipt))
}
