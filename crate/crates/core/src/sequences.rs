//! Closed-form diagonal sequences over countable index sets.
//!
//! A [`DiagonalSequence`] is a finite multiset of atoms, a finite set of
//! values repeated infinitely often, and a list of geometric tails. Every
//! series that the feasibility conditions need (cut sums, deficiencies,
//! exterior masses) has an exact closed form in this model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Bound;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{ExtendedCount, Scalar};

/// The countable family `{limit + coeff * ratio^i : i >= 1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeometricTail {
    pub limit: Scalar,
    pub coeff: Scalar,
    pub ratio: Scalar,
}

/// Members of one tail inside a band: finitely many explicit terms plus,
/// possibly, every term from some index on.
#[derive(Clone, Debug, Default)]
pub struct TailMembers {
    pub explicit: Vec<(u64, Scalar)>,
    pub rest_from: Option<u64>,
}

impl GeometricTail {
    pub fn new(limit: Scalar, coeff: Scalar, ratio: Scalar) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::InvalidSequence("tail coefficient must be nonzero".into()));
        }
        if !(ratio.is_positive() && ratio < Scalar::one()) {
            return Err(Error::InvalidSequence(format!(
                "tail ratio {ratio} must lie in (0,1)"
            )));
        }
        Ok(GeometricTail { limit, coeff, ratio })
    }

    pub fn term(&self, i: u64) -> Scalar {
        let exp = u32::try_from(i).expect("tail index too large");
        &self.limit + &self.coeff * self.ratio.pow(exp)
    }

    pub fn first_term(&self) -> Scalar {
        &self.limit + &self.coeff * &self.ratio
    }

    /// Terms decrease toward the limit when the coefficient is positive.
    pub fn is_decreasing(&self) -> bool {
        self.coeff.is_positive()
    }

    /// `sum_{i>=1} |coeff| ratio^i`.
    pub fn deviation_mass(&self) -> Scalar {
        self.coeff.abs() * &self.ratio / (Scalar::one() - &self.ratio)
    }

    /// `sum_{i>=from} coeff ratio^i`.
    fn signed_deviation_from(&self, from: u64) -> Scalar {
        let exp = u32::try_from(from).expect("tail index too large");
        &self.coeff * self.ratio.pow(exp) / (Scalar::one() - &self.ratio)
    }

    /// The same family with its first `count` terms removed.
    pub fn shifted(&self, count: u64) -> GeometricTail {
        let exp = u32::try_from(count).expect("tail index too large");
        GeometricTail {
            limit: self.limit.clone(),
            coeff: &self.coeff * self.ratio.pow(exp),
            ratio: self.ratio.clone(),
        }
    }

    pub fn translated(&self, by: &Scalar) -> GeometricTail {
        GeometricTail {
            limit: &self.limit + by,
            coeff: self.coeff.clone(),
            ratio: self.ratio.clone(),
        }
    }

    pub fn negated(&self) -> GeometricTail {
        GeometricTail {
            limit: -&self.limit,
            coeff: -&self.coeff,
            ratio: self.ratio.clone(),
        }
    }

    /// Smallest index `i >= 1` with `|coeff| ratio^i < gap`.
    fn crossing_index(&self, gap: &Scalar) -> u64 {
        let mut dev = self.coeff.abs() * &self.ratio;
        let mut i = 1;
        while &dev >= gap {
            dev = dev * &self.ratio;
            i += 1;
        }
        i
    }

    /// Index after which band membership no longer changes.
    fn settle_index(&self, band: &Band) -> u64 {
        let mut settle = 1;
        for bound in [&band.lower, &band.upper] {
            if let Bound::Included(x) | Bound::Excluded(x) = bound {
                if x != &self.limit {
                    settle = settle.max(self.crossing_index(&(x - &self.limit).abs()));
                }
            }
        }
        settle
    }

    pub fn members(&self, band: &Band) -> TailMembers {
        let settle = self.settle_index(band);
        let mut explicit = Vec::new();
        let mut power = self.ratio.clone();
        for i in 1..settle {
            let value = &self.limit + &self.coeff * &power;
            if band.contains(&value) {
                explicit.push((i, value));
            }
            power = power * &self.ratio;
        }
        let settled = &self.limit + &self.coeff * &power;
        TailMembers {
            explicit,
            rest_from: band.contains(&settled).then_some(settle),
        }
    }
}

impl fmt::Display for GeometricTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*({})^i", self.limit, self.coeff, self.ratio)
    }
}

/// An interval of the real line with open, closed or missing ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub lower: Bound<Scalar>,
    pub upper: Bound<Scalar>,
}

impl Band {
    pub fn all() -> Band {
        Band { lower: Bound::Unbounded, upper: Bound::Unbounded }
    }

    /// `(-inf, x)`
    pub fn below(x: &Scalar) -> Band {
        Band { lower: Bound::Unbounded, upper: Bound::Excluded(x.clone()) }
    }

    /// `(-inf, x]`
    pub fn at_most(x: &Scalar) -> Band {
        Band { lower: Bound::Unbounded, upper: Bound::Included(x.clone()) }
    }

    /// `[x, inf)`
    pub fn at_least(x: &Scalar) -> Band {
        Band { lower: Bound::Included(x.clone()), upper: Bound::Unbounded }
    }

    /// `(x, inf)`
    pub fn above(x: &Scalar) -> Band {
        Band { lower: Bound::Excluded(x.clone()), upper: Bound::Unbounded }
    }

    pub fn open(a: &Scalar, b: &Scalar) -> Band {
        Band { lower: Bound::Excluded(a.clone()), upper: Bound::Excluded(b.clone()) }
    }

    pub fn closed(a: &Scalar, b: &Scalar) -> Band {
        Band { lower: Bound::Included(a.clone()), upper: Bound::Included(b.clone()) }
    }

    /// `[a, b)`
    pub fn half_open(a: &Scalar, b: &Scalar) -> Band {
        Band { lower: Bound::Included(a.clone()), upper: Bound::Excluded(b.clone()) }
    }

    pub fn contains(&self, v: &Scalar) -> bool {
        let lower_ok = match &self.lower {
            Bound::Unbounded => true,
            Bound::Included(x) => v >= x,
            Bound::Excluded(x) => v > x,
        };
        let upper_ok = match &self.upper {
            Bound::Unbounded => true,
            Bound::Included(x) => v <= x,
            Bound::Excluded(x) => v < x,
        };
        lower_ok && upper_ok
    }
}

/// A series value that is either an exact rational or not absolutely
/// convergent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mass {
    Finite(Scalar),
    Divergent,
}

impl Mass {
    pub fn zero() -> Mass {
        Mass::Finite(Scalar::zero())
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Mass::Finite(x) => Some(x),
            Mass::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Mass::Divergent)
    }

    pub fn add(&self, other: &Mass) -> Mass {
        match (self, other) {
            (Mass::Finite(a), Mass::Finite(b)) => Mass::Finite(a + b),
            _ => Mass::Divergent,
        }
    }

    pub fn neg(&self) -> Mass {
        match self {
            Mass::Finite(a) => Mass::Finite(-a),
            Mass::Divergent => Mass::Divergent,
        }
    }
}

impl fmt::Display for Mass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mass::Finite(x) => write!(f, "{x}"),
            Mass::Divergent => f.write_str("divergent"),
        }
    }
}

impl Serialize for Mass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "divergent" {
            Ok(Mass::Divergent)
        } else {
            s.parse().map(Mass::Finite).map_err(serde::de::Error::custom)
        }
    }
}

/// Diagonal sequence `{d_i}` built from atoms, infinitely repeated atoms
/// and geometric tails, all inside `bounds`.
///
/// Finite and infinite atoms are stored separately; a value present in
/// both simply occurs infinitely often.
#[derive(Clone, Debug)]
pub struct DiagonalSequence {
    atoms: BTreeMap<Scalar, u64>,
    infinite_atoms: BTreeSet<Scalar>,
    tails: Vec<GeometricTail>,
    lo: Scalar,
    hi: Scalar,
}

impl DiagonalSequence {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidSequence(format!("empty bounds [{lo}, {hi}]")));
        }
        Ok(DiagonalSequence {
            atoms: BTreeMap::new(),
            infinite_atoms: BTreeSet::new(),
            tails: Vec::new(),
            lo,
            hi,
        })
    }

    /// Finite sequence with the given entries.
    pub fn finite(lo: Scalar, hi: Scalar, values: impl IntoIterator<Item = Scalar>) -> Result<Self> {
        let mut seq = DiagonalSequence::new(lo, hi)?;
        for v in values {
            seq = seq.with_atom(v, 1)?;
        }
        Ok(seq)
    }

    fn check_in_bounds(&self, v: &Scalar) -> Result<()> {
        if v < &self.lo || v > &self.hi {
            return Err(Error::InvalidSequence(format!(
                "value {v} outside bounds [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn with_atom(mut self, value: Scalar, count: u64) -> Result<Self> {
        self.check_in_bounds(&value)?;
        self.push_atom(value, count);
        Ok(self)
    }

    pub fn with_infinite_atom(mut self, value: Scalar) -> Result<Self> {
        self.check_in_bounds(&value)?;
        self.infinite_atoms.insert(value);
        Ok(self)
    }

    pub fn with_tail(mut self, tail: GeometricTail) -> Result<Self> {
        self.check_in_bounds(&tail.limit)?;
        self.check_in_bounds(&tail.first_term())?;
        self.tails.push(tail);
        Ok(self)
    }

    pub(crate) fn push_atom(&mut self, value: Scalar, count: u64) {
        if count > 0 {
            *self.atoms.entry(value).or_insert(0) += count;
        }
    }

    pub(crate) fn push_infinite_atom(&mut self, value: Scalar) {
        self.infinite_atoms.insert(value);
    }

    pub(crate) fn widen_bounds(&mut self, lo: &Scalar, hi: &Scalar) {
        if lo < &self.lo {
            self.lo = lo.clone();
        }
        if hi > &self.hi {
            self.hi = hi.clone();
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Scalar, u64)> {
        self.atoms.iter().map(|(v, &c)| (v, c))
    }

    pub fn infinite_atoms(&self) -> impl Iterator<Item = &Scalar> {
        self.infinite_atoms.iter()
    }

    pub fn tails(&self) -> &[GeometricTail] {
        &self.tails
    }

    pub fn bounds(&self) -> (&Scalar, &Scalar) {
        (&self.lo, &self.hi)
    }

    pub fn is_finite(&self) -> bool {
        self.infinite_atoms.is_empty() && self.tails.is_empty()
    }

    pub fn len(&self) -> ExtendedCount {
        self.count_in(&Band::all())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == ExtendedCount::Finite(0)
    }

    /// Number of entries with value in `band`.
    pub fn count_in(&self, band: &Band) -> ExtendedCount {
        let mut count = ExtendedCount::Finite(0);
        for (v, &c) in &self.atoms {
            if band.contains(v) {
                count += ExtendedCount::Finite(c);
            }
        }
        if self.infinite_atoms.iter().any(|v| band.contains(v)) {
            return ExtendedCount::Infinite;
        }
        for tail in &self.tails {
            let members = tail.members(band);
            if members.rest_from.is_some() {
                return ExtendedCount::Infinite;
            }
            count += ExtendedCount::Finite(members.explicit.len() as u64);
        }
        count
    }

    /// `sum_{d_i in band} (d_i - reference)`, or `Divergent` when the series
    /// is not absolutely convergent.
    pub fn mass_in(&self, band: &Band, reference: &Scalar) -> Mass {
        let mut total = Scalar::zero();
        for (v, &c) in &self.atoms {
            if band.contains(v) {
                total += (v - reference) * Scalar::from(c);
            }
        }
        for v in &self.infinite_atoms {
            if band.contains(v) && v != reference {
                return Mass::Divergent;
            }
        }
        for tail in &self.tails {
            let members = tail.members(band);
            for (_, v) in &members.explicit {
                total += v - reference;
            }
            if let Some(from) = members.rest_from {
                if &tail.limit != reference {
                    return Mass::Divergent;
                }
                total += tail.signed_deviation_from(from);
            }
        }
        Mass::Finite(total)
    }

    /// All entries in `band` in ascending order, if there are finitely many.
    pub fn values_in(&self, band: &Band) -> Option<Vec<Scalar>> {
        if self.count_in(band).is_infinite() {
            return None;
        }
        let mut out = Vec::new();
        for (v, &c) in &self.atoms {
            if band.contains(v) {
                out.extend(std::iter::repeat_n(v.clone(), c as usize));
            }
        }
        for tail in &self.tails {
            out.extend(tail.members(band).explicit.into_iter().map(|(_, v)| v));
        }
        out.sort();
        Some(out)
    }

    /// Largest entry in `band`, if the supremum is attained.
    pub fn max_in(&self, band: &Band) -> Option<Scalar> {
        self.extreme_in(band, true)
    }

    /// Smallest entry in `band`, if the infimum is attained.
    pub fn min_in(&self, band: &Band) -> Option<Scalar> {
        self.extreme_in(band, false)
    }

    fn extreme_in(&self, band: &Band, want_max: bool) -> Option<Scalar> {
        let better = |a: &Scalar, b: &Scalar| if want_max { a > b } else { a < b };
        let mut attained: Option<Scalar> = None;
        let mut unattained: Option<Scalar> = None;
        let offer = |slot: &mut Option<Scalar>, v: Scalar| {
            if slot.as_ref().is_none_or(|cur| better(&v, cur)) {
                *slot = Some(v);
            }
        };
        for v in self.atoms.keys().chain(self.infinite_atoms.iter()) {
            if band.contains(v) {
                offer(&mut attained, v.clone());
            }
        }
        for tail in &self.tails {
            let members = tail.members(band);
            for (_, v) in members.explicit {
                offer(&mut attained, v);
            }
            if let Some(from) = members.rest_from {
                // Terms move monotonically toward the limit.
                if tail.is_decreasing() == want_max {
                    offer(&mut attained, tail.term(from));
                } else {
                    offer(&mut unattained, tail.limit.clone());
                }
            }
        }
        match (attained, unattained) {
            (Some(a), Some(u)) if !better(&a, &u) => None,
            (a, _) => a,
        }
    }

    /// Infimum and supremum of all entries (not necessarily attained).
    pub fn extent(&self) -> Option<(Scalar, Scalar)> {
        let mut lo: Option<Scalar> = None;
        let mut hi: Option<Scalar> = None;
        let mut offer = |v: &Scalar| {
            if lo.as_ref().is_none_or(|x| v < x) {
                lo = Some(v.clone());
            }
            if hi.as_ref().is_none_or(|x| v > x) {
                hi = Some(v.clone());
            }
        };
        for v in self.atoms.keys().chain(self.infinite_atoms.iter()) {
            offer(v);
        }
        for tail in &self.tails {
            offer(&tail.limit);
            offer(&tail.first_term());
        }
        lo.zip(hi)
    }

    pub fn translate(&self, by: &Scalar) -> DiagonalSequence {
        DiagonalSequence {
            atoms: self.atoms.iter().map(|(v, &c)| (v + by, c)).collect(),
            infinite_atoms: self.infinite_atoms.iter().map(|v| v + by).collect(),
            tails: self.tails.iter().map(|t| t.translated(by)).collect(),
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }

    pub fn negate(&self) -> DiagonalSequence {
        DiagonalSequence {
            atoms: self.atoms.iter().map(|(v, &c)| (-v, c)).collect(),
            infinite_atoms: self.infinite_atoms.iter().map(|v| -v).collect(),
            tails: self.tails.iter().map(GeometricTail::negated).collect(),
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// Disjoint union of two sequences; bounds are joined.
    pub fn concat(&self, other: &DiagonalSequence) -> DiagonalSequence {
        let mut out = self.clone();
        for (v, c) in other.atoms() {
            out.push_atom(v.clone(), c);
        }
        for v in other.infinite_atoms() {
            out.push_infinite_atom(v.clone());
        }
        out.tails.extend(other.tails.iter().cloned());
        out.widen_bounds(&other.lo, &other.hi);
        out
    }

    /// Remove one entry equal to `value`. Tails are split open so that the
    /// removed term becomes an explicit atom first; removing from an
    /// infinite atom leaves it infinite.
    pub fn take_value(&mut self, value: &Scalar) -> Result<()> {
        if let Some(c) = self.atoms.get_mut(value) {
            *c -= 1;
            if *c == 0 {
                self.atoms.remove(value);
            }
            return Ok(());
        }
        if self.infinite_atoms.contains(value) {
            return Ok(());
        }
        let point = Band::closed(value, value);
        for idx in 0..self.tails.len() {
            let members = self.tails[idx].members(&point);
            if let Some(&(i, _)) = members.explicit.first() {
                self.split_tail(idx, i);
                return self.take_value(value);
            }
        }
        Err(Error::HypothesisViolated(format!("value {value} does not occur in the sequence")))
    }

    /// Remove every atom, infinite atom and tail of `piece`. Tails must
    /// match exactly.
    pub fn subtract(&mut self, piece: &DiagonalSequence) -> Result<()> {
        for (v, c) in piece.atoms() {
            for _ in 0..c {
                self.take_value(v)?;
            }
        }
        for v in piece.infinite_atoms() {
            if !self.infinite_atoms.remove(v) {
                return Err(Error::HypothesisViolated(format!("{v} is not repeated infinitely often")));
            }
        }
        for t in piece.tails() {
            let pos = self
                .tails
                .iter()
                .position(|u| u == t)
                .ok_or_else(|| Error::HypothesisViolated(format!("tail {t} not present")))?;
            self.tails.remove(pos);
        }
        Ok(())
    }

    /// Replace tail `idx` by its first `count` terms as atoms and the
    /// remaining family.
    fn split_tail(&mut self, idx: usize, count: u64) {
        let tail = self.tails[idx].clone();
        for i in 1..=count {
            self.push_atom(tail.term(i), 1);
        }
        self.tails[idx] = tail.shifted(count);
    }

    /// Remove every entry in `band`, returning what was removed.
    pub fn extract_band(&mut self, band: &Band) -> DiagonalSequence {
        let mut removed = DiagonalSequence {
            atoms: BTreeMap::new(),
            infinite_atoms: BTreeSet::new(),
            tails: Vec::new(),
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        };
        let keys: Vec<Scalar> = self.atoms.keys().filter(|v| band.contains(v)).cloned().collect();
        for v in keys {
            let c = self.atoms.remove(&v).unwrap_or(0);
            removed.push_atom(v, c);
        }
        let inf: Vec<Scalar> =
            self.infinite_atoms.iter().filter(|v| band.contains(v)).cloned().collect();
        for v in inf {
            self.infinite_atoms.remove(&v);
            removed.push_infinite_atom(v);
        }
        let mut kept = Vec::new();
        for tail in std::mem::take(&mut self.tails) {
            let members = tail.members(band);
            let settle = members
                .rest_from
                .unwrap_or_else(|| members.explicit.last().map_or(1, |&(i, _)| i + 1));
            let mut power = tail.ratio.clone();
            for _ in 1..settle {
                let v = &tail.limit + &tail.coeff * &power;
                if band.contains(&v) {
                    removed.push_atom(v, 1);
                } else {
                    self.push_atom(v, 1);
                }
                power = power * &tail.ratio;
            }
            let rest = tail.shifted(settle - 1);
            if members.rest_from.is_some() {
                removed.tails.push(rest);
            } else {
                kept.push(rest);
            }
        }
        self.tails = kept;
        removed
    }

    /// Canonical form used for equality: finite copies of infinitely
    /// repeated values are dropped and tails are sorted.
    fn canonical(&self) -> (Vec<(Scalar, u64)>, Vec<Scalar>, Vec<GeometricTail>) {
        let atoms = self
            .atoms
            .iter()
            .filter(|(v, _)| !self.infinite_atoms.contains(*v))
            .map(|(v, &c)| (v.clone(), c))
            .collect();
        let mut tails = self.tails.clone();
        tails.sort();
        (atoms, self.infinite_atoms.iter().cloned().collect(), tails)
    }
}

/// `Some(j)` when `coeff_long * ratio^j == coeff_short` for some `j >= 0`.
fn shift_between(long: &GeometricTail, short: &GeometricTail) -> Option<u64> {
    if long.limit != short.limit || long.ratio != short.ratio || long.coeff.signum() != short.coeff.signum() {
        return None;
    }
    let mut c = long.coeff.clone();
    for j in 0..=MAX_TAIL_ALIGNMENT {
        if c == short.coeff {
            return Some(j);
        }
        if c.abs() < short.coeff.abs() {
            return None;
        }
        c = &c * &long.ratio;
    }
    None
}

const MAX_TAIL_ALIGNMENT: u64 = 4096;

fn add_atom(atoms: &mut BTreeMap<Scalar, u64>, infinite: &[Scalar], value: Scalar) {
    if !infinite.contains(&value) {
        *atoms.entry(value).or_insert(0) += 1;
    }
}

/// Multiset equality: tails that differ only by a shift are aligned by
/// spelling out the leading terms of the longer one as atoms.
impl PartialEq for DiagonalSequence {
    fn eq(&self, other: &Self) -> bool {
        if self.lo != other.lo || self.hi != other.hi {
            return false;
        }
        let (a, ia, ta) = self.canonical();
        let (b, ib, tb) = other.canonical();
        if ia != ib {
            return false;
        }
        if (a.clone(), ta.clone()) == (b.clone(), tb.clone()) {
            return true;
        }
        let mut a: BTreeMap<Scalar, u64> = a.into_iter().collect();
        let mut b: BTreeMap<Scalar, u64> = b.into_iter().collect();
        let mut tb: Vec<Option<GeometricTail>> = tb.into_iter().map(Some).collect();
        for t in ta {
            let hit = tb.iter().enumerate().find_map(|(i, u)| {
                let u = u.as_ref()?;
                if let Some(j) = shift_between(&t, u) {
                    Some((i, true, j))
                } else {
                    shift_between(u, &t).map(|j| (i, false, j))
                }
            });
            let Some((i, self_longer, j)) = hit else {
                return false;
            };
            let u = tb[i].take().expect("matched once");
            let (long, atoms) = if self_longer { (&t, &mut a) } else { (&u, &mut b) };
            for n in 1..=j {
                add_atom(atoms, &ia, long.term(n));
            }
        }
        tb.iter().all(Option::is_none) && a == b
    }
}

impl Eq for DiagonalSequence {}

#[derive(Serialize, Deserialize)]
struct AtomDoc {
    value: Scalar,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct TailDoc {
    limit: Scalar,
    coeff: Scalar,
    ratio: Scalar,
}

#[derive(Serialize, Deserialize)]
struct SequenceDoc {
    bounds: [Scalar; 2],
    #[serde(default)]
    atoms: Vec<AtomDoc>,
    #[serde(default)]
    infinite_atoms: Vec<Scalar>,
    #[serde(default)]
    tails: Vec<TailDoc>,
}

impl Serialize for DiagonalSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (atoms, infinite_atoms, tails) = self.canonical();
        SequenceDoc {
            bounds: [self.lo.clone(), self.hi.clone()],
            atoms: atoms.into_iter().map(|(value, count)| AtomDoc { value, count }).collect(),
            infinite_atoms,
            tails: tails
                .into_iter()
                .map(|t| TailDoc { limit: t.limit, coeff: t.coeff, ratio: t.ratio })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DiagonalSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SequenceDoc::deserialize(deserializer)?;
        let [lo, hi] = doc.bounds;
        let build = || -> Result<DiagonalSequence> {
            let mut seq = DiagonalSequence::new(lo, hi)?;
            for a in doc.atoms {
                seq = seq.with_atom(a.value, a.count)?;
            }
            for v in doc.infinite_atoms {
                seq = seq.with_infinite_atom(v)?;
            }
            for t in doc.tails {
                seq = seq.with_tail(GeometricTail::new(t.limit, t.coeff, t.ratio)?)?;
            }
            Ok(seq)
        };
        build().map_err(serde::de::Error::custom)
    }
}

/// Exact cut statistics `C(alpha)` and `D(alpha)` at one threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutStatistics {
    pub alpha: Scalar,
    #[serde(rename = "B")]
    pub b: Scalar,
    #[serde(rename = "C")]
    pub c: Mass,
    #[serde(rename = "D")]
    pub d: Mass,
    pub count_below: ExtendedCount,
    pub count_at_least: ExtendedCount,
}

impl CutStatistics {
    pub fn is_summable(&self) -> bool {
        !self.c.is_divergent() && !self.d.is_divergent()
    }

    /// `C - D`, when both are finite.
    pub fn trace_gap(&self) -> Option<Scalar> {
        Some(self.c.finite()? - self.d.finite()?)
    }
}

/// `C(alpha) = sum_{d_i < alpha} d_i` and `D(alpha) = sum_{d_i >= alpha} (B - d_i)`.
pub fn cut_stats(seq: &DiagonalSequence, alpha: &Scalar, b: &Scalar) -> Result<CutStatistics> {
    if !(alpha.is_positive() && alpha < b) {
        return Err(Error::OutOfRange(format!("threshold {alpha} not in (0, {b})")));
    }
    Ok(cut_stats_unchecked(seq, alpha, b))
}

pub(crate) fn cut_stats_unchecked(seq: &DiagonalSequence, alpha: &Scalar, b: &Scalar) -> CutStatistics {
    let below = Band::below(alpha);
    let at_least = Band::at_least(alpha);
    CutStatistics {
        alpha: alpha.clone(),
        b: b.clone(),
        c: seq.mass_in(&below, &Scalar::zero()),
        d: seq.mass_in(&at_least, b).neg(),
        count_below: seq.count_in(&below),
        count_at_least: seq.count_in(&at_least),
    }
}

/// Membership in class F for a sequence inside `[0, 1]`: some (hence every)
/// interior threshold has finite cut sums. Structurally, no infinitely
/// repeated value and no tail limit lies in `(0, 1)`.
pub fn in_class_f(seq: &DiagonalSequence) -> bool {
    let interior = Band::open(&Scalar::zero(), &Scalar::one());
    !seq.infinite_atoms().any(|v| interior.contains(v))
        && !seq.tails().iter().any(|t| interior.contains(&t.limit))
}

/// Trace-gap function `f(alpha) = (1 - alpha) C(alpha) + alpha D(alpha)` with `B = 1`.
pub fn f_value(seq: &DiagonalSequence, alpha: &Scalar) -> Result<Scalar> {
    let stats = cut_stats(seq, alpha, &Scalar::one())?;
    match (stats.c, stats.d) {
        (Mass::Finite(c), Mass::Finite(d)) => Ok((Scalar::one() - alpha) * c + alpha * d),
        _ => Err(Error::NotInClassF),
    }
}
