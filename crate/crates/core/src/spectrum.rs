//! Eigenvalue-multiplicity lists and the translated `(m, n, p)` frame.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ExtendedCount, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumPair {
    pub eigenvalue: Scalar,
    pub multiplicity: ExtendedCount,
}

/// Distinct eigenvalues in strictly increasing order with their
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumDoc")]
pub struct SpectrumSpec {
    pairs: Vec<SpectrumPair>,
}

#[derive(Deserialize)]
struct SpectrumDoc {
    pairs: Vec<SpectrumPair>,
}

impl TryFrom<SpectrumDoc> for SpectrumSpec {
    type Error = Error;
    fn try_from(doc: SpectrumDoc) -> Result<Self> {
        SpectrumSpec::new(doc.pairs)
    }
}

impl SpectrumSpec {
    pub fn new(pairs: Vec<SpectrumPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidSpectrum("no eigenvalues".into()));
        }
        if pairs.windows(2).any(|w| w[0].eigenvalue >= w[1].eigenvalue) {
            return Err(Error::InvalidSpectrum("eigenvalues must be strictly increasing".into()));
        }
        if pairs.iter().any(|p| p.multiplicity == ExtendedCount::Finite(0)) {
            return Err(Error::InvalidSpectrum("multiplicities must be at least 1".into()));
        }
        Ok(SpectrumSpec { pairs })
    }

    /// Convenience constructor; `None` marks an infinite multiplicity.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Scalar, Option<u64>)>) -> Result<Self> {
        SpectrumSpec::new(
            pairs
                .into_iter()
                .map(|(eigenvalue, m)| SpectrumPair {
                    eigenvalue,
                    multiplicity: m.map_or(ExtendedCount::Infinite, ExtendedCount::Finite),
                })
                .collect(),
        )
    }

    pub fn pairs(&self) -> &[SpectrumPair] {
        &self.pairs
    }

    pub fn min_eigenvalue(&self) -> &Scalar {
        &self.pairs[0].eigenvalue
    }

    pub fn max_eigenvalue(&self) -> &Scalar {
        &self.pairs[self.pairs.len() - 1].eigenvalue
    }

    pub fn infinite_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.multiplicity.is_infinite()).count()
    }

    pub fn total_multiplicity(&self) -> ExtendedCount {
        self.pairs.iter().map(|p| p.multiplicity).sum()
    }

    pub fn translate(&self, by: &Scalar) -> SpectrumSpec {
        SpectrumSpec {
            pairs: self
                .pairs
                .iter()
                .map(|p| SpectrumPair { eigenvalue: &p.eigenvalue + by, multiplicity: p.multiplicity })
                .collect(),
        }
    }

    /// Eigenvalues listed with multiplicity, nonincreasing; `None` if some
    /// multiplicity is infinite.
    pub fn expanded(&self) -> Option<Vec<Scalar>> {
        let mut out = Vec::new();
        for p in self.pairs.iter().rev() {
            let m = p.multiplicity.finite()?;
            out.extend(std::iter::repeat_n(p.eigenvalue.clone(), m as usize));
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpectrumClass {
    AllFinite,
    OneInfinite,
    TwoInfinite,
    ManyInfinite,
}

pub fn classify(spec: &SpectrumSpec) -> SpectrumClass {
    match spec.infinite_count() {
        0 => SpectrumClass::AllFinite,
        1 => SpectrumClass::OneInfinite,
        2 => SpectrumClass::TwoInfinite,
        _ => SpectrumClass::ManyInfinite,
    }
}

/// The frame `A_{-m} < ... < A_0 = 0 < A_1 < ... < A_n < A_{n+1} = B < ... < A_{n+p+1}`,
/// with `A_0` the smallest and `A_{n+1}` the largest eigenvalue of infinite
/// multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    /// Translated eigenvalues, `a[j + m]` holds `A_j`.
    a: Vec<Scalar>,
    mult: Vec<ExtendedCount>,
    #[serde(rename = "B")]
    pub b: Scalar,
    /// Amount subtracted from every eigenvalue.
    pub translation: Scalar,
}

impl NormalizedSpec {
    fn slot(&self, j: i64) -> usize {
        let s = j + self.m as i64;
        assert!(s >= 0 && (s as usize) < self.a.len(), "frame index {j} out of range");
        s as usize
    }

    /// `A_j` for `j` in `-m..=n+p+1`.
    pub fn a(&self, j: i64) -> &Scalar {
        &self.a[self.slot(j)]
    }

    /// `N_j` for `j` in `-m..=n+p+1`.
    pub fn mult(&self, j: i64) -> ExtendedCount {
        self.mult[self.slot(j)]
    }

    pub fn lowest_index(&self) -> i64 {
        -(self.m as i64)
    }

    pub fn highest_index(&self) -> i64 {
        (self.n + self.p + 1) as i64
    }

    /// Index of `B`.
    pub fn top_infinite(&self) -> i64 {
        self.n as i64 + 1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lowest_index()..=self.highest_index()
    }

    /// Recover the original spectrum.
    pub fn denormalize(&self) -> SpectrumSpec {
        SpectrumSpec {
            pairs: self
                .a
                .iter()
                .zip(&self.mult)
                .map(|(a, &m)| SpectrumPair { eigenvalue: a + &self.translation, multiplicity: m })
                .collect(),
        }
    }
}

pub fn normalize(spec: &SpectrumSpec) -> Result<NormalizedSpec> {
    let inf: Vec<usize> = spec
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.multiplicity.is_infinite())
        .map(|(i, _)| i)
        .collect();
    if inf.len() < 2 {
        return Err(Error::NotEnoughInfinite(inf.len()));
    }
    let lo = inf[0];
    let hi = inf[inf.len() - 1];
    let translation = spec.pairs[lo].eigenvalue.clone();
    let a: Vec<Scalar> = spec.pairs.iter().map(|p| &p.eigenvalue - &translation).collect();
    Ok(NormalizedSpec {
        m: lo,
        n: hi - lo - 1,
        p: spec.pairs.len() - hi - 1,
        b: a[hi].clone(),
        a,
        mult: spec.pairs.iter().map(|p| p.multiplicity).collect(),
        translation,
    })
}
