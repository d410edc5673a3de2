//! The ordered, integer-indexed form of interior majorization.
//!
//! A [`ZSequence`] is a nondecreasing sequence on `Z`: a lower side
//! accumulating at `0` as the index goes to `-inf`, a finite middle block,
//! and an upper side accumulating at the top as the index goes to `+inf`.

use serde::{Deserialize, Serialize};

use super::{interior_majorization_check, scalar_to_i64};
use crate::error::{Error, Result};
use crate::numerics::Scalar;
use crate::sequences::{DiagonalSequence, GeometricTail};
use crate::spectrum::NormalizedSpec;

/// One infinite end of a [`ZSequence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZSide {
    /// Every term equals this value.
    Constant(Scalar),
    /// The `j`-th term away from the middle is `tail.term(j)`.
    Geometric(GeometricTail),
}

impl ZSide {
    fn term(&self, j: u64) -> Scalar {
        match self {
            ZSide::Constant(c) => c.clone(),
            ZSide::Geometric(t) => t.term(j),
        }
    }

    fn limit(&self) -> &Scalar {
        match self {
            ZSide::Constant(c) => c,
            ZSide::Geometric(t) => &t.limit,
        }
    }

    /// `sum_{j >= from} (term(j) - limit)`.
    fn deviation_from(&self, from: u64) -> Scalar {
        match self {
            ZSide::Constant(_) => Scalar::zero(),
            ZSide::Geometric(t) => {
                let exp = u32::try_from(from).expect("index too large");
                &t.coeff * t.ratio.pow(exp) / (Scalar::one() - &t.ratio)
            }
        }
    }
}

/// Nondecreasing sequence `{d_i}_{i in Z}`.
///
/// The middle occupies indices `first_middle_index..first_middle_index + len`;
/// the lower side's `j`-th term sits at `first_middle_index - j` and the
/// upper side's at `first_middle_index + len + j - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSequence {
    pub lower: ZSide,
    pub middle: Vec<Scalar>,
    pub upper: ZSide,
    pub first_middle_index: i64,
}

impl ZSequence {
    fn upper_start(&self) -> i64 {
        self.first_middle_index + self.middle.len() as i64
    }

    pub fn value(&self, i: i64) -> Scalar {
        let f = self.first_middle_index;
        let u = self.upper_start();
        if i < f {
            self.lower.term((f - i) as u64)
        } else if i < u {
            self.middle[(i - f) as usize].clone()
        } else {
            self.upper.term((i - u + 1) as u64)
        }
    }

    /// `sum_{i <= t} d_i`, assuming the lower side accumulates at 0.
    fn partial_sum(&self, t: i64) -> Scalar {
        let f = self.first_middle_index;
        let u = self.upper_start();
        if t < f {
            return self.lower.deviation_from((f - t) as u64);
        }
        let mut total = self.lower.deviation_from(1);
        let mid_end = t.min(u - 1);
        total += self.middle[..(mid_end - f + 1) as usize].iter().sum::<Scalar>();
        if t >= u {
            let count = (t - u + 1) as u64;
            total += self.upper.limit() * Scalar::from(count);
            total += self.upper.deviation_from(1) - self.upper.deviation_from(count + 1);
        }
        total
    }

    fn validate(&self, b: &Scalar) -> Result<()> {
        if !self.lower.limit().is_zero() {
            return Err(Error::NotSummableLowerTail(format!("lower side accumulates at {}", self.lower.limit())));
        }
        if let ZSide::Geometric(t) = &self.lower {
            if !t.coeff.is_positive() {
                return Err(Error::NotNondecreasing("lower tail must decrease toward 0".into()));
            }
        }
        if let ZSide::Geometric(t) = &self.upper {
            if !t.coeff.is_negative() {
                return Err(Error::NotNondecreasing("upper tail must increase toward its limit".into()));
            }
        }
        let mut chain = vec![self.lower.term(1)];
        chain.extend(self.middle.iter().cloned());
        chain.push(self.upper.term(1));
        if chain.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotNondecreasing(format!("terms {chain:?}")));
        }
        let top = self.upper.limit().max(&chain[chain.len() - 1]);
        if chain[0].is_negative() || top > b {
            return Err(Error::OutOfRange(format!("terms must lie in [0, {b}]")));
        }
        Ok(())
    }

    /// The same terms as an unordered diagonal within `[lo, hi]`.
    pub fn to_diagonal(&self, lo: &Scalar, hi: &Scalar) -> Result<DiagonalSequence> {
        let mut seq = DiagonalSequence::new(lo.clone(), hi.clone())?;
        for side in [&self.lower, &self.upper] {
            seq = match side {
                ZSide::Constant(c) => seq.with_infinite_atom(c.clone())?,
                ZSide::Geometric(t) => seq.with_tail(t.clone())?,
            };
        }
        for v in &self.middle {
            seq = seq.with_atom(v.clone(), 1)?;
        }
        Ok(seq)
    }
}

struct Staircase {
    sigma: Vec<i64>,
    values: Vec<Scalar>,
    b: Scalar,
}

impl Staircase {
    fn new(nspec: &NormalizedSpec) -> Result<Self> {
        if nspec.m != 0 || nspec.p != 0 {
            return Err(Error::HypothesisViolated("ordered interior form needs m = p = 0".into()));
        }
        let mut sigma = vec![0i64];
        let mut values = Vec::new();
        for j in 1..=nspec.n as i64 {
            let n = nspec
                .mult(j)
                .finite()
                .ok_or_else(|| Error::InteriorInfinite((nspec.a(j) + &nspec.translation).to_string()))?;
            sigma.push(sigma[sigma.len() - 1] + n as i64);
            values.push(nspec.a(j).clone());
        }
        Ok(Staircase { sigma, values, b: nspec.b.clone() })
    }

    fn sigma_n(&self) -> i64 {
        self.sigma[self.sigma.len() - 1]
    }

    /// `sum_{i <= m} lambda_i`.
    fn partial_sum(&self, m: i64) -> Scalar {
        let mut total = Scalar::zero();
        for (r, v) in self.values.iter().enumerate() {
            let lo = self.sigma[r];
            let hi = self.sigma[r + 1].min(m);
            if hi > lo {
                total += v * Scalar::from(hi - lo);
            }
        }
        if m > self.sigma_n() {
            total += &self.b * Scalar::from(m - self.sigma_n());
        }
        total
    }
}

fn prepare(d: &ZSequence, nspec: &NormalizedSpec) -> Result<(ZSequence, Staircase)> {
    let stairs = Staircase::new(nspec)?;
    // work in translated coordinates
    let shift = -&nspec.translation;
    let side = |s: &ZSide| match s {
        ZSide::Constant(c) => ZSide::Constant(c + &shift),
        ZSide::Geometric(t) => ZSide::Geometric(t.translated(&shift)),
    };
    let d = ZSequence {
        lower: side(&d.lower),
        middle: d.middle.iter().map(|v| v + &shift).collect(),
        upper: side(&d.upper),
        first_middle_index: d.first_middle_index,
    };
    d.validate(&nspec.b)?;
    Ok((d, stairs))
}

fn delta(d: &ZSequence, stairs: &Staircase, k: i64, m: i64) -> Scalar {
    d.partial_sum(m - k) - stairs.partial_sum(m)
}

/// `lim delta_m`, or `None` when the upper side stays below `B` and the
/// partial sums tend to `-inf`.
fn limit(d: &ZSequence, stairs: &Staircase, k: i64) -> Option<Scalar> {
    if d.upper.limit() != &stairs.b {
        return None;
    }
    let u = d.upper_start();
    let b = &stairs.b;
    Some(
        d.partial_sum(u - 1) + b * Scalar::from(stairs.sigma_n() - k - u + 1) - stairs.partial_sum(stairs.sigma_n())
            + d.upper.deviation_from(1),
    )
}

/// `delta_m = sum_{i <= m} (d_{i-k} - lambda_i)` for the staircase of `nspec`.
pub fn riemann_delta(d: &ZSequence, nspec: &NormalizedSpec, k: i64, m: i64) -> Result<Scalar> {
    let (d, stairs) = prepare(d, nspec)?;
    Ok(delta(&d, &stairs, k, m))
}

/// `lim_{m -> inf} delta_m`; `None` stands for `-inf`.
pub fn riemann_limit(d: &ZSequence, nspec: &NormalizedSpec, k: i64) -> Result<Option<Scalar>> {
    let (d, stairs) = prepare(d, nspec)?;
    Ok(limit(&d, &stairs, k))
}

fn holds(d: &ZSequence, stairs: &Staircase, k: i64) -> bool {
    // delta_m >= 0 is automatic for m <= 0, and delta is nonincreasing
    // past sigma_n because every d_i <= B; so the limit settles the tail.
    limit(d, stairs, k).is_some_and(|l| l.is_zero())
        && (1..=stairs.sigma_n()).all(|m| !delta(d, stairs, k, m).is_negative())
}

/// Riemann interior majorization with shift `k`.
pub fn riemann_interior_check(d: &ZSequence, nspec: &NormalizedSpec, k: i64) -> Result<bool> {
    let (d, stairs) = prepare(d, nspec)?;
    Ok(holds(&d, &stairs, k))
}

/// The shift witnessing Riemann interior majorization, if any.
///
/// The limit of `delta_m` drops by exactly `B` per unit of `k`, so at most
/// one shift can make it vanish; that candidate is then checked.
pub fn riemann_interior_search(d: &ZSequence, nspec: &NormalizedSpec) -> Result<Option<i64>> {
    let (d, stairs) = prepare(d, nspec)?;
    let Some(at_zero) = limit(&d, &stairs, 0) else {
        return Ok(None);
    };
    let k = &at_zero / &stairs.b;
    if !k.is_integer() {
        return Ok(None);
    }
    let k = scalar_to_i64(&k)?;
    Ok(holds(&d, &stairs, k).then_some(k))
}

/// `k0 + sigma_n - m_n` with `k0` from the unordered interior check and
/// `m_n` the last index whose term lies below `A_n`.
pub fn riemann_proof_k(d: &ZSequence, nspec: &NormalizedSpec) -> Result<Option<i64>> {
    let (shifted, stairs) = prepare(d, nspec)?;
    let verdict = interior_majorization_check(&d.to_diagonal_in(nspec)?, nspec)?;
    let Some(k0) = verdict.k0 else {
        return Ok(None);
    };
    let a_n = nspec.a(nspec.n as i64);
    Ok(Some(k0 + stairs.sigma_n() - last_below(&shifted, a_n)))
}

fn last_below(d: &ZSequence, x: &Scalar) -> i64 {
    let u = d.upper_start();
    if &d.upper.term(1) < x {
        let mut j = 1;
        while &d.upper.term(j + 1) < x {
            j += 1;
        }
        return u + j as i64 - 1;
    }
    if let Some(pos) = d.middle.iter().rposition(|v| v < x) {
        return d.first_middle_index + pos as i64;
    }
    let mut j = 1;
    while &d.lower.term(j) >= x {
        j += 1;
    }
    d.first_middle_index - j as i64
}

impl ZSequence {
    fn to_diagonal_in(&self, nspec: &NormalizedSpec) -> Result<DiagonalSequence> {
        self.to_diagonal(&nspec.translation, &(&nspec.b + &nspec.translation))
    }
}

/// Whether the ordered and unordered interior checks agree on `d`.
pub fn equivalence_audit(d: &ZSequence, nspec: &NormalizedSpec) -> Result<bool> {
    let riemann = riemann_interior_search(d, nspec)?.is_some();
    let lebesgue = interior_majorization_check(&d.to_diagonal_in(nspec)?, nspec)?.feasible;
    Ok(riemann == lebesgue)
}
