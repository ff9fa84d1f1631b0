//! Exact non-negative rationals for thresholds such as `11/9 · μ` and `5/4 · s`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-negative rational kept in lowest terms.
///
/// Comparisons never overflow: `num_rational` compares by integer parts and
/// then by reciprocals of the fractional parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RatioRepr", into = "RatioRepr")]
pub struct Ratio(num_rational::Ratio<u128>);

#[derive(Serialize, Deserialize)]
struct RatioRepr {
    num: u128,
    den: u128,
}

impl TryFrom<RatioRepr> for Ratio {
    type Error = Error;

    fn try_from(r: RatioRepr) -> Result<Self> {
        Ratio::new(r.num, r.den)
    }
}

impl From<Ratio> for RatioRepr {
    fn from(r: Ratio) -> Self {
        RatioRepr {
            num: r.numer(),
            den: r.denom(),
        }
    }
}

impl Ratio {
    pub const ZERO: Ratio = Ratio(num_rational::Ratio::new_raw(0, 1));
    pub const ONE: Ratio = Ratio(num_rational::Ratio::new_raw(1, 1));

    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInstance("ratio with zero denominator".into()));
        }
        Ok(Ratio(num_rational::Ratio::new(num, den)))
    }

    pub fn from_integer(value: u64) -> Self {
        Ratio(num_rational::Ratio::from_integer(u128::from(value)))
    }

    pub fn numer(&self) -> u128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u128 {
        *self.0.denom()
    }

    /// `self · value`, e.g. `Ratio(11/9).times(μ)`.
    pub fn times(&self, value: u64) -> Self {
        Ratio(num_rational::Ratio::new(
            self.numer() * u128::from(value),
            self.denom(),
        ))
    }

    /// `load / base`, or `None` when `base` is zero.
    pub fn of(load: u64, base: u64) -> Option<Self> {
        (base != 0).then(|| Ratio(num_rational::Ratio::new(u128::from(load), u128::from(base))))
    }

    /// True iff `load ≤ self`, decided as `load · den ≤ num`.
    pub fn admits(&self, load: u64) -> bool {
        u128::from(load)
            .checked_mul(self.denom())
            .is_some_and(|lhs| lhs <= self.numer())
    }

    /// Largest integer not exceeding the ratio.
    pub fn floor(&self) -> u128 {
        self.numer() / self.denom()
    }
}

impl From<u64> for Ratio {
    fn from(value: u64) -> Self {
        Ratio::from_integer(value)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `"a"` or `"a/b"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInstance(format!("cannot parse ratio {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => Ratio::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => Ratio::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

/// Per-agent thresholds `α_i` for the greedy allocator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThresholdVector(Vec<Ratio>);

impl ThresholdVector {
    pub fn new(thresholds: Vec<Ratio>) -> Self {
        ThresholdVector(thresholds)
    }

    pub fn uniform(value: Ratio, agents: usize) -> Self {
        ThresholdVector(vec![value; agents])
    }

    pub fn from_integers(values: impl IntoIterator<Item = u64>) -> Self {
        ThresholdVector(values.into_iter().map(Ratio::from_integer).collect())
    }

    /// `multiplier · base_i` for every agent.
    pub fn scaled(multiplier: Ratio, bases: &[u64]) -> Self {
        ThresholdVector(bases.iter().map(|&b| multiplier.times(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Ratio] {
        &self.0
    }
}

impl std::ops::Index<usize> for ThresholdVector {
    type Output = Ratio;

    fn index(&self, agent: usize) -> &Ratio {
        &self.0[agent]
    }
}
