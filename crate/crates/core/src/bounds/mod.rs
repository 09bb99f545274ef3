//! Entropic bounds for tester pairs.
//!
//! The bound `c` of a pair is the infimum over all unitaries of
//! `H(T1, u) + H(T2, u)`. [`estimate_bound`] reports the best value found by
//! a seeded multi-start search, which is an upper bound on `c`.

mod search;

use serde::{Deserialize, Serialize};

pub use search::{minimize_over_unitaries, nelder_mead, SearchConfig, SearchOutcome, StartTrace};

use crate::error::{Error, Result};
use crate::qmath::{PureState, Unitary, UNIT_TOL};
use crate::tester::{is_orthonormal, tester_entropy, Tester};

/// Bound values at or below this (bits) count as the trivial bound.
pub const TRIVIAL_TOL: f64 = 1e-6;

/// Distance (bits) below `log₂ D` still counted as the maximal bound.
pub const MAXIMAL_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct BoundEstimate {
    pub value: f64,
    pub minimizer: Unitary,
    pub starts: Vec<StartTrace>,
}

/// JSON record `{value, minimizer, starts}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundRecord {
    pub value: f64,
    pub minimizer: crate::qmath::ComplexMatrix,
    pub starts: Vec<StartTrace>,
}

impl From<&BoundEstimate> for BoundRecord {
    fn from(b: &BoundEstimate) -> Self {
        Self {
            value: b.value,
            minimizer: b.minimizer.matrix().clone(),
            starts: b.starts.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Saturation {
    Trivial,
    Maximal,
    Intermediate,
}

/// Classifies a bound value against `log₂ outcomes`.
pub fn classify(value: f64, outcomes: usize) -> Saturation {
    if value <= TRIVIAL_TOL {
        Saturation::Trivial
    } else if value >= (outcomes as f64).log2() - MAXIMAL_TOL {
        Saturation::Maximal
    } else {
        Saturation::Intermediate
    }
}

pub fn entropy_sum(t1: &Tester, t2: &Tester, u: &Unitary) -> Result<f64> {
    check_same_dim(t1, t2)?;
    Ok(tester_entropy(t1, u)? + tester_entropy(t2, u)?)
}

pub fn estimate_bound(t1: &Tester, t2: &Tester, cfg: &SearchConfig) -> Result<BoundEstimate> {
    check_same_dim(t1, t2)?;
    let out = minimize_over_unitaries(t1.dim(), |u| entropy_sum(t1, t2, u), cfg)?;
    Ok(BoundEstimate {
        value: out.value.max(0.0),
        minimizer: out.minimizer,
        starts: out.starts,
    })
}

/// `−log₂ max_ij |⟨χ_i|ζ_j⟩|²` for two orthonormal measurements.
pub fn mub_overlap_bound(meas1: &[PureState], meas2: &[PureState]) -> Result<f64> {
    let dim = meas1.first().map(PureState::dim).unwrap_or(0);
    if let Some(s) = meas1.iter().chain(meas2).find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
    }
    if !is_orthonormal(meas1, UNIT_TOL) || !is_orthonormal(meas2, UNIT_TOL) {
        return Err(Error::InvalidTester("measurement is not orthonormal".into()));
    }
    let max = meas1
        .iter()
        .flat_map(|a| meas2.iter().map(move |b| a.inner(b).norm_sqr()))
        .fold(0.0, f64::max);
    Ok((-max.log2()).max(0.0))
}

fn check_same_dim(t1: &Tester, t2: &Tester) -> Result<()> {
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch { expected: t1.dim(), found: t2.dim() });
    }
    Ok(())
}
