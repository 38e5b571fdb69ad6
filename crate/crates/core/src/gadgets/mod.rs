//! Reduction machines: from a one-tape machine `H` build a machine that
//! respects a time bound exactly when `H` never halts on the empty input.

mod counting;
mod pass;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::TimeBound;
use crate::machine::MachineError;

pub use counting::build_counting_gadget;
pub use pass::{build_pass_gadget, PassNames};

/// Erasure base used by the pass gadget.
pub const ERASE_BASE: u64 = 6;
/// Default horizon of the explicit scan in [`gadget_params`].
pub const DEFAULT_HORIZON: u64 = 1_000_000;
/// Largest horizon the scan will extend to when a declared witness lies
/// beyond the default.
const MAX_HORIZON: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("bound {0} declares no superlinear witness; a linear bound never satisfies T(n) >= 3n·log_6 n + 6n + 1")]
    NotSuperlinear(String),
    #[error("bound {bound} has T(n) < 3n·log_6 n + 6n + 1 at n = {n}, at or beyond its declared witness")]
    WitnessContradicted { bound: String, n: u64 },
    #[error("declared witness {0} is beyond the largest scan horizon")]
    WitnessTooLarge(u64),
    #[error("the threshold n_0 must be at least the erasure base {ERASE_BASE}, got {0}")]
    ThresholdTooSmall(u64),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Constants for the pass gadget: `6 <= c <= n0` and
/// `T(n) >= 3n·log_c n + 6n + 1` for every `n >= n0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetParams {
    pub c: u64,
    pub n0: u64,
    pub bound: String,
}

/// `3n·log_6 n + 6n + 1`, rounded up.
pub fn pass_requirement(n: u64) -> u128 {
    if n <= 1 {
        return 6 * n as u128 + 1;
    }
    let nf = n as f64;
    let v = 3.0 * nf * (nf.ln() / (ERASE_BASE as f64).ln()) + 6.0 * nf + 1.0;
    // Pad by a few ulps so rounding can only raise the requirement.
    (v * (1.0 + 8.0 * f64::EPSILON)).ceil() as u128
}

/// The least `n0 >= 6` for which the bound satisfies the pass inequality on
/// `[n0, horizon]`; beyond that the bound's declared witness vouches for it.
pub fn gadget_params(bound: &dyn TimeBound, horizon: u64) -> Result<GadgetParams, GadgetError> {
    let witness = bound.superlinear_witness().ok_or_else(|| GadgetError::NotSuperlinear(bound.describe()))?;
    if witness > MAX_HORIZON {
        return Err(GadgetError::WitnessTooLarge(witness));
    }
    let end = horizon.max(witness);
    let mut last_fail = None;
    for n in 2..=end {
        if bound.floor_eval(n) < pass_requirement(n) {
            if n >= witness {
                return Err(GadgetError::WitnessContradicted { bound: bound.describe(), n });
            }
            last_fail = Some(n);
        }
    }
    let n0 = last_fail.map_or(ERASE_BASE, |n| (n + 1).max(ERASE_BASE));
    Ok(GadgetParams { c: ERASE_BASE, n0, bound: bound.describe() })
}
