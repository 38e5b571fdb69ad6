//! Time bounds `T(n)` and the arithmetic the decision procedure needs from
//! them.
//!
//! A bound is *manageable* when we can decide, for `A_0, A_1..A_k >= 1` and
//! `B_0..B_k`, whether `T(A_0 + Σ x_i A_i) < B_0 + Σ x_i B_i` has a solution
//! `x ∈ ℕ^k`. The decision procedure also needs `g(n) = n log n / T(n)` to
//! converge to infinity with an explicit witness `K ↦ n_K`.

mod kobayashi;
mod linear;
mod table;

use std::fmt::Debug;

use num_bigint::BigUint;
use thiserror::Error;

pub use kobayashi::{kobayashi_constant, required_c, sequence_count_bound, sequence_count_bound_u128, KobayashiConstant};
pub use linear::LinearBound;
pub use table::{Piece, TableBound, TableDocument};

/// Default number of points a bounded search may visit.
pub const DEFAULT_SEARCH_EFFORT: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("coefficient vector A is empty")]
    EmptyA,
    #[error("dimension mismatch: |A| = {a}, |B| = {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("coefficient A_{0} must be at least 1")]
    ZeroCoefficient(usize),
    #[error("bound cannot certify convergence of n log n / T(n): {0}")]
    NoConvergenceWitness(String),
    #[error("bound computation infeasible: {0}")]
    Infeasible(String),
    #[error("state count must be at least 2, got {0}")]
    StateCount(u64),
    #[error("invalid bound: {0}")]
    Invalid(String),
}

/// A time bound usable by the decision procedure.
pub trait TimeBound: Debug + Send + Sync {
    /// `⌊T(n)⌋`, saturating at `u128::MAX`.
    fn floor_eval_wide(&self, n: u128) -> u128;

    /// `⌊T(n)⌋`.
    fn floor_eval(&self, n: u64) -> u128 {
        self.floor_eval_wide(n as u128)
    }

    /// Some `x ∈ ℕ^k` with `T(A_0 + Σ x_i A_i) < B_0 + Σ x_i B_i`, or `None`
    /// if there is none.
    fn witness_linear_inequality(&self, a: &[u64], b: &[u64]) -> Result<Option<Vec<u64>>, BoundError>;

    /// Whether `T(A_0 + Σ x_i A_i) < B_0 + Σ x_i B_i` holds for some `x ∈ ℕ^k`.
    fn decide_linear_inequality(&self, a: &[u64], b: &[u64]) -> Result<bool, BoundError> {
        Ok(self.witness_linear_inequality(a, b)?.is_some())
    }

    /// Some `n_K` with `g(n) >= K` for every `n >= n_K`.
    fn convergence_witness(&self, k: u64) -> Result<BigUint, BoundError>;

    /// Some `n_0` with `T(n_0) < n_0 + 1`, if the bound is simple enough to
    /// find one.
    fn find_trivial_n0(&self) -> Option<u64>;

    /// Whether `T` is non-decreasing on all of `ℕ`.
    fn is_nondecreasing(&self) -> bool;

    /// A declared `n_W` with `T(n) >= 3 n log_6 n + 6n + 1` for every `n >= n_W`.
    fn superlinear_witness(&self) -> Option<u64> {
        None
    }

    /// Short human-readable form, e.g. `2n+3`.
    fn describe(&self) -> String;
}

/// Check the shape of a manageability query.
pub fn check_query(a: &[u64], b: &[u64]) -> Result<(), BoundError> {
    if a.is_empty() {
        return Err(BoundError::EmptyA);
    }
    if a.len() != b.len() {
        return Err(BoundError::DimensionMismatch { a: a.len(), b: b.len() });
    }
    if let Some(i) = a.iter().skip(1).position(|&x| x == 0) {
        return Err(BoundError::ZeroCoefficient(i + 1));
    }
    Ok(())
}

/// Evaluate both sides of the inequality at `x`; `Some(true)` iff it holds.
/// `None` when an argument overflows.
pub fn inequality_holds(bound: &dyn TimeBound, a: &[u64], b: &[u64], x: &[u64]) -> Option<bool> {
    let mut n = a[0] as u128;
    let mut rhs = b[0] as u128;
    for i in 1..a.len() {
        n = n.checked_add((x[i - 1] as u128).checked_mul(a[i] as u128)?)?;
        rhs = rhs.checked_add((x[i - 1] as u128).checked_mul(b[i] as u128)?)?;
    }
    Some(bound.floor_eval_wide(n) < rhs)
}

/// Search the box `0 <= x_i < limits[i]` in odometer order for a solution.
pub(crate) fn box_search(
    bound: &dyn TimeBound,
    a: &[u64],
    b: &[u64],
    limits: &[u64],
    effort: u64,
) -> Result<Option<Vec<u64>>, BoundError> {
    let volume = limits
        .iter()
        .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128))
        .unwrap_or(u128::MAX);
    if volume == 0 {
        return Ok(None);
    }
    if volume > effort as u128 {
        return Err(BoundError::Infeasible(format!(
            "inequality search box has {volume} points, effort limit is {effort}"
        )));
    }
    let mut x = vec![0u64; limits.len()];
    loop {
        if inequality_holds(bound, a, b, &x) == Some(true) {
            return Ok(Some(x));
        }
        let mut i = 0;
        loop {
            if i == x.len() {
                return Ok(None);
            }
            x[i] += 1;
            if x[i] < limits[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Parse the command-line form `C,D`.
pub fn parse_linear(text: &str) -> Result<LinearBound, BoundError> {
    let (c, d) = text
        .split_once(',')
        .ok_or_else(|| BoundError::Invalid(format!("expected `C,D`, got `{text}`")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|e| BoundError::Invalid(format!("`{s}`: {e}")))
    };
    Ok(LinearBound::new(num(c)?, num(d)?))
}
