//! Upper bound `c` on crossing-sequence length for any `q`-state one-tape
//! machine running in time `T(n)`.
//!
//! `c` must satisfy `c >= max(T(0), T(1))` and, for every `n >= 2`,
//!
//! ```text
//! 3·(q·n^(log q / √g(n)) − 1)/(q − 1)  <=  n − 3 − n/√g(n) + c·√g(n)/log n
//! ```
//!
//! with `g(n) = n log n / T(n)`. Beyond `N` (where `g >= max(16, 4 log² q)`
//! and `n >= 144`) the inequality holds for every `c >= 0`, so only `[2, N)`
//! is scanned. Arithmetic is `f64` with every operation rounded outward, so
//! the left side is over-estimated and the right side under-estimated; this
//! can only make `c` larger.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{BoundError, TimeBound};

/// Below this point every `n` is evaluated individually.
const EXACT_PREFIX: u128 = 1 << 16;
/// Interval leaves at most this wide are evaluated point by point.
const LEAF_WIDTH: u128 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KobayashiConstant {
    pub c: u64,
    /// State count the constant is valid for.
    pub states: u64,
    /// The bound it is valid for, as [`TimeBound::describe`] renders it.
    pub bound: String,
    /// Scan threshold `N`; the inequality needs no check at or beyond it.
    pub threshold: BigUint,
    /// Number of points and intervals evaluated.
    pub evaluations: u64,
}

/// `(q^{c+1} − 1)/(q − 1)`: the number of state sequences of length at most `c`.
pub fn sequence_count_bound(q: u64, c: u64) -> BigUint {
    assert!(q >= 2, "state count must be at least 2");
    let q = BigUint::from(q);
    let exp = u32::try_from(c + 1).expect("exponent fits in u32");
    (q.pow(exp) - BigUint::one()) / (q - BigUint::one())
}

/// [`sequence_count_bound`] when it fits in a `u128`, without building the
/// big number otherwise.
pub fn sequence_count_bound_u128(q: u64, c: u64) -> Option<u128> {
    assert!(q >= 2, "state count must be at least 2");
    let mut sum: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=c {
        sum = sum.checked_add(term)?;
        if i < c {
            term = term.checked_mul(q as u128)?;
        }
    }
    Some(sum)
}

// Outward rounding. Transcendental functions get the same padding; libm's
// log2/exp2/sqrt/powf are accurate to well under eight ulps.
const PAD: f64 = 8.0 * f64::EPSILON;

fn up(x: f64) -> f64 {
    x + x.abs() * PAD + f64::MIN_POSITIVE
}

fn down(x: f64) -> f64 {
    x - x.abs() * PAD - f64::MIN_POSITIVE
}

fn to_f64_up(n: u128) -> f64 {
    let f = n as f64;
    if f as u128 >= n {
        f
    } else {
        up(f)
    }
}

fn to_f64_down(n: u128) -> f64 {
    let f = n as f64;
    if f >= 2f64.powi(127) || (f as u128) <= n {
        f
    } else {
        down(f)
    }
}

/// Conservative smallest `c` for which the inequality holds on all `n` in
/// `[lo, hi]`, given `T(lo) <= T(n) <= t_hi` there. `None` means the value
/// is not finite or does not fit in 64 bits.
fn required_on(q: u64, lo: u128, hi: u128, t_hi: u128) -> Option<u64> {
    debug_assert!(2 <= lo && lo <= hi);
    let qf = q as f64;
    let (lo_f, hi_f) = (to_f64_down(lo), to_f64_up(hi));
    if t_hi == 0 {
        // g is infinite: the left side is 3 and the c-term is unbounded.
        return Some(if lo >= 6 { 0 } else { 1 });
    }
    let log_lo = down(lo_f.log2());
    let log_hi = up(hi_f.log2());
    let g_lo = down(down(lo_f * log_lo) / to_f64_up(t_hi));
    let s_lo = down(g_lo.sqrt());
    if !(s_lo > 0.0) {
        return None;
    }
    let exponent = up(up(qf.log2()) / s_lo);
    let power = up(up(exponent * log_hi).exp2());
    let lhs = up(up(3.0 * up(up(qf * power) - 1.0)) / (qf - 1.0));
    let slack = up(up(up(lhs - lo_f) + 3.0) + up(hi_f / s_lo));
    if !slack.is_finite() {
        return None;
    }
    if slack <= 0.0 {
        return Some(0);
    }
    let c = up(up(slack * log_hi) / s_lo).ceil();
    (c.is_finite() && c < 2f64.powi(63)).then_some(c as u64)
}

/// Conservative smallest `c` for which the inequality holds at `n` (`n >= 2`).
pub fn required_c(q: u64, bound: &dyn TimeBound, n: u128) -> Option<u64> {
    required_on(q, n, n, bound.floor_eval_wide(n))
}

/// Compute a crossing-length bound for `q`-state machines running in time `bound`.
///
/// Fails with [`BoundError::Infeasible`] when the scan would visit more than
/// `effort` points or intervals.
pub fn kobayashi_constant(q: u64, bound: &dyn TimeBound, effort: u64) -> Result<KobayashiConstant, BoundError> {
    if q < 2 {
        return Err(BoundError::StateCount(q));
    }
    let log_q = (q as f64).log2();
    let target = up(4.0 * up(log_q * log_q)).max(16.0).ceil() as u64;
    let witness = bound.convergence_witness(target)?;
    let threshold = witness.max(BigUint::from(144u32));
    let end = threshold
        .to_u128()
        .filter(|&n| n <= 1 << 120)
        .ok_or_else(|| BoundError::Infeasible(format!("scan threshold {threshold} is too large")))?;

    let mut scan = Scan { q, bound, effort, evaluations: 0, best: 0 };
    let prefix_end = end.min(EXACT_PREFIX);
    for n in 2..prefix_end {
        scan.point(n)?;
    }
    if end > prefix_end {
        if !bound.is_nondecreasing() {
            return Err(BoundError::Infeasible(format!(
                "bound is not monotone and the scan up to {end} is too long to do point by point"
            )));
        }
        // Dyadic blocks from large to small keep the stack shallow; small
        // blocks are where large requirements live, so visit them first.
        let mut stack = Vec::new();
        let mut lo = prefix_end;
        while lo < end {
            let hi = (lo.saturating_mul(2) - 1).min(end - 1);
            stack.push((lo, hi));
            lo = hi + 1;
        }
        stack.reverse();
        while let Some((lo, hi)) = stack.pop() {
            scan.interval(lo, hi, &mut stack)?;
        }
    }
    let clamp = bound.floor_eval(0).max(bound.floor_eval(1));
    let clamp = u64::try_from(clamp).map_err(|_| BoundError::Infeasible("T(0) or T(1) exceeds 64 bits".into()))?;
    Ok(KobayashiConstant {
        c: scan.best.max(clamp),
        states: q,
        bound: bound.describe(),
        threshold,
        evaluations: scan.evaluations,
    })
}

struct Scan<'a> {
    q: u64,
    bound: &'a dyn TimeBound,
    effort: u64,
    evaluations: u64,
    best: u64,
}

impl Scan<'_> {
    fn tick(&mut self) -> Result<(), BoundError> {
        self.evaluations += 1;
        if self.evaluations > self.effort {
            return Err(BoundError::Infeasible(format!(
                "crossing-length scan exceeded the effort limit of {}",
                self.effort
            )));
        }
        Ok(())
    }

    fn point(&mut self, n: u128) -> Result<(), BoundError> {
        self.tick()?;
        let c = required_c(self.q, self.bound, n)
            .ok_or_else(|| BoundError::Infeasible(format!("crossing-length requirement at n = {n} overflows")))?;
        self.best = self.best.max(c);
        Ok(())
    }

    fn interval(&mut self, lo: u128, hi: u128, stack: &mut Vec<(u128, u128)>) -> Result<(), BoundError> {
        self.tick()?;
        if let Some(c) = required_on(self.q, lo, hi, self.bound.floor_eval_wide(hi)) {
            if c <= self.best {
                return Ok(());
            }
        }
        if hi - lo < LEAF_WIDTH {
            for n in lo..=hi {
                self.point(n)?;
            }
            return Ok(());
        }
        let mid = lo + (hi - lo) / 2;
        stack.push((mid + 1, hi));
        stack.push((lo, mid));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{LinearBound, TableBound, DEFAULT_SEARCH_EFFORT};

    #[test]
    fn sequence_counts() {
        assert_eq!(sequence_count_bound(2, 1), BigUint::from(3u32));
        assert_eq!(sequence_count_bound(3, 2), BigUint::from(13u32));
        assert_eq!(sequence_count_bound(2, 0), BigUint::from(1u32));
        for (q, c) in [(2, 0), (2, 5), (5, 7), (3, 80), (2, 126)] {
            assert_eq!(sequence_count_bound_u128(q, c).map(BigUint::from), Some(sequence_count_bound(q, c)));
        }
        assert_eq!(sequence_count_bound_u128(2, 127), Some(u128::MAX));
        assert_eq!(sequence_count_bound_u128(2, 128), None);
        assert_eq!(sequence_count_bound_u128(5, 2_980_008), None);
    }

    #[test]
    fn constant_covers_small_arguments() {
        let t = LinearBound::new(2, 2);
        let k = kobayashi_constant(2, &t, DEFAULT_SEARCH_EFFORT).unwrap();
        assert!(k.c >= 4);
        for n in 2..5000u128 {
            assert!(required_c(2, &t, n).unwrap() <= k.c, "n = {n}");
        }
    }

    #[test]
    fn quadratic_bound_has_no_constant() {
        let t = TableBound::polynomial(vec![0, 0, 1]);
        assert!(matches!(
            kobayashi_constant(2, &t, DEFAULT_SEARCH_EFFORT),
            Err(BoundError::NoConvergenceWitness(_))
        ));
    }

    #[test]
    fn effort_limit_is_reported() {
        let t = LinearBound::new(1, 1);
        assert!(matches!(kobayashi_constant(3, &t, 100), Err(BoundError::Infeasible(_))));
    }

    #[test]
    fn zero_bound_needs_little() {
        let t = LinearBound::new(0, 0);
        let k = kobayashi_constant(2, &t, DEFAULT_SEARCH_EFFORT).unwrap();
        assert_eq!(k.c, 1);
    }
}
