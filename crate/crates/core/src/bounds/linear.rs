use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{check_query, BoundError, TimeBound};

/// `T(n) = C·n + D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearBound {
    pub c: u64,
    pub d: u64,
}

impl LinearBound {
    pub fn new(c: u64, d: u64) -> Self {
        LinearBound { c, d }
    }
}

/// `n_K` for `g(n) = n log n / (c·n + d)`: any `n >= max(2^{Kc+1}, K·d)`
/// has `log n >= Kc + 1 >= Kc + Kd/n`, which is `g(n) >= K`.
pub(crate) fn linear_convergence_witness(k: u64, c: u64, d: u64) -> Result<BigUint, BoundError> {
    if k == 0 {
        return Ok(BigUint::from(2u32));
    }
    let exp = (k as u128 * c as u128 + 1)
        .try_into()
        .ok()
        .filter(|&e: &usize| e <= 1 << 24)
        .ok_or_else(|| BoundError::Infeasible(format!("convergence witness 2^({k}·{c}+1) is too large")))?;
    let reach = BigUint::from(k) * BigUint::from(d);
    Ok((BigUint::one() << exp).max(reach).max(BigUint::from(2u32)))
}

impl TimeBound for LinearBound {
    fn floor_eval_wide(&self, n: u128) -> u128 {
        (self.c as u128).saturating_mul(n).saturating_add(self.d as u128)
    }

    /// Closed form: the right side grows with slope `B_i − C·A_i` in `x_i`,
    /// the left side is affine, so a solution exists iff the origin works or
    /// some slope is positive.
    fn witness_linear_inequality(&self, a: &[u64], b: &[u64]) -> Result<Option<Vec<u64>>, BoundError> {
        check_query(a, b)?;
        let c = self.c as u128;
        let k = a.len() - 1;
        // C·A_0 + D fits in u128 since both factors are below 2^64.
        let base = c * a[0] as u128 + self.d as u128;
        let b0 = b[0] as u128;
        if base < b0 {
            return Ok(Some(vec![0; k]));
        }
        let gap = base - b0;
        for i in 1..=k {
            let slope_cost = c * a[i] as u128;
            let gain = b[i] as u128;
            if gain > slope_cost {
                let x = gap / (gain - slope_cost) + 1;
                let x = u64::try_from(x).map_err(|_| {
                    BoundError::Infeasible("inequality witness exceeds 64 bits".into())
                })?;
                let mut out = vec![0; k];
                out[i - 1] = x;
                return Ok(Some(out));
            }
        }
        Ok(None)
    }

    fn convergence_witness(&self, k: u64) -> Result<BigUint, BoundError> {
        linear_convergence_witness(k, self.c, self.d)
    }

    fn find_trivial_n0(&self) -> Option<u64> {
        if self.d == 0 {
            Some(0)
        } else if self.c == 0 {
            Some(self.d)
        } else {
            None
        }
    }

    fn is_nondecreasing(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        match (self.c, self.d) {
            (0, d) => d.to_string(),
            (1, 0) => "n".into(),
            (c, 0) => format!("{c}n"),
            (1, d) => format!("n+{d}"),
            (c, d) => format!("{c}n+{d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_eval_examples() {
        assert_eq!(LinearBound::new(1, 1).floor_eval(5), 6);
        assert_eq!(LinearBound::new(0, 5).floor_eval(9), 5);
        assert_eq!(LinearBound::new(2, 0).floor_eval(0), 0);
        assert_eq!(
            LinearBound::new(u64::MAX, u64::MAX).floor_eval(u64::MAX),
            u64::MAX as u128 * u64::MAX as u128 + u64::MAX as u128
        );
    }

    #[test]
    fn inequality_examples() {
        let t = LinearBound::new(1, 1);
        assert!(!t.decide_linear_inequality(&[1, 1], &[2, 1]).unwrap());
        assert!(t.decide_linear_inequality(&[1, 1], &[2, 2]).unwrap());
        let x = t.witness_linear_inequality(&[1, 1], &[2, 2]).unwrap().unwrap();
        assert_eq!(x, vec![1]);
    }

    #[test]
    fn convergence_examples() {
        let t = LinearBound::new(1, 1);
        assert_eq!(t.convergence_witness(1).unwrap(), BigUint::from(4u32));
        assert_eq!(t.convergence_witness(0).unwrap(), BigUint::from(2u32));
        assert_eq!(LinearBound::new(0, 0).convergence_witness(9).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn trivial_n0_examples() {
        assert_eq!(LinearBound::new(1, 0).find_trivial_n0(), Some(0));
        assert_eq!(LinearBound::new(0, 5).find_trivial_n0(), Some(5));
        assert_eq!(LinearBound::new(1, 1).find_trivial_n0(), None);
    }

    #[test]
    fn describe_forms() {
        assert_eq!(LinearBound::new(1, 1).describe(), "n+1");
        assert_eq!(LinearBound::new(3, 5).describe(), "3n+5");
        assert_eq!(LinearBound::new(0, 5).describe(), "5");
    }
}
