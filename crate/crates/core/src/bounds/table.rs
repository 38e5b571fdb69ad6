use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::linear::linear_convergence_witness;
use super::{box_search, check_query, inequality_holds, BoundError, TimeBound, DEFAULT_SEARCH_EFFORT};

/// One polynomial piece: `T(n) = Σ coeffs[i]·n^i` for `n >= from` (up to the
/// next piece).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub from: u64,
    pub coeffs: Vec<u64>,
}

/// On-disk form of a [`TableBound`]:
///
/// ```json
/// { "pieces": [ { "from": 0, "coeffs": [1, 1] },
///               { "from": 100, "coeffs": [0, 0, 1] } ],
///   "omega_nlogn_from": 10 }
/// ```
///
/// `coeffs[i]` multiplies `n^i`. `omega_nlogn_from` is an optional declared
/// `n_W` with `T(n) >= 3n·log_6 n + 6n + 1` for all `n >= n_W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub pieces: Vec<Piece>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_nlogn_from: Option<u64>,
}

/// A piecewise-polynomial bound with non-negative integer coefficients.
///
/// A last piece of degree at most one gives a linear-time bound with a
/// derived convergence witness. A last piece of degree two or more grows
/// faster than `n log n`; such bounds are manageable but have no convergence
/// witness, and serve as gadget parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableBound {
    pieces: Vec<Piece>,
    omega_nlogn_from: Option<u64>,
    effort: u64,
}

impl TableBound {
    pub fn from_document(doc: TableDocument) -> Result<Self, BoundError> {
        if doc.pieces.is_empty() {
            return Err(BoundError::Invalid("table has no pieces".into()));
        }
        if doc.pieces[0].from != 0 {
            return Err(BoundError::Invalid("first piece must start at 0".into()));
        }
        if doc.pieces.windows(2).any(|w| w[0].from >= w[1].from) {
            return Err(BoundError::Invalid("piece starts must be strictly increasing".into()));
        }
        Ok(TableBound { pieces: doc.pieces, omega_nlogn_from: doc.omega_nlogn_from, effort: DEFAULT_SEARCH_EFFORT })
    }

    pub fn from_json(text: &str) -> Result<Self, BoundError> {
        let doc: TableDocument =
            serde_json::from_str(text).map_err(|e| BoundError::Invalid(e.to_string()))?;
        Self::from_document(doc)
    }

    /// A single polynomial, `coeffs[i]` multiplying `n^i`.
    pub fn polynomial(coeffs: Vec<u64>) -> Self {
        TableBound {
            pieces: vec![Piece { from: 0, coeffs }],
            omega_nlogn_from: None,
            effort: DEFAULT_SEARCH_EFFORT,
        }
    }

    pub fn with_superlinear_witness(mut self, from: u64) -> Self {
        self.omega_nlogn_from = Some(from);
        self
    }

    pub fn with_effort(mut self, effort: u64) -> Self {
        self.effort = effort;
        self
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument { pieces: self.pieces.clone(), omega_nlogn_from: self.omega_nlogn_from }
    }

    fn tail(&self) -> &Piece {
        self.pieces.last().unwrap()
    }

    fn tail_degree(&self) -> usize {
        self.tail().coeffs.iter().rposition(|&c| c != 0).unwrap_or(0)
    }

    fn tail_coeff(&self, i: usize) -> u64 {
        self.tail().coeffs.get(i).copied().unwrap_or(0)
    }
}

fn eval_poly(coeffs: &[u64], n: u128) -> u128 {
    coeffs
        .iter()
        .rev()
        .fold(0u128, |acc, &c| acc.saturating_mul(n).saturating_add(c as u128))
}

fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

impl TimeBound for TableBound {
    fn floor_eval_wide(&self, n: u128) -> u128 {
        let idx = self.pieces.partition_point(|p| p.from as u128 <= n) - 1;
        eval_poly(&self.pieces[idx].coeffs, n)
    }

    fn witness_linear_inequality(&self, a: &[u64], b: &[u64]) -> Result<Option<Vec<u64>>, BoundError> {
        check_query(a, b)?;
        let k = a.len() - 1;
        let from = self.tail().from as u128;
        let a0 = a[0] as u128;
        // Steps needed along coordinate i to reach n >= target.
        let reach = |target: u128, i: usize| -> u128 {
            if target > a0 {
                ceil_div(target - a0, a[i] as u128)
            } else {
                0
            }
        };
        let to_u64 = |v: u128| u64::try_from(v).unwrap_or(u64::MAX);

        if self.tail_degree() <= 1 {
            let (slope, offset) = (self.tail_coeff(1) as u128, self.tail_coeff(0) as u128);
            let gap = (slope * a0 + offset).saturating_sub(b[0] as u128);
            for i in 1..=k {
                let cost = slope * a[i] as u128;
                let gain = b[i] as u128;
                if gain > cost {
                    let x = reach(from, i).max(gap / (gain - cost) + 1);
                    let mut out = vec![0; k];
                    out[i - 1] = to_u64(x);
                    if inequality_holds(self, a, b, &out) == Some(true) {
                        return Ok(Some(out));
                    }
                    return Err(BoundError::Infeasible("inequality witness overflows".into()));
                }
            }
            // Every slope is non-positive: minimal points of the tail region
            // and the whole pre-tail region lie in this box.
            let limits: Vec<u64> = (1..=k).map(|i| to_u64(reach(from, i).saturating_add(1))).collect();
            return box_search(self, a, b, &limits, self.effort);
        }

        let lead = self.tail_coeff(self.tail_degree()) as u128;
        let ratio = |i: usize| ceil_div(b[i] as u128, a[i] as u128);
        let per_n = if a0 >= 1 {
            (0..=k).map(ratio).max().unwrap()
        } else {
            (1..=k).map(ratio).max().unwrap_or(0) + b[0] as u128
        };
        // For n >= from and n >= 1, T(n) >= lead·n^2, which is >= per_n·n once n >= per_n/lead.
        let n_c = from.max(ceil_div(per_n, lead)).max(1);
        let limits: Vec<u64> = (1..=k).map(|i| to_u64(reach(n_c, i))).collect();
        box_search(self, a, b, &limits, self.effort)
    }

    fn convergence_witness(&self, k: u64) -> Result<BigUint, BoundError> {
        if self.tail_degree() >= 2 {
            return Err(BoundError::NoConvergenceWitness(
                "the last piece grows at least quadratically".into(),
            ));
        }
        let from = BigUint::from(self.tail().from.max(2));
        Ok(linear_convergence_witness(k, self.tail_coeff(1), self.tail_coeff(0))?.max(from))
    }

    fn find_trivial_n0(&self) -> Option<u64> {
        let from = self.tail().from;
        let scan_to = from.saturating_add(1).min(1_000_000);
        if let Some(n) = (0..=scan_to).find(|&n| self.floor_eval(n) < n as u128 + 1) {
            return Some(n);
        }
        match (self.tail_degree(), self.tail_coeff(1), self.tail_coeff(0)) {
            (d, 0, offset) if d <= 1 => Some(from.max(offset)),
            (d, 1, 0) if d <= 1 => Some(from),
            _ => None,
        }
    }

    fn is_nondecreasing(&self) -> bool {
        self.pieces
            .iter()
            .skip(1)
            .all(|p| self.floor_eval(p.from) >= self.floor_eval(p.from - 1))
    }

    fn superlinear_witness(&self) -> Option<u64> {
        self.omega_nlogn_from
    }

    fn describe(&self) -> String {
        let poly = |c: &[u64]| {
            let terms: Vec<String> = c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| match (i, v) {
                    (0, v) => v.to_string(),
                    (1, 1) => "n".into(),
                    (1, v) => format!("{v}n"),
                    (i, 1) => format!("n^{i}"),
                    (i, v) => format!("{v}n^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        };
        if self.pieces.len() == 1 {
            poly(&self.pieces[0].coeffs)
        } else {
            self.pieces
                .iter()
                .map(|p| format!("[{}..]: {}", p.from, poly(&p.coeffs)))
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}
