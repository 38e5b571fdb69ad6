//! Linear-inequality decisions against exhaustive search.
//!
//! Coefficients are kept small enough that every feasible instance has a
//! solution with all `x_i <= 60`, so the box search is an exact oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tmtime::bounds::{inequality_holds, LinearBound, TableBound, TableDocument, Piece, TimeBound};

const BOX: u64 = 60;

pub fn brute(bound: &dyn TimeBound, a: &[u64], b: &[u64]) -> bool {
    let k = a.len() - 1;
    let mut x = vec![0u64; k];
    loop {
        if inequality_holds(bound, a, b, &x) == Some(true) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            x[i] += 1;
            if x[i] <= BOX {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn random_bound(rng: &mut ChaCha8Rng) -> Box<dyn TimeBound> {
    match rng.gen_range(0..3) {
        0 => Box::new(LinearBound::new(rng.gen_range(0..=3), rng.gen_range(0..=5))),
        1 => Box::new(TableBound::polynomial(vec![rng.gen_range(0..=3), rng.gen_range(0..=2), rng.gen_range(1..=2)])),
        _ => {
            // A non-monotone head followed by a linear tail.
            let doc = TableDocument {
                pieces: vec![
                    Piece { from: 0, coeffs: vec![rng.gen_range(0..=20), 0, 1] },
                    Piece { from: rng.gen_range(2..=10), coeffs: vec![rng.gen_range(0..=5), rng.gen_range(0..=3)] },
                ],
                omega_nlogn_from: None,
            };
            Box::new(TableBound::from_document(doc).unwrap())
        }
    }
}

/// Compare decisions with [`brute`] on `instances` seeded random queries.
/// Returns the feasible and infeasible counts, or the first disagreement.
pub fn inequality_agreement(seed: u64, instances: usize) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut feasible, mut infeasible) = (0, 0);
    for trial in 0..instances {
        let bound = random_bound(&mut rng);
        let k = rng.gen_range(0..=3);
        let mut a = vec![rng.gen_range(0..=10)];
        let mut b = vec![rng.gen_range(0..=40)];
        for _ in 0..k {
            a.push(rng.gen_range(1..=4));
            b.push(rng.gen_range(0..=10));
        }
        let expected = brute(bound.as_ref(), &a, &b);
        let witness = bound.witness_linear_inequality(&a, &b).map_err(|e| e.to_string())?;
        let decided = bound.decide_linear_inequality(&a, &b).map_err(|e| e.to_string())?;
        let ctx = || format!("trial {trial}: {} with A={a:?} B={b:?}", bound.describe());
        if witness.is_some() != expected || decided != expected {
            return Err(format!("{}: expected {expected}", ctx()));
        }
        if let Some(x) = witness {
            if x.len() != k || inequality_holds(bound.as_ref(), &a, &b, &x) != Some(true) {
                return Err(format!("{}: bad witness {x:?}", ctx()));
            }
            feasible += 1;
        } else {
            infeasible += 1;
        }
    }
    Ok((feasible, infeasible))
}
