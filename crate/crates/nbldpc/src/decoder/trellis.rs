//! Exact check-node processing by forward-backward combination.
//!
//! EMSA uses the (min, +) semiring, MMA the (min, max) semiring; both are
//! exact for the unrestricted configuration minimum because the combining
//! operation is associative. A degree-d_c row takes 3(d_c - 2) combination
//! stages: forward prefixes, backward suffixes, and per-edge merges.

use super::{to_absolute, to_deviation, C2vMessage, CnError, V2cMessage};
use crate::complexity::OpCounter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Semiring {
    MinSum,
    MinMax,
}

/// One combination stage: out[x] = min over u of op(a[u], b[u ^ x]).
/// Counts q^2 summations and q(q-1) compare-selects.
fn combine(a: &[f64], b: &[f64], ring: Semiring, ctr: &mut OpCounter) -> Vec<f64> {
    let q = a.len();
    let mut out = vec![f64::INFINITY; q];
    for x in 0..q {
        let mut best = f64::INFINITY;
        let mut first = true;
        for u in 0..q {
            let cand = match ring {
                Semiring::MinSum => a[u] + b[u ^ x],
                Semiring::MinMax => a[u].max(b[u ^ x]),
            };
            ctr.summations(1);
            if first {
                best = cand;
                first = false;
            } else {
                if cand < best {
                    best = cand;
                }
                ctr.compare_selects(1);
            }
        }
        out[x] = best;
    }
    out
}

fn cn_forward_backward(
    inputs: &[V2cMessage],
    c: f64,
    ring: Semiring,
    ctr: &mut OpCounter,
) -> Result<Vec<C2vMessage>, CnError> {
    let dc = inputs.len();
    if dc < 2 {
        return Err(CnError::DegreeTooSmall(dc));
    }
    let abs: Vec<Vec<f64>> = inputs
        .iter()
        .map(|m| to_absolute(&m.soft, m.hard))
        .collect();
    let a_sum = inputs.iter().fold(0, |acc, m| acc ^ m.hard);

    let out_abs: Vec<Vec<f64>> = if dc == 2 {
        // two-edge row: each output is a copy of the other input
        vec![abs[1].clone(), abs[0].clone()]
    } else {
        let mut forward = Vec::with_capacity(dc - 1);
        forward.push(abs[0].clone());
        for t in 1..dc - 1 {
            let next = combine(forward.last().unwrap(), &abs[t], ring, ctr);
            forward.push(next);
        }
        let mut backward = vec![Vec::new(); dc];
        backward[dc - 1] = abs[dc - 1].clone();
        for t in (1..dc - 1).rev() {
            backward[t] = combine(&abs[t], &backward[t + 1], ring, ctr);
        }
        (0..dc)
            .map(|t| {
                if t == 0 {
                    backward[1].clone()
                } else if t == dc - 1 {
                    forward[dc - 2].clone()
                } else {
                    combine(&forward[t - 1], &backward[t + 1], ring, ctr)
                }
            })
            .collect()
    };

    Ok(out_abs
        .into_iter()
        .zip(inputs)
        .map(|(abs_out, inp)| {
            let hard = a_sum ^ inp.hard;
            let mut soft = to_deviation(&abs_out, hard);
            for v in soft.iter_mut() {
                *v *= c;
            }
            soft[0] = 0.0;
            C2vMessage { hard, soft }
        })
        .collect())
}

/// Extended min-sum check node: exact scaled configuration minimum.
pub fn cn_emsa(
    inputs: &[V2cMessage],
    c: f64,
    ctr: &mut OpCounter,
) -> Result<Vec<C2vMessage>, CnError> {
    cn_forward_backward(inputs, c, Semiring::MinSum, ctr)
}

/// Min-max check node: the sum over a configuration is replaced by a max.
pub fn cn_mma(
    inputs: &[V2cMessage],
    c: f64,
    ctr: &mut OpCounter,
) -> Result<Vec<C2vMessage>, CnError> {
    cn_forward_backward(inputs, c, Semiring::MinMax, ctr)
}
