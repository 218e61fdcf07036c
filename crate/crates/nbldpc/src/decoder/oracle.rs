//! Brute-force check-node enumeration, the verification reference.
//!
//! Enumerates parity-satisfying configurations directly and minimizes their
//! reliability, independently of the trellis, LUT and min-tracking
//! realizations it is used to check. Guarded to small rows.

use super::{CnError, V2cMessage};
use crate::gf::GfElem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Configuration reliability is the sum of member reliabilities.
    Sum,
    /// Configuration reliability is the max of member reliabilities.
    Max,
}

/// Exact minimum over configurations for every edge and symbol, unscaled,
/// in absolute check-domain space: result[j][d] = min over L(x_j = d).
///
/// `order_cap` restricts to configurations where at most k of the other
/// edges deviate from their hard symbols. `prune_zero_sum` additionally
/// drops deviation combinations containing a nonempty zero-sum subset
/// (meaningful only with a cap; the pruned search must return the same
/// minima).
pub fn cn_oracle(
    inputs: &[V2cMessage],
    mode: OracleMode,
    order_cap: Option<usize>,
    prune_zero_sum: bool,
) -> Result<Vec<Vec<f64>>, CnError> {
    let dc = inputs.len();
    if dc < 2 {
        return Err(CnError::DegreeTooSmall(dc));
    }
    let q = inputs[0].soft.len();
    if dc > 6 || q > 16 {
        return Err(CnError::OracleGuard { dc, q });
    }
    let abs: Vec<Vec<f64>> = inputs
        .iter()
        .map(|m| super::to_absolute(&m.soft, m.hard))
        .collect();
    let mut result = vec![vec![f64::INFINITY; q]; dc];
    match order_cap {
        None => {
            for j in 0..dc {
                let others: Vec<usize> = (0..dc).filter(|&t| t != j).collect();
                full_scan(&abs, &others, mode, q, &mut result[j]);
            }
        }
        Some(cap) => {
            for j in 0..dc {
                let others: Vec<usize> = (0..dc).filter(|&t| t != j).collect();
                let b: GfElem = others.iter().fold(0, |acc, &t| acc ^ inputs[t].hard);
                // order-0 configuration
                result[j][b as usize] = 0.0;
                let mut devs: Vec<GfElem> = Vec::new();
                capped_scan(
                    inputs,
                    &others,
                    mode,
                    q,
                    cap,
                    prune_zero_sum,
                    0,
                    b,
                    0.0,
                    &mut devs,
                    &mut result[j],
                );
            }
        }
    }
    Ok(result)
}

/// Minimum over all q^(dc-1) assignments to `others`; the parity constraint
/// places each assignment at d = XOR of the assigned symbols.
fn full_scan(abs: &[Vec<f64>], others: &[usize], mode: OracleMode, q: usize, out: &mut [f64]) {
    let mut assign = vec![0usize; others.len()];
    loop {
        let mut d = 0usize;
        let mut cost: f64 = 0.0;
        for (slot, &t) in assign.iter().zip(others) {
            d ^= slot;
            let v = abs[t][*slot];
            cost = match mode {
                OracleMode::Sum => cost + v,
                OracleMode::Max => cost.max(v),
            };
        }
        if cost < out[d] {
            out[d] = cost;
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == assign.len() {
                return;
            }
            assign[k] += 1;
            if assign[k] < q {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}

/// Recursively assigns nonzero deviations to up to `cap` of the remaining
/// edges (`others[from..]`), accumulating the configuration cost.
#[allow(clippy::too_many_arguments)]
fn capped_scan(
    inputs: &[V2cMessage],
    others: &[usize],
    mode: OracleMode,
    q: usize,
    cap: usize,
    prune: bool,
    from: usize,
    d: GfElem,
    cost: f64,
    devs: &mut Vec<GfElem>,
    out: &mut [f64],
) {
    if devs.len() == cap || from == others.len() {
        return;
    }
    for pos in from..others.len() {
        let t = others[pos];
        for delta in 1..q as u16 {
            let delta = delta as GfElem;
            devs.push(delta);
            if !(prune && has_zero_sum_subset(devs)) {
                // deviation-space lookup: alpha-tilde(t, delta)
                let v = inputs[t].soft[delta as usize];
                let new_cost = match mode {
                    OracleMode::Sum => cost + v,
                    OracleMode::Max => cost.max(v),
                };
                let new_d = d ^ delta;
                if new_cost < out[new_d as usize] {
                    out[new_d as usize] = new_cost;
                }
                capped_scan(
                    inputs, others, mode, q, cap, prune, pos + 1, new_d, new_cost, devs, out,
                );
            }
            devs.pop();
        }
    }
}

/// True when some nonempty subset of `devs` XORs to zero.
fn has_zero_sum_subset(devs: &[GfElem]) -> bool {
    let n = devs.len();
    for mask in 1u32..1 << n {
        let mut acc = 0;
        for (k, &d) in devs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                acc ^= d;
            }
        }
        if acc == 0 {
            return true;
        }
    }
    false
}
