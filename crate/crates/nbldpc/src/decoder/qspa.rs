//! Probability-domain check-node processing via the Walsh-Hadamard
//! transform.
//!
//! Extrinsic convolution over the XOR group diagonalizes under the
//! length-q WHT, so each output is a pointwise product of the other inputs'
//! transforms. Prefix/suffix products keep the per-row cost linear in the
//! row degree.

use super::{C2vMessage, CnError, V2cMessage};
use crate::channel::argmin;

const PROB_FLOOR: f64 = 1e-30;

/// In-place Walsh-Hadamard transform (unnormalized); applying it twice
/// multiplies by q.
pub fn wht_in_place(v: &mut [f64]) {
    let q = v.len();
    debug_assert!(q.is_power_of_two());
    let mut half = 1;
    while half < q {
        for block in (0..q).step_by(half * 2) {
            for t in block..block + half {
                let (a, b) = (v[t], v[t + half]);
                v[t] = a + b;
                v[t + half] = a - b;
            }
        }
        half *= 2;
    }
}

/// Extrinsic group convolution on probability vectors: out[j] is the
/// XOR-convolution of all inputs except j, floored and renormalized.
pub fn cn_qspa(inputs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, CnError> {
    let dc = inputs.len();
    if dc < 2 {
        return Err(CnError::DegreeTooSmall(dc));
    }
    let q = inputs[0].len();
    let mut spectra = Vec::with_capacity(dc);
    for p in inputs {
        let sum: f64 = p.iter().sum();
        if sum <= 0.0 {
            return Err(CnError::ZeroSum);
        }
        let mut s: Vec<f64> = p.iter().map(|&v| v / sum).collect();
        wht_in_place(&mut s);
        spectra.push(s);
    }
    let mut prefix = vec![vec![1.0; q]];
    for s in &spectra[..dc - 1] {
        let last = prefix.last().unwrap();
        prefix.push(last.iter().zip(s).map(|(a, b)| a * b).collect());
    }
    let mut suffix = vec![1.0; q];
    let mut out = vec![Vec::new(); dc];
    for j in (0..dc).rev() {
        let mut t: Vec<f64> = prefix[j].iter().zip(&suffix).map(|(a, b)| a * b).collect();
        wht_in_place(&mut t);
        let mut p: Vec<f64> = t.iter().map(|&v| (v / q as f64).max(PROB_FLOOR)).collect();
        let sum: f64 = p.iter().sum();
        for v in p.iter_mut() {
            *v /= sum;
        }
        out[j] = p;
        for (sv, s) in suffix.iter_mut().zip(&spectra[j]) {
            *sv *= s;
        }
    }
    Ok(out)
}

/// LLR-framework wrapper: converts deviation-space V2C messages to
/// probabilities, convolves, and re-expresses the outputs as hard symbol
/// plus deviation-space log reliabilities.
pub fn cn_qspa_llr(inputs: &[V2cMessage]) -> Result<Vec<C2vMessage>, CnError> {
    let probs: Vec<Vec<f64>> = inputs
        .iter()
        .map(|m| {
            let abs = super::to_absolute(&m.soft, m.hard);
            abs.iter().map(|&v| (-v).exp()).collect()
        })
        .collect();
    let out = cn_qspa(&probs)?;
    Ok(out
        .into_iter()
        .map(|p| {
            let neg_log: Vec<f64> = p.iter().map(|&v| -v.ln()).collect();
            let hard = argmin(&neg_log);
            let base = neg_log[hard as usize];
            let mut soft: Vec<f64> = (0..p.len())
                .map(|delta| neg_log[delta ^ hard as usize] - base)
                .collect();
            soft[0] = 0.0;
            C2vMessage { hard, soft }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Nested-loop group convolution oracle.
    fn direct_extrinsic(inputs: &[Vec<f64>], j: usize) -> Vec<f64> {
        let q = inputs[0].len();
        let others: Vec<&Vec<f64>> = inputs
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != j)
            .map(|(_, p)| p)
            .collect();
        let norm: Vec<Vec<f64>> = others
            .iter()
            .map(|p| {
                let s: f64 = p.iter().sum();
                p.iter().map(|&v| v / s).collect()
            })
            .collect();
        let mut out = vec![0.0; q];
        let mut assign = vec![0usize; norm.len()];
        loop {
            let mut d = 0usize;
            let mut prob = 1.0;
            for (slot, p) in assign.iter().zip(&norm) {
                d ^= slot;
                prob *= p[*slot];
            }
            out[d] += prob;
            let mut k = 0;
            loop {
                if k == assign.len() {
                    let s: f64 = out.iter().sum();
                    return out.iter().map(|&v| v / s).collect();
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

    #[test]
    fn wht_involution() {
        let mut v = vec![3.0, -1.0, 2.0, 0.5, 7.0, 0.0, 1.0, 4.0];
        let orig = v.clone();
        wht_in_place(&mut v);
        wht_in_place(&mut v);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a / 8.0 - b).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_direct_convolution() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let q = [4usize, 8][rng.gen_range(0..2)];
            let dc = rng.gen_range(3..=5);
            let inputs: Vec<Vec<f64>> = (0..dc)
                .map(|_| (0..q).map(|_| rng.gen_range(0.01..1.0)).collect())
                .collect();
            let fast = cn_qspa(&inputs).unwrap();
            for j in 0..dc {
                let direct = direct_extrinsic(&inputs, j);
                for (a, b) in fast[j].iter().zip(&direct) {
                    assert!((a - b).abs() < 1e-12, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn two_edge_row_copies_other_input() {
        let a = vec![0.1, 0.2, 0.3, 0.4];
        let b = vec![0.4, 0.3, 0.2, 0.1];
        let out = cn_qspa(&[a.clone(), b.clone()]).unwrap();
        for (v, w) in out[0].iter().zip(&b) {
            assert!((v - w).abs() < 1e-12);
        }
        for (v, w) in out[1].iter().zip(&a) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_inputs_give_xor_consistent_delta() {
        let q = 8;
        let delta = |at: usize| {
            let mut v = vec![0.0; q];
            v[at] = 1.0;
            v
        };
        let inputs = vec![delta(3), delta(5), delta(6)];
        let out = cn_qspa(&inputs).unwrap();
        // edge 0 sees the convolution of deltas at 5 and 6
        let peak = out[0]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(peak, 5 ^ 6);
        assert!(out[0][peak] > 1.0 - 1e-9);
    }

    #[test]
    fn zero_sum_rejected() {
        let out = cn_qspa(&[vec![0.0; 4], vec![1.0; 4]]);
        assert_eq!(out.unwrap_err(), CnError::ZeroSum);
    }
}
