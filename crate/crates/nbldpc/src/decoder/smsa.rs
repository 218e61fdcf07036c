//! Simplified min-sum check-node processing.
//!
//! Hard outputs come from a single XOR accumulator; order-1 soft messages
//! come from per-deviation (min1, min2, idx) triples; higher-order
//! combinations are built by one (SMSA-1) or two (SMSA-2) passes over a
//! pairwise-decomposition look-up table.

use super::{C2vMessage, CnError, V2cMessage};
use crate::complexity::OpCounter;
use crate::gf::{GfContext, GfElem};

/// Pairwise XOR-decomposition table: for each nonzero target symbol, the q/2
/// unordered pairs that sum to it, covering the whole field without
/// repetition. Column f = 0 is always the pair (0, target), which keeps the
/// lower-order value reachable in a combination pass.
#[derive(Debug, Clone)]
pub struct Lut {
    q: usize,
    rows: Vec<Vec<(GfElem, GfElem)>>,
}

impl Lut {
    pub fn q(&self) -> usize {
        self.q
    }

    /// Pairs for target symbol `delta` (nonzero).
    pub fn row(&self, delta: GfElem) -> &[(GfElem, GfElem)] {
        &self.rows[delta as usize - 1]
    }
}

/// Builds the table in canonical order: within a row, pairs are listed by
/// increasing smaller element, which puts (0, delta) first.
pub fn build_lut(gf: &GfContext) -> Lut {
    let q = gf.q();
    let rows = (1..q)
        .map(|delta| {
            let mut used = vec![false; q];
            let mut pairs = Vec::with_capacity(q / 2);
            for a in 0..q {
                if !used[a] {
                    let b = a ^ delta;
                    used[a] = true;
                    used[b] = true;
                    pairs.push((a as GfElem, b as GfElem));
                }
            }
            pairs
        })
        .collect();
    Lut { q, rows }
}

/// Per-row compressed state: XOR accumulator plus per-deviation triples.
#[derive(Debug, Clone)]
pub struct CnWorkspace {
    pub acc: GfElem,
    /// (min1, min2, idx) per nonzero deviation, indexed by delta - 1.
    pub triples: Vec<(f64, f64, usize)>,
}

/// Computes the XOR accumulator and the (min1, min2, idx) triples for a row.
/// Ties select the smallest column index.
pub fn cn_workspace(inputs: &[V2cMessage], ctr: &mut OpCounter) -> Result<CnWorkspace, CnError> {
    let dc = inputs.len();
    if dc < 2 {
        return Err(CnError::DegreeTooSmall(dc));
    }
    let q = inputs[0].soft.len();
    let mut acc = inputs[0].hard;
    for m in &inputs[1..] {
        acc ^= m.hard;
    }
    ctr.field_adds(dc as u64 - 1);
    let mut triples = Vec::with_capacity(q - 1);
    for delta in 1..q {
        // first two entries settle with one compare, each further entry
        // takes a compare against min1 and one against min2
        let (a0, a1) = (inputs[0].soft[delta], inputs[1].soft[delta]);
        let (mut min1, mut min2, mut idx) =
            if a1 < a0 { (a1, a0, 1) } else { (a0, a1, 0) };
        ctr.compare_selects(1);
        for (j, m) in inputs.iter().enumerate().skip(2) {
            let v = m.soft[delta];
            if v < min1 {
                min2 = min1;
                min1 = v;
                idx = j;
            } else if v < min2 {
                min2 = v;
            }
            ctr.compare_selects(2);
        }
        triples.push((min1, min2, idx));
    }
    Ok(CnWorkspace { acc, triples })
}

/// Recovers the order-1 (step-3.2) extrinsic message for edge `j` from the
/// compressed triples: min1 unless the edge itself achieved it.
pub fn step1_message(ws: &CnWorkspace, j: usize, ctr: &mut OpCounter) -> Vec<f64> {
    let q = ws.triples.len() + 1;
    let mut beta1 = vec![0.0; q];
    for delta in 1..q {
        let (min1, min2, idx) = ws.triples[delta - 1];
        beta1[delta] = if j == idx { min2 } else { min1 };
        ctr.compare_selects(1);
    }
    beta1
}

/// One LUT combination pass: out[delta] = min over table pairs of
/// input[d0] + input[d1]. The f = 0 pair contributes the input value itself.
fn combine_pass(input: &[f64], lut: &Lut, cols: usize, ctr: &mut OpCounter) -> Vec<f64> {
    let q = input.len();
    let mut out = vec![0.0; q];
    for delta in 1..q {
        let pairs = lut.row(delta as GfElem);
        let mut best = input[delta]; // pair (0, delta)
        for &(d0, d1) in &pairs[1..cols] {
            let cand = input[d0 as usize] + input[d1 as usize];
            ctr.summations(1);
            if cand < best {
                best = cand;
            }
            ctr.compare_selects(1);
        }
        out[delta] = best;
    }
    out
}

/// Full SMSA check-node update for one row. `two_step` selects the SMSA-2
/// second combination pass over the left half of the table.
pub fn cn_smsa(
    inputs: &[V2cMessage],
    lut: &Lut,
    c: f64,
    two_step: bool,
    ctr: &mut OpCounter,
) -> Result<Vec<C2vMessage>, CnError> {
    let ws = cn_workspace(inputs, ctr)?;
    let q = lut.q();
    ctr.field_adds(inputs.len() as u64); // b = a ^ acc per edge
    let out = inputs
        .iter()
        .enumerate()
        .map(|(j, inp)| {
            let beta1 = step1_message(&ws, j, ctr);
            let primary = combine_pass(&beta1, lut, q / 2, ctr);
            let mut soft = if two_step {
                combine_pass(&primary, lut, q / 4, ctr)
            } else {
                primary
            };
            for v in soft.iter_mut() {
                *v *= c;
            }
            soft[0] = 0.0;
            C2vMessage { hard: ws.acc ^ inp.hard, soft }
        })
        .collect();
    Ok(out)
}

/// Pre-scaling SMSA soft outputs (c = 1, no quantization), used by the
/// bound-direction checks.
pub fn cn_smsa_raw(
    inputs: &[V2cMessage],
    lut: &Lut,
    two_step: bool,
) -> Result<Vec<C2vMessage>, CnError> {
    cn_smsa(inputs, lut, 1.0, two_step, &mut OpCounter::Off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GfContext;

    #[test]
    fn gf8_table_matches_canonical_rows() {
        let gf = GfContext::new(3, None).unwrap();
        let lut = build_lut(&gf);
        assert_eq!(lut.row(1), &[(0, 1), (2, 3), (4, 5), (6, 7)]);
        assert_eq!(lut.row(7), &[(0, 7), (1, 6), (2, 5), (3, 4)]);
    }

    #[test]
    fn gf4_row_3() {
        let gf = GfContext::new(2, None).unwrap();
        let lut = build_lut(&gf);
        assert_eq!(lut.row(3), &[(0, 3), (1, 2)]);
    }

    #[test]
    fn lut_structure_all_fields() {
        for p in 2..=8 {
            let gf = GfContext::new(p, None).unwrap();
            let lut = build_lut(&gf);
            let q = gf.q();
            for delta in 1..q as u16 {
                let row = lut.row(delta as u8);
                assert_eq!(row.len(), q / 2);
                assert_eq!(row[0], (0, delta as u8));
                let mut seen = vec![false; q];
                for &(a, b) in row {
                    assert_eq!(a ^ b, delta as u8);
                    assert!(!seen[a as usize] && !seen[b as usize]);
                    seen[a as usize] = true;
                    seen[b as usize] = true;
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    fn msg(hard: u8, soft: Vec<f64>) -> V2cMessage {
        V2cMessage { hard, soft }
    }

    #[test]
    fn zero_inputs_give_zero_outputs_and_xor_hards() {
        let gf = GfContext::new(2, None).unwrap();
        let lut = build_lut(&gf);
        let inputs = vec![
            msg(1, vec![0.0; 4]),
            msg(2, vec![0.0; 4]),
            msg(3, vec![0.0; 4]),
        ];
        for two_step in [false, true] {
            let out = cn_smsa(&inputs, &lut, 0.75, two_step, &mut OpCounter::Off).unwrap();
            assert_eq!(out[0].hard, 2 ^ 3);
            assert_eq!(out[1].hard, 1 ^ 3);
            assert_eq!(out[2].hard, 1 ^ 2);
            for m in &out {
                assert!(m.soft.iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn one_step_equals_exhaustive_pair_search() {
        use rand::{Rng, SeedableRng};
        let gf = GfContext::new(2, None).unwrap();
        let lut = build_lut(&gf);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let inputs: Vec<V2cMessage> = (0..3)
                .map(|_| {
                    let mut soft: Vec<f64> =
                        (0..4).map(|_| rng.gen_range(0..16) as f64).collect();
                    soft[0] = 0.0;
                    msg(rng.gen_range(0..4), soft)
                })
                .collect();
            let out = cn_smsa_raw(&inputs, &lut, false).unwrap();
            let mut ctr = OpCounter::Off;
            let ws = cn_workspace(&inputs, &mut ctr).unwrap();
            for (j, m) in out.iter().enumerate() {
                let beta1 = step1_message(&ws, j, &mut ctr);
                for delta in 0..4usize {
                    let expect = (0..4)
                        .map(|d1| beta1[d1] + beta1[d1 ^ delta])
                        .fold(f64::INFINITY, f64::min);
                    assert_eq!(m.soft[delta], expect);
                }
            }
        }
    }

    #[test]
    fn second_pass_never_increases() {
        use rand::{Rng, SeedableRng};
        let gf = GfContext::new(4, None).unwrap();
        let lut = build_lut(&gf);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let inputs: Vec<V2cMessage> = (0..5)
                .map(|_| {
                    let mut soft: Vec<f64> =
                        (0..16).map(|_| rng.gen_range(0..16) as f64).collect();
                    soft[0] = 0.0;
                    msg(rng.gen_range(0..16), soft)
                })
                .collect();
            let one = cn_smsa_raw(&inputs, &lut, false).unwrap();
            let two = cn_smsa_raw(&inputs, &lut, true).unwrap();
            for (m1, m2) in one.iter().zip(&two) {
                for (v1, v2) in m1.soft.iter().zip(&m2.soft) {
                    assert!(v2 <= v1);
                }
            }
        }
    }

    #[test]
    fn degree_one_row_rejected() {
        let gf = GfContext::new(2, None).unwrap();
        let lut = build_lut(&gf);
        let inputs = vec![msg(0, vec![0.0; 4])];
        assert_eq!(
            cn_smsa(&inputs, &lut, 1.0, false, &mut OpCounter::Off).unwrap_err(),
            CnError::DegreeTooSmall(1)
        );
    }
}
