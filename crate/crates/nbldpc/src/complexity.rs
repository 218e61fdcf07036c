//! Closed-form operation/memory model for check-node processing, with live
//! counters for cross-validation against the implemented datapaths.
//!
//! A "compare-select" is one comparator/multiplexor pair; scaling and
//! shifting work is not counted.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexityError {
    #[error("q = {0} is not a power of two >= 4")]
    BadFieldOrder(usize),
    #[error("check degree d_c = {0} must be >= 2")]
    BadDegree(usize),
    #[error("no check-node pass ran; nothing to measure")]
    NothingMeasured,
}

/// Per-check-node per-iteration operation and storage counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub field_adds: u64,
    pub summations: u64,
    pub compare_selects: u64,
    pub memory_bits: u64,
}

/// Algorithms covered by the closed-form model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeledAlg {
    Smsa1,
    Smsa2,
    Emsa,
}

impl ModeledAlg {
    pub fn name(self) -> &'static str {
        match self {
            ModeledAlg::Smsa1 => "smsa1",
            ModeledAlg::Smsa2 => "smsa2",
            ModeledAlg::Emsa => "emsa",
        }
    }
}

/// Closed-form per-CN per-iteration counts for a degree-d_c check over
/// GF(q), with w bits per stored sub-message and p = log2(q) bits per hard
/// symbol.
pub fn predict(alg: ModeledAlg, q: usize, d_c: usize, w: u32) -> Result<OpCounts, ComplexityError> {
    if !q.is_power_of_two() || q < 4 {
        return Err(ComplexityError::BadFieldOrder(q));
    }
    if d_c < 2 {
        return Err(ComplexityError::BadDegree(d_c));
    }
    let (q64, dc, w64) = (q as u64, d_c as u64, w as u64);
    let p = q.trailing_zeros() as u64;
    let log2_dc = (64 - (dc - 1).leading_zeros()) as u64; // ceil(log2 d_c)
    let smsa_memory = (2 * w64 + log2_dc) * (q64 - 1) + p * dc;
    Ok(match alg {
        ModeledAlg::Smsa1 => OpCounts {
            field_adds: 2 * dc - 1,
            summations: (q64 / 2 - 1) * (q64 - 1) * dc,
            compare_selects: ((q64 / 2 + 2) * dc - 3) * (q64 - 1),
            memory_bits: smsa_memory,
        },
        ModeledAlg::Smsa2 => OpCounts {
            field_adds: 2 * dc - 1,
            summations: (3 * q64 / 4 - 2) * (q64 - 1) * dc,
            compare_selects: ((3 * q64 / 4 + 1) * dc - 3) * (q64 - 1),
            memory_bits: smsa_memory,
        },
        ModeledAlg::Emsa => OpCounts {
            field_adds: 0,
            summations: 3 * (dc - 2) * q64 * q64,
            compare_selects: 3 * (dc - 2) * q64 * (q64 - 1),
            memory_bits: w64 * dc * q64,
        },
    })
}

/// Live datapath counter threaded through the check-node routines. `Off`
/// compiles to no-ops on the hot path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpCounter {
    Off,
    On(OpCounts),
}

impl OpCounter {
    pub fn on() -> Self {
        OpCounter::On(OpCounts::default())
    }

    #[inline]
    pub fn field_adds(&mut self, n: u64) {
        if let OpCounter::On(c) = self {
            c.field_adds += n;
        }
    }

    #[inline]
    pub fn summations(&mut self, n: u64) {
        if let OpCounter::On(c) = self {
            c.summations += n;
        }
    }

    #[inline]
    pub fn compare_selects(&mut self, n: u64) {
        if let OpCounter::On(c) = self {
            c.compare_selects += n;
        }
    }

    pub fn counts(&self) -> OpCounts {
        match self {
            OpCounter::Off => OpCounts::default(),
            OpCounter::On(c) => *c,
        }
    }
}

/// Runs one instrumented decode and reports the executed operations per CN
/// per iteration, with storage bits taken from the algorithm's layout.
/// The input must fail its initial parity check so at least one CN pass runs.
pub fn measure(
    h: &crate::code::ParityCheckMatrix,
    llrs: &[crate::channel::LlrVector],
    cfg: &crate::decoder::DecoderConfig,
    w: u32,
) -> Result<OpCounts, Box<dyn std::error::Error>> {
    let mut ctr = OpCounter::on();
    let outcome = crate::decoder::decode_counted(h, llrs, cfg, &mut ctr)?;
    let passes = outcome.iterations_used as u64 * h.m() as u64;
    if passes == 0 {
        return Err(Box::new(ComplexityError::NothingMeasured));
    }
    let mut counts = ctr.counts();
    counts.field_adds /= passes;
    counts.summations /= passes;
    counts.compare_selects /= passes;
    let d_c = h.row(0).len();
    counts.memory_bits = match cfg.algorithm {
        crate::decoder::Algorithm::Smsa1 => predict(ModeledAlg::Smsa1, h.gf().q(), d_c, w)?,
        crate::decoder::Algorithm::Smsa2 => predict(ModeledAlg::Smsa2, h.gf().q(), d_c, w)?,
        _ => predict(ModeledAlg::Emsa, h.gf().q(), d_c, w)?,
    }
    .memory_bits;
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_numbers_q32_dc6_w5() {
        let s1 = predict(ModeledAlg::Smsa1, 32, 6, 5).unwrap();
        assert_eq!(
            (s1.summations, s1.compare_selects, s1.memory_bits),
            (2790, 3255, 433)
        );
        assert_eq!(s1.field_adds, 11);
        let s2 = predict(ModeledAlg::Smsa2, 32, 6, 5).unwrap();
        assert_eq!(
            (s2.summations, s2.compare_selects, s2.memory_bits),
            (4092, 4557, 433)
        );
        let e = predict(ModeledAlg::Emsa, 32, 6, 5).unwrap();
        assert_eq!(
            (e.summations, e.compare_selects, e.memory_bits),
            (12288, 11904, 960)
        );
        assert_eq!(e.field_adds, 0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            predict(ModeledAlg::Emsa, 30, 6, 5),
            Err(ComplexityError::BadFieldOrder(30))
        );
        assert_eq!(
            predict(ModeledAlg::Smsa1, 32, 1, 5),
            Err(ComplexityError::BadDegree(1))
        );
    }
}
