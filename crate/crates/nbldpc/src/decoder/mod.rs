//! Message-passing decoders for q-ary LDPC codes.
//!
//! All decoders share one framework: messages live edge-wise in the check
//! domain (x = h * X), as a hard symbol plus a deviation-space soft vector
//! whose entry 0 is always 0. Multiplication and division by the edge
//! coefficient happen only at the variable-node boundary, so check-node
//! processing is coefficient-free. Check-node backends:
//!
//! - [`smsa::cn_smsa`]: compressed min1/min2/idx state plus LUT combining
//!   (one pass for SMSA-1, two passes for SMSA-2)
//! - [`trellis::cn_emsa`] / [`trellis::cn_mma`]: exact forward-backward
//!   min-sum / min-max convolution
//! - [`qspa::cn_qspa`]: probability-domain group convolution via the
//!   Walsh-Hadamard transform
//! - [`oracle::cn_oracle`]: brute-force configuration enumeration, the
//!   verification reference (small rows only)

pub mod fixed;
pub mod oracle;
pub mod qspa;
pub mod smsa;
pub mod trellis;

use crate::channel::{argmin, LlrVector};
use crate::code::ParityCheckMatrix;
use crate::complexity::OpCounter;
use crate::gf::GfElem;
pub use fixed::FixedPointFormat;
pub use smsa::{build_lut, Lut};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CnError {
    #[error("check-node rows need degree >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("oracle enumeration refused: d_c {dc} or q {q} above guard (d_c <= 6, q <= 16)")]
    OracleGuard { dc: usize, q: usize },
    #[error("probability vector sums to zero")]
    ZeroSum,
}

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("llr count {got} does not match code length {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("scaling factor {0} out of (0, 1]")]
    BadScale(f64),
    #[error("kappa_max must be >= 1")]
    BadIterationCap,
    #[error(transparent)]
    Cn(#[from] CnError),
}

/// Variable-to-check message: hard symbol plus deviation-space soft vector.
#[derive(Debug, Clone, PartialEq)]
pub struct V2cMessage {
    pub hard: GfElem,
    pub soft: Vec<f64>,
}

/// Check-to-variable message, same layout.
#[derive(Debug, Clone, PartialEq)]
pub struct C2vMessage {
    pub hard: GfElem,
    pub soft: Vec<f64>,
}

/// Deviation space -> absolute space: abs[x] = dev[x ^ hard].
pub fn to_absolute(dev: &[f64], hard: GfElem) -> Vec<f64> {
    (0..dev.len()).map(|x| dev[x ^ hard as usize]).collect()
}

/// Absolute space -> deviation space: dev[delta] = abs[delta ^ hard].
/// Inverse of [`to_absolute`] (the reindexing is an involution).
pub fn to_deviation(abs: &[f64], hard: GfElem) -> Vec<f64> {
    to_absolute(abs, hard)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Qspa,
    Emsa,
    Mma,
    Smsa1,
    Smsa2,
    /// Exact check-node enumeration; test/reference use, small codes only.
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qspa => "qspa",
            Algorithm::Emsa => "emsa",
            Algorithm::Mma => "mma",
            Algorithm::Smsa1 => "smsa1",
            Algorithm::Smsa2 => "smsa2",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arithmetic {
    Float64,
    FixedPoint(FixedPointFormat),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub algorithm: Algorithm,
    /// Check-node output scaling factor, 0 < c <= 1. Ignored by QSPA.
    pub c: f64,
    pub kappa_max: usize,
    pub arithmetic: Arithmetic,
}

impl DecoderConfig {
    pub fn new(algorithm: Algorithm, c: f64, kappa_max: usize) -> Self {
        DecoderConfig { algorithm, c, kappa_max, arithmetic: Arithmetic::Float64 }
    }

    pub fn fixed_point(mut self, fmt: FixedPointFormat) -> Self {
        self.arithmetic = Arithmetic::FixedPoint(fmt);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub word: Vec<GfElem>,
    pub converged: bool,
    pub iterations_used: usize,
    /// Number of unsatisfied checks before each iteration (entry 0 is the
    /// channel hard decision).
    pub syndrome_weight_trace: Vec<usize>,
}

/// Builds the initial V2C messages, row-major to match `h.row(i)`:
/// a = h * z_j and soft[h * delta] = lambda_j(delta ^ z_j).
pub fn init_messages(llrs: &[LlrVector], h: &ParityCheckMatrix) -> Vec<Vec<V2cMessage>> {
    let gf = h.gf();
    let q = gf.q();
    (0..h.m())
        .map(|i| {
            h.row(i)
                .iter()
                .map(|&(j, hc)| {
                    let z = llrs[j].ml();
                    let mut soft = vec![0.0; q];
                    for delta in 0..q as u16 {
                        soft[gf.mul(hc, delta as GfElem) as usize] =
                            llrs[j].get(delta as GfElem ^ z);
                    }
                    V2cMessage { hard: gf.mul(hc, z), soft }
                })
                .collect()
        })
        .collect()
}

/// Variable-node update for one column: combines the channel LLR with the
/// incoming C2V messages, returning the new V2C messages for every edge of
/// the column plus the tentative decision.
///
/// `incoming` pairs each edge's coefficient with its C2V message, in the
/// same order as `h.col(j)`.
pub fn vn_process(
    llr: &LlrVector,
    incoming: &[(GfElem, &C2vMessage)],
    gf: &crate::gf::GfContext,
    quant: Option<FixedPointFormat>,
) -> (Vec<V2cMessage>, GfElem) {
    let q = gf.q();
    // lambda_hat(d) = lambda(d) + sum of beta_i(h_i * d): the full sum over
    // M_j used for the tentative decision; extrinsic sums subtract one term.
    let mut total = vec![0.0; q];
    for d in 0..q {
        let mut acc = llr.get(d as GfElem);
        for &(hc, c2v) in incoming {
            acc += c2v.soft[(gf.mul(hc, d as GfElem) ^ c2v.hard) as usize];
        }
        total[d] = acc;
    }
    let z = argmin(&total);
    let out = incoming
        .iter()
        .map(|&(hc, c2v)| {
            let mut abs = vec![0.0; q];
            for d in 0..q {
                let x = gf.mul(hc, d as GfElem) as usize;
                abs[x] = total[d] - c2v.soft[x ^ c2v.hard as usize];
            }
            let hard = argmin(&abs);
            let base = abs[hard as usize];
            let mut soft: Vec<f64> = (0..q).map(|delta| abs[delta ^ hard as usize] - base).collect();
            soft[0] = 0.0;
            if let Some(fmt) = quant {
                for v in soft.iter_mut() {
                    *v = fmt.quantize(*v);
                }
            }
            V2cMessage { hard, soft }
        })
        .collect();
    (out, z)
}

/// Runs check-node processing for one row with the configured backend.
pub fn cn_process(
    inputs: &[V2cMessage],
    cfg: &DecoderConfig,
    lut: &Lut,
    ctr: &mut OpCounter,
) -> Result<Vec<C2vMessage>, CnError> {
    let quant = match cfg.arithmetic {
        Arithmetic::Float64 => None,
        Arithmetic::FixedPoint(fmt) => Some(fmt),
    };
    let mut out = match cfg.algorithm {
        Algorithm::Smsa1 => smsa::cn_smsa(inputs, lut, cfg.c, false, ctr)?,
        Algorithm::Smsa2 => smsa::cn_smsa(inputs, lut, cfg.c, true, ctr)?,
        Algorithm::Emsa => trellis::cn_emsa(inputs, cfg.c, ctr)?,
        Algorithm::Mma => trellis::cn_mma(inputs, cfg.c, ctr)?,
        Algorithm::Qspa => qspa::cn_qspa_llr(inputs)?,
        Algorithm::Oracle => {
            let abs = oracle::cn_oracle(inputs, oracle::OracleMode::Sum, None, false)?;
            let a_sum = inputs.iter().fold(0, |acc, m| acc ^ m.hard);
            abs.into_iter()
                .zip(inputs)
                .map(|(b_abs, inp)| {
                    let hard = a_sum ^ inp.hard;
                    let mut soft = to_deviation(&b_abs, hard);
                    for v in soft.iter_mut() {
                        *v *= cfg.c;
                    }
                    soft[0] = 0.0;
                    C2vMessage { hard, soft }
                })
                .collect()
        }
    };
    if let Some(fmt) = quant {
        for msg in out.iter_mut() {
            for v in msg.soft.iter_mut() {
                *v = fmt.quantize(*v);
            }
        }
    }
    Ok(out)
}

/// Full iterative decode: parity check, iteration cap, CN pass, VN pass.
/// A failed decode is a normal outcome with `converged == false`.
pub fn decode(
    h: &ParityCheckMatrix,
    llrs: &[LlrVector],
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    decode_counted(h, llrs, cfg, &mut OpCounter::Off)
}

/// As [`decode`], accumulating datapath operation counts when `ctr` is on.
pub fn decode_counted(
    h: &ParityCheckMatrix,
    llrs: &[LlrVector],
    cfg: &DecoderConfig,
    ctr: &mut OpCounter,
) -> Result<DecodeOutcome, DecodeError> {
    if llrs.len() != h.n() {
        return Err(DecodeError::LengthMismatch { got: llrs.len(), want: h.n() });
    }
    if !(cfg.c > 0.0 && cfg.c <= 1.0) {
        return Err(DecodeError::BadScale(cfg.c));
    }
    if cfg.kappa_max < 1 {
        return Err(DecodeError::BadIterationCap);
    }
    for i in 0..h.m() {
        if h.row(i).len() < 2 {
            return Err(CnError::DegreeTooSmall(h.row(i).len()).into());
        }
    }
    let gf = h.gf();
    let quant = match cfg.arithmetic {
        Arithmetic::Float64 => None,
        Arithmetic::FixedPoint(fmt) => Some(fmt),
    };
    let llrs: Vec<LlrVector> = match quant {
        None => llrs.to_vec(),
        Some(fmt) => llrs
            .iter()
            .map(|l| {
                let mut l = l.clone();
                l.map_in_place(|v| fmt.quantize(v));
                l
            })
            .collect(),
    };
    let lut = build_lut(gf);
    let mut z: Vec<GfElem> = llrs.iter().map(|l| l.ml()).collect();
    let mut v2c = init_messages(&llrs, h);
    let mut c2v: Vec<Vec<C2vMessage>> = Vec::with_capacity(h.m());
    let mut trace = Vec::new();

    for kappa in 0..=cfg.kappa_max {
        let weight = h
            .syndrome(&crate::code::SymbolWord(z.clone()))
            .expect("length checked")
            .iter()
            .filter(|&&s| s != 0)
            .count();
        trace.push(weight);
        if weight == 0 {
            return Ok(DecodeOutcome {
                word: z,
                converged: true,
                iterations_used: kappa,
                syndrome_weight_trace: trace,
            });
        }
        if kappa == cfg.kappa_max {
            break;
        }
        // CN processing
        c2v.clear();
        for row in &v2c {
            c2v.push(cn_process(row, cfg, &lut, ctr)?);
        }
        // VN processing; column edges map back into the row-major message
        // layout through each row's edge position.
        for (j, (llr, zj)) in llrs.iter().zip(z.iter_mut()).enumerate() {
            let incoming: Vec<(GfElem, &C2vMessage)> = h
                .col(j)
                .iter()
                .map(|&(i, hc)| {
                    let pos = h.row(i).iter().position(|&(jj, _)| jj == j).expect("edge");
                    (hc, &c2v[i][pos])
                })
                .collect();
            let (updated, new_z) = vn_process(llr, &incoming, gf, quant);
            *zj = new_z;
            for (&(i, _), msg) in h.col(j).iter().zip(updated) {
                let pos = h.row(i).iter().position(|&(jj, _)| jj == j).expect("edge");
                v2c[i][pos] = msg;
            }
        }
    }
    Ok(DecodeOutcome {
        word: z,
        converged: false,
        iterations_used: cfg.kappa_max,
        syndrome_weight_trace: trace,
    })
}
