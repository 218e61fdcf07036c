//! Modulation, channel simulation and a-priori LLR initialization.
//!
//! Every symbol gets a length-q reliability vector normalized so its
//! most-likely entry is zero; larger entries mean less likely. SNR is an
//! E_b/N_0 over information bits, so the mapping to noise deviation folds in
//! both the code rate and the modulation order.

use crate::code::SymbolWord;
use crate::gf::{GfContext, GfElem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("rate {0} out of (0, 1]")]
    BadRate(f64),
    #[error("64-QAM requires q = 64, code uses q = {0}")]
    QamFieldMismatch(usize),
    #[error("word length {got} does not match expected {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// Length-q nonnegative reliability vector with the most-likely symbol at
/// exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    vals: Vec<f64>,
    ml: GfElem,
}

impl LlrVector {
    /// Normalizes raw (possibly shifted) reliabilities: subtracts the
    /// minimum entry, ties on the minimum broken toward the smallest label.
    pub fn from_raw(mut vals: Vec<f64>) -> Self {
        let ml = argmin(&vals);
        let base = vals[ml as usize];
        for v in vals.iter_mut() {
            *v -= base;
        }
        vals[ml as usize] = 0.0;
        LlrVector { vals, ml }
    }

    pub fn vals(&self) -> &[f64] {
        &self.vals
    }

    pub fn get(&self, d: GfElem) -> f64 {
        self.vals[d as usize]
    }

    /// The symbol whose entry is zero.
    pub fn ml(&self) -> GfElem {
        self.ml
    }

    pub fn q(&self) -> usize {
        self.vals.len()
    }

    /// Re-quantizes every entry in place; the zero at `ml` is preserved.
    pub fn map_in_place(&mut self, f: impl Fn(f64) -> f64) {
        for v in self.vals.iter_mut() {
            *v = f(*v);
        }
        self.vals[self.ml as usize] = 0.0;
    }
}

/// Argmin with smallest-label tie-break.
pub(crate) fn argmin(vals: &[f64]) -> GfElem {
    let mut best = 0usize;
    for (d, &v) in vals.iter().enumerate().skip(1) {
        if v < vals[best] {
            best = d;
        }
    }
    best as GfElem
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Bpsk,
    Qam64Gray,
}

impl Modulation {
    pub fn bits_per_channel_symbol(self) -> u32 {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qam64Gray => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
    /// Per-modulated-symbol Rayleigh fading with unit mean square, known to
    /// the receiver.
    RayleighUncorrelated,
}

#[derive(Debug, Clone, Copy)]
pub struct ChannelConfig {
    pub modulation: Modulation,
    pub channel: ChannelKind,
    /// E_b/N_0 in dB, information-bit energy convention.
    pub snr_db: f64,
    /// Code rate used for the E_b/N_0 -> sigma mapping.
    pub rate: f64,
    pub seed: u64,
}

/// Noise deviation per real dimension for a unit-energy constellation:
/// sigma = sqrt(1 / (2 * rate * bits_per_channel_symbol * 10^(snr_db/10))).
pub fn ebn0_to_sigma(snr_db: f64, rate: f64, bits_per_channel_symbol: u32) -> Result<f64, ChannelError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(ChannelError::BadRate(rate));
    }
    let ebn0 = 10f64.powf(snr_db / 10.0);
    Ok((1.0 / (2.0 * rate * bits_per_channel_symbol as f64 * ebn0)).sqrt())
}

/// Deterministic standard-normal source: Box-Muller over the seeded uniform
/// stream, caching the sine partner.
pub struct GaussSource<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> GaussSource<R> {
    pub fn new(rng: R) -> Self {
        GaussSource { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Transmits `word` through the configured channel and returns per-symbol
/// LLR vectors, seeding a fresh generator from `cfg.seed`.
pub fn transmit_llrs(
    word: &SymbolWord,
    cfg: &ChannelConfig,
    gf: &GfContext,
) -> Result<Vec<LlrVector>, ChannelError> {
    let mut gauss = GaussSource::new(ChaCha12Rng::seed_from_u64(cfg.seed));
    transmit_llrs_with(word, cfg, gf, &mut gauss)
}

/// As [`transmit_llrs`] but drawing from a caller-owned noise source, which
/// is what the Monte-Carlo harness uses for per-block seeding.
pub fn transmit_llrs_with<R: Rng>(
    word: &SymbolWord,
    cfg: &ChannelConfig,
    gf: &GfContext,
    gauss: &mut GaussSource<R>,
) -> Result<Vec<LlrVector>, ChannelError> {
    let q = gf.q();
    let p = gf.p();
    let sigma = ebn0_to_sigma(cfg.snr_db, cfg.rate, cfg.modulation.bits_per_channel_symbol())?;
    if cfg.modulation == Modulation::Qam64Gray && q != 64 {
        return Err(ChannelError::QamFieldMismatch(q));
    }
    let fade = |gauss: &mut GaussSource<R>| match cfg.channel {
        ChannelKind::Awgn => 1.0,
        ChannelKind::RayleighUncorrelated => {
            let (a, b) = (gauss.sample(), gauss.sample());
            ((a * a + b * b) / 2.0).sqrt()
        }
    };
    let out = word
        .0
        .iter()
        .map(|&s| match cfg.modulation {
            Modulation::Bpsk => {
                let mut y = Vec::with_capacity(p as usize);
                let mut h = Vec::with_capacity(p as usize);
                for k in 0..p {
                    let bit = s >> (p - 1 - k) & 1;
                    let hk = fade(gauss);
                    y.push(hk * bpsk_point(bit) + sigma * gauss.sample());
                    h.push(hk);
                }
                bpsk_llrs(&y, &h, sigma, p)
            }
            Modulation::Qam64Gray => {
                let (si, sq) = qam64_point(s);
                let hk = fade(gauss);
                let yi = hk * si + sigma * gauss.sample();
                let yq = hk * sq + sigma * gauss.sample();
                qam64_llrs(yi, yq, hk, sigma)
            }
        })
        .collect();
    Ok(out)
}

#[inline]
fn bpsk_point(bit: u8) -> f64 {
    1.0 - 2.0 * bit as f64
}

/// Symbol LLRs from p received BPSK values (MSB-first bit order) with known
/// per-bit fading coefficients.
pub fn bpsk_llrs(y: &[f64], fade: &[f64], sigma: f64, p: u32) -> LlrVector {
    let q = 1usize << p;
    let inv = 1.0 / (2.0 * sigma * sigma);
    // per-bit squared-distance costs, combined per candidate symbol
    let mut cost = vec![[0.0f64; 2]; p as usize];
    for k in 0..p as usize {
        for bit in 0..2u8 {
            let d = y[k] - fade[k] * bpsk_point(bit);
            cost[k][bit as usize] = d * d * inv;
        }
    }
    let vals = (0..q)
        .map(|d| {
            (0..p as usize)
                .map(|k| cost[k][(d >> (p as usize - 1 - k)) & 1])
                .sum()
        })
        .collect();
    LlrVector::from_raw(vals)
}

/// 3-bit reflected Gray code: amplitude level index -> bit label.
#[allow(dead_code)] // datapath uses the inverse table; kept as the defining sequence
const GRAY3: [usize; 8] = [0, 1, 3, 2, 6, 7, 5, 4];

/// Inverse of [`GRAY3`]: bit label -> amplitude level index.
const IGRAY3: [usize; 8] = [0, 1, 3, 2, 7, 6, 4, 5];

/// Unit-average-energy rectangular 64-QAM point for a field symbol: the high
/// 3 bits select the I level, the low 3 bits the Q level, each through the
/// reflected Gray map.
pub fn qam64_point(s: GfElem) -> (f64, f64) {
    let norm = 42f64.sqrt();
    let level = |bits: usize| (2.0 * IGRAY3[bits] as f64 - 7.0) / norm;
    (level((s >> 3) as usize), level((s & 7) as usize))
}

/// Exact per-symbol LLRs from one received 64-QAM observation with known
/// fading coefficient; noise deviation `sigma` per real dimension.
pub fn qam64_llrs(yi: f64, yq: f64, fade: f64, sigma: f64) -> LlrVector {
    let inv = 1.0 / (2.0 * sigma * sigma);
    let vals = (0..64)
        .map(|d| {
            let (si, sq) = qam64_point(d as GfElem);
            let (di, dq) = (yi - fade * si, yq - fade * sq);
            (di * di + dq * dq) * inv
        })
        .collect();
    LlrVector::from_raw(vals)
}
