//! Unsigned fixed-point quantization of stored sub-messages.
//!
//! Storage is quantized to the grid {0, 2^-F, ..., 2^I - 2^-F}; arithmetic
//! inside a node runs at full precision and saturates on write-back.

/// Unsigned fixed-point storage format with I integer and F fraction bits,
/// w = I + F bits per sub-message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointFormat {
    pub int_bits: u32,
    pub frac_bits: u32,
}

impl FixedPointFormat {
    pub fn new(int_bits: u32, frac_bits: u32) -> Self {
        FixedPointFormat { int_bits, frac_bits }
    }

    /// Total bits per stored sub-message.
    pub fn width(&self) -> u32 {
        self.int_bits + self.frac_bits
    }

    /// Largest representable value, 2^I - 2^-F.
    pub fn max_value(&self) -> f64 {
        (1u64 << self.int_bits) as f64 - self.step()
    }

    fn step(&self) -> f64 {
        1.0 / (1u64 << self.frac_bits) as f64
    }

    /// Round-to-nearest grid value, ties away from zero, saturating to
    /// [0, 2^I - 2^-F]; negative inputs clamp to 0.
    pub fn quantize(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let ticks = (x * (1u64 << self.frac_bits) as f64).round();
        let cap = ((1u64 << self.width()) - 1) as f64;
        ticks.min(cap) * self.step()
    }
}

impl std::fmt::Display for FixedPointFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I={},F={}", self.int_bits, self.frac_bits)
    }
}
