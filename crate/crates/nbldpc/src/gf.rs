//! Arithmetic in GF(2^p), 2 <= p <= 8, with decimal element labeling.
//!
//! Elements are labeled 0..q-1 by the integer value of their binary
//! polynomial representation, so addition is bitwise XOR. Multiplication
//! goes through log/antilog tables built from a primitive polynomial.

use thiserror::Error;

/// A field element label. Always < q <= 256.
pub type GfElem = u8;

/// Default primitive polynomials per extension degree, minimal-weight
/// conventions (index 0 holds p = 2).
const DEFAULT_PRIM_POLYS: [u32; 7] = [
    0b111,       // p=2: x^2 + x + 1
    0b1011,      // p=3: x^3 + x + 1
    0b10011,     // p=4: x^4 + x + 1
    0b100101,    // p=5: x^5 + x^2 + 1
    0b1000011,   // p=6: x^6 + x + 1
    0b10001001,  // p=7: x^7 + x^3 + 1
    0b100011101, // p=8: x^8 + x^4 + x^3 + x^2 + 1
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("extension degree p={0} out of supported range 2..=8")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#b} does not have degree {p}")]
    WrongDegree { poly: u32, p: u32 },
    #[error("polynomial {poly:#b} is not primitive over GF(2)")]
    NotPrimitive { poly: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// Immutable arithmetic context for GF(2^p).
#[derive(Debug, Clone)]
pub struct GfContext {
    p: u32,
    q: usize,
    prim_poly: u32,
    /// log[d] for nonzero d: exponent e with x^e = d. log[0] is unused.
    log: Vec<u8>,
    /// antilog[e] = x^e for e in 0..q-1.
    antilog: Vec<u8>,
}

impl GfContext {
    /// Builds the field tables. `prim_poly` defaults to a fixed conventional
    /// polynomial for the given degree; a supplied polynomial must be
    /// primitive of degree exactly `p`.
    pub fn new(p: u32, prim_poly: Option<u32>) -> Result<Self, GfError> {
        if !(2..=8).contains(&p) {
            return Err(GfError::DegreeOutOfRange(p));
        }
        let poly = prim_poly.unwrap_or(DEFAULT_PRIM_POLYS[(p - 2) as usize]);
        if poly >> p != 1 {
            return Err(GfError::WrongDegree { poly, p });
        }
        let q = 1usize << p;
        let mut log = vec![0u8; q];
        let mut antilog = vec![0u8; q - 1];
        let mut seen = vec![false; q];
        let mut x: u32 = 1;
        for e in 0..q - 1 {
            if x == 0 || seen[x as usize] {
                // the powers of x cycle early (or die): poly is not primitive
                return Err(GfError::NotPrimitive { poly });
            }
            seen[x as usize] = true;
            antilog[e] = x as u8;
            log[x as usize] = e as u8;
            x <<= 1;
            if x >> p == 1 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(GfError::NotPrimitive { poly });
        }
        Ok(GfContext { p, q, prim_poly: poly, log, antilog })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Field order q = 2^p.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn prim_poly(&self) -> u32 {
        self.prim_poly
    }

    /// Addition: bitwise XOR of labels.
    #[inline]
    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a == 0 || b == 0 {
            return 0;
        }
        let mut e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        if e >= self.q - 1 {
            e -= self.q - 1;
        }
        self.antilog[e]
    }

    pub fn inv(&self, a: GfElem) -> Result<GfElem, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        let e = self.log[a as usize] as usize;
        Ok(self.antilog[(self.q - 1 - e) % (self.q - 1)])
    }

    /// x^e, handy for constructing test vectors.
    pub fn antilog(&self, e: usize) -> GfElem {
        self.antilog[e % (self.q - 1)]
    }
}
