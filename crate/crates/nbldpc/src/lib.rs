//! Non-binary LDPC decoding toolkit.
//!
//! Decodes q-ary LDPC codes over GF(2^p) with a family of message-passing
//! algorithms: the q-ary sum-product algorithm (QSPA, Walsh-Hadamard
//! realization), the extended min-sum algorithm (EMSA, forward-backward
//! realization), the min-max algorithm (MMA), and the simplified min-sum
//! algorithm in its one-step (SMSA-1) and two-step (SMSA-2) variants built
//! on compressed min1/min2/idx check-node state and a pairwise-decomposition
//! look-up table. A brute-force check-node enumerator is included as a
//! verification oracle, and a fixed-point arithmetic mode models quantized
//! hardware datapaths.
//!
//! The [`sim`] module provides a Monte-Carlo harness (BPSK / 64-QAM over
//! AWGN or uncorrelated Rayleigh fading) producing BER/BLER/average-iteration
//! curves, and [`complexity`] provides a closed-form operation/memory model
//! cross-checked by live instrumentation counters.

pub mod alist;
pub mod channel;
pub mod code;
pub mod complexity;
pub mod decoder;
pub mod gf;
pub mod sim;
