//! Exact covering-radius thresholds for k-wise independent distributions on the
//! Boolean hypercube.
//!
//! The crate has three layers:
//!
//! * exact arithmetic over big rationals: Krawtchouk polynomials, binomial
//!   pmf/tails, and a dense two-phase simplex with Bland's rule ([`poly`],
//!   [`binom`], [`lp`]);
//! * approximation-theory machinery for node systems: extended Chebyshev
//!   sequences, Lebesgue constants, quantization with exact centering, and
//!   growth/distortion bounds ([`seq`]);
//! * the certificate pipeline that proves `E_n(k, Δ) = 0` (no degree-≤k
//!   polynomial nonpositive on the central weight window has positive binomial
//!   expectation) from a single quantized Chebyshev sequence and a weighted
//!   binomial tail sum, without solving the LP ([`certify`]);
//!
//! plus a brute-force ground-truth layer for tiny hypercubes ([`oracle`]).

pub mod binom;
pub mod certify;
pub mod lp;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod seq;

pub use scalar::Rational;
