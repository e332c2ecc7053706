//! Binomial pmf and tails, exact and in the log domain, plus the two
//! closed-form estimates the certificates consume: the simplified
//! normal-approximation window bounds and the Hoeffding tail bound.
//!
//! The log-domain pmf is written so that no intermediate quantity grows with
//! `n log n`: the usual log-gamma difference loses ~`n ln n · ε` absolute
//! accuracy to rounding, which is fatal around `n ≈ 10^6` and beyond. Instead
//! the central expansion keeps only the exponent `-2d²/n + O(d⁴/n³)` and
//! Stirling tail corrections, all of which are small and cancellation-free.

use crate::scalar::{binomial, pow2, rational_ln, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BinomError {
    #[error("weight {w} out of range [0:{n}]")]
    OutOfRange { w: u64, n: u64 },
    #[error("weight function returned a negative value at w = {w}")]
    NegativeWeight { w: u64 },
    #[error("w = {w} is outside the normal-approximation window for n = {n}; use the Hoeffding bound")]
    OutsideWindow { w: u64, n: u64 },
    #[error("n must be at least {min}")]
    TooSmall { min: u64 },
}

/// `B_n(w) = C(n,w) / 2^n`, exactly.
pub fn exact_pmf(n: u64, w: u64) -> Result<Rational, BinomError> {
    if w > n {
        return Err(BinomError::OutOfRange { w, n });
    }
    Ok(Rational::new(binomial(n, w), pow2(n)))
}

/// `Σ_{w > w0} B_n(w) · weight(w)`, exactly, by running-ratio updates of
/// `C(n,w)`. Errors if the weight function goes negative (certificate sums
/// are nonnegative by construction).
pub fn exact_upper_tail<F>(n: u64, w0: u64, weight: F) -> Result<Rational, BinomError>
where
    F: Fn(u64) -> Rational,
{
    if w0 >= n {
        return Ok(Rational::zero());
    }
    let start = w0 + 1;
    let mut coeff = binomial(n, start);
    let mut acc = Rational::zero();
    for w in start..=n {
        let wt = weight(w);
        if wt.is_negative() {
            return Err(BinomError::NegativeWeight { w });
        }
        acc += wt * Rational::from(coeff.clone());
        if w < n {
            // C(n,w+1) = C(n,w) (n-w)/(w+1)
            coeff = coeff * BigInt::from(n - w) / BigInt::from(w + 1);
        }
    }
    Ok(acc / Rational::from(pow2(n)))
}

/// Stirling tail `S(x)` with truncation error below 1e-15 for `x ≥ 16`.
fn stirling_tail(x: f64) -> f64 {
    let x2 = x * x;
    let inv = 1.0 / x;
    inv * (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2)
}

const EDGE_CUTOFF: u64 = 64;

/// Natural log of `B_n(w)`. Absolute error is ~1e-12 wherever the pmf carries
/// mass; in the extreme tails of very large `n` (beyond `2^53`-scale values of
/// `n ln 2`) the error can reach the rounding of `n ln 2` itself, which is
/// irrelevant for every sum these values feed.
pub fn ln_pmf(n: u64, w: u64) -> Result<f64, BinomError> {
    if w > n {
        return Err(BinomError::OutOfRange { w, n });
    }
    let m = w.min(n - w);
    if m <= EDGE_CUTOFF || n <= 4 * EDGE_CUTOFF {
        // ln C(n,m) - n ln 2 term by term; magnitudes stay ~ m ln n.
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        for i in 0..m {
            let term = ((n - i) as f64).ln() - ((i + 1) as f64).ln();
            let y = term - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        return Ok(acc - n as f64 * std::f64::consts::LN_2);
    }
    // central expansion around d = w - n/2
    let two_d = 2.0 * w as f64 - n as f64; // exact for n < 2^53
    let nf = n as f64;
    let r = two_d / nf;
    let g = (0.5 * nf + 0.5) * (-r * r).ln_1p() + two_d * r.atanh();
    let wf = w as f64;
    Ok(-0.5 * nf.ln() + std::f64::consts::LN_2 - 0.5 * (2.0 * std::f64::consts::PI).ln() - g
        + stirling_tail(nf)
        - stirling_tail(wf)
        - stirling_tail(nf - wf))
}

/// Paper-simplified normal-approximation window bounds:
/// `(1/√(2n)) e^{-2d²/n} ≤ B_n(w) ≤ (1/√n) e^{-2d²/n}`, valid inside
/// `|d| ≤ n^{2/3} / √(ln n)`. Returns `(lower, upper)`.
pub fn dml_bounds(n: u64, w: u64) -> Result<(f64, f64), BinomError> {
    if n < 2 {
        return Err(BinomError::TooSmall { min: 2 });
    }
    if w > n {
        return Err(BinomError::OutOfRange { w, n });
    }
    let d = w as f64 - n as f64 / 2.0;
    if d.abs() > dml_window_halfwidth(n) {
        return Err(BinomError::OutsideWindow { w, n });
    }
    let e = (-2.0 * d * d / n as f64).exp();
    Ok((e / (2.0 * n as f64).sqrt(), e / (n as f64).sqrt()))
}

/// Half-width `n^{2/3} / √(ln n)` of the normal-approximation validity window.
pub fn dml_window_halfwidth(n: u64) -> f64 {
    let nf = n as f64;
    nf.powf(2.0 / 3.0) / nf.ln().sqrt()
}

/// `B_n(w) ≤ e^{-2 (w - n/2)² / n}` for every `w`.
pub fn hoeffding_bound(n: u64, w: u64) -> f64 {
    let d = w as f64 - n as f64 / 2.0;
    (-2.0 * d * d / n as f64).exp()
}

/// Checks the window bounds against the true pmf over the whole validity
/// window of a given `n` (log-domain). The window bounds only hold for large
/// enough `n`; this measures rather than assumes.
pub fn dml_sandwich_holds(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let half = dml_window_halfwidth(n).floor() as i64;
    let exact = n <= 2000;
    let center = n as f64 / 2.0;
    let mut w_set: Vec<u64> = Vec::new();
    for d in 0..=half {
        for w in [(n / 2).saturating_sub(d as u64), (n + 1) / 2 + d as u64] {
            if w <= n {
                w_set.push(w);
            }
        }
    }
    w_set.sort_unstable();
    w_set.dedup();
    for w in w_set {
        let d = w as f64 - center;
        if d.abs() > dml_window_halfwidth(n) {
            continue;
        }
        let lp = if exact {
            rational_ln(&exact_pmf(n, w).unwrap())
        } else {
            ln_pmf(n, w).unwrap()
        };
        let expo = -2.0 * d * d / n as f64;
        let lo = expo - 0.5 * (2.0 * n as f64).ln();
        let hi = expo - 0.5 * (n as f64).ln();
        if lp < lo || lp > hi {
            return false;
        }
    }
    true
}

/// Arithmetic mode for [`BinomialModel`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomMode {
    Exact,
    LogFloat,
}

/// Scalar produced by a [`BinomialModel`]: exact rational, or the natural log
/// of the value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Log(f64),
}

impl Value {
    pub fn ln(&self) -> f64 {
        match self {
            Value::Exact(r) => {
                if r.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    rational_ln(r)
                }
            }
            Value::Log(l) => *l,
        }
    }
}

/// Binomial distribution `B_n` with a chosen arithmetic mode.
#[derive(Debug, Clone)]
pub struct BinomialModel {
    n: u64,
    mode: BinomMode,
}

/// Default threshold above which [`BinomialModel::auto`] switches to the log
/// domain; exact tails beyond this are slow without adding certificate value.
pub const EXACT_DEFAULT_LIMIT: u64 = 5000;

impl BinomialModel {
    pub fn new(n: u64, mode: BinomMode) -> Self {
        Self { n, mode }
    }

    /// Exact mode up to [`EXACT_DEFAULT_LIMIT`], log mode beyond.
    pub fn auto(n: u64) -> Self {
        let mode = if n > EXACT_DEFAULT_LIMIT {
            BinomMode::LogFloat
        } else {
            BinomMode::Exact
        };
        Self { n, mode }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mode(&self) -> BinomMode {
        self.mode
    }

    pub fn pmf(&self, w: u64) -> Result<Value, BinomError> {
        match self.mode {
            BinomMode::Exact => Ok(Value::Exact(exact_pmf(self.n, w)?)),
            BinomMode::LogFloat => Ok(Value::Log(ln_pmf(self.n, w)?)),
        }
    }

    /// `Σ_{w > w0} B_n(w) weight(w)`. The weight defaults to 1 and must be
    /// nonnegative. In log mode the sum runs until terms stop contributing
    /// at relative 1e-30.
    pub fn upper_tail(
        &self,
        w0: u64,
        weight: Option<&dyn Fn(u64) -> Rational>,
    ) -> Result<Value, BinomError> {
        match self.mode {
            BinomMode::Exact => {
                let tail = match weight {
                    Some(f) => exact_upper_tail(self.n, w0, f)?,
                    None => exact_upper_tail(self.n, w0, |_| Rational::one())?,
                };
                Ok(Value::Exact(tail))
            }
            BinomMode::LogFloat => {
                if w0 >= self.n {
                    return Ok(Value::Log(f64::NEG_INFINITY));
                }
                let mut anchor = f64::NEG_INFINITY;
                let mut acc = 0.0f64; // Σ exp(ln term - anchor)
                let mut past_mode = false;
                for w in (w0 + 1)..=self.n {
                    let lw = match weight {
                        Some(f) => {
                            let v = f(w);
                            if v.is_negative() {
                                return Err(BinomError::NegativeWeight { w });
                            }
                            if v.is_zero() {
                                continue;
                            }
                            rational_ln(&v)
                        }
                        None => 0.0,
                    };
                    let lt = ln_pmf(self.n, w)? + lw;
                    if anchor == f64::NEG_INFINITY {
                        anchor = lt;
                    }
                    let rel = (lt - anchor).exp();
                    acc += rel;
                    if rel < 1e-30 * acc {
                        if past_mode {
                            break;
                        }
                    } else {
                        past_mode = w as f64 > self.n as f64 / 2.0;
                    }
                }
                Ok(Value::Log(anchor + acc.ln()))
            }
        }
    }
}
