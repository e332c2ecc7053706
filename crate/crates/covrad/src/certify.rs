//! Certificates that prove `E_n(k, Δ) = 0` without solving the LP: a length
//! `k+1` integer node sequence centered at `n/2` with small Lebesgue constant
//! and large minimum gap turns the question into a single weighted binomial
//! tail comparison `ν ≤ t · B_n(n/2 + R + p)`. Quantized extended Chebyshev
//! sequences supply such nodes; every geometric and analytic requirement is
//! evaluated as a literal inequality at the concrete `(n, k)` and recorded in
//! the certificate, so asymptotic existence arguments never enter the verdict.

use crate::binom::{self, BinomError};
use crate::scalar::{rational_from_f64, rational_ln, Rational};
use crate::seq::{extended_chebyshev, lebesgue_constant, quantize_offsets, PointSeq};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CertifyError {
    #[error("parameter domain violation: {0}")]
    Domain(String),
    #[error("sequence precondition failed: {0}")]
    Precondition(String),
    #[error("internal certificate inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Binom(#[from] BinomError),
}

/// Source of the Lebesgue constant used in the tail comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    /// Closed-form bound `(4/π) log(k+1) + 2` (valid once the distortion
    /// budget holds); reproduces the analytic pipeline exactly.
    PaperBound,
    /// Numerically measured `Λ(W)`; tighter, carries grid/refine tolerance.
    Measured,
}

/// How the tail sum ν is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NuMode {
    /// Exact big-rational summation (practical for n up to a few thousand).
    ExactSum,
    /// Log-domain summation with a truncation bound added on top, so the
    /// reported ν never undercounts.
    LogFloatSum,
    /// The closed-form estimate chain `ν ≤ a(k)(1+√(αk))e^{-ck}` against
    /// `(b(k)/√2) e^{-2(β+ε)² αk}`, with its own validity conditions.
    ClosedFormEstimate,
}

pub const PAPER_ALPHA: f64 = 0.93;
pub const PAPER_BETA: f64 = 0.5204;
pub const PAPER_EPSILON: f64 = 0.004;

/// Exact-sum tails beyond this are refused; they add cost, not value.
pub const EXACT_SUM_LIMIT: u64 = 50_000;

#[derive(Debug, Clone, Serialize)]
pub struct CertificateParams {
    pub n: u64,
    pub k: u64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub lambda_mode: LambdaMode,
    pub nu_mode: NuMode,
}

impl CertificateParams {
    pub fn new(
        n: u64,
        k: u64,
        alpha: f64,
        beta: f64,
        epsilon: f64,
        lambda_mode: LambdaMode,
        nu_mode: NuMode,
    ) -> Result<Self, CertifyError> {
        if n < 2 || k < 1 {
            return Err(CertifyError::Domain(format!("need n >= 2, k >= 1 (n={n}, k={k})")));
        }
        if !(alpha > 0.0) || !(beta > 0.0) || !(epsilon > 0.0) {
            return Err(CertifyError::Domain(
                "alpha, beta, epsilon must be positive".into(),
            ));
        }
        if beta + epsilon >= 1.0 {
            return Err(CertifyError::Domain(format!(
                "beta + epsilon must stay below 1, got {}",
                beta + epsilon
            )));
        }
        Ok(Self {
            n,
            k,
            alpha,
            beta,
            epsilon,
            lambda_mode,
            nu_mode,
        })
    }

    /// Headline constants: α = 0.93, β = 0.5204, ε = 0.004, paper-bound Λ,
    /// log-domain ν.
    pub fn paper_defaults(n: u64, k: u64) -> Result<Self, CertifyError> {
        Self::new(
            n,
            k,
            PAPER_ALPHA,
            PAPER_BETA,
            PAPER_EPSILON,
            LambdaMode::PaperBound,
            NuMode::LogFloatSum,
        )
    }
}

/// One recorded inequality `lhs ≤ rhs`; `slack = rhs - lhs`.
#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl Condition {
    fn le(name: &str, lhs: f64, rhs: f64) -> Self {
        Condition {
            name: name.to_string(),
            passed: lhs <= rhs,
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified { reason: String },
}

/// Full record of a certificate run: inputs, the constructed sequence, every
/// intermediate quantity, condition outcomes, and the verdict. Values that
/// can be astronomically small are carried as natural logs; a `None` log
/// means the quantity is exactly zero (empty tail).
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub params: CertificateParams,
    pub variant: String,
    pub delta: f64,
    pub sequence: Option<Vec<u64>>,
    pub min_gap: Option<f64>,
    pub offset_p: Option<u64>,
    pub radius: Option<f64>,
    pub lambda_ln: Option<f64>,
    pub nu_ln: Option<f64>,
    pub nu_provenance: String,
    pub rhs_ln: Option<f64>,
    pub rhs_provenance: String,
    pub conditions: Vec<Condition>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, Verdict::Certified)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Canonical JSON value (sorted keys) for reports.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }

    fn not_certified(mut self, reason: &str) -> Certificate {
        self.verdict = Verdict::NotCertified {
            reason: reason.to_string(),
        };
        self
    }
}

/// `h(β, ε) = (log(2+ε) - log β) / (2 (1 - (β+ε)²))`: the infimum of α for
/// which the tail decay beats the center pmf asymptotically.
pub fn h_function(beta: f64, epsilon: f64) -> Result<f64, CertifyError> {
    if !(beta > 0.0) || epsilon < 0.0 {
        return Err(CertifyError::Domain("need beta > 0 and epsilon >= 0".into()));
    }
    if beta + epsilon >= 1.0 {
        return Err(CertifyError::Domain(format!(
            "beta + epsilon = {} >= 1 makes the denominator nonpositive",
            beta + epsilon
        )));
    }
    let s = beta + epsilon;
    Ok(((2.0 + epsilon).ln() - beta.ln()) / (2.0 * (1.0 - s * s)))
}

/// Equally-spaced analogue of [`h_function`]: the doubled growth factor turns
/// `2+ε` into `4+ε`.
pub fn h_function_equispaced(beta: f64, epsilon: f64) -> Result<f64, CertifyError> {
    if !(beta > 0.0) || epsilon < 0.0 || beta + epsilon >= 1.0 {
        return Err(CertifyError::Domain("need beta > 0, epsilon >= 0, beta+epsilon < 1".into()));
    }
    let s = beta + epsilon;
    Ok(((4.0 + epsilon).ln() - beta.ln()) / (2.0 * (1.0 - s * s)))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlphaStar {
    pub alpha_star: f64,
    pub beta: f64,
    pub epsilon: f64,
}

/// Minimizes `h` over `{β, ε ≥ 0 : β + ε < 1}` by grid scan plus golden
/// refinement in each coordinate. The minimum sits on the ε = 0 edge.
pub fn optimize_alpha_star(grid_step: f64, refine_tol: f64) -> AlphaStar {
    let step = grid_step.clamp(1e-6, 0.1);
    let mut best = (f64::INFINITY, 0.5, 0.0);
    let mut beta = step;
    while beta < 1.0 {
        let mut eps = 0.0;
        while beta + eps < 1.0 - 1e-12 {
            if let Ok(h) = h_function(beta, eps) {
                if h < best.0 {
                    best = (h, beta, eps);
                }
            }
            eps += step;
        }
        beta += step;
    }
    // coordinate refinement
    let (_, mut beta, mut eps) = best;
    for _ in 0..3 {
        beta = golden_min(
            |b| h_function(b, eps).unwrap_or(f64::INFINITY),
            (beta - step).max(1e-9),
            (beta + step).min(1.0 - eps - 1e-12),
            refine_tol,
        );
        eps = golden_min(
            |e| h_function(beta, e).unwrap_or(f64::INFINITY),
            (eps - step).max(0.0),
            (eps + step).min(1.0 - beta - 1e-12),
            refine_tol,
        );
    }
    AlphaStar {
        alpha_star: h_function(beta, eps).expect("refined point in domain"),
        beta,
        epsilon: eps,
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut it = 0;
    while b - a > tol && it < 300 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        it += 1;
    }
    0.5 * (a + b)
}

/// Classical covering-radius upper bound from dual distance `d`:
/// `n/2 - √(s(n-s)) + s^{1/6} √(n-s)` for `d = 2s`, and the shifted variant
/// for odd `d = 2s+1`.
pub fn tietavainen_radius_bound(n: u64, d: u64) -> Result<f64, CertifyError> {
    if d < 2 || d > n {
        return Err(CertifyError::Domain(format!("need 2 <= d <= n, got d={d}, n={n}")));
    }
    let nf = n as f64;
    Ok(if d % 2 == 0 {
        let s = (d / 2) as f64;
        nf / 2.0 - (s * (nf - s)).sqrt() + s.powf(1.0 / 6.0) * (nf - s).sqrt()
    } else {
        let s = (d / 2) as f64;
        nf / 2.0 - (s * (nf - 1.0 - s)).sqrt() + s.powf(1.0 / 6.0) * (nf - 1.0 - s).sqrt() - 0.5
    })
}

/// Lower bound on the window threshold `Δ*_n(k)` implied by the classical
/// radius bound: `√(s(n-s)) - s^{1/6}√(n-s)` for odd `k = 2s-1`, plus-half
/// variant for even `k = 2s`. The strict form holds whenever `n/2` minus the
/// bound is not an exact breakpoint (it is exact only for k ≤ 2, where the
/// bound is 0 or 1/2).
pub fn delta_star_lower_bound(n: u64, k: u64) -> Result<f64, CertifyError> {
    if k < 1 || k >= n {
        return Err(CertifyError::Domain(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let nf = n as f64;
    Ok(if k % 2 == 1 {
        let s = ((k + 1) / 2) as f64;
        (s * (nf - s)).sqrt() - s.powf(1.0 / 6.0) * (nf - s).sqrt()
    } else {
        let s = (k / 2) as f64;
        (s * (nf - 1.0 - s)).sqrt() - s.powf(1.0 / 6.0) * (nf - 1.0 - s).sqrt() + 0.5
    })
}

/// Mirrored window formula with the correction term added: an upper envelope
/// for `Δ*_n(k)` (verified over the acceptance grid rather than proved).
pub fn delta_star_upper_window(n: u64, k: u64) -> Result<f64, CertifyError> {
    if k < 1 || k >= n {
        return Err(CertifyError::Domain(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let nf = n as f64;
    Ok(if k % 2 == 1 {
        let s = ((k + 1) / 2) as f64;
        (s * (nf - s)).sqrt() + s.powf(1.0 / 6.0) * (nf - s).sqrt()
    } else {
        let s = (k / 2) as f64;
        (s * (nf - 1.0 - s)).sqrt() + s.powf(1.0 / 6.0) * (nf - 1.0 - s).sqrt() + 0.5
    })
}

/// Covering-radius lower bound for dual-distance-(2s+1) codes of length
/// `n = 2^m - 1`: `n/2 - (s-1)√(n+1) - 1/2`. Formula evaluation only.
pub fn bch_lower_bound(m: u32, s: u64) -> Result<f64, CertifyError> {
    if m < 2 {
        return Err(CertifyError::Domain("need m >= 2".into()));
    }
    let n = (1u64 << m) - 1;
    let limit = 0.5 * ((n + 1) as f64).sqrt() + 1.0;
    if s < 1 || (s as f64) >= limit {
        return Err(CertifyError::Domain(format!(
            "need 1 <= s < sqrt(n+1)/2 + 1 = {limit}, got s = {s}"
        )));
    }
    Ok(n as f64 / 2.0 - (s as f64 - 1.0) * ((n + 1) as f64).sqrt() - 0.5)
}

/// Degree budget of the tightness regime at dimension `n`:
/// `⌊n^{1/3} / ln² n⌋`.
pub fn scaling_degree(n: u64) -> u64 {
    let nf = n as f64;
    let ln = nf.ln();
    if ln <= 0.0 {
        return 0;
    }
    (nf.cbrt() / (ln * ln)).floor().max(0.0) as u64
}

fn phi_of(k: u64) -> f64 {
    PI / (2.0 * (k as f64 + 1.0))
}

/// `b(k) √n` in Δ-form: the minimum-gap floor `(3β/2) φ² Δ`.
fn gap_floor(beta: f64, k: u64, delta: f64) -> f64 {
    1.5 * beta * phi_of(k) * phi_of(k) * delta
}

/// `a(k) = (8/π) log(k+1) + 4`: twice the paper-bound Lebesgue constant.
fn a_of(k: u64) -> f64 {
    (8.0 / PI) * ((k + 1) as f64).ln() + 4.0
}

fn lambda_paper_bound(k: u64) -> f64 {
    (4.0 / PI) * ((k + 1) as f64).ln() + 2.0
}

/// Quantized Chebyshev construction in center-offset coordinates (points
/// minus n/2), evaluated with its four concrete assumptions and the six
/// sequence conditions.
#[derive(Debug, Clone)]
pub struct Construction {
    pub delta: f64,
    pub assumptions: Vec<Condition>,
    pub built: Option<BuiltSequence>,
    pub failure: Option<String>,
}

impl Construction {
    pub fn all_assumptions_pass(&self) -> bool {
        self.assumptions.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct BuiltSequence {
    /// Quantized integer offsets from n/2 (half-integers when n is odd).
    pub offsets: Vec<f64>,
    /// The real (pre-quantization) node offsets.
    pub x_offsets: Vec<f64>,
    pub min_gap: f64,
    pub p_offset: u64,
    pub radius: f64,
    pub conditions: Vec<Condition>,
    pub lambda_ln_paper: f64,
    pub lambda_ln_measured: Option<f64>,
}

impl BuiltSequence {
    pub fn all_conditions_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn absolute_points(&self, n: u64) -> Vec<u64> {
        self.offsets
            .iter()
            .map(|&d| {
                let two_d = (2.0 * d) as i128;
                ((n as i128 + two_d) / 2) as u64
            })
            .collect()
    }
}

/// Builds the quantized Chebyshev sequence for window half-width Δ: scale the
/// extended Chebyshev nodes to radius `βΔ + 1` around `n/2`, round endpoints
/// inward (mirrored) and interior points to nearest. Assumption failures are
/// recorded, not thrown; only an actual quantization breakdown aborts.
pub fn build_quantized_chebyshev(params: &CertificateParams) -> Construction {
    let delta = (params.alpha * params.k as f64 * params.n as f64).sqrt();
    build_quantized_chebyshev_at(params, delta)
}

pub fn build_quantized_chebyshev_at(params: &CertificateParams, delta: f64) -> Construction {
    let (n, k, beta, eps) = (params.n, params.k, params.beta, params.epsilon);
    let phi = phi_of(k);
    let lam_x_bound = (2.0 / PI) * ((k + 1) as f64).ln() + 1.0;
    let assumptions = vec![
        Condition::le("window_within_cube", delta, n as f64 / 2.0),
        // quantization cannot collide: un-quantized min gap stays >= 4
        Condition::le("quantization_gap_budget", 4.0, 3.0 * beta * phi * phi * delta),
        // distortion damping factor gamma k^2 Lambda(X) stays <= 1/2
        Condition::le(
            "distortion_budget",
            2.0 * (k as f64) * (k as f64) * lam_x_bound,
            beta * delta,
        ),
        // translation offset p stays within the epsilon share of the window
        Condition::le(
            "offset_budget",
            4.0 * phi * phi * (beta + 1.0 / delta) + 3.0 / delta,
            eps,
        ),
    ];

    let r_x = beta * delta + 1.0;
    let base = match extended_chebyshev(k as usize) {
        Ok(b) => b,
        Err(e) => {
            return Construction {
                delta,
                assumptions,
                built: None,
                failure: Some(e.to_string()),
            }
        }
    };
    let x_offsets: Vec<f64> = base.points().iter().map(|&c| c * r_x).collect();
    let offsets = match quantize_offsets(&x_offsets, n % 2 == 1) {
        Ok(o) => o,
        Err(e) => {
            return Construction {
                delta,
                assumptions,
                built: None,
                failure: Some(e.to_string()),
            }
        }
    };
    let built = finish_sequence(params, delta, x_offsets, offsets, r_x, None);
    Construction {
        delta,
        assumptions,
        built: Some(built),
        failure: None,
    }
}

/// Completes condition evaluation for a constructed offset sequence.
/// `lambda_ln_paper_override` switches the closed-form Λ bound (used by the
/// equally spaced variant).
fn finish_sequence(
    params: &CertificateParams,
    delta: f64,
    x_offsets: Vec<f64>,
    offsets: Vec<f64>,
    r_x: f64,
    lambda_ln_paper_override: Option<f64>,
) -> BuiltSequence {
    let (k, beta, eps) = (params.k, params.beta, params.epsilon);
    let min_gap = offsets
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let p_offset = (((min_gap - 1.0) / 2.0).ceil()).max(0.0) as u64;
    let radius = *offsets.last().unwrap();
    let lambda_ln_paper =
        lambda_ln_paper_override.unwrap_or_else(|| lambda_paper_bound(k).ln());
    let lambda_ln_measured = match params.lambda_mode {
        LambdaMode::Measured => {
            let seq = PointSeq::new(offsets.clone()).expect("quantized offsets increase");
            Some(lebesgue_constant(&seq, 64, 1e-10).ln())
        }
        LambdaMode::PaperBound => None,
    };
    let rp = radius + p_offset as f64;
    let lam_x_bound = (2.0 / PI) * ((k + 1) as f64).ln() + 1.0;
    let mut conditions = vec![
        Condition::le("min_gap_lower", gap_floor(beta, k, delta), min_gap),
        Condition::le("radius_lower", beta * delta, radius),
        Condition::le("radius_plus_offset_upper", rp, (beta + eps) * delta),
        Condition::le("offset_upper", 2.0 * p_offset as f64, eps * delta),
        match (params.lambda_mode, lambda_ln_measured) {
            (LambdaMode::Measured, Some(l)) => {
                Condition::le("lebesgue_upper", l, lambda_ln_paper)
            }
            _ => {
                // paper mode: the distortion criterion that backs the bound
                Condition::le(
                    "lebesgue_distortion_half",
                    (1.0 / r_x) * (k as f64) * (k as f64) * lam_x_bound,
                    0.5,
                )
            }
        },
        Condition::le("window_fits", rp, delta),
    ];
    // a non-strictly-increasing quantization is caught earlier; min_gap >= 1
    conditions.push(Condition::le("integer_gap", 1.0, min_gap));
    BuiltSequence {
        offsets,
        x_offsets,
        min_gap,
        p_offset,
        radius,
        conditions,
        lambda_ln_paper,
        lambda_ln_measured,
    }
}

fn lambda_ln_used(params: &CertificateParams, built: &BuiltSequence) -> f64 {
    match params.lambda_mode {
        LambdaMode::PaperBound => built.lambda_ln_paper,
        LambdaMode::Measured => built
            .lambda_ln_measured
            .expect("measured mode computes lambda"),
    }
}

/// Start of the tail: smallest integer weight strictly above `n/2 + Δ`.
fn tail_start(n: u64, delta: f64) -> u64 {
    let half = n / 2;
    let frac = 0.5 * (n % 2) as f64;
    half + (frac + delta).floor() as u64 + 1
}

struct TailSum {
    ln_value: Option<f64>,
    complete: bool,
}

/// Log-domain ν tail: `Σ_{w > n/2+Δ} B_n(w) ((2(w-n/2) + 2p) / R)^k` with
/// `R = two_r / 2`. Truncates when a term drops below 1e-25 of the running
/// sum, adding the geometric remainder bound so the result never
/// undercounts. If `give_up_above` is set, stops early once the partial sum
/// alone exceeds it (the certificate is then refuted by a lower bound).
fn log_tail_sum(
    n: u64,
    k: u64,
    delta: f64,
    two_p: u64,
    two_r: u64,
    give_up_above: Option<f64>,
) -> Result<TailSum, CertifyError> {
    let w_start = tail_start(n, delta);
    if w_start > n {
        return Ok(TailSum {
            ln_value: None,
            complete: true,
        });
    }
    let kf = k as f64;
    let two_r_f = two_r as f64;
    let growth = |w: u64| -> f64 {
        let td = 2.0 * w as f64 - n as f64; // exact while 2w-n < 2^53
        kf * ((2.0 * (td + two_p as f64)) / two_r_f).ln()
    };
    let growth_big = |w: u64| -> f64 {
        let td = (2 * (w as i128) - n as i128) as f64;
        kf * ((2.0 * (td + two_p as f64)) / two_r_f).ln()
    };
    let use_big = n >= (1u64 << 52);
    let g = |w: u64| if use_big { growth_big(w) } else { growth(w) };

    let mut ln_b = binom::ln_pmf(n, w_start)?;
    let anchor = ln_b + g(w_start);
    let mut sum_rel = 0.0f64;
    let mut prev_lt = f64::INFINITY;
    let mut w = w_start;
    let mut since_refresh = 0u32;
    loop {
        let lt = ln_b + g(w);
        let rel = (lt - anchor).exp();
        sum_rel += rel;
        let ratio = (lt - prev_lt).exp();
        if ratio < 1.0 && rel < 1e-25 * sum_rel {
            // geometric remainder, added so truncation can only overcount
            sum_rel += rel * ratio / (1.0 - ratio);
            return Ok(TailSum {
                ln_value: Some(anchor + sum_rel.ln()),
                complete: true,
            });
        }
        prev_lt = lt;
        if w == n {
            return Ok(TailSum {
                ln_value: Some(anchor + sum_rel.ln()),
                complete: true,
            });
        }
        // incremental pmf update with periodic re-anchoring
        ln_b += ((n - w) as f64 / (w + 1) as f64).ln();
        w += 1;
        since_refresh += 1;
        if since_refresh == 1 << 20 {
            ln_b = binom::ln_pmf(n, w)?;
            since_refresh = 0;
            if let Some(limit) = give_up_above {
                if anchor + sum_rel.ln() > limit {
                    return Ok(TailSum {
                        ln_value: Some(anchor + sum_rel.ln()),
                        complete: false,
                    });
                }
            }
        }
    }
}

/// Exact ν tail as a big rational (without the 2Λ factor).
fn exact_tail_sum(n: u64, k: u64, delta: f64, two_p: u64, two_r: u64) -> Result<Rational, CertifyError> {
    if n > EXACT_SUM_LIMIT {
        return Err(CertifyError::Domain(format!(
            "exact tail summation is limited to n <= {EXACT_SUM_LIMIT}"
        )));
    }
    let w_start = tail_start(n, delta);
    if w_start > n {
        return Ok(Rational::zero());
    }
    let weight = |w: u64| -> Rational {
        let td = 2 * w as i64 - n as i64;
        Rational::new(
            BigInt::from(2 * (td + two_p as i64)),
            BigInt::from(two_r),
        )
        .pow(k as i32)
    };
    Ok(binom::exact_upper_tail(n, w_start - 1, weight)?)
}

/// Internal: shared tail comparison for a built sequence. Returns the filled
/// certificate skeleton.
#[allow(clippy::too_many_arguments)]
fn run_tail_comparison(
    params: &CertificateParams,
    variant: &str,
    delta: f64,
    built: &BuiltSequence,
    assumptions: Vec<Condition>,
    use_translation: bool,
    lambda_ln: f64,
) -> Result<Certificate, CertifyError> {
    let n = params.n;
    let k = params.k;
    let two_r = (2.0 * built.radius) as i128;
    if (2.0 * built.radius).fract() != 0.0 || two_r <= 0 {
        return Err(CertifyError::Internal(
            "sequence radius is not a half-integer".into(),
        ));
    }
    if (n as i128 + two_r) % 2 != 0 {
        return Err(CertifyError::Internal(
            "n/2 + R(W) is not an integer; the rhs weight would be silently rounded".into(),
        ));
    }
    let two_r = two_r as u64;
    let p = if use_translation { built.p_offset } else { 0 };
    let t_factor = if use_translation { built.min_gap } else { 1.0 };
    let w_rhs = (n + two_r) / 2 + p;

    let mut conditions = assumptions;
    conditions.extend(built.conditions.iter().cloned());
    if w_rhs > n {
        conditions.push(Condition::le("rhs_weight_in_cube", w_rhs as f64, n as f64));
        let reason = format!("rhs weight n/2 + R + p = {w_rhs} exceeds n");
        return Ok(Certificate {
            params: params.clone(),
            variant: variant.into(),
            delta,
            sequence: Some(built.absolute_points(n)),
            min_gap: Some(built.min_gap),
            offset_p: Some(p),
            radius: Some(built.radius),
            lambda_ln: Some(lambda_ln),
            nu_ln: None,
            nu_provenance: "none".into(),
            rhs_ln: None,
            rhs_provenance: "none".into(),
            conditions,
            verdict: Verdict::NotCertified { reason },
        });
    }

    let (rhs_ln, rhs_provenance) = match params.nu_mode {
        NuMode::ExactSum => {
            let rhs = Rational::from(rational_from_f64(t_factor)) * binom::exact_pmf(n, w_rhs)?;
            (rational_ln(&rhs), "exact".to_string())
        }
        _ => (
            t_factor.ln() + binom::ln_pmf(n, w_rhs)?,
            "log_float".to_string(),
        ),
    };

    let ln_two_lambda = LN_2 + lambda_ln;
    let (nu_ln, nu_provenance, nu_exceeds): (Option<f64>, String, Option<bool>) =
        match params.nu_mode {
            NuMode::ExactSum => {
                let sum = exact_tail_sum(n, k, delta, 2 * p, two_r)?;
                if sum.is_zero() {
                    (None, "exact_sum_empty".into(), Some(false))
                } else {
                    // exact comparison: 2Λ (as the exact image of its f64) times sum
                    let two_lambda = rational_from_f64(ln_two_lambda.exp());
                    let nu = Rational::from(two_lambda) * &sum;
                    let rhs = Rational::from(rational_from_f64(t_factor))
                        * binom::exact_pmf(n, w_rhs)?;
                    (
                        Some(rational_ln(&nu)),
                        "exact_sum".into(),
                        Some(nu > rhs),
                    )
                }
            }
            NuMode::LogFloatSum => {
                let tail = log_tail_sum(
                    n,
                    k,
                    delta,
                    2 * p,
                    two_r,
                    Some(rhs_ln - ln_two_lambda + 1e-6),
                )?;
                match tail.ln_value {
                    None => (None, "log_float_sum_empty".into(), Some(false)),
                    Some(v) => {
                        let nu = ln_two_lambda + v;
                        let provenance = if tail.complete {
                            "log_float_sum".into()
                        } else {
                            "log_float_sum_lower_bound".into()
                        };
                        (Some(nu), provenance, None)
                    }
                }
            }
            NuMode::ClosedFormEstimate => {
                let alpha_eff = delta * delta / (k as f64 * n as f64);
                let (nu, extra) = closed_form_estimate(params, alpha_eff, delta)?;
                conditions.extend(extra);
                (Some(nu), "closed_form_estimate".into(), None)
            }
        };

    // rhs for the estimate mode is its own closed form
    let (rhs_ln, rhs_provenance) = if params.nu_mode == NuMode::ClosedFormEstimate {
        let alpha_eff = delta * delta / (k as f64 * n as f64);
        let s = params.beta + params.epsilon;
        let ln_rhs = gap_floor(params.beta, k, delta).ln() - 0.5 * LN_2
            - 2.0 * s * s * alpha_eff * k as f64;
        (ln_rhs, "closed_form_estimate".into())
    } else {
        (rhs_ln, rhs_provenance)
    };

    let comparison = match (nu_ln, nu_exceeds) {
        (None, _) => Condition {
            name: "nu_le_rhs".into(),
            passed: true,
            lhs: f64::NEG_INFINITY,
            rhs: rhs_ln,
            slack: f64::INFINITY,
        },
        (Some(nu), Some(exceeds)) => Condition {
            name: "nu_le_rhs".into(),
            passed: !exceeds,
            lhs: nu,
            rhs: rhs_ln,
            slack: rhs_ln - nu,
        },
        (Some(nu), None) => Condition::le("nu_le_rhs", nu, rhs_ln),
    };
    conditions.push(comparison);

    let all_pass = conditions.iter().all(|c| c.passed);
    let verdict = if all_pass {
        Verdict::Certified
    } else {
        let failed: Vec<&str> = conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Verdict::NotCertified {
            reason: format!("failed: {}", failed.join(", ")),
        }
    };

    Ok(Certificate {
        params: params.clone(),
        variant: variant.into(),
        delta,
        sequence: Some(built.absolute_points(n)),
        min_gap: Some(built.min_gap),
        offset_p: Some(p),
        radius: Some(built.radius),
        lambda_ln: Some(lambda_ln),
        nu_ln,
        nu_provenance,
        rhs_ln: Some(rhs_ln),
        rhs_provenance,
        conditions,
        verdict,
    })
}

/// The closed-form ν estimate `a(k)(1+√(αk)) e^{-ck}` together with the
/// concrete inequalities that make it a valid upper bound at this `(n, k)`.
fn closed_form_estimate(
    params: &CertificateParams,
    alpha: f64,
    delta: f64,
) -> Result<(f64, Vec<Condition>), CertifyError> {
    let (n, k, beta, eps) = (params.n, params.k, params.beta, params.epsilon);
    let nf = n as f64;
    let kf = k as f64;
    let c = 2.0 * (alpha - 0.5 * ((2.0 + eps) / beta).ln());
    let window = binom::dml_window_halfwidth(n);
    let y = window;
    let mut conds = vec![
        Condition::le("growth_log_quadratic", 0.5f64.exp().sqrt().powi(2), (2.0 + eps) / beta),
        Condition::le("tail_exponent_positive", 0.0, c),
        Condition::le("rhs_in_normal_window", (beta + eps) * delta, window),
        // A-part concreteness: (1/2) e^{c(2Δ-1)/(αn)} <= 1
        Condition::le("near_tail_estimate", c * (2.0 * delta - 1.0) / (alpha * nf), LN_2),
        // B-part concreteness: ln(y/2) - c(y-1)^2/(αn) <= -ck
        Condition::le(
            "far_tail_estimate",
            (y / 2.0).ln() - c * (y - 1.0) * (y - 1.0) / (alpha * nf),
            -c * kf,
        ),
    ];
    // fix the first condition properly: (2+ε)/β >= √e
    conds[0] = Condition::le("growth_log_quadratic", (0.5f64).exp(), (2.0 + eps) / beta);
    let nu = a_of(k).ln() + (1.0 + (alpha * kf).sqrt()).ln() - c * kf;
    Ok((nu, conds))
}

/// Full translated-sequences certificate at `Δ = √(αkn)` with the quantized
/// Chebyshev construction.
pub fn translated_certificate(params: &CertificateParams) -> Result<Certificate, CertifyError> {
    let delta = (params.alpha * params.k as f64 * params.n as f64).sqrt();
    translated_certificate_at(params, delta)
}

/// Same pipeline at an explicit window half-width Δ.
pub fn translated_certificate_at(
    params: &CertificateParams,
    delta: f64,
) -> Result<Certificate, CertifyError> {
    let construction = build_quantized_chebyshev_at(params, delta);
    let Some(built) = construction.built else {
        let reason = construction
            .failure
            .unwrap_or_else(|| "sequence construction failed".into());
        return Ok(Certificate {
            params: params.clone(),
            variant: "translated".into(),
            delta,
            sequence: None,
            min_gap: None,
            offset_p: None,
            radius: None,
            lambda_ln: None,
            nu_ln: None,
            nu_provenance: "none".into(),
            rhs_ln: None,
            rhs_provenance: "none".into(),
            conditions: construction.assumptions,
            verdict: Verdict::NotCertified { reason: reason.clone() },
        }
        .not_certified(&reason));
    };
    let lambda_ln = lambda_ln_used(params, &built);
    run_tail_comparison(
        params,
        "translated",
        delta,
        &built,
        construction.assumptions,
        true,
        lambda_ln,
    )
}

/// Single-sequence certificate: no translation, `ν ≤ B_n(n/2 + R(W))` with a
/// caller-provided integer sequence. Λ is always measured here (the closed
/// bound only covers the quantized Chebyshev construction).
pub fn one_sequence_certificate(
    n: u64,
    k: u64,
    delta: f64,
    w_seq: &PointSeq,
    nu_mode: NuMode,
) -> Result<Certificate, CertifyError> {
    if nu_mode == NuMode::ClosedFormEstimate {
        return Err(CertifyError::Domain(
            "the closed-form estimate applies to the translated pipeline only".into(),
        ));
    }
    if !w_seq.is_integral() {
        return Err(CertifyError::Precondition("sequence must be integral".into()));
    }
    if w_seq.len() as u64 != k + 1 {
        return Err(CertifyError::Precondition(format!(
            "need k+1 = {} points, got {}",
            k + 1,
            w_seq.len()
        )));
    }
    if w_seq.center() != n as f64 / 2.0 {
        return Err(CertifyError::Precondition(format!(
            "sequence center {} is not n/2 = {}",
            w_seq.center(),
            n as f64 / 2.0
        )));
    }
    if w_seq.radius() > delta {
        return Err(CertifyError::Precondition(
            "sequence must sit inside the window".into(),
        ));
    }
    if delta > n as f64 / 2.0 {
        return Err(CertifyError::Precondition("window exceeds the cube".into()));
    }
    let params = CertificateParams::new(
        n,
        k,
        (delta * delta / (k as f64 * n as f64)).max(f64::MIN_POSITIVE),
        0.5,
        0.25,
        LambdaMode::Measured,
        nu_mode,
    )?;
    let offsets: Vec<f64> = w_seq
        .points()
        .iter()
        .map(|&x| x - n as f64 / 2.0)
        .collect();
    let lambda_ln = lebesgue_constant(w_seq, 64, 1e-10).ln();
    let built = BuiltSequence {
        offsets: offsets.clone(),
        x_offsets: offsets,
        min_gap: w_seq.min_gap(),
        p_offset: 0,
        radius: w_seq.radius(),
        conditions: vec![Condition::le(
            "sequence_in_window",
            w_seq.radius(),
            delta,
        )],
        lambda_ln_paper: lambda_paper_bound(k).ln(),
        lambda_ln_measured: Some(lambda_ln),
    };
    run_tail_comparison(
        &params,
        "one_sequence",
        delta,
        &built,
        Vec::new(),
        false,
        lambda_ln,
    )
}

/// Equally spaced variant: integer nodes with uniform gap, Λ taken from the
/// `2^{k+3}/k` bound in paper mode. The gap parity must match `n` so the
/// sequence can center exactly at `n/2` (impossible for odd `n` with even
/// `k`; reported, not thrown).
pub fn equally_spaced_certificate(params: &CertificateParams) -> Result<Certificate, CertifyError> {
    let delta = (params.alpha * params.k as f64 * params.n as f64).sqrt();
    equally_spaced_certificate_at(params, delta)
}

pub fn equally_spaced_certificate_at(
    params: &CertificateParams,
    delta: f64,
) -> Result<Certificate, CertifyError> {
    let (n, k, beta) = (params.n, params.k, params.beta);
    let fail = |reason: String, conditions: Vec<Condition>| Certificate {
        params: params.clone(),
        variant: "equally_spaced".into(),
        delta,
        sequence: None,
        min_gap: None,
        offset_p: None,
        radius: None,
        lambda_ln: None,
        nu_ln: None,
        nu_provenance: "none".into(),
        rhs_ln: None,
        rhs_provenance: "none".into(),
        conditions,
        verdict: Verdict::NotCertified { reason },
    };
    // smallest gap with the right parity that reaches radius βΔ
    let mut g = ((2.0 * beta * delta) / k as f64).ceil().max(1.0) as u64;
    if n % 2 == 1 && k % 2 == 0 {
        return Ok(fail(
            "no equally spaced integer sequence centers at n/2 for odd n with even k".into(),
            vec![],
        ));
    }
    if n % 2 == 1 {
        // need g*k odd, k odd here: g must be odd
        if g % 2 == 0 {
            g += 1;
        }
    } else if (g * k) % 2 == 1 {
        g += 1;
    }
    let span = g * k;
    if span as f64 >= n as f64 {
        return Ok(fail("equally spaced span exceeds the cube".into(), vec![]));
    }
    let offsets: Vec<f64> = (0..=k)
        .map(|i| -(span as f64) / 2.0 + (i * g) as f64)
        .collect();
    let lambda_ln_paper = (k as f64 + 3.0) * LN_2 - (k as f64).ln();
    let built = finish_sequence(
        params,
        delta,
        offsets.clone(),
        offsets,
        beta * delta + 1.0,
        Some(lambda_ln_paper),
    );
    let lambda_ln = match params.lambda_mode {
        LambdaMode::PaperBound => lambda_ln_paper,
        LambdaMode::Measured => built
            .lambda_ln_measured
            .expect("measured mode computes lambda"),
    };
    run_tail_comparison(params, "equally_spaced", delta, &built, vec![], true, lambda_ln)
}

/// One point of the power-of-two sweep: `n = 2^power`, `k = ⌊n^{1/3}/ln²n⌋`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub power: u32,
    pub n: u64,
    pub k: u64,
    pub certified: bool,
    pub certificate: Option<Certificate>,
}

/// Runs the translated-sequences pipeline along powers of two with the
/// scaling degree budget. Points with `k = 0` are skipped (recorded without
/// a certificate).
pub fn certificate_power_sweep(
    powers: std::ops::RangeInclusive<u32>,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    lambda_mode: LambdaMode,
    nu_mode: NuMode,
) -> Result<Vec<SweepPoint>, CertifyError> {
    let mut out = Vec::new();
    for power in powers {
        if power >= 63 {
            return Err(CertifyError::Domain("powers above 62 overflow u64".into()));
        }
        let n = 1u64 << power;
        let k = scaling_degree(n);
        if k < 1 {
            out.push(SweepPoint {
                power,
                n,
                k,
                certified: false,
                certificate: None,
            });
            continue;
        }
        let params = CertificateParams::new(n, k, alpha, beta, epsilon, lambda_mode, nu_mode)?;
        let cert = translated_certificate(&params)?;
        out.push(SweepPoint {
            power,
            n,
            k,
            certified: cert.is_certified(),
            certificate: Some(cert),
        });
    }
    Ok(out)
}
