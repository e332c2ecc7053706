//! Exact rational linear programming for the Delsarte-style primal/dual pair:
//! feasibility of degree-≤k dual polynomials on weight windows, construction
//! of symmetric k-wise independent witness distributions, the exact window
//! threshold `Δ*_n(k)`, and the ball-mass optimization pair whose optima agree
//! exactly by strong duality.
//!
//! The complementarity at the heart of the module: a degree-≤k polynomial
//! with positive binomial expectation that is nonpositive on a weight window
//! exists if and only if no k-wise independent symmetric distribution is
//! supported inside that window. Phase-1 Farkas multipliers of the
//! infeasible polynomial LP *are* the witness distribution, so each call
//! returns a machine-checkable certificate either way.

pub mod simplex;

use crate::poly::{krawtchouk, Basis, SymbolicPoly};
use crate::scalar::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use simplex::{Constraint, Problem, Relation, SolveResult};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("k must satisfy 1 <= k <= {max}, got {k}")]
    BadDegree { k: u64, max: u64 },
    #[error("ball radius {r} exceeds n = {n}")]
    BadRadius { r: u64, n: u64 },
    #[error("probability vector invalid: {0}")]
    BadDistribution(String),
    #[error("internal solver inconsistency: {0}")]
    Internal(String),
}

/// Probability vector over weights `[0:n]` representing a symmetric
/// distribution on the hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    n: u64,
    probs: Vec<Rational>,
}

impl WeightDistribution {
    pub fn new(n: u64, probs: Vec<Rational>) -> Result<Self, LpError> {
        if probs.len() != n as usize + 1 {
            return Err(LpError::BadDistribution(format!(
                "expected {} entries, got {}",
                n + 1,
                probs.len()
            )));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(LpError::BadDistribution("negative probability".into()));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(LpError::BadDistribution(format!("total mass {total} != 1")));
        }
        Ok(Self { n, probs })
    }

    pub fn binomial(n: u64) -> Self {
        let probs = (0..=n)
            .map(|w| Rational::new(crate::scalar::binomial(n, w), crate::scalar::pow2(n)))
            .collect();
        Self { n, probs }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn support(&self) -> Vec<u64> {
        (0..=self.n)
            .filter(|&w| !self.probs[w as usize].is_zero())
            .collect()
    }

    /// `Σ_w π(w) K_t(w)`, exactly.
    pub fn krawtchouk_moment(&self, t: u64) -> Rational {
        let mut acc = Rational::zero();
        for (w, p) in self.probs.iter().enumerate() {
            if !p.is_zero() {
                acc += p * krawtchouk(self.n, t, w as u64).expect("t, w in range");
            }
        }
        acc
    }

    /// Verifies the k-wise independence certificate: all Krawtchouk moments
    /// `t = 1..=k` vanish. Returns the first violating order.
    pub fn check_kwise(&self, k: u64) -> Result<(), u64> {
        for t in 1..=k {
            if !self.krawtchouk_moment(t).is_zero() {
                return Err(t);
            }
        }
        Ok(())
    }
}

/// Weight window on `[0:n]`: the central band `|w - n/2| ≤ Δ` or the upper
/// set `w ≥ R`. Membership at breakpoints is closed (≤, ≥).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightWindow {
    pub n: u64,
    pub kind: WindowKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowKind {
    TwoSided(f64),
    OneSided(f64),
}

impl WeightWindow {
    pub fn two_sided(n: u64, delta: f64) -> Self {
        Self {
            n,
            kind: WindowKind::TwoSided(delta),
        }
    }

    pub fn one_sided(n: u64, r: f64) -> Self {
        Self {
            n,
            kind: WindowKind::OneSided(r),
        }
    }

    pub fn member_weights(&self) -> Vec<u64> {
        match self.kind {
            WindowKind::TwoSided(delta) => (0..=self.n)
                .filter(|&w| (w as f64 - self.n as f64 / 2.0).abs() <= delta)
                .collect(),
            WindowKind::OneSided(r) => (0..=self.n).filter(|&w| w as f64 >= r).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LpStatus {
    Feasible,
    Infeasible,
    OptimumFound,
}

/// Raw outcome record for reports: status, exact objective, exact vectors.
#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub objective: Option<Rational>,
    pub primal_solution: Option<Vec<Rational>>,
    pub dual_solution: Option<Vec<Rational>>,
}

impl fmt::Display for LpOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {:?}", self.status)?;
        match &self.objective {
            Some(v) => writeln!(f, "objective: {v}")?,
            None => writeln!(f, "objective: none")?,
        }
        let fmt_vec = |v: &Option<Vec<Rational>>| match v {
            Some(v) => v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            None => "none".into(),
        };
        writeln!(f, "primal: {}", fmt_vec(&self.primal_solution))?;
        write!(f, "dual: {}", fmt_vec(&self.dual_solution))
    }
}

/// Result of the window feasibility question for dual polynomials.
#[derive(Debug, Clone)]
pub enum DualOutcome {
    /// A degree-≤k polynomial in the Krawtchouk basis with constant
    /// coefficient 1 (so `E_{B_n} p = 1 > 0`) and `p ≤ 0` on the window.
    Feasible { polynomial: SymbolicPoly },
    /// No such polynomial; the Farkas certificate is a k-wise independent
    /// symmetric distribution supported inside the window.
    Infeasible { witness: WeightDistribution },
}

/// Decides whether a degree-≤k polynomial with positive binomial expectation
/// can be nonpositive on every window weight. Normalization `a_0 = 1` turns
/// the open condition `E_{B_n} p > 0` into a closed LP.
pub fn dual_polynomial_feasible(
    n: u64,
    k: u64,
    window: &WeightWindow,
) -> Result<DualOutcome, LpError> {
    if k < 1 || k > n {
        return Err(LpError::BadDegree { k, max: n });
    }
    dual_polynomial_on_members(n, k, &window.member_weights())
}

fn dual_polynomial_on_members(n: u64, k: u64, members: &[u64]) -> Result<DualOutcome, LpError> {
    if members.is_empty() {
        let polynomial = SymbolicPoly::new(Basis::Krawtchouk(n), vec![Rational::one()])
            .expect("constant polynomial");
        return Ok(DualOutcome::Feasible { polynomial });
    }
    // variables a_1..a_k (free); rows: Σ_t a_t K_t(w) <= -1
    let constraints = members
        .iter()
        .map(|&w| {
            let coeffs = (1..=k)
                .map(|t| krawtchouk(n, t, w).expect("in range"))
                .collect();
            Constraint {
                coeffs,
                rel: Relation::Le,
                rhs: -Rational::one(),
            }
        })
        .collect();
    let problem = Problem {
        num_vars: k as usize,
        minimize: vec![],
        free: vec![true; k as usize],
        constraints,
    };
    match simplex::solve(&problem) {
        SolveResult::Optimal { primal, .. } => {
            let mut coeffs = vec![Rational::one()];
            coeffs.extend(primal);
            let polynomial = SymbolicPoly::new(Basis::Krawtchouk(n), coeffs)
                .map_err(|e| LpError::Internal(e.to_string()))?;
            for &w in members {
                let v = polynomial
                    .eval(&Rational::from(BigInt::from(w)))
                    .map_err(|e| LpError::Internal(e.to_string()))?;
                if v.is_positive() {
                    return Err(LpError::Internal(format!(
                        "feasible polynomial positive at window weight {w}"
                    )));
                }
            }
            Ok(DualOutcome::Feasible { polynomial })
        }
        SolveResult::Infeasible { farkas, .. } => {
            let total: Rational = farkas.iter().sum();
            if !total.is_positive() || farkas.iter().any(|y| y.is_negative()) {
                return Err(LpError::Internal(
                    "Farkas certificate is not a nonnegative vector with positive mass".into(),
                ));
            }
            let mut probs = vec![Rational::zero(); n as usize + 1];
            for (&w, y) in members.iter().zip(&farkas) {
                probs[w as usize] = y / &total;
            }
            let witness = WeightDistribution::new(n, probs)
                .map_err(|e| LpError::Internal(e.to_string()))?;
            if let Err(t) = witness.check_kwise(k) {
                return Err(LpError::Internal(format!(
                    "Farkas distribution has nonzero Krawtchouk moment at t = {t}"
                )));
            }
            Ok(DualOutcome::Infeasible { witness })
        }
        SolveResult::Unbounded => Err(LpError::Internal(
            "feasibility LP reported unbounded".into(),
        )),
    }
}

/// Result of asking for a k-wise independent distribution supported inside a
/// window.
#[derive(Debug, Clone)]
pub enum WitnessOutcome {
    Distribution(WeightDistribution),
    /// No such distribution exists; the dual polynomial is the impossibility
    /// certificate.
    Impossible { dual_polynomial: SymbolicPoly },
}

/// Finds an exact k-wise independent symmetric distribution supported inside
/// the window, or returns the dual polynomial proving none exists. The two
/// outcomes are complementary by LP duality.
pub fn witness_distribution(
    n: u64,
    k: u64,
    window: &WeightWindow,
) -> Result<WitnessOutcome, LpError> {
    match dual_polynomial_feasible(n, k, window)? {
        DualOutcome::Feasible { polynomial } => Ok(WitnessOutcome::Impossible {
            dual_polynomial: polynomial,
        }),
        DualOutcome::Infeasible { witness } => Ok(WitnessOutcome::Distribution(witness)),
    }
}

/// Value of the window LP `E_n(k, window)`: `Zero` when no admissible
/// polynomial has positive expectation, otherwise unbounded (any feasible
/// polynomial scales).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EnValue {
    Zero,
    Unbounded,
}

pub fn en_value(n: u64, k: u64, window: &WeightWindow) -> Result<EnValue, LpError> {
    Ok(match dual_polynomial_feasible(n, k, window)? {
        DualOutcome::Feasible { .. } => EnValue::Unbounded,
        DualOutcome::Infeasible { .. } => EnValue::Zero,
    })
}

/// Exact minimal window half-width at which `E_n(k, Δ)` collapses to zero.
#[derive(Debug, Clone)]
pub struct DeltaStar {
    pub n: u64,
    pub k: u64,
    /// Exact breakpoint: integer for even `n`, half-integer for odd `n`.
    /// `E_n(k, Δ) = 0` exactly for the closed windows with `Δ ≥ half_width`.
    pub half_width: Rational,
    /// Window weight range `[lo, hi]` at the breakpoint.
    pub window: (u64, u64),
    /// k-wise independent distribution living inside the minimal window.
    pub witness: WeightDistribution,
}

/// Scans half-integer window breakpoints upward until the dual polynomial LP
/// flips to infeasible. `E_n(k, Δ)` depends on `Δ` only through the member
/// set, so this is the exact threshold; monotone because growing the window
/// only adds constraints.
pub fn delta_star(n: u64, k: u64) -> Result<DeltaStar, LpError> {
    if k < 1 || k >= n {
        return Err(LpError::BadDegree { k, max: n - 1 });
    }
    let start = if n % 2 == 0 { 0 } else { 1 };
    let mut two_m = start;
    loop {
        let lo = (n - two_m) / 2;
        let hi = (n + two_m) / 2;
        let members: Vec<u64> = (lo..=hi).collect();
        if let DualOutcome::Infeasible { witness } = dual_polynomial_on_members(n, k, &members)? {
            return Ok(DeltaStar {
                n,
                k,
                half_width: Rational::new(BigInt::from(two_m), BigInt::from(2)),
                window: (lo, hi),
                witness,
            });
        }
        two_m += 2;
        if two_m > n {
            return Err(LpError::Internal(
                "full window must be infeasible for the dual polynomial".into(),
            ));
        }
    }
}

/// `A = min_π π(B(0; r))` over k-wise independent symmetric distributions:
/// the optimization form of the primal. Always feasible (the binomial
/// distribution qualifies) and bounded below by 0.
pub fn min_ball_mass(n: u64, k: u64, r: u64) -> Result<(Rational, WeightDistribution), LpError> {
    if k < 1 || k > n {
        return Err(LpError::BadDegree { k, max: n });
    }
    if r > n {
        return Err(LpError::BadRadius { r, n });
    }
    let nvars = n as usize + 1;
    let mut constraints = Vec::with_capacity(k as usize + 1);
    for t in 0..=k {
        let coeffs = (0..=n)
            .map(|w| krawtchouk(n, t, w).expect("in range"))
            .collect();
        constraints.push(Constraint {
            coeffs,
            rel: Relation::Eq,
            rhs: if t == 0 {
                Rational::one()
            } else {
                Rational::zero()
            },
        });
    }
    let mut minimize = vec![Rational::zero(); nvars];
    for w in 0..=r {
        minimize[w as usize] = Rational::one();
    }
    let problem = Problem {
        num_vars: nvars,
        minimize,
        free: vec![false; nvars],
        constraints,
    };
    match simplex::solve(&problem) {
        SolveResult::Optimal {
            objective, primal, ..
        } => {
            let witness = WeightDistribution::new(n, primal)
                .map_err(|e| LpError::Internal(e.to_string()))?;
            witness
                .check_kwise(k)
                .map_err(|t| LpError::Internal(format!("optimal witness moment t = {t} nonzero")))?;
            Ok((objective, witness))
        }
        other => Err(LpError::Internal(format!(
            "ball-mass primal did not reach an optimum: {other:?}"
        ))),
    }
}

/// `B = max E_{B_n} p` over degree-≤k polynomials with `p(w) ≤ [w ≤ r]` on
/// `[0:n]`: the dual of [`min_ball_mass`]. Strong duality gives `A = B`
/// exactly; the acceptance suite checks this over a grid.
pub fn max_ball_mass_dual(n: u64, k: u64, r: u64) -> Result<(Rational, SymbolicPoly), LpError> {
    if k < 1 || k > n {
        return Err(LpError::BadDegree { k, max: n });
    }
    if r > n {
        return Err(LpError::BadRadius { r, n });
    }
    // vars y_0..y_k free; max y_0 <=> min -y_0; rows: Σ_t y_t K_t(w) <= f(w)
    let nvars = k as usize + 1;
    let constraints = (0..=n)
        .map(|w| {
            let coeffs = (0..=k)
                .map(|t| krawtchouk(n, t, w).expect("in range"))
                .collect();
            Constraint {
                coeffs,
                rel: Relation::Le,
                rhs: if w <= r {
                    Rational::one()
                } else {
                    Rational::zero()
                },
            }
        })
        .collect();
    let mut minimize = vec![Rational::zero(); nvars];
    minimize[0] = -Rational::one();
    let problem = Problem {
        num_vars: nvars,
        minimize,
        free: vec![true; nvars],
        constraints,
    };
    match simplex::solve(&problem) {
        SolveResult::Optimal {
            objective, primal, ..
        } => {
            let poly = SymbolicPoly::new(Basis::Krawtchouk(n), primal)
                .map_err(|e| LpError::Internal(e.to_string()))?;
            Ok((-objective, poly))
        }
        other => Err(LpError::Internal(format!(
            "ball-mass dual did not reach an optimum: {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn window_membership() {
        let w = WeightWindow::two_sided(10, 1.5);
        assert_eq!(w.member_weights(), vec![4, 5, 6]);
        let w = WeightWindow::two_sided(9, 0.5);
        assert_eq!(w.member_weights(), vec![4, 5]);
        let w = WeightWindow::one_sided(6, 4.0);
        assert_eq!(w.member_weights(), vec![4, 5, 6]);
        let empty = WeightWindow::two_sided(8, -1.0);
        assert!(empty.member_weights().is_empty());
    }

    #[test]
    fn full_window_is_infeasible_and_empty_feasible() {
        let full = WeightWindow::two_sided(10, 5.0);
        match dual_polynomial_feasible(10, 3, &full).unwrap() {
            DualOutcome::Infeasible { witness } => {
                assert_eq!(witness.check_kwise(3), Ok(()));
            }
            _ => panic!("p <= 0 everywhere forces E p <= 0"),
        }
        let empty = WeightWindow::two_sided(10, -1.0);
        match dual_polynomial_feasible(10, 3, &empty).unwrap() {
            DualOutcome::Feasible { polynomial } => {
                assert_eq!(polynomial.coeffs(), &[rat_int(1)]);
            }
            _ => panic!("no constraints means p = 1 works"),
        }
    }

    #[test]
    fn lemma2_window_is_feasible_at_24_4() {
        // one-sided window from the classical dual-distance bound: R = 11
        let window = WeightWindow::one_sided(24, 11.0);
        match dual_polynomial_feasible(24, 4, &window).unwrap() {
            DualOutcome::Feasible { polynomial } => {
                // spot-check nonpositivity on the window
                for w in 11..=24u64 {
                    let v = polynomial.eval(&rat_int(w as i64)).unwrap();
                    assert!(!v.is_positive(), "w={w}");
                }
            }
            _ => panic!("expected a feasible dual polynomial"),
        }
    }

    #[test]
    fn witness_on_small_one_sided_window() {
        // (n=4, k=1, R=2): distributions on {2,3,4} with mean 2
        let window = WeightWindow::one_sided(4, 2.0);
        match witness_distribution(4, 1, &window).unwrap() {
            WitnessOutcome::Distribution(d) => {
                assert!(d.support().iter().all(|&w| w >= 2));
                assert_eq!(d.check_kwise(1), Ok(()));
                // K_1 moment zero means mean = n/2 = 2
                let mean: Rational = d
                    .probs()
                    .iter()
                    .enumerate()
                    .map(|(w, p)| p * rat_int(w as i64))
                    .sum();
                assert_eq!(mean, rat_int(2));
            }
            _ => panic!("feasible by a point mass at weight 2"),
        }
    }

    #[test]
    fn nwise_forces_binomial() {
        // k = n: only the binomial distribution is n-wise independent, so any
        // window excluding low weights is impossible.
        let window = WeightWindow::one_sided(6, 1.0);
        match witness_distribution(6, 6, &window).unwrap() {
            WitnessOutcome::Impossible { dual_polynomial } => {
                let e = crate::poly::binomial_expectation(&dual_polynomial, 6).unwrap();
                assert!(e.is_positive());
            }
            WitnessOutcome::Distribution(d) => {
                panic!("n-wise independence forces full support, got {:?}", d.support())
            }
        }
    }

    #[test]
    fn delta_star_small_fixtures() {
        // even n, k=1: the center weight alone already blocks degree-1
        // polynomials (K_1(n/2) = 0), so the breakpoint is 0.
        assert_eq!(delta_star(24, 1).unwrap().half_width, rat_int(0));
        // odd n, k=1: the two central weights give K_1 = ±1
        assert_eq!(delta_star(25, 1).unwrap().half_width, rat(1, 2));
        // LP fixture confirmed by the subset-enumeration ground truth
        let ds = delta_star(24, 3).unwrap();
        assert_eq!(ds.half_width, rat_int(3));
        assert_eq!(ds.window, (9, 15));
        assert_eq!(ds.witness.check_kwise(3), Ok(()));
        assert!(ds.witness.support().iter().all(|&w| (9..=15).contains(&w)));
    }

    #[test]
    fn delta_star_monotone_in_k() {
        for n in [12u64, 15, 20] {
            let mut prev = rat_int(-1);
            for k in 1..=5 {
                let ds = delta_star(n, k).unwrap().half_width;
                assert!(ds >= prev, "n={n} k={k}");
                prev = ds;
            }
        }
    }

    #[test]
    fn en_value_consistency_with_witness() {
        for n in 6..=16u64 {
            for k in 1..=4u64.min(n - 1) {
                for two_m in 0..=n {
                    let delta = two_m as f64 / 2.0;
                    let window = WeightWindow::two_sided(n, delta);
                    let ev = en_value(n, k, &window).unwrap();
                    let wit = witness_distribution(n, k, &window).unwrap();
                    match (ev, wit) {
                        (EnValue::Zero, WitnessOutcome::Distribution(_)) => {}
                        (EnValue::Unbounded, WitnessOutcome::Impossible { .. }) => {}
                        (ev, _) => panic!("n={n} k={k} delta={delta}: inconsistent {ev:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn window_monotonicity_never_flips_back() {
        for n in [11u64, 14] {
            for k in 1..=3u64 {
                let mut seen_zero = false;
                let start = if n % 2 == 0 { 0 } else { 1 };
                for two_m in (start..=n).step_by(2) {
                    let window = WeightWindow::two_sided(n, two_m as f64 / 2.0);
                    let ev = en_value(n, k, &window).unwrap();
                    if seen_zero {
                        assert_eq!(ev, EnValue::Zero, "n={n} k={k} two_m={two_m}");
                    }
                    seen_zero |= ev == EnValue::Zero;
                }
                assert!(seen_zero);
            }
        }
    }

    #[test]
    fn strong_duality_spot_checks() {
        for (n, k, r) in [(10u64, 2u64, 3u64), (12, 3, 5), (9, 1, 0), (8, 4, 8)] {
            let (a, _) = min_ball_mass(n, k, r).unwrap();
            let (b, _) = max_ball_mass_dual(n, k, r).unwrap();
            assert_eq!(a, b, "n={n} k={k} r={r}");
        }
    }

    #[test]
    fn outcome_report_shape() {
        let out = LpOutcome {
            status: LpStatus::OptimumFound,
            objective: Some(rat(3, 7)),
            primal_solution: Some(vec![rat_int(1), rat(1, 2)]),
            dual_solution: None,
        };
        let text = out.to_string();
        assert!(text.contains("status: OptimumFound"));
        assert!(text.contains("objective: 3/7"));
        assert!(text.contains("primal: 1 1/2"));
        assert!(text.contains("dual: none"));
    }
}
