//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Criterion 1 (the constants command) lives in the CLI crate's
//! acceptance tests; everything else is exercised here directly against the
//! library.

use covrad::binom;
use covrad::certify::{self, CertificateParams, NuMode};
use covrad::lp::{self, EnValue, WeightWindow, WitnessOutcome};
use covrad::oracle;
use covrad::poly::SymbolicPoly;
use covrad::scalar::{rational_from_f64, rational_ln, Rational};
use covrad::seq::{self, PointSeq};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn report(name: &str, started: Instant, budget_s: f64, detail: &str) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("ACCEPTANCE {name}: PASS in {elapsed:.1}s (budget {budget_s:.0}s) — {detail}");
    assert!(
        elapsed < budget_s,
        "{name} exceeded its runtime budget: {elapsed:.1}s > {budget_s}s"
    );
}

/// Criterion 2: Lebesgue constants of the two node families stay below their
/// closed-form bounds.
#[test]
fn criterion_2_lebesgue_bounds() {
    let t0 = Instant::now();
    let mut worst_slack = f64::INFINITY;
    for k in 1..=30usize {
        let s = seq::extended_chebyshev(k).unwrap();
        let lambda = seq::lebesgue_constant(&s, 64, 1e-10);
        let bound = (2.0 / std::f64::consts::PI) * ((k + 1) as f64).ln() + 0.7213;
        assert!(lambda < bound, "extended Chebyshev k={k}: {lambda} vs {bound}");
        worst_slack = worst_slack.min(bound - lambda);
    }
    for k in 1..=15usize {
        let s = seq::equally_spaced(k).unwrap();
        let lambda = seq::lebesgue_constant(&s, 64, 1e-10);
        let bound = 2.0f64.powi(k as i32 + 3) / k as f64;
        assert!(lambda < bound, "equally spaced k={k}: {lambda} vs {bound}");
    }
    report(
        "C2 Lebesgue bounds",
        t0,
        30.0,
        &format!("min Chebyshev slack {worst_slack:.4}"),
    );
}

/// Criterion 3: primal and dual ball-mass optima agree as exact rationals on
/// the full grid.
#[test]
fn criterion_3_exact_strong_duality() {
    let t0 = Instant::now();
    let mut checked = 0u64;
    for n in 8..=30u64 {
        for k in 1..=5u64 {
            for r in 0..=n {
                let (a, witness) = lp::min_ball_mass(n, k, r).unwrap();
                let (b, poly) = lp::max_ball_mass_dual(n, k, r).unwrap();
                assert_eq!(a, b, "duality gap at n={n} k={k} r={r}");
                assert_eq!(witness.check_kwise(k), Ok(()));
                // dual polynomial is admissible: p(w) <= [w <= r]
                for w in 0..=n {
                    let v = poly
                        .eval(&Rational::from(num_bigint::BigInt::from(w)))
                        .unwrap();
                    let cap = if w <= r {
                        Rational::from(num_bigint::BigInt::from(1))
                    } else {
                        Rational::zero()
                    };
                    assert!(v <= cap, "dual infeasible at n={n} k={k} r={r} w={w}");
                }
                checked += 1;
            }
        }
    }
    report(
        "C3 exact strong duality",
        t0,
        120.0,
        &format!("{checked} primal/dual pairs, all exactly equal"),
    );
}

/// Criterion 4: the exact window threshold sits strictly above the classical
/// lower bound (the strict form degenerates only for k = 1 at even n, where
/// both sides are exactly 0) and never exceeds the mirrored upper window.
#[test]
fn criterion_4_tietavainen_consistency() {
    let t0 = Instant::now();
    let mut checked = 0u64;
    for n in 2..=40u64 {
        for k in 1..=6u64.min(n - 1) {
            let ds = lp::delta_star(n, k).unwrap();
            let half = rational_to_f64(&ds.half_width);
            let lb = certify::delta_star_lower_bound(n, k).unwrap();
            let ub = certify::delta_star_upper_window(n, k).unwrap();
            if k == 1 && n % 2 == 0 {
                // degenerate family: the bound is exactly 0 and the window
                // floor lands on the weight lattice, so only >= follows;
                // the threshold is exactly 0 here.
                assert_eq!(half, 0.0, "n={n}");
                assert_eq!(lb, 0.0, "n={n}");
            } else {
                assert!(half > lb, "n={n} k={k}: delta* {half} vs lower {lb}");
            }
            assert!(half <= ub, "n={n} k={k}: delta* {half} vs upper {ub}");
            checked += 1;
        }
    }
    report(
        "C4 Tietavainen consistency",
        t0,
        120.0,
        &format!("{checked} (n,k) thresholds within [lower, upper]"),
    );
}

fn rational_to_f64(r: &Rational) -> f64 {
    covrad::scalar::rational_to_f64(r)
}

/// Criterion 5: witness distributions pass exact moment checks; lifted to the
/// cube (n ≤ 14) they pass the character-sum oracle and their support keeps
/// the required distance from the origin.
#[test]
fn criterion_5_witness_soundness() {
    let t0 = Instant::now();
    let mut instances = 0u64;
    let mut feasible = 0u64;
    let mut oracle_checked = 0u64;
    for n in 4..=20u64 {
        for k in 1..=5u64.min(n) {
            let r_max = n / 2 + 2;
            for r in 1..=r_max {
                instances += 1;
                let window = WeightWindow::one_sided(n, r as f64);
                match lp::witness_distribution(n, k, &window).unwrap() {
                    WitnessOutcome::Distribution(wd) => {
                        feasible += 1;
                        assert_eq!(wd.check_kwise(k), Ok(()), "n={n} k={k} r={r}");
                        assert!(wd.support().iter().all(|&w| w >= r));
                        if n <= 14 {
                            let mu = oracle::lift(&wd).unwrap();
                            assert_eq!(
                                oracle::kwise_check(&mu, k as u32),
                                None,
                                "character sum violation at n={n} k={k} r={r}"
                            );
                            let cr =
                                oracle::covering_radius(&mu.support_masks(), n as u32).unwrap();
                            assert!(
                                cr as u64 >= r,
                                "covering radius {cr} below requested {r} at n={n} k={k}"
                            );
                            oracle_checked += 1;
                        }
                    }
                    WitnessOutcome::Impossible { dual_polynomial } => {
                        // impossibility certificate must itself be valid
                        let e = covrad::poly::binomial_expectation(&dual_polynomial, n).unwrap();
                        assert!(e > Rational::zero());
                    }
                }
            }
        }
    }
    assert!(instances >= 200, "need 200+ instances, ran {instances}");
    report(
        "C5 witness soundness",
        t0,
        60.0,
        &format!("{instances} LP instances, {feasible} feasible, {oracle_checked} oracle-verified"),
    );
}

/// Criterion 6: across the sweep, no certificate ever says Certified where
/// the exact LP says E_n is nonzero.
#[test]
fn criterion_6_certificate_soundness_vs_lp() {
    let t0 = Instant::now();
    let mut certified = 0u64;
    let mut instances = 0u64;
    for n in [6u64, 9, 12, 16, 20, 25, 30] {
        for k in 1..=5u64.min(n / 2) {
            let start = if n % 2 == 0 { 0 } else { 1 };
            for two_m in (start..=n).step_by(2) {
                let delta = two_m as f64 / 2.0;
                if delta > n as f64 / 2.0 {
                    continue;
                }
                // candidate integer sequences inside the window: uniform-gap
                // symmetric systems of length k+1
                let mut candidates: Vec<PointSeq> = Vec::new();
                let max_span = two_m; // 2*R <= 2*delta
                for g in 1..=(max_span / k.max(1)).min(12) {
                    let span = g * k;
                    if span == 0 || (n + span) % 2 != 0 {
                        continue;
                    }
                    let lo = (n - span) / 2;
                    let pts: Vec<f64> = (0..=k).map(|i| (lo + i * g) as f64).collect();
                    if let Ok(s) = PointSeq::new(pts) {
                        candidates.push(s);
                    }
                }
                for w_seq in &candidates {
                    let cert =
                        certify::one_sequence_certificate(n, k, delta, w_seq, NuMode::ExactSum)
                            .unwrap();
                    instances += 1;
                    if cert.is_certified() {
                        certified += 1;
                        let ev = lp::en_value(n, k, &WeightWindow::two_sided(n, delta)).unwrap();
                        assert_eq!(
                            ev,
                            EnValue::Zero,
                            "unsound certificate at n={n} k={k} delta={delta}"
                        );
                    }
                }
                // the translated pipeline at explicit delta, paper constants
                if k >= 1 {
                    let params = CertificateParams::new(
                        n,
                        k,
                        0.93,
                        0.5204,
                        0.004,
                        certify::LambdaMode::Measured,
                        NuMode::ExactSum,
                    )
                    .unwrap();
                    let cert = certify::translated_certificate_at(&params, delta).unwrap();
                    instances += 1;
                    if cert.is_certified() {
                        certified += 1;
                        let ev = lp::en_value(n, k, &WeightWindow::two_sided(n, delta)).unwrap();
                        assert_eq!(ev, EnValue::Zero, "translated unsound at n={n} k={k}");
                    }
                }
            }
        }
    }
    assert!(
        certified > 0,
        "the sweep should contain genuinely certified points (empty tails at least)"
    );
    report(
        "C6 certificate soundness",
        t0,
        120.0,
        &format!("{instances} certificates, {certified} certified, 0 LP contradictions"),
    );
}

/// Criterion 7: the full pipeline at the headline constants finds a concrete
/// (n, k) in the scaling regime where every condition passes with the
/// log-domain ν. Frozen fixture: n = 2^61, k = 738.
#[test]
fn criterion_7_paper_scale_certificate() {
    let t0 = Instant::now();
    let points = certify::certificate_power_sweep(
        40..=61,
        certify::PAPER_ALPHA,
        certify::PAPER_BETA,
        certify::PAPER_EPSILON,
        certify::LambdaMode::PaperBound,
        NuMode::LogFloatSum,
    )
    .unwrap();
    let first = points
        .iter()
        .find(|p| p.certified)
        .expect("a certified point exists in the swept range");
    assert_eq!((first.power, first.n, first.k), (61, 1u64 << 61, 738));
    // the regime constraint and all recorded conditions
    let nf = first.n as f64;
    assert!(first.k as f64 <= nf.cbrt() / (nf.ln() * nf.ln()));
    let cert = first.certificate.as_ref().unwrap();
    assert!(cert.conditions.iter().all(|c| c.passed));
    assert_eq!(cert.nu_provenance, "log_float_sum");
    let slack = cert.condition("nu_le_rhs").unwrap().slack;
    assert!(
        (slack - 0.3482).abs() < 0.01,
        "regression: certification margin drifted, slack = {slack}"
    );
    // no earlier power certifies
    assert!(points
        .iter()
        .filter(|p| p.power < 61)
        .all(|p| !p.certified));
    // estimate-mode dominance at the certified point: the closed-form ν
    // bound must sit above the summed ν
    let params = CertificateParams::new(
        first.n,
        first.k,
        certify::PAPER_ALPHA,
        certify::PAPER_BETA,
        certify::PAPER_EPSILON,
        certify::LambdaMode::PaperBound,
        NuMode::ClosedFormEstimate,
    )
    .unwrap();
    let est = certify::translated_certificate(&params).unwrap();
    assert!(
        est.nu_ln.unwrap() >= cert.nu_ln.unwrap(),
        "closed-form estimate must only loosen"
    );
    report(
        "C7 paper-scale certificate",
        t0,
        600.0,
        &format!(
            "first certified at n = 2^{}, k = {}, log-margin {:.4}",
            first.power, first.k, slack
        ),
    );
}

/// Criterion 8: Hoeffding dominance exhaustively to n = 500, and the
/// normal-approximation sandwich at n = 10^6 over |w - n/2| ≤ 5000.
#[test]
fn criterion_8_tail_bound_dominance() {
    let t0 = Instant::now();
    // exhaustive Hoeffding in the log domain via exact pmf rows
    let mut row: Vec<num_bigint::BigInt> = vec![num_bigint::BigInt::from(1)];
    for n in 0..=500u64 {
        if n > 0 {
            let mut next = vec![num_bigint::BigInt::from(1); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        for (w, c) in row.iter().enumerate() {
            let ln_pmf = covrad::scalar::bigint_ln(c) - n as f64 * std::f64::consts::LN_2;
            let d = w as f64 - n as f64 / 2.0;
            let ln_bound = -2.0 * d * d / (n.max(1)) as f64;
            assert!(
                ln_pmf <= ln_bound + 1e-9,
                "Hoeffding violated at n={n} w={w}"
            );
        }
    }
    // sampled log-domain dominance at n = 10^5
    let n = 100_000u64;
    for w in (0..=n).step_by(997) {
        let lp = binom::ln_pmf(n, w).unwrap();
        let d = w as f64 - n as f64 / 2.0;
        assert!(lp <= -2.0 * d * d / n as f64 + 1e-9, "w={w}");
    }
    // normal-approximation sandwich at n = 10^6
    let n = 1_000_000u64;
    for dd in 0..=5000i64 {
        for w in [(n as i64 / 2 - dd) as u64, (n as i64 / 2 + dd) as u64] {
            let lp = binom::ln_pmf(n, w).unwrap();
            let d = w as f64 - n as f64 / 2.0;
            let expo = -2.0 * d * d / n as f64;
            let lo = expo - 0.5 * (2.0 * n as f64).ln();
            let hi = expo - 0.5 * (n as f64).ln();
            assert!(lo <= lp && lp <= hi, "sandwich fails at w={w}: {lo} {lp} {hi}");
        }
    }
    report(
        "C8 tail-bound dominance",
        t0,
        60.0,
        "Hoeffding exhaustive to n=500; sandwich at n=10^6, |d| <= 5000",
    );
}

/// Criterion 9: the derivative norm inequality and the outside-interval
/// growth bound hold on random polynomials with margin ≥ -1e-9.
#[test]
fn criterion_9_approximation_theory_suite() {
    let t0 = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);

    let sup_abs = |p: &SymbolicPoly, a: f64, b: f64| -> f64 {
        let grid = 2000;
        let step = (b - a) / grid as f64;
        let mut best = f64::NEG_INFINITY;
        let mut best_x = a;
        for i in 0..=grid {
            let x = a + step * i as f64;
            let v = p.eval_f64(x).abs();
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // golden refinement around the best grid point
        let (mut lo, mut hi) = ((best_x - step).max(a), (best_x + step).min(b));
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        for _ in 0..60 {
            let c = hi - INV_PHI * (hi - lo);
            let d = lo + INV_PHI * (hi - lo);
            if p.eval_f64(c).abs() > p.eval_f64(d).abs() {
                hi = d;
            } else {
                lo = c;
            }
        }
        best.max(p.eval_f64(0.5 * (lo + hi)).abs())
    };

    // derivative norm: ||p'|| <= k^2 ||p|| on [-1,1]
    for trial in 0..100 {
        let k = rng.gen_range(1..=8usize);
        let coeffs: Vec<Rational> = (0..=k)
            .map(|_| rational_from_f64(rng.gen_range(-1.0..1.0)))
            .collect();
        let p = SymbolicPoly::monomial(coeffs).unwrap();
        let dp = p.derivative().unwrap();
        let np = sup_abs(&p, -1.0, 1.0);
        let ndp = sup_abs(&dp, -1.0, 1.0);
        let margin = (k * k) as f64 * np - ndp;
        assert!(margin >= -1e-9, "trial {trial}: margin {margin}");
    }

    // growth bound outside the node interval
    for trial in 0..100 {
        let k = rng.gen_range(1..=8usize);
        let nodes = seq::extended_chebyshev(k).unwrap();
        let coeffs: Vec<Rational> = (0..=k)
            .map(|_| rational_from_f64(rng.gen_range(-1.0..1.0)))
            .collect();
        let p = SymbolicPoly::monomial(coeffs).unwrap();
        let norm = nodes
            .points()
            .iter()
            .map(|&x| p.eval_f64(x).abs())
            .fold(0.0f64, f64::max);
        if norm == 0.0 {
            continue;
        }
        let x = if rng.gen_bool(0.5) {
            rng.gen_range(1.001..4.0)
        } else {
            rng.gen_range(-4.0..-1.001)
        };
        let bound = seq::outside_bound(&nodes, norm, x).unwrap();
        let val = p.eval_f64(x).abs();
        assert!(
            val - bound <= 1e-9 * bound.max(1.0),
            "trial {trial}: |p({x})| = {val} above bound {bound}"
        );
    }
    report(
        "C9 approximation-theory suite",
        t0,
        30.0,
        "100 derivative-norm trials + 100 growth-bound trials",
    );
}

/// Companion regression: the log-domain pmf agrees with exact rationals, and
/// the log-float ν dominates the exact ν wherever both run (estimates only
/// loosen; checked at the certified paper-scale point inside criterion 7).
#[test]
fn mode_dominance_small_scale() {
    let n = 2000u64;
    let k = 4u64;
    let delta = 60.0;
    let w = PointSeq::new(vec![940.0, 970.0, 1000.0, 1030.0, 1060.0]).unwrap();
    let exact = certify::one_sequence_certificate(n, k, delta, &w, NuMode::ExactSum).unwrap();
    let logf = certify::one_sequence_certificate(n, k, delta, &w, NuMode::LogFloatSum).unwrap();
    let (a, b) = (exact.nu_ln.unwrap(), logf.nu_ln.unwrap());
    assert!(b >= a - 1e-9, "log-float ν must not undercount: {b} vs {a}");
    assert!((a - b).abs() < 1e-7);
    // pmf spot agreement
    for w in [0u64, 500, 999, 1000, 1500, 2000] {
        let lf = binom::ln_pmf(n, w).unwrap();
        let ex = rational_ln(&binom::exact_pmf(n, w).unwrap());
        assert!((lf - ex).abs() < 1e-10, "w={w}");
    }
}
