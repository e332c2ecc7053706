//! `covrad`: exact covering-radius window thresholds, witness distributions,
//! tail-sum certificates, and node-system diagnostics.
//!
//! Exit codes: 0 on success / Certified, 1 on NotCertified / infeasible,
//! 2 on usage errors. JSON output is canonical (sorted keys), so parsing a
//! report and re-serializing it is byte-identical.

use clap::{Args, Parser, Subcommand, ValueEnum};
use covrad::binom;
use covrad::certify::{
    self, scaling_degree, tietavainen_radius_bound, CertificateParams, LambdaMode, NuMode,
};
use covrad::lp::{self, WeightWindow, WitnessOutcome};
use covrad::oracle;
use covrad::seq;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "covrad", version, about)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value = "human")]
    output: OutputMode,
    /// Seed echoed into reports; reserved for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NuModeArg {
    Exact,
    Logfloat,
    Estimate,
}

impl From<NuModeArg> for NuMode {
    fn from(v: NuModeArg) -> NuMode {
        match v {
            NuModeArg::Exact => NuMode::ExactSum,
            NuModeArg::Logfloat => NuMode::LogFloatSum,
            NuModeArg::Estimate => NuMode::ClosedFormEstimate,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LambdaModeArg {
    Paper,
    Measured,
}

impl From<LambdaModeArg> for LambdaMode {
    fn from(v: LambdaModeArg) -> LambdaMode {
        match v {
            LambdaModeArg::Paper => LambdaMode::PaperBound,
            LambdaModeArg::Measured => LambdaMode::Measured,
        }
    }
}

/// Inclusive integer range: `24` or `10..30`.
#[derive(Clone, Copy, Debug)]
struct RangeArg {
    lo: u64,
    hi: u64,
}

impl RangeArg {
    fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }

    fn is_single(&self) -> bool {
        self.lo == self.hi
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((a, b)) = s.split_once("..") {
            let lo = a.parse().map_err(|_| format!("bad range start `{a}`"))?;
            let hi = b.parse().map_err(|_| format!("bad range end `{b}`"))?;
            if lo > hi {
                return Err(format!("empty range `{s}`"));
            }
            Ok(RangeArg { lo, hi })
        } else {
            let v = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
            Ok(RangeArg { lo: v, hi: v })
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact minimal window half-widths Δ*, with the classical lower bound
    /// and the mirrored upper window.
    DeltaStar {
        #[arg(long)]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// Tail-sum certificate for E_n(k, √(αkn)) = 0. Ranges over n or k emit
    /// one JSON line per pair.
    Certify(CertifyArgs),
    /// Witness distribution supported at distance ≥ R from the origin, with
    /// cube verification when n ≤ 14.
    Construct {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        radius: f64,
    },
    /// Optimized constants: the minimum of h over (β, ε) and the headline
    /// evaluation h(0.5204, 0.004).
    Constants {
        #[arg(long, default_value_t = 0.002)]
        grid_step: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Lebesgue constant of a node system with the matching closed-form
    /// bound and slack.
    Lebesgue {
        /// Extended Chebyshev nodes of degree k.
        #[arg(long, conflicts_with_all = ["equispaced", "nodes"])]
        chebyshev: Option<usize>,
        /// Equally spaced nodes of degree k.
        #[arg(long, conflicts_with = "nodes")]
        equispaced: Option<usize>,
        /// Node file: `# n=<n> k=<k>` header then one point per line.
        #[arg(long)]
        nodes: Option<std::path::PathBuf>,
    },
    /// Covering-radius bound from dual distance d beside the dual-BCH-style
    /// lower bound (when n = 2^m - 1 and d is odd).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    n: Option<RangeArg>,
    #[arg(long)]
    k: Option<RangeArg>,
    /// Sweep n = 2^p over this power range with k = ⌊n^{1/3}/ln²n⌋.
    #[arg(long, conflicts_with_all = ["n", "k"])]
    powers: Option<RangeArg>,
    #[arg(long, default_value_t = certify::PAPER_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = certify::PAPER_BETA)]
    beta: f64,
    #[arg(long, default_value_t = certify::PAPER_EPSILON)]
    eps: f64,
    #[arg(long, value_enum, default_value = "logfloat")]
    nu_mode: NuModeArg,
    #[arg(long, value_enum, default_value = "paper")]
    lambda_mode: LambdaModeArg,
    /// Allow exact tail sums beyond n = 5000.
    #[arg(long)]
    force: bool,
}

struct Ctx {
    output: OutputMode,
    config: Value,
    started: Instant,
}

impl Ctx {
    fn report(&self, result: Value, conditions: Value) -> String {
        let body = json!({
            "config": self.config,
            "result": result,
            "conditions": conditions,
            "timing": {"seconds": self.started.elapsed().as_secs_f64()},
        });
        serde_json::to_string(&body).expect("report serializes")
    }
}

fn fraction(r: &covrad::Rational) -> String {
    r.to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    let config = config_echo(&cli);
    let ctx = Ctx {
        output: cli.output,
        config,
        started: Instant::now(),
    };
    match run(&cli.command, &ctx) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn config_echo(cli: &Cli) -> Value {
    let command = match &cli.command {
        Command::DeltaStar { n, k } => json!({
            "name": "delta-star",
            "n": format!("{}..{}", n.lo, n.hi),
            "k": format!("{}..{}", k.lo, k.hi),
        }),
        Command::Certify(a) => json!({
            "name": "certify",
            "n": a.n.map(|r| format!("{}..{}", r.lo, r.hi)),
            "k": a.k.map(|r| format!("{}..{}", r.lo, r.hi)),
            "powers": a.powers.map(|r| format!("{}..{}", r.lo, r.hi)),
            "alpha": a.alpha,
            "beta": a.beta,
            "eps": a.eps,
            "nu_mode": match a.nu_mode { NuModeArg::Exact => "exact", NuModeArg::Logfloat => "logfloat", NuModeArg::Estimate => "estimate" },
            "lambda_mode": match a.lambda_mode { LambdaModeArg::Paper => "paper", LambdaModeArg::Measured => "measured" },
            "force": a.force,
        }),
        Command::Construct { n, k, radius } => {
            json!({"name": "construct", "n": n, "k": k, "radius": radius})
        }
        Command::Constants { grid_step, tol } => {
            json!({"name": "constants", "grid_step": grid_step, "tol": tol})
        }
        Command::Lebesgue {
            chebyshev,
            equispaced,
            nodes,
        } => json!({
            "name": "lebesgue",
            "chebyshev": chebyshev,
            "equispaced": equispaced,
            "nodes": nodes.as_ref().map(|p| p.display().to_string()),
        }),
        Command::Bounds { n, d } => json!({"name": "bounds", "n": n, "d": d}),
    };
    json!({
        "command": command,
        "output": match cli.output { OutputMode::Human => "human", OutputMode::Json => "json", OutputMode::Csv => "csv" },
        "seed": cli.seed,
        "jobs": cli.jobs,
    })
}

fn run(command: &Command, ctx: &Ctx) -> Result<ExitCode, String> {
    match command {
        Command::DeltaStar { n, k } => cmd_delta_star(*n, *k, ctx),
        Command::Certify(args) => cmd_certify(args, ctx),
        Command::Construct { n, k, radius } => cmd_construct(*n, *k, *radius, ctx),
        Command::Constants { grid_step, tol } => cmd_constants(*grid_step, *tol, ctx),
        Command::Lebesgue {
            chebyshev,
            equispaced,
            nodes,
        } => cmd_lebesgue(*chebyshev, *equispaced, nodes.as_deref(), ctx),
        Command::Bounds { n, d } => cmd_bounds(*n, *d, ctx),
    }
}

fn cmd_delta_star(n: RangeArg, k: RangeArg, ctx: &Ctx) -> Result<ExitCode, String> {
    use rayon::prelude::*;
    let pairs: Vec<(u64, u64)> = n
        .iter()
        .flat_map(|nn| k.iter().map(move |kk| (nn, kk)))
        .collect();
    if pairs.is_empty() {
        return Err("empty (n, k) grid".into());
    }
    for &(nn, kk) in &pairs {
        if kk >= nn {
            return Err(format!(
                "k = {kk} must be below n = {nn}; the full-degree LP admits only the binomial distribution"
            ));
        }
    }
    let rows: Vec<Value> = pairs
        .par_iter()
        .map(|&(nn, kk)| {
            let ds = lp::delta_star(nn, kk).map_err(|e| e.to_string())?;
            let lb = certify::delta_star_lower_bound(nn, kk).map_err(|e| e.to_string())?;
            let ub = certify::delta_star_upper_window(nn, kk).map_err(|e| e.to_string())?;
            Ok(json!({
                "n": nn,
                "k": kk,
                "delta_star_window": covrad::scalar::rational_to_f64(&ds.half_width),
                "delta_star_exact": fraction(&ds.half_width),
                "window_lo": ds.window.0,
                "window_hi": ds.window.1,
                "tietavainen_lb": lb,
                "tietavainen_ub": ub,
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    match ctx.output {
        OutputMode::Csv => {
            println!("# config: {}", serde_json::to_string(&ctx.config).unwrap());
            println!("n,k,delta_star_window,tietavainen_lb,tietavainen_ub");
            for r in &rows {
                println!(
                    "{},{},{},{},{}",
                    r["n"], r["k"], r["delta_star_window"], r["tietavainen_lb"], r["tietavainen_ub"]
                );
            }
        }
        OutputMode::Json => println!("{}", ctx.report(json!({"rows": rows}), json!([]))),
        OutputMode::Human => {
            println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
            println!(
                "{:>5} {:>3} {:>14} {:>16} {:>14} {:>14}",
                "n", "k", "delta_star", "exact", "tiet_lb", "tiet_ub"
            );
            for r in &rows {
                println!(
                    "{:>5} {:>3} {:>14} {:>16} {:>14.4} {:>14.4}",
                    r["n"],
                    r["k"],
                    r["delta_star_window"],
                    r["delta_star_exact"].as_str().unwrap(),
                    r["tietavainen_lb"].as_f64().unwrap(),
                    r["tietavainen_ub"].as_f64().unwrap()
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn certificate_for(
    n: u64,
    k: u64,
    args: &CertifyArgs,
) -> Result<covrad::certify::Certificate, String> {
    let params = CertificateParams::new(
        n,
        k,
        args.alpha,
        args.beta,
        args.eps,
        args.lambda_mode.into(),
        args.nu_mode.into(),
    )
    .map_err(|e| e.to_string())?;
    certify::translated_certificate(&params).map_err(|e| e.to_string())
}

fn cmd_certify(args: &CertifyArgs, ctx: &Ctx) -> Result<ExitCode, String> {
    use rayon::prelude::*;
    if args.nu_mode == NuModeArg::Exact && !args.force {
        let max_n = args
            .powers
            .map(|p| 1u64 << p.hi.min(62))
            .or(args.n.map(|r| r.hi))
            .unwrap_or(0);
        if max_n > binom::EXACT_DEFAULT_LIMIT {
            return Err(format!(
                "exact ν summation beyond n = {} needs --force",
                binom::EXACT_DEFAULT_LIMIT
            ));
        }
    }
    // power sweep: n = 2^p, k from the scaling budget
    if let Some(powers) = args.powers {
        if powers.hi >= 63 {
            return Err("powers above 62 overflow u64".into());
        }
        let mut any_certified = false;
        for p in powers.iter() {
            let n = 1u64 << p;
            let k = scaling_degree(n);
            let line = if k < 1 {
                json!({"power": p, "n": n, "k": k, "skipped": "scaling degree is zero"})
            } else {
                let cert = certificate_for(n, k, args)?;
                any_certified |= cert.is_certified();
                json!({
                    "config": ctx.config,
                    "power": p,
                    "result": cert.to_json(),
                    "conditions": cert.to_json()["conditions"],
                    "timing": {"seconds": ctx.started.elapsed().as_secs_f64()},
                })
            };
            println!("{}", serde_json::to_string(&line).unwrap());
        }
        return Ok(if any_certified {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    let n = args.n.ok_or("certify needs --n (or --powers)")?;
    let k = args.k.ok_or("certify needs --k (or --powers)")?;
    if n.is_single() && k.is_single() {
        let cert = certificate_for(n.lo, k.lo, args)?;
        let certified = cert.is_certified();
        match ctx.output {
            OutputMode::Json | OutputMode::Csv => {
                println!(
                    "{}",
                    ctx.report(cert.to_json(), cert.to_json()["conditions"].clone())
                );
            }
            OutputMode::Human => {
                println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
                println!(
                    "n = {}, k = {}, delta = {:.4}",
                    cert.params.n, cert.params.k, cert.delta
                );
                if let (Some(r), Some(t), Some(p)) = (cert.radius, cert.min_gap, cert.offset_p) {
                    println!("sequence: radius {r}, min gap {t}, translation offset {p}");
                }
                if let (Some(nu), Some(rhs)) = (cert.nu_ln, cert.rhs_ln) {
                    println!("ln nu = {nu:.6} ({}), ln rhs = {rhs:.6}", cert.nu_provenance);
                }
                for c in &cert.conditions {
                    println!(
                        "  [{}] {:<28} lhs {:>14.6} rhs {:>14.6} slack {:>12.6}",
                        if c.passed { "ok" } else { "FAIL" },
                        c.name,
                        c.lhs,
                        c.rhs,
                        c.slack
                    );
                }
                println!("verdict: {:?}", cert.verdict);
            }
        }
        return Ok(if certified {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    // grid sweep: one JSON line per (n, k)
    let pairs: Vec<(u64, u64)> = n
        .iter()
        .flat_map(|nn| k.iter().map(move |kk| (nn, kk)))
        .collect();
    let reports: Vec<(bool, String)> = pairs
        .par_iter()
        .map(|&(nn, kk)| {
            let cert = certificate_for(nn, kk, args)?;
            let line = json!({
                "config": ctx.config,
                "result": cert.to_json(),
                "conditions": cert.to_json()["conditions"],
                "timing": {"seconds": ctx.started.elapsed().as_secs_f64()},
            });
            Ok((cert.is_certified(), serde_json::to_string(&line).unwrap()))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let mut any = false;
    for (ok, line) in &reports {
        any |= ok;
        println!("{line}");
    }
    Ok(if any { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_construct(n: u64, k: u64, radius: f64, ctx: &Ctx) -> Result<ExitCode, String> {
    if k < 1 || k > n {
        return Err(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
    }
    if n > 40 {
        return Err("construction is a desk-scale tool; use n <= 40".into());
    }
    let window = WeightWindow::one_sided(n, radius);
    let outcome = lp::witness_distribution(n, k, &window).map_err(|e| e.to_string())?;
    match outcome {
        WitnessOutcome::Distribution(wd) => {
            let probs: Vec<Value> = wd
                .probs()
                .iter()
                .enumerate()
                .filter(|(_, p)| !num_traits::Zero::is_zero(*p))
                .map(|(w, p)| json!({"weight": w, "probability": fraction(p)}))
                .collect();
            let verification = if n <= 14 {
                let mu = oracle::lift(&wd).map_err(|e| e.to_string())?;
                let violation = oracle::kwise_check(&mu, k as u32);
                let cr = oracle::covering_radius(&mu.support_masks(), n as u32)
                    .map_err(|e| e.to_string())?;
                Some(json!({
                    "character_sums_pass": violation.is_none(),
                    "first_violation": violation,
                    "support_size": mu.support().len(),
                    "covering_radius": cr,
                    "covering_radius_at_least_requested": cr as f64 >= radius,
                }))
            } else {
                None
            };
            if let Some(v) = &verification {
                if v["character_sums_pass"] != json!(true) {
                    return Err("internal: lifted witness failed the character-sum oracle".into());
                }
            }
            let result = json!({
                "feasible": true,
                "support": probs,
                "moment_checks_pass": wd.check_kwise(k).is_ok(),
                "verification": verification,
            });
            match ctx.output {
                OutputMode::Json | OutputMode::Csv => {
                    println!("{}", ctx.report(result, json!([])))
                }
                OutputMode::Human => {
                    println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
                    println!("feasible: a {k}-wise independent distribution supported at distance >= {radius} from 0:");
                    for (w, p) in wd.probs().iter().enumerate() {
                        if !num_traits::Zero::is_zero(p) {
                            println!("  pi({w}) = {}", fraction(p));
                        }
                    }
                    if let Some(v) = &result["verification"].as_object() {
                        println!(
                            "cube verification: character sums pass = {}, covering radius = {}",
                            v["character_sums_pass"], v["covering_radius"]
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        WitnessOutcome::Impossible { dual_polynomial } => {
            let coeffs: Vec<String> = dual_polynomial.coeffs().iter().map(fraction).collect();
            let result = json!({
                "feasible": false,
                "impossibility_certificate": {
                    "basis": "krawtchouk",
                    "coefficients": coeffs,
                },
            });
            match ctx.output {
                OutputMode::Json | OutputMode::Csv => {
                    println!("{}", ctx.report(result, json!([])))
                }
                OutputMode::Human => {
                    println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
                    println!("infeasible: no {k}-wise independent distribution avoids the ball of radius {radius}.");
                    println!("impossibility certificate (Krawtchouk coefficients, positive binomial mean, nonpositive on the window):");
                    for (t, c) in dual_polynomial.coeffs().iter().enumerate() {
                        println!("  a_{t} = {}", fraction(c));
                    }
                }
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_constants(grid_step: f64, tol: f64, ctx: &Ctx) -> Result<ExitCode, String> {
    let opt = certify::optimize_alpha_star(grid_step, tol);
    let headline = certify::h_function(certify::PAPER_BETA, certify::PAPER_EPSILON)
        .map_err(|e| e.to_string())?;
    let result = json!({
        "alpha_star": opt.alpha_star,
        "argmin_beta": opt.beta,
        "argmin_epsilon": opt.epsilon,
        "h_at_headline": headline,
        "headline_beta": certify::PAPER_BETA,
        "headline_epsilon": certify::PAPER_EPSILON,
    });
    match ctx.output {
        OutputMode::Json | OutputMode::Csv => println!("{}", ctx.report(result, json!([]))),
        OutputMode::Human => {
            println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
            println!(
                "alpha* = {:.6} at beta = {:.6}, epsilon = {:.6}",
                opt.alpha_star, opt.beta, opt.epsilon
            );
            println!(
                "h({}, {}) = {:.6}",
                certify::PAPER_BETA,
                certify::PAPER_EPSILON,
                headline
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lebesgue(
    chebyshev: Option<usize>,
    equispaced: Option<usize>,
    nodes: Option<&std::path::Path>,
    ctx: &Ctx,
) -> Result<ExitCode, String> {
    let (seq, label, bound): (seq::PointSeq, String, Option<f64>) = match (chebyshev, equispaced, nodes) {
        (Some(k), None, None) => {
            let s = seq::extended_chebyshev(k).map_err(|e| e.to_string())?;
            let b = (2.0 / std::f64::consts::PI) * ((k + 1) as f64).ln() + 0.7213;
            (s, format!("extended chebyshev k={k}"), Some(b))
        }
        (None, Some(k), None) => {
            let s = seq::equally_spaced(k).map_err(|e| e.to_string())?;
            let b = 2.0f64.powi(k as i32 + 3) / k as f64;
            (s, format!("equally spaced k={k}"), Some(b))
        }
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let (s, n) = seq::parse_node_file(&text).map_err(|e| e.to_string())?;
            (s, format!("node file (n={n})"), None)
        }
        _ => return Err("choose exactly one of --chebyshev, --equispaced, --nodes".into()),
    };
    let lambda = seq::lebesgue_constant(&seq, 64, 1e-10);
    let result = json!({
        "nodes": label,
        "k": seq.degree(),
        "lambda": lambda,
        "bound": bound,
        "slack": bound.map(|b| b - lambda),
    });
    match ctx.output {
        OutputMode::Json | OutputMode::Csv => println!("{}", ctx.report(result, json!([]))),
        OutputMode::Human => {
            println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
            match bound {
                Some(b) => println!(
                    "{label}: Lambda = {lambda:.8}, bound = {b:.8}, slack = {:.8}",
                    b - lambda
                ),
                None => println!("{label}: Lambda = {lambda:.8}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(n: u64, d: u64, ctx: &Ctx) -> Result<ExitCode, String> {
    let upper = tietavainen_radius_bound(n, d).map_err(|e| e.to_string())?;
    // dual-BCH-style lower bound applies when n = 2^m - 1 and d = 2s+1
    let bch = if (n + 1).is_power_of_two() && d % 2 == 1 && d >= 3 {
        let m = (n + 1).trailing_zeros();
        certify::bch_lower_bound(m, d / 2).ok()
    } else {
        None
    };
    let result = json!({
        "n": n,
        "d": d,
        "covering_radius_upper": upper,
        "bch_style_lower": bch,
    });
    match ctx.output {
        OutputMode::Json | OutputMode::Csv => println!("{}", ctx.report(result, json!([]))),
        OutputMode::Human => {
            println!("config: {}", serde_json::to_string(&ctx.config).unwrap());
            let mut line = String::new();
            write!(line, "n = {n}, dual distance {d}: covering radius <= {upper:.4}").unwrap();
            if let Some(b) = bch {
                write!(line, "; dual-BCH-style construction reaches >= {b:.4}").unwrap();
            }
            println!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
