//! Point sequences and their approximation-theory attributes: extended
//! Chebyshev and equally spaced node systems, Lebesgue constants, integer
//! quantization with exact centering, the out-of-interval growth bound, and
//! the distortion bound that controls quantization damage.

use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SeqError {
    #[error("sequence needs at least 2 strictly increasing finite points")]
    Malformed,
    #[error("degree budget k must be at least 1")]
    DegreeTooSmall,
    #[error("sequence is not centered at n/2 = {expected}, got center {got}")]
    NotCentered { expected: f64, got: f64 },
    #[error("minimum gap {gap} is below 3; rounding could collide or reorder points")]
    MinGapTooSmall { gap: f64 },
    #[error("quantization collided or reordered points")]
    QuantizeCollision,
    #[error("evaluation point {x} lies inside the node interval")]
    InsideInterval { x: f64 },
    #[error("distortion too large: gamma * k^2 * Lambda = {0} >= 1")]
    DistortionTooLarge(f64),
    #[error("node file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Strictly increasing finite sequence of node points. The `integral` flag
/// records that every point is an integer (set by quantization or detected on
/// construction).
#[derive(Debug, Clone, PartialEq)]
pub struct PointSeq {
    points: Vec<f64>,
    integral: bool,
}

impl PointSeq {
    pub fn new(points: Vec<f64>) -> Result<Self, SeqError> {
        if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
            return Err(SeqError::Malformed);
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SeqError::Malformed);
        }
        let integral = points.iter().all(|p| p.fract() == 0.0);
        Ok(Self { points, integral })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Degree budget: one less than the number of nodes.
    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.points[0], *self.points.last().unwrap())
    }

    pub fn center(&self) -> f64 {
        let (a, b) = self.interval();
        0.5 * (a + b)
    }

    pub fn radius(&self) -> f64 {
        let (a, b) = self.interval();
        0.5 * (b - a)
    }

    pub fn min_gap(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Affine image with the requested center and radius.
    pub fn scale_translate(&self, new_center: f64, new_radius: f64) -> PointSeq {
        assert!(new_radius > 0.0, "radius must be positive");
        let c = self.center();
        let r = self.radius();
        let points = self
            .points
            .iter()
            .map(|&x| new_center + (x - c) * (new_radius / r))
            .collect();
        PointSeq::new(points).expect("affine image of a valid sequence")
    }
}

/// Extended Chebyshev sequence: `k+1` increasing points
/// `-cos((2i-1)φ)/cos(φ)` with `φ = π/(2(k+1))`, endpoints exactly ±1 and
/// interior symmetric about 0.
pub fn extended_chebyshev(k: usize) -> Result<PointSeq, SeqError> {
    if k < 1 {
        return Err(SeqError::DegreeTooSmall);
    }
    let phi = std::f64::consts::PI / (2.0 * (k as f64 + 1.0));
    let cos_phi = phi.cos();
    let mut points: Vec<f64> = (1..=k + 1)
        .map(|i| -((2 * i - 1) as f64 * phi).cos() / cos_phi)
        .collect();
    // pin endpoints and symmetrize; the formula gives these exactly in reals
    let m = points.len();
    for i in 0..m / 2 {
        let s = 0.5 * (points[i] - points[m - 1 - i]);
        points[i] = s;
        points[m - 1 - i] = -s;
    }
    if m % 2 == 1 {
        points[m / 2] = 0.0;
    }
    points[0] = -1.0;
    points[m - 1] = 1.0;
    PointSeq::new(points)
}

/// `k+1` equally spaced points from -1 to 1.
pub fn equally_spaced(k: usize) -> Result<PointSeq, SeqError> {
    if k < 1 {
        return Err(SeqError::DegreeTooSmall);
    }
    let points = (0..=k)
        .map(|i| -1.0 + 2.0 * i as f64 / k as f64)
        .collect();
    PointSeq::new(points)
}

/// Nearest point of the quantization grid (integers, or half-integers when
/// `half` is set), ties resolved toward 0.
fn nearest_grid(x: f64, half: bool) -> f64 {
    let base = if half {
        (x - 0.5).floor() + 0.5
    } else {
        x.floor()
    };
    let up = base + 1.0;
    let dl = x - base;
    let du = up - x;
    if dl < du {
        base
    } else if du < dl {
        up
    } else if base.abs() <= up.abs() {
        base
    } else {
        up
    }
}

/// Largest grid point that does not exceed `x`.
fn floor_grid(x: f64, half: bool) -> f64 {
    if half {
        (x + 0.5).floor() - 0.5
    } else {
        x.floor()
    }
}

/// Quantizes center-offset coordinates (points minus n/2) onto the offset grid
/// of integer weights: integers when `n` is even, half-integers when odd.
/// Endpoints are pulled inward and mirrored so the quantized sequence is
/// centered exactly; interior points round to nearest with ties toward the
/// center. Offsets must be symmetric at the ends (a centered sequence) with
/// min gap ≥ 3.
pub fn quantize_offsets(offsets: &[f64], n_odd: bool) -> Result<Vec<f64>, SeqError> {
    let m = offsets.len();
    if m < 2 {
        return Err(SeqError::Malformed);
    }
    let top = *offsets.last().unwrap();
    let bottom = offsets[0];
    let center = 0.5 * (top + bottom);
    if center.abs() > 1e-9 * top.abs().max(1.0) {
        return Err(SeqError::NotCentered {
            expected: 0.0,
            got: center,
        });
    }
    let gap = offsets
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap < 3.0 {
        return Err(SeqError::MinGapTooSmall { gap });
    }
    let q_top = floor_grid(top, n_odd);
    let mut out = Vec::with_capacity(m);
    out.push(-q_top);
    for &x in &offsets[1..m - 1] {
        out.push(nearest_grid(x, n_odd));
    }
    out.push(q_top);
    // postconditions: strict order, |w_i - x_i| <= 1, interval containment
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SeqError::QuantizeCollision);
    }
    if out
        .iter()
        .zip(offsets)
        .any(|(&w, &x)| (w - x).abs() > 1.0 + 1e-9)
        || out[0] < bottom - 1e-9
        || *out.last().unwrap() > top + 1e-9
    {
        return Err(SeqError::QuantizeCollision);
    }
    Ok(out)
}

/// Quantizes a real sequence centered at `n/2` to an integer sequence with
/// center exactly `n/2`, interval contained in the original, and per-point
/// drift at most 1. Requires min gap ≥ 3 and `n ≤ 2^51` (coordinates must be
/// exact in f64; the certificate pipeline works in offset coordinates for
/// larger `n`).
pub fn quantize_centered(seq: &PointSeq, n: u64) -> Result<PointSeq, SeqError> {
    assert!(n < (1u64 << 51), "absolute coordinates need n < 2^51");
    let half_n = n as f64 / 2.0;
    let center = seq.center();
    if (center - half_n).abs() > 1e-9 * half_n.max(1.0) {
        return Err(SeqError::NotCentered {
            expected: half_n,
            got: center,
        });
    }
    let offsets: Vec<f64> = seq.points().iter().map(|&x| x - half_n).collect();
    let q = quantize_offsets(&offsets, n % 2 == 1)?;
    PointSeq::new(q.iter().map(|&d| d + half_n).collect())
}

/// Lebesgue constant of the node system: the max over the node interval of
/// `λ(x) = Σ_i |ℓ_i(x)|` (Lagrange basis), computed per consecutive-node gap
/// on a `grid_per_gap` grid followed by golden-section refinement to
/// `refine_tol` in x. The nodes are normalized to `[-1,1]` first; barycentric
/// weights keep the evaluation stable.
pub fn lebesgue_constant(seq: &PointSeq, grid_per_gap: usize, refine_tol: f64) -> f64 {
    let c = seq.center();
    let r = seq.radius();
    let xs: Vec<f64> = seq.points().iter().map(|&x| (x - c) / r).collect();
    let weights = barycentric_weights(&xs);
    let lambda = |x: f64| lebesgue_function(&xs, &weights, x);

    let grid = grid_per_gap.max(4);
    let mut best = 1.0f64;
    for g in 0..xs.len() - 1 {
        let (a, b) = (xs[g], xs[g + 1]);
        let step = (b - a) / (grid as f64 + 1.0);
        let mut gi = 0usize;
        let mut gbest = f64::NEG_INFINITY;
        for i in 1..=grid {
            let v = lambda(a + step * i as f64);
            if v > gbest {
                gbest = v;
                gi = i;
            }
        }
        let lo = a + step * (gi as f64 - 1.0);
        let hi = a + step * (gi as f64 + 1.0);
        let refined = golden_max(&lambda, lo.max(a), hi.min(b), refine_tol);
        best = best.max(refined);
    }
    best
}

fn barycentric_weights(xs: &[f64]) -> Vec<f64> {
    // log-domain accumulation so products over hundreds of nodes cannot
    // overflow (equally spaced weights grow like 2^k)
    let m = xs.len();
    let mut ln_w = vec![0.0f64; m];
    let mut sign = vec![1.0f64; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let d = xs[i] - xs[j];
                ln_w[i] -= d.abs().ln();
                if d < 0.0 {
                    sign[i] = -sign[i];
                }
            }
        }
    }
    let top = ln_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ln_w.iter()
        .zip(&sign)
        .map(|(&l, &s)| s * (l - top).exp())
        .collect()
}

fn lebesgue_function(xs: &[f64], w: &[f64], x: f64) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (&xi, &wi) in xs.iter().zip(w) {
        let d = x - xi;
        if d == 0.0 {
            return 1.0;
        }
        let t = wi / d;
        num += t.abs();
        den += t;
    }
    num / den.abs()
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while b - a > tol && iter < 200 {
        if fc > fd {
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
        iter += 1;
    }
    fc.max(fd).max(f(0.5 * (a + b)))
}

/// Growth bound for degree-≤k polynomials outside the node interval:
/// `|p(x)| ≤ ‖p‖_X · Λ(X) · |2(x - C(X)) / R(X)|^k`. The growth factor uses
/// the distance `|x - C(X)|` to the center. Errors if `x` lies inside the
/// interval.
pub fn outside_bound(seq: &PointSeq, max_abs_on_nodes: f64, x: f64) -> Result<f64, SeqError> {
    let (a, b) = seq.interval();
    if x >= a && x <= b {
        return Err(SeqError::InsideInterval { x });
    }
    if max_abs_on_nodes == 0.0 {
        return Ok(0.0);
    }
    let lambda = lebesgue_constant(seq, 64, 1e-10);
    let growth = (2.0 * (x - seq.center()).abs() / seq.radius()).powi(seq.degree() as i32);
    Ok(max_abs_on_nodes * lambda * growth)
}

/// Lebesgue constant after a distortion of relative size `gamma`:
/// `Λ(X') ≤ Λ(X) / (1 - γ k² Λ(X))`, valid while the denominator is positive.
pub fn distortion_bound(lambda_x: f64, k: usize, gamma: f64) -> Result<f64, SeqError> {
    let damp = gamma * (k as f64) * (k as f64) * lambda_x;
    if damp >= 1.0 {
        return Err(SeqError::DistortionTooLarge(damp));
    }
    Ok(lambda_x / (1.0 - damp))
}

/// Writes the line-oriented node format: `# n=<n> k=<k>` then one point per
/// line.
pub fn write_node_file(seq: &PointSeq, n: u64) -> String {
    let mut out = String::new();
    writeln!(out, "# n={} k={}", n, seq.degree()).unwrap();
    for p in seq.points() {
        writeln!(out, "{p}").unwrap();
    }
    out
}

/// Parses the node format written by [`write_node_file`]. Errors carry the
/// offending line number.
pub fn parse_node_file(text: &str) -> Result<(PointSeq, u64), SeqError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(SeqError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header.trim();
    let bad_header = |msg: &str| SeqError::Parse {
        line: 1,
        msg: msg.into(),
    };
    let rest = header
        .strip_prefix("# n=")
        .ok_or_else(|| bad_header("expected header `# n=<n> k=<k>`"))?;
    let (n_part, k_part) = rest
        .split_once(" k=")
        .ok_or_else(|| bad_header("expected header `# n=<n> k=<k>`"))?;
    let n: u64 = n_part
        .trim()
        .parse()
        .map_err(|_| bad_header("invalid n in header"))?;
    let k: usize = k_part
        .trim()
        .parse()
        .map_err(|_| bad_header("invalid k in header"))?;
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p: f64 = line.parse().map_err(|_| SeqError::Parse {
            line: idx + 1,
            msg: format!("invalid point `{line}`"),
        })?;
        points.push(p);
    }
    if points.len() != k + 1 {
        return Err(SeqError::Parse {
            line: points.len() + 1,
            msg: format!("expected {} points for k={}, got {}", k + 1, k, points.len()),
        });
    }
    let seq = PointSeq::new(points).map_err(|_| SeqError::Parse {
        line: 2,
        msg: "points must be strictly increasing and finite".into(),
    })?;
    Ok((seq, n))
}
