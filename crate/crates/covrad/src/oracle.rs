//! Brute-force ground truth on tiny hypercubes: character-sum independence
//! checks, exhaustive covering radius, lifting symmetric weight distributions
//! to the cube, a sign-pattern Lebesgue cross-check, and subset-enumeration
//! existence of symmetric k-wise independent distributions. Everything here
//! is deliberately independent of the LP and Lagrange machinery it validates.

use crate::lp::WeightDistribution;
use crate::scalar::{binomial, Rational};
use crate::seq::PointSeq;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use thiserror::Error;

/// Hard cap for cube enumeration; 2^20 states keeps the suite fast.
pub const MAX_CUBE_DIM: u32 = 20;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("cube dimension {n} exceeds the enumeration cap {MAX_CUBE_DIM}")]
    TooLarge { n: u32 },
    #[error("support must be non-empty")]
    EmptySupport,
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("sign-pattern cross-check supports at most 9 nodes, got {0}")]
    TooManyNodes(usize),
}

/// Distribution on `{0,1}^n` (n small) as an explicit support list of
/// (bitmask, probability) pairs with distinct masks.
#[derive(Debug, Clone)]
pub struct CubeDistribution {
    n: u32,
    support: Vec<(u32, Rational)>,
}

impl CubeDistribution {
    pub fn new(n: u32, support: Vec<(u32, Rational)>) -> Result<Self, OracleError> {
        if n > MAX_CUBE_DIM {
            return Err(OracleError::TooLarge { n });
        }
        if support.is_empty() {
            return Err(OracleError::EmptySupport);
        }
        let mut seen = std::collections::HashSet::new();
        let mut total = Rational::zero();
        for (mask, p) in &support {
            if *mask >= (1u32 << n) {
                return Err(OracleError::BadDistribution(format!(
                    "mask {mask:#b} outside the {n}-cube"
                )));
            }
            if !seen.insert(*mask) {
                return Err(OracleError::BadDistribution("duplicate mask".into()));
            }
            if p.is_negative() {
                return Err(OracleError::BadDistribution("negative probability".into()));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(OracleError::BadDistribution(format!(
                "total mass {total} != 1"
            )));
        }
        Ok(Self { n, support })
    }

    pub fn uniform(n: u32) -> Result<Self, OracleError> {
        if n > MAX_CUBE_DIM {
            return Err(OracleError::TooLarge { n });
        }
        let p = Rational::new(BigInt::one(), crate::scalar::pow2(n as u64));
        let support = (0u32..1 << n).map(|m| (m, p.clone())).collect();
        Self::new(n, support)
    }

    pub fn point_mass(n: u32, mask: u32) -> Result<Self, OracleError> {
        Self::new(n, vec![(mask, Rational::one())])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn support(&self) -> &[(u32, Rational)] {
        &self.support
    }

    pub fn support_masks(&self) -> Vec<u32> {
        self.support.iter().map(|&(m, _)| m).collect()
    }

    /// XOR-translate every support vector by `x`.
    pub fn translate(&self, x: u32) -> CubeDistribution {
        let support = self
            .support
            .iter()
            .map(|(m, p)| (m ^ x, p.clone()))
            .collect();
        CubeDistribution {
            n: self.n,
            support,
        }
    }
}

/// Lifts a symmetric weight distribution to the cube:
/// `μ(x) = π(|x|) / C(n, |x|)`, exactly.
pub fn lift(wd: &WeightDistribution) -> Result<CubeDistribution, OracleError> {
    let n = u32::try_from(wd.n()).unwrap_or(u32::MAX);
    if n > MAX_CUBE_DIM {
        return Err(OracleError::TooLarge { n });
    }
    let per_class: Vec<Option<Rational>> = wd
        .probs()
        .iter()
        .enumerate()
        .map(|(w, p)| (!p.is_zero()).then(|| p / Rational::from(binomial(wd.n(), w as u64))))
        .collect();
    let mut support = Vec::new();
    for mask in 0u32..1 << n {
        if let Some(p) = &per_class[mask.count_ones() as usize] {
            support.push((mask, p.clone()));
        }
    }
    CubeDistribution::new(n, support)
}

/// Exhaustively checks `E_μ χ_z = 0` for every nonzero `z` with `|z| ≤ k`,
/// in exact arithmetic. Returns the first violating `z` (in mask order), or
/// `None` when the distribution is k-wise independent.
pub fn kwise_check(mu: &CubeDistribution, k: u32) -> Option<u32> {
    // Group support points by probability value so the inner loop is pure
    // integer parity counting; each class contributes balance * p exactly.
    let mut classes: HashMap<Rational, usize> = HashMap::new();
    let mut class_of: Vec<(u32, usize)> = Vec::with_capacity(mu.support.len());
    for (mask, p) in &mu.support {
        let next = classes.len();
        let idx = *classes.entry(p.clone()).or_insert(next);
        class_of.push((*mask, idx));
    }
    let mut probs = vec![Rational::zero(); classes.len()];
    for (p, i) in classes {
        probs[i] = p;
    }
    let top = (1u32 << mu.n) - 1;
    let mut balance = vec![0i64; probs.len()];
    for z in 1..=top {
        if z.count_ones() > k {
            continue;
        }
        for b in balance.iter_mut() {
            *b = 0;
        }
        for &(mask, c) in &class_of {
            if (mask & z).count_ones() % 2 == 0 {
                balance[c] += 1;
            } else {
                balance[c] -= 1;
            }
        }
        let mut acc = Rational::zero();
        for (b, p) in balance.iter().zip(&probs) {
            if *b != 0 {
                acc += p * Rational::from(BigInt::from(*b));
            }
        }
        if !acc.is_zero() {
            return Some(z);
        }
    }
    None
}

/// Exact covering radius of a support set: `max_x min_{c in support} d(x,c)`,
/// computed by a multi-source breadth-first sweep over the cube (the same
/// max-min value as the exhaustive double loop, much faster).
pub fn covering_radius(support: &[u32], n: u32) -> Result<u32, OracleError> {
    if n > MAX_CUBE_DIM {
        return Err(OracleError::TooLarge { n });
    }
    if support.is_empty() {
        return Err(OracleError::EmptySupport);
    }
    let size = 1usize << n;
    let mut dist = vec![u8::MAX; size];
    let mut frontier: Vec<u32> = Vec::new();
    for &m in support {
        let m = m as usize & (size - 1);
        if dist[m] != 0 {
            dist[m] = 0;
            frontier.push(m as u32);
        }
    }
    let mut radius = 0u32;
    let mut d = 0u8;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            for bit in 0..n {
                let y = (x ^ (1 << bit)) as usize;
                if dist[y] == u8::MAX {
                    dist[y] = d;
                    next.push(y as u32);
                }
            }
        }
        if !next.is_empty() {
            radius = d as u32;
        }
        frontier = next;
    }
    Ok(radius)
}

/// Approximates the definitional Lebesgue constant by direct enumeration:
/// at each evaluation point the maximizing polynomial over
/// `{p : |p(x_i)| ≤ 1}` interpolates a ±1 sign pattern at the nodes, so the
/// max of `|p(x̂)|` is found by trying all `2^(k+1)` patterns with plain
/// Lagrange interpolation. Independent of the barycentric route.
pub fn lebesgue_crosscheck(seq: &PointSeq, grid_per_gap: usize) -> Result<f64, OracleError> {
    let m = seq.len();
    if m > 9 {
        return Err(OracleError::TooManyNodes(m));
    }
    let xs = seq.points().to_vec();
    let value_at = move |x: f64| -> f64 {
        let ell: Vec<f64> = (0..m)
            .map(|i| {
                let mut v = 1.0;
                for j in 0..m {
                    if j != i {
                        v *= (x - xs[j]) / (xs[i] - xs[j]);
                    }
                }
                v
            })
            .collect();
        let mut best = 0.0f64;
        for pattern in 0u32..1 << m {
            let mut p = 0.0;
            for (i, l) in ell.iter().enumerate() {
                p += if pattern & (1 << i) != 0 { *l } else { -*l };
            }
            best = best.max(p.abs());
        }
        best
    };
    let grid = grid_per_gap.max(8);
    let xs = seq.points();
    let mut best = 1.0f64;
    for g in 0..m - 1 {
        let (a, b) = (xs[g], xs[g + 1]);
        let step = (b - a) / (grid as f64 + 1.0);
        let mut gi = 0;
        let mut gbest = f64::NEG_INFINITY;
        for i in 1..=grid {
            let v = value_at(a + step * i as f64);
            if v > gbest {
                gbest = v;
                gi = i;
            }
        }
        let mut lo = (a + step * (gi as f64 - 1.0)).max(a);
        let mut hi = (a + step * (gi as f64 + 1.0)).min(b);
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let mut c = hi - INV_PHI * (hi - lo);
        let mut d = lo + INV_PHI * (hi - lo);
        let mut fc = value_at(c);
        let mut fd = value_at(d);
        for _ in 0..80 {
            if hi - lo <= 1e-12 {
                break;
            }
            if fc > fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - INV_PHI * (hi - lo);
                fc = value_at(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + INV_PHI * (hi - lo);
                fd = value_at(d);
            }
        }
        best = best.max(fc.max(fd)).max(gbest);
    }
    Ok(best)
}

/// Independent existence check for symmetric k-wise independent distributions
/// supported on the given weights: enumerate candidate supports of size up to
/// `k+1` (a basic feasible solution needs no more) and solve each moment
/// system exactly. Ground truth for the LP route on small instances.
pub fn symmetric_kwise_exists(n: u64, k: u64, weights: &[u64]) -> bool {
    for size in 1..=(k as usize + 1).min(weights.len()) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if moment_system_solvable(n, k, weights, &subset) {
                return true;
            }
            if !next_combination(&mut subset, weights.len()) {
                break;
            }
        }
    }
    false
}

fn next_combination(subset: &mut [usize], total: usize) -> bool {
    let size = subset.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if subset[i] != i + total - size {
            subset[i] += 1;
            for j in i + 1..size {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn moment_system_solvable(n: u64, k: u64, weights: &[u64], subset: &[usize]) -> bool {
    use crate::poly::krawtchouk;
    let s = subset.len();
    // rows t = 0..=k: Σ_j π_j K_t(w_j) = δ_{t,0}
    let mut rows: Vec<Vec<Rational>> = (0..=k)
        .map(|t| {
            let mut row: Vec<Rational> = subset
                .iter()
                .map(|&j| krawtchouk(n, t, weights[j]).expect("in range"))
                .collect();
            row.push(if t == 0 {
                Rational::one()
            } else {
                Rational::zero()
            });
            row
        })
        .collect();
    let m = rows.len();
    let mut piv: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for c in 0..s {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v /= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= &f * pv;
                }
            }
        }
        piv.push((r, c));
        r += 1;
        if r == m {
            break;
        }
    }
    for row in rows.iter().skip(r) {
        if row[..s].iter().all(|v| v.is_zero()) && !row[s].is_zero() {
            return false;
        }
    }
    // particular solution with free variables at zero
    let mut sol = vec![Rational::zero(); s];
    for &(i, c) in &piv {
        sol[c] = rows[i][s].clone();
    }
    if sol.iter().any(|v| v.is_negative()) {
        return false;
    }
    // re-verify every moment from scratch
    for t in 0..=k {
        let mut acc = Rational::zero();
        for (j, v) in subset.iter().zip(&sol) {
            acc += v * krawtchouk(n, t, weights[*j]).expect("in range");
        }
        let want = if t == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
        if acc != want {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{witness_distribution, WeightWindow, WitnessOutcome};
    use rand::{Rng, SeedableRng};

    #[test]
    fn uniform_is_fully_independent_and_point_mass_is_not() {
        let u = CubeDistribution::uniform(6).unwrap();
        assert_eq!(kwise_check(&u, 6), None);
        let p = CubeDistribution::point_mass(6, 0).unwrap();
        assert_eq!(kwise_check(&p, 1), Some(1), "first violating z is e_1");
    }

    #[test]
    fn lift_binomial_is_uniform() {
        let wd = WeightDistribution::binomial(5);
        let mu = lift(&wd).unwrap();
        assert_eq!(mu.support().len(), 32);
        let p = Rational::new(BigInt::one(), BigInt::from(32));
        assert!(mu.support().iter().all(|(_, q)| *q == p));
        assert_eq!(kwise_check(&mu, 5), None);
    }

    #[test]
    fn lift_point_mass_at_full_weight() {
        let mut probs = vec![Rational::zero(); 7];
        probs[6] = Rational::one();
        let wd = WeightDistribution::new(6, probs).unwrap();
        let mu = lift(&wd).unwrap();
        assert_eq!(mu.support(), &[(0b111111u32, Rational::one())]);
    }

    #[test]
    fn covering_radius_cases() {
        let n = 5u32;
        let all: Vec<u32> = (0..1 << n).collect();
        assert_eq!(covering_radius(&all, n).unwrap(), 0);
        assert_eq!(covering_radius(&[0], n).unwrap(), n);
        // support {x : |x| >= r} has covering radius r, witnessed by x = 0
        for r in 1..=n {
            let sup: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() >= r).collect();
            assert_eq!(covering_radius(&sup, n).unwrap(), r);
        }
        assert_eq!(covering_radius(&[], 4), Err(OracleError::EmptySupport));
    }

    #[test]
    fn lifted_lp_witness_passes_character_sums() {
        let window = WeightWindow::one_sided(10, 4.0);
        let WitnessOutcome::Distribution(wd) = witness_distribution(10, 2, &window).unwrap()
        else {
            panic!("window from weight 4 up is feasible for 2-wise at n = 10");
        };
        let mu = lift(&wd).unwrap();
        assert_eq!(kwise_check(&mu, 2), None);
        let cr = covering_radius(&mu.support_masks(), 10).unwrap();
        assert!(cr >= 4, "support stays at distance >= 4 from the origin");
    }

    #[test]
    fn translation_preserves_kwise_independence() {
        let window = WeightWindow::one_sided(9, 3.0);
        let WitnessOutcome::Distribution(wd) = witness_distribution(9, 2, &window).unwrap()
        else {
            panic!("feasible window");
        };
        let mu = lift(&wd).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = rng.gen_range(0u32..1 << 9);
            assert_eq!(kwise_check(&mu.translate(x), 2), None, "x={x:#b}");
        }
    }

    #[test]
    fn lebesgue_crosscheck_matches_lambda_route() {
        use crate::seq::{extended_chebyshev, lebesgue_constant};
        let two = PointSeq::new(vec![-1.0, 1.0]).unwrap();
        assert!((lebesgue_crosscheck(&two, 64).unwrap() - 1.0).abs() < 1e-9);

        let three = PointSeq::new(vec![-1.0, 0.0, 1.0]).unwrap();
        assert!((lebesgue_crosscheck(&three, 64).unwrap() - 1.25).abs() < 1e-7);

        let cheb4 = extended_chebyshev(4).unwrap();
        let a = lebesgue_crosscheck(&cheb4, 200).unwrap();
        let b = lebesgue_constant(&cheb4, 200, 1e-11);
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");

        let ten = extended_chebyshev(9).unwrap();
        assert!(matches!(
            lebesgue_crosscheck(&ten, 32),
            Err(OracleError::TooManyNodes(10))
        ));
    }

    #[test]
    fn lebesgue_crosscheck_random_sequences() {
        use crate::seq::lebesgue_constant;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let mut done = 0;
        while done < 50 {
            let m = rng.gen_range(2..=8usize);
            let mut pts: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if pts.windows(2).any(|w| w[1] - w[0] < 0.08) {
                continue;
            }
            let seq = PointSeq::new(pts).unwrap();
            let a = lebesgue_crosscheck(&seq, 96).unwrap();
            let b = lebesgue_constant(&seq, 96, 1e-11);
            assert!((a - b).abs() <= 1e-6 * a.max(1.0), "{a} vs {b}");
            done += 1;
        }
    }

    #[test]
    fn subset_enumeration_agrees_with_lp_delta_star() {
        use crate::lp::delta_star;
        for (n, k) in [(24u64, 3u64), (15, 2), (12, 4), (20, 1)] {
            let ds = delta_star(n, k).unwrap();
            let (lo, hi) = ds.window;
            let members: Vec<u64> = (lo..=hi).collect();
            assert!(
                symmetric_kwise_exists(n, k, &members),
                "minimal window must support a distribution (n={n}, k={k})"
            );
            if lo + 1 <= hi - 1 && hi >= 1 {
                let smaller: Vec<u64> = (lo + 1..=hi - 1).collect();
                if !smaller.is_empty() {
                    assert!(
                        !symmetric_kwise_exists(n, k, &smaller),
                        "threshold minimality (n={n}, k={k})"
                    );
                }
            }
        }
    }

    #[test]
    fn lifted_witness_character_check_fails_past_design_k() {
        // when the witness has a nonzero (k+1)-st Krawtchouk moment, the
        // lifted distribution must fail the (k+1)-wise character check
        let window = WeightWindow::one_sided(10, 4.0);
        let WitnessOutcome::Distribution(wd) = witness_distribution(10, 2, &window).unwrap()
        else {
            panic!("feasible window");
        };
        let mu = lift(&wd).unwrap();
        if !wd.krawtchouk_moment(3).is_zero() {
            let z = kwise_check(&mu, 3);
            assert!(z.is_some());
            assert_eq!(z.unwrap().count_ones(), 3);
        }
    }
}
