//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problem sizes here are tiny (tens of rows/columns), so a dense tableau
//! with big-rational entries is the right tradeoff: no tolerances, exact
//! optima, and machine-checkable infeasibility certificates from phase 1.

use crate::scalar::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// Minimization problem over `x` with per-variable sign freedom.
#[derive(Debug, Clone)]
pub struct Problem {
    pub num_vars: usize,
    /// Objective coefficients (minimized). Empty means pure feasibility.
    pub minimize: Vec<Rational>,
    /// `free[v]`: variable `v` is unrestricted in sign (internally split).
    pub free: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub enum SolveResult {
    /// Optimal basic solution with exact objective and row duals.
    Optimal {
        objective: Rational,
        primal: Vec<Rational>,
        dual: Vec<Rational>,
    },
    /// No feasible point; `farkas[i]` are multipliers for the b-≥-0 scaled
    /// rows proving it (nonnegative combination with zero structural columns
    /// and positive combined rhs). `row_sign[i]` records the scaling applied
    /// to original row `i` (+1 kept, -1 negated).
    Infeasible {
        farkas: Vec<Rational>,
        row_sign: Vec<i8>,
    },
    Unbounded,
}

struct Tableau {
    /// m x (ncols + 1), rhs in the last column.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost rows for phase 1 and phase 2; last entry is -objective.
    cost1: Vec<Rational>,
    cost2: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for i in 0..self.rows.len() {
            if i != row && !self.rows[i][col].is_zero() {
                let f = self.rows[i][col].clone();
                for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        for cost in [&mut self.cost1, &mut self.cost2] {
            if !cost[col].is_zero() {
                let f = cost[col].clone();
                for (v, p) in cost.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland: entering column = smallest index with negative reduced cost
    /// among columns below `col_limit`; leaving row = min ratio, ties broken
    /// by smallest basis index. Returns false at optimality.
    fn iterate(&mut self, phase1: bool, col_limit: usize) -> Result<bool, ()> {
        let cost = if phase1 { &self.cost1 } else { &self.cost2 };
        let entering = (0..col_limit).find(|&j| cost[j].is_negative());
        let Some(col) = entering else {
            return Ok(false);
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][col];
            if a.is_positive() {
                let ratio = &self.rows[i][self.ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        match leave {
            Some((row, _)) => {
                self.pivot(row, col);
                Ok(true)
            }
            None => Err(()), // unbounded in the entering direction
        }
    }
}

/// Solves the problem. `minimize` may be shorter than `num_vars` (missing
/// coefficients are zero).
pub fn solve(problem: &Problem) -> SolveResult {
    let n = problem.num_vars;
    let m = problem.constraints.len();
    debug_assert!(problem.free.len() == n);

    // column layout: split structural | slacks/surpluses | artificials
    let mut col_of_var = Vec::with_capacity(n); // (plus_col, minus_col option)
    let mut ncols = 0usize;
    for &f in &problem.free {
        col_of_var.push((ncols, f.then_some(ncols + 1)));
        ncols += if f { 2 } else { 1 };
    }
    let first_slack = ncols;
    let slack_rows: Vec<usize> = (0..m)
        .filter(|&i| problem.constraints[i].rel != Relation::Eq)
        .collect();
    ncols += slack_rows.len();
    let first_artificial = ncols;

    // scale rows to b >= 0, decide initial basis per row
    let mut row_sign = vec![1i8; m];
    let mut needs_artificial = Vec::with_capacity(m);
    for (i, c) in problem.constraints.iter().enumerate() {
        let mut rel = c.rel;
        if c.rhs.is_negative() {
            row_sign[i] = -1;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        // after scaling: Le rows start on their slack, others need artificials
        needs_artificial.push(rel != Relation::Le);
    }
    let num_artificial = needs_artificial.iter().filter(|&&b| b).count();
    ncols += num_artificial;

    let mut rows = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    let mut identity_col = vec![usize::MAX; m];
    let mut slack_idx = 0usize;
    let mut art_idx = 0usize;
    for (i, c) in problem.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        let s = Rational::from(num_bigint::BigInt::from(row_sign[i] as i64));
        for (v, coeff) in c.coeffs.iter().enumerate() {
            let val = coeff * &s;
            let (pc, mc) = col_of_var[v];
            row[pc] = val.clone();
            if let Some(mc) = mc {
                row[mc] = -val;
            }
        }
        row[ncols] = &c.rhs * &s;
        let rel = match c.rel {
            Relation::Eq => Relation::Eq,
            Relation::Le if row_sign[i] == 1 => Relation::Le,
            Relation::Le => Relation::Ge,
            Relation::Ge if row_sign[i] == 1 => Relation::Ge,
            Relation::Ge => Relation::Le,
        };
        if rel != Relation::Eq {
            let col = first_slack + slack_idx;
            slack_idx += 1;
            row[col] = if rel == Relation::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
            if rel == Relation::Le {
                basis[i] = col;
                identity_col[i] = col;
            }
        }
        if needs_artificial[i] {
            let col = first_artificial + art_idx;
            art_idx += 1;
            row[col] = Rational::one();
            basis[i] = col;
            identity_col[i] = col;
        }
        rows.push(row);
    }

    // phase-1 reduced costs: c = 1 on artificials, basis rows with artificials
    let mut cost1 = vec![Rational::zero(); ncols + 1];
    for j in first_artificial..ncols {
        cost1[j] = Rational::one();
    }
    for (i, row) in rows.iter().enumerate() {
        if basis[i] >= first_artificial {
            for (j, v) in cost1.iter_mut().enumerate() {
                *v -= &row[j];
            }
        }
    }

    // phase-2 reduced costs for the initial basis (slacks and artificials
    // all carry zero cost, so this is just the raw objective)
    let mut cost2 = vec![Rational::zero(); ncols + 1];
    for (v, coeff) in problem.minimize.iter().enumerate() {
        let (pc, mc) = col_of_var[v];
        cost2[pc] = coeff.clone();
        if let Some(mc) = mc {
            cost2[mc] = -coeff.clone();
        }
    }

    let mut t = Tableau {
        rows,
        cost1,
        cost2,
        basis,
        ncols,
        first_artificial,
    };

    // phase 1: drive artificial mass to zero (artificials never re-enter)
    while t.iterate(true, t.first_artificial).unwrap_or(false) {}
    let phase1_obj = -t.cost1[t.ncols].clone();
    if phase1_obj.is_positive() {
        // y_i = 1 - rc1(identity col) for artificial rows, -rc1 for slack rows
        let farkas = (0..m)
            .map(|i| {
                let rc = &t.cost1[identity_col[i]];
                if identity_col[i] >= t.first_artificial {
                    Rational::one() - rc
                } else {
                    -rc.clone()
                }
            })
            .collect();
        return SolveResult::Infeasible { farkas, row_sign };
    }

    // pivot remaining basic artificials out where possible
    for i in 0..m {
        if t.basis[i] >= t.first_artificial {
            let col = (0..t.first_artificial).find(|&j| !t.rows[i][j].is_zero());
            if let Some(col) = col {
                t.pivot(i, col);
            }
            // else: redundant row, keep it inert
        }
    }

    // phase 2
    loop {
        match t.iterate(false, t.first_artificial) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => return SolveResult::Unbounded,
        }
    }

    let mut x = vec![Rational::zero(); ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < ncols {
            x[b] = t.rows[i][t.ncols].clone();
        }
    }
    let primal = col_of_var
        .iter()
        .map(|&(pc, mc)| match mc {
            Some(mc) => &x[pc] - &x[mc],
            None => x[pc].clone(),
        })
        .collect();
    // duals from reduced costs under the per-row initial identity columns,
    // mapped back through the row scaling
    let dual = (0..m)
        .map(|i| {
            let y = -t.cost2[identity_col[i]].clone();
            if row_sign[i] == -1 {
                -y
            } else {
                y
            }
        })
        .collect();
    SolveResult::Optimal {
        objective: -t.cost2[t.ncols].clone(),
        primal,
        dual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn c(vals: &[i64], rel: Relation, rhs: i64) -> Constraint {
        Constraint {
            coeffs: vals.iter().map(|&v| rat_int(v)).collect(),
            rel,
            rhs: rat_int(rhs),
        }
    }

    #[test]
    fn basic_minimization() {
        // min -x - 2y s.t. x + y <= 4, x <= 3, y <= 2, x,y >= 0 -> x=2,y=2
        let p = Problem {
            num_vars: 2,
            minimize: vec![rat_int(-1), rat_int(-2)],
            free: vec![false, false],
            constraints: vec![
                c(&[1, 1], Relation::Le, 4),
                c(&[1, 0], Relation::Le, 3),
                c(&[0, 1], Relation::Le, 2),
            ],
        };
        match solve(&p) {
            SolveResult::Optimal {
                objective, primal, ..
            } => {
                assert_eq!(objective, rat_int(-6));
                assert_eq!(primal, vec![rat_int(2), rat_int(2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_with_artificials_and_duals() {
        // min x + y s.t. x + 2y = 4, 3x + y = 7 -> x = 2, y = 1
        let p = Problem {
            num_vars: 2,
            minimize: vec![rat_int(1), rat_int(1)],
            free: vec![false, false],
            constraints: vec![c(&[1, 2], Relation::Eq, 4), c(&[3, 1], Relation::Eq, 7)],
        };
        match solve(&p) {
            SolveResult::Optimal {
                objective,
                primal,
                dual,
            } => {
                assert_eq!(objective, rat_int(3));
                assert_eq!(primal, vec![rat_int(2), rat_int(1)]);
                // dual feasibility: y^T A = c on basic structural columns
                let y0 = &dual[0];
                let y1 = &dual[1];
                assert_eq!(y0 + y1 * rat_int(3), rat_int(1));
                assert_eq!(y0 * rat_int(2) + y1, rat_int(1));
                // strong duality: y^T b = objective
                assert_eq!(y0 * rat_int(4) + y1 * rat_int(7), rat_int(3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_returns_farkas() {
        // x <= 1, x >= 3
        let p = Problem {
            num_vars: 1,
            minimize: vec![],
            free: vec![false],
            constraints: vec![c(&[1], Relation::Le, 1), c(&[1], Relation::Ge, 3)],
        };
        match solve(&p) {
            SolveResult::Infeasible { farkas, row_sign } => {
                assert_eq!(row_sign, vec![1, 1]);
                // Farkas properties in the scaled-row convention:
                // y_i <= 0 on Le rows, y_i >= 0 on Ge rows, y^T A = 0 on the
                // structural column, y^T b > 0.
                let (y0, y1) = (&farkas[0], &farkas[1]);
                assert!(!y0.is_positive());
                assert!(!y1.is_negative());
                assert!((y0 + y1).is_zero());
                assert!((y0 + y1 * rat_int(3)).is_positive());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        let p = Problem {
            num_vars: 1,
            minimize: vec![rat_int(-1)],
            free: vec![false],
            constraints: vec![c(&[-1], Relation::Le, 0)],
        };
        assert!(matches!(solve(&p), SolveResult::Unbounded));
    }

    #[test]
    fn free_variables_split() {
        // min x s.t. x >= -5 with x free -> x = -5
        let p = Problem {
            num_vars: 1,
            minimize: vec![rat_int(1)],
            free: vec![true],
            constraints: vec![c(&[1], Relation::Ge, -5)],
        };
        match solve(&p) {
            SolveResult::Optimal {
                objective, primal, ..
            } => {
                assert_eq!(objective, rat_int(-5));
                assert_eq!(primal, vec![rat_int(-5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_guard() {
        // classic Beale-style degeneracy; Bland must terminate
        let p = Problem {
            num_vars: 4,
            minimize: vec![rat(-3, 4), rat_int(150), rat(-1, 50), rat_int(6)],
            free: vec![false; 4],
            constraints: vec![
                Constraint {
                    coeffs: vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9)],
                    rel: Relation::Le,
                    rhs: rat_int(0),
                },
                Constraint {
                    coeffs: vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3)],
                    rel: Relation::Le,
                    rhs: rat_int(0),
                },
                Constraint {
                    coeffs: vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)],
                    rel: Relation::Le,
                    rhs: rat_int(1),
                },
            ],
        };
        match solve(&p) {
            SolveResult::Optimal { objective, .. } => {
                assert_eq!(objective, rat(-1, 20));
            }
            other => panic!("{other:?}"),
        }
    }
}
