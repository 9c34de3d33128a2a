//! Dense two-phase simplex for the tiny linear programs used by the geometry
//! predicates and the Chebyshev-center solve.
//!
//! Problems are standard form: minimize `c.x` subject to `A x = b`, `x >= 0`.
//! Bland's rule is used for both the entering and the leaving variable, which
//! keeps the pivot sequence deterministic and cycle-free. All problems here
//! have at most a few dozen rows and columns, so a dense tableau is fine.

/// Minimize `cost . x` subject to `rows[i] . x = rhs[i]` and `x >= 0`.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub ncols: usize,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub cost: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("simplex iteration limit reached")]
    IterationLimit,
}

const EPS_PIVOT: f64 = 1e-11;
const EPS_COST: f64 = 1e-10;
const EPS_FEAS: f64 = 1e-8;

struct Tableau {
    m: usize,
    n: usize,
    rows: Vec<Vec<f64>>, // m x (n + 1), last column is the rhs
    cost: Vec<f64>,      // n + 1, last entry is -objective
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = 1.0 / self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..self.m {
            if r != row {
                let f = self.rows[r][col];
                if f != 0.0 {
                    for k in 0..=self.n {
                        self.rows[r][k] -= f * self.rows[row][k];
                    }
                }
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for k in 0..=self.n {
                self.cost[k] -= f * self.rows[row][k];
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimality or unboundedness. `allowed`
    /// marks the columns that may enter the basis.
    fn run(&mut self, allowed: &[bool], max_iter: usize) -> Result<bool, LpError> {
        for _ in 0..max_iter {
            // Bland: smallest admissible index with negative reduced cost.
            let entering = (0..self.n).find(|&j| allowed[j] && self.cost[j] < -EPS_COST);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..self.m {
                let a = self.rows[r][col];
                if a > EPS_PIVOT {
                    let ratio = self.rows[r][self.n] / a;
                    let better = ratio < best_ratio - EPS_PIVOT
                        || (ratio < best_ratio + EPS_PIVOT
                            && leaving.map_or(true, |lr| self.basis[r] < self.basis[lr]));
                    if better {
                        best_ratio = ratio.min(best_ratio);
                        leaving = Some(r);
                    }
                }
            }
            let Some(row) = leaving else {
                return Ok(false); // unbounded in the entering direction
            };
            self.pivot(row, col);
        }
        Err(LpError::IterationLimit)
    }
}

pub fn solve(lp: &StandardForm) -> Result<LpOutcome, LpError> {
    let m = lp.rows.len();
    let n = lp.ncols;
    debug_assert!(lp.rows.iter().all(|r| r.len() == n));
    debug_assert_eq!(lp.rhs.len(), m);
    debug_assert_eq!(lp.cost.len(), n);

    // Phase 1 tableau with one artificial per row; rows flipped so rhs >= 0.
    let total = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; total + 1];
        for j in 0..n {
            row[j] = sign * lp.rows[i][j];
        }
        row[n + i] = 1.0;
        row[total] = sign * lp.rhs[i];
        rows.push(row);
    }
    let mut cost = vec![0.0; total + 1];
    for row in &rows {
        for (k, item) in cost.iter_mut().enumerate() {
            if k < n || k == total {
                *item -= row[k];
            }
        }
    }
    let mut t = Tableau {
        m,
        n: total,
        rows,
        cost,
        basis: (n..n + m).collect(),
    };
    let max_iter = 400 + 80 * (m + n);
    let allowed = vec![true; total];
    t.run(&allowed, max_iter)?;
    let phase1 = -t.cost[total];
    if phase1 > EPS_FEAS {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; drop rows that are
    // redundant (no structural pivot available).
    let mut drop_rows = Vec::new();
    for r in 0..t.m {
        if t.basis[r] >= n {
            let col = (0..n).find(|&j| t.rows[r][j].abs() > 1e-9);
            match col {
                Some(c) => t.pivot(r, c),
                None => drop_rows.push(r),
            }
        }
    }
    for &r in drop_rows.iter().rev() {
        t.rows.remove(r);
        t.basis.remove(r);
        t.m -= 1;
    }

    // Phase 2: rebuild reduced costs for the original objective.
    let mut cost = vec![0.0; total + 1];
    cost[..n].copy_from_slice(&lp.cost);
    for r in 0..t.m {
        let cb = cost[t.basis[r]];
        if cb != 0.0 {
            for k in 0..=total {
                cost[k] -= cb * t.rows[r][k];
            }
        }
    }
    t.cost = cost;
    let mut allowed = vec![true; total];
    for a in allowed.iter_mut().skip(n) {
        *a = false;
    }
    if !t.run(&allowed, max_iter)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; n];
    for r in 0..t.m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rows[r][total];
        }
    }
    let value = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}
