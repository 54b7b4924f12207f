//! A small dense two-phase primal simplex solver.
//!
//! This backs the closure oracles, which build LPs with one column per
//! subset of a small ground set (at most `2^12` columns and `n + 1` rows).
//! Bland's rule keeps pivoting deterministic and cycle-free; the solver is
//! not meant for anything larger than those desk-scale instances.

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
const PIVOT_CAP: usize = 200_000;

/// `min c·x  s.t.  A x = b, x >= 0`, with `A` given row-major.
pub(crate) struct StandardLp {
    pub nrows: usize,
    pub ncols: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

pub(crate) fn solve(lp: &StandardLp) -> Result<LpSolution> {
    let m = lp.nrows;
    let n = lp.ncols;
    assert_eq!(lp.a.len(), m * n);
    assert_eq!(lp.b.len(), m);
    assert_eq!(lp.c.len(), n);

    // Tableau: structural columns, artificial columns, rhs.
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    let mut basis = vec![0usize; m];
    for r in 0..m {
        let sign = if lp.b[r] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[r * width + j] = sign * lp.a[r * n + j];
        }
        t[r * width + n + r] = 1.0;
        t[r * width + n + m] = sign * lp.b[r];
        basis[r] = n + r;
    }

    // Phase 1: minimize the sum of artificials. With the artificial basis,
    // the reduced cost of column j is -sum of its entries.
    let mut red = vec![0.0; width];
    let mut obj = 0.0;
    for j in 0..width {
        let mut s = 0.0;
        for r in 0..m {
            s += t[r * width + j];
        }
        if j < n {
            red[j] = -s;
        } else if j < n + m {
            red[j] = 1.0 - s;
        } else {
            obj = -s;
        }
    }
    pivot_loop(&mut t, &mut red, &mut obj, &mut basis, m, width, n + m)?;
    if -obj > 1e-7 {
        return Err(Error::contract(format!(
            "LP infeasible (phase-1 objective {})",
            -obj
        )));
    }

    // Drive basic artificials out where possible; a row with no usable
    // structural entry is redundant and its artificial stays basic at zero.
    for r in 0..m {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| t[r * width + j].abs() > EPS) {
                pivot(&mut t, &mut red, &mut obj, &mut basis, m, width, r, j);
            }
        }
    }

    // Phase 2: rebuild the reduced-cost row for the real objective.
    let cost = |j: usize| if j < n { lp.c[j] } else { 0.0 };
    for (j, rj) in red.iter_mut().enumerate().take(width) {
        let mut s = if j < n { lp.c[j] } else { 0.0 };
        for r in 0..m {
            s -= cost(basis[r]) * t[r * width + j];
        }
        *rj = s;
    }
    obj = 0.0;
    for r in 0..m {
        obj -= cost(basis[r]) * t[r * width + n + m];
    }
    // Artificials must not re-enter.
    pivot_loop(&mut t, &mut red, &mut obj, &mut basis, m, width, n)?;

    let mut x = vec![0.0; n];
    for r in 0..m {
        if basis[r] < n {
            x[basis[r]] = t[r * width + n + m].max(0.0);
        }
    }
    Ok(LpSolution { x, value: -obj })
}

/// Bland's rule: entering = lowest-index negative reduced cost among the
/// first `enterable` columns; leaving = min ratio, ties by lowest basic
/// variable index.
fn pivot_loop(
    t: &mut [f64],
    red: &mut [f64],
    obj: &mut f64,
    basis: &mut [usize],
    m: usize,
    width: usize,
    enterable: usize,
) -> Result<()> {
    for _ in 0..PIVOT_CAP {
        let Some(enter) = (0..enterable).find(|&j| red[j] < -EPS) else {
            return Ok(());
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            let a = t[r * width + enter];
            if a > EPS {
                let ratio = t[r * width + width - 1] / a;
                let take = match leave {
                    None => true,
                    Some(lr) => {
                        ratio < best - EPS
                            || ((ratio - best).abs() <= EPS && basis[r] < basis[lr])
                    }
                };
                if take {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::contract("LP is unbounded"));
        };
        pivot(t, red, obj, basis, m, width, leave, enter);
    }
    Err(Error::contract("simplex pivot cap exceeded"))
}

#[allow(clippy::too_many_arguments)]
fn pivot(
    t: &mut [f64],
    red: &mut [f64],
    obj: &mut f64,
    basis: &mut [usize],
    m: usize,
    width: usize,
    row: usize,
    col: usize,
) {
    let p = t[row * width + col];
    for j in 0..width {
        t[row * width + j] /= p;
    }
    t[row * width + col] = 1.0;
    for r in 0..m {
        if r != row {
            let factor = t[r * width + col];
            if factor != 0.0 {
                for j in 0..width {
                    t[r * width + j] -= factor * t[row * width + j];
                }
                t[r * width + col] = 0.0;
            }
        }
    }
    let factor = red[col];
    if factor != 0.0 {
        for j in 0..width {
            red[j] -= factor * t[row * width + j];
        }
        red[col] = 0.0;
        *obj -= factor * t[row * width + width - 1];
    }
    basis[row] = col;
}
