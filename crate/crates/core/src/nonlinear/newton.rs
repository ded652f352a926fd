//! Damped projected Newton for F(u) = -Delta u - rhs(x, u).
//!
//! The derivative is evaluated with the argument floored away from 0 (power
//! nonlinearities have f'(0+) = infinity) and every iterate is projected
//! onto the nonnegative cone. Acceptance is judged on the unregularized
//! residual.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, GridFunction, Mesh};
use crate::linalg::{assemble_unchecked, solve};

use super::{ProblemSpec, SolutionRecord, SolveMethod, SolveOptions};

const ARMIJO: f64 = 1e-4;

pub(crate) struct NewtonOutcome {
    pub u: GridFunction,
    pub residual_inf: f64,
    pub iterations: usize,
}

/// Generic damped Newton driver on F(u)_i = (A u)_i - rhs(i, u_i), where A
/// is the unshifted operator for the boundary condition. Dirichlet boundary
/// values are inherited from `init` and held fixed.
pub(crate) fn damped_newton(
    mesh: &Arc<Mesh>,
    bc: BoundaryCondition,
    init: &GridFunction,
    rhs: &dyn Fn(usize, f64) -> f64,
    rhs_prime: &dyn Fn(usize, f64) -> f64,
    opts: &SolveOptions,
    context: &str,
) -> Result<NewtonOutcome> {
    let n = mesh.n();
    let zeros = vec![0.0; n + 1];
    let op = assemble_unchecked(mesh, bc, &zeros);
    let (first, last) = op.unknown_range();

    let project = |vals: Vec<f64>| -> Result<GridFunction> {
        GridFunction::new(mesh.clone(), vals.into_iter().map(|v| v.max(0.0)).collect())
    };
    let norm_of = |u: &GridFunction| -> f64 {
        let rows = op.apply_rows(u.values());
        let mut worst = 0.0f64;
        for (k, row) in rows.iter().enumerate() {
            let i = first + k;
            worst = worst.max((row - rhs(i, u.values()[i])).abs());
        }
        worst
    };

    let mut u = project(init.values().to_vec())?;
    let mut f_norm = norm_of(&u);
    if f_norm <= opts.newton_tol {
        return Ok(NewtonOutcome {
            u,
            residual_inf: f_norm,
            iterations: 0,
        });
    }

    for it in 1..=opts.max_newton {
        // Jacobian A - diag(rhs'(u)); the perturbation is signed.
        let mut shift = vec![0.0; n + 1];
        for i in first..=last {
            shift[i] = -rhs_prime(i, u.values()[i]);
        }
        let jac = assemble_unchecked(mesh, bc, &shift);

        let mut minus_f = vec![0.0; n + 1];
        let rows = op.apply_rows(u.values());
        for (k, row) in rows.iter().enumerate() {
            let i = first + k;
            minus_f[i] = -(row - rhs(i, u.values()[i]));
        }
        let minus_f = GridFunction::new(mesh.clone(), minus_f)?;
        let du = solve(&jac, &minus_f).map_err(|e| Error::NoConvergence {
            iterations: it,
            context: format!("{context}: newton step failed ({e})"),
        })?;

        let mut t = 1.0;
        loop {
            let trial = project(
                u.values()
                    .iter()
                    .zip(du.values())
                    .map(|(&ui, &di)| ui + t * di)
                    .collect(),
            )?;
            let trial_norm = norm_of(&trial);
            if trial_norm <= (1.0 - ARMIJO * t) * f_norm {
                u = trial;
                f_norm = trial_norm;
                break;
            }
            t *= 0.5;
            if t < opts.min_step {
                return Err(Error::NoConvergence {
                    iterations: it,
                    context: format!("{context}: damping exhausted at residual {f_norm:.3e}"),
                });
            }
        }

        if f_norm <= opts.newton_tol {
            return Ok(NewtonOutcome {
                u,
                residual_inf: f_norm,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_newton,
        context: format!("{context}: iteration cap at residual {f_norm:.3e}"),
    })
}

/// Newton solve of the problem from a nonnegative start.
pub fn newton_solve(
    p: &ProblemSpec,
    init: &GridFunction,
    opts: &SolveOptions,
) -> Result<SolutionRecord> {
    if !init.mesh().compatible(p.mesh()) {
        return Err(Error::InvalidParameter(
            "newton start lives on a different mesh".into(),
        ));
    }
    let floor = opts.delta_floor;
    let outcome = damped_newton(
        p.mesh(),
        p.bc(),
        init,
        &|i, s| p.rhs_at(i, s),
        &|i, s| p.rhs_prime_at(i, s, floor),
        opts,
        "newton",
    )?;
    let trivial = outcome.u.sup_norm() == 0.0;
    Ok(SolutionRecord {
        residual_inf: outcome.residual_inf,
        iterations: outcome.iterations,
        provenance: if trivial {
            "newton: converged to the trivial solution".into()
        } else {
            format!("newton: {} damped steps", outcome.iterations)
        },
        u: outcome.u,
        method: SolveMethod::Newton,
        bracket: None,
    })
}
