//! Principal eigenpair of -Delta phi = lambda a phi on a subinterval with
//! Dirichlet conditions, for nonnegative weights a that are positive
//! somewhere on the subinterval.
//!
//! Inverse power iteration on the pencil (A, D). Each step solves one
//! tridiagonal system; the Rayleigh quotient converges at the square of the
//! eigenvector rate, so the 1e-12 stop test is cheap to reach.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{build_mesh, BoundaryCondition, Geometry, GridFunction, Mesh, Subinterval};
use crate::linalg::{assemble, solve};

const MAX_POWER_ITERATIONS: usize = 10_000;
const LAMBDA_REL_TOL: f64 = 1e-12;

/// Principal Dirichlet eigenpair on a subinterval of the mesh.
///
/// `phi` lives on the parent mesh and vanishes outside `b`; inside, it is
/// positive and normalized to sup norm 1.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda1: f64,
    pub phi: GridFunction,
    pub b: Subinterval,
}

/// Smallest eigenvalue and positive eigenfunction of -Delta phi = lambda a phi
/// on `b` (snapped inward to mesh nodes) with phi = 0 at the ends of `b`.
///
/// `a` holds the weight samples on the parent mesh; it must be nonnegative on
/// `b` and strictly positive on at least three consecutive interior nodes.
pub fn principal_eigenpair(
    a: &GridFunction,
    b: &Subinterval,
    mesh: &Arc<Mesh>,
) -> Result<EigenPair> {
    if !a.mesh().compatible(mesh) {
        return Err(Error::InvalidParameter(
            "weight samples live on a different mesh".into(),
        ));
    }
    if mesh.geometry().is_radial() {
        return Err(Error::InvalidParameter(
            "eigenpairs are defined on interval meshes only".into(),
        ));
    }
    let (i0, i1) = b.snap(mesh).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "subinterval ({}, {}) contains no mesh nodes",
            b.left, b.right
        ))
    })?;
    let n_sub = i1 - i0;
    if n_sub < crate::grid::MIN_SUBINTERVALS {
        return Err(Error::MeshTooCoarse {
            n: n_sub,
            min: crate::grid::MIN_SUBINTERVALS,
        });
    }

    let scale = 1.0 + a.sup_norm();
    let slice = &a.values()[i0..=i1];
    if let Some(k) = slice.iter().position(|&v| v < -1e-12 * scale) {
        return Err(Error::WeightNotAdmissible(format!(
            "weight is negative ({:.3e}) inside the eigenvalue subinterval",
            slice[k]
        )));
    }
    // Diagonal of the mass pencil: weight at the interior nodes, with
    // roundoff-level negatives clamped away.
    let d: Vec<f64> = slice[1..n_sub].iter().map(|&v| v.max(0.0)).collect();
    let positive_run = longest_positive_run(&d, 1e-12 * scale);
    if positive_run < 3 {
        return Err(Error::WeightNotAdmissible(
            "weight has no positive run of three interior nodes in the subinterval".into(),
        ));
    }

    let sub_geometry = Geometry::interval(mesh.node(i0), mesh.node(i1))?;
    let sub_mesh = Arc::new(build_mesh(sub_geometry, n_sub)?);
    let zero = GridFunction::zeros(sub_mesh.clone());
    let op = assemble(&sub_mesh, BoundaryCondition::Dirichlet, &zero)?;

    // Positive start with mass on all of b.
    let m = n_sub - 1;
    let amax = d.iter().fold(0.0f64, |acc, &x| acc.max(x));
    let mut v: Vec<f64> = (1..n_sub)
        .map(|k| (std::f64::consts::PI * k as f64 / n_sub as f64).sin())
        .collect();
    let mut lambda = f64::INFINITY;
    let mut converged = false;
    for _ in 0..MAX_POWER_ITERATIONS {
        let mut rhs_vals = vec![0.0; n_sub + 1];
        for k in 0..m {
            rhs_vals[k + 1] = d[k] * v[k];
        }
        let rhs = GridFunction::new(sub_mesh.clone(), rhs_vals)?;
        let w_full = solve(&op, &rhs)?;
        let w = &w_full.values()[1..n_sub];

        let mut wdv = 0.0;
        let mut wdw = 0.0;
        for k in 0..m {
            wdv += w[k] * d[k] * v[k];
            wdw += w[k] * d[k] * w[k];
        }
        if !(wdw > 0.0) {
            return Err(Error::WeightNotAdmissible(
                "weight mass vanished during the power iteration".into(),
            ));
        }
        let lambda_new = wdv / wdw;
        let sup = w.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
        // Since A w = D v, the residual of the normalized pair (lambda, w)
        // is d (v - lambda w) / sup, with no extra matrix application.
        let mut res = 0.0f64;
        for k in 0..m {
            res = res.max((d[k] * (v[k] - lambda_new * w[k])).abs());
        }
        res /= sup;
        for (vk, &wk) in v.iter_mut().zip(w) {
            *vk = wk / sup;
        }
        if (lambda_new - lambda).abs() <= LAMBDA_REL_TOL * lambda_new.abs()
            && res <= 5e-9 * lambda_new * amax
        {
            lambda = lambda_new;
            converged = true;
            break;
        }
        lambda = lambda_new;
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: MAX_POWER_ITERATIONS,
            context: "inverse power iteration for the principal eigenvalue".into(),
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::WeightNotAdmissible(format!(
            "principal eigenvalue came out nonpositive ({lambda:.3e})"
        )));
    }

    // Inverse positivity of the M-matrix makes every iterate positive; fix
    // the normalization so sup phi = 1 on the parent mesh.
    let sup = v.iter().fold(0.0f64, |acc, &x| acc.max(x));
    debug_assert!(sup > 0.0);
    let mut phi_vals = vec![0.0; mesh.n() + 1];
    for (k, &vk) in v.iter().enumerate() {
        phi_vals[i0 + 1 + k] = (vk / sup).max(0.0);
    }
    let phi = GridFunction::new(mesh.clone(), phi_vals)?;
    let snapped = Subinterval::new(mesh.node(i0), mesh.node(i1))?;
    Ok(EigenPair {
        lambda1: lambda,
        phi,
        b: snapped,
    })
}

fn longest_positive_run(d: &[f64], tol: f64) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &v in d {
        if v > tol {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// Largest amplitude epsilon with epsilon^(1-q) lambda1 <= 1, the ceiling for
/// scaling the eigenfunction into a subsolution of -Delta u = a u^q.
pub fn eps_max(q: f64, lambda1: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "exponent q must lie in [0, 1), got {q}"
        )));
    }
    if !(lambda1 > 0.0) || !lambda1.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "principal eigenvalue must be positive and finite, got {lambda1}"
        )));
    }
    Ok(lambda1.powf(-1.0 / (1.0 - q)))
}
