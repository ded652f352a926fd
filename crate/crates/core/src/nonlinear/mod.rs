//! Nonlinear solves of the discretized problems: sub/supersolution
//! construction, monotone bracket iteration, damped projected Newton,
//! regularization continuation, and multi-start solution enumeration.

mod bracket;
mod multistart;
mod newton;
mod regpath;
mod subsuper;

pub use bracket::{monotone_iterate, monotone_iterate_traced};
pub use multistart::multistart_solve;
pub use newton::newton_solve;
pub use regpath::{regularization_path, RegularizedTransform};
pub use subsuper::{
    auto_subsolution, build_subsolution, build_supersolution, certified_ball,
    find_supersolution, CertifiedBall,
};

use std::sync::Arc;

use crate::coeffs::{Nonlinearity, Weight};
use crate::error::Result;
use crate::grid::{BoundaryCondition, GridFunction, Mesh};
use crate::linalg::assemble_unchecked;

/// One boundary value problem: -Delta u = rhs(x, u) on the mesh, where the
/// right-hand side is a(x) f(u) for simple nonlinearities and
/// lambda a(x) u^q + u^p in the concave-convex case (the weight multiplies
/// only the concave term).
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    mesh: Arc<Mesh>,
    bc: BoundaryCondition,
    weight: Weight,
    f: Nonlinearity,
    a: GridFunction,
}

impl ProblemSpec {
    pub fn new(
        mesh: Arc<Mesh>,
        bc: BoundaryCondition,
        weight: Weight,
        f: Nonlinearity,
    ) -> Result<ProblemSpec> {
        let a = weight.sample(&mesh)?;
        Ok(ProblemSpec {
            mesh,
            bc,
            weight,
            f,
            a,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.f
    }

    /// Weight samples on the mesh.
    pub fn weight_values(&self) -> &GridFunction {
        &self.a
    }

    /// The factor of the right-hand side that the weight multiplies.
    pub(crate) fn weighted_factor(&self, s: f64) -> f64 {
        match &self.f {
            Nonlinearity::ConcaveConvex { lambda, q, .. } => lambda * s.max(0.0).powf(*q),
            other => other.eval(s),
        }
    }

    pub(crate) fn weighted_factor_derivative(&self, s: f64) -> f64 {
        match &self.f {
            Nonlinearity::ConcaveConvex { lambda, q, .. } => {
                lambda * q * s.max(0.0).powf(q - 1.0)
            }
            other => other.derivative(s),
        }
    }

    /// The weight-free part of the right-hand side (zero except in the
    /// concave-convex case).
    pub(crate) fn unweighted_part(&self, s: f64) -> f64 {
        match &self.f {
            Nonlinearity::ConcaveConvex { p, .. } => s.max(0.0).powf(*p),
            _ => 0.0,
        }
    }

    pub(crate) fn unweighted_part_derivative(&self, s: f64) -> f64 {
        match &self.f {
            Nonlinearity::ConcaveConvex { p, .. } => p * s.max(0.0).powf(p - 1.0),
            _ => 0.0,
        }
    }

    /// Right-hand side at node i for the value s.
    pub fn rhs_at(&self, i: usize, s: f64) -> f64 {
        self.a.values()[i] * self.weighted_factor(s) + self.unweighted_part(s)
    }

    /// d/ds of the right-hand side at node i, with the argument floored away
    /// from the power-law singularity at 0.
    pub fn rhs_prime_at(&self, i: usize, s: f64, floor: f64) -> f64 {
        let s = s.max(floor);
        self.a.values()[i] * self.weighted_factor_derivative(s)
            + self.unweighted_part_derivative(s)
    }
}

/// Knobs for the nonlinear solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Acceptance threshold on the sup norm of the residual.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Smallest backtracking step before Newton gives up.
    pub min_step: f64,
    /// Cap on sweeps within one stage of the monotone iteration.
    pub bracket_max_iters: usize,
    /// Regularization schedule delta_k = delta0 * ratio^k.
    pub delta0: f64,
    pub delta_ratio: f64,
    pub delta_stages: usize,
    /// Floor for derivative evaluations near the power-law singularity.
    pub delta_floor: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            newton_tol: 1e-10,
            max_newton: 200,
            min_step: (2.0f64).powi(-20),
            bracket_max_iters: 5000,
            delta0: 1e-2,
            delta_ratio: 0.25,
            delta_stages: 8,
            delta_floor: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Bracket,
    Newton,
    RegPath,
}

/// One accepted (or, for the regularization path, possibly partial) solve.
#[derive(Debug, Clone)]
pub struct SolutionRecord {
    pub u: GridFunction,
    pub method: SolveMethod,
    pub residual_inf: f64,
    pub iterations: usize,
    pub bracket: Option<(GridFunction, GridFunction)>,
    pub provenance: String,
}

/// Sup norm of -Delta u - rhs(x, u) over the equation rows for the boundary
/// condition (interior rows under Dirichlet, ghost rows included under
/// Neumann).
pub fn residual_norm(p: &ProblemSpec, u: &GridFunction) -> f64 {
    let zeros = vec![0.0; p.mesh.n() + 1];
    let op = assemble_unchecked(&p.mesh, p.bc, &zeros);
    let rows = op.apply_rows(u.values());
    let (first, _) = op.unknown_range();
    let mut worst = 0.0f64;
    for (k, row) in rows.iter().enumerate() {
        let i = first + k;
        worst = worst.max((row - p.rhs_at(i, u.values()[i])).abs());
    }
    worst
}
