//! Constructive sub- and supersolutions.
//!
//! Subsolutions are scaled principal eigenfunctions on a ball inside the
//! positivity set, extended by zero. Supersolutions are multiples of the
//! torsion-like function psi solving -Delta psi = a+ with zero boundary
//! data. Both constructions re-verify the discrete differential inequality
//! nodewise and refuse to hand back anything that fails it.

use crate::coeffs::{split, Nonlinearity};
use crate::eigen::{eps_max, principal_eigenpair, EigenPair};
use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, GridFunction, Subinterval};
use crate::linalg::{assemble_unchecked, solve_linear_special, SpecialProblem};

use super::ProblemSpec;

const INEQ_SLACK: f64 = 1e-9;
const MAX_DOUBLINGS: u32 = 60;
const MAX_HALVINGS: u32 = 60;
const BALL_SHRINK: f64 = 0.05;

/// A subinterval of the positivity set together with the principal
/// eigenpair of the weight on it.
#[derive(Debug, Clone)]
pub struct CertifiedBall {
    pub b: Subinterval,
    pub eigen: EigenPair,
}

/// Largest positivity component of the weight, pulled in by 5% of its width
/// on each side, with the principal eigenpair computed on it.
pub fn certified_ball(p: &ProblemSpec) -> Result<CertifiedBall> {
    let parts = split(p.weight(), p.mesh())?;
    let component = parts.largest_component().ok_or_else(|| {
        Error::WeightNotAdmissible("weight has no positivity component".into())
    })?;
    let margin = BALL_SHRINK * component.width();
    let b = Subinterval::new(component.left + margin, component.right - margin)?;
    let eigen = principal_eigenpair(&parts.aplus, &b, p.mesh())?;
    Ok(CertifiedBall { b: eigen.b, eigen })
}

/// Scaled eigenfunction subsolution eps*phi on `b`, zero outside.
///
/// The discrete inequality (-Delta)(eps phi) <= rhs(x, eps phi) is checked
/// at every interior node of `b`.
pub fn build_subsolution(p: &ProblemSpec, b: &Subinterval, eps: f64) -> Result<GridFunction> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "subsolution amplitude must be nonnegative, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(GridFunction::zeros(p.mesh().clone()));
    }
    let parts = split(p.weight(), p.mesh())?;
    let eigen = principal_eigenpair(&parts.aplus, b, p.mesh())?;
    let ball = CertifiedBall { b: eigen.b, eigen };
    scaled_eigenfunction(p, &ball, eps)
}

/// Subsolution with an automatically calibrated amplitude.
///
/// Power and concave-convex problems get the closed-form cap from the
/// principal eigenvalue (with a 10% safety factor); custom nonlinearities
/// backtrack by halving from amplitude 1.
pub fn auto_subsolution(p: &ProblemSpec) -> Result<GridFunction> {
    let ball = certified_ball(p)?;
    match p.nonlinearity() {
        Nonlinearity::Power { q } => {
            let eps = 0.9 * eps_max(*q, ball.eigen.lambda1)?;
            scaled_eigenfunction(p, &ball, eps)
        }
        Nonlinearity::ConcaveConvex { lambda, q, .. } => {
            let eps = 0.9 * (lambda / ball.eigen.lambda1).powf(1.0 / (1.0 - q));
            scaled_eigenfunction(p, &ball, eps)
        }
        Nonlinearity::Custom { .. } => {
            let mut eps = 1.0;
            for _ in 0..=MAX_HALVINGS {
                if let Ok(u) = scaled_eigenfunction(p, &ball, eps) {
                    return Ok(u);
                }
                eps *= 0.5;
            }
            Err(Error::NotASubsolution(
                "no admissible amplitude found down to 2^-60".into(),
            ))
        }
    }
}

fn scaled_eigenfunction(p: &ProblemSpec, ball: &CertifiedBall, eps: f64) -> Result<GridFunction> {
    let u = ball.eigen.phi.scaled(eps)?;
    let (i0, i1) = ball
        .b
        .snap(p.mesh())
        .expect("certified ball is node-aligned");
    verify_subsolution(p, &u, i0, i1)?;
    Ok(u)
}

/// Checks (-Delta u)_i <= rhs(x_i, u_i) at nodes strictly between i0 and i1.
fn verify_subsolution(p: &ProblemSpec, u: &GridFunction, i0: usize, i1: usize) -> Result<()> {
    let op = assemble_unchecked(p.mesh(), p.bc(), &vec![0.0; p.mesh().n() + 1]);
    let (first, _) = op.unknown_range();
    let rows = op.apply_rows(u.values());
    for i in (i0 + 1)..i1 {
        let lhs = rows[i - first];
        let rhs = p.rhs_at(i, u.values()[i]);
        let slack = INEQ_SLACK * (1.0 + lhs.abs() + rhs.abs());
        if lhs > rhs + slack {
            return Err(Error::NotASubsolution(format!(
                "inequality fails at node {i}: {lhs:.6e} > {rhs:.6e}"
            )));
        }
    }
    Ok(())
}

/// Supersolution k*psi with psi the solution of -Delta psi = a+ and zero
/// boundary data. Checks -Delta(k psi) >= rhs(x, k psi) at every unknown
/// node and rejects k that are too small.
pub fn build_supersolution(p: &ProblemSpec, k: f64) -> Result<GridFunction> {
    if k <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "supersolution multiplier must be positive, got {k}"
        )));
    }
    let psi = dominating_profile(p)?;
    let u = psi.scaled(k)?;
    verify_supersolution(p, &u)?;
    Ok(u)
}

/// Smallest admissible supersolution multiplier, found by doubling from 1.
pub fn find_supersolution(p: &ProblemSpec) -> Result<(GridFunction, f64)> {
    let psi = dominating_profile(p)?;
    let mut k = 1.0;
    for _ in 0..=MAX_DOUBLINGS {
        let u = psi.scaled(k)?;
        match verify_supersolution(p, &u) {
            Ok(()) => return Ok((u, k)),
            Err(Error::NotASupersolution(_)) => k *= 2.0,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotASupersolution(
        "no admissible multiplier found up to 2^60".into(),
    ))
}

fn dominating_profile(p: &ProblemSpec) -> Result<GridFunction> {
    if p.bc() != BoundaryCondition::Dirichlet {
        return Err(Error::InvalidParameter(
            "supersolutions of this form need Dirichlet boundary data".into(),
        ));
    }
    let psi = solve_linear_special(SpecialProblem::PsiOfAPlus, p.weight(), p.mesh())?;
    if psi.sup_norm() == 0.0 {
        return Err(Error::NotASupersolution(
            "weight has no positive part, the dominating profile vanishes".into(),
        ));
    }
    Ok(psi)
}

fn verify_supersolution(p: &ProblemSpec, u: &GridFunction) -> Result<()> {
    let op = assemble_unchecked(p.mesh(), p.bc(), &vec![0.0; p.mesh().n() + 1]);
    let (first, _) = op.unknown_range();
    let rows = op.apply_rows(u.values());
    for (offset, &lhs) in rows.iter().enumerate() {
        let i = first + offset;
        let rhs = p.rhs_at(i, u.values()[i]);
        let slack = INEQ_SLACK * (1.0 + lhs.abs() + rhs.abs());
        if lhs < rhs - slack {
            return Err(Error::NotASupersolution(format!(
                "inequality fails at node {i}: {lhs:.6e} < {rhs:.6e}"
            )));
        }
    }
    Ok(())
}
