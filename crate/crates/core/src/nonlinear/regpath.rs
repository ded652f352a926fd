//! Continuation from a solution at exponent q down to the limit problem at
//! exponent q0 < q.
//!
//! A solution u of the Dirichlet problem at exponent q is transported
//! through the family
//!
//!   -Delta w = beta a(x) w^{-gamma} ((w^{1/beta} - eps)+)^q,  w = eps^beta
//!   on the boundary,
//!
//! with beta = (1-q)/(1-q0) and gamma = (q-q0)/(1-q). At eps = 0 the
//! exponents collapse (q/beta - gamma = q0) and the family becomes
//! -Delta w = beta a w^{q0} with zero boundary data. Each stage is a warm
//! started Newton solve; the seed for the first stage is (u + eps)^beta.


use crate::coeffs::Nonlinearity;
use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, GridFunction};
use crate::linalg::assemble_unchecked;

use super::newton::damped_newton;
use super::{ProblemSpec, SolutionRecord, SolveMethod, SolveOptions};

/// Exponent bookkeeping for the continuation.
#[derive(Debug, Clone, Copy)]
pub struct RegularizedTransform {
    pub q0: f64,
    pub q: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Start of the decreasing eps schedule.
    pub epsilon: f64,
}

impl RegularizedTransform {
    /// Requires 0 < q0 < q < 1/(2 - q0) and epsilon > 0.
    pub fn new(q0: f64, q: f64, epsilon: f64) -> Result<Self> {
        if !(0.0 < q0 && q0 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "transform needs 0 < q0 < 1, got q0 = {q0}"
            )));
        }
        let cap = 1.0 / (2.0 - q0);
        if !(q0 < q && q < cap) {
            return Err(Error::InvalidParameter(format!(
                "transform needs q0 < q < 1/(2 - q0) = {cap}, got q = {q}"
            )));
        }
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "transform needs epsilon > 0, got {epsilon}"
            )));
        }
        Ok(RegularizedTransform {
            q0,
            q,
            beta: (1.0 - q) / (1.0 - q0),
            gamma: (q - q0) / (1.0 - q),
            epsilon,
        })
    }
}

/// One stage's right-hand side factor g(s) with s^{-gamma} tamed by the
/// positive-part clip: g vanishes wherever s^{1/beta} <= eps.
fn stage_value(s: f64, t: &RegularizedTransform, eps: f64) -> f64 {
    if eps == 0.0 {
        return s.max(0.0).powf(t.q0);
    }
    let s = s.max(1e-300);
    let core = s.powf(1.0 / t.beta) - eps;
    if core <= 0.0 {
        0.0
    } else {
        s.powf(-t.gamma) * core.powf(t.q)
    }
}

fn stage_slope(s: f64, t: &RegularizedTransform, eps: f64, floor: f64) -> f64 {
    let s = s.max(floor);
    if eps == 0.0 {
        return t.q0 * s.powf(t.q0 - 1.0);
    }
    let core = s.powf(1.0 / t.beta) - eps;
    if core <= 0.0 {
        return 0.0;
    }
    let clipped = core.max(floor);
    -t.gamma * s.powf(-t.gamma - 1.0) * core.powf(t.q)
        + s.powf(-t.gamma) * t.q * clipped.powf(t.q - 1.0) * (1.0 / t.beta)
            * s.powf(1.0 / t.beta - 1.0)
}

/// Residual of w against the stage problem, over the unknown rows.
fn stage_residual(p: &ProblemSpec, t: &RegularizedTransform, eps: f64, w: &GridFunction) -> f64 {
    let op = assemble_unchecked(p.mesh(), p.bc(), &vec![0.0; p.mesh().n() + 1]);
    let (first, _) = op.unknown_range();
    let rows = op.apply_rows(w.values());
    let a = p.weight_values().values();
    rows.iter()
        .enumerate()
        .fold(0.0f64, |worst, (k, row)| {
            let i = first + k;
            worst.max((row - t.beta * a[i] * stage_value(w.values()[i], t, eps)).abs())
        })
}

/// Warm start for a stage: previous iterate floored at the boundary level,
/// boundary nodes pinned to it.
fn stage_start(prev: &GridFunction, level: f64) -> GridFunction {
    let n = prev.mesh().n();
    let vals: Vec<f64> = prev
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| if i == 0 || i == n { level } else { v.max(level) })
        .collect();
    GridFunction::new(prev.mesh().clone(), vals).expect("same mesh")
}

/// Drives the eps schedule down to the limit problem.
///
/// A stage that fails to converge abandons the path: the last converged
/// stage is returned as a partial record (noted in the provenance), not as
/// an error.
pub fn regularization_path(
    p: &ProblemSpec,
    t: &RegularizedTransform,
    u_seed: &GridFunction,
    opts: &SolveOptions,
) -> Result<SolutionRecord> {
    if p.bc() != BoundaryCondition::Dirichlet {
        return Err(Error::InvalidParameter(
            "the continuation is posed with Dirichlet boundary data".into(),
        ));
    }
    match p.nonlinearity() {
        Nonlinearity::Power { q } if (q - t.q).abs() <= 1e-12 => {}
        other => {
            return Err(Error::InvalidParameter(format!(
                "transform is for power({}), problem has {}",
                t.q,
                other.describe()
            )));
        }
    }
    if !u_seed.mesh().compatible(p.mesh()) {
        return Err(Error::InvalidParameter(
            "seed lives on a different mesh".into(),
        ));
    }

    // The zero seed rides the exact constant family w = eps^beta, whose
    // limit is the zero solution of the limit problem.
    if u_seed.sup_norm() == 0.0 {
        return Ok(SolutionRecord {
            u: GridFunction::zeros(p.mesh().clone()),
            method: SolveMethod::RegPath,
            residual_inf: 0.0,
            iterations: 0,
            bracket: None,
            provenance: "regpath: zero seed, exact constant family".into(),
        });
    }

    let mut schedule: Vec<f64> = (0..opts.delta_stages)
        .map(|j| t.epsilon * opts.delta_ratio.powi(j as i32))
        .collect();
    schedule.push(0.0);

    let eps0 = schedule[0];
    let mut w = GridFunction::new(
        p.mesh().clone(),
        u_seed
            .values()
            .iter()
            .map(|&v| (v.max(0.0) + eps0).powf(t.beta))
            .collect(),
    )?;
    let mut total_iterations = 0usize;
    let mut notes: Vec<String> = Vec::new();
    let floor = opts.delta_floor;

    // At contact nodes w^{1/beta} - eps cancels to roundoff and its q-th
    // power keeps only half the machine digits, so eps > 0 stages cannot
    // reach newton_tol; they only need to land in the next stage's basin.
    let amax = p.weight_values().sup_norm();
    let stage_tol = opts.newton_tol.max(1e-7 * (1.0 + amax));

    for (j, &eps) in schedule.iter().enumerate() {
        let level = if eps == 0.0 { 0.0 } else { eps.powf(t.beta) };
        let start = if j == 0 { w.clone() } else { stage_start(&w, level) };
        let a = p.weight_values().clone();
        let rhs = |i: usize, s: f64| t.beta * a.values()[i] * stage_value(s, t, eps);
        let rhs_prime = |i: usize, s: f64| t.beta * a.values()[i] * stage_slope(s, t, eps, floor);
        let mut opts_j = *opts;
        if eps > 0.0 {
            opts_j.newton_tol = stage_tol;
        } else {
            // The limit problem grows a dead core whose contact nodes sit
            // below the derivative floor, so the damped steps settle them
            // only to within a small multiple of the floor's slope error.
            // Keep a realistic target and a wider budget for the collapse
            // of the last regularized plateau.
            opts_j.newton_tol = opts.newton_tol.max(1e-9 * (1.0 + amax));
            opts_j.max_newton = opts.max_newton.saturating_mul(4);
        }
        match damped_newton(
            p.mesh(),
            p.bc(),
            &start,
            &rhs,
            &rhs_prime,
            &opts_j,
            &format!("regpath eps={eps:.3e}"),
        ) {
            Ok(out) => {
                total_iterations += out.iterations;
                notes.push(if eps == 0.0 {
                    format!("limit ({} it)", out.iterations)
                } else {
                    format!("eps={eps:.3e} ({} it)", out.iterations)
                });
                w = out.u;
            }
            Err(Error::NoConvergence {
                iterations,
                context,
            }) => {
                total_iterations += iterations;
                let achieved = if j == 0 {
                    stage_residual(p, t, eps, &w)
                } else {
                    stage_residual(p, t, schedule[j - 1], &w)
                };
                return Ok(SolutionRecord {
                    u: w,
                    method: SolveMethod::RegPath,
                    residual_inf: achieved,
                    iterations: total_iterations,
                    bracket: None,
                    provenance: format!(
                        "regpath: abandoned at eps={eps:.3e} ({context}) after [{}]",
                        notes.join(", ")
                    ),
                });
            }
            Err(e) => return Err(e),
        }
    }

    let residual_inf = stage_residual(p, t, 0.0, &w);
    Ok(SolutionRecord {
        u: w,
        method: SolveMethod::RegPath,
        residual_inf,
        iterations: total_iterations,
        bracket: None,
        provenance: format!("regpath: [{}]", notes.join(", ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{pex_pair, Weight};
    use crate::grid::{build_mesh, Geometry, Mesh};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn mesh_on(n: usize) -> Arc<Mesh> {
        Arc::new(build_mesh(Geometry::interval(0.0, PI).unwrap(), n).unwrap())
    }

    #[test]
    fn exponent_identities_hold_for_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let q0: f64 = 0.05 + 0.9 * rng.gen::<f64>();
            let cap = 1.0 / (2.0 - q0);
            let q = q0 + (cap - q0) * (0.05 + 0.9 * rng.gen::<f64>());
            let t = RegularizedTransform::new(q0, q, 1e-2).unwrap();
            assert!((1.0 - t.beta - t.gamma * t.beta).abs() <= 1e-12);
            assert!((t.q / t.beta - (t.q0 + t.gamma)).abs() <= 1e-12);
        }
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(RegularizedTransform::new(0.0, 0.5, 1e-2).is_err());
        assert!(RegularizedTransform::new(0.5, 0.5, 1e-2).is_err());
        assert!(RegularizedTransform::new(0.5, 0.67, 1e-2).is_err());
        assert!(RegularizedTransform::new(0.4, 0.5, 0.0).is_err());
        let t = RegularizedTransform::new(0.4, 0.5, 1e-2).unwrap();
        assert!((t.beta - 5.0 / 6.0).abs() < 1e-15);
        assert!((t.gamma - 0.2).abs() < 1e-15);
    }

    #[test]
    fn zero_seed_returns_the_zero_limit() {
        let mesh = mesh_on(128);
        let (weight, _) = pex_pair(0.5).unwrap();
        let p = ProblemSpec::new(
            mesh.clone(),
            BoundaryCondition::Dirichlet,
            weight,
            Nonlinearity::power(0.5).unwrap(),
        )
        .unwrap();
        let t = RegularizedTransform::new(0.45, 0.5, 1e-2).unwrap();
        let rec =
            regularization_path(&p, &t, &GridFunction::zeros(mesh), &SolveOptions::default())
                .unwrap();
        assert_eq!(rec.u.sup_norm(), 0.0);
        assert_eq!(rec.residual_inf, 0.0);
    }

    #[test]
    fn pex_seed_reaches_the_limit_problem() {
        let mesh = mesh_on(600);
        let (weight, exact) = pex_pair(0.5).unwrap();
        let p = ProblemSpec::new(
            mesh.clone(),
            BoundaryCondition::Dirichlet,
            weight,
            Nonlinearity::power(0.5).unwrap(),
        )
        .unwrap();
        let seed = exact.sample(&mesh).unwrap();
        let t = RegularizedTransform::new(0.45, 0.5, 1e-2).unwrap();
        let rec = regularization_path(&p, &t, &seed, &SolveOptions::default()).unwrap();

        assert!(
            !rec.provenance.contains("abandoned"),
            "{}",
            rec.provenance
        );
        assert!(rec.residual_inf <= 1e-6, "residual {}", rec.residual_inf);
        assert!(rec.u.sup_norm() > 0.0, "limit collapsed to zero");
        // Bounded above by seed^beta.
        let slack = 1e-8 * (1.0 + seed.sup_norm());
        for (w, u) in rec.u.values().iter().zip(seed.values()) {
            assert!(w <= &(u.max(0.0).powf(t.beta) + slack));
        }
    }

    #[test]
    fn a_stalled_stage_yields_a_partial_record() {
        let mesh = mesh_on(128);
        let p = ProblemSpec::new(
            mesh.clone(),
            BoundaryCondition::Dirichlet,
            Weight::constant(1.0),
            Nonlinearity::power(0.5).unwrap(),
        )
        .unwrap();
        let seed = GridFunction::from_fn(mesh, |x| x.sin()).unwrap();
        let t = RegularizedTransform::new(0.45, 0.5, 1e-2).unwrap();
        let mut opts = SolveOptions::default();
        opts.max_newton = 0;
        let rec = regularization_path(&p, &t, &seed, &opts).unwrap();
        assert!(rec.provenance.contains("abandoned"), "{}", rec.provenance);
    }
}
