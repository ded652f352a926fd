//! Solution enumeration by Newton from a battery of starts.
//!
//! Three educated starts (zero, the calibrated subsolution, the smallest
//! dominating supersolution) plus seeded random bumps. Starts that fail to
//! produce a subsolution/supersolution, and Newton runs that do not
//! converge, are silently skipped; the survivors are deduplicated by
//! sup-norm distance and sorted by size. The trivial solution is a record
//! like any other, never dropped.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::grid::GridFunction;

use super::subsuper::{auto_subsolution, find_supersolution};
use super::{newton_solve, ProblemSpec, SolutionRecord, SolveOptions};

const AMPLITUDE_LO: f64 = 1e-3;
const AMPLITUDE_HI: f64 = 1e2;
const DEDUP_SCALE: f64 = 1e-6;

/// Runs Newton from `n_starts` starts with the RNG seeded by `seed` and
/// returns the distinct solutions found, sorted by sup norm.
pub fn multistart_solve(p: &ProblemSpec, n_starts: usize, seed: u64) -> Vec<SolutionRecord> {
    let mut starts: Vec<(String, GridFunction)> = Vec::new();
    starts.push(("zero".into(), GridFunction::zeros(p.mesh().clone())));
    if let Ok(sub) = auto_subsolution(p) {
        starts.push(("subsolution".into(), sub));
    }
    if let Ok((sup, _)) = find_supersolution(p) {
        starts.push(("supersolution".into(), sup));
    }
    starts.truncate(n_starts);

    let mesh = p.mesh();
    let left = mesh.left();
    let width = mesh.right() - left;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_lo = AMPLITUDE_LO.ln();
    let log_hi = AMPLITUDE_HI.ln();
    for k in 0..n_starts.saturating_sub(3) {
        let amp = (log_lo + (log_hi - log_lo) * rng.gen::<f64>()).exp();
        let bump = GridFunction::from_fn(mesh.clone(), |x| {
            amp * (std::f64::consts::PI * (x - left) / width).sin().max(0.0)
        })
        .expect("bump profile is finite");
        starts.push((format!("random[{k}]"), bump));
    }

    let opts = SolveOptions::default();
    let mut records: Vec<SolutionRecord> = starts
        .par_iter()
        .map(|(label, init)| {
            newton_solve(p, init, &opts).ok().map(|mut rec| {
                rec.provenance = format!("start {label}: {}", rec.provenance);
                rec
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    records.sort_by(|a, b| a.u.sup_norm().total_cmp(&b.u.sup_norm()));
    let mut kept: Vec<SolutionRecord> = Vec::new();
    for rec in records {
        let tol = DEDUP_SCALE * (1.0 + rec.u.sup_norm());
        if kept.iter().all(|k| k.u.sup_distance(&rec.u) > tol) {
            kept.push(rec);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Nonlinearity, Weight};
    use crate::grid::{build_mesh, BoundaryCondition, Geometry, Mesh};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn mesh_on(n: usize) -> Arc<Mesh> {
        Arc::new(build_mesh(Geometry::interval(0.0, PI).unwrap(), n).unwrap())
    }

    #[test]
    fn unit_weight_yields_the_trivial_and_one_positive_solution() {
        let p = ProblemSpec::new(
            mesh_on(500),
            BoundaryCondition::Dirichlet,
            Weight::constant(1.0),
            Nonlinearity::power(0.5).unwrap(),
        )
        .unwrap();
        let records = multistart_solve(&p, 10, 42);
        assert_eq!(records.len(), 2, "got {} records", records.len());
        assert_eq!(records[0].u.sup_norm(), 0.0);
        assert!(records[1].u.min_interior() > 0.0);
        assert!(records[1].residual_inf <= 1e-10);
    }

    #[test]
    fn results_are_deterministic_for_a_fixed_seed() {
        let p = ProblemSpec::new(
            mesh_on(300),
            BoundaryCondition::Dirichlet,
            Weight::constant(1.0),
            Nonlinearity::power(0.5).unwrap(),
        )
        .unwrap();
        let first = multistart_solve(&p, 8, 7);
        let second = multistart_solve(&p, 8, 7);
        assert_eq!(first.len(), second.len());
        for (a, b) in first.iter().zip(&second) {
            assert_eq!(a.u.sup_distance(&b.u), 0.0);
            assert_eq!(a.provenance, b.provenance);
        }
    }

    #[test]
    fn small_lambda_concave_convex_has_two_positive_branches() {
        let p = ProblemSpec::new(
            mesh_on(300),
            BoundaryCondition::Dirichlet,
            Weight::constant(1.0),
            Nonlinearity::concave_convex(0.05, 0.5, 3.0).unwrap(),
        )
        .unwrap();
        let records = multistart_solve(&p, 12, 3);
        let positive = records
            .iter()
            .filter(|r| r.u.sup_norm() > 1e-8 && r.u.min_interior() > 0.0)
            .count();
        assert!(positive >= 2, "found {positive} positive branches");
    }
}
