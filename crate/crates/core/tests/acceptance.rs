//! Release gate. Twelve end-to-end checks, one test and one summary line
//! each, with every tolerance pinned here rather than in the library.
//!
//! Run `cargo test --test acceptance -- --show-output` to see the lines.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sublinear_lab::classify::{classify, PositivityKind, Tolerances};
use sublinear_lab::coeffs::{pex_pair, Nonlinearity, Weight};
use sublinear_lab::eigen::principal_eigenpair;
use sublinear_lab::grid::{
    build_mesh, BoundaryCondition, Geometry, GridFunction, Mesh, Subinterval,
};
use sublinear_lab::lab::experiments::{
    concave_convex, deadcore_experiment, neumann_law, sweep_negative_part, sweep_q, ta_recursion,
    verify_pex, ProblemTemplate, STATUS_OK,
};
use sublinear_lab::lab::NEUMANN_CATALOG;
use sublinear_lab::nonlinear::{
    build_supersolution, certified_ball, monotone_iterate_traced, multistart_solve, newton_solve,
    regularization_path, residual_norm, ProblemSpec, RegularizedTransform, SolveOptions,
};

const SEED: u64 = 12345;

fn mesh_on(n: usize) -> Arc<Mesh> {
    Arc::new(build_mesh(Geometry::interval(0.0, PI).unwrap(), n).unwrap())
}

fn pex_problem(n: usize, q: f64) -> (ProblemSpec, GridFunction) {
    let mesh = mesh_on(n);
    let (weight, exact) = pex_pair(q).unwrap();
    let p = ProblemSpec::new(
        mesh.clone(),
        BoundaryCondition::Dirichlet,
        weight,
        Nonlinearity::power(q).unwrap(),
    )
    .unwrap();
    let samples = exact.sample(&mesh).unwrap();
    (p, samples)
}

#[test]
fn c01_exact_pair_is_resolved_at_second_order() {
    let rows = verify_pex(0.5, &[250, 500, 1000, 2000]).unwrap();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row.status, STATUS_OK, "n = {}: {}", row.n, row.status);
    }
    let finest = rows.last().unwrap().sampled_residual.unwrap();
    assert!(finest <= 5e-5, "residual at n = 2000: {finest:.3e}");
    let mut ratios = Vec::new();
    for row in &rows[1..] {
        let ratio = row.residual_ratio.unwrap();
        assert!(
            (3.6..=4.4).contains(&ratio),
            "halving ratio {ratio} outside [3.6, 4.4]"
        );
        ratios.push(ratio);
    }
    println!("c01 PASS: residual {finest:.3e} at n = 2000, halving ratios {ratios:.4?}");
}

#[test]
fn c02_polished_exact_solution_is_positive_but_escapes_both_cones() {
    let (p, samples) = pex_problem(2000, 0.5);
    let rec = newton_solve(&p, &samples, &SolveOptions::default()).unwrap();
    let verdict = classify(&rec.u, p.bc(), &Tolerances::for_function(&rec.u));
    assert_eq!(verdict.kind, PositivityKind::PositiveNotInCone);
    let (dl, dr) = verdict.boundary_derivs;
    assert!(dl.abs() <= 1e-3, "left boundary slope {dl:.3e}");
    assert!(dr.abs() <= 1e-3, "right boundary slope {dr:.3e}");
    println!(
        "c02 PASS: positive-not-in-cone, boundary slopes ({dl:.2e}, {dr:.2e})"
    );
}

#[test]
fn c03_unit_eigenvalue_and_inverse_scaling() {
    let mesh = mesh_on(2000);
    let b = Subinterval::new(0.0, PI).unwrap();
    let a = GridFunction::constant(mesh.clone(), 1.0).unwrap();
    let base = principal_eigenpair(&a, &b, &mesh).unwrap().lambda1;
    assert!((base - 1.0).abs() <= 1e-6, "lambda1 = {base}");
    let mut worst_rel = 0.0f64;
    for c in [0.5, 2.0, 10.0] {
        let scaled = principal_eigenpair(&a.scaled(c).unwrap(), &b, &mesh)
            .unwrap()
            .lambda1;
        let rel = (scaled - base / c).abs() / (base / c);
        assert!(rel <= 1e-10, "c = {c}: relative defect {rel:.3e}");
        worst_rel = worst_rel.max(rel);
    }
    println!("c03 PASS: lambda1 = {base:.9} at n = 2000, worst scaling defect {worst_rel:.2e}");
}

#[test]
fn c04_bracket_climbs_to_the_unique_nontrivial_solution() {
    let p = ProblemSpec::new(
        mesh_on(600),
        BoundaryCondition::Dirichlet,
        Weight::constant(1.0),
        Nonlinearity::power(0.5).unwrap(),
    )
    .unwrap();

    // sin x is a strict subsolution here: -(sin)'' = sin <= sqrt(sin) on (0, pi).
    let sub = GridFunction::from_fn(p.mesh().clone(), |x| x.sin()).unwrap();
    let sup = build_supersolution(&p, 4.0).unwrap();
    let (rec, trace) = monotone_iterate_traced(&p, &sub, &sup, &SolveOptions::default()).unwrap();

    let slack = 1e-12 * (1.0 + sup.sup_norm());
    for pair in trace.windows(2) {
        for (lo, hi) in pair[0].values().iter().zip(pair[1].values()) {
            assert!(hi >= &(lo - slack), "iterates not nondecreasing");
        }
    }
    for it in &trace[..trace.len() - 1] {
        for (v, cap) in it.values().iter().zip(sup.values()) {
            assert!(v <= &(cap + slack), "iterate escaped the bracket");
        }
    }
    assert!(rec.residual_inf <= 1e-10, "residual {:.3e}", rec.residual_inf);
    assert!(residual_norm(&p, &rec.u) <= 1e-10);

    let newton = newton_solve(&p, &sup, &SolveOptions::default()).unwrap();
    let gap = rec.u.sup_distance(&newton.u);
    assert!(gap <= 1e-8, "bracket and newton disagree by {gap:.3e}");

    let found = multistart_solve(&p, 10, SEED);
    let nontrivial = found.iter().filter(|r| r.u.sup_norm() > 1e-8).count();
    assert_eq!(nontrivial, 1, "expected a unique nontrivial solution");
    println!(
        "c04 PASS: {} monotone iterates, residual {:.2e}, newton gap {gap:.2e}, 1 nontrivial of {} records",
        trace.len(),
        rec.residual_inf,
        found.len()
    );
}

#[test]
fn c05_cone_membership_survives_a_small_negative_part() {
    let mesh = mesh_on(800);
    let aplus = Weight::parse("pex-plus(0.5)").unwrap();
    let aminus = Weight::parse("pex-minus(0.5)").unwrap();
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let sweep =
        sweep_negative_part(&mesh, &aplus, &aminus, &grid, 0.5, 3.0, 8, SEED).unwrap();

    let mu_hat = sweep.mu_hat.expect("no all-in-cone prefix");
    assert!(mu_hat > 0.0, "threshold estimate must be positive");
    let last = sweep.rows.last().unwrap();
    assert_eq!(last.status, STATUS_OK);
    assert!(last.nontrivial >= 1, "mu = 1 found no nontrivial solutions");
    assert!(
        !last.all_in_cone,
        "mu = 1 restores the exact pair, which sits outside the cone"
    );
    println!(
        "c05 PASS: in-cone prefix up to mu = {mu_hat}, cone failure at mu = 1 ({} kinds: {})",
        last.nontrivial, last.verdicts
    );
}

#[test]
fn c06_exponent_sweep_shows_an_interval_pattern() {
    let t = ProblemTemplate {
        mesh: mesh_on(800),
        bc: BoundaryCondition::Dirichlet,
        weight: Weight::pex(0.5).unwrap(),
    };
    let grid: Vec<f64> = (0..10).map(|i| 0.5 + 0.05 * i as f64).collect();
    let sweep = sweep_q(&t, &grid, false, 8, SEED).unwrap();

    for row in &sweep.rows {
        assert_eq!(row.status, STATUS_OK, "q = {}: {}", row.q, row.status);
        assert!(row.nontrivial >= 1, "q = {} found nothing", row.q);
    }
    let first = &sweep.rows[0];
    let last = sweep.rows.last().unwrap();
    assert!(!first.all_in_cone, "q = 0.5 must sit outside the cone");
    assert!(last.all_in_cone, "q = 0.95 must be all-in-cone");
    assert_eq!(sweep.pattern_violations, 0, "pattern must be an interval");
    let (lo, hi) = sweep.bracket.expect("no transition bracket");
    println!("c06 PASS: cone entry bracketed in ({lo}, {hi}), 0 pattern violations");
}

#[test]
fn c07_positive_neumann_solutions_need_negative_mass() {
    let weights: Vec<Weight> = NEUMANN_CATALOG
        .split(';')
        .map(|s| Weight::parse(s.trim()).unwrap())
        .collect();
    assert!(weights.len() >= 6, "catalog too small: {}", weights.len());

    let mesh = mesh_on(800);
    let rep = neumann_law(&mesh, &weights, 0.5, 8, SEED).unwrap();
    assert_eq!(rep.rows.len(), weights.len());
    for row in &rep.rows {
        assert_eq!(row.status, STATUS_OK, "{}: {}", row.weight, row.status);
    }
    let positive = rep.rows.iter().filter(|r| r.integral > 1e-10).count();
    let zero = rep.rows.iter().filter(|r| r.integral.abs() <= 1e-10).count();
    let negative = rep.rows.iter().filter(|r| r.integral < -1e-10).count();
    assert!(positive >= 1 && zero >= 1 && negative >= 1, "integral signs must straddle zero");
    assert_eq!(rep.violations, 0);
    println!(
        "c07 PASS: {} weights ({positive} positive / {zero} zero / {negative} negative mass), 0 violations",
        rep.rows.len()
    );
}

#[test]
fn c08_threshold_recursion_climbs_to_one() {
    let rep = ta_recursion(0.0, 200).unwrap();
    assert_eq!(rep.steps.len(), 201);
    assert_eq!(rep.violations, 0);
    let q1 = rep.steps[1].q;
    assert!((q1 - 0.45).abs() <= 1e-15, "first step {q1}");
    for pair in rep.steps.windows(2) {
        assert!(pair[1].q > pair[0].q, "not strictly increasing at step {}", pair[1].step);
        assert!(pair[1].q <= 1.0 + 1e-15, "escaped the unit bound");
    }
    let gap = rep.steps.last().unwrap().gap;
    assert!(gap < 0.05, "gap after 200 steps: {gap}");
    println!("c08 PASS: q1 = {q1}, strictly increasing, 1 - q200 = {gap:.4}");
}

#[test]
fn c09_transform_identities_and_ordered_limit() {
    // Algebraic identities on random admissible exponent pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let q0 = 0.05 + 0.9 * rng.gen::<f64>();
        let hi = 1.0 / (2.0 - q0);
        let q = q0 + (hi - q0) * (0.05 + 0.9 * rng.gen::<f64>());
        let t = RegularizedTransform::new(q0, q, 1e-2).unwrap();
        let first = (1.0 - t.beta - t.gamma * t.beta).abs();
        let second = (q / t.beta - (q0 + t.gamma)).abs();
        assert!(first <= 1e-12, "(q0, q) = ({q0}, {q}): defect {first:.3e}");
        assert!(second <= 1e-12, "(q0, q) = ({q0}, {q}): defect {second:.3e}");
        worst = worst.max(first).max(second);
    }

    // The continuation limit stays between the certified bump and u^beta.
    let (p, samples) = pex_problem(600, 0.5);
    let t = RegularizedTransform::new(0.45, 0.5, 1e-2).unwrap();
    let rec = regularization_path(&p, &t, &samples, &SolveOptions::default()).unwrap();
    assert!(rec.residual_inf <= 1e-6, "limit residual {:.3e}", rec.residual_inf);

    let ball = certified_ball(&p).unwrap();
    let phi = &ball.eigen.phi;
    let mut floor = f64::INFINITY;
    for (i, &x) in p.mesh().nodes().iter().enumerate() {
        if x >= ball.b.left && x <= ball.b.right {
            floor = floor.min(samples.values()[i]);
        }
    }
    assert!(floor > 0.0, "exact solution vanishes on the certified ball");
    let delta1 = 0.25 * floor.powf(t.beta);
    let slack = 1e-8 * (1.0 + samples.sup_norm());
    for i in 0..rec.u.len() {
        let w = rec.u.values()[i];
        let lower = delta1 * phi.values()[i];
        let upper = samples.values()[i].max(0.0).powf(t.beta);
        assert!(w + slack >= lower, "node {i}: {w} below the eigenfunction bump");
        assert!(w <= upper + slack, "node {i}: {w} above u^beta");
    }
    println!(
        "c09 PASS: worst identity defect {worst:.2e}, limit residual {:.2e}, ordered on all {} nodes",
        rec.residual_inf,
        rec.u.len()
    );
}

#[test]
fn c10_extension_produces_an_interior_dead_core() {
    let rep = deadcore_experiment(0.5, -1.0, 4000, true).unwrap();
    assert!(rep.residual <= 1e-6, "polished residual {:.3e}", rep.residual);
    assert!(!rep.cores.is_empty(), "no dead core detected");
    let (left, right) = rep.domain;
    for core in &rep.cores {
        assert!(
            core.left > left && core.right < right,
            "core [{}, {}] touches the boundary",
            core.left,
            core.right
        );
    }
    println!(
        "c10 PASS: {} interior core(s) on ({left}, {right}), residual {:.2e}",
        rep.cores.len(),
        rep.residual
    );
}

#[test]
fn c11_two_branches_at_small_lambda() {
    let mesh = Arc::new(build_mesh(Geometry::interval(0.0, PI).unwrap(), 600).unwrap());
    let grid = [0.2, 0.1, 0.05, 0.025];
    let rep = concave_convex(
        &mesh,
        &grid,
        0.5,
        3.0,
        &Weight::constant(1.0),
        BoundaryCondition::Dirichlet,
        12,
        SEED,
    )
    .unwrap();

    for row in &rep.rows[2..] {
        assert!(
            row.positive >= 2,
            "lambda = {} found only {} positive solutions",
            row.lambda,
            row.positive
        );
    }
    let norms: Vec<f64> = rep
        .rows
        .iter()
        .map(|r| r.minimal_norm.expect("missing minimal branch"))
        .collect();
    for pair in norms.windows(2) {
        assert!(pair[1] < pair[0], "minimal branch must shrink with lambda");
    }
    assert_eq!(rep.decay_violations, 0);
    let shown: Vec<String> = norms.iter().map(|v| format!("{v:.3e}")).collect();
    println!("c11 PASS: two branches at lambda = 0.05 and 0.025, minimal norms {shown:?}");
}

#[test]
fn c12_csv_bodies_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.conf");
    std::fs::write(
        &config,
        "[problem]\nweight = pex(0.5)\nn = 200\nstarts = 4\n\n\
         [experiment]\nq_grid = 0.5, 0.65, 0.8, 0.95\n\n\
         [run]\nseed = 7\n",
    )
    .unwrap();

    let run = |out: &str, jobs: &str| -> Vec<u8> {
        let out_dir = dir.path().join(out);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_sublinear-lab"))
            .arg("sweep-q")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out_dir)
            .arg("--jobs")
            .arg(jobs)
            .status()
            .unwrap();
        assert!(status.success(), "run into {out} failed");
        std::fs::read(out_dir.join("sweep-q.csv")).unwrap()
    };

    let serial = run("a", "1");
    let parallel = run("b", "3");
    let repeat = run("c", "1");
    assert_eq!(serial, parallel, "jobs must not change the table");
    assert_eq!(serial, repeat, "reruns must reproduce the table");
    println!(
        "c12 PASS: {} CSV bytes identical across jobs 1/3 and a rerun",
        serial.len()
    );
}
