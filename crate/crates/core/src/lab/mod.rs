//! Command-line experiment runner.
//!
//! Each experiment reads one sectioned key = value config, runs its grid on
//! a bounded worker pool, and writes three artifacts into the output
//! directory: a CSV table, a JSON manifest, and a gnuplot script. CSV bodies
//! are reproducible byte for byte from (config, seed); wall-clock time is
//! confined to the manifest.
//!
//! Exit codes: 0 clean run, 1 at least one violation of a property under
//! test, 2 configuration error, 3 solver or IO failure.

pub mod config;
pub mod experiments;
pub mod report;

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::classify::{classify, Tolerances};
use crate::coeffs::{split, Nonlinearity, Weight};
use crate::eigen::{eps_max, principal_eigenpair};
use crate::error::{Error, Result};
use crate::grid::{h1_norm, BoundaryCondition, Geometry, GridFunction};
use crate::nonlinear::{
    auto_subsolution, find_supersolution, monotone_iterate, multistart_solve, newton_solve,
    ProblemSpec, SolveOptions,
};

use config::Config;
use experiments::{
    concave_convex, deadcore_experiment, kind_name, neumann_law, sweep_negative_part, sweep_q,
    ta_recursion, verify_pex, ProblemTemplate, STATUS_OK,
};
use report::{cell_b, cell_f, cell_of, cell_u, write_gnuplot, Manifest, RowStatus, Table};

#[derive(Parser)]
#[command(
    name = "sublinear-lab",
    version,
    about = "Experiments on sign-changing-weight sublinear boundary value problems"
)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: ExperimentKind,

    /// Run configuration: sectioned key = value text.
    #[arg(long)]
    config: PathBuf,

    /// Output directory; created if missing.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Base seed override.
    #[arg(long)]
    seed: Option<u64>,

    /// Mesh resolution override.
    #[arg(long)]
    n: Option<usize>,

    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExperimentKind {
    VerifyPex,
    SweepQ,
    SweepNegativePart,
    NeumannLaw,
    TaRecursion,
    ConcaveConvex,
    DeadCore,
    SolveOne,
    Eigen,
}

impl ExperimentKind {
    fn name(self) -> &'static str {
        match self {
            ExperimentKind::VerifyPex => "verify-pex",
            ExperimentKind::SweepQ => "sweep-q",
            ExperimentKind::SweepNegativePart => "sweep-negative-part",
            ExperimentKind::NeumannLaw => "neumann-law",
            ExperimentKind::TaRecursion => "ta-recursion",
            ExperimentKind::ConcaveConvex => "concave-convex",
            ExperimentKind::DeadCore => "dead-core",
            ExperimentKind::SolveOne => "solve-one",
            ExperimentKind::Eigen => "eigen",
        }
    }
}

pub fn cli_main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_)
                | Error::InvalidParameter(_)
                | Error::WeightNotAdmissible(_)
                | Error::MeshTooCoarse { .. } => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

struct Plot {
    xlabel: &'static str,
    extra: &'static [&'static str],
    series: Vec<(usize, usize, &'static str)>,
}

struct RunOutput {
    table: Table,
    rows: Vec<RowStatus>,
    summary: serde_json::Value,
    violations: usize,
    warnings: Vec<String>,
    plot: Plot,
}

fn run(cli: &Cli) -> Result<usize> {
    let started = Instant::now();
    let cfg = Config::from_file(&cli.config)?;

    // Universal knobs; CLI flags win but the config keys stay consumed so
    // they never count as unknown.
    let seed = match cli.seed {
        Some(s) => {
            cfg.take("run", "seed");
            s
        }
        None => cfg.u64_or("run", "seed", 12345)?,
    };
    let jobs = match cli.jobs {
        Some(j) => {
            cfg.take("run", "jobs");
            j
        }
        None => cfg.usize_or("run", "jobs", 0)?,
    };
    let out_dir = match &cli.out {
        Some(p) => {
            cfg.take("output", "dir");
            p.clone()
        }
        None => PathBuf::from(cfg.str_or("output", "dir", "out")),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;

    let output = dispatch(cli, &cfg, seed, &pool)?;

    fs::create_dir_all(&out_dir)?;
    let name = cli.experiment.name();
    let csv_name = format!("{name}.csv");
    output.table.write_csv(&out_dir.join(&csv_name))?;

    let mut manifest = Manifest::new(name, seed, jobs);
    manifest.config = cfg.echo();
    if let Some(s) = cli.seed {
        manifest.overrides.insert("seed".into(), s.to_string());
    }
    if let Some(n) = cli.n {
        manifest.overrides.insert("n".into(), n.to_string());
    }
    if let Some(j) = cli.jobs {
        manifest.overrides.insert("jobs".into(), j.to_string());
    }
    if let Some(p) = &cli.out {
        manifest
            .overrides
            .insert("out".into(), p.display().to_string());
    }
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.violations = output.violations;
    manifest.summary = output.summary;
    manifest.rows = output.rows;
    manifest.write(&out_dir.join("manifest.json"))?;

    write_gnuplot(
        &out_dir.join(format!("{name}.gp")),
        &csv_name,
        name,
        output.plot.xlabel,
        output.plot.extra,
        &output.plot.series,
    )?;

    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{name}: {} rows, {} violations -> {}",
        output.table.rows.len(),
        output.violations,
        out_dir.display()
    );
    Ok(output.violations)
}

fn required(cfg: &Config, section: &str, key: &str) -> Result<String> {
    cfg.take(section, key)
        .map(str::to_string)
        .ok_or_else(|| Error::Config(format!("[{section}] {key} is required")))
}

fn dispatch(cli: &Cli, cfg: &Config, seed: u64, pool: &rayon::ThreadPool) -> Result<RunOutput> {
    match cli.experiment {
        ExperimentKind::VerifyPex => run_verify_pex(cli, cfg, pool),
        ExperimentKind::SweepQ => run_sweep_q(cli, cfg, seed, pool),
        ExperimentKind::SweepNegativePart => run_sweep_negative_part(cli, cfg, seed, pool),
        ExperimentKind::NeumannLaw => run_neumann_law(cli, cfg, seed, pool),
        ExperimentKind::TaRecursion => run_ta_recursion(cfg),
        ExperimentKind::ConcaveConvex => run_concave_convex(cli, cfg, seed, pool),
        ExperimentKind::DeadCore => run_dead_core(cli, cfg, pool),
        ExperimentKind::SolveOne => run_solve_one(cli, cfg, seed, pool),
        ExperimentKind::Eigen => run_eigen(cli, cfg, pool),
    }
}

fn run_verify_pex(cli: &Cli, cfg: &Config, pool: &rayon::ThreadPool) -> Result<RunOutput> {
    let q = cfg.f64_or("problem", "q", 0.5)?;
    let mut n_list = cfg.list_usize_or("experiment", "n_list", &[250, 500, 1000, 2000])?;
    if let Some(n) = cli.n {
        n_list = vec![n];
    }
    cfg.finish()?;

    let rows = pool.install(|| verify_pex(q, &n_list))?;

    let mut table = Table::new(vec![
        "n",
        "h",
        "sampled_residual",
        "residual_ratio",
        "residual_order",
        "polished_error",
        "error_order",
        "verdict",
        "status",
    ]);
    let mut statuses = Vec::new();
    for r in &rows {
        table.push(vec![
            cell_u(r.n),
            cell_of(r.h),
            cell_of(r.sampled_residual),
            cell_of(r.residual_ratio),
            cell_of(r.residual_order),
            cell_of(r.polished_error),
            cell_of(r.error_order),
            r.verdict.map(kind_name).unwrap_or_default().to_string(),
            r.status.clone(),
        ]);
        statuses.push(RowStatus {
            id: format!("n={}", r.n),
            status: r.status.clone(),
        });
    }
    let final_order = rows.iter().rev().find_map(|r| r.residual_order);
    Ok(RunOutput {
        table,
        rows: statuses,
        summary: json!({ "q": q, "final_residual_order": final_order }),
        violations: 0,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "n",
            extra: &["set logscale xy"],
            series: vec![(1, 3, "sampled residual"), (1, 6, "polished error")],
        },
    })
}

fn run_sweep_q(cli: &Cli, cfg: &Config, seed: u64, pool: &rayon::ThreadPool) -> Result<RunOutput> {
    let weight = Weight::parse(&required(cfg, "problem", "weight")?)?;
    let bc = cfg.bc_or("problem", "bc", BoundaryCondition::Dirichlet)?;
    let mesh = cfg.mesh_or(Geometry::interval(0.0, PI)?, 800, cli.n)?;
    let starts = cfg.usize_or("problem", "starts", 8)?;
    let q_grid = cfg.list_f64_or(
        "experiment",
        "q_grid",
        &[0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95],
    )?;
    let refine = cfg.bool_or("experiment", "refine", false)?;
    cfg.finish()?;

    let t = ProblemTemplate { mesh, bc, weight };
    let sweep = pool.install(|| sweep_q(&t, &q_grid, refine, starts, seed))?;

    let mut table = Table::new(vec![
        "q",
        "solutions",
        "nontrivial",
        "all_in_cone",
        "max_sup",
        "dead_cores",
        "worst_residual",
        "verdicts",
        "status",
    ]);
    let mut statuses = Vec::new();
    for r in &sweep.rows {
        table.push(vec![
            cell_f(r.q),
            cell_u(r.solutions),
            cell_u(r.nontrivial),
            cell_b(r.all_in_cone),
            cell_f(r.max_sup),
            cell_u(r.dead_cores),
            cell_f(r.worst_residual),
            r.verdicts.clone(),
            r.status.clone(),
        ]);
        statuses.push(RowStatus {
            id: format!("q={}", r.q),
            status: r.status.clone(),
        });
    }
    let mut warnings = Vec::new();
    if sweep.pattern_violations > 0 {
        warnings.push(format!(
            "in-cone verdicts do not form an interval ({} inversions); the multistart survey may have missed solutions",
            sweep.pattern_violations
        ));
    }
    Ok(RunOutput {
        table,
        rows: statuses,
        summary: json!({
            "bracket": sweep.bracket,
            "q_hat": sweep.q_hat,
            "pattern_violations": sweep.pattern_violations,
        }),
        violations: 0,
        warnings,
        plot: Plot {
            xlabel: "q",
            extra: &[],
            series: vec![(1, 3, "nontrivial solutions"), (1, 5, "max sup norm")],
        },
    })
}

fn run_sweep_negative_part(
    cli: &Cli,
    cfg: &Config,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<RunOutput> {
    let aplus = Weight::parse(&required(cfg, "problem", "aplus")?)?;
    let aminus = Weight::parse(&required(cfg, "problem", "aminus")?)?;
    let q = cfg.f64_or("problem", "q", 0.5)?;
    let mesh = cfg.mesh_or(Geometry::interval(0.0, PI)?, 800, cli.n)?;
    let starts = cfg.usize_or("problem", "starts", 8)?;
    let dim = match mesh.geometry() {
        Geometry::Interval { .. } => 1,
        Geometry::Radial { dimension, .. } => dimension as usize,
    };
    let lr_exponent = cfg.f64_or("experiment", "lr_exponent", (2 * dim + 1) as f64)?;
    let mu_grid = cfg.list_f64_or(
        "experiment",
        "mu_grid",
        &[0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
    )?;
    cfg.finish()?;

    let sweep = pool.install(|| {
        sweep_negative_part(&mesh, &aplus, &aminus, &mu_grid, q, lr_exponent, starts, seed)
    })?;

    let mut table = Table::new(vec![
        "mu",
        "lr_norm",
        "solutions",
        "nontrivial",
        "all_in_cone",
        "max_sup",
        "dead_cores",
        "worst_residual",
        "verdicts",
        "status",
    ]);
    let mut statuses = Vec::new();
    for r in &sweep.rows {
        table.push(vec![
            cell_f(r.mu),
            cell_f(r.lr_norm),
            cell_u(r.solutions),
            cell_u(r.nontrivial),
            cell_b(r.all_in_cone),
            cell_f(r.max_sup),
            cell_u(r.dead_cores),
            cell_f(r.worst_residual),
            r.verdicts.clone(),
            r.status.clone(),
        ]);
        statuses.push(RowStatus {
            id: format!("mu={}", r.mu),
            status: r.status.clone(),
        });
    }
    let mut warnings = Vec::new();
    if sweep.pattern_violations > 0 {
        warnings.push(format!(
            "in-cone verdicts reappear after the first failure ({} rows); the multistart survey may have missed solutions",
            sweep.pattern_violations
        ));
    }
    Ok(RunOutput {
        table,
        rows: statuses,
        summary: json!({
            "mu_hat": sweep.mu_hat,
            "bracket": sweep.bracket,
            "lr_exponent": lr_exponent,
            "pattern_violations": sweep.pattern_violations,
        }),
        violations: 0,
        warnings,
        plot: Plot {
            xlabel: "mu",
            extra: &[],
            series: vec![(1, 2, "negative part norm"), (1, 6, "max sup norm")],
        },
    })
}

/// Integral signs in the default catalog straddle zero: positive, exactly
/// zero (sin 2x), and negative entries all appear.
pub const NEUMANN_CATALOG: &str = "sin(3); sin-plus(3,0.3183098861837907); sin(2); const(-1); pex(0.5); pex(0.7); sin-plus(3,-0.5)";

fn run_neumann_law(
    cli: &Cli,
    cfg: &Config,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<RunOutput> {
    let q = cfg.f64_or("problem", "q", 0.5)?;
    let mesh = cfg.mesh_or(Geometry::interval(0.0, PI)?, 800, cli.n)?;
    let starts = cfg.usize_or("problem", "starts", 8)?;
    let weights = cfg.weights_or("experiment", "weights", NEUMANN_CATALOG)?;
    cfg.finish()?;

    let rep = pool.install(|| neumann_law(&mesh, &weights, q, starts, seed))?;

    let mut table = Table::new(vec![
        "weight",
        "integral",
        "solutions",
        "nontrivial",
        "positive",
        "violations",
        "status",
    ]);
    let mut statuses = Vec::new();
    for r in &rep.rows {
        table.push(vec![
            r.weight.clone(),
            cell_f(r.integral),
            cell_u(r.solutions),
            cell_u(r.nontrivial),
            cell_u(r.positive),
            cell_u(r.violations),
            r.status.clone(),
        ]);
        statuses.push(RowStatus {
            id: r.weight.clone(),
            status: r.status.clone(),
        });
    }
    Ok(RunOutput {
        table,
        rows: statuses,
        summary: json!({ "violations": rep.violations, "weights": rep.rows.len() }),
        violations: rep.violations,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "weight index",
            extra: &[],
            series: vec![(0, 2, "integral"), (0, 5, "positive solutions")],
        },
    })
}

fn run_ta_recursion(cfg: &Config) -> Result<RunOutput> {
    let q0 = cfg.f64_or("experiment", "q0", 0.0)?;
    let steps = cfg.usize_or("experiment", "steps", 200)?;
    cfg.finish()?;

    let rep = ta_recursion(q0, steps)?;

    let mut table = Table::new(vec!["step", "q", "sigma", "gap"]);
    let mut statuses = Vec::new();
    for s in &rep.steps {
        table.push(vec![
            cell_u(s.step),
            cell_f(s.q),
            cell_f(s.sigma),
            cell_f(s.gap),
        ]);
        statuses.push(RowStatus {
            id: format!("step={}", s.step),
            status: STATUS_OK.into(),
        });
    }
    let last = rep.steps.last().expect("at least the initial step");
    Ok(RunOutput {
        table,
        rows: statuses,
        summary: json!({ "q0": q0, "final_q": last.q, "final_gap": last.gap }),
        violations: rep.violations,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "step",
            extra: &[],
            series: vec![(1, 2, "q"), (1, 4, "gap")],
        },
    })
}

fn run_concave_convex(
    cli: &Cli,
    cfg: &Config,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<RunOutput> {
    let weight = cfg.weight_or("problem", "weight", "const(1)")?;
    let q = cfg.f64_or("problem", "q", 0.5)?;
    let p_exp = cfg.f64_or("problem", "p", 3.0)?;
    let bc = cfg.bc_or("problem", "bc", BoundaryCondition::Dirichlet)?;
    let mesh = cfg.mesh_or(Geometry::interval(0.0, PI)?, 600, cli.n)?;
    let starts = cfg.usize_or("problem", "starts", 12)?;
    let lambda_grid = cfg.list_f64_or("experiment", "lambda_grid", &[0.2, 0.1, 0.05, 0.025])?;
    cfg.finish()?;

    let rep = pool.install(|| {
        concave_convex(&mesh, &lambda_grid, q, p_exp, &weight, bc, starts, seed)
    })?;

    let mut table = Table::new(vec![
        "lambda",
        "solutions",
        "positive",
        "minimal_norm",
        "second_norm",
        "minimal_kind",
        "second_kind",
        "worst_residual",
        "status",
    ]);
    let mut statuses = Vec::new();
    for r in &rep.rows {
        table.push(vec![
            cell_f(r.lambda),
            cell_u(r.solutions),
            cell_u(r.positive),
            cell_of(r.minimal_norm),
            cell_of(r.second_norm),
            r.minimal_kind.map(kind_name).unwrap_or_default().to_string(),
            r.second_kind.map(kind_name).unwrap_or_default().to_string(),
            cell_f(r.worst_residual),
            r.status.clone(),
        ]);
        statuses.push(RowStatus {
            id: format!("lambda={}", r.lambda),
            status: r.status.clone(),
        });
    }
    Ok(RunOutput {
        table,
        rows: statuses,
        summary: json!({
            "two_branch_lambdas": rep.two_branch_lambdas,
            "decay_violations": rep.decay_violations,
            "second_branch_min": rep.second_branch_min,
            "second_branch_max": rep.second_branch_max,
        }),
        violations: rep.decay_violations,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "lambda",
            extra: &["set logscale xy"],
            series: vec![(1, 4, "minimal branch"), (1, 5, "second branch")],
        },
    })
}

fn run_dead_core(cli: &Cli, cfg: &Config, pool: &rayon::ThreadPool) -> Result<RunOutput> {
    let q = cfg.f64_or("problem", "q", 0.5)?;
    let n = match cli.n {
        Some(n) => {
            cfg.take("problem", "n");
            n
        }
        None => cfg.usize_or("problem", "n", 4000)?,
    };
    let outside = cfg.f64_or("experiment", "outside", -1.0)?;
    let extend = cfg.bool_or("experiment", "extend", true)?;
    cfg.finish()?;

    let rep = pool.install(|| deadcore_experiment(q, outside, n, extend))?;

    let mut table = Table::new(vec!["x", "u"]);
    let mesh = rep.u.mesh().clone();
    for (i, &v) in rep.u.values().iter().enumerate() {
        table.push(vec![cell_f(mesh.node(i)), cell_f(v)]);
    }
    // The extended construction must exhibit an interior dead core; without
    // the extension any detected core would be spurious.
    let violations = if extend {
        usize::from(rep.cores.is_empty() || rep.residual > 1e-6)
    } else {
        usize::from(!rep.cores.is_empty())
    };
    let cores: Vec<(f64, f64)> = rep.cores.iter().map(|c| (c.left, c.right)).collect();
    Ok(RunOutput {
        table,
        rows: vec![RowStatus {
            id: "polish".into(),
            status: STATUS_OK.into(),
        }],
        summary: json!({
            "domain": rep.domain,
            "n": rep.n,
            "sup_norm": rep.sup_norm,
            "residual": rep.residual,
            "iterations": rep.iterations,
            "verdict": kind_name(rep.verdict),
            "dead_cores": cores,
        }),
        violations,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "x",
            extra: &[],
            series: vec![(1, 2, "u")],
        },
    })
}

fn run_solve_one(
    cli: &Cli,
    cfg: &Config,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<RunOutput> {
    let weight = Weight::parse(&required(cfg, "problem", "weight")?)?;
    let q = cfg.f64_or("problem", "q", 0.5)?;
    let bc = cfg.bc_or("problem", "bc", BoundaryCondition::Dirichlet)?;
    let mesh = cfg.mesh_or(Geometry::interval(0.0, PI)?, 800, cli.n)?;
    let starts = cfg.usize_or("problem", "starts", 8)?;
    let method = cfg.str_or("experiment", "method", "bracket");
    let init = cfg.str_or("experiment", "init", "zero");
    cfg.finish()?;

    let p = ProblemSpec::new(mesh.clone(), bc, weight, Nonlinearity::power(q)?)?;
    let opts = SolveOptions::default();
    let rec = pool.install(|| match method.as_str() {
        "bracket" => {
            let sub = auto_subsolution(&p)?;
            let (sup, _) = find_supersolution(&p)?;
            monotone_iterate(&p, &sub, &sup, &opts)
        }
        "newton" => {
            let start = match init.as_str() {
                "zero" => GridFunction::zeros(mesh.clone()),
                "sub" => auto_subsolution(&p)?,
                "sup" => find_supersolution(&p)?.0,
                other => {
                    return Err(Error::Config(format!(
                        "[experiment] init: expected zero, sub, or sup, got '{other}'"
                    )))
                }
            };
            newton_solve(&p, &start, &opts)
        }
        "multistart" => multistart_solve(&p, starts, seed)
            .into_iter()
            .max_by(|a, b| a.u.sup_norm().total_cmp(&b.u.sup_norm()))
            .ok_or_else(|| Error::NoConvergence {
                iterations: 0,
                context: "multistart survey found no solutions".into(),
            }),
        other => Err(Error::Config(format!(
            "[experiment] method: expected bracket, newton, or multistart, got '{other}'"
        ))),
    })?;

    let verdict = classify(&rec.u, bc, &Tolerances::for_function(&rec.u));
    let mut table = Table::new(vec!["x", "u"]);
    for (i, &v) in rec.u.values().iter().enumerate() {
        table.push(vec![cell_f(mesh.node(i)), cell_f(v)]);
    }
    Ok(RunOutput {
        table,
        rows: vec![RowStatus {
            id: method.clone(),
            status: STATUS_OK.into(),
        }],
        summary: json!({
            "method": method,
            "sup_norm": rec.u.sup_norm(),
            "h1_norm": h1_norm(&rec.u),
            "residual": rec.residual_inf,
            "iterations": rec.iterations,
            "verdict": kind_name(verdict.kind),
            "min_interior": verdict.min_interior,
            "boundary_derivatives": verdict.boundary_derivs,
            "dead_cores": verdict.dead_cores.len(),
        }),
        violations: 0,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "x",
            extra: &[],
            series: vec![(1, 2, "u")],
        },
    })
}

fn run_eigen(cli: &Cli, cfg: &Config, pool: &rayon::ThreadPool) -> Result<RunOutput> {
    let weight = cfg.weight_or("problem", "weight", "pex(0.5)")?;
    let mesh = cfg.mesh_or(Geometry::interval(0.0, PI)?, 2000, cli.n)?;
    let q = match cfg.take("experiment", "q") {
        None => None,
        Some(v) => Some(v.parse::<f64>().map_err(|_| {
            Error::Config(format!("[experiment] q: expected a number, got '{v}'"))
        })?),
    };
    cfg.finish()?;

    let ws = split(&weight, &mesh)?;
    let b = ws.largest_component().ok_or_else(|| {
        Error::WeightNotAdmissible("weight has no positivity component".into())
    })?;
    let a = weight.sample(&mesh)?;
    let pair = pool.install(|| principal_eigenpair(&a, &b, &mesh))?;
    let eps = match q {
        Some(q) => Some(eps_max(q, pair.lambda1)?),
        None => None,
    };

    let mut table = Table::new(vec!["x", "weight", "eigenfunction"]);
    for (i, &phi) in pair.phi.values().iter().enumerate() {
        table.push(vec![
            cell_f(mesh.node(i)),
            cell_f(a.values()[i]),
            cell_f(phi),
        ]);
    }
    Ok(RunOutput {
        table,
        rows: vec![RowStatus {
            id: "eigenpair".into(),
            status: STATUS_OK.into(),
        }],
        summary: json!({
            "lambda1": pair.lambda1,
            "component": (pair.b.left, pair.b.right),
            "q": q,
            "eps_max": eps,
        }),
        violations: 0,
        warnings: Vec::new(),
        plot: Plot {
            xlabel: "x",
            extra: &[],
            series: vec![(1, 2, "weight"), (1, 3, "eigenfunction")],
        },
    })
}
