//! Command-line driver: identity verification suites, the admissibility
//! table, transitivity demonstrations, nodal solves, and Heisenberg pullback.
//!
//! Every run emits a JSON report {command, params, checks, artifacts} on
//! stdout (the admissibility table prints itself for text/csv formats) and
//! one human-readable line per check on stderr. Exit code 0 iff every check
//! passed. All randomness flows from --seed; reruns with the same arguments
//! produce byte-identical reports. CRYAMABE_THREADS caps the worker pool.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use serde::Deserialize;
use serde_json::json;

use cryamabe::harmonics::{self, Bidegree, ZonalKernel};
use cryamabe::heisenberg::{self, HeisenbergPoint};
use cryamabe::operators::{self, DiagonalExpansion};
use cryamabe::report::{Check, Report};
use cryamabe::solver::{self, SolveConfig};
use cryamabe::sphere::{self, QuadratureSpec, SpherePoint};
use cryamabe::symmetry;
use cryamabe::{admissible, homogeneous_dim, Error, Result};

#[derive(Parser)]
#[command(name = "cryamabe", version, about = "CR sphere spectral toolkit and nodal solver")]
struct Cli {
    /// JSON file supplying default parameter values; explicit flags override.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the geometric and spectral identity suites.
    VerifyIdentities(VerifyArgs),
    /// Render the admissibility summary table.
    AdmissibleTable(TableArgs),
    /// Demonstrate transitivity of the composed block-unitary action.
    Transitivity(TransitivityArgs),
    /// Minimize the Nehari quotient and report the nodal profile.
    Solve(SolveArgs),
    /// Solve, then pull the profile back to the Heisenberg group.
    Pullback(PullbackArgs),
}

/// Optional defaults loaded from --config; field names match the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileDefaults {
    n: Option<usize>,
    gamma: Option<f64>,
    i: Option<usize>,
    j: Option<usize>,
    basis_size: Option<usize>,
    sample_count: Option<usize>,
    seed: Option<u64>,
    max_n: Option<usize>,
    format: Option<String>,
    output: Option<String>,
    grad_tol: Option<f64>,
    max_iters: Option<usize>,
    quad_nodes: Option<usize>,
    grid: Option<usize>,
    trials: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// CR dimension (1..=4).
    #[arg(long)]
    n: Option<usize>,
    /// Operator order γ ∈ (0, Q/2).
    #[arg(long)]
    gamma: Option<f64>,
    /// Monte Carlo samples per estimate.
    #[arg(long)]
    sample_count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Largest CR dimension to tabulate.
    #[arg(long)]
    max_n: Option<usize>,
    /// Output format: text, csv, or json (json emits the run report).
    #[arg(long)]
    format: Option<String>,
    /// Write the table to this path instead of only stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct TransitivityArgs {
    /// CR dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Inner block index i (1 ≤ i < j).
    #[arg(long)]
    i: Option<usize>,
    /// Outer block index j (j ≤ ⌊(n+1)/2⌋).
    #[arg(long)]
    j: Option<usize>,
    /// Number of random points to canonicalize.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    /// Exponent γ ∈ [1, 4/3).
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of odd Legendre modes.
    #[arg(long)]
    basis_size: Option<usize>,
    /// Gauss–Legendre nodes (≥ 4(basis_size+1)).
    #[arg(long)]
    quad_nodes: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid points for the CSV profile.
    #[arg(long)]
    grid: Option<usize>,
    /// Artifact prefix: writes <output>.json and <output>.csv.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct PullbackArgs {
    /// Exponent γ ∈ [1, 4/3).
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of odd Legendre modes.
    #[arg(long)]
    basis_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Heisenberg sample points.
    #[arg(long)]
    sample_count: Option<usize>,
    /// Write the sampled values as CSV (z_re,z_im,t,u).
    #[arg(long)]
    output: Option<String>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CRYAMABE_THREADS") {
        if let Ok(k) = threads.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    let cli = Cli::parse();
    let defaults = match load_defaults(cli.config.as_deref()) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::VerifyIdentities(a) => cmd_verify(a, &defaults),
        Command::AdmissibleTable(a) => cmd_table(a, &defaults),
        Command::Transitivity(a) => cmd_transitivity(a, &defaults),
        Command::Solve(a) => cmd_solve(a, &defaults),
        Command::Pullback(a) => cmd_pullback(a, &defaults),
    };
    match outcome {
        Ok(report) => finish(report),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_defaults(path: Option<&std::path::Path>) -> Result<FileDefaults> {
    match path {
        None => Ok(FileDefaults::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

/// Prints the report, echoes per-check lines on stderr, names failures, and
/// maps the verdict to the exit code.
fn finish(report: Option<Report>) -> ExitCode {
    let Some(report) = report else {
        return ExitCode::SUCCESS;
    };
    for c in &report.checks {
        let sigma = c
            .sigma
            .map(|s| format!(" sigma={s:.3e}"))
            .unwrap_or_default();
        eprintln!(
            "{} {:<44} value={:+.6e}{sigma}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value
        );
    }
    match report.to_json() {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        for c in report.failing() {
            eprintln!("FAILED check: {}", c.name);
        }
        ExitCode::FAILURE
    }
}

fn write_report_copy(report: &Report, path: Option<&str>) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, report.to_json()? + "\n")?;
    }
    Ok(())
}

/// Uniform Heisenberg sample cloud via the inverse Cayley chart; points too
/// close to the chart pole are dropped.
fn sample_heisenberg(n: usize, count: usize, spec: QuadratureSpec) -> Vec<HeisenbergPoint> {
    sphere::sample_uniform(n, spec.with_samples(count + count / 4 + 64))
        .iter()
        .filter_map(|eta| heisenberg::cayley_inverse(eta).ok())
        .take(count)
        .collect()
}

/// Deterministic test-profile coefficients in [−1, 1].
fn test_coeffs(seed: u64, salt: u64, count: usize) -> Vec<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (salt.wrapping_mul(0x9e3779b97f4a7c15)));
    (0..count)
        .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0)
        .collect()
}

fn cmd_verify(args: &VerifyArgs, d: &FileDefaults) -> Result<Option<Report>> {
    let n = args.n.or(d.n).unwrap_or(1);
    let gamma = args.gamma.or(d.gamma).unwrap_or(1.0);
    let samples = args.sample_count.or(d.sample_count).unwrap_or(100_000);
    let seed = args.seed.or(d.seed).unwrap_or(42);
    if n == 0 || n > 4 {
        return Err(Error::Domain(format!("verify-identities needs 1 <= n <= 4, got {n}")));
    }
    let q = homogeneous_dim(n) as f64;
    if !(gamma > 0.0 && gamma < q / 2.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0, Q/2) = (0, {}), got {gamma}",
            q / 2.0
        )));
    }

    let mut report = Report::new(
        "verify-identities",
        json!({"n": n, "gamma": gamma, "sample_count": samples, "seed": seed}),
    );
    let spec = QuadratureSpec::new(samples, seed, 1);

    // Conformal distance identity on random pairs.
    let pair_count = samples.min(100_000);
    let points = sample_heisenberg(n, 2 * pair_count, spec.with_stream(10));
    let mut worst = 0.0f64;
    for pair in points.chunks_exact(2) {
        worst = worst.max(heisenberg::distance_conformal_check(&pair[0], &pair[1])?);
    }
    report.push(Check::exact("distance_identity_max_rel", worst, worst <= 1e-10));

    // Measure identity for a small function battery.
    let battery: Vec<(&str, Box<dyn Fn(&SpherePoint) -> f64 + Sync>)> = vec![
        ("abs_sq_first", Box::new(|eta: &SpherePoint| eta.coords()[0].norm_sqr())),
        (
            "re_pair_product",
            Box::new(|eta: &SpherePoint| {
                let c = eta.coords();
                (c[0] * c[c.len() - 1].conj()).re
            }),
        ),
        (
            "smooth_exp",
            Box::new(|eta: &SpherePoint| (-eta.coords()[0].re).exp()),
        ),
    ];
    for (name, f) in &battery {
        let (a, b) = heisenberg::measure_identity_check(f, n, spec.with_stream(20))?;
        let sigma = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        let z = (a.mean - b.mean).abs() / sigma;
        report.push(Check::stochastic(
            format!("measure_identity_z_{name}"),
            z,
            sigma,
            z <= 3.0,
        ));
    }

    // Zonal trace identity: ω·Φ_{j,j}(ζ,ζ) = dim H_{j,j}.
    let omega = sphere::surface_measure(n);
    let mut trace_worst = 0.0f64;
    for j in 0..=10usize {
        let kern = ZonalKernel::new(n, Bidegree::new(j, j));
        let m = harmonics::space_dimension(n, Bidegree::new(j, j))? as f64;
        let trace = omega * kern.eval_from_pair(Complex64::new(1.0, 0.0)).re;
        trace_worst = trace_worst.max(((trace - m) / m).abs());
    }
    report.push(Check::exact(
        "zonal_trace_max_rel",
        trace_worst,
        trace_worst <= 1e-10,
    ));

    // Reproducing (idempotence) identity for Φ_{1,1}.
    let kern = ZonalKernel::new(n, Bidegree::new(1, 1));
    let zeta = SpherePoint::basis(n, 0);
    let xi = SpherePoint::new(vec![Complex64::new(1.0, 0.2); n + 1])?;
    let (est, reference) = harmonics::semigroup_check(&kern, &zeta, &xi, spec.with_stream(30))?;
    let z = (est.mean - reference).abs() / est.std_error;
    report.push(Check::stochastic(
        "projection_idempotence_z",
        z,
        est.std_error,
        z <= 3.0,
    ));

    // Funk–Hecke eigenvalues on zonal eigenfunctions.
    for j in 0..=1usize {
        let d2 = Bidegree::new(j, j);
        let kern = ZonalKernel::new(n, d2);
        let pole = SpherePoint::basis(n, 0);
        let psi = |eta: &SpherePoint| kern.eval_real(eta, &pole).expect("dimension fixed");
        let ev = operators::funk_hecke_eigenvalue(n, gamma, d2)?;
        let at = SpherePoint::new(vec![Complex64::new(1.0, -0.4); n + 1])?;
        let est = operators::funk_hecke_apply(psi, gamma, &at, spec.with_stream(40 + j as u64))?;
        let expected = ev * psi(&at);
        let z = (est.median - expected).abs() / est.sigma;
        report.push(Check::stochastic(
            format!("funk_hecke_z_j{j}"),
            z,
            est.sigma,
            z <= 3.0,
        ));
    }

    // Constant solution: algebraic equation, closed-form pullback agreement,
    // and the convolution fixed point.
    let cs = operators::ConstantSolution::new(n, gamma)?;
    let algebraic = cs.algebraic_residual()?;
    report.push(Check::exact(
        "constant_solution_algebraic",
        algebraic,
        algebraic <= 1e-12,
    ));
    let cloud = sample_heisenberg(n, 1000, spec.with_stream(50));
    let mut pb_worst = 0.0f64;
    for w in &cloud {
        let direct = operators::pullback_to_heisenberg(|_| cs.value, gamma, w);
        let closed = cs.pullback_closed_form(w)?;
        pb_worst = pb_worst.max(((direct - closed) / closed).abs());
    }
    report.push(Check::exact(
        "constant_pullback_max_rel",
        pb_worst,
        pb_worst <= 1e-12,
    ));
    let p_exp = cryamabe::critical_exponent(n, gamma);
    let probe = HeisenbergPoint::new(
        (0..n).map(|k| Complex64::new(0.3, -0.1 * (k as f64 + 1.0))).collect(),
        0.4,
    );
    let conv = operators::convolution_residual(
        |w| cs.pullback_closed_form(w).expect("gamma validated"),
        gamma,
        &probe,
        spec.with_stream(60),
        p_exp - 2.0,
    )?;
    let zc = conv.residual.abs() / conv.residual_sigma;
    report.push(Check::stochastic(
        "convolution_residual_z",
        zc,
        conv.residual_sigma,
        zc <= 3.0,
    ));

    // Sharp Sobolev inequality (diagonal route, n = 1 only).
    if n == 1 {
        let constant = DiagonalExpansion::constant(1.0 + gamma);
        let chk = operators::sobolev_check_diagonal(&constant, gamma, spec.with_stream(70))?;
        // Extremals make every Monte Carlo sample identical, so the shard
        // variance collapses to 0; the deviation test needs an exactness floor.
        let dev = (chk.ratio - 1.0).abs();
        report.push(Check::stochastic(
            "sobolev_extremal_ratio_dev",
            dev,
            chk.ratio_sigma,
            dev <= 3.0 * chk.ratio_sigma + 1e-12,
        ));
        let mut ratio_worst = f64::NEG_INFINITY;
        for salt in 0..3u64 {
            let coeffs = test_coeffs(seed, salt, 4);
            let u = DiagonalExpansion::new(coeffs.into_iter().enumerate().collect());
            let chk =
                operators::sobolev_check_diagonal(&u, gamma, spec.with_stream(80 + salt))?;
            ratio_worst = ratio_worst.max(chk.ratio - 3.0 * chk.ratio_sigma);
        }
        report.push(Check::exact(
            "sobolev_inequality_margin",
            ratio_worst,
            ratio_worst <= 1.0,
        ));
    }

    if let Some(p) = args.output.as_deref().or(d.output.as_deref()) {
        report.add_artifact(p);
        write_report_copy(&report, Some(p))?;
    }
    Ok(Some(report))
}

fn cmd_table(args: &TableArgs, d: &FileDefaults) -> Result<Option<Report>> {
    let max_n = args.max_n.or(d.max_n).unwrap_or(8);
    let format = args
        .format
        .clone()
        .or_else(|| d.format.clone())
        .unwrap_or_else(|| "text".into());
    if !(1..=64).contains(&max_n) {
        return Err(Error::Domain(format!("max_n must be in 1..=64, got {max_n}")));
    }
    let rendered = match format.as_str() {
        "text" | "json" => admissible::render_table(max_n),
        "csv" => admissible::render_table_csv(max_n),
        other => {
            return Err(Error::Domain(format!(
                "unknown format '{other}'; expected text, csv, or json"
            )))
        }
    };
    if let Some(path) = args.output.as_deref().or(d.output.as_deref()) {
        std::fs::write(path, &rendered)?;
    }
    if format == "json" {
        let mut report = Report::new("admissible-table", json!({"max_n": max_n, "format": format}));
        let rows = admissible::summary_rows(max_n);
        report.push(Check::exact("rows", rows.len() as f64, rows.len() == max_n));
        let counts_ok = rows.iter().all(|r| r.solution_count == (r.n + 1) / 2);
        report.push(Check::exact(
            "solution_counts",
            rows.iter().map(|r| r.solution_count).sum::<usize>() as f64,
            counts_ok,
        ));
        if let Some(path) = args.output.as_deref().or(d.output.as_deref()) {
            report.add_artifact(path);
        }
        Ok(Some(report))
    } else {
        print!("{rendered}");
        Ok(None)
    }
}

fn cmd_transitivity(args: &TransitivityArgs, d: &FileDefaults) -> Result<Option<Report>> {
    let n = args.n.or(d.n).unwrap_or(3);
    let i = args.i.or(d.i).unwrap_or(1);
    let j = args.j.or(d.j).unwrap_or(2);
    let trials = args.trials.or(d.trials).unwrap_or(1000);
    let seed = args.seed.or(d.seed).unwrap_or(42);

    let spec = QuadratureSpec::new(trials, seed, 2);
    let points = sphere::sample_uniform(n, spec);
    let target = SpherePoint::basis(n, i);
    let mut canon_worst = 0.0f64;
    let mut defect_worst = 0.0f64;
    for eta in &points {
        let (word, canonical) = symmetry::canonicalize(eta, i, j)?;
        canon_worst = canon_worst.max(sphere::coordinate_distance(&canonical, &target)?);
        for g in &word {
            defect_worst = defect_worst.max(g.unitarity_defect());
        }
    }
    let mut transport_worst = 0.0f64;
    for pair in points.chunks_exact(2).take(trials / 2) {
        let word = symmetry::transport_word(&pair[0], &pair[1], i, j)?;
        let moved = symmetry::apply_word(&word, &pair[0])?;
        transport_worst = transport_worst.max(sphere::coordinate_distance(&moved, &pair[1])?);
    }

    let mut report = Report::new(
        "transitivity",
        json!({"n": n, "i": i, "j": j, "trials": trials, "seed": seed}),
    );
    report.push(Check::exact(
        "canonical_distance_max",
        canon_worst,
        canon_worst <= 1e-10,
    ));
    report.push(Check::exact(
        "word_unitarity_defect_max",
        defect_worst,
        defect_worst <= 1e-12,
    ));
    report.push(Check::exact(
        "transport_distance_max",
        transport_worst,
        transport_worst <= 1e-10,
    ));
    if let Some(p) = &args.output {
        report.add_artifact(p.clone());
        write_report_copy(&report, Some(p))?;
    }
    Ok(Some(report))
}

fn cmd_solve(args: &SolveArgs, d: &FileDefaults) -> Result<Option<Report>> {
    let gamma = args.gamma.or(d.gamma).unwrap_or(1.0);
    let basis_size = args.basis_size.or(d.basis_size).unwrap_or(8);
    let seed = args.seed.or(d.seed).unwrap_or(7);
    let mut cfg = SolveConfig::new(gamma, basis_size, seed);
    if let Some(qn) = args.quad_nodes.or(d.quad_nodes) {
        cfg.quad_nodes = qn;
    }
    if let Some(mi) = args.max_iters.or(d.max_iters) {
        cfg.max_iters = mi;
    }
    if let Some(gt) = args.grad_tol.or(d.grad_tol) {
        cfg.grad_tol = gt;
    }
    let grid = args.grid.or(d.grid).unwrap_or(256);

    if let Err(e) = cfg.validate() {
        if let Ok(rep) = admissible::admissibility_f64(1, gamma) {
            eprintln!(
                "admissibility at n=1: gamma={} admissible={} (branch {:?}); union {}",
                gamma,
                rep.admissible,
                rep.branch,
                admissible::summary_rows(1)[0].gamma_ranges
            );
        }
        return Err(e);
    }
    let res = solver::solve_nodal(&cfg)?;

    let q = solver::reduced_quadratic_form(&res.profile)?;
    let pn = solver::reduced_pnorm(&res.profile, cfg.quad_nodes)?;
    let nehari_rel = (q - pn).abs() / q;
    let mut odd_defect = 0.0f64;
    for gidx in 0..grid {
        let x = gidx as f64 / (grid - 1) as f64;
        odd_defect = odd_defect.max((res.profile.eval(x) + res.profile.eval(1.0 - x)).abs());
    }

    let mut report = Report::new(
        "solve",
        json!({
            "gamma": gamma,
            "basis_size": basis_size,
            "quad_nodes": cfg.quad_nodes,
            "max_iters": cfg.max_iters,
            "grad_tol": cfg.grad_tol,
            "seed": seed,
            "grid": grid,
        }),
    );
    report.push(Check::exact(
        "euler_lagrange_residual",
        res.grad_norm,
        res.grad_norm <= cfg.grad_tol,
    ));
    report.push(Check::exact(
        "sign_changes",
        res.sign_changes as f64,
        res.sign_changes >= 1,
    ));
    report.push(Check::exact("nehari_rel_defect", nehari_rel, nehari_rel <= 1e-8));
    report.push(Check::exact("odd_symmetry_max_abs", odd_defect, odd_defect <= 1e-12));
    report.push(Check::exact("energy", res.energy, res.energy.is_finite()));

    if let Some(prefix) = args.output.as_deref().or(d.output.as_deref()) {
        let json_path = format!("{prefix}.json");
        let csv_path = format!("{prefix}.csv");
        std::fs::write(&json_path, serde_json::to_string_pretty(&res)? + "\n")?;
        std::fs::write(&csv_path, solver::profile_csv(&res.profile, grid))?;
        report.add_artifact(json_path);
        report.add_artifact(csv_path);
    }
    Ok(Some(report))
}

fn cmd_pullback(args: &PullbackArgs, d: &FileDefaults) -> Result<Option<Report>> {
    let gamma = args.gamma.or(d.gamma).unwrap_or(1.0);
    let basis_size = args.basis_size.or(d.basis_size).unwrap_or(8);
    let seed = args.seed.or(d.seed).unwrap_or(7);
    let count = args.sample_count.or(d.sample_count).unwrap_or(2000);

    let cfg = SolveConfig::new(gamma, basis_size, seed);
    let res = solver::solve_nodal(&cfg)?;
    let spec = QuadratureSpec::new(count, seed, 3);
    let cloud = sample_heisenberg(1, count, spec);
    let values = solver::pullback_solution(&res, &cloud)?;

    let max_u = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_u = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let q = homogeneous_dim(1) as f64;
    let sup_profile = (0..512)
        .map(|k| res.profile.eval(k as f64 / 511.0).abs())
        .fold(0.0f64, f64::max);
    let bound_c = 2f64.powf((q - 2.0 * gamma) / 2.0) * sup_profile;
    let mut decay_worst = 0.0f64;
    for (w, &u) in cloud.iter().zip(&values) {
        let envelope = bound_c * heisenberg::conformal_factor(w).powf((2.0 * gamma - q) / 4.0);
        decay_worst = decay_worst.max(u.abs() / envelope);
    }

    let mut report = Report::new(
        "pullback",
        json!({
            "gamma": gamma,
            "basis_size": basis_size,
            "seed": seed,
            "sample_count": count,
        }),
    );
    report.push(Check::exact("max_value", max_u, max_u > 0.0));
    report.push(Check::exact("min_value", min_u, min_u < 0.0));
    report.push(Check::exact(
        "decay_envelope_max_ratio",
        decay_worst,
        decay_worst <= 1.0 + 1e-12,
    ));

    if let Some(path) = args.output.as_deref().or(d.output.as_deref()) {
        let mut csv = String::from("z_re,z_im,t,u\n");
        for (w, u) in cloud.iter().zip(&values) {
            use std::fmt::Write as _;
            let _ = writeln!(csv, "{},{},{},{}", w.z[0].re, w.z[0].im, w.t, u);
        }
        std::fs::write(path, csv)?;
        report.add_artifact(path);
    }
    Ok(Some(report))
}
