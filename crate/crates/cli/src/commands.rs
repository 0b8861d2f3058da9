use std::f64::consts::PI;
use std::path::Path;
use std::thread;

use pdmosc_core::classical::{self, ClassicalError, OrbitSolution};
use pdmosc_core::eigensolve::{self, EigenGrid, EigenResult};
use pdmosc_core::model::{self, AmbiguityTriple, ModelParams};
use pdmosc_core::quantum::{self, QuantumConfig, Wavefunction};
use serde::Serialize;

use crate::config::{self, RunConfig, Space};
use crate::error::CliError;
use crate::output::{self, fmt, header, Table};

/// Runs `f` over `items` on scoped worker threads; results keep input order.
fn fan_out<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn warn_boundary(cfg: &QuantumConfig) {
    if cfg.is_boundary_case() {
        eprintln!(
            "warning: a^2 + epsilon = 1/4 is the limit-circle boundary; the Dirichlet \
             condition at x = 0 is a choice here and results carry reduced confidence"
        );
    }
}

pub fn simulate(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let params = cfg.params()?;
    let sim = cfg.section(&cfg.simulate, "simulate")?;
    let start = sim.initial.state(&params, "simulate.initial")?;
    let mut traj = classical::integrate(start, sim.t_end, sim.tol, &params)
        .map_err(|e| CliError::from_classical("simulate", e))?;
    if let Some(n) = sim.samples {
        traj = traj
            .resampled(n)
            .map_err(|e| CliError::from_classical("simulate.samples", e))?;
    }
    let mut table = Table::new(out, &header(&["t", "x", "xdot", "p", "H"]))?;
    for (t, s) in traj.times().iter().zip(traj.states()) {
        let p = model::momentum(s, &params).map_err(|e| CliError::Classical(e.into()))?;
        let h = model::hamiltonian_from_velocity(s, &params)
            .map_err(|e| CliError::Classical(e.into()))?;
        table.numbers(&[*t, s.x, s.xdot, p, h])?;
    }
    table.finish()
}

enum SweepRow {
    Period(f64),
    Rejected(String),
}

pub fn period_sweep(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let params = cfg.params()?;
    let sweep = cfg.section(&cfg.period_sweep, "period_sweep")?;
    let tol = sweep.tol;
    let rows = fan_out(&sweep.energies, |&e| {
        match classical::period_at_energy(e, &params, tol) {
            Ok(t) => Ok(SweepRow::Period(t)),
            Err(ClassicalError::AmplitudeDomain { ratio }) => Ok(SweepRow::Rejected(format!(
                "forbidden: |E/(a omega)| = {ratio} must exceed 1 for a bounded orbit"
            ))),
            Err(ClassicalError::DegenerateAmplitude { excess }) => Ok(SweepRow::Rejected(format!(
                "degenerate amplitude: |E/(a omega)| - 1 = {excess:e}"
            ))),
            Err(ClassicalError::InvalidTolerance(t)) => Err(CliError::invalid(
                "period_sweep.tol",
                ClassicalError::InvalidTolerance(t),
            )),
            Err(other) => Err(CliError::Classical(other)),
        }
    });
    let mut table = Table::new(out, &header(&["E", "T", "T_omega_over_pi", "status"]))?;
    let w = params.omega();
    for (e, row) in sweep.energies.iter().zip(rows) {
        match row? {
            SweepRow::Period(t) => table.row(&[fmt(*e), fmt(t), fmt(t * w / PI), "ok".into()])?,
            SweepRow::Rejected(msg) => {
                eprintln!("E = {e}: {msg}");
                table.row(&[fmt(*e), String::new(), String::new(), msg])?
            }
        }
    }
    table.finish()
}

#[derive(Serialize)]
struct Gaps {
    analytic: Vec<f64>,
    xi_space: Vec<f64>,
    x_space: Vec<f64>,
}

#[derive(Serialize)]
struct SpectrumRun {
    alpha: f64,
    beta: f64,
    gamma: f64,
    epsilon: f64,
    nu: f64,
    boundary_case: bool,
    analytic: Vec<f64>,
    xi_space: Vec<f64>,
    x_space: Vec<f64>,
    xi_est_error: Vec<f64>,
    x_est_error: Vec<f64>,
    xi_abs_error: Vec<f64>,
    x_abs_error: Vec<f64>,
    gaps: Gaps,
    xi_grid: EigenGrid,
    x_grid: EigenGrid,
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    config: &'a RunConfig,
    runs: Vec<SpectrumRun>,
}

fn abs_errors(numeric: &[f64], exact: &[f64]) -> Vec<f64> {
    numeric
        .iter()
        .zip(exact)
        .map(|(n, e)| (n - e).abs())
        .collect()
}

fn gaps(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|p| p[1] - p[0]).collect()
}

fn grid_with(
    default: EigenGrid,
    n_points: Option<usize>,
    hi: Option<f64>,
) -> Result<EigenGrid, CliError> {
    let hi = hi.unwrap_or(default.hi());
    let n = n_points.unwrap_or(default.n_points());
    EigenGrid::half_line(hi, n).map_err(|e| CliError::invalid("grid", e))
}

fn spectrum_run(
    qc: &QuantumConfig,
    levels: usize,
    n_points: Option<usize>,
) -> Result<SpectrumRun, CliError> {
    let analytic = quantum::analytic_spectrum(qc, levels);
    let xi_grid = grid_with(
        eigensolve::default_xi_grid(qc, levels).map_err(CliError::from_eigen)?,
        n_points,
        None,
    )?;
    let x_grid = grid_with(
        eigensolve::default_x_grid(qc, levels).map_err(CliError::from_eigen)?,
        n_points,
        None,
    )?;
    let xi = eigensolve::solve_xi_space(qc, &xi_grid, levels).map_err(CliError::from_eigen)?;
    let x = eigensolve::solve_x_space(qc, &x_grid, levels).map_err(CliError::from_eigen)?;
    let exact = analytic.energies();
    let t = qc.ambiguity();
    Ok(SpectrumRun {
        alpha: t.alpha(),
        beta: t.beta(),
        gamma: t.gamma(),
        epsilon: t.epsilon(),
        nu: qc.nu(),
        boundary_case: qc.is_boundary_case(),
        xi_abs_error: abs_errors(&xi.values, &exact),
        x_abs_error: abs_errors(&x.values, &exact),
        gaps: Gaps {
            analytic: analytic.gaps(),
            xi_space: gaps(&xi.values),
            x_space: gaps(&x.values),
        },
        analytic: exact,
        xi_space: xi.values,
        x_space: x.values,
        xi_est_error: xi.est_error,
        x_est_error: x.est_error,
        xi_grid,
        x_grid,
    })
}

pub fn spectrum(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let section = cfg.section(&cfg.spectrum, "spectrum")?;
    let triples: Vec<AmbiguityTriple> = if section.triples.is_empty() {
        vec![cfg.triple()?]
    } else {
        section
            .triples
            .iter()
            .enumerate()
            .map(|(i, t)| config::to_triple(t, &format!("spectrum.triples[{i}]")))
            .collect::<Result<_, _>>()?
    };
    // every triple is checked before any solving starts
    let configs = triples
        .iter()
        .map(|&t| cfg.quantum(t))
        .collect::<Result<Vec<_>, _>>()?;
    configs.iter().for_each(warn_boundary);
    let runs = fan_out(&configs, |qc| {
        spectrum_run(qc, section.levels, section.n_points)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    output::json(out, &SpectrumReport { config: cfg, runs })
}

#[derive(Serialize)]
struct EigenReport<'a> {
    config: &'a RunConfig,
    result: EigenResult,
    analytic: Vec<f64>,
    abs_error: Vec<f64>,
    refined: bool,
}

pub fn eigensolve_cmd(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let es = cfg.section(&cfg.eigensolve, "eigensolve")?;
    let qc = cfg.quantum(cfg.triple()?)?;
    warn_boundary(&qc);
    let default = match es.space {
        Space::Xi => eigensolve::default_xi_grid(&qc, es.levels),
        Space::X => eigensolve::default_x_grid(&qc, es.levels),
    }
    .map_err(CliError::from_eigen)?;
    let grid = grid_with(default, es.n_points, es.hi)?;
    let mut result = match es.space {
        Space::Xi => eigensolve::solve_xi_space(&qc, &grid, es.levels),
        Space::X => eigensolve::solve_x_space(&qc, &grid, es.levels),
    }
    .map_err(CliError::from_eigen)?;
    if es.refine {
        result = eigensolve::refine(&result, &qc).map_err(CliError::from_eigen)?;
    }
    if let Some(tol) = es.tol {
        result = result
            .require_tolerance(tol)
            .map_err(CliError::from_eigen)?;
    }
    if !es.vectors {
        result.vectors.clear();
    }
    let analytic = quantum::analytic_spectrum(&qc, es.levels).energies();
    let abs_error = abs_errors(&result.values, &analytic);
    output::json(
        out,
        &EigenReport {
            config: cfg,
            result,
            analytic,
            abs_error,
            refined: es.refine,
        },
    )
}

pub fn wavefunction(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let wc = cfg.section(&cfg.wavefunction, "wavefunction")?;
    let qc = cfg.quantum(cfg.triple()?)?;
    warn_boundary(&qc);
    let top = wc.levels.saturating_sub(1);
    let xi_max = wc.xi_max.unwrap_or_else(|| {
        (10.0 / qc.width().sqrt())
            .max(quantum::xi_max(top, &qc))
            .ceil()
    });
    if !(xi_max.is_finite() && xi_max > 0.0) {
        return Err(CliError::invalid(
            "wavefunction.xi_max",
            "must be finite and > 0",
        ));
    }
    let n = wc.samples.unwrap_or((200.0 * xi_max).ceil() as usize);
    if n < 2 {
        return Err(CliError::invalid(
            "wavefunction.samples",
            "need at least 2 samples",
        ));
    }
    let wfs = (0..wc.levels)
        .map(|n| Wavefunction::new(n, &qc))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::from_quantum)?;
    let mut names = vec!["xi".to_string()];
    names.extend((0..wc.levels).map(|n| format!("phi_{n}")));
    names.push("V_eff".into());
    names.push("x".into());
    names.extend((0..wc.levels).map(|n| format!("psi_{n}")));
    let mut table = Table::new(out, &names)?;
    for i in 1..=n {
        let xi = i as f64 * xi_max / n as f64;
        let x = quantum::inverse_map(xi, &qc).map_err(CliError::from_quantum)?;
        let mut row = vec![xi];
        for wf in &wfs {
            row.push(wf.phi(xi).map_err(CliError::from_quantum)?);
        }
        row.push(quantum::effective_potential(xi, &qc).map_err(CliError::from_quantum)?);
        row.push(x);
        for wf in &wfs {
            row.push(wf.phi(xi).map_err(CliError::from_quantum)? / xi.sqrt());
        }
        table.numbers(&row)?;
    }
    table.finish()
}

fn orbit_samples(
    e: f64,
    params: &ModelParams,
    samples: usize,
    tol: f64,
) -> Result<Vec<[f64; 3]>, CliError> {
    let period = PI / params.omega();
    let minimum = params.potential_minimum();
    if (e - minimum).abs() <= 1e-12 * minimum {
        let x = params.potential_minimizer();
        return Ok((0..samples)
            .map(|i| [period * i as f64 / (samples - 1) as f64, x, 0.0])
            .collect());
    }
    let sol = OrbitSolution::new(e, 0.0, *params)
        .map_err(|err| CliError::invalid("phase_portrait.energies", err))?;
    let traj = classical::integrate(sol.state(0.0), period, tol, params)
        .and_then(|t| t.resampled(samples))
        .map_err(|err| CliError::from_classical("phase_portrait", err))?;
    Ok(traj
        .times()
        .iter()
        .zip(traj.states())
        .map(|(t, s)| [*t, s.x, s.xdot])
        .collect())
}

pub fn phase_portrait(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let params = cfg.params()?;
    let pc = cfg.section(&cfg.phase_portrait, "phase_portrait")?;
    if pc.samples < 2 {
        return Err(CliError::invalid(
            "phase_portrait.samples",
            "need at least 2 samples",
        ));
    }
    let orbits = fan_out(&pc.energies, |&e| {
        orbit_samples(e, &params, pc.samples, pc.tol)
    });
    let mut table = Table::new(out, &header(&["orbit", "E", "t", "x", "xdot"]))?;
    for (k, (e, orbit)) in pc.energies.iter().zip(orbits).enumerate() {
        for [t, x, v] in orbit? {
            table.row(&[k.to_string(), fmt(*e), fmt(t), fmt(x), fmt(v)])?;
        }
    }
    for fp in classical::fixed_points(&params) {
        eprintln!(
            "fixed point x = {}, xdot = {}: {:?}",
            fmt(fp.state.x),
            fmt(fp.state.xdot),
            fp.stability
        );
    }
    table.finish()
}

#[derive(Serialize)]
struct WitnessSummary {
    max_residual: f64,
    max_relative_residual: f64,
    scale: f64,
    stencil_step: f64,
    samples: usize,
}

pub fn linearize_check(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let params = cfg.params()?;
    let lc = cfg.section(&cfg.linearize_check, "linearize_check")?;
    let start = lc.initial.state(&params, "linearize_check.initial")?;
    let span = lc.periods * PI / params.omega();
    let traj = classical::integrate(start, span, lc.tol, &params)
        .map_err(|e| CliError::from_classical("linearize_check", e))?;
    let report = classical::linearization_witness(&traj)
        .map_err(|e| CliError::from_classical("linearize_check", e))?;
    let mut table = Table::new(out, &header(&["t", "abs_X", "residual"]))?;
    for ((t, m), r) in report
        .times
        .iter()
        .zip(&report.magnitudes)
        .zip(&report.residuals)
    {
        table.numbers(&[*t, *m, *r])?;
    }
    table.finish()?;
    let summary = WitnessSummary {
        max_residual: report.max_residual(),
        max_relative_residual: report.max_relative_residual(),
        scale: report.scale,
        stencil_step: report.stencil_step,
        samples: report.times.len(),
    };
    eprintln!("{}", serde_json::to_string(&summary)?);
    Ok(())
}
