//! The four workflows behind the subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use resonator_core::dynamics::{energy_a1, integrate, OscillatorState};
use resonator_core::error::Error as CoreError;
use resonator_core::experiments::{run_sweep, SweepResult, SweepSpec};
use resonator_core::invariant::{
    drift_metrics, invariant_series_numerical, DriftMetrics, InvariantSeries, SeriesSource,
};
use resonator_core::model::{
    closed_form_energy, closed_form_invariant, eval_omega, validation_report, InitialConditions,
    TimeWindow, ValidationReport,
};
use resonator_core::optimize::{find_optimal_exponent, OptimizationResult};

use crate::config::ResolvedConfig;
use crate::output::{provenance, write_csv, write_json, Field, Provenance};
use crate::Failure;

const TRAJECTORY_CSV_HEADER: &str =
    "t,phi,phidot,q,energy_num,omega,energy_cf,invariant_cf,invariant_num";

#[derive(Serialize)]
struct SimulateSummary {
    closed_form: DriftMetrics,
    numerical: Option<DriftMetrics>,
    provenance: Provenance,
}

#[derive(Serialize)]
struct MetricsEntry {
    value: f64,
    #[serde(flatten)]
    metrics: DriftMetrics,
    numerical: Option<DriftMetrics>,
}

#[derive(Serialize)]
struct SweepSummary {
    axis: &'static str,
    entries: Vec<MetricsEntry>,
    provenance: Provenance,
}

#[derive(Serialize)]
struct OptimizeSummary {
    #[serde(flatten)]
    result: OptimizationResult,
    window: (f64, f64),
    xi0: f64,
    provenance: Provenance,
}

#[derive(Serialize)]
struct ValidateSummary {
    #[serde(flatten)]
    report: ValidationReport,
    provenance: Provenance,
}

/// Pre-run positivity gate with a message carrying both the analytic bound
/// and the sampled minimum.
fn gate(cfg: &ResolvedConfig, horizon: TimeWindow) -> Result<ValidationReport, Failure> {
    let report = validation_report(&cfg.params, &cfg.drive, horizon).map_err(Failure::from)?;
    if !report.valid {
        return Err(Failure::invalid(format!(
            "invalid parameters: omega^2(t) must stay positive over [{}, {}]: \
             analytic lower bound (independent cosine extrema) = {}, \
             minimum sampled omega^2 = {} at t = {}",
            horizon.start,
            horizon.end,
            report.analytic_lower_bound,
            report.min_omega_sq_sampled,
            report.min_omega_sq_t,
        )));
    }
    Ok(report)
}

fn resolved_initial_energy(cfg: &ResolvedConfig) -> Result<InitialConditions, Failure> {
    match cfg.init {
        InitialConditions::Energy { .. } => Ok(cfg.init),
        InitialConditions::State { phi0, phidot0 } => {
            let state = OscillatorState {
                t: 0.0,
                phi: phi0,
                phidot: phidot0,
            };
            let e0 = energy_a1(&cfg.params, &cfg.drive, &state).map_err(Failure::from)?;
            Ok(InitialConditions::Energy { e0 })
        }
    }
}

pub fn cmd_simulate(cfg: &ResolvedConfig, out_dir: &Path, quiet: bool) -> Result<i32, Failure> {
    let horizon = cfg.horizon_window();
    gate(cfg, horizon)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::invalid(format!("cannot create {}: {e}", out_dir.display())))?;

    let traj = integrate(&cfg.params, &cfg.drive, &cfg.init, &cfg.integrator, horizon)
        .map_err(Failure::from)?;
    let init_energy = resolved_initial_energy(cfg)?;

    // numerical invariant exists only when the horizon holds >= 3 cycles
    let numerical = match invariant_series_numerical(&traj) {
        Ok(series) => Some(series),
        Err(CoreError::InsufficientCycles { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut sparse: BTreeMap<usize, f64> = BTreeMap::new();
    if let Some(series) = &numerical {
        for (t_c, value) in &series.samples {
            let idx = ((t_c - horizon.start) / cfg.integrator.sample_dt).round() as usize;
            sparse.insert(idx.min(traj.samples.len() - 1), *value);
        }
    }

    let mut closed_samples = Vec::with_capacity(traj.samples.len());
    let mut rows: Vec<Vec<Field>> = Vec::with_capacity(traj.samples.len());
    for (i, s) in traj.samples.iter().enumerate() {
        let omega = eval_omega(&cfg.params, s.t).map_err(Failure::from)?;
        let e_cf = closed_form_energy(&cfg.params, &cfg.drive, &init_energy, s.t)
            .map_err(Failure::from)?;
        let i_cf = closed_form_invariant(&cfg.params, &cfg.drive, &init_energy, s.t)
            .map_err(Failure::from)?;
        closed_samples.push((s.t, i_cf));
        rows.push(vec![
            Field::Num(s.t),
            Field::Num(s.phi),
            Field::Num(s.phidot),
            Field::Num(s.q),
            Field::Num(s.energy),
            Field::Num(omega),
            Field::Num(e_cf),
            Field::Num(i_cf),
            sparse.get(&i).map_or(Field::Empty, |v| Field::Num(*v)),
        ]);
    }

    let csv_path = out_dir.join("trajectory.csv");
    write_csv(&csv_path, TRAJECTORY_CSV_HEADER, rows.into_iter())?;

    let window = cfg.metrics_window();
    let closed_series = InvariantSeries {
        samples: closed_samples,
        source: SeriesSource::ClosedForm,
    };
    let closed_metrics = drift_metrics(&closed_series, window).map_err(Failure::from)?;
    let numerical_metrics = match &numerical {
        Some(series) => match drift_metrics(series, window) {
            Ok(m) => Some(m),
            Err(CoreError::EmptyWindow { .. }) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let summary = SimulateSummary {
        closed_form: closed_metrics,
        numerical: numerical_metrics,
        provenance: provenance(cfg)?,
    };
    let json_path = out_dir.join("summary.json");
    write_json(&json_path, &summary)?;

    if !quiet {
        println!(
            "simulate: {} samples -> {} and {}",
            traj.samples.len(),
            csv_path.display(),
            json_path.display()
        );
    }
    Ok(0)
}

pub fn cmd_sweep(cfg: &ResolvedConfig, out_dir: &Path, quiet: bool) -> Result<i32, Failure> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::invalid("config has no [sweep] section"))?;
    if sweep.values.is_empty() {
        return Err(Failure::invalid("sweep values must be non-empty"));
    }
    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::invalid(format!("cannot create {}: {e}", out_dir.display())))?;

    let spec = SweepSpec {
        params: cfg.params,
        drive: cfg.drive.clone(),
        init: cfg.init,
        axis: sweep.axis,
        values: sweep.values.clone(),
        horizon: cfg.horizon_window(),
        sample_dt: cfg.integrator.sample_dt,
        window: cfg.metrics_window(),
        include_numerical: sweep.numerical,
        integrator: Some(cfg.integrator),
    };
    let result: SweepResult = run_sweep(&spec).map_err(Failure::from)?;

    let mut entries = Vec::with_capacity(result.entries.len());
    for entry in &result.entries {
        let name = format!("{}_{}.csv", result.axis.name(), entry.value);
        let rows = entry
            .series
            .samples
            .iter()
            .map(|(t, v)| vec![Field::Num(*t), Field::Num(*v)]);
        write_csv(&out_dir.join(&name), "t,invariant_cf", rows)?;
        if let Some((num_series, _)) = &entry.numerical {
            let name = format!("{}_{}_numerical.csv", result.axis.name(), entry.value);
            let rows = num_series
                .samples
                .iter()
                .map(|(t, v)| vec![Field::Num(*t), Field::Num(*v)]);
            write_csv(&out_dir.join(&name), "t,invariant_num", rows)?;
        }
        entries.push(MetricsEntry {
            value: entry.value,
            metrics: entry.metrics,
            numerical: entry.numerical.as_ref().map(|(_, m)| *m),
        });
    }
    let summary = SweepSummary {
        axis: result.axis.name(),
        entries,
        provenance: provenance(cfg)?,
    };
    let json_path = out_dir.join("metrics.json");
    write_json(&json_path, &summary)?;

    if !quiet {
        println!(
            "sweep over {}: {} runs -> {} and per-value CSVs",
            result.axis.name(),
            result.entries.len(),
            json_path.display()
        );
    }
    Ok(0)
}

pub fn cmd_optimize(cfg: &ResolvedConfig, out_dir: &Path, quiet: bool) -> Result<i32, Failure> {
    let opt = cfg.optimize.as_ref().ok_or_else(|| {
        Failure::invalid("config has no [optimize] section and no power_of_omega drive")
    })?;
    let init = match cfg.init {
        InitialConditions::Energy { .. } => cfg.init,
        InitialConditions::State { .. } => resolved_initial_energy(cfg)?,
    };
    let window = TimeWindow::new(opt.window.0, opt.window.1).map_err(Failure::from)?;
    let result =
        match find_optimal_exponent(&cfg.params, &init, opt.xi0, opt.search, opt.tol, window) {
            Ok(r) => r,
            Err(CoreError::FlatObjective) => {
                return Err(Failure::invalid(
                    "flat objective: the drift does not vary over the search interval \
                 (drive amplitude xi0 = 0?)",
                ))
            }
            Err(e) => return Err(e.into()),
        };

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::invalid(format!("cannot create {}: {e}", out_dir.display())))?;
    let summary = OptimizeSummary {
        window: opt.window,
        xi0: opt.xi0,
        provenance: provenance(cfg)?,
        result: result.clone(),
    };
    let json_path = out_dir.join("optimization.json");
    write_json(&json_path, &summary)?;

    if !quiet {
        println!(
            "optimize: p_star = {:.6} (objective {:.3e}, {} evaluations) -> {}",
            result.p_star,
            result.objective_at_p_star,
            result.evaluations,
            json_path.display()
        );
    }
    Ok(0)
}

pub fn cmd_validate(
    cfg: &ResolvedConfig,
    out_dir: Option<&Path>,
    quiet: bool,
) -> Result<i32, Failure> {
    let report =
        validation_report(&cfg.params, &cfg.drive, cfg.horizon_window()).map_err(Failure::from)?;
    let summary = ValidateSummary {
        report,
        provenance: provenance(cfg)?,
    };
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| Failure::invalid(format!("serialization error: {e}")))?;
    println!("{text}");
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::invalid(format!("cannot create {}: {e}", dir.display())))?;
        write_json(&dir.join("validation.json"), &summary)?;
    }
    if !quiet {
        if report.valid {
            eprintln!(
                "validation: pass (min sampled omega^2 = {} at t = {})",
                report.min_omega_sq_sampled, report.min_omega_sq_t
            );
        } else {
            eprintln!(
                "validation: FAIL (analytic lower bound = {}, min sampled omega^2 = {} at t = {})",
                report.analytic_lower_bound, report.min_omega_sq_sampled, report.min_omega_sq_t
            );
        }
    }
    Ok(if report.valid { 0 } else { 2 })
}
