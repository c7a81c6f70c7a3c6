//! TOML run configurations and preset resolution.
//!
//! Field names mirror the model symbols transliterated to ASCII (omega_r,
//! omega_p, epsilon, beta, lambda, xi0, omega_d, theta, delta). Unknown keys
//! are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use resonator_core::dynamics::IntegratorConfig;
use resonator_core::experiments::SweepAxis;
use resonator_core::model::{DriveSpec, InitialConditions, ResonatorParams, TimeWindow};

use crate::Failure;

const PRESET_FIG1: &str = include_str!("../../../presets/fig1.toml");
const PRESET_FIG2: &str = include_str!("../../../presets/fig2.toml");
const PRESET_FIG3: &str = include_str!("../../../presets/fig3.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    horizon: [f64; 2],
    window: Option<[f64; 2]>,
    resonator: ResonatorSection,
    drive: DriveSection,
    init: InitSection,
    integrator: Option<IntegratorSection>,
    sweep: Option<SweepSection>,
    optimize: Option<OptimizeSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResonatorSection {
    omega_r: f64,
    q_factor: f64,
    epsilon: f64,
    omega_p: f64,
    beta: f64,
    alpha: f64,
    lambda: f64,
    capacitance: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum DriveSection {
    Zero,
    Sinusoid {
        xi0: f64,
        omega_d: f64,
        #[serde(default)]
        theta: f64,
    },
    PowerOfOmega {
        xi0: f64,
        exponent: f64,
    },
    Tabulated {
        samples: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum InitSection {
    Energy { e0: f64 },
    State { phi0: f64, phidot0: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorSection {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_step: Option<f64>,
    sample_dt: Option<f64>,
    damping_enabled: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: SweepAxis,
    values: Vec<f64>,
    #[serde(default)]
    numerical: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizeSection {
    search: Option<[f64; 2]>,
    tol: Option<f64>,
    window: Option<[f64; 2]>,
    xi0: Option<f64>,
}

/// Sweep settings carried by a resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedSweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub numerical: bool,
}

/// Optimizer settings carried by a resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedOptimize {
    pub xi0: f64,
    pub search: (f64, f64),
    pub tol: f64,
    pub window: (f64, f64),
}

/// A fully resolved run configuration; serialized verbatim into provenance
/// blocks so every output can be replayed.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub params: ResonatorParams,
    pub drive: DriveSpec,
    pub init: InitialConditions,
    pub integrator: IntegratorConfig,
    pub horizon: (f64, f64),
    pub window: (f64, f64),
    pub sweep: Option<ResolvedSweep>,
    pub optimize: Option<ResolvedOptimize>,
}

/// Command-line overrides applied on top of the parsed file.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub horizon_end: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub search: Option<(f64, f64)>,
    pub tol: Option<f64>,
}

impl ResolvedConfig {
    pub fn horizon_window(&self) -> TimeWindow {
        TimeWindow {
            start: self.horizon.0,
            end: self.horizon.1,
        }
    }

    pub fn metrics_window(&self) -> TimeWindow {
        TimeWindow {
            start: self.window.0,
            end: self.window.1,
        }
    }
}

/// Loads a configuration from an explicit path or a named preset. Preset
/// names resolve to `<presets_dir>/<name>.toml` when that file exists and
/// fall back to the copies built into the binary.
pub fn load(
    config: Option<&Path>,
    preset: Option<&str>,
    presets_dir: Option<&Path>,
    overrides: &Overrides,
) -> Result<ResolvedConfig, Failure> {
    let text = match (config, preset) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?,
        (None, Some(name)) => preset_text(name, presets_dir)?,
        (None, None) => return Err(Failure::invalid("either --config or --preset is required")),
        (Some(_), Some(_)) => {
            return Err(Failure::invalid(
                "--config and --preset are mutually exclusive",
            ))
        }
    };
    resolve(&text, overrides)
}

fn preset_text(name: &str, presets_dir: Option<&Path>) -> Result<String, Failure> {
    let dir = presets_dir
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("presets"));
    let candidate = dir.join(format!("{name}.toml"));
    if candidate.is_file() {
        return std::fs::read_to_string(&candidate).map_err(|e| {
            Failure::invalid(format!("cannot read preset {}: {e}", candidate.display()))
        });
    }
    match name {
        "fig1" => Ok(PRESET_FIG1.to_string()),
        "fig2" => Ok(PRESET_FIG2.to_string()),
        "fig3" => Ok(PRESET_FIG3.to_string()),
        other => Err(Failure::invalid(format!(
            "unknown preset `{other}` (expected fig1, fig2, fig3, or a file under {})",
            dir.display()
        ))),
    }
}

pub fn resolve(text: &str, overrides: &Overrides) -> Result<ResolvedConfig, Failure> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Failure::invalid(format!("config error: {e}")))?;

    let params = ResonatorParams {
        omega_r: raw.resonator.omega_r,
        q_factor: raw.resonator.q_factor,
        epsilon: raw.resonator.epsilon,
        omega_p: raw.resonator.omega_p,
        beta: raw.resonator.beta,
        alpha: raw.resonator.alpha,
        lambda_corr: raw.resonator.lambda,
        capacitance: raw.resonator.capacitance,
    };
    params.validate().map_err(Failure::from)?;

    let drive = match raw.drive {
        DriveSection::Zero => DriveSpec::Zero,
        DriveSection::Sinusoid {
            xi0,
            omega_d,
            theta,
        } => DriveSpec::Sinusoid {
            xi0,
            omega_d,
            theta,
        },
        DriveSection::PowerOfOmega { xi0, exponent } => DriveSpec::PowerOfOmega { xi0, exponent },
        DriveSection::Tabulated { samples } => DriveSpec::Tabulated {
            samples: samples.iter().map(|[t, x]| (*t, *x)).collect(),
        },
    };
    drive.validate().map_err(Failure::from)?;

    let init = match raw.init {
        InitSection::Energy { e0 } => InitialConditions::Energy { e0 },
        InitSection::State { phi0, phidot0 } => InitialConditions::State { phi0, phidot0 },
    };
    init.validate().map_err(Failure::from)?;

    let horizon_end = overrides.horizon_end.unwrap_or(raw.horizon[1]);
    let horizon_start = if overrides.horizon_end.is_some() {
        0.0
    } else {
        raw.horizon[0]
    };
    if horizon_start != 0.0 {
        return Err(Failure::invalid(format!(
            "horizon must start at t = 0 (the closed forms are anchored to E(0)), got {horizon_start}"
        )));
    }
    let horizon = TimeWindow::new(horizon_start, horizon_end).map_err(Failure::from)?;

    let window = match (overrides.window, raw.window) {
        (Some((a, b)), _) => TimeWindow::new(a, b).map_err(Failure::from)?,
        (None, Some([a, b])) => TimeWindow::new(a, b).map_err(Failure::from)?,
        (None, None) => horizon,
    };

    let integrator = resolve_integrator(raw.integrator.as_ref(), &params, &drive)?;

    let sweep = raw.sweep.map(|s| ResolvedSweep {
        axis: s.axis,
        values: s.values,
        numerical: s.numerical,
    });

    let optimize = match raw.optimize {
        Some(o) => {
            let xi0 = match (o.xi0, &drive) {
                (Some(x), _) => x,
                (None, DriveSpec::PowerOfOmega { xi0, .. }) => *xi0,
                (None, _) => {
                    return Err(Failure::invalid(
                        "[optimize] needs xi0 (or a power_of_omega drive to take it from)",
                    ))
                }
            };
            let search = overrides
                .search
                .or(o.search.map(|[a, b]| (a, b)))
                .unwrap_or((0.5, 3.0));
            let tol = overrides.tol.or(o.tol).unwrap_or(1e-3);
            let window = match o.window {
                Some([a, b]) => (a, b),
                None => default_optimizer_window(&params),
            };
            Some(ResolvedOptimize {
                xi0,
                search,
                tol,
                window,
            })
        }
        None => match (&drive, overrides) {
            // `optimize` can run on a config without the section if the
            // drive itself supplies the amplitude
            (DriveSpec::PowerOfOmega { xi0, .. }, ov) => Some(ResolvedOptimize {
                xi0: *xi0,
                search: ov.search.unwrap_or((0.5, 3.0)),
                tol: ov.tol.unwrap_or(1e-3),
                window: default_optimizer_window(&params),
            }),
            _ => None,
        },
    };

    Ok(ResolvedConfig {
        params,
        drive,
        init,
        integrator,
        horizon: (horizon.start, horizon.end),
        window: (window.start, window.end),
        sweep,
        optimize,
    })
}

/// [20 Q/ω_r, 24 Q/ω_r]: late enough that the decaying invariant term is
/// below ~2e-9 of its initial size.
fn default_optimizer_window(params: &ResonatorParams) -> (f64, f64) {
    let scale = params.q_factor / params.omega_r;
    (20.0 * scale, 24.0 * scale)
}

fn resolve_integrator(
    section: Option<&IntegratorSection>,
    params: &ResonatorParams,
    drive: &DriveSpec,
) -> Result<IntegratorConfig, Failure> {
    let mut fastest = params.omega_r.max(params.omega_p);
    if let DriveSpec::Sinusoid { omega_d, .. } = drive {
        fastest = fastest.max(*omega_d);
    }
    let default_dt = 2.0 * std::f64::consts::PI / fastest / 200.0;
    let cfg = match section {
        Some(s) => IntegratorConfig {
            rel_tol: s.rel_tol.unwrap_or(1e-9),
            abs_tol: s.abs_tol.unwrap_or(1e-9),
            max_step: s.max_step,
            sample_dt: s.sample_dt.unwrap_or(default_dt),
            damping_enabled: s.damping_enabled.unwrap_or(true),
        },
        None => IntegratorConfig::with_sample_dt(default_dt),
    };
    cfg.validate().map_err(Failure::from)?;
    Ok(cfg)
}
