//! Acceptance suite: one test per criterion, each printing a
//! `criterion N: ...` line with the measured values.
//!
//! Criteria 2 (second clause), 3, and 4 assert idealized adiabatic claims
//! that the exact dynamics provably violates at these parameters; they are
//! implemented exactly as stated, so they fail with the measured numbers in
//! the panic message rather than being loosened to pass. The physics behind
//! each failure is spelled out in a comment at the test.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use resonator_core::dynamics::{compute_action, integrate, upward_crossings, IntegratorConfig};
use resonator_core::invariant::{drift_metrics, invariant_series_closed_form};
use resonator_core::model::{
    closed_form_energy, closed_form_invariant, eval_omega, validation_report, DriveSpec,
    InitialConditions, ResonatorParams, TimeWindow,
};
use resonator_core::optimize::{drift_objective, find_optimal_exponent};

fn fig1_params() -> ResonatorParams {
    ResonatorParams {
        omega_r: 0.5,
        q_factor: 5.0,
        epsilon: 0.1,
        omega_p: 1.0,
        beta: 1.0,
        alpha: 0.0,
        lambda_corr: 0.0,
        capacitance: 1.0,
    }
}

fn fig3_params() -> ResonatorParams {
    ResonatorParams {
        omega_r: 2.0,
        q_factor: 10.0,
        epsilon: 0.5,
        omega_p: 2.0,
        beta: 0.5,
        alpha: 0.0,
        lambda_corr: 0.0,
        capacitance: 1.0,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Deterministic pseudo-random stream (splitmix64).
struct Rng(u64);

impl Rng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi).
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }
}

#[test]
fn criterion_1_invariant_identity() {
    let start = Instant::now();
    let mut rng = Rng(0x5eed_0001);
    let mut sets = 0;
    let mut worst = 0.0f64;
    while sets < 100 {
        let omega_r = rng.uniform(0.3, 2.0);
        let params = ResonatorParams {
            omega_r,
            q_factor: rng.uniform(5.0, 20.0),
            epsilon: rng.uniform(0.0, 0.3) * omega_r * omega_r,
            omega_p: rng.uniform(0.5, 5.0),
            beta: rng.uniform(0.0, 1.0),
            alpha: 0.0,
            lambda_corr: 0.0,
            capacitance: rng.uniform(0.5, 2.0),
        };
        let xi0 = rng.uniform(0.0, 0.1) * omega_r;
        let drive = match sets % 3 {
            0 => DriveSpec::Zero,
            1 => DriveSpec::Sinusoid {
                xi0,
                omega_d: rng.uniform(0.0, 5.0),
                theta: rng.uniform(0.0, std::f64::consts::TAU),
            },
            _ => DriveSpec::PowerOfOmega {
                xi0,
                exponent: rng.uniform(0.5, 2.5),
            },
        };
        let horizon = TimeWindow::new(0.0, 3.0).unwrap();
        let report = validation_report(&params, &drive, horizon).unwrap();
        if report.analytic_lower_bound <= 0.0 {
            continue;
        }
        sets += 1;
        let e0 = rng.uniform(0.5, 2.0);
        let init = InitialConditions::Energy { e0 };
        for _ in 0..4 {
            let t = rng.uniform(0.0, 3.0);
            let e = closed_form_energy(&params, &drive, &init, t).unwrap();
            let i = closed_form_invariant(&params, &drive, &init, t).unwrap();
            let w = eval_omega(&params, t).unwrap();
            worst = worst.max(rel(i * w, e));
        }
        // anchor with a theta = 0 sinusoid
        let anchored = DriveSpec::Sinusoid {
            xi0,
            omega_d: 1.0,
            theta: 0.0,
        };
        let i0 = closed_form_invariant(&params, &anchored, &init, 0.0).unwrap();
        let w0 = eval_omega(&params, 0.0).unwrap();
        worst = worst.max(rel(i0, e0 / w0));
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 1: PASS - identity I(t)·ω(t) = E(t) over 100 parameter sets, \
         worst relative deviation {worst:.3e} (tolerance 1e-12), {elapsed:?}"
    );
    assert!(worst < 1e-12, "worst identity deviation {worst}");
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
}

#[test]
fn criterion_2_damped_decay_oracle() {
    // First clause: at the phase points the module can actually measure
    // (cycle boundaries and midpoints, where phi = 0), the sampled energy
    // follows E(0) e^{-gamma t} exactly; verified at 1e-4 with margin.
    //
    // Second clause: J omega / (2 pi e^{gamma t}) cannot match that decay law
    // to 1e-4 at Q = 5. The action-energy relation is the frozen-orbit
    // (adiabatic) form; for the exact damped solution the residual is
    // (omega_r / omega_tilde)^3 - 1 = 1.519e-2 with
    // omega_tilde^2 = omega_r^2 - gamma^2/4. The assertion below states the
    // criterion anyway and fails with the measured residual.
    let start = Instant::now();
    let params = ResonatorParams {
        epsilon: 0.0,
        ..fig1_params()
    };
    let gamma = params.gamma();
    let cfg = IntegratorConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        max_step: None,
        sample_dt: 0.002,
        damping_enabled: true,
    };
    let init = InitialConditions::Energy { e0: 1.0 };
    let horizon = TimeWindow::new(0.0, 40.0).unwrap();
    let traj = integrate(&params, &DriveSpec::Zero, &init, &cfg, horizon).unwrap();
    let xs = upward_crossings(&traj);
    assert!(xs.len() >= 4, "need at least three cycles in [0, 40]");

    let mut worst_energy = 0.0f64;
    for w in xs.windows(2) {
        for t in [w[0], 0.5 * (w[0] + w[1])] {
            let e = traj.energy_at(t);
            worst_energy = worst_energy.max(rel(e, (-gamma * t).exp()));
        }
    }

    let mut worst_action = 0.0f64;
    for k in 0..xs.len() - 1 {
        let j = compute_action(&traj, k).unwrap();
        let t_c = 0.5 * (xs[k] + xs[k + 1]);
        let w = eval_omega(&params, t_c).unwrap();
        let e_from_j = j * w / (2.0 * std::f64::consts::PI * (gamma * t_c).exp());
        worst_action = worst_action.max(rel(e_from_j, (-gamma * t_c).exp()));
    }

    let elapsed = start.elapsed();
    let verdict = if worst_energy < 1e-4 && worst_action < 1e-4 {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "criterion 2: {verdict} - E_num vs decay law {worst_energy:.3e}, \
         J-route vs decay law {worst_action:.3e} (tolerance 1e-4 each), {elapsed:?}"
    );
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    assert!(worst_energy < 1e-4, "E_num vs decay law: {worst_energy}");
    assert!(
        worst_action < 1e-4,
        "J·ω/(2π e^(γt)) vs decay law: residual {worst_action} - the frozen-orbit \
         action-energy relation carries an irreducible (ω/ω̃)³-1 ≈ 1.52e-2 damping \
         correction at Q = 5, so the 1e-4 tolerance is not attainable"
    );
}

#[test]
fn criterion_3_adiabatic_convergence() {
    // Scaling (epsilon, omega_p, omega_d) by {1, 1/2, 1/4} from the base
    // sweeps the drive through the resonator band: at scale 1/2,
    // omega_d = 0.5 lies inside omega(t) ∈ [0.433, 0.548], a driven
    // resonance the closed form cannot represent, so the middle rung's
    // discrepancy is the largest and the ladder is not monotone. Stated
    // as written; fails with the measured table.
    let start = Instant::now();
    let params = fig1_params();
    let init = InitialConditions::Energy { e0: 1.0 };
    let cfg = IntegratorConfig {
        rel_tol: 1e-9,
        abs_tol: 1e-11,
        max_step: None,
        sample_dt: 0.002,
        damping_enabled: true,
    };
    let horizon = TimeWindow::new(0.0, 40.0).unwrap();
    let base_drive = DriveSpec::Sinusoid {
        xi0: 0.2,
        omega_d: 1.0,
        theta: 0.0,
    };
    let rungs = resonator_core::experiments::run_convergence_study(
        &params,
        &base_drive,
        &init,
        &cfg,
        horizon,
        3,
    )
    .unwrap();
    let d: Vec<f64> = rungs.iter().map(|r| r.max_rel_discrepancy).collect();
    let elapsed = start.elapsed();
    let monotone = d[0] > d[1] && d[1] > d[2];
    let verdict = if monotone { "PASS" } else { "FAIL" };
    println!(
        "criterion 3: {verdict} - max cycle-energy discrepancy per rung \
         (scale 1, 1/2, 1/4) = [{:.4}, {:.4}, {:.4}], {elapsed:?}",
        d[0], d[1], d[2]
    );
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    assert!(
        monotone,
        "discrepancies {d:?} are not strictly decreasing: the scale-1/2 rung places \
         the drive frequency inside the instantaneous resonator band (driven \
         resonance), so its discrepancy dominates the ladder"
    );
}

#[test]
fn criterion_4_fig1_monotonicity() {
    // Over [0, 10] the e^{-gamma t} decay transient (a factor e^-1 across
    // the window) dominates rms_dev and the orderings invert; the ripple
    // the sweep is meant to expose orders both legs correctly on windows
    // short against the decay time (e.g. [0, 0.5], the shipped fig1 preset
    // window). Stated as written over [0, 10]; fails with the measured rows.
    let start = Instant::now();
    let init = InitialConditions::Energy { e0: 1.0 };
    let horizon = TimeWindow::new(0.0, 10.0).unwrap();
    let window = horizon;
    let dt = 0.00025;

    let mut pump_leg = Vec::new();
    for omega_p in [1.0, 5.0, 10.0] {
        let params = ResonatorParams {
            omega_p,
            ..fig1_params()
        };
        let drive = DriveSpec::Sinusoid {
            xi0: 0.2,
            omega_d: 1.0,
            theta: 0.0,
        };
        let series = invariant_series_closed_form(&params, &drive, &init, horizon, dt).unwrap();
        pump_leg.push(drift_metrics(&series, window).unwrap().rms_dev);
    }
    let mut drive_leg = Vec::new();
    for omega_d in [1.0, 5.0, 10.0] {
        let drive = DriveSpec::Sinusoid {
            xi0: 0.2,
            omega_d,
            theta: 0.0,
        };
        let series =
            invariant_series_closed_form(&fig1_params(), &drive, &init, horizon, dt).unwrap();
        drive_leg.push(drift_metrics(&series, window).unwrap().rms_dev);
    }
    let elapsed = start.elapsed();
    let pump_ok = pump_leg[0] < pump_leg[1] && pump_leg[1] < pump_leg[2];
    let drive_ok = drive_leg[0] < drive_leg[1] && drive_leg[1] < drive_leg[2];
    let verdict = if pump_ok && drive_ok { "PASS" } else { "FAIL" };
    println!(
        "criterion 4: {verdict} - rms_dev over [0, 10]: omega_p leg {pump_leg:?} \
         (increasing: {pump_ok}), omega_d leg {drive_leg:?} (increasing: {drive_ok}), {elapsed:?}"
    );
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    assert!(
        pump_ok && drive_ok,
        "rms_dev over [0, 10] is not strictly increasing (omega_p leg {pump_leg:?}, \
         omega_d leg {drive_leg:?}): the decay transient dominates this window; the \
         orderings hold on early windows such as [0, 0.5]"
    );
}

#[test]
fn criterion_5_fig2_amplitude_scaling() {
    let start = Instant::now();
    let init = InitialConditions::Energy { e0: 1.0 };
    let horizon = TimeWindow::new(0.0, 10.0).unwrap();
    let mut rows = Vec::new();
    for (omega_p, omega_d) in [(10.0, 10.0), (100.0, 10.0), (10.0, 100.0)] {
        let params = ResonatorParams {
            omega_p,
            ..fig1_params()
        };
        let mut row = Vec::new();
        for xi0 in [0.2, 0.5, 1.0] {
            let drive = DriveSpec::Sinusoid {
                xi0,
                omega_d,
                theta: 0.0,
            };
            let series =
                invariant_series_closed_form(&params, &drive, &init, horizon, 0.00025).unwrap();
            row.push(drift_metrics(&series, horizon).unwrap().rms_dev);
        }
        assert!(
            row[0] < row[1] && row[1] < row[2],
            "(omega_p, omega_d) = ({omega_p}, {omega_d}): rms_dev {row:?} not increasing in xi0"
        );
        rows.push(((omega_p, omega_d), row));
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 5: PASS - rms_dev strictly increasing in xi0 for all three \
         (omega_p, omega_d) combinations: {rows:?}, {elapsed:?}"
    );
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
}

#[test]
fn criterion_6_optimal_exponent_recovery() {
    let start = Instant::now();
    let params = fig3_params();
    let init = InitialConditions::Energy { e0: 2.0 };
    // [20 Q/omega_r, 24 Q/omega_r]
    let window = TimeWindow::new(100.0, 120.0).unwrap();
    let pp_optimal = drift_objective(&params, &init, 0.4, 1.5, window).unwrap();
    let pp_off = drift_objective(&params, &init, 0.4, 2.5, window).unwrap();
    let result = find_optimal_exponent(&params, &init, 0.4, (0.5, 3.0), 1e-3, window).unwrap();
    let elapsed = start.elapsed();
    println!(
        "criterion 6: PASS - pp(p=1.5) = {pp_optimal:.3e} (< 1e-6), pp(p=2.5) = {pp_off:.3e} \
         (> 1e-2), p* = {:.4} from [0.5, 3.0] ({} evaluations), {elapsed:?}",
        result.p_star, result.evaluations
    );
    assert!(pp_optimal < 1e-6, "pp at p = 1.5: {pp_optimal}");
    assert!(pp_off > 1e-2, "pp at p = 2.5: {pp_off}");
    assert!((result.p_star - 1.5).abs() < 0.05, "p* = {}", result.p_star);
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
}

#[test]
fn criterion_7_sho_action() {
    let start = Instant::now();
    let params = ResonatorParams {
        omega_r: 1.0,
        q_factor: 1.0,
        epsilon: 0.0,
        omega_p: 1.0,
        beta: 0.0,
        alpha: 0.0,
        lambda_corr: 0.0,
        capacitance: 1.0,
    };
    let cfg = IntegratorConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-12,
        max_step: None,
        sample_dt: 2.0 * std::f64::consts::PI / 2048.0,
        damping_enabled: false,
    };
    let init = InitialConditions::State {
        phi0: 1.0,
        phidot0: 0.0,
    };
    let horizon = TimeWindow::new(0.0, 30.0).unwrap();
    let traj = integrate(&params, &DriveSpec::Zero, &init, &cfg, horizon).unwrap();
    let xs = upward_crossings(&traj);
    let cycles = xs.len() - 1;
    assert!(cycles >= 3);
    let mut js = Vec::new();
    for k in 0..cycles {
        js.push(compute_action(&traj, k).unwrap());
    }
    let pi = std::f64::consts::PI;
    let worst_pi = js.iter().map(|j| (j - pi).abs()).fold(0.0f64, f64::max);
    let spread = js
        .iter()
        .map(|j| ((j - js[0]) / js[0]).abs())
        .fold(0.0f64, f64::max);
    let elapsed = start.elapsed();
    println!(
        "criterion 7: PASS - J per cycle = {js:?}; |J - pi| worst {worst_pi:.2e} \
         (tol 1e-4), cross-cycle spread {spread:.2e} (tol 1e-6), {elapsed:?}"
    );
    assert!(worst_pi < 1e-4, "J deviates from pi by {worst_pi}");
    assert!(spread < 1e-6, "cycle spread {spread}");
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
}

#[test]
fn criterion_8_cli_contract() {
    let start = Instant::now();
    let exe = env!("CARGO_BIN_EXE_resonator");
    let fixture =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/invalid_params.toml");

    let out = Command::new(exe)
        .args(["validate", "--config", fixture.to_str().unwrap(), "--quiet"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "validate must exit 2 on the invalid regime"
    );
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let bound = report["analytic_lower_bound"].as_f64().unwrap();
    assert!(
        (bound - (-0.75)).abs() < 1e-9,
        "reported min omega^2 bound {bound} vs -0.75"
    );

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = Command::new(exe)
            .args([
                "simulate",
                "--preset",
                "fig1",
                "--quiet",
                "--out",
                dir.path().to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = fs::read(dir_a.path().join("trajectory.csv")).unwrap();
    let b = fs::read(dir_b.path().join("trajectory.csv")).unwrap();
    assert_eq!(a, b, "repeated simulate runs must be byte-identical");

    let elapsed = start.elapsed();
    println!(
        "criterion 8: PASS - validate exit 2 with bound {bound}; repeated simulate \
         byte-identical ({} bytes), {elapsed:?}",
        a.len()
    );
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
}
