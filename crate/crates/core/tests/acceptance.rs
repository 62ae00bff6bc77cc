//! Acceptance gate: one `criterion N` pass/fail line per criterion, with the
//! measured numbers. Run with `cargo test --test acceptance -- --nocapture`
//! to see every line even when the whole gate passes.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use pitchctl::analysis::{
    controllability_matrix, modal_analysis, numerical_rank, numerical_rank_kind,
    observability_matrix, MatrixKind, ModeLabel,
};
use pitchctl::io::{load_scenario, Scenario};
use pitchctl::report;
use pitchctl::riccati::{care_residual, solve_care, LqrSynthesis, LqrWeights};
use pitchctl::sim::{extract_metrics, simulate, Controller, ResponseMetrics, SimConfig};
use pitchctl::wind::{Interpretation, MicroburstProfile};

fn scenario_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/paper_microburst.scenario")
}

fn scenario() -> &'static Scenario {
    static CELL: OnceLock<Scenario> = OnceLock::new();
    CELL.get_or_init(|| load_scenario(&scenario_path()).expect("reference scenario loads"))
}

fn synthesis() -> &'static LqrSynthesis {
    static CELL: OnceLock<LqrSynthesis> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = scenario();
        solve_care(&s.model.a, &s.model.b, &s.weights).expect("reference synthesis")
    })
}

/// Uncontrolled and controlled encounter metrics for one frequency reading.
struct Encounter {
    open: ResponseMetrics,
    closed: ResponseMetrics,
}

fn encounter(interpretation: Interpretation) -> &'static Encounter {
    static HERTZ: OnceLock<Encounter> = OnceLock::new();
    static RADIANS: OnceLock<Encounter> = OnceLock::new();
    let cell = match interpretation {
        Interpretation::Hertz => &HERTZ,
        Interpretation::RadiansPerSecond => &RADIANS,
    };
    cell.get_or_init(|| {
        let s = scenario();
        let profile = MicroburstProfile { interpretation, ..s.microburst };
        let cfg = SimConfig {
            dt: s.sim.dt,
            t_final: s.sim.t_final,
            ..Default::default()
        };
        let open = simulate(&s.model, &profile, &cfg).unwrap();
        let closed = simulate(
            &s.model,
            &profile,
            &SimConfig {
                controller: Controller::Lqr(synthesis().k.clone()),
                ..cfg
            },
        )
        .unwrap();
        Encounter {
            open: extract_metrics(&open, &s.model, &s.weights).unwrap(),
            closed: extract_metrics(&closed, &s.model, &s.weights).unwrap(),
        }
    })
}

/// Collects sub-check failures and prints the criterion verdict line.
struct Criterion {
    label: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(label: &'static str) -> Self {
        Self { label, failures: Vec::new() }
    }

    fn close(&mut self, what: &str, got: f64, expected: f64, tol: f64) {
        if !((got - expected).abs() <= tol) {
            self.failures
                .push(format!("{what}: got {got:.4}, expected {expected} ± {tol}"));
        }
    }

    fn within_percent(&mut self, what: &str, got: f64, expected: f64, percent: f64) {
        self.close(what, got, expected, expected.abs() * percent / 100.0);
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("{}: PASS", self.label);
        } else {
            println!("{}: FAIL — {}", self.label, self.failures.join("; "));
            panic!("{} failed: {}", self.label, self.failures.join("; "));
        }
    }
}

#[test]
fn criterion_1_model_fidelity() {
    let mut c = Criterion::new("criterion 1 (model fidelity)");
    let m = &scenario().model;
    let tol = 5e-5;

    let a_expected = [
        ((0, 0), -0.0454),
        ((0, 1), 1.9609),
        ((0, 3), -9.8066),
        ((1, 0), -0.0069),
        ((1, 1), -2.1652),
        ((1, 2), 1.0),
        ((2, 1), -8.9246),
        ((2, 2), -2.0968),
        ((3, 2), 1.0),
        ((4, 1), 54.0),
        ((4, 3), -54.0),
    ];
    for ((i, j), v) in a_expected {
        c.close(&format!("A[{i},{j}]"), m.a[(i, j)], v, tol);
    }
    let b_expected = [((1, 0), -0.1611), ((2, 0), -12.0606)];
    for ((i, j), v) in b_expected {
        c.close(&format!("B[{i},{j}]"), m.b[(i, j)], v, tol);
    }
    let g_expected = [
        ((0, 0), 0.0454),
        ((0, 1), -1.9609),
        ((1, 0), 0.0069),
        ((1, 1), 2.1652),
        ((2, 1), 8.9246),
    ];
    for ((i, j), v) in g_expected {
        c.close(&format!("G[{i},{j}]"), m.g[(i, j)], v, tol);
    }
    c.finish();
}

#[test]
fn criterion_2_rank() {
    let mut c = Criterion::new("criterion 2 (controllability/observability rank)");
    let m = &scenario().model;
    let ctrb = numerical_rank(&controllability_matrix(m), None).rank;
    let obsv =
        numerical_rank_kind(&observability_matrix(m), None, MatrixKind::Observability).rank;
    c.require(&format!("controllability rank {ctrb}, expected 5"), ctrb == 5);
    c.require(&format!("observability rank {obsv}, expected 5"), obsv == 5);
    c.finish();
}

#[test]
fn criterion_3_modal_frequencies() {
    let mut c = Criterion::new("criterion 3 (modal frequencies)");
    let modes = modal_analysis(&scenario().model).unwrap();
    let freq = |label: ModeLabel| {
        modes
            .iter()
            .find(|m| m.label == label)
            .map(|m| m.natural_frequency_hz)
            .unwrap_or(f64::NAN)
    };
    c.close("short-period frequency (Hz)", freq(ModeLabel::ShortPeriod), 0.584, 0.01);
    c.close("phugoid frequency (Hz)", freq(ModeLabel::Phugoid), 0.033, 0.005);
    c.finish();
}

#[test]
fn criterion_4_synthesis_golden_values() {
    let mut c = Criterion::new("criterion 4 (synthesis golden values)");
    let syn = synthesis();
    let s = scenario();

    let k_expected = [-0.0219, 0.8901, -0.9837, -8.7459, 0.0183];
    for (j, &v) in k_expected.iter().enumerate() {
        c.close(&format!("K[{j}]"), syn.k[(0, j)], v, 1e-3);
    }

    #[rustfmt::skip]
    let s_expected = DMatrix::from_row_slice(5, 5, &[
         0.6115,   -5.0662,   0.1220,    5.9464, -0.2053,
        -5.0662,  117.1642,  -3.7795, -132.8100,  3.0884,
         0.1220,   -3.7795,   2.4973,   23.5294, -0.0867,
         5.9464, -132.8100,  23.5294,  436.7515, -3.8089,
        -0.2053,    3.0884,  -0.0867,   -3.8089,  0.1260,
    ]);
    let s_diff = (&syn.s - &s_expected).amax();
    c.require(
        &format!("S elementwise diff {s_diff:.4} vs published, expected ≤ 1e-2"),
        s_diff <= 1e-2,
    );

    let rel = care_residual(&s.model.a, &s.model.b, &s.weights, &syn.s) / syn.s.norm();
    c.require(&format!("relative CARE residual {rel:.2e}, expected ≤ 1e-8"), rel <= 1e-8);

    let unstable: Vec<_> =
        syn.closed_loop_eigenvalues.iter().filter(|(re, _)| *re >= 0.0).collect();
    c.require(
        &format!("closed loop Hurwitz (offending eigenvalues: {unstable:?})"),
        unstable.is_empty(),
    );
    c.finish();
}

// ---------------------------------------------------------------------------
// Encounter response criteria. Criteria 6–8 accept either frequency reading;
// criterion 5 runs both and records which one reproduces them.
// ---------------------------------------------------------------------------

fn check_uncontrolled(c: &mut Criterion, m: &ResponseMetrics) {
    c.close("uncontrolled θ max (deg)", m.theta_max_deg, 7.7, 0.4);
    c.close("uncontrolled θ min (deg)", m.theta_min_deg, -7.0, 0.4);
    c.within_percent("uncontrolled Δh min (m)", m.altitude_min_m, -108.9, 5.0);
    c.close("uncontrolled Δh at 100 s (m)", m.altitude_final_m, -60.0, 10.0);
}

fn check_controlled(c: &mut Criterion, m: &ResponseMetrics) {
    c.close("controlled θ extreme (deg)", m.theta_min_deg, -4.1, 0.3);
    c.require(
        &format!("controlled θ stays ≤ 0 (max {:.4} deg)", m.theta_max_deg),
        m.theta_max_deg <= 1e-9,
    );
    c.within_percent("controlled Δh min (m)", m.altitude_min_m, -26.3, 5.0);
    c.close("δ_e lower bound (deg)", m.elevator_min_deg, -0.47, 0.1);
    c.close("δ_e upper bound (deg)", m.elevator_max_deg, 0.85, 0.1);
    c.close("θ settling time (s)", m.settling_time_theta_s, 30.0, 5.0);
}

fn check_ratios(c: &mut Criterion, open: &ResponseMetrics, closed: &ResponseMetrics) {
    c.close(
        "pitch-deviation reduction (%)",
        report::pitch_reduction_percent(open, closed),
        46.8,
        3.0,
    );
    c.close(
        "altitude-loss reduction (%)",
        report::altitude_reduction_percent(open, closed),
        75.8,
        3.0,
    );
}

fn interpretation_verdict(interpretation: Interpretation) -> (bool, String) {
    let e = encounter(interpretation);
    let mut c = Criterion::new("");
    check_uncontrolled(&mut c, &e.open);
    check_controlled(&mut c, &e.closed);
    check_ratios(&mut c, &e.open, &e.closed);
    (c.passed(), c.failures.join("; "))
}

#[test]
fn criterion_5_interpretation_resolution() {
    let mut c = Criterion::new("criterion 5 (frequency-reading resolution)");
    let mut reproducing = Vec::new();
    for (name, interpretation) in [
        ("hertz", Interpretation::Hertz),
        ("radians_per_second", Interpretation::RadiansPerSecond),
    ] {
        let (ok, detail) = interpretation_verdict(interpretation);
        if ok {
            reproducing.push(name);
            println!("  {name}: reproduces the reference response");
        } else {
            println!("  {name}: does not reproduce the reference response ({detail})");
        }
    }
    c.require(
        &format!("at least one reading reproduces criteria 6–8 (reproducing: {reproducing:?})"),
        !reproducing.is_empty(),
    );
    c.finish();
}

/// A criterion over the encounter response passes if either frequency reading
/// satisfies it.
fn encounter_criterion(
    label: &'static str,
    check: impl Fn(&mut Criterion, &Encounter),
) {
    let mut failures = Vec::new();
    let mut passed = false;
    for (name, interpretation) in [
        ("hertz", Interpretation::Hertz),
        ("radians_per_second", Interpretation::RadiansPerSecond),
    ] {
        let mut c = Criterion::new(label);
        check(&mut c, encounter(interpretation));
        if c.passed() {
            passed = true;
        } else {
            failures.push(format!("[{name}] {}", c.failures.join("; ")));
        }
    }
    let mut c = Criterion::new(label);
    c.require(&failures.join(" / "), passed);
    c.finish();
}

#[test]
fn criterion_6_uncontrolled_response() {
    encounter_criterion("criterion 6 (uncontrolled response)", |c, e| {
        check_uncontrolled(c, &e.open)
    });
}

#[test]
fn criterion_7_controlled_response() {
    encounter_criterion("criterion 7 (controlled response)", |c, e| {
        check_controlled(c, &e.closed)
    });
}

#[test]
fn criterion_8_conclusion_ratios() {
    encounter_criterion("criterion 8 (reduction ratios)", |c, e| {
        check_ratios(c, &e.open, &e.closed)
    });
}

#[test]
fn criterion_9_property_suite() {
    let mut c = Criterion::new("criterion 9 (property suite)");
    let s = scenario();
    let m = &s.model;

    // LTI superposition: scaling the disturbance scales the response
    let cfg = SimConfig { dt: 1e-3, t_final: 20.0, ..Default::default() };
    let base = simulate(&m.clone(), &s.microburst, &cfg).unwrap();
    let scaled_profile = MicroburstProfile {
        amplitude_u: s.microburst.amplitude_u * 2.5,
        amplitude_w: s.microburst.amplitude_w * 2.5,
        ..s.microburst
    };
    let scaled = simulate(m, &scaled_profile, &cfg).unwrap();
    let x1 = base.states.last().unwrap();
    let x2 = scaled.states.last().unwrap();
    let sup = (x2 - x1 * 2.5).amax() / x2.amax().max(1.0);
    c.require(
        &format!("superposition under disturbance scaling ({sup:.2e} rel, expected ≤ 1e-8)"),
        sup <= 1e-8,
    );

    // 4th-order convergence: halving dt divides the global error by ~16
    let endpoint = |dt: f64| {
        simulate(m, &s.microburst, &SimConfig { dt, t_final: 10.0, ..Default::default() })
            .unwrap()
            .states
            .last()
            .unwrap()
            .clone()
    };
    let reference = endpoint(0.04 / 8.0);
    let ratio = (endpoint(0.08) - &reference).norm() / (endpoint(0.04) - &reference).norm();
    c.require(
        &format!("integrator error ratio on dt halving ({ratio:.1}, expected 16 within ×2)"),
        (8.0..=32.0).contains(&ratio),
    );

    // regulation-cost identity: J → x₀ᵀSx₀
    let syn = synthesis();
    let mut x0 = DVector::zeros(5);
    x0[3] = 1.0;
    let quiet = MicroburstProfile { amplitude_u: 0.0, amplitude_w: 0.0, ..s.microburst };
    let reg = simulate(
        m,
        &quiet,
        &SimConfig {
            dt: 1e-3,
            t_final: 100.0,
            controller: Controller::Lqr(syn.k.clone()),
            initial_state: x0.clone(),
        },
    )
    .unwrap();
    let j = reg.cost(&s.weights).unwrap();
    let quadratic_form = (x0.transpose() * &syn.s * &x0)[(0, 0)];
    let cost_err = (j - quadratic_form).abs() / quadratic_form;
    c.require(
        &format!("regulation cost identity (J = {j:.4}, x₀ᵀSx₀ = {quadratic_form:.4}, {:.2}% off, expected ≤ 1%)", 100.0 * cost_err),
        cost_err <= 0.01,
    );

    // scalar analytic Riccati cases, exact to 1e-12
    for (a0, b0, q0, r0) in [(0.0, 1.0, 1.0, 1.0), (1.0, 1.0, 1.0, 1.0), (-2.0, 3.0, 5.0, 0.5)] {
        let a = DMatrix::from_element(1, 1, a0);
        let b = DMatrix::from_element(1, 1, b0);
        let w = LqrWeights::new(
            DMatrix::from_element(1, 1, q0),
            DMatrix::from_element(1, 1, r0),
        )
        .unwrap();
        let expected = r0 * (a0 + (a0 * a0 + b0 * b0 * q0 / r0).sqrt()) / (b0 * b0);
        let got = solve_care(&a, &b, &w).unwrap().s[(0, 0)];
        c.require(
            &format!("scalar Riccati (a={a0}, b={b0}, q={q0}, r={r0}): s = {got}, analytic {expected}"),
            (got - expected).abs() <= 1e-12 * expected.max(1.0),
        );
    }

    // rank invariance under positive diagonal similarity
    let t = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 0.2, 11.0, 0.04, 6.0]));
    let tinv = t.clone().try_inverse().unwrap();
    let mut rescaled = m.clone();
    rescaled.a = &t * &m.a * &tinv;
    rescaled.b = &t * &m.b;
    let rank = numerical_rank(&controllability_matrix(&rescaled), None).rank;
    c.require(
        &format!("rank invariance under positive diagonal similarity (rank {rank})"),
        rank == 5,
    );

    // determinism: identical reruns are bit-identical
    let r1 = simulate(m, &s.microburst, &cfg).unwrap();
    let r2 = simulate(m, &s.microburst, &cfg).unwrap();
    c.require("determinism (bit-identical reruns)", r1 == r2);

    c.finish();
}
