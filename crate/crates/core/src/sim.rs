//! Fixed-step simulation of the forced longitudinal dynamics and response
//! metric extraction.
//!
//! Classical 4th-order Runge-Kutta with the gust evaluated at the internal
//! stage times, so the forced response keeps full order. Runs are
//! deterministic: the same configuration produces a bit-identical trajectory.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::riccati::LqrWeights;
use crate::statespace::{quadratic_cost, LongitudinalModel, N_STATES};
use crate::wind::{self, GustSample, MicroburstProfile};

#[derive(Debug, Clone, PartialEq)]
pub enum Controller {
    Off,
    /// State feedback `u = −Kx` with a 1×5 gain.
    Lqr(DMatrix<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Step size, s.
    pub dt: f64,
    /// Final time, s; a final partial step is shortened to land on it.
    pub t_final: f64,
    pub controller: Controller,
    pub initial_state: DVector<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 100.0,
            controller: Controller::Off,
            initial_state: DVector::zeros(N_STATES),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_final must be at least dt, got {}",
                self.t_final
            )));
        }
        if self.initial_state.len() != N_STATES {
            return Err(Error::InvalidConfig(format!(
                "initial state must have {N_STATES} entries, got {}",
                self.initial_state.len()
            )));
        }
        if let Controller::Lqr(k) = &self.controller {
            if k.nrows() != 1 || k.ncols() != N_STATES {
                return Err(Error::InvalidConfig(format!(
                    "gain must be 1x{N_STATES}, got {}x{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        Ok(())
    }
}

/// Recorded run: all series share one length and all entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Internal SI/radians.
    pub states: Vec<DVector<f64>>,
    /// Elevator deflection δ_e, rad.
    pub controls: Vec<f64>,
    pub gusts: Vec<GustSample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn cost(&self, weights: &LqrWeights) -> Result<f64> {
        quadratic_cost(&self.times, &self.states, &self.controls, &weights.q, &weights.r)
    }
}

/// Integrate `ẋ = Ax + Bu(x) + Gη(t)` on the dt grid.
pub fn simulate(
    model: &LongitudinalModel,
    profile: &MicroburstProfile,
    config: &SimConfig,
) -> Result<Trajectory> {
    config.validate()?;
    profile.validate()?;

    let control = |x: &DVector<f64>| -> f64 {
        match &config.controller {
            Controller::Off => 0.0,
            Controller::Lqr(k) => crate::riccati::control_law(k, x),
        }
    };
    let deriv = |t: f64, x: &DVector<f64>, u: f64| -> DVector<f64> {
        let g = wind::sample(profile, &model.condition, t);
        let eta = DVector::from_vec(vec![g.u_g, g.alpha_g]);
        &model.a * x + &model.b * DVector::from_element(1, u) + &model.g * eta
    };

    let n_steps = (config.t_final / config.dt).ceil() as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut controls = Vec::with_capacity(n_steps + 1);
    let mut gusts = Vec::with_capacity(n_steps + 1);

    let mut x = config.initial_state.clone();
    let mut t = 0.0;
    let mut record = |t: f64, x: &DVector<f64>, u: f64| {
        times.push(t);
        states.push(x.clone());
        controls.push(u);
        gusts.push(wind::sample(profile, &model.condition, t));
    };
    record(t, &x, control(&x));

    for step in 0..n_steps {
        let h = (config.t_final - t).min(config.dt);
        let k1 = {
            let u = control(&x);
            deriv(t, &x, u)
        };
        let x2 = &x + &k1 * (h / 2.0);
        let k2 = deriv(t + h / 2.0, &x2, control(&x2));
        let x3 = &x + &k2 * (h / 2.0);
        let k3 = deriv(t + h / 2.0, &x3, control(&x3));
        let x4 = &x + &k3 * h;
        let k4 = deriv(t + h, &x4, control(&x4));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        t = if step + 1 == n_steps { config.t_final } else { t + h };

        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t, step: step + 1 });
        }
        record(t, &x, control(&x));
    }

    Ok(Trajectory { times, states, controls, gusts })
}

/// Scalar figures of merit; angles in degrees at this boundary.
#[derive(Debug, Clone, Serialize)]
pub struct ResponseMetrics {
    pub theta_max_deg: f64,
    pub theta_min_deg: f64,
    /// Most negative Δh, m.
    pub altitude_min_m: f64,
    pub altitude_final_m: f64,
    pub elevator_min_deg: f64,
    pub elevator_max_deg: f64,
    /// Last time |Δθ| exceeds the 0.1° band; 0 if it never does.
    pub settling_time_theta_s: f64,
    /// |Δα − Δθ| exceeded 14° somewhere (small-angle linearization strained).
    pub small_angle_violated: bool,
    /// |δ_e| exceeded the ±20° physical range somewhere.
    pub elevator_limit_violated: bool,
    pub cost_j: f64,
}

const SETTLING_BAND_DEG: f64 = 0.1;
const SMALL_ANGLE_LIMIT_DEG: f64 = 14.0;
const ELEVATOR_LIMIT_DEG: f64 = 20.0;

pub fn extract_metrics(
    trajectory: &Trajectory,
    _model: &LongitudinalModel,
    weights: &LqrWeights,
) -> Result<ResponseMetrics> {
    if trajectory.is_empty() {
        return Err(Error::InvalidConfig("empty trajectory".into()));
    }
    let deg = |rad: f64| rad.to_degrees();

    let mut theta_max = f64::NEG_INFINITY;
    let mut theta_min = f64::INFINITY;
    let mut altitude_min = f64::INFINITY;
    let mut elevator_min = f64::INFINITY;
    let mut elevator_max = f64::NEG_INFINITY;
    let mut settling = 0.0;
    let mut small_angle = false;
    let mut elevator_limit = false;

    for (k, x) in trajectory.states.iter().enumerate() {
        let theta = deg(x[3]);
        let alpha = deg(x[1]);
        let de = deg(trajectory.controls[k]);
        theta_max = theta_max.max(theta);
        theta_min = theta_min.min(theta);
        altitude_min = altitude_min.min(x[4]);
        elevator_min = elevator_min.min(de);
        elevator_max = elevator_max.max(de);
        if theta.abs() > SETTLING_BAND_DEG {
            settling = trajectory.times[k];
        }
        small_angle |= (alpha - theta).abs() > SMALL_ANGLE_LIMIT_DEG;
        elevator_limit |= de.abs() > ELEVATOR_LIMIT_DEG;
    }

    Ok(ResponseMetrics {
        theta_max_deg: theta_max,
        theta_min_deg: theta_min,
        altitude_min_m: altitude_min,
        altitude_final_m: trajectory.states.last().unwrap()[4],
        elevator_min_deg: elevator_min,
        elevator_max_deg: elevator_max,
        settling_time_theta_s: settling,
        small_angle_violated: small_angle,
        elevator_limit_violated: elevator_limit,
        cost_j: trajectory.cost(weights)?,
    })
}
