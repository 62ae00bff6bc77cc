//! Longitudinal state-space model assembly.
//!
//! State ordering is fixed as `[Δu (m/s), Δα (rad), Δq (rad/s), Δθ (rad), Δh (m)]`,
//! with elevator deflection Δδ_e (rad) as the single control input and
//! `[Δu_g (m/s), Δα_g (rad)]` as the gust disturbance inputs. All angles are
//! radians internally; degrees appear only at input/output boundaries.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The twelve longitudinal stability and control derivatives, SI per radian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct StabilityDerivatives {
    /// 1/s
    pub X_u: f64,
    /// m/s²
    pub X_alpha: f64,
    /// 1/s
    pub X_q: f64,
    /// m/s²
    pub X_de: f64,
    /// 1/s
    pub Z_u: f64,
    /// m/s²
    pub Z_alpha: f64,
    /// 1/s
    pub Z_q: f64,
    /// m/s²
    pub Z_de: f64,
    /// 1/(m·s)
    pub M_u: f64,
    /// 1/s²
    pub M_alpha: f64,
    /// 1/s
    pub M_q: f64,
    /// 1/s²
    pub M_de: f64,
}

impl StabilityDerivatives {
    fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("X_u", self.X_u),
            ("X_alpha", self.X_alpha),
            ("X_q", self.X_q),
            ("X_de", self.X_de),
            ("Z_u", self.Z_u),
            ("Z_alpha", self.Z_alpha),
            ("Z_q", self.Z_q),
            ("Z_de", self.Z_de),
            ("M_u", self.M_u),
            ("M_alpha", self.M_alpha),
            ("M_q", self.M_q),
            ("M_de", self.M_de),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.fields() {
            if !value.is_finite() {
                return Err(Error::NonFinite { field: name, value });
            }
        }
        Ok(())
    }
}

/// Trim flight condition about which the deviations are measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlightCondition {
    /// Trim airspeed, m/s.
    pub u0: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
}

impl FlightCondition {
    pub fn new(u0: f64, g: f64) -> Result<Self> {
        if !u0.is_finite() {
            return Err(Error::NonFinite { field: "u0", value: u0 });
        }
        if !g.is_finite() {
            return Err(Error::NonFinite { field: "g", value: g });
        }
        if u0 <= 0.0 {
            return Err(Error::NonPositiveAirspeed(u0));
        }
        if g < 0.0 {
            return Err(Error::NegativeGravity(g));
        }
        Ok(Self { u0, g })
    }
}

pub const N_STATES: usize = 5;

/// The LTI quintuple `ẋ = Ax + Bu + Gη`, `y = Cx + Du`.
#[derive(Debug, Clone, PartialEq)]
pub struct LongitudinalModel {
    /// 5×5 state matrix.
    pub a: DMatrix<f64>,
    /// 5×1 elevator input column.
    pub b: DMatrix<f64>,
    /// 5×2 gust input columns `[u_g, α_g]`.
    pub g: DMatrix<f64>,
    /// 5×5 output matrix (identity).
    pub c: DMatrix<f64>,
    /// 5×1 feedforward (zero).
    pub d: DMatrix<f64>,
    /// Flight condition the model was assembled for.
    pub condition: FlightCondition,
}

/// Assemble the numeric longitudinal model from stability derivatives.
///
/// The altitude row follows the source convention `Δḣ = u0(Δα − Δθ)` and the
/// gusts enter rows 1..3 as the negated airspeed/AoA columns of A.
pub fn assemble_model(
    derivs: &StabilityDerivatives,
    cond: FlightCondition,
) -> Result<LongitudinalModel> {
    derivs.validate()?;
    let cond = FlightCondition::new(cond.u0, cond.g)?;
    let u0 = cond.u0;

    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(5, 5, &[
        derivs.X_u,        derivs.X_alpha,        0.0,          -cond.g, 0.0,
        derivs.Z_u / u0,   derivs.Z_alpha / u0,   1.0,           0.0,    0.0,
        derivs.M_u,        derivs.M_alpha,        derivs.M_q,    0.0,    0.0,
        0.0,               0.0,                   1.0,           0.0,    0.0,
        0.0,               u0,                    0.0,          -u0,     0.0,
    ]);

    let b = DMatrix::from_column_slice(
        5,
        1,
        &[derivs.X_de, derivs.Z_de / u0, derivs.M_de, 0.0, 0.0],
    );

    let mut g = DMatrix::zeros(5, 2);
    for i in 0..3 {
        g[(i, 0)] = -a[(i, 0)];
        g[(i, 1)] = -a[(i, 1)];
    }

    Ok(LongitudinalModel {
        a,
        b,
        g,
        c: DMatrix::identity(5, 5),
        d: DMatrix::zeros(5, 1),
        condition: cond,
    })
}

/// Trapezoidal quadrature of `xᵀQx + uᵀRu` over a uniformly sampled run.
///
/// `states[k]` is the 5-state at `times[k]`; `controls[k]` the elevator input.
pub fn quadratic_cost(
    times: &[f64],
    states: &[DVector<f64>],
    controls: &[f64],
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
) -> Result<f64> {
    if states.len() != times.len() || controls.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} samples", times.len()),
            actual: format!("{} states, {} controls", states.len(), controls.len()),
        });
    }
    let n = states.first().map_or(0, |x| x.len());
    if q.nrows() != n || q.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} Q"),
            actual: format!("{}x{}", q.nrows(), q.ncols()),
        });
    }
    if r.nrows() != 1 || r.ncols() != 1 {
        return Err(Error::DimensionMismatch {
            expected: "1x1 R".into(),
            actual: format!("{}x{}", r.nrows(), r.ncols()),
        });
    }

    let integrand = |k: usize| {
        let x = &states[k];
        let u = controls[k];
        (x.transpose() * q * x)[(0, 0)] + r[(0, 0)] * u * u
    };

    let mut total = 0.0;
    for k in 1..times.len() {
        let dt = times[k] - times[k - 1];
        total += 0.5 * dt * (integrand(k - 1) + integrand(k));
    }
    Ok(total)
}
