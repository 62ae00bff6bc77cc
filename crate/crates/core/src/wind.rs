//! Sinusoidal microburst gust model.
//!
//! The encounter is a full-cycle headwind/tailwind reversal along x and a
//! half-cycle downdraft along z, both zero outside the transit window. The
//! frequency parameters can be read either as Hz (sin(2πft)) or as rad/s
//! (sin(ωt)); both readings stay available as a configuration choice.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::statespace::FlightCondition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    #[default]
    Hertz,
    RadiansPerSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroburstProfile {
    /// m/s
    pub amplitude_u: f64,
    /// m/s
    pub amplitude_w: f64,
    /// Hz or rad/s depending on `interpretation`.
    pub freq_u: f64,
    /// Hz or rad/s depending on `interpretation`.
    pub freq_w: f64,
    /// s; the profile is identically zero outside [0, duration].
    pub duration: f64,
    pub interpretation: Interpretation,
}

impl Default for MicroburstProfile {
    fn default() -> Self {
        Self {
            amplitude_u: 3.0,
            amplitude_w: -5.0,
            freq_u: 0.05,
            freq_w: 0.025,
            duration: 20.0,
            interpretation: Interpretation::Hertz,
        }
    }
}

impl MicroburstProfile {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("amplitude_u", self.amplitude_u),
            ("amplitude_w", self.amplitude_w),
            ("freq_u", self.freq_u),
            ("freq_w", self.freq_w),
            ("duration", self.duration),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidProfile(format!("{name} is not finite")));
            }
        }
        if self.duration <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        Ok(())
    }

    fn angular(&self, freq: f64) -> f64 {
        match self.interpretation {
            Interpretation::Hertz => TAU * freq,
            Interpretation::RadiansPerSecond => freq,
        }
    }
}

/// Gust winds `(u_g, w_g)` in m/s at time t; exactly (0, 0) outside the window.
pub fn gust_at(profile: &MicroburstProfile, t: f64) -> (f64, f64) {
    if !(0.0..=profile.duration).contains(&t) {
        return (0.0, 0.0);
    }
    (
        profile.amplitude_u * (profile.angular(profile.freq_u) * t).sin(),
        profile.amplitude_w * (profile.angular(profile.freq_w) * t).sin(),
    )
}

/// Disturbance angle of attack `α_g = w_g / u0`, rad.
pub fn alpha_gust(w_g: f64, cond: &FlightCondition) -> f64 {
    w_g / cond.u0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GustSample {
    pub u_g: f64,
    pub w_g: f64,
    pub alpha_g: f64,
}

/// Gust sample with the angle-of-attack conversion applied.
pub fn sample(profile: &MicroburstProfile, cond: &FlightCondition, t: f64) -> GustSample {
    let (u_g, w_g) = gust_at(profile, t);
    GustSample {
        u_g,
        w_g,
        alpha_g: alpha_gust(w_g, cond),
    }
}
