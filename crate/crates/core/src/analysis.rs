//! Controllability, observability, numerical rank and modal analysis.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::statespace::LongitudinalModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Controllability,
    Observability,
}

/// Singular-value based rank report.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub matrix_kind: MatrixKind,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub tolerance: f64,
    pub rank: usize,
}

/// `C_M = [B  AB  A²B  A³B  A⁴B]`.
pub fn controllability_matrix(model: &LongitudinalModel) -> DMatrix<f64> {
    staircase(&model.a, &model.b)
}

/// `O_M = [C; CA; CA²; CA³; CA⁴]`, stacked row blocks.
pub fn observability_matrix(model: &LongitudinalModel) -> DMatrix<f64> {
    staircase(&model.a.transpose(), &model.c.transpose()).transpose()
}

fn staircase(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let m = b.ncols();
    let mut out = DMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for i in 0..n {
        out.view_mut((0, i * m), (n, m)).copy_from(&block);
        block = a * &block;
    }
    out
}

/// Rank from singular values. Default tolerance is
/// `σ_max · max(rows, cols) · ε` (the usual SVD rank cutoff).
pub fn numerical_rank(m: &DMatrix<f64>, tolerance: Option<f64>) -> RankReport {
    numerical_rank_kind(m, tolerance, MatrixKind::Controllability)
}

pub fn numerical_rank_kind(
    m: &DMatrix<f64>,
    tolerance: Option<f64>,
    kind: MatrixKind,
) -> RankReport {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = sv.first().copied().unwrap_or(0.0);
    let tol =
        tolerance.unwrap_or_else(|| smax * m.nrows().max(m.ncols()) as f64 * f64::EPSILON);
    let rank = sv.iter().filter(|&&s| s > tol).count();
    RankReport {
        matrix_kind: kind,
        singular_values: sv,
        tolerance: tol,
        rank,
    }
}

/// Eigenvalues via a bounded Schur iteration.
///
/// nalgebra's `complex_eigenvalues` can spin forever on exactly triangular
/// inputs with repeated eigenvalues (the zero matrix being the simplest),
/// so triangular matrices are read off directly and the QR iteration gets
/// an iteration cap instead of looping unbounded.
pub fn complex_eigs(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if let Some(eigs) = triangular_eigs(a) {
        return Ok(eigs);
    }
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), f64::EPSILON, 100_000)
        .ok_or(Error::EigenIterationDiverged)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

fn triangular_eigs(a: &DMatrix<f64>) -> Option<Vec<Complex<f64>>> {
    let n = a.nrows();
    let upper = (1..n).all(|i| (0..i).all(|j| a[(i, j)] == 0.0));
    let lower = (1..n).all(|i| (0..i).all(|j| a[(j, i)] == 0.0));
    (upper || lower).then(|| (0..n).map(|i| Complex::new(a[(i, i)], 0.0)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeLabel {
    ShortPeriod,
    Phugoid,
    Altitude,
    Other,
}

/// One eigenvalue of A with its frequency/damping interpretation.
#[derive(Debug, Clone, Serialize)]
pub struct Mode {
    pub eigenvalue_re: f64,
    pub eigenvalue_im: f64,
    /// |λ| / 2π, Hz.
    pub natural_frequency_hz: f64,
    /// −Re(λ)/|λ|; 0 for the zero eigenvalue.
    pub damping_ratio: f64,
    pub label: ModeLabel,
}

impl Mode {
    pub fn eigenvalue(&self) -> Complex<f64> {
        Complex::new(self.eigenvalue_re, self.eigenvalue_im)
    }
}

/// Eigenvalues of A, grouped into conjugate pairs and labeled.
///
/// Among the oscillatory pairs, the one with the largest |λ| is the short
/// period, the other the phugoid; the near-zero real eigenvalue from the
/// decoupled altitude column is labeled altitude.
pub fn modal_analysis(model: &LongitudinalModel) -> Result<Vec<Mode>> {
    eigen_modes(&model.a)
}

pub fn eigen_modes(a: &DMatrix<f64>) -> Result<Vec<Mode>> {
    let eigs = complex_eigs(a)?;
    for e in eigs.iter() {
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(Error::NonFinite { field: "eigenvalue", value: e.re });
        }
    }
    let scale = a.amax().max(1.0);
    let imag_tol = 1e-10 * scale;

    let mut modes: Vec<Mode> = eigs
        .iter()
        .map(|e| {
            let mag = e.norm();
            Mode {
                eigenvalue_re: e.re,
                eigenvalue_im: e.im,
                natural_frequency_hz: mag / TAU,
                damping_ratio: if mag > 0.0 { -e.re / mag } else { 0.0 },
                label: ModeLabel::Other,
            }
        })
        .collect();

    // sort oscillatory pairs by |λ| descending: largest pair = short period
    let mut osc: Vec<usize> = (0..modes.len())
        .filter(|&i| modes[i].eigenvalue_im.abs() > imag_tol)
        .collect();
    osc.sort_by(|&i, &j| {
        modes[j]
            .eigenvalue()
            .norm()
            .partial_cmp(&modes[i].eigenvalue().norm())
            .unwrap()
    });
    if osc.len() >= 2 {
        let fastest = modes[osc[0]].eigenvalue().norm();
        for &i in &osc {
            let mag = modes[i].eigenvalue().norm();
            modes[i].label = if (mag - fastest).abs() <= 1e-9 * fastest.max(1.0) {
                ModeLabel::ShortPeriod
            } else {
                ModeLabel::Phugoid
            };
        }
    }
    for m in modes.iter_mut() {
        if m.eigenvalue_im.abs() <= imag_tol && m.eigenvalue().norm() <= 1e-9 * scale {
            m.label = ModeLabel::Altitude;
        }
    }
    // conjugate-pair ordering: sort by (|Im| desc, Im desc) so pairs are adjacent
    modes.sort_by(|a, b| {
        b.eigenvalue_im
            .abs()
            .partial_cmp(&a.eigenvalue_im.abs())
            .unwrap()
            .then(b.eigenvalue_im.partial_cmp(&a.eigenvalue_im).unwrap())
    });
    Ok(modes)
}
