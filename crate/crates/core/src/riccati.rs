//! Continuous algebraic Riccati equation and LQR gain synthesis.
//!
//! The stabilizing solution of
//!
//! ```text
//! AᵀS + SA − SBR⁻¹BᵀS + Q = 0
//! ```
//!
//! is obtained from the stable invariant subspace of the Hamiltonian
//! `[[A, −BR⁻¹Bᵀ], [−Q, −Aᵀ]]`, computed with the scaled matrix sign
//! iteration, then tightened by a few Newton (Kleinman) steps, each of
//! which is a small Lyapunov solve. The gain is `K = R⁻¹BᵀS`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};

/// LQR weighting matrices. Q must be symmetric PSD, R symmetric PD.
#[derive(Debug, Clone, PartialEq)]
pub struct LqrWeights {
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

impl LqrWeights {
    pub fn new(q: DMatrix<f64>, r: DMatrix<f64>) -> Result<Self> {
        if q.nrows() != q.ncols() || r.nrows() != r.ncols() {
            return Err(Error::DimensionMismatch {
                expected: "square Q and R".into(),
                actual: format!("{}x{}, {}x{}", q.nrows(), q.ncols(), r.nrows(), r.ncols()),
            });
        }
        let qs = (q.transpose() - &q).amax();
        if qs > 1e-12 * q.amax().max(1.0) {
            return Err(Error::InvalidQ);
        }
        if symmetric_eigen_min(&q) < -1e-10 * q.amax().max(1.0) {
            return Err(Error::InvalidQ);
        }
        let rs = (r.transpose() - &r).amax();
        if rs > 1e-12 * r.amax().max(1.0) || symmetric_eigen_min(&r) <= 0.0 {
            return Err(Error::NonPositiveDefiniteR);
        }
        Ok(Self { q, r })
    }

    pub fn diagonal(q_diag: &[f64], r: f64) -> Result<Self> {
        Self::new(
            DMatrix::from_diagonal(&DVector::from_row_slice(q_diag)),
            DMatrix::from_element(1, 1, r),
        )
    }
}

fn symmetric_eigen_min(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Result of an LQR synthesis.
#[derive(Debug, Clone, Serialize)]
pub struct LqrSynthesis {
    /// Riccati solution, symmetric PSD, row-major.
    #[serde(serialize_with = "crate::report::serialize_matrix")]
    pub s: DMatrix<f64>,
    /// State-feedback gain, 1×n.
    #[serde(serialize_with = "crate::report::serialize_matrix")]
    pub k: DMatrix<f64>,
    /// Frobenius norm of the Riccati residual at S.
    pub residual_norm: f64,
    /// Eigenvalues of A − BK, all strictly in the left half-plane.
    pub closed_loop_eigenvalues: Vec<(f64, f64)>,
}

/// Frobenius norm of `AᵀS + SA − SBR⁻¹BᵀS + Q` evaluated at S.
pub fn care_residual(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    weights: &LqrWeights,
    s: &DMatrix<f64>,
) -> f64 {
    let rinv_bt = weights.r.clone().try_inverse().expect("R is PD") * b.transpose();
    let res = a.transpose() * s + s * a - s * b * &rinv_bt * s + &weights.q;
    res.norm()
}

/// The feedback law `u = −Kx`.
pub fn control_law(k: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    -(k * x)[(0, 0)]
}

/// Solve the CARE and synthesize the stabilizing gain.
pub fn solve_care(a: &DMatrix<f64>, b: &DMatrix<f64>, weights: &LqrWeights) -> Result<LqrSynthesis> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("A {n}x{n}, B {n}xm"),
            actual: format!("A {}x{}, B {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols()),
        });
    }
    if weights.q.nrows() != n || weights.r.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: format!("Q {n}x{n}, R {m}x{m}", m = b.ncols()),
            actual: format!(
                "Q {}x{}, R {}x{}",
                weights.q.nrows(),
                weights.q.ncols(),
                weights.r.nrows(),
                weights.r.ncols()
            ),
        });
    }

    let r_inv = weights
        .r
        .clone()
        .try_inverse()
        .ok_or(Error::NonPositiveDefiniteR)?;
    let brb = b * &r_inv * b.transpose();

    // Hamiltonian [[A, -BR^-1 B^T], [-Q, -A^T]]
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(a);
    h.view_mut((0, n), (n, n)).copy_from(&(-&brb));
    h.view_mut((n, 0), (n, n)).copy_from(&(-&weights.q));
    h.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));

    let sign = matrix_sign(&h)?;

    // stable subspace = range of (I - sign(H)) / 2
    let proj = (DMatrix::identity(2 * n, 2 * n) - sign) * 0.5;
    let qr = proj.col_piv_qr();
    let basis = qr.q();
    let u1 = DMatrix::from(basis.view((0, 0), (n, n)));
    let u2 = DMatrix::from(basis.view((n, 0), (n, n)));

    // S = U2 U1^{-1}, via U1^T Sᵀ = U2ᵀ
    let s_t = u1
        .transpose()
        .lu()
        .solve(&u2.transpose())
        .ok_or(Error::SingularSubspace)?;
    let mut s = s_t.transpose();
    s = (&s + s.transpose()) * 0.5;

    // Newton (Kleinman) refinement; each step solves a Lyapunov equation
    for _ in 0..20 {
        let res = care_residual(a, b, weights, &s);
        if res <= 1e-12 * s.norm().max(1.0) {
            break;
        }
        let k = &r_inv * b.transpose() * &s;
        let acl = a - b * &k;
        let rhs = -(&weights.q + k.transpose() * &weights.r * &k);
        let Some(next) = solve_lyapunov(&acl, &rhs) else { break };
        let next = (&next + next.transpose()) * 0.5;
        if care_residual(a, b, weights, &next) >= res {
            break;
        }
        s = next;
    }

    let k = &r_inv * b.transpose() * &s;
    let acl = a - b * &k;
    let eigs = crate::analysis::complex_eigs(&acl)?;
    if let Some(bad) = eigs.iter().find(|e| e.re >= 0.0) {
        return Err(Error::NotStabilizing(format_complex(*bad)));
    }

    Ok(LqrSynthesis {
        residual_norm: care_residual(a, b, weights, &s),
        s,
        k,
        closed_loop_eigenvalues: eigs.iter().map(|e| (e.re, e.im)).collect(),
    })
}

fn format_complex(c: Complex<f64>) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{} {} {}i", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
    }
}

/// Scaled Newton iteration for the matrix sign function.
fn matrix_sign(h: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = h.nrows();
    let mut z = h.clone();
    for _ in 0..100 {
        let lu = z.clone().lu();
        let det: f64 = lu.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SignIterationDiverged);
        }
        let z_inv = lu.try_inverse().ok_or(Error::SignIterationDiverged)?;
        // determinant scaling accelerates convergence for eigenvalues far
        // from the unit circle
        let c = det.abs().powf(-1.0 / n as f64);
        let next = (&z * c + z_inv / c) * 0.5;
        let delta = (&next - &z).norm();
        let done = delta <= 1e-14 * z.norm();
        z = next;
        if done {
            return Ok(z);
        }
    }
    // accept a slightly looser fixed point; Newton refinement cleans up after
    let z_inv = z.clone().try_inverse().ok_or(Error::SignIterationDiverged)?;
    if (&z - &z_inv).norm() <= 1e-6 * z.norm() {
        Ok(z)
    } else {
        Err(Error::SignIterationDiverged)
    }
}

/// Solve `AᵀX + XA = C` by the Kronecker linearization (small n only).
fn solve_lyapunov(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = a.nrows();
    let eye = DMatrix::identity(n, n);
    let at = a.transpose();
    // vec(AᵀX) = (I ⊗ Aᵀ) vec(X), vec(XA) = (Aᵀ ⊗ I) vec(X)
    let coeff = eye.kronecker(&at) + at.kronecker(&eye);
    let rhs = DVector::from_column_slice(c.as_slice());
    let x = coeff.lu().solve(&rhs)?;
    Some(DMatrix::from_column_slice(n, n, x.as_slice()))
}
