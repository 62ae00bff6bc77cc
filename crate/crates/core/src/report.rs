//! Serialization helpers and human-readable report formatting.

use nalgebra::DMatrix;
use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::analysis::{Mode, RankReport};
use crate::riccati::LqrSynthesis;
use crate::sim::ResponseMetrics;

/// Serialize a matrix as a list of rows.
pub fn serialize_matrix<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<f64> = m.row(i).iter().copied().collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Fixed 4-decimal matrix block, aligned columns.
pub fn format_matrix(name: &str, m: &DMatrix<f64>) -> String {
    let mut out = format!("{name} =\n");
    let width = m
        .iter()
        .map(|v| format!("{v:.4}").len())
        .max()
        .unwrap_or(1);
    for i in 0..m.nrows() {
        out.push_str("  [");
        for j in 0..m.ncols() {
            if j > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{:>width$.4}", m[(i, j)]));
        }
        out.push_str("]\n");
    }
    out
}

pub fn format_rank_report(r: &RankReport) -> String {
    let sv: Vec<String> = r.singular_values.iter().map(|s| format!("{s:.6e}")).collect();
    format!(
        "{:?} matrix: rank {} (tolerance {:.3e})\n  singular values: [{}]\n",
        r.matrix_kind,
        r.rank,
        r.tolerance,
        sv.join(", ")
    )
}

pub fn format_modes(modes: &[Mode]) -> String {
    let mut out = String::from("modes:\n");
    for m in modes {
        out.push_str(&format!(
            "  {:<12} λ = {:+.6} {} {:.6}i   f = {:.4} Hz   ζ = {:.4}\n",
            format!("{:?}", m.label),
            m.eigenvalue_re,
            if m.eigenvalue_im < 0.0 { "-" } else { "+" },
            m.eigenvalue_im.abs(),
            m.natural_frequency_hz,
            m.damping_ratio
        ));
    }
    out
}

pub fn format_synthesis(syn: &LqrSynthesis) -> String {
    let mut out = format_matrix("S", &syn.s);
    out.push_str(&format_matrix("K", &syn.k));
    out.push_str(&format!("residual ‖AᵀS + SA − SBR⁻¹BᵀS + Q‖_F = {:.3e}\n", syn.residual_norm));
    out.push_str("closed-loop eigenvalues:\n");
    for (re, im) in &syn.closed_loop_eigenvalues {
        out.push_str(&format!("  {re:+.6} {} {:.6}i\n", if *im < 0.0 { "-" } else { "+" }, im.abs()));
    }
    out
}

pub fn format_metrics(name: &str, m: &ResponseMetrics) -> String {
    format!(
        "{name}:\n  theta max/min     {:+.3} / {:+.3} deg\n  altitude min      {:+.2} m (final {:+.2} m)\n  elevator range    [{:+.4}, {:+.4}] deg\n  theta settling    {:.2} s (0.1 deg band)\n  small-angle ok    {}\n  elevator limit ok {}\n  quadratic cost J  {:.4}\n",
        m.theta_max_deg,
        m.theta_min_deg,
        m.altitude_min_m,
        m.altitude_final_m,
        m.elevator_min_deg,
        m.elevator_max_deg,
        m.settling_time_theta_s,
        !m.small_angle_violated,
        !m.elevator_limit_violated,
        m.cost_j
    )
}

/// Side-by-side comparison with the reduction percentages.
pub fn format_comparison(open: &ResponseMetrics, closed: &ResponseMetrics) -> String {
    let pitch_open = open.theta_max_deg.abs().max(open.theta_min_deg.abs());
    let pitch_closed = closed.theta_max_deg.abs().max(closed.theta_min_deg.abs());
    let pitch_reduction = 100.0 * (1.0 - pitch_closed / pitch_open);
    let alt_reduction = 100.0 * (1.0 - closed.altitude_min_m / open.altitude_min_m);
    let mut out = String::new();
    out.push_str(&format_metrics("uncontrolled", open));
    out.push_str(&format_metrics("controlled", closed));
    out.push_str(&format!(
        "reductions:\n  pitch deviation   {pitch_reduction:.1} %\n  altitude loss     {alt_reduction:.1} %\n"
    ));
    out
}

pub fn pitch_reduction_percent(open: &ResponseMetrics, closed: &ResponseMetrics) -> f64 {
    let pitch_open = open.theta_max_deg.abs().max(open.theta_min_deg.abs());
    let pitch_closed = closed.theta_max_deg.abs().max(closed.theta_min_deg.abs());
    100.0 * (1.0 - pitch_closed / pitch_open)
}

pub fn altitude_reduction_percent(open: &ResponseMetrics, closed: &ResponseMetrics) -> f64 {
    100.0 * (1.0 - closed.altitude_min_m / open.altitude_min_m)
}
