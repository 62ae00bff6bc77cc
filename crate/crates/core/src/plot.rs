//! Minimal self-contained SVG line plots.
//!
//! One file per figure: time on x, quantity on y, up to a handful of
//! overlaid series with a legend. Rendering only; the values come straight
//! from the recorded trajectories.

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: Vec<f64>,
}

pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &v in s.x {
            xmin = xmin.min(v);
            xmax = xmax.max(v);
        }
        for &v in &s.y {
            ymin = ymin.min(v);
            ymax = ymax.max(v);
        }
    }
    if !xmin.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
    }
    if !ymin.is_finite() {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (ymax - ymin).abs() < 1e-12 {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |v: f64| MARGIN_L + (v - xmin) / (xmax - xmin) * pw;
    let sy = |v: f64| MARGIN_T + (ymax - v) / (ymax - ymin) * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    // axes and grid
    for k in 0..=5 {
        let xv = xmin + (xmax - xmin) * k as f64 / 5.0;
        let yv = ymin + (ymax - ymin) * k as f64 / 5.0;
        let gx = sx(xv);
        let gy = sy(yv);
        svg.push_str(&format!(
            "<line x1=\"{gx:.1}\" y1=\"{}\" x2=\"{gx:.1}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            MARGIN_T,
            MARGIN_T + ph
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{gy:.1}\" x2=\"{}\" y2=\"{gy:.1}\" stroke=\"#ddd\"/>\n",
            MARGIN_L,
            MARGIN_L + pw
        ));
        svg.push_str(&format!(
            "<text x=\"{gx:.1}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            MARGIN_T + ph + 18.0,
            trim_num(xv)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            MARGIN_L - 6.0,
            gy + 4.0,
            trim_num(yv)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>\n",
        MARGIN_L, MARGIN_T
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        MARGIN_L + pw / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0,
        escape(y_label)
    ));

    // zero line when the range straddles it
    if ymin < 0.0 && ymax > 0.0 {
        let gy = sy(0.0);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{gy:.1}\" x2=\"{}\" y2=\"{gy:.1}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
            MARGIN_L,
            MARGIN_L + pw
        ));
    }

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        // decimate to keep files small; the curves are smooth
        let stride = (s.x.len() / 2000).max(1);
        let mut points = String::new();
        for k in (0..s.x.len()).step_by(stride) {
            points.push_str(&format!("{:.2},{:.2} ", sx(s.x[k]), sy(s.y[k])));
        }
        if (s.x.len() - 1) % stride != 0 {
            if let (Some(&x), Some(&y)) = (s.x.last(), s.y.last()) {
                points.push_str(&format!("{:.2},{:.2} ", sx(x), sy(y)));
            }
        }
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            points.trim_end()
        ));
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            MARGIN_L + pw - 150.0,
            MARGIN_L + pw - 120.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            MARGIN_L + pw - 112.0,
            ly + 4.0,
            escape(s.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn trim_num(v: f64) -> String {
    if v.abs() >= 1000.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}
