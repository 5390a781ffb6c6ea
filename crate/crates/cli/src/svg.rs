//! Minimal self-contained SVG chart: worst-case trajectory decay against
//! the certified envelope, on a log scale.

use dwellcert_core::sim::McSummary;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 24.0;
const MARGIN_B: f64 = 44.0;
const LOG_FLOOR: f64 = -16.0;

fn logclamp(v: f64) -> f64 {
    if v > 0.0 {
        v.log10().max(LOG_FLOOR)
    } else {
        LOG_FLOOR
    }
}

pub fn render_chart(summary: &McSummary) -> String {
    let ratios = &summary.per_t_max_ratio;
    let horizon = ratios.len().saturating_sub(1).max(1) as f64;
    let data: Vec<f64> = ratios.iter().map(|&r| logclamp(r)).collect();
    let bound: Option<Vec<f64>> = summary.bound.map(|b| {
        (0..ratios.len())
            .map(|t| logclamp(b.c * (-b.lambda * t as f64).exp()))
            .collect()
    });

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for v in data.iter().chain(bound.iter().flatten()) {
        y_min = y_min.min(*v);
        y_max = y_max.max(*v);
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = -1.0;
        y_max = 1.0;
    }
    if y_max - y_min < 1.0 {
        y_max += 0.5;
        y_min -= 0.5;
    }

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let x = |t: usize| MARGIN_L + plot_w * (t as f64) / horizon;
    let y = |v: f64| MARGIN_T + plot_h * (y_max - v) / (y_max - y_min);

    let path = |vals: &[f64]| -> String {
        vals.iter()
            .enumerate()
            .map(|(t, v)| {
                format!("{}{:.2},{:.2}", if t == 0 { "M" } else { "L" }, x(t), y(*v))
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Horizontal grid at integer decades.
    let mut decade = y_min.ceil() as i64;
    while (decade as f64) <= y_max {
        let yy = y(decade as f64);
        s.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" \
             stroke=\"#dddddd\"/>\n<text x=\"8\" y=\"{:.2}\">1e{decade}</text>\n",
            WIDTH - MARGIN_R,
            yy + 4.0
        ));
        decade += 1;
    }
    // Axes.
    s.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B
    ));
    s.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    ));
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\">t</text>\n",
        WIDTH - MARGIN_R - 12.0,
        HEIGHT - 12.0
    ));
    s.push_str(&format!(
        "<text x=\"{MARGIN_L}\" y=\"{:.2}\">worst ||x(t)||/||x(0)|| over {} trials</text>\n",
        HEIGHT - 12.0,
        summary.trials
    ));

    if let Some(b) = &bound {
        s.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n",
            path(b)
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#c0392b\">c*exp(-lambda t)</text>\n",
            MARGIN_L + 8.0,
            MARGIN_T + 14.0
        ));
    }
    s.push_str(&format!(
        "<path d=\"{}\" fill=\"none\" stroke=\"#2c5aa0\" stroke-width=\"1.5\"/>\n",
        path(&data)
    ));
    s.push_str("</svg>\n");
    s
}
