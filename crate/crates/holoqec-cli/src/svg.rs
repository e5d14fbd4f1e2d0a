//! Minimal SVG line plots for recovery-rate curves.

use holoqec::sim::{binomial_mix, RecoveryCurve};
use holoqec::Result;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn x_pixel(p: f64) -> f64 {
    MARGIN_LEFT + p * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn y_pixel(v: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - v * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

/// Renders the mixed recovery rate of every curve as one polyline per curve.
pub fn render(curves: &[RecoveryCurve], points: usize) -> Result<String> {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes and ticks every 0.2.
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let (x, y) = (x_pixel(t), y_pixel(t));
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#ddd\"/>\n",
            y_pixel(0.0),
            y_pixel(1.0)
        ));
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            x_pixel(0.0),
            x_pixel(1.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{t:.1}</text>\n",
            y_pixel(0.0) + 18.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{t:.1}</text>\n",
            x_pixel(0.0) - 6.0,
            y + 4.0
        ));
    }
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        x_pixel(0.0),
        y_pixel(0.0),
        x_pixel(1.0),
        y_pixel(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        x_pixel(0.0),
        y_pixel(0.0),
        x_pixel(0.0),
        y_pixel(1.0)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">erasure probability p</text>\n",
        x_pixel(0.5),
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.1})\">recovery rate</text>\n",
        y_pixel(0.5),
        y_pixel(0.5)
    ));

    for (idx, curve) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut path = String::new();
        for i in 0..=points {
            let p = i as f64 / points as f64;
            let v = binomial_mix(curve, p)?;
            path.push_str(&format!(
                "{}{:.1},{:.1}",
                if i == 0 { "" } else { " " },
                x_pixel(p),
                y_pixel(v)
            ));
        }
        svg.push_str(&format!(
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>\n"
        ));
        let label_y = MARGIN_TOP + 16.0 * idx as f64 + 8.0;
        svg.push_str(&format!(
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"18\" height=\"4\" fill=\"{color}\"/>\n",
            x_pixel(0.0) + 10.0,
            label_y - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">R={} {}</text>\n",
            x_pixel(0.0) + 34.0,
            label_y,
            curve.radius,
            curve.decoder
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
