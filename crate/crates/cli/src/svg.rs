//! Standalone SVG line plots.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLOURS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
];

pub struct Series<'a> {
    pub label: String,
    pub values: &'a [f64],
}

/// Rounds a range outwards so the tick labels come out short.
fn nice_range(lo: f64, hi: f64) -> (f64, f64, f64) {
    let (lo, hi) = if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    ((lo / step).floor() * step, (hi / step).ceil() * step, step)
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn line_plot(title: &str, x_label: &str, x: &[f64], series: &[Series]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let x_lo = x.iter().filter(finite).copied().fold(f64::INFINITY, f64::min);
    let x_hi = x.iter().filter(finite).copied().fold(f64::NEG_INFINITY, f64::max);
    let y_lo = series
        .iter()
        .flat_map(|s| s.values.iter().filter(finite))
        .copied()
        .fold(f64::INFINITY, f64::min)
        .min(0.0);
    let y_hi = series
        .iter()
        .flat_map(|s| s.values.iter().filter(finite))
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let (x_lo, x_hi) = if x_lo.is_finite() { (x_lo, x_hi) } else { (0.0, 1.0) };
    let (y_lo, y_hi) = if y_hi.is_finite() { (y_lo, y_hi) } else { (0.0, 1.0) };
    let (x0, x1, xs) = nice_range(x_lo, x_hi);
    let (y0, y1, ys) = nice_range(y_lo, y_hi);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let py = |v: f64| TOP + (1.0 - (v - y0) / (y1 - y0)) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let mut tick = x0;
    while tick <= x1 + 1e-9 * xs {
        let gx = px(tick);
        let _ = writeln!(
            out,
            r##"<line x1="{gx:.2}" y1="{TOP}" x2="{gx:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{gx:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + ph,
            TOP + ph + 18.0,
            label(tick)
        );
        tick += xs;
    }
    let mut tick = y0;
    while tick <= y1 + 1e-9 * ys {
        let gy = py(tick);
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            gy + 4.0,
            label(tick)
        );
        tick += ys;
    }
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    for (i, s) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let mut points = String::new();
        for (xv, yv) in x.iter().zip(s.values) {
            if xv.is_finite() && yv.is_finite() {
                let _ = write!(points, "{:.2},{:.2} ", px(*xv), py(*yv));
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_has_one_polyline_per_series() {
        let x = [0.0, 1.0, 2.0];
        let a = [0.0, 0.5, 1.0];
        let b = [1.0, f64::NAN, 0.0];
        let svg = line_plot(
            "P & F",
            "t",
            &x,
            &[
                Series { label: "a".into(), values: &a },
                Series { label: "b".into(), values: &b },
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("P &amp; F"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn ranges_are_rounded() {
        assert_eq!(nice_range(0.0, 400.0), (0.0, 400.0, 100.0));
        let (lo, hi, _) = nice_range(0.3, 0.3);
        assert!(lo < 0.3 && hi > 0.3);
        assert_eq!(label(-0.0), "0");
        assert_eq!(label(0.25), "0.25");
    }
}
