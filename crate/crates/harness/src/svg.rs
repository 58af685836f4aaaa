//! Minimal SVG charts: axes with ticks, points, lines, shaded bands.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

/// A single chart with linear axes over `[x0, x1] × [y0, y1]`.
pub struct Chart {
    x: (f64, f64),
    y: (f64, f64),
    body: String,
    legend: Vec<(String, String)>,
}

/// Range covering `values` with a small margin; degenerate ranges widen.
pub fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Self { x, y, body: String::new(), legend: Vec::new() }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    pub fn points(&mut self, points: &[(f64, f64)], radius: f64, color: &str, label: &str) {
        for &(x, y) in points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}"/>"#,
                self.px(x),
                self.py(y)
            );
        }
        self.legend.push((label.to_string(), color.to_string()));
    }

    pub fn line(&mut self, points: &[(f64, f64)], color: &str, label: &str) {
        let path: Vec<String> = points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        self.legend.push((label.to_string(), color.to_string()));
    }

    /// Vertical band `x0 <= x <= x1` across the plot area.
    pub fn band(&mut self, x0: f64, x1: f64, color: &str, label: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{MARGIN_TOP}" width="{:.2}" height="{}" fill="{color}" fill-opacity="0.25"/>"#,
            b - a,
            HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        );
        self.legend.push((label.to_string(), color.to_string()));
    }

    pub fn vline(&mut self, x: f64, color: &str, label: &str) {
        let px = self.px(x);
        let _ = writeln!(
            self.body,
            r#"<line x1="{px:.2}" y1="{MARGIN_TOP}" x2="{px:.2}" y2="{}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            HEIGHT - MARGIN_BOTTOM
        );
        self.legend.push((label.to_string(), color.to_string()));
    }

    pub fn bar(&mut self, x0: f64, x1: f64, height: f64, color: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let (top, base) = (self.py(height), self.py(self.y.0.max(0.0)));
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
            b - a,
            (base - top).max(0.0)
        );
    }

    pub fn add_legend(&mut self, label: &str, color: &str) {
        self.legend.push((label.to_string(), color.to_string()));
    }

    pub fn label_x(&mut self, x: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            self.px(x),
            HEIGHT - MARGIN_BOTTOM + 28.0,
            escape(text)
        );
    }

    pub fn render(&self, title: &str, x_label: &str, y_label: &str, x_ticks: bool) -> String {
        let mut out = format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
        );
        out.push('\n');
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let (left, right, top, bottom) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT, MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        let _ = writeln!(
            out,
            r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        if x_ticks {
            for t in ticks(self.x.0, self.x.1) {
                let px = self.px(t);
                let _ = writeln!(out, r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{}" stroke="black"/>"#, bottom + 5.0);
                let _ = writeln!(
                    out,
                    r#"<text x="{px:.2}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
                    bottom + 18.0,
                    format_tick(t)
                );
            }
        }
        for t in ticks(self.y.0, self.y.1) {
            let py = self.py(t);
            let _ = writeln!(out, r#"<line x1="{}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/>"#, left - 5.0);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                left - 8.0,
                py + 4.0,
                format_tick(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            HEIGHT - 10.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            escape(y_label)
        );
        out.push_str(&self.body);
        for (i, (label, color)) in self.legend.iter().filter(|(l, _)| !l.is_empty()).enumerate() {
            let y = top + 14.0 + 16.0 * i as f64;
            let _ = writeln!(out, r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#, right - 170.0, y - 9.0);
            let _ = writeln!(out, r#"<text x="{}" y="{y}" font-size="11">{}</text>"#, right - 155.0, escape(label));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn format_tick(t: f64) -> String {
    if t == 0.0 {
        "0".to_string()
    } else if t.abs() >= 1e4 || t.abs() < 1e-3 {
        format!("{t:.0e}")
    } else {
        let s = format!("{t:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}
