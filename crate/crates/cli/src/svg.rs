//! A small SVG 1.1 plot writer: one panel, linear or logarithmic abscissa,
//! polylines and scatter dots, clipped to the axes box.

use std::fmt::Write;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

pub enum Layer {
    Line {
        points: Vec<(f64, f64)>,
        color: &'static str,
        width: f64,
    },
    Scatter {
        points: Vec<(f64, f64)>,
        color: &'static str,
        radius: f64,
    },
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub log_x: bool,
    pub layers: Vec<Layer>,
}

impl Plot {
    pub fn new(title: impl Into<String>, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self {
            title: title.into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_range,
            y_range,
            log_x: false,
            layers: Vec::new(),
        }
    }

    pub fn labels(mut self, x: &str, y: &str) -> Self {
        self.x_label = x.into();
        self.y_label = y.into();
        self
    }

    pub fn line(&mut self, points: Vec<(f64, f64)>, color: &'static str) {
        self.layers.push(Layer::Line {
            points,
            color,
            width: 1.5,
        });
    }

    pub fn scatter(&mut self, points: Vec<(f64, f64)>, color: &'static str) {
        self.layers.push(Layer::Scatter {
            points,
            color,
            radius: 1.2,
        });
    }

    fn x_coordinate(&self, x: f64) -> f64 {
        let (lo, hi, v) = if self.log_x {
            (self.x_range.0.log10(), self.x_range.1.log10(), x.log10())
        } else {
            (self.x_range.0, self.x_range.1, x)
        };
        MARGIN + (v - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn y_coordinate(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - MARGIN - (y - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN)
    }

    fn inside(&self, (x, y): (f64, f64)) -> bool {
        x.is_finite()
            && y.is_finite()
            && (!self.log_x || x > 0.0)
            && x >= self.x_range.0
            && x <= self.x_range.1
            && y >= self.y_range.0
            && y <= self.y_range.1
    }

    fn ticks(&self, range: (f64, f64), log: bool) -> Vec<f64> {
        if log {
            let (a, b) = (range.0.log10().ceil() as i32, range.1.log10().floor() as i32);
            return (a..=b).map(|k| 10f64.powi(k)).collect();
        }
        let span = range.1 - range.0;
        let raw = span / 5.0;
        let magnitude = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * magnitude)
            .find(|s| *s >= raw)
            .unwrap_or(raw);
        let first = (range.0 / step).ceil() as i64;
        let last = (range.1 / step + 1e-9).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let (left, right) = (MARGIN, WIDTH - MARGIN);
        let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(
            s,
            r#"<defs><clipPath id="panel"><rect x="{left}" y="{top}" width="{}" height="{}"/></clipPath></defs>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(&self.title)
        );
        for tick in self.ticks(self.x_range, self.log_x) {
            let x = self.x_coordinate(tick);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{top}" stroke="#e4e4e4"/>"##
            );
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
                bottom + 16.0,
                format_tick(tick)
            );
        }
        for tick in self.ticks(self.y_range, false) {
            let y = self.y_coordinate(tick);
            let _ = writeln!(
                s,
                r##"<line x1="{left}" y1="{y:.2}" x2="{right}" y2="{y:.2}" stroke="#e4e4e4"/>"##
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                left - 6.0,
                y + 4.0,
                format_tick(tick)
            );
        }
        let _ = writeln!(s, r#"<g clip-path="url(#panel)">"#);
        for layer in &self.layers {
            match layer {
                Layer::Line { points, color, width } => {
                    // Break the polyline at points that cannot be placed.
                    let mut segment: Vec<String> = Vec::new();
                    let flush = |segment: &mut Vec<String>, s: &mut String| {
                        if segment.len() > 1 {
                            let _ = writeln!(
                                s,
                                r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
                                segment.join(" ")
                            );
                        }
                        segment.clear();
                    };
                    for &(x, y) in points {
                        if x.is_finite() && y.is_finite() && (!self.log_x || x > 0.0) {
                            segment.push(format!("{:.2},{:.2}", self.x_coordinate(x), self.y_coordinate(y)));
                        } else {
                            flush(&mut segment, &mut s);
                        }
                    }
                    flush(&mut segment, &mut s);
                }
                Layer::Scatter { points, color, radius } => {
                    for &p in points.iter().filter(|p| self.inside(**p)) {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}"/>"#,
                            self.x_coordinate(p.0),
                            self.y_coordinate(p.1)
                        );
                    }
                }
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        s.push_str("</svg>\n");
        s
    }
}

fn format_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e3) {
        format!("{v:e}")
    } else {
        let text = format!("{v:.3}");
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
