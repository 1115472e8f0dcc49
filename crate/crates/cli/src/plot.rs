use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;

use crate::cache::write_atomic;
use crate::curve::{read_csv, CurveRow};
use crate::{usage, Failure, Outcome};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Log,
    Lin,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 56.0;

struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(scale: Scale, values: impl Iterator<Item = f64> + Clone, name: &str) -> Result<Axis, Failure> {
        if scale == Scale::Log && values.clone().any(|v| v <= 0.0) {
            return Err(usage(format!("log {name} axis needs positive values")));
        }
        let t = |v: f64| if scale == Scale::Log { v.log10() } else { v };
        let lo = values.clone().map(t).fold(f64::INFINITY, f64::min);
        let hi = values.map(t).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = match scale {
            Scale::Log => (lo.floor(), hi.ceil().max(lo.floor() + 1.0)),
            Scale::Lin => {
                let pad = if hi > lo {
                    0.05 * (hi - lo)
                } else {
                    0.5 * lo.abs().max(1.0)
                };
                (lo - pad, hi + pad)
            }
        };
        Ok(Axis { scale, lo, hi })
    }

    /// Position in [0, 1].
    fn unit(&self, v: f64) -> f64 {
        let t = if self.scale == Scale::Log { v.log10() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        match self.scale {
            Scale::Log => {
                let (lo, hi) = (self.lo as i32, self.hi as i32);
                (lo..=hi).map(|e| (10f64.powi(e), format!("1e{e}"))).collect()
            }
            Scale::Lin => {
                let step = nice_step((self.hi - self.lo) / 5.0);
                let first = (self.lo / step).ceil() as i64;
                let last = (self.hi / step).floor() as i64;
                let decimals = (-step.log10().floor()).max(0.0) as usize;
                (first..=last)
                    .map(|i| {
                        let v = i as f64 * step;
                        (v, format!("{v:.decimals$}"))
                    })
                    .collect()
            }
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let nice = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(rows: &[CurveRow], x_scale: Scale, y_scale: Scale) -> Result<String, Failure> {
    let x = Axis::new(x_scale, rows.iter().map(|r| r.eta), "eta")?;
    let y = Axis::new(y_scale, rows.iter().map(|r| r.f_eta), "f")?;
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |v: f64| LEFT + pw * x.unit(v);
    let py = |v: f64| TOP + ph * (1.0 - y.unit(v));

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">Casimir force coefficient f(η)</text>"#,
        WIDTH / 2.0
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for (v, label) in x.ticks() {
        let xp = px(v);
        let _ = writeln!(
            s,
            r#"<line x1="{xp:.2}" y1="{:.2}" x2="{xp:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + ph,
            TOP + ph + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            escape(&label)
        );
    }
    for (v, label) in y.ticks() {
        let yp = py(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{yp:.2}" x2="{LEFT}" y2="{yp:.2}" stroke="black"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            yp + 4.0,
            escape(&label)
        );
    }
    let xlabel = if x_scale == Scale::Log {
        "η = b a³ (log scale)"
    } else {
        "η = b a³"
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">f(η)</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.3},{:.3}", px(r.eta), py(r.f_eta)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn run(input: &Path, output: &Path, x_scale: Scale, y_scale: Scale) -> Outcome {
    let rows = read_csv(input)?;
    let svg = render(&rows, x_scale, y_scale)?;
    write_atomic(output, svg.as_bytes()).map_err(Failure::Numerical)
}
