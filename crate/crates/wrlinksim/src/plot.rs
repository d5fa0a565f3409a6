//! Self-contained SVG rendering of a scenario run: cRTT and Δt versus
//! time, stacked, each with the fiber temperature overlaid on a right
//! axis. No plotting dependency; the output is deterministic.

use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::ScenarioSeries;
use crate::report::atomic_write;

const WIDTH: f64 = 960.0;
const PANEL_HEIGHT: f64 = 250.0;
const MARGIN_LEFT: f64 = 92.0;
const MARGIN_RIGHT: f64 = 76.0;
const MARGIN_TOP: f64 = 46.0;
const PANEL_GAP: f64 = 64.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// Cap on rendered points per trace; longer series are strided.
const MAX_POINTS: usize = 2000;

const FRAME_COLOR: &str = "#444444";
const TEMP_COLOR: &str = "#d62728";
const CRTT_COLOR: &str = "#1f77b4";
const DT_COLOR: &str = "#2ca02c";

struct Axis {
    min: f64,
    max: f64,
}

impl Axis {
    fn from_values<I: Iterator<Item = f64>>(values: I) -> Axis {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() || !max.is_finite() {
            return Axis { min: 0.0, max: 1.0 };
        }
        if min == max {
            // flat trace: open a unit band around it
            min -= 1.0;
            max += 1.0;
        }
        let pad = 0.05 * (max - min);
        Axis {
            min: min - pad,
            max: max + pad,
        }
    }

    fn scale(&self, v: f64, lo_px: f64, hi_px: f64) -> f64 {
        lo_px + (v - self.min) / (self.max - self.min) * (hi_px - lo_px)
    }

    /// Tick positions at a 1/2/5 decade step giving roughly `target` ticks.
    fn ticks(&self, target: usize) -> Vec<f64> {
        let span = self.max - self.min;
        let raw = span / target as f64;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&s| span / s <= target as f64)
            .unwrap_or(10.0 * mag);
        let first = (self.min / step).ceil() * step;
        let mut ticks = Vec::new();
        let mut t = first;
        while t <= self.max + 1e-9 * step {
            // snap tiny float residue so labels print cleanly
            ticks.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
            t += step;
        }
        ticks
    }
}

fn tick_label(v: f64, step_hint: f64) -> String {
    let decimals = if step_hint >= 1.0 {
        0
    } else {
        (-step_hint.log10().floor()) as usize
    };
    format!("{v:.decimals$}")
}

fn polyline(points: &[(f64, f64)], color: &str, width: f64) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    format!(
        r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{pts}"/>"#,
        pts = coords.join(" ")
    )
}

fn text(x: f64, y: f64, anchor: &str, extra: &str, body: &str) -> String {
    format!(r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}"{extra}>{body}</text>"#)
}

fn tick_line(x1: f64, y1: f64, x2: f64, y2: f64, color: &str) -> String {
    format!(r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}"/>"#)
}

struct Panel<'a> {
    title: &'a str,
    y_label: &'a str,
    y: Vec<f64>,
    color: &'a str,
}

/// Renders the run to an SVG string: top panel cRTT (µs), bottom panel
/// Δt (ps), both with fiber temperature (°C) on the right axis and time
/// in minutes along the bottom.
pub fn render_plot_svg(series: &ScenarioSeries) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InvalidConfig(
            "emit_plot_svg: series has no samples".into(),
        ));
    }
    let stride = (series.len() + MAX_POINTS - 1) / MAX_POINTS;
    let rows: Vec<_> = series.rows.iter().step_by(stride.max(1)).collect();
    let t_min: Vec<f64> = rows.iter().map(|r| r.sample.t_s / 60.0).collect();
    let temp: Vec<f64> = rows.iter().map(|r| r.sample.t_fiber_c).collect();

    let panels = [
        Panel {
            title: "corrected round-trip time",
            y_label: "cRTT [µs]",
            y: rows.iter().map(|r| r.sample.crtt_ps / 1e6).collect(),
            color: CRTT_COLOR,
        },
        Panel {
            title: "master/slave 1PPS offset",
            y_label: "Δt [ps]",
            y: rows.iter().map(|r| r.sample.dt_ps).collect(),
            color: DT_COLOR,
        },
    ];

    let x_axis = Axis::from_values(t_min.iter().copied());
    let temp_axis = Axis::from_values(temp.iter().copied());
    let height = MARGIN_TOP + 2.0 * PANEL_HEIGHT + PANEL_GAP + MARGIN_BOTTOM;
    let x_lo = MARGIN_LEFT;
    let x_hi = WIDTH - MARGIN_RIGHT;

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {height}" font-family="Helvetica, Arial, sans-serif" font-size="13">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect width="{WIDTH}" height="{height}" fill="white"/>"#
    ));
    svg.push_str(&text(
        WIDTH / 2.0,
        26.0,
        "middle",
        r#" font-size="17""#,
        &format!(
            "{} — cRTT and Δt vs optical fiber temperature",
            xml_escape(&series.label)
        ),
    ));

    for (idx, panel) in panels.iter().enumerate() {
        let y_top = MARGIN_TOP + idx as f64 * (PANEL_HEIGHT + PANEL_GAP);
        let y_bot = y_top + PANEL_HEIGHT;
        let y_axis = Axis::from_values(panel.y.iter().copied());

        svg.push_str(&format!(
            r#"<rect x="{x_lo}" y="{y_top}" width="{w}" height="{PANEL_HEIGHT}" fill="none" stroke="{FRAME_COLOR}"/>"#,
            w = x_hi - x_lo
        ));
        svg.push_str(&text(
            (x_lo + x_hi) / 2.0,
            y_top - 8.0,
            "middle",
            r#" font-size="14""#,
            panel.title,
        ));

        // x ticks (time, minutes)
        let x_ticks = x_axis.ticks(8);
        let x_step = x_ticks.get(1).map(|b| b - x_ticks[0]).unwrap_or(1.0);
        for &tx in &x_ticks {
            let px = x_axis.scale(tx, x_lo, x_hi);
            svg.push_str(&tick_line(px, y_bot, px, y_bot + 5.0, FRAME_COLOR));
            svg.push_str(&text(
                px,
                y_bot + 20.0,
                "middle",
                "",
                &tick_label(tx, x_step),
            ));
        }

        // left y ticks
        let y_ticks = y_axis.ticks(6);
        let y_step = y_ticks.get(1).map(|b| b - y_ticks[0]).unwrap_or(1.0);
        for &ty in &y_ticks {
            let py = y_axis.scale(ty, y_bot, y_top);
            svg.push_str(&tick_line(x_lo - 5.0, py, x_lo, py, FRAME_COLOR));
            svg.push_str(&text(
                x_lo - 9.0,
                py,
                "end",
                r#" dominant-baseline="middle""#,
                &tick_label(ty, y_step),
            ));
        }

        // right y ticks (fiber temperature)
        let t_ticks = temp_axis.ticks(6);
        let t_step = t_ticks.get(1).map(|b| b - t_ticks[0]).unwrap_or(1.0);
        for &tt in &t_ticks {
            let py = temp_axis.scale(tt, y_bot, y_top);
            svg.push_str(&tick_line(x_hi, py, x_hi + 5.0, py, TEMP_COLOR));
            svg.push_str(&text(
                x_hi + 9.0,
                py,
                "start",
                &format!(r#" dominant-baseline="middle" fill="{TEMP_COLOR}""#),
                &tick_label(tt, t_step),
            ));
        }

        // axis titles
        let ly = (y_top + y_bot) / 2.0;
        let lx = x_lo - 62.0;
        svg.push_str(&text(
            lx,
            ly,
            "middle",
            &format!(r#" transform="rotate(-90 {lx:.2} {ly:.2})""#),
            panel.y_label,
        ));
        let rx = x_hi + 56.0;
        svg.push_str(&text(
            rx,
            ly,
            "middle",
            &format!(r#" fill="{TEMP_COLOR}" transform="rotate(90 {rx:.2} {ly:.2})""#),
            "fiber temperature [°C]",
        ));
        svg.push_str(&text(
            (x_lo + x_hi) / 2.0,
            y_bot + 38.0,
            "middle",
            "",
            "time [min]",
        ));

        // traces: temperature behind, signal in front
        let temp_pts: Vec<(f64, f64)> = t_min
            .iter()
            .zip(&temp)
            .map(|(&x, &v)| (x_axis.scale(x, x_lo, x_hi), temp_axis.scale(v, y_bot, y_top)))
            .collect();
        svg.push_str(&polyline(&temp_pts, TEMP_COLOR, 1.0));
        let pts: Vec<(f64, f64)> = t_min
            .iter()
            .zip(&panel.y)
            .map(|(&x, &v)| (x_axis.scale(x, x_lo, x_hi), y_axis.scale(v, y_bot, y_top)))
            .collect();
        svg.push_str(&polyline(&pts, panel.color, 1.4));
        svg.push('\n');
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes the two-panel plot for a run to `path` atomically.
pub fn emit_plot_svg(series: &ScenarioSeries, path: impl AsRef<Path>) -> Result<()> {
    let svg = render_plot_svg(series)?;
    atomic_write(path.as_ref(), svg.as_bytes())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::WavelengthPlan;
    use crate::experiment::{run_scenario, Scenario};
    use crate::thermal::ChamberProfile;
    use crate::wrlink::NoiseModel;

    fn small_series() -> ScenarioSeries {
        let mut s = Scenario {
            noise: NoiseModel::zero(),
            ..Scenario::default()
        };
        s.profile = ChamberProfile::constant(-20.0, 100.0).unwrap();
        s.steady.window_s = 50.0;
        run_scenario(&s).unwrap()
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = render_plot_svg(&small_series()).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<svg").count(), 1);
        assert!(svg.contains("cRTT [µs]"));
        assert!(svg.contains("Δt [ps]"));
        assert!(svg.contains("fiber temperature [°C]"));
        assert!(svg.contains("time [min]"));
        // two panels × (temperature + signal) traces
        assert_eq!(svg.matches("<polyline").count(), 4);
    }

    #[test]
    fn flat_offset_renders_flat_polyline() {
        let mut s = Scenario {
            noise: NoiseModel::zero(),
            ..Scenario::default()
        };
        s.plan = WavelengthPlan::new(1550.0, 1550.0, 0.0, 0.0, "sym").unwrap();
        let series = run_scenario(&s).unwrap();
        let svg = render_plot_svg(&series).unwrap();
        // Δt trace: all y coordinates equal on the flat panel
        let last_poly = svg.rmatch_indices("<polyline").next().unwrap().0;
        let segment = &svg[last_poly..];
        let points = segment.split("points=\"").nth(1).unwrap();
        let points = &points[..points.find('"').unwrap()];
        let ys: Vec<&str> = points
            .split_whitespace()
            .map(|p| p.split(',').nth(1).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[0] == w[1]), "Δt trace not flat");
    }

    #[test]
    fn empty_series_is_rejected() {
        let empty = ScenarioSeries {
            label: "x".into(),
            sample_interval_s: 1.0,
            heat_start_s: None,
            rows: vec![],
        };
        assert!(render_plot_svg(&empty).is_err());
    }

    #[test]
    fn emit_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.svg");
        emit_plot_svg(&small_series(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("</svg>"));
    }
}
