use std::fmt::Write as _;
use std::str::FromStr;

use super::csv::format_significant;
use super::SweepRow;
use crate::error::{Error, Result};

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 600.0;

const FRAUNHOFER_COLOR: &str = "#1f77b4";
const FRESNEL_COLOR: &str = "#d62728";
const MAX_OCTAVES: i32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SvgStyle {
    #[default]
    Cartesian,
    Polar,
}

impl FromStr for SvgStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cartesian" => Ok(SvgStyle::Cartesian),
            "polar" => Ok(SvgStyle::Polar),
            other => Err(Error::invalid(format!("unknown svg style {other:?}"))),
        }
    }
}

struct Series {
    name: &'static str,
    label: &'static str,
    color: &'static str,
    array: bool,
    get: fn(&SweepRow) -> f64,
}

const SERIES: [Series; 4] = [
    Series { name: "dF_array", label: "Fraunhofer, array", color: FRAUNHOFER_COLOR, array: true, get: |r| r.df_array },
    Series { name: "dN_array", label: "Fresnel, array", color: FRESNEL_COLOR, array: true, get: |r| r.dn_array },
    Series { name: "dF_single", label: "Fraunhofer, single", color: FRAUNHOFER_COLOR, array: false, get: |r| r.df_single },
    Series { name: "dN_single", label: "Fresnel, single", color: FRESNEL_COLOR, array: false, get: |r| r.dn_single },
];

fn all_values(rows: &[SweepRow]) -> impl Iterator<Item = f64> + '_ {
    rows.iter().flat_map(|r| SERIES.iter().map(move |s| (s.get)(r)))
}

fn check_rows(rows: &[SweepRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::invalid("a plot needs at least 2 rows"));
    }
    let max = all_values(rows).fold(0.0, f64::max);
    if !(max > 0.0 && max.is_finite()) {
        return Err(Error::invalid("no positive finite distance to plot"));
    }
    Ok(max)
}

/// Pixel mapping of the Cartesian plot: linear angle, log2 distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianFrame {
    pub theta_min: f64,
    pub theta_max: f64,
    pub log2_min: i32,
    pub log2_max: i32,
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

impl CartesianFrame {
    pub fn new(rows: &[SweepRow]) -> Result<Self> {
        let max = check_rows(rows)?;
        let min_pos = all_values(rows).filter(|v| *v > 0.0).fold(f64::INFINITY, f64::min);
        let log2_max = max.log2().ceil() as i32;
        let mut log2_min = (min_pos.log2().floor() as i32).max(log2_max - MAX_OCTAVES);
        if log2_min >= log2_max {
            log2_min = log2_max - 1;
        }
        let theta_min = rows.iter().map(|r| r.theta_deg).fold(f64::INFINITY, f64::min);
        let theta_max = rows.iter().map(|r| r.theta_deg).fold(f64::NEG_INFINITY, f64::max);
        if theta_max <= theta_min {
            return Err(Error::invalid("rows span no angle range"));
        }
        Ok(Self { theta_min, theta_max, log2_min, log2_max, left: 90.0, right: 930.0, top: 60.0, bottom: 530.0 })
    }

    pub fn x_px(&self, theta_deg: f64) -> f64 {
        self.left + (theta_deg - self.theta_min) / (self.theta_max - self.theta_min) * (self.right - self.left)
    }

    pub fn theta_at_x(&self, px: f64) -> f64 {
        self.theta_min + (px - self.left) / (self.right - self.left) * (self.theta_max - self.theta_min)
    }

    /// Non-positive and very small values sit on the bottom axis.
    pub fn y_px(&self, value: f64) -> f64 {
        let lo = self.log2_min as f64;
        let l = if value > 0.0 { value.log2().max(lo) } else { lo };
        self.bottom - (l - lo) / (self.log2_max as f64 - lo) * (self.bottom - self.top)
    }

    pub fn value_at_y(&self, px: f64) -> f64 {
        let lo = self.log2_min as f64;
        let l = lo + (self.bottom - px) / (self.bottom - self.top) * (self.log2_max as f64 - lo);
        l.exp2()
    }
}

/// Pixel mapping of the polar plot; the array axis runs horizontally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarFrame {
    pub cx: f64,
    pub cy: f64,
    /// Pixels per wavelength.
    pub scale: f64,
    pub max_radius: f64,
}

impl PolarFrame {
    pub fn new(rows: &[SweepRow]) -> Result<Self> {
        let max = check_rows(rows)?;
        let max_radius = 250.0;
        Ok(Self { cx: WIDTH / 2.0, cy: 310.0, scale: max_radius / max, max_radius })
    }

    pub fn point(&self, d: f64, theta_deg: f64, upper: bool) -> (f64, f64) {
        let (s, c) = theta_deg.to_radians().sin_cos();
        let y = self.scale * d * s;
        (self.cx + self.scale * d * c, if upper { self.cy - y } else { self.cy + y })
    }
}

fn points_attr(points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut s = String::new();
    for (x, y) in points {
        if !s.is_empty() {
            s.push(' ');
        }
        let _ = write!(s, "{x:.2},{y:.2}");
    }
    s
}

fn polyline(out: &mut String, series: &Series, dash: Option<&str>, points: String) {
    let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
    let _ = writeln!(
        out,
        "  <polyline data-series=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"{dash} points=\"{points}\"/>",
        series.name, series.color
    );
}

fn legend(out: &mut String, single_dash: &str) {
    for (i, s) in SERIES.iter().enumerate() {
        let y = 24.0 + 16.0 * i as f64;
        let dash = if s.array { String::new() } else { format!(" stroke-dasharray=\"{single_dash}\"") };
        let _ = writeln!(
            out,
            "  <line x1=\"720\" y1=\"{y}\" x2=\"760\" y2=\"{y}\" stroke=\"{}\" stroke-width=\"1.6\"{dash}/>",
            s.color
        );
        let _ = writeln!(out, "  <text x=\"768\" y=\"{}\" font-size=\"12\">{}</text>", y + 4.0, s.label);
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">"
    );
    let _ = writeln!(out, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
}

fn cartesian(rows: &[SweepRow]) -> Result<String> {
    let f = CartesianFrame::new(rows)?;
    let mut out = String::new();
    header(&mut out);
    let grid = "stroke=\"#dddddd\" stroke-width=\"1\"";

    let first_tick = (f.theta_min / 15.0).ceil() as i64;
    let last_tick = (f.theta_max / 15.0).floor() as i64;
    for k in first_tick..=last_tick {
        let t = 15.0 * k as f64;
        let x = f.x_px(t);
        let _ = writeln!(out, "  <line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" {grid}/>", f.top, f.bottom);
        let _ = writeln!(
            out,
            "  <text x=\"{x:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            f.bottom + 18.0,
            format_significant(t, 6)
        );
    }
    let octaves = f.log2_max - f.log2_min;
    let step = ((octaves + 11) / 12).max(1);
    let mut e = f.log2_max;
    while e >= f.log2_min {
        let v = (e as f64).exp2();
        let y = f.y_px(v);
        let _ = writeln!(out, "  <line x1=\"{}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" {grid}/>", f.left, f.right);
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            f.left - 6.0,
            y + 4.0,
            format_significant(v, 6)
        );
        e -= step;
    }
    let axis = "stroke=\"black\" stroke-width=\"1\"";
    let _ = writeln!(out, "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {axis}/>", f.left, f.bottom, f.right, f.bottom);
    let _ = writeln!(out, "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {axis}/>", f.left, f.top, f.left, f.bottom);
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">theta (deg)</text>",
        (f.left + f.right) / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"22\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 22 {})\">distance / lambda (log2)</text>",
        (f.top + f.bottom) / 2.0,
        (f.top + f.bottom) / 2.0
    );

    for s in &SERIES {
        let pts = points_attr(rows.iter().map(|r| (f.x_px(r.theta_deg), f.y_px((s.get)(r)))));
        polyline(&mut out, s, (!s.array).then_some("6,4"), pts);
    }
    legend(&mut out, "6,4");
    out.push_str("</svg>\n");
    Ok(out)
}

fn polar(rows: &[SweepRow]) -> Result<String> {
    let f = PolarFrame::new(rows)?;
    let max = f.max_radius / f.scale;
    let mut out = String::new();
    header(&mut out);

    let ring = 2f64.powf((max / 4.0).log2().floor());
    let mut r = ring;
    while r <= max * 1.0001 {
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{:.2}\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            f.cx,
            f.cy,
            r * f.scale
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{}\" font-size=\"11\" fill=\"#666666\">{}</text>",
            f.cx + r * f.scale + 2.0,
            f.cy - 4.0,
            format_significant(r, 6)
        );
        r += ring;
    }
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{}\" x2=\"{:.2}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        f.cx - f.max_radius - 10.0,
        f.cy,
        f.cx + f.max_radius + 10.0,
        f.cy
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{}\" font-size=\"12\">array axis</text>",
        f.cx + f.max_radius + 14.0,
        f.cy + 4.0
    );

    for s in &SERIES {
        let upper = rows.iter().map(|r| f.point((s.get)(r), r.theta_deg, true));
        let lower = rows.iter().rev().map(|r| f.point((s.get)(r), r.theta_deg, false));
        let first = f.point((s.get)(&rows[0]), rows[0].theta_deg, true);
        let pts = points_attr(upper.chain(lower).chain(std::iter::once(first)));
        polyline(&mut out, s, (!s.array).then_some("2,3"), pts);
    }
    legend(&mut out, "2,3");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders the four boundary curves. Distances are plotted as given.
pub fn to_svg(rows: &[SweepRow], style: SvgStyle) -> Result<String> {
    match style {
        SvgStyle::Cartesian => cartesian(rows),
        SvgStyle::Polar => polar(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::sweep;
    use crate::model::ApertureSpec;

    fn rows(a: f64, steps: usize) -> Vec<SweepRow> {
        sweep(&ApertureSpec::normalized(a).unwrap(), 0.0, 180.0, steps).unwrap()
    }

    fn polylines(svg: &str) -> Vec<(String, Vec<(f64, f64)>)> {
        svg.lines()
            .filter(|l| l.contains("<polyline"))
            .map(|l| {
                let name = l.split("data-series=\"").nth(1).unwrap().split('"').next().unwrap().to_string();
                let pts = l.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
                let pts = pts
                    .split(' ')
                    .map(|p| {
                        let (x, y) = p.split_once(',').unwrap();
                        (x.parse().unwrap(), y.parse().unwrap())
                    })
                    .collect();
                (name, pts)
            })
            .collect()
    }

    #[test]
    fn cartesian_structure() {
        let rows = rows(1.0, 1801);
        let svg = to_svg(&rows, SvgStyle::Cartesian).unwrap();
        assert!(svg.contains("viewBox=\"0 0 960 600\""));
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg.matches("<path").count(), 0);
        let lines = polylines(&svg);
        for (name, pts) in &lines {
            assert_eq!(pts.len(), rows.len());
            let dashed = svg.lines().any(|l| l.contains(&format!("\"{name}\"")) && l.contains("dasharray"));
            assert_eq!(dashed, name.ends_with("single"), "{name}");
        }

        let frame = CartesianFrame::new(&rows).unwrap();
        let top = lines.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)).fold(f64::INFINITY, f64::min);
        let v = frame.value_at_y(top);
        assert!((v - 7.97).abs() < 0.01, "{v}");
        assert_eq!((frame.log2_max as f64).exp2(), 8.0);
        for t in [0, 15, 45, 90, 180] {
            assert!(svg.contains(&format!(">{t}</text>")), "{t}");
        }
    }

    #[test]
    fn frame_mapping_round_trips() {
        let frame = CartesianFrame::new(&rows(4.5, 91)).unwrap();
        for v in [0.05, 1.0, 3.7, 161.0] {
            let back = frame.value_at_y(frame.y_px(v));
            assert!((back / v - 1.0).abs() < 1e-12, "{v} -> {back} ({frame:?})");
        }
        assert!((frame.theta_at_x(frame.x_px(33.3)) - 33.3).abs() < 1e-12);
        assert_eq!(frame.y_px(0.0), frame.bottom);
    }

    #[test]
    fn polar_lobes_closed_and_symmetric() {
        let rows = rows(4.5, 721);
        let svg = to_svg(&rows, SvgStyle::Polar).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg.matches("<path").count(), 0);
        let frame = PolarFrame::new(&rows).unwrap();
        for (name, pts) in polylines(&svg) {
            assert_eq!(pts.first(), pts.last(), "{name}");
            for &(x, y) in &pts {
                let (mx, my) = (2.0 * frame.cx - x, y);
                let hit = pts.iter().any(|&(u, v)| (u - mx).abs() < 0.02 && (v - my).abs() < 0.02);
                assert!(hit, "{name}: ({x}, {y}) has no mirror");
                let (ux, uy) = (x, 2.0 * frame.cy - y);
                assert!(pts.iter().any(|&(u, v)| (u - ux).abs() < 0.02 && (v - uy).abs() < 0.02));
            }
            let dotted = svg.lines().any(|l| l.contains(&format!("\"{name}\"")) && l.contains("stroke-dasharray=\"2,3\""));
            assert_eq!(dotted, name.ends_with("single"));
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(to_svg(&[], SvgStyle::Cartesian).is_err());
        assert!(to_svg(&rows(1.0, 3)[..1], SvgStyle::Polar).is_err());
        assert_eq!("Polar".parse::<SvgStyle>().unwrap(), SvgStyle::Polar);
        assert!("bars".parse::<SvgStyle>().is_err());
    }
}
