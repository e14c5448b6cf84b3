//! Frozen parameter sets for the seven reference figures, their CSV datasets,
//! and a minimal SVG line-plot renderer.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::correlations::{correlation_timeseries, CorrelationSample, Engine, TimeGrid};
use crate::error::{Error, Result};
use crate::limits::asymptotic_correlations;
use crate::model::ModelParams;
use crate::run::{fmt_value, samples_to_csv};
use crate::states::{mixture_state, BellDiagonalState};

pub const T_MAX: f64 = 1300.0;
pub const STEPS: usize = 1301;
pub const FLIP_PROBABILITY: f64 = 0.005;
pub const N_SPINS: usize = 1001;
pub const X1: f64 = 100.0;
/// Initial position of B in the distinct-position figures.
pub const X_B_DISTINCT: f64 = -200.0;

/// Number of c3 rows in the surface figures, evenly spaced over [-0.96, 0.96].
pub const SURFACE_C3_POINTS: usize = 81;

pub const FIG4_C3: [f64; 3] = [-0.6, 0.5, 0.7];
pub const FIG7_C3: [f64; 4] = [-0.8, -0.5, 0.2, 0.7];

const SURFACE_HEADER: &str = "c3,t,C,D,I,J,absF1,absF2";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = FigureId::ALL.iter().position(|x| x == self).unwrap() + 1;
        write!(f, "fig{i}")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure '{s}' (expected fig1..fig7)")))
    }
}

/// One emitted file: `name` is a bare file name, `csv` its full contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub datasets: Vec<Dataset>,
    pub plots: Vec<Plot>,
}

/// Same-position geometry: both particles start at the origin.
pub fn same_position_params() -> ModelParams {
    params_with_xb(0.0)
}

pub fn distinct_position_params() -> ModelParams {
    params_with_xb(X_B_DISTINCT)
}

fn params_with_xb(x_b: f64) -> ModelParams {
    let a = ModelParams::coupling_from_flip_probability(FLIP_PROBABILITY).expect("valid q");
    ModelParams::new(N_SPINS, a, X1, 0.0, x_b).expect("valid figure parameters")
}

pub fn figure_grid() -> TimeGrid {
    TimeGrid::uniform(T_MAX, STEPS).expect("valid grid")
}

pub fn surface_c3_values() -> Vec<f64> {
    let half = (SURFACE_C3_POINTS - 1) as f64 / 2.0;
    (0..SURFACE_C3_POINTS).map(|i| 0.96 * (i as f64 - half) / half).collect()
}

/// c3 ∈ {-0.99, -0.98, …, 0.99}.
pub fn asymptote_c3_values() -> Vec<f64> {
    (-99..=99).map(|i| i as f64 / 100.0).collect()
}

fn series(params: &ModelParams, state: &BellDiagonalState) -> Result<Vec<CorrelationSample>> {
    correlation_timeseries(params, state, Engine::Limit, &figure_grid())
}

/// Per-c3 time series, in c3 order.
type Slices = Vec<(f64, Vec<CorrelationSample>)>;

fn long_format(params: &ModelParams, c3s: &[f64]) -> Result<(String, Slices)> {
    let mut out = String::from(SURFACE_HEADER);
    out.push('\n');
    let mut all = Vec::with_capacity(c3s.len());
    for &c3 in c3s {
        let samples = series(params, &mixture_state(c3, 1)?)?;
        for s in &samples {
            let _ = writeln!(
                out,
                "{c3},{},{},{},{},{},{},{}",
                s.t,
                fmt_value(s.concurrence),
                fmt_value(s.discord),
                fmt_value(s.mutual_info),
                fmt_value(s.classical_corr),
                fmt_value(s.abs_f1),
                fmt_value(s.abs_f2),
            );
        }
        all.push((c3, samples));
    }
    Ok((out, all))
}

fn curve(label: impl Into<String>, samples: &[CorrelationSample], pick: impl Fn(&CorrelationSample) -> f64) -> Series {
    Series { label: label.into(), points: samples.iter().map(|s| (s.t, pick(s))).collect() }
}

fn time_plot(name: &str, title: &str, y_label: &str, series: Vec<Series>) -> Plot {
    Plot {
        name: name.into(),
        title: title.into(),
        x_label: "t".into(),
        y_label: y_label.into(),
        series,
    }
}

/// Surfaces are drawn as a family of time slices at a handful of c3 values.
fn slice_plots(prefix: &str, all: &[(f64, Vec<CorrelationSample>)]) -> Vec<Plot> {
    let picked: Vec<_> = all.iter().step_by(10).collect();
    let c = picked.iter().map(|(c3, s)| curve(format!("c3={c3:.3}"), s, |x| x.concurrence)).collect();
    let d = picked.iter().map(|(c3, s)| curve(format!("c3={c3:.3}"), s, |x| x.discord)).collect();
    vec![
        time_plot(&format!("{prefix}_concurrence"), "Concurrence slices", "C", c),
        time_plot(&format!("{prefix}_discord"), "Discord slices", "D", d),
    ]
}

pub fn reproduce_figure(id: FigureId) -> Result<FigureOutput> {
    let same = same_position_params();
    let distinct = distinct_position_params();
    let mut datasets = Vec::new();
    let mut plots = Vec::new();
    match id {
        FigureId::Fig1 | FigureId::Fig5 => {
            let (params, states) = if id == FigureId::Fig1 {
                (&same, [("phi_plus", BellDiagonalState::phi_plus()), ("phi_minus", BellDiagonalState::phi_minus())])
            } else {
                (&distinct, [("phi_plus", BellDiagonalState::phi_plus()), ("psi_plus", BellDiagonalState::psi_plus())])
            };
            let mut curves = Vec::new();
            for (tag, state) in states {
                let samples = series(params, &state)?;
                datasets.push(Dataset { name: format!("{id}_{tag}.csv"), csv: samples_to_csv(&samples) });
                curves.push(curve(format!("C {tag}"), &samples, |s| s.concurrence));
                curves.push(curve(format!("D {tag}"), &samples, |s| s.discord));
            }
            plots.push(time_plot(&id.to_string(), "Bell-state dynamics", "C, D", curves));
        }
        FigureId::Fig2 => {
            let mut csv = String::from("c3,C0,Cinf,D0,Dinf\n");
            let mut cols: [Vec<(f64, f64)>; 4] = Default::default();
            for c3 in asymptote_c3_values() {
                let a = asymptotic_correlations(c3)?;
                let vals = [a.concurrence_initial, a.concurrence_final, a.discord_initial, a.discord_final];
                let _ = write!(csv, "{c3}");
                for (col, v) in cols.iter_mut().zip(vals) {
                    let _ = write!(csv, ",{}", fmt_value(v));
                    col.push((c3, v));
                }
                csv.push('\n');
            }
            datasets.push(Dataset { name: "fig2.csv".into(), csv });
            let labels = ["C(0)", "C(inf)", "D(0)", "D(inf)"];
            plots.push(Plot {
                name: "fig2".into(),
                title: "Initial and asymptotic correlations".into(),
                x_label: "c3".into(),
                y_label: "C, D".into(),
                series: labels
                    .iter()
                    .zip(cols)
                    .map(|(l, points)| Series { label: (*l).into(), points })
                    .collect(),
            });
        }
        FigureId::Fig3 | FigureId::Fig6 => {
            let params = if id == FigureId::Fig3 { &same } else { &distinct };
            let (csv, all) = long_format(params, &surface_c3_values())?;
            datasets.push(Dataset { name: format!("{id}_surface.csv"), csv });
            plots.extend(slice_plots(&id.to_string(), &all));
        }
        FigureId::Fig4 | FigureId::Fig7 => {
            let (params, c3s): (_, &[f64]) =
                if id == FigureId::Fig4 { (&same, &FIG4_C3) } else { (&distinct, &FIG7_C3) };
            let (csv, all) = long_format(params, c3s)?;
            datasets.push(Dataset { name: format!("{id}.csv"), csv });
            let curves = all.iter().map(|(c3, s)| curve(format!("c3={c3}"), s, |x| x.discord)).collect();
            plots.push(time_plot(&id.to_string(), "Discord", "D", curves));
        }
    }
    Ok(FigureOutput { datasets, plots })
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Standalone SVG with axes, tick labels and a legend.
pub fn render_svg(plot: &Plot) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const L: f64 = 70.0;
    const R: f64 = 170.0;
    const T: f64 = 40.0;
    const B: f64 = 55.0;

    let pts = plot.series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    y0 = y0.min(0.0);
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let (pw, ph) = (W - L - R, H - T - B);
    let sx = |x: f64| L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| T + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, L + pw / 2.0, escape(&plot.title));
    let _ = writeln!(s, r#"<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(fx),
            T + ph + 18.0,
            tick(fx)
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, L - 6.0, sy(fy) + 4.0, tick(fy));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, L + pw / 2.0, H - 12.0, escape(&plot.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        T + ph / 2.0,
        T + ph / 2.0,
        escape(&plot.y_label)
    );
    for (k, series) in plot.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for (i, &(x, y)) in series.points.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, sx(x), sy(y));
        }
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
        let ly = T + 14.0 + 18.0 * k as f64;
        let lx = W - R + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 22.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 28.0, ly + 4.0, escape(&series.label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 { "0".into() } else { format!("{r}") }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
