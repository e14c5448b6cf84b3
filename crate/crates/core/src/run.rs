//! Experiment drivers behind the CLI: time-series CSV, exact-vs-limit engine
//! comparison and the analytic critical-time report.

use std::fmt::{self, Write as _};

use log::{debug, info};

use crate::config::RunConfig;
use crate::correlations::{correlation_timeseries, decoherence_factors, CorrelationSample, Engine, TimeGrid};
use crate::error::{Error, Result};
use crate::limits::{
    asymptotic_correlations, discord_sudden_change_time, limit_f_single, second_period_change_time,
    sudden_death_time,
};
use crate::model::{exact_f_pair, exact_f_single, ModelParams};

pub const CSV_HEADER: &str = "t,C,D,I,J,absF1,absF2";

/// `{:.15e}`: 16 significant digits, locale-free.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.15e}")
}

pub fn samples_to_csv(samples: &[CorrelationSample]) -> String {
    let mut out = String::with_capacity(128 * (samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t,
            fmt_value(s.concurrence),
            fmt_value(s.discord),
            fmt_value(s.mutual_info),
            fmt_value(s.classical_corr),
            fmt_value(s.abs_f1),
            fmt_value(s.abs_f2),
        );
    }
    out
}

pub fn timeseries(cfg: &RunConfig) -> Result<Vec<CorrelationSample>> {
    let grid = cfg.grid()?;
    let state = cfg.initial_state()?;
    info!(
        "evolving c = ({}, {}, {}) with engine {} over {} points",
        state.c1(),
        state.c2(),
        state.c3(),
        cfg.engine.name(),
        grid.points().len()
    );
    correlation_timeseries(&cfg.params, &state, cfg.engine, &grid)
}

pub fn run_timeseries(cfg: &RunConfig) -> Result<String> {
    Ok(samples_to_csv(&timeseries(cfg)?))
}

/// Log-domain deviation of the exact factor from its limit over a time grid.
///
/// Points where `ln|f|_limit = 0` cannot carry a relative deviation and are
/// summarized by the absolute `|ln|f|_exact|` instead.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeviationStats {
    pub max_relative: f64,
    pub max_relative_at: Option<f64>,
    pub relative_points: usize,
    pub max_absolute: f64,
    pub absolute_points: usize,
}

impl DeviationStats {
    fn push(&mut self, t: f64, exact: f64, limit: f64) {
        let (le, ll) = (exact.ln(), limit.ln());
        if ll == 0.0 {
            self.absolute_points += 1;
            self.max_absolute = self.max_absolute.max(le.abs());
        } else {
            self.relative_points += 1;
            let rel = ((le - ll) / ll).abs();
            if rel > self.max_relative || self.max_relative_at.is_none() {
                self.max_relative = rel;
                self.max_relative_at = Some(t);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineComparison {
    pub limit_engine: Engine,
    pub single: DeviationStats,
    pub f1: DeviationStats,
    pub f2: DeviationStats,
}

pub fn compare_engines(params: &ModelParams, limit_engine: Engine, grid: &TimeGrid) -> Result<EngineComparison> {
    params.validate()?;
    if limit_engine == Engine::Exact {
        return Err(Error::UnsupportedConfiguration("compare needs a limit engine".into()));
    }
    let mut report = EngineComparison {
        limit_engine,
        single: DeviationStats::default(),
        f1: DeviationStats::default(),
        f2: DeviationStats::default(),
    };
    for &t in grid.points() {
        let exact = exact_f_pair(params, t);
        let limit = decoherence_factors(params, limit_engine, t)?;
        report.single.push(t, exact_f_single(params, t), limit_f_single(params, t));
        report.f1.push(t, exact.abs_f1(), limit.abs_f1());
        report.f2.push(t, exact.abs_f2(), limit.abs_f2());
    }
    debug!("engine comparison: {report:?}");
    Ok(report)
}

pub fn compare_config(cfg: &RunConfig) -> Result<EngineComparison> {
    let engine = if cfg.engine == Engine::Exact { Engine::Limit } else { cfg.engine };
    compare_engines(&cfg.params, engine, &cfg.grid()?)
}

impl fmt::Display for EngineComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "limit_engine={}", self.limit_engine.name())?;
        for (name, s) in [("f_single", &self.single), ("f1", &self.f1), ("f2", &self.f2)] {
            match s.max_relative_at {
                Some(t) => writeln!(f, "{name}.max_rel_log_dev={} at t={t}", fmt_value(s.max_relative))?,
                None => writeln!(f, "{name}.max_rel_log_dev=none")?,
            }
            writeln!(f, "{name}.rel_points={}", s.relative_points)?;
            writeln!(f, "{name}.max_abs_log_dev_where_limit_unity={}", fmt_value(s.max_absolute))?;
            writeln!(f, "{name}.abs_points={}", s.absolute_points)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTimes {
    pub c3: f64,
    pub same_position: bool,
    pub sudden_death: Option<f64>,
    pub discord_change: Option<f64>,
    pub second_period_change: Option<f64>,
}

/// Analytic critical times of the mixture `c1 = ±1, c2 = ∓c3` in the given geometry.
pub fn critical_times(params: &ModelParams, c3: f64) -> Result<CriticalTimes> {
    params.validate()?;
    let same = params.same_position();
    let mut out = CriticalTimes {
        c3,
        same_position: same,
        sudden_death: None,
        discord_change: None,
        second_period_change: None,
    };
    if same {
        out.sudden_death = sudden_death_time(params, c3)?;
        out.discord_change = discord_sudden_change_time(params, c3)?;
    } else if c3 != 0.0 {
        out.second_period_change = second_period_change_time(params, c3)?;
    } else {
        asymptotic_correlations(c3)?;
    }
    Ok(out)
}

impl fmt::Display for CriticalTimes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |t: Option<f64>| t.map_or_else(|| "none".to_string(), fmt_value);
        writeln!(f, "c3={}", self.c3)?;
        if self.same_position {
            writeln!(f, "geometry=same-position")?;
            writeln!(f, "sudden_death_time={}", show(self.sudden_death))?;
            writeln!(f, "discord_sudden_change_time={}", show(self.discord_change))?;
            if let Ok(a) = asymptotic_correlations(self.c3) {
                writeln!(f, "C_0={}", fmt_value(a.concurrence_initial))?;
                writeln!(f, "C_inf={}", fmt_value(a.concurrence_final))?;
                writeln!(f, "D_0={}", fmt_value(a.discord_initial))?;
                writeln!(f, "D_inf={}", fmt_value(a.discord_final))?;
            }
        } else {
            writeln!(f, "geometry=distinct-positions")?;
            writeln!(f, "second_period_change_time={}", show(self.second_period_change))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    const FIG1: &str = "q=0.005\nN=1001\nx1=100\nxN=1100\nstate=phi+\nt_max=1300\nsteps=1301\n";

    #[test]
    fn csv_layout() {
        let cfg = parse_config(FIG1).unwrap();
        let csv = run_timeseries(&cfg).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 7);
        assert_eq!(first[0], "0");
        assert_eq!(first[1], "1.000000000000000e0");
        assert_eq!(csv.lines().count(), 1302);
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn plateau_before_entry() {
        let cfg = parse_config(FIG1).unwrap();
        for s in timeseries(&cfg).unwrap().iter().filter(|s| s.t < 100.0) {
            assert_eq!((s.concurrence, s.discord), (1.0, 1.0));
        }
        let psi = parse_config(&FIG1.replace("phi+", "psi+")).unwrap();
        for s in timeseries(&psi).unwrap() {
            assert!((s.concurrence - 1.0).abs() < 1e-12 && (s.discord - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn first_zero_concurrence_row() {
        let cfg = parse_config(&FIG1.replace("state=phi+", "state=mixture\nc3=0.5")).unwrap();
        let first_zero = timeseries(&cfg).unwrap().into_iter().find(|s| s.concurrence == 0.0).unwrap();
        assert_eq!(first_zero.t, 210.0);
    }

    #[test]
    fn mismatched_engine_is_a_runtime_error() {
        let cfg = parse_config(&format!("{FIG1}xB=-200\nengine=limit-same\n")).unwrap();
        let err = run_timeseries(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn compare_reports_all_factors() {
        let cfg = parse_config(FIG1).unwrap();
        let report = compare_config(&cfg).unwrap();
        assert!(report.f2.max_relative < 0.01);
        assert!(report.single.max_relative < 0.01);
        assert_eq!(report.f1.relative_points, 0);
        assert_eq!(report.f1.absolute_points, 1301);
        assert_eq!(report.f1.max_absolute, 0.0);
        let text = report.to_string();
        assert!(text.contains("f2.max_rel_log_dev="));

        // strong coupling: reported, no threshold
        let strong = parse_config("q=0.2\nN=10\nx1=100\nstate=phi+\nt_max=200\nsteps=201\n").unwrap();
        let report = compare_config(&strong).unwrap();
        assert!(report.f2.max_relative > 0.01);
    }

    #[test]
    fn critical_time_report() {
        let cfg = parse_config(FIG1).unwrap();
        let ct = critical_times(&cfg.params, 0.7).unwrap();
        assert!((ct.discord_change.unwrap() - 143.5).abs() < 0.05);
        assert!(ct.to_string().contains("D_inf="));
        let mut p5 = cfg.params.clone();
        p5.x_b = -200.0;
        let ct = critical_times(&p5, -0.8).unwrap();
        assert!((ct.second_period_change.unwrap() - 189.2).abs() < 0.05);
        assert!(critical_times(&cfg.params, 1.5).is_err());
    }
}
