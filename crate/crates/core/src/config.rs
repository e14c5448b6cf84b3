//! Line-oriented `key=value` run configuration.
//!
//! ```text
//! # Φ+ through a 1001-spin array
//! N=1001
//! q=0.005
//! x1=100
//! xN=1100
//! state=phi+
//! t_max=1300
//! steps=1301
//! ```
//!
//! `#` starts a comment. Either `q` (exact spin-flip probability, `q = sin²a`) or
//! `a` (coupling angle) is required, and either `xN` or `spacing` may be given.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use crate::correlations::{Engine, TimeGrid};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::states::{make_bell_diagonal, mixture_state, BellDiagonalState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialStateSpec {
    Bell(BellState),
    BellDiagonal { c1: f64, c2: f64, c3: f64 },
    Mixture { c3: f64, sign: i8 },
}

impl InitialStateSpec {
    pub fn build(&self) -> Result<BellDiagonalState> {
        match *self {
            InitialStateSpec::Bell(BellState::PhiPlus) => Ok(BellDiagonalState::phi_plus()),
            InitialStateSpec::Bell(BellState::PhiMinus) => Ok(BellDiagonalState::phi_minus()),
            InitialStateSpec::Bell(BellState::PsiPlus) => Ok(BellDiagonalState::psi_plus()),
            InitialStateSpec::Bell(BellState::PsiMinus) => Ok(BellDiagonalState::psi_minus()),
            InitialStateSpec::BellDiagonal { c1, c2, c3 } => make_bell_diagonal(c1, c2, c3),
            InitialStateSpec::Mixture { c3, sign } => mixture_state(c3, sign),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub state: InitialStateSpec,
    pub engine: Engine,
    pub t_max: f64,
    pub steps: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::uniform(self.t_max, self.steps)
    }

    pub fn initial_state(&self) -> Result<BellDiagonalState> {
        self.state.build()
    }
}

const KEYS: &[&str] = &[
    "N", "q", "a", "x1", "xN", "spacing", "v", "xA", "xB", "omegaA", "omegaB", "omega", "state",
    "c1", "c2", "c3", "sign", "engine", "t_max", "steps", "out",
];

struct Entries<'a> {
    map: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |e| e.0)
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<(usize, &'a str)> {
        self.map.get(key).copied()
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        let Some((line, value)) = self.raw(key) else { return Ok(None) };
        let x: f64 = value.parse().map_err(|_| Error::Parse {
            line,
            message: format!("{key}: cannot parse '{value}' as a number"),
        })?;
        if !x.is_finite() {
            return Err(Error::Parse { line, message: format!("{key} must be finite") });
        }
        Ok(Some(x))
    }

    fn required_number(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }

    fn integer(&self, key: &str) -> Result<Option<usize>> {
        let Some((line, value)) = self.raw(key) else { return Ok(None) };
        value.parse().map(Some).map_err(|_| Error::Parse {
            line,
            message: format!("{key}: cannot parse '{value}' as a non-negative integer"),
        })
    }

    fn fail(&self, key: &str, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line(key), message: message.into() }
    }
}

fn tokenize(text: &str) -> Result<Entries<'_>> {
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected key=value, found '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::Parse { line, message: format!("unknown key '{key}'") });
        }
        if map.insert(key, (line, value)).is_some() {
            return Err(Error::Parse { line, message: format!("duplicate key '{key}'") });
        }
    }
    Ok(Entries { map })
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = tokenize(text)?;

    let missing: Vec<&str> = ["N", "x1", "state", "t_max", "steps"]
        .into_iter()
        .filter(|k| !e.has(k))
        .chain((!e.has("q") && !e.has("a")).then_some("q (or a)"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!("missing required keys: {}", missing.join(", "))));
    }

    let n_spins = e.integer("N")?.expect("checked above");
    if n_spins == 0 {
        return Err(e.fail("N", "N must be at least 1"));
    }
    let coupling_angle = match (e.number("q")?, e.number("a")?) {
        (Some(_), Some(_)) => return Err(e.fail("a", "give either q or a, not both")),
        (Some(q), None) => ModelParams::coupling_from_flip_probability(q)
            .map_err(|_| e.fail("q", format!("q = {q} must lie in [0, 1]")))?,
        (None, Some(a)) => a,
        (None, None) => unreachable!("checked above"),
    };
    let x1 = e.required_number("x1")?;
    let spacing = match (e.number("xN")?, e.number("spacing")?) {
        (Some(_), Some(_)) => return Err(e.fail("spacing", "give either xN or spacing, not both")),
        (Some(x_n), None) if n_spins == 1 => {
            if x_n != x1 {
                return Err(e.fail("xN", "a single-spin array needs xN = x1"));
            }
            1.0
        }
        (Some(x_n), None) => (x_n - x1) / (n_spins - 1) as f64,
        (None, Some(s)) => s,
        (None, None) => 1.0,
    };
    if spacing.is_nan() || spacing <= 0.0 {
        let key = if e.has("xN") { "xN" } else { "spacing" };
        return Err(e.fail(key, format!("array spacing must be positive, got {spacing}")));
    }
    let velocity = e.number("v")?.unwrap_or(1.0);
    if velocity <= 0.0 {
        return Err(e.fail("v", "velocity must be positive"));
    }
    let x_a = e.number("xA")?.unwrap_or(0.0);
    let x_b = e.number("xB")?.unwrap_or(0.0);
    for (key, x) in [("xA", x_a), ("xB", x_b)] {
        if x >= x1 {
            let key = if e.has(key) { key } else { "x1" };
            return Err(e.fail(key, format!("particles must start left of x1 = {x1}")));
        }
    }
    let array_frequency = e.number("omega")?.unwrap_or(0.0);
    if array_frequency < 0.0 {
        return Err(e.fail("omega", "array frequency must be non-negative"));
    }
    let params = ModelParams {
        n_spins,
        coupling_angle,
        x1,
        spacing,
        velocity,
        x_a,
        x_b,
        omega_a: e.number("omegaA")?.unwrap_or(0.0),
        omega_b: e.number("omegaB")?.unwrap_or(0.0),
        array_frequency,
    };
    params.validate().map_err(|err| Error::Config(err.to_string()))?;

    let state = parse_state(&e)?;
    let engine = match e.raw("engine") {
        None => Engine::Limit,
        Some((line, v)) => v.parse().map_err(|err: Error| Error::Parse { line, message: err.to_string() })?,
    };
    let t_max = e.required_number("t_max")?;
    if t_max <= 0.0 {
        return Err(e.fail("t_max", "t_max must be positive"));
    }
    let steps = e.integer("steps")?.expect("checked above");
    if steps < 2 {
        return Err(e.fail("steps", "steps must be at least 2"));
    }
    let out = match e.raw("out") {
        Some((line, "")) => return Err(Error::Parse { line, message: "out path is empty".into() }),
        Some((_, path)) => Some(PathBuf::from(path)),
        None => None,
    };
    Ok(RunConfig { params, state, engine, t_max, steps, out })
}

fn parse_state(e: &Entries<'_>) -> Result<InitialStateSpec> {
    let (line, name) = e.raw("state").expect("checked by caller");
    let spec = match name {
        "phi+" => InitialStateSpec::Bell(BellState::PhiPlus),
        "phi-" => InitialStateSpec::Bell(BellState::PhiMinus),
        "psi+" => InitialStateSpec::Bell(BellState::PsiPlus),
        "psi-" => InitialStateSpec::Bell(BellState::PsiMinus),
        "bd" => {
            let get = |k: &str| {
                e.number(k)?.ok_or_else(|| Error::Parse { line, message: format!("state=bd needs {k}") })
            };
            InitialStateSpec::BellDiagonal { c1: get("c1")?, c2: get("c2")?, c3: get("c3")? }
        }
        "mixture" => {
            let c3 = e
                .number("c3")?
                .ok_or_else(|| Error::Parse { line, message: "state=mixture needs c3".into() })?;
            if c3.abs() >= 1.0 {
                return Err(e.fail("c3", format!("|c3| < 1 violated: c3 = {c3}")));
            }
            let sign = match e.raw("sign") {
                None | Some((_, "+1")) | Some((_, "1")) | Some((_, "+")) => 1,
                Some((_, "-1")) | Some((_, "-")) => -1,
                Some((l, other)) => {
                    return Err(Error::Parse { line: l, message: format!("sign must be +1 or -1, got '{other}'") })
                }
            };
            InitialStateSpec::Mixture { c3, sign }
        }
        other => {
            return Err(Error::Parse {
                line,
                message: format!("unknown state '{other}' (phi+, phi-, psi+, psi-, bd, mixture)"),
            })
        }
    };
    // keys that the chosen state does not use are rejected rather than ignored
    let used: &[&str] = match spec {
        InitialStateSpec::Bell(_) => &[],
        InitialStateSpec::BellDiagonal { .. } => &["c1", "c2", "c3"],
        InitialStateSpec::Mixture { .. } => &["c3", "sign"],
    };
    if let Some(k) = ["c1", "c2", "c3", "sign"].into_iter().find(|k| e.has(k) && !used.contains(k)) {
        return Err(e.fail(k, format!("'{k}' is not used by state={name}")));
    }
    if let Err(err) = spec.build() {
        let key = ["c3", "c2", "c1"].into_iter().max_by_key(|k| e.line(k)).unwrap_or("state");
        return Err(e.fail(key, err.to_string()));
    }
    Ok(spec)
}

/// Canonical form: always `a` and `spacing`, every key explicit.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "N={}", p.n_spins)?;
        writeln!(f, "a={}", p.coupling_angle)?;
        writeln!(f, "x1={}", p.x1)?;
        writeln!(f, "spacing={}", p.spacing)?;
        writeln!(f, "v={}", p.velocity)?;
        writeln!(f, "xA={}", p.x_a)?;
        writeln!(f, "xB={}", p.x_b)?;
        writeln!(f, "omegaA={}", p.omega_a)?;
        writeln!(f, "omegaB={}", p.omega_b)?;
        writeln!(f, "omega={}", p.array_frequency)?;
        match self.state {
            InitialStateSpec::Bell(b) => {
                let name = match b {
                    BellState::PhiPlus => "phi+",
                    BellState::PhiMinus => "phi-",
                    BellState::PsiPlus => "psi+",
                    BellState::PsiMinus => "psi-",
                };
                writeln!(f, "state={name}")?;
            }
            InitialStateSpec::BellDiagonal { c1, c2, c3 } => {
                writeln!(f, "state=bd")?;
                writeln!(f, "c1={c1}")?;
                writeln!(f, "c2={c2}")?;
                writeln!(f, "c3={c3}")?;
            }
            InitialStateSpec::Mixture { c3, sign } => {
                writeln!(f, "state=mixture")?;
                writeln!(f, "c3={c3}")?;
                writeln!(f, "sign={}", if sign < 0 { "-1" } else { "+1" })?;
            }
        }
        writeln!(f, "engine={}", self.engine.name())?;
        writeln!(f, "t_max={}", self.t_max)?;
        writeln!(f, "steps={}", self.steps)?;
        if let Some(out) = &self.out {
            writeln!(f, "out={}", out.display())?;
        }
        Ok(())
    }
}
