#![allow(dead_code)]

use std::path::PathBuf;

use dephase::config::{BellState, InitialStateSpec, RunConfig};
use dephase::correlations::Engine;
use dephase::model::{DecoherencePair, ModelParams};
use dephase::states::{evolve_two_qubit, make_bell_diagonal, BellDiagonalState, XState};
use num_complex::Complex64;
use rand::Rng;

/// Uniform point of the Bell-diagonal tetrahedron via normalized exponential weights.
pub fn random_bell_diagonal(rng: &mut impl Rng) -> BellDiagonalState {
    loop {
        let w: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
        let s: f64 = w.iter().sum();
        let [l1, l2, l3, l4] = w.map(|x| x / s);
        if let Ok(state) = make_bell_diagonal(-l1 - l2 + l3 + l4, -l1 + l2 - l3 + l4, -l1 + l2 + l3 - l4) {
            return state;
        }
    }
}

pub fn random_factors(rng: &mut impl Rng) -> DecoherencePair {
    use std::f64::consts::PI;
    DecoherencePair {
        f1: Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(-PI..PI)),
        f2: Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(-PI..PI)),
    }
}

pub fn random_evolved(rng: &mut impl Rng) -> XState {
    let s = random_bell_diagonal(rng);
    evolve_two_qubit(&s, random_factors(rng))
}

pub fn random_config(rng: &mut impl Rng) -> RunConfig {
    let x1 = rng.gen_range(-100.0..100.0);
    let x_a = x1 - rng.gen_range(0.001..50.0);
    let x_b = if rng.gen_bool(0.5) { x_a } else { x1 - rng.gen_range(0.001..50.0) };
    let mut params = ModelParams::new(rng.gen_range(1..5000), rng.gen_range(0.0..1.5), x1, x_a, x_b).unwrap();
    params.spacing = rng.gen_range(0.1..3.0);
    params.velocity = rng.gen_range(0.1..3.0);
    params.omega_a = rng.gen_range(-2.0..2.0);
    params.omega_b = rng.gen_range(-2.0..2.0);
    params.array_frequency = rng.gen_range(0.0..2.0);

    let state = match rng.gen_range(0..3) {
        0 => {
            let b = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];
            InitialStateSpec::Bell(b[rng.gen_range(0..4)])
        }
        1 => {
            let s = random_bell_diagonal(rng);
            InitialStateSpec::BellDiagonal { c1: s.c1(), c2: s.c2(), c3: s.c3() }
        }
        _ => InitialStateSpec::Mixture {
            c3: rng.gen_range(-0.999..0.999),
            sign: if rng.gen_bool(0.5) { 1 } else { -1 },
        },
    };
    let engines = [Engine::Exact, Engine::Limit, Engine::LimitSame, Engine::LimitDistinct];
    RunConfig {
        params,
        state,
        engine: engines[rng.gen_range(0..4)],
        t_max: rng.gen_range(0.1..2000.0),
        steps: rng.gen_range(2..5000),
        out: rng.gen_bool(0.3).then(|| PathBuf::from(format!("out_{}.csv", rng.gen_range(0..1000)))),
    }
}
