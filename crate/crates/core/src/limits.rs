//! Weak-coupling macroscopic limit (`N → ∞`, `q → 0`, `n̄ = qN` finite).
//!
//! In this limit every product of per-spin cosines becomes an exponential in the
//! fraction of the array each particle has traversed. The critical times below
//! are closed-form consequences for the Bell mixture `c1 = ±1, c2 = ∓c3`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DecoherencePair, ModelParams, Particle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipMode {
    /// `sin²(a)`
    Exact,
    /// `a²`
    Weak,
}

pub fn spin_flip_probability(a: f64, mode: FlipMode) -> f64 {
    match mode {
        FlipMode::Exact => a.sin().powi(2),
        FlipMode::Weak => a * a,
    }
}

/// Fractions of the array traversed by each particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgressFractions {
    pub g_a: f64,
    pub g_b: f64,
}

impl ProgressFractions {
    pub fn at(params: &ModelParams, t: f64) -> Self {
        ProgressFractions {
            g_a: progress_fraction(params, Particle::A, t),
            g_b: progress_fraction(params, Particle::B, t),
        }
    }
}

/// `clamp((x_j + v t - x1) / L, 0, 1)`; a single-spin array (`L = 0`) is a step.
pub fn progress_fraction(params: &ModelParams, particle: Particle, t: f64) -> f64 {
    let travelled = params.position(particle, t) - params.x1;
    let length = params.length();
    if length <= 0.0 {
        return if travelled > 0.0 { 1.0 } else { 0.0 };
    }
    (travelled / length).clamp(0.0, 1.0)
}

pub fn limit_f_single(params: &ModelParams, t: f64) -> f64 {
    let g = progress_fraction(params, Particle::A, t);
    (-0.5 * params.mean_excitations() * g).exp()
}

fn phased(params: &ModelParams, t: f64, abs_f1: f64, abs_f2: f64) -> DecoherencePair {
    DecoherencePair {
        f1: Complex64::from_polar(abs_f1, (params.omega_a - params.omega_b) * t),
        f2: Complex64::from_polar(abs_f2, -(params.omega_a + params.omega_b) * t),
    }
}

/// Limit factors for particles starting at the same point: `f1` keeps unit
/// modulus and `|f2| = exp(-2 n̄ g)`.
pub fn limit_f_pair_same(params: &ModelParams, t: f64) -> Result<DecoherencePair> {
    if !params.same_position() {
        return Err(Error::UnsupportedConfiguration(format!(
            "same-position limit requires xA = xB (got {} and {})",
            params.x_a, params.x_b
        )));
    }
    let g = progress_fraction(params, Particle::A, t);
    let nbar = params.mean_excitations();
    Ok(phased(params, t, 1.0, (-2.0 * nbar * g).exp()))
}

/// Limit factors for distinct starting points.
///
/// Written symmetrically in the two particles: a spin passed by one particle costs
/// `n̄/2` per unit progress in both factors, a spin passed by both costs nothing
/// in `f1` and `2 n̄` in `f2`. With A leading this is
/// `|f1| = exp(-n̄/2 (g_A - g_B))`, `|f2| = exp(-n̄/2 g_A - 3n̄/2 g_B)`.
pub fn limit_f_pair_distinct(params: &ModelParams, t: f64) -> DecoherencePair {
    let g = ProgressFractions::at(params, t);
    let nbar = params.mean_excitations();
    let abs_f1 = (-0.5 * nbar * (g.g_a - g.g_b).abs()).exp();
    let abs_f2 = (-0.5 * nbar * (g.g_a + g.g_b) - nbar * g.g_a.min(g.g_b)).exp();
    phased(params, t, abs_f1, abs_f2)
}

fn check_mixture_c3(c3: f64) -> Result<()> {
    if !c3.is_finite() || c3.abs() >= 1.0 {
        return Err(Error::Domain(format!("mixture parameter c3 = {c3} must satisfy |c3| < 1")));
    }
    Ok(())
}

fn require_same(params: &ModelParams) -> Result<()> {
    if params.same_position() {
        Ok(())
    } else {
        Err(Error::UnsupportedConfiguration("critical time defined for xA = xB only".into()))
    }
}

/// Time at which the particle starting at `start` has traversed fraction `g`.
fn time_at_progress(params: &ModelParams, start: f64, g: f64) -> f64 {
    (params.x1 - start + g * params.length()) / params.velocity
}

/// Progress fraction at which `|f2| = exp(-2 n̄ g)` drops to `level`, if inside the array.
fn same_position_crossing(params: &ModelParams, level: f64) -> Option<f64> {
    let nbar = params.mean_excitations();
    if nbar <= 0.0 {
        return None;
    }
    let g = -level.ln() / (2.0 * nbar);
    (g <= 1.0).then(|| time_at_progress(params, params.x_a, g))
}

/// Entanglement sudden-death time `t0` of the same-position mixture.
///
/// Concurrence there is `((1 + c3)|f2| - (1 - c3)) / 2`, which only reaches zero
/// for `c3 > 0`. Returns `None` when it never does inside the array.
pub fn sudden_death_time(params: &ModelParams, c3: f64) -> Result<Option<f64>> {
    check_mixture_c3(c3)?;
    require_same(params)?;
    if c3 <= 0.0 {
        return Ok(None);
    }
    Ok(same_position_crossing(params, (1.0 - c3) / (1.0 + c3)))
}

/// Time `t_c` at which χ switches to the `|c3|` branch (kink of the discord)
/// for the same-position mixture; exists only for `c3 ∈ (1/3, 1)`.
pub fn discord_sudden_change_time(params: &ModelParams, c3: f64) -> Result<Option<f64>> {
    check_mixture_c3(c3)?;
    require_same(params)?;
    if c3 <= 1.0 / 3.0 {
        return Ok(None);
    }
    Ok(same_position_crossing(params, (3.0 * c3 - 1.0) / (1.0 + c3)))
}

/// Kink `t̄` of the discord while only the leading particle is inside the array.
///
/// There `|f1| = |f2| = exp(-n̄ g_lead / 2)` and χ leaves the f-branch once that
/// drops below `|c3|`. The kink is absent when `|c3|` does not exceed the value
/// reached when the trailing particle enters.
pub fn second_period_change_time(params: &ModelParams, c3: f64) -> Result<Option<f64>> {
    check_mixture_c3(c3)?;
    if c3 == 0.0 {
        return Err(Error::Domain("c3 = 0 has no second-period kink (ln|c3| diverges)".into()));
    }
    if params.same_position() {
        return Err(Error::UnsupportedConfiguration(
            "second-period kink needs distinct starting positions".into(),
        ));
    }
    let (lead, lag) = if params.x_a > params.x_b {
        (params.x_a, params.x_b)
    } else {
        (params.x_b, params.x_a)
    };
    let nbar = params.mean_excitations();
    let length = params.length();
    let gap = if length > 0.0 { ((lead - lag) / length).min(1.0) } else { 1.0 };
    let threshold = (-0.5 * nbar * gap).exp();
    if c3.abs() <= threshold {
        return Ok(None);
    }
    let g = -2.0 * c3.abs().ln() / nbar;
    Ok(Some(time_at_progress(params, lead, g)))
}

/// Concurrence and discord of the same-position mixture before and after the
/// passage, with `Λ2` set to zero for the final values. Discord in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCorrelations {
    pub concurrence_initial: f64,
    pub concurrence_final: f64,
    pub discord_initial: f64,
    pub discord_final: f64,
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn asymptotic_correlations(c3: f64) -> Result<AsymptoticCorrelations> {
    check_mixture_c3(c3)?;
    let theta = c3.abs().max((1.0 - c3) / 2.0);
    let discord_initial = 0.5 * xlog2x(1.0 - c3) + 0.5 * xlog2x(1.0 + c3);
    let discord_final = 0.5 * (1.0 - c3) * (2.0 * (1.0 - c3)).log2() + 0.5 * xlog2x(1.0 + c3)
        - 0.5 * xlog2x(1.0 + theta)
        - 0.5 * xlog2x(1.0 - theta);
    Ok(AsymptoticCorrelations {
        concurrence_initial: c3.abs(),
        concurrence_final: if c3 < 0.0 { c3.abs() } else { 0.0 },
        discord_initial,
        discord_final,
    })
}

/// Roots of `f` on `[lo, hi]`, bracketed on a uniform scan of `samples` cells and
/// refined by bisection.
pub fn scan_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / samples as f64;
    let mut x0 = lo;
    let mut y0 = f(x0);
    for i in 1..=samples {
        let x1 = lo + step * i as f64;
        let y1 = f(x1);
        if y0 == 0.0 {
            roots.push(x0);
        } else if y0 * y1 < 0.0 {
            let (mut a, mut b, mut ya) = (x0, x1, y0);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let ym = f(m);
                if ym == 0.0 || (b - a) < 1e-15 {
                    a = m;
                    b = m;
                    break;
                }
                if ya * ym < 0.0 {
                    b = m;
                } else {
                    a = m;
                    ya = ym;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        y0 = y1;
    }
    roots
}

const C3_SCAN: (f64, f64) = (-1.0 + 1e-6, 1.0 - 1e-6);

/// The value `c0` below which the final discord exceeds the initial one.
pub fn discord_amplification_crossover() -> Option<f64> {
    let gain = |c3: f64| {
        let a = asymptotic_correlations(c3).expect("scan stays inside (-1, 1)");
        a.discord_final - a.discord_initial
    };
    scan_roots(gain, C3_SCAN.0, C3_SCAN.1, 4000).into_iter().next()
}

/// The value `c'` where the final discord and final concurrence curves cross.
pub fn discord_concurrence_crossing() -> Option<f64> {
    let diff = |c3: f64| {
        let a = asymptotic_correlations(c3).expect("scan stays inside (-1, 1)");
        a.discord_final - a.concurrence_final
    };
    scan_roots(diff, C3_SCAN.0, C3_SCAN.1, 4000).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ModelParams {
        let a = ModelParams::coupling_from_flip_probability(0.005).unwrap();
        ModelParams::new(1001, a, 100.0, 0.0, 0.0).unwrap()
    }

    fn fig5() -> ModelParams {
        let mut p = fig1();
        p.x_b = -200.0;
        p
    }

    #[test]
    fn flip_probability_modes() {
        assert_eq!(spin_flip_probability(0.0, FlipMode::Exact), 0.0);
        assert!((spin_flip_probability(0.005f64.sqrt(), FlipMode::Weak) - 0.005).abs() < 1e-17);
        assert!((spin_flip_probability(0.3, FlipMode::Exact) - 0.087_332).abs() < 1e-6);
        assert!((fig1().mean_excitations() - 5.005).abs() < 1e-12);
    }

    #[test]
    fn progress_examples() {
        let p = fig1();
        assert_eq!(progress_fraction(&p, Particle::A, 50.0), 0.0);
        assert_eq!(progress_fraction(&p, Particle::A, 5000.0), 1.0);
        assert_eq!(progress_fraction(&p, Particle::A, 600.0), 0.5);
        let p5 = fig5();
        let g = ProgressFractions::at(&p5, 700.0);
        assert!(g.g_a >= g.g_b);
        assert_eq!((g.g_a, g.g_b), (0.6, 0.4));
    }

    #[test]
    fn single_limit_examples() {
        let p = fig1();
        assert_eq!(limit_f_single(&p, 0.0), 1.0);
        assert!((limit_f_single(&p, 2000.0) - (-2.5025f64).exp()).abs() < 1e-12);
        assert!((limit_f_single(&p, 2000.0) - 0.0818).abs() < 1e-4);
        assert!((limit_f_single(&p, 600.0) - 0.2862).abs() < 1e-4);
    }

    #[test]
    fn same_position_limit() {
        let p = fig1();
        let f = limit_f_pair_same(&p, 0.0).unwrap();
        assert_eq!((f.abs_f1(), f.abs_f2()), (1.0, 1.0));
        let f = limit_f_pair_same(&p, 1200.0).unwrap();
        assert!((f.abs_f2() - (-10.01f64).exp()).abs() < 1e-15);
        assert!((f.abs_f2() - 4.495e-5).abs() < 1e-8);
        for i in 0..50 {
            let f = limit_f_pair_same(&p, 30.0 * i as f64).unwrap();
            assert!((f.abs_f1() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            limit_f_pair_same(&fig5(), 10.0),
            Err(Error::UnsupportedConfiguration(_))
        ));
    }

    #[test]
    fn distinct_limit_examples() {
        let p = fig5();
        let f = limit_f_pair_distinct(&p, 0.0);
        assert_eq!((f.abs_f1(), f.abs_f2()), (1.0, 1.0));

        let f = limit_f_pair_distinct(&p, 5000.0);
        assert_eq!(f.abs_f1(), 1.0);
        assert!((f.abs_f2() - (-2.0 * 5.005f64).exp()).abs() < 1e-14);

        // g_A = 0.3, g_B = 0.1
        let f = limit_f_pair_distinct(&p, 400.0);
        assert!((f.abs_f1() - 0.6062).abs() < 1e-4);
        assert!((f.abs_f2() - 0.2228).abs() < 1e-4);
        assert!((f.abs_f2() - (-1.5015f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn distinct_limit_reduces_to_same_position() {
        let p = fig1();
        for i in 0..=26 {
            let t = 50.0 * i as f64;
            let a = limit_f_pair_distinct(&p, t);
            let b = limit_f_pair_same(&p, t).unwrap();
            assert!((a.f1 - b.f1).norm() < 1e-15);
            assert!((a.f2 - b.f2).norm() < 1e-15);
        }
    }

    #[test]
    fn sudden_death_examples() {
        let p = fig1();
        let t0 = sudden_death_time(&p, 0.5).unwrap().unwrap();
        assert!((t0 - (100.0 + 1000.0 / (2.0 * 5.005) * 3f64.ln())).abs() < 1e-9);
        assert!((t0 - 209.8).abs() < 0.1);
        assert_eq!(sudden_death_time(&p, -0.5).unwrap(), None);
        assert_eq!(sudden_death_time(&p, 0.0).unwrap(), None);
        let tiny = sudden_death_time(&p, 1e-9).unwrap().unwrap();
        assert!((tiny - 100.0).abs() < 1e-5);
        assert!(matches!(sudden_death_time(&p, 1.0), Err(Error::Domain(_))));
        assert!(matches!(sudden_death_time(&fig5(), 0.5), Err(Error::UnsupportedConfiguration(_))));
    }

    #[test]
    fn sudden_death_beyond_array_is_none() {
        // n̄ small: |f2| never drops to (1-c3)/(1+c3)
        let a = ModelParams::coupling_from_flip_probability(1e-5).unwrap();
        let p = ModelParams::new(1001, a, 100.0, 0.0, 0.0).unwrap();
        assert_eq!(sudden_death_time(&p, 0.5).unwrap(), None);
    }

    #[test]
    fn discord_kink_examples() {
        let p = fig1();
        let tc = discord_sudden_change_time(&p, 0.7).unwrap().unwrap();
        assert!((tc - 143.5).abs() < 0.05);
        assert_eq!(discord_sudden_change_time(&p, 0.2).unwrap(), None);
        // t_c grows without bound as c3 -> 1/3 from above
        let mut last = 0.0;
        for c3 in [0.9, 0.6, 0.4, 0.34, 0.3334] {
            let tc = discord_sudden_change_time(&p, c3).unwrap().unwrap();
            assert!(tc > last);
            last = tc;
        }
        let nearer = discord_sudden_change_time(&p, 1.0 / 3.0 + 1e-8);
        assert_eq!(nearer.unwrap(), None);
        assert!(discord_sudden_change_time(&p, -1.0).is_err());
    }

    #[test]
    fn second_period_examples() {
        let p = fig5();
        let tb = second_period_change_time(&p, -0.8).unwrap().unwrap();
        assert!((tb - (100.0 + 2000.0 / 5.005 * 1.25f64.ln())).abs() < 1e-9);
        assert!((tb - 189.2).abs() < 0.05);
        assert_eq!(second_period_change_time(&p, -0.5).unwrap(), None);
        assert_eq!(second_period_change_time(&p, 0.2).unwrap(), None);
        assert!((second_period_change_time(&p, 0.7).unwrap().unwrap() - 242.5).abs() < 0.1);
        assert!(matches!(second_period_change_time(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(second_period_change_time(&p, 1.2), Err(Error::Domain(_))));
        assert!(second_period_change_time(&fig1(), -0.8).is_err());
    }

    #[test]
    fn second_period_is_symmetric_in_labels() {
        let p = fig5();
        let mut swapped = p.clone();
        swapped.x_a = p.x_b;
        swapped.x_b = p.x_a;
        for c3 in [-0.9, -0.8, 0.65, 0.95] {
            assert_eq!(
                second_period_change_time(&p, c3).unwrap(),
                second_period_change_time(&swapped, c3).unwrap()
            );
        }
    }

    #[test]
    fn asymptotic_examples() {
        let a = asymptotic_correlations(0.0).unwrap();
        assert_eq!(a.concurrence_initial, 0.0);
        assert_eq!(a.concurrence_final, 0.0);
        assert!(a.discord_initial.abs() < 1e-15);
        // 3/4 - (3/4) log2(3/2)
        assert!((a.discord_final - (0.75 - 0.75 * 1.5f64.log2())).abs() < 1e-14);
        assert!((a.discord_final - 0.3113).abs() < 1e-4);

        let a = asymptotic_correlations(-0.9).unwrap();
        assert_eq!(a.concurrence_final, 0.9);
        assert_eq!(a.concurrence_initial, 0.9);
        let a = asymptotic_correlations(0.9).unwrap();
        assert_eq!(a.concurrence_final, 0.0);
        assert!(asymptotic_correlations(-1.0).is_err());
    }

    #[test]
    fn final_discord_is_continuous_at_branch_tie() {
        let below = asymptotic_correlations(1.0 / 3.0 - 1e-10).unwrap().discord_final;
        let above = asymptotic_correlations(1.0 / 3.0 + 1e-10).unwrap().discord_final;
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn amplification_on_the_left() {
        let c0 = discord_amplification_crossover().unwrap();
        assert!(c0 > -1.0 && c0 < 1.0);
        for c3 in [-0.99, -0.9, -0.5, c0 - 1e-3] {
            let a = asymptotic_correlations(c3).unwrap();
            assert!(a.discord_final > a.discord_initial, "c3 = {c3}");
        }
        let a = asymptotic_correlations(c0 + 1e-3).unwrap();
        assert!(a.discord_final < a.discord_initial);

        let cp = discord_concurrence_crossing().unwrap();
        let below = asymptotic_correlations(cp - 1e-3).unwrap();
        let above = asymptotic_correlations(cp + 1e-3).unwrap();
        assert!(below.discord_final < below.concurrence_final);
        assert!(above.discord_final > above.concurrence_final);
    }

    #[test]
    fn scan_roots_finds_known_roots() {
        let r = scan_roots(|x| (x - 0.25) * (x + 0.5), -1.0, 1.0, 100);
        assert_eq!(r.len(), 2);
        assert!((r[0] + 0.5).abs() < 1e-12);
        assert!((r[1] - 0.25).abs() < 1e-12);
    }
}
