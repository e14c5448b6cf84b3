//! Concurrence and quantum discord of the evolved two-qubit state.
//!
//! The X-state closed forms are paired with dense-matrix routes that make no use
//! of the X structure: Wootters concurrence from the spin-flipped state, and
//! discord from an explicit search over projective measurements on qubit B.
//! All entropies are in bits.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::{limit_f_pair_distinct, limit_f_pair_same};
use crate::model::{exact_f_pair, DecoherencePair, ModelParams};
use crate::states::{evolve_two_qubit, BellDiagonalState, XState};

/// Values in `[-CLAMP_TOL, 0)` are reported as zero.
pub const CLAMP_TOL: f64 = 1e-9;
const SPECTRUM_TOL: f64 = 1e-10;

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `-Σ λ log2 λ` with `0 log 0 = 0`.
pub fn von_neumann_entropy(spectrum: &[f64]) -> Result<f64> {
    if let Some(l) = spectrum.iter().find(|&&l| l.is_nan() || l < -SPECTRUM_TOL) {
        return Err(Error::Domain(format!("spectrum has negative entry {l}")));
    }
    Ok(-spectrum.iter().map(|&l| xlog2x(l)).sum::<f64>())
}

/// Entropy of a 4×4 density matrix from its Hermitian spectrum.
pub fn density_entropy(rho: &Matrix4<Complex64>) -> Result<f64> {
    let eig = SymmetricEigen::new(*rho).eigenvalues;
    von_neumann_entropy(eig.as_slice())
}

/// Spectrum of a 2×2 Hermitian matrix, largest first.
fn spectrum2(m: &Matrix2<Complex64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let off = m[(0, 1)].norm_sqr();
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + off).sqrt();
    [mean + r, mean - r]
}

fn entropy2(m: &Matrix2<Complex64>) -> f64 {
    let [l1, l2] = spectrum2(m);
    -xlog2x(l1) - xlog2x(l2.max(0.0))
}

pub fn partial_trace_b(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|a, c| rho[(2 * a, 2 * c)] + rho[(2 * a + 1, 2 * c + 1)])
}

pub fn partial_trace_a(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|b, d| rho[(b, d)] + rho[(2 + b, 2 + d)])
}

/// Exchange the roles of the two qubits.
pub fn swap_subsystems(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let swap = |i: usize| (i % 2) * 2 + i / 2;
    Matrix4::from_fn(|i, j| rho[(swap(i), swap(j))])
}

/// Checks Hermiticity, unit trace and positivity of a dense two-qubit state.
pub fn validate_density(rho: &Matrix4<Complex64>) -> Result<()> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("density matrix has non-finite entries".into()));
    }
    let herm = (rho - rho.adjoint()).norm();
    if herm > 1e-10 {
        return Err(Error::Domain(format!("density matrix is not Hermitian (deviation {herm})")));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
        return Err(Error::Domain(format!("density matrix trace is {trace}")));
    }
    let min = SymmetricEigen::new(*rho).eigenvalues.min();
    if min < -SPECTRUM_TOL {
        return Err(Error::Domain(format!("density matrix has negative eigenvalue {min}")));
    }
    Ok(())
}

/// Parameters of a state whose marginals are maximally mixed: `c3` and the
/// magnitudes `|Λ1| = 4|ρ23|`, `|Λ2| = 4|ρ14|`.
struct BellParts {
    c3: f64,
    lambda1: f64,
    lambda2: f64,
}

fn bell_parts(x: &XState) -> Result<BellParts> {
    let [p1, p2, p3, _] = x.populations();
    const TOL: f64 = 1e-12;
    if (p1 + p2 - 0.5).abs() > TOL || (p1 + p3 - 0.5).abs() > TOL {
        return Err(Error::UnsupportedState(format!(
            "closed forms need maximally mixed marginals, populations are {:?}",
            x.populations()
        )));
    }
    Ok(BellParts {
        c3: 4.0 * p1 - 1.0,
        lambda1: 4.0 * x.r23().norm(),
        lambda2: 4.0 * x.r14().norm(),
    })
}

fn clamp_small_negative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("{what} is negative: {value}")))
    }
}

/// `I = 2 + Σ λ_i log2 λ_i` over the four eigenvalues
/// `(1 - c3 ± |Λ1|)/4`, `(1 + c3 ± |Λ2|)/4`.
pub fn mutual_information(x: &XState) -> Result<f64> {
    let b = bell_parts(x)?;
    let eig = [
        (1.0 - b.c3 + b.lambda1) / 4.0,
        (1.0 - b.c3 - b.lambda1) / 4.0,
        (1.0 + b.c3 + b.lambda2) / 4.0,
        (1.0 + b.c3 - b.lambda2) / 4.0,
    ];
    let s = von_neumann_entropy(&eig)?;
    clamp_small_negative(2.0 - s, "mutual information")
}

/// Which argument of `χ = max(|c3|, (|Λ1| + |Λ2|)/2)` is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiBranch {
    /// `|c3|`: the optimal measurement is along z.
    Diagonal,
    /// `(|Λ1| + |Λ2|)/2`: the optimal measurement lies in the xy plane.
    Coherence,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi {
    pub value: f64,
    pub branch: ChiBranch,
}

/// Ties resolve to [`ChiBranch::Diagonal`]; `J` is continuous there.
pub fn chi(x: &XState) -> Result<Chi> {
    let b = bell_parts(x)?;
    let diagonal = b.c3.abs();
    let coherence = 0.5 * (b.lambda1 + b.lambda2);
    Ok(if coherence > diagonal {
        Chi { value: coherence, branch: ChiBranch::Coherence }
    } else {
        Chi { value: diagonal, branch: ChiBranch::Diagonal }
    })
}

fn classical_from_chi(chi: f64) -> f64 {
    0.5 * xlog2x(1.0 - chi) + 0.5 * xlog2x(1.0 + chi)
}

pub fn classical_correlation(x: &XState) -> Result<f64> {
    Ok(classical_from_chi(chi(x)?.value.min(1.0)))
}

pub fn discord_closed(x: &XState) -> Result<f64> {
    let i = mutual_information(x)?;
    let j = classical_correlation(x)?;
    clamp_small_negative(i - j, "discord")
}

/// Projective measurement `|π1⟩ = cos θ |0⟩ + e^{iφ} sin θ |1⟩`,
/// `|π2⟩ = e^{-iφ} sin θ |0⟩ - cos θ |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        use std::f64::consts::{FRAC_PI_2, TAU};
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, π/2]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::Domain(format!("phi = {phi} outside [0, 2π)")));
        }
        Ok(MeasurementAngles { theta, phi })
    }

    pub fn basis(&self) -> [Vector2<Complex64>; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = Complex64::from_polar(1.0, self.phi);
        [
            Vector2::new(Complex64::new(c, 0.0), e * s),
            Vector2::new(e.conj() * s, Complex64::new(-c, 0.0)),
        ]
    }
}

/// Grid for the measurement search: `theta_points` over `[0, π/2]` inclusive,
/// `phi_points` over `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridResolution {
    pub theta_points: usize,
    pub phi_points: usize,
}

impl Default for GridResolution {
    fn default() -> Self {
        GridResolution { theta_points: 181, phi_points: 360 }
    }
}

/// `S(ρ_A) - Σ_k p_k S(ρ_A|k)` for a measurement on qubit B.
fn information_gain(rho: &Matrix4<Complex64>, s_a: f64, theta: f64, phi: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let bases = [
        [Complex64::new(c, 0.0), e * s],
        [e.conj() * s, Complex64::new(-c, 0.0)],
    ];
    let mut conditional = 0.0;
    for pi in bases {
        let post = Matrix2::from_fn(|a, a2| {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..2 {
                for b2 in 0..2 {
                    acc += pi[b].conj() * rho[(2 * a + b, 2 * a2 + b2)] * pi[b2];
                }
            }
            acc
        });
        let p = post.trace().re;
        if p > 0.0 {
            conditional += p * entropy2(&(post / Complex64::new(p, 0.0)));
        }
    }
    s_a - conditional
}

/// Classical correlation `J` by maximizing over projective measurements on B.
pub fn classical_correlation_bruteforce(
    rho: &Matrix4<Complex64>,
    resolution: GridResolution,
) -> Result<(f64, MeasurementAngles)> {
    use std::f64::consts::{FRAC_PI_2, TAU};
    validate_density(rho)?;
    if resolution.theta_points < 2 || resolution.phi_points < 1 {
        return Err(Error::Domain("measurement grid needs at least 2 x 1 points".into()));
    }
    let s_a = entropy2(&partial_trace_b(rho));
    let objective = |theta: f64, phi: f64| information_gain(rho, s_a, theta, phi);

    let d_theta = FRAC_PI_2 / (resolution.theta_points - 1) as f64;
    let d_phi = TAU / resolution.phi_points as f64;
    // keep the best few cells; a strict `>` gives the lexicographic tie-break
    const KEEP: usize = 4;
    let mut best: Vec<(f64, f64, f64)> = Vec::with_capacity(KEEP + 1);
    for i in 0..resolution.theta_points {
        let theta = d_theta * i as f64;
        for j in 0..resolution.phi_points {
            let phi = d_phi * j as f64;
            let value = objective(theta, phi);
            if best.len() < KEEP || value > best[best.len() - 1].0 {
                let pos = best.iter().position(|b| value > b.0).unwrap_or(best.len());
                best.insert(pos, (value, theta, phi));
                best.truncate(KEEP);
            }
        }
    }

    let mut winner = (f64::NEG_INFINITY, 0.0, 0.0);
    for &(value, theta, phi) in &best {
        let refined = refine(&objective, (value, theta, phi), d_theta, d_phi);
        if refined.0 > winner.0 {
            winner = refined;
        }
    }
    let (value, theta, phi) = winner;
    Ok((value, MeasurementAngles::new(theta, phi.rem_euclid(TAU) % TAU)?))
}

/// Coordinate ascent with golden-section line searches, bracket of one grid cell
/// around the current point.
fn refine(
    objective: &impl Fn(f64, f64) -> f64,
    start: (f64, f64, f64),
    d_theta: f64,
    d_phi: f64,
) -> (f64, f64, f64) {
    use std::f64::consts::FRAC_PI_2;
    let (mut value, mut theta, mut phi) = start;
    for _ in 0..200 {
        let before = value;
        let lo = (theta - d_theta).max(0.0);
        let hi = (theta + d_theta).min(FRAC_PI_2);
        let (t, v) = golden_max(|x| objective(x, phi), lo, hi);
        if v > value {
            theta = t;
            value = v;
        }
        let (p, v) = golden_max(|x| objective(theta, x), phi - d_phi, phi + d_phi);
        if v > value {
            phi = p;
            value = v;
        }
        if value - before < 1e-14 {
            break;
        }
    }
    (value, theta, phi)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // the bracket ends are candidates too (boundary maxima at θ = 0, π/2)
    [(a, f(a)), (b, f(b)), (c, fc), (d, fd)]
        .into_iter()
        .fold((a, f64::NEG_INFINITY), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc })
}

/// Quantum mutual information `S(ρ_A) + S(ρ_B) - S(ρ_AB)` from dense spectra.
pub fn mutual_information_dense(rho: &Matrix4<Complex64>) -> Result<f64> {
    validate_density(rho)?;
    let s_ab = density_entropy(rho)?;
    Ok(entropy2(&partial_trace_b(rho)) + entropy2(&partial_trace_a(rho)) - s_ab)
}

/// Discord with measurement on B, by explicit optimization over projective
/// measurements. Independent of the X-state closed forms.
pub fn discord_bruteforce(rho: &Matrix4<Complex64>, resolution: GridResolution) -> Result<f64> {
    let i = mutual_information_dense(rho)?;
    let (j, _) = classical_correlation_bruteforce(rho, resolution)?;
    clamp_small_negative(i - j, "discord")
}

/// `2 max{0, |ρ14| - sqrt(ρ22 ρ33), |ρ23| - sqrt(ρ11 ρ44)}`
pub fn concurrence_x(x: &XState) -> f64 {
    let [p1, p2, p3, p4] = x.populations();
    let gamma1 = x.r14().norm() - (p2 * p3).sqrt();
    let gamma2 = x.r23().norm() - (p1 * p4).sqrt();
    2.0 * gamma1.max(gamma2).max(0.0)
}

/// Wootters concurrence of an arbitrary two-qubit state.
///
/// The square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)` are taken as the
/// singular values of `√ρ (σy⊗σy) √ρ*`.
pub fn concurrence_general(rho: &Matrix4<Complex64>) -> Result<f64> {
    validate_density(rho)?;
    let eig = SymmetricEigen::new(*rho);
    let sqrt_vals = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let sqrt_rho =
        eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let flip = Matrix4::new(
        zero, zero, zero, -one,
        zero, zero, one,  zero,
        zero, one,  zero, zero,
        -one, zero, zero, zero,
    );
    let m = sqrt_rho * flip * sqrt_rho.conjugate();
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Source of the decoherence factors for a time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Finite-N product of per-spin overlaps.
    Exact,
    /// Macroscopic limit, same- or distinct-position form chosen from the geometry.
    Limit,
    /// Same-position limit; rejects `xA != xB`.
    LimitSame,
    /// Distinct-position limit (valid for any geometry).
    LimitDistinct,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Limit => "limit",
            Engine::LimitSame => "limit-same",
            Engine::LimitDistinct => "limit-distinct",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Engine::Exact),
            "limit" => Ok(Engine::Limit),
            "limit-same" => Ok(Engine::LimitSame),
            "limit-distinct" => Ok(Engine::LimitDistinct),
            other => Err(Error::Domain(format!("unknown engine '{other}'"))),
        }
    }
}

pub fn decoherence_factors(params: &ModelParams, engine: Engine, t: f64) -> Result<DecoherencePair> {
    match engine {
        Engine::Exact => Ok(exact_f_pair(params, t)),
        Engine::LimitSame => limit_f_pair_same(params, t),
        Engine::LimitDistinct => Ok(limit_f_pair_distinct(params, t)),
        Engine::Limit if params.same_position() => limit_f_pair_same(params, t),
        Engine::Limit => Ok(limit_f_pair_distinct(params, t)),
    }
}

/// Strictly increasing, non-negative sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    /// `steps` points evenly spaced over `[0, t_max]`.
    pub fn uniform(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
        }
        if steps < 2 {
            return Err(Error::Domain(format!("steps must be at least 2, got {steps}")));
        }
        let last = (steps - 1) as f64;
        Ok(TimeGrid((0..steps).map(|i| t_max * i as f64 / last).collect()))
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("time grid is empty".into()));
        }
        if points.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Domain("time grid points must be finite and non-negative".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("time grid must be strictly increasing".into()));
        }
        Ok(TimeGrid(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn step(&self) -> Option<f64> {
        (self.0.len() >= 2).then(|| self.0[1] - self.0[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSample {
    pub t: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub abs_f1: f64,
    pub abs_f2: f64,
}

impl CorrelationSample {
    pub fn evaluate(t: f64, initial: &BellDiagonalState, f: DecoherencePair) -> Result<Self> {
        let x = evolve_two_qubit(initial, f);
        let mutual_info = mutual_information(&x)?;
        let classical_corr = classical_correlation(&x)?;
        let discord = clamp_small_negative(mutual_info - classical_corr, "discord")?;
        Ok(CorrelationSample {
            t,
            concurrence: concurrence_x(&x),
            discord,
            mutual_info,
            classical_corr,
            abs_f1: f.abs_f1(),
            abs_f2: f.abs_f2(),
        })
    }
}

pub fn correlation_timeseries(
    params: &ModelParams,
    initial: &BellDiagonalState,
    engine: Engine,
    grid: &TimeGrid,
) -> Result<Vec<CorrelationSample>> {
    params.validate()?;
    grid.points()
        .iter()
        .map(|&t| CorrelationSample::evaluate(t, initial, decoherence_factors(params, engine, t)?))
        .collect()
}
