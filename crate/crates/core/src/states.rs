//! Bell-diagonal initial states, their X-state evolution, and the single-qubit
//! phase-damping channel.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ with |0⟩ the spin-down state, so that
//! `ρ14 = Λ2 / 4` and `ρ23 = Λ1* / 4`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::DecoherencePair;

/// Tolerance on eigenvalue and coherence-bound checks.
pub const POSITIVITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `ρ = (I + Σ c_j σ_j ⊗ σ_j) / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState {
    c1: f64,
    c2: f64,
    c3: f64,
}

impl BellDiagonalState {
    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// `(1-c1-c2-c3)/4, (1-c1+c2+c3)/4, (1+c1-c2+c3)/4, (1+c1+c2-c3)/4`
    pub fn eigenvalues(&self) -> [f64; 4] {
        bell_eigenvalues(self.c1, self.c2, self.c3)
    }

    pub fn phi_plus() -> Self {
        BellDiagonalState { c1: 1.0, c2: -1.0, c3: 1.0 }
    }

    pub fn phi_minus() -> Self {
        BellDiagonalState { c1: -1.0, c2: 1.0, c3: 1.0 }
    }

    pub fn psi_plus() -> Self {
        BellDiagonalState { c1: 1.0, c2: 1.0, c3: -1.0 }
    }

    pub fn psi_minus() -> Self {
        BellDiagonalState { c1: -1.0, c2: -1.0, c3: -1.0 }
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        evolve_two_qubit(self, DecoherencePair::IDENTITY).to_matrix()
    }
}

fn bell_eigenvalues(c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    [
        (1.0 - c1 - c2 - c3) / 4.0,
        (1.0 - c1 + c2 + c3) / 4.0,
        (1.0 + c1 - c2 + c3) / 4.0,
        (1.0 + c1 + c2 - c3) / 4.0,
    ]
}

pub fn make_bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<BellDiagonalState> {
    for (name, c) in [("c1", c1), ("c2", c2), ("c3", c3)] {
        if !c.is_finite() || c.abs() > 1.0 + POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("{name} = {c} must satisfy |{name}| <= 1")));
        }
    }
    let eig = bell_eigenvalues(c1, c2, c3);
    if let Some((i, &lambda)) = eig.iter().enumerate().find(|(_, &l)| l < -POSITIVITY_TOL) {
        return Err(Error::InvalidState(format!(
            "eigenvalue {} of (c1, c2, c3) = ({c1}, {c2}, {c3}) is negative: {lambda}",
            i + 1
        )));
    }
    Ok(BellDiagonalState {
        c1: c1.clamp(-1.0, 1.0),
        c2: c2.clamp(-1.0, 1.0),
        c3: c3.clamp(-1.0, 1.0),
    })
}

/// Bell mixture `(1+c3)/2 |Φ±⟩⟨Φ±| + (1-c3)/2 |Ψ±⟩⟨Ψ±|`, i.e. `c1 = sign`, `c2 = -sign c3`.
pub fn mixture_state(c3: f64, sign: i8) -> Result<BellDiagonalState> {
    if !c3.is_finite() || c3.abs() >= 1.0 {
        return Err(Error::Domain(format!("mixture requires |c3| < 1, got {c3}")));
    }
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}"))),
    };
    make_bell_diagonal(s, -s * c3, c3)
}

/// Two-qubit density matrix whose only nonzero entries are the diagonal and the
/// anti-diagonal corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    p: [f64; 4],
    r14: Complex64,
    r23: Complex64,
}

impl XState {
    pub fn new(p: [f64; 4], r14: Complex64, r23: Complex64) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite() || *x < -POSITIVITY_TOL) {
            return Err(Error::InvalidState(format!("populations {p:?} must be non-negative")));
        }
        let trace: f64 = p.iter().sum();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let p = p.map(|x| x.max(0.0));
        if r14.norm() > (p[0] * p[3]).sqrt() + POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("|r14| = {} exceeds sqrt(p1 p4)", r14.norm())));
        }
        if r23.norm() > (p[1] * p[2]).sqrt() + POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("|r23| = {} exceeds sqrt(p2 p3)", r23.norm())));
        }
        Ok(XState { p, r14, r23 })
    }

    pub fn populations(&self) -> [f64; 4] {
        self.p
    }

    pub fn r14(&self) -> Complex64 {
        self.r14
    }

    pub fn r23(&self) -> Complex64 {
        self.r23
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let [p1, p2, p3, p4] = self.p;
        #[rustfmt::skip]
        let m = Matrix4::new(
            re(p1),            ZERO,              ZERO,          self.r14,
            ZERO,              re(p2),            self.r23,      ZERO,
            ZERO,              self.r23.conj(),   re(p3),        ZERO,
            self.r14.conj(),   ZERO,              ZERO,          re(p4),
        );
        m
    }
}

/// Bell-diagonal state after the passage: populations unchanged,
/// `ρ14 = (c1 - c2) f2 / 4`, `ρ23 = ((c1 + c2) f1)* / 4`.
pub fn evolve_two_qubit(s: &BellDiagonalState, f: DecoherencePair) -> XState {
    let lambda1 = f.f1 * (s.c1 + s.c2);
    let lambda2 = f.f2 * (s.c1 - s.c2);
    let d = 1.0 + s.c3;
    let o = 1.0 - s.c3;
    let p = [d / 4.0, o / 4.0, o / 4.0, d / 4.0];
    let (r14, r23) = (lambda2 / 4.0, lambda1.conj() / 4.0);
    XState::new(p, clamp_norm(r14, p[0]), clamp_norm(r23, p[1]))
        .expect("Bell-diagonal evolution with |f| <= 1 stays positive")
}

/// Rounding in long cosine products can push `|f|` a hair above 1.
fn clamp_norm(z: Complex64, bound: f64) -> Complex64 {
    let n = z.norm();
    if n > bound && n > 0.0 {
        z * (bound / n)
    } else {
        z
    }
}

/// Single-qubit density matrix in the basis (|↓⟩, |↑⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState(pub Matrix2<Complex64>);

impl QubitState {
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn coherence(&self) -> Complex64 {
        self.0[(1, 0)]
    }
}

/// Phase-damping channel: populations kept, coherence `c1 c0*` scaled by `f`.
pub fn evolve_single_qubit(c0: Complex64, c1: Complex64, f: f64) -> Result<QubitState> {
    let norm = c0.norm_sqr() + c1.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("amplitudes are not normalized: |c0|² + |c1|² = {norm}")));
    }
    let coh = c1 * c0.conj() * f;
    Ok(QubitState(Matrix2::new(re(c0.norm_sqr()), coh.conj(), coh, re(c1.norm_sqr()))))
}
