//! Decoherence of two qubits carried by particles through a one-dimensional spin
//! array, and the resulting dynamics of concurrence and quantum discord.
//!
//! [`model`] holds the exact finite-N decoherence factors, [`limits`] their
//! macroscopic-limit exponentials and critical times, [`states`] the Bell-diagonal
//! and X-state algebra, [`correlations`] the entanglement and discord measures.
//! [`config`], [`run`] and [`figures`] back the `dephase` command-line tool.

pub mod config;
pub mod correlations;
pub mod error;
pub mod figures;
pub mod limits;
pub mod model;
pub mod run;
pub mod states;

pub use error::{Error, Result};
