//! Numerical toolkit for free-particle coherent states.
//!
//! The crate builds the whole ladder-operator story on two independent
//! representations and cross-checks every identity between them:
//!
//! - a spectral position grid ([`grid`]) where `X` acts pointwise, `P` acts
//!   through the FFT, and coherent states are explicit Gaussian samples;
//! - a truncated number basis ([`fock`]) where the ladder operators are
//!   bidiagonal matrices and drift (displacement) operators come from the
//!   matrix exponential.
//!
//! On top of those sit coherent- and number-state constructors with three
//! independent construction routes ([`states`]), exact free-particle time
//! evolution ([`dynamics`]), and phase-space machinery — Husimi maps,
//! overcompleteness quadrature, number-state reconstruction
//! ([`phase_space`]). The [`verify`] module bundles every identity check
//! into one machine-readable report.
//!
//! All operations are pure functions on immutable values and safe to call
//! concurrently. The heavy inner loops (Husimi maps, disk quadrature) are
//! data-parallel via rayon under the default `parallel` feature and fall
//! back to sequential loops without it, with bitwise identical results.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod fock;
pub mod grid;
pub mod parallel;
pub mod phase_space;
pub mod quadrature;
pub mod states;
mod sums;
pub mod verify;

pub use constants::PhysicalConstants;
pub use error::{KitError, Result};
pub use grid::{
    apply_operator, inner_product, moments, Grid, MomentReport, Operator, WaveFunction,
};
pub use states::CoherentLabel;
