//! Continuum optomechanics for 1D waveguides.
//!
//! Photon fields `a(x)` and phonon fields `b(x)` live on a periodic,
//! power-of-two grid and are normalized so that `Σ |a|² dx` is a photon
//! number. The crate provides
//!
//! * the spectral substrate ([`grid`], [`fft`], [`spectral`]) and the
//!   leading-order real-space coupling terms ([`coupling`], [`interaction`]),
//! * a Strang-split stochastic integrator with open-boundary injection,
//!   absorbing layers and truncated-Wigner noise ([`dynamics`]),
//! * steady states and their linearization ([`steady`]),
//! * closed-form analysis: scattering vertices ([`scatter`]), the
//!   Brillouin limit ([`brillouin`]) and the coherent-phonon regime
//!   ([`strongcoupling`]),
//! * a discrete optomechanical array simulator with the array-to-continuum
//!   mapping ([`lattice`]).
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod brillouin;
pub mod coupling;
pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod interaction;
pub mod lattice;
pub mod scatter;
pub mod spectral;
pub mod steady;
pub mod strongcoupling;

pub use coupling::{CouplingSet, Sector};
pub use dispersion::DispersionSpec;
pub use error::{Error, Result};
pub use field::{Frame, FieldState, PhotonBranch};
pub use grid::Grid1D;
pub use num_complex::Complex64 as C64;

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const K_B: f64 = 1.380_649e-23;
