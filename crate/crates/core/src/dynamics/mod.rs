//! Time evolution.
//!
//! One step of [`Integrator`] is a Strang splitting: half a step of exact
//! linear propagation (dispersion and damping, diagonal in k), a full
//! fourth-order Runge–Kutta step of the interaction and side drives, an
//! Euler–Maruyama noise increment, and the second linear half step. Open
//! fields are refilled at their entrance after every linear half step.

mod bath;
mod boundary;
mod drive;
mod evolve;
mod integrator;
mod noise;

pub use bath::{BathSpec, Sampling, Thermal};
pub use boundary::{absorbing_layer, inject_boundary, AbsorbingLayer, Boundary, Entrance, Inflow, ResolutionWarning};
pub use drive::{Drive, DriveSpec};
pub use evolve::{EvolveConfig, Observer, TrajectoryRecord};
pub use integrator::{step, Integrator, System};
pub use noise::{complex_gaussian, sample_noise_field, trajectory_rng};
