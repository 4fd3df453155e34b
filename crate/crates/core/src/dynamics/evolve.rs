use alloc::vec::Vec;

use super::Integrator;
use crate::error::Error;
use crate::interaction::Nonlinearity;
use crate::{FieldState, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub steps: u64,
    /// Record and call observers every this many steps (and after the last one).
    pub output_every: u64,
    pub record_energy: bool,
    /// Reject step sizes above the stability estimate of the initial state.
    pub check_stability: bool,
}

impl EvolveConfig {
    pub fn new(steps: u64, output_every: u64) -> Self {
        EvolveConfig { steps, output_every, record_energy: false, check_stability: true }
    }

    pub fn with_energy(mut self) -> Self {
        self.record_energy = true;
        self
    }
}

pub trait Observer {
    fn observe(&mut self, step: u64, state: &FieldState);
}

impl<F: FnMut(u64, &FieldState)> Observer for F {
    fn observe(&mut self, step: u64, state: &FieldState) {
        self(step, state)
    }
}

/// Observables recorded at the output cadence.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub steps: Vec<u64>,
    pub times: Vec<f64>,
    /// Indexed `[record][branch]`.
    pub photon_numbers: Vec<Vec<f64>>,
    pub phonon_numbers: Vec<f64>,
    /// Empty unless requested.
    pub energies: Vec<f64>,
    pub final_state: FieldState,
}

impl<N: Nonlinearity> Integrator<N> {
    fn record(&self, rec: &mut TrajectoryRecord, step: u64, state: &FieldState, energy: bool) {
        rec.steps.push(step);
        rec.times.push(state.time);
        rec.photon_numbers.push((0..state.photons.len()).map(|j| state.photon_number(j)).collect());
        rec.phonon_numbers.push(state.phonon_number());
        if energy {
            rec.energies.push(self.energy(state).unwrap_or(f64::NAN));
        }
    }

    /// Step `state` `cfg.steps` times, recording observables and calling
    /// the observers at the output cadence.
    pub fn evolve(
        &mut self,
        mut state: FieldState,
        cfg: &EvolveConfig,
        observers: &mut [&mut dyn Observer],
    ) -> Result<TrajectoryRecord> {
        if cfg.output_every == 0 {
            return Err(Error::param("output_every", "must be at least 1"));
        }
        if cfg.check_stability {
            let bound = self.stability_bound(&state);
            if self.dt() > bound {
                return Err(Error::param(
                    "dt",
                    alloc::format!("{:e} s exceeds the stability estimate {bound:e} s", self.dt()),
                ));
            }
        }
        let mut rec = TrajectoryRecord {
            steps: Vec::new(),
            times: Vec::new(),
            photon_numbers: Vec::new(),
            phonon_numbers: Vec::new(),
            energies: Vec::new(),
            final_state: state.clone(),
        };
        self.record(&mut rec, 0, &state, cfg.record_energy);
        for o in observers.iter_mut() {
            o.observe(0, &state);
        }
        for s in 1..=cfg.steps {
            self.step(&mut state)?;
            if s % cfg.output_every == 0 || s == cfg.steps {
                self.record(&mut rec, s, &state, cfg.record_energy);
                for o in observers.iter_mut() {
                    o.observe(s, &state);
                }
            }
        }
        rec.final_state = state;
        Ok(rec)
    }
}
