use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;

use crate::error::Error;
use crate::{Result, C64, HBAR};

/// One coherent drive acting on a photon branch.
#[derive(Debug, Clone, PartialEq)]
pub enum Drive {
    /// Injected through the entrance of an open branch. `amplitude` is in
    /// s^(-1/2), so the launched photon flux is `|amplitude|²`.
    Endfire { branch: usize, amplitude: C64, omega: f64 },
    /// Coupled in along the waveguide at rate `kappa_ex`: `∂ₜa −= √κ_ex·α_in(x)e^{−iωt}`,
    /// with `profile` in s^(-1/2)·m^(-1/2).
    Side { branch: usize, kappa_ex: f64, omega: f64, profile: Vec<C64> },
}

impl Drive {
    pub fn branch(&self) -> usize {
        match self {
            Drive::Endfire { branch, .. } | Drive::Side { branch, .. } => *branch,
        }
    }

    pub fn omega(&self) -> f64 {
        match self {
            Drive::Endfire { omega, .. } | Drive::Side { omega, .. } => *omega,
        }
    }

    /// Launched power `ħω|α_in|²` of an endfire drive.
    pub fn power(&self) -> Option<f64> {
        match self {
            Drive::Endfire { amplitude, omega, .. } => Some(HBAR * omega * amplitude.norm_sqr()),
            Drive::Side { .. } => None,
        }
    }

    /// Endfire drive launching `power` watts.
    pub fn endfire_power(branch: usize, power: f64, omega: f64) -> Self {
        Drive::Endfire { branch, amplitude: C64::new((power / (HBAR * omega)).sqrt(), 0.0), omega }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DriveSpec {
    pub drives: Vec<Drive>,
    /// Drives switch on smoothly over this time (s); zero means always on.
    pub ramp_time: f64,
}

impl DriveSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn single(drive: Drive) -> Self {
        DriveSpec { drives: alloc::vec![drive], ramp_time: 0.0 }
    }

    pub fn with_ramp(mut self, ramp_time: f64) -> Self {
        self.ramp_time = ramp_time;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.drives.is_empty()
    }

    /// Smooth `sin²` switch-on factor at time `t`.
    pub fn ramp(&self, t: f64) -> f64 {
        if self.ramp_time <= 0.0 {
            1.0
        } else if t <= 0.0 {
            0.0
        } else if t >= self.ramp_time {
            1.0
        } else {
            let s = (0.5 * core::f64::consts::PI * t / self.ramp_time).sin();
            s * s
        }
    }

    pub fn validate(&self, n_branches: usize, n_points: usize) -> Result<()> {
        if !(self.ramp_time >= 0.0) {
            return Err(Error::param("ramp_time", "must be non-negative"));
        }
        for d in &self.drives {
            if d.branch() >= n_branches {
                return Err(Error::param("drive", "refers to a missing photon branch"));
            }
            if let Drive::Side { kappa_ex, profile, .. } = d {
                if !(*kappa_ex >= 0.0) {
                    return Err(Error::param("kappa_ex", "must be non-negative"));
                }
                if profile.len() != n_points {
                    return Err(Error::Length { expected: n_points, got: profile.len() });
                }
            }
        }
        Ok(())
    }
}
