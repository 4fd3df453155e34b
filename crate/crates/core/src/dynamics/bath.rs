use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;

use crate::error::Error;
use crate::{Result, HBAR, K_B};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    #[default]
    None,
    /// Symmetrized noise with variance `n̄ + 1/2`.
    Wigner,
}

/// Thermal phonon occupation, given directly or through a temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermal {
    Occupation(f64),
    /// Bose occupation at `omega_ref` (rad/s).
    Temperature { kelvin: f64, omega_ref: f64 },
}

impl Default for Thermal {
    fn default() -> Self {
        Thermal::Occupation(0.0)
    }
}

/// Dissipation and noise of all fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BathSpec {
    /// Photon energy decay rate κ (1/s), used for branches not listed in `branch_kappa`.
    pub kappa: f64,
    /// Per-branch photon decay rates overriding `kappa`.
    pub branch_kappa: Vec<f64>,
    /// Phonon decay rate Γ (1/s).
    pub gamma_mech: f64,
    pub thermal: Thermal,
    pub sampling: Sampling,
}

impl BathSpec {
    pub fn lossless() -> Self {
        Self::default()
    }

    pub fn photon_kappa(&self, branch: usize) -> f64 {
        self.branch_kappa.get(branch).copied().unwrap_or(self.kappa)
    }

    pub fn n_th(&self) -> f64 {
        match self.thermal {
            Thermal::Occupation(n) => n,
            Thermal::Temperature { kelvin, omega_ref } => {
                if kelvin == 0.0 {
                    0.0
                } else {
                    1.0 / ((HBAR * omega_ref / (K_B * kelvin)).exp() - 1.0)
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !nonneg(self.kappa) || !self.branch_kappa.iter().all(|&k| nonneg(k)) {
            return Err(Error::param("kappa", "photon decay rates must be finite and non-negative"));
        }
        if !nonneg(self.gamma_mech) {
            return Err(Error::param("gamma_mech", "must be finite and non-negative"));
        }
        match self.thermal {
            Thermal::Occupation(n) if !nonneg(n) => Err(Error::param("n_th", "must be non-negative")),
            Thermal::Temperature { kelvin, omega_ref } if !nonneg(kelvin) || !(omega_ref > 0.0) => {
                Err(Error::param("temperature", "needs T ≥ 0 and a positive reference frequency"))
            }
            _ => Ok(()),
        }
    }
}
