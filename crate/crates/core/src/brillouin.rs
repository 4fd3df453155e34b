//! Brillouin limit: the phonon decay length is short, so the phonon field
//! follows the optical beat locally and can be eliminated.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;

use crate::error::Error;
use crate::{Result, C64, HBAR};

/// Two-branch scattering parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrillouinParams {
    /// Bare coupling g̃₀(1,2) (Hz·m^(1/2)).
    pub g0_12: C64,
    /// Pump amplitude α₁ (m^(-1/2)).
    pub alpha1: C64,
    /// Group velocities of pump, Stokes and phonon (m/s).
    pub v1: f64,
    pub v2: f64,
    pub vb: f64,
    /// Phonon decay rate Γ (1/s).
    pub gamma: f64,
    /// Stokes energy decay rate κ₂ (1/s).
    pub kappa2: f64,
    /// Pump and Stokes frequencies (rad/s).
    pub omega1: f64,
    pub omega2: f64,
    /// Phonon resonance Ω₀ (rad/s).
    pub omega_b0: f64,
}

/// Warn when the phonon decays less than this many times faster (in space) than the light.
pub const ADIABATIC_WARN_RATIO: f64 = 100.0;
/// Refuse to eliminate the phonon below this ratio.
pub const ADIABATIC_MIN_RATIO: f64 = 10.0;

impl BrillouinParams {
    /// Pump-enhanced coupling g̃₁₂ = g̃₀(1,2)·α₁ (Hz).
    pub fn g12(&self) -> C64 {
        self.g0_12 * self.alpha1
    }

    /// γ₂ = κ₂/v₂ (1/m).
    pub fn gamma2(&self) -> f64 {
        self.kappa2 / self.v2
    }

    /// γ_b = Γ/v_b (1/m).
    pub fn gamma_b(&self) -> f64 {
        self.gamma / self.vb
    }

    /// Pump power P₁ = ħω₁v₁|α₁|².
    pub fn pump_power(&self) -> f64 {
        photon_power(self.omega1, self.v1, self.alpha1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v1 > 0.0 && self.v2 > 0.0 && self.vb > 0.0) {
            return Err(Error::param("velocity", "v1, v2 and vb must be positive"));
        }
        if !(self.gamma >= 0.0 && self.kappa2 >= 0.0) {
            return Err(Error::param("decay", "Gamma and kappa2 must be non-negative"));
        }
        Ok(())
    }
}

/// Travelling-wave photon power `ħωv|α|²` (W).
pub fn photon_power(omega: f64, v: f64, alpha: C64) -> f64 {
    HBAR * omega * v * alpha.norm_sqr()
}

/// Travelling-wave phonon power `ħΩv_b|β|²` (W).
pub fn phonon_power(omega_b: f64, vb: f64, beta: C64) -> f64 {
    HBAR * omega_b * vb * beta.norm_sqr()
}

/// Amplitude `|α|` (m^(-1/2)) of a wave carrying `power`.
pub fn amplitude_from_power(power: f64, omega: f64, v: f64) -> f64 {
    (power / (HBAR * omega * v)).sqrt()
}

/// `G_B = 4|g̃₀(1,2)|²/(v₁v₂Γħω₁)` in 1/(W·m).
pub fn brillouin_gain(g0_12: f64, v1: f64, v2: f64, gamma: f64, omega1: f64) -> Result<f64> {
    if gamma == 0.0 {
        return Err(Error::param("Gamma", "the adiabatic limit needs phonon damping"));
    }
    if !(v1 > 0.0 && v2 > 0.0 && gamma > 0.0 && omega1 > 0.0) {
        return Err(Error::param("brillouin_gain", "velocities, Gamma and omega1 must be positive"));
    }
    Ok(4.0 * g0_12 * g0_12 / (v1 * v2 * gamma * HBAR * omega1))
}

/// Inverse of [`brillouin_gain`]: the coupling magnitude for a given `G_B`.
pub fn g0_from_gain(gain: f64, v1: f64, v2: f64, gamma: f64, omega1: f64) -> Result<f64> {
    if !(gain >= 0.0) {
        return Err(Error::param("gain", "must be non-negative"));
    }
    let unit = brillouin_gain(1.0, v1, v2, gamma, omega1)?;
    Ok((gain / unit).sqrt())
}

/// `γ⁽³⁾(Ω) = −(1/v₂)|g̃₀(1,2)|²/(Ω − Ω₀ − iΓ/2)`.
pub fn nonlinear_susceptibility(omega: f64, p: &BrillouinParams) -> C64 {
    -p.g0_12.norm_sqr() / p.v2 / C64::new(omega - p.omega_b0, -0.5 * p.gamma)
}

/// Frequency-resolved gain `−2 Im γ⁽³⁾/(ħω₁v₁)` in 1/(W·m).
pub fn gain_from_susceptibility(chi: C64, omega1: f64, v1: f64) -> f64 {
    -2.0 * chi.im / (HBAR * omega1 * v1)
}

/// Photon-only spatial equation `∂ₓδa₂ = (gain − γ₂/2)·δa₂` after eliminating the phonon.
#[derive(Debug, Clone, PartialEq)]
pub struct Adiabatic {
    /// Amplitude gain `2|g̃₁₂|²/(v₂Γ)` (1/m).
    pub amplitude_gain: f64,
    /// Amplitude loss `γ₂/2` (1/m).
    pub amplitude_loss: f64,
    /// `γ_b/γ₂`.
    pub decay_ratio: f64,
    /// True when the ratio is below [`ADIABATIC_WARN_RATIO`].
    pub warn: bool,
    /// Local phonon `δb = 2i g̃₁₂ δa₂*/Γ` at the supplied Stokes samples.
    pub phonon: Vec<C64>,
}

impl Adiabatic {
    /// Net exponential rate of the Stokes power, `G_B P₁ − γ₂` (1/m).
    pub fn power_rate(&self) -> f64 {
        2.0 * (self.amplitude_gain - self.amplitude_loss)
    }
}

/// Eliminate the phonon for Stokes samples `stokes` (m^(-1/2)).
pub fn adiabatic_eliminate(stokes: &[C64], p: &BrillouinParams) -> Result<Adiabatic> {
    p.validate()?;
    if p.gamma == 0.0 {
        return Err(Error::param("Gamma", "the adiabatic limit needs phonon damping"));
    }
    let ratio = if p.kappa2 == 0.0 { f64::INFINITY } else { p.gamma_b() / p.gamma2() };
    if ratio < ADIABATIC_MIN_RATIO {
        return Err(Error::param(
            "gamma_b/gamma2",
            alloc::format!("{ratio:.3} is too small for a local phonon response (need ≥ {ADIABATIC_MIN_RATIO})"),
        ));
    }
    let g12 = p.g12();
    let coeff = C64::new(0.0, 2.0) * g12 / p.gamma;
    Ok(Adiabatic {
        amplitude_gain: 2.0 * g12.norm_sqr() / (p.v2 * p.gamma),
        amplitude_loss: 0.5 * p.gamma2(),
        decay_ratio: ratio,
        warn: ratio < ADIABATIC_WARN_RATIO,
        phonon: stokes.iter().map(|a| coeff * a.conj()).collect(),
    })
}
