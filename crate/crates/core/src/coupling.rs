//! The six leading-order real-space coupling constants.
//!
//! The interaction Hamiltonian is `−ħ ∫dx (…)` with the integrand built from
//!
//! | even                          | odd                            |
//! |-------------------------------|--------------------------------|
//! | `g_ppp a†a u`                 | `g_ppm a†a ∂u`                 |
//! | `g_mmp (∂a†)(∂a) u`           | `g_mpp (∂a†) a u + h.c.`       |
//! | `g_mpm (∂a†) a (∂u) + h.c.`   | `g_mmm (∂a†)(∂a)(∂u)`          |
//!
//! with `u = b + b†`.

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    /// Hz·m^(1/2)
    pub g_ppp: f64,
    /// Hz·m^(5/2)
    pub g_mmp: f64,
    /// Hz·m^(5/2)
    pub g_mpm: C64,
    /// Hz·m^(3/2)
    pub g_ppm: f64,
    /// Hz·m^(3/2)
    pub g_mpp: C64,
    /// Hz·m^(7/2)
    pub g_mmm: f64,
    pub sector: Sector,
    /// Required for [`Sector::Mixed`].
    pub broken_inversion: bool,
}

const ZERO: C64 = C64::new(0.0, 0.0);

impl CouplingSet {
    pub fn zero() -> Self {
        CouplingSet {
            g_ppp: 0.0,
            g_mmp: 0.0,
            g_mpm: ZERO,
            g_ppm: 0.0,
            g_mpp: ZERO,
            g_mmm: 0.0,
            sector: Sector::Even,
            broken_inversion: false,
        }
    }

    /// Only the local coupling `g̃₀ = g_ppp`.
    pub fn simple(g0: f64) -> Self {
        CouplingSet { g_ppp: g0, ..Self::zero() }
    }

    pub fn even(g_ppp: f64, g_mmp: f64, g_mpm: C64) -> Self {
        CouplingSet { g_ppp, g_mmp, g_mpm, ..Self::zero() }
    }

    pub fn odd(g_ppm: f64, g_mpp: C64, g_mmm: f64) -> Self {
        CouplingSet { g_ppm, g_mpp, g_mmm, sector: Sector::Odd, ..Self::zero() }
    }

    pub fn mixed(even: CouplingSet, odd: CouplingSet) -> Self {
        CouplingSet {
            g_ppm: odd.g_ppm,
            g_mpp: odd.g_mpp,
            g_mmm: odd.g_mmm,
            sector: Sector::Mixed,
            broken_inversion: true,
            ..even
        }
    }

    fn has_even(&self) -> bool {
        self.g_ppp != 0.0 || self.g_mmp != 0.0 || self.g_mpm != ZERO
    }

    fn has_odd(&self) -> bool {
        self.g_ppm != 0.0 || self.g_mpp != ZERO || self.g_mmm != 0.0
    }

    pub fn is_zero(&self) -> bool {
        !self.has_even() && !self.has_odd()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.g_ppp, self.g_mmp, self.g_mpm.re, self.g_mpm.im, self.g_ppm, self.g_mpp.re, self.g_mpp.im, self.g_mmm]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::param("couplings", "non-finite coupling constant"));
        }
        match self.sector {
            Sector::Even if self.has_odd() => Err(Error::Sector("even sector with nonzero odd constants")),
            Sector::Odd if self.has_even() => Err(Error::Sector("odd sector with nonzero even constants")),
            Sector::Mixed if !self.broken_inversion => {
                Err(Error::Sector("mixed sector requires the broken-inversion-symmetry flag"))
            }
            _ => Ok(()),
        }
    }
}
