//! Open boundaries: characteristic inflow and absorbing layers.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use super::noise::complex_gaussian;
use super::DriveSpec;
use crate::error::Error;
use crate::spectral::Spectral;
use crate::{DispersionSpec, FieldState, Grid1D, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    /// Waves enter at the upstream end (x = 0 for right-movers, x = L for
    /// left-movers) and leave through the other end without reflection.
    Open,
}

/// Which end of the grid a wave enters from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entrance {
    Left,
    Right,
}

/// Inflow of one open field.
///
/// The field's rotated dispersion must be `ω₀ + cκ` and each half-step must
/// move it by a whole number `m` of cells; free propagation is then an exact
/// shift and the `m` cells uncovered at the entrance are refilled from the
/// incoming signal `s(τ) = (α_in(τ) + a_in(τ))/√|c|`, propagated from the
/// entrance with phase `ω₀` and amplitude decay `κ/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inflow {
    pub(crate) field: usize,
    entrance: Entrance,
    cells: usize,
    speed: f64,
    omega0: f64,
    half_kappa: f64,
    dx: f64,
    drive: Option<(C64, f64)>,
    noise_var: f64,
}

impl Inflow {
    /// `dispersion` is the rotated relation of field `field`; `drive` is the
    /// endfire amplitude with its frequency relative to the envelope frame.
    pub fn new(
        field: usize,
        grid: &Grid1D,
        dispersion: &DispersionSpec,
        dt: f64,
        kappa: f64,
        drive: Option<(C64, f64)>,
        noise_occupation: Option<f64>,
    ) -> Result<Self> {
        let (omega0, c) = dispersion.linear_on(grid)?.ok_or_else(|| {
            Error::Boundary(format!("field {field}: open boundaries need a constant-velocity dispersion ω₀ + c·κ"))
        })?;
        if c == 0.0 {
            return Err(Error::Boundary(format!("field {field}: zero group velocity, nothing enters")));
        }
        let m = c.abs() * 0.5 * dt / grid.dx();
        let cells = m.round();
        if cells < 1.0 || (m - cells).abs() > 1e-9 * m {
            return Err(Error::Boundary(format!(
                "field {field}: |c|·dt/2 = {m:.6}·dx must be a whole number ≥ 1 of cells; use dt = 2·m·dx/|c| = {:e} s for m = 1",
                2.0 * grid.dx() / c.abs()
            )));
        }
        let cells = cells as usize;
        if cells > grid.n_points() / 2 {
            return Err(Error::Boundary(format!("field {field}: half-step shift of {cells} cells exceeds half the grid")));
        }
        let noise_var = noise_occupation.map_or(0.0, |n| (n + 0.5) * c.abs() / grid.dx());
        Ok(Inflow {
            field,
            entrance: if c > 0.0 { Entrance::Left } else { Entrance::Right },
            cells,
            speed: c.abs(),
            omega0,
            half_kappa: 0.5 * kappa,
            dx: grid.dx(),
            drive,
            noise_var,
        })
    }

    pub fn entrance(&self) -> Entrance {
        self.entrance
    }

    pub fn cells_per_half_step(&self) -> usize {
        self.cells
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Overwrite the entrance cells with the signal that has arrived by time `t`.
    pub fn inject(&self, field: &mut [C64], t: f64, ramp: &DriveSpec, rng: Option<&mut ChaCha8Rng>) {
        let n = field.len();
        let mut rng = rng;
        for s in 0..self.cells {
            let delay = s as f64 * self.dx / self.speed;
            let tau = t - delay;
            let mut src = match self.drive {
                Some((amp, detuning)) => {
                    let ph = -detuning * tau;
                    amp * C64::new(ph.cos(), ph.sin()) * ramp.ramp(tau)
                }
                None => C64::new(0.0, 0.0),
            };
            if let Some(r) = rng.as_deref_mut() {
                if self.noise_var > 0.0 {
                    src += complex_gaussian(r, self.noise_var);
                }
            }
            let ph = -self.omega0 * delay;
            let prop = C64::new(ph.cos(), ph.sin()) * (-self.half_kappa * delay).exp();
            let idx = match self.entrance {
                Entrance::Left => s,
                Entrance::Right => n - 1 - s,
            };
            field[idx] = src * prop / self.speed.sqrt();
        }
    }
}

/// Fill the entrance cells of photon branch `branch` at the state's time.
pub fn inject_boundary(state: &mut FieldState, branch: usize, inflow: &Inflow, ramp: &DriveSpec, rng: Option<&mut ChaCha8Rng>) {
    let t = state.time;
    inflow.inject(&mut state.photons[branch].field, t, ramp, rng);
}

/// Smooth `sin²` damping ramp at one end of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbingLayer {
    /// Fraction of the grid covered, at most 0.1.
    pub fraction: f64,
    /// Peak damping rate σ_max (1/s).
    pub strength: f64,
    pub side: Entrance,
}

impl AbsorbingLayer {
    pub fn profile(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        if !(self.fraction > 0.0 && self.fraction <= 0.1) {
            return Err(Error::param("absorber.fraction", "must lie in (0, 0.1]"));
        }
        if !(self.strength >= 0.0) {
            return Err(Error::param("absorber.strength", "must be non-negative"));
        }
        let n = grid.n_points();
        let w = ((self.fraction * n as f64).floor() as usize).max(1);
        let mut sigma = alloc::vec![0.0; n];
        for s in 0..w {
            // depth 1 at the outer edge
            let depth = (s + 1) as f64 / w as f64;
            let v = (0.5 * core::f64::consts::PI * depth).sin();
            let idx = match self.side {
                Entrance::Right => n - w + s,
                Entrance::Left => w - 1 - s,
            };
            sigma[idx] = self.strength * v * v;
        }
        Ok(sigma)
    }
}

/// Spectral power share above half the Nyquist wavenumber, when it exceeds 1e-6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionWarning {
    pub field: usize,
    pub high_k_fraction: f64,
}

pub(crate) fn high_k_fraction(spectral: &Spectral, field: &[C64]) -> f64 {
    let mut buf = field.to_vec();
    spectral.forward(&mut buf);
    let kc = 0.5 * spectral.grid().k_max();
    let (mut hi, mut tot) = (0.0, 0.0);
    for (v, k) in buf.iter().zip(spectral.grid().k_axis()) {
        tot += v.norm_sqr();
        if k.abs() > kc {
            hi += v.norm_sqr();
        }
    }
    if tot > 0.0 {
        hi / tot
    } else {
        0.0
    }
}

/// Multiply every field by `e^{−σ(x)dt}`. Returns a warning for each field
/// whose content is too short-wave for the ramp to absorb cleanly.
pub fn absorbing_layer(state: &mut FieldState, sigma: &[f64], dt: f64) -> Result<Vec<ResolutionWarning>> {
    let grid = Grid1D::new(state.n_points(), state.dx)?;
    grid.check_len(sigma.len())?;
    let spectral = Spectral::new(grid);
    let mut warnings = Vec::new();
    for (j, f) in state.fields_mut().enumerate() {
        if sigma.iter().all(|&s| s == 0.0) {
            continue;
        }
        let frac = high_k_fraction(&spectral, f);
        if frac > 1e-6 {
            warnings.push(ResolutionWarning { field: j, high_k_fraction: frac });
        }
        for (v, s) in f.iter_mut().zip(sigma) {
            *v *= (-s * dt).exp();
        }
    }
    Ok(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Frame;

    #[test]
    fn rejects_non_linear_or_fractional_shift() {
        let g = Grid1D::new(64, 1.0).unwrap();
        let quad = DispersionSpec::polynomial(alloc::vec![0.0, 1.0, 0.5]);
        assert!(matches!(Inflow::new(0, &g, &quad, 2.0, 0.0, None, None), Err(Error::Boundary(_))));
        let lin = DispersionSpec::linear(0.0, 1.0);
        assert!(Inflow::new(0, &g, &lin, 1.5, 0.0, None, None).is_err());
        let ok = Inflow::new(0, &g, &lin, 4.0, 0.0, None, None).unwrap();
        assert_eq!(ok.cells_per_half_step(), 2);
        assert_eq!(ok.entrance(), Entrance::Left);
        let left = Inflow::new(0, &g, &DispersionSpec::linear(0.0, -1.0), 2.0, 0.0, None, None).unwrap();
        assert_eq!(left.entrance(), Entrance::Right);
    }

    #[test]
    fn cw_inflow_profile() {
        let g = Grid1D::new(64, 0.5).unwrap();
        let (c, w0, kappa) = (2.0, 0.3, 0.2);
        let inflow = Inflow::new(0, &g, &DispersionSpec::linear(w0, c), 1.0, kappa, Some((C64::new(1.5, 0.0), 0.0)), None)
            .unwrap();
        assert_eq!(inflow.cells_per_half_step(), 2);
        let mut f = alloc::vec![C64::new(0.0, 0.0); 64];
        inflow.inject(&mut f, 10.0, &DriveSpec::none(), None);
        // flux |c||a|² = |A|² at the entrance, decaying with κ/c downstream
        assert!((c * f[0].norm_sqr() - 2.25).abs() < 1e-14);
        let x = g.dx();
        assert!((f[1].norm_sqr() / f[0].norm_sqr() - (-kappa * x / c).exp()).abs() < 1e-14);
        assert!(((f[1] / f[0]).arg() + w0 * x / c).abs() < 1e-14);
    }

    #[test]
    fn absorber_profile_shape() {
        let g = Grid1D::new(128, 1.0).unwrap();
        let layer = AbsorbingLayer { fraction: 0.1, strength: 5.0, side: Entrance::Right };
        let s = layer.profile(&g).unwrap();
        assert_eq!(s.iter().filter(|&&v| v > 0.0).count(), 12);
        assert_eq!(s[127], 5.0);
        assert!(s.windows(2).all(|w| w[1] >= w[0]));
        assert!(AbsorbingLayer { fraction: 0.2, ..layer }.profile(&g).is_err());
    }

    #[test]
    fn zero_absorber_is_identity_and_short_waves_warn() {
        let g = Grid1D::new(64, 1.0).unwrap();
        let smooth: Vec<C64> = (0..64).map(|i| C64::new((-((i as f64 - 32.0) / 6.0).powi(2)).exp(), 0.0)).collect();
        let mut st = FieldState::single(&g, smooth.clone(), smooth.clone(), Frame::LAB).unwrap();
        let before = st.clone();
        assert!(absorbing_layer(&mut st, &[0.0; 64], 0.1).unwrap().is_empty());
        assert_eq!(st, before);
        let sigma = AbsorbingLayer { fraction: 0.1, strength: 1.0, side: Entrance::Right }.profile(&g).unwrap();
        assert!(absorbing_layer(&mut st, &sigma, 0.1).unwrap().is_empty());
        let rough: Vec<C64> = (0..64).map(|i| C64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
        let mut st = FieldState::single(&g, rough, smooth, Frame::LAB).unwrap();
        let w = absorbing_layer(&mut st, &sigma, 0.1).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].field, 0);
    }
}
