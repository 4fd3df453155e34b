//! Spectral calculus on a [`Grid1D`]: derivatives, dispersion propagation
//! and k-space sums.

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::fft::Fft;
use crate::{DispersionSpec, Error, Grid1D, Result, C64};

/// A grid together with its transform plan.
#[derive(Debug, Clone)]
pub struct Spectral {
    grid: Grid1D,
    fft: Fft,
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let fft = Fft::new(grid.n_points()).expect("grid sizes are powers of two");
        Spectral { grid, fft }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn forward(&self, buf: &mut [C64]) {
        self.fft.forward(buf);
    }

    pub fn inverse(&self, buf: &mut [C64]) {
        self.fft.inverse(buf);
    }

    /// `out = ∂ₓ^order f`, with an optional carrier shift: the multiplier is
    /// `(i(k + shift))^order`. For odd orders the Nyquist mode is dropped so
    /// the first derivative stays a real, anti-Hermitian operator.
    pub fn derivative_into(&self, f: &[C64], order: u32, shift: f64, out: &mut [C64]) -> Result<()> {
        if order == 0 || order > 2 {
            return Err(Error::DerivativeOrder(order));
        }
        self.grid.check_len(f.len())?;
        self.grid.check_len(out.len())?;
        out.copy_from_slice(f);
        self.fft.forward(out);
        let nyq = self.grid.n_points() / 2;
        for (j, (v, &k)) in out.iter_mut().zip(self.grid.k_axis()).enumerate() {
            let kk = if j == nyq && self.grid.n_points() > 1 { 0.0 } else { k };
            *v *= match order {
                1 => C64::new(0.0, kk),
                _ => C64::new(-k * k, 0.0),
            };
        }
        self.fft.inverse(out);
        if shift != 0.0 {
            match order {
                1 => {
                    for (o, v) in out.iter_mut().zip(f) {
                        *o += C64::new(0.0, shift) * v;
                    }
                }
                _ => {
                    // (D + iq)² = D² + 2iqD − q²
                    let mut d1 = alloc::vec![C64::new(0.0, 0.0); f.len()];
                    self.derivative_into(f, 1, 0.0, &mut d1)?;
                    for ((o, v), d) in out.iter_mut().zip(f).zip(&d1) {
                        *o += C64::new(0.0, 2.0 * shift) * d - shift * shift * v;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn derivative(&self, f: &[C64], order: u32) -> Result<Vec<C64>> {
        let mut out = alloc::vec![C64::new(0.0, 0.0); f.len()];
        self.derivative_into(f, order, 0.0, &mut out)?;
        Ok(out)
    }

    /// Multiply every k-mode by `exp(−iω(k)dt)`.
    pub fn apply_dispersion(&self, field: &mut [C64], omega: &[f64], dt: f64) -> Result<()> {
        self.grid.check_len(field.len())?;
        self.grid.check_len(omega.len())?;
        self.fft.forward(field);
        for (v, &w) in field.iter_mut().zip(omega) {
            let ph = -w * dt;
            *v *= C64::new(ph.cos(), ph.sin());
        }
        self.fft.inverse(field);
        Ok(())
    }

    /// `Σ_k w(k)|f̂_k|²·dx/n`, i.e. `Σ dx f*·w(−i∂ₓ)f`.
    pub fn quadratic_form(&self, f: &[C64], weights: &[f64]) -> f64 {
        let mut buf = f.to_vec();
        self.fft.forward(&mut buf);
        let scale = self.grid.dx() / self.grid.n_points() as f64;
        buf.iter().zip(weights).map(|(v, w)| w * v.norm_sqr()).sum::<f64>() * scale
    }
}

/// `∂ₓ^order field` on `grid` (order 1 or 2).
pub fn spectral_derivative(field: &[C64], grid: &Grid1D, order: u32) -> Result<Vec<C64>> {
    Spectral::new(grid.clone()).derivative(field, order)
}

/// Free evolution of `field` over `dt` under `dispersion`.
pub fn apply_dispersion(field: &[C64], grid: &Grid1D, dispersion: &DispersionSpec, dt: f64) -> Result<Vec<C64>> {
    if !(dt >= 0.0) {
        return Err(Error::param("dt", "must be non-negative"));
    }
    let omega = dispersion.on_grid(grid)?;
    let mut out = field.to_vec();
    Spectral::new(grid.clone()).apply_dispersion(&mut out, &omega, dt)?;
    Ok(out)
}

/// Σ |f|² dx
pub fn norm_sqr(f: &[C64], dx: f64) -> f64 {
    f.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn plane(grid: &Grid1D, k: f64) -> Vec<C64> {
        grid.x_axis().map(|x| C64::new(0.0, k * x).exp()).collect()
    }

    #[test]
    fn constant_has_zero_derivative() {
        let g = Grid1D::new(32, 0.1).unwrap();
        let f = vec![C64::new(2.5, -1.0); 32];
        for order in 1..=2 {
            let d = spectral_derivative(&f, &g, order).unwrap();
            assert!(d.iter().all(|v| v.norm() < 1e-13));
        }
    }

    #[test]
    fn plane_wave_eigenfunction() {
        let g = Grid1D::new(64, 0.05).unwrap();
        let k = 5.0 * g.dk();
        let f = plane(&g, k);
        let d1 = spectral_derivative(&f, &g, 1).unwrap();
        let d2 = spectral_derivative(&f, &g, 2).unwrap();
        for i in 0..64 {
            assert!((d1[i] - C64::new(0.0, k) * f[i]).norm() < 1e-10);
            assert!((d2[i] + k * k * f[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn carrier_shift_matches_lab_derivative() {
        let g = Grid1D::new(64, 0.05).unwrap();
        let s = Spectral::new(g.clone());
        let k0 = 11.0 * g.dk();
        let env: Vec<C64> = g.x_axis().map(|x| C64::new((2.0 * PI * x / g.length()).cos(), 0.3)).collect();
        let lab: Vec<C64> = env.iter().zip(g.x_axis()).map(|(e, x)| e * C64::new(0.0, k0 * x).exp()).collect();
        for order in 1..=2 {
            let mut shifted = vec![C64::new(0.0, 0.0); 64];
            s.derivative_into(&env, order, k0, &mut shifted).unwrap();
            let dl = s.derivative(&lab, order).unwrap();
            for i in 0..64 {
                let x = g.x(i);
                let back = dl[i] * C64::new(0.0, -k0 * x).exp();
                assert!((back - shifted[i]).norm() < 1e-8 * (1.0 + k0 * k0));
            }
        }
    }

    #[test]
    fn order_validation() {
        let g = Grid1D::new(8, 1.0).unwrap();
        let f = vec![C64::new(1.0, 0.0); 8];
        assert_eq!(spectral_derivative(&f, &g, 3).unwrap_err(), Error::DerivativeOrder(3));
        assert_eq!(spectral_derivative(&f, &g, 0).unwrap_err(), Error::DerivativeOrder(0));
        assert!(matches!(spectral_derivative(&f[..4], &g, 1), Err(Error::Length { .. })));
    }

    #[test]
    fn zero_dispersion_is_identity_and_plane_wave_gets_phase() {
        let g = Grid1D::new(32, 0.2).unwrap();
        let f: Vec<C64> = (0..32).map(|i| C64::new((i as f64).sin(), 0.1 * i as f64)).collect();
        let out = apply_dispersion(&f, &g, &DispersionSpec::polynomial(vec![0.0]), 0.7).unwrap();
        for (a, b) in out.iter().zip(&f) {
            assert!((a - b).norm() < 1e-12);
        }
        let k0 = 3.0 * g.dk();
        let disp = DispersionSpec::polynomial(vec![1.5, 0.4, 0.02]);
        let w0 = disp.eval(k0).unwrap();
        let p = plane(&g, k0);
        let out = apply_dispersion(&p, &g, &disp, 0.3).unwrap();
        let ph = C64::new(0.0, -w0 * 0.3).exp();
        for (a, b) in out.iter().zip(&p) {
            assert!((a - b * ph).norm() < 1e-12);
        }
        assert!(apply_dispersion(&p, &g, &disp, -1.0).is_err());
    }
}
