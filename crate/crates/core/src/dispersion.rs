#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::{Error, Frame, Grid1D, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DispersionKind {
    /// `Σ cₙ κⁿ` in rad/s, `κ` measured from the reference wavenumber.
    Polynomial(Vec<f64>),
    /// Values (rad/s) at the lab wavenumbers of a grid's `k_axis`.
    Tabulated(Vec<f64>),
}

/// A dispersion relation `ω(k)` (photons) or `Ω(k)` (phonons).
///
/// Frames are handled by [`DispersionSpec::rotating`]: the result evaluates
/// `ω(k_ref + κ) − ω_ref` on a grid whose axis holds `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSpec {
    pub kind: DispersionKind,
    pub reference_k: f64,
    pub offset: f64,
}

impl DispersionSpec {
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        DispersionSpec { kind: DispersionKind::Polynomial(coeffs), reference_k: 0.0, offset: 0.0 }
    }

    pub fn tabulated(values: Vec<f64>) -> Self {
        DispersionSpec { kind: DispersionKind::Tabulated(values), reference_k: 0.0, offset: 0.0 }
    }

    /// `ω = ω₀ + v·κ`
    pub fn linear(omega0: f64, velocity: f64) -> Self {
        Self::polynomial(alloc::vec![omega0, velocity])
    }

    pub fn flat(omega0: f64) -> Self {
        Self::polynomial(alloc::vec![omega0])
    }

    /// Polynomial coefficients taken about the lab wavenumber `k_ref`.
    pub fn about(k_ref: f64, coeffs: Vec<f64>) -> Self {
        DispersionSpec { kind: DispersionKind::Polynomial(coeffs), reference_k: k_ref, offset: 0.0 }
    }

    /// Polynomial value at `κ`; `None` for tabulated relations.
    pub fn eval(&self, kappa: f64) -> Option<f64> {
        match &self.kind {
            DispersionKind::Polynomial(c) => Some(horner(c, kappa) - self.offset),
            DispersionKind::Tabulated(_) => None,
        }
    }

    /// Polynomial `dω/dk` at `κ`; `None` for tabulated relations.
    pub fn group_velocity_at(&self, kappa: f64) -> Option<f64> {
        match &self.kind {
            DispersionKind::Polynomial(c) => {
                let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(n, v)| n as f64 * v).collect();
                Some(horner(&d, kappa))
            }
            DispersionKind::Tabulated(_) => None,
        }
    }

    /// The relation seen in `frame`: `ω(k_frame + κ) − ω_frame`. `self` is a
    /// lab-frame relation; `frame.k` is a lab wavenumber.
    pub fn rotating(&self, frame: Frame) -> Self {
        match &self.kind {
            DispersionKind::Polynomial(c) => {
                // fold the frame frequency into the constant term so a large
                // carrier does not swamp the κ dependence in rounding
                let mut c = reexpand(c, frame.k - self.reference_k);
                if c.is_empty() {
                    c.push(0.0);
                }
                c[0] -= self.offset + frame.omega;
                DispersionSpec { kind: DispersionKind::Polynomial(c), reference_k: frame.k, offset: 0.0 }
            }
            t @ DispersionKind::Tabulated(_) => {
                DispersionSpec { kind: t.clone(), reference_k: frame.k, offset: self.offset + frame.omega }
            }
        }
    }

    /// Values on `grid.k_axis()`.
    pub fn on_grid(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        let out: Vec<f64> = match &self.kind {
            DispersionKind::Polynomial(c) => grid.k_axis().iter().map(|&k| horner(c, k) - self.offset).collect(),
            DispersionKind::Tabulated(v) => {
                grid.check_len(v.len())?;
                let shift = if self.reference_k == 0.0 {
                    0
                } else {
                    grid.k_index(self.reference_k).ok_or_else(|| {
                        Error::param("reference_k", "tabulated dispersion can only be shifted by a grid wavenumber")
                    })?
                };
                let n = grid.n_points();
                (0..n).map(|j| v[(j + shift) % n] - self.offset).collect()
            }
        };
        if out.iter().any(|w| !w.is_finite()) {
            return Err(Error::param("dispersion", "non-finite value on the grid"));
        }
        Ok(out)
    }

    /// Group velocity on the grid (tabulated relations use periodic central differences).
    pub fn group_velocity_on(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        match &self.kind {
            DispersionKind::Polynomial(_) => {
                Ok(grid.k_axis().iter().map(|&k| self.group_velocity_at(k).unwrap()).collect())
            }
            DispersionKind::Tabulated(_) => {
                let w = self.on_grid(grid)?;
                let n = w.len();
                let dk = grid.dk();
                Ok((0..n).map(|j| (w[(j + 1) % n] - w[(j + n - 1) % n]) / (2.0 * dk)).collect())
            }
        }
    }

    /// `(ω₀, c)` when the relation is `ω₀ + c·κ` across the whole grid.
    pub fn linear_on(&self, grid: &Grid1D) -> Result<Option<(f64, f64)>> {
        let w = self.on_grid(grid)?;
        let n = w.len();
        if n < 2 {
            return Ok(None);
        }
        let w0 = w[0];
        let c = (w[1] - w0) / grid.k_axis()[1];
        let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs())) + c.abs() * grid.k_max();
        let ok = w
            .iter()
            .zip(grid.k_axis())
            .all(|(v, k)| (v - (w0 + c * k)).abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE));
        Ok(ok.then_some((w0, c)))
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

// coefficients of p(k₀ + κ) in powers of κ
fn reexpand(c: &[f64], k0: f64) -> Vec<f64> {
    let n = c.len();
    let mut out = alloc::vec![0.0; n];
    for (deg, &cn) in c.iter().enumerate() {
        let mut binom = 1.0;
        for m in 0..=deg {
            out[m] += cn * binom * k0.powi((deg - m) as i32);
            binom = binom * (deg - m) as f64 / (m + 1) as f64;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotating_frame_shifts_polynomial() {
        let d = DispersionSpec::polynomial(alloc::vec![1.0, 2.0, 0.5, -0.1]);
        let frame = Frame::rotating(d.eval(3.0).unwrap(), 3.0);
        let r = d.rotating(frame);
        for &kap in &[-1.0, 0.0, 0.25, 2.0] {
            let want = d.eval(3.0 + kap).unwrap() - frame.omega;
            assert!((r.eval(kap).unwrap() - want).abs() < 1e-10);
        }
        assert!(r.eval(0.0).unwrap().abs() < 1e-12);
        assert!((r.group_velocity_at(0.0).unwrap() - d.group_velocity_at(3.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn carrier_referenced_polynomial() {
        let k1 = 5.0e6;
        let d = DispersionSpec::about(k1, alloc::vec![1.2e15, 7e7, 3.0]);
        let r = d.rotating(Frame::rotating(1.2e15, k1));
        assert_eq!(r.eval(0.0), Some(0.0));
        assert!((r.eval(2.0).unwrap() - (7e7 * 2.0 + 12.0)).abs() < 1e-6);
        let off = d.rotating(Frame::rotating(1.2e15, k1 + 1.0));
        assert!((off.eval(0.0).unwrap() - (7e7 + 3.0)).abs() < 1e-6);
    }

    #[test]
    fn tabulated_shift_by_grid_wavenumber() {
        let g = Grid1D::new(16, 0.25).unwrap();
        let lab: Vec<f64> = g.k_axis().iter().map(|k| k * k).collect();
        let d = DispersionSpec::tabulated(lab);
        let k0 = 2.0 * g.dk();
        let r = d.rotating(Frame::rotating(k0 * k0, k0));
        let w = r.on_grid(&g).unwrap();
        // interior (no wrap) entries follow (k0 + κ)² − k0²
        for j in 0..5 {
            let kap = g.k_axis()[j];
            assert!((w[j] - ((k0 + kap).powi(2) - k0 * k0)).abs() < 1e-9);
        }
        let bad = d.rotating(Frame::rotating(0.0, 0.3 * g.dk()));
        assert!(bad.on_grid(&g).is_err());
    }

    #[test]
    fn linear_detection() {
        let g = Grid1D::new(32, 0.1).unwrap();
        let (w0, c) = DispersionSpec::linear(0.5, 3.0).linear_on(&g).unwrap().unwrap();
        assert!((w0 - 0.5).abs() < 1e-15 && (c - 3.0).abs() < 1e-14);
        assert_eq!(DispersionSpec::polynomial(alloc::vec![0.0, 1.0, 0.1]).linear_on(&g).unwrap(), None);
    }
}
