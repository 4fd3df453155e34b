#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Uniform periodic grid on `[0, n·dx)`.
///
/// The wavenumber axis follows the usual discrete-transform ordering:
/// `k_j = j·dk` for `j < n/2`, `(j − n)·dk` above, so `k[0] = 0` and the
/// Nyquist entry is `−π/dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    dx: f64,
    k_axis: Vec<f64>,
}

impl Grid1D {
    pub fn new(n_points: usize, dx: f64) -> Result<Self> {
        if n_points == 0 || !n_points.is_power_of_two() {
            return Err(Error::GridSize(n_points));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::GridSpacing(dx));
        }
        let dk = 2.0 * PI / (n_points as f64 * dx);
        let k_axis = (0..n_points)
            .map(|j| {
                let m = if j < n_points / 2 { j as i64 } else { j as i64 - n_points as i64 };
                m as f64 * dk
            })
            .collect();
        Ok(Grid1D { n_points, dx, k_axis })
    }

    pub fn with_length(n_points: usize, length: f64) -> Result<Self> {
        Self::new(n_points, length / n_points as f64)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn length(&self) -> f64 {
        self.n_points as f64 * self.dx
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length()
    }

    pub fn k_axis(&self) -> &[f64] {
        &self.k_axis
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn x_axis(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Index of the grid wavenumber equal to `k`, if `k` lies on the axis.
    pub fn k_index(&self, k: f64) -> Option<usize> {
        let m = k / self.dk();
        let r = m.round();
        if (m - r).abs() > 1e-9 * (1.0 + m.abs()) {
            return None;
        }
        let half = (self.n_points / 2) as i64;
        let r = r as i64;
        if r < -half || r >= half {
            return None;
        }
        Some(r.rem_euclid(self.n_points as i64) as usize)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_points {
            return Err(Error::Length { expected: self.n_points, got: len });
        }
        Ok(())
    }
}
