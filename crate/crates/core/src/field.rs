use alloc::vec::Vec;

use crate::{Error, Grid1D, Result, C64};

/// Envelope frame: the lab field is `envelope · e^{i(k x − ω t)}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Frame {
    pub omega: f64,
    pub k: f64,
}

impl Frame {
    pub const LAB: Frame = Frame { omega: 0.0, k: 0.0 };

    pub fn rotating(omega: f64, k: f64) -> Self {
        Frame { omega, k }
    }

    pub fn is_lab(&self) -> bool {
        self.omega == 0.0 && self.k == 0.0
    }

    /// Lab phase `k x − ω t`.
    pub fn phase(&self, x: f64, t: f64) -> f64 {
        self.k * x - self.omega * t
    }
}

/// One optical branch (transverse mode, polarization or propagation direction).
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonBranch {
    /// m^(-1/2)
    pub field: Vec<C64>,
    pub frame: Frame,
}

/// Photon branches and the phonon field on one shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub photons: Vec<PhotonBranch>,
    /// m^(-1/2)
    pub phonon: Vec<C64>,
    pub phonon_frame: Frame,
    pub dx: f64,
    /// s
    pub time: f64,
}

impl FieldState {
    pub fn vacuum(grid: &Grid1D, photon_frames: &[Frame], phonon_frame: Frame) -> Self {
        let n = grid.n_points();
        FieldState {
            photons: photon_frames
                .iter()
                .map(|&frame| PhotonBranch { field: alloc::vec![C64::new(0.0, 0.0); n], frame })
                .collect(),
            phonon: alloc::vec![C64::new(0.0, 0.0); n],
            phonon_frame,
            dx: grid.dx(),
            time: 0.0,
        }
    }

    /// A single photon branch `a` in `frame` plus a lab-frame phonon field `b`.
    pub fn single(grid: &Grid1D, a: Vec<C64>, b: Vec<C64>, frame: Frame) -> Result<Self> {
        grid.check_len(a.len())?;
        grid.check_len(b.len())?;
        Ok(FieldState {
            photons: alloc::vec![PhotonBranch { field: a, frame }],
            phonon: b,
            phonon_frame: Frame::LAB,
            dx: grid.dx(),
            time: 0.0,
        })
    }

    pub fn n_points(&self) -> usize {
        self.phonon.len()
    }

    /// First photon branch.
    pub fn a(&self) -> &[C64] {
        &self.photons[0].field
    }

    pub fn b(&self) -> &[C64] {
        &self.phonon
    }

    pub fn photon_number(&self, branch: usize) -> f64 {
        crate::spectral::norm_sqr(&self.photons[branch].field, self.dx)
    }

    pub fn total_photon_number(&self) -> f64 {
        (0..self.photons.len()).map(|j| self.photon_number(j)).sum()
    }

    pub fn phonon_number(&self) -> f64 {
        crate::spectral::norm_sqr(&self.phonon, self.dx)
    }

    pub fn is_finite(&self) -> bool {
        self.photons.iter().all(|p| p.field.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
            && self.phonon.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub(crate) fn check_grid(&self, grid: &Grid1D) -> Result<()> {
        grid.check_len(self.phonon.len())?;
        for p in &self.photons {
            grid.check_len(p.field.len())?;
        }
        if (self.dx - grid.dx()).abs() > 1e-12 * grid.dx() {
            return Err(Error::GridSpacing(self.dx));
        }
        Ok(())
    }

    /// Iterate mutably over all fields, photons first.
    pub fn fields_mut(&mut self) -> impl Iterator<Item = &mut Vec<C64>> {
        self.photons.iter_mut().map(|p| &mut p.field).chain(core::iter::once(&mut self.phonon))
    }

    pub fn fields(&self) -> impl Iterator<Item = &Vec<C64>> {
        self.photons.iter().map(|p| &p.field).chain(core::iter::once(&self.phonon))
    }
}
