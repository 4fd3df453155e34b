//! Plane-wave scattering amplitudes and multi-branch bookkeeping.
//!
//! For `a = e^{ikx}` and `u = e^{iqx}` the interaction Hamiltonian reduces
//! to `−ħ V(k,q) a†_{k+q} a_k u_q`, so `∂ₜa_{k+q} = i V(k,q) a_k u_q`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::interaction::BranchCoupling;
use crate::{CouplingSet, DispersionSpec, Result, C64};

/// `V(k,q)` in Hz·m^(1/2). The even constants contribute
/// `g⁺⁺⁺ + g⁻⁻⁺(k+q)k + g⁻⁺⁻(k+q)q − g⁻⁺⁻*kq`; the odd ones
/// `iq g⁺⁺⁻ − i(k+q) g⁻⁺⁺ + ik g⁻⁺⁺* + ik(k+q)q g⁻⁻⁻`.
pub fn vertex_amplitude(c: &CouplingSet, k: f64, q: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let kq = k + q;
    let even = c.g_ppp + c.g_mmp * kq * k + c.g_mpm * (kq * q) - c.g_mpm.conj() * (k * q);
    let odd = i * q * c.g_ppm - i * kq * c.g_mpp + i * k * c.g_mpp.conj() + i * (k * kq * q * c.g_mmm);
    even + odd
}

/// Intraband forward scattering, `q = 0`: `g⁺⁺⁺ + g⁻⁻⁺k²` for the even sector.
pub fn forward_amplitude(c: &CouplingSet, k: f64) -> C64 {
    vertex_amplitude(c, k, 0.0)
}

/// Backscattering `k → −k`, `q = −2k`.
pub fn backward_amplitude(c: &CouplingSet, k: f64) -> C64 {
    vertex_amplitude(c, k, -2.0 * k)
}

/// Optical branches with labels and their bare coupling matrix `g̃₀(j,l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    pub branches: Vec<(DispersionSpec, String)>,
    g0: BranchCoupling,
}

impl BranchSet {
    /// `g0_matrix` is row-major and must be Hermitian.
    pub fn new(branches: Vec<(DispersionSpec, String)>, g0_matrix: Vec<C64>) -> Result<Self> {
        let g0 = BranchCoupling::new(branches.len(), g0_matrix)?;
        Ok(BranchSet { branches, g0 })
    }

    pub fn n_branches(&self) -> usize {
        self.branches.len()
    }

    pub fn label(&self, j: usize) -> &str {
        &self.branches[j].1
    }

    pub fn dispersion(&self, j: usize) -> &DispersionSpec {
        &self.branches[j].0
    }

    /// Coupling for scattering from branch `l` into branch `j`.
    pub fn g0(&self, j: usize, l: usize) -> C64 {
        self.g0.get(j, l)
    }

    pub fn coupling(&self) -> &BranchCoupling {
        &self.g0
    }

    pub fn dispersions(&self) -> Vec<DispersionSpec> {
        self.branches.iter().map(|b| b.0.clone()).collect()
    }
}
