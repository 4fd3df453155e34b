//! Interaction terms of the equations of motion.
//!
//! Two models are supported.
//!
//! * **Single branch**: one photon field `a` (any frame) and a lab-frame
//!   phonon field `b`, coupled by the six real-space terms of
//!   [`CouplingSet`]. Spatial derivatives of the photon field act on the lab
//!   field, so in a frame with carrier `k_f` they become `∂ + i k_f`.
//! * **Multiple branches**: photon branches `a_j` and one phonon field,
//!   coupled by the local matrix `g̃₀(j,l)` through
//!   `−ħ g̃₀(j,l) a_j† a_l û`. Terms whose carrier phases do not cancel are
//!   dropped (rotating-wave approximation) unless explicit phases are
//!   requested.
//!
//! Both models derive from a real Hamiltonian via `∂ₜψ = −i δH/δψ*`, so
//! photon number is conserved by the interaction and the classical energy
//! [`Interaction::energy`] is a constant of the closed motion.

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::spectral::Spectral;
use crate::{CouplingSet, Error, FieldState, Frame, Grid1D, Result, C64};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Local coupling matrix between photon branches, `g[j][l]` in Hz·m^(1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCoupling {
    n: usize,
    g: Vec<C64>,
    /// Keep every term with its explicit phase instead of dropping
    /// phase-mismatched ones.
    pub exact_phases: bool,
}

impl BranchCoupling {
    /// `g` is row-major, `n × n`, and must be Hermitian.
    pub fn new(n: usize, g: Vec<C64>) -> Result<Self> {
        if g.len() != n * n {
            return Err(Error::Length { expected: n * n, got: g.len() });
        }
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        for j in 0..n {
            for l in 0..n {
                if !(g[j * n + l].re.is_finite() && g[j * n + l].im.is_finite()) {
                    return Err(Error::param("g0_matrix", "non-finite entry"));
                }
                if (g[j * n + l] - g[l * n + j].conj()).norm() > 1e-12 * scale {
                    return Err(Error::param("g0_matrix", "must satisfy g(l,j) = conj(g(j,l))"));
                }
            }
        }
        Ok(BranchCoupling { n, g, exact_phases: false })
    }

    /// Two branches coupled by `g(1,2) = g12`, `g(2,1) = conj(g12)`; zero diagonal.
    pub fn pair(g12: C64) -> Self {
        BranchCoupling { n: 2, g: alloc::vec![ZERO, g12, g12.conj(), ZERO], exact_phases: false }
    }

    pub fn with_exact_phases(mut self) -> Self {
        self.exact_phases = true;
        self
    }

    pub fn n_branches(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, l: usize) -> C64 {
        self.g[j * self.n + l]
    }
}

/// Which interaction model a simulation uses.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    Single(CouplingSet),
    Branches(BranchCoupling),
}

impl From<CouplingSet> for Coupling {
    fn from(c: CouplingSet) -> Self {
        Coupling::Single(c)
    }
}

impl From<BranchCoupling> for Coupling {
    fn from(c: BranchCoupling) -> Self {
        Coupling::Branches(c)
    }
}

/// Anything that contributes `∂ₜψ` on top of the exactly integrated linear part.
///
/// `fields` holds the photon branches followed by the phonon field.
pub trait Nonlinearity {
    fn n_fields(&self) -> usize;
    /// Overwrites `out` with the time derivatives at time `t`.
    fn eval(&self, fields: &[Vec<C64>], t: f64, out: &mut [Vec<C64>]);
    /// Largest rate (1/s) the explicit substep has to resolve at `fields`.
    fn rate(&self, fields: &[Vec<C64>]) -> f64;
    /// Contribution to the classical energy (`H/ħ`, rad/s), if it has one.
    fn energy(&self, _fields: &[Vec<C64>], _t: f64) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy)]
struct Term {
    j: usize,
    l: usize,
    conj_b: bool,
    g: C64,
    dk: f64,
    dw: f64,
}

#[derive(Debug, Clone)]
enum Model {
    Single { c: CouplingSet, k: f64 },
    Multi { n: usize, terms: Vec<Term> },
}

/// Precomputed interaction for a fixed grid and set of frames.
#[derive(Debug, Clone)]
pub struct Interaction {
    spectral: Spectral,
    model: Model,
}

impl Interaction {
    pub fn single(grid: &Grid1D, couplings: &CouplingSet, photon_frame: Frame) -> Result<Self> {
        couplings.validate()?;
        Ok(Interaction {
            spectral: Spectral::new(grid.clone()),
            model: Model::Single { c: *couplings, k: photon_frame.k },
        })
    }

    pub fn branches(grid: &Grid1D, coupling: &BranchCoupling, photon_frames: &[Frame], phonon: Frame) -> Result<Self> {
        let n = coupling.n_branches();
        if photon_frames.len() != n {
            return Err(Error::Length { expected: n, got: photon_frames.len() });
        }
        let mut terms = Vec::new();
        for j in 0..n {
            for l in 0..n {
                let g = coupling.get(j, l);
                if g == ZERO {
                    continue;
                }
                let (fj, fl) = (photon_frames[j], photon_frames[l]);
                for conj_b in [false, true] {
                    let s = if conj_b { -1.0 } else { 1.0 };
                    let dk = s * phonon.k + fl.k - fj.k;
                    let dw = s * phonon.omega + fl.omega - fj.omega;
                    let kscale = phonon.k.abs() + fl.k.abs() + fj.k.abs();
                    let wscale = phonon.omega.abs() + fl.omega.abs() + fj.omega.abs();
                    let matched = dk.abs() <= 1e-12 * kscale && dw.abs() <= 1e-12 * wscale;
                    if matched {
                        terms.push(Term { j, l, conj_b, g, dk: 0.0, dw: 0.0 });
                    } else if coupling.exact_phases {
                        if grid.k_index(dk).is_none() {
                            return Err(Error::param(
                                "frames",
                                "explicit phases need carrier wavenumber mismatches that lie on the grid",
                            ));
                        }
                        terms.push(Term { j, l, conj_b, g, dk, dw });
                    }
                }
            }
        }
        Ok(Interaction { spectral: Spectral::new(grid.clone()), model: Model::Multi { n, terms } })
    }

    /// Build the interaction matching the frames stored in `state`.
    pub fn for_state(grid: &Grid1D, coupling: &Coupling, state: &FieldState) -> Result<Self> {
        state.check_grid(grid)?;
        match coupling {
            Coupling::Single(c) => {
                if state.photons.len() != 1 {
                    return Err(Error::param("photons", "the single-branch model needs exactly one photon field"));
                }
                if !state.phonon_frame.is_lab() {
                    return Err(Error::param("phonon_frame", "the single-branch model needs a lab-frame phonon field"));
                }
                Self::single(grid, c, state.photons[0].frame)
            }
            Coupling::Branches(b) => {
                let frames: Vec<Frame> = state.photons.iter().map(|p| p.frame).collect();
                Self::branches(grid, b, &frames, state.phonon_frame)
            }
        }
    }

    pub fn grid(&self) -> &Grid1D {
        self.spectral.grid()
    }

    pub fn n_photon_fields(&self) -> usize {
        match &self.model {
            Model::Single { .. } => 1,
            Model::Multi { n, .. } => *n,
        }
    }

    /// Number of retained multi-branch terms (counting both Hermitian partners).
    pub fn n_terms(&self) -> usize {
        match &self.model {
            Model::Single { .. } => 0,
            Model::Multi { terms, .. } => terms.len(),
        }
    }

    fn d(&self, f: &[C64], shift: f64) -> Vec<C64> {
        let mut out = alloc::vec![ZERO; f.len()];
        self.spectral.derivative_into(f, 1, shift, &mut out).expect("lengths checked");
        out
    }

    fn phase(&self, t: &Term, i: usize, time: f64) -> C64 {
        if t.dk == 0.0 && t.dw == 0.0 {
            return C64::new(1.0, 0.0);
        }
        let p = t.dk * self.grid().x(i) - t.dw * time;
        C64::new(p.cos(), p.sin())
    }

    fn single_rhs(&self, c: &CouplingSet, k: f64, a: &[C64], b: &[C64], da: &mut [C64], db: &mut [C64]) {
        let n = a.len();
        let u: Vec<C64> = b.iter().map(|v| C64::new(2.0 * v.re, 0.0)).collect();
        let need_a1 = c.g_mmp != 0.0 || c.g_mpm != ZERO || c.g_mpp != ZERO || c.g_mmm != 0.0;
        let need_u1 = c.g_mpm != ZERO || c.g_ppm != 0.0 || c.g_mmm != 0.0;
        let a1 = if need_a1 { self.d(a, k) } else { alloc::vec![ZERO; n] };
        let u1 = if need_u1 { self.d(&u, 0.0) } else { alloc::vec![ZERO; n] };

        // everything under the outer photon derivative, and the b-equation
        // pieces with (inner) and without (outer) a derivative
        let mut inner = alloc::vec![ZERO; n];
        let mut bd = alloc::vec![ZERO; n];
        for i in 0..n {
            let (ai, ui, a1i, u1i) = (a[i], u[i].re, a1[i], u1[i].re);
            inner[i] = c.g_mmp * ui * a1i + c.g_mpm * ai * u1i + c.g_mpp * ai * ui + c.g_mmm * a1i * u1i;
            let cross_mpm = 2.0 * (c.g_mpm * a1i.conj() * ai).re;
            let cross_mpp = 2.0 * (c.g_mpp * a1i.conj() * ai).re;
            bd[i] = C64::new(cross_mpm + c.g_ppm * ai.norm_sqr() + c.g_mmm * a1i.norm_sqr(), 0.0);
            da[i] = I * (c.g_ppp * ai * ui + c.g_mpm.conj() * a1i * u1i + c.g_ppm * ai * u1i + c.g_mpp.conj() * ui * a1i);
            db[i] = I * (c.g_ppp * ai.norm_sqr() + c.g_mmp * a1i.norm_sqr() + cross_mpp);
        }
        if inner.iter().any(|v| *v != ZERO) {
            let di = self.d(&inner, k);
            for (o, v) in da.iter_mut().zip(di) {
                *o -= I * v;
            }
        }
        if bd.iter().any(|v| *v != ZERO) {
            let dd = self.d(&bd, 0.0);
            for (o, v) in db.iter_mut().zip(dd) {
                *o -= I * v;
            }
        }
    }

    /// Classical interaction energy `H_int/ħ` in rad/s.
    pub fn energy(&self, fields: &[Vec<C64>], t: f64) -> f64 {
        let dx = self.grid().dx();
        match &self.model {
            Model::Single { c, k } => {
                let (a, b) = (&fields[0], &fields[1]);
                let u: Vec<C64> = b.iter().map(|v| C64::new(2.0 * v.re, 0.0)).collect();
                let a1 = self.d(a, *k);
                let u1 = self.d(&u, 0.0);
                let mut h = 0.0;
                for i in 0..a.len() {
                    let (ai, ui, a1i, u1i) = (a[i], u[i].re, a1[i], u1[i].re);
                    h += c.g_ppp * ai.norm_sqr() * ui
                        + c.g_mmp * a1i.norm_sqr() * ui
                        + 2.0 * (c.g_mpm * a1i.conj() * ai).re * u1i
                        + c.g_ppm * ai.norm_sqr() * u1i
                        + 2.0 * (c.g_mpp * a1i.conj() * ai).re * ui
                        + c.g_mmm * a1i.norm_sqr() * u1i;
                }
                -h * dx
            }
            Model::Multi { n, terms } => {
                let b = &fields[*n];
                let mut h = ZERO;
                for t_ in terms {
                    let (aj, al) = (&fields[t_.j], &fields[t_.l]);
                    for i in 0..b.len() {
                        let beta = if t_.conj_b { b[i].conj() } else { b[i] };
                        h += t_.g * aj[i].conj() * al[i] * beta * self.phase(t_, i, t);
                    }
                }
                -h.re * dx
            }
        }
    }
}

impl Nonlinearity for Interaction {
    fn n_fields(&self) -> usize {
        self.n_photon_fields() + 1
    }

    fn eval(&self, fields: &[Vec<C64>], t: f64, out: &mut [Vec<C64>]) {
        match &self.model {
            Model::Single { c, k } => {
                let (da, db) = out.split_at_mut(1);
                self.single_rhs(c, *k, &fields[0], &fields[1], &mut da[0], &mut db[0]);
            }
            Model::Multi { n, terms } => {
                for o in out.iter_mut() {
                    o.iter_mut().for_each(|v| *v = ZERO);
                }
                let b = &fields[*n];
                for t_ in terms {
                    let al = &fields[t_.l];
                    for i in 0..b.len() {
                        let ph = t_.g * self.phase(t_, i, t);
                        let beta = if t_.conj_b { b[i].conj() } else { b[i] };
                        out[t_.j][i] += I * ph * al[i] * beta;
                        if t_.conj_b {
                            out[*n][i] += I * ph * fields[t_.j][i].conj() * al[i];
                        }
                    }
                }
            }
        }
    }

    fn rate(&self, fields: &[Vec<C64>]) -> f64 {
        let max_abs = |f: &Vec<C64>| f.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let np = self.n_photon_fields();
        let sa = fields[..np].iter().map(max_abs).fold(0.0, f64::max);
        let sb = max_abs(&fields[np]);
        let g = match &self.model {
            Model::Single { c, k } => {
                let km = self.grid().k_max() + k.abs();
                c.g_ppp.abs()
                    + c.g_mmp.abs() * km * km
                    + 2.0 * c.g_mpm.norm() * km * km
                    + c.g_ppm.abs() * km
                    + 2.0 * c.g_mpp.norm() * km
                    + c.g_mmm.abs() * km * km * km
            }
            Model::Multi { n, terms } => (0..*n)
                .map(|j| terms.iter().filter(|t| t.j == j).map(|t| t.g.norm()).sum::<f64>())
                .fold(0.0, f64::max),
        };
        g * sa.max(2.0 * sb)
    }

    fn energy(&self, fields: &[Vec<C64>], t: f64) -> Option<f64> {
        Some(Interaction::energy(self, fields, t))
    }
}

/// Interaction-only time derivatives `(∂ₜa, ∂ₜb)` of a single-branch state.
pub fn interaction_rhs(state: &FieldState, couplings: &CouplingSet) -> Result<(Vec<C64>, Vec<C64>)> {
    let grid = Grid1D::new(state.n_points(), state.dx)?;
    let int = Interaction::for_state(&grid, &Coupling::Single(*couplings), state)?;
    let fields = [state.a().to_vec(), state.b().to_vec()];
    let mut out = [alloc::vec![ZERO; grid.n_points()], alloc::vec![ZERO; grid.n_points()]];
    int.eval(&fields, state.time, &mut out);
    let [da, db] = out;
    Ok((da, db))
}
