//! Discrete optomechanical arrays and their continuum limit.
//!
//! Sites carry photon modes `a_j` and phonon modes `b_j` (dimensionless
//! amplitudes). The Hamiltonian is
//!
//! ```text
//! H/ħ = Σ ε|a_j|² + Ω₀|b_j|² − Σ_l J_l a†_{j+l}a_j − Σ_l K_l b†_{j+l}b_j
//!       − g_site Σ |a_j|² u_j − g_link Σ (a†_{j+1}a_j + h.c.) u_j
//! ```
//!
//! with `u_j = b_j + b_j*`. For the link coupling, `b_j` sits between sites
//! `j` and `j+1`. The equations are integrated in real space with classical
//! RK4 steps, independently of the spectral continuum solver.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{complex_gaussian, trajectory_rng, Sampling};
use crate::error::Error;
use crate::{CouplingSet, FieldState, Frame, Grid1D, Result, C64};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Tunnel couplings `J_l` (Hz) for signed hop distances `l ≠ 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Hopping {
    pub terms: Vec<(i64, C64)>,
}

impl Hopping {
    pub fn new(terms: Vec<(i64, C64)>) -> Self {
        Hopping { terms }
    }

    /// Real couplings `J_l` applied in both directions.
    pub fn symmetric(terms: &[(u32, f64)]) -> Self {
        let mut t = Vec::new();
        for &(l, j) in terms {
            t.push((l as i64, C64::new(j, 0.0)));
            t.push((-(l as i64), C64::new(j, 0.0)));
        }
        Hopping { terms: t }
    }

    pub fn nearest(j: f64) -> Self {
        Self::symmetric(&[(1, j)])
    }

    pub fn none() -> Self {
        Self::default()
    }

    /// `−Σ_l J_l e^{−iklδx}`.
    pub fn band_at(&self, k: f64, dx: f64) -> C64 {
        -self.terms.iter().map(|&(l, j)| j * C64::from_polar(1.0, -k * l as f64 * dx)).sum::<C64>()
    }

    fn validate(&self) -> Result<()> {
        if self.terms.iter().any(|&(l, _)| l == 0) {
            return Err(Error::param("hopping", "hop distances must be nonzero"));
        }
        // the band is real for every k iff J_{−l} = J_l*
        let mut worst = 0.0f64;
        for &(l, j) in &self.terms {
            let partner: C64 = self.terms.iter().filter(|t| t.0 == -l).map(|t| t.1).sum();
            let own: C64 = self.terms.iter().filter(|t| t.0 == l).map(|t| t.1).sum();
            worst = worst.max((own - partner.conj()).norm());
            let _ = j;
        }
        if worst > 0.0 {
            return Err(Error::NonHermitian(worst));
        }
        Ok(())
    }
}

/// Tight-binding band `ω(k) = −Σ_l J_l e^{−iklδx}` at the given wavenumbers.
pub fn band_structure(hopping: &Hopping, dx_lattice: f64, k_samples: &[f64]) -> Result<Vec<f64>> {
    let vals: Vec<C64> = k_samples.iter().map(|&k| hopping.band_at(k, dx_lattice)).collect();
    let scale = hopping.terms.iter().map(|t| t.1.norm()).sum::<f64>();
    let max_im = vals.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    if max_im > 1e-12 * scale {
        return Err(Error::NonHermitian(max_im));
    }
    Ok(vals.iter().map(|v| v.re).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    pub n_sites: usize,
    /// Lattice constant δx (m).
    pub dx_lattice: f64,
    pub photon_hopping: Hopping,
    pub phonon_hopping: Hopping,
    /// On-site photon and phonon frequencies (rad/s).
    pub onsite_photon: f64,
    pub onsite_phonon: f64,
    /// Local coupling g₀ (Hz).
    pub g0_site: f64,
    /// Link coupling (Hz).
    pub g0_link: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub n_th: f64,
    pub sampling: Sampling,
    /// Ring (true) or open chain.
    pub periodic: bool,
}

impl ArrayConfig {
    pub fn new(n_sites: usize, dx_lattice: f64) -> Self {
        ArrayConfig {
            n_sites,
            dx_lattice,
            photon_hopping: Hopping::none(),
            phonon_hopping: Hopping::none(),
            onsite_photon: 0.0,
            onsite_phonon: 0.0,
            g0_site: 0.0,
            g0_link: 0.0,
            kappa: 0.0,
            gamma: 0.0,
            n_th: 0.0,
            sampling: Sampling::None,
            periodic: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::param("n_sites", "must be positive"));
        }
        if !(self.dx_lattice > 0.0) {
            return Err(Error::GridSpacing(self.dx_lattice));
        }
        self.photon_hopping.validate()?;
        self.phonon_hopping.validate()?;
        if !(self.kappa >= 0.0 && self.gamma >= 0.0 && self.n_th >= 0.0) {
            return Err(Error::param("bath", "kappa, Gamma and n_th must be non-negative"));
        }
        Ok(())
    }

    fn neighbour(&self, j: usize, l: i64) -> Option<usize> {
        let n = self.n_sites as i64;
        let t = j as i64 + l;
        if self.periodic {
            Some(t.rem_euclid(n) as usize)
        } else if (0..n).contains(&t) {
            Some(t as usize)
        } else {
            None
        }
    }
}

/// Site amplitudes of both fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayState {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub time: f64,
}

impl ArrayState {
    pub fn vacuum(n: usize) -> Self {
        ArrayState { a: alloc::vec![ZERO; n], b: alloc::vec![ZERO; n], time: 0.0 }
    }

    pub fn photon_number(&self) -> f64 {
        self.a.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn phonon_number(&self) -> f64 {
        self.b.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Coherent side drive `∂ₜa_j −= √κ_ex·α_j e^{−iωt}`, with `α_j` in s^(-1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayDrive {
    pub kappa_ex: f64,
    pub omega: f64,
    pub amplitude: Vec<C64>,
}

/// Site-resolved right-hand side.
pub fn array_rhs(cfg: &ArrayConfig, s: &ArrayState, t: f64, drive: Option<&ArrayDrive>, da: &mut [C64], db: &mut [C64]) {
    let n = cfg.n_sites;
    let u: Vec<f64> = s.b.iter().map(|v| 2.0 * v.re).collect();
    for j in 0..n {
        let mut fa = C64::new(-0.5 * cfg.kappa, -cfg.onsite_photon) * s.a[j];
        for &(l, jl) in &cfg.photon_hopping.terms {
            if let Some(src) = cfg.neighbour(j, -l) {
                fa += I * jl * s.a[src];
            }
        }
        fa += I * cfg.g0_site * u[j] * s.a[j];
        let mut fb = C64::new(-0.5 * cfg.gamma, -cfg.onsite_phonon) * s.b[j];
        for &(l, kl) in &cfg.phonon_hopping.terms {
            if let Some(src) = cfg.neighbour(j, -l) {
                fb += I * kl * s.b[src];
            }
        }
        fb += I * cfg.g0_site * s.a[j].norm_sqr();
        if cfg.g0_link != 0.0 {
            if let Some(r) = cfg.neighbour(j, 1) {
                fa += I * cfg.g0_link * s.a[r] * u[j];
                fb += I * cfg.g0_link * 2.0 * (s.a[r].conj() * s.a[j]).re;
            }
            if let Some(l) = cfg.neighbour(j, -1) {
                fa += I * cfg.g0_link * s.a[l] * u[l];
            }
        }
        if let Some(d) = drive {
            let ph = -d.omega * t;
            fa -= d.kappa_ex.sqrt() * d.amplitude[j] * C64::new(ph.cos(), ph.sin());
        }
        da[j] = fa;
        db[j] = fb;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayTrajectory {
    pub times: Vec<f64>,
    pub photon_numbers: Vec<f64>,
    pub phonon_numbers: Vec<f64>,
    pub final_state: ArrayState,
}

fn rk4(cfg: &ArrayConfig, s: &mut ArrayState, dt: f64, drive: Option<&ArrayDrive>) {
    let n = cfg.n_sites;
    let mut k = [[alloc::vec![ZERO; n], alloc::vec![ZERO; n]], [alloc::vec![ZERO; n], alloc::vec![ZERO; n]],
        [alloc::vec![ZERO; n], alloc::vec![ZERO; n]], [alloc::vec![ZERO; n], alloc::vec![ZERO; n]]];
    let stage = |base: &ArrayState, kk: &[Vec<C64>; 2], h: f64| ArrayState {
        a: base.a.iter().zip(&kk[0]).map(|(x, d)| x + d * h).collect(),
        b: base.b.iter().zip(&kk[1]).map(|(x, d)| x + d * h).collect(),
        time: base.time + h,
    };
    let t = s.time;
    {
        let [k1a, k1b] = &mut k[0];
        array_rhs(cfg, s, t, drive, k1a, k1b);
    }
    let s2 = stage(s, &k[0], 0.5 * dt);
    {
        let [ka, kb] = &mut k[1];
        array_rhs(cfg, &s2, t + 0.5 * dt, drive, ka, kb);
    }
    let s3 = stage(s, &k[1], 0.5 * dt);
    {
        let [ka, kb] = &mut k[2];
        array_rhs(cfg, &s3, t + 0.5 * dt, drive, ka, kb);
    }
    let s4 = stage(s, &k[2], dt);
    {
        let [ka, kb] = &mut k[3];
        array_rhs(cfg, &s4, t + dt, drive, ka, kb);
    }
    for f in 0..2 {
        let field = if f == 0 { &mut s.a } else { &mut s.b };
        for (j, v) in field.iter_mut().enumerate() {
            *v += (k[0][f][j] + 2.0 * (k[1][f][j] + k[2][f][j]) + k[3][f][j]) * (dt / 6.0);
        }
    }
    s.time = t + dt;
}

fn add_noise(cfg: &ArrayConfig, s: &mut ArrayState, dt: f64, rng: &mut ChaCha8Rng) {
    // site inputs have ⟨a_in a_in†⟩ = (n + 1/2)δ(t): increment variance rate·(n + 1/2)·dt
    let va = cfg.kappa * 0.5 * dt;
    let vb = cfg.gamma * (cfg.n_th + 0.5) * dt;
    for v in s.a.iter_mut() {
        if va > 0.0 {
            *v += complex_gaussian(rng, va);
        }
    }
    for v in s.b.iter_mut() {
        if vb > 0.0 {
            *v += complex_gaussian(rng, vb);
        }
    }
}

/// Integrate the array from `initial` for `steps` steps of `dt`, recording
/// numbers every `record_every` steps.
pub fn simulate_array(
    cfg: &ArrayConfig,
    initial: ArrayState,
    drive: Option<&ArrayDrive>,
    dt: f64,
    steps: u64,
    record_every: u64,
    seed: u64,
    trajectory: u64,
) -> Result<ArrayTrajectory> {
    cfg.validate()?;
    if initial.a.len() != cfg.n_sites || initial.b.len() != cfg.n_sites {
        return Err(Error::Length { expected: cfg.n_sites, got: initial.a.len().min(initial.b.len()) });
    }
    if let Some(d) = drive {
        if d.amplitude.len() != cfg.n_sites {
            return Err(Error::Length { expected: cfg.n_sites, got: d.amplitude.len() });
        }
    }
    if !(dt > 0.0) || record_every == 0 {
        return Err(Error::param("dt", "dt must be positive and the record cadence at least 1"));
    }
    let mut rng = trajectory_rng(seed, trajectory);
    let mut s = initial;
    let mut out = ArrayTrajectory { times: Vec::new(), photon_numbers: Vec::new(), phonon_numbers: Vec::new(), final_state: s.clone() };
    let rec = |s: &ArrayState, out: &mut ArrayTrajectory| {
        out.times.push(s.time);
        out.photon_numbers.push(s.photon_number());
        out.phonon_numbers.push(s.phonon_number());
    };
    rec(&s, &mut out);
    for step in 1..=steps {
        rk4(cfg, &mut s, dt, drive);
        if cfg.sampling == Sampling::Wigner {
            add_noise(cfg, &mut s, dt, &mut rng);
        }
        if s.a.iter().chain(&s.b).any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Divergence { step, time: s.time, field: "array" });
        }
        if step % record_every == 0 || step == steps {
            rec(&s, &mut out);
        }
    }
    out.final_state = s;
    Ok(out)
}

/// Site amplitudes to continuum fields: `a(jδx) = a_j/√δx` on a grid with `dx = δx`.
pub fn to_continuum(state: &ArrayState, dx_lattice: f64) -> Result<FieldState> {
    let grid = Grid1D::new(state.a.len(), dx_lattice)?;
    let s = 1.0 / dx_lattice.sqrt();
    let mut f = FieldState::single(
        &grid,
        state.a.iter().map(|v| v * s).collect(),
        state.b.iter().map(|v| v * s).collect(),
        Frame::LAB,
    )?;
    f.time = state.time;
    Ok(f)
}

/// Inverse of [`to_continuum`].
pub fn from_continuum(state: &FieldState) -> ArrayState {
    let s = state.dx.sqrt();
    ArrayState {
        a: state.a().iter().map(|v| v * s).collect(),
        b: state.b().iter().map(|v| v * s).collect(),
        time: state.time,
    }
}

/// Continuum couplings of the local array interaction: `g̃₀ = g₀√δx`.
pub fn local_couplings(g0: f64, dx_lattice: f64) -> CouplingSet {
    CouplingSet::simple(g0 * dx_lattice.sqrt())
}

/// Continuum couplings of the link interaction to second order in δx.
///
/// Expanding `a†(x+δx/2)a(x−δx/2) + h.c.` about the link centre and
/// integrating the second derivatives by parts gives
/// `2a†a u − δx²(∂a†)(∂a)u − (δx²/4)[(∂a†)a + a†∂a]∂u`, all multiplied by
/// `g₀√δx`.
pub fn link_couplings(g0: f64, dx_lattice: f64) -> CouplingSet {
    let g = g0 * dx_lattice.sqrt();
    let d2 = dx_lattice * dx_lattice;
    CouplingSet::even(2.0 * g, -g * d2, C64::new(-0.25 * g * d2, 0.0))
}
