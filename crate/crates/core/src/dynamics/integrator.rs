use alloc::format;
use alloc::vec::Vec;
use core::mem;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use super::boundary::{high_k_fraction, ResolutionWarning};
use super::noise::{complex_gaussian, trajectory_rng};
use super::{AbsorbingLayer, BathSpec, Boundary, Drive, DriveSpec, Inflow, Sampling};
use crate::error::Error;
use crate::interaction::{Coupling, Interaction, Nonlinearity};
use crate::spectral::Spectral;
use crate::{DispersionSpec, FieldState, Frame, Grid1D, Result, C64};

/// Everything about a simulation except its state and step size.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub grid: Grid1D,
    /// Lab-frame photon dispersions, one per branch.
    pub photon_dispersions: Vec<DispersionSpec>,
    /// Lab-frame phonon dispersion.
    pub phonon_dispersion: DispersionSpec,
    pub coupling: Coupling,
    pub bath: BathSpec,
    pub drive: DriveSpec,
    /// Per field, photon branches first and the phonon last; missing entries are periodic.
    pub boundaries: Vec<Boundary>,
    pub absorber: Option<AbsorbingLayer>,
}

impl System {
    pub fn new(grid: Grid1D, photon_dispersions: Vec<DispersionSpec>, phonon_dispersion: DispersionSpec, coupling: Coupling) -> Self {
        System {
            grid,
            photon_dispersions,
            phonon_dispersion,
            coupling,
            bath: BathSpec::default(),
            drive: DriveSpec::default(),
            boundaries: Vec::new(),
            absorber: None,
        }
    }

    pub fn with_bath(mut self, bath: BathSpec) -> Self {
        self.bath = bath;
        self
    }

    pub fn with_drive(mut self, drive: DriveSpec) -> Self {
        self.drive = drive;
        self
    }

    pub fn with_boundaries(mut self, boundaries: Vec<Boundary>) -> Self {
        self.boundaries = boundaries;
        self
    }

    pub fn with_absorber(mut self, absorber: AbsorbingLayer) -> Self {
        self.absorber = Some(absorber);
        self
    }

    pub fn n_photon_branches(&self) -> usize {
        self.photon_dispersions.len()
    }

    pub fn boundary(&self, field: usize) -> Boundary {
        self.boundaries.get(field).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone)]
struct SideDrive {
    branch: usize,
    coeff: Vec<C64>,
    detuning: f64,
}

/// Stepper for one trajectory.
#[derive(Debug, Clone)]
pub struct Integrator<N = Interaction> {
    system: System,
    nl: N,
    dt: f64,
    frames: Vec<Frame>,
    spectral: Spectral,
    omega: Vec<Vec<f64>>,
    half: Vec<Vec<C64>>,
    inflows: Vec<Inflow>,
    side: Vec<SideDrive>,
    /// Per-field coupling-time weights of the entrance cells of open fields.
    age: Vec<Option<Vec<f64>>>,
    noise_var: Vec<f64>,
    absorber: Option<Vec<f64>>,
    rng: ChaCha8Rng,
    steps: u64,
    warnings: Vec<ResolutionWarning>,
    k: [Vec<Vec<C64>>; 4],
    tmp: Vec<Vec<C64>>,
}

fn frames_of(state: &FieldState) -> Vec<Frame> {
    state.photons.iter().map(|p| p.frame).chain(core::iter::once(state.phonon_frame)).collect()
}

impl Integrator<Interaction> {
    /// Integrator for the full interaction of `system.coupling`. Trajectory
    /// noise comes from stream `trajectory` of `seed`.
    pub fn new(system: System, state: &FieldState, dt: f64, seed: u64, trajectory: u64) -> Result<Self> {
        let nl = Interaction::for_state(&system.grid, &system.coupling, state)?;
        Self::with_nonlinearity(system, state, dt, nl, seed, trajectory)
    }
}

impl<N: Nonlinearity> Integrator<N> {
    pub fn with_nonlinearity(system: System, state: &FieldState, dt: f64, nl: N, seed: u64, trajectory: u64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", "must be positive and finite"));
        }
        system.bath.validate()?;
        state.check_grid(&system.grid)?;
        let np = system.n_photon_branches();
        if state.photons.len() != np {
            return Err(Error::Length { expected: np, got: state.photons.len() });
        }
        if nl.n_fields() != np + 1 {
            return Err(Error::param("coupling", "number of photon branches differs from the dispersions"));
        }
        system.drive.validate(np, system.grid.n_points())?;
        let grid = system.grid.clone();
        let frames = frames_of(state);
        let bath = &system.bath;
        let wigner = bath.sampling == Sampling::Wigner;

        let mut omega = Vec::new();
        let mut half = Vec::new();
        let mut inflows = Vec::new();
        let mut noise_var = Vec::new();
        for (f, frame) in frames.iter().enumerate() {
            let (disp, rate, occ) = if f < np {
                (&system.photon_dispersions[f], bath.photon_kappa(f), 0.0)
            } else {
                (&system.phonon_dispersion, bath.gamma_mech, bath.n_th())
            };
            let rotated = disp.rotating(*frame);
            let w = rotated.on_grid(&grid)?;
            half.push(
                w.iter()
                    .map(|&wk| {
                        let z = C64::new(-0.25 * rate * dt, -0.5 * wk * dt);
                        z.exp()
                    })
                    .collect(),
            );
            omega.push(w);
            noise_var.push(if wigner { dt * rate * (occ + 0.5) / grid.dx() } else { 0.0 });
            if system.boundary(f) == Boundary::Open {
                let mut drive = None;
                for d in &system.drive.drives {
                    if let Drive::Endfire { branch, amplitude, omega } = d {
                        if *branch == f {
                            if drive.is_some() {
                                return Err(Error::param("drive", "one endfire drive per branch"));
                            }
                            drive = Some((*amplitude, omega - frame.omega));
                        }
                    }
                }
                inflows.push(Inflow::new(f, &grid, &rotated, dt, rate, drive, wigner.then_some(occ))?);
            }
        }
        for d in &system.drive.drives {
            if let Drive::Endfire { branch, .. } = d {
                if system.boundary(*branch) != Boundary::Open {
                    return Err(Error::Boundary(format!("endfire drive on branch {branch} needs an open boundary")));
                }
            }
        }
        let side = system
            .drive
            .drives
            .iter()
            .filter_map(|d| match d {
                Drive::Side { branch, kappa_ex, omega, profile } => Some(SideDrive {
                    branch: *branch,
                    coeff: profile.iter().map(|p| -kappa_ex.sqrt() * p).collect(),
                    detuning: omega - frames[*branch].omega,
                }),
                _ => None,
            })
            .collect();
        let n = grid.n_points();
        let mut age = alloc::vec![None; np + 1];
        for inflow in &inflows {
            age[inflow.field] = Some(entrance_weights(inflow, n));
        }
        let absorber = match &system.absorber {
            Some(layer) => Some(layer.profile(&grid)?.iter().map(|s| (-s * dt).exp()).collect()),
            None => None,
        };
        let zeros = || alloc::vec![alloc::vec![C64::new(0.0, 0.0); n]; np + 1];
        Ok(Integrator {
            spectral: Spectral::new(grid),
            system,
            nl,
            dt,
            frames,
            omega,
            half,
            inflows,
            side,
            age,
            noise_var,
            absorber,
            rng: trajectory_rng(seed, trajectory),
            steps: 0,
            warnings: Vec::new(),
            k: [zeros(), zeros(), zeros(), zeros()],
            tmp: zeros(),
        })
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn nonlinearity(&self) -> &N {
        &self.nl
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn inflows(&self) -> &[Inflow] {
        &self.inflows
    }

    /// Resolution warnings raised by the absorbing layer so far.
    pub fn warnings(&self) -> &[ResolutionWarning] {
        &self.warnings
    }

    /// Rotated dispersion of field `f` on the grid (rad/s).
    pub fn rotated_dispersion(&self, f: usize) -> &[f64] {
        &self.omega[f]
    }

    /// Largest step the explicit interaction substep tolerates at `state`.
    pub fn stability_bound(&self, state: &FieldState) -> f64 {
        let fields: Vec<Vec<C64>> = state.fields().cloned().collect();
        let r = self.nl.rate(&fields);
        if r > 0.0 {
            0.5 / r
        } else {
            f64::INFINITY
        }
    }

    /// Classical energy `H/ħ` (rad/s) in the frames of `state`, or `None`
    /// when the nonlinearity carries no energy.
    pub fn energy(&self, state: &FieldState) -> Option<f64> {
        let fields: Vec<Vec<C64>> = state.fields().cloned().collect();
        let free: f64 = fields.iter().zip(&self.omega).map(|(f, w)| self.spectral.quadratic_form(f, w)).sum();
        self.nl.energy(&fields, state.time).map(|h| h + free)
    }

    fn linear_half(&mut self, fields: &mut [Vec<C64>], t: f64) {
        for (f, m) in fields.iter_mut().zip(&self.half) {
            self.spectral.forward(f);
            for (v, z) in f.iter_mut().zip(m) {
                *v *= z;
            }
            self.spectral.inverse(f);
        }
        let wigner = self.system.bath.sampling == Sampling::Wigner;
        for inflow in &self.inflows {
            let rng = if wigner { Some(&mut self.rng) } else { None };
            inflow.inject(&mut fields[inflow.field], t, &self.system.drive, rng);
        }
    }

    fn rhs(nl: &N, side: &[SideDrive], age: &[Option<Vec<f64>>], ramp: &DriveSpec, y: &[Vec<C64>], t: f64, out: &mut [Vec<C64>]) {
        nl.eval(y, t, out);
        if !side.is_empty() {
            let r = ramp.ramp(t);
            for s in side {
                let ph = -s.detuning * t;
                let e = C64::new(ph.cos(), ph.sin()) * r;
                for (o, c) in out[s.branch].iter_mut().zip(&s.coeff) {
                    *o += c * e;
                }
            }
        }
        for (o, w) in out.iter_mut().zip(age) {
            if let Some(w) = w {
                for (v, w) in o.iter_mut().zip(w) {
                    *v *= w;
                }
            }
        }
    }

    fn rk4(&mut self, y: &mut [Vec<C64>], t: f64) {
        let dt = self.dt;
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        let ramp = &self.system.drive;
        let combine = |tmp: &mut Vec<Vec<C64>>, y: &[Vec<C64>], k: &[Vec<C64>], h: f64| {
            for ((t_, y_), k_) in tmp.iter_mut().zip(y).zip(k) {
                for ((a, b), c) in t_.iter_mut().zip(y_).zip(k_) {
                    *a = b + c * h;
                }
            }
        };
        Self::rhs(&self.nl, &self.side, &self.age, ramp, y, t, k1);
        combine(tmp, y, k1, 0.5 * dt);
        Self::rhs(&self.nl, &self.side, &self.age, ramp, tmp, t + 0.5 * dt, k2);
        combine(tmp, y, k2, 0.5 * dt);
        Self::rhs(&self.nl, &self.side, &self.age, ramp, tmp, t + 0.5 * dt, k3);
        combine(tmp, y, k3, dt);
        Self::rhs(&self.nl, &self.side, &self.age, ramp, tmp, t + dt, k4);
        let w = dt / 6.0;
        for f in 0..y.len() {
            for i in 0..y[f].len() {
                y[f][i] += (k1[f][i] + 2.0 * (k2[f][i] + k3[f][i]) + k4[f][i]) * w;
            }
        }
    }

    /// Advance `state` by one step.
    pub fn step(&mut self, state: &mut FieldState) -> Result<()> {
        if frames_of(state) != self.frames || state.n_points() != self.system.grid.n_points() {
            return Err(Error::param("state", "frames or grid differ from those the integrator was built for"));
        }
        let t0 = state.time;
        let dt = self.dt;
        let mut fields: Vec<Vec<C64>> = state.fields_mut().map(mem::take).collect();

        self.linear_half(&mut fields, t0 + 0.5 * dt);
        self.rk4(&mut fields, t0);
        for ((f, &var), age) in fields.iter_mut().zip(&self.noise_var).zip(&self.age) {
            if var > 0.0 {
                for (i, v) in f.iter_mut().enumerate() {
                    let w = age.as_ref().map_or(1.0, |a| a[i]);
                    *v += complex_gaussian(&mut self.rng, var * w);
                }
            }
        }
        self.linear_half(&mut fields, t0 + dt);
        if let Some(damp) = &self.absorber {
            for (j, f) in fields.iter_mut().enumerate() {
                if self.steps % 64 == 0 && self.warnings.iter().all(|w| w.field != j) {
                    let frac = high_k_fraction(&self.spectral, f);
                    if frac > 1e-6 {
                        self.warnings.push(ResolutionWarning { field: j, high_k_fraction: frac });
                    }
                }
                for (v, d) in f.iter_mut().zip(damp) {
                    *v *= d;
                }
            }
        }

        for (dst, src) in state.fields_mut().zip(fields) {
            *dst = src;
        }
        self.steps += 1;
        state.time = t0 + dt;
        let np = state.photons.len();
        for (j, f) in state.fields().enumerate() {
            if f.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::Divergence {
                    step: self.steps,
                    time: state.time,
                    field: if j < np { "photon" } else { "phonon" },
                });
            }
        }
        Ok(())
    }
}

/// Fraction of a step each entrance cell of an open field should spend under
/// the interaction, bath noise and side drives.
///
/// With `m` cells moved per half-step, cell `s < m` holds a parcel refilled at
/// the mid-step that entered `s/2m` of a step earlier, so it is inside for
/// `(m + s)/2m` of the substep. Cells `m ≤ s < 2m` hold parcels refilled at
/// the end of the previous step that have not yet been coupled for their age.
fn entrance_weights(inflow: &Inflow, n: usize) -> Vec<f64> {
    let m = inflow.cells_per_half_step();
    let mut w = alloc::vec![1.0; n];
    for s in 0..(2 * m).min(n) {
        let idx = match inflow.entrance() {
            super::Entrance::Left => s,
            super::Entrance::Right => n - 1 - s,
        };
        w[idx] = (m + s) as f64 / (2 * m) as f64;
    }
    w
}

/// One step of `system` from `state` with a fresh integrator (noise stream 0 of `seed`).
pub fn step(state: &FieldState, system: &System, dt: f64, seed: u64) -> Result<FieldState> {
    let mut integ = Integrator::new(system.clone(), state, dt, seed, 0)?;
    let mut next = state.clone();
    integ.step(&mut next)?;
    Ok(next)
}
