//! Driven steady states and the linear dynamics of fluctuations around them.

use alloc::vec::Vec;

use crate::dynamics::{DriveSpec, Integrator, Sampling, System};
use crate::error::Error;
use crate::interaction::{Coupling, Interaction, Nonlinearity};
use crate::spectral::Spectral;
use crate::{FieldState, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyOptions {
    /// Convergence threshold on the residual (see [`SteadyState::residual`]).
    pub tol: f64,
    pub max_steps: u64,
    /// Residual is evaluated (and stored in the history) this often.
    pub check_every: u64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        SteadyOptions { tol: 1e-10, max_steps: 10_000_000, check_every: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// Mean fields α (photons) and β (phonon) in the simulation frames.
    pub state: FieldState,
    /// `g̃(x) = g̃₀α(x)` for single-branch couplings (Hz).
    pub g_lin: Option<Vec<C64>>,
    /// `g̃_β(x) = g̃₀(β + β*)` for single-branch couplings (Hz).
    pub g_beta: Option<Vec<f64>>,
    /// Largest field change over one step relative to the field scale and to
    /// the decay expected over one step at the slowest relaxation rate.
    pub residual: f64,
    pub history: Vec<f64>,
    pub steps: u64,
}

impl SteadyState {
    pub fn alpha(&self) -> &[C64] {
        self.state.a()
    }

    pub fn beta(&self) -> &[C64] {
        self.state.b()
    }
}

// slowest rate at which a disturbance leaves or decays: damping Γ/2, κ/2 or
// transit |c|/L for undamped open fields
fn relaxation_rate<N: Nonlinearity>(integ: &Integrator<N>) -> Result<f64> {
    let sys = integ.system();
    let np = sys.n_photon_branches();
    let length = sys.grid.length();
    let mut slowest = f64::INFINITY;
    for f in 0..=np {
        let rate = if f < np { sys.bath.photon_kappa(f) } else { sys.bath.gamma_mech };
        let transit = integ.inflows().iter().find(|i| i.field == f).map(|i| i.speed() / length);
        let r = match (rate > 0.0, transit) {
            (true, Some(t)) => (0.5 * rate).max(t),
            (true, None) => 0.5 * rate,
            (false, Some(t)) => t,
            (false, None) => {
                return Err(Error::param("bath", "every field must be damped or open for a steady state to be reached"));
            }
        };
        slowest = slowest.min(r);
    }
    Ok(slowest)
}

fn change(before: &FieldState, after: &FieldState) -> (f64, f64) {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for (a, b) in before.fields().zip(after.fields()) {
        for (x, y) in a.iter().zip(b) {
            diff = diff.max((x - y).norm());
            scale = scale.max(y.norm());
        }
    }
    (diff, scale)
}

fn derived(system: &System, state: &FieldState) -> (Option<Vec<C64>>, Option<Vec<f64>>) {
    match &system.coupling {
        Coupling::Single(c) => (
            Some(state.a().iter().map(|a| c.g_ppp * a).collect()),
            Some(state.b().iter().map(|b| 2.0 * c.g_ppp * b.re).collect()),
        ),
        Coupling::Branches(_) => (None, None),
    }
}

/// Relax `initial` under noiseless dynamics until the residual drops below
/// `opts.tol`. Drives must oscillate at their branch frame frequencies for a
/// stationary state to exist; the drive ramp in `system.drive` is honoured.
pub fn find_steady_state(system: &System, initial: FieldState, dt: f64, opts: &SteadyOptions) -> Result<SteadyState> {
    let mut sys = system.clone();
    sys.bath.sampling = Sampling::None;
    let mut integ = Integrator::new(sys, &initial, dt, 0, 0)?;
    let nu = relaxation_rate(&integ)?;
    let ramp_end = system.drive.ramp_time;
    let check = opts.check_every.max(1);
    let mut state = initial;
    let mut history = Vec::new();
    let mut residual = f64::INFINITY;
    let mut steps = 0;
    while steps < opts.max_steps {
        let measure = (steps + 1) % check == 0;
        let before = if measure { Some(state.clone()) } else { None };
        integ.step(&mut state)?;
        steps += 1;
        if let Some(before) = before {
            let (diff, scale) = change(&before, &state);
            residual = if scale == 0.0 { 0.0 } else { diff / (scale * dt * nu) };
            history.push(residual);
            if residual < opts.tol && state.time >= ramp_end {
                let (g_lin, g_beta) = derived(system, &state);
                return Ok(SteadyState { state, g_lin, g_beta, residual, history, steps });
            }
        }
    }
    Err(Error::NotConverged { steps, residual, history })
}

/// Residual of `state` under one noiseless step of `system`.
pub fn residual(system: &System, state: &FieldState, dt: f64) -> Result<f64> {
    let mut sys = system.clone();
    sys.bath.sampling = Sampling::None;
    let mut integ = Integrator::new(sys, state, dt, 0, 0)?;
    let nu = relaxation_rate(&integ)?;
    let mut next = state.clone();
    integ.step(&mut next)?;
    let (diff, scale) = change(state, &next);
    Ok(if scale == 0.0 { 0.0 } else { diff / (scale * dt * nu) })
}

/// Interaction linearized about fixed mean fields: `J δ = [N(s+δ) − N(s−δ)]/2`,
/// exact because every interaction term is quadratic in the fields.
#[derive(Debug, Clone)]
pub struct Linearized {
    interaction: Interaction,
    mean: Vec<Vec<C64>>,
}

impl Linearized {
    pub fn new(interaction: Interaction, steady: &FieldState) -> Self {
        Linearized { interaction, mean: steady.fields().cloned().collect() }
    }
}

impl Nonlinearity for Linearized {
    fn n_fields(&self) -> usize {
        self.interaction.n_fields()
    }

    fn eval(&self, fields: &[Vec<C64>], t: f64, out: &mut [Vec<C64>]) {
        let shifted = |sign: f64| -> Vec<Vec<C64>> {
            self.mean.iter().zip(fields).map(|(m, d)| m.iter().zip(d).map(|(a, b)| a + b * sign).collect()).collect()
        };
        let n = fields[0].len();
        let mut minus: Vec<Vec<C64>> = alloc::vec![alloc::vec![C64::new(0.0, 0.0); n]; fields.len()];
        self.interaction.eval(&shifted(1.0), t, out);
        self.interaction.eval(&shifted(-1.0), t, &mut minus);
        for (o, m) in out.iter_mut().zip(&minus) {
            for (a, b) in o.iter_mut().zip(m) {
                *a = (*a - b) * 0.5;
            }
        }
    }

    fn rate(&self, _fields: &[Vec<C64>]) -> f64 {
        self.interaction.rate(&self.mean)
    }
}

/// The fluctuation system: `system` without coherent drives (noise and
/// inflow of open fields are kept).
pub fn fluctuation_system(system: &System) -> System {
    System { drive: DriveSpec { drives: Vec::new(), ramp_time: 0.0 }, ..system.clone() }
}

/// Integrator for fluctuations `fluct` around `steady`.
pub fn linearized_integrator(
    system: &System,
    steady: &SteadyState,
    fluct: &FieldState,
    dt: f64,
    seed: u64,
    trajectory: u64,
) -> Result<Integrator<Linearized>> {
    let sys = fluctuation_system(system);
    let int = Interaction::for_state(&sys.grid, &sys.coupling, &steady.state)?;
    Integrator::with_nonlinearity(sys, fluct, dt, Linearized::new(int, &steady.state), seed, trajectory)
}

/// Full time derivative of the fluctuations: rotated dispersion, damping and
/// the linearized interaction. Fields are ordered photons first, phonon last.
pub fn linearized_rhs(fluct: &FieldState, steady: &SteadyState, system: &System) -> Result<Vec<Vec<C64>>> {
    let grid = &system.grid;
    fluct.check_grid(grid)?;
    let int = Interaction::for_state(grid, &system.coupling, &steady.state)?;
    let lin = Linearized::new(int, &steady.state);
    let fields: Vec<Vec<C64>> = fluct.fields().cloned().collect();
    let mut out: Vec<Vec<C64>> = fields.iter().map(|f| alloc::vec![C64::new(0.0, 0.0); f.len()]).collect();
    lin.eval(&fields, fluct.time, &mut out);
    let spectral = Spectral::new(grid.clone());
    let np = system.n_photon_branches();
    let frames: Vec<_> = fluct.photons.iter().map(|p| p.frame).chain(core::iter::once(fluct.phonon_frame)).collect();
    for (f, field) in fields.iter().enumerate() {
        let (disp, rate) = if f < np {
            (&system.photon_dispersions[f], system.bath.photon_kappa(f))
        } else {
            (&system.phonon_dispersion, system.bath.gamma_mech)
        };
        let w = disp.rotating(frames[f]).on_grid(grid)?;
        let mut buf = field.clone();
        spectral.forward(&mut buf);
        for (v, wk) in buf.iter_mut().zip(&w) {
            *v *= C64::new(0.0, -wk);
        }
        spectral.inverse(&mut buf);
        for ((o, d), v) in out[f].iter_mut().zip(&buf).zip(field) {
            *o += d - v * (0.5 * rate);
        }
    }
    Ok(out)
}
