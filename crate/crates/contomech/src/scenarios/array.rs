//! Lattice-versus-continuum convergence.
//!
//! A ring of optomechanical sites with nearest-neighbour photon tunnelling
//! `J = D/δx²` and on-site energy `2J` has the band `D k²` at long
//! wavelengths. The same smooth initial fields are evolved on the lattice and
//! by the spectral continuum solver; the lattice error shrinks as `δx²`.

use std::f64::consts::PI;

use contomech_core::dynamics::{Integrator, System};
use contomech_core::lattice::{link_couplings, local_couplings, simulate_array, ArrayConfig, ArrayState, Hopping};
use contomech_core::{CouplingSet, DispersionSpec, FieldState, Frame, Grid1D, C64};
use serde_json::json;

use super::{fit_line, RunError};
use crate::config::ArraySection;
use crate::output::{json_num, Report, Table};

/// Snapshots compared per run, equally spaced over the duration.
const SEGMENTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Local,
    Link,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Local => "local",
            Variant::Link => "link",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Convergence {
    pub variant: Variant,
    pub sites: Vec<u64>,
    pub dx: Vec<f64>,
    /// Relative L2 error over all compared snapshots and both fields.
    pub error: Vec<f64>,
    /// Least-squares slope of ln(error) against ln(δx).
    pub order: f64,
}

#[derive(Debug, Clone)]
pub struct ArrayResult {
    pub studies: Vec<Convergence>,
}

impl ArrayResult {
    pub fn study(&self, v: Variant) -> Option<&Convergence> {
        self.studies.iter().find(|s| s.variant == v)
    }

    pub fn report(&self) -> Report {
        let mut t = Table::new("array_convergence", &[("coupling", "1"), ("sites", "1"), ("dx", "m"), ("l2_error", "1")]);
        let mut r = Report::default();
        let mut orders = serde_json::Map::new();
        for s in &self.studies {
            for i in 0..s.sites.len() {
                t.push(vec![s.variant.as_str().into(), (s.sites[i] as f64).into(), s.dx[i].into(), s.error[i].into()]);
            }
            orders.insert(s.variant.as_str().into(), json_num(s.order));
        }
        r.tables.push(t);
        r.set("fitted_order", orders);
        r.set("variants", json!(self.studies.iter().map(|s| s.variant.as_str()).collect::<Vec<_>>()));
        r
    }
}

// smooth initial fields built from the two longest ring modes
fn initial(x: f64, length: f64, amp: f64) -> (C64, C64) {
    let k = 2.0 * PI / length;
    let e = |m: f64| C64::from_polar(1.0, m * k * x);
    (amp * (1.0 + 0.5 * e(1.0) + 0.3 * e(-2.0)), amp * (0.3 * e(1.0) + 0.2 * e(-1.0)))
}

/// Continuum snapshots at the end of each segment.
fn reference(s: &ArraySection, coupling: CouplingSet) -> Result<Vec<FieldState>, RunError> {
    let grid = Grid1D::with_length(s.reference_points as usize, s.length)?;
    let (a, b): (Vec<C64>, Vec<C64>) = grid.x_axis().map(|x| initial(x, s.length, s.amplitude)).unzip();
    let mut state = FieldState::single(&grid, a, b, Frame::LAB)?;
    let sys = System::new(
        grid.clone(),
        vec![DispersionSpec::polynomial(vec![0.0, 0.0, s.curvature])],
        DispersionSpec::flat(s.omega_b),
        coupling.into(),
    );
    let seg = s.duration / SEGMENTS as f64;
    let steps = (seg / s.reference_dt).ceil() as u64;
    let mut integ = Integrator::new(sys, &state, seg / steps as f64, 0, 0)?;
    let mut out = Vec::with_capacity(SEGMENTS);
    for _ in 0..SEGMENTS {
        for _ in 0..steps {
            integ.step(&mut state)?;
        }
        out.push(state.clone());
    }
    Ok(out)
}

fn lattice_error(s: &ArraySection, n: usize, variant: Variant, local_ref: &mut Option<Vec<FieldState>>) -> Result<f64, RunError> {
    let dx = s.length / n as f64;
    let hop = s.curvature / (dx * dx);
    let g0 = s.g_tilde / dx.sqrt();
    let mut cfg = ArrayConfig::new(n, dx);
    cfg.photon_hopping = Hopping::nearest(hop);
    cfg.onsite_photon = 2.0 * hop;
    cfg.onsite_phonon = s.omega_b;
    // the link's continuum limit carries twice the local coupling
    let (coupling, phonon_offset) = match variant {
        Variant::Local => {
            cfg.g0_site = g0;
            (local_couplings(g0, dx), 0.0)
        }
        Variant::Link => {
            cfg.g0_link = 0.5 * g0;
            (link_couplings(0.5 * g0, dx), 0.5)
        }
    };
    // the local continuum model does not depend on δx
    let refs = match variant {
        Variant::Local => {
            if local_ref.is_none() {
                *local_ref = Some(reference(s, coupling)?);
            }
            local_ref.clone().unwrap()
        }
        Variant::Link => reference(s, coupling)?,
    };
    let ratio = s.reference_points as usize / n;
    let sq = dx.sqrt();
    let mut state = ArrayState {
        a: (0..n).map(|j| sq * initial(j as f64 * dx, s.length, s.amplitude).0).collect(),
        b: (0..n).map(|j| sq * initial((j as f64 + phonon_offset) * dx, s.length, s.amplitude).1).collect(),
        time: 0.0,
    };
    let seg = s.duration / SEGMENTS as f64;
    let steps = (seg * 4.0 * hop / s.step_fraction).ceil() as u64;
    let dt = seg / steps as f64;
    let (mut err2, mut ref2) = (0.0, 0.0);
    for r in &refs {
        state = simulate_array(&cfg, state, None, dt, steps, steps, 0, 0)?.final_state;
        for j in 0..n {
            let ra = r.a()[j * ratio];
            let rb = r.b()[j * ratio + (phonon_offset * ratio as f64) as usize];
            err2 += (state.a[j] / sq - ra).norm_sqr() + (state.b[j] / sq - rb).norm_sqr();
            ref2 += ra.norm_sqr() + rb.norm_sqr();
        }
    }
    Ok((err2 / ref2).sqrt())
}

pub fn run(s: &ArraySection) -> Result<ArrayResult, RunError> {
    let variants: &[Variant] = match s.coupling.as_str() {
        "local" => &[Variant::Local],
        "link" => &[Variant::Link],
        _ => &[Variant::Local, Variant::Link],
    };
    let mut studies = Vec::new();
    let mut local_ref = None;
    for &v in variants {
        let mut c = Convergence { variant: v, sites: s.sites.clone(), dx: Vec::new(), error: Vec::new(), order: 0.0 };
        for &n in &s.sites {
            let e = lattice_error(s, n as usize, v, &mut local_ref)?;
            log::info!("{} coupling, {n} sites: relative L2 error {e:e}", v.as_str());
            c.dx.push(s.length / n as f64);
            c.error.push(e);
        }
        let lx: Vec<f64> = c.dx.iter().map(|d| d.ln()).collect();
        let ly: Vec<f64> = c.error.iter().map(|e| e.ln()).collect();
        c.order = fit_line(&lx, &ly).0;
        studies.push(c);
    }
    Ok(ArrayResult { studies })
}
