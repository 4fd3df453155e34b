//! Forward intra-band scattering: a cw pump crossing a phase-matched
//! coherent phonon wave picks up sidebands at `ω_L ± nΩ`.

use std::f64::consts::PI;

use contomech_core::dynamics::{Boundary, Drive, DriveSpec, Integrator, System};
use contomech_core::fft::Fft;
use contomech_core::{CouplingSet, DispersionSpec, FieldState, Frame, Grid1D, C64};
use serde_json::json;

use super::RunError;
use crate::config::CombSection;
use crate::output::{json_num, Report, Table};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone)]
pub struct CombResult {
    pub omega_b: f64,
    /// Offsets from `ω_L` (rad/s) and normalized power of the probe record.
    pub frequencies: Vec<f64>,
    pub spectrum: Vec<f64>,
    /// `(n, P(ω_L + nΩ), P(ω_L − nΩ))` for n = 1, 2, 3.
    pub sidebands: Vec<(u32, f64, f64)>,
    /// Total power in the carrier and the first three sideband pairs.
    pub captured: f64,
    /// Phase-modulation index `2g₀|β|x/v` at the probe.
    pub modulation_index: f64,
    pub final_state: Snapshot,
}

impl CombResult {
    /// `|P₊ₙ − P₋ₙ|` over the pair mean.
    pub fn asymmetry(&self, n: u32) -> f64 {
        let &(_, p, m) = self.sidebands.iter().find(|s| s.0 == n).expect("sideband order");
        (p - m).abs() / (0.5 * (p + m))
    }

    pub fn report(&self) -> Report {
        let mut spec = Table::new("spectrum", &[("omega_offset", "rad/s"), ("power", "1")]);
        for (f, p) in self.frequencies.iter().zip(&self.spectrum) {
            spec.push(vec![(*f).into(), (*p).into()]);
        }
        let mut side = Table::new("sidebands", &[("n", "1"), ("anti_stokes", "1"), ("stokes", "1"), ("asymmetry", "1")]);
        for &(n, p, m) in &self.sidebands {
            side.push(vec![(n as f64).into(), p.into(), m.into(), self.asymmetry(n).into()]);
        }
        let mut r = Report { tables: vec![side, spec], snapshots: vec![("final".into(), self.final_state.clone())], ..Report::default() };
        r.set("Omega_b_rad_per_s", json_num(self.omega_b));
        r.set("modulation_index", json_num(self.modulation_index));
        r.set("asymmetry", json!(self.sidebands.iter().map(|s| json_num(self.asymmetry(s.0))).collect::<Vec<_>>()));
        r
    }
}

pub fn run(c: &CombSection) -> Result<CombResult, RunError> {
    let n = c.n_points as usize;
    let grid = Grid1D::with_length(n, c.length)?;
    let q = 2.0 * PI * c.phonon_mode as f64 / c.length;
    let omega_b = c.v * q;
    let frame = Frame::rotating(c.omega_l, c.k_l);
    let sys = System::new(
        grid.clone(),
        vec![DispersionSpec::about(c.k_l, vec![c.omega_l, c.v])],
        DispersionSpec::flat(omega_b),
        CouplingSet::simple(c.g0).into(),
    )
    .with_boundaries(vec![Boundary::Open, Boundary::Periodic])
    .with_drive(DriveSpec::single(Drive::endfire_power(0, c.pump_power, c.omega_l)));
    let b: Vec<C64> = grid.x_axis().map(|x| C64::from_polar(c.phonon_amplitude, q * x)).collect();
    let mut state = FieldState::single(&grid, vec![C64::new(0.0, 0.0); n], b, frame)?;
    let dt = 2.0 * grid.dx() / c.v;
    let mut integ = Integrator::new(sys, &state, dt, 0, 0)?;

    // one crossing fills the guide; wait two
    for _ in 0..n {
        integ.step(&mut state)?;
    }
    let per_period = n / (2 * c.phonon_mode as usize);
    let samples = per_period * c.periods as usize;
    let probe = ((c.probe * n as f64) as usize).min(n - 1);
    let mut rec = Vec::with_capacity(samples);
    for _ in 0..samples {
        integ.step(&mut state)?;
        rec.push(state.a()[probe]);
    }
    let fft = Fft::new(samples)?;
    fft.forward(&mut rec);
    let norm = rec.iter().map(|v| v.norm_sqr()).sum::<f64>();
    // the envelope of ω_L + ν oscillates as e^{−iνt}, which lands in bin −ν·S·dt/2π
    let bin = |order: i64| (-(order * c.periods as i64)).rem_euclid(samples as i64) as usize;
    let power = |order: i64| rec[bin(order)].norm_sqr() / norm;
    let sidebands: Vec<(u32, f64, f64)> = (1..=3).map(|k| (k as u32, power(k), power(-k))).collect();
    let captured = power(0) + sidebands.iter().map(|s| s.1 + s.2).sum::<f64>();
    let mut frequencies = Vec::with_capacity(samples);
    let mut spectrum = Vec::with_capacity(samples);
    for i in 0..samples {
        // list from the most negative offset upwards
        let k = (i + samples / 2 + 1) % samples;
        let signed = if k > samples / 2 { k as f64 - samples as f64 } else { k as f64 };
        frequencies.push(-2.0 * PI * signed / (samples as f64 * dt));
        spectrum.push(rec[k].norm_sqr() / norm);
    }
    Ok(CombResult {
        omega_b,
        frequencies,
        spectrum,
        sidebands,
        captured,
        modulation_index: 2.0 * c.g0 * c.phonon_amplitude * grid.x(probe) / c.v,
        final_state: Snapshot { dx: grid.dx(), a: state.a().to_vec(), b: state.b().to_vec() },
    })
}
