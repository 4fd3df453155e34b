//! Backward Brillouin amplification of a weak Stokes seed, measured from the
//! full two-branch dynamics and set against the adiabatic small-signal rate.

use std::time::Instant;

use contomech_core::brillouin::{brillouin_gain, photon_power};
use contomech_core::dynamics::{BathSpec, Boundary, Drive, DriveSpec, System};
use contomech_core::interaction::BranchCoupling;
use contomech_core::steady::{find_steady_state, SteadyOptions};
use contomech_core::{DispersionSpec, FieldState, Frame, Grid1D, C64};
use serde_json::json;

use super::{fit_line, RunError};
use crate::config::GainSection;
use crate::output::{json_num, Report, Table};

#[derive(Debug, Clone)]
pub struct GainRun {
    pub g0: f64,
    pub pump_power: f64,
    /// G_B in 1/(W·m).
    pub gain_coefficient: f64,
    /// `G_B P₁ − γ₂` in 1/m.
    pub analytic_rate: f64,
    /// Fitted `−d ln P₂/dx` in 1/m.
    pub measured_rate: f64,
    /// Gain lengths covered by the fit window.
    pub gain_lengths: f64,
    pub pump_depletion: f64,
    /// `γ_b/γ₂`.
    pub decay_ratio: f64,
    pub steps: u64,
    pub seconds: f64,
    pub x: Vec<f64>,
    pub stokes_power: Vec<f64>,
    pub pump_power_profile: Vec<f64>,
}

impl GainRun {
    pub fn relative_error(&self) -> f64 {
        (self.measured_rate - self.analytic_rate).abs() / self.analytic_rate.abs()
    }
}

#[derive(Debug, Clone)]
pub struct GainResult {
    pub runs: Vec<GainRun>,
}

impl GainResult {
    pub fn report(&self) -> Report {
        let mut summary = Table::new(
            "backward_gain",
            &[
                ("g0", "Hz*m^1/2"),
                ("pump_power", "W"),
                ("G_B", "/W/m"),
                ("analytic_rate", "/m"),
                ("measured_rate", "/m"),
                ("relative_error", "1"),
                ("gain_lengths", "1"),
                ("pump_depletion", "1"),
            ],
        );
        let mut r = Report::default();
        let mut runs = Vec::new();
        for (i, g) in self.runs.iter().enumerate() {
            summary.push(vec![
                g.g0.into(),
                g.pump_power.into(),
                g.gain_coefficient.into(),
                g.analytic_rate.into(),
                g.measured_rate.into(),
                g.relative_error().into(),
                g.gain_lengths.into(),
                g.pump_depletion.into(),
            ]);
            let mut prof = Table::new(&format!("profile_{i}"), &[("x", "m"), ("pump_power", "W"), ("stokes_power", "W")]);
            for j in 0..g.x.len() {
                prof.push(vec![g.x[j].into(), g.pump_power_profile[j].into(), g.stokes_power[j].into()]);
            }
            r.tables.push(prof);
            runs.push(json!({
                "g0_Hz_m1/2": json_num(g.g0),
                "pump_power_W": json_num(g.pump_power),
                "G_B_per_W_m": json_num(g.gain_coefficient),
                "analytic_rate_per_m": json_num(g.analytic_rate),
                "measured_rate_per_m": json_num(g.measured_rate),
                "relative_error": json_num(g.relative_error()),
                "gain_lengths": json_num(g.gain_lengths),
                "pump_depletion": json_num(g.pump_depletion),
                "decay_ratio": json_num(g.decay_ratio),
                "steps": g.steps,
            }));
            if g.decay_ratio < 100.0 {
                r.warnings.push(format!("set {i}: γ_b/γ₂ = {:.1} is below 100, the adiabatic rate is not reliable", g.decay_ratio));
            }
        }
        r.tables.insert(0, summary);
        r.set("runs", runs);
        r
    }
}

/// One parameter set: pump launched at x = 0, Stokes seeded at x = L and
/// counter-propagating, phonon frequency and wavenumber phase matched.
pub fn run_one(s: &GainSection, g0: f64, pump_power: f64) -> Result<GainRun, RunError> {
    let start = Instant::now();
    let n = s.n_points as usize;
    let grid = Grid1D::with_length(n, s.length)?;
    let (v, vb, w1) = (s.v, s.vb, s.omega1);
    // Ω = v_b·q with q = k₁ − k₂ = (ω₁ + ω₂)/v and ω₂ = ω₁ − Ω
    let big = 2.0 * vb * w1 / (v + vb);
    let w2 = w1 - big;
    let (k1, k2) = (w1 / v, -w2 / v);
    let q = k1 - k2;
    let frames = [Frame::rotating(w1, k1), Frame::rotating(w2, k2)];
    let phonon_frame = Frame::rotating(big, q);
    let sys = System::new(
        grid.clone(),
        vec![DispersionSpec::about(k1, vec![w1, v]), DispersionSpec::about(k2, vec![w2, -v])],
        DispersionSpec::about(q, vec![big, vb]),
        BranchCoupling::pair(C64::new(g0, 0.0)).into(),
    )
    .with_bath(BathSpec { branch_kappa: vec![0.0, s.gamma2 * v], gamma_mech: s.gamma, ..BathSpec::default() })
    .with_boundaries(vec![Boundary::Open, Boundary::Open, Boundary::Periodic])
    .with_drive(DriveSpec {
        drives: vec![
            Drive::endfire_power(0, pump_power, w1),
            Drive::endfire_power(1, s.seed_fraction * pump_power, w2),
        ],
        ramp_time: 0.0,
    });
    let dt = 2.0 * grid.dx() / v;
    let init = FieldState::vacuum(&grid, &frames, phonon_frame);
    let opts = SteadyOptions { tol: s.tol, ..SteadyOptions::default() };
    let st = find_steady_state(&sys, init, dt, &opts)?;

    let x: Vec<f64> = grid.x_axis().collect();
    let pump: Vec<f64> = st.state.photons[0].field.iter().map(|a| photon_power(w1, v, *a)).collect();
    let stokes: Vec<f64> = st.state.photons[1].field.iter().map(|a| photon_power(w2, v, *a)).collect();
    let m = s.fit_margin as usize;
    let (xs, ys): (Vec<f64>, Vec<f64>) = (m..n - m).map(|i| (x[i], stokes[i].ln())).unzip();
    let (slope, _) = fit_line(&xs, &ys);
    let gain_coefficient = brillouin_gain(g0, v, v, s.gamma, w1)?;
    let analytic_rate = gain_coefficient * pump_power - s.gamma2;
    let measured_rate = -slope;
    let depletion = 1.0 - pump[n - 1] / pump_power;
    Ok(GainRun {
        g0,
        pump_power,
        gain_coefficient,
        analytic_rate,
        measured_rate,
        gain_lengths: measured_rate.abs() * (xs[xs.len() - 1] - xs[0]),
        pump_depletion: depletion,
        decay_ratio: (s.gamma / vb) / s.gamma2,
        steps: st.steps,
        seconds: start.elapsed().as_secs_f64(),
        x,
        stokes_power: stokes,
        pump_power_profile: pump,
    })
}

pub fn run(s: &GainSection) -> Result<GainResult, RunError> {
    let mut runs = Vec::new();
    for (&g0, &p) in s.g0.iter().zip(&s.pump_power) {
        let r = run_one(s, g0, p)?;
        log::info!(
            "g0 = {g0:e}, P1 = {p:e} W: measured {:.4} /m, analytic {:.4} /m ({} steps, {:.1} s)",
            r.measured_rate,
            r.analytic_rate,
            r.steps,
            r.seconds
        );
        runs.push(r);
    }
    Ok(GainResult { runs })
}
