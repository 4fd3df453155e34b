//! A system described key by key in the configuration file.

use contomech_core::dynamics::{
    complex_gaussian, trajectory_rng, AbsorbingLayer, BathSpec, Boundary, Drive, DriveSpec, Entrance, EvolveConfig, Integrator, Observer,
    Sampling, System, Thermal, TrajectoryRecord,
};
use contomech_core::fft::Fft;
use contomech_core::interaction::{BranchCoupling, Coupling};
use contomech_core::{CouplingSet, DispersionSpec, FieldState, Frame, Grid1D, C64, HBAR};
use serde_json::json;

use super::RunError;
use crate::config::{CouplingSection, FieldSection, ScenarioConfig};
use crate::ensemble;
use crate::output::{json_num, Report, Table};
use crate::snapshot::Snapshot;

/// Initial Wigner samples use the trajectory's stream with this bit set, so
/// they never overlap the integrator's noise.
const INITIAL_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone)]
pub struct Built {
    pub system: System,
    /// Mean initial fields, before any Wigner sampling.
    pub initial: FieldState,
    pub dt: f64,
}

fn frame(f: &FieldSection) -> Frame {
    Frame::rotating(f.frame_omega, f.frame_k)
}

fn dispersion(f: &FieldSection) -> DispersionSpec {
    DispersionSpec::about(f.reference_k, f.dispersion.clone())
}

fn boundary(f: &FieldSection) -> Boundary {
    if f.boundary == "open" {
        Boundary::Open
    } else {
        Boundary::Periodic
    }
}

fn profile(grid: &Grid1D, f: &FieldSection) -> Vec<C64> {
    grid.x_axis()
        .map(|x| match f.initial.as_str() {
            "plane" => C64::from_polar(f.amplitude, f.k0 * x),
            "gaussian" => {
                let u = (x - f.center) / f.width;
                C64::from_polar(f.amplitude * (-0.5 * u * u).exp(), f.k0 * x)
            }
            _ => C64::new(0.0, 0.0),
        })
        .collect()
}

fn single_coupling(c: &CouplingSection) -> CouplingSet {
    let even = CouplingSet::even(c.g_ppp, c.g_mmp, C64::from_polar(c.g_mpm, c.g_mpm_phase));
    let odd = CouplingSet::odd(c.g_ppm, C64::from_polar(c.g_mpp, c.g_mpp_phase), c.g_mmm);
    let mut set = match c.sector.as_str() {
        "odd" => odd,
        "mixed" => CouplingSet::mixed(even, odd),
        _ => even,
    };
    set.broken_inversion = c.broken_inversion || set.broken_inversion;
    set
}

pub fn build(cfg: &ScenarioConfig) -> Result<Built, RunError> {
    let c = &cfg.custom;
    let grid = Grid1D::new(c.grid.n_points as usize, c.grid.dx)?;
    let photons: Vec<&FieldSection> = if c.branches.is_empty() { vec![&c.photon] } else { c.branches.iter().collect() };
    let nb = photons.len();
    let coupling: Coupling = if c.branches.is_empty() {
        single_coupling(&c.coupling).into()
    } else {
        let phases = if c.coupling.g0_phase.is_empty() { vec![0.0; nb * nb] } else { c.coupling.g0_phase.clone() };
        let g = c.coupling.g0.iter().zip(&phases).map(|(m, p)| C64::from_polar(*m, *p)).collect();
        let mut bc = BranchCoupling::new(nb, g)?;
        if c.coupling.exact_phases {
            bc = bc.with_exact_phases();
        }
        bc.into()
    };
    let thermal = match (c.bath.n_th, c.bath.temperature, c.bath.omega_ref) {
        (_, Some(kelvin), Some(omega_ref)) => Thermal::Temperature { kelvin, omega_ref },
        (Some(n), _, _) => Thermal::Occupation(n),
        _ => Thermal::Occupation(0.0),
    };
    let bath = BathSpec {
        kappa: c.bath.kappa,
        branch_kappa: c.bath.kappa_branch.clone(),
        gamma_mech: c.bath.gamma,
        thermal,
        sampling: if c.bath.sampling == "wigner" { Sampling::Wigner } else { Sampling::None },
    };
    let mut drives = Vec::new();
    for d in &c.drives {
        let branch = d.branch as usize - 1;
        let omega = d.omega.unwrap_or(photons[branch].frame_omega);
        drives.push(if d.mode == "endfire" {
            match (d.power, d.amplitude) {
                (Some(p), _) => {
                    if !(omega > 0.0) {
                        return Err(RunError::Failed("drive power needs a positive drive frequency".into()));
                    }
                    Drive::endfire_power(branch, p, omega)
                }
                (None, a) => Drive::Endfire { branch, amplitude: C64::new(a.unwrap_or(0.0), 0.0), omega },
            }
        } else {
            let shape: Vec<C64> = grid
                .x_axis()
                .map(|x| {
                    let w = if d.profile == "gaussian" {
                        let u = (x - d.center) / d.width;
                        (-0.5 * u * u).exp()
                    } else {
                        1.0
                    };
                    C64::new(d.side_amplitude * w, 0.0)
                })
                .collect();
            Drive::Side { branch, kappa_ex: d.kappa_ex, omega, profile: shape }
        });
    }
    let mut system = System::new(grid.clone(), photons.iter().map(|f| dispersion(f)).collect(), dispersion(&c.phonon), coupling)
        .with_bath(bath)
        .with_drive(DriveSpec { drives, ramp_time: cfg.integration.ramp })
        .with_boundaries(photons.iter().map(|f| boundary(f)).chain(std::iter::once(boundary(&c.phonon))).collect());
    if let Some(a) = &c.absorber {
        system = system.with_absorber(AbsorbingLayer {
            fraction: a.fraction,
            strength: a.strength,
            side: if a.side == "left" { Entrance::Left } else { Entrance::Right },
        });
    }
    let frames: Vec<Frame> = photons.iter().map(|f| frame(f)).collect();
    let mut initial = FieldState::vacuum(&grid, &frames, frame(&c.phonon));
    for (p, f) in initial.photons.iter_mut().zip(&photons) {
        p.field = profile(&grid, f);
    }
    initial.phonon = profile(&grid, &c.phonon);
    Ok(Built { system, initial, dt: cfg.integration.dt })
}

/// The initial state of trajectory `traj`: the mean fields plus, under
/// Wigner sampling, half a quantum of vacuum noise per mode (and the thermal
/// occupation for the phonon).
pub fn initial_sample(b: &Built, seed: u64, traj: u64) -> FieldState {
    let mut s = b.initial.clone();
    if b.system.bath.sampling == Sampling::Wigner {
        let mut rng = trajectory_rng(seed, traj | INITIAL_STREAM);
        let dx = b.system.grid.dx();
        let n_th = b.system.bath.n_th();
        for p in &mut s.photons {
            for v in &mut p.field {
                *v += complex_gaussian(&mut rng, 0.5 / dx);
            }
        }
        for v in &mut s.phonon {
            *v += complex_gaussian(&mut rng, (n_th + 0.5) / dx);
        }
    }
    s
}

#[derive(Debug, Clone)]
pub struct CustomResult {
    pub report: Report,
    /// Per-trajectory records in trajectory order.
    pub records: Vec<TrajectoryRecord>,
}

struct Snapshots {
    every: u64,
    taken: Vec<(u64, FieldState)>,
}

impl Observer for Snapshots {
    fn observe(&mut self, step: u64, state: &FieldState) {
        if self.every > 0 && step % self.every == 0 {
            self.taken.push((step, state.clone()));
        }
    }
}

fn snapshots(name: &str, s: &FieldState) -> Vec<(String, Snapshot)> {
    let one = |j: usize| Snapshot { dx: s.dx, a: s.photons[j].field.clone(), b: s.phonon.clone() };
    if s.photons.len() == 1 {
        vec![(name.to_string(), one(0))]
    } else {
        (0..s.photons.len()).map(|j| (format!("{name}_branch{}", j + 1), one(j))).collect()
    }
}

// mode occupations |FFT(f)|²·dx/N, so that they sum to ∫|f|²dx
fn occupations(fft: &Fft, f: &[C64], dx: f64) -> Vec<f64> {
    let mut buf = f.to_vec();
    fft.forward(&mut buf);
    let scale = dx / f.len() as f64;
    buf.iter().map(|v| v.norm_sqr() * scale).collect()
}

pub fn run(cfg: &ScenarioConfig) -> Result<CustomResult, RunError> {
    let built = build(cfg)?;
    let it = &cfg.integration;
    let seed = cfg.ensemble.seed;
    let mut ev = EvolveConfig::new(it.steps, it.output_every);
    ev.record_energy = it.record_energy;
    let runs = ensemble::run(cfg.ensemble.trajectories, |traj| -> Result<_, RunError> {
        let init = initial_sample(&built, seed, traj);
        let mut integ = Integrator::new(built.system.clone(), &init, built.dt, seed, traj)?;
        let mut snaps = Snapshots { every: if traj == 0 { it.snapshot_every } else { 0 }, taken: Vec::new() };
        let rec = integ.evolve(init, &ev, &mut [&mut snaps])?;
        Ok((rec, snaps.taken, integ.warnings().to_vec()))
    })?;

    let nb = built.initial.photons.len();
    let ntraj = runs.len() as f64;
    let first = &runs[0].0;
    let mut cols: Vec<(String, String)> = vec![("step".into(), "1".into()), ("time".into(), "s".into())];
    for j in 0..nb {
        cols.push((format!("photon_number_{}", j + 1), "1".into()));
    }
    cols.push(("phonon_number".into(), "1".into()));
    if it.record_energy {
        cols.push(("energy".into(), "J".into()));
    }
    let col_refs: Vec<(&str, &str)> = cols.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut obs = Table::new("observables", &col_refs);
    for r in 0..first.steps.len() {
        let mut row = vec![(first.steps[r] as f64).into(), first.times[r].into()];
        for j in 0..nb {
            row.push((runs.iter().map(|x| x.0.photon_numbers[r][j]).sum::<f64>() / ntraj).into());
        }
        row.push((runs.iter().map(|x| x.0.phonon_numbers[r]).sum::<f64>() / ntraj).into());
        if it.record_energy {
            row.push((HBAR * runs.iter().map(|x| x.0.energies[r]).sum::<f64>() / ntraj).into());
        }
        obs.push(row);
    }

    let grid = &built.system.grid;
    let n = grid.n_points();
    let fft = Fft::new(n)?;
    let mut spec_cols: Vec<(String, String)> = vec![("kappa".into(), "/m".into())];
    for j in 0..nb {
        spec_cols.push((format!("photon_occupation_{}", j + 1), "1".into()));
    }
    spec_cols.push(("phonon_occupation".into(), "1".into()));
    let spec_refs: Vec<(&str, &str)> = spec_cols.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut spectrum = Table::new("spectrum", &spec_refs);
    let mut occ = vec![vec![0.0; n]; nb + 1];
    for (rec, _, _) in &runs {
        for (f, field) in rec.final_state.fields().enumerate() {
            for (o, v) in occ[f].iter_mut().zip(occupations(&fft, field, grid.dx())) {
                *o += v / ntraj;
            }
        }
    }
    for i in 0..n {
        // ascending wavenumber
        let k = (i + n / 2) % n;
        let mut row = vec![grid.k_axis()[k].into()];
        row.extend(occ.iter().map(|o| o[k].into()));
        spectrum.push(row);
    }

    let mut report = Report { tables: vec![obs, spectrum], ..Report::default() };
    for (step, s) in &runs[0].1 {
        report.snapshots.extend(snapshots(&format!("snapshot_{step:08}"), s));
    }
    report.snapshots.extend(snapshots("final", &first.final_state));
    for w in &runs[0].2 {
        report.warnings.push(format!(
            "field {}: {:.2e} of the spectral power sits above half the Nyquist wavenumber",
            w.field, w.high_k_fraction
        ));
    }
    let last = first.steps.len() - 1;
    report.set("dt_s", json_num(built.dt));
    report.set("steps", it.steps);
    report.set("trajectories", cfg.ensemble.trajectories);
    report.set("seed", seed.to_string());
    report.set(
        "final_photon_numbers",
        json!((0..nb).map(|j| json_num(runs.iter().map(|x| x.0.photon_numbers[last][j]).sum::<f64>() / ntraj)).collect::<Vec<_>>()),
    );
    report.set("final_phonon_number", json_num(runs.iter().map(|x| x.0.phonon_numbers[last]).sum::<f64>() / ntraj));
    if it.record_energy && !first.energies.is_empty() {
        let e0 = first.energies[0];
        let drift = first.energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE);
        report.set("energy_drift_trajectory0", json_num(drift));
    }
    Ok(CustomResult { report, records: runs.into_iter().map(|r| r.0).collect() })
}
