//! Scenario configuration files.
//!
//! A configuration is a TOML document. Dimensioned values are strings
//! carrying a unit (`Gamma = "6.28e6 /s"`), plain numbers are accepted only
//! for dimensionless keys. Every section is described once by a
//! [`Section::visit`] implementation, which drives parsing, defaults and the
//! effective-config writer alike.

use std::collections::BTreeSet;
use std::fmt;

use toml::{Table, Value};

use crate::units::{format_quantity, parse_quantity, Dim};

/// All problems found in one configuration, one message per offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} configuration error(s):", self.0.len())?;
        for e in &self.0 {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

pub trait Visit {
    fn quantity(&mut self, key: &str, dim: Dim, v: &mut f64);
    fn opt_quantity(&mut self, key: &str, dim: Dim, v: &mut Option<f64>);
    fn quantities(&mut self, key: &str, dim: Dim, v: &mut Vec<f64>);
    /// Dispersion polynomial: entry `n` has dimension rad/s·mⁿ.
    fn coefficients(&mut self, key: &str, v: &mut Vec<f64>);
    fn integer(&mut self, key: &str, v: &mut u64);
    fn integers(&mut self, key: &str, v: &mut Vec<u64>);
    fn flag(&mut self, key: &str, v: &mut bool);
    fn choice(&mut self, key: &str, allowed: &[&str], v: &mut String);
}

pub trait Section: Default {
    fn visit(&mut self, v: &mut dyn Visit);
}

struct Reader<'a> {
    table: &'a Table,
    path: String,
    seen: BTreeSet<String>,
    errors: &'a mut Vec<String>,
}

impl<'a> Reader<'a> {
    fn new(table: &'a Table, path: String, errors: &'a mut Vec<String>) -> Self {
        Reader { table, path, seen: BTreeSet::new(), errors }
    }

    fn get(&mut self, key: &str) -> Option<&'a Value> {
        self.seen.insert(key.to_string());
        self.table.get(key)
    }

    fn err(&mut self, key: &str, msg: impl fmt::Display) {
        self.errors.push(format!("{}.{key}: {msg}", self.path));
    }

    fn parse_one(&mut self, key: &str, v: &Value, dim: Dim) -> Option<f64> {
        let r = match v {
            Value::String(s) => parse_quantity(s, dim).map_err(|e| e.0),
            Value::Float(x) if dim == Dim::Dimensionless => Ok(*x),
            Value::Integer(i) if dim == Dim::Dimensionless => Ok(*i as f64),
            Value::Float(_) | Value::Integer(_) => {
                Err(format!("needs a unit, write it as a string such as \"{}\"", format_quantity(1.0, dim)))
            }
            _ => Err("expected a quantity".to_string()),
        };
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.err(key, e);
                None
            }
        }
    }

    fn parse_int(&mut self, key: &str, v: &Value) -> Option<u64> {
        match v {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            Value::String(s) if s.parse::<u64>().is_ok() => s.parse().ok(),
            _ => {
                self.err(key, "expected a non-negative integer");
                None
            }
        }
    }

    fn finish(self) {
        for key in self.table.keys() {
            if !self.seen.contains(key) {
                self.errors.push(format!("{}.{key}: unknown key", self.path));
            }
        }
    }
}

impl Visit for Reader<'_> {
    fn quantity(&mut self, key: &str, dim: Dim, v: &mut f64) {
        if let Some(val) = self.get(key) {
            if let Some(x) = self.parse_one(key, val, dim) {
                *v = x;
            }
        }
    }

    fn opt_quantity(&mut self, key: &str, dim: Dim, v: &mut Option<f64>) {
        if let Some(val) = self.get(key) {
            if let Some(x) = self.parse_one(key, val, dim) {
                *v = Some(x);
            }
        }
    }

    fn quantities(&mut self, key: &str, dim: Dim, v: &mut Vec<f64>) {
        if let Some(val) = self.get(key) {
            match val {
                Value::Array(items) => {
                    let parsed: Vec<Option<f64>> = items.iter().map(|it| self.parse_one(key, it, dim)).collect();
                    if parsed.iter().all(Option::is_some) {
                        *v = parsed.into_iter().flatten().collect();
                    }
                }
                other => {
                    if let Some(x) = self.parse_one(key, other, dim) {
                        *v = vec![x];
                    }
                }
            }
        }
    }

    fn coefficients(&mut self, key: &str, v: &mut Vec<f64>) {
        if let Some(val) = self.get(key) {
            match val {
                Value::Array(items) if !items.is_empty() => {
                    let parsed: Vec<Option<f64>> = items
                        .iter()
                        .enumerate()
                        .map(|(n, it)| self.parse_one(key, it, Dim::DispersionCoeff(n as u8)))
                        .collect();
                    if parsed.iter().all(Option::is_some) {
                        *v = parsed.into_iter().flatten().collect();
                    }
                }
                _ => self.err(key, "expected a non-empty list of polynomial coefficients"),
            }
        }
    }

    fn integer(&mut self, key: &str, v: &mut u64) {
        if let Some(val) = self.get(key) {
            if let Some(i) = self.parse_int(key, val) {
                *v = i;
            }
        }
    }

    fn integers(&mut self, key: &str, v: &mut Vec<u64>) {
        if let Some(val) = self.get(key) {
            match val {
                Value::Array(items) => {
                    let parsed: Vec<Option<u64>> = items.iter().map(|it| self.parse_int(key, it)).collect();
                    if parsed.iter().all(Option::is_some) {
                        *v = parsed.into_iter().flatten().collect();
                    }
                }
                _ => self.err(key, "expected a list of integers"),
            }
        }
    }

    fn flag(&mut self, key: &str, v: &mut bool) {
        if let Some(val) = self.get(key) {
            match val {
                Value::Boolean(b) => *v = *b,
                _ => self.err(key, "expected true or false"),
            }
        }
    }

    fn choice(&mut self, key: &str, allowed: &[&str], v: &mut String) {
        if let Some(val) = self.get(key) {
            match val.as_str() {
                Some(s) if allowed.contains(&s) => *v = s.to_string(),
                _ => self.err(key, format!("expected one of {}", allowed.join(", "))),
            }
        }
    }
}

#[derive(Default)]
struct Writer {
    table: Table,
}

impl Writer {
    fn put(&mut self, key: &str, v: Value) {
        self.table.insert(key.to_string(), v);
    }
}

fn int_value(i: u64) -> Value {
    if i <= i64::MAX as u64 {
        Value::Integer(i as i64)
    } else {
        Value::String(i.to_string())
    }
}

impl Visit for Writer {
    fn quantity(&mut self, key: &str, dim: Dim, v: &mut f64) {
        self.put(key, Value::String(format_quantity(*v, dim)));
    }

    fn opt_quantity(&mut self, key: &str, dim: Dim, v: &mut Option<f64>) {
        if let Some(x) = v {
            self.put(key, Value::String(format_quantity(*x, dim)));
        }
    }

    fn quantities(&mut self, key: &str, dim: Dim, v: &mut Vec<f64>) {
        self.put(key, Value::Array(v.iter().map(|x| Value::String(format_quantity(*x, dim))).collect()));
    }

    fn coefficients(&mut self, key: &str, v: &mut Vec<f64>) {
        let items = v
            .iter()
            .enumerate()
            .map(|(n, x)| Value::String(format_quantity(*x, Dim::DispersionCoeff(n as u8))))
            .collect();
        self.put(key, Value::Array(items));
    }

    fn integer(&mut self, key: &str, v: &mut u64) {
        self.put(key, int_value(*v));
    }

    fn integers(&mut self, key: &str, v: &mut Vec<u64>) {
        self.put(key, Value::Array(v.iter().map(|i| int_value(*i)).collect()));
    }

    fn flag(&mut self, key: &str, v: &mut bool) {
        self.put(key, Value::Boolean(*v));
    }

    fn choice(&mut self, key: &str, _allowed: &[&str], v: &mut String) {
        self.put(key, Value::String(v.clone()));
    }
}

fn read_section<S: Section>(table: &Table, path: &str, errors: &mut Vec<String>) -> S {
    let mut s = S::default();
    let mut r = Reader::new(table, path.to_string(), errors);
    s.visit(&mut r);
    r.finish();
    s
}

fn write_section<S: Section + Clone>(s: &S) -> Table {
    let mut w = Writer::default();
    s.clone().visit(&mut w);
    w.table
}

// ---------------------------------------------------------------- sections

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Custom,
    Comb,
    BackwardGain,
    IntermodalSwap,
    ArrayConvergence,
    RegimeSweep,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Custom,
        ScenarioKind::Comb,
        ScenarioKind::BackwardGain,
        ScenarioKind::IntermodalSwap,
        ScenarioKind::ArrayConvergence,
        ScenarioKind::RegimeSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Custom => "custom",
            ScenarioKind::Comb => "comb",
            ScenarioKind::BackwardGain => "backward_gain",
            ScenarioKind::IntermodalSwap => "intermodal_swap",
            ScenarioKind::ArrayConvergence => "array_convergence",
            ScenarioKind::RegimeSweep => "regime_sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    fn sections(self) -> &'static [&'static str] {
        match self {
            ScenarioKind::Custom => {
                &["integration", "grid", "photon", "branch", "phonon", "coupling", "bath", "drive", "absorber"]
            }
            ScenarioKind::Comb => &["comb"],
            ScenarioKind::BackwardGain => &["gain"],
            ScenarioKind::IntermodalSwap => &["swap"],
            ScenarioKind::ArrayConvergence => &["array"],
            ScenarioKind::RegimeSweep => &["sweep"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSection {
    pub trajectories: u64,
    pub seed: u64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection { trajectories: 1, seed: 0 }
    }
}

impl Section for EnsembleSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.integer("trajectories", &mut self.trajectories);
        v.integer("seed", &mut self.seed);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSection {
    pub dt: f64,
    pub steps: u64,
    pub output_every: u64,
    pub record_energy: bool,
    /// Drives switch on over this time.
    pub ramp: f64,
    /// Snapshot cadence in steps; 0 writes only the final state.
    pub snapshot_every: u64,
}

impl Default for IntegrationSection {
    fn default() -> Self {
        IntegrationSection { dt: 2e-13, steps: 2000, output_every: 20, record_energy: true, ramp: 0.0, snapshot_every: 0 }
    }
}

impl Section for IntegrationSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("dt", Dim::Time, &mut self.dt);
        v.integer("steps", &mut self.steps);
        v.integer("output_every", &mut self.output_every);
        v.flag("record_energy", &mut self.record_energy);
        v.quantity("ramp", Dim::Time, &mut self.ramp);
        v.integer("snapshot_every", &mut self.snapshot_every);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub n_points: u64,
    pub dx: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { n_points: 256, dx: 1e-4 }
    }
}

impl Section for GridSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.integer("n_points", &mut self.n_points);
        v.quantity("dx", Dim::Length, &mut self.dx);
    }
}

/// One photon branch or the phonon field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSection {
    /// Polynomial coefficients about `reference_k`.
    pub dispersion: Vec<f64>,
    pub reference_k: f64,
    pub frame_omega: f64,
    pub frame_k: f64,
    pub boundary: String,
    pub initial: String,
    pub amplitude: f64,
    /// Carrier of the initial envelope, relative to the frame.
    pub k0: f64,
    pub center: f64,
    pub width: f64,
}

impl Default for FieldSection {
    fn default() -> Self {
        FieldSection {
            dispersion: vec![0.0],
            reference_k: 0.0,
            frame_omega: 0.0,
            frame_k: 0.0,
            boundary: "periodic".into(),
            initial: "vacuum".into(),
            amplitude: 0.0,
            k0: 0.0,
            center: 0.0,
            width: 0.0,
        }
    }
}

impl Section for FieldSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.coefficients("dispersion", &mut self.dispersion);
        v.quantity("reference_k", Dim::Wavenumber, &mut self.reference_k);
        v.quantity("frame_omega", Dim::Rate, &mut self.frame_omega);
        v.quantity("frame_k", Dim::Wavenumber, &mut self.frame_k);
        v.choice("boundary", &["periodic", "open"], &mut self.boundary);
        v.choice("initial", &["vacuum", "plane", "gaussian"], &mut self.initial);
        v.quantity("amplitude", Dim::FieldAmplitude, &mut self.amplitude);
        v.quantity("k0", Dim::Wavenumber, &mut self.k0);
        v.quantity("center", Dim::Length, &mut self.center);
        v.quantity("width", Dim::Length, &mut self.width);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSection {
    pub g_ppp: f64,
    pub g_mmp: f64,
    pub g_mpm: f64,
    pub g_mpm_phase: f64,
    pub g_ppm: f64,
    pub g_mpp: f64,
    pub g_mpp_phase: f64,
    pub g_mmm: f64,
    pub sector: String,
    pub broken_inversion: bool,
    /// Branch matrix, row-major.
    pub g0: Vec<f64>,
    pub g0_phase: Vec<f64>,
    pub exact_phases: bool,
}

impl Default for CouplingSection {
    fn default() -> Self {
        CouplingSection {
            g_ppp: 0.0,
            g_mmp: 0.0,
            g_mpm: 0.0,
            g_mpm_phase: 0.0,
            g_ppm: 0.0,
            g_mpp: 0.0,
            g_mpp_phase: 0.0,
            g_mmm: 0.0,
            sector: "even".into(),
            broken_inversion: false,
            g0: Vec::new(),
            g0_phase: Vec::new(),
            exact_phases: false,
        }
    }
}

impl Section for CouplingSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("g_ppp", Dim::CouplingHalf(1), &mut self.g_ppp);
        v.quantity("g_mmp", Dim::CouplingHalf(5), &mut self.g_mmp);
        v.quantity("g_mpm", Dim::CouplingHalf(5), &mut self.g_mpm);
        v.quantity("g_mpm_phase", Dim::Angle, &mut self.g_mpm_phase);
        v.quantity("g_ppm", Dim::CouplingHalf(3), &mut self.g_ppm);
        v.quantity("g_mpp", Dim::CouplingHalf(3), &mut self.g_mpp);
        v.quantity("g_mpp_phase", Dim::Angle, &mut self.g_mpp_phase);
        v.quantity("g_mmm", Dim::CouplingHalf(7), &mut self.g_mmm);
        v.choice("sector", &["even", "odd", "mixed"], &mut self.sector);
        v.flag("broken_inversion", &mut self.broken_inversion);
        v.quantities("g0", Dim::CouplingHalf(1), &mut self.g0);
        v.quantities("g0_phase", Dim::Angle, &mut self.g0_phase);
        v.flag("exact_phases", &mut self.exact_phases);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BathSection {
    pub kappa: f64,
    /// Per-branch photon decay, overriding `kappa`.
    pub kappa_branch: Vec<f64>,
    pub gamma: f64,
    pub n_th: Option<f64>,
    pub temperature: Option<f64>,
    pub omega_ref: Option<f64>,
    pub sampling: String,
}

impl Default for BathSection {
    fn default() -> Self {
        BathSection {
            kappa: 0.0,
            kappa_branch: Vec::new(),
            gamma: 0.0,
            n_th: None,
            temperature: None,
            omega_ref: None,
            sampling: "none".into(),
        }
    }
}

impl Section for BathSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("kappa", Dim::Rate, &mut self.kappa);
        v.quantities("kappa_branch", Dim::Rate, &mut self.kappa_branch);
        v.quantity("Gamma", Dim::Rate, &mut self.gamma);
        v.opt_quantity("n_th", Dim::Dimensionless, &mut self.n_th);
        v.opt_quantity("temperature", Dim::Temperature, &mut self.temperature);
        v.opt_quantity("omega_ref", Dim::Rate, &mut self.omega_ref);
        v.choice("sampling", &["none", "wigner"], &mut self.sampling);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSection {
    pub mode: String,
    /// 1-based photon branch.
    pub branch: u64,
    /// Lab frequency; the branch frame frequency when absent.
    pub omega: Option<f64>,
    pub power: Option<f64>,
    pub amplitude: Option<f64>,
    pub kappa_ex: f64,
    pub side_amplitude: f64,
    pub profile: String,
    pub center: f64,
    pub width: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        DriveSection {
            mode: "endfire".into(),
            branch: 1,
            omega: None,
            power: None,
            amplitude: None,
            kappa_ex: 0.0,
            side_amplitude: 0.0,
            profile: "uniform".into(),
            center: 0.0,
            width: 0.0,
        }
    }
}

impl Section for DriveSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.choice("mode", &["endfire", "side"], &mut self.mode);
        v.integer("branch", &mut self.branch);
        v.opt_quantity("omega", Dim::Rate, &mut self.omega);
        v.opt_quantity("power", Dim::Power, &mut self.power);
        v.opt_quantity("amplitude", Dim::FluxAmplitude, &mut self.amplitude);
        v.quantity("kappa_ex", Dim::Rate, &mut self.kappa_ex);
        v.quantity("side_amplitude", Dim::SideAmplitude, &mut self.side_amplitude);
        v.choice("profile", &["uniform", "gaussian"], &mut self.profile);
        v.quantity("center", Dim::Length, &mut self.center);
        v.quantity("width", Dim::Length, &mut self.width);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorberSection {
    pub fraction: f64,
    pub strength: f64,
    pub side: String,
}

impl Default for AbsorberSection {
    fn default() -> Self {
        AbsorberSection { fraction: 0.1, strength: 0.0, side: "right".into() }
    }
}

impl Section for AbsorberSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("fraction", Dim::Dimensionless, &mut self.fraction);
        v.quantity("strength", Dim::Rate, &mut self.strength);
        v.choice("side", &["left", "right"], &mut self.side);
    }
}

/// Everything the `custom` scenario reads.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomConfig {
    pub grid: GridSection,
    /// Single-branch photon; ignored when `branches` is non-empty.
    pub photon: FieldSection,
    pub branches: Vec<FieldSection>,
    pub phonon: FieldSection,
    pub coupling: CouplingSection,
    pub bath: BathSection,
    pub drives: Vec<DriveSection>,
    pub absorber: Option<AbsorberSection>,
}

impl Default for CustomConfig {
    fn default() -> Self {
        // a Gaussian packet in a dispersive guide, coupled to a damped flat
        // phonon band with thermal noise
        let photon = FieldSection {
            dispersion: vec![1.2e15, 7e7, 2.0e-2],
            reference_k: 8.7e6,
            frame_omega: 1.2e15,
            frame_k: 8.7e6,
            initial: "gaussian".into(),
            amplitude: 1e3,
            center: 6.4e-3,
            width: 1.5e-3,
            ..FieldSection::default()
        };
        let phonon = FieldSection { dispersion: vec![2.0 * std::f64::consts::PI * 1e9], ..FieldSection::default() };
        CustomConfig {
            grid: GridSection::default(),
            photon,
            branches: Vec::new(),
            phonon,
            coupling: CouplingSection { g_ppp: 1e3, ..CouplingSection::default() },
            bath: BathSection {
                kappa: 1e6,
                gamma: 2.0 * std::f64::consts::PI * 1e6,
                n_th: Some(600.0),
                sampling: "wigner".into(),
                ..BathSection::default()
            },
            drives: Vec::new(),
            absorber: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub v2: f64,
    pub vb: f64,
    pub gamma2: f64,
    pub gamma_b: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub points: u64,
    pub spacing: String,
    /// Strong-coupling ratio R on |Im λ|/|Re λ|.
    pub ratio: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            v2: 7e7,
            vb: 6e3,
            gamma2: 0.05,
            gamma_b: 10.0,
            g_min: 1e4,
            g_max: 1e8,
            points: 10_000,
            spacing: "log".into(),
            ratio: 10.0,
        }
    }
}

impl Section for SweepSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("v2", Dim::Velocity, &mut self.v2);
        v.quantity("vb", Dim::Velocity, &mut self.vb);
        v.quantity("gamma2", Dim::Wavenumber, &mut self.gamma2);
        v.quantity("gamma_b", Dim::Wavenumber, &mut self.gamma_b);
        v.quantity("g_min", Dim::Rate, &mut self.g_min);
        v.quantity("g_max", Dim::Rate, &mut self.g_max);
        v.integer("points", &mut self.points);
        v.choice("spacing", &["log", "linear"], &mut self.spacing);
        v.quantity("ratio", Dim::Dimensionless, &mut self.ratio);
    }
}

/// Backward Brillouin amplification, one run per `(g0, pump_power)` pair.
/// The phonon frequency follows from phase matching.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSection {
    pub g0: Vec<f64>,
    pub pump_power: Vec<f64>,
    /// Photon group velocity of both branches.
    pub v: f64,
    pub vb: f64,
    pub gamma: f64,
    /// Stokes spatial power decay rate γ₂ = κ₂/v.
    pub gamma2: f64,
    pub omega1: f64,
    pub n_points: u64,
    pub length: f64,
    /// Stokes seed power relative to the pump.
    pub seed_fraction: f64,
    pub tol: f64,
    /// Cells left out of the fit at each end.
    pub fit_margin: u64,
}

impl Default for GainSection {
    fn default() -> Self {
        GainSection {
            g0: vec![1e4, 1e3, 1e2],
            pump_power: vec![1e-3, 1e-1, 10.0],
            v: 7e7,
            vb: 100.0,
            gamma: 2.0 * std::f64::consts::PI * 1e6,
            gamma2: 10.0,
            omega1: 2.0 * std::f64::consts::PI * 193.5e12,
            n_points: 128,
            length: 0.04,
            seed_fraction: 1e-8,
            tol: 1e-6,
            fit_margin: 4,
        }
    }
}

impl Section for GainSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantities("g0", Dim::CouplingHalf(1), &mut self.g0);
        v.quantities("pump_power", Dim::Power, &mut self.pump_power);
        v.quantity("v", Dim::Velocity, &mut self.v);
        v.quantity("vb", Dim::Velocity, &mut self.vb);
        v.quantity("Gamma", Dim::Rate, &mut self.gamma);
        v.quantity("gamma2", Dim::Wavenumber, &mut self.gamma2);
        v.quantity("omega1", Dim::Rate, &mut self.omega1);
        v.integer("n_points", &mut self.n_points);
        v.quantity("length", Dim::Length, &mut self.length);
        v.quantity("seed_fraction", Dim::Dimensionless, &mut self.seed_fraction);
        v.quantity("tol", Dim::Dimensionless, &mut self.tol);
        v.integer("fit_margin", &mut self.fit_margin);
    }
}

/// Forward intra-band comb from a cw pump crossing a coherent phonon wave.
/// The phonon runs at the phase-matched frequency `v·q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombSection {
    pub n_points: u64,
    pub length: f64,
    pub v: f64,
    pub omega_l: f64,
    pub k_l: f64,
    /// Phonon wavenumber in units of 2π/length.
    pub phonon_mode: u64,
    pub g0: f64,
    pub phonon_amplitude: f64,
    pub pump_power: f64,
    /// Recorded phonon periods.
    pub periods: u64,
    /// Probe position as a fraction of the length.
    pub probe: f64,
}

impl Default for CombSection {
    fn default() -> Self {
        CombSection {
            n_points: 256,
            length: 1.0,
            v: 7e7,
            omega_l: 1.2e15,
            k_l: 8.7e6,
            phonon_mode: 8,
            g0: 1e3,
            phonon_amplitude: 4.5e4,
            pump_power: 1e-3,
            periods: 64,
            probe: 0.9,
        }
    }
}

impl Section for CombSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.integer("n_points", &mut self.n_points);
        v.quantity("length", Dim::Length, &mut self.length);
        v.quantity("v", Dim::Velocity, &mut self.v);
        v.quantity("omega_L", Dim::Rate, &mut self.omega_l);
        v.quantity("k_L", Dim::Wavenumber, &mut self.k_l);
        v.integer("phonon_mode", &mut self.phonon_mode);
        v.quantity("g0", Dim::CouplingHalf(1), &mut self.g0);
        v.quantity("phonon_amplitude", Dim::FieldAmplitude, &mut self.phonon_amplitude);
        v.quantity("pump_power", Dim::Power, &mut self.pump_power);
        v.integer("periods", &mut self.periods);
        v.quantity("probe", Dim::Dimensionless, &mut self.probe);
    }
}

/// Inter-modal swap in the coherent-phonon limit.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapSection {
    /// Pump-enhanced coupling |g̃₁₂|.
    pub g12: f64,
    pub g12_phase: f64,
    /// Group velocity of both photon branches; must be a whole multiple of `vb`.
    pub v: f64,
    pub vb: f64,
    pub gamma2: f64,
    pub gamma_b: f64,
    pub omega1: f64,
    pub omega_b: f64,
    pub pump_power: f64,
    pub seed_fraction: f64,
    pub n_points: u64,
    pub length: f64,
    pub ratio: f64,
    pub tol: f64,
}

impl Default for SwapSection {
    fn default() -> Self {
        SwapSection {
            g12: 4.0 * 2e3f64.sqrt() * 1e3f64.sqrt(),
            g12_phase: 0.2,
            v: 2e3,
            vb: 1e3,
            gamma2: 2.0,
            gamma_b: 6.0,
            omega1: 1.2e15,
            omega_b: 2.0 * std::f64::consts::PI * 1e8,
            pump_power: 1e-3,
            seed_fraction: 1e-8,
            n_points: 2048,
            length: 4.096,
            ratio: 10.0,
            tol: 1e-10,
        }
    }
}

impl Section for SwapSection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("g12", Dim::Rate, &mut self.g12);
        v.quantity("g12_phase", Dim::Angle, &mut self.g12_phase);
        v.quantity("v", Dim::Velocity, &mut self.v);
        v.quantity("vb", Dim::Velocity, &mut self.vb);
        v.quantity("gamma2", Dim::Wavenumber, &mut self.gamma2);
        v.quantity("gamma_b", Dim::Wavenumber, &mut self.gamma_b);
        v.quantity("omega1", Dim::Rate, &mut self.omega1);
        v.quantity("Omega_b", Dim::Rate, &mut self.omega_b);
        v.quantity("pump_power", Dim::Power, &mut self.pump_power);
        v.quantity("seed_fraction", Dim::Dimensionless, &mut self.seed_fraction);
        v.integer("n_points", &mut self.n_points);
        v.quantity("length", Dim::Length, &mut self.length);
        v.quantity("ratio", Dim::Dimensionless, &mut self.ratio);
        v.quantity("tol", Dim::Dimensionless, &mut self.tol);
    }
}

/// Lattice-versus-continuum convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ArraySection {
    pub length: f64,
    /// Continuum curvature `ω = D k²` the lattice approximates.
    pub curvature: f64,
    pub omega_b: f64,
    /// Continuum coupling g̃₀ held fixed while δx shrinks.
    pub g_tilde: f64,
    pub amplitude: f64,
    pub duration: f64,
    pub sites: Vec<u64>,
    pub reference_points: u64,
    pub coupling: String,
    /// Lattice RK4 step as a fraction of 1/(4J).
    pub step_fraction: f64,
    /// Continuum reference step.
    pub reference_dt: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            length: 1.0,
            curvature: 0.01,
            omega_b: 5.0,
            g_tilde: 1.0,
            amplitude: 1.0,
            duration: 2.0,
            sites: vec![32, 64, 128, 256],
            reference_points: 512,
            coupling: "both".into(),
            step_fraction: 0.02,
            reference_dt: 1e-4,
        }
    }
}

impl Section for ArraySection {
    fn visit(&mut self, v: &mut dyn Visit) {
        v.quantity("length", Dim::Length, &mut self.length);
        v.quantity("D", Dim::Diffusivity, &mut self.curvature);
        v.quantity("Omega_b", Dim::Rate, &mut self.omega_b);
        v.quantity("g_tilde", Dim::CouplingHalf(1), &mut self.g_tilde);
        v.quantity("amplitude", Dim::FieldAmplitude, &mut self.amplitude);
        v.quantity("duration", Dim::Time, &mut self.duration);
        v.integers("sites", &mut self.sites);
        v.integer("reference_points", &mut self.reference_points);
        v.choice("coupling", &["local", "link", "both"], &mut self.coupling);
        v.quantity("step_fraction", Dim::Dimensionless, &mut self.step_fraction);
        v.quantity("reference_dt", Dim::Time, &mut self.reference_dt);
    }
}

// ------------------------------------------------------------ whole config

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub ensemble: EnsembleSection,
    pub integration: IntegrationSection,
    pub custom: CustomConfig,
    pub sweep: SweepSection,
    pub gain: GainSection,
    pub comb: CombSection,
    pub swap: SwapSection,
    pub array: ArraySection,
}

impl ScenarioConfig {
    /// Built-in preset of a scenario.
    pub fn preset(scenario: ScenarioKind) -> Self {
        ScenarioConfig {
            scenario,
            ensemble: EnsembleSection::default(),
            integration: IntegrationSection::default(),
            custom: CustomConfig::default(),
            sweep: SweepSection::default(),
            gain: GainSection::default(),
            comb: CombSection::default(),
            swap: SwapSection::default(),
            array: ArraySection::default(),
        }
    }

    /// Parse a configuration. `scenario` (from the command line) overrides
    /// the file's `[scenario] name`.
    pub fn parse(text: &str, scenario: Option<ScenarioKind>) -> Result<Self, ConfigErrors> {
        let doc: Table = text.parse().map_err(|e: toml::de::Error| ConfigErrors(vec![format!("TOML syntax: {e}")]))?;
        let mut errors = Vec::new();

        let mut name = String::new();
        if let Some(v) = doc.get("scenario") {
            match v.as_table() {
                Some(t) => {
                    let mut r = Reader::new(t, "scenario".into(), &mut errors);
                    let names: Vec<&str> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                    r.choice("name", &names, &mut name);
                    r.finish();
                }
                None => errors.push("scenario: expected a section".into()),
            }
        }
        let kind = match (scenario, ScenarioKind::from_name(&name)) {
            (Some(k), _) => k,
            (None, Some(k)) => k,
            (None, None) => {
                if name.is_empty() && !errors.iter().any(|e| e.starts_with("scenario.name")) {
                    errors.push("scenario.name: missing (or pass --scenario)".into());
                }
                ScenarioKind::Custom
            }
        };
        let mut cfg = Self::preset(kind);

        let table = |key: &str, errors: &mut Vec<String>| -> Option<Table> {
            match doc.get(key) {
                None => None,
                Some(Value::Table(t)) => Some(t.clone()),
                Some(_) => {
                    errors.push(format!("{key}: expected a section"));
                    None
                }
            }
        };
        let array = |key: &str, errors: &mut Vec<String>| -> Vec<Table> {
            match doc.get(key) {
                None => Vec::new(),
                Some(Value::Array(items)) => items
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| match v {
                        Value::Table(t) => Some(t.clone()),
                        _ => {
                            errors.push(format!("{key}[{i}]: expected a table"));
                            None
                        }
                    })
                    .collect(),
                Some(_) => {
                    errors.push(format!("{key}: expected an array of tables ([[{key}]])"));
                    Vec::new()
                }
            }
        };

        for key in doc.keys() {
            let shared = key == "scenario" || key == "ensemble";
            if !shared && !kind.sections().contains(&key.as_str()) {
                let known = ScenarioKind::ALL.iter().any(|k| k.sections().contains(&key.as_str()));
                if known {
                    errors.push(format!("{key}: section not used by scenario {}", kind.name()));
                } else {
                    errors.push(format!("{key}: unknown section"));
                }
            }
        }

        if let Some(t) = table("ensemble", &mut errors) {
            cfg.ensemble = read_section(&t, "ensemble", &mut errors);
        }
        match kind {
            ScenarioKind::Custom => {
                if let Some(t) = table("integration", &mut errors) {
                    cfg.integration = read_section(&t, "integration", &mut errors);
                }
                // a custom file describes its system from scratch
                let mut c = CustomConfig {
                    grid: GridSection::default(),
                    photon: FieldSection::default(),
                    branches: Vec::new(),
                    phonon: FieldSection::default(),
                    coupling: CouplingSection::default(),
                    bath: BathSection::default(),
                    drives: Vec::new(),
                    absorber: None,
                };
                if doc.is_empty() || (doc.len() == 1 && doc.contains_key("scenario")) {
                    c = CustomConfig::default();
                }
                if let Some(t) = table("grid", &mut errors) {
                    c.grid = read_section(&t, "grid", &mut errors);
                }
                if let Some(t) = table("photon", &mut errors) {
                    c.photon = read_section(&t, "photon", &mut errors);
                }
                c.branches = array("branch", &mut errors)
                    .iter()
                    .enumerate()
                    .map(|(i, t)| read_section(t, &format!("branch[{i}]"), &mut errors))
                    .collect();
                if doc.contains_key("photon") && !c.branches.is_empty() {
                    errors.push("photon: use either [photon] or [[branch]] tables, not both".into());
                }
                if let Some(t) = table("phonon", &mut errors) {
                    c.phonon = read_section(&t, "phonon", &mut errors);
                }
                if let Some(t) = table("coupling", &mut errors) {
                    c.coupling = read_section(&t, "coupling", &mut errors);
                }
                if let Some(t) = table("bath", &mut errors) {
                    c.bath = read_section(&t, "bath", &mut errors);
                }
                c.drives = array("drive", &mut errors)
                    .iter()
                    .enumerate()
                    .map(|(i, t)| read_section(t, &format!("drive[{i}]"), &mut errors))
                    .collect();
                if let Some(t) = table("absorber", &mut errors) {
                    c.absorber = Some(read_section(&t, "absorber", &mut errors));
                }
                cfg.custom = c;
            }
            ScenarioKind::RegimeSweep => {
                if let Some(t) = table("sweep", &mut errors) {
                    cfg.sweep = read_section(&t, "sweep", &mut errors);
                }
            }
            ScenarioKind::BackwardGain => {
                if let Some(t) = table("gain", &mut errors) {
                    cfg.gain = read_section(&t, "gain", &mut errors);
                }
            }
            ScenarioKind::Comb => {
                if let Some(t) = table("comb", &mut errors) {
                    cfg.comb = read_section(&t, "comb", &mut errors);
                }
            }
            ScenarioKind::IntermodalSwap => {
                if let Some(t) = table("swap", &mut errors) {
                    cfg.swap = read_section(&t, "swap", &mut errors);
                }
            }
            ScenarioKind::ArrayConvergence => {
                if let Some(t) = table("array", &mut errors) {
                    cfg.array = read_section(&t, "array", &mut errors);
                }
            }
        }
        cfg.check(&mut errors);
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(ConfigErrors(errors))
        }
    }

    /// Re-run the value checks, e.g. after command-line overrides.
    pub fn validate(&self) -> Result<(), ConfigErrors> {
        let mut errors = Vec::new();
        self.check(&mut errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigErrors(errors))
        }
    }

    /// Value checks beyond syntax and units.
    fn check(&self, errors: &mut Vec<String>) {
        let mut need = |ok: bool, key: &str, msg: &str| {
            if !ok {
                errors.push(format!("{key}: {msg}"));
            }
        };
        need(self.ensemble.trajectories >= 1, "ensemble.trajectories", "must be at least 1");
        match self.scenario {
            ScenarioKind::Custom => {
                let c = &self.custom;
                let i = &self.integration;
                need(i.dt > 0.0, "integration.dt", "must be positive");
                need(i.output_every >= 1, "integration.output_every", "must be at least 1");
                need(i.ramp >= 0.0, "integration.ramp", "must be non-negative");
                need(c.grid.n_points.is_power_of_two() && c.grid.n_points >= 2, "grid.n_points", "must be a power of two ≥ 2");
                need(c.grid.dx > 0.0, "grid.dx", "must be positive");
                let nb = c.branches.len().max(1);
                need(c.bath.kappa >= 0.0, "bath.kappa", "must be non-negative");
                need(c.bath.kappa_branch.iter().all(|&k| k >= 0.0), "bath.kappa_branch", "must be non-negative");
                need(c.bath.kappa_branch.len() <= nb, "bath.kappa_branch", "more entries than photon branches");
                need(c.bath.gamma >= 0.0, "bath.Gamma", "must be non-negative");
                need(c.bath.n_th.is_none() || c.bath.temperature.is_none(), "bath.n_th", "give n_th or temperature, not both");
                need(c.bath.n_th.is_none_or(|n| n >= 0.0), "bath.n_th", "must be non-negative");
                need(
                    c.bath.temperature.is_none() || c.bath.omega_ref.is_some_and(|w| w > 0.0),
                    "bath.omega_ref",
                    "a temperature needs a positive reference frequency",
                );
                need(c.bath.temperature.is_none_or(|t| t >= 0.0), "bath.temperature", "must be non-negative");
                if c.branches.is_empty() {
                    need(c.coupling.g0.is_empty(), "coupling.g0", "branch matrix needs [[branch]] tables");
                } else {
                    need(c.coupling.g0.len() == nb * nb, "coupling.g0", "needs (number of branches)² entries, row-major");
                    need(
                        c.coupling.g0_phase.is_empty() || c.coupling.g0_phase.len() == c.coupling.g0.len(),
                        "coupling.g0_phase",
                        "must match coupling.g0 in length",
                    );
                }
                for (j, d) in c.drives.iter().enumerate() {
                    need(d.branch >= 1 && d.branch as usize <= nb, &format!("drive[{j}].branch"), "no such photon branch (1-based)");
                    if d.mode == "endfire" {
                        need(
                            d.power.is_some() != d.amplitude.is_some(),
                            &format!("drive[{j}].power"),
                            "give exactly one of power or amplitude",
                        );
                    } else {
                        need(d.kappa_ex > 0.0, &format!("drive[{j}].kappa_ex"), "side drive needs kappa_ex > 0");
                    }
                    if d.profile == "gaussian" {
                        need(d.width > 0.0, &format!("drive[{j}].width"), "must be positive for a gaussian profile");
                    }
                }
                let fields = c.branches.iter().chain(std::iter::once(&c.photon)).chain(std::iter::once(&c.phonon));
                for f in fields {
                    if f.initial == "gaussian" && f.width <= 0.0 {
                        need(false, "initial", "gaussian initial data needs width > 0");
                    }
                }
            }
            ScenarioKind::RegimeSweep => {
                let s = &self.sweep;
                need(s.v2 > 0.0 && s.vb > 0.0, "sweep.v2", "velocities must be positive");
                need(s.gamma2 >= 0.0 && s.gamma_b >= 0.0, "sweep.gamma2", "decay rates must be non-negative");
                need(s.g_min > 0.0 && s.g_max > s.g_min, "sweep.g_max", "needs 0 < g_min < g_max");
                need(s.points >= 2, "sweep.points", "at least 2");
                need(s.ratio > 0.0, "sweep.ratio", "must be positive");
            }
            ScenarioKind::BackwardGain => {
                let g = &self.gain;
                need(!g.g0.is_empty() && g.g0.len() == g.pump_power.len(), "gain.pump_power", "needs one entry per g0");
                need(g.g0.iter().all(|&x| x > 0.0), "gain.g0", "must be positive");
                need(g.pump_power.iter().all(|&x| x > 0.0), "gain.pump_power", "must be positive");
                need(g.v > 0.0 && g.vb > 0.0, "gain.v", "velocities must be positive");
                need(g.gamma > 0.0, "gain.Gamma", "must be positive");
                need(g.gamma2 >= 0.0, "gain.gamma2", "must be non-negative");
                need(g.n_points.is_power_of_two() && g.n_points >= 16, "gain.n_points", "must be a power of two ≥ 16");
                need(g.length > 0.0, "gain.length", "must be positive");
                need(g.seed_fraction > 0.0 && g.seed_fraction < 1.0, "gain.seed_fraction", "must lie in (0, 1)");
                need(2 * g.fit_margin + 4 < g.n_points, "gain.fit_margin", "leaves too few cells to fit");
            }
            ScenarioKind::Comb => {
                let c = &self.comb;
                need(c.n_points.is_power_of_two() && c.n_points >= 16, "comb.n_points", "must be a power of two ≥ 16");
                need(c.length > 0.0 && c.v > 0.0, "comb.length", "length and velocity must be positive");
                need(c.phonon_mode >= 1 && c.phonon_mode < c.n_points / 4, "comb.phonon_mode", "must lie in 1..n_points/4");
                need(c.periods >= 4, "comb.periods", "at least 4");
                need(
                    c.phonon_mode >= 1 && c.n_points % (2 * c.phonon_mode) == 0,
                    "comb.phonon_mode",
                    "2·phonon_mode must divide n_points so a phonon period is a whole number of steps",
                );
                need(
                    c.phonon_mode >= 1 && (c.periods * c.n_points / (2 * c.phonon_mode)).is_power_of_two(),
                    "comb.periods",
                    "the record of periods·n_points/(2·phonon_mode) steps must be a power of two",
                );
                need(c.probe > 0.0 && c.probe < 1.0, "comb.probe", "must lie in (0, 1)");
                need(c.pump_power > 0.0, "comb.pump_power", "must be positive");
            }
            ScenarioKind::IntermodalSwap => {
                let s = &self.swap;
                need(s.v > 0.0 && s.vb > 0.0, "swap.v", "velocities must be positive");
                let r = s.v / s.vb;
                need((r - r.round()).abs() < 1e-12 * r && r >= 1.0, "swap.vb", "v must be a whole multiple of vb");
                need(s.gamma2 >= 0.0 && s.gamma_b > 0.0, "swap.gamma_b", "needs gamma_b > 0 and gamma2 ≥ 0");
                need(s.n_points.is_power_of_two() && s.n_points >= 16, "swap.n_points", "must be a power of two ≥ 16");
                need(s.length > 0.0 && s.pump_power > 0.0, "swap.length", "length and pump power must be positive");
                need(s.seed_fraction > 0.0 && s.seed_fraction < 1.0, "swap.seed_fraction", "must lie in (0, 1)");
            }
            ScenarioKind::ArrayConvergence => {
                let a = &self.array;
                need(a.sites.len() >= 2, "array.sites", "at least two resolutions");
                need(
                    a.sites.iter().all(|&n| n.is_power_of_two() && n >= 8 && 2 * n <= a.reference_points),
                    "array.sites",
                    "powers of two ≥ 8 with 2·sites ≤ reference_points",
                );
                need(a.reference_points.is_power_of_two(), "array.reference_points", "must be a power of two");
                need(a.length > 0.0 && a.curvature > 0.0 && a.duration > 0.0, "array.length", "length, D and duration must be positive");
                need(a.step_fraction > 0.0 && a.step_fraction <= 0.5, "array.step_fraction", "must lie in (0, 0.5]");
                need(a.reference_dt > 0.0, "array.reference_dt", "must be positive");
            }
        }
    }

    /// The configuration as a file that reproduces this run exactly.
    pub fn effective(&self) -> String {
        let mut doc = Table::new();
        let mut head = Table::new();
        head.insert("name".into(), Value::String(self.scenario.name().into()));
        doc.insert("scenario".into(), Value::Table(head));
        doc.insert("ensemble".into(), Value::Table(write_section(&self.ensemble)));
        match self.scenario {
            ScenarioKind::Custom => {
                let c = &self.custom;
                doc.insert("integration".into(), Value::Table(write_section(&self.integration)));
                doc.insert("grid".into(), Value::Table(write_section(&c.grid)));
                if c.branches.is_empty() {
                    doc.insert("photon".into(), Value::Table(write_section(&c.photon)));
                } else {
                    doc.insert(
                        "branch".into(),
                        Value::Array(c.branches.iter().map(|b| Value::Table(write_section(b))).collect()),
                    );
                }
                doc.insert("phonon".into(), Value::Table(write_section(&c.phonon)));
                doc.insert("coupling".into(), Value::Table(write_section(&c.coupling)));
                doc.insert("bath".into(), Value::Table(write_section(&c.bath)));
                if !c.drives.is_empty() {
                    doc.insert(
                        "drive".into(),
                        Value::Array(c.drives.iter().map(|d| Value::Table(write_section(d))).collect()),
                    );
                }
                if let Some(a) = &c.absorber {
                    doc.insert("absorber".into(), Value::Table(write_section(a)));
                }
            }
            ScenarioKind::RegimeSweep => {
                doc.insert("sweep".into(), Value::Table(write_section(&self.sweep)));
            }
            ScenarioKind::BackwardGain => {
                doc.insert("gain".into(), Value::Table(write_section(&self.gain)));
            }
            ScenarioKind::Comb => {
                doc.insert("comb".into(), Value::Table(write_section(&self.comb)));
            }
            ScenarioKind::IntermodalSwap => {
                doc.insert("swap".into(), Value::Table(write_section(&self.swap)));
            }
            ScenarioKind::ArrayConvergence => {
                doc.insert("array".into(), Value::Table(write_section(&self.array)));
            }
        }
        toml::to_string(&doc).expect("tables of strings and numbers always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip_through_effective_config() {
        for kind in ScenarioKind::ALL {
            let cfg = ScenarioConfig::preset(kind);
            let text = cfg.effective();
            let back = ScenarioConfig::parse(&text, None).unwrap_or_else(|e| panic!("{}: {e}\n{text}", kind.name()));
            assert_eq!(back, cfg, "{}", kind.name());
        }
    }

    #[test]
    fn every_offending_key_is_listed() {
        let text = r#"
            [scenario]
            name = "regime_sweep"
            [sweep]
            v2 = 7e7
            vb = "6 km"
            gamma_b = "10 /m"
            colour = "blue"
            [gain]
            g0 = ["1 Hz*m^1/2"]
            [mystery]
            x = 1
        "#;
        let errs = ScenarioConfig::parse(text, None).unwrap_err().0;
        let has = |s: &str| errs.iter().any(|e| e.contains(s));
        assert!(has("sweep.v2: needs a unit"), "{errs:?}");
        assert!(has("sweep.vb: unit `km`"), "{errs:?}");
        assert!(has("sweep.colour: unknown key"), "{errs:?}");
        assert!(has("gain: section not used"), "{errs:?}");
        assert!(has("mystery: unknown section"), "{errs:?}");
        assert_eq!(errs.len(), 5, "{errs:?}");
    }

    #[test]
    fn command_line_scenario_wins() {
        let cfg = ScenarioConfig::parse("[scenario]\nname = \"comb\"\n", Some(ScenarioKind::RegimeSweep)).unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::RegimeSweep);
        assert!(ScenarioConfig::parse("", None).is_err());
    }

    #[test]
    fn custom_file_with_branches() {
        let text = r#"
            [scenario]
            name = "custom"
            [integration]
            dt = "1 ps"
            steps = 10
            [grid]
            n_points = 64
            dx = "0.1 mm"
            [[branch]]
            dispersion = ["0 rad/s", "7e7 m/s"]
            [[branch]]
            dispersion = ["0 rad/s", "-7e7 m/s"]
            [coupling]
            g0 = ["0 Hz*m^1/2", "1e3 Hz*m^1/2", "1e3 Hz*m^1/2", "0 Hz*m^1/2"]
            [[drive]]
            branch = 3
            power = "1 W"
            amplitude = "1 s^-1/2"
        "#;
        let errs = ScenarioConfig::parse(text, None).unwrap_err().0;
        assert!(errs.iter().any(|e| e.starts_with("drive[0].branch")), "{errs:?}");
        assert!(errs.iter().any(|e| e.starts_with("drive[0].power")), "{errs:?}");
        let ok = text.replace("branch = 3", "branch = 2").replace("amplitude = \"1 s^-1/2\"", "");
        let cfg = ScenarioConfig::parse(&ok, None).unwrap();
        assert_eq!(cfg.custom.branches.len(), 2);
        assert_eq!(cfg.integration.dt, 1e-12);
        assert_eq!(ScenarioConfig::parse(&cfg.effective(), None).unwrap(), cfg);
    }
}
