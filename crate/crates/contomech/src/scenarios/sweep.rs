//! Strong-coupling regime map over the pump-enhanced coupling |g̃₁₂|.

use contomech_core::strongcoupling::{classify, CoherentParams, Regime};
use contomech_core::C64;

use super::RunError;
use crate::config::SweepSection;
use crate::output::{json_num, Report, Table};

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub g: Vec<f64>,
    pub lambda_plus: Vec<C64>,
    pub lambda_minus: Vec<C64>,
    pub d: Vec<f64>,
    pub regimes: Vec<Regime>,
    pub threshold_osc: f64,
    pub threshold_strong: f64,
    pub strong_onset: f64,
}

impl SweepResult {
    /// First sweep index with complex eigenvalues.
    pub fn first_oscillating(&self) -> Option<usize> {
        self.lambda_plus.iter().position(|l| l.im != 0.0)
    }

    pub fn first_strong(&self) -> Option<usize> {
        self.regimes.iter().position(|r| *r == Regime::StrongCoupling)
    }

    pub fn report(&self) -> Report {
        let mut t = Table::new(
            "regime_sweep",
            &[
                ("g12", "Hz"),
                ("re_lambda_plus", "/m"),
                ("im_lambda_plus", "/m"),
                ("re_lambda_minus", "/m"),
                ("im_lambda_minus", "/m"),
                ("D", "/m^2"),
                ("regime", "1"),
            ],
        );
        for i in 0..self.g.len() {
            let (p, m) = (self.lambda_plus[i], self.lambda_minus[i]);
            t.push(vec![self.g[i].into(), p.re.into(), p.im.into(), m.re.into(), m.im.into(), self.d[i].into(), self.regimes[i].as_str().into()]);
        }
        let mut r = Report { tables: vec![t], ..Report::default() };
        r.set("threshold_osc_Hz", json_num(self.threshold_osc));
        r.set("threshold_strong_Hz", json_num(self.threshold_strong));
        r.set("strong_onset_Hz", json_num(self.strong_onset));
        r.set("first_oscillating_g_Hz", self.first_oscillating().map_or(serde_json::Value::Null, |i| json_num(self.g[i])));
        r.set("first_strong_g_Hz", self.first_strong().map_or(serde_json::Value::Null, |i| json_num(self.g[i])));
        r
    }
}

pub fn sweep_points(s: &SweepSection) -> Vec<f64> {
    let n = s.points as usize;
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if s.spacing == "log" {
                s.g_min * (s.g_max / s.g_min).powf(f)
            } else {
                s.g_min + (s.g_max - s.g_min) * f
            }
        })
        .collect()
}

pub fn run(s: &SweepSection) -> Result<SweepResult, RunError> {
    let g = sweep_points(s);
    let mut out = SweepResult {
        lambda_plus: Vec::with_capacity(g.len()),
        lambda_minus: Vec::with_capacity(g.len()),
        d: Vec::with_capacity(g.len()),
        regimes: Vec::with_capacity(g.len()),
        threshold_osc: 0.0,
        threshold_strong: 0.0,
        strong_onset: 0.0,
        g: Vec::new(),
    };
    for &gi in &g {
        let p = CoherentParams { g12: C64::new(gi, 0.0), v2: s.v2, vb: s.vb, gamma2: s.gamma2, gamma_b: s.gamma_b };
        let r = classify(&p, s.ratio)?;
        out.lambda_plus.push(r.lambda_plus);
        out.lambda_minus.push(r.lambda_minus);
        out.d.push(r.d);
        out.regimes.push(r.regime);
        out.threshold_osc = r.threshold_osc;
        out.threshold_strong = r.threshold_strong;
        out.strong_onset = r.strong_onset;
    }
    out.g = g;
    Ok(out)
}
