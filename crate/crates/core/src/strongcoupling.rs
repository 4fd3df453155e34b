//! Coherent-phonon limit: spatial evolution of a signal branch and the
//! phonon field under a strong pump, `∂ₓφ = Mφ` with `φ = (δa₂, δb)`.

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;

use crate::error::Error;
use crate::{Result, C64};

pub type Matrix2 = [[C64; 2]; 2];

/// `M = [[−γ₂/2, i g̃₁₂/v₂], [i g̃₁₂*/v_b, −γ_b/2]]`, all entries in 1/m.
pub fn build_matrix(g12: C64, v2: f64, vb: f64, gamma2: f64, gamma_b: f64) -> Result<Matrix2> {
    if !(v2 > 0.0 && vb > 0.0) {
        return Err(Error::param("velocity", "v2 and vb must be positive"));
    }
    let i = C64::new(0.0, 1.0);
    Ok([
        [C64::new(-0.5 * gamma2, 0.0), i * g12 / v2],
        [i * g12.conj() / vb, C64::new(-0.5 * gamma_b, 0.0)],
    ])
}

/// Eigenvalues `(λ₊, λ₋)` of any 2×2 matrix and the discriminant
/// `tr² − 4 det`, which is real for matrices of the form of [`build_matrix`].
pub fn eigenvalues(m: &Matrix2) -> (C64, C64, f64) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    let root = disc.sqrt();
    ((tr + root) * 0.5, (tr - root) * 0.5, disc.re)
}

/// `e^{Mx}` in closed form.
pub fn matrix_exp(m: &Matrix2, x: f64) -> Matrix2 {
    let half_tr = (m[0][0] + m[1][1]) * 0.5;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let s = (half_tr * half_tr - det).sqrt();
    let sx = s * x;
    let (ch, sh_over_s) = if sx.norm() < 1e-8 {
        (C64::new(1.0, 0.0) + sx * sx * 0.5, C64::new(x, 0.0) * (C64::new(1.0, 0.0) + sx * sx / 6.0))
    } else {
        (sx.cosh(), sx.sinh() / s)
    };
    let e = (half_tr * x).exp();
    [
        [e * (ch + sh_over_s * (m[0][0] - half_tr)), e * sh_over_s * m[0][1]],
        [e * sh_over_s * m[1][0], e * (ch + sh_over_s * (m[1][1] - half_tr))],
    ]
}

pub fn apply(m: &Matrix2, v: [C64; 2]) -> [C64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// `φ(x) = e^{Mx} φ(0)`.
pub fn spatial_evolution(m: &Matrix2, phi0: [C64; 2], x: f64) -> [C64; 2] {
    apply(&matrix_exp(m, x), phi0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    /// Pump-enhanced coupling g̃₁₂ (Hz).
    pub g12: C64,
    pub v2: f64,
    pub vb: f64,
    /// Spatial power decay rates (1/m).
    pub gamma2: f64,
    pub gamma_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Overdamped,
    Oscillatory,
    StrongCoupling,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Overdamped => "overdamped",
            Regime::Oscillatory => "oscillatory",
            Regime::StrongCoupling => "strong_coupling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub m: Matrix2,
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    /// `[(γ₂−γ_b)/2]² − 4|g̃₁₂|²/(v₂v_b)` in 1/m².
    pub d: f64,
    /// `(γ₂+γ_b)/2` in 1/m.
    pub gamma_bar: f64,
    /// Coupling (Hz) above which the evolution oscillates: `√(v₂v_b)|γ₂−γ_b|/4`.
    pub threshold_osc: f64,
    /// Strong-coupling scale (Hz): `√(v₂v_b)γ̄/2`.
    pub threshold_strong: f64,
    /// Coupling (Hz) at which `|Im λ| = R|Re λ|` for the ratio used.
    pub strong_onset: f64,
    pub ratio: f64,
    pub regime: Regime,
}

/// Closed-form eigen-analysis and regime label; `ratio` is the `R` in
/// `|Im λ| ≥ R|Re λ|` that defines strong coupling.
pub fn classify(p: &CoherentParams, ratio: f64) -> Result<RegimeReport> {
    if !(ratio > 0.0) {
        return Err(Error::param("ratio", "must be positive"));
    }
    let m = build_matrix(p.g12, p.v2, p.vb, p.gamma2, p.gamma_b)?;
    let gamma_bar = 0.5 * (p.gamma2 + p.gamma_b);
    let half_diff = 0.5 * (p.gamma2 - p.gamma_b);
    let d = half_diff * half_diff - 4.0 * p.g12.norm_sqr() / (p.v2 * p.vb);
    let root = if d >= 0.0 { C64::new(d.sqrt(), 0.0) } else { C64::new(0.0, (-d).sqrt()) };
    let lambda_plus = (C64::new(-gamma_bar, 0.0) + root) * 0.5;
    let lambda_minus = (C64::new(-gamma_bar, 0.0) - root) * 0.5;
    let sv = (p.v2 * p.vb).sqrt();
    let regime = if d >= 0.0 {
        Regime::Overdamped
    } else if lambda_plus.im.abs() >= ratio * lambda_plus.re.abs() {
        Regime::StrongCoupling
    } else {
        Regime::Oscillatory
    };
    Ok(RegimeReport {
        m,
        lambda_plus,
        lambda_minus,
        d,
        gamma_bar,
        threshold_osc: sv * (p.gamma2 - p.gamma_b).abs() / 4.0,
        threshold_strong: sv * gamma_bar / 2.0,
        strong_onset: 0.5 * sv * (ratio * ratio * gamma_bar * gamma_bar + half_diff * half_diff).sqrt(),
        ratio,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(g: f64) -> CoherentParams {
        CoherentParams { g12: C64::new(g, 0.0), v2: 2e8, vb: 5e3, gamma2: 0.1, gamma_b: 40.0 }
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-300)
    }

    #[test]
    fn uncoupled_matrix_is_diagonal() {
        let m = build_matrix(C64::new(0.0, 0.0), 1.0, 2.0, 0.4, 3.0).unwrap();
        assert_eq!(m[0][1], C64::new(0.0, 0.0));
        let (lp, lm, _) = eigenvalues(&m);
        assert!(close(lp, C64::new(-0.2, 0.0), 1e-15));
        assert!(close(lm, C64::new(-1.5, 0.0), 1e-15));
        assert!(build_matrix(C64::new(1.0, 0.0), 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn off_diagonal_magnitudes_equal_iff_velocities_equal() {
        let g = C64::new(3.0, 4.0);
        let m = build_matrix(g, 7.0, 7.0, 1.0, 2.0).unwrap();
        assert!((m[0][1].norm() - m[1][0].norm()).abs() < 1e-15);
        let m = build_matrix(g, 7.0, 8.0, 1.0, 2.0).unwrap();
        assert!((m[0][1].norm() - m[1][0].norm()).abs() > 1e-3);
    }

    #[test]
    fn equal_decay_rates_oscillate_for_any_coupling() {
        let p = CoherentParams { g12: C64::new(1e-3, 0.0), v2: 3.0, vb: 12.0, gamma2: 2.0, gamma_b: 2.0 };
        let r = classify(&p, 10.0).unwrap();
        assert_eq!(r.threshold_osc, 0.0);
        assert!(r.d < 0.0);
        assert!(close(r.lambda_plus, C64::new(-1.0, 1e-3 / 6.0), 1e-14));
    }

    #[test]
    fn boundary_case_is_overdamped() {
        let base = params(0.0);
        let thr = classify(&base, 10.0).unwrap().threshold_osc;
        // pick a coupling for which D vanishes exactly in floating point
        let g = (base.v2 * base.vb).sqrt() * (base.gamma_b - base.gamma2) / 4.0;
        let r = classify(&CoherentParams { g12: C64::new(g, 0.0), ..base }, 10.0).unwrap();
        assert_eq!(g, thr);
        if r.d == 0.0 {
            assert_eq!(r.regime, Regime::Overdamped);
        }
        let zero = CoherentParams { g12: C64::new(0.0, 0.0), gamma2: 1.0, gamma_b: 1.0, ..base };
        let r = classify(&zero, 10.0).unwrap();
        assert_eq!(r.d, 0.0);
        assert_eq!(r.regime, Regime::Overdamped);
    }

    #[test]
    fn closed_form_matches_schur_decomposition() {
        use nalgebra::{Complex, Matrix2 as NM};
        let p = CoherentParams { g12: C64::new(37.0, -12.0), v2: 1.9e8, vb: 5.9e3, gamma2: 0.23, gamma_b: 170.0 };
        for scale in [0.01, 1.0, 30.0] {
            let p = CoherentParams { g12: p.g12 * scale * 1e3, ..p };
            let r = classify(&p, 10.0).unwrap();
            let m = &r.m;
            let nm = NM::new(
                Complex::new(m[0][0].re, m[0][0].im),
                Complex::new(m[0][1].re, m[0][1].im),
                Complex::new(m[1][0].re, m[1][0].im),
                Complex::new(m[1][1].re, m[1][1].im),
            );
            let ev = nm.schur().eigenvalues().expect("complex Schur form is triangular");
            let mut got = [C64::new(ev[0].re, ev[0].im), C64::new(ev[1].re, ev[1].im)];
            let mut want = [r.lambda_plus, r.lambda_minus];
            let key = |z: &C64| (z.re, z.im);
            got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            for (a, b) in got.iter().zip(&want) {
                assert!(close(*a, *b, 1e-12), "{a} vs {b}");
            }
            let (lp, lm, d) = eigenvalues(m);
            assert!((d - r.d).abs() <= 1e-12 * d.abs().max(r.gamma_bar * r.gamma_bar));
            assert!(close(lp + lm, r.lambda_plus + r.lambda_minus, 1e-14));
        }
    }

    #[test]
    fn slow_phonons_raise_the_strong_coupling_scale() {
        let gamma = 2.0 * core::f64::consts::PI * 30e6;
        let at = |vb: f64| {
            let p = CoherentParams { g12: C64::new(1.0, 0.0), v2: 2e8, vb, gamma2: 1e-3, gamma_b: gamma / vb };
            classify(&p, 10.0).unwrap().threshold_strong
        };
        for vb in [1e3, 3e3, 6e3] {
            let approx = (2e8 / vb).sqrt() * gamma / 4.0;
            assert!((at(vb) - approx).abs() < 1e-4 * approx);
        }
        assert!(at(1e3) > at(6e3));
    }

    #[test]
    fn matrix_exponential_solves_the_ode() {
        let m = build_matrix(C64::new(0.7, 0.2), 1.5, 0.5, 0.3, 0.9).unwrap();
        let phi0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.5)];
        // RK4 with a tiny step as the oracle
        let (mut y, h, n) = (phi0, 1e-3, 3000);
        let f = |v: [C64; 2]| apply(&m, v);
        for _ in 0..n {
            let k1 = f(y);
            let k2 = f([y[0] + k1[0] * (h / 2.0), y[1] + k1[1] * (h / 2.0)]);
            let k3 = f([y[0] + k2[0] * (h / 2.0), y[1] + k2[1] * (h / 2.0)]);
            let k4 = f([y[0] + k3[0] * h, y[1] + k3[1] * h]);
            for c in 0..2 {
                y[c] += (k1[c] + 2.0 * (k2[c] + k3[c]) + k4[c]) * (h / 6.0);
            }
        }
        let e = spatial_evolution(&m, phi0, h * n as f64);
        assert!(close(e[0], y[0], 1e-11) && close(e[1], y[1], 1e-11));
        let id = matrix_exp(&m, 0.0);
        assert_eq!(id[0][0], C64::new(1.0, 0.0));
    }

    proptest! {
        #[test]
        fn threshold_sharpness(g in 0.0f64..3e6, g2 in 0.0f64..50.0, gb in 0.0f64..50.0) {
            let p = CoherentParams { g12: C64::new(0.0, g), v2: 2e8, vb: 5e3, gamma2: g2, gamma_b: gb };
            let r = classify(&p, 10.0).unwrap();
            if r.d >= 0.0 {
                prop_assert_eq!(r.lambda_plus.im, 0.0);
                prop_assert_eq!(r.regime, Regime::Overdamped);
            } else {
                prop_assert!((r.lambda_plus.im.abs() - (-r.d).sqrt() / 2.0).abs() <= 1e-15 * (-r.d).sqrt());
                prop_assert!(g > r.threshold_osc * (1.0 - 1e-12));
            }
            let tr = r.m[0][0] + r.m[1][1];
            prop_assert!((tr.re + r.gamma_bar).abs() <= 1e-15 * r.gamma_bar.max(1e-300));
            prop_assert!((r.lambda_plus + r.lambda_minus - tr).norm() <= 1e-14 * r.gamma_bar.max(1e-300));
        }
    }
}
