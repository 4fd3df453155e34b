use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::{Grid1D, Result, C64};

/// Random stream of one trajectory: keyed by the base seed, one ChaCha
/// stream per trajectory index, so ensembles are reproducible in any order.
pub fn trajectory_rng(seed: u64, trajectory: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory);
    rng
}

/// Circular complex Gaussian with `E|z|² = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

/// `√rate·ξ` per cell with `E|ξ|² = (occupation + 1/2)/(dx·dt)`, independent
/// between cells. Adding `dt` times this to a field is one Euler–Maruyama
/// noise increment.
pub fn sample_noise_field<R: Rng + ?Sized>(
    grid: &Grid1D,
    rate: f64,
    occupation: f64,
    dt: f64,
    rng: &mut R,
) -> Result<Vec<C64>> {
    if !(occupation >= 0.0) {
        return Err(Error::param("occupation", "must be non-negative"));
    }
    if !(rate >= 0.0) || !(dt > 0.0) {
        return Err(Error::param("rate", "rate must be non-negative and dt positive"));
    }
    let var = rate * (occupation + 0.5) / (grid.dx() * dt);
    Ok((0..grid.n_points()).map(|_| complex_gaussian(rng, var)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_statistics() {
        let grid = Grid1D::new(2, 0.5).unwrap();
        let (rate, occ, dt) = (3.0, 1.5, 0.01);
        let mut rng = trajectory_rng(7, 0);
        let n = 10_000;
        let (mut mean, mut var0, mut cov) = (C64::new(0.0, 0.0), 0.0, C64::new(0.0, 0.0));
        for _ in 0..n {
            let xi = sample_noise_field(&grid, rate, occ, dt, &mut rng).unwrap();
            mean += xi[0];
            var0 += xi[0].norm_sqr();
            cov += xi[0] * xi[1].conj();
        }
        let expect = rate * (occ + 0.5) / (grid.dx() * dt);
        let nf = n as f64;
        // |mean| of a complex Gaussian: each component has std √(expect/2n)
        assert!((mean / nf).norm() < 4.0 * (expect / nf).sqrt());
        // E|ξ|² estimate has relative std 1/√n
        assert!((var0 / nf - expect).abs() < 3.0 * expect / nf.sqrt());
        assert!((cov / nf).norm() < 3.0 * expect / nf.sqrt());
    }

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = trajectory_rng(1, 0).random();
        let b: u64 = trajectory_rng(1, 1).random();
        let c: u64 = trajectory_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn negative_occupation_rejected() {
        let grid = Grid1D::new(4, 1.0).unwrap();
        assert!(sample_noise_field(&grid, 1.0, -1.0, 0.1, &mut trajectory_rng(0, 0)).is_err());
    }
}
