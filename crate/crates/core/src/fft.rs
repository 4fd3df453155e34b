//! In-place iterative radix-2 FFT.
//!
//! Forward transform is unnormalized, `X_k = Σ_j x_j e^{-2πi jk/n}`; the
//! inverse carries the `1/n`.

#[allow(unused_imports)] // inherent methods shadow these once std is linked
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result, C64};

#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    // e^{-2πi j/n} for j < n/2
    twiddles: Vec<C64>,
    bitrev: Vec<usize>,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        let twiddles = (0..n / 2)
            .map(|j| {
                let theta = -2.0 * PI * j as f64 / n as f64;
                C64::new(theta.cos(), theta.sin())
            })
            .collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        Ok(Fft { n, twiddles, bitrev })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, buf: &mut [C64]) {
        self.transform(buf, false);
    }

    pub fn inverse(&self, buf: &mut [C64]) {
        self.transform(buf, true);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, buf: &mut [C64], inverse: bool) {
        assert_eq!(buf.len(), self.n, "fft buffer length");
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for j in 0..half {
                    let mut w = self.twiddles[j * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let u = buf[start + j];
                    let v = buf[start + j + half] * w;
                    buf[start + j] = u + v;
                    buf[start + j + half] = u - v;
                }
            }
            len <<= 1;
        }
    }
}
