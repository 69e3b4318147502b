//! Discrete Fourier transform and one-sided magnitude spectrum.
//!
//! Power-of-two lengths use an iterative radix-2 FFT; other lengths fall back
//! to the direct O(N^2) sum. Default pipeline window sizes are powers of two,
//! so the fallback only serves odd-sized inputs.

use crate::error::{Error, Result};

/// One-sided magnitude spectrum of a real window.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// `|X[k]|` for `k = 0..floor(N/2)`, unnormalized.
    pub magnitudes: Vec<f64>,
    /// Frequency resolution, `sample_rate / N` Hz per bin.
    pub bin_hz: f64,
}

fn check_input(samples: &[f64]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::Invalid("transform needs at least 2 samples".into()));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::Invalid(format!("non-finite sample at index {i}")));
    }
    Ok(())
}

/// Full two-sided DFT of a real input: `X[k] = sum_n x[n] e^{-2 pi i k n / N}`.
/// Returns the real and imaginary parts, each of length N.
pub fn dft_complex(samples: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_input(samples)?;
    let n = samples.len();
    if n.is_power_of_two() {
        Ok(radix2(samples))
    } else {
        Ok(direct(samples))
    }
}

fn radix2(samples: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = samples.len();
    let mut re = samples.to_vec();
    let mut im = vec![0.0; n];

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = -2.0 * std::f64::consts::PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // Per-butterfly twiddles keep rounding error near the f64 floor.
                let (tw_im, tw_re) = (step * k as f64).sin_cos();
                let (ur, ui) = (re[start + k], im[start + k]);
                let (xr, xi) = (re[start + k + half], im[start + k + half]);
                let vr = xr * tw_re - xi * tw_im;
                let vi = xr * tw_im + xi * tw_re;
                re[start + k] = ur + vr;
                im[start + k] = ui + vi;
                re[start + k + half] = ur - vr;
                im[start + k + half] = ui - vi;
            }
        }
        len <<= 1;
    }
    (re, im)
}

fn direct(samples: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = samples.len();
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let base = -2.0 * std::f64::consts::PI / n as f64;
    for k in 0..n {
        let mut sr = 0.0;
        let mut si = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            // Index product reduced mod N before the trig call; k*i would
            // lose precision as an f64 angle for large windows.
            let (s, c) = (base * ((k * i) % n) as f64).sin_cos();
            sr += x * c;
            si += x * s;
        }
        re[k] = sr;
        im[k] = si;
    }
    (re, im)
}

/// One-sided, unnormalized magnitude spectrum: `floor(N/2) + 1` bins.
pub fn fft_magnitude(samples: &[f64], sample_rate: f64) -> Result<Spectrum> {
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::Invalid(format!("sample rate must be positive, got {sample_rate}")));
    }
    let (re, im) = dft_complex(samples)?;
    let n = samples.len();
    let magnitudes = (0..=n / 2).map(|k| re[k].hypot(im[k])).collect();
    Ok(Spectrum { magnitudes, bin_hz: sample_rate / n as f64 })
}
