//! Statistical feature extraction: 16 descriptors per signal domain, fused
//! across time, spectrum and wavelet subbands into one 112-value vector.

use crate::error::{Error, Result};
use crate::transforms::{dwt_decompose, fft_magnitude, WaveletParams};

/// Names of the 16 statistics, in computation order.
///
/// F1 mean, F2 max, F3 RMS, F4 standard deviation (N-1), F5 impulse factor,
/// F6 crest factor, F7 skewness, F8 kurtosis, F9..F12 central moments 3..6,
/// F13 FM4, F14 variance, F15 shape factor, F16 amplitude entropy.
pub const STAT_NAMES: [&str; 16] = [
    "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10", "F11", "F12", "F13", "F14",
    "F15", "F16",
];

/// The 16 statistics of one vector; `f[0]` holds F1, `f[15]` holds F16.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector16 {
    pub f: [f64; 16],
}

/// Compute the 16 statistics of a real vector.
///
/// Conventions: standard deviation, skewness and kurtosis use the N-1
/// denominator; central moments F9..F12 use 1/N; impulse and shape factors
/// divide by the mean absolute value; entropy is natural-log over the
/// absolute-value-normalized distribution with zero terms contributing zero.
///
/// Degenerate inputs: a zero-variance vector sets F4, F14 and the
/// variance-normalized statistics F6, F7, F8, F13 to 0; an all-zero vector
/// additionally sets F5, F15, F16 to 0.
pub fn stat16(v: &[f64]) -> Result<FeatureVector16> {
    let n = v.len();
    if n < 2 {
        return Err(Error::Invalid("stat16 needs at least 2 samples".into()));
    }
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::Invalid(format!("non-finite value at index {i}")));
    }
    let nf = n as f64;
    let mean = v.iter().sum::<f64>() / nf;
    let max_raw = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_abs = v.iter().fold(0.0, |m: f64, &x| m.max(x.abs()));
    let mean_abs = v.iter().map(|x| x.abs()).sum::<f64>() / nf;
    let rms = (v.iter().map(|x| x * x).sum::<f64>() / nf).sqrt();
    let ssd = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    let std = (ssd / (nf - 1.0)).sqrt();
    let m3 = v.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / nf;
    let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let m5 = v.iter().map(|x| (x - mean).powi(5)).sum::<f64>() / nf;
    let m6 = v.iter().map(|x| (x - mean).powi(6)).sum::<f64>() / nf;
    let variance = std * std;

    let zero_variance = ssd == 0.0;
    let all_zero = max_abs == 0.0;

    let skew = if zero_variance {
        0.0
    } else {
        v.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / ((nf - 1.0) * std.powi(3))
    };
    let kurt = if zero_variance {
        0.0
    } else {
        v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / ((nf - 1.0) * std.powi(4))
    };
    let impulse = if all_zero { 0.0 } else { max_abs / mean_abs };
    let crest = if zero_variance { 0.0 } else { max_abs / rms };
    let fm4 = if zero_variance { 0.0 } else { m4 / (variance * variance) };
    let shape = if all_zero { 0.0 } else { rms / mean_abs };
    let entropy = if all_zero {
        0.0
    } else {
        let total_abs = mean_abs * nf;
        -v.iter()
            .map(|x| {
                let p = x.abs() / total_abs;
                if p > 0.0 {
                    p * p.ln()
                } else {
                    0.0
                }
            })
            .sum::<f64>()
    };

    Ok(FeatureVector16 {
        f: [
            mean,
            max_raw,
            rms,
            if zero_variance { 0.0 } else { std },
            impulse,
            crest,
            skew,
            kurt,
            m3,
            m4,
            m5,
            m6,
            fm4,
            if zero_variance { 0.0 } else { variance },
            shape,
            entropy,
        ],
    })
}

/// Fused multi-domain feature vector; length 16 x (2 + levels + 1).
///
/// Value order matches [`fused_feature_names`]: the 16 statistics of the
/// time window, then of the magnitude spectrum, then of each wavelet
/// subband from the deepest approximation down to the level-1 detail.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedFeatureVector {
    pub values: Vec<f64>,
}

/// Name registry of the fused vector for a given decomposition depth:
/// `time.F1 .. time.F16`, `freq.F1 ..`, `dwt.A4.F1 ..`, `dwt.D4 ..`,
/// down to `dwt.D1.F16` for the default 4 levels.
pub fn fused_feature_names(levels: usize) -> Vec<String> {
    let mut blocks = vec!["time".to_string(), "freq".to_string()];
    blocks.push(format!("dwt.A{levels}"));
    for level in (1..=levels).rev() {
        blocks.push(format!("dwt.D{level}"));
    }
    blocks
        .iter()
        .flat_map(|b| STAT_NAMES.iter().map(move |s| format!("{b}.{s}")))
        .collect()
}

/// Extract the fused feature vector of one window: time statistics, spectrum
/// statistics, and statistics of every wavelet subband.
pub fn fuse(window: &[f64], sample_rate: f64, params: &WaveletParams) -> Result<FusedFeatureVector> {
    let mut values = Vec::with_capacity(16 * (3 + params.levels));
    values.extend_from_slice(&stat16(window)?.f);
    let spectrum = fft_magnitude(window, sample_rate)?;
    values.extend_from_slice(&stat16(&spectrum.magnitudes)?.f);
    let subbands = dwt_decompose(window, params)?;
    for band in subbands.in_feature_order() {
        values.extend_from_slice(&stat16(band)?.f);
    }
    Ok(FusedFeatureVector { values })
}
