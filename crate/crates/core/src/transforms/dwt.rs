//! Multilevel discrete wavelet transform (pyramid algorithm) with
//! half-sample symmetric boundary extension, and its inverse.

use crate::error::{Error, Result};
use crate::transforms::daubechies::{filter_bank, FilterBank};

/// Wavelet configuration: family, level count, and the filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletParams {
    /// Family identifier, `db1` through `db20`.
    pub family: String,
    /// Decomposition depth, at least 1.
    pub levels: usize,
    pub bank: FilterBank,
}

impl WaveletParams {
    /// Parse a family name like `db10` and build its filter bank.
    pub fn new(family: &str, levels: usize) -> Result<Self> {
        let order: usize = family
            .strip_prefix("db")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config(format!("unknown wavelet family {family:?} (expected db1..db20)")))?;
        if levels == 0 {
            return Err(Error::Config("wavelet levels must be at least 1".into()));
        }
        Ok(Self { family: family.to_string(), levels, bank: filter_bank(order)? })
    }

    pub fn filter_len(&self) -> usize {
        self.bank.len()
    }
}

/// Subband coefficients of a multilevel decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands {
    /// Approximation at the deepest level L.
    pub approximation: Vec<f64>,
    /// Details ordered deepest first: `details[0]` is level L, the last
    /// entry is level 1.
    pub details: Vec<Vec<f64>>,
    /// Input length at each analysis step, outermost first; needed to trim
    /// the inverse transform back to the original lengths.
    pub input_lengths: Vec<usize>,
}

impl Subbands {
    /// Subband vectors in feature order: approximation, then details from
    /// the deepest level down to level 1.
    pub fn in_feature_order(&self) -> Vec<&[f64]> {
        let mut v: Vec<&[f64]> = vec![&self.approximation];
        v.extend(self.details.iter().map(Vec::as_slice));
        v
    }
}

/// Coefficient count of one analysis step on `n` samples with filter
/// length `l` under symmetric extension.
pub fn coeff_len(n: usize, l: usize) -> usize {
    (n + l - 1) / 2
}

/// Deepest decomposition supported for `n` samples and filter length `l`:
/// `floor(log2(n / l))`.
pub fn max_levels(n: usize, l: usize) -> usize {
    let mut v = 0;
    while l.checked_shl(v as u32 + 1).is_some_and(|need| need <= n) {
        v += 1;
    }
    v
}

/// Half-sample symmetric extension by `pad` samples on both ends:
/// `x[pad-1] .. x[0] | x | x[n-1] .. x[n-pad]`. Requires `pad <= n`.
fn extend_symmetric(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    debug_assert!(pad <= n);
    let mut out = Vec::with_capacity(n + 2 * pad);
    out.extend(x[..pad].iter().rev());
    out.extend_from_slice(x);
    out.extend(x[n - pad..].iter().rev());
    out
}

/// One analysis step: extend, convolve (valid), keep odd-indexed outputs.
fn analyze(x: &[f64], filter: &[f64]) -> Vec<f64> {
    let l = filter.len();
    let ext = extend_symmetric(x, l - 1);
    let full = x.len() + l - 1;
    let mut out = Vec::with_capacity(coeff_len(x.len(), l));
    let mut k = 1;
    while k < full {
        let mut acc = 0.0;
        for (j, &f) in filter.iter().enumerate() {
            acc += f * ext[k + l - 1 - j];
        }
        out.push(acc);
        k += 2;
    }
    out
}

/// One synthesis step: upsample both subbands by 2, convolve with the
/// reconstruction pair, sum, and trim to the original length.
fn synthesize(approx: &[f64], detail: &[f64], bank: &FilterBank, target: usize) -> Result<Vec<f64>> {
    let m = approx.len();
    if detail.len() != m {
        return Err(Error::Invalid(format!(
            "subband length mismatch: approximation {m}, detail {}",
            detail.len()
        )));
    }
    let l = bank.len();
    let mut s = vec![0.0; 2 * m + l - 1];
    for (i, (&a, &d)) in approx.iter().zip(detail).enumerate() {
        for j in 0..l {
            s[2 * i + j] += a * bank.rec_lo[j] + d * bank.rec_hi[j];
        }
    }
    let skip = l - 2;
    if skip + target > s.len() {
        return Err(Error::Invalid(format!(
            "subbands too short to reconstruct {target} samples"
        )));
    }
    Ok(s[skip..skip + target].to_vec())
}

/// Multilevel decomposition: recursively split the approximation with the
/// analysis pair, halving length (plus boundary growth) per level.
pub fn dwt_decompose(samples: &[f64], params: &WaveletParams) -> Result<Subbands> {
    if samples.len() < 2 {
        return Err(Error::Invalid("transform needs at least 2 samples".into()));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::Invalid(format!("non-finite sample at index {i}")));
    }
    let supported = max_levels(samples.len(), params.filter_len());
    if params.levels > supported {
        return Err(Error::Invalid(format!(
            "{} samples support at most {supported} {} levels, requested {}",
            samples.len(),
            params.family,
            params.levels
        )));
    }
    let mut approx = samples.to_vec();
    let mut details = Vec::with_capacity(params.levels);
    let mut input_lengths = Vec::with_capacity(params.levels);
    for _ in 0..params.levels {
        input_lengths.push(approx.len());
        details.push(analyze(&approx, &params.bank.dec_hi));
        approx = analyze(&approx, &params.bank.dec_lo);
    }
    details.reverse();
    Ok(Subbands { approximation: approx, details, input_lengths })
}

/// Inverse pyramid: rebuild the signal from subbands produced by
/// [`dwt_decompose`] with the same parameters.
pub fn dwt_reconstruct(subbands: &Subbands, params: &WaveletParams) -> Result<Vec<f64>> {
    let levels = subbands.details.len();
    if levels != params.levels {
        return Err(Error::Invalid(format!(
            "subbands hold {levels} levels, params request {}",
            params.levels
        )));
    }
    if subbands.input_lengths.len() != levels {
        return Err(Error::Invalid(format!(
            "{} recorded input lengths for {levels} levels",
            subbands.input_lengths.len()
        )));
    }
    let l = params.filter_len();
    let mut approx = subbands.approximation.clone();
    for (i, detail) in subbands.details.iter().enumerate() {
        let target = subbands.input_lengths[levels - 1 - i];
        if approx.len() != coeff_len(target, l) {
            return Err(Error::Invalid(format!(
                "approximation length {} inconsistent with recorded input length {target}",
                approx.len()
            )));
        }
        approx = synthesize(&approx, detail, &params.bank, target)?;
    }
    Ok(approx)
}
