//! Signal ingestion: delimited-text loading, windowing, and a seeded
//! synthetic bearing-vibration generator for desk-scale experiments.

use crate::error::{Error, Result};
use crate::rng::stream;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Raw vibration record with its sampling rate in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Invalid("signal is empty".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("non-finite sample at index {i}")));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::Invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        Ok(Self { samples, sample_rate })
    }
}

/// Fixed-length cut of a signal, optionally labeled with a class id.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalWindow {
    pub samples: Vec<f64>,
    pub label: Option<u32>,
    /// Sample index of the window start within its source record.
    pub source_offset: usize,
}

/// Machine condition simulated for one synthetic class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    Healthy,
    InnerRace,
    OuterRace,
}

/// Shaft-speed trajectory over the generated record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedProfile {
    Constant,
    /// Impulse rate chirps linearly down to half its nominal value.
    Decreasing,
}

/// Parameters of one synthetic class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    /// Class id (>= 1), distinct across the dataset.
    pub label: u32,
    pub kind: FaultKind,
    /// Defect impulse repetition rate in Hz (BPFO/BPFI stand-in).
    pub impulse_rate: f64,
    /// Structural resonance excited by each impulse, Hz.
    pub resonance: f64,
    /// Exponential decay of the resonance ring-down, 1/s.
    pub decay: f64,
    /// Signal-to-noise ratio of the additive Gaussian noise, dB.
    pub snr_db: f64,
    #[serde(default = "default_speed")]
    pub speed_profile: SpeedProfile,
}

fn default_speed() -> SpeedProfile {
    SpeedProfile::Constant
}

/// Full synthetic dataset description: one record per class, cut into
/// equal contiguous windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub classes: Vec<ClassSpec>,
    /// Record length per class, seconds.
    pub duration_s: f64,
    pub sample_rate: f64,
    pub windows_per_class: usize,
}

impl SynthSpec {
    /// Window length implied by the settings: total samples split evenly.
    pub fn window_len(&self) -> usize {
        (self.duration_s * self.sample_rate / self.windows_per_class as f64).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.classes.is_empty() {
            return Err(Error::Config("synth spec needs at least one class".into()));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::Config("synth sample_rate must be positive".into()));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::Config("synth duration_s must be positive".into()));
        }
        if self.windows_per_class == 0 {
            return Err(Error::Config("windows_per_class must be at least 1".into()));
        }
        if self.window_len() < 2 {
            return Err(Error::Config("windows would be shorter than 2 samples".into()));
        }
        let nyquist = self.sample_rate / 2.0;
        for c in &self.classes {
            if c.label == 0 {
                return Err(Error::Config("class ids start at 1".into()));
            }
            if self.classes.iter().filter(|d| d.label == c.label).count() > 1 {
                return Err(Error::Config(format!("duplicate class label {}", c.label)));
            }
            if !(c.impulse_rate.is_finite() && c.impulse_rate > 0.0 && c.impulse_rate < nyquist) {
                return Err(Error::Config(format!(
                    "class {}: impulse_rate must lie in (0, {nyquist})",
                    c.label
                )));
            }
            if !(c.resonance.is_finite() && c.resonance > 0.0 && c.resonance < nyquist) {
                return Err(Error::Config(format!(
                    "class {}: resonance must lie in (0, {nyquist})",
                    c.label
                )));
            }
            if !(c.decay.is_finite() && c.decay > 0.0) {
                return Err(Error::Config(format!("class {}: decay must be positive", c.label)));
            }
            if !c.snr_db.is_finite() {
                return Err(Error::Config(format!("class {}: snr_db must be finite", c.label)));
            }
        }
        Ok(())
    }
}

/// Load one channel of a delimited text file (comma or whitespace separated,
/// one sample per row, optional single header line).
///
/// The sampling rate is supplied by the caller; dataset documentation is the
/// authority on it, not the file contents.
pub fn load_signal(path: &Path, channel_index: usize, sample_rate: f64) -> Result<Signal> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut samples = Vec::new();
    let mut first_data_line = true;
    for (lineno, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if cells.is_empty() {
            continue;
        }
        // One optional header line: skipped when any cell is non-numeric.
        if first_data_line && cells.iter().any(|c| c.parse::<f64>().is_err()) {
            first_data_line = false;
            continue;
        }
        first_data_line = false;
        let cell = cells.get(channel_index).ok_or_else(|| {
            Error::Parse(format!(
                "{}: row {}: no column {} ({} columns present)",
                path.display(),
                lineno + 1,
                channel_index + 1,
                cells.len()
            ))
        })?;
        samples.push(cell.parse::<f64>().map_err(|_| {
            Error::Parse(format!(
                "{}: row {}, column {}: {cell:?} is not numeric",
                path.display(),
                lineno + 1,
                channel_index + 1
            ))
        })?);
    }
    if samples.is_empty() {
        return Err(Error::Parse(format!(
            "{}: column {} is empty",
            path.display(),
            channel_index + 1
        )));
    }
    Signal::new(samples, sample_rate)
}

/// Cut a signal into fixed-length windows starting at offsets 0, hop, 2 hop,
/// discarding any trailing partial window.
pub fn segment(signal: &Signal, window_len: usize, hop: usize) -> Result<Vec<SignalWindow>> {
    if window_len < 2 {
        return Err(Error::Invalid("window_len must be at least 2".into()));
    }
    if window_len > signal.samples.len() {
        return Err(Error::Invalid(format!(
            "window_len {} exceeds signal length {}",
            window_len,
            signal.samples.len()
        )));
    }
    if hop == 0 {
        return Err(Error::Invalid("hop must be at least 1".into()));
    }
    let mut windows = Vec::new();
    let mut offset = 0;
    while offset + window_len <= signal.samples.len() {
        windows.push(SignalWindow {
            samples: signal.samples[offset..offset + window_len].to_vec(),
            label: None,
            source_offset: offset,
        });
        offset += hop;
    }
    Ok(windows)
}

/// Generate the full record for one synthetic class.
///
/// Healthy classes are unit white Gaussian noise. Faulted classes are an
/// impulse train at `impulse_rate` (chirped down to half rate under the
/// decreasing speed profile) convolved with an exponentially decaying
/// resonance sinusoid; inner-race impulses are amplitude modulated at the
/// shaft rate (taken as `impulse_rate / 5`). Additive Gaussian noise is
/// scaled to `snr_db` relative to the fault signature power.
pub fn synth_class_record(spec: &SynthSpec, class: &ClassSpec, seed: u64) -> Result<Signal> {
    spec.validate()?;
    let n = spec.window_len() * spec.windows_per_class;
    let fs = spec.sample_rate;
    let dt = 1.0 / fs;
    let mut rng = stream(seed, "synth.class", u64::from(class.label));

    if class.kind == FaultKind::Healthy {
        let samples = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        return Signal::new(samples, fs);
    }

    // Ring-down kernel, truncated once the envelope falls below 1e-4.
    let kernel_len = ((1e4f64.ln() / class.decay) * fs).ceil() as usize;
    let kernel: Vec<f64> = (0..kernel_len.max(2).min(n))
        .map(|t| {
            let time = t as f64 * dt;
            (-class.decay * time).exp() * (2.0 * std::f64::consts::PI * class.resonance * time).sin()
        })
        .collect();

    // Impulse instants by phase accumulation of the instantaneous rate.
    let total_s = n as f64 * dt;
    let shaft_rate = class.impulse_rate / 5.0;
    let mut x = vec![0.0; n];
    let mut phase = 1.0;
    for s in 0..n {
        let t = s as f64 * dt;
        let rate = match class.speed_profile {
            SpeedProfile::Constant => class.impulse_rate,
            SpeedProfile::Decreasing => class.impulse_rate * (1.0 - 0.5 * t / total_s),
        };
        phase += rate * dt;
        if phase >= 1.0 {
            phase -= 1.0;
            let amp = match class.kind {
                FaultKind::InnerRace => {
                    1.0 + 0.5 * (2.0 * std::f64::consts::PI * shaft_rate * t).sin()
                }
                _ => 1.0,
            };
            for (k, &kv) in kernel.iter().enumerate() {
                if s + k >= n {
                    break;
                }
                x[s + k] += amp * kv;
            }
        }
    }

    let power = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let sigma = (power / 10f64.powf(class.snr_db / 10.0)).sqrt();
    for v in &mut x {
        *v += sigma * rng.sample::<f64, _>(StandardNormal);
    }
    Signal::new(x, fs)
}

/// Generate the labeled window set for a whole spec.
///
/// Output is deterministic in (spec, seed); each class draws from its own
/// derived stream, so adding a class never perturbs the others.
pub fn synth_dataset(spec: &SynthSpec, seed: u64) -> Result<Vec<SignalWindow>> {
    spec.validate()?;
    let window_len = spec.window_len();
    let mut out = Vec::with_capacity(spec.classes.len() * spec.windows_per_class);
    for class in &spec.classes {
        let record = synth_class_record(spec, class, seed)?;
        let mut windows = segment(&record, window_len, window_len)?;
        windows.truncate(spec.windows_per_class);
        for w in &mut windows {
            w.label = Some(class.label);
        }
        out.extend(windows);
    }
    Ok(out)
}
