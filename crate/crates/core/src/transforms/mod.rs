//! Frequency and time-frequency representations: FFT magnitude spectrum and
//! multilevel discrete wavelet transform.

pub mod daubechies;
pub mod dwt;
pub mod fft;

pub use daubechies::{filter_bank, scaling_filter, FilterBank};
pub use dwt::{coeff_len, dwt_decompose, dwt_reconstruct, max_levels, Subbands, WaveletParams};
pub use fft::{dft_complex, fft_magnitude, Spectrum};
