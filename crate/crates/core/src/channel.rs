//! Rayleigh fading realizations and AWGN injection.
//!
//! Path gains are i.i.d. circularly-symmetric complex Gaussian with unit
//! variance (Rayleigh envelope). Quasi-static realizations hold one gain
//! matrix for a whole frame; the Bell-Doppler mode draws a per-slot gain
//! series for every (tx, rx) path by frequency-domain shaping of white
//! Gaussian noise with `S(f) = 1 / (1 + 9 (f/f_d)^2)` on `|f| <= f_d`,
//! renormalized to unit average power per realization.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

/// Shape constant of the Bell spectrum: `S(f_d) = 0.1 * S(0)` fixes A = 9.
pub const BELL_SHAPE_A: f64 = 9.0;

/// Path-gain matrix for one coherence interval, `gains[i * m_rx + j]`
/// holding the gain from transmit antenna `i` to receive antenna `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelGains {
    n_tx: usize,
    m_rx: usize,
    gains: Vec<Complex64>,
}

impl ChannelGains {
    pub fn new(n_tx: usize, m_rx: usize, gains: Vec<Complex64>) -> Result<Self> {
        if gains.len() != n_tx * m_rx {
            return Err(Error::invalid("gain matrix dimension mismatch"));
        }
        Ok(ChannelGains { n_tx, m_rx, gains })
    }

    /// All-ones gains: the pure-AWGN (no fading) channel.
    pub fn unity(n_tx: usize, m_rx: usize) -> Self {
        ChannelGains {
            n_tx,
            m_rx,
            gains: vec![Complex64::new(1.0, 0.0); n_tx * m_rx],
        }
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn m_rx(&self) -> usize {
        self.m_rx
    }

    pub fn gain(&self, tx: usize, rx: usize) -> Complex64 {
        self.gains[tx * self.m_rx + rx]
    }

    /// `sum_{i,j} |alpha_{i,j}|^2`.
    pub fn sum_abs2(&self) -> f64 {
        self.gains.iter().map(|g| g.norm_sqr()).sum()
    }
}

/// One frame's channel: either frame-constant or a per-slot gain series.
#[derive(Clone, Debug)]
pub enum ChannelRealization {
    QuasiStatic(ChannelGains),
    TimeVarying { per_slot: Vec<ChannelGains> },
}

impl ChannelRealization {
    pub fn at_slot(&self, slot: usize) -> &ChannelGains {
        match self {
            ChannelRealization::QuasiStatic(g) => g,
            ChannelRealization::TimeVarying { per_slot } => &per_slot[slot.min(per_slot.len() - 1)],
        }
    }
}

/// Noise level in terms of the symbol-energy-to-noise ratio: the complex
/// noise has variance `1 / (2 SNR)` per dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    snr_linear: f64,
}

impl NoiseSpec {
    pub fn from_snr_linear(snr_linear: f64) -> Result<Self> {
        if snr_linear.is_nan() || snr_linear <= 0.0 {
            return Err(Error::invalid(format!("SNR {snr_linear} must be positive")));
        }
        Ok(NoiseSpec { snr_linear })
    }

    /// Infinite-SNR flag: `add_awgn` becomes the identity.
    pub fn noiseless() -> Self {
        NoiseSpec {
            snr_linear: f64::INFINITY,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.snr_linear.is_infinite()
    }

    pub fn snr_linear(&self) -> f64 {
        self.snr_linear
    }

    pub fn variance_per_dim(&self) -> f64 {
        if self.is_noiseless() {
            0.0
        } else {
            1.0 / (2.0 * self.snr_linear)
        }
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma_per_dim: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sigma_per_dim, im * sigma_per_dim)
}

/// Draws `n_tx * m_rx` i.i.d. unit-variance complex Gaussian path gains,
/// constant over the frame.
pub fn draw_quasi_static<R: Rng + ?Sized>(
    n_tx: usize,
    m_rx: usize,
    rng: &mut R,
) -> ChannelRealization {
    let sigma = (0.5f64).sqrt();
    let gains = (0..n_tx * m_rx).map(|_| complex_gaussian(rng, sigma)).collect();
    ChannelRealization::QuasiStatic(ChannelGains { n_tx, m_rx, gains })
}

/// Draws a time-varying realization whose per-path processes follow the
/// Bell Doppler spectrum, sampled once per slot at `symbol_rate_hz`.
pub fn draw_bell_doppler<R: Rng + ?Sized>(
    n_tx: usize,
    m_rx: usize,
    doppler_hz: f64,
    symbol_rate_hz: f64,
    len: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if doppler_hz.is_nan() || doppler_hz <= 0.0 {
        return Err(Error::invalid("Doppler spread must be positive"));
    }
    if doppler_hz >= symbol_rate_hz / 2.0 {
        return Err(Error::invalid(format!(
            "Doppler spread {doppler_hz} Hz not resolvable at symbol rate {symbol_rate_hz} Hz"
        )));
    }
    if len == 0 {
        return Err(Error::invalid("need at least one slot"));
    }

    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(len);
    let mut paths = Vec::with_capacity(n_tx * m_rx);
    for _ in 0..n_tx * m_rx {
        let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
        for (k, bin) in spectrum.iter_mut().enumerate() {
            // FFT bin k maps to frequency k/len * fs, folded to [-fs/2, fs/2).
            let f = if k <= len / 2 {
                k as f64 / len as f64 * symbol_rate_hz
            } else {
                (k as f64 / len as f64 - 1.0) * symbol_rate_hz
            };
            if f.abs() <= doppler_hz {
                let s = 1.0 / (1.0 + BELL_SHAPE_A * (f / doppler_hz).powi(2));
                *bin = complex_gaussian(rng, 1.0) * s.sqrt();
            }
        }
        ifft.process(&mut spectrum);
        // Renormalize the realization to unit average power.
        let power: f64 = spectrum.iter().map(|x| x.norm_sqr()).sum::<f64>() / len as f64;
        let scale = if power > 0.0 { 1.0 / power.sqrt() } else { 0.0 };
        for x in &mut spectrum {
            *x *= scale;
        }
        paths.push(spectrum);
    }

    let per_slot = (0..len)
        .map(|t| ChannelGains {
            n_tx,
            m_rx,
            gains: paths.iter().map(|p| p[t]).collect(),
        })
        .collect();
    Ok(ChannelRealization::TimeVarying { per_slot })
}

/// Adds independent complex Gaussian noise at `1/(2 SNR)` per dimension.
pub fn add_awgn<R: Rng + ?Sized>(
    symbols: &[Complex64],
    noise: &NoiseSpec,
    rng: &mut R,
) -> Vec<Complex64> {
    if noise.is_noiseless() {
        return symbols.to_vec();
    }
    let sigma = noise.variance_per_dim().sqrt();
    symbols.iter().map(|&s| s + complex_gaussian(rng, sigma)).collect()
}
