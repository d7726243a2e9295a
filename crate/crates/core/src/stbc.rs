//! Orthogonal space-time block codes: Alamouti G2 and the rate-3/4
//! three-antenna G3 design, with the closed-form receive combining that
//! decouples the symbols.
//!
//! `code_matrix` produces the verbatim transmission matrices;
//! `stbc_encode` additionally scales by `1/sqrt(n_tx)` so the total
//! radiated energy per channel use stays at the constellation average
//! regardless of antenna count. `stbc_combine` evaluates the bracketed
//! linear-combining terms of the decision metrics on the received slots:
//! fed with an unscaled noiseless transmission it returns exactly
//! `s_k * sum|alpha|^2`, and the combined noise variance is
//! `sum|alpha|^2` times the per-antenna total noise variance. The
//! simulation harness undoes the transmit power scale after combining.

use crate::channel::ChannelGains;
use crate::error::{Error, Result};
use crate::modem::Constellation;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StbcScheme {
    /// Alamouti: 2 tx antennas, 2 symbols over 2 slots, rate 1.
    G2,
    /// Three tx antennas, 3 symbols over 4 slots, rate 3/4.
    G3,
}

impl StbcScheme {
    pub fn n_tx(self) -> usize {
        match self {
            StbcScheme::G2 => 2,
            StbcScheme::G3 => 3,
        }
    }

    pub fn slots_per_block(self) -> usize {
        match self {
            StbcScheme::G2 => 2,
            StbcScheme::G3 => 4,
        }
    }

    pub fn symbols_per_block(self) -> usize {
        match self {
            StbcScheme::G2 => 2,
            StbcScheme::G3 => 3,
        }
    }

    pub fn rate(self) -> f64 {
        self.symbols_per_block() as f64 / self.slots_per_block() as f64
    }

    /// Transmit amplitude scale enforcing unit total radiated energy.
    pub fn power_scale(self) -> f64 {
        1.0 / (self.n_tx() as f64).sqrt()
    }
}

/// One decoupled symbol estimate: `estimate ~ equiv_gain * s + noise`,
/// `equiv_gain = sum_{i,j} |alpha_{i,j}|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CombinedSymbol {
    pub estimate: Complex64,
    pub equiv_gain: f64,
}

/// The transmission matrix (slots x n_tx), unscaled.
pub fn code_matrix(scheme: StbcScheme, symbols: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    if symbols.len() != scheme.symbols_per_block() {
        return Err(Error::invalid(format!(
            "expected {} symbols per block, got {}",
            scheme.symbols_per_block(),
            symbols.len()
        )));
    }
    let m = match scheme {
        StbcScheme::G2 => {
            let (x1, x2) = (symbols[0], symbols[1]);
            vec![vec![x1, x2], vec![-x2.conj(), x1.conj()]]
        }
        StbcScheme::G3 => {
            let (x1, x2, x3) = (symbols[0], symbols[1], symbols[2]);
            let r2 = 2.0_f64.sqrt();
            vec![
                vec![x1, x2, x3 / r2],
                vec![-x2.conj(), x1.conj(), x3 / r2],
                vec![
                    x3.conj() / r2,
                    x3.conj() / r2,
                    (-x1 - x1.conj() + x2 - x2.conj()) / 2.0,
                ],
                vec![
                    x3.conj() / r2,
                    -x3.conj() / r2,
                    (x2 + x2.conj() + x1 - x1.conj()) / 2.0,
                ],
            ]
        }
    };
    Ok(m)
}

/// The power-normalized transmit matrix for one block.
pub fn stbc_encode(scheme: StbcScheme, symbols: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let scale = scheme.power_scale();
    let mut m = code_matrix(scheme, symbols)?;
    for row in &mut m {
        for e in row {
            *e *= scale;
        }
    }
    Ok(m)
}

/// Linear receive combining over `received[slot][rx]` for one block.
/// The channel must be constant over the block.
pub fn stbc_combine(
    scheme: StbcScheme,
    received: &[Vec<Complex64>],
    channel: &ChannelGains,
) -> Result<Vec<CombinedSymbol>> {
    if received.len() != scheme.slots_per_block() {
        return Err(Error::invalid(format!(
            "expected {} received slots, got {}",
            scheme.slots_per_block(),
            received.len()
        )));
    }
    if channel.n_tx() != scheme.n_tx() {
        return Err(Error::invalid("channel tx dimension does not match scheme"));
    }
    let m_rx = channel.m_rx();
    if m_rx == 0 || received.iter().any(|slot| slot.len() != m_rx) {
        return Err(Error::invalid("received rx dimension does not match channel"));
    }
    let h_eq = channel.sum_abs2();
    let estimates = match scheme {
        StbcScheme::G2 => {
            let mut s1 = Complex64::new(0.0, 0.0);
            let mut s2 = Complex64::new(0.0, 0.0);
            for j in 0..m_rx {
                let (a, b) = (channel.gain(0, j), channel.gain(1, j));
                let (r1, r2) = (received[0][j], received[1][j]);
                s1 += r1 * a.conj() + r2.conj() * b;
                s2 += r1 * b.conj() - r2.conj() * a;
            }
            vec![s1, s2]
        }
        StbcScheme::G3 => {
            let r2f = 2.0_f64.sqrt();
            let mut s1 = Complex64::new(0.0, 0.0);
            let mut s2 = Complex64::new(0.0, 0.0);
            let mut s3 = Complex64::new(0.0, 0.0);
            for j in 0..m_rx {
                let (a, b, c) = (channel.gain(0, j), channel.gain(1, j), channel.gain(2, j));
                let (r1, r2, r3, r4) = (
                    received[0][j],
                    received[1][j],
                    received[2][j],
                    received[3][j],
                );
                s1 += r1 * a.conj() + r2.conj() * b + (r4 - r3) * c.conj() / 2.0
                    - (r3 + r4).conj() * c / 2.0;
                s2 += r1 * b.conj() - r2.conj() * a + (r4 + r3) * c.conj() / 2.0
                    + (r4 - r3).conj() * c / 2.0;
                s3 += (r1 + r2) * c.conj() / r2f
                    + r3.conj() * (a + b) / r2f
                    + r4.conj() * (a - b) / r2f;
            }
            vec![s1, s2, s3]
        }
    };
    Ok(estimates
        .into_iter()
        .map(|estimate| CombinedSymbol {
            estimate,
            equiv_gain: h_eq,
        })
        .collect())
}

/// Hard ML detection of one combined symbol: argmin over the
/// constellation of `|estimate - equiv_gain * x|^2`, ties broken toward
/// the lowest label. A null channel (`equiv_gain = 0`) is flagged as an
/// erasure.
pub fn ml_detect(combined: &CombinedSymbol, constellation: &Constellation) -> Result<usize> {
    if combined.equiv_gain.is_nan() || combined.equiv_gain <= 0.0 {
        return Err(Error::invalid("channel null: zero equivalent gain"));
    }
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (label, &p) in constellation.points().iter().enumerate() {
        let d = (combined.estimate - combined.equiv_gain * p).norm_sqr();
        if d < best_d {
            best_d = d;
            best = label;
        }
    }
    Ok(best)
}
