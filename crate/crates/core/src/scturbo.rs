//! SC-QIC codec: outer RSC -> interleaver -> inner RSC, and the iterative
//! SISO decoder.
//!
//! The outer code is trellis-terminated so its coded stream (systematic
//! and parity lanes interleaved per step) exactly fills the permutation;
//! the inner code runs unterminated. The decoder alternates inner SISO
//! (uniform boundary) and outer SISO (terminated boundary): the inner
//! pass emits extrinsics over its input bits, which deinterleave into
//! channel-like observations for the outer coded bits; the outer pass
//! emits extrinsics over its coded bits, which interleave back as the
//! inner priors. Only T values can cross the size-T interleaver, so these
//! are the natural lanes for the exchange.

use crate::convcode::{build_trellis, RateKind, RscSpec, Trellis};
use crate::error::{Error, Result};
use crate::interleave::Permutation;
use crate::siso::{run_siso, Boundary, DecodingAlgo};

/// Codec configuration: constituent codes, permutation, decoder schedule.
#[derive(Clone, Debug)]
pub struct ScqicConfig {
    pub outer: RscSpec,
    pub inner: RscSpec,
    pub interleaver: Permutation,
    pub iterations: usize,
    pub algorithm: DecodingAlgo,
}

impl ScqicConfig {
    /// The headline configuration: (7,5) constituents around a
    /// quadratic-congruence interleaver, six iterations.
    pub fn standard(interleaver: Permutation, algorithm: DecodingAlgo) -> Self {
        ScqicConfig {
            outer: RscSpec::outer_7_5(),
            inner: RscSpec::inner_7_5(),
            interleaver,
            iterations: 6,
            algorithm,
        }
    }
}

/// Decoded frame plus the outer a-posteriori record after each iteration.
#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub info_bits: Vec<u8>,
    /// `iteration_app[it]` holds the outer APP LLRs over the info bits
    /// after iteration `it` (0-based).
    pub iteration_app: Vec<Vec<f64>>,
}

/// Serial concatenation of two RSC codes through a fixed permutation.
#[derive(Clone, Debug)]
pub struct ScqicCodec {
    cfg: ScqicConfig,
    outer_trellis: Trellis,
    inner_trellis: Trellis,
    info_len: usize,
}

impl ScqicCodec {
    pub fn new(cfg: ScqicConfig) -> Result<Self> {
        if cfg.outer.rate_kind() != RateKind::OuterHalfRate {
            return Err(Error::invalid("outer spec must be the rate-1/2 kind"));
        }
        if cfg.inner.rate_kind() != RateKind::InnerTwoThirds {
            return Err(Error::invalid("inner spec must be the rate-2/3 kind"));
        }
        if cfg.iterations == 0 {
            return Err(Error::invalid("need at least one decoder iteration"));
        }
        let t = cfg.interleaver.len();
        if !t.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "interleaver size {t} must be even (two outer coded bits per step)"
            )));
        }
        let steps = t / 2;
        if steps <= cfg.outer.memory() {
            return Err(Error::invalid(format!("interleaver size {t} too small")));
        }
        let info_len = steps - cfg.outer.memory();
        Ok(ScqicCodec {
            outer_trellis: build_trellis(&cfg.outer),
            inner_trellis: build_trellis(&cfg.inner),
            info_len,
            cfg,
        })
    }

    /// Information bits per frame: `T/2 - memory`, so the terminated outer
    /// stream exactly fills the interleaver.
    pub fn info_len(&self) -> usize {
        self.info_len
    }

    /// Interleaver size = outer coded length including termination.
    pub fn interleaver_len(&self) -> usize {
        self.cfg.interleaver.len()
    }

    /// Codeword length, `3T/2` for the rate-2/3 inner realization.
    pub fn coded_len(&self) -> usize {
        self.cfg.interleaver.len() * 3 / 2
    }

    pub fn iterations(&self) -> usize {
        self.cfg.iterations
    }

    pub fn algorithm(&self) -> DecodingAlgo {
        self.cfg.algorithm
    }

    /// outer-encode(+terminate) -> interleave -> inner-encode(unterminated).
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.info_len {
            return Err(Error::invalid(format!(
                "info length {} does not match codec info length {}",
                info.len(),
                self.info_len
            )));
        }
        let (outer_coded, final_state) = self.cfg.outer.encode(info, true)?;
        debug_assert_eq!(final_state, 0);
        debug_assert_eq!(outer_coded.len(), self.cfg.interleaver.len());
        let permuted = self.cfg.interleaver.apply(&outer_coded)?;
        let (coded, _) = self.cfg.inner.encode(&permuted, false)?;
        Ok(coded)
    }

    /// Iterative decoding from channel LLRs over the coded bits.
    pub fn decode(&self, channel_llrs: &[f64]) -> Result<DecodeOutcome> {
        if channel_llrs.len() != self.coded_len() {
            return Err(Error::invalid(format!(
                "channel LLR length {} does not match codeword length {}",
                channel_llrs.len(),
                self.coded_len()
            )));
        }
        let t = self.cfg.interleaver.len();
        let mut inner_priors = vec![0.0f64; t];
        let outer_priors = vec![0.0f64; t / 2];
        let mut iteration_app = Vec::with_capacity(self.cfg.iterations);
        let mut info_bits = vec![0u8; self.info_len];
        for _ in 0..self.cfg.iterations {
            let inner_out = run_siso(
                &self.inner_trellis,
                channel_llrs,
                &inner_priors,
                Boundary::Uniform,
                self.cfg.algorithm,
            )?;
            let outer_chan = self.cfg.interleaver.invert(&inner_out.extrinsic_inputs)?;
            let outer_out = run_siso(
                &self.outer_trellis,
                &outer_chan,
                &outer_priors,
                Boundary::Terminated,
                self.cfg.algorithm,
            )?;
            inner_priors = self.cfg.interleaver.apply(&outer_out.extrinsic_coded)?;
            let app = &outer_out.app_inputs[..self.info_len];
            for (bit, &llr) in info_bits.iter_mut().zip(app) {
                *bit = if llr < 0.0 { 1 } else { 0 };
            }
            iteration_app.push(app.to_vec());
        }
        Ok(DecodeOutcome {
            info_bits,
            iteration_app,
        })
    }
}
