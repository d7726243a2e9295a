//! Soft-input/soft-output decoding of one constituent trellis.
//!
//! `bcjr` is the exact forward-backward a-posteriori decoder; `max_log_map`
//! replaces every log-sum-exp reduction with a max. Both work in the
//! natural-log domain with the sign convention LLR > 0 favoring bit 0.
//!
//! Branch metrics use the half-LLR form `sum 0.5 * L * (1 - 2b)`; the
//! per-step constant this drops relative to exact log-probabilities
//! cancels in every output LLR. Forward/backward metrics are renormalized
//! each step by subtracting their maximum, and all inputs are clamped to
//! +/-60 beforehand so the exponential paths stay finite.

use crate::convcode::Trellis;
use crate::error::{Error, Result};

/// Input clamp magnitude, applied to channel and a-priori LLRs.
pub const LLR_CLAMP: f64 = 60.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodingAlgo {
    /// Exact BCJR (log-sum-exp reductions).
    Map,
    /// Max-Log-MAP approximation.
    MaxLogMap,
}

/// Backward-recursion boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Trellis is known to end in state 0.
    Terminated,
    /// Final state unknown; all states equally likely.
    Uniform,
}

/// Posterior and extrinsic LLRs from one SISO pass.
///
/// `app_inputs`/`extrinsic_inputs` run over the input-bit lanes
/// (`steps * inputs_per_step` values); `app_coded`/`extrinsic_coded` over
/// the coded-bit lanes. Extrinsics subtract the corresponding (clamped)
/// direct term: the a-priori LLR for input lanes, the channel LLR for
/// coded lanes.
#[derive(Clone, Debug)]
pub struct SisoOutput {
    pub app_inputs: Vec<f64>,
    pub app_coded: Vec<f64>,
    pub extrinsic_inputs: Vec<f64>,
    pub extrinsic_coded: Vec<f64>,
}

#[inline]
fn maxstar(a: f64, b: f64, algo: DecodingAlgo) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    match algo {
        DecodingAlgo::MaxLogMap => a.max(b),
        DecodingAlgo::Map => a.max(b) + (-(a - b).abs()).exp().ln_1p(),
    }
}

/// Exact a-posteriori decoding of one trellis.
pub fn bcjr(
    trellis: &Trellis,
    channel_llrs: &[f64],
    apriori_llrs: &[f64],
    boundary: Boundary,
) -> Result<SisoOutput> {
    run_siso(trellis, channel_llrs, apriori_llrs, boundary, DecodingAlgo::Map)
}

/// As [`bcjr`] with all log-sum-exp reductions replaced by max.
pub fn max_log_map(
    trellis: &Trellis,
    channel_llrs: &[f64],
    apriori_llrs: &[f64],
    boundary: Boundary,
) -> Result<SisoOutput> {
    run_siso(trellis, channel_llrs, apriori_llrs, boundary, DecodingAlgo::MaxLogMap)
}

pub fn run_siso(
    trellis: &Trellis,
    channel_llrs: &[f64],
    apriori_llrs: &[f64],
    boundary: Boundary,
    algo: DecodingAlgo,
) -> Result<SisoOutput> {
    let ins = trellis.inputs_per_step();
    let outs = trellis.outputs_per_step();
    if !channel_llrs.len().is_multiple_of(outs) {
        return Err(Error::invalid(format!(
            "channel LLR length {} not divisible by {} coded bits per step",
            channel_llrs.len(),
            outs
        )));
    }
    let steps = channel_llrs.len() / outs;
    if apriori_llrs.len() != steps * ins {
        return Err(Error::invalid(format!(
            "a-priori LLR length {} does not match {} input bits",
            apriori_llrs.len(),
            steps * ins
        )));
    }
    if channel_llrs.iter().chain(apriori_llrs).any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite LLR input"));
    }

    let clamp = |x: &f64| x.clamp(-LLR_CLAMP, LLR_CLAMP);
    let chan: Vec<f64> = channel_llrs.iter().map(clamp).collect();
    let prior: Vec<f64> = apriori_llrs.iter().map(clamp).collect();

    let num_states = trellis.num_states();
    let edges = trellis.transitions();

    // Per-edge half-LLR signs: +0.5 for bit 0, -0.5 for bit 1.
    let in_sign: Vec<[f64; 2]> = edges
        .iter()
        .map(|e| {
            let mut s = [0.0; 2];
            for (i, slot) in s.iter_mut().enumerate().take(ins) {
                *slot = if (e.input >> i) & 1 == 0 { 0.5 } else { -0.5 };
            }
            s
        })
        .collect();
    let out_sign: Vec<[f64; 3]> = edges
        .iter()
        .map(|e| {
            let mut s = [0.0; 3];
            for (j, slot) in s.iter_mut().enumerate().take(outs) {
                *slot = if (e.output >> j) & 1 == 0 { 0.5 } else { -0.5 };
            }
            s
        })
        .collect();

    let gamma = |k: usize, t: usize| -> f64 {
        let mut g = 0.0;
        for j in 0..outs {
            g += out_sign[t][j] * chan[k * outs + j];
        }
        for i in 0..ins {
            g += in_sign[t][i] * prior[k * ins + i];
        }
        g
    };

    // Forward recursion from state 0.
    let mut alpha = vec![f64::NEG_INFINITY; (steps + 1) * num_states];
    alpha[0] = 0.0;
    for k in 0..steps {
        let (cur, next) = alpha[k * num_states..].split_at_mut(num_states);
        let next = &mut next[..num_states];
        next.fill(f64::NEG_INFINITY);
        for (t, e) in edges.iter().enumerate() {
            if cur[e.from] == f64::NEG_INFINITY {
                continue;
            }
            next[e.to] = maxstar(next[e.to], cur[e.from] + gamma(k, t), algo);
        }
        let m = next.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        next.iter_mut().for_each(|x| *x -= m);
    }

    // Backward recursion.
    let mut beta = vec![f64::NEG_INFINITY; (steps + 1) * num_states];
    match boundary {
        Boundary::Terminated => beta[steps * num_states] = 0.0,
        Boundary::Uniform => beta[steps * num_states..].fill(0.0),
    }
    for k in (0..steps).rev() {
        let (cur, next) = beta[k * num_states..].split_at_mut(num_states);
        let cur = &mut cur[..num_states];
        cur.fill(f64::NEG_INFINITY);
        for (t, e) in edges.iter().enumerate() {
            if next[e.to] == f64::NEG_INFINITY {
                continue;
            }
            cur[e.from] = maxstar(cur[e.from], next[e.to] + gamma(k, t), algo);
        }
        let m = cur.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        cur.iter_mut().for_each(|x| *x -= m);
    }

    // Bitwise posteriors: log-sum (or max) of alpha + gamma + beta over
    // the edges carrying each bit value.
    let mut app_inputs = vec![0.0; steps * ins];
    let mut app_coded = vec![0.0; steps * outs];
    let mut num_in = [f64::NEG_INFINITY; 2];
    let mut num_out = [f64::NEG_INFINITY; 3];
    let mut den_in = [f64::NEG_INFINITY; 2];
    let mut den_out = [f64::NEG_INFINITY; 3];
    for k in 0..steps {
        num_in.fill(f64::NEG_INFINITY);
        den_in.fill(f64::NEG_INFINITY);
        num_out.fill(f64::NEG_INFINITY);
        den_out.fill(f64::NEG_INFINITY);
        for (t, e) in edges.iter().enumerate() {
            let a = alpha[k * num_states + e.from];
            let b = beta[(k + 1) * num_states + e.to];
            if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
                continue;
            }
            let metric = a + gamma(k, t) + b;
            for i in 0..ins {
                if (e.input >> i) & 1 == 0 {
                    num_in[i] = maxstar(num_in[i], metric, algo);
                } else {
                    den_in[i] = maxstar(den_in[i], metric, algo);
                }
            }
            for j in 0..outs {
                if (e.output >> j) & 1 == 0 {
                    num_out[j] = maxstar(num_out[j], metric, algo);
                } else {
                    den_out[j] = maxstar(den_out[j], metric, algo);
                }
            }
        }
        for i in 0..ins {
            app_inputs[k * ins + i] = num_in[i] - den_in[i];
        }
        for j in 0..outs {
            app_coded[k * outs + j] = num_out[j] - den_out[j];
        }
    }

    let extrinsic_inputs = app_inputs
        .iter()
        .zip(&prior)
        .map(|(a, p)| a - p)
        .collect();
    let extrinsic_coded = app_coded.iter().zip(&chan).map(|(a, c)| a - c).collect();
    Ok(SisoOutput {
        app_inputs,
        app_coded,
        extrinsic_inputs,
        extrinsic_coded,
    })
}
