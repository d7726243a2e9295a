//! Independent brute-force references used only by the test suite.
//!
//! Everything here is written from scratch against the documented
//! conventions (coefficient arrays instead of packed masks, probability
//! domain instead of metric shortcuts, exhaustive scans instead of
//! closed-form combining) so that agreement with the library is a real
//! cross-check and not a tautology.

#![allow(dead_code)]

use num_complex::Complex64;

// ---------------------------------------------------------------------
// Bit-level shift-register reference for the (7,5) recursion.
// Octal 7 -> coefficients [1,1,1] (1 + D + D^2), octal 5 -> [1,0,1].
// ---------------------------------------------------------------------

const FB: [u8; 3] = [1, 1, 1];
const FF: [u8; 3] = [1, 0, 1];

struct RefRegisters {
    s1: u8,
    s2: u8,
}

impl RefRegisters {
    fn new() -> Self {
        RefRegisters { s1: 0, s2: 0 }
    }

    fn step(&mut self, u: u8) -> (u8, u8) {
        let a = u ^ (FB[1] & self.s1) ^ (FB[2] & self.s2);
        let p = (FF[0] & a) ^ (FF[1] & self.s1) ^ (FF[2] & self.s2);
        self.s2 = self.s1;
        self.s1 = a;
        (u, p)
    }

    fn flush_input(&self) -> u8 {
        (FB[1] & self.s1) ^ (FB[2] & self.s2)
    }

    fn state_index(&self) -> usize {
        ((self.s1 as usize) << 1) | self.s2 as usize
    }
}

/// Reference outer encoder: systematic/parity interleaved per step,
/// optional two-bit termination. Returns (coded, final_state).
pub fn ref_encode_outer(info: &[u8], terminate: bool) -> (Vec<u8>, usize) {
    let mut regs = RefRegisters::new();
    let mut out = Vec::with_capacity(2 * (info.len() + 2));
    for &u in info {
        let (s, p) = regs.step(u & 1);
        out.push(s);
        out.push(p);
    }
    if terminate {
        for _ in 0..2 {
            let u = regs.flush_input();
            let (s, p) = regs.step(u);
            out.push(s);
            out.push(p);
        }
    }
    (out, regs.state_index())
}

/// Reference inner encoder: two systematic bits then the parity of the
/// second recursion step, per output triple. Unterminated.
pub fn ref_encode_inner(bits: &[u8]) -> Vec<u8> {
    assert_eq!(bits.len() % 2, 0);
    let mut regs = RefRegisters::new();
    let mut out = Vec::with_capacity(bits.len() * 3 / 2);
    for pair in bits.chunks_exact(2) {
        let _ = regs.step(pair[0] & 1);
        let (_, p) = regs.step(pair[1] & 1);
        out.push(pair[0] & 1);
        out.push(pair[1] & 1);
        out.push(p);
    }
    out
}

// ---------------------------------------------------------------------
// Exhaustive posterior computation over enumerated codewords.
// ---------------------------------------------------------------------

/// One enumerated codeword: the full input-lane bits (including any
/// termination bits) and the coded bits.
pub struct Candidate {
    pub inputs: Vec<u8>,
    pub coded: Vec<u8>,
}

/// All codewords of the terminated outer code with `k` free info bits.
pub fn enumerate_outer(k: usize) -> Vec<Candidate> {
    assert!(k <= 12, "refusing to enumerate more than 12 info bits");
    (0..1u32 << k)
        .map(|pattern| {
            let info: Vec<u8> = (0..k).map(|i| ((pattern >> i) & 1) as u8).collect();
            let mut regs = RefRegisters::new();
            let mut inputs = info.clone();
            let mut coded = Vec::with_capacity(2 * (k + 2));
            for &u in &info {
                let (s, p) = regs.step(u);
                coded.push(s);
                coded.push(p);
            }
            for _ in 0..2 {
                let u = regs.flush_input();
                inputs.push(u);
                let (s, p) = regs.step(u);
                coded.push(s);
                coded.push(p);
            }
            Candidate { inputs, coded }
        })
        .collect()
}

/// All codewords of the unterminated inner code over `n` input bits.
pub fn enumerate_inner(n: usize) -> Vec<Candidate> {
    assert!(n % 2 == 0 && n <= 12, "refusing to enumerate more than 12 bits");
    (0..1u32 << n)
        .map(|pattern| {
            let bits: Vec<u8> = (0..n).map(|i| ((pattern >> i) & 1) as u8).collect();
            Candidate {
                coded: ref_encode_inner(&bits),
                inputs: bits,
            }
        })
        .collect()
}

fn log_sum_exp(acc: f64, x: f64) -> f64 {
    if acc == f64::NEG_INFINITY {
        return x;
    }
    if x == f64::NEG_INFINITY {
        return acc;
    }
    acc.max(x) + (-(acc - x).abs()).exp().ln_1p()
}

/// Exact bit posteriors by summation over all candidates in the
/// probability domain (log p(b|L) = -ln(1 + exp(-(1-2b) L))), or the
/// max-metric variant when `maxlog` is set. Returns posteriors over the
/// input lanes and the coded lanes.
pub fn brute_force_posterior(
    cands: &[Candidate],
    channel_llrs: &[f64],
    priors: &[f64],
    maxlog: bool,
) -> (Vec<f64>, Vec<f64>) {
    let n_in = cands[0].inputs.len();
    let n_out = cands[0].coded.len();
    assert_eq!(channel_llrs.len(), n_out);
    assert_eq!(priors.len(), n_in);
    let log_p = |b: u8, l: f64| -> f64 { -((-(1.0 - 2.0 * b as f64) * l).exp().ln_1p()) };
    let reduce = |acc: f64, x: f64| if maxlog { acc.max(x) } else { log_sum_exp(acc, x) };

    let mut in0 = vec![f64::NEG_INFINITY; n_in];
    let mut in1 = vec![f64::NEG_INFINITY; n_in];
    let mut out0 = vec![f64::NEG_INFINITY; n_out];
    let mut out1 = vec![f64::NEG_INFINITY; n_out];
    for cand in cands {
        let mut metric = 0.0;
        for (j, &b) in cand.coded.iter().enumerate() {
            metric += log_p(b, channel_llrs[j]);
        }
        for (i, &u) in cand.inputs.iter().enumerate() {
            metric += log_p(u, priors[i]);
        }
        for (i, &u) in cand.inputs.iter().enumerate() {
            if u == 0 {
                in0[i] = reduce(in0[i], metric);
            } else {
                in1[i] = reduce(in1[i], metric);
            }
        }
        for (j, &b) in cand.coded.iter().enumerate() {
            if b == 0 {
                out0[j] = reduce(out0[j], metric);
            } else {
                out1[j] = reduce(out1[j], metric);
            }
        }
    }
    let app_in: Vec<f64> = in0.iter().zip(&in1).map(|(a, b)| a - b).collect();
    let app_out: Vec<f64> = out0.iter().zip(&out1).map(|(a, b)| a - b).collect();
    (app_in, app_out)
}

// ---------------------------------------------------------------------
// Verbatim decision-metric evaluation for the space-time codes.
// ---------------------------------------------------------------------

/// Evaluates the full G2 decision metrics over every constellation point
/// and returns the argmin labels for (s1, s2). `received[slot][rx]`,
/// `gains[tx][rx]`.
pub fn exhaustive_g2_detect(
    received: &[Vec<Complex64>],
    gains: &[Vec<Complex64>],
    points: &[Complex64; 16],
) -> [usize; 2] {
    let m = received[0].len();
    let h: f64 = gains.iter().flatten().map(|a| a.norm_sqr()).sum();
    let mut comb1 = Complex64::new(0.0, 0.0);
    let mut comb2 = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let (a1, a2) = (gains[0][j], gains[1][j]);
        comb1 += received[0][j] * a1.conj() + received[1][j].conj() * a2;
        comb2 += received[0][j] * a2.conj() - received[1][j].conj() * a1;
    }
    let metric = |comb: Complex64, s: Complex64| -> f64 {
        (comb - s).norm_sqr() + (h - 1.0) * s.norm_sqr()
    };
    [argmin_metric(comb1, points, metric), argmin_metric(comb2, points, metric)]
}

/// As above for the rate-3/4 three-antenna code: argmin labels for
/// (s1, s2, s3) from the verbatim four-slot metrics.
pub fn exhaustive_g3_detect(
    received: &[Vec<Complex64>],
    gains: &[Vec<Complex64>],
    points: &[Complex64; 16],
) -> [usize; 3] {
    let m = received[0].len();
    let h: f64 = gains.iter().flatten().map(|a| a.norm_sqr()).sum();
    let sq2 = 2.0_f64.sqrt();
    let mut c1 = Complex64::new(0.0, 0.0);
    let mut c2 = Complex64::new(0.0, 0.0);
    let mut c3 = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let (a1, a2, a3) = (gains[0][j], gains[1][j], gains[2][j]);
        let (r1, r2, r3, r4) = (
            received[0][j],
            received[1][j],
            received[2][j],
            received[3][j],
        );
        c1 += r1 * a1.conj() + r2.conj() * a2 + (r4 - r3) * a3.conj() / 2.0
            - (r3 + r4).conj() * a3 / 2.0;
        c2 += r1 * a2.conj() - r2.conj() * a1 + (r4 + r3) * a3.conj() / 2.0
            + (-r3 + r4).conj() * a3 / 2.0;
        c3 += (r1 + r2) * a3.conj() / sq2
            + r3.conj() * (a1 + a2) / sq2
            + r4.conj() * (a1 - a2) / sq2;
    }
    let metric = |comb: Complex64, s: Complex64| -> f64 {
        (comb - s).norm_sqr() + (h - 1.0) * s.norm_sqr()
    };
    [
        argmin_metric(c1, points, metric),
        argmin_metric(c2, points, metric),
        argmin_metric(c3, points, metric),
    ]
}

fn argmin_metric<F: Fn(Complex64, Complex64) -> f64>(
    comb: Complex64,
    points: &[Complex64; 16],
    metric: F,
) -> usize {
    let mut best = 0;
    let mut best_m = f64::INFINITY;
    for (label, &p) in points.iter().enumerate() {
        let m = metric(comb, p);
        if m < best_m {
            best_m = m;
            best = label;
        }
    }
    best
}

// ---------------------------------------------------------------------
// Closed-form uncoded BER curves and their numeric underpinnings.
// ---------------------------------------------------------------------

/// Complementary error function via the regularized incomplete gamma
/// function (series + continued fraction), good to ~1e-14.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x == 0.0 {
        return 1.0;
    }
    gammq_half(x * x)
}

/// Q(x) = P(N(0,1) > x).
pub fn q_func(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Q via Craig's single-finite-range integral, for validating `q_func`.
pub fn q_craig(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x == 0.0 {
        return 0.5;
    }
    let n = 4000;
    let h = std::f64::consts::FRAC_PI_2 / n as f64;
    let f = |theta: f64| -> f64 {
        if theta == 0.0 {
            0.0
        } else {
            (-x * x / (2.0 * theta.sin().powi(2))).exp()
        }
    };
    let mut acc = f(0.0) + f(std::f64::consts::FRAC_PI_2);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0 / std::f64::consts::PI
}

/// Upper incomplete gamma Q(1/2, x), regularized.
fn gammq_half(x: f64) -> f64 {
    const A: f64 = 0.5;
    let gln = std::f64::consts::PI.sqrt().ln();
    if x < A + 1.0 {
        // Series for P(a, x), return 1 - P.
        let mut ap = A;
        let mut sum = 1.0 / A;
        let mut del = sum;
        for _ in 0..300 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        1.0 - sum * (-x + A * x.ln() - gln).exp()
    } else {
        // Continued fraction for Q(a, x) directly.
        let tiny = 1e-300;
        let mut b = x + 1.0 - A;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..300 {
            let an = -(i as f64) * (i as f64 - A);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x + A * x.ln() - gln).exp() * h
    }
}

/// BPSK over AWGN.
pub fn ber_bpsk_awgn(ebn0_linear: f64) -> f64 {
    0.5 * erfc(ebn0_linear.sqrt())
}

/// Gray-mapped 16-QAM over AWGN, exact per-bit average. Derived per rail:
/// the sign bit errs with mean (Q(a) + Q(3a))/2 and the magnitude bit
/// with Q(a) + (Q(3a) - Q(5a))/2, a = d/sigma = sqrt(0.8 Eb/N0).
pub fn ber_gray16qam_awgn(ebn0_linear: f64) -> f64 {
    let a = (0.8 * ebn0_linear).sqrt();
    0.75 * q_func(a) + 0.5 * q_func(3.0 * a) - 0.25 * q_func(5.0 * a)
}

/// BPSK with L-branch maximum-ratio combining over i.i.d. Rayleigh
/// fading, mean branch Eb/N0 `ebn0_linear`.
pub fn ber_bpsk_rayleigh_mrc(l: u32, ebn0_linear: f64) -> f64 {
    let mu = (ebn0_linear / (1.0 + ebn0_linear)).sqrt();
    let p = (1.0 - mu) / 2.0;
    let q = (1.0 + mu) / 2.0;
    let mut sum = 0.0;
    for k in 0..l {
        sum += binomial((l - 1 + k) as u64, k as u64) * q.powi(k as i32);
    }
    p.powi(l as i32) * sum
}

fn binomial(n: u64, k: u64) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

// ---------------------------------------------------------------------
// Statistical helpers.
// ---------------------------------------------------------------------

/// Kolmogorov-Smirnov statistic of `samples` against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    d
}

/// One-sided 95% upper confidence bound on a Poisson mean given `k`
/// observed events: the lambda with P(X <= k) = 0.05.
pub fn poisson_upper_bound_95(k: u64) -> f64 {
    let cdf = |lambda: f64| -> f64 {
        let mut term = (-lambda).exp();
        let mut acc = term;
        for i in 1..=k {
            term *= lambda / i as f64;
            acc += term;
        }
        acc
    };
    let (mut lo, mut hi) = (k as f64, k as f64 + 60.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) > 0.05 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares slope of y over x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn q_matches_craig_quadrature() {
        for i in 0..=24 {
            let x = i as f64 * 0.25;
            let a = q_func(x);
            let b = q_craig(x);
            assert!(
                (a - b).abs() <= 1e-6 * a.max(1e-300),
                "x={x}: q={a:e} craig={b:e}"
            );
        }
    }

    #[test]
    fn bpsk_awgn_at_0db() {
        assert!((ber_bpsk_awgn(1.0) - 0.0786).abs() < 5e-5);
    }

    #[test]
    fn mrc_l2_asymptotic_slope() {
        // Two decades per 10 dB once diversity 2 dominates.
        let g1 = 10f64.powf(3.0); // 30 dB
        let g2 = 10f64.powf(4.0); // 40 dB
        let slope = (ber_bpsk_rayleigh_mrc(2, g1) / ber_bpsk_rayleigh_mrc(2, g2)).log10();
        assert!((slope - 2.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn poisson_bound_rule_of_three() {
        assert!((poisson_upper_bound_95(0) - 2.9957).abs() < 1e-3);
        assert!(poisson_upper_bound_95(5) > 5.0);
    }
}
