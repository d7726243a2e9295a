//! Gray-mapped 16-QAM and max-log soft demapping of the post-combining
//! equivalent scalar channel.
//!
//! Label convention: each group of four coded bits `(b3 b2 b1 b0)` is
//! taken in stream order, `b3` first. The I rail comes from `(b3 b2)` and
//! the Q rail from `(b1 b0)`, each pair Gray-mapped
//! `{00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3}` and the whole constellation
//! scaled by `1/sqrt(10)` for unit average symbol energy.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Gray pair to amplitude level, indexed by the two-bit value.
const LEVELS: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

/// A 16-point constellation with its 4-bit labels (label = point index).
#[derive(Clone, Debug)]
pub struct Constellation {
    points: [Complex64; 16],
}

impl Constellation {
    /// The fixed Gray-mapped 16-QAM table.
    pub fn gray16() -> Self {
        let scale = 1.0 / 10.0_f64.sqrt();
        let mut points = [Complex64::new(0.0, 0.0); 16];
        for (label, point) in points.iter_mut().enumerate() {
            let i = LEVELS[(label >> 2) & 0b11] * scale;
            let q = LEVELS[label & 0b11] * scale;
            *point = Complex64::new(i, q);
        }
        Constellation { points }
    }

    pub fn points(&self) -> &[Complex64; 16] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn bits_per_symbol(&self) -> usize {
        4
    }

    /// Label bits in stream order `(b3, b2, b1, b0)`.
    pub fn label_bits(label: usize) -> [u8; 4] {
        [
            ((label >> 3) & 1) as u8,
            ((label >> 2) & 1) as u8,
            ((label >> 1) & 1) as u8,
            (label & 1) as u8,
        ]
    }
}

/// Maps a bit stream (length divisible by 4) onto 16-QAM symbols.
pub fn map_16qam(constellation: &Constellation, bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(4) {
        return Err(Error::invalid(format!(
            "bit stream length {} not divisible by 4",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(4)
        .map(|g| {
            let label = ((g[0] & 1) as usize) << 3
                | ((g[1] & 1) as usize) << 2
                | ((g[2] & 1) as usize) << 1
                | (g[3] & 1) as usize;
            constellation.point(label)
        })
        .collect())
}

/// Max-log bit LLRs for one combined observation `est ~ gain * x + noise`
/// with total complex noise variance `noise_var`. Returns LLRs in stream
/// order `(b3, b2, b1, b0)`, positive favoring bit 0.
pub fn demap_soft(
    constellation: &Constellation,
    est: Complex64,
    equiv_gain: f64,
    noise_var: f64,
) -> Result<[f64; 4]> {
    if noise_var.is_nan() || noise_var <= 0.0 {
        return Err(Error::invalid(format!("noise variance {noise_var} must be positive")));
    }
    if equiv_gain < 0.0 {
        return Err(Error::invalid(format!("equivalent gain {equiv_gain} must be >= 0")));
    }
    let mut min0 = [f64::INFINITY; 4];
    let mut min1 = [f64::INFINITY; 4];
    for (label, &p) in constellation.points().iter().enumerate() {
        let d = (est - equiv_gain * p).norm_sqr();
        for (lane, bit) in Constellation::label_bits(label).iter().enumerate() {
            if *bit == 0 {
                min0[lane] = min0[lane].min(d);
            } else {
                min1[lane] = min1[lane].min(d);
            }
        }
    }
    let mut llrs = [0.0; 4];
    for lane in 0..4 {
        llrs[lane] = (min1[lane] - min0[lane]) / noise_var;
    }
    Ok(llrs)
}

/// Hard demapping: the label of the metric-minimizing point, ties broken
/// toward the lowest label.
pub fn demap_hard(constellation: &Constellation, est: Complex64, equiv_gain: f64) -> usize {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (label, &p) in constellation.points().iter().enumerate() {
        let d = (est - equiv_gain * p).norm_sqr();
        if d < best_d {
            best_d = d;
            best = label;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_average_energy() {
        let c = Constellation::gray16();
        let avg: f64 = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / 16.0;
        assert!((avg - 1.0).abs() < 1e-12);
    }

    #[test]
    fn label_zero_is_corner() {
        let c = Constellation::gray16();
        let s = 1.0 / 10.0_f64.sqrt();
        let p = c.point(0);
        assert!((p.re + 3.0 * s).abs() < 1e-15);
        assert!((p.im + 3.0 * s).abs() < 1e-15);
    }

    #[test]
    fn gray_property_all_nearest_neighbors() {
        let c = Constellation::gray16();
        let s = 1.0 / 10.0_f64.sqrt();
        let mut pairs = 0;
        for a in 0..16 {
            for b in (a + 1)..16 {
                let d = (c.point(a) - c.point(b)).norm();
                if (d - 2.0 * s).abs() < 1e-9 {
                    pairs += 1;
                    assert_eq!(
                        (a ^ b).count_ones(),
                        1,
                        "neighbors {a:04b}/{b:04b} differ in more than one bit"
                    );
                }
            }
        }
        assert_eq!(pairs, 24);
    }

    #[test]
    fn map_matches_labels() {
        let c = Constellation::gray16();
        let bits = [0u8, 0, 0, 0, 1, 1, 1, 1];
        let syms = map_16qam(&c, &bits).unwrap();
        assert_eq!(syms[0], c.point(0b0000));
        assert_eq!(syms[1], c.point(0b1111));
        assert!(map_16qam(&c, &[0, 1, 0]).is_err());
    }

    #[test]
    fn noiseless_demap_recovers_label() {
        let c = Constellation::gray16();
        for label in 0..16 {
            let llrs = demap_soft(&c, 2.5 * c.point(label), 2.5, 1e-4).unwrap();
            let bits = Constellation::label_bits(label);
            for lane in 0..4 {
                assert_eq!(llrs[lane] < 0.0, bits[lane] == 1, "label {label} lane {lane}");
            }
            assert_eq!(demap_hard(&c, 2.5 * c.point(label), 2.5), label);
        }
    }

    #[test]
    fn origin_zeroes_sign_bits_only() {
        let c = Constellation::gray16();
        let llrs = demap_soft(&c, Complex64::new(0.0, 0.0), 1.0, 0.5).unwrap();
        assert_eq!(llrs[0], 0.0); // b3: I sign
        assert_eq!(llrs[2], 0.0); // b1: Q sign
        assert!(llrs[1].abs() > 0.0 && llrs[3].abs() > 0.0);
    }

    #[test]
    fn llr_scale_inverse_in_noise_var() {
        let c = Constellation::gray16();
        let est = Complex64::new(0.31, -0.77);
        let a = demap_soft(&c, est, 1.3, 0.2).unwrap();
        let b = demap_soft(&c, est, 1.3, 0.4).unwrap();
        for lane in 0..4 {
            assert!((a[lane] - 2.0 * b[lane]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_noise() {
        let c = Constellation::gray16();
        assert!(demap_soft(&c, Complex64::new(0.0, 0.0), 1.0, 0.0).is_err());
        assert!(demap_soft(&c, Complex64::new(0.0, 0.0), 1.0, -1.0).is_err());
    }

    #[test]
    fn hard_demap_tie_breaks_low_label() {
        let c = Constellation::gray16();
        // The origin is equidistant from the four inner points; the lowest
        // participating label is 0101.
        assert_eq!(demap_hard(&c, Complex64::new(0.0, 0.0), 1.0), 0b0101);
    }
}
