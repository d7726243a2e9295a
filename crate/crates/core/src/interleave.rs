//! Interleavers: quadratic-congruence (Takeshita–Costello), rectangular
//! block, and identity.
//!
//! Directional convention, fixed once for the whole codec: `apply`
//! scatters (`y[pi(i)] = x[i]`) and `invert` gathers. Both work on bit
//! and LLR sequences alike.

use crate::error::{Error, Result};

/// Parameters of a quadratic-congruence interleaver on `T = 2^g` points.
///
/// The cycle vector is `C(k) = phi * k * (k + 1) / 2 mod T`; the odd
/// multiplier guarantees `C` is a bijection on the integers mod `2^g`.
/// The permutation chains successive cycle values with an offset `h`:
/// `pi((C(k-1) - h) mod T) = C(k)`, wrapping the last entry to `C(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticSpec {
    g: u32,
    phi: u64,
    offset: u64,
}

impl QuadraticSpec {
    pub fn new(g: u32, phi: u64, offset: u64) -> Result<Self> {
        if g == 0 || g > 31 {
            return Err(Error::invalid(format!("exponent g={g} out of range 1..=31")));
        }
        let t = 1u64 << g;
        if phi.is_multiple_of(2) {
            return Err(Error::invalid(format!("multiplier phi={phi} must be odd")));
        }
        if phi == 0 || phi >= t {
            return Err(Error::invalid(format!("phi={phi} out of range 0 < phi < {t}")));
        }
        if offset >= t {
            return Err(Error::invalid(format!("offset h={offset} out of range [0, {t})")));
        }
        Ok(QuadraticSpec { g, phi, offset })
    }

    /// Like [`QuadraticSpec::new`] but starting from the interleaver
    /// length, which must be a power of two.
    pub fn for_len(len: usize, phi: u64, offset: u64) -> Result<Self> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "interleaver length {len} is not a power of two"
            )));
        }
        QuadraticSpec::new(len.trailing_zeros(), phi, offset)
    }

    /// Interleaver length `T = 2^g` (never zero).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1usize << self.g
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }
}

/// A bijection on `{0..T-1}` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &p) in forward.iter().enumerate() {
            if p >= n || inverse[p] != usize::MAX {
                return Err(Error::invalid("forward table is not a bijection"));
            }
            inverse[p] = i;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn identity(len: usize) -> Self {
        let forward: Vec<usize> = (0..len).collect();
        Permutation {
            inverse: forward.clone(),
            forward,
        }
    }

    /// Builds the quadratic-congruence permutation for `spec`.
    pub fn quadratic(spec: &QuadraticSpec) -> Self {
        let t = spec.len() as u64;
        let cycle: Vec<u64> = (0..t)
            .map(|k| {
                let tri = (k as u128 * (k as u128 + 1)) / 2;
                ((spec.phi as u128 * tri) % t as u128) as u64
            })
            .collect();
        let mut forward = vec![0usize; t as usize];
        for k in 1..t as usize {
            let pos = (cycle[k - 1] + t - spec.offset) % t;
            forward[pos as usize] = cycle[k] as usize;
        }
        let pos = (cycle[t as usize - 1] + t - spec.offset) % t;
        forward[pos as usize] = cycle[0] as usize;
        // The odd multiplier makes the cycle vector a bijection, hence the
        // chained table is one as well.
        Permutation::from_forward(forward).expect("quadratic congruence yields a bijection")
    }

    /// Rectangular block interleaver: write row-wise, read column-wise.
    /// Output position `k` carries input index `read_order[k]`.
    pub fn block(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("block interleaver dimensions must be positive"));
        }
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::invalid("block interleaver dimensions overflow"))?;
        let mut inverse = Vec::with_capacity(n);
        for c in 0..cols {
            for r in 0..rows {
                inverse.push(r * cols + c);
            }
        }
        // inverse[k] is the input index read out at position k, which in
        // the scatter convention is exactly pi^{-1}(k).
        let mut forward = vec![0usize; n];
        for (k, &src) in inverse.iter().enumerate() {
            forward[src] = k;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    /// Scatters: returns `y` with `y[pi(i)] = x[i]`.
    pub fn apply<T: Copy + Default>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.len() {
            return Err(Error::invalid(format!(
                "sequence length {} does not match interleaver size {}",
                x.len(),
                self.len()
            )));
        }
        let mut y = vec![T::default(); x.len()];
        for (i, &v) in x.iter().enumerate() {
            y[self.forward[i]] = v;
        }
        Ok(y)
    }

    /// Gathers: the inverse of [`Permutation::apply`].
    pub fn invert<T: Copy + Default>(&self, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.len() {
            return Err(Error::invalid(format!(
                "sequence length {} does not match interleaver size {}",
                y.len(),
                self.len()
            )));
        }
        Ok((0..y.len()).map(|i| y[self.forward[i]]).collect())
    }
}
