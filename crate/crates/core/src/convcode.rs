//! Recursive systematic convolutional (RSC) constituent codes.
//!
//! Generators are octal-coded and read MSB-first as polynomial
//! coefficients, so `0o7 = 1 + D + D^2` and `0o5 = 1 + D^2`. The register
//! update is the classic RSC recursion: the feedback sum is
//! `a_t = u_t XOR (feedback taps on the registers)` and each parity output
//! taps `(a_t, registers)` with its feedforward polynomial. The encoder
//! state packs the registers newest-first, so after pushing `a` into an
//! all-zero two-register machine the state reads `10` (index 2).

use crate::error::{Error, Result};

/// Which constituent of the serial concatenation a spec realizes.
///
/// `OuterHalfRate` is a plain rate-1/2 systematic code (one input bit per
/// trellis step, systematic + parity out). `InnerTwoThirds` runs the same
/// recursion over two input bits per trellis step and keeps only the
/// parity of the second one, i.e. a rate-1/2 code punctured to rate 2/3
/// with both information bits passing through the recursion in sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateKind {
    OuterHalfRate,
    InnerTwoThirds,
}

/// A recursive systematic convolutional code, octal generators.
#[derive(Clone, Debug)]
pub struct RscSpec {
    feedback: u32,
    feedforward: Vec<u32>,
    memory: usize,
    rate_kind: RateKind,
}

fn bit_len(x: u32) -> usize {
    (32 - x.leading_zeros()) as usize
}

impl RscSpec {
    /// Builds a spec from a feedback polynomial and feedforward
    /// polynomials (one per parity output). All generators are aligned to
    /// a common register width; the feedback polynomial must own the
    /// leading coefficient of that width, otherwise its constant term
    /// (MSB-first reading) would be zero and the recursion unrealizable.
    pub fn new(feedback: u32, feedforward: &[u32], rate_kind: RateKind) -> Result<Self> {
        if feedback == 0 {
            return Err(Error::invalid("feedback polynomial must be nonzero"));
        }
        if feedforward.is_empty() || feedforward.contains(&0) {
            return Err(Error::invalid(
                "need at least one nonzero feedforward polynomial",
            ));
        }
        let width = feedforward
            .iter()
            .map(|&g| bit_len(g))
            .chain(std::iter::once(bit_len(feedback)))
            .max()
            .unwrap();
        if bit_len(feedback) != width {
            return Err(Error::invalid(
                "feedback polynomial has zero constant term (a shorter generator \
                 than some feedforward polynomial)",
            ));
        }
        if feedforward.len() != 1 {
            return Err(Error::invalid(
                "exactly one parity stream is supported per constituent code",
            ));
        }
        Ok(RscSpec {
            feedback,
            feedforward: feedforward.to_vec(),
            memory: width - 1,
            rate_kind,
        })
    }

    /// Classic (7,5) outer code.
    pub fn outer_7_5() -> Self {
        RscSpec::new(0o7, &[0o5], RateKind::OuterHalfRate).unwrap()
    }

    /// Rate-2/3 inner code: the (7,5) recursion with the parity stream
    /// punctured to every second position.
    pub fn inner_7_5() -> Self {
        RscSpec::new(0o7, &[0o5], RateKind::InnerTwoThirds).unwrap()
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn rate_kind(&self) -> RateKind {
        self.rate_kind
    }

    pub fn inputs_per_step(&self) -> usize {
        match self.rate_kind {
            RateKind::OuterHalfRate => 1,
            RateKind::InnerTwoThirds => 2,
        }
    }

    pub fn outputs_per_step(&self) -> usize {
        match self.rate_kind {
            RateKind::OuterHalfRate => 2,
            RateKind::InnerTwoThirds => 3,
        }
    }

    fn registers(&self) -> Registers {
        let width = self.memory + 1;
        // Coefficient c_k of a generator is bit (width-1-k); register r_i
        // (i = 1..=m, r_1 newest) sits at state bit (m - i). Taps on D^i
        // therefore map to state bit (m - i).
        let mut fb_mask = 0usize;
        for i in 1..=self.memory {
            if (self.feedback >> (width - 1 - i)) & 1 == 1 {
                fb_mask |= 1 << (self.memory - i);
            }
        }
        let ff = self.feedforward[0];
        let mut ff_mask = 0usize;
        for i in 1..=self.memory {
            if (ff >> (width - 1 - i)) & 1 == 1 {
                ff_mask |= 1 << (self.memory - i);
            }
        }
        Registers {
            memory: self.memory,
            fb_mask,
            ff_mask,
            ff_c0: ((ff >> (width - 1)) & 1) as u8,
            state: 0,
        }
    }

    /// Encodes `info_bits`, optionally appending the flush bits that drive
    /// the registers back to state zero. Returns the coded stream (output
    /// tuples in step order, systematic lanes first) and the final state.
    pub fn encode(&self, info_bits: &[u8], terminate: bool) -> Result<(Vec<u8>, usize)> {
        let ins = self.inputs_per_step();
        if !info_bits.len().is_multiple_of(ins) {
            return Err(Error::invalid(format!(
                "input length {} not divisible by {} input bits per step",
                info_bits.len(),
                ins
            )));
        }
        let mut regs = self.registers();
        let mut out = Vec::with_capacity(info_bits.len() * 2);
        match self.rate_kind {
            RateKind::OuterHalfRate => {
                for &u in info_bits {
                    let p = regs.step(u & 1);
                    out.push(u & 1);
                    out.push(p);
                }
                if terminate {
                    for _ in 0..self.memory {
                        let u = regs.flush_bit();
                        let p = regs.step(u);
                        out.push(u);
                        out.push(p);
                    }
                }
            }
            RateKind::InnerTwoThirds => {
                for pair in info_bits.chunks_exact(2) {
                    let _ = regs.step(pair[0] & 1);
                    let p = regs.step(pair[1] & 1);
                    out.push(pair[0] & 1);
                    out.push(pair[1] & 1);
                    out.push(p);
                }
                if terminate {
                    // One two-bit step flushes both registers.
                    let u0 = regs.flush_bit();
                    let _ = regs.step(u0);
                    let u1 = regs.flush_bit();
                    let p = regs.step(u1);
                    out.push(u0);
                    out.push(u1);
                    out.push(p);
                }
            }
        }
        Ok((out, regs.state))
    }
}

/// Bit-level shift-register machine for one RSC recursion.
struct Registers {
    memory: usize,
    fb_mask: usize,
    ff_mask: usize,
    ff_c0: u8,
    state: usize,
}

impl Registers {
    fn step(&mut self, u: u8) -> u8 {
        let a = u ^ parity(self.state & self.fb_mask);
        let p = (self.ff_c0 & a) ^ parity(self.state & self.ff_mask);
        self.state = ((a as usize) << (self.memory - 1)) | (self.state >> 1);
        p
    }

    /// The input that makes the feedback sum zero, advancing toward state 0.
    fn flush_bit(&self) -> u8 {
        parity(self.state & self.fb_mask)
    }
}

fn parity(x: usize) -> u8 {
    (x.count_ones() & 1) as u8
}

/// One trellis edge. Input and output bit tuples are packed LSB-first:
/// bit `i` of `input` is the i-th input bit of the step, bit `j` of
/// `output` the j-th coded bit (systematic lanes before parity).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub input: u8,
    pub output: u8,
}

/// Time-invariant state-transition table of a constituent code.
#[derive(Clone, Debug)]
pub struct Trellis {
    num_states: usize,
    inputs_per_step: usize,
    outputs_per_step: usize,
    memory: usize,
    /// Indexed by `state * 2^inputs_per_step + input`.
    transitions: Vec<Transition>,
}

/// Expands a spec into its trellis. Deterministic; the table is total
/// (every state has exactly `2^inputs_per_step` outgoing edges).
pub fn build_trellis(spec: &RscSpec) -> Trellis {
    let num_states = 1usize << spec.memory();
    let ins = spec.inputs_per_step();
    let num_inputs = 1usize << ins;
    let mut transitions = Vec::with_capacity(num_states * num_inputs);
    for state in 0..num_states {
        for input in 0..num_inputs as u8 {
            let mut regs = spec.registers();
            regs.state = state;
            let output = match spec.rate_kind() {
                RateKind::OuterHalfRate => {
                    let u = input & 1;
                    let p = regs.step(u);
                    u | (p << 1)
                }
                RateKind::InnerTwoThirds => {
                    let (u0, u1) = (input & 1, (input >> 1) & 1);
                    let _ = regs.step(u0);
                    let p = regs.step(u1);
                    u0 | (u1 << 1) | (p << 2)
                }
            };
            transitions.push(Transition {
                from: state,
                to: regs.state,
                input,
                output,
            });
        }
    }
    Trellis {
        num_states,
        inputs_per_step: ins,
        outputs_per_step: spec.outputs_per_step(),
        memory: spec.memory(),
        transitions,
    }
}

impl Trellis {
    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn inputs_per_step(&self) -> usize {
        self.inputs_per_step
    }

    pub fn outputs_per_step(&self) -> usize {
        self.outputs_per_step
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, state: usize, input: usize) -> &Transition {
        &self.transitions[state * (1 << self.inputs_per_step) + input]
    }

    /// Input bits that drive `state` to zero within `memory` register
    /// shifts, found by exhaustive search over the (tiny) input space.
    pub fn termination_inputs(&self, state: usize) -> Vec<u8> {
        assert!(state < self.num_states, "state out of range");
        let steps = self.memory.div_ceil(self.inputs_per_step);
        let total_bits = steps * self.inputs_per_step;
        for cand in 0..(1u32 << total_bits) {
            let mut s = state;
            for step in 0..steps {
                let input = ((cand >> (step * self.inputs_per_step))
                    & ((1 << self.inputs_per_step) - 1)) as usize;
                s = self.transition(s, input).to;
            }
            if s == 0 {
                return (0..total_bits).map(|i| ((cand >> i) & 1) as u8).collect();
            }
        }
        unreachable!("RSC recursion always admits a flush sequence");
    }
}
