//! Link-level Monte Carlo simulator for serially concatenated
//! quadratic-interleaved codes (SC-QIC) over orthogonal space-time block
//! coded Rayleigh fading channels.
//!
//! The chain: (7,5) recursive systematic outer code, quadratic-congruence
//! interleaver, rate-2/3 inner code, Gray 16-QAM, Alamouti G2 or rate-3/4
//! G3 space-time coding, Rayleigh fading (quasi-static or Bell-Doppler),
//! receive combining, soft demapping, and iterative MAP / Max-Log-MAP
//! decoding. The [`harness`] module sweeps Eb/N0 and emits BER/FER
//! records with deterministic, worker-count-independent results.

pub mod channel;
pub mod convcode;
mod error;
pub mod harness;
pub mod interleave;
pub mod modem;
pub mod scturbo;
pub mod siso;
pub mod stbc;

pub use channel::{ChannelGains, ChannelRealization, NoiseSpec};
pub use convcode::{build_trellis, RateKind, RscSpec, Transition, Trellis};
pub use error::{Error, Result};
pub use harness::{ebn0_to_snr, preset, preset_names, run_point, sweep, BerRecord, SimConfig};
pub use interleave::{Permutation, QuadraticSpec};
pub use modem::{demap_hard, demap_soft, map_16qam, Constellation};
pub use scturbo::{DecodeOutcome, ScqicCodec, ScqicConfig};
pub use siso::{bcjr, max_log_map, Boundary, DecodingAlgo, SisoOutput};
pub use stbc::{code_matrix, ml_detect, stbc_combine, stbc_encode, CombinedSymbol, StbcScheme};
