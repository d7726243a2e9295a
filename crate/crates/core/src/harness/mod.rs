//! Monte Carlo BER/FER engine: per-Eb/N0 frame loop with early stopping,
//! deterministic frame-indexed RNG streams, and CSV output.
//!
//! Frame `i` of a run always draws from a stream derived from
//! `(master_seed, i)`, so results are independent of the worker count and
//! of scheduling. Frames are simulated in fixed-size batches; the stop
//! rule (minimum bit errors or frame cap) is evaluated at batch
//! boundaries only, which keeps the set of simulated frames
//! deterministic.

mod presets;

pub use presets::{preset, preset_names};

use crate::channel::{
    add_awgn, draw_bell_doppler, draw_quasi_static, ChannelGains, ChannelRealization, NoiseSpec,
};
use crate::error::{Error, Result};
use crate::interleave::{Permutation, QuadraticSpec};
use crate::modem::{demap_hard, demap_soft, map_16qam, Constellation};
use crate::scturbo::{ScqicCodec, ScqicConfig};
use crate::siso::DecodingAlgo;
use crate::stbc::{stbc_combine, stbc_encode, CombinedSymbol, StbcScheme};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;

/// Frames simulated between stop-rule checks.
const BATCH_FRAMES: u64 = 32;

/// Effective-noise floor used when the noiseless flag is set, so the
/// demapper still produces (huge, clamped) finite LLRs.
const NOISELESS_VAR_FLOOR: f64 = 1e-12;

pub const CSV_HEADER: &str =
    "ebn0_db,snr_db,frames,bits,bit_errors,frame_errors,ber,fer,wall_seconds";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    /// No space-time code: one tx antenna, maximum-ratio combining.
    None,
    G2,
    G3,
}

impl SchemeChoice {
    fn stbc(self) -> Option<StbcScheme> {
        match self {
            SchemeChoice::None => None,
            SchemeChoice::G2 => Some(StbcScheme::G2),
            SchemeChoice::G3 => Some(StbcScheme::G3),
        }
    }

    pub fn n_tx(self) -> usize {
        self.stbc().map_or(1, |s| s.n_tx())
    }

    pub fn stbc_rate(self) -> f64 {
        self.stbc().map_or(1.0, |s| s.rate())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterleaverKind {
    Quadratic,
    Block,
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderChoice {
    Map,
    Maxlog,
}

impl DecoderChoice {
    pub fn algo(self) -> DecodingAlgo {
        match self {
            DecoderChoice::Map => DecodingAlgo::Map,
            DecoderChoice::Maxlog => DecodingAlgo::MaxLogMap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelChoice {
    /// Path gains frozen per frame (independent across frames).
    Quasistatic,
    /// Bell-spectrum Doppler fading, gains held constant per STBC block.
    Bell,
    /// No fading at all: unit gains.
    Awgn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemapChoice {
    Soft,
    /// Hard symbol decisions re-expanded to fixed-confidence LLRs.
    Hard,
}

/// Full description of one simulation. Serializes as the JSON config
/// format; CLI flags override individual fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub scheme: SchemeChoice,
    pub rx: usize,
    /// Run the SC-QIC codec (true) or uncoded symbols (false).
    pub coded: bool,
    /// Interleaver size T when coded; must be 2^g for the quadratic kind.
    pub frame_size: usize,
    /// Information bits per frame when uncoded.
    pub uncoded_frame_bits: usize,
    pub interleaver: InterleaverKind,
    pub phi: u64,
    pub offset: u64,
    /// Row count of the block interleaver (columns = frame_size / rows).
    pub rows: usize,
    pub decoder: DecoderChoice,
    pub iterations: usize,
    pub demap: DemapChoice,
    pub channel: ChannelChoice,
    pub doppler_hz: f64,
    pub symbol_rate_hz: f64,
    pub ebn0_db: Vec<f64>,
    pub min_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scheme: SchemeChoice::G2,
            rx: 1,
            coded: true,
            frame_size: 2048,
            uncoded_frame_bits: 4080,
            interleaver: InterleaverKind::Quadratic,
            phi: 13,
            offset: 0,
            rows: 32,
            decoder: DecoderChoice::Maxlog,
            iterations: 6,
            demap: DemapChoice::Soft,
            channel: ChannelChoice::Quasistatic,
            doppler_hz: 50.0,
            symbol_rate_hz: 10_000.0,
            ebn0_db: vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0],
            min_errors: 200,
            max_frames: 5000,
            seed: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rx == 0 {
            return Err(Error::invalid("need at least one receive antenna"));
        }
        if self.ebn0_db.is_empty() {
            return Err(Error::invalid("Eb/N0 grid is empty"));
        }
        if self.ebn0_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("Eb/N0 grid must be strictly increasing"));
        }
        if self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("Eb/N0 grid must be finite"));
        }
        if self.min_errors == 0 || self.max_frames == 0 {
            return Err(Error::invalid("stop bounds must be positive"));
        }
        if self.coded {
            if self.iterations == 0 {
                return Err(Error::invalid("need at least one decoder iteration"));
            }
            match self.interleaver {
                InterleaverKind::Quadratic => {
                    QuadraticSpec::for_len(self.frame_size, self.phi, self.offset)?;
                }
                InterleaverKind::Block => {
                    if self.rows == 0 || !self.frame_size.is_multiple_of(self.rows) {
                        return Err(Error::invalid(format!(
                            "rows={} must divide frame size {}",
                            self.rows, self.frame_size
                        )));
                    }
                }
                InterleaverKind::Identity => {}
            }
            // Coded symbols must split into whole STBC blocks.
            let symbols = self.frame_size * 3 / 2 / 4;
            let spb = self
                .scheme
                .stbc()
                .map_or(1, StbcScheme::symbols_per_block);
            if !(self.frame_size * 3 / 2).is_multiple_of(4) || !symbols.is_multiple_of(spb) {
                return Err(Error::invalid(format!(
                    "frame size {} does not yield whole 16-QAM/STBC blocks",
                    self.frame_size
                )));
            }
        } else {
            let spb = self
                .scheme
                .stbc()
                .map_or(1, StbcScheme::symbols_per_block);
            if self.uncoded_frame_bits == 0 || !self.uncoded_frame_bits.is_multiple_of(4 * spb) {
                return Err(Error::invalid(format!(
                    "uncoded frame bits {} must be a positive multiple of {}",
                    self.uncoded_frame_bits,
                    4 * spb
                )));
            }
        }
        if self.channel == ChannelChoice::Bell {
            if self.doppler_hz.is_nan() || self.doppler_hz <= 0.0 {
                return Err(Error::invalid("Doppler spread must be positive"));
            }
            if self.doppler_hz >= self.symbol_rate_hz / 2.0 {
                return Err(Error::invalid(
                    "Doppler spread must be below half the symbol rate",
                ));
            }
        }
        Ok(())
    }

    /// Information bits per frame.
    pub fn info_bits_per_frame(&self) -> usize {
        if self.coded {
            // Outer memory is 2 for the (7,5) constituents.
            self.frame_size / 2 - 2
        } else {
            self.uncoded_frame_bits
        }
    }

    /// Overall code rate (1 when uncoded).
    pub fn code_rate(&self) -> f64 {
        if self.coded {
            self.info_bits_per_frame() as f64 / (self.frame_size as f64 * 1.5)
        } else {
            1.0
        }
    }

    pub fn build_interleaver(&self) -> Result<Permutation> {
        match self.interleaver {
            InterleaverKind::Quadratic => Ok(Permutation::quadratic(&QuadraticSpec::for_len(
                self.frame_size,
                self.phi,
                self.offset,
            )?)),
            InterleaverKind::Block => Permutation::block(self.rows, self.frame_size / self.rows),
            InterleaverKind::Identity => Ok(Permutation::identity(self.frame_size)),
        }
    }
}

/// Aggregate result of one Eb/N0 point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub ebn0_db: f64,
    pub snr_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub wall_seconds: f64,
}

impl BerRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.6},{},{},{},{},{:.6e},{:.6e},{:.3}",
            self.ebn0_db,
            self.snr_db,
            self.frames,
            self.bits,
            self.bit_errors,
            self.frame_errors,
            self.ber,
            self.fer,
            self.wall_seconds
        )
    }
}

/// Converts Eb/N0 to the symbol-energy SNR of the channel model:
/// `SNR = (Eb/N0) * R * bits_per_symbol * stbc_rate`.
pub fn ebn0_to_snr(ebn0_db: f64, code_rate: f64, bits_per_symbol: f64, stbc_rate: f64) -> f64 {
    10f64.powf(ebn0_db / 10.0) * code_rate * bits_per_symbol * stbc_rate
}

/// Everything shared across the frames of one run.
struct Runtime {
    cfg: SimConfig,
    codec: Option<ScqicCodec>,
    constellation: Constellation,
    info_bits: usize,
    symbols_per_frame: usize,
}

impl Runtime {
    fn build(cfg: &SimConfig) -> Result<Runtime> {
        cfg.validate()?;
        let codec = if cfg.coded {
            let mut scqic = ScqicConfig::standard(cfg.build_interleaver()?, cfg.decoder.algo());
            scqic.iterations = cfg.iterations;
            Some(ScqicCodec::new(scqic)?)
        } else {
            None
        };
        let info_bits = codec
            .as_ref()
            .map_or(cfg.uncoded_frame_bits, |c| c.info_len());
        let coded_bits = codec
            .as_ref()
            .map_or(cfg.uncoded_frame_bits, |c| c.coded_len());
        Ok(Runtime {
            cfg: cfg.clone(),
            codec,
            constellation: Constellation::gray16(),
            info_bits,
            symbols_per_frame: coded_bits / 4,
        })
    }

    fn slots_per_frame(&self) -> usize {
        match self.cfg.scheme.stbc() {
            Some(s) => self.symbols_per_frame / s.symbols_per_block() * s.slots_per_block(),
            None => self.symbols_per_frame,
        }
    }
}

struct FrameOutcome {
    bit_errors: u64,
    frame_error: bool,
}

/// Stream for frame `i`: a ChaCha stream keyed by a splitmix64 chain over
/// `(master_seed, i)`.
fn frame_rng(master_seed: u64, frame_index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    let mut x = master_seed ^ frame_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    for chunk in seed.chunks_exact_mut(8) {
        x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

fn simulate_frame(rt: &Runtime, noise: &NoiseSpec, frame_index: u64) -> FrameOutcome {
    let mut rng = frame_rng(rt.cfg.seed, frame_index);
    let cfg = &rt.cfg;

    let info: Vec<u8> = (0..rt.info_bits).map(|_| rng.random::<bool>() as u8).collect();
    let coded = match &rt.codec {
        Some(codec) => codec.encode(&info).expect("validated config"),
        None => info.clone(),
    };
    let symbols = map_16qam(&rt.constellation, &coded).expect("validated config");

    let n_tx = cfg.scheme.n_tx();
    let realization = match cfg.channel {
        ChannelChoice::Quasistatic => draw_quasi_static(n_tx, cfg.rx, &mut rng),
        ChannelChoice::Bell => draw_bell_doppler(
            n_tx,
            cfg.rx,
            cfg.doppler_hz,
            cfg.symbol_rate_hz,
            rt.slots_per_frame(),
            &mut rng,
        )
        .expect("validated config"),
        ChannelChoice::Awgn => {
            ChannelRealization::QuasiStatic(ChannelGains::unity(n_tx, cfg.rx))
        }
    };

    // Transmit, receive, combine back to one decoupled estimate per
    // symbol. The 1/sqrt(n_tx) transmit scale is undone after combining,
    // which puts the effective noise variance at
    // n_tx * equiv_gain * (2 * sigma^2 per dimension).
    let sigma2_dim = noise.variance_per_dim();
    let combined: Vec<CombinedSymbol> = match cfg.scheme.stbc() {
        Some(scheme) => {
            let spb = scheme.symbols_per_block();
            let slots = scheme.slots_per_block();
            let mut out = Vec::with_capacity(rt.symbols_per_frame);
            for (block_idx, block) in symbols.chunks_exact(spb).enumerate() {
                let gains = realization.at_slot(block_idx * slots).clone();
                let tx = stbc_encode(scheme, block).expect("block size fixed");
                let mut rx: Vec<Vec<Complex64>> = Vec::with_capacity(slots);
                for row in &tx {
                    let slot: Vec<Complex64> = (0..cfg.rx)
                        .map(|j| (0..n_tx).map(|i| gains.gain(i, j) * row[i]).sum())
                        .collect();
                    rx.push(add_awgn(&slot, noise, &mut rng));
                }
                let mut symbols_out =
                    stbc_combine(scheme, &rx, &gains).expect("dimensions fixed");
                let undo = (n_tx as f64).sqrt();
                for s in &mut symbols_out {
                    s.estimate *= undo;
                }
                out.extend(symbols_out);
            }
            out
        }
        None => {
            // Single-antenna path with maximum-ratio combining over rx.
            let mut out = Vec::with_capacity(rt.symbols_per_frame);
            for (t, &s) in symbols.iter().enumerate() {
                let gains = realization.at_slot(t);
                let clean: Vec<Complex64> = (0..cfg.rx).map(|j| gains.gain(0, j) * s).collect();
                let rx = add_awgn(&clean, noise, &mut rng);
                let estimate: Complex64 = rx
                    .iter()
                    .zip(0..cfg.rx)
                    .map(|(r, j)| r * gains.gain(0, j).conj())
                    .sum();
                out.push(CombinedSymbol {
                    estimate,
                    equiv_gain: gains.sum_abs2(),
                });
            }
            out
        }
    };

    let noise_scale = n_tx as f64;
    let decided: Vec<u8> = match (&rt.codec, cfg.demap) {
        (Some(codec), demap) => {
            let mut llrs = Vec::with_capacity(rt.symbols_per_frame * 4);
            match demap {
                DemapChoice::Soft => {
                    for s in &combined {
                        let var =
                            (noise_scale * s.equiv_gain * 2.0 * sigma2_dim).max(NOISELESS_VAR_FLOOR);
                        llrs.extend(
                            demap_soft(&rt.constellation, s.estimate, s.equiv_gain, var)
                                .expect("positive variance"),
                        );
                    }
                }
                DemapChoice::Hard => {
                    for s in &combined {
                        let label = demap_hard(&rt.constellation, s.estimate, s.equiv_gain);
                        for b in Constellation::label_bits(label) {
                            llrs.push(if b == 0 { 2.0 } else { -2.0 });
                        }
                    }
                }
            }
            codec.decode(&llrs).expect("validated config").info_bits
        }
        (None, _) => {
            let mut bits = Vec::with_capacity(rt.info_bits);
            for s in &combined {
                let label = demap_hard(&rt.constellation, s.estimate, s.equiv_gain);
                bits.extend(Constellation::label_bits(label));
            }
            bits
        }
    };

    let bit_errors = info
        .iter()
        .zip(&decided)
        .filter(|(a, b)| a != b)
        .count() as u64;
    FrameOutcome {
        bit_errors,
        frame_error: bit_errors > 0,
    }
}

/// Simulates one Eb/N0 point until `min_errors` bit errors or
/// `max_frames` frames, whichever comes first (checked per batch).
/// Results are bit-identical for any worker count.
pub fn run_point(cfg: &SimConfig, ebn0_db: f64, workers: usize) -> Result<BerRecord> {
    let rt = Runtime::build(cfg)?;
    let snr = ebn0_to_snr(ebn0_db, cfg.code_rate(), 4.0, cfg.scheme.stbc_rate());
    run_point_inner(&rt, ebn0_db, snr, workers)
}

fn run_point_inner(rt: &Runtime, ebn0_db: f64, snr: f64, workers: usize) -> Result<BerRecord> {
    let noise = NoiseSpec::from_snr_linear(snr)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;

    let start = Instant::now();
    let mut frames = 0u64;
    let mut bit_errors = 0u64;
    let mut frame_errors = 0u64;
    while bit_errors < rt.cfg.min_errors && frames < rt.cfg.max_frames {
        let batch = BATCH_FRAMES.min(rt.cfg.max_frames - frames);
        let outcomes: Vec<FrameOutcome> = pool.install(|| {
            (frames..frames + batch)
                .into_par_iter()
                .map(|i| simulate_frame(rt, &noise, i))
                .collect()
        });
        for o in outcomes {
            bit_errors += o.bit_errors;
            frame_errors += u64::from(o.frame_error);
        }
        frames += batch;
    }

    let bits = frames * rt.info_bits as u64;
    Ok(BerRecord {
        ebn0_db,
        snr_db: 10.0 * snr.log10(),
        frames,
        bits,
        bit_errors,
        frame_errors,
        ber: bit_errors as f64 / bits as f64,
        fer: frame_errors as f64 / frames as f64,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every grid point in order, writing one CSV row per record as it
/// completes (flushed, so partial results survive a crash).
pub fn sweep<W: Write>(cfg: &SimConfig, workers: usize, out: &mut W) -> Result<Vec<BerRecord>> {
    let rt = Runtime::build(cfg)?;
    writeln!(out, "{CSV_HEADER}")?;
    out.flush()?;
    let mut records = Vec::with_capacity(cfg.ebn0_db.len());
    for &ebn0_db in &cfg.ebn0_db {
        let snr = ebn0_to_snr(ebn0_db, cfg.code_rate(), 4.0, cfg.scheme.stbc_rate());
        let record = run_point_inner(&rt, ebn0_db, snr, workers)?;
        writeln!(out, "{}", record.csv_line())?;
        out.flush()?;
        eprintln!(
            "Eb/N0 {:>5.1} dB: ber {:.3e} fer {:.3e} ({} errors / {} bits, {} frames, {:.1} s)",
            ebn0_db,
            record.ber,
            record.fer,
            record.bit_errors,
            record.bits,
            record.frames,
            record.wall_seconds
        );
        records.push(record);
    }
    Ok(records)
}
