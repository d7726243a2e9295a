//! `scqic` — Eb/N0 sweep driver.
//!
//! Configuration is resolved in three layers: a named preset (lowest),
//! then a JSON config file, then explicit command-line flags (highest).
//! Exit codes: 0 success, 2 configuration error, 3 I/O error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use scqic_core::harness::{
    ChannelChoice, DecoderChoice, DemapChoice, InterleaverKind, SchemeChoice, SimConfig,
};
use scqic_core::{preset, preset_names, sweep, Error};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scqic", version, about = "BER/FER sweeps for SC-QIC space-time coded 16-QAM links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an Eb/N0 sweep and emit one CSV row per grid point.
    Run(Box<RunArgs>),
    /// List the named presets.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    G2,
    G3,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum InterleaverArg {
    Quadratic,
    Block,
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Map,
    Maxlog,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Quasistatic,
    Bell,
    Awgn,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemapArg {
    Soft,
    Hard,
}

#[derive(Args)]
struct RunArgs {
    /// Start from a named preset (see `scqic presets`).
    #[arg(long)]
    preset: Option<String>,
    /// JSON config file mirroring the SimConfig fields.
    #[arg(long)]
    config: Option<String>,
    /// Space-time scheme.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Receive antenna count.
    #[arg(long)]
    rx: Option<usize>,
    /// Interleaver kind.
    #[arg(long, value_enum)]
    interleaver: Option<InterleaverArg>,
    /// Odd multiplier of the quadratic interleaver.
    #[arg(long)]
    phi: Option<u64>,
    /// Offset h of the quadratic interleaver.
    #[arg(long)]
    offset: Option<u64>,
    /// Rows of the block interleaver.
    #[arg(long)]
    rows: Option<usize>,
    /// Interleaver size T (coded frame): 1024 or 2048 are the named
    /// sizes; any power of two works for the quadratic kind.
    #[arg(long)]
    frame_size: Option<usize>,
    /// Constituent decoding algorithm.
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    /// Decoder iterations.
    #[arg(long)]
    iterations: Option<usize>,
    /// Demapper mode.
    #[arg(long, value_enum)]
    demap: Option<DemapArg>,
    /// Channel model.
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
    /// Doppler spread in Hz (bell channel).
    #[arg(long)]
    doppler: Option<f64>,
    /// Symbol rate in Hz (bell channel).
    #[arg(long)]
    symbol_rate: Option<f64>,
    /// Eb/N0 grid as start:step:stop (dB), or a single value.
    #[arg(long)]
    ebn0: Option<String>,
    /// Stop a point after this many bit errors.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Hard cap on frames per point.
    #[arg(long)]
    max_frames: Option<u64>,
    /// Master seed for the deterministic per-frame streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<String>,
    /// Disable coding (uncoded 16-QAM symbols).
    #[arg(long)]
    uncoded: bool,
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let bad = |m: String| Error::Invalid(m);
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => {
            let v: f64 = single
                .parse()
                .map_err(|_| bad(format!("bad Eb/N0 value '{single}'")))?;
            Ok(vec![v])
        }
        [start, step, stop] => {
            let s: f64 = start.parse().map_err(|_| bad(format!("bad start '{start}'")))?;
            let d: f64 = step.parse().map_err(|_| bad(format!("bad step '{step}'")))?;
            let e: f64 = stop.parse().map_err(|_| bad(format!("bad stop '{stop}'")))?;
            if d <= 0.0 {
                return Err(bad("step must be positive".into()));
            }
            if e < s {
                return Err(bad("stop must not be below start".into()));
            }
            let mut grid = Vec::new();
            let mut k = 0u32;
            loop {
                let v = s + d * k as f64;
                if v > e + 1e-9 {
                    break;
                }
                grid.push(v);
                k += 1;
            }
            Ok(grid)
        }
        _ => Err(bad(format!("expected start:step:stop, got '{text}'"))),
    }
}

fn resolve_config(args: &RunArgs) -> Result<SimConfig, Error> {
    let mut cfg = match &args.preset {
        Some(name) => preset(name)?,
        None => SimConfig::default(),
    };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        cfg = serde_json::from_str(&text)?;
    }
    if let Some(s) = args.scheme {
        cfg.scheme = match s {
            SchemeArg::G2 => SchemeChoice::G2,
            SchemeArg::G3 => SchemeChoice::G3,
            SchemeArg::None => SchemeChoice::None,
        };
    }
    if let Some(rx) = args.rx {
        cfg.rx = rx;
    }
    if let Some(i) = args.interleaver {
        cfg.interleaver = match i {
            InterleaverArg::Quadratic => InterleaverKind::Quadratic,
            InterleaverArg::Block => InterleaverKind::Block,
            InterleaverArg::Identity => InterleaverKind::Identity,
        };
    }
    if let Some(phi) = args.phi {
        cfg.phi = phi;
    }
    if let Some(h) = args.offset {
        cfg.offset = h;
    }
    if let Some(rows) = args.rows {
        cfg.rows = rows;
    }
    if let Some(t) = args.frame_size {
        cfg.frame_size = t;
    }
    if let Some(d) = args.decoder {
        cfg.decoder = match d {
            DecoderArg::Map => DecoderChoice::Map,
            DecoderArg::Maxlog => DecoderChoice::Maxlog,
        };
    }
    if let Some(it) = args.iterations {
        cfg.iterations = it;
    }
    if let Some(d) = args.demap {
        cfg.demap = match d {
            DemapArg::Soft => DemapChoice::Soft,
            DemapArg::Hard => DemapChoice::Hard,
        };
    }
    if let Some(ch) = args.channel {
        cfg.channel = match ch {
            ChannelArg::Quasistatic => ChannelChoice::Quasistatic,
            ChannelArg::Bell => ChannelChoice::Bell,
            ChannelArg::Awgn => ChannelChoice::Awgn,
        };
    }
    if let Some(fd) = args.doppler {
        cfg.doppler_hz = fd;
    }
    if let Some(fs) = args.symbol_rate {
        cfg.symbol_rate_hz = fs;
    }
    if let Some(grid) = &args.ebn0 {
        cfg.ebn0_db = parse_grid(grid)?;
    }
    if let Some(n) = args.min_errors {
        cfg.min_errors = n;
    }
    if let Some(n) = args.max_frames {
        cfg.max_frames = n;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.uncoded {
        cfg.coded = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let cfg = resolve_config(args)?;
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match &args.out {
        Some(path) => {
            let file = File::create(path)?;
            let mut out = BufWriter::new(file);
            sweep(&cfg, workers, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            sweep(&cfg, workers, &mut out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Presets => {
            for name in preset_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(Error::Io(e)) => {
                eprintln!("error: i/o: {e}");
                ExitCode::from(3)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
