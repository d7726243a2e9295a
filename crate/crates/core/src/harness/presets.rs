//! Named simulation presets for one-command reproduction of the headline
//! configurations.

use super::{
    ChannelChoice, DecoderChoice, DemapChoice, InterleaverKind, SchemeChoice, SimConfig,
};
use crate::error::{Error, Result};

pub fn preset_names() -> &'static [&'static str] {
    &[
        "fig2-g2-2x1",
        "fig2-g3-3x2",
        "fig2-block-interleaver",
        "uncoded-awgn-oracle",
    ]
}

/// Resolves a named preset to its configuration.
///
/// The `fig2-*` presets share the headline codec: T = 2048 quadratic
/// interleaver (phi = 13, h = 0), (7,5) constituents, six Max-Log-MAP
/// iterations, 16-QAM, quasi-static Rayleigh fading.
pub fn preset(name: &str) -> Result<SimConfig> {
    let base = SimConfig {
        ebn0_db: (5..=12).map(|x| (2 * x) as f64).collect(), // 10..24 dB
        ..SimConfig::default()
    };
    match name {
        "fig2-g2-2x1" => Ok(SimConfig {
            scheme: SchemeChoice::G2,
            rx: 1,
            ..base
        }),
        "fig2-g3-3x2" => Ok(SimConfig {
            scheme: SchemeChoice::G3,
            rx: 2,
            ebn0_db: (3..=10).map(|x| (2 * x) as f64).collect(), // 6..20 dB
            ..base
        }),
        "fig2-block-interleaver" => Ok(SimConfig {
            scheme: SchemeChoice::G2,
            rx: 1,
            interleaver: InterleaverKind::Block,
            rows: 32,
            ..base
        }),
        "uncoded-awgn-oracle" => Ok(SimConfig {
            scheme: SchemeChoice::None,
            rx: 1,
            coded: false,
            channel: ChannelChoice::Awgn,
            demap: DemapChoice::Hard,
            decoder: DecoderChoice::Maxlog,
            ebn0_db: (0..=7).map(|x| (2 * x) as f64).collect(), // 0..14 dB
            ..base
        }),
        other => Err(Error::invalid(format!(
            "unknown preset '{other}' (expected one of {})",
            preset_names().join(", ")
        ))),
    }
}
