//! `info`: the resolved configuration and derived grid quantities.

use anyhow::Result;
use serde::Serialize;

use crate::config::Config;

#[derive(Debug, Serialize)]
struct GridInfo {
    n: usize,
    box_length: f64,
    dx: f64,
    dk: f64,
    /// Largest representable wave number per axis.
    k_max: f64,
}

#[derive(Debug, Serialize)]
struct Info<'a> {
    version: &'static str,
    grid: GridInfo,
    config: &'a Config,
}

pub fn run(config: &Config) -> Result<()> {
    let spec = config.spec()?;
    let info = Info {
        version: env!("CARGO_PKG_VERSION"),
        grid: GridInfo {
            n: spec.n_per_axis(),
            box_length: spec.box_length(),
            dx: spec.dx(),
            dk: spec.dk(),
            k_max: ((spec.n_per_axis() - 1) / 2) as f64 * spec.dk(),
        },
        config,
    };
    println!("{}", serde_json::to_string_pretty(&info)?);
    Ok(())
}
