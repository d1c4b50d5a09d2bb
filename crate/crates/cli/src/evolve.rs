//! `evolve`: exact spectral evolution with conservation diagnostics.

use std::fs::File;
use std::io::BufReader;

use anyhow::{Context, Result};
use photonwf::fields::{total_energy, WeberGrid};
use photonwf::grid::Representation;
use photonwf::io::{read_weber, write_flow_csv, write_weber};
use photonwf::photon::{flow_of, normalize_single_photon, photon_number, Recipe};
use photonwf::spectral::{evolve, forward_transform, inverse_transform, transversality_residual};
use serde::Serialize;

use crate::config::{Config, Preset, StateSource};
use crate::output::Output;

#[derive(Debug, Serialize)]
struct Snapshot {
    time: f64,
    file: String,
    energy: f64,
    photon_number: f64,
    transversality_residual: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    grid_n: usize,
    box_length: f64,
    normalized: bool,
    snapshots: Vec<Snapshot>,
    /// Largest `|E(t) − E(t₀)| / E(t₀)`; zero for a zero field.
    energy_drift: f64,
    photon_number_drift: f64,
}

fn initial_field(config: &Config) -> Result<WeberGrid> {
    match config.state_source(Preset::Single)? {
        StateSource::Analytic(state) => {
            let spec = config.spec()?;
            Ok(forward_transform(&state.sample_to_grid(&spec, 0.0)?)?)
        }
        StateSource::File(path) => {
            let file = File::open(&path)
                .with_context(|| format!("opening field file {}", path.display()))?;
            let grid = read_weber(BufReader::new(file))
                .with_context(|| format!("reading field file {}", path.display()))?;
            Ok(match grid.representation {
                Representation::Position => forward_transform(&grid)?,
                Representation::Momentum => grid,
            })
        }
    }
}

fn relative_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return 0.0;
    };
    if first == 0.0 {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    values
        .iter()
        .fold(0.0, |m, v| m.max((v - first).abs() / first.abs()))
}

pub fn run(config: &Config, out: &Output) -> Result<()> {
    let mut field = initial_field(config)?;
    if config.evolve.normalize {
        field = normalize_single_photon(&field).context("normalizing to one photon")?;
    }
    let start = field.time;
    let mut snapshots = Vec::with_capacity(config.evolve.times.len());
    for (i, &t) in config.evolve.times.iter().enumerate() {
        let moved = evolve(&field, t - start)?;
        let position = inverse_transform(&moved)?;
        let name = format!("snapshot_{i:03}.phwf");
        write_weber(&position, out.create(&name)?)?;
        let n = photon_number(&moved)?;
        if config.evolve.write_flow && n > 0.0 {
            write_flow_csv(
                &flow_of(&moved, Recipe::PhiBased)?,
                out.create(&format!("flow_{i:03}.csv"))?,
            )?;
        }
        snapshots.push(Snapshot {
            time: moved.time,
            file: name,
            energy: total_energy(&moved),
            photon_number: n,
            transversality_residual: transversality_residual(&moved)?,
        });
    }
    let energies: Vec<f64> = snapshots.iter().map(|s| s.energy).collect();
    let numbers: Vec<f64> = snapshots.iter().map(|s| s.photon_number).collect();
    let report = Report {
        grid_n: field.spec.n_per_axis(),
        box_length: field.spec.box_length(),
        normalized: config.evolve.normalize,
        energy_drift: relative_drift(&energies),
        photon_number_drift: relative_drift(&numbers),
        snapshots,
    };
    for s in &report.snapshots {
        println!(
            "t = {:>10.4}  energy = {:.12e}  N = {:.6}  transversality = {:.1e}",
            s.time, s.energy, s.photon_number, s.transversality_residual
        );
    }
    println!(
        "energy drift {:.1e}, photon number drift {:.1e}",
        report.energy_drift, report.photon_number_drift
    );
    out.json("evolve_report.json", &report)
}
