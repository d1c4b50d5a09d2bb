//! `doubleslit`: photon density frames of two crossing source fans.

use anyhow::Result;
use photonwf::doubleslit::{analyze_fringes, FringeAnalysis};
use photonwf::photon::{flow_of, Recipe};
use photonwf::spectral::{evolve, forward_transform};
use serde::Serialize;

use crate::config::Config;
use crate::output::Output;

#[derive(Debug, Serialize)]
struct Frame {
    time: f64,
    file: String,
    fringes: FringeAnalysis,
}

#[derive(Debug, Serialize)]
struct Report {
    sources: usize,
    expected_spacing: f64,
    cell: f64,
    frames: Vec<Frame>,
}

pub fn run(config: &Config, out: &Output) -> Result<()> {
    let units = config.units()?;
    let geometry = config.doubleslit.geometry;
    let spec = geometry.spec(units)?;
    let state = geometry.build(units)?;
    let initial = forward_transform(&state.sample_to_grid(&spec, 0.0)?)?;
    let n = spec.n_per_axis();
    let mut frames = Vec::new();
    for (i, &t) in config.doubleslit.times.iter().enumerate() {
        let flow = flow_of(&evolve(&initial, t)?, Recipe::PhiBased)?;
        let name = format!("frames/rho_{i:03}.csv");
        let mut w = csv::Writer::from_writer(out.create(&name)?);
        w.write_record(["x", "z", "rho"])?;
        for iz in 0..n {
            for ix in 0..n {
                let idx = spec.flat_index(ix, 0, iz);
                let r = spec.position(idx);
                w.write_record([r.x, r.z, flow.rho[idx]].iter().map(|v| v.to_string()))?;
            }
        }
        w.flush()?;
        let line: Vec<f64> = (0..n)
            .map(|ix| flow.rho[spec.flat_index(ix, 0, 0)])
            .collect();
        let fringes = analyze_fringes(&line, geometry.box_length, geometry.envelope_modes());
        println!(
            "t = {t:>8.3}  fringe spacing {}  visibility {:.3}",
            fringes
                .spacing
                .map_or("none".to_string(), |s| format!("{s:.4}")),
            fringes.visibility
        );
        frames.push(Frame {
            time: t,
            file: name,
            fringes,
        });
    }
    println!(
        "expected spacing {:.4} (grid cell {:.4})",
        geometry.expected_spacing(),
        spec.dx()
    );
    out.json(
        "doubleslit_report.json",
        &Report {
            sources: geometry.sources,
            expected_spacing: geometry.expected_spacing(),
            cell: spec.dx(),
            frames,
        },
    )
}
