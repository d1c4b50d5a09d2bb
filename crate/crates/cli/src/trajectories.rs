//! `trajectories`: Bohmian ensembles and the frame-consistency report.

use anyhow::{bail, Context, Result};
use photonwf::bohm::{
    frame_consistency_check, integrate_ensemble, rejection_sample, FrameCheck, StepControl,
    Trajectory,
};
use photonwf::io::write_trajectories_csv;
use photonwf::lorentz::boost_plane_wave;
use photonwf::photon::Recipe;
use photonwf::planewave::{AmplitudeKind, PlaneWaveSuperposition};
use photonwf::vecmath::Vec3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Config, Frame, Preset};
use crate::output::Output;

/// Allowed excess of a sampled speed over `c`.
const SPEED_SLACK: f64 = 1e-12;

#[derive(Debug, Serialize)]
struct Summary {
    frame: String,
    guidance: Recipe,
    seed: u64,
    count: usize,
    halted_at_node: usize,
    max_speed_over_c: f64,
    mean_displacement: [f64; 3],
    frame_checks: Option<FrameSummary>,
}

#[derive(Debug, Serialize)]
struct FrameSummary {
    max_mismatch: f64,
    min_mismatch: f64,
    nodes: usize,
    checks: Vec<FrameCheck>,
}

fn default_extent(state: &PlaneWaveSuperposition) -> [f64; 3] {
    let k_min = state
        .components
        .iter()
        .map(|w| w.wave_number())
        .fold(f64::INFINITY, f64::min);
    let side = if k_min.is_finite() {
        2.0 * std::f64::consts::PI / k_min
    } else {
        1.0
    };
    [side; 3]
}

fn start_points(config: &Config, state: &PlaneWaveSuperposition, seed: u64) -> Result<Vec<Vec3>> {
    let tc = &config.trajectories;
    if let Some(list) = &tc.starts {
        return Ok(list.iter().map(|p| Vec3::from(*p)).collect());
    }
    if state.is_empty() {
        bail!("cannot sample start points from a zero state; give `trajectories.starts`");
    }
    let flow = match tc.guidance {
        Recipe::PhiBased => state.phi_flow(),
        Recipe::WeberBased => state.energy_flow(),
    };
    let bound = match tc.guidance {
        Recipe::PhiBased => state.density_bound(AmplitudeKind::Phi),
        Recipe::WeberBased => {
            state.density_bound(AmplitudeKind::Weber) / (8.0 * std::f64::consts::PI)
        }
    };
    let extent = Vec3::from(tc.sample_extent.unwrap_or_else(|| default_extent(state)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rejection_sample(
        |x: &Vec3| flow.density(x, tc.t0),
        bound,
        &Vec3::from(tc.sample_origin),
        &extent,
        tc.count,
        &mut rng,
    )?)
}

pub fn run(config: &Config, seed: u64, out: &Output) -> Result<()> {
    let tc = &config.trajectories;
    let lab = config.analytic_state(Preset::Pair, "trajectories")?;
    let boost = config.boost()?;
    let state = match (tc.frame, &boost) {
        (Frame::Lab, _) => lab.clone(),
        (Frame::Boosted, Some(b)) => boost_plane_wave(&lab, b)?,
        (Frame::Boosted, None) => {
            bail!("config field `trajectories.frame`: `boosted` needs a `boost` section")
        }
    };
    let starts = start_points(config, &state, seed)?;
    let control = StepControl {
        step: tc.step,
        node_floor: tc.node_floor,
    };
    let trajectories: Vec<Trajectory> =
        integrate_ensemble(&state, &starts, tc.t0, tc.t1, tc.guidance, &control)
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.with_context(|| format!("trajectory {i} from {:?}", starts[i].as_slice()))
            })
            .collect::<Result<_>>()?;

    let c = state.units.c;
    let max_speed = trajectories
        .iter()
        .fold(0.0f64, |m, t| m.max(t.max_speed()))
        / c;
    if max_speed > 1.0 + SPEED_SLACK {
        bail!("guidance speed {max_speed} c exceeds the speed of light");
    }
    let halted = trajectories.iter().filter(|t| t.halted_at_node).count();
    let mut mean = Vec3::zeros();
    for t in &trajectories {
        mean += Vec3::from(t.last().x) - Vec3::from(t.samples[0].x);
    }
    if !trajectories.is_empty() {
        mean /= trajectories.len() as f64;
    }
    write_trajectories_csv(&trajectories, out.create("trajectories.csv")?)?;

    // The check always starts from the lab state, at the lab-frame events
    // given by the start points at t0.
    let frame_checks = boost.as_ref().map(|b| {
        let mut nodes = 0;
        let checks: Vec<FrameCheck> = starts
            .iter()
            .filter_map(
                |x| match frame_consistency_check(&lab, b, x, tc.t0, tc.guidance) {
                    Ok(fc) => Some(fc),
                    Err(_) => {
                        nodes += 1;
                        None
                    }
                },
            )
            .collect();
        let max = checks.iter().fold(0.0f64, |m, f| m.max(f.mismatch));
        let min = checks.iter().fold(f64::INFINITY, |m, f| m.min(f.mismatch));
        FrameSummary {
            max_mismatch: max,
            min_mismatch: if checks.is_empty() { 0.0 } else { min },
            nodes,
            checks,
        }
    });

    println!(
        "{} trajectories ({:?}, {} frame), {} stopped at nodes, max |v|/c = {:.12}",
        trajectories.len(),
        tc.guidance,
        state.frame,
        halted,
        max_speed
    );
    if let Some(fs) = &frame_checks {
        println!(
            "frame consistency: mismatch between {:.3e} and {:.3e} (units of length/time)",
            fs.min_mismatch, fs.max_mismatch
        );
    }
    out.json(
        "trajectories_summary.json",
        &Summary {
            frame: state.frame.clone(),
            guidance: tc.guidance,
            seed,
            count: trajectories.len(),
            halted_at_node: halted,
            max_speed_over_c: max_speed,
            mean_displacement: [mean.x, mean.y, mean.z],
            frame_checks,
        },
    )
}
