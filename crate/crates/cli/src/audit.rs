//! `boost-audit`: four-current audits of the single wave and the
//! counter-propagating pair under boosts along and across the propagation
//! axis, plus the interference profile of the crossed case.

use anyhow::Result;
use photonwf::lorentz::{
    audit_four_vector, audit_weber_flow, default_sample_points, perpendicular_pair_density, Boost,
    FourVectorAudit, Verdict,
};
use photonwf::planewave::PlaneWaveSuperposition;
use photonwf::vecmath::Vec3;
use serde::Serialize;

use crate::config::{Config, Preset};
use crate::output::Output;

#[derive(Debug, Serialize)]
struct Scenario {
    name: &'static str,
    boost_axis: [f64; 3],
    phi_based: FourVectorAudit,
    weber_based: FourVectorAudit,
    /// Closed-form boosted photon density at each sample point, for the
    /// counter-propagating pair under a perpendicular boost.
    closed_form_rho: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct Report {
    u_over_c: f64,
    k_r: f64,
    k_l: f64,
    intensity: f64,
    tolerance: f64,
    scenarios: Vec<Scenario>,
}

fn mark(v: Verdict) -> &'static str {
    match v {
        Verdict::FourVectorConsistent => "pass",
        Verdict::Violated => "FAIL",
    }
}

pub fn run(config: &Config, tolerance: f64, out: &Output) -> Result<()> {
    let units = config.units()?;
    let single = config.preset_state(Preset::Single, units)?;
    let pair = config.preset_state(Preset::Pair, units)?;
    let beta = config.audit.u;
    let s = &config.state;
    let cases: [(&'static str, &PlaneWaveSuperposition, Vec3); 4] = [
        ("single wave, boost along z", &single, Vec3::z()),
        ("single wave, boost along x", &single, Vec3::x()),
        ("two waves, boost along z", &pair, Vec3::z()),
        ("two waves, boost along x", &pair, Vec3::x()),
    ];
    let mut scenarios = Vec::with_capacity(4);
    for (i, (name, state, axis)) in cases.into_iter().enumerate() {
        let boost = Boost::along(axis, beta, &units)?;
        let points = default_sample_points(state, &boost)?;
        let phi_based = audit_four_vector(state, &boost, &points, tolerance)?;
        let weber_based = audit_weber_flow(state, &boost, &points, tolerance)?;
        let closed_form_rho = (i == 3).then(|| {
            points
                .iter()
                .map(|(x, t)| {
                    perpendicular_pair_density(s.k_r, s.k_l, s.intensity, &boost, &units, x, *t)
                })
                .collect()
        });
        scenarios.push(Scenario {
            name,
            boost_axis: [axis.x, axis.y, axis.z],
            phi_based,
            weber_based,
            closed_form_rho,
        });
    }

    println!(
        "{:<28} {:>10} {:>12} {:>10} {:>12}",
        "scenario", "phi", "mismatch", "weber", "mismatch"
    );
    for sc in &scenarios {
        println!(
            "{:<28} {:>10} {:>12.3e} {:>10} {:>12.3e}",
            sc.name,
            mark(sc.phi_based.verdict),
            sc.phi_based.max_mismatch,
            mark(sc.weber_based.verdict),
            sc.weber_based.max_mismatch
        );
    }

    let crossed = &scenarios[3];
    let mut w = csv::Writer::from_writer(out.create("interference.csv")?);
    w.write_record([
        "s",
        "x",
        "y",
        "z",
        "t",
        "rho_boosted",
        "rho_fourvector",
        "rho_closed_form",
    ])?;
    let closed = crossed.closed_form_rho.as_deref().unwrap_or_default();
    for (p, rho_closed) in crossed.phi_based.points.iter().zip(closed) {
        let s = Vec3::from(p.position).norm();
        let row = [
            s,
            p.position[0],
            p.position[1],
            p.position[2],
            p.time,
            p.rho_boosted,
            p.rho_transformed,
            *rho_closed,
        ];
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    let (lo, hi) = crossed
        .phi_based
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.rho_boosted), hi.max(p.rho_boosted))
        });
    println!("crossed-boost photon density ranges over [{lo:.4}, {hi:.4}]");

    out.json(
        "audit_report.json",
        &Report {
            u_over_c: beta,
            k_r: s.k_r,
            k_l: s.k_l,
            intensity: s.intensity,
            tolerance,
            scenarios,
        },
    )
}
