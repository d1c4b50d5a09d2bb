//! Good's photon wave function and the probability functionals built on it.
//!
//! In momentum space `φ̃(k) = F̃(k) / √(8πħ|k|c)`, which strips the energy
//! weighting from the Weber vector so that `Σ φ̃†φ̃ Δk³` counts photons.
//! The position-space `φ` is obtained with the inverse transform only; it
//! depends on `E` and `B` over the whole box, not just at the same point.
//!
//! Two density/current recipes are provided:
//!
//! * `PhiBased`: `ρ = φ†φ`, `J = c φ† s φ = −ic φ*×φ`;
//! * `WeberBased`: `ρ = ρ_E / ℰ`, `J = S / ℰ`, where `ℰ` is the total
//!   field energy in the box, so `ρ` integrates to one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{
    energy_density, poynting_vector, total_energy, vector_at, zero_components, ComplexComponents,
    WeberGrid,
};
use crate::grid::{GridSpec, KGrid, Representation};
use crate::spectral::{
    evolve, forward_components, inverse_components, inverse_transform, transversality_residual_of,
    TRANSVERSE_TOLERANCE,
};
use crate::vecmath::{norm_sqr, spin_current, CVec3, Vec3};

/// Largest admissible fraction of `Σ|F̃|²` sitting in the `k = 0` mode.
pub const DC_FRACTION_TOLERANCE: f64 = 1e-12;

/// How far `N` may stray from one before densities are flagged as number
/// densities rather than probabilities.
pub const SINGLE_PHOTON_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    PhiBased,
    WeberBased,
}

#[derive(Debug, Clone)]
pub struct PhotonWaveFunction {
    pub spec: GridSpec,
    pub representation: Representation,
    pub time: f64,
    pub data: ComplexComponents,
}

impl PhotonWaveFunction {
    pub fn at(&self, i: usize) -> CVec3 {
        vector_at(&self.data, i)
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_position(&self) -> PhotonWaveFunction {
        match self.representation {
            Representation::Position => self.clone(),
            Representation::Momentum => {
                let mut out = self.clone();
                inverse_components(&out.spec, &mut out.data);
                out.representation = Representation::Position;
                out
            }
        }
    }

    pub fn to_momentum(&self) -> PhotonWaveFunction {
        match self.representation {
            Representation::Momentum => self.clone(),
            Representation::Position => {
                let mut out = self.clone();
                forward_components(&out.spec, &mut out.data);
                out.representation = Representation::Momentum;
                out
            }
        }
    }

    /// `Σ φ†φ` times the cell or mode volume of the current representation.
    pub fn norm_sqr(&self) -> f64 {
        let weight = match self.representation {
            Representation::Position => self.spec.cell_volume(),
            Representation::Momentum => self.spec.mode_volume(),
        };
        (0..self.len()).map(|i| norm_sqr(&self.at(i))).sum::<f64>() * weight
    }
}

/// Fraction of `Σ|F̃|²` carried by the `k = 0` mode; zero for a zero field.
pub fn dc_fraction(weber: &WeberGrid) -> Result<f64> {
    weber.require(Representation::Momentum)?;
    let total: f64 = (0..weber.len()).map(|i| norm_sqr(&weber.at(i))).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(norm_sqr(&weber.at(0)) / total)
}

fn check_photonlike(weber: &WeberGrid) -> Result<()> {
    let fraction = dc_fraction(weber)?;
    if fraction > DC_FRACTION_TOLERANCE {
        return Err(Error::DcContent {
            fraction,
            tolerance: DC_FRACTION_TOLERANCE,
        });
    }
    Ok(())
}

/// `1 / √(8πħ|k|c)` per mode, zero at `k = 0`.
fn mode_weights(spec: &GridSpec) -> Vec<f64> {
    let kgrid = KGrid::new(*spec);
    let (hbar, c) = (spec.hbar(), spec.c());
    kgrid
        .magnitudes()
        .iter()
        .map(|&k| {
            if k == 0.0 {
                0.0
            } else {
                1.0 / (8.0 * PI * hbar * k * c).sqrt()
            }
        })
        .collect()
}

pub fn photon_wavefunction(weber: &WeberGrid) -> Result<PhotonWaveFunction> {
    weber.require(Representation::Momentum)?;
    let residual = transversality_residual_of(&weber.spec, &weber.data);
    if residual > TRANSVERSE_TOLERANCE {
        return Err(Error::NotTransverse {
            residual,
            tolerance: TRANSVERSE_TOLERANCE,
        });
    }
    check_photonlike(weber)?;
    let weights = mode_weights(&weber.spec);
    let data = std::array::from_fn(|a| {
        weber.data[a]
            .iter()
            .zip(&weights)
            .map(|(z, w)| z * w)
            .collect()
    });
    Ok(PhotonWaveFunction {
        spec: weber.spec,
        representation: Representation::Momentum,
        time: weber.time,
        data,
    })
}

/// `N = (1/8π) Σ_{k≠0} F̃†F̃ / (ħ|k|c) Δk³`.
pub fn photon_number(weber: &WeberGrid) -> Result<f64> {
    weber.require(Representation::Momentum)?;
    check_photonlike(weber)?;
    let weights = mode_weights(&weber.spec);
    let sum: f64 = (0..weber.len())
        .map(|i| norm_sqr(&weber.at(i)) * weights[i] * weights[i])
        .sum();
    Ok(sum * weber.spec.mode_volume())
}

/// Rescales the field so that it holds exactly one photon.
pub fn normalize_single_photon(weber: &WeberGrid) -> Result<WeberGrid> {
    let n = photon_number(weber)?;
    if n <= 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(weber.scaled(1.0 / n.sqrt()))
}

/// Per-mode photon density `φ̃†φ̃`.
#[derive(Debug, Clone)]
pub struct MomentumDensity {
    pub values: Vec<f64>,
    /// `Σ values Δk³`, the photon number.
    pub total: f64,
    /// True when the state is normalized to one photon, so the values are
    /// probabilities; otherwise they are number densities.
    pub is_probability: bool,
}

pub fn momentum_probability_density(weber: &WeberGrid) -> Result<MomentumDensity> {
    let phi = photon_wavefunction(weber)?;
    let values: Vec<f64> = (0..phi.len()).map(|i| norm_sqr(&phi.at(i))).collect();
    let total = values.iter().sum::<f64>() * weber.spec.mode_volume();
    Ok(MomentumDensity {
        values,
        total,
        is_probability: (total - 1.0).abs() <= SINGLE_PHOTON_TOLERANCE,
    })
}

/// Probability density and flux on the grid nodes.
#[derive(Debug, Clone)]
pub struct ProbabilityFlow {
    pub spec: GridSpec,
    pub time: f64,
    pub recipe: Recipe,
    pub rho: Vec<f64>,
    pub current: Vec<Vec3>,
}

impl ProbabilityFlow {
    pub fn total(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.spec.cell_volume()
    }
}

pub fn probability_flow(phi: &PhotonWaveFunction) -> Result<ProbabilityFlow> {
    if phi.representation != Representation::Position {
        return Err(Error::WrongRepresentation {
            expected: Representation::Position,
            found: phi.representation,
        });
    }
    let c = phi.spec.c();
    let (rho, current) = (0..phi.len())
        .map(|i| {
            let v = phi.at(i);
            (norm_sqr(&v), spin_current(&v) * c)
        })
        .unzip();
    Ok(ProbabilityFlow {
        spec: phi.spec,
        time: phi.time,
        recipe: Recipe::PhiBased,
        rho,
        current,
    })
}

pub fn weber_probability_flow(weber: &WeberGrid) -> Result<ProbabilityFlow> {
    let energy = total_energy(weber);
    if energy <= 0.0 {
        return Err(Error::ZeroField);
    }
    let rho = energy_density(weber)?
        .into_iter()
        .map(|r| r / energy)
        .collect();
    let current = poynting_vector(weber)?
        .into_iter()
        .map(|s| s / energy)
        .collect();
    Ok(ProbabilityFlow {
        spec: weber.spec,
        time: weber.time,
        recipe: Recipe::WeberBased,
        rho,
        current,
    })
}

/// Flow of a momentum-space Weber state under the chosen recipe.
pub fn flow_of(weber: &WeberGrid, recipe: Recipe) -> Result<ProbabilityFlow> {
    match recipe {
        Recipe::PhiBased => probability_flow(&photon_wavefunction(weber)?.to_position()),
        Recipe::WeberBased => weber_probability_flow(&inverse_transform(weber)?),
    }
}

/// Spectral divergence of a real vector field sampled on the grid.
pub fn divergence(spec: &GridSpec, field: &[Vec3]) -> Vec<f64> {
    let mut data = zero_components(spec.len());
    for (i, v) in field.iter().enumerate() {
        for a in 0..3 {
            data[a][i] = Complex64::new(v[a], 0.0);
        }
    }
    forward_components(spec, &mut data);
    let kgrid = KGrid::new(*spec);
    let mut div = vec![Complex64::new(0.0, 0.0); spec.len()];
    for (i, k) in kgrid.wave_vectors().iter().enumerate() {
        div[i] = (0..3).map(|a| data[a][i] * Complex64::new(0.0, k[a])).sum();
    }
    let mut out = [
        div,
        vec![Complex64::new(0.0, 0.0); spec.len()],
        vec![Complex64::new(0.0, 0.0); spec.len()],
    ];
    inverse_components(spec, &mut out);
    out[0].iter().map(|z| z.re).collect()
}

/// Max-norm of `(ρ(t+dt) − ρ(t−dt)) / 2dt + ∇·J(t)`.
pub fn continuity_residual(weber: &WeberGrid, recipe: Recipe, dt_probe: f64) -> Result<f64> {
    let now = flow_of(weber, recipe)?;
    let ahead = flow_of(&evolve(weber, dt_probe)?, recipe)?;
    let behind = flow_of(&evolve(weber, -dt_probe)?, recipe)?;
    let div = divergence(&weber.spec, &now.current);
    Ok((0..weber.len())
        .map(|i| ((ahead.rho[i] - behind.rho[i]) / (2.0 * dt_probe) + div[i]).abs())
        .fold(0.0, f64::max))
}
