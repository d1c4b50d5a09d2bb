//! Lorentz boosts of plane-wave states and the four-current audit.
//!
//! A [`Boost`] describes an observer moving with velocity `u n̂` relative to
//! the frame a state is written in. Events map as
//!
//! ```text
//! x'∥ = γ(x∥ − u t),   x'⊥ = x⊥,   t' = γ(t − u x∥ / c²)
//! ```
//!
//! and the Weber vector as `F'∥ = F∥`, `F'⊥ = γ(F − i β×F)⊥` with
//! `β = u n̂ / c`. Plane waves stay plane waves: the wave four-vector
//! `(ω/c, k)` boosts like an event and the spacetime phase `k·x − ωt` is
//! invariant, so each component is rebuilt from its boosted wave vector and
//! its transformed amplitude.
//!
//! The audit compares two ways of getting the flow seen by the moving
//! observer: evaluate the flow of the boosted state, or Lorentz transform
//! `(cρ, J)` of the original state at the same event.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Units;
use crate::photon::Recipe;
use crate::planewave::{CircularPlaneWave, FlowExpansion, PlaneWaveSuperposition};
use crate::vecmath::{complexify, hdot, to_array, CVec3, Vec3, I};

/// Default verdict threshold on the relative route mismatch.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

/// Energy that divides `ρ_E` and `S` in the Weber-based flow of an
/// unbounded plane-wave state. It is the same constant in every frame.
pub const WEBER_ENERGY_SCALE: f64 = 1.0;

/// Points in the default audit sweep.
pub const DEFAULT_SWEEP_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boost {
    direction: Vec3,
    speed: f64,
    c: f64,
    gamma: f64,
}

impl Boost {
    pub fn new(direction: Vec3, speed: f64, c: f64) -> Result<Self> {
        let norm = direction.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidBoost(format!(
                "direction must be finite and nonzero, got {:?}",
                to_array(&direction)
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidBoost(format!("c must be positive, got {c}")));
        }
        if !(speed.is_finite() && (0.0..c).contains(&speed)) {
            return Err(Error::InvalidBoost(format!(
                "speed must satisfy 0 <= u < c = {c}, got {speed}"
            )));
        }
        let beta = speed / c;
        Ok(Self {
            direction: direction / norm,
            speed,
            c,
            gamma: 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt(),
        })
    }

    /// Boost along `+x̂` or `+ẑ` etc. at speed `beta·c`.
    pub fn along(direction: Vec3, beta: f64, units: &Units) -> Result<Self> {
        Self::new(direction, beta * units.c, units.c)
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.speed / self.c
    }

    pub fn velocity(&self) -> Vec3 {
        self.direction * self.speed
    }

    /// The boost back to the original frame.
    pub fn inverse(&self) -> Self {
        Self {
            direction: -self.direction,
            ..*self
        }
    }

    pub fn transform_event(&self, x: &Vec3, t: f64) -> (Vec3, f64) {
        let n = self.direction;
        let par = x.dot(&n);
        let x_new = x + n * ((self.gamma - 1.0) * par - self.gamma * self.speed * t);
        let t_new = self.gamma * (t - self.speed * par / (self.c * self.c));
        (x_new, t_new)
    }

    /// Boosted wave vector and frequency `ω' = c|k'|` of a null wave.
    pub fn transform_wave_vector(&self, k: &Vec3) -> (Vec3, f64) {
        let omega = self.c * k.norm();
        let (k_new, _) = self.transform_event(k, omega / (self.c * self.c));
        (k_new, self.c * k_new.norm())
    }

    pub fn transform_weber(&self, f: &CVec3) -> CVec3 {
        let n = complexify(&self.direction);
        let along = |v: &CVec3| n * (0..3).map(|i| n[i] * v[i]).sum::<Complex64>();
        let rotated = f - complexify(&(self.direction * self.beta())).cross(f) * I;
        along(f) + (rotated - along(&rotated)) * Complex64::new(self.gamma, 0.0)
    }

    /// `ρ' = γ(ρ − u J∥/c²)`, `J'∥ = γ(J∥ − uρ)`, `J'⊥ = J⊥`.
    pub fn transform_flow(&self, rho: f64, current: &Vec3) -> (f64, Vec3) {
        let n = self.direction;
        let j_par = current.dot(&n);
        let rho_new = self.gamma * (rho - self.speed * j_par / (self.c * self.c));
        let j_new = current + n * ((self.gamma - 1.0) * j_par - self.gamma * self.speed * rho);
        (rho_new, j_new)
    }

    /// Velocity of a particle as seen by the moving observer, for arbitrary
    /// orientation of `v` relative to the boost:
    /// `v' = (v∥ − u + v⊥/γ) / (1 − u·v/c²)`.
    pub fn transform_velocity(&self, v: &Vec3) -> Vec3 {
        let n = self.direction;
        let v_par = n * v.dot(&n);
        let v_perp = v - v_par;
        let denom = 1.0 - self.speed * v.dot(&n) / (self.c * self.c);
        (v_par - n * self.speed + v_perp / self.gamma) / denom
    }
}

/// `(k', ω')` for a null wave of wave vector `k`.
pub fn boost_wave_vector(k: &Vec3, boost: &Boost) -> (Vec3, f64) {
    boost.transform_wave_vector(k)
}

/// Rebuilds one component in the boosted frame. The phase is chosen so that
/// the component equals the transformed Weber vector at every event.
pub fn boost_component(
    wave: &CircularPlaneWave,
    boost: &Boost,
    units: &Units,
) -> CircularPlaneWave {
    let (k_new, omega_new) = boost.transform_wave_vector(&wave.wave_vector);
    let ratio = omega_new / wave.frequency(units.c);
    let transformed = boost.transform_weber(&(wave.polarization() * wave.weber_amplitude(units)));
    let mut out = CircularPlaneWave {
        wave_vector: k_new,
        intensity: wave.intensity * ratio * ratio,
        handedness: wave.handedness,
        phase: 0.0,
    };
    out.phase = (hdot(&out.polarization(), &transformed) * 0.5).arg();
    out
}

/// Fails only when the boost and the state disagree on `c`.
pub fn boost_plane_wave(
    state: &PlaneWaveSuperposition,
    boost: &Boost,
) -> Result<PlaneWaveSuperposition> {
    if (boost.c - state.units.c).abs() > 1e-14 * state.units.c {
        return Err(Error::InvalidBoost(format!(
            "boost uses c = {} but the state uses c = {}",
            boost.c, state.units.c
        )));
    }
    let components = state
        .components
        .iter()
        .map(|w| boost_component(w, boost, &state.units))
        .collect();
    let frame = format!(
        "{} boosted by {:.6}c along {:?}",
        state.frame,
        boost.beta(),
        to_array(&boost.direction)
    );
    Ok(PlaneWaveSuperposition {
        components,
        units: state.units,
        frame,
    })
}

pub fn fourvector_transform_flow(rho: f64, current: &Vec3, boost: &Boost) -> (f64, Vec3) {
    boost.transform_flow(rho, current)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FourVectorConsistent,
    Violated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditPoint {
    pub position: [f64; 3],
    pub time: f64,
    /// Flow of the boosted state.
    pub rho_boosted: f64,
    pub current_boosted: [f64; 3],
    /// Four-vector transform of the original flow.
    pub rho_transformed: f64,
    pub current_transformed: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourVectorAudit {
    pub recipe: Recipe,
    pub boost: Boost,
    pub tolerance: f64,
    pub points: Vec<AuditPoint>,
    /// `max_μ |A_μ − B_μ| / max(‖A‖∞, ‖B‖∞)` per point, with `A, B = (cρ, J)`.
    pub mismatch_field: Vec<f64>,
    /// `ρ_boosted − ρ_transformed` per point.
    pub rho_difference: Vec<f64>,
    pub max_mismatch: f64,
    pub verdict: Verdict,
}

impl FourVectorAudit {
    pub fn max_rho_difference(&self) -> f64 {
        self.rho_difference.iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

fn flow_expansion(state: &PlaneWaveSuperposition, recipe: Recipe) -> FlowExpansion {
    match recipe {
        Recipe::PhiBased => state.phi_flow(),
        Recipe::WeberBased => {
            let mut flow = state.energy_flow();
            for term in &mut flow.terms {
                term.density /= WEBER_ENERGY_SCALE;
                term.current /= Complex64::new(WEBER_ENERGY_SCALE, 0.0);
            }
            flow
        }
    }
}

fn relative_mismatch(c: f64, a: (f64, Vec3), b: (f64, Vec3)) -> f64 {
    let va = [c * a.0, a.1.x, a.1.y, a.1.z];
    let vb = [c * b.0, b.1.x, b.1.y, b.1.z];
    let scale = va
        .iter()
        .chain(vb.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    va.iter()
        .zip(vb.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

fn audit(
    state: &PlaneWaveSuperposition,
    boost: &Boost,
    sample_points: &[(Vec3, f64)],
    tolerance: f64,
    recipe: Recipe,
) -> Result<FourVectorAudit> {
    let boosted = boost_plane_wave(state, boost)?;
    let before = flow_expansion(state, recipe);
    let after = flow_expansion(&boosted, recipe);
    let back = boost.inverse();
    let c = state.units.c;
    let evaluated: Vec<(AuditPoint, f64, f64)> = sample_points
        .par_iter()
        .map(|(x_new, t_new)| {
            let a = (after.density(x_new, *t_new), after.current(x_new, *t_new));
            let (x, t) = back.transform_event(x_new, *t_new);
            let b = boost.transform_flow(before.density(&x, t), &before.current(&x, t));
            let point = AuditPoint {
                position: to_array(x_new),
                time: *t_new,
                rho_boosted: a.0,
                current_boosted: to_array(&a.1),
                rho_transformed: b.0,
                current_transformed: to_array(&b.1),
            };
            (point, relative_mismatch(c, a, b), a.0 - b.0)
        })
        .collect();
    let mut points = Vec::with_capacity(evaluated.len());
    let mut mismatch_field = Vec::with_capacity(evaluated.len());
    let mut rho_difference = Vec::with_capacity(evaluated.len());
    for (p, m, d) in evaluated {
        points.push(p);
        mismatch_field.push(m);
        rho_difference.push(d);
    }
    let max_mismatch = mismatch_field.iter().fold(0.0f64, |m, x| m.max(*x));
    let verdict = if max_mismatch > tolerance {
        Verdict::Violated
    } else {
        Verdict::FourVectorConsistent
    };
    Ok(FourVectorAudit {
        recipe,
        boost: *boost,
        tolerance,
        points,
        mismatch_field,
        rho_difference,
        max_mismatch,
        verdict,
    })
}

/// Audit of the photon-wave-function flow `(φ†φ, −icφ*×φ)`.
pub fn audit_four_vector(
    state: &PlaneWaveSuperposition,
    boost: &Boost,
    sample_points: &[(Vec3, f64)],
    tolerance: f64,
) -> Result<FourVectorAudit> {
    audit(state, boost, sample_points, tolerance, Recipe::PhiBased)
}

/// Audit of the energy flow `(ρ_E, S)` divided by [`WEBER_ENERGY_SCALE`].
pub fn audit_weber_flow(
    state: &PlaneWaveSuperposition,
    boost: &Boost,
    sample_points: &[(Vec3, f64)],
    tolerance: f64,
) -> Result<FourVectorAudit> {
    audit(state, boost, sample_points, tolerance, Recipe::WeberBased)
}

/// Sweep of [`DEFAULT_SWEEP_POINTS`] events at `t' = 0` along the dominant
/// interference wave vector of the boosted state, covering one period. A
/// state without interference is swept along its first boosted wave vector
/// instead, and an empty state along `x̂` over unit length.
pub fn default_sample_points(
    state: &PlaneWaveSuperposition,
    boost: &Boost,
) -> Result<Vec<(Vec3, f64)>> {
    let boosted = boost_plane_wave(state, boost)?;
    let flow = boosted.phi_flow();
    let diagonal = flow
        .terms
        .iter()
        .filter(|t| t.delta_kappa.norm() == 0.0)
        .fold(0.0f64, |m, t| m.max(t.density.norm()));
    let axis = flow
        .interference_wave_vectors()
        .into_iter()
        .find(|(_, _, weight)| *weight > 1e-12 * diagonal)
        .map(|(k, _, _)| k)
        .or_else(|| boosted.components.first().map(|w| w.wave_vector));
    let (dir, period) = match axis {
        Some(k) => (k / k.norm(), 2.0 * std::f64::consts::PI / k.norm()),
        None => (Vec3::x(), 1.0),
    };
    Ok((0..DEFAULT_SWEEP_POINTS)
        .map(|j| (dir * (period * j as f64 / DEFAULT_SWEEP_POINTS as f64), 0.0))
        .collect())
}

/// Closed-form photon density seen by an observer moving perpendicular to
/// the axis of the counter-propagating pair (right-handed `k_r ẑ`,
/// left-handed `−k_l ẑ`, both of intensity `I`):
///
/// ```text
/// ρ' = γ (I/ħc²) [1/k_r + 1/k_l − (2/√(k_r k_l)) (u²/c²) cos Θ]
/// Θ  = (k_R' + k_L')·x' − (|k_R'| + |k_L'|) c t'
/// ```
///
/// with `k_R'`, `k_L'` the boosted wave vectors.
pub fn perpendicular_pair_density(
    k_r: f64,
    k_l: f64,
    intensity: f64,
    boost: &Boost,
    units: &Units,
    x: &Vec3,
    t: f64,
) -> f64 {
    let (kr, wr) = boost.transform_wave_vector(&Vec3::new(0.0, 0.0, k_r));
    let (kl, wl) = boost.transform_wave_vector(&Vec3::new(0.0, 0.0, -k_l));
    let theta = (kr + kl).dot(x) - (wr + wl) * t;
    let beta2 = boost.beta() * boost.beta();
    boost.gamma() * intensity / (units.hbar * units.c * units.c)
        * (1.0 / k_r + 1.0 / k_l - 2.0 / (k_r * k_l).sqrt() * beta2 * theta.cos())
}
