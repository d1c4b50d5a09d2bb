//! Exact superpositions of circularly polarized plane waves.
//!
//! A component with physical wave vector `k`, frequency `ω = c|k|`,
//! intensity `I` and phase `δ` has Weber vector
//!
//! ```text
//! right-handed:  F = √(4πI/c) e^{iδ} e^{+i(k·x − ωt)} (e₁ + i e₂)
//! left-handed:   F = √(4πI/c) e^{iδ} e^{−i(k·x − ωt)} (e₁ + i e₂)
//! ```
//!
//! with `(e₁, e₂, k̂)` a right-handed orthonormal triad. The Weber vector
//! only carries positive-helicity modes at positive frequency; a
//! negative-helicity wave shows up at negative frequency, which is why the
//! left-handed form runs backwards in phase. Along `k̂ = −ẑ` this gives
//! `e^{ik(z+ct)} (1, −i, 0)`.
//!
//! The photon wave function of a component is the same expression with
//! amplitude `√(I / 2ħ|k|c²)`.
//!
//! Densities and currents are quadratic, so they expand into a finite sum
//! of pair terms `Re[c_ab e^{i(Δκ·x − Δν t)}]`. [`FlowExpansion`] keeps
//! that expansion, which also yields exact divergences and time
//! derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::WeberGrid;
use crate::grid::{GridSpec, Representation, Units};
use crate::vecmath::{conj_cross, hdot, to_array, CVec3, Vec3, I};

/// Relative distance from a lattice point still accepted as on-grid.
const ON_GRID_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Right,
    Left,
}

impl Handedness {
    /// Sign of the spacetime phase in the Weber vector.
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Right => 1.0,
            Handedness::Left => -1.0,
        }
    }
}

/// Transverse basis `(e₁, e₂)` for a propagation direction: `e₁` is the
/// part of `x̂` orthogonal to `k̂` (or of `ŷ` when `|k̂·x̂| > 0.9`),
/// `e₂ = k̂ × e₁`.
pub fn polarization_basis(khat: &Vec3) -> (Vec3, Vec3) {
    let reference = if khat.x.abs() > 0.9 {
        Vec3::y()
    } else {
        Vec3::x()
    };
    let e1 = (reference - khat * reference.dot(khat)).normalize();
    let e2 = khat.cross(&e1);
    (e1, e2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularPlaneWave {
    pub wave_vector: Vec3,
    pub intensity: f64,
    pub handedness: Handedness,
    pub phase: f64,
}

impl CircularPlaneWave {
    pub fn new(
        wave_vector: Vec3,
        intensity: f64,
        handedness: Handedness,
        phase: f64,
    ) -> Result<Self> {
        if !wave_vector.iter().all(|x| x.is_finite()) || wave_vector.norm() == 0.0 {
            return Err(Error::InvalidWave(format!(
                "wave vector must be finite and nonzero, got {:?}",
                to_array(&wave_vector)
            )));
        }
        if !(intensity.is_finite() && intensity > 0.0) {
            return Err(Error::InvalidWave(format!(
                "intensity must be positive, got {intensity}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidWave("phase must be finite".into()));
        }
        Ok(Self {
            wave_vector,
            intensity,
            handedness,
            phase,
        })
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_vector.norm()
    }

    pub fn direction(&self) -> Vec3 {
        self.wave_vector / self.wave_number()
    }

    pub fn frequency(&self, c: f64) -> f64 {
        c * self.wave_number()
    }

    pub fn basis(&self) -> (Vec3, Vec3) {
        polarization_basis(&self.direction())
    }

    /// `e₁ + i e₂`.
    pub fn polarization(&self) -> CVec3 {
        let (e1, e2) = self.basis();
        CVec3::from_fn(|i, _| Complex64::new(e1[i], e2[i]))
    }

    /// `√(4πI/c) e^{iδ}`.
    pub fn weber_amplitude(&self, units: &Units) -> Complex64 {
        Complex64::from_polar((4.0 * PI * self.intensity / units.c).sqrt(), self.phase)
    }

    /// `√(I / 2ħ|k|c²) e^{iδ}`.
    pub fn phi_amplitude(&self, units: &Units) -> Complex64 {
        let k = self.wave_number();
        Complex64::from_polar(
            (self.intensity / (2.0 * units.hbar * k * units.c * units.c)).sqrt(),
            self.phase,
        )
    }

    /// Signed wave vector `±k` and signed angular frequency `±ω` of the
    /// complex exponential carried by the Weber vector.
    pub fn carrier(&self, c: f64) -> (Vec3, f64) {
        let s = self.handedness.sign();
        (self.wave_vector * s, self.frequency(c) * s)
    }

    pub fn spacetime_phase(&self, x: &Vec3, t: f64, c: f64) -> f64 {
        let (kappa, nu) = self.carrier(c);
        kappa.dot(x) - nu * t
    }

    pub fn eval_weber(&self, x: &Vec3, t: f64, units: &Units) -> CVec3 {
        let ph = Complex64::from_polar(1.0, self.spacetime_phase(x, t, units.c));
        self.polarization() * (self.weber_amplitude(units) * ph)
    }

    pub fn eval_phi(&self, x: &Vec3, t: f64, units: &Units) -> CVec3 {
        let ph = Complex64::from_polar(1.0, self.spacetime_phase(x, t, units.c));
        self.polarization() * (self.phi_amplitude(units) * ph)
    }

    /// Norm of `i∂F/∂t − c∇×F` divided by `|F|`, obtained by substituting the
    /// exponential: `∂_t → −iν`, `∇ → iκ`.
    pub fn maxwell_defect(&self, c: f64) -> f64 {
        let (kappa, nu) = self.carrier(c);
        let p = self.polarization();
        let time_part = p * Complex64::new(nu, 0.0);
        let kappa_c = kappa.map(|x| Complex64::new(x, 0.0));
        let curl_part = kappa_c.cross(&p) * (I * c);
        (time_part - curl_part).norm() / p.norm()
    }

    /// Transversality `|k̂·(e₁ + i e₂)|`.
    pub fn longitudinal_part(&self) -> f64 {
        let khat = self.direction();
        (0..3)
            .map(|i| self.polarization()[i] * khat[i])
            .sum::<Complex64>()
            .norm()
    }
}

/// One complex exponential `A e^{i(κ·x − νt)}` of a superposition.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub amplitude: CVec3,
    pub kappa: Vec3,
    pub nu: f64,
}

impl Mode {
    pub fn eval(&self, x: &Vec3, t: f64) -> CVec3 {
        self.amplitude * Complex64::from_polar(1.0, self.kappa.dot(x) - self.nu * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeKind {
    Weber,
    Phi,
}

/// Pair term `c_ab e^{i(Δκ·x − Δν t)}` of a density or current.
#[derive(Debug, Clone, Copy)]
pub struct PairTerm {
    pub density: Complex64,
    pub current: CVec3,
    pub delta_kappa: Vec3,
    pub delta_nu: f64,
}

/// Density `ρ = s A*·A` and current `J = s c (−i A*×A)` of a mode sum,
/// expanded over ordered mode pairs. Diagonal pairs are uniform; the
/// off-diagonal ones carry interference.
#[derive(Debug, Clone)]
pub struct FlowExpansion {
    pub terms: Vec<PairTerm>,
}

impl FlowExpansion {
    pub fn new(modes: &[Mode], scale: f64, c: f64) -> Self {
        let mut terms = Vec::with_capacity(modes.len() * modes.len());
        for a in modes {
            for b in modes {
                let density = hdot(&a.amplitude, &b.amplitude) * scale;
                let current = conj_cross(&a.amplitude, &b.amplitude) * (-I * scale * c);
                terms.push(PairTerm {
                    density,
                    current,
                    delta_kappa: b.kappa - a.kappa,
                    delta_nu: b.nu - a.nu,
                });
            }
        }
        Self { terms }
    }

    fn phases<'a>(
        &'a self,
        x: &'a Vec3,
        t: f64,
    ) -> impl Iterator<Item = (&'a PairTerm, Complex64)> + 'a {
        self.terms.iter().map(move |term| {
            (
                term,
                Complex64::from_polar(1.0, term.delta_kappa.dot(x) - term.delta_nu * t),
            )
        })
    }

    pub fn density(&self, x: &Vec3, t: f64) -> f64 {
        self.phases(x, t)
            .map(|(term, e)| (term.density * e).re)
            .sum()
    }

    pub fn current(&self, x: &Vec3, t: f64) -> Vec3 {
        self.phases(x, t).fold(Vec3::zeros(), |acc, (term, e)| {
            acc + (term.current * e).map(|z| z.re)
        })
    }

    pub fn density_rate(&self, x: &Vec3, t: f64) -> f64 {
        self.phases(x, t)
            .map(|(term, e)| (term.density * e * Complex64::new(0.0, -term.delta_nu)).re)
            .sum()
    }

    pub fn current_divergence(&self, x: &Vec3, t: f64) -> f64 {
        self.phases(x, t)
            .map(|(term, e)| {
                let ik_dot_j: Complex64 =
                    (0..3).map(|a| term.current[a] * term.delta_kappa[a]).sum();
                (ik_dot_j * I * e).re
            })
            .sum()
    }

    /// Interference wave vectors with a nonzero density coefficient,
    /// largest coefficient first.
    pub fn interference_wave_vectors(&self) -> Vec<(Vec3, f64, f64)> {
        let mut out: Vec<(Vec3, f64, f64)> = self
            .terms
            .iter()
            .filter(|t| t.delta_kappa.norm() > 0.0 && t.density.norm() > 0.0)
            .map(|t| (t.delta_kappa, t.delta_nu, t.density.norm()))
            .collect();
        out.sort_by(|a, b| b.2.total_cmp(&a.2));
        out
    }
}

/// A finite superposition of circular plane waves in one inertial frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveSuperposition {
    pub components: Vec<CircularPlaneWave>,
    pub units: Units,
    pub frame: String,
}

impl PlaneWaveSuperposition {
    pub fn new(components: Vec<CircularPlaneWave>, units: Units) -> Self {
        Self {
            components,
            units,
            frame: "lab".into(),
        }
    }

    pub fn empty(units: Units) -> Self {
        Self::new(Vec::new(), units)
    }

    pub fn with_frame(mut self, frame: impl Into<String>) -> Self {
        self.frame = frame.into();
        self
    }

    /// Right-handed wave of wave number `k_r` along `+ẑ`.
    pub fn single_circular(k_r: f64, intensity: f64, units: Units) -> Result<Self> {
        let wave =
            CircularPlaneWave::new(Vec3::new(0.0, 0.0, k_r), intensity, Handedness::Right, 0.0)?;
        Ok(Self::new(vec![wave], units))
    }

    /// Right-handed wave along `+ẑ` plus a left-handed wave of equal
    /// intensity along `−ẑ`.
    pub fn counter_propagating(k_r: f64, k_l: f64, intensity: f64, units: Units) -> Result<Self> {
        let right =
            CircularPlaneWave::new(Vec3::new(0.0, 0.0, k_r), intensity, Handedness::Right, 0.0)?;
        let left =
            CircularPlaneWave::new(Vec3::new(0.0, 0.0, -k_l), intensity, Handedness::Left, 0.0)?;
        Ok(Self::new(vec![right, left], units))
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn eval_weber(&self, x: &Vec3, t: f64) -> CVec3 {
        self.components.iter().fold(CVec3::zeros(), |acc, w| {
            acc + w.eval_weber(x, t, &self.units)
        })
    }

    pub fn eval_phi(&self, x: &Vec3, t: f64) -> CVec3 {
        self.components
            .iter()
            .fold(CVec3::zeros(), |acc, w| acc + w.eval_phi(x, t, &self.units))
    }

    /// Complex exponentials of the state, with components sharing a wave
    /// vector and handedness merged by adding their complex amplitudes.
    pub fn modes(&self, kind: AmplitudeKind) -> Vec<Mode> {
        let mut merged: Vec<(Vec3, Handedness, Mode)> = Vec::new();
        for w in &self.components {
            let amp = match kind {
                AmplitudeKind::Weber => w.weber_amplitude(&self.units),
                AmplitudeKind::Phi => w.phi_amplitude(&self.units),
            };
            let amplitude = w.polarization() * amp;
            if let Some(entry) = merged
                .iter_mut()
                .find(|(k, h, _)| *k == w.wave_vector && *h == w.handedness)
            {
                entry.2.amplitude += amplitude;
                continue;
            }
            let (kappa, nu) = w.carrier(self.units.c);
            merged.push((
                w.wave_vector,
                w.handedness,
                Mode {
                    amplitude,
                    kappa,
                    nu,
                },
            ));
        }
        merged.into_iter().map(|(_, _, m)| m).collect()
    }

    /// `ρ = φ†φ`, `J = −ic φ*×φ`.
    pub fn phi_flow(&self) -> FlowExpansion {
        FlowExpansion::new(&self.modes(AmplitudeKind::Phi), 1.0, self.units.c)
    }

    /// Energy density `F*·F / 8π` and Poynting vector `c F*×F / 8πi`.
    pub fn energy_flow(&self) -> FlowExpansion {
        FlowExpansion::new(
            &self.modes(AmplitudeKind::Weber),
            1.0 / (8.0 * PI),
            self.units.c,
        )
    }

    /// Photon probability density and current at one event.
    pub fn analytic_probability_flow(&self, x: &Vec3, t: f64) -> (f64, Vec3) {
        let flow = self.phi_flow();
        (flow.density(x, t), flow.current(x, t))
    }

    /// Upper bound on `sup_x |Σ_a A_a(x)|²` over all space and time.
    pub fn density_bound(&self, kind: AmplitudeKind) -> f64 {
        let sum: f64 = self.modes(kind).iter().map(|m| m.amplitude.norm()).sum();
        sum * sum
    }

    /// Evaluates the Weber vector on the nodes of `spec` at time `t`.
    pub fn sample_to_grid(&self, spec: &GridSpec, t: f64) -> Result<WeberGrid> {
        if spec.units() != self.units {
            return Err(Error::InvalidUnits(format!(
                "state units {:?} differ from grid units {:?}",
                self.units,
                spec.units()
            )));
        }
        for w in &self.components {
            check_on_grid(spec, &w.wave_vector)?;
        }
        let mut grid = WeberGrid::zeros(*spec, Representation::Position, t);
        for i in 0..spec.len() {
            grid.set(i, &self.eval_weber(&spec.position(i), t));
        }
        Ok(grid)
    }
}

/// Signed lattice indices of `k`, or an error naming the nearest lattice
/// vector.
pub fn check_on_grid(spec: &GridSpec, k: &Vec3) -> Result<[i64; 3]> {
    let dk = spec.dk();
    let scaled = k / dk;
    let rounded = scaled.map(|x| x.round());
    let nearest = rounded * dk;
    let off = (scaled - rounded).amax() > ON_GRID_TOLERANCE * (1.0 + scaled.amax());
    let idx = [rounded.x as i64, rounded.y as i64, rounded.z as i64];
    if off || spec.mode_flat_index(idx).is_none() {
        return Err(Error::OffGrid {
            requested: to_array(k),
            nearest: to_array(&nearest),
        });
    }
    Ok(idx)
}
