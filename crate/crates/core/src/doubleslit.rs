//! Two-source interference built from on-grid plane-wave bundles.
//!
//! Each source is a fan of right-handed waves with wave vectors
//! `(±κ + j Δk, 0, k₀)`, `|j| ≤ w`, weighted by `exp(−j²/4σ²)` in
//! amplitude. The two fans cross near `x = 0`, and the cross terms of
//! `φ†φ` give fringes along `x` with period `2π/2κ`. Terms inside one fan
//! only produce the slow envelope, with transverse wave numbers up to
//! `2w Δk`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Units};
use crate::planewave::{CircularPlaneWave, Handedness, PlaneWaveSuperposition};
use crate::vecmath::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DoubleSlitConfig {
    pub n: usize,
    pub box_length: f64,
    /// Longitudinal wave number `k₀` in units of `Δk`.
    pub carrier_modes: i64,
    /// Transverse offset `κ` of each fan in units of `Δk`.
    pub tilt_modes: i64,
    pub bundle_half_width: i64,
    /// Gaussian width of the fan, in modes.
    pub bundle_sigma: f64,
    /// Intensity of the central wave of the first source.
    pub intensity: f64,
    /// Intensity of the second source relative to the first.
    pub intensity_ratio: f64,
    /// 1 for the single-source control, 2 for the interferometer.
    pub sources: usize,
}

impl Default for DoubleSlitConfig {
    fn default() -> Self {
        Self {
            n: 64,
            box_length: 16.0 * PI,
            carrier_modes: 16,
            tilt_modes: 8,
            bundle_half_width: 2,
            bundle_sigma: 1.0,
            intensity: 1.0,
            intensity_ratio: 1.0,
            sources: 2,
        }
    }
}

impl DoubleSlitConfig {
    pub fn spec(&self, units: Units) -> Result<GridSpec> {
        GridSpec::new(self.n, self.box_length, units)
    }

    fn validate(&self) -> Result<()> {
        let nyquist = ((self.n as i64) - 1) / 2;
        let widest = self.tilt_modes.abs() + self.bundle_half_width;
        if self.bundle_half_width < 0 || widest > nyquist || self.carrier_modes.abs() > nyquist {
            return Err(Error::InvalidGrid(format!(
                "source fans need modes up to {} but the grid resolves {nyquist}",
                widest.max(self.carrier_modes.abs())
            )));
        }
        if self.carrier_modes == 0 {
            return Err(Error::InvalidWave("carrier_modes must be nonzero".into()));
        }
        if !(self.sources == 1 || self.sources == 2) {
            return Err(Error::InvalidWave(format!(
                "sources must be 1 or 2, got {}",
                self.sources
            )));
        }
        if !(self.bundle_sigma > 0.0 && self.intensity > 0.0 && self.intensity_ratio > 0.0) {
            return Err(Error::InvalidWave(
                "bundle_sigma, intensity and intensity_ratio must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Fringe period `2π / 2κ`.
    pub fn expected_spacing(&self) -> f64 {
        self.box_length / (2 * self.tilt_modes.abs()) as f64
    }

    /// Highest transverse mode index reached by terms within one fan.
    pub fn envelope_modes(&self) -> usize {
        (2 * self.bundle_half_width) as usize
    }

    pub fn build(&self, units: Units) -> Result<PlaneWaveSuperposition> {
        let spec = self.spec(units)?;
        self.validate()?;
        let dk = spec.dk();
        let offsets: &[(f64, f64)] = if self.sources == 2 {
            &[(1.0, 1.0), (-1.0, self.intensity_ratio)]
        } else {
            &[(1.0, 1.0)]
        };
        let mut components = Vec::new();
        for &(side, ratio) in offsets {
            for j in -self.bundle_half_width..=self.bundle_half_width {
                let weight =
                    (-((j * j) as f64) / (2.0 * self.bundle_sigma * self.bundle_sigma)).exp();
                let kx = (side * self.tilt_modes as f64 + j as f64) * dk;
                let k = Vec3::new(kx, 0.0, self.carrier_modes as f64 * dk);
                components.push(CircularPlaneWave::new(
                    k,
                    self.intensity * ratio * weight,
                    Handedness::Right,
                    0.0,
                )?);
            }
        }
        Ok(PlaneWaveSuperposition::new(components, units).with_frame("double slit"))
    }
}

/// `φ†φ` on the grid nodes of the line `y = y₀`, `z = z₀` at time `t`.
pub fn transverse_profile(
    state: &PlaneWaveSuperposition,
    spec: &GridSpec,
    y0: f64,
    z0: f64,
    t: f64,
) -> Vec<f64> {
    let flow = state.phi_flow();
    (0..spec.n_per_axis())
        .map(|i| flow.density(&Vec3::new(i as f64 * spec.dx(), y0, z0), t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeAnalysis {
    /// Strongest Fourier mode above the envelope band, if it carries power.
    pub peak_mode: Option<usize>,
    pub spacing: Option<f64>,
    /// Share of the non-uniform power lying above the envelope band.
    pub fringe_power_fraction: f64,
    /// Fringe amplitude over mean, `2|ρ̂_peak| / ρ̂₀`.
    pub visibility: f64,
}

impl FringeAnalysis {
    pub fn has_fringes(&self) -> bool {
        self.peak_mode.is_some()
    }
}

/// Power below `POWER_FLOOR · ρ̂₀²` counts as no fringe.
const POWER_FLOOR: f64 = 1e-20;

/// Fourier analysis of a periodic profile sampled at `n` equally spaced
/// points over `box_length`. Modes `1..=envelope_modes` are attributed to
/// the envelope and ignored when looking for fringes.
pub fn analyze_fringes(profile: &[f64], box_length: f64, envelope_modes: usize) -> FringeAnalysis {
    let n = profile.len();
    let mut buf: Vec<Complex64> = profile.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let power: Vec<f64> = buf.iter().map(|z| z.norm_sqr() / (n * n) as f64).collect();
    let mean = buf[0].re / n as f64;
    let half = n / 2;
    let total: f64 = power[1..=half].iter().sum();
    let above: f64 = power.iter().take(half + 1).skip(envelope_modes + 1).sum();
    let peak = (envelope_modes + 1..=half).max_by(|&a, &b| power[a].total_cmp(&power[b]));
    let peak = peak.filter(|&m| power[m] > POWER_FLOOR * mean * mean);
    FringeAnalysis {
        peak_mode: peak,
        spacing: peak.map(|m| box_length / m as f64),
        fringe_power_fraction: if total > 0.0 { above / total } else { 0.0 },
        visibility: peak.map_or(0.0, |m| 2.0 * power[m].sqrt() / mean.abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecmath::hdot;
    use approx::assert_relative_eq;

    #[test]
    fn two_sources_fringe_at_expected_period() {
        let cfg = DoubleSlitConfig::default();
        let u = Units::default();
        let spec = cfg.spec(u).unwrap();
        let s = cfg.build(u).unwrap();
        assert_eq!(s.components.len(), 10);
        for w in &s.components {
            crate::planewave::check_on_grid(&spec, &w.wave_vector).unwrap();
        }
        for t in [0.0, 3.0] {
            let a = analyze_fringes(
                &transverse_profile(&s, &spec, 0.0, 0.0, t),
                cfg.box_length,
                cfg.envelope_modes(),
            );
            assert_eq!(a.peak_mode, Some(16));
            assert!((a.spacing.unwrap() - cfg.expected_spacing()).abs() < spec.dx());
            assert!(a.fringe_power_fraction > 0.1);
        }
    }

    #[test]
    fn single_source_has_no_fringes() {
        let cfg = DoubleSlitConfig {
            sources: 1,
            ..Default::default()
        };
        let u = Units::default();
        let spec = cfg.spec(u).unwrap();
        let s = cfg.build(u).unwrap();
        let a = analyze_fringes(
            &transverse_profile(&s, &spec, 0.0, 0.0, 1.0),
            cfg.box_length,
            cfg.envelope_modes(),
        );
        assert!(!a.has_fringes());
        assert!(a.fringe_power_fraction < 1e-20);
    }

    #[test]
    fn visibility_follows_two_beam_formula() {
        let u = Units::default();
        let mut last = f64::INFINITY;
        for r in [1.0, 0.5, 0.2, 0.05] {
            let cfg = DoubleSlitConfig {
                bundle_half_width: 0,
                intensity_ratio: r,
                ..Default::default()
            };
            let spec = cfg.spec(u).unwrap();
            let s = cfg.build(u).unwrap();
            let (a, b) = (s.components[0], s.components[1]);
            let overlap = hdot(&a.polarization(), &b.polarization()).norm() / 2.0;
            let got = analyze_fringes(
                &transverse_profile(&s, &spec, 0.0, 0.0, 0.0),
                cfg.box_length,
                0,
            )
            .visibility;
            assert_relative_eq!(
                got,
                2.0 * r.sqrt() / (1.0 + r) * overlap,
                max_relative = 1e-10
            );
            assert!(got < last);
            last = got;
        }
    }

    #[test]
    fn rejects_unrepresentable_fans() {
        let u = Units::default();
        let wide = DoubleSlitConfig {
            tilt_modes: 30,
            ..Default::default()
        };
        assert!(wide.build(u).is_err());
        let three = DoubleSlitConfig {
            sources: 3,
            ..Default::default()
        };
        assert!(three.build(u).is_err());
    }

    #[test]
    fn uniform_profile_has_no_fringes() {
        let a = analyze_fringes(&[2.0; 32], 1.0, 0);
        assert_eq!(a.peak_mode, None);
        assert_eq!(a.fringe_power_fraction, 0.0);
    }
}
