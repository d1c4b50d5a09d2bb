//! Periodic cubic grids and their reciprocal lattices.
//!
//! Samples are stored row-major with x varying fastest: the flat index of
//! node `(ix, iy, iz)` is `ix + n * (iy + n * iz)`. Node positions are
//! `x_m = m * dx` with `m` in `0..n` on each axis, so the origin sits on a
//! corner node. The same flat index addresses Fourier modes, where axis
//! index `j` maps to the signed integer `j` for `j <= (n - 1) / 2` and `j - n`
//! otherwise.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light and reduced Planck constant in simulation units.
///
/// Electromagnetic quantities follow Gaussian conventions, so the explicit
/// `4π` and `8π` factors of the field formulas stay in the code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub c: f64,
    pub hbar: f64,
}

impl Units {
    pub fn new(c: f64, hbar: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidUnits(format!("c must be positive, got {c}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidUnits(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self { c, hbar })
    }
}

impl Default for Units {
    fn default() -> Self {
        Self { c: 1.0, hbar: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Position,
    Momentum,
}

impl Representation {
    pub(crate) fn tag(self) -> u8 {
        match self {
            Representation::Position => 0,
            Representation::Momentum => 1,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Representation::Position),
            1 => Some(Representation::Momentum),
            _ => None,
        }
    }
}

/// Shape, box size and units shared by every field on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    box_length: f64,
    units: Units,
}

impl GridSpec {
    pub fn new(n_per_axis: usize, box_length: f64, units: Units) -> Result<Self> {
        if n_per_axis < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples per axis, got {n_per_axis}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive, got {box_length}"
            )));
        }
        Ok(Self {
            n: n_per_axis,
            box_length,
            units,
        })
    }

    pub fn n_per_axis(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn c(&self) -> f64 {
        self.units.c
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }

    /// Total number of nodes, `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Reciprocal lattice spacing `2π / L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(3)
    }

    pub fn mode_volume(&self) -> f64 {
        self.dk().powi(3)
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    pub fn flat_index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.n * (iy + self.n * iz)
    }

    pub fn axis_indices(&self, flat: usize) -> [usize; 3] {
        let n = self.n;
        [flat % n, (flat / n) % n, flat / (n * n)]
    }

    pub fn position(&self, flat: usize) -> Vector3<f64> {
        let [ix, iy, iz] = self.axis_indices(flat);
        let dx = self.dx();
        Vector3::new(ix as f64 * dx, iy as f64 * dx, iz as f64 * dx)
    }

    /// Signed integer mode index along one axis.
    pub fn signed_index(&self, j: usize) -> i64 {
        if j <= (self.n - 1) / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Inverse of [`signed_index`](Self::signed_index), wrapping periodically.
    pub fn storage_index(&self, signed: i64) -> usize {
        signed.rem_euclid(self.n as i64) as usize
    }

    pub fn mode_indices(&self, flat: usize) -> [i64; 3] {
        let [ix, iy, iz] = self.axis_indices(flat);
        [
            self.signed_index(ix),
            self.signed_index(iy),
            self.signed_index(iz),
        ]
    }

    pub fn wave_vector(&self, flat: usize) -> Vector3<f64> {
        let [a, b, c] = self.mode_indices(flat);
        let dk = self.dk();
        Vector3::new(a as f64 * dk, b as f64 * dk, c as f64 * dk)
    }

    /// Flat index of the mode with the given signed indices, if it lies in
    /// the signed Nyquist range.
    pub fn mode_flat_index(&self, signed: [i64; 3]) -> Option<usize> {
        let [a, b, c] = signed.map(|s| self.storage_index(s));
        let flat = self.flat_index(a, b, c);
        (self.mode_indices(flat) == signed).then_some(flat)
    }
}

/// Wave vectors of every mode of a grid, `k_n = (2π / L) n`.
#[derive(Debug, Clone)]
pub struct KGrid {
    spec: GridSpec,
    wave_vectors: Vec<Vector3<f64>>,
    magnitudes: Vec<f64>,
}

impl KGrid {
    pub fn new(spec: GridSpec) -> Self {
        let wave_vectors: Vec<_> = (0..spec.len()).map(|i| spec.wave_vector(i)).collect();
        let magnitudes = wave_vectors.iter().map(|k| k.norm()).collect();
        Self {
            spec,
            wave_vectors,
            magnitudes,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn wave_vectors(&self) -> &[Vector3<f64>] {
        &self.wave_vectors
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.wave_vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wave_vectors.is_empty()
    }
}
