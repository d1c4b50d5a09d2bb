//! Fourier transforms with the symmetric `(2π)^{-3/2}` convention, the
//! transversality constraint, and exact per-mode time evolution.
//!
//! The discrete pair is
//!
//! ```text
//! F̃(k_n) = Δx³ (2π)^{-3/2} Σ_m F(x_m) e^{-i k_n·x_m}
//! F(x_m) = Δk³ (2π)^{-3/2} Σ_n F̃(k_n) e^{+i k_n·x_m}
//! ```
//!
//! so that `Σ |F|² Δx³ = Σ |F̃|² Δk³` exactly.
//!
//! In momentum space Maxwell's equations reduce to `dF̃/dt = c k × F̃`, a
//! rigid precession of each mode about `k̂` with angular speed `c|k|`. The
//! propagator applies that rotation in closed form.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::fields::{vector_at, ComplexComponents, WeberGrid};
use crate::grid::{GridSpec, KGrid, Representation};
use crate::vecmath::{norm_sqr, CVec3, Vec3};

/// Maximum transversality residual accepted by [`evolve`].
pub const TRANSVERSE_TOLERANCE: f64 = 1e-8;

const RESIDUAL_FLOOR: f64 = 1e-300;

fn fft_axis(data: &mut [Complex64], n: usize, stride: usize, fft: &Arc<dyn Fft<f64>>) {
    // Lines along one axis are independent; gather each into a scratch
    // buffer, transform, scatter back.
    let len = data.len();
    let lines: Vec<usize> = (0..len)
        .filter(|&i| (i / stride).is_multiple_of(n))
        .collect();
    let results: Vec<(usize, Vec<Complex64>)> = lines
        .par_iter()
        .map(|&start| {
            let mut buf: Vec<Complex64> = (0..n).map(|j| data[start + j * stride]).collect();
            fft.process(&mut buf);
            (start, buf)
        })
        .collect();
    for (start, buf) in results {
        for (j, v) in buf.into_iter().enumerate() {
            data[start + j * stride] = v;
        }
    }
}

fn fft3(spec: &GridSpec, data: &mut ComplexComponents, direction: FftDirection) {
    let n = spec.n_per_axis();
    let fft = FftPlanner::new().plan_fft(n, direction);
    for comp in data.iter_mut() {
        for stride in [1, n, n * n] {
            fft_axis(comp, n, stride, &fft);
        }
    }
}

fn scale_components(data: &mut ComplexComponents, factor: f64) {
    data.par_iter_mut()
        .for_each(|comp| comp.iter_mut().for_each(|z| *z *= factor));
}

pub(crate) fn forward_components(spec: &GridSpec, data: &mut ComplexComponents) {
    fft3(spec, data, FftDirection::Forward);
    scale_components(data, spec.cell_volume() / (2.0 * PI).powf(1.5));
}

pub(crate) fn inverse_components(spec: &GridSpec, data: &mut ComplexComponents) {
    fft3(spec, data, FftDirection::Inverse);
    scale_components(data, spec.mode_volume() / (2.0 * PI).powf(1.5));
}

pub fn forward_transform(weber: &WeberGrid) -> Result<WeberGrid> {
    weber.require(Representation::Position)?;
    let mut out = weber.clone();
    forward_components(&out.spec, &mut out.data);
    out.representation = Representation::Momentum;
    Ok(out)
}

pub fn inverse_transform(weber: &WeberGrid) -> Result<WeberGrid> {
    weber.require(Representation::Momentum)?;
    let mut out = weber.clone();
    inverse_components(&out.spec, &mut out.data);
    out.representation = Representation::Position;
    Ok(out)
}

/// Longitudinal content `max_k |k̂·F̃(k)|` relative to the largest mode
/// amplitude `max_k |F̃(k)|`. The `k = 0` mode carries no constraint and is
/// skipped. A zero field reports 0.
pub(crate) fn transversality_residual_of(spec: &GridSpec, data: &ComplexComponents) -> f64 {
    let kgrid = KGrid::new(*spec);
    let mut longitudinal: f64 = 0.0;
    let mut largest: f64 = 0.0;
    for (i, k) in kgrid.wave_vectors().iter().enumerate() {
        let f = vector_at(data, i);
        largest = largest.max(norm_sqr(&f).sqrt());
        let kn = kgrid.magnitudes()[i];
        if kn == 0.0 {
            continue;
        }
        let along: Complex64 = (0..3).map(|a| f[a] * (k[a] / kn)).sum();
        longitudinal = longitudinal.max(along.norm());
    }
    longitudinal / (largest + RESIDUAL_FLOOR)
}

pub fn transversality_residual(weber: &WeberGrid) -> Result<f64> {
    weber.require(Representation::Momentum)?;
    Ok(transversality_residual_of(&weber.spec, &weber.data))
}

/// Removes the component along `k̂` from every nonzero mode.
pub fn project_transverse(weber: &WeberGrid) -> Result<WeberGrid> {
    weber.require(Representation::Momentum)?;
    let mut out = weber.clone();
    let kgrid = KGrid::new(weber.spec);
    for (i, k) in kgrid.wave_vectors().iter().enumerate() {
        let kn = kgrid.magnitudes()[i];
        if kn == 0.0 {
            continue;
        }
        let khat = k / kn;
        let f = out.at(i);
        let along: Complex64 = (0..3).map(|a| f[a] * khat[a]).sum();
        let projected = f - khat.map(|x| along * x);
        out.set(i, &projected);
    }
    Ok(out)
}

/// Rotation of a complex vector about the unit axis `axis` by `angle`
/// (right-handed), applied to real and imaginary parts alike.
pub(crate) fn rotate(v: &CVec3, axis: &Vec3, angle: f64) -> CVec3 {
    let (s, c) = angle.sin_cos();
    let along: Complex64 = (0..3).map(|a| v[a] * axis[a]).sum();
    let axis_c = axis.map(|x| Complex64::new(x, 0.0));
    let cross = axis_c.cross(v);
    v * Complex64::new(c, 0.0) + cross * Complex64::new(s, 0.0) + axis_c * (along * (1.0 - c))
}

pub(crate) fn evolve_components(spec: &GridSpec, data: &mut ComplexComponents, dt: f64) {
    let kgrid = KGrid::new(*spec);
    let c = spec.c();
    for (i, k) in kgrid.wave_vectors().iter().enumerate() {
        let kn = kgrid.magnitudes()[i];
        if kn == 0.0 {
            continue;
        }
        let rotated = rotate(&vector_at(data, i), &(k / kn), kn * c * dt);
        for a in 0..3 {
            data[a][i] = rotated[a];
        }
    }
}

/// Exact solution of `dF̃/dt = c k × F̃` over `dt`: each mode rotates about
/// `k̂` by the angle `|k| c dt`.
pub fn evolve(weber: &WeberGrid, dt: f64) -> Result<WeberGrid> {
    weber.require(Representation::Momentum)?;
    let residual = transversality_residual_of(&weber.spec, &weber.data);
    if residual > TRANSVERSE_TOLERANCE {
        return Err(Error::NotTransverse {
            residual,
            tolerance: TRANSVERSE_TOLERANCE,
        });
    }
    let mut out = weber.clone();
    evolve_components(&out.spec, &mut out.data, dt);
    out.time += dt;
    Ok(out)
}

/// Spectral Laplacian in momentum space: multiply by `-|k|²`.
pub fn laplacian(weber: &WeberGrid) -> Result<WeberGrid> {
    weber.require(Representation::Momentum)?;
    let mut out = weber.clone();
    let kgrid = KGrid::new(weber.spec);
    for comp in out.data.iter_mut() {
        for (z, kn) in comp.iter_mut().zip(kgrid.magnitudes()) {
            *z *= -kn * kn;
        }
    }
    Ok(out)
}

/// Max-norm in position space of `∂²F/∂t² − c²∇²F`, with the second time
/// derivative taken as a central difference over the exact propagator.
pub fn klein_gordon_residual(weber: &WeberGrid, dt_probe: f64) -> Result<f64> {
    let ahead = evolve(weber, dt_probe)?;
    let behind = evolve(weber, -dt_probe)?;
    let lap = laplacian(weber)?;
    let c2 = weber.spec.c().powi(2);
    let h2 = dt_probe * dt_probe;
    let mut defect = weber.clone();
    for a in 0..3 {
        for i in 0..weber.len() {
            let second = (ahead.data[a][i] - 2.0 * weber.data[a][i] + behind.data[a][i]) / h2;
            defect.data[a][i] = second - lap.data[a][i] * c2;
        }
    }
    let position = inverse_transform(&defect)?;
    Ok(position.max_abs())
}
