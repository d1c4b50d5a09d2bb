//! Grid representations of the electromagnetic state.
//!
//! The Weber vector `F = E + iB` packs both real fields into one complex
//! vector field. Energy density and Poynting flux are local quadratic forms
//! in `F`:
//!
//! ```text
//! ρ_E = F*·F / 8π          S = c F*×F / (8π i)
//! ```

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Representation};
use crate::vecmath::{conj_cross, norm_sqr, CVec3, Vec3, I};

/// Relative tolerance for the imaginary part of `F*×F / i`.
pub const POYNTING_RESIDUE_TOLERANCE: f64 = 1e-10;

pub type RealComponents = [Vec<f64>; 3];
pub type ComplexComponents = [Vec<Complex64>; 3];

pub(crate) fn zero_components(len: usize) -> ComplexComponents {
    std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); len])
}

pub(crate) fn vector_at(data: &ComplexComponents, i: usize) -> CVec3 {
    CVec3::new(data[0][i], data[1][i], data[2][i])
}

pub(crate) fn set_vector(data: &mut ComplexComponents, i: usize, v: &CVec3) {
    for a in 0..3 {
        data[a][i] = v[a];
    }
}

fn check_len(spec: &GridSpec, len: usize) -> Result<()> {
    if len != spec.len() {
        return Err(Error::SizeMismatch {
            expected: spec.len(),
            found: len,
        });
    }
    Ok(())
}

/// Electric and magnetic fields sampled on a grid at one instant.
#[derive(Debug, Clone)]
pub struct RealFieldPair {
    pub spec: GridSpec,
    pub time: f64,
    pub e_field: RealComponents,
    pub b_field: RealComponents,
}

impl RealFieldPair {
    pub fn new(
        spec: GridSpec,
        time: f64,
        e_field: RealComponents,
        b_field: RealComponents,
    ) -> Result<Self> {
        for comp in e_field.iter().chain(b_field.iter()) {
            check_len(&spec, comp.len())?;
        }
        let pair = Self {
            spec,
            time,
            e_field,
            b_field,
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn zeros(spec: GridSpec, time: f64) -> Self {
        let z = || std::array::from_fn(|_| vec![0.0; spec.len()]);
        Self {
            spec,
            time,
            e_field: z(),
            b_field: z(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, field) in [("E", &self.e_field), ("B", &self.b_field)] {
            for (component, values) in field.iter().enumerate() {
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    let [ix, iy, iz] = self.spec.axis_indices(i);
                    return Err(Error::NonFinite {
                        field: name,
                        component,
                        ix,
                        iy,
                        iz,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Weber vector field on a grid, in position or momentum representation.
#[derive(Debug, Clone)]
pub struct WeberGrid {
    pub spec: GridSpec,
    pub representation: Representation,
    pub time: f64,
    pub data: ComplexComponents,
}

impl WeberGrid {
    pub fn new(
        spec: GridSpec,
        representation: Representation,
        time: f64,
        data: ComplexComponents,
    ) -> Result<Self> {
        for comp in &data {
            check_len(&spec, comp.len())?;
        }
        let grid = Self {
            spec,
            representation,
            time,
            data,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn zeros(spec: GridSpec, representation: Representation, time: f64) -> Self {
        Self {
            spec,
            representation,
            time,
            data: zero_components(spec.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (component, values) in self.data.iter().enumerate() {
            if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                let [ix, iy, iz] = self.spec.axis_indices(i);
                return Err(Error::NonFinite {
                    field: "F",
                    component,
                    ix,
                    iy,
                    iz,
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, i: usize) -> CVec3 {
        vector_at(&self.data, i)
    }

    pub fn set(&mut self, i: usize, v: &CVec3) {
        set_vector(&mut self.data, i, v)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for comp in out.data.iter_mut() {
            comp.iter_mut().for_each(|z| *z *= factor);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.len())
            .map(|i| norm_sqr(&self.at(i)).sqrt())
            .fold(0.0, f64::max)
    }

    pub(crate) fn require(&self, expected: Representation) -> Result<()> {
        if self.representation != expected {
            return Err(Error::WrongRepresentation {
                expected,
                found: self.representation,
            });
        }
        Ok(())
    }
}

/// `F = E + iB` pointwise.
pub fn weber_from_eb(fields: &RealFieldPair) -> Result<WeberGrid> {
    fields.validate()?;
    let len = fields.spec.len();
    let data = std::array::from_fn(|a| {
        (0..len)
            .map(|i| Complex64::new(fields.e_field[a][i], fields.b_field[a][i]))
            .collect()
    });
    Ok(WeberGrid {
        spec: fields.spec,
        representation: Representation::Position,
        time: fields.time,
        data,
    })
}

/// `E = Re F`, `B = Im F`. Only meaningful in position space: `F̃(k)` has no
/// conjugation symmetry, so its real and imaginary parts are not fields.
pub fn eb_from_weber(weber: &WeberGrid) -> Result<RealFieldPair> {
    weber.require(Representation::Position)?;
    let e_field = std::array::from_fn(|a| weber.data[a].iter().map(|z| z.re).collect());
    let b_field = std::array::from_fn(|a| weber.data[a].iter().map(|z| z.im).collect());
    RealFieldPair::new(weber.spec, weber.time, e_field, b_field)
}

pub fn energy_density_at(f: &CVec3) -> f64 {
    norm_sqr(f) / (8.0 * PI)
}

pub fn energy_density(weber: &WeberGrid) -> Result<Vec<f64>> {
    weber.require(Representation::Position)?;
    Ok((0..weber.len())
        .map(|i| energy_density_at(&weber.at(i)))
        .collect())
}

/// `c F*×F / (8π i)` at one point, before discarding the imaginary part.
pub fn poynting_complex(f: &CVec3, c: f64) -> CVec3 {
    conj_cross(f, f) * (Complex64::new(c / (8.0 * PI), 0.0) / I)
}

pub fn poynting_vector(weber: &WeberGrid) -> Result<Vec<Vec3>> {
    weber.require(Representation::Position)?;
    let c = weber.spec.c();
    let mut scale = 0.0;
    let mut residue: f64 = 0.0;
    let mut out = Vec::with_capacity(weber.len());
    for i in 0..weber.len() {
        let f = weber.at(i);
        let s = poynting_complex(&f, c);
        let re = s.map(|z| z.re);
        residue = residue.max(s.map(|z| z.im).amax());
        scale += re.norm() + c * energy_density_at(&f);
        out.push(re);
    }
    let scale = scale / weber.len() as f64;
    let tolerance = POYNTING_RESIDUE_TOLERANCE * scale;
    if residue > tolerance {
        return Err(Error::ImaginaryResidue { residue, tolerance });
    }
    Ok(out)
}

/// Riemann sum of the energy density over the box, in either representation.
pub fn total_energy(weber: &WeberGrid) -> f64 {
    let weight = match weber.representation {
        Representation::Position => weber.spec.cell_volume(),
        Representation::Momentum => weber.spec.mode_volume(),
    };
    let sum: f64 = (0..weber.len())
        .map(|i| energy_density_at(&weber.at(i)))
        .sum();
    sum * weight
}

/// Spin-1 matrices `(s_i)_{jk} = -i ε_{ijk}`, obeying `[s_i, s_j] = i ε_{ijk} s_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices {
    pub s: [Matrix3<Complex64>; 3],
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl SpinMatrices {
    pub fn new() -> Self {
        let s = std::array::from_fn(|i| {
            Matrix3::from_fn(|j, k| Complex64::new(0.0, -levi_civita(i, j, k)))
        });
        Self { s }
    }

    /// `(a† s_1 b, a† s_2 b, a† s_3 b)`
    pub fn sandwich(&self, a: &CVec3, b: &CVec3) -> CVec3 {
        let ad = a.adjoint();
        CVec3::from_fn(|i, _| (ad * self.s[i] * b)[(0, 0)])
    }
}

impl Default for SpinMatrices {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Units;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(n: usize) -> GridSpec {
        GridSpec::new(n, 2.0 * PI, Units::default()).unwrap()
    }

    fn uniform_pair(spec: GridSpec, e: [f64; 3], b: [f64; 3]) -> RealFieldPair {
        let len = spec.len();
        RealFieldPair::new(
            spec,
            0.0,
            std::array::from_fn(|a| vec![e[a]; len]),
            std::array::from_fn(|a| vec![b[a]; len]),
        )
        .unwrap()
    }

    /// Real and imaginary parts of √(4πI/c) e^{ik z}(1, i, 0) at t = 0.
    fn circular_pair(spec: GridSpec, intensity: f64, k: f64) -> RealFieldPair {
        let amp = (4.0 * PI * intensity / spec.c()).sqrt();
        let mut pair = RealFieldPair::zeros(spec, 0.0);
        for i in 0..spec.len() {
            let z = spec.position(i).z;
            let (s, c) = (k * z).sin_cos();
            pair.e_field[0][i] = amp * c;
            pair.e_field[1][i] = -amp * s;
            pair.b_field[0][i] = amp * s;
            pair.b_field[1][i] = amp * c;
        }
        pair
    }

    #[test]
    fn weber_of_uniform_fields() {
        let w = weber_from_eb(&uniform_pair(spec(4), [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])).unwrap();
        for i in 0..w.len() {
            let f = w.at(i);
            assert_eq!(f, CVec3::new(1.0.into(), I, 0.0.into()));
        }
        let z = weber_from_eb(&RealFieldPair::zeros(spec(4), 0.0)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let back = eb_from_weber(&w).unwrap();
        assert_eq!(back.e_field[0][3], 1.0);
        assert_eq!(back.b_field[1][3], 1.0);
        assert_eq!(back.b_field[0][3], 0.0);
    }

    #[test]
    fn circular_wave_matches_closed_form() {
        let s = spec(8);
        let w = weber_from_eb(&circular_pair(s, 1.0, 1.0)).unwrap();
        let amp = (4.0 * PI).sqrt();
        for i in 0..w.len() {
            let z = s.position(i).z;
            let phase = Complex64::from_polar(amp, z);
            let expected = CVec3::new(phase, I * phase, 0.0.into());
            assert!((w.at(i) - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn non_finite_input_reports_location() {
        let mut p = RealFieldPair::zeros(spec(4), 0.0);
        p.b_field[2][spec(4).flat_index(1, 2, 3)] = f64::NAN;
        match weber_from_eb(&p) {
            Err(Error::NonFinite {
                field,
                component,
                ix,
                iy,
                iz,
            }) => {
                assert_eq!((field, component, ix, iy, iz), ("B", 2, 1, 2, 3));
            }
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn momentum_input_has_no_real_split() {
        let w = WeberGrid::zeros(spec(4), Representation::Momentum, 0.0);
        assert!(matches!(
            eb_from_weber(&w),
            Err(Error::WrongRepresentation { .. })
        ));
        assert!(energy_density(&w).is_err());
        assert!(poynting_vector(&w).is_err());
    }

    #[test]
    fn circular_wave_energy_and_flux() {
        let s = spec(8);
        let intensity = 2.5;
        let w = weber_from_eb(&circular_pair(s, intensity, 1.0)).unwrap();
        for rho in energy_density(&w).unwrap() {
            assert_relative_eq!(rho, intensity / s.c(), max_relative = 1e-14);
        }
        for flux in poynting_vector(&w).unwrap() {
            assert!((flux - Vec3::new(0.0, 0.0, intensity)).norm() < 1e-13);
        }
    }

    #[test]
    fn unit_circular_wave_total_energy() {
        let w = weber_from_eb(&circular_pair(spec(8), 1.0, 1.0)).unwrap();
        assert_relative_eq!(total_energy(&w), (2.0 * PI).powi(3), max_relative = 1e-13);
        assert_relative_eq!(total_energy(&w), 248.050213442398, max_relative = 1e-12);
    }

    #[test]
    fn real_weber_has_no_flux() {
        let w = weber_from_eb(&uniform_pair(spec(4), [1.0, -2.0, 0.5], [0.0; 3])).unwrap();
        for s in poynting_vector(&w).unwrap() {
            assert_eq!(s, Vec3::zeros());
        }
    }

    #[test]
    fn spin_matrices_entries_and_commutators() {
        let sm = SpinMatrices::new();
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let s1 = Matrix3::new(z, z, z, z, z, -i, z, i, z);
        let s2 = Matrix3::new(z, z, i, z, z, z, -i, z, z);
        let s3 = Matrix3::new(z, -i, z, i, z, z, z, z, z);
        assert_eq!(sm.s, [s1, s2, s3]);
        for a in 0..3 {
            for b in 0..3 {
                let comm = sm.s[a] * sm.s[b] - sm.s[b] * sm.s[a];
                let mut expected = Matrix3::zeros();
                for c in 0..3 {
                    expected += sm.s[c] * Complex64::new(0.0, levi_civita(a, b, c));
                }
                assert_eq!(comm, expected, "[s{a}, s{b}]");
            }
        }
    }

    fn cvec() -> impl Strategy<Value = CVec3> {
        proptest::array::uniform6(-10.0f64..10.0).prop_map(|v| {
            CVec3::new(
                Complex64::new(v[0], v[1]),
                Complex64::new(v[2], v[3]),
                Complex64::new(v[4], v[5]),
            )
        })
    }

    proptest! {
        #[test]
        fn spin_sandwich_is_conjugate_cross(a in cvec(), b in cvec()) {
            let sm = SpinMatrices::new();
            let lhs = sm.sandwich(&a, &b);
            let rhs = conj_cross(&a, &b) * -I;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));
        }

        #[test]
        fn flux_bounded_by_energy(f in cvec()) {
            let s = poynting_complex(&f, 1.0).map(|z| z.re);
            prop_assert!(energy_density_at(&f) >= 0.0);
            prop_assert!(s.norm() <= energy_density_at(&f) * (1.0 + 1e-12));
        }

        #[test]
        fn eb_round_trip(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let s = spec(4);
            let e = std::array::from_fn(|_| (0..s.len()).map(|_| rng.random_range(-5.0..5.0)).collect());
            let b = std::array::from_fn(|_| (0..s.len()).map(|_| rng.random_range(-5.0..5.0)).collect());
            let pair = RealFieldPair::new(s, 0.3, e, b).unwrap();
            let back = eb_from_weber(&weber_from_eb(&pair).unwrap()).unwrap();
            prop_assert_eq!(&back.e_field, &pair.e_field);
            prop_assert_eq!(&back.b_field, &pair.b_field);
            prop_assert_eq!(back.time, 0.3);
        }
    }
}
