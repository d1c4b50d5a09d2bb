//! Small complex 3-vector helpers shared by the field modules.

use nalgebra::Vector3;
use num_complex::Complex64;

pub type Vec3 = Vector3<f64>;
pub type CVec3 = Vector3<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `a* · b`
pub fn hdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `a* · a`, always real and non-negative.
pub fn norm_sqr(a: &CVec3) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `a* × b`
pub fn conj_cross(a: &CVec3, b: &CVec3) -> CVec3 {
    a.map(|z| z.conj()).cross(b)
}

/// `-i a* × a`, which equals `2 Re(a) × Im(a)` and is real.
pub fn spin_current(a: &CVec3) -> Vec3 {
    let re = a.map(|z| z.re);
    let im = a.map(|z| z.im);
    2.0 * re.cross(&im)
}

pub fn complexify(v: &Vec3) -> CVec3 {
    v.map(|x| Complex64::new(x, 0.0))
}

pub fn to_array(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}
