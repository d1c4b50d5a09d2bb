//! Bohmian guidance for photons.
//!
//! A particle at `x` moves with `v = J/ρ`. With the photon wave function
//! this is `v = −ic φ*×φ / φ*·φ`; with the Weber vector it is the Poynting
//! flux over the energy density, `v = S/ρ_E`. Both are bounded by `c`.
//! Where the denominator falls below a floor the velocity is undefined and
//! a [`Node`](crate::Error::Node) error is returned instead.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{boost_plane_wave, Boost};
use crate::photon::Recipe;
use crate::planewave::{AmplitudeKind, FlowExpansion, PlaneWaveSuperposition};
use crate::vecmath::{to_array, Vec3};

/// Which density/current pair drives the particle.
pub type Guidance = Recipe;

/// Node floor relative to the largest value the denominator can take.
pub const DEFAULT_NODE_FLOOR: f64 = 1e-12;

/// Velocity field of one state under one guidance law.
#[derive(Debug, Clone)]
pub struct GuidanceField {
    flow: FlowExpansion,
    floor: f64,
    guidance: Guidance,
}

impl GuidanceField {
    /// `relative_floor` is measured against `(Σ_a |A_a|)²`, the supremum
    /// of the denominator over all of spacetime.
    pub fn new(state: &PlaneWaveSuperposition, guidance: Guidance, relative_floor: f64) -> Self {
        let (flow, bound) = match guidance {
            Recipe::PhiBased => (state.phi_flow(), state.density_bound(AmplitudeKind::Phi)),
            Recipe::WeberBased => (
                state.energy_flow(),
                state.density_bound(AmplitudeKind::Weber) / (8.0 * std::f64::consts::PI),
            ),
        };
        Self {
            flow,
            floor: relative_floor * bound,
            guidance,
        }
    }

    pub fn guidance(&self) -> Guidance {
        self.guidance
    }

    /// Absolute denominator floor.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn density(&self, x: &Vec3, t: f64) -> f64 {
        self.flow.density(x, t)
    }

    pub fn velocity(&self, x: &Vec3, t: f64) -> Result<Vec3> {
        let rho = self.flow.density(x, t);
        if rho.is_nan() || rho <= self.floor {
            return Err(Error::Node {
                position: to_array(x),
                time: t,
                denominator: rho,
                floor: self.floor,
            });
        }
        Ok(self.flow.current(x, t) / rho)
    }
}

pub fn guidance_velocity(
    state: &PlaneWaveSuperposition,
    x: &Vec3,
    t: f64,
    guidance: Guidance,
) -> Result<Vec3> {
    GuidanceField::new(state, guidance, DEFAULT_NODE_FLOOR).velocity(x, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    /// Largest time step; the actual step divides the interval evenly.
    pub step: f64,
    pub node_floor: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            step: 1e-2,
            node_floor: DEFAULT_NODE_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: [f64; 3],
    pub v: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub guidance: Guidance,
    pub frame: String,
    pub samples: Vec<TrajectorySample>,
    /// Set when a node stopped the run before the final time.
    pub halted_at_node: bool,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectories start with one sample")
    }

    pub fn max_speed(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |m, s| m.max(Vec3::from(s.v).norm()))
    }
}

fn rk4_step(field: &GuidanceField, x: &Vec3, t: f64, h: f64, v0: &Vec3) -> Result<Vec3> {
    let k2 = field.velocity(&(x + v0 * (h / 2.0)), t + h / 2.0)?;
    let k3 = field.velocity(&(x + k2 * (h / 2.0)), t + h / 2.0)?;
    let k4 = field.velocity(&(x + k3 * h), t + h)?;
    Ok(x + (v0 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Classical fourth-order Runge–Kutta with `⌈|t1 − t0|/step⌉` equal steps.
/// A start on a node is an error; a node met later ends the run early with
/// the samples gathered so far.
pub fn integrate_in_field(
    field: &GuidanceField,
    frame: &str,
    x0: &Vec3,
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidWave(format!(
            "step must be positive, got {step}"
        )));
    }
    let steps = ((t1 - t0).abs() / step).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let mut v = field.velocity(x0, t0)?;
    let mut x = *x0;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample {
        t: t0,
        x: to_array(&x),
        v: to_array(&v),
    });
    let mut halted_at_node = false;
    for i in 1..=steps {
        let t_prev = t0 + h * (i - 1) as f64;
        let t = if i == steps { t1 } else { t0 + h * i as f64 };
        let next = rk4_step(field, &x, t_prev, h, &v)
            .and_then(|x_new| Ok((x_new, field.velocity(&x_new, t)?)));
        match next {
            Ok((x_new, v_new)) => {
                x = x_new;
                v = v_new;
                samples.push(TrajectorySample {
                    t,
                    x: to_array(&x),
                    v: to_array(&v),
                });
            }
            Err(Error::Node { .. }) => {
                halted_at_node = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trajectory {
        guidance: field.guidance(),
        frame: frame.to_string(),
        samples,
        halted_at_node,
    })
}

pub fn integrate_trajectory(
    state: &PlaneWaveSuperposition,
    x0: &Vec3,
    t0: f64,
    t1: f64,
    guidance: Guidance,
    control: &StepControl,
) -> Result<Trajectory> {
    let field = GuidanceField::new(state, guidance, control.node_floor);
    integrate_in_field(&field, &state.frame, x0, t0, t1, control.step)
}

/// Integrates every start point independently, in parallel. Results keep
/// the order of `starts`.
pub fn integrate_ensemble(
    state: &PlaneWaveSuperposition,
    starts: &[Vec3],
    t0: f64,
    t1: f64,
    guidance: Guidance,
    control: &StepControl,
) -> Vec<Result<Trajectory>> {
    let field = GuidanceField::new(state, guidance, control.node_floor);
    starts
        .par_iter()
        .map(|x0| integrate_in_field(&field, &state.frame, x0, t0, t1, control.step))
        .collect()
}

/// Relative rounding allowance when a density touches its bound.
const BOUND_SLACK: f64 = 1e-12;

/// Draws `count` points from the density `rho` restricted to the box
/// `[origin, origin + extent]` by rejection against the constant `bound`,
/// which must dominate `rho` on the box.
pub fn rejection_sample<R: Rng + ?Sized>(
    rho: impl Fn(&Vec3) -> f64,
    bound: f64,
    origin: &Vec3,
    extent: &Vec3,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec3>> {
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidWave(format!(
            "sampling bound must be positive, got {bound}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = origin + extent.component_mul(&Vec3::new(rng.random(), rng.random(), rng.random()));
        let r = rho(&x);
        // Analytic bounds are attained exactly, so allow for rounding.
        if r > bound * (1.0 + BOUND_SLACK) {
            return Err(Error::InvalidWave(format!(
                "density {r} exceeds sampling bound {bound} at {:?}",
                to_array(&x)
            )));
        }
        if rng.random::<f64>() * bound < r {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameCheck {
    /// Velocity in the original frame.
    pub velocity: [f64; 3],
    /// Relativistic composition of `velocity` with the boost.
    pub route1: [f64; 3],
    /// Guidance law applied to the boosted state at the boosted event.
    pub route2: [f64; 3],
    pub mismatch: f64,
}

/// The two ways of getting a particle velocity in a moving frame: compose
/// the original velocity with the boost, or boost the state and reapply
/// the guidance law.
pub fn frame_consistency_check(
    state: &PlaneWaveSuperposition,
    boost: &Boost,
    x: &Vec3,
    t: f64,
    guidance: Guidance,
) -> Result<FrameCheck> {
    let v = guidance_velocity(state, x, t, guidance)?;
    let route1 = boost.transform_velocity(&v);
    let boosted = boost_plane_wave(state, boost)?;
    let (x_new, t_new) = boost.transform_event(x, t);
    let route2 = guidance_velocity(&boosted, &x_new, t_new, guidance)?;
    Ok(FrameCheck {
        velocity: to_array(&v),
        route1: to_array(&route1),
        route2: to_array(&route2),
        mismatch: (route1 - route2).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Units;
    use crate::planewave::{CircularPlaneWave, Handedness};
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn units() -> Units {
        Units::default()
    }

    fn single() -> PlaneWaveSuperposition {
        PlaneWaveSuperposition::single_circular(1.0, 1.0, units()).unwrap()
    }

    fn pair() -> PlaneWaveSuperposition {
        PlaneWaveSuperposition::counter_propagating(1.0, 2.0, 1.0, units()).unwrap()
    }

    fn boosted_pair() -> PlaneWaveSuperposition {
        boost_plane_wave(&pair(), &Boost::along(Vec3::x(), 0.5, &units()).unwrap()).unwrap()
    }

    const BOTH: [Guidance; 2] = [Recipe::PhiBased, Recipe::WeberBased];

    #[test]
    fn reference_velocities() {
        let pts = [Vec3::zeros(), Vec3::new(0.3, -2.0, 1.1)];
        for x in pts {
            for g in BOTH {
                let v = guidance_velocity(&single(), &x, 0.7, g).unwrap();
                assert!((v - Vec3::z()).norm() < 1e-14);
            }
            let v = guidance_velocity(&pair(), &x, 0.7, Recipe::PhiBased).unwrap();
            assert!((v - Vec3::z() / 3.0).norm() < 1e-14);
            let v = guidance_velocity(&pair(), &x, 0.7, Recipe::WeberBased).unwrap();
            assert!(v.norm() < 1e-14);
        }
    }

    #[test]
    fn nodes_are_reported() {
        // equal right- and left-handed waves along +ẑ: φ ∝ cos(kz − ωt)
        let u = units();
        let r = CircularPlaneWave::new(Vec3::z(), 1.0, Handedness::Right, 0.0).unwrap();
        let l = CircularPlaneWave {
            handedness: Handedness::Left,
            ..r
        };
        let s = PlaneWaveSuperposition::new(vec![r, l], u);
        let node = Vec3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2);
        for g in BOTH {
            assert!(matches!(
                guidance_velocity(&s, &node, 0.0, g),
                Err(Error::Node { .. })
            ));
            let err = integrate_trajectory(&s, &node, 0.0, 1.0, g, &StepControl::default());
            assert!(matches!(err, Err(Error::Node { .. })));
        }
        assert!(matches!(
            guidance_velocity(
                &PlaneWaveSuperposition::empty(u),
                &Vec3::zeros(),
                0.0,
                Recipe::PhiBased
            ),
            Err(Error::Node { .. })
        ));
    }

    #[test]
    fn run_halts_when_density_drops_below_floor() {
        let s = boosted_pair();
        let field = GuidanceField::new(&s, Recipe::PhiBased, 1.0);
        // start on a density crest, half an interference period from the origin
        let k = s.phi_flow().interference_wave_vectors()[0].0;
        let x0 = k * (std::f64::consts::PI / k.norm_squared());
        let rho0 = field.density(&x0, 0.0);
        // a floor just under the starting density stops the run once the
        // particle drifts into a thinner region
        let floor = 0.99 * rho0 / (field.floor());
        let control = StepControl {
            step: 1e-2,
            node_floor: floor,
        };
        let tr = integrate_trajectory(&s, &x0, 0.0, 20.0, Recipe::PhiBased, &control).unwrap();
        assert!(tr.halted_at_node);
        assert!(tr.samples.len() > 1 && tr.last().t < 20.0);
    }

    #[test]
    fn constant_fields_give_straight_lines() {
        let control = StepControl {
            step: 0.013,
            ..Default::default()
        };
        for g in BOTH {
            let tr =
                integrate_trajectory(&single(), &Vec3::zeros(), 0.0, 1.0, g, &control).unwrap();
            assert!(!tr.halted_at_node);
            assert_eq!(tr.last().t, 1.0);
            assert!((Vec3::from(tr.last().x) - Vec3::z()).norm() < 1e-12);
        }
        let tr = integrate_trajectory(
            &pair(),
            &Vec3::new(1.0, 0.0, 0.0),
            0.0,
            3.0,
            Recipe::PhiBased,
            &control,
        )
        .unwrap();
        assert!((Vec3::from(tr.last().x) - Vec3::new(1.0, 0.0, 1.0)).norm() < 1e-12);
        let tr = integrate_trajectory(
            &single(),
            &Vec3::zeros(),
            0.0,
            -1.0,
            Recipe::PhiBased,
            &control,
        )
        .unwrap();
        assert!((Vec3::from(tr.last().x) + Vec3::z()).norm() < 1e-12);
    }

    #[test]
    fn fourth_order_convergence() {
        let s = boosted_pair();
        let x0 = Vec3::new(0.1, 0.0, 0.2);
        let end = |h: f64| {
            let c = StepControl {
                step: h,
                ..Default::default()
            };
            Vec3::from(
                integrate_trajectory(&s, &x0, 0.0, 2.0, Recipe::PhiBased, &c)
                    .unwrap()
                    .last()
                    .x,
            )
        };
        let h = 0.2;
        let reference = end(h / 20.0);
        let e1 = (end(h) - reference).norm();
        let e2 = (end(h / 2.0) - reference).norm();
        let ratio = e1 / e2;
        assert!(
            (12.0..20.0).contains(&ratio),
            "ratio {ratio}, errors {e1:e} {e2:e}"
        );
    }

    #[test]
    fn speeds_never_exceed_c() {
        let s = boosted_pair();
        let starts: Vec<Vec3> = (0..16)
            .map(|i| Vec3::new(0.37 * i as f64, 0.1, -0.2 * i as f64))
            .collect();
        for g in BOTH {
            for tr in integrate_ensemble(&s, &starts, 0.0, 3.0, g, &StepControl::default()) {
                let tr = tr.unwrap();
                assert!(tr.max_speed() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn frame_checks() {
        let u = units();
        let x = Vec3::new(0.2, -0.4, 0.7);
        for axis in [Vec3::x(), Vec3::z()] {
            let b = Boost::along(axis, 0.5, &u).unwrap();
            for g in BOTH {
                let fc = frame_consistency_check(&single(), &b, &x, 0.3, g).unwrap();
                assert!(fc.mismatch < 1e-10, "{fc:?}");
                assert_relative_eq!(Vec3::from(fc.route2).norm(), 1.0, max_relative = 1e-12);
            }
        }
        let z = Boost::along(Vec3::z(), 0.5, &u).unwrap();
        assert!(
            frame_consistency_check(&pair(), &z, &x, 0.3, Recipe::PhiBased)
                .unwrap()
                .mismatch
                < 1e-10
        );
        let fc = frame_consistency_check(&pair(), &z, &x, 0.3, Recipe::WeberBased).unwrap();
        assert!((Vec3::from(fc.route1) + 0.5 * Vec3::z()).norm() < 1e-14);
        assert!(
            (Vec3::from(fc.route2) + 0.8 * Vec3::z()).norm() < 1e-12,
            "{fc:?}"
        );
        let xb = Boost::along(Vec3::x(), 0.5, &u).unwrap();
        for g in BOTH {
            let fc = frame_consistency_check(&pair(), &xb, &Vec3::zeros(), 0.0, g).unwrap();
            assert!(fc.mismatch > 0.01, "{g:?} {fc:?}");
        }
    }

    #[test]
    fn rejection_sampling_respects_density() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts = rejection_sample(
            |x: &Vec3| if x.x < 0.5 { 1.0 } else { 0.0 },
            1.0,
            &Vec3::zeros(),
            &Vec3::new(1.0, 2.0, 3.0),
            500,
            &mut rng,
        )
        .unwrap();
        assert_eq!(pts.len(), 500);
        assert!(pts
            .iter()
            .all(|p| p.x < 0.5 && p.y < 2.0 && p.z < 3.0 && p.min() >= 0.0));
        let too_small = rejection_sample(
            |_: &Vec3| 2.0,
            1.0,
            &Vec3::zeros(),
            &Vec3::repeat(1.0),
            1,
            &mut rng,
        );
        assert!(too_small.is_err());
    }
}
