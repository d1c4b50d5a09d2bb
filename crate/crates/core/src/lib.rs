//! Maxwell's vacuum equations read as a one-photon quantum theory.
//!
//! The crate works with the Weber (Riemann–Silberstein) vector `F = E + iB`
//! on periodic grids and with exact superpositions of circularly polarized
//! plane waves. On top of those it builds Good's photon wave function, the
//! photon number, two candidate probability density/current pairs, Lorentz
//! boosts of plane-wave states with a four-current audit, and Bohmian
//! guidance trajectories.

pub mod bohm;
pub mod doubleslit;
pub mod error;
pub mod fields;
pub mod grid;
pub mod io;
pub mod lorentz;
pub mod photon;
pub mod planewave;
pub mod spectral;
pub mod vecmath;

pub use error::{Error, Result};
