use thiserror::Error;

use crate::grid::Representation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid units: {0}")]
    InvalidUnits(String),

    #[error("non-finite {field} component {component} at grid index ({ix}, {iy}, {iz})")]
    NonFinite {
        field: &'static str,
        component: usize,
        ix: usize,
        iy: usize,
        iz: usize,
    },

    #[error("field has {found} samples, grid expects {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("operation requires {expected:?} representation, got {found:?}")]
    WrongRepresentation {
        expected: Representation,
        found: Representation,
    },

    #[error("state is not transverse: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotTransverse { residual: f64, tolerance: f64 },

    #[error("zero-frequency content fraction {fraction:e} exceeds tolerance {tolerance:e}; the photon weighting is singular at k = 0")]
    DcContent { fraction: f64, tolerance: f64 },

    #[error("field is identically zero")]
    ZeroField,

    #[error("Poynting vector has imaginary residue {residue:e} (tolerance {tolerance:e})")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error(
        "wave vector {requested:?} is not on the k-grid; nearest representable is {nearest:?}"
    )]
    OffGrid {
        requested: [f64; 3],
        nearest: [f64; 3],
    },

    #[error("invalid plane wave: {0}")]
    InvalidWave(String),

    #[error("invalid boost: {0}")]
    InvalidBoost(String),

    #[error("guidance denominator {denominator:e} below node floor {floor:e} at x = {position:?}, t = {time}")]
    Node {
        position: [f64; 3],
        time: f64,
        denominator: f64,
        floor: f64,
    },

    #[error("malformed field container: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
