use thiserror::Error;

use crate::units::{Dimension, Unit};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown unit tag `{0}`")]
    UnknownUnit(String),

    #[error("unit {unit:?} is not compatible with a quantity of dimension {dimension:?}")]
    DimensionMismatch { unit: Unit, dimension: Dimension },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a {0} curve")]
    UnsupportedCurve(&'static str),

    #[error("Franck-Condon overlaps require equal frequencies (got {0} and {1})")]
    UnequalFrequencies(f64, f64),

    #[error("potential difference does not change sign on [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("complex energy must have a positive imaginary part (got {0})")]
    NonRetardedEnergy(f64),

    #[error("Wronskian vanishes ({magnitude:e} relative to solution scale); grid or boundary seeding failed")]
    DegenerateWronskian { magnitude: f64 },

    #[error("position {x} lies outside the grid [{lo}, {hi}]")]
    OutsideGrid { x: f64, lo: f64, hi: f64 },

    #[error("sampled function has {got} points, grid has {expected}")]
    SampleLength { got: usize, expected: usize },

    #[error("partitioning denominator {0:e} is numerically singular")]
    ResonanceSingularity(f64),

    #[error("spectra are sampled on different photon-energy grids")]
    GridMismatch,

    #[error("time step too coarse: dt * E_max = {0:.3} (must stay below 0.1)")]
    TimeStepTooLarge(f64),

    #[error("wavepacket norm grew by {0:e} in one step; reduce the time step")]
    Unstable(f64),

    #[error("spectral tail integral needs N_max above {0}")]
    SpectralTailOrder(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
