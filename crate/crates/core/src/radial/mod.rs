//! Radial Lane-Emden profiles: shooting from the center, the closed-form
//! critical bubble, scaling, and residual checks.

mod bubble;
pub mod dopri;
mod profile;
mod shoot;
pub mod stencil;

use thiserror::Error;

pub use bubble::{
    bubble_check, bubble_constant, bubble_derivative, bubble_radial, bubble_value, sample_bubble, uniform_grid,
    BubbleCheck, BubbleParams, BUBBLE_CHECK_RANGE, BUBBLE_CHECK_SPACING,
};
pub use dopri::OdeError;
pub use profile::RadialProfile;
pub use shoot::{series_radius, shoot};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("integration failed: {0}")]
    Ode(#[from] OdeError),
    #[error("degenerate grid: {0} nodes")]
    DegenerateGrid(usize),
    #[error("radius {r} outside profile range [{lo}, {hi}]")]
    OutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("bubble needs dim >= 3, got {0}")]
    BubbleDimension(u32),
}

impl SolverError {
    /// Radius at which integration broke down, when known.
    pub fn radius(&self) -> Option<f64> {
        match self {
            SolverError::Ode(
                OdeError::NonFinite { at } | OdeError::StepUnderflow { at } | OdeError::TooManySteps { at },
            ) => Some(*at),
            _ => None,
        }
    }
}
