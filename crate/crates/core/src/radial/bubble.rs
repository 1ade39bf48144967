use serde::Serialize;

use super::{RadialProfile, SolverError};

/// Default spacing and range for the bubble residual check.
pub const BUBBLE_CHECK_SPACING: f64 = 1e-3;
pub const BUBBLE_CHECK_RANGE: (f64, f64) = (0.1, 10.0);

/// Parameters of the critical bubble `c(N) (t / (t² + |x - x₀|²))^{(N-2)/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BubbleParams {
    dim: u32,
    t: f64,
    center: Vec<f64>,
}

impl BubbleParams {
    pub fn new(dim: u32, t: f64, center: Vec<f64>) -> Result<Self, SolverError> {
        if dim < 3 {
            return Err(SolverError::BubbleDimension(dim));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(SolverError::InvalidInput(format!("t must be > 0, got {t}")));
        }
        if center.len() != dim as usize || center.iter().any(|c| !c.is_finite()) {
            return Err(SolverError::InvalidInput(format!("center must be a finite point in R^{dim}")));
        }
        Ok(BubbleParams { dim, t, center })
    }

    /// Bubble centered at the origin.
    pub fn centered(dim: u32, t: f64) -> Result<Self, SolverError> {
        Self::new(dim, t, vec![0.0; dim as usize])
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

/// `c(N) = (N(N-2))^{(N-2)/4}`.
pub fn bubble_constant(dim: u32) -> f64 {
    let n = f64::from(dim);
    (n * (n - 2.0)).powf((n - 2.0) / 4.0)
}

/// Bubble value at a point `x ∈ R^N`.
pub fn bubble_value(bp: &BubbleParams, x: &[f64]) -> Result<f64, SolverError> {
    if x.len() != bp.center.len() {
        return Err(SolverError::InvalidInput(format!("point has {} coordinates, expected {}", x.len(), bp.dim)));
    }
    let r2: f64 = x.iter().zip(&bp.center).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(bubble_radial(bp.dim, bp.t, r2.sqrt()))
}

/// Bubble as a function of `r = |x - x₀|`.
pub fn bubble_radial(dim: u32, t: f64, r: f64) -> f64 {
    let m = (f64::from(dim) - 2.0) / 2.0;
    bubble_constant(dim) * (t / (t * t + r * r)).powf(m)
}

/// Radial derivative of [`bubble_radial`].
pub fn bubble_derivative(dim: u32, t: f64, r: f64) -> f64 {
    -(f64::from(dim) - 2.0) * r / (t * t + r * r) * bubble_radial(dim, t, r)
}

/// The bubble sampled on `grid` as a profile with `p = (N+2)/(N-2)`.
pub fn sample_bubble(dim: u32, t: f64, grid: Vec<f64>) -> Result<RadialProfile, SolverError> {
    let bp = BubbleParams::centered(dim, t)?;
    let n = f64::from(bp.dim);
    let u = grid.iter().map(|&r| bubble_radial(dim, t, r)).collect();
    let du = grid.iter().map(|&r| bubble_derivative(dim, t, r)).collect();
    RadialProfile::from_parts(dim, (n + 2.0) / (n - 2.0), bubble_radial(dim, t, 0.0), 0.0, grid, u, du, None)
}

/// Uniform grid `lo, lo + h, …` up to `hi` (inclusive within rounding).
pub fn uniform_grid(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let steps = ((hi - lo) / h).round() as usize;
    (0..=steps).map(|i| lo + i as f64 * h).collect()
}

/// Residual report for a bubble sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BubbleCheck {
    pub dim: u32,
    pub t: f64,
    pub max_residual: f64,
    pub grid_spacing: f64,
}

pub fn bubble_check(dim: u32, t: f64, spacing: f64) -> Result<BubbleCheck, SolverError> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(SolverError::InvalidInput(format!("grid spacing must be > 0, got {spacing}")));
    }
    let (lo, hi) = BUBBLE_CHECK_RANGE;
    let prof = sample_bubble(dim, t, uniform_grid(lo, hi, spacing))?;
    Ok(BubbleCheck { dim, t, max_residual: prof.pde_residual()?, grid_spacing: spacing })
}
