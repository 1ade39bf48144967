use std::io::{self, Write};

use super::stencil::fd_weights;
use super::SolverError;

/// Half-width of the centered stencil used to differentiate `u'`.
const STENCIL_HALF_WIDTH: usize = 3;

/// A radial function `u(r)` on a strictly increasing grid, together with
/// `u'(r)` at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    dim: u32,
    p: f64,
    alpha: f64,
    series_radius: f64,
    grid: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
    first_zero: Option<f64>,
}

impl RadialProfile {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        dim: u32,
        p: f64,
        alpha: f64,
        series_radius: f64,
        grid: Vec<f64>,
        u: Vec<f64>,
        du: Vec<f64>,
        first_zero: Option<f64>,
    ) -> Result<Self, SolverError> {
        if grid.len() != u.len() || grid.len() != du.len() {
            return Err(SolverError::InvalidInput(format!(
                "grid/u/du lengths differ: {}/{}/{}",
                grid.len(),
                u.len(),
                du.len()
            )));
        }
        if grid.len() < 2 {
            return Err(SolverError::DegenerateGrid(grid.len()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] < 0.0 {
            return Err(SolverError::InvalidInput("grid must be nonnegative and strictly increasing".into()));
        }
        if grid.iter().chain(&u).chain(&du).any(|v| !v.is_finite()) {
            return Err(SolverError::InvalidInput("non-finite profile entry".into()));
        }
        if p.is_nan() || p <= 1.0 || dim == 0 {
            return Err(SolverError::InvalidInput(format!("need dim >= 1 and p > 1, got dim={dim}, p={p}")));
        }
        Ok(RadialProfile { dim, p, alpha, series_radius, grid, u, du, first_zero })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Center height `u(0)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Radius below which the profile came from the Taylor start rather than
    /// the integrator; residual checks skip it.
    pub fn series_radius(&self) -> f64 {
        self.series_radius
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn du(&self) -> &[f64] {
        &self.du
    }

    pub fn first_zero(&self) -> Option<f64> {
        self.first_zero
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Largest radius covered; the recorded zero when there is one.
    pub fn extent(&self) -> f64 {
        *self.grid.last().expect("profiles have at least two nodes")
    }

    pub fn start(&self) -> f64 {
        self.grid[0]
    }

    pub(crate) fn check_radius(&self, r: f64) -> Result<(), SolverError> {
        let (lo, hi) = (self.start(), self.extent());
        let slack = 1e-12 * hi.abs().max(1.0);
        if !(r.is_finite() && r >= lo - slack && r <= hi + slack) {
            return Err(SolverError::OutOfRange { r, lo, hi });
        }
        Ok(())
    }

    /// Index `i` of the interval `[r_i, r_{i+1}]` holding `r`.
    fn interval(&self, r: f64) -> usize {
        let idx = self.grid.partition_point(|&x| x <= r);
        idx.saturating_sub(1).min(self.grid.len() - 2)
    }

    /// `(u(r), u'(r))` by cubic Hermite interpolation on the grid.
    pub fn interpolate(&self, r: f64) -> Result<(f64, f64), SolverError> {
        self.check_radius(r)?;
        let r = r.clamp(self.start(), self.extent());
        let i = self.interval(r);
        Ok(hermite(self.grid[i], self.grid[i + 1], self.u[i], self.u[i + 1], self.du[i], self.du[i + 1], r))
    }

    /// The scaled solution `λ^{2/(p-1)} u(λ r)` on the grid `r_i / λ`.
    pub fn rescale(&self, lambda: f64) -> Result<RadialProfile, SolverError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(SolverError::InvalidInput(format!("scale factor must be positive, got {lambda}")));
        }
        let tau = 2.0 / (self.p - 1.0);
        let amp = lambda.powf(tau);
        let damp = amp * lambda;
        Ok(RadialProfile {
            dim: self.dim,
            p: self.p,
            alpha: self.alpha * amp,
            series_radius: self.series_radius / lambda,
            grid: self.grid.iter().map(|r| r / lambda).collect(),
            u: self.u.iter().map(|u| u * amp).collect(),
            du: self.du.iter().map(|d| d * damp).collect(),
            first_zero: self.first_zero.map(|z| z / lambda),
        })
    }

    /// `(r_i, |u'' + (N-1)u'/r + |u|^{p-1}u|)` at every node that carries a
    /// full centered stencil and lies beyond the series radius. `u''` is the
    /// centered finite-difference derivative of the stored `u'`.
    pub fn pde_residuals(&self) -> Result<Vec<(f64, f64)>, SolverError> {
        let n = self.grid.len();
        if n < 3 {
            return Err(SolverError::DegenerateGrid(n));
        }
        let m = STENCIL_HALF_WIDTH.min((n - 1) / 2);
        let nm1 = f64::from(self.dim) - 1.0;
        let mut out = Vec::new();
        for i in m..n - m {
            let r = self.grid[i];
            if r <= self.series_radius || r <= 0.0 {
                continue;
            }
            let nodes = &self.grid[i - m..=i + m];
            let weights = fd_weights(r, nodes, 1);
            let ddu: f64 = weights.iter().zip(&self.du[i - m..=i + m]).map(|(w, d)| w * d).sum();
            let u = self.u[i];
            let res = ddu + nm1 * self.du[i] / r + u.abs().powf(self.p - 1.0) * u;
            out.push((r, res.abs()));
        }
        Ok(out)
    }

    /// Max-abs residual over [`pde_residuals`](Self::pde_residuals); zero when
    /// no node qualifies.
    pub fn pde_residual(&self) -> Result<f64, SolverError> {
        Ok(self.pde_residuals()?.into_iter().fold(0.0, |acc, (_, r)| acc.max(r)))
    }

    /// CSV with header `r,u,du`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "r,u,du")?;
        for ((r, u), du) in self.grid.iter().zip(&self.u).zip(&self.du) {
            writeln!(out, "{r:.16e},{u:.16e},{du:.16e}")?;
        }
        Ok(())
    }
}

fn hermite(r0: f64, r1: f64, u0: f64, u1: f64, d0: f64, d1: f64, r: f64) -> (f64, f64) {
    let h = r1 - r0;
    let s = (r - r0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let u = (2.0 * s3 - 3.0 * s2 + 1.0) * u0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * u1
        + (s3 - s2) * h * d1;
    let du = (6.0 * s2 - 6.0 * s) * (u0 - u1) / h + (3.0 * s2 - 4.0 * s + 1.0) * d0 + (3.0 * s2 - 2.0 * s) * d1;
    (u, du)
}
