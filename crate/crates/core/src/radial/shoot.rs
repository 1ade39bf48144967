use super::dopri::{Dopri5, Flow};
use super::{RadialProfile, SolverError};

/// Nodes used for the identically-zero profile.
const ZERO_PROFILE_NODES: usize = 65;

/// Each accepted step contributes this many grid intervals, the interior
/// nodes coming from the step's dense output.
const NODES_PER_STEP: usize = 4;

/// Radius of the Taylor start: `tol^{1/4} · max(1, α)^{-(p-1)/4}`.
pub fn series_radius(tol: f64, p: f64, alpha: f64) -> f64 {
    tol.powf(0.25) * alpha.max(1.0).powf(-(p - 1.0) / 4.0)
}

/// Integrates `u'' + (N-1)u'/r + |u|^{p-1}u = 0` from `u(0) = α`, `u'(0) = 0`
/// out to `r_max`, stopping early at the first zero of `u`.
pub fn shoot(dim: u32, p: f64, alpha: f64, r_max: f64, tol: f64) -> Result<RadialProfile, SolverError> {
    if dim == 0 {
        return Err(SolverError::InvalidInput("dim must be positive".into()));
    }
    if !(p.is_finite() && p > 1.0) {
        return Err(SolverError::InvalidInput(format!("p must be a finite real > 1, got {p}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(SolverError::InvalidInput(format!("alpha must be >= 0, got {alpha}")));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(SolverError::InvalidInput(format!("rmax must be > 0, got {r_max}")));
    }
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(SolverError::InvalidInput(format!("tol must lie in (0, 1), got {tol}")));
    }

    if alpha == 0.0 {
        let last = (ZERO_PROFILE_NODES - 1) as f64;
        let grid = (0..ZERO_PROFILE_NODES).map(|i| r_max * i as f64 / last).collect();
        return RadialProfile::from_parts(
            dim,
            p,
            0.0,
            0.0,
            grid,
            vec![0.0; ZERO_PROFILE_NODES],
            vec![0.0; ZERO_PROFILE_NODES],
            None,
        );
    }

    let n = f64::from(dim);
    let r_s = series_radius(tol, p, alpha).min(0.5 * r_max);
    let ap = alpha.powf(p);
    let u_s = alpha - ap * r_s * r_s / (2.0 * n);
    let du_s = -ap * r_s / n;

    let mut grid = vec![0.0, r_s];
    let mut u = vec![alpha, u_s];
    let mut du = vec![0.0, du_s];
    let mut first_zero = None;

    if u_s <= 0.0 {
        return Err(SolverError::InvalidInput(format!(
            "series start left the positive branch at r = {r_s}; lower tol"
        )));
    }

    let field = |r: f64, y: &[f64; 2]| [y[1], -(n - 1.0) * y[1] / r - y[0].abs().powf(p - 1.0) * y[0]];
    Dopri5::new(tol).integrate(field, r_s, [u_s, du_s], r_max, r_s, |step| {
        let mut record = |end: f64| {
            let start = step.t0;
            for j in 1..NODES_PER_STEP {
                let r = start + (end - start) * j as f64 / NODES_PER_STEP as f64;
                let y = step.eval(r);
                grid.push(r);
                u.push(y[0]);
                du.push(y[1]);
            }
        };
        if step.y1[0] > 0.0 {
            record(step.t1());
            grid.push(step.t1());
            u.push(step.y1[0]);
            du.push(step.y1[1]);
            return Flow::Continue;
        }
        let (mut lo, mut hi) = (step.t0, step.t1());
        let width = 1e-12 * step.h;
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if step.eval(mid)[0] > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let y = step.eval(hi);
        record(hi);
        grid.push(hi);
        u.push(y[0]);
        du.push(y[1]);
        first_zero = Some(hi);
        Flow::Stop
    })?;

    RadialProfile::from_parts(dim, p, alpha, r_s, grid, u, du, first_zero)
}
