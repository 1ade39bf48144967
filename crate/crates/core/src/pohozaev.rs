//! Energy and boundary terms of the Pohozaev identity on radial profiles.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::radial::{RadialProfile, SolverError};
use crate::sphere::unit_sphere_area;

/// Floor added to the denominator of the relative residual.
pub const REL_RESIDUAL_FLOOR: f64 = 1e-30;

/// Number of radii used when none are given.
pub const DEFAULT_RADII_COUNT: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PohozaevError {
    #[error(transparent)]
    Profile(#[from] SolverError),
    #[error("feedback bound needs p below the critical exponent (dim={dim}, p={p})")]
    NotSubcritical { dim: u32, p: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// `N/(p+1) - (N-2)/2`; exactly zero when `p` is the critical exponent.
pub fn identity_coefficient(dim: u32, p: f64) -> f64 {
    let n = f64::from(dim);
    if dim > 2 && p == (n + 2.0) / (n - 2.0) {
        return 0.0;
    }
    (2.0 * n - (n - 2.0) * (p + 1.0)) / (2.0 * (p + 1.0))
}

/// Exponent `e` in `F_{P_λ}(R/λ) = λ^e F_P(R)`.
pub fn energy_scaling_exponent(dim: u32, p: f64) -> f64 {
    (p + 1.0) * 2.0 / (p - 1.0) - f64::from(dim)
}

fn integrand(prof: &RadialProfile, r: f64, u: f64) -> f64 {
    u.max(0.0).powf(prof.p() + 1.0) * r.powi(prof.dim() as i32 - 1)
}

fn simpson(prof: &RadialProfile, a: f64, fa: f64, b: f64, fb: f64) -> Result<f64, SolverError> {
    let mid = 0.5 * (a + b);
    let (um, _) = prof.interpolate(mid)?;
    Ok((b - a) / 6.0 * (fa + 4.0 * integrand(prof, mid, um) + fb))
}

/// `ω_{N-1} ∫ u^{p+1} r^{N-1} dr` from the first grid node to `R`.
#[allow(non_snake_case)]
pub fn energy_F(prof: &RadialProfile, r_big: f64) -> Result<f64, PohozaevError> {
    let (u_end, _) = prof.interpolate(r_big)?;
    let grid = prof.grid();
    let u = prof.u();
    let mut total = 0.0;
    let mut fa = integrand(prof, grid[0], u[0]);
    for i in 0..grid.len() - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        if a >= r_big {
            break;
        }
        if b >= r_big {
            let fb = integrand(prof, r_big, u_end);
            total += simpson(prof, a, fa, r_big, fb)?;
            break;
        }
        let fb = integrand(prof, b, u[i + 1]);
        total += simpson(prof, a, fa, b, fb)?;
        fa = fb;
    }
    Ok(unit_sphere_area(prof.dim()) * total)
}

/// `ω_{N-1} R^N u(R)^{p+1}`.
#[allow(non_snake_case)]
pub fn surface_G1(prof: &RadialProfile, r_big: f64) -> Result<f64, PohozaevError> {
    let (u, _) = prof.interpolate(r_big)?;
    Ok(unit_sphere_area(prof.dim()) * r_big.powi(prof.dim() as i32) * u.max(0.0).powf(prof.p() + 1.0))
}

/// `ω_{N-1} R^N (u'(R)² + u(R)²/R²)`.
#[allow(non_snake_case)]
pub fn surface_G2(prof: &RadialProfile, r_big: f64) -> Result<f64, PohozaevError> {
    let (u, du) = prof.interpolate(r_big)?;
    let mut inner = du * du;
    if r_big > 0.0 {
        inner += u * u / (r_big * r_big);
    }
    Ok(unit_sphere_area(prof.dim()) * r_big.powi(prof.dim() as i32) * inner)
}

/// Both sides of the identity at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PohozaevReport {
    #[serde(rename = "R")]
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

fn boundary_terms(prof: &RadialProfile, r_big: f64) -> Result<[f64; 3], PohozaevError> {
    let (u, du) = prof.interpolate(r_big)?;
    let n = f64::from(prof.dim());
    let p = prof.p();
    let w = unit_sphere_area(prof.dim()) * r_big.powi(prof.dim() as i32 - 1);
    Ok([w * r_big * u.max(0.0).powf(p + 1.0) / (p + 1.0), w * 0.5 * r_big * du * du, w * 0.5 * (n - 2.0) * u * du])
}

/// `lhs = (N/(p+1) - (N-2)/2) F(R)` against the boundary integral
/// `ω R^{N-1} [R u^{p+1}/(p+1) + (R/2) u'² + ((N-2)/2) u u']`.
pub fn pohozaev_sides(prof: &RadialProfile, r_big: f64) -> Result<PohozaevReport, PohozaevError> {
    let coef = identity_coefficient(prof.dim(), prof.p());
    let lhs = if coef == 0.0 { 0.0 } else { coef * energy_F(prof, r_big)? };
    let rhs: f64 = boundary_terms(prof, r_big)?.iter().sum();
    let abs_residual = (lhs - rhs).abs();
    Ok(PohozaevReport {
        r: r_big,
        lhs,
        rhs,
        abs_residual,
        rel_residual: abs_residual / (lhs.abs() + rhs.abs() + REL_RESIDUAL_FLOOR),
    })
}

/// Sum of the magnitudes of the boundary terms; the natural size against
/// which a cancelling right-hand side is judged.
pub fn boundary_scale(prof: &RadialProfile, r_big: f64) -> Result<f64, PohozaevError> {
    Ok(boundary_terms(prof, r_big)?.iter().map(|t| t.abs()).sum())
}

/// `C = max(1/(p+1), 1/2 + (N-2)/4) / (N/(p+1) - (N-2)/2)`.
pub fn feedback_constant(dim: u32, p: f64) -> Result<f64, PohozaevError> {
    let coef = identity_coefficient(dim, p);
    if coef.is_nan() || coef <= 0.0 {
        return Err(PohozaevError::NotSubcritical { dim, p });
    }
    let n = f64::from(dim);
    Ok((1.0 / (p + 1.0)).max(0.5 + (n - 2.0) / 4.0) / coef)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeedbackReport {
    pub holds: bool,
    #[serde(rename = "C_used")]
    pub c_used: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G1")]
    pub g1: f64,
    #[serde(rename = "G2")]
    pub g2: f64,
}

/// Checks `F(R) <= C (G1(R) + G2(R))`.
pub fn feedback_check(prof: &RadialProfile, r_big: f64) -> Result<FeedbackReport, PohozaevError> {
    let c_used = feedback_constant(prof.dim(), prof.p())?;
    let f = energy_F(prof, r_big)?;
    let g1 = surface_G1(prof, r_big)?;
    let g2 = surface_G2(prof, r_big)?;
    Ok(FeedbackReport { holds: f <= c_used * (g1 + g2), c_used, f, g1, g2 })
}

/// `F`, `G1`, `G2` tabulated over increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCurve {
    pub radii: Vec<f64>,
    pub f: Vec<f64>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
}

impl EnergyCurve {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// CSV with header `R,F,G1,G2`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "R,F,G1,G2")?;
        for i in 0..self.radii.len() {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", self.radii[i], self.f[i], self.g1[i], self.g2[i])?;
        }
        Ok(())
    }
}

pub fn energy_curve(prof: &RadialProfile, radii: &[f64]) -> Result<EnergyCurve, PohozaevError> {
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(PohozaevError::InvalidInput("radii must be strictly increasing".into()));
    }
    let rows = radii
        .par_iter()
        .map(|&r| Ok((energy_F(prof, r)?, surface_G1(prof, r)?, surface_G2(prof, r)?)))
        .collect::<Result<Vec<_>, PohozaevError>>()?;
    let mut curve = EnergyCurve { radii: radii.to_vec(), f: Vec::new(), g1: Vec::new(), g2: Vec::new() };
    for (f, g1, g2) in rows {
        curve.f.push(f);
        curve.g1.push(g1);
        curve.g2.push(g2);
    }
    Ok(curve)
}

/// `count` log-spaced radii from `0.1·R_stop` to `0.95·R_stop` inclusive.
pub fn log_spaced_radii(r_stop: f64, count: usize) -> Vec<f64> {
    let (lo, hi) = ((0.1 * r_stop).ln(), (0.95 * r_stop).ln());
    match count {
        0 => Vec::new(),
        1 => vec![0.95 * r_stop],
        _ => (0..count).map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp()).collect(),
    }
}

/// Default radii for a profile: [`DEFAULT_RADII_COUNT`] log-spaced points
/// below `min(r_max, first_zero)`.
pub fn default_radii(prof: &RadialProfile, r_max: f64) -> Vec<f64> {
    let r_stop = prof.first_zero().map_or(r_max, |z| z.min(r_max)).min(prof.extent());
    log_spaced_radii(r_stop, DEFAULT_RADII_COUNT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{sample_bubble, shoot, uniform_grid};

    fn zero() -> RadialProfile {
        shoot(3, 2.0, 0.0, 4.0, 1e-8).unwrap()
    }

    #[test]
    fn zero_profile_is_trivial() {
        let z = zero();
        for r in [0.0, 1.0, 4.0] {
            assert_eq!(energy_F(&z, r).unwrap(), 0.0);
            assert_eq!(surface_G1(&z, r).unwrap(), 0.0);
            assert_eq!(surface_G2(&z, r).unwrap(), 0.0);
            let rep = pohozaev_sides(&z, r).unwrap();
            assert_eq!((rep.lhs, rep.rhs, rep.rel_residual), (0.0, 0.0, 0.0));
            assert!(feedback_check(&z, r).unwrap().holds);
        }
    }

    #[test]
    fn beyond_extent_is_rejected() {
        let prof = shoot(3, 2.0, 1.0, 20.0, 1e-10).unwrap();
        let past = prof.extent() * 1.01;
        assert!(matches!(energy_F(&prof, past), Err(PohozaevError::Profile(SolverError::OutOfRange { .. }))));
        assert!(pohozaev_sides(&prof, past).is_err());
    }

    #[test]
    fn coefficient_vanishes_at_criticality() {
        for dim in 3..=12u32 {
            let n = f64::from(dim);
            assert_eq!(identity_coefficient(dim, (n + 2.0) / (n - 2.0)), 0.0);
            assert!(identity_coefficient(dim, 1.0 + 1.0 / n) > 0.0);
        }
        assert!((identity_coefficient(5, 2.0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn feedback_constant_worked_value() {
        assert!((feedback_constant(5, 2.0).unwrap() - 7.5).abs() < 1e-12);
        assert!(matches!(feedback_constant(5, 7.0 / 3.0), Err(PohozaevError::NotSubcritical { .. })));
        assert!(feedback_constant(5, 3.0).is_err());
    }

    // Oracle: F of u ≡ 1 on [0, R] in N = 3 is the ball volume 4πR³/3.
    #[test]
    fn energy_of_constant_is_ball_volume() {
        let grid = uniform_grid(0.0, 2.0, 0.05);
        let n = grid.len();
        let prof = RadialProfile::from_parts(3, 2.0, 1.0, 0.0, grid, vec![1.0; n], vec![0.0; n], None).unwrap();
        for r in [0.5, 1.23, 2.0] {
            let exact = 4.0 * std::f64::consts::PI * r * r * r / 3.0;
            assert!((energy_F(&prof, r).unwrap() - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn energy_is_nondecreasing() {
        let prof = shoot(4, 2.0, 1.0, 50.0, 1e-10).unwrap();
        let radii: Vec<f64> = (1..=40).map(|i| prof.extent() * f64::from(i) / 40.0).collect();
        let curve = energy_curve(&prof, &radii).unwrap();
        assert!(curve.f.windows(2).all(|w| w[1] >= w[0]));
        assert!(curve.g1.iter().chain(&curve.g2).all(|&g| g >= 0.0));
    }

    #[test]
    fn surface_terms_near_the_zero() {
        let prof = shoot(3, 2.0, 1.0, 20.0, 1e-10).unwrap();
        let r = prof.first_zero().unwrap() * (1.0 - 1e-9);
        let (_, du) = prof.interpolate(r).unwrap();
        assert!(surface_G1(&prof, r).unwrap() < 1e-20);
        let g2 = surface_G2(&prof, r).unwrap();
        let expect = unit_sphere_area(3) * r.powi(3) * du * du;
        assert!(g2 > 0.0 && (g2 / expect - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bubble_surface_decay_in_four_dimensions() {
        let prof = sample_bubble(4, 1.0, uniform_grid(0.0, 200.0, 0.01)).unwrap();
        let c4 = 8f64.sqrt();
        for r in [50.0_f64, 100.0, 200.0] {
            let g1 = surface_G1(&prof, r).unwrap();
            let u = c4 / (1.0 + r * r);
            let direct = unit_sphere_area(4) * r.powi(4) * u.powi(4);
            assert!((g1 / direct - 1.0).abs() < 1e-10);
            assert!((g1 / (unit_sphere_area(4) * c4.powi(4) * r.powi(-4)) - 1.0).abs() < 5.0 / (r * r));
        }
    }

    #[test]
    fn bubble_energy_converges() {
        let prof = sample_bubble(5, 1.0, {
            let mut g = uniform_grid(0.0, 1.0, 1e-3);
            g.extend((1..=4000).map(|i| 10f64.powf(f64::from(i) / 1000.0)));
            g
        })
        .unwrap();
        let values: Vec<f64> = [1e3, 2e3, 4e3, 8e3].iter().map(|&r| energy_F(&prof, r).unwrap()).collect();
        for w in values.windows(2) {
            assert!((w[1] - w[0]).abs() < 1e-6 * w[1], "{values:?}");
        }
        assert!((values[1] / values[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn log_radii_endpoints() {
        let r = log_spaced_radii(10.0, 8);
        assert_eq!(r.len(), 8);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[7] - 9.5).abs() < 1e-12);
        assert!(r.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn curve_csv_header() {
        let z = zero();
        let mut buf = Vec::new();
        energy_curve(&z, &[1.0, 2.0]).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("R,F,G1,G2\n1.0000000000000000e0,"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn unordered_radii_rejected() {
        assert!(energy_curve(&zero(), &[2.0, 1.0]).is_err());
    }
}
