//! Surface measure of the unit sphere.

use std::f64::consts::PI;

/// `Gamma(n/2)` for a positive integer `n`, by the half-integer recursion.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n > 0, "gamma_half needs n >= 1");
    let (mut value, mut x) = if n.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = f64::from(n) / 2.0;
    while x < target {
        value *= x;
        x += 1.0;
    }
    value
}

/// `omega_{N-1} = 2 pi^{N/2} / Gamma(N/2)`, the area of the unit sphere in R^N.
pub fn unit_sphere_area(dim: u32) -> f64 {
    2.0 * PI.powf(f64::from(dim) / 2.0) / gamma_half(dim)
}
