//! Exact-rational exponent bookkeeping for the Lane-Emden Liouville argument.
//!
//! Everything here is derived from a single [`ProblemParams`] `(N, p)` and is
//! computed with arbitrary-precision rationals so that the identities tying
//! the exponents together can be checked with zero error.

mod certificate;
mod epsilon;
mod step1;
mod step2;
mod sweep;
mod window;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, int, Rational};
use crate::sphere::unit_sphere_area;

pub use certificate::{certify, verify_certificate, NonexistenceCertificate, Verification, Violation};
pub use epsilon::{choose_epsilon, EpsilonLoss};
pub use step1::{step1_certify, Step1Case, Step1Certificate};
pub use step2::{step2_certify, z_window, Step2Certificate, ZWindow};
pub use sweep::{midpoint_grid, sweep, sweep_params, tail_grid, CertificateRow, CertificateTable, RowStatus};
pub use window::{select_q, QSelection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("invalid parameters: {0}")]
    Domain(String),
    #[error("certificate refused: {0}")]
    Refused(Admissibility),
    /// The conjugate-exponent window of the gradient step is empty. This is
    /// the case for every N <= 3.
    #[error("empty z-window for N = {dim}: lower {lower} > upper {upper}")]
    EmptyZWindow { dim: u32, lower: String, upper: String },
    /// A positivity that must hold for admissible input failed.
    #[error("internal contradiction: {0}")]
    Internal(String),
}

impl ExponentError {
    /// Short machine-readable tag used in tables and CLI messages.
    pub fn tag(&self) -> String {
        match self {
            ExponentError::Domain(_) => "Domain".into(),
            ExponentError::Refused(a) => a.to_string(),
            ExponentError::EmptyZWindow { .. } => "EmptyZWindow".into(),
            ExponentError::Internal(_) => "Internal".into(),
        }
    }
}

/// The pair `(N, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub dim: u32,
    #[serde(with = "crate::rational::json")]
    pub p: Rational,
}

impl ProblemParams {
    pub fn new(dim: u32, p: Rational) -> Result<Self, ExponentError> {
        let params = ProblemParams { dim, p };
        params.validate()?;
        Ok(params)
    }

    pub fn parse(dim: u32, p: &str) -> Result<Self, ExponentError> {
        let p = rational::parse_rational(p).map_err(|e| ExponentError::Domain(e.to_string()))?;
        Self::new(dim, p)
    }

    pub fn validate(&self) -> Result<(), ExponentError> {
        if self.dim < 2 {
            return Err(ExponentError::Domain(format!("dimension must be >= 2, got {}", self.dim)));
        }
        if self.p <= Rational::one() {
            return Err(ExponentError::Domain(format!(
                "exponent must exceed 1, got {}",
                rational::format_rational(&self.p)
            )));
        }
        Ok(())
    }

    pub(crate) fn n(&self) -> Rational {
        int(i64::from(self.dim))
    }

    /// `N - 1` as a rational.
    pub(crate) fn n1(&self) -> Rational {
        int(i64::from(self.dim) - 1)
    }
}

impl fmt::Display for ProblemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N={}, p={})", self.dim, rational::format_rational(&self.p))
    }
}

/// Critical Sobolev exponent: `(N+2)/(N-2)`, or infinity in the plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalExponent {
    Finite(#[serde(with = "crate::rational::json")] Rational),
    Infinite,
}

impl CriticalExponent {
    pub fn for_dim(dim: u32) -> Self {
        if dim <= 2 {
            CriticalExponent::Infinite
        } else {
            let n = i64::from(dim);
            CriticalExponent::Finite(rational::ratio(n + 2, n - 2))
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            CriticalExponent::Finite(v) => Some(v),
            CriticalExponent::Infinite => None,
        }
    }

    /// `x < p_S`
    pub fn exceeds(&self, x: &Rational) -> bool {
        match self {
            CriticalExponent::Finite(v) => x < v,
            CriticalExponent::Infinite => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedExponents {
    pub p_s: CriticalExponent,
    /// `2/(p-1)`
    #[serde(with = "crate::rational::json")]
    pub tau: Rational,
    /// `(p+1)/p`
    #[serde(with = "crate::rational::json")]
    pub k: Rational,
    /// Surface measure of the unit sphere in R^N.
    pub omega: f64,
}

pub fn derive_exponents(params: &ProblemParams) -> Result<DerivedExponents, ExponentError> {
    params.validate()?;
    let one = Rational::one();
    let p = &params.p;
    Ok(DerivedExponents {
        p_s: CriticalExponent::for_dim(params.dim),
        tau: int(2) / (p - &one),
        k: (p + &one) / p,
        omega: unit_sphere_area(params.dim),
    })
}

/// Where `(N, p)` sits relative to the certifiable window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Admissibility {
    Admissible,
    /// `N >= 3` and `1 < p <= N/(N-2)`.
    SimpleRange,
    Supercritical,
    Critical,
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Admissibility::Admissible => "Admissible",
            Admissibility::SimpleRange => "SimpleRange",
            Admissibility::Supercritical => "Supercritical",
            Admissibility::Critical => "Critical",
        };
        f.write_str(s)
    }
}

pub fn admissible(params: &ProblemParams) -> Result<Admissibility, ExponentError> {
    params.validate()?;
    if params.dim == 2 {
        return Ok(Admissibility::Admissible);
    }
    let n = i64::from(params.dim);
    let p = &params.p;
    let p_s = rational::ratio(n + 2, n - 2);
    let simple_end = rational::ratio(n, n - 2);
    Ok(if *p == p_s {
        Admissibility::Critical
    } else if *p > p_s {
        Admissibility::Supercritical
    } else if *p <= simple_end {
        Admissibility::SimpleRange
    } else {
        Admissibility::Admissible
    })
}

/// `N/(p+1) - (N-2)/2`, the interior coefficient of the Pohozaev identity.
/// Vanishes exactly at the critical exponent.
pub fn pohozaev_coefficient(params: &ProblemParams) -> Rational {
    let one = Rational::one();
    params.n() / (&params.p + &one) - int(i64::from(params.dim) - 2) / int(2)
}

pub(crate) fn require_positive(value: &Rational, what: &str) -> Result<(), ExponentError> {
    if *value > Rational::zero() {
        Ok(())
    } else {
        Err(ExponentError::Internal(format!("{what} = {} is not positive", rational::format_rational(value))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn params(dim: u32, p: Rational) -> ProblemParams {
        ProblemParams::new(dim, p).unwrap()
    }

    #[test]
    fn derived_values() {
        let d = derive_exponents(&params(3, int(5))).unwrap();
        assert_eq!(d.p_s, CriticalExponent::Finite(int(5)));
        assert_eq!(d.tau, ratio(1, 2));
        assert_eq!(d.k, ratio(6, 5));

        let d = derive_exponents(&params(2, int(7))).unwrap();
        assert_eq!(d.p_s, CriticalExponent::Infinite);
        assert_eq!(d.tau, ratio(1, 3));

        let d = derive_exponents(&params(6, int(2))).unwrap();
        assert_eq!(d.p_s, CriticalExponent::Finite(int(2)));
        assert_eq!(d.tau, int(2));
        assert_eq!(d.k, ratio(3, 2));
        assert!((d.omega - std::f64::consts::PI.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(ProblemParams::new(1, int(2)), Err(ExponentError::Domain(_))));
        assert!(matches!(ProblemParams::new(3, int(1)), Err(ExponentError::Domain(_))));
        assert!(matches!(ProblemParams::new(3, ratio(1, 2)), Err(ExponentError::Domain(_))));
        let bad = ProblemParams { dim: 0, p: int(3) };
        assert!(derive_exponents(&bad).is_err());
        assert!(admissible(&bad).is_err());
    }

    #[test]
    fn admissibility_classes() {
        assert_eq!(admissible(&params(5, int(2))).unwrap(), Admissibility::Admissible);
        assert_eq!(admissible(&params(4, int(2))).unwrap(), Admissibility::SimpleRange);
        assert_eq!(admissible(&params(3, int(5))).unwrap(), Admissibility::Critical);
        assert_eq!(admissible(&params(3, int(3))).unwrap(), Admissibility::SimpleRange);
        assert_eq!(admissible(&params(3, ratio(11, 2))).unwrap(), Admissibility::Supercritical);
        assert_eq!(admissible(&params(2, int(1000))).unwrap(), Admissibility::Admissible);
        assert_eq!(admissible(&params(5, ratio(7, 3))).unwrap(), Admissibility::Critical);
    }

    #[test]
    fn pohozaev_coefficient_vanishes_at_critical() {
        for dim in 3..=12u32 {
            let n = i64::from(dim);
            let crit = params(dim, ratio(n + 2, n - 2));
            assert!(pohozaev_coefficient(&crit).is_zero());
        }
        assert_eq!(pohozaev_coefficient(&params(5, int(2))), ratio(1, 6));
    }
}
