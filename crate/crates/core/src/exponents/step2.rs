//! Boundary estimate for `G2(R) = R^N int_{S^{N-1}} (|Du|^2 + R^{-2} u^2)`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::epsilon::{choose_epsilon, epsilon_cap, EpsilonLoss};
use super::{require_positive, DerivedExponents, ExponentError, ProblemParams, QSelection};
use crate::rational::{format_rational, int, max_rational, min_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step2Certificate {
    #[serde(with = "crate::rational::json")]
    pub z: Rational,
    #[serde(with = "crate::rational::json")]
    pub z_conj: Rational,
    #[serde(with = "crate::rational::json")]
    pub lambda1: Rational,
    #[serde(with = "crate::rational::json")]
    pub lambda2: Rational,
    #[serde(with = "crate::rational::json")]
    pub mu: Rational,
    #[serde(with = "crate::rational::json")]
    pub theta1: Rational,
    #[serde(with = "crate::rational::json")]
    pub theta2: Rational,
    #[serde(with = "crate::rational::json")]
    pub b2: Rational,
    #[serde(with = "crate::rational::json")]
    pub a2_at_0: Rational,
    #[serde(with = "crate::rational::json")]
    pub eps: Rational,
    #[serde(with = "crate::rational::json")]
    pub a2_at_eps: Rational,
}

/// Closed interval for `1/z`:
/// `max(1/k - 1/(N-1), 1/(N-1)) <= 1/z <= min(1/ell - 1/(N-1), 1/(1+p) + 1/(N-1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZWindow {
    pub lower: Rational,
    pub upper: Rational,
}

impl ZWindow {
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }
}

pub fn z_window(params: &ProblemParams, derived: &DerivedExponents, qsel: &QSelection) -> ZWindow {
    let one = Rational::one();
    let inv_n1 = &one / params.n1();
    let lower = max_rational(&(&one / &derived.k - &inv_n1), &inv_n1).clone();
    let upper = min_rational(&(&one / &qsel.ell - &inv_n1), &(&one / (&params.p + &one) + &inv_n1)).clone();
    ZWindow { lower, upper }
}

/// Reciprocals `(1/lambda1, 1/mu, 1/lambda2)` of the first-order sphere embeddings.
pub(crate) fn embedding_reciprocals(
    params: &ProblemParams,
    derived: &DerivedExponents,
    qsel: &QSelection,
) -> (Rational, Rational, Rational) {
    let one = Rational::one();
    let inv_n1 = &one / params.n1();
    (&one / &qsel.ell - &inv_n1, &one / &derived.k - &inv_n1, &one - &inv_n1)
}

/// `a2(eps) = (p tau/(1+eps))(theta1 + theta2) + (N/k)(2 - theta1 - theta2) - (N+2)`
pub(crate) fn a2_of_eps(
    params: &ProblemParams,
    derived: &DerivedExponents,
    theta1: &Rational,
    theta2: &Rational,
    eps: &Rational,
) -> Rational {
    let one = Rational::one();
    let n = params.n();
    let sum = theta1 + theta2;
    &params.p * &derived.tau / (&one + eps) * &sum + &n / &derived.k * (int(2) - &sum) - (n + int(2))
}

pub fn step2_certify(
    params: &ProblemParams,
    derived: &DerivedExponents,
    qsel: &QSelection,
) -> Result<Step2Certificate, ExponentError> {
    let one = Rational::one();
    let window = z_window(params, derived, qsel);
    if window.is_empty() {
        return Err(ExponentError::EmptyZWindow {
            dim: params.dim,
            lower: format_rational(&window.lower),
            upper: format_rational(&window.upper),
        });
    }
    let inv_z = window.upper;
    let inv_z_conj = &one - &inv_z;
    let (inv_lambda1, inv_mu, inv_lambda2) = embedding_reciprocals(params, derived, qsel);
    for (v, name) in
        [(&inv_lambda1, "1/lambda1"), (&inv_mu, "1/mu"), (&inv_lambda2, "1/lambda2"), (&inv_z_conj, "1/z'")]
    {
        require_positive(v, name)?;
    }

    let theta1 = (&inv_z - &inv_mu) / (&inv_lambda1 - &inv_mu);
    let theta2 = (&inv_z_conj - &inv_mu) / (&inv_lambda2 - &inv_mu);
    let b2 = &theta1 / &qsel.ell + &theta2 - int(2) / params.n1();
    require_positive(&b2, "b2")?;

    let p1 = &params.p + &one;
    let a2_at_0 = &p1 * (&derived.tau - params.n() / &p1) * &b2;
    require_positive(&a2_at_0, "a2(0)")?;

    let loss = EpsilonLoss {
        at_zero: a2_at_0.clone(),
        weight: &params.p * &derived.tau * (&theta1 + &theta2),
        offset: one.clone(),
    };
    let eps = choose_epsilon(&loss, &epsilon_cap(params, qsel))?;
    let a2_at_eps = a2_of_eps(params, derived, &theta1, &theta2, &eps);
    require_positive(&a2_at_eps, "a2(eps)")?;

    Ok(Step2Certificate {
        z: &one / &inv_z,
        z_conj: &one / inv_z_conj,
        lambda1: &one / inv_lambda1,
        lambda2: &one / inv_lambda2,
        mu: &one / inv_mu,
        theta1,
        theta2,
        b2,
        a2_at_0,
        eps,
        a2_at_eps,
    })
}
