//! Boundary estimate for `G1(R) = R^N int_{S^{N-1}} u^{p+1}`.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::epsilon::{choose_epsilon, epsilon_cap, EpsilonLoss};
use super::{require_positive, DerivedExponents, ExponentError, ProblemParams, QSelection};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step1Case {
    /// `1/ell < 2/(N-1) + 1/(1+p)`: `W^{2,ell+eps}` embeds in `L^{p+1}` on the sphere.
    Case1,
    /// Otherwise: interpolate `L^{p+1}` between `L^lambda` and `L^mu`.
    Case2,
}

impl fmt::Display for Step1Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step1Case::Case1 => "Case1",
            Step1Case::Case2 => "Case2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step1Certificate {
    pub case_tag: Step1Case,
    #[serde(with = "crate::rational::json_opt")]
    pub lambda: Option<Rational>,
    #[serde(with = "crate::rational::json_opt")]
    pub mu: Option<Rational>,
    #[serde(with = "crate::rational::json_opt")]
    pub theta: Option<Rational>,
    #[serde(with = "crate::rational::json")]
    pub b1: Rational,
    #[serde(with = "crate::rational::json")]
    pub a1_at_0: Rational,
    #[serde(with = "crate::rational::json")]
    pub eps: Rational,
    #[serde(with = "crate::rational::json")]
    pub a1_at_eps: Rational,
}

pub(crate) fn classify(params: &ProblemParams, qsel: &QSelection) -> Step1Case {
    let one = Rational::one();
    let threshold = int(2) / params.n1() + &one / (&params.p + &one);
    if one / &qsel.ell < threshold {
        Step1Case::Case1
    } else {
        Step1Case::Case2
    }
}

/// Reciprocals `(1/lambda, 1/mu)` of the two second-order sphere embeddings.
pub(crate) fn embedding_reciprocals(
    params: &ProblemParams,
    derived: &DerivedExponents,
    qsel: &QSelection,
) -> (Rational, Rational) {
    let one = Rational::one();
    let two_over = int(2) / params.n1();
    (&one / &qsel.ell - &two_over, &one / &derived.k - &two_over)
}

/// `a1(eps)` as displayed in the G1 estimate.
///
/// Case 2: `[theta (q tau/(ell+eps) - 2) - N/(1+p) - (2 - N/k)(1 - theta)](1+p)`.
/// Case 1: `-(p+1)(-tau + N/(p+1) + eps p tau/(ell+eps))`.
pub(crate) fn a1_of_eps(
    params: &ProblemParams,
    derived: &DerivedExponents,
    qsel: &QSelection,
    case: Step1Case,
    theta: Option<&Rational>,
    eps: &Rational,
) -> Option<Rational> {
    let one = Rational::one();
    let p1 = &params.p + &one;
    let n = params.n();
    let tau = &derived.tau;
    match case {
        Step1Case::Case1 => {
            let inner = -tau + &n / &p1 + eps * &params.p * tau / (&qsel.ell + eps);
            Some(-(p1 * inner))
        }
        Step1Case::Case2 => {
            let theta = theta?;
            let first = theta * (&qsel.q * tau / (&qsel.ell + eps) - int(2));
            let rest = &n / &p1 + (int(2) - &n / &derived.k) * (&one - theta);
            Some((first - rest) * p1)
        }
    }
}

pub fn step1_certify(
    params: &ProblemParams,
    derived: &DerivedExponents,
    qsel: &QSelection,
) -> Result<Step1Certificate, ExponentError> {
    let one = Rational::one();
    let p = &params.p;
    let p1 = p + &one;
    let n = params.n();
    let tau = &derived.tau;
    let case = classify(params, qsel);

    let (lambda, mu, theta, b1, a1_at_0, loss_weight) = match case {
        Step1Case::Case1 => {
            let a0 = &p1 * (tau - &n / &p1);
            let weight = &p1 * p * tau * &qsel.ell;
            (None, None, None, one.clone(), a0, weight)
        }
        Step1Case::Case2 => {
            let (inv_lambda, inv_mu) = embedding_reciprocals(params, derived, qsel);
            require_positive(&inv_lambda, "1/lambda")?;
            require_positive(&inv_mu, "1/mu")?;
            // 1/(1+p) = theta/lambda + (1-theta)/mu
            let theta = (&one / &p1 - &inv_mu) / (&inv_lambda - &inv_mu);
            let b1 = &one - p * (&one - &theta);
            let a0 = int(2) * (tau - (&n - int(2)) / int(2)) * &b1;
            let weight = &p1 * &theta * &qsel.q * tau;
            (Some(&one / inv_lambda), Some(&one / inv_mu), Some(theta), b1, a0, weight)
        }
    };
    require_positive(&b1, "b1")?;
    require_positive(&a1_at_0, "a1(0)")?;

    let loss = EpsilonLoss { at_zero: a1_at_0.clone(), weight: loss_weight, offset: qsel.ell.clone() };
    let eps = choose_epsilon(&loss, &epsilon_cap(params, qsel))?;
    let a1_at_eps = a1_of_eps(params, derived, qsel, case, theta.as_ref(), &eps)
        .ok_or_else(|| ExponentError::Internal("theta missing in Case2".into()))?;
    require_positive(&a1_at_eps, "a1(eps)")?;

    Ok(Step1Certificate { case_tag: case, lambda, mu, theta, b1, a1_at_0, eps, a1_at_eps })
}
