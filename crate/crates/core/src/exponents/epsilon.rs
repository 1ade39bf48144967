use num_traits::{Signed, Zero};

use super::{window::QSelection, ExponentError, ProblemParams};
use crate::rational::{int, min_rational, Rational};

/// The three decay exponents `a(eps)` all have the shape
/// `a(eps) = a0 - weight * eps / (offset (offset + eps))`,
/// nonincreasing in `eps > 0` when `weight >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonLoss {
    pub at_zero: Rational,
    pub weight: Rational,
    pub offset: Rational,
}

impl EpsilonLoss {
    pub fn value(&self, eps: &Rational) -> Rational {
        &self.at_zero - &self.weight * eps / (&self.offset * (&self.offset + eps))
    }
}

/// Upper limit for `eps`: half of `min(eps0, (q0 - q)/p)`, which keeps
/// `p(ell + eps) < q0`.
pub(crate) fn epsilon_cap(params: &ProblemParams, qsel: &QSelection) -> Rational {
    let room = (&qsel.q0 - &qsel.q) / &params.p;
    min_rational(&qsel.eps0, &room).clone() / int(2)
}

/// Largest `eps <= cap` with `a(eps) >= a(0)/2`. When the cap itself loses
/// more than half, `eps` solves `a(eps) = a(0)/2` exactly.
pub fn choose_epsilon(loss: &EpsilonLoss, cap: &Rational) -> Result<Rational, ExponentError> {
    if !loss.at_zero.is_positive() {
        return Err(ExponentError::Internal("a(0) must be positive before choosing eps".into()));
    }
    if !cap.is_positive() || loss.weight.is_negative() || !loss.offset.is_positive() {
        return Err(ExponentError::Internal("degenerate eps window".into()));
    }
    let half = &loss.at_zero / int(2);
    if loss.value(cap) >= half {
        return Ok(cap.clone());
    }
    // weight*eps = (a0/2) c (c + eps)  =>  eps = a0 c^2 / (2 weight - a0 c)
    let c = &loss.offset;
    let denom = int(2) * &loss.weight - &loss.at_zero * c;
    if denom.is_zero() || denom.is_negative() {
        return Err(ExponentError::Internal("eps equation has no positive root".into()));
    }
    Ok(&loss.at_zero * c * c / denom)
}
