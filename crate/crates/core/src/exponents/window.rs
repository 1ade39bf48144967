use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{admissible, Admissibility, ExponentError, ProblemParams};
use crate::rational::{int, max_rational, ratio, Rational};

/// Local integrability data: `u` is in `L^{q0}(B_1)` with `q0 = gamma (p-1)/2`,
/// and the working exponent `q = ell p` sits strictly inside
/// `(max(p, (N-1)(p-1)/2), q0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSelection {
    #[serde(with = "crate::rational::json")]
    pub gamma: Rational,
    #[serde(with = "crate::rational::json")]
    pub q0: Rational,
    #[serde(with = "crate::rational::json")]
    pub eps0: Rational,
    #[serde(with = "crate::rational::json")]
    pub q: Rational,
    #[serde(with = "crate::rational::json")]
    pub ell: Rational,
}

impl QSelection {
    /// Lower end of the q-window, `max(p, (N-1)(p-1)/2)`.
    pub fn lower_bound(params: &ProblemParams) -> Rational {
        let one = Rational::one();
        let cond1 = params.n1() * (&params.p - &one) / int(2);
        max_rational(&params.p, &cond1).clone()
    }
}

/// Chooses `gamma = N` (largest admissible q0) and `q` at the midpoint of the
/// window. In the plane the window built from `gamma = 2` can be empty, so
/// `q0 = p + 1/2` and `q = p + 1/4` are used directly; `(N-1)(p-1)/2 < p`
/// holds automatically there.
pub fn select_q(params: &ProblemParams) -> Result<QSelection, ExponentError> {
    let class = admissible(params)?;
    if class != Admissibility::Admissible {
        return Err(ExponentError::Refused(class));
    }
    let p = &params.p;
    let one = Rational::one();
    let gamma = params.n();

    let (q0, q) = if params.dim == 2 {
        (p + ratio(1, 2), p + ratio(1, 4))
    } else {
        let q0 = &gamma * (p - &one) / int(2);
        let lower = QSelection::lower_bound(params);
        if lower >= q0 {
            return Err(ExponentError::Internal(format!("q-window empty for {params}")));
        }
        let q = (&lower + &q0) / int(2);
        (q0, q)
    };
    let eps0 = &q0 - p;
    let ell = &q / p;
    Ok(QSelection { gamma, q0, eps0, q, ell })
}
