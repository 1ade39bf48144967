use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::step1::{self, a1_of_eps, Step1Case, Step1Certificate};
use super::step2::{self, a2_of_eps, z_window, Step2Certificate};
use super::{
    admissible, derive_exponents, select_q, Admissibility, CriticalExponent, DerivedExponents, ExponentError,
    ProblemParams, QSelection,
};
use crate::rational::{format_rational, in_closed_unit, int, min_rational, Rational};
use crate::sphere::unit_sphere_area;

/// Everything needed to replay the feedback estimate `F(R)^b <= C R^{-a}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    pub params: ProblemParams,
    pub derived: DerivedExponents,
    pub qsel: QSelection,
    pub step1: Step1Certificate,
    pub step2: Step2Certificate,
    #[serde(with = "crate::rational::json")]
    pub a: Rational,
    #[serde(with = "crate::rational::json")]
    pub b: Rational,
}

pub fn certify(params: &ProblemParams) -> Result<NonexistenceCertificate, ExponentError> {
    let class = admissible(params)?;
    if class != Admissibility::Admissible {
        return Err(ExponentError::Refused(class));
    }
    let derived = derive_exponents(params)?;
    let qsel = select_q(params)?;
    let s1 = step1::step1_certify(params, &derived, &qsel)?;
    let s2 = step2::step2_certify(params, &derived, &qsel)?;
    let a = min_rational(&s1.a1_at_eps, &s2.a2_at_eps).clone();
    let b = min_rational(&s1.b1, &s2.b2).clone();
    let cert = NonexistenceCertificate { params: params.clone(), derived, qsel, step1: s1, step2: s2, a, b };

    let check = verify_certificate(&cert);
    if !check.passed() {
        return Err(ExponentError::Internal(format!("fresh certificate failed verification: {:?}", check.violations)));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub violations: Vec<Violation>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, clause: &str) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }

    fn check(&mut self, ok: bool, clause: &'static str, detail: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(Violation { clause, detail: detail() });
        }
    }

    fn same(&mut self, clause: &'static str, stored: &Rational, expected: &Rational) {
        self.check(stored == expected, clause, || {
            format!("stored {} but expected {}", format_rational(stored), format_rational(expected))
        });
    }
}

fn recip(x: &Rational) -> Option<Rational> {
    (!x.is_zero()).then(|| Rational::one() / x)
}

/// Re-derives every identity and inequality of the certificate from its raw
/// fields using exact arithmetic. Does not call the construction path, so
/// hand-edited certificates are judged on their own terms.
pub fn verify_certificate(cert: &NonexistenceCertificate) -> Verification {
    let mut v = Verification::default();
    let params = &cert.params;

    if let Err(e) = params.validate() {
        v.check(false, "params valid", || e.to_string());
        return v;
    }
    let class = admissible(params).unwrap_or(Admissibility::Supercritical);
    v.check(class == Admissibility::Admissible, "params admissible", || class.to_string());

    check_derived(&mut v, params, &cert.derived);
    check_qsel(&mut v, params, &cert.derived, &cert.qsel);
    check_step1(&mut v, params, &cert.derived, &cert.qsel, &cert.step1);
    check_step2(&mut v, params, &cert.derived, &cert.qsel, &cert.step2);

    let a_min = min_rational(&cert.step1.a1_at_eps, &cert.step2.a2_at_eps);
    v.same("a = min(a1, a2)", &cert.a, a_min);
    let b_min = min_rational(&cert.step1.b1, &cert.step2.b2);
    v.same("b = min(b1, b2)", &cert.b, b_min);
    v.check(cert.a.is_positive(), "a positive", || format_rational(&cert.a));
    v.check(cert.b.is_positive() && cert.b <= Rational::one(), "b in (0, 1]", || format_rational(&cert.b));
    v
}

fn check_derived(v: &mut Verification, params: &ProblemParams, d: &DerivedExponents) {
    let one = Rational::one();
    let p = &params.p;
    v.check(d.p_s == CriticalExponent::for_dim(params.dim), "p_S matches dimension", || format!("{:?}", d.p_s));
    v.same("tau = 2/(p-1)", &d.tau, &(int(2) / (p - &one)));
    v.same("k = (p+1)/p", &d.k, &(&(p + &one) / p));
    v.check(int(2) + &d.tau == p * &d.tau, "2 + tau = p tau", || format_rational(&d.tau));
    let omega = unit_sphere_area(params.dim);
    v.check((d.omega - omega).abs() <= 1e-12 * omega, "omega matches sphere area", || {
        format!("{} vs {}", d.omega, omega)
    });
}

fn check_qsel(v: &mut Verification, params: &ProblemParams, d: &DerivedExponents, s: &QSelection) {
    let one = Rational::one();
    let p = &params.p;
    if params.dim >= 3 {
        v.check(s.gamma > params.n1() && s.gamma <= params.n(), "gamma in (N-1, N]", || format_rational(&s.gamma));
        v.same("q0 = gamma(p-1)/2", &s.q0, &(&s.gamma * (p - &one) / int(2)));
    }
    v.same("eps0 = q0 - p", &s.eps0, &(&s.q0 - p));
    v.check(s.eps0.is_positive(), "eps0 positive", || format_rational(&s.eps0));
    v.same("ell = q/p", &s.ell, &(&s.q / p));
    let cond1 = params.n1() * (p - &one) / int(2);
    let window_ok = cond1 < s.q && s.q > *p && s.q < s.q0 && s.q0 < p + &one;
    v.check(window_ok, "q window", || {
        format!(
            "need max({}, {}) < q={} < q0={} < p+1",
            format_rational(p),
            format_rational(&cond1),
            format_rational(&s.q),
            format_rational(&s.q0)
        )
    });
    v.check(s.ell > one && s.ell < d.k, "1 < ell < k", || format_rational(&s.ell));
}

fn eps_in_range(params: &ProblemParams, s: &QSelection, eps: &Rational) -> bool {
    eps.is_positive() && eps < &s.eps0 && &params.p * (&s.ell + eps) < s.q0
}

fn check_step1(
    v: &mut Verification,
    params: &ProblemParams,
    d: &DerivedExponents,
    s: &QSelection,
    c: &Step1Certificate,
) {
    let one = Rational::one();
    let p = &params.p;
    let p1 = p + &one;
    let n = params.n();

    let expected_case = step1::classify(params, s);
    v.check(c.case_tag == expected_case, "step1 case dichotomy", || {
        format!("stored {} but 1/ell gives {}", c.case_tag, expected_case)
    });

    match c.case_tag {
        Step1Case::Case1 => {
            let clean = c.lambda.is_none() && c.mu.is_none() && c.theta.is_none();
            v.check(clean, "step1 case1 carries no interpolation", || "lambda/mu/theta present".into());
            v.same("b1 = 1 in case1", &c.b1, &one);
            v.same("a1(0) closed form", &c.a1_at_0, &(&p1 * (&d.tau - &n / &p1)));
        }
        Step1Case::Case2 => {
            let (Some(lambda), Some(mu), Some(theta)) = (&c.lambda, &c.mu, &c.theta) else {
                v.check(false, "step1 case2 fields present", || "lambda, mu and theta are required".into());
                return;
            };
            let (inv_lambda, inv_mu) = step1::embedding_reciprocals(params, d, s);
            v.check(recip(lambda).as_ref() == Some(&inv_lambda), "step1 lambda embedding", || format_rational(lambda));
            v.check(recip(mu).as_ref() == Some(&inv_mu), "step1 mu embedding", || format_rational(mu));
            if let (Some(il), Some(im)) = (recip(lambda), recip(mu)) {
                let rhs = theta * il + (&one - theta) * im;
                v.check(rhs == &one / &p1, "step1 interpolation identity", || {
                    format!("theta/lambda + (1-theta)/mu = {} != 1/(1+p)", format_rational(&rhs))
                });
            }
            v.check(in_closed_unit(theta), "step1 theta in [0,1]", || format_rational(theta));
            v.same("b1 = 1 - p(1-theta)", &c.b1, &(&one - p * (&one - theta)));
            v.same("a1(0) closed form", &c.a1_at_0, &(int(2) * (&d.tau - (&n - int(2)) / int(2)) * &c.b1));
        }
    }
    v.check(c.b1.is_positive(), "b1 positive", || format_rational(&c.b1));

    let displayed_0 = a1_of_eps(params, d, s, c.case_tag, c.theta.as_ref(), &Rational::zero());
    v.check(displayed_0.as_ref() == Some(&c.a1_at_0), "a1(0) displayed definition", || {
        displayed_0.as_ref().map(format_rational).unwrap_or_default()
    });
    v.check(eps_in_range(params, s, &c.eps), "step1 eps range", || format_rational(&c.eps));
    let displayed = a1_of_eps(params, d, s, c.case_tag, c.theta.as_ref(), &c.eps);
    v.check(displayed.as_ref() == Some(&c.a1_at_eps), "a1(eps) displayed definition", || {
        displayed.as_ref().map(format_rational).unwrap_or_default()
    });
    v.check(c.a1_at_eps.is_positive(), "a1(eps) positive", || format_rational(&c.a1_at_eps));
}

fn check_step2(
    v: &mut Verification,
    params: &ProblemParams,
    d: &DerivedExponents,
    s: &QSelection,
    c: &Step2Certificate,
) {
    let one = Rational::one();
    let p1 = &params.p + &one;
    let n = params.n();

    let (Some(inv_z), Some(inv_zc)) = (recip(&c.z), recip(&c.z_conj)) else {
        v.check(false, "z conjugate", || "zero exponent".into());
        return;
    };
    v.check(&inv_z + &inv_zc == one, "z conjugate", || format_rational(&(&inv_z + &inv_zc)));
    let window = z_window(params, d, s);
    v.check(window.contains(&inv_z), "z window membership", || {
        format!(
            "1/z = {} outside [{}, {}]",
            format_rational(&inv_z),
            format_rational(&window.lower),
            format_rational(&window.upper)
        )
    });

    let (inv_l1, inv_mu, inv_l2) = step2::embedding_reciprocals(params, d, s);
    v.check(recip(&c.lambda1).as_ref() == Some(&inv_l1), "step2 lambda1 embedding", || format_rational(&c.lambda1));
    v.check(recip(&c.mu).as_ref() == Some(&inv_mu), "step2 mu embedding", || format_rational(&c.mu));
    v.check(recip(&c.lambda2).as_ref() == Some(&inv_l2), "step2 lambda2 embedding", || format_rational(&c.lambda2));

    if let (Some(il1), Some(il2), Some(im)) = (recip(&c.lambda1), recip(&c.lambda2), recip(&c.mu)) {
        let r1 = &c.theta1 * il1 + (&one - &c.theta1) * &im;
        v.check(r1 == inv_z, "step2 interpolation identity (theta1)", || format_rational(&r1));
        let r2 = &c.theta2 * il2 + (&one - &c.theta2) * &im;
        v.check(r2 == inv_zc, "step2 interpolation identity (theta2)", || format_rational(&r2));
    }
    v.check(in_closed_unit(&c.theta1) && in_closed_unit(&c.theta2), "step2 thetas in [0,1]", || {
        format!("{}, {}", format_rational(&c.theta1), format_rational(&c.theta2))
    });

    let form_a = &c.theta1 / &s.ell + &c.theta2 - int(2) / params.n1();
    let form_b = &one - (int(2) - &c.theta1 - &c.theta2) / &d.k;
    v.check(c.b2 == form_a && c.b2 == form_b, "b2 closed forms disagree", || {
        format!(
            "stored {}, theta-form {}, k-form {}",
            format_rational(&c.b2),
            format_rational(&form_a),
            format_rational(&form_b)
        )
    });
    v.check(c.b2.is_positive(), "b2 positive", || format_rational(&c.b2));
    v.same("a2(0) closed form", &c.a2_at_0, &(&p1 * (&d.tau - &n / &p1) * &c.b2));
    v.same("a2(0) displayed definition", &c.a2_at_0, &a2_of_eps(params, d, &c.theta1, &c.theta2, &Rational::zero()));
    v.check(eps_in_range(params, s, &c.eps), "step2 eps range", || format_rational(&c.eps));
    v.same("a2(eps) displayed definition", &c.a2_at_eps, &a2_of_eps(params, d, &c.theta1, &c.theta2, &c.eps));
    v.check(c.a2_at_eps.is_positive(), "a2(eps) positive", || format_rational(&c.a2_at_eps));
}
