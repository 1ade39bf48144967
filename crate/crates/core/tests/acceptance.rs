//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use lel_core::exponents::{
    certify, sweep, tail_grid, verify_certificate, NonexistenceCertificate, ProblemParams, Step1Case,
};
use lel_core::pohozaev::{
    boundary_scale, default_radii, energy_F, energy_scaling_exponent, feedback_check, feedback_constant, pohozaev_sides,
};
use lel_core::radial::{bubble_check, sample_bubble, shoot, uniform_grid, RadialProfile, BUBBLE_CHECK_SPACING};
use lel_core::rational::{format_rational, int, ratio, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SHOOT_TOL: f64 = 1e-10;
const SHOOT_RMAX: f64 = 100.0;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(s: &str) -> Rational {
    lel_core::rational::parse_rational(s).expect("literal")
}

fn exact_identities() -> Outcome {
    let start = Instant::now();
    let table = sweep(&(5..=10).collect::<Vec<_>>(), 50);
    let elapsed = start.elapsed();
    ensure(table.len() == 300, || format!("expected 300 rows, got {}", table.len()))?;
    let one = Rational::one();
    for row in &table.rows {
        let cert = row.certificate().ok_or_else(|| format!("N={} p={} refused: {:?}", row.dim, row.p, row.status()))?;
        let n = int(i64::from(row.dim));
        let p = &row.p;
        let tau = int(2) / (p - &one);
        ensure(row.dim == cert.params.dim && *p > &n / (&n - int(2)) && *p < (&n + int(2)) / (&n - int(2)), || {
            format!("N={} p={} outside the open range", row.dim, format_rational(p))
        })?;
        if cert.step1.case_tag == Step1Case::Case2 {
            let expect = int(2) * (&tau - (&n - int(2)) / int(2)) * &cert.step1.b1;
            ensure(cert.step1.a1_at_0 == expect, || {
                format!("a1(0) identity fails at N={} p={}", row.dim, format_rational(p))
            })?;
        }
        let p1 = p + &one;
        let expect2 = &p1 * (&tau - &n / &p1) * &cert.step2.b2;
        ensure(cert.step2.a2_at_0 == expect2, || {
            format!("a2(0) identity fails at N={} p={}", row.dim, format_rational(p))
        })?;
    }
    ensure(elapsed < Duration::from_secs(5), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("300 rows exact, sweep {:.2}s", elapsed.as_secs_f64()))
}

fn worked_example() -> Outcome {
    let cert = certify(&ProblemParams::new(5, int(2)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let expect = [
        ("q", &cert.qsel.q, "9/4"),
        ("ell", &cert.qsel.ell, "9/8"),
        ("b1", &cert.step1.b1, "1/2"),
        ("a1_at_0", &cert.step1.a1_at_0, "1/2"),
        ("theta1", &cert.step2.theta1, "3/4"),
        ("theta2", &cert.step2.theta2, "0"),
        ("b2", &cert.step2.b2, "1/6"),
        ("a2_at_0", &cert.step2.a2_at_0, "1/6"),
    ];
    for (name, got, want) in expect {
        ensure(*got == r(want), || format!("{name} = {} != {want}", format_rational(got)))?;
    }
    ensure(cert.step1.theta.as_ref() == Some(&r("3/4")), || format!("theta = {:?}", cert.step1.theta))?;
    ensure(cert.step1.case_tag == Step1Case::Case2, || "expected Case2".into())?;
    ensure(verify_certificate(&cert).passed(), || "verification failed".into())?;
    Ok("q=9/4 ell=9/8 theta=3/4 b1=1/2 a1(0)=1/2 theta1=3/4 theta2=0 b2=1/6 a2(0)=1/6".into())
}

fn positivity_frontier() -> Outcome {
    let spacing = ratio(1, 1000);
    for dim in 4..=10u32 {
        let mut prev: Option<Rational> = None;
        for p in tail_grid(dim, 10, &spacing) {
            let cert = certify(&ProblemParams::new(dim, p.clone()).map_err(|e| e.to_string())?)
                .map_err(|e| format!("N={dim} p={}: {e}", format_rational(&p)))?;
            ensure(cert.a > Rational::zero() && cert.b > Rational::zero(), || {
                format!(
                    "N={dim} p={}: a={} b={}",
                    format_rational(&p),
                    format_rational(&cert.a),
                    format_rational(&cert.b)
                )
            })?;
            if let Some(prev) = &prev {
                ensure(cert.a < *prev, || format!("N={dim}: a not decreasing at p={}", format_rational(&p)))?;
            }
            prev = Some(cert.a);
        }
    }
    Ok("N=4..10, 10-point tail: a, b > 0 and a strictly decreasing".into())
}

fn bubble_residual() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut min_order = f64::INFINITY;
    for dim in 3..=6u32 {
        for t in [0.5, 1.0, 2.0] {
            let check = bubble_check(dim, t, BUBBLE_CHECK_SPACING).map_err(|e| e.to_string())?;
            ensure(check.max_residual < 1e-8, || format!("N={dim} t={t}: residual {:e}", check.max_residual))?;
            worst = worst.max(check.max_residual);
            let res: Vec<f64> = [0.032, 0.016, 0.008]
                .iter()
                .map(|&h| bubble_check(dim, t, h).map(|c| c.max_residual))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for w in res.windows(2) {
                let order = (w[0] / w[1]).log2();
                ensure(order >= 2.0, || format!("N={dim} t={t}: observed order {order:.2}"))?;
                min_order = min_order.min(order);
            }
        }
    }
    Ok(format!("max residual {worst:.2e} at h=1e-3, min observed order {min_order:.2}"))
}

fn test_profiles() -> Result<Vec<RadialProfile>, String> {
    [(3, "2"), (5, "2"), (4, "13/6")]
        .iter()
        .map(|&(dim, p)| {
            shoot(dim, lel_core::rational::to_f64(&r(p)), 1.0, SHOOT_RMAX, SHOOT_TOL).map_err(|e| e.to_string())
        })
        .collect()
}

fn pohozaev_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for prof in test_profiles()? {
        for radius in default_radii(&prof, SHOOT_RMAX) {
            let rep = pohozaev_sides(&prof, radius).map_err(|e| e.to_string())?;
            ensure(rep.rel_residual < 1e-6, || {
                format!("N={} p={} R={radius}: rel {:e}", prof.dim(), prof.p(), rep.rel_residual)
            })?;
            worst = worst.max(rep.rel_residual);
        }
    }
    let mut worst_null: f64 = 0.0;
    for dim in 3..=5u32 {
        let bubble = sample_bubble(dim, 1.0, uniform_grid(0.0, 10.0, 1e-3)).map_err(|e| e.to_string())?;
        for radius in [1.0, 2.0, 4.0, 8.0] {
            let rep = pohozaev_sides(&bubble, radius).map_err(|e| e.to_string())?;
            let scale = boundary_scale(&bubble, radius).map_err(|e| e.to_string())?;
            ensure(rep.lhs == 0.0, || format!("N={dim}: lhs {} at criticality", rep.lhs))?;
            ensure(rep.rhs.abs() < 1e-8 * scale, || {
                format!("N={dim} R={radius}: |rhs| {:e} vs scale {scale:e}", rep.rhs.abs())
            })?;
            worst_null = worst_null.max(rep.rhs.abs() / scale);
        }
    }
    Ok(format!("worst rel_residual {worst:.2e}; bubble |rhs|/scale <= {worst_null:.2e}"))
}

fn scaling_laws() -> Outcome {
    let mut worst_zero: f64 = 0.0;
    for (dim, p) in [(3u32, 2.0_f64), (5, 2.0)] {
        let invariants: Vec<f64> = [0.25_f64, 1.0, 4.0, 16.0]
            .iter()
            .map(|&alpha| {
                let prof = shoot(dim, p, alpha, SHOOT_RMAX, SHOOT_TOL).map_err(|e| e.to_string())?;
                let zero = prof.first_zero().ok_or_else(|| format!("N={dim} alpha={alpha}: no zero"))?;
                Ok(zero * alpha.powf((p - 1.0) / 2.0))
            })
            .collect::<Result<_, String>>()?;
        for v in &invariants {
            let dev = (v / invariants[1] - 1.0).abs();
            ensure(dev < 1e-6, || format!("N={dim}: R0 alpha^((p-1)/2) deviates by {dev:e}"))?;
            worst_zero = worst_zero.max(dev);
        }
    }
    let mut worst_f: f64 = 0.0;
    for prof in test_profiles()? {
        let e = energy_scaling_exponent(prof.dim(), prof.p());
        for lambda in [0.5_f64, 3.0] {
            let scaled = prof.rescale(lambda).map_err(|e| e.to_string())?;
            for radius in default_radii(&prof, SHOOT_RMAX) {
                let f = energy_F(&prof, radius).map_err(|e| e.to_string())?;
                let fs = energy_F(&scaled, radius / lambda).map_err(|e| e.to_string())?;
                let dev = (fs / (lambda.powf(e) * f) - 1.0).abs();
                ensure(dev < 1e-8, || {
                    format!("N={} lambda={lambda} R={radius}: F-scaling off by {dev:e}", prof.dim())
                })?;
                worst_f = worst_f.max(dev);
            }
        }
    }
    Ok(format!("zero invariant within {worst_zero:.2e}; F-scaling within {worst_f:.2e}"))
}

fn feedback_inequality() -> Outcome {
    let c = feedback_constant(5, 2.0).map_err(|e| e.to_string())?;
    ensure((c - 7.5).abs() < 1e-12, || format!("C_pz(5, 2) = {c}"))?;
    let mut count = 0;
    for prof in test_profiles()? {
        for radius in default_radii(&prof, SHOOT_RMAX) {
            let rep = feedback_check(&prof, radius).map_err(|e| e.to_string())?;
            ensure(rep.holds, || format!("N={} p={} R={radius}: F={} > C(G1+G2)", prof.dim(), prof.p(), rep.f))?;
            count += 1;
        }
    }
    Ok(format!("{count} radii hold, C_pz(5,2) = {c}"))
}

fn tamper_suite() -> Outcome {
    let base = certify(&ProblemParams::new(5, int(2)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    type Tamper = (&'static str, fn(&mut NonexistenceCertificate));
    let cases: [Tamper; 10] = [
        ("b2 closed forms disagree", |c| c.step2.b2 = ratio(1, 5)),
        ("step1 interpolation identity", |c| c.step1.theta = Some(int(1))),
        ("tau = 2/(p-1)", |c| c.derived.tau = int(3)),
        ("k = (p+1)/p", |c| c.derived.k = ratio(5, 3)),
        ("ell = q/p", |c| c.qsel.q = ratio(11, 5)),
        ("eps0 = q0 - p", |c| c.qsel.eps0 = ratio(1, 3)),
        ("a1(0) closed form", |c| c.step1.a1_at_0 = ratio(2, 3)),
        ("a2(0) closed form", |c| c.step2.a2_at_0 = ratio(1, 5)),
        ("a = min(a1, a2)", |c| c.a = &c.a + ratio(1, 100)),
        ("step2 interpolation identity (theta2)", |c| c.step2.theta2 = ratio(1, 2)),
    ];
    for (clause, tamper) in cases {
        let mut cert = base.clone();
        tamper(&mut cert);
        ensure(cert != base, || format!("tamper for {clause:?} changed nothing"))?;
        let v = verify_certificate(&cert);
        ensure(!v.passed(), || format!("tamper for {clause:?} accepted"))?;
        ensure(v.has(clause), || format!("tamper for {clause:?} reported {:?}", v.violations))?;
    }
    Ok("10 single-field tampers rejected with the clause named".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact certificate identities", exact_identities),
        ("worked example", worked_example),
        ("positivity frontier", positivity_frontier),
        ("bubble residual", bubble_residual),
        ("pohozaev identity", pohozaev_identity),
        ("scaling laws", scaling_laws),
        ("feedback inequality", feedback_inequality),
        ("tamper suite", tamper_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
