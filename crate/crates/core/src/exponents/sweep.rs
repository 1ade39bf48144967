//! Batch certification over grids of `(N, p)`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{certify, ExponentError, NonexistenceCertificate, ProblemParams};
use crate::rational::{format_rational, int, ratio, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Refused(String),
}

#[derive(Debug, Clone)]
pub struct CertificateRow {
    pub dim: u32,
    pub p: Rational,
    pub outcome: Result<NonexistenceCertificate, ExponentError>,
}

impl CertificateRow {
    pub fn status(&self) -> RowStatus {
        match &self.outcome {
            Ok(_) => RowStatus::Ok,
            Err(e) => RowStatus::Refused(e.tag()),
        }
    }

    pub fn certificate(&self) -> Option<&NonexistenceCertificate> {
        self.outcome.as_ref().ok()
    }

    fn record(&self) -> TableRecord {
        let fmt = |x: &Rational| format_rational(x);
        let mut rec = TableRecord { dim: self.dim, p: fmt(&self.p), ..TableRecord::default() };
        match &self.outcome {
            Ok(c) => {
                rec.q = fmt(&c.qsel.q);
                rec.ell = fmt(&c.qsel.ell);
                rec.case = c.step1.case_tag.to_string();
                rec.theta = c.step1.theta.as_ref().map(fmt).unwrap_or_default();
                rec.theta1 = fmt(&c.step2.theta1);
                rec.theta2 = fmt(&c.step2.theta2);
                rec.a = fmt(&c.a);
                rec.b = fmt(&c.b);
                rec.status = "ok".into();
            }
            Err(e) => rec.status = e.tag(),
        }
        rec
    }
}

/// One table line; also the JSON form of a row.
#[derive(Debug, Default, Serialize)]
struct TableRecord {
    #[serde(rename = "N")]
    dim: u32,
    p: String,
    q: String,
    ell: String,
    case: String,
    theta: String,
    theta1: String,
    theta2: String,
    a: String,
    b: String,
    status: String,
}

#[derive(Debug, Clone, Default)]
pub struct CertificateTable {
    pub rows: Vec<CertificateRow>,
}

impl CertificateTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// CSV with header `N,p,q,ell,case,theta,theta1,theta2,a,b,status`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(["N", "p", "q", "ell", "case", "theta", "theta1", "theta2", "a", "b", "status"])?;
        }
        for row in &self.rows {
            w.serialize(row.record())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows.iter().map(|r| serde_json::to_value(r.record()).expect("plain record")).collect(),
        )
    }
}

/// `samples` midpoints of equal subintervals of `(N/(N-2), p_S)`. The plane
/// has no finite upper end; `(1, 3)` is sampled there.
pub fn midpoint_grid(dim: u32, samples: usize) -> Vec<Rational> {
    let (lo, hi) = match dim {
        0 | 1 => return Vec::new(),
        2 => (int(1), int(3)),
        _ => {
            let n = i64::from(dim);
            (ratio(n, n - 2), ratio(n + 2, n - 2))
        }
    };
    let width = &hi - &lo;
    let denom = int(2 * samples as i64);
    (0..samples).map(|j| &lo + &width * int(2 * j as i64 + 1) / &denom).collect()
}

/// `p_S - j*spacing` for `j = points, ..., 1`, ascending in p. Requires `N >= 3`.
pub fn tail_grid(dim: u32, points: usize, spacing: &Rational) -> Vec<Rational> {
    if dim < 3 {
        return Vec::new();
    }
    let n = i64::from(dim);
    let p_s = ratio(n + 2, n - 2);
    (1..=points).rev().map(|j| &p_s - spacing * int(j as i64)).collect()
}

pub fn sweep(dims: &[u32], samples: usize) -> CertificateTable {
    let points: Vec<(u32, Rational)> =
        dims.iter().flat_map(|&d| midpoint_grid(d, samples).into_iter().map(move |p| (d, p))).collect();
    sweep_params(points)
}

/// Certifies every `(N, p)`; rows come back sorted by N then p regardless of
/// evaluation order.
pub fn sweep_params(mut points: Vec<(u32, Rational)>) -> CertificateTable {
    points.sort();
    let rows = points
        .into_par_iter()
        .map(|(dim, p)| {
            let outcome = ProblemParams::new(dim, p.clone()).and_then(|params| certify(&params));
            CertificateRow { dim, p, outcome }
        })
        .collect();
    CertificateTable { rows }
}
