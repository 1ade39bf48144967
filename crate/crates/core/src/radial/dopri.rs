//! Dormand-Prince 5(4) with the standard continuous extension.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("non-finite state at r = {at}")]
    NonFinite { at: f64 },
    #[error("step size underflow at r = {at}")]
    StepUnderflow { at: f64 },
    #[error("step budget exhausted at r = {at}")]
    TooManySteps { at: f64 },
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step together with its dense-output polynomial.
#[derive(Debug, Clone)]
pub struct DenseStep<const D: usize> {
    pub t0: f64,
    pub h: f64,
    pub y0: [f64; D],
    pub y1: [f64; D],
    rcont: [[f64; D]; 4],
}

impl<const D: usize> DenseStep<D> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Fourth-order interpolant on `[t0, t0 + h]`.
    pub fn eval(&self, t: f64) -> [f64; D] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r2, r3, r4, r5] = &self.rcont;
        std::array::from_fn(|i| self.y0[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i]))))
    }
}

pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 { rtol: tol, atol: tol, max_steps: 5_000_000 }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t_end`, handing every accepted
    /// step to `on_step`, which may stop the integration early. Returns the
    /// last accepted `(t, y)`.
    pub fn integrate<const D: usize, F, S>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; D],
        t_end: f64,
        h0: f64,
        mut on_step: S,
    ) -> Result<(f64, [f64; D]), OdeError>
    where
        F: Fn(f64, &[f64; D]) -> [f64; D],
        S: FnMut(&DenseStep<D>) -> Flow,
    {
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = h0.min(t_end - t0);
        let mut last_rejected = false;
        let mut steps = 0usize;

        while t < t_end {
            steps += 1;
            if steps > self.max_steps {
                return Err(OdeError::TooManySteps { at: t });
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(OdeError::StepUnderflow { at: t });
            }
            let last = t + h >= t_end;
            if last {
                h = t_end - t;
            }

            let stage = |coef: &[(f64, &[f64; D])]| -> [f64; D] {
                std::array::from_fn(|i| y[i] + h * coef.iter().map(|(c, k)| c * k[i]).sum::<f64>())
            };
            let k2 = f(t + C2 * h, &stage(&[(A21, &k1)]));
            let k3 = f(t + C3 * h, &stage(&[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * h, &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(t + h, &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = stage(&[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let t_new = if last { t_end } else { t + h };
            let k7 = f(t_new, &y_new);

            if y_new.iter().chain(k7.iter()).any(|v| !v.is_finite()) {
                if h < 1e-10 * t.abs().max(1.0) {
                    return Err(OdeError::NonFinite { at: t });
                }
                h *= 0.1;
                last_rejected = true;
                continue;
            }

            let mut err = 0.0;
            for i in 0..D {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / D as f64).sqrt();

            let mut fac = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
            fac = fac.clamp(0.2, 5.0);

            if err <= 1.0 {
                let ydiff: [f64; D] = std::array::from_fn(|i| y_new[i] - y[i]);
                let bspl: [f64; D] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
                let rcont = [
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    }),
                ];
                let step = DenseStep { t0: t, h: t_new - t, y0: y, y1: y_new, rcont };
                t = t_new;
                y = y_new;
                k1 = k7;
                if let Flow::Stop = on_step(&step) {
                    break;
                }
                if last_rejected {
                    fac = fac.min(1.0);
                }
                last_rejected = false;
                h *= fac;
            } else {
                last_rejected = true;
                h *= fac.min(1.0);
            }
        }
        Ok((t, y))
    }
}
