//! Explicit adaptive Dormand-Prince 5(4) integrator with dense output,
//! over flat `Vec<f64>` state.

use crate::error::{Error, Result};

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step's continuous extension (fourth-order interpolant).
#[derive(Clone, Debug)]
struct Segment {
    t0: f64,
    h: f64,
    rcont: [Vec<f64>; 5],
}

/// Dense solution of an initial value problem on one side of `t0`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub t0: f64,
    pub t_end: f64,
    pub y_end: Vec<f64>,
    segments: Vec<Segment>,
}

impl Solution {
    /// Interpolated state at `t` (must lie between `t0` and `t_end`).
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let lo = self.t0.min(self.t_end);
        let hi = self.t0.max(self.t_end);
        if t < lo - 1e-12 || t > hi + 1e-12 {
            return Err(Error::OutOfTube(format!(
                "t = {t} outside integrated range [{lo}, {hi}]"
            )));
        }
        let seg = self
            .segments
            .iter()
            .find(|s| {
                let a = s.t0.min(s.t0 + s.h);
                let b = s.t0.max(s.t0 + s.h);
                t >= a - 1e-12 && t <= b + 1e-12
            })
            .or_else(|| self.segments.last())
            .ok_or_else(|| Error::OdeFailure("empty solution".into()))?;
        let theta = (t - seg.t0) / seg.h;
        let th1 = 1.0 - theta;
        let n = seg.rcont[0].len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = seg.rcont[0][i]
                + theta
                    * (seg.rcont[1][i]
                        + th1
                            * (seg.rcont[2][i]
                                + theta * (seg.rcont[3][i] + th1 * seg.rcont[4][i])));
        }
        Ok(y)
    }
}

pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Upper bound on the step size; keeps inspection callbacks dense enough.
    pub h_max: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            rtol: 1e-11,
            atol: 1e-11,
            max_steps: 100_000,
            h_max: f64::INFINITY,
        }
    }
}

impl Dopri5 {
    /// Integrate `y' = f(t, y)` from `t0` to `t_end`, recording dense output.
    /// `inspect` runs after every accepted step and may abort the sweep.
    pub fn integrate<F, G>(
        &self,
        mut rhs: F,
        t0: f64,
        y0: &[f64],
        t_end: f64,
        mut inspect: G,
    ) -> Result<Solution>
    where
        F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
        G: FnMut(f64, &[f64]) -> Result<()>,
    {
        let n = y0.len();
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        if span == 0.0 {
            return Ok(Solution {
                t0,
                t_end,
                y_end: y0.to_vec(),
                segments: vec![],
            });
        }
        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = rhs(t, &y)?;
        let mut h = dir * (span / 100.0).min(self.h_max).max(1e-10);
        let mut segments = Vec::new();

        for _ in 0..self.max_steps {
            if (t - t_end) * dir >= 0.0 {
                return Ok(Solution {
                    t0,
                    t_end: t,
                    y_end: y,
                    segments,
                });
            }
            if (t + h - t_end) * dir > 0.0 {
                h = t_end - t;
            }
            if h.abs() < 1e-14 * span.max(1.0) {
                return Err(Error::OdeFailure(format!(
                    "step size underflow at t = {t} (tolerance not met)"
                )));
            }

            // stages k2..k6
            let mut k = vec![k1.clone()];
            let mut failed = false;
            for stage in 0..5 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for i in 0..n {
                            ys[i] += h * a * kj[i];
                        }
                    }
                }
                match rhs(t + C[stage] * h, &ys) {
                    Ok(ki) => k.push(ki),
                    Err(_) => {
                        // singular RHS inside the trial step: retry smaller
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                h *= 0.25;
                continue;
            }

            // fifth-order solution from the b row
            let mut y1 = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = A[5][j];
                if a != 0.0 {
                    for i in 0..n {
                        y1[i] += h * a * kj[i];
                    }
                }
            }
            // k7 = f(t + h, y1) (FSAL)
            let k7 = match rhs(t + h, &y1) {
                Ok(v) => v,
                Err(_) => {
                    h *= 0.25;
                    continue;
                }
            };
            k.push(k7);

            let mut err = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                e *= h;
                let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
                err += (e / sc) * (e / sc);
            }
            err = (err / n as f64).sqrt();

            if err <= 1.0 {
                // dense output coefficients (Hairer/Norsett/Wanner II.5)
                let mut rcont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
                for i in 0..n {
                    let dy = y1[i] - y[i];
                    let bspl = h * k[0][i] - dy;
                    rcont[0][i] = y[i];
                    rcont[1][i] = dy;
                    rcont[2][i] = bspl;
                    rcont[3][i] = dy - h * k[6][i] - bspl;
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate() {
                        acc += D[j] * kj[i];
                    }
                    rcont[4][i] = h * acc;
                }
                segments.push(Segment { t0: t, h, rcont });
                t += h;
                k1 = k[6].clone();
                y = y1;
                inspect(t, &y)?;
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                h = (h * fac).clamp(-self.h_max, self.h_max);
                if h == 0.0 {
                    h = dir * 1e-10;
                }
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                h *= fac;
            }
        }
        Err(Error::OdeFailure("maximum step count exceeded".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_with_dense_output() {
        let ode = Dopri5::default();
        let sol = ode
            .integrate(|_, y| Ok(vec![-y[0]]), 0.0, &[1.0], 2.0, |_, _| Ok(()))
            .unwrap();
        assert!((sol.y_end[0] - (-2.0f64).exp()).abs() < 1e-10);
        for &t in &[0.1, 0.7, 1.3, 1.9] {
            let y = sol.eval(t).unwrap();
            assert!((y[0] - (-t).exp()).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn backward_integration() {
        let ode = Dopri5::default();
        let sol = ode
            .integrate(|t, _| Ok(vec![t.cos()]), 0.0, &[0.0], -1.5, |_, _| Ok(()))
            .unwrap();
        assert!((sol.y_end[0] - (-1.5f64).sin()).abs() < 1e-10);
        let y = sol.eval(-0.8).unwrap();
        assert!((y[0] - (-0.8f64).sin()).abs() < 1e-9);
    }

    #[test]
    fn tolerance_scaling() {
        // halving the tolerance must not move the answer by more than ~10x tol
        let run = |tol: f64| {
            let ode = Dopri5 {
                rtol: tol,
                atol: tol,
                ..Default::default()
            };
            ode.integrate(
                |t, y| Ok(vec![y[1], -y[0] * (1.0 + 0.3 * t.sin())]),
                0.0,
                &[1.0, 0.0],
                3.0,
                |_, _| Ok(()),
            )
            .unwrap()
            .y_end[0]
        };
        let a = run(1e-10);
        let b = run(5e-11);
        assert!((a - b).abs() < 1e-8);
    }
}
