//! Dormand–Prince 5(4) with Hairer's fourth-order continuous extension.
//!
//! Output is produced on a uniform grid `t0 + k·dt_out` by dense output, with
//! a final sample exactly at `t_end`.

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<()> {
        if !(1e-12..=1e-3).contains(&self.rel) {
            return Err(invalid("tol.rel", format!("{} outside [1e-12, 1e-3]", self.rel)));
        }
        if !(self.abs > 0.0 && self.abs.is_finite()) {
            return Err(invalid("tol.abs", "must be finite and > 0"));
        }
        Ok(())
    }
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

// Fifth-order solution minus embedded fourth-order solution.
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

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 50_000_000;

type State<const N: usize> = [f64; N];

fn axpy<const N: usize>(y: &State<N>, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (coef, k) in terms {
        for i in 0..N {
            out[i] += coef * k[i];
        }
    }
    out
}

fn error_norm<const N: usize>(
    y: &State<N>,
    y_new: &State<N>,
    err: &State<N>,
    tol: &Tolerance,
) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let scale = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            (err[i] / scale).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Hairer's starting step heuristic.
fn initial_step<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: &State<N>,
    f0: &State<N>,
    tol: &Tolerance,
    span: f64,
) -> Result<f64>
where
    F: FnMut(f64, &State<N>) -> Result<State<N>>,
{
    let scale = |i: usize| tol.abs + tol.rel * y0[i].abs();
    let norm = |v: &State<N>| ((0..N).map(|i| (v[i] / scale(i)).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d0 = norm(y0);
    let d1 = norm(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1 = axpy(y0, &[(h0, f0)]);
    let f1 = f(t0 + h0, &y1)?;
    let diff: State<N> = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t_end` and returns samples on
/// the uniform grid `t0 + k·dt_out` plus a final sample at `t_end`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: State<N>,
    t_end: f64,
    tol: Tolerance,
    dt_out: f64,
) -> Result<Vec<(f64, State<N>)>>
where
    F: FnMut(f64, &State<N>) -> Result<State<N>>,
{
    tol.validate()?;
    if !(t_end > t0) {
        return Err(invalid("t_end", "must exceed the start time"));
    }
    if !(dt_out > 0.0 && dt_out.is_finite()) {
        return Err(invalid("dt_out", "must be finite and > 0"));
    }
    let span = t_end - t0;
    let min_step = 1e-15 * t_end.abs().max(span);

    let n_uniform = (span / dt_out * (1.0 + 1e-12)).floor() as usize;
    let mut out_times: Vec<f64> = (0..=n_uniform).map(|k| t0 + k as f64 * dt_out).collect();
    let last = out_times.last().copied().unwrap_or(t0);
    if (t_end - last).abs() <= 1e-9 * dt_out {
        *out_times.last_mut().unwrap() = t_end;
    } else {
        out_times.push(t_end);
    }

    let mut out = Vec::with_capacity(out_times.len());
    out.push((t0, y0));
    let mut next_out = 1;

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    let mut h = initial_step(&mut f, t0, &y0, &k1, &tol, span)?;
    let mut steps = 0usize;

    while t < t_end {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::TooManySteps {
                max_steps: MAX_STEPS,
                t_end,
            });
        }
        if h < min_step {
            return Err(Error::StepSizeUnderflow { t, dt: h });
        }
        let last_step = t + h >= t_end;
        if last_step {
            h = t_end - t;
        }

        let k2 = f(t + C2 * h, &axpy(&y, &[(h * A21, &k1)]))?;
        let k3 = f(t + C3 * h, &axpy(&y, &[(h * A31, &k1), (h * A32, &k2)]))?;
        let k4 = f(
            t + C4 * h,
            &axpy(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]),
        )?;
        let k5 = f(
            t + C5 * h,
            &axpy(
                &y,
                &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
            ),
        )?;
        let k6 = f(
            t + h,
            &axpy(
                &y,
                &[
                    (h * A61, &k1),
                    (h * A62, &k2),
                    (h * A63, &k3),
                    (h * A64, &k4),
                    (h * A65, &k5),
                ],
            ),
        )?;
        let y_new = axpy(
            &y,
            &[
                (h * A71, &k1),
                (h * A73, &k3),
                (h * A74, &k4),
                (h * A75, &k5),
                (h * A76, &k6),
            ],
        );
        let t_new = if last_step { t_end } else { t + h };
        let k7 = f(t_new, &y_new)?;

        let err: State<N> = std::array::from_fn(|i| {
            h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        let err_norm = error_norm(&y, &y_new, &err, &tol);

        if err_norm <= 1.0 {
            // Dense output coefficients for this step.
            let r1 = y;
            let r2: State<N> = std::array::from_fn(|i| y_new[i] - y[i]);
            let r3: State<N> = std::array::from_fn(|i| h * k1[i] - r2[i]);
            let r4: State<N> = std::array::from_fn(|i| r2[i] - h * k7[i] - r3[i]);
            let r5: State<N> = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            while next_out < out_times.len() && out_times[next_out] <= t_new {
                let t_out = out_times[next_out];
                let value = if t_out == t_new {
                    y_new
                } else {
                    let s = (t_out - t) / h;
                    let s1 = 1.0 - s;
                    std::array::from_fn(|i| {
                        r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])))
                    })
                };
                out.push((t_out, value));
                next_out += 1;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            if !y.iter().all(|v| v.is_finite()) {
                return Err(invalid("state", format!("non-finite state at t = {t}")));
            }
        }

        let fac = if err_norm == 0.0 {
            FAC_MAX
        } else {
            (SAFETY * err_norm.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
        };
        let fac = if err_norm > 1.0 { fac.min(1.0) } else { fac };
        h *= fac;
    }
    Ok(out)
}
