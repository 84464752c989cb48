//! Dormand-Prince 5(4) with error-per-unit-step control.

use crate::error::{Result, SpectrumError};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DormandPrince {
    /// Local error per unit step, relative to `max(1, |y_i|)`.
    pub tol: f64,
    pub max_steps: usize,
}

impl DormandPrince {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Max-norm local error estimate of every accepted step.
    pub local_errors: Vec<f64>,
    /// Derivative of the first component at the initial time.
    pub initial_derivative: f64,
}

impl DormandPrince {
    /// Integrate `y' = f(t, y)` from `t_out[0]`, returning the state at every
    /// time in `t_out`. Steps are shortened to land exactly on output times.
    pub fn integrate<F>(&self, mut f: F, y0: &[f64], t_out: &[f64]) -> Result<(Vec<Vec<f64>>, StepStats)>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        if !(self.tol > 0.0) {
            return Err(SpectrumError::InvalidArgument(format!("tolerance {} must be > 0", self.tol)));
        }
        if t_out.is_empty() || t_out.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SpectrumError::InvalidArgument("output times must be strictly increasing".into()));
        }
        let dim = y0.len();
        let mut t = t_out[0];
        let mut y = y0.to_vec();
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
        let mut stage = vec![0.0; dim];
        let mut y_new = vec![0.0; dim];
        f(t, &y, &mut k[0]);

        let mut stats = StepStats {
            initial_derivative: k[0].first().copied().unwrap_or(0.0),
            ..StepStats::default()
        };
        let mut out = Vec::with_capacity(t_out.len());
        out.push(y.clone());

        let span = t_out[t_out.len() - 1] - t;
        let y_norm = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let f_norm = k[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut h = if f_norm > 0.0 { 0.01 * y_norm.max(1e-5) / f_norm } else { 1e-4 };
        h = h.min(span).max(1e-12 * span);

        for &target in &t_out[1..] {
            while t < target {
                if stats.accepted + stats.rejected >= self.max_steps {
                    return Err(SpectrumError::StepUnderflow { t });
                }
                let remaining = target - t;
                let landing = h >= remaining * (1.0 - 1e-12);
                let step = if landing { remaining } else { h };
                if step < 1e-14 * t.abs().max(1.0) {
                    return Err(SpectrumError::StepUnderflow { t });
                }

                for s in 1..7 {
                    for i in 0..dim {
                        let mut acc = y[i];
                        for (j, kj) in k.iter().enumerate().take(s) {
                            acc += step * A[s][j] * kj[i];
                        }
                        stage[i] = acc;
                    }
                    f(t + C[s] * step, &stage, &mut k[s]);
                }
                // stage 7 input equals the fifth-order solution
                y_new.copy_from_slice(&stage);
                let mut k7 = vec![0.0; dim];
                f(t + step, &y_new, &mut k7);

                let mut err_abs = 0.0f64;
                let mut ratio = 0.0f64;
                for i in 0..dim {
                    let mut e = E[6] * k7[i];
                    for (j, kj) in k.iter().enumerate().take(6) {
                        e += E[j] * kj[i];
                    }
                    let e = (step * e).abs();
                    let scale = self.tol * step * 1f64.max(y[i].abs()).max(y_new[i].abs());
                    err_abs = err_abs.max(e);
                    ratio = ratio.max(e / scale);
                }

                let factor = if ratio == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * ratio.powf(-0.25)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                if ratio <= 1.0 {
                    t = if landing { target } else { t + step };
                    std::mem::swap(&mut y, &mut y_new);
                    k[0] = k7;
                    stats.accepted += 1;
                    stats.local_errors.push(err_abs);
                    // a shortened landing step says nothing about the natural size
                    if !landing {
                        h = step * factor;
                    }
                } else {
                    stats.rejected += 1;
                    h = step * factor.min(1.0);
                }
            }
            out.push(y.clone());
        }
        Ok((out, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let ts: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let (ys, stats) = DormandPrince::new(1e-10)
            .integrate(|_, y, dy| dy[0] = -y[0], &[1.0], &ts)
            .unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9);
        }
        assert_eq!(stats.local_errors.len(), stats.accepted);
    }

    #[test]
    fn harmonic_oscillator_phase() {
        let ts: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let (ys, _) = DormandPrince::new(1e-10)
            .integrate(
                |_, y, dy| {
                    dy[0] = y[1];
                    dy[1] = -y[0];
                },
                &[1.0, 0.0],
                &ts,
            )
            .unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0] - t.cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_unsorted_output_times() {
        let r = DormandPrince::new(1e-6).integrate(|_, _, dy| dy[0] = 0.0, &[1.0], &[0.0, 1.0, 0.5]);
        assert!(r.is_err());
    }

    #[test]
    fn stiff_blowup_reports_underflow() {
        let mut solver = DormandPrince::new(1e-12);
        solver.max_steps = 1000;
        let r = solver.integrate(|_, y, dy| dy[0] = -1e9 * y[0], &[1.0], &[0.0, 1.0]);
        assert!(matches!(r, Err(SpectrumError::StepUnderflow { .. })));
    }
}
