use std::f64::consts::PI;

use super::integrator::{DormandPrince, StepStats};
use super::reduction::reduce_to_ode;
use crate::error::{Result, SpectrumError};
use crate::kernel::ExponentialSumKernel;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory {
    pub n: u32,
    pub xi: f64,
    /// `θ_n` at every grid time.
    pub theta: Vec<f64>,
    pub stats: StepStats,
}

impl ModeTrajectory {
    /// `θ_n'(0)`; the memory integral vanishes at `t = 0`.
    pub fn initial_derivative(&self) -> f64 {
        self.stats.initial_derivative
    }
}

/// `θ(x_i, t_j)` stored as `values[j][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSamples {
    pub x: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub t_grid: Vec<f64>,
    pub modes: Vec<ModeTrajectory>,
    pub field: Option<FieldSamples>,
    /// L² bound on the omitted modes `n > n_max`: `(Σ_{n>n_max} ξ_n²)^{1/2}`,
    /// since `|θ_n(t)| <= |ξ_n|` for every mode.
    pub tail_bound: f64,
}

/// `samples + 1` equispaced times on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(SpectrumError::InvalidArgument(format!("t_end = {t_end} must be > 0")));
    }
    if samples == 0 {
        return Err(SpectrumError::InvalidArgument("need at least one time sample".into()));
    }
    Ok((0..=samples).map(|i| t_end * i as f64 / samples as f64).collect())
}

/// Integrate the reduced system for mode `n` from `(ξ_n, 0, …, 0)`.
pub fn simulate_mode(kernel: &ExponentialSumKernel, n: u32, xi: f64, t_grid: &[f64], tol: f64) -> Result<ModeTrajectory> {
    if n == 0 {
        return Err(SpectrumError::InvalidArgument("mode index n must be >= 1".into()));
    }
    if t_grid.first() != Some(&0.0) || t_grid.len() < 2 {
        return Err(SpectrumError::InvalidArgument("time grid must start at 0 and end at t_end > 0".into()));
    }
    let reduction = reduce_to_ode(kernel, n);
    let mut y0 = vec![0.0; kernel.len() + 1];
    y0[0] = xi;
    let (states, stats) = DormandPrince::new(tol).integrate(|_, x, dx| reduction.apply(x, dx), &y0, t_grid)?;
    Ok(ModeTrajectory {
        n,
        xi,
        theta: states.into_iter().map(|s| s[0]).collect(),
        stats,
    })
}

/// `φ_n(x) = √(2/π) sin(nx)`.
pub fn sine_mode(n: u32, x: f64) -> f64 {
    (2.0 / PI).sqrt() * (f64::from(n) * x).sin()
}

/// Superpose modes `1..=xi.len()` into `θ(x, t) = Σ θ_n(t) φ_n(x)`.
///
/// `tail_energy` is `Σ_{n>n_max} ξ_n²` for the coefficients left out.
pub fn reconstruct_field(
    kernel: &ExponentialSumKernel,
    xi: &[f64],
    x_samples: &[f64],
    t_grid: &[f64],
    tol: f64,
    tail_energy: f64,
) -> Result<SimulationResult> {
    if xi.is_empty() {
        return Err(SpectrumError::InvalidArgument("xi needs at least one coefficient".into()));
    }
    if let Some(x) = x_samples.iter().find(|x| !(0.0..=PI).contains(*x)) {
        return Err(SpectrumError::InvalidArgument(format!("x = {x} outside [0, pi]")));
    }
    if !(tail_energy >= 0.0) {
        return Err(SpectrumError::InvalidArgument("tail energy must be >= 0".into()));
    }
    let modes = xi
        .iter()
        .enumerate()
        .map(|(i, &c)| simulate_mode(kernel, i as u32 + 1, c, t_grid, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_field(t_grid, modes, x_samples, tail_energy))
}

/// Combine already simulated modes into field samples.
pub fn assemble_field(t_grid: &[f64], modes: Vec<ModeTrajectory>, x_samples: &[f64], tail_energy: f64) -> SimulationResult {
    let values = (0..t_grid.len())
        .map(|j| {
            x_samples
                .iter()
                .map(|&x| crate::sum::sum_f64(modes.iter().map(|m| m.theta[j] * sine_mode(m.n, x))))
                .collect()
        })
        .collect();
    SimulationResult {
        t_grid: t_grid.to_vec(),
        modes,
        field: Some(FieldSamples {
            x: x_samples.to_vec(),
            values,
        }),
        tail_bound: tail_energy.sqrt(),
    }
}
