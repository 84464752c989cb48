//! Real zeros of `K` and the real branches of `G_n(z) = z + n² K(z)`.
//!
//! `K` is strictly decreasing between consecutive poles and runs from `+∞`
//! to `-∞` on each `(-b_{j+1}, -b_j)`, so each such interval holds exactly
//! one zero `-μ_j`. On `(-b_{j+1}, -μ_j)` the function `x + n² K(x)` goes
//! from `+∞` to `-μ_j < 0`, which brackets the branch eigenvalue `λ_nj`.

use crate::error::{Result, SpectrumError};
use crate::kernel::ExponentialSumKernel;

pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-10;

/// Relative distance by which brackets are pulled away from poles.
const POLE_MARGIN: f64 = 1e-9;
/// Bisection runs until the bracket is this fraction of its initial width.
const BISECTION_FRACTION: f64 = 1e-3;
const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct RealZeroLadder {
    /// `μ_1 .. μ_J`.
    pub mu: Vec<f64>,
    /// `(b_j, b_{j+1})` certifying each `μ_j`.
    pub brackets: Vec<(f64, f64)>,
    /// `|K(-μ_j)|`.
    pub residuals: Vec<f64>,
}

impl RealZeroLadder {
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// Check `b_j < μ_j < b_{j+1}` for every rung.
    pub fn is_interlaced(&self) -> bool {
        self.mu
            .iter()
            .zip(&self.brackets)
            .all(|(&mu, &(lo, hi))| lo < mu && mu < hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealBranch {
    pub n: u32,
    pub j: usize,
    pub lambda: f64,
    /// `(-b_{j+1}, -μ_j)`.
    pub bracket: (f64, f64),
    /// `|G_n(λ)|`.
    pub residual: f64,
    /// Top branch of a truncated kernel; moves when more terms are stored.
    pub truncation_sensitive: bool,
}

impl RealBranch {
    pub fn is_contained(&self) -> bool {
        self.bracket.0 < self.lambda && self.lambda < self.bracket.1
    }
}

/// Scalar function with derivative and a magnitude scale for the residual test.
struct Sample {
    value: f64,
    derivative: f64,
    scale: f64,
}

/// Sign-change root finder: bisection to a fraction of the bracket, then
/// Newton steps that fall back to bisection whenever they leave the bracket
/// or fail to shrink it.
fn solve_bracketed<F>(f: F, lo: f64, hi: f64, tol: f64, j: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<Sample>,
{
    let fail = || SpectrumError::BracketFailure { j, lo, hi };
    let f_lo = f(lo).map_err(|_| fail())?;
    let f_hi = f(hi).map_err(|_| fail())?;
    if f_lo.value == 0.0 {
        return Ok((lo, 0.0));
    }
    if f_hi.value == 0.0 {
        return Ok((hi, 0.0));
    }
    if f_lo.value.signum() == f_hi.value.signum() {
        return Err(fail());
    }
    // orient so that f(neg) < 0 < f(pos)
    let (mut neg, mut pos) = if f_lo.value < 0.0 { (lo, hi) } else { (hi, lo) };
    let target_width = BISECTION_FRACTION * (hi - lo);
    while (pos - neg).abs() > target_width {
        let mid = 0.5 * (neg + pos);
        let s = f(mid)?;
        if s.value.abs() <= tol * s.scale {
            return Ok((mid, s.value.abs()));
        }
        if s.value < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
    }

    let mut x = 0.5 * (neg + pos);
    for _ in 0..MAX_ITERATIONS {
        let s = f(x)?;
        if s.value.abs() <= tol * s.scale {
            return Ok((x, s.value.abs()));
        }
        if s.value < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let (a, b) = if neg < pos { (neg, pos) } else { (pos, neg) };
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // bracket collapsed to adjacent floats
            return Ok((x, s.value.abs()));
        }
        let step = if s.derivative != 0.0 { s.value / s.derivative } else { f64::NAN };
        let candidate = x - step;
        x = if candidate.is_finite() && candidate > a && candidate < b {
            candidate
        } else {
            mid
        };
    }
    let s = f(x)?;
    Ok((x, s.value.abs()))
}

/// Endpoint next to the pole at `pole`, on the side `side` (±1), where `f`
/// already has the sign `expect` of its blow-up. Starts `margin` away and
/// moves towards the pole while the regular part still dominates.
fn pole_endpoint<F>(f: &F, pole: f64, side: f64, margin: f64, expect: f64, pole_tol: f64) -> f64
where
    F: Fn(f64) -> Result<Sample>,
{
    let floor = 4.0 * pole_tol * (1.0 + pole.abs());
    let mut m = margin.max(floor);
    loop {
        let x = pole + side * m;
        let ok = f(x).is_ok_and(|s| s.value * expect > 0.0);
        if ok || m <= floor {
            return x;
        }
        m = (m / 16.0).max(floor);
    }
}

fn kernel_sample(kernel: &ExponentialSumKernel, x: f64) -> Result<(f64, f64, f64)> {
    let (value, derivative) = kernel.laplace_real(x)?;
    let magnitude: f64 = kernel
        .amplitudes()
        .iter()
        .zip(kernel.rates())
        .map(|(a, b)| (a / (x + b)).abs())
        .sum();
    Ok((value, derivative, magnitude))
}

/// Locate `μ_1 .. μ_J` with `b_j < μ_j < b_{j+1}`.
pub fn find_mu(kernel: &ExponentialSumKernel, count: usize, tol: f64) -> Result<RealZeroLadder> {
    if count + 1 > kernel.len() {
        return Err(SpectrumError::InvalidArgument(format!(
            "{count} zeros of K need at least {} stored terms, kernel has {}",
            count + 1,
            kernel.len()
        )));
    }
    let b = kernel.rates();
    let mut ladder = RealZeroLadder {
        mu: Vec::with_capacity(count),
        brackets: Vec::with_capacity(count),
        residuals: Vec::with_capacity(count),
    };
    for j in 1..=count {
        let (bj, bj1) = (b[j - 1], b[j]);
        let margin = POLE_MARGIN * (bj1 - bj);
        let f = |x| {
            let (value, derivative, magnitude) = kernel_sample(kernel, x)?;
            Ok(Sample {
                value,
                derivative,
                scale: magnitude.max(1.0),
            })
        };
        // K(x) on (-b_{j+1}, -b_j): +∞ at the left end, -∞ at the right
        let lo = pole_endpoint(&f, -bj1, 1.0, margin, 1.0, kernel.pole_tolerance());
        let hi = pole_endpoint(&f, -bj, -1.0, margin, -1.0, kernel.pole_tolerance());
        let (x, residual) = solve_bracketed(f, lo, hi, tol, j)?;
        ladder.mu.push(-x);
        ladder.brackets.push((bj, bj1));
        ladder.residuals.push(residual);
    }
    Ok(ladder)
}

/// The real zeros `λ_nj ∈ (-b_{j+1}, -μ_j)` of `G_n` for every rung of `ladder`.
pub fn find_lambda_real(
    kernel: &ExponentialSumKernel,
    ladder: &RealZeroLadder,
    n: u32,
    tol: f64,
) -> Result<Vec<RealBranch>> {
    if n == 0 {
        return Err(SpectrumError::InvalidArgument("mode index n must be >= 1".into()));
    }
    let n2 = f64::from(n) * f64::from(n);
    let b = kernel.rates();
    let top = kernel.len() - 1;
    (1..=ladder.len())
        .map(|j| {
            let mu = ladder.mu[j - 1];
            let bj1 = b[j];
            let margin = POLE_MARGIN * (bj1 - b[j - 1]);
            let f = |x| {
                let (k, dk, magnitude) = kernel_sample(kernel, x)?;
                Ok(Sample {
                    value: x + n2 * k,
                    derivative: 1.0 + n2 * dk,
                    scale: 1f64.max(x.abs()).max(n2 * magnitude),
                })
            };
            // a small residue at -b_{j+1} needs a closer left end before G_n turns positive
            let lo = pole_endpoint(&f, -bj1, 1.0, margin, 1.0, kernel.pole_tolerance());
            let (lambda, residual) = solve_bracketed(f, lo, -mu, tol, j)?;
            Ok(RealBranch {
                n,
                j,
                lambda,
                bracket: (-bj1, -mu),
                residual,
                truncation_sensitive: j == top && !kernel.is_finite_support(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub j: usize,
    /// `λ_{1j} .. λ_{n_max j}`.
    pub lambdas: Vec<f64>,
    /// `|λ_nj + μ_j|` for `n = 1 .. n_max`.
    pub limit_gap: Vec<f64>,
    /// Strictly increasing `λ` with strictly decreasing gaps.
    pub monotone: bool,
}

/// Follow branch `j` for `n = 1 .. n_max`.
pub fn verify_monotone_in_n(
    kernel: &ExponentialSumKernel,
    j: usize,
    n_max: u32,
    tol: f64,
) -> Result<MonotoneReport> {
    if j == 0 {
        return Err(SpectrumError::InvalidArgument("branch index j must be >= 1".into()));
    }
    if n_max == 0 {
        return Err(SpectrumError::InvalidArgument("n_max must be >= 1".into()));
    }
    let ladder = find_mu(kernel, j, tol)?;
    let mu = ladder.mu[j - 1];
    let mut lambdas = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let branches = find_lambda_real(kernel, &ladder, n, tol)?;
        lambdas.push(branches[j - 1].lambda);
    }
    let limit_gap: Vec<f64> = lambdas.iter().map(|l| (l + mu).abs()).collect();
    let monotone = lambdas.windows(2).all(|w| w[0] < w[1]) && limit_gap.windows(2).all(|w| w[0] > w[1]);
    Ok(MonotoneReport {
        j,
        lambdas,
        limit_gap,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = DEFAULT_ROOT_TOLERANCE;

    fn kernel(a: &[f64], b: &[f64]) -> ExponentialSumKernel {
        ExponentialSumKernel::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn small_residue_far_from_origin() {
        // residue 2^-11 at -1024: G_1 is still negative 1e-9 * gap from the pole
        let a: Vec<f64> = (1..=12).map(|k| 0.5f64.powi(k)).collect();
        let b: Vec<f64> = std::iter::once(0.0).chain((1..12).map(|k| 2f64.powi(k))).collect();
        let k = kernel(&a, &b);
        let ladder = find_mu(&k, 11, TOL).unwrap();
        assert!(ladder.is_interlaced());
        for n in [1, 7, 50] {
            for br in find_lambda_real(&k, &ladder, n, TOL).unwrap() {
                assert!(br.is_contained());
            }
        }
    }

    #[test]
    fn symmetric_two_term_mu_is_two() {
        let l = find_mu(&kernel(&[1.0, 1.0], &[1.0, 3.0]), 1, TOL).unwrap();
        assert!((l.mu[0] - 2.0).abs() < 1e-12);
        assert!(l.is_interlaced());
    }

    #[test]
    fn mu_of_zero_rate_kernel() {
        // zero of 3z + 2
        let l = find_mu(&kernel(&[2.0, 1.0], &[0.0, 1.0]), 1, TOL).unwrap();
        assert!((l.mu[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!(l.residuals[0] <= TOL);
    }

    #[test]
    fn mu_of_three_term_kernel() {
        // roots of 3z^2 + 12z + 11: -2 ± 1/sqrt(3)
        let l = find_mu(&kernel(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), 2, TOL).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((l.mu[0] - (2.0 - r)).abs() < 1e-12);
        assert!((l.mu[1] - (2.0 + r)).abs() < 1e-12);
    }

    #[test]
    fn too_many_rungs_rejected() {
        let k = kernel(&[1.0, 1.0], &[1.0, 3.0]);
        assert!(find_mu(&k, 2, TOL).is_err());
    }

    #[test]
    fn constant_kernel_has_no_real_branches() {
        let k = kernel(&[1.0], &[0.0]);
        let l = find_mu(&k, 0, TOL).unwrap();
        for n in [1, 5, 40] {
            assert!(find_lambda_real(&k, &l, n, TOL).unwrap().is_empty());
        }
    }

    #[test]
    fn branch_of_cubic() {
        let k = kernel(&[2.0, 1.0], &[0.0, 1.0]);
        let l = find_mu(&k, 1, TOL).unwrap();
        let br = find_lambda_real(&k, &l, 1, TOL).unwrap();
        assert_eq!(br.len(), 1);
        assert!((br[0].lambda - (-0.715_225_238_435_090_4)).abs() < 1e-9);
        assert!(br[0].is_contained());
        assert!(!br[0].truncation_sensitive);
    }

    #[test]
    fn large_n_branch_hugs_mu() {
        let k = kernel(&[1.0, 1.0], &[1.0, 3.0]);
        let l = find_mu(&k, 1, TOL).unwrap();
        let br = find_lambda_real(&k, &l, 10, TOL).unwrap();
        assert!(br[0].lambda > -3.0 && br[0].lambda < -2.0);
        // -2 - ε + 200ε/(1 - ε²) = 0 gives ε ≈ 0.01005
        let gap = (br[0].lambda + 2.0).abs();
        assert!((gap - 0.010_05).abs() < 1e-5, "{gap}");
    }

    #[test]
    fn monotone_examples() {
        let k = kernel(&[2.0, 1.0], &[0.0, 1.0]);
        let r = verify_monotone_in_n(&k, 1, 20, TOL).unwrap();
        assert!(r.monotone);
        assert_eq!(r.limit_gap.len(), 20);

        let k = kernel(&[1.0, 1.0], &[1.0, 3.0]);
        let r = verify_monotone_in_n(&k, 1, 3, TOL).unwrap();
        assert!(r.lambdas[0] < r.lambdas[1] && r.lambdas[1] < r.lambdas[2] && r.lambdas[2] < -2.0);

        let r = verify_monotone_in_n(&k, 1, 1, TOL).unwrap();
        assert!(r.monotone);
        assert_eq!(r.limit_gap.len(), 1);
    }
}
