//! Integrator accuracy against the constant-kernel closed form cos(αnt).

use gp_spectrum_core::{simulate_mode, timedomain::uniform_grid, ExponentialSumKernel};

fn max_error(alpha_sq: f64, n: u32, tol: f64, samples: usize) -> f64 {
    let kernel = ExponentialSumKernel::new(vec![alpha_sq], vec![0.0]).unwrap();
    let w = alpha_sq.sqrt() * f64::from(n);
    let grid = uniform_grid(3.0 * 2.0 * std::f64::consts::PI / w, samples).unwrap();
    let traj = simulate_mode(&kernel, n, 1.0, &grid, tol).unwrap();
    grid.iter()
        .zip(&traj.theta)
        .map(|(t, th)| (th - (w * t).cos()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn error_shrinks_with_tolerance() {
    let tols = [1e-5, 1e-6, 1e-7, 1e-8, 1e-9];
    for &t in &tols {
        let e = max_error(3.0, 4, t, 300);
        assert!(e < 10.0 * t, "tol {t}: error {e}");
    }
    // a sparse output grid leaves the step size to the error controller
    let errs: Vec<f64> = tols.iter().map(|&t| max_error(3.0, 4, t, 6)).collect();
    // a tenfold tighter tolerance must buy roughly a tenfold smaller error
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 3.0 && ratio < 40.0, "{errs:?}");
    }
}
