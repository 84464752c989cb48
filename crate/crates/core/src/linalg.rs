//! Dense nonsymmetric eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Diagonal similarity scaling (Parlett-Reinsch) so that rows and columns
/// have comparable norms. Eigenvalues are unchanged.
pub fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(a: DMatrix<f64>) -> Vec<Complex64> {
    if a.nrows() == 1 {
        return vec![Complex64::new(a[(0, 0)], 0.0)];
    }
    a.complex_eigenvalues().iter().copied().collect()
}
