use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::kernel::ExponentialSumKernel;
use crate::linalg::{balance, eigenvalues};
use crate::spectrum::sort_spectrum;

/// State `(θ_n, y_1, …, y_M)` and its `(M+1)×(M+1)` generator.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeReduction {
    pub n: u32,
    pub m: usize,
    pub matrix: DMatrix<f64>,
    pub eigenvalues: Vec<Complex64>,
}

impl OdeReduction {
    /// `A x` for a state vector `x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let a = &self.matrix;
        out[0] = (1..=self.m).map(|k| a[(0, k)] * x[k]).sum();
        for k in 1..=self.m {
            out[k] = x[0] + a[(k, k)] * x[k];
        }
    }
}

/// Row 1 holds `-n² a_k` in columns `2..M+1`; row `k+1` holds `1` in column 1
/// and `-b_k` on the diagonal.
pub fn reduce_to_ode(kernel: &ExponentialSumKernel, n: u32) -> OdeReduction {
    let m = kernel.len();
    let n2 = f64::from(n) * f64::from(n);
    let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
    for (k, (&ak, &bk)) in kernel.amplitudes().iter().zip(kernel.rates()).enumerate() {
        a[(0, k + 1)] = -n2 * ak;
        a[(k + 1, 0)] = 1.0;
        a[(k + 1, k + 1)] = -bk;
    }
    let mut balanced = a.clone();
    balance(&mut balanced);
    let eigenvalues = eigenvalues(balanced);
    OdeReduction {
        n,
        m,
        matrix: a,
        eigenvalues,
    }
}

/// Eigenvalues of the reduction sorted by `(Re, Im)`.
pub fn spectrum_oracle(kernel: &ExponentialSumKernel, n: u32) -> Vec<Complex64> {
    let mut ev = reduce_to_ode(kernel, n).eigenvalues;
    sort_spectrum(&mut ev);
    ev
}
