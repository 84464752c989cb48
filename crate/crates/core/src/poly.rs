//! Cleared-denominator polynomials of truncated kernels and their roots.
//!
//! For an `M`-term kernel, `K(z) = P_K(z) / Q(z)` with `Q(z) = Π (z + b_k)`,
//! so the zeros of `G_n(z) = z + n² K(z)` are the roots of
//! `z Q(z) + n² P_K(z)`, a monic polynomial of degree `M + 1`. Roots are
//! computed as eigenvalues of the companion matrix; this path shares nothing
//! with the bracketed and contour solvers and serves as their shadow oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::kernel::ExponentialSumKernel;
use crate::linalg::{balance, eigenvalues};

/// Polynomial with real coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![1.0])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Multiply by `(z + c)`.
    pub fn mul_linear(&self, c: f64) -> Poly {
        let mut out = vec![0.0; self.0.len() + 1];
        for (i, &p) in self.0.iter().enumerate() {
            out[i] += c * p;
            out[i + 1] += p;
        }
        Poly(out)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|p| p * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    /// Roots via the eigenvalues of the balanced companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let mut coeffs = self.0.clone();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        let deg = coeffs.len() - 1;
        if deg == 0 {
            return Vec::new();
        }
        let lead = coeffs[deg];
        let mut c = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            c[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            c[(i, deg - 1)] = -coeffs[i] / lead;
        }
        balance(&mut c);
        eigenvalues(c)
    }
}

/// `Π_{k≤M} (z + b_k)`.
pub fn pole_polynomial(kernel: &ExponentialSumKernel) -> Poly {
    kernel.rates().iter().fold(Poly::one(), |p, &b| p.mul_linear(b))
}

/// `Σ_k a_k Π_{i≠k} (z + b_i)`, the numerator of `K`, degree `M - 1`.
pub fn kernel_numerator(kernel: &ExponentialSumKernel) -> Poly {
    let a = kernel.amplitudes();
    let b = kernel.rates();
    let mut acc = Poly(vec![0.0]);
    for (k, &ak) in a.iter().enumerate() {
        let term = b
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .fold(Poly::one(), |p, (_, &bi)| p.mul_linear(bi));
        acc = acc.add(&term.scale(ak));
    }
    acc
}

/// `z Π (z + b_k) + n² Σ_k a_k Π_{i≠k} (z + b_i)`, the numerator of `G_n`.
pub fn characteristic_numerator(kernel: &ExponentialSumKernel, n: u32) -> Poly {
    let n2 = f64::from(n) * f64::from(n);
    pole_polynomial(kernel)
        .mul_linear(0.0)
        .add(&kernel_numerator(kernel).scale(n2))
}

/// Zeros of the truncated `G_n` via the companion matrix.
pub fn companion_spectrum(kernel: &ExponentialSumKernel, n: u32) -> Vec<Complex64> {
    characteristic_numerator(kernel, n).roots()
}
