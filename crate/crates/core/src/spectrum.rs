//! Assembled spectrum slices `Λ_n` and multiset matching against oracles.

use num_complex::Complex64;

use crate::complexspec::{find_complex_pair, ComplexPair};
use crate::error::Result;
use crate::kernel::ExponentialSumKernel;
use crate::poly::companion_spectrum;
use crate::realspec::{find_lambda_real, RealBranch, RealZeroLadder};

/// Kernels with at most this many stored terms are cross-checked against
/// the companion-matrix roots.
pub const SHADOW_ORACLE_MAX_TERMS: usize = 12;

/// Solver settings shared by every slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol_root: f64,
    pub eps: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol_root: crate::realspec::DEFAULT_ROOT_TOLERANCE,
            eps: crate::complexspec::DEFAULT_EPS,
        }
    }
}

/// All computed zeros of `G_n` for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice {
    pub n: u32,
    pub branches: Vec<RealBranch>,
    pub pair: ComplexPair,
    /// `b_k ≡ 0`: the pair sits on the imaginary axis.
    pub constant_kernel: bool,
    /// Worst relative distance to the companion-matrix roots, when run.
    pub shadow_distance: Option<f64>,
}

impl SpectrumSlice {
    /// Real branches followed by `λ⁺`, `λ⁻`.
    pub fn values(&self) -> Vec<Complex64> {
        self.branches
            .iter()
            .map(|b| Complex64::new(b.lambda, 0.0))
            .chain([self.pair.lambda_plus, self.pair.lambda_minus])
            .collect()
    }
}

/// Real branches for every rung of `ladder` plus the complex pair.
pub fn compute_slice(
    kernel: &ExponentialSumKernel,
    ladder: &RealZeroLadder,
    n: u32,
    opts: &SolveOptions,
) -> Result<SpectrumSlice> {
    let branches = find_lambda_real(kernel, ladder, n, opts.tol_root)?;
    let pair = find_complex_pair(kernel, n, opts.eps, opts.tol_root)?;
    let mut slice = SpectrumSlice {
        n,
        branches,
        pair,
        constant_kernel: kernel.is_constant(),
        shadow_distance: None,
    };
    if kernel.len() <= SHADOW_ORACLE_MAX_TERMS && ladder.len() + 1 == kernel.len() {
        let shadow = companion_spectrum(kernel, n);
        slice.shadow_distance = match_multisets(&slice.values(), &shadow).map(|m| m.max_distance);
    }
    Ok(slice)
}

/// `Re λ <= 0` for every computed zero; `Re λ = 0` (to rounding) is only
/// accepted for the constant kernel.
pub fn verify_left_half_plane(slice: &SpectrumSlice) -> bool {
    slice.values().iter().all(|z| {
        if slice.constant_kernel {
            z.re <= 1e-12 * z.norm().max(1.0)
        } else {
            z.re < 0.0
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `(index into left, index into right, relative distance)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub max_distance: f64,
    /// Left elements whose nearest right element was claimed by another.
    pub collisions: usize,
}

/// `|x - y| / max(1, |y|)`.
pub fn relative_distance(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm().max(1.0)
}

/// Greedy nearest-neighbor matching of two equally sized multisets: pairs
/// are taken in order of increasing distance, ties broken by index.
/// Returns `None` when the sizes differ.
pub fn match_multisets(left: &[Complex64], right: &[Complex64]) -> Option<Matching> {
    if left.len() != right.len() {
        return None;
    }
    let mut candidates: Vec<(f64, usize, usize)> = left
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| right.iter().enumerate().map(move |(j, &y)| (relative_distance(x, y), i, j)))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let nearest: Vec<usize> = left
        .iter()
        .map(|&x| {
            (0..right.len())
                .min_by(|&a, &b| relative_distance(x, right[a]).total_cmp(&relative_distance(x, right[b])))
                .unwrap()
        })
        .collect();

    let mut left_used = vec![false; left.len()];
    let mut right_used = vec![false; right.len()];
    let mut pairs = Vec::with_capacity(left.len());
    for (d, i, j) in candidates {
        if !left_used[i] && !right_used[j] {
            left_used[i] = true;
            right_used[j] = true;
            pairs.push((i, j, d));
        }
    }
    pairs.sort_by_key(|p| p.0);
    let collisions = pairs.iter().filter(|&&(i, j, _)| nearest[i] != j).count();
    let max_distance = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    Some(Matching {
        pairs,
        max_distance,
        collisions,
    })
}

/// Sort by real part, then imaginary part.
pub fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}
