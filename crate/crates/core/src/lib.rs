//! Spectral analysis of the Gurtin-Pipkin heat equation
//! `θ_t = ∫₀ᵗ k(t-s) θ_xx(s) ds` on `(0, π)` with Dirichlet conditions and
//! memory kernel `k(t) = Σ a_k e^{-b_k t}`.
//!
//! Mode `n` of the sine expansion evolves according to the zeros of
//! `G_n(z) = z + n² K(z)`, `K(z) = Σ a_k/(z + b_k)`. This crate computes
//! those zeros three independent ways (bracketed real solves plus contour
//! isolation, companion-matrix roots, and the eigenvalues of the exact ODE
//! reduction) and checks the structure of the spectrum: real branches
//! interlaced with the poles, one conjugate pair near `±iαn`, everything in
//! the left half plane.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexspec;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod poly;
pub mod realspec;
pub mod spectrum;
pub mod sum;
pub mod timedomain;
pub mod verify;
pub mod winding;

pub use complexspec::{
    build_paper_contour, count_in_rectangle, count_spectrum_in_contour, find_complex_pair, BoundChecks, ComplexPair,
    ContourReport, PaperContour, PairMethod,
};
pub use error::{Result, SpectrumError};
pub use kernel::{ExponentialSumKernel, GapReport, KernelFamily, LaplaceValue};
pub use num_complex::Complex64;
pub use realspec::{find_lambda_real, find_mu, verify_monotone_in_n, MonotoneReport, RealBranch, RealZeroLadder};
pub use spectrum::{compute_slice, match_multisets, verify_left_half_plane, SolveOptions, SpectrumSlice};
pub use timedomain::{reduce_to_ode, simulate_mode, spectrum_oracle, OdeReduction, SimulationResult};
pub use winding::{winding_number, Rectangle, Winding};
