//! Time-domain view of the per-mode Volterra equation
//! `θ_n' = -n² ∫₀ᵗ k(t-s) θ_n(s) ds`, `θ_n(0) = ξ_n`.
//!
//! With `y_k(t) = ∫₀ᵗ e^{-b_k(t-s)} θ_n(s) ds` the equation becomes the
//! linear system `θ_n' = -n² Σ a_k y_k`, `y_k' = θ_n - b_k y_k`, whose
//! matrix has exactly the zeros of the truncated `G_n` as eigenvalues.

mod integrator;
mod reduction;
mod simulate;

pub use integrator::{DormandPrince, StepStats};
pub use reduction::{reduce_to_ode, spectrum_oracle, OdeReduction};
pub use simulate::{
    assemble_field, reconstruct_field, simulate_mode, sine_mode, uniform_grid, FieldSamples, ModeTrajectory, SimulationResult,
};
