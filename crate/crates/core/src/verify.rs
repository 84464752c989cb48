//! The claim suite behind `gp-spectrum verify`.
//!
//! Every claim is evaluated on precomputed spectrum slices so callers can
//! compute the per-mode work in parallel; evaluation itself is sequential
//! and deterministic.

use num_complex::Complex64;

use crate::complexspec::{count_spectrum_in_contour, count_upper_region};
use crate::error::{Result, SpectrumError};
use crate::kernel::ExponentialSumKernel;
use crate::realspec::RealZeroLadder;
use crate::spectrum::{match_multisets, verify_left_half_plane, SpectrumSlice, SHADOW_ORACLE_MAX_TERMS};
use crate::timedomain::spectrum_oracle;

/// Relative tolerance for matching solver roots to matrix eigenvalues.
pub const ORACLE_TOLERANCE: f64 = 1e-8;
/// Looser tolerance for the companion-matrix roots, whose coefficients grow
/// like `n² Π b_k`.
pub const SHADOW_TOLERANCE: f64 = 1e-6;
/// Sequences at or below this size count as identically zero.
const ZERO_GAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ClaimStatus {
    Pass,
    Fail,
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimResult {
    pub claim: &'static str,
    pub status: ClaimStatus,
    /// Measured margin; its meaning is claim specific and stated in `detail`.
    pub margin: Option<f64>,
    pub detail: String,
}

impl ClaimResult {
    fn new(claim: &'static str, ok: bool, margin: Option<f64>, detail: impl Into<String>) -> Self {
        Self {
            claim,
            status: if ok { ClaimStatus::Pass } else { ClaimStatus::Fail },
            margin,
            detail: detail.into(),
        }
    }

    fn not_applicable(claim: &'static str, reason: impl Into<String>) -> Self {
        Self {
            claim,
            status: ClaimStatus::NotApplicable(reason.into()),
            margin: None,
            detail: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub claims: Vec<ClaimResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Fail)
    }
}

/// `n_min, 2 n_min, 4 n_min, …` up to `n_max`.
pub fn doublings(n_min: u32, n_max: u32) -> Vec<u32> {
    std::iter::successors(Some(n_min.max(1)), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect()
}

/// Strictly decreasing absolute values, or identically zero.
pub fn decreasing_to_zero(values: &[f64]) -> bool {
    values.iter().all(|v| v.abs() <= ZERO_GAP) || values.windows(2).all(|w| w[1].abs() < w[0].abs())
}

/// `|λ_n⁺| / (α n) - 1` with `α² = Σ` of the stored amplitudes.
pub fn pair_relative_gap(kernel: &ExponentialSumKernel, slice: &SpectrumSlice) -> f64 {
    slice.pair.lambda_plus.norm() / (kernel.alpha_sq_prefix().sqrt() * f64::from(slice.n)) - 1.0
}

/// Evaluate every claim on `slices`, which must be consecutive modes in
/// increasing order.
pub fn verify_slices(kernel: &ExponentialSumKernel, ladder: &RealZeroLadder, slices: &[SpectrumSlice]) -> Result<VerifyReport> {
    if slices.is_empty() {
        return Err(SpectrumError::InvalidArgument("no spectrum slices to verify".into()));
    }
    let full_ladder = ladder.len() + 1 == kernel.len();
    let claims = vec![
        interlacing(ladder),
        containment(slices),
        monotone_in_n(ladder, slices),
        left_half_plane(slices),
        conjugate_symmetry(kernel, slices),
        upper_half_plane_count(kernel, slices)?,
        winding_consistency(kernel, slices, full_ladder)?,
        oracle_equality(kernel, slices, full_ladder),
        pair_asymptotics(kernel, slices),
    ];
    Ok(VerifyReport { claims })
}

fn interlacing(ladder: &RealZeroLadder) -> ClaimResult {
    if ladder.is_empty() {
        return ClaimResult::new("interlacing", true, None, "vacuous: J = 0");
    }
    let margin = ladder
        .mu
        .iter()
        .zip(&ladder.brackets)
        .map(|(&mu, &(lo, hi))| (mu - lo).min(hi - mu))
        .fold(f64::INFINITY, f64::min);
    let witness = ladder
        .mu
        .iter()
        .zip(&ladder.brackets)
        .position(|(&mu, &(lo, hi))| !(lo < mu && mu < hi));
    let detail = match witness {
        Some(j) => format!("mu_{} = {} outside ({}, {})", j + 1, ladder.mu[j], ladder.brackets[j].0, ladder.brackets[j].1),
        None => "min distance from mu_j to b_j, b_(j+1)".into(),
    };
    ClaimResult::new("interlacing", witness.is_none(), Some(margin), detail)
}

fn containment(slices: &[SpectrumSlice]) -> ClaimResult {
    let branches = slices.iter().flat_map(|s| &s.branches);
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for b in branches {
        margin = margin.min((b.lambda - b.bracket.0).min(b.bracket.1 - b.lambda));
        if witness.is_none() && !b.is_contained() {
            witness = Some(format!("lambda_({},{}) = {} outside ({}, {})", b.n, b.j, b.lambda, b.bracket.0, b.bracket.1));
        }
    }
    if margin.is_infinite() {
        return ClaimResult::new("containment", true, None, "vacuous: no real branches");
    }
    let ok = witness.is_none();
    ClaimResult::new(
        "containment",
        ok,
        Some(margin),
        witness.unwrap_or_else(|| "min distance from lambda_nj to its bracket ends".into()),
    )
}

fn monotone_in_n(ladder: &RealZeroLadder, slices: &[SpectrumSlice]) -> ClaimResult {
    if ladder.is_empty() {
        return ClaimResult::new("monotone_in_n", true, None, "vacuous: J = 0");
    }
    let mut margin = f64::INFINITY;
    for j in 0..ladder.len() {
        let mu = ladder.mu[j];
        for w in slices.windows(2) {
            let (a, b) = (w[0].branches[j].lambda, w[1].branches[j].lambda);
            let rise = b - a;
            let gap_drop = (a + mu).abs() - (b + mu).abs();
            margin = margin.min(rise.min(gap_drop));
            if !(rise > 0.0 && gap_drop > 0.0) {
                return ClaimResult::new(
                    "monotone_in_n",
                    false,
                    Some(rise.min(gap_drop)),
                    format!("j = {}: lambda_({},j) = {a} then lambda_({},j) = {b}", j + 1, w[0].n, w[1].n),
                );
            }
        }
    }
    if margin.is_infinite() {
        return ClaimResult::new("monotone_in_n", true, None, "vacuous: single mode");
    }
    ClaimResult::new("monotone_in_n", true, Some(margin), "min increment of lambda_nj and of the gap decrease")
}

fn left_half_plane(slices: &[SpectrumSlice]) -> ClaimResult {
    let max_re = slices
        .iter()
        .flat_map(|s| s.values())
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    match slices.iter().find(|s| !verify_left_half_plane(s)) {
        Some(s) => ClaimResult::new("left_half_plane", false, Some(max_re), format!("n = {}", s.n)),
        None => ClaimResult::new("left_half_plane", true, Some(max_re), "max Re lambda"),
    }
}

fn conjugate_symmetry(kernel: &ExponentialSumKernel, slices: &[SpectrumSlice]) -> ClaimResult {
    let mut worst = 0.0f64;
    let mut witness = 0;
    for s in slices {
        let ev = spectrum_oracle(kernel, s.n);
        let conj: Vec<Complex64> = ev.iter().map(|z| z.conj()).collect();
        let d = match_multisets(&ev, &conj).map_or(f64::INFINITY, |m| m.max_distance);
        let n2 = f64::from(s.n) * f64::from(s.n);
        let residual = crate::complexspec::characteristic(kernel, s.n, s.pair.lambda_minus)
            .map_or(f64::INFINITY, |g| g.norm() / n2.max(1.0));
        let here = d.max(residual);
        if here > worst {
            worst = here;
            witness = s.n;
        }
    }
    ClaimResult::new(
        "conjugate_symmetry",
        worst <= ORACLE_TOLERANCE,
        Some(worst),
        format!("max conjugation mismatch (worst n = {witness})"),
    )
}

fn upper_half_plane_count(kernel: &ExponentialSumKernel, slices: &[SpectrumSlice]) -> Result<ClaimResult> {
    for s in slices {
        let count = count_upper_region(kernel, s.n)?;
        if count != 1 {
            return Ok(ClaimResult::new(
                "upper_half_plane_count",
                false,
                Some(count as f64),
                format!("n = {}: {count} zeros above the real axis", s.n),
            ));
        }
    }
    Ok(ClaimResult::new(
        "upper_half_plane_count",
        true,
        Some(1.0),
        "exactly one zero of G_n above the real axis for every n",
    ))
}

fn winding_consistency(kernel: &ExponentialSumKernel, slices: &[SpectrumSlice], full_ladder: bool) -> Result<ClaimResult> {
    let mut checked = 0;
    let mut worst_margin = 0.0f64;
    for s in slices {
        let report = match count_spectrum_in_contour(kernel, s.n) {
            Ok(r) => r,
            Err(SpectrumError::GapConditionExhausted { .. }) => continue,
            Err(SpectrumError::RoucheViolation { worst_margin, at }) => {
                return Ok(ClaimResult::new(
                    "winding_consistency",
                    false,
                    Some(worst_margin),
                    format!("n = {}: Rouche premise fails at {at}", s.n),
                ))
            }
            Err(e) => return Err(e),
        };
        checked += 1;
        worst_margin = worst_margin.max(report.rouche_margin);
        if report.zeros_inside != report.poles_inside + 1 {
            return Ok(ClaimResult::new(
                "winding_consistency",
                false,
                Some(report.rouche_margin),
                format!("n = {}: {} zeros with {} poles inside", s.n, report.zeros_inside, report.poles_inside),
            ));
        }
        if full_ladder {
            let found = s.values().iter().filter(|&&z| report.rect.contains(z)).count();
            if found != report.zeros_inside {
                return Ok(ClaimResult::new(
                    "winding_consistency",
                    false,
                    Some(report.rouche_margin),
                    format!("n = {}: winding counts {} zeros, solvers found {found}", s.n, report.zeros_inside),
                ));
            }
        }
    }
    if checked == 0 {
        return Ok(ClaimResult::not_applicable("winding_consistency", "gap condition unmet"));
    }
    Ok(ClaimResult::new(
        "winding_consistency",
        true,
        Some(worst_margin),
        format!("max Rouche ratio |K| n^2/|z| over {checked} square contours"),
    ))
}

fn oracle_equality(kernel: &ExponentialSumKernel, slices: &[SpectrumSlice], full_ladder: bool) -> ClaimResult {
    if kernel.len() > SHADOW_ORACLE_MAX_TERMS {
        return ClaimResult::not_applicable("oracle_equality", format!("M = {} > {SHADOW_ORACLE_MAX_TERMS}", kernel.len()));
    }
    if !full_ladder {
        return ClaimResult::not_applicable("oracle_equality", "J < M - 1: spectrum incomplete");
    }
    let mut worst = 0.0f64;
    let mut worst_shadow = 0.0f64;
    for s in slices {
        let values = s.values();
        let oracle = spectrum_oracle(kernel, s.n);
        let Some(m) = match_multisets(&values, &oracle) else {
            return ClaimResult::new(
                "oracle_equality",
                false,
                None,
                format!("n = {}: {} roots vs {} eigenvalues", s.n, values.len(), oracle.len()),
            );
        };
        worst = worst.max(m.max_distance);
        worst_shadow = worst_shadow.max(s.shadow_distance.unwrap_or(f64::INFINITY));
    }
    ClaimResult::new(
        "oracle_equality",
        worst <= ORACLE_TOLERANCE && worst_shadow <= SHADOW_TOLERANCE,
        Some(worst),
        format!("max relative distance to eig(A); companion roots {worst_shadow:.3e}"),
    )
}

fn pair_asymptotics(kernel: &ExponentialSumKernel, slices: &[SpectrumSlice]) -> ClaimResult {
    let n_min = slices[0].n;
    let n_max = slices[slices.len() - 1].n;
    let ns = doublings(n_min, n_max);
    if ns.len() < 3 {
        return ClaimResult::not_applicable("pair_asymptotics", "fewer than 3 doublings of n in range");
    }
    let gaps: Vec<f64> = ns
        .iter()
        .map(|&n| pair_relative_gap(kernel, &slices[(n - n_min) as usize]))
        .collect();
    ClaimResult::new(
        "pair_asymptotics",
        decreasing_to_zero(&gaps),
        gaps.last().map(|g| g.abs()),
        format!("| |lambda+|/(alpha n) - 1 | over n = {ns:?}"),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    /// `|λ_n⁺| / (αn) - 1`.
    pub pair_rel_gap: f64,
    /// `|λ_nj + μ_j|`, absent when no branch was requested.
    pub branch_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub j: Option<usize>,
    pub rows: Vec<SweepRow>,
    pub pair_decreasing: bool,
    pub branch_decreasing: bool,
}

/// Tabulate both asymptotic gaps from slices at the sweep's mode indices.
pub fn sweep_table(kernel: &ExponentialSumKernel, ladder: &RealZeroLadder, slices: &[SpectrumSlice], j: Option<usize>) -> Result<SweepTable> {
    if let Some(j) = j {
        if j == 0 || j > ladder.len() {
            return Err(SpectrumError::InvalidArgument(format!("branch j = {j} outside 1..={}", ladder.len())));
        }
    }
    let rows: Vec<SweepRow> = slices
        .iter()
        .map(|s| SweepRow {
            n: s.n,
            pair_rel_gap: pair_relative_gap(kernel, s),
            branch_gap: j.map(|j| (s.branches[j - 1].lambda + ladder.mu[j - 1]).abs()),
        })
        .collect();
    let pair: Vec<f64> = rows.iter().map(|r| r.pair_rel_gap).collect();
    let branch: Vec<f64> = rows.iter().filter_map(|r| r.branch_gap).collect();
    Ok(SweepTable {
        j,
        pair_decreasing: decreasing_to_zero(&pair),
        branch_decreasing: branch.windows(2).all(|w| w[1] < w[0]),
        rows,
    })
}
