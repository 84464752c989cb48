//! Zero counting for `G_n` on rectangles and the complex pair `λ_n±`.
//!
//! On the rectangle with vertices `(±X, ±Y)` the perturbation
//! `K(z)` is dominated by `z/n²` as soon as `X, Y > nα` and the left side
//! sits midway between two poles `-b_N`, `-b_{N+1}` with
//! `1/n² > 2α²/(b_N δ_N)`. Then `G_n` has exactly one more zero than
//! poles inside, and counting with the argument principle pins the
//! non-real zeros to a single conjugate pair.

use num_complex::Complex64;

use crate::error::{Result, SpectrumError};
use crate::kernel::ExponentialSumKernel;
use crate::winding::{winding_number, Rectangle, Winding};

pub const DEFAULT_EPS: f64 = 0.25;
/// Initial boundary segments per side for contour counts.
pub const CONTOUR_SAMPLES: usize = 64;
/// Boundary points per side used to measure the Rouché margin.
pub const ROUCHE_SAMPLES: usize = 256;

const NEWTON_MAX_ITER: usize = 100;
const BISECTION_MAX_DEPTH: usize = 80;

/// `G_n(z) = z + n² K(z)`.
pub fn characteristic(kernel: &ExponentialSumKernel, n: u32, z: Complex64) -> Result<Complex64> {
    Ok(z + n2(n) * kernel.laplace(z)?)
}

fn n2(n: u32) -> f64 {
    f64::from(n) * f64::from(n)
}

/// Distance below which a pole on the boundary invalidates a count.
pub fn guard_distance(kernel: &ExponentialSumKernel, n: u32) -> f64 {
    1e-6 * 1f64.max(f64::from(n) * kernel.alpha())
}

/// Analytic side bounds of the square contour, re-evaluated numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChecks {
    /// `1/n² > 2α²/(b_N δ_N)`.
    pub n1_satisfied: bool,
    pub x_exceeds_n_alpha: bool,
    pub y_exceeds_n_alpha: bool,
    /// `q(X_N)/X_N` with `q(X) = Σ a_k/|b_k - X|` (tail bounded by its mass).
    pub left_measured: f64,
    /// `2α²/(b_N δ_N)`, the bound `q(X_N)/X_N` must respect.
    pub left_bound: f64,
    /// `α²/Y` on the horizontal sides.
    pub horizontal_bound: f64,
    /// `α²/X` on the right side.
    pub right_bound: f64,
    /// `max |K| n²/|z|` over boundary samples of each side:
    /// bottom, right, top, left.
    pub side_margins: [f64; 4],
}

impl BoundChecks {
    pub fn all_hold(&self) -> bool {
        self.n1_satisfied
            && self.x_exceeds_n_alpha
            && self.y_exceeds_n_alpha
            && self.left_measured <= self.left_bound
            && self.side_margins.iter().all(|&m| m < 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperContour {
    pub rect: Rectangle,
    pub n_used: usize,
    pub checks: BoundChecks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourReport {
    pub rect: Rectangle,
    /// `N(G_n) - P(G_n)` inside `rect`.
    pub winding: i64,
    pub poles_inside: usize,
    pub zeros_inside: usize,
    pub winding_detail: Winding,
    /// `max |K(z)| n²/|z|` over boundary samples; below 1 on the square contour.
    pub rouche_margin: f64,
    /// Present when `rect` came from [`build_paper_contour`].
    pub contour: Option<PaperContour>,
}

/// `q(X) = Σ a_k / |b_k - X|` over stored terms, with the omitted terms
/// bounded by `tail / (b_{M+1} - X)`.
fn left_side_sum(kernel: &ExponentialSumKernel, x: f64) -> f64 {
    let stored: f64 = kernel
        .amplitudes()
        .iter()
        .zip(kernel.rates())
        .map(|(a, b)| a / (b - x).abs())
        .sum();
    let tail = kernel.tail_bound(kernel.len());
    match kernel.rate(kernel.len() + 1) {
        Some(next) if tail > 0.0 => stored + tail / (next - x),
        _ => stored,
    }
}

/// `max_{z on each side} |K(z)| n² / |z|`, sides ordered bottom, right, top, left.
fn side_margins(kernel: &ExponentialSumKernel, n: u32, rect: &Rectangle) -> Result<([f64; 4], Complex64)> {
    let v = rect.vertices();
    let mut margins = [0.0f64; 4];
    let mut worst = (f64::NEG_INFINITY, v[0]);
    for s in 0..4 {
        let (p, q) = (v[s], v[(s + 1) % 4]);
        for i in 0..=ROUCHE_SAMPLES {
            let z = p + (q - p) * (i as f64 / ROUCHE_SAMPLES as f64);
            let m = kernel.laplace(z)?.norm() * n2(n) / z.norm();
            margins[s] = margins[s].max(m);
            if m > worst.0 {
                worst = (m, z);
            }
        }
    }
    Ok((margins, worst.1))
}

/// Smallest `N` with `1/n² > 2α²/(b_N δ_N)` and `X_N = (b_N + b_{N+1})/2 > nα`,
/// and the square `[-X_N, X_N]²`.
pub fn build_paper_contour(kernel: &ExponentialSumKernel, n: u32) -> Result<PaperContour> {
    if n == 0 {
        return Err(SpectrumError::InvalidArgument("mode index n must be >= 1".into()));
    }
    let alpha_sq = kernel.alpha_sq();
    let n_alpha = f64::from(n) * kernel.alpha();
    let inv_n2 = 1.0 / n2(n);
    for big_n in 1..=kernel.len() {
        let (Some(b_n), Some(delta)) = (kernel.rate(big_n), kernel.gap(big_n)) else {
            break;
        };
        let product = b_n * delta;
        if product <= 0.0 {
            continue;
        }
        let left_bound = 2.0 * alpha_sq / product;
        let x = b_n + 0.5 * delta;
        if !(inv_n2 > left_bound && x > n_alpha) {
            continue;
        }
        let rect = Rectangle::new(-x, x, -x, x)?;
        let (side_margins, _) = side_margins(kernel, n, &rect)?;
        let checks = BoundChecks {
            n1_satisfied: true,
            x_exceeds_n_alpha: true,
            y_exceeds_n_alpha: true,
            left_measured: left_side_sum(kernel, x) / x,
            left_bound,
            horizontal_bound: alpha_sq / x,
            right_bound: alpha_sq / x,
            side_margins,
        };
        return Ok(PaperContour {
            rect,
            n_used: big_n,
            checks,
        });
    }
    Err(SpectrumError::GapConditionExhausted {
        n,
        stored: kernel.len(),
    })
}

/// Argument-principle count of the zeros of `G_n` inside `rect`.
pub fn count_in_rectangle(kernel: &ExponentialSumKernel, n: u32, rect: &Rectangle) -> Result<ContourReport> {
    if n == 0 {
        return Err(SpectrumError::InvalidArgument("mode index n must be >= 1".into()));
    }
    let guard = guard_distance(kernel, n);
    let mut poles_inside = 0;
    for (k, &b) in kernel.rates().iter().enumerate() {
        let pole = Complex64::new(-b, 0.0);
        let d = rect.boundary_distance(pole);
        if d < guard {
            return Err(SpectrumError::BoundaryTooClose { index: k + 1, distance: d });
        }
        if rect.contains(pole) {
            poles_inside += 1;
        }
    }
    let detail = winding_number(|z| characteristic(kernel, n, z), rect, CONTOUR_SAMPLES)?;
    let zeros = detail.winding + poles_inside as i64;
    if zeros < 0 {
        return Err(SpectrumError::WindingQuality {
            raw: detail.raw,
            distance: detail.integer_distance,
        });
    }
    let (margins, _) = side_margins(kernel, n, rect)?;
    Ok(ContourReport {
        rect: *rect,
        winding: detail.winding,
        poles_inside,
        zeros_inside: zeros as usize,
        winding_detail: detail,
        rouche_margin: margins.iter().copied().fold(0.0, f64::max),
        contour: None,
    })
}

/// Count zeros of `G_n` on the square contour; the Rouché premise
/// `|K| < |z|/n²` must hold at every boundary sample.
pub fn count_spectrum_in_contour(kernel: &ExponentialSumKernel, n: u32) -> Result<ContourReport> {
    let contour = build_paper_contour(kernel, n)?;
    let (margins, at) = side_margins(kernel, n, &contour.rect)?;
    let worst = margins.iter().copied().fold(0.0, f64::max);
    if worst >= 1.0 {
        return Err(SpectrumError::RoucheViolation { worst_margin: worst, at });
    }
    let mut report = count_in_rectangle(kernel, n, &contour.rect)?;
    report.contour = Some(contour);
    Ok(report)
}

/// How [`find_complex_pair`] located `λ_n⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMethod {
    /// Newton from `iαn`.
    Newton,
    /// Winding-number bisection of the ε-box around `iαn`.
    EpsBox,
    /// Winding-number bisection of the region holding every non-real zero.
    UpperRegion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub n: u32,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    /// Half-diagonal of the localization box.
    pub box_radius: f64,
    /// `|G_n(λ⁺)|`.
    pub residual: f64,
    /// `|λ⁺ - iαn| / n`.
    pub relative_offset: f64,
    pub method: PairMethod,
}

/// Safeguarded Newton on `G_n`: steps are halved until `|G_n|` decreases,
/// and iteration continues past the tolerance while it still improves.
fn newton(kernel: &ExponentialSumKernel, n: u32, seed: Complex64, tol: f64) -> Option<(Complex64, f64)> {
    let n2 = n2(n);
    let eval = |z: Complex64| -> Option<(Complex64, Complex64)> {
        let (k, dk) = kernel.laplace_with_derivative(z).ok()?;
        Some((z + n2 * k, 1.0 + n2 * dk))
    };
    let mut z = seed;
    let (mut g, mut dg) = eval(z)?;
    let mut converged = g.norm() <= tol;
    for _ in 0..NEWTON_MAX_ITER {
        if g.norm() == 0.0 {
            return Some((z, 0.0));
        }
        if dg.norm() == 0.0 {
            return None;
        }
        let step = g / dg;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand = z - step * t;
            if let Some((gc, dgc)) = eval(cand) {
                if gc.norm() < g.norm() {
                    accepted = Some((cand, gc, dgc));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((zc, gc, dgc)) => {
                z = zc;
                g = gc;
                dg = dgc;
            }
            None => break,
        }
        if converged {
            // one polishing step beyond the tolerance
            break;
        }
        converged = g.norm() <= tol;
    }
    (g.norm() <= tol).then(|| (z, g.norm()))
}

/// Shrink `rect` by winding-number bisection onto a single zero of `G_n`.
fn isolate_zero(kernel: &ExponentialSumKernel, n: u32, mut rect: Rectangle, tol: f64) -> Result<Option<(Complex64, f64, Rectangle)>> {
    let count = |r: &Rectangle| -> Result<i64> {
        Ok(winding_number(|z| characteristic(kernel, n, z), r, 16)?.winding)
    };
    if count(&rect)? < 1 {
        return Ok(None);
    }
    for _ in 0..BISECTION_MAX_DEPTH {
        if let Some((z, res)) = newton(kernel, n, rect.center(), tol) {
            if rect.contains(z) && count(&rect)? == 1 {
                return Ok(Some((z, res, rect)));
            }
        }
        rect = choose_half(&rect, &count)?;
    }
    Ok(None)
}

/// Half of `rect` holding at least one zero. A zero sitting on the split
/// line makes both counts fail, so the split is retried off-center.
fn choose_half<C>(rect: &Rectangle, count: &C) -> Result<Rectangle>
where
    C: Fn(&Rectangle) -> Result<i64>,
{
    let mut last_err = None;
    for frac in [0.5, 0.5 + 1e-3 / std::f64::consts::PI, 0.5 - 2e-3 / std::f64::consts::E] {
        let (lo, hi) = rect.split(frac);
        match (count(&lo), count(&hi)) {
            (Ok(c), _) if c >= 1 => return Ok(lo),
            (_, Ok(c)) if c >= 1 => return Ok(hi),
            (Err(e), _) | (_, Err(e)) => last_err = Some(e),
            _ => {}
        }
    }
    Err(last_err.unwrap_or(SpectrumError::PairNotFound {
        n: 0,
        reason: "zero lost during bisection".into(),
    }))
}

/// Locate `λ_n⁺` in the upper half plane near `iαn`, with `α² = Σ` of the
/// stored amplitudes.
///
/// Newton from `iαn` first; if it fails or lands off the upper half plane
/// the ε-box with vertices `(±εαn, iαn(1∓ε))` is bisected, and as a last
/// resort the region `[-b_M/2, 0] × (0, nα]`, which holds every non-real
/// zero, is searched.
pub fn find_complex_pair(kernel: &ExponentialSumKernel, n: u32, eps: f64, tol: f64) -> Result<ComplexPair> {
    if n == 0 {
        return Err(SpectrumError::InvalidArgument("mode index n must be >= 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SpectrumError::InvalidArgument(format!("eps = {eps} must lie in (0, 1)")));
    }
    let nf = f64::from(n);
    let alpha = kernel.alpha_sq_prefix().sqrt();
    let n_alpha = nf * alpha;
    let seed = Complex64::new(0.0, n_alpha);
    let abs_tol = tol * n2(n);
    let guard = guard_distance(kernel, n);
    let eps_box = Rectangle::centered(seed, eps * n_alpha, eps * n_alpha)?;

    let upper = |z: Complex64| z.im > guard;
    let found = match newton(kernel, n, seed, abs_tol) {
        Some((z, res)) if upper(z) => Some((z, res, eps_box.half_diagonal(), PairMethod::Newton)),
        _ => None,
    };
    let found = match found {
        Some(f) => Some(f),
        None => isolate_zero(kernel, n, eps_box, abs_tol)?
            .filter(|(z, _, _)| upper(*z))
            .map(|(z, res, r)| (z, res, r.half_diagonal(), PairMethod::EpsBox)),
    };
    let found = match found {
        Some(f) => Some(f),
        None => {
            let b_max = kernel.rates()[kernel.len() - 1];
            let x_min = -0.5 * b_max - 1.0;
            let region = Rectangle::new(x_min, 1.0, guard, n_alpha + 1.0)?;
            isolate_zero(kernel, n, region, abs_tol)?
                .filter(|(z, _, _)| upper(*z))
                .map(|(z, res, r)| (z, res, r.half_diagonal(), PairMethod::UpperRegion))
        }
    };
    let (z, residual, box_radius, method) = found.ok_or_else(|| SpectrumError::PairNotFound {
        n,
        reason: "no non-real zero in the upper half plane".into(),
    })?;
    Ok(ComplexPair {
        n,
        lambda_plus: z,
        lambda_minus: z.conj(),
        box_radius,
        residual,
        relative_offset: (z - seed).norm() / nf,
        method,
    })
}

/// Zero count in the region `[-b_M/2 - 1, 1] × [guard, nα + 1]`, which
/// holds every zero of `G_n` with positive imaginary part above the guard.
pub fn count_upper_region(kernel: &ExponentialSumKernel, n: u32) -> Result<i64> {
    let b_max = kernel.rates()[kernel.len() - 1];
    let alpha = kernel.alpha_sq_prefix().sqrt();
    let region = Rectangle::new(
        -0.5 * b_max - 1.0,
        1.0,
        guard_distance(kernel, n),
        f64::from(n) * alpha + 1.0,
    )?;
    Ok(winding_number(|z| characteristic(kernel, n, z), &region, CONTOUR_SAMPLES)?.winding)
}
