//! Exponential-sum memory kernels.
//!
//! A kernel is `k(t) = Σ a_k exp(-b_k t)` with Laplace image
//! `K(z) = Σ a_k / (z + b_k)`. Only a finite prefix of the coefficients is
//! stored; families with infinitely many terms carry a certified bound on the
//! omitted amplitude mass so every evaluation can report its truncation error.

use num_complex::Complex64;

use crate::error::{Result, SpectrumError};
use crate::sum::{sum_f64, ComplexNeumaierSum, NeumaierSum};

/// Relative pole-proximity tolerance: `|z + b_k| < tol * (1 + |z|)` is a pole hit.
pub const DEFAULT_POLE_TOLERANCE: f64 = 1e-12;

/// What is known about the coefficients beyond the stored prefix.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Tail {
    /// Best estimate of the omitted amplitude mass `Σ_{k>M} a_k`.
    mass: f64,
    /// Certified upper bound on the omitted mass.
    bound: f64,
    /// `b_{M+1}`; `None` for finitely supported kernels.
    next_rate: Option<f64>,
}

impl Tail {
    const NONE: Tail = Tail {
        mass: 0.0,
        bound: 0.0,
        next_rate: None,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSumKernel {
    a: Vec<f64>,
    b: Vec<f64>,
    alpha_sq: f64,
    tail: Tail,
    pole_tolerance: f64,
}

/// Value of `K(z)` together with the truncation error bound, when the kernel
/// has omitted terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue {
    pub value: Complex64,
    pub truncation_bound: Option<f64>,
}

impl ExponentialSumKernel {
    /// Finitely supported kernel from explicit amplitude and rate lists.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::with_tail(a, b, Tail::NONE)
    }

    fn with_tail(a: Vec<f64>, b: Vec<f64>, tail: Tail) -> Result<Self> {
        if a.is_empty() {
            return Err(SpectrumError::InvalidKernel("kernel needs at least one term".into()));
        }
        if a.len() != b.len() {
            return Err(SpectrumError::InvalidKernel(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        if let Some((k, &ak)) = a.iter().enumerate().find(|(_, &ak)| !(ak > 0.0 && ak.is_finite())) {
            return Err(SpectrumError::InvalidKernel(format!(
                "a_{} = {ak} must be positive and finite",
                k + 1
            )));
        }
        if !(b[0] >= 0.0 && b[0].is_finite()) {
            return Err(SpectrumError::InvalidKernel(format!("b_1 = {} must be >= 0", b[0])));
        }
        for k in 1..b.len() {
            if !(b[k] > b[k - 1] && b[k].is_finite()) {
                return Err(SpectrumError::InvalidKernel(format!(
                    "b must be strictly increasing: b_{} = {} after b_{} = {}",
                    k + 1,
                    b[k],
                    k,
                    b[k - 1]
                )));
            }
        }
        if let Some(next) = tail.next_rate {
            if next <= b[b.len() - 1] {
                return Err(SpectrumError::InvalidKernel("tail rates must follow stored rates".into()));
            }
        }
        let alpha_sq = sum_f64(a.iter().copied()) + tail.mass;
        if !alpha_sq.is_finite() {
            return Err(SpectrumError::InvalidKernel("alpha_sq is not finite".into()));
        }
        Ok(Self {
            a,
            b,
            alpha_sq,
            tail,
            pole_tolerance: DEFAULT_POLE_TOLERANCE,
        })
    }

    pub fn with_pole_tolerance(mut self, tol: f64) -> Self {
        self.pole_tolerance = tol;
        self
    }

    pub fn pole_tolerance(&self) -> f64 {
        self.pole_tolerance
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.a
    }

    pub fn rates(&self) -> &[f64] {
        &self.b
    }

    /// `α² = Σ a_k` over all terms, including the omitted tail.
    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_sq.sqrt()
    }

    /// Sum of the stored amplitudes; the value `z K(z)` tends to for the
    /// truncated kernel.
    pub fn alpha_sq_prefix(&self) -> f64 {
        sum_f64(self.a.iter().copied())
    }

    /// `δ_k = b_{k+1} - b_k` for 1-based `k`, using the tail's first rate
    /// when `k` is the last stored index.
    pub fn gap(&self, k: usize) -> Option<f64> {
        if k == 0 || k > self.b.len() {
            return None;
        }
        let next = if k < self.b.len() {
            self.b[k]
        } else {
            self.tail.next_rate?
        };
        Some(next - self.b[k - 1])
    }

    /// `b_k` for 1-based `k`, including the first omitted rate.
    pub fn rate(&self, k: usize) -> Option<f64> {
        match k {
            0 => None,
            k if k <= self.b.len() => Some(self.b[k - 1]),
            k if k == self.b.len() + 1 => self.tail.next_rate,
            _ => None,
        }
    }

    /// True when no terms were omitted.
    pub fn is_finite_support(&self) -> bool {
        self.tail.next_rate.is_none()
    }

    /// True for `K(z) = α²/z`, the single-term kernel with `b_1 = 0`.
    pub fn is_constant(&self) -> bool {
        self.a.len() == 1 && self.b[0] == 0.0 && self.is_finite_support()
    }

    /// Certified bound on `Σ_{k>m} a_k` when evaluating with the first `m`
    /// stored terms. Nonincreasing in `m`.
    pub fn tail_bound(&self, m: usize) -> f64 {
        let m = m.min(self.a.len());
        sum_f64(self.a[m..].iter().copied()) + self.tail.bound
    }

    /// Smallest decay rate among the terms omitted by an `m`-term truncation.
    fn first_omitted_rate(&self, m: usize) -> Option<f64> {
        if m < self.b.len() {
            Some(self.b[m])
        } else {
            self.tail.next_rate
        }
    }

    fn check_truncation(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(SpectrumError::InvalidArgument("truncation length must be >= 1".into()));
        }
        if m > self.a.len() {
            return Err(SpectrumError::InvalidArgument(format!(
                "truncation length {m} exceeds stored length {}",
                self.a.len()
            )));
        }
        Ok(())
    }

    /// `k(t)` summed over the first `m` terms. The error against the full
    /// kernel is at most [`tail_bound(m)`](Self::tail_bound).
    pub fn eval_k(&self, t: f64, m: usize) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(SpectrumError::InvalidArgument(format!("t = {t} must be >= 0")));
        }
        self.check_truncation(m)?;
        let mut acc = NeumaierSum::new();
        for (ak, bk) in self.a[..m].iter().zip(&self.b[..m]) {
            acc.add(ak * (-bk * t).exp());
        }
        Ok(acc.value())
    }

    fn pole_check(&self, z: Complex64, m: usize) -> Result<()> {
        let guard = self.pole_tolerance * (1.0 + z.norm());
        for (k, bk) in self.b[..m].iter().enumerate() {
            let d = (z + bk).norm();
            if d < guard {
                return Err(SpectrumError::PoleHit {
                    z,
                    index: k + 1,
                    distance: d,
                });
            }
        }
        Ok(())
    }

    /// `K(z)` summed over the first `m` terms in ascending order.
    pub fn eval_laplace(&self, z: Complex64, m: usize) -> Result<LaplaceValue> {
        self.check_truncation(m)?;
        self.pole_check(z, m)?;
        let mut acc = ComplexNeumaierSum::new();
        for (ak, bk) in self.a[..m].iter().zip(&self.b[..m]) {
            acc.add(*ak / (z + bk));
        }
        let bound = self.tail_bound(m);
        let truncation_bound = if bound > 0.0 {
            self.first_omitted_rate(m).map(|next| bound / distance_to_tail(z, next))
        } else {
            None
        };
        Ok(LaplaceValue {
            value: acc.value(),
            truncation_bound,
        })
    }

    /// `K(z)` over all stored terms.
    pub fn laplace(&self, z: Complex64) -> Result<Complex64> {
        self.eval_laplace(z, self.a.len()).map(|v| v.value)
    }

    /// `K(z)` and `K'(z)` over all stored terms.
    pub fn laplace_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.pole_check(z, self.a.len())?;
        let mut value = ComplexNeumaierSum::new();
        let mut deriv = ComplexNeumaierSum::new();
        for (ak, bk) in self.a.iter().zip(&self.b) {
            let inv = 1.0 / (z + bk);
            value.add(*ak * inv);
            deriv.add(-*ak * inv * inv);
        }
        Ok((value.value(), deriv.value()))
    }

    /// `K(x)` and `K'(x)` on the real axis.
    pub fn laplace_real(&self, x: f64) -> Result<(f64, f64)> {
        self.pole_check(Complex64::new(x, 0.0), self.a.len())?;
        let mut value = NeumaierSum::new();
        let mut deriv = NeumaierSum::new();
        for (ak, bk) in self.a.iter().zip(&self.b) {
            let inv = 1.0 / (x + bk);
            value.add(ak * inv);
            deriv.add(-ak * inv * inv);
        }
        Ok((value.value(), deriv.value()))
    }
}

/// Distance from `z` to the half-line `(-∞, -next_rate]` holding the omitted poles.
fn distance_to_tail(z: Complex64, next_rate: f64) -> f64 {
    if z.re <= -next_rate {
        z.im.abs()
    } else {
        (z + next_rate).norm()
    }
}

/// Parametric kernel families.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// Explicit finite coefficient lists.
    FiniteList { a: Vec<f64>, b: Vec<f64> },
    /// `a_k = A k^{-γ}`, `b_k = c k^β`.
    PowerLaw {
        amplitude: f64,
        gamma: f64,
        c: f64,
        beta: f64,
    },
    /// `a_k = A k^{-γ}`, `b_k = c ln ln(k + 2)`; the shift keeps `b_1 > 0`.
    Logarithmic { amplitude: f64, gamma: f64, c: f64 },
}

impl KernelFamily {
    fn validate(&self) -> Result<()> {
        let check_amp = |amplitude: f64, gamma: f64, c: f64| {
            if !(gamma > 1.0) {
                return Err(SpectrumError::DivergentAlphaSq { gamma });
            }
            if !(amplitude > 0.0 && amplitude.is_finite()) {
                return Err(SpectrumError::InvalidKernel(format!("A = {amplitude} must be positive")));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(SpectrumError::InvalidKernel(format!("c = {c} must be positive")));
            }
            Ok(())
        };
        match *self {
            KernelFamily::FiniteList { .. } => Ok(()),
            KernelFamily::PowerLaw {
                amplitude,
                gamma,
                c,
                beta,
            } => {
                check_amp(amplitude, gamma, c)?;
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(SpectrumError::InvalidKernel(format!("beta = {beta} must be positive")));
                }
                Ok(())
            }
            KernelFamily::Logarithmic { amplitude, gamma, c } => check_amp(amplitude, gamma, c),
        }
    }

    /// `b_k` for 1-based `k`; `None` past the end of a finite list.
    pub fn rate(&self, k: usize) -> Option<f64> {
        let kf = k as f64;
        match self {
            KernelFamily::FiniteList { b, .. } => b.get(k.checked_sub(1)?).copied(),
            KernelFamily::PowerLaw { c, beta, .. } => Some(c * kf.powf(*beta)),
            KernelFamily::Logarithmic { c, .. } => Some(c * (kf + 2.0).ln().ln()),
        }
    }

    fn amplitude(&self, k: usize) -> Option<f64> {
        match self {
            KernelFamily::FiniteList { a, .. } => a.get(k.checked_sub(1)?).copied(),
            KernelFamily::PowerLaw { amplitude, gamma, .. }
            | KernelFamily::Logarithmic { amplitude, gamma, .. } => Some(amplitude * (k as f64).powf(-gamma)),
        }
    }

    /// Materialize the first `m` terms. For the power-law amplitudes the
    /// omitted mass is bounded by `A ∫_m^∞ x^{-γ} dx = A m^{1-γ}/(γ-1)`.
    pub fn instantiate(&self, m: usize) -> Result<ExponentialSumKernel> {
        if m == 0 {
            return Err(SpectrumError::InvalidArgument("truncation length must be >= 1".into()));
        }
        self.validate()?;
        match self {
            KernelFamily::FiniteList { a, b } => {
                if m > a.len() || m > b.len() {
                    return Err(SpectrumError::InvalidArgument(format!(
                        "truncation length {m} exceeds list length {}",
                        a.len().min(b.len())
                    )));
                }
                let tail_a: Vec<f64> = a[m..].to_vec();
                let tail = if tail_a.is_empty() {
                    Tail::NONE
                } else {
                    let mass = sum_f64(tail_a.iter().copied());
                    Tail {
                        mass,
                        bound: mass,
                        next_rate: b.get(m).copied(),
                    }
                };
                ExponentialSumKernel::with_tail(a[..m].to_vec(), b[..m].to_vec(), tail)
            }
            KernelFamily::PowerLaw { amplitude, gamma, .. } | KernelFamily::Logarithmic { amplitude, gamma, .. } => {
                let a: Vec<f64> = (1..=m).map(|k| self.amplitude(k).unwrap()).collect();
                let b: Vec<f64> = (1..=m).map(|k| self.rate(k).unwrap()).collect();
                let mf = m as f64;
                let tail = Tail {
                    mass: amplitude * zeta_tail(*gamma, m),
                    bound: amplitude * mf.powf(1.0 - gamma) / (gamma - 1.0),
                    next_rate: self.rate(m + 1),
                };
                ExponentialSumKernel::with_tail(a, b, tail)
            }
        }
    }

    /// Probe `sup_k b_k (b_{k+1} - b_k)` over `k <= depth`.
    pub fn check_gap_condition(&self, depth: usize) -> Result<GapReport> {
        if depth < 2 {
            return Err(SpectrumError::InvalidArgument("probe depth must be >= 2".into()));
        }
        let depth = match self {
            KernelFamily::FiniteList { b, .. } => depth.min(b.len().saturating_sub(1)),
            _ => depth,
        };
        let products: Vec<f64> = (1..=depth)
            .map(|k| {
                let bk = self.rate(k).unwrap();
                bk * (self.rate(k + 1).unwrap() - bk)
            })
            .collect();
        let (witness_index, sup_so_far) =
            products
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(wi, w), (i, &p)| if p > w { (i + 1, p) } else { (wi, w) });
        let growth_exponent = growth_exponent(&products);
        let closed_form = match self {
            KernelFamily::FiniteList { .. } => None,
            KernelFamily::PowerLaw { beta, .. } => Some(*beta > 0.5),
            KernelFamily::Logarithmic { .. } => Some(false),
        };
        Ok(GapReport {
            satisfied_empirically: growth_exponent.is_some_and(|p| p > GROWTH_THRESHOLD),
            sup_so_far: if products.is_empty() { 0.0 } else { sup_so_far },
            witness_index,
            growth_exponent,
            closed_form,
        })
    }
}

/// Log-log slope above which the probed products count as growing.
const GROWTH_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    /// The products `b_k δ_k` grow over the last decade of the probe.
    pub satisfied_empirically: bool,
    pub sup_so_far: f64,
    /// 1-based index attaining `sup_so_far`.
    pub witness_index: usize,
    /// Fitted exponent `p` in `b_k δ_k ~ k^p` over the last decade of the probe.
    pub growth_exponent: Option<f64>,
    /// Analytic verdict for parametric families (`true` = unbounded).
    pub closed_form: Option<bool>,
}

/// Least-squares slope of `ln p_k` against `ln k` for `k` in the top decade.
fn growth_exponent(products: &[f64]) -> Option<f64> {
    let depth = products.len();
    let start = (depth / 10).max(1);
    let pts: Vec<(f64, f64)> = (start..=depth)
        .filter(|&k| products[k - 1] > 0.0)
        .map(|k| ((k as f64).ln(), products[k - 1].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `Σ_{k>m} k^{-γ}` by direct summation to a cutoff followed by
/// Euler-Maclaurin correction.
fn zeta_tail(gamma: f64, m: usize) -> f64 {
    let cutoff = m.max(64) + 1000;
    let direct = sum_f64(((m + 1)..cutoff).map(|k| (k as f64).powf(-gamma)));
    let x = cutoff as f64;
    let f = x.powf(-gamma);
    let d1 = -gamma * x.powf(-gamma - 1.0);
    let d3 = -gamma * (gamma + 1.0) * (gamma + 2.0) * x.powf(-gamma - 3.0);
    let em = x.powf(1.0 - gamma) / (gamma - 1.0) + f / 2.0 - d1 / 12.0 + d3 / 720.0;
    direct + em
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term() -> ExponentialSumKernel {
        ExponentialSumKernel::new(vec![1.0, 1.0], vec![1.0, 3.0]).unwrap()
    }

    #[test]
    fn eval_k_examples() {
        let c = ExponentialSumKernel::new(vec![1.0], vec![0.0]).unwrap();
        assert_eq!(c.eval_k(5.0, 1).unwrap(), 1.0);
        let k = two_term();
        assert_eq!(k.eval_k(0.0, 2).unwrap(), 2.0);
        // e^-1 + e^-3 = 0.4176665095...
        assert!((k.eval_k(1.0, 2).unwrap() - 0.417_666_509_539_306_3).abs() < 1e-15);
    }

    #[test]
    fn eval_k_rejects_bad_arguments() {
        let k = two_term();
        assert!(matches!(k.eval_k(-1.0, 2), Err(SpectrumError::InvalidArgument(_))));
        assert!(matches!(k.eval_k(1.0, 0), Err(SpectrumError::InvalidArgument(_))));
        assert!(matches!(k.eval_k(1.0, 3), Err(SpectrumError::InvalidArgument(_))));
    }

    #[test]
    fn eval_laplace_examples() {
        let c = ExponentialSumKernel::new(vec![1.0], vec![0.0]).unwrap();
        assert_eq!(c.laplace(Complex64::new(2.0, 0.0)).unwrap(), Complex64::new(0.5, 0.0));
        let k = two_term();
        assert_eq!(k.laplace(Complex64::new(-2.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let z = Complex64::new(0.0, 1e6);
        let v = k.eval_laplace(z, 2).unwrap();
        assert!((z * v.value - 2.0).norm() < 1e-5);
        assert!(v.truncation_bound.is_none());
    }

    #[test]
    fn pole_hit_is_reported() {
        let k = two_term();
        let err = k.laplace(Complex64::new(-3.0, 0.0)).unwrap_err();
        assert!(matches!(err, SpectrumError::PoleHit { index: 2, .. }));
        let err = k.laplace(Complex64::new(-1.0, 1e-14)).unwrap_err();
        assert!(matches!(err, SpectrumError::PoleHit { index: 1, .. }));
        // relaxed tolerance no longer rejects a nearby point
        let far = two_term().with_pole_tolerance(1e-16);
        assert!(far.laplace(Complex64::new(-1.0, 1e-14)).is_ok());
    }

    #[test]
    fn construction_rejects_invalid_coefficients() {
        assert!(ExponentialSumKernel::new(vec![], vec![]).is_err());
        assert!(ExponentialSumKernel::new(vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(ExponentialSumKernel::new(vec![0.0], vec![0.0]).is_err());
        assert!(ExponentialSumKernel::new(vec![1.0], vec![-1.0]).is_err());
        assert!(ExponentialSumKernel::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(ExponentialSumKernel::new(vec![1.0, 1.0], vec![2.0, 1.0]).is_err());
        // b_1 = 0 is allowed
        assert!(ExponentialSumKernel::new(vec![1.0, 1.0], vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn gaps_and_rates() {
        let k = ExponentialSumKernel::new(vec![2.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(k.gap(1), Some(1.0));
        assert_eq!(k.gap(2), None);
        assert_eq!(k.rate(3), None);
        assert_eq!(k.alpha_sq(), 3.0);
        let pl = power_law(1.0, 2.0).instantiate(5).unwrap();
        assert_eq!(pl.gap(5), Some(1.0));
        assert_eq!(pl.rate(6), Some(6.0));
    }

    fn power_law(amplitude: f64, gamma: f64) -> KernelFamily {
        KernelFamily::PowerLaw {
            amplitude,
            gamma,
            c: 1.0,
            beta: 1.0,
        }
    }

    #[test]
    fn instantiate_examples() {
        let f = KernelFamily::FiniteList {
            a: vec![1.0],
            b: vec![0.0],
        };
        let k = f.instantiate(1).unwrap();
        assert_eq!(k.alpha_sq(), 1.0);
        assert_eq!(k.tail_bound(1), 0.0);

        let k = power_law(1.0, 2.0).instantiate(10).unwrap();
        // Σ_{k≤10} k^-2 = 1.5497677311665408
        assert!((k.alpha_sq_prefix() - 1.549_767_731_166_540_8).abs() < 1e-14);
        assert!(k.tail_bound(10) <= 0.1 + 1e-15);
        assert!((k.tail_bound(10) - 0.1).abs() < 1e-15);
        // α² = ζ(2)
        assert!((k.alpha_sq() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);

        assert!(matches!(
            power_law(1.0, 1.0).instantiate(10),
            Err(SpectrumError::DivergentAlphaSq { .. })
        ));
        assert!(power_law(1.0, 2.0).instantiate(0).is_err());
    }

    #[test]
    fn finite_list_truncation_keeps_tail() {
        let f = KernelFamily::FiniteList {
            a: vec![1.0, 0.5, 0.25],
            b: vec![0.0, 1.0, 4.0],
        };
        let k = f.instantiate(2).unwrap();
        assert_eq!(k.alpha_sq(), 1.75);
        assert_eq!(k.tail_bound(2), 0.25);
        assert_eq!(k.tail_bound(1), 0.75);
        let v = k.eval_laplace(Complex64::new(0.0, 0.0), 2);
        // pole at 0 hit
        assert!(v.is_err());
        let v = k.eval_laplace(Complex64::new(1.0, 0.0), 2).unwrap();
        assert!((v.truncation_bound.unwrap() - 0.25 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_tail_matches_known_values() {
        // ζ(3) = 1.2020569031595942
        let z3 = 1.0 + zeta_tail(3.0, 1);
        assert!((z3 - 1.202_056_903_159_594_2).abs() < 1e-14);
        let z2 = sum_f64((1..=10).map(|k| (k as f64).powi(-2))) + zeta_tail(2.0, 10);
        assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    }

    #[test]
    fn gap_condition_examples() {
        let linear = KernelFamily::PowerLaw {
            amplitude: 1.0,
            gamma: 2.0,
            c: 1.0,
            beta: 1.0,
        };
        let r = linear.check_gap_condition(100).unwrap();
        assert_eq!(r.sup_so_far, 100.0);
        assert_eq!(r.witness_index, 100);
        assert!(r.satisfied_empirically);
        assert_eq!(r.closed_form, Some(true));

        let slow = KernelFamily::PowerLaw {
            amplitude: 1.0,
            gamma: 2.0,
            c: 1.0,
            beta: 0.4,
        };
        let r = slow.check_gap_condition(10_000).unwrap();
        assert!(!r.satisfied_empirically);
        assert_eq!(r.closed_form, Some(false));

        let loglog = KernelFamily::Logarithmic {
            amplitude: 1.0,
            gamma: 2.0,
            c: 1.0,
        };
        let r = loglog.check_gap_condition(10_000).unwrap();
        assert!(!r.satisfied_empirically);
        assert_eq!(r.closed_form, Some(false));

        assert!(linear.check_gap_condition(1).is_err());
    }

    #[test]
    fn gap_condition_on_finite_list_is_capped() {
        let f = KernelFamily::FiniteList {
            a: vec![1.0; 4],
            b: vec![0.0, 1.0, 3.0, 6.0],
        };
        let r = f.check_gap_condition(100).unwrap();
        // products: 0, 2, 9
        assert_eq!(r.sup_so_far, 9.0);
        assert_eq!(r.witness_index, 3);
        assert_eq!(r.closed_form, None);
    }
}
