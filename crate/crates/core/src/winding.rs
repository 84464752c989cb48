//! Winding numbers by adaptive phase tracking along rectangle boundaries.

use num_complex::Complex64;

use crate::error::{Result, SpectrumError};

/// Subdivide a boundary segment while its phase increment is at least this.
const MAX_PHASE_STEP: f64 = std::f64::consts::FRAC_PI_2;
const MAX_DEPTH: u32 = 48;
/// Rounded winding numbers further than this from an integer are rejected.
const MAX_INTEGER_DISTANCE: f64 = 0.25;
pub const MIN_SAMPLES_PER_SIDE: usize = 4;

/// Axis-aligned rectangle; its boundary is traversed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rectangle {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) || ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(SpectrumError::InvalidArgument(format!(
                "degenerate rectangle [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Rectangle with the given half extents around `center`.
    pub fn centered(center: Complex64, half_width: f64, half_height: f64) -> Result<Self> {
        Self::new(
            center.re - half_width,
            center.re + half_width,
            center.im - half_height,
            center.im + half_height,
        )
    }

    /// Corners in counterclockwise order starting at the lower left.
    pub fn vertices(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x_min, self.y_min),
            Complex64::new(self.x_max, self.y_min),
            Complex64::new(self.x_max, self.y_max),
            Complex64::new(self.x_min, self.y_max),
        ]
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn half_diagonal(&self) -> f64 {
        0.5 * self.width().hypot(self.height())
    }

    /// Strict interior membership.
    pub fn contains(&self, z: Complex64) -> bool {
        self.x_min < z.re && z.re < self.x_max && self.y_min < z.im && z.im < self.y_max
    }

    /// Euclidean distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        let dx_out = (self.x_min - z.re).max(z.re - self.x_max).max(0.0);
        let dy_out = (self.y_min - z.im).max(z.im - self.y_max).max(0.0);
        if dx_out > 0.0 || dy_out > 0.0 {
            return dx_out.hypot(dy_out);
        }
        (z.re - self.x_min)
            .min(self.x_max - z.re)
            .min(z.im - self.y_min)
            .min(self.y_max - z.im)
    }

    /// Split across the longer side into two halves.
    pub fn bisect(&self) -> (Rectangle, Rectangle) {
        self.split(0.5)
    }

    /// Split across the longer side at fraction `frac` of its length.
    pub fn split(&self, frac: f64) -> (Rectangle, Rectangle) {
        if self.width() >= self.height() {
            let cut = self.x_min + frac * self.width();
            (
                Rectangle { x_max: cut, ..*self },
                Rectangle { x_min: cut, ..*self },
            )
        } else {
            let cut = self.y_min + frac * self.height();
            (
                Rectangle { y_max: cut, ..*self },
                Rectangle { y_min: cut, ..*self },
            )
        }
    }

    /// `per_side + 1` equispaced points on each side, counterclockwise,
    /// including both endpoints of every side.
    pub fn boundary_samples(&self, per_side: usize) -> Vec<Complex64> {
        let v = self.vertices();
        let mut out = Vec::with_capacity(4 * (per_side + 1));
        for s in 0..4 {
            let (p, q) = (v[s], v[(s + 1) % 4]);
            for i in 0..=per_side {
                out.push(p + (q - p) * (i as f64 / per_side as f64));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub winding: i64,
    /// Total phase change divided by `2π` before rounding.
    pub raw: f64,
    /// `|raw - winding|`.
    pub integer_distance: f64,
    pub evaluations: usize,
}

/// Number of zeros minus poles of `f` inside `rect`, from the change of
/// `arg f` along the boundary. Every side starts with `samples` segments,
/// each split until its phase increment is below `π/2`.
pub fn winding_number<F>(f: F, rect: &Rectangle, samples: usize) -> Result<Winding>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let samples = samples.max(MIN_SAMPLES_PER_SIDE);
    let mut evaluations = 0usize;
    let mut eval = |z: Complex64| -> Result<Complex64> {
        evaluations += 1;
        let w = f(z)?;
        if w == Complex64::new(0.0, 0.0) || !w.re.is_finite() || !w.im.is_finite() {
            return Err(SpectrumError::PhaseJump { at: z });
        }
        Ok(w)
    };

    let v = rect.vertices();
    let mut total = 0.0;
    for side in 0..4 {
        let (p, q) = (v[side], v[(side + 1) % 4]);
        let mut z0 = p;
        let mut w0 = eval(z0)?;
        for i in 1..=samples {
            let z1 = p + (q - p) * (i as f64 / samples as f64);
            let w1 = eval(z1)?;
            total += phase_increment(&mut eval, z0, w0, z1, w1, 0)?;
            z0 = z1;
            w0 = w1;
        }
    }
    let raw = total / std::f64::consts::TAU;
    let winding = raw.round();
    let integer_distance = (raw - winding).abs();
    if integer_distance >= MAX_INTEGER_DISTANCE {
        return Err(SpectrumError::WindingQuality {
            raw,
            distance: integer_distance,
        });
    }
    Ok(Winding {
        winding: winding as i64,
        raw,
        integer_distance,
        evaluations,
    })
}

fn phase_increment<E>(eval: &mut E, z0: Complex64, w0: Complex64, z1: Complex64, w1: Complex64, depth: u32) -> Result<f64>
where
    E: FnMut(Complex64) -> Result<Complex64>,
{
    let step = (w1 / w0).arg();
    if step.abs() < MAX_PHASE_STEP {
        return Ok(step);
    }
    if depth >= MAX_DEPTH {
        return Err(SpectrumError::PhaseJump { at: 0.5 * (z0 + z1) });
    }
    let zm = 0.5 * (z0 + z1);
    let wm = eval(zm)?;
    Ok(phase_increment(eval, z0, w0, zm, wm, depth + 1)? + phase_increment(eval, zm, wm, z1, w1, depth + 1)?)
}
