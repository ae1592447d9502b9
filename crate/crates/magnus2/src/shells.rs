//! Principal and chiral disks, real conformal ranges, envelope tracing of
//! boundary curves, and the half-plane → Cayley–Klein disk conversion.
//!
//! The conformal range of a real 2×2 matrix is a pair of conjugate circles;
//! `pd`/`cd` encode it as a single disk (chirality in the sign of the center's
//! imaginary part). For anything else the boundary is traced as the envelope
//! of the norm/co-norm circle family, with jump discontinuities bridged by
//! h-segments.

use crate::mat2::{CMat2, Mat2};
use crate::DomainError;
use num_complex::Complex64;

/// Closed disk in ℂ. `lift_winding` is 0 except for universal-cover work,
/// where it counts full turns added to the center's principal argument.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
    pub lift_winding: i32,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Disk { center, radius, lift_winding: 0 }
    }

    /// Lifted angle of the center: principal argument plus full turns.
    pub fn center_angle(&self) -> f64 {
        self.center.arg() + self.lift_winding as f64 * std::f64::consts::TAU
    }

    /// Point of the boundary circle at parameter `phi`.
    pub fn boundary_point(&self, phi: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, phi)
    }

    /// True iff the closed disk contains the origin (within `tol`).
    pub fn contains_origin(&self, tol: f64) -> bool {
        self.center.norm() <= self.radius + tol
    }
}

/// The two conjugate boundary circles of `CR(A)` for real `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalRangeReal {
    pub circle_plus: Disk,
    pub circle_minus: Disk,
}

/// Principal disk: center `(a+d)/2 + |c−b|/2·i`, radius
/// `√(((a−d)/2)² + ((b+c)/2)²)`; center never below the real axis.
pub fn pd(m: &Mat2) -> Disk {
    let (qa, qb, qc, qd) = m.quaternionic();
    Disk::new(Complex64::new(qa, qb.abs()), qc.hypot(qd))
}

/// Chiral disk: as `pd` but the center's imaginary part keeps the sign of the
/// twisted trace.
pub fn cd(m: &Mat2) -> Disk {
    let (qa, qb, qc, qd) = m.quaternionic();
    Disk::new(Complex64::new(qa, qb), qc.hypot(qd))
}

/// Both boundary circles of the conformal range of a real matrix.
pub fn cr_real(m: &Mat2) -> ConformalRangeReal {
    let (qa, qb, qc, qd) = m.quaternionic();
    let r = qc.hypot(qd);
    ConformalRangeReal {
        circle_plus: Disk::new(Complex64::new(qa, qb), r),
        circle_minus: Disk::new(Complex64::new(qa, -qb), r),
    }
}

/// Disk containment with a 1e−12 slack:
/// `|c_out − c_in| ≤ r_out − r_in + 1e−12`.
pub fn disk_contains(outer: &Disk, inner: &Disk) -> bool {
    (outer.center - inner.center).norm() <= outer.radius - inner.radius + 1e-12
}

/// One point of the enveloping curve of the circle family
/// `(x−λ)² + y² = N(λ)`:
/// `(λ − N′/2) + i·√(N − (N′/2)²)`, clamping radicands down to `−1e−9`.
///
/// With `N(λ) = ‖A − λId‖²` this walks the upper (norm) branch of `∂CR(A)`,
/// with the squared co-norm the lower branch.
pub fn envelope_point(
    n: impl Fn(f64) -> f64,
    dn: impl Fn(f64) -> f64,
    lambda: f64,
) -> Result<Complex64, DomainError> {
    let half_slope = dn(lambda) / 2.0;
    let rad = n(lambda) - half_slope * half_slope;
    if rad < -1e-9 {
        return Err(DomainError::new(format!(
            "envelope radicand {rad} at lambda {lambda}: sampled past a discontinuity"
        )));
    }
    Ok(Complex64::new(lambda - half_slope, rad.max(0.0).sqrt()))
}

/// Poincaré half plane → Cayley–Klein–Beltrami disk:
/// `(u₁,u₂) ↦ (2u₁, −(1−u₁²−u₂²)) / (1+u₁²+u₂²)`. Boundary points (`u₂ = 0`)
/// land on the unit circle, interior points strictly inside; h-segments map
/// to straight chords.
pub fn ckb_map(u: Complex64) -> (f64, f64) {
    let q = u.re * u.re + u.im * u.im;
    let denom = 1.0 + q;
    (2.0 * u.re / denom, -(1.0 - q) / denom)
}

/// Norm-square and its λ-derivative for a real matrix, as closures usable
/// with [`envelope_point`]. The norm branch uses `‖A − λId‖²`.
pub fn real_norm_handles(m: &Mat2) -> (impl Fn(f64) -> f64 + '_, impl Fn(f64) -> f64 + '_) {
    let (qa, qb, qc, qd) = m.quaternionic();
    let rho = qc.hypot(qd);
    let n = move |lambda: f64| {
        let s = (qa - lambda).hypot(qb);
        (s + rho) * (s + rho)
    };
    let dn = move |lambda: f64| {
        let s = (qa - lambda).hypot(qb);
        if s < 1e-300 {
            return 0.0;
        }
        2.0 * (s + rho) * (lambda - qa) / s
    };
    (n, dn)
}

/// Co-norm-square handles for the lower branch (signed co-norm squared is
/// the smallest singular value squared regardless of sign).
pub fn real_conorm_handles(m: &Mat2) -> (impl Fn(f64) -> f64 + '_, impl Fn(f64) -> f64 + '_) {
    let (qa, qb, qc, qd) = m.quaternionic();
    let rho = qc.hypot(qd);
    let n = move |lambda: f64| {
        let s = (qa - lambda).hypot(qb);
        (s - rho) * (s - rho)
    };
    let dn = move |lambda: f64| {
        let s = (qa - lambda).hypot(qb);
        if s < 1e-300 {
            return 0.0;
        }
        2.0 * (s - rho) * (lambda - qa) / s
    };
    (n, dn)
}

/// Norm-square handles for a complex matrix (`‖A − λId‖²` over real λ),
/// derivative by central differences.
pub fn complex_norm_handles(
    m: &CMat2,
) -> (impl Fn(f64) -> f64 + '_, impl Fn(f64) -> f64 + '_) {
    let n = move |lambda: f64| {
        let v = m.shift(lambda).op_norm();
        v * v
    };
    let dn = move |lambda: f64| {
        let h = 1e-6 * (1.0 + lambda.abs());
        let up = m.shift(lambda + h).op_norm();
        let dn_ = m.shift(lambda - h).op_norm();
        (up * up - dn_ * dn_) / (2.0 * h)
    };
    (n, dn)
}

/// Co-norm-square handles for a complex matrix.
pub fn complex_conorm_handles(
    m: &CMat2,
) -> (impl Fn(f64) -> f64 + '_, impl Fn(f64) -> f64 + '_) {
    let n = move |lambda: f64| {
        let v = m.shift(lambda).co_norm();
        v * v
    };
    let dn = move |lambda: f64| {
        let h = 1e-6 * (1.0 + lambda.abs());
        let up = m.shift(lambda + h).co_norm();
        let dn_ = m.shift(lambda - h).co_norm();
        (up * up - dn_ * dn_) / (2.0 * h)
    };
    (n, dn)
}

/// Branch tag of an emitted boundary sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchTag {
    Norm,
    Conorm,
    /// Marker for a geodesic bridge across an envelope discontinuity.
    Hseg,
}

impl BranchTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchTag::Norm => "norm",
            BranchTag::Conorm => "conorm",
            BranchTag::Hseg => "hseg",
        }
    }
}

/// One sample of a traced boundary polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub lambda: f64,
    pub point: Complex64,
    pub branch: BranchTag,
}

/// Trace one branch over a tangent-substituted λ-grid (`λ = tan θ` covers the
/// whole line), inserting h-segment markers where consecutive points jump by
/// more than 10× the local step. Radicand failures at isolated λ are skipped.
pub fn trace_branch(
    n: impl Fn(f64) -> f64,
    dn: impl Fn(f64) -> f64,
    samples: usize,
    branch: BranchTag,
) -> Vec<EnvelopeSample> {
    let mut out: Vec<EnvelopeSample> = Vec::with_capacity(samples);
    let mut prev: Option<EnvelopeSample> = None;
    for k in 0..samples {
        let theta = -std::f64::consts::FRAC_PI_2 + 1e-4
            + (std::f64::consts::PI - 2e-4) * k as f64 / (samples.max(2) - 1) as f64;
        let lambda = theta.tan();
        let Ok(point) = envelope_point(&n, &dn, lambda) else {
            continue;
        };
        let sample = EnvelopeSample { lambda, point, branch };
        if let Some(p) = prev {
            let step = (lambda - p.lambda).abs();
            if (point - p.point).norm() > 10.0 * step.max(1e-9) {
                out.push(EnvelopeSample { lambda: p.lambda, point: p.point, branch: BranchTag::Hseg });
                out.push(EnvelopeSample { lambda, point, branch: BranchTag::Hseg });
            }
        }
        out.push(sample);
        prev = Some(sample);
    }
    out
}

/// Full shell trace of a real matrix: norm branch, then co-norm branch.
pub fn trace_shell(m: &Mat2, samples: usize) -> Vec<EnvelopeSample> {
    let (n, dn) = real_norm_handles(m);
    let mut out = trace_branch(n, dn, samples, BranchTag::Norm);
    let (n, dn) = real_conorm_handles(m);
    out.extend(trace_branch(n, dn, samples, BranchTag::Conorm));
    out
}

/// Point at parameter `s ∈ [0,1]` of the h-segment `[z₁, z₂]_h` (the circular
/// or straight arc through the endpoints perpendicular to ℝ, inside the
/// closed upper half plane).
pub fn h_segment_point(z1: Complex64, z2: Complex64, s: f64) -> Complex64 {
    if (z1.re - z2.re).abs() < 1e-12 * (1.0 + z1.re.abs() + z2.re.abs()) {
        return z1 + (z2 - z1) * s;
    }
    let x0 = (z2.norm_sqr() - z1.norm_sqr()) / (2.0 * (z2.re - z1.re));
    let r = (z1 - Complex64::new(x0, 0.0)).norm();
    let a1 = (z1 - Complex64::new(x0, 0.0)).arg();
    let a2 = (z2 - Complex64::new(x0, 0.0)).arg();
    Complex64::new(x0, 0.0) + Complex64::from_polar(r, a1 + (a2 - a1) * s)
}
