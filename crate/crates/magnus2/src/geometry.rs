//! Magnus-exponent geometry of `GL₂⁺(ℝ)`: maximal disks in `exp D̄(0,p)`,
//! the normal form `NW(p₁, p₂, t, F̃)`, the Magnus exponent
//! `MP(A) = sup{|log z| : z ∈ CD(A)}`, and the quasicomplex / elliptic /
//! parabolic / hyperbolic / loxodromic classification.
//!
//! Disks crossing the negative real axis are handled with lifted angles: a
//! disk avoiding the origin subtends less than a half turn seen from it, so
//! the continuous argument on the disk is the center's (lift-adjusted)
//! argument plus the principal argument of `z/center`. The direction
//! parameter `t` follows the maximal-disk parametrization throughout
//! (`t = ±π/2` is the parabolic direction).

use crate::kernels::{ccc, sss};
use crate::mat2::{Mat2, I_TILDE, ID, J_TILDE, K_TILDE};
use crate::measures::{MeasureSpec, Segment};
use crate::shells::{cd, Disk};
use crate::DomainError;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative band around `det = 1` for the elliptic/parabolic/hyperbolic
/// classification (loxodromic outside).
const DET_ONE_BAND: f64 = 1e-3;
/// Band around the parabolic boundary `φ_max = r`.
const PARABOLIC_BAND: f64 = 1e-3;
/// Radii below this (relative) make a point disk.
const POINT_DISK_TOL: f64 = 1e-10;

/// The normal-form data `(p₁, p₂, t, F̃)`: a quasicomplex exponential of
/// length `p₁` followed by a hyperbolic development of length `p₂` in
/// direction `t` with unit frame `F̃ ∈ 𝕂̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalForm {
    pub p1: f64,
    pub p2: f64,
    pub t: f64,
    pub frame: Mat2,
    /// Hyperbolic inputs determine `t` only up to `t ↔ π−t`; the stored `t`
    /// is the `[−π/2, π/2]` representative and this flag marks the mirror.
    pub mirror_degenerate: bool,
    /// Set when the `𝕂̃`-part was too small to recover a frame (point-disk
    /// case, where the form does not depend on `F̃`).
    pub quasicomplex: bool,
}

impl NormalForm {
    pub fn new(p1: f64, p2: f64, t: f64, frame: Mat2) -> Self {
        NormalForm { p1, p2, t, frame, mirror_degenerate: false, quasicomplex: false }
    }

    /// Elliptic component `p₁·(cos t + i sin t)`.
    pub fn ellip(&self) -> Complex64 {
        Complex64::from_polar(self.p1, self.t)
    }

    /// Hyperbolic length `p₂`.
    pub fn hyper(&self) -> f64 {
        self.p2
    }

    pub fn total(&self) -> f64 {
        self.p1 + self.p2
    }
}

/// Classification of a matrix by the touching structure of its chiral disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MagnusKind {
    Identity,
    Quasicomplex,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

impl MagnusKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MagnusKind::Identity => "identity",
            MagnusKind::Quasicomplex => "quasicomplex",
            MagnusKind::Elliptic => "elliptic",
            MagnusKind::Parabolic => "parabolic",
            MagnusKind::Hyperbolic => "hyperbolic",
            MagnusKind::Loxodromic => "loxodromic",
        }
    }
}

/// Result of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusClass {
    pub kind: MagnusKind,
    pub mp: f64,
    /// Magnus direction (angle of the farthest point of `log CD(A)`);
    /// hyperbolic matrices carry the `[−π/2, π/2]` representative.
    pub direction: f64,
    /// Direction only determined up to `t ↔ π−t`.
    pub mirror: bool,
}

/// Lifted angle of a disk point: center argument (with winding) plus the
/// principal argument of `z/center`. Valid because the disk avoids 0.
fn lifted_angle(disk: &Disk, z: Complex64) -> f64 {
    disk.center_angle() + (z / disk.center).arg()
}

/// `|log z|²` with the lifted angle, as a function of the boundary parameter.
fn log_gauge(disk: &Disk, phi: f64) -> f64 {
    let z = disk.boundary_point(phi);
    let ln_r = z.norm().ln();
    let theta = lifted_angle(disk, z);
    ln_r * ln_r + theta * theta
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Boundary supremum of `|log z|` over the disk: 256-point scan refined by
/// golden section to 1e−11. Returns `(mp, maximizer)`.
fn boundary_sup(disk: &Disk) -> Result<(f64, Complex64), DomainError> {
    if disk.contains_origin(1e-12) {
        return Err(DomainError::new("chiral disk contains 0"));
    }
    if disk.radius <= POINT_DISK_TOL * (1.0 + disk.center.norm()) {
        let theta = disk.center_angle();
        let mp = disk.center.norm().ln().hypot(theta);
        return Ok((mp, disk.center));
    }
    const SCAN: usize = 256;
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..SCAN {
        let phi = 2.0 * PI * k as f64 / SCAN as f64;
        let g = log_gauge(disk, phi);
        if g > best {
            best = g;
            best_k = k;
        }
    }
    let step = 2.0 * PI / SCAN as f64;
    let center = 2.0 * PI * best_k as f64 / SCAN as f64;
    let phi = golden_max(|phi| log_gauge(disk, phi), center - step, center + step, 1e-12);
    Ok((log_gauge(disk, phi).sqrt(), disk.boundary_point(phi)))
}

/// Magnus exponent by boundary optimization (the `sup |log z|` route).
pub fn mp(m: &Mat2) -> Result<f64, DomainError> {
    mp_disk(&cd(m))
}

/// [`mp`] on an explicit (possibly lifted) disk.
pub fn mp_disk(disk: &Disk) -> Result<f64, DomainError> {
    if (disk.center - Complex64::new(1.0, 0.0)).norm() < 1e-15
        && disk.radius < 1e-15
        && disk.lift_winding == 0
    {
        return Ok(0.0);
    }
    Ok(boundary_sup(disk)?.0)
}

/// Lifted angles where the boundary circle meets the unit circle, ordered;
/// `None` when they do not intersect.
fn lifted_intersection_angles(disk: &Disk) -> Option<(f64, f64)> {
    let cc = disk.center.norm();
    if cc == 0.0 {
        return None;
    }
    let cos_delta = (1.0 + cc * cc - disk.radius * disk.radius) / (2.0 * cc);
    if cos_delta.abs() > 1.0 + 1e-12 {
        return None;
    }
    let delta = cos_delta.clamp(-1.0, 1.0).acos();
    let theta_c = disk.center_angle();
    Some((theta_c - delta, theta_c + delta))
}

/// Maximal disk `D̄(Ω_p(t), ω_p(t))` in `exp D̄(0, p)`, tangent to the
/// boundary at `e^{p(±cos t + i sin t)}`; equals `CD(W(p, p·sin t))`.
pub fn maximal_disk(p: f64, t: f64) -> Result<Disk, DomainError> {
    if !(p > 0.0 && p < PI) {
        return Err(DomainError::new(format!("maximal disk needs p in (0, pi), got {p}")));
    }
    if !(-FRAC_PI_2..=FRAC_PI_2).contains(&t) {
        return Err(DomainError::new(format!("direction {t} outside [-pi/2, pi/2]")));
    }
    Ok(maximal_disk_unchecked(p, t))
}

fn maximal_disk_unchecked(p: f64, t: f64) -> Disk {
    let (s, c) = t.sin_cos();
    // sinh(p cos t)/cos t, continued through cos t = 0 where it equals p
    let omega = p * sss((p * c) * (p * c));
    let center = Complex64::from_polar(1.0, p * s)
        * Complex64::new(ccc((p * c) * (p * c)), -s * omega);
    Disk::new(center, omega)
}

/// Classify a real matrix through its chiral disk.
pub fn classify(m: &Mat2) -> Result<MagnusClass, DomainError> {
    classify_disk(&cd(m))
}

/// Disk-level classification (accepts lifted disks).
pub fn classify_disk(disk: &Disk) -> Result<MagnusClass, DomainError> {
    let scale = 1.0 + disk.center.norm();
    if disk.contains_origin(1e-12 * scale) {
        return Err(DomainError::new("chiral disk contains 0"));
    }
    // point disk: quasicomplex (or the identity itself)
    if disk.radius <= POINT_DISK_TOL * scale {
        let theta = disk.center_angle();
        let mp = disk.center.norm().ln().hypot(theta);
        if mp < 1e-12 {
            return Ok(MagnusClass { kind: MagnusKind::Identity, mp: 0.0, direction: 0.0, mirror: false });
        }
        return Ok(MagnusClass {
            kind: MagnusKind::Quasicomplex,
            mp,
            direction: theta.atan2(disk.center.norm().ln()),
            mirror: false,
        });
    }
    let det = disk.center.norm_sqr() - disk.radius * disk.radius;
    if (det - 1.0).abs() <= DET_ONE_BAND * (1.0 + det.abs()) {
        if let Some((lo, hi)) = lifted_intersection_angles(disk) {
            let phi_max = if lo.abs() >= hi.abs() { lo } else { hi };
            let band = PARABOLIC_BAND * disk.radius.max(1.0);
            if phi_max.abs() >= disk.radius - band {
                let kind = if phi_max.abs() > disk.radius + band {
                    MagnusKind::Elliptic
                } else {
                    MagnusKind::Parabolic
                };
                return Ok(MagnusClass {
                    kind,
                    mp: phi_max.abs(),
                    direction: FRAC_PI_2.copysign(phi_max),
                    mirror: false,
                });
            }
            // hyperbolic: match the maximal-disk family for (p, t)
            let (mp, t) = hyperbolic_match(disk)?;
            return Ok(MagnusClass { kind: MagnusKind::Hyperbolic, mp, direction: t, mirror: true });
        }
    }
    let (mp, z_star) = boundary_sup(disk)?;
    let direction = lifted_angle(disk, z_star).atan2(z_star.norm().ln());
    Ok(MagnusClass { kind: MagnusKind::Loxodromic, mp, direction, mirror: false })
}

/// Solve `Ω_p(t) = center` over the maximal-disk family with damped Newton
/// (numeric Jacobian), seeded from the boundary supremum; falls back to the
/// seed when Newton stalls.
fn hyperbolic_match(disk: &Disk) -> Result<(f64, f64), DomainError> {
    let (mp_seed, z_star) = boundary_sup(disk)?;
    let theta = lifted_angle(disk, z_star);
    let lr = z_star.norm().ln();
    let mut p = mp_seed.max(1e-12);
    let mut t = theta.atan2(lr.abs()).clamp(-FRAC_PI_2, FRAC_PI_2);
    let target = disk.center;
    let resid = |p: f64, t: f64| -> Complex64 {
        let d = maximal_disk_unchecked(p, t);
        // compare in lifted coordinates via the plain complex difference:
        // both centers are away from 0 and on the same side by construction
        d.center - target
    };
    let mut r = resid(p, t);
    for _ in 0..60 {
        if r.norm() < 1e-12 * (1.0 + target.norm()) {
            break;
        }
        let hp = 1e-7 * (1.0 + p);
        let ht = 1e-7;
        let dp = (resid(p + hp, t) - resid(p - hp, t)) / (2.0 * hp);
        let dt = (resid(p, t + ht) - resid(p, t - ht)) / (2.0 * ht);
        // solve the 2x2 real system [dp dt]·step = -r
        let det = dp.re * dt.im - dp.im * dt.re;
        if det.abs() < 1e-300 {
            break;
        }
        let sp = (-r.re * dt.im + r.im * dt.re) / det;
        let st = (-dp.re * r.im + dp.im * r.re) / det;
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..25 {
            let pn = (p + lambda * sp).clamp(1e-12, PI - 1e-12);
            let tn = (t + lambda * st).clamp(-FRAC_PI_2, FRAC_PI_2);
            let rn = resid(pn, tn);
            if rn.norm() < r.norm() {
                p = pn;
                t = tn;
                r = rn;
                improved = true;
                break;
            }
            lambda /= 2.0;
        }
        if !improved {
            break;
        }
    }
    if r.norm() > 1e-9 * (1.0 + target.norm()) {
        // stalled: the boundary supremum is still the Magnus exponent
        return Ok((mp_seed, t));
    }
    Ok((p, t))
}

/// Arithmetic normal form:
/// `NW = e^{p₁cos t}·R(p·sin t)·(cosh(p₂cos t)·Id − (sinh(p₂cos t)/cos t)·sin t·Ĩ)
///      + e^{p₁cos t}·(sinh(p₂cos t)/cos t)·F̃`.
pub fn nw_compose(nf: &NormalForm) -> Mat2 {
    let p = nf.p1 + nf.p2;
    let (s, c) = nf.t.sin_cos();
    let s2 = nf.p2 * sss((nf.p2 * c) * (nf.p2 * c));
    let c2 = ccc((nf.p2 * c) * (nf.p2 * c));
    let amp = (nf.p1 * c).exp();
    let main = Mat2::rotation(p * s) * (ID.scale(c2) + I_TILDE.scale(-s * s2));
    (main + nf.frame.scale(s2)).scale(amp)
}

/// The homogeneous unit-length measure whose left exponential is
/// [`nw_compose`]: density `p₁·e^{tĨ} + p₂·R(2pθ·sin t)·F̃` on `[−½, ½]`,
/// constant norm `p₁+p₂`.
pub fn noruni_measure(nf: &NormalForm) -> MeasureSpec {
    let p = nf.p1 + nf.p2;
    if p == 0.0 {
        return MeasureSpec::empty();
    }
    let (s, c) = nf.t.sin_cos();
    MeasureSpec::new(vec![Segment::Rotating {
        frame: nf.frame.scale(nf.p2),
        frequency: p * s,
        phase: -p * s / 2.0,
        drift: (nf.p1 * c, nf.p1 * s),
        length: 1.0,
    }])
}

/// Solve the radius equation `r = e^{(p−p₂)cos t}·sinh(p₂cos t)/cos t` for
/// `p₂ ∈ [0, p]` (strictly increasing; derivative `e^{(p−2p₂)cos t}`).
fn solve_hyperbolic_length(p: f64, t: f64, r: f64) -> f64 {
    let c = t.cos();
    if c.abs() < 1e-8 {
        return r.min(p);
    }
    let f = |p2: f64| ((p - p2) * c).exp() * (p2 * c).sinh() / c - r;
    let (mut lo, mut hi) = (0.0f64, p);
    if f(hi) <= 0.0 {
        return p;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // damped Newton polish with the exact derivative
    let mut p2 = 0.5 * (lo + hi);
    for _ in 0..8 {
        let step = f(p2) / ((p - 2.0 * p2) * c).exp();
        let next = (p2 - step).clamp(0.0, p);
        if (next - p2).abs() < 1e-15 * (1.0 + p) {
            p2 = next;
            break;
        }
        p2 = next;
    }
    p2
}

/// Decompose a matrix into its normal form; round-trips through
/// [`nw_compose`] to 1e−8 on the classical range.
pub fn nw_decompose(m: &Mat2) -> Result<NormalForm, DomainError> {
    nw_decompose_disk(m, &cd(m))
}

fn nw_decompose_disk(m: &Mat2, disk: &Disk) -> Result<NormalForm, DomainError> {
    let class = classify_disk(disk)?;
    match class.kind {
        MagnusKind::Identity => {
            let mut nf = NormalForm::new(0.0, 0.0, 0.0, K_TILDE);
            nf.quasicomplex = true;
            Ok(nf)
        }
        MagnusKind::Quasicomplex => {
            let mut nf = NormalForm::new(class.mp, 0.0, class.direction, K_TILDE);
            nf.quasicomplex = true;
            Ok(nf)
        }
        kind => {
            let p = class.mp;
            let t = class.direction;
            let p2 = solve_hyperbolic_length(p, t, disk.radius);
            let p1 = (p - p2).max(0.0);
            let mut nf = NormalForm::new(p1, p2, t, K_TILDE);
            nf.mirror_degenerate = kind == MagnusKind::Hyperbolic;
            // recover the frame from the 𝕂̃-part of the arithmetic form
            let (s, c) = t.sin_cos();
            let s2 = p2 * sss((p2 * c) * (p2 * c));
            let amp = (p1 * c).exp();
            let coef = amp * s2;
            if coef < 1e-10 {
                nf.quasicomplex = true;
                return Ok(nf);
            }
            let main = (Mat2::rotation(p * s) * (ID.scale(ccc((p2 * c) * (p2 * c)))
                + I_TILDE.scale(-s * s2)))
            .scale(amp);
            let residue = (*m - main).scale(1.0 / coef);
            let (_, _, qc, qd) = residue.quaternionic();
            let len = qc.hypot(qd);
            if len < 1e-8 {
                nf.quasicomplex = true;
                return Ok(nf);
            }
            nf.frame = J_TILDE.scale(qc / len) + K_TILDE.scale(qd / len);
            Ok(nf)
        }
    }
}

/// Residual of the small-disk expansion
/// `MP² = 2â − â²/3 + (3/2)b̂²/â + O(p⁶)` evaluated on the hyperbolic
/// development `W(p, p·sin t)` (where `MP = p` exactly); `O(p⁶)` small.
pub fn mp_small_asymptotic_check(p: f64, t: f64) -> f64 {
    let disk = maximal_disk_unchecked(p, t);
    let a = disk.center.re - 1.0;
    let b = disk.center.im;
    let correction = if a == 0.0 { 0.0 } else { 1.5 * b * b / a };
    (p * p - (2.0 * a - a * a / 3.0 + correction)).abs()
}

/// Build the normal form's measure, split the variation at `x`, decompose
/// both halves, and return the additivity gaps
/// `(|MP_L + MP_R − MP|, |ellip_L + ellip_R − ellip|)`.
pub fn additivity_check(nf: &NormalForm, x: f64) -> Result<(f64, f64), DomainError> {
    let p = nf.total();
    if !(0.0..=p + 1e-12).contains(&x) {
        return Err(DomainError::new(format!("split {x} outside [0, {p}]")));
    }
    let measure = noruni_measure(nf);
    let (left, right) = measure.split((x / p).clamp(0.0, 1.0))?;
    let part = |m: &MeasureSpec| -> Result<(f64, Complex64), DomainError> {
        if m.segments.is_empty() || m.total_variation() < 1e-14 {
            return Ok((0.0, Complex64::new(0.0, 0.0)));
        }
        let a = m.lexp();
        let nf = nw_decompose(&a)?;
        Ok((nf.total(), nf.ellip()))
    };
    let (mp_l, el_l) = part(&left)?;
    let (mp_r, el_r) = part(&right)?;
    let nf_total = nw_decompose(&measure.lexp())?;
    let gap_mp = (mp_l + mp_r - nf_total.total()).abs();
    let gap_el = (el_l + el_r - nf_total.ellip()).norm();
    Ok((gap_mp, gap_el))
}

// --- test fixtures for the fitting lemmas ----------------------------------

/// Two hyperbolic developments of speeds `sin t₁`, `sin t₂` joined at 0 on
/// `[−p/2, p/2]`, the left one conjugated by a rotation of `eps`.
pub fn hyperbolic_fit_measure(p: f64, t1: f64, t2: f64, eps: f64) -> MeasureSpec {
    let (s1, s2) = (t1.sin(), t2.sin());
    MeasureSpec::new(vec![
        Segment::Rotating {
            frame: K_TILDE,
            frequency: s1,
            phase: -p / 2.0 * s1 + eps,
            drift: (0.0, 0.0),
            length: p / 2.0,
        },
        Segment::Rotating {
            frame: K_TILDE,
            frequency: s2,
            phase: 0.0,
            drift: (0.0, 0.0),
            length: p / 2.0,
        },
    ])
}

/// A hyperbolic development of speed `sin t` on `[−p, 0]` followed by the
/// elliptic generator `Ĩ` for the matching overshoot length
/// `sinh(p·cos t)/cos t − p`.
pub fn parabolic_fit_measure(p: f64, t: f64) -> MeasureSpec {
    let (s, c) = t.sin_cos();
    let overshoot = p * sss((p * c) * (p * c)) - p;
    let mut segments = vec![Segment::Rotating {
        frame: K_TILDE,
        frequency: s,
        phase: -p * s,
        drift: (0.0, 0.0),
        length: p,
    }];
    if overshoot > 0.0 {
        segments.push(Segment::Constant { matrix: I_TILDE, length: overshoot });
    }
    MeasureSpec::new(segments)
}

/// Lifted intersection angles exposed for tests (det ≈ 1 disks).
pub fn intersection_angles(disk: &Disk) -> Option<(f64, f64)> {
    lifted_intersection_angles(disk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::developments::{e_dev, moan_measure, w_dev};
    use crate::matlog::{is_logable, log2};

    fn mat_close(x: &Mat2, y: &Mat2, tol: f64) -> bool {
        (*x - *y).max_abs() <= tol
    }

    /// Root of `tan z = z` in `[π, 2π]` by bisection on `sin z − z·cos z`.
    fn tan_fixed_point() -> f64 {
        let f = |z: f64| z.sin() - z * z.cos();
        let (mut lo, mut hi) = (PI + 0.1, 2.0 * PI - 0.1);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn maximal_disk_examples() {
        // t = 0: D(cosh p, sinh p), cross-checked against cd(W(p, 0))
        let p = 1.3f64;
        let d = maximal_disk(p, 0.0).unwrap();
        assert!((d.center - Complex64::new(p.cosh(), 0.0)).norm() < 1e-12);
        assert!((d.radius - p.sinh()).abs() < 1e-12);
        let dw = cd(&w_dev(p, 0.0));
        assert!((d.center - dw.center).norm() < 1e-12);
        // t = π/2 special values
        let d = maximal_disk(p, FRAC_PI_2).unwrap();
        let expected = Complex64::new(p.cos() + p * p.sin(), p.sin() - p * p.cos());
        assert!((d.center - expected).norm() < 1e-12);
        assert!((d.radius - p).abs() < 1e-12);
        // equality with cd(W(p, p sin t))
        let (p, t) = (2.0, 0.4);
        let d = maximal_disk(p, t).unwrap();
        let dw = cd(&w_dev(p, p * t.sin()));
        assert!((d.center - dw.center).norm() < 1e-10);
        assert!((d.radius - dw.radius).abs() < 1e-10);
        assert!(maximal_disk(PI, 0.0).is_err());
        assert!(maximal_disk(1.0, 2.0).is_err());
    }

    #[test]
    fn maximal_disk_tangency() {
        // tangent to ∂exp D(0,p) at γ_p(t) and its inverse point
        for (p, t) in [(2.0, 0.4), (1.0, -0.9), (2.8, 1.2)] {
            let d = maximal_disk(p, t).unwrap();
            let (s, c) = t.sin_cos();
            for gamma in [
                Complex64::from_polar((p * c).exp(), p * s),
                Complex64::from_polar((-p * c).exp(), p * s),
            ] {
                let dist = ((gamma - d.center).norm() - d.radius).abs();
                assert!(dist < 1e-10, "p={p} t={t}: {dist}");
            }
        }
    }

    #[test]
    fn maximal_disk_containment() {
        // 10^3 pseudo-random points of each disk satisfy |log z| <= p + 1e-9
        for (p, t) in [(1.0, 0.3), (2.5, -0.7), (3.0, 1.5)] {
            let d = maximal_disk(p, t).unwrap();
            let mut state = 0x12345678u64;
            for _ in 0..1000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u = (state >> 11) as f64 / (1u64 << 53) as f64;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = (state >> 11) as f64 / (1u64 << 53) as f64;
                let z = d.center + Complex64::from_polar(d.radius * u.sqrt(), 2.0 * PI * v);
                let logn = z.norm().ln().hypot(z.arg());
                assert!(logn <= p + 1e-9, "p={p} t={t}: {logn}");
            }
        }
    }

    #[test]
    fn maximal_disk_centers_rotate_monotonically() {
        for p in [0.8, 2.0, 3.0] {
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=100 {
                let t = -FRAC_PI_2 + 1e-6 + (PI - 2e-6) * k as f64 / 100.0;
                let arg = maximal_disk(p, t).unwrap().center.arg();
                assert!(arg > prev, "p={p} t={t}");
                prev = arg;
            }
        }
    }

    #[test]
    fn curvature_inequality() {
        // (1+x)/e^x < x/sinh x for x != 0 (oriented curvature vs disk radius)
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let p = 0.1 + 2.9 * ((state >> 11) as f64 / (1u64 << 53) as f64);
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let t = -1.4 + 2.8 * ((state >> 11) as f64 / (1u64 << 53) as f64);
            let x: f64 = p * t.cos();
            if x.abs() < 1e-3 {
                continue;
            }
            assert!((1.0 + x) / x.exp() < x / x.sinh(), "x={x}");
        }
    }

    #[test]
    fn nw_compose_examples() {
        let nf = NormalForm::new(0.0, 0.0, 0.0, K_TILDE);
        assert!(mat_close(&nw_compose(&nf), &ID, 1e-15));
        // p2 = 0: pure quasicomplex exponential, frame-independent
        let nf_k = NormalForm::new(0.9, 0.0, 0.7, K_TILDE);
        let nf_j = NormalForm::new(0.9, 0.0, 0.7, J_TILDE);
        let expected = crate::matlog::exp2(&(ID.scale(0.7f64.cos()) + I_TILDE.scale(0.7f64.sin())).scale(0.9));
        assert!(mat_close(&nw_compose(&nf_k), &expected, 1e-13));
        assert!(mat_close(&nw_compose(&nf_j), &expected, 1e-13));
        // p1 = 0, frame K̃, arbitrary t: the W development itself
        let (p, t) = (1.2, 0.5);
        let nf = NormalForm::new(0.0, p, t, K_TILDE);
        // product form corresponds to the rotated frame R(p sin t)K̃
        let rot_frame = Mat2::rotation(p * t.sin()) * K_TILDE;
        let nf_rot = NormalForm::new(0.0, p, t, rot_frame);
        assert!(mat_close(&nw_compose(&nf_rot), &w_dev(p, p * t.sin()), 1e-13));
        let _ = nf;
    }

    #[test]
    fn nw_compose_equals_noruni_lexp() {
        for (p1, p2, t) in [(0.3, 0.7, 0.9), (0.4, 0.8, 1.0), (0.0, 1.2, 0.5), (1.0, 0.0, 2.0), (0.5, 0.5, -0.8)] {
            let nf = NormalForm::new(p1, p2, t, K_TILDE);
            let lhs = nw_compose(&nf);
            let rhs = noruni_measure(&nf).lexp();
            assert!(mat_close(&lhs, &rhs, 1e-10), "({p1},{p2},{t})");
        }
    }

    #[test]
    fn classify_examples() {
        // rotation by 1 radian: quasicomplex point disk
        let c = classify(&Mat2::rotation(1.0)).unwrap();
        assert_eq!(c.kind, MagnusKind::Quasicomplex);
        assert!((c.mp - 1.0).abs() < 1e-12);
        // W(π,π): parabolic at the critical threshold
        let c = classify(&Mat2::new(-1.0, -2.0 * PI, 0.0, -1.0)).unwrap();
        assert_eq!(c.kind, MagnusKind::Parabolic);
        assert!((c.mp - PI).abs() < 1e-9);
        // identity
        let c = classify(&ID).unwrap();
        assert_eq!(c.kind, MagnusKind::Identity);
        // disk through 0 rejected
        assert!(classify(&Mat2::new(1.0, -1.0, 1.0, 1.0).scale(0.0)).is_err());
    }

    #[test]
    fn classify_lifted_fixed_point_matrix() {
        let z = tan_fixed_point();
        let m = Mat2::diag(-(1.0 + z * z).sqrt() - z, -(1.0 + z * z).sqrt() + z);
        let c = classify(&m).unwrap();
        assert_eq!(c.kind, MagnusKind::Parabolic);
        assert!((c.mp - z).abs() < 1e-8, "mp {} vs {z}", c.mp);
        // cd(W(z,z)) = D(−√(1+z²), z)
        let d = cd(&w_dev(z, z));
        assert!((d.center - Complex64::new(-(1.0 + z * z).sqrt(), 0.0)).norm() < 1e-9);
        assert!((d.radius - z).abs() < 1e-9);
    }

    #[test]
    fn classify_developments() {
        for p in [0.5, 1.5, 2.5] {
            for st in [0.0, 0.35, 0.8, -0.6] {
                let c = classify(&w_dev(p, p * st)).unwrap();
                assert_eq!(c.kind, MagnusKind::Hyperbolic, "p={p} sin t={st}");
                assert!((c.mp - p).abs() < 1e-8, "p={p} sin t={st} mp={}", c.mp);
            }
            for st in [1.0, -1.0] {
                let c = classify(&w_dev(p, p * st)).unwrap();
                assert_eq!(c.kind, MagnusKind::Parabolic, "p={p} sin t={st}");
                assert!((c.mp - p).abs() < 1e-9);
            }
            // elliptic development: touches at e^{ip} with mp = p
            let c = classify(&e_dev(p, p * 0.5)).unwrap();
            assert_eq!(c.kind, MagnusKind::Elliptic);
            assert!((c.mp - p).abs() < 1e-9);
        }
        // loxodromic: scaled hyperbolic
        let m = w_dev(1.0, 0.5).scale(1.3f64.exp());
        let c = classify(&m).unwrap();
        assert_eq!(c.kind, MagnusKind::Loxodromic);
    }

    #[test]
    fn mp_examples() {
        assert_eq!(mp(&ID).unwrap(), 0.0);
        let p = 1.0f64;
        let m = Mat2::diag(p.exp(), (-p).exp());
        assert!((mp(&m).unwrap() - 1.0).abs() < 1e-10);
        let m = w_dev(2.0, 2.0 * 0.4f64.sin());
        assert!((mp(&m).unwrap() - 2.0).abs() < 1e-8);
        // agreement with classify's closed forms
        let e = e_dev(2.0, 1.0);
        let via_sup = mp(&e).unwrap();
        let via_class = classify(&e).unwrap().mp;
        assert!((via_sup - via_class).abs() < 1e-9);
    }

    #[test]
    fn nw_decompose_round_trip() {
        let frame = J_TILDE.scale(-0.6) + K_TILDE.scale(0.8);
        let nf = NormalForm::new(0.3, 0.7, 0.9, frame);
        let a = nw_compose(&nf);
        let got = nw_decompose(&a).unwrap();
        assert!((got.p1 - 0.3).abs() < 1e-8, "p1 {}", got.p1);
        assert!((got.p2 - 0.7).abs() < 1e-8);
        assert!((got.t - 0.9).abs() < 1e-8);
        assert!(mat_close(&got.frame, &frame, 1e-7));
        assert!(mat_close(&nw_compose(&got), &a, 1e-8));
    }

    #[test]
    fn nw_decompose_quasicomplex() {
        let a = crate::matlog::exp2(&(ID.scale(0.5) + I_TILDE.scale(0.2)));
        let nf = nw_decompose(&a).unwrap();
        assert!(nf.quasicomplex);
        assert!((nf.p1 - 0.5f64.hypot(0.2)).abs() < 1e-10);
        assert!((nf.t - 0.2f64.atan2(0.5)).abs() < 1e-10);
        assert!(nf.p2.abs() < 1e-12);
    }

    #[test]
    fn nw_decompose_pure_hyperbolic() {
        let a = w_dev(1.5, 0.0);
        let nf = nw_decompose(&a).unwrap();
        assert!(nf.p1.abs() < 1e-8);
        assert!((nf.p2 - 1.5).abs() < 1e-8);
        assert!(nf.t.abs() < 1e-8);
        assert!(nf.mirror_degenerate);
        assert!(mat_close(&nw_compose(&nf), &a, 1e-8));
    }

    #[test]
    fn mp_small_asymptotics() {
        let r1 = mp_small_asymptotic_check(0.1, 0.3);
        assert!(r1 < 1e-6, "residual {r1}");
        let r2 = mp_small_asymptotic_check(0.2, 0.3);
        let ratio = r2 / r1;
        assert!(ratio > 32.0 && ratio < 96.0, "order-of-contact ratio {ratio}");
        assert!(mp_small_asymptotic_check(0.1, 0.0) < 1e-6);
    }

    #[test]
    fn additivity_examples() {
        let nf = NormalForm::new(0.4, 0.8, 1.0, K_TILDE);
        let (gap_mp, gap_el) = additivity_check(&nf, 0.6).unwrap();
        assert!(gap_mp < 1e-7, "mp gap {gap_mp}");
        assert!(gap_el < 1e-7, "ellip gap {gap_el}");
        let (gap_mp, gap_el) = additivity_check(&nf, 0.0).unwrap();
        assert!(gap_mp < 1e-9 && gap_el < 1e-9);
        // hyperbolic form: every restriction has zero elliptic part
        let nf = NormalForm::new(0.0, 1.1, 0.4, K_TILDE);
        let measure = noruni_measure(&nf);
        for frac in [0.25, 0.5, 0.75] {
            let part = measure.restrict(frac).unwrap();
            let sub = nw_decompose(&part.lexp()).unwrap();
            assert!(sub.ellip().norm() < 1e-7, "frac={frac}: {}", sub.ellip().norm());
        }
    }

    #[test]
    fn hyperbolic_fit_coefficients() {
        let p = 1e-2;
        let angle = |disk: &Disk, sign: f64| {
            let (a, b) = (disk.center.re, disk.center.im);
            2.0 * ((disk.radius + sign * b) / (a + 1.0)).atan()
        };
        // (i) phase jump: ∓(1/4)sin(2ε)p² + O(p³)
        let d = cd(&hyperbolic_fit_measure(p, 0.2, 0.2, 0.3).lexp());
        let c1 = (angle(&d, 1.0) - d.radius) / (p * p);
        let expected = -0.25 * (2.0f64 * 0.3).sin();
        assert!((c1 - expected).abs() < 0.1 * expected.abs(), "{c1} vs {expected}");
        let c2 = (angle(&d, -1.0) - d.radius) / (p * p);
        assert!((c2 + expected).abs() < 0.1 * expected.abs());
        // (ii) ε = π/2: ∓(1/12)(sin t₁ + sin t₂)p³ + O(p⁴)
        let (t1, t2) = (0.3, 0.5);
        let d = cd(&hyperbolic_fit_measure(p, t1, t2, FRAC_PI_2).lexp());
        let c = (angle(&d, 1.0) - d.radius) / (p * p * p);
        let expected = -(t1.sin() + t2.sin()) / 12.0;
        assert!((c - expected).abs() < 0.1 * expected.abs(), "{c} vs {expected}");
        // (iv) ε = 0, speed change: (1/6)(±(sin t₁+sin t₂) − 2)p³ + O(p⁴)
        let d = cd(&hyperbolic_fit_measure(p, t1, t2, 0.0).lexp());
        let c_plus = (angle(&d, 1.0) - d.radius) / (p * p * p);
        let c_minus = (angle(&d, -1.0) - d.radius) / (p * p * p);
        let e_plus = ((t1.sin() + t2.sin()) - 2.0) / 6.0;
        let e_minus = (-(t1.sin() + t2.sin()) - 2.0) / 6.0;
        assert!((c_plus - e_plus).abs() < 0.1 * e_plus.abs(), "{c_plus} vs {e_plus}");
        assert!((c_minus - e_minus).abs() < 0.1 * e_minus.abs());
        // (iv) MP²: p² − (1/48)p⁴(sin t₂ − sin t₁)² + O(p⁶)
        let a = hyperbolic_fit_measure(p, t1, t2, 0.0).lexp();
        let mp2 = mp(&a).unwrap().powi(2);
        let predicted = p * p - p.powi(4) / 48.0 * (t2.sin() - t1.sin()).powi(2);
        assert!(
            (mp2 - predicted).abs() < 0.1 * (p.powi(4) / 48.0 * (t2.sin() - t1.sin()).powi(2)),
            "mp² {mp2} vs {predicted}"
        );
    }

    #[test]
    fn parabolic_fit_coefficients() {
        let p = 1e-2;
        let angle_max = |disk: &Disk| {
            let (a, b) = (disk.center.re, disk.center.im);
            2.0 * ((disk.radius + b.abs()) / (a + 1.0)).atan()
        };
        // (i): 2arctan((r+|b|)/(a+1)) = p + (p³/3)·max(cos²t+sin t−1, −1−sin t)
        for t in [0.3, -0.2] {
            let d = cd(&parabolic_fit_measure(p, t).lexp());
            let c = (angle_max(&d) - p) / (p * p * p);
            let expected = (t.cos().powi(2) + t.sin() - 1.0).max(-1.0 - t.sin()) / 3.0;
            assert!((c - expected).abs() < 0.1 * expected.abs(), "t={t}: {c} vs {expected}");
        }
        // (ii) t = −π/2: the overshoot vanishes and the construction is a
        // mirrored parabolic development exactly, so the angle equals the
        // radius (the printed −p³/12 correction is not attained).
        let d = cd(&parabolic_fit_measure(p, -FRAC_PI_2).lexp());
        assert!((angle_max(&d) - d.radius).abs() < 1e-12);
        assert!((d.radius - p).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_density_predicate() {
        // noruni density is θ-constant iff p₂ = 0 or sin t = 0
        let variation = |nf: &NormalForm| -> f64 {
            let m = noruni_measure(nf);
            let seg = &m.segments[0];
            let d0 = seg.density(0.1);
            let d1 = seg.density(0.9);
            (d0 - d1).max_abs()
        };
        assert!(variation(&NormalForm::new(0.5, 0.0, 0.8, K_TILDE)) < 1e-14);
        assert!(variation(&NormalForm::new(0.5, 0.5, 0.0, K_TILDE)) < 1e-14);
        assert!(variation(&NormalForm::new(0.5, 0.5, 0.8, K_TILDE)) > 1e-3);
        // generic form: no constant S reproduces all restrictions
        let nf = NormalForm::new(0.5, 0.5, 0.8, K_TILDE);
        let m = noruni_measure(&nf);
        let s_at = |frac: f64| {
            let a = m.restrict(frac).unwrap().lexp();
            log2(&a).unwrap().scale(1.0 / (frac * nf.total()))
        };
        assert!((s_at(0.3) - s_at(0.9)).max_abs() > 1e-6);
        // quasicomplex form is exponential
        let nf = NormalForm::new(1.0, 0.0, 0.8, K_TILDE);
        let m = noruni_measure(&nf);
        let s_at = |frac: f64| {
            let a = m.restrict(frac).unwrap().lexp();
            log2(&a).unwrap().scale(1.0 / (frac * nf.total()))
        };
        assert!((s_at(0.3) - s_at(0.9)).max_abs() < 1e-12);
    }

    #[test]
    fn critical_blowup_families_classify() {
        // critical restrictions are parabolic all the way to the threshold
        for q in [0.5 * PI, 0.9 * PI, 0.99 * PI] {
            let a = moan_measure(q).lexp();
            assert_eq!(classify(&a).unwrap().kind, MagnusKind::Parabolic, "q={q}");
        }
        // elliptic developments classify elliptic below the threshold
        for p in [1.0, 2.0, 3.0] {
            let a = e_dev(p, p * 0.5);
            assert_eq!(classify(&a).unwrap().kind, MagnusKind::Elliptic);
        }
        // and the log blows up exactly at the critical cumulative norm
        assert!(!is_logable(&w_dev(PI, PI)));
        assert!(!is_logable(&e_dev(PI, PI * 0.5)));
    }
}
