//! Closed-form logarithm and exponential of real 2×2 matrices.
//!
//! `log2` is Eq.-style branch-free: scalar part `(log det)/2`, traceless part
//! scaled by `ac(tr/2√det)/√det`, valid uniformly across elliptic, parabolic
//! and hyperbolic orbits. `exp2` inverts it through the `ccc`/`sss` pair.

use crate::kernels::{ac, asf, ccc, sss};
use crate::mat2::{Mat2, ID};
use crate::DomainError;

/// Why a matrix has no real logarithm.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum LogabilityError {
    /// Spectrum meets `(−∞, 0]` (normalized trace on the cut).
    #[error("not log-able: spectrum meets (-inf,0]")]
    SpectrumOnCut,
    /// `det A ≤ 0`; no continuous path to the identity.
    #[error("not log-able: determinant not positive")]
    NonPositiveDet,
}

/// Tolerance band for the cut test: floating-point neighbours of the
/// logability boundary produce catastrophic `ac` values.
const CUT_TOL: f64 = 1e-12;

/// True iff `det A > 0` and `tr A/(2√det A) > −1`, i.e. the spectrum avoids
/// `(−∞, 0]`.
pub fn is_logable(m: &Mat2) -> bool {
    let det = m.det();
    det > 1e-300 && m.trace() / (2.0 * det.sqrt()) > -1.0 + CUT_TOL
}

/// Branch-free logarithm of a log-able real 2×2 matrix.
pub fn log2(m: &Mat2) -> Result<Mat2, LogabilityError> {
    let det = m.det();
    if det <= 1e-300 {
        return Err(LogabilityError::NonPositiveDet);
    }
    let sd = det.sqrt();
    let x = m.trace() / (2.0 * sd);
    if x <= -1.0 + CUT_TOL {
        return Err(LogabilityError::SpectrumOnCut);
    }
    let coeff = ac(x).map_err(|_| LogabilityError::SpectrumOnCut)? / sd;
    let traceless = *m - ID.scale(m.trace() / 2.0);
    Ok(ID.scale(sd.ln()) + traceless.scale(coeff))
}

/// Exponential of any real 2×2 matrix:
/// `e^{tr/2}·(ccc(δ)·Id + sss(δ)·(M − (tr/2)·Id))` with
/// `δ = (tr/2)² − det M`.
pub fn exp2(m: &Mat2) -> Mat2 {
    let half_tr = m.trace() / 2.0;
    let delta = half_tr * half_tr - m.det();
    let traceless = *m - ID.scale(half_tr);
    let body = ID.scale(ccc(delta)) + traceless.scale(sss(delta));
    body.scale(half_tr.exp())
}

/// Norm and signed co-norm of `log A` straight from the principal-disk data
/// `PD(A) = D̄(a+ib, r)`: returns `(f_CA + f_RD, f_CA − f_RD)`.
pub fn log_norm_from_disk(a: f64, b: f64, r: f64) -> Result<(f64, f64), DomainError> {
    let (fca, frd) = log_norm_parts(a, b, r)?;
    Ok((fca + frd, fca - frd))
}

/// The two constituents `f_CA` (point part) and `f_RD` (radius part).
pub fn log_norm_parts(a: f64, b: f64, r: f64) -> Result<(f64, f64), DomainError> {
    let det = a * a + b * b - r * r;
    if det <= 0.0 {
        return Err(DomainError::new("disk is not the PD of an invertible matrix"));
    }
    let s = det.sqrt();
    let acv = ac(a / s)
        .map_err(|_| DomainError::new("disk is not the PD of a log-able matrix"))?;
    let fca = (s.ln() * s.ln() + (b * acv / s) * (b * acv / s)).sqrt();
    let frd = r * acv / s;
    Ok((fca, frd))
}

/// Central-difference residual of the conical identity satisfied by
/// `f = f_CA + f_RD`:
/// `(∂f/∂r)² − (∂f/∂a)² − (∂f/∂b)² = (f/f_CA · b·asf(a/√det)/det)²`.
///
/// The closed form is even in `r` through `r²`, so the `r`-difference may
/// cross 0. Excluded: the exceptional configurations `b = 0, a = √(1+r²)`.
pub fn conical_identity_residual(a: f64, b: f64, r: f64) -> Result<f64, DomainError> {
    if b <= 0.0 {
        return Err(DomainError::new("conical identity requires b > 0"));
    }
    let det = a * a + b * b - r * r;
    if det <= 0.0 {
        return Err(DomainError::new("disk is not log-able"));
    }
    let near_exceptional = b.abs() < 1e-6 && (a - (1.0 + r * r).sqrt()).abs() < 1e-6;
    if near_exceptional {
        return Err(DomainError::new("exceptional configuration b=0, a=sqrt(1+r^2)"));
    }
    let f = |a: f64, b: f64, r: f64| -> Result<f64, DomainError> {
        let (fca, frd) = log_norm_parts(a, b, r)?;
        Ok(fca + frd)
    };
    let h = 1e-5;
    let fr = (f(a, b, r + h)? - f(a, b, r - h)?) / (2.0 * h);
    let fa = (f(a + h, b, r)? - f(a - h, b, r)?) / (2.0 * h);
    let fb = (f(a, b + h, r)? - f(a, b - h, r)?) / (2.0 * h);
    let (fca, frd) = log_norm_parts(a, b, r)?;
    let asv = asf(a / det.sqrt()).map_err(|e| DomainError::new(e.to_string()))?;
    let rhs = ((fca + frd) / fca * b * asv / det).powi(2);
    Ok((fr * fr - fa * fa - fb * fb - rhs).abs())
}
