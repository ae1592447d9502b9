//! The named example families: skew-loxodromic and skew-elliptic
//! compositions, the critical (Moan) development, and the parabolic,
//! elliptic and hyperbolic developments, with closed-form Magnus-log norms,
//! ridge parametrizations and blow-up asymptotics.

use crate::kernels::{ac, asf, atf, ccc, sss};
use crate::mat2::{Mat2, I_TILDE, ID, J_TILDE, K_TILDE};
use crate::matlog::LogabilityError;
use crate::measures::{MeasureSpec, Segment};
use crate::DomainError;
use std::f64::consts::PI;

/// `W(p, w) = R(w)·[ccc(p²−w²)·Id + sss(p²−w²)·(−w·Ĩ + p·K̃)]`, the
/// solution at `θ = 1` of the rotating-frame flow with speeds `(p, w)`.
pub fn w_dev(p: f64, w: f64) -> Mat2 {
    let x = p * p - w * w;
    let body = ID.scale(ccc(x)) + (I_TILDE.scale(-w) + K_TILDE.scale(p)).scale(sss(x));
    Mat2::rotation(w) * body
}

/// `E(p, w) = (cos p·Id + sin p·Ĩ)·(Id − w·Ĩ + w·K̃)`, the elliptic
/// development matrix; `E(p, p) = W(p, p)`.
pub fn e_dev(p: f64, w: f64) -> Mat2 {
    Mat2::rotation(p) * (ID + (K_TILDE - I_TILDE).scale(w))
}

/// Critical-family measure `Φ|_{[0,p]}`: rotating frame `K̃` at unit
/// frequency (density `R(θ)K̃R(−θ)`), unit norm density.
pub fn moan_measure(p: f64) -> MeasureSpec {
    MeasureSpec::new(vec![Segment::Rotating {
        frame: K_TILDE,
        frequency: 1.0,
        phase: 0.0,
        drift: (0.0, 0.0),
        length: p,
    }])
}

/// Hyperbolic development measure `Φ_{sin t}|_{[0,p]}` (frame `K̃` rotating
/// at frequency `sin t`).
pub fn hyperbolic_measure(t: f64, p: f64) -> MeasureSpec {
    MeasureSpec::new(vec![Segment::Rotating {
        frame: K_TILDE,
        frequency: t.sin(),
        phase: 0.0,
        drift: (0.0, 0.0),
        length: p,
    }])
}

/// Elliptic development measure `Ψ̂_h|_{[0,p]}`: `(1−h)·Ĩ` drift plus the
/// critical frame scaled by `h`; unit norm density for every `h ∈ [0,1]`.
pub fn elliptic_measure(h: f64, p: f64) -> MeasureSpec {
    MeasureSpec::new(vec![Segment::Rotating {
        frame: K_TILDE.scale(h),
        frequency: 1.0,
        phase: 0.0,
        drift: (0.0, 1.0 - h),
        length: p,
    }])
}

/// Skew-loxodromic composition `Υ_{α,β} = αJ̃𝟏 . βĨ𝟏` as two unit-density
/// constant segments (`J̃` first, `Ĩ` second). Zero-length atoms are dropped.
pub fn skew_loxodromic_measure(alpha: f64, beta: f64) -> MeasureSpec {
    let mut segments = Vec::new();
    if alpha != 0.0 {
        segments.push(Segment::Constant {
            matrix: J_TILDE.scale(alpha.signum()),
            length: alpha.abs(),
        });
    }
    if beta != 0.0 {
        segments.push(Segment::Constant {
            matrix: I_TILDE.scale(beta.signum()),
            length: beta.abs(),
        });
    }
    MeasureSpec::new(segments)
}

/// Skew-elliptic composition `Υ̃_{α,β} = αP̃𝟏 . βĨ𝟏` with the nilpotent
/// `P̃ = [[0, −1], [0, 0]]`.
pub fn skew_elliptic_measure(alpha: f64, beta: f64) -> MeasureSpec {
    let p_tilde = Mat2::new(0.0, -1.0, 0.0, 0.0);
    let mut segments = Vec::new();
    if alpha != 0.0 {
        segments.push(Segment::Constant {
            matrix: p_tilde.scale(alpha.signum()),
            length: alpha.abs(),
        });
    }
    if beta != 0.0 {
        segments.push(Segment::Constant {
            matrix: I_TILDE.scale(beta.signum()),
            length: beta.abs(),
        });
    }
    MeasureSpec::new(segments)
}

/// A named example family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DevelopmentId {
    SkewLoxodromic { alpha: f64, beta: f64 },
    SkewElliptic { alpha: f64, beta: f64 },
    Critical { t: f64 },
    Parabolic { p: f64 },
    Elliptic { h: f64, p: f64 },
    Hyperbolic { t: f64, p: f64 },
}

impl DevelopmentId {
    /// The defining measure of the family member.
    pub fn measure(&self) -> MeasureSpec {
        match *self {
            DevelopmentId::SkewLoxodromic { alpha, beta } => skew_loxodromic_measure(alpha, beta),
            DevelopmentId::SkewElliptic { alpha, beta } => skew_elliptic_measure(alpha, beta),
            DevelopmentId::Critical { t } => moan_measure(PI).scale(t),
            DevelopmentId::Parabolic { p } => moan_measure(p),
            DevelopmentId::Elliptic { h, p } => elliptic_measure(h, p),
            DevelopmentId::Hyperbolic { t, p } => hyperbolic_measure(t, p),
        }
    }

    /// Closed-form `‖log Lexp‖₂` of the family member.
    pub fn mu_norm(&self) -> Result<f64, LogabilityError> {
        let acv = |x: f64| ac(x).map_err(|_| LogabilityError::SpectrumOnCut);
        match *self {
            DevelopmentId::SkewLoxodromic { alpha, beta } => {
                Ok(acv(alpha.cosh() * beta.cos())? * (alpha.sinh() + alpha.cosh() * beta.sin()))
            }
            DevelopmentId::SkewElliptic { alpha, beta } => {
                Ok(acv(beta.cos() - alpha / 2.0 * beta.sin())?
                    * (beta.sin() + alpha / 2.0 * beta.cos() + alpha / 2.0))
            }
            DevelopmentId::Critical { t } => {
                if t.abs() >= 1.0 {
                    return Err(LogabilityError::SpectrumOnCut);
                }
                Ok(PI * (1.0 / (1.0 - t * t).sqrt() - 1.0) * (1.0 + t))
            }
            DevelopmentId::Parabolic { p } => {
                Ok(acv(p.cos() + p * p.sin())? * (p.sin() - p * p.cos() + p))
            }
            DevelopmentId::Elliptic { h, p } => {
                Ok(acv(p.cos() + h * p * p.sin())? * (p.sin() - h * p * p.cos() + h * p))
            }
            DevelopmentId::Hyperbolic { t, p } => {
                let (s, c) = t.sin_cos();
                // sinh(p cos t)/cos t, continued through cos t = 0
                let sh = p * sss((p * c) * (p * c));
                let x = (p * c).cosh() * (p * s).cos() + sh * (p * s).sin() * s;
                let y = ((p * c).cosh() * (p * s).sin() - sh * (p * s).cos() * s).abs() + sh;
                Ok(acv(x)? * y)
            }
        }
    }
}

/// Elliptic branch of the loxodromic optimization ridge: the `(α̂, β̂)` with
/// `cosh α̂ · cos β̂ = x`, `x ∈ (−1, 1]`.
pub fn ridge_loxodromic(x: f64) -> Result<(f64, f64), DomainError> {
    if !(x > -1.0 && x <= 1.0) {
        return Err(DomainError::new(format!("ridge parameter {x} outside (-1, 1]")));
    }
    let acv = ac(x).map_err(|e| DomainError::new(e.to_string()))?;
    let asv = asf(x).map_err(|e| DomainError::new(e.to_string()))?;
    let disc = (acv * acv - 4.0 * x * (1.0 - x * asv) * asv).max(0.0).sqrt();
    let alpha = ((acv + disc) / (2.0 * (1.0 - x * asv))).acosh();
    let beta = (((acv - disc) / (2.0 * asv)).clamp(-1.0, 1.0)).acos();
    Ok((alpha, beta))
}

/// Skew-elliptic ridge: `α̂ = 2·atf(x)/√(1−(x+atf(x))²)`,
/// `β̂ = arccos(x + atf(x))`; satisfies `cos β̂ − (α̂/2)·sin β̂ = x`.
pub fn ridge_elliptic(x: f64) -> Result<(f64, f64), DomainError> {
    if !(x > -1.0 && x <= 1.0) {
        return Err(DomainError::new(format!("ridge parameter {x} outside (-1, 1]")));
    }
    if x == 1.0 {
        return Ok((0.0, 0.0));
    }
    let atv = atf(x).map_err(|e| DomainError::new(e.to_string()))?;
    let inner = x + atv;
    let alpha = 2.0 * atv / (1.0 - inner * inner).max(0.0).sqrt();
    Ok((alpha, inner.clamp(-1.0, 1.0).acos()))
}

/// The blow-up families whose leading/second-order constants the paper pins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticFamily {
    /// Υ along the explicit cube-root path; `‖μ‖ ~ c·(π−p)^{−1/3}`.
    LoxodromicNaive,
    /// Υ along the optimization ridge; `‖μ‖ ~ 2π·3^{−1/3}·(π−p)^{−1/3}`.
    LoxodromicRidge,
    /// Υ̃ along its ridge; the leading constant is reported, not asserted.
    SkewElliptic,
    /// Critical family `t·Φ`; `‖μ‖ ~ √2π^{3/2}(π−p)^{−1/2} − 2π − …`.
    Critical,
    /// Parabolic development `Φ|[0,p]`.
    Parabolic,
    /// Hyperbolic development tuned by `p/π = sin t`.
    HyperbolicTuned,
}

impl AsymptoticFamily {
    /// Closed-form leading constant of the blow-up law.
    pub fn leading_constant(&self) -> f64 {
        match self {
            AsymptoticFamily::LoxodromicNaive => {
                (12.0 * PI.powf(8.0 / 3.0) / (PI * PI + 6.0)).sqrt()
            }
            AsymptoticFamily::LoxodromicRidge => 2.0 * PI * 3f64.powf(-1.0 / 3.0),
            AsymptoticFamily::SkewElliptic => PI * (4.0 / 3.0f64).powf(1.0 / 3.0),
            AsymptoticFamily::Critical
            | AsymptoticFamily::Parabolic
            | AsymptoticFamily::HyperbolicTuned => 2f64.sqrt() * PI.powf(1.5),
        }
    }

    /// Coefficient of `(π−p)^{1/2}` after removing the leading term and the
    /// shared `−2π` constant (the square-root families only).
    pub fn second_coefficient(&self) -> Option<f64> {
        match self {
            AsymptoticFamily::Critical => Some(-2f64.sqrt() / 4.0 * PI.sqrt()),
            AsymptoticFamily::Parabolic => Some((2.0 * PI).sqrt() * (PI * PI - 1.0) / 4.0),
            AsymptoticFamily::HyperbolicTuned => Some((2.0 * PI).sqrt() * (4.0 * PI * PI - 3.0) / 12.0),
            _ => None,
        }
    }

    /// `‖μ‖` of the family member at cumulative norm `p`.
    pub fn mu_norm_at(&self, p: f64) -> f64 {
        match self {
            AsymptoticFamily::LoxodromicNaive => {
                let cube = (PI * PI * (PI - p)).powf(1.0 / 3.0);
                DevelopmentId::SkewLoxodromic { alpha: p - PI + cube, beta: PI - cube }
                    .mu_norm()
                    .expect("naive path stays log-able below pi")
            }
            AsymptoticFamily::LoxodromicRidge => {
                let x = ridge_x_for_budget(ridge_loxodromic, p);
                let (alpha, beta) = ridge_loxodromic(x).expect("ridge domain");
                DevelopmentId::SkewLoxodromic { alpha, beta }.mu_norm().expect("log-able")
            }
            AsymptoticFamily::SkewElliptic => {
                let x = ridge_x_for_budget(ridge_elliptic, p);
                let (alpha, beta) = ridge_elliptic(x).expect("ridge domain");
                DevelopmentId::SkewElliptic { alpha, beta }.mu_norm().expect("log-able")
            }
            AsymptoticFamily::Critical => DevelopmentId::Critical { t: p / PI }
                .mu_norm()
                .expect("log-able below pi"),
            AsymptoticFamily::Parabolic => DevelopmentId::Parabolic { p }
                .mu_norm()
                .expect("log-able below pi"),
            AsymptoticFamily::HyperbolicTuned => {
                let t = (p / PI).asin();
                DevelopmentId::Hyperbolic { t, p }.mu_norm().expect("log-able below pi")
            }
        }
    }

    /// Empirical leading constant: Richardson extrapolation of
    /// `‖μ‖·(π−p)^{1/3}` from boundary distances `u` and `u/10`
    /// (corrections are `O(u^{2/3})`).
    pub fn fit_leading_third(&self, u: f64) -> f64 {
        let g = |u: f64| self.mu_norm_at(PI - u) * u.powf(1.0 / 3.0);
        let w = 10f64.powf(-2.0 / 3.0);
        (g(u / 10.0) - g(u) * w) / (1.0 - w)
    }

    /// Constant term `lim (‖μ‖ − √2π^{3/2}(π−p)^{−1/2})` evaluated at
    /// boundary distance `u` (square-root families; the limit is `−2π`).
    pub fn fit_constant_term(&self, u: f64) -> f64 {
        self.mu_norm_at(PI - u) - self.leading_constant() / u.sqrt()
    }

    /// Empirical `(π−p)^{1/2}`-coefficient by Richardson over `u` and `u/4`.
    pub fn fit_second_coefficient(&self, u: f64) -> f64 {
        let g = |u: f64| (self.fit_constant_term(u) + 2.0 * PI) / u.sqrt();
        2.0 * g(u / 4.0) - g(u)
    }
}

/// Solve `α̂(x) + β̂(x) = p` for `x` by bisection (the budget `p` grows to π
/// as `x ↘ −1`).
fn ridge_x_for_budget(
    ridge: impl Fn(f64) -> Result<(f64, f64), DomainError>,
    p: f64,
) -> f64 {
    let budget = |x: f64| {
        let (a, b) = ridge(x).expect("ridge domain");
        a + b
    };
    let mut lo = -1.0 + 1e-15;
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if budget(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The acceptance gallery: small measures exercising every development kind.
pub fn gallery() -> Vec<(&'static str, MeasureSpec)> {
    vec![
        ("phi_p1", moan_measure(1.0)),
        ("phi_p2", moan_measure(2.0)),
        ("phi_p3", moan_measure(3.0)),
        ("upsilon_half_half", skew_loxodromic_measure(0.5, 0.5)),
        ("psi_hat_half_p2", elliptic_measure(0.5, 2.0)),
    ]
}
