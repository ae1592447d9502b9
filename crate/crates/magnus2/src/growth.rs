//! The explicit growth bound `H(p)` on `‖log A‖₂` when
//! `CR(A) ⊂ exp D̄(0, p)`, its integrand `HH(p, t)`, and the constant `H_π`.
//!
//! `HH` is always evaluated in factored form — four entire functions, each
//! with a series fallback near its removable point — never as the raw
//! quotient, which is 0/0 as `p·sin t → 0`. The integrand blows up like
//! `1/(π² − p²sin²t)` as `p → π`, so the quadrature pre-brackets the peak
//! at `t = π/2`.

use crate::DomainError;
use std::f64::consts::PI;

/// Result of one `H(p)` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HBoundReport {
    pub p: f64,
    pub boundary_terms: f64,
    pub integral: f64,
    pub h: f64,
    pub quadrature_error_estimate: f64,
}

/// Default absolute quadrature tolerance (override via `MAGNUS_QUAD_TOL`
/// in the CLI).
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

// --- the four entire factors ----------------------------------------------

/// `(sin x − x·cos x)/x³ = Σ (−1)^m x^{2m} (2m+2)/(2m+3)!`; value 1/3 at 0.
fn g1(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let mut sum = 0.0;
        let mut fact = 6.0; // 3!
        let mut xp = 1.0;
        for m in 0..12 {
            sum += xp * (2.0 * m as f64 + 2.0) / fact;
            xp *= -x * x;
            fact *= (2.0 * m as f64 + 4.0) * (2.0 * m as f64 + 5.0);
        }
        return sum;
    }
    (x.sin() - x * x.cos()) / (x * x * x)
}

/// `(cosh y − cos x)/(x² + y²)`; value 1/2 at the origin.
fn g2(x: f64, y: f64) -> f64 {
    let q = x * x + y * y;
    if q < 1.0 {
        let (x2, y2) = (x * x, y * y);
        let mut sum = 0.0;
        let mut fact = 2.0; // 2!
        for m in 1..=14 {
            // homogeneous quotient sum_{j} y^{2j} (−x²)^{m−1−j}
            let mut inner = 0.0;
            let mut term = (-x2).powi(m as i32 - 1);
            for _ in 0..m {
                inner += term;
                if x2 != 0.0 {
                    term = term / (-x2) * y2;
                } else {
                    term = y2.powi(m as i32 - 1);
                    inner = term;
                    break;
                }
            }
            sum += inner / fact;
            fact *= (2.0 * m as f64 + 1.0) * (2.0 * m as f64 + 2.0);
        }
        return sum;
    }
    (y.cosh() - x.cos()) / q
}

/// `sin x / x`.
fn g3(x: f64) -> f64 {
    crate::kernels::sss(-x * x)
}

/// `C_j(y) = ∫₀¹ u^{2j+1} cosh(uy) du = Σ_i y^{2i}/((2i)!·(2i+2j+2))`;
/// positive series, no cancellation.
fn c_j(j: usize, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0; // y^{2i}/(2i)!
    let mut i = 0usize;
    loop {
        let term = pow / (2 * i + 2 * j + 2) as f64;
        sum += term;
        i += 1;
        pow *= y * y / ((2 * i - 1) as f64 * (2 * i) as f64);
        if (term < 1e-18 * sum && i > 3) || i > 80 {
            break;
        }
    }
    sum
}

/// `(1/(p²·sin t)) ∫₀^p cosh(q·cos t)·sin(q·sin t) dq` as a function of
/// `x = p·sin t`, `y = p·cos t`; value 1/2 at the origin.
fn g4(x: f64, y: f64) -> f64 {
    if x.abs() < 0.5 {
        let mut sum = 0.0;
        let mut fact = 1.0; // (2j+1)!
        let mut xp = 1.0;
        for j in 0..10 {
            sum += xp / fact * c_j(j, y);
            xp *= -x * x;
            fact *= (2.0 * j as f64 + 2.0) * (2.0 * j as f64 + 3.0);
        }
        return sum;
    }
    let q = x * x + y * y;
    let p = q.sqrt();
    let s = x / p;
    let c = y / p;
    (s - s * y.cosh() * x.cos() + c * y.sinh() * x.sin()) / (q * s)
}

/// Factored integrand, defined for any `(p, t)` where `sin(p·sin t) ≠ 0`
/// or by continuity; positive and finite for `0 < p < π`.
fn hh_factored(p: f64, t: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    let x = p * t.sin();
    let y = p * t.cos();
    p * x * g1(x) * g2(x, y) / (g3(x) * g4(x, y))
}

/// `HH(p, t)` for `0 ≤ p < π`, `t ∈ [0, π]`.
pub fn hh(p: f64, t: f64) -> Result<f64, DomainError> {
    if !(0.0..PI).contains(&p) {
        return Err(DomainError::new(format!("hh requires 0 <= p < pi, got {p}")));
    }
    Ok(hh_factored(p, t))
}

// --- adaptive Simpson quadrature -------------------------------------------

struct Quad {
    err: f64,
    floor: f64,
}

impl Quad {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }

    fn refine(
        &mut self,
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
    ) -> f64 {
        let (left, lm, flm) = Quad::simpson(f, a, fa, m, fm);
        let (right, rm, frm) = Quad::simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || (b - a) < self.floor {
            self.err += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.refine(f, a, fa, m, fm, left, lm, flm, tol / 2.0)
            + self.refine(f, m, fm, b, fb, right, rm, frm, tol / 2.0)
    }

    /// Integrate over consecutive panels, splitting the tolerance evenly.
    fn integrate(f: impl Fn(f64) -> f64, panels: &[f64], tol: f64) -> (f64, f64) {
        let mut quad = Quad { err: 0.0, floor: 2f64.powi(-40) };
        let mut total = 0.0;
        let per_panel = tol / (panels.len() - 1) as f64;
        for w in panels.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let (fa, fb) = (f(a), f(b));
            let (whole, m, fm) = Quad::simpson(&f, a, fa, b, fb);
            total += quad.refine(&f, a, fa, b, fb, whole, m, fm, per_panel);
        }
        (total, quad.err)
    }
}

/// Panel boundaries for `∫₀^π HH(p, t) dt`: near `p = π` the peak of width
/// `~√(π−p)` at `t = π/2` is pre-bracketed at `π/2 ± (π−p)^{1/2±1/4}`.
fn hh_panels(p: f64) -> Vec<f64> {
    let mut pts = vec![0.0, PI / 2.0, PI];
    let gap = PI - p;
    if gap < 0.5 {
        for e in [0.75, 0.25] {
            let w = gap.powf(e);
            pts.push(PI / 2.0 - w);
            pts.push(PI / 2.0 + w);
        }
    }
    pts.retain(|&x| (0.0..=PI).contains(&x));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// The boundary (non-integral) part of `H(p)`:
/// `p − 2·log(2cosh(p/2) − (2/p)·sinh(p/2))`.
fn boundary_terms(p: f64) -> f64 {
    p - 2.0 * (2.0 * (p / 2.0).cosh() - (2.0 / p) * (p / 2.0).sinh()).ln()
}

/// `H(p)` with the default tolerance.
pub fn h_bound(p: f64) -> Result<HBoundReport, DomainError> {
    h_bound_with_tol(p, DEFAULT_QUAD_TOL)
}

/// `H(p) = boundary + ∫₀^π HH(p,t) dt` for `0 ≤ p < π`.
pub fn h_bound_with_tol(p: f64, tol: f64) -> Result<HBoundReport, DomainError> {
    if !(0.0..PI).contains(&p) {
        return Err(DomainError::new(format!("h_bound requires 0 <= p < pi, got {p}")));
    }
    if p == 0.0 {
        return Ok(HBoundReport {
            p,
            boundary_terms: 0.0,
            integral: 0.0,
            h: 0.0,
            quadrature_error_estimate: 0.0,
        });
    }
    let (integral, err) = Quad::integrate(|t| hh_factored(p, t), &hh_panels(p), tol);
    let boundary = boundary_terms(p);
    Ok(HBoundReport {
        p,
        boundary_terms: boundary,
        integral,
        h: boundary + integral,
        quadrature_error_estimate: err,
    })
}

/// Regularized critical integrand `HH(π, t) − 2/cos²t` (smooth on `[0, π]`).
///
/// Within 1e−3 of `t = π/2` both terms blow up like `2/cos²t`; the value is
/// recovered there by even quadratic interpolation from `|u| ∈ {1, 2}·1e−3`.
pub fn critical_integrand(t: f64) -> f64 {
    let u = t - PI / 2.0;
    let direct = |u: f64| {
        let t = PI / 2.0 + u;
        hh_factored(PI, t) - 2.0 / (t.cos() * t.cos())
    };
    if u.abs() >= 1e-3 {
        return direct(u);
    }
    let (u1, u2) = (1e-3, 2e-3);
    let w1 = 0.5 * (direct(u1) + direct(-u1));
    let w2 = 0.5 * (direct(u2) + direct(-u2));
    // even in u: fit a + b·u² through the two stencil values
    let b = (w2 - w1) / (u2 * u2 - u1 * u1);
    w1 + b * (u * u - u1 * u1)
}

/// `H_π = π − 2log(2cosh(π/2) − (2/π)sinh(π/2)) + ∫₀^π (HH(π,t) − 2/cos²t) dt`
/// (numerically ≈ −2.513).
pub fn h_pi() -> f64 {
    h_pi_with_tol(DEFAULT_QUAD_TOL).0
}

/// `H_π` plus the quadrature error estimate.
pub fn h_pi_with_tol(tol: f64) -> (f64, f64) {
    let panels = [0.0, PI / 2.0 - 0.1, PI / 2.0 + 0.1, PI];
    let (integral, err) = Quad::integrate(critical_integrand, &panels, tol);
    (boundary_terms(PI) + integral, err)
}

/// The Apollonian-pole auxiliary curve
/// `f(t) = −(sin t − e^{p·cos t}·sin(t − p·sin t)) /
///          (sin t − e^{−p·cos t}·sin(t + p·sin t))`,
/// strictly increasing on `(0, π)`.
pub fn apollonian_pole(p: f64, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let x = p * s;
    -(s - (p * c).exp() * (t - x).sin()) / (s - (-p * c).exp() * (t + x).sin())
}

/// Closed-form limits of [`apollonian_pole`] at `t → 0⁺` and `t → π⁻`.
pub fn apollonian_pole_endpoints(p: f64) -> (f64, f64) {
    let lo = -(1.0 - p.exp() * (1.0 - p)) / (1.0 - (-p).exp() * (1.0 + p));
    let hi = -(1.0 - (-p).exp() * (1.0 + p)) / (1.0 - p.exp() * (1.0 - p));
    (lo, hi)
}
