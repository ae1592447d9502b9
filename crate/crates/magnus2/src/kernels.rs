//! Scalar special functions behind the branch-free 2×2 logarithm.
//!
//! `ac` unifies `arccos x/√(1−x²)` (elliptic), `1` (parabolic) and
//! `arcosh x/√(x²−1)` (hyperbolic) into one analytic function on `(−1, ∞)`;
//! `asf` and `atf` are its derived companions. `ccc`/`sss` are the entire
//! `cos√(−x)`/`cosh√x` and `sin√(−x)/√(−x)`/`sinh√x/√x` pairs. Each kernel
//! switches to a short Taylor expansion near its removable singularity so the
//! evaluation never divides 0 by 0.

/// Argument outside a kernel's analyticity domain.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum KernelError {
    /// `x ≤ −1`: on the branch cut of `ac`.
    #[error("argument {0} on the branch cut (-inf, -1]")]
    BranchCut(f64),
    #[error("argument {0} out of domain")]
    OutOfDomain(f64),
}

/// Half-width of the Taylor window around the removable point `x = 1`.
const SERIES_WINDOW: f64 = 1e-3;
/// Number of Taylor terms kept; truncation < 1e−16 inside the window.
const SERIES_TERMS: usize = 8;

/// Taylor coefficients of `ac` about 1: `c_n = −n·c_{n−1}/(2n+1)`, `c_0 = 1`.
fn ac_series_coeffs() -> [f64; SERIES_TERMS + 1] {
    let mut c = [0.0; SERIES_TERMS + 1];
    c[0] = 1.0;
    for n in 1..=SERIES_TERMS {
        c[n] = -(n as f64) * c[n - 1] / (2.0 * n as f64 + 1.0);
    }
    c
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `ac(x)`: `arccos x / √(1−x²)` continued analytically through `x = 1`
/// (value 1) into `arcosh x / √(x²−1)`. Monotone decreasing on `(−1, ∞)`
/// with range `(0, ∞)`.
pub fn ac(x: f64) -> Result<f64, KernelError> {
    if !(x > -1.0) {
        return Err(KernelError::BranchCut(x));
    }
    if (x - 1.0).abs() < SERIES_WINDOW {
        return Ok(poly_eval(&ac_series_coeffs(), x - 1.0));
    }
    if x < 1.0 {
        Ok(x.acos() / (1.0 - x * x).sqrt())
    } else {
        Ok(x.acosh() / (x * x - 1.0).sqrt())
    }
}

/// Taylor coefficients about 1 of `asf²(x) = (ac²−1)/(1−x²)`.
fn as_sq_series_coeffs() -> [f64; SERIES_TERMS] {
    let c = ac_series_coeffs();
    // ac² − 1 as a series in e = x−1 (constant term cancels exactly)
    let mut sq = [0.0; 2 * SERIES_TERMS + 2];
    for i in 0..c.len() {
        for j in 0..c.len() {
            sq[i + j] += c[i] * c[j];
        }
    }
    sq[0] -= 1.0;
    // divide by 1−x² = −2e−e²: s_{n} = (−sq_{n+1} − s_{n−2? }) recurrence
    // (2e+e²)·s = −(ac²−1): 2 s_{n-1} + s_{n-2} = −sq_n
    let mut s = [0.0; SERIES_TERMS];
    for n in 1..=SERIES_TERMS {
        let prev = if n >= 2 { s[n - 2] } else { 0.0 };
        s[n - 1] = (-sq[n] - prev) / 2.0;
    }
    s
}

/// `asf(x) = √((ac(x)² − 1)/(1 − x²))`, analytic on `(−1, ∞)`, monotone
/// decreasing, range `(0, ∞)`; `asf(1) = 1/√3`.
pub fn asf(x: f64) -> Result<f64, KernelError> {
    if !(x > -1.0) {
        return Err(KernelError::BranchCut(x));
    }
    if (x - 1.0).abs() < SERIES_WINDOW {
        return Ok(poly_eval(&as_sq_series_coeffs(), x - 1.0).sqrt());
    }
    let a = ac(x)?;
    Ok(((a * a - 1.0) / (1.0 - x * x)).sqrt())
}

/// `atf(x) = (ac(x) − 1)/asf(x)`; `x ↦ x + atf(x)` maps `(−1, 1]` onto
/// itself monotonically, fixing the right endpoint.
pub fn atf(x: f64) -> Result<f64, KernelError> {
    if !(x > -1.0) {
        return Err(KernelError::BranchCut(x));
    }
    if (x - 1.0).abs() < SERIES_WINDOW {
        // ac − 1 without the cancelling constant term
        let c = ac_series_coeffs();
        let e = x - 1.0;
        let num = e * poly_eval(&c[1..], e);
        return Ok(num / asf(x)?);
    }
    Ok((ac(x)? - 1.0) / asf(x)?)
}

/// `ccc(x)`: `cos√(−x)` for `x < 0`, `cosh√x` for `x > 0`; entire,
/// `ccc(0) = 1`. Series `Σ xᵐ/(2m)!`.
pub fn ccc(x: f64) -> f64 {
    if x.abs() < SERIES_WINDOW {
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..=SERIES_TERMS {
            term *= x / ((2 * m - 1) as f64 * (2 * m) as f64);
            sum += term;
        }
        return sum;
    }
    if x < 0.0 {
        (-x).sqrt().cos()
    } else {
        x.sqrt().cosh()
    }
}

/// `sss(x)`: `sin√(−x)/√(−x)` for `x < 0`, `sinh√x/√x` for `x > 0`; entire,
/// `sss(0) = 1`. Series `Σ xᵐ/(2m+1)!`.
pub fn sss(x: f64) -> f64 {
    if x.abs() < SERIES_WINDOW {
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..=SERIES_TERMS {
            term *= x / ((2 * m) as f64 * (2 * m + 1) as f64);
            sum += term;
        }
        return sum;
    }
    if x < 0.0 {
        let r = (-x).sqrt();
        r.sin() / r
    } else {
        let r = x.sqrt();
        r.sinh() / r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ac_examples() {
        assert_eq!(ac(1.0).unwrap(), 1.0);
        assert!((ac(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        // AC(cosh 1) = 1/sinh 1
        assert!((ac(1f64.cosh()).unwrap() - 1.0 / 1f64.sinh()).abs() < 1e-14);
        assert_eq!(ac(-1.0), Err(KernelError::BranchCut(-1.0)));
        assert_eq!(ac(-2.5), Err(KernelError::BranchCut(-2.5)));
    }

    #[test]
    fn asf_examples() {
        // AS(0) = sqrt(pi^2/4 - 1)
        let expected = (PI * PI / 4.0 - 1.0).sqrt();
        assert!((asf(0.0).unwrap() - expected).abs() < 1e-14);
        // AS(1) = 1/sqrt(3), approached from both sides
        let lim = 1.0 / 3f64.sqrt();
        assert!((asf(1.0).unwrap() - lim).abs() < 1e-14);
        assert!((asf(1.0 - 1e-8).unwrap() - lim).abs() < 1e-8);
        assert!((asf(1.0 + 1e-8).unwrap() - lim).abs() < 1e-8);
        // range statement: AS -> 0 at infinity
        assert!(asf(1e6).unwrap() < 1e-4);
    }

    #[test]
    fn atf_examples() {
        assert_eq!(atf(1.0).unwrap(), 0.0);
        // right endpoint of x ↦ x + atf(x) is fixed
        assert_eq!(1.0 + atf(1.0).unwrap(), 1.0);
        let expected = (PI / 2.0 - 1.0) / (PI * PI / 4.0 - 1.0).sqrt();
        assert!((atf(0.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn atf_bijection_monotone() {
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=400 {
            let x = -0.999 + 1.999 * k as f64 / 400.0;
            let v = x + atf(x).unwrap();
            assert!(v > prev, "x + atf(x) not increasing at {x}");
            assert!(v > -1.0 && v <= 1.0 + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn ccc_sss_examples() {
        assert_eq!(ccc(0.0), 1.0);
        assert_eq!(sss(0.0), 1.0);
        assert!((ccc(-PI * PI) + 1.0).abs() < 1e-14);
        assert!(sss(-PI * PI).abs() < 1e-14);
        assert!((ccc(1.0) - 1f64.cosh()).abs() < 1e-14);
    }

    #[test]
    fn pythagoras_identity() {
        // ccc(x)² − x·sss(x)² = 1 for all x
        for k in 0..=200 {
            let x = -50.0 + k as f64 * 0.5;
            let lhs = ccc(x) * ccc(x) - x * sss(x) * sss(x);
            assert!((lhs - 1.0).abs() < 1e-13, "x={x} lhs={lhs}");
        }
    }

    #[test]
    fn ac_functional_equation() {
        // AC'(x) = (x·AC(x) − 1)/(1 − x²) away from the removable point;
        // central differences at 100 points of (−0.99, 5)
        let h = 1e-6;
        for k in 0..100 {
            let x = -0.99 + 5.99 * (k as f64 + 0.5) / 100.0;
            if (x - 1.0).abs() < 0.05 {
                continue;
            }
            let d = (ac(x + h).unwrap() - ac(x - h).unwrap()) / (2.0 * h);
            let rhs = (x * ac(x).unwrap() - 1.0) / (1.0 - x * x);
            assert!((d - rhs).abs() < 1e-8, "x={x} d={d} rhs={rhs}");
        }
    }

    #[test]
    fn smooth_across_series_window() {
        // values straddling each switch point differ by < 1e-10
        for f in [ac, asf, atf] {
            for x0 in [1.0 - SERIES_WINDOW, 1.0 + SERIES_WINDOW] {
                let lo = f(x0 - 1e-6).unwrap();
                let hi = f(x0 + 1e-6).unwrap();
                assert!((hi - lo).abs() < 1e-10);
            }
        }
        for f in [ccc, sss] {
            for x0 in [-SERIES_WINDOW, SERIES_WINDOW] {
                let lo = f(x0 - 1e-6);
                let hi = f(x0 + 1e-6);
                assert!((hi - lo).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ac_monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..=500 {
            let x = -0.999 + k as f64 * 0.02;
            let v = ac(x).unwrap();
            assert!(v < prev);
            assert!(v > 0.0);
            prev = v;
        }
    }
}
