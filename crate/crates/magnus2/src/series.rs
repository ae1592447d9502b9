//! Truncated matrix power series in the Magnus scaling parameter, and the
//! Magnus term extractor built on them.
//!
//! Scaling a measure's density by `t` makes `log Lexp(t·φ)` analytic near 0;
//! the Magnus terms `μ_k(φ)` are its Taylor coefficients. Segment
//! exponentials have an explicit series (powers of a degree-1 matrix
//! polynomial with factorial decay), so the extraction is exact at any
//! truncation order.

use crate::mat2::{Mat2, I_TILDE, ID};
use crate::measures::{MeasureSpec, Segment};
use crate::DomainError;

/// 2×2-matrix-valued polynomial in `t`, truncated at a fixed order:
/// `coeffs[k]` is the coefficient of `t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatSeries {
    pub coeffs: Vec<Mat2>,
}

impl MatSeries {
    /// Series `0` with `order + 1` coefficients.
    pub fn zero(order: usize) -> Self {
        MatSeries { coeffs: vec![Mat2::zero(); order + 1] }
    }

    /// Series `Id`.
    pub fn identity(order: usize) -> Self {
        let mut s = MatSeries::zero(order);
        s.coeffs[0] = ID;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Mat2 {
        self.coeffs.get(k).copied().unwrap_or_else(Mat2::zero)
    }

    /// Largest coefficient norm; the truncation gauge.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.op_norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &MatSeries) -> MatSeries {
        let order = self.order().max(other.order());
        let mut out = MatSeries::zero(order);
        for k in 0..=order {
            out.coeffs[k] = self.coeff(k) + other.coeff(k);
        }
        out
    }

    pub fn scale(&self, s: f64) -> MatSeries {
        MatSeries { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() }
    }

    /// Truncated product (coefficient convolution, O(K²)).
    pub fn mul(&self, other: &MatSeries) -> MatSeries {
        let order = self.order().max(other.order());
        let mut out = MatSeries::zero(order);
        for i in 0..=self.order().min(order) {
            for j in 0..=order - i {
                out.coeffs[i + j] = out.coeffs[i + j] + self.coeff(i) * other.coeff(j);
            }
        }
        out
    }

    /// Multiply every coefficient by a constant matrix on the left.
    pub fn lmul_mat(&self, m: &Mat2) -> MatSeries {
        MatSeries { coeffs: self.coeffs.iter().map(|c| *m * *c).collect() }
    }

    /// ... and on the right.
    pub fn rmul_mat(&self, m: &Mat2) -> MatSeries {
        MatSeries { coeffs: self.coeffs.iter().map(|c| *c * *m).collect() }
    }

    /// Evaluate at scalar `t` (Horner).
    pub fn eval(&self, t: f64) -> Mat2 {
        let mut acc = Mat2::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(t) + *c;
        }
        acc
    }

    /// `log` of a series with constant term `Id`: `Σ (−1)^{j+1}(S−Id)^j/j`,
    /// exact at the truncation order because `S − Id` has no constant term.
    pub fn log(&self) -> MatSeries {
        let order = self.order();
        let mut d = self.clone();
        d.coeffs[0] = d.coeffs[0] - ID;
        let mut power = d.clone();
        let mut acc = MatSeries::zero(order);
        for j in 1..=order {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            acc = acc.add(&power.scale(sign / j as f64));
            if j < order {
                power = power.mul(&d);
            }
        }
        acc
    }
}

/// Series of `exp(A + t·B)` truncated at `order`: powers of the degree-1
/// polynomial accumulate with factorial decay; summation stops once the
/// added term's largest coefficient drops below 1e−18 of the running scale.
fn exp_linear_series(a: &Mat2, b: &Mat2, order: usize) -> MatSeries {
    let mut m = MatSeries::zero(order.max(1));
    m.coeffs[0] = *a;
    m.coeffs[1] = *b;
    let mut term = MatSeries::identity(order);
    let mut acc = MatSeries::identity(order);
    let mut k = 1usize;
    loop {
        term = term.mul(&m).scale(1.0 / k as f64);
        acc = acc.add(&term);
        let scale = acc.max_norm().max(1.0);
        if term.max_norm() < 1e-18 * scale && k > order {
            break;
        }
        k += 1;
        if k > 4000 {
            break;
        }
    }
    acc
}

/// Series in the scaling parameter of `Lexp(t·φ)`; constant term `Id`.
///
/// Each segment contributes
/// `R(f·L+φ₀) · exp(−f·L·Ĩ + t·L·(F + drift)) · R(−φ₀)`; segment series
/// multiply in time order (later on the left).
pub fn lexp_series(measure: &MeasureSpec, order: usize) -> MatSeries {
    let mut acc = MatSeries::identity(order);
    for seg in &measure.segments {
        let seg_series = match seg {
            Segment::Constant { matrix, length } => {
                exp_linear_series(&Mat2::zero(), &matrix.scale(*length), order)
            }
            Segment::Rotating { frame, frequency, phase, drift, length } => {
                let a = I_TILDE.scale(-frequency * length);
                let b = (*frame + ID.scale(drift.0) + I_TILDE.scale(drift.1)).scale(*length);
                let core = exp_linear_series(&a, &b, order);
                core.lmul_mat(&Mat2::rotation(frequency * length + phase))
                    .rmul_mat(&Mat2::rotation(-phase))
            }
        };
        acc = seg_series.mul(&acc);
    }
    acc
}

/// Magnus terms `μ_1 … μ_K` of the measure: Taylor coefficients of
/// `log Lexp(t·φ)` at `t = 0`.
pub fn magnus_terms(measure: &MeasureSpec, order: usize) -> Vec<Mat2> {
    let series = lexp_series(measure, order);
    let log = series.log();
    log.coeffs[1..].to_vec()
}

/// Root-test estimate `1/limsup ‖μ_k‖^{1/k}` from a linear fit of
/// `log ‖μ_k‖` against `k` over the last half of the terms; `∞` when the
/// tail has underflowed to rounding noise (e.g. constant densities, whose
/// higher terms vanish).
pub fn radius_estimate(terms: &[Mat2]) -> Result<f64, DomainError> {
    if terms.len() < 8 {
        return Err(DomainError::new(format!(
            "radius estimate needs at least 8 terms, got {}",
            terms.len()
        )));
    }
    let norms: Vec<f64> = terms.iter().map(|m| m.op_norm()).collect();
    let peak = norms.iter().fold(0.0f64, |a, &b| a.max(b));
    let floor = 1e-13 * peak.max(1.0);
    let start = terms.len() / 2;
    let tail: Vec<(f64, f64)> = (start..terms.len())
        .filter(|&k| norms[k] > floor)
        .map(|k| ((k + 1) as f64, norms[k].ln()))
        .collect();
    if tail.len() < 2 {
        return Ok(f64::INFINITY);
    }
    let n = tail.len() as f64;
    let mean_k = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = tail.iter().map(|p| (p.0 - mean_k) * (p.1 - mean_y)).sum();
    let var: f64 = tail.iter().map(|p| (p.0 - mean_k) * (p.0 - mean_k)).sum();
    let slope = cov / var;
    Ok((-slope).exp())
}

/// The term growth bound `π^{−k+1}·2√(e·k)·p^k` (`p` the cumulative norm).
pub fn term_bound(k: usize, total_variation: f64) -> f64 {
    let k_f = k as f64;
    std::f64::consts::PI.powi(1 - k as i32)
        * 2.0
        * (std::f64::consts::E * k_f).sqrt()
        * total_variation.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::developments::{gallery, moan_measure, skew_loxodromic_measure, w_dev};
    use crate::mat2::{J_TILDE, K_TILDE};
    use crate::matlog::{exp2, log2};
    use crate::measures::Segment;
    use std::f64::consts::PI;

    fn mat_close(x: &Mat2, y: &Mat2, tol: f64) -> bool {
        (*x - *y).max_abs() <= tol
    }

    /// Closed binomial form of the critical-family terms:
    /// `μ_n(Φ) = π·c_{⌊n/2⌋}·(Ĩ if n even, −K̃ if n odd)`, `n ≥ 2`,
    /// with `c_m = (2m)!/(4^m (m!)²)`.
    fn moan_term_closed(n: usize) -> Mat2 {
        if n == 1 {
            return Mat2::zero();
        }
        let m = n / 2;
        let mut c = 1.0f64;
        for j in 1..=m {
            c *= (2.0 * j as f64 - 1.0) / (2.0 * j as f64);
        }
        let dir = if n % 2 == 0 { I_TILDE } else { -K_TILDE };
        dir.scale(PI * c)
    }

    #[test]
    fn constant_segment_series_is_exponential() {
        let m = Mat2::new(0.3, -0.2, 0.5, 0.1);
        let measure = MeasureSpec::new(vec![Segment::Constant { matrix: m, length: 1.25 }]);
        let series = lexp_series(&measure, 6);
        let mut power = ID;
        let mut factorial = 1.0;
        for k in 0..=6 {
            assert!(mat_close(&series.coeff(k), &power.scale(1.0 / factorial), 1e-13), "k={k}");
            power = power * m.scale(1.25);
            factorial *= (k + 1) as f64;
        }
        assert_eq!(lexp_series(&MeasureSpec::empty(), 4), MatSeries::identity(4));
    }

    #[test]
    fn series_eval_matches_scaled_lexp() {
        // Φ at t = 0.1: the order-6 series reproduces W(0.1π, π) to 1e−9
        let phi = moan_measure(PI);
        let series = lexp_series(&phi, 6);
        let got = series.eval(0.1);
        let expected = w_dev(0.1 * PI, PI);
        assert!(mat_close(&got, &expected, 1e-9));
    }

    #[test]
    fn moan_terms_match_binomial_form() {
        let terms = magnus_terms(&moan_measure(PI), 12);
        assert!(terms[0].max_abs() < 1e-12, "mu_1 = 0");
        assert!(mat_close(&terms[1], &I_TILDE.scale(PI / 2.0), 1e-10));
        assert!(mat_close(&terms[2], &K_TILDE.scale(-PI / 2.0), 1e-10));
        for n in 2..=12 {
            assert!(
                mat_close(&terms[n - 1], &moan_term_closed(n), 1e-10),
                "n={n}: {:?} vs {:?}",
                terms[n - 1],
                moan_term_closed(n)
            );
        }
    }

    #[test]
    fn constant_measure_terms_vanish_beyond_first() {
        let m = J_TILDE.scale(0.8);
        let measure = MeasureSpec::new(vec![Segment::Constant { matrix: m, length: 1.0 }]);
        let terms = magnus_terms(&measure, 10);
        assert!(mat_close(&terms[0], &m, 1e-13));
        for k in 2..=10 {
            assert!(terms[k - 1].op_norm() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn loxodromic_terms_sum_to_bch_log() {
        let ups = skew_loxodromic_measure(0.3, 0.3);
        let terms = magnus_terms(&ups, 8);
        let sum = terms.iter().fold(Mat2::zero(), |a, &b| a + b);
        let oracle = log2(&(exp2(&I_TILDE.scale(0.3)) * exp2(&J_TILDE.scale(0.3)))).unwrap();
        assert!(mat_close(&sum, &oracle, 1e-10));
    }

    #[test]
    fn partial_sums_reproduce_log_on_gallery() {
        for (name, measure) in gallery() {
            for t in [0.1, 0.3, 0.5] {
                let terms = magnus_terms(&measure, 40);
                let mut sum = Mat2::zero();
                let mut tk = 1.0;
                for term in &terms {
                    tk *= t;
                    sum = sum + term.scale(tk);
                }
                let oracle = log2(&measure.scale(t).lexp()).unwrap();
                assert!(
                    (sum - oracle).max_abs() < 1e-8,
                    "{name} t={t}: gap {}",
                    (sum - oracle).max_abs()
                );
            }
        }
    }

    #[test]
    fn term_bound_on_gallery() {
        for (name, measure) in gallery() {
            let tv = measure.total_variation();
            let terms = magnus_terms(&measure, 20);
            for (i, term) in terms.iter().enumerate() {
                let k = i + 1;
                let bound = 1.05 * term_bound(k, tv);
                assert!(
                    term.op_norm() <= bound,
                    "{name} k={k}: {} > {bound}",
                    term.op_norm()
                );
            }
        }
    }

    #[test]
    fn radius_estimates() {
        // critical family: radius exactly 1 from the binomial decay
        let terms = magnus_terms(&moan_measure(PI), 64);
        let r = radius_estimate(&terms).unwrap();
        assert!((r - 1.0).abs() < 0.05, "critical radius {r}");
        // constant density: infinite radius
        let m = MeasureSpec::new(vec![Segment::Constant { matrix: K_TILDE, length: 1.0 }]);
        let r = radius_estimate(&magnus_terms(&m, 16)).unwrap();
        assert!(r.is_infinite());
        // divergent skew-loxodromic composition at cumulative norm > π
        let terms = magnus_terms(&skew_loxodromic_measure(0.5, PI), 64);
        let r = radius_estimate(&terms).unwrap();
        assert!(r < 1.0, "skewloxdiv radius {r}");
        assert!(radius_estimate(&terms[..7]).is_err());
    }

    #[test]
    fn moan_tail_norm_law() {
        // ‖μ_n‖·√(n/2π) → 1; at n = 200, via the closed form
        let n = 200;
        let norm = moan_term_closed(n).op_norm();
        let scaled = norm * (n as f64 / (2.0 * PI)).sqrt();
        assert!((scaled - 1.0).abs() < 0.1, "scaled {scaled}");
    }
}
