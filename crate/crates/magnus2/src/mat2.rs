//! Real 2×2 matrix algebra with exact norm formulas.
//!
//! The skew-quaternionic coordinates (`Id`, `Ĩ`, `J̃`, `K̃` basis) turn the
//! operator norm, the signed co-norm and the chirality of a real 2×2 matrix
//! into closed-form expressions; those formulas are the workhorse of every
//! other module.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Real 2×2 matrix, row-major entries `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Identity.
pub const ID: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
/// Rotation generator `Ĩ = [[0, -1], [1, 0]]` (multiplication by i).
pub const I_TILDE: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);
/// Reflection `J̃ = [[1, 0], [0, -1]]`.
pub const J_TILDE: Mat2 = Mat2::new(1.0, 0.0, 0.0, -1.0);
/// Swap `K̃ = [[0, 1], [1, 0]]`.
pub const K_TILDE: Mat2 = Mat2::new(0.0, 1.0, 1.0, 0.0);

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn zero() -> Self {
        Mat2::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn diag(x: f64, y: f64) -> Self {
        Mat2::new(x, 0.0, 0.0, y)
    }

    /// Rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Skew-quaternionic coordinates `(ã, b̃, c̃, d̃)` with
    /// `A = ã·Id + b̃·Ĩ + c̃·J̃ + d̃·K̃`.
    pub fn quaternionic(&self) -> (f64, f64, f64, f64) {
        (
            (self.a + self.d) / 2.0,
            (self.c - self.b) / 2.0,
            (self.a - self.d) / 2.0,
            (self.b + self.c) / 2.0,
        )
    }

    /// Inverse of [`Mat2::quaternionic`]; round-trips exactly.
    pub fn from_quaternionic(qa: f64, qb: f64, qc: f64, qd: f64) -> Self {
        Mat2::new(qa + qc, qd - qb, qd + qb, qa - qc)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    pub fn scale(&self, s: f64) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Max-abs entry; cheap size gauge for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// Operator sup-norm (largest singular value), in closed form:
    /// `(√((a+d)²+(c−b)²) + √((a−d)²+(b+c)²)) / 2`.
    pub fn op_norm(&self) -> f64 {
        let (qa, qb, qc, qd) = self.quaternionic();
        qa.hypot(qb) + qc.hypot(qd)
    }

    /// Signed co-norm `⌊A⌋₂ = sgn(det A)·(smallest singular value)`.
    ///
    /// Evaluated as `2·det / (√((a+d)²+(c−b)²) + √((a−d)²+(b+c)²))`, which is
    /// algebraically the closed-form difference of the two square roots but
    /// does not cancel for near-singular matrices.
    pub fn signed_conorm(&self) -> f64 {
        let det = self.det();
        if det.abs() < 1e-300 {
            return 0.0;
        }
        let (qa, qb, qc, qd) = self.quaternionic();
        // op_norm · conorm = det, so dividing avoids the cancelling difference
        // of the two radicals for near-singular input
        let denom = qa.hypot(qb) + qc.hypot(qd);
        if denom == 0.0 {
            return 0.0;
        }
        det / denom
    }

    /// Sign of the twisted trace `c − b`; +1 counter-clockwise chirality,
    /// −1 clockwise, 0 symmetric. Rotation-invariant, flips under reflection.
    pub fn chirality(&self) -> i8 {
        let t = self.c - self.b;
        if t > 0.0 {
            1
        } else if t < 0.0 {
            -1
        } else {
            0
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Error for the metric quotient of vectors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuotientError {
    #[error("weighted quotient undefined for x = 0")]
    ZeroVector,
}

/// Metric quotient `y : x` of two plane vectors: real part is the projection
/// coefficient `⟨y,x⟩/|x|²`, imaginary part the norm of the orthogonal
/// remainder of `y/|x|` (never negative). Satisfies `|y:x| = |y|/|x|` exactly.
pub fn weighted_quotient(y: [f64; 2], x: [f64; 2]) -> Result<Complex64, QuotientError> {
    let xx = x[0] * x[0] + x[1] * x[1];
    if xx == 0.0 {
        return Err(QuotientError::ZeroVector);
    }
    let yx = y[0] * x[0] + y[1] * x[1];
    let yy = y[0] * y[0] + y[1] * y[1];
    let re = yx / xx;
    // |y|²|x|² − ⟨y,x⟩² clamped at 0: rounding can push it barely negative
    let rad = (yy * xx - yx * yx).max(0.0);
    Ok(Complex64::new(re, rad.sqrt() / xx))
}

/// Complex 2×2 matrix; only the norm formulas are needed (envelope tracing of
/// complex conformal ranges).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl CMat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        CMat2 { a, b, c, d }
    }

    pub fn from_real(m: &Mat2) -> Self {
        CMat2 {
            a: Complex64::new(m.a, 0.0),
            b: Complex64::new(m.b, 0.0),
            c: Complex64::new(m.c, 0.0),
            d: Complex64::new(m.d, 0.0),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `tr(A*A) = Σ |entries|²`.
    pub fn gram_trace(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    /// Largest singular value: `(√(T + 2|det|) + √(T − 2|det|)) / 2` with
    /// `T = tr(A*A)`.
    pub fn op_norm(&self) -> f64 {
        let t = self.gram_trace();
        let d2 = 2.0 * self.det().norm();
        ((t + d2).sqrt() + (t - d2).max(0.0).sqrt()) / 2.0
    }

    /// Smallest singular value, in the cancellation-free form
    /// `2|det| / (√(T + 2|det|) + √(T − 2|det|))`.
    pub fn co_norm(&self) -> f64 {
        let t = self.gram_trace();
        let d2 = 2.0 * self.det().norm();
        let denom = (t + d2).sqrt() + (t - d2).max(0.0).sqrt();
        if denom == 0.0 {
            0.0
        } else {
            2.0 * self.det().norm() / denom
        }
    }

    /// `A − λ·Id` for real `λ`.
    pub fn shift(&self, lambda: f64) -> CMat2 {
        CMat2 {
            a: self.a - lambda,
            b: self.b,
            c: self.c,
            d: self.d - lambda,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn quaternionic_round_trip_exact() {
        let m = Mat2::new(1.25, -3.5, 0.75, 2.0);
        let (qa, qb, qc, qd) = m.quaternionic();
        assert_eq!(Mat2::from_quaternionic(qa, qb, qc, qd), m);
    }

    #[test]
    fn op_norm_examples() {
        assert_eq!(ID.op_norm(), 1.0);
        assert_eq!(J_TILDE.op_norm(), 1.0);
        let m = Mat2::new(1.0, 2.0, 3.0, 4.0);
        let expected = (26f64.sqrt() + 34f64.sqrt()) / 2.0;
        assert!(close(m.op_norm(), expected, 1e-14));
    }

    #[test]
    fn signed_conorm_examples() {
        assert_eq!(ID.signed_conorm(), 1.0);
        assert!(close(J_TILDE.signed_conorm(), -1.0, 1e-15));
        let m = Mat2::new(1.0, 2.0, 3.0, 4.0);
        let expected = (26f64.sqrt() - 34f64.sqrt()) / 2.0;
        assert!(close(m.signed_conorm(), expected, 1e-14));
        assert_eq!(Mat2::new(1.0, 2.0, 2.0, 4.0).signed_conorm(), 0.0);
    }

    #[test]
    fn chirality_examples() {
        assert_eq!(I_TILDE.chirality(), 1);
        assert_eq!(J_TILDE.chirality(), 0);
        // conjugation by the reflection J̃ flips chirality
        let refl = J_TILDE * I_TILDE * J_TILDE;
        assert_eq!(refl.chirality(), -1);
    }

    #[test]
    fn weighted_quotient_examples() {
        let z = weighted_quotient([2.0, 1.0], [2.0, 1.0]).unwrap();
        assert!(close(z.re, 1.0, 1e-15) && close(z.im, 0.0, 1e-15));
        let z = weighted_quotient([-1.0, 2.0], [2.0, 1.0]).unwrap();
        assert!(close(z.re, 0.0, 1e-15) && close(z.im, 1.0, 1e-15));
        let z = weighted_quotient([3.0, 4.0], [1.0, 0.0]).unwrap();
        assert!(close(z.re, 3.0, 1e-15) && close(z.im, 4.0, 1e-15));
        assert_eq!(
            weighted_quotient([1.0, 1.0], [0.0, 0.0]),
            Err(QuotientError::ZeroVector)
        );
    }

    #[test]
    fn complex_norm_examples() {
        let id = CMat2::from_real(&ID);
        assert!(close(id.op_norm(), 1.0, 1e-15));
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // S_{π/2} = [[0,0],[0,i]] is rank one with a unit column
        let s = CMat2::new(zero, zero, zero, i);
        assert!(close(s.op_norm(), 1.0, 1e-15));
        assert_eq!(s.co_norm(), 0.0);
        // [[1,i],[0,1]]: T = 3, |det| = 1 → (√5+1)/2
        let m = CMat2::new(one, i, zero, one);
        assert!(close(m.op_norm(), (5f64.sqrt() + 1.0) / 2.0, 1e-14));
        assert!(close(m.co_norm(), (5f64.sqrt() - 1.0) / 2.0, 1e-14));
    }

    #[test]
    fn quotient_modulus_identity() {
        // |y:x| = |y|/|x| holds to rounding for awkward magnitudes too
        let pairs = [
            ([3e8, -4e8], [1e-4, 2e-4]),
            ([1.0, 1e-12], [1e6, -1e6]),
            ([-2.5, 7.125], [0.5, 0.25]),
        ];
        for (y, x) in pairs {
            let z = weighted_quotient(y, x).unwrap();
            let ratio = y[0].hypot(y[1]) / x[0].hypot(x[1]);
            assert!((z.norm() - ratio).abs() <= 1e-12 * ratio);
        }
    }
}
