//! Matrix-valued measures on an interval: piecewise constant or
//! rotating-frame densities, total variation, and closed-form / numeric
//! time-ordered exponentials.
//!
//! Time order is "later acts on the left": `lexp` of a concatenation is the
//! product of the segment exponentials with the last segment leftmost, i.e.
//! the solution at the right endpoint of `A′ = φ·A`, `A(0) = Id`.

use crate::mat2::{Mat2, I_TILDE, ID};
use crate::matlog::exp2;
use crate::DomainError;
use serde::{Deserialize, Serialize};

/// One piece of a measure.
///
/// A `Rotating` segment has density
/// `R(f·θ + φ₀)·F·R(−(f·θ + φ₀)) + c_id·Id + c_I·Ĩ` at local `θ ∈ [0, L]`
/// (`R` = rotation); its operator norm does not depend on `θ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Constant {
        matrix: Mat2,
        length: f64,
    },
    Rotating {
        frame: Mat2,
        frequency: f64,
        phase: f64,
        /// `(c_id, c_I)` coefficients of the commuting drift.
        drift: (f64, f64),
        length: f64,
    },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match self {
            Segment::Constant { length, .. } | Segment::Rotating { length, .. } => *length,
        }
    }

    /// Density at local coordinate `theta` in `[0, length]`.
    pub fn density(&self, theta: f64) -> Mat2 {
        match self {
            Segment::Constant { matrix, .. } => *matrix,
            Segment::Rotating { frame, frequency, phase, drift, .. } => {
                let r = Mat2::rotation(frequency * theta + phase);
                r * *frame * r.transpose() + ID.scale(drift.0) + I_TILDE.scale(drift.1)
            }
        }
    }

    /// Pointwise operator norm of the density (θ-independent).
    pub fn density_norm(&self) -> f64 {
        match self {
            Segment::Constant { matrix, .. } => matrix.op_norm(),
            Segment::Rotating { frame, drift, .. } => {
                let (fa, fb, fc, fd) = frame.quaternionic();
                (fa + drift.0).hypot(fb + drift.1) + fc.hypot(fd)
            }
        }
    }

    /// Closed-form time-ordered exponential of the single segment.
    pub fn lexp(&self) -> Mat2 {
        match self {
            Segment::Constant { matrix, length } => exp2(&matrix.scale(*length)),
            Segment::Rotating { frame, frequency, phase, drift, length } => {
                let core = *frame + ID.scale(drift.0) + I_TILDE.scale(drift.1 - frequency);
                Mat2::rotation(frequency * length + phase)
                    * exp2(&core.scale(*length))
                    * Mat2::rotation(-phase)
            }
        }
    }

    /// `∫ tr` over the segment.
    pub fn trace_integral(&self) -> f64 {
        match self {
            Segment::Constant { matrix, length } => matrix.trace() * length,
            Segment::Rotating { frame, drift, length, .. } => {
                (frame.trace() + 2.0 * drift.0) * length
            }
        }
    }

    /// Scale the density (not the parametrization) by `t`.
    pub fn scaled(&self, t: f64) -> Segment {
        match self {
            Segment::Constant { matrix, length } => Segment::Constant {
                matrix: matrix.scale(t),
                length: *length,
            },
            Segment::Rotating { frame, frequency, phase, drift, length } => Segment::Rotating {
                frame: frame.scale(t),
                frequency: *frequency,
                phase: *phase,
                drift: (drift.0 * t, drift.1 * t),
                length: *length,
            },
        }
    }

    /// Split at local coordinate `x`; the suffix of a rotating segment keeps
    /// the running frame angle via `φ₀ + f·x`.
    fn split_at(&self, x: f64) -> (Segment, Segment) {
        match self {
            Segment::Constant { matrix, length } => (
                Segment::Constant { matrix: *matrix, length: x },
                Segment::Constant { matrix: *matrix, length: length - x },
            ),
            Segment::Rotating { frame, frequency, phase, drift, length } => (
                Segment::Rotating {
                    frame: *frame,
                    frequency: *frequency,
                    phase: *phase,
                    drift: *drift,
                    length: x,
                },
                Segment::Rotating {
                    frame: *frame,
                    frequency: *frequency,
                    phase: phase + frequency * x,
                    drift: *drift,
                    length: length - x,
                },
            ),
        }
    }

    /// Time-reversed segment: density at local `θ` equals the original
    /// density at `L − θ`.
    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Constant { .. } => self.clone(),
            Segment::Rotating { frame, frequency, phase, drift, length } => Segment::Rotating {
                frame: *frame,
                frequency: -frequency,
                phase: phase + frequency * length,
                drift: *drift,
                length: *length,
            },
        }
    }
}

/// A finite sequence of segments, in time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasureSpec {
    pub segments: Vec<Segment>,
}

impl MeasureSpec {
    pub fn new(segments: Vec<Segment>) -> Self {
        MeasureSpec { segments }
    }

    pub fn empty() -> Self {
        MeasureSpec { segments: Vec::new() }
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length()).sum()
    }

    /// Cumulative norm `∫‖φ‖₂`.
    pub fn total_variation(&self) -> f64 {
        self.segments.iter().map(|s| s.length() * s.density_norm()).sum()
    }

    /// `∫ tr φ` (for the determinant identity `det Lexp = exp ∫tr`).
    pub fn trace_integral(&self) -> f64 {
        self.segments.iter().map(|s| s.trace_integral()).sum()
    }

    /// Closed-form left-ordered exponential: segment factors multiply with
    /// later segments on the left.
    pub fn lexp(&self) -> Mat2 {
        let mut acc = ID;
        for seg in &self.segments {
            acc = seg.lexp() * acc;
        }
        acc
    }

    /// Product-integration oracle: midpoint density sampling with `steps`
    /// exponential steps per segment; O(steps⁻²) error, exact on constant
    /// segments of commuting densities.
    pub fn lexp_numeric(&self, steps: usize) -> Mat2 {
        let steps = steps.max(1);
        let mut acc = ID;
        for seg in &self.segments {
            let h = seg.length() / steps as f64;
            for k in 0..steps {
                let theta = (k as f64 + 0.5) * h;
                acc = exp2(&seg.density(theta).scale(h)) * acc;
            }
        }
        acc
    }

    /// Prefix measure `φ|_{[0, x]}`.
    pub fn restrict(&self, x: f64) -> Result<MeasureSpec, DomainError> {
        Ok(self.split(x)?.0)
    }

    /// Split into prefix `[0, x]` and suffix `[x, total]`.
    pub fn split(&self, x: f64) -> Result<(MeasureSpec, MeasureSpec), DomainError> {
        let total = self.total_length();
        if !(-1e-12..=total + 1e-12).contains(&x) {
            return Err(DomainError::new(format!(
                "split point {x} outside [0, {total}]"
            )));
        }
        let x = x.clamp(0.0, total);
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        let mut consumed = 0.0;
        for seg in &self.segments {
            let len = seg.length();
            if consumed + len <= x + 1e-15 {
                prefix.push(seg.clone());
            } else if consumed >= x - 1e-15 {
                suffix.push(seg.clone());
            } else {
                let (head, tail) = seg.split_at(x - consumed);
                if head.length() > 0.0 {
                    prefix.push(head);
                }
                if tail.length() > 0.0 {
                    suffix.push(tail);
                }
            }
            consumed += len;
        }
        Ok((MeasureSpec::new(prefix), MeasureSpec::new(suffix)))
    }

    /// Time-reversed measure; `Rexp(φ) = Lexp(reverse φ)`.
    pub fn reverse(&self) -> MeasureSpec {
        MeasureSpec::new(self.segments.iter().rev().map(|s| s.reversed()).collect())
    }

    /// Density scaled by `t` throughout (the Magnus scaling parameter).
    pub fn scale(&self, t: f64) -> MeasureSpec {
        MeasureSpec::new(self.segments.iter().map(|s| s.scaled(t)).collect())
    }

    pub fn from_json_str(text: &str) -> Result<MeasureSpec, DomainError> {
        let file: MeasureFile = serde_json::from_str(text)
            .map_err(|e| DomainError::new(format!("bad measure file: {e}")))?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        let file: MeasureFile = self.into();
        serde_json::to_string_pretty(&file).expect("measure serialization")
    }
}

// --- file format ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    segments: Vec<SegmentFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SegmentFile {
    Constant {
        matrix: [[f64; 2]; 2],
        length: f64,
    },
    Rotating {
        frame: [[f64; 2]; 2],
        frequency: f64,
        phase: f64,
        drift: [f64; 2],
        length: f64,
    },
}

fn mat_from_rows(rows: [[f64; 2]; 2]) -> Mat2 {
    Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
}

fn rows_from_mat(m: &Mat2) -> [[f64; 2]; 2] {
    [[m.a, m.b], [m.c, m.d]]
}

impl TryFrom<MeasureFile> for MeasureSpec {
    type Error = DomainError;
    fn try_from(file: MeasureFile) -> Result<Self, DomainError> {
        let mut segments = Vec::with_capacity(file.segments.len());
        for seg in file.segments {
            let s = match seg {
                SegmentFile::Constant { matrix, length } => Segment::Constant {
                    matrix: mat_from_rows(matrix),
                    length,
                },
                SegmentFile::Rotating { frame, frequency, phase, drift, length } => {
                    Segment::Rotating {
                        frame: mat_from_rows(frame),
                        frequency,
                        phase,
                        drift: (drift[0], drift[1]),
                        length,
                    }
                }
            };
            if !(s.length() > 0.0) {
                return Err(DomainError::new("segment length must be positive"));
            }
            segments.push(s);
        }
        Ok(MeasureSpec::new(segments))
    }
}

impl From<&MeasureSpec> for MeasureFile {
    fn from(m: &MeasureSpec) -> Self {
        MeasureFile {
            segments: m
                .segments
                .iter()
                .map(|seg| match seg {
                    Segment::Constant { matrix, length } => SegmentFile::Constant {
                        matrix: rows_from_mat(matrix),
                        length: *length,
                    },
                    Segment::Rotating { frame, frequency, phase, drift, length } => {
                        SegmentFile::Rotating {
                            frame: rows_from_mat(frame),
                            frequency: *frequency,
                            phase: *phase,
                            drift: [drift.0, drift.1],
                            length: *length,
                        }
                    }
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::developments::{moan_measure, skew_loxodromic_measure, w_dev};
    use crate::mat2::{I_TILDE, J_TILDE, K_TILDE};
    use std::f64::consts::PI;

    fn mat_close(x: &Mat2, y: &Mat2, tol: f64) -> bool {
        (*x - *y).max_abs() <= tol
    }

    #[test]
    fn total_variation_examples() {
        assert!((moan_measure(PI).total_variation() - PI).abs() < 1e-13);
        let ups = skew_loxodromic_measure(0.7, 1.1);
        assert!((ups.total_variation() - 1.8).abs() < 1e-13);
        // elliptic development measure keeps unit density norm for every h
        for h in [0.0, 0.3, 1.0] {
            let m = crate::developments::elliptic_measure(h, 2.0);
            assert!((m.total_variation() - 2.0).abs() < 1e-13, "h={h}");
        }
    }

    #[test]
    fn lexp_examples() {
        // Lexp(Φ|[0,π]) = W(π,π) = [[-1,-2π],[0,-1]]
        let w = moan_measure(PI).lexp();
        assert!(mat_close(&w, &Mat2::new(-1.0, -2.0 * PI, 0.0, -1.0), 1e-12));
        assert_eq!(MeasureSpec::empty().lexp(), ID);
        // Υ_{α,β}: exp(βĨ)·exp(αJ̃)
        let (alpha, beta) = (0.6, 0.9);
        let got = skew_loxodromic_measure(alpha, beta).lexp();
        let expected = exp2(&I_TILDE.scale(beta)) * exp2(&J_TILDE.scale(alpha));
        assert!(mat_close(&got, &expected, 1e-13));
    }

    #[test]
    fn lexp_numeric_spot() {
        // constant commuting segment: exact at any step count
        let m = MeasureSpec::new(vec![Segment::Constant {
            matrix: K_TILDE.scale(0.8),
            length: 1.5,
        }]);
        assert!(mat_close(&m.lexp_numeric(3), &m.lexp(), 1e-13));
        // elliptic gallery vs closed form at 2^14 steps
        let psi = crate::developments::elliptic_measure(0.5, 2.0);
        let num = psi.lexp_numeric(1 << 14);
        let closed = crate::developments::e_dev(2.0, 1.0);
        assert!(mat_close(&num, &closed, 1e-8));
    }

    #[test]
    fn lexp_numeric_second_order() {
        // error vs closed form shrinks ~4x per step doubling
        let phi = moan_measure(PI);
        let exact = phi.lexp();
        let mut prev_err = f64::NAN;
        for k in [8usize, 9, 10, 11, 12] {
            let err = (phi.lexp_numeric(1 << k) - exact).max_abs();
            if !prev_err.is_nan() {
                let ratio = prev_err / err;
                assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio} at 2^{k}");
            }
            prev_err = err;
        }
    }

    #[test]
    fn restrict_examples() {
        let phi = moan_measure(PI);
        let half = phi.restrict(PI / 2.0).unwrap();
        assert!(mat_close(&half.lexp(), &w_dev(PI / 2.0, PI / 2.0), 1e-12));
        let nothing = phi.restrict(0.0).unwrap();
        assert_eq!(nothing.lexp(), ID);
        assert!(phi.restrict(4.0).is_err());
    }

    #[test]
    fn cocycle_property() {
        let phi = skew_loxodromic_measure(0.8, 1.2);
        let (x1, x2) = (0.5, 1.6);
        let prefix2 = phi.restrict(x2).unwrap();
        let prefix1 = phi.restrict(x1).unwrap();
        let mid = prefix2.split(x1).unwrap().1;
        let lhs = prefix2.lexp();
        let rhs = mid.lexp() * prefix1.lexp();
        assert!(mat_close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn split_rotating_keeps_phase() {
        let phi = moan_measure(PI);
        let (a, b) = phi.split(1.0).unwrap();
        // recombined lexp equals the whole
        assert!(mat_close(&(b.lexp() * a.lexp()), &phi.lexp(), 1e-12));
        // suffix densities agree with the original at matching global times
        let orig = &phi.segments[0];
        let suf = &b.segments[0];
        assert!(mat_close(&suf.density(0.3), &orig.density(1.3), 1e-14));
    }

    #[test]
    fn reverse_matches_rexp() {
        // Rexp = earlier factor leftmost: for two constant atoms X then Y,
        // Rexp = e^X e^Y = Lexp of the reversed order
        let x = J_TILDE.scale(0.4);
        let y = I_TILDE.scale(0.7);
        let phi = MeasureSpec::new(vec![
            Segment::Constant { matrix: x, length: 1.0 },
            Segment::Constant { matrix: y, length: 1.0 },
        ]);
        let rexp = exp2(&x) * exp2(&y);
        assert!(mat_close(&phi.reverse().lexp(), &rexp, 1e-13));
        // reversal preserves the density values pointwise (mirrored)
        let phi = moan_measure(2.0);
        let rev = phi.reverse();
        let d1 = phi.segments[0].density(0.4);
        let d2 = rev.segments[0].density(2.0 - 0.4);
        assert!(mat_close(&d1, &d2, 1e-13));
    }

    #[test]
    fn liouville_determinant() {
        for phi in [
            moan_measure(2.0),
            skew_loxodromic_measure(0.5, 0.5),
            crate::developments::elliptic_measure(0.5, 2.0),
        ] {
            let lhs = phi.lexp().det();
            let rhs = phi.trace_integral().exp();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn json_round_trip() {
        let phi = MeasureSpec::new(vec![
            Segment::Constant { matrix: Mat2::new(0.0, 1.0, -1.0, 0.5), length: 0.75 },
            Segment::Rotating {
                frame: K_TILDE,
                frequency: 1.0,
                phase: 0.25,
                drift: (0.1, -0.2),
                length: 2.0,
            },
        ]);
        let text = phi.to_json_string();
        let back = MeasureSpec::from_json_str(&text).unwrap();
        assert_eq!(phi, back);
    }

    #[test]
    fn json_matches_documented_format() {
        let text = r#"{"segments":[
            {"kind":"constant","matrix":[[0.0,1.0],[1.0,0.0]],"length":1.0},
            {"kind":"rotating","frame":[[0.0,1.0],[1.0,0.0]],"frequency":1.0,
             "phase":0.0,"drift":[0.0,0.0],"length":3.141592653589793}
        ]}"#;
        let m = MeasureSpec::from_json_str(text).unwrap();
        assert_eq!(m.segments.len(), 2);
        assert!((m.total_variation() - (1.0 + PI)).abs() < 1e-12);
        assert!(MeasureSpec::from_json_str("{\"segments\":[{\"kind\":\"constant\",\"matrix\":[[1,0],[0,1]],\"length\":0}]}").is_err());
    }
}
