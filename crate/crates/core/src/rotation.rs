//! Interval 3-coloring of the irrational rotation graph.
//!
//! The graph lives on `[0,1)` with `x` adjacent to `x ± α (mod 1)` for a
//! fixed irrational `α`. Chopping the interval into the rungs
//! `[kα, (k+1)α)` almost 2-colors it by rung parity; the leftover piece at
//! the top wraps onto rung 0 and forces a third label. With `m = ⌊1/α⌋`
//! rungs and the remainder `R = [mα, 1)`:
//!
//! * `m` even: rungs alternate labels 1,2 and `R` takes 3.
//! * `m` odd: the wrap would put two label-1 pieces side by side, so the
//!   last rung takes 3 and `R` takes 2.
//!
//! Every piece maps under `+α (mod 1)` into pieces of other labels, which
//! the orbit and grid oracles confirm.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problems::Label;

#[derive(Debug, Error, PartialEq)]
pub enum RotationError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    OutOfRange(f64),
    #[error("alpha is within {dist:.3e} of {p}/{q}; too close to rational")]
    TooCloseToRational { p: i64, q: i64, dist: f64 },
}

/// Piecewise-constant 3-label rule on `[0,1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationRule {
    /// The rotation step actually used; `α ↦ 1-α` normalization keeps it
    /// below 1/2 (both steps generate the same graph).
    pub alpha: f64,
    /// Number of full rungs `[kα, (k+1)α)`.
    pub rungs: u64,
}

/// Builds the 3-label interval rule for rotation by `alpha`.
///
/// Rejects values within `1e-4/q²` of a rational `p/q` with `q ≤ 10^6`
/// (tested along the continued-fraction convergents); quadratic
/// irrationals clear that margin comfortably.
pub fn rotation_coloring(alpha: f64) -> Result<RotationRule, RotationError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(RotationError::OutOfRange(alpha));
    }
    reject_near_rationals(alpha)?;
    let alpha = if alpha > 0.5 { 1.0 - alpha } else { alpha };
    let rungs = (1.0 / alpha).floor() as u64;
    Ok(RotationRule { alpha, rungs })
}

fn reject_near_rationals(alpha: f64) -> Result<(), RotationError> {
    const Q_MAX: i64 = 1_000_000;
    const EPS: f64 = 1e-4;
    // Continued-fraction convergents p/q of alpha with q ≤ Q_MAX, from
    // the standard recurrence seeded with h(-2)/k(-2) = 0/1 and
    // h(-1)/k(-1) = 1/0.
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = alpha;
    loop {
        let a = x.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as i64 * q1 + q0);
        if q2 > Q_MAX || q2 <= 0 {
            return Ok(());
        }
        let dist = (alpha - p2 as f64 / q2 as f64).abs();
        if dist <= EPS / (q2 as f64 * q2 as f64) {
            return Err(RotationError::TooCloseToRational { p: p2, q: q2, dist });
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a;
        if frac < f64::EPSILON {
            return Ok(());
        }
        x = 1.0 / frac;
    }
}

impl RotationRule {
    /// Label of a point of `[0,1)`.
    pub fn label(&self, x: f64) -> Label {
        debug_assert!((0.0..1.0).contains(&x));
        let k = ((x / self.alpha).floor() as u64).min(self.rungs);
        let m = self.rungs;
        if k == m {
            // Remainder [mα, 1).
            if m.is_multiple_of(2) {
                3
            } else {
                2
            }
        } else if !m.is_multiple_of(2) && k == m - 1 {
            3
        } else {
            1 + (k % 2) as Label
        }
    }

    /// The half-open intervals carrying each label, in order.
    pub fn class_intervals(&self, label: Label) -> Vec<(f64, f64)> {
        let m = self.rungs;
        let mut out = Vec::new();
        for k in 0..m {
            let piece_label = if !m.is_multiple_of(2) && k == m - 1 {
                3
            } else {
                1 + (k % 2) as Label
            };
            if piece_label == label {
                out.push((k as f64 * self.alpha, (k + 1) as f64 * self.alpha));
            }
        }
        let remainder_label = if m.is_multiple_of(2) { 3 } else { 2 };
        if remainder_label == label {
            out.push((m as f64 * self.alpha, 1.0));
        }
        out
    }
}

/// Finite piece of an orbit of the rotation: `x_k = x0 + kα (mod 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSegment {
    pub alpha: f64,
    pub x0: f64,
    pub len: usize,
}

impl OrbitSegment {
    pub fn new(alpha: f64, x0: f64, len: usize) -> Self {
        OrbitSegment { alpha, x0, len }
    }

    pub fn point(&self, k: usize) -> f64 {
        (self.x0 + k as f64 * self.alpha).rem_euclid(1.0)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.point(k))
    }
}

/// Two consecutive orbit points that received the same label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationViolation {
    pub step: usize,
    pub x: f64,
    pub y: f64,
    pub label: Label,
}

/// Walks the orbit and reports every adjacent pair with equal labels.
pub fn check_rotation(rule: &RotationRule, orbit: &OrbitSegment) -> Vec<RotationViolation> {
    let mut out = Vec::new();
    let mut prev_point = orbit.point(0);
    let mut prev = rule.label(prev_point);
    for k in 1..orbit.len {
        let point = orbit.point(k);
        let label = rule.label(point);
        if label == prev {
            out.push(RotationViolation {
                step: k,
                x: prev_point,
                y: point,
                label,
            });
        }
        prev = label;
        prev_point = point;
    }
    out
}
