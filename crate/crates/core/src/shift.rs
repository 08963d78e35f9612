//! Desk-scale model of label rules on bi-infinite 0/1 sequences.
//!
//! The vertices of interest are aperiodic subsets of ℤ, identified with
//! their characteristic sequences; the two neighbors of a sequence are its
//! shifts by ±1, so every component is a bi-infinite path. A rule assigns
//! a label to each position by inspecting a finite window of bits around
//! it, with the window allowed to grow adaptively from position to
//! position; each evaluation certifies the radius it actually used. A
//! sample materializes a finite range `[lo, hi]` of one sequence, so a
//! rule that keeps growing its window eventually runs out of data and
//! reports that explicitly instead of guessing.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::engine::{LocalAlgorithm, Mode};
use crate::graph::{ball, make_path};
use crate::problems::{Label, Labeling, LclProblem, Reason};
use crate::rng::vertex_stream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShiftError {
    #[error("position {0} outside the materialized range [{1}, {2}]")]
    OutOfRange(i64, i64, i64),
    #[error("window half-width must exceed the period bound ({w} vs {p_max})")]
    BadWidths { w: i64, p_max: usize },
    #[error("sequence has period {0} within the materialized range")]
    Periodic(usize),
    #[error("rejection budget exhausted after {0} attempts")]
    RejectionBudget(u64),
    #[error(
        "no distinguishing window within the materialized range near position {position} \
             (separation {separation}): sequence insufficiently aperiodic at this scale"
    )]
    WindowSearchExhausted { position: i64, separation: i64 },
    #[error("marker scan ran out of materialized range near position {0}")]
    MarkerScanExhausted(i64),
    #[error("segment around position {0} exceeds the simulation cap")]
    SegmentTooLong(i64),
    #[error("lifted rule: {0}")]
    Lifted(String),
}

/// Provenance of a materialized sequence sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Seeded { seed: u64, attempt: u64 },
    Explicit,
    Restriction,
}

/// A finite materialized range of a bi-infinite 0/1 sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSequence {
    lo: i64,
    bits: Vec<u8>,
    /// Largest `p` such that every period `1..=p` has been refuted within
    /// the range. `None` for restrictions that were never re-certified.
    certified_p_max: Option<usize>,
    provenance: Provenance,
}

impl BitSequence {
    /// Wraps explicit bits starting at `lo`, verifying aperiodicity up to
    /// `p_max` within the range.
    pub fn from_bits(lo: i64, bits: Vec<u8>, p_max: usize) -> Result<Self, ShiftError> {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        let seq = BitSequence {
            lo,
            bits,
            certified_p_max: Some(p_max),
            provenance: Provenance::Explicit,
        };
        if let Some(p) = seq.shortest_period_up_to(p_max) {
            return Err(ShiftError::Periodic(p));
        }
        Ok(seq)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.bits.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn certified_p_max(&self) -> Option<usize> {
        self.certified_p_max
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn bit(&self, pos: i64) -> Result<u8, ShiftError> {
        self.try_bit(pos)
            .ok_or(ShiftError::OutOfRange(pos, self.lo, self.hi()))
    }

    pub fn try_bit(&self, pos: i64) -> Option<u8> {
        if pos < self.lo || pos > self.hi() {
            None
        } else {
            Some(self.bits[(pos - self.lo) as usize])
        }
    }

    /// Smallest period `1..=p_max` that holds across the whole range, if any.
    fn shortest_period_up_to(&self, p_max: usize) -> Option<usize> {
        (1..=p_max).find(|&p| {
            p < self.bits.len()
                && (0..self.bits.len() - p).all(|i| self.bits[i] == self.bits[i + p])
        })
    }

    /// The sub-range `[lo, hi]` clamped to the materialized range. Used to
    /// replay a rule from exactly the bits it claims to have read.
    pub fn restrict(&self, lo: i64, hi: i64) -> BitSequence {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi()).max(lo - 1);
        let start = (lo - self.lo) as usize;
        let len = (hi - lo + 1).max(0) as usize;
        BitSequence {
            lo,
            bits: self.bits[start..start + len].to_vec(),
            certified_p_max: None,
            provenance: Provenance::Restriction,
        }
    }

    /// Serializes as a `lo p_max` header line followed by the 0/1 string.
    pub fn save(&self) -> String {
        let mut out = format!("{} {}\n", self.lo, self.certified_p_max.unwrap_or(0));
        out.extend(self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }));
        out.push('\n');
        out
    }

    pub fn load(text: &str) -> Result<Self, ShiftError> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let mut it = header.split_whitespace();
        let lo: i64 = it.next().and_then(|t| t.parse().ok()).unwrap_or(0);
        let p_max: usize = it.next().and_then(|t| t.parse().ok()).unwrap_or(0);
        let body = lines.next().unwrap_or_default();
        let bits: Vec<u8> = body.chars().map(|c| u8::from(c == '1')).collect();
        BitSequence::from_bits(lo, bits, p_max)
    }
}

/// Samples a uniform sequence on `[-w, w]` conditioned on having no period
/// up to `p_max`, by rejection. Rejection is astronomically rare for
/// `w ≥ 64`; the attempt budget turns the pathological case into an
/// explicit error.
pub fn sample_aperiodic(w: i64, p_max: usize, seed: u64) -> Result<BitSequence, ShiftError> {
    if w <= p_max as i64 || p_max == 0 {
        return Err(ShiftError::BadWidths { w, p_max });
    }
    const ATTEMPTS: u64 = 64;
    let len = (2 * w + 1) as usize;
    for attempt in 0..ATTEMPTS {
        let mut rng = vertex_stream(seed, attempt, 0x73686966);
        let bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=1u8)).collect();
        let seq = BitSequence {
            lo: -w,
            bits,
            certified_p_max: Some(p_max),
            provenance: Provenance::Seeded { seed, attempt },
        };
        if seq.shortest_period_up_to(p_max).is_none() {
            return Ok(seq);
        }
    }
    Err(ShiftError::RejectionBudget(ATTEMPTS))
}

/// Identifier for `position`, distinct from the identifiers of all other
/// positions within distance `separation`.
///
/// The window radius doubles until the `(2ρ+1)`-bit windows of all
/// positions in `[position-separation, position+separation]` are pairwise
/// distinct; the identifier is the window content at the final radius and
/// the reported read radius is `separation + ρ`. Identifiers computed at
/// different positions stay consistent: equal radii were checked against
/// each other, different radii give different lengths.
pub fn window_ids(
    seq: &BitSequence,
    position: i64,
    separation: i64,
) -> Result<(BitString, i64), ShiftError> {
    const RHO_CAP: i64 = 62; // windows must fit 125 bits
    let mut rho = 1i64;
    loop {
        if position - separation - rho < seq.lo() || position + separation + rho > seq.hi() {
            return Err(ShiftError::WindowSearchExhausted {
                position,
                separation,
            });
        }
        let window = |center: i64| -> u128 {
            let mut w = 0u128;
            for (idx, p) in (center - rho..=center + rho).enumerate() {
                w |= u128::from(seq.try_bit(p).expect("range checked")) << idx;
            }
            w
        };
        let own = window(position);
        let mut windows: Vec<u128> = (position - separation..=position + separation)
            .map(window)
            .collect();
        windows.sort_unstable();
        if windows.windows(2).all(|w| w[0] != w[1]) {
            let len = (2 * rho + 1) as usize;
            return Ok((BitString::from_value(own, len), separation + rho));
        }
        if rho == RHO_CAP {
            return Err(ShiftError::WindowSearchExhausted {
                position,
                separation,
            });
        }
        rho = (rho * 2).min(RHO_CAP);
    }
}

/// A label plus the read radius that certifies it: re-evaluating on the
/// sequence truncated to that radius must reproduce the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleOutput {
    pub label: Label,
    pub radius_used: i64,
}

/// A label rule on bi-infinite sequences with adaptive finite windows.
pub trait AdaptiveRule: Sync {
    fn name(&self) -> &str;
    fn alphabet(&self) -> Vec<Label>;
    fn eval(&self, seq: &BitSequence, position: i64) -> Result<RuleOutput, ShiftError>;
}

/// Replays the rule on the truncated sequence and confirms the label and
/// radius reproduce.
pub fn certify_locality(
    rule: &dyn AdaptiveRule,
    seq: &BitSequence,
    position: i64,
) -> Result<bool, ShiftError> {
    let out = rule.eval(seq, position)?;
    let restricted = seq.restrict(position - out.radius_used, position + out.radius_used);
    let replay = rule.eval(&restricted, position)?;
    Ok(replay == out)
}

/// The marker pattern: bifix-free, so occurrences never overlap and
/// consecutive markers sit at least `MARKER_LEN` apart.
const MARKER: [u8; 6] = [1, 0, 0, 0, 0, 0];
const MARKER_LEN: i64 = MARKER.len() as i64;

fn is_marker(seq: &BitSequence, p: i64) -> Result<bool, ShiftError> {
    for (i, &m) in MARKER.iter().enumerate() {
        if seq
            .bit(p + i as i64)
            .map_err(|_| ShiftError::MarkerScanExhausted(p))?
            != m
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nearest marker occurrence at or left of `pos`.
fn nearest_marker_left(seq: &BitSequence, pos: i64) -> Result<i64, ShiftError> {
    let mut a = pos;
    loop {
        if is_marker(seq, a)? {
            return Ok(a);
        }
        a -= 1;
    }
}

/// Proper 3-coloring of the shift line by marker segments.
///
/// Within the segment starting at a marker, positions alternate labels 1
/// and 2 by offset parity; the position directly before the next marker
/// takes label 3 when the alternation would collide with that marker's
/// label 1. Markers are at least 6 apart, so the patched positions are
/// never adjacent.
#[derive(Debug, Clone, Copy, Default)]
pub struct MarkerThreeColoring;

impl AdaptiveRule for MarkerThreeColoring {
    fn name(&self) -> &str {
        "marker-three-coloring"
    }

    fn alphabet(&self) -> Vec<Label> {
        vec![1, 2, 3]
    }

    fn eval(&self, seq: &BitSequence, position: i64) -> Result<RuleOutput, ShiftError> {
        let anchor = nearest_marker_left(seq, position)?;
        let offset = position - anchor;
        let next_is_anchor = is_marker(seq, position + 1)?;
        let label = if next_is_anchor && offset % 2 == 0 {
            3
        } else {
            1 + (offset % 2) as Label
        };
        Ok(RuleOutput {
            label,
            radius_used: offset.max(MARKER_LEN),
        })
    }
}

/// Label for one position of a sequence under the marker 3-coloring; the
/// full-rule object is [`MarkerThreeColoring`].
pub fn adaptive_three_coloring(seq: &BitSequence, position: i64) -> Result<RuleOutput, ShiftError> {
    MarkerThreeColoring.eval(seq, position)
}

/// Maximal independent set on the shift line, derandomized by window
/// identifiers.
///
/// Every position draws its identifier from [`window_ids`]; identifiers
/// of adjacent positions differ, so iterating "strict local maxima join,
/// their neighbors drop out" is well defined. A strict local maximum
/// joins in round one no matter what lies beyond it, so the dynamics
/// between two such peaks are fully determined by the enclosed segment;
/// the rule simulates exactly that segment.
#[derive(Debug, Clone, Copy, Default)]
pub struct WindowMisRule;

const MIS_SEPARATION: i64 = 2;
const MIS_SEGMENT_CAP: i64 = 512;

impl AdaptiveRule for WindowMisRule {
    fn name(&self) -> &str {
        "window-mis"
    }

    fn alphabet(&self) -> Vec<Label> {
        vec![0, 1]
    }

    fn eval(&self, seq: &BitSequence, position: i64) -> Result<RuleOutput, ShiftError> {
        let mut ids: std::collections::HashMap<i64, (u128, usize)> =
            std::collections::HashMap::new();
        let mut radius = 0i64;
        macro_rules! id_at {
            ($p:expr) => {{
                let p: i64 = $p;
                match ids.get(&p) {
                    Some(&k) => k,
                    None => {
                        let (id, r) = window_ids(seq, p, MIS_SEPARATION)?;
                        radius = radius.max((p - position).abs() + r);
                        let key = (id.value(), id.len());
                        ids.insert(p, key);
                        key
                    }
                }
            }};
        }
        macro_rules! is_peak {
            ($p:expr) => {{
                let p: i64 = $p;
                let own = id_at!(p);
                own > id_at!(p - 1) && own > id_at!(p + 1)
            }};
        }
        let mut left = position;
        while !is_peak!(left) {
            left -= 1;
            if position - left > MIS_SEGMENT_CAP {
                return Err(ShiftError::SegmentTooLong(position));
            }
        }
        let mut right = position;
        while !is_peak!(right) {
            right += 1;
            if right - position > MIS_SEGMENT_CAP {
                return Err(ShiftError::SegmentTooLong(position));
            }
        }
        // Simulate the join/drop-out dynamics on [left, right]; the peaks
        // at both ends join in round one, sealing the segment off.
        let len = (right - left + 1) as usize;
        let mut key = Vec::with_capacity(len);
        for p in left..=right {
            key.push(id_at!(p));
        }
        let mut state = vec![0u8; len]; // 0 undecided, 1 in, 2 out
        while state.contains(&0) {
            let joiners: Vec<usize> = (0..len)
                .filter(|&i| state[i] == 0)
                .filter(|&i| {
                    let beats = |j: usize| state[j] != 0 || key[i] > key[j];
                    (i == 0 || beats(i - 1)) && (i + 1 == len || beats(i + 1))
                })
                .collect();
            // Adjacent ids are distinct, so some undecided local maximum
            // always exists and the loop makes progress.
            assert!(!joiners.is_empty(), "stalled MIS dynamics");
            for &i in &joiners {
                state[i] = 1;
            }
            for &i in &joiners {
                if i > 0 && state[i - 1] == 0 {
                    state[i - 1] = 2;
                }
                if i + 1 < len && state[i + 1] == 0 {
                    state[i + 1] = 2;
                }
            }
        }
        let label = usize::from(state[(position - left) as usize] == 1);
        Ok(RuleOutput {
            label,
            radius_used: radius,
        })
    }
}

/// Labels by the bit at the position: a radius-0 "2-coloring" heuristic
/// that the checker refutes quickly.
#[derive(Debug, Clone, Copy, Default)]
pub struct BitParityRule;

impl AdaptiveRule for BitParityRule {
    fn name(&self) -> &str {
        "bit-parity"
    }

    fn alphabet(&self) -> Vec<Label> {
        vec![1, 2]
    }

    fn eval(&self, seq: &BitSequence, position: i64) -> Result<RuleOutput, ShiftError> {
        Ok(RuleOutput {
            label: 1 + seq.bit(position)? as Label,
            radius_used: 0,
        })
    }
}

/// Constant rule, for baselines and falsification tests.
#[derive(Debug, Clone, Copy)]
pub struct ConstantRule(pub Label);

impl AdaptiveRule for ConstantRule {
    fn name(&self) -> &str {
        "constant"
    }

    fn alphabet(&self) -> Vec<Label> {
        vec![self.0]
    }

    fn eval(&self, _seq: &BitSequence, _position: i64) -> Result<RuleOutput, ShiftError> {
        Ok(RuleOutput {
            label: self.0,
            radius_used: 0,
        })
    }
}

/// A LOCAL algorithm lifted to a window rule.
///
/// The rule materializes the radius-`T` path segment around the position,
/// feeds every segment vertex a window identifier distinct within
/// separation `2T+2`, and evaluates the algorithm's view function at the
/// center. Every ball the algorithm inspects then carries pairwise
/// distinct identifiers, exactly as on a legal `n`-vertex path.
pub struct LiftedRule<A: LocalAlgorithm> {
    alg: A,
    n_nominal: usize,
    t: usize,
    separation: i64,
}

/// Lifts a deterministic view algorithm to an adaptive window rule.
pub fn window_rule_from_algorithm<A: LocalAlgorithm>(alg: A, n_nominal: usize) -> LiftedRule<A> {
    assert_eq!(
        alg.mode(),
        Mode::Deterministic,
        "only deterministic algorithms lift"
    );
    let t = alg.radius(n_nominal);
    LiftedRule {
        alg,
        n_nominal,
        t,
        separation: 2 * t as i64 + 2,
    }
}

impl<A: LocalAlgorithm> LiftedRule<A> {
    pub fn rounds(&self) -> usize {
        self.t
    }

    pub fn n_nominal(&self) -> usize {
        self.n_nominal
    }
}

impl<A: LocalAlgorithm> AdaptiveRule for LiftedRule<A> {
    fn name(&self) -> &str {
        "lifted"
    }

    fn alphabet(&self) -> Vec<Label> {
        Vec::new() // not statically known; callers check against a problem
    }

    fn eval(&self, seq: &BitSequence, position: i64) -> Result<RuleOutput, ShiftError> {
        let t = self.t as i64;
        let segment = make_path(2 * self.t + 1).map_err(|e| ShiftError::Lifted(format!("{e}")))?;
        let mut radius = t;
        let payload: Vec<BitString> = if self.alg.uses_payload() {
            let mut payload = Vec::with_capacity(2 * self.t + 1);
            for p in position - t..=position + t {
                let (id, r) = window_ids(seq, p, self.separation)?;
                radius = radius.max((p - position).abs() + r);
                payload.push(id);
            }
            payload
        } else {
            radius = t;
            vec![BitString::empty(); 2 * self.t + 1]
        };
        let view = ball(&segment, self.t, self.t, &payload)
            .map_err(|e| ShiftError::Lifted(format!("{e}")))?;
        Ok(RuleOutput {
            label: self.alg.out(&view),
            radius_used: radius,
        })
    }
}

/// One violation found while checking a rule along a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowViolation {
    pub sample: usize,
    pub position: i64,
    pub reason: Reason,
}

/// Result of evaluating a rule over spans of several samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowRuleCheck {
    pub samples: usize,
    pub span: i64,
    pub evaluated: u64,
    pub violations: Vec<WindowViolation>,
    /// Evaluations that ran out of materialized range or hit a cap.
    pub cap_errors: u64,
    pub radius_max: i64,
    pub radius_median: i64,
    /// Sorted `(radius, occurrences)` pairs over all evaluations.
    pub radius_counts: Vec<(i64, u64)>,
}

/// Evaluates the rule on positions `-span..=span` of each sample, then
/// runs the LCL checker on the resulting path labeling. Violations are
/// reported for interior vertices only, since the segment's endpoints
/// have a neighbor beyond the evaluated span.
pub fn check_window_rule(
    rule: &dyn AdaptiveRule,
    problem: &LclProblem,
    samples: &[BitSequence],
    span: i64,
) -> WindowRuleCheck {
    use rayon::prelude::*;

    assert!(span >= 1);
    let per_sample: Vec<(Vec<WindowViolation>, Vec<i64>, u64)> = samples
        .par_iter()
        .enumerate()
        .map(|(idx, seq)| {
            let mut labels = Vec::with_capacity((2 * span + 1) as usize);
            let mut radii = Vec::with_capacity((2 * span + 1) as usize);
            let mut caps = 0u64;
            for pos in -span..=span {
                match rule.eval(seq, pos) {
                    Ok(out) => {
                        labels.push(out.label);
                        radii.push(out.radius_used);
                    }
                    Err(_) => caps += 1,
                }
            }
            if caps > 0 {
                return (Vec::new(), radii, caps);
            }
            let path = make_path(labels.len()).expect("span >= 1");
            let violations = match problem.check(&path, &Labeling::new(labels)) {
                Ok(vs) => vs
                    .into_iter()
                    .filter(|v| v.vertex > 0 && v.vertex + 1 < (2 * span + 1) as usize)
                    .map(|v| WindowViolation {
                        sample: idx,
                        position: v.vertex as i64 - span,
                        reason: v.reason,
                    })
                    .collect(),
                // A label outside the problem's alphabet refutes the rule
                // as hard as any edge violation does.
                Err(_) => {
                    vec![WindowViolation {
                        sample: idx,
                        position: 0,
                        reason: Reason::NotDominated,
                    }]
                }
            };
            (violations, radii, caps)
        })
        .collect();

    let mut violations = Vec::new();
    let mut radii = Vec::new();
    let mut cap_errors = 0;
    let mut evaluated = 0;
    for (vs, rs, caps) in per_sample {
        violations.extend(vs);
        evaluated += rs.len() as u64;
        radii.extend(rs);
        cap_errors += caps;
    }
    radii.sort_unstable();
    let mut radius_counts: Vec<(i64, u64)> = Vec::new();
    for &r in &radii {
        match radius_counts.last_mut() {
            Some((last, count)) if *last == r => *count += 1,
            _ => radius_counts.push((r, 1)),
        }
    }
    WindowRuleCheck {
        samples: samples.len(),
        span,
        evaluated,
        violations,
        cap_errors,
        radius_max: radii.last().copied().unwrap_or(0),
        radius_median: radii.get(radii.len() / 2).copied().unwrap_or(0),
        radius_counts,
    }
}
