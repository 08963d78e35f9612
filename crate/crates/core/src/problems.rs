//! Locally checkable labeling problems: a finite label alphabet plus a
//! radius-1 constraint evaluated at every vertex.
//!
//! The constraint predicate sees the vertex's own label, its degree, and for
//! each incident edge the port number, the reverse port (the vertex's
//! position in the neighbor's list), and the neighbor's label. Violations
//! are reported per vertex with a machine-readable reason.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Vertex label. Concrete problems use small ranges such as `1..=k`.
pub type Label = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("color count must be at least 1")]
    ZeroColors,
    #[error("degree bound must be at least 1")]
    ZeroDegree,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("labeling has {got} entries but the graph has {want} vertices")]
    PartialLabeling { got: usize, want: usize },
    #[error("label {label} at vertex {vertex} is outside the alphabet")]
    LabelOutsideAlphabet { vertex: usize, label: Label },
}

/// Why a vertex failed its constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    /// Coloring: the neighbor through `port` has the same color.
    SameColorNeighbor { port: usize },
    /// MIS: labeled 1 but the neighbor through `port` is also labeled 1.
    IndependenceBroken { port: usize },
    /// MIS: labeled 0 with no neighbor labeled 1.
    NotDominated,
    /// Matching: the label names a port the vertex does not have.
    DanglingPort { label: Label },
    /// Matching: the partner through `port` does not point back.
    NotReciprocated { port: usize },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::SameColorNeighbor { port } => write!(f, "same color through port {port}"),
            Reason::IndependenceBroken { port } => write!(f, "member neighbor through port {port}"),
            Reason::NotDominated => write!(f, "no member neighbor"),
            Reason::DanglingPort { label } => write!(f, "label {label} names a missing port"),
            Reason::NotReciprocated { port } => {
                write!(f, "partner through port {port} points elsewhere")
            }
        }
    }
}

/// One failed constraint clause at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: usize,
    pub reason: Reason,
}

/// What the constraint predicate sees about one incident edge.
#[derive(Debug, Clone, Copy)]
pub struct NeighborInfo {
    /// Port number at the vertex under evaluation.
    pub port: usize,
    /// The evaluated vertex's position in this neighbor's list.
    pub reverse_port: usize,
    pub label: Label,
}

/// Everything the radius-1 predicate may consult.
#[derive(Debug)]
pub struct LocalContext<'a> {
    pub label: Label,
    pub degree: usize,
    pub neighbors: &'a [NeighborInfo],
}

type CheckFn = dyn Fn(&LocalContext<'_>) -> Vec<Reason> + Send + Sync;

/// An LCL problem: alphabet plus a pure radius-1 constraint.
#[derive(Clone)]
pub struct LclProblem {
    name: String,
    alphabet: Vec<Label>,
    check: Arc<CheckFn>,
}

impl fmt::Debug for LclProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LclProblem")
            .field("name", &self.name)
            .field("alphabet", &self.alphabet)
            .finish_non_exhaustive()
    }
}

/// Whether vertices whose degree falls short of the matching bound are
/// held to the matching constraint. Truncated trees have such vertices on
/// their boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BoundaryPolicy {
    /// Every vertex must be properly matched.
    #[default]
    Strict,
    /// Vertices of degree < d are never reported; full-degree vertices are
    /// still required to point at reciprocating partners.
    ExemptDeficient,
}

impl LclProblem {
    pub fn new(
        name: impl Into<String>,
        alphabet: Vec<Label>,
        check: impl Fn(&LocalContext<'_>) -> Vec<Reason> + Send + Sync + 'static,
    ) -> Self {
        LclProblem {
            name: name.into(),
            alphabet,
            check: Arc::new(check),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[Label] {
        &self.alphabet
    }

    /// Evaluates the constraint at a single already-assembled context.
    pub fn eval(&self, ctx: &LocalContext<'_>) -> Vec<Reason> {
        (self.check)(ctx)
    }

    /// Checks a labeling on a graph, returning every violation sorted by
    /// vertex index. Empty means the labeling solves the problem.
    pub fn check(&self, g: &Graph, labeling: &Labeling) -> Result<Vec<Violation>, CheckError> {
        use rayon::prelude::*;

        if labeling.len() != g.n() {
            return Err(CheckError::PartialLabeling {
                got: labeling.len(),
                want: g.n(),
            });
        }
        for v in 0..g.n() {
            let l = labeling.get(v);
            if !self.alphabet.contains(&l) {
                return Err(CheckError::LabelOutsideAlphabet {
                    vertex: v,
                    label: l,
                });
            }
        }
        let check_vertex = |v: usize| -> Vec<Violation> {
            let neighbors: Vec<NeighborInfo> = g
                .neighbors(v)
                .iter()
                .enumerate()
                .map(|(port, &u)| NeighborInfo {
                    port,
                    reverse_port: g.port_to(u, v).expect("adjacency is symmetric"),
                    label: labeling.get(u),
                })
                .collect();
            let ctx = LocalContext {
                label: labeling.get(v),
                degree: g.degree(v),
                neighbors: &neighbors,
            };
            self.eval(&ctx)
                .into_iter()
                .map(|reason| Violation { vertex: v, reason })
                .collect()
        };
        let out: Vec<Violation> = if g.n() >= 4096 {
            (0..g.n())
                .into_par_iter()
                .flat_map_iter(check_vertex)
                .collect()
        } else {
            (0..g.n()).flat_map(check_vertex).collect()
        };
        Ok(out)
    }
}

/// Proper `k`-coloring: every neighbor's label differs from the vertex's own.
pub fn coloring_problem(k: usize) -> Result<LclProblem, ProblemError> {
    if k == 0 {
        return Err(ProblemError::ZeroColors);
    }
    Ok(LclProblem::new(
        format!("{k}-coloring"),
        (1..=k).collect(),
        |ctx| {
            ctx.neighbors
                .iter()
                .filter(|nb| nb.label == ctx.label)
                .map(|nb| Reason::SameColorNeighbor { port: nb.port })
                .collect()
        },
    ))
}

/// Maximal independent set as a 0/1 labeling: a 1 forbids 1-neighbors, a 0
/// requires at least one 1-neighbor.
pub fn mis_problem() -> LclProblem {
    LclProblem::new("mis", vec![0, 1], |ctx| {
        if ctx.label == 1 {
            ctx.neighbors
                .iter()
                .filter(|nb| nb.label == 1)
                .map(|nb| Reason::IndependenceBroken { port: nb.port })
                .collect()
        } else if ctx.neighbors.iter().any(|nb| nb.label == 1) {
            Vec::new()
        } else {
            vec![Reason::NotDominated]
        }
    })
}

/// Perfect matching encoded as port labels: label `i` at `x` is valid iff
/// the port-`i` neighbor of `x` carries the label of the port leading back
/// to `x`.
pub fn perfect_matching_problem(d: usize) -> Result<LclProblem, ProblemError> {
    perfect_matching_problem_with(d, BoundaryPolicy::Strict)
}

/// Perfect matching with an explicit policy for degree-deficient vertices.
pub fn perfect_matching_problem_with(
    d: usize,
    policy: BoundaryPolicy,
) -> Result<LclProblem, ProblemError> {
    if d == 0 {
        return Err(ProblemError::ZeroDegree);
    }
    let name = match policy {
        BoundaryPolicy::Strict => format!("matching-{d}"),
        BoundaryPolicy::ExemptDeficient => format!("matching-{d}-exempt"),
    };
    Ok(LclProblem::new(name, (1..=d).collect(), move |ctx| {
        if policy == BoundaryPolicy::ExemptDeficient && ctx.degree < d {
            return Vec::new();
        }
        let port = ctx.label - 1;
        match ctx.neighbors.iter().find(|nb| nb.port == port) {
            None => vec![Reason::DanglingPort { label: ctx.label }],
            Some(nb) => {
                // The partner's label must name the port that points back.
                if nb.label == nb.reverse_port + 1 {
                    Vec::new()
                } else {
                    vec![Reason::NotReciprocated { port }]
                }
            }
        }
    }))
}

/// Total vertex labeling; index `v` holds the label of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling(Vec<Label>);

impl Labeling {
    pub fn new(labels: Vec<Label>) -> Self {
        Labeling(labels)
    }

    pub fn get(&self, v: usize) -> Label {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    /// Number of distinct labels used.
    pub fn distinct_count(&self) -> usize {
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len()
    }

    /// One label per line.
    pub fn save(&self) -> String {
        let mut out = String::new();
        for l in &self.0 {
            out.push_str(&l.to_string());
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<Self, std::num::ParseIntError> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse())
            .collect::<Result<Vec<_>, _>>()
            .map(Labeling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle, make_path};

    fn labels(ls: &[Label]) -> Labeling {
        Labeling::new(ls.to_vec())
    }

    #[test]
    fn coloring_on_an_edge() {
        let g = make_path(2).unwrap();
        let p = coloring_problem(2).unwrap();
        assert_eq!(p.check(&g, &labels(&[1, 2])).unwrap(), vec![]);
        let bad = p.check(&g, &labels(&[1, 1])).unwrap();
        assert_eq!(bad.len(), 2);
        assert_eq!(
            bad[0],
            Violation {
                vertex: 0,
                reason: Reason::SameColorNeighbor { port: 0 }
            }
        );
    }

    #[test]
    fn zero_colors_rejected() {
        assert_eq!(coloring_problem(0).unwrap_err(), ProblemError::ZeroColors);
    }

    #[test]
    fn odd_cycle_has_no_two_coloring() {
        let g = make_cycle(5).unwrap();
        let p = coloring_problem(2).unwrap();
        let mut any_valid = false;
        for mask in 0..1u32 << 5 {
            let l = labels(
                &(0..5)
                    .map(|v| 1 + ((mask >> v) & 1) as usize)
                    .collect::<Vec<_>>(),
            );
            any_valid |= p.check(&g, &l).unwrap().is_empty();
        }
        assert!(!any_valid);
    }

    #[test]
    fn mis_examples() {
        let g = make_path(3).unwrap();
        let p = mis_problem();
        assert_eq!(p.check(&g, &labels(&[1, 0, 1])).unwrap(), vec![]);
        let bad = p.check(&g, &labels(&[0, 0, 0])).unwrap();
        assert_eq!(bad.len(), 3);
        assert!(bad.iter().all(|v| v.reason == Reason::NotDominated));
    }

    #[test]
    fn triangle_three_coloring_is_clean() {
        let g = make_cycle(3).unwrap();
        let p = coloring_problem(3).unwrap();
        assert_eq!(p.check(&g, &labels(&[1, 2, 3])).unwrap(), vec![]);
    }

    #[test]
    fn mis_violations_sit_at_the_member_pair() {
        let g = make_path(4).unwrap();
        let p = mis_problem();
        let bad = p.check(&g, &labels(&[1, 1, 0, 1])).unwrap();
        let vertices: Vec<usize> = bad.iter().map(|v| v.vertex).collect();
        assert_eq!(vertices, vec![0, 1]);
        assert!(bad.iter().all(|v| matches!(v.reason, Reason::IndependenceBroken { .. })));
    }

    #[test]
    fn mis_count_on_cycle_six() {
        // Brute force over all 2^6 labelings; 5 maximal independent sets.
        let g = make_cycle(6).unwrap();
        let p = mis_problem();
        let count = (0..1u32 << 6)
            .filter(|mask| {
                let l = labels(
                    &(0..6)
                        .map(|v| ((mask >> v) & 1) as usize)
                        .collect::<Vec<_>>(),
                );
                p.check(&g, &l).unwrap().is_empty()
            })
            .count();
        assert_eq!(count, 5);
    }

    #[test]
    fn matching_on_an_edge() {
        let g = make_path(2).unwrap();
        let p = perfect_matching_problem(1).unwrap();
        assert_eq!(p.check(&g, &labels(&[1, 1])).unwrap(), vec![]);
    }

    #[test]
    fn matching_path3_unsolvable_strict_but_not_exempt() {
        let g = make_path(3).unwrap();
        let strict = perfect_matching_problem(2).unwrap();
        let exempt = perfect_matching_problem_with(2, BoundaryPolicy::ExemptDeficient).unwrap();
        let mut strict_any = false;
        let mut exempt_any = false;
        for a in 1..=2usize {
            for b in 1..=2usize {
                for c in 1..=2usize {
                    let l = labels(&[a, b, c]);
                    strict_any |= strict.check(&g, &l).unwrap().is_empty();
                    exempt_any |= exempt.check(&g, &l).unwrap().is_empty();
                }
            }
        }
        assert!(!strict_any);
        assert!(exempt_any); // endpoints are deficient, only the middle is held
    }

    #[test]
    fn matching_cycle4_pairing() {
        let g = make_cycle(4).unwrap();
        let p = perfect_matching_problem(2).unwrap();
        // Pair 0-1 and 2-3: each vertex labels the port of its partner.
        let port_label = |x: usize, partner: usize| g.port_to(x, partner).unwrap() + 1;
        let l = labels(&[
            port_label(0, 1),
            port_label(1, 0),
            port_label(2, 3),
            port_label(3, 2),
        ]);
        assert_eq!(p.check(&g, &l).unwrap(), vec![]);
    }

    #[test]
    fn matching_dangling_port_reason() {
        let g = make_path(2).unwrap();
        let p = perfect_matching_problem(2).unwrap();
        let bad = p.check(&g, &labels(&[2, 1])).unwrap();
        assert!(bad.contains(&Violation {
            vertex: 0,
            reason: Reason::DanglingPort { label: 2 }
        }));
    }

    #[test]
    fn check_rejects_bad_labelings() {
        let g = make_path(2).unwrap();
        let p = coloring_problem(2).unwrap();
        assert_eq!(
            p.check(&g, &labels(&[1])).unwrap_err(),
            CheckError::PartialLabeling { got: 1, want: 2 }
        );
        assert_eq!(
            p.check(&g, &labels(&[1, 7])).unwrap_err(),
            CheckError::LabelOutsideAlphabet {
                vertex: 1,
                label: 7
            }
        );
    }

    #[test]
    fn labeling_io_round_trips() {
        let l = labels(&[3, 1, 2]);
        assert_eq!(Labeling::load(&l.save()).unwrap(), l);
    }
}
