//! Adversary against claimed `T`-round 2-coloring algorithms on paths.
//!
//! On a long path, pick `x`, `y`, `z` with `dist(x,y)` even, `dist(x,z)`
//! odd, and all pairwise distances above `2T`. A valid 2-coloring must give
//! `x` and `y` equal colors and `z` the other one. Swapping the identifier
//! blocks `[y-T, y+T]` and `[z-T, z+T]` makes `y`'s view show what `z`'s
//! view used to show and vice versa, while `x`'s view is untouched — so a
//! genuinely `T`-round algorithm now answers `c(x), c(z), c(y)` at
//! `x, y, z`, which cannot alternate. The canonical triple is
//! `x = T+1`, `y = 3T+3`, `z = 5T+4`, which fits whenever `6T+6 ≤ n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::engine::{self, IdAssignment, IdScope, LocalAlgorithm, Mode, PayloadSource};
use crate::graph::make_path;
use crate::problems::{coloring_problem, Label, Reason};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("the adversary probes deterministic algorithms only")]
    NotDeterministic,
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error("algorithm output is not a 2-labeling: {0}")]
    NotTwoLabels(String),
}

/// Everything needed to replay the refutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryCertificate {
    pub n: usize,
    pub t: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub base_ids: Vec<BitString>,
    pub swapped_ids: Vec<BitString>,
    /// Colors of `(x, y, z)` under the base assignment.
    pub base_colors: (Label, Label, Label),
    /// Colors of `(x, y, z)` under the swapped assignment.
    pub swapped_colors: (Label, Label, Label),
    /// An edge with equal labels under the swapped assignment, plus the
    /// labels observed there.
    pub violated_edge: (usize, usize),
    pub violated_labels: (Label, Label),
    /// True when the base run already failed and no swap was needed; the
    /// swapped assignment then equals the base one.
    pub base_run_failed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversaryOutcome {
    /// A verified failing identifier assignment.
    Falsified(Box<AdversaryCertificate>),
    /// The triple does not fit: `6T+6 > n`.
    Inapplicable { t: usize, n: usize },
    /// Both runs produced valid 2-colorings, which proves the algorithm
    /// read beyond its claimed radius.
    LocalityBreach { t: usize, n: usize },
}

/// A violated edge and the labels observed on it.
type EdgeWitness = ((usize, usize), (Label, Label));

fn first_violation(
    g: &crate::graph::Graph,
    labeling: &crate::problems::Labeling,
) -> Result<Option<EdgeWitness>, AdversaryError> {
    let problem = coloring_problem(2).expect("two colors");
    let violations = problem
        .check(g, labeling)
        .map_err(|e| AdversaryError::NotTwoLabels(format!("{e}")))?;
    Ok(violations.first().map(|v| {
        let port = match v.reason {
            Reason::SameColorNeighbor { port } => port,
            _ => unreachable!("coloring problems only report color clashes"),
        };
        let u = g
            .neighbor_at_port(v.vertex, port)
            .expect("port came from the checker");
        ((v.vertex, u), (labeling.get(v.vertex), labeling.get(u)))
    }))
}

/// Probes a claimed `T(n)`-round 2-coloring algorithm on the `n`-vertex
/// path. Returns a certificate whose identifier assignment makes the
/// output fail the 2-coloring checker — guaranteed for genuinely local
/// algorithms — or reports the construction inapplicable when the triple
/// does not fit.
pub fn two_color_adversary(
    alg: &dyn LocalAlgorithm,
    n: usize,
) -> Result<AdversaryOutcome, AdversaryError> {
    if alg.mode() != Mode::Deterministic {
        return Err(AdversaryError::NotDeterministic);
    }
    let t = alg.radius(n);
    if 6 * t + 6 > n {
        return Ok(AdversaryOutcome::Inapplicable { t, n });
    }
    let (x, y, z) = (t + 1, 3 * t + 3, 5 * t + 4);
    debug_assert!(z + t < n);

    let g = make_path(n).expect("n >= 6");
    let base = IdAssignment::sequential(&g, n)?;
    let base_run = engine::run(&g, alg, n, PayloadSource::Ids(&base))?;
    let colors_at = |l: &crate::problems::Labeling| (l.get(x), l.get(y), l.get(z));

    if let Some((edge, labels)) = first_violation(&g, &base_run.labeling)? {
        return Ok(AdversaryOutcome::Falsified(Box::new(
            AdversaryCertificate {
                n,
                t,
                x,
                y,
                z,
                base_ids: base.ids().to_vec(),
                swapped_ids: base.ids().to_vec(),
                base_colors: colors_at(&base_run.labeling),
                swapped_colors: colors_at(&base_run.labeling),
                violated_edge: edge,
                violated_labels: labels,
                base_run_failed: true,
            },
        )));
    }

    // Exchange the identifier blocks around y and z.
    let mut strings = base.ids().to_vec();
    for offset in 0..=2 * t {
        strings.swap(y - t + offset, z - t + offset);
    }
    let swapped = IdAssignment::from_strings(&g, strings, IdScope::GlobalDistinct)?;
    let swapped_run = engine::run(&g, alg, n, PayloadSource::Ids(&swapped))?;

    match first_violation(&g, &swapped_run.labeling)? {
        Some((edge, labels)) => Ok(AdversaryOutcome::Falsified(Box::new(
            AdversaryCertificate {
                n,
                t,
                x,
                y,
                z,
                base_ids: base.ids().to_vec(),
                swapped_ids: swapped.ids().to_vec(),
                base_colors: colors_at(&base_run.labeling),
                swapped_colors: colors_at(&swapped_run.labeling),
                violated_edge: edge,
                violated_labels: labels,
                base_run_failed: false,
            },
        ))),
        None => Ok(AdversaryOutcome::LocalityBreach { t, n }),
    }
}

/// Replays the algorithm from the certificate alone and confirms the
/// reported edge is violated.
pub fn verify_certificate(
    alg: &dyn LocalAlgorithm,
    cert: &AdversaryCertificate,
) -> Result<bool, AdversaryError> {
    let g = make_path(cert.n).expect("certificate n");
    let ids = IdAssignment::from_strings(&g, cert.swapped_ids.clone(), IdScope::GlobalDistinct)?;
    let run = engine::run(&g, alg, cert.n, PayloadSource::Ids(&ids))?;
    let (u, v) = cert.violated_edge;
    Ok(g.has_edge(u, v)
        && run.labeling.get(u) == run.labeling.get(v)
        && (run.labeling.get(u), run.labeling.get(v)) == cert.violated_labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::IdParityTwoColoring;
    use crate::graph::View;

    #[test]
    fn parity_with_radius_zero_is_falsified() {
        let alg = IdParityTwoColoring { claimed_radius: 0 };
        match two_color_adversary(&alg, 1000).unwrap() {
            AdversaryOutcome::Falsified(cert) => {
                assert!(
                    !cert.base_run_failed,
                    "sequential parity 2-colors the base path"
                );
                assert!(verify_certificate(&alg, &cert).unwrap());
                // The triple's invariants.
                assert_eq!((cert.y - cert.x) % 2, 0);
                assert_eq!((cert.z - cert.x) % 2, 1);
                assert!(cert.y - cert.x > 2 * cert.t);
                assert!(cert.z - cert.y > 2 * cert.t);
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn swap_mirrors_the_colors_at_the_triple() {
        let alg = IdParityTwoColoring { claimed_radius: 10 };
        match two_color_adversary(&alg, 1000).unwrap() {
            AdversaryOutcome::Falsified(cert) => {
                let (bx, by, bz) = cert.base_colors;
                let (sx, sy, sz) = cert.swapped_colors;
                assert_eq!(bx, by);
                assert_ne!(bx, bz);
                // x keeps its color, y and z trade theirs.
                assert_eq!(sx, bx);
                assert_eq!(sy, bz);
                assert_eq!(sz, by);
                assert!(verify_certificate(&alg, &cert).unwrap());
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn full_view_algorithm_is_inapplicable() {
        struct FullView;
        impl LocalAlgorithm for FullView {
            fn name(&self) -> &str {
                "full-view-2-color"
            }
            fn mode(&self) -> Mode {
                Mode::Deterministic
            }
            fn radius(&self, n: usize) -> usize {
                n
            }
            fn out(&self, view: &View) -> Label {
                // Sees the whole path: 2-color by distance parity to the
                // endpoint carrying the smaller identifier.
                let endpoint = (0..view.len())
                    .filter(|&i| view.host_degree(i) == 1)
                    .min_by_key(|&i| view.payload(i).value())
                    .unwrap_or(0);
                1 + view.dist(endpoint) % 2
            }
        }
        match two_color_adversary(&FullView, 100).unwrap() {
            AdversaryOutcome::Inapplicable { t, n } => {
                assert_eq!(t, 100);
                assert_eq!(n, 100);
            }
            other => panic!("expected inapplicable, got {other:?}"),
        }
    }

    #[test]
    fn base_failure_returns_base_assignment() {
        struct AlwaysOne;
        impl LocalAlgorithm for AlwaysOne {
            fn name(&self) -> &str {
                "always-one"
            }
            fn mode(&self) -> Mode {
                Mode::Deterministic
            }
            fn radius(&self, _n: usize) -> usize {
                0
            }
            fn out(&self, _view: &View) -> Label {
                1
            }
        }
        match two_color_adversary(&AlwaysOne, 50).unwrap() {
            AdversaryOutcome::Falsified(cert) => {
                assert!(cert.base_run_failed);
                assert_eq!(cert.base_ids, cert.swapped_ids);
                assert!(verify_certificate(&AlwaysOne, &cert).unwrap());
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn certificates_serialize() {
        let alg = IdParityTwoColoring { claimed_radius: 0 };
        if let AdversaryOutcome::Falsified(cert) = two_color_adversary(&alg, 100).unwrap() {
            let json = serde_json::to_string(&cert).unwrap();
            let back: AdversaryCertificate = serde_json::from_str(&json).unwrap();
            assert_eq!(back, *cert);
        } else {
            panic!("expected a certificate");
        }
    }
}
