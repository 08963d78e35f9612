//! Executes view-based LOCAL algorithms.
//!
//! A `T`-round algorithm is a pure function from the canonical radius-`T`
//! view of a vertex to that vertex's output label. The engine extracts every
//! view, applies the function, and collects the labeling; vertex evaluations
//! are independent, so the result does not depend on evaluation order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitString, MAX_BITS};
use crate::graph::{ball, Graph, GraphError};
use crate::problems::{CheckError, Label, Labeling, LclProblem};
use crate::rng::vertex_stream;
use crate::util::{ceil_3_log2, ceil_log2, wilson_interval};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("sequential identifiers need a nominal size of at least {needed}, got {got}")]
    NominalTooSmall { needed: usize, got: usize },
    #[error("identifier assignment covers {got} vertices, the graph has {want}")]
    IdCount { got: usize, want: usize },
    #[error("identifiers are not pairwise distinct (vertices {0} and {1})")]
    NotDistinct(usize, usize),
    #[error("identifiers distinct only within distance {have}, but radius {radius} needs {need}")]
    ScopeTooSmall {
        have: usize,
        need: usize,
        radius: usize,
    },
    #[error("a deterministic algorithm needs an identifier payload")]
    DeterministicNeedsIds,
    #[error("a randomized algorithm draws its own bits; identifiers were supplied")]
    RandomizedTakesNoIds,
    #[error("algorithm asks for {0} payload bits per vertex, the maximum is {max}", max = MAX_BITS)]
    PayloadTooWide(usize),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("trial failed: {0}")]
    Trial(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Deterministic,
    Randomized,
}

/// A view-based LOCAL algorithm.
///
/// `out` must depend only on the canonical view it receives, and `radius`
/// must be monotone nondecreasing in the nominal vertex count.
pub trait LocalAlgorithm: Sync {
    fn name(&self) -> &str;
    fn mode(&self) -> Mode;
    /// Claimed round count on inputs the algorithm believes have
    /// `n_nominal` vertices.
    fn radius(&self, n_nominal: usize) -> usize;
    /// Output at the root of the given view.
    fn out(&self, view: &crate::graph::View) -> Label;
    /// Random bits each vertex draws per run (randomized mode only).
    fn payload_bits(&self, _n_nominal: usize) -> usize {
        0
    }
    /// True if `out` ignores payloads entirely; lets wrappers skip
    /// payload preparation.
    fn uses_payload(&self) -> bool {
        true
    }
}

/// What kind of distinctness an identifier assignment guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdScope {
    /// All identifiers pairwise distinct.
    GlobalDistinct,
    /// Identifiers distinct on any two vertices at graph distance at most
    /// the stored radius.
    DistinctWithin(usize),
    /// No guarantee; e.g. independently sampled random identifiers.
    Unchecked,
}

/// Per-vertex identifier strings of one fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdAssignment {
    ids: Vec<BitString>,
    bit_len: usize,
    scope: IdScope,
}

impl IdAssignment {
    /// Sequential identifiers `0, 1, …` of `⌈log₂ n_nominal⌉` bits;
    /// globally distinct. Requires `n_nominal ≥ |V|`.
    pub fn sequential(g: &Graph, n_nominal: usize) -> Result<Self, EngineError> {
        if n_nominal < g.n() {
            return Err(EngineError::NominalTooSmall {
                needed: g.n(),
                got: n_nominal,
            });
        }
        let bit_len = ceil_log2(n_nominal as u64);
        let ids = (0..g.n())
            .map(|v| BitString::from_value(v as u128, bit_len))
            .collect();
        Ok(IdAssignment {
            ids,
            bit_len,
            scope: IdScope::GlobalDistinct,
        })
    }

    /// Independent uniform identifiers of `⌈3·log₂ n_nominal⌉` bits.
    /// Distinctness is *not* guaranteed; collisions happen with probability
    /// below `1/n_nominal`.
    pub fn random(g: &Graph, n_nominal: usize, seed: u64, trial: u64) -> Self {
        use rand::Rng;
        let bit_len = ceil_3_log2(n_nominal.max(1) as u64);
        let ids = (0..g.n())
            .map(|v| {
                let mut rng = vertex_stream(seed, trial, v as u64);
                let mut value = 0u128;
                if bit_len > 0 {
                    value = u128::from(rng.gen::<u64>());
                    if bit_len > 64 {
                        value |= u128::from(rng.gen::<u64>()) << 64;
                    }
                    value &= (1u128 << bit_len) - 1;
                }
                BitString::from_value(value, bit_len)
            })
            .collect();
        IdAssignment {
            ids,
            bit_len,
            scope: IdScope::Unchecked,
        }
    }

    /// Wraps explicit strings, verifying the claimed scope.
    pub fn from_strings(
        g: &Graph,
        ids: Vec<BitString>,
        scope: IdScope,
    ) -> Result<Self, EngineError> {
        if ids.len() != g.n() {
            return Err(EngineError::IdCount {
                got: ids.len(),
                want: g.n(),
            });
        }
        let bit_len = ids.first().map_or(0, BitString::len);
        assert!(
            ids.iter().all(|b| b.len() == bit_len),
            "identifier lengths must agree"
        );
        let assignment = IdAssignment {
            ids,
            bit_len,
            scope,
        };
        match scope {
            IdScope::GlobalDistinct => {
                let mut seen = std::collections::HashMap::new();
                for (v, id) in assignment.ids.iter().enumerate() {
                    if let Some(&u) = seen.get(id) {
                        return Err(EngineError::NotDistinct(u, v));
                    }
                    seen.insert(*id, v);
                }
            }
            IdScope::DistinctWithin(r) => {
                if let Some((u, v)) = find_close_collision(g, &assignment.ids, r) {
                    return Err(EngineError::NotDistinct(u, v));
                }
            }
            IdScope::Unchecked => {}
        }
        Ok(assignment)
    }

    pub fn id(&self, v: usize) -> BitString {
        self.ids[v]
    }

    pub fn ids(&self) -> &[BitString] {
        &self.ids
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn scope(&self) -> IdScope {
        self.scope
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// True if some pair of equal identifiers exists anywhere.
    pub fn has_collision(&self) -> bool {
        let mut sorted: Vec<u128> = self.ids.iter().map(BitString::value).collect();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

/// Finds a pair of vertices at distance ≤ r carrying equal identifiers.
pub fn find_close_collision(g: &Graph, ids: &[BitString], r: usize) -> Option<(usize, usize)> {
    for v in 0..g.n() {
        let dist = g.bfs_distances(v, r);
        for (u, &d) in dist.iter().enumerate() {
            if u != v && d != usize::MAX && ids[u] == ids[v] {
                return Some((v.min(u), v.max(u)));
            }
        }
    }
    None
}

/// Payload fed to a run: identifiers for deterministic algorithms, seeded
/// random bits for randomized ones.
#[derive(Debug, Clone, Copy)]
pub enum PayloadSource<'a> {
    Ids(&'a IdAssignment),
    Random { seed: u64, trial: u64 },
}

/// A finished run: the labeling plus the rounds the algorithm claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub labeling: Labeling,
    pub rounds_used: usize,
}

/// Shared by every deterministic execution path: the assignment must cover
/// the graph, and a claimed distinctness radius must cover twice the view
/// radius (two vertices in one radius-T ball are at distance ≤ 2T).
pub(crate) fn validate_id_payload(
    g: &Graph,
    ids: &IdAssignment,
    radius: usize,
) -> Result<(), EngineError> {
    if ids.len() != g.n() {
        return Err(EngineError::IdCount {
            got: ids.len(),
            want: g.n(),
        });
    }
    if let IdScope::DistinctWithin(r) = ids.scope() {
        if r < 2 * radius {
            return Err(EngineError::ScopeTooSmall {
                have: r,
                need: 2 * radius,
                radius,
            });
        }
    }
    Ok(())
}

fn prepare_payload(
    g: &Graph,
    alg: &dyn LocalAlgorithm,
    n_nominal: usize,
    payload: PayloadSource<'_>,
    radius: usize,
) -> Result<Vec<BitString>, EngineError> {
    match (alg.mode(), payload) {
        (Mode::Deterministic, PayloadSource::Ids(ids)) => {
            validate_id_payload(g, ids, radius)?;
            Ok(ids.ids().to_vec())
        }
        (Mode::Randomized, PayloadSource::Random { seed, trial }) => {
            use rand::Rng;
            let bits = alg.payload_bits(n_nominal);
            if bits > MAX_BITS {
                return Err(EngineError::PayloadTooWide(bits));
            }
            Ok((0..g.n())
                .map(|v| {
                    let mut rng = vertex_stream(seed, trial, v as u64);
                    let mut value = 0u128;
                    for chunk in 0..bits.div_ceil(64) {
                        value |= u128::from(rng.gen::<u64>()) << (64 * chunk);
                    }
                    if bits < MAX_BITS {
                        value &= (1u128 << bits) - 1;
                    }
                    BitString::from_value(value, bits)
                })
                .collect())
        }
        (Mode::Deterministic, PayloadSource::Random { .. }) => {
            Err(EngineError::DeterministicNeedsIds)
        }
        (Mode::Randomized, PayloadSource::Ids(_)) => Err(EngineError::RandomizedTakesNoIds),
    }
}

/// Runs the algorithm on every vertex in parallel.
pub fn run(
    g: &Graph,
    alg: &dyn LocalAlgorithm,
    n_nominal: usize,
    payload: PayloadSource<'_>,
) -> Result<RunOutcome, EngineError> {
    let radius = alg.radius(n_nominal);
    let payloads = prepare_payload(g, alg, n_nominal, payload, radius)?;
    let labels: Result<Vec<Label>, GraphError> = (0..g.n())
        .into_par_iter()
        .map(|v| Ok(alg.out(&ball(g, v, radius, &payloads)?)))
        .collect();
    Ok(RunOutcome {
        labeling: Labeling::new(labels?),
        rounds_used: radius,
    })
}

/// Same as [`run`] but evaluating vertices serially in the given order;
/// the result must not depend on that order.
pub fn run_in_order(
    g: &Graph,
    alg: &dyn LocalAlgorithm,
    n_nominal: usize,
    payload: PayloadSource<'_>,
    order: &[usize],
) -> Result<RunOutcome, EngineError> {
    assert_eq!(
        order.len(),
        g.n(),
        "order must be a permutation of the vertices"
    );
    let radius = alg.radius(n_nominal);
    let payloads = prepare_payload(g, alg, n_nominal, payload, radius)?;
    let mut labels = vec![0usize; g.n()];
    for &v in order {
        labels[v] = alg.out(&ball(g, v, radius, &payloads)?);
    }
    Ok(RunOutcome {
        labeling: Labeling::new(labels),
        rounds_used: radius,
    })
}

/// One seeded trial of a randomized procedure. Implementations must be
/// deterministic in `(seed, trial)`.
pub trait TrialRunner: Sync {
    fn name(&self) -> &str;
    fn run_trial(&self, g: &Graph, seed: u64, trial: u64) -> Result<RunOutcome, EngineError>;
}

/// Runs a view-based randomized algorithm once per trial.
pub struct RandomizedView<'a> {
    pub alg: &'a dyn LocalAlgorithm,
    pub n_nominal: usize,
}

impl TrialRunner for RandomizedView<'_> {
    fn name(&self) -> &str {
        self.alg.name()
    }

    fn run_trial(&self, g: &Graph, seed: u64, trial: u64) -> Result<RunOutcome, EngineError> {
        run(
            g,
            self.alg,
            self.n_nominal,
            PayloadSource::Random { seed, trial },
        )
    }
}

/// Simulates a deterministic algorithm in the randomized model: each trial
/// samples fresh `⌈3·log₂ n⌉`-bit identifiers and runs the algorithm on
/// them. Fails only when identifiers collide close enough to matter.
pub struct RandomIdSimulation<'a> {
    pub alg: &'a dyn LocalAlgorithm,
    pub n_nominal: usize,
}

impl TrialRunner for RandomIdSimulation<'_> {
    fn name(&self) -> &str {
        self.alg.name()
    }

    fn run_trial(&self, g: &Graph, seed: u64, trial: u64) -> Result<RunOutcome, EngineError> {
        let ids = IdAssignment::random(g, self.n_nominal, seed, trial);
        run(g, self.alg, self.n_nominal, PayloadSource::Ids(&ids))
    }
}

/// Empirical failure rate of a randomized procedure against a problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureEstimate {
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    /// 95% Wilson score interval for the failure probability.
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
    /// Outcome per trial index, for replay and cross-referencing.
    pub failed: Vec<bool>,
}

/// Runs `trials` seeded trials and checks each outcome against `problem`.
pub fn estimate_failure(
    g: &Graph,
    runner: &dyn TrialRunner,
    problem: &LclProblem,
    trials: u64,
    seed: u64,
) -> Result<FailureEstimate, EngineError> {
    assert!(trials >= 1);
    let failed: Result<Vec<bool>, EngineError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let outcome = runner.run_trial(g, seed, trial)?;
            Ok(!problem.check(g, &outcome.labeling)?.is_empty())
        })
        .collect();
    let failed = failed?;
    let failures = failed.iter().filter(|&&f| f).count() as u64;
    let rate = failures as f64 / trials as f64;
    let (wilson_low, wilson_high) = wilson_interval(failures, trials, 1.96);
    Ok(FailureEstimate {
        trials,
        failures,
        rate,
        wilson_low,
        wilson_high,
        seed,
        failed,
    })
}
