//! Runs an algorithm configured for `n`-vertex inputs on a host graph of
//! any size.
//!
//! A `T`-round algorithm only ever compares identifiers inside radius-`T`
//! balls, so identifiers need to be distinct only among vertices at
//! distance ≤ 2T+2. Such pseudo-identifiers come from a greedy coloring of
//! the distance-(2T+2) power graph: when that graph's maximum degree is
//! below the nominal size, the colors fit the identifier space and every
//! ball the algorithm inspects looks exactly like a ball of a legal
//! `n`-vertex instance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{greedy_coloring, AlgorithmError};
use crate::bits::BitString;
use crate::engine::{self, IdAssignment, IdScope, LocalAlgorithm, PayloadSource};
use crate::graph::{power_graph, Graph, GraphError};
use crate::problems::{CheckError, Labeling, LclProblem, Violation};
use crate::util::ceil_log2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BridgeError {
    #[error(
        "nominal size {n_nominal} too small for radius {t} on this graph: \
             the distance-{r} power graph has degree {power_degree}"
    )]
    NominalTooSmall {
        n_nominal: usize,
        t: usize,
        r: usize,
        power_degree: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// How a bridged run was set up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgePlan {
    pub n_nominal: usize,
    pub t_rounds: usize,
    /// Distance within which pseudo-identifiers are pairwise distinct.
    pub power_radius: usize,
    pub power_max_degree: usize,
    pub colors_used: usize,
    pub id_bits: usize,
}

/// Pseudo-identifiers distinct within distance `2T+2`, from a greedy
/// BFS-order coloring of the power graph. Rejects infeasible nominal sizes.
pub fn pseudo_ids(
    g: &Graph,
    t: usize,
    n_nominal: usize,
) -> Result<(IdAssignment, BridgePlan), BridgeError> {
    pseudo_ids_with_radius(g, t, n_nominal, 2 * t + 2)
}

/// Same with an explicit distinctness radius, for experiments probing how
/// small the radius can be.
pub fn pseudo_ids_with_radius(
    g: &Graph,
    t: usize,
    n_nominal: usize,
    r: usize,
) -> Result<(IdAssignment, BridgePlan), BridgeError> {
    let power = power_graph(g, r.max(1))?;
    let power_degree = power.degree_bound();
    if power_degree >= n_nominal {
        return Err(BridgeError::NominalTooSmall {
            n_nominal,
            t,
            r,
            power_degree,
        });
    }
    let order = bfs_order(g);
    let coloring = greedy_coloring(&power, &order)?;
    let colors_used = coloring.distinct_count();
    let id_bits = ceil_log2(n_nominal as u64);
    let strings: Vec<BitString> = (0..g.n())
        .map(|v| BitString::from_value((coloring.get(v) - 1) as u128, id_bits))
        .collect();
    let ids = IdAssignment::from_strings(g, strings, IdScope::DistinctWithin(r))?;
    let plan = BridgePlan {
        n_nominal,
        t_rounds: t,
        power_radius: r,
        power_max_degree: power_degree,
        colors_used,
        id_bits,
    };
    Ok((ids, plan))
}

/// BFS order over components in index order; ties broken by port order.
fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut head = order.len() - 1;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// A bridged run: the labeling, the plan, and any checker violations.
/// Violations mean the algorithm's claimed correctness or locality does
/// not hold; they are reported, never swallowed.
#[derive(Debug, Clone)]
pub struct BridgeOutcome {
    pub labeling: Labeling,
    pub plan: BridgePlan,
    pub violations: Vec<Violation>,
}

/// Runs `alg` on the host graph with pseudo-identifiers and checks the
/// output against `problem`.
pub fn simulate(
    g: &Graph,
    alg: &dyn LocalAlgorithm,
    problem: &LclProblem,
    n_nominal: usize,
) -> Result<BridgeOutcome, BridgeError> {
    let t = alg.radius(n_nominal);
    let (ids, plan) = pseudo_ids(g, t, n_nominal)?;
    let run = engine::run(g, alg, n_nominal, PayloadSource::Ids(&ids))?;
    let violations = problem.check(g, &run.labeling)?;
    Ok(BridgeOutcome {
        labeling: run.labeling,
        plan,
        violations,
    })
}
