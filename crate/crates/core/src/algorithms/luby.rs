//! Randomized maximal independent set.
//!
//! Each round, every undecided vertex draws a fresh 64-bit word from its
//! seeded stream and joins the set iff its word is strictly greater than
//! every undecided neighbor's word; a tie blocks both sides for the round.
//! Neighbors of joiners are decided out. The loop runs to completion, so a
//! finished run always passes the MIS checker; a cap of `64·⌈log₂ n⌉`
//! rounds turns the (practically impossible) stall into an explicit error.

use crate::engine::{EngineError, RunOutcome, TrialRunner};
use crate::graph::Graph;
use crate::problems::Labeling;
use crate::rng::keyed_word;
use crate::util::ceil_log2;

use super::AlgorithmError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisOutcome {
    pub labeling: Labeling,
    pub rounds_used: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Undecided,
    In,
    Out,
}

/// Runs the MIS to completion; deterministic in `(seed, trial)`.
pub fn luby_mis(g: &Graph, seed: u64, trial: u64) -> Result<MisOutcome, AlgorithmError> {
    let n = g.n();
    let cap = 64 * ceil_log2(n.max(2) as u64);
    let mut state = vec![State::Undecided; n];
    let mut words = vec![0u64; n];
    let mut undecided = n;
    let mut rounds = 0usize;
    while undecided > 0 {
        if rounds == cap {
            return Err(AlgorithmError::RoundCapExceeded { cap, undecided });
        }
        rounds += 1;
        for v in 0..n {
            if state[v] == State::Undecided {
                words[v] = keyed_word(seed, trial, v as u64, rounds as u64);
            }
        }
        let joiners: Vec<usize> = (0..n)
            .filter(|&v| state[v] == State::Undecided)
            .filter(|&v| {
                g.neighbors(v)
                    .iter()
                    .all(|&u| state[u] != State::Undecided || words[v] > words[u])
            })
            .collect();
        for &v in &joiners {
            state[v] = State::In;
            undecided -= 1;
        }
        for &v in &joiners {
            for &u in g.neighbors(v) {
                if state[u] == State::Undecided {
                    state[u] = State::Out;
                    undecided -= 1;
                }
            }
        }
    }
    let labels = state.iter().map(|s| usize::from(*s == State::In)).collect();
    Ok(MisOutcome {
        labeling: Labeling::new(labels),
        rounds_used: rounds,
    })
}

/// Adapter so failure estimation can drive MIS trials.
pub struct LubyRunner;

impl TrialRunner for LubyRunner {
    fn name(&self) -> &str {
        "luby-mis"
    }

    fn run_trial(&self, g: &Graph, seed: u64, trial: u64) -> Result<RunOutcome, EngineError> {
        let out = luby_mis(g, seed, trial).map_err(|e| EngineError::Trial(format!("{e}")))?;
        Ok(RunOutcome {
            labeling: out.labeling,
            rounds_used: out.rounds_used,
        })
    }
}
