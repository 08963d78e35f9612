//! Reference LOCAL algorithms and sequential oracles.

mod adversary;
mod linial;
mod luby;

pub use adversary::{
    two_color_adversary, verify_certificate, AdversaryCertificate, AdversaryError, AdversaryOutcome,
};
pub use linial::{linial_coloring, LinialColoring};
pub use luby::{luby_mis, LubyRunner, MisOutcome};

use thiserror::Error;

use crate::engine::{EngineError, LocalAlgorithm, Mode};
use crate::graph::{Graph, View};
use crate::problems::{Label, Labeling};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgorithmError {
    #[error("order must be a permutation of the vertex set")]
    BadOrder,
    #[error("round cap {cap} reached with {undecided} vertices undecided")]
    RoundCapExceeded { cap: usize, undecided: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Sequential greedy coloring: scanning vertices in the given order, each
/// takes the least color in `1..` absent among its already-colored
/// neighbors. Uses at most `degree_bound + 1` colors.
pub fn greedy_coloring(g: &Graph, order: &[usize]) -> Result<Labeling, AlgorithmError> {
    if order.len() != g.n() {
        return Err(AlgorithmError::BadOrder);
    }
    let mut seen = vec![false; g.n()];
    for &v in order {
        if v >= g.n() || seen[v] {
            return Err(AlgorithmError::BadOrder);
        }
        seen[v] = true;
    }
    let mut colors = vec![0usize; g.n()]; // 0 = uncolored
    for &v in order {
        let mut used = 0u64; // degree_bound + 1 colors always fit a word after masking
        for &u in g.neighbors(v) {
            let c = colors[u];
            if c > 0 && c <= 64 {
                used |= 1 << (c - 1);
            }
        }
        let mut c = 1;
        while used & (1 << (c - 1)) != 0 {
            c += 1;
        }
        colors[v] = c;
    }
    Ok(Labeling::new(colors))
}

/// Always outputs the same label; radius 0.
#[derive(Debug, Clone, Copy)]
pub struct ConstantLabel(pub Label);

impl LocalAlgorithm for ConstantLabel {
    fn name(&self) -> &str {
        "constant"
    }
    fn mode(&self) -> Mode {
        Mode::Deterministic
    }
    fn radius(&self, _n: usize) -> usize {
        0
    }
    fn out(&self, _view: &View) -> Label {
        self.0
    }
    fn uses_payload(&self) -> bool {
        false
    }
}

/// Colors by the parity of the root identifier. Claims to 2-color paths,
/// which no local algorithm can actually do; the claimed radius is
/// configurable so the claim can be probed at different localities.
#[derive(Debug, Clone, Copy)]
pub struct IdParityTwoColoring {
    pub claimed_radius: usize,
}

impl LocalAlgorithm for IdParityTwoColoring {
    fn name(&self) -> &str {
        "id-parity"
    }
    fn mode(&self) -> Mode {
        Mode::Deterministic
    }
    fn radius(&self, _n: usize) -> usize {
        self.claimed_radius
    }
    fn out(&self, view: &View) -> Label {
        1 + (view.payload(0).value() & 1) as usize
    }
}

/// Each vertex flips one coin and outputs label 1 or 2; radius 0.
/// Fails on any edge with probability 1/2.
#[derive(Debug, Clone, Copy)]
pub struct CoinFlipTwoColoring;

impl LocalAlgorithm for CoinFlipTwoColoring {
    fn name(&self) -> &str {
        "coin-flip"
    }
    fn mode(&self) -> Mode {
        Mode::Randomized
    }
    fn radius(&self, _n: usize) -> usize {
        0
    }
    fn out(&self, view: &View) -> Label {
        1 + usize::from(view.payload(0).bit(0))
    }
    fn payload_bits(&self, _n: usize) -> usize {
        1
    }
}
