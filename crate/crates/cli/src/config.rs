//! Experiment configuration: a TOML document with explicit seeds and
//! fully resolved names. Parsing is strict — unknown fields and unknown
//! names are errors, and every kind validates that the sections it needs
//! are present — so a config that loads is a config that runs.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use lcl_core::graph::{self, Graph};
use lcl_core::problems::{self, BoundaryPolicy, LclProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Run,
    Sweep,
    Adversary,
    Bridge,
    Shift,
    Rotation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    /// Root seed; every random draw in the experiment derives from it.
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_nominal: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<AlgorithmSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<RotationSpec>,
}

fn default_trials() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path,
    Cycle,
    Torus,
    Tree,
    Random,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

impl GraphSpec {
    pub fn build(&self, seed: u64) -> Result<Graph> {
        let need = |x: Option<usize>, what: &str| {
            x.with_context(|| format!("graph family {:?} needs `{what}`", self.family))
        };
        Ok(match self.family {
            Family::Path => graph::make_path(need(self.n, "n")?)?,
            Family::Cycle => graph::make_cycle(need(self.n, "n")?)?,
            Family::Torus => {
                let dims = self.dims.clone().context("torus needs `dims`")?;
                graph::make_grid_torus(&dims)?
            }
            Family::Tree => {
                graph::make_regular_tree(need(self.degree, "degree")?, need(self.depth, "depth")?)?
            }
            Family::Random => {
                let n = need(self.n, "n")?;
                let d = need(self.max_degree, "max_degree")?;
                let m = self.edges.unwrap_or(n * d / 2);
                graph::make_random_bounded(n, d, m, seed)?
            }
            Family::File => {
                let path = self.file.clone().context("file family needs `file`")?;
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Graph::load(&text)?
            }
        })
    }

    pub fn describe(&self) -> String {
        match self.family {
            Family::Path => format!("path({})", self.n.unwrap_or(0)),
            Family::Cycle => format!("cycle({})", self.n.unwrap_or(0)),
            Family::Torus => format!("torus{:?}", self.dims.clone().unwrap_or_default()),
            Family::Tree => {
                format!(
                    "tree({},{})",
                    self.degree.unwrap_or(0),
                    self.depth.unwrap_or(0)
                )
            }
            Family::Random => {
                format!(
                    "random({},d{})",
                    self.n.unwrap_or(0),
                    self.max_degree.unwrap_or(0)
                )
            }
            Family::File => format!(
                "file({})",
                self.file
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default()
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmName {
    Linial,
    Greedy,
    Luby,
    Constant,
    IdParity,
    CoinFlip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: AlgorithmName,
    /// Constant algorithm's output label.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<usize>,
    /// Claimed radius of the identifier-parity 2-coloring.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
}

impl AlgorithmSpec {
    /// Does a clean run assert correctness (so violations are a failure)?
    pub fn asserts_correctness(&self) -> bool {
        !matches!(self.name, AlgorithmName::CoinFlip)
    }

    pub fn describe(&self) -> String {
        match self.name {
            AlgorithmName::Linial => "linial".into(),
            AlgorithmName::Greedy => "greedy".into(),
            AlgorithmName::Luby => "luby".into(),
            AlgorithmName::Constant => format!("constant({})", self.label.unwrap_or(1)),
            AlgorithmName::IdParity => format!("id_parity(T={})", self.radius.unwrap_or(0)),
            AlgorithmName::CoinFlip => "coin_flip".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemName {
    Coloring,
    Mis,
    Matching,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: ProblemName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default)]
    pub exempt_deficient: bool,
}

impl ProblemSpec {
    pub fn build(&self, g: &Graph) -> Result<LclProblem> {
        Ok(match self.name {
            ProblemName::Coloring => {
                let k = self.k.context("coloring needs `k`")?;
                problems::coloring_problem(k)?
            }
            ProblemName::Mis => problems::mis_problem(),
            ProblemName::Matching => {
                let d = self.d.unwrap_or_else(|| g.degree_bound().max(1));
                let policy = if self.exempt_deficient {
                    BoundaryPolicy::ExemptDeficient
                } else {
                    BoundaryPolicy::Strict
                };
                problems::perfect_matching_problem_with(d, policy)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Cycle sizes to sweep; may be empty, which yields an empty table.
    pub ns: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftRule {
    ThreeColoring,
    Mis,
    BitParity,
    LiftedLinial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub rule: ShiftRule,
    pub samples: usize,
    pub half_width: i64,
    #[serde(default = "default_p_max")]
    pub p_max: usize,
    pub span: i64,
}

fn default_p_max() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSpec {
    pub alphas: Vec<f64>,
    pub orbit_len: usize,
    #[serde(default = "default_x0")]
    pub x0: f64,
}

fn default_x0() -> f64 {
    0.1
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).context("parsing config")?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Every kind states which sections it needs; a config that validates
    /// has all its names resolved.
    pub fn validate(&self) -> Result<()> {
        let need = |present: bool, what: &str| {
            if present {
                Ok(())
            } else {
                bail!("kind {:?} needs the `{what}` section", self.kind)
            }
        };
        match self.kind {
            Kind::Run => {
                need(self.graph.is_some(), "graph")?;
                need(self.algorithm.is_some(), "algorithm")?;
                need(self.problem.is_some(), "problem")?;
            }
            Kind::Sweep => {
                need(self.sweep.is_some(), "sweep")?;
            }
            Kind::Adversary => {
                need(self.algorithm.is_some(), "algorithm")?;
                need(self.graph.is_some(), "graph")?;
                let family = self.graph.as_ref().unwrap().family;
                if family != Family::Path {
                    bail!("the adversary runs on paths, got {family:?}");
                }
            }
            Kind::Bridge => {
                need(self.graph.is_some(), "graph")?;
                need(self.problem.is_some(), "problem")?;
                if self.n_nominal.is_none() {
                    bail!("bridge needs `n_nominal`");
                }
            }
            Kind::Shift => {
                need(self.shift.is_some(), "shift")?;
                let spec = self.shift.as_ref().unwrap();
                if spec.span <= 0 || spec.half_width <= spec.span {
                    bail!("shift needs 0 < span < half_width");
                }
            }
            Kind::Rotation => {
                need(self.rotation.is_some(), "rotation")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
kind = "run"
seed = 42
trials = 3

[graph]
family = "cycle"
n = 100

[algorithm]
name = "linial"

[problem]
name = "coloring"
k = 3
"#;

    #[test]
    fn parse_and_round_trip() {
        let a = ExperimentConfig::parse(SAMPLE).unwrap();
        let text = a.to_toml();
        let b = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(a, b);
        // Serialization is a fixed point after one normalization.
        assert_eq!(b.to_toml(), text);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(ExperimentConfig::parse(&SAMPLE.replace("linial", "bogus")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("cycle", "hypercube")).is_err());
        assert!(ExperimentConfig::parse(&format!("{SAMPLE}\nwallclock = true")).is_err());
    }

    #[test]
    fn missing_sections_are_rejected() {
        let text = r#"
kind = "bridge"
seed = 1
[graph]
family = "cycle"
n = 100
[problem]
name = "coloring"
k = 3
"#;
        assert!(
            ExperimentConfig::parse(text).is_err(),
            "bridge without n_nominal"
        );
    }

    #[test]
    fn seeds_are_mandatory() {
        assert!(ExperimentConfig::parse("kind = \"sweep\"\n[sweep]\nns = []\n").is_err());
    }
}
