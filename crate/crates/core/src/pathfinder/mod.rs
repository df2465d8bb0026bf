//! Sense-pair relatedness.
//!
//! For a path `P` between two senses, compactness is the product of its edge
//! weights and elaboration is the product over hops of the depth harmonic
//! mean divided by the maximum depth. Relatedness (`Sr`) is the largest
//! compactness × elaboration over all paths. Folding the depth factor into
//! each edge weight,
//!
//! ```text
//! w'(u, v) = w(u, v) · 2·d(u)·d(v) / (d_max · (d(u) + d(v)))
//! ```
//!
//! turns this into a max-product path problem over weights in (0, 1), which
//! Dijkstra solves on the costs `-ln w'`.

pub mod baseline;
mod nwpl;
pub mod oracle;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::thesaurus::{CategorySet, DepthTable, EdgeKind, SenseId, ThesaurusGraph, WeightConfig};

pub use baseline::{baseline_similarity, Baselines, IcTable, DEFAULT_JC_MAX};
pub use oracle::brute_force_relatedness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Measure {
    /// Compactness × elaboration, maximized over paths.
    Sr,
    /// Compactness only, maximized over paths.
    Pr,
    /// Mean edge weight, maximized over simple paths.
    Nwpl,
    Leacock,
    Resnik,
    JiangConrath,
    Lin,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Sr => "sr",
            Measure::Pr => "pr",
            Measure::Nwpl => "nwpl",
            Measure::Leacock => "leacock",
            Measure::Resnik => "resnik",
            Measure::JiangConrath => "jc",
            Measure::Lin => "lin",
        }
    }

    /// Path-maximizing measures, bounded in [0, 1].
    pub fn is_path_measure(self) -> bool {
        matches!(self, Measure::Sr | Measure::Pr | Measure::Nwpl)
    }

    pub fn code(self) -> u8 {
        match self {
            Measure::Sr => 0,
            Measure::Pr => 1,
            Measure::Nwpl => 2,
            Measure::Leacock => 3,
            Measure::Resnik => 4,
            Measure::JiangConrath => 5,
            Measure::Lin => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<Measure> {
        [
            Measure::Sr,
            Measure::Pr,
            Measure::Nwpl,
            Measure::Leacock,
            Measure::Resnik,
            Measure::JiangConrath,
            Measure::Lin,
        ]
        .into_iter()
        .find(|m| m.code() == code)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(Measure::Sr),
            "pr" => Ok(Measure::Pr),
            "nwpl" => Ok(Measure::Nwpl),
            "leacock" | "lc" => Ok(Measure::Leacock),
            "resnik" => Ok(Measure::Resnik),
            "jc" | "jiang_conrath" => Ok(Measure::JiangConrath),
            "lin" => Ok(Measure::Lin),
            other => Err(Error::InvalidInput(format!("unknown measure `{other}`"))),
        }
    }
}

/// A connecting path with its compactness and elaboration. A single-sense
/// path with no edges is the identity path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemanticPath {
    pub senses: Vec<SenseId>,
    pub edges: Vec<EdgeKind>,
    pub scm: f64,
    pub spe: f64,
}

impl SemanticPath {
    pub fn new(graph: &ThesaurusGraph, senses: Vec<SenseId>, edges: Vec<EdgeKind>) -> Result<Self> {
        debug_assert_eq!(senses.len(), edges.len() + 1);
        let scm = scm(&edges, graph.weights());
        let spe = spe(&senses, graph.depths())?;
        Ok(SemanticPath { senses, edges, scm, spe })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reversed(&self) -> SemanticPath {
        let senses: Vec<SenseId> = self.senses.iter().rev().copied().collect();
        let edges: Vec<EdgeKind> = self.edges.iter().rev().map(|k| k.inverse()).collect();
        SemanticPath {
            senses,
            edges,
            scm: self.scm,
            spe: self.spe,
        }
    }

    /// Human-readable rendering: `a -hypernym-> b -part_meronym-> c`.
    pub fn render(&self, graph: &ThesaurusGraph) -> String {
        let mut out = graph.sense(self.senses[0]).key.clone();
        for (kind, s) in self.edges.iter().zip(&self.senses[1..]) {
            out.push_str(&format!(" -{}-> {}", kind, graph.sense(*s).key));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SenseRelatedness {
    pub value: f64,
    pub witness: Option<SemanticPath>,
    pub measure: Measure,
}

impl SenseRelatedness {
    fn unrelated(measure: Measure) -> Self {
        SenseRelatedness {
            value: 0.0,
            witness: None,
            measure,
        }
    }
}

/// Compactness: the product of the edge weights, 1 for the empty path.
pub fn scm(edges: &[EdgeKind], weights: &WeightConfig) -> f64 {
    edges.iter().map(|k| weights.get(*k)).product()
}

/// Elaboration: product over hops of `2·d_i·d_{i+1} / (d_i + d_{i+1}) / d_max`,
/// or `d / d_max` for a single-sense path.
pub fn spe(senses: &[SenseId], depths: &DepthTable) -> Result<f64> {
    let d_max = depths.max_depth() as f64;
    let depth = |s: SenseId| {
        depths
            .get(s)
            .map(f64::from)
            .ok_or_else(|| Error::MissingDepth(format!("#{}", s.0)))
    };
    match senses {
        [] => Ok(0.0),
        [only] => Ok(depth(*only)? / d_max),
        _ => {
            let mut acc = 1.0;
            for pair in senses.windows(2) {
                acc *= depth_factor(depth(pair[0])?, depth(pair[1])?, d_max);
            }
            Ok(acc)
        }
    }
}

pub(crate) fn depth_factor(di: f64, dj: f64, d_max: f64) -> f64 {
    2.0 * di * dj / (di + dj) / d_max
}

/// Knobs that change which paths are considered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Longest path, in edges, that the search will consider. `None` searches
    /// exhaustively; any cap makes the result a lower bound.
    pub max_hops: Option<usize>,
    /// Relation categories that may not appear on a path.
    pub excluded: CategorySet,
}

impl SearchOptions {
    pub fn is_default(&self) -> bool {
        self.max_hops.is_none() && self.excluded.is_empty()
    }
}

/// Path search over one graph.
#[derive(Debug, Clone, Copy)]
pub struct PathFinder<'g> {
    graph: &'g ThesaurusGraph,
    options: SearchOptions,
}

impl<'g> PathFinder<'g> {
    pub fn new(graph: &'g ThesaurusGraph) -> Self {
        PathFinder {
            graph,
            options: SearchOptions::default(),
        }
    }

    pub fn with_options(graph: &'g ThesaurusGraph, options: SearchOptions) -> Self {
        PathFinder { graph, options }
    }

    pub fn graph(&self) -> &'g ThesaurusGraph {
        self.graph
    }

    pub fn options(&self) -> SearchOptions {
        self.options
    }

    /// Identity value of a measure for `s1 == s2`.
    pub fn identity(&self, sense: SenseId, measure: Measure) -> SenseRelatedness {
        let path = SemanticPath {
            senses: vec![sense],
            edges: Vec::new(),
            scm: 1.0,
            spe: self.graph.depth(sense) as f64 / self.graph.max_depth() as f64,
        };
        let value = match measure {
            Measure::Sr => path.scm * path.spe,
            _ => 1.0,
        };
        SenseRelatedness {
            value,
            witness: Some(path),
            measure,
        }
    }

    /// Best path value between two senses under a path measure.
    ///
    /// The search always runs from the lower sense index to the higher one,
    /// so the value is bit-for-bit symmetric and matches what
    /// [`relate_many`](Self::relate_many) and the pair cache produce.
    pub fn max_relatedness(&self, s1: SenseId, s2: SenseId, measure: Measure) -> Result<SenseRelatedness> {
        self.check(s1)?;
        self.check(s2)?;
        if !measure.is_path_measure() {
            return Err(Error::InvalidInput(format!(
                "{measure} is not a path measure; use Baselines"
            )));
        }
        if s1 == s2 {
            return Ok(self.identity(s1, measure));
        }
        let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        let mut rel = match measure {
            Measure::Nwpl => nwpl::search(self, lo, hi)?,
            _ => self
                .relate_many(lo, &[hi], measure)?
                .pop()
                .expect("one target"),
        };
        if s1 > s2 {
            rel.witness = rel.witness.map(|w| w.reversed());
        }
        Ok(rel)
    }

    /// Relatedness from `source` to each of `targets` (SR or PR) with one
    /// Dijkstra run, stopping once every target is settled. Each entry equals
    /// what a single-target search from `source` would report. Targets equal
    /// to `source` get the identity value.
    pub fn relate_many(&self, source: SenseId, targets: &[SenseId], measure: Measure) -> Result<Vec<SenseRelatedness>> {
        self.check(source)?;
        for t in targets {
            self.check(*t)?;
        }
        if !matches!(measure, Measure::Sr | Measure::Pr) {
            return Err(Error::InvalidInput(format!(
                "{measure} cannot be computed by max-product search"
            )));
        }
        let paths = search::max_product(self, source, targets, measure == Measure::Sr);
        targets
            .iter()
            .zip(paths)
            .map(|(t, path)| {
                if *t == source {
                    return Ok(self.identity(source, measure));
                }
                match path {
                    None => Ok(SenseRelatedness::unrelated(measure)),
                    Some((senses, edges)) => {
                        let path = SemanticPath::new(self.graph, senses, edges)?;
                        let value = match measure {
                            Measure::Sr => path.scm * path.spe,
                            _ => path.scm,
                        };
                        Ok(SenseRelatedness {
                            value,
                            witness: Some(path),
                            measure,
                        })
                    }
                }
            })
            .collect()
    }

    /// Composite edge weight used by the SR search.
    pub fn composite_weight(&self, from: SenseId, kind: EdgeKind, to: SenseId) -> f64 {
        let g = self.graph;
        g.weights().get(kind)
            * depth_factor(g.depth(from) as f64, g.depth(to) as f64, g.max_depth() as f64)
    }

    fn allowed(&self, kind: EdgeKind) -> bool {
        !self.options.excluded.contains(kind.category())
    }

    fn check(&self, s: SenseId) -> Result<()> {
        if self.graph.contains(s) {
            Ok(())
        } else {
            Err(Error::UnknownSense(format!("#{}", s.0)))
        }
    }
}

/// Convenience wrapper over [`PathFinder::max_relatedness`] with default options.
pub fn max_relatedness(graph: &ThesaurusGraph, s1: SenseId, s2: SenseId, measure: Measure) -> Result<SenseRelatedness> {
    PathFinder::new(graph).max_relatedness(s1, s2, measure)
}
