use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{Edge, EdgeKind, PartOfSpeech, SenseId};
use crate::error::{Error, Result};

/// Hierarchy depth of every sense (roots have depth 1) and the global maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthTable {
    depths: Vec<u32>,
    max: u32,
}

impl DepthTable {
    /// Builds a table from explicit depths; the maximum is taken from the data.
    pub fn new(depths: Vec<u32>) -> Result<Self> {
        let max = depths.iter().copied().max().unwrap_or(1);
        Self::with_max(depths, max)
    }

    /// Builds a table whose normalizing maximum may exceed every stored depth.
    pub fn with_max(depths: Vec<u32>, max: u32) -> Result<Self> {
        if depths.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("depths must be >= 1".into()));
        }
        if depths.iter().any(|&d| d > max) || max == 0 {
            return Err(Error::InvalidInput(format!("maximum depth {max} is below a stored depth")));
        }
        Ok(DepthTable { depths, max })
    }

    pub fn get(&self, sense: SenseId) -> Option<u32> {
        self.depths.get(sense.index()).copied()
    }

    pub fn max_depth(&self) -> u32 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.depths
    }
}

/// Depth = 1 + fewest hypernym hops to a root, where a root has no outgoing
/// hypernym edge. Adverbs take the shallowest depth among the adjectives they
/// are derived from. Senses left unreached (hypernym cycles) fall back to 1,
/// and explicit overrides win over everything.
pub(crate) fn compute(
    pos: &[PartOfSpeech],
    adjacency: &[Vec<Edge>],
    overrides: &HashMap<SenseId, u32>,
) -> DepthTable {
    let n = pos.len();
    let mut depth = vec![0u32; n];
    let mut queue = VecDeque::new();

    for (i, edges) in adjacency.iter().enumerate() {
        if !edges.iter().any(|e| e.kind == EdgeKind::Hypernym) {
            depth[i] = 1;
            queue.push_back(i);
        }
    }
    while let Some(u) = queue.pop_front() {
        for e in adjacency[u].iter().filter(|e| e.kind == EdgeKind::Hyponym) {
            let v = e.target.index();
            if depth[v] == 0 {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    for d in depth.iter_mut().filter(|d| **d == 0) {
        *d = 1;
    }

    let stem_depths: Vec<Option<u32>> = (0..n)
        .map(|i| {
            if pos[i] != PartOfSpeech::Adverb {
                return None;
            }
            adjacency[i]
                .iter()
                .filter(|e| e.kind == EdgeKind::Derived && pos[e.target.index()] == PartOfSpeech::Adjective)
                .map(|e| depth[e.target.index()])
                .min()
        })
        .collect();
    for (i, stem) in stem_depths.into_iter().enumerate() {
        if let Some(d) = stem {
            depth[i] = d;
        }
    }

    for (sense, d) in overrides {
        depth[sense.index()] = *d;
    }

    let max = depth.iter().copied().max().unwrap_or(1);
    DepthTable { depths: depth, max }
}
