//! Hierarchy-only comparison measures: Leacock–Chodorow path scaling and the
//! information-content measures of Resnik, Jiang–Conrath and Lin.

use std::collections::{HashMap, VecDeque};
use std::path::{Path, PathBuf};

use super::Measure;
use crate::error::{Error, Result};
use crate::thesaurus::{EdgeKind, SenseId, ThesaurusGraph};
use crate::tsv;

/// Value returned by Jiang–Conrath when its denominator vanishes.
pub const DEFAULT_JC_MAX: f64 = 1e9;

/// Corpus probability per sense; information content is `-ln P`.
#[derive(Debug, Clone, Default)]
pub struct IcTable {
    probs: HashMap<SenseId, f64>,
}

impl IcTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sense: SenseId, probability: f64) -> Result<()> {
        if !(probability > 0.0 && probability <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "probability {probability} outside (0,1]"
            )));
        }
        self.probs.insert(sense, probability);
        Ok(())
    }

    /// Reads `sense_key<TAB>probability` rows.
    pub fn load(path: &Path, graph: &ThesaurusGraph) -> Result<Self> {
        let mut table = IcTable::new();
        for row in tsv::read_rows(path, false)? {
            row.expect_fields(path, 2)?;
            let sense = graph.sense_by_key(&row.fields[0]).ok_or_else(|| Error::DanglingSense {
                key: row.fields[0].clone(),
                path: PathBuf::from(path),
                line: row.line,
            })?;
            let p = row.parse_f64(path, 1)?;
            table
                .insert(sense, p)
                .map_err(|e| Error::parse(path, row.line, e.to_string()))?;
        }
        let violations = table.monotonicity_violations(graph);
        if violations > 0 {
            log::warn!(
                "{}: {violations} hypernym links where the ancestor is less probable than the child",
                path.display()
            );
        }
        Ok(table)
    }

    pub fn probability(&self, sense: SenseId) -> Option<f64> {
        self.probs.get(&sense).copied()
    }

    pub fn ic(&self, sense: SenseId) -> Option<f64> {
        self.probability(sense).map(|p| -p.ln())
    }

    /// Hypernym links whose parent probability is below the child's.
    pub fn monotonicity_violations(&self, graph: &ThesaurusGraph) -> usize {
        let mut count = 0;
        for u in graph.sense_ids() {
            let Some(pu) = self.probability(u) else { continue };
            for e in graph.edges(u).iter().filter(|e| e.kind == EdgeKind::Hypernym) {
                if let Some(pv) = self.probability(e.target) {
                    if pv < pu {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

pub struct Baselines<'g> {
    graph: &'g ThesaurusGraph,
    ic: Option<&'g IcTable>,
    jc_max: f64,
}

impl<'g> Baselines<'g> {
    pub fn new(graph: &'g ThesaurusGraph, ic: Option<&'g IcTable>) -> Self {
        Baselines {
            graph,
            ic,
            jc_max: DEFAULT_JC_MAX,
        }
    }

    pub fn with_jc_max(mut self, jc_max: f64) -> Self {
        self.jc_max = jc_max;
        self
    }

    pub fn similarity(&self, measure: Measure, s1: SenseId, s2: SenseId) -> Result<f64> {
        for s in [s1, s2] {
            if !self.graph.contains(s) {
                return Err(Error::UnknownSense(format!("#{}", s.0)));
            }
        }
        match measure {
            Measure::Leacock => Ok(self.leacock(s1, s2)),
            Measure::Resnik => {
                let ic = self.table(measure)?;
                Ok(self.lcs(ic, s1, s2).map(|(_, ic0)| ic0).unwrap_or(0.0))
            }
            Measure::Lin => {
                let ic = self.table(measure)?;
                let (ic1, ic2) = (self.ic_of(ic, s1)?, self.ic_of(ic, s2)?);
                let Some((_, ic0)) = self.lcs(ic, s1, s2) else {
                    return Ok(0.0);
                };
                let denom = ic1 + ic2;
                if denom == 0.0 {
                    return Ok(if s1 == s2 { 1.0 } else { 0.0 });
                }
                Ok(2.0 * ic0 / denom)
            }
            Measure::JiangConrath => {
                let ic = self.table(measure)?;
                let (ic1, ic2) = (self.ic_of(ic, s1)?, self.ic_of(ic, s2)?);
                let Some((_, ic0)) = self.lcs(ic, s1, s2) else {
                    return Ok(0.0);
                };
                let denom = ic1 + ic2 - 2.0 * ic0;
                if denom <= 0.0 {
                    return Ok(self.jc_max);
                }
                Ok((1.0 / denom).min(self.jc_max))
            }
            other => Err(Error::InvalidInput(format!("{other} is not a baseline measure"))),
        }
    }

    /// `-ln(length / 2D)` with `length` the node count of the shortest
    /// hypernym/hyponym path and `D` the maximum depth; 0 with no such path.
    pub fn leacock(&self, s1: SenseId, s2: SenseId) -> f64 {
        match self.hierarchy_hops(s1, s2) {
            None => 0.0,
            Some(hops) => {
                let length = (hops + 1) as f64;
                -(length / (2.0 * self.graph.max_depth() as f64)).ln()
            }
        }
    }

    /// Least common subsumer: the common hypernym ancestor (a sense subsumes
    /// itself) with the highest information content. Ancestors without a
    /// probability are skipped; ties go to the lower index.
    pub fn lcs(&self, ic: &IcTable, s1: SenseId, s2: SenseId) -> Option<(SenseId, f64)> {
        let a1 = self.ancestors(s1);
        let a2 = self.ancestors(s2);
        let mut best: Option<(SenseId, f64)> = None;
        let mut common: Vec<SenseId> = a1.into_iter().filter(|s| a2.contains(s)).collect();
        common.sort();
        for s in common {
            if let Some(v) = ic.ic(s) {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((s, v));
                }
            }
        }
        best
    }

    fn ancestors(&self, s: SenseId) -> Vec<SenseId> {
        let mut seen = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in self.graph.edges(u).iter().filter(|e| e.kind == EdgeKind::Hypernym) {
                if !seen.contains(&e.target) {
                    seen.push(e.target);
                    queue.push_back(e.target);
                }
            }
        }
        seen
    }

    fn hierarchy_hops(&self, s1: SenseId, s2: SenseId) -> Option<usize> {
        let mut dist: HashMap<SenseId, usize> = HashMap::from([(s1, 0)]);
        let mut queue = VecDeque::from([s1]);
        while let Some(u) = queue.pop_front() {
            if u == s2 {
                return dist.get(&u).copied();
            }
            let du = dist[&u];
            for e in self.graph.edges(u) {
                if matches!(e.kind, EdgeKind::Hypernym | EdgeKind::Hyponym) && !dist.contains_key(&e.target) {
                    dist.insert(e.target, du + 1);
                    queue.push_back(e.target);
                }
            }
        }
        None
    }

    fn table(&self, measure: Measure) -> Result<&'g IcTable> {
        self.ic.ok_or(Error::MissingIcTable(measure.name()))
    }

    fn ic_of(&self, ic: &IcTable, s: SenseId) -> Result<f64> {
        ic.ic(s)
            .ok_or_else(|| Error::MissingIc(self.graph.sense(s).key.clone()))
    }
}

/// One-shot form of [`Baselines::similarity`].
pub fn baseline_similarity(
    measure: Measure,
    s1: SenseId,
    s2: SenseId,
    graph: &ThesaurusGraph,
    ic: Option<&IcTable>,
) -> Result<f64> {
    Baselines::new(graph, ic).similarity(measure, s1, s2)
}
