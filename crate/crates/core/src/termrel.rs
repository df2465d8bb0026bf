//! Term-level relatedness: the best sense pair over both terms' sense sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::pathfinder::baseline::{Baselines, IcTable};
use crate::pathfinder::{Measure, PathFinder, SearchOptions};
use crate::store::PairLookup;
use crate::thesaurus::morph::normalize_lemma;
use crate::thesaurus::{PartOfSpeech, SenseId, ThesaurusGraph};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TermOptions {
    /// Score identical in-vocabulary terms as 1 instead of their best
    /// self-pair value.
    pub identical_term_unity: bool,
    /// Only consider senses of this part of speech.
    pub pos_filter: Option<PartOfSpeech>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermPairScore {
    pub value: f64,
    pub best_pair: Option<(SenseId, SenseId)>,
    pub in_vocab: (bool, bool),
}

/// Search options that drop every relation linking senses of different parts
/// of speech.
pub fn same_pos_options(graph: &ThesaurusGraph) -> SearchOptions {
    SearchOptions {
        max_hops: None,
        excluded: graph.cross_pos_categories(),
    }
}

#[derive(Clone, Copy)]
pub struct TermRelatedness<'g> {
    finder: PathFinder<'g>,
    options: TermOptions,
    measure: Measure,
    ic: Option<&'g IcTable>,
    cache: Option<&'g dyn PairLookup>,
}

impl<'g> TermRelatedness<'g> {
    pub fn new(graph: &'g ThesaurusGraph) -> Self {
        TermRelatedness {
            finder: PathFinder::new(graph),
            options: TermOptions::default(),
            measure: Measure::Sr,
            ic: None,
            cache: None,
        }
    }

    pub fn with_search_options(mut self, options: SearchOptions) -> Self {
        self.finder = PathFinder::with_options(self.finder.graph(), options);
        self
    }

    pub fn with_options(mut self, options: TermOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_measure(mut self, measure: Measure) -> Self {
        self.measure = measure;
        self
    }

    pub fn with_ic(mut self, ic: &'g IcTable) -> Self {
        self.ic = Some(ic);
        self
    }

    /// Attaches a pair cache. It is consulted only where it cannot change a
    /// result: SR with unrestricted search.
    pub fn with_cache(mut self, cache: &'g dyn PairLookup) -> Result<Self> {
        cache.check(self.finder.graph())?;
        self.cache = Some(cache);
        Ok(self)
    }

    pub fn graph(&self) -> &'g ThesaurusGraph {
        self.finder.graph()
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn options(&self) -> TermOptions {
        self.options
    }

    /// Senses a raw term resolves to under the active options.
    pub fn senses(&self, term: &str) -> Vec<SenseId> {
        let graph = self.graph();
        match self.options.pos_filter {
            Some(pos) => graph.senses_of_pos(term, pos),
            None => graph.senses_of(term),
        }
    }

    pub fn score(&self, t1: &str, t2: &str) -> Result<TermPairScore> {
        let x1 = self.senses(t1);
        let x2 = self.senses(t2);
        let in_vocab = (!x1.is_empty(), !x2.is_empty());
        let identical = {
            let (n1, n2) = (normalize_lemma(t1), normalize_lemma(t2));
            n1 == n2 || (in_vocab.0 && in_vocab.1 && x1 == x2)
        };

        if x1.is_empty() || x2.is_empty() {
            let both_oov = !in_vocab.0 && !in_vocab.1;
            return Ok(TermPairScore {
                value: if both_oov && identical { 1.0 } else { 0.0 },
                best_pair: None,
                in_vocab,
            });
        }
        if identical && self.options.identical_term_unity {
            return Ok(TermPairScore {
                value: 1.0,
                best_pair: Some((x1[0], x1[0])),
                in_vocab,
            });
        }

        let values = self.pair_values(&x1, &x2)?;
        let mut best: Option<((SenseId, SenseId), f64)> = None;
        for &a in &x1 {
            for &b in &x2 {
                let v = values[&canonical(a, b)];
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some(((a, b), v));
                }
            }
        }
        let (pair, value) = best.expect("both sense sets nonempty");
        Ok(TermPairScore {
            value,
            best_pair: Some(pair),
            in_vocab,
        })
    }

    /// Relatedness of two senses under the active measure, using the cache
    /// when allowed.
    pub fn sense_value(&self, s1: SenseId, s2: SenseId) -> Result<f64> {
        if let Some(v) = self.cached(s1, s2)? {
            return Ok(v);
        }
        self.live_value(s1, s2)
    }

    fn live_value(&self, s1: SenseId, s2: SenseId) -> Result<f64> {
        if self.measure.is_path_measure() {
            Ok(self.finder.max_relatedness(s1, s2, self.measure)?.value)
        } else {
            Baselines::new(self.graph(), self.ic).similarity(self.measure, s1, s2)
        }
    }

    fn cache_usable(&self) -> bool {
        self.cache.is_some() && self.measure == Measure::Sr && self.finder.options().is_default()
    }

    fn cached(&self, s1: SenseId, s2: SenseId) -> Result<Option<f64>> {
        let Some(cache) = self.cache.filter(|_| self.cache_usable()) else {
            return Ok(None);
        };
        if s1 == s2 {
            return Ok(None);
        }
        match cache.get(s1, s2)? {
            Some(v) => Ok(Some(v)),
            None if cache.header().is_exhaustive() => Ok(Some(0.0)),
            None => Ok(None),
        }
    }

    /// Values for every sense pair, keyed by `(lo, hi)`. Max-product measures
    /// share one search per distinct lower sense.
    fn pair_values(&self, x1: &[SenseId], x2: &[SenseId]) -> Result<BTreeMap<(SenseId, SenseId), f64>> {
        let mut values = BTreeMap::new();
        let mut pending: BTreeMap<SenseId, Vec<SenseId>> = BTreeMap::new();
        let grouped = matches!(self.measure, Measure::Sr | Measure::Pr);
        for &a in x1 {
            for &b in x2 {
                let key = canonical(a, b);
                if values.contains_key(&key) {
                    continue;
                }
                if let Some(v) = self.cached(a, b)? {
                    values.insert(key, v);
                } else if grouped && a != b {
                    let his = pending.entry(key.0).or_default();
                    if !his.contains(&key.1) {
                        his.push(key.1);
                    }
                } else {
                    values.insert(key, self.live_value(key.0, key.1)?);
                }
            }
        }
        for (lo, his) in pending {
            for (hi, rel) in his.iter().zip(self.finder.relate_many(lo, &his, self.measure)?) {
                values.insert((lo, *hi), rel.value);
            }
        }
        Ok(values)
    }
}

fn canonical(a: SenseId, b: SenseId) -> (SenseId, SenseId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// SR between two raw terms with default options.
pub fn sr_terms(t1: &str, t2: &str, graph: &ThesaurusGraph, cache: Option<&dyn PairLookup>) -> Result<TermPairScore> {
    let mut terms = TermRelatedness::new(graph);
    if let Some(c) = cache {
        c.check(graph)?;
        terms.cache = Some(c);
    }
    terms.score(t1, t2)
}

impl std::fmt::Debug for TermRelatedness<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TermRelatedness")
            .field("measure", &self.measure)
            .field("options", &self.options)
            .field("search", &self.finder.options())
            .field("cached", &self.cache.is_some())
            .finish()
    }
}
