//! In-memory thesaurus: senses, typed weighted edges, a lemma lexicon and a
//! depth table, loaded from neutral TSV files.

mod depth;
mod edge;
pub mod morph;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tsv;

pub use depth::DepthTable;
pub use edge::{EdgeCategory, EdgeKind, WeightConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PartOfSpeech {
    pub fn code(self) -> char {
        match self {
            PartOfSpeech::Noun => 'n',
            PartOfSpeech::Verb => 'v',
            PartOfSpeech::Adjective => 'a',
            PartOfSpeech::Adverb => 'r',
        }
    }
}

impl FromStr for PartOfSpeech {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n" | "noun" => Ok(PartOfSpeech::Noun),
            "v" | "verb" => Ok(PartOfSpeech::Verb),
            "a" | "s" | "adj" | "adjective" => Ok(PartOfSpeech::Adjective),
            "r" | "adv" | "adverb" => Ok(PartOfSpeech::Adverb),
            other => Err(Error::InvalidInput(format!("unknown part of speech `{other}`"))),
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adjective => "adjective",
            PartOfSpeech::Adverb => "adverb",
        };
        f.write_str(name)
    }
}

/// Dense index of a sense within one loaded thesaurus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SenseId(pub u32);

impl SenseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sense {
    pub key: String,
    pub pos: PartOfSpeech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub target: SenseId,
    pub kind: EdgeKind,
}

/// Set of relation categories, used to switch relation types off during search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CategorySet(u32);

impl CategorySet {
    pub fn empty() -> Self {
        CategorySet(0)
    }

    pub fn insert(&mut self, c: EdgeCategory) {
        self.0 |= 1 << c.index();
    }

    pub fn contains(&self, c: EdgeCategory) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeCategory> + '_ {
        EdgeCategory::ALL.into_iter().filter(|c| self.contains(*c))
    }
}

impl FromIterator<EdgeCategory> for CategorySet {
    fn from_iter<I: IntoIterator<Item = EdgeCategory>>(iter: I) -> Self {
        let mut set = CategorySet::empty();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

/// Incremental construction of a [`ThesaurusGraph`]. Inverse edges are
/// synthesized and depths computed in [`ThesaurusBuilder::build`].
#[derive(Debug, Default)]
pub struct ThesaurusBuilder {
    senses: Vec<Sense>,
    key_index: HashMap<String, SenseId>,
    lexicon: HashMap<String, BTreeSet<SenseId>>,
    edges: BTreeSet<(SenseId, EdgeKind, SenseId)>,
    weights: WeightConfig,
    depth_overrides: HashMap<SenseId, u32>,
}

impl ThesaurusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a sense, returning the existing id when the key is known.
    pub fn add_sense(&mut self, key: &str, pos: PartOfSpeech) -> Result<SenseId> {
        if let Some(&id) = self.key_index.get(key) {
            let existing = self.senses[id.index()].pos;
            if existing != pos {
                return Err(Error::InvalidInput(format!(
                    "sense `{key}` declared as both {existing} and {pos}"
                )));
            }
            return Ok(id);
        }
        let id = SenseId(self.senses.len() as u32);
        self.senses.push(Sense {
            key: key.to_string(),
            pos,
        });
        self.key_index.insert(key.to_string(), id);
        Ok(id)
    }

    pub fn sense_id(&self, key: &str) -> Option<SenseId> {
        self.key_index.get(key).copied()
    }

    pub fn add_lemma(&mut self, lemma: &str, sense: SenseId) {
        self.lexicon
            .entry(morph::normalize_lemma(lemma))
            .or_default()
            .insert(sense);
    }

    /// Adds a directed edge. Self-loops carry no path information and are dropped.
    pub fn add_edge(&mut self, source: SenseId, kind: EdgeKind, target: SenseId) {
        if source != target {
            self.edges.insert((source, kind, target));
        }
    }

    pub fn remove_edge(&mut self, source: SenseId, kind: EdgeKind, target: SenseId) {
        self.edges.remove(&(source, kind, target));
        self.edges.remove(&(target, kind.inverse(), source));
    }

    pub fn weights(&mut self, weights: WeightConfig) -> &mut Self {
        self.weights = weights;
        self
    }

    pub fn depth_override(&mut self, sense: SenseId, depth: u32) -> Result<()> {
        if depth == 0 {
            return Err(Error::InvalidInput(format!(
                "depth override for `{}` must be >= 1",
                self.senses[sense.index()].key
            )));
        }
        self.depth_overrides.insert(sense, depth);
        Ok(())
    }

    pub fn build(&self) -> ThesaurusGraph {
        let n = self.senses.len();
        let mut all: BTreeSet<(SenseId, EdgeKind, SenseId)> = self.edges.clone();
        for &(u, k, v) in &self.edges {
            all.insert((v, k.inverse(), u));
        }
        let mut adjacency: Vec<Vec<Edge>> = vec![Vec::new(); n];
        let mut cross_pos = CategorySet::empty();
        for (u, kind, target) in all {
            if self.senses[u.index()].pos != self.senses[target.index()].pos {
                cross_pos.insert(kind.category());
            }
            adjacency[u.index()].push(Edge { target, kind });
        }
        for list in &mut adjacency {
            list.sort();
        }

        let pos: Vec<PartOfSpeech> = self.senses.iter().map(|s| s.pos).collect();
        let depths = depth::compute(&pos, &adjacency, &self.depth_overrides);
        let lexicon = self
            .lexicon
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().copied().collect()))
            .collect();

        ThesaurusGraph {
            senses: self.senses.clone(),
            key_index: self.key_index.clone(),
            adjacency,
            lexicon,
            depths,
            weights: self.weights.clone(),
            cross_pos,
            depth_overrides: self.depth_overrides.clone(),
        }
    }
}

/// The loaded thesaurus. Immutable once built; share it freely across threads.
#[derive(Debug, Clone)]
pub struct ThesaurusGraph {
    senses: Vec<Sense>,
    key_index: HashMap<String, SenseId>,
    adjacency: Vec<Vec<Edge>>,
    lexicon: HashMap<String, Vec<SenseId>>,
    depths: DepthTable,
    weights: WeightConfig,
    cross_pos: CategorySet,
    depth_overrides: HashMap<SenseId, u32>,
}

impl ThesaurusGraph {
    /// Loads the lexicon and edge files, with optional weight and depth
    /// override files.
    pub fn load(
        lexicon: impl AsRef<Path>,
        edges: impl AsRef<Path>,
        weight_overrides: Option<&Path>,
        depth_overrides: Option<&Path>,
    ) -> Result<Self> {
        let weights = match weight_overrides {
            Some(p) => WeightConfig::from_overrides(p)?,
            None => WeightConfig::default(),
        };
        let lexicon = lexicon.as_ref();
        let edges = edges.as_ref();
        let mut builder = ThesaurusBuilder::new();
        builder.weights(weights);
        read_lexicon(&mut builder, &tsv::read_to_string(lexicon)?, lexicon)?;
        read_edges(&mut builder, &tsv::read_to_string(edges)?, edges)?;
        if let Some(p) = depth_overrides {
            read_depths(&mut builder, &tsv::read_to_string(p)?, p)?;
        }
        Ok(builder.build())
    }

    /// Parses lexicon and edge data already held in memory.
    pub fn from_tsv(lexicon: &str, edges: &str, weights: WeightConfig) -> Result<Self> {
        let mut builder = ThesaurusBuilder::new();
        builder.weights(weights);
        read_lexicon(&mut builder, lexicon, Path::new("<lexicon>"))?;
        read_edges(&mut builder, edges, Path::new("<edges>"))?;
        Ok(builder.build())
    }

    /// A builder pre-populated with this graph's senses, lexicon, original
    /// edges, weights and depth overrides.
    pub fn to_builder(&self) -> ThesaurusBuilder {
        let mut b = ThesaurusBuilder::new();
        for s in &self.senses {
            b.add_sense(&s.key, s.pos).expect("consistent senses");
        }
        for (lemma, ids) in &self.lexicon {
            for id in ids {
                b.add_lemma(lemma, *id);
            }
        }
        for (u, edges) in self.adjacency.iter().enumerate() {
            for e in edges {
                b.add_edge(SenseId(u as u32), e.kind, e.target);
            }
        }
        b.weights(self.weights.clone());
        b.depth_overrides = self.depth_overrides.clone();
        b
    }

    pub fn len(&self) -> usize {
        self.senses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn sense(&self, id: SenseId) -> &Sense {
        &self.senses[id.index()]
    }

    pub fn sense_ids(&self) -> impl Iterator<Item = SenseId> {
        (0..self.senses.len() as u32).map(SenseId)
    }

    pub fn sense_by_key(&self, key: &str) -> Option<SenseId> {
        self.key_index.get(key).copied()
    }

    pub fn require(&self, key: &str) -> Result<SenseId> {
        self.sense_by_key(key)
            .ok_or_else(|| Error::UnknownSense(key.to_string()))
    }

    pub fn contains(&self, id: SenseId) -> bool {
        id.index() < self.senses.len()
    }

    /// Outgoing edges, sorted by target index and then edge kind.
    pub fn edges(&self, id: SenseId) -> &[Edge] {
        &self.adjacency[id.index()]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn depths(&self) -> &DepthTable {
        &self.depths
    }

    pub fn depth(&self, id: SenseId) -> u32 {
        self.depths.get(id).expect("every sense has a depth")
    }

    pub fn max_depth(&self) -> u32 {
        self.depths.max_depth()
    }

    pub fn weights(&self) -> &WeightConfig {
        &self.weights
    }

    /// Categories with at least one edge joining senses of different parts of
    /// speech.
    pub fn cross_pos_categories(&self) -> CategorySet {
        self.cross_pos
    }

    pub fn lemma_count(&self) -> usize {
        self.lexicon.len()
    }

    /// Senses listed under an already-normalized lemma.
    pub fn lemma_senses(&self, lemma: &str) -> &[SenseId] {
        self.lexicon.get(lemma).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Senses of a raw token: lowercased, then the first candidate base form
    /// present in the lexicon wins (raw form first). Empty means
    /// out-of-vocabulary.
    pub fn senses_of(&self, term: &str) -> Vec<SenseId> {
        self.resolve_lemma(term)
            .map(|lemma| self.lemma_senses(&lemma).to_vec())
            .unwrap_or_default()
    }

    /// Like [`senses_of`](Self::senses_of), restricted to one part of speech.
    pub fn senses_of_pos(&self, term: &str, pos: PartOfSpeech) -> Vec<SenseId> {
        self.senses_of(term)
            .into_iter()
            .filter(|s| self.sense(*s).pos == pos)
            .collect()
    }

    /// The lexicon lemma a raw token resolves to, if any.
    pub fn resolve_lemma(&self, term: &str) -> Option<String> {
        let word = morph::normalize_lemma(term);
        if word.is_empty() {
            return None;
        }
        morph::candidates(&word)
            .into_iter()
            .find(|(form, pos)| {
                let senses = self.lemma_senses(form);
                match pos {
                    None => !senses.is_empty(),
                    Some(p) => senses.iter().any(|s| self.sense(*s).pos == *p),
                }
            })
            .map(|(form, _)| form)
    }

    /// Recomputes the depth table from the hierarchy edges and overrides.
    pub fn compute_depths(&self) -> DepthTable {
        let pos: Vec<PartOfSpeech> = self.senses.iter().map(|s| s.pos).collect();
        depth::compute(&pos, &self.adjacency, &self.depth_overrides)
    }

    /// SHA-256 over everything that influences relatedness values: senses,
    /// edges, weights and depths.
    pub fn fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update((self.senses.len() as u64).to_le_bytes());
        for (i, s) in self.senses.iter().enumerate() {
            h.update(s.key.as_bytes());
            h.update([0, s.pos.code() as u8]);
            h.update(self.depths.as_slice()[i].to_le_bytes());
            for e in &self.adjacency[i] {
                h.update(e.target.0.to_le_bytes());
                h.update([e.kind as u8]);
            }
            h.update([0xff]);
        }
        h.update(self.depths.max_depth().to_le_bytes());
        for (_, w) in self.weights.entries() {
            h.update(w.to_bits().to_le_bytes());
        }
        let digest = h.finalize();
        let mut out = [0u8; 32];
        out.copy_from_slice(digest.as_slice());
        out
    }
}

fn read_lexicon(b: &mut ThesaurusBuilder, text: &str, path: &Path) -> Result<()> {
    for row in tsv::rows(text, false) {
        row.expect_fields(path, 3)?;
        let pos: PartOfSpeech = row.fields[1]
            .parse()
            .map_err(|e: Error| Error::parse(path, row.line, e.to_string()))?;
        let key = &row.fields[2];
        if row.fields[0].is_empty() || key.is_empty() {
            return Err(Error::parse(path, row.line, "empty lemma or sense key"));
        }
        let id = b
            .add_sense(key, pos)
            .map_err(|e| Error::parse(path, row.line, e.to_string()))?;
        b.add_lemma(&row.fields[0], id);
    }
    Ok(())
}

fn read_edges(b: &mut ThesaurusBuilder, text: &str, path: &Path) -> Result<()> {
    for row in tsv::rows(text, false) {
        row.expect_fields(path, 3)?;
        let lookup = |key: &str| {
            b.sense_id(key).ok_or_else(|| Error::DanglingSense {
                key: key.to_string(),
                path: PathBuf::from(path),
                line: row.line,
            })
        };
        let source = lookup(&row.fields[0])?;
        let target = lookup(&row.fields[2])?;
        let kind: EdgeKind = row.fields[1].parse()?;
        b.add_edge(source, kind, target);
    }
    Ok(())
}

fn read_depths(b: &mut ThesaurusBuilder, text: &str, path: &Path) -> Result<()> {
    for row in tsv::rows(text, false) {
        row.expect_fields(path, 2)?;
        let id = b.sense_id(&row.fields[0]).ok_or_else(|| Error::DanglingSense {
            key: row.fields[0].clone(),
            path: PathBuf::from(path),
            line: row.line,
        })?;
        let depth = row.parse_usize(path, 1)?;
        if depth == 0 || depth > u32::MAX as usize {
            return Err(Error::parse(path, row.line, "depth must be >= 1"));
        }
        b.depth_override(id, depth as u32)?;
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;

    fn three_synsets() -> ThesaurusGraph {
        let lex = "car\tn\tcar.n.01\nvehicle\tn\tvehicle.n.01\ntree\tn\ttree.n.01\n";
        let edges = "car.n.01\thypernym\tvehicle.n.01\n";
        ThesaurusGraph::from_tsv(lex, edges, WeightConfig::default()).unwrap()
    }

    #[test]
    fn minimal_fixture_synthesizes_inverse() {
        let g = three_synsets();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 2);
        let car = g.require("car.n.01").unwrap();
        let vehicle = g.require("vehicle.n.01").unwrap();
        assert_eq!(g.edges(car), &[Edge { target: vehicle, kind: EdgeKind::Hypernym }]);
        assert_eq!(g.edges(vehicle), &[Edge { target: car, kind: EdgeKind::Hyponym }]);
    }

    #[test]
    fn inverse_closed_with_equal_weights() {
        let g = fixtures::vehicles();
        for u in g.sense_ids() {
            for e in g.edges(u) {
                let back = g
                    .edges(e.target)
                    .iter()
                    .find(|b| b.target == u && b.kind == e.kind.inverse());
                assert!(back.is_some(), "{} -{}-> missing inverse", g.sense(u).key, e.kind);
                assert_eq!(g.weights().get(e.kind), g.weights().get(e.kind.inverse()));
            }
        }
    }

    #[test]
    fn vehicles_edge_weights() {
        let g = fixtures::vehicles();
        let car = g.senses_of("car")[0];
        let kinds: BTreeSet<EdgeKind> = g.edges(car).iter().map(|e| e.kind).collect();
        assert!(kinds.contains(&EdgeKind::PartMeronym));
        assert!(kinds.contains(&EdgeKind::Hypernym));
        assert_eq!(g.weights().get(EdgeKind::Hypernym), 0.61);
        assert_eq!(g.weights().get(EdgeKind::PartMeronym), 0.0367);
    }

    #[test]
    fn unknown_edge_type_rejected() {
        let lex = "a\tn\tA\nb\tn\tB\n";
        let err = ThesaurusGraph::from_tsv(lex, "A\tis_a\tB\n", WeightConfig::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownEdgeType(ref t) if t == "is_a"));
    }

    #[test]
    fn dangling_reference_reports_line() {
        let lex = "a\tn\tA\n";
        let err = ThesaurusGraph::from_tsv(lex, "# c\nA\thypernym\tZ\n", WeightConfig::default())
            .unwrap_err();
        match err {
            Error::DanglingSense { key, line, .. } => {
                assert_eq!(key, "Z");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_line_reports_line() {
        let err = ThesaurusGraph::from_tsv("a\tn\tA\nb\tn\n", "", WeightConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn depths_on_chain_and_root() {
        let lex = "r\tn\tR\na\tn\tA\nb\tn\tB\n";
        let edges = "R\thyponym\tA\nA\thyponym\tB\n";
        let g = ThesaurusGraph::from_tsv(lex, edges, WeightConfig::default()).unwrap();
        assert_eq!(g.depth(g.require("R").unwrap()), 1);
        assert_eq!(g.depth(g.require("B").unwrap()), 3);
        assert_eq!(g.max_depth(), 3);
    }

    #[test]
    fn diamond_takes_shallowest_parent() {
        // Parent P1 at depth 2, parent P2 at depth 4; child C should be 3.
        // Oracle: enumerate every upward hypernym path from C by hand:
        // C-P1-R (2 hops), C-P2-X-Y-R (4 hops); shortest is 2 hops -> depth 3.
        let lex = "r\tn\tR\np\tn\tP1\nx\tn\tX\ny\tn\tY\nq\tn\tP2\nc\tn\tC\n";
        let edges = "P1\thypernym\tR\nX\thypernym\tR\nY\thypernym\tX\nP2\thypernym\tY\nC\thypernym\tP1\nC\thypernym\tP2\n";
        let g = ThesaurusGraph::from_tsv(lex, edges, WeightConfig::default()).unwrap();
        assert_eq!(g.depth(g.require("P1").unwrap()), 2);
        assert_eq!(g.depth(g.require("P2").unwrap()), 4);
        assert_eq!(g.depth(g.require("C").unwrap()), 3);
    }

    #[test]
    fn adverb_inherits_stem_adjective_depth() {
        let lex = "quick\ta\tQ\nfast\ta\tF\nquickly\tr\tQL\nswiftly\tr\tSL\n";
        let edges = "Q\thypernym\tF\nQL\tderived\tQ\n";
        let g = ThesaurusGraph::from_tsv(lex, edges, WeightConfig::default()).unwrap();
        assert_eq!(g.depth(g.require("Q").unwrap()), 2);
        assert_eq!(g.depth(g.require("QL").unwrap()), 2);
        assert_eq!(g.depth(g.require("SL").unwrap()), 1);
        assert!(g.cross_pos_categories().contains(EdgeCategory::Derived));
        assert!(!g.cross_pos_categories().contains(EdgeCategory::HypernymHyponym));
    }

    #[test]
    fn hypernym_cycle_falls_back_to_one() {
        let lex = "a\tn\tA\nb\tn\tB\n";
        let edges = "A\thypernym\tB\nB\thypernym\tA\n";
        let g = ThesaurusGraph::from_tsv(lex, edges, WeightConfig::default()).unwrap();
        assert_eq!(g.depth(SenseId(0)), 1);
        assert_eq!(g.depth(SenseId(1)), 1);
    }

    #[test]
    fn senses_of_applies_morphology() {
        let g = fixtures::vehicles();
        let car = g.senses_of("car");
        assert_eq!(car.len(), 1);
        assert_eq!(g.sense(car[0]).key, "car.n.01");
        assert_eq!(g.senses_of("cars"), car);
        assert_eq!(g.senses_of("CAR"), car);
        assert!(g.senses_of("xyzzy").is_empty());
        assert!(g.senses_of("").is_empty());
    }

    #[test]
    fn depths_are_deterministic() {
        let a = fixtures::vehicles();
        let b = fixtures::vehicles();
        assert_eq!(a.depths(), b.depths());
        assert_eq!(a.compute_depths(), *a.depths());
        assert_eq!(a.fingerprint(), b.fingerprint());
        for s in a.sense_ids() {
            assert!(a.depth(s) >= 1 && a.depth(s) <= a.max_depth());
        }
    }

    #[test]
    fn fingerprint_tracks_edits() {
        let g = fixtures::vehicles();
        let mut b = g.to_builder();
        let car = g.senses_of("car")[0];
        let acc = g.senses_of("accelerator")[0];
        b.remove_edge(car, EdgeKind::PartMeronym, acc);
        let edited = b.build();
        assert_ne!(g.fingerprint(), edited.fingerprint());
        assert_eq!(g.fingerprint(), g.to_builder().build().fingerprint());
    }
}
