#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use semrel::thesaurus::ThesaurusBuilder;
use semrel::{EdgeCategory, EdgeKind, PartOfSpeech, SenseId, ThesaurusGraph, WeightConfig};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn vehicles() -> ThesaurusGraph {
    ThesaurusGraph::load(fixture("vehicles_lexicon.tsv"), fixture("vehicles_edges.tsv"), None, None).expect("fixture loads")
}

/// Words of the fixture lexicon plus two unknown words.
pub const VEHICLES_WORDS: &[&str] = &[
    "car", "automobile", "auto", "vehicle", "conveyance", "instrumentality", "artifact", "whole", "object",
    "entity", "accelerator", "pedal", "lever", "device", "bus", "autobus", "coach", "xyzzy", "plugh",
];

/// A random graph with per-category weights drawn from (0.05, 0.95) and every
/// depth fixed in 1..=6.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> ThesaurusGraph {
    random_builder(rng, max_nodes, max_edges).0.build()
}

/// Builder plus the declared (source, kind, target) edges.
pub fn random_builder(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
    max_edges: usize,
) -> (ThesaurusBuilder, Vec<(SenseId, EdgeKind, SenseId)>) {
    let n = rng.gen_range(2..=max_nodes);
    let mut b = ThesaurusBuilder::new();
    let ids: Vec<SenseId> = (0..n)
        .map(|i| b.add_sense(&format!("s{i}"), PartOfSpeech::Noun).unwrap())
        .collect();
    let mut weights = WeightConfig::default();
    for c in EdgeCategory::ALL {
        let mut w = rng.gen_range(0.05..0.95);
        while w <= 0.05 {
            w = rng.gen_range(0.05..0.95);
        }
        weights.set(c, w).unwrap();
    }
    b.weights(weights);
    let mut declared = Vec::new();
    let m = rng.gen_range(1..=max_edges);
    while declared.len() < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v {
            if n == 1 {
                break;
            }
            continue;
        }
        let kind = EdgeKind::ALL[rng.gen_range(0..EdgeKind::ALL.len())];
        b.add_edge(ids[u], kind, ids[v]);
        declared.push((ids[u], kind, ids[v]));
    }
    for id in &ids {
        b.depth_override(*id, rng.gen_range(1..=6)).unwrap();
    }
    (b, declared)
}

/// A random text over the fixture vocabulary.
pub fn random_text(rng: &mut ChaCha8Rng, max_words: usize) -> String {
    let n = rng.gen_range(1..=max_words);
    (0..n)
        .map(|_| VEHICLES_WORDS[rng.gen_range(0..VEHICLES_WORDS.len())])
        .collect::<Vec<_>>()
        .join(" ")
}
