//! Semantic relatedness over a weighted thesaurus graph.
//!
//! Senses are related by the best path between them, scored as the product of
//! per-edge type weights (compactness) and per-hop depth factors (elaboration).
//! Word relatedness takes the best sense pair; text relatedness combines word
//! relatedness with TF-IDF lexical weights.
//!
//! ```no_run
//! use semrel::thesaurus::ThesaurusGraph;
//! use semrel::termrel::TermRelatedness;
//!
//! # fn main() -> semrel::Result<()> {
//! let graph = ThesaurusGraph::load("lexicon.tsv", "edges.tsv", None, None)?;
//! let terms = TermRelatedness::new(&graph);
//! println!("{:.6}", terms.score("car", "automobile")?.value);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod pathfinder;
pub mod store;
pub mod tasks;
pub mod termrel;
pub mod textrel;
pub mod thesaurus;

pub(crate) mod tsv;

pub use error::{Error, Result};
pub use pathfinder::{Measure, PathFinder, SearchOptions, SemanticPath, SenseRelatedness};
pub use store::{PairCache, PairCacheFile, PairLookup};
pub use termrel::{TermOptions, TermPairScore, TermRelatedness};
pub use textrel::{Omiotis, TextPairScore, TokenizedText};
pub use thesaurus::{EdgeCategory, EdgeKind, PartOfSpeech, SenseId, ThesaurusGraph, WeightConfig};
