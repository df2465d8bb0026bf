//! Text relatedness: TF-IDF weighted best matches between the terms of two
//! texts, averaged in both directions.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::termrel::TermRelatedness;
use crate::tsv;

/// English stopwords used when no list is supplied.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
    "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "should",
    "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn",
    "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn", "weren", "won",
    "wouldn",
];

pub fn default_stopwords() -> HashSet<String> {
    DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect()
}

/// One word per line; blank lines and `#` comments are skipped.
pub fn load_stopwords(path: &Path) -> Result<HashSet<String>> {
    let text = tsv::read_to_string(path)?;
    Ok(tsv::rows(&text, false)
        .into_iter()
        .map(|r| r.fields[0].trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TokenizedText {
    pub terms: Vec<String>,
    pub tf: HashMap<String, usize>,
    pub source_id: String,
}

impl TokenizedText {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tf(&self, term: &str) -> usize {
        self.tf.get(term).copied().unwrap_or(0)
    }

    /// Distinct terms in order of first occurrence.
    pub fn distinct(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.terms
            .iter()
            .filter(|t| seen.insert(t.as_str()))
            .map(String::as_str)
            .collect()
    }
}

/// Lowercases, splits on runs of non-alphanumeric characters and drops
/// stopwords.
pub fn preprocess(raw: &str, stopwords: &HashSet<String>, source_id: &str) -> TokenizedText {
    let lower = raw.to_lowercase();
    let terms: Vec<String> = lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty() && !stopwords.contains(*t))
        .map(str::to_string)
        .collect();
    let mut tf = HashMap::new();
    for t in &terms {
        *tf.entry(t.clone()).or_insert(0) += 1;
    }
    TokenizedText {
        terms,
        tf,
        source_id: source_id.to_string(),
    }
}

/// Document frequencies over a corpus of `n` documents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    n: usize,
    df: HashMap<String, usize>,
}

impl CorpusStats {
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a TokenizedText>) -> Self {
        let mut stats = CorpusStats::default();
        for text in texts {
            stats.n += 1;
            for term in text.distinct() {
                *stats.df.entry(term.to_string()).or_insert(0) += 1;
            }
        }
        stats
    }

    /// Reads `term<TAB>df` rows preceded by a `#N<TAB>count` header.
    pub fn load(path: &Path) -> Result<Self> {
        let text = tsv::read_to_string(path)?;
        let mut n = None;
        let mut df = HashMap::new();
        for row in tsv::rows(&text, true) {
            if row.fields[0] == "#N" {
                row.expect_fields(path, 2)?;
                n = Some(row.parse_usize(path, 1)?);
                continue;
            }
            if row.fields[0].starts_with('#') {
                continue;
            }
            row.expect_fields(path, 2)?;
            let count = row.parse_usize(path, 1)?;
            let Some(total) = n else {
                return Err(Error::parse(path, row.line, "df row before the #N header"));
            };
            if count > total {
                return Err(Error::parse(path, row.line, format!("df {count} exceeds N = {total}")));
            }
            df.insert(row.fields[0].to_lowercase(), count);
        }
        let n = n.ok_or_else(|| Error::parse(path, 1, "missing #N header"))?;
        Ok(CorpusStats { n, df })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn df(&self, term: &str) -> usize {
        self.df.get(term).copied().unwrap_or(0)
    }

    pub fn idf(&self, term: &str) -> f64 {
        (1.0 + self.n as f64 / (1.0 + self.df(term) as f64)).ln()
    }
}

/// Lexical weight of a term inside a document.
pub trait TermWeighting: Sync {
    fn weight(&self, term: &str, doc: &TokenizedText) -> Result<f64>;
}

impl TermWeighting for CorpusStats {
    fn weight(&self, term: &str, doc: &TokenizedText) -> Result<f64> {
        tf_idf(term, doc, self)
    }
}

/// Multiplies another weighting by a constant.
pub struct Scaled<W> {
    pub inner: W,
    pub factor: f64,
}

impl<W: TermWeighting> TermWeighting for Scaled<W> {
    fn weight(&self, term: &str, doc: &TokenizedText) -> Result<f64> {
        Ok(self.inner.weight(term, doc)? * self.factor)
    }
}

/// `tf · ln(1 + N / (1 + df))`.
pub fn tf_idf(term: &str, doc: &TokenizedText, corpus: &CorpusStats) -> Result<f64> {
    let tf = doc.tf(term);
    if tf == 0 {
        return Err(Error::TermNotInText {
            term: term.to_string(),
            text: doc.source_id.clone(),
        });
    }
    Ok(tf as f64 * corpus.idf(term))
}

/// Harmonic mean, 0 when both weights are 0. Evaluated as
/// `lo · (2·hi / (lo + hi))`, which is symmetric and exact for equal inputs.
pub fn harmonic_mean(x: f64, y: f64) -> f64 {
    if x + y == 0.0 {
        return 0.0;
    }
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    lo * (2.0 * hi / (lo + hi))
}

/// Lexical relevance of `a` in `ta` and `b` in `tb`.
pub fn lambda(a: &str, ta: &TokenizedText, b: &str, tb: &TokenizedText, weights: &dyn TermWeighting) -> Result<f64> {
    Ok(harmonic_mean(weights.weight(a, ta)?, weights.weight(b, tb)?))
}

/// Relatedness of two terms.
pub trait TermSimilarity: Sync {
    fn similarity(&self, a: &str, b: &str) -> Result<f64>;
}

impl TermSimilarity for TermRelatedness<'_> {
    fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.score(a, b)?.value)
    }
}

impl<F: Fn(&str, &str) -> f64 + Sync> TermSimilarity for F {
    fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self(a, b))
    }
}

/// Remembers term-pair results; useful across the many text pairs of a
/// dataset, where the same words recur.
pub struct Memoized<S> {
    inner: S,
    memo: Mutex<HashMap<(String, String), f64>>,
}

impl<S: TermSimilarity> Memoized<S> {
    pub fn new(inner: S) -> Self {
        Memoized {
            inner,
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl<S: TermSimilarity> TermSimilarity for Memoized<S> {
    fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        let key = (a.to_string(), b.to_string());
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(*v);
        }
        let v = self.inner.similarity(a, b)?;
        self.memo.lock().expect("memo lock").insert(key, v);
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestMatch {
    pub term: String,
    pub partner: String,
    pub lambda: f64,
    pub sr: f64,
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextPairScore {
    pub omiotis: f64,
    pub zeta_ab: f64,
    pub zeta_ba: f64,
    pub matches_ab: Vec<BestMatch>,
    pub matches_ba: Vec<BestMatch>,
}

/// Symmetric text relatedness over a term similarity and a term weighting.
pub struct Omiotis<'a> {
    sim: &'a dyn TermSimilarity,
    weights: &'a dyn TermWeighting,
}

impl<'a> Omiotis<'a> {
    pub fn new(sim: &'a dyn TermSimilarity, weights: &'a dyn TermWeighting) -> Self {
        Omiotis { sim, weights }
    }

    /// The term of `tb` maximizing `λ·SR` against `a`; the first in text
    /// order wins ties.
    pub fn best_match(&self, a: &str, ta: &TokenizedText, tb: &TokenizedText) -> Result<BestMatch> {
        if tb.is_empty() {
            return Err(Error::EmptyText);
        }
        let wa = self.weights.weight(a, ta)?;
        let mut best: Option<BestMatch> = None;
        for b in tb.distinct() {
            let lambda = harmonic_mean(wa, self.weights.weight(b, tb)?);
            let sr = self.sim.similarity(a, b)?;
            let product = lambda * sr;
            if best.as_ref().is_none_or(|m| product > m.product) {
                best = Some(BestMatch {
                    term: a.to_string(),
                    partner: b.to_string(),
                    lambda,
                    sr,
                    product,
                });
            }
        }
        Ok(best.expect("nonempty text"))
    }

    /// Mean best-match product over the distinct terms of `ta`; 0 when `tb`
    /// is empty.
    pub fn zeta(&self, ta: &TokenizedText, tb: &TokenizedText) -> Result<(f64, Vec<BestMatch>)> {
        if ta.is_empty() {
            return Err(Error::EmptyText);
        }
        if tb.is_empty() {
            return Ok((0.0, Vec::new()));
        }
        let terms = ta.distinct();
        let matches = terms
            .iter()
            .map(|a| self.best_match(a, ta, tb))
            .collect::<Result<Vec<_>>>()?;
        let sum: f64 = matches.iter().map(|m| m.product).sum();
        Ok((sum / terms.len() as f64, matches))
    }

    /// Average of both directional values; 0 if either text is empty.
    pub fn score(&self, ta: &TokenizedText, tb: &TokenizedText) -> Result<TextPairScore> {
        if ta.is_empty() || tb.is_empty() {
            return Ok(TextPairScore {
                omiotis: 0.0,
                zeta_ab: 0.0,
                zeta_ba: 0.0,
                matches_ab: Vec::new(),
                matches_ba: Vec::new(),
            });
        }
        let (zeta_ab, matches_ab) = self.zeta(ta, tb)?;
        let (zeta_ba, matches_ba) = self.zeta(tb, ta)?;
        Ok(TextPairScore {
            omiotis: (zeta_ab + zeta_ba) / 2.0,
            zeta_ab,
            zeta_ba,
            matches_ab,
            matches_ba,
        })
    }
}

/// Preprocesses two raw texts and scores them. Without `corpus`, the two
/// texts themselves are the document collection.
pub fn omiotis(
    a: &str,
    b: &str,
    terms: &TermRelatedness<'_>,
    stopwords: &HashSet<String>,
    corpus: Option<&CorpusStats>,
) -> Result<TextPairScore> {
    let ta = preprocess(a, stopwords, "A");
    let tb = preprocess(b, stopwords, "B");
    let local;
    let corpus = match corpus {
        Some(c) => c,
        None => {
            local = CorpusStats::from_texts([&ta, &tb]);
            &local
        }
    };
    Omiotis::new(terms, corpus).score(&ta, &tb)
}
