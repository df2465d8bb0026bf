//! Evaluation protocols: word-pair correlation, synonym and analogy choice,
//! sentence similarity and paraphrase detection.

pub mod datasets;
pub mod report;
pub mod stats;

use std::collections::HashSet;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::textrel::{preprocess, CorpusStats, Omiotis, TermSimilarity, TermWeighting, TextPairScore, TokenizedText};

pub use datasets::{ChoiceQuestion, TextPair, WordPair, WordPairTuple};
pub use report::{Cell, EvalReport};
pub use stats::{
    classification_metrics, fisher_z_test, paraphrase_decide, rank_correlations, tune_threshold,
    ClassificationMetrics, Correlations, Objective,
};

pub const DEFAULT_THRESHOLD: f64 = 0.2;

/// Index of the first maximum, and whether another entry ties it.
pub fn argmax_first(scores: &[f64]) -> (usize, bool) {
    let mut best = 0;
    for (i, v) in scores.iter().enumerate() {
        if *v > scores[best] {
            best = i;
        }
    }
    let tie = scores.iter().filter(|v| **v == scores[best]).count() > 1;
    (best, tie)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Choice {
    pub index: usize,
    pub tie: bool,
    pub scores: Vec<f64>,
}

pub fn synonym_choice(stem: &str, candidates: &[String], sim: &dyn TermSimilarity) -> Result<Choice> {
    if candidates.len() < 2 {
        return Err(Error::InvalidInput("at least two candidates required".into()));
    }
    let scores = candidates
        .iter()
        .map(|c| sim.similarity(stem, c))
        .collect::<Result<Vec<_>>>()?;
    let (index, tie) = argmax_first(&scores);
    Ok(Choice { index, tie, scores })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatScores {
    /// Agreement of the within-pair relatedness of stem and candidate.
    pub s1: f64,
    /// Agreement of the cross-pair relatedness of first and second words.
    pub s2: f64,
    pub s: f64,
}

pub fn sat_scores(stem: (&str, &str), candidate: (&str, &str), sim: &dyn TermSimilarity) -> Result<SatScores> {
    let (w1, w2) = stem;
    let (a, b) = candidate;
    let s1 = 1.0 - (sim.similarity(w1, w2)? - sim.similarity(a, b)?).abs();
    let s2 = 1.0 - (sim.similarity(w1, a)? - sim.similarity(w2, b)?).abs();
    Ok(SatScores {
        s1,
        s2,
        s: (s1 + s2) / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SatMode {
    S,
    S1,
    S2,
}

impl FromStr for SatMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(SatMode::S),
            "s1" => Ok(SatMode::S1),
            "s2" => Ok(SatMode::S2),
            other => Err(Error::InvalidInput(format!("unknown analogy mode `{other}`"))),
        }
    }
}

/// Spread of each score over a question's candidates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatFeatures {
    pub min_s1: f64,
    pub max_s1: f64,
    pub diff_s1: f64,
    pub min_s2: f64,
    pub max_s2: f64,
    pub diff_s2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatAnswer {
    pub chosen: usize,
    pub tie: bool,
    pub by_s1: usize,
    pub by_s2: usize,
    pub scores: Vec<SatScores>,
    pub features: SatFeatures,
}

pub fn sat_answer(question: &ChoiceQuestion<WordPairTuple>, sim: &dyn TermSimilarity, mode: SatMode) -> Result<SatAnswer> {
    if question.candidates.is_empty() {
        return Err(Error::InvalidInput("question has no candidates".into()));
    }
    let stem = (question.stem.0.as_str(), question.stem.1.as_str());
    let scores = question
        .candidates
        .iter()
        .map(|(a, b)| sat_scores(stem, (a, b), sim))
        .collect::<Result<Vec<_>>>()?;
    let s1: Vec<f64> = scores.iter().map(|s| s.s1).collect();
    let s2: Vec<f64> = scores.iter().map(|s| s.s2).collect();
    let s: Vec<f64> = scores.iter().map(|s| s.s).collect();
    let (chosen, tie) = argmax_first(match mode {
        SatMode::S => &s,
        SatMode::S1 => &s1,
        SatMode::S2 => &s2,
    });
    let spread = |v: &[f64]| {
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (min, max, max - min)
    };
    let (min_s1, max_s1, diff_s1) = spread(&s1);
    let (min_s2, max_s2, diff_s2) = spread(&s2);
    Ok(SatAnswer {
        chosen,
        tie,
        by_s1: argmax_first(&s1).0,
        by_s2: argmax_first(&s2).0,
        scores,
        features: SatFeatures {
            min_s1,
            max_s1,
            diff_s1,
            min_s2,
            max_s2,
            diff_s2,
        },
    })
}

pub fn evaluate_wordsim(pairs: &[WordPair], sim: &dyn TermSimilarity) -> Result<EvalReport> {
    let preds = pairs
        .par_iter()
        .map(|p| sim.similarity(&p.w1, &p.w2))
        .collect::<Result<Vec<_>>>()?;
    let gold: Vec<f64> = pairs.iter().map(|p| p.gold).collect();
    let corr = rank_correlations(&preds, &gold)?;
    let mut report = EvalReport::new("wordsim", &["index", "word1", "word2", "gold", "predicted"]);
    for (i, (p, pred)) in pairs.iter().zip(&preds).enumerate() {
        report.push_row(vec![
            i.into(),
            p.w1.as_str().into(),
            p.w2.as_str().into(),
            p.gold.into(),
            (*pred).into(),
        ]);
    }
    report.metric("n", pairs.len());
    report.metric("rho", corr.rho);
    report.metric("r", corr.r);
    Ok(report)
}

pub fn evaluate_synonym(questions: &[ChoiceQuestion<String>], sim: &dyn TermSimilarity) -> Result<EvalReport> {
    let choices = questions
        .par_iter()
        .map(|q| synonym_choice(&q.stem, &q.candidates, sim))
        .collect::<Result<Vec<_>>>()?;
    let mut report = EvalReport::new("synonym", &["index", "stem", "chosen", "gold", "correct", "tie"]);
    let (mut correct, mut ties) = (0usize, 0usize);
    for (i, (q, c)) in questions.iter().zip(&choices).enumerate() {
        let ok = c.index == q.gold;
        correct += ok as usize;
        ties += c.tie as usize;
        report.push_row(vec![
            i.into(),
            q.stem.as_str().into(),
            q.candidates[c.index].as_str().into(),
            q.candidates[q.gold].as_str().into(),
            ok.into(),
            c.tie.into(),
        ]);
    }
    report.metric("n", questions.len());
    report.metric("accuracy", ratio(correct, questions.len()));
    report.metric("ties", ties);
    Ok(report)
}

pub fn evaluate_sat(questions: &[ChoiceQuestion<WordPairTuple>], sim: &dyn TermSimilarity, mode: SatMode) -> Result<EvalReport> {
    let answers = questions
        .par_iter()
        .map(|q| sat_answer(q, sim, mode))
        .collect::<Result<Vec<_>>>()?;
    let mut report = EvalReport::new(
        "sat",
        &[
            "index", "chosen", "gold", "correct", "tie", "by_s1", "by_s2", "min_s1", "max_s1", "diff_s1", "min_s2",
            "max_s2", "diff_s2",
        ],
    );
    let (mut correct, mut c1, mut c2, mut ub, mut ties) = (0, 0, 0, 0, 0);
    for (i, (q, a)) in questions.iter().zip(&answers).enumerate() {
        let ok = a.chosen == q.gold;
        correct += ok as usize;
        c1 += (a.by_s1 == q.gold) as usize;
        c2 += (a.by_s2 == q.gold) as usize;
        ub += (a.by_s1 == q.gold || a.by_s2 == q.gold) as usize;
        ties += a.tie as usize;
        let f = a.features;
        report.push_row(vec![
            i.into(),
            a.chosen.into(),
            q.gold.into(),
            ok.into(),
            a.tie.into(),
            a.by_s1.into(),
            a.by_s2.into(),
            f.min_s1.into(),
            f.max_s1.into(),
            f.diff_s1.into(),
            f.min_s2.into(),
            f.max_s2.into(),
            f.diff_s2.into(),
        ]);
    }
    let n = questions.len();
    report.metric("n", n);
    report.metric("accuracy", ratio(correct, n));
    report.metric("accuracy_s1", ratio(c1, n));
    report.metric("accuracy_s2", ratio(c2, n));
    report.metric("upper_bound", ratio(ub, n));
    report.metric("ties", ties);
    Ok(report)
}

/// Text-pair scoring shared by the sentence and paraphrase protocols.
pub struct TextScorer<'a> {
    pub sim: &'a dyn TermSimilarity,
    pub stopwords: &'a HashSet<String>,
    /// External document frequencies; the dataset's own texts otherwise.
    pub corpus: Option<&'a CorpusStats>,
}

impl TextScorer<'_> {
    pub fn score_all(&self, pairs: &[TextPair]) -> Result<Vec<TextPairScore>> {
        let texts: Vec<(TokenizedText, TokenizedText)> = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                (
                    preprocess(&p.a, self.stopwords, &format!("{i}a")),
                    preprocess(&p.b, self.stopwords, &format!("{i}b")),
                )
            })
            .collect();
        let local;
        let weights: &dyn TermWeighting = match self.corpus {
            Some(c) => c,
            None => {
                local = CorpusStats::from_texts(texts.iter().flat_map(|(a, b)| [a, b]));
                &local
            }
        };
        let omiotis = Omiotis::new(self.sim, weights);
        texts
            .par_iter()
            .map(|(a, b)| omiotis.score(a, b))
            .collect()
    }
}

pub fn evaluate_sentence(pairs: &[TextPair], scorer: &TextScorer<'_>) -> Result<EvalReport> {
    let scores = scorer.score_all(pairs)?;
    let preds: Vec<f64> = scores.iter().map(|s| s.omiotis).collect();
    let gold: Vec<f64> = pairs.iter().map(|p| p.label).collect();
    let corr = rank_correlations(&preds, &gold)?;
    let mut report = EvalReport::new("sentence", &["index", "gold", "omiotis", "zeta_ab", "zeta_ba"]);
    for (i, (p, s)) in pairs.iter().zip(&scores).enumerate() {
        report.push_row(vec![i.into(), p.label.into(), s.omiotis.into(), s.zeta_ab.into(), s.zeta_ba.into()]);
    }
    report.metric("n", pairs.len());
    report.metric("rho", corr.rho);
    report.metric("r", corr.r);
    Ok(report)
}

fn binary_labels(pairs: &[TextPair]) -> Result<Vec<bool>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, p)| match p.label {
            l if l == 1.0 => Ok(true),
            l if l == 0.0 => Ok(false),
            l => Err(Error::InvalidInput(format!("item {i}: label {l} is not 0 or 1"))),
        })
        .collect()
}

/// Scores a labeled set and tunes a threshold on it.
pub fn tune_on(pairs: &[TextPair], scorer: &TextScorer<'_>, objective: Objective) -> Result<(f64, f64)> {
    let labels = binary_labels(pairs)?;
    let scores: Vec<f64> = scorer.score_all(pairs)?.iter().map(|s| s.omiotis).collect();
    tune_threshold(&scores, &labels, objective)
}

pub fn evaluate_paraphrase(pairs: &[TextPair], scorer: &TextScorer<'_>, threshold: f64) -> Result<EvalReport> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidInput(format!("threshold {threshold} outside [0,1]")));
    }
    let labels = binary_labels(pairs)?;
    let scores = scorer.score_all(pairs)?;
    let preds: Vec<bool> = scores.iter().map(|s| paraphrase_decide(s.omiotis, threshold)).collect();
    let m = classification_metrics(&preds, &labels)?;
    let mut report = EvalReport::new("paraphrase", &["index", "label", "omiotis", "predicted", "correct"]);
    for (i, ((s, p), l)) in scores.iter().zip(&preds).zip(&labels).enumerate() {
        report.push_row(vec![i.into(), (*l).into(), s.omiotis.into(), (*p).into(), (p == l).into()]);
    }
    report.metric("n", pairs.len());
    report.metric("threshold", threshold);
    report.metric("accuracy", m.accuracy);
    report.metric("precision", m.precision);
    report.metric("recall", m.recall);
    report.metric("f1", m.f1);
    report.metric("undefined", m.undefined);
    Ok(report)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}
