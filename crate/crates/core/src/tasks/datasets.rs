//! Tab-separated evaluation datasets. Gold indices are 0-based.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tsv::{self, Row};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordPair {
    pub w1: String,
    pub w2: String,
    pub gold: f64,
}

/// A stem, its candidates and the index of the correct candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoiceQuestion<T> {
    pub stem: T,
    pub candidates: Vec<T>,
    pub gold: usize,
}

pub type WordPairTuple = (String, String);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextPair {
    pub label: f64,
    pub a: String,
    pub b: String,
}

/// `word1<TAB>word2<TAB>gold`
pub fn parse_word_pairs(text: &str, path: &Path) -> Result<Vec<WordPair>> {
    tsv::rows(text, false)
        .into_iter()
        .map(|row| {
            row.expect_fields(path, 3)?;
            Ok(WordPair {
                w1: row.fields[0].clone(),
                w2: row.fields[1].clone(),
                gold: row.parse_f64(path, 2)?,
            })
        })
        .collect()
}

/// `stem<TAB>cand1;cand2;...<TAB>gold_index`
pub fn parse_synonym_questions(text: &str, path: &Path) -> Result<Vec<ChoiceQuestion<String>>> {
    tsv::rows(text, false)
        .into_iter()
        .map(|row| {
            row.expect_fields(path, 3)?;
            let candidates = split_list(&row, path, 1)?;
            let gold = gold_index(&row, path, candidates.len())?;
            Ok(ChoiceQuestion {
                stem: row.fields[0].clone(),
                candidates,
                gold,
            })
        })
        .collect()
}

/// `w1<TAB>w2<TAB>a1:b1;a2:b2;...<TAB>gold_index`
pub fn parse_sat_questions(text: &str, path: &Path) -> Result<Vec<ChoiceQuestion<WordPairTuple>>> {
    tsv::rows(text, false)
        .into_iter()
        .map(|row| {
            row.expect_fields(path, 4)?;
            let candidates = split_list(&row, path, 2)?
                .into_iter()
                .map(|c| match c.split_once(':') {
                    Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
                    _ => Err(Error::parse(path, row.line, format!("candidate `{c}` is not a:b"))),
                })
                .collect::<Result<Vec<_>>>()?;
            let gold = gold_index(&row, path, candidates.len())?;
            Ok(ChoiceQuestion {
                stem: (row.fields[0].clone(), row.fields[1].clone()),
                candidates,
                gold,
            })
        })
        .collect()
}

/// `label<TAB>textA<TAB>textB`
pub fn parse_text_pairs(text: &str, path: &Path) -> Result<Vec<TextPair>> {
    tsv::rows(text, false)
        .into_iter()
        .map(|row| {
            row.expect_fields(path, 3)?;
            Ok(TextPair {
                label: row.parse_f64(path, 0)?,
                a: row.fields[1].clone(),
                b: row.fields[2].clone(),
            })
        })
        .collect()
}

pub fn load_word_pairs(path: &Path) -> Result<Vec<WordPair>> {
    parse_word_pairs(&tsv::read_to_string(path)?, path)
}

pub fn load_synonym_questions(path: &Path) -> Result<Vec<ChoiceQuestion<String>>> {
    parse_synonym_questions(&tsv::read_to_string(path)?, path)
}

pub fn load_sat_questions(path: &Path) -> Result<Vec<ChoiceQuestion<WordPairTuple>>> {
    parse_sat_questions(&tsv::read_to_string(path)?, path)
}

pub fn load_text_pairs(path: &Path) -> Result<Vec<TextPair>> {
    parse_text_pairs(&tsv::read_to_string(path)?, path)
}

fn split_list(row: &Row, path: &Path, idx: usize) -> Result<Vec<String>> {
    let items: Vec<String> = row.fields[idx]
        .split(';')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if items.len() < 2 {
        return Err(Error::parse(path, row.line, "at least two candidates required"));
    }
    Ok(items)
}

fn gold_index(row: &Row, path: &Path, n: usize) -> Result<usize> {
    let idx = row.fields.len() - 1;
    let gold = row.parse_usize(path, idx)?;
    if gold >= n {
        return Err(Error::parse(path, row.line, format!("gold index {gold} out of range for {n} candidates")));
    }
    Ok(gold)
}
