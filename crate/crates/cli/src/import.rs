//! Converts a WordNet `dict/` directory (`data.noun`, `data.verb`,
//! `data.adj`, `data.adv`) into the lexicon and edge TSV files.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use semrel::EdgeKind;

const DATA_FILES: [&str; 4] = ["data.noun", "data.verb", "data.adj", "data.adv"];

#[derive(Debug, Default, PartialEq, Eq)]
pub struct ImportSummary {
    pub senses: usize,
    pub lemmas: usize,
    pub edges: usize,
    pub skipped_pointers: usize,
}

/// Maps a pointer symbol to the relation it encodes.
pub fn pointer_kind(symbol: &str) -> Option<EdgeKind> {
    use EdgeKind::*;
    Some(match symbol {
        "@" | "@i" => Hypernym,
        "~" | "~i" => Hyponym,
        "%p" => PartMeronym,
        "#p" => PartHolonym,
        "%m" => MemberMeronym,
        "#m" => MemberHolonym,
        "%s" => SubstanceMeronym,
        "#s" => SubstanceHolonym,
        "!" => Antonym,
        "&" => Similar,
        "^" => AlsoSee,
        "$" => VerbGroup,
        "=" => Attribute,
        "*" => Entailment,
        ">" => Cause,
        "<" => ParticipleOf,
        "\\" => Derived,
        "+" => Nominalization,
        ";c" | "-c" => CategoryDomain,
        ";r" | "-r" => RegionDomain,
        ";u" | "-u" => UsageDomain,
        _ => return None,
    })
}

/// `{offset:08}-{pos}`, with satellite adjectives folded into `a`.
pub fn sense_key(offset: &str, pos: &str) -> Result<String> {
    let n: u64 = offset.parse().with_context(|| format!("bad synset offset `{offset}`"))?;
    let pos = match pos {
        "s" => "a",
        "n" | "v" | "a" | "r" => pos,
        other => bail!("bad part of speech `{other}`"),
    };
    Ok(format!("{n:08}-{pos}"))
}

/// Lowercases and strips an adjective position marker such as `(p)`.
fn clean_word(word: &str) -> String {
    let base = match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    };
    base.to_lowercase()
}

struct Synset {
    key: String,
    pos: String,
    words: Vec<String>,
    pointers: Vec<(String, String)>,
}

fn parse_line(line: &str) -> Result<Option<Synset>> {
    if line.starts_with(' ') || line.trim().is_empty() {
        return Ok(None);
    }
    let data = line.split(" | ").next().unwrap_or(line);
    let mut it = data.split_whitespace();
    let mut next = |what: &str| it.next().with_context(|| format!("missing {what}"));
    let offset = next("offset")?;
    let _lex_filenum = next("lexicographer file")?;
    let ss_type = next("synset type")?;
    let key = sense_key(offset, ss_type)?;
    let w_cnt = usize::from_str_radix(next("word count")?, 16).context("bad word count")?;
    let mut words = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        words.push(clean_word(next("word")?));
        next("lex id")?;
    }
    let p_cnt: usize = next("pointer count")?.parse().context("bad pointer count")?;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let symbol = next("pointer symbol")?.to_string();
        let target_offset = next("pointer target")?;
        let target_pos = next("pointer pos")?;
        next("source/target")?;
        pointers.push((symbol, sense_key(target_offset, target_pos)?));
    }
    let pos = if ss_type == "s" { "a" } else { ss_type };
    Ok(Some(Synset {
        key,
        pos: pos.to_string(),
        words,
        pointers,
    }))
}

pub fn import(wordnet_dir: &Path, out_dir: &Path) -> Result<ImportSummary> {
    let mut synsets = Vec::new();
    for name in DATA_FILES {
        let path = wordnet_dir.join(name);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            if let Some(s) = parse_line(line).with_context(|| format!("{}:{}", path.display(), i + 1))? {
                synsets.push(s);
            }
        }
    }

    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut summary = ImportSummary {
        senses: synsets.len(),
        ..Default::default()
    };

    let lex_path = out_dir.join("lexicon.tsv");
    let mut lex = BufWriter::new(fs::File::create(&lex_path).with_context(|| lex_path.display().to_string())?);
    for s in &synsets {
        let mut seen = HashSet::new();
        for w in &s.words {
            if seen.insert(w.as_str()) {
                writeln!(lex, "{w}\t{}\t{}", s.pos, s.key)?;
                summary.lemmas += 1;
            }
        }
    }
    lex.flush()?;

    let known: HashSet<&str> = synsets.iter().map(|s| s.key.as_str()).collect();
    let edge_path = out_dir.join("edges.tsv");
    let mut edges = BufWriter::new(fs::File::create(&edge_path).with_context(|| edge_path.display().to_string())?);
    let mut written = HashSet::new();
    for s in &synsets {
        for (symbol, target) in &s.pointers {
            let Some(kind) = pointer_kind(symbol) else {
                summary.skipped_pointers += 1;
                continue;
            };
            if *target == s.key || !known.contains(target.as_str()) {
                summary.skipped_pointers += 1;
                continue;
            }
            if written.insert((s.key.as_str(), kind, target.as_str())) {
                writeln!(edges, "{}\t{}\t{}", s.key, kind, target)?;
                summary.edges += 1;
            }
        }
    }
    edges.flush()?;
    Ok(summary)
}
