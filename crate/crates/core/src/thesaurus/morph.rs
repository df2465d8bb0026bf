//! Rule-based reduction of inflected forms to lexicon lemmas.

use super::PartOfSpeech;

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

const ADJECTIVE_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

/// Lowercases and joins internal whitespace with `_`, the lexicon's
/// collocation separator.
pub fn normalize_lemma(raw: &str) -> String {
    raw.trim()
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
}

/// Candidate base forms in the order they should be tried, each tagged with
/// the part of speech whose rule produced it. The raw form comes first and
/// carries no tag.
pub fn candidates(word: &str) -> Vec<(String, Option<PartOfSpeech>)> {
    let mut out: Vec<(String, Option<PartOfSpeech>)> = vec![(word.to_string(), None)];
    let mut push = |form: String, pos: PartOfSpeech| {
        if !form.is_empty() && !out.iter().any(|(f, p)| *f == form && *p == Some(pos)) {
            out.push((form, Some(pos)));
        }
    };

    for (suffix, repl) in NOUN_RULES {
        if let Some(stem) = strip(word, suffix) {
            push(format!("{stem}{repl}"), PartOfSpeech::Noun);
        }
    }
    for (suffix, repl) in VERB_RULES {
        if let Some(stem) = strip(word, suffix) {
            let form = format!("{stem}{repl}");
            let undoubled = undouble(&form, suffix, repl);
            push(form, PartOfSpeech::Verb);
            if let Some(u) = undoubled {
                push(u, PartOfSpeech::Verb);
            }
        }
    }
    for (suffix, repl) in ADJECTIVE_RULES {
        if let Some(stem) = strip(word, suffix) {
            let form = format!("{stem}{repl}");
            let undoubled = undouble(&form, suffix, repl);
            push(form, PartOfSpeech::Adjective);
            if let Some(u) = undoubled {
                push(u, PartOfSpeech::Adjective);
            }
        }
    }
    out
}

fn strip<'a>(word: &'a str, suffix: &str) -> Option<&'a str> {
    word.strip_suffix(suffix).filter(|stem| !stem.is_empty())
}

/// "stopped" -> "stopp" -> "stop"; "bigger" -> "bigg" -> "big".
fn undouble(form: &str, suffix: &str, repl: &str) -> Option<String> {
    if !repl.is_empty() || !matches!(suffix, "ed" | "ing" | "er" | "est") {
        return None;
    }
    let bytes = form.as_bytes();
    let n = bytes.len();
    if n >= 3 && bytes[n - 1] == bytes[n - 2] && !b"aeiou".contains(&bytes[n - 1]) {
        Some(form[..n - 1].to_string())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(word: &str) -> Vec<String> {
        candidates(word).into_iter().map(|(f, _)| f).collect()
    }

    #[test]
    fn raw_form_first() {
        assert_eq!(forms("car")[0], "car");
        assert_eq!(forms("cars")[0], "cars");
    }

    #[test]
    fn noun_plurals() {
        assert!(forms("cars").contains(&"car".to_string()));
        assert!(forms("boxes").contains(&"box".to_string()));
        assert!(forms("ponies").contains(&"pony".to_string()));
        assert!(forms("women").contains(&"woman".to_string()));
    }

    #[test]
    fn verb_forms_with_doubling() {
        assert!(forms("stopped").contains(&"stop".to_string()));
        assert!(forms("running").contains(&"run".to_string()));
        assert!(forms("baked").contains(&"bake".to_string()));
        assert!(forms("dropped").contains(&"drop".to_string()));
    }

    #[test]
    fn adjective_forms() {
        assert!(forms("bigger").contains(&"big".to_string()));
        assert!(forms("largest").contains(&"large".to_string()));
        assert!(forms("taller").contains(&"tall".to_string()));
    }

    #[test]
    fn normalize_joins_collocations() {
        assert_eq!(normalize_lemma("  Motor  Vehicle "), "motor_vehicle");
    }
}
