//! Franco-Arab (Arabizi) to Arabic-script transliteration.
//!
//! A word is segmented every way the rule table allows; each segment maps to
//! one of its Arabic alternatives (possibly nothing, for short vowels). The
//! resulting candidate spellings are ranked by how often they occur in an
//! Arabic lexicon built from the corpora.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use crate::resource::{self, ResourceError};
use crate::stopgen::FrequencyTable;
use crate::textkit::{is_latin_letter, tokenize_spans, EmoticonLexicon, TokenKind};

pub const DEFAULT_MAX_CANDIDATES: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Anchor {
    Anywhere,
    Start,
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Rule {
    pattern: Vec<char>,
    anchor: Anchor,
    outputs: Vec<String>,
}

/// Latin grapheme → Arabic alternatives.
///
/// File format: `pattern<TAB>alt|alt|...`, `-` for the empty alternative.
/// `^pattern` only applies at the start of a word and `pattern$` only at the
/// end; where an anchored rule applies it replaces the unanchored one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslitRules {
    rules: Vec<Rule>,
    pub max_candidates: usize,
}

impl TranslitRules {
    pub fn parse(origin: &str, text: &str) -> Result<Self, ResourceError> {
        let mut rules = Vec::new();
        for (line_no, line) in resource::content_lines(text) {
            let (pattern, outputs) = line
                .split_once('\t')
                .ok_or_else(|| ResourceError::parse(origin, line_no, "expected pattern<TAB>alternatives"))?;
            let mut pattern = pattern.trim().to_lowercase();
            let mut anchor = Anchor::Anywhere;
            if let Some(p) = pattern.strip_prefix('^') {
                pattern = p.to_string();
                anchor = Anchor::Start;
            } else if let Some(p) = pattern.strip_suffix('$') {
                pattern = p.to_string();
                anchor = Anchor::End;
            }
            if pattern.is_empty() {
                return Err(ResourceError::parse(origin, line_no, "empty pattern"));
            }
            let outputs: Vec<String> = outputs
                .split('|')
                .map(|o| match o.trim() {
                    "-" => String::new(),
                    o => o.to_string(),
                })
                .collect();
            if outputs.iter().any(|o| o.chars().any(is_latin_letter)) {
                return Err(ResourceError::parse(origin, line_no, "alternatives must not contain Latin letters"));
            }
            if outputs.iter().all(String::is_empty) && outputs.len() > 1 {
                return Err(ResourceError::parse(origin, line_no, "duplicate empty alternatives"));
            }
            let pattern: Vec<char> = pattern.chars().collect();
            if rules.iter().any(|r: &Rule| r.pattern == pattern && r.anchor == anchor) {
                return Err(ResourceError::parse(origin, line_no, "duplicate pattern"));
            }
            rules.push(Rule {
                pattern,
                anchor,
                outputs,
            });
        }
        Ok(TranslitRules {
            rules,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ResourceError> {
        let text = resource::read_to_string(path)?;
        Self::parse(&path.display().to_string(), &text)
    }

    /// Digits 2 3 5 6 7 8 9 for ء ع خ ط ح غ ق, plus consonant and vowel rules.
    pub fn bundled() -> Self {
        Self::parse("translit_rules.tsv", resource::TRANSLIT_RULES).expect("bundled rules are valid")
    }

    /// Alternatives for every segment starting at `pos`, as (length, outputs).
    fn segments_at(&self, word: &[char], pos: usize) -> Vec<(usize, Vec<&str>)> {
        let mut by_len: BTreeMap<usize, (Vec<&str>, Vec<&str>)> = BTreeMap::new();
        for r in &self.rules {
            let len = r.pattern.len();
            if pos + len > word.len() || word[pos..pos + len] != r.pattern[..] {
                continue;
            }
            let entry = by_len.entry(len).or_default();
            match r.anchor {
                Anchor::Anywhere => entry.0.extend(r.outputs.iter().map(String::as_str)),
                Anchor::Start if pos == 0 => entry.1.extend(r.outputs.iter().map(String::as_str)),
                Anchor::End if pos + len == word.len() => {
                    entry.1.extend(r.outputs.iter().map(String::as_str))
                }
                _ => {}
            }
        }
        by_len
            .into_iter()
            .filter_map(|(len, (plain, anchored))| {
                let mut outs = if anchored.is_empty() { plain } else { anchored };
                outs.dedup();
                (!outs.is_empty()).then_some((len, outs))
            })
            .collect()
    }

    /// Every Arabic spelling the rules allow for `word`.
    pub fn candidates(&self, word: &str) -> CandidateSet {
        let chars: Vec<char> = word.to_lowercase().chars().collect();
        let mut set = CandidateSet::default();
        if chars.is_empty() {
            return set;
        }
        let mut buf = String::new();
        self.expand(&chars, 0, &mut buf, &mut set);
        set.forms.remove("");
        set
    }

    fn expand(&self, word: &[char], pos: usize, buf: &mut String, set: &mut CandidateSet) {
        if set.forms.len() >= self.max_candidates {
            set.truncated = true;
            return;
        }
        if pos == word.len() {
            set.forms.insert(buf.clone());
            return;
        }
        for (len, outputs) in self.segments_at(word, pos) {
            for out in outputs {
                let mark = buf.len();
                buf.push_str(out);
                self.expand(word, pos + len, buf, set);
                buf.truncate(mark);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub forms: BTreeSet<String>,
    /// Enumeration stopped at `max_candidates`.
    pub truncated: bool,
}

/// Candidates ordered by lexicon frequency, then length, then lexicographically.
pub fn rank_candidates(candidates: &CandidateSet, lexicon: &FrequencyTable) -> Vec<(String, u64)> {
    let mut ranked: Vec<(String, u64)> = candidates
        .forms
        .iter()
        .map(|c| (c.clone(), lexicon.count(c)))
        .collect();
    ranked.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| a.0.chars().count().cmp(&b.0.chars().count()))
            .then_with(|| a.0.cmp(&b.0))
    });
    ranked
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resolution {
    Override { arabic: String },
    /// Top candidate occurs in the lexicon.
    Attested { arabic: String, count: u64 },
    /// Best guess; no candidate occurs in the lexicon.
    Unattested { arabic: String },
    NoCandidate,
}

impl Resolution {
    pub fn arabic(&self) -> Option<&str> {
        match self {
            Resolution::Override { arabic }
            | Resolution::Attested { arabic, .. }
            | Resolution::Unattested { arabic } => Some(arabic),
            Resolution::NoCandidate => None,
        }
    }

    /// Confirmed by an override or by the lexicon.
    pub fn is_resolved(&self) -> bool {
        matches!(self, Resolution::Override { .. } | Resolution::Attested { .. })
    }
}

pub fn resolve_word(
    word: &str,
    rules: &TranslitRules,
    lexicon: &FrequencyTable,
    overrides: &BTreeMap<String, String>,
) -> (Resolution, bool) {
    let key = word.to_lowercase();
    if let Some(arabic) = overrides.get(&key) {
        return (
            Resolution::Override {
                arabic: arabic.clone(),
            },
            false,
        );
    }
    let candidates = rules.candidates(&key);
    let truncated = candidates.truncated;
    let resolution = match rank_candidates(&candidates, lexicon).into_iter().next() {
        None => Resolution::NoCandidate,
        Some((arabic, 0)) => Resolution::Unattested { arabic },
        Some((arabic, count)) => Resolution::Attested { arabic, count },
    };
    (resolution, truncated)
}

/// Words flagged for manual review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrancoDiagnostic {
    NoCandidate { word: String },
    Unattested { word: String, chosen: String },
    CandidatesTruncated { word: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrancoOutcome {
    pub text: String,
    pub diagnostics: Vec<FrancoDiagnostic>,
    /// Word tokens containing Latin letters.
    pub latin_words: usize,
    /// Of those, words resolved by an override or an attested candidate.
    pub resolved_words: usize,
}

impl FrancoOutcome {
    pub fn resolved_fraction(&self) -> f64 {
        if self.latin_words == 0 {
            0.0
        } else {
            self.resolved_words as f64 / self.latin_words as f64
        }
    }
}

/// Rewrites every Latin word of `text` in Arabic script.
///
/// Words without any candidate are left untouched and reported; every other
/// Latin word is replaced by its best candidate.
pub fn transliterate_franco(
    text: &str,
    rules: &TranslitRules,
    lexicon: &FrequencyTable,
    overrides: &BTreeMap<String, String>,
    emoticons: &EmoticonLexicon,
) -> FrancoOutcome {
    let mut out = FrancoOutcome::default();
    let mut last = 0;
    for (span, token) in tokenize_spans(text, emoticons) {
        if token.kind != TokenKind::Word || !token.text.chars().any(is_latin_letter) {
            continue;
        }
        out.latin_words += 1;
        let (resolution, truncated) = resolve_word(&token.text, rules, lexicon, overrides);
        if truncated {
            out.diagnostics.push(FrancoDiagnostic::CandidatesTruncated {
                word: token.text.clone(),
            });
        }
        if resolution.is_resolved() {
            out.resolved_words += 1;
        }
        match &resolution {
            Resolution::NoCandidate => out.diagnostics.push(FrancoDiagnostic::NoCandidate {
                word: token.text.clone(),
            }),
            Resolution::Unattested { arabic } => out.diagnostics.push(FrancoDiagnostic::Unattested {
                word: token.text.clone(),
                chosen: arabic.clone(),
            }),
            _ => {}
        }
        if let Some(arabic) = resolution.arabic() {
            out.text.push_str(&text[last..span.start]);
            out.text.push_str(arabic);
            last = span.end;
        }
    }
    out.text.push_str(&text[last..]);
    out
}
