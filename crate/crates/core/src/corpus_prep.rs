//! Corpus preparation: ingestion of exported posts, the filtering pipeline,
//! abbreviation and emoticon replacement, Franco-Arab transliteration,
//! English-token translation and annotation.

pub mod franco;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::resource::{self, ResourceError};
use crate::stopgen::FrequencyTable;
use crate::textkit::{
    arabic_script_ratio, is_latin_letter, is_latin_script, tokenize, tokenize_spans, EmoticonLexicon, Token, TokenKind,
    VariantTable,
};

pub use franco::{
    rank_candidates, resolve_word, transliterate_franco, CandidateSet, FrancoDiagnostic, FrancoOutcome,
    Resolution, TranslitRules,
};

#[derive(Debug, Error)]
pub enum PrepError {
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("{origin}:{line}: duplicate post id {id:?}")]
    DuplicateId {
        origin: String,
        line: usize,
        id: String,
    },
    #[error("rating {0} is outside 1..10")]
    RatingOutOfRange(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Review,
    Facebook,
    Twitter,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::Review, Source::Facebook, Source::Twitter];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Review => "review",
            Source::Facebook => "facebook",
            Source::Twitter => "twitter",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Source::ALL
            .into_iter()
            .find(|src| src.as_str() == s)
            .ok_or_else(|| format!("unknown source {s:?} (expected review, facebook or twitter)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Negative,
    Neutral,
    Positive,
    Unlabeled,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Negative => "negative",
            Label::Neutral => "neutral",
            Label::Positive => "positive",
            Label::Unlabeled => "unlabeled",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One exported post or review, exactly as stored in a corpus file.
///
/// Corpus files hold one JSON object per line with these fields; optional
/// fields are omitted when absent so that writing a parsed file reproduces
/// its values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub source: Source,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub has_photo_only: Option<bool>,
    /// Site score 1..10, reviews only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

impl RawPost {
    pub fn new(id: impl Into<String>, source: Source, text: impl Into<String>) -> Self {
        RawPost {
            id: id.into(),
            source,
            text: text.into(),
            has_photo_only: None,
            rating: None,
            label: None,
        }
    }

    pub fn photo_only(&self) -> bool {
        self.has_photo_only.unwrap_or(false)
    }

    /// The rating rule for reviews, else the stored label.
    pub fn annotation(&self) -> Label {
        match (self.source, self.rating) {
            (Source::Review, Some(r)) => annotate_by_rating(r).unwrap_or(Label::Unlabeled),
            _ => self.label.unwrap_or(Label::Unlabeled),
        }
    }

    fn check(&self, expected: Option<Source>) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if let Some(src) = expected {
            if src != self.source {
                return Err(format!("source {} does not match expected {src}", self.source));
            }
        }
        if let Some(r) = self.rating {
            if self.source != Source::Review {
                return Err(format!("rating given for a {} post", self.source));
            }
            annotate_by_rating(r).map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineDiagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ingested {
    pub posts: Vec<RawPost>,
    pub diagnostics: Vec<LineDiagnostic>,
}

/// Parses corpus lines. Malformed records become diagnostics; a repeated id
/// is fatal. Blank lines are skipped.
pub fn parse_corpus(origin: &str, text: &str, expected: Option<Source>) -> Result<Ingested, PrepError> {
    let mut out = Ingested::default();
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let post: RawPost = match serde_json::from_str(line) {
            Ok(p) => p,
            Err(e) => {
                out.diagnostics.push(LineDiagnostic {
                    line: line_no,
                    message: e.to_string(),
                });
                continue;
            }
        };
        if let Err(message) = post.check(expected) {
            out.diagnostics.push(LineDiagnostic {
                line: line_no,
                message,
            });
            continue;
        }
        if ids.insert(post.id.clone(), line_no).is_some() {
            return Err(PrepError::DuplicateId {
                origin: origin.to_string(),
                line: line_no,
                id: post.id,
            });
        }
        out.posts.push(post);
    }
    Ok(out)
}

pub fn ingest(path: &Path, source: Option<Source>) -> Result<Ingested, PrepError> {
    let text = resource::read_to_string(path)?;
    parse_corpus(&path.display().to_string(), &text, source)
}

pub fn write_corpus<'a, I: IntoIterator<Item = &'a RawPost>>(posts: I) -> String {
    let mut s = String::new();
    for p in posts {
        s.push_str(&serde_json::to_string(p).expect("posts serialize"));
        s.push('\n');
    }
    s
}

/// A post after preparation. `tokens` always equals `tokenize(clean_text)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub source: Source,
    pub raw_text: String,
    pub clean_text: String,
    pub tokens: Vec<Token>,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<i64>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        source: Source,
        text: impl Into<String>,
        label: Label,
        emoticons: &EmoticonLexicon,
    ) -> Self {
        let text = text.into();
        Document {
            id: id.into(),
            source,
            tokens: tokenize(&text, emoticons),
            raw_text: text.clone(),
            clean_text: text,
            label,
            rating: None,
        }
    }

    /// A document from an already prepared corpus record.
    pub fn from_post(post: &RawPost, emoticons: &EmoticonLexicon) -> Self {
        let mut doc = Document::new(&post.id, post.source, &post.text, post.annotation(), emoticons);
        doc.rating = post.rating;
        doc
    }

    pub fn set_clean_text(&mut self, text: String, emoticons: &EmoticonLexicon) {
        self.tokens = tokenize(&text, emoticons);
        self.clean_text = text;
    }

    /// The corpus record for this document, carrying the cleaned text.
    pub fn to_post(&self) -> RawPost {
        RawPost {
            id: self.id.clone(),
            source: self.source,
            text: self.clean_text.clone(),
            has_photo_only: None,
            rating: self.rating,
            label: (self.label != Label::Unlabeled).then_some(self.label),
        }
    }
}

/// Positive above 5, negative below 5, neutral at 5.
pub fn annotate_by_rating(rating: i64) -> Result<Label, PrepError> {
    match rating {
        6..=10 => Ok(Label::Positive),
        5 => Ok(Label::Neutral),
        1..=4 => Ok(Label::Negative),
        _ => Err(PrepError::RatingOutOfRange(rating)),
    }
}

/// True iff every token is a mention or punctuation and there is a mention.
pub fn is_mention_only(text: &str, emoticons: &EmoticonLexicon) -> bool {
    let tokens = tokenize(text, emoticons);
    tokens.iter().any(|t| t.kind == TokenKind::Mention)
        && tokens
            .iter()
            .all(|t| matches!(t.kind, TokenKind::Mention | TokenKind::Punctuation))
}

/// Abbreviations and emoticons with their Arabic meanings, longest key first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbbreviationMap {
    entries: Vec<(String, String)>,
}

impl AbbreviationMap {
    pub fn new<I, K, V>(entries: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let map: BTreeMap<String, String> = entries
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .collect();
        let mut entries: Vec<(String, String)> = map.into_iter().collect();
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        AbbreviationMap { entries }
    }

    pub fn parse(origin: &str, text: &str) -> Result<Self, ResourceError> {
        Ok(Self::new(resource::parse_tsv_map(origin, text)?))
    }

    pub fn load(path: &Path) -> Result<Self, ResourceError> {
        Ok(Self::new(resource::load_tsv_map(path)?))
    }

    pub fn bundled() -> Self {
        Self::parse("abbreviations.tsv", resource::ABBREVIATIONS).expect("bundled abbreviations are valid")
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Splices replacements for byte ranges of `text`, keeping each inserted
/// value separated from neighbouring non-space text.
fn splice(text: &str, replacements: &[(std::ops::Range<usize>, &str)]) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (range, value) in replacements {
        out.push_str(&text[last..range.start]);
        if out.chars().last().is_some_and(|c| !c.is_whitespace()) {
            out.push(' ');
        }
        out.push_str(value);
        if text[range.end..].chars().next().is_some_and(|c| !c.is_whitespace()) {
            out.push(' ');
        }
        last = range.end;
    }
    out.push_str(&text[last..]);
    out
}

/// Replaces map keys that cover whole tokens, longest key first.
///
/// A key matches when it starts at a token start and ends at a token end,
/// so multi-token keys such as `^_^` match even when the tokenizer splits
/// them.
pub fn replace_abbreviations(text: &str, map: &AbbreviationMap, emoticons: &EmoticonLexicon) -> String {
    let spans: Vec<_> = tokenize_spans(text, emoticons).into_iter().map(|(s, _)| s).collect();
    let ends: BTreeSet<usize> = spans.iter().map(|s| s.end).collect();
    let mut replacements = Vec::new();
    let mut i = 0;
    while i < spans.len() {
        let start = spans[i].start;
        let hit = map.entries.iter().find(|(k, _)| {
            text[start..].starts_with(k.as_str()) && ends.contains(&(start + k.len()))
        });
        match hit {
            Some((k, v)) => {
                let end = start + k.len();
                replacements.push((start..end, v.as_str()));
                while i < spans.len() && spans[i].start < end {
                    i += 1;
                }
            }
            None => i += 1,
        }
    }
    splice(text, &replacements)
}

/// English→Arabic glossary with lower-cased keys.
pub fn normalize_gloss(gloss: BTreeMap<String, String>) -> BTreeMap<String, String> {
    gloss.into_iter().map(|(k, v)| (k.to_lowercase(), v)).collect()
}

/// Replaces Latin-script word tokens found in `gloss` (keys lower-case).
/// Returns the new text and the Latin tokens with no entry, in order.
pub fn translate_english_tokens(
    text: &str,
    gloss: &BTreeMap<String, String>,
    emoticons: &EmoticonLexicon,
) -> (String, Vec<String>) {
    let mut replacements = Vec::new();
    let mut unresolved = Vec::new();
    for (span, token) in tokenize_spans(text, emoticons) {
        if token.kind != TokenKind::Word || !token.text.chars().any(is_latin_letter) {
            continue;
        }
        match gloss.get(&token.text.to_lowercase()) {
            Some(arabic) => replacements.push((span, arabic.as_str())),
            None => unresolved.push(token.text),
        }
    }
    (splice(text, &replacements), unresolved)
}

/// Filtering and rewriting stages, in the order they run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    UrlOrAdvertising,
    PhotoOnly,
    MentionOnly,
    Unrelated,
    NonArabic,
    Abbreviations,
    EnglishTranslation,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::UrlOrAdvertising,
        Stage::PhotoOnly,
        Stage::MentionOnly,
        Stage::Unrelated,
        Stage::NonArabic,
        Stage::Abbreviations,
        Stage::EnglishTranslation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::UrlOrAdvertising => "url_or_advertising",
            Stage::PhotoOnly => "photo_only",
            Stage::MentionOnly => "mention_only",
            Stage::Unrelated => "unrelated",
            Stage::NonArabic => "non_arabic",
            Stage::Abbreviations => "abbreviations",
            Stage::EnglishTranslation => "english_translation",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageCount {
    pub stage: Stage,
    pub surviving: usize,
    pub dropped_ids: Vec<String>,
}

/// Survivors after each stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub initial_count: usize,
    pub stages: Vec<StageCount>,
}

impl FilterReport {
    /// Initial count followed by the survivors after every stage.
    pub fn counts(&self) -> Vec<usize> {
        std::iter::once(self.initial_count)
            .chain(self.stages.iter().map(|s| s.surviving))
            .collect()
    }

    pub fn final_count(&self) -> usize {
        self.stages.last().map_or(self.initial_count, |s| s.surviving)
    }

    pub fn dropped_at(&self, stage: Stage) -> usize {
        self.stages
            .iter()
            .find(|s| s.stage == stage)
            .map_or(0, |s| s.dropped_ids.len())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("stage,surviving,dropped\n");
        s.push_str(&format!("initial,{},0\n", self.initial_count));
        for st in &self.stages {
            s.push_str(&format!("{},{},{}\n", st.stage, st.surviving, st.dropped_ids.len()));
        }
        s
    }
}

/// Everything the pipeline needs; immutable once built.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub emoticons: EmoticonLexicon,
    pub variants: VariantTable,
    /// Normalised topic words. Empty disables the relatedness filter.
    pub topic_words: BTreeSet<String>,
    /// Posts kept by the relatedness filter regardless of their words.
    pub topic_exempt_ids: BTreeSet<String>,
    /// Phrases marking a post as advertising (case-insensitive substring).
    pub spam_phrases: Vec<String>,
    pub abbreviations: AbbreviationMap,
    pub translit_rules: TranslitRules,
    pub translit_overrides: BTreeMap<String, String>,
    /// Arabic word frequencies used to rank transliteration candidates.
    pub lexicon: FrequencyTable,
    pub gloss: BTreeMap<String, String>,
    /// Posts with fewer Arabic letters than this share are treated as Franco-Arab.
    pub latin_threshold: f64,
    /// Minimum share of transliterated words for a Franco-Arab post to be kept.
    pub min_resolved_fraction: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            emoticons: EmoticonLexicon::bundled(),
            variants: VariantTable::arabic(),
            topic_words: BTreeSet::new(),
            topic_exempt_ids: BTreeSet::new(),
            spam_phrases: Vec::new(),
            abbreviations: AbbreviationMap::bundled(),
            translit_rules: TranslitRules::bundled(),
            translit_overrides: BTreeMap::new(),
            lexicon: FrequencyTable::new(),
            gloss: BTreeMap::new(),
            latin_threshold: 0.5,
            min_resolved_fraction: 0.5,
        }
    }
}

impl PipelineConfig {
    /// Lower-cases Latin letters, drops diacritics and tatweel and maps letter
    /// variants to their canonical form.
    pub fn normalize_word(&self, word: &str) -> String {
        let stripped: String = word
            .chars()
            .filter(|&c| !matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{0640}'))
            .flat_map(char::to_lowercase)
            .collect();
        self.variants.canonicalize(&stripped)
    }

    pub fn set_topic_words<I, S>(&mut self, words: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.topic_words = words.into_iter().map(|w| self.normalize_word(w.as_ref())).collect();
    }

    /// Lexicon from the Arabic-script posts among `posts`.
    pub fn lexicon_from_posts(&self, posts: &[RawPost]) -> FrequencyTable {
        let mut table = FrequencyTable::new();
        for p in posts.iter().filter(|p| !is_latin_script(&p.text)) {
            table.add_tokens(&tokenize(&p.text, &self.emoticons));
        }
        table
    }

    fn is_url_or_advertising(&self, tokens: &[Token], text: &str) -> bool {
        let lower = text.to_lowercase();
        if self
            .spam_phrases
            .iter()
            .any(|p| !p.is_empty() && lower.contains(&p.to_lowercase()))
        {
            return true;
        }
        tokens.iter().any(|t| t.kind == TokenKind::Url) && !tokens.iter().any(|t| t.kind == TokenKind::Word)
    }

    fn is_related(&self, post: &RawPost, tokens: &[Token]) -> bool {
        if self.topic_words.is_empty() || self.topic_exempt_ids.contains(&post.id) {
            return true;
        }
        tokens.iter().any(|t| match t.kind {
            TokenKind::Word => self.topic_words.contains(&self.normalize_word(&t.text)),
            TokenKind::Hashtag => t
                .hashtag_parts()
                .any(|p| self.topic_words.contains(&self.normalize_word(p))),
            _ => false,
        })
    }
}

/// Per-post notes collected while preparing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PostDiagnostics {
    pub id: String,
    pub franco: Vec<FrancoDiagnostic>,
    pub untranslated: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutput {
    pub documents: Vec<Document>,
    pub report: FilterReport,
    /// Only posts with something to report.
    pub diagnostics: Vec<PostDiagnostics>,
}

enum PostOutcome {
    Dropped(Stage),
    Kept(Box<Document>, PostDiagnostics),
}

fn prepare_post(post: &RawPost, cfg: &PipelineConfig) -> PostOutcome {
    let mut diag = PostDiagnostics {
        id: post.id.clone(),
        ..Default::default()
    };
    let mut text = post.text.clone();

    // Reviews only go through the rewriting stages.
    if post.source != Source::Review {
        let tokens = tokenize(&text, &cfg.emoticons);
        if cfg.is_url_or_advertising(&tokens, &text) {
            return PostOutcome::Dropped(Stage::UrlOrAdvertising);
        }
        if post.photo_only() || tokens.is_empty() {
            return PostOutcome::Dropped(Stage::PhotoOnly);
        }
        if is_mention_only(&text, &cfg.emoticons) {
            return PostOutcome::Dropped(Stage::MentionOnly);
        }
        if !cfg.is_related(post, &tokens) {
            return PostOutcome::Dropped(Stage::Unrelated);
        }
        // Script is judged on words only; emoticons such as ":D" and
        // mentions carry Latin letters too.
        let words: Vec<&str> = tokens
            .iter()
            .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Hashtag))
            .map(|t| t.text.as_str())
            .collect();
        let words = words.join(" ");
        let has_letters = words.chars().any(char::is_alphabetic);
        if has_letters && arabic_script_ratio(&words) < cfg.latin_threshold {
            let outcome = transliterate_franco(
                &text,
                &cfg.translit_rules,
                &cfg.lexicon,
                &cfg.translit_overrides,
                &cfg.emoticons,
            );
            if outcome.latin_words == 0 || outcome.resolved_fraction() < cfg.min_resolved_fraction {
                return PostOutcome::Dropped(Stage::NonArabic);
            }
            text = outcome.text;
            diag.franco = outcome.diagnostics;
        }
    }

    text = replace_abbreviations(&text, &cfg.abbreviations, &cfg.emoticons);
    let (translated, untranslated) = translate_english_tokens(&text, &cfg.gloss, &cfg.emoticons);
    diag.untranslated = untranslated;

    let mut doc = Document::new(&post.id, post.source, &post.text, post.annotation(), &cfg.emoticons);
    doc.rating = post.rating;
    doc.set_clean_text(translated, &cfg.emoticons);
    PostOutcome::Kept(Box::new(doc), diag)
}

/// Runs every post through the preparation stages.
///
/// Non-review posts are dropped, in order, when they are URL-only or
/// advertising, photo-only, mention-only, unrelated to the topic words, or
/// Latin-script text that does not transliterate. Survivors then have
/// abbreviations and emoticons replaced and English words translated.
pub fn run_pipeline(posts: &[RawPost], cfg: &PipelineConfig) -> PipelineOutput {
    let outcomes: Vec<PostOutcome> = posts.par_iter().map(|p| prepare_post(p, cfg)).collect();

    let mut dropped: BTreeMap<Stage, Vec<String>> = BTreeMap::new();
    let mut documents = Vec::new();
    let mut diagnostics = Vec::new();
    for (post, outcome) in posts.iter().zip(outcomes) {
        match outcome {
            PostOutcome::Dropped(stage) => dropped.entry(stage).or_default().push(post.id.clone()),
            PostOutcome::Kept(doc, diag) => {
                documents.push(*doc);
                if !diag.franco.is_empty() || !diag.untranslated.is_empty() {
                    diagnostics.push(diag);
                }
            }
        }
    }

    let mut surviving = posts.len();
    let stages = Stage::ALL
        .iter()
        .map(|&stage| {
            let dropped_ids = dropped.remove(&stage).unwrap_or_default();
            surviving -= dropped_ids.len();
            StageCount {
                stage,
                surviving,
                dropped_ids,
            }
        })
        .collect();

    PipelineOutput {
        documents,
        report: FilterReport {
            initial_count: posts.len(),
            stages,
        },
        diagnostics,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
    pub unlabeled: usize,
}

impl LabelCounts {
    pub fn add(&mut self, label: Label) {
        match label {
            Label::Positive => self.positive += 1,
            Label::Negative => self.negative += 1,
            Label::Neutral => self.neutral += 1,
            Label::Unlabeled => self.unlabeled += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative + self.neutral + self.unlabeled
    }

    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Positive => self.positive,
            Label::Negative => self.negative,
            Label::Neutral => self.neutral,
            Label::Unlabeled => self.unlabeled,
        }
    }

    /// Share of `label` in percent; 0 for an empty corpus.
    pub fn percent(&self, label: Label) -> f64 {
        match self.total() {
            0 => 0.0,
            n => 100.0 * self.get(label) as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub per_source: BTreeMap<Source, LabelCounts>,
    pub overall: LabelCounts,
}

impl CorpusStats {
    pub fn source(&self, source: Source) -> LabelCounts {
        self.per_source.get(&source).copied().unwrap_or_default()
    }

    /// Label counts per source plus an `all` row, as CSV.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "source,positive,negative,neutral,unlabeled,total,positive_pct,negative_pct,neutral_pct\n",
        );
        let rows = Source::ALL
            .iter()
            .map(|src| (src.as_str(), self.source(*src)))
            .chain(std::iter::once(("all", self.overall)));
        for (name, c) in rows {
            s.push_str(&format!(
                "{name},{},{},{},{},{},{:.2},{:.2},{:.2}\n",
                c.positive,
                c.negative,
                c.neutral,
                c.unlabeled,
                c.total(),
                c.percent(Label::Positive),
                c.percent(Label::Negative),
                c.percent(Label::Neutral),
            ));
        }
        s
    }
}

pub fn corpus_stats(docs: &[Document]) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for d in docs {
        stats.per_source.entry(d.source).or_default().add(d.label);
        stats.overall.add(d.label);
    }
    stats
}
