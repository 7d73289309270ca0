//! Stopword list generation in three phases: word frequency over the
//! combined corpora, validity classification of frequent words, and
//! morphological/orthographic expansion of the surviving stems.
//!
//! Also holds the list algebra (union) and stopword removal used by the
//! experiments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus_prep::Document;
use crate::resource::{self, ResourceError};
use crate::textkit::{letter_variants, Token, TokenKind, VariantTable};

/// Cutoff used for both generated lists.
pub const DEFAULT_K: usize = 200;

#[derive(Debug, Error)]
pub enum StopgenError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("frequency table is empty")]
    EmptyTable,
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("invalid morphology rules: {0}")]
    Rules(String),
}

/// Word occurrence counts. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    entries: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, word: &str, n: u64) {
        if n == 0 {
            return;
        }
        *self.entries.entry(word.to_string()).or_insert(0) += n;
        self.total_tokens += n;
    }

    /// Counts word tokens and the word parts of hashtags.
    pub fn add_tokens(&mut self, tokens: &[Token]) {
        for t in tokens {
            match t.kind {
                TokenKind::Word => self.add(&t.text, 1),
                TokenKind::Hashtag => t.hashtag_parts().for_each(|p| self.add(p, 1)),
                _ => {}
            }
        }
    }

    pub fn merge(&mut self, other: &FrequencyTable) {
        for (w, &n) in &other.entries {
            self.add(w, n);
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.entries.get(word).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, &n)| (w.as_str(), n))
    }
}

impl<'a> FromIterator<&'a str> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut t = FrequencyTable::new();
        iter.into_iter().for_each(|w| t.add(w, 1));
        t
    }
}

/// Frequency of every word over all corpora combined.
pub fn build_frequency_table<'a, I>(corpora: I) -> FrequencyTable
where
    I: IntoIterator<Item = &'a [Document]>,
{
    let mut table = FrequencyTable::new();
    for corpus in corpora {
        for doc in corpus {
            table.add_tokens(&doc.tokens);
        }
    }
    table
}

/// The `k` most frequent words; ties go to the lexicographically smaller word.
pub fn top_k(table: &FrequencyTable, k: usize) -> Result<Vec<(String, u64)>, StopgenError> {
    if k == 0 {
        return Err(StopgenError::ZeroK);
    }
    let mut ranked: Vec<(String, u64)> = table.iter().map(|(w, n)| (w.to_string(), n)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dialect {
    Msa,
    Egyptian,
    Other,
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "msa" => Ok(Dialect::Msa),
            "egyptian" => Ok(Dialect::Egyptian),
            "other" => Ok(Dialect::Other),
            _ => Err(format!("unknown dialect {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    ContentWord,
    NeedsReview,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "valid",
            Verdict::ContentWord => "content_word",
            Verdict::NeedsReview => "needs_review",
        })
    }
}

/// A frequent word with the human-supplied annotations needed to judge it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateWord {
    pub word: String,
    pub dialect: Dialect,
    pub msa_correspondent: Option<String>,
    pub english_gloss: Option<String>,
    /// Possession words take pronoun suffixes.
    pub suffixable: bool,
    /// Manual decision from the annotation file. Only `content_word` and
    /// `needs_review` can be imposed; validity has to be shown by evidence.
    pub verdict_override: Option<Verdict>,
}

impl CandidateWord {
    pub fn new(word: impl Into<String>, dialect: Dialect) -> Self {
        CandidateWord {
            word: word.into(),
            dialect,
            msa_correspondent: None,
            english_gloss: None,
            suffixable: false,
            verdict_override: None,
        }
    }

    pub fn correspondent(mut self, msa: impl Into<String>) -> Self {
        self.msa_correspondent = Some(msa.into());
        self
    }

    pub fn gloss(mut self, english: impl Into<String>) -> Self {
        self.english_gloss = Some(english.into());
        self
    }

    pub fn suffixable(mut self, yes: bool) -> Self {
        self.suffixable = yes;
        self
    }

    pub fn with_override(mut self, verdict: Verdict) -> Self {
        self.verdict_override = Some(verdict);
        self
    }
}

/// Which check decided a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    WordInMsaList,
    GlossInEnglishList,
    CorrespondentInMsaList,
    CorrespondentGlossInEnglishList,
    ManualContentWord,
    ManualReview,
    MissingCorrespondent,
    MissingGloss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

/// Decides whether a candidate can be a stopword.
///
/// Valid when the word is in an MSA list, its MSA correspondent is, or its
/// English meaning is an English stopword. Manual overrides win. When no
/// check succeeds the word goes to review, with the missing annotations
/// named in the evidence.
pub fn classify_validity(
    word: &CandidateWord,
    msa_lists: &BTreeSet<String>,
    english_stoplist: &BTreeSet<String>,
) -> Classification {
    match word.verdict_override {
        Some(Verdict::ContentWord) => {
            return Classification {
                verdict: Verdict::ContentWord,
                evidence: vec![Evidence::ManualContentWord],
            }
        }
        Some(Verdict::NeedsReview) => {
            return Classification {
                verdict: Verdict::NeedsReview,
                evidence: vec![Evidence::ManualReview],
            }
        }
        Some(Verdict::Valid) | None => {}
    }

    let mut evidence = Vec::new();
    if msa_lists.contains(&word.word) {
        evidence.push(Evidence::WordInMsaList);
    }
    if let Some(c) = &word.msa_correspondent {
        if msa_lists.contains(c) {
            evidence.push(Evidence::CorrespondentInMsaList);
        }
    }
    if let Some(g) = &word.english_gloss {
        if english_stoplist.contains(&g.trim().to_lowercase()) {
            evidence.push(if word.msa_correspondent.is_some() {
                Evidence::CorrespondentGlossInEnglishList
            } else {
                Evidence::GlossInEnglishList
            });
        }
    }
    if !evidence.is_empty() {
        return Classification {
            verdict: Verdict::Valid,
            evidence,
        };
    }
    if word.dialect != Dialect::Msa && word.msa_correspondent.is_none() {
        evidence.push(Evidence::MissingCorrespondent);
    }
    if word.english_gloss.is_none() {
        evidence.push(Evidence::MissingGloss);
    }
    Classification {
        verdict: Verdict::NeedsReview,
        evidence,
    }
}

const CANDIDATE_HEADER: &str = "word";

/// Parses the candidate annotation TSV:
/// `word, dialect, msa_correspondent, english_gloss, suffixable(0/1), verdict_override`.
/// Empty cells (or `-`) mean "not given". A first line starting with
/// `word<TAB>` is taken as a header.
pub fn parse_candidates(origin: &str, text: &str) -> Result<Vec<CandidateWord>, ResourceError> {
    let mut out: Vec<CandidateWord> = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, (line_no, line)) in resource::content_lines(text).enumerate() {
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if idx == 0 && cols[0] == CANDIDATE_HEADER {
            continue;
        }
        if cols.len() < 5 || cols.len() > 6 {
            return Err(ResourceError::parse(
                origin,
                line_no,
                format!("expected 5 or 6 tab-separated columns, found {}", cols.len()),
            ));
        }
        let opt = |s: &str| (!s.is_empty() && s != "-").then(|| s.to_string());
        let word = cols[0].to_string();
        if word.is_empty() {
            return Err(ResourceError::parse(origin, line_no, "empty word"));
        }
        let dialect = cols[1]
            .parse::<Dialect>()
            .map_err(|e| ResourceError::parse(origin, line_no, e))?;
        let suffixable = match cols[4] {
            "0" => false,
            "1" => true,
            other => {
                return Err(ResourceError::parse(
                    origin,
                    line_no,
                    format!("suffixable must be 0 or 1, found {other:?}"),
                ))
            }
        };
        let verdict_override = match cols.get(5).copied().unwrap_or("") {
            "" | "-" => None,
            "content_word" => Some(Verdict::ContentWord),
            "needs_review" => Some(Verdict::NeedsReview),
            other => {
                return Err(ResourceError::parse(
                    origin,
                    line_no,
                    format!("verdict override must be content_word or needs_review, found {other:?}"),
                ))
            }
        };
        if !seen.insert(word.clone()) {
            return Err(ResourceError::parse(
                origin,
                line_no,
                format!("duplicate candidate {word:?}"),
            ));
        }
        out.push(CandidateWord {
            word,
            dialect,
            msa_correspondent: opt(cols[2]),
            english_gloss: opt(cols[3]),
            suffixable,
            verdict_override,
        });
    }
    Ok(out)
}

pub fn load_candidates(path: &Path) -> Result<Vec<CandidateWord>, ResourceError> {
    let text = resource::read_to_string(path)?;
    parse_candidates(&path.display().to_string(), &text)
}

/// Affixes and letter classes used to expand stems into surface forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphRules {
    pub prefixes: Vec<String>,
    pub pronoun_suffixes: Vec<String>,
    #[serde(rename = "variant_groups")]
    pub variants: VariantTable,
    /// Forms removed after expansion (manual revision).
    #[serde(default)]
    pub exclusions: BTreeSet<String>,
}

impl MorphRules {
    pub fn new(
        prefixes: Vec<String>,
        pronoun_suffixes: Vec<String>,
        variants: VariantTable,
    ) -> Result<Self, StopgenError> {
        let rules = MorphRules {
            prefixes,
            pronoun_suffixes,
            variants,
            exclusions: BTreeSet::new(),
        };
        rules.validate()?;
        Ok(rules)
    }

    pub fn parse_toml(text: &str) -> Result<Self, StopgenError> {
        let rules: MorphRules = toml::from_str(text).map_err(|e| StopgenError::Rules(e.to_string()))?;
        rules.validate()?;
        Ok(rules)
    }

    pub fn load(path: &Path) -> Result<Self, StopgenError> {
        Self::parse_toml(&resource::read_to_string(path)?)
    }

    /// Prefixes ال و ب ف ل and the composed وال بال فال لل; suffixes ي نا هم ه.
    pub fn bundled() -> Self {
        Self::parse_toml(resource::MORPH_RULES).expect("bundled morphology rules are valid")
    }

    fn validate(&self) -> Result<(), StopgenError> {
        for affix in self.prefixes.iter().chain(&self.pronoun_suffixes) {
            if affix.is_empty() || !affix.chars().all(crate::textkit::is_arabic_letter) {
                return Err(StopgenError::Rules(format!(
                    "affix {affix:?} must be a non-empty string of Arabic letters"
                )));
            }
        }
        Ok(())
    }
}

/// All surface forms of a stem.
///
/// Stems are `word` plus `word + suffix` for each pronoun suffix when
/// `suffixable`. Each stem is spelled every way `letter_variants` allows and
/// optionally preceded by one prefix; the prefix itself is not varied.
/// Exclusions are removed last, except for `word` itself.
pub fn expand_morphology(word: &str, rules: &MorphRules, suffixable: bool) -> BTreeSet<String> {
    let mut stems = vec![word.to_string()];
    if suffixable {
        stems.extend(rules.pronoun_suffixes.iter().map(|s| format!("{word}{s}")));
    }
    let mut forms = BTreeSet::new();
    for stem in &stems {
        for spelled in letter_variants(stem, &rules.variants) {
            for p in &rules.prefixes {
                forms.insert(format!("{p}{spelled}"));
            }
            forms.insert(spelled);
        }
    }
    forms.retain(|f| f == word || !rules.exclusions.contains(f));
    forms
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListKind {
    MsaGeneral,
    CorpusBased,
    EgyptianGeneral,
    Combined,
}

impl fmt::Display for ListKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ListKind::MsaGeneral => "msa_general",
            ListKind::CorpusBased => "corpus_based",
            ListKind::EgyptianGeneral => "egyptian_general",
            ListKind::Combined => "combined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopwordList {
    pub name: String,
    pub kind: ListKind,
    pub words: BTreeSet<String>,
}

impl StopwordList {
    /// Builds a list, dropping empty entries and entries with whitespace.
    pub fn new<I, S>(name: impl Into<String>, kind: ListKind, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopwordList {
            name: name.into(),
            kind,
            words: words
                .into_iter()
                .map(Into::into)
                .filter(|w: &String| !w.is_empty() && !w.chars().any(char::is_whitespace))
                .collect(),
        }
    }

    pub fn parse(
        name: impl Into<String>,
        kind: ListKind,
        origin: &str,
        text: &str,
    ) -> Result<Self, ResourceError> {
        Ok(Self::new(name, kind, resource::parse_word_list(origin, text)?))
    }

    /// Loads a list file; the name is the file stem.
    pub fn load(path: &Path, kind: ListKind) -> Result<Self, ResourceError> {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(Self::new(name, kind, resource::load_word_list(path)?))
    }

    /// The three bundled MSA lists merged into one.
    pub fn bundled_msa() -> Self {
        Self::parse("msa", ListKind::MsaGeneral, "merged.txt", resource::MSA_MERGED)
            .expect("bundled MSA list is valid")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// File form: a comment header then one word per line, sorted.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("# {} ({}), {} words\n", self.name, self.kind, self.words.len());
        for w in &self.words {
            s.push_str(w);
            s.push('\n');
        }
        s
    }
}

pub fn english_stoplist() -> BTreeSet<String> {
    resource::parse_word_list("english_stopwords.txt", resource::ENGLISH_STOPWORDS)
        .expect("bundled English list is valid")
        .into_iter()
        .collect()
}

/// Most frequent words, expanded, with no validity filtering.
pub fn generate_corpus_based(
    table: &FrequencyTable,
    rules: &MorphRules,
    k: usize,
) -> Result<StopwordList, StopgenError> {
    if table.is_empty() {
        return Err(StopgenError::EmptyTable);
    }
    let mut words = BTreeSet::new();
    for (w, _) in top_k(table, k)? {
        words.extend(expand_morphology(&w, rules, false));
    }
    Ok(StopwordList {
        name: "corpus_based".into(),
        kind: ListKind::CorpusBased,
        words,
    })
}

/// Result of building the Egyptian general list, with the words that were
/// left out and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgyptianGeneral {
    pub list: StopwordList,
    /// Stems that passed validation, sorted.
    pub stems: Vec<String>,
    pub content_words: Vec<String>,
    /// Words that could not be validated and were excluded.
    pub needs_review: Vec<String>,
}

/// General dialect list: the top-`k` words that validate as stopwords plus
/// every Egyptian candidate found in the corpora that validates, expanded.
///
/// Top words without an annotation cannot be validated and are reported in
/// `needs_review`.
pub fn generate_egyptian_general(
    table: &FrequencyTable,
    candidates: &[CandidateWord],
    rules: &MorphRules,
    k: usize,
    msa_lists: &BTreeSet<String>,
    english_stoplist: &BTreeSet<String>,
) -> Result<EgyptianGeneral, StopgenError> {
    let by_word: BTreeMap<&str, &CandidateWord> =
        candidates.iter().map(|c| (c.word.as_str(), c)).collect();

    let mut pool: BTreeSet<String> = top_k(table, k)?.into_iter().map(|(w, _)| w).collect();
    pool.extend(
        candidates
            .iter()
            .filter(|c| c.dialect == Dialect::Egyptian && table.count(&c.word) > 0)
            .map(|c| c.word.clone()),
    );

    let mut stems = Vec::new();
    let mut content_words = Vec::new();
    let mut needs_review = Vec::new();
    let mut words = BTreeSet::new();
    for w in pool {
        let Some(candidate) = by_word.get(w.as_str()) else {
            needs_review.push(w);
            continue;
        };
        match classify_validity(candidate, msa_lists, english_stoplist).verdict {
            Verdict::Valid => {
                words.extend(expand_morphology(&w, rules, candidate.suffixable));
                stems.push(w);
            }
            Verdict::ContentWord => content_words.push(w),
            Verdict::NeedsReview => needs_review.push(w),
        }
    }
    Ok(EgyptianGeneral {
        list: StopwordList {
            name: "egyptian_general".into(),
            kind: ListKind::EgyptianGeneral,
            words,
        },
        stems,
        content_words,
        needs_review,
    })
}

pub fn combine_lists(a: &StopwordList, b: &StopwordList) -> StopwordList {
    StopwordList {
        name: format!("{}+{}", a.name, b.name),
        kind: ListKind::Combined,
        words: a.words.union(&b.words).cloned().collect(),
    }
}

/// Drops tokens whose text is in the list (exact surface match).
pub fn remove_stopwords(tokens: &[Token], list: &StopwordList) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !list.contains(&t.text))
        .cloned()
        .collect()
}
