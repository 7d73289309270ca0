//! Line-oriented resource files: word lists, TSV maps and their diagnostics.
//!
//! Every resource format shares the same conventions: UTF-8, one entry per
//! line, blank lines ignored, and lines whose first non-blank character is
//! `#` treated as comments.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
}

impl ResourceError {
    pub fn parse(origin: &str, line: usize, message: impl fmt::Display) -> Self {
        ResourceError::Parse {
            origin: origin.to_string(),
            line,
            message: message.to_string(),
        }
    }
}

pub fn read_to_string(path: &Path) -> Result<String, ResourceError> {
    fs::read_to_string(path).map_err(|source| ResourceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
///
/// Trailing `\r` and surrounding whitespace are stripped.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Parses `key<TAB>value` lines. Keys must be unique and both sides non-empty.
pub fn parse_tsv_map(origin: &str, text: &str) -> Result<BTreeMap<String, String>, ResourceError> {
    let mut map = BTreeMap::new();
    for (line_no, line) in content_lines(text) {
        let (key, value) = line
            .split_once('\t')
            .ok_or_else(|| ResourceError::parse(origin, line_no, "expected key<TAB>value"))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ResourceError::parse(origin, line_no, "empty key or value"));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ResourceError::parse(
                origin,
                line_no,
                format!("duplicate key {key:?}"),
            ));
        }
    }
    Ok(map)
}

pub fn load_tsv_map(path: &Path) -> Result<BTreeMap<String, String>, ResourceError> {
    let text = read_to_string(path)?;
    parse_tsv_map(&path.display().to_string(), &text)
}

/// Parses a plain word list. Entries must be whitespace-free and unique.
pub fn parse_word_list(origin: &str, text: &str) -> Result<Vec<String>, ResourceError> {
    let mut seen = BTreeMap::new();
    let mut words = Vec::new();
    for (line_no, line) in content_lines(text) {
        if line.chars().any(char::is_whitespace) {
            return Err(ResourceError::parse(
                origin,
                line_no,
                format!("entry {line:?} contains whitespace"),
            ));
        }
        if let Some(first) = seen.insert(line.to_string(), line_no) {
            return Err(ResourceError::parse(
                origin,
                line_no,
                format!("duplicate entry {line:?} (first seen on line {first})"),
            ));
        }
        words.push(line.to_string());
    }
    Ok(words)
}

pub fn load_word_list(path: &Path) -> Result<Vec<String>, ResourceError> {
    let text = read_to_string(path)?;
    parse_word_list(&path.display().to_string(), &text)
}

pub const ENGLISH_STOPWORDS: &str = include_str!("../resources/english_stopwords.txt");
pub const EMOTICONS: &str = include_str!("../resources/emoticons.txt");
pub const ABBREVIATIONS: &str = include_str!("../resources/abbreviations.tsv");
pub const TRANSLIT_RULES: &str = include_str!("../resources/translit_rules.tsv");
pub const MORPH_RULES: &str = include_str!("../resources/morph_rules.toml");

/// The MSA stopword lists shipped with the crate, as `(name, contents)`.
pub const MSA_LISTS: [(&str, &str); 3] = [
    (
        "stop_words_project",
        include_str!("../resources/msa/stop_words_project.txt"),
    ),
    (
        "stopwords_iso",
        include_str!("../resources/msa/stopwords_iso.txt"),
    ),
    ("spacy", include_str!("../resources/msa/spacy.txt")),
];

pub const MSA_MERGED: &str = include_str!("../resources/msa/merged.txt");
