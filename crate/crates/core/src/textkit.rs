//! Arabic-aware text primitives: tokenization, letter-variant classes and
//! script detection.

use std::collections::BTreeSet;
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::resource::{self, ResourceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Emoticon,
    Punctuation,
    Number,
    Mention,
    Url,
    Hashtag,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn new(text: impl Into<String>, kind: TokenKind) -> Self {
        Token {
            text: text.into(),
            kind,
        }
    }

    pub fn word(text: impl Into<String>) -> Self {
        Token::new(text, TokenKind::Word)
    }

    /// Word parts of a hashtag (`#الفيل_الأزرق` gives `الفيل`, `الأزرق`).
    /// Empty for other kinds.
    pub fn hashtag_parts(&self) -> impl Iterator<Item = &str> {
        let body = match self.kind {
            TokenKind::Hashtag => &self.text[1..],
            _ => "",
        };
        body.split('_').filter(|p| !p.is_empty())
    }
}

/// Emoticons recognised as single tokens, kept longest-first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmoticonLexicon {
    entries: Vec<String>,
}

impl EmoticonLexicon {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = entries
            .into_iter()
            .map(Into::into)
            .filter(|e| !e.is_empty() && !e.starts_with('@') && !e.chars().any(char::is_whitespace))
            .collect();
        let mut entries: Vec<String> = set.into_iter().collect();
        entries.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        EmoticonLexicon { entries }
    }

    pub fn parse(origin: &str, text: &str) -> Result<Self, ResourceError> {
        Ok(Self::new(resource::parse_word_list(origin, text)?))
    }

    pub fn load(path: &Path) -> Result<Self, ResourceError> {
        Ok(Self::new(resource::load_word_list(path)?))
    }

    /// The lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse("emoticons.txt", resource::EMOTICONS).expect("bundled emoticon lexicon is valid")
    }

    pub fn contains(&self, s: &str) -> bool {
        self.entries.iter().any(|e| e == s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn longest_prefix_of(&self, s: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| s.starts_with(e.as_str()))
            .map(String::as_str)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_url(chunk: &str) -> bool {
    let lower = chunk.to_lowercase();
    ["http://", "https://", "www."]
        .iter()
        .any(|p| lower.starts_with(p) && lower.len() > p.len())
}

/// Splits `text` into tokens with their byte ranges in `text`.
///
/// Whitespace-separated chunks starting with `http://`, `https://` or `www.`
/// are single URL tokens. Inside other chunks, at every token boundary the
/// longest emoticon is tried first, then `@mention` / `#hashtag`, then a
/// maximal run of letters and digits; anything else is a one-character
/// punctuation token.
pub fn tokenize_spans(text: &str, emoticons: &EmoticonLexicon) -> Vec<(Range<usize>, Token)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split_whitespace() {
        let start = offset + text[offset..].find(chunk).expect("chunk comes from text");
        offset = start + chunk.len();
        if is_url(chunk) {
            out.push((start..offset, Token::new(chunk, TokenKind::Url)));
            continue;
        }
        tokenize_chunk(chunk, start, emoticons, &mut out);
    }
    out
}

fn tokenize_chunk(
    chunk: &str,
    base: usize,
    emoticons: &EmoticonLexicon,
    out: &mut Vec<(Range<usize>, Token)>,
) {
    let mut pos = 0;
    while pos < chunk.len() {
        let rest = &chunk[pos..];
        if let Some(emo) = emoticons.longest_prefix_of(rest) {
            let end = pos + emo.len();
            out.push((base + pos..base + end, Token::new(emo, TokenKind::Emoticon)));
            pos = end;
            continue;
        }
        let first = rest.chars().next().expect("rest is non-empty");
        if first == '@' || first == '#' {
            let body_len: usize = rest[1..]
                .chars()
                .take_while(|&c| is_word_char(c) || c == '_')
                .map(char::len_utf8)
                .sum();
            let body = &rest[1..1 + body_len];
            if first == '@' || body.chars().any(is_word_char) {
                let end = pos + 1 + body_len;
                let kind = if first == '@' {
                    TokenKind::Mention
                } else {
                    TokenKind::Hashtag
                };
                out.push((base + pos..base + end, Token::new(&chunk[pos..end], kind)));
                pos = end;
                continue;
            }
        }
        if is_word_char(first) {
            let len: usize = rest
                .chars()
                .take_while(|&c| is_word_char(c))
                .map(char::len_utf8)
                .sum();
            let run = &rest[..len];
            let kind = if run.chars().all(char::is_numeric) {
                TokenKind::Number
            } else {
                TokenKind::Word
            };
            out.push((base + pos..base + pos + len, Token::new(run, kind)));
            pos += len;
            continue;
        }
        let len = first.len_utf8();
        out.push((
            base + pos..base + pos + len,
            Token::new(&rest[..len], TokenKind::Punctuation),
        ));
        pos += len;
    }
}

pub fn tokenize(text: &str, emoticons: &EmoticonLexicon) -> Vec<Token> {
    tokenize_spans(text, emoticons)
        .into_iter()
        .map(|(_, t)| t)
        .collect()
}

/// One class of interchangeable letters with its canonical member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantGroup {
    pub canonical: char,
    pub members: Vec<char>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VariantTableError {
    #[error("canonical letter {0:?} is not a member of its group")]
    CanonicalNotMember(char),
    #[error("letter {0:?} appears in more than one group")]
    Overlap(char),
    #[error("group with canonical {0:?} has duplicate members")]
    DuplicateMember(char),
}

/// Letters written in several interchangeable forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<VariantGroup>", into = "Vec<VariantGroup>")]
pub struct VariantTable {
    groups: Vec<VariantGroup>,
}

impl VariantTable {
    pub fn new(groups: Vec<VariantGroup>) -> Result<Self, VariantTableError> {
        let mut seen = BTreeSet::new();
        for g in &groups {
            if !g.members.contains(&g.canonical) {
                return Err(VariantTableError::CanonicalNotMember(g.canonical));
            }
            let distinct: BTreeSet<char> = g.members.iter().copied().collect();
            if distinct.len() != g.members.len() {
                return Err(VariantTableError::DuplicateMember(g.canonical));
            }
            for &m in &g.members {
                if !seen.insert(m) {
                    return Err(VariantTableError::Overlap(m));
                }
            }
        }
        Ok(VariantTable { groups })
    }

    /// Alef forms آ/أ/إ/ا, ya forms ى/ي and ta-marbuta/ha ة/ه, with
    /// canonical letters ا, ي and ة.
    pub fn arabic() -> Self {
        VariantTable::new(vec![
            VariantGroup {
                canonical: 'ا',
                members: vec!['آ', 'أ', 'إ', 'ا'],
            },
            VariantGroup {
                canonical: 'ي',
                members: vec!['ى', 'ي'],
            },
            VariantGroup {
                canonical: 'ة',
                members: vec!['ة', 'ه'],
            },
        ])
        .expect("built-in variant table is valid")
    }

    pub fn empty() -> Self {
        VariantTable { groups: Vec::new() }
    }

    pub fn groups(&self) -> &[VariantGroup] {
        &self.groups
    }

    pub fn group_of(&self, c: char) -> Option<&VariantGroup> {
        self.groups.iter().find(|g| g.members.contains(&c))
    }

    /// Replaces every variant letter by its group's canonical letter.
    pub fn canonicalize(&self, word: &str) -> String {
        word.chars()
            .map(|c| self.group_of(c).map_or(c, |g| g.canonical))
            .collect()
    }
}

impl TryFrom<Vec<VariantGroup>> for VariantTable {
    type Error = VariantTableError;

    fn try_from(groups: Vec<VariantGroup>) -> Result<Self, Self::Error> {
        VariantTable::new(groups)
    }
}

impl From<VariantTable> for Vec<VariantGroup> {
    fn from(t: VariantTable) -> Self {
        t.groups
    }
}

/// Every spelling of `word` obtained by swapping each variant letter for
/// any member of its group. Always contains `word` itself.
pub fn letter_variants(word: &str, table: &VariantTable) -> BTreeSet<String> {
    let mut forms = vec![String::with_capacity(word.len())];
    for c in word.chars() {
        match table.group_of(c) {
            Some(group) => {
                forms = forms
                    .iter()
                    .flat_map(|prefix| {
                        group.members.iter().map(move |&m| {
                            let mut s = prefix.clone();
                            s.push(m);
                            s
                        })
                    })
                    .collect();
            }
            None => forms.iter_mut().for_each(|s| s.push(c)),
        }
    }
    forms.into_iter().collect()
}

/// Letters of the Arabic script, excluding diacritics and tatweel.
pub fn is_arabic_letter(c: char) -> bool {
    matches!(c,
        '\u{0620}'..='\u{063F}'
        | '\u{0641}'..='\u{064A}'
        | '\u{066E}'..='\u{066F}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}'
        | '\u{06EE}'..='\u{06EF}'
        | '\u{06FA}'..='\u{06FC}'
        | '\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08C9}')
        || (matches!(c, '\u{FB50}'..='\u{FDFF}' | '\u{FE70}'..='\u{FEFC}') && c.is_alphabetic())
}

pub fn is_latin_letter(c: char) -> bool {
    c.is_ascii_alphabetic()
        || (matches!(c, '\u{00C0}'..='\u{024F}' | '\u{1E00}'..='\u{1EFF}') && c.is_alphabetic())
}

/// Arabic letters over Arabic plus Latin letters; 0 when there are none.
pub fn arabic_script_ratio(text: &str) -> f64 {
    let (mut arabic, mut latin) = (0usize, 0usize);
    for c in text.chars() {
        if is_arabic_letter(c) {
            arabic += 1;
        } else if is_latin_letter(c) {
            latin += 1;
        }
    }
    if arabic + latin == 0 {
        0.0
    } else {
        arabic as f64 / (arabic + latin) as f64
    }
}

/// True when the text has letters and fewer than half of them are Arabic.
pub fn is_latin_script(text: &str) -> bool {
    text.chars().any(|c| is_arabic_letter(c) || is_latin_letter(c)) && arabic_script_ratio(text) < 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kinds(tokens: &[Token]) -> Vec<(&str, TokenKind)> {
        tokens.iter().map(|t| (t.text.as_str(), t.kind)).collect()
    }

    #[test]
    fn empty_input_has_no_tokens() {
        assert!(tokenize("", &EmoticonLexicon::bundled()).is_empty());
        assert!(tokenize("   \n\t", &EmoticonLexicon::bundled()).is_empty());
    }

    #[test]
    fn splits_words_and_punctuation() {
        let toks = tokenize("الفيلم رائع!", &EmoticonLexicon::default());
        assert_eq!(
            kinds(&toks),
            vec![
                ("الفيلم", TokenKind::Word),
                ("رائع", TokenKind::Word),
                ("!", TokenKind::Punctuation)
            ]
        );
    }

    #[test]
    fn emoticon_from_lexicon() {
        let lex = EmoticonLexicon::new([":D"]);
        let toks = tokenize("حلو اوي :D", &lex);
        assert_eq!(
            kinds(&toks),
            vec![
                ("حلو", TokenKind::Word),
                ("اوي", TokenKind::Word),
                (":D", TokenKind::Emoticon)
            ]
        );
    }

    #[test]
    fn emoticon_longest_match_wins() {
        let lex = EmoticonLexicon::new([":", ":-", ":-D", "^_^"]);
        let toks = tokenize("جميل:-D^_^", &lex);
        assert_eq!(
            kinds(&toks),
            vec![
                ("جميل", TokenKind::Word),
                (":-D", TokenKind::Emoticon),
                ("^_^", TokenKind::Emoticon)
            ]
        );
    }

    #[test]
    fn mentions_hashtags_urls_numbers() {
        let toks = tokenize(
            "@ahmed شوف #الفيل_الأزرق http://bit.ly/x 2014 de7k",
            &EmoticonLexicon::bundled(),
        );
        assert_eq!(
            kinds(&toks),
            vec![
                ("@ahmed", TokenKind::Mention),
                ("شوف", TokenKind::Word),
                ("#الفيل_الأزرق", TokenKind::Hashtag),
                ("http://bit.ly/x", TokenKind::Url),
                ("2014", TokenKind::Number),
                ("de7k", TokenKind::Word),
            ]
        );
        let parts: Vec<_> = toks[2].hashtag_parts().collect();
        assert_eq!(parts, vec!["الفيل", "الأزرق"]);
    }

    #[test]
    fn bare_at_sign_is_an_empty_mention() {
        let toks = tokenize("@ !", &EmoticonLexicon::default());
        assert_eq!(
            kinds(&toks),
            vec![("@", TokenKind::Mention), ("!", TokenKind::Punctuation)]
        );
        let toks = tokenize("# !", &EmoticonLexicon::default());
        assert_eq!(toks[0].kind, TokenKind::Punctuation);
    }

    #[test]
    fn spans_point_into_source() {
        let text = "  ممتاز، جدا :D ";
        for (span, tok) in tokenize_spans(text, &EmoticonLexicon::bundled()) {
            assert_eq!(&text[span], tok.text);
        }
    }

    #[test]
    fn variants_identity_without_variant_letters() {
        let v = letter_variants("بس", &VariantTable::arabic());
        assert_eq!(v, BTreeSet::from(["بس".to_string()]));
    }

    #[test]
    fn variants_of_ala() {
        let v = letter_variants("على", &VariantTable::arabic());
        assert!(v.contains("على"));
        assert!(v.contains("علي"));
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn variants_cartesian_product_by_hand() {
        // Groups {a,b} and {x,y,z}; "ax" has one letter from each.
        let table = VariantTable::new(vec![
            VariantGroup {
                canonical: 'a',
                members: vec!['a', 'b'],
            },
            VariantGroup {
                canonical: 'x',
                members: vec!['x', 'y', 'z'],
            },
        ])
        .unwrap();
        let expected: BTreeSet<String> = ["ax", "ay", "az", "bx", "by", "bz"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(letter_variants("ax", &table), expected);

        // "إلى": alef position (4 forms) times ya position (2 forms).
        let expected: BTreeSet<String> = [
            "آلى", "آلي", "ألى", "ألي", "إلى", "إلي", "الى", "الي",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(letter_variants("إلى", &VariantTable::arabic()), expected);
    }

    #[test]
    fn variant_table_validation() {
        let bad = VariantTable::new(vec![VariantGroup {
            canonical: 'q',
            members: vec!['a'],
        }]);
        assert_eq!(bad, Err(VariantTableError::CanonicalNotMember('q')));
        let overlap = VariantTable::new(vec![
            VariantGroup {
                canonical: 'a',
                members: vec!['a', 'b'],
            },
            VariantGroup {
                canonical: 'c',
                members: vec!['c', 'b'],
            },
        ]);
        assert_eq!(overlap, Err(VariantTableError::Overlap('b')));
        for g in VariantTable::arabic().groups() {
            assert!(g.members.contains(&g.canonical));
        }
    }

    #[test]
    fn canonicalize_maps_to_canonical_letters() {
        assert_eq!(VariantTable::arabic().canonicalize("إلى"), "الي");
        assert_eq!(VariantTable::arabic().canonicalize("جميله"), "جميلة");
    }

    #[test]
    fn script_ratio_examples() {
        assert_eq!(arabic_script_ratio("فيلم جميل"), 1.0);
        assert_eq!(arabic_script_ratio("movie"), 0.0);
        assert_eq!(arabic_script_ratio("فيلم nice"), 0.5);
        assert_eq!(arabic_script_ratio("123 !!"), 0.0);
        // Diacritics and tatweel are not letters.
        assert_eq!(arabic_script_ratio("جَمِيـل ok"), 4.0 / 6.0);
    }

    fn token_text() -> impl Strategy<Value = String> {
        let pieces = prop::sample::select(vec![
            "الفيلم", "حلو", "de7k", ":D", ":-)", "^_^", "<3", "@sara", "#فيلم_حلو", "!", "؟", "،",
            "2014", "http://x.co/a", "www.site.com", " ", "  ", "\n", "_", "@", "#", ":", "هههه", "a.b",
            "(", ")",
        ]);
        prop::collection::vec(pieces, 0..16).prop_map(|v| v.concat())
    }

    proptest! {
        #[test]
        fn retokenizing_joined_tokens_is_stable(text in token_text()) {
            let lex = EmoticonLexicon::bundled();
            let first = tokenize(&text, &lex);
            let joined = first.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
            prop_assert_eq!(tokenize(&joined, &lex), first.clone());
            for t in &first {
                prop_assert!(!t.text.is_empty());
                prop_assert!(!t.text.chars().any(char::is_whitespace));
                prop_assert_eq!(t.kind == TokenKind::Url, is_url(&t.text));
                prop_assert_eq!(t.kind == TokenKind::Mention, t.text.starts_with('@'));
            }
        }

        #[test]
        fn variant_count_is_product_of_group_sizes(word in "[بسعلىيآأإاةهـ]{1,6}") {
            let table = VariantTable::arabic();
            let expected: usize = word
                .chars()
                .map(|c| table.group_of(c).map_or(1, |g| g.members.len()))
                .product();
            let v = letter_variants(&word, &table);
            prop_assert!(v.contains(&word));
            prop_assert_eq!(v.len(), expected);
        }

        #[test]
        fn ratio_ignores_digits_and_punctuation(
            text in "[a-zفيلم ]{0,12}",
            noise in "[0-9!؟،.?]{0,6}",
            at in 0usize..13,
        ) {
            let at = text.char_indices().map(|(i, _)| i).nth(at).unwrap_or(text.len());
            let mut noisy = text.clone();
            noisy.insert_str(at, &noise);
            prop_assert_eq!(arabic_script_ratio(&text), arabic_script_ratio(&noisy));
        }
    }
}
