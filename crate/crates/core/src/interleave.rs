//! Training representations: plain surface forms, tag + lemma pairs, tag +
//! surface pairs, and the German stem + feature sequence format.
//!
//! A sentence is one line of space-separated tokens. In the Czech
//! interleaved modes every word becomes two tokens, tag first:
//!
//! ```text
//! VB-P---3P-AA--- existovat NNIP1-----A---- milión ...
//! ```
//!
//! In the German stemmed mode an inflected word becomes its stem followed by
//! its feature sequence, and a non-inflected word stays a single bracketed
//! token such as `und[KON]`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::compounds::is_separator;
use crate::morphlex::{MorphAnalysis, Tag};
use crate::tagsets::{split_bare_token, GermanFeatureSeq, PositionalTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Baseline,
    Morphgen,
    Serialization,
    GermanStemmed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Baseline => "baseline",
            Mode::Morphgen => "morphgen",
            Mode::Serialization => "serialization",
            Mode::GermanStemmed => "german-stemmed",
        }
    }

    pub fn is_interleaved(self) -> bool {
        !matches!(self, Mode::Baseline)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Mode::Baseline),
            "morphgen" => Ok(Mode::Morphgen),
            "serialization" => Ok(Mode::Serialization),
            "german-stemmed" => Ok(Mode::GermanStemmed),
            other => Err(format!("unknown representation mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    OddLength,
    TagExpected,
    WordExpected,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::OddLength => "odd-length",
            ErrorKind::TagExpected => "tag-expected",
            ErrorKind::WordExpected => "word-expected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{} at token {position}", kind.as_str())]
pub struct WellformednessError {
    pub position: usize,
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{words} words but {tags} tags")]
pub struct LengthMismatch {
    pub words: usize,
    pub tags: usize,
}

/// A decoded `(tag, word)` pair. For bare German tokens the word is the
/// lexeme and the tag is [`GermanFeatureSeq::Bare`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecodedPair {
    pub tag: Tag,
    pub word: String,
}

pub fn is_czech_tag(token: &str) -> bool {
    PositionalTag::parse(token).is_ok()
}

/// A fully specified German feature sequence such as `<+NN><Fem><Acc><Sg><NA>`.
pub fn is_feature_token(token: &str) -> bool {
    token.starts_with("<+") && GermanFeatureSeq::parse(token).is_ok()
}

/// A non-inflected German token such as `und[KON]` or `,[$]`.
pub fn parse_bare_token(token: &str) -> Option<(&str, GermanFeatureSeq)> {
    let (lexeme, tag) = split_bare_token(token)?;
    if lexeme.contains(['<', '>']) {
        return None;
    }
    GermanFeatureSeq::parse(tag).ok().map(|t| (lexeme, t))
}

/// Tokens that subword segmentation must leave whole when protection is on.
pub fn is_protected_token(token: &str) -> bool {
    is_czech_tag(token) || is_feature_token(token) || is_separator(token)
}

/// A sentence in one of the representations, tokens in output order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavedSentence {
    pub mode: Mode,
    pub tokens: Vec<String>,
}

impl InterleavedSentence {
    pub fn to_line(&self) -> String {
        self.tokens.join(" ")
    }

    pub fn pairs(&self) -> Result<Vec<DecodedPair>, WellformednessError> {
        decode(&self.tokens, self.mode)
    }
}

fn surface_of(a: &MorphAnalysis) -> &str {
    a.surface.as_deref().unwrap_or(&a.lemma)
}

pub fn encode(analyses: &[MorphAnalysis], mode: Mode) -> InterleavedSentence {
    let mut tokens = Vec::with_capacity(analyses.len() * 2);
    for a in analyses {
        match mode {
            Mode::Baseline => tokens.push(surface_of(a).to_owned()),
            Mode::Morphgen => {
                tokens.push(a.tag.to_string());
                tokens.push(a.lemma.clone());
            }
            Mode::Serialization => {
                tokens.push(a.tag.to_string());
                tokens.push(surface_of(a).to_owned());
            }
            Mode::GermanStemmed => match &a.tag {
                Tag::German(GermanFeatureSeq::Bare(_)) => tokens.push(format!("{}{}", a.lemma, a.tag)),
                tag => {
                    tokens.push(a.lemma.clone());
                    tokens.push(tag.fully_specified().to_string());
                }
            },
        }
    }
    InterleavedSentence { mode, tokens }
}

/// Validates a token sequence and returns its `(tag, word)` pairs.
///
/// Baseline sentences have no tags and always decode to an empty list.
pub fn decode<S: AsRef<str>>(tokens: &[S], mode: Mode) -> Result<Vec<DecodedPair>, WellformednessError> {
    match mode {
        Mode::Baseline => Ok(Vec::new()),
        Mode::Morphgen | Mode::Serialization => decode_czech(tokens),
        Mode::GermanStemmed => decode_german(tokens),
    }
}

fn decode_czech<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<DecodedPair>, WellformednessError> {
    if tokens.len() % 2 == 1 {
        return Err(WellformednessError {
            position: tokens.len() - 1,
            kind: ErrorKind::OddLength,
        });
    }
    let mut pairs = Vec::with_capacity(tokens.len() / 2);
    for (i, pair) in tokens.chunks(2).enumerate() {
        let tag = PositionalTag::parse(pair[0].as_ref()).map_err(|_| WellformednessError {
            position: 2 * i,
            kind: ErrorKind::TagExpected,
        })?;
        let word = pair[1].as_ref();
        if is_czech_tag(word) {
            return Err(WellformednessError {
                position: 2 * i + 1,
                kind: ErrorKind::WordExpected,
            });
        }
        pairs.push(DecodedPair {
            tag: Tag::Czech(tag),
            word: word.to_owned(),
        });
    }
    Ok(pairs)
}

fn decode_german<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<DecodedPair>, WellformednessError> {
    let mut pairs = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let token = tokens[i].as_ref();
        if let Some((lexeme, tag)) = parse_bare_token(token) {
            pairs.push(DecodedPair {
                tag: Tag::German(tag),
                word: lexeme.to_owned(),
            });
            i += 1;
        } else if token.starts_with("<+") {
            return Err(WellformednessError {
                position: i,
                kind: ErrorKind::WordExpected,
            });
        } else {
            let features = tokens
                .get(i + 1)
                .filter(|t| t.as_ref().starts_with("<+"))
                .and_then(|t| GermanFeatureSeq::parse(t.as_ref()).ok())
                .ok_or(WellformednessError {
                    position: i + 1,
                    kind: ErrorKind::TagExpected,
                })?;
            pairs.push(DecodedPair {
                tag: Tag::German(features),
                word: token.to_owned(),
            });
            i += 2;
        }
    }
    Ok(pairs)
}

/// One unit of a leniently decoded line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Pair(DecodedPair),
    /// A word without a tag, emitted as it is.
    Verbatim(String),
}

/// Repairs made while decoding leniently.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Recovery {
    /// Words with no preceding tag, emitted verbatim.
    pub orphan_words: usize,
    /// Tags with no following word, dropped.
    pub orphan_tags: usize,
}

impl Recovery {
    pub fn merge(&mut self, other: Recovery) {
        self.orphan_words += other.orphan_words;
        self.orphan_tags += other.orphan_tags;
    }
}

/// Decodes any token sequence: a word with no preceding tag is kept as
/// it is and a tag with no following word is dropped.
pub fn decode_lenient<S: AsRef<str>>(tokens: &[S], mode: Mode) -> (Vec<Decoded>, Recovery) {
    let mut out = Vec::new();
    let mut recovery = Recovery::default();
    let mut i = 0;
    match mode {
        Mode::Baseline => {
            out.extend(tokens.iter().map(|t| Decoded::Verbatim(t.as_ref().to_owned())));
        }
        Mode::Morphgen | Mode::Serialization => {
            while i < tokens.len() {
                let token = tokens[i].as_ref();
                match PositionalTag::parse(token) {
                    Ok(tag) => match tokens.get(i + 1).map(AsRef::as_ref) {
                        Some(word) if !is_czech_tag(word) => {
                            out.push(Decoded::Pair(DecodedPair {
                                tag: Tag::Czech(tag),
                                word: word.to_owned(),
                            }));
                            i += 2;
                        }
                        _ => {
                            recovery.orphan_tags += 1;
                            i += 1;
                        }
                    },
                    Err(_) => {
                        recovery.orphan_words += 1;
                        out.push(Decoded::Verbatim(token.to_owned()));
                        i += 1;
                    }
                }
            }
        }
        Mode::GermanStemmed => {
            while i < tokens.len() {
                let token = tokens[i].as_ref();
                if let Some((lexeme, tag)) = parse_bare_token(token) {
                    out.push(Decoded::Pair(DecodedPair {
                        tag: Tag::German(tag),
                        word: lexeme.to_owned(),
                    }));
                    i += 1;
                } else if token.starts_with("<+") {
                    recovery.orphan_tags += 1;
                    i += 1;
                } else {
                    let features = tokens
                        .get(i + 1)
                        .filter(|t| t.as_ref().starts_with("<+"))
                        .and_then(|t| GermanFeatureSeq::parse(t.as_ref()).ok());
                    match features {
                        Some(f) => {
                            out.push(Decoded::Pair(DecodedPair {
                                tag: Tag::German(f),
                                word: token.to_owned(),
                            }));
                            i += 2;
                        }
                        None => {
                            recovery.orphan_words += 1;
                            out.push(Decoded::Verbatim(token.to_owned()));
                            i += 1;
                        }
                    }
                }
            }
        }
    }
    (out, recovery)
}

/// Interleaves source-side tags with their words: `tag word tag word ...`.
pub fn tag_source<S: AsRef<str>, T: AsRef<str>>(words: &[S], tags: &[T]) -> Result<Vec<String>, LengthMismatch> {
    if words.len() != tags.len() {
        return Err(LengthMismatch {
            words: words.len(),
            tags: tags.len(),
        });
    }
    Ok(tags
        .iter()
        .zip(words)
        .flat_map(|(t, w)| [t.as_ref().to_owned(), w.as_ref().to_owned()])
        .collect())
}
