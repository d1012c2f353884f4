//! Paradigm lexicon: analysis (surface to candidates), disambiguation by
//! parse tag, and deterministic generation (lemma + tag to surface).
//!
//! The lexicon file is UTF-8 TSV with columns `lemma`, `tag`, `surface`.
//! Lines starting with `#` are comments. Rows whose first column is `@mod`
//! carry a compound modifier and its in-compound form:
//!
//! ```text
//! pizza	NNFS2-----A----	pizzy
//! Boden	<+NN><Masc><Dat><Sg><NA>	Boden
//! @mod	Meer	Meeres
//! ```
//!
//! German lemmas are keyed by their concatenated stem, so `Meer<NN>Boden`
//! and `Meeresboden` generate the same surface.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::compounds::concatenate_stem;
use crate::tagsets::{parse_stem, FeatureKind, GermanFeatureSeq, ParseContext, PositionalTag, StemSegment, TagError};

pub const MODIFIER_MARKER: &str = "@mod";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphError {
    #[error("line {line}: {reason}")]
    LexiconParse { line: usize, reason: String },
    #[error("line {line}: {lemma} {tag} already generates {existing:?}, cannot also generate {surface:?}")]
    LexiconConflict {
        line: usize,
        lemma: String,
        tag: String,
        existing: String,
        surface: String,
    },
    #[error("no candidate analysis is compatible with {context:?}")]
    NoCompatibleAnalysis { context: String },
    #[error("nothing to disambiguate")]
    NoCandidates,
    #[error(transparent)]
    Tag(#[from] TagError),
}

/// A Czech positional tag or a German feature sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tag {
    Czech(PositionalTag),
    German(GermanFeatureSeq),
}

impl Tag {
    /// Parses a tag the way the lexicon stores it: German sequences may
    /// omit the strength slot.
    pub fn parse_lexicon(raw: &str) -> Result<Tag, TagError> {
        if raw.starts_with('<') || raw.starts_with('[') {
            GermanFeatureSeq::parse_analyzer(raw).map(Tag::German)
        } else {
            PositionalTag::parse(raw).map(Tag::Czech)
        }
    }

    /// Parses a tag as it appears in the training representation.
    pub fn parse(raw: &str) -> Result<Tag, TagError> {
        if raw.starts_with('<') || raw.starts_with('[') {
            GermanFeatureSeq::parse(raw).map(Tag::German)
        } else {
            PositionalTag::parse(raw).map(Tag::Czech)
        }
    }

    /// The form used as generation key: German strength filled in.
    pub fn fully_specified(&self) -> Tag {
        match self {
            Tag::Czech(t) => Tag::Czech(*t),
            Tag::German(f) => Tag::German(f.fully_specified()),
        }
    }

    pub fn is_german(&self) -> bool {
        matches!(self, Tag::German(_))
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Czech(t) => t.fmt(f),
            Tag::German(g) => g.fmt(f),
        }
    }
}

/// A lemma and a tag, optionally with the surface form it was read from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphAnalysis {
    pub lemma: String,
    pub tag: Tag,
    pub surface: Option<String>,
}

impl MorphAnalysis {
    pub fn new(lemma: impl Into<String>, tag: Tag) -> Self {
        MorphAnalysis {
            lemma: lemma.into(),
            tag,
            surface: None,
        }
    }

    pub fn with_surface(mut self, surface: impl Into<String>) -> Self {
        self.surface = Some(surface.into());
        self
    }
}

impl fmt::Display for MorphAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Tag::German(g) => write!(f, "{}{}", self.lemma, g),
            Tag::Czech(t) => write!(f, "{} {}", self.lemma, t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    lemma: String,
    tag: Tag,
    tag_text: String,
    surface: String,
}

/// Bidirectional lemma+tag / surface store. Immutable once loaded.
#[derive(Debug, Clone, Default)]
pub struct ParadigmLexicon {
    entries: Vec<Entry>,
    forward: HashMap<(String, String), usize>,
    inverse: HashMap<String, Vec<usize>>,
    lemmas: HashSet<String>,
    modifiers: BTreeMap<String, String>,
}

impl ParadigmLexicon {
    pub fn parse(document: &str) -> Result<Self, MorphError> {
        let mut lex = ParadigmLexicon::default();
        let mut rows = Vec::new();
        for (idx, line) in document.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols.iter().any(|c| c.is_empty()) {
                return Err(MorphError::LexiconParse {
                    line: line_no,
                    reason: format!("expected 3 nonempty tab-separated columns, found {}", cols.len()),
                });
            }
            if cols[0] == MODIFIER_MARKER {
                lex.modifiers.insert(cols[1].to_owned(), cols[2].to_owned());
                continue;
            }
            let tag = Tag::parse_lexicon(cols[1]).map_err(|e| MorphError::LexiconParse {
                line: line_no,
                reason: e.to_string(),
            })?;
            rows.push((line_no, cols[0].to_owned(), tag, cols[1].to_owned(), cols[2].to_owned()));
        }
        for (line_no, lemma, tag, tag_text, surface) in rows {
            let key = lex.lemma_key(&lemma, &tag).map_err(|e| MorphError::LexiconParse {
                line: line_no,
                reason: e.to_string(),
            })?;
            let tag_key = tag.fully_specified().to_string();
            let forward_key = (key.clone(), tag_key.clone());
            if let Some(&existing) = lex.forward.get(&forward_key) {
                let existing = &lex.entries[existing];
                if existing.surface == surface {
                    continue;
                }
                return Err(MorphError::LexiconConflict {
                    line: line_no,
                    lemma,
                    tag: tag_key,
                    existing: existing.surface.clone(),
                    surface,
                });
            }
            let index = lex.entries.len();
            lex.forward.insert(forward_key, index);
            lex.inverse.entry(surface.clone()).or_default().push(index);
            lex.lemmas.insert(key);
            lex.entries.push(Entry {
                lemma,
                tag,
                tag_text,
                surface,
            });
        }
        let entries = &lex.entries;
        for list in lex.inverse.values_mut() {
            list.sort_by(|&a, &b| {
                let (a, b) = (&entries[a], &entries[b]);
                (&a.tag_text, &a.lemma).cmp(&(&b.tag_text, &b.lemma))
            });
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(lemma, tag, surface)` for every entry, in file order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &Tag, &str)> {
        self.entries
            .iter()
            .map(|e| (e.lemma.as_str(), &e.tag, e.surface.as_str()))
    }

    pub fn modifier_form(&self, lemma: &str) -> Option<&str> {
        self.modifiers.get(lemma).map(String::as_str)
    }

    pub fn modifiers(&self) -> impl Iterator<Item = (&str, &str)> {
        self.modifiers.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Generation key of a lemma: compounds are concatenated through the
    /// modifier table, Czech lemmas are used as they are.
    fn lemma_key(&self, lemma: &str, tag: &Tag) -> Result<String, TagError> {
        if !tag.is_german() {
            return Ok(lemma.to_owned());
        }
        let segments = parse_stem(lemma)?;
        Ok(self.merged_stem(&segments).to_string())
    }

    fn merged_stem(&self, segments: &[StemSegment]) -> StemSegment {
        let (head, modifiers) = segments.split_last().expect("parse_stem never returns empty");
        let modifiers: Vec<&str> = modifiers.iter().map(|s| s.lexeme.as_str()).collect();
        concatenate_stem(&modifiers, head, |m| self.modifier_form(m)).0
    }

    /// Every analysis of `surface`, in canonical order (tag text, then lemma).
    pub fn analyze(&self, surface: &str) -> Vec<MorphAnalysis> {
        self.inverse
            .get(surface)
            .map(|list| {
                list.iter()
                    .map(|&i| {
                        let e = &self.entries[i];
                        MorphAnalysis::new(e.lemma.clone(), e.tag.clone()).with_surface(surface)
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn generate(&self, lemma: &str, tag: &Tag) -> Result<String, GenerationFailure> {
        let key = match self.lemma_key(lemma, tag) {
            Ok(key) => key,
            Err(_) => return Err(GenerationFailure::UnknownLemma),
        };
        let forward_key = (key, tag.fully_specified().to_string());
        match self.forward.get(&forward_key) {
            Some(&i) => Ok(self.entries[i].surface.clone()),
            None if self.lemmas.contains(&forward_key.0) => Err(GenerationFailure::IncompatibleTag),
            None => Err(GenerationFailure::UnknownLemma),
        }
    }

    /// Like [`generate`](Self::generate), but never fails: on failure the
    /// lemma itself is returned and the event is recorded in `report`.
    pub fn generate_with_fallback(&self, lemma: &str, tag: &Tag, report: &mut GenerationReport) -> String {
        report.total += 1;
        match self.generate(lemma, tag) {
            Ok(surface) => surface,
            Err(reason) => {
                report.fallbacks += 1;
                report.fallback_items.push(FallbackItem {
                    lemma: lemma.to_owned(),
                    tag: tag.to_string(),
                    reason,
                });
                self.fallback_surface(lemma, tag)
            }
        }
    }

    /// The text emitted for a lemma the generator cannot inflect. German
    /// stems lose their markup and compounds are joined.
    pub fn fallback_surface(&self, lemma: &str, tag: &Tag) -> String {
        if tag.is_german() {
            if let Ok(segments) = parse_stem(lemma) {
                return self.merged_stem(&segments).lexeme;
            }
        }
        lemma.to_owned()
    }
}

/// Why generation did not produce a surface form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
pub enum GenerationFailure {
    #[error("unknown-lemma")]
    UnknownLemma,
    #[error("incompatible-tag")]
    IncompatibleTag,
}

impl GenerationFailure {
    pub fn as_str(self) -> &'static str {
        match self {
            GenerationFailure::UnknownLemma => "unknown-lemma",
            GenerationFailure::IncompatibleTag => "incompatible-tag",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FallbackItem {
    pub lemma: String,
    pub tag: String,
    pub reason: GenerationFailure,
}

/// Counts of generation calls and of lemma fallbacks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerationReport {
    pub total: usize,
    pub fallbacks: usize,
    pub fallback_items: Vec<FallbackItem>,
}

impl GenerationReport {
    pub fn merge(&mut self, other: GenerationReport) {
        self.total += other.total;
        self.fallbacks += other.fallbacks;
        self.fallback_items.extend(other.fallback_items);
    }

    pub fn count(&self, reason: GenerationFailure) -> usize {
        self.fallback_items.iter().filter(|i| i.reason == reason).count()
    }

    /// Structured text form: counts, then one tab-separated row per fallback.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "total\t{}\nfallbacks\t{}\nunknown-lemma\t{}\nincompatible-tag\t{}\n",
            self.total,
            self.fallbacks,
            self.count(GenerationFailure::UnknownLemma),
            self.count(GenerationFailure::IncompatibleTag)
        );
        for item in &self.fallback_items {
            out.push_str(&format!(
                "fallback\t{}\t{}\t{}\n",
                item.lemma,
                item.tag,
                item.reason.as_str()
            ));
        }
        out
    }
}

/// Which head tag and verb form a STTS part of speech corresponds to.
/// `None` means the part of speech is not inflected.
pub fn inflection_class(pos: &str) -> Option<(&'static str, FeatureKind)> {
    let class = match pos {
        "NN" => ("NN", FeatureKind::Nominal),
        "NE" => ("NPROP", FeatureKind::Nominal),
        "ADJA" | "ADJD" => ("ADJ", FeatureKind::Nominal),
        "ART" => ("ART", FeatureKind::Nominal),
        "PPOSAT" => ("POSS", FeatureKind::Nominal),
        "PDAT" => ("DEM", FeatureKind::Nominal),
        "PIAT" | "PIDAT" => ("INDEF", FeatureKind::Nominal),
        "VVFIN" | "VAFIN" | "VMFIN" => ("V", FeatureKind::VerbalFinite),
        "VVPP" | "VAPP" | "VMPP" => ("V", FeatureKind::Participle),
        "VVINF" | "VAINF" | "VMINF" => ("V", FeatureKind::Infinitive),
        _ => return None,
    };
    Some(class)
}

fn compatible_german(features: &GermanFeatureSeq, ctx: &ParseContext) -> bool {
    let Some((head_tag, kind)) = inflection_class(&ctx.pos) else {
        return false;
    };
    if features.kind() != kind {
        return false;
    }
    match features {
        GermanFeatureSeq::Nominal {
            head,
            gender,
            case,
            number,
            ..
        } => {
            head == head_tag
                && ctx.case.is_none_or(|c| c == *case)
                && ctx.number.is_none_or(|n| n == *number)
                && ctx
                    .gender
                    .is_none_or(|g| *gender == crate::tagsets::Gender::NoGend || g == *gender)
        }
        GermanFeatureSeq::VerbalFinite { number, .. } => ctx.number.is_none_or(|n| n == *number),
        GermanFeatureSeq::Participle | GermanFeatureSeq::Infinitive => true,
        GermanFeatureSeq::Bare(_) => false,
    }
}

/// Is `analysis` compatible with `context`?
///
/// For German candidates the context is a parse tag like `ADJA-Dat.Sg.Fem`;
/// slots the context does not mention are unconstrained, `NoGend` matches any
/// gender, and strength is never constrained. For Czech candidates the
/// context is a positional tag where `-` matches anything.
pub fn is_compatible(analysis: &MorphAnalysis, context: &str) -> Result<bool, TagError> {
    match &analysis.tag {
        Tag::German(features) => {
            let ctx = ParseContext::parse(context)?;
            Ok(compatible_german(features, &ctx))
        }
        Tag::Czech(tag) => {
            let pattern = PositionalTag::parse(context)?;
            Ok(tag.matches_pattern(&pattern))
        }
    }
}

/// Picks the first candidate, in the given order, compatible with `context`.
pub fn disambiguate(candidates: &[MorphAnalysis], context: &str) -> Result<MorphAnalysis, MorphError> {
    if candidates.is_empty() {
        return Err(MorphError::NoCandidates);
    }
    for candidate in candidates {
        if is_compatible(candidate, context)? {
            return Ok(candidate.clone());
        }
    }
    Err(MorphError::NoCompatibleAnalysis {
        context: context.to_owned(),
    })
}
