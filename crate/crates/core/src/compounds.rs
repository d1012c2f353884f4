//! Splitting German compound analyses into `Meer §§<NN>§§ Boden` token runs
//! and gluing them back together with linking elements.
//!
//! Linking elements and umlauted modifier forms are not derived by rule.
//! They come from the lexicon's modifier table, which maps a modifier lemma
//! to the form it takes inside a compound (`Meer` to `Meeres`, `Haus` to
//! `Häuser`).

use crate::interleave::is_feature_token;
use crate::morphlex::ParadigmLexicon;
use crate::tagsets::{parse_stem, Boundary, GermanAnalysis, GermanFeatureSeq, StemSegment};

/// Delimiter around the markup of a compound separator token.
pub const SEPARATOR_DELIM: &str = "§§";

pub fn separator_token(markup: &str) -> String {
    format!("{SEPARATOR_DELIM}{markup}{SEPARATOR_DELIM}")
}

/// Returns the markup of a separator token such as `§§<NN>§§`.
pub fn parse_separator(token: &str) -> Option<&str> {
    let inner = token.strip_prefix(SEPARATOR_DELIM)?.strip_suffix(SEPARATOR_DELIM)?;
    let ok = inner.len() > 2
        && inner.starts_with('<')
        && inner.ends_with('>')
        && !inner[1..inner.len() - 1].contains(['<', '>']);
    ok.then_some(inner)
}

pub fn is_separator(token: &str) -> bool {
    parse_separator(token).is_some()
}

/// A compound broken into modifier lexemes, separators and a head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompoundSplit {
    /// `(lexeme, markup)` for every modifier, in order.
    pub modifiers: Vec<(String, String)>,
    pub head: StemSegment,
    pub features: GermanFeatureSeq,
}

impl CompoundSplit {
    pub fn tokens(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.modifiers.len() * 2 + 2);
        for (lexeme, markup) in &self.modifiers {
            out.push(lexeme.clone());
            out.push(separator_token(markup));
        }
        out.push(self.head.to_string());
        out.push(self.features.to_string());
        out
    }

    /// Reads `m §§<T>§§ ... head features` back into a split.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Option<CompoundSplit> {
        let (features, body) = tokens.split_last()?;
        let features = GermanFeatureSeq::parse(features.as_ref()).ok()?;
        if features.is_bare() || body.len() < 3 || body.len() % 2 == 0 {
            return None;
        }
        let (head, pairs) = body.split_last()?;
        let mut modifiers = Vec::new();
        for pair in pairs.chunks(2) {
            let lexeme = pair[0].as_ref();
            let markup = parse_separator(pair[1].as_ref())?;
            if is_separator(lexeme) || lexeme.contains('<') {
                return None;
            }
            modifiers.push((lexeme.to_owned(), markup.to_owned()));
        }
        let mut head_segments = parse_stem(head.as_ref()).ok()?;
        if head_segments.len() != 1 {
            return None;
        }
        Some(CompoundSplit {
            modifiers,
            head: head_segments.remove(0),
            features,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitResult {
    Split(CompoundSplit),
    Unchanged(GermanAnalysis),
}

pub fn split_compound(analysis: &GermanAnalysis) -> SplitResult {
    if !analysis.inflected || analysis.stem.len() < 2 {
        return SplitResult::Unchanged(analysis.clone());
    }
    let (head, modifiers) = analysis.stem.split_last().expect("nonempty stem");
    let modifiers: Option<Vec<_>> = modifiers
        .iter()
        .map(|seg| seg.markup.clone().map(|m| (seg.lexeme.clone(), m)))
        .collect();
    match modifiers {
        Some(modifiers) => SplitResult::Split(CompoundSplit {
            modifiers,
            head: head.clone(),
            features: analysis.features.clone(),
        }),
        None => SplitResult::Unchanged(analysis.clone()),
    }
}

/// A merged compound plus the modifiers that were missing from the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    pub analysis: GermanAnalysis,
    pub unknown_modifiers: Vec<String>,
}

pub fn merge_compound(split: &CompoundSplit, lex: &ParadigmLexicon) -> MergeOutcome {
    let modifiers: Vec<&str> = split.modifiers.iter().map(|(l, _)| l.as_str()).collect();
    let (head, unknown_modifiers) = concatenate_stem(&modifiers, &split.head, |m| lex.modifier_form(m));
    MergeOutcome {
        analysis: GermanAnalysis {
            stem: vec![head],
            features: split.features.clone(),
            inflected: true,
            boundary: Boundary::DoublePipe,
        },
        unknown_modifiers,
    }
}

/// Concatenates modifier forms and the head into one stem segment.
///
/// Each modifier is replaced by its in-compound form when the table has one
/// and used verbatim otherwise. Non-initial parts lose their capital letter,
/// and the first letter of the result takes the case of the head's first
/// letter (`längs` + `Achse` gives `Längsachse`). The head's markup stays.
pub fn concatenate_stem<'a, F>(modifiers: &[&str], head: &StemSegment, form_of: F) -> (StemSegment, Vec<String>)
where
    F: Fn(&str) -> Option<&'a str>,
{
    let mut unknown = Vec::new();
    let mut text = String::new();
    for (i, modifier) in modifiers.iter().enumerate() {
        let form = match form_of(modifier) {
            Some(form) => form,
            None => {
                unknown.push((*modifier).to_owned());
                modifier
            }
        };
        if i == 0 {
            text.push_str(form);
        } else {
            push_lowered_initial(&mut text, form);
        }
    }
    if modifiers.is_empty() {
        return (head.clone(), unknown);
    }
    push_lowered_initial(&mut text, &head.lexeme);
    let head_upper = head.lexeme.chars().next().is_some_and(char::is_uppercase);
    let mut chars = text.chars();
    let lexeme = match chars.next() {
        Some(first) if head_upper => first.to_uppercase().chain(chars).collect(),
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    };
    (
        StemSegment {
            lexeme,
            markup: head.markup.clone(),
        },
        unknown,
    )
}

fn push_lowered_initial(out: &mut String, part: &str) {
    let mut chars = part.chars();
    if let Some(first) = chars.next() {
        out.extend(first.to_lowercase());
        out.push_str(chars.as_str());
    }
}

/// Counters from rewriting whole token lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeStats {
    pub merged: usize,
    pub unknown_modifiers: Vec<String>,
    /// Separator tokens that had no lexeme on one side and were dropped.
    pub stray_separators: usize,
}

/// Replaces every `stem features` pair whose stem is a compound with its
/// split tokens. Everything else is copied.
pub fn split_line<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let token = tokens[i].as_ref();
        if let Some(next) = tokens.get(i + 1).map(AsRef::as_ref) {
            if is_feature_token(next) && !is_feature_token(token) {
                let analysis = format!("{token}{}{next}", crate::tagsets::BOUNDARY);
                if let Ok(a) = GermanAnalysis::parse(&analysis) {
                    if let SplitResult::Split(split) = split_compound(&a) {
                        out.extend(split.tokens());
                        i += 2;
                        continue;
                    }
                }
            }
        }
        out.push(token.to_owned());
        i += 1;
    }
    out
}

/// Joins every `lexeme §§<T>§§ ... head` run into a single stem token.
pub fn merge_line<S: AsRef<str>>(tokens: &[S], lex: &ParadigmLexicon) -> (Vec<String>, MergeStats) {
    let mut stats = MergeStats::default();
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let token = tokens[i].as_ref();
        if is_separator(token) {
            stats.stray_separators += 1;
            i += 1;
            continue;
        }
        let mut modifiers = Vec::new();
        let mut j = i;
        // Collect `lexeme separator` pairs followed by a non-separator head.
        while tokens.get(j + 1).is_some_and(|t| is_separator(t.as_ref())) {
            match tokens.get(j + 2).map(AsRef::as_ref) {
                Some(next) if !is_separator(next) && !is_feature_token(next) => {
                    modifiers.push(tokens[j].as_ref());
                    j += 2;
                }
                _ => break,
            }
        }
        if modifiers.is_empty() {
            if tokens.get(i + 1).is_some_and(|t| is_separator(t.as_ref())) {
                // A dangling separator after this token; keep the token.
                out.push(token.to_owned());
                stats.stray_separators += 1;
                i += 2;
            } else {
                out.push(token.to_owned());
                i += 1;
            }
            continue;
        }
        let head_text = tokens[j].as_ref();
        let head = match parse_stem(head_text) {
            Ok(mut segs) if segs.len() == 1 => segs.remove(0),
            _ => StemSegment::new(head_text, None),
        };
        let (stem, unknown) = concatenate_stem(&modifiers, &head, |m| lex.modifier_form(m));
        stats.merged += 1;
        stats.unknown_modifiers.extend(unknown);
        out.push(stem.to_string());
        i = j + 1;
    }
    (out, stats)
}
