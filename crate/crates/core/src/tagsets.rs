//! Czech positional tags and German stem + feature analyses.
//!
//! Both kinds of tag travel through the pipeline as plain whitespace-free
//! text tokens. Every type here parses from and formats back to exactly the
//! text it was read from.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Number of character positions in a Czech positional tag.
pub const CZECH_TAG_LEN: usize = 15;

/// Character used for "no value" in a positional tag slot.
pub const UNSET: char = '-';

/// Double-pipe boundary between the stem side and the feature side.
pub const BOUNDARY: &str = "||";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("malformed positional tag {raw:?}: {reason}")]
    MalformedTag { raw: String, reason: String },
    #[error("malformed analysis {raw:?}: {reason}")]
    MalformedAnalysis { raw: String, reason: String },
    #[error("malformed parse tag {raw:?}: {reason}")]
    MalformedContext { raw: String, reason: String },
    #[error("malformed tag alphabet: {0}")]
    MalformedAlphabet(String),
}

fn malformed_tag(raw: &str, reason: impl Into<String>) -> TagError {
    TagError::MalformedTag {
        raw: raw.to_owned(),
        reason: reason.into(),
    }
}

fn malformed_analysis(raw: &str, reason: impl Into<String>) -> TagError {
    TagError::MalformedAnalysis {
        raw: raw.to_owned(),
        reason: reason.into(),
    }
}

/// Named positions of the Czech positional tag, in tag order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Pos,
    SubPos,
    Gender,
    Number,
    Case,
    PossGender,
    PossNumber,
    Person,
    Tense,
    Grade,
    Negation,
    Voice,
    Reserve1,
    Reserve2,
    Var,
}

impl Slot {
    pub const ALL: [Slot; CZECH_TAG_LEN] = [
        Slot::Pos,
        Slot::SubPos,
        Slot::Gender,
        Slot::Number,
        Slot::Case,
        Slot::PossGender,
        Slot::PossNumber,
        Slot::Person,
        Slot::Tense,
        Slot::Grade,
        Slot::Negation,
        Slot::Voice,
        Slot::Reserve1,
        Slot::Reserve2,
        Slot::Var,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Slot::Pos => "pos",
            Slot::SubPos => "subpos",
            Slot::Gender => "gender",
            Slot::Number => "number",
            Slot::Case => "case",
            Slot::PossGender => "possgender",
            Slot::PossNumber => "possnumber",
            Slot::Person => "person",
            Slot::Tense => "tense",
            Slot::Grade => "grade",
            Slot::Negation => "negation",
            Slot::Voice => "voice",
            Slot::Reserve1 => "reserve1",
            Slot::Reserve2 => "reserve2",
            Slot::Var => "var",
        }
    }
}

fn permitted_tag_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == ':' || c == UNSET
}

/// A 15-position Czech morphological tag such as `AAIP7----2A----`.
///
/// Slots are stored as ASCII bytes; the formatted tag is the raw text.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionalTag {
    slots: [u8; CZECH_TAG_LEN],
}

impl PositionalTag {
    /// Parses a tag, checking only its length and character class.
    pub fn parse(raw: &str) -> Result<Self, TagError> {
        let count = raw.chars().count();
        if count != CZECH_TAG_LEN {
            return Err(malformed_tag(
                raw,
                format!("expected {CZECH_TAG_LEN} characters, found {count}"),
            ));
        }
        if let Some(c) = raw.chars().find(|&c| !permitted_tag_char(c)) {
            return Err(malformed_tag(raw, format!("illegal character {c:?}")));
        }
        let mut slots = [0u8; CZECH_TAG_LEN];
        slots.copy_from_slice(raw.as_bytes());
        Ok(PositionalTag { slots })
    }

    /// Parses a tag and additionally checks every position against `alphabet`.
    pub fn parse_strict(raw: &str, alphabet: &TagAlphabet) -> Result<Self, TagError> {
        let tag = Self::parse(raw)?;
        for slot in Slot::ALL {
            let c = tag.char_at(slot);
            if !alphabet.allows(slot, c) {
                return Err(malformed_tag(
                    raw,
                    format!("value {c:?} not permitted in slot {}", slot.name()),
                ));
            }
        }
        Ok(tag)
    }

    pub fn char_at(&self, slot: Slot) -> char {
        self.slots[slot.index()] as char
    }

    /// The slot value, or `None` when the slot is unset.
    pub fn get(&self, slot: Slot) -> Option<char> {
        Some(self.char_at(slot)).filter(|&c| c != UNSET)
    }

    pub fn pos(&self) -> Option<char> {
        self.get(Slot::Pos)
    }

    pub fn subpos(&self) -> Option<char> {
        self.get(Slot::SubPos)
    }

    pub fn gender(&self) -> Option<char> {
        self.get(Slot::Gender)
    }

    pub fn number(&self) -> Option<char> {
        self.get(Slot::Number)
    }

    pub fn case(&self) -> Option<char> {
        self.get(Slot::Case)
    }

    pub fn grade(&self) -> Option<char> {
        self.get(Slot::Grade)
    }

    pub fn negation(&self) -> Option<char> {
        self.get(Slot::Negation)
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.slots).expect("positional tag is ASCII")
    }

    /// Slot-wise compatibility where `-` in `pattern` matches anything.
    pub fn matches_pattern(&self, pattern: &PositionalTag) -> bool {
        self.slots
            .iter()
            .zip(pattern.slots.iter())
            .all(|(&v, &p)| p == UNSET as u8 || v == p)
    }
}

impl fmt::Display for PositionalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for PositionalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PositionalTag({})", self.as_str())
    }
}

impl FromStr for PositionalTag {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Per-position value alphabets for strict tag validation.
///
/// The text form has one line per slot, in tag order; each line lists the
/// characters permitted in that slot. `-` is always permitted. Blank lines
/// and `#` comments are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagAlphabet {
    allowed: Vec<Vec<char>>,
}

impl TagAlphabet {
    pub fn parse(text: &str) -> Result<Self, TagError> {
        let allowed: Vec<Vec<char>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.chars().filter(|c| !c.is_whitespace()).collect())
            .collect();
        if allowed.len() != CZECH_TAG_LEN {
            return Err(TagError::MalformedAlphabet(format!(
                "expected {CZECH_TAG_LEN} slot lines, found {}",
                allowed.len()
            )));
        }
        if let Some(c) = allowed.iter().flatten().find(|&&c| !permitted_tag_char(c)) {
            return Err(TagError::MalformedAlphabet(format!("illegal character {c:?}")));
        }
        Ok(TagAlphabet { allowed })
    }

    pub fn allows(&self, slot: Slot, value: char) -> bool {
        value == UNSET || self.allowed[slot.index()].contains(&value)
    }
}

macro_rules! feature_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            pub fn from_value(value: &str) -> Option<Self> {
                match value {
                    $($text => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

feature_enum!(Gender { Fem => "Fem", Masc => "Masc", Neut => "Neut", NoGend => "NoGend" });
feature_enum!(Case { Nom => "Nom", Acc => "Acc", Dat => "Dat", Gen => "Gen" });
feature_enum!(Number { Sg => "Sg", Pl => "Pl" });
feature_enum!(
    /// Adjective inflection class; `NA` stands for "same form in both".
    Strength { St => "St", Wk => "Wk", NA => "NA" }
);
feature_enum!(
    /// Adjective degree, which may appear right after the `<+ADJ>` head.
    Degree { Pos => "Pos", Comp => "Comp", Sup => "Sup" }
);
feature_enum!(Person { First => "1", Second => "2", Third => "3" });
feature_enum!(Tense { Pres => "Pres", Past => "Past" });
feature_enum!(Mood { Ind => "Ind", Subj => "Subj" });

/// Which shape a [`GermanFeatureSeq`] has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Nominal,
    VerbalFinite,
    Participle,
    Infinitive,
    Bare,
}

/// The inflectional part of a German analysis.
///
/// Nominal sequences read `<+HEAD>[<Degree>]<Gend><Case><Num><St/Wk/NA>`.
/// The strength slot is mandatory in the fully specified representation
/// ([`GermanFeatureSeq::parse`]); raw analyzer output may omit it
/// ([`GermanFeatureSeq::parse_analyzer`]) and [`fully_specified`] fills in
/// `<NA>`.
///
/// [`fully_specified`]: GermanFeatureSeq::fully_specified
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GermanFeatureSeq {
    Nominal {
        /// Head tag without brackets and without the `+`, e.g. `NN`, `ADJ`.
        head: String,
        degree: Option<Degree>,
        gender: Gender,
        case: Case,
        number: Number,
        strength: Option<Strength>,
    },
    VerbalFinite {
        person: Person,
        number: Number,
        tense: Tense,
        mood: Mood,
    },
    Participle,
    Infinitive,
    /// Parse tag of a non-inflected word, e.g. `KON` or `APPR-Dat`.
    Bare(String),
}

impl GermanFeatureSeq {
    /// Parses a fully specified feature sequence or a bracketed bare tag.
    pub fn parse(raw: &str) -> Result<Self, TagError> {
        Self::parse_with(raw, true)
    }

    /// Parses analyzer output, where nominal sequences may lack strength.
    pub fn parse_analyzer(raw: &str) -> Result<Self, TagError> {
        Self::parse_with(raw, false)
    }

    fn parse_with(raw: &str, require_strength: bool) -> Result<Self, TagError> {
        if raw.starts_with('[') {
            let inner = raw
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| malformed_analysis(raw, "unbalanced brackets"))?;
            if inner.is_empty() || inner.contains(['[', ']', '<', '>']) || inner.contains(char::is_whitespace) {
                return Err(malformed_analysis(raw, "bad bare tag"));
            }
            return Ok(GermanFeatureSeq::Bare(inner.to_owned()));
        }
        let values = split_angle_groups(raw).ok_or_else(|| malformed_analysis(raw, "unbalanced angle brackets"))?;
        let (head, rest) = values
            .split_first()
            .ok_or_else(|| malformed_analysis(raw, "empty feature sequence"))?;
        let head = head
            .strip_prefix('+')
            .filter(|h| !h.is_empty())
            .ok_or_else(|| malformed_analysis(raw, "feature sequence must start with a <+TAG> head"))?;

        if head == "V" {
            return match rest {
                [p] if *p == "PPast" => Ok(GermanFeatureSeq::Participle),
                [p] if *p == "Inf" => Ok(GermanFeatureSeq::Infinitive),
                [person, number, tense, mood] => Ok(GermanFeatureSeq::VerbalFinite {
                    person: feature(raw, person, Person::from_value, "person")?,
                    number: feature(raw, number, Number::from_value, "number")?,
                    tense: feature(raw, tense, Tense::from_value, "tense")?,
                    mood: feature(raw, mood, Mood::from_value, "mood")?,
                }),
                _ => Err(malformed_analysis(raw, "unknown verbal feature sequence shape")),
            };
        }

        let (degree, rest) = match rest.split_first() {
            Some((d, tail)) if Degree::from_value(d).is_some() => (Degree::from_value(d), tail),
            _ => (None, rest),
        };
        let (gender, case, number, strength) = match rest {
            [g, c, n, s] => (g, c, n, Some(s)),
            [g, c, n] if !require_strength => (g, c, n, None),
            [_, _, _] => return Err(malformed_analysis(raw, "nominal sequence is missing the strength slot")),
            _ => return Err(malformed_analysis(raw, "unknown nominal feature sequence shape")),
        };
        Ok(GermanFeatureSeq::Nominal {
            head: head.to_owned(),
            degree,
            gender: feature(raw, gender, Gender::from_value, "gender")?,
            case: feature(raw, case, Case::from_value, "case")?,
            number: feature(raw, number, Number::from_value, "number")?,
            strength: strength
                .map(|s| feature(raw, s, Strength::from_value, "strength"))
                .transpose()?,
        })
    }

    pub fn kind(&self) -> FeatureKind {
        match self {
            GermanFeatureSeq::Nominal { .. } => FeatureKind::Nominal,
            GermanFeatureSeq::VerbalFinite { .. } => FeatureKind::VerbalFinite,
            GermanFeatureSeq::Participle => FeatureKind::Participle,
            GermanFeatureSeq::Infinitive => FeatureKind::Infinitive,
            GermanFeatureSeq::Bare(_) => FeatureKind::Bare,
        }
    }

    pub fn is_bare(&self) -> bool {
        matches!(self, GermanFeatureSeq::Bare(_))
    }

    /// Fills an omitted strength slot with `<NA>`.
    pub fn fully_specified(&self) -> GermanFeatureSeq {
        match self {
            GermanFeatureSeq::Nominal {
                head,
                degree,
                gender,
                case,
                number,
                strength: None,
            } => GermanFeatureSeq::Nominal {
                head: head.clone(),
                degree: *degree,
                gender: *gender,
                case: *case,
                number: *number,
                strength: Some(Strength::NA),
            },
            other => other.clone(),
        }
    }
}

fn feature<T>(raw: &str, value: &str, parse: fn(&str) -> Option<T>, what: &str) -> Result<T, TagError> {
    parse(value).ok_or_else(|| malformed_analysis(raw, format!("unknown {what} value <{value}>")))
}

/// Splits `<a><b><c>` into `["a", "b", "c"]`; `None` if the text is not
/// entirely made of balanced, non-nested groups.
fn split_angle_groups(raw: &str) -> Option<Vec<&str>> {
    let mut out = Vec::new();
    let mut rest = raw;
    while !rest.is_empty() {
        let inner = rest.strip_prefix('<')?;
        let close = inner.find('>')?;
        let value = &inner[..close];
        if value.is_empty() || value.contains('<') {
            return None;
        }
        out.push(value);
        rest = &inner[close + 1..];
    }
    Some(out)
}

impl fmt::Display for GermanFeatureSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermanFeatureSeq::Nominal {
                head,
                degree,
                gender,
                case,
                number,
                strength,
            } => {
                write!(f, "<+{head}>")?;
                if let Some(d) = degree {
                    write!(f, "<{d}>")?;
                }
                write!(f, "<{gender}><{case}><{number}>")?;
                if let Some(s) = strength {
                    write!(f, "<{s}>")?;
                }
                Ok(())
            }
            GermanFeatureSeq::VerbalFinite {
                person,
                number,
                tense,
                mood,
            } => write!(f, "<+V><{person}><{number}><{tense}><{mood}>"),
            GermanFeatureSeq::Participle => f.write_str("<+V><PPast>"),
            GermanFeatureSeq::Infinitive => f.write_str("<+V><Inf>"),
            GermanFeatureSeq::Bare(tag) => write!(f, "[{tag}]"),
        }
    }
}

impl FromStr for GermanFeatureSeq {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// One lexeme of a stem together with any markup that follows it, e.g.
/// `Meer<NN>` or `dicht<Pos>`. Markup is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StemSegment {
    pub lexeme: String,
    /// Concatenated `<...>` groups directly after the lexeme, if any.
    pub markup: Option<String>,
}

impl StemSegment {
    pub fn new(lexeme: impl Into<String>, markup: Option<&str>) -> Self {
        StemSegment {
            lexeme: lexeme.into(),
            markup: markup.map(str::to_owned),
        }
    }
}

impl fmt::Display for StemSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexeme)?;
        if let Some(m) = &self.markup {
            f.write_str(m)?;
        }
        Ok(())
    }
}

/// Splits a stem such as `Hydrogen<NN>Sulfid<NN>reich<Pos>` into segments.
pub fn parse_stem(raw: &str) -> Result<Vec<StemSegment>, TagError> {
    let mut segments = Vec::new();
    let mut rest = raw;
    while !rest.is_empty() {
        let lex_end = rest.find('<').unwrap_or(rest.len());
        let lexeme = &rest[..lex_end];
        if lexeme.is_empty() {
            return Err(malformed_analysis(raw, "markup without a preceding lexeme"));
        }
        if lexeme.contains(['>', '[', ']', '|']) || lexeme.contains(char::is_whitespace) {
            return Err(malformed_analysis(
                raw,
                format!("illegal characters in lexeme {lexeme:?}"),
            ));
        }
        rest = &rest[lex_end..];
        let mut markup_len = 0;
        while rest[markup_len..].starts_with('<') {
            let close = rest[markup_len..]
                .find('>')
                .ok_or_else(|| malformed_analysis(raw, "unbalanced angle brackets"))?;
            let inner = &rest[markup_len + 1..markup_len + close];
            if inner.is_empty() || inner.contains('<') {
                return Err(malformed_analysis(raw, "unbalanced angle brackets"));
            }
            markup_len += close + 1;
        }
        let markup = (markup_len > 0).then(|| rest[..markup_len].to_owned());
        segments.push(StemSegment {
            lexeme: lexeme.to_owned(),
            markup,
        });
        rest = &rest[markup_len..];
    }
    if segments.is_empty() {
        return Err(malformed_analysis(raw, "empty stem"));
    }
    Ok(segments)
}

pub fn format_stem(segments: &[StemSegment]) -> String {
    segments.iter().map(ToString::to_string).collect()
}

/// How the stem side was separated from the features in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// `stem||<+...>`, the fully specified representation.
    DoublePipe,
    /// `stem<+...>`, as printed by the analyzer.
    Implicit,
    /// `word[TAG]`, non-inflected.
    Bracket,
}

/// A German word analysis: stem segments plus a feature sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GermanAnalysis {
    pub stem: Vec<StemSegment>,
    pub features: GermanFeatureSeq,
    pub inflected: bool,
    pub boundary: Boundary,
}

impl GermanAnalysis {
    /// Parses `stem||features`, analyzer-style `stem<+...>`, or `word[TAG]`.
    pub fn parse(raw: &str) -> Result<Self, TagError> {
        if let Some((stem, features)) = raw.split_once(BOUNDARY) {
            let stem = parse_stem(stem)?;
            let features = GermanFeatureSeq::parse(features)?;
            if features.is_bare() {
                return Err(malformed_analysis(raw, "bare tag after the || boundary"));
            }
            return Ok(GermanAnalysis {
                stem,
                features,
                inflected: true,
                boundary: Boundary::DoublePipe,
            });
        }
        if raw.ends_with(']') {
            let (lexeme, tag) = split_bare_token(raw).ok_or_else(|| malformed_analysis(raw, "unbalanced brackets"))?;
            let features = GermanFeatureSeq::parse(tag)?;
            return Ok(GermanAnalysis {
                stem: vec![StemSegment::new(lexeme, None)],
                features,
                inflected: false,
                boundary: Boundary::Bracket,
            });
        }
        if let Some(at) = raw.find("<+") {
            let stem = parse_stem(&raw[..at])?;
            let features = GermanFeatureSeq::parse_analyzer(&raw[at..])?;
            return Ok(GermanAnalysis {
                stem,
                features,
                inflected: true,
                boundary: Boundary::Implicit,
            });
        }
        if raw.contains(['[', ']']) {
            return Err(malformed_analysis(raw, "unbalanced brackets"));
        }
        Err(malformed_analysis(raw, "no feature sequence found"))
    }

    pub fn stem_text(&self) -> String {
        format_stem(&self.stem)
    }

    pub fn is_compound(&self) -> bool {
        self.stem.len() > 1
    }
}

impl fmt::Display for GermanAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.stem {
            write!(f, "{seg}")?;
        }
        match self.boundary {
            Boundary::DoublePipe => write!(f, "{BOUNDARY}{}", self.features),
            Boundary::Implicit | Boundary::Bracket => write!(f, "{}", self.features),
        }
    }
}

impl FromStr for GermanAnalysis {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Splits a bare token `und[KON]` into `("und", "[KON]")`.
pub fn split_bare_token(token: &str) -> Option<(&str, &str)> {
    if !token.ends_with(']') {
        return None;
    }
    let open = token.rfind('[')?;
    let (lexeme, tag) = token.split_at(open);
    if lexeme.is_empty() || tag.len() < 3 || lexeme.contains(char::is_whitespace) {
        return None;
    }
    Some((lexeme, tag))
}

/// Formats either kind of tag or analysis back to its text form.
pub fn format_analysis<T: fmt::Display>(value: &T) -> String {
    value.to_string()
}

/// Contextual parse tag such as `ADJA-Dat.Sg.Fem`, `VVFIN-Sg` or `KON`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseContext {
    pub raw: String,
    pub pos: String,
    pub case: Option<Case>,
    pub number: Option<Number>,
    pub gender: Option<Gender>,
}

impl ParseContext {
    pub fn parse(raw: &str) -> Result<Self, TagError> {
        let err = |reason: String| TagError::MalformedContext {
            raw: raw.to_owned(),
            reason,
        };
        if raw.is_empty() || raw.contains(char::is_whitespace) {
            return Err(err("empty or contains whitespace".into()));
        }
        let (pos, values) = match raw.split_once('-') {
            Some((pos, values)) => (pos, Some(values)),
            None => (raw, None),
        };
        if pos.is_empty() {
            return Err(err("missing part of speech".into()));
        }
        let mut ctx = ParseContext {
            raw: raw.to_owned(),
            pos: pos.to_owned(),
            case: None,
            number: None,
            gender: None,
        };
        for value in values.into_iter().flat_map(|v| v.split('.')) {
            if let Some(c) = Case::from_value(value) {
                ctx.case = Some(c);
            } else if let Some(n) = Number::from_value(value) {
                ctx.number = Some(n);
            } else if let Some(g) = Gender::from_value(value) {
                ctx.gender = Some(g);
            } else {
                return Err(err(format!("unknown feature value {value:?}")));
            }
        }
        Ok(ctx)
    }

    /// The bracketed tag used for this word if it is not inflected:
    /// punctuation collapses to `$`, prepositions keep their case
    /// (`APPR-Dat`), and everything else keeps only its part of speech.
    pub fn bare_tag(&self) -> String {
        if self.pos.starts_with('$') {
            "$".to_owned()
        } else if self.number.is_none() && self.gender.is_none() {
            self.raw.clone()
        } else {
            self.pos.clone()
        }
    }
}
