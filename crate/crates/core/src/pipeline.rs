//! Corpus preparation, the external translation backend, and
//! post-processing of translated lines back to inflected text.
//!
//! Every line-level stage runs sentence-parallel on the current rayon pool
//! and returns results in input order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bpe::{apply_bpe, learn_bpe_from_counts, revert_bpe_lenient, MergeTable};
use crate::compounds::{merge_line, split_line, MergeStats};
use crate::eval::{wellformedness, WellformednessReport};
use crate::interleave::{decode_lenient, encode, is_protected_token, tag_source, Decoded, Mode, Recovery};
use crate::morphlex::{disambiguate, inflection_class, GenerationReport, MorphAnalysis, ParadigmLexicon, Tag};
use crate::tagsets::{GermanFeatureSeq, ParseContext};

pub const CZECH_BPE_MERGES: usize = 49_500;
pub const GERMAN_BPE_MERGES: usize = 29_500;
pub const BASELINE_MAXLEN: usize = 50;
pub const GERMAN_MINLEN: usize = 5;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("{source_lines} source lines but {target_lines} target lines")]
    LineCountMismatch { source_lines: usize, target_lines: usize },
    #[error("line {line}: {what} has {found} tokens, expected {expected}")]
    AnnotationMismatch {
        line: usize,
        what: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("backend failure: {0}")]
    BackendFailure(String),
}

/// Representation the pipeline prepares and post-processes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PipelineMode {
    Baseline,
    Morphgen,
    Serialization,
    GermanStemmed,
    GermanStemmedSplit,
}

impl PipelineMode {
    pub const ALL: [PipelineMode; 5] = [
        PipelineMode::Baseline,
        PipelineMode::Morphgen,
        PipelineMode::Serialization,
        PipelineMode::GermanStemmed,
        PipelineMode::GermanStemmedSplit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PipelineMode::Baseline => "baseline",
            PipelineMode::Morphgen => "morphgen",
            PipelineMode::Serialization => "serialization",
            PipelineMode::GermanStemmed => "german-stemmed",
            PipelineMode::GermanStemmedSplit => "german-stemmed-split",
        }
    }

    /// The token-level representation used on the target side.
    pub fn representation(self) -> Mode {
        match self {
            PipelineMode::Baseline => Mode::Baseline,
            PipelineMode::Morphgen => Mode::Morphgen,
            PipelineMode::Serialization => Mode::Serialization,
            PipelineMode::GermanStemmed | PipelineMode::GermanStemmedSplit => Mode::GermanStemmed,
        }
    }

    pub fn is_german(self) -> bool {
        matches!(self, PipelineMode::GermanStemmed | PipelineMode::GermanStemmedSplit)
    }

    pub fn is_interleaved(self) -> bool {
        self != PipelineMode::Baseline
    }
}

impl fmt::Display for PipelineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PipelineMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PipelineMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub mode: PipelineMode,
    pub bpe_merges: usize,
    /// Maximum sequence length of the prepared target side.
    pub maxlen: usize,
    /// Minimum number of target words.
    pub minlen: usize,
    pub sample_size: Option<usize>,
    pub seed: u64,
    pub protect_tags: bool,
    /// Learn one merge table over both sides (default) or one per side.
    pub joint_bpe: bool,
    pub lexicon: Option<String>,
    pub merges_path: Option<String>,
}

impl PipelineConfig {
    pub fn for_mode(mode: PipelineMode) -> Self {
        let german = mode.is_german();
        PipelineConfig {
            mode,
            bpe_merges: if german { GERMAN_BPE_MERGES } else { CZECH_BPE_MERGES },
            maxlen: if mode.is_interleaved() {
                2 * BASELINE_MAXLEN
            } else {
                BASELINE_MAXLEN
            },
            minlen: if german { GERMAN_MINLEN } else { 1 },
            sample_size: None,
            seed: DEFAULT_SEED,
            protect_tags: false,
            joint_bpe: true,
            lexicon: None,
            merges_path: None,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.minlen < 1 {
            return Err(PipelineError::Config("minlen must be at least 1".into()));
        }
        if self.maxlen < self.minlen {
            return Err(PipelineError::Config(format!(
                "maxlen {} is smaller than minlen {}",
                self.maxlen, self.minlen
            )));
        }
        Ok(())
    }

    /// Upper bound on target words: interleaving doubles a sentence, so
    /// interleaved modes allow half of `maxlen` words.
    pub fn max_words(&self) -> usize {
        if self.mode.is_interleaved() {
            self.maxlen / 2
        } else {
            self.maxlen
        }
    }

    /// Sets one `key=value` option, as used in config files and manifests.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let bad = |e: &dyn fmt::Display| PipelineError::Config(format!("{key}={value}: {e}"));
        let parse_usize = |v: &str| v.parse::<usize>().map_err(|e| bad(&e));
        match key {
            "mode" => {
                let mode: PipelineMode = value.parse().map_err(|e: String| bad(&e))?;
                if mode != self.mode {
                    let defaults = PipelineConfig::for_mode(mode);
                    let old = PipelineConfig::for_mode(self.mode);
                    self.mode = mode;
                    if self.bpe_merges == old.bpe_merges {
                        self.bpe_merges = defaults.bpe_merges;
                    }
                    if self.maxlen == old.maxlen {
                        self.maxlen = defaults.maxlen;
                    }
                    if self.minlen == old.minlen {
                        self.minlen = defaults.minlen;
                    }
                }
            }
            "bpe_merges" => self.bpe_merges = parse_usize(value)?,
            "maxlen" => self.maxlen = parse_usize(value)?,
            "minlen" => self.minlen = parse_usize(value)?,
            "sample_size" => {
                self.sample_size = if value.is_empty() || value == "none" {
                    None
                } else {
                    Some(parse_usize(value)?)
                }
            }
            "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
            "protect_tags" => self.protect_tags = value.parse().map_err(|e| bad(&e))?,
            "joint_bpe" => self.joint_bpe = value.parse().map_err(|e| bad(&e))?,
            "lexicon" => self.lexicon = Some(value.to_owned()).filter(|v| !v.is_empty()),
            "merges_path" => self.merges_path = Some(value.to_owned()).filter(|v| !v.is_empty()),
            _ => return Err(PipelineError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` document. Blank lines and `#` comments are
    /// skipped; a `config.` key prefix (as written in manifests) is accepted.
    pub fn apply_document(&mut self, text: &str) -> Result<(), PipelineError> {
        let mut entries: Vec<(&str, &str)> = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| PipelineError::Config(format!("expected key=value, found {line:?}")))?;
            let key = key.trim();
            let key = key.strip_prefix("config.").unwrap_or(key);
            entries.push((key, value.trim()));
        }
        for (key, value) in entries.iter().filter(|(k, _)| *k == "mode") {
            self.set(key, value)?;
        }
        for (key, value) in entries.iter().filter(|(k, _)| *k != "mode") {
            if MANIFEST_ONLY_KEYS.contains(key) || key.starts_with("input.") || key.starts_with("counter.") {
                continue;
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        vec![
            ("mode".into(), self.mode.to_string()),
            ("bpe_merges".into(), self.bpe_merges.to_string()),
            ("maxlen".into(), self.maxlen.to_string()),
            ("minlen".into(), self.minlen.to_string()),
            (
                "sample_size".into(),
                self.sample_size.map_or_else(|| "none".to_owned(), |s| s.to_string()),
            ),
            ("seed".into(), self.seed.to_string()),
            ("protect_tags".into(), self.protect_tags.to_string()),
            ("joint_bpe".into(), self.joint_bpe.to_string()),
            ("lexicon".into(), opt(&self.lexicon)),
            ("merges_path".into(), opt(&self.merges_path)),
        ]
    }
}

/// Keys a manifest carries next to the configuration that are not options.
const MANIFEST_ONLY_KEYS: &[&str] = &["tool_version", "command"];

/// One aligned sentence pair with optional per-token annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub source: String,
    pub target: String,
    /// Parse tags (German) or positional tags (Czech), one per target word.
    pub target_tags: Option<String>,
    /// Part-of-speech tags, one per source word.
    pub source_tags: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pub pairs: Vec<SentencePair>,
}

impl ParallelCorpus {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(source: &[S], target: &[T]) -> Result<Self, PipelineError> {
        if source.len() != target.len() {
            return Err(PipelineError::LineCountMismatch {
                source_lines: source.len(),
                target_lines: target.len(),
            });
        }
        Ok(ParallelCorpus {
            pairs: source
                .iter()
                .zip(target)
                .map(|(s, t)| SentencePair {
                    source: s.as_ref().to_owned(),
                    target: t.as_ref().to_owned(),
                    target_tags: None,
                    source_tags: None,
                })
                .collect(),
        })
    }

    pub fn with_target_tags<S: AsRef<str>>(mut self, tags: &[S]) -> Result<Self, PipelineError> {
        self.check_annotation_lines(tags.len())?;
        for (i, (pair, line)) in self.pairs.iter_mut().zip(tags).enumerate() {
            let line = line.as_ref();
            check_token_count(i, "target tag line", line, &pair.target)?;
            pair.target_tags = Some(line.to_owned());
        }
        Ok(self)
    }

    pub fn with_source_tags<S: AsRef<str>>(mut self, tags: &[S]) -> Result<Self, PipelineError> {
        self.check_annotation_lines(tags.len())?;
        for (i, (pair, line)) in self.pairs.iter_mut().zip(tags).enumerate() {
            let line = line.as_ref();
            check_token_count(i, "source tag line", line, &pair.source)?;
            pair.source_tags = Some(line.to_owned());
        }
        Ok(self)
    }

    fn check_annotation_lines(&self, n: usize) -> Result<(), PipelineError> {
        if n != self.pairs.len() {
            return Err(PipelineError::LineCountMismatch {
                source_lines: self.pairs.len(),
                target_lines: n,
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sources(&self) -> Vec<&str> {
        self.pairs.iter().map(|p| p.source.as_str()).collect()
    }

    pub fn targets(&self) -> Vec<&str> {
        self.pairs.iter().map(|p| p.target.as_str()).collect()
    }
}

fn check_token_count(line: usize, what: &'static str, annotation: &str, text: &str) -> Result<(), PipelineError> {
    let (found, expected) = (annotation.split_whitespace().count(), text.split_whitespace().count());
    if found != expected {
        return Err(PipelineError::AnnotationMismatch {
            line: line + 1,
            what,
            found,
            expected,
        });
    }
    Ok(())
}

/// Keeps pairs whose target word count lies in `[minlen, max_words]`
/// (inclusive), then draws a seeded uniform sample if `sample_size` is set.
/// Sampled pairs keep their corpus order.
pub fn filter_corpus(corpus: &ParallelCorpus, cfg: &PipelineConfig) -> ParallelCorpus {
    let max_words = cfg.max_words();
    let kept: Vec<&SentencePair> = corpus
        .pairs
        .iter()
        .filter(|p| {
            let n = p.target.split_whitespace().count();
            n >= cfg.minlen && n <= max_words
        })
        .collect();
    let pairs = match cfg.sample_size {
        Some(k) if k < kept.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut picked = sample(&mut rng, kept.len(), k).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| kept[i].clone()).collect()
        }
        _ => kept.into_iter().cloned().collect(),
    };
    ParallelCorpus { pairs }
}

/// Why a sentence could not be prepared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Index into the filtered corpus.
    pub sentence: usize,
    pub message: String,
}

/// Analyzes the words of one target sentence.
///
/// German words whose parse tag names an inflecting part of speech take
/// the first compatible lexicon analysis; any other German word becomes a
/// bare token. Without tags the first canonical analysis is used.
pub fn analyze_sentence(
    words: &[&str],
    tags: Option<&[&str]>,
    lex: &ParadigmLexicon,
    german: bool,
) -> Result<Vec<MorphAnalysis>, String> {
    let mut out = Vec::with_capacity(words.len());
    for (i, &word) in words.iter().enumerate() {
        let candidates: Vec<MorphAnalysis> = lex
            .analyze(word)
            .into_iter()
            .filter(|a| a.tag.is_german() == german)
            .collect();
        let context = tags.map(|t| t[i]);
        let chosen = match context {
            Some(ctx) if german => {
                let parsed = ParseContext::parse(ctx).map_err(|e| e.to_string())?;
                if inflection_class(&parsed.pos).is_none() {
                    let bare = GermanFeatureSeq::Bare(parsed.bare_tag());
                    MorphAnalysis::new(word, Tag::German(bare)).with_surface(word)
                } else if candidates.is_empty() {
                    return Err(format!("no analysis for {word:?}"));
                } else {
                    disambiguate(&candidates, ctx).map_err(|e| format!("{word:?}: {e}"))?
                }
            }
            Some(ctx) => {
                if candidates.is_empty() {
                    return Err(format!("no analysis for {word:?}"));
                }
                disambiguate(&candidates, ctx).map_err(|e| format!("{word:?}: {e}"))?
            }
            None => candidates
                .into_iter()
                .next()
                .ok_or_else(|| format!("no analysis for {word:?}"))?,
        };
        out.push(chosen);
    }
    Ok(out)
}

/// Target-side tokens of one analyzed sentence in the configured mode.
pub fn encode_target(analyses: &[MorphAnalysis], mode: PipelineMode) -> Vec<String> {
    let tokens = encode(analyses, mode.representation()).tokens;
    if mode == PipelineMode::GermanStemmedSplit {
        split_line(&tokens)
    } else {
        tokens
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedCorpus {
    /// Source lines after optional tagging, before BPE.
    pub source_encoded: Vec<String>,
    /// Target lines in the configured representation, before BPE.
    pub target_encoded: Vec<String>,
    pub source: Vec<String>,
    pub target: Vec<String>,
    /// Joint table, or the target table when learning per side.
    pub merges: MergeTable,
    pub source_merges: Option<MergeTable>,
    /// Indices (into the filtered corpus) of the sentences kept.
    pub kept: Vec<usize>,
    pub dropped: Vec<Diagnostic>,
}

fn protection(cfg: &PipelineConfig) -> fn(&str) -> bool {
    if cfg.protect_tags {
        is_protected_token
    } else {
        |_| false
    }
}

fn count_tokens<'a, I: IntoIterator<Item = &'a String>>(lines: I, protected: fn(&str) -> bool) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    for line in lines {
        for t in line.split_whitespace().filter(|t| !protected(t)) {
            *counts.entry(t.to_owned()).or_insert(0) += 1;
        }
    }
    counts
}

/// Applies `table` to every line, leaving protected tokens whole.
pub fn segment_lines(table: &MergeTable, lines: &[String], protected: fn(&str) -> bool) -> Vec<String> {
    let distinct: HashSet<&str> = lines.iter().flat_map(|l| l.split_whitespace()).collect();
    let distinct: Vec<&str> = distinct.into_iter().collect();
    let segmented: HashMap<&str, String> = distinct
        .par_iter()
        .map(|&t| {
            let pieces = if protected(t) {
                t.to_owned()
            } else {
                apply_bpe(table, t).join(" ")
            };
            (t, pieces)
        })
        .collect();
    lines
        .par_iter()
        .map(|l| {
            l.split_whitespace()
                .map(|t| segmented[t].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// Encodes both sides per the configured mode, learns BPE (unless `table`
/// is given) and segments. A budget of zero merges and no table leaves the
/// encoded text unsegmented. Sentences that cannot be analyzed are dropped
/// and reported.
pub fn prepare_variant(
    corpus: &ParallelCorpus,
    cfg: &PipelineConfig,
    lex: &ParadigmLexicon,
    table: Option<&MergeTable>,
) -> Result<PreparedCorpus, PipelineError> {
    cfg.validate()?;
    let mode = cfg.mode;
    let results: Vec<Result<(String, String), String>> = corpus
        .pairs
        .par_iter()
        .map(|pair| {
            let words: Vec<&str> = pair.target.split_whitespace().collect();
            let target = if mode == PipelineMode::Baseline {
                words.join(" ")
            } else {
                let tags: Option<Vec<&str>> = pair.target_tags.as_deref().map(|t| t.split_whitespace().collect());
                let analyses = analyze_sentence(&words, tags.as_deref(), lex, mode.is_german())?;
                encode_target(&analyses, mode).join(" ")
            };
            let src_words: Vec<&str> = pair.source.split_whitespace().collect();
            let source = match (&pair.source_tags, mode.is_german()) {
                (Some(tags), true) => {
                    let tags: Vec<&str> = tags.split_whitespace().collect();
                    tag_source(&src_words, &tags).map_err(|e| e.to_string())?.join(" ")
                }
                _ => src_words.join(" "),
            };
            Ok((source, target))
        })
        .collect();

    let mut prepared = PreparedCorpus {
        source_encoded: Vec::new(),
        target_encoded: Vec::new(),
        source: Vec::new(),
        target: Vec::new(),
        merges: MergeTable::new(),
        source_merges: None,
        kept: Vec::new(),
        dropped: Vec::new(),
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((s, t)) => {
                prepared.kept.push(i);
                prepared.source_encoded.push(s);
                prepared.target_encoded.push(t);
            }
            Err(message) => prepared.dropped.push(Diagnostic { sentence: i, message }),
        }
    }

    if table.is_none() && cfg.bpe_merges == 0 {
        prepared.target = prepared.target_encoded.clone();
        prepared.source = prepared.source_encoded.clone();
        return Ok(prepared);
    }
    let protected = protection(cfg);
    let (target_table, source_table) = match table {
        Some(t) => (t.clone(), None),
        None if cfg.joint_bpe => {
            let counts = count_tokens(
                prepared.source_encoded.iter().chain(&prepared.target_encoded),
                protected,
            );
            (learn_bpe_from_counts(&counts, cfg.bpe_merges), None)
        }
        None => {
            let tgt = learn_bpe_from_counts(&count_tokens(&prepared.target_encoded, protected), cfg.bpe_merges);
            let src = learn_bpe_from_counts(&count_tokens(&prepared.source_encoded, protected), cfg.bpe_merges);
            (tgt, Some(src))
        }
    };
    prepared.target = segment_lines(&target_table, &prepared.target_encoded, protected);
    prepared.source = segment_lines(
        source_table.as_ref().unwrap_or(&target_table),
        &prepared.source_encoded,
        protected,
    );
    prepared.merges = target_table;
    prepared.source_merges = source_table;
    Ok(prepared)
}

/// A translation process: reads prepared lines on stdin, writes one line
/// per input line on stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Backend {
    pub program: String,
    pub args: Vec<String>,
}

impl Backend {
    pub fn new(program: impl Into<String>, args: &[&str]) -> Self {
        Backend {
            program: program.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// `cat`, which echoes its input.
    pub fn identity() -> Self {
        Backend::new("cat", &[])
    }
}

pub fn translate_external<S: AsRef<str>>(lines: &[S], backend: &Backend) -> Result<Vec<String>, PipelineError> {
    let fail = |m: String| PipelineError::BackendFailure(m);
    let mut child = Command::new(&backend.program)
        .args(&backend.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(|e| fail(format!("cannot start {:?}: {e}", backend.program)))?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let input: String = lines.iter().map(|l| format!("{}\n", l.as_ref())).collect();
    let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let stdout = child.stdout.take().expect("piped stdout");
    let mut output = Vec::with_capacity(lines.len());
    for line in BufReader::new(stdout).lines() {
        output.push(line.map_err(|e| fail(format!("reading backend output: {e}")))?);
    }
    let status = child.wait().map_err(|e| fail(e.to_string()))?;
    match writer.join() {
        Ok(Ok(())) => {}
        Ok(Err(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Ok(Err(e)) => return Err(fail(format!("writing to backend: {e}"))),
        Err(_) => return Err(fail("writer thread panicked".into())),
    }
    if !status.success() {
        return Err(fail(format!("{:?} exited with {status}", backend.program)));
    }
    if output.len() != lines.len() {
        return Err(fail(format!(
            "backend produced {} lines for {} input lines",
            output.len(),
            lines.len()
        )));
    }
    Ok(output)
}

/// Everything counted while post-processing a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PostprocessReport {
    pub generation: GenerationReport,
    pub wellformedness: WellformednessReport,
    pub recovery: Recovery,
    /// Lines whose last piece still carried a continuation marker.
    pub dangling_markers: usize,
    pub compounds: MergeStats,
}

impl PostprocessReport {
    pub fn counters(&self) -> Vec<(String, u64)> {
        vec![
            ("lines".into(), self.wellformedness.lines as u64),
            ("generated".into(), self.generation.total as u64),
            ("fallbacks".into(), self.generation.fallbacks as u64),
            ("malformed_lines".into(), self.wellformedness.malformed.len() as u64),
            ("orphan_words".into(), self.recovery.orphan_words as u64),
            ("orphan_tags".into(), self.recovery.orphan_tags as u64),
            ("dangling_markers".into(), self.dangling_markers as u64),
            ("compounds_merged".into(), self.compounds.merged as u64),
            (
                "unknown_modifiers".into(),
                self.compounds.unknown_modifiers.len() as u64,
            ),
            ("stray_separators".into(), self.compounds.stray_separators as u64),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostprocessOutput {
    pub lines: Vec<String>,
    pub report: PostprocessReport,
}

struct LineResult {
    text: String,
    generation: GenerationReport,
    wellformedness: WellformednessReport,
    recovery: Recovery,
    dangling: bool,
    compounds: MergeStats,
}

fn postprocess_line(line: &str, mode: PipelineMode, lex: &ParadigmLexicon) -> LineResult {
    let pieces: Vec<&str> = line.split_whitespace().collect();
    let (mut tokens, dangling) = revert_bpe_lenient(&pieces);
    let mut compounds = MergeStats::default();
    if mode == PipelineMode::GermanStemmedSplit {
        let (merged, stats) = merge_line(&tokens, lex);
        tokens = merged;
        compounds = stats;
    }
    let representation = mode.representation();
    let joined = tokens.join(" ");
    let wellformedness = wellformedness(&[joined.as_str()], representation);
    let mut generation = GenerationReport::default();
    let (items, recovery) = decode_lenient(&tokens, representation);
    let words: Vec<String> = items
        .into_iter()
        .map(|item| match item {
            Decoded::Verbatim(w) => w,
            Decoded::Pair(pair) => match (&pair.tag, mode) {
                (Tag::German(GermanFeatureSeq::Bare(_)), _) => pair.word,
                (_, PipelineMode::Serialization) => pair.word,
                _ => lex.generate_with_fallback(&pair.word, &pair.tag, &mut generation),
            },
        })
        .collect();
    LineResult {
        text: words.join(" "),
        generation,
        wellformedness,
        recovery,
        dangling,
        compounds,
    }
}

/// Reverts BPE, decodes, merges compounds (split mode), and generates the
/// surface form of every pair. Always returns one line per input line.
pub fn postprocess<S: AsRef<str> + Sync>(lines: &[S], mode: PipelineMode, lex: &ParadigmLexicon) -> PostprocessOutput {
    let results: Vec<LineResult> = lines
        .par_iter()
        .map(|l| postprocess_line(l.as_ref(), mode, lex))
        .collect();
    let mut report = PostprocessReport::default();
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r.text);
        report.generation.merge(r.generation);
        report.wellformedness.merge(r.wellformedness);
        report.recovery.merge(r.recovery);
        report.dangling_markers += usize::from(r.dangling);
        report.compounds.merged += r.compounds.merged;
        report.compounds.unknown_modifiers.extend(r.compounds.unknown_modifiers);
        report.compounds.stray_separators += r.compounds.stray_separators;
    }
    PostprocessOutput { lines: out, report }
}
