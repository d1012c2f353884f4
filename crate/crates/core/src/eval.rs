//! Corpus BLEU, novel-form counting, and well-formedness of interleaved output.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::interleave::{decode, ErrorKind, Mode, WellformednessError};

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("{hypotheses} hypothesis lines but {references} reference lines")]
    LineCountMismatch { hypotheses: usize, references: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BleuOptions {
    /// Fold case before counting.
    pub lowercase: bool,
    /// Add one to matches and totals for n > 1.
    pub smooth: bool,
}

/// Sufficient statistics for corpus BLEU.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: [u64; MAX_ORDER],
    pub totals: [u64; MAX_ORDER],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl BleuStats {
    pub fn add(&mut self, other: &BleuStats) {
        for n in 0..MAX_ORDER {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }

    /// BLEU in [0, 100].
    ///
    /// Orders with no hypothesis n-grams at all (every sentence shorter
    /// than n) are left out of the geometric mean.
    pub fn score(&self, smooth: bool) -> f64 {
        if self.hyp_len == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        let mut orders = 0;
        for n in 0..MAX_ORDER {
            let (mut m, mut t) = (self.matches[n] as f64, self.totals[n] as f64);
            if smooth && n > 0 {
                m += 1.0;
                t += 1.0;
            }
            if t == 0.0 {
                continue;
            }
            if m == 0.0 {
                return 0.0;
            }
            log_sum += (m / t).ln();
            orders += 1;
        }
        let precision = (log_sum / orders as f64).exp();
        let (c, r) = (self.hyp_len as f64, self.ref_len as f64);
        let brevity = if c < r { (1.0 - r / c).exp() } else { 1.0 };
        100.0 * brevity * precision
    }
}

fn ngram_counts<'a, 'b>(tokens: &'b [&'a str], n: usize) -> HashMap<&'b [&'a str], u64> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

pub fn sentence_stats(hypothesis: &str, reference: &str, lowercase: bool) -> BleuStats {
    let (h, r) = if lowercase {
        (hypothesis.to_lowercase(), reference.to_lowercase())
    } else {
        (hypothesis.to_owned(), reference.to_owned())
    };
    let hyp: Vec<&str> = h.split_whitespace().collect();
    let refs: Vec<&str> = r.split_whitespace().collect();
    let mut stats = BleuStats {
        hyp_len: hyp.len() as u64,
        ref_len: refs.len() as u64,
        ..Default::default()
    };
    for n in 1..=MAX_ORDER {
        let hyp_counts = ngram_counts(&hyp, n);
        let ref_counts = ngram_counts(&refs, n);
        stats.totals[n - 1] = hyp.len().saturating_sub(n - 1) as u64;
        stats.matches[n - 1] = hyp_counts
            .iter()
            .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
    }
    stats
}

/// Corpus-level BLEU-4 with a single reference per sentence.
pub fn bleu<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[H],
    references: &[R],
    options: BleuOptions,
) -> Result<f64, EvalError> {
    if hypotheses.len() != references.len() {
        return Err(EvalError::LineCountMismatch {
            hypotheses: hypotheses.len(),
            references: references.len(),
        });
    }
    if hypotheses.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut total = BleuStats::default();
    for (h, r) in hypotheses.iter().zip(references) {
        total.add(&sentence_stats(h.as_ref(), r.as_ref(), options.lowercase));
    }
    Ok(total.score(options.smooth))
}

pub fn format_bleu(score: f64) -> String {
    format!("{score:.2}")
}

/// One novel token occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovelItem {
    pub token: String,
    pub sentence: usize,
    pub confirmed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NovelFormReport {
    pub novel_tokens: usize,
    pub novel_types: usize,
    /// Novel types confirmed by the reference at least once.
    pub confirmed_by_reference: usize,
    pub items: Vec<NovelItem>,
}

impl NovelFormReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "novel_tokens\t{}\nnovel_types\t{}\nconfirmed_by_reference\t{}\n",
            self.novel_tokens, self.novel_types, self.confirmed_by_reference
        );
        for item in &self.items {
            out.push_str(&format!(
                "novel\t{}\t{}\t{}\n",
                item.sentence,
                item.token,
                if item.confirmed { "confirmed" } else { "-" }
            ));
        }
        out
    }
}

/// Finds output tokens that appear neither in the training target
/// vocabulary nor in their own source sentence; a novel token is
/// confirmed when its aligned reference contains it.
pub fn novel_forms<O, S, R>(
    outputs: &[O],
    training_vocab: &HashSet<String>,
    sources: &[S],
    references: &[R],
    lowercase: bool,
) -> Result<NovelFormReport, EvalError>
where
    O: AsRef<str>,
    S: AsRef<str>,
    R: AsRef<str>,
{
    if outputs.len() != sources.len() || outputs.len() != references.len() {
        return Err(EvalError::LineCountMismatch {
            hypotheses: outputs.len(),
            references: references.len().min(sources.len()),
        });
    }
    let fold = |s: &str| if lowercase { s.to_lowercase() } else { s.to_owned() };
    let vocab: HashSet<String> = if lowercase {
        training_vocab.iter().map(|w| w.to_lowercase()).collect()
    } else {
        training_vocab.clone()
    };
    let mut report = NovelFormReport::default();
    let mut types: BTreeMap<String, bool> = BTreeMap::new();
    for (idx, ((out, src), reference)) in outputs.iter().zip(sources).zip(references).enumerate() {
        let out = fold(out.as_ref());
        let src = fold(src.as_ref());
        let reference = fold(reference.as_ref());
        let src_tokens: HashSet<&str> = src.split_whitespace().collect();
        let ref_tokens: HashSet<&str> = reference.split_whitespace().collect();
        for token in out.split_whitespace() {
            if vocab.contains(token) || src_tokens.contains(token) {
                continue;
            }
            let confirmed = ref_tokens.contains(token);
            report.novel_tokens += 1;
            *types.entry(token.to_owned()).or_insert(false) |= confirmed;
            report.items.push(NovelItem {
                token: token.to_owned(),
                sentence: idx,
                confirmed,
            });
        }
    }
    report.novel_types = types.len();
    report.confirmed_by_reference = types.values().filter(|&&c| c).count();
    Ok(report)
}

/// Malformed lines of a corpus of interleaved output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WellformednessReport {
    pub lines: usize,
    pub malformed: Vec<(usize, WellformednessError)>,
}

impl WellformednessReport {
    pub fn count(&self, kind: ErrorKind) -> usize {
        self.malformed.iter().filter(|(_, e)| e.kind == kind).count()
    }

    pub fn is_wellformed(&self) -> bool {
        self.malformed.is_empty()
    }

    pub fn merge(&mut self, other: WellformednessReport) {
        let offset = self.lines;
        self.lines += other.lines;
        self.malformed
            .extend(other.malformed.into_iter().map(|(line, e)| (line + offset, e)));
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("lines\t{}\nmalformed\t{}\n", self.lines, self.malformed.len());
        for kind in [ErrorKind::OddLength, ErrorKind::TagExpected, ErrorKind::WordExpected] {
            out.push_str(&format!("{}\t{}\n", kind.as_str(), self.count(kind)));
        }
        for (line, e) in &self.malformed {
            out.push_str(&format!("line\t{}\t{}\t{}\n", line + 1, e.kind.as_str(), e.position));
        }
        out
    }
}

/// Checks every line with the strict decoder of `mode`.
pub fn wellformedness<L: AsRef<str>>(lines: &[L], mode: Mode) -> WellformednessReport {
    let malformed = lines
        .iter()
        .enumerate()
        .filter_map(|(i, line)| {
            let tokens: Vec<&str> = line.as_ref().split_whitespace().collect();
            decode(&tokens, mode).err().map(|e| (i, e))
        })
        .collect();
    WellformednessReport {
        lines: lines.len(),
        malformed,
    }
}
