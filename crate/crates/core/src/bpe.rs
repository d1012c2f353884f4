//! Byte-pair encoding: learning merges, segmenting words, reverting
//! segmentation, and vocabulary / word-end fragment statistics.
//!
//! Words start as sequences of characters followed by a separate
//! end-of-word symbol `</w>`, which merges like any other symbol. Segmented
//! output marks every piece except the last one of a word with `@@`:
//! `pizzy` becomes `piz@@ zy`.
//!
//! Ties between equally frequent pairs are broken by the lexicographically
//! smallest `(left, right)`, so learning is fully deterministic.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

pub const CONTINUATION: &str = "@@";
pub const END_OF_WORD: &str = "</w>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BpeError {
    #[error("final piece {0:?} carries a continuation marker")]
    DanglingMarker(String),
    #[error("merge table line {line}: {reason}")]
    MergeTableParse { line: usize, reason: String },
    #[error("duplicate merge {0} {1}")]
    DuplicateMerge(String, String),
}

/// Ordered merge operations; a merge's rank is its position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeTable {
    merges: Vec<(String, String)>,
    ranks: HashMap<(String, String), usize>,
}

impl MergeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self, BpeError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut table = MergeTable::new();
        for (a, b) in pairs {
            table.push(a.into(), b.into())?;
        }
        Ok(table)
    }

    fn push(&mut self, left: String, right: String) -> Result<(), BpeError> {
        let key = (left, right);
        if self.ranks.contains_key(&key) {
            return Err(BpeError::DuplicateMerge(key.0, key.1));
        }
        self.ranks.insert(key.clone(), self.merges.len());
        self.merges.push(key);
        Ok(())
    }

    /// Reads the `left right` per line format. A leading `#version` line
    /// is skipped.
    pub fn parse(text: &str) -> Result<Self, BpeError> {
        let mut table = MergeTable::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() || (idx == 0 && line.starts_with("#version")) {
                continue;
            }
            let mut parts = line.split(' ');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                    table.push(a.to_owned(), b.to_owned())?;
                }
                _ => {
                    return Err(BpeError::MergeTableParse {
                        line: idx + 1,
                        reason: format!("expected \"left right\", found {line:?}"),
                    })
                }
            }
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        self.merges.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
    }

    pub fn len(&self) -> usize {
        self.merges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.merges.is_empty()
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn rank(&self, left: &str, right: &str) -> Option<usize> {
        self.ranks.get(&(left.to_owned(), right.to_owned())).copied()
    }

    /// The table made of the first `k` merges.
    pub fn truncated(&self, k: usize) -> MergeTable {
        MergeTable::from_pairs(self.merges.iter().take(k).cloned()).expect("prefix has no duplicates")
    }
}

impl fmt::Display for MergeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Counts word frequencies over whitespace-separated tokens.
pub fn word_counts<I, S>(tokens: I) -> HashMap<String, u64>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_ref().to_owned()).or_insert(0) += 1;
    }
    counts
}

type PairKey = (Reverse<i64>, Rc<str>, Rc<str>);

struct Learner {
    names: Vec<Rc<str>>,
    ids: HashMap<Rc<str>, u32>,
    words: Vec<Vec<u32>>,
    freqs: Vec<i64>,
    counts: HashMap<(u32, u32), i64>,
    index: HashMap<(u32, u32), HashSet<usize>>,
    queue: BTreeSet<PairKey>,
}

impl Learner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        let rc: Rc<str> = Rc::from(name);
        self.names.push(rc.clone());
        self.ids.insert(rc, id);
        id
    }

    fn key(&self, pair: (u32, u32), count: i64) -> PairKey {
        (
            Reverse(count),
            self.names[pair.0 as usize].clone(),
            self.names[pair.1 as usize].clone(),
        )
    }

    fn adjust(&mut self, pair: (u32, u32), delta: i64, word: usize) {
        let old = self.counts.get(&pair).copied().unwrap_or(0);
        let new = old + delta;
        if old > 0 {
            let key = self.key(pair, old);
            self.queue.remove(&key);
        }
        if new > 0 {
            let key = self.key(pair, new);
            self.queue.insert(key);
            self.counts.insert(pair, new);
            if delta > 0 {
                self.index.entry(pair).or_default().insert(word);
            }
        } else {
            self.counts.remove(&pair);
            self.index.remove(&pair);
        }
    }
}

/// Learns up to `num_merges` merges from a stream of word tokens.
///
/// Learning stops early once every word is a single symbol.
pub fn learn_bpe<I, S>(tokens: I, num_merges: usize) -> MergeTable
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    learn_bpe_from_counts(&word_counts(tokens), num_merges)
}

pub fn learn_bpe_from_counts(counts: &HashMap<String, u64>, num_merges: usize) -> MergeTable {
    let mut learner = Learner {
        names: Vec::new(),
        ids: HashMap::new(),
        words: Vec::new(),
        freqs: Vec::new(),
        counts: HashMap::new(),
        index: HashMap::new(),
        queue: BTreeSet::new(),
    };
    let mut sorted: Vec<(&String, &u64)> = counts.iter().filter(|(w, _)| !w.is_empty()).collect();
    sorted.sort();
    let mut buf = [0u8; 4];
    for (word, &freq) in sorted {
        let mut symbols: Vec<u32> = word
            .chars()
            .map(|c| {
                let s: &str = c.encode_utf8(&mut buf);
                let s = s.to_owned();
                learner.intern(&s)
            })
            .collect();
        symbols.push(learner.intern(END_OF_WORD));
        learner.words.push(symbols);
        learner.freqs.push(freq as i64);
    }
    for w in 0..learner.words.len() {
        let freq = learner.freqs[w];
        for i in 0..learner.words[w].len() - 1 {
            let pair = (learner.words[w][i], learner.words[w][i + 1]);
            learner.adjust(pair, freq, w);
        }
    }

    let mut table = MergeTable::new();
    while table.len() < num_merges {
        let Some(best) = learner.queue.iter().next().cloned() else {
            break;
        };
        let (_, left, right) = best;
        let pair = (learner.ids[&left], learner.ids[&right]);
        let merged_name = format!("{left}{right}");
        let merged = learner.intern(&merged_name);
        let mut affected: Vec<usize> = learner
            .index
            .get(&pair)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        affected.sort_unstable();
        for w in affected {
            let old = learner.words[w].clone();
            if !old.windows(2).any(|p| (p[0], p[1]) == pair) {
                continue;
            }
            let freq = learner.freqs[w];
            let mut new = Vec::with_capacity(old.len());
            let mut i = 0;
            while i < old.len() {
                if i + 1 < old.len() && (old[i], old[i + 1]) == pair {
                    new.push(merged);
                    i += 2;
                } else {
                    new.push(old[i]);
                    i += 1;
                }
            }
            for p in old.windows(2) {
                learner.adjust((p[0], p[1]), -freq, w);
            }
            for p in new.windows(2) {
                learner.adjust((p[0], p[1]), freq, w);
            }
            learner.words[w] = new;
        }
        table
            .push(left.to_string(), right.to_string())
            .expect("a merged pair never reappears");
    }
    table
}

/// Segments one word. Pieces other than the last carry `@@`.
pub fn apply_bpe(table: &MergeTable, token: &str) -> Vec<String> {
    if token.is_empty() {
        return vec![String::new()];
    }
    let mut symbols: Vec<String> = token.chars().map(String::from).collect();
    symbols.push(END_OF_WORD.to_owned());
    loop {
        let best = symbols
            .windows(2)
            .enumerate()
            .filter_map(|(i, p)| table.ranks.get(&(p[0].clone(), p[1].clone())).map(|&r| (r, i)))
            .min();
        let Some((rank, _)) = best else { break };
        let (left, right) = &table.merges[rank];
        let mut merged = Vec::with_capacity(symbols.len());
        let mut i = 0;
        while i < symbols.len() {
            if i + 1 < symbols.len() && &symbols[i] == left && &symbols[i + 1] == right {
                merged.push(format!("{left}{right}"));
                i += 2;
            } else {
                merged.push(std::mem::take(&mut symbols[i]));
                i += 1;
            }
        }
        symbols = merged;
    }
    let last = symbols.pop().expect("at least the end-of-word symbol");
    if last != END_OF_WORD {
        symbols.push(
            last.strip_suffix(END_OF_WORD)
                .expect("end symbol is always last")
                .to_owned(),
        );
    }
    let n = symbols.len();
    symbols
        .into_iter()
        .enumerate()
        .map(|(i, s)| if i + 1 < n { s + CONTINUATION } else { s })
        .collect()
}

/// Segments a whole line; tokens for which `protected` holds stay whole.
pub fn apply_bpe_line<P>(table: &MergeTable, line: &str, protected: P) -> String
where
    P: Fn(&str) -> bool,
{
    let mut out: Vec<String> = Vec::new();
    for token in line.split_whitespace() {
        if protected(token) {
            out.push(token.to_owned());
        } else {
            out.extend(apply_bpe(table, token));
        }
    }
    out.join(" ")
}

/// Joins continuation pieces back into words.
pub fn revert_bpe<S: AsRef<str>>(subwords: &[S]) -> Result<Vec<String>, BpeError> {
    let mut out = Vec::new();
    let mut pending = String::new();
    for piece in subwords {
        let piece = piece.as_ref();
        match piece.strip_suffix(CONTINUATION) {
            Some(stem) => pending.push_str(stem),
            None => {
                pending.push_str(piece);
                out.push(std::mem::take(&mut pending));
            }
        }
    }
    if let Some(last) = subwords.last() {
        if last.as_ref().ends_with(CONTINUATION) {
            return Err(BpeError::DanglingMarker(last.as_ref().to_owned()));
        }
    }
    Ok(out)
}

/// Reverts a line, dropping the marker from a dangling final piece.
/// Returns the words and whether such a repair was needed.
pub fn revert_bpe_lenient<S: AsRef<str>>(subwords: &[S]) -> (Vec<String>, bool) {
    match revert_bpe(subwords) {
        Ok(words) => (words, false),
        Err(_) => {
            let mut pieces: Vec<String> = subwords.iter().map(|s| s.as_ref().to_owned()).collect();
            if let Some(last) = pieces.last_mut() {
                last.truncate(last.len() - CONTINUATION.len());
            }
            (revert_bpe(&pieces).expect("marker removed"), true)
        }
    }
}

/// Frequencies of final pieces of split words, most frequent first; ties
/// in lexicographic order.
pub fn word_end_fragment_stats<I, S>(lines: I) -> Vec<(String, usize)>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts: HashMap<String, usize> = HashMap::new();
    for line in lines {
        let mut previous_continues = false;
        for piece in line.as_ref().split_whitespace() {
            let continues = piece.ends_with(CONTINUATION);
            if !continues && previous_continues {
                *counts.entry(piece.to_owned()).or_insert(0) += 1;
            }
            previous_continues = continues;
        }
    }
    let mut stats: Vec<(String, usize)> = counts.into_iter().collect();
    stats.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    stats
}

/// Distinct-token counts of one corpus variant before and after BPE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabRow {
    pub name: String,
    pub vocab: usize,
    pub vocab_bpe: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VocabReport {
    pub rows: Vec<VocabRow>,
}

impl VocabReport {
    /// Aligned table: one row per variant, counts right-aligned.
    pub fn to_table(&self) -> String {
        let name_width = self
            .rows
            .iter()
            .map(|r| r.name.chars().count())
            .max()
            .unwrap_or(0)
            .max(8);
        let mut out = format!(
            "{:<name_width$} | {:>15} | {:>22}\n",
            "", "vocabulary size", "vocabulary size w/ BPE"
        );
        out.push_str(&format!(
            "{}-+-{}-+-{}\n",
            "-".repeat(name_width),
            "-".repeat(15),
            "-".repeat(22)
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<name_width$} | {:>15} | {:>22}\n",
                row.name, row.vocab, row.vocab_bpe
            ));
        }
        out
    }
}

/// Number of distinct whitespace-separated tokens.
pub fn vocab_size<I, S>(lines: I) -> usize
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut seen = HashSet::new();
    for line in lines {
        for t in line.as_ref().split_whitespace() {
            if !seen.contains(t) {
                seen.insert(t.to_owned());
            }
        }
    }
    seen.len()
}

/// Vocabulary size before and after segmentation for each named variant.
///
/// After segmentation, units are counted with the continuation marker
/// removed, so `ab@@` and `ab` are one unit.
pub fn vocab_stats<S: AsRef<str>>(variants: &[(&str, &[S], &MergeTable)]) -> VocabReport {
    let rows = variants
        .iter()
        .map(|(name, lines, table)| {
            let mut units = HashSet::new();
            let mut cache: HashMap<&str, ()> = HashMap::new();
            for line in lines.iter() {
                for token in line.as_ref().split_whitespace() {
                    if cache.insert(token, ()).is_some() {
                        continue;
                    }
                    for piece in apply_bpe(table, token) {
                        let unit = piece.strip_suffix(CONTINUATION).map(str::to_owned).unwrap_or(piece);
                        units.insert(unit);
                    }
                }
            }
            VocabRow {
                name: (*name).to_owned(),
                vocab: cache.len(),
                vocab_bpe: units.len(),
            }
        })
        .collect();
    VocabReport { rows }
}
