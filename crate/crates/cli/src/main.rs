mod io;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use morphgen::bpe::{
    apply_bpe_line, learn_bpe_from_counts, revert_bpe, revert_bpe_lenient, vocab_stats, word_end_fragment_stats,
    MergeTable,
};
use morphgen::compounds::{merge_line, split_line};
use morphgen::eval::{bleu, format_bleu, novel_forms, BleuOptions};
use morphgen::interleave::is_protected_token;
use morphgen::manifest::RunManifest;
use morphgen::morphlex::{disambiguate, GenerationReport, Tag};
use morphgen::pipeline::{
    filter_corpus, postprocess, prepare_variant, translate_external, Backend, ParallelCorpus, PipelineConfig,
    PipelineMode,
};
use rayon::prelude::*;

use crate::io::{emit_manifest, join_lines, load_lexicon, read_input, read_required, write_output};

#[derive(Parser)]
#[command(
    name = "morphgen",
    version,
    about = "Morphological target representations for MT corpora"
)]
struct Cli {
    /// Worker threads for sentence-parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// key=value configuration file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PipelineFlags {
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Existing merge table to apply instead of learning one.
    #[arg(long = "merges")]
    merges_path: Option<PathBuf>,
    #[arg(long)]
    bpe_merges: Option<usize>,
    #[arg(long)]
    maxlen: Option<usize>,
    #[arg(long)]
    minlen: Option<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Never split tags and compound separators.
    #[arg(long)]
    protect_tags: bool,
    /// Learn one merge table per side instead of a joint one.
    #[arg(long)]
    separate_bpe: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Filter, sample, encode and segment a parallel corpus.
    Prepare {
        #[command(flatten)]
        flags: PipelineFlags,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Parse tags for the target words, one line per sentence.
        #[arg(long)]
        target_tags: Option<PathBuf>,
        /// Source-side tags to interleave in German modes.
        #[arg(long)]
        source_tags: Option<PathBuf>,
        /// Directory for all outputs; without it the segmented target goes to stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Learn a BPE merge table.
    BpeLearn {
        inputs: Vec<PathBuf>,
        #[arg(short = 'n', long, default_value_t = morphgen::pipeline::CZECH_BPE_MERGES)]
        merges: usize,
        #[arg(long)]
        protect_tags: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Segment text with a merge table.
    BpeApply {
        input: Option<PathBuf>,
        #[arg(long)]
        merges: PathBuf,
        #[arg(long)]
        protect_tags: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Join `@@` pieces back into words.
    BpeRevert {
        input: Option<PathBuf>,
        /// Repair a dangling final marker instead of failing.
        #[arg(long)]
        lenient: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List lexicon analyses, or pick one per word given parse tags.
    Analyze {
        input: Option<PathBuf>,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        tags: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate surface forms from `lemma<TAB>tag` lines.
    Generate {
        input: Option<PathBuf>,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split compound stems of german-stemmed lines.
    SplitCompounds {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge split compounds back, using the lexicon's modifier table.
    MergeCompounds {
        input: Option<PathBuf>,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pipe lines through an external translation command.
    Translate {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// The backend command and its arguments, after `--`.
        #[arg(last = true, required = true)]
        backend: Vec<String>,
    },
    /// Turn system output back into surface text.
    Postprocess {
        input: Option<PathBuf>,
        #[command(flatten)]
        flags: PipelineFlags,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Corpus BLEU of a hypothesis file against a reference file.
    Bleu {
        hypothesis: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        lowercase: bool,
        #[arg(long)]
        smooth: bool,
    },
    /// Count output words seen neither in training nor in the source.
    NovelForms {
        #[arg(long)]
        hypothesis: PathBuf,
        #[arg(long)]
        train_target: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        lowercase: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vocabulary sizes and word-end fragment frequencies.
    Stats {
        #[arg(long, num_args = 1.., required_unless_present = "fragments")]
        vocab: Vec<PathBuf>,
        #[arg(long)]
        fragments: Option<PathBuf>,
        /// Merge table for the segmented column; learned per file otherwise.
        #[arg(long)]
        merges: Option<PathBuf>,
        #[arg(long, default_value_t = morphgen::pipeline::GERMAN_BPE_MERGES)]
        learn: usize,
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Prepare { .. } => "prepare",
            Command::BpeLearn { .. } => "bpe-learn",
            Command::BpeApply { .. } => "bpe-apply",
            Command::BpeRevert { .. } => "bpe-revert",
            Command::Analyze { .. } => "analyze",
            Command::Generate { .. } => "generate",
            Command::SplitCompounds { .. } => "split-compounds",
            Command::MergeCompounds { .. } => "merge-compounds",
            Command::Translate { .. } => "translate",
            Command::Postprocess { .. } => "postprocess",
            Command::Bleu { .. } => "bleu",
            Command::NovelForms { .. } => "novel-forms",
            Command::Stats { .. } => "stats",
        }
    }
}

/// Defaults, then the config file, then flags.
fn resolve_config(flags: &PipelineFlags, config: Option<&Path>, manifest: &mut RunManifest) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::for_mode(PipelineMode::Morphgen);
    if let Some(path) = config {
        let doc = read_required(path, manifest, "config")?;
        cfg.apply_document(&doc.text)
            .with_context(|| format!("in {}", doc.name))?;
    }
    let path_text = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    let mut set = |key: &str, value: Option<String>| -> Result<()> {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
        Ok(())
    };
    set("mode", flags.mode.clone())?;
    set("lexicon", path_text(&flags.lexicon))?;
    set("merges_path", path_text(&flags.merges_path))?;
    set("bpe_merges", flags.bpe_merges.map(|v| v.to_string()))?;
    set("maxlen", flags.maxlen.map(|v| v.to_string()))?;
    set("minlen", flags.minlen.map(|v| v.to_string()))?;
    set("sample_size", flags.sample_size.map(|v| v.to_string()))?;
    set("seed", flags.seed.map(|v| v.to_string()))?;
    set("protect_tags", flags.protect_tags.then(|| "true".to_owned()))?;
    set("joint_bpe", flags.separate_bpe.then(|| "false".to_owned()))?;
    cfg.validate()?;
    manifest.config = cfg.to_pairs();
    manifest.seed = Some(cfg.seed);
    Ok(cfg)
}

fn pipeline_lexicon(cfg: &PipelineConfig, manifest: &mut RunManifest) -> Result<morphgen::ParadigmLexicon> {
    match (&cfg.lexicon, cfg.mode) {
        (Some(path), _) => load_lexicon(Path::new(path), manifest),
        (None, PipelineMode::Baseline) => Ok(morphgen::ParadigmLexicon::default()),
        (None, mode) => bail!("mode {mode} needs --lexicon"),
    }
}

fn load_merges(path: &Path, manifest: &mut RunManifest) -> Result<MergeTable> {
    let input = read_required(path, manifest, "merges")?;
    MergeTable::parse(&input.text).with_context(|| format!("reading merge table {}", input.name))
}

fn protection(on: bool) -> fn(&str) -> bool {
    if on {
        is_protected_token
    } else {
        |_| false
    }
}

#[derive(Default)]
struct Outcome {
    /// Main output file, next to which the manifest is written.
    output: Option<PathBuf>,
    manifest: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("starting worker threads")?;
    }
    let mut manifest = RunManifest::new(cli.command.name());
    if let Some(jobs) = cli.jobs {
        manifest.config.push(("jobs".into(), jobs.to_string()));
    }
    let outcome = dispatch(cli.command, cli.config.as_deref(), &mut manifest)?;
    let explicit = cli.manifest.or(outcome.manifest);
    emit_manifest(&manifest, explicit.as_deref(), outcome.output.as_deref())
}

fn dispatch(command: Command, config: Option<&Path>, m: &mut RunManifest) -> Result<Outcome> {
    match command {
        Command::Prepare {
            flags,
            source,
            target,
            target_tags,
            source_tags,
            out_dir,
        } => {
            let cfg = resolve_config(&flags, config, m)?;
            let lex = pipeline_lexicon(&cfg, m)?;
            let src = read_required(&source, m, "source")?;
            let tgt = read_required(&target, m, "target")?;
            let mut corpus = ParallelCorpus::new(&src.lines(), &tgt.lines())?;
            if let Some(p) = target_tags {
                corpus = corpus.with_target_tags(&read_required(&p, m, "target_tags")?.lines())?;
            }
            if let Some(p) = source_tags {
                corpus = corpus.with_source_tags(&read_required(&p, m, "source_tags")?.lines())?;
            }
            let table = match &cfg.merges_path {
                Some(p) => Some(load_merges(Path::new(p), m)?),
                None => None,
            };
            let filtered = filter_corpus(&corpus, &cfg);
            let prepared = prepare_variant(&filtered, &cfg, &lex, table.as_ref())?;
            for d in &prepared.dropped {
                eprintln!("dropped sentence {}: {}", d.sentence + 1, d.message);
            }
            m.counters = vec![
                ("sentences".into(), corpus.len() as u64),
                ("filtered".into(), filtered.len() as u64),
                ("kept".into(), prepared.kept.len() as u64),
                ("dropped".into(), prepared.dropped.len() as u64),
                ("merges".into(), prepared.merges.len() as u64),
            ];
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    let write = |name: &str, text: String| write_output(Some(&dir.join(name)), &text);
                    write("source.repr", join_lines(&prepared.source_encoded))?;
                    write("target.repr", join_lines(&prepared.target_encoded))?;
                    write("source.bpe", join_lines(&prepared.source))?;
                    write("target.bpe", join_lines(&prepared.target))?;
                    write("merges.txt", prepared.merges.to_text())?;
                    if let Some(src_table) = &prepared.source_merges {
                        write("source.merges.txt", src_table.to_text())?;
                    }
                    let dropped: Vec<String> = prepared
                        .dropped
                        .iter()
                        .map(|d| format!("{}\t{}", d.sentence + 1, d.message))
                        .collect();
                    write("dropped.tsv", join_lines(&dropped))?;
                    Ok(Outcome {
                        output: Some(dir.join("target.bpe")),
                        manifest: Some(dir.join("manifest.txt")),
                    })
                }
                None => {
                    write_output(None, &join_lines(&prepared.target))?;
                    Ok(Outcome::default())
                }
            }
        }
        Command::BpeLearn {
            inputs,
            merges,
            protect_tags,
            output,
        } => {
            let protected = protection(protect_tags);
            let mut texts = Vec::new();
            if inputs.is_empty() {
                texts.push(read_input(None, m, "input")?);
            }
            for (i, p) in inputs.iter().enumerate() {
                texts.push(read_required(p, m, &format!("input{}", i + 1))?);
            }
            let mut counts = std::collections::HashMap::new();
            for t in &texts {
                for token in t.text.split_whitespace().filter(|t| !protected(t)) {
                    *counts.entry(token.to_owned()).or_insert(0u64) += 1;
                }
            }
            let table = learn_bpe_from_counts(&counts, merges);
            m.config = vec![
                ("bpe_merges".into(), merges.to_string()),
                ("protect_tags".into(), protect_tags.to_string()),
            ];
            m.counters = vec![
                ("merges".into(), table.len() as u64),
                ("word_types".into(), counts.len() as u64),
            ];
            write_output(output.as_deref(), &table.to_text())?;
            Ok(Outcome { output, manifest: None })
        }
        Command::BpeApply {
            input,
            merges,
            protect_tags,
            output,
        } => {
            let table = load_merges(&merges, m)?;
            let text = read_input(input.as_deref(), m, "input")?;
            let protected = protection(protect_tags);
            let lines: Vec<String> = text
                .lines()
                .par_iter()
                .map(|l| apply_bpe_line(&table, l, protected))
                .collect();
            m.config = vec![("protect_tags".into(), protect_tags.to_string())];
            write_output(output.as_deref(), &join_lines(&lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::BpeRevert { input, lenient, output } => {
            let text = read_input(input.as_deref(), m, "input")?;
            let mut lines = Vec::new();
            let mut repaired = 0u64;
            for (i, line) in text.lines().iter().enumerate() {
                let pieces: Vec<&str> = line.split_whitespace().collect();
                let words = if lenient {
                    let (words, fixed) = revert_bpe_lenient(&pieces);
                    repaired += u64::from(fixed);
                    words
                } else {
                    revert_bpe(&pieces).with_context(|| format!("line {}", i + 1))?
                };
                lines.push(words.join(" "));
            }
            m.counters = vec![("dangling_markers".into(), repaired)];
            write_output(output.as_deref(), &join_lines(&lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::Analyze {
            input,
            lexicon,
            tags,
            output,
        } => {
            let lex = load_lexicon(&lexicon, m)?;
            let text = read_input(input.as_deref(), m, "input")?;
            let tags = tags.map(|p| read_required(&p, m, "tags")).transpose()?;
            let tag_lines = tags.as_ref().map(|t| t.lines());
            let mut out = String::new();
            for (i, line) in text.lines().iter().enumerate() {
                let words: Vec<&str> = line.split_whitespace().collect();
                match &tag_lines {
                    Some(tag_lines) => {
                        let contexts: Vec<&str> = tag_lines
                            .get(i)
                            .ok_or_else(|| anyhow!("no tag line for sentence {}", i + 1))?
                            .split_whitespace()
                            .collect();
                        if contexts.len() != words.len() {
                            bail!("sentence {}: {} words but {} tags", i + 1, words.len(), contexts.len());
                        }
                        for (word, ctx) in words.iter().zip(contexts) {
                            let chosen = disambiguate(&lex.analyze(word), ctx)
                                .with_context(|| format!("sentence {}: {word}", i + 1))?;
                            out.push_str(&format!("{word}\t{}\t{}\n", chosen.lemma, chosen.tag));
                        }
                    }
                    None => {
                        for word in words {
                            let analyses = lex.analyze(word);
                            if analyses.is_empty() {
                                out.push_str(&format!("{word}\t-\t-\n"));
                            }
                            for a in analyses {
                                out.push_str(&format!("{word}\t{}\t{}\n", a.lemma, a.tag));
                            }
                        }
                    }
                }
                out.push('\n');
            }
            write_output(output.as_deref(), &out)?;
            Ok(Outcome { output, manifest: None })
        }
        Command::Generate {
            input,
            lexicon,
            report,
            output,
        } => {
            let lex = load_lexicon(&lexicon, m)?;
            let text = read_input(input.as_deref(), m, "input")?;
            let mut gen = GenerationReport::default();
            let mut lines = Vec::new();
            for (i, line) in text.lines().iter().enumerate() {
                if line.trim().is_empty() {
                    lines.push(String::new());
                    continue;
                }
                let (lemma, tag) = line
                    .split_once('\t')
                    .ok_or_else(|| anyhow!("line {}: expected lemma<TAB>tag", i + 1))?;
                let tag = Tag::parse_lexicon(tag.trim()).with_context(|| format!("line {}", i + 1))?;
                lines.push(lex.generate_with_fallback(lemma, &tag, &mut gen));
            }
            m.counters = vec![
                ("generated".into(), gen.total as u64),
                ("fallbacks".into(), gen.fallbacks as u64),
            ];
            if let Some(p) = report {
                write_output(Some(&p), &gen.to_text())?;
            }
            write_output(output.as_deref(), &join_lines(&lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::SplitCompounds { input, output } => {
            let text = read_input(input.as_deref(), m, "input")?;
            let lines: Vec<String> = text
                .lines()
                .par_iter()
                .map(|l| split_line(&l.split_whitespace().collect::<Vec<_>>()).join(" "))
                .collect();
            write_output(output.as_deref(), &join_lines(&lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::MergeCompounds { input, lexicon, output } => {
            let lex = load_lexicon(&lexicon, m)?;
            let text = read_input(input.as_deref(), m, "input")?;
            let results: Vec<_> = text
                .lines()
                .par_iter()
                .map(|l| merge_line(&l.split_whitespace().collect::<Vec<_>>(), &lex))
                .collect();
            let (mut merged, mut unknown, mut stray) = (0, 0, 0);
            let mut lines = Vec::new();
            for (tokens, stats) in results {
                merged += stats.merged;
                unknown += stats.unknown_modifiers.len();
                stray += stats.stray_separators;
                for modifier in &stats.unknown_modifiers {
                    eprintln!("modifier without linking form: {modifier}");
                }
                lines.push(tokens.join(" "));
            }
            m.counters = vec![
                ("compounds_merged".into(), merged as u64),
                ("unknown_modifiers".into(), unknown as u64),
                ("stray_separators".into(), stray as u64),
            ];
            write_output(output.as_deref(), &join_lines(&lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::Translate { input, output, backend } => {
            let text = read_input(input.as_deref(), m, "input")?;
            let (program, args) = backend.split_first().expect("clap requires a backend");
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let backend = Backend::new(program.as_str(), &args);
            m.config = vec![(
                "backend".into(),
                std::iter::once(program.as_str())
                    .chain(args.iter().copied())
                    .collect::<Vec<_>>()
                    .join(" "),
            )];
            let lines = translate_external(&text.lines(), &backend)?;
            m.counters = vec![("lines".into(), lines.len() as u64)];
            write_output(output.as_deref(), &join_lines(&lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::Postprocess {
            input,
            flags,
            report,
            output,
        } => {
            let cfg = resolve_config(&flags, config, m)?;
            let lex = pipeline_lexicon(&cfg, m)?;
            let text = read_input(input.as_deref(), m, "input")?;
            let result = postprocess(&text.lines(), cfg.mode, &lex);
            m.counters = result.report.counters();
            for item in &result.report.generation.fallback_items {
                eprintln!("fallback: {} {} ({})", item.lemma, item.tag, item.reason.as_str());
            }
            if let Some(p) = report {
                let r = &result.report;
                let text = format!("{}{}", r.generation.to_text(), r.wellformedness.to_text());
                write_output(Some(&p), &text)?;
            }
            write_output(output.as_deref(), &join_lines(&result.lines))?;
            Ok(Outcome { output, manifest: None })
        }
        Command::Bleu {
            hypothesis,
            reference,
            lowercase,
            smooth,
        } => {
            let hyp = read_input(Some(&hypothesis), m, "hypothesis")?;
            let reference = read_required(&reference, m, "reference")?;
            let opts = BleuOptions { lowercase, smooth };
            m.config = vec![
                ("lowercase".into(), lowercase.to_string()),
                ("smooth".into(), smooth.to_string()),
            ];
            let score = bleu(&hyp.lines(), &reference.lines(), opts)?;
            write_output(None, &format!("{}\n", format_bleu(score)))?;
            Ok(Outcome::default())
        }
        Command::NovelForms {
            hypothesis,
            train_target,
            source,
            reference,
            lowercase,
            output,
        } => {
            let hyp = read_input(Some(&hypothesis), m, "hypothesis")?;
            let train = read_required(&train_target, m, "train_target")?;
            let src = read_required(&source, m, "source")?;
            let reference = read_required(&reference, m, "reference")?;
            let vocab: HashSet<String> = train.text.split_whitespace().map(str::to_owned).collect();
            let report = novel_forms(&hyp.lines(), &vocab, &src.lines(), &reference.lines(), lowercase)?;
            m.config = vec![("lowercase".into(), lowercase.to_string())];
            m.counters = vec![
                ("novel_tokens".into(), report.novel_tokens as u64),
                ("novel_types".into(), report.novel_types as u64),
                ("confirmed_by_reference".into(), report.confirmed_by_reference as u64),
            ];
            write_output(output.as_deref(), &report.to_text())?;
            Ok(Outcome { output, manifest: None })
        }
        Command::Stats {
            vocab,
            fragments,
            merges,
            learn,
            top,
        } => {
            let mut out = String::new();
            if !vocab.is_empty() {
                let shared = merges.map(|p| load_merges(&p, m)).transpose()?;
                let mut corpora = Vec::new();
                for (i, path) in vocab.iter().enumerate() {
                    let input = read_required(path, m, &format!("vocab{}", i + 1))?;
                    let name = path
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_else(|| input.name.clone());
                    let lines: Vec<String> = input.lines().into_iter().map(str::to_owned).collect();
                    let table = match &shared {
                        Some(t) => t.clone(),
                        None => {
                            learn_bpe_from_counts(&morphgen::bpe::word_counts(input.text.split_whitespace()), learn)
                        }
                    };
                    corpora.push((name, lines, table));
                }
                let variants: Vec<(&str, &[String], &MergeTable)> =
                    corpora.iter().map(|(n, l, t)| (n.as_str(), l.as_slice(), t)).collect();
                out.push_str(&vocab_stats(&variants).to_table());
            }
            if let Some(path) = fragments {
                let input = read_required(&path, m, "fragments")?;
                for (piece, count) in word_end_fragment_stats(input.lines()).into_iter().take(top) {
                    out.push_str(&format!("{count}\t{piece}\n"));
                }
            }
            write_output(None, &out)?;
            Ok(Outcome::default())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morphgen: {e:#}");
            ExitCode::FAILURE
        }
    }
}
