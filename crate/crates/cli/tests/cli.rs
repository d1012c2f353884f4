use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const PIZZA_SURFACE: &str = "existují miliony druhů pizzy .";
const PIZZA_MORPHGEN: &str =
    "VB-P---3P-AA--- existovat NNIP1-----A---- milión NNIP2-----A---- druh NNFS2-----A---- pizza Z:------------- .";

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn morphgen(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_morphgen"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let out = morphgen(args, stdin.as_bytes());
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn postprocess_pizza_line_from_stdin() {
    let lex = data("cz_toy.tsv");
    let out = ok(
        &["postprocess", "--mode", "morphgen", "--lexicon", lex.to_str().unwrap()],
        &format!("{PIZZA_MORPHGEN}\n"),
    );
    assert_eq!(out, format!("{PIZZA_SURFACE}\n"));
}

#[test]
fn prepare_pizza_sentence() {
    let dir = TempDir::new().unwrap();
    let src = write(&dir, "src.txt", "there are a million different kinds of pizza .\n");
    let tgt = write(&dir, "tgt.txt", &format!("{PIZZA_SURFACE}\n"));
    let lex = data("cz_toy.tsv");
    let args = [
        "prepare",
        "--mode",
        "morphgen",
        "--lexicon",
        lex.to_str().unwrap(),
        "--bpe-merges",
        "0",
        "--source",
        &src,
        "--target",
        &tgt,
    ];
    assert_eq!(ok(&args, ""), format!("{PIZZA_MORPHGEN}\n"));
}

#[test]
fn prepare_writes_outputs_and_manifest() {
    let dir = TempDir::new().unwrap();
    let src = write(&dir, "src.txt", "a b c\nd e f\n");
    let tgt = write(&dir, "tgt.txt", "existují pizzy .\nmiliony druhů Hvanda .\n");
    let lex = data("cz_toy.tsv");
    let out_dir = dir.path().join("out");
    let args = [
        "prepare",
        "--lexicon",
        lex.to_str().unwrap(),
        "--bpe-merges",
        "5",
        "--source",
        &src,
        "--target",
        &tgt,
        "--out-dir",
        out_dir.to_str().unwrap(),
    ];
    let out = morphgen(&args, b"");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Hvanda"));
    for name in [
        "source.repr",
        "target.repr",
        "source.bpe",
        "target.bpe",
        "merges.txt",
        "dropped.tsv",
        "manifest.txt",
    ] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    let manifest = fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("command=prepare"));
    assert!(manifest.contains("counter.dropped=1"));
    assert!(manifest.contains("config.bpe_merges=5"));
    assert!(manifest
        .lines()
        .any(|l| l.starts_with("input.target=") && l.len() == "input.target=".len() + 64));
    assert_eq!(
        fs::read_to_string(out_dir.join("merges.txt")).unwrap().lines().count(),
        5
    );
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "run.cfg",
        "# run settings\nmode=serialization\nmaxlen=7\nminlen=2\n",
    );
    let manifest = dir.path().join("m.txt");
    let lex = data("cz_toy.tsv");
    let out = ok(
        &[
            "postprocess",
            "--config",
            &config,
            "--maxlen",
            "9",
            "--lexicon",
            lex.to_str().unwrap(),
            "--manifest",
            manifest.to_str().unwrap(),
        ],
        "NNFS2-----A---- pizzy\n",
    );
    assert_eq!(out, "pizzy\n");
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("config.mode=serialization"));
    assert!(text.contains("config.maxlen=9"));
    assert!(text.contains("config.minlen=2"));
}

#[test]
fn manifest_can_be_reused_as_config() {
    let dir = TempDir::new().unwrap();
    let lex = data("cz_toy.tsv");
    let output = dir.path().join("out.txt");
    ok(
        &[
            "postprocess",
            "--mode",
            "serialization",
            "--lexicon",
            lex.to_str().unwrap(),
            "-o",
            output.to_str().unwrap(),
        ],
        "NNFS2-----A---- pizzy\n",
    );
    let manifest = dir.path().join("out.txt.manifest");
    let again = ok(
        &["postprocess", "--config", manifest.to_str().unwrap()],
        "NNFS2-----A---- pizzy\n",
    );
    assert_eq!(fs::read_to_string(&output).unwrap(), again);
}

#[test]
fn bleu_of_identical_files() {
    let dir = TempDir::new().unwrap();
    let hyp = write(&dir, "hyp.txt", "The cat sat on the mat .\nA dog .\n");
    let reference = write(&dir, "ref.txt", "the cat sat on the mat .\na dog .\n");
    assert_eq!(ok(&["bleu", "--lowercase", &hyp, &reference], ""), "100.00\n");
    assert_eq!(ok(&["bleu", &hyp, &hyp], ""), "100.00\n");
    assert_ne!(ok(&["bleu", &hyp, &reference], ""), "100.00\n");
    assert_eq!(
        ok(&["bleu", "-", &hyp], "The cat sat on the mat .\nA dog .\n"),
        "100.00\n"
    );
}

#[test]
fn vocabulary_table() {
    let dir = TempDir::new().unwrap();
    let corpora = [
        ("surface.txt", "Häuser Hauses Haus Häusern\nHaus Markt\n"),
        (
            "morph.txt",
            "Haus <+NN><Neut><Nom><Pl><NA> Haus <+NN><Neut><Gen><Sg><NA>\n",
        ),
        ("morph-split.txt", "Haus §§<NN>§§ Markt <+NN><Masc><Nom><Sg><NA>\n"),
    ];
    let paths: Vec<String> = corpora.iter().map(|(n, t)| write(&dir, n, t)).collect();
    let mut args = vec!["stats", "--learn", "10", "--vocab"];
    args.extend(paths.iter().map(String::as_str));
    let table = ok(&args, "");
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(table.lines().next().unwrap().contains("vocabulary size w/ BPE"));
    for ((name, text), row) in corpora.iter().zip(rows) {
        let distinct: HashSet<&str> = text.split_whitespace().collect();
        let cols: Vec<&str> = row.split('|').map(str::trim).collect();
        assert_eq!(cols[0], *name);
        assert_eq!(cols[1].parse::<usize>().unwrap(), distinct.len());
    }
}

#[test]
fn word_end_fragments() {
    let out = ok(&["stats", "--fragments", "-"], "");
    assert_eq!(out, "");
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "seg.txt", "piz@@ zy Hau@@ ses Wol@@ ken piz@@ za mo@@ zy\n");
    let out = ok(&["stats", "--fragments", &path, "--top", "2"], "");
    assert_eq!(out, "2\tzy\n1\tken\n");
}

#[test]
fn bpe_commands_round_trip() {
    let dir = TempDir::new().unwrap();
    let text = "lower lowest newer newest low low\nwidest wider\n";
    let corpus = write(&dir, "corpus.txt", text);
    let merges = dir.path().join("merges.txt");
    ok(&["bpe-learn", "-n", "12", &corpus, "-o", merges.to_str().unwrap()], "");
    assert_eq!(fs::read_to_string(&merges).unwrap().lines().count(), 12);
    let segmented = ok(&["bpe-apply", "--merges", merges.to_str().unwrap(), &corpus], "");
    assert!(segmented.contains("@@"));
    assert_eq!(ok(&["bpe-revert"], &segmented), text);
}

#[test]
fn protected_tags_survive_segmentation() {
    let dir = TempDir::new().unwrap();
    let line = "NNFS2-----A---- pizza NNFS2-----A---- pizza Z:------------- .\n";
    let corpus = write(&dir, "c.txt", line);
    let merges = dir.path().join("m.txt");
    ok(
        &[
            "bpe-learn",
            "-n",
            "200",
            "--protect-tags",
            &corpus,
            "-o",
            merges.to_str().unwrap(),
        ],
        "",
    );
    let out = ok(
        &["bpe-apply", "--protect-tags", "--merges", merges.to_str().unwrap()],
        "NNFS2-----A---- pizzy\n",
    );
    assert!(out.starts_with("NNFS2-----A---- "));
}

#[test]
fn dangling_marker_is_an_error_unless_lenient() {
    let out = morphgen(&["bpe-revert"], "piz@@ zy mi@@\n".as_bytes());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(ok(&["bpe-revert", "--lenient"], "piz@@ zy mi@@\n"), "pizzy mi\n");
}

#[test]
fn invalid_utf8_aborts() {
    let out = morphgen(&["bpe-revert"], b"piz\xffzy\n");
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid UTF-8"));
    assert!(out.stdout.is_empty());
}

#[test]
fn analyze_and_disambiguate() {
    let lex = data("de_toy.tsv");
    let lex = lex.to_str().unwrap();
    let all = ok(&["analyze", "--lexicon", lex], "vulkanischen\n");
    assert_eq!(all.lines().filter(|l| !l.is_empty()).count(), 9);
    let dir = TempDir::new().unwrap();
    let tags = write(&dir, "tags.txt", "ADJA-Dat.Sg.Fem NN-Dat.Sg.Masc\n");
    let picked = ok(
        &["analyze", "--lexicon", lex, "--tags", &tags],
        "vulkanischen Meeresboden\n",
    );
    assert_eq!(
        picked,
        "vulkanischen\tvulkanisch\t<+ADJ><Pos><NoGend><Dat><Sg><Wk>\nMeeresboden\tMeer<NN>Boden\t<+NN><Masc><Dat><Sg><NA>\n\n"
    );
}

#[test]
fn generate_with_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.txt");
    let lex = data("de_toy.tsv");
    let out = ok(
        &[
            "generate",
            "--lexicon",
            lex.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ],
        "treten\t<+V><3><Sg><Pres><Ind>\nBraper\t<+NN><Masc><Nom><Sg><NA>\nMeer<NN>Boden\t<+NN><Masc><Dat><Sg><NA>\n",
    );
    assert_eq!(out, "tritt\nBraper\nMeeresboden\n");
    let report = fs::read_to_string(report).unwrap();
    assert!(report.starts_with("total\t3\nfallbacks\t1\nunknown-lemma\t1\n"));
    assert!(report.contains("fallback\tBraper\t<+NN><Masc><Nom><Sg><NA>\tunknown-lemma"));
}

#[test]
fn compound_commands() {
    let lex = data("de_toy.tsv");
    let split = ok(
        &["split-compounds"],
        "an[APPR-Dat] Meer<NN>Boden <+NN><Masc><Dat><Sg><NA>\n",
    );
    assert_eq!(split, "an[APPR-Dat] Meer §§<NN>§§ Boden <+NN><Masc><Dat><Sg><NA>\n");
    let merged = ok(&["merge-compounds", "--lexicon", lex.to_str().unwrap()], &split);
    assert_eq!(merged, "an[APPR-Dat] Meeresboden <+NN><Masc><Dat><Sg><NA>\n");
}

#[test]
fn german_stemmed_postprocess() {
    let lex = data("de_toy.tsv");
    let out = ok(
        &[
            "postprocess",
            "--mode",
            "german-stemmed-split",
            "--lexicon",
            lex.to_str().unwrap(),
        ],
        "an[APPR-Dat] die<Def> <+ART><Masc><Dat><Sg><St> Meer §§<NN>§§ Bo@@ den <+NN><Masc><Dat><Sg><NA>\n",
    );
    assert_eq!(out, "an dem Meeresboden\n");
}

#[test]
fn translate_through_backends() {
    assert_eq!(ok(&["translate", "--", "cat"], "a b\nc\n"), "a b\nc\n");
    let out = morphgen(&["translate", "--", "head", "-n", "1"], b"a\nb\n");
    assert!(!out.status.success());
    let out = morphgen(&["translate", "--", "false"], b"a\n");
    assert!(!out.status.success());
}

#[test]
fn novel_form_report() {
    let dir = TempDir::new().unwrap();
    let hyp = write(&dir, "hyp.txt", "die Katzen sehen Hvanda\n");
    let train = write(&dir, "train.txt", "die Katze sieht\n");
    let src = write(&dir, "src.txt", "the cats see Hvanda\n");
    let reference = write(&dir, "ref.txt", "die Katzen sehen ihn\n");
    let out = ok(
        &[
            "novel-forms",
            "--hypothesis",
            &hyp,
            "--train-target",
            &train,
            "--source",
            &src,
            "--reference",
            &reference,
        ],
        "",
    );
    assert!(out.starts_with("novel_tokens\t2\nnovel_types\t2\nconfirmed_by_reference\t2\n"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let words = ["existují", "miliony", "druhů", "pizzy", "pizza", "druh", "."];
    let targets: Vec<String> = (0..300)
        .map(|i| {
            (0..8)
                .map(|j| words[(i * 7 + j * 3 + i / 5) % words.len()])
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let sources: Vec<String> = (0..300).map(|i| format!("sentence {i}")).collect();
    let src = write(&dir, "src.txt", &(sources.join("\n") + "\n"));
    let tgt = write(&dir, "tgt.txt", &(targets.join("\n") + "\n"));
    let lex = data("cz_toy.tsv");
    let run = |jobs: &str| {
        ok(
            &[
                "--jobs",
                jobs,
                "prepare",
                "--lexicon",
                lex.to_str().unwrap(),
                "--bpe-merges",
                "40",
                "--sample-size",
                "200",
                "--source",
                &src,
                "--target",
                &tgt,
            ],
            "",
        )
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one.lines().count(), 200);
    let back = ok(
        &["--jobs", "3", "postprocess", "--lexicon", lex.to_str().unwrap()],
        &one,
    );
    let back: HashSet<&str> = back.lines().collect();
    assert!(back.iter().all(|l| targets.iter().any(|t| t == l)));
}

#[test]
fn missing_lexicon_is_reported() {
    let out = morphgen(&["postprocess", "--mode", "morphgen"], b"x\n");
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--lexicon"));
    let out = morphgen(&["postprocess", "--lexicon", "/nonexistent/lex.tsv"], b"x\n");
    assert!(!out.status.success());
}
