#![allow(dead_code)]

use std::path::PathBuf;

use morphgen::morphlex::{ParadigmLexicon, Tag};
use morphgen::tagsets::{Gender, GermanFeatureSeq};
use rand::seq::SliceRandom;
use rand::Rng;

pub const PIZZA_SOURCE: &str = "there are a million different kinds of pizza .";
pub const PIZZA_SURFACE: &str = "existují miliony druhů pizzy .";
pub const PIZZA_MORPHGEN: &str =
    "VB-P---3P-AA--- existovat NNIP1-----A---- milión NNIP2-----A---- druh NNFS2-----A---- pizza Z:------------- .";
pub const PIZZA_SERIALIZATION: &str =
    "VB-P---3P-AA--- existují NNIP1-----A---- miliony NNIP2-----A---- druhů NNFS2-----A---- pizzy Z:------------- .";

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

pub fn czech_lexicon() -> ParadigmLexicon {
    ParadigmLexicon::parse(&read_data("cz_toy.tsv")).unwrap()
}

pub fn german_lexicon() -> ParadigmLexicon {
    ParadigmLexicon::parse(&read_data("de_toy.tsv")).unwrap()
}

/// One word of the cloud sentence: surface, parse tag, stemmed analysis.
pub struct CloudRow {
    pub surface: String,
    pub context: String,
    pub analysis: String,
}

pub fn cloud_rows() -> Vec<CloudRow> {
    read_data("table1.tsv")
        .lines()
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            CloudRow {
                surface: cols[0].into(),
                context: cols[1].into(),
                analysis: cols[2].into(),
            }
        })
        .collect()
}

/// A parse tag under which `tag` is a compatible analysis.
pub fn context_for(tag: &GermanFeatureSeq) -> String {
    match tag {
        GermanFeatureSeq::Nominal {
            head,
            gender,
            case,
            number,
            ..
        } => {
            let pos = match head.as_str() {
                "NN" => "NN",
                "ADJ" => "ADJA",
                "ART" => "ART",
                "NPROP" => "NE",
                other => panic!("no parse tag for head {other}"),
            };
            let gender = if *gender == Gender::NoGend {
                Gender::Fem
            } else {
                *gender
            };
            format!("{pos}-{}.{}.{}", case.as_str(), number.as_str(), gender.as_str())
        }
        GermanFeatureSeq::VerbalFinite { number, .. } => format!("VVFIN-{}", number.as_str()),
        GermanFeatureSeq::Participle => "VVPP".into(),
        GermanFeatureSeq::Infinitive => "VVINF".into(),
        GermanFeatureSeq::Bare(_) => "ADV".into(),
    }
}

const BARE: [(&str, &str); 6] = [
    ("und", "KON"),
    ("hier", "ADV"),
    ("von", "APPR-Dat"),
    ("man", "PIS-Nom.Sg"),
    (",", "$,"),
    (".", "$."),
];

/// Random sentences whose every word the lexicon covers. German sentences
/// come with parse tags, Czech ones without.
pub fn synthetic_corpus<R: Rng>(
    lex: &ParadigmLexicon,
    sentences: usize,
    rng: &mut R,
) -> (Vec<String>, Vec<String>, Vec<String>) {
    let words: Vec<(String, Option<String>)> = lex
        .entries()
        .map(|(_, tag, surface)| match tag {
            Tag::German(g) => (surface.to_owned(), Some(context_for(g))),
            Tag::Czech(_) => (surface.to_owned(), None),
        })
        .collect();
    let german = words.iter().any(|(_, c)| c.is_some());
    let (mut sources, mut targets, mut tags) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..sentences {
        let len = rng.gen_range(5..=12);
        let mut line = Vec::new();
        let mut line_tags = Vec::new();
        for _ in 0..len {
            if german && rng.gen_bool(0.2) {
                let (w, t) = BARE.choose(rng).unwrap();
                line.push(w.to_string());
                line_tags.push(t.to_string());
            } else {
                let (w, t) = words.choose(rng).unwrap();
                line.push(w.clone());
                line_tags.push(t.clone().unwrap_or_default());
            }
        }
        sources.push(format!("source sentence {i} with {len} words"));
        targets.push(line.join(" "));
        tags.push(line_tags.join(" "));
    }
    (sources, targets, tags)
}
