mod common;

use common::{czech_lexicon, german_lexicon};
use morphgen::morphlex::{disambiguate, GenerationReport, MorphAnalysis, Tag};
use morphgen::tagsets::{Case, Gender, GermanFeatureSeq, Number, Strength};
use proptest::prelude::*;

#[test]
fn every_entry_round_trips() {
    for lex in [czech_lexicon(), german_lexicon()] {
        for (lemma, tag, surface) in lex.entries() {
            assert_eq!(lex.generate(lemma, tag).as_deref(), Ok(surface), "{lemma} {tag}");
            assert_eq!(lex.generate(lemma, tag), lex.generate(lemma, tag));
            let analyses = lex.analyze(surface);
            assert!(
                analyses.iter().any(|a| a.lemma == lemma && &a.tag == tag),
                "{lemma} {tag} missing from analyses of {surface}"
            );
        }
    }
}

#[test]
fn compound_lemma_spellings_agree() {
    let lex = german_lexicon();
    let tag = Tag::parse("<+NN><Masc><Dat><Sg><NA>").unwrap();
    assert_eq!(lex.generate("Meer<NN>Boden", &tag).unwrap(), "Meeresboden");
    assert_eq!(lex.generate("Meeresboden", &tag).unwrap(), "Meeresboden");
}

#[test]
fn trifft_from_the_verb_example() {
    let lex = morphgen::ParadigmLexicon::parse("treffen\t<+V><3><Sg><Pres><Ind>\ttrifft\n").unwrap();
    let tag = Tag::parse("<+V><3><Sg><Pres><Ind>").unwrap();
    assert_eq!(lex.generate("treffen", &tag).unwrap(), "trifft");
}

fn adjective(gender: Gender, case: Case, number: Number) -> MorphAnalysis {
    MorphAnalysis::new(
        "blau",
        Tag::German(GermanFeatureSeq::Nominal {
            head: "ADJ".into(),
            degree: None,
            gender,
            case,
            number,
            strength: Some(Strength::St),
        }),
    )
}

fn explicit_gender() -> impl Strategy<Value = Gender> {
    prop::sample::select(vec![Gender::Fem, Gender::Masc, Gender::Neut])
}

proptest! {
    #[test]
    fn nogend_matches_wherever_explicit_gender_does(
        g in explicit_gender(),
        ctx_gender in explicit_gender(),
        case in prop::sample::select(Case::ALL.to_vec()),
        number in prop::sample::select(Number::ALL.to_vec()),
        ctx_case in prop::sample::select(Case::ALL.to_vec()),
        ctx_number in prop::sample::select(Number::ALL.to_vec()),
    ) {
        let context = format!("ADJA-{}.{}.{}", ctx_case.as_str(), ctx_number.as_str(), ctx_gender.as_str());
        let explicit = adjective(g, case, number);
        let wildcard = adjective(Gender::NoGend, case, number);
        if disambiguate(&[explicit], &context).is_ok() {
            prop_assert!(disambiguate(&[wildcard], &context).is_ok());
        }
    }

    #[test]
    fn disambiguation_picks_a_candidate(
        picks in prop::collection::vec((explicit_gender(), prop::sample::select(Case::ALL.to_vec()), prop::sample::select(Number::ALL.to_vec())), 1..8),
        ctx in (prop::sample::select(Case::ALL.to_vec()), prop::sample::select(Number::ALL.to_vec()), explicit_gender()),
    ) {
        let candidates: Vec<MorphAnalysis> = picks.iter().map(|&(g, c, n)| adjective(g, c, n)).collect();
        let context = format!("ADJA-{}.{}.{}", ctx.0.as_str(), ctx.1.as_str(), ctx.2.as_str());
        if let Ok(chosen) = disambiguate(&candidates, &context) {
            prop_assert!(candidates.contains(&chosen));
        }
    }

    #[test]
    fn fallback_never_fails(lemma in "[a-zA-Zěščřžýáíé]{1,12}") {
        let lex = czech_lexicon();
        let tag = Tag::parse("NNFS2-----A----").unwrap();
        let mut report = GenerationReport::default();
        let out = lex.generate_with_fallback(&lemma, &tag, &mut report);
        prop_assert!(!out.is_empty());
        prop_assert_eq!(report.total, 1);
        if lemma != "pizza" {
            prop_assert_eq!(out, lemma);
            prop_assert_eq!(report.fallbacks, 1);
        }
    }
}
