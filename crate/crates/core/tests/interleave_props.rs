use morphgen::interleave::{decode, encode, DecodedPair, Mode};
use morphgen::morphlex::{MorphAnalysis, Tag};
use morphgen::tagsets::{GermanFeatureSeq, PositionalTag};
use proptest::prelude::*;

fn czech_analysis() -> impl Strategy<Value = MorphAnalysis> {
    ("[A-Z][A-Z0-9:-]{14}", "[a-zěščřžýáíéů]{1,10}", "[a-zěščřžýáíéů]{1,10}").prop_map(|(tag, lemma, surface)| {
        MorphAnalysis::new(lemma, Tag::Czech(PositionalTag::parse(&tag).unwrap())).with_surface(surface)
    })
}

fn german_analysis() -> impl Strategy<Value = MorphAnalysis> {
    let inflected = (
        "[A-Za-zäöü]{1,10}",
        prop::sample::select(vec![
            "<+NN><Fem><Acc><Sg><NA>",
            "<+ADJ><Pos><NoGend><Dat><Sg><Wk>",
            "<+ART><Masc><Dat><Sg><St>",
            "<+V><3><Sg><Pres><Ind>",
            "<+V><PPast>",
        ]),
    )
        .prop_map(|(stem, feats)| MorphAnalysis::new(stem, Tag::parse(feats).unwrap()));
    let bare = (
        "[a-zäöü,.]{1,8}",
        prop::sample::select(vec!["KON", "ADV", "APPR-Dat", "$"]),
    )
        .prop_map(|(w, t)| MorphAnalysis::new(w, Tag::German(GermanFeatureSeq::Bare(t.into()))));
    prop_oneof![inflected, bare]
}

fn expected_pairs(analyses: &[MorphAnalysis], mode: Mode) -> Vec<DecodedPair> {
    analyses
        .iter()
        .map(|a| DecodedPair {
            tag: a.tag.clone(),
            word: match mode {
                Mode::Serialization => a.surface.clone().unwrap(),
                _ => a.lemma.clone(),
            },
        })
        .collect()
}

proptest! {
    #[test]
    fn czech_round_trip(analyses in prop::collection::vec(czech_analysis(), 0..20)) {
        for mode in [Mode::Morphgen, Mode::Serialization] {
            let sentence = encode(&analyses, mode);
            prop_assert_eq!(sentence.tokens.len(), 2 * analyses.len());
            prop_assert_eq!(decode(&sentence.tokens, mode).unwrap(), expected_pairs(&analyses, mode));
        }
    }

    #[test]
    fn german_round_trip(analyses in prop::collection::vec(german_analysis(), 0..20)) {
        let sentence = encode(&analyses, Mode::GermanStemmed);
        prop_assert_eq!(decode(&sentence.tokens, Mode::GermanStemmed).unwrap(), expected_pairs(&analyses, Mode::GermanStemmed));
    }

    #[test]
    fn adjacent_tags_or_words_are_rejected(analyses in prop::collection::vec(czech_analysis(), 2..10), at in 0usize..8) {
        let mut tokens = encode(&analyses, Mode::Morphgen).tokens;
        let i = (2 * at) % tokens.len();
        tokens.swap(i, i + 1);
        prop_assert!(decode(&tokens, Mode::Morphgen).is_err());
    }
}
