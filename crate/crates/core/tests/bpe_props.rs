use morphgen::bpe::{apply_bpe, apply_bpe_line, learn_bpe, revert_bpe, MergeTable, CONTINUATION};
use morphgen::interleave::is_protected_token;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[a-zěščřžýáíéäöüß0-9.,:-]{1,14}"
}

fn random_table() -> impl Strategy<Value = MergeTable> {
    prop::collection::vec(("[a-e]{1,3}", "[a-e]{1,2}"), 0..40).prop_map(|pairs| {
        let mut seen = std::collections::HashSet::new();
        let unique: Vec<_> = pairs.into_iter().filter(|p| seen.insert(p.clone())).collect();
        MergeTable::from_pairs(unique).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn segmentation_is_lossless(table in random_table(), words in prop::collection::vec(word(), 40)) {
        for w in &words {
            let pieces = apply_bpe(&table, w);
            let stripped: String = pieces.iter().map(|p| p.strip_suffix(CONTINUATION).unwrap_or(p)).collect();
            prop_assert_eq!(&stripped, w);
            prop_assert_eq!(revert_bpe(&pieces).unwrap(), vec![w.clone()]);
        }
    }

    #[test]
    fn learned_tables_are_lossless_and_deterministic(corpus in prop::collection::vec(word(), 1..60), n in 0usize..80) {
        let a = learn_bpe(corpus.iter().map(String::as_str), n);
        let b = learn_bpe(corpus.iter().map(String::as_str), n);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.len() <= n);
        for w in &corpus {
            prop_assert_eq!(revert_bpe(&apply_bpe(&a, w)).unwrap(), vec![w.clone()]);
        }
    }

    #[test]
    fn budgets_are_prefixes(corpus in prop::collection::vec(word(), 1..40), k in 0usize..=50, extra in 0usize..=50) {
        let n = (k + extra).min(50);
        let k = k.min(n);
        let small = learn_bpe(corpus.iter().map(String::as_str), k);
        let large = learn_bpe(corpus.iter().map(String::as_str), n);
        prop_assert_eq!(small.merges(), &large.merges()[..small.len()]);
        prop_assert_eq!(small.len(), k.min(large.len()));
    }

    #[test]
    fn protected_tags_stay_whole(words in prop::collection::vec("[a-z]{1,8}", 1..10), n in 0usize..200) {
        let tags = ["NNFS2-----A----", "Z:-------------", "<+NN><Fem><Acc><Sg><NA>", "§§<NN>§§"];
        let mut line = Vec::new();
        for (i, w) in words.iter().enumerate() {
            line.push(tags[i % tags.len()].to_owned());
            line.push(w.clone());
        }
        let line = line.join(" ");
        let table = learn_bpe(line.split(' '), n);
        let out = apply_bpe_line(&table, &line, is_protected_token);
        for tag in tags.iter().take(words.len()) {
            prop_assert!(out.split(' ').any(|t| t == *tag));
        }
    }
}
