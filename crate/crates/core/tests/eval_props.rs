use std::collections::HashSet;

use morphgen::eval::{bleu, novel_forms, BleuOptions};
use proptest::prelude::*;

fn sentence() -> impl Strategy<Value = String> {
    let words = vec!["the", "The", "cat", "Cat", "sat", "on", "a", "mat", "dog", "."];
    prop::collection::vec(prop::sample::select(words), 1..12).prop_map(|w| w.join(" "))
}

fn corpus() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::vec((sentence(), sentence()), 1..10)
}

proptest! {
    #[test]
    fn permutation_does_not_change_bleu(pairs in corpus(), seed in any::<u64>()) {
        let (h, r): (Vec<String>, Vec<String>) = pairs.iter().cloned().unzip();
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        let k = seed as usize % order.len();
        order.rotate_left(k);
        order.reverse();
        let hp: Vec<&String> = order.iter().map(|&i| &h[i]).collect();
        let rp: Vec<&String> = order.iter().map(|&i| &r[i]).collect();
        for opts in [BleuOptions::default(), BleuOptions { lowercase: true, smooth: true }] {
            let a = bleu(&h, &r, opts).unwrap();
            let b = bleu(&hp, &rp, opts).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn identical_sides_score_100(h in prop::collection::vec(sentence(), 1..10)) {
        prop_assert!((bleu(&h, &h, BleuOptions::default()).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn lowercase_flag_equals_lowering_inputs(pairs in corpus()) {
        let (h, r): (Vec<String>, Vec<String>) = pairs.into_iter().unzip();
        let folded = bleu(&h, &r, BleuOptions { lowercase: true, smooth: false }).unwrap();
        let hl: Vec<String> = h.iter().map(|s| s.to_lowercase()).collect();
        let rl: Vec<String> = r.iter().map(|s| s.to_lowercase()).collect();
        let exact = bleu(&hl, &rl, BleuOptions::default()).unwrap();
        prop_assert!((folded - exact).abs() < 1e-9);
    }

    #[test]
    fn novel_counts_are_additive(a in prop::collection::vec((sentence(), sentence(), sentence()), 1..8),
                                 b in prop::collection::vec((sentence(), sentence(), sentence()), 1..8)) {
        let vocab: HashSet<String> = ["the", "cat"].iter().map(|s| s.to_string()).collect();
        let report = |rows: &[(String, String, String)]| {
            let o: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
            let s: Vec<&str> = rows.iter().map(|r| r.1.as_str()).collect();
            let f: Vec<&str> = rows.iter().map(|r| r.2.as_str()).collect();
            novel_forms(&o, &vocab, &s, &f, false).unwrap()
        };
        let (ra, rb) = (report(&a), report(&b));
        let joined: Vec<_> = a.iter().chain(&b).cloned().collect();
        let rj = report(&joined);
        prop_assert_eq!(rj.novel_tokens, ra.novel_tokens + rb.novel_tokens);
        prop_assert!(rj.novel_types <= ra.novel_types + rb.novel_types);
        prop_assert!(rj.novel_types <= rj.novel_tokens);
        prop_assert!(rj.confirmed_by_reference <= rj.novel_types);
        let mut reversed = joined.clone();
        reversed.reverse();
        let rr = report(&reversed);
        prop_assert_eq!((rr.novel_tokens, rr.novel_types, rr.confirmed_by_reference),
                        (rj.novel_tokens, rj.novel_types, rj.confirmed_by_reference));
    }
}
