use std::collections::HashMap;

use proptest::prelude::*;
use qcpg_core::evaluation::{bleu, corpus_self_bleu, evaluate_systems, kendall_tau, self_bleu, EvalError, SystemOutputs};
use qcpg_core::quality::{quality_batch, AnalyzedSentence};
use qcpg_core::semantic::SemanticScorer;
use qcpg_core::tree_metrics::parse_bracketed;

/// Tau-b from an explicit scan of all pairs.
fn brute_force_tau(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mut c, mut d, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let (dx, dy) = (x[i] - x[j], y[i] - y[j]);
            if dx == 0.0 && dy == 0.0 {
                continue;
            } else if dx == 0.0 {
                tx += 1;
            } else if dy == 0.0 {
                ty += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    let denom = (((c + d + tx) * (c + d + ty)) as f64).sqrt();
    (denom > 0.0).then(|| (c - d) as f64 / denom)
}

/// BLEU-4 computed with n-gram strings as map keys.
fn reference_bleu(candidate: &str, references: &[&str]) -> f64 {
    let c: Vec<&str> = candidate.split_whitespace().collect();
    if c.is_empty() {
        return 0.0;
    }
    let grams = |t: &[&str], n: usize| {
        let mut m: HashMap<String, usize> = HashMap::new();
        for w in t.windows(n) {
            *m.entry(w.join(" ")).or_default() += 1;
        }
        m
    };
    let refs: Vec<Vec<&str>> = references.iter().map(|r| r.split_whitespace().collect()).collect();
    let mut logp = 0.0;
    for n in 1..=4 {
        let cg = grams(&c, n);
        let total: usize = cg.values().sum();
        let mut clipped = 0;
        for (g, k) in &cg {
            let max_ref = refs.iter().map(|r| grams(r, n).get(g).copied().unwrap_or(0)).max().unwrap();
            clipped += (*k).min(max_ref);
        }
        let p = match (clipped, n) {
            (0, 1) => return 0.0,
            (0, _) => 1.0 / (total as f64 + 1.0),
            _ => clipped as f64 / total as f64,
        };
        logp += p.ln() / 4.0;
    }
    let mut lens: Vec<usize> = refs.iter().map(Vec::len).collect();
    lens.sort_by_key(|&l| (l.abs_diff(c.len()), l));
    let r = lens[0] as f64;
    let bp = if (c.len() as f64) < r { (1.0 - r / c.len() as f64).exp() } else { 1.0 };
    100.0 * bp * logp.exp()
}

fn permutations(v: Vec<f64>) -> Vec<Vec<f64>> {
    if v.len() <= 1 {
        return vec![v];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.clone();
        let head = rest.remove(i);
        for mut p in permutations(rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

#[test]
fn kendall_matches_pair_enumeration_on_small_permutations() {
    for n in 2..=6 {
        let x: Vec<f64> = (0..n).map(f64::from).collect();
        for y in permutations(x.clone()) {
            let expected = brute_force_tau(&x, &y).unwrap();
            assert!((kendall_tau(&x, &y).unwrap() - expected).abs() < 1e-12);
        }
    }
    // Four pairs concordant and one discordant out of six, no ties: (5 - 1) / 6.
    let tau = kendall_tau(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
    assert_eq!(tau, brute_force_tau(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap());
}

#[test]
fn bleu_hand_computed() {
    // p1..p4 = 3/3, 2/2, 1/1, smoothed 1/1; c = 3 < r = 4.
    let expected = 100.0 * (1.0f64 - 4.0 / 3.0).exp();
    assert!((bleu("the cat sat", &["the cat sat down"]).unwrap() - expected).abs() < 1e-12);
    assert!((bleu("the cat sat", &["the cat sat down"]).unwrap() - 71.653131).abs() < 1e-6);
    assert_eq!(bleu("a b", &["c d"]).unwrap(), 0.0);
}

#[test]
fn evaluate_systems_matches_recomputation() {
    let tree = |s: &str| parse_bracketed(s).unwrap();
    let sources: Vec<AnalyzedSentence> = vec![
        AnalyzedSentence::new("the dog barked", &tree("(S (NP (DT the) (NN dog)) (VP (VBD barked)))")),
        AnalyzedSentence::new("a cat sat", &tree("(S (NP (DT a) (NN cat)) (VP (VBD sat)))")),
    ];
    let outputs = vec![
        AnalyzedSentence::new("the hound howled", &tree("(S (NP (DT the) (NN hound)) (VP (VBD howled)))")),
        AnalyzedSentence::new("it was a cat that sat", &tree("(S (NP (PRP it)) (VP (VBD was) (NP (DT a) (NN cat))))")),
    ];
    let scorer = SemanticScorer::default();
    let systems = vec![
        SystemOutputs { name: "copy".into(), outputs: sources.clone() },
        SystemOutputs { name: "model".into(), outputs: outputs.clone() },
        SystemOutputs { name: "model2".into(), outputs: outputs.clone() },
    ];
    let refs = vec![vec!["the hound howled".to_string()], vec!["a cat sat down".to_string()]];
    let report = evaluate_systems(&systems, &sources, Some(&refs), &scorer).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert_eq!(report.rows[0].self_bleu, 100.0);
    assert_eq!(report.rows[0].quality.syn, 0.0);
    assert_eq!(report.rows[1], renamed(&report.rows[2], "model"));

    let pairs: Vec<_> = sources.iter().zip(&outputs).collect();
    let qs = quality_batch(&scorer, &pairs).unwrap();
    let row = &report.rows[1];
    for d in 0..3 {
        let mean = (qs[0].to_array()[d] + qs[1].to_array()[d]) / 2.0;
        assert!((row.quality.to_array()[d] - mean).abs() < 1e-12);
    }
    let sb = (self_bleu(outputs[0].text(), sources[0].text()) + self_bleu(outputs[1].text(), sources[1].text())) / 2.0;
    assert_eq!(row.self_bleu, sb);
    let b = (reference_bleu(outputs[0].text(), &["the hound howled"]) + reference_bleu(outputs[1].text(), &["a cat sat down"])) / 2.0;
    assert!((row.bleu.unwrap() - b).abs() < 1e-9);
    assert_eq!(row.n, 2);

    let tsv = report.to_tsv();
    assert!(tsv.starts_with("system\tsem\tsyn\tlex\tself_bleu\tbleu\tn\n"));
    assert!(tsv.lines().nth(1).unwrap().starts_with("copy\t"));
    assert!(evaluate_systems(&[], &sources, None, &scorer).unwrap().rows.is_empty());
    let short = vec![SystemOutputs { name: "short".into(), outputs: outputs[..1].to_vec() }];
    assert!(matches!(evaluate_systems(&short, &sources, None, &scorer), Err(EvalError::LengthMismatch { .. })));
}

fn renamed(row: &qcpg_core::SystemRow, name: &str) -> qcpg_core::SystemRow {
    qcpg_core::SystemRow { system: name.to_string(), ..row.clone() }
}

#[test]
fn self_bleu_extremes() {
    assert_eq!(corpus_self_bleu(&[("a b c d", "a b c d"), ("x y", "x y")]).unwrap(), 100.0);
    assert_eq!(corpus_self_bleu(&[("a b", "c d"), ("e", "f g")]).unwrap(), 0.0);
}

fn arb_words() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), 0..10).prop_map(|w| w.join(" "))
}

proptest! {
    #[test]
    fn bleu_matches_reference_implementation(c in arb_words(), r1 in arb_words(), r2 in arb_words()) {
        let got = bleu(&c, &[r1.as_str(), r2.as_str()]).unwrap();
        let want = reference_bleu(&c, &[&r1, &r2]);
        prop_assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        prop_assert!((0.0..=100.0 + 1e-9).contains(&got));
    }

    #[test]
    fn bleu_of_self_is_100(s in "[a-e]{1,3}( [a-e]{1,3}){0,8}") {
        prop_assert_eq!(bleu(&s, &[s.as_str()]).unwrap(), 100.0);
    }

    #[test]
    fn broken_bigrams_score_lower(words in prop::collection::hash_set("[a-z]{2,5}", 2..8)) {
        let words: Vec<String> = words.into_iter().collect();
        let s = words.join(" ");
        let mut rev = words.clone();
        rev.reverse();
        prop_assert!(self_bleu(&rev.join(" "), &s) < self_bleu(&s, &s));
    }

    #[test]
    fn kendall_matches_brute_force_with_ties(
        x in prop::collection::vec(0u8..4, 2..12),
        y_seed in prop::collection::vec(0u8..4, 12),
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let y: Vec<f64> = y_seed[..x.len()].iter().map(|&v| f64::from(v)).collect();
        match (kendall_tau(&x, &y), brute_force_tau(&x, &y)) {
            (Ok(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (Err(EvalError::AllTied), None) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn kendall_reversal_is_antisymmetric(x in prop::collection::hash_set(0i32..1000, 2..20)) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let y: Vec<f64> = (0..x.len()).map(|i| i as f64).collect();
        let rev: Vec<f64> = y.iter().rev().copied().collect();
        prop_assert!((kendall_tau(&x, &y).unwrap() + kendall_tau(&x, &rev).unwrap()).abs() < 1e-12);
        prop_assert_eq!(kendall_tau(&x, &x).unwrap(), 1.0);
    }
}
