use std::collections::HashSet;

use proptest::prelude::*;
use qcpg_core::dataset::{
    clusters_to_jsonl, extract_pairs, leaked_clusters, pairs_to_tsv, partition_clusters, read_clusters,
    read_pairs_tsv, split_clusters, Cluster, DatasetError, PairMode, SplitSizes,
};

fn corpus(sizes: &[usize]) -> Vec<Cluster> {
    sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| Cluster {
            cluster_id: format!("c{i}"),
            sentences: (0..n).map(|k| format!("sentence {k} of cluster {i}")).collect(),
            trees: None,
        })
        .collect()
}

fn recount(clusters: &[Cluster], mode: PairMode) -> usize {
    clusters
        .iter()
        .map(|c| {
            let n = c.sentences.len();
            match mode {
                PairMode::AllOrdered => n * n.saturating_sub(1),
                PairMode::AllUnordered => (0..n).map(|i| n - 1 - i).sum(),
                PairMode::StarFirst => n.saturating_sub(1),
            }
        })
        .sum()
}

#[test]
fn quotas_are_met_and_counts_agree() {
    let clusters = corpus(&[3; 10]);
    let sizes = SplitSizes { train: 18, dev: 6, test: 6 };
    let part = partition_clusters(&clusters, sizes, 7, PairMode::AllUnordered).unwrap();
    assert!(recount(&part.train, PairMode::AllUnordered) >= 18);
    assert!(recount(&part.dev, PairMode::AllUnordered) >= 6);
    assert!(recount(&part.test, PairMode::AllUnordered) >= 6);
    let split = split_clusters(&clusters, sizes, 7, PairMode::AllUnordered).unwrap();
    assert_eq!(split.train.len(), recount(&part.train, PairMode::AllUnordered));
    assert!(leaked_clusters(&split).is_empty());
}

#[test]
fn insufficient_data_reports_achievable_counts() {
    let clusters = corpus(&[2, 2]);
    match split_clusters(&clusters, SplitSizes { train: 5, dev: 1, test: 1 }, 1, PairMode::AllUnordered) {
        Err(DatasetError::InsufficientData { requested, achievable }) => {
            assert_eq!(requested, [5, 1, 1]);
            assert_eq!(achievable, [0, 1, 1]);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn jsonl_and_tsv_round_trip() {
    let mut clusters = corpus(&[2, 3]);
    clusters[1].trees = Some(vec!["(S (X a))".into(), String::new(), "(S (Y b))".into()]);
    let text = clusters_to_jsonl(&clusters);
    assert_eq!(read_clusters(text.as_bytes()).unwrap(), clusters);
    let pairs = extract_pairs(&clusters, PairMode::AllOrdered);
    assert_eq!(pairs.len(), 2 + 6);
    assert_eq!(read_pairs_tsv(pairs_to_tsv(&pairs).as_bytes()).unwrap(), pairs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn splits_never_share_clusters(
        sizes in prop::collection::vec(0usize..6, 10..60),
        seed in any::<u64>(),
        mode in prop::sample::select(vec![PairMode::AllOrdered, PairMode::AllUnordered, PairMode::StarFirst]),
    ) {
        let clusters = corpus(&sizes);
        let total = recount(&clusters, mode);
        let quota = total / 5;
        let request = SplitSizes { train: quota, dev: quota, test: quota };
        let first = split_clusters(&clusters, request, seed, mode);
        let second = split_clusters(&clusters, request, seed, mode);
        prop_assert_eq!(format!("{first:?}"), format!("{second:?}"));
        if let Ok(split) = first {
            prop_assert!(leaked_clusters(&split).is_empty());
            let ids = |p: &[qcpg_core::SentencePair]| p.iter().map(|x| x.cluster_id.clone()).collect::<HashSet<_>>();
            let (a, b, c) = (ids(&split.train), ids(&split.dev), ids(&split.test));
            prop_assert!(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c));
            prop_assert!(split.train.len() >= quota && split.dev.len() >= quota && split.test.len() >= quota);
        }
    }
}
