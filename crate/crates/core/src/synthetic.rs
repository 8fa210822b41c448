//! Seeded synthetic paraphrase clusters with bracketed parse trees.
//!
//! Every cluster fixes one event (agent, action, patient, manner, place) and realizes it
//! through a handful of sentence templates and synonym choices, so members differ in both
//! structure and wording while staying close in meaning.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Cluster;
use crate::seed::{self, Subsystem};

const AGENTS: &[&[&str]] = &[
    &["dog", "hound", "pup"],
    &["child", "kid", "youngster"],
    &["teacher", "instructor", "tutor"],
    &["doctor", "physician", "medic"],
    &["farmer", "grower", "rancher"],
    &["student", "pupil", "learner"],
    &["chef", "cook"],
    &["captain", "skipper", "commander"],
];

/// (past, participle) pairs.
const ACTIONS: &[&[(&str, &str)]] = &[
    &[("saw", "seen"), ("noticed", "noticed"), ("spotted", "spotted")],
    &[("bought", "bought"), ("purchased", "purchased"), ("acquired", "acquired")],
    &[("fixed", "fixed"), ("repaired", "repaired"), ("mended", "mended")],
    &[("built", "built"), ("constructed", "constructed"), ("assembled", "assembled")],
    &[("found", "found"), ("discovered", "discovered"), ("located", "located")],
    &[("moved", "moved"), ("carried", "carried"), ("hauled", "hauled")],
];

const PATIENTS: &[&[&str]] = &[
    &["car", "automobile", "vehicle"],
    &["house", "home", "dwelling"],
    &["book", "novel", "volume"],
    &["bike", "bicycle", "cycle"],
    &["boat", "ship", "vessel"],
    &["letter", "note", "message"],
    &["table", "desk", "bench"],
];

const QUALITIES: &[&[&str]] = &[
    &["big", "large", "huge"],
    &["old", "ancient", "aged"],
    &["red", "crimson", "scarlet"],
    &["small", "little", "tiny"],
    &["new", "fresh", "modern"],
];

const MANNERS: &[&[&str]] = &[
    &["yesterday"],
    &["recently", "lately"],
    &["quickly", "rapidly", "swiftly"],
    &["carefully", "cautiously"],
];

const PLACES: &[&[&str]] = &[&["park", "garden"], &["city", "town"], &["market", "bazaar"], &["harbor", "port"]];

const DETERMINERS: &[&str] = &["the", "a", "this", "that"];

const TEMPLATES: usize = 6;

struct Event {
    agent: usize,
    action: usize,
    patient: usize,
    quality: usize,
    manner: usize,
    place: usize,
}

/// A sentence and its parse under construction.
struct Phrase {
    words: Vec<String>,
    tree: String,
}

fn pre(tag: &str, word: &str) -> Phrase {
    Phrase { words: vec![word.to_string()], tree: format!("({tag} {word})") }
}

fn cons(label: &str, parts: Vec<Phrase>) -> Phrase {
    let mut words = Vec::new();
    let mut tree = format!("({label}");
    for p in parts {
        words.extend(p.words);
        tree.push(' ');
        tree.push_str(&p.tree);
    }
    tree.push(')');
    Phrase { words, tree }
}

fn pick<'a>(rng: &mut ChaCha8Rng, options: &[&'a str]) -> &'a str {
    options.choose(rng).expect("non-empty vocabulary")
}

fn noun_phrase(rng: &mut ChaCha8Rng, nouns: &[&str], adjectives: Option<&[&str]>) -> Phrase {
    let mut parts = vec![pre("DT", pick(rng, DETERMINERS))];
    if let Some(adjs) = adjectives {
        parts.push(pre("JJ", pick(rng, adjs)));
    }
    parts.push(pre("NN", pick(rng, nouns)));
    cons("NP", parts)
}

fn realize(rng: &mut ChaCha8Rng, e: &Event, template: usize) -> Phrase {
    let adjective = rng.random_bool(0.5).then_some(QUALITIES[e.quality]);
    let agent = noun_phrase(rng, AGENTS[e.agent], None);
    let patient = noun_phrase(rng, PATIENTS[e.patient], adjective);
    let &(past, participle) = ACTIONS[e.action].choose(rng).expect("non-empty vocabulary");
    let manner = pick(rng, MANNERS[e.manner]);
    let place = PLACES[e.place];
    let period = pre(".", ".");

    let body = match template {
        0 => vec![agent, cons("VP", vec![pre("VBD", past), patient])],
        1 => vec![
            patient,
            cons(
                "VP",
                vec![pre("VBD", "was"), cons("VP", vec![pre("VBN", participle), cons("PP", vec![pre("IN", "by"), agent])])],
            ),
        ],
        2 => vec![
            cons("ADVP", vec![pre("RB", manner)]),
            pre(",", ","),
            agent,
            cons("VP", vec![pre("VBD", past), patient]),
        ],
        3 => {
            let where_ = noun_phrase(rng, place, None);
            vec![agent, cons("VP", vec![pre("VBD", past), patient, cons("PP", vec![pre("IN", "in"), where_])])]
        }
        4 => vec![
            cons("NP", vec![pre("PRP", "it")]),
            cons(
                "VP",
                vec![
                    pre("VBD", "was"),
                    cons(
                        "NP",
                        vec![
                            agent,
                            cons(
                                "SBAR",
                                vec![
                                    cons("WHNP", vec![pre("WP", "who")]),
                                    cons("S", vec![cons("VP", vec![pre("VBD", past), patient])]),
                                ],
                            ),
                        ],
                    ),
                ],
            ),
        ],
        _ => vec![
            patient,
            cons(
                "VP",
                vec![
                    pre("VBD", "was"),
                    cons(
                        "VP",
                        vec![
                            pre("VBN", participle),
                            cons("ADVP", vec![pre("RB", manner)]),
                            cons("PP", vec![pre("IN", "by"), agent]),
                        ],
                    ),
                ],
            ),
        ],
    };
    let mut parts = body;
    parts.push(period);
    cons("S", parts)
}

fn to_sentence(words: &[String]) -> String {
    let mut out = String::new();
    for w in words {
        if !out.is_empty() && !matches!(w.as_str(), "." | ",") {
            out.push(' ');
        }
        out.push_str(w);
    }
    let mut chars = out.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => out,
    }
}

/// `n_clusters` clusters of `per_cluster` distinct sentences, each with its parse tree.
/// Identical arguments give identical corpora.
pub fn synthetic_corpus(n_clusters: usize, per_cluster: usize, seed: u64) -> Vec<Cluster> {
    let mut rng = seed::stream(seed, Subsystem::Synthetic, b"corpus");
    (0..n_clusters)
        .map(|i| {
            let event = Event {
                agent: rng.random_range(0..AGENTS.len()),
                action: rng.random_range(0..ACTIONS.len()),
                patient: rng.random_range(0..PATIENTS.len()),
                quality: rng.random_range(0..QUALITIES.len()),
                manner: rng.random_range(0..MANNERS.len()),
                place: rng.random_range(0..PLACES.len()),
            };
            let mut sentences = Vec::with_capacity(per_cluster);
            let mut trees = Vec::with_capacity(per_cluster);
            let mut attempts = 0;
            while sentences.len() < per_cluster {
                let template = if attempts < TEMPLATES { (i + attempts) % TEMPLATES } else { rng.random_range(0..TEMPLATES) };
                attempts += 1;
                let phrase = realize(&mut rng, &event, template);
                let sentence = to_sentence(&phrase.words);
                if attempts < 1000 && sentences.contains(&sentence) {
                    continue;
                }
                sentences.push(sentence);
                trees.push(phrase.tree);
            }
            Cluster { cluster_id: format!("syn-{i:05}"), sentences, trees: Some(trees) }
        })
        .collect()
}
