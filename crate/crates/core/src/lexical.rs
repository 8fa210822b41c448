//! Lexical distance: character-level edit distance between bags of words, matched
//! independently of word order.

use crate::assignment::min_cost_assignment;

/// Multiset of lowercase tokens, kept sorted so equal bags compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WordBag {
    words: Vec<String>,
    total_chars: usize,
}

impl WordBag {
    /// Builds a bag from already-normalized words. Empty words are dropped.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut words: Vec<String> = words.into_iter().map(Into::into).filter(|w| !w.is_empty()).collect();
        words.sort_unstable();
        let total_chars = words.iter().map(|w| w.chars().count()).sum();
        Self { words, total_chars }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sum of token lengths in Unicode scalar values.
    pub fn total_chars(&self) -> usize {
        self.total_chars
    }
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '“' | '”' | '‘' | '’' | '«' | '»' | '…' | '–' | '—' | '¿' | '¡' | '·' | '、' | '。' | '，'
        )
}

/// Lowercased, whitespace-split words with leading and trailing punctuation removed,
/// in sentence order.
pub fn words(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|w| w.trim_matches(is_punct).to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn tokenize(sentence: &str) -> WordBag {
    WordBag::from_words(words(sentence))
}

/// Levenshtein distance over Unicode scalar values.
pub fn char_edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn word_or_empty(bag: &WordBag, i: usize) -> &str {
    bag.words.get(i).map_or("", String::as_str)
}

/// Cheapest way to match the words of `a` with the words of `b`: matched pairs cost their
/// edit distance, unmatched words cost their length.
pub fn bag_assignment_cost(a: &WordBag, b: &WordBag) -> usize {
    let n = a.len().max(b.len());
    if n == 0 {
        return 0;
    }
    let mut costs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            costs.push(char_edit_distance(word_or_empty(a, i), word_or_empty(b, j)) as i64);
        }
    }
    min_cost_assignment(n, &costs).cost as usize
}

/// Normalized lexical distance on a 0–100 scale: assignment cost over the larger bag's
/// character total. Two empty sentences are at distance 0.
pub fn lexical_distance(s1: &str, s2: &str) -> f64 {
    bag_distance(&tokenize(s1), &tokenize(s2))
}

pub fn bag_distance(a: &WordBag, b: &WordBag) -> f64 {
    let denom = a.total_chars().max(b.total_chars());
    if denom == 0 {
        return 0.0;
    }
    let cost = bag_assignment_cost(a, b) as f64;
    100.0 * (cost / denom as f64).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("The cat sat.").words(), ["cat", "sat", "the"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("A a A!").words(), ["a", "a", "a"]);
        assert_eq!(tokenize("  \"Hello,\"  —  world… ").words(), ["hello", "world"]);
        assert_eq!(tokenize("don't stop").words(), ["don't", "stop"]);
        assert_eq!(tokenize("Ünïcode Straße").total_chars(), 13);
    }

    #[test]
    fn edit_distance_examples() {
        assert_eq!(char_edit_distance("cat", "cat"), 0);
        assert_eq!(char_edit_distance("cat", "bat"), 1);
        assert_eq!(char_edit_distance("kitten", "sitting"), 3);
        assert_eq!(char_edit_distance("", "abc"), 3);
        assert_eq!(char_edit_distance("abc", ""), 3);
        assert_eq!(char_edit_distance("naïve", "naive"), 1);
    }

    #[test]
    fn assignment_examples() {
        let bag = |s: &str| tokenize(s);
        assert_eq!(bag_assignment_cost(&bag("the cat"), &bag("the cat")), 0);
        assert_eq!(bag_assignment_cost(&bag("the cat"), &bag("a cat")), 3);
        assert_eq!(bag_assignment_cost(&bag(""), &bag("abc")), 3);
        assert_eq!(bag_assignment_cost(&bag("abc"), &bag("")), 3);
    }

    #[test]
    fn lexical_distance_examples() {
        assert_eq!(lexical_distance("the cat", "the cat"), 0.0);
        assert_eq!(lexical_distance("the cat", "a cat"), 50.0);
        assert_eq!(lexical_distance("", ""), 0.0);
        assert_eq!(lexical_distance("cat sat", "sat cat"), 0.0);
        assert_eq!(lexical_distance("abc", "xyz"), 100.0);
        assert_eq!(lexical_distance("", "word"), 100.0);
    }
}
