//! Critical pairs and local confluence.

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::rewrite::RewriteSystem;
use crate::word::{border_lengths, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapKind {
    SuffixPrefix,
    Containment,
}

/// Where the two rules sit inside the overlap word: `first` matches at
/// position 0 and `second` at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairSource {
    pub first: usize,
    pub second: usize,
    pub kind: OverlapKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPair {
    pub overlap_word: Word,
    pub left_reduct: Word,
    pub right_reduct: Word,
    pub source: PairSource,
}

pub fn critical_pairs(s: &RewriteSystem) -> Vec<CriticalPair> {
    let rules = s.rules();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |overlap_word: Word, source: PairSource, out: &mut Vec<CriticalPair>| {
        // a pair and its mirror image describe the same divergence
        let a = (source.first, 0usize);
        let b = (source.second, source.offset);
        let key = (overlap_word.clone(), a.min(b), a.max(b));
        if !seen.insert(key) {
            return;
        }
        let first = &rules[source.first];
        let second = &rules[source.second];
        let left_reduct = overlap_word.splice(0, first.lhs.len(), &first.rhs);
        let right_reduct = overlap_word.splice(source.offset, second.lhs.len(), &second.rhs);
        out.push(CriticalPair { overlap_word, left_reduct, right_reduct, source });
    };

    for (i, ri) in rules.iter().enumerate() {
        for (j, rj) in rules.iter().enumerate() {
            let (li, lj) = (&ri.lhs, &rj.lhs);
            // proper suffix of lhs_i equal to a proper prefix of lhs_j
            let overlap_lengths: Vec<usize> = if i == j {
                border_lengths(li).expect("lhs is nonempty")
            } else {
                (1..li.len().min(lj.len())).filter(|&l| li[li.len() - l..] == lj[..l]).collect()
            };
            for l in overlap_lengths {
                let offset = li.len() - l;
                let word = li.concat(&lj[l..]);
                push(word, PairSource { first: i, second: j, kind: OverlapKind::SuffixPrefix, offset }, &mut out);
            }
            if i != j && lj.len() <= li.len() {
                for offset in li.occurrences(lj) {
                    push(
                        li.clone(),
                        PairSource { first: i, second: j, kind: OverlapKind::Containment, offset },
                        &mut out,
                    );
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure {
    pub pair: CriticalPair,
    pub left_normal: Word,
    pub right_normal: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfluenceReport {
    pub pairs: usize,
    pub joinable: usize,
    pub failures: Vec<PairFailure>,
    pub undecided: Vec<CriticalPair>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty() && self.undecided.is_empty()
    }
}

/// Number of random strategies tried on a pair before it is reported as a
/// failure.
pub const RECHECK_STRATEGIES: u64 = 10;

pub fn check_local_confluence(s: &RewriteSystem, step_limit: usize) -> ConfluenceReport {
    let pairs = critical_pairs(s);
    let mut report = ConfluenceReport { pairs: pairs.len(), joinable: 0, failures: Vec::new(), undecided: Vec::new() };
    for pair in pairs {
        let left = s.normalize(&pair.left_reduct, step_limit);
        let right = s.normalize(&pair.right_reduct, step_limit);
        match (left, right) {
            (Ok(l), Ok(r)) if l.word == r.word => report.joinable += 1,
            (Ok(l), Ok(r)) => {
                if joins_under_random_strategies(s, &pair, step_limit) {
                    report.joinable += 1;
                } else {
                    report.failures.push(PairFailure { pair, left_normal: l.word, right_normal: r.word });
                }
            }
            _ => report.undecided.push(pair),
        }
    }
    report
}

fn joins_under_random_strategies(s: &RewriteSystem, pair: &CriticalPair, step_limit: usize) -> bool {
    (0..RECHECK_STRATEGIES).any(|seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        let l = s.normalize_random(&pair.left_reduct, step_limit, &mut rng);
        let r = s.normalize_random(&pair.right_reduct, step_limit, &mut rng);
        matches!((l, r), (Ok(l), Ok(r)) if l.word == r.word)
    })
}
