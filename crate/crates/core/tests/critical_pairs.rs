use std::collections::BTreeSet;

use monorel::{critical_pairs, emit_system, RelatorExponents, RewriteSystem, Word};

type Key = (Word, (usize, usize), (usize, usize));

/// Slides every lhs across every other one and keeps each placement where
/// the two occurrences overlap and agree letter for letter.
fn brute_force(s: &RewriteSystem) -> BTreeSet<Key> {
    let rules = s.rules();
    let mut out = BTreeSet::new();
    for (i, ri) in rules.iter().enumerate() {
        for (j, rj) in rules.iter().enumerate() {
            let (li, lj) = (&ri.lhs, &rj.lhs);
            for d in 0..li.len() {
                if i == j && d == 0 {
                    continue;
                }
                let agree = (d..li.len().min(d + lj.len())).all(|k| li[k] == lj[k - d]);
                if !agree {
                    continue;
                }
                let mut word = li.clone();
                if d + lj.len() > li.len() {
                    word.extend_from(&Word::from(lj[li.len() - d..].to_vec()));
                }
                let (a, b) = ((i, 0), (j, d));
                out.insert((word, a.min(b), a.max(b)));
            }
        }
    }
    out
}

fn computed(s: &RewriteSystem) -> Vec<Key> {
    critical_pairs(s)
        .into_iter()
        .map(|p| {
            let (a, b) = ((p.source.first, 0), (p.source.second, p.source.offset));
            (p.overlap_word, a.min(b), a.max(b))
        })
        .collect()
}

#[test]
fn critical_pairs_match_brute_force_on_small_exponents() {
    for e in RelatorExponents::grid(3) {
        let s = emit_system(&e).unwrap();
        let got = computed(&s);
        let unique: BTreeSet<Key> = got.iter().cloned().collect();
        assert_eq!(unique.len(), got.len(), "duplicate pairs for {e}");
        assert_eq!(unique, brute_force(&s), "pair sets differ for {e}");
    }
}

#[test]
fn reducts_come_from_the_recorded_positions() {
    for e in RelatorExponents::grid(3) {
        let s = emit_system(&e).unwrap();
        for p in critical_pairs(&s) {
            let first = &s.rules()[p.source.first];
            let second = &s.rules()[p.source.second];
            assert_eq!(p.overlap_word[..first.lhs.len()], first.lhs[..]);
            let at = p.source.offset;
            assert_eq!(p.overlap_word[at..at + second.lhs.len()], second.lhs[..]);
            assert_eq!(p.left_reduct, p.overlap_word.splice(0, first.lhs.len(), &first.rhs));
            assert_eq!(p.right_reduct, p.overlap_word.splice(at, second.lhs.len(), &second.rhs));
        }
    }
}
