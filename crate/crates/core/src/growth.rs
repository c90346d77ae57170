//! Empirical Dehn and space functions.
//!
//! For each `n`, `D(n)` is the largest minimal derivation length and `S(n)`
//! the largest minimal peak word length (minimum over derivations of the
//! longest intermediate word) among equal pairs `(u, v)` over `{a, b}` with
//! `|u| + |v| <= n`. Trivial pairs `u = v` are included, with distance 0 and
//! space `|u|`. Equality is decided by normal forms of a complete system;
//! distances come from bounded derivation search, so pairs the search
//! cannot connect are counted as undecided.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rewrite::RewriteSystem;
use crate::verifier::{base_words, bfs_equal, BfsBounds, Chain, EqualityVerdict, Presentation};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    pub steps: usize,
    pub geodesic: Chain,
}

/// Minimal number of relation applications between `u` and `v`.
pub fn derivation_distance(u: &[Letter], v: &[Letter], p: &Presentation, bounds: &BfsBounds) -> Option<Distance> {
    match bfs_equal(u, v, p, bounds) {
        EqualityVerdict::Proved { depth, chain } => Some(Distance { steps: depth, geodesic: chain }),
        EqualityVerdict::Unknown { .. } => None,
    }
}

/// Smallest peak length over derivations from `u` to `v` that respect the
/// depth limit, searching caps up to the bounds' length limit.
pub fn space_requirement(u: &[Letter], v: &[Letter], p: &Presentation, bounds: &BfsBounds) -> Option<usize> {
    let hi = bounds.length_limit_for(p);
    let lo = u.len().max(v.len());
    (lo..=hi).find(|&cap| {
        let b = BfsBounds { length_limit: Some(cap), ..*bounds };
        bfs_equal(u, v, p, &b).is_proved()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub dehn: usize,
    pub space: usize,
    pub equal_pairs: usize,
    pub undecided: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub relator: Word,
    pub convention: String,
    pub rows: Vec<GrowthRow>,
    /// Least-squares slope of log D(n) against log n over rows with D(n) > 0.
    /// Diagnostic only.
    pub dehn_exponent_fit: Option<f64>,
    pub pairs: Vec<PairMeasure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMeasure {
    pub u: Word,
    pub v: Word,
    pub distance: Option<usize>,
    pub space: Option<usize>,
}

pub const SPACE_CONVENTION: &str =
    "S(n) = max over equal pairs with |u|+|v| <= n of min over derivations of the longest intermediate word";

pub fn probe(s: &RewriteSystem, p: &Presentation, n_max: usize, bounds: &BfsBounds, step_limit: usize) -> GrowthReport {
    let words = base_words(n_max);
    let nfs: Vec<Option<Word>> = words.par_iter().map(|w| s.normalize(w, step_limit).ok().map(|n| n.word)).collect();

    let mut candidates = Vec::new();
    for i in 0..words.len() {
        for j in i..words.len() {
            if words[i].len() + words[j].len() > n_max {
                continue;
            }
            // pairs whose normal forms are unknown are measured anyway and
            // count as undecided if the search fails
            let equal = match (&nfs[i], &nfs[j]) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            };
            if equal {
                candidates.push((i, j));
            }
        }
    }

    let pairs: Vec<PairMeasure> = candidates
        .par_iter()
        .map(|&(i, j)| {
            let (u, v) = (&words[i], &words[j]);
            let distance = derivation_distance(u, v, p, bounds).map(|d| d.steps);
            let space = distance.and_then(|_| space_requirement(u, v, p, bounds));
            PairMeasure { u: u.clone(), v: v.clone(), distance, space }
        })
        .collect();

    let rows = (0..=n_max)
        .map(|n| {
            let within = pairs.iter().filter(|m| m.u.len() + m.v.len() <= n);
            let mut row = GrowthRow { n, dehn: 0, space: 0, equal_pairs: 0, undecided: 0 };
            for m in within {
                match (m.distance, m.space) {
                    (Some(d), Some(sp)) => {
                        row.equal_pairs += 1;
                        row.dehn = row.dehn.max(d);
                        row.space = row.space.max(sp);
                    }
                    _ => row.undecided += 1,
                }
            }
            row
        })
        .collect::<Vec<_>>();

    let dehn_exponent_fit = fit_log_log(&rows);
    GrowthReport {
        relator: p.relator().clone(),
        convention: SPACE_CONVENTION.to_string(),
        rows,
        dehn_exponent_fit,
        pairs,
    }
}

fn fit_log_log(rows: &[GrowthRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.dehn > 0 && r.n > 0).map(|r| ((r.n as f64).ln(), (r.dehn as f64).ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

impl GrowthReport {
    pub fn to_table(&self) -> String {
        let mut out = format!("# relator {} = b\n# {}\n", self.relator, self.convention);
        out.push_str(&format!("{:>4} {:>6} {:>6} {:>8} {:>10}\n", "n", "D(n)", "S(n)", "pairs", "undecided"));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>4} {:>6} {:>6} {:>8} {:>10}\n",
                r.n, r.dehn, r.space, r.equal_pairs, r.undecided
            ));
        }
        match self.dehn_exponent_fit {
            Some(e) => out.push_str(&format!("# log-log slope of D (diagnostic only): {e:.3}\n")),
            None => out.push_str("# log-log slope of D: not enough nonzero points\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn p0() -> Presentation {
        Presentation::new(w("ababab")).unwrap()
    }

    #[test]
    fn distance_examples() {
        let b = BfsBounds::default();
        assert_eq!(derivation_distance(&w("ababab"), &w("b"), &p0(), &b).unwrap().steps, 1);
        assert_eq!(derivation_distance(&w("ab^2"), &w("bab"), &p0(), &b).unwrap().steps, 2);
        let d = derivation_distance(&w("a"), &w("a"), &p0(), &b).unwrap();
        assert_eq!(d.steps, 0);
        assert_eq!(d.geodesic.words, vec![w("a")]);
    }

    #[test]
    fn space_of_simple_pairs() {
        let b = BfsBounds::default();
        assert_eq!(space_requirement(&w("ababab"), &w("b"), &p0(), &b), Some(6));
        assert_eq!(space_requirement(&w("ab^2"), &w("bab"), &p0(), &b), Some(8));
    }

    #[test]
    fn fit_on_exact_quadratic() {
        let rows: Vec<GrowthRow> =
            (1..6).map(|n| GrowthRow { n, dehn: n * n, space: 0, equal_pairs: 1, undecided: 0 }).collect();
        assert!((fit_log_log(&rows).unwrap() - 2.0).abs() < 1e-9);
    }
}
