//! Termination certificates by affine interpretations over the naturals.
//!
//! Each letter `l` is read as the map `n -> coef(l) * n + const(l)`, and a
//! word `l1 l2 ... ln` as the composition `l1 ∘ l2 ∘ ... ∘ ln`. A rule
//! `lhs -> rhs` decreases strictly in every context when
//! `Coef(lhs) >= Coef(rhs)` and `Const(lhs) > Const(rhs)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewrite::RewriteSystem;
use crate::word::Letter;

pub const DEFAULT_COEF_BOUND: u32 = 8;
pub const DEFAULT_CONST_BOUND: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub coef: u32,
    pub constant: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AffineInterpretation(pub BTreeMap<Letter, AffineMap>);

/// The composed map of a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    #[serde(with = "decimal")]
    pub coef: BigUint,
    #[serde(with = "decimal")]
    pub constant: BigUint,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("interpretation has no entry for letter {0}")]
pub struct MissingLetter(pub Letter);

impl AffineInterpretation {
    pub fn from_pairs(pairs: &[(Letter, u32, u32)]) -> Self {
        AffineInterpretation(pairs.iter().map(|&(l, coef, constant)| (l, AffineMap { coef, constant })).collect())
    }

    pub fn evaluate(&self, w: &[Letter]) -> Result<Evaluation, MissingLetter> {
        let mut coef = BigUint::from(1u32);
        let mut constant = BigUint::from(0u32);
        // right to left: apply the innermost letter first
        for &l in w.iter().rev() {
            let m = self.0.get(&l).ok_or(MissingLetter(l))?;
            constant = constant * m.coef + m.constant;
            coef *= m.coef;
        }
        Ok(Evaluation { coef, constant })
    }
}

impl std::fmt::Display for AffineInterpretation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(l, m)| format!("{l}↦({},{})", m.coef, m.constant)).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEvaluation {
    pub rule: usize,
    pub lhs: Evaluation,
    pub rhs: Evaluation,
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub table: Vec<RuleEvaluation>,
}

pub fn check_certificate(s: &RewriteSystem, interp: &AffineInterpretation) -> Result<CertificateCheck, MissingLetter> {
    if let Some(l) = s.alphabet().iter().find(|l| !interp.0.contains_key(l)) {
        return Err(MissingLetter(*l));
    }
    let mut table = Vec::with_capacity(s.rules().len());
    for (i, r) in s.rules().iter().enumerate() {
        let lhs = interp.evaluate(&r.lhs)?;
        let rhs = interp.evaluate(&r.rhs)?;
        let decreasing = lhs.coef >= rhs.coef && lhs.constant > rhs.constant;
        table.push(RuleEvaluation { rule: i, lhs, rhs, decreasing });
    }
    Ok(CertificateCheck { valid: table.iter().all(|r| r.decreasing), table })
}

/// A rule whose right side has strictly more occurrences of every letter
/// that appears on either side. Such a rule forces coefficient 1 on all of
/// those letters, after which its right side has the larger constant, so no
/// affine interpretation of any size orients it.
pub fn affine_obstruction(s: &RewriteSystem) -> Option<usize> {
    let count = |w: &[Letter], l: Letter| w.iter().filter(|&&m| m == l).count();
    s.rules().iter().position(|r| {
        Letter::ALL
            .iter()
            .filter(|&&l| r.lhs.contains(&l) || r.rhs.contains(&l))
            .all(|&l| count(&r.rhs, l) > count(&r.lhs, l))
    })
}

/// Grid search in the order: increasing maximum coefficient, then
/// lexicographic coefficient vector (letters in alphabet order), then
/// lexicographic constant vector. The first certificate found is returned.
pub fn find_affine_interpretation(
    s: &RewriteSystem,
    coef_bound: u32,
    const_bound: u32,
) -> Option<AffineInterpretation> {
    let letters: Vec<Letter> = s.alphabet().iter().copied().collect();
    let n = letters.len();
    if n == 0 || coef_bound == 0 {
        return None;
    }
    let index = |l: Letter| letters.iter().position(|&m| m == l).expect("rule letters are in the alphabet");
    // letter counts per rule side, for the coefficient condition
    let counts: Vec<(Vec<u32>, Vec<u32>)> = s
        .rules()
        .iter()
        .map(|r| {
            let mut lc = vec![0u32; n];
            let mut rc = vec![0u32; n];
            r.lhs.iter().for_each(|&l| lc[index(l)] += 1);
            r.rhs.iter().for_each(|&l| rc[index(l)] += 1);
            (lc, rc)
        })
        .collect();

    for max in 1..=coef_bound {
        let mut coefs = vec![1u32; n];
        loop {
            if coefs.contains(&max) && coefficients_dominate(&coefs, &counts) {
                let weights = constant_weights(s, &coefs, &index, n);
                let mut consts = vec![0u32; n];
                if search_constants(&weights, const_bound, 0, &mut consts, &mut vec![BigInt::from(0); weights.len()]) {
                    let pairs: Vec<(Letter, u32, u32)> = (0..n).map(|i| (letters[i], coefs[i], consts[i])).collect();
                    return Some(AffineInterpretation::from_pairs(&pairs));
                }
            }
            if !next_vector(&mut coefs, 1, max) {
                break;
            }
        }
    }
    None
}

/// Lexicographic successor with entries in `lo..=hi`; false when exhausted.
fn next_vector(v: &mut [u32], lo: u32, hi: u32) -> bool {
    for slot in v.iter_mut().rev() {
        if *slot < hi {
            *slot += 1;
            return true;
        }
        *slot = lo;
    }
    false
}

fn coefficients_dominate(coefs: &[u32], counts: &[(Vec<u32>, Vec<u32>)]) -> bool {
    counts.iter().all(|(lc, rc)| {
        let prod = |c: &[u32]| -> BigUint {
            c.iter().zip(coefs).fold(BigUint::from(1u32), |acc, (&e, &k)| acc * BigUint::from(k).pow(e))
        };
        prod(lc) >= prod(rc)
    })
}

/// For each rule, the signed weight of each letter's constant in
/// `Const(lhs) - Const(rhs)`; the constant term is linear in the constants.
fn constant_weights(s: &RewriteSystem, coefs: &[u32], index: &dyn Fn(Letter) -> usize, n: usize) -> Vec<Vec<BigInt>> {
    let side = |w: &[Letter], sign: i32, acc: &mut Vec<BigInt>| {
        let mut prefix = BigInt::from(1);
        for &l in w {
            let i = index(l);
            acc[i] += &prefix * sign;
            prefix *= coefs[i];
        }
    };
    s.rules()
        .iter()
        .map(|r| {
            let mut acc = vec![BigInt::from(0); n];
            side(&r.lhs, 1, &mut acc);
            side(&r.rhs, -1, &mut acc);
            acc
        })
        .collect()
}

fn search_constants(
    weights: &[Vec<BigInt>],
    const_bound: u32,
    pos: usize,
    consts: &mut Vec<u32>,
    partial: &mut Vec<BigInt>,
) -> bool {
    let n = consts.len();
    if pos == n {
        return partial.iter().all(|v| v > &BigInt::from(0));
    }
    // prune: the best any completion can reach must still be positive
    for (rule, w) in weights.iter().enumerate() {
        let best: BigInt = w[pos..].iter().filter(|x| x > &&BigInt::from(0)).map(|x| x * const_bound).sum();
        if &partial[rule] + best <= BigInt::from(0) {
            return false;
        }
    }
    for d in 0..=const_bound {
        for (rule, w) in weights.iter().enumerate() {
            partial[rule] += &w[pos] * d;
        }
        consts[pos] = d;
        let found = search_constants(weights, const_bound, pos + 1, consts, partial);
        for (rule, w) in weights.iter().enumerate() {
            partial[rule] -= &w[pos] * d;
        }
        if found {
            return true;
        }
    }
    false
}
