//! Rules, rewrite systems and deterministic normalization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::SystemMeta;
use crate::word::{Letter, Word};

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Rule { lhs, rhs }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &Word| if w.is_empty() { "1".to_string() } else { w.to_string() };
        write!(f, "{} -> {}", show(&self.lhs), show(&self.rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("rule {0} has an empty left-hand side")]
    EmptyLhs(usize),
    #[error("rule {0} has identical sides")]
    TrivialRule(usize),
    #[error("letter {0} is used but not declared in the alphabet")]
    UndeclaredLetter(Letter),
    #[error("definitions may only name auxiliary letters, not {0}")]
    DefinesBaseLetter(Letter),
    #[error("definition of {0} must be a word over {{a, b}}")]
    DefinitionNotBase(Letter),
    #[error("malformed system: {0}")]
    Malformed(String),
}

/// An ordered list of rules over a declared alphabet, with optional
/// definitions of auxiliary letters as words over `{a, b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct RewriteSystem {
    alphabet: BTreeSet<Letter>,
    rules: Vec<Rule>,
    definitions: BTreeMap<Letter, Word>,
    meta: Option<SystemMeta>,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    alphabet: Vec<Letter>,
    definitions: BTreeMap<Letter, Word>,
    rules: Vec<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<SystemMeta>,
}

impl TryFrom<RawSystem> for RewriteSystem {
    type Error = SystemError;

    fn try_from(raw: RawSystem) -> Result<Self, SystemError> {
        RewriteSystem::new(raw.alphabet.into_iter().collect(), raw.rules, raw.definitions, raw.meta)
    }
}

impl From<RewriteSystem> for RawSystem {
    fn from(s: RewriteSystem) -> Self {
        RawSystem {
            alphabet: s.alphabet.into_iter().collect(),
            definitions: s.definitions,
            rules: s.rules,
            meta: s.meta,
        }
    }
}

/// A rewrite position: the rule `rule` matches at letter offset `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Redex {
    pub position: usize,
    pub rule: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub word: Word,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step limit of {steps} exceeded (last word has length {})", .word.len())]
pub struct StepLimitExceeded {
    pub word: Word,
    pub steps: usize,
}

impl RewriteSystem {
    pub fn new(
        alphabet: BTreeSet<Letter>,
        rules: Vec<Rule>,
        definitions: BTreeMap<Letter, Word>,
        meta: Option<SystemMeta>,
    ) -> Result<Self, SystemError> {
        for (i, rule) in rules.iter().enumerate() {
            if rule.lhs.is_empty() {
                return Err(SystemError::EmptyLhs(i));
            }
            if rule.lhs == rule.rhs {
                return Err(SystemError::TrivialRule(i));
            }
        }
        for (&letter, def) in &definitions {
            if !letter.is_auxiliary() {
                return Err(SystemError::DefinesBaseLetter(letter));
            }
            if !def.uses_only(&Letter::BASE) {
                return Err(SystemError::DefinitionNotBase(letter));
            }
        }
        let used = rules
            .iter()
            .flat_map(|r| r.lhs.iter().chain(r.rhs.iter()))
            .chain(definitions.keys())
            .chain(definitions.values().flat_map(|d| d.iter()));
        for l in used {
            if !alphabet.contains(l) {
                return Err(SystemError::UndeclaredLetter(*l));
            }
        }
        Ok(RewriteSystem { alphabet, rules, definitions, meta })
    }

    /// A system over `{a, b}` plus whatever letters the rules mention.
    pub fn from_rules(rules: Vec<Rule>) -> Result<Self, SystemError> {
        let mut alphabet: BTreeSet<Letter> = Letter::BASE.into_iter().collect();
        for r in &rules {
            alphabet.extend(r.lhs.iter().chain(r.rhs.iter()).copied());
        }
        RewriteSystem::new(alphabet, rules, BTreeMap::new(), None)
    }

    /// Convenience for tests and fixtures: rules given as literal pairs.
    pub fn from_literals(rules: &[(&str, &str)]) -> Result<Self, SystemError> {
        let parsed = rules
            .iter()
            .map(|(l, r)| {
                let lhs = l.parse::<Word>().map_err(|e| SystemError::Malformed(e.to_string()))?;
                let rhs = r.parse::<Word>().map_err(|e| SystemError::Malformed(e.to_string()))?;
                Ok(Rule::new(lhs, rhs))
            })
            .collect::<Result<Vec<_>, SystemError>>()?;
        RewriteSystem::from_rules(parsed)
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn definitions(&self) -> &BTreeMap<Letter, Word> {
        &self.definitions
    }

    pub fn meta(&self) -> Option<&SystemMeta> {
        self.meta.as_ref()
    }

    pub fn with_rules(&self, rules: Vec<Rule>) -> Result<Self, SystemError> {
        RewriteSystem::new(self.alphabet.clone(), rules, self.definitions.clone(), self.meta.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("systems always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn matches_at(&self, w: &[Letter], pos: usize, rule: usize) -> bool {
        let lhs = &self.rules[rule].lhs;
        pos + lhs.len() <= w.len() && w[pos..pos + lhs.len()] == lhs[..]
    }

    /// Leftmost position, then lowest rule index.
    pub fn find_redex(&self, w: &[Letter]) -> Option<Redex> {
        (0..w.len()).find_map(|position| {
            (0..self.rules.len()).find(|&rule| self.matches_at(w, position, rule)).map(|rule| Redex { position, rule })
        })
    }

    /// Every `(position, rule)` match in `w`.
    pub fn all_redexes(&self, w: &[Letter]) -> Vec<Redex> {
        let mut out = Vec::new();
        for position in 0..w.len() {
            for rule in 0..self.rules.len() {
                if self.matches_at(w, position, rule) {
                    out.push(Redex { position, rule });
                }
            }
        }
        out
    }

    pub fn is_normal(&self, w: &[Letter]) -> bool {
        self.find_redex(w).is_none()
    }

    pub fn apply(&self, w: &[Letter], redex: Redex) -> Word {
        let rule = &self.rules[redex.rule];
        let mut v = Vec::with_capacity(w.len() + rule.rhs.len());
        v.extend_from_slice(&w[..redex.position]);
        v.extend_from_slice(&rule.rhs);
        v.extend_from_slice(&w[redex.position + rule.lhs.len()..]);
        Word::from(v)
    }

    /// One leftmost rewrite step, or `None` on a normal form.
    pub fn step(&self, w: &[Letter]) -> Option<(Word, Redex)> {
        self.find_redex(w).map(|r| (self.apply(w, r), r))
    }

    pub fn normalize(&self, w: &[Letter], step_limit: usize) -> Result<Normalized, StepLimitExceeded> {
        let mut current = Word::from(w.to_vec());
        let mut steps = 0;
        while let Some(r) = self.find_redex(&current) {
            if steps == step_limit {
                return Err(StepLimitExceeded { word: current, steps });
            }
            current = self.apply(&current, r);
            steps += 1;
        }
        Ok(Normalized { word: current, steps })
    }

    /// Normalizes and records every intermediate word, starting with `w`.
    pub fn normalize_trace(&self, w: &[Letter], step_limit: usize) -> Result<Vec<Word>, StepLimitExceeded> {
        let mut chain = vec![Word::from(w.to_vec())];
        while let Some((next, _)) = self.step(chain.last().expect("chain is nonempty")) {
            if chain.len() > step_limit {
                let steps = chain.len() - 1;
                return Err(StepLimitExceeded { word: chain.pop().expect("nonempty"), steps });
            }
            chain.push(next);
        }
        Ok(chain)
    }

    /// Normalizes choosing a uniformly random redex at every step.
    pub fn normalize_random<R: Rng + ?Sized>(
        &self,
        w: &[Letter],
        step_limit: usize,
        rng: &mut R,
    ) -> Result<Normalized, StepLimitExceeded> {
        let mut current = Word::from(w.to_vec());
        let mut steps = 0;
        loop {
            let redexes = self.all_redexes(&current);
            if redexes.is_empty() {
                return Ok(Normalized { word: current, steps });
            }
            if steps == step_limit {
                return Err(StepLimitExceeded { word: current, steps });
            }
            let pick = redexes[rng.gen_range(0..redexes.len())];
            current = self.apply(&current, pick);
            steps += 1;
        }
    }
}

impl fmt::Display for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.alphabet.iter().map(|l| l.to_string()).collect();
        writeln!(f, "alphabet: {{{}}}", letters.join(", "))?;
        for (l, d) in &self.definitions {
            writeln!(f, "  {l} = {d}")?;
        }
        for (i, r) in self.rules.iter().enumerate() {
            writeln!(f, "  r{i}: {r}")?;
        }
        Ok(())
    }
}
