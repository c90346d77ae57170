//! Presentation equivalence checks.
//!
//! Equality in `Mon<a, b : R = b>` is searched for directly: a derivation
//! step replaces one occurrence of the relator `R` by `b` or one `b` by `R`.
//! Soundness of an emitted rule is established by finding such a derivation
//! between the expansions of its two sides; derivability asks the emitted
//! system to reduce `R` to `b` and every definition word to its letter.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewrite::RewriteSystem;
use crate::word::{relator_word, Letter, RelatorExponents, Word};

pub const DEFAULT_DEPTH_LIMIT: usize = 20;
pub const DEFAULT_EXTRA_LENGTH: usize = 24;
pub const DEFAULT_FRONTIER_CAP: usize = 2_000_000;
pub const DEFAULT_CROSS_MAXLEN: usize = 7;
pub const DEFAULT_BOUND_DOUBLINGS: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relator must have length >= 2 and end in b")]
    BadRelator,
}

/// `Mon<a, b : relator = b>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    relator: Word,
}

impl Presentation {
    pub fn new(relator: Word) -> Result<Self, PresentationError> {
        if relator.len() < 2 || relator.last() != Some(&Letter::B) || !relator.uses_only(&Letter::BASE) {
            return Err(PresentationError::BadRelator);
        }
        Ok(Presentation { relator })
    }

    pub fn from_exponents(e: &RelatorExponents) -> Self {
        Presentation { relator: relator_word(e) }
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Image of `w` under the homomorphism to the integers that sends `a` to
    /// `|R|_b - 1` and `b` to `-|R|_a`. It kills `R` against `b`, so words
    /// equal in the monoid have equal images.
    pub fn abelian_image(&self, w: &[Letter]) -> i64 {
        let count = |l: Letter| self.relator.iter().filter(|&&x| x == l).count() as i64;
        let (wa, wb) = (count(Letter::B) - 1, -count(Letter::A));
        w.iter()
            .map(|&l| match l {
                Letter::A => wa,
                Letter::B => wb,
                _ => 0,
            })
            .sum()
    }

    /// Every word one relation application away from `w`, with the step
    /// that produced it, skipping results longer than `length_limit`.
    pub fn neighbours(&self, w: &[Letter], length_limit: usize) -> Vec<(Word, Step)> {
        let r = &self.relator;
        let mut out = Vec::new();
        if w.len() >= r.len() {
            for pos in 0..=w.len() - r.len() {
                if w[pos..pos + r.len()] == r[..] {
                    let next = splice(w, pos, r.len(), &[Letter::B]);
                    out.push((next, Step { position: pos, kind: StepKind::Delete }));
                }
            }
        }
        if w.len() + r.len() - 1 <= length_limit {
            for (pos, &l) in w.iter().enumerate() {
                if l == Letter::B {
                    let next = splice(w, pos, 1, r);
                    out.push((next, Step { position: pos, kind: StepKind::Insert }));
                }
            }
        }
        out
    }

    /// Checks that `to` arises from `from` by the recorded step.
    pub fn replays(&self, from: &[Letter], to: &[Letter], step: Step) -> bool {
        let r = &self.relator;
        match step.kind {
            StepKind::Delete => {
                step.position + r.len() <= from.len()
                    && from[step.position..step.position + r.len()] == r[..]
                    && splice(from, step.position, r.len(), &[Letter::B])[..] == *to
            }
            StepKind::Insert => {
                from.get(step.position) == Some(&Letter::B) && splice(from, step.position, 1, r)[..] == *to
            }
        }
    }
}

fn splice(w: &[Letter], pos: usize, len: usize, with: &[Letter]) -> Word {
    let mut v = Vec::with_capacity(w.len() - len + with.len());
    v.extend_from_slice(&w[..pos]);
    v.extend_from_slice(with);
    v.extend_from_slice(&w[pos + len..]);
    Word::from(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// relator -> b
    Delete,
    /// b -> relator
    Insert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub position: usize,
    pub kind: StepKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsBounds {
    pub depth_limit: usize,
    /// `None` means `|relator| + 24`.
    pub length_limit: Option<usize>,
    pub frontier_cap: usize,
}

impl Default for BfsBounds {
    fn default() -> Self {
        BfsBounds { depth_limit: DEFAULT_DEPTH_LIMIT, length_limit: None, frontier_cap: DEFAULT_FRONTIER_CAP }
    }
}

impl BfsBounds {
    pub fn length_limit_for(&self, p: &Presentation) -> usize {
        self.length_limit.unwrap_or(p.relator().len() + DEFAULT_EXTRA_LENGTH)
    }

    pub fn scaled(&self, p: &Presentation, factor: usize) -> BfsBounds {
        BfsBounds {
            depth_limit: self.depth_limit * factor,
            length_limit: Some(self.length_limit_for(p) * factor),
            frontier_cap: self.frontier_cap,
        }
    }
}

/// A derivation: `words[i + 1]` arises from `words[i]` by `steps[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub words: Vec<Word>,
    pub steps: Vec<Step>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn max_length(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn replays(&self, p: &Presentation) -> bool {
        self.words.len() == self.steps.len() + 1
            && self.words.windows(2).zip(&self.steps).all(|(pair, &step)| p.replays(&pair[0], &pair[1], step))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum EqualityVerdict {
    Proved { depth: usize, chain: Chain },
    Unknown { explored: usize, frontier_overflow: bool },
}

impl EqualityVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, EqualityVerdict::Proved { .. })
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            EqualityVerdict::Proved { depth, .. } => Some(*depth),
            EqualityVerdict::Unknown { .. } => None,
        }
    }
}

/// (word, depth, parent id and the step from the parent to this word)
type Node = (Word, usize, Option<(usize, Step)>);

struct Side {
    ids: HashMap<Word, usize>,
    nodes: Vec<Node>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(start: &[Letter]) -> Self {
        let w = Word::from(start.to_vec());
        let mut ids = HashMap::new();
        ids.insert(w.clone(), 0);
        Side { ids, nodes: vec![(w, 0, None)], frontier: vec![0], depth: 0 }
    }

    /// Path from the start to node `id`, as words and steps.
    fn path(&self, mut id: usize) -> (Vec<Word>, Vec<Step>) {
        let mut words = vec![self.nodes[id].0.clone()];
        let mut steps = Vec::new();
        while let Some((parent, step)) = self.nodes[id].2 {
            steps.push(step);
            words.push(self.nodes[parent].0.clone());
            id = parent;
        }
        words.reverse();
        steps.reverse();
        (words, steps)
    }
}

/// Inverts a step so that it leads from `to` back to `from`.
fn invert(step: Step) -> Step {
    let kind = match step.kind {
        StepKind::Delete => StepKind::Insert,
        StepKind::Insert => StepKind::Delete,
    };
    Step { position: step.position, kind }
}

/// Bidirectional breadth-first search for a derivation from `u` to `v`.
/// Whole levels are expanded at a time (smaller frontier first), so a
/// returned chain has minimal length among derivations within the length
/// limit.
pub fn bfs_equal(u: &[Letter], v: &[Letter], p: &Presentation, bounds: &BfsBounds) -> EqualityVerdict {
    if u == v {
        return EqualityVerdict::Proved {
            depth: 0,
            chain: Chain { words: vec![Word::from(u.to_vec())], steps: vec![] },
        };
    }
    let length_limit = bounds.length_limit_for(p);
    let mut fwd = Side::new(u);
    let mut bwd = Side::new(v);
    let mut overflow = false;

    while fwd.depth + bwd.depth < bounds.depth_limit {
        let expand_forward = fwd.frontier.len() <= bwd.frontier.len();
        let (this, other) = if expand_forward { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        if this.frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        let mut best: Option<(usize, usize, usize)> = None; // (total, this id, other id)
        for &id in &std::mem::take(&mut this.frontier) {
            let word = this.nodes[id].0.clone();
            for (n, step) in p.neighbours(&word, length_limit) {
                if this.ids.contains_key(&n) {
                    continue;
                }
                if this.nodes.len() + other.nodes.len() >= bounds.frontier_cap {
                    overflow = true;
                    break;
                }
                let nid = this.nodes.len();
                this.ids.insert(n.clone(), nid);
                if let Some(&oid) = other.ids.get(&n) {
                    let total = this.depth + 1 + other.nodes[oid].1;
                    if best.is_none_or(|b| total < b.0) {
                        best = Some((total, nid, oid));
                    }
                }
                this.nodes.push((n, this.depth + 1, Some((id, step))));
                next.push(nid);
            }
            if overflow {
                break;
            }
        }
        this.depth += 1;
        this.frontier = next;
        if let Some((total, tid, oid)) = best {
            let (f_id, b_id) = if expand_forward { (tid, oid) } else { (oid, tid) };
            return EqualityVerdict::Proved { depth: total, chain: join_paths(&fwd, f_id, &bwd, b_id) };
        }
        if overflow {
            break;
        }
    }
    EqualityVerdict::Unknown { explored: fwd.nodes.len() + bwd.nodes.len(), frontier_overflow: overflow }
}

fn join_paths(fwd: &Side, f_id: usize, bwd: &Side, b_id: usize) -> Chain {
    let (mut words, mut steps) = fwd.path(f_id);
    let (bwords, bsteps) = bwd.path(b_id);
    // the backward path runs from v to the meeting word; walk it in reverse
    for (w, s) in bwords.iter().rev().skip(1).zip(bsteps.iter().rev()) {
        words.push(w.clone());
        steps.push(invert(*s));
    }
    Chain { words, steps }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("auxiliary letter {0} has no definition")]
pub struct UndefinedLetter(pub Letter);

/// Substitutes definitions for auxiliary letters.
pub fn expand(w: &[Letter], defs: &BTreeMap<Letter, Word>) -> Result<Word, UndefinedLetter> {
    let mut out = Word::empty();
    for &l in w {
        if l.is_auxiliary() {
            out.extend_from(defs.get(&l).ok_or(UndefinedLetter(l))?);
        } else {
            out.push(l);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSoundness {
    pub rule: usize,
    pub lhs: Word,
    pub rhs: Word,
    pub verdict: EqualityVerdict,
    /// The two sides have different abelian images, so the rule is false.
    #[serde(default)]
    pub refuted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub bounds: BfsBounds,
    pub rules: Vec<RuleSoundness>,
}

impl SoundnessReport {
    pub fn all_proved(&self) -> bool {
        self.rules.iter().all(|r| r.verdict.is_proved())
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.rules.iter().filter_map(|r| r.verdict.depth()).max()
    }

    pub fn any_refuted(&self) -> bool {
        self.rules.iter().any(|r| r.refuted)
    }
}

pub fn check_soundness(
    s: &RewriteSystem,
    p: &Presentation,
    bounds: &BfsBounds,
) -> Result<SoundnessReport, UndefinedLetter> {
    let rules = s
        .rules()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let lhs = expand(&r.lhs, s.definitions())?;
            let rhs = expand(&r.rhs, s.definitions())?;
            let refuted = p.abelian_image(&lhs) != p.abelian_image(&rhs);
            let verdict = bfs_equal(&lhs, &rhs, p, bounds);
            Ok(RuleSoundness { rule: i, lhs, rhs, verdict, refuted })
        })
        .collect::<Result<Vec<_>, UndefinedLetter>>()?;
    Ok(SoundnessReport { bounds: *bounds, rules })
}

/// Outcome of one derivability clause; `None` means the step limit was hit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivabilityReport {
    pub relator_reduces_to_b: Option<bool>,
    pub b_irreducible: bool,
    pub definitions: BTreeMap<Letter, Option<bool>>,
}

impl DerivabilityReport {
    pub fn passes(&self) -> bool {
        self.relator_reduces_to_b == Some(true)
            && self.b_irreducible
            && self.definitions.values().all(|v| *v == Some(true))
    }

    pub fn undecided(&self) -> bool {
        self.relator_reduces_to_b.is_none() || self.definitions.values().any(Option::is_none)
    }
}

pub fn check_derivability(s: &RewriteSystem, p: &Presentation, step_limit: usize) -> DerivabilityReport {
    let reduces_to = |w: &[Letter], target: &[Letter]| s.normalize(w, step_limit).ok().map(|n| n.word[..] == *target);
    let definitions = s.definitions().iter().map(|(&l, def)| (l, reduces_to(def, &[l]))).collect();
    DerivabilityReport {
        relator_reduces_to_b: reduces_to(p.relator(), &[Letter::B]),
        b_irreducible: s.is_normal(&[Letter::B]),
        definitions,
    }
}

/// All words over `{a, b}` of length at most `maxlen`, shortlex order.
pub fn base_words(maxlen: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for l in Letter::BASE {
                let mut n = w.clone();
                n.push(l);
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub maxlen: usize,
    pub words: usize,
    /// Normal form -> members, for classes with more than one member.
    pub classes: BTreeMap<String, Vec<Word>>,
    /// Pairs with equal normal forms that no search within the bound cap connected.
    pub cap_exhausted: Vec<(Word, Word)>,
    /// Pairs connected by a derivation but with different normal forms.
    pub logical_failures: Vec<(Word, Word)>,
    /// Words whose normalization hit the step limit.
    pub undecided_words: Vec<Word>,
    pub frontier_overflow: bool,
}

impl CrossCheckReport {
    pub fn passes(&self) -> bool {
        self.cap_exhausted.is_empty() && self.logical_failures.is_empty() && self.undecided_words.is_empty()
    }
}

/// Compares the normal-form partition of all base words up to `maxlen`
/// with the derivation-search oracle.
///
/// Same normal form => a derivation must be found (bounds are doubled up to
/// `doublings` times before giving up). Connected by a derivation =>
/// normal forms must agree; this direction floods radius `ceil(depth/2)`
/// around all words at once and flags any relation step joining two
/// classes, which covers every meeting of the bidirectional search.
pub fn cross_check(
    s: &RewriteSystem,
    p: &Presentation,
    maxlen: usize,
    bounds: &BfsBounds,
    step_limit: usize,
    doublings: u32,
) -> CrossCheckReport {
    let words = base_words(maxlen);
    let mut report = CrossCheckReport {
        maxlen,
        words: words.len(),
        classes: BTreeMap::new(),
        cap_exhausted: Vec::new(),
        logical_failures: Vec::new(),
        undecided_words: Vec::new(),
        frontier_overflow: false,
    };
    let mut by_nf: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    let mut nf_of: HashMap<Word, Word> = HashMap::new();
    for w in &words {
        match s.normalize(w, step_limit) {
            Ok(n) => {
                by_nf.entry(n.word.clone()).or_default().push(w.clone());
                nf_of.insert(w.clone(), n.word);
            }
            Err(_) => report.undecided_words.push(w.clone()),
        }
    }

    for members in by_nf.values() {
        let rep = &members[0];
        for other in &members[1..] {
            let mut proved = false;
            let mut current = *bounds;
            for round in 0..=doublings {
                if round > 0 {
                    current = bounds.scaled(p, 1 << round);
                }
                match bfs_equal(rep, other, p, &current) {
                    EqualityVerdict::Proved { .. } => {
                        proved = true;
                        break;
                    }
                    EqualityVerdict::Unknown { frontier_overflow, .. } => {
                        report.frontier_overflow |= frontier_overflow;
                    }
                }
            }
            if !proved {
                report.cap_exhausted.push((rep.clone(), other.clone()));
            }
        }
    }

    // Converse direction: one breadth-first flood from every normalized word
    // at once, each visited word labelled with the source that reached it
    // first. A relation step between words whose sources have different
    // normal forms is a derivation between two classes.
    let radius = bounds.depth_limit.div_ceil(2);
    let length_limit = bounds.length_limit_for(p);
    let sources: Vec<&Word> = words.iter().filter(|w| nf_of.contains_key(*w)).collect();
    let mut owner: HashMap<Word, usize> = HashMap::new();
    let mut frontier: Vec<Word> = Vec::new();
    for (i, w) in sources.iter().enumerate() {
        owner.insert((*w).clone(), i);
        frontier.push((*w).clone());
    }
    let mut flagged = std::collections::HashSet::new();
    'levels: for level in 0..=radius {
        let mut next = Vec::new();
        for w in &frontier {
            let mine = owner[w];
            for (n, _) in p.neighbours(w, length_limit) {
                match owner.get(&n) {
                    Some(&other) => {
                        if nf_of[sources[other]] != nf_of[sources[mine]] {
                            let pair = if other < mine { (other, mine) } else { (mine, other) };
                            if flagged.insert(pair) {
                                report.logical_failures.push((sources[pair.0].clone(), sources[pair.1].clone()));
                            }
                        }
                    }
                    None if level < radius => {
                        if owner.len() >= bounds.frontier_cap {
                            report.frontier_overflow = true;
                            break 'levels;
                        }
                        owner.insert(n.clone(), mine);
                        next.push(n);
                    }
                    None => {}
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    report.classes = by_nf.into_iter().filter(|(_, m)| m.len() > 1).map(|(nf, m)| (nf.to_string(), m)).collect();
    report
}
