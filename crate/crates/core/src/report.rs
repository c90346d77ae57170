//! Full verification pipeline for one system.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::confluence::{check_local_confluence, ConfluenceReport};
use crate::rewrite::{RewriteSystem, DEFAULT_STEP_LIMIT};
use crate::termination::{
    affine_obstruction, check_certificate, find_affine_interpretation, AffineInterpretation, CertificateCheck,
    DEFAULT_COEF_BOUND, DEFAULT_CONST_BOUND,
};
use crate::verifier::{
    check_derivability, check_soundness, cross_check, BfsBounds, CrossCheckReport, DerivabilityReport, Presentation,
    SoundnessReport, DEFAULT_BOUND_DOUBLINGS, DEFAULT_CROSS_MAXLEN,
};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub step_limit: usize,
    pub coef_bound: u32,
    pub const_bound: u32,
    pub bfs: BfsBounds,
    pub cross_maxlen: usize,
    pub bound_doublings: u32,
    pub soundness: bool,
    pub cross_check: bool,
    /// Random words normalized when no certificate is found.
    pub probe_words: usize,
    pub probe_max_len: usize,
    pub probe_step_limit: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            step_limit: DEFAULT_STEP_LIMIT,
            coef_bound: DEFAULT_COEF_BOUND,
            const_bound: DEFAULT_CONST_BOUND,
            bfs: BfsBounds::default(),
            cross_maxlen: DEFAULT_CROSS_MAXLEN,
            bound_doublings: DEFAULT_BOUND_DOUBLINGS,
            soundness: true,
            cross_check: true,
            probe_words: 1000,
            probe_max_len: 12,
            probe_step_limit: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Green,
    Undecided,
    Red,
}

impl Verdict {
    fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Red, _) | (_, Red) => Red,
            (Undecided, _) | (_, Undecided) => Undecided,
            _ => Green,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Green => 0,
            Verdict::Red => 1,
            Verdict::Undecided => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum TerminationStatus {
    Certified {
        interpretation: AffineInterpretation,
        check: CertificateCheck,
    },
    /// No certificate within bounds, but every probe word normalized.
    Unverified {
        probed: usize,
        /// Rule that no affine interpretation of any size can orient.
        #[serde(default)]
        obstruction: Option<usize>,
    },
    /// No certificate and some probe word hit the step limit.
    Red {
        probed: usize,
        witness: Word,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationReport {
    pub coef_bound: u32,
    pub const_bound: u32,
    #[serde(flatten)]
    pub status: TerminationStatus,
}

pub fn check_termination(s: &RewriteSystem, config: &VerifyConfig) -> TerminationReport {
    let obstruction = affine_obstruction(s);
    let found = match obstruction {
        Some(_) => None,
        None => find_affine_interpretation(s, config.coef_bound, config.const_bound),
    };
    let status = match found {
        Some(interpretation) => {
            let check = check_certificate(s, &interpretation).expect("search covers the alphabet");
            TerminationStatus::Certified { interpretation, check }
        }
        None => bounded_derivation_probe(s, config, obstruction),
    };
    TerminationReport { coef_bound: config.coef_bound, const_bound: config.const_bound, status }
}

fn bounded_derivation_probe(s: &RewriteSystem, config: &VerifyConfig, obstruction: Option<usize>) -> TerminationStatus {
    let letters: Vec<Letter> = s.alphabet().iter().copied().collect();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..config.probe_words {
        let len = rng.gen_range(0..=config.probe_max_len);
        let w: Vec<Letter> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        if s.normalize(&w, config.probe_step_limit).is_err() {
            return TerminationStatus::Red { probed: config.probe_words, witness: Word::from(w) };
        }
    }
    TerminationStatus::Unverified { probed: config.probe_words, obstruction }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub system: RewriteSystem,
    pub relator: Word,
    pub confluence: ConfluenceReport,
    pub termination: TerminationReport,
    pub soundness: Option<SoundnessReport>,
    pub derivability: DerivabilityReport,
    pub cross_check: Option<CrossCheckReport>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn confluence_verdict(&self) -> Verdict {
        if !self.confluence.failures.is_empty() {
            Verdict::Red
        } else if !self.confluence.undecided.is_empty() {
            Verdict::Undecided
        } else {
            Verdict::Green
        }
    }

    pub fn termination_verdict(&self) -> Verdict {
        match self.termination.status {
            TerminationStatus::Certified { .. } => Verdict::Green,
            // Bounded-derivation fallback: no certificate, but no probe word
            // exceeded the step limit either.
            TerminationStatus::Unverified { .. } => Verdict::Green,
            TerminationStatus::Red { .. } => Verdict::Red,
        }
    }

    pub fn soundness_verdict(&self) -> Verdict {
        match &self.soundness {
            Some(r) if r.any_refuted() => Verdict::Red,
            Some(r) if !r.all_proved() => Verdict::Undecided,
            _ => Verdict::Green,
        }
    }

    pub fn derivability_verdict(&self) -> Verdict {
        if self.derivability.passes() {
            Verdict::Green
        } else if self.derivability.undecided() && self.derivability.b_irreducible {
            Verdict::Undecided
        } else {
            Verdict::Red
        }
    }

    pub fn cross_check_verdict(&self) -> Verdict {
        match &self.cross_check {
            Some(r) if !r.logical_failures.is_empty() => Verdict::Red,
            Some(r) if !r.passes() => Verdict::Undecided,
            _ => Verdict::Green,
        }
    }

    fn overall(&self) -> Verdict {
        [
            self.confluence_verdict(),
            self.termination_verdict(),
            self.soundness_verdict(),
            self.derivability_verdict(),
            self.cross_check_verdict(),
        ]
        .into_iter()
        .fold(Verdict::Green, Verdict::worst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let tag = |v: Verdict| match v {
            Verdict::Green => "ok",
            Verdict::Undecided => "UNDECIDED",
            Verdict::Red => "FAIL",
        };
        if let Some(m) = self.system.meta() {
            out.push_str(&format!("exponents {}: {}\n", m.exponents, m.classification));
        }
        out.push_str(&format!("relator: {} = b\n", self.relator));
        out.push_str(&self.system.to_string());
        out.push_str(&format!(
            "confluence [{}]: {}/{} critical pairs joinable, {} failing, {} undecided\n",
            tag(self.confluence_verdict()),
            self.confluence.joinable,
            self.confluence.pairs,
            self.confluence.failures.len(),
            self.confluence.undecided.len()
        ));
        for f in &self.confluence.failures {
            out.push_str(&format!("  overlap {}: {} vs {}\n", f.pair.overlap_word, f.left_normal, f.right_normal));
        }
        let term = match &self.termination.status {
            TerminationStatus::Certified { interpretation, .. } => format!("certificate {interpretation}"),
            TerminationStatus::Unverified { probed, obstruction } => {
                let why = match obstruction {
                    Some(i) => format!("no affine certificate exists (r{i} gains every letter)"),
                    None => format!(
                        "no certificate within coef<={} const<={}",
                        self.termination.coef_bound, self.termination.const_bound
                    ),
                };
                format!("unverified, {why}; all {probed} probe words normalized")
            }
            TerminationStatus::Red { witness, .. } => format!("no certificate; step limit hit on {witness}"),
        };
        out.push_str(&format!("termination [{}]: {term}\n", tag(self.termination_verdict())));
        match &self.soundness {
            Some(r) => {
                let proved = r.rules.iter().filter(|x| x.verdict.is_proved()).count();
                out.push_str(&format!(
                    "soundness [{}]: {proved}/{} rules proved, max depth {}\n",
                    tag(self.soundness_verdict()),
                    r.rules.len(),
                    r.max_depth().map_or("-".into(), |d| d.to_string())
                ));
                for x in r.rules.iter().filter(|x| !x.verdict.is_proved()) {
                    let why = if x.refuted { "refuted by abelian image" } else { "unknown" };
                    out.push_str(&format!("  r{} {why}: {} = {}\n", x.rule, x.lhs, x.rhs));
                }
            }
            None => out.push_str("soundness: skipped\n"),
        }
        out.push_str(&format!(
            "derivability [{}]: relator->b {:?}, b irreducible {}, definitions {:?}\n",
            tag(self.derivability_verdict()),
            self.derivability.relator_reduces_to_b,
            self.derivability.b_irreducible,
            self.derivability.definitions
        ));
        match &self.cross_check {
            Some(r) => out.push_str(&format!(
                "cross-check [{}]: maxlen {}, {} words, {} nontrivial classes, {} logical failures, {} cap exhaustions\n",
                tag(self.cross_check_verdict()),
                r.maxlen,
                r.words,
                r.classes.len(),
                r.logical_failures.len(),
                r.cap_exhausted.len()
            )),
            None => out.push_str("cross-check: skipped\n"),
        }
        out.push_str(&format!("verdict: {:?}\n", self.verdict));
        out
    }
}

pub fn verify_system(s: &RewriteSystem, p: &Presentation, config: &VerifyConfig) -> VerificationReport {
    let confluence = check_local_confluence(s, config.step_limit);
    let termination = check_termination(s, config);
    let soundness = config.soundness.then(|| check_soundness(s, p, &config.bfs)).transpose().unwrap_or(None);
    let derivability = check_derivability(s, p, config.step_limit);
    let cross_check = config
        .cross_check
        .then(|| cross_check(s, p, config.cross_maxlen, &config.bfs, config.step_limit, config.bound_doublings));
    let mut report = VerificationReport {
        system: s.clone(),
        relator: p.relator().clone(),
        confluence,
        termination,
        soundness,
        derivability,
        cross_check,
        verdict: Verdict::Green,
    };
    if config.soundness && report.soundness.is_none() {
        // undefined auxiliary letter: cannot relate the system to the presentation
        report.verdict = Verdict::Red;
    } else {
        report.verdict = report.overall();
    }
    report
}
