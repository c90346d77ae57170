//! Case taxonomy for relators `a^alpha b^beta a^gamma b^delta a^epsilon b^phi`.
//!
//! A relator with no self-overlap gets the single rule `relator -> b`.
//! Otherwise it is written either as
//! `a^p b^{q+s} a^{r+pk} b^{q+s} a^{r+pk} b^s` (case 1, the overlap reaches
//! into the fourth and fifth blocks) or as
//! `a^p b^{q+s} a^gamma b^delta a^{r+pk} b^s` with `gamma != r+pk` or
//! `delta != q+s` (case 2), and then split further into subcases.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{border_lengths, relator_word, RelatorExponents};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum CaseLabel {
    NoOverlap,
    C1a,
    C1b,
    C1c,
    C1d_lo,
    C1d_hi,
    C2a_basic,
    C2a_special,
    C2b_basic,
    C2b_special,
    C2c_lo,
    C2c_hi,
    C2d_gamma_lt_p,
    C2d_u_pos_delta_lt_s,
    C2d_u_pos_delta_ge_s_lo,
    C2d_u_pos_delta_ge_s_hi,
    C2d_u0_t_ge2_delta_ge,
    C2d_u0_t_ge2_delta_lt,
    C2d_u0_t1_delta_lt_s,
    C2d_u0_t1_delta_ge_s_lo,
    C2d_u0_t1_delta_ge_s_hi,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 21] = [
        CaseLabel::NoOverlap,
        CaseLabel::C1a,
        CaseLabel::C1b,
        CaseLabel::C1c,
        CaseLabel::C1d_lo,
        CaseLabel::C1d_hi,
        CaseLabel::C2a_basic,
        CaseLabel::C2a_special,
        CaseLabel::C2b_basic,
        CaseLabel::C2b_special,
        CaseLabel::C2c_lo,
        CaseLabel::C2c_hi,
        CaseLabel::C2d_gamma_lt_p,
        CaseLabel::C2d_u_pos_delta_lt_s,
        CaseLabel::C2d_u_pos_delta_ge_s_lo,
        CaseLabel::C2d_u_pos_delta_ge_s_hi,
        CaseLabel::C2d_u0_t_ge2_delta_ge,
        CaseLabel::C2d_u0_t_ge2_delta_lt,
        CaseLabel::C2d_u0_t1_delta_lt_s,
        CaseLabel::C2d_u0_t1_delta_ge_s_lo,
        CaseLabel::C2d_u0_t1_delta_ge_s_hi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::NoOverlap => "NoOverlap",
            CaseLabel::C1a => "C1a",
            CaseLabel::C1b => "C1b",
            CaseLabel::C1c => "C1c",
            CaseLabel::C1d_lo => "C1d_lo",
            CaseLabel::C1d_hi => "C1d_hi",
            CaseLabel::C2a_basic => "C2a_basic",
            CaseLabel::C2a_special => "C2a_special",
            CaseLabel::C2b_basic => "C2b_basic",
            CaseLabel::C2b_special => "C2b_special",
            CaseLabel::C2c_lo => "C2c_lo",
            CaseLabel::C2c_hi => "C2c_hi",
            CaseLabel::C2d_gamma_lt_p => "C2d_gamma_lt_p",
            CaseLabel::C2d_u_pos_delta_lt_s => "C2d_u_pos_delta_lt_s",
            CaseLabel::C2d_u_pos_delta_ge_s_lo => "C2d_u_pos_delta_ge_s_lo",
            CaseLabel::C2d_u_pos_delta_ge_s_hi => "C2d_u_pos_delta_ge_s_hi",
            CaseLabel::C2d_u0_t_ge2_delta_ge => "C2d_u0_t_ge2_delta_ge",
            CaseLabel::C2d_u0_t_ge2_delta_lt => "C2d_u0_t_ge2_delta_lt",
            CaseLabel::C2d_u0_t1_delta_lt_s => "C2d_u0_t1_delta_lt_s",
            CaseLabel::C2d_u0_t1_delta_ge_s_lo => "C2d_u0_t1_delta_ge_s_lo",
            CaseLabel::C2d_u0_t1_delta_ge_s_hi => "C2d_u0_t1_delta_ge_s_hi",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown case label {0:?}")]
pub struct UnknownLabel(pub String);

impl FromStr for CaseLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseLabel::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

/// Parameters derived from the exponents. `gamma` and `delta` are carried
/// along because several case 2 templates use them verbatim.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseParams {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub gamma: usize,
    pub delta: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseClassification {
    #[serde(rename = "case")]
    pub label: CaseLabel,
    pub params: CaseParams,
}

impl fmt::Display for CaseClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if self.label == CaseLabel::NoOverlap {
            return Ok(());
        }
        let p = &self.params;
        write!(f, " p={} q={} r={} k={} s={}", p.p, p.q, p.r, p.k, p.s)?;
        if let Some(x) = p.x_index {
            write!(f, " x={x}")?;
        }
        if let Some(t) = p.t {
            write!(f, " t={t}")?;
        }
        if let Some(u) = p.u {
            write!(f, " u={u}")?;
        }
        Ok(())
    }
}

/// Which reading of the typographically ambiguous exponents in the 2a/2b
/// families is used when instantiating templates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateReading {
    #[default]
    Canonical,
    Alternate,
}

impl FromStr for TemplateReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(TemplateReading::Canonical),
            "alternate" => Ok(TemplateReading::Alternate),
            other => Err(format!("unknown template reading {other:?}")),
        }
    }
}

/// Provenance attached to emitted systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemMeta {
    #[serde(flatten)]
    pub classification: CaseClassification,
    pub exponents: RelatorExponents,
    pub reading: TemplateReading,
    pub anchors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("relator {0} overlaps itself but matches neither case")]
    UnclassifiedOverlap(RelatorExponents),
}

pub fn classify(e: &RelatorExponents) -> Result<CaseClassification, ClassifyError> {
    let relator = relator_word(e);
    let borders = border_lengths(&relator).expect("relators are nonempty");
    if borders.is_empty() {
        return Ok(CaseClassification { label: CaseLabel::NoOverlap, params: CaseParams::default() });
    }
    let unclassified = ClassifyError::UnclassifiedOverlap(*e);
    if e.phi > e.beta {
        return Err(unclassified);
    }
    let p = e.alpha;
    let s = e.phi;
    let q = e.beta - e.phi;
    let mut params = CaseParams { p, q, s, gamma: e.gamma, delta: e.delta, ..CaseParams::default() };

    if e.beta == e.delta && e.gamma == e.epsilon {
        if e.gamma < p {
            return Err(unclassified);
        }
        params.r = e.gamma % p;
        params.k = e.gamma / p;
        let label = match (s, params.r, params.k) {
            (1, _, _) => CaseLabel::C1a,
            (_, r, _) if r > 0 => CaseLabel::C1b,
            (_, _, 1) => CaseLabel::C1c,
            _ if q < s - 1 => CaseLabel::C1d_lo,
            _ => CaseLabel::C1d_hi,
        };
        return Ok(CaseClassification { label, params });
    }

    if e.epsilon < p {
        return Err(unclassified);
    }
    let (r, k) = (e.epsilon % p, e.epsilon / p);
    params.r = r;
    params.k = k;
    let (gamma, delta) = (e.gamma, e.delta);
    // gamma = p*x + r with 1 <= x <= k-1
    let x_index = (gamma >= r && (gamma - r) % p == 0).then(|| (gamma - r) / p).filter(|&x| x >= 1 && x < k);

    let label = if r > 0 && s == 1 {
        match x_index {
            Some(x) if k >= 2 && delta == q + 1 => {
                params.x_index = Some(x);
                CaseLabel::C2a_special
            }
            _ => CaseLabel::C2a_basic,
        }
    } else if r > 0 {
        match x_index {
            Some(x) if delta == q + s => {
                params.x_index = Some(x);
                CaseLabel::C2b_special
            }
            _ => CaseLabel::C2b_basic,
        }
    } else if k > 1 {
        if q < s - 1 {
            CaseLabel::C2c_lo
        } else {
            CaseLabel::C2c_hi
        }
    } else if gamma < p {
        CaseLabel::C2d_gamma_lt_p
    } else {
        let (t, u) = (gamma / p, gamma % p);
        params.t = Some(t);
        params.u = Some(u);
        if u != 0 {
            if delta < s {
                CaseLabel::C2d_u_pos_delta_lt_s
            } else if q < delta + 1 - s {
                CaseLabel::C2d_u_pos_delta_ge_s_lo
            } else {
                CaseLabel::C2d_u_pos_delta_ge_s_hi
            }
        } else if t >= 2 {
            if delta >= q + s {
                CaseLabel::C2d_u0_t_ge2_delta_ge
            } else {
                CaseLabel::C2d_u0_t_ge2_delta_lt
            }
        } else if delta < s {
            CaseLabel::C2d_u0_t1_delta_lt_s
        } else if q < delta - s + 1 {
            CaseLabel::C2d_u0_t1_delta_ge_s_lo
        } else {
            CaseLabel::C2d_u0_t1_delta_ge_s_hi
        }
    };
    Ok(CaseClassification { label, params })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(e: [usize; 6]) -> CaseClassification {
        classify(&RelatorExponents::new(e).unwrap()).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = cls([1, 1, 1, 1, 1, 1]);
        assert_eq!(c.label, CaseLabel::C1a);
        assert_eq!((c.params.p, c.params.q, c.params.r, c.params.k, c.params.s), (1, 0, 0, 1, 1));
        assert_eq!(cls([1, 1, 1, 1, 1, 2]).label, CaseLabel::NoOverlap);
        let c = cls([1, 1, 2, 1, 1, 1]);
        assert_eq!(c.label, CaseLabel::C2d_u0_t_ge2_delta_ge);
        assert_eq!((c.params.p, c.params.s, c.params.q, c.params.r, c.params.k), (1, 1, 0, 0, 1));
        assert_eq!((c.params.t, c.params.u), (Some(2), Some(0)));
    }

    #[test]
    fn special_branches_record_x_index() {
        let c = cls([2, 1, 3, 1, 5, 1]);
        assert_eq!(c.label, CaseLabel::C2a_special);
        assert_eq!(c.params.x_index, Some(1));
        let c = cls([2, 2, 3, 2, 5, 2]);
        assert_eq!(c.label, CaseLabel::C2b_special);
        assert_eq!(c.params.x_index, Some(1));
        assert_eq!(cls([2, 2, 1, 1, 3, 2]).params.x_index, None);
    }

    #[test]
    fn parameter_invariants_hold_on_grid() {
        for e in RelatorExponents::grid(4) {
            let c = classify(&e).unwrap();
            if c.label == CaseLabel::NoOverlap {
                continue;
            }
            let p = c.params;
            assert_eq!(p.p, e.alpha);
            assert_eq!(p.s, e.phi);
            assert_eq!(p.q + p.s, e.beta);
            assert!(p.r < p.p && p.k >= 1);
            let case1 = c.label.name().starts_with("C1");
            if case1 {
                assert!(e.beta == e.delta && e.gamma == e.epsilon);
                assert_eq!(p.r + p.p * p.k, e.gamma);
            } else {
                assert!(e.gamma != e.epsilon || e.delta != e.beta);
                assert_eq!(p.r + p.p * p.k, e.epsilon);
            }
        }
    }

    #[test]
    fn label_names_round_trip() {
        for l in CaseLabel::ALL {
            assert_eq!(l.name().parse::<CaseLabel>().unwrap(), l);
        }
        assert!("C9".parse::<CaseLabel>().is_err());
    }
}
