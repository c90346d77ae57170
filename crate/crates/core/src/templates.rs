//! Template registry and system emission.
//!
//! Each case label owns one template: the auxiliary letters it introduces,
//! their definitions over `{a, b}`, and a list of rule schemas. A schema may
//! carry an index family (`i` or `j` ranging over an inclusive interval) and,
//! where the printed exponents are typographically ambiguous, an alternate
//! reading selectable with [`TemplateReading::Alternate`].
//!
//! Parameter names usable in schemas: `p q r s k gamma delta xi t u` plus
//! the family variables `i` and `j`. `xi` is the index written `x` in
//! `gamma = p*x + r`; it is spelled differently to avoid a clash with the
//! letter `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use thiserror::Error;

use crate::classify::{classify, CaseClassification, CaseLabel, ClassifyError, SystemMeta, TemplateReading};
use crate::rewrite::{RewriteSystem, Rule, SystemError};
use crate::schema::{parse_expr, Env, Expr, SchemaError, SymbolicWord};
use crate::word::{Letter, RelatorExponents};

#[derive(Debug, Clone)]
pub struct Family {
    pub var: &'static str,
    pub lo: Expr,
    pub hi: Expr,
}

#[derive(Debug, Clone)]
pub struct RuleSchema {
    pub lhs: SymbolicWord,
    pub rhs: SymbolicWord,
    pub family: Option<Family>,
    pub alternate: Option<(SymbolicWord, SymbolicWord)>,
}

impl RuleSchema {
    fn sides(&self, reading: TemplateReading) -> (&SymbolicWord, &SymbolicWord) {
        match (&self.alternate, reading) {
            (Some((l, r)), TemplateReading::Alternate) => (l, r),
            _ => (&self.lhs, &self.rhs),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Template {
    pub label: CaseLabel,
    pub extension: Vec<Letter>,
    pub definitions: Vec<(Letter, SymbolicWord)>,
    pub rules: Vec<RuleSchema>,
    pub side_conditions: &'static str,
    pub anchors: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("template {label}: {source}")]
    Schema { label: CaseLabel, source: SchemaError },
    #[error("template {label} produced an ill-formed system: {source}")]
    System { label: CaseLabel, source: SystemError },
}

fn sw(text: &str) -> SymbolicWord {
    SymbolicWord::parse(text).unwrap_or_else(|e| panic!("bad built-in schema {text:?}: {e}"))
}

fn rule(lhs: &str, rhs: &str) -> RuleSchema {
    RuleSchema { lhs: sw(lhs), rhs: sw(rhs), family: None, alternate: None }
}

fn family(var: &'static str, lo: &str, hi: &str, lhs: &str, rhs: &str) -> RuleSchema {
    let e = |t: &str| parse_expr(t).unwrap_or_else(|err| panic!("bad built-in range {t:?}: {err}"));
    RuleSchema { lhs: sw(lhs), rhs: sw(rhs), family: Some(Family { var, lo: e(lo), hi: e(hi) }), alternate: None }
}

fn with_alternate(mut schema: RuleSchema, lhs: &str, rhs: &str) -> RuleSchema {
    schema.alternate = Some((sw(lhs), sw(rhs)));
    schema
}

const X_AB_S: &str = "a^p b^s";

fn template(
    label: CaseLabel,
    definitions: &[(Letter, &str)],
    rules: Vec<RuleSchema>,
    side_conditions: &'static str,
    anchors: &[&'static str],
) -> Template {
    Template {
        label,
        extension: definitions.iter().map(|(l, _)| *l).collect(),
        definitions: definitions.iter().map(|(l, d)| (*l, sw(d))).collect(),
        rules,
        side_conditions,
        anchors: anchors.to_vec(),
    }
}

fn build_registry() -> Vec<Template> {
    use CaseLabel::*;
    use Letter::{X, Y, Z};

    let c1d_core = || {
        vec![
            rule("a^p x b^q x b^q x b^{s-1}", "x"),
            rule("a^p b", "x b^q x b^q x (b^{q+s-1} x b^q x)^{k-2}"),
            rule("x b^q x b^q x (b^{q+s-1} x b^q x)^{k-1}", "b"),
            rule("x b^q x b^q x (b^{q+s-1} x b^q x)^{k-2} b^{q+s}", "b^{q+1} x (b^{q+s-1} x b^q x)^{k-1}"),
            rule(
                "x b^q x b^q x (b^{q+s-1} x b^q x)^{k-2} b^{q+s-1} x b^{q+1}",
                "b^{q+1} x b^q x (b^{q+s-1} x b^q x)^{k-1}",
            ),
        ]
    };
    let c2c_core = || {
        vec![
            rule("a^gamma b^delta", "y"),
            rule("a^p z b^q y z b^{s-1}", "z"),
            rule("a^p x", "z b^q (y z b^{q+s-1})^{k-2}"),
            rule("a^p b", "z b^q (y z b^{q+s-1})^{k-2} y z"),
            rule("x y z", "b"),
            rule("z b^q (y z b^{q+s-1})^{k-1}", "x"),
            rule("x y x", "b^{q+1} (y z b^{q+s-1})^{k-1}"),
            rule("x y b", "b^{q+1} (y z b^{q+s-1})^{k-1} y z"),
        ]
    };
    let c2d_u_pos_ge_core = || {
        vec![
            rule("a^p b^s", "x"),
            rule("x b^q a^{p*(t-1)+u} x b^{delta-s} x", "b"),
            rule("x b^q a^{p*(t-1)+u} x b^{delta+1-s}", "b^{q+1} a^{p*(t-1)+u} x b^{delta-s} x"),
        ]
    };
    let c2d_u0_t_ge2_core = || {
        vec![rule("a^{p*t} b^delta a^p b^s", "x"), rule("a^p b^{q+s} x", "b"), rule("a^{p*t} b^{delta+1}", "x b^q x")]
    };
    let c2d_u0_t1_ge_core = || {
        vec![
            rule("a^p b^s", "x"),
            rule("x b^q x b^{delta-s} x", "b"),
            rule("x b^q x b^{delta-s+1}", "b^{q+1} x b^{delta-s} x"),
        ]
    };
    let c2a_family = |var: &'static str, lo: &str, hi: &str| {
        with_alternate(
            family(var, lo, hi, "a^p b^{q+1} a^gamma b^delta a^{p*i+r} b", "b^{q+1} a^gamma b^delta a^{p*(i+1)+r} b"),
            "a^p b^{q+1} a^gamma b^delta a^{p*(i+r)} b",
            "b^{q+1} a^gamma b^delta a^{p*(i+1)+r} b",
        )
    };
    let c2b_family = with_alternate(
        family(
            "i",
            "0",
            "k-1",
            "a^p b^{q+s} a^gamma b^delta a^{p*i+r} b",
            "b^{q+1} a^gamma b^delta a^{p*k+r} b^s (b^{q+s-1} a^gamma b^delta a^{p*k+r} b^s)^{k-1-i}",
        ),
        "a^p b^{q+s} a^gamma b^delta a^{p*i+r} b",
        "b^{q+1} a^gamma b^delta a^{p+k+r} b^s (b^{q+s-1} a^gamma b^delta a^{p+k+r} b^s)^{k-1-i}",
    );

    let mut c1d_hi = c1d_core();
    c1d_hi.push(rule("a^p x b^{q+1}", "x b^{q-(s-1)} x (b^{q+s-1} x b^q x)^{k-1}"));
    c1d_hi.push(rule("a^p x b^q x b^{q+1}", "x b^{q-(s-1)} x b^q x (b^{q+s-1} x b^q x)^{k-1}"));

    let mut c2c_hi = c2c_core();
    c2c_hi.push(rule("a^p z b^q y x", "z b^{q-(s-1)} (y z b^{q+s-1})^{k-1}"));
    c2c_hi.push(rule("a^p z b^q y b", "z b^{q-(s-1)} (y z b^{q+s-1})^{k-1} y z"));

    let mut c2d_u_pos_hi = c2d_u_pos_ge_core();
    c2d_u_pos_hi.push(family(
        "i",
        "0",
        "t-1",
        "x b^q a^{p*i+u} b",
        "b^{q+1} a^{p*(t-1)+u} x b^{delta-s} x b^{q-(delta+1-s)} a^{p*(t-1)+u} x b^{delta-s} x \
         (b^{q+s-1} a^{p*(t-1)+u} x b^{delta-s} x)^{t-1-i}",
    ));
    c2d_u_pos_hi.push(family(
        "i",
        "0",
        "t-1",
        "x b^q a^{p*i+u} x",
        "b^{q+1} a^{p*(t-1)+u} x b^{delta-s} x b^{q-(delta+1-s)} a^{p*(t-1)+u} x b^{delta-s} x \
         (b^{q+s-1} a^{p*(t-1)+u} x b^{delta-s} x)^{t-1-i} b^{s-1}",
    ));

    let mut c2d_u0_t1_hi = c2d_u0_t1_ge_core();
    c2d_u0_t1_hi.push(rule("x b^{q+1}", "b^{q+1} x b^{delta-s} x b^{q-(delta-s+1)}"));

    vec![
        template(
            NoOverlap,
            &[],
            vec![rule("a^alpha b^beta a^gamma b^delta a^epsilon b^phi", "b")],
            "relator has no nonempty proper border",
            &["section 2 opening: relators without self-overlap need no further rules"],
        ),
        template(
            C1a,
            &[],
            vec![
                rule("a^p b^{q+1} a^{r+p*k} b^{q+1} a^{r+p*k} b", "b"),
                family("i", "0", "k-1", "a^p b^{q+1} a^{r+p*i} b", "b^{q+1} a^{r+p*(i+1)} b"),
            ],
            "case 1, s = 1",
            &["subcase 1a: relator rule plus family over 0 <= i <= k-1"],
        ),
        template(
            C1b,
            &[],
            vec![
                rule("a^p b^{q+s} a^{r+p*k} b^{q+s} a^{r+p*k} b^s", "b"),
                family(
                    "i",
                    "0",
                    "k-1",
                    "a^p b^{q+s} a^{r+p*i} b",
                    "b^{q+1} a^{r+p*k} b^s (b^{q+s-1} a^{r+p*k} b^{q+s} a^{r+p*k} b^s)^{k-1-i}",
                ),
            ],
            "case 1, s > 1, r > 0",
            &["subcase 1b: relator rule plus family over 0 <= i <= k-1"],
        ),
        template(
            C1c,
            &[(X, X_AB_S)],
            vec![rule("a^p b^s", "x"), rule("x b^q x b^q x", "b"), rule("x b^{q+1}", "b^{q+1} x")],
            "case 1, s > 1, r = 0, k = 1",
            &["subcase 1c: x = a^p b^s, three rules"],
        ),
        template(
            C1d_lo,
            &[(X, "a^{p*k} b^s")],
            c1d_core(),
            "case 1, s > 1, r = 0, k >= 2, q < s-1",
            &["subcase 1d: new letter x = a^{pk} b^s, five rules from the underlined relations"],
        ),
        template(
            C1d_hi,
            &[(X, "a^{p*k} b^s")],
            c1d_hi,
            "case 1, s > 1, r = 0, k >= 2, q >= s-1",
            &[
                "subcase 1d: new letter x = a^{pk} b^s, five rules from the underlined relations",
                "subcase 1d, q >= s-1: two added rules for a^p x b^{q+1} and a^p x b^q x b^{q+1}",
            ],
        ),
        template(
            C2a_basic,
            &[],
            vec![rule("a^p b^{q+1} a^gamma b^delta a^{p*k+r} b", "b"), c2a_family("i", "0", "k-1")],
            "case 2, r > 0, s = 1, not special",
            &["subcase 2a: equivalent system, family over 0 <= i <= k-1"],
        ),
        template(
            C2a_special,
            &[],
            vec![
                rule("a^p b^{q+1} a^{p*xi+r} b^{q+1} a^{p*k+r} b", "b"),
                with_alternate(
                    family(
                        "i",
                        "xi",
                        "k-1",
                        "a^p b^{q+1} a^{p*xi+r} b^{q+1} a^{p*i+r} b",
                        "b^{q+1} a^{p*xi+r} b^{q+1} a^{p*(i+1)+r} b",
                    ),
                    "a^p b^{q+1} a^{p*xi+r} b^{q+1} a^{p*(i+r)} b",
                    "b^{q+1} a^{p*xi+r} b^{q+1} a^{p*(i+1)+r} b",
                ),
                family(
                    "j",
                    "0",
                    "xi-1",
                    "a^p b^{q+1} a^{p*j+r} b",
                    "b^{q+1} a^{p*xi+r} b^{q+1} a^{p*(xi+1)+r} b^{q+1} a^{p*(j+k-xi+1)+r} b",
                ),
            ],
            "case 2, r > 0, s = 1, k >= 2, delta = q+1, gamma = p*xi + r with 1 <= xi <= k-1",
            &["subcase 2a, special branch: families from consecutive overlaps with the relator rule"],
        ),
        template(
            C2b_basic,
            &[],
            vec![rule("a^p b^{q+s} a^gamma b^delta a^{p*k+r} b^s", "b"), c2b_family.clone()],
            "case 2, r > 0, s > 1, not special",
            &["subcase 2b: generated system, family over 0 <= i <= k-1"],
        ),
        template(
            C2b_special,
            &[],
            vec![
                with_alternate(
                    rule("a^p b^{q+s} a^{p*xi+r} b^{q+s} a^{p*k+r} b^s", "b"),
                    "a^p b^{q+s} a^{p*xi+r} b^{q+s} a^{p+k+r} b^s",
                    "b",
                ),
                with_alternate(
                    family(
                        "i",
                        "xi",
                        "k-1",
                        "a^p b^{q+s} a^{p*xi+r} b^{q+s} a^{p*i+r} b",
                        "b^{q+1} a^{p*xi+r} b^{q+s} a^{p*k+r} b^s \
                         (b^{q+s-1} a^{p*xi+r} b^{q+s} a^{p*k+r} b^s)^{k-1-i}",
                    ),
                    "a^p b^{q+s} a^{p*xi+r} b^{q+s} a^{p*i+r} b",
                    "b^{q+1} a^{p*xi+r} b^{q+s} a^{p+k+r} b^s \
                     (b^{q+s-1} a^{p*xi+r} b^{q+s} a^{p+k+r} b^s)^{k-1-i}",
                ),
                with_alternate(
                    family(
                        "j",
                        "0",
                        "xi-1",
                        "a^p b^{q+s} a^{p*j+r} b",
                        "b^{q+1} a^{p*xi+r} b^{q+s} a^{p*k+r} b^s \
                         (b^{q+s-1} a^{p*xi+r} b^{q+s} a^{p*k+r} b^s)^{k-1-xi} \
                         b^{q+s-1} a^{p*k+r} b^s (b^{q+s-1} a^{p*xi+r} b^{q+s} a^{p*k+r} b^s)^{xi-1-j}",
                    ),
                    "a^p b^{q+s} a^{p*j+r} b",
                    "b^{q+1} a^{p*xi+r} b^{q+s} a^{p+k+r} b^s \
                     (b^{q+s-1} a^{p*xi+r} b^{q+s} a^{p+k+r} b^s)^{k-1-xi} \
                     b^{q+s-1} a^{p+k+r} b^s (b^{q+s-1} a^{p*xi+r} b^{q+s} a^{p+k+r} b^s)^{xi-1-j}",
                ),
            ],
            "case 2, r > 0, s > 1, delta = q+s, gamma = p*xi + r with 1 <= xi <= k-1",
            &["subcase 2b, special branch: families over xi <= i <= k-1 and 0 <= j <= xi-1"],
        ),
        template(
            C2c_lo,
            &[(X, "a^p b^{q+s}"), (Y, "a^gamma b^delta"), (Z, "a^{p*k} b^s")],
            c2c_core(),
            "case 2, r = 0, k > 1, q < s-1",
            &["subcase 2c: letters x, y, z with xyz -> b, eight rules"],
        ),
        template(
            C2c_hi,
            &[(X, "a^p b^{q+s}"), (Y, "a^gamma b^delta"), (Z, "a^{p*k} b^s")],
            c2c_hi,
            "case 2, r = 0, k > 1, q >= s-1",
            &[
                "subcase 2c: letters x, y, z with xyz -> b, eight rules",
                "subcase 2c, q >= s-1: two added rules for a^p z b^q y x and a^p z b^q y b",
            ],
        ),
        template(
            C2d_gamma_lt_p,
            &[(X, X_AB_S)],
            vec![
                rule("a^p b^s", "x"),
                rule("x b^q a^gamma b^delta x", "b"),
                rule("x b^q a^gamma b^{delta+1}", "b^{q+1} a^gamma b^delta x"),
            ],
            "case 2, r = 0, k = 1, gamma < p",
            &["subcase 2d: x = a^p b^s, three rules, gamma < p"],
        ),
        template(
            C2d_u_pos_delta_lt_s,
            &[(X, X_AB_S)],
            vec![
                rule("a^p b^s", "x"),
                rule("x b^q a^{p*t+u} b^delta x", "b"),
                rule("x b^q a^{p*t+u} b^{delta+1}", "b^{q+1} a^{p*t+u} b^delta x"),
                family(
                    "i",
                    "0",
                    "t-1",
                    "x b^q a^{p*i+u} x",
                    "b^{q+1} a^{p*t+u} b^delta x b^{s-(delta+1)} (b^q a^{p*t+u} b^delta x b^{s-1})^{t-1-i}",
                ),
                family(
                    "i",
                    "0",
                    "t-1",
                    "x b^q a^{p*i+u} b",
                    "b^{q+1} a^{p*t+u} b^delta x b^{s-(delta+1)} (b^q a^{p*t+u} b^delta x b^{s-1})^{t-1-i} \
                     b^q a^{p*t+u} b^delta x",
                ),
            ],
            "case 2, r = 0, k = 1, gamma = p*t + u, u != 0, delta < s",
            &["subcase 2d, u != 0, delta < s: five rule schemas"],
        ),
        template(
            C2d_u_pos_delta_ge_s_lo,
            &[(X, X_AB_S)],
            c2d_u_pos_ge_core(),
            "case 2, r = 0, k = 1, gamma = p*t + u, u != 0, delta >= s, q < delta+1-s",
            &["subcase 2d, u != 0, delta >= s: three rules"],
        ),
        template(
            C2d_u_pos_delta_ge_s_hi,
            &[(X, X_AB_S)],
            c2d_u_pos_hi,
            "case 2, r = 0, k = 1, gamma = p*t + u, u != 0, delta >= s, q >= delta+1-s",
            &[
                "subcase 2d, u != 0, delta >= s: three rules",
                "subcase 2d, u != 0, delta >= s, q >= delta+1-s: two added families over 0 <= i <= t-1",
            ],
        ),
        template(
            C2d_u0_t_ge2_delta_ge,
            &[(X, "a^{p*t} b^delta a^p b^s")],
            c2d_u0_t_ge2_core(),
            "case 2, r = 0, k = 1, gamma = p*t, t >= 2, delta >= q+s",
            &["subcase 2d, u = 0, t >= 2: new x = a^{pt} b^delta a^p b^s, three rules"],
        ),
        template(
            C2d_u0_t_ge2_delta_lt,
            &[(X, "a^{p*t} b^delta a^p b^s")],
            vec![
                rule("a^p b", "x b^q x b^{q+s-(delta+1)} (b^{q+s-1} x)^{t-1}"),
                rule("a^p x b^q x b^{q+s-2} x b^q x b^{q+s-(delta+1)} (b^{q+s-1} x)^{t-1} b^{s-1}", "x"),
                rule("x b^q x b^{q+s-(delta+1)} (b^{q+s-1} x)^{t-1} b^{q+s-1} x", "b"),
                rule("a^p x b^q x b^{q+s-1}", "x b^q x"),
            ],
            "case 2, r = 0, k = 1, gamma = p*t, t >= 2, delta <= q+s-1",
            &["subcase 2d, u = 0, t >= 2, delta <= q+s-1: four rules"],
        ),
        template(
            C2d_u0_t1_delta_lt_s,
            &[(X, X_AB_S)],
            vec![
                rule("a^p b^s", "x"),
                rule("x b^q a^p b^delta x", "b"),
                rule("x b^q a^p b^{delta+1}", "b^{q+1} a^p b^delta x"),
                rule("x b^{q+s-(delta+1)} x", "b^{q+1} a^p b^delta x b^{s-(delta+1)}"),
                rule("x b^{q+s-delta}", "b^{q+1} a^p b^delta x b^{q+s-(delta+1)} a^p b^delta x"),
            ],
            "case 2, r = 0, k = 1, gamma = p, delta < s",
            &["subcase 2d, u = 0, t = 1, delta < s: five rules"],
        ),
        template(
            C2d_u0_t1_delta_ge_s_lo,
            &[(X, X_AB_S)],
            c2d_u0_t1_ge_core(),
            "case 2, r = 0, k = 1, gamma = p, delta >= s, q < delta-s+1",
            &["subcase 2d, u = 0, t = 1, delta >= s, q < delta-s+1: three rules"],
        ),
        template(
            C2d_u0_t1_delta_ge_s_hi,
            &[(X, X_AB_S)],
            c2d_u0_t1_hi,
            "case 2, r = 0, k = 1, gamma = p, delta >= s, q >= delta-s+1",
            &["subcase 2d, u = 0, t = 1, delta >= s, q >= delta-s+1: three rules plus x b^{q+1} rule"],
        ),
    ]
}

/// All templates, one per [`CaseLabel`], in label order.
pub fn template_registry() -> &'static [Template] {
    static REGISTRY: OnceLock<Vec<Template>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry)
}

pub fn lookup(label: CaseLabel) -> &'static Template {
    template_registry().iter().find(|t| t.label == label).expect("registry covers every label")
}

/// Parameter names a schema may mention.
pub const SCHEMA_PARAMETERS: [&str; 16] =
    ["p", "q", "r", "s", "k", "gamma", "delta", "xi", "t", "u", "alpha", "beta", "epsilon", "phi", "i", "j"];

fn environment(e: &RelatorExponents, c: &CaseClassification) -> Env {
    let p = &c.params;
    let mut env = Env::new();
    let as_i = |v: usize| i64::try_from(v).expect("exponents fit in i64");
    env.insert("alpha", as_i(e.alpha));
    env.insert("beta", as_i(e.beta));
    env.insert("gamma", as_i(e.gamma));
    env.insert("delta", as_i(e.delta));
    env.insert("epsilon", as_i(e.epsilon));
    env.insert("phi", as_i(e.phi));
    for (name, v) in [("p", p.p), ("q", p.q), ("r", p.r), ("s", p.s), ("k", p.k)] {
        env.insert(name, as_i(v));
    }
    for (name, v) in [("xi", p.x_index), ("t", p.t), ("u", p.u)] {
        if let Some(v) = v {
            env.insert(name, as_i(v));
        }
    }
    env
}

impl Template {
    /// Expands every schema at the given parameter point.
    pub fn instantiate(
        &self,
        e: &RelatorExponents,
        c: &CaseClassification,
        reading: TemplateReading,
    ) -> Result<RewriteSystem, EmitError> {
        let schema_err = |source| EmitError::Schema { label: self.label, source };
        let env = environment(e, c);
        let mut rules = Vec::new();
        for schema in &self.rules {
            let (lhs, rhs) = schema.sides(reading);
            match &schema.family {
                None => rules.push(Rule::new(
                    lhs.instantiate(&env).map_err(schema_err)?,
                    rhs.instantiate(&env).map_err(schema_err)?,
                )),
                Some(f) => {
                    let lo = f.lo.eval(&env).map_err(schema_err)?;
                    let hi = f.hi.eval(&env).map_err(schema_err)?;
                    for v in lo..=hi {
                        let mut local = env.clone();
                        local.insert(f.var, v);
                        rules.push(Rule::new(
                            lhs.instantiate(&local).map_err(schema_err)?,
                            rhs.instantiate(&local).map_err(schema_err)?,
                        ));
                    }
                }
            }
        }
        let mut definitions = BTreeMap::new();
        for (letter, def) in &self.definitions {
            definitions.insert(*letter, def.instantiate(&env).map_err(schema_err)?);
        }
        let mut alphabet: BTreeSet<Letter> = Letter::BASE.into_iter().collect();
        alphabet.extend(self.extension.iter().copied());
        let meta = SystemMeta {
            classification: c.clone(),
            exponents: *e,
            reading,
            anchors: self.anchors.iter().map(|a| a.to_string()).collect(),
        };
        RewriteSystem::new(alphabet, rules, definitions, Some(meta))
            .map_err(|source| EmitError::System { label: self.label, source })
    }
}

pub fn emit_system(e: &RelatorExponents) -> Result<RewriteSystem, EmitError> {
    emit_system_with(e, TemplateReading::Canonical)
}

pub fn emit_system_with(e: &RelatorExponents, reading: TemplateReading) -> Result<RewriteSystem, EmitError> {
    let c = classify(e)?;
    lookup(c.label).instantiate(e, &c, reading)
}
