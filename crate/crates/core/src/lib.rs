//! Finite complete rewriting systems for the one-relator monoids
//! `Mon<a, b : a^alpha b^beta a^gamma b^delta a^epsilon b^phi = b>`.
//!
//! [`templates::emit_system`] classifies an exponent tuple and instantiates
//! the matching rule template; [`report::verify_system`] then checks the
//! result mechanically: critical pairs, an affine termination certificate,
//! soundness of every rule against the original relation, derivability of
//! the relation and of the auxiliary letters, and a brute-force comparison
//! of normal forms against derivation search.

pub mod classify;
pub mod confluence;
pub mod growth;
pub mod report;
pub mod rewrite;
pub mod schema;
pub mod templates;
pub mod termination;
pub mod verifier;
pub mod word;

pub use classify::{classify, CaseClassification, CaseLabel, CaseParams, TemplateReading};
pub use confluence::{check_local_confluence, critical_pairs, CriticalPair};
pub use report::{verify_system, Verdict, VerificationReport, VerifyConfig};
pub use rewrite::{RewriteSystem, Rule};
pub use templates::{emit_system, emit_system_with, template_registry};
pub use verifier::{BfsBounds, Presentation};
pub use word::{border_lengths, parse_word, relator_word, Letter, RelatorExponents, Word};
