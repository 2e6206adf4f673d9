//! Exact resource-inequality calculus: knowledge base, linear combination,
//! dominance checks and a small derivation script language.

mod engine;
mod expr;
mod kb;
mod poly;
mod resource;
mod script;

pub use engine::{
    check_derivation, combine, reverse_mother_extraction, Bindings, Mode, Orientation, ResidualEntry,
    ResidualStatus, ReverseMother, Step, Verdict,
};
pub use expr::{parse_expr, ALPHA, EPS, GAP, HMAX, I_AB, I_AR};
pub use kb::{load_knowledge_base, relation};
pub use poly::{fmt_q, q, Poly, RatFn, Q};
pub use resource::{Kind, ResourceInequality, ResourceVector, Symbol};
pub use script::{run_script, ScriptCheck, ScriptEntry, ScriptReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalculusError {
    #[error("parse error at byte {at} of {input:?}: {msg}")]
    Parse { input: String, at: usize, msg: String },
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("relation {0:?} is one-directional and cannot be reversed")]
    NotBidirectional(String),
    #[error("multiplier {multiplier} for {label:?} is not provably non-negative")]
    NegativeMultiplier { label: String, multiplier: String },
    #[error("mixed alpha-bit parameters {0} and {1}")]
    MixedAlpha(String, String),
    #[error("substitution failed: {0}")]
    Substitution(String),
    #[error("binding error: {0}")]
    Binding(String),
    #[error("unbound symbols in {0}")]
    Unbound(String),
    #[error("script line {line}: {msg}")]
    Script { line: usize, msg: String },
}
