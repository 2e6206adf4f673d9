//! Built-in protocol relations.

use super::resource::ResourceInequality;
use super::CalculusError;

/// `(label, relation text, error tags)`.
const RELATIONS: &[(&str, &str, &[&str])] = &[
    ("teleportation", "1[qq] + 2[c->c] >= 1[q->q]", &[]),
    ("state-merging", "<psi_ABR> + H(A|B)[qq] + I(A:R)[c->c] >= <psi_A'BR>", &[]),
    ("mother", "<psi_ABR> + I(A:R)/2[q->q] >= <psi_A'BR> + I(A:B)/2[qq]", &[]),
    ("cobit", "1[q->q] + 1[qq] = 2[q->qq]", &[]),
    ("alpha-dense-coding", "1[alpha] + 1[qq] =(c) (1+alpha)[q->qq]", &[]),
    // Two zero-bits and an ebit stand in for one qubit.
    ("zero-bit-teleportation", "1[qq] + 2[0] =(c) 1[q->q]", &[]),
    ("alpha-as-ebits", "1[alpha] =(c) alpha[qq] + (1+alpha)[0]", &[]),
    ("alpha-as-qubits", "1[alpha] =(c) alpha[q->q] + (1-alpha)[0]", &[]),
    (
        "catalytic-merging-borrowed",
        "<psi_ABR> + I(A:R)/(1+alpha)[alpha] + I(A:R)/(1+alpha)[qq] >= <psi_A'BR> + H(A)[qq]",
        &[],
    ),
    (
        "catalytic-merging",
        "<psi_ABR> + I(A:R)/(1+alpha)[alpha] >=(c) <psi_A'BR> + (H(A) - I(A:R)/(1+alpha))[qq]",
        &[],
    ),
    ("catalytic-merging-balanced", "<psi_ABR> + H(A)[alpha=H(A|B)/H(A)] >=(c) <psi_A'BR>", &[]),
    ("noncatalytic-merging", "<psi_ABR> + I(A:R)/(2alpha)[alpha] >= <psi_A'BR> + I(A:B)/2[qq]", &[]),
    ("zero-bit-merging", "<psi_ABR> + I(A:R)[0] >=(c) <psi_A'BR> + Ic[qq]", &[]),
    ("qubit-zero-bit-merging", "<psi_ABR> + H(A|B)[q->q] + I(A:B)[0] >=(c) <psi_A'BR>", &[]),
    // Single-copy relations; an alpha-dit of dimension d counts as log d alpha-bits.
    ("oneshot-alpha-dense-coding", "1[alpha] + 1[qq] >= (1+alpha)[q->qq]", &["eps", "delta"]),
    (
        "oneshot-mother",
        "<psi_ABR> + (Hmax(A) - Hmin(A|R))/2[q->q] >= <psi_A'BR> + (Hmax(A) + Hmin(A|R))/2[qq]",
        &["eps", "delta"],
    ),
    (
        "oneshot-noncatalytic-merging",
        "<psi_ABR> + (Hmax(A) - Hmin(A|R))/(2alpha)[alpha] >= <psi_A'BR> + (Hmax(A) + Hmin(A|R))/2[qq]",
        &["eps", "eps'", "delta"],
    ),
    (
        "oneshot-cobit-merging",
        "<psi_ABR> + (Hmax(A) - Hmin(A|R))[q->qq] >= <psi_A'BR> + Hmax(A)[qq]",
        &["eps", "delta"],
    ),
    (
        "oneshot-catalytic-merging",
        "<psi_ABR> + (Hmax(A) - Hmin(A|R))/(1+alpha)[alpha] + (Hmax(A) - Hmin(A|R))/(1+alpha)[qq] >= <psi_A'BR> + Hmax(A)[qq]",
        &["eps", "eps'", "Delta"],
    ),
];

pub fn load_knowledge_base() -> Vec<ResourceInequality> {
    RELATIONS
        .iter()
        .map(|(label, text, tags)| {
            ResourceInequality::parse(label, text).expect("built-in relation parses").tagged(tags)
        })
        .collect()
}

pub fn relation(label: &str) -> Result<ResourceInequality, CalculusError> {
    load_knowledge_base()
        .into_iter()
        .find(|r| r.label == label)
        .ok_or_else(|| CalculusError::UnknownRelation(label.to_string()))
}
