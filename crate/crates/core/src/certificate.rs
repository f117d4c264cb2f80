//! Replayable evidence emitted by the engines.
//!
//! Every subspace is stored as its canonical basis rows and every morphism as
//! a row-major matrix, so a certificate can be checked against the problem
//! input alone. Nothing here depends on wall-clock time; serializing the same
//! outcome twice gives identical bytes.

use serde::{Deserialize, Serialize};

pub type Basis = Vec<Vec<u64>>;
pub type Matrix = Vec<Vec<u64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharMode {
    General,
    Identity,
    BoundedImage,
}

/// `φ(N)` together with the generator word producing `φ`: generator `path[0]` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub basis: Basis,
    pub path: Vec<usize>,
}

/// One step of a lattice derivation; operands index earlier steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum DerivationStep {
    Orbit { index: usize },
    Sum { left: usize, right: usize },
    Meet { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationEntry {
    #[serde(flatten)]
    pub step: DerivationStep,
    pub basis: Basis,
}

/// Containment `w(H, …, H) ⊆ Σ_φ φ(w(N, …, N))` for one word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordWitness {
    pub name: String,
    pub word: String,
    pub degree: usize,
    /// `w(H, …, H)`.
    pub lhs: Basis,
    /// `w(N, …, N)`.
    pub image: Basis,
    /// The Φ-sum of `image`.
    pub rhs: Basis,
}

/// `g(V)` for generator `g`; invariance means it lies in `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceWitness {
    pub generator: usize,
    pub image: Basis,
}

/// Extra evidence for the identity and bounded-image modes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetWitness {
    pub name: String,
    pub word: String,
    pub image_dim: usize,
    pub lhs_dim: usize,
    /// `|Φ| · image_dim`, the bounded-image ceiling.
    pub ceiling: usize,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSubspaceCertificate {
    pub field: u64,
    pub dimension: usize,
    pub mode: CharMode,
    pub t: usize,
    pub n: Basis,
    pub codim_n: usize,
    pub h: Basis,
    pub codim_h: usize,
    /// `f^{t-1}(codim N)`.
    pub bound: u64,
    /// `f^0(codim N), …, f^{t-1}(codim N)`.
    pub f_trace: Vec<u64>,
    pub generators: Vec<Matrix>,
    pub phi_size: usize,
    pub orbit: Vec<OrbitEntry>,
    pub closure_size: usize,
    pub invariant_count: usize,
    pub qualifying_count: usize,
    /// Ends with `H`.
    pub derivation: Vec<DerivationEntry>,
    pub words: Vec<WordWitness>,
    pub invariance: Vec<InvarianceWitness>,
    pub target: Option<TargetWitness>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    Nilpotent,
    Abelian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LevelSpec {
    Identity { word: String },
    Class { tag: ClassTag },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "evidence", rename_all = "kebab-case")]
pub enum LevelDetail {
    /// `w(B_i, …, B_i) ⊆ B_{i-1}`; `span_dim` is the dimension of the image in the quotient (0).
    IdentityVanishes {
        word: String,
        span_dim: usize,
    },
    /// The quotient `B_i / B_{i-1}` has this split-sum nilpotency index.
    Nilpotent {
        index: usize,
    },
    Abelian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEvidence {
    /// 1-based level.
    pub level: usize,
    pub quotient_dim: usize,
    #[serde(flatten)]
    pub detail: LevelDetail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Direct,
    Predicate,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesCertificate {
    pub field: u64,
    pub dimension: usize,
    pub levels: Vec<LevelSpec>,
    /// Input chain `A_0 = 0, …, A_n = N`.
    pub input_chain: Vec<Basis>,
    pub codim_n: usize,
    pub generators: Vec<Matrix>,
    pub phi_size: usize,
    pub seed_size: usize,
    pub closure_size: usize,
    /// The ideal closure, the range of every existential in `U_n`.
    pub pool: Vec<Basis>,
    /// Output chain `B_0 = 0, …, B_n = M`.
    pub chain: Vec<Basis>,
    pub codim_m: usize,
    pub evidence: Vec<LevelEvidence>,
    /// For each `B_1, …, B_n`, the image under every generator.
    pub invariance: Vec<Vec<InvarianceWitness>>,
    pub route: Route,
    pub direct_codim: Option<usize>,
    pub predicate_codim: Option<usize>,
    /// Arity of the assembled `U_n` predicate (product of the identity degrees).
    pub predicate_arity: usize,
    pub notes: Vec<String>,
}
