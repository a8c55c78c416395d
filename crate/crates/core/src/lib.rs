//! Cognate clustering for multilingual word lists.
//!
//! Words expressing one meaning are compared pairwise with an affine-gap
//! global alignment (fixed match/mismatch scores or PMI sound-pair scores),
//! the clamped scores form a similarity matrix, and a threshold-free
//! CRP-style scan groups the words into cognate sets. Clusterings are scored
//! with B-cubed precision, recall and F-score against gold classes.

pub mod align;
pub mod alphabet;
pub mod crp;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod pmi;
pub mod wordlist;

pub use align::{
    nw_score, similarity_matrix, similarity_matrix_with, GapParams, Scorer, SimilarityMatrix,
    Substitution,
};
pub use alphabet::{Alphabet, Segment, ASJP_SYMBOLS, GAP};
pub use crp::{
    crp_cluster, crp_cluster_traced, flat_cluster_threshold, CrpConfig, CrpOutcome, Linkage,
    Partition, ScanOrder,
};
pub use error::{Error, ErrorClass, Result};
pub use eval::{
    bcubed, evaluate_dataset, pearson, BcubedScore, EvalReport, MeaningScore, NumberStyle,
};
pub use indexmap::IndexMap;
pub use pmi::{
    estimate_pmi, load_pmi, parse_aligned_pairs, save_pmi, AlignedPair, PmiEstimate, PmiMatrix,
};
pub use wordlist::{
    parse_wordlist, write_wordlist, ColumnMap, ModifierPolicy, ParseConfig, WordForm, WordList,
};
