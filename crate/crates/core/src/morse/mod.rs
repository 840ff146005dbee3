//! Discrete Morse matchings: a generic checker and the staged collapse of
//! the pair-poset complex for `s_k = 1` onto the one for `s_k = 2`.

mod chains;
mod matching;
mod pipeline;

pub use chains::{classify_chain, ChainContext, ChainFeatures, ChainSimplex, DSelection};
pub use matching::{
    check_acyclic, check_matching, critical_cells, critical_counts, critical_subcomplex,
    find_cycle, MatchingValidity, PartialMatching,
};
pub use pipeline::{
    theorem8_verify, MatchingRules, MorseContext, Sigma2Rule, Stage, StageFailure,
    StageMatching, StageReport, Theorem8Report,
};
