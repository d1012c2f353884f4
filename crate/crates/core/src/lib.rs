//! Morphological target-side representations for statistical and neural MT.
//!
//! Target sentences are rewritten as lemma/tag sequences (interleaved or
//! serialized), segmented with BPE, translated by an external system, and
//! turned back into surface text by a paradigm lexicon. German compounds can
//! be split into modifier runs before training and glued back afterwards.

pub mod bpe;
pub mod compounds;
pub mod eval;
pub mod interleave;
pub mod manifest;
pub mod morphlex;
pub mod pipeline;
pub mod tagsets;

pub use bpe::MergeTable;
pub use interleave::Mode;
pub use morphlex::{MorphAnalysis, ParadigmLexicon, Tag};
pub use pipeline::{PipelineConfig, PipelineMode};
pub use tagsets::{GermanAnalysis, GermanFeatureSeq, PositionalTag};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tagsets.md")]
    mod tagsets {}
    #[doc = include_str!("../../../book/src/lexicon.md")]
    mod lexicon {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/bpe.md")]
    mod bpe {}
    #[doc = include_str!("../../../book/src/compounds.md")]
    mod compounds {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
