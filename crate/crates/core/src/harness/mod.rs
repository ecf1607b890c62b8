//! Corpus ingestion and batch verification.

pub mod corpus;
pub mod report;

pub use corpus::{Corpus, CorpusEntry, CorpusError, ExpectedMismatch, GridEntry};
pub use report::{
    check_lemmas, hfk_table, invariants, kh_table, verify_thin, BatchOptions, HfkTable,
    InvariantsRow, KhTable, LemmaSummary, ReportError, ThinRow, ThinSummary, SCHEMA,
};
