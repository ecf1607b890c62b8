#![allow(clippy::needless_range_loop)]

pub mod diagram;
pub mod goeritz;
pub mod gridfloer;
pub mod harness;
pub mod khovanov;
pub mod linalg;
pub mod poly;
pub mod quasialt;
pub mod states;
pub mod util;

pub use diagram::{DiagramError, Face, Fingerprint, PlanarDiagram, Resolution};
pub use quasialt::{qa_search, verify_certificate, QACertificate, QAOutcome};
