//! Per-diagram reports and batch verification over a corpus.
//!
//! Every payload carries `schema` and lists entries in input order, so two
//! runs with the same inputs and budgets serialize identically.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusEntry};
use crate::diagram::PlanarDiagram;
use crate::goeritz::{self, GoeritzError};
use crate::gridfloer::{hfk_delta_ranks, GridDiagram, GridError, HfkReport, DEFAULT_GRID_LIMIT};
use crate::khovanov::{
    check_skein_grading, khovanov_reduced_f2, khovanov_reduced_z, BigradedRanks, DeltaRanks,
    KhError, Ring, DEFAULT_CUBE_LIMIT,
};
use crate::poly::Laurent;
use crate::quasialt::{qa_search, verify_certificate, QAOutcome, DEFAULT_BUDGET};
use crate::states::state_thinness_predictor;

pub const SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Goeritz(#[from] GoeritzError),
    #[error(transparent)]
    Kh(#[from] KhError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsRow {
    pub name: Option<String>,
    pub crossings: usize,
    pub components: usize,
    pub writhe: i64,
    pub det: u64,
    pub sigma: i64,
}

pub fn invariants(d: &PlanarDiagram) -> Result<InvariantsRow, ReportError> {
    Ok(InvariantsRow {
        name: d.name().map(str::to_string),
        crossings: d.crossing_count(),
        components: d.components(),
        writhe: d.writhe(),
        det: goeritz::determinant(d)?,
        sigma: goeritz::signature(d)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhEntry {
    pub i: i64,
    pub two_j: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionEntry {
    pub i: i64,
    pub two_j: i64,
    pub divisors: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub two_delta: i64,
    pub rank: usize,
}

fn delta_entries(d: &DeltaRanks) -> Vec<DeltaEntry> {
    d.entries
        .iter()
        .map(|(&two_delta, &rank)| DeltaEntry { two_delta, rank })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhTable {
    pub schema: u32,
    pub name: Option<String>,
    pub ring: Ring,
    pub entries: Vec<KhEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub torsion: Vec<TorsionEntry>,
    pub delta: Vec<DeltaEntry>,
    pub total: usize,
    pub thin: bool,
    pub sigma: i64,
}

impl KhTable {
    pub fn from_ranks(name: Option<String>, ring: Ring, r: &BigradedRanks, sigma: i64) -> Self {
        KhTable {
            schema: SCHEMA,
            name,
            ring,
            entries: r
                .entries
                .iter()
                .map(|(&(i, two_j), &rank)| KhEntry { i, two_j, rank })
                .collect(),
            torsion: r
                .torsion
                .iter()
                .map(|(&(i, two_j), t)| TorsionEntry {
                    i,
                    two_j,
                    divisors: t.clone(),
                })
                .collect(),
            delta: delta_entries(&r.delta_collapse()),
            total: r.total(),
            thin: r.is_sigma_thin(sigma) && !r.has_torsion(),
            sigma,
        }
    }
}

pub fn kh_table(d: &PlanarDiagram, ring: Ring, limit: usize) -> Result<KhTable, ReportError> {
    let sigma = goeritz::signature(d)?;
    let r = match ring {
        Ring::F2 => khovanov_reduced_f2(d, limit)?,
        Ring::Z => khovanov_reduced_z(d, limit)?,
    };
    Ok(KhTable::from_ranks(
        d.name().map(str::to_string),
        ring,
        &r,
        sigma,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkEntry {
    pub two_m: i64,
    pub two_a: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkTable {
    pub schema: u32,
    pub name: Option<String>,
    pub grid_size: usize,
    /// Tilde ranks before dividing out the `2^{n-1}` stabilization factor.
    pub tilde: Vec<HfkEntry>,
    pub delta: Vec<DeltaEntry>,
    pub total: usize,
    pub alexander: String,
    pub thin: bool,
    pub sigma: i64,
}

impl HfkTable {
    pub fn from_report(name: Option<String>, r: &HfkReport, sigma: i64) -> Self {
        HfkTable {
            schema: SCHEMA,
            name,
            grid_size: r.n,
            tilde: r
                .tilde
                .iter()
                .map(|(&(two_m, two_a), &rank)| HfkEntry { two_m, two_a, rank })
                .collect(),
            delta: delta_entries(&r.delta),
            total: r.delta.total(),
            alexander: alexander_text(&r.alexander),
            thin: r.delta.is_sigma_thin(sigma),
            sigma,
        }
    }
}

/// Prints in `t` when every exponent of `t^{1/2}` is even.
fn alexander_text(p: &Laurent) -> String {
    if p.terms().all(|(e, _)| e % 2 == 0) {
        Laurent::from_terms(p.terms().map(|(e, c)| (e / 2, c))).display_in("t")
    } else {
        p.display_in("t^(1/2)")
    }
}

/// Grid HFK with σ taken from the grid's own planar diagram.
pub fn hfk_table(g: &GridDiagram, limit: usize) -> Result<HfkTable, ReportError> {
    let d = g.to_planar_diagram()?;
    let sigma = goeritz::signature(&d)?;
    let r = hfk_delta_ranks(g, limit)?;
    Ok(HfkTable::from_report(
        g.name().map(str::to_string),
        &r,
        sigma,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchOptions {
    pub budget: usize,
    /// Entries with more crossings are skipped.
    pub limit_crossings: Option<usize>,
    pub cube_limit: usize,
    pub grid_limit: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            budget: DEFAULT_BUDGET,
            limit_crossings: None,
            cube_limit: DEFAULT_CUBE_LIMIT,
            grid_limit: DEFAULT_GRID_LIMIT,
        }
    }
}

impl BatchOptions {
    fn admits(&self, e: &CorpusEntry) -> bool {
        self.limit_crossings
            .is_none_or(|n| e.diagram.crossing_count() <= n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QaStatus {
    Certificate,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinRow {
    pub name: String,
    pub crossings: usize,
    pub alternating: bool,
    pub det: u64,
    pub sigma: i64,
    pub kh_total: Option<usize>,
    pub kh_delta: Vec<DeltaEntry>,
    pub kh_thin: Option<bool>,
    pub hfk_total: Option<usize>,
    pub hfk_thin: Option<bool>,
    pub qa_status: QaStatus,
    pub qa_verified: Option<bool>,
    pub states: Option<usize>,
    pub states_single_delta: Option<bool>,
    pub error: Option<String>,
}

impl ThinRow {
    /// A certified entry must be thin on every theory that was computed.
    pub fn thinness_violation(&self) -> bool {
        self.qa_status == QaStatus::Certificate
            && (self.qa_verified == Some(false)
                || self.kh_thin == Some(false)
                || self.hfk_thin == Some(false))
    }

    pub fn alternating_failure(&self) -> bool {
        self.alternating && (self.kh_thin != Some(true) || self.hfk_thin == Some(false))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinCounts {
    pub entries: usize,
    pub kh_thin: usize,
    pub hfk_checked: usize,
    pub hfk_thin: usize,
    pub qa_certified: usize,
    pub not_kh_thin: Vec<String>,
    pub not_hfk_thin: Vec<String>,
    pub qa_unknown: Vec<String>,
    pub alternating_failures: Vec<String>,
    pub thinness_violations: Vec<String>,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinSummary {
    pub schema: u32,
    pub options: BatchOptions,
    pub rows: Vec<ThinRow>,
    pub counts: ThinCounts,
}

impl ThinSummary {
    pub fn all_pass(&self) -> bool {
        self.counts.alternating_failures.is_empty()
            && self.counts.thinness_violations.is_empty()
            && self.counts.errors.is_empty()
    }
}

fn thin_row(corpus: &Corpus, e: &CorpusEntry, opts: &BatchOptions) -> ThinRow {
    let d = &e.diagram;
    let mut row = ThinRow {
        name: e.name.clone(),
        crossings: d.crossing_count(),
        alternating: e.alternating,
        det: 0,
        sigma: 0,
        kh_total: None,
        kh_delta: Vec::new(),
        kh_thin: None,
        hfk_total: None,
        hfk_thin: None,
        qa_status: QaStatus::Unknown,
        qa_verified: None,
        states: None,
        states_single_delta: None,
        error: None,
    };
    let mut errors = Vec::new();
    match (goeritz::determinant(d), goeritz::signature(d)) {
        (Ok(det), Ok(sigma)) => {
            row.det = det;
            row.sigma = sigma;
        }
        (Err(err), _) | (_, Err(err)) => errors.push(err.to_string()),
    }
    match khovanov_reduced_f2(d, opts.cube_limit) {
        Ok(r) => {
            row.kh_total = Some(r.total());
            row.kh_delta = delta_entries(&r.delta_collapse());
            row.kh_thin = Some(r.is_sigma_thin(row.sigma));
        }
        Err(err) => errors.push(err.to_string()),
    }
    if let Some(g) = corpus.grids.iter().find(|g| g.pd_name == e.name) {
        if g.grid.size() <= opts.grid_limit {
            match hfk_delta_ranks(&g.grid, opts.grid_limit) {
                Ok(r) => {
                    row.hfk_total = Some(r.delta.total());
                    row.hfk_thin = Some(r.delta.is_sigma_thin(row.sigma));
                }
                Err(err) => errors.push(err.to_string()),
            }
        }
    }
    if let Ok(s) = state_thinness_predictor(d, None) {
        row.states = Some(s.states);
        row.states_single_delta = Some(s.single_delta);
    }
    if let QAOutcome::Certificate(c) = qa_search(d, opts.budget) {
        row.qa_status = QaStatus::Certificate;
        row.qa_verified = Some(verify_certificate(&c));
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

/// Thinness of every admitted corpus entry, in corpus order.
pub fn verify_thin(corpus: &Corpus, opts: &BatchOptions) -> ThinSummary {
    let entries: Vec<&CorpusEntry> = corpus.diagrams.iter().filter(|e| opts.admits(e)).collect();
    let rows: Vec<ThinRow> = entries
        .par_iter()
        .map(|e| thin_row(corpus, e, opts))
        .collect();
    let mut counts = ThinCounts {
        entries: rows.len(),
        ..ThinCounts::default()
    };
    for r in &rows {
        match r.kh_thin {
            Some(true) => counts.kh_thin += 1,
            Some(false) => counts.not_kh_thin.push(r.name.clone()),
            None => {}
        }
        if let Some(t) = r.hfk_thin {
            counts.hfk_checked += 1;
            if t {
                counts.hfk_thin += 1;
            } else {
                counts.not_hfk_thin.push(r.name.clone());
            }
        }
        match r.qa_status {
            QaStatus::Certificate => counts.qa_certified += 1,
            QaStatus::Unknown => counts.qa_unknown.push(r.name.clone()),
        }
        if r.alternating_failure() {
            counts.alternating_failures.push(r.name.clone());
        }
        if r.thinness_violation() {
            counts.thinness_violations.push(r.name.clone());
        }
        if r.error.is_some() {
            counts.errors.push(r.name.clone());
        }
    }
    ThinSummary {
        schema: SCHEMA,
        options: *opts,
        rows,
        counts,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub name: String,
    pub crossing: usize,
    pub check: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaTally {
    pub checked: usize,
    pub hypothesis_holds: usize,
    pub violations: Vec<LemmaViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub schema: u32,
    pub options: BatchOptions,
    /// Signature identities at every crossing of every alternating entry.
    pub signatures: LemmaTally,
    /// Skein-triangle rank inequalities at every crossing of every entry.
    pub skein: LemmaTally,
    /// Crossings where total Khovanov ranks add up, so the connecting map vanishes.
    pub forced_zero: usize,
}

impl LemmaSummary {
    pub fn all_pass(&self) -> bool {
        self.signatures.violations.is_empty() && self.skein.violations.is_empty()
    }
}

struct CrossingCheck {
    sig: Option<(bool, bool)>,
    skein: Option<(bool, bool, bool)>,
}

fn violation(e: &CorpusEntry, crossing: usize, check: &str) -> LemmaViolation {
    LemmaViolation {
        name: e.name.clone(),
        crossing,
        check: check.to_string(),
    }
}

/// Signature identities and skein-triangle inequalities at every crossing.
pub fn check_lemmas(corpus: &Corpus, opts: &BatchOptions) -> LemmaSummary {
    let jobs: Vec<(&CorpusEntry, usize)> = corpus
        .diagrams
        .iter()
        .filter(|e| opts.admits(e))
        .flat_map(|e| (0..e.diagram.crossing_count()).map(move |k| (e, k)))
        .collect();
    let results: Vec<CrossingCheck> = jobs
        .par_iter()
        .map(|&(e, k)| CrossingCheck {
            sig: e
                .alternating
                .then(|| goeritz::check_signature_lemma(&e.diagram, k).ok())
                .flatten()
                .map(|r| (r.hypothesis_holds, r.passed())),
            skein: check_skein_grading(&e.diagram, k, opts.cube_limit)
                .ok()
                .map(|r| (r.hypothesis_holds, r.passed(), r.forced_zero)),
        })
        .collect();

    let mut out = LemmaSummary {
        schema: SCHEMA,
        options: *opts,
        signatures: LemmaTally::default(),
        skein: LemmaTally::default(),
        forced_zero: 0,
    };
    for (&(e, k), r) in jobs.iter().zip(&results) {
        if e.alternating {
            out.signatures.checked += 1;
            match r.sig {
                Some((hyp, ok)) => {
                    out.signatures.hypothesis_holds += usize::from(hyp);
                    if !hyp {
                        out.signatures
                            .violations
                            .push(violation(e, k, "determinant hypothesis"));
                    } else if !ok {
                        out.signatures.violations.push(violation(e, k, "signature"));
                    }
                }
                None => out.signatures.violations.push(violation(e, k, "error")),
            }
        }
        out.skein.checked += 1;
        match r.skein {
            Some((hyp, ok, zero)) => {
                out.skein.hypothesis_holds += usize::from(hyp);
                out.forced_zero += usize::from(zero);
                if !ok {
                    out.skein
                        .violations
                        .push(violation(e, k, "rank inequality"));
                }
            }
            None => out.skein.violations.push(violation(e, k, "error")),
        }
    }
    out
}
