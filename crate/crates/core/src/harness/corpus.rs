//! The in-repo corpus of knot and link diagrams and grid presentations.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, PlanarDiagram};
use crate::goeritz;
use crate::gridfloer::{GridDiagram, GridError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bad CSV in {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("entry {name}: {source}")]
    Diagram { name: String, source: DiagramError },
    #[error("grid {name}: {source}")]
    Grid { name: String, source: GridError },
    #[error("grid {name}: malformed permutation field")]
    BadPermutation { name: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DiagramRow {
    name: String,
    pd_code: String,
    #[serde(default)]
    known_signature: Option<i64>,
    #[serde(default)]
    known_det: Option<u64>,
    #[serde(default)]
    alternating: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GridRow {
    name: String,
    n: usize,
    o_perm: String,
    x_perm: String,
    pd_name: String,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub pd_code: String,
    pub diagram: PlanarDiagram,
    pub known_signature: Option<i64>,
    pub known_det: Option<u64>,
    pub alternating: bool,
    pub is_knot: bool,
}

#[derive(Clone, Debug)]
pub struct GridEntry {
    pub name: String,
    pub grid: GridDiagram,
    pub pd_name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedMismatch {
    pub name: String,
    pub expected_det: Option<u64>,
    pub det: Option<u64>,
    pub expected_sigma: Option<i64>,
    pub sigma: Option<i64>,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub diagrams: Vec<CorpusEntry>,
    pub grids: Vec<GridEntry>,
}

impl Corpus {
    /// Directory holding the CSV files shipped with the crate.
    pub fn default_dir() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
    }

    pub fn load_default() -> Result<Self, CorpusError> {
        Self::load(&Self::default_dir())
    }

    /// Reads `knots.csv`, `links.csv` and `grids.csv` from `dir`; missing
    /// files are skipped.
    pub fn load(dir: &Path) -> Result<Self, CorpusError> {
        let mut corpus = Corpus::default();
        for file in ["knots.csv", "links.csv"] {
            let path = dir.join(file);
            if path.exists() {
                corpus.diagrams.extend(read_diagrams(&path)?);
            }
        }
        let path = dir.join("grids.csv");
        if path.exists() {
            corpus.grids = read_grids(&path)?;
        }
        Ok(corpus)
    }

    /// Loads a corpus directory, or a single diagram CSV with the columns
    /// `name,pd_code[,known_signature,known_det,alternating]`.
    pub fn load_path(path: &Path) -> Result<Self, CorpusError> {
        if path.is_dir() {
            return Self::load(path);
        }
        Ok(Corpus {
            diagrams: read_diagrams(path)?,
            grids: Vec::new(),
        })
    }

    /// Entries whose recorded signature or determinant disagrees with the
    /// computed value.
    pub fn check_expected(&self) -> Vec<ExpectedMismatch> {
        let mut out = Vec::new();
        for e in &self.diagrams {
            let det = goeritz::determinant(&e.diagram).ok();
            let sigma = goeritz::signature(&e.diagram).ok();
            if e.known_det.is_some_and(|k| det != Some(k))
                || e.known_signature.is_some_and(|k| sigma != Some(k))
            {
                out.push(ExpectedMismatch {
                    name: e.name.clone(),
                    expected_det: e.known_det,
                    det,
                    expected_sigma: e.known_signature,
                    sigma,
                });
            }
        }
        out
    }

    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.diagrams.iter().find(|e| e.name == name)
    }

    pub fn grid(&self, name: &str) -> Option<&GridEntry> {
        self.grids.iter().find(|e| e.name == name)
    }

    pub fn knots(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.diagrams.iter().filter(|e| e.is_knot)
    }
}

fn reader(path: &Path) -> Result<csv::Reader<File>, CorpusError> {
    let f = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Reader::from_reader(f))
}

fn read_diagrams(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for row in reader(path)?.deserialize::<DiagramRow>() {
        let row = row.map_err(|source| CorpusError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let diagram = PlanarDiagram::parse_pd(&row.pd_code)
            .map_err(|source| CorpusError::Diagram {
                name: row.name.clone(),
                source,
            })?
            .with_name(row.name.clone());
        out.push(CorpusEntry {
            is_knot: diagram.components() == 1,
            alternating: row.alternating.as_deref() == Some("Y"),
            name: row.name,
            pd_code: row.pd_code,
            diagram,
            known_signature: row.known_signature,
            known_det: row.known_det,
        });
    }
    Ok(out)
}

fn parse_perm(s: &str, name: &str) -> Result<Vec<usize>, CorpusError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CorpusError::BadPermutation {
            name: name.to_string(),
        })
}

fn read_grids(path: &Path) -> Result<Vec<GridEntry>, CorpusError> {
    let mut out = Vec::new();
    for row in reader(path)?.deserialize::<GridRow>() {
        let row = row.map_err(|source| CorpusError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let o = parse_perm(&row.o_perm, &row.name)?;
        let x = parse_perm(&row.x_perm, &row.name)?;
        if o.len() != row.n {
            return Err(CorpusError::BadPermutation { name: row.name });
        }
        let grid = GridDiagram::new(o, x).map_err(|source| CorpusError::Grid {
            name: row.name.clone(),
            source,
        })?;
        out.push(GridEntry {
            name: row.name,
            grid,
            pd_name: row.pd_name,
        });
    }
    Ok(out)
}
