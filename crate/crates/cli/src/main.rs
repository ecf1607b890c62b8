use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qathin::gridfloer::{GridDiagram, DEFAULT_GRID_LIMIT};
use qathin::harness::{self, BatchOptions, Corpus, HfkTable, InvariantsRow, KhTable};
use qathin::khovanov::{Ring, DEFAULT_CUBE_LIMIT};
use qathin::quasialt::{self, QAOutcome, DEFAULT_BUDGET};
use qathin::PlanarDiagram;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qathin",
    version,
    about = "Link invariants, Khovanov and grid Floer homology, quasi-alternating certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinant, signature, writhe and component count.
    Invariants(Input),
    /// Reduced Khovanov homology ranks.
    Kh {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = RingArg::F2)]
        ring: RingArg,
    },
    /// Knot Floer homology of a grid diagram.
    Hfk {
        /// Grid as `o_0,o_1,... | x_0,x_1,...`, a file holding one, or a corpus knot name.
        #[arg(long, conflicts_with = "corpus")]
        grid: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Largest grid size to attempt.
        #[arg(long, default_value_t = DEFAULT_GRID_LIMIT)]
        max_grid: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Search for a quasi-alternating certificate.
    Qa {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check a certificate file instead of searching.
        #[arg(long, conflicts_with_all = ["pd", "corpus"])]
        verify: Option<PathBuf>,
    },
    /// Thinness and certificate status for every corpus entry.
    VerifyThin {
        #[command(flatten)]
        batch: Batch,
    },
    /// Signature identities and skein rank inequalities at every crossing.
    CheckLemmas {
        #[command(flatten)]
        batch: Batch,
    },
}

#[derive(Args)]
struct Input {
    /// PD code inline, a file holding one, a CSV with `name,pd_code` columns,
    /// or a corpus knot name such as `3_1`.
    #[arg(long, conflicts_with = "corpus")]
    pd: Option<String>,
    /// Corpus directory or diagram CSV.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Skip diagrams with more crossings.
    #[arg(long)]
    limit_crossings: Option<usize>,
    #[command(flatten)]
    format: Format,
}

#[derive(Args)]
struct Batch {
    /// Corpus directory or diagram CSV; defaults to the shipped corpus.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long)]
    limit_crossings: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_GRID_LIMIT)]
    max_grid: usize,
    #[command(flatten)]
    format: Format,
}

#[derive(Args, Clone, Copy)]
struct Format {
    #[arg(long, conflicts_with = "table")]
    json: bool,
    #[arg(long)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    F2,
    Z,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::F2 => Ring::F2,
            RingArg::Z => Ring::Z,
        }
    }
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, msg.to_string())
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("QATHIN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants(input) => run_invariants(&input),
        Command::Kh { input, ring } => run_kh(&input, ring.into()),
        Command::Hfk {
            grid,
            corpus,
            max_grid,
            format,
        } => run_hfk(grid.as_deref(), corpus.as_deref(), max_grid, format),
        Command::Qa {
            input,
            budget,
            out,
            verify,
        } => match verify {
            Some(path) => run_verify(&path, input.format),
            None => run_qa(&input, budget, out.as_deref()),
        },
        Command::VerifyThin { batch } => run_verify_thin(&batch),
        Command::CheckLemmas { batch } => run_check_lemmas(&batch),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("qathin: {msg}");
            ExitCode::from(code)
        }
    }
}

fn emit_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("report serializes")
    );
}

fn read_text(arg: &str) -> Result<Option<String>, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return fs::read_to_string(path)
            .map(Some)
            .map_err(|e| input_error(format!("{arg}: {e}")));
    }
    Ok(None)
}

fn load_corpus(path: Option<&Path>) -> Result<Corpus, Failure> {
    let corpus = match path {
        Some(p) => Corpus::load_path(p),
        None => Corpus::load_default(),
    };
    corpus.map_err(input_error)
}

fn looks_like_csv(text: &str) -> bool {
    text.lines()
        .next()
        .is_some_and(|l| l.trim_start().starts_with("name,"))
}

/// Resolves `--pd`/`--corpus` to named diagrams in input order.
fn diagrams(input: &Input) -> Result<Vec<PlanarDiagram>, Failure> {
    let mut out = match (&input.pd, &input.corpus) {
        (Some(arg), _) => match read_text(arg)? {
            Some(text) if looks_like_csv(&text) => {
                let corpus = Corpus::load_path(Path::new(arg)).map_err(input_error)?;
                corpus.diagrams.into_iter().map(|e| e.diagram).collect()
            }
            Some(text) => {
                let d = PlanarDiagram::parse_pd(&text)
                    .map_err(|e| input_error(format!("{arg}: {e}")))?;
                let stem = Path::new(arg)
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or(arg);
                vec![d.with_name(stem)]
            }
            None => match PlanarDiagram::parse_pd(arg) {
                Ok(d) => vec![d],
                Err(err) => {
                    let corpus = Corpus::load_default().map_err(input_error)?;
                    match corpus.get(arg) {
                        Some(e) => vec![e.diagram.clone()],
                        None => return Err(input_error(err)),
                    }
                }
            },
        },
        (None, corpus) => load_corpus(corpus.as_deref())?
            .diagrams
            .into_iter()
            .map(|e| e.diagram)
            .collect(),
    };
    if let Some(n) = input.limit_crossings {
        out.retain(|d| d.crossing_count() <= n);
    }
    Ok(out)
}

fn name_of(name: &Option<String>) -> &str {
    name.as_deref().unwrap_or("-")
}

fn run_invariants(input: &Input) -> Outcome {
    let rows: Vec<InvariantsRow> = diagrams(input)?
        .iter()
        .map(harness::invariants)
        .collect::<Result<_, _>>()
        .map_err(input_error)?;
    if input.format.json {
        rows.iter().for_each(emit_json);
    } else {
        println!(
            "{:<14} {:>5} {:>5} {:>6} {:>6} {:>10}",
            "name", "det", "sigma", "writhe", "comps", "crossings"
        );
        for r in &rows {
            println!(
                "{:<14} {:>5} {:>5} {:>6} {:>6} {:>10}",
                name_of(&r.name),
                r.det,
                r.sigma,
                r.writhe,
                r.components,
                r.crossings
            );
        }
    }
    Ok(0)
}

fn print_kh(t: &KhTable) {
    println!(
        "{} ({}, sigma {}, total {})",
        name_of(&t.name),
        ring_name(t.ring),
        t.sigma,
        t.total
    );
    println!("  {:>4} {:>6} {:>5}", "i", "2j", "rank");
    for e in &t.entries {
        println!("  {:>4} {:>6} {:>5}", e.i, e.two_j, e.rank);
    }
    for e in &t.torsion {
        println!("  torsion at ({}, {}): {:?}", e.i, e.two_j, e.divisors);
    }
    let delta: Vec<String> = t
        .delta
        .iter()
        .map(|d| format!("{}:{}", d.two_delta, d.rank))
        .collect();
    println!("  2delta ranks {}  thin {}", delta.join(" "), t.thin);
}

fn ring_name(r: Ring) -> &'static str {
    match r {
        Ring::F2 => "F2",
        Ring::Z => "Z",
    }
}

fn run_kh(input: &Input, ring: Ring) -> Outcome {
    let ds = diagrams(input)?;
    let tables: Vec<KhTable> = ds
        .iter()
        .map(|d| harness::kh_table(d, ring, DEFAULT_CUBE_LIMIT))
        .collect::<Result<_, _>>()
        .map_err(input_error)?;
    for t in &tables {
        if input.format.json {
            emit_json(t);
        } else {
            print_kh(t);
        }
    }
    Ok(if tables.iter().all(|t| t.thin) {
        0
    } else {
        EXIT_NEGATIVE
    })
}

fn grids(arg: Option<&str>, corpus: Option<&Path>) -> Result<Vec<GridDiagram>, Failure> {
    let Some(arg) = arg else {
        return Ok(load_corpus(corpus)?
            .grids
            .into_iter()
            .map(|g| g.grid.with_name(g.name))
            .collect());
    };
    if let Some(text) = read_text(arg)? {
        let g = GridDiagram::parse(text.trim()).map_err(|e| input_error(format!("{arg}: {e}")))?;
        return Ok(vec![g]);
    }
    match GridDiagram::parse(arg) {
        Ok(g) => Ok(vec![g]),
        Err(err) => {
            let corpus = Corpus::load_default().map_err(input_error)?;
            match corpus.grid(arg) {
                Some(e) => Ok(vec![e.grid.clone().with_name(e.name.clone())]),
                None => Err(input_error(err)),
            }
        }
    }
}

fn run_hfk(grid: Option<&str>, corpus: Option<&Path>, max_grid: usize, format: Format) -> Outcome {
    let gs = grids(grid, corpus)?;
    let mut all_thin = true;
    for g in &gs {
        let t: HfkTable = harness::hfk_table(g, max_grid).map_err(input_error)?;
        all_thin &= t.thin;
        if format.json {
            emit_json(&t);
        } else {
            println!(
                "{} (grid {}, sigma {}, total {})",
                name_of(&t.name),
                t.grid_size,
                t.sigma,
                t.total
            );
            println!("  Alexander {}", t.alexander);
            let delta: Vec<String> = t
                .delta
                .iter()
                .map(|d| format!("{}:{}", d.two_delta, d.rank))
                .collect();
            println!("  2delta ranks {}  thin {}", delta.join(" "), t.thin);
        }
    }
    Ok(if all_thin { 0 } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct QaReport<'a> {
    schema: u32,
    name: Option<&'a str>,
    #[serde(flatten)]
    outcome: &'a QAOutcome,
}

fn run_qa(input: &Input, budget: usize, out: Option<&Path>) -> Outcome {
    let ds = diagrams(input)?;
    if out.is_some() && ds.len() != 1 {
        return Err(input_error("--out needs exactly one diagram"));
    }
    let mut all_found = true;
    for d in &ds {
        let outcome = quasialt::qa_search(d, budget);
        all_found &= outcome.is_certificate();
        if let (Some(path), Some(c)) = (out, outcome.certificate()) {
            fs::write(path, c.to_json() + "\n")
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        }
        if input.format.json {
            emit_json(&QaReport {
                schema: harness::SCHEMA,
                name: d.name(),
                outcome: &outcome,
            });
        } else {
            let name = d.name().unwrap_or("-");
            match &outcome {
                QAOutcome::Certificate(c) => println!(
                    "{name}: certificate, det {}, {} nodes, depth {}",
                    c.det(),
                    c.root.node_count(),
                    c.root.depth()
                ),
                QAOutcome::Unknown(u) => println!(
                    "{name}: unknown ({:?} after {} expansions)",
                    u.reason, u.expansions
                ),
            }
        }
    }
    Ok(if all_found { 0 } else { EXIT_NEGATIVE })
}

fn run_verify(path: &Path, format: Format) -> Outcome {
    let text =
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let cert = quasialt::QACertificate::from_json(&text)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let ok = quasialt::verify_certificate(&cert);
    if format.json {
        emit_json(
            &serde_json::json!({ "schema": harness::SCHEMA, "valid": ok, "det": cert.det() }),
        );
    } else {
        println!(
            "certificate {}: det {}",
            if ok { "valid" } else { "INVALID" },
            cert.det()
        );
    }
    Ok(if ok { 0 } else { EXIT_NEGATIVE })
}

fn batch_options(b: &Batch) -> BatchOptions {
    BatchOptions {
        budget: b.budget,
        limit_crossings: b.limit_crossings,
        grid_limit: b.max_grid,
        ..BatchOptions::default()
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn run_verify_thin(b: &Batch) -> Outcome {
    let corpus = load_corpus(b.corpus.as_deref())?;
    let summary = harness::verify_thin(&corpus, &batch_options(b));
    if b.format.json {
        emit_json(&summary);
    } else {
        println!(
            "{:<12} {:>3} {:>3} {:>5} {:>5} {:>7} {:>8} {:>11}",
            "name", "alt", "n", "det", "sigma", "kh_thin", "hfk_thin", "qa"
        );
        for r in &summary.rows {
            println!(
                "{:<12} {:>3} {:>3} {:>5} {:>5} {:>7} {:>8} {:>11}",
                r.name,
                if r.alternating { "Y" } else { "N" },
                r.crossings,
                r.det,
                r.sigma,
                opt(r.kh_thin),
                opt(r.hfk_thin),
                format!("{:?}", r.qa_status).to_lowercase()
            );
        }
        let c = &summary.counts;
        println!(
            "entries {}  kh_thin {}  hfk_thin {}/{}  certified {}",
            c.entries, c.kh_thin, c.hfk_thin, c.hfk_checked, c.qa_certified
        );
        println!("not kh-thin: {}", c.not_kh_thin.join(" "));
        println!("not hfk-thin: {}", c.not_hfk_thin.join(" "));
        println!(
            "failures: {}",
            [
                c.alternating_failures.clone(),
                c.thinness_violations.clone(),
                c.errors.clone()
            ]
            .concat()
            .join(" ")
        );
    }
    Ok(if summary.all_pass() { 0 } else { EXIT_NEGATIVE })
}

fn run_check_lemmas(b: &Batch) -> Outcome {
    let corpus = load_corpus(b.corpus.as_deref())?;
    let summary = harness::check_lemmas(&corpus, &batch_options(b));
    if b.format.json {
        emit_json(&summary);
    } else {
        for (label, t) in [
            ("signature lemma", &summary.signatures),
            ("skein triangles", &summary.skein),
        ] {
            println!(
                "{label}: {} crossings, hypothesis holds at {}, {} violations",
                t.checked,
                t.hypothesis_holds,
                t.violations.len()
            );
            for v in &t.violations {
                println!("  {} crossing {}: {}", v.name, v.crossing, v.check);
            }
        }
        println!(
            "connecting map forced zero at {} crossings",
            summary.forced_zero
        );
    }
    Ok(if summary.all_pass() { 0 } else { EXIT_NEGATIVE })
}
