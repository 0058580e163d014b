//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation error, 2 check failure, 3 resource
//! limit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::braidword::{BraidWord, GradingLedger};
use crate::cubeposet::cyclic_relabel;
use crate::heckeoracle::{homfly, CALIBRATION};
use crate::hochschild::TriGradedDims;
use crate::laurent::TruncatedSeries;
use crate::polyalg::Field;
use crate::ssq::{
    build_e1, check_cutoff, compute_e2, euler_characteristic, limiting_descriptor,
    poincare_series, reindex, verify_d1_squared, D1Verdict, PageBuilder, ResultDocument, MAX_CUTOFF,
};
use crate::{Error, Result};

pub const CACHE_ENV: &str = "BROKENSYM_CACHE";
const VERSION_TAG: &str = concat!("brokensym-", env!("CARGO_PKG_VERSION"), "-schema1");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "brokensym", version, about = "Broken-symmetry invariants of braid closures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the E₂ page, Euler characteristic and limiting descriptor.
    Compute(JobArgs),
    /// Run a verification suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        job: JobArgs,
    },
    /// Print the limiting descriptor only.
    Descriptor(JobArgs),
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// Space-separated signed generator indices, e.g. "1 -2 1".
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Number of strands; defaults to one more than the largest index.
    #[arg(long)]
    pub strands: Option<usize>,
    #[arg(long, default_value_t = 12, allow_hyphen_values = true)]
    pub cutoff: i64,
    /// `q` or `fp:<p>`.
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    D2,
    Markov1,
    Braid,
    Inverse,
    Reflect,
    Markov2,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Compute,
    Check(Suite),
    Descriptor,
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub word: Option<BraidWord>,
    pub cutoff: i64,
    pub field: Field,
    pub command: CommandKind,
    pub cache_dir: PathBuf,
    pub jobs: Option<usize>,
    pub format: Format,
}

fn infer_strands(text: &str) -> usize {
    text.split_whitespace()
        .filter_map(|t| t.parse::<i64>().ok())
        .map(|n| n.unsigned_abs() as usize + 1)
        .max()
        .unwrap_or(1)
}

pub fn default_cache_dir() -> PathBuf {
    std::env::temp_dir().join("brokensym-cache")
}

impl JobConfig {
    pub fn from_args(command: CommandKind, a: &JobArgs) -> Result<Self> {
        let word = match &a.word {
            Some(text) => {
                let strands = a.strands.unwrap_or_else(|| infer_strands(text));
                Some(BraidWord::parse(text, strands)?)
            }
            None if command == CommandKind::Compute || command == CommandKind::Descriptor => {
                Some(BraidWord::parse("", a.strands.unwrap_or(1))?)
            }
            None => None,
        };
        if a.cutoff < 0 || a.cutoff % 2 != 0 {
            return Err(Error::Degree(format!("cutoff {} must be even and nonnegative", a.cutoff)));
        }
        if a.jobs == Some(0) {
            return Err(Error::OutOfRange("--jobs must be positive".into()));
        }
        let cache_dir = a
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from))
            .unwrap_or_else(default_cache_dir);
        Ok(Self {
            word,
            cutoff: a.cutoff,
            field: Field::parse(&a.field)?,
            command,
            cache_dir,
            jobs: a.jobs,
            format: a.format,
        })
    }

    fn word(&self) -> &BraidWord {
        self.word.as_ref().expect("compute and descriptor always carry a word")
    }

    /// Content hash of everything that determines a compute result.
    pub fn cache_key(&self) -> String {
        let w = self.word();
        let mut h = Sha256::new();
        for part in [w.to_string(), w.strands().to_string(), self.cutoff.to_string(), self.field.to_string()] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        h.update(VERSION_TAG.as_bytes());
        hex::encode(h.finalize())
    }

    fn cache_path(&self) -> PathBuf {
        let ext = match self.format {
            Format::Json => "json",
            Format::Text => "txt",
        };
        self.cache_dir.join(format!("{}.{ext}", self.cache_key()))
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        _ => EXIT_INVALID,
    }
}

/// Output of a command: bytes for stdout, diagnostics for stderr, exit code.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub code: i32,
}

fn failure(e: &Error) -> Outcome {
    Outcome { stdout: vec![], stderr: format!("error: {e}\n"), code: exit_code(e) }
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serializable");
    s.push(b'\n');
    s
}

fn render_document(doc: &ResultDocument, page_dims: &TriGradedDims, format: Format) -> Result<Vec<u8>> {
    if format == Format::Json {
        return Ok(to_json(doc));
    }
    let mut s = String::new();
    let _ = writeln!(s, "word      [{}] on {} strands", doc.word, doc.strands);
    let _ = writeln!(s, "cutoff    {}  (provisional band {}..={})", doc.cutoff, doc.provisional_band[0], doc.provisional_band[1]);
    let _ = writeln!(s, "field     {}", doc.field);
    let _ = writeln!(s, "ledger    {}", doc.ledger);
    let _ = writeln!(s, "\nE2 dims");
    let _ = write!(s, "{page_dims}");
    let _ = writeln!(s, "\nEuler characteristic  {}", euler_characteristic(page_dims));
    let d = &doc.descriptor;
    let _ = writeln!(
        s,
        "components {}  |V_I| {}  suspension {}",
        d.component_count, d.virtual_dim, d.suspension
    );
    Ok(s.into_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

pub fn cmd_compute(cfg: &JobConfig) -> Outcome {
    let w = cfg.word();
    let mut out = Outcome::default();
    let mut cutoff = cfg.cutoff;
    if let Err(e @ Error::ResourceLimit(_)) = check_cutoff(cutoff) {
        let _ = writeln!(out.stderr, "warning: {e}; reporting the band up to {MAX_CUTOFF}");
        out.code = EXIT_RESOURCE;
        cutoff = MAX_CUTOFF;
    }
    let partial = out.code != EXIT_OK;
    let path = cfg.cache_path();
    if !partial {
        if let Ok(bytes) = std::fs::read(&path) {
            out.stdout = bytes;
            return out;
        }
    }
    let rendered = compute_e2(w, cutoff, cfg.field).and_then(|page| {
        let doc = ResultDocument::new(w, &page)?;
        Ok((render_document(&doc, &page.dims, cfg.format)?, page.warnings))
    });
    match rendered {
        Ok((bytes, warnings)) => {
            for msg in warnings {
                let _ = writeln!(out.stderr, "warning: {msg}");
            }
            if !partial {
                if let Err(e) = write_atomic(&path, &bytes) {
                    let _ = writeln!(out.stderr, "warning: cache write failed: {e}");
                }
            }
            out.stdout = bytes;
            out
        }
        Err(e) => {
            let mut f = failure(&e);
            f.stderr.insert_str(0, &out.stderr);
            f
        }
    }
}

pub fn cmd_descriptor(cfg: &JobConfig) -> Outcome {
    let w = cfg.word();
    match limiting_descriptor(w) {
        Ok(d) => {
            let stdout = match cfg.format {
                Format::Json => to_json(&d),
                Format::Text => format!(
                    "word [{w}] on {} strands\ncomponents {}\n|V_I| {}\nsuspension {}\npermutation {:?}\n",
                    w.strands(),
                    d.component_count,
                    d.virtual_dim,
                    d.suspension,
                    d.permutation
                )
                .into_bytes(),
            };
            Outcome { stdout, stderr: String::new(), code: EXIT_OK }
        }
        Err(e) => failure(&e),
    }
}

/// One comparison in a check report. Each `diff` row is a multidegree
/// (`t, j, d` for pages) followed by the left and right values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub left: String,
    pub right: String,
    pub reindex: Option<GradingLedger>,
    pub passed: bool,
    pub diff: Vec<Vec<i64>>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub suite: Suite,
    pub cutoff: i64,
    pub field: String,
    pub passed: bool,
    pub comparisons: Vec<Comparison>,
}

fn label(w: &BraidWord) -> String {
    format!("[{w}]/{}", w.strands())
}

fn dims_diff(a: &TriGradedDims, b: &TriGradedDims) -> Vec<Vec<i64>> {
    a.diff(b).into_iter().map(|((t, j, d), x, y)| vec![t, j as i64, d, x as i64, y as i64]).collect()
}

fn series_diff(a: &TruncatedSeries, b: &TruncatedSeries) -> Vec<Vec<i64>> {
    let p = a.precision().min(b.precision());
    let k = a.poly().names().len() - 1;
    let (pa, pb) = (a.poly().truncate(k, p), b.poly().truncate(k, p));
    let mut keys: Vec<Vec<i32>> = pa.terms().chain(pb.terms()).map(|(e, _)| e.clone()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|e| pa.coeff(e) != pb.coeff(e))
        .map(|e| {
            let c = |l: &crate::laurent::Laurent| i64::try_from(l.coeff(&e)).unwrap_or(i64::MAX);
            e.iter().map(|&x| x as i64).chain([c(&pa), c(&pb)]).collect()
        })
        .collect()
}

fn cmp_pages(name: &str, w: &BraidWord, w2: &BraidWord, delta: GradingLedger, cutoff: i64, field: Field) -> Result<Comparison> {
    let left = compute_e2(w, cutoff, field)?.dims;
    let right = compute_e2(w2, cutoff, field)?.dims;
    let (s, rho) = delta.pair();
    let predicted = reindex(&right, delta);
    let band = cutoff - (s + rho).abs();
    let diff = dims_diff(&left.truncated(band), &predicted.truncated(band));
    Ok(Comparison {
        name: name.into(),
        left: label(w),
        right: label(w2),
        reindex: Some(delta),
        passed: diff.is_empty(),
        diff,
        note: format!("internal degrees ≤ {band}"),
    })
}

fn d2_comparison(w: &BraidWord, cutoff: i64, field: Field) -> Result<Comparison> {
    let c = build_e1(w, field)?;
    let verdict = verify_d1_squared(&c, cutoff)?;
    let note = match &verdict {
        D1Verdict::Pass => "d1∘d1 = 0 on every square".to_string(),
        D1Verdict::Fail { from, to, degree } => {
            format!("nonzero composite from {} to {} (degree {degree:?})", from.mask, to.mask)
        }
    };
    Ok(Comparison {
        name: "d1 squared".into(),
        left: label(w),
        right: "0".into(),
        reindex: None,
        passed: verdict.passed(),
        diff: vec![],
        note,
    })
}

/// Cyclic rotation by one letter: per-vertex `HH` dimensions, `d₁` edge
/// ranks and degrees after relabeling, and the resulting `E₂`.
fn markov1_comparison(w: &BraidWord, cutoff: i64, field: Field) -> Result<Comparison> {
    let w2 = w.cyclic_permute();
    let k = w.len();
    let (c, c2) = (build_e1(w, field)?, build_e1(&w2, field)?);
    let (b, b2) = (PageBuilder::new(&c)?, PageBuilder::new(&c2)?);
    let lo = c.min_internal_degree().min(c2.min_internal_degree());
    let mut problems = vec![];
    for v in c.poset().vertices() {
        if c.degree_of(v) != c2.degree_of(cyclic_relabel(v, k)) {
            problems.push(format!("degree of vertex {}", v.mask));
        }
    }
    for j in 0..=w.strands() {
        for d in (lo..=cutoff).filter(|d| d % 2 == 0) {
            let (x, y) = (b.vertex_dims(j, d)?, b2.vertex_dims(j, d)?);
            for v in c.poset().vertices() {
                if x[v.mask as usize] != y[cyclic_relabel(v, k).mask as usize] {
                    problems.push(format!("HH dim at vertex {} (j={j}, d={d})", v.mask));
                }
            }
            let mut r2 = b2.edge_ranks(j, d)?;
            r2.sort();
            let mut r1: Vec<_> = b
                .edge_ranks(j, d)?
                .into_iter()
                .map(|(f, t, n)| (cyclic_relabel(f, k), cyclic_relabel(t, k), n))
                .collect();
            r1.sort();
            if r1 != r2 {
                problems.push(format!("d1 edge ranks (j={j}, d={d})"));
            }
        }
    }
    let (a, a2) = (b.analyze(cutoff)?, b2.analyze(cutoff)?);
    if a.d1_ranks != a2.d1_ranks {
        problems.push("d1 rank profile".into());
    }
    let diff = dims_diff(&a.e2, &a2.e2);
    let passed = problems.is_empty() && diff.is_empty();
    Ok(Comparison {
        name: "cyclic permutation".into(),
        left: label(w),
        right: label(&w2),
        reindex: Some(GradingLedger::ZERO),
        passed,
        diff,
        note: if problems.is_empty() { "E1 agrees after relabeling".into() } else { problems.join("; ") },
    })
}

/// Series ratio `P(stabilize(∅₁)) / P(∅₁)`.
fn stabilization_factor(sign: i8, cutoff: i64, field: Field) -> Result<TruncatedSeries> {
    let e = BraidWord::parse("", 1)?;
    let (se, _) = e.stabilize(sign)?;
    let base = poincare_series(&compute_e2(&e, cutoff, field)?);
    let stab = poincare_series(&compute_e2(&se, cutoff, field)?);
    Ok(stab.mul(&base.inverse()?))
}

fn markov2_comparison(w: &BraidWord, sign: i8, phi: &TruncatedSeries, cutoff: i64, field: Field) -> Result<Comparison> {
    let (sw, delta) = w.stabilize(sign)?;
    let lhs = poincare_series(&compute_e2(&sw, cutoff, field)?);
    let rhs = phi.mul(&poincare_series(&compute_e2(w, cutoff, field)?));
    let diff = series_diff(&lhs, &rhs);
    Ok(Comparison {
        name: format!("stabilization {}", if sign > 0 { "+" } else { "-" }),
        left: label(&sw),
        right: format!("Φ · {}", label(w)),
        reindex: Some(delta),
        passed: diff.is_empty(),
        diff,
        note: format!("Φ = {} through Q^{}", phi.poly(), lhs.precision().min(rhs.precision())),
    })
}

fn oracle_comparison(w: &BraidWord, cutoff: i64, field: Field) -> Result<Comparison> {
    let page = compute_e2(w, cutoff, field)?;
    let precision = page.provisional_band().0 as i32;
    let euler = euler_characteristic(&page.dims);
    let (lhs, rhs) = CALIBRATION.compare(&euler, w, precision)?;
    let diff = series_diff(&lhs, &rhs);
    Ok(Comparison {
        name: "euler vs homfly".into(),
        left: label(w),
        right: format!("P = {}", homfly(w)?),
        reindex: None,
        passed: diff.is_empty(),
        diff,
        note: format!("through q^{precision}"),
    })
}

fn words(r: usize, list: &[&[i64]]) -> Result<Vec<BraidWord>> {
    list.iter().map(|ints| BraidWord::from_ints(r, ints)).collect()
}

/// Every word of length at most `len` over `strands` strands.
pub fn all_words(strands: usize, len: usize) -> Result<Vec<BraidWord>> {
    let gens: Vec<i64> = (1..strands as i64).flat_map(|i| [i, -i]).collect();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    let mut out = vec![BraidWord::from_ints(strands, &[])?];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w| gens.iter().map(move |&g| [w.as_slice(), &[g]].concat()))
            .collect();
        for ints in &layer {
            out.push(BraidWord::from_ints(strands, ints)?);
        }
    }
    Ok(out)
}

/// First applicable braid relation in `w`, if any.
fn braid_partner(w: &BraidWord) -> Option<BraidWord> {
    let r = w.strands();
    (1..=w.len()).find_map(|at| {
        (1..r).flat_map(|i| (1..r).filter(move |&j| j != i).map(move |j| (i, j))).find_map(|(i, j)| {
            w.apply_braid_relation(at, i, j).ok()
        })
    })
}

pub fn cmd_check(cfg: &JobConfig, suite: Suite) -> Outcome {
    let (cutoff, field) = (cfg.cutoff, cfg.field);
    if let Err(e) = check_cutoff(cutoff) {
        return failure(&e);
    }
    let run = || -> Result<Vec<Comparison>> {
        let user = cfg.word.as_ref();
        let mut out = vec![];
        match suite {
            Suite::D2 => {
                let mut ws = vec![];
                for r in 1..=3 {
                    ws.extend(all_words(r, 3)?);
                }
                ws.extend(user.cloned());
                for w in &ws {
                    out.push(d2_comparison(w, cutoff, field)?);
                }
            }
            Suite::Markov1 => {
                let mut ws = words(3, &[&[1, 2], &[1, -2], &[1, 1, 2]])?;
                ws.extend(user.cloned());
                for w in &ws {
                    let mut cur = w.clone();
                    for _ in 0..w.len().max(1) {
                        out.push(markov1_comparison(&cur, cutoff, field)?);
                        cur = cur.cyclic_permute();
                    }
                }
            }
            Suite::Braid => {
                let w = BraidWord::from_ints(3, &[1, 2, 1])?;
                out.push(cmp_pages("braid relation", &w, &w.apply_braid_relation(1, 1, 2)?, GradingLedger::ZERO, cutoff, field)?);
                if let Some(w) = user {
                    match braid_partner(w) {
                        Some(w2) => out.push(cmp_pages("braid relation", w, &w2, GradingLedger::ZERO, cutoff, field)?),
                        None => out.push(Comparison {
                            name: "braid relation".into(),
                            left: label(w),
                            right: "-".into(),
                            reindex: None,
                            passed: true,
                            diff: vec![],
                            note: "no positive braid-relation window in the word".into(),
                        }),
                    }
                }
            }
            Suite::Inverse => {
                let mut ws = words(2, &[&[1, -1], &[-1, 1]])?;
                if let Some(w) = user {
                    for s in [1, -1] {
                        ws.push(w.insert_inverse_pair(1, 1, s)?.0);
                    }
                }
                for w in &ws {
                    let (w2, delta) = w.contract_inverse_pair(1)?;
                    out.push(cmp_pages("inverse pair", w, &w2, delta, cutoff, field)?);
                }
            }
            Suite::Reflect => {
                let mut ws = words(3, &[&[1, 2, 1], &[1, -2, -2]])?;
                ws.extend(user.cloned());
                for w in &ws {
                    out.push(cmp_pages("reflection", w, &w.reflect(), GradingLedger::ZERO, cutoff, field)?);
                }
            }
            Suite::Markov2 => {
                let mut ws = words(2, &[&[1], &[1, 1, 1]])?;
                ws.extend(user.cloned());
                for sign in [1i8, -1] {
                    let phi = stabilization_factor(sign, cutoff, field)?;
                    for w in &ws {
                        out.push(markov2_comparison(w, sign, &phi, cutoff, field)?);
                    }
                }
            }
            Suite::Oracle => {
                let mut ws = vec![BraidWord::from_ints(1, &[])?];
                ws.extend(words(2, &[&[1], &[-1], &[1, 1], &[1, 1, 1]])?);
                ws.extend(user.cloned());
                for w in &ws {
                    out.push(oracle_comparison(w, cutoff, field)?);
                }
            }
        }
        Ok(out)
    };
    match run() {
        Ok(comparisons) => {
            let passed = comparisons.iter().all(|c| c.passed);
            let report = CheckReport { schema: 1, suite, cutoff, field: field.to_string(), passed, comparisons };
            let stdout = match cfg.format {
                Format::Json => to_json(&report),
                Format::Text => render_report(&report).into_bytes(),
            };
            Outcome { stdout, stderr: String::new(), code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED } }
        }
        Err(e) => failure(&e),
    }
}

fn render_report(r: &CheckReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite {:?} at cutoff {} over {}", r.suite, r.cutoff, r.field);
    for c in &r.comparisons {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let reindex = c.reindex.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{verdict}  {}: {} vs {}  reindex {reindex}  {}", c.name, c.left, c.right, c.note);
        for row in &c.diff {
            let (deg, vals) = row.split_at(row.len() - 2);
            let _ = writeln!(s, "      at {deg:?}: {} vs {}", vals[0], vals[1]);
        }
    }
    let _ = writeln!(s, "{}", if r.passed { "all passed" } else { "FAILED" });
    s
}

pub fn dispatch(cfg: &JobConfig) -> Outcome {
    let job = || match cfg.command {
        CommandKind::Compute => cmd_compute(cfg),
        CommandKind::Descriptor => cmd_descriptor(cfg),
        CommandKind::Check(suite) => cmd_check(cfg, suite),
    };
    match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(job),
            Err(e) => failure(&Error::Internal(e.to_string())),
        },
        None => job(),
    }
}

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            return Outcome { stdout: vec![], stderr: e.render().to_string(), code };
        }
    };
    let (kind, job) = match &cli.command {
        Command::Compute(a) => (CommandKind::Compute, a),
        Command::Descriptor(a) => (CommandKind::Descriptor, a),
        Command::Check { suite, job } => (CommandKind::Check(*suite), job),
    };
    match JobConfig::from_args(kind, job) {
        Ok(cfg) => dispatch(&cfg),
        Err(e) => failure(&e),
    }
}

pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let o = run(args);
    let _ = std::io::stdout().write_all(&o.stdout);
    let _ = std::io::stderr().write_all(o.stderr.as_bytes());
    o.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Outcome {
        let mut v = vec!["brokensym"];
        v.extend_from_slice(args);
        run(v)
    }

    #[test]
    fn parse_errors_are_validation_failures() {
        let o = run_ok(&["compute", "--word", "0"]);
        assert_eq!(o.code, EXIT_INVALID);
        assert!(o.stderr.contains("generator 0"));
        assert_eq!(run_ok(&["compute", "--cutoff", "7"]).code, EXIT_INVALID);
        assert_eq!(run_ok(&["compute", "--field", "fp:4"]).code, EXIT_INVALID);
        assert_eq!(run_ok(&["check", "--suite", "nonsense"]).code, EXIT_INVALID);
    }

    #[test]
    fn strands_are_inferred() {
        assert_eq!(infer_strands("1 -3 2"), 4);
        assert_eq!(infer_strands(""), 1);
    }

    #[test]
    fn descriptor_examples() {
        let parse = |args: &[&str]| -> serde_json::Value {
            let o = run_ok(args);
            assert_eq!(o.code, 0, "{}", o.stderr);
            serde_json::from_slice(&o.stdout).unwrap()
        };
        let d = parse(&["descriptor", "--word", "1 1 1", "--strands", "2"]);
        assert_eq!(d["component_count"], 1);
        assert_eq!(d["virtual_dim"], 6);
        let d = parse(&["descriptor", "--word", "", "--strands", "2"]);
        assert_eq!(d["component_count"], 2);
        assert_eq!(d["virtual_dim"], 0);
        let d = parse(&["descriptor", "--word", "1 -1", "--strands", "2"]);
        assert_eq!(d["component_count"], 2);
        assert_eq!(d["virtual_dim"], 0);
    }

    #[test]
    fn cache_key_depends_on_every_field() {
        let args = JobArgs {
            word: Some("1 1".into()),
            strands: Some(2),
            cutoff: 8,
            field: "q".into(),
            jobs: None,
            cache_dir: Some("/nonexistent".into()),
            format: Format::Json,
        };
        let key = |a: &JobArgs| JobConfig::from_args(CommandKind::Compute, a).unwrap().cache_key();
        let base = key(&args);
        assert_eq!(base.len(), 64);
        for tweak in [
            JobArgs { word: Some("1 -1".into()), ..args.clone() },
            JobArgs { strands: Some(3), ..args.clone() },
            JobArgs { cutoff: 10, ..args.clone() },
            JobArgs { field: "fp:7".into(), ..args.clone() },
        ] {
            assert_ne!(key(&tweak), base);
        }
        assert_eq!(key(&JobArgs { jobs: Some(2), ..args.clone() }), base);
    }
}
