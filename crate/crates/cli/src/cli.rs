//! Argument parsing and the subcommands.
//!
//! Exit codes: 0 success, 1 usage, IO or parse error, 2 a verification
//! failed (or `compare` found disagreeing signs).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use mkstar_core::eigen::{group_multiplicities, sym_eigen};
use mkstar_core::partition::{
    compare_signs, kway, recursive_bisection, sign_bipartition, KSelect, Partition,
    PartitionError, RsbStop, SignStatus,
};
use mkstar_core::reduce::{
    interlacing_check, reduce_all, sym_mass_laplacian, verify_adjacency_reduction,
    verify_laplacian_reduction, Policy, ReduceError, Reduction,
};
use mkstar_core::structure::{
    certify_star_as_ldependent, detect_proportional_ldependent, plant_ldependent_graph,
    plant_star_graph, verify_ldependent, verify_ldependent_predictions, verify_star_predictions,
    StarSpec, StructureError,
};
use mkstar_core::{Check, Graph, MatrixKind, VerificationRecord, DEFAULT_TOL};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::dot::emit_dot;
use crate::format::{parse_graph_file, parse_partition_file, write_graph_file, FormatError};
use crate::report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Parser)]
#[command(name = "mkstar", version, about = "Star structure, eigenvalue multiplicities and spectrum-preserving reduction of weighted graphs")]
struct Cli {
    /// Relative tolerance for eigenvalue comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for the generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size, connectivity and strengths.
    Info { file: PathBuf },
    /// Eigenvalues of one of the graph matrices.
    Spectrum {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixArg::Laplacian)]
        matrix: MatrixArg,
    },
    /// Detect (m,k)-stars and check the multiplicities they force.
    Stars { file: PathBuf },
    /// Verify an l-dependent block, or detect proportional ones.
    Ldep {
        file: PathBuf,
        /// File with lines `v1 ...`, `v2 ...`, `v3 ...`.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Reduce every uniform star and write the reduced graph.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum)]
        policy: PolicyArg,
        /// Where to write the reduced graph.
        #[arg(short, long)]
        output: PathBuf,
        /// Also write a JSON report with the verification records.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every structural, reduction and sign check.
    Verify {
        file: PathBuf,
        /// Remove this many twins from the largest uniform star only
        /// (default: collapse every uniform star to one vertex).
        #[arg(long)]
        q: Option<usize>,
    },
    /// Spectral partitioning.
    Partition(PartitionArgs),
    /// Sign agreement of the Fiedler vectors before and after reduction.
    Compare {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Collapse)]
        policy: PolicyArg,
    },
    /// Write a random graph with planted structure.
    #[command(subcommand)]
    Generate(Generate),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("method").required(true).args(["bisect", "rsb", "kway"])))]
struct PartitionArgs {
    file: PathBuf,
    /// Split by the signs of the Fiedler vector.
    #[arg(long)]
    bisect: bool,
    /// Recursive spectral bisection.
    #[arg(long, requires = "rsb_stop")]
    rsb: bool,
    /// Stop splitting once there are this many clusters.
    #[arg(long, group = "rsb_stop", requires = "rsb")]
    max_clusters: Option<usize>,
    /// Only split clusters whose lambda2 is below this value.
    #[arg(long, group = "rsb_stop", requires = "rsb")]
    lambda2_threshold: Option<f64>,
    /// Number of clusters, or `auto` for the largest spectral gap.
    #[arg(long, value_parser = parse_k)]
    kway: Option<KSelect>,
    /// Write a Graphviz file colored by cluster.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// Random connected graph with planted (m,k)-stars.
    Stars {
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// `m,k,w`; repeat for several stars.
        #[arg(long = "star", value_parser = parse_star, required = true)]
        stars: Vec<StarSpec>,
        /// Write the graph here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random l-dependent block.
    Ldep {
        /// `a,b,l`: sizes of v1, v2 and v3.
        #[arg(long, value_parser = parse_sizes)]
        sizes: (usize, usize, usize),
        /// Common strength of the v1 and v3 vertices.
        #[arg(long)]
        wtilde: f64,
        /// Write the graph here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the planted partition.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MatrixArg {
    Laplacian,
    Adjacency,
    Signless,
    Normalized,
}

impl From<MatrixArg> for MatrixKind {
    fn from(m: MatrixArg) -> Self {
        match m {
            MatrixArg::Laplacian => MatrixKind::Laplacian,
            MatrixArg::Adjacency => MatrixKind::Adjacency,
            MatrixArg::Signless => MatrixKind::Signless,
            MatrixArg::Normalized => MatrixKind::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Collapse,
    KeepPair,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Collapse => Policy::CollapseToOne,
            PolicyArg::KeepPair => Policy::KeepPair,
        }
    }
}

fn parse_k(s: &str) -> Result<KSelect, String> {
    if s == "auto" {
        return Ok(KSelect::Auto);
    }
    s.parse()
        .map(KSelect::Fixed)
        .map_err(|_| format!("expected an integer or `auto`, got `{s}`"))
}

fn parse_star(s: &str) -> Result<StarSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || format!("expected `m,k,w`, got `{s}`");
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(StarSpec {
        m: parts[0].trim().parse().map_err(|_| bad())?,
        k: parts[1].trim().parse().map_err(|_| bad())?,
        w: parts[2].trim().parse().map_err(|_| bad())?,
    })
}

fn parse_sizes(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected `a,b,l`, got `{s}`"))?;
    match parts[..] {
        [a, b, l] => Ok((a, b, l)),
        _ => Err(format!("expected `a,b,l`, got `{s}`")),
    }
}

/// Output of one command: text, JSON sections and the exit code.
struct Outcome {
    text: String,
    sections: Map<String, Value>,
    code: i32,
    /// Names of failed checks, reported on stderr.
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            text: String::new(),
            sections: Map::new(),
            code: 0,
            failures: Vec::new(),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn section(&mut self, key: &str, v: Value) {
        self.sections.insert(key.into(), v);
    }

    /// Prints a record and folds its failures into the exit code.
    fn record(&mut self, rec: &VerificationRecord) {
        self.line(format!("== {}", rec.title));
        for c in &rec.checks {
            self.line(check_line(c));
        }
        for w in &rec.warnings {
            self.line(format!("warning: {w}"));
        }
        for c in rec.failures() {
            self.failures.push(c.name.clone());
            self.code = 2;
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((name, outcome)) => {
            if cli.json {
                let doc = report::document(name, cli.tol, outcome.sections);
                let _ = write!(out, "{}", report::to_pretty(&doc));
            } else {
                let _ = write!(out, "{}", outcome.text);
            }
            if !outcome.failures.is_empty() {
                let _ = writeln!(err, "verification failed: {}", outcome.failures.join(", "));
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Outcome), CliError> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    Ok(match &cli.command {
        Command::Info { file } => ("info", cmd_info(&load(file)?)),
        Command::Spectrum { file, matrix } => ("spectrum", cmd_spectrum(&load(file)?, *matrix, tol)?),
        Command::Stars { file } => ("stars", cmd_stars(&load(file)?, tol)?),
        Command::Ldep { file, partition } => {
            let g = load(file)?;
            let cand = match partition {
                Some(p) => Some(
                    parse_partition_file(&read(p)?).map_err(|source| CliError::Format {
                        path: p.clone(),
                        source,
                    })?,
                ),
                None => None,
            };
            ("ldep", cmd_ldep(&g, cand, tol)?)
        }
        Command::Reduce {
            file,
            policy,
            output,
            report: rep,
        } => ("reduce", cmd_reduce(&load(file)?, *policy, output, rep.as_deref(), tol)?),
        Command::Verify { file, q } => ("verify", cmd_verify(&load(file)?, *q, tol)?),
        Command::Partition(args) => ("partition", cmd_partition(&load(&args.file)?, args)?),
        Command::Compare { file, policy } => ("compare", cmd_compare(&load(file)?, *policy)?),
        Command::Generate(gen) => ("generate", cmd_generate(gen, cli.seed)?),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<Graph, CliError> {
    parse_graph_file(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

/// Compact number: integers without a fraction, tiny values in
/// scientific notation, otherwise up to 10 decimals.
fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-12 {
        return "0".into();
    }
    if x.abs() < 1e-4 {
        return format!("{x:.3e}");
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn check_line(c: &Check) -> String {
    let mut s = format!(
        "{} {}  observed {}  bound {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.name,
        num(c.observed),
        num(c.bound)
    );
    if !c.detail.is_empty() {
        let _ = write!(s, "  ({})", c.detail);
    }
    s
}

fn cmd_info(g: &Graph) -> Outcome {
    let mut o = Outcome::new();
    let summary = report::graph_summary(g);
    o.line(format!("vertices    {}", g.n()));
    o.line(format!("edges       {}", g.edge_count()));
    o.line(format!("components  {}", g.connected_components().len()));
    o.line(format!("unit masses {}", g.has_unit_masses()));
    if g.n() > 0 {
        let s = g.strengths();
        let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = s.iter().copied().fold(0.0, f64::max);
        o.line(format!("strengths   {} .. {}", num(lo), num(hi)));
    }
    o.section("graph", summary);
    o
}

fn cmd_spectrum(g: &Graph, matrix: MatrixArg, tol: f64) -> Result<Outcome, CliError> {
    let kind = MatrixKind::from(matrix);
    let m = g
        .matrix(kind)
        .map_err(|e| CliError::Usage(format!("cannot form the {} matrix: {e}", kind.name())))?;
    let s = sym_eigen(&m).map_err(StructureError::from)?;
    let table = group_multiplicities(&s.values, tol);
    let mut o = Outcome::new();
    o.line(format!("{} spectrum", kind.name()));
    for g in &table.groups {
        o.line(format!("{:>16}  x{}", num(g.value), g.multiplicity));
    }
    o.section("matrix", json!(kind.name()));
    o.section("spectrum", report::spectrum(&s.values, &table));
    Ok(o)
}

fn cmd_stars(g: &Graph, tol: f64) -> Result<Outcome, CliError> {
    let (pred, rec) = verify_star_predictions(g, tol)?;
    let mut o = Outcome::new();
    if pred.stars.is_empty() {
        o.line("no stars detected");
    }
    for s in &pred.stars {
        let weight = s.weight_uniform.map_or("unequal weight vectors".into(), |w| format!("w = {}", num(w)));
        o.line(format!("star m={} k={} v1={:?} v2={:?} {weight}", s.m(), s.k(), s.v1, s.v2));
    }
    for c in &pred.classes {
        o.line(format!("class w = {}: degree {}", num(c.weight), c.degree));
    }
    if !pred.stars.is_empty() {
        o.record(&rec);
    }
    o.section("structure", report::predictions(&pred));
    o.section("verification", report::record(&rec));
    Ok(o)
}

fn cmd_ldep(
    g: &Graph,
    cand: Option<mkstar_core::structure::LDependentCandidate>,
    tol: f64,
) -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    let blocks = match cand {
        Some(c) => match verify_ldependent(g, &c) {
            Ok(b) => vec![b],
            Err(e) => {
                o.line(format!("FAIL ldependent  ({e})"));
                o.failures.push("ldependent".into());
                o.code = 2;
                o.section("certificate", json!({"accepted": false, "reason": e.to_string()}));
                return Ok(o);
            }
        },
        None => detect_proportional_ldependent(g),
    };
    if blocks.is_empty() {
        o.line("no l-dependent blocks found");
    }
    for b in &blocks {
        o.line(format!(
            "block l={} w~={} v1={:?} v2={:?} v3={:?} residual {}",
            b.l(),
            num(b.wtilde),
            b.v1,
            b.v2,
            b.v3,
            num(b.max_residual)
        ));
    }
    let rec = verify_ldependent_predictions(g, &blocks, tol)?;
    o.record(&rec);
    o.section("blocks", json!(blocks.iter().map(report::ldependent).collect::<Vec<_>>()));
    o.section("verification", report::record(&rec));
    Ok(o)
}

fn reduction_records(g: &Graph, r: &Reduction, tol: f64) -> Vec<VerificationRecord> {
    let mut inter = VerificationRecord::new("interlacing");
    let ok = interlacing_check(g, r, tol);
    inter.push(Check::new("interlacing", ok, f64::from(u8::from(ok)), 1.0));
    vec![
        verify_adjacency_reduction(g, r, tol),
        verify_laplacian_reduction(g, r, tol),
        inter,
    ]
}

fn laplacian_spectra(o: &mut Outcome, g: &Graph, r: &Reduction) -> Result<(), CliError> {
    let orig = sym_eigen(&g.laplacian()).map_err(StructureError::from)?;
    let red = sym_eigen(&sym_mass_laplacian(r)).map_err(StructureError::from)?;
    o.line(format!("laplacian spectrum  {}", list(&orig.values)));
    o.line(format!("reduced (q = {})     {}", r.q(), list(&red.values)));
    o.section(
        "spectra",
        json!({"laplacian": orig.values, "reduced_laplacian": red.values}),
    );
    Ok(())
}

fn cmd_reduce(
    g: &Graph,
    policy: PolicyArg,
    output: &Path,
    report_path: Option<&Path>,
    tol: f64,
) -> Result<Outcome, CliError> {
    let r = reduce_all(g, policy.into())?;
    write_file(output, &write_graph_file(&r.reduced))?;
    let mut o = Outcome::new();
    o.line(format!(
        "reduced {} -> {} vertices, removed {:?}",
        g.n(),
        r.reduced.n(),
        r.removed_vertices()
    ));
    laplacian_spectra(&mut o, g, &r)?;
    let records = reduction_records(g, &r, tol);
    for rec in &records {
        o.record(rec);
    }
    o.section("reduction", report::reduction(&r));
    o.section("verification", json!(records.iter().map(report::record).collect::<Vec<_>>()));
    if let Some(path) = report_path {
        let doc = report::document("reduce", tol, o.sections.clone());
        write_file(path, &report::to_pretty(&doc))?;
    }
    Ok(o)
}

fn cmd_verify(g: &Graph, q: Option<usize>, tol: f64) -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    let mut records = Vec::new();

    let (pred, stars_rec) = verify_star_predictions(g, tol)?;
    o.line(format!(
        "graph: {} vertices, {} edges, {} stars ({} uniform)",
        g.n(),
        g.edge_count(),
        pred.stars.len(),
        pred.stars.iter().filter(|s| s.is_uniform()).count()
    ));
    records.push(stars_rec);

    // twins with unequal weight vectors must still force their eigenvalue
    let mut premise = VerificationRecord::new("star premise");
    let mut blocks = detect_proportional_ldependent(g);
    for s in pred.structural_stars() {
        let name = format!("star_premise[v1={:?}]", s.v1);
        match certify_star_as_ldependent(g, s) {
            Ok(b) => {
                let detail = format!("l-dependent block with l = {}, w~ = {}", b.l(), num(b.wtilde));
                premise.push(Check::new(name, true, b.l() as f64, 1.0).with_detail(detail));
                if !blocks.iter().any(|x| x.v1 == b.v1 && x.v3 == b.v3) {
                    blocks.push(b);
                }
            }
            Err(e) => premise.push(Check::new(name, false, 0.0, 1.0).with_detail(e.to_string())),
        }
    }
    if premise.checks.is_empty() {
        premise.warn("every twin class has equal weight vectors");
    }
    records.push(premise);
    records.push(verify_ldependent_predictions(g, &blocks, tol)?);

    let policy = match q {
        None => Policy::CollapseToOne,
        Some(q) => {
            let stars = mkstar_core::structure::detect_stars(g);
            let target = stars
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_uniform())
                .max_by(|(i, a), (j, b)| a.m().cmp(&b.m()).then(j.cmp(i)))
                .map(|(i, _)| i)
                .ok_or_else(|| CliError::Usage("--q given but the graph has no uniform star".into()))?;
            let mut qs = vec![0; stars.len()];
            qs[target] = q;
            Policy::Explicit(qs)
        }
    };
    let r = reduce_all(g, policy)?;
    laplacian_spectra(&mut o, g, &r)?;
    records.extend(reduction_records(g, &r, tol));

    let mut signs = VerificationRecord::new("sign agreement");
    if g.n() >= 2 && g.is_connected() && r.reduced.is_connected() {
        let rep = compare_signs(g, &r)?;
        match rep.status {
            SignStatus::Degenerate => signs.warn(format!(
                "eigenvalue {} is repeated: sign comparison inconclusive",
                num(rep.lambda2_reduced)
            )),
            status => signs.push(Check::new(
                "sign_agreement",
                status == SignStatus::Agree,
                rep.agreement,
                1.0,
            )),
        }
        o.section("signs", report::signs(&rep));
    } else {
        signs.warn("graph is not connected: no Fiedler vector");
    }
    records.push(signs);

    for rec in &records {
        o.record(rec);
    }
    let total: usize = records.iter().map(|r| r.checks.len()).sum();
    if o.code == 0 {
        o.line(format!("result: PASS ({total} checks)"));
    } else {
        o.line(format!("result: FAIL ({} of {total} checks failed)", o.failures.len()));
    }
    o.section("structure", report::predictions(&pred));
    o.section("reduction", report::reduction(&r));
    o.section("verification", json!(records.iter().map(report::record).collect::<Vec<_>>()));
    o.section("passed", json!(o.code == 0));
    Ok(o)
}

fn cmd_partition(g: &Graph, args: &PartitionArgs) -> Result<Outcome, CliError> {
    let p: Partition = if args.bisect {
        sign_bipartition(g)?
    } else if args.rsb {
        let stop = match (args.max_clusters, args.lambda2_threshold) {
            (Some(c), _) => RsbStop::MaxClusters(c),
            (None, Some(t)) => RsbStop::Lambda2Threshold(t),
            (None, None) => unreachable!("clap requires a stop rule"),
        };
        recursive_bisection(g, stop)?
    } else {
        kway(g, args.kway.expect("clap requires a method"))?
    };
    let mut o = Outcome::new();
    o.line(format!("clusters {}", p.cluster_count()));
    for (c, members) in p.clusters().iter().enumerate() {
        o.line(format!("{c}: {members:?}"));
    }
    if !p.zero_entries.is_empty() {
        o.line(format!("zero Fiedler entries at {:?}", p.zero_entries));
    }
    if let Some(path) = &args.dot {
        write_file(path, &emit_dot(g, Some(&p)))?;
    }
    o.section("partition", report::partition(&p));
    Ok(o)
}

fn cmd_compare(g: &Graph, policy: PolicyArg) -> Result<Outcome, CliError> {
    let r = reduce_all(g, policy.into())?;
    let rep = compare_signs(g, &r)?;
    let mut o = Outcome::new();
    o.line(format!(
        "reduced lambda2 {}  original eigenvalue {}",
        num(rep.lambda2_reduced),
        num(rep.lambda_original)
    ));
    o.line(format!("status {}", report::status_name(rep.status)));
    if !rep.degenerate {
        o.line(format!("agreement {}  flipped {}", num(rep.agreement), rep.flipped));
        for p in &rep.pairs {
            o.line(format!(
                "  vertex {:>4}  {:>14}  {:>14}  {}",
                p.vertex,
                num(p.original),
                num(p.lifted),
                if !p.counted { "skipped" } else if p.agree { "agree" } else { "DISAGREE" }
            ));
        }
    }
    if rep.status == SignStatus::Disagree {
        o.code = 2;
        o.failures.push("sign_agreement".into());
    }
    o.section("reduction", report::reduction(&r));
    o.section("signs", report::signs(&rep));
    Ok(o)
}

fn cmd_generate(gen: &Generate, seed: u64) -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    let (g, output) = match gen {
        Generate::Stars { n, stars, output } => {
            let p = plant_star_graph(seed, *n, stars)?;
            let v1: Vec<&Vec<usize>> = p.stars.iter().map(|s| &s.v1).collect();
            o.section("planted", json!(v1));
            (p.graph, output)
        }
        Generate::Ldep {
            sizes,
            wtilde,
            output,
            partition,
        } => {
            let p = plant_ldependent_graph(seed, *sizes, *wtilde)?;
            let c = &p.candidate;
            let join = |v: &[usize]| v.iter().map(|x| format!(" {x}")).collect::<String>();
            let part = format!("v1{}\nv2{}\nv3{}\n", join(&c.v1), join(&c.v2), join(&c.v3));
            if let Some(path) = partition {
                write_file(path, &part)?;
            }
            o.section("planted", json!({"v1": c.v1, "v2": c.v2, "v3": c.v3}));
            (p.graph, output)
        }
    };
    let text = write_graph_file(&g);
    match output {
        Some(path) => write_file(path, &text)?,
        None => o.text.push_str(&text),
    }
    o.section("graph", json!(text));
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-1.5), "-1.5");
        assert_eq!(num(1e-15), "0");
        assert_eq!(num(-1e-13), "0");
        assert_eq!(num(2.5e-7), "2.500e-7");
        assert_eq!(num(0.4384471871911697), "0.4384471872");
    }

    #[test]
    fn value_parsers() {
        assert_eq!(parse_k("auto"), Ok(KSelect::Auto));
        assert_eq!(parse_k("3"), Ok(KSelect::Fixed(3)));
        assert!(parse_k("x").is_err());
        assert_eq!(parse_star("3,2,1.5"), Ok(StarSpec { m: 3, k: 2, w: 1.5 }));
        assert!(parse_star("3,2").is_err());
        assert_eq!(parse_sizes("2,3,1"), Ok((2, 3, 1)));
        assert!(parse_sizes("2,3").is_err());
    }

    #[test]
    fn usage_errors_exit_1() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["mkstar", "frobnicate"], &mut out, &mut err), 1);
        assert_eq!(run(["mkstar", "partition", "x.graph"], &mut out, &mut err), 1);
        assert_eq!(run(["mkstar", "--help"], &mut out, &mut err), 0);
        assert_eq!(run(["mkstar", "--version"], &mut out, &mut err), 0);
    }
}
