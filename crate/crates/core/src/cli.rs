//! Command-line front end.
//!
//! Exit codes: 0 on success (recorded discrepancies included), 1 on usage
//! errors, 2 on computational failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ensembles::{ensemble_stats, type_spectrum_exhaustive};
use crate::error::{Error, Result};
use crate::graphs::*;
use crate::mixing::{
    instantaneous_mixing_scan, lazy_stationary, total_variation, uniform_target, verify_all,
    CheckKind, ScanOptions, VerifyConfig, VerifyReport, DEFAULT_GRID,
};
use crate::spectra::{
    class_circulant_eigenvalues, degeneracy_classes, dense_eigensystem, spectral_gap, spectrum_for,
    spectrum_type, CharacterTable, Spectrum, DEFAULT_TOL,
};
use crate::walk::{
    average_distribution, evolve, finite_time_average, instantaneous_distribution, Distribution,
};

#[derive(Debug, Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Continuous-time quantum walks on graphs: spectra, distributions and mixing checks"
)]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true, env = "CTQW_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a graph
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues, spectral gap and spectrum type
    Spectrum(SpectrumArgs),
    /// Instantaneous distribution P_t
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Evolution time
        #[arg(long)]
        t: f64,
        /// Also emit amplitudes as [re, im] pairs (JSON only)
        #[arg(long)]
        amplitudes: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Limiting average distribution and its deviations
    Average {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Degeneracy tolerance
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also report the finite-time average over [0, T]
        #[arg(long = "horizon", value_name = "T")]
        horizon: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Local minima of ||P_t - U|| over (0, t_max]
    Scan {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Keep minima with deviation at most eps
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// Scan window (default: 2 pi n / smallest eigenvalue gap, capped at 1e3)
        #[arg(long)]
        t_max: Option<f64>,
        /// Grid points before refinement
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random Z_n-circulant ensemble statistics
    Ensemble {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every connected symbol instead of sampling
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the theorem checks
    Verify {
        /// Largest vertex count in family sweeps
        #[arg(long, default_value_t = 64)]
        max_n: usize,
        /// Checks to run, comma separated (default: all)
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<CheckArg>>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Randomized cases in the property check
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Cycle,
    Complete,
    Path,
    Hypercube,
    CompleteBipartite,
    Circulant,
    Bunkbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Complete,
    AbelianGap,
    Cycles,
    HypercubeInstantaneous,
    HypercubeAverage,
    Bunkbeds,
    Paths,
    Oracles,
    Ensembles,
    Properties,
}

impl From<CheckArg> for CheckKind {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Complete => CheckKind::CompleteGraphs,
            CheckArg::AbelianGap => CheckKind::AbelianGap,
            CheckArg::Cycles => CheckKind::Cycles,
            CheckArg::HypercubeInstantaneous => CheckKind::HypercubeInstantaneous,
            CheckArg::HypercubeAverage => CheckKind::HypercubeAverage,
            CheckArg::Bunkbeds => CheckKind::Bunkbeds,
            CheckArg::Paths => CheckKind::Paths,
            CheckArg::Oracles => CheckKind::OracleEquivalence,
            CheckArg::Ensembles => CheckKind::Ensembles,
            CheckArg::Properties => CheckKind::Properties,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Graph selection: a family with size parameters, or a graph file.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long, conflicts_with = "graph_file")]
    pub family: Option<FamilyArg>,
    /// Vertex count (part size for complete-bipartite, group order for circulant)
    #[arg(long)]
    pub n: Option<usize>,
    /// Hypercube dimension
    #[arg(long)]
    pub d: Option<u32>,
    /// Base family for bunkbed graphs (sized by --n / --d / --factors)
    #[arg(long)]
    pub base: Option<FamilyArg>,
    /// Cyclic factors of the circulant group, e.g. 2,2,2 (default: --n)
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<usize>>,
    /// Symbol support as group-element indices, e.g. 1,3
    #[arg(long, value_delimiter = ',')]
    pub support: Option<Vec<usize>>,
    /// Graph JSON as written by `build`
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    /// Start vertex
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Divide the Hamiltonian by the regular degree
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format (default: json, table for verify)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub normalize: bool,
    /// Degeneracy tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Include eigenvectors (JSON only)
    #[arg(long)]
    pub eigenvectors: bool,
    /// Use the dense eigensolver even when a closed form exists
    #[arg(long)]
    pub dense: bool,
    /// Character table JSON for a class-function circulant
    #[arg(long, requires = "class_symbol", conflicts_with_all = ["family", "graph_file"])]
    pub char_table: Option<PathBuf>,
    /// Symbol value (0/1) per conjugacy class, comma separated
    #[arg(long, value_delimiter = ',', requires = "char_table")]
    pub class_symbol: Option<Vec<u8>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Unreadable input files are usage errors, not computational ones.
fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn need<T>(value: Option<T>, flag: &str, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("{what} needs {flag}")))
}

fn build_family(family: FamilyArg, args: &GraphArgs) -> Result<Graph> {
    match family {
        FamilyArg::Cycle => build_cycle(need(args.n, "--n", "cycle")?),
        FamilyArg::Complete => build_complete(need(args.n, "--n", "complete")?),
        FamilyArg::Path => build_path(need(args.n, "--n", "path")?),
        FamilyArg::Hypercube => build_hypercube(need(args.d, "--d", "hypercube")?),
        FamilyArg::CompleteBipartite => {
            build_complete_bipartite(need(args.n, "--n", "complete-bipartite")?)
        }
        FamilyArg::Circulant => {
            let factors = match &args.factors {
                Some(f) => f.clone(),
                None => vec![need(args.n, "--n or --factors", "circulant")?],
            };
            let support = need(args.support.as_ref(), "--support", "circulant")?;
            let sym = Symbol::from_support(AbelianGroupSpec::new(factors)?, support)?;
            Ok(build_abelian_circulant(&sym))
        }
        FamilyArg::Bunkbed => {
            let base = need(args.base, "--base", "bunkbed")?;
            if base == FamilyArg::Bunkbed {
                return Err(Error::InvalidArgument(
                    "bunkbed base must be another family".into(),
                ));
            }
            build_bunkbed(&build_family(base, args)?)
        }
    }
}

impl GraphArgs {
    pub fn resolve(&self) -> Result<Graph> {
        match (&self.graph_file, self.family) {
            (Some(path), _) => {
                let file: GraphFile = serde_json::from_str(&read_input(path)?)?;
                file.to_graph()
            }
            (None, Some(family)) => build_family(family, self),
            (None, None) => Err(Error::InvalidArgument(
                "select a graph with --family or --graph-file".into(),
            )),
        }
    }
}

fn walk_spectrum(g: &Graph, normalize: bool) -> Result<Spectrum> {
    let spec = spectrum_for(g)?;
    if !normalize {
        return Ok(spec);
    }
    let degree = g
        .regular_degree()
        .ok_or_else(|| Error::InvalidArgument("--normalize needs a regular graph".into()))?;
    spec.scaled(1.0 / degree as f64)
}

fn check_start(g: &Graph, start: usize) -> Result<()> {
    if start >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "start vertex {start} out of range for n = {}",
            g.n()
        )));
    }
    Ok(())
}

fn distribution_csv(p: &Distribution) -> String {
    let mut s = String::from("vertex,probability\n");
    for (v, x) in p.probs().iter().enumerate() {
        let _ = writeln!(s, "{v},{x:?}");
    }
    s
}

fn distribution_table(g: &Graph, p: &Distribution) -> String {
    let mut s = format!("{:>8}  {:<12}  probability\n", "vertex", "label");
    for (v, x) in p.probs().iter().enumerate() {
        let label = g.labels().map_or(String::new(), |l| l[v].clone());
        let _ = writeln!(s, "{v:>8}  {label:<12}  {x:?}");
    }
    s
}

struct Rendered {
    json: Value,
    csv: String,
    table: String,
}

fn write_output(out: &OutputArgs, default: Format, r: Rendered) -> Result<()> {
    let body = match out.format.unwrap_or(default) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.json)?;
            s.push('\n');
            s
        }
        Format::Csv => r.csv,
        Format::Table => r.table,
    };
    match &out.output {
        Some(path) => write_atomic(path, body.as_bytes()),
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

/// Writes via a temp file in the target directory and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn with_schema<T: Serialize>(value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    Ok(v)
}

fn cmd_build(graph: &GraphArgs, out: &OutputArgs) -> Result<()> {
    let g = graph.resolve()?;
    let file = GraphFile::from(&g);
    let mut csv = String::from("u,v\n");
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            if g.is_adjacent(i, j) {
                let _ = writeln!(csv, "{i},{j}");
            }
        }
    }
    let mut table = format!("{} ({} vertices)\n", g.describe(), g.n());
    for row in &file.adjacency_rows {
        let _ = writeln!(table, "{row}");
    }
    write_output(
        out,
        Format::Json,
        Rendered {
            json: serde_json::to_value(&file)?,
            csv,
            table,
        },
    )
}

fn class_spectrum(path: &Path, symbol: &[u8], tol: f64, out: &OutputArgs) -> Result<()> {
    let table = CharacterTable::from_json(&read_input(path)?)?;
    let f: Vec<bool> = symbol
        .iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Error::InvalidArgument(format!(
                "class symbol entries must be 0 or 1, got {other}"
            ))),
        })
        .collect::<Result<_>>()?;
    let mut raw = class_circulant_eigenvalues(&table, &f)?;
    raw.sort_by(|a, b| b.0.total_cmp(&a.0));
    // merge irreps sharing an eigenvalue
    let mut values: Vec<(f64, usize)> = Vec::new();
    for (v, m) in raw {
        match values.last_mut() {
            Some(last) if last.0 - v <= tol => last.1 += m,
            _ => values.push((v, m)),
        }
    }
    let kind = values.len();
    let gap = if values.iter().any(|&(_, m)| m > 1) {
        0.0
    } else {
        values
            .windows(2)
            .map(|w| w[0].0 - w[1].0)
            .fold(f64::INFINITY, f64::min)
    };
    let mut csv = String::from("eigenvalue,multiplicity\n");
    let mut text = format!("class circulant on a group of order {}\n", table.order());
    for (v, m) in &values {
        let _ = writeln!(csv, "{v:?},{m}");
        let _ = writeln!(text, "{v:>24?}  x{m}");
    }
    let _ = writeln!(text, "spectral gap {gap:?}, type {kind}");
    let json = json!({
        "schema": SCHEMA,
        "order": table.order(),
        "eigenvalues": values.iter().map(|&(v, m)| json!({"value": v, "multiplicity": m})).collect::<Vec<_>>(),
        "spectral_gap": gap,
        "type": kind,
    });
    write_output(
        out,
        Format::Json,
        Rendered {
            json,
            csv,
            table: text,
        },
    )
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            args.tol
        )));
    }
    if let (Some(path), Some(symbol)) = (&args.char_table, &args.class_symbol) {
        return class_spectrum(path, symbol, args.tol, &args.out);
    }
    let g = args.graph.resolve()?;
    let mut spec = if args.dense {
        dense_eigensystem(&g)?
    } else {
        spectrum_for(&g)?
    };
    if args.normalize {
        let degree = g
            .regular_degree()
            .ok_or_else(|| Error::InvalidArgument("--normalize needs a regular graph".into()))?;
        spec = spec.scaled(1.0 / degree as f64)?;
    }
    let part = degeneracy_classes(&spec, args.tol)?;
    let gap = spectral_gap(&spec);
    let kind = spectrum_type(&spec, args.tol)?;
    let mut json = json!({
        "schema": SCHEMA,
        "graph": g.describe(),
        "n": g.n(),
        "eigenvalues": spec.eigenvalues(),
        "multiplicities": part.multiplicities(),
        "spectral_gap": gap,
        "type": kind,
    });
    if args.eigenvectors {
        json["eigenvectors"] = serde_json::to_value(spec.eigenvectors())?;
    }
    let mut csv = String::from("index,eigenvalue\n");
    let mut table = format!("{}\n", g.describe());
    for (j, v) in spec.eigenvalues().iter().enumerate() {
        let _ = writeln!(csv, "{j},{v:?}");
        let _ = writeln!(table, "{j:>6}  {v:?}");
    }
    let _ = writeln!(
        table,
        "spectral gap {gap:?}, type {kind}, multiplicities {:?}",
        part.multiplicities()
    );
    write_output(&args.out, Format::Json, Rendered { json, csv, table })
}

fn cmd_walk(
    graph: &GraphArgs,
    walk: &WalkArgs,
    t: f64,
    amplitudes: bool,
    out: &OutputArgs,
) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "time must be finite, got {t}"
        )));
    }
    let g = graph.resolve()?;
    check_start(&g, walk.start)?;
    let spec = walk_spectrum(&g, walk.normalize)?;
    let p = instantaneous_distribution(&spec, walk.start, t)?;
    let mut json = json!({
        "schema": SCHEMA,
        "graph": g.describe(),
        "start": walk.start,
        "t": t,
        "normalized": walk.normalize,
        "distribution": p.probs(),
        "deviation_uniform": total_variation(&p, &uniform_target(g.n()))?,
        "clamped_mass": p.clamped_mass(),
    });
    if amplitudes {
        json["amplitudes"] = serde_json::to_value(&evolve(&spec, walk.start, t)?.entries)?;
    }
    let table = format!(
        "{} at t = {t:?}\n{}",
        g.describe(),
        distribution_table(&g, &p)
    );
    write_output(
        out,
        Format::Json,
        Rendered {
            json,
            csv: distribution_csv(&p),
            table,
        },
    )
}

fn cmd_average(
    graph: &GraphArgs,
    walk: &WalkArgs,
    tol: f64,
    horizon: Option<f64>,
    out: &OutputArgs,
) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(h) = horizon {
        if h <= 0.0 || !h.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {h}"
            )));
        }
    }
    let g = graph.resolve()?;
    check_start(&g, walk.start)?;
    let spec = walk_spectrum(&g, walk.normalize)?;
    let part = degeneracy_classes(&spec, tol)?;
    let p = average_distribution(&spec, walk.start, &part)?;
    let dev_u = total_variation(&p, &uniform_target(g.n()))?;
    let dev_c = total_variation(&p, &lazy_stationary(&g))?;
    let mut json = json!({
        "schema": SCHEMA,
        "graph": g.describe(),
        "start": walk.start,
        "distribution": p.probs(),
        "deviation_uniform": dev_u,
        "deviation_classical": dev_c,
        "clamped_mass": p.clamped_mass(),
    });
    let mut table = format!(
        "{} average from vertex {}\n{}",
        g.describe(),
        walk.start,
        distribution_table(&g, &p)
    );
    let _ = writeln!(table, "||Pbar - U|| = {dev_u:?}\n||Pbar - pi|| = {dev_c:?}");
    if let Some(h) = horizon {
        let finite = finite_time_average(&spec, walk.start, h, &part)?;
        let diff = p
            .probs()
            .iter()
            .zip(finite.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        json["finite_time"] =
            json!({"horizon": h, "distribution": finite.probs(), "max_abs_diff": diff});
        let _ = writeln!(
            table,
            "finite-time average at T = {h:?}: max |diff| = {diff:?}"
        );
    }
    write_output(
        out,
        Format::Json,
        Rendered {
            json,
            csv: distribution_csv(&p),
            table,
        },
    )
}

fn cmd_scan(
    graph: &GraphArgs,
    walk: &WalkArgs,
    eps: f64,
    t_max: Option<f64>,
    grid: usize,
    out: &OutputArgs,
) -> Result<()> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be non-negative, got {eps}"
        )));
    }
    let g = graph.resolve()?;
    check_start(&g, walk.start)?;
    let spec = walk_spectrum(&g, walk.normalize)?;
    let mut opts = ScanOptions::for_spectrum(&spec, eps);
    opts.grid = grid;
    if let Some(t) = t_max {
        opts.t_max = t;
    }
    let minima = instantaneous_mixing_scan(&spec, walk.start, &opts)?;
    let json = json!({
        "schema": SCHEMA,
        "graph": g.describe(),
        "start": walk.start,
        "normalized": walk.normalize,
        "eps": eps,
        "t_max": opts.t_max,
        "grid": opts.grid,
        "minima": minima.iter().map(|&(t, d)| json!({"t": t, "deviation": d})).collect::<Vec<_>>(),
    });
    let mut csv = String::from("t,deviation\n");
    let mut table = format!(
        "{}: {} minima with ||P_t - U|| <= {eps:?} in (0, {:?}]\n",
        g.describe(),
        minima.len(),
        opts.t_max
    );
    for (t, d) in &minima {
        let _ = writeln!(csv, "{t:?},{d:?}");
        let _ = writeln!(table, "{t:>24?}  {d:?}");
    }
    write_output(out, Format::Json, Rendered { json, csv, table })
}

fn cmd_ensemble(
    n: usize,
    trials: usize,
    seed: u64,
    exhaustive: bool,
    out: &OutputArgs,
) -> Result<()> {
    let (json, histogram) = if exhaustive {
        let h = type_spectrum_exhaustive(n)?;
        (
            json!({"schema": SCHEMA, "n": n, "exhaustive": true, "type_histogram": h}),
            h,
        )
    } else {
        let stats = ensemble_stats(n, trials, seed)?;
        let h = stats.type_histogram.clone();
        (with_schema(&stats)?, h)
    };
    let mut csv = String::from("type,count\n");
    for (k, c) in &histogram {
        let _ = writeln!(csv, "{k},{c}");
    }
    let mut table = String::new();
    if let Value::Object(map) = &json {
        for (k, v) in map {
            if k != "type_histogram" {
                let _ = writeln!(table, "{k:<28} {v}");
            }
        }
    }
    let _ = writeln!(table, "type histogram:");
    for (k, c) in &histogram {
        let _ = writeln!(table, "{k:>6}  {c}");
    }
    write_output(out, Format::Json, Rendered { json, csv, table })
}

fn verify_table(report: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:<26} {:>14} {:>14}  detail",
        "status", "check", "measured", "expected"
    );
    for c in &report.checks {
        let status = serde_json::to_value(c.status)
            .map(|v| v.as_str().unwrap_or("").to_uppercase())
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{status:<12} {:<26} {:>14.6e} {:>14.6e}  {}",
            c.id, c.measured, c.expected, c.detail
        );
    }
    let _ = writeln!(
        s,
        "\n{:<20} {:>4} {:>14} {:>14} {:>12} {:>5}",
        "graph", "n", "dev_uniform", "dev_classical", "gap", "type"
    );
    for r in &report.reports {
        let _ = writeln!(
            s,
            "{:<20} {:>4} {:>14.6e} {:>14.6e} {:>12.4e} {:>5}",
            r.graph,
            r.n,
            r.deviation_uniform,
            r.deviation_classical,
            r.spectral_gap,
            r.spectrum_type
        );
    }
    let _ = writeln!(
        s,
        "\n{} checks, {} discrepancies",
        report.checks.len(),
        report.discrepancies.len()
    );
    s
}

fn cmd_verify(config: &VerifyConfig, out: &OutputArgs) -> Result<bool> {
    let report = verify_all(config)?;
    let mut csv = String::from("status,check,measured,expected\n");
    for c in &report.checks {
        let status = serde_json::to_value(c.status)?;
        let _ = writeln!(
            csv,
            "{},{},{:?},{:?}",
            status.as_str().unwrap_or(""),
            c.id,
            c.measured,
            c.expected
        );
    }
    let table = verify_table(&report);
    write_output(
        out,
        Format::Table,
        Rendered {
            json: serde_json::to_value(&report)?,
            csv,
            table,
        },
    )?;
    Ok(!report.has_failures())
}

/// Runs a parsed command; `Ok(false)` means a check failed.
pub fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Build { graph, out } => cmd_build(graph, out).map(|_| true),
        Command::Spectrum(args) => cmd_spectrum(args).map(|_| true),
        Command::Walk {
            graph,
            walk,
            t,
            amplitudes,
            out,
        } => cmd_walk(graph, walk, *t, *amplitudes, out).map(|_| true),
        Command::Average {
            graph,
            walk,
            tol,
            horizon,
            out,
        } => cmd_average(graph, walk, *tol, *horizon, out).map(|_| true),
        Command::Scan {
            graph,
            walk,
            eps,
            t_max,
            grid,
            out,
        } => cmd_scan(graph, walk, *eps, *t_max, *grid, out).map(|_| true),
        Command::Ensemble {
            n,
            trials,
            seed,
            exhaustive,
            out,
        } => cmd_ensemble(*n, *trials, *seed, *exhaustive, out).map(|_| true),
        Command::Verify {
            max_n,
            checks,
            trials,
            cases,
            seed,
            out,
        } => {
            let checks = match checks {
                Some(list) => list.iter().map(|&c| c.into()).collect(),
                None => CheckKind::ALL.to_vec(),
            };
            let config = VerifyConfig {
                checks,
                max_n: *max_n,
                ensemble_trials: *trials,
                property_cases: *cases,
                seed: *seed,
            };
            cmd_verify(&config, out)
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: thread count must be positive");
            return 1;
        }
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                1
            } else {
                2
            }
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os())
}
