//! Command-line front end. Exit codes: 0 when every check passes, 1 when a
//! check fails, 2 for usage, parameter and budget errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::flats::{count_x, enumerate_flats, CountTable};
use crate::gf::FieldCtx;
use crate::incidence::{gram_matrix, verify_decomposition, IncidenceGraph, Params, Part};
use crate::richness::{exact_threshold, lund_saraf_check, paper_threshold, thm2_check, thm3_check};
use crate::sampling::SplitMix64;
use crate::spectral::{graph_spectrum, incidence_bound_check_indexed, mixing_audit, BoundSource, SpectrumReport, DEFAULT_TOL};
use crate::verify::{run_verify, Samples, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "fqflats", version, about = "Incidence graphs of affine flats over finite fields")]
struct Cli {
    /// Accept fields of characteristic 2.
    #[arg(long, global = true)]
    allow_even: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct GraphArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    h: usize,
}

impl GraphArgs {
    fn params(&self) -> Params {
        Params::new(self.q, self.d, self.k, self.h)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// `text` is the one-flat-per-line file format.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ListFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    B,
}

impl From<Side> for Part {
    fn from(s: Side) -> Part {
        match s {
            Side::A => Part::A,
            Side::B => Part::B,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum HypothesisArg {
    Exact,
    Paper,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flat counts and incidence degrees.
    Count {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: Output,
    },
    /// List every k-flat of F_q^d, one per line.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the adjacency list, or a Gram matrix with --gram, as CSV.
    Graph {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        gram: Option<Side>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Gram matrix against the pair-rank decomposition.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Top eigenvalues against the closed-form third-eigenvalue bound.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Audit e(X, Y) on random subsets against the mixing bounds.
    Mixing {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Audit I(P, H) on random families against the incidence bound.
    Incidence {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Use the measured third eigenvalue instead of the closed form.
        #[arg(long)]
        measured: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Count t-rich vertices for random sets meeting the size hypothesis.
    Rich {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        t: usize,
        /// Part holding S; rich vertices are counted in the other part.
        #[arg(long, value_enum, default_value_t = Side::B)]
        side: Side,
        #[arg(long, value_enum, default_value_t = HypothesisArg::Paper)]
        hypothesis: HypothesisArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run every check over the default grid, or one parameter set.
    Verify {
        #[arg(long, requires_all = ["d", "k", "h"])]
        q: Option<u64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per sampled check; 0 keeps only structural checks.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, ok, out)) => {
            let written = match out {
                Some(path) => std::fs::write(&path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

type Rendered = (String, bool, Option<PathBuf>);

fn field(cli: &Cli, q: u64) -> Result<FieldCtx> {
    FieldCtx::with_options(q, cli.allow_even)
}

fn build(cli: &Cli, g: &GraphArgs, budget: &Budget) -> Result<(FieldCtx, IncidenceGraph)> {
    g.params().validate()?;
    let ctx = field(cli, g.q)?;
    let graph = IncidenceGraph::build(&ctx, g.d, g.k, g.h, budget)?;
    Ok((ctx, graph))
}

fn spectrum_of(graph: &IncidenceGraph, tol: f64, budget: &Budget) -> Result<SpectrumReport<f64>> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameters(format!("tolerance {tol} must lie in (0, 1)")));
    }
    graph_spectrum(graph, tol, budget)
}

fn execute(cli: &Cli) -> Result<Rendered> {
    let budget = Budget::from_env()?;
    match &cli.command {
        Command::Count { graph, output } => {
            let p = graph.params();
            p.validate()?;
            field(cli, p.q)?;
            let table = CountTable::new(p.q, p.d as u64, p.k as u64, p.h as u64)?;
            let mut obj = to_object(&table);
            obj.insert("edges".into(), big_value(&table.edges()));
            obj.insert("double_count".into(), Value::from(if table.double_count_ok() { "ok" } else { "mismatch" }));
            let ok = table.double_count_ok();
            Ok((render(output.format, &[Value::Object(obj)], true), ok, output.out.clone()))
        }
        Command::Enumerate { q, d, k, format, out } => {
            let ctx = field(cli, *q)?;
            if k >= d {
                return Err(Error::InvalidDimension { d: *d, k: *k });
            }
            let n = count_x(*d as u64, *k as u64, *q);
            if n > budget.max_flats.into() {
                return Err(Error::TooLarge(format!("{n} flats exceed max_flats = {}", budget.max_flats)));
            }
            let flats = enumerate_flats(&ctx, *d, *k)?;
            let text = match format {
                ListFormat::Json => pretty(&flats.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
                ListFormat::Text => flats.iter().map(|f| format!("{f}\n")).collect(),
            };
            Ok((text, true, out.clone()))
        }
        Command::Graph { graph, gram, out } => {
            let (_, g) = build(cli, graph, &budget)?;
            let text = match gram {
                None => g.adjacency_csv(),
                Some(side) => gram_matrix(&g, (*side).into(), &budget)?.to_csv(),
            };
            Ok((text, true, out.clone()))
        }
        Command::Decompose { graph, output } => {
            let (ctx, g) = build(cli, graph, &budget)?;
            let rep = verify_decomposition(&ctx, &g, &budget)?;
            Ok((render(output.format, &[serde_json::to_value(&rep).unwrap()], true), rep.pass, output.out.clone()))
        }
        Command::Spectrum { graph, tol, output } => {
            let (_, g) = build(cli, graph, &budget)?;
            let rep = spectrum_of(&g, *tol, &budget)?;
            Ok((render(output.format, &[serde_json::to_value(&rep).unwrap()], true), rep.pass, output.out.clone()))
        }
        Command::Mixing { graph, seed, samples, tol, output } => {
            let (_, g) = build(cli, graph, &budget)?;
            let spec = spectrum_of(&g, *tol, &budget)?;
            let mut rng = SplitMix64::new(*seed);
            let (na, nb) = (g.size(Part::A), g.size(Part::B));
            let mut rows = Vec::with_capacity(*samples);
            let mut ok = true;
            for _ in 0..*samples {
                let xs = rng.sized_subset(na, 1, na);
                let ys = rng.sized_subset(nb, 1, nb);
                let rep = mixing_audit(&g, &spec, &xs, &ys)?;
                ok &= rep.pass;
                rows.push(serde_json::to_value(&rep).unwrap());
            }
            Ok((render(output.format, &rows, false), ok, output.out.clone()))
        }
        Command::Incidence { graph, seed, samples, measured, tol, output } => {
            let (_, g) = build(cli, graph, &budget)?;
            let source = if *measured {
                BoundSource::Measured(spectrum_of(&g, *tol, &budget)?.lambda3)
            } else {
                BoundSource::ClosedForm
            };
            let mut rng = SplitMix64::new(*seed);
            let (na, nb) = (g.size(Part::A), g.size(Part::B));
            let mut rows = Vec::with_capacity(*samples);
            let mut ok = true;
            for _ in 0..*samples {
                let ps = rng.sized_subset(na, 1, na);
                let hs = rng.sized_subset(nb, 1, nb);
                let rep = incidence_bound_check_indexed(&g, &ps, &hs, source, *tol)?;
                ok &= rep.pass || !rep.hypothesis_ok;
                rows.push(serde_json::to_value(&rep).unwrap());
            }
            Ok((render(output.format, &rows, false), ok, output.out.clone()))
        }
        Command::Rich { graph, t, side, hypothesis, seed, samples, tol, output } => {
            if *t == 0 {
                return Err(Error::InvalidParameters("t must be at least 1".into()));
            }
            let (_, g) = build(cli, graph, &budget)?;
            let spec = spectrum_of(&g, *tol, &budget)?;
            let s_part: Part = (*side).into();
            let size = g.size(s_part);
            let exact = exact_threshold(&g, s_part, *t);
            let lo = match hypothesis {
                HypothesisArg::Exact => exact,
                HypothesisArg::Paper => exact.max(paper_threshold(&g.params(), *t).try_into().unwrap_or(u64::MAX)),
            }
            .max(1);
            if lo > size as u64 {
                return Err(Error::InvalidParameters(format!("size hypothesis needs {lo} vertices but the part has {size}")));
            }
            let mut rng = SplitMix64::new(*seed);
            let mut rows = Vec::with_capacity(*samples);
            let mut ok = true;
            for _ in 0..*samples {
                let s = rng.sized_subset(size, lo as usize, size);
                let rep = match (hypothesis, s_part) {
                    (HypothesisArg::Exact, _) => lund_saraf_check(&g, &spec, s_part, &s, *t)?,
                    (HypothesisArg::Paper, Part::B) => thm2_check(&g, &spec, &s, *t)?,
                    (HypothesisArg::Paper, Part::A) => thm3_check(&g, &spec, &s, *t)?,
                };
                ok &= rep.ok();
                rows.push(serde_json::to_value(&rep).unwrap());
            }
            Ok((render(output.format, &rows, false), ok, output.out.clone()))
        }
        Command::Verify { q, d, k, h, seed, samples, tol, inject_fault, output } => {
            let mut cfg = VerifyConfig { seed: *seed, tol: *tol, budget, inject_fault: *inject_fault, ..VerifyConfig::default() };
            if let (Some(q), Some(d), Some(k), Some(h)) = (q, d, k, h) {
                cfg.grid = vec![Params::new(*q, *d, *k, *h)];
            }
            if let Some(n) = samples {
                cfg.samples = Samples::uniform(*n);
            }
            if !(*tol > 0.0 && *tol < 1.0) {
                return Err(Error::InvalidParameters(format!("tolerance {tol} must lie in (0, 1)")));
            }
            let report = run_verify(&cfg);
            let text = match output.format {
                Format::Json => pretty(&report),
                Format::Csv => report.to_csv(),
            };
            Ok((text, report.all_pass, output.out.clone()))
        }
    }
}

fn to_object<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).unwrap() {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    }
}

fn big_value(b: &num_bigint::BigUint) -> Value {
    match u64::try_from(b) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(b.to_string()),
    }
}

fn pretty<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

/// JSON, unwrapped to one object when `single`, or CSV with nested objects flattened to dotted column names.
fn render(format: Format, rows: &[Value], single: bool) -> String {
    match format {
        Format::Json if single && rows.len() == 1 => pretty(&rows[0]),
        Format::Json => pretty(rows),
        Format::Csv => {
            let flat: Vec<Vec<(String, String)>> = rows.iter().map(|r| flatten("", r)).collect();
            let mut out = String::new();
            if let Some(first) = flat.first() {
                out.push_str(&first.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            for row in &flat {
                out.push_str(&row.iter().map(|(_, v)| v.as_str()).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
    }
}

fn flatten(prefix: &str, v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Object(m) => m
            .iter()
            .flat_map(|(k, v)| {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v)
            })
            .collect(),
        Value::Null => vec![(prefix.to_string(), String::new())],
        Value::String(s) => vec![(prefix.to_string(), s.clone())],
        Value::Array(items) => {
            let joined = items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
            vec![(prefix.to_string(), joined)]
        }
        other => vec![(prefix.to_string(), other.to_string())],
    }
}
