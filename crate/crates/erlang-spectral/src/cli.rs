//! The `erlang-spectral` command line.
//!
//! Every command produces a list of flat records which are printed as text,
//! CSV (12 significant digits) or newline-delimited JSON (shortest
//! round-trip form).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::asymptotic::{
    gap_large_beta, gap_mid_beta, gap_near_beta_star, gap_neg_beta, gap_small_beta,
    regime_select, Regime, RegimeEstimate,
};
use crate::characteristic::{eigenvalues, spectral_gap_with, ModelParams};
use crate::discrete::{
    convergence_study, default_truncation, discrete_gap, generator_gap, DiscreteParams,
};
use crate::error::Error;
use crate::real::Precision;
use crate::tables;
use crate::transient::{laplace_density, spectral_density, steady_density, DensityQuery};
use crate::validate::{self, Check, Suite};

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: a validation check failed or a computation did not converge.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status: bad arguments.
pub const EXIT_USAGE: i32 = 2;
/// Exit status: reading or writing a file failed.
pub const EXIT_IO: i32 = 3;

/// Worker cap read at start-up.
pub const THREADS_VAR: &str = "ERLANG_SPECTRAL_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Quick,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "erlang-spectral", version, about = "Spectral gap of the Erlang A diffusion")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Defaults to text on a terminal and csv otherwise.
    #[arg(long, global = true)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Defaults to double with automatic escalation.
    #[arg(long, global = true)]
    pub precision: Option<PrecisionArg>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eta: f64,
    /// β/√η; alternative to --beta.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "beta")]
    pub gamma: Option<f64>,
}

impl PointArgs {
    fn params(&self) -> Result<ModelParams, Error> {
        let beta = match (self.beta, self.gamma) {
            (Some(b), _) => b,
            (None, Some(g)) => g * self.eta.sqrt(),
            (None, None) => return Err(Error::Domain("give --beta or --gamma".into())),
        };
        ModelParams::new(beta, self.eta)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral gap, relaxation time and the regime estimate.
    Gap(PointArgs),
    /// The first n eigenvalues.
    Eigs {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Every asymptotic formula defined at the point against the exact gap.
    Regimes(PointArgs),
    /// Recompute a published table (2 to 6).
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=6))]
        id: u8,
    },
    /// r(β, η) on a grid, with a per-row monotonicity flag.
    Surface {
        #[arg(long, default_value = "-2:3", value_parser = parse_range, allow_hyphen_values = true)]
        beta_range: (f64, f64),
        #[arg(long, default_value = "0.1:3", value_parser = parse_range, allow_hyphen_values = true)]
        eta_range: (f64, f64),
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// Transient density: spectral expansion at --t or Laplace transform at --theta.
    Density {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, conflicts_with = "theta")]
        t: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Number of expansion terms.
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// The exact M/M/s+M queue against its generator and the diffusion.
    Discrete {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long)]
        eta: f64,
        /// Comma-separated server counts for a convergence study at --beta.
        #[arg(long, value_delimiter = ',')]
        m_list: Vec<usize>,
    },
    /// Run a self-check suite, or check a surface file written earlier.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
        /// Surface CSV to re-read and check instead of running a suite.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

/// One output row; keys keep insertion order.
pub type Record = Vec<(&'static str, Value)>;

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

enum Failure {
    Usage(String),
    Compute(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn precision(p: Option<PrecisionArg>) -> Precision {
    match p {
        None => Precision::Auto,
        Some(PrecisionArg::Double) => Precision::Double,
        Some(PrecisionArg::Extended) => Precision::Extended,
    }
}

/// Significant-digit formatting that parses back to within half a unit in
/// the last place.
#[must_use]
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..15).contains(&e) {
        let decimals = (digits as i32 - 1 - e).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        match s.split_once('e') {
            Some((m, e)) if m.contains('.') => format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.')),
            _ => s,
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| format_sig(x, 12)),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn emit(records: &[Record], format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            for r in records {
                let obj: Map<String, Value> = r.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect();
                writeln!(out, "{}", Value::Object(obj))?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = records.first() {
                w.write_record(first.iter().map(|(k, _)| *k))?;
            }
            for r in records {
                w.write_record(r.iter().map(|(_, v)| cell(v)))?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            let Some(first) = records.first() else {
                return Ok(());
            };
            if records.len() == 1 {
                let width = first.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in first {
                    writeln!(out, "{k:width$}  {}", cell(v))?;
                }
            } else {
                let rows: Vec<Vec<String>> = records.iter().map(|r| r.iter().map(|(_, v)| cell(v)).collect()).collect();
                let widths: Vec<usize> = first
                    .iter()
                    .enumerate()
                    .map(|(i, (k, _))| rows.iter().map(|r| r[i].len()).chain([k.len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                writeln!(out, "{}", line(first.iter().map(|(k, _)| *k).collect()))?;
                for r in &rows {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
            }
        }
    }
    Ok(())
}

fn estimate_record(est: &RegimeEstimate, exact: f64, selected: bool) -> Record {
    vec![
        ("regime", text(est.regime.to_string())),
        ("estimate", num(est.value)),
        ("leading", num(est.leading)),
        ("exact", num(exact)),
        ("abs_diff", num((est.value - exact).abs())),
        ("selected", Value::Bool(selected)),
        ("note", text(est.validity_note.clone())),
    ]
}

fn cmd_gap(p: ModelParams, prec: Precision) -> Result<Vec<Record>, Failure> {
    let g = spectral_gap_with(p, prec)?;
    let est = regime_select(p);
    let mut r: Record = vec![
        ("beta", num(p.beta)),
        ("eta", num(p.eta)),
        ("r", num(g.r)),
        ("r_minus_eta", num(g.r_minus_eta)),
        ("tau", num(g.relaxation_time())),
        ("precision", text(format!("{:?}", g.precision).to_lowercase())),
    ];
    match est {
        Ok(e) => {
            r.push(("regime", text(e.regime.to_string())));
            r.push(("estimate", num(e.value)));
            r.push(("abs_deviation", num((e.value - g.r).abs())));
        }
        Err(e) => {
            r.push(("regime", text(format!("none: {e}"))));
            r.push(("estimate", Value::Null));
            r.push(("abs_deviation", Value::Null));
        }
    }
    Ok(vec![r])
}

fn cmd_eigs(p: ModelParams, n: usize) -> Result<Vec<Record>, Failure> {
    let set = eigenvalues(p, n)?;
    let mut out: Vec<Record> = set
        .lambdas
        .iter()
        .zip(&set.v_theta_derivs)
        .enumerate()
        .map(|(k, (l, d))| vec![("n", Value::from(k + 1)), ("lambda", num(*l)), ("dv_dtheta_scaled", num(*d))])
        .collect();
    if let Some(diag) = set.diagnostic {
        if out.len() < n {
            return Err(Failure::Compute(format!("found {} of {n} eigenvalues: {diag}", out.len())));
        }
        out.iter_mut().for_each(|r| r.push(("diagnostic", text(diag.clone()))));
    }
    Ok(out)
}

type Estimator = fn(ModelParams) -> crate::Result<RegimeEstimate>;

fn cmd_regimes(p: ModelParams, prec: Precision) -> Result<Vec<Record>, Failure> {
    let exact = spectral_gap_with(p, prec)?.r;
    let chosen = regime_select(p).ok().map(|e| e.regime);
    let tries: [(Regime, Estimator); 5] = [
        (Regime::NegBeta, gap_neg_beta),
        (Regime::SmallBeta, gap_small_beta),
        (Regime::MidBeta, gap_mid_beta),
        (Regime::NearBetaStar, gap_near_beta_star),
        (Regime::LargeBeta, gap_large_beta),
    ];
    let out: Vec<Record> = tries
        .iter()
        .filter_map(|(reg, f)| f(p).ok().map(|e| estimate_record(&e, exact, chosen == Some(*reg))))
        .collect();
    Ok(out)
}

fn cmd_table(id: u8) -> Result<(Vec<Record>, bool), Failure> {
    let rep = tables::reproduce(id)?;
    let pass = rep.pass();
    let rows = rep
        .cells
        .iter()
        .map(|c| {
            vec![
                ("table", Value::from(id)),
                ("column", text(c.column.clone())),
                ("eta", c.eta.map_or(Value::Null, num)),
                ("computed", num(c.computed)),
                ("published", text(c.published_text)),
                ("abs_diff", num(c.difference())),
                ("tol", num(c.tol)),
                ("pass", Value::Bool(c.pass)),
                ("deviation", text(c.deviation.unwrap_or(""))),
            ]
        })
        .collect();
    Ok((rows, pass))
}

/// Grid of r(β, η); `row_monotone` is the sign-law flag of the row at that η.
pub fn surface_grid(beta_range: (f64, f64), eta_range: (f64, f64), steps: usize) -> crate::Result<Vec<(f64, f64, f64, bool)>> {
    if eta_range.0 <= 0.0 {
        return Err(Error::Domain(format!("eta range must start above 0, got {}", eta_range.0)));
    }
    if steps < 2 {
        return Err(Error::Domain("need at least 2 steps".into()));
    }
    let at = |(a, b): (f64, f64), k: usize| a + (b - a) * k as f64 / (steps - 1) as f64;
    let pts: Vec<(f64, f64)> = (0..steps)
        .flat_map(|i| (0..steps).map(move |j| (i, j)))
        .map(|(i, j)| (at(eta_range, i), at(beta_range, j)))
        .collect();
    let rs: Vec<crate::Result<f64>> = pts
        .par_iter()
        .map(|&(e, b)| Ok(crate::spectral_gap(ModelParams::new(b, e)?)?.r))
        .collect();
    let rs: Vec<f64> = rs.into_iter().collect::<crate::Result<_>>()?;
    let mut out = Vec::with_capacity(pts.len());
    for (row, chunk) in rs.chunks(steps).enumerate() {
        let e = pts[row * steps].0;
        let ok = chunk.windows(2).all(|w| {
            let d = w[1] - w[0];
            if (e - 1.0).abs() < 1e-12 {
                d.abs() < 1e-9
            } else if e < 1.0 {
                d > 0.0
            } else {
                d < 0.0
            }
        });
        for (k, &r) in chunk.iter().enumerate() {
            out.push((pts[row * steps + k].1, e, r, ok));
        }
    }
    Ok(out)
}

fn cmd_surface(beta_range: (f64, f64), eta_range: (f64, f64), steps: usize) -> Result<Vec<Record>, Failure> {
    Ok(surface_grid(beta_range, eta_range, steps)?
        .into_iter()
        .map(|(b, e, r, ok)| {
            vec![("beta", num(b)), ("eta", num(e)), ("r", num(r)), ("row_monotone", Value::Bool(ok))]
        })
        .collect())
}

fn cmd_density(
    p: ModelParams,
    x: f64,
    x0: f64,
    t: Option<f64>,
    theta: Option<f64>,
    n: usize,
) -> Result<Vec<Record>, Failure> {
    let q = DensityQuery::new(x, x0, p)?;
    let mut r: Record = vec![("x", num(x)), ("x0", num(x0))];
    match (t, theta) {
        (Some(t), _) => {
            let d = spectral_density(q, t, n)?;
            r.push(("t", num(t)));
            r.push(("density", num(d.value)));
            r.push(("tail_bound", num(d.tail_bound)));
            r.push(("terms_used", Value::from(d.terms_used)));
            r.push(("warning", text(d.warning.unwrap_or_default())));
        }
        (None, Some(th)) => {
            r.push(("theta", num(th)));
            r.push(("laplace_density", num(laplace_density(q, th, false)?)));
        }
        (None, None) => return Err(Failure::Usage("give --t or --theta".into())),
    }
    r.push(("steady", num(steady_density(x, p))));
    Ok(vec![r])
}

fn cmd_discrete(
    m: Option<usize>,
    rho: Option<f64>,
    beta: Option<f64>,
    eta: f64,
    m_list: &[usize],
) -> Result<Vec<Record>, Failure> {
    if !m_list.is_empty() {
        let b = beta.ok_or_else(|| Failure::Usage("--m-list needs --beta".into()))?;
        return Ok(convergence_study(b, eta, m_list)?
            .into_iter()
            .map(|row| {
                vec![
                    ("m", Value::from(row.m)),
                    ("discrete", num(row.discrete)),
                    ("diffusion", num(row.diffusion)),
                    ("difference", num(row.difference)),
                ]
            })
            .collect());
    }
    let m = m.ok_or_else(|| Failure::Usage("give --m (or --m-list)".into()))?;
    let dp = match (rho, beta) {
        (Some(rho), _) => DiscreteParams::new(m, rho, eta)?,
        (None, Some(b)) => DiscreteParams::halfin_whitt(m, b, eta)?,
        (None, None) => return Err(Failure::Usage("give --rho or --beta".into())),
    };
    let d = discrete_gap(dp)?;
    let g = generator_gap(dp, default_truncation(dp))?;
    let mut r: Record = vec![
        ("m", Value::from(m)),
        ("rho", num(dp.rho)),
        ("eta", num(eta)),
        ("discrete_gap", num(d)),
        ("generator_gap", num(g.gap)),
        ("truncation", Value::from(g.truncation)),
    ];
    if let Some(b) = beta {
        r.push(("diffusion_gap", num(crate::spectral_gap(ModelParams::new(b, eta)?)?.r)));
    }
    Ok(vec![r])
}

fn check_record(c: &Check) -> Record {
    vec![
        ("check", text(c.check.clone())),
        ("value", num(c.value)),
        ("expected", num(c.expected)),
        ("tol", num(c.tol)),
        ("pass", Value::Bool(c.pass)),
        ("known_deviation", text(c.known_deviation.clone().unwrap_or_default())),
    ]
}

/// Re-reads a surface CSV and checks its sign-law flags and the η = 1 row.
pub fn check_surface_file(path: &Path) -> io::Result<Vec<Check>> {
    let mut rd = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let mut checks = Vec::new();
    let mut rows = 0usize;
    let mut bad_rows = 0usize;
    for rec in rd.records() {
        let rec = rec.map_err(io::Error::other)?;
        let field = |i: usize| -> io::Result<f64> {
            rec.get(i)
                .ok_or_else(|| io::Error::other("short row"))?
                .parse::<f64>()
                .map_err(io::Error::other)
        };
        let (b, e, r) = (field(0)?, field(1)?, field(2)?);
        let flag = rec.get(3).map(str::trim) == Some("true");
        rows += 1;
        if !flag {
            bad_rows += 1;
        }
        if (e - 1.0).abs() < 1e-12 {
            checks.push(Check::abs(format!("surface r({b}, 1) = 1"), r, 1.0, 1e-9));
        }
    }
    checks.insert(0, Check::at_most(format!("surface points failing the sign law (of {rows})"), bad_rows as f64, 0.0));
    Ok(checks)
}

fn cmd_validate(suite: SuiteArg, input: Option<&Path>) -> Result<(Vec<Record>, bool), Failure> {
    let checks = match input {
        Some(p) => check_surface_file(p)?,
        None => validate::run(match suite {
            SuiteArg::Quick => Suite::Quick,
            SuiteArg::Full => Suite::Full,
        }),
    };
    Ok((checks.iter().map(check_record).collect(), validate::all_pass(&checks)))
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a pool may already exist when embedded; that is fine
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn dispatch(cfg: &RunConfig) -> Result<(Vec<Record>, bool), Failure> {
    let prec = precision(cfg.output.precision);
    let ok = |v: Vec<Record>| Ok((v, true));
    match &cfg.command {
        Command::Gap(p) => ok(cmd_gap(p.params()?, prec)?),
        Command::Eigs { point, n } => ok(cmd_eigs(point.params()?, *n)?),
        Command::Regimes(p) => ok(cmd_regimes(p.params()?, prec)?),
        Command::Table { id } => cmd_table(*id),
        Command::Surface { beta_range, eta_range, steps } => ok(cmd_surface(*beta_range, *eta_range, *steps)?),
        Command::Density { point, x, x0, t, theta, n } => ok(cmd_density(point.params()?, *x, *x0, *t, *theta, *n)?),
        Command::Discrete { m, rho, beta, eta, m_list } => ok(cmd_discrete(*m, *rho, *beta, *eta, m_list)?),
        Command::Validate { suite, input } => cmd_validate(*suite, input.as_deref()),
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let result = dispatch(&cfg);
    let (rows, pass) = match result {
        Ok(v) => v,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Compute(m) => (EXIT_FAILURE, m),
                Failure::Io(m) => (EXIT_IO, m),
            };
            eprintln!("erlang-spectral: {msg}");
            return code;
        }
    };
    let to_file = cfg.output.out.is_some();
    let format = cfg.output.format.unwrap_or(if !to_file && io::stdout().is_terminal() {
        OutputFormat::Text
    } else {
        OutputFormat::Csv
    });
    let written = match &cfg.output.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = io::BufWriter::new(f);
            emit(&rows, format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&rows, format, &mut lock).and_then(|()| lock.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("erlang-spectral: {e}");
        return EXIT_IO;
    }
    if pass {
        EXIT_OK
    } else {
        eprintln!("erlang-spectral: one or more checks failed");
        EXIT_FAILURE
    }
}

/// Reads a CSV written by this tool back into header and rows of strings.
pub fn read_csv(reader: impl BufRead) -> io::Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rd = csv::Reader::from_reader(reader);
    let head = rd.headers().map_err(io::Error::other)?.iter().map(str::to_string).collect();
    let rows = rd
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()).map_err(io::Error::other))
        .collect::<io::Result<_>>()?;
    Ok((head, rows))
}
