//! Command-line front end for `neggamma-core`.
//!
//! Exit codes: 0 success, 1 usage, I/O, or malformed input, 2 infeasible or
//! out-of-domain parameters, 3 `verify` ran but a statistical gate failed.

pub mod args;
pub mod format;
pub mod plan_doc;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};

use clap::error::ErrorKind;
use clap::Parser;
use neggamma_core::density::{joint_density_r1s1, JointDensityParams};
use neggamma_core::planner::{feasibility, reference_table, solve_m1, solve_m2};
use neggamma_core::sampler::PairSampler;
use neggamma_core::stats::{ks_test, SummaryStats};
use neggamma_core::{BivariateUniformMethod, Method, Plan, RngStream, SolveMode, TargetSpec};
use serde::Serialize;

use args::{BivariateArg, Cli, Command, FormatArg, ModeArg, TargetArgs};
use plan_doc::PlanDocument;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_GATE_FAILED: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] neggamma_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("invalid plan document: {0}")]
    PlanDocument(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_infeasible() => EXIT_INFEASIBLE,
            _ => EXIT_ERROR,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.into())
        } else {
            CliError::PlanDocument(e.to_string())
        }
    }
}

/// Parses `argv` and runs the selected subcommand. Returns the exit code.
pub fn run<I, T>(argv: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    let mut out = BufWriter::new(stdout);
    let result = dispatch(cli.command, stdin, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<u8, CliError> {
    match cmd {
        Command::Plan(a) => {
            let method = method_of(a.method);
            let doc = solve(method, &a.target, a.rate)?;
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Command::Bounds(a) => {
            let report = feasibility(method_of(a.method), a.m, a.n)?;
            let json = BoundsJson {
                method: report.method.number(),
                m: report.m,
                n: report.n,
                rho_min: report.rho_min,
                rho_max: report.rho_max,
                notes: report.notes,
            };
            serde_json::to_writer_pretty(&mut *out, &json)?;
            writeln!(out)?;
        }
        Command::Table => {
            writeln!(out, "r,m,n,rho")?;
            for row in reference_table() {
                writeln!(out, "{},{},{},{:.4}", row.r, row.m, row.n, row.rho_display())?;
            }
        }
        Command::Sample(a) => {
            let doc = match (&a.plan_file, a.method) {
                (Some(path), method) => {
                    let doc = read_plan_document(path, stdin)?;
                    if method.is_some_and(|m| m != doc.method) {
                        return Err(CliError::Usage(format!(
                            "--method {} disagrees with the plan file's method {}",
                            method.unwrap_or_default(),
                            doc.method
                        )));
                    }
                    doc
                }
                (None, Some(m)) => solve(method_of(m), &a.target, 1.0)?,
                (None, None) => {
                    return Err(CliError::Usage("sample needs --method with --m/--n/--rho, or --plan-file".into()))
                }
            };
            let mut plan = doc.to_plan()?;
            if let Some(rate) = a.rate {
                plan = with_rate(plan, rate)?;
            }
            let stream = RngStream::new(a.stream.seed, a.stream.stream);
            let sampler = PairSampler::new(plan, bivariate_of(a.stream.bivariate), stream);
            if a.format == FormatArg::Csv {
                format::write_csv_header(out)?;
            }
            for pair in sampler.take(a.count as usize) {
                let pair = if doc.swapped { pair.swap() } else { pair };
                match a.format {
                    FormatArg::Csv => format::write_csv_pair(out, pair)?,
                    FormatArg::Jsonl => format::write_jsonl_pair(out, pair)?,
                }
            }
        }
        Command::Verify(a) => {
            let doc = solve(method_of(a.method), &a.target, a.rate)?;
            let plan = doc.to_plan()?;
            let report = verify(&doc, plan, a.count, &a.stream)?;
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
            return Ok(if report.pass { EXIT_OK } else { EXIT_GATE_FAILED });
        }
        Command::Density(a) => {
            let params = JointDensityParams::new(a.alpha0)?;
            let valid = a.step > 0.0 && a.y1_max >= 0.0 && a.y2_max >= 0.0;
            if !valid {
                return Err(neggamma_core::Error::Domain(format!(
                    "need step > 0 and non-negative maxima, got step = {}, y1-max = {}, y2-max = {}",
                    a.step, a.y1_max, a.y2_max
                ))
                .into());
            }
            let steps = |max: f64| (max / a.step + 1e-9).floor() as u64;
            writeln!(out, "y1,y2,f")?;
            for i in 0..=steps(a.y1_max) {
                let y1 = i as f64 * a.step;
                for j in 0..=steps(a.y2_max) {
                    let y2 = j as f64 * a.step;
                    let f = joint_density_r1s1(y1, y2, &params);
                    writeln!(out, "{},{},{}", format::sig17(y1), format::sig17(y2), format::sig17(f))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn method_of(m: u8) -> Method {
    if m == 1 {
        Method::M1
    } else {
        Method::M2
    }
}

fn bivariate_of(b: BivariateArg) -> BivariateUniformMethod {
    match b {
        BivariateArg::Inv => BivariateUniformMethod::ConditionalInversion,
        BivariateArg::Ar => BivariateUniformMethod::AcceptanceRejection,
    }
}

fn with_rate(plan: Plan, rate: f64) -> Result<Plan, CliError> {
    Ok(match plan {
        Plan::M1(p) => Plan::M1(p.with_rate(rate)?),
        Plan::M2(p) => Plan::M2(p.with_rate(rate)?),
    })
}

fn solve(method: Method, t: &TargetArgs, rate: f64) -> Result<PlanDocument, CliError> {
    let (Some(m), Some(n), Some(rho)) = (t.m, t.n, t.rho) else {
        return Err(CliError::Usage("--m, --n and --rho are all required".into()));
    };
    let spec = TargetSpec::new(m, n, rho)?;
    let plan = match method {
        Method::M1 => {
            let mode = match t.mode {
                ModeArg::Exact => SolveMode::Exact,
                ModeArg::Nearest => SolveMode::Nearest,
            };
            Plan::M1(solve_m1(&spec, mode)?.with_rate(rate)?)
        }
        Method::M2 => Plan::M2(solve_m2(&spec)?.with_rate(rate)?),
    };
    Ok(PlanDocument::new(&plan, rho, spec.swapped()))
}

fn read_plan_document(path: &std::path::Path, stdin: &mut dyn BufRead) -> Result<PlanDocument, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        BufReader::new(File::open(path)?).read_to_string(&mut text)?;
    }
    Ok(serde_json::from_str(&text)?)
}

#[derive(Serialize)]
struct BoundsJson {
    method: u8,
    m: f64,
    n: f64,
    rho_min: f64,
    rho_max: f64,
    notes: String,
}

#[derive(Debug, Serialize)]
pub struct Moments {
    pub mean1: f64,
    pub mean2: f64,
    pub var1: f64,
    pub var2: f64,
    pub corr: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct KsJson {
    pub d1: f64,
    pub d2: f64,
    pub critical: f64,
}

#[derive(Debug, Serialize)]
pub struct Gates {
    pub mean1: bool,
    pub mean2: bool,
    pub var1: bool,
    pub var2: bool,
    pub corr: bool,
    pub ks1: bool,
    pub ks2: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub plan: PlanDocument,
    pub count: u64,
    pub empirical: Moments,
    pub theoretical: Moments,
    pub ks: KsJson,
    pub gates: Gates,
    pub pass: bool,
}

/// Width of the verification gates, in standard errors.
const GATE_SIGMAS: f64 = 4.0;

/// Samples `count` pairs and gates them against the plan's closed forms.
///
/// Means: `4 sqrt(k / N) / rate`. Variances: `4 sqrt((2k^2 + 6k) / N) / rate^2`
/// (the large-sample spread of the unbiased variance of a `G(rate, k)`
/// sample). Correlation: `4 / sqrt(N)`. Both marginals: KS below the 1%
/// critical value.
pub fn verify(doc: &PlanDocument, plan: Plan, count: u64, s: &args::StreamArgs) -> Result<VerifyReport, CliError> {
    if count < 2 {
        return Err(CliError::Usage("verify needs --count >= 2".into()));
    }
    let stream = RngStream::new(s.seed, s.stream);
    let mut acc = SummaryStats::new();
    let mut ys1 = Vec::with_capacity(count as usize);
    let mut ys2 = Vec::with_capacity(count as usize);
    for p in PairSampler::new(plan, bivariate_of(s.bivariate), stream).take(count as usize) {
        let p = if doc.swapped { p.swap() } else { p };
        acc.accumulate(p);
        ys1.push(p.y1);
        ys2.push(p.y2);
    }
    let (g1, g2) = if doc.swapped {
        let (a, b) = plan.marginals();
        (b, a)
    } else {
        plan.marginals()
    };
    let d1 = ks_test(&mut ys1, |x| g1.cdf(x))?;
    let d2 = ks_test(&mut ys2, |x| g2.cdf(x))?;

    let n = count as f64;
    let mean_ok = |got: f64, k: f64, rate: f64| (got - k / rate).abs() <= GATE_SIGMAS * (k / n).sqrt() / rate;
    let var_ok = |got: f64, k: f64, rate: f64| {
        (got - k / (rate * rate)).abs() <= GATE_SIGMAS * ((2.0 * k * k + 6.0 * k) / n).sqrt() / (rate * rate)
    };
    let rho = plan.rho_theoretical();
    let gates = Gates {
        mean1: mean_ok(acc.mean1(), g1.shape, g1.rate),
        mean2: mean_ok(acc.mean2(), g2.shape, g2.rate),
        var1: var_ok(acc.var1(), g1.shape, g1.rate),
        var2: var_ok(acc.var2(), g2.shape, g2.rate),
        corr: acc.corr().is_some_and(|c| (c - rho).abs() <= GATE_SIGMAS / n.sqrt()),
        ks1: d1.passes_1pct(),
        ks2: d2.passes_1pct(),
    };
    let pass = gates.mean1 && gates.mean2 && gates.var1 && gates.var2 && gates.corr && gates.ks1 && gates.ks2;
    Ok(VerifyReport {
        plan: doc.clone(),
        count,
        empirical: Moments {
            mean1: acc.mean1(),
            mean2: acc.mean2(),
            var1: acc.var1(),
            var2: acc.var2(),
            corr: acc.corr(),
        },
        theoretical: Moments {
            mean1: g1.mean(),
            mean2: g2.mean(),
            var1: g1.variance(),
            var2: g2.variance(),
            corr: Some(rho),
        },
        ks: KsJson { d1: d1.statistic, d2: d2.statistic, critical: d1.critical_1pct },
        gates,
        pass,
    })
}
