//! Problem files, JSON reports and the `cfrob` command line.
//!
//! A problem file is a list of `key = value` lines:
//!
//! ```text
//! # Euler-type equation
//! alpha = 0.5
//! x0 = 0
//! p = [-0.25]
//! q = [0]
//! terms = 30        # optional
//! radius_hint = 2   # optional
//! ```

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{classify_point, to_monic};
use crate::error::{Error, Result};
use crate::frobenius::{indicial, majorant, solve, FrobeniusResult, ProblemSpec, DEFAULT_TERMS};
use crate::series::{FracSeries, LogSolution};
use crate::verify::{
    cancellation_error, radius_estimate, residual, substitution_oracle, wronskian_abel,
    RadiusEstimate,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Verification thresholds used by `cfrob verify`.
pub const VERIFY_CANCELLATION_TOL: f64 = 1e-12;
pub const VERIFY_ABEL_TOL: f64 = 1e-8;
pub const VERIFY_ORACLE_TOL: f64 = 1e-10;
/// Abel comparisons only use points where the truncation tail is below this.
pub const VERIFY_ABEL_TAIL: f64 = 1e-12;

const KEYS: [&str; 6] = ["alpha", "x0", "p", "q", "terms", "radius_hint"];

/// A parsed problem file and any warnings raised while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub warnings: Vec<String>,
}

/// Parses a problem file; see the module docs for the grammar.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    parse_problem_file(text).map(|f| f.spec)
}

pub fn parse_problem_file(text: &str) -> Result<ProblemFile> {
    let mut seen: [Option<(usize, &str)>; 6] = [None; 6];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, found `{body}`"),
        })?;
        let key = key.trim();
        let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| Error::Parse {
            line,
            msg: format!("unknown key `{key}`"),
        })?;
        if let Some((first, _)) = seen[slot] {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key `{key}` (first set on line {first})"),
            });
        }
        seen[slot] = Some((line, value.trim()));
    }

    let required = |i: usize| {
        seen[i].ok_or_else(|| Error::InvalidProblem(format!("missing key `{}`", KEYS[i])))
    };
    let (l, v) = required(0)?;
    let alpha = parse_real(l, v)?;
    let (l, v) = required(1)?;
    let x0 = parse_real(l, v)?;

    let mut warnings = Vec::new();
    let mut lists = Vec::with_capacity(2);
    for i in [2, 3] {
        let (l, v) = required(i)?;
        let list = parse_list(l, v)?;
        if list.is_empty() {
            warnings.push(format!("line {l}: `{}` is empty; treated as all-zero", KEYS[i]));
        }
        lists.push(list);
    }
    let q = lists.pop().unwrap_or_default();
    let p = lists.pop().unwrap_or_default();

    let mut spec = ProblemSpec::new(alpha, x0, p, q)?;
    if let Some((l, v)) = seen[4] {
        let terms = v.parse::<usize>().map_err(|_| Error::Parse {
            line: l,
            msg: format!("`terms` must be a non-negative integer, found `{v}`"),
        })?;
        spec = spec.with_terms(terms)?;
    }
    if let Some((l, v)) = seen[5] {
        spec = spec.with_radius_hint(parse_real(l, v)?)?;
    }
    Ok(ProblemFile { spec, warnings })
}

fn parse_real(line: usize, v: &str) -> Result<f64> {
    v.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a number, found `{v}`"),
    })
}

fn parse_list(line: usize, v: &str) -> Result<Vec<f64>> {
    let inner = v
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected a bracketed list, found `{v}`"),
        })?
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|item| parse_real(line, item.trim())).collect()
}

/// `{base, coeffs}` of one series in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesReport {
    pub base: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecondSolutionReport {
    pub log_coeff: f64,
    pub log_part: SeriesReport,
    pub power_part: SeriesReport,
}

/// JSON form of a solved problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionReport {
    pub alpha: f64,
    pub x0: f64,
    pub case: String,
    pub s1: f64,
    pub s2: f64,
    pub y1: SeriesReport,
    pub y2: SecondSolutionReport,
}

impl SeriesReport {
    fn of(s: &FracSeries) -> Self {
        Self {
            base: s.base(),
            coeffs: s.coeffs().to_vec(),
        }
    }

    fn series(&self, x0: f64, alpha: f64) -> Result<FracSeries> {
        if self.coeffs.is_empty() {
            return Ok(FracSeries::empty(x0, alpha, self.base));
        }
        FracSeries::new(x0, alpha, self.base, self.coeffs.clone())
    }
}

impl SolutionReport {
    pub fn from_result(prob: &ProblemSpec, res: &FrobeniusResult) -> Self {
        Self {
            alpha: prob.alpha,
            x0: prob.x0,
            case: res.roots.case.to_string(),
            s1: res.roots.s1,
            s2: res.roots.s2,
            y1: SeriesReport::of(&res.y1),
            y2: SecondSolutionReport {
                log_coeff: res.y2.log_coeff,
                log_part: SeriesReport::of(&res.y2.log_part),
                power_part: SeriesReport::of(&res.y2.power_part),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    /// The two solutions, rebuilt as series objects.
    pub fn solutions(&self) -> Result<(LogSolution, LogSolution)> {
        let (x0, a) = (self.x0, self.alpha);
        let y1 = LogSolution::plain(self.y1.series(x0, a)?);
        let y2 = LogSolution::new(
            self.y2.log_coeff,
            self.y2.log_part.series(x0, a)?,
            self.y2.power_part.series(x0, a)?,
        )?;
        Ok((y1, y2))
    }
}

#[derive(Debug, Parser)]
#[command(name = "cfrob", version, about = "Fractional Frobenius series for conformable ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify x0 as alpha-ordinary, regular or essential alpha-singular.
    Classify { file: PathBuf },
    /// Indicial roots, root case and leading coefficients of both solutions.
    Solve {
        file: PathBuf,
        #[arg(long)]
        terms: Option<usize>,
        /// Also write the full JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// CSV of one solution over N equally spaced points in (A, B].
    Eval {
        /// Problem file or JSON report from `solve --json`.
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        solution: u8,
        /// A:B:N
        #[arg(long)]
        range: String,
    },
    /// Residuals, Wronskian/Abel and oracle checks; exit 4 on failure.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
    /// CSV of the majorant bounds C_k at radius R.
    Majorant {
        file: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        terms: Option<usize>,
    },
}

/// Runs the command line given by `args` (program name first) and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ComplexRoots(_) => EXIT_UNSUPPORTED,
                _ => EXIT_INVALID,
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult = std::result::Result<i32, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path, err: &mut dyn Write) -> std::result::Result<ProblemSpec, Failure> {
    let file = parse_problem_file(&read(path)?)?;
    for w in &file.warnings {
        writeln!(err, "warning: {w}")?;
    }
    Ok(file.spec)
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Classify { file } => {
            let prob = load_problem(&file, err)?;
            let (p, q) = to_monic(&prob);
            writeln!(out, "{}", classify_point(&p, &q)?)?;
            Ok(EXIT_OK)
        }
        Command::Solve { file, terms, json } => {
            let mut prob = load_problem(&file, err)?;
            if let Some(k) = terms {
                prob = prob.with_terms(k)?;
            }
            let res = solve(&prob)?;
            write_solve(out, &res)?;
            if let Some(path) = json {
                let report = SolutionReport::from_result(&prob, &res);
                std::fs::write(&path, report.to_json())
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(EXIT_OK)
        }
        Command::Eval {
            file,
            solution,
            range,
        } => {
            let text = read(&file)?;
            let (x0, y1, y2) = if text.trim_start().starts_with('{') {
                let report = SolutionReport::from_json(&text)?;
                let (y1, y2) = report.solutions()?;
                (report.x0, y1, y2)
            } else {
                let prob = load_problem(&file, err)?;
                let res = solve(&prob)?;
                (prob.x0, LogSolution::plain(res.y1), res.y2)
            };
            let (a, b, n) = parse_range(&range)?;
            if a <= x0 {
                return Err(Error::Domain { x: a, x0 }.into());
            }
            let y = if solution == 1 { &y1 } else { &y2 };
            writeln!(out, "x,y")?;
            for i in 1..=n {
                let x = a + (b - a) * i as f64 / n as f64;
                writeln!(out, "{},{}", fmt6(x), fmt6(y.eval(x)?))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { file, points } => {
            let prob = load_problem(&file, err)?;
            verify_command(&prob, points, out)
        }
        Command::Majorant { file, r, terms } => {
            let prob = load_problem(&file, err)?;
            let order = terms.unwrap_or(prob.terms);
            let roots = indicial(prob.p_coeff(0), prob.q_coeff(0), prob.alpha)?;
            let trace = majorant(&prob, &roots, r, order)?;
            let ratios = trace.ratios();
            writeln!(out, "k,abs_ck,Ck,ratio")?;
            for k in 0..trace.bounds.len() {
                let ratio = match k.checked_sub(1).and_then(|i| ratios[i]) {
                    Some(v) => fmt17(v),
                    None => String::new(),
                };
                writeln!(
                    out,
                    "{k},{},{},{ratio}",
                    fmt17(trace.abs_c[k]),
                    fmt17(trace.bounds[k])
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let bad = |msg: &str| Error::InvalidProblem(format!("--range `{s}`: {msg}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(bad("expected A:B:N"));
    };
    let a: f64 = a.trim().parse().map_err(|_| bad("A is not a number"))?;
    let b: f64 = b.trim().parse().map_err(|_| bad("B is not a number"))?;
    let n: usize = n.trim().parse().map_err(|_| bad("N is not a count"))?;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(bad("need finite A < B"));
    }
    if n == 0 {
        return Err(bad("N must be at least 1"));
    }
    Ok((a, b, n))
}

/// 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

/// 6 significant digits.
pub fn fmt6(v: f64) -> String {
    format!("{:.5e}", v + 0.0)
}

fn write_solve(out: &mut dyn Write, res: &FrobeniusResult) -> std::io::Result<()> {
    let shown = 10;
    writeln!(out, "case: {}", res.roots.case)?;
    writeln!(out, "s1: {}", fmt17(res.roots.s1))?;
    writeln!(out, "s2: {}", fmt17(res.roots.s2))?;
    writeln!(out, "y1: base {}", fmt17(res.y1.base()))?;
    for (k, c) in res.y1.coeffs().iter().take(shown).enumerate() {
        writeln!(out, "  c[{k}] = {}", fmt17(*c))?;
    }
    writeln!(out, "y2: log_coeff {}", fmt17(res.y2.log_coeff))?;
    writeln!(out, "y2 power part: base {}", fmt17(res.y2.power_part.base()))?;
    for (k, c) in res.y2.power_part.coeffs().iter().take(shown).enumerate() {
        writeln!(out, "  b[{k}] = {}", fmt17(*c))?;
    }
    Ok(())
}

/// Sample offsets for `verify`: `n` equally spaced points in
/// `(0, min(R, 1) / 2]`, with `R` the known or estimated radius.
fn verify_points(prob: &ProblemSpec, y1: &FracSeries, n: usize) -> Vec<f64> {
    let est = match radius_estimate(y1) {
        RadiusEstimate::Finite(r) => r,
        RadiusEstimate::Unbounded { .. } => f64::INFINITY,
    };
    let r = prob.radius_hint.unwrap_or(f64::INFINITY).min(est).min(1.0);
    (1..=n)
        .map(|i| prob.x0 + 0.5 * r * i as f64 / n as f64)
        .collect()
}

fn verify_command(prob: &ProblemSpec, points: usize, out: &mut dyn Write) -> CliResult {
    if points < 2 {
        return Err(Error::InvalidProblem("--points must be at least 2".into()).into());
    }
    let res = solve(prob)?;
    let y1 = LogSolution::plain(res.y1.clone());
    let xs = verify_points(prob, &res.y1, points);
    let mut ok = true;
    let mut check = |out: &mut dyn Write, name: &str, value: f64, pass: bool| {
        ok &= pass;
        writeln!(
            out,
            "{name}: {} {}",
            fmt17(value),
            if pass { "PASS" } else { "FAIL" }
        )
    };

    writeln!(out, "case: {}", res.roots.case)?;
    writeln!(out, "log_coeff: {}", fmt17(res.y2.log_coeff))?;

    let r1 = residual(prob, &y1, &xs)?;
    let r2 = residual(prob, &res.y2, &xs)?;
    check(out, "residual y1 (max)", r1.max_residual(), r1.pass)?;
    check(out, "residual y2 (max)", r2.max_residual(), r2.pass)?;

    let c1 = cancellation_error(prob, &y1)?;
    let c2 = cancellation_error(prob, &res.y2)?;
    check(out, "cancellation y1", c1, c1 <= VERIFY_CANCELLATION_TOL)?;
    check(out, "cancellation y2", c2, c2 <= VERIFY_CANCELLATION_TOL)?;

    let clean: Vec<f64> = xs
        .iter()
        .enumerate()
        .filter(|&(i, _)| r1.tail_bounds[i].max(r2.tail_bounds[i]) < VERIFY_ABEL_TAIL)
        .map(|(_, &x)| x)
        .collect();
    if clean.len() >= 2 {
        let dev = wronskian_abel(prob, &y1, &res.y2, clean[0], &clean[1..])?;
        check(out, "wronskian/abel deviation", dev, dev <= VERIFY_ABEL_TOL)?;
    } else {
        writeln!(out, "wronskian/abel deviation: skipped (tail too large)")?;
    }

    let oracle = substitution_oracle(prob, prob.terms.min(DEFAULT_TERMS))?;
    let dev = oracle.max_deviation();
    check(out, "oracle deviation", dev, dev <= VERIFY_ORACLE_TOL)?;

    writeln!(out, "verdict: {}", if ok { "PASS" } else { "FAIL" })?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
