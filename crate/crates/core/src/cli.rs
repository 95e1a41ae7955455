//! The `binrec` command line: argument parsing, the per-command pipelines and
//! table / CSV / JSON rendering.
//!
//! [`run`] is the whole program; the binary only forwards `argv` and the exit
//! code. Exit codes are `0` when every check passes, `1` when a check fails and
//! `2` for usage errors (including `x = 0` and out-of-range parameters).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinatorics::{
    count_arrays, decomposition_summary, enumerate_signatures, hypercube_decomposition,
    monotone_path_count, nondecreasing_pattern_path_bijection, primitive_counts_by_enumeration,
    primitive_counts_dp, reflection_check, Caps, Signature,
};
use crate::dynamics::{finite_difference_check, s_iter, shape_scan_range, ShapeReport, ShapeRule};
use crate::exact::{
    factorial, format_rational, int, parse_rational, rational, to_f64, BigRational,
};
use crate::recursion::{a_sequence, basic_format, binomial_format, catalan, nzc_sequence};
use crate::spectral::{
    angle_trace, dominant_moduli, eigen_residual, eigenpairs, embed_f64, growth_rate, hs_norm,
    log_growth_points, norm_ratio_trace, omega_measure, tan_regime_check,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "binrec",
    version,
    about = "Exact and spectral experiments on the binomial-sum recursion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a_1..a_n at a rational x
    Compute(Common),
    /// Basic and binomial formats of a_n
    Formats(Common),
    /// Enumerate patterns, arrays and paths for one n
    Enumerate(Common),
    /// Run the invariant battery
    Verify(VerifyArgs),
    /// Shape scan of S_n for x in (-1, 0)
    Shapes(Common),
    /// Projection angles onto the dominant eigenspace
    Spectral(Common),
    /// Fit the decay rate of |a_n| / (n-1)!
    Growth(Common),
    /// Step-function values or spectral sweeps for plotting
    Plotdata(PlotArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Parameter as p/q, an integer or a decimal
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Index N or range LO:HI
    #[arg(long)]
    n: Option<String>,
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Print floats instead of exact rationals
    #[arg(long)]
    float: bool,
    /// Enumeration cap (overrides BINREC_CAP)
    #[arg(long)]
    cap: Option<usize>,
    /// Seed for randomized sweeps
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Restrict to these check groups
    #[arg(long, value_enum, value_delimiter = ',')]
    only: Vec<Group>,
}

#[derive(Args, Debug, Clone)]
struct PlotArgs {
    #[command(flatten)]
    common: Common,
    /// Emit a spectral sweep over LO:HI instead of one step function
    #[arg(long)]
    growth: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Group {
    Formats,
    Catalan,
    Nzc,
    Hypercubes,
    Paths,
    Dynamics,
    Shapes,
    OperatorGap,
    Eigen,
    Spectral,
}

impl Group {
    const DEFAULT: [Group; 9] = [
        Group::Formats,
        Group::Catalan,
        Group::Nzc,
        Group::Hypercubes,
        Group::Paths,
        Group::Dynamics,
        Group::Shapes,
        Group::OperatorGap,
        Group::Eigen,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }
}

/// Everything a command produces before rendering.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    fn columns(&mut self, cols: &[&str]) {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().map(|c| json!(c)))
                        .collect(),
                )
            })
            .collect();
        json!({
            "command": self.command,
            "params": self.params,
            "checks": self.checks,
            "columns": self.columns,
            "rows": rows,
        })
    }

    fn render(&self, format: OutputFormat, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            OutputFormat::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(out);
                if self.columns.is_empty() {
                    w.write_record(["name", "status", "detail"])?;
                    for c in &self.checks {
                        let status = if c.status == Status::Pass {
                            "pass"
                        } else {
                            "fail"
                        };
                        w.write_record([c.name.as_str(), status, c.detail.as_str()])?;
                    }
                } else {
                    w.write_record(&self.columns)?;
                    for r in &self.rows {
                        w.write_record(r)?;
                    }
                }
                w.flush()
            }
            OutputFormat::Table => {
                if !self.columns.is_empty() {
                    let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
                    for r in &self.rows {
                        for (w, c) in widths.iter_mut().zip(r) {
                            *w = (*w).max(c.len());
                        }
                    }
                    let line = |cells: &[String]| {
                        let parts: Vec<String> = cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:>w$}"))
                            .collect();
                        parts.join("  ")
                    };
                    writeln!(out, "{}", line(&self.columns))?;
                    for r in &self.rows {
                        writeln!(out, "{}", line(r))?;
                    }
                }
                for c in &self.checks {
                    let tag = if c.status == Status::Pass {
                        "PASS"
                    } else {
                        "FAIL"
                    };
                    writeln!(out, "{tag} {}: {}", c.name, c.detail)?;
                }
                if !self.checks.is_empty() {
                    let failed = self
                        .checks
                        .iter()
                        .filter(|c| c.status == Status::Fail)
                        .count();
                    writeln!(out, "{} checks, {} failed", self.checks.len(), failed)?;
                }
                Ok(())
            }
        }
    }
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<Report, Usage>;

/// Parses `args` (program name first), runs the command and writes its report.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (format, result) = match &cli.command {
        Command::Compute(c) => (c.output, compute(c)),
        Command::Formats(c) => (c.output, formats(c)),
        Command::Enumerate(c) => (c.output, enumerate(c)),
        Command::Verify(v) => (v.common.output, verify(v)),
        Command::Shapes(c) => (c.output, shapes(c)),
        Command::Spectral(c) => (c.output, spectral(c)),
        Command::Growth(c) => (c.output, growth(c)),
        Command::Plotdata(p) => (p.common.output.or(Some(OutputFormat::Csv)), plotdata(p)),
    };
    match result {
        Ok(report) => {
            if report
                .render(format.unwrap_or(OutputFormat::Table), out)
                .is_err()
            {
                return EXIT_USAGE;
            }
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            }
        }
        Err(Usage(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn parse_x(c: &Common, default: BigRational) -> Result<BigRational, Usage> {
    let x = match &c.x {
        Some(text) => parse_rational(text)?,
        None => default,
    };
    if x.is_zero() {
        return Err(Usage("x must be nonzero".into()));
    }
    Ok(x)
}

fn parse_x_in_contract(c: &Common, default: BigRational) -> Result<BigRational, Usage> {
    let x = parse_x(c, default)?;
    if !x.is_negative() || x <= -BigRational::one() {
        return Err(Usage(format!(
            "x must lie in (-1, 0), got {}",
            format_rational(&x)
        )));
    }
    Ok(x)
}

/// `N` or `LO:HI`; a bare `N` yields `(None, N)`.
fn parse_n_spec(text: &str) -> Result<(Option<usize>, usize), Usage> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Usage(format!("invalid index `{s}`")))
    };
    match text.split_once(':') {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(Usage(format!("empty range {lo}:{hi}")));
            }
            Ok((Some(lo), hi))
        }
        None => Ok((None, num(text)?)),
    }
}

fn n_range(
    c: &Common,
    default: (usize, usize),
    single_lo: Option<usize>,
) -> Result<(usize, usize), Usage> {
    let range = match &c.n {
        None => default,
        Some(text) => match parse_n_spec(text)? {
            (Some(lo), hi) => (lo, hi),
            (None, hi) => (single_lo.unwrap_or(hi), hi),
        },
    };
    if range.0 == 0 {
        return Err(Usage("indices start at 1".into()));
    }
    Ok(range)
}

fn caps(c: &Common) -> Caps {
    let mut caps = Caps::from_env();
    if let Some(cap) = c.cap {
        caps = Caps {
            patterns: cap,
            paths: cap,
        };
    }
    caps
}

fn common_params(
    report: &mut Report,
    c: &Common,
    x: Option<&BigRational>,
    range: Option<(usize, usize)>,
) {
    if let Some(x) = x {
        report.param("x", format_rational(x));
    }
    if let Some((lo, hi)) = range {
        report.param("n_lo", lo);
        report.param("n_hi", hi);
    }
    report.param("float", c.float);
    report.param("seed", c.seed);
}

fn compute(c: &Common) -> CmdResult {
    let x = parse_x(c, int(1))?;
    let (lo, hi) = n_range(c, (1, 10), Some(1))?;
    let mut report = Report::new("compute");
    common_params(&mut report, c, Some(&x), Some((lo, hi)));
    let a = a_sequence(&x, hi)?;
    if c.float {
        report.columns(&["n", "a_n"]);
    } else {
        report.columns(&["n", "a_n_num", "a_n_den"]);
    }
    for n in lo..=hi {
        let v = &a[n - 1];
        if c.float {
            report.row(vec![n.to_string(), to_f64(v).to_string()]);
        } else {
            report.row(vec![
                n.to_string(),
                v.numer().to_string(),
                v.denom().to_string(),
            ]);
        }
    }
    if hi >= 2 {
        let agree = s_iter(&x)?.take(hi - 1).all(|s| s.total() == a[s.n() - 1]);
        report.check(
            "s_pipeline_agreement",
            agree,
            format!("sum_j S_n(j) = a_n for 2 <= n <= {hi}"),
        );
    }
    if x == int(-1) {
        let bad: Vec<usize> = (1..=hi)
            .filter(|&n| a[n - 1] != signed_catalan(n))
            .collect();
        report.check(
            "catalan_alternating",
            bad.is_empty(),
            mismatch_detail("a_n(-1) = (-1)^n C_n", &bad),
        );
    }
    Ok(report)
}

fn signed_catalan(n: usize) -> BigRational {
    let c = BigRational::from_integer(catalan(n).expect("n >= 1"));
    if n.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

fn mismatch_detail(what: &str, bad: &[usize]) -> String {
    if bad.is_empty() {
        what.to_string()
    } else {
        let shown: Vec<String> = bad.iter().take(8).map(|n| n.to_string()).collect();
        format!(
            "{what} fails at n = {}{}",
            shown.join(","),
            if bad.len() > 8 { ",..." } else { "" }
        )
    }
}

fn formats(c: &Common) -> CmdResult {
    let (lo, hi) = n_range(c, (6, 6), None)?;
    let mut report = Report::new("formats");
    common_params(&mut report, c, None, Some((lo, hi)));
    report.columns(&["n", "r", "xi", "prim"]);
    let mut expansion_bad = Vec::new();
    let mut total_bad = Vec::new();
    let mut dp_bad = Vec::new();
    for n in lo..=hi {
        let basic = basic_format(n)?;
        let binom = binomial_format(n)?;
        for r in 1..=n {
            let xi = basic.xi.get(&r).cloned().unwrap_or_default();
            let p = binom.prim.get(&r).cloned().unwrap_or_default();
            if !xi.is_zero() || !p.is_zero() {
                report.row(vec![
                    n.to_string(),
                    r.to_string(),
                    xi.to_string(),
                    p.to_string(),
                ]);
            }
        }
        if binom.to_polynomial() != basic.to_polynomial() {
            expansion_bad.push(n);
        }
        if binom.total() != factorial(n - 1) {
            total_bad.push(n);
        }
        if primitive_counts_dp(n) != binom.prim {
            dp_bad.push(n);
        }
    }
    report.check(
        "binomial_expansion",
        expansion_bad.is_empty(),
        mismatch_detail(
            "binomial format expands to the basic format",
            &expansion_bad,
        ),
    );
    report.check(
        "primitive_total",
        total_bad.is_empty(),
        mismatch_detail("sum_r P(n,r) = (n-1)!", &total_bad),
    );
    report.check(
        "dp_agreement",
        dp_bad.is_empty(),
        mismatch_detail("descent DP equals back-substitution", &dp_bad),
    );
    Ok(report)
}

fn enumerate(c: &Common) -> CmdResult {
    let (_, n) = n_range(c, (6, 6), None)?;
    let caps = caps(c);
    let mut report = Report::new("enumerate");
    common_params(&mut report, c, None, Some((n, n)));
    report.param("pattern_cap", caps.patterns);
    report.param("path_cap", caps.paths);
    let summary = decomposition_summary(n, &caps)?;
    report.columns(&["dimension", "components", "arrays", "r"]);
    for (&l, &count) in &summary.by_dimension {
        report.row(vec![
            l.to_string(),
            count.to_string(),
            (count << l).to_string(),
            (n - l).to_string(),
        ]);
    }
    report.check(
        "components_factorial",
        BigInt::from(summary.components) == factorial(n - 1),
        format!(
            "{} components, (n-1)! = {}",
            summary.components,
            factorial(n - 1)
        ),
    );
    let by_signature: BigInt = enumerate_signatures(n)?.iter().map(count_arrays).sum();
    report.check(
        "arrays_by_signature",
        by_signature == BigInt::from(summary.arrays),
        format!(
            "{} arrays in components, {by_signature} by signature",
            summary.arrays
        ),
    );
    let signatures = enumerate_signatures(n)?.len();
    let nzc = nzc_sequence(n)?;
    report.check(
        "signatures_nzc",
        BigInt::from(signatures) == nzc[n - 1],
        format!("{signatures} signatures"),
    );
    let dp = primitive_counts_dp(n);
    report.check(
        "three_way_oracle",
        dp == summary.primitive_counts() && dp == binomial_format(n)?.prim,
        "enumeration, descent DP and back-substitution agree",
    );
    if n <= 8 {
        let bad: Vec<String> = hypercube_decomposition(n, &caps)?
            .iter()
            .filter_map(|h| h.verify().err().map(|e| format!("{}: {e}", h.pattern)))
            .collect();
        report.check(
            "hypercubes",
            bad.is_empty(),
            bad.first()
                .cloned()
                .unwrap_or_else(|| "every component is a hypercube".into()),
        );
    }
    if n <= caps.paths {
        let count = monotone_path_count(n, &caps)?;
        report.check(
            "noncrossing_paths",
            count == catalan(n + 1)?,
            format!("{count} paths to ({n},{n})"),
        );
        let refl = reflection_check(n, &caps)?;
        report.check(
            "reflection",
            refl.bijective,
            format!(
                "{} crossing paths, {} reflected targets",
                refl.crossing, refl.reflected_targets
            ),
        );
    }
    let bij = nondecreasing_pattern_path_bijection(n, &caps)?;
    report.check(
        "pattern_path_bijection",
        bij.passed(),
        format!("{} nondecreasing patterns", bij.patterns),
    );
    Ok(report)
}

fn locus_list(report: &ShapeReport) -> [String; 3] {
    let join = |v: Vec<String>| {
        if v.is_empty() {
            "-".to_string()
        } else {
            v.join(";")
        }
    };
    [
        join(
            report
                .sign_changes
                .iter()
                .map(|e| format!("({},{})", e.a, e.b))
                .collect(),
        ),
        join(
            report
                .extremes
                .iter()
                .map(|e| format!("({},{}){}", e.a, e.b, e.kind))
                .collect(),
        ),
        join(
            report
                .inflections
                .iter()
                .map(|e| format!("({},{})", e.c, e.d))
                .collect(),
        ),
    ]
}

const RULES: [ShapeRule; 5] = [
    ShapeRule::ShA,
    ShapeRule::ShB,
    ShapeRule::ShC,
    ShapeRule::ShD,
    ShapeRule::ShE,
];

fn shape_checks(
    x: &BigRational,
    lo: usize,
    hi: usize,
    report: &mut Report,
    rows: bool,
) -> Result<(), Usage> {
    let scan = shape_scan_range(x, lo, hi)?;
    if rows {
        for r in &scan.reports {
            let [sc, ex, inf] = locus_list(r);
            report.row(vec![r.n.to_string(), sc, ex, inf, r.zero_count.to_string()]);
        }
    }
    for rule in RULES {
        let bad: Vec<usize> = scan.violations_of(rule).map(|v| v.n).collect();
        let mut detail = mismatch_detail(&format!("{rule} for {} <= n <= {hi}", lo.max(6)), &bad);
        if rule == ShapeRule::ShE {
            detail.push_str(&format!(" ({} indices tested)", scan.she_tested));
        }
        report.check(
            format!("shape_{rule}[x={}]", scan.x),
            bad.is_empty(),
            detail,
        );
    }
    Ok(())
}

fn shapes(c: &Common) -> CmdResult {
    let x = parse_x_in_contract(c, rational(-1, 2))?;
    let (lo, hi) = n_range(c, (6, 200), Some(6))?;
    let mut report = Report::new("shapes");
    common_params(&mut report, c, Some(&x), Some((lo, hi)));
    report.columns(&["n", "sign_change", "extreme", "inflection", "zeros"]);
    shape_checks(&x, lo, hi, &mut report, true)?;
    Ok(report)
}

fn eigen_checks(xf: f64, report: &mut Report) -> Result<(), Usage> {
    let pairs = eigenpairs(xf, -3..=3)?;
    let target = xf / (1.0 + xf);
    let worst = pairs
        .iter()
        .map(|p| ((-p.lambda.inv()).exp() - target).norm())
        .fold(0.0, f64::max);
    report.check(
        format!("eigen_exp[x={xf}]"),
        worst < 1e-12,
        format!("max |exp(-1/lambda_m) - x/y| = {worst:.2e}"),
    );
    let residual = eigenpairs(xf, -2..=1)?
        .iter()
        .map(|p| eigen_residual(xf, p, 10_000))
        .fold(0.0, f64::max);
    report.check(
        format!("eigen_residual[x={xf}]"),
        residual < 1e-8,
        format!("max |T f_m - lambda_m f_m| = {residual:.2e}"),
    );
    Ok(())
}

fn spectral(c: &Common) -> CmdResult {
    let x = parse_x_in_contract(c, rational(-1, 2))?;
    let (lo, hi) = n_range(c, (50, 300), Some(3))?;
    let lo = lo.max(3);
    let xf = to_f64(&x);
    let mut report = Report::new("spectral");
    common_params(&mut report, c, Some(&x), Some((lo, hi)));
    let trace = angle_trace(&x, lo, hi)?;
    report.columns(&["n", "proj_norm", "perp_norm", "theta", "tan_theta"]);
    for r in &trace.records {
        report.row(vec![
            r.n.to_string(),
            format!("{:e}", r.proj_norm),
            format!("{:e}", r.perp_norm),
            r.theta.to_string(),
            r.tan_theta.to_string(),
        ]);
    }
    let pyth = trace
        .records
        .iter()
        .map(|r| (r.theta.sin().powi(2) + r.theta.cos().powi(2) - 1.0).abs())
        .fold(0.0, f64::max);
    report.check(
        "pythagoras",
        pyth < 1e-12,
        format!("max |sin^2 + cos^2 - 1| = {pyth:.1e}"),
    );
    eigen_checks(xf, &mut report)?;
    if let (Some(first), Some(last)) = (trace.records.first(), trace.records.last()) {
        report.check(
            "theta_decrease",
            last.theta < first.theta,
            format!(
                "theta_{} = {:.6} vs theta_{} = {:.6}",
                last.n, last.theta, first.n, first.theta
            ),
        );
    }
    let tan = tan_regime_check(&trace, xf)?;
    report.check(
        "tan_regime",
        tan.passed(),
        format!(
            "{} steps above n = {:.1}: {} relative, {} absolute ({} vacuous), {} violations",
            tan.checked,
            tan.threshold,
            tan.relative_steps,
            tan.absolute_steps,
            tan.vacuous_steps,
            tan.violations.len()
        ),
    );
    Ok(report)
}

fn growth(c: &Common) -> CmdResult {
    let x = parse_x_in_contract(c, rational(-1, 2))?;
    let (lo, hi) = n_range(c, (150, 300), Some(1))?;
    let mut report = Report::new("growth");
    common_params(&mut report, c, Some(&x), Some((lo, hi)));
    let fit = growth_rate(&x, lo, hi)?;
    report.columns(&[
        "n_lo",
        "n_hi",
        "points",
        "slope",
        "predicted",
        "relative_error",
    ]);
    report.row(vec![
        lo.to_string(),
        hi.to_string(),
        fit.points.to_string(),
        fit.slope.to_string(),
        fit.predicted.to_string(),
        fit.relative_error.to_string(),
    ]);
    report.check(
        "slope_within_2pct",
        fit.relative_error < 0.02,
        format!("slope {:.6} vs log(lambda) {:.6}", fit.slope, fit.predicted),
    );
    Ok(report)
}

fn plotdata(p: &PlotArgs) -> CmdResult {
    let c = &p.common;
    let x = parse_x_in_contract(c, rational(-1, 2))?;
    let mut report = Report::new("plotdata");
    if let Some(range) = &p.growth {
        let (lo, hi) = match parse_n_spec(range)? {
            (Some(lo), hi) => (lo.max(3), hi),
            (None, hi) => (3, hi),
        };
        common_params(&mut report, c, Some(&x), Some((lo, hi)));
        report.param("growth", true);
        let trace = angle_trace(&x, lo, hi)?;
        let logs: BTreeMap<usize, f64> = log_growth_points(&x, lo, hi)?.into_iter().collect();
        report.columns(&["n", "theta", "tan_theta", "log_r", "slope"]);
        let mut seen: Vec<(f64, f64)> = Vec::new();
        for r in &trace.records {
            let log_r = logs.get(&r.n).copied();
            if let Some(v) = log_r {
                seen.push((r.n as f64, v));
            }
            let slope = running_slope(&seen);
            report.row(vec![
                r.n.to_string(),
                r.theta.to_string(),
                r.tan_theta.to_string(),
                log_r.map_or_else(|| "nan".into(), |v| v.to_string()),
                slope.map_or_else(|| "nan".into(), |v| v.to_string()),
            ]);
        }
        return Ok(report);
    }
    let (_, n) = n_range(c, (16, 16), None)?;
    if n < 3 {
        return Err(Usage("plot data needs n >= 3".into()));
    }
    common_params(&mut report, c, Some(&x), Some((n, n)));
    let s = s_iter(&x)?.nth(n - 2).expect("unbounded");
    let step = embed_f64(&s);
    report.columns(&["u", "s"]);
    for (j, v) in step.values().iter().enumerate() {
        report.row(vec![
            ((j + 1) as f64 / (n - 1) as f64).to_string(),
            format!("{v:e}"),
        ]);
    }
    if n >= 5 {
        let shape = crate::dynamics::shape_report(&s)?;
        report.check(
            "single_sign_change",
            shape.sign_changes.len() == 1,
            format!("{} sign changes", shape.sign_changes.len()),
        );
        report.check(
            "single_extreme",
            shape.extremes.len() == 1,
            format!("{} extremes", shape.extremes.len()),
        );
    }
    Ok(report)
}

fn running_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn verify(v: &VerifyArgs) -> CmdResult {
    let c = &v.common;
    let x_override = match &c.x {
        Some(_) => Some(parse_x(c, int(1))?),
        None => None,
    };
    let n_override = match &c.n {
        Some(text) => Some(parse_n_spec(text)?.1),
        None => None,
    };
    let caps = caps(c);
    let groups: Vec<Group> = if v.only.is_empty() {
        Group::DEFAULT.to_vec()
    } else {
        v.only.clone()
    };
    let mut report = Report::new("verify");
    common_params(&mut report, c, x_override.as_ref(), None);
    if let Some(n) = n_override {
        report.param("n", n);
    }
    report.param(
        "groups",
        groups
            .iter()
            .map(|g| format!("{g:?}").to_lowercase())
            .collect::<Vec<_>>(),
    );
    let shape_xs = || -> Result<Vec<BigRational>, Usage> {
        match &x_override {
            Some(x) if !x.is_negative() || *x <= -BigRational::one() => Err(Usage(format!(
                "x must lie in (-1, 0), got {}",
                format_rational(x)
            ))),
            Some(x) => Ok(vec![x.clone()]),
            None => Ok(vec![rational(-1, 10), rational(-1, 2), rational(-9, 10)]),
        }
    };
    for group in groups {
        match group {
            Group::Formats => verify_formats(n_override.unwrap_or(10), &caps, &mut report)?,
            Group::Catalan => {
                let n_max = n_override.unwrap_or(25);
                let a = a_sequence(&int(-1), n_max)?;
                let bad: Vec<usize> = (1..=n_max)
                    .filter(|&n| a[n - 1] != signed_catalan(n))
                    .collect();
                report.check(
                    "catalan_alternating",
                    bad.is_empty(),
                    mismatch_detail(&format!("a_n(-1) = (-1)^n C_n for n <= {n_max}"), &bad),
                );
            }
            Group::Nzc => verify_nzc(n_override.unwrap_or(20), &caps, &mut report)?,
            Group::Hypercubes => {
                let n_max = n_override.unwrap_or(7).min(caps.patterns);
                let mut bad = Vec::new();
                for n in 2..=n_max {
                    for h in hypercube_decomposition(n, &caps)? {
                        if let Err(e) = h.verify() {
                            bad.push(format!("n = {n}, {}: {e}", h.pattern));
                        }
                    }
                }
                report.check(
                    "hypercubes",
                    bad.is_empty(),
                    bad.first().cloned().unwrap_or_else(|| {
                        format!("all components are hypercubes for n <= {n_max}")
                    }),
                );
                let six = decomposition_summary(6, &caps)?;
                report.check(
                    "hypercube_arrays_6",
                    six.arrays == 214,
                    format!("{} arrays at n = 6", six.arrays),
                );
            }
            Group::Paths => verify_paths(n_override.unwrap_or(12), &caps, &mut report)?,
            Group::Dynamics => verify_dynamics(n_override.unwrap_or(200), c.seed, &mut report)?,
            Group::Shapes => {
                for x in shape_xs()? {
                    shape_checks(&x, 6, n_override.unwrap_or(200), &mut report, false)?;
                }
            }
            Group::OperatorGap => {
                let n_max = n_override.unwrap_or(1000);
                let bad: Vec<usize> = (2..=n_max)
                    .filter(|&n| omega_measure(n).ok() != Some(rational(1, n as i64)))
                    .collect();
                report.check(
                    "omega_measure",
                    bad.is_empty(),
                    mismatch_detail(&format!("measure 1/n for 2 <= n <= {n_max}"), &bad),
                );
                for n in [10, 50, 100] {
                    let hs = hs_norm(n)?;
                    let bound = 1.0 / (n as f64).sqrt();
                    report.check(
                        format!("hs_norm[n={n}]"),
                        hs <= bound + 1e-6,
                        format!("{hs:.12} vs 1/sqrt(n) = {bound:.12}"),
                    );
                }
            }
            Group::Eigen => {
                for x in shape_xs()? {
                    eigen_checks(to_f64(&x), &mut report)?;
                }
            }
            Group::Spectral => verify_spectral(&mut report)?,
        }
    }
    Ok(report)
}

fn verify_formats(n_max: usize, caps: &Caps, report: &mut Report) -> Result<(), Usage> {
    let basic = basic_format(6)?;
    let expect: BTreeMap<usize, BigInt> = [(4, 8), (5, 86), (6, 120)]
        .into_iter()
        .map(|(r, v)| (r, BigInt::from(v)))
        .collect();
    report.check(
        "basic_format_6",
        basic.xi == expect,
        "8x^4 + 86x^5 + 120x^6",
    );
    let binom = binomial_format(6)?;
    let expect: BTreeMap<usize, BigInt> = [(4, 8), (5, 70), (6, 42)]
        .into_iter()
        .map(|(r, v)| (r, BigInt::from(v)))
        .collect();
    report.check(
        "binomial_format_6",
        binom.prim == expect,
        "P(6, 4..6) = 8, 70, 42",
    );
    if n_max > caps.patterns {
        return Err(Usage(format!(
            "n = {n_max} exceeds the enumeration cap {}",
            caps.patterns
        )));
    }
    let bad: Vec<usize> = (1..=n_max)
        .filter(|&n| {
            let dp = primitive_counts_dp(n);
            let enumerated = primitive_counts_by_enumeration(n, caps).ok();
            let back = binomial_format(n).ok().map(|b| b.prim);
            enumerated.as_ref() != Some(&dp) || back.as_ref() != Some(&dp)
        })
        .collect();
    report.check(
        "three_way_oracle",
        bad.is_empty(),
        mismatch_detail(
            &format!("enumeration = DP = back-substitution for n <= {n_max}"),
            &bad,
        ),
    );
    Ok(())
}

fn verify_nzc(n_max: usize, caps: &Caps, report: &mut Report) -> Result<(), Usage> {
    let nzc = nzc_sequence(n_max)?;
    let head = [1, 1, 1, 2, 3, 6, 11, 22, 42];
    let head_ok = nzc.iter().zip(head).all(|(a, b)| *a == BigInt::from(b));
    let bad: Vec<usize> = (1..=n_max)
        .filter(|&n| {
            enumerate_signatures(n).map(|s| BigInt::from(s.len())).ok() != Some(nzc[n - 1].clone())
        })
        .collect();
    report.check(
        "signature_counts",
        head_ok && bad.is_empty(),
        mismatch_detail(
            &format!("n-signatures follow 1,1,1,2,3,6,11,22,42,... for n <= {n_max}"),
            &bad,
        ),
    );
    let m = 10.min(caps.patterns).min(n_max);
    let bad: Vec<usize> = (1..=m)
        .filter(|&n| {
            let canonical = count_arrays(&Signature::canonical(n));
            let components = decomposition_summary(n, caps)
                .map(|s| BigInt::from(s.components))
                .ok();
            canonical != factorial(n - 1) || components != Some(factorial(n - 1))
        })
        .collect();
    report.check(
        "canonical_and_components",
        bad.is_empty(),
        mismatch_detail(&format!("both equal (n-1)! for n <= {m}"), &bad),
    );
    Ok(())
}

fn verify_paths(n_max: usize, caps: &Caps, report: &mut Report) -> Result<(), Usage> {
    let m = n_max.min(caps.paths);
    let bad: Vec<usize> = (1..=m)
        .filter(|&n| monotone_path_count(n, caps).ok() != catalan(n + 1).ok())
        .collect();
    report.check(
        "noncrossing_paths",
        bad.is_empty(),
        mismatch_detail(&format!("C(2n,n)/(n+1) paths to (n,n) for n <= {m}"), &bad),
    );
    let bad: Vec<usize> = (1..=m)
        .filter(|&n| {
            !reflection_check(n, caps)
                .map(|r| r.bijective)
                .unwrap_or(false)
        })
        .collect();
    report.check(
        "reflection",
        bad.is_empty(),
        mismatch_detail(
            &format!("crossing paths biject with paths to (n-1,n+1) for n <= {m}"),
            &bad,
        ),
    );
    let k = n_max.min(caps.patterns);
    let bad: Vec<usize> = (1..=k)
        .filter(|&n| {
            !nondecreasing_pattern_path_bijection(n, caps)
                .map(|r| r.passed())
                .unwrap_or(false)
        })
        .collect();
    report.check(
        "pattern_path_bijection",
        bad.is_empty(),
        mismatch_detail(&format!("round trip for n <= {k}"), &bad),
    );
    Ok(())
}

fn verify_dynamics(n_max: usize, seed: u64, report: &mut Report) -> Result<(), Usage> {
    let mut xs = vec![
        rational(-1, 10),
        rational(-1, 2),
        rational(-9, 10),
        int(1),
        int(-2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let q: i64 = rng.gen_range(2..=20);
        let p: i64 = rng.gen_range(1..q);
        xs.push(rational(-p, q));
    }
    for x in xs {
        let a = a_sequence(&x, n_max.max(2))?;
        let mut totals_ok = true;
        let mut diffs_ok = true;
        let mut prev = None;
        for s in s_iter(&x)?.take(n_max.saturating_sub(1)) {
            totals_ok &= s.total() == a[s.n() - 1];
            if let Some(p) = &prev {
                diffs_ok &= finite_difference_check(p, &s);
            }
            prev = Some(s);
        }
        let tag = format_rational(&x);
        report.check(
            format!("s_totals[x={tag}]"),
            totals_ok,
            format!("sum_j S_n(j) = a_n for n <= {n_max}"),
        );
        report.check(
            format!("finite_differences[x={tag}]"),
            diffs_ok,
            format!("every step for n <= {n_max}"),
        );
    }
    Ok(())
}

fn verify_spectral(report: &mut Report) -> Result<(), Usage> {
    let x = rational(-1, 2);
    let fit = growth_rate(&x, 150, 300)?;
    report.check(
        "growth_slope",
        fit.relative_error < 0.02,
        format!("slope {:.6} vs {:.6}", fit.slope, fit.predicted),
    );
    let trace = angle_trace(&x, 50, 400)?;
    let theta = |n| trace.get(n).map(|r| r.theta).unwrap_or(f64::NAN);
    let (t50, t300) = (theta(50), theta(300));
    report.check(
        "theta_decrease",
        t300 < t50,
        format!("theta_50 = {t50:.6}, theta_300 = {t300:.6}"),
    );
    let tail = crate::spectral::AngleTrace {
        x: trace.x,
        records: trace
            .records
            .iter()
            .filter(|r| r.n >= 200)
            .copied()
            .collect(),
    };
    let tan = tan_regime_check(&tail, trace.x)?;
    report.check(
        "tan_regime",
        tan.passed(),
        format!(
            "{} steps checked, {} violations",
            tan.checked,
            tan.violations.len()
        ),
    );
    let (lambda, _) = dominant_moduli(trace.x)?;
    report.check(
        "lambda",
        (lambda - 1.0 / std::f64::consts::PI).abs() < 1e-15,
        format!("lambda = {lambda}"),
    );
    let ratio = norm_ratio_trace(&x, 20, 300)?
        .iter()
        .map(|r| r.1)
        .fold(f64::INFINITY, f64::min);
    report.check(
        "norm_ratio",
        ratio > 0.0,
        format!("min ||s_n||_1 / ||s_n||_inf = {ratio:.6}"),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let code = run(
            std::iter::once("binrec").chain(args.iter().copied()),
            &mut out,
        );
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn n_specs() {
        assert!(matches!(parse_n_spec("7"), Ok((None, 7))));
        assert!(matches!(parse_n_spec("3:9"), Ok((Some(3), 9))));
        assert!(parse_n_spec("9:3").is_err());
        assert!(parse_n_spec("x").is_err());
    }

    #[test]
    fn compute_table() {
        let (code, out) = run_str(&["compute", "--x", "1", "--n", "7"]);
        assert_eq!(code, 0);
        let last: Vec<&str> = out.lines().nth(7).unwrap().split_whitespace().collect();
        assert_eq!(last, ["7", "1652", "1"], "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["compute", "--x", "0", "--n", "4"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["compute", "--x", "1/0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["shapes", "--x", "1/2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["growth", "--x", "-1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["enumerate", "--n", "9", "--cap", "8"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn json_schema() {
        let (code, out) = run_str(&["formats", "--n", "6", "--output", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "formats");
        assert_eq!(v["params"]["n_hi"], 6);
        assert!(v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["status"] == "pass"));
        assert_eq!(v["rows"][0]["xi"], "8");
    }
}
