//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain error, 4 disagreement
//! (including a failed `--check` or a failing oracle).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::angle::{optimal_angle_interval, semistable_range_lambda_ge_1, DivisorPairSpec, OptimalAngle, SemistableRange};
use crate::arith::Rational;
use crate::bundle::{bundle_delta, BundleBoundary, DeltaBreakdown, DeltaKnowledge, FanoBase};
use crate::calabi::{
    edge_angles, futaki_closed_form, futaki_invariant, ricci_bound_identity_holds, ricci_bound_margin, solve_profile,
    AdmissibleProfile, EdgeAngles,
};
use crate::cone::{
    branched_cone_delta, cone_delta, iterated_hypersurface_report, BranchedConeSpec, ConeBoundary, ConeDelta,
    HypersurfaceConeSpec, IteratedCone, ProofCoverage,
};
use crate::error::{Error, Result};
use crate::oracle::{run_suite, GridSpec, SuiteConfig, SuiteReport};

pub const SCHEMA_VERSION: &str = "1";

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_delta(s: &str) -> std::result::Result<DeltaKnowledge, String> {
    if s.contains('.') {
        return Err(format!("delta must be \"ge1\" or an exact rational such as 13/14 (got {s})"));
    }
    s.parse::<DeltaKnowledge>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "fano-delta", version, about = "Exact delta invariants of bundles and cones over Fano bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Emit JSON instead of the human-readable table.
    #[arg(long)]
    json: bool,
    /// Compare the JSON output against a previously saved file.
    #[arg(long, value_name = "FILE")]
    check: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Delta invariant of P(L^-1 + O) over V with boundary a V0 + b Vinf.
    Bundle {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_rational)]
        r: Rational,
        /// `ge1` or an exact rational.
        #[arg(long, value_parser = parse_delta)]
        delta_v: DeltaKnowledge,
        #[arg(long, value_parser = parse_rational, default_value = "0")]
        a: Rational,
        #[arg(long, value_parser = parse_rational, default_value = "0")]
        b: Rational,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Delta invariant of the projective cone with boundary c Vinf.
    Cone {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_rational)]
        r: Rational,
        #[arg(long, value_parser = parse_delta)]
        delta_v: DeltaKnowledge,
        #[arg(long, value_parser = parse_rational, default_value = "0")]
        c: Rational,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A smooth degree-d hypersurface in P^{n+1} coned i times.
    ConeIterate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, value_parser = parse_delta, default_value = "ge1")]
        delta_v0: DeltaKnowledge,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cone over a k-fold cover of P^n branched along a degree-d hypersurface.
    BranchedCone {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        l: u32,
        /// Delta of (P^n, (k-1)/k S_d); required unless n+1 <= d <= n+2.
        #[arg(long, value_parser = parse_delta)]
        delta_pair: Option<DeltaKnowledge>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Angles a with (V, a S) K-semistable, for S ~ -lambda K_V.
    Angle {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_rational)]
        lambda: Rational,
        /// Assume V and S K-polystable.
        #[arg(long)]
        polystable: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Edge-cone Kähler-Einstein profile on the smooth bundle.
    Calabi {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_rational)]
        r: Rational,
        /// Defaults to beta_0.
        #[arg(long, value_parser = parse_rational)]
        beta: Option<Rational>,
        /// Twisting constant for the Ricci lower bound margin.
        #[arg(long, value_parser = parse_rational)]
        mu: Option<Rational>,
        /// Print `samples + 1` equally spaced values of phi as CSV.
        #[arg(long, value_name = "SAMPLES")]
        csv: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the oracle suite.
    Verify {
        #[arg(long, env = "FANO_DELTA_DEEP", value_parser = clap::builder::BoolishValueParser::new())]
        deep: bool,
        /// `default`, `wide`, or a JSON grid file.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Write the JSON report to FILE, or to stdout when no file is given.
        #[arg(long, value_name = "FILE", num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn to_json<T: Serialize>(command: &str, body: &T) -> String {
    let env = Envelope { schema: SCHEMA_VERSION, command, body };
    serde_json::to_string_pretty(&env).expect("serializable output")
}

fn dec(x: &Rational) -> String {
    x.to_decimal_string(6)
}

fn breakdown_table(out: &mut String, b: &DeltaBreakdown) {
    let label = if b.lower_bound_only { "delta >=" } else { "delta =" };
    let _ = writeln!(out, "{label} {} ({})", b.value, dec(&b.value));
    if let Some(u) = &b.upper_bound {
        let _ = writeln!(out, "delta <= {} ({})", u, dec(u));
    }
    let _ = writeln!(out, "{:<12} {:>14} {:>12}", "branch", "exact", "decimal");
    let base = match &b.branches.base {
        Some(v) => (v.to_string(), dec(v)),
        None => (format!(">= {}", b.base_at_delta_one), dec(&b.base_at_delta_one)),
    };
    let _ = writeln!(out, "{:<12} {:>14} {:>12}", "BaseDivisor", base.0, base.1);
    let _ = writeln!(out, "{:<12} {:>14} {:>12}", "V0", b.branches.v0.to_string(), dec(&b.branches.v0));
    let _ = writeln!(out, "{:<12} {:>14} {:>12}", "Vinf", b.branches.vinf.to_string(), dec(&b.branches.vinf));
    if b.branches.base.is_some() {
        let _ = writeln!(out, "coefficient of delta(V) in the base branch: {}", b.base_at_delta_one);
    }
    let mins: Vec<String> = b.minimizers.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "minimizers: {}", mins.join(", "));
    let _ = writeln!(out, "lower_bound_only: {}", b.lower_bound_only);
}

fn cone_human(c: &ConeDelta) -> String {
    let mut s = String::new();
    breakdown_table(&mut s, &c.breakdown);
    let cov = match c.proof_coverage {
        ProofCoverage::Full => "full",
        ProofCoverage::UpperBoundOnly => "upper-bound-only (r > n+1)",
    };
    let _ = writeln!(s, "proof_coverage: {cov}");
    s
}

struct Rendered {
    human: String,
    json: String,
}

fn render<T: Serialize>(command: &str, body: &T, human: String) -> Rendered {
    Rendered { human, json: to_json(command, body) }
}

fn run_bundle(n: u32, r: Rational, delta_v: DeltaKnowledge, a: Rational, b: Rational) -> Result<Rendered> {
    let base = FanoBase::new(n, r, delta_v)?;
    let out = bundle_delta(&base, &BundleBoundary::new(a, b))?;
    let mut human = String::new();
    breakdown_table(&mut human, &out);
    Ok(render("bundle", &out, human))
}

fn run_cone(n: u32, r: Rational, delta_v: DeltaKnowledge, c: Rational) -> Result<Rendered> {
    let base = FanoBase::new(n, r, delta_v)?;
    let out = cone_delta(&base, &ConeBoundary::new(c)?)?;
    let human = cone_human(&out);
    Ok(render("cone", &out, human))
}

fn run_cone_iterate(spec: HypersurfaceConeSpec) -> Result<Rendered> {
    let out: IteratedCone = iterated_hypersurface_report(&spec)?;
    let mut h = String::new();
    let _ = writeln!(h, "delta = {} ({})", out.value, dec(&out.value));
    let _ = writeln!(h, "closed form = {}, composition = {}", out.closed_form, out.composition);
    let _ = writeln!(h, "{:<4} {:>10} {:>8} {:>14} {:>12}", "step", "dimension", "r", "delta", "decimal");
    for (j, st) in out.steps.iter().enumerate() {
        let _ = writeln!(h, "{:<4} {:>10} {:>8} {:>14} {:>12}", j + 1, st.dimension, st.r.to_string(), st.delta.to_string(), dec(&st.delta));
    }
    Ok(render("cone-iterate", &out, h))
}

fn run_branched(spec: BranchedConeSpec, delta_pair: Option<DeltaKnowledge>) -> Result<Rendered> {
    let out = branched_cone_delta(&spec, delta_pair)?;
    let mut h = cone_human(&out.cone);
    let _ = writeln!(h, "r = {}", out.cone.r_effective);
    let _ = writeln!(h, "delta_pair = {} ({:?})", out.delta_pair, out.delta_pair_source);
    let verdict = serde_json::to_value(out.verdict).expect("verdict");
    let _ = writeln!(h, "verdict: {}", verdict.as_str().unwrap_or_default());
    Ok(render("branched-cone", &out, h))
}

#[derive(Serialize)]
#[serde(untagged)]
enum AngleOutput {
    Interval(OptimalAngle),
    Range(SemistableRange),
}

fn run_angle(n: u32, lambda: Rational, polystable: bool) -> Result<Rendered> {
    if lambda >= 1 {
        let out = semistable_range_lambda_ge_1(n, &lambda)?;
        let mut h = String::new();
        let _ = writeln!(h, "semistable range = [0, {}) ({})", out.upper, dec(&out.upper));
        let _ = writeln!(h, "{}", out.stability_note);
        return Ok(render("angle", &AngleOutput::Range(out), h));
    }
    let mut spec = DivisorPairSpec::semistable(n, lambda);
    spec.polystable = polystable;
    let out = optimal_angle_interval(&spec)?;
    let mut h = String::new();
    let _ = writeln!(h, "endpoint = {} ({})", out.endpoint, dec(&out.endpoint));
    let _ = writeln!(h, "r = {}", out.r);
    let _ = writeln!(h, "semistable for a in [0, {}]", out.endpoint);
    if out.polystable_open_interval {
        let _ = writeln!(h, "polystable for a in [0, {})", out.endpoint);
    }
    for hyp in &out.hypotheses {
        let _ = writeln!(h, "assumes: {hyp}");
    }
    Ok(render("angle", &AngleOutput::Interval(out), h))
}

#[derive(Serialize)]
struct RicciReport {
    mu: Rational,
    margin: Rational,
    identity_holds: bool,
}

#[derive(Serialize)]
struct CalabiOutput {
    n: u32,
    r: Rational,
    beta: Rational,
    beta_zero: Rational,
    c1: Rational,
    c2: Rational,
    numerator: String,
    ode_residual_zero: bool,
    boundary_values: [Rational; 2],
    edge_angles: EdgeAngles,
    positive_on_interior: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ricci: Option<RicciReport>,
    futaki_standard_profile: Rational,
    futaki_closed_form: Rational,
}

fn run_calabi(n: u32, r: Rational, beta: Option<Rational>, mu: Option<Rational>, csv: Option<u32>) -> Result<Rendered> {
    let beta0 = crate::bundle::beta_zero(n, &r)?;
    let beta = beta.unwrap_or_else(|| beta0.clone());
    let prof = solve_profile(n, &r, &beta)?;
    let angles = edge_angles(&prof)?;
    let residual_zero = prof.ode_residual().is_zero();
    if !residual_zero {
        return Err(Error::Disagreement(format!("ODE residual is {}", prof.ode_residual())));
    }
    let (lo, hi) = prof.boundary_values();
    let ricci = match mu {
        Some(mu) => Some(RicciReport {
            margin: ricci_bound_margin(&prof, &mu)?,
            identity_holds: ricci_bound_identity_holds(&prof, &mu)?,
            mu,
        }),
        None => None,
    };
    let std = AdmissibleProfile::standard(n, &r)?;
    let out = CalabiOutput {
        n,
        r: r.clone(),
        beta: beta.clone(),
        beta_zero: beta0,
        c1: prof.c1.clone(),
        c2: prof.c2.clone(),
        numerator: prof.numerator.to_string(),
        ode_residual_zero: residual_zero,
        boundary_values: [lo, hi],
        edge_angles: angles,
        positive_on_interior: crate::calabi::positive_on_interior(&r, &prof.numerator),
        ricci,
        futaki_standard_profile: futaki_invariant(&std)?,
        futaki_closed_form: futaki_closed_form(n, &r)?,
    };
    let mut h = String::new();
    if let Some(samples) = csv {
        let samples = samples.max(1);
        let _ = writeln!(h, "tau,phi,phi_decimal");
        let one = Rational::one();
        let lo = &r - &one;
        let step = Rational::integer(2) / Rational::from(samples);
        for j in 0..=samples {
            let tau = &lo + &step * Rational::from(j);
            let phi = prof.phi(&tau);
            let _ = writeln!(h, "{tau},{phi},{}", dec(&phi));
        }
        return Ok(render("calabi", &out, h));
    }
    let _ = writeln!(h, "tau^n phi = {}", out.numerator);
    let _ = writeln!(h, "beta = {} ({}), beta_0 = {} ({})", out.beta, dec(&out.beta), out.beta_zero, dec(&out.beta_zero));
    let _ = writeln!(h, "c1 = {}, c2 = {}", out.c1, out.c2);
    let _ = writeln!(h, "ode residual zero: {}", out.ode_residual_zero);
    let _ = writeln!(h, "boundary values: {}, {}", out.boundary_values[0], out.boundary_values[1]);
    let _ = writeln!(
        h,
        "edge angles: beta1 = {} ({}), beta2 = {} ({})",
        out.edge_angles.beta1,
        dec(&out.edge_angles.beta1),
        out.edge_angles.beta2,
        dec(&out.edge_angles.beta2)
    );
    let _ = writeln!(h, "phi > 0 inside: {}", out.positive_on_interior);
    if let Some(rc) = &out.ricci {
        let _ = writeln!(h, "ricci margin at mu = {}: {} ({}), identity holds: {}", rc.mu, rc.margin, dec(&rc.margin), rc.identity_holds);
    }
    let _ = writeln!(h, "futaki (standard profile) = {}, closed form = {}", out.futaki_standard_profile, out.futaki_closed_form);
    Ok(render("calabi", &out, h))
}

fn suite_human(rep: &SuiteReport) -> String {
    let mut h = String::new();
    for r in &rep.reports {
        let mark = if r.passed() { "PASS" } else { "FAIL" };
        let _ = write!(
            h,
            "{mark} {} err={:.3e} bound={:.3e} m={}",
            r.target,
            r.absolute_error.to_f64(),
            r.bound.to_f64(),
            r.m_or_steps
        );
        if let Some(d) = &r.detail {
            let _ = write!(h, " [{d}]");
        }
        h.push('\n');
    }
    let s = &rep.summary;
    let _ = writeln!(h, "{} oracles: {} passed, {} failed{}", s.total, s.passed, s.failed, if s.deep { " (deep)" } else { "" });
    h
}

fn run_verify(deep: bool, grid: &str, json: Option<String>) -> Result<(i32, String)> {
    let grid = GridSpec::resolve(grid)?;
    let rep = run_suite(&SuiteConfig { deep, grid });
    let text = to_json("verify", &rep);
    let shown = match json.as_deref() {
        Some("-") => format!("{text}\n"),
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))?;
            suite_human(&rep)
        }
        None => suite_human(&rep),
    };
    Ok((if rep.all_passed() { 0 } else { 4 }, shown))
}

fn emit(rendered: Rendered, out: &OutputArgs) -> Result<(i32, String)> {
    if let Some(path) = &out.check {
        let saved = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read check file {}: {e}", path.display())))?;
        if saved.trim_end() != rendered.json {
            return Err(Error::Disagreement(format!("output differs from {}", path.display())));
        }
        return Ok((0, format!("check ok: {}\n", path.display())));
    }
    if out.json {
        Ok((0, format!("{}\n", rendered.json)))
    } else {
        Ok((0, rendered.human))
    }
}

fn dispatch(cmd: Command) -> Result<(i32, String)> {
    match cmd {
        Command::Bundle { n, r, delta_v, a, b, out } => emit(run_bundle(n, r, delta_v, a, b)?, &out),
        Command::Cone { n, r, delta_v, c, out } => emit(run_cone(n, r, delta_v, c)?, &out),
        Command::ConeIterate { n, d, i, delta_v0, out } => {
            emit(run_cone_iterate(HypersurfaceConeSpec { n, d, i, delta_v0 })?, &out)
        }
        Command::BranchedCone { n, k, d, l, delta_pair, out } => {
            emit(run_branched(BranchedConeSpec { n, k, d, l }, delta_pair)?, &out)
        }
        Command::Angle { n, lambda, polystable, out } => emit(run_angle(n, lambda, polystable)?, &out),
        Command::Calabi { n, r, beta, mu, csv, out } => emit(run_calabi(n, r, beta, mu, csv)?, &out),
        Command::Verify { deep, grid, json } => run_verify(deep, &grid, json),
    }
}

/// Result of one invocation: exit code and the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command without
/// touching the process streams.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// [`execute`], writing to the process streams; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let out = execute(argv);
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
    out.code
}
