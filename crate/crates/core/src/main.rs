//! ferrar-verify: command-line front end for the identity checkers.
//!
//! Exit status: 0 when every requested check passes, 1 when a check fails (reports
//! are still written), 2 on a usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ferrar_core::arith::{dtilde, rk_convolution, rk_enumerate};
use ferrar_core::identities::{
    check, check_ferrar_classic, check_theta, fmt40, run_grid, GridSpec, IdentityId, IdentityParams, IdentityReport,
};
use ferrar_core::numkernel::Complex;
use ferrar_core::specfun::euler_gamma;
use ferrar_core::zetafn::{
    dirichlet_beta, laurent_at_pole, laurent_closed_form, laurent_known_constant, riemann_zeta, zeta_k, LaurentMethod,
};
use ferrar_core::{Error, PrecisionContext};
use rug::Float;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ferrar-verify", version, about = "Verify lattice-sum identities at arbitrary precision")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one identity at one parameter point.
    Verify {
        #[arg(long, value_parser = parse_id)]
        identity: IdentityId,
        #[command(flatten)]
        params: PointArgs,
        #[command(flatten)]
        prec: PrecisionArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check one identity over the product of comma-separated parameter lists.
    Grid {
        #[arg(long, value_parser = parse_id)]
        identity: IdentityId,
        #[command(flatten)]
        params: ListArgs,
        /// Worker threads (0 = available parallelism).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(flatten)]
        prec: PrecisionArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residue and constant term of ζ_k at s = k/2.
    Laurent {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        prec: PrecisionArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dump r_k(n) and the convolution square d̃_k(n) for n ≤ N.
    Tables {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A fast set of internal consistency checks.
    Selftest {
        #[command(flatten)]
        prec: PrecisionArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Explicit dual parameter; checked against the identity's constraint.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
}

#[derive(Args, Debug)]
struct ListArgs {
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    nu: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Vec<f64>,
}

#[derive(Args, Debug)]
struct PrecisionArgs {
    /// Working precision in bits (default 256, or FERRAR_VERIFY_BITS).
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<u64>,
}

impl PrecisionArgs {
    fn context(&self) -> PrecisionContext {
        let mut ctx = PrecisionContext::from_env();
        if let Some(b) = self.bits {
            ctx = ctx.with_bits(b);
        }
        if let Some(t) = self.tol {
            ctx = ctx.with_tol(t);
        }
        if let Some(m) = self.max_terms {
            ctx.max_terms = m;
        }
        ctx
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn parse_id(s: &str) -> Result<IdentityId, String> {
    s.parse::<IdentityId>().map_err(|_| {
        let known: Vec<&str> = IdentityId::ALL.iter().map(|i| i.as_str()).collect();
        format!("unknown identity '{s}' (known: {})", known.join(", "))
    })
}

enum Failure {
    Usage(String),
    Io(String),
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { identity, params, prec, out } => verify(identity, params, &prec.context(), &out),
        Command::Grid { identity, params, threads, prec, out } => grid(identity, params, threads, &prec.context(), &out),
        Command::Laurent { k, prec, out } => laurent(k, &prec.context(), &out),
        Command::Tables { k, n, out } => tables(k, n, &out),
        Command::Selftest { prec, out } => selftest(&prec.context(), &out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

/// Write `body` to the output file, or to stdout when none was given. With a file
/// the summary goes to stdout; without one it goes to stderr so stdout stays parseable.
fn emit(out: &OutputArgs, body: &str, summary: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            print!("{summary}");
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
            if out.format != Format::Text {
                eprint!("{summary}");
            }
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Failure::Io(e.to_string()))
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

const PARAM_ORDER: [&str; 5] = ["k", "alpha", "beta", "nu", "x"];

fn param_text(r: &IdentityReport) -> String {
    let parts: Vec<String> = PARAM_ORDER
        .iter()
        .filter_map(|n| r.params.get(*n).map(|v| format!("{n}={v}")))
        .collect();
    parts.join(" ")
}

fn residual_table(reports: &[IdentityReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let err = match &r.error {
            Some(e) => format!("  ({e})"),
            None => String::new(),
        };
        s += &format!("{:<18} {:<34} rel_err={:<10.3e} {verdict}{err}\n", r.id.as_str(), param_text(r), r.rel_err_f64());
    }
    s
}

fn render_reports<T: Serialize>(reports: &[IdentityReport], json: &T, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => to_json(json),
        Format::Text => Ok(residual_table(reports)),
        Format::Csv => {
            let cols: Vec<&str> = PARAM_ORDER
                .iter()
                .copied()
                .filter(|n| reports.iter().any(|r| r.params.contains_key(*n)))
                .collect();
            let mut header = vec!["id".to_string()];
            header.extend(cols.iter().map(|c| c.to_string()));
            header.extend(["lhs", "rhs", "rel_err", "pass"].map(String::from));
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let mut row = vec![r.id.as_str().to_string()];
                    row.extend(cols.iter().map(|c| r.params.get(*c).cloned().unwrap_or_default()));
                    row.extend([r.lhs.clone(), r.rhs.clone(), r.rel_err.clone(), r.pass.to_string()]);
                    row
                })
                .collect();
            csv_string(&header, &rows)
        }
    }
}

fn verify(id: IdentityId, p: PointArgs, ctx: &PrecisionContext, out: &OutputArgs) -> CmdResult {
    let params = IdentityParams { k: p.k, alpha: p.alpha, beta: p.beta, nu: p.nu, x: p.x };
    let missing = params.missing(id);
    if !missing.is_empty() {
        return Err(Failure::Usage(format!("{id} requires --{}", missing.join(", --"))));
    }
    let report = match check(id, &params, ctx) {
        Ok(r) => r,
        Err(e @ (Error::DomainError(_) | Error::ConstraintViolation(_))) => return Err(Failure::Usage(e.to_string())),
        Err(e) => IdentityReport::failed(id, &params, ctx, &e),
    };
    let reports = [report];
    let body = render_reports(&reports, &reports[0], out.format)?;
    emit(out, &body, &residual_table(&reports))?;
    Ok(reports[0].pass)
}

fn grid(id: IdentityId, p: ListArgs, threads: usize, ctx: &PrecisionContext, out: &OutputArgs) -> CmdResult {
    let lists = [
        ("k", p.k.is_empty()),
        ("alpha", p.alpha.is_empty()),
        ("beta", p.beta.is_empty()),
        ("nu", p.nu.is_empty()),
        ("x", p.x.is_empty()),
    ];
    let missing: Vec<&str> = lists
        .iter()
        .filter(|(n, empty)| *empty && id.signature().contains(n))
        .map(|(n, _)| *n)
        .collect();
    if !missing.is_empty() {
        return Err(Failure::Usage(format!("{id} grid requires --{}", missing.join(", --"))));
    }
    let mut spec = GridSpec::lattice(id, &p.k, &p.alpha, &p.nu, &p.beta, &p.x).with_threads(threads);
    if id.dual_product().is_some() && !p.beta.is_empty() {
        // β pairs with α by position, not as an extra grid axis
        if p.beta.len() != p.alpha.len() {
            return Err(Failure::Usage("--beta must list one value per --alpha".into()));
        }
        for e in &mut spec.entries {
            let i = p.alpha.iter().position(|a| Some(*a) == e.params.alpha).unwrap_or(0);
            e.params.beta = Some(p.beta[i]);
        }
    }
    let summary = run_grid(&spec, ctx);
    let body = render_reports(&summary.reports, &summary, out.format)?;
    let text = format!("{}{} passed, {} failed\n", residual_table(&summary.reports), summary.passed, summary.failed);
    emit(out, &body, &text)?;
    Ok(summary.all_pass())
}

#[derive(Serialize)]
struct LaurentOut {
    k: u32,
    pole: f64,
    residue: String,
    constant: String,
    method: LaurentMethod,
    numerical_limit: String,
    numerical_limit_diff: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    known_constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    known_constant_diff: Option<String>,
    pass: bool,
    ctx_echo: PrecisionContext,
}

/// Agreement thresholds for the two cross-checks of the constant term.
const LIMIT_AGREEMENT: f64 = 1e-10;
const KNOWN_AGREEMENT: f64 = 1e-12;

fn laurent(k: u32, ctx: &PrecisionContext, out: &OutputArgs) -> CmdResult {
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let compute = || -> ferrar_core::Result<LaurentOut> {
        let d = laurent_at_pole(k, ctx)?;
        let p = ctx.work_prec();
        let limit = d.cross_check.clone().unwrap_or_else(|| Float::new(p));
        let ldiff = Float::with_val(p, &d.constant - &limit).abs();
        let known = laurent_known_constant(k, ctx)?;
        let kdiff = known.as_ref().map(|c| Float::with_val(p, &d.constant - c).abs());
        let pass = ldiff.to_f64() < LIMIT_AGREEMENT && kdiff.as_ref().map_or(true, |x| x.to_f64() < KNOWN_AGREEMENT);
        Ok(LaurentOut {
            k,
            pole: d.pole,
            residue: fmt40(&d.residue),
            constant: fmt40(&d.constant),
            method: d.method,
            numerical_limit: fmt40(&limit),
            numerical_limit_diff: fmt40(&ldiff),
            known_constant: known.as_ref().map(fmt40),
            known_constant_diff: kdiff.as_ref().map(fmt40),
            pass,
            ctx_echo: ctx.clone(),
        })
    };
    let d = match compute() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("laurent k={k}: {e}");
            return Ok(false);
        }
    };
    let mut text = format!(
        "k={} pole={} residue={} constant={}\n  numerical limit differs by {}\n",
        d.k, d.pole, d.residue, d.constant, d.numerical_limit_diff
    );
    if let Some(diff) = &d.known_constant_diff {
        text += &format!("  classical form differs by {diff}\n");
    }
    text += if d.pass { "PASS\n" } else { "FAIL\n" };
    let body = match out.format {
        Format::Json => to_json(&d)?,
        Format::Text => text.clone(),
        Format::Csv => {
            let header = ["k", "pole", "residue", "constant", "numerical_limit", "known_constant", "pass"].map(String::from);
            let row = vec![
                d.k.to_string(),
                d.pole.to_string(),
                d.residue.clone(),
                d.constant.clone(),
                d.numerical_limit.clone(),
                d.known_constant.clone().unwrap_or_default(),
                d.pass.to_string(),
            ];
            csv_string(&header, &[row])?
        }
    };
    emit(out, &body, &text)?;
    Ok(d.pass)
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    r_k: u64,
    dtilde_k: u64,
}

fn tables(k: u32, n: usize, out: &OutputArgs) -> CmdResult {
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let r = rk_convolution(k, n).map_err(|e| Failure::Usage(e.to_string()))?;
    let d = dtilde(k, n).map_err(|e| Failure::Usage(e.to_string()))?;
    let rows: Vec<TableRow> = (1..=n).map(|m| TableRow { n: m, r_k: r.values[m], dtilde_k: d[m] }).collect();
    let body = match out.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let header = ["n".to_string(), format!("r_{k}"), format!("dtilde_{k}")];
            let cells: Vec<Vec<String>> =
                rows.iter().map(|t| vec![t.n.to_string(), t.r_k.to_string(), t.dtilde_k.to_string()]).collect();
            csv_string(&header, &cells)?
        }
        Format::Text => rows.iter().map(|t| format!("{:>8} {:>14} {:>16}\n", t.n, t.r_k, t.dtilde_k)).collect(),
    };
    emit(out, &body, &format!("r_{k}(n), dtilde_{k}(n) for n <= {n}\n"))?;
    Ok(true)
}

#[derive(Serialize)]
struct SelfCheck {
    name: &'static str,
    error: String,
    pass: bool,
}

fn selftest(ctx: &PrecisionContext, out: &OutputArgs) -> CmdResult {
    let p = ctx.work_prec();
    let tol = (ctx.tol * 1e5).max(1e-12);
    let mut checks = Vec::new();
    let mut push = |name: &'static str, err: ferrar_core::Result<f64>, limit: f64| {
        let (error, pass) = match err {
            Ok(e) => (format!("{e:e}"), e < limit),
            Err(e) => (e.to_string(), false),
        };
        checks.push(SelfCheck { name, error, pass });
    };
    push(
        "rk_convolution_matches_enumeration",
        (|| {
            for k in 1..=4 {
                if rk_convolution(k, 300)?.values != rk_enumerate(k, 300)?.values {
                    return Ok(1.0);
                }
            }
            Ok(0.0)
        })(),
        0.5,
    );
    push(
        "zeta_2_equals_4_zeta_beta",
        (|| {
            let s = Complex::with_val(p, 3.0, 0.0);
            let lhs = zeta_k(2, &s, ctx)?;
            let rhs = (&riemann_zeta(&s, ctx)? * &dirichlet_beta(&s, ctx)?).scale(&Float::with_val(p, 4));
            Ok((&lhs - &rhs).abs_f64() / rhs.abs_f64())
        })(),
        tol,
    );
    push(
        "laurent_k1_is_twice_euler_gamma",
        laurent_closed_form(1, ctx).map(|d| (d.constant - euler_gamma(p) * 2u32).abs().to_f64()),
        tol,
    );
    push("theta_inversion", check_theta(2.0, ctx).map(|r| r.rel_err_f64()), tol);
    push("ferrar_classic", check_ferrar_classic(1.5, ctx).map(|r| r.rel_err_f64()), tol);
    let all = checks.iter().all(|c| c.pass);
    let text: String = checks
        .iter()
        .map(|c| format!("{:<38} {:<14} {}\n", c.name, c.error, if c.pass { "PASS" } else { "FAIL" }))
        .collect();
    let body = match out.format {
        Format::Json => to_json(&checks)?,
        Format::Text => text.clone(),
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                checks.iter().map(|c| vec![c.name.to_string(), c.error.clone(), c.pass.to_string()]).collect();
            csv_string(&["name", "error", "pass"].map(String::from), &rows)?
        }
    };
    emit(out, &body, &text)?;
    Ok(all)
}
