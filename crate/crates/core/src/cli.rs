//! Command-line front end. Every subcommand produces a [`RunReport`]
//! (or a CSV table for `bounds`); the binary only prints and exits.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classical::{self, ClassicalCode, CodeParams};
use crate::error::{Error, Result};
use crate::lift::{self, QuantumCodeBasis};
use crate::{automorph, bounds, combinat, erasure, projector, verifier};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const CONVENTION: &str = "n = 4k+2l+3; from n: l = ((n-3)/2) mod 2, k = (n-3-2l)/4; \
bit strings are printed MSB-left (position 0 first)";

#[derive(Debug, Parser)]
#[command(name = "nacodes", version, about = "Build and verify nonadditive ((4k+2l+3, M, 2)) codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the classical code and the quantum basis kets.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Also write codewords.txt, kets.txt and kets.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Exact Knill-Laflamme verification of the family code or of a
    /// user-supplied classical code.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Newline-delimited classical code to lift and verify.
        #[arg(long, conflicts_with_all = ["n", "k", "l"])]
        input: Option<PathBuf>,
        /// Also report the rank of the span of all weight-<=1 error images.
        #[arg(long)]
        span_rank: bool,
    },
    /// Build the Pauli-sum projector and check it exactly.
    Projector {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Include the comparison against the alternative closed form.
        #[arg(long)]
        audit: bool,
        /// Include every Pauli term in the report.
        #[arg(long)]
        export: bool,
    },
    /// Sweep `(X^n)^b Z^f ∘ π` candidates and the non-Pauli counterexamples.
    Automorph {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = 10)]
        perm_samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare code sizes with the upper bound and known families.
    Bounds {
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = 25)]
        max_n: u64,
    },
    /// Erase one qubit, recover, and measure fidelity.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only this site (default: every site).
        #[arg(long)]
        site: Option<usize>,
        /// Run the two-ket basis that violates the detection conditions.
        #[arg(long, conflicts_with_all = ["n", "k", "l"])]
        control: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Block length (odd, >= 3).
    #[arg(long, conflicts_with_all = ["k", "l"])]
    pub n: Option<u64>,
    #[arg(long, requires = "l")]
    pub k: Option<u64>,
    #[arg(long, requires = "k")]
    pub l: Option<u8>,
    /// Local dimension.
    #[arg(long = "dim", default_value_t = 2)]
    pub dim: u32,
}

impl CodeArgs {
    pub fn params(&self) -> Result<CodeParams> {
        match (self.n, self.k, self.l) {
            (Some(n), _, _) => CodeParams::from_n_dim(n, self.dim),
            (None, Some(k), Some(l)) => CodeParams::new(k, l, self.dim),
            _ => Err(Error::InvalidParams("give either --n or both --k and --l".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with_all = ["format", "csv", "text"])]
    pub json: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, conflicts_with_all = ["format", "text"])]
    pub csv: bool,
    /// Shorthand for `--format text`.
    #[arg(long, conflicts_with = "format")]
    pub text: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        match (self.format, self.csv, self.text) {
            (Some(f), _, _) => f,
            (None, true, _) => Format::Csv,
            (None, _, true) => Format::Text,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

/// Schema shared by every subcommand. `timing_ms` is the only field that
/// may differ between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: Value,
    pub convention: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub witnesses: Vec<Value>,
    pub result: Value,
    pub timing_ms: u128,
}

impl RunReport {
    fn new(subcommand: &'static str, parameters: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters,
            convention: CONVENTION,
            checks: Vec::new(),
            pass: false,
            witnesses: Vec::new(),
            result: Value::Null,
            timing_ms: 0,
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    fn finish(mut self, started: Instant) -> Self {
        self.pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        self.timing_ms = started.elapsed().as_millis();
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.subcommand, self.parameters);
        for c in &self.checks {
            let _ = writeln!(out, "{:<28} {}  {}", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "witness {w}");
        }
        let _ = writeln!(out, "overall {}", if self.pass { "pass" } else { "FAIL" });
        out
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let out = match &cli.command {
        Command::Construct { out, .. }
        | Command::Verify { out, .. }
        | Command::Projector { out, .. }
        | Command::Automorph { out, .. }
        | Command::Bounds { out, .. }
        | Command::Simulate { out, .. } => out.clone(),
    };
    let format = out.format();
    let body = || dispatch(&cli.command, format);
    let result = match out.jobs {
        Some(0) => return Outcome::usage("--jobs must be at least 1\n"),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(body),
            Err(e) => return Outcome::usage(format!("cannot build thread pool: {e}\n")),
        },
        None => body(),
    };
    match result {
        Ok(o) => o,
        Err(e) => {
            let code = match e {
                Error::Degenerate(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn dispatch(cmd: &Command, format: Format) -> Result<Outcome> {
    let started = Instant::now();
    match cmd {
        Command::Construct { code, out_dir, .. } => {
            let params = code.params()?;
            cmd_construct(&params, format, out_dir.as_deref(), started)
        }
        Command::Verify { code, input, span_rank, .. } => {
            let report = match input {
                Some(path) => cmd_verify_input(path, *span_rank, started)?,
                None => cmd_verify(&code.params()?, *span_rank, started)?,
            };
            emit(report, format)
        }
        Command::Projector { code, audit, export, .. } => {
            emit(cmd_projector(&code.params()?, *audit, *export, started)?, format)
        }
        Command::Automorph { code, perm_samples, seed, .. } => {
            emit(cmd_automorph(&code.params()?, *perm_samples, *seed, started)?, format)
        }
        Command::Bounds { max_n, .. } => cmd_bounds(*max_n, format, started),
        Command::Simulate { code, trials, seed, site, control, .. } => {
            let report = if *control {
                cmd_simulate_control(*trials, *seed, *site, started)?
            } else {
                cmd_simulate(&code.params()?, *trials, *seed, *site, started)?
            };
            emit(report, format)
        }
    }
}

fn emit(report: RunReport, format: Format) -> Result<Outcome> {
    let stdout = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Csv => {
            return Ok(Outcome::usage(format!(
                "--format csv is only available for bounds, not {}\n",
                report.subcommand
            )))
        }
    };
    Ok(Outcome { code: report.exit_code(), stdout, stderr: String::new() })
}

fn params_json(p: &CodeParams) -> Value {
    json!({ "k": p.k, "l": p.l, "n": p.n(), "D": p.dim })
}

pub fn cmd_construct(
    params: &CodeParams,
    format: Format,
    out_dir: Option<&std::path::Path>,
    started: Instant,
) -> Result<Outcome> {
    let code = classical::full_code(params)?;
    let basis = QuantumCodeBasis::from_params(params)?;
    let words_text = code.to_text();
    let kets_text = basis.to_text();
    let kets_json: Vec<lift::KetJson> = basis.kets().iter().map(|k| k.to_json()).collect();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("codewords.txt"), &words_text)?;
        std::fs::write(dir.join("kets.txt"), &kets_text)?;
        std::fs::write(dir.join("kets.json"), serde_json::to_string_pretty(&kets_json).expect("serializes") + "\n")?;
    }
    let m = combinat::codespace_size(params);
    let mut report = RunReport::new("construct", params_json(params));
    let diag = classical::pairing_admissible(&code);
    report.check("pairing_condition", diag.admissible, diag.note.clone());
    report.check("basis_size", m == basis.len().into(), format!("{} kets, M = {m}", basis.len()));
    report.result = json!({
        "M": m.to_string(),
        "codewords": code.words().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "kets": kets_json,
    });
    let report = report.finish(started);
    match format {
        Format::Text => {
            let stdout = format!("{words_text}\n{kets_text}");
            Ok(Outcome { code: report.exit_code(), stdout, stderr: String::new() })
        }
        _ => emit(report, format),
    }
}

fn kl_checks(report: &mut RunReport, kl: &verifier::KlReport) {
    report.check(
        "knill_laflamme",
        kl.total_offending == 0,
        format!(
            "{} weight-1 errors, {} arithmetic, {} offending entries",
            kl.errors_checked, kl.arithmetic, kl.total_offending
        ),
    );
    report.check(
        "gram_scaled_identity",
        kl.gram_scale.is_some(),
        format!("Gram = {}·I", kl.gram_scale.as_deref().unwrap_or("?")),
    );
    report.check("nondegenerate", kl.nondegenerate, "every c_E is zero");
    for w in &kl.witnesses {
        report.witnesses.push(serde_json::to_value(w).expect("serializes"));
    }
}

pub fn cmd_verify(params: &CodeParams, span_rank: bool, started: Instant) -> Result<RunReport> {
    let mut report = RunReport::new("verify", params_json(params));
    let m = combinat::codespace_size(params);
    let mut result = serde_json::Map::new();
    if params.dim == 2 {
        let code = classical::full_code(params)?;
        let diag = classical::pairing_admissible(&code);
        report.check("pairing_condition", diag.admissible, diag.note.clone());
        result.insert("classical".into(), serde_json::to_value(&diag).expect("serializes"));
    } else {
        // Construction fails outright on an orbit collision.
        report.check("orbit_disjoint", true, format!("{} orbits of size {}", m, params.dim));
    }
    let basis = QuantumCodeBasis::from_params(params)?;
    report.check("basis_size", m == basis.len().into(), format!("{} kets, M = {m}", basis.len()));
    let kl = verifier::verify_distance2(&basis);
    kl_checks(&mut report, &kl);
    if span_rank {
        let r = verifier::error_span_rank(&basis)?;
        result.insert("error_span_rank".into(), json!(r));
        result.insert("ambient_dimension".into(), json!(1u64 << basis.n()));
    }
    result.insert("M".into(), json!(m.to_string()));
    result.insert("kl".into(), serde_json::to_value(&kl).expect("serializes"));
    report.result = Value::Object(result);
    Ok(report.finish(started))
}

pub fn cmd_verify_input(path: &std::path::Path, span_rank: bool, started: Instant) -> Result<RunReport> {
    let text = std::fs::read_to_string(path)?;
    let code = ClassicalCode::from_text(&text)?;
    let mut report = RunReport::new("verify", json!({ "input": path.display().to_string(), "n": code.n(), "D": 2 }));
    let diag = classical::pairing_admissible(&code);
    report.check("pairing_condition", diag.admissible, diag.note.clone());
    let mut result = serde_json::Map::new();
    result.insert("classical".into(), serde_json::to_value(&diag).expect("serializes"));
    if let Some(w) = &diag.witness {
        report.witnesses.push(json!({ "kind": "classical_distance", "pair": w }));
    }
    if let Some(m) = &diag.missing_complement_of {
        report.witnesses.push(json!({ "kind": "missing_complement", "word": m.to_string() }));
    }
    if diag.admissible {
        let basis = lift::lift_qubit(&code)?;
        let kl = verifier::verify_distance2(&basis);
        kl_checks(&mut report, &kl);
        if span_rank {
            result.insert("error_span_rank".into(), json!(verifier::error_span_rank(&basis)?));
        }
        result.insert("kets".into(), json!(basis.to_text().lines().collect::<Vec<_>>()));
        result.insert("kl".into(), serde_json::to_value(&kl).expect("serializes"));
    }
    report.result = Value::Object(result);
    Ok(report.finish(started))
}

pub fn cmd_projector(params: &CodeParams, audit: bool, export: bool, started: Instant) -> Result<RunReport> {
    let mut report = RunReport::new("projector", params_json(params));
    let pr = projector::projector_selfcheck(params)?;
    for c in &pr.checks {
        report.check(c.name, c.pass, c.detail.clone());
    }
    let mut result = serde_json::Map::new();
    result.insert("selfcheck".into(), serde_json::to_value(&pr).expect("serializes"));
    if audit {
        // Informational: disagreements are reported, never failed.
        let table = projector::audit_printed_formula(params);
        result.insert("audit".into(), serde_json::to_value(&table).expect("serializes"));
    }
    if export {
        let p = projector::build_projector(params)?;
        result.insert("terms".into(), serde_json::to_value(p.to_export()).expect("serializes"));
    }
    report.result = Value::Object(result);
    Ok(report.finish(started))
}

pub fn cmd_automorph(params: &CodeParams, perm_samples: usize, seed: u64, started: Instant) -> Result<RunReport> {
    let mut report = RunReport::new(
        "automorph",
        json!({ "k": params.k, "l": params.l, "n": params.n(), "D": params.dim, "perm_samples": perm_samples, "seed": seed }),
    );
    let sweep = automorph::verify_parity_law(params, perm_samples, seed)?;
    let (kept, dropped) =
        sweep.permutations.iter().fold((0, 0), |(k, d), p| (k + p.preserved, d + p.candidates - p.preserved));
    report.check(
        "parity_law",
        sweep.parity_law_holds,
        format!("{} permutations; preserved {kept}, not preserved {dropped}", sweep.permutations.len()),
    );
    for v in &sweep.violations {
        report.witnesses.push(serde_json::to_value(v).expect("serializes"));
    }
    let mut result = serde_json::Map::new();
    if params.n() as usize <= automorph::MAX_COUNTEREXAMPLE_N {
        let ce = automorph::counterexample_suite(params)?;
        let detail =
            ce.results.iter().map(|r| format!("{} defect {:.3e}", r.name, r.max_defect)).collect::<Vec<_>>().join("; ");
        report.check("non_pauli_counterexamples", ce.all_fail, detail);
        result.insert("counterexamples".into(), serde_json::to_value(&ce).expect("serializes"));
    }
    result.insert(
        "parity_histogram".into(),
        serde_json::to_value(automorph::parity_histogram(&sweep)).expect("serializes"),
    );
    result.insert("sweep".into(), serde_json::to_value(&sweep).expect("serializes"));
    report.result = Value::Object(result);
    Ok(report.finish(started))
}

pub fn bounds_report(max_n: u64, started: Instant) -> Result<(RunReport, Vec<bounds::BoundsRow>)> {
    let rows = bounds::crossover_table(max_n)?;
    let mut report = RunReport::new("bounds", json!({ "max_n": max_n }));
    let over: Vec<u64> = rows.iter().filter(|r| !r.within_bound).map(|r| r.n).collect();
    report.check(
        "within_upper_bound",
        over.is_empty(),
        format!("M <= floor(2^(n-2)(1-1/(n-1))); violations at {over:?}"),
    );
    let under: Vec<u64> = rows.iter().filter(|r| !r.beats_additive).map(|r| r.n).collect();
    report.check("beats_additive", under.is_empty(), format!("M > 2^(n-3); violations at {under:?}"));
    let first_win = rows.iter().find(|r| r.winner == bounds::Winner::ThisFamily).map(|r| r.n);
    let crossover = rows.iter().all(|r| {
        let expect = if r.n < 11 { bounds::Winner::RainsFamily } else { bounds::Winner::ThisFamily };
        r.winner == expect
    });
    report.check("crossover_at_11", crossover, format!("first n with M > 3*2^(n-4): {first_win:?}"));
    report.result = json!({ "rows": rows });
    Ok((report.finish(started), rows))
}

fn cmd_bounds(max_n: u64, format: Format, started: Instant) -> Result<Outcome> {
    let (report, rows) = bounds_report(max_n, started)?;
    match format {
        Format::Csv => {
            Ok(Outcome { code: report.exit_code(), stdout: bounds::table_csv(&rows), stderr: String::new() })
        }
        _ => emit(report, format),
    }
}

fn simulate_checks(report: &mut RunReport, fr: &erasure::FidelityReport) {
    report.check(
        "min_fidelity",
        fr.min_fidelity >= 1.0 - erasure::FIDELITY_TOL,
        format!("min {:.15} mean {:.15} over {} runs", fr.min_fidelity, fr.mean_fidelity, fr.results.len()),
    );
    report.check(
        "recovery_completeness",
        fr.completeness_max_dev < 1e-10,
        format!("max deviation {:.3e}", fr.completeness_max_dev),
    );
    report.check("trace_preserving", fr.trace_max_dev < 1e-12, format!("max deviation {:.3e}", fr.trace_max_dev));
    if let Some(worst) = fr.results.iter().min_by(|a, b| a.fidelity.total_cmp(&b.fidelity)) {
        if worst.fidelity < 1.0 - erasure::FIDELITY_TOL {
            report.witnesses.push(serde_json::to_value(worst).expect("serializes"));
        }
    }
}

pub fn cmd_simulate(
    params: &CodeParams,
    trials: usize,
    seed: u64,
    site: Option<usize>,
    started: Instant,
) -> Result<RunReport> {
    let mut report = RunReport::new(
        "simulate",
        json!({ "k": params.k, "l": params.l, "n": params.n(), "D": params.dim, "trials": trials, "seed": seed, "site": site }),
    );
    let fr = erasure::fidelity_experiment(params, trials, seed, site)?;
    simulate_checks(&mut report, &fr);
    report.result = serde_json::to_value(&fr).expect("serializes");
    Ok(report.finish(started))
}

pub fn cmd_simulate_control(trials: usize, seed: u64, site: Option<usize>, started: Instant) -> Result<RunReport> {
    let mut report = RunReport::new(
        "simulate",
        json!({ "control": true, "n": 5, "D": 2, "trials": trials, "seed": seed, "site": site }),
    );
    let basis = erasure::bad_control_basis()?;
    let fr = erasure::fidelity_experiment_basis("control", &basis, trials, seed, site)?;
    simulate_checks(&mut report, &fr);
    report.result = serde_json::to_value(&fr).expect("serializes");
    Ok(report.finish(started))
}

/// Drop the timing field so two reports can be compared byte for byte.
pub fn strip_timing(json: &str) -> Result<String> {
    let mut v: Value = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(o) = v.as_object_mut() {
        o.remove("timing_ms");
    }
    Ok(serde_json::to_string(&v).expect("serializes"))
}
