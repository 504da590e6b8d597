//! Scenario files and the command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::affweyl::{
    admissible_set, basic_element, is_straight, length, newton_point, pairing_2rho, AffineElement,
    CyclicShift,
};
use crate::brauer::{ValidationReport, Violation};
use crate::coweight::{balance_weights, Coweight};
use crate::criteria::{
    check_irreducibility, check_lau, check_main_with, check_nonempty, check_quasicompact,
    check_quasicompact_subset, component_count, default_irreducibility_places, find_blocking,
    find_blocking_all, full_report, validate_scenario, Scenario, ScenarioSpec, Variant, Verdict,
};
use crate::error::Error;
use crate::isospace::{summarize, IsoSpaceSpec};
use crate::newton::{b_set, basic_point, shapiro_product};

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "SHTUKA_CRIT_THREADS";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub scenario: ScenarioSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commands: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedScenario {
    pub file: ScenarioFile,
    pub scenario: Scenario,
    pub validation: ValidationReport,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => write!(out, "/{index}").unwrap(),
            Segment::Map { key } => write!(out, "/{key}").unwrap(),
            Segment::Enum { variant } => write!(out, "/{variant}").unwrap(),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Deserializes JSON, reporting failures at their JSON pointer.
pub fn from_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T, Vec<Violation>> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let value: T = serde_path_to_error::deserialize(de).map_err(|e| {
        vec![Violation {
            path: pointer(e.path()),
            message: e.inner().to_string(),
        }]
    })?;
    Ok(value)
}

const SCENARIO_COMMANDS: &[&str] = &[
    "validate",
    "nonempty",
    "lau",
    "properness",
    "quasicompact",
    "irreducibility",
    "components",
    "degeneration",
    "report",
];

/// Structural parse plus validation report; the scenario may still be invalid.
pub fn parse_scenario_lenient(bytes: &[u8]) -> Result<ParsedScenario, Vec<Violation>> {
    let file: ScenarioFile = from_json(bytes)?;
    let mut pre = Vec::new();
    if file.schema_version != SCHEMA_VERSION {
        pre.push(Violation {
            path: "/schema_version".into(),
            message: format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                file.schema_version
            ),
        });
    }
    for (k, c) in file.commands.iter().enumerate() {
        let head = c.split_whitespace().next().unwrap_or("");
        if !SCENARIO_COMMANDS.contains(&head) {
            pre.push(Violation {
                path: format!("/commands/{k}"),
                message: format!("unknown command {head:?}"),
            });
        }
    }
    if !pre.is_empty() {
        return Err(pre);
    }
    let scenario = Scenario::from_spec(&file.scenario).map_err(|e| {
        vec![Violation {
            path: "/scenario/legs".into(),
            message: e.to_string(),
        }]
    })?;
    let mut validation = validate_scenario(&scenario);
    for v in &mut validation.violations {
        v.path = format!("/scenario{}", v.path);
    }
    Ok(ParsedScenario {
        file,
        scenario,
        validation,
    })
}

/// Fully validated scenario file, or every problem found with its JSON path.
pub fn parse_scenario(bytes: &[u8]) -> Result<ParsedScenario, Vec<Violation>> {
    let p = parse_scenario_lenient(bytes)?;
    if p.validation.ok {
        Ok(p)
    } else {
        Err(p.validation.violations)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "shtuka-crit",
    version,
    about = "Exact criteria for moduli of D^×-shtukas"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra and scenario for consistency.
    Validate,
    /// Degree condition for a nonempty moduli space.
    Nonempty,
    /// Lau's properness inequality, for every 0 < m < d.
    Lau,
    /// Properness criterion over subsets Y of Ram(D).
    Properness {
        #[arg(long, value_enum, default_value = "theorem")]
        variant: VariantArg,
        /// Try every subset Y instead of the worst one.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Torsion-order condition on subsets of Ram(D).
    Quasicompact {
        /// Check a single subset Y of Ram(D) instead.
        #[arg(long, value_delimiter = ',')]
        places: Option<Vec<String>>,
    },
    /// Irreducibility test from the divisor forced by Y ⊂ Ram(D).
    Irreducibility {
        #[arg(long, value_delimiter = ',')]
        places: Option<Vec<String>>,
    },
    /// Number of connected components.
    Components,
    /// Inequality chain for degenerations, per leg placement.
    Degeneration {
        /// Search every placement of legs at ramified places.
        #[arg(long)]
        all_placements: bool,
        #[arg(long)]
        placement: Option<String>,
    },
    /// Every criterion, in one document.
    Report,
    /// Run the commands listed in the scenario file.
    Batch,
    /// Balance minuscule weights e_i into an S_d-orbit sum s·(1,…,1).
    Balance {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<usize>,
    },
    /// Classify a simple (D,φ)-space and localize it.
    Isospace {
        #[arg(long)]
        file: PathBuf,
    },
    /// The admissible set of λ with lengths and Newton points.
    Adm(LambdaArgs),
    /// The Newton points dominated by λ.
    Newton(LambdaArgs),
    /// Straightness of a tuple under a cyclic shift.
    Straight {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, default_value_t = 1)]
        step: usize,
    },
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub lambda: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Intro,
    Theorem,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BalanceDiverged(_) | Error::Overflow(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn violations_error(vs: &[Violation]) -> CliError {
    CliError::Input(
        vs.iter()
            .map(|v| format!("{}: {}", v.path, v.message))
            .collect::<Vec<_>>()
            .join("\n"),
    )
}

/// A rendered command result.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub exit: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            exit: 0,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Internal(e.to_string()))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_scenario(path: Option<&Path>) -> Result<ParsedScenario, CliError> {
    let path = path.ok_or_else(|| CliError::Input("--scenario FILE is required".into()))?;
    parse_scenario_lenient(&read(path)?).map_err(|v| violations_error(&v))
}

fn require_valid(p: &ParsedScenario) -> Result<(), CliError> {
    if p.validation.ok {
        Ok(())
    } else {
        Err(violations_error(&p.validation.violations))
    }
}

fn show_rational_opt(x: &Option<crate::exactq::Rational>) -> String {
    x.as_ref().map_or_else(|| "-".into(), ToString::to_string)
}

pub fn render_verdict(v: &Verdict) -> String {
    let status = match v.status {
        crate::criteria::Status::Holds => "holds",
        crate::criteria::Status::Fails => "fails",
        crate::criteria::Status::Inapplicable => "inapplicable",
    };
    let mut s = format!("{}: {status}\n  {}\n", v.criterion, v.explanation);
    for w in &v.witnesses {
        let m = w.m.map_or_else(|| "-".into(), |m| m.to_string());
        let _ = write!(
            s,
            "  witness m={m} Y={{{}}} lhs={} rhs={}",
            w.places.join(","),
            show_rational_opt(&w.lhs),
            show_rational_opt(&w.rhs)
        );
        if let Some(d) = &w.detail {
            let _ = write!(s, " ({d})");
        }
        s.push('\n');
    }
    s
}

fn render_validation(v: &ValidationReport) -> String {
    if v.ok {
        return "valid\n".into();
    }
    let mut s = "invalid\n".to_string();
    for x in &v.violations {
        let _ = writeln!(s, "  {}: {}", x.path, x.message);
    }
    s
}

fn verdict_output(v: Verdict) -> Result<Output, CliError> {
    let text = render_verdict(&v);
    Ok(Output::ok(to_value(&v)?, text))
}

fn lambda_of(a: &LambdaArgs) -> Result<Coweight, CliError> {
    if a.lambda.len() != a.d {
        return Err(Error::RankMismatch {
            expected: a.d,
            found: a.lambda.len(),
        }
        .into());
    }
    Ok(Coweight::sorted(a.lambda.clone())?)
}

fn scenario_command(cmd: &Command, p: &ParsedScenario) -> Result<Output, CliError> {
    let s = &p.scenario;
    match cmd {
        Command::Validate => {
            let mut out = Output::ok(to_value(&p.validation)?, render_validation(&p.validation));
            out.exit = if p.validation.ok { 0 } else { 1 };
            Ok(out)
        }
        Command::Report => {
            let rep = full_report(s);
            let mut rep_json = to_value(&rep)?;
            if let Value::Object(m) = &mut rep_json {
                if let Some(Value::Object(v)) = m.get_mut("validation") {
                    v.insert("violations".into(), to_value(&p.validation.violations)?);
                }
            }
            let mut text = render_validation(&p.validation);
            for v in rep.verdicts.values() {
                text.push_str(&render_verdict(v));
            }
            for d in &rep.degeneration {
                let _ = write!(text, "[placement {}] ", d.placement);
                text.push_str(&render_verdict(&d.verdict));
            }
            if let Some(c) = rep.component_count {
                let _ = writeln!(text, "components: {c}");
            }
            let mut out = Output::ok(rep_json, text);
            out.exit = if p.validation.ok { 0 } else { 1 };
            Ok(out)
        }
        _ => {
            require_valid(p)?;
            match cmd {
                Command::Nonempty => verdict_output(check_nonempty(s)),
                Command::Lau => verdict_output(check_lau(s)),
                Command::Properness {
                    variant,
                    exhaustive,
                } => {
                    let v = match variant {
                        VariantArg::Intro => Variant::Intro,
                        VariantArg::Theorem => Variant::Theorem,
                    };
                    verdict_output(check_main_with(s, v, *exhaustive))
                }
                Command::Quasicompact { places } => match places {
                    Some(y) => verdict_output(check_quasicompact_subset(s, y)?),
                    None => verdict_output(check_quasicompact(s)),
                },
                Command::Irreducibility { places } => {
                    let y = places
                        .clone()
                        .unwrap_or_else(|| default_irreducibility_places(s));
                    verdict_output(check_irreducibility(s, &y)?)
                }
                Command::Components => {
                    let c = component_count(s)?;
                    Ok(Output::ok(
                        json!({ "component_count": c }),
                        format!("components: {c}\n"),
                    ))
                }
                Command::Degeneration {
                    all_placements,
                    placement,
                } => {
                    if *all_placements {
                        return verdict_output(find_blocking_all(s)?);
                    }
                    let legs = match placement {
                        None => &s.legs,
                        Some(name) => {
                            &s.placements
                                .iter()
                                .find(|q| &q.name == name)
                                .ok_or_else(|| {
                                    CliError::Input(format!("unknown placement {name:?}"))
                                })?
                                .legs
                        }
                    };
                    verdict_output(find_blocking(s, legs))
                }
                _ => Err(CliError::Internal("not a scenario command".into())),
            }
        }
    }
}

fn batch(
    p: &ParsedScenario,
    format: Format,
    scenario: Option<PathBuf>,
) -> Result<Output, CliError> {
    let mut runs = Vec::new();
    let mut text = String::new();
    let mut exit = 0;
    for c in &p.file.commands {
        let mut args: Vec<String> = vec!["shtuka-crit".into()];
        args.extend(c.split_whitespace().map(String::from));
        let cli = Cli::try_parse_from(&args).map_err(|e| CliError::Input(format!("{c:?}: {e}")))?;
        let cli = Cli {
            format,
            scenario: scenario.clone(),
            out: None,
            command: cli.command,
        };
        let (json_out, text_out, code) = match scenario_command(&cli.command, p) {
            Ok(o) => (o.json, o.text, o.exit),
            Err(e) => (
                json!({ "error": e.message() }),
                format!("error: {}\n", e.message()),
                e.exit_code(),
            ),
        };
        exit = exit.max(code);
        let _ = writeln!(text, "$ {c}");
        text.push_str(&text_out);
        runs.push(json!({ "command": c, "exit": code, "output": json_out }));
    }
    Ok(Output {
        json: Value::Array(runs),
        text,
        exit,
    })
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Batch => {
            let p = load_scenario(cli.scenario.as_deref())?;
            require_valid(&p)?;
            batch(&p, cli.format, cli.scenario.clone())
        }
        Command::Balance { d, deltas } => {
            let eps = balance_weights(*d, deltas)?;
            let s = deltas.iter().sum::<usize>() / d;
            let mut text = format!("s = {s}\n");
            for (e, row) in deltas.iter().zip(&eps) {
                let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(text, "e={e}  ({})", row.join(","));
            }
            let delta_rows: Vec<Vec<u8>> = deltas
                .iter()
                .map(|&e| (0..*d).map(|j| u8::from(j < e)).collect())
                .collect();
            Ok(Output::ok(
                json!({ "d": d, "s": s, "deltas": delta_rows, "epsilons": eps }),
                text,
            ))
        }
        Command::Isospace { file } => {
            let spec: IsoSpaceSpec = from_json(&read(file)?).map_err(|v| violations_error(&v))?;
            let sum = summarize(&spec)?;
            let r = &sum.report;
            let mut text = format!(
                "d(Π) = {}\nd(Δ) = {}\ndim = {}\nm = {}\nmultiplicity = {}\n",
                r.d_pi, r.d_delta, r.dim_over_fbar, r.m, r.multiplicity
            );
            for (y, inv) in &r.delta_invariants {
                let _ = writeln!(text, "inv_{y}(Δ) = {inv}");
            }
            for (x, ps) in &sum.places {
                let pieces: Vec<String> = ps
                    .pieces
                    .iter()
                    .map(|p| {
                        format!(
                            "{}: slope {} dim {}",
                            p.y.as_deref().unwrap_or("*"),
                            p.slope,
                            p.dim
                        )
                    })
                    .collect();
                let _ = writeln!(
                    text,
                    "{x}: degree {} congruence {} [{}]",
                    ps.degree,
                    if ps.congruence { "ok" } else { "FAILS" },
                    pieces.join("; ")
                );
            }
            Ok(Output::ok(to_value(&sum)?, text))
        }
        Command::Adm(a) => {
            let lam = lambda_of(a)?;
            let adm = admissible_set(&lam);
            let basic = basic_element(&lam);
            let mut rows: Vec<(u64, &AffineElement)> =
                adm.elements.iter().map(|e| (length(e), e)).collect();
            rows.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(y.1)));
            let mut text = format!("{:<28} {:>6}  newton\n", "element", "length");
            let mut items = Vec::new();
            for (l, e) in rows {
                let nu = newton_point(e);
                let _ = writeln!(text, "{:<28} {:>6}  {nu}", e.to_string(), l);
                items.push(json!({
                    "element": to_value(e)?,
                    "length": l,
                    "newton": to_value(&nu)?,
                    "basic": *e == basic,
                }));
            }
            Ok(Output::ok(
                json!({ "d": a.d, "lambda": lam.entries(), "size": items.len(), "elements": items }),
                text,
            ))
        }
        Command::Newton(a) => {
            let lam = lambda_of(a)?;
            let basic = basic_point(&lam);
            let mut text = String::new();
            let mut items = Vec::new();
            for nu in b_set(&lam).iter().rev() {
                let flag = *nu == basic;
                let _ = writeln!(text, "{nu}{}", if flag { "  basic" } else { "" });
                items.push(json!({ "slopes": to_value(nu)?, "basic": flag }));
            }
            Ok(Output::ok(
                json!({ "d": a.d, "lambda": lam.entries(), "size": items.len(), "b_set": items, "basic": to_value(&basic)? }),
                text,
            ))
        }
        Command::Straight { tuple, step } => {
            let elems: Vec<AffineElement> =
                from_json(&read(tuple)?).map_err(|v| violations_error(&v))?;
            let delta = CyclicShift { step: *step };
            let straight = is_straight(&elems, delta)?;
            let nu = shapiro_product(&elems)?;
            let lengths: Vec<u64> = elems.iter().map(length).collect();
            let pairing = pairing_2rho(&nu);
            let text = format!(
                "straight: {straight}\nlengths: {lengths:?}\nnewton of product: {nu}\n⟨ν,2ρ⟩ = {pairing}\n"
            );
            Ok(Output::ok(
                json!({
                    "straight": straight,
                    "step": step,
                    "lengths": lengths,
                    "product_newton": to_value(&nu)?,
                    "pairing": to_value(&pairing)?,
                }),
                text,
            ))
        }
        cmd => {
            let p = load_scenario(cli.scenario.as_deref())?;
            scenario_command(cmd, &p)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Input(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Parses arguments, runs one command and writes its result. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {}", e.message());
        return e.exit_code();
    }
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(&cli)))
        .unwrap_or_else(|_| Err(CliError::Internal("internal panic".into())));
    match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&out.json).expect("JSON values serialize");
                    s.push('\n');
                    s
                }
                Format::Text => out.text,
            };
            let written = match &cli.out {
                Some(path) => std::fs::write(path, body.as_bytes()),
                None => stdout.write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            out.exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}
