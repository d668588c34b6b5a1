//! `bknap`: command-line front end for the bilevel knapsack solvers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use bilevel_knapsack::finite_support::{ComponentSampler, FiniteSupport};
use bilevel_knapsack::harness::{build_reduction, check_slope_identity, ReductionVariant};
use bilevel_knapsack::model::{
    instance_from_json, support_from_json, support_to_json, validate, PiecewiseLinear, SolveStats,
};
use bilevel_knapsack::oracles;
use bilevel_knapsack::rational::{format_rat, parse_rat, Rat};
use bilevel_knapsack::scalar::Scalar;
use bilevel_knapsack::{approx, certain, dp_finite, dp_uniform, finite_support};
use bilevel_knapsack::{Error, Instance, Method, SolveResult};

#[derive(Parser)]
#[command(
    name = "bknap",
    version,
    about = "Solvers for the stochastic bilevel continuous knapsack problem",
    after_help = "Exit codes: 0 success, 1 internal failure or failed check, \
                  2 invalid instance, 3 method/distribution mismatch, 4 I/O or parse error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the expected leader objective and its maximizer.
    Solve(SolveArgs),
    /// Run one of the slow reference oracles.
    Oracle(OracleArgs),
    /// Build a counting-reduction instance and check its slope identity.
    Harness(HarnessArgs),
    /// Check an instance file and report violations.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// certain | finite-support | saa | dp-finite | dp-uniform | approx.
    #[arg(long)]
    method: String,
    /// Profit vector for --method certain, e.g. "3/2,1,-2".
    #[arg(long)]
    c: Option<String>,
    /// Scenario file (JSON) for --method finite-support.
    #[arg(long)]
    support: Option<PathBuf>,
    /// Sample count for --method saa.
    #[arg(long)]
    samples: Option<u64>,
    /// RNG seed for --method saa.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Additive error bound for --method approx.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Working-set refusal threshold in bytes for --method approx.
    #[arg(long)]
    memory_cap: Option<u64>,
    /// Write the objective profile at integer capacities as CSV.
    #[arg(long)]
    profile_out: Option<PathBuf>,
    /// Emit the result as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    which: OracleCommand,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exact expectation by permutation enumeration.
    Perm {
        #[arg(long)]
        instance: PathBuf,
        /// Write the profile at integer capacities as CSV.
        #[arg(long)]
        profile_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Expand componentwise finite distributions into an explicit support.
    Product {
        #[arg(long)]
        instance: PathBuf,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimates of the objective at integer capacities.
    Mc {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Count subsets of the given sizes with sum at most the cap.
    Count {
        /// Comma-separated positive sizes, e.g. "2,3,5".
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        cap: u64,
    },
}

#[derive(Args)]
struct HarnessArgs {
    /// Comma-separated base sizes, e.g. "2,3,5".
    #[arg(long)]
    a_star: String,
    /// Count threshold, must be smaller than the total base size.
    #[arg(long)]
    b_star: u64,
    /// Profit shift in [-1, 1], rational, e.g. "1/2".
    #[arg(long, default_value = "0")]
    tau: String,
    /// finite | continuous.
    #[arg(long, default_value = "finite")]
    variant: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 4 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<Error>() {
        match core {
            Error::InvalidInstance(_) => 2,
            Error::MethodMismatch { .. } => 3,
            Error::Json(_) | Error::Format(_) | Error::ParseRational(_) => 4,
            _ => 1,
        }
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        4
    } else {
        1
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Oracle(args) => run_oracle(args.which),
        Command::Harness(args) => run_harness(args),
        Command::Validate(args) => run_validate(args),
    }
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read instance file {}", path.display()))?;
    Ok(instance_from_json(&text)?)
}

fn parse_rat_list(text: &str, what: &str) -> anyhow::Result<Vec<Rat>> {
    text.split(',')
        .map(|tok| {
            parse_rat(tok.trim())
                .map_err(|_| Error::Format(format!("{what}: cannot parse {tok:?} as a rational")))
        })
        .collect::<Result<_, _>>()
        .map_err(Into::into)
}

fn parse_size_list(text: &str, what: &str) -> anyhow::Result<Vec<u64>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| Error::Format(format!("{what}: cannot parse {tok:?} as an integer")))
        })
        .collect::<Result<_, _>>()
        .map_err(Into::into)
}

fn required<T>(value: Option<T>, flag: &str, method: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| Error::Format(format!("--method {method} requires {flag}")).into())
}

fn run_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let method: Method = args.method.parse::<Method>()?;
    let doc = match method {
        Method::Certain => {
            let c = parse_rat_list(&required(args.c.as_deref(), "--c", "certain")?, "--c")?;
            ResultDoc::from_rat(&certain::solve(&inst, &c)?)
        }
        Method::FiniteSupport => {
            let path = required(args.support.as_deref(), "--support", "finite-support")?;
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read support file {}", path.display()))?;
            let support = FiniteSupport::new(support_from_json(&text)?)?;
            ResultDoc::from_rat(&finite_support::solve(&inst, &support)?)
        }
        Method::Saa => {
            let samples = required(args.samples, "--samples", "saa")?;
            let sampler = ComponentSampler::new(&inst);
            ResultDoc::from_rat(&finite_support::solve_saa(
                &inst,
                &sampler,
                samples as usize,
                args.seed,
            )?)
        }
        Method::DpFinite => ResultDoc::from_rat(&dp_finite::solve(&inst)?),
        Method::DpUniform => ResultDoc::from_f64(&dp_uniform::solve(&inst)?),
        Method::Approx => {
            let eps = required(args.epsilon, "--epsilon", "approx")?;
            let solved = match args.memory_cap {
                Some(cap) => approx::solve_with(&inst, eps, cap)?,
                None => approx::solve(&inst, eps)?,
            };
            ResultDoc::from_f64(&solved)
        }
    };
    if let Some(path) = &args.profile_out {
        write_profile_csv(path, &doc.profile_points)?;
    }
    if args.json {
        println!("{}", doc.to_json());
    } else {
        println!("method: {}", doc.method);
        println!("b_star: {}", doc.b_star_text);
        println!("value: {}", doc.value_text);
        println!(
            "stats: scenarios={} tables={} table_cells={} profile_breakpoints={}",
            doc.stats.scenarios,
            doc.stats.tables,
            doc.stats.table_cells,
            doc.stats.profile_breakpoints
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Solver output shaped for emission.
///
/// JSON field order is alphabetical so that parsing the document into a
/// generic value and pretty-printing it again is byte-identical, which is
/// the contract scripted consumers rely on.  Wall time never appears:
/// identical runs must produce identical bytes.
struct ResultDoc {
    method: &'static str,
    b_star: serde_json::Value,
    value: serde_json::Value,
    b_star_text: String,
    value_text: String,
    breakpoints: Vec<serde_json::Value>,
    values: Vec<serde_json::Value>,
    profile_points: Vec<(u64, f64)>,
    stats: SolveStats,
}

#[derive(serde::Serialize)]
struct ResultJson<'a> {
    b_star: &'a serde_json::Value,
    method: &'a str,
    profile: ProfileJson<'a>,
    stats: StatsJson,
    value: &'a serde_json::Value,
}

#[derive(serde::Serialize)]
struct ProfileJson<'a> {
    breakpoints: &'a [serde_json::Value],
    values: &'a [serde_json::Value],
}

#[derive(serde::Serialize)]
struct StatsJson {
    profile_breakpoints: u64,
    scenarios: u64,
    table_cells: u64,
    tables: u64,
}

fn rat_value(r: &Rat) -> serde_json::Value {
    let text = format_rat(r);
    match text.parse::<i64>() {
        Ok(i) => serde_json::Value::from(i),
        Err(_) => serde_json::Value::from(text),
    }
}

fn f64_value(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or_else(|| serde_json::Value::from(v.to_string()))
}

fn integer_profile<T: Scalar>(profile: &PiecewiseLinear<T>) -> Vec<(u64, f64)> {
    let (_, hi) = profile.domain();
    let total = hi.to_f64_lossy().round() as u64;
    (0..=total)
        .map(|b| {
            let x = T::from_u64(b);
            let y = profile.eval(&x).expect("integer b within [0, A]");
            (b, y.to_f64_lossy())
        })
        .collect()
}

impl ResultDoc {
    fn from_rat(result: &SolveResult<Rat>) -> Self {
        Self {
            method: result.method.as_str(),
            b_star: rat_value(&result.b_star),
            value: rat_value(&result.value),
            b_star_text: format_rat(&result.b_star),
            value_text: format_rat(&result.value),
            breakpoints: result.profile.breakpoints().iter().map(rat_value).collect(),
            values: result.profile.values().iter().map(rat_value).collect(),
            profile_points: integer_profile(&result.profile),
            stats: result.stats.clone(),
        }
    }

    fn from_f64(result: &SolveResult<f64>) -> Self {
        Self {
            method: result.method.as_str(),
            b_star: f64_value(result.b_star),
            value: f64_value(result.value),
            b_star_text: fmt_sig(result.b_star, 12),
            value_text: fmt_sig(result.value, 12),
            breakpoints: result
                .profile
                .breakpoints()
                .iter()
                .map(|v| f64_value(*v))
                .collect(),
            values: result.profile.values().iter().map(|v| f64_value(*v)).collect(),
            profile_points: integer_profile(&result.profile),
            stats: result.stats.clone(),
        }
    }

    fn to_json(&self) -> String {
        let doc = ResultJson {
            b_star: &self.b_star,
            method: self.method,
            profile: ProfileJson {
                breakpoints: &self.breakpoints,
                values: &self.values,
            },
            stats: StatsJson {
                profile_breakpoints: self.stats.profile_breakpoints,
                scenarios: self.stats.scenarios,
                table_cells: self.stats.table_cells,
                tables: self.stats.tables,
            },
            value: &self.value,
        };
        serde_json::to_string_pretty(&doc).expect("result serialization cannot fail")
    }
}

/// Decimal rendering with `sig` significant digits, trailing zeros trimmed.
fn fmt_sig(v: f64, sig: i32) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let prec = (sig - 1 - exp).max(0) as usize;
    let s = format!("{v:.prec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn write_profile_csv(path: &Path, points: &[(u64, f64)]) -> anyhow::Result<()> {
    let mut out = String::from("b,fhat\n");
    for &(b, y) in points {
        out.push_str(&format!("{b},{}\n", fmt_sig(y, 12)));
    }
    fs::write(path, out).with_context(|| format!("cannot write profile {}", path.display()))?;
    Ok(())
}

fn run_oracle(which: OracleCommand) -> anyhow::Result<ExitCode> {
    match which {
        OracleCommand::Perm {
            instance,
            profile_out,
            json,
        } => {
            let inst = load_instance(&instance)?;
            let profile = oracles::permutation_expectation(&inst)?;
            let points = integer_profile(&profile);
            if let Some(path) = &profile_out {
                write_profile_csv(path, &points)?;
            }
            if json {
                let doc = ProfileJson {
                    breakpoints: &profile.breakpoints().iter().map(rat_value).collect::<Vec<_>>(),
                    values: &profile.values().iter().map(rat_value).collect::<Vec<_>>(),
                };
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                for (b, y) in &points {
                    println!("fhat({b}) = {}", fmt_sig(*y, 12));
                }
            }
        }
        OracleCommand::Product { instance, out } => {
            let inst = load_instance(&instance)?;
            let scenarios = oracles::product_expand(&inst, oracles::PRODUCT_GUARD)?;
            let text = support_to_json(&scenarios);
            match out {
                Some(path) => {
                    fs::write(&path, text.as_bytes())
                        .with_context(|| format!("cannot write support {}", path.display()))?;
                    eprintln!("wrote {} scenarios", scenarios.len());
                }
                None => println!("{text}"),
            }
        }
        OracleCommand::Mc {
            instance,
            samples,
            seed,
            json,
        } => {
            let inst = load_instance(&instance)?;
            let bs: Vec<Rat> = (0..=inst.total_size())
                .map(bilevel_knapsack::rational::rat_u64)
                .collect();
            let estimates = oracles::monte_carlo_objective(&inst, &bs, samples, seed)?;
            if json {
                #[derive(serde::Serialize)]
                struct Row {
                    b: u64,
                    mean: f64,
                    std_err: f64,
                }
                let rows: Vec<Row> = estimates
                    .iter()
                    .zip(0..)
                    .map(|(e, b)| Row {
                        b,
                        mean: e.mean,
                        std_err: e.std_err,
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                println!("b,mean,stderr");
                for (b, e) in (0..).zip(&estimates) {
                    println!("{b},{},{}", fmt_sig(e.mean, 12), fmt_sig(e.std_err, 12));
                }
            }
        }
        OracleCommand::Count { sizes, cap } => {
            let sizes = parse_size_list(&sizes, "--sizes")?;
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::Format("--sizes needs positive integers".into()).into());
            }
            println!("{}", oracles::count_knapsack(&sizes, cap));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_harness(args: HarnessArgs) -> anyhow::Result<ExitCode> {
    let a_star = parse_size_list(&args.a_star, "--a-star")?;
    let tau = parse_rat(&args.tau)?;
    let variant = match args.variant.as_str() {
        "finite" => ReductionVariant::Finite,
        "continuous" => ReductionVariant::Continuous,
        other => {
            return Err(Error::Format(format!(
                "unknown variant {other:?}, expected finite or continuous"
            ))
            .into())
        }
    };
    let reduction = build_reduction(&a_star, args.b_star, &tau, variant)?;
    let report = check_slope_identity(&reduction)?;
    if args.json {
        #[derive(serde::Serialize)]
        struct ReportJson {
            closed_form_slope: f64,
            measured_slope: f64,
            pass: bool,
            recovered_count: f64,
            true_count: u128,
            variant: &'static str,
        }
        let doc = ReportJson {
            closed_form_slope: report.closed_form_slope,
            measured_slope: report.measured_slope,
            pass: report.pass,
            recovered_count: report.recovered_count,
            true_count: report.true_count,
            variant: match report.variant {
                ReductionVariant::Finite => "finite",
                ReductionVariant::Continuous => "continuous",
            },
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!(
            "slope at b*+1: measured {} vs closed form {}",
            fmt_sig(report.measured_slope, 12),
            fmt_sig(report.closed_form_slope, 12)
        );
        println!(
            "recovered count {} vs true count {}",
            fmt_sig(report.recovered_count, 12),
            report.true_count
        );
        println!("{}", if report.pass { "pass" } else { "FAIL" });
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_validate(args: ValidateArgs) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let findings = validate(&inst);
    let structural: Vec<_> = findings.iter().filter(|v| v.is_structural()).collect();
    if !structural.is_empty() {
        for v in &structural {
            eprintln!("violation: {v}");
        }
        return Err(Error::InvalidInstance(
            findings.iter().filter(|v| v.is_structural()).cloned().collect(),
        )
        .into());
    }
    for v in &findings {
        eprintln!("{v}");
    }
    println!("ok");
    Ok(ExitCode::SUCCESS)
}
