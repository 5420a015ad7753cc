//! `dcdual`: exact duality reports for DC problems on the real line.
//!
//! Exit codes: 0 success, 1 a property or expectation failed, 2 bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dcdual::conjcalc::{eco_hull, fenchel_conjugate, is_econvex};
use dcdual::extreal::parse_rational;
use dcdual::generate::{corpus, Variant};
use dcdual::oracle::{approx_member, approx_value, reverify, GridSpec, MemberSet, Quantity};
use dcdual::problem::{read_problem_file, ProblemFile};
use dcdual::report::{analyze, run_suite};
use dcdual::witness::Pair;
use dcdual::duals::DCProblem;
use dcdual::{Error, Rational};
use serde_json::json;

#[derive(Parser)]
#[command(name = "dcdual", version, about = "Exact duality analysis for DC problems on the real line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal values, characterization rays and duality verdicts.
    Analyze {
        /// Problem file (JSON)
        file: PathBuf,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        /// Restrict verdicts to one pair: L, bar or fl.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<Pair>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the property suite on problem files, directories of them, or a
    /// generated corpus.
    Verify {
        /// Problem files or directories
        paths: Vec<PathBuf>,
        /// Generate instances instead: general, econvex or bounded.
        #[arg(long)]
        generate: Option<String>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_constraints: usize,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Print the conjugate, domain and e-convex hull of one function.
    Conjugate {
        /// Problem file (JSON)
        file: PathBuf,
        /// f, g, or h<i> (constraints counted from 1).
        #[arg(long, default_value = "f")]
        func: String,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
    /// Grid brackets for optimal values, or a grid membership test.
    Oracle {
        /// Problem file (JSON)
        file: PathBuf,
        /// P, P_e, D_L, D_bar_L, D_FL or D_bar_FL; all when omitted.
        #[arg(long)]
        quantity: Vec<String>,
        /// epi, K, Omega or K'' (needs --beta).
        #[arg(long)]
        member: Option<String>,
        /// Threshold beta of the tested point (0, 0, delta, beta)
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, default_value = "1")]
        delta: String,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args, Clone, Default)]
struct GridArgs {
    /// Grid step, e.g. 1/16.
    #[arg(long)]
    grid_step: Option<String>,
    /// x range as lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    grid_range: Option<String>,
    /// Range of each dual coordinate as lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    w_range: Option<String>,
    /// Largest multiplier on the grid
    #[arg(long)]
    lambda_max: Option<String>,
}

fn parse_pair(s: &str) -> Result<Pair, String> {
    match s {
        "L" | "l" => Ok(Pair::Lagrange),
        "bar" => Ok(Pair::CConjugate),
        "fl" | "FL" => Ok(Pair::FenchelLagrange),
        _ => Err(format!("unknown pair {s:?} (expected L, bar or fl)")),
    }
}

fn parse_range(s: &str) -> Result<(Rational, Rational), Error> {
    let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("range {s:?} must be lo,hi")))?;
    Ok((parse_rational(a.trim())?, parse_rational(b.trim())?))
}

impl GridArgs {
    /// Default grid, then the file's overrides, then the flags.
    fn resolve(&self, file: Option<&ProblemFile>) -> Result<GridSpec, Error> {
        let base = match file {
            Some(f) => f.grid(&GridSpec::default())?,
            None => GridSpec::default(),
        };
        let x_range = self.grid_range.as_deref().map(parse_range).transpose()?.unwrap_or(base.x_range);
        let w_range = self.w_range.as_deref().map(parse_range).transpose()?.unwrap_or(base.w_range);
        let lambda_max = self.lambda_max.as_deref().map(parse_rational).transpose()?.unwrap_or(base.lambda_max);
        let step = self.grid_step.as_deref().map(parse_rational).transpose()?.unwrap_or(base.step);
        GridSpec::new(x_range, w_range, lambda_max, step)
    }
}

enum Failure {
    Input(Error),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn load(path: &Path) -> Result<(ProblemFile, DCProblem), Error> {
    let file = read_problem_file(path)?;
    let p = file.problem().map_err(|e| match e {
        Error::Parse(_) => e,
        other => Error::Invalid(format!("{}: {other}", path.display())),
    })?;
    Ok((file, p))
}

fn run_analyze(file: &Path, json: bool, pair: Option<Pair>, grid: &GridArgs) -> Result<(), Failure> {
    let (pf, p) = load(file)?;
    let spec = grid.resolve(Some(&pf))?;
    let mut report = analyze(&p, pair, &spec)?;
    report.name = pf.name.clone().or_else(|| Some(file.display().to_string()));
    if json {
        print_json(&report);
    } else {
        print!("{report}");
    }
    if report.all_checks_pass() {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut out = vec![];
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry.map_err(|e| Error::Parse(e.to_string()))?.path();
        if path.is_dir() {
            out.extend(json_files(&path)?);
        } else if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    paths: &[PathBuf],
    generate: Option<&str>,
    count: usize,
    seed: u64,
    max_constraints: usize,
    json: bool,
    grid: &GridArgs,
) -> Result<(), Failure> {
    let mut instances: Vec<(String, Option<ProblemFile>, DCProblem)> = vec![];
    for path in paths {
        let files = if path.is_dir() { json_files(path)? } else { vec![path.clone()] };
        for f in files {
            let (pf, p) = load(&f)?;
            instances.push((f.display().to_string(), Some(pf), p));
        }
    }
    if let Some(variant) = generate {
        let variant: Variant = variant.parse()?;
        for (i, p) in corpus(seed, count, variant, max_constraints).into_iter().enumerate() {
            instances.push((format!("generated seed {seed} #{i}"), None, p));
        }
    }
    if instances.is_empty() {
        return Err(Error::Invalid("nothing to verify: pass files, directories or --generate".into()).into());
    }
    let mut results = vec![];
    let mut checked = 0;
    let mut failed = 0;
    for (name, pf, p) in &instances {
        let spec = grid.resolve(pf.as_ref())?;
        let out = run_suite(p, pf.as_ref(), &spec);
        checked += out.checked;
        if !out.failures.is_empty() {
            failed += 1;
        }
        if !json {
            if out.failures.is_empty() {
                println!("ok   {name} ({} checks)", out.checked);
            } else {
                for fl in &out.failures {
                    println!("FAIL {name}: {}: {}", fl.property, fl.detail);
                }
            }
        }
        results.push(json!({"instance": name, "checked": out.checked, "failures": out.failures}));
    }
    if json {
        print_json(&json!({"instances": results, "checked": checked, "failed_instances": failed}));
    } else {
        println!("verified {} instances, {checked} checks, {failed} failing instances", instances.len());
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn run_conjugate(file: &Path, func: &str, json: bool) -> Result<(), Failure> {
    let (_, p) = load(file)?;
    let target = match func {
        "f" => p.f.clone(),
        "g" => p.g.clone(),
        h => {
            let idx: usize = h
                .strip_prefix('h')
                .and_then(|i| i.parse().ok())
                .filter(|i| *i >= 1 && *i <= p.num_constraints())
                .ok_or_else(|| Error::Invalid(format!("--func must be f, g or h1..h{}", p.num_constraints())))?;
            p.constraints[idx - 1].clone()
        }
    };
    let star = fenchel_conjugate(&target);
    let eco = eco_hull(&target);
    let dom = target.domain_hull().map(|d| d.to_string()).unwrap_or_else(|| "empty".into());
    let dom_star = star.domain_hull().map(|d| d.to_string()).unwrap_or_else(|| "empty".into());
    if json {
        print_json(&json!({
            "function": func,
            "value": target,
            "domain": dom,
            "conjugate": star,
            "conjugate_domain": dom_star,
            "eco": eco,
            "econvex": is_econvex(&target),
        }));
    } else {
        println!("{func}: {target}");
        println!("dom {func}: {dom}");
        println!("{func}*: {star}");
        println!("dom {func}*: {dom_star}");
        println!("{func}^c(x*, y*, alpha) = {func}*(x*) when y* x < alpha on dom {func}, +inf otherwise");
        println!("eco {func}: {eco}");
        println!("e-convex: {}", is_econvex(&target));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_oracle(
    file: &Path,
    quantities: &[String],
    member: Option<&str>,
    beta: Option<&str>,
    delta: &str,
    json: bool,
    grid: &GridArgs,
) -> Result<(), Failure> {
    let (pf, p) = load(file)?;
    let spec = grid.resolve(Some(&pf))?;
    if let Some(set) = member {
        let set: MemberSet = set.parse()?;
        let beta = parse_rational(beta.ok_or_else(|| Error::Invalid("--member needs --beta".into()))?)?;
        let delta = parse_rational(delta)?;
        let r = approx_member(&p, set, &beta, &delta, &spec)?;
        let verified = reverify(&p, &r)?;
        if json {
            print_json(&json!({"report": r, "witnesses_verified": verified}));
        } else {
            let kind = if r.conclusive { "conclusive" } else { "presumptive" };
            println!("member: {} ({kind}), {} witnesses, re-verified: {verified}", r.member, r.witnesses.len());
            for w in r.witnesses.iter().take(5) {
                println!("  {}", serde_json::to_string(w).expect("serializable"));
            }
        }
        return if verified { Ok(()) } else { Err(Failure::Violation) };
    }
    let qs: Vec<Quantity> = if quantities.is_empty() {
        Quantity::ALL.to_vec()
    } else {
        quantities.iter().map(|q| q.parse()).collect::<Result<_, _>>()?
    };
    let brackets = qs.into_iter().map(|q| approx_value(&p, q, &spec)).collect::<Result<Vec<_>, _>>()?;
    if json {
        print_json(&json!({"grid": spec, "brackets": brackets}));
    } else {
        for b in &brackets {
            println!("{b}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { file, json, pair, grid } => run_analyze(file, *json, *pair, grid),
        Command::Verify { paths, generate, count, seed, max_constraints, json, grid } => {
            run_verify(paths, generate.as_deref(), *count, *seed, *max_constraints, *json, grid)
        }
        Command::Conjugate { file, func, json } => run_conjugate(file, func, *json),
        Command::Oracle { file, quantity, member, beta, delta, json, grid } => {
            run_oracle(file, quantity, member.as_deref(), beta.as_deref(), delta, *json, grid)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
