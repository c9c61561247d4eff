use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bernoulli_minimax::bayes::{bayes_decision, is_minimax_prior, moments, DiscretePrior};
use bernoulli_minimax::classes::{classify, dominate_construction, dominates, DecisionClass};
use bernoulli_minimax::lip::{
    conditional_mutual_information, minimax_affine_constant, printed_affine_constant,
    printed_maximum, solve_lip_ascent, solve_lip_lp, solve_lip_parametric, CONSTANT_NOTE,
};
use bernoulli_minimax::minimax::{solve_minimax_closed, solve_minimax_numeric, MinimaxReport};
use bernoulli_minimax::par::unit_grid;
use bernoulli_minimax::risk::{risk, worst_case_risk, DEFAULT_GRID_N, DEFAULT_REFINE_TOL};
use bernoulli_minimax::verify::{self, VerifyOptions};
use bernoulli_minimax::{Decision, ExtReal, Probability};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bernoulli-minimax",
    version,
    about = "Minimax one-step Bernoulli prediction under KL loss"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Number of grid points (default depends on the subcommand).
    #[arg(long, global = true)]
    grid_n: Option<usize>,

    /// Seed for randomized solvers and checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Numerical tolerance for solvers and membership tests.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Closed,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum LipMethod {
    Lp,
    Parametric,
    Ascent,
}

#[derive(clap::Args)]
struct DecisionArgs {
    /// Estimate after observing x = 0.
    #[arg(long, allow_negative_numbers = true)]
    delta0: f64,
    /// Estimate after observing x = 1.
    #[arg(long, allow_negative_numbers = true)]
    delta1: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Risk curve on a uniform grid plus the worst case.
    Risk(DecisionArgs),
    /// Decision class and admissibility.
    Classify(DecisionArgs),
    /// Construct a dominating rule for an inadmissible decision.
    Dominate(DecisionArgs),
    /// Solve for the minimax rule.
    Minimax {
        #[arg(long, value_enum, default_value_t = Mode::Closed)]
        mode: Mode,
        #[arg(long, default_value_t = 20)]
        refine_iters: usize,
    },
    /// Solve for the latent information prior.
    Lip {
        #[arg(long, value_enum, default_value_t = LipMethod::Lp)]
        method: LipMethod,
        /// Random restarts for the ascent method.
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    /// Information and moment summary of a prior (defaults to the latent information prior).
    Info {
        #[arg(long)]
        prior: Option<PathBuf>,
    },
    /// Run every numerical check, printing one PASS/FAIL line per check.
    Verify {
        /// Reduced problem sizes.
        #[arg(long)]
        fast: bool,
    },
}

/// Error carrying its exit code: 1 for failed checks, 2 for usage and I/O.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

enum Output {
    Json(Value),
    Csv(String),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match run(&cli) {
        Ok(pair) => pair,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
        Output::Csv(s) | Output::Text(s) => s,
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Result<(Output, u8), Failure> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    match &cli.command {
        Command::Risk(d) => cmd_risk(cli, decision(d)?),
        Command::Classify(d) => cmd_classify(cli, decision(d)?),
        Command::Dominate(d) => cmd_dominate(cli, decision(d)?),
        Command::Minimax { mode, refine_iters } => cmd_minimax(cli, *mode, *refine_iters),
        Command::Lip { method, restarts } => cmd_lip(cli, *method, *restarts),
        Command::Info { prior } => cmd_info(cli, prior.as_ref()),
        Command::Verify { fast } => cmd_verify(cli, *fast),
    }
}

fn decision(args: &DecisionArgs) -> Result<Decision, Failure> {
    Decision::new(args.delta0, args.delta1).map_err(|e| usage(format!("invalid decision: {e}")))
}

fn grid_n(cli: &Cli, default: usize, min: usize) -> Result<usize, Failure> {
    let n = cli.grid_n.unwrap_or(default);
    if n < min {
        return Err(usage(format!("--grid-n must be at least {min}")));
    }
    Ok(n)
}

/// Decimal with 15 significant digits; `+inf` for infinity.
fn sig15(x: ExtReal) -> String {
    match x {
        ExtReal::PosInf => "+inf".to_string(),
        ExtReal::Finite(v) => {
            let decimals = if v == 0.0 {
                14
            } else {
                (14 - v.abs().log10().floor() as i32).max(0) as usize
            };
            format!("{v:.decimals$}")
        }
    }
}

fn reject_csv(cli: &Cli, what: &str) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(usage(format!("{what} has no CSV form; use --format json")));
    }
    Ok(())
}

fn cmd_risk(cli: &Cli, d: Decision) -> Result<(Output, u8), Failure> {
    let n = grid_n(cli, DEFAULT_GRID_N, 3)?;
    let grid = unit_grid(n);
    let values: Vec<ExtReal> = grid
        .iter()
        .map(|&t| risk(&d, Probability::new(t).expect("grid in [0, 1]")))
        .collect();
    if cli.format == Format::Csv {
        let mut s = String::from("theta,risk\n");
        for (t, r) in grid.iter().zip(&values) {
            s.push_str(&format!("{},{}\n", sig15(ExtReal::Finite(*t)), sig15(*r)));
        }
        return Ok((Output::Csv(s), 0));
    }
    let wc = worst_case_risk(&d, n, DEFAULT_REFINE_TOL);
    let curve: Vec<Value> = grid
        .iter()
        .zip(&values)
        .map(|(t, r)| json!({ "theta": t, "risk": r }))
        .collect();
    Ok((
        Output::Json(json!({
            "decision": d,
            "grid_n": n,
            "curve": curve,
            "worst_case": wc,
        })),
        0,
    ))
}

fn cmd_classify(cli: &Cli, d: Decision) -> Result<(Output, u8), Failure> {
    let class = classify(&d);
    let class_name = serde_json::to_value(class).expect("serializable");
    if cli.format == Format::Csv {
        let s = format!(
            "delta0,delta1,class,admissible\n{},{},{},{}\n",
            d.d0(),
            d.d1(),
            class_name.as_str().unwrap_or_default(),
            class.is_admissible()
        );
        return Ok((Output::Csv(s), 0));
    }
    Ok((
        Output::Json(json!({
            "decision": d,
            "class": class,
            "admissible": class.is_admissible(),
        })),
        0,
    ))
}

fn cmd_dominate(cli: &Cli, d: Decision) -> Result<(Output, u8), Failure> {
    reject_csv(cli, "dominate")?;
    let n = grid_n(cli, DEFAULT_GRID_N, 3)?;
    let class = classify(&d);
    let report = match class {
        DecisionClass::CGreater => {
            let c = dominate_construction(&d).map_err(|e| Failure {
                code: 1,
                message: format!("construction failed: {e}"),
            })?;
            let certified = c.certificate.f > 0.0 && c.certificate.certifies_positive();
            let grid_ok = dominates(&c.dominating, &d, n);
            let verdict = if certified && grid_ok {
                "DOMINATES"
            } else {
                "CERTIFICATE_FAILED"
            };
            let code = if certified && grid_ok { 0 } else { 1 };
            let doc = json!({
                "decision": d,
                "class": class,
                "mu_bounds": c.bounds,
                "mu": c.mu,
                "dominating": c.dominating,
                "certificate": {
                    "f": c.certificate.f,
                    "g": c.certificate.g,
                    "h": c.certificate.h,
                    "margin": c.certificate.margin(),
                },
                "grid_n": n,
                "grid_check": grid_ok,
                "verdict": verdict,
            });
            return Ok((Output::Json(doc), code));
        }
        DecisionClass::BoundaryOther => {
            let grid_ok = dominates(&Decision::MLE, &d, n);
            let verdict = if grid_ok {
                "DOMINATED_BY_MLE"
            } else {
                "CERTIFICATE_FAILED"
            };
            let doc = json!({
                "decision": d,
                "class": class,
                "dominating": Decision::MLE,
                "grid_n": n,
                "grid_check": grid_ok,
                "verdict": verdict,
            });
            return Ok((Output::Json(doc), if grid_ok { 0 } else { 1 }));
        }
        _ => json!({
            "decision": d,
            "class": class,
            "verdict": "NOT_APPLICABLE",
            "reason": "decision is admissible; no dominating rule exists",
        }),
    };
    Ok((Output::Json(report), 0))
}

fn minimax_json(r: &MinimaxReport) -> Value {
    json!({
        "decision": r.decision,
        "value": r.value,
        "method": r.method,
        "worst_theta": r.worst_theta,
    })
}

fn cmd_minimax(cli: &Cli, mode: Mode, refine_iters: usize) -> Result<(Output, u8), Failure> {
    let report = match mode {
        Mode::Closed => solve_minimax_closed(),
        Mode::Numeric => solve_minimax_numeric(grid_n(cli, 101, 11)?, refine_iters),
    };
    if cli.format == Format::Csv {
        let s = format!(
            "delta0,delta1,value\n{},{},{}\n",
            sig15(ExtReal::Finite(report.decision.d0())),
            sig15(ExtReal::Finite(report.decision.d1())),
            sig15(ExtReal::Finite(report.value))
        );
        return Ok((Output::Csv(s), 0));
    }
    Ok((Output::Json(minimax_json(&report)), 0))
}

fn constants() -> Value {
    json!({
        "derived_affine_constant": minimax_affine_constant(),
        "printed_affine_constant": printed_affine_constant(),
        "printed_maximum": printed_maximum(),
    })
}

fn prior_csv(prior: &DiscretePrior) -> String {
    let mut s = String::from("atom,weight\n");
    for a in prior.atoms() {
        s.push_str(&format!(
            "{},{}\n",
            sig15(ExtReal::Finite(a.theta.get())),
            sig15(ExtReal::Finite(a.weight))
        ));
    }
    s
}

fn cmd_lip(cli: &Cli, method: LipMethod, restarts: usize) -> Result<(Output, u8), Failure> {
    let solver_error = |e: bernoulli_minimax::Error| Failure {
        code: 1,
        message: format!("solver failed: {e}"),
    };
    let (prior, details) = match method {
        LipMethod::Lp => {
            let n = grid_n(cli, 1001, 2)?;
            let sol = solve_lip_lp(&unit_grid(n)).map_err(solver_error)?;
            let details = json!({
                "method": "lp",
                "grid_n": n,
                "objective": sol.objective,
                "alternative_optima": sol.alternative_optima,
                "pivots": sol.pivots,
            });
            (sol.prior, details)
        }
        LipMethod::Parametric => {
            let c = solve_lip_parametric(cli.tol);
            let details = json!({
                "method": "parametric",
                "candidate": c,
                "objective": c.objective(),
            });
            (c.to_prior().map_err(solver_error)?, details)
        }
        LipMethod::Ascent => {
            if restarts == 0 {
                return Err(usage("--restarts must be positive"));
            }
            let n = grid_n(cli, 101, 2)?;
            let r = solve_lip_ascent(n, restarts, cli.seed).map_err(solver_error)?;
            let details = json!({
                "method": "ascent",
                "grid_n": n,
                "seed": cli.seed,
                "restarts": r.restarts,
            });
            (r.prior, details)
        }
    };
    if cli.format == Format::Csv {
        return Ok((Output::Csv(prior_csv(&prior)), 0));
    }
    let info = conditional_mutual_information(&prior).map_err(solver_error)?;
    Ok((
        Output::Json(json!({
            "prior": prior,
            "information": info,
            "solver": details,
            "constants": constants(),
            "paper_note": CONSTANT_NOTE,
        })),
        0,
    ))
}

fn cmd_info(cli: &Cli, path: Option<&PathBuf>) -> Result<(Output, u8), Failure> {
    reject_csv(cli, "info")?;
    let (prior, source) = match path {
        Some(p) => (
            DiscretePrior::load(p).map_err(|e| usage(e.to_string()))?,
            p.display().to_string(),
        ),
        None => (
            DiscretePrior::latent_information(),
            "latent information prior".to_string(),
        ),
    };
    let info = conditional_mutual_information(&prior).map_err(|e| usage(e.to_string()))?;
    let bayes = bayes_decision(&prior).ok();
    Ok((
        Output::Json(json!({
            "prior_source": source,
            "prior": prior,
            "information": info,
            "moments": moments(&prior),
            "is_minimax_prior": is_minimax_prior(&prior, cli.tol),
            "bayes_decision": bayes,
            "constants": constants(),
            "paper_note": CONSTANT_NOTE,
        })),
        0,
    ))
}

fn cmd_verify(cli: &Cli, fast: bool) -> Result<(Output, u8), Failure> {
    let mut opts = VerifyOptions::new(fast);
    opts.seed = cli.seed;
    let report = verify::run_with_progress(&opts, |c| println!("{}", c.line()));
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let summary = format!(
        "{passed}/{} checks passed in {:.2} s\n",
        report.checks.len(),
        report.elapsed_secs
    );
    Ok((
        Output::Text(summary),
        if report.all_passed() { 0 } else { 1 },
    ))
}
