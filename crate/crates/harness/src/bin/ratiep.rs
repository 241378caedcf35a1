use clap::{Args, Parser, Subcommand};
use ratiep_core::metrics::metric_report;
use ratiep_core::{MetricOptions, Report};
use ratiep_harness::complex_text::parse_complex;
use ratiep_harness::experiment::{solve, ExperimentId, ExperimentSpec, Strategy};
use ratiep_harness::files::{read_text, solution_from_toml, solution_to_toml, write_text, Problem};
use ratiep_harness::{output, run_experiment, HarnessError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Recurrence coefficients of orthogonal and biorthogonal rational functions.
#[derive(Parser)]
#[command(name = "ratiep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem in a TOML file and write the solution file.
    Solve {
        problem: PathBuf,
        /// Solution file; printed to stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "update")]
        strategy: Strategy,
    },
    /// Run one of the numerical experiments and write results.csv and plots.
    Experiment(ExperimentArgs),
    /// Print the metric report of a solution file.
    Metrics {
        solution: PathBuf,
        #[arg(long)]
        no_kappa: bool,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    id: ExperimentId,
    /// Comma-separated sizes, or `start:stop:step` with inclusive stop.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    radius_xi: Option<f64>,
    #[arg(long)]
    radius_psi: Option<f64>,
    /// 1-based index of the perturbed node.
    #[arg(long)]
    perturb_at: Option<usize>,
    /// Angular distance of the perturbed node from its predecessor.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',')]
    strategies: Option<Vec<Strategy>>,
    /// Common weight of all nodes, as `re+imi`.
    #[arg(long)]
    weight: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Skip the condition number column.
    #[arg(long)]
    no_kappa: bool,
    /// Record wall-clock seconds; output is then no longer reproducible.
    #[arg(long)]
    timings: bool,
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, HarnessError> {
    let bad = || HarnessError::Config(format!("cannot parse sizes `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let n: Vec<usize> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        if n[2] == 0 {
            return Err(bad());
        }
        return Ok((n[0]..=n[1]).step_by(n[2]).collect());
    }
    text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn print_report(r: &Report) {
    println!("m           {}", r.m);
    println!("err_o       {:e}", r.err_o);
    println!("err_r       {:e}", r.err_r);
    println!("err_f       {:e}", r.err_f);
    if let Some(t) = r.err_f_truncated {
        println!("err_f_trunc {t:e}");
    }
    println!("err_p       {:e}", r.err_p);
    if let Some(k) = r.kappa {
        println!("kappa       {k:e}");
    }
}

fn experiment(a: ExperimentArgs) -> Result<bool, HarnessError> {
    let mut spec = ExperimentSpec::new(a.id);
    if let Some(s) = &a.sizes {
        spec.sizes = parse_sizes(s)?;
    }
    if let Some(r) = a.radius_xi {
        spec.radius_xi = r;
    }
    if a.radius_psi.is_some() {
        spec.radius_psi = a.radius_psi;
    }
    if let Some(p) = a.perturb_at {
        spec.perturb_at = p;
    }
    if let Some(t) = a.theta {
        spec.theta = t;
    }
    if let Some(s) = a.strategies {
        spec.strategies = s;
    }
    if let Some(w) = &a.weight {
        spec.weight = parse_complex(w)?;
    }
    spec.seed = a.seed;
    spec.kappa = !a.no_kappa;
    spec.timings = a.timings;
    let rows = run_experiment(&spec)?;
    for path in output::write_outputs(&rows, &a.out_dir)? {
        eprintln!("wrote {}", path.display());
    }
    for r in rows.iter().filter(|r| r.is_breakdown()) {
        if let ratiep_harness::Outcome::Breakdown(e) = &r.outcome {
            eprintln!("{} m={}: {e}", r.strategy, r.m);
        }
    }
    Ok(rows.iter().any(|r| r.is_breakdown()))
}

/// Returns whether a breakdown occurred.
fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Solve { problem, out, strategy } => {
            let p = Problem::from_toml(&read_text(&problem)?)?;
            let sol = match solve(strategy, &p.measure, &p.poles_xi, p.poles_psi.as_deref()) {
                Ok(s) => s,
                Err(e @ ratiep_core::OrfError::Breakdown { .. }) => {
                    eprintln!("{e}");
                    return Ok(true);
                }
                Err(e) => return Err(e.into()),
            };
            let text = solution_to_toml(&sol);
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(false)
        }
        Command::Experiment(a) => experiment(a),
        Command::Metrics { solution, no_kappa } => {
            let sol = solution_from_toml(&read_text(&solution)?)?;
            print_report(&metric_report(&sol, MetricOptions { kappa: !no_kappa, truncated: true })?);
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
