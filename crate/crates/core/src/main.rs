use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lnprm::io::{format_observations, DatasetRef};
use lnprm::montecarlo::{self, Method, RateTable, StudyConfig};
use lnprm::search::{self, PrmOutcome, SearchConfig};
use lnprm::{datasets, report, Error, Result};

/// Primary relative maximum search for the three-parameter lognormal.
#[derive(Parser)]
#[command(name = "lnprm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the primary relative maximum (exit 0 found, 2 none, 1 error).
    Estimate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Write the profile of F as CSV.
    Profile {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the classic threshold profile log-likelihood as CSV.
    ClassicProfile {
        #[command(flatten)]
        data: DataArgs,
        /// First threshold (default: x_n - (xbar - x_n)).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        /// Last threshold (default: x_n - 1e-6 (xbar - x_n)).
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulation study of existence / sign / comparator success rates.
    Montecarlo {
        /// Sample sizes, comma separated.
        #[arg(long = "n", value_delimiter = ',', default_values_t = [10usize, 15, 20])]
        sample_sizes: Vec<usize>,
        /// Population lambdas, comma separated.
        #[arg(long = "lambda", value_delimiter = ',', allow_hyphen_values = true,
              default_values_t = [0.01, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0])]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::New)]
        method: MethodArg,
        #[command(flatten)]
        search: SearchArgs,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in reference datasets.
    Datasets {
        #[command(subcommand)]
        action: DatasetsAction,
    },
}

#[derive(Subcommand)]
enum DatasetsAction {
    List,
    /// Print a dataset in the input file format.
    Show {
        index: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    New,
    MunroWixley,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DataArgs {
    /// Built-in dataset 1..=6.
    #[arg(long)]
    data: Option<usize>,
    /// File with one observation per line.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl DataArgs {
    fn dataset(&self) -> DatasetRef {
        match (&self.data, &self.file) {
            (Some(i), _) => DatasetRef::BuiltIn(*i),
            (None, Some(p)) => DatasetRef::File(p.clone()),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, allow_hyphen_values = true)]
    delta0: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    dlambda: Option<f64>,
    #[arg(long = "lambda-max")]
    lambda_max: Option<f64>,
    #[arg(long = "lambda-min", allow_hyphen_values = true)]
    lambda_min: Option<f64>,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig> {
        let d = SearchConfig::default();
        let cfg = SearchConfig {
            delta0: self.delta0.or(d.delta0),
            eps0: self.eps0.unwrap_or(d.eps0),
            eps1: self.eps1.unwrap_or(d.eps1),
            eps2: self.eps2.unwrap_or(d.eps2),
            dlambda: self.dlambda.unwrap_or(d.dlambda),
            lambda_max_pos: self.lambda_max.unwrap_or(d.lambda_max_pos),
            lambda_min_neg: self.lambda_min.unwrap_or(d.lambda_min_neg),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script that draws the CSV (requires --out).
    #[arg(long, requires = "out")]
    plot_script: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_script(output: &OutputArgs, script: impl Fn(&str) -> String) -> Result<()> {
    if let (Some(script_path), Some(csv)) = (&output.plot_script, &output.out) {
        let text = script(&csv.display().to_string());
        std::fs::write(script_path, text)
            .map_err(|e| Error::Io(format!("{}: {e}", script_path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Estimate { data, search } => {
            let sample = data.dataset().load()?;
            let est = search::estimate(&sample, &search.config()?)?;
            print!("{}", report::estimate_report(&sample, &est));
            Ok(match est.refined {
                PrmOutcome::Found(_) => ExitCode::SUCCESS,
                PrmOutcome::NotFound(_) => ExitCode::from(2),
            })
        }
        Command::Profile {
            data,
            search,
            output,
        } => {
            let sample = data.dataset().load()?;
            let cfg = search.config()?;
            let pos = search::trace_profile(&sample, search::Branch::Positive, &cfg)?;
            let neg = search::trace_profile(&sample, search::Branch::Negative, &cfg)?;
            emit(&output.out, &report::profile_csv(&sample, &pos, &neg)?)?;
            write_script(&output, report::profile_plot_script)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ClassicProfile {
            data,
            from,
            to,
            points,
            output,
        } => {
            let sample = data.dataset().load()?;
            let spread = sample.mean() - sample.min();
            let from = from.unwrap_or(sample.min() - spread);
            let to = to.unwrap_or(sample.min() - 1e-6 * spread);
            let grid = report::alpha_grid(from, to, points);
            emit(&output.out, &report::classic_profile_csv(&sample, &grid)?)?;
            write_script(&output, report::classic_plot_script)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Montecarlo {
            sample_sizes,
            lambdas,
            reps,
            seed,
            mu,
            sigma,
            method,
            search,
            out,
        } => {
            let config = StudyConfig {
                sample_sizes,
                lambdas,
                mu,
                sigma,
                replications: reps,
                seed,
                search: search.config()?,
            };
            let method = match method {
                MethodArg::New => Method::Profile,
                MethodArg::MunroWixley => {
                    eprintln!("note: {}", montecarlo::SUCCESS_CRITERION);
                    Method::MunroWixley
                }
            };
            let tables = montecarlo::run_method(&config, method)?;
            let mut csv = format!("{}\n", RateTable::csv_header());
            for t in &tables {
                csv.push_str(&t.csv_rows());
            }
            emit(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Datasets { action } => {
            match action {
                DatasetsAction::List => {
                    for i in 1..=datasets::COUNT {
                        let n = datasets::raw(i)?.len();
                        println!("{i}  n = {n:>2}  {}", datasets::description(i)?);
                    }
                }
                DatasetsAction::Show { index } => {
                    let header = format!("Data {index}: {}", datasets::description(index)?);
                    print!("{}", format_observations(&header, &datasets::raw(index)?));
                }
            }
            Ok(ExitCode::SUCCESS)
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
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
