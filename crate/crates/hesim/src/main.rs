use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hesim::analysis::corrected_visibility_bounds;
use hesim::config::Config;
use hesim::harness::experiment::{run_experiment, ExperimentRun};
use hesim::patterns::PatternModel;
use hesim::report;
use hesim::verify::{run_identity_suite, suite_passes, Mutation};

/// Two-photon interference behind a birefringent double slit: closed-form
/// patterns, simulated counting runs, and a self-check suite.
#[derive(Parser)]
#[command(name = "hesim", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the closed-form interference curves as CSV
    Pattern(PatternArgs),
    /// Simulate a counting run: four scans, fits, corrected curves, report
    Experiment(ExperimentArgs),
    /// Run the identity self-checks, optionally with an injected defect
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PatternArgs {
    /// JSON config file; defaults apply to anything not set
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the CSV files
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config file; defaults apply to anything not set
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run seed; identical seeds reproduce identical counts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for CSVs and report.json
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Inject a named defect; the suite is expected to flag it
    #[arg(long, value_parser = parse_mutation)]
    mutate: Option<Mutation>,
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse().map_err(|e| {
        format!(
            "{e}; known mutations: {}",
            Mutation::ALL.map(|m| m.name()).join(", ")
        )
    })
}

fn load_config(path: &Option<PathBuf>) -> hesim::Result<Config> {
    match path {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> hesim::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_pattern(args: &PatternArgs) -> hesim::Result<()> {
    let config = load_config(&args.config)?;
    let model = PatternModel::new(config.geometry()?, config.state()?);
    let theta_fixed = config.theta_fixed(model.state());
    let x_fixed = config.x_fixed(model.geometry(), model.state());

    fs::create_dir_all(&args.out)?;
    write_file(
        &args.out,
        "spatial_pattern.csv",
        &report::spatial_pattern_csv(&model, &config, theta_fixed),
    )?;
    write_file(
        &args.out,
        "polarization_pattern.csv",
        &report::polarization_pattern_csv(&model, &config, x_fixed),
    )?;

    let bounds = corrected_visibility_bounds(model.state());
    println!("concurrence: {}", model.concurrence());
    println!("corrected visibility ceiling: {}", bounds.max_over_settings);
    Ok(())
}

fn run_experiment_cmd(args: &ExperimentArgs) -> hesim::Result<()> {
    let config = load_config(&args.config)?;
    let run = run_experiment(&config, args.seed)?;
    fs::create_dir_all(&args.out)?;
    write_scan_files(&args.out, &config, &run)?;

    let report = report::build_report(&config, &run);
    write_file(&args.out, "report.json", &report::report_json(&report))?;

    println!(
        "raw coincidence visibility: {} +- {}",
        run.coincidence_spatial_fit.visibility_unclamped(),
        run.coincidence_spatial_fit.visibility_error()
    );
    match &run.corrected_spatial.fit {
        Some(fit) => println!(
            "corrected visibility: {} +- {} (predicted ceiling {})",
            fit.visibility_unclamped(),
            fit.visibility_error(),
            report.complementarity.predicted.corrected_visibility_ceiling
        ),
        None => println!("corrected curve carries no identifiable fringe"),
    }
    Ok(())
}

fn write_scan_files(dir: &Path, config: &Config, run: &ExperimentRun) -> hesim::Result<()> {
    let seed = run.seed.to_string();
    let theta = ("theta_fixed_rad", run.theta_fixed.to_string());
    let x = ("x_fixed_m", run.x_fixed.to_string());

    for (name, title, setting, record, fixed) in [
        (
            "coincidence_spatial_counts.csv",
            "coincidence counts along the detection axis",
            "x_m",
            &run.coincidence_spatial,
            theta.clone(),
        ),
        (
            "coincidence_polarization_counts.csv",
            "coincidence counts over the analyzer turn",
            "theta_rad",
            &run.coincidence_polarization,
            x.clone(),
        ),
        (
            "singles_spatial_counts.csv",
            "idler singles counts along the detection axis",
            "x_m",
            &run.singles_spatial,
            theta.clone(),
        ),
        (
            "singles_polarization_counts.csv",
            "signal singles counts over the analyzer turn",
            "theta_rad",
            &run.singles_polarization,
            x.clone(),
        ),
    ] {
        write_file(
            dir,
            name,
            &report::counts_csv(
                title,
                config,
                &[fixed, ("seed", seed.clone())],
                setting,
                &record.settings,
                &record.expected,
                &record.counts,
            ),
        )?;
    }

    write_file(
        dir,
        "corrected_spatial.csv",
        &report::corrected_csv(
            "corrected coincidence density along the detection axis",
            config,
            &[theta, ("seed", seed.clone())],
            ("x_m", "corrected_density_per_m_rad"),
            &run.corrected_spatial.positions,
            &run.corrected_spatial.values,
            &run.corrected_spatial.sigmas,
        ),
    )?;
    write_file(
        dir,
        "corrected_polarization.csv",
        &report::corrected_csv(
            "corrected coincidence density over the analyzer turn",
            config,
            &[x, ("seed", seed)],
            ("theta_rad", "corrected_density_per_m_rad"),
            &run.corrected_polarization.angles,
            &run.corrected_polarization.values,
            &run.corrected_polarization.sigmas,
        ),
    )?;
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> bool {
    if let Some(mutation) = args.mutate {
        println!("injected mutation: {mutation}");
    }
    let checks = run_identity_suite(args.mutate);
    for check in &checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {} (max deviation {:.3e}, tolerance {:.0e})",
            check.name, check.max_deviation, check.tolerance
        );
    }
    let ok = suite_passes(&checks);
    println!(
        "{} of {} identity checks passed",
        checks.iter().filter(|c| c.passed()).count(),
        checks.len()
    );
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Pattern(args) => run_pattern(args),
        Command::Experiment(args) => run_experiment_cmd(args),
        Command::Verify(args) => {
            return if run_verify(args) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
