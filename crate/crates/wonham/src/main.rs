use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use wonham::config::ConfigDocument;
use wonham::error::{Error, Result};
use wonham::filter::{likelihood_ratio_constant, IntegratorScheme};
use wonham::io::fmt_float;
use wonham::observation::synthesize_observations;
use wonham::seed::replicate_rng;
use wonham::stability::{run_stability, ExperimentConfig, StabilityReport};
use wonham::verify::run_verification;

#[derive(Parser)]
#[command(
    name = "wonham",
    about = "Filtering laboratory for noisily observed finite-state Markov chains",
    version
)]
struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV and report artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Overrides run.seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides run.replicates from the config.
    #[arg(long, global = true)]
    replicates: Option<usize>,

    /// Worker threads for replicate fan-out (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the decay rate lambda_star and the constant C(beta, nu).
    Rate,
    /// Sample one signal path and observation record, write them as CSV.
    Simulate,
    /// Run the paired-filter experiment suite and write per-replicate
    /// CSVs plus a summary report.
    Stability,
    /// Run the cross-check battery and print a pass/fail table.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let doc = ConfigDocument::from_path(path)?;
    let mut cfg = doc.build()?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(r) = cli.replicates {
        cfg.replicates = r;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<u8> {
    let cfg = load_config(cli)?;
    match cli.command {
        Command::Rate => cmd_rate(&cfg),
        Command::Simulate => cmd_simulate(&cfg, &cli.out),
        Command::Stability => cmd_stability(&cfg, &cli.out),
        Command::Verify => cmd_verify(&cfg),
    }
}

/// 12 significant digits.
fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn cmd_rate(cfg: &ExperimentConfig) -> Result<u8> {
    let rate = cfg.generator.theoretical_rate();
    let constant = likelihood_ratio_constant(&cfg.beta, &cfg.nu)?;
    println!(
        "lambda_star={} C={}",
        fmt_sig(rate.lambda_star),
        fmt_sig(constant)
    );
    Ok(0)
}

fn cmd_simulate(cfg: &ExperimentConfig, out_dir: &Path) -> Result<u8> {
    std::fs::create_dir_all(out_dir)?;
    let mut rng = replicate_rng(cfg.seed, 0);
    let path = cfg.generator.sample_path(&cfg.nu, cfg.horizon, &mut rng)?;
    let obs = synthesize_observations(&path, &cfg.model, cfg.dt, cfg.noise_off, &mut rng)?;

    let file = std::fs::File::create(out_dir.join("signal.csv"))?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "t,state")?;
    for (start, _, state) in path.segments() {
        writeln!(w, "{},{}", fmt_float(start), state + 1)?;
    }
    drop(w);

    obs.write_csv_path(out_dir.join("observations.csv"))?;
    println!(
        "wrote signal.csv ({} jumps) and observations.csv ({} increments) to {}",
        path.num_jumps(),
        obs.n_steps(),
        out_dir.display()
    );
    Ok(0)
}

fn scheme_name(scheme: IntegratorScheme) -> &'static str {
    match scheme {
        IntegratorScheme::SplitBayes => "split-bayes",
        IntegratorScheme::EulerProjected => "euler-projected",
    }
}

fn write_summary(cfg: &ExperimentConfig, report: &StabilityReport, out_dir: &Path) -> Result<()> {
    let file = std::fs::File::create(out_dir.join("summary.txt"))?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "stability experiment summary")?;
    writeln!(w, "----------------------------")?;
    writeln!(w, "dimension        : {}", cfg.generator.dim())?;
    writeln!(w, "horizon          : {}", fmt_float(cfg.horizon))?;
    writeln!(w, "dt               : {}", fmt_float(cfg.dt))?;
    writeln!(w, "replicates       : {}", cfg.replicates)?;
    writeln!(w, "seed             : {}", cfg.seed)?;
    writeln!(w, "scheme           : {}", scheme_name(cfg.scheme))?;
    writeln!(w, "slack            : {} (mult) + {} (add)", cfg.slack_mult, cfg.slack_add)?;
    writeln!(w, "window           : [{}, {}]", cfg.window.0, cfg.window.1)?;
    writeln!(w, "lambda_star      : {}", fmt_float(report.lambda_star))?;
    writeln!(w, "C(beta, nu)      : {}", fmt_float(report.ratio_constant))?;
    writeln!(w)?;
    writeln!(
        w,
        "replicate,bound_violations,key_bound_violations,empirical_rate,bayes_residual,lemma1_min_margin,degenerate"
    )?;
    for (r, o) in report.outcomes.iter().enumerate() {
        let rate = o
            .empirical_rate
            .map(fmt_float)
            .unwrap_or_else(|| "nan".into());
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r,
            o.bound_violations,
            o.key_bound_violations,
            rate,
            fmt_float(o.bayes_residual),
            fmt_float(o.lemma1.min_margin),
            o.degenerate
        )?;
    }
    writeln!(w)?;
    let degenerate = report.outcomes.iter().filter(|o| o.degenerate).count();
    if degenerate > 0 {
        writeln!(w, "degenerate (zero-distance) replicates: {degenerate}")?;
    }
    match report.rate_summary() {
        Some((lo, med, hi)) => writeln!(
            w,
            "empirical rate   : min {} median {} max {}",
            fmt_float(lo),
            fmt_float(med),
            fmt_float(hi)
        )?,
        None => writeln!(w, "empirical rate   : undefined (all replicates degenerate)")?,
    }
    writeln!(
        w,
        "bound violations : total {} / worst replicate {}",
        report.total_bound_violations(),
        report.max_bound_violations()
    )?;
    let pass = report.total_bound_violations() == 0;
    writeln!(w, "result           : {}", if pass { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn cmd_stability(cfg: &ExperimentConfig, out_dir: &Path) -> Result<u8> {
    std::fs::create_dir_all(out_dir)?;
    let report = run_stability(cfg)?;
    for (r, o) in report.outcomes.iter().enumerate() {
        let file = std::fs::File::create(out_dir.join(format!("replicate_{r}.csv")))?;
        let mut w = std::io::BufWriter::new(file);
        writeln!(w, "t,d_t,b_t,spread_max,bayes_residual")?;
        for k in 0..o.distance.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_float(k as f64 * report.dt),
                fmt_float(o.distance[k]),
                fmt_float(o.bound[k]),
                fmt_float(o.spread_max[k]),
                fmt_float(o.bayes_gap[k])
            )?;
        }
    }
    write_summary(cfg, &report, out_dir)?;
    let violations = report.total_bound_violations();
    println!(
        "{} replicates, {} bound violations -> {}",
        report.outcomes.len(),
        violations,
        if violations == 0 { "PASS" } else { "FAIL" }
    );
    Ok(if violations == 0 { 0 } else { 1 })
}

fn cmd_verify(cfg: &ExperimentConfig) -> Result<u8> {
    let checks = run_verification(cfg)?;
    let mut all_pass = true;
    for c in &checks {
        println!(
            "{} {:<24} {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        all_pass &= c.pass;
    }
    Ok(if all_pass { 0 } else { 1 })
}
