//! End-to-end verification suite behind the `verify` subcommand: one
//! deterministic battery of cross-checks tying the filter, the smoothing
//! system, the Bayes reconstruction and the theoretical bounds together
//! on a single replicate of the configured experiment.

use crate::error::Result;
use crate::filter::integrate_filter;
use crate::markov::ProbabilitySimplex;
use crate::observation::{synthesize_observations, ObservationModel};
use crate::oracle::forward_backward_smoother;
use crate::seed::replicate_rng;
use crate::smoothing::{check_key_bound, integrate_smoothing, spread};
use crate::stability::{
    check_jensen, check_lemma1, reconstruct_beta_filter, run_two_wrong_experiment,
    ExperimentConfig,
};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, pass, detail }
}

/// Runs every check; the battery never aborts on a failed check, only on
/// hard errors (invalid config, degenerate integration).
pub fn run_verification(cfg: &ExperimentConfig) -> Result<Vec<CheckOutcome>> {
    cfg.validate()?;
    let mut checks = Vec::new();

    // Shortened horizon keeps the battery at desk scale.
    let horizon = cfg.horizon.min(5.0);
    let mut short = cfg.clone();
    short.horizon = horizon;
    short.window = (0.2 * horizon, 0.8 * horizon);

    // One shared replicate of the shortened experiment.
    let mut rng = replicate_rng(short.seed, 0);
    let path = short.generator.sample_path(&short.nu, horizon, &mut rng)?;
    let obs = synthesize_observations(&path, &short.model, short.dt, short.noise_off, &mut rng)?;
    let f_nu = integrate_filter(&short.generator, &short.model, &short.nu, &obs, short.scheme)?;
    let f_beta =
        integrate_filter(&short.generator, &short.model, &short.beta, &obs, short.scheme)?;
    let rho = integrate_smoothing(&short.generator, &f_nu)?;

    // 1. constant-sensor reduction: with h identically one the correction
    //    cancels and the filter must follow the Kolmogorov forward flow
    {
        let d = short.generator.dim();
        let flat = ObservationModel::from_slice(&vec![1.0; d], short.model.sigma())?;
        let traj =
            integrate_filter(&short.generator, &flat, &short.nu, &obs, short.scheme)?;
        let mut worst = 0.0f64;
        let probe = (traj.len() / 50).max(1);
        for k in (0..traj.len()).step_by(probe) {
            let p = short.generator.transition_matrix(traj.time(k))?;
            let expect = p.transpose() * short.nu.weights();
            let gap: f64 = traj
                .value(k)
                .weights()
                .iter()
                .zip(expect.iter())
                .map(|(a, b)| (a - b).abs())
                .sum();
            worst = worst.max(gap);
        }
        checks.push(outcome(
            "constant-h-reduction",
            worst < 1e-6,
            format!("sup gap {worst:.3e} (tolerance 1e-6)"),
        ));
    }

    // 2. smoothing system against the discrete forward-backward smoother
    {
        let oracle = forward_backward_smoother(&short.generator, &short.model, &short.nu, &obs)?;
        let mut worst = 0.0f64;
        for k in 0..rho.len() {
            worst = worst.max((rho.matrix(k) - oracle.matrix(k)).amax());
        }
        checks.push(outcome(
            "smoothing-oracle",
            worst < 1e-3,
            format!("entrywise gap {worst:.3e} (tolerance 1e-3)"),
        ));
    }

    // 3. Bayes reconstruction of the wrong filter from the correct one
    {
        let recon = reconstruct_beta_filter(&f_nu, &rho, &short.beta, &short.nu)?;
        let mut worst = 0.0f64;
        for k in 0..f_beta.len() {
            let gap = recon
                .value(k)
                .weights()
                .iter()
                .zip(f_beta.value(k).weights().iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(gap);
        }
        checks.push(outcome(
            "bayes-reconstruction",
            worst < 5e-3,
            format!("sup gap {worst:.3e} (tolerance 5e-3)"),
        ));
    }

    // 4. per-entry filter gap against the smoothing spread
    {
        let report = check_lemma1(&f_nu, &f_beta, &rho, &short.beta, &short.nu, 1.05)?;
        checks.push(outcome(
            "entrywise-spread-bound",
            report.violations == 0,
            format!(
                "{} violations, min margin {:.3e} (slack 1.05)",
                report.violations, report.min_margin
            ),
        ));
    }

    // 5. Jensen step on the initial-state posterior
    {
        let report = check_jensen(&f_nu, &rho, &short.beta, &short.nu, 1e-12)?;
        checks.push(outcome(
            "jensen-step",
            report.violations == 0,
            format!(
                "{} violations, min margin {:.3e} (tolerance 1e-12)",
                report.violations, report.min_margin
            ),
        ));
    }

    // 6. spread decay against the theoretical envelope
    {
        let diag = spread(&rho);
        let report = check_key_bound(&diag, &short.generator.theoretical_rate(), short.slack_mult);
        checks.push(outcome(
            "spread-envelope",
            report.violations == 0,
            format!(
                "{} violations, worst margin {:.3e} (slack {})",
                report.violations, report.worst_margin, short.slack_mult
            ),
        ));
    }

    // 7. triangle inequality for two wrong initializations; when beta2 is
    //    not configured the reversal of beta stands in for it
    {
        let mut two = short.clone();
        if two.beta2.is_none() {
            let mut reversed: Vec<f64> =
                two.beta.weights().iter().copied().collect();
            reversed.reverse();
            two.beta2 = Some(ProbabilitySimplex::from_slice(&reversed)?);
        }
        let mut rng = replicate_rng(short.seed, 1);
        let out = run_two_wrong_experiment(&two, &mut rng)?;
        checks.push(outcome(
            "triangle-inequality",
            out.triangle_excess <= 1e-12,
            format!("max excess {:.3e} (tolerance 1e-12)", out.triangle_excess),
        ));
    }

    Ok(checks)
}
