//! Paired-filter stability experiments: a correctly and a wrongly
//! initialized filter consume the identical observation record, and the
//! laboratory checks the pathwise forgetting bound
//! `D_t <= C(beta, nu) exp(-lambda_star t)`, the per-entry intermediate
//! inequality against the smoothing spread, the Jensen step, the Bayes
//! reconstruction of the wrong filter from the correct one, and the
//! asymptotic decay rate by log-linear regression.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::{
    integrate_filter, likelihood_ratio_constant, tv_distance, FilterTrajectory, IntegratorScheme,
};
use crate::markov::{GeneratorMatrix, ProbabilitySimplex};
use crate::observation::{synthesize_observations, ObservationModel};
use crate::seed::replicate_rng;
use crate::smoothing::{check_key_bound, integrate_smoothing, spread, SmoothingTrajectory};

/// Distances below this floor are treated as exhausted by finite
/// precision and excluded from rate regressions.
pub const DISTANCE_FLOOR: f64 = 1e-12;

/// Minimum usable grid points for a rate regression.
const MIN_REGRESSION_POINTS: usize = 10;

/// Full description of one experiment family.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub generator: GeneratorMatrix,
    pub nu: ProbabilitySimplex,
    pub beta: ProbabilitySimplex,
    pub beta2: Option<ProbabilitySimplex>,
    pub model: ObservationModel,
    pub horizon: f64,
    pub dt: f64,
    pub replicates: usize,
    pub seed: u64,
    pub scheme: IntegratorScheme,
    pub noise_off: bool,
    pub slack_mult: f64,
    pub slack_add: f64,
    /// Regression window `[t0, t1]` for the empirical decay rate.
    pub window: (f64, f64),
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let d = self.generator.dim();
        for (name, p) in [("nu", &self.nu), ("beta", &self.beta)] {
            if p.dim() != d {
                return Err(Error::Config(format!("initial.{name}: dimension mismatch")));
            }
            if !p.is_strictly_positive() {
                return Err(Error::Config(format!(
                    "initial.{name} must be strictly positive"
                )));
            }
        }
        if let Some(b2) = &self.beta2 {
            if b2.dim() != d || !b2.is_strictly_positive() {
                return Err(Error::Config(
                    "initial.beta2 must be strictly positive with matching dimension".into(),
                ));
            }
        }
        if self.model.dim() != d {
            return Err(Error::Config("observation.h: dimension mismatch".into()));
        }
        if !(self.horizon > 0.0) || !(self.dt > 0.0) || self.dt > self.horizon {
            return Err(Error::Config(format!(
                "run: need 0 < dt <= horizon, got dt {} horizon {}",
                self.dt, self.horizon
            )));
        }
        if self.replicates < 1 {
            return Err(Error::Config("run.replicates must be >= 1".into()));
        }
        if !(self.slack_mult >= 1.0) || !(self.slack_add >= 0.0) {
            return Err(Error::Config(
                "checks: slack_mult must be >= 1 and slack_add >= 0".into(),
            ));
        }
        let (t0, t1) = self.window;
        if !(t0 >= self.dt) || !(t1 <= self.horizon) || !(t0 < t1) {
            return Err(Error::Config(format!(
                "checks.window: need dt <= t0 < t1 <= horizon, got [{t0}, {t1}]"
            )));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

/// Lemma-style per-entry comparison report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginReport {
    pub violations: usize,
    /// Minimum over the grid of `slacked RHS - LHS`.
    pub min_margin: f64,
}

/// Everything measured on a single replicate.
#[derive(Debug, Clone)]
pub struct ReplicateOutcome {
    /// TV distance series `D_t` between the paired filters.
    pub distance: Vec<f64>,
    /// Theoretical envelope `B_t = C(beta, nu) exp(-lambda_star t)`.
    pub bound: Vec<f64>,
    /// `max_j spread` of the smoothing system per grid time.
    pub spread_max: Vec<f64>,
    /// Sup-norm gap between the reconstructed and integrated wrong filter.
    pub bayes_gap: Vec<f64>,
    /// Grid points with `D_t > slack_mult B_t + slack_add`.
    pub bound_violations: usize,
    /// Regression slope of `log D_t`; `None` when too few usable points.
    pub empirical_rate: Option<f64>,
    /// `max_t` of `bayes_gap`.
    pub bayes_residual: f64,
    pub lemma1: MarginReport,
    pub jensen: MarginReport,
    pub key_bound_violations: usize,
    /// True when `D_t` never rises above the distance floor (beta = nu).
    pub degenerate: bool,
}

/// Aggregated view over all replicates of a run.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub lambda_star: f64,
    pub ratio_constant: f64,
    pub dt: f64,
    pub outcomes: Vec<ReplicateOutcome>,
}

impl StabilityReport {
    pub fn total_bound_violations(&self) -> usize {
        self.outcomes.iter().map(|o| o.bound_violations).sum()
    }

    /// The bound is almost-sure, so the worst replicate decides.
    pub fn max_bound_violations(&self) -> usize {
        self.outcomes
            .iter()
            .map(|o| o.bound_violations)
            .max()
            .unwrap_or(0)
    }

    /// (min, median, max) of the per-replicate empirical rates, skipping
    /// degenerate replicates.
    pub fn rate_summary(&self) -> Option<(f64, f64, f64)> {
        let mut rates: Vec<f64> = self
            .outcomes
            .iter()
            .filter_map(|o| o.empirical_rate)
            .collect();
        if rates.is_empty() {
            return None;
        }
        rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some((
            rates[0],
            rates[rates.len() / 2],
            rates[rates.len() - 1],
        ))
    }
}

/// Outcome of the three-filter (two wrong initializations) experiment.
#[derive(Debug, Clone)]
pub struct TwoWrongOutcome {
    /// TV distance between the two wrongly initialized filters.
    pub distance: Vec<f64>,
    /// `max_t [ D(beta', beta'') - D(beta', nu) - D(beta'', nu) ]`; the
    /// triangle inequality makes this nonpositive up to roundoff.
    pub triangle_excess: f64,
    pub empirical_rate: Option<f64>,
}

/// Ordinary least squares slope of `log series` against time over the
/// grid points inside `window` where the series exceeds the floor.
pub fn estimate_rate(series: &[f64], dt: f64, window: (f64, f64)) -> Result<Option<f64>> {
    let (t0, t1) = window;
    let k0 = (t0 / dt).ceil() as usize;
    let k1 = ((t1 / dt).floor() as usize).min(series.len().saturating_sub(1));
    if k0 > k1 {
        return Err(Error::WindowEmpty { t0, t1 });
    }
    let pts: Vec<(f64, f64)> = (k0..=k1)
        .filter(|&k| series[k] > DISTANCE_FLOOR)
        .map(|k| (k as f64 * dt, series[k].ln()))
        .collect();
    if pts.len() < MIN_REGRESSION_POINTS {
        return Ok(None);
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok(Some((n * sxy - sx * sy) / (n * sxx - sx * sx)))
}

/// Rebuilds the wrongly initialized filter from the correct filter and
/// the smoothing system through the change-of-measure formula
/// `pi^beta(i) ∝ sum_j (beta_j / nu_j) rho_ji pi(i)`.
pub fn reconstruct_beta_filter(
    filter: &FilterTrajectory,
    rho: &SmoothingTrajectory,
    beta: &ProbabilitySimplex,
    nu: &ProbabilitySimplex,
) -> Result<FilterTrajectory> {
    let d = filter.dim();
    if rho.dim() != d || beta.dim() != d || nu.dim() != d {
        return Err(Error::DimensionMismatch(rho.dim(), d));
    }
    if !beta.is_strictly_positive() || !nu.is_strictly_positive() {
        return Err(Error::NotEquivalent);
    }
    let ratio: Vec<f64> = (0..d).map(|j| beta.get(j) / nu.get(j)).collect();
    let mut values = Vec::with_capacity(filter.len());
    for k in 0..filter.len() {
        let m = rho.matrix(k);
        let pi = filter.value(k);
        let mut weights = nalgebra::DVector::zeros(d);
        let mut total = 0.0;
        for i in 0..d {
            let mut acc = 0.0;
            for (j, r) in ratio.iter().enumerate() {
                acc += r * m[(j, i)];
            }
            let w = acc * pi.get(i);
            weights[i] = w;
            total += w;
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::ZeroNormalizer { step: k });
        }
        values.push(ProbabilitySimplex::new(weights)?);
    }
    FilterTrajectory::new(filter.step(), values)
}

/// Checks the per-entry inequality
/// `|pi^nu(i) - pi^beta(i)| <= d max(beta/nu) max(nu/beta) max spread`
/// at every grid point, with multiplicative slack.
pub fn check_lemma1(
    filter_nu: &FilterTrajectory,
    filter_beta: &FilterTrajectory,
    rho: &SmoothingTrajectory,
    beta: &ProbabilitySimplex,
    nu: &ProbabilitySimplex,
    slack: f64,
) -> Result<MarginReport> {
    let d = filter_nu.dim();
    if filter_beta.dim() != d || rho.dim() != d {
        return Err(Error::DimensionMismatch(filter_beta.dim(), d));
    }
    if !beta.is_strictly_positive() || !nu.is_strictly_positive() {
        return Err(Error::NotEquivalent);
    }
    let mut max_bn = 0.0f64;
    let mut max_nb = 0.0f64;
    for j in 0..d {
        max_bn = max_bn.max(beta.get(j) / nu.get(j));
        max_nb = max_nb.max(nu.get(j) / beta.get(j));
    }
    let constant = d as f64 * max_bn * max_nb;
    let diag = spread(rho);
    let mut report = MarginReport {
        violations: 0,
        min_margin: f64::INFINITY,
    };
    for k in 0..filter_nu.len() {
        let rhs = slack * constant * diag.max_spread(k);
        let pn = filter_nu.value(k);
        let pb = filter_beta.value(k);
        for i in 0..d {
            let lhs = (pn.get(i) - pb.get(i)).abs();
            let margin = rhs - lhs;
            if margin < report.min_margin {
                report.min_margin = margin;
            }
            if margin < 0.0 {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}

/// Checks the Jensen step
/// `1 / sum_j (beta_j/nu_j) q_j <= sum_j (nu_j/beta_j) q_j` with
/// `q = initial state posterior`, at every grid point, within relative
/// tolerance `tol`.
pub fn check_jensen(
    filter: &FilterTrajectory,
    rho: &SmoothingTrajectory,
    beta: &ProbabilitySimplex,
    nu: &ProbabilitySimplex,
    tol: f64,
) -> Result<MarginReport> {
    let d = filter.dim();
    if !beta.is_strictly_positive() || !nu.is_strictly_positive() {
        return Err(Error::NotEquivalent);
    }
    let mut report = MarginReport {
        violations: 0,
        min_margin: f64::INFINITY,
    };
    for k in 0..filter.len() {
        let q = crate::smoothing::initial_posterior(filter, rho, k)?;
        let mut forward = 0.0;
        let mut reverse = 0.0;
        for j in 0..d {
            forward += beta.get(j) / nu.get(j) * q.get(j);
            reverse += nu.get(j) / beta.get(j) * q.get(j);
        }
        let lhs = 1.0 / forward;
        let margin = reverse * (1.0 + tol) - lhs;
        if margin < report.min_margin {
            report.min_margin = margin;
        }
        if margin < 0.0 {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// One replicate: sample a signal path under `nu`, synthesize one
/// observation record, drive both filters with it, and measure every
/// diagnostic of the report.
pub fn run_paired_experiment<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    rng: &mut R,
) -> Result<ReplicateOutcome> {
    let path = cfg.generator.sample_path(&cfg.nu, cfg.horizon, rng)?;
    let obs = synthesize_observations(&path, &cfg.model, cfg.dt, cfg.noise_off, rng)?;
    let filter_nu = integrate_filter(&cfg.generator, &cfg.model, &cfg.nu, &obs, cfg.scheme)?;
    let filter_beta = integrate_filter(&cfg.generator, &cfg.model, &cfg.beta, &obs, cfg.scheme)?;

    let rate = cfg.generator.theoretical_rate();
    let constant = likelihood_ratio_constant(&cfg.beta, &cfg.nu)?;

    let n = filter_nu.len();
    let mut distance = Vec::with_capacity(n);
    let mut bound = Vec::with_capacity(n);
    let mut bound_violations = 0;
    for k in 0..n {
        let d_t = tv_distance(filter_nu.value(k), filter_beta.value(k))?;
        let b_t = constant * (-rate.lambda_star * filter_nu.time(k)).exp();
        if d_t > cfg.slack_mult * b_t + cfg.slack_add {
            bound_violations += 1;
        }
        distance.push(d_t);
        bound.push(b_t);
    }

    let rho = integrate_smoothing(&cfg.generator, &filter_nu)?;
    let diag = spread(&rho);
    let spread_max: Vec<f64> = (0..n).map(|k| diag.max_spread(k)).collect();
    let key_bound = check_key_bound(&diag, &rate, cfg.slack_mult);

    let reconstructed = reconstruct_beta_filter(&filter_nu, &rho, &cfg.beta, &cfg.nu)?;
    let bayes_gap: Vec<f64> = (0..n)
        .map(|k| {
            reconstructed
                .value(k)
                .weights()
                .iter()
                .zip(filter_beta.value(k).weights().iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let bayes_residual = bayes_gap.iter().cloned().fold(0.0, f64::max);

    let lemma1 = check_lemma1(&filter_nu, &filter_beta, &rho, &cfg.beta, &cfg.nu, 1.05)?;
    let jensen = check_jensen(&filter_nu, &rho, &cfg.beta, &cfg.nu, 1e-12)?;

    let degenerate = distance.iter().all(|&x| x <= DISTANCE_FLOOR);
    let empirical_rate = if degenerate {
        None
    } else {
        estimate_rate(&distance, cfg.dt, cfg.window)?
    };

    Ok(ReplicateOutcome {
        distance,
        bound,
        spread_max,
        bayes_gap,
        bound_violations,
        empirical_rate,
        bayes_residual,
        lemma1,
        jensen,
        key_bound_violations: key_bound.violations,
        degenerate,
    })
}

/// Runs all replicates in parallel; replicate `r` owns the stream derived
/// from `(seed, r)`, and outcomes are folded in replicate order, so the
/// report does not depend on scheduling.
pub fn run_stability(cfg: &ExperimentConfig) -> Result<StabilityReport> {
    cfg.validate()?;
    let outcomes: Result<Vec<ReplicateOutcome>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(cfg.seed, r as u64);
            run_paired_experiment(cfg, &mut rng).map_err(|e| Error::Replicate {
                index: r,
                source: Box::new(e),
            })
        })
        .collect();
    Ok(StabilityReport {
        lambda_star: cfg.generator.theoretical_rate().lambda_star,
        ratio_constant: likelihood_ratio_constant(&cfg.beta, &cfg.nu)?,
        dt: cfg.dt,
        outcomes: outcomes?,
    })
}

/// One replicate with three filters: correct, and two wrong
/// initializations `beta'` (cfg.beta) and `beta''` (cfg.beta2).
pub fn run_two_wrong_experiment<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    rng: &mut R,
) -> Result<TwoWrongOutcome> {
    let beta2 = cfg
        .beta2
        .as_ref()
        .ok_or_else(|| Error::Config("initial.beta2 required for the two-wrong experiment".into()))?;
    let path = cfg.generator.sample_path(&cfg.nu, cfg.horizon, rng)?;
    let obs = synthesize_observations(&path, &cfg.model, cfg.dt, cfg.noise_off, rng)?;
    let f_nu = integrate_filter(&cfg.generator, &cfg.model, &cfg.nu, &obs, cfg.scheme)?;
    let f_b1 = integrate_filter(&cfg.generator, &cfg.model, &cfg.beta, &obs, cfg.scheme)?;
    let f_b2 = integrate_filter(&cfg.generator, &cfg.model, beta2, &obs, cfg.scheme)?;

    let n = f_nu.len();
    let mut distance = Vec::with_capacity(n);
    let mut triangle_excess = f64::NEG_INFINITY;
    for k in 0..n {
        let d12 = tv_distance(f_b1.value(k), f_b2.value(k))?;
        let d1 = tv_distance(f_b1.value(k), f_nu.value(k))?;
        let d2 = tv_distance(f_b2.value(k), f_nu.value(k))?;
        triangle_excess = triangle_excess.max(d12 - d1 - d2);
        distance.push(d12);
    }
    let degenerate = distance.iter().all(|&x| x <= DISTANCE_FLOOR);
    let empirical_rate = if degenerate {
        None
    } else {
        estimate_rate(&distance, cfg.dt, cfg.window)?
    };
    Ok(TwoWrongOutcome {
        distance,
        triangle_excess,
        empirical_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    pub(crate) fn suite_one(horizon: f64, replicates: usize) -> ExperimentConfig {
        ExperimentConfig {
            generator: GeneratorMatrix::from_rates(DMatrix::from_row_slice(
                2,
                2,
                &[0.0, 1.0, 1.0, 0.0],
            ))
            .unwrap(),
            nu: ProbabilitySimplex::uniform(2),
            beta: ProbabilitySimplex::from_slice(&[0.9, 0.1]).unwrap(),
            beta2: Some(ProbabilitySimplex::from_slice(&[0.1, 0.9]).unwrap()),
            model: ObservationModel::from_slice(&[0.0, 1.0], 0.5).unwrap(),
            horizon,
            dt: 1e-3,
            replicates,
            seed: 42,
            scheme: IntegratorScheme::SplitBayes,
            noise_off: false,
            slack_mult: 1.1,
            slack_add: 1e-6,
            window: (0.2 * horizon, 0.8 * horizon),
        }
    }

    #[test]
    fn identical_initialization_is_flagged_degenerate() {
        let mut cfg = suite_one(2.0, 1);
        cfg.beta = cfg.nu.clone();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let out = run_paired_experiment(&cfg, &mut rng).unwrap();
        assert!(out.degenerate);
        assert!(out.empirical_rate.is_none());
        assert_eq!(out.bound_violations, 0);
        assert!(out.distance.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn initial_distance_is_tv_of_initializations() {
        let cfg = suite_one(1.0, 1);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let out = run_paired_experiment(&cfg, &mut rng).unwrap();
        let expect = tv_distance(&cfg.nu, &cfg.beta).unwrap();
        assert!((out.distance[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn estimate_rate_recovers_exact_exponential() {
        let dt = 1e-2;
        let series: Vec<f64> = (0..1001).map(|k| (-3.0 * k as f64 * dt).exp()).collect();
        let slope = estimate_rate(&series, dt, (1.0, 9.0)).unwrap().unwrap();
        assert!((slope + 3.0).abs() < 1e-9, "slope {slope}");
        let flat = vec![0.5; 1001];
        let s0 = estimate_rate(&flat, dt, (1.0, 9.0)).unwrap().unwrap();
        assert!(s0.abs() < 1e-12);
    }

    #[test]
    fn estimate_rate_flags_too_few_points_and_empty_window() {
        let series = vec![1e-15; 1001];
        assert!(estimate_rate(&series, 1e-2, (1.0, 9.0)).unwrap().is_none());
        assert!(matches!(
            estimate_rate(&series, 1e-2, (20.0, 30.0)),
            Err(Error::WindowEmpty { .. })
        ));
    }

    #[test]
    fn reconstruction_identities() {
        let cfg = suite_one(1.0, 1);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let path = cfg.generator.sample_path(&cfg.nu, cfg.horizon, &mut rng).unwrap();
        let obs =
            synthesize_observations(&path, &cfg.model, cfg.dt, false, &mut rng).unwrap();
        let f_nu =
            integrate_filter(&cfg.generator, &cfg.model, &cfg.nu, &obs, cfg.scheme).unwrap();
        let rho = integrate_smoothing(&cfg.generator, &f_nu).unwrap();
        // beta = nu returns pi^nu itself
        let same = reconstruct_beta_filter(&f_nu, &rho, &cfg.nu, &cfg.nu).unwrap();
        for k in [0, 400, f_nu.len() - 1] {
            assert!(tv_distance(same.value(k), f_nu.value(k)).unwrap() < 1e-12);
        }
        // t = 0 returns beta exactly
        let recon = reconstruct_beta_filter(&f_nu, &rho, &cfg.beta, &cfg.nu).unwrap();
        assert!(tv_distance(recon.value(0), &cfg.beta).unwrap() < 1e-14);
    }

    #[test]
    fn paired_experiment_meets_theorem_bound_on_one_replicate() {
        let cfg = suite_one(10.0, 1);
        let mut rng = replicate_rng(cfg.seed, 0);
        let out = run_paired_experiment(&cfg, &mut rng).unwrap();
        assert_eq!(out.bound_violations, 0);
        assert_eq!(out.key_bound_violations, 0);
        assert_eq!(out.lemma1.violations, 0);
        assert_eq!(out.jensen.violations, 0);
        let rate = out.empirical_rate.expect("usable regression");
        assert!(rate <= -2.0 + 0.3, "empirical rate {rate}");
        assert!(out.bayes_residual < 5e-3, "residual {}", out.bayes_residual);
    }

    #[test]
    fn two_wrong_triangle_and_reductions() {
        let cfg = suite_one(3.0, 1);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let out = run_two_wrong_experiment(&cfg, &mut rng).unwrap();
        assert!(out.triangle_excess <= 1e-12);

        // beta'' = beta' gives identically zero distance
        let mut same = cfg.clone();
        same.beta2 = Some(same.beta.clone());
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let out = run_two_wrong_experiment(&same, &mut rng).unwrap();
        assert!(out.distance.iter().all(|&x| x == 0.0));

        // beta'' = nu reduces to the paired experiment distance
        let mut reduced = cfg.clone();
        reduced.beta2 = Some(reduced.nu.clone());
        let mut rng_a = ChaCha12Rng::seed_from_u64(7);
        let two = run_two_wrong_experiment(&reduced, &mut rng_a).unwrap();
        let mut rng_b = ChaCha12Rng::seed_from_u64(7);
        let pair = run_paired_experiment(&reduced, &mut rng_b).unwrap();
        for (a, b) in two.distance.iter().zip(pair.distance.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn report_is_reproducible_for_fixed_seed() {
        let cfg = suite_one(1.0, 3);
        let a = run_stability(&cfg).unwrap();
        let b = run_stability(&cfg).unwrap();
        for (x, y) in a.outcomes.iter().zip(b.outcomes.iter()) {
            assert_eq!(x.distance, y.distance);
            assert_eq!(x.spread_max, y.spread_max);
        }
    }

    #[test]
    fn config_validation_rejects_bad_window() {
        let mut cfg = suite_one(1.0, 1);
        cfg.window = (0.5, 2.0);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}
