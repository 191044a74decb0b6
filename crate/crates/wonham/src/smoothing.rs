//! The smoothing-probability system `rho_ji(t) = P(X_0 = a_j | Y_[0,t],
//! X_t = a_i)` co-integrated along a filter trajectory, plus the spread
//! diagnostics (row min, row max, their gap) whose exponential decay is
//! the crate's central verification target.
//!
//! The system solves `d rho / dt = rho A(pi)` with
//! `A(pi)[r,i] = lambda_ri pi(r) / pi(i)` off the diagonal and columns
//! summing to zero, so every column of `rho` stays a probability vector.
//! The filter value is frozen on each grid cell and a classical RK4 step
//! advances `rho` across it.

use nalgebra::DMatrix;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::filter::FilterTrajectory;
use crate::io::fmt_float;
use crate::markov::{GeneratorMatrix, ProbabilitySimplex, RateBound};

/// Time-indexed d x d matrices with entry (j,i) = rho_ji(k dt);
/// `matrices[0]` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingTrajectory {
    step: f64,
    matrices: Vec<DMatrix<f64>>,
}

impl SmoothingTrajectory {
    pub fn new(step: f64, matrices: Vec<DMatrix<f64>>) -> Result<Self> {
        if !(step > 0.0) || matrices.is_empty() {
            return Err(Error::GridMismatch {
                step,
                horizon: step * matrices.len() as f64,
            });
        }
        Ok(SmoothingTrajectory { step, matrices })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, k: usize) -> &DMatrix<f64> {
        &self.matrices[k]
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    /// Long-format CSV: t, j, i, rho (indices 1-based).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,j,i,rho")?;
        let d = self.dim();
        for (k, m) in self.matrices.iter().enumerate() {
            let t = fmt_float(self.time(k));
            for j in 0..d {
                for i in 0..d {
                    writeln!(out, "{},{},{},{}", t, j + 1, i + 1, fmt_float(m[(j, i)]))?;
                }
            }
        }
        Ok(())
    }

    pub fn write_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Row diagnostics at one grid time: extreme smoothing probabilities over
/// the current state, with lowest-index tie-breaking for the argmin/argmax.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSpread {
    pub rho_min: f64,
    pub rho_max: f64,
    pub spread: f64,
    pub argmin: usize,
    pub argmax: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadDiagnostics {
    step: f64,
    /// `per_time[k][j]` is the diagnostic for row j at grid time k.
    per_time: Vec<Vec<RowSpread>>,
}

impl SpreadDiagnostics {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.per_time.len()
    }

    pub fn row(&self, k: usize, j: usize) -> &RowSpread {
        &self.per_time[k][j]
    }

    pub fn rows(&self, k: usize) -> &[RowSpread] {
        &self.per_time[k]
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    /// `max_j (rho_max - rho_min)` at grid time k; this equals
    /// `max_{j,i,k'} |rho_ji - rho_jk'|`.
    pub fn max_spread(&self, k: usize) -> f64 {
        self.per_time[k]
            .iter()
            .map(|r| r.spread)
            .fold(0.0, f64::max)
    }

    /// Diagnostics CSV: t, j, rho_min, rho_max, spread (j 1-based).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,j,rho_min,rho_max,spread")?;
        for (k, rows) in self.per_time.iter().enumerate() {
            let t = fmt_float(self.time(k));
            for (j, r) in rows.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    t,
                    j + 1,
                    fmt_float(r.rho_min),
                    fmt_float(r.rho_max),
                    fmt_float(r.spread)
                )?;
            }
        }
        Ok(())
    }

    pub fn write_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Outcome of checking `max spread <= slack * exp(-lambda_star t)` on the
/// whole grid. Violations are reported, never thrown.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyBoundReport {
    pub violations: usize,
    pub first_violation: Option<usize>,
    /// Minimum over the grid of `slack * exp(-lambda_star t) - max spread`.
    pub worst_margin: f64,
}

/// Coefficient matrix `A(pi)` of the smoothing system for one frozen
/// filter value: `A[r,i] = lambda_ri pi(r) / pi(i)` for `r != i`, columns
/// summing to zero.
pub fn smoothing_generator(generator: &GeneratorMatrix, pi: &ProbabilitySimplex) -> DMatrix<f64> {
    let d = generator.dim();
    let mut a = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut col_sum = 0.0;
        for r in 0..d {
            if r == i {
                continue;
            }
            let v = generator.rate(r, i) * pi.get(r) / pi.get(i);
            a[(r, i)] = v;
            col_sum += v;
        }
        a[(i, i)] = -col_sum;
    }
    a
}

/// Integrates the smoothing system along `filter`, starting from the
/// identity. Columns are renormalized whenever their sum drifts off one
/// by more than 1e-12.
pub fn integrate_smoothing(
    generator: &GeneratorMatrix,
    filter: &FilterTrajectory,
) -> Result<SmoothingTrajectory> {
    let d = generator.dim();
    if filter.dim() != d {
        return Err(Error::DimensionMismatch(filter.dim(), d));
    }
    let dt = filter.step();
    let mut matrices = Vec::with_capacity(filter.len());
    let mut rho = DMatrix::<f64>::identity(d, d);
    matrices.push(rho.clone());
    for k in 0..filter.len() - 1 {
        let pi = filter.value(k);
        if !pi.is_strictly_positive() {
            return Err(Error::NonPositiveFilterValue { step: k });
        }
        let a = smoothing_generator(generator, pi);
        let k1 = &rho * &a;
        let k2 = (&rho + &k1 * (dt / 2.0)) * &a;
        let k3 = (&rho + &k2 * (dt / 2.0)) * &a;
        let k4 = (&rho + &k3 * dt) * &a;
        rho += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        for i in 0..d {
            let col_sum: f64 = rho.column(i).iter().sum();
            if (col_sum - 1.0).abs() > 1e-12 {
                for j in 0..d {
                    rho[(j, i)] /= col_sum;
                }
            }
        }
        matrices.push(rho.clone());
    }
    SmoothingTrajectory::new(dt, matrices)
}

/// Per-time, per-row extremes over the current state.
pub fn spread(rho: &SmoothingTrajectory) -> SpreadDiagnostics {
    let d = rho.dim();
    let per_time = (0..rho.len())
        .map(|k| {
            let m = rho.matrix(k);
            (0..d)
                .map(|j| {
                    let mut r = RowSpread {
                        rho_min: m[(j, 0)],
                        rho_max: m[(j, 0)],
                        spread: 0.0,
                        argmin: 0,
                        argmax: 0,
                    };
                    for i in 1..d {
                        let v = m[(j, i)];
                        if v < r.rho_min {
                            r.rho_min = v;
                            r.argmin = i;
                        }
                        if v > r.rho_max {
                            r.rho_max = v;
                            r.argmax = i;
                        }
                    }
                    r.spread = r.rho_max - r.rho_min;
                    r
                })
                .collect()
        })
        .collect();
    SpreadDiagnostics {
        step: rho.step(),
        per_time,
    }
}

/// Checks the pathwise spread bound against the theoretical decay rate.
pub fn check_key_bound(diag: &SpreadDiagnostics, rate: &RateBound, slack: f64) -> KeyBoundReport {
    let mut report = KeyBoundReport {
        violations: 0,
        first_violation: None,
        worst_margin: f64::INFINITY,
    };
    for k in 0..diag.len() {
        let envelope = slack * (-rate.lambda_star * diag.time(k)).exp();
        let margin = envelope - diag.max_spread(k);
        if margin < report.worst_margin {
            report.worst_margin = margin;
        }
        if margin < 0.0 {
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some(k);
            }
        }
    }
    report
}

/// Posterior of the initial state given the record up to grid time `k`:
/// `j -> sum_i pi_k(i) rho_ji(k dt)`.
pub fn initial_posterior(
    filter: &FilterTrajectory,
    rho: &SmoothingTrajectory,
    k: usize,
) -> Result<ProbabilitySimplex> {
    if filter.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(filter.dim(), rho.dim()));
    }
    let out = rho.matrix(k) * filter.value(k).weights();
    ProbabilitySimplex::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expm::expm;
    use crate::filter::{integrate_filter, IntegratorScheme};
    use crate::observation::{synthesize_observations, ObservationModel};
    use crate::oracle::forward_backward_smoother;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gen2(l12: f64, l21: f64) -> GeneratorMatrix {
        GeneratorMatrix::from_rates(DMatrix::from_row_slice(2, 2, &[0.0, l12, l21, 0.0]))
            .unwrap()
    }

    #[test]
    fn coefficient_matrix_matches_hand_computation() {
        // at rho = identity, d rho_11 / dt = A[1,1] = -lambda_21 pi(2)/pi(1)
        let g = gen2(1.0, 3.0);
        let pi = ProbabilitySimplex::from_slice(&[0.25, 0.75]).unwrap();
        let a = smoothing_generator(&g, &pi);
        assert!((a[(1, 0)] - 3.0 * 0.75 / 0.25).abs() < 1e-14);
        assert!((a[(0, 0)] + 3.0 * 0.75 / 0.25).abs() < 1e-14);
        assert!((a[(0, 1)] - 1.0 * 0.25 / 0.75).abs() < 1e-14);
        // columns sum to zero
        for i in 0..2 {
            assert!(a.column(i).iter().sum::<f64>().abs() < 1e-13);
        }
    }

    fn uniform_regime_trajectory(
        g: &GeneratorMatrix,
        horizon: f64,
        dt: f64,
    ) -> (FilterTrajectory, SmoothingTrajectory) {
        let d = g.dim();
        let nu = ProbabilitySimplex::uniform(d);
        let model = ObservationModel::from_slice(&vec![2.0; d], 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        let path = g.sample_path(&nu, horizon, &mut rng).unwrap();
        let obs = synthesize_observations(&path, &model, dt, true, &mut rng).unwrap();
        let filter =
            integrate_filter(g, &model, &nu, &obs, IntegratorScheme::SplitBayes).unwrap();
        let rho = integrate_smoothing(g, &filter).unwrap();
        (filter, rho)
    }

    #[test]
    fn symmetric_uniform_noise_off_has_matrix_exponential_solution() {
        // symmetric generator + uniform start + constant sensor: pi stays
        // uniform and rho(t) = exp(Lambda t)
        let g = GeneratorMatrix::from_rates(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 0.7, 1.3, 0.7, 0.0, 0.9, 1.3, 0.9, 0.0],
        ))
        .unwrap();
        let dt = 1e-3;
        let (_, rho) = uniform_regime_trajectory(&g, 2.0, dt);
        for k in [0, 500, 1000, 2000] {
            let expect = expm(&(g.entries() * (k as f64 * dt)));
            assert!(
                (rho.matrix(k) - &expect).amax() < 1e-9,
                "k = {k}"
            );
        }
    }

    #[test]
    fn initial_condition_is_identity_and_columns_stay_stochastic() {
        let g = gen2(1.0, 4.0);
        let nu = ProbabilitySimplex::from_slice(&[0.3, 0.7]).unwrap();
        let model = ObservationModel::from_slice(&[0.0, 1.0], 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(67);
        let path = g.sample_path(&nu, 3.0, &mut rng).unwrap();
        let obs = synthesize_observations(&path, &model, 1e-3, false, &mut rng).unwrap();
        let filter =
            integrate_filter(&g, &model, &nu, &obs, IntegratorScheme::SplitBayes).unwrap();
        let rho = integrate_smoothing(&g, &filter).unwrap();
        assert_eq!(rho.matrix(0), &DMatrix::identity(2, 2));
        for k in 0..rho.len() {
            let m = rho.matrix(k);
            for i in 0..2 {
                let s: f64 = m.column(i).iter().sum();
                assert!((s - 1.0).abs() < 1e-8, "k {k} col {i} sum {s}");
                assert!(m.column(i).iter().all(|&x| x >= -1e-12));
            }
        }
    }

    #[test]
    fn matches_forward_backward_oracle() {
        let g = GeneratorMatrix::from_rates(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 1.0, 0.6, 0.8, 0.0, 1.2, 0.5, 0.9, 0.0],
        ))
        .unwrap();
        let nu = ProbabilitySimplex::from_slice(&[0.5, 0.3, 0.2]).unwrap();
        let model = ObservationModel::from_slice(&[-1.0, 0.0, 1.0], 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        let path = g.sample_path(&nu, 2.0, &mut rng).unwrap();
        let obs = synthesize_observations(&path, &model, 1e-3, false, &mut rng).unwrap();
        let filter =
            integrate_filter(&g, &model, &nu, &obs, IntegratorScheme::SplitBayes).unwrap();
        let rho = integrate_smoothing(&g, &filter).unwrap();
        let oracle = forward_backward_smoother(&g, &model, &nu, &obs).unwrap();
        let mut worst = 0.0f64;
        for k in 0..rho.len() {
            worst = worst.max((rho.matrix(k) - oracle.matrix(k)).amax());
        }
        assert!(worst < 1e-3, "worst entrywise gap {worst}");
    }

    #[test]
    fn spread_at_time_zero_is_one() {
        let g = gen2(1.0, 1.0);
        let (_, rho) = uniform_regime_trajectory(&g, 1.0, 1e-3);
        let diag = spread(&rho);
        for j in 0..2 {
            let r = diag.row(0, j);
            assert_eq!(r.rho_max, 1.0);
            assert_eq!(r.rho_min, 0.0);
            assert_eq!(r.spread, 1.0);
        }
    }

    #[test]
    fn spread_of_constant_columns_is_zero() {
        let m = DMatrix::from_row_slice(2, 2, &[0.4, 0.4, 0.6, 0.6]);
        let traj = SmoothingTrajectory::new(1.0, vec![m]).unwrap();
        let diag = spread(&traj);
        assert_eq!(diag.row(0, 0).spread, 0.0);
        assert_eq!(diag.row(0, 1).spread, 0.0);
    }

    #[test]
    fn spread_matches_exhaustive_scan() {
        let mut rng = ChaCha12Rng::seed_from_u64(73);
        for _ in 0..20 {
            let d = 4;
            let vals: Vec<f64> = (0..d * d).map(|_| rand::Rng::gen::<f64>(&mut rng)).collect();
            let m = DMatrix::from_row_slice(d, d, &vals);
            let traj = SmoothingTrajectory::new(1.0, vec![m.clone()]).unwrap();
            let diag = spread(&traj);
            for j in 0..d {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..d {
                    lo = lo.min(m[(j, i)]);
                    hi = hi.max(m[(j, i)]);
                }
                assert_eq!(diag.row(0, j).rho_min, lo);
                assert_eq!(diag.row(0, j).rho_max, hi);
                assert_eq!(diag.row(0, j).spread, hi - lo);
            }
        }
    }

    #[test]
    fn tie_breaking_takes_the_lowest_index() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let traj = SmoothingTrajectory::new(1.0, vec![m]).unwrap();
        let diag = spread(&traj);
        assert_eq!(diag.row(0, 0).argmin, 0);
        assert_eq!(diag.row(0, 0).argmax, 0);
    }

    #[test]
    fn key_bound_holds_on_a_simulated_path() {
        let g = gen2(1.0, 1.0);
        let nu = ProbabilitySimplex::uniform(2);
        let model = ObservationModel::from_slice(&[0.0, 1.0], 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(79);
        let path = g.sample_path(&nu, 5.0, &mut rng).unwrap();
        let obs = synthesize_observations(&path, &model, 1e-3, false, &mut rng).unwrap();
        let filter =
            integrate_filter(&g, &model, &nu, &obs, IntegratorScheme::SplitBayes).unwrap();
        let rho = integrate_smoothing(&g, &filter).unwrap();
        let diag = spread(&rho);
        let report = check_key_bound(&diag, &g.theoretical_rate(), 1.1);
        assert_eq!(report.violations, 0, "first at {:?}", report.first_violation);
        // spread is nonincreasing along the path
        for k in 1..diag.len() {
            assert!(diag.max_spread(k) <= diag.max_spread(k - 1) + 1e-10);
        }
        // decay exponent over [1, 5] is at most -2 + 0.2
        let lo = (1.0 / 1e-3) as usize;
        let hi = diag.len() - 1;
        let slope = {
            let pts: Vec<(f64, f64)> = (lo..=hi)
                .filter(|&k| diag.max_spread(k) > 1e-12)
                .map(|k| (diag.time(k), diag.max_spread(k).ln()))
                .collect();
            let n = pts.len() as f64;
            let sx: f64 = pts.iter().map(|p| p.0).sum();
            let sy: f64 = pts.iter().map(|p| p.1).sum();
            let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
            (n * sxy - sx * sy) / (n * sxx - sx * sx)
        };
        assert!(slope <= -2.0 + 0.2, "measured decay exponent {slope}");
    }

    #[test]
    fn rough_inequality_holds_pointwise() {
        // lambda_12 pi(1)/pi(2) + lambda_21 pi(2)/pi(1) >= 2 sqrt(l12 l21)
        let g = gen2(0.8, 2.3);
        let nu = ProbabilitySimplex::from_slice(&[0.6, 0.4]).unwrap();
        let model = ObservationModel::from_slice(&[0.0, 1.0], 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(83);
        let path = g.sample_path(&nu, 2.0, &mut rng).unwrap();
        let obs = synthesize_observations(&path, &model, 1e-3, false, &mut rng).unwrap();
        let filter =
            integrate_filter(&g, &model, &nu, &obs, IntegratorScheme::SplitBayes).unwrap();
        let floor = 2.0 * (0.8f64 * 2.3).sqrt();
        for k in 0..filter.len() {
            let p = filter.value(k);
            let coeff = 0.8 * p.get(0) / p.get(1) + 2.3 * p.get(1) / p.get(0);
            assert!(coeff >= floor - 1e-12);
        }
    }

    #[test]
    fn initial_posterior_examples() {
        let g = gen2(1.0, 4.0);
        let nu = ProbabilitySimplex::from_slice(&[0.3, 0.7]).unwrap();
        let model = ObservationModel::from_slice(&[0.0, 1.0], 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(89);
        let path = g.sample_path(&nu, 2.0, &mut rng).unwrap();
        let obs = synthesize_observations(&path, &model, 1e-3, false, &mut rng).unwrap();
        let filter =
            integrate_filter(&g, &model, &nu, &obs, IntegratorScheme::SplitBayes).unwrap();
        let rho = integrate_smoothing(&g, &filter).unwrap();
        // k = 0 returns nu exactly
        let p0 = initial_posterior(&filter, &rho, 0).unwrap();
        assert!((p0.get(0) - 0.3).abs() < 1e-15);
        // any k: output sums to one (enforced by construction, checked raw)
        for k in [100, 1500] {
            let raw = rho.matrix(k) * filter.value(k).weights();
            assert!((raw.sum() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn uninformative_observations_leave_initial_posterior_at_nu() {
        // symmetric generator, uniform start, constant sensor, noise off
        let g = gen2(1.0, 1.0);
        let (filter, rho) = uniform_regime_trajectory(&g, 2.0, 1e-3);
        for k in [0, 777, filter.len() - 1] {
            let p = initial_posterior(&filter, &rho, k).unwrap();
            for i in 0..2 {
                assert!((p.get(i) - 0.5).abs() < 1e-6, "k {k}");
            }
        }
    }

    #[test]
    fn rejects_non_positive_filter_values() {
        let g = gen2(1.0, 1.0);
        let values = vec![
            ProbabilitySimplex::from_slice(&[1.0, 0.0]).unwrap(),
            ProbabilitySimplex::uniform(2),
        ];
        let filter = FilterTrajectory::new(0.1, values).unwrap();
        assert!(matches!(
            integrate_smoothing(&g, &filter),
            Err(Error::NonPositiveFilterValue { step: 0 })
        ));
    }
}
