//! Grid discretizations of the Wonham filter SDE
//! `dpi = Lambda* pi dt + (diag(pi) - pi pi*) h sigma^{-2} (dY - h* pi dt)`,
//! integrated from an arbitrary strictly positive simplex point over a
//! fixed observation record.
//!
//! Two schemes are provided. `SplitBayes` alternates exact Markov
//! prediction `exp(Lambda* dt)` with a Gaussian-likelihood Bayes
//! correction and preserves the simplex and positivity structurally.
//! `EulerProjected` is one explicit Euler-Maruyama step followed by a
//! positivity floor and renormalization; it serves as an independent
//! cross-check of the splitting.

use nalgebra::DVector;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::io::fmt_float;
use crate::markov::{GeneratorMatrix, ProbabilitySimplex};
use crate::observation::{ObservationGrid, ObservationModel};

/// Positivity floor applied by `EulerProjected` before renormalization.
pub const POSITIVITY_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorScheme {
    SplitBayes,
    EulerProjected,
}

/// Simplex-valued trajectory on the observation grid; `values[k]` is the
/// conditional law at time `k * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterTrajectory {
    step: f64,
    values: Vec<ProbabilitySimplex>,
}

impl FilterTrajectory {
    pub fn new(step: f64, values: Vec<ProbabilitySimplex>) -> Result<Self> {
        if !(step > 0.0) || values.is_empty() {
            return Err(Error::GridMismatch {
                step,
                horizon: step * values.len() as f64,
            });
        }
        Ok(FilterTrajectory { step, values })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of grid points (n_steps + 1).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize) -> &ProbabilitySimplex {
        &self.values[k]
    }

    pub fn values(&self) -> &[ProbabilitySimplex] {
        &self.values
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    /// CSV columns: t, pi_1..pi_d.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.dim();
        let header: Vec<String> = (1..=d).map(|i| format!("pi_{i}")).collect();
        writeln!(out, "t,{}", header.join(","))?;
        for (k, v) in self.values.iter().enumerate() {
            let row: Vec<String> = v.weights().iter().map(|&x| fmt_float(x)).collect();
            writeln!(out, "{},{}", fmt_float(self.time(k)), row.join(","))?;
        }
        Ok(())
    }

    pub fn write_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn read_csv_path<P: AsRef<Path>>(path: P) -> Result<FilterTrajectory> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                continue;
            }
            let mut fields = line.trim().split(',');
            let t: f64 = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: empty", lineno + 1)))?
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let weights: std::result::Result<Vec<f64>, _> =
                fields.map(|f| f.parse::<f64>()).collect();
            let weights =
                weights.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            times.push(t);
            values.push(ProbabilitySimplex::from_slice(&weights)?);
        }
        if values.len() < 2 {
            return Err(Error::Parse("need at least 2 grid points".into()));
        }
        FilterTrajectory::new(times[1] - times[0], values)
    }
}

/// Total variation norm in the `sum |p_i - q_i|` convention (range [0,2]).
pub fn tv_distance(p: &ProbabilitySimplex, q: &ProbabilitySimplex) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(p.weights()
        .iter()
        .zip(q.weights().iter())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// The constant `d^2 max_j(beta_j/nu_j) max_j(nu_j/beta_j)` in front of
/// the exponential forgetting bound.
pub fn likelihood_ratio_constant(
    beta: &ProbabilitySimplex,
    nu: &ProbabilitySimplex,
) -> Result<f64> {
    if beta.dim() != nu.dim() {
        return Err(Error::DimensionMismatch(beta.dim(), nu.dim()));
    }
    if !beta.is_strictly_positive() || !nu.is_strictly_positive() {
        return Err(Error::NotEquivalent);
    }
    let d = beta.dim() as f64;
    let mut max_bn = 0.0f64;
    let mut max_nb = 0.0f64;
    for i in 0..beta.dim() {
        max_bn = max_bn.max(beta.get(i) / nu.get(i));
        max_nb = max_nb.max(nu.get(i) / beta.get(i));
    }
    Ok(d * d * max_bn * max_nb)
}

/// Integrates the filter over a full observation record. `init` must be
/// strictly positive; both filters of a stability experiment call this
/// with the same `obs`.
pub fn integrate_filter(
    generator: &GeneratorMatrix,
    model: &ObservationModel,
    init: &ProbabilitySimplex,
    obs: &ObservationGrid,
    scheme: IntegratorScheme,
) -> Result<FilterTrajectory> {
    let d = generator.dim();
    if model.dim() != d {
        return Err(Error::DimensionMismatch(model.dim(), d));
    }
    if init.dim() != d {
        return Err(Error::DimensionMismatch(init.dim(), d));
    }
    if !init.is_strictly_positive() {
        return Err(Error::NonPositiveFilterValue { step: 0 });
    }

    let dt = obs.step();
    let sigma2 = model.sigma() * model.sigma();
    let lam_t = generator.entries().transpose();
    // predictor exp(Lambda* dt), fixed for the whole run
    let propagator = expm(&(&lam_t * dt));

    let mut values = Vec::with_capacity(obs.n_steps() + 1);
    values.push(init.clone());
    let mut pi: DVector<f64> = init.weights().clone();
    let mut scratch = DVector::zeros(d);

    for (k, &dy) in obs.increments().iter().enumerate() {
        match scheme {
            IntegratorScheme::SplitBayes => {
                scratch.gemv(1.0, &propagator, &pi, 0.0);
                // likelihood exponent h_i dy / s2 - h_i^2 dt / (2 s2),
                // shifted by its max before exponentiation
                let mut shift = f64::NEG_INFINITY;
                for i in 0..d {
                    let hi = model.sensor(i);
                    let e = hi * dy / sigma2 - hi * hi * dt / (2.0 * sigma2);
                    shift = shift.max(e);
                }
                let mut sum = 0.0;
                for i in 0..d {
                    let hi = model.sensor(i);
                    let e = hi * dy / sigma2 - hi * hi * dt / (2.0 * sigma2);
                    let w = scratch[i] * (e - shift).exp();
                    pi[i] = w;
                    sum += w;
                }
                if !(sum > 0.0) || !sum.is_finite() {
                    return Err(Error::DegenerateState { step: k + 1 });
                }
                pi /= sum;
            }
            IntegratorScheme::EulerProjected => {
                // drift: Lambda* pi dt
                scratch.gemv(dt, &lam_t, &pi, 0.0);
                let h_pi: f64 = (0..d).map(|i| model.sensor(i) * pi[i]).sum();
                let innovation = dy - h_pi * dt;
                let gain_scale = innovation / sigma2;
                for i in 0..d {
                    scratch[i] += pi[i] * (model.sensor(i) - h_pi) * gain_scale;
                }
                pi += &scratch;
                let mut positive_mass = 0.0;
                for i in 0..d {
                    if pi[i].is_nan() {
                        return Err(Error::DegenerateState { step: k + 1 });
                    }
                    if pi[i] > 0.0 {
                        positive_mass += pi[i];
                    }
                }
                if !(positive_mass > 0.0) || !positive_mass.is_finite() {
                    return Err(Error::DegenerateState { step: k + 1 });
                }
                let mut sum = 0.0;
                for i in 0..d {
                    if pi[i] < POSITIVITY_FLOOR {
                        pi[i] = POSITIVITY_FLOOR;
                    }
                    sum += pi[i];
                }
                pi /= sum;
            }
        }
        values.push(ProbabilitySimplex::new(pi.clone())?);
    }

    FilterTrajectory::new(dt, values)
}
