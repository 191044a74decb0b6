//! Observation synthesis: `Y_t = int_0^t h(X_s) ds + sigma W_t` sampled
//! as increments on a uniform grid. The drift integral is computed
//! exactly from the constant segments of the signal path; noise enters
//! only through one Gaussian increment per grid step.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::fmt_float;
use crate::markov::SignalPath;

/// Sensor map `h` over the alphabet plus noise intensity `sigma > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationModel {
    h: DVector<f64>,
    sigma: f64,
}

impl ObservationModel {
    pub fn new(h: DVector<f64>, sigma: f64) -> Result<Self> {
        if h.is_empty() || h.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("observation.h must be finite".into()));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Config(format!(
                "observation.sigma must be > 0, got {sigma}"
            )));
        }
        Ok(ObservationModel { h, sigma })
    }

    pub fn from_slice(h: &[f64], sigma: f64) -> Result<Self> {
        Self::new(DVector::from_row_slice(h), sigma)
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &DVector<f64> {
        &self.h
    }

    /// Sensor value `h(a_i)`.
    pub fn sensor(&self, i: usize) -> f64 {
        self.h[i]
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Uniform grid of observation increments `dy_k = Y_{(k+1)d} - Y_{kd}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationGrid {
    step: f64,
    increments: Vec<f64>,
}

impl ObservationGrid {
    pub fn new(step: f64, increments: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::GridMismatch {
                step,
                horizon: step * increments.len() as f64,
            });
        }
        if increments.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite observation increment".into()));
        }
        Ok(ObservationGrid { step, increments })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn n_steps(&self) -> usize {
        self.increments.len()
    }

    pub fn horizon(&self) -> f64 {
        self.step * self.increments.len() as f64
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    /// Sums consecutive groups of `factor` increments, producing the same
    /// Brownian record on a grid coarsened by `factor`.
    pub fn coarsen(&self, factor: usize) -> Result<ObservationGrid> {
        if factor == 0 || self.increments.len() % factor != 0 {
            return Err(Error::GridMismatch {
                step: self.step * factor as f64,
                horizon: self.horizon(),
            });
        }
        let increments = self
            .increments
            .chunks(factor)
            .map(|c| c.iter().sum())
            .collect();
        ObservationGrid::new(self.step * factor as f64, increments)
    }

    /// CSV columns: k, t_k, delta_y.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,t,delta_y")?;
        for (k, dy) in self.increments.iter().enumerate() {
            writeln!(out, "{},{},{}", k, fmt_float(self.time(k)), fmt_float(*dy))?;
        }
        Ok(())
    }

    pub fn write_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn read_csv_path<P: AsRef<Path>>(path: P) -> Result<ObservationGrid> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut times = Vec::new();
        let mut increments = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                continue; // header
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields", lineno + 1)));
            }
            let t: f64 = fields[1]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let dy: f64 = fields[2]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            times.push(t);
            increments.push(dy);
        }
        if increments.len() < 2 {
            return Err(Error::Parse("need at least 2 increments".into()));
        }
        let step = times[1] - times[0];
        ObservationGrid::new(step, increments)
    }
}

/// Exact `int_a^b h(X_s) ds` as a finite sum over constant segments.
pub fn drift_integral(path: &SignalPath, h: &DVector<f64>, a: f64, b: f64) -> Result<f64> {
    if !(0.0 <= a && a <= b && b <= path.horizon() + 1e-12) {
        return Err(Error::IntervalOutOfRange {
            a,
            b,
            horizon: path.horizon(),
        });
    }
    let mut total = 0.0;
    for (start, end, state) in path.segments() {
        let lo = start.max(a);
        let hi = end.min(b);
        if hi > lo {
            total += h[state] * (hi - lo);
        }
    }
    Ok(total)
}

/// Generates observation increments on a grid of step `step` tiling the
/// path horizon. With `noise_off` the Gaussian term is forced to zero
/// (the deterministic test hook; distinct from `sigma = 0`).
pub fn synthesize_observations<R: Rng + ?Sized>(
    path: &SignalPath,
    model: &ObservationModel,
    step: f64,
    noise_off: bool,
    rng: &mut R,
) -> Result<ObservationGrid> {
    let horizon = path.horizon();
    if !(step > 0.0) {
        return Err(Error::GridMismatch { step, horizon });
    }
    let n = (horizon / step).round();
    if n < 1.0 || (n * step - horizon).abs() > 1e-12 * horizon.max(1.0) {
        return Err(Error::GridMismatch { step, horizon });
    }
    let n = n as usize;
    let scale = model.sigma() * step.sqrt();
    let mut increments = Vec::with_capacity(n);
    for k in 0..n {
        let a = k as f64 * step;
        let b = if k + 1 == n { horizon } else { (k + 1) as f64 * step };
        let drift = drift_integral(path, model.h(), a, b)?;
        let noise = if noise_off {
            0.0
        } else {
            let xi: f64 = rng.sample(StandardNormal);
            scale * xi
        };
        increments.push(drift + noise);
    }
    ObservationGrid::new(step, increments)
}
