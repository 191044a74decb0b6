//! Finite-state continuous-time Markov chain primitives: validated
//! generator matrices, probability vectors on the simplex, exact path
//! sampling, matrix-exponential propagation and the pairwise decay rate
//! `2 min_{p != q} sqrt(lambda_pq lambda_qp)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::expm::expm;

/// Transition intensity matrix of the signal chain. All off-diagonal
/// intensities are strictly positive and every row sums to zero; the
/// diagonal is derived, never supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    entries: DMatrix<f64>,
}

/// The exponential forgetting rate `lambda_star = 2 min sqrt(lambda_pq lambda_qp)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBound {
    pub lambda_star: f64,
}

impl GeneratorMatrix {
    /// Validates a raw intensity matrix. Off-diagonal entries must be
    /// strictly positive; the diagonal of `raw` is ignored and
    /// overwritten so that each row sums to zero.
    pub fn from_rates(raw: DMatrix<f64>) -> Result<Self> {
        let d = raw.nrows();
        if raw.ncols() != d {
            return Err(Error::DimensionMismatch(d, raw.ncols()));
        }
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let mut entries = raw;
        for i in 0..d {
            let mut row_sum = 0.0;
            for j in 0..d {
                if i == j {
                    continue;
                }
                let v = entries[(i, j)];
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::NonPositiveOffDiagonal {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                row_sum += v;
            }
            entries[(i, i)] = -row_sum;
        }
        Ok(GeneratorMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Intensity `lambda_ij` (diagonal entries are the negated exit rates).
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Max absolute row sum norm.
    pub fn sup_norm(&self) -> f64 {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `2 min_{p != q} sqrt(lambda_pq lambda_qp)` over unordered pairs.
    pub fn theoretical_rate(&self) -> RateBound {
        let d = self.dim();
        let mut best = f64::INFINITY;
        for p in 0..d {
            for q in (p + 1)..d {
                let v = (self.rate(p, q) * self.rate(q, p)).sqrt();
                if v < best {
                    best = v;
                }
            }
        }
        RateBound {
            lambda_star: 2.0 * best,
        }
    }

    /// `exp(Lambda t)`, rows are the conditional laws of `X_t` given `X_0`.
    pub fn transition_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        Ok(expm(&(&self.entries * t)))
    }

    /// Solves `mu Lambda = 0`, `sum mu = 1` by least squares on the
    /// augmented system.
    pub fn stationary_distribution(&self) -> Result<ProbabilitySimplex> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d + 1, d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.entries.transpose());
        for j in 0..d {
            m[(d, j)] = 1.0;
        }
        let mut b = DVector::zeros(d + 1);
        b[d] = 1.0;
        let mt = m.transpose();
        let normal = &mt * &m;
        let rhs = &mt * &b;
        let mu = normal.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
        let residual = (self.entries.transpose() * &mu).amax();
        if residual > 1e-10 || mu.iter().any(|&x| x <= 0.0) {
            return Err(Error::SingularSystem);
        }
        ProbabilitySimplex::new(mu)
    }

    /// Exact jump-chain/holding-time sample of the chain on `[0, horizon]`.
    pub fn sample_path<R: Rng + ?Sized>(
        &self,
        initial: &ProbabilitySimplex,
        horizon: f64,
        rng: &mut R,
    ) -> Result<SignalPath> {
        if !(horizon >= 0.0) {
            return Err(Error::NegativeTime(horizon));
        }
        if initial.dim() != self.dim() {
            return Err(Error::DimensionMismatch(initial.dim(), self.dim()));
        }
        let mut state = initial.sample_index(rng);
        let mut times = vec![0.0];
        let mut states = vec![state];
        let mut t = 0.0;
        loop {
            let exit_rate = -self.rate(state, state);
            let u: f64 = rng.gen();
            t += -(1.0 - u).ln() / exit_rate;
            if t >= horizon {
                break;
            }
            // next state j != state with probability lambda_ij / exit rate
            let mut draw = rng.gen::<f64>() * exit_rate;
            let mut next = usize::MAX;
            for j in 0..self.dim() {
                if j == state {
                    continue;
                }
                draw -= self.rate(state, j);
                if draw <= 0.0 {
                    next = j;
                    break;
                }
            }
            if next == usize::MAX {
                // rounding put the draw past the last cell
                next = if state == self.dim() - 1 {
                    self.dim() - 2
                } else {
                    self.dim() - 1
                };
            }
            state = next;
            times.push(t);
            states.push(state);
        }
        Ok(SignalPath {
            horizon,
            times,
            states,
        })
    }
}

/// A distribution on the finite alphabet: nonnegative weights summing to
/// one (renormalized on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySimplex {
    weights: DVector<f64>,
}

impl ProbabilitySimplex {
    pub fn new(weights: DVector<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSimplex);
        }
        if weights.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidSimplex);
        }
        let sum: f64 = weights.sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidSimplex);
        }
        Ok(ProbabilitySimplex {
            weights: weights / sum,
        })
    }

    pub fn from_slice(weights: &[f64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(weights))
    }

    pub fn uniform(d: usize) -> Self {
        ProbabilitySimplex {
            weights: DVector::from_element(d, 1.0 / d as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn min_entry(&self) -> f64 {
        self.weights.min()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.min_entry() > 0.0
    }

    /// Inverse-CDF draw of a state index.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return i;
            }
        }
        self.dim() - 1
    }
}

/// Exact trajectory of the signal chain: right-continuous step function
/// given by jump times and the state held after each jump.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalPath {
    horizon: f64,
    /// `times[0] == 0`; `states[k]` is held on `[times[k], times[k+1])`
    /// and the final state is held until the horizon.
    times: Vec<f64>,
    states: Vec<usize>,
}

impl SignalPath {
    /// Builds a path from an initial state and a list of (time, state)
    /// jumps. Jump times must be strictly increasing inside `(0, horizon]`
    /// and consecutive states must differ.
    pub fn from_jumps(
        horizon: f64,
        initial_state: usize,
        jumps: &[(f64, usize)],
    ) -> Result<Self> {
        let mut times = vec![0.0];
        let mut states = vec![initial_state];
        for &(t, s) in jumps {
            if t <= *times.last().unwrap() || t > horizon {
                return Err(Error::IntervalOutOfRange {
                    a: t,
                    b: t,
                    horizon,
                });
            }
            if s == *states.last().unwrap() {
                return Err(Error::InvalidSimplex);
            }
            times.push(t);
            states.push(s);
        }
        Ok(SignalPath {
            horizon,
            times,
            states,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn num_jumps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn initial_state(&self) -> usize {
        self.states[0]
    }

    /// State held at time `t` (right-continuous).
    pub fn state_at(&self, t: f64) -> usize {
        let idx = self.times.partition_point(|&x| x <= t);
        self.states[idx.saturating_sub(1)]
    }

    /// Constant segments `(start, end, state)` covering `[0, horizon]`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        (0..self.times.len()).map(move |k| {
            let end = if k + 1 < self.times.len() {
                self.times[k + 1]
            } else {
                self.horizon
            };
            (self.times[k], end, self.states[k])
        })
    }

    /// Total time spent in `state`.
    pub fn occupation_time(&self, state: usize) -> f64 {
        self.segments()
            .filter(|&(_, _, s)| s == state)
            .map(|(a, b, _)| b - a)
            .sum()
    }
}
