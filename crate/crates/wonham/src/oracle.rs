//! Discrete-time forward-backward smoothing oracle.
//!
//! The continuous-time smoothing system has an independent discrete
//! counterpart: a hidden Markov chain on the grid with transition matrix
//! `exp(Lambda dt)` and Gaussian emission density `N(h_i dt, sigma^2 dt)`
//! for the observed increment, the emission attached to the state at the
//! end of its interval (matching the predict/correct split). Tracking the
//! joint law of `(X_0, X_k)` along the forward pass yields
//! `P(X_0 = a_j | Y grid, X_k = a_i)` with no differential equation
//! involved, which makes it a genuine cross-check for the RK4 integrator.
//! It is a verification device, not a product feature.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::markov::{GeneratorMatrix, ProbabilitySimplex};
use crate::observation::{ObservationGrid, ObservationModel};
use crate::smoothing::SmoothingTrajectory;

/// Runs the discrete smoother over the whole record, returning the
/// conditional law of the initial state given the record and the current
/// state, at every grid time.
pub fn forward_backward_smoother(
    generator: &GeneratorMatrix,
    model: &ObservationModel,
    nu: &ProbabilitySimplex,
    obs: &ObservationGrid,
) -> Result<SmoothingTrajectory> {
    let d = generator.dim();
    if model.dim() != d || nu.dim() != d {
        return Err(Error::DimensionMismatch(model.dim().max(nu.dim()), d));
    }
    if !nu.is_strictly_positive() {
        return Err(Error::NonPositiveFilterValue { step: 0 });
    }
    let dt = obs.step();
    let transition = generator.transition_matrix(dt)?;
    let sigma2_dt = model.sigma() * model.sigma() * dt;

    // joint[(j,i)] tracks P(X_0 = a_j, X_k = a_i, observations so far),
    // renormalized by its total each step to avoid underflow (the common
    // scale cancels in every conditional law we extract)
    let mut joint = DMatrix::<f64>::from_diagonal(nu.weights());
    let mut matrices = Vec::with_capacity(obs.n_steps() + 1);
    matrices.push(conditional_of_initial(&joint, 0)?);

    for (k, &dy) in obs.increments().iter().enumerate() {
        let mut predicted = &joint * &transition;
        // emission log-weights, shifted by their max
        let mut shift = f64::NEG_INFINITY;
        let mut logw = vec![0.0; d];
        for i in 0..d {
            let resid = dy - model.sensor(i) * dt;
            logw[i] = -resid * resid / (2.0 * sigma2_dt);
            shift = shift.max(logw[i]);
        }
        for i in 0..d {
            let w = (logw[i] - shift).exp();
            for j in 0..d {
                predicted[(j, i)] *= w;
            }
        }
        let total = predicted.sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::DegenerateState { step: k + 1 });
        }
        joint = predicted / total;
        matrices.push(conditional_of_initial(&joint, k + 1)?);
    }
    SmoothingTrajectory::new(dt, matrices)
}

fn conditional_of_initial(joint: &DMatrix<f64>, step: usize) -> Result<DMatrix<f64>> {
    let d = joint.nrows();
    let mut rho = joint.clone();
    for i in 0..d {
        let col_sum: f64 = rho.column(i).iter().sum();
        if !(col_sum > 0.0) {
            return Err(Error::DegenerateState { step });
        }
        for j in 0..d {
            rho[(j, i)] /= col_sum;
        }
    }
    Ok(rho)
}
