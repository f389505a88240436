use rayon::prelude::*;

use super::fit::{fit_power_law, FitWindow};
use crate::degeneracy::{DegenerateBasis, ProjectionTriple};
use crate::error::{Error, Result};
use crate::polyalg::Polynomial;
use crate::quadrature::{integrate_oscillatory, Cutoff, Factor, QuadPolicy, QuadratureResult};

/// A λ-sweep of `|I(λP)|` together with its power-law fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub lambdas: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub panels: Vec<u64>,
    pub log_c: f64,
    pub epsilon_hat: f64,
    pub r_squared: f64,
    /// First and last fitted index.
    pub window: (usize, usize),
    pub used: Vec<bool>,
    /// `‖P‖_nd` of the swept polynomial, when known.
    pub nd_norm: Option<f64>,
}

impl DecayFit {
    /// Below this `r²` the fit only describes the data, it does not
    /// support a decay claim.
    pub const MIN_CREDIBLE_R2: f64 = 0.8;

    pub fn is_credible(&self) -> bool {
        self.r_squared >= Self::MIN_CREDIBLE_R2
    }
}

fn check_grid(lambdas: &[f64], min_points: usize) -> Result<()> {
    if lambdas.len() < min_points {
        return Err(Error::arg(format!(
            "λ grid has {} points, need at least {min_points}",
            lambdas.len()
        )));
    }
    if lambdas[0] < 1.0 || lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::arg("λ grid must be strictly increasing with all λ ≥ 1"));
    }
    Ok(())
}

/// Sweeps an arbitrary λ-dependent integral. The λ points are evaluated
/// in parallel and assembled in grid order.
pub fn lambda_sweep_with<F>(lambdas: &[f64], window: &FitWindow, integral: F) -> Result<DecayFit>
where
    F: Fn(f64) -> Result<QuadratureResult> + Sync,
{
    check_grid(lambdas, 4)?;
    let results: Vec<QuadratureResult> = lambdas.par_iter().map(|&l| integral(l)).collect::<Result<Vec<_>>>()?;
    let magnitudes: Vec<f64> = results.iter().map(|r| r.value.norm()).collect();
    let error_estimates: Vec<f64> = results.iter().map(|r| r.abs_error_estimate).collect();
    let fit = fit_power_law(lambdas, &magnitudes, Some(&error_estimates), window)?;
    Ok(DecayFit {
        lambdas: lambdas.to_vec(),
        magnitudes,
        error_estimates,
        panels: results.iter().map(|r| r.panels_used).collect(),
        log_c: fit.log_c,
        epsilon_hat: fit.epsilon_hat,
        r_squared: fit.r_squared,
        window: fit.window,
        used: fit.used,
        nd_norm: None,
    })
}

/// `‖P‖_nd` for the canonical triple in `κ = num_vars/2 ≤ 2` dimensions.
pub fn canonical_nd_norm(p: &Polynomial) -> Result<f64> {
    let kappa = p.num_vars() / 2;
    if !p.num_vars().is_multiple_of(2) || kappa == 0 {
        return Err(Error::arg("polynomial must have an even number of variables"));
    }
    let basis = DegenerateBasis::build(p.degree().max(1), &ProjectionTriple::canonical(kappa))?;
    Ok(basis.nd_norm(p)?.nd_value)
}

/// Sweeps `|I(λP; f₁, f₂, f₃)|` over `lambdas` (at least 8 points) and fits
/// the decay exponent.
pub fn lambda_sweep(
    p: &Polynomial,
    factors: &[Factor; 3],
    eta: &Cutoff,
    lambdas: &[f64],
    policy: &QuadPolicy,
    window: &FitWindow,
) -> Result<DecayFit> {
    check_grid(lambdas, 8)?;
    let mut fit = lambda_sweep_with(lambdas, window, |l| integrate_oscillatory(l, p, factors, eta, policy))?;
    fit.nd_norm = Some(canonical_nd_norm(p)?);
    Ok(fit)
}
