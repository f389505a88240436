//! λ-sweeps and power-law fits of `|I(λP)|`, sublevel-set measures, and
//! the degenerate-phase counterexample.

mod counterexample;
mod fit;
mod sublevel;
mod sweep;

pub use counterexample::{degenerate_counterexample, Counterexample, CounterexampleGrids};
pub use fit::{fit_power_law, geometric_grid, FitWindow, PowerLaw};
pub use sublevel::{fit_sublevel_exponent, sublevel_measure, SublevelMethod, SublevelReport};
pub use sweep::{canonical_nd_norm, lambda_sweep, lambda_sweep_with, DecayFit};

use crate::error::{Error, Result};

/// The exponent `2ρδ/(ρ+δ)` obtained by balancing an oscillatory bound
/// `λ^{−ρ}`-type decay against a sublevel bound `ε^{δ}`.
pub fn lemma_first_exponent(rho: f64, delta: f64) -> Result<f64> {
    if !(rho > 0.0 && delta > 0.0) || !rho.is_finite() || !delta.is_finite() {
        return Err(Error::arg("ρ and δ must be positive and finite"));
    }
    Ok(2.0 * rho * delta / (rho + delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_examples() {
        assert_eq!(lemma_first_exponent(1.0, 1.0).unwrap(), 1.0);
        assert!((lemma_first_exponent(0.5, 0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((lemma_first_exponent(1e6, 0.1).unwrap() - 0.2).abs() < 1e-5);
        assert!(lemma_first_exponent(0.0, 1.0).is_err());
        assert!(lemma_first_exponent(1.0, -1.0).is_err());
    }
}
