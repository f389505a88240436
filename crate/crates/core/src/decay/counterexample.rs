use num_complex::Complex64;

use crate::degeneracy::ProjectionTriple;
use crate::error::{Error, Result};
use crate::grid::{BoxRegion, GridFunction};
use crate::polyalg::Polynomial;
use crate::quadrature::Factor;

/// Functions that absorb a degenerate phase: with `P = Σ p_j ∘ π_j` and
/// `f_j = e^{−iλp_j}`, the integrand of `I(λP; f₁, f₂, f₃)` reduces to `η`.
#[derive(Debug, Clone)]
pub struct Counterexample {
    /// `P = Σ_j p_j ∘ π_j` in `2κ` variables.
    pub p: Polynomial,
    /// The parts `p_j` in `κ` variables.
    pub parts: [Polynomial; 3],
    /// `f_j = e^{−iλp_j}` in closed form, for exact quadrature.
    pub factors: [Factor; 3],
    /// The same functions sampled on the requested boxes.
    pub grids: Option<[GridFunction; 3]>,
}

/// Sampling boxes and resolution for the gridded `f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleGrids {
    pub boxes: [BoxRegion; 3],
    pub samples_per_axis: usize,
}

/// Builds the degenerate counterexample for a canonical triple.
pub fn degenerate_counterexample(
    triple: &ProjectionTriple,
    parts: &[Polynomial; 3],
    lambda: f64,
    grids: Option<&CounterexampleGrids>,
) -> Result<Counterexample> {
    if !triple.is_canonical(0.0) {
        return Err(Error::arg(
            "counterexample needs the canonical triple; normalize the projections first",
        ));
    }
    let kappa = triple.kappa();
    let mut p = Polynomial::zero(2 * kappa);
    for (j, pj) in parts.iter().enumerate() {
        if pj.num_vars() != kappa {
            return Err(Error::arg(format!("p{} must have {kappa} variables", j + 1)));
        }
        p = &p + &pj.pullback(triple.map(j))?;
    }
    let factors = parts.clone().map(|pj| Factor::phase(-lambda, pj));
    let grids = match grids {
        None => None,
        Some(spec) => {
            let mut out = Vec::with_capacity(3);
            for (j, pj) in parts.iter().enumerate() {
                if spec.boxes[j].dim() != kappa {
                    return Err(Error::arg(format!("box for f{} must be {kappa}-dimensional", j + 1)));
                }
                out.push(GridFunction::from_fn(
                    spec.boxes[j].clone(),
                    spec.samples_per_axis,
                    |u| Complex64::from_polar(1.0, -lambda * pj.eval_unchecked(u)),
                )?);
            }
            Some(out.try_into().expect("three grids"))
        }
    };
    Ok(Counterexample {
        p,
        parts: parts.clone(),
        factors,
        grids,
    })
}
