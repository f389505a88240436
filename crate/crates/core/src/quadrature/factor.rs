use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{BoxRegion, GridFunction};
use crate::polyalg::Polynomial;

/// One of the functions `f_j : ℝ^κ → ℂ` in the trilinear form.
#[derive(Debug, Clone)]
pub enum Factor {
    /// A constant function.
    Constant(Complex64),
    /// Sampled data, multilinearly interpolated and zero outside its box.
    Grid(GridFunction),
    /// The unimodular function `u ↦ exp(i·scale·p(u))`, evaluated exactly.
    Phase { scale: f64, poly: Polynomial },
}

impl Factor {
    pub fn one() -> Self {
        Factor::Constant(Complex64::new(1.0, 0.0))
    }

    pub fn phase(scale: f64, poly: Polynomial) -> Self {
        Factor::Phase { scale, poly }
    }

    pub fn eval(&self, u: &[f64]) -> Complex64 {
        match self {
            Factor::Constant(c) => *c,
            Factor::Grid(g) => g.eval(u),
            Factor::Phase { scale, poly } => Complex64::from_polar(1.0, scale * poly.eval_unchecked(u)),
        }
    }

    /// The factor with any exact phase removed; phases are carried by the
    /// integrator's phase polynomial instead.
    pub(crate) fn eval_amplitude(&self, u: &[f64]) -> Complex64 {
        match self {
            Factor::Constant(c) => *c,
            Factor::Grid(g) => g.eval(u),
            Factor::Phase { .. } => Complex64::new(1.0, 0.0),
        }
    }

    pub(crate) fn is_unit_amplitude(&self) -> bool {
        match self {
            Factor::Constant(c) => *c == Complex64::new(1.0, 0.0),
            Factor::Grid(_) => false,
            Factor::Phase { .. } => true,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Factor::Constant(c) => c.norm(),
            Factor::Grid(g) => g.max_abs(),
            Factor::Phase { .. } => 1.0,
        }
    }

    /// Box outside which the factor vanishes, if any.
    pub fn support(&self) -> Option<&BoxRegion> {
        match self {
            Factor::Grid(g) => Some(g.region()),
            _ => None,
        }
    }

    pub(crate) fn check_dim(&self, kappa: usize, label: &str) -> Result<()> {
        let dim = match self {
            Factor::Constant(_) => return Ok(()),
            Factor::Grid(g) => g.dim(),
            Factor::Phase { poly, .. } => poly.num_vars(),
        };
        if dim != kappa {
            return Err(Error::arg(format!("{label} is defined on ℝ^{dim}, expected ℝ^{kappa}")));
        }
        Ok(())
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        match self {
            Factor::Constant(c) => Factor::Constant(c.conj()),
            Factor::Grid(g) => Factor::Grid(
                GridFunction::new(
                    g.region().clone(),
                    g.samples_per_axis(),
                    g.values().iter().map(|v| v.conj()).collect(),
                )
                .expect("same shape"),
            ),
            Factor::Phase { scale, poly } => Factor::Phase {
                scale: -scale,
                poly: poly.clone(),
            },
        }
    }
}

impl From<GridFunction> for Factor {
    fn from(g: GridFunction) -> Self {
        Factor::Grid(g)
    }
}
