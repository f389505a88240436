//! Numerical evaluation of trilinear oscillatory integrals and of the
//! scalar integrals in the van der Corput bound.

mod cutoff;
mod engine;
mod factor;
mod kernel;
mod vdc;

pub use cutoff::{make_cutoff, third_derivative_edge_jump, Cutoff, CutoffProfile, CutoffSpec};
pub use engine::{integrate_oscillatory, total_phase, QuadPolicy, QuadratureResult};
pub use factor::Factor;
pub use vdc::{
    empirical_c, envelope_suite, oscillatory_box_integral, random_unit_polynomial, running_max_slope,
    unit_cube_integral, vdc_bound, BoxRule, EnvelopeGroup, EnvelopeReport, VdcBound, VdcSample, GROWTH_SLOPE_LIMIT,
};
