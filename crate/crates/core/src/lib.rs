//! Trilinear oscillatory integrals `∫∫ e^{iλP(x,y)} f₁(x) f₂(y) f₃(x+y) η(x,y) dx dy`
//! with polynomial phases: degeneracy norms, quadrature, decay fits,
//! sublevel sets and the slicing lemmas behind the decay estimate.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod degeneracy;
pub mod error;
pub mod grid;
mod linalg;
pub mod polyalg;
pub mod quadrature;
pub mod slicing;

pub use decay::{lambda_sweep, sublevel_measure, DecayFit, FitWindow, SublevelMethod, SublevelReport};
pub use degeneracy::{
    build_degenerate_basis, estimate_seminorm_constant, nd_norm, nd_norm_squared_poly, normalize_projections,
    rank3_project, DegenerateBasis, ProjectionTriple, QuotientNormReport,
};
pub use error::{Error, Result};
pub use grid::{BoxRegion, GridFunction};
pub use polyalg::{phase_coefficients, split_p0_pstar, MultiIndex, PhaseTriple, Polynomial};
pub use quadrature::{
    integrate_oscillatory, make_cutoff, vdc_bound, Cutoff, CutoffProfile, CutoffSpec, Factor, QuadPolicy,
    QuadratureResult,
};
pub use slicing::{cousin_approximate, frust_find, CousinResult, DiscretizedSet, SliceWitness, VectorArray};
