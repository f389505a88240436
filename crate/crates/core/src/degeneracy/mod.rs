//! Degenerate polynomials for a projection triple and the quotient norm
//! `‖·‖_nd` they induce.
//!
//! A polynomial `P` on `ℝ^{2κ}` is degenerate when `P = Σ_j p_j ∘ π_j` for
//! polynomials `p_j` on `ℝ^κ`. The degenerate polynomials of degree `≤ d`
//! form a subspace of `𝒫(d)`; `‖P‖_nd` is the ℓ²-coefficient distance from
//! `P` to that subspace.

mod basis;
mod qpoly;
mod rank3;
mod seminorm;
mod triple;

pub use basis::{
    build_degenerate_basis, degenerate_generators, nd_norm, DegenerateBasis, MonomialSpace, QuotientNormReport,
};
pub use qpoly::nd_norm_squared_poly;
pub use rank3::{rank3_project, Rank3Projection};
pub use seminorm::{estimate_seminorm_constant, seminorm_sum, SeminormEstimate};
pub use triple::{normalize_projections, Normalization, ProjectionTriple};
