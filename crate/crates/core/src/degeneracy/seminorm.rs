use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{degenerate_generators, DegenerateBasis, ProjectionTriple};
use crate::error::{Error, Result};
use crate::linalg::{self, DROP_TOL};
use crate::polyalg::{split_p0_pstar, Polynomial};

/// Sampled lower envelope of the seminorm sum over the `‖·‖_nd` unit sphere.
#[derive(Debug, Clone)]
pub struct SeminormEstimate {
    /// Smallest seminorm sum found.
    pub c_hat: f64,
    /// A polynomial in `(x₁, x₂, y₁, y₂)` with `‖·‖_nd = 1` attaining `c_hat`.
    pub worst_case: Polynomial,
    pub samples: usize,
    /// `√λ_min` of the combined Gram form; the true minimum is at least this.
    pub lower_bound: f64,
    /// Dimension of the quotient `𝒫(d) / 𝒫_degen` for `κ = 2`.
    pub quotient_dim: usize,
}

/// Bases needed to evaluate the seminorm sum in degree `d`.
///
/// For `P̃` in `(x₁, x₂, y₁, y₂)` write `P̃ = P₀ + P*` with `P₀ = P̃(0,0,·,·)`.
/// The sum is `dist(P*, 𝒟*) + ‖P₀‖_nd`, where the first term is the
/// ℓ²-coefficient distance from `P*` to `𝒟* = {g − g₀ : g degenerate}` and
/// the second uses the `κ = 1` quotient norm in `(x₂, y₂)`. Quotienting the
/// first term by `𝒟*` makes the sum depend on `P̃` only through its class
/// modulo degenerate polynomials.
struct Context {
    inner: DegenerateBasis,
    outer: DegenerateBasis,
    dstar: Vec<DVector<f64>>,
}

impl Context {
    fn new(d: u32) -> Result<Self> {
        let inner = DegenerateBasis::build(d, &ProjectionTriple::canonical(1))?;
        let triple = ProjectionTriple::canonical(2);
        let outer = DegenerateBasis::build(d, &triple)?;
        let mut stars = Vec::new();
        for g in degenerate_generators(&triple, d)? {
            let (_, gstar) = split_p0_pstar(&g, 2)?;
            stars.push(outer.space().to_vector(&gstar)?);
        }
        let dstar = linalg::orthonormalize(&stars, DROP_TOL);
        Ok(Context { inner, outer, dstar })
    }

    fn parts(&self, p: &Polynomial) -> Result<(f64, f64)> {
        let (p0, pstar) = split_p0_pstar(p, 2)?;
        let v = self.outer.space().to_vector(&pstar)?;
        let first = linalg::residual(&v, &self.dstar).norm();
        let second = self.inner.nd_norm(&p0)?.nd_value;
        Ok((first, second))
    }
}

/// `dist(P*, 𝒟*) + ‖P₀‖_nd` for a polynomial in `(x₁, x₂, y₁, y₂)` of
/// degree `≤ d`.
pub fn seminorm_sum(p: &Polynomial, d: u32) -> Result<f64> {
    let ctx = Context::new(d)?;
    let (a, b) = ctx.parts(p)?;
    Ok(a + b)
}

fn objective(a: &DMatrix<f64>, b: &DMatrix<f64>, u: &DVector<f64>) -> f64 {
    (a * u).norm() + (b * u).norm()
}

fn gradient(a: &DMatrix<f64>, b: &DMatrix<f64>, u: &DVector<f64>) -> DVector<f64> {
    let mut g = DVector::zeros(u.len());
    for m in [a, b] {
        let mu = m * u;
        let n = mu.norm();
        if n > 1e-14 {
            g += m.transpose() * mu / n;
        }
    }
    g
}

/// Projected gradient descent on the unit sphere with step halving.
fn descend(a: &DMatrix<f64>, b: &DMatrix<f64>, start: &DVector<f64>) -> (f64, DVector<f64>) {
    let mut u = start.normalize();
    let mut f = objective(a, b, &u);
    let mut step = 0.5;
    for _ in 0..500 {
        let g = gradient(a, b, &u);
        let tangent = &g - &u * g.dot(&u);
        if tangent.norm() < 1e-13 {
            break;
        }
        let mut improved = false;
        let mut t = step * 2.0;
        for _ in 0..50 {
            let cand = (&u - &tangent * t).normalize();
            let fc = objective(a, b, &cand);
            if fc < f {
                improved = f - fc > 1e-15;
                u = cand;
                f = fc;
                step = t;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (f, u)
}

/// Estimates the largest `c` with `dist(P*, 𝒟*) + ‖P₀‖_nd ≥ c·‖P̃‖_nd` in
/// degree `d`, by sampling Gaussian directions in the quotient complement
/// and refining the best few by local descent.
pub fn estimate_seminorm_constant(d: u32, num_samples: usize, seed: u64) -> Result<SeminormEstimate> {
    if d == 0 {
        return Err(Error::arg("degree must be at least 1"));
    }
    if num_samples == 0 {
        return Err(Error::arg("need at least one sample"));
    }
    let ctx = Context::new(d)?;
    let w = ctx.outer.complement();
    let n = w.len();
    let inner_comp = ctx.inner.complement();
    let dstar_comp = linalg::complement(&ctx.dstar, ctx.outer.ambient_dim());
    let mut a = DMatrix::zeros(inner_comp.len(), n);
    let mut b = DMatrix::zeros(dstar_comp.len(), n);
    for (i, wi) in w.iter().enumerate() {
        let p = ctx.outer.space().to_polynomial(wi);
        let (p0, pstar) = split_p0_pstar(&p, 2)?;
        let v0 = ctx.inner.space().to_vector(&p0)?;
        for (r, c) in inner_comp.iter().enumerate() {
            a[(r, i)] = c.dot(&v0);
        }
        let vs = ctx.outer.space().to_vector(&pstar)?;
        for (r, c) in dstar_comp.iter().enumerate() {
            b[(r, i)] = c.dot(&vs);
        }
    }
    let gram = a.transpose() * &a + b.transpose() * &b;
    let lambda_min = SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let lower_bound = lambda_min.max(0.0).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scored: Vec<(f64, DVector<f64>)> = (0..num_samples)
        .map(|_| {
            let u = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng)).normalize();
            (objective(&a, &b, &u), u)
        })
        .collect();
    scored.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = scored[0].clone();
    for (_, start) in scored.iter().take(8) {
        let (f, u) = descend(&a, &b, start);
        if f < best.0 {
            best = (f, u);
        }
    }
    let (c_hat, u) = best;
    let coeffs = w
        .iter()
        .zip(u.iter())
        .fold(DVector::zeros(ctx.outer.ambient_dim()), |acc, (wi, &ui)| acc + wi * ui);
    let worst_case = ctx.outer.space().to_polynomial(&coeffs);
    Ok(SeminormEstimate {
        c_hat,
        worst_case,
        samples: num_samples,
        lower_bound,
        quotient_dim: n,
    })
}
