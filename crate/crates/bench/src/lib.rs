//! Shared inputs for the benchmarks.

use trilin::{make_cutoff, Cutoff, CutoffSpec, DiscretizedSet, Factor, Polynomial, VectorArray};

/// `x²y` in `(x, y)`.
pub fn x2y() -> Polynomial {
    Polynomial::monomial(vec![2, 1], 1.0)
}

/// A dense degree-`d` polynomial in `(x₁, x₂, y₁, y₂)` with deterministic
/// coefficients.
pub fn dense_kappa2(d: u32) -> Polynomial {
    let terms = trilin::polyalg::monomials_up_to(4, d)
        .into_iter()
        .enumerate()
        .map(|(k, mi)| (mi.exponents().to_vec(), ((k * 37 % 17) as f64 - 8.0) / 8.0));
    Polynomial::from_terms(4, terms).expect("four variables")
}

pub fn default_cutoff(kappa: usize) -> Cutoff {
    make_cutoff(CutoffSpec::centered(kappa)).expect("valid cutoff")
}

pub fn ones() -> [Factor; 3] {
    [Factor::one(), Factor::one(), Factor::one()]
}

/// The band `|x − x′| < w` with `f(x) = x` on both sides.
pub fn band(n: usize, w: f64) -> (DiscretizedSet, VectorArray) {
    let e = DiscretizedSet::from_fn(n, |x, y| (x - y).abs() < w);
    let f = VectorArray::from_fn(n, 1, |x| vec![x]).expect("one component");
    (e, f)
}
