use super::DegenerateBasis;
use crate::error::{Error, Result};
use crate::polyalg::{inner_vars, Polynomial};

/// `Q(x₂,y₂) = ‖P_{(x₂,y₂)}‖²_nd` as a polynomial in `(x₂, y₂)`.
///
/// `P` is a polynomial in `(x₁, x₂, y₁, y₂)` and `inner_basis` a `κ = 1`
/// basis for the inner pair `(x₁, y₁)`. The coefficients of `P_{(x₂,y₂)}`
/// are polynomials in `(x₂, y₂)`; `Q` is the sum of the squares of their
/// inner products with an orthonormal basis of the quotient complement.
pub fn nd_norm_squared_poly(p: &Polynomial, inner_basis: &DegenerateBasis) -> Result<Polynomial> {
    if p.num_vars() != 4 {
        return Err(Error::arg("expected a polynomial in (x₁, x₂, y₁, y₂)"));
    }
    if inner_basis.kappa() != 1 {
        return Err(Error::arg("inner basis must be for κ = 1"));
    }
    let space = inner_basis.space();
    let coeffs = p.coefficients_in(&inner_vars(2))?;
    let mut slots: Vec<(usize, &Polynomial)> = Vec::with_capacity(coeffs.len());
    for (mi, c) in &coeffs {
        let pos = space.position(mi).ok_or_else(|| {
            Error::arg(format!(
                "inner degree {} exceeds basis degree {}",
                mi.degree(),
                inner_basis.degree()
            ))
        })?;
        slots.push((pos, c));
    }
    let mut q = Polynomial::zero(2);
    for w in inner_basis.complement() {
        let mut proj = Polynomial::zero(2);
        for &(pos, c) in &slots {
            if w[pos] != 0.0 {
                proj = &proj + &c.scale(w[pos]);
            }
        }
        q = &q + &(&proj * &proj);
    }
    let cap = (2 * p.degree()).max(q.degree());
    q.with_max_degree(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::ProjectionTriple;

    fn basis(d: u32) -> DegenerateBasis {
        DegenerateBasis::build(d, &ProjectionTriple::canonical(1)).unwrap()
    }

    // variables are (x₁, x₂, y₁, y₂)
    fn m(e: [u32; 4], c: f64) -> Polynomial {
        Polynomial::monomial(e.to_vec(), c)
    }

    #[test]
    fn degenerate_inner_part_gives_zero() {
        let q = nd_norm_squared_poly(&m([1, 1, 1, 0], 1.0), &basis(3)).unwrap();
        assert!(q.coeff_norms().full < 1e-12);
    }

    #[test]
    fn constant_half() {
        let q = nd_norm_squared_poly(&m([2, 0, 1, 0], 1.0), &basis(3)).unwrap();
        assert!((q.constant_term() - 0.5).abs() < 1e-12);
        assert!((q.coeff_norms().nc) < 1e-12);
    }

    #[test]
    fn scales_quadratically() {
        let q = nd_norm_squared_poly(&m([2, 1, 1, 0], 1.0), &basis(3)).unwrap();
        assert!((q.coeff(&[2, 0]) - 0.5).abs() < 1e-12);
        assert!(q.max_abs_diff(&Polynomial::monomial(vec![2, 0], 0.5)) < 1e-12);
    }

    #[test]
    fn inner_degree_overflow_rejected() {
        assert!(nd_norm_squared_poly(&m([2, 0, 2, 0], 1.0), &basis(3)).is_err());
    }
}
