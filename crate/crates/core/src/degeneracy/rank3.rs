use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::polyalg::{MultiIndex, Polynomial};

/// Projection of a degree-`k` form onto `span{xᵏ, yᵏ, (x+y)ᵏ}`.
#[derive(Debug, Clone)]
pub struct Rank3Projection {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub residual: Polynomial,
}

impl Rank3Projection {
    /// `q₁xᵏ + q₂yᵏ + q₃(x+y)ᵏ`.
    pub fn projection(&self, k: u32) -> Polynomial {
        let [a, b, c] = spanning_forms(k);
        &(&a.scale(self.q1) + &b.scale(self.q2)) + &c.scale(self.q3)
    }
}

fn spanning_forms(k: u32) -> [Polynomial; 3] {
    let x = Polynomial::monomial(vec![k, 0], 1.0);
    let y = Polynomial::monomial(vec![0, k], 1.0);
    let s = (&Polynomial::var(2, 0) + &Polynomial::var(2, 1)).pow(k);
    [x, y, s]
}

/// Orthogonal (ℓ²-coefficient) projection of a homogeneous polynomial of
/// degree `k` in two variables onto `span{xᵏ, yᵏ, (x+y)ᵏ}`.
///
/// The coefficients are unique for `k ≥ 2`. For `k = 1` the span is
/// two-dimensional and `q₃ = 0`; for `k = 0` it is one-dimensional and
/// `q₂ = q₃ = 0`.
pub fn rank3_project(p: &Polynomial, k: u32) -> Result<Rank3Projection> {
    if p.num_vars() != 2 {
        return Err(Error::arg("rank-3 projection needs a polynomial in two variables"));
    }
    if p.terms().any(|(mi, _)| mi.degree() != k) {
        return Err(Error::arg(format!("polynomial is not homogeneous of degree {k}")));
    }
    let forms = spanning_forms(k);
    let used = match k {
        0 => 1,
        1 => 2,
        _ => 3,
    };
    let mons: Vec<MultiIndex> = (0..=k).map(|i| MultiIndex::new(vec![k - i, i])).collect();
    let a = DMatrix::from_fn(mons.len(), used, |r, c| forms[c].coeff(mons[r].exponents()));
    let b = DVector::from_fn(mons.len(), |r, _| p.coeff(mons[r].exponents()));
    let gram = a.transpose() * &a;
    let rhs = a.transpose() * b;
    let sol = gram
        .cholesky()
        .ok_or_else(|| Error::Validation("spanning forms are dependent".into()))?
        .solve(&rhs);
    let mut q = [0.0; 3];
    q[..used].copy_from_slice(sol.as_slice());
    let mut out = Rank3Projection {
        q1: q[0],
        q2: q[1],
        q3: q[2],
        residual: Polynomial::zero(2),
    };
    out.residual = p - &out.projection(k);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[([u32; 2], f64)]) -> Polynomial {
        Polynomial::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn pure_power() {
        let r = rank3_project(&p(&[([3, 0], 1.0)]), 3).unwrap();
        assert!((r.q1 - 1.0).abs() < 1e-12 && r.q2.abs() < 1e-12 && r.q3.abs() < 1e-12);
        assert!(r.residual.is_zero());
    }

    #[test]
    fn mixed_cubic() {
        let r = rank3_project(&p(&[([2, 1], 1.0), ([1, 2], 1.0)]), 3).unwrap();
        let third = 1.0 / 3.0;
        assert!((r.q1 + third).abs() < 1e-12);
        assert!((r.q2 + third).abs() < 1e-12);
        assert!((r.q3 - third).abs() < 1e-12);
        assert!(r.residual.coeff_norms().full < 1e-12);
    }

    #[test]
    fn linear_and_constant_rules() {
        let r = rank3_project(&p(&[([1, 0], 2.0), ([0, 1], -5.0)]), 1).unwrap();
        assert_eq!((r.q1, r.q2, r.q3), (2.0, -5.0, 0.0));
        assert!(r.residual.is_zero());
        let r = rank3_project(&Polynomial::constant(2, 7.0), 0).unwrap();
        assert_eq!((r.q1, r.q2, r.q3), (7.0, 0.0, 0.0));
    }

    #[test]
    fn residual_orthogonal_and_idempotent() {
        let q = p(&[([2, 1], 1.0), ([1, 2], -2.0), ([3, 0], 0.5)]);
        let r = rank3_project(&q, 3).unwrap();
        let proj = r.projection(3);
        for f in spanning_forms(3) {
            let dot: f64 = r.residual.terms().map(|(mi, c)| c * f.coeff(mi.exponents())).sum();
            assert!(dot.abs() < 1e-12);
        }
        let again = rank3_project(&proj, 3).unwrap();
        assert!(again.residual.coeff_norms().full < 1e-12);
    }

    #[test]
    fn non_homogeneous_rejected() {
        assert!(rank3_project(&p(&[([1, 0], 1.0), ([2, 0], 1.0)]), 2).is_err());
    }
}
