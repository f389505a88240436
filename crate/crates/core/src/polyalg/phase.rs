use std::collections::BTreeMap;

use super::{binomial, inner_vars, outer_vars, Polynomial};
use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Coefficient functions of three phases that are polynomial of degree `d`
/// in their first variable:
/// `φ₁ = Σ_j θ_{1,j}(x₂) x₁ʲ`, `φ₂ = Σ_k θ_{2,k}(y₂) y₁ᵏ`,
/// `φ₃ = Σ_l θ_{3,l}(x₂+y₂) (x₁+y₁)ˡ`.
///
/// Each θ is a real 1-D grid function, read by nearest-sample lookup.
#[derive(Debug, Clone)]
pub struct PhaseTriple {
    theta1: Vec<GridFunction>,
    theta2: Vec<GridFunction>,
    theta3: Vec<GridFunction>,
}

impl PhaseTriple {
    pub fn new(theta1: Vec<GridFunction>, theta2: Vec<GridFunction>, theta3: Vec<GridFunction>) -> Result<Self> {
        let n = theta1.len();
        if n == 0 || theta2.len() != n || theta3.len() != n {
            return Err(Error::arg("phase coefficient sequences must share length d+1 ≥ 1"));
        }
        let grid = theta1[0].region().clone();
        let samples = theta1[0].samples_per_axis();
        for g in theta1.iter().chain(&theta2).chain(&theta3) {
            if g.dim() != 1 {
                return Err(Error::arg("phase coefficients must be functions of one variable"));
            }
            if g.region() != &grid || g.samples_per_axis() != samples {
                return Err(Error::arg("phase coefficients must share one 1-D grid"));
            }
            if !g.is_real() {
                return Err(Error::arg("phase coefficients must be real-valued"));
            }
        }
        Ok(PhaseTriple { theta1, theta2, theta3 })
    }

    pub fn degree(&self) -> usize {
        self.theta1.len() - 1
    }
}

fn lookup(g: &GridFunction, t: f64) -> Result<f64> {
    Ok(g.nearest(&[t])?.re)
}

/// The coefficients `ψ_jk(x₂,y₂)` of `x₁ʲy₁ᵏ` in the combined phase
/// `λP + φ₁ + φ₂ + φ₃`, for every `j + k ≤ d`.
///
/// `P` is a polynomial in four variables `(x₁, x₂, y₁, y₂)`.
pub fn phase_coefficients(
    phases: &PhaseTriple,
    p: &Polynomial,
    lambda: f64,
    point: (f64, f64),
) -> Result<BTreeMap<(usize, usize), f64>> {
    if p.num_vars() != 4 {
        return Err(Error::arg("phase coefficients need a polynomial in (x₁,x₂,y₁,y₂)"));
    }
    let d = phases.degree();
    if p.degree() as usize > d {
        // any monomial with j + k > d would be dropped silently otherwise
        let inner = p.coefficients_in(&inner_vars(2))?;
        if inner.keys().any(|k| k.degree() as usize > d) {
            return Err(Error::arg("polynomial exceeds the phase degree in (x₁, y₁)"));
        }
    }
    let (x2, y2) = point;
    let coeffs = p.coefficients_in(&inner_vars(2))?;
    debug_assert_eq!(outer_vars(2), vec![1, 3]);
    let mut out = BTreeMap::new();
    for j in 0..=d {
        for k in 0..=(d - j) {
            let mut psi = 0.0;
            if k == 0 {
                psi += lookup(&phases.theta1[j], x2)?;
            }
            if j == 0 {
                psi += lookup(&phases.theta2[k], y2)?;
            }
            psi += binomial((j + k) as u32, k as u32) * lookup(&phases.theta3[j + k], x2 + y2)?;
            let key = super::MultiIndex::new(vec![j as u32, k as u32]);
            if let Some(c) = coeffs.get(&key) {
                psi += lambda * c.eval_unchecked(&[x2, y2]);
            }
            out.insert((j, k), psi);
        }
    }
    Ok(out)
}
