use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::ProjectionTriple;
use crate::error::{Error, Result};
use crate::linalg::{self, DROP_TOL};
use crate::polyalg::{monomials_up_to, MultiIndex, Polynomial, MAX_SUPPORTED_DEGREE};

/// Coordinates of `𝒫(d)`: all monomials of degree `≤ d` in `num_vars`
/// variables, graded-lex ordered, with the ℓ² coefficient inner product.
#[derive(Debug, Clone)]
pub struct MonomialSpace {
    num_vars: usize,
    degree: u32,
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl MonomialSpace {
    pub fn new(num_vars: usize, degree: u32) -> Self {
        let monomials = monomials_up_to(num_vars, degree);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialSpace {
            num_vars,
            degree,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn position(&self, mi: &MultiIndex) -> Option<usize> {
        self.index.get(mi).copied()
    }

    pub fn to_vector(&self, p: &Polynomial) -> Result<DVector<f64>> {
        if p.num_vars() != self.num_vars {
            return Err(Error::arg(format!(
                "polynomial has {} variables, space has {}",
                p.num_vars(),
                self.num_vars
            )));
        }
        let mut v = DVector::zeros(self.dim());
        for (mi, c) in p.terms() {
            let i = self
                .position(mi)
                .ok_or_else(|| Error::arg(format!("monomial {mi:?} exceeds degree cap {}", self.degree)))?;
            v[i] = c;
        }
        Ok(v)
    }

    pub fn to_polynomial(&self, v: &DVector<f64>) -> Polynomial {
        let p = Polynomial::from_terms(
            self.num_vars,
            self.monomials
                .iter()
                .zip(v.iter())
                .filter(|(_, c)| c.abs() >= crate::polyalg::DUST)
                .map(|(m, &c)| (m.exponents().to_vec(), c)),
        )
        .expect("monomials match the space");
        p.with_max_degree(self.degree).expect("within cap")
    }
}

/// Pullbacks `m ∘ π_j` of every monomial `m` of degree `≤ d` in `κ`
/// variables, for `j = 1, 2, 3` in that order.
pub fn degenerate_generators(triple: &ProjectionTriple, d: u32) -> Result<Vec<Polynomial>> {
    let k = triple.kappa();
    let mons = monomials_up_to(k, d);
    let mut out = Vec::with_capacity(3 * mons.len());
    for map in triple.maps() {
        for m in &mons {
            let p = Polynomial::monomial(m.exponents().to_vec(), 1.0);
            out.push(p.pullback(map)?);
        }
    }
    Ok(out)
}

/// Orthonormal basis of the degenerate polynomials of degree `≤ d`.
#[derive(Debug, Clone)]
pub struct DegenerateBasis {
    kappa: usize,
    degree: u32,
    triple: ProjectionTriple,
    space: MonomialSpace,
    vectors: Vec<DVector<f64>>,
    complement: Vec<DVector<f64>>,
}

/// Result of projecting a polynomial off the degenerate subspace.
#[derive(Debug, Clone)]
pub struct QuotientNormReport {
    pub nd_value: f64,
    pub residual: Polynomial,
    pub nearest_degenerate: Polynomial,
}

pub fn build_degenerate_basis(kappa: usize, d: u32, triple: &ProjectionTriple) -> Result<DegenerateBasis> {
    if kappa != triple.kappa() {
        return Err(Error::arg(format!(
            "κ = {kappa} but the triple has κ = {}",
            triple.kappa()
        )));
    }
    DegenerateBasis::build(d, triple)
}

impl DegenerateBasis {
    pub fn build(d: u32, triple: &ProjectionTriple) -> Result<Self> {
        let gens = degenerate_generators(triple, d)?;
        Self::from_generators(d, triple, &gens)
    }

    /// Orthonormalizes the given generators in order. Any ordering of the
    /// same generator set spans the same space.
    pub fn from_generators(d: u32, triple: &ProjectionTriple, generators: &[Polynomial]) -> Result<Self> {
        if d > MAX_SUPPORTED_DEGREE {
            return Err(Error::Validation(format!(
                "degree {d} above supported cap {MAX_SUPPORTED_DEGREE}"
            )));
        }
        // re-validate: triples built by hand bypass nothing, but parsed ones may
        let triple = ProjectionTriple::new(triple.kappa(), triple.maps().clone())?;
        let space = MonomialSpace::new(2 * triple.kappa(), d);
        let vecs = generators
            .iter()
            .map(|g| space.to_vector(g))
            .collect::<Result<Vec<_>>>()?;
        let vectors = linalg::orthonormalize(&vecs, DROP_TOL);
        let complement = linalg::complement(&vectors, space.dim());
        Ok(DegenerateBasis {
            kappa: triple.kappa(),
            degree: d,
            triple,
            space,
            vectors,
            complement,
        })
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn triple(&self) -> &ProjectionTriple {
        &self.triple
    }

    pub fn space(&self) -> &MonomialSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// Orthonormal basis of the orthogonal complement (the quotient
    /// representatives).
    pub fn complement(&self) -> &[DVector<f64>] {
        &self.complement
    }

    pub fn nd_norm(&self, p: &Polynomial) -> Result<QuotientNormReport> {
        if p.degree() > self.degree {
            return Err(Error::arg(format!(
                "polynomial degree {} exceeds basis degree {}",
                p.degree(),
                self.degree
            )));
        }
        let v = self.space.to_vector(p)?;
        let r = linalg::residual(&v, &self.vectors);
        let residual = self.space.to_polynomial(&r);
        let nearest_degenerate = p - &residual;
        Ok(QuotientNormReport {
            nd_value: r.norm(),
            residual,
            nearest_degenerate,
        })
    }

    /// Writes polynomials `p_j` of degree `≤ d` in `κ` variables with
    /// `P = Σ p_j ∘ π_j`. Fails when `P` is not degenerate to `tol`.
    pub fn decompose(&self, p: &Polynomial, tol: f64) -> Result<[Polynomial; 3]> {
        let gens = degenerate_generators(&self.triple, self.degree)?;
        let cols = gens
            .iter()
            .map(|g| self.space.to_vector(g))
            .collect::<Result<Vec<_>>>()?;
        let a = DMatrix::from_columns(&cols);
        let b = self.space.to_vector(p)?;
        let svd = a.clone().svd(true, true);
        let coeffs = svd
            .solve(&b, 1e-10)
            .map_err(|e| Error::Validation(format!("least-squares solve failed: {e}")))?;
        let miss = (&a * &coeffs - &b).norm();
        if miss > tol {
            return Err(Error::Validation(format!(
                "polynomial is not degenerate (residual {miss:.3e})"
            )));
        }
        let mons = monomials_up_to(self.kappa, self.degree);
        let per = mons.len();
        let build = |j: usize| {
            Polynomial::from_terms(
                self.kappa,
                mons.iter()
                    .enumerate()
                    .map(|(i, m)| (m.exponents().to_vec(), coeffs[j * per + i]))
                    .filter(|(_, c)| c.abs() >= crate::polyalg::DUST),
            )
            .expect("κ-variable monomials")
        };
        Ok([build(0), build(1), build(2)])
    }

    /// Flat text form: header `kappa d dim ambient_dim`, then one basis
    /// vector per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {}",
            self.kappa,
            self.degree,
            self.dim(),
            self.ambient_dim()
        );
        for v in &self.vectors {
            let row: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Reads a basis written by [`DegenerateBasis::to_text`] for `triple`.
    pub fn from_text(text: &str, triple: &ProjectionTriple) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let (hl, header) = lines.next().ok_or_else(|| perr(0, "empty basis file".into()))?;
        let h = header
            .split_whitespace()
            .map(str::parse::<usize>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| perr(hl + 1, format!("bad header: {e}")))?;
        let [kappa, d, dim, ambient] = h[..] else {
            return Err(perr(hl + 1, "header must be `kappa d dim ambient_dim`".into()));
        };
        if kappa != triple.kappa() {
            return Err(Error::Validation(format!(
                "basis file has κ = {kappa}, triple has κ = {}",
                triple.kappa()
            )));
        }
        let space = MonomialSpace::new(2 * kappa, d as u32);
        if space.dim() != ambient {
            return Err(perr(hl + 1, format!("ambient dimension should be {}", space.dim())));
        }
        let mut vectors = Vec::with_capacity(dim);
        for (i, l) in lines {
            let row = l
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| perr(i + 1, format!("bad entry: {e}")))?;
            if row.len() != ambient {
                return Err(perr(i + 1, format!("expected {ambient} entries")));
            }
            vectors.push(DVector::from_vec(row));
        }
        if vectors.len() != dim {
            return Err(perr(0, format!("expected {dim} vectors, found {}", vectors.len())));
        }
        let complement = linalg::complement(&vectors, ambient);
        Ok(DegenerateBasis {
            kappa,
            degree: d as u32,
            triple: triple.clone(),
            space,
            vectors,
            complement,
        })
    }
}

/// Convenience wrapper: the quotient norm of `p` against `basis`.
pub fn nd_norm(p: &Polynomial, basis: &DegenerateBasis) -> Result<QuotientNormReport> {
    basis.nd_norm(p)
}
