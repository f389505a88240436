//! Sparse real multivariate polynomials.
//!
//! Polynomials in `2κ` variables use the order `(x₁,…,x_κ, y₁,…,y_κ)`. For
//! `κ = 2` the "inner" pair `(x₁, y₁)` sits at indices `(0, 2)` and the
//! "outer" pair `(x₂, y₂)` at `(1, 3)`; see [`inner_vars`] and [`outer_vars`].

mod phase;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use phase::{phase_coefficients, PhaseTriple};

/// Coefficients smaller than this are dropped after arithmetic.
pub const DUST: f64 = 1e-14;

/// Largest ambient degree the library validates against.
pub const MAX_SUPPORTED_DEGREE: u32 = 8;

/// Exponent tuple of a monomial, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(num_vars: usize) -> Self {
        MultiIndex(vec![0; num_vars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of the exponents at the given variable positions.
    pub fn partial_degree(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.0[v]).sum()
    }

    pub fn monomial_value(&self, point: &[f64]) -> f64 {
        self.0.iter().zip(point).map(|(&e, &x)| x.powi(e as i32)).product()
    }

    fn combine(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All multi-indices in `num_vars` variables of total degree `≤ max_degree`,
/// in graded-lexicographic order.
pub fn monomials_up_to(num_vars: usize, max_degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; num_vars];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos == cur.len() {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, max_degree, &mut current, &mut out);
    out.sort();
    out
}

/// `binom(n, k)` as a float; exact for the sizes used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Variable positions of `(x₁, y₁)` in a `2κ`-variable polynomial.
pub fn inner_vars(kappa: usize) -> [usize; 2] {
    [0, kappa]
}

/// Variable positions of `(x₂,…,x_κ, y₂,…,y_κ)` in a `2κ`-variable polynomial.
pub fn outer_vars(kappa: usize) -> Vec<usize> {
    (1..kappa).chain(kappa + 1..2 * kappa).collect()
}

/// ℓ² coefficient norms: the full norm and the norm modulo constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffNorms {
    pub full: f64,
    pub nc: f64,
}

/// A real polynomial stored as a sparse map from multi-index to coefficient.
#[derive(Clone)]
pub struct Polynomial {
    num_vars: usize,
    max_degree: u32,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            max_degree: 0,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: f64) -> Self {
        let mut p = Self::zero(num_vars);
        if value != 0.0 {
            p.coeffs.insert(MultiIndex::zero(num_vars), value);
        }
        p
    }

    /// The coordinate function `z ↦ z[index]`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn monomial(exponents: Vec<u32>, coeff: f64) -> Self {
        let mut p = Self::zero(exponents.len());
        let mi = MultiIndex(exponents);
        p.max_degree = mi.degree();
        if coeff != 0.0 {
            p.coeffs.insert(mi, coeff);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::arg(format!(
                    "monomial has {} exponents, expected {num_vars}",
                    e.len()
                )));
            }
            let mi = MultiIndex(e);
            p.max_degree = p.max_degree.max(mi.degree());
            *p.coeffs.entry(mi).or_insert(0.0) += c;
        }
        p.coeffs.retain(|_, c| *c != 0.0);
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Declared ambient degree cap `d`; every stored monomial has degree `≤ d`.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Actual total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Raises the declared degree cap.
    pub fn with_max_degree(mut self, d: u32) -> Result<Self> {
        if d < self.degree() {
            return Err(Error::arg(format!(
                "degree cap {d} below actual degree {}",
                self.degree()
            )));
        }
        self.max_degree = d;
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    pub fn coeff(&self, exponents: &[u32]) -> f64 {
        self.coeffs.get(&MultiIndex(exponents.to_vec())).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&vec![0; self.num_vars])
    }

    fn canonicalize(mut self) -> Self {
        self.coeffs.retain(|_, c| c.abs() >= DUST);
        self
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.num_vars {
            return Err(Error::arg(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.num_vars
            )));
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[f64]) -> f64 {
        self.coeffs.iter().map(|(mi, c)| c * mi.monomial_value(point)).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= factor;
        }
        out.canonicalize()
    }

    fn check_same_vars(&self, other: &Polynomial) {
        assert_eq!(
            self.num_vars, other.num_vars,
            "polynomials live in different variable counts"
        );
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::constant(self.num_vars, 1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `p ∘ π` for a linear map `π : ℝ^{cols} → ℝ^{rows}`, `rows = p.num_vars()`.
    pub fn pullback(&self, pi: &DMatrix<f64>) -> Result<Self> {
        self.affine_pullback(pi, None)
    }

    /// `z ↦ p(π z + offset)`.
    pub fn affine_pullback(&self, pi: &DMatrix<f64>, offset: Option<&[f64]>) -> Result<Self> {
        if pi.nrows() != self.num_vars {
            return Err(Error::arg(format!(
                "map has {} rows, polynomial has {} variables",
                pi.nrows(),
                self.num_vars
            )));
        }
        if let Some(o) = offset {
            if o.len() != pi.nrows() {
                return Err(Error::arg("offset length does not match map rows"));
            }
        }
        let m = pi.ncols();
        let forms: Vec<Polynomial> = (0..pi.nrows())
            .map(|r| {
                let mut terms: Vec<(Vec<u32>, f64)> = (0..m)
                    .map(|c| {
                        let mut e = vec![0; m];
                        e[c] = 1;
                        (e, pi[(r, c)])
                    })
                    .collect();
                if let Some(o) = offset {
                    terms.push((vec![0; m], o[r]));
                }
                Polynomial::from_terms(m, terms).expect("well-formed linear form")
            })
            .collect();
        // powers[r][k] = forms[r]^k, built lazily up to the needed degree
        let mut powers: Vec<Vec<Polynomial>> = forms.iter().map(|_| vec![Polynomial::constant(m, 1.0)]).collect();
        let mut out = Polynomial::zero(m);
        for (mi, c) in &self.coeffs {
            let mut term = Polynomial::constant(m, c.to_owned());
            for (r, &e) in mi.exponents().iter().enumerate() {
                while powers[r].len() <= e as usize {
                    let next = powers[r].last().unwrap() * &forms[r];
                    powers[r].push(next);
                }
                if e > 0 {
                    term = &term * &powers[r][e as usize];
                }
            }
            out = &out + &term;
        }
        out.max_degree = self.max_degree;
        Ok(out.canonicalize())
    }

    /// `z ↦ p(z + offset)`.
    pub fn shift(&self, offset: &[f64]) -> Result<Self> {
        let id = DMatrix::identity(self.num_vars, self.num_vars);
        self.affine_pullback(&id, Some(offset))
    }

    /// Substitutes fixed values for the listed variables; the remaining
    /// variables keep their relative order.
    pub fn freeze(&self, fixed_vars: &[usize], values: &[f64]) -> Result<Self> {
        if fixed_vars.len() != values.len() {
            return Err(Error::arg("fixed_vars and values differ in length"));
        }
        let mut is_fixed = vec![None; self.num_vars];
        for (&v, &x) in fixed_vars.iter().zip(values) {
            if v >= self.num_vars {
                return Err(Error::arg(format!(
                    "variable index {v} out of range for {} variables",
                    self.num_vars
                )));
            }
            if is_fixed[v].is_some() {
                return Err(Error::arg(format!("variable index {v} fixed twice")));
            }
            is_fixed[v] = Some(x);
        }
        let remaining = self.num_vars - fixed_vars.len();
        let mut out = Polynomial::zero(remaining);
        for (mi, c) in &self.coeffs {
            let mut coeff = *c;
            let mut e = Vec::with_capacity(remaining);
            for (v, &ex) in mi.exponents().iter().enumerate() {
                match is_fixed[v] {
                    Some(x) => coeff *= x.powi(ex as i32),
                    None => e.push(ex),
                }
            }
            *out.coeffs.entry(MultiIndex(e)).or_insert(0.0) += coeff;
        }
        out.max_degree = self.max_degree;
        Ok(out.canonicalize())
    }

    /// Re-expresses the polynomial in `num_vars` variables, mapping variable
    /// `i` to position `positions[i]`.
    pub fn embed(&self, num_vars: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.num_vars || positions.iter().any(|&p| p >= num_vars) {
            return Err(Error::arg("embedding positions out of range"));
        }
        let mut out = Polynomial::zero(num_vars);
        for (mi, c) in &self.coeffs {
            let mut e = vec![0; num_vars];
            for (i, &ex) in mi.exponents().iter().enumerate() {
                e[positions[i]] += ex;
            }
            out.coeffs.insert(MultiIndex(e), *c);
        }
        out.max_degree = self.max_degree;
        Ok(out)
    }

    /// Splits into parts of fixed degree in the `selection` variables;
    /// entry `k` holds exactly the monomials of selected degree `k`, for
    /// `k = 0..=max_degree`.
    pub fn homogeneous_parts(&self, selection: &[usize]) -> Result<Vec<Polynomial>> {
        if selection.iter().any(|&v| v >= self.num_vars) {
            return Err(Error::arg("selected variable out of range"));
        }
        let mut parts: Vec<Polynomial> = (0..=self.max_degree)
            .map(|_| {
                let mut p = Polynomial::zero(self.num_vars);
                p.max_degree = self.max_degree;
                p
            })
            .collect();
        for (mi, c) in &self.coeffs {
            let k = mi.partial_degree(selection) as usize;
            parts[k].coeffs.insert(mi.clone(), *c);
        }
        Ok(parts)
    }

    /// Groups terms by their exponents in the `inner` variables; each value
    /// is the coefficient polynomial in the remaining variables.
    pub fn coefficients_in(&self, inner: &[usize]) -> Result<BTreeMap<MultiIndex, Polynomial>> {
        if inner.iter().any(|&v| v >= self.num_vars) {
            return Err(Error::arg("inner variable out of range"));
        }
        let outer: Vec<usize> = (0..self.num_vars).filter(|v| !inner.contains(v)).collect();
        let mut map: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
        for (mi, c) in &self.coeffs {
            let key = MultiIndex(inner.iter().map(|&v| mi.0[v]).collect());
            let rest = MultiIndex(outer.iter().map(|&v| mi.0[v]).collect());
            let entry = map.entry(key).or_insert_with(|| {
                let mut p = Polynomial::zero(outer.len());
                p.max_degree = self.max_degree;
                p
            });
            entry.coeffs.insert(rest, *c);
        }
        Ok(map)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Polynomial::zero(self.num_vars);
        for (mi, c) in &self.coeffs {
            let e = mi.0[var];
            if e == 0 {
                continue;
            }
            let mut d = mi.0.clone();
            d[var] -= 1;
            out.coeffs.insert(MultiIndex(d), c * f64::from(e));
        }
        out.max_degree = self.max_degree.saturating_sub(1);
        out
    }

    pub fn coeff_norms(&self) -> CoeffNorms {
        let mut full = 0.0;
        let mut nc = 0.0;
        for (mi, c) in &self.coeffs {
            full += c * c;
            if mi.degree() > 0 {
                nc += c * c;
            }
        }
        CoeffNorms {
            full: full.sqrt(),
            nc: nc.sqrt(),
        }
    }

    /// Largest coefficient difference; infinite when variable counts differ.
    pub fn max_abs_diff(&self, other: &Polynomial) -> f64 {
        if self.num_vars != other.num_vars {
            return f64::INFINITY;
        }
        let mut m: f64 = 0.0;
        for (mi, c) in &self.coeffs {
            m = m.max((c - other.coeffs.get(mi).copied().unwrap_or(0.0)).abs());
        }
        for (mi, c) in &other.coeffs {
            if !self.coeffs.contains_key(mi) {
                m = m.max(c.abs());
            }
        }
        m
    }
}

/// Splits `P` in `2κ` variables into `P₀ = P(x₁=0, y₁=0, ·)` (a polynomial in
/// the outer variables) and `P* = P − P₀`.
pub fn split_p0_pstar(p: &Polynomial, kappa: usize) -> Result<(Polynomial, Polynomial)> {
    if kappa < 2 || p.num_vars() != 2 * kappa {
        return Err(Error::arg(format!(
            "expected a polynomial in 2κ variables with κ ≥ 2, got {} variables",
            p.num_vars()
        )));
    }
    let inner = inner_vars(kappa);
    let p0 = p.freeze(&inner, &[0.0, 0.0])?;
    let p0_full = p0.embed(p.num_vars(), &outer_vars(kappa))?;
    let pstar = p - &p0_full;
    Ok((p0, pstar))
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}](", self.num_vars)?;
        for (i, (mi, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{mi:?}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_same_vars(rhs);
        let mut out = self.clone();
        for (mi, c) in &rhs.coeffs {
            *out.coeffs.entry(mi.clone()).or_insert(0.0) += c;
        }
        out.max_degree = self.max_degree.max(rhs.max_degree);
        out.canonicalize()
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_same_vars(rhs);
        let mut out = self.clone();
        for (mi, c) in &rhs.coeffs {
            *out.coeffs.entry(mi.clone()).or_insert(0.0) -= c;
        }
        out.max_degree = self.max_degree.max(rhs.max_degree);
        out.canonicalize()
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_same_vars(rhs);
        let mut out = Polynomial::zero(self.num_vars);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                *out.coeffs.entry(a.combine(b)).or_insert(0.0) += ca * cb;
            }
        }
        out.max_degree = self.max_degree + rhs.max_degree;
        out.canonicalize()
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
