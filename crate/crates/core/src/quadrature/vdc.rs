use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::engine::{rounding_allowance, QuadratureResult};
use super::kernel::{derivative_bounds, integrate_cell, Amplitude, CompensatedSum, CompiledPhase, ComplexSum, Rule};
use crate::error::{Error, Result};
use crate::grid::BoxRegion;
use crate::polyalg::{monomials_up_to, Polynomial};

/// Shape of the van der Corput bound `(Σ_{0<|α|≤d} |c_α|)^{−1/d}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VdcBound {
    Bound(f64),
    /// The polynomial is constant: no oscillation, no decay.
    NoOscillation,
}

impl VdcBound {
    pub fn value(self) -> f64 {
        match self {
            VdcBound::Bound(b) => b,
            VdcBound::NoOscillation => f64::INFINITY,
        }
    }
}

/// `(Σ_{0<|α|≤d} |c_α|)^{−1/d}` with `d = deg p`, without the constant.
pub fn vdc_bound(p: &Polynomial) -> VdcBound {
    let mass: f64 = p.terms().filter(|(mi, _)| mi.degree() > 0).map(|(_, c)| c.abs()).sum();
    if mass == 0.0 {
        return VdcBound::NoOscillation;
    }
    VdcBound::Bound(mass.powf(-1.0 / f64::from(p.degree())))
}

/// High-order rule for `∫_box e^{iΦ}` with anisotropic panel refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRule {
    /// Gauss–Legendre nodes per axis per panel.
    pub order: usize,
    /// Base cells per axis.
    pub base_cells: usize,
    /// Largest bound on the phase change per node along an axis.
    pub radians_per_node: f64,
    /// Repeat with `order + 16` nodes on the same panels and report the
    /// difference as the error estimate.
    pub estimate_error: bool,
}

impl Default for BoxRule {
    fn default() -> Self {
        BoxRule {
            order: 48,
            base_cells: 8,
            radians_per_node: 1.0,
            estimate_error: true,
        }
    }
}

/// `∫_box e^{iΦ(t)} dt` for a real polynomial phase `Φ`.
///
/// Each base cell is split along axis `i` into enough panels that a bound on
/// `|∂_iΦ|` times the panel width stays below `order·radians_per_node`.
pub fn oscillatory_box_integral(phase: &Polynomial, region: &BoxRegion, rule: &BoxRule) -> Result<QuadratureResult> {
    let m = phase.num_vars();
    if region.dim() != m || m == 0 {
        return Err(Error::arg("box and phase dimensions differ"));
    }
    if rule.order == 0 || rule.base_cells == 0 || !(rule.radians_per_node > 0.0) {
        return Err(Error::arg("box rule parameters must be positive"));
    }
    let base = rule.base_cells;
    let split = m.div_ceil(2);
    let compiled = CompiledPhase::new(phase, split);
    let cells: Vec<(Vec<f64>, Vec<f64>, Vec<usize>)> = (0..base.pow(m as u32))
        .map(|flat| {
            let mut rem = flat;
            let mut lo = vec![0.0; m];
            let mut hi = vec![0.0; m];
            for axis in (0..m).rev() {
                let k = rem % base;
                rem /= base;
                let w = (region.hi[axis] - region.lo[axis]) / base as f64;
                lo[axis] = region.lo[axis] + w * k as f64;
                hi[axis] = lo[axis] + w;
            }
            let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
            let half: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (b - a)).collect();
            let bounds = derivative_bounds(phase, &center, &half);
            let budget = rule.order as f64 * rule.radians_per_node;
            let subdiv = bounds
                .iter()
                .zip(&half)
                .map(|(g, h)| ((2.0 * h * g / budget).ceil() as usize).max(1))
                .collect();
            (lo, hi, subdiv)
        })
        .collect();
    let run = |order: usize| -> (Complex64, f64, u64) {
        let r = Rule::gauss(order);
        let amp = Amplitude::default();
        let parts: Vec<_> = cells
            .par_iter()
            .map(|(lo, hi, s)| integrate_cell(&compiled, &amp, &r, lo, hi, s))
            .collect();
        let mut v = ComplexSum::default();
        let mut a = CompensatedSum::default();
        for p in &parts {
            v.add(p.value);
            a.add(p.abs_sum);
        }
        let panels: u64 = cells.iter().map(|(_, _, s)| s.iter().product::<usize>() as u64).sum();
        (v.value(), a.value(), panels)
    };
    let (v1, mass, panels) = run(rule.order);
    let nodes1 = panels * (rule.order as u64).pow(m as u32);
    if !rule.estimate_error {
        return Ok(QuadratureResult {
            value: v1,
            abs_error_estimate: rounding_allowance(mass),
            panels_used: panels,
            nodes_total: nodes1,
        });
    }
    let order2 = rule.order + 16;
    let (v2, mass2, _) = run(order2);
    Ok(QuadratureResult {
        value: v2,
        abs_error_estimate: (v2 - v1).norm() + rounding_allowance(mass.max(mass2)),
        panels_used: 2 * panels,
        nodes_total: nodes1 + panels * (order2 as u64).pow(m as u32),
    })
}

/// `∫_{[0,1]^m} e^{ip(t)} dt`.
pub fn unit_cube_integral(p: &Polynomial, rule: &BoxRule) -> Result<QuadratureResult> {
    oscillatory_box_integral(p, &BoxRegion::unit(p.num_vars()), rule)
}

/// A random polynomial in `m` variables of degree exactly `d`, zero
/// constant term, and `Σ_{α≠0} |c_α| = 1`.
pub fn random_unit_polynomial<R: Rng>(m: usize, d: u32, rng: &mut R) -> Polynomial {
    loop {
        let terms: Vec<(Vec<u32>, f64)> = monomials_up_to(m, d)
            .into_iter()
            .filter(|mi| mi.degree() > 0)
            .map(|mi| (mi.exponents().to_vec(), rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let mass: f64 = terms.iter().map(|(_, c)| c.abs()).sum();
        let p = Polynomial::from_terms(m, terms.into_iter().map(|(e, c)| (e, c / mass))).expect("consistent exponents");
        if p.degree() == d {
            return p;
        }
    }
}

/// One measured ratio `|∫e^{iλp}| / vdc_bound(λp)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VdcSample {
    pub num_vars: usize,
    pub degree: u32,
    pub lambda: f64,
    pub magnitude: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Largest observed ratio over `samples`.
pub fn empirical_c(samples: &[VdcSample]) -> f64 {
    samples.iter().map(|s| s.ratio).fold(0.0, f64::max)
}

/// Ratios for one `(d, m)` group of the envelope suite.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeGroup {
    pub degree: u32,
    pub num_vars: usize,
    pub polynomials: usize,
    pub empirical_c: f64,
    /// `(λ, max ratio at λ)` in increasing `λ`.
    pub max_ratio_by_lambda: Vec<(f64, f64)>,
    /// Log-log slope, between the two largest `λ`, of the running maximum
    /// of the ratio over all `λ' ≤ λ`. A bounded ratio that oscillates in
    /// `λ` leaves the running maximum flat; growth keeps raising it.
    pub growth_slope: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub groups: Vec<EnvelopeGroup>,
    pub samples: Vec<VdcSample>,
}

impl EnvelopeReport {
    pub fn any_flagged(&self) -> bool {
        self.groups.iter().any(|g| g.flagged)
    }
}

/// Largest tolerated log-log slope of the running maximum ratio before a
/// group is flagged as growing.
pub const GROWTH_SLOPE_LIMIT: f64 = 0.1;

/// Log-log slope of the running maximum of `(λ, ratio)` pairs, sorted by
/// `λ`, between the two largest `λ`.
pub fn running_max_slope(by_lambda: &[(f64, f64)]) -> f64 {
    let n = by_lambda.len();
    assert!(n >= 2, "need two λ values");
    let running = |k: usize| by_lambda[..=k].iter().map(|&(_, r)| r).fold(0.0, f64::max);
    let (l1, l2) = (by_lambda[n - 2].0, by_lambda[n - 1].0);
    (running(n - 1).ln() - running(n - 2).ln()) / (l2.ln() - l1.ln())
}

/// Runs `count` random unit polynomials, spread round-robin over
/// `m ∈ {1, …, max_vars}` and `d ∈ {1, …, max_degree}`, at every `λ`.
pub fn envelope_suite(
    count: usize,
    max_vars: usize,
    max_degree: u32,
    lambdas: &[f64],
    seed: u64,
    rule: &BoxRule,
) -> Result<EnvelopeReport> {
    if count == 0 || max_vars == 0 || max_degree == 0 || lambdas.len() < 2 {
        return Err(Error::arg(
            "envelope suite needs polynomials, variables, degrees and ≥ 2 λ values",
        ));
    }
    let groups: Vec<(usize, u32)> = (1..=max_vars)
        .flat_map(|m| (1..=max_degree).map(move |d| (m, d)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<(usize, u32, Polynomial)> = (0..count)
        .map(|i| {
            let (m, d) = groups[i % groups.len()];
            (m, d, random_unit_polynomial(m, d, &mut rng))
        })
        .collect();
    let mut samples = Vec::with_capacity(count * lambdas.len());
    for (m, d, p) in &polys {
        for &lambda in lambdas {
            let scaled = p.scale(lambda);
            let bound = vdc_bound(&scaled).value();
            let magnitude = unit_cube_integral(&scaled, rule)?.value.norm();
            samples.push(VdcSample {
                num_vars: *m,
                degree: *d,
                lambda,
                magnitude,
                bound,
                ratio: magnitude / bound,
            });
        }
    }
    let mut by_group: BTreeMap<(u32, usize), Vec<&VdcSample>> = BTreeMap::new();
    for s in &samples {
        by_group.entry((s.degree, s.num_vars)).or_default().push(s);
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let out = by_group
        .into_iter()
        .map(|((degree, num_vars), ss)| {
            let max_ratio_by_lambda: Vec<(f64, f64)> = sorted
                .iter()
                .map(|&l| {
                    let r = ss.iter().filter(|s| s.lambda == l).map(|s| s.ratio).fold(0.0, f64::max);
                    (l, r)
                })
                .collect();
            let growth_slope = running_max_slope(&max_ratio_by_lambda);
            EnvelopeGroup {
                degree,
                num_vars,
                polynomials: ss.len() / sorted.len(),
                empirical_c: ss.iter().map(|s| s.ratio).fold(0.0, f64::max),
                max_ratio_by_lambda,
                growth_slope,
                flagged: !(growth_slope <= GROWTH_SLOPE_LIMIT),
            }
        })
        .collect();
    Ok(EnvelopeReport { groups: out, samples })
}
