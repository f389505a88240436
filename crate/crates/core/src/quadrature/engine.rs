use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::{derivative_bounds, integrate_cell, Amplitude, CompensatedSum, CompiledPhase, ComplexSum, Rule};
use super::{Cutoff, Factor};
use crate::degeneracy::ProjectionTriple;
use crate::error::{Error, Result};
use crate::grid::BoxRegion;
use crate::polyalg::Polynomial;

/// Refinement policy for [`integrate_oscillatory`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPolicy {
    /// Gauss–Legendre nodes per axis per panel.
    pub order: usize,
    /// Base cells per axis over the support; `None` picks 8 for `κ = 1` and
    /// 4 for `κ = 2`.
    pub base_cells: Option<usize>,
    /// Multiplier on the per-panel phase-variation threshold
    /// `2π·order/10`; smaller values refine more.
    pub threshold_scale: f64,
    /// Largest number of panels (coarse and fine passes together).
    pub panel_budget: u64,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        QuadPolicy {
            order: 8,
            base_cells: None,
            threshold_scale: 1.0,
            panel_budget: 200_000_000,
        }
    }
}

impl QuadPolicy {
    pub fn phase_threshold(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.order as f64 / 10.0 * self.threshold_scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// `|fine − coarse|` plus a rounding allowance.
    pub abs_error_estimate: f64,
    pub panels_used: u64,
    pub nodes_total: u64,
}

impl QuadratureResult {
    pub(crate) fn zero() -> Self {
        QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            panels_used: 0,
            nodes_total: 0,
        }
    }
}

/// Factor of 64 ulps on the absolute integrand mass.
pub(crate) fn rounding_allowance(abs_sum: f64) -> f64 {
    64.0 * f64::EPSILON * abs_sum
}

/// Combined phase `λP + Σ_j s_j·(p_j ∘ π_j)` over the canonical triple.
pub fn total_phase(lambda: f64, p: &Polynomial, factors: &[Factor; 3]) -> Result<Polynomial> {
    let kappa = p.num_vars() / 2;
    let triple = ProjectionTriple::canonical(kappa);
    let mut phi = p.scale(lambda);
    for (j, f) in factors.iter().enumerate() {
        if let Factor::Phase { scale, poly } = f {
            phi = &phi + &poly.pullback(triple.map(j))?.scale(*scale);
        }
    }
    Ok(phi)
}

struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    subdiv: usize,
}

/// `I(λP; f₁, f₂, f₃) = ∫∫ e^{iλP(x,y)} f₁(x) f₂(y) f₃(x+y) η(x,y) dx dy`.
///
/// The support of `η` (clipped to the boxes of gridded `f₁`, `f₂`) is split
/// into base cells; each cell is divided into `s` panels per axis, with `s`
/// the smallest integer for which a rigorous bound on the phase variation
/// across a panel stays below the policy threshold. Phase factors are
/// folded into the phase polynomial, so cancellations between them are
/// exact. The reported value comes from a second pass with `2s` panels per
/// axis; the difference to the first pass is the error estimate.
pub fn integrate_oscillatory(
    lambda: f64,
    p: &Polynomial,
    factors: &[Factor; 3],
    eta: &Cutoff,
    policy: &QuadPolicy,
) -> Result<QuadratureResult> {
    let kappa = eta.kappa();
    let dims = 2 * kappa;
    if p.num_vars() != dims {
        return Err(Error::arg(format!(
            "phase has {} variables, the cutoff lives in ℝ^{dims}",
            p.num_vars()
        )));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::arg("λ must be finite and non-negative"));
    }
    if policy.order == 0 || !(policy.threshold_scale > 0.0) {
        return Err(Error::arg("quadrature order and threshold must be positive"));
    }
    for (j, f) in factors.iter().enumerate() {
        f.check_dim(kappa, &format!("f{}", j + 1))?;
    }
    let Some(domain) = clipped_domain(eta, factors) else {
        return Ok(QuadratureResult::zero());
    };
    if let Some(b3) = factors[2].support() {
        for i in 0..kappa {
            let need_lo = domain.lo[i] + domain.lo[kappa + i];
            let need_hi = domain.hi[i] + domain.hi[kappa + i];
            if b3.lo[i] > need_lo + 1e-12 || b3.hi[i] < need_hi - 1e-12 {
                return Err(Error::arg(format!(
                    "f3 box [{}, {}] on axis {i} does not cover the sumset [{need_lo}, {need_hi}]",
                    b3.lo[i], b3.hi[i]
                )));
            }
        }
    }

    let phi = total_phase(lambda, p, factors)?;
    let base = policy.base_cells.unwrap_or(if kappa == 1 { 8 } else { 4 }).max(1);
    let threshold = policy.phase_threshold();
    let mut cells = cell_grid(&domain, base);
    for cell in &mut cells {
        let center: Vec<f64> = cell.lo.iter().zip(&cell.hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let half: Vec<f64> = cell.lo.iter().zip(&cell.hi).map(|(a, b)| 0.5 * (b - a)).collect();
        let grad = derivative_bounds(&phi, &center, &half)
            .iter()
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt();
        let diam = 2.0 * half.iter().map(|h| h * h).sum::<f64>().sqrt();
        cell.subdiv = ((diam * grad / threshold).ceil() as usize).max(1);
    }
    let panels_for = |cells: &[Cell]| -> u64 {
        cells
            .iter()
            .map(|c| {
                let s = c.subdiv as u64;
                s.pow(dims as u32) + (2 * s).pow(dims as u32)
            })
            .sum()
    };
    let needed = panels_for(&cells);
    let over_budget = needed > policy.panel_budget;
    if over_budget {
        let ratio = (policy.panel_budget as f64 / needed as f64).powf(1.0 / dims as f64);
        for cell in &mut cells {
            cell.subdiv = ((cell.subdiv as f64 * ratio).floor() as usize).max(1);
        }
    }

    let rule = Rule::gauss(policy.order);
    let compiled = CompiledPhase::new(&phi, kappa);
    let fx = |x: &[f64]| -> Complex64 {
        let eta_x: f64 = (0..kappa).map(|i| eta.axis_factor(i, x[i])).product();
        factors[0].eval_amplitude(x) * eta_x
    };
    let fy = |y: &[f64]| -> Complex64 {
        let eta_y: f64 = (0..kappa).map(|i| eta.axis_factor(kappa + i, y[i])).product();
        factors[1].eval_amplitude(y) * eta_y
    };
    let fsum = |s: &[f64]| factors[2].eval_amplitude(s);
    let amp = Amplitude {
        x: Some(&fx),
        y: Some(&fy),
        sum: if factors[2].is_unit_amplitude() {
            None
        } else {
            Some(&fsum)
        },
    };
    let sums: Vec<(Complex64, Complex64, f64)> = cells
        .par_iter()
        .map(|c| {
            let coarse = integrate_cell(&compiled, &amp, &rule, &c.lo, &c.hi, &vec![c.subdiv; dims]);
            let fine = integrate_cell(&compiled, &amp, &rule, &c.lo, &c.hi, &vec![2 * c.subdiv; dims]);
            (coarse.value, fine.value, fine.abs_sum)
        })
        .collect();
    let mut coarse = ComplexSum::default();
    let mut fine = ComplexSum::default();
    let mut mass = CompensatedSum::default();
    for (c, f, a) in &sums {
        coarse.add(*c);
        fine.add(*f);
        mass.add(*a);
    }
    let panels_used = panels_for(&cells);
    let result = QuadratureResult {
        value: fine.value(),
        abs_error_estimate: (fine.value() - coarse.value()).norm() + rounding_allowance(mass.value()),
        panels_used,
        nodes_total: panels_used * (policy.order as u64).pow(dims as u32),
    };
    if over_budget {
        return Err(Error::PanelBudgetExceeded {
            needed,
            budget: policy.panel_budget,
            partial: Box::new(result),
        });
    }
    Ok(result)
}

fn clipped_domain(eta: &Cutoff, factors: &[Factor; 3]) -> Option<BoxRegion> {
    let kappa = eta.kappa();
    let mut dom = eta.support();
    for (block, f) in factors[..2].iter().enumerate() {
        if let Some(b) = f.support() {
            for i in 0..kappa {
                let axis = block * kappa + i;
                dom.lo[axis] = dom.lo[axis].max(b.lo[i]);
                dom.hi[axis] = dom.hi[axis].min(b.hi[i]);
            }
        }
    }
    if dom.lo.iter().zip(&dom.hi).any(|(a, b)| a >= b) {
        return None;
    }
    Some(dom)
}

fn cell_grid(domain: &BoxRegion, base: usize) -> Vec<Cell> {
    let dims = domain.dim();
    let total = base.pow(dims as u32);
    (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut lo = vec![0.0; dims];
            let mut hi = vec![0.0; dims];
            for axis in (0..dims).rev() {
                let k = rem % base;
                rem /= base;
                let w = (domain.hi[axis] - domain.lo[axis]) / base as f64;
                lo[axis] = domain.lo[axis] + w * k as f64;
                hi[axis] = if k + 1 == base {
                    domain.hi[axis]
                } else {
                    domain.lo[axis] + w * (k + 1) as f64
                };
            }
            Cell { lo, hi, subdiv: 1 }
        })
        .collect()
}
