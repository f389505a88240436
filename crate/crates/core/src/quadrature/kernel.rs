//! Tensor Gauss–Legendre evaluation of `∫ e^{iΦ} · amplitude` over a cell
//! split into a regular array of panels.
//!
//! Coordinates are split into an "x" block (the first `split` axes) and a
//! "y" block (the rest). The phase is precompiled as `Σ_k u_k(x)·y^{β_k}`
//! so that each node pair costs one short dot product and one `sincos`.

use std::collections::BTreeMap;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::polyalg::Polynomial;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub(crate) fn gauss(order: usize) -> Rule {
        let n = std::num::NonZeroUsize::new(order).expect("order ≥ 1");
        let gl = GaussLegendre::new(n);
        let (nodes, weights) = gl.as_node_weight_pairs().iter().copied().unzip();
        Rule { nodes, weights }
    }

    pub(crate) fn order(&self) -> usize {
        self.nodes.len()
    }
}

pub(crate) type PointFn<'a> = &'a (dyn Fn(&[f64]) -> Complex64 + Sync);

/// Non-oscillatory part of the integrand: `ax(x) · ay(y) · asum(x + y)`,
/// each factor optional.
#[derive(Clone, Copy, Default)]
pub(crate) struct Amplitude<'a> {
    pub x: Option<PointFn<'a>>,
    pub y: Option<PointFn<'a>>,
    pub sum: Option<PointFn<'a>>,
}

/// The phase `Φ(x, y) = Σ_k (Σ c·x^α) · y^{β_k}`.
#[derive(Debug, Clone)]
pub(crate) struct CompiledPhase {
    split: usize,
    dims: usize,
    max_degree: usize,
    ykeys: Vec<Vec<u32>>,
    xterms: Vec<Vec<(Vec<u32>, f64)>>,
}

impl CompiledPhase {
    pub(crate) fn new(phase: &Polynomial, split: usize) -> Self {
        let dims = phase.num_vars();
        let mut groups: BTreeMap<Vec<u32>, Vec<(Vec<u32>, f64)>> = BTreeMap::new();
        for (mi, c) in phase.terms() {
            let e = mi.exponents();
            groups
                .entry(e[split..].to_vec())
                .or_default()
                .push((e[..split].to_vec(), c));
        }
        let (ykeys, xterms) = groups.into_iter().unzip();
        CompiledPhase {
            split,
            dims,
            max_degree: phase.degree() as usize,
            ykeys,
            xterms,
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CellSum {
    pub value: Complex64,
    /// `Σ |weight · integrand|`, the scale for rounding-error bounds.
    pub abs_sum: f64,
}

/// Block of tensor nodes for one panel: coordinates, weighted amplitude and
/// the per-node monomial vector.
struct Block {
    dims: usize,
    coords: Vec<f64>,
    amp: Vec<Complex64>,
}

fn build_block(
    axes: std::ops::Range<usize>,
    panel_lo: &[f64],
    panel_hi: &[f64],
    rule: &Rule,
    amp: Option<PointFn<'_>>,
    out: &mut Block,
) {
    let dims = axes.len();
    let n = rule.order();
    let count = n.pow(dims as u32);
    out.dims = dims;
    out.coords.clear();
    out.amp.clear();
    let mut point = vec![0.0; dims];
    for flat in 0..count {
        let mut rem = flat;
        let mut w = 1.0;
        for (slot, axis) in axes.clone().enumerate().rev() {
            let k = rem % n;
            rem /= n;
            let mid = 0.5 * (panel_lo[axis] + panel_hi[axis]);
            let half = 0.5 * (panel_hi[axis] - panel_lo[axis]);
            point[slot] = mid + half * rule.nodes[k];
            w *= half * rule.weights[k];
        }
        let a = match amp {
            Some(f) => f(&point) * w,
            None => Complex64::new(w, 0.0),
        };
        out.coords.extend_from_slice(&point);
        out.amp.push(a);
    }
}

fn monomial_table(coords: &[f64], dims: usize, max_degree: usize) -> Vec<f64> {
    // powers[node][axis][e]
    let stride = max_degree + 1;
    let nodes = coords.len().checked_div(dims).unwrap_or(1);
    let mut out = vec![1.0; nodes * dims * stride];
    for node in 0..nodes {
        for axis in 0..dims {
            let base = (node * dims + axis) * stride;
            let x = coords[node * dims + axis];
            for e in 1..stride {
                out[base + e] = out[base + e - 1] * x;
            }
        }
    }
    out
}

fn monomial_at(table: &[f64], node: usize, dims: usize, stride: usize, exps: &[u32]) -> f64 {
    let mut v = 1.0;
    for (axis, &e) in exps.iter().enumerate() {
        if e > 0 {
            v *= table[(node * dims + axis) * stride + e as usize];
        }
    }
    v
}

/// Integrates over `[lo, hi]` divided into `subdiv[i]` equal panels along
/// axis `i`, with the tensor rule on each panel.
pub(crate) fn integrate_cell(
    phase: &CompiledPhase,
    amp: &Amplitude<'_>,
    rule: &Rule,
    lo: &[f64],
    hi: &[f64],
    subdiv: &[usize],
) -> CellSum {
    let dims = phase.dims;
    let split = phase.split;
    let ydims = dims - split;
    let k_count = phase.ykeys.len();
    let stride = phase.max_degree + 1;
    let mut panel_lo = vec![0.0; dims];
    let mut panel_hi = vec![0.0; dims];
    let mut index = vec![0usize; dims];
    let mut xb = Block {
        dims: 0,
        coords: Vec::new(),
        amp: Vec::new(),
    };
    let mut yb = Block {
        dims: 0,
        coords: Vec::new(),
        amp: Vec::new(),
    };
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut sum_point = vec![0.0; split];
    let mut total = ComplexSum::default();
    let mut abs_total = CompensatedSum::default();
    let panels: usize = subdiv.iter().product();
    for _ in 0..panels {
        for axis in 0..dims {
            let width = (hi[axis] - lo[axis]) / subdiv[axis] as f64;
            panel_lo[axis] = lo[axis] + width * index[axis] as f64;
            panel_hi[axis] = if index[axis] + 1 == subdiv[axis] {
                hi[axis]
            } else {
                lo[axis] + width * (index[axis] + 1) as f64
            };
        }
        build_block(0..split, &panel_lo, &panel_hi, rule, amp.x, &mut xb);
        build_block(split..dims, &panel_lo, &panel_hi, rule, amp.y, &mut yb);
        let nx = xb.amp.len();
        let ny = yb.amp.len();
        let xtab = monomial_table(&xb.coords, split, phase.max_degree);
        let ytab = monomial_table(&yb.coords, ydims, phase.max_degree);
        u.clear();
        for a in 0..nx {
            for terms in &phase.xterms {
                let s: f64 = terms
                    .iter()
                    .map(|(e, c)| c * monomial_at(&xtab, a, split, stride, e))
                    .sum();
                u.push(s);
            }
        }
        v.clear();
        for b in 0..ny {
            for key in &phase.ykeys {
                v.push(monomial_at(&ytab, b, ydims, stride, key));
            }
        }
        let mut panel = Complex64::new(0.0, 0.0);
        let mut panel_abs = 0.0;
        for a in 0..nx {
            let ax = xb.amp[a];
            if ax == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ua = &u[a * k_count..(a + 1) * k_count];
            for b in 0..ny {
                let ay = yb.amp[b];
                if ay == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let vb = &v[b * k_count..(b + 1) * k_count];
                let phi: f64 = ua.iter().zip(vb).map(|(p, q)| p * q).sum();
                let mut z = ax * ay;
                if let Some(f) = amp.sum {
                    for (i, s) in sum_point.iter_mut().enumerate() {
                        *s = xb.coords[a * split + i] + yb.coords[b * ydims + i];
                    }
                    z *= f(&sum_point);
                }
                let (s, c) = phi.sin_cos();
                panel += Complex64::new(z.re * c - z.im * s, z.re * s + z.im * c);
                panel_abs += z.norm();
            }
        }
        total.add(panel);
        abs_total.add(panel_abs);
        // advance the panel odometer, last axis fastest
        for axis in (0..dims).rev() {
            index[axis] += 1;
            if index[axis] < subdiv[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
    CellSum {
        value: total.value(),
        abs_sum: abs_total.value(),
    }
}

/// Upper bound of `|∂_i Φ|` over the box `center ± half`, for every axis,
/// from the Taylor coefficients of `Φ` about the center.
pub(crate) fn derivative_bounds(phase: &Polynomial, center: &[f64], half: &[f64]) -> Vec<f64> {
    let shifted = phase.shift(center).expect("matching dimension");
    (0..phase.num_vars())
        .map(|i| {
            shifted
                .derivative(i)
                .terms()
                .map(|(mi, c)| {
                    c.abs()
                        * mi.exponents()
                            .iter()
                            .zip(half)
                            .map(|(&e, &h)| h.powi(e as i32))
                            .product::<f64>()
                })
                .sum()
        })
        .collect()
}
