use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};

use super::frust::{frust_find, SliceWitness};
use super::set::{cell_midpoint, dist, DiscretizedSet, VectorArray};
use crate::error::{Error, Result};
use crate::polyalg::Polynomial;

/// Output of [`cousin_approximate`].
#[derive(Debug, Clone)]
pub struct CousinResult {
    /// Per component: `p(x)` with the constant term, `q(y)` without, the
    /// least-squares split of `P(x, y)` over `[0,1]²`.
    pub p: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
    /// `Q₁ = −p + a`, one variable per component.
    pub q1: Vec<Polynomial>,
    /// `Q₂ = −q − a`, one variable per component.
    pub q2: Vec<Polynomial>,
    /// `max |P(x,y) − p(x) − q(y)|` over the grid midpoints of `[0,1]²`.
    pub approx_sup: f64,
    pub e1: Vec<bool>,
    pub e2: Vec<bool>,
    /// `max_{x∈E₁} |f(x) − Q₁(x)|`.
    pub bound: f64,
    /// `max_{y∈E₂} |g(y) − Q₂(y)|`.
    pub bound2: f64,
    pub witness: SliceWitness,
}

/// Polynomial approximation of `f`, `g` from `|f(x) + g(y) + P(x,y)| ≤ 1`
/// on `E`.
///
/// `P` is split as `p(x) + q(y)` by least squares on a tensor
/// Gauss–Legendre grid (the exact `L²([0,1]²)` projection); with
/// `A = sup |P − p − q|`, the functions `F = f + p` and `F′ = −(g + q)`
/// satisfy `|F(x) − F′(y)| ≤ 1 + A` on `E`, and [`frust_find`] produces the
/// center `a` and the slices `E₁`, `E₂`.
pub fn cousin_approximate(
    e: &DiscretizedSet,
    f: &VectorArray,
    g: &VectorArray,
    p_big: &[Polynomial],
    d: u32,
) -> Result<CousinResult> {
    let n = e.n();
    let dim = p_big.len();
    if dim == 0 || f.dim() != dim || g.dim() != dim {
        return Err(Error::arg("f, g and P must share the value dimension D"));
    }
    if f.len() != n || g.len() != n {
        return Err(Error::arg(format!("f and g must hold one vector per grid cell ({n})")));
    }
    if p_big.iter().any(|c| c.num_vars() != 2) {
        return Err(Error::arg("P must be a polynomial in (x, y)"));
    }
    let xs: Vec<f64> = (0..n).map(|i| cell_midpoint(i, n)).collect();
    let p_grid: Vec<Vec<f64>> = (0..n * n)
        .map(|k| {
            let pt = [xs[k / n], xs[k % n]];
            p_big.iter().map(|c| c.eval_unchecked(&pt)).collect()
        })
        .collect();

    for i in 0..n {
        for j in 0..n {
            if e.contains(i, j) {
                let s: f64 = (0..dim)
                    .map(|c| {
                        let v = f.get(i)[c] + g.get(j)[c] + p_grid[i * n + j][c];
                        v * v
                    })
                    .sum::<f64>()
                    .sqrt();
                if !(s <= 1.0) {
                    return Err(Error::Precondition(format!(
                        "|f(x) + g(y) + P(x,y)| = {s} exceeds 1 at cell ({i}, {j})"
                    )));
                }
            }
        }
    }
    if e.count() == 0 {
        return Err(Error::Precondition("E is empty".into()));
    }

    let mut p = Vec::with_capacity(dim);
    let mut q = Vec::with_capacity(dim);
    for comp in p_big {
        let (pc, qc) = split_least_squares(comp, d)?;
        p.push(pc);
        q.push(qc);
    }
    let p_vals: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| p.iter().map(|c| c.eval_unchecked(&[x])).collect())
        .collect();
    let q_vals: Vec<Vec<f64>> = xs
        .iter()
        .map(|&y| q.iter().map(|c| c.eval_unchecked(&[y])).collect())
        .collect();

    let mut approx_sup: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let split: Vec<f64> = (0..dim).map(|c| p_vals[i][c] + q_vals[j][c]).collect();
            approx_sup = approx_sup.max(dist(&p_grid[i * n + j], &split));
        }
    }

    let big_f = VectorArray::new(
        dim,
        (0..n)
            .flat_map(|i| (0..dim).map(move |c| (i, c)))
            .map(|(i, c)| f.get(i)[c] + p_vals[i][c])
            .collect(),
    )?;
    let big_fp = VectorArray::new(
        dim,
        (0..n)
            .flat_map(|j| (0..dim).map(move |c| (j, c)))
            .map(|(j, c)| -(g.get(j)[c] + q_vals[j][c]))
            .collect(),
    )?;
    // 1 + A bounds |F − F′| on E; the realized maximum guards against the
    // last-bit rounding of that triangle inequality.
    let mut realized: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if e.contains(i, j) {
                realized = realized.max(dist(big_f.get(i), big_fp.get(j)));
            }
        }
    }
    let r_bound = (1.0 + approx_sup).max(realized);
    let witness = frust_find(e, &big_f, &big_fp, r_bound)?;

    let q1: Vec<Polynomial> = p
        .iter()
        .zip(&witness.a)
        .map(|(pc, &a)| &pc.scale(-1.0) + &Polynomial::constant(1, a))
        .collect();
    let q2: Vec<Polynomial> = q
        .iter()
        .zip(&witness.a)
        .map(|(qc, &a)| &qc.scale(-1.0) + &Polynomial::constant(1, -a))
        .collect();
    let deviation = |vals: &VectorArray, polys: &[Polynomial], mask: &[bool]| -> f64 {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| {
                let qv: Vec<f64> = polys.iter().map(|c| c.eval_unchecked(&[xs[i]])).collect();
                dist(vals.get(i), &qv)
            })
            .fold(0.0, f64::max)
    };
    let bound = deviation(f, &q1, &witness.g);
    let bound2 = deviation(g, &q2, &witness.g1);
    Ok(CousinResult {
        p,
        q,
        q1,
        q2,
        approx_sup,
        e1: witness.g.clone(),
        e2: witness.g1.clone(),
        bound,
        bound2,
        witness,
    })
}

/// Least-squares split `P(x,y) ≈ p(x) + q(y)` over `[0,1]²` with
/// `deg p, deg q ≤ d` and the constant carried by `p`.
///
/// The tensor Gauss–Legendre rule has enough nodes to integrate every
/// normal-equation entry exactly, so the result is the `L²` projection.
pub fn split_least_squares(p_big: &Polynomial, d: u32) -> Result<(Polynomial, Polynomial)> {
    if p_big.num_vars() != 2 {
        return Err(Error::arg("P must be a polynomial in (x, y)"));
    }
    let d = d as usize;
    let order = d.max(p_big.degree() as usize) + 1;
    let gl = GaussLegendre::new(std::num::NonZeroUsize::new(order).expect("order ≥ 1"));
    let nodes: Vec<(f64, f64)> = gl
        .as_node_weight_pairs()
        .iter()
        .map(|&(t, w)| (0.5 * (t + 1.0), 0.5 * w))
        .collect();
    let unknowns = 2 * d + 1;
    let mut a = DMatrix::zeros(order * order, unknowns);
    let mut b = DVector::zeros(order * order);
    for (r, ((x, wx), (y, wy))) in nodes
        .iter()
        .flat_map(|nx| nodes.iter().map(move |ny| (*nx, *ny)))
        .enumerate()
    {
        let s = (wx * wy).sqrt();
        for k in 0..=d {
            a[(r, k)] = s * x.powi(k as i32);
        }
        for k in 1..=d {
            a[(r, d + k)] = s * y.powi(k as i32);
        }
        b[r] = s * p_big.eval_unchecked(&[x, y]);
    }
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-13)
        .map_err(|e| Error::Validation(format!("least-squares split failed: {e}")))?;
    let p = Polynomial::from_terms(1, (0..=d).map(|k| (vec![k as u32], sol[k])))?;
    let q = Polynomial::from_terms(1, (1..=d).map(|k| (vec![k as u32], sol[d + k])))?;
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly2(terms: &[([u32; 2], f64)]) -> Polynomial {
        Polynomial::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn split_of_xy_is_the_projection() {
        // ∫P dy = 5x, ∫P dx = 5y, ∫∫P = 5/2
        let (p, q) = split_least_squares(&poly2(&[([1, 1], 10.0)]), 1).unwrap();
        assert!((p.coeff(&[0]) + 2.5).abs() < 1e-12);
        assert!((p.coeff(&[1]) - 5.0).abs() < 1e-12);
        assert!((q.coeff(&[1]) - 5.0).abs() < 1e-12);
        assert_eq!(q.coeff(&[0]), 0.0);
    }

    #[test]
    fn zero_data_gives_zero_approximants() {
        let n = 16;
        let e = DiscretizedSet::full(n);
        let z = VectorArray::scalar(vec![0.0; n]);
        let r = cousin_approximate(&e, &z, &z, &[Polynomial::zero(2)], 2).unwrap();
        assert!(r.q1[0].max_abs_diff(&Polynomial::zero(1)) < 1e-14);
        assert!(r.q2[0].max_abs_diff(&Polynomial::zero(1)) < 1e-14);
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn precondition_is_checked() {
        let n = 8;
        let e = DiscretizedSet::full(n);
        let z = VectorArray::scalar(vec![0.0; n]);
        let p = poly2(&[([0, 0], 2.0)]);
        assert!(matches!(
            cousin_approximate(&e, &z, &z, &[p], 1),
            Err(Error::Precondition(_))
        ));
    }
}
