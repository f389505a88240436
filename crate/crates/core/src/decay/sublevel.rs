use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fit::ols;
use crate::error::{Error, Result};
use crate::grid::BoxRegion;
use crate::polyalg::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SublevelMethod {
    /// Midpoint counting on an `n^m` lattice.
    Grid,
    /// Uniform sampling with a binomial standard error.
    MonteCarlo,
}

impl SublevelMethod {
    pub fn name(self) -> &'static str {
        match self {
            SublevelMethod::Grid => "grid",
            SublevelMethod::MonteCarlo => "monte_carlo",
        }
    }
}

/// Estimate of `|{z ∈ box : |Q(z)| < ε}|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelReport {
    pub epsilon: f64,
    pub measure_estimate: f64,
    /// Present for Monte Carlo estimates only.
    pub stderr: Option<f64>,
    pub method: SublevelMethod,
    /// Points actually evaluated.
    pub samples: u64,
}

/// Samples drawn per independent random stream.
const MC_CHUNK: u64 = 1 << 16;

/// Measures the sublevel set `{|Q| < ε}` inside `region`.
///
/// For [`SublevelMethod::Grid`] the lattice has `n = ⌊samples^{1/m}⌋`
/// points per axis. Monte Carlo draws `samples` points in chunks, chunk `k`
/// from the ChaCha stream `k` of `seed`, so the estimate does not depend on
/// the thread count.
pub fn sublevel_measure(
    q: &Polynomial,
    region: &BoxRegion,
    epsilon: f64,
    method: SublevelMethod,
    samples: u64,
    seed: u64,
) -> Result<SublevelReport> {
    let m = q.num_vars();
    if region.dim() != m {
        return Err(Error::arg(format!(
            "box is {}-dimensional, Q has {m} variables",
            region.dim()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::arg("ε must be positive"));
    }
    let vol = region.volume();
    if q.degree() == 0 {
        let inside = q.constant_term().abs() < epsilon;
        return Ok(SublevelReport {
            epsilon,
            measure_estimate: if inside { vol } else { 0.0 },
            stderr: (method == SublevelMethod::MonteCarlo).then_some(0.0),
            method,
            samples: 0,
        });
    }
    if samples == 0 {
        return Err(Error::arg("need at least one sample"));
    }
    match method {
        SublevelMethod::Grid => {
            let mut n = (samples as f64).powf(1.0 / m as f64).round() as u64;
            while n > 1 && n.pow(m as u32) > samples {
                n -= 1;
            }
            let n = n.max(1);
            let hits = grid_count(q, region, n as usize, epsilon);
            let total = n.pow(m as u32);
            Ok(SublevelReport {
                epsilon,
                measure_estimate: vol * hits as f64 / total as f64,
                stderr: None,
                method,
                samples: total,
            })
        }
        SublevelMethod::MonteCarlo => {
            let chunks = samples.div_ceil(MC_CHUNK);
            let hits: u64 = (0..chunks)
                .into_par_iter()
                .map(|k| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(k);
                    let count = MC_CHUNK.min(samples - k * MC_CHUNK);
                    let mut z = vec![0.0; m];
                    let mut hits = 0u64;
                    for _ in 0..count {
                        for (i, zi) in z.iter_mut().enumerate() {
                            *zi = rng.gen_range(region.lo[i]..region.hi[i]);
                        }
                        if q.eval_unchecked(&z).abs() < epsilon {
                            hits += 1;
                        }
                    }
                    hits
                })
                .sum();
            let p = hits as f64 / samples as f64;
            Ok(SublevelReport {
                epsilon,
                measure_estimate: vol * p,
                stderr: Some(vol * (p * (1.0 - p) / samples as f64).sqrt()),
                method,
                samples,
            })
        }
    }
}

fn dense_1d(p: &Polynomial) -> Vec<f64> {
    let mut c = vec![0.0; p.degree() as usize + 1];
    for (mi, v) in p.terms() {
        c[mi.exponents()[0] as usize] += v;
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn grid_count(q: &Polynomial, region: &BoxRegion, n: usize, epsilon: f64) -> u64 {
    let m = q.num_vars();
    let mid =
        |axis: usize, i: usize| region.lo[axis] + (region.hi[axis] - region.lo[axis]) * (i as f64 + 0.5) / n as f64;
    if m == 1 {
        let c = dense_1d(q);
        return (0..n).filter(|&i| horner(&c, mid(0, i)).abs() < epsilon).count() as u64;
    }
    // freeze the first coordinate row by row; the rest is Horner in 1-D or
    // direct evaluation in higher dimension
    (0..n)
        .into_par_iter()
        .map(|i| {
            let row = q.freeze(&[0], &[mid(0, i)]).expect("valid variable");
            if m == 2 {
                let c = dense_1d(&row);
                (0..n).filter(|&j| horner(&c, mid(1, j)).abs() < epsilon).count() as u64
            } else {
                let rest = m - 1;
                let total = n.pow(rest as u32);
                let mut z = vec![0.0; rest];
                let mut hits = 0;
                for flat in 0..total {
                    let mut r = flat;
                    for k in (0..rest).rev() {
                        z[k] = mid(k + 1, r % n);
                        r /= n;
                    }
                    if row.eval_unchecked(&z).abs() < epsilon {
                        hits += 1;
                    }
                }
                hits
            }
        })
        .sum()
}

/// Fits `|E_ε| ≈ C·ε^{δ̂}` over several reports; returns `(log C, δ̂, r²)`.
pub fn fit_sublevel_exponent(reports: &[SublevelReport]) -> Result<(f64, f64, f64)> {
    if reports.len() < 2 {
        return Err(Error::InsufficientData("need at least two ε values".into()));
    }
    if reports.iter().any(|r| !(r.measure_estimate > 0.0)) {
        return Err(Error::InsufficientData("a sublevel set has zero measure".into()));
    }
    let xs: Vec<f64> = reports.iter().map(|r| r.epsilon.ln()).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.measure_estimate.ln()).collect();
    Ok(ols(&xs, &ys))
}
