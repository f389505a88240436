use crate::error::{Error, Result};

/// Which sweep points enter the power-law fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    /// Points with `λ` below this are pre-asymptotic and skipped.
    pub min_lambda: f64,
    /// Points with `|I| ≤ noise_factor · error estimate` are skipped.
    pub noise_factor: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow {
            min_lambda: 10.0,
            noise_factor: 10.0,
        }
    }
}

/// Least-squares fit of `|I| ≈ C·λ^{−ε̂}` in log-log coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLaw {
    pub log_c: f64,
    pub epsilon_hat: f64,
    pub r_squared: f64,
    /// First and last fitted index.
    pub window: (usize, usize),
    pub used: Vec<bool>,
}

/// Ordinary least squares `y ≈ a + b·x`; returns `(a, b, r²)` with `r²`
/// clamped to `[0, 1]` and equal to 1 for data with no spread in `y`.
pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let scale = ys.iter().map(|y| y * y).sum::<f64>().max(1.0);
    let r2 = if ss_tot <= 1e-24 * scale {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    (a, b, r2)
}

/// Fits `log|I| = log C − ε̂·log λ` over the points admitted by `window`.
///
/// `errors`, when given, are the quadrature error estimates used for the
/// noise-floor rule.
pub fn fit_power_law(
    lambdas: &[f64],
    magnitudes: &[f64],
    errors: Option<&[f64]>,
    window: &FitWindow,
) -> Result<PowerLaw> {
    if lambdas.len() != magnitudes.len() || errors.is_some_and(|e| e.len() != lambdas.len()) {
        return Err(Error::arg("λ, magnitude and error sequences differ in length"));
    }
    let used: Vec<bool> = (0..lambdas.len())
        .map(|i| lambdas[i] >= window.min_lambda && errors.is_none_or(|e| magnitudes[i] > window.noise_factor * e[i]))
        .collect();
    let idx: Vec<usize> = (0..lambdas.len()).filter(|&i| used[i]).collect();
    if idx.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} usable points after exclusions, need at least 4",
            idx.len()
        )));
    }
    if let Some(&i) = idx.iter().find(|&&i| !(magnitudes[i] > 0.0)) {
        return Err(Error::arg(format!(
            "non-positive magnitude {} at λ = {}",
            magnitudes[i], lambdas[i]
        )));
    }
    if let Some(&i) = idx.iter().find(|&&i| !(lambdas[i] > 0.0)) {
        return Err(Error::arg(format!("non-positive λ = {}", lambdas[i])));
    }
    let xs: Vec<f64> = idx.iter().map(|&i| lambdas[i].ln()).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| magnitudes[i].ln()).collect();
    let (a, b, r2) = ols(&xs, &ys);
    Ok(PowerLaw {
        log_c: a,
        epsilon_hat: -b,
        r_squared: r2,
        window: (idx[0], *idx.last().unwrap()),
        used,
    })
}

/// `count` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(Error::arg("geometric grid needs 0 < lo < hi and at least two points"));
    }
    let r = (hi / lo).ln() / (count - 1) as f64;
    let mut g: Vec<f64> = (0..count).map(|i| lo * (r * i as f64).exp()).collect();
    g[0] = lo;
    g[count - 1] = hi;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn exact_power_law() {
        let l = geometric_grid(10.0, 1e4, 16).unwrap();
        let m: Vec<f64> = l.iter().map(|x| 5.0 * x.powf(-0.5)).collect();
        let f = fit_power_law(&l, &m, None, &FitWindow::default()).unwrap();
        assert!((f.epsilon_hat - 0.5).abs() < 1e-12);
        assert!((f.log_c - 5f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.window, (0, 15));
    }

    #[test]
    fn constant_magnitudes() {
        let l = geometric_grid(10.0, 1e4, 8).unwrap();
        let f = fit_power_law(&l, &[0.3; 8], None, &FitWindow::default()).unwrap();
        assert!(f.epsilon_hat.abs() < 1e-12);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn noisy_inverse_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let l = geometric_grid(10.0, 1e4, 12).unwrap();
        let m: Vec<f64> = l
            .iter()
            .map(|x| 3.0 / x * (1.0 + 0.01 * rng.gen_range(-1.0..1.0)))
            .collect();
        let f = fit_power_law(&l, &m, None, &FitWindow::default()).unwrap();
        assert!((f.epsilon_hat - 1.0).abs() < 0.05);
    }

    #[test]
    fn exclusions_and_errors() {
        let l = [1.0, 5.0, 10.0, 20.0, 40.0, 80.0];
        let m = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let e = [0.0, 0.0, 0.0, 0.0, 0.0, 0.5];
        let err = fit_power_law(&l, &m, Some(&e), &FitWindow::default()).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
        let m = [1.0, 1.0, 1.0, 0.0, 1.0, 1.0];
        let l = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0];
        assert!(matches!(
            fit_power_law(&l, &m, None, &FitWindow::default()),
            Err(Error::Argument(_))
        ));
    }
}
