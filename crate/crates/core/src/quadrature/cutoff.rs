use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{BoxRegion, GridFunction};

/// One-dimensional profile `φ` on `[−1, 1]`; the cutoff is the tensor
/// product of `φ((zᵢ − cᵢ)/h)` over all coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutoffProfile {
    /// `exp(1 − 1/(1 − t²))`, smooth with all derivatives vanishing at `±1`.
    #[default]
    SmoothBump,
    /// `(1 − t²)⁸`, a polynomial whose first seven derivatives vanish at `±1`.
    PolySplineC3,
}

impl CutoffProfile {
    pub fn eval(self, t: f64) -> f64 {
        if !(t > -1.0 && t < 1.0) {
            return 0.0;
        }
        let s = 1.0 - t * t;
        match self {
            CutoffProfile::SmoothBump => (1.0 - 1.0 / s).exp(),
            CutoffProfile::PolySplineC3 => s.powi(8),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CutoffProfile::SmoothBump => "smooth_bump",
            CutoffProfile::PolySplineC3 => "poly_spline_c3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "smooth_bump" => Some(CutoffProfile::SmoothBump),
            "poly_spline_c3" => Some(CutoffProfile::PolySplineC3),
            _ => None,
        }
    }
}

/// A tensor-product cutoff on the cube `center ± halfwidth` in `ℝ^{2κ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSpec {
    pub kappa: usize,
    pub center: Vec<f64>,
    pub halfwidth: f64,
    pub profile: CutoffProfile,
}

impl CutoffSpec {
    /// Centered at the origin with half-width `1/2` and the smooth bump.
    pub fn centered(kappa: usize) -> Self {
        CutoffSpec {
            kappa,
            center: vec![0.0; 2 * kappa],
            halfwidth: 0.5,
            profile: CutoffProfile::SmoothBump,
        }
    }
}

/// An evaluable cutoff `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cutoff {
    spec: CutoffSpec,
}

pub fn make_cutoff(spec: CutoffSpec) -> Result<Cutoff> {
    if spec.kappa == 0 {
        return Err(Error::arg("κ must be positive"));
    }
    if spec.center.len() != 2 * spec.kappa {
        return Err(Error::arg(format!(
            "cutoff center has {} coordinates, expected {}",
            spec.center.len(),
            2 * spec.kappa
        )));
    }
    if !(spec.halfwidth > 0.0 && spec.halfwidth.is_finite()) {
        return Err(Error::arg("cutoff half-width must be positive"));
    }
    Ok(Cutoff { spec })
}

impl Cutoff {
    pub fn spec(&self) -> &CutoffSpec {
        &self.spec
    }

    pub fn kappa(&self) -> usize {
        self.spec.kappa
    }

    /// Value of the axis-`axis` factor at coordinate `z`.
    pub fn axis_factor(&self, axis: usize, z: f64) -> f64 {
        self.spec
            .profile
            .eval((z - self.spec.center[axis]) / self.spec.halfwidth)
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), 2 * self.spec.kappa);
        point
            .iter()
            .enumerate()
            .map(|(axis, &z)| self.axis_factor(axis, z))
            .product()
    }

    /// The closed cube outside which `η` vanishes.
    pub fn support(&self) -> BoxRegion {
        let h = self.spec.halfwidth;
        BoxRegion {
            lo: self.spec.center.iter().map(|c| c - h).collect(),
            hi: self.spec.center.iter().map(|c| c + h).collect(),
        }
    }

    pub fn render(&self, samples_per_axis: usize) -> Result<GridFunction> {
        GridFunction::from_fn(self.support(), samples_per_axis, |p| Complex64::new(self.eval(p), 0.0))
    }
}

/// Largest jump between neighbouring finite-difference third derivatives
/// of `profile` within eight grid spacings of the support edges `±1`.
///
/// The profile is sampled on `samples` equispaced points over `[−1.25, 1.25]`.
pub fn third_derivative_edge_jump(profile: CutoffProfile, samples: usize) -> f64 {
    let (lo, hi) = (-1.25, 1.25);
    let h = (hi - lo) / (samples - 1) as f64;
    let t: Vec<f64> = (0..samples).map(|i| lo + h * i as f64).collect();
    let f: Vec<f64> = t.iter().map(|&x| profile.eval(x)).collect();
    let h3 = h * h * h;
    // central third difference at t[i] uses f[i−2..=i+2]
    let d3: Vec<(f64, f64)> = (2..samples - 2)
        .map(|i| {
            let v = (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / (2.0 * h3);
            (t[i], v)
        })
        .collect();
    d3.windows(2)
        .filter(|w| ((w[0].0.abs() - 1.0).abs() <= 8.0 * h) || ((w[1].0.abs() - 1.0).abs() <= 8.0 * h))
        .map(|w| (w[1].1 - w[0].1).abs())
        .fold(0.0, f64::max)
}
