//! Complex-valued functions sampled on uniform grids over boxes.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Axis-aligned box `∏ [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::arg("box bounds must have equal, nonzero length"));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::arg("box must satisfy lo < hi on every axis"));
        }
        Ok(BoxRegion { lo, hi })
    }

    pub fn unit(dim: usize) -> Self {
        BoxRegion {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&x, (&a, &b))| x >= a && x <= b)
    }
}

/// Samples on a uniform `n^κ` grid over a box, stored row-major with the
/// first axis varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    region: BoxRegion,
    samples_per_axis: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(region: BoxRegion, samples_per_axis: usize, values: Vec<Complex64>) -> Result<Self> {
        if samples_per_axis < 2 {
            return Err(Error::arg("a grid needs at least 2 samples per axis"));
        }
        let expected = samples_per_axis
            .checked_pow(region.dim() as u32)
            .ok_or_else(|| Error::arg("grid too large"))?;
        if values.len() != expected {
            return Err(Error::arg(format!(
                "grid expects {expected} values, got {}",
                values.len()
            )));
        }
        Ok(GridFunction {
            region,
            samples_per_axis,
            values,
        })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn<F>(region: BoxRegion, samples_per_axis: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let dim = region.dim();
        let total = samples_per_axis
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::arg("grid too large"))?;
        let mut point = vec![0.0; dim];
        let mut values = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            for axis in (0..dim).rev() {
                let i = rem % samples_per_axis;
                rem /= samples_per_axis;
                point[axis] =
                    region.lo[axis] + (region.hi[axis] - region.lo[axis]) * i as f64 / (samples_per_axis - 1) as f64;
            }
            values.push(f(&point));
        }
        GridFunction::new(region, samples_per_axis, values)
    }

    pub fn constant(region: BoxRegion, samples_per_axis: usize, value: Complex64) -> Result<Self> {
        let total = samples_per_axis.pow(region.dim() as u32);
        GridFunction::new(region, samples_per_axis, vec![value; total])
    }

    pub fn region(&self) -> &BoxRegion {
        &self.region
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn samples_per_axis(&self) -> usize {
        self.samples_per_axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn spacing(&self, axis: usize) -> f64 {
        (self.region.hi[axis] - self.region.lo[axis]) / (self.samples_per_axis - 1) as f64
    }

    /// Value at the nearest grid node; points outside the box are an error.
    pub fn nearest(&self, point: &[f64]) -> Result<Complex64> {
        self.check_dim(point)?;
        if !self.region.contains(point) {
            return Err(Error::Range(format!("{point:?} outside {:?}", self.region)));
        }
        let mut flat = 0;
        for (axis, &x) in point.iter().enumerate() {
            let t = (x - self.region.lo[axis]) / self.spacing(axis);
            let i = (t.round() as usize).min(self.samples_per_axis - 1);
            flat = flat * self.samples_per_axis + i;
        }
        Ok(self.values[flat])
    }

    /// Multilinear interpolation; the function is taken to vanish outside
    /// its box.
    pub fn eval(&self, point: &[f64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.dim());
        if !self.region.contains(point) {
            return Complex64::new(0.0, 0.0);
        }
        let dim = self.dim();
        let n = self.samples_per_axis;
        let mut base = [0usize; 8];
        let mut frac = [0f64; 8];
        assert!(dim <= 8, "grid dimension above 8 unsupported");
        for axis in 0..dim {
            let t = (point[axis] - self.region.lo[axis]) / self.spacing(axis);
            let i = (t.floor() as usize).min(n - 2);
            base[axis] = i;
            frac[axis] = (t - i as f64).clamp(0.0, 1.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << dim) {
            let mut w = 1.0;
            let mut flat = 0;
            for axis in 0..dim {
                let hi = (corner >> (dim - 1 - axis)) & 1 == 1;
                w *= if hi { frac[axis] } else { 1.0 - frac[axis] };
                flat = flat * n + base[axis] + usize::from(hi);
            }
            if w != 0.0 {
                acc += self.values[flat] * w;
            }
        }
        acc
    }

    fn check_dim(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::arg(format!(
                "point has {} coordinates, grid is {}-dimensional",
                point.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Trapezoid-weighted discrete L² norm.
    pub fn l2_norm(&self) -> f64 {
        let dim = self.dim();
        let n = self.samples_per_axis;
        let cell: f64 = (0..dim).map(|a| self.spacing(a)).product();
        let mut acc = 0.0;
        for (flat, v) in self.values.iter().enumerate() {
            let mut rem = flat;
            let mut w = cell;
            for _ in 0..dim {
                let i = rem % n;
                rem /= n;
                if i == 0 || i == n - 1 {
                    w *= 0.5;
                }
            }
            acc += w * v.norm_sqr();
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Serializes as a header `box lo… hi… n` followed by one `re im` pair
    /// per line in row-major order.
    pub fn to_text(&self) -> String {
        let mut out = String::from("box");
        for v in self.region.lo.iter().chain(&self.region.hi) {
            let _ = write!(out, " {v:?}");
        }
        let _ = writeln!(out, " {}", self.samples_per_axis);
        for v in &self.values {
            let _ = writeln!(out, "{:?} {:?}", v.re, v.im);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty grid file".into(),
        })?;
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.first() != Some(&"box") || tokens.len() < 4 || !tokens.len().is_multiple_of(2) {
            return Err(perr(hline, "header must be `box lo… hi… n`".into()));
        }
        let dim = (tokens.len() - 2) / 2;
        let nums = tokens[1..1 + 2 * dim]
            .iter()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| perr(hline, format!("bad box bound: {e}")))?;
        let n: usize = tokens[1 + 2 * dim]
            .parse()
            .map_err(|e| perr(hline, format!("bad sample count: {e}")))?;
        let region =
            BoxRegion::new(nums[..dim].to_vec(), nums[dim..].to_vec()).map_err(|e| perr(hline, e.to_string()))?;
        let mut values = Vec::new();
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let (re, im) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(perr(line, "expected `re im`".into())),
            };
            let re: f64 = re.parse().map_err(|e| perr(line, format!("bad real part: {e}")))?;
            let im: f64 = im.parse().map_err(|e| perr(line, format!("bad imaginary part: {e}")))?;
            values.push(Complex64::new(re, im));
        }
        GridFunction::new(region, n, values).map_err(|e| perr(hline, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_for_bilinear_data() {
        let region = BoxRegion::new(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap();
        let g = GridFunction::from_fn(region, 5, |p| Complex64::new(p[0] * p[1] + p[0], -p[1])).unwrap();
        for pt in [[0.3, 1.1], [-0.99, 0.01], [1.0, 2.0]] {
            let v = g.eval(&pt);
            assert!((v.re - (pt[0] * pt[1] + pt[0])).abs() < 1e-12);
            assert!((v.im + pt[1]).abs() < 1e-12);
        }
        assert_eq!(g.eval(&[1.5, 1.0]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn nearest_lookup_and_range_error() {
        let region = BoxRegion::new(vec![0.0], vec![1.0]).unwrap();
        let g = GridFunction::from_fn(region, 11, |p| Complex64::new(p[0], 0.0)).unwrap();
        assert!((g.nearest(&[0.34]).unwrap().re - 0.3).abs() < 1e-12);
        assert!(matches!(g.nearest(&[1.2]), Err(Error::Range(_))));
    }

    #[test]
    fn l2_norm_of_constant() {
        let region = BoxRegion::new(vec![0.0, 0.0], vec![2.0, 0.5]).unwrap();
        let g = GridFunction::constant(region, 7, Complex64::new(0.0, 3.0)).unwrap();
        assert!((g.l2_norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip() {
        let region = BoxRegion::new(vec![-0.5, 0.0], vec![0.5, 1.0]).unwrap();
        let g = GridFunction::from_fn(region, 3, |p| Complex64::new(p[0], p[1] * 0.1)).unwrap();
        assert_eq!(GridFunction::parse(&g.to_text()).unwrap(), g);
        assert!(matches!(
            GridFunction::parse("box 0 1 3\n1 0\n2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
