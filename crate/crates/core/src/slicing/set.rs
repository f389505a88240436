use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A subset of `[0,1]²` discretized on an `n × n` grid of cells.
///
/// Cell `(i, j)` is `[i/n, (i+1)/n) × [j/n, (j+1)/n)`; the first index is
/// the `x` coordinate and the second the `x′` (or `y`) coordinate. The mask
/// is stored row-major, `mask[i·n + j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizedSet {
    n: usize,
    mask: Vec<bool>,
}

/// Midpoint of cell `i` on an `n`-grid of `[0,1]`.
pub fn cell_midpoint(i: usize, n: usize) -> f64 {
    (i as f64 + 0.5) / n as f64
}

impl DiscretizedSet {
    pub fn new(n: usize, mask: Vec<bool>) -> Result<Self> {
        if n == 0 || mask.len() != n * n {
            return Err(Error::arg(format!("mask must hold n² = {} cells", n * n)));
        }
        Ok(DiscretizedSet { n, mask })
    }

    pub fn full(n: usize) -> Self {
        DiscretizedSet {
            n,
            mask: vec![true; n * n],
        }
    }

    /// Cells whose midpoints satisfy `inside(x, x′)`.
    pub fn from_fn<F: Fn(f64, f64) -> bool>(n: usize, inside: F) -> Self {
        let mut mask = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mask.push(inside(cell_midpoint(i, n), cell_midpoint(j, n)));
            }
        }
        DiscretizedSet { n, mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.n + j]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 / (self.n * self.n) as f64
    }

    /// The slice `{x′ : (xᵢ, x′) ∈ E}` as a mask over `x′`.
    pub fn row(&self, i: usize) -> Vec<bool> {
        self.mask[i * self.n..(i + 1) * self.n].to_vec()
    }

    /// The slice `{x : (x, x′ⱼ) ∈ E}` as a mask over `x`.
    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.n).map(|i| self.contains(i, j)).collect()
    }

    /// Number of cells in every row slice.
    pub fn row_counts(&self) -> Vec<usize> {
        self.mask
            .chunks(self.n)
            .map(|r| r.iter().filter(|&&b| b).count())
            .collect()
    }

    /// Number of cells in every column slice.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n];
        for row in self.mask.chunks(self.n) {
            for (c, &b) in counts.iter_mut().zip(row) {
                *c += usize::from(b);
            }
        }
        counts
    }

    /// One-dimensional measure of every row slice.
    pub fn row_measures(&self) -> Vec<f64> {
        self.row_counts()
            .into_iter()
            .map(|c| c as f64 / self.n as f64)
            .collect()
    }

    /// One-dimensional measure of every column slice.
    pub fn column_measures(&self) -> Vec<f64> {
        self.column_counts()
            .into_iter()
            .map(|c| c as f64 / self.n as f64)
            .collect()
    }

    /// Header line `n`, then `n` lines of `n` characters `0`/`1`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for i in 0..self.n {
            let line: String = self.row(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
            let _ = writeln!(out, "{line}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty set file".into(),
        })?;
        let n: usize = header.parse().map_err(|e| Error::Parse {
            line: hl,
            message: format!("bad grid size: {e}"),
        })?;
        let mut mask = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (line, l) in lines {
            if l.chars().count() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("row has {} cells, expected {n}", l.chars().count()),
                });
            }
            for ch in l.chars() {
                match ch {
                    '0' => mask.push(false),
                    '1' => mask.push(true),
                    other => {
                        return Err(Error::Parse {
                            line,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: hl,
                message: format!("expected {n} rows, found {rows}"),
            });
        }
        DiscretizedSet::new(n, mask)
    }
}

/// `n` vectors in `ℝ^D`, one per grid cell of `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorArray {
    dim: usize,
    data: Vec<f64>,
}

impl VectorArray {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::arg("vector data length must be a multiple of the dimension"));
        }
        Ok(VectorArray { dim, data })
    }

    /// Samples `f` at the `n` cell midpoints.
    pub fn from_fn<F: Fn(f64) -> Vec<f64>>(n: usize, dim: usize, f: F) -> Result<Self> {
        let mut data = Vec::with_capacity(n * dim);
        for i in 0..n {
            let v = f(cell_midpoint(i, n));
            if v.len() != dim {
                return Err(Error::arg(format!(
                    "function returned {} components, expected {dim}",
                    v.len()
                )));
            }
            data.extend(v);
        }
        Ok(VectorArray { dim, data })
    }

    pub fn scalar(values: Vec<f64>) -> Self {
        VectorArray { dim: 1, data: values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Euclidean distance between two vectors of equal length.
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
