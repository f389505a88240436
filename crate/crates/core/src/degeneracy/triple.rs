use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::polyalg::Polynomial;

const RANK_TOL: f64 = 1e-10;

/// Three surjective linear maps `ℝ^{2κ} → ℝ^κ` whose nullspaces are pairwise
/// transverse.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTriple {
    kappa: usize,
    maps: [DMatrix<f64>; 3],
}

impl ProjectionTriple {
    pub fn new(kappa: usize, maps: [DMatrix<f64>; 3]) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::arg("κ must be positive"));
        }
        for (j, m) in maps.iter().enumerate() {
            if m.nrows() != kappa || m.ncols() != 2 * kappa {
                return Err(Error::arg(format!(
                    "π{} is {}×{}, expected {kappa}×{}",
                    j + 1,
                    m.nrows(),
                    m.ncols(),
                    2 * kappa
                )));
            }
            if rank(m, RANK_TOL) != kappa {
                return Err(Error::Validation(format!("π{} is not surjective", j + 1)));
            }
        }
        let nulls: Vec<DMatrix<f64>> = maps.iter().map(|m| nullspace(m, RANK_TOL)).collect();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let joined = DMatrix::from_fn(2 * kappa, 2 * kappa, |r, c| {
                if c < kappa {
                    nulls[a][(r, c)]
                } else {
                    nulls[b][(r, c - kappa)]
                }
            });
            if rank(&joined, RANK_TOL) != 2 * kappa {
                return Err(Error::Validation(format!(
                    "nullspaces of π{} and π{} are not transverse",
                    a + 1,
                    b + 1
                )));
            }
        }
        Ok(ProjectionTriple { kappa, maps })
    }

    /// `π₁(x,y) = x`, `π₂(x,y) = y`, `π₃(x,y) = x + y`.
    pub fn canonical(kappa: usize) -> Self {
        let id = DMatrix::<f64>::identity(kappa, kappa);
        let block = |a: f64, b: f64| {
            DMatrix::from_fn(kappa, 2 * kappa, |r, c| {
                if c < kappa {
                    a * id[(r, c)]
                } else {
                    b * id[(r, c - kappa)]
                }
            })
        };
        ProjectionTriple {
            kappa,
            maps: [block(1.0, 0.0), block(0.0, 1.0), block(1.0, 1.0)],
        }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn maps(&self) -> &[DMatrix<f64>; 3] {
        &self.maps
    }

    pub fn map(&self, j: usize) -> &DMatrix<f64> {
        &self.maps[j]
    }

    pub fn is_canonical(&self, tol: f64) -> bool {
        let c = Self::canonical(self.kappa);
        self.maps.iter().zip(&c.maps).all(|(a, b)| (a - b).amax() <= tol)
    }

    /// Parses three matrices, one row per line, separated by blank lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks: Vec<Vec<(usize, Vec<f64>)>> = vec![Vec::new()];
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if !blocks.last().unwrap().is_empty() {
                    blocks.push(Vec::new());
                }
                continue;
            }
            let row = line
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad matrix entry: {e}"),
                })?;
            blocks.last_mut().unwrap().push((idx + 1, row));
        }
        blocks.retain(|b| !b.is_empty());
        if blocks.len() != 3 {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected 3 matrices, found {}", blocks.len()),
            });
        }
        let kappa = blocks[0].len();
        let mut maps = Vec::with_capacity(3);
        for block in &blocks {
            if block.len() != kappa {
                return Err(Error::Parse {
                    line: block[0].0,
                    message: format!("matrix has {} rows, expected {kappa}", block.len()),
                });
            }
            for (line, row) in block {
                if row.len() != 2 * kappa {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("row has {} entries, expected {}", row.len(), 2 * kappa),
                    });
                }
            }
            let flat: Vec<f64> = block.iter().flat_map(|(_, r)| r.iter().copied()).collect();
            maps.push(DMatrix::from_row_slice(kappa, 2 * kappa, &flat));
        }
        let maps: [DMatrix<f64>; 3] = maps.try_into().expect("three maps");
        ProjectionTriple::new(kappa, maps)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (j, m) in self.maps.iter().enumerate() {
            if j > 0 {
                out.push('\n');
            }
            for r in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:?}", m[(r, c)])).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }
}

/// Coordinates in which a triple becomes canonical:
/// `range_maps[j] · π_j · domain_map = canonical π_j`.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub canonical: ProjectionTriple,
    pub domain_map: DMatrix<f64>,
    pub range_maps: [DMatrix<f64>; 3],
}

impl Normalization {
    /// Largest entrywise deviation of `range_maps[j] · π_j · domain_map` from
    /// the canonical maps.
    pub fn reconstruction_error(&self, original: &ProjectionTriple) -> f64 {
        (0..3)
            .map(|j| {
                let t = &self.range_maps[j] * original.map(j) * &self.domain_map;
                (t - self.canonical.map(j)).amax()
            })
            .fold(0.0, f64::max)
    }

    /// `P` expressed in the new coordinates, `w ↦ P(domain_map · w)`.
    pub fn transform_polynomial(&self, p: &Polynomial) -> Result<Polynomial> {
        p.pullback(&self.domain_map)
    }
}

/// Changes coordinates so that `π₁ = x`, `π₂ = y`, `π₃ = x + y`.
///
/// Coordinates are first adapted to the nullspaces (`x` spans `N(π₂)`, `y`
/// spans `N(π₁)`), then the blocks `A`, `B` of `π₃ = Ax + By` are absorbed
/// into the domain, and finally the ranges of `π₁`, `π₂` are rescaled.
/// The resulting domain map does not depend on the nullspace bases chosen.
pub fn normalize_projections(triple: &ProjectionTriple) -> Result<Normalization> {
    let triple = ProjectionTriple::new(triple.kappa, triple.maps.clone())?;
    let k = triple.kappa;
    let mx = nullspace(triple.map(1), RANK_TOL);
    let my = nullspace(triple.map(0), RANK_TOL);
    let a = triple.map(2) * &mx;
    let b = triple.map(2) * &my;
    let a_inv = a
        .try_inverse()
        .ok_or_else(|| Error::Validation("π₃ restricted to N(π₂) is singular".into()))?;
    let b_inv = b
        .try_inverse()
        .ok_or_else(|| Error::Validation("π₃ restricted to N(π₁) is singular".into()))?;
    let dx = &mx * a_inv;
    let dy = &my * b_inv;
    let mut domain = DMatrix::zeros(2 * k, 2 * k);
    domain.view_mut((0, 0), (2 * k, k)).copy_from(&dx);
    domain.view_mut((0, k), (2 * k, k)).copy_from(&dy);
    let d1 = triple.map(0) * &dx;
    let d2 = triple.map(1) * &dy;
    let r1 = d1
        .try_inverse()
        .ok_or_else(|| Error::Validation("π₁ degenerate on N(π₂)".into()))?;
    let r2 = d2
        .try_inverse()
        .ok_or_else(|| Error::Validation("π₂ degenerate on N(π₁)".into()))?;
    Ok(Normalization {
        canonical: ProjectionTriple::canonical(k),
        domain_map: domain,
        range_maps: [r1, r2, DMatrix::identity(k, k)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_passes_validation() {
        for k in 1..=3 {
            let c = ProjectionTriple::canonical(k);
            assert!(ProjectionTriple::new(k, c.maps.clone()).is_ok());
        }
    }

    #[test]
    fn coincident_maps_rejected() {
        let x = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let s = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let err = ProjectionTriple::new(1, [x.clone(), x, s]).unwrap_err();
        assert!(err.to_string().contains("π1 and π2"), "{err}");
        let zero = DMatrix::zeros(1, 2);
        let y = DMatrix::from_row_slice(1, 2, &[0.0, 1.0]);
        let s = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        assert!(ProjectionTriple::new(1, [zero, y, s]).is_err());
    }

    #[test]
    fn canonical_normalizes_to_identity() {
        let n = normalize_projections(&ProjectionTriple::canonical(2)).unwrap();
        assert!((n.domain_map.clone() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
        for r in &n.range_maps {
            assert!((r - DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
        }
    }

    #[test]
    fn rescaled_sum_map() {
        let x = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let y = DMatrix::from_row_slice(1, 2, &[0.0, 1.0]);
        let s = DMatrix::from_row_slice(1, 2, &[2.0, 3.0]);
        let t = ProjectionTriple::new(1, [x, y, s]).unwrap();
        let n = normalize_projections(&t).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 1.0 / 3.0]);
        assert!((n.domain_map.clone() - expected).amax() < 1e-12);
        assert!((n.range_maps[0][(0, 0)] - 2.0).abs() < 1e-12);
        assert!((n.range_maps[1][(0, 0)] - 3.0).abs() < 1e-12);
        assert!(n.reconstruction_error(&t) < 1e-10);
    }

    #[test]
    fn text_round_trip() {
        let t = ProjectionTriple::canonical(2);
        assert_eq!(ProjectionTriple::parse(&t.to_text()).unwrap(), t);
        assert!(matches!(
            ProjectionTriple::parse("1 0\n\n0 1\n"),
            Err(Error::Parse { .. })
        ));
    }
}
