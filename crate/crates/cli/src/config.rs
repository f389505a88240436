use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use trilin::{
    BoxRegion, Cutoff, CutoffProfile, CutoffSpec, DiscretizedSet, Factor, GridFunction, Polynomial, ProjectionTriple,
    QuadPolicy,
};

use crate::error::CliError;

/// One experiment: a TOML file whose sections mirror the library types.
/// Relative paths are resolved against the directory holding the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub degree: Option<u32>,
    pub polynomial: Option<PolySource>,
    /// Projection triple file; the canonical triple when absent.
    pub triple: Option<PathBuf>,
    /// Degenerate-basis cache, read when present and written otherwise.
    pub basis: Option<PathBuf>,
    pub cutoff: Option<CutoffSection>,
    pub quadrature: Option<QuadSection>,
    pub lambda: Option<LambdaSection>,
    pub factors: Option<FactorsSection>,
    pub sublevel: Option<SublevelSection>,
    pub counterexample: Option<CounterexampleSection>,
    pub frust: Option<FrustSection>,
    pub cousin: Option<CousinSection>,
    pub seminorm: Option<SeminormSection>,
}

/// A polynomial given either by a file or inline in the polynomial text
/// format.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySource {
    pub file: Option<PathBuf>,
    pub text: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSection {
    pub profile: Option<String>,
    pub halfwidth: Option<f64>,
    pub center: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSection {
    pub order: Option<usize>,
    pub base_cells: Option<usize>,
    pub threshold_scale: Option<f64>,
    pub panel_budget: Option<u64>,
}

/// Either explicit `values` or a geometric grid `min..max` with `count`
/// points; `integrate` uses the single `value`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSection {
    pub value: Option<f64>,
    pub values: Option<Vec<f64>>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorsSection {
    pub f1: Option<FactorSource>,
    pub f2: Option<FactorSource>,
    pub f3: Option<FactorSource>,
}

/// `grid` names a grid-function file; `phase` gives `u ↦ e^{i·scale·p(u)}`.
/// With neither, the factor is the constant 1.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSource {
    pub grid: Option<PathBuf>,
    pub phase: Option<PolySource>,
    pub scale: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SublevelSection {
    /// Defaults to the top-level polynomial.
    pub q: Option<PolySource>,
    pub epsilons: Vec<f64>,
    pub method: Option<String>,
    pub samples: Option<u64>,
    pub lo: Option<Vec<f64>>,
    pub hi: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleSection {
    pub p1: PolySource,
    pub p2: PolySource,
    pub p3: PolySource,
    pub lambdas: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrustSection {
    pub set: PathBuf,
    /// Components of `f`, one polynomial in one variable each.
    pub f: Vec<PolySource>,
    pub f_prime: Vec<PolySource>,
    pub r: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CousinSection {
    pub set: PathBuf,
    pub f: Vec<PolySource>,
    pub g: Vec<PolySource>,
    /// Components of `P`, polynomials in `(x, y)`.
    pub p: Vec<PolySource>,
    pub degree: u32,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormSection {
    pub degree: Option<u32>,
    pub samples: Option<usize>,
}

/// A parsed config together with its raw bytes and location.
pub struct Loaded {
    pub config: Config,
    pub raw: Vec<u8>,
    pub base: PathBuf,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let raw = fs::read(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let text =
        String::from_utf8(raw.clone()).map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))?;
    let config: Config = toml::from_str(&text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1).unwrap_or(0);
        CliError::Parse(format!("{}:{line}: {}", path.display(), e.message()))
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, raw, base })
}

impl Loaded {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn read_text(&self, p: &Path) -> Result<(PathBuf, String), CliError> {
        let full = self.resolve(p);
        let text = fs::read_to_string(&full).map_err(|e| CliError::Validation(format!("{}: {e}", full.display())))?;
        Ok((full, text))
    }

    pub fn polynomial(&self, src: &PolySource, label: &str) -> Result<Polynomial, CliError> {
        match (&src.file, &src.text) {
            (Some(file), None) => {
                let (full, text) = self.read_text(file)?;
                parse_polynomial(&text, &full.display().to_string())
            }
            (None, Some(text)) => parse_polynomial(text, &format!("{label} (inline)")),
            _ => Err(CliError::Validation(format!(
                "{label}: give exactly one of `file` or `text`"
            ))),
        }
    }

    pub fn main_polynomial(&self) -> Result<Polynomial, CliError> {
        let src = self
            .config
            .polynomial
            .as_ref()
            .ok_or_else(|| CliError::Validation("missing [polynomial] section".into()))?;
        let p = self.polynomial(src, "polynomial")?;
        check_caps(&p)?;
        Ok(p)
    }

    /// `[polynomial]` degree, or the configured `degree` when larger.
    pub fn degree_for(&self, p: &Polynomial) -> Result<u32, CliError> {
        let d = self.config.degree.unwrap_or(p.degree()).max(1);
        if d > trilin::polyalg::MAX_SUPPORTED_DEGREE {
            return Err(CliError::Validation(format!(
                "degree {d} exceeds the supported cap {}",
                trilin::polyalg::MAX_SUPPORTED_DEGREE
            )));
        }
        if d < p.degree() {
            return Err(CliError::Validation(format!(
                "configured degree {d} is below the polynomial degree {}",
                p.degree()
            )));
        }
        Ok(d)
    }

    pub fn triple(&self, kappa: usize) -> Result<ProjectionTriple, CliError> {
        match &self.config.triple {
            None => Ok(ProjectionTriple::canonical(kappa)),
            Some(path) => {
                let (full, text) = self.read_text(path)?;
                let t =
                    ProjectionTriple::parse(&text).map_err(|e| CliError::from_lib(e, &full.display().to_string()))?;
                if t.kappa() != kappa {
                    return Err(CliError::Validation(format!(
                        "triple has κ = {}, the polynomial needs κ = {kappa}",
                        t.kappa()
                    )));
                }
                Ok(t)
            }
        }
    }

    pub fn cutoff(&self, kappa: usize) -> Result<Cutoff, CliError> {
        let mut spec = CutoffSpec::centered(kappa);
        if let Some(c) = &self.config.cutoff {
            if let Some(name) = &c.profile {
                spec.profile = CutoffProfile::from_name(name)
                    .ok_or_else(|| CliError::Validation(format!("unknown cutoff profile {name:?}")))?;
            }
            if let Some(h) = c.halfwidth {
                spec.halfwidth = h;
            }
            if let Some(center) = &c.center {
                spec.center = center.clone();
            }
        }
        Ok(trilin::make_cutoff(spec)?)
    }

    pub fn policy(&self) -> QuadPolicy {
        let mut policy = QuadPolicy::default();
        if let Some(q) = &self.config.quadrature {
            if let Some(o) = q.order {
                policy.order = o;
            }
            policy.base_cells = q.base_cells.or(policy.base_cells);
            if let Some(t) = q.threshold_scale {
                policy.threshold_scale = t;
            }
            if let Some(b) = q.panel_budget {
                policy.panel_budget = b;
            }
        }
        policy
    }

    /// The λ grid: explicit values, else geometric, else 16 points in
    /// `[10, 10⁴]`.
    pub fn lambdas(&self) -> Result<Vec<f64>, CliError> {
        let section = self.config.lambda.as_ref();
        if let Some(values) = section.and_then(|l| l.values.clone()) {
            return Ok(values);
        }
        let min = section.and_then(|l| l.min).unwrap_or(10.0);
        let max = section.and_then(|l| l.max).unwrap_or(1e4);
        let count = section.and_then(|l| l.count).unwrap_or(16);
        Ok(trilin::decay::geometric_grid(min, max, count)?)
    }

    pub fn factor(&self, src: Option<&FactorSource>, label: &str) -> Result<Factor, CliError> {
        let Some(src) = src else {
            return Ok(Factor::one());
        };
        match (&src.grid, &src.phase) {
            (None, None) => Ok(Factor::one()),
            (Some(path), None) => {
                let (full, text) = self.read_text(path)?;
                let g = GridFunction::parse(&text).map_err(|e| CliError::from_lib(e, &full.display().to_string()))?;
                Ok(Factor::Grid(g))
            }
            (None, Some(p)) => Ok(Factor::phase(src.scale.unwrap_or(1.0), self.polynomial(p, label)?)),
            (Some(_), Some(_)) => Err(CliError::Validation(format!(
                "{label}: give `grid` or `phase`, not both"
            ))),
        }
    }

    pub fn factors(&self) -> Result<[Factor; 3], CliError> {
        let s = self.config.factors.as_ref();
        Ok([
            self.factor(s.and_then(|f| f.f1.as_ref()), "f1")?,
            self.factor(s.and_then(|f| f.f2.as_ref()), "f2")?,
            self.factor(s.and_then(|f| f.f3.as_ref()), "f3")?,
        ])
    }

    pub fn set(&self, path: &Path) -> Result<DiscretizedSet, CliError> {
        let (full, text) = self.read_text(path)?;
        DiscretizedSet::parse(&text).map_err(|e| CliError::from_lib(e, &full.display().to_string()))
    }

    pub fn components(&self, srcs: &[PolySource], label: &str, num_vars: usize) -> Result<Vec<Polynomial>, CliError> {
        srcs.iter()
            .enumerate()
            .map(|(i, s)| {
                let p = self.polynomial(s, &format!("{label}[{i}]"))?;
                if p.num_vars() != num_vars {
                    return Err(CliError::Validation(format!(
                        "{label}[{i}] has {} variables, expected {num_vars}",
                        p.num_vars()
                    )));
                }
                Ok(p)
            })
            .collect()
    }

    pub fn region(&self, lo: Option<&Vec<f64>>, hi: Option<&Vec<f64>>, dim: usize) -> Result<BoxRegion, CliError> {
        match (lo, hi) {
            (None, None) => Ok(BoxRegion::unit(dim)),
            (Some(lo), Some(hi)) => Ok(BoxRegion::new(lo.clone(), hi.clone())?),
            _ => Err(CliError::Validation("give both `lo` and `hi` for the box".into())),
        }
    }
}

fn check_caps(p: &Polynomial) -> Result<(), CliError> {
    let kappa = p.num_vars() / 2;
    if !p.num_vars().is_multiple_of(2) || !(1..=2).contains(&kappa) {
        return Err(CliError::Validation(format!(
            "polynomial has {} variables; supported are 2κ with κ ∈ {{1, 2}}",
            p.num_vars()
        )));
    }
    Ok(())
}

fn parse_polynomial(text: &str, origin: &str) -> Result<Polynomial, CliError> {
    Polynomial::parse(text).map_err(|e| CliError::from_lib(e, origin))
}
