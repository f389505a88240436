use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use trilin::decay::{degenerate_counterexample, fit_sublevel_exponent, lambda_sweep_with};
use trilin::degeneracy::seminorm_sum;
use trilin::slicing::check_witness;
use trilin::{
    cousin_approximate, estimate_seminorm_constant, frust_find, integrate_oscillatory, lambda_sweep,
    nd_norm_squared_poly, normalize_projections, sublevel_measure, DegenerateBasis, Error, FitWindow, Polynomial,
    ProjectionTriple, SublevelMethod, VectorArray,
};

use crate::config::Loaded;
use crate::error::CliError;
use crate::output::{num, Artifacts};

/// Everything a subcommand needs: the parsed config, the artifact sink and
/// the effective seed.
pub struct Ctx {
    pub loaded: Loaded,
    pub artifacts: Artifacts,
    pub seed: u64,
    pub verbose: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn kappa_of(p: &Polynomial) -> usize {
    p.num_vars() / 2
}

/// The degenerate basis for `(d, triple)`, read from the configured cache
/// when it exists and written to it otherwise.
fn basis(ctx: &Ctx, d: u32, triple: &ProjectionTriple) -> Result<DegenerateBasis, CliError> {
    let Some(path) = &ctx.loaded.config.basis else {
        return Ok(DegenerateBasis::build(d, triple)?);
    };
    let full = ctx.loaded.resolve(path);
    if full.exists() {
        let text = fs::read_to_string(&full)?;
        let b = DegenerateBasis::from_text(&text, triple)
            .map_err(|e| CliError::from_lib(e, &full.display().to_string()))?;
        if b.degree() != d {
            return Err(CliError::Validation(format!(
                "cached basis {} has degree {}, expected {d}",
                full.display(),
                b.degree()
            )));
        }
        ctx.note(format!("loaded degenerate basis from {}", full.display()));
        return Ok(b);
    }
    let b = DegenerateBasis::build(d, triple)?;
    fs::write(&full, b.to_text())?;
    ctx.note(format!("cached degenerate basis in {}", full.display()));
    Ok(b)
}

pub fn norm(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.loaded.main_polynomial()?;
    let d = ctx.loaded.degree_for(&p)?;
    let triple = ctx.loaded.triple(kappa_of(&p))?;
    let basis = basis(ctx, d, &triple)?;
    let report = basis.nd_norm(&p)?;
    let norms = p.coeff_norms();
    println!("norm_P(d) = {}", norms.full);
    println!("norm_nc   = {}", norms.nc);
    println!("norm_nd   = {}", report.nd_value);
    println!("residual:");
    print!("{}", report.residual.to_text());
    ctx.artifacts.text("residual.poly", &report.residual.to_text())?;
    ctx.artifacts.csv(
        "norm.csv",
        &["full", "nc", "nd", "degree", "basis_dim", "ambient_dim"],
        &[vec![
            num(norms.full),
            num(norms.nc),
            num(report.nd_value),
            d.to_string(),
            basis.dim().to_string(),
            basis.ambient_dim().to_string(),
        ]],
        &[],
    )?;
    Ok(())
}

pub fn q_poly(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.loaded.main_polynomial()?;
    if p.num_vars() != 4 {
        return Err(CliError::Validation(
            "q-poly needs a polynomial in (x₁, x₂, y₁, y₂)".into(),
        ));
    }
    let d = ctx.loaded.degree_for(&p)?;
    let inner = basis(ctx, d, &ProjectionTriple::canonical(1))?;
    let q = nd_norm_squared_poly(&p, &inner)?;
    print!("{}", q.to_text());
    ctx.artifacts.text("q.poly", &q.to_text())?;
    let rows: Vec<Vec<String>> = q
        .terms()
        .map(|(mi, c)| vec![mi.exponents()[0].to_string(), mi.exponents()[1].to_string(), num(c)])
        .collect();
    ctx.artifacts
        .csv("q_poly.csv", &["x2_exp", "y2_exp", "coefficient"], &rows, &[])?;
    Ok(())
}

const INTEGRATE_HEADER: [&str; 7] = ["lambda", "re", "im", "abs", "err_est", "panels", "nodes"];

pub fn integrate(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.loaded.main_polynomial()?;
    let kappa = kappa_of(&p);
    let lambda = ctx
        .loaded
        .config
        .lambda
        .as_ref()
        .and_then(|l| l.value)
        .ok_or_else(|| CliError::Validation("integrate needs [lambda] value".into()))?;
    let eta = ctx.loaded.cutoff(kappa)?;
    let factors = ctx.loaded.factors()?;
    let row = |r: &trilin::QuadratureResult| {
        vec![
            num(lambda),
            num(r.value.re),
            num(r.value.im),
            num(r.value.norm()),
            num(r.abs_error_estimate),
            r.panels_used.to_string(),
            r.nodes_total.to_string(),
        ]
    };
    match integrate_oscillatory(lambda, &p, &factors, &eta, &ctx.loaded.policy()) {
        Ok(r) => {
            println!(
                "I = {:e} + {:e}i ± {:e} ({} panels)",
                r.value.re, r.value.im, r.abs_error_estimate, r.panels_used
            );
            ctx.artifacts.csv("integrate.csv", &INTEGRATE_HEADER, &[row(&r)], &[])?;
            Ok(())
        }
        Err(Error::PanelBudgetExceeded {
            needed,
            budget,
            partial,
        }) => {
            ctx.artifacts.csv(
                "integrate.csv",
                &INTEGRATE_HEADER,
                &[row(partial.as_ref())],
                &[format!("partial=true needed_panels={needed} budget={budget}")],
            )?;
            Err(CliError::Numeric(format!(
                "panel budget exceeded ({needed} needed, {budget} allowed); partial result written"
            )))
        }
        Err(e) => Err(e.into()),
    }
}

const DECAY_HEADER: [&str; 5] = ["lambda", "abs_I", "err_est", "nd_norm", "panels"];

fn decay_rows(fit: &trilin::DecayFit, nd: f64) -> Vec<Vec<String>> {
    (0..fit.lambdas.len())
        .map(|i| {
            vec![
                num(fit.lambdas[i]),
                num(fit.magnitudes[i]),
                num(fit.error_estimates[i]),
                num(nd),
                fit.panels[i].to_string(),
            ]
        })
        .collect()
}

fn fit_note(fit: &trilin::DecayFit) -> String {
    format!(
        "fit log_c={} epsilon_hat={} r_squared={} window={}..{} credible={}",
        fit.log_c,
        fit.epsilon_hat,
        fit.r_squared,
        fit.window.0,
        fit.window.1,
        fit.is_credible()
    )
}

pub fn decay(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.loaded.main_polynomial()?;
    let kappa = kappa_of(&p);
    let eta = ctx.loaded.cutoff(kappa)?;
    let factors = ctx.loaded.factors()?;
    let lambdas = ctx.loaded.lambdas()?;
    let fit = lambda_sweep(
        &p,
        &factors,
        &eta,
        &lambdas,
        &ctx.loaded.policy(),
        &FitWindow::default(),
    )?;
    let nd = fit.nd_norm.unwrap_or(f64::NAN);
    println!(
        "epsilon_hat = {} (r² = {}, {} of {} points fitted){}",
        fit.epsilon_hat,
        fit.r_squared,
        fit.used.iter().filter(|&&u| u).count(),
        fit.lambdas.len(),
        if fit.is_credible() {
            ""
        } else {
            "; r² below 0.8, no decay claim"
        }
    );
    ctx.artifacts
        .csv("decay.csv", &DECAY_HEADER, &decay_rows(&fit, nd), &[fit_note(&fit)])?;
    Ok(())
}

pub fn sublevel(ctx: &Ctx) -> Result<(), CliError> {
    let section = ctx
        .loaded
        .config
        .sublevel
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [sublevel] section".into()))?;
    let q = match &section.q {
        Some(src) => ctx.loaded.polynomial(src, "sublevel.q")?,
        None => ctx.loaded.main_polynomial()?,
    };
    let method = match section.method.as_deref() {
        None if q.num_vars() <= 2 => SublevelMethod::Grid,
        None => SublevelMethod::MonteCarlo,
        Some("grid") => SublevelMethod::Grid,
        Some("monte_carlo") => SublevelMethod::MonteCarlo,
        Some(other) => return Err(CliError::Validation(format!("unknown sublevel method {other:?}"))),
    };
    let region = ctx
        .loaded
        .region(section.lo.as_ref(), section.hi.as_ref(), q.num_vars())?;
    let samples = section.samples.unwrap_or(1_000_000);
    if section.epsilons.is_empty() {
        return Err(CliError::Validation("sublevel needs at least one ε".into()));
    }
    let reports = section
        .epsilons
        .iter()
        .map(|&eps| sublevel_measure(&q, &region, eps, method, samples, ctx.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                num(r.epsilon),
                num(r.measure_estimate),
                r.stderr.map(num).unwrap_or_default(),
                r.method.name().to_string(),
                r.samples.to_string(),
            ]
        })
        .collect();
    for r in &reports {
        println!("|{{|Q| < {}}}| = {}", r.epsilon, r.measure_estimate);
    }
    let mut notes = Vec::new();
    if reports.len() >= 2 && q.degree() > 0 {
        let (log_c, delta, r2) = fit_sublevel_exponent(&reports)?;
        let reference = 1.0 / f64::from(q.degree());
        println!("delta_hat = {delta} (reference 1/deg Q = {reference})");
        notes.push(format!(
            "fit log_c={log_c} delta_hat={delta} r_squared={r2} reference={reference} ok={}",
            delta >= reference - 0.1
        ));
    }
    ctx.artifacts.csv(
        "sublevel.csv",
        &["epsilon", "measure", "stderr", "method", "samples"],
        &rows,
        &notes,
    )?;
    Ok(())
}

pub fn normalize(ctx: &Ctx) -> Result<(), CliError> {
    let path = ctx
        .loaded
        .config
        .triple
        .as_ref()
        .ok_or_else(|| CliError::Validation("normalize needs a `triple` file".into()))?;
    let (full, text) = ctx.loaded.read_text(path)?;
    let triple = ProjectionTriple::parse(&text).map_err(|e| CliError::from_lib(e, &full.display().to_string()))?;
    let n = normalize_projections(&triple)?;
    let err = n.reconstruction_error(&triple);
    println!("reconstruction error = {err}");
    ctx.artifacts.text("canonical.triple", &n.canonical.to_text())?;
    let mut rows = Vec::new();
    let mut push = |name: &str, m: &DMatrix<f64>| {
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                rows.push(vec![name.to_string(), r.to_string(), c.to_string(), num(m[(r, c)])]);
            }
        }
    };
    push("domain", &n.domain_map);
    for (j, m) in n.range_maps.iter().enumerate() {
        push(&format!("range{}", j + 1), m);
    }
    ctx.artifacts.csv(
        "normalize.csv",
        &["matrix", "row", "col", "value"],
        &rows,
        &[format!("reconstruction_error={err}")],
    )?;
    if let Some(src) = &ctx.loaded.config.polynomial {
        let p = ctx.loaded.polynomial(src, "polynomial")?;
        let t = n.transform_polynomial(&p)?;
        ctx.artifacts.text("transformed.poly", &t.to_text())?;
    }
    Ok(())
}

pub fn counterexample(ctx: &Ctx) -> Result<(), CliError> {
    let section = ctx
        .loaded
        .config
        .counterexample
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [counterexample] section".into()))?;
    let parts = [
        ctx.loaded.polynomial(&section.p1, "p1")?,
        ctx.loaded.polynomial(&section.p2, "p2")?,
        ctx.loaded.polynomial(&section.p3, "p3")?,
    ];
    let kappa = parts[0].num_vars();
    let triple = ctx.loaded.triple(kappa)?;
    let lambdas = section.lambdas.clone().unwrap_or_else(|| vec![10.0, 1000.0]);
    if lambdas.len() < 2 {
        return Err(CliError::Validation(
            "counterexample needs at least two λ values".into(),
        ));
    }
    let eta = ctx.loaded.cutoff(kappa)?;
    let policy = ctx.loaded.policy();
    let p = degenerate_counterexample(&triple, &parts, 1.0, None)?.p;
    let nd = trilin::decay::canonical_nd_norm(&p)?;
    let results = lambdas
        .iter()
        .map(|&l| {
            let ce = degenerate_counterexample(&triple, &parts, l, None)?;
            integrate_oscillatory(l, &ce.p, &ce.factors, &eta, &policy)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (first, last) = (&results[0], &results[results.len() - 1]);
    let gap = (first.value.norm() - last.value.norm()).abs();
    let tol = 2.0 * (first.abs_error_estimate + last.abs_error_estimate);
    let flat = gap <= tol;
    println!("|I| spread between first and last λ = {gap} (allowed {tol}); flat = {flat}; nd = {nd}");
    let rows: Vec<Vec<String>> = lambdas
        .iter()
        .zip(&results)
        .map(|(l, r)| {
            vec![
                num(*l),
                num(r.value.norm()),
                num(r.abs_error_estimate),
                num(nd),
                r.panels_used.to_string(),
            ]
        })
        .collect();
    let mut notes = vec![format!("flatness gap={gap} tolerance={tol} flat={flat}")];
    if lambdas.len() >= 4 {
        let fit = lambda_sweep_with(&lambdas, &FitWindow::default(), |l| {
            let i = lambdas.iter().position(|&x| x == l).expect("λ from the grid");
            Ok(results[i].clone())
        })?;
        notes.push(fit_note(&fit));
    }
    ctx.artifacts.csv("counterexample.csv", &DECAY_HEADER, &rows, &notes)?;
    Ok(())
}

fn sample_components(polys: &[Polynomial], n: usize) -> Result<VectorArray, CliError> {
    let dim = polys.len();
    if dim == 0 {
        return Err(CliError::Validation(
            "vector-valued input needs at least one component".into(),
        ));
    }
    Ok(VectorArray::from_fn(n, dim, |x| {
        polys.iter().map(|p| p.eval(&[x]).expect("one variable")).collect()
    })?)
}

fn mask_text(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" ")
}

pub fn lemma_frust(ctx: &Ctx) -> Result<(), CliError> {
    let s = ctx
        .loaded
        .config
        .frust
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [frust] section".into()))?;
    let e = ctx.loaded.set(&s.set)?;
    let f = sample_components(&ctx.loaded.components(&s.f, "f", 1)?, e.n())?;
    let fp = sample_components(&ctx.loaded.components(&s.f_prime, "f_prime", 1)?, e.n())?;
    let w = frust_find(&e, &f, &fp, s.r)?;
    let check = check_witness(&e, &f, &fp, &w)?;
    println!(
        "witness (x0, x0') = ({}, {}), a = [{}], |G| = {}, |G'| = {}, sound = {}",
        w.x0_index,
        w.x0p_index,
        join(&w.a),
        check.measure_g,
        check.measure_g1,
        check.passed()
    );
    ctx.artifacts
        .text("slices.txt", &format!("{}\n{}\n", mask_text(&w.g), mask_text(&w.g1)))?;
    ctx.artifacts.csv(
        "frust.csv",
        &[
            "x0_index",
            "x0p_index",
            "a",
            "measure_g",
            "measure_g1",
            "max_dev_g",
            "max_dev_g1",
            "r_used",
            "set_measure",
            "deviations_ok",
            "measures_ok",
        ],
        &[vec![
            w.x0_index.to_string(),
            w.x0p_index.to_string(),
            join(&w.a),
            num(check.measure_g),
            num(check.measure_g1),
            num(check.max_dev_g),
            num(check.max_dev_g1),
            num(w.r_used),
            num(w.set_measure),
            check.deviations_ok.to_string(),
            check.measures_ok.to_string(),
        ]],
        &[],
    )?;
    if !check.passed() {
        return Err(CliError::Numeric("witness failed its soundness check".into()));
    }
    Ok(())
}

pub fn lemma_cousin(ctx: &Ctx) -> Result<(), CliError> {
    let s = ctx
        .loaded
        .config
        .cousin
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [cousin] section".into()))?;
    let e = ctx.loaded.set(&s.set)?;
    let f = sample_components(&ctx.loaded.components(&s.f, "f", 1)?, e.n())?;
    let g = sample_components(&ctx.loaded.components(&s.g, "g", 1)?, e.n())?;
    let p = ctx.loaded.components(&s.p, "p", 2)?;
    let r = cousin_approximate(&e, &f, &g, &p, s.degree)?;
    // Q₁(x) + Q₂(y) + p(x) + q(y) vanishes identically
    let gauge = (0..p.len())
        .map(|c| {
            let lhs = &(&r.q1[c] + &r.p[c]).embed(2, &[0]).expect("one variable")
                + &(&r.q2[c] + &r.q[c]).embed(2, &[1]).expect("one variable");
            lhs.coeff_norms().full
        })
        .fold(0.0, f64::max);
    let floor = e.measure() / 4.0 - 1.0 / e.n() as f64;
    let (m1, m2) = (r.witness.measure_g(), r.witness.measure_g1());
    println!(
        "sup|P − p − q| = {}, bound on E1 = {}, |E1| = {m1}, |E2| = {m2} (floor {floor})",
        r.approx_sup, r.bound
    );
    for c in 0..p.len() {
        ctx.artifacts.text(&format!("q1_{c}.poly"), &r.q1[c].to_text())?;
        ctx.artifacts.text(&format!("q2_{c}.poly"), &r.q2[c].to_text())?;
    }
    ctx.artifacts.csv(
        "cousin.csv",
        &[
            "approx_sup",
            "r_used",
            "a",
            "bound",
            "bound2",
            "measure_e1",
            "measure_e2",
            "measure_floor",
            "gauge_residual",
        ],
        &[vec![
            num(r.approx_sup),
            num(r.witness.r_used),
            join(&r.witness.a),
            num(r.bound),
            num(r.bound2),
            num(m1),
            num(m2),
            num(floor),
            num(gauge),
        ]],
        &[],
    )?;
    Ok(())
}

pub fn seminorm_const(ctx: &Ctx) -> Result<(), CliError> {
    let s = ctx.loaded.config.seminorm.as_ref();
    let d = s.and_then(|s| s.degree).or(ctx.loaded.config.degree).unwrap_or(3);
    let samples = s.and_then(|s| s.samples).unwrap_or(10_000);
    let est = estimate_seminorm_constant(d, samples, ctx.seed)?;
    let check = seminorm_sum(&est.worst_case, d)?;
    println!(
        "c_hat = {} (lower bound {}, quotient dimension {}, {} samples)",
        est.c_hat, est.lower_bound, est.quotient_dim, est.samples
    );
    ctx.artifacts.text("worst_case.poly", &est.worst_case.to_text())?;
    ctx.artifacts.csv(
        "seminorm.csv",
        &[
            "degree",
            "samples",
            "seed",
            "c_hat",
            "lower_bound",
            "quotient_dim",
            "recomputed",
        ],
        &[vec![
            d.to_string(),
            est.samples.to_string(),
            ctx.seed.to_string(),
            num(est.c_hat),
            num(est.lower_bound),
            est.quotient_dim.to_string(),
            num(check),
        ]],
        &[],
    )?;
    Ok(())
}

/// Resolves the output directory: flag, then config, then `trilin-out`.
pub fn output_dir(flag: Option<&Path>, loaded: &Loaded) -> std::path::PathBuf {
    match (flag, &loaded.config.output_dir) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => loaded.resolve(p),
        (None, None) => "trilin-out".into(),
    }
}
