use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use trilin::quadrature::{oscillatory_box_integral, third_derivative_edge_jump, unit_cube_integral, BoxRule};
use trilin::{
    integrate_oscillatory, make_cutoff, vdc_bound, BoxRegion, Cutoff, CutoffProfile, CutoffSpec, Error, Factor,
    GridFunction, Polynomial, QuadPolicy,
};

/// Composite Gauss–Legendre oracle for `∫_a^b g(t) dt`, 4000 panels of 12 nodes.
fn oracle_1d<F: Fn(f64) -> Complex64>(a: f64, b: f64, g: F) -> Complex64 {
    let gl = GaussLegendre::new(std::num::NonZeroUsize::new(12).unwrap());
    let panels = 4000;
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = a + h * (k as f64 + 0.5);
        for &(t, w) in gl.as_node_weight_pairs() {
            total += g(mid + 0.5 * h * t) * (0.5 * h * w);
        }
    }
    total
}

fn default_eta(kappa: usize) -> Cutoff {
    make_cutoff(CutoffSpec::centered(kappa)).unwrap()
}

fn ones() -> [Factor; 3] {
    [Factor::one(), Factor::one(), Factor::one()]
}

fn poly2(terms: &[([u32; 2], f64)]) -> Polynomial {
    Polynomial::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
}

fn eta_1d_integral(eta: &Cutoff) -> f64 {
    oracle_1d(-0.5, 0.5, |t| Complex64::new(eta.axis_factor(0, t), 0.0)).re
}

#[test]
fn separable_phase_matches_one_dimensional_oracle() {
    let eta = default_eta(1);
    let lambda = 50.0;
    let p = poly2(&[([1, 0], 1.0)]);
    let r = integrate_oscillatory(lambda, &p, &ones(), &eta, &QuadPolicy::default()).unwrap();
    let fx = oracle_1d(-0.5, 0.5, |x| Complex64::from_polar(eta.axis_factor(0, x), lambda * x));
    let expected = fx * eta_1d_integral(&eta);
    assert!((r.value - expected).norm() <= 1e-6, "{} vs {expected}", r.value);
}

#[test]
fn zero_frequency_recovers_cutoff_integral() {
    for kappa in [1, 2] {
        let eta = default_eta(kappa);
        let p = Polynomial::zero(2 * kappa);
        let r = integrate_oscillatory(0.0, &p, &ones(), &eta, &QuadPolicy::default()).unwrap();
        let expected = eta_1d_integral(&eta).powi(2 * kappa as i32);
        assert!(
            (r.value - expected).norm() <= r.abs_error_estimate.max(1e-12),
            "κ = {kappa}: {} vs {expected}",
            r.value
        );
    }
}

#[test]
fn cancelling_phase_factors_leave_the_cutoff_integral() {
    let eta = default_eta(1);
    let p = poly2(&[([1, 1], 1.0)]);
    let half_square = Polynomial::monomial(vec![2], 0.5);
    let expected = eta_1d_integral(&eta).powi(2);
    let values: Vec<Complex64> = [10.0, 1000.0]
        .iter()
        .map(|&lambda| {
            let factors = [
                Factor::phase(lambda, half_square.clone()),
                Factor::phase(lambda, half_square.clone()),
                Factor::phase(-lambda, half_square.clone()),
            ];
            let r = integrate_oscillatory(lambda, &p, &factors, &eta, &QuadPolicy::default()).unwrap();
            assert!((r.value - expected).norm() <= r.abs_error_estimate, "λ = {lambda}");
            r.value
        })
        .collect();
    assert!((values[0] - values[1]).norm() <= 1e-15);
}

#[test]
fn gridded_cancelling_factors_agree_to_interpolation_accuracy() {
    let eta = default_eta(1);
    let lambda = 10.0;
    let p = poly2(&[([1, 1], 1.0)]);
    let grid = |lo: f64, hi: f64, sign: f64| {
        GridFunction::from_fn(BoxRegion::new(vec![lo], vec![hi]).unwrap(), 4001, |u| {
            Complex64::from_polar(1.0, sign * lambda * u[0] * u[0] / 2.0)
        })
        .unwrap()
    };
    let factors = [
        Factor::Grid(grid(-0.5, 0.5, 1.0)),
        Factor::Grid(grid(-0.5, 0.5, 1.0)),
        Factor::Grid(grid(-1.0, 1.0, -1.0)),
    ];
    let r = integrate_oscillatory(lambda, &p, &factors, &eta, &QuadPolicy::default()).unwrap();
    let expected = eta_1d_integral(&eta).powi(2);
    assert!((r.value - expected).norm() <= 1e-4, "{} vs {expected}", r.value);
}

#[test]
fn conjugation_symmetry() {
    let eta = default_eta(1);
    let p = poly2(&[([2, 1], 1.0), ([0, 3], -0.5)]);
    let f1 = Factor::Grid(
        GridFunction::from_fn(BoxRegion::new(vec![-0.5], vec![0.5]).unwrap(), 33, |u| {
            Complex64::new(1.0 + u[0], 0.3 * u[0] * u[0])
        })
        .unwrap(),
    );
    let factors = [
        f1,
        Factor::phase(3.0, Polynomial::monomial(vec![2], 1.0)),
        Factor::one(),
    ];
    let conj = [factors[0].conj(), factors[1].conj(), factors[2].conj()];
    let policy = QuadPolicy::default();
    let a = integrate_oscillatory(40.0, &p, &factors, &eta, &policy).unwrap();
    let b = integrate_oscillatory(40.0, &p.scale(-1.0), &conj, &eta, &policy).unwrap();
    assert!((a.value.conj() - b.value).norm() <= 1e-9);
}

#[test]
fn linear_in_each_factor() {
    let eta = default_eta(1);
    let p = poly2(&[([2, 1], 1.0)]);
    let a = Complex64::new(0.7, -1.3);
    let policy = QuadPolicy::default();
    let base = integrate_oscillatory(60.0, &p, &ones(), &eta, &policy).unwrap();
    let scaled = integrate_oscillatory(
        60.0,
        &p,
        &[Factor::Constant(a), Factor::one(), Factor::one()],
        &eta,
        &policy,
    )
    .unwrap();
    let tol = scaled.abs_error_estimate + a.norm() * base.abs_error_estimate + 1e-14;
    assert!((scaled.value - a * base.value).norm() <= tol);
}

#[test]
fn modulus_is_bounded_by_the_cutoff_mass() {
    let eta = default_eta(1);
    let mass = eta_1d_integral(&eta).powi(2);
    let p = poly2(&[([2, 1], 1.0), ([1, 1], 2.0)]);
    for lambda in [0.0, 5.0, 50.0, 500.0] {
        let r = integrate_oscillatory(lambda, &p, &ones(), &eta, &QuadPolicy::default()).unwrap();
        assert!(r.value.norm() <= mass + r.abs_error_estimate);
    }
}

#[test]
fn halving_the_threshold_stays_within_the_error_estimate() {
    let eta = default_eta(1);
    let cases = [
        (poly2(&[([2, 1], 1.0)]), 100.0),
        (poly2(&[([2, 1], 1.0)]), 3000.0),
        (poly2(&[([3, 0], 1.0), ([1, 2], -2.0)]), 400.0),
    ];
    for (p, lambda) in cases {
        let coarse = integrate_oscillatory(lambda, &p, &ones(), &eta, &QuadPolicy::default()).unwrap();
        let fine_policy = QuadPolicy {
            threshold_scale: 0.5,
            ..QuadPolicy::default()
        };
        let fine = integrate_oscillatory(lambda, &p, &ones(), &eta, &fine_policy).unwrap();
        assert!(
            (fine.value - coarse.value).norm() <= coarse.abs_error_estimate,
            "λ = {lambda}: change {} vs estimate {}",
            (fine.value - coarse.value).norm(),
            coarse.abs_error_estimate
        );
    }
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let eta = default_eta(2);
    let p = Polynomial::from_terms(4, [(vec![1, 0, 1, 1], 1.0), (vec![0, 2, 1, 0], 0.5)]).unwrap();
    let a = integrate_oscillatory(30.0, &p, &ones(), &eta, &QuadPolicy::default()).unwrap();
    let b = integrate_oscillatory(30.0, &p, &ones(), &eta, &QuadPolicy::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn third_factor_must_cover_the_sumset() {
    let eta = default_eta(1);
    let narrow = GridFunction::constant(
        BoxRegion::new(vec![-0.5], vec![0.5]).unwrap(),
        9,
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let factors = [Factor::one(), Factor::one(), Factor::Grid(narrow)];
    let err = integrate_oscillatory(1.0, &poly2(&[([1, 1], 1.0)]), &factors, &eta, &QuadPolicy::default());
    assert!(matches!(err, Err(Error::Argument(_))));
}

#[test]
fn budget_overflow_carries_a_partial_result() {
    let eta = default_eta(1);
    let policy = QuadPolicy {
        panel_budget: 500,
        ..QuadPolicy::default()
    };
    match integrate_oscillatory(5000.0, &poly2(&[([2, 1], 1.0)]), &ones(), &eta, &policy) {
        Err(Error::PanelBudgetExceeded {
            needed,
            budget,
            partial,
        }) => {
            assert!(needed > budget);
            assert!(partial.panels_used > 0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn cutoff_profiles_are_c3_at_the_edge() {
    for profile in [CutoffProfile::SmoothBump, CutoffProfile::PolySplineC3] {
        assert!(third_derivative_edge_jump(profile, 2048) <= 1e-3);
    }
}

#[test]
fn van_der_corput_linear_phase() {
    let rule = BoxRule::default();
    for lambda in [3.0, 17.0, 250.0, 4000.0] {
        let p = Polynomial::monomial(vec![1], lambda);
        let bound = vdc_bound(&p).value();
        assert!((bound - 1.0 / lambda).abs() <= 1e-15);
        let v = unit_cube_integral(&p, &rule).unwrap().value.norm();
        let exact = 2.0 * (lambda / 2.0).sin().abs() / lambda;
        assert!((v - exact).abs() <= 1e-10);
        assert!(v / bound <= 2.0 + 1e-12);
    }
}

#[test]
fn van_der_corput_quadratic_phase_approaches_fresnel_limit() {
    let rule = BoxRule::default();
    let mut last = 0.0;
    for lambda in [1e2, 1e3, 1e4] {
        let p = Polynomial::monomial(vec![2], lambda);
        let ratio = unit_cube_integral(&p, &rule).unwrap().value.norm() / vdc_bound(&p).value();
        last = ratio;
        assert!(ratio <= 1.2);
    }
    let limit = (std::f64::consts::PI / 4.0).sqrt();
    assert!((last - limit).abs() <= 0.01, "{last} vs {limit}");
}

#[test]
fn van_der_corput_bilinear_phase_ratio_is_bounded() {
    let rule = BoxRule::default();
    let ratios: Vec<f64> = [10.0, 100.0, 1000.0, 10000.0]
        .iter()
        .map(|&lambda| {
            let p = poly2(&[([1, 1], lambda)]);
            unit_cube_integral(&p, &rule).unwrap().value.norm() / vdc_bound(&p).value()
        })
        .collect();
    assert!(ratios.iter().all(|&r| r <= 3.0), "{ratios:?}");
}

#[test]
fn box_integral_of_constant_phase_is_the_volume() {
    let region = BoxRegion::new(vec![0.0, -1.0], vec![2.0, 0.5]).unwrap();
    let r = oscillatory_box_integral(&Polynomial::constant(2, 0.0), &region, &BoxRule::default()).unwrap();
    assert!((r.value - Complex64::new(3.0, 0.0)).norm() <= 1e-13);
}

#[test]
fn constant_polynomials_have_no_oscillation_bound() {
    assert_eq!(
        vdc_bound(&Polynomial::constant(2, 4.0)),
        trilin::quadrature::VdcBound::NoOscillation
    );
}

#[test]
fn envelope_suite_flags_growth_but_not_oscillation() {
    use trilin::quadrature::envelope_suite;
    let rule = BoxRule::default();
    let lambdas = [10.0, 100.0, 1000.0, 10000.0];
    // linear phases: ratio 2|sin(λa/2)| oscillates below 2
    let report = envelope_suite(16, 1, 1, &lambdas, 3, &rule).unwrap();
    assert!(!report.any_flagged(), "{:?}", report.groups);
    assert!(report.groups[0].empirical_c <= 2.0 + 1e-9);
}

#[test]
fn running_maximum_separates_growth_from_oscillation() {
    use trilin::quadrature::{running_max_slope, GROWTH_SLOPE_LIMIT};
    let oscillating = [(10.0, 1.9), (100.0, 0.5), (1000.0, 0.9), (10000.0, 1.95)];
    assert!(running_max_slope(&oscillating) <= GROWTH_SLOPE_LIMIT);
    let growing: Vec<(f64, f64)> = [10.0f64, 100.0, 1000.0, 10000.0]
        .iter()
        .map(|&l| (l, l.powf(0.2)))
        .collect();
    assert!((running_max_slope(&growing) - 0.2).abs() <= 1e-12);
}
