use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilin::degeneracy::{degenerate_generators, seminorm_sum, MonomialSpace};
use trilin::polyalg::monomials_up_to;
use trilin::{
    estimate_seminorm_constant, nd_norm_squared_poly, normalize_projections, rank3_project, DegenerateBasis,
    Polynomial, ProjectionTriple,
};

fn random_poly<R: Rng>(num_vars: usize, degree: u32, rng: &mut R) -> Polynomial {
    Polynomial::from_terms(
        num_vars,
        monomials_up_to(num_vars, degree)
            .into_iter()
            .map(|mi| (mi.exponents().to_vec(), rng.gen_range(-1.0..1.0))),
    )
    .unwrap()
}

/// A random element of the degenerate space: random `p_j` pulled back.
fn random_degenerate<R: Rng>(triple: &ProjectionTriple, degree: u32, rng: &mut R) -> Polynomial {
    let kappa = triple.kappa();
    let mut out = Polynomial::zero(2 * kappa);
    for j in 0..3 {
        out = &out + &random_poly(kappa, degree, rng).pullback(triple.map(j)).unwrap();
    }
    out
}

/// Distance from `p` to the span of the pullback generators by a dense
/// least-squares solve, independent of the orthonormal basis.
fn brute_force_nd(p: &Polynomial, triple: &ProjectionTriple, d: u32) -> f64 {
    let space = MonomialSpace::new(2 * triple.kappa(), d);
    let gens = degenerate_generators(triple, d).unwrap();
    let cols: Vec<DVector<f64>> = gens.iter().map(|g| space.to_vector(g).unwrap()).collect();
    let a = DMatrix::from_columns(&cols);
    let b = space.to_vector(p).unwrap();
    let x = a.clone().svd(true, true).solve(&b, 1e-12).unwrap();
    (b - a * x).norm()
}

#[test]
fn basis_matches_dense_least_squares_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let triple = ProjectionTriple::canonical(1);
    for d in 1..=4 {
        let basis = DegenerateBasis::build(d, &triple).unwrap();
        for _ in 0..25 {
            let p = random_poly(2, d, &mut rng);
            let nd = basis.nd_norm(&p).unwrap().nd_value;
            assert!((nd - brute_force_nd(&p, &triple, d)).abs() <= 1e-9, "d = {d}");
        }
    }
}

#[test]
fn quotient_norm_ignores_degenerate_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kappa in [1, 2] {
        let triple = ProjectionTriple::canonical(kappa);
        let d = if kappa == 1 { 4 } else { 3 };
        let basis = DegenerateBasis::build(d, &triple).unwrap();
        for _ in 0..50 {
            let p = random_poly(2 * kappa, d, &mut rng);
            let shift = random_degenerate(&triple, d, &mut rng);
            let a = basis.nd_norm(&p).unwrap().nd_value;
            let b = basis.nd_norm(&(&p + &shift)).unwrap().nd_value;
            assert!((a - b).abs() <= 1e-9, "κ = {kappa}: {a} vs {b}");
        }
    }
}

#[test]
fn report_reassembles_the_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let basis = DegenerateBasis::build(3, &ProjectionTriple::canonical(1)).unwrap();
    for _ in 0..20 {
        let p = random_poly(2, 3, &mut rng);
        let r = basis.nd_norm(&p).unwrap();
        assert!((r.nd_value - r.residual.coeff_norms().full).abs() <= 1e-12);
        assert!((&r.residual + &r.nearest_degenerate).max_abs_diff(&p) <= 1e-14);
        assert!(r.nd_value <= p.coeff_norms().full + 1e-12);
    }
}

#[test]
fn basis_is_independent_of_generator_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let triple = ProjectionTriple::canonical(2);
    let d = 3;
    let a = DegenerateBasis::build(d, &triple).unwrap();
    let mut gens = degenerate_generators(&triple, d).unwrap();
    gens.shuffle(&mut rng);
    let b = DegenerateBasis::from_generators(d, &triple, &gens).unwrap();
    assert_eq!(a.dim(), b.dim());
    for _ in 0..20 {
        let p = random_poly(4, d, &mut rng);
        let (x, y) = (a.nd_norm(&p).unwrap().nd_value, b.nd_norm(&p).unwrap().nd_value);
        assert!((x - y).abs() <= 1e-9);
    }
}

#[test]
fn general_position_triples_give_same_dimensions_as_canonical() {
    let pi3 = DMatrix::from_row_slice(1, 2, &[2.0, 3.0]);
    let triple = ProjectionTriple::new(
        1,
        [
            DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
            DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            pi3,
        ],
    )
    .unwrap();
    for (d, dim) in [(1, 3), (2, 6), (3, 9), (4, 12)] {
        assert_eq!(DegenerateBasis::build(d, &triple).unwrap().dim(), dim);
    }
}

#[test]
fn q_polynomial_matches_pointwise_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let d = 3;
    let inner = DegenerateBasis::build(d, &ProjectionTriple::canonical(1)).unwrap();
    let p = random_poly(4, d, &mut rng);
    let q = nd_norm_squared_poly(&p, &inner).unwrap();
    assert!(q.degree() <= 2 * d);
    for _ in 0..50 {
        let z = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let frozen = p.freeze(&[1, 3], &z).unwrap();
        let nd = inner.nd_norm(&frozen).unwrap().nd_value;
        let qz = q.eval(&z).unwrap();
        assert!((qz - nd * nd).abs() <= 1e-9 * (1.0 + qz.abs()));
    }
}

#[test]
fn normalization_reconstructs_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for kappa in [1, 2] {
        for _ in 0..20 {
            let maps = [0, 1, 2].map(|_| DMatrix::from_fn(kappa, 2 * kappa, |_, _| rng.gen_range(-1.0..1.0)));
            let Ok(triple) = ProjectionTriple::new(kappa, maps) else {
                continue;
            };
            let n = normalize_projections(&triple).unwrap();
            assert!(n.canonical.is_canonical(0.0));
            assert!(n.reconstruction_error(&triple) <= 1e-10, "κ = {kappa}");
        }
    }
}

#[test]
fn seminorm_constant_is_reproducible_and_quotient_invariant() {
    let a = estimate_seminorm_constant(2, 500, 7).unwrap();
    let b = estimate_seminorm_constant(2, 500, 7).unwrap();
    assert_eq!(a.c_hat, b.c_hat);
    assert!(a.c_hat > 0.0 && a.c_hat >= a.lower_bound - 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let shift = random_degenerate(&ProjectionTriple::canonical(2), 2, &mut rng);
    let moved = seminorm_sum(&(&a.worst_case + &shift), 2).unwrap();
    assert!((moved - a.c_hat).abs() <= 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nd_norm_is_absolutely_homogeneous(
        coeffs in prop::collection::vec(-1.0f64..1.0, 10),
        t in -4.0f64..4.0,
    ) {
        let basis = DegenerateBasis::build(3, &ProjectionTriple::canonical(1)).unwrap();
        let p = Polynomial::from_terms(
            2,
            monomials_up_to(2, 3).iter().zip(&coeffs).map(|(mi, &c)| (mi.exponents().to_vec(), c)),
        )
        .unwrap();
        let a = basis.nd_norm(&p.scale(t)).unwrap().nd_value;
        let b = t.abs() * basis.nd_norm(&p).unwrap().nd_value;
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b));
    }

    #[test]
    fn degree_two_is_fully_degenerate(coeffs in prop::collection::vec(-5.0f64..5.0, 6)) {
        let basis = DegenerateBasis::build(2, &ProjectionTriple::canonical(1)).unwrap();
        let p = Polynomial::from_terms(
            2,
            monomials_up_to(2, 2).iter().zip(&coeffs).map(|(mi, &c)| (mi.exponents().to_vec(), c)),
        )
        .unwrap();
        prop_assert!(basis.nd_norm(&p).unwrap().nd_value <= 1e-10);
    }

    #[test]
    fn rank3_projection_is_idempotent(coeffs in prop::collection::vec(-3.0f64..3.0, 5), k in 0u32..5) {
        let p = Polynomial::from_terms(
            2,
            (0..=k).map(|i| (vec![i, k - i], coeffs[i as usize])),
        )
        .unwrap();
        let first = rank3_project(&p, k).unwrap();
        let proj = first.projection(k);
        prop_assert!((&proj + &first.residual).max_abs_diff(&p) <= 1e-12);
        let second = rank3_project(&proj, k).unwrap();
        prop_assert!(second.residual.coeff_norms().full <= 1e-12);
        prop_assert!(second.projection(k).max_abs_diff(&proj) <= 1e-12);
    }
}
