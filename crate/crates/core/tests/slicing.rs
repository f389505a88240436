use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilin::slicing::{check_witness, first_good_cell, split_least_squares};
use trilin::{cousin_approximate, frust_find, DiscretizedSet, Error, Polynomial, VectorArray};

/// All cells of `E` whose row and column slices have measure `≥ r/4`,
/// computed directly from the mask.
fn brute_force_good_cells(e: &DiscretizedSet) -> Vec<(usize, usize)> {
    let n = e.n();
    let r = e.measure();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !e.contains(i, j) {
                continue;
            }
            let row = (0..n).filter(|&k| e.contains(i, k)).count() as f64 / n as f64;
            let col = (0..n).filter(|&k| e.contains(k, j)).count() as f64 / n as f64;
            if row >= r / 4.0 && col >= r / 4.0 {
                out.push((i, j));
            }
        }
    }
    out
}

fn poly2(terms: &[([u32; 2], f64)]) -> Polynomial {
    Polynomial::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
}

#[test]
fn band_example_matches_brute_force_scan() {
    let n = 512;
    let e = DiscretizedSet::from_fn(n, |x, y| (x - y).abs() < 0.25);
    let f = VectorArray::from_fn(n, 1, |x| vec![x]).unwrap();
    let w = frust_find(&e, &f, &f, 0.25).unwrap();
    let good = brute_force_good_cells(&e);
    assert_eq!(good.first(), Some(&(w.x0_index, w.x0p_index)));
    let floor = e.measure() / 4.0 - 1.0 / n as f64;
    assert!(w.measure_g() >= floor && w.measure_g1() >= floor);
    let check = check_witness(&e, &f, &f, &w).unwrap();
    assert!(check.passed());
    assert!(check.max_dev_g <= 0.375);
}

#[test]
fn random_instances_satisfy_the_witness_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 128;
    for _ in 0..20 {
        let dim = rng.gen_range(1..=3);
        // f′ = f ∘ shift + bounded noise, closeness enforced on E by construction
        let f = VectorArray::from_fn(n, dim, |x| (0..dim).map(|c| (x * (c + 1) as f64).sin()).collect()).unwrap();
        let noise: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-0.1..0.1)).collect();
        let fp = VectorArray::new(dim, (0..n * dim).map(|k| f.get(k / dim)[k % dim] + noise[k]).collect()).unwrap();
        let r_bound = 0.3;
        let (cx, cy, rad) = (
            rng.gen_range(0.2..0.8),
            rng.gen_range(0.2..0.8),
            rng.gen_range(0.2..0.5),
        );
        let mut mask = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (x, y) = ((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
                let inside = (x - cx).powi(2) + (y - cy).powi(2) < rad * rad;
                let close = f
                    .get(i)
                    .iter()
                    .zip(fp.get(j))
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    <= r_bound;
                mask.push(inside && close);
            }
        }
        let e = DiscretizedSet::new(n, mask).unwrap();
        if e.measure() <= 4.0 / n as f64 {
            continue;
        }
        let w = frust_find(&e, &f, &fp, r_bound).unwrap();
        assert!(check_witness(&e, &f, &fp, &w).unwrap().passed());
        assert_eq!(brute_force_good_cells(&e).first(), Some(&(w.x0_index, w.x0p_index)));
    }
}

#[test]
fn good_cell_exists_for_every_nonempty_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = rng.gen_range(4..40);
        let density = rng.gen_range(0.01..0.9);
        let e = DiscretizedSet::new(n, (0..n * n).map(|_| rng.gen_bool(density)).collect()).unwrap();
        if e.count() == 0 {
            continue;
        }
        assert_eq!(first_good_cell(&e), brute_force_good_cells(&e).first().copied());
        assert!(first_good_cell(&e).is_some());
    }
}

#[test]
fn degenerate_phase_is_recovered_up_to_a_constant_split() {
    let n = 128;
    let e = DiscretizedSet::full(n);
    let p = Polynomial::from_terms(1, [(vec![0], 0.3), (vec![1], -1.0), (vec![3], 2.0)]).unwrap();
    let q = Polynomial::from_terms(1, [(vec![1], 0.5), (vec![2], 1.5)]).unwrap();
    let big = &p.embed(2, &[0]).unwrap() + &q.embed(2, &[1]).unwrap();
    let f = VectorArray::from_fn(n, 1, |x| vec![-p.eval(&[x]).unwrap()]).unwrap();
    let g = VectorArray::from_fn(n, 1, |y| vec![-q.eval(&[y]).unwrap()]).unwrap();
    let r = cousin_approximate(&e, &f, &g, std::slice::from_ref(&big), 3).unwrap();
    assert!(r.approx_sup <= 1e-12);
    let sum = &r.q1[0].embed(2, &[0]).unwrap() + &r.q2[0].embed(2, &[1]).unwrap();
    assert!((&sum + &big).coeff_norms().full <= 1e-10);
    assert!(r.bound <= 1.5 * r.witness.r_used);
    // Q₁ = −p up to the constant a
    let diff = &r.q1[0] + &p;
    assert_eq!(diff.degree(), 0);
}

#[test]
fn bilinear_phase_split_is_sup_optimal_on_a_coarse_lattice() {
    let big = poly2(&[([1, 1], 10.0)]);
    let (p, q) = split_least_squares(&big, 1).unwrap();
    let pts: Vec<f64> = (0..33).map(|i| i as f64 / 32.0).collect();
    let sup = |a0: f64, a1: f64, b1: f64| {
        let mut m: f64 = 0.0;
        for &x in &pts {
            for &y in &pts {
                m = m.max((10.0 * x * y - a0 - a1 * x - b1 * y).abs());
            }
        }
        m
    };
    let mut best = f64::INFINITY;
    for i in 0..=40 {
        for j in 0..=20 {
            for k in 0..=20 {
                best = best.min(sup(-5.0 + 0.25 * i as f64, 0.5 * j as f64, 0.5 * k as f64));
            }
        }
    }
    let ours = sup(p.coeff(&[0]), p.coeff(&[1]), q.coeff(&[1]));
    assert!((best - 2.5).abs() <= 1e-12);
    assert!(ours <= 1.05 * best, "{ours} vs {best}");

    let n = 256;
    let e = DiscretizedSet::from_fn(n, |x, y| 10.0 * x * y <= 1.0);
    let z = VectorArray::scalar(vec![0.0; n]);
    let r = cousin_approximate(&e, &z, &z, &[big], 1).unwrap();
    let floor = e.measure() / 4.0 - 1.0 / n as f64;
    assert!(r.witness.measure_g() >= floor && r.witness.measure_g1() >= floor);
    assert!(r.bound <= 1.5 * r.witness.r_used);
    assert!(r.approx_sup <= 2.5);
}

#[test]
fn constant_shifts_move_the_approximants() {
    let n = 64;
    let e = DiscretizedSet::from_fn(n, |x, y| x + y < 1.2);
    let big = poly2(&[([2, 1], 3.0), ([1, 0], 1.0)]);
    let f = VectorArray::from_fn(n, 1, |x| vec![0.2 * x]).unwrap();
    let g = VectorArray::from_fn(n, 1, |y| vec![-0.1 * y]).unwrap();
    // keep the hypothesis: |f + g + P| ≤ 1 on E by restricting E
    let e = DiscretizedSet::new(
        n,
        (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let (x, y) = ((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
                e.contains(i, j) && (f.get(i)[0] + g.get(j)[0] + big.eval(&[x, y]).unwrap()).abs() <= 1.0
            })
            .collect(),
    )
    .unwrap();
    let v = 0.25;
    let fs = VectorArray::scalar((0..n).map(|i| f.get(i)[0] + v).collect());
    let gs = VectorArray::scalar((0..n).map(|j| g.get(j)[0] - v).collect());
    let a = cousin_approximate(&e, &f, &g, std::slice::from_ref(&big), 3).unwrap();
    let b = cousin_approximate(&e, &fs, &gs, &[big], 3).unwrap();
    assert_eq!(
        (a.witness.x0_index, a.witness.x0p_index),
        (b.witness.x0_index, b.witness.x0p_index)
    );
    assert!((a.bound - b.bound).abs() <= 1e-12);
    let shifted = &a.q1[0] + &Polynomial::constant(1, v);
    assert!(shifted.max_abs_diff(&b.q1[0]) <= 1e-12);
    let shifted = &a.q2[0] + &Polynomial::constant(1, -v);
    assert!(shifted.max_abs_diff(&b.q2[0]) <= 1e-12);
}

#[test]
fn cousin_rejects_violated_hypothesis() {
    let n = 16;
    let e = DiscretizedSet::full(n);
    let z = VectorArray::scalar(vec![0.0; n]);
    let big = poly2(&[([1, 1], 10.0)]);
    assert!(matches!(
        cousin_approximate(&e, &z, &z, &[big], 1),
        Err(Error::Precondition(_))
    ));
}
