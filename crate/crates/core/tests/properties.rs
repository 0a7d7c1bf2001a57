use std::sync::Arc;

use proptest::prelude::*;

use ndg::linalg::{unit_vector, Matrix};
use ndg::ncx::{self, KhomFlavor, NComplex};
use ndg::ndgcat::*;
use ndg::random::{self, rng_from_seed, InstanceRng};
use ndg::verify::{default_field, q_commuting_pair, short_exact_split};
use ndg::workspace::Workspace;
use ndg::{Field, FieldSpec, Scalar};

fn field_for(n: usize, cyclotomic: bool) -> Field {
    if cyclotomic {
        Field::new(&FieldSpec::cyclotomic(n)).unwrap()
    } else {
        default_field(n).unwrap()
    }
}

fn complex(f: &Field, rng: &mut InstanceRng) -> NComplex {
    random::random_complex(f, rng).unwrap()
}

/// Iterates `t` times; the library's explicit power formulas must match.
fn iterate<T>(mut x: T, t: usize, step: impl Fn(&T) -> T) -> T {
    for _ in 0..t {
        x = step(&x);
    }
    x
}

fn mat_pow(m: &Matrix, e: usize) -> Matrix {
    iterate(Matrix::identity(m.field(), m.rows()), e, |p| p.compose(m))
}

fn sum(f: &Field, parts: impl IntoIterator<Item = Matrix>, dim: usize) -> Matrix {
    parts.into_iter().fold(Matrix::zeros(f, dim, dim), |acc, m| acc.add(&m))
}

fn sign(f: &Field, l: usize) -> Scalar {
    if l % 2 == 0 {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pascal_and_symmetry(n in 2usize..=8, m in 1usize..=8, l in 0usize..=8, cyc in any::<bool>()) {
        prop_assume!(m <= n && l <= m);
        let f = field_for(n, cyc);
        let b = |m, l| f.q_binomial(m, l).unwrap();
        prop_assert_eq!(b(m, l), b(m, m - l));
        if l >= 1 && l < m {
            let left = f.add(&b(m - 1, l - 1), &f.mul(&f.q_pow(l as i64), &b(m - 1, l)));
            let right = f.add(&f.mul(&b(m - 1, l - 1), &f.q_pow((m - l) as i64)), &b(m - 1, l));
            prop_assert_eq!(&left, &b(m, l));
            prop_assert_eq!(&right, &b(m, l));
        }
    }

    #[test]
    fn alternating_sum_vanishes(n in 2usize..=8, t in 1usize..=8, cyc in any::<bool>()) {
        prop_assume!(t <= n);
        let f = field_for(n, cyc);
        let total = (0..=t).fold(f.zero(), |acc, j| {
            let term = f.mul(&f.q_pow((j * j.saturating_sub(1) / 2) as i64), &f.q_binomial(t, j).unwrap());
            f.add(&acc, &f.mul(&sign(&f, j), &term))
        });
        prop_assert!(total.is_zero());
    }

    #[test]
    fn sign_twist(n in 2usize..=8, t in 1usize..=7, l in 0usize..=8, cyc in any::<bool>()) {
        prop_assume!(t < n && l <= n - t);
        let f = field_for(n, cyc);
        let e = (l * t + l * l.saturating_sub(1) / 2) as i64;
        let lhs = f.mul(&sign(&f, l), &f.mul(&f.q_pow(e), &f.q_binomial(n - t, l).unwrap()));
        prop_assert_eq!(lhs, f.q_binomial(l + t - 1, l).unwrap());
    }

    #[test]
    fn rank_nullity(n in 2usize..=5, rows in 0usize..6, cols in 0usize..6, seed in any::<u64>(), cyc in any::<bool>()) {
        let f = field_for(n, cyc);
        let m = random::random_matrix(&f, rows, cols, &mut rng_from_seed(seed));
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.cols(), cols);
        prop_assert!(m.compose(&k).is_zero());
    }

    #[test]
    fn operator_binomial(n in 2usize..=6, dim in 1usize..=8, m in 1usize..=6) {
        prop_assume!(m <= n);
        let f = default_field(n).unwrap();
        let (psi, phi) = q_commuting_pair(&f, dim);
        let s = phi.add(&psi);
        let expand = sum(&f, (0..=m).map(|l| {
            mat_pow(&phi, m - l).compose(&mat_pow(&psi, l)).scale(&f.q_binomial(m, l).unwrap())
        }), dim);
        prop_assert_eq!(mat_pow(&s, m), expand);
        let inverse = sum(&f, (0..=m).map(|l| {
            let c = f.mul(&sign(&f, l), &f.mul(&f.q_pow((l * l.saturating_sub(1) / 2) as i64), &f.q_binomial(m, l).unwrap()));
            mat_pow(&s, m - l).compose(&mat_pow(&psi, l)).scale(&c)
        }), dim);
        prop_assert_eq!(mat_pow(&phi, m), inverse);
    }

    #[test]
    fn hom_and_tensor_are_n_complexes(n in 2usize..=5, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (u, v) = (complex(&f, rng), complex(&f, rng));
        let h = ncx::hom_complex(&u, &v).unwrap();
        let t = ncx::tensor_complex(&u, &v).unwrap();
        prop_assert!(h.check_nilpotent().is_ok());
        prop_assert!(t.check_nilpotent().is_ok());
    }

    #[test]
    fn hom_power_matches_iteration(n in 2usize..=5, seed in any::<u64>(), p in 1usize..=5) {
        prop_assume!(p <= n);
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (u, v) = (complex(&f, rng), complex(&f, rng));
        let deg = rand::Rng::gen_range(rng, -2i64..=2);
        let map = random::random_graded_map(&u, &v, deg, rng).unwrap();
        let iterated = iterate(map.clone(), p, |g| ncx::hom_differential(g, &u, &v).unwrap());
        prop_assert_eq!(ncx::hom_power_explicit(&map, &u, &v, p).unwrap(), iterated);
    }

    #[test]
    fn tensor_power_matches_iteration(n in 2usize..=5, seed in any::<u64>(), p in 1usize..=5) {
        prop_assume!(p <= n);
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (u, v) = (complex(&f, rng), complex(&f, rng));
        let t = ncx::tensor_complex(&u, &v).unwrap();
        for &i in t.space().dims().keys() {
            prop_assert_eq!(ncx::tensor_power_explicit(&u, &v, i, p).unwrap(), t.d_power(i, p));
        }
    }

    #[test]
    fn cycle_maps_compose(n in 2usize..=4, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (x, y, z) = (complex(&f, rng), complex(&f, rng), complex(&f, rng));
        let a = random::random_chain_map(&x, &y, rng).unwrap();
        let b = random::random_chain_map(&y, &z, rng).unwrap();
        prop_assert!(ncx::check_chain_map(&b.compose(&a).unwrap(), &x, &z).is_ok());
    }

    #[test]
    fn suspension_is_shifted_desuspension(n in 2usize..=5, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let x = complex(&f, &mut rng_from_seed(seed));
        let other = ncx::desuspend(&ncx::theta_shift(&x, n as i64)).unwrap();
        prop_assert_eq!(ncx::suspend(&x).unwrap(), other);
    }

    #[test]
    fn canonical_sequences_split(n in 2usize..=5, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let x = complex(&f, &mut rng_from_seed(seed));
        let cm = ncx::canonical_maps(&x).unwrap();
        prop_assert!(short_exact_split(&cm.epsilon, &cm.pi).is_ok());
        prop_assert!(short_exact_split(&cm.eta, &cm.delta).is_ok());
        for (m, s, t) in [(&cm.epsilon, &cm.desusp, &cm.q0), (&cm.pi, &cm.q0, &x), (&cm.eta, &x, &cm.q_top), (&cm.delta, &cm.q_top, &cm.susp)] {
            prop_assert!(ncx::check_chain_map(m, s, t).is_ok());
        }
    }

    #[test]
    fn null_homotopy_witnesses(n in 2usize..=5, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (x, y) = (complex(&f, rng), complex(&f, rng));
        let s = random::random_graded_map(&x, &y, 1 - n as i64, rng).unwrap();
        let map = ncx::homotopy_sum(&s, &x, &y).unwrap();
        let w = ncx::null_homotopy(&map, &x, &y).unwrap();
        prop_assert!(w.is_some());
        prop_assert_eq!(ncx::homotopy_sum(&w.unwrap(), &x, &y).unwrap(), map);
    }

    #[test]
    fn cone_triangles_are_exact(n in 2usize..=4, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (x, y) = (complex(&f, rng), complex(&f, rng));
        let map = random::random_chain_map(&x, &y, rng).unwrap();
        let t = ncx::cone(&map, &x, &y).unwrap();
        prop_assert!(ncx::hexagon_report(&t, None).unwrap().all_exact());
    }

    #[test]
    fn n2_homology_is_classical(seed in any::<u64>()) {
        let f = default_field(2).unwrap();
        let x = complex(&f, &mut rng_from_seed(seed));
        for i in -1..=x.support().map_or(0, |s| s.1) + 1 {
            // ker d_i / im d_{i-1} by rank counting.
            let classical = x.dim(i) - x.d(i).rank() - x.d(i - 1).rank();
            prop_assert_eq!(ncx::homology_dim(&x, i, 1).unwrap(), classical);
        }
    }

    #[test]
    fn category_power_rule(n in 2usize..=4, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let cat = random_category(&f, 6, &mut rng_from_seed(seed)).unwrap();
        prop_assert!(validate_category(&cat).is_ok());
        let a = cat.len() - 1;
        for (fi, gi) in (0..cat.hom_dim(a, a)).flat_map(|i| (0..cat.hom_dim(a, a)).map(move |j| (i, j))) {
            let k = cat.hom_dim(a, a);
            let (ef, eg) = (unit_vector(&f, k, fi), unit_vector(&f, k, gi));
            let r = cat.flat(a, a).degree(fi);
            let fg = cat.compose(a, a, a, &ef, &eg);
            for p in 1..=n {
                let mut rhs = vec![f.zero(); k];
                for l in 0..=p {
                    let c = f.mul(&f.q_pow(l as i64 * r), &f.q_binomial(p, l).unwrap());
                    let term = cat.compose(a, a, a, &cat.d_power(a, a, &ef, p - l), &cat.d_power(a, a, &eg, l));
                    rhs = rhs.iter().zip(&term).map(|(x, t)| f.mul_add(x, &c, t)).collect();
                }
                prop_assert_eq!(cat.d_power(a, a, &fg, p), rhs);
            }
        }
    }

    #[test]
    fn constructed_modules_validate(n in 2usize..=4, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let cat = Arc::new(random_category(&f, 6, rng).unwrap());
        let x = random_right_module(&cat, 2, 10, rng).unwrap();
        prop_assert!(validate_module(&x).is_ok());
        for which in [ModuleFunctor::Theta(1), ModuleFunctor::Suspend, ModuleFunctor::Desuspend, ModuleFunctor::Q(0)] {
            prop_assert!(validate_module(&apply_functor(&x, which).unwrap()).is_ok());
        }
        let reg = regular_bimodule(&cat).unwrap();
        prop_assert!(validate_module(&tensor_over_category(&x, &reg).unwrap().module).is_ok());
        prop_assert!(validate_module(&hom_over_category(&reg, &x).unwrap().module).is_ok());
    }

    #[test]
    fn action_matrices_multiply(n in 2usize..=4, seed in any::<u64>(), shift in -2i64..=2) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let cat = random_category(&f, 6, rng).unwrap();
        let a = cat.len() - 1;
        let k = cat.hom_dim(a, a);
        let x: Vec<Scalar> = (0..k).map(|_| f.random(rng)).collect();
        let fl = cat.flat(a, a);
        // Both factors homogeneous: one basis element, and a combination
        // of the basis elements sharing the degree of the first.
        let gi = rand::Rng::gen_range(rng, 0..k);
        let y = unit_vector(&f, k, gi);
        let m = fl.degree(gi);
        let xs: Vec<Scalar> = (0..k).map(|i| if fl.degree(i) == fl.degree(0) { x[i].clone() } else { f.zero() }).collect();
        let lhs = ActionMatrix::new(&cat, (a, a), &y, shift, n).unwrap()
            .product(&ActionMatrix::new(&cat, (a, a), &xs, shift + m, n).unwrap(), &cat).unwrap();
        let rhs = ActionMatrix::new(&cat, (a, a), &cat.compose(a, a, a, &y, &xs), shift, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjunction_is_iso(n in 2usize..=3, seed in any::<u64>()) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let cat = Arc::new(random_category(&f, 4, rng).unwrap());
        let x = random_right_module(&cat, 1, 6, rng).unwrap();
        let y = random_right_module(&cat, 1, 6, rng).unwrap();
        let report = adjunction_check(&x, &regular_bimodule(&cat).unwrap(), &y).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn khom_over_trivial_category(n in 2usize..=4, seed in any::<u64>(), shift in -3i64..=3) {
        let f = default_field(n).unwrap();
        let rng = &mut rng_from_seed(seed);
        let (u, v) = (complex(&f, rng), complex(&f, rng));
        let (mu, mv) = (complex_module(&u, Side::Right).unwrap(), complex_module(&v, Side::Right).unwrap());
        for flavor in [KhomFlavor::Susp0, KhomFlavor::Susp1] {
            prop_assert_eq!(khom_module(&mu, &mv, shift, flavor).unwrap(), ncx::khom_dim(&u, &v, shift, flavor).unwrap());
        }
    }

    #[test]
    fn workspace_round_trip(n in 2usize..=4, seed in any::<u64>(), cyc in any::<bool>()) {
        let f = field_for(n, cyc);
        let rng = &mut rng_from_seed(seed);
        let mut ws = Workspace::new(&f);
        let (x, y) = (complex(&f, rng), complex(&f, rng));
        let map = random::random_chain_map(&x, &y, rng).unwrap();
        ws.add_complex("X", x).unwrap();
        ws.add_complex("Y", y).unwrap();
        ws.add_map("f", "X", "Y", map).unwrap();
        let cat = Arc::new(random_category(&f, 4, rng).unwrap());
        ws.add_module("M", "A", random_right_module(&cat, 1, 6, rng).unwrap()).unwrap();
        ws.add_bimodule("R", "A", "A", regular_bimodule(&cat).unwrap()).unwrap();
        let text = ws.to_json();
        let back = Workspace::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(back == ws);
    }
}

#[test]
fn dual_generator_counterexample() {
    // N = 3, X = k in degree 1 over the trivial category, n = 1.
    let f = default_field(3).unwrap();
    let x = NComplex::trivial(&f, ncx::GradedSpace::concentrated(1, 1));
    let c = khom_via_dual(&complex_module(&x, Side::Right).unwrap(), 0, 1).unwrap();
    assert_eq!((c.khom, c.homology, c.naive), (0, 0, 1));
    let c = khom_via_dual(&complex_module(&x, Side::Right).unwrap(), 0, -1).unwrap();
    assert_eq!(c.khom, 1);
    assert!(c.holds());
}

#[test]
fn bad_polynomial_names_the_pair() {
    let f = default_field(3).unwrap();
    let coeffs = [f.zero(), f.one(), f.from_i64(2)];
    match polynomial_category(&f, 3, &coeffs) {
        Err(ndg::Error::LeibnizViolation { witness }) => assert!(witness.contains("->")),
        other => panic!("expected a Leibniz violation, got {other:?}"),
    }
}

#[test]
fn representable_endomorphisms() {
    let f = default_field(3).unwrap();
    let cat = Arc::new(truncated_polynomial(&f, 3, &f.one()).unwrap());
    let p = representable(&cat, 0, Side::Right).unwrap();
    let e = module_hom_complex(&p, &p).unwrap();
    assert_eq!(e.complex.space().total_dim(), 4);
    // Yoneda: evaluation at the unit is an isomorphism onto P(0).
    let (_, phi) = yoneda_map(&p, 0).unwrap();
    assert!(phi.inverse().is_some());
}
