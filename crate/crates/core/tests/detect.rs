use proptest::prelude::*;
use rand::Rng;
use trifree_core::detect::{analyze_square, detect_cldui_state};
use trifree_core::{
    build_cldui, build_ldoi, comparison_matrix, detect_cldui, detect_rectangular, detect_square,
    extract_abc, is_psd, project_ldoi, tcp_build, BipartiteState, ComplexMatrix, LdoiTriple,
    Outcome, Reason, Tolerances, WitnessMatrix, C64,
};
use trifree_testkit::{fixtures, gen, oracle, rng};

fn max_entangled(d: usize) -> BipartiteState {
    let n = d * d;
    let rho = ComplexMatrix::from_fn(n, n, |r, c| {
        let diag = |x: usize| x / d == x % d;
        C64::new(if diag(r) && diag(c) { 1.0 } else { 0.0 }, 0.0)
    });
    BipartiteState::new(rho, d, d, &Tolerances::default()).unwrap()
}

#[test]
fn cycle_four_example_is_certified_and_checked_by_the_oracle() {
    let tol = Tolerances::default();
    let t = LdoiTriple::new(fixtures::c4_companion_a(), fixtures::c4_realization(), fixtures::c4_realization()).unwrap();
    let v = detect_square(&build_ldoi(&t, &tol).unwrap(), &tol).unwrap();
    assert_eq!(v.outcome, Outcome::Entangled);
    let cert = v.certificate.unwrap();
    assert_eq!(cert.matrix, WitnessMatrix::B);
    let reference = oracle::min_eigenvalue(&comparison_matrix(&t.b).unwrap());
    assert!((cert.min_eigenvalue - reference).abs() < 1e-8);
    assert!(reference < 0.0);
}

#[test]
fn maximally_entangled_examples() {
    let tol = Tolerances::default();
    let t3 = extract_abc(&max_entangled(3)).unwrap();
    assert_eq!(t3.a, ComplexMatrix::identity(3));
    assert_eq!(t3.c, ComplexMatrix::identity(3));
    assert!(t3.b.as_slice().iter().all(|z| *z == C64::new(1.0, 0.0)));
    let v = detect_square(&max_entangled(3), &tol).unwrap();
    assert_eq!(v.outcome, Outcome::Entangled);
    assert!((v.certificate.unwrap().min_eigenvalue + 1.0).abs() < 1e-12);
    let v = detect_square(&max_entangled(2), &tol).unwrap();
    assert_eq!(v.outcome, Outcome::Inconclusive);
    assert_eq!(v.reason, Some(Reason::ComparisonMatricesPsd));
}

#[test]
fn never_certifies_separable_witness_states() {
    let mut r = rng(101);
    let tol = Tolerances::default();
    let mut any_triangle_free = 0;
    for _ in 0..1000 {
        let d = r.random_range(2..=8);
        let pairs = r.random_range(1..=2 * d);
        let w = gen::random_sparse_witness(&mut r, d, pairs);
        let s = build_ldoi(&tcp_build(&w).unwrap(), &tol).unwrap();
        let v = detect_square(&s, &tol).unwrap();
        assert_ne!(v.outcome, Outcome::Entangled);
        if v.reason == Some(Reason::ComparisonMatricesPsd) {
            any_triangle_free += 1;
        }
        assert_ne!(analyze_square(&s, &tol).unwrap().outcome, Outcome::Entangled);
    }
    assert!(any_triangle_free > 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn verdict_is_invariant_under_the_twirl(seed in any::<u64>(), d in 2usize..5) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        // sparse states so that triangle-free patterns actually occur
        let w = gen::random_sparse_witness(&mut r, d, d);
        let sep = gen::random_state(&mut r, d, d);
        let ent = max_entangled(d);
        for s in [build_ldoi(&tcp_build(&w).unwrap(), &tol).unwrap(), sep, ent] {
            prop_assert_eq!(detect_square(&s, &tol).unwrap(), detect_square(&project_ldoi(&s).unwrap(), &tol).unwrap());
        }
    }

    #[test]
    fn certificates_reproduce_under_the_oracle(seed in any::<u64>(), k in 4usize..7) {
        let tol = Tolerances::default();
        let (a, b, s) = gen::random_ppt_cldui_on_cycle(&mut rng(seed), k);
        let v = detect_square(&s, &tol).unwrap();
        if let Some(cert) = v.certificate {
            let m = match cert.matrix {
                WitnessMatrix::B => comparison_matrix(&b).unwrap(),
                WitnessMatrix::C => comparison_matrix(&ComplexMatrix::from_diagonal(&a.diagonal())).unwrap(),
                WitnessMatrix::PartialTranspose => unreachable!(),
            };
            let reference = oracle::min_eigenvalue(&m);
            prop_assert!((cert.min_eigenvalue - reference).abs() < 1e-8);
            prop_assert!(reference < -tol.psd_eps);
        }
    }
}

#[test]
fn cldui_decision_matches_comparison_matrix_split() {
    let mut r = rng(202);
    let tol = Tolerances::default();
    let (mut sep, mut ent) = (0, 0);
    for _ in 0..100 {
        let k = if r.random_bool(0.5) { 4 } else { 5 };
        let (a, b, s) = gen::random_ppt_cldui_on_cycle(&mut r, k);
        let v = detect_cldui(&a, &b, &tol).unwrap();
        let m_psd = is_psd(&comparison_matrix(&b).unwrap(), &tol).unwrap();
        assert_eq!(v.outcome == Outcome::Separable, m_psd);
        assert_eq!(v.outcome == Outcome::Entangled, !m_psd);
        assert_eq!(detect_cldui_state(&s, &tol).unwrap(), v);
        if m_psd {
            sep += 1;
        } else {
            ent += 1;
        }
    }
    assert!(sep > 0 && ent > 0, "{sep} separable, {ent} entangled");
}

#[test]
fn acyclic_ppt_cldui_states_are_separable() {
    let mut r = rng(203);
    let tol = Tolerances::default();
    for _ in 0..50 {
        let n = r.random_range(2..=7);
        let g = gen::random_forest(&mut r, n, 0.8);
        let b = gen::random_psd_on_pattern(&mut r, &g, 0.1);
        let a = ComplexMatrix::from_fn(n, n, |i, j| if i == j { b[(i, i)] } else { C64::new(b[(i, j)].norm(), 0.0) });
        assert_eq!(detect_cldui(&a, &b, &tol).unwrap().outcome, Outcome::Separable);
    }
}

#[test]
fn cldui_rejects_invalid_input() {
    let tol = Tolerances::default();
    let a = ComplexMatrix::identity(2);
    let b = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 1.0]]);
    assert!(detect_cldui(&a, &b, &tol).is_err());
    let s = build_ldoi(&LdoiTriple::new(fixtures::c4_companion_a(), fixtures::c4_realization(), fixtures::c4_realization()).unwrap(), &tol).unwrap();
    assert_eq!(detect_cldui_state(&s, &tol).unwrap().reason, Some(Reason::NotCldui));
}

#[test]
fn rectangular_product_states_are_inconclusive() {
    let mut r = rng(204);
    let tol = Tolerances::default();
    for (d1, d2) in [(2, 3), (2, 5), (3, 4)] {
        let v: Vec<C64> = (0..d1).map(|_| gen::gaussian(&mut r)).collect();
        let w: Vec<C64> = (0..d2).map(|_| gen::gaussian(&mut r)).collect();
        let s = BipartiteState::new(oracle::product_mixture(&[(v, w)]), d1, d2, &tol).unwrap();
        assert_eq!(detect_rectangular(&s, &tol, 1000).unwrap().outcome, Outcome::Inconclusive);
    }
}

#[test]
fn rectangular_finds_an_embedded_square_certificate() {
    let tol = Tolerances::default();
    let me = max_entangled(3);
    // place the second factor of a 3 x 3 state on columns 1, 3, 4 of 3 x 5
    let cols = [1, 3, 4];
    let (d1, d2) = (3, 5);
    let rho = ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i, j) = (r / d2, r % d2);
        let (k, l) = (c / d2, c % d2);
        match (cols.iter().position(|&x| x == j), cols.iter().position(|&x| x == l)) {
            (Some(a), Some(b)) => me.rho()[(i * 3 + a, k * 3 + b)],
            _ => C64::new(0.0, 0.0),
        }
    });
    let s = BipartiteState::new(rho, d1, d2, &tol).unwrap();
    let v = detect_rectangular(&s, &tol, 100).unwrap();
    assert_eq!(v.outcome, Outcome::Entangled);
    assert_eq!(v.certificate.unwrap().subset, vec![1, 3, 4]);
}

#[test]
fn separable_only_on_cldui_path() {
    let tol = Tolerances::default();
    let a = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]);
    let s = build_cldui(&a, &ComplexMatrix::identity(2), &tol).unwrap();
    assert_eq!(detect_square(&s, &tol).unwrap().outcome, Outcome::Inconclusive);
    assert_eq!(analyze_square(&s, &tol).unwrap().outcome, Outcome::Separable);
}
