use proptest::prelude::*;
use rand::Rng;
use trifree_core::ldoi::assemble_ldoi;
use trifree_core::{
    build_cldui, build_ldoi, comparison_matrix, extract_abc, graph_of_matrix, is_ppt, is_psd,
    monte_carlo_project, partial_transpose, ppt_triple_check, project_cldui, project_ldoi,
    tcp_build, BipartiteState, ComplexMatrix, LdoiTriple, Tolerances, TwirlMode, C64,
};
use trifree_testkit::{fixtures, gen, oracle, rng};

fn close(a: &ComplexMatrix, b: &ComplexMatrix, rel: f64) -> bool {
    a.distance(b) <= rel * (1.0 + a.frobenius_norm().max(b.frobenius_norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn build_extract_round_trip(seed in any::<u64>(), d in 2usize..6) {
        let t = gen::random_valid_triple(&mut rng(seed), d);
        let s = build_ldoi(&t, &Tolerances::default()).unwrap();
        let back = extract_abc(&s).unwrap();
        prop_assert!(close(&back.a, &t.a, 1e-12));
        prop_assert!(close(&back.b, &t.b, 1e-12));
        prop_assert!(close(&back.c, &t.c, 1e-12));
        let total: f64 = t.a.as_slice().iter().map(|z| z.re).sum();
        prop_assert!((s.trace() - total).abs() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent_and_trace_preserving(seed in any::<u64>(), d in 2usize..5) {
        let s = gen::random_state(&mut rng(seed), d, d);
        let p = project_ldoi(&s).unwrap();
        let pp = project_ldoi(&p).unwrap();
        prop_assert!(p.rho().distance(pp.rho()) < 1e-10);
        prop_assert!((p.trace() - s.trace()).abs() <= 1e-12 * s.trace());
        prop_assert!(is_psd(p.rho(), &Tolerances::default()).unwrap());
        let c = project_cldui(&s).unwrap();
        prop_assert!((c.trace() - s.trace()).abs() <= 1e-12 * s.trace());
        prop_assert!(c.rho().distance(project_cldui(&c).unwrap().rho()) < 1e-10);
    }

    #[test]
    fn partial_transpose_swaps_b_and_c(seed in any::<u64>(), d in 2usize..6) {
        let t = gen::random_valid_triple(&mut rng(seed), d);
        let rho = assemble_ldoi(&t);
        let pt = partial_transpose(&rho, d, d).unwrap();
        let idx = |i: usize, j: usize| i * d + j;
        let expected = t.partial_transposed();
        for i in 0..d {
            for j in 0..d {
                let b_pt = pt[(idx(i, i), idx(j, j))];
                let c_pt = pt[(idx(i, j), idx(j, i))];
                prop_assert!((b_pt - expected.b[(i, j)]).norm() < 1e-12);
                prop_assert!((c_pt - expected.c[(i, j)]).norm() < 1e-12);
                if i != j {
                    prop_assert!((b_pt - t.c[(i, j)]).norm() < 1e-12);
                    prop_assert!((c_pt - t.b[(i, j)]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ppt_triple_check_is_necessary(seed in any::<u64>(), d in 2usize..5) {
        let t = gen::random_valid_triple(&mut rng(seed), d);
        let tol = Tolerances::default();
        let s = build_ldoi(&t, &tol).unwrap();
        if is_ppt(&s, &tol).unwrap() {
            prop_assert!(ppt_triple_check(&t, &tol).unwrap());
        }
    }
}

#[test]
fn projection_matches_explicit_sign_average() {
    let mut r = rng(3);
    for _ in 0..20 {
        let d = r.random_range(2..=4);
        let s = gen::random_state(&mut r, d, d);
        let exact = project_ldoi(&s).unwrap();
        let oracle = oracle::ldoi_twirl_by_signs(s.rho(), d);
        assert!(exact.rho().distance(&oracle) < 1e-12);
        let cl = project_cldui(&s).unwrap();
        let cl_oracle = oracle::cldui_twirl_by_phases(s.rho(), d);
        assert!(cl.rho().distance(&cl_oracle) < 1e-12);
    }
}

#[test]
fn tcp_states_are_projected_product_mixtures() {
    let mut r = rng(11);
    let tol = Tolerances::default();
    for _ in 0..100 {
        let d = r.random_range(2..=5);
        let pairs = r.random_range(1..=6);
        let w = gen::random_sparse_witness(&mut r, d, pairs);
        let t = tcp_build(&w).unwrap();
        t.validate(&tol).unwrap();
        let mixture = oracle::product_mixture(w.pairs());
        let s = BipartiteState::new(mixture, d, d, &tol).unwrap();
        let projected = project_ldoi(&s).unwrap();
        assert!(projected.rho().distance(&assemble_ldoi(&t)) < 1e-10);
        assert!(is_ppt(&build_ldoi(&t, &tol).unwrap(), &tol).unwrap());
    }
}

#[test]
fn pure_product_state_matches_the_defining_sums() {
    let mut r = rng(12);
    let d = 3;
    let v: Vec<C64> = (0..d).map(|_| gen::gaussian(&mut r)).collect();
    let w: Vec<C64> = (0..d).map(|_| gen::gaussian(&mut r)).collect();
    let s = BipartiteState::new(oracle::product_mixture(&[(v.clone(), w.clone())]), d, d, &Tolerances::default()).unwrap();
    let t = extract_abc(&project_ldoi(&s).unwrap()).unwrap();
    for i in 0..d {
        for j in 0..d {
            let a = v[i].norm_sqr() * w[j].norm_sqr();
            let b = v[i] * w[i] * (v[j] * w[j]).conj();
            let c = v[i] * w[i].conj() * (v[j] * w[j].conj()).conj();
            assert!((t.a[(i, j)] - a).norm() < 1e-12);
            assert!((t.b[(i, j)] - b).norm() < 1e-12);
            assert!((t.c[(i, j)] - c).norm() < 1e-12);
        }
    }
}

#[test]
fn sparse_witnesses_give_psd_comparison_matrices() {
    let mut r = rng(13);
    let tol = Tolerances::default();
    for _ in 0..300 {
        let d = r.random_range(2..=8);
        let (w, t) = gen::random_triangle_free_witness(&mut r, d);
        assert!(w.pairs().iter().all(|(v, x)| gen::hadamard_support(v, x) <= 2));
        assert!(graph_of_matrix(&t.a, &tol).unwrap().is_triangle_free());
        assert!(is_psd(&comparison_matrix(&t.b).unwrap(), &tol).unwrap());
        assert!(is_psd(&comparison_matrix(&t.c).unwrap(), &tol).unwrap());
    }
}

#[test]
fn monte_carlo_estimates_converge() {
    let mut r = rng(21);
    let s = gen::random_state(&mut r, 3, 3);
    let exact = project_ldoi(&s).unwrap();
    let coarse = monte_carlo_project(&s, TwirlMode::Ldoi, 100, 1).unwrap();
    let fine = monte_carlo_project(&s, TwirlMode::Ldoi, 10_000, 1).unwrap();
    let (ec, ef) = (coarse.rho().distance(exact.rho()), fine.rho().distance(exact.rho()));
    assert!(ef < ec, "{ef} vs {ec}");
    // error scales like 1/sqrt(N)
    assert!(ef < 0.5 * ec);
    let again = monte_carlo_project(&s, TwirlMode::Ldoi, 10_000, 1).unwrap();
    assert_eq!(again.rho(), fine.rho());

    let exact_c = project_cldui(&s).unwrap();
    let fine_c = monte_carlo_project(&s, TwirlMode::Cldui, 10_000, 2).unwrap();
    let coarse_c = monte_carlo_project(&s, TwirlMode::Cldui, 100, 2).unwrap();
    assert!(fine_c.rho().distance(exact_c.rho()) < coarse_c.rho().distance(exact_c.rho()));
}

#[test]
fn fixture_states() {
    let tol = Tolerances::default();
    let s = build_cldui(&fixtures::hidden6_a(), &fixtures::hidden6_b(), &tol).unwrap();
    assert_eq!(s.rho().rows(), 36);
    assert!(is_ppt(&s, &tol).unwrap());

    let t = LdoiTriple::new(fixtures::c4_companion_a(), fixtures::c4_realization(), fixtures::c4_realization()).unwrap();
    assert!(ppt_triple_check(&t, &tol).unwrap());
    let s = build_ldoi(&t, &tol).unwrap();
    assert!(is_ppt(&s, &tol).unwrap());
    assert!((s.trace() - 15.0).abs() < 1e-12);
}
