use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use trifree_core::{
    build_cldui, extract_abc, graph_of_matrix, min_eigenvalue, project_ldoi, tcp_build,
    BipartiteState, ComplexMatrix, LdoiTriple, PatternGraph, TcpWitness, Tolerances,
};

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// `G G†` with a Gaussian `n × rank` factor, scaled to unit trace.
pub fn random_density<R: Rng>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, rank);
    let rho = g.matmul(&g.conj_transpose()).unwrap().hermitian_part();
    let t = rho.trace().re;
    rho.scale(1.0 / t)
}

pub fn random_state<R: Rng>(rng: &mut R, d1: usize, d2: usize) -> BipartiteState {
    let n = d1 * d2;
    let rank = rng.random_range(1..=n);
    BipartiteState::new(random_density(rng, n, rank), d1, d2, &Tolerances::default()).unwrap()
}

/// A valid triple: the LDOI projection of a random state.
pub fn random_valid_triple<R: Rng>(rng: &mut R, d: usize) -> LdoiTriple {
    let state = random_state(rng, d, d);
    extract_abc(&project_ldoi(&state).unwrap()).unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> PatternGraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(p))
        .collect();
    PatternGraph::from_edges(n, &edges).unwrap()
}

/// A random labelled forest: each vertex joins an earlier one with
/// probability `p`, then labels are shuffled.
pub fn random_forest<R: Rng>(rng: &mut R, n: usize, p: f64) -> PatternGraph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.random_bool(p) {
            let u = rng.random_range(0..v);
            let (a, b) = (labels[u], labels[v]);
            edges.push((a.min(b), a.max(b)));
        }
    }
    PatternGraph::from_edges(n, &edges).unwrap()
}

/// Hermitian matrix supported on `g` plus its diagonal, shifted so that its
/// smallest eigenvalue equals `lambda_min`.
pub fn random_psd_on_pattern<R: Rng>(rng: &mut R, g: &PatternGraph, lambda_min: f64) -> ComplexMatrix {
    let n = g.vertex_count();
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(rng.random_range(0.0..2.0), 0.0);
    }
    for (i, j) in g.edges() {
        let z = C64::from_polar(rng.random_range(0.2..2.0), rng.random_range(0.0..std::f64::consts::TAU));
        h[(i, j)] = z;
        h[(j, i)] = z.conj();
    }
    let shift = lambda_min - min_eigenvalue(&h).unwrap();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { h[(i, i)] + shift } else { h[(i, j)] })
}

/// A witness whose Hadamard products `v_k ⊙ w_k` have at most two nonzero
/// entries each. Supports are drawn as a shared part of size `<= 2` plus
/// disjoint private parts.
pub fn random_sparse_witness<R: Rng>(rng: &mut R, d: usize, pairs: usize) -> TcpWitness {
    let zero = C64::new(0.0, 0.0);
    let list = (0..pairs)
        .map(|_| {
            let mut order: Vec<usize> = (0..d).collect();
            order.shuffle(rng);
            let shared = rng.random_range(0..=2.min(d));
            let mut v = vec![zero; d];
            let mut w = vec![zero; d];
            for &i in &order[..shared] {
                v[i] = gaussian(rng);
                w[i] = gaussian(rng);
            }
            for &i in &order[shared..] {
                match rng.random_range(0..3) {
                    0 => v[i] = gaussian(rng),
                    1 => w[i] = gaussian(rng),
                    _ => {}
                }
            }
            if v.iter().all(|z| *z == zero) {
                v[order[0]] = gaussian(rng);
            }
            if w.iter().all(|z| *z == zero) {
                w[order[0]] = gaussian(rng);
            }
            (v, w)
        })
        .collect();
    TcpWitness::new(list).unwrap()
}

pub fn hadamard_support(v: &[C64], w: &[C64]) -> usize {
    v.iter().zip(w).filter(|(a, b)| (**a * **b).norm() > 0.0).count()
}

/// Sparse witness redrawn until `G(A)` of its triple is triangle-free.
pub fn random_triangle_free_witness<R: Rng>(rng: &mut R, d: usize) -> (TcpWitness, LdoiTriple) {
    let tol = Tolerances::default();
    loop {
        let pairs = rng.random_range(1..=d);
        let w = random_sparse_witness(rng, d, pairs);
        let t = tcp_build(&w).unwrap();
        if graph_of_matrix(&t.a, &tol).unwrap().is_triangle_free() {
            return (w, t);
        }
    }
}

/// A PPT CLDUI state on the cycle `C_k`: `B` is a random PSD matrix on the
/// cycle pattern and `A_ij A_ji >= |B_ij|^2` on edges, with optional
/// one-sided entries elsewhere.
pub fn random_ppt_cldui_on_cycle<R: Rng>(rng: &mut R, k: usize) -> (ComplexMatrix, ComplexMatrix, BipartiteState) {
    let g = PatternGraph::cycle(k);
    let lambda = rng.random_range(0.01..0.5);
    let b = random_psd_on_pattern(rng, &g, lambda);
    let mut a = ComplexMatrix::from_diagonal(&b.diagonal());
    for i in 0..k {
        for j in i + 1..k {
            if g.has_edge(i, j) {
                let m = b[(i, j)].norm();
                let x = m * rng.random_range(1.0..2.0);
                a[(i, j)] = C64::new(x, 0.0);
                a[(j, i)] = C64::new(m * m / x * rng.random_range(1.0..1.5), 0.0);
            } else if rng.random_bool(0.5) {
                let (r, c) = if rng.random_bool(0.5) { (i, j) } else { (j, i) };
                a[(r, c)] = C64::new(rng.random_range(0.0..1.0), 0.0);
            }
        }
    }
    let state = build_cldui(&a, &b, &Tolerances::default()).unwrap();
    (a, b, state)
}
