use num_complex::Complex64 as C64;
use trifree_core::{ComplexMatrix, PatternGraph};

/// Coefficients `c_0..=c_n` of `det(λI - H) = Σ c_k λ^k`, by Faddeev–LeVerrier.
pub fn characteristic_polynomial(h: &ComplexMatrix) -> Vec<C64> {
    let n = h.rows();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = h.matmul(&m).unwrap();
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        m = next;
        let hm = h.matmul(&m).unwrap();
        coeffs[n - k] = -hm.trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Smallest root of the characteristic polynomial of a Hermitian matrix.
///
/// All roots are real, so Newton's method started left of the Gershgorin
/// interval increases monotonically to the smallest one.
pub fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let coeffs: Vec<f64> = characteristic_polynomial(h).iter().map(|z| z.re).collect();
    let radius = |i: usize| (0..n).filter(|&j| j != i).map(|j| h[(i, j)].norm()).sum::<f64>();
    let mut x = (0..n)
        .map(|i| h[(i, i)].re - radius(i))
        .fold(f64::INFINITY, f64::min)
        - 1.0;
    for _ in 0..100_000 {
        let (p, dp) = horner(&coeffs, x);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let step = p / dp;
        let next = x - step;
        if next <= x || step.abs() <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
        x = next;
    }
    x
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

pub fn has_triangle_bruteforce(g: &PatternGraph) -> bool {
    let n = g.vertex_count();
    (0..n).any(|i| {
        (i + 1..n).any(|j| (j + 1..n).any(|k| g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k)))
    })
}

/// `trace((ad G)^3)`, six times the number of triangles.
pub fn trace_adjacency_cubed(g: &PatternGraph) -> u64 {
    let n = g.vertex_count();
    let a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| g.has_edge(i, j) as u64).collect())
        .collect();
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                total += a[i][j] * a[j][k] * a[k][i];
            }
        }
    }
    total
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
}

pub fn independence_number_bruteforce(g: &PatternGraph) -> usize {
    subsets(g.vertex_count())
        .filter(|s| s.iter().all(|&u| s.iter().all(|&v| !g.has_edge(u, v))))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

pub fn max_triangle_free_induced_bruteforce(g: &PatternGraph) -> usize {
    subsets(g.vertex_count())
        .filter(|s| !has_triangle_bruteforce(&g.induced_subgraph(s)))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

pub fn is_forest_bruteforce(g: &PatternGraph) -> bool {
    // a forest has n - (#components) edges
    let n = g.vertex_count();
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for (u, v) in g.edges() {
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
    }
    let components = (0..n).filter(|&v| label[v] == v).count();
    g.edge_count() + components == n
}

pub fn is_connected_bruteforce(g: &PatternGraph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if g.has_edge(u, v) && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Lexicographically smallest upper-triangle adjacency string over all
/// vertex permutations.
pub fn canonical_form_bruteforce(g: &PatternGraph) -> Vec<bool> {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    loop {
        let code: Vec<bool> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| g.has_edge(perm[i], perm[j]))
            .collect();
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.unwrap_or_default()
}

/// The LDOI twirl as an explicit average over all `2^d` diagonal sign
/// matrices `O`, conjugating by `O ⊗ O`.
pub fn ldoi_twirl_by_signs(rho: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut acc = ComplexMatrix::zeros(n, n);
    let count = 1u64 << d;
    for mask in 0..count {
        let s = |i: usize| if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
        for r in 0..n {
            for c in 0..n {
                let f = s(r / d) * s(r % d) * s(c / d) * s(c % d);
                acc[(r, c)] += rho[(r, c)] * f;
            }
        }
    }
    acc.scale(1.0 / count as f64)
}

/// The CLDUI twirl as an average over diagonal unitaries with fifth roots of
/// unity on the diagonal, conjugating by `U ⊗ conj(U)`. Fifth roots suffice
/// because every phase exponent that appears lies in `-2..=2`.
pub fn cldui_twirl_by_phases(rho: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let n = d * d;
    let roots: Vec<C64> = (0..5)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 5.0))
        .collect();
    let mut acc = ComplexMatrix::zeros(n, n);
    let total = 5usize.pow(d as u32);
    let mut digits = vec![0usize; d];
    for _ in 0..total {
        let u = |i: usize| roots[digits[i]];
        for r in 0..n {
            let fr = u(r / d) * u(r % d).conj();
            for c in 0..n {
                let fc = u(c / d) * u(c % d).conj();
                acc[(r, c)] += fr * rho[(r, c)] * fc.conj();
            }
        }
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit < 5 {
                break;
            }
            *digit = 0;
        }
    }
    acc.scale(1.0 / total as f64)
}

/// `Σ_k |v_k w_k><v_k w_k|` written out entrywise.
pub fn product_mixture(pairs: &[(Vec<C64>, Vec<C64>)]) -> ComplexMatrix {
    let d1 = pairs[0].0.len();
    let d2 = pairs[0].1.len();
    ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        pairs
            .iter()
            .map(|(v, w)| v[r / d2] * w[r % d2] * (v[c / d2] * w[c % d2]).conj())
            .sum()
    })
}

/// Partial transpose on the second factor, from `ρ^Γ[(i,j),(k,l)] = ρ[(i,l),(k,j)]`.
pub fn partial_transpose(rho: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    let _ = d1;
    ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, c| {
        let (i, j) = (r / d2, r % d2);
        let (k, l) = (c / d2, c % d2);
        rho[(i * d2 + l, k * d2 + j)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_diagonal() {
        let h = ComplexMatrix::from_real_rows(&[[2.0, 0.0], [0.0, -3.0]]);
        let c = characteristic_polynomial(&h);
        assert_eq!(c.iter().map(|z| z.re).collect::<Vec<_>>(), vec![-6.0, 1.0, 1.0]);
        assert!((min_eigenvalue(&h) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_small() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 2.0], [3.0, 1.0]]);
        assert!((determinant(&m) - C64::new(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn canonical_form_of_paths() {
        let p = PatternGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let q = PatternGraph::from_edges(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(canonical_form_bruteforce(&p), canonical_form_bruteforce(&q));
    }
}
