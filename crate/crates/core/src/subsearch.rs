//! Search for a principal submatrix with a triangle-free pattern whose
//! comparison matrix certifies entanglement.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{comparison_certificate, lex_combinations, Verdict};
use crate::error::{Error, Result};
use crate::graphs::{graph_of_matrix, independent_set_reduction, PatternGraph};
use crate::matrix::{ComplexMatrix, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest `d` searched exhaustively.
    pub exhaustive_limit: usize,
    /// Cap on subsets examined in exhaustive mode.
    pub max_subsets: usize,
    pub greedy_restarts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_limit: 20,
            max_subsets: 1 << 24,
            greedy_restarts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    /// 0-based, sorted.
    pub subset: Vec<usize>,
    pub verdict: Verdict,
}

const MAX_SEARCH_DIM: usize = 64;

fn adjacency_masks(g: &PatternGraph) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

fn above(v: usize) -> u64 {
    u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0)
}

fn mask_of(subset: &[usize]) -> u64 {
    subset.iter().fold(0u64, |m, &v| m | 1 << v)
}

fn induced_triangle_free(adj: &[u64], set: u64) -> bool {
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut nb = adj[v] & set & above(v);
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if adj[u] & nb != 0 {
                return false;
            }
        }
    }
    true
}

/// Triangles through each vertex of the subgraph induced by `set`.
fn triangle_counts(adj: &[u64], set: u64) -> Vec<usize> {
    let mut counts = vec![0usize; adj.len()];
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let higher = above(v);
        let mut nb = adj[v] & set & higher;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            let mut common = adj[u] & nb;
            while common != 0 {
                let w = common.trailing_zeros() as usize;
                common &= common - 1;
                counts[v] += 1;
                counts[u] += 1;
                counts[w] += 1;
            }
        }
    }
    counts
}

fn test_subset(
    subset: &[usize],
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<Option<crate::detect::Certificate>> {
    comparison_certificate(
        &b.principal_submatrix(subset),
        &c.principal_submatrix(subset),
        subset,
        tol,
    )
}

/// Looks for a vertex subset `S` with `G(A[S,S])` triangle-free and `M(B[S,S])`
/// or `M(C[S,S])` not PSD.
///
/// Up to `budget.exhaustive_limit` the subsets are scanned by decreasing size
/// and lexicographically within a size, and the first certifying one is
/// returned. Larger inputs run greedy triangle-breaking restarts and flag any
/// certificate as heuristic. The pattern graph is taken once from the full `A`.
pub fn find_certificate(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    budget: &SearchBudget,
    tol: &Tolerances,
) -> Result<Option<SearchHit>> {
    let d = a.require_square()?;
    for m in [b, c] {
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "A is {d}x{d} but B or C is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if d > MAX_SEARCH_DIM {
        return Err(Error::DimensionTooLarge {
            d,
            max: MAX_SEARCH_DIM,
        });
    }
    let adj = adjacency_masks(&graph_of_matrix(a, tol)?);
    let cert = if d <= budget.exhaustive_limit {
        exhaustive(&adj, b, c, budget.max_subsets, tol)?
    } else {
        greedy(&adj, b, c, budget.greedy_restarts, tol)?
    };
    Ok(cert.map(|cert| SearchHit {
        subset: cert.subset.clone(),
        verdict: Verdict::entangled(cert),
    }))
}

fn exhaustive(
    adj: &[u64],
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    max_subsets: usize,
    tol: &Tolerances,
) -> Result<Option<crate::detect::Certificate>> {
    let d = adj.len();
    let mut remaining = max_subsets;
    for k in (1..=d).rev() {
        if remaining == 0 {
            break;
        }
        let subsets: Vec<Vec<usize>> = lex_combinations(d, k).take(remaining).collect();
        remaining -= subsets.len();
        let found = subsets
            .par_iter()
            .map(|s| {
                if !induced_triangle_free(adj, mask_of(s)) {
                    return Ok(None);
                }
                test_subset(s, b, c, tol)
            })
            .find_first(|r| !matches!(r, Ok(None)));
        if let Some(r) = found {
            return r;
        }
    }
    Ok(None)
}

fn greedy(
    adj: &[u64],
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    restarts: usize,
    tol: &Tolerances,
) -> Result<Option<crate::detect::Certificate>> {
    let d = adj.len();
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        rng.set_stream(restart as u64);
        let mut set = full;
        loop {
            let counts = triangle_counts(adj, set);
            let worst = counts.iter().copied().max().unwrap_or(0);
            if worst == 0 {
                break;
            }
            let tied: Vec<usize> = (0..d).filter(|&v| counts[v] == worst).collect();
            let victim = if restart == 0 {
                tied[0]
            } else {
                *tied.choose(&mut rng).expect("non-empty")
            };
            set &= !(1u64 << victim);
        }
        let subset: Vec<usize> = (0..d).filter(|&v| set >> v & 1 == 1).collect();
        if let Some(mut cert) = test_subset(&subset, b, c, tol)? {
            cert.heuristic = true;
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

pub const MAX_REDUCTION_VERTICES: usize = 8;

fn independence_number(g: &PatternGraph) -> usize {
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest triangle-free induced subgraph, via the smallest set of vertices
/// meeting every triangle.
fn max_triangle_free_induced(g: &PatternGraph) -> usize {
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n <= 20 {
        return (0..=full)
            .filter(|&s| induced_triangle_free(&adj, s))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0);
    }
    fn find_triangle(adj: &[u64], set: u64) -> Option<[usize; 3]> {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut nb = adj[v] & set & above(v);
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                let common = adj[u] & nb;
                if common != 0 {
                    return Some([v, u, common.trailing_zeros() as usize]);
                }
            }
        }
        None
    }
    fn hits(adj: &[u64], set: u64, budget: usize) -> bool {
        match find_triangle(adj, set) {
            None => true,
            Some(_) if budget == 0 => false,
            Some(t) => t.iter().any(|&v| hits(adj, set & !(1u64 << v), budget - 1)),
        }
    }
    let tau = (0..=n).find(|&t| hits(&adj, full, t)).unwrap_or(n);
    n - tau
}

/// Checks `α(G) >= k  ⟺  H_G has a triangle-free induced subgraph on
/// |E| + k vertices`, computing both sides exactly.
pub fn reduction_roundtrip_check(g: &PatternGraph, k: usize) -> Result<bool> {
    let n = g.vertex_count();
    if n > MAX_REDUCTION_VERTICES {
        return Err(Error::GraphTooLarge {
            n,
            max: MAX_REDUCTION_VERTICES,
        });
    }
    let alpha = independence_number(g);
    let h = independent_set_reduction(g);
    let best = max_triangle_free_induced(&h);
    Ok((alpha >= k) == (best >= g.edge_count() + k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::WitnessMatrix;

    #[test]
    fn triangle_masks() {
        let k3 = adjacency_masks(&PatternGraph::complete(3));
        assert!(!induced_triangle_free(&k3, 0b111));
        assert!(induced_triangle_free(&k3, 0b011));
        assert_eq!(triangle_counts(&k3, 0b111), vec![1, 1, 1]);
        let k4 = adjacency_masks(&PatternGraph::complete(4));
        assert_eq!(triangle_counts(&k4, 0b1111), vec![3, 3, 3, 3]);
    }

    #[test]
    fn full_set_first_when_already_certifying() {
        let b = ComplexMatrix::from_real_rows(&[
            [1.0, 1.0, 0.0, 1.0],
            [1.0, 2.0, 1.0, 0.0],
            [0.0, 1.0, 2.0, -1.0],
            [1.0, 0.0, -1.0, 2.0],
        ]);
        let a = b.map(|z| z.norm().into());
        let c = ComplexMatrix::from_diagonal(&a.diagonal());
        let tol = Tolerances::default();
        let hit = find_certificate(&a, &b, &c, &SearchBudget::default(), &tol)
            .unwrap()
            .unwrap();
        assert_eq!(hit.subset, vec![0, 1, 2, 3]);
        let cert = hit.verdict.certificate.unwrap();
        assert_eq!(cert.matrix, WitnessMatrix::B);
        assert!(!cert.heuristic);

        let greedy_budget = SearchBudget {
            exhaustive_limit: 0,
            ..SearchBudget::default()
        };
        let hit = find_certificate(&a, &b, &c, &greedy_budget, &tol).unwrap().unwrap();
        assert!(hit.verdict.certificate.unwrap().heuristic);
    }

    #[test]
    fn identity_has_no_certificate() {
        let i = ComplexMatrix::identity(5);
        let tol = Tolerances::default();
        assert!(find_certificate(&i, &i, &i, &SearchBudget::default(), &tol)
            .unwrap()
            .is_none());
        let bad = ComplexMatrix::identity(4);
        assert!(matches!(
            find_certificate(&i, &bad, &i, &SearchBudget::default(), &tol),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn reduction_small_cases() {
        let k3 = PatternGraph::complete(3);
        assert!(reduction_roundtrip_check(&k3, 1).unwrap());
        assert_eq!(max_triangle_free_induced(&independent_set_reduction(&k3)), 4);
        let empty = PatternGraph::empty(4);
        assert!(reduction_roundtrip_check(&empty, 4).unwrap());
        assert!(matches!(
            reduction_roundtrip_check(&PatternGraph::empty(9), 1),
            Err(Error::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn hitting_set_path_matches_enumeration() {
        // K7 gives a 28-vertex H_G, beyond plain enumeration.
        let k7 = PatternGraph::complete(7);
        let h = independent_set_reduction(&k7);
        assert_eq!(max_triangle_free_induced(&h), 21 + 1);
        let k5 = PatternGraph::complete(5);
        let h5 = independent_set_reduction(&k5);
        assert_eq!(h5.vertex_count(), 15);
        assert_eq!(max_triangle_free_induced(&h5), 10 + 1);
    }
}
