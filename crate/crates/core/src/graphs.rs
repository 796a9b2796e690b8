//! Zero-pattern graphs, triangle/cycle predicates, small isomorphism-class
//! enumeration and the independent-set reduction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerances, C64};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl PatternGraph {
    pub fn empty(n: usize) -> Self {
        PatternGraph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from 0-based edges. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidParams(format!(
                    "edge {{{}, {}}} outside vertex range 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidParams(format!("self-loop at vertex {}", i + 1)));
            }
            if g.has_edge(i, j) {
                return Err(Error::InvalidParams(format!(
                    "duplicate edge {{{}, {}}}",
                    i.min(j) + 1,
                    i.max(j) + 1
                )));
            }
            g.insert_edge(i, j);
        }
        Ok(g)
    }

    fn insert_edge(&mut self, i: usize, j: usize) {
        for (a, b) in [(i, j), (j, i)] {
            let list = &mut self.adj[a];
            if let Err(pos) = list.binary_search(&b) {
                list.insert(pos, b);
            }
        }
    }

    pub fn cycle(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::from_edges(k, &edges).expect("cycle needs k >= 3")
    }

    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_edges(k, &edges).unwrap()
    }

    pub fn complete(k: usize) -> Self {
        let mut g = Self::empty(k);
        for i in 0..k {
            for j in i + 1..k {
                g.insert_edge(i, j);
            }
        }
        g
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn is_triangle_free(&self) -> bool {
        for (i, j) in self.edges() {
            let (a, b) = (&self.adj[i], &self.adj[j]);
            let (mut p, mut q) = (0, 0);
            while p < a.len() && q < b.len() {
                match a[p].cmp(&b[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
        }
        true
    }

    /// True iff the graph is a forest.
    pub fn is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j) in self.edges() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                return false;
            }
            parent[ri] = rj;
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> PatternGraph {
        let mut g = PatternGraph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.insert_edge(a, b);
                }
            }
        }
        g
    }

    /// A shortest cycle as an ordered vertex list, or `None` for a forest.
    ///
    /// Roots are scanned in increasing order with neighbors in increasing
    /// order, and the first cycle of minimum length wins. The result starts at
    /// its smallest vertex and continues toward the smaller of its two cycle
    /// neighbors.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for root in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            let mut queue = VecDeque::from([root]);
            dist[root] = 0;
            while let Some(u) = queue.pop_front() {
                if let Some(b) = &best {
                    if 2 * dist[u] + 1 >= b.len() {
                        break;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if w != parent[u] && dist[w] >= dist[u] {
                        let len = dist[u] + dist[w] + 1;
                        if best.as_ref().is_some_and(|b| len >= b.len()) {
                            continue;
                        }
                        let trace = |mut x: usize| {
                            let mut p = vec![x];
                            while x != root {
                                x = parent[x];
                                p.push(x);
                            }
                            p
                        };
                        let mut cyc = trace(u);
                        cyc.reverse();
                        let mut back = trace(w);
                        back.pop();
                        cyc.extend(back);
                        best = Some(cyc);
                    }
                }
            }
        }
        best.map(|c| normalize_cycle(&c))
    }
}

fn normalize_cycle(c: &[usize]) -> Vec<usize> {
    let k = c.len();
    let start = (0..k).min_by_key(|&i| c[i]).unwrap();
    let fwd = c[(start + 1) % k];
    let bwd = c[(start + k - 1) % k];
    if fwd <= bwd {
        (0..k).map(|t| c[(start + t) % k]).collect()
    } else {
        (0..k).map(|t| c[(start + k - t) % k]).collect()
    }
}

/// Pattern graph of a square matrix: `{i, j}` is an edge iff both `|A_ij|`
/// and `|A_ji|` exceed `zero_eps · max|A|`.
pub fn graph_of_matrix(a: &ComplexMatrix, tol: &Tolerances) -> Result<PatternGraph> {
    let n = a.require_square()?;
    let threshold = tol.zero_eps * a.max_abs();
    let mut g = PatternGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if a[(i, j)].norm() > threshold && a[(j, i)].norm() > threshold {
                g.insert_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub fn adjacency_matrix(g: &PatternGraph) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(g.n.max(1), g.n.max(1));
    for (i, j) in g.edges() {
        m[(i, j)] = C64::new(1.0, 0.0);
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    m
}

/// `H_G`: the original graph plus one vertex per edge `{i, j}`, joined to
/// both `i` and `j`. Edge vertices are numbered `n, n+1, ...` in edge order.
pub fn independent_set_reduction(g: &PatternGraph) -> PatternGraph {
    let edges = g.edges();
    let mut h = PatternGraph::empty(g.n + edges.len());
    for (k, &(i, j)) in edges.iter().enumerate() {
        h.insert_edge(i, j);
        h.insert_edge(i, g.n + k);
        h.insert_edge(j, g.n + k);
    }
    h
}

pub const MAX_ENUMERATION_DIM: usize = 7;

/// Isomorphism classes of connected, cyclic, triangle-free graphs.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub d: usize,
    pub count: usize,
    /// One canonically labeled graph per class, ordered by canonical code.
    pub representatives: Vec<PatternGraph>,
}

pub fn enumerate_tf_cyclic_connected(d: usize) -> Result<Enumeration> {
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::DimensionTooLarge {
            d,
            max: MAX_ENUMERATION_DIM,
        });
    }
    if d < 4 {
        return Ok(Enumeration {
            d,
            count: 0,
            representatives: Vec::new(),
        });
    }
    let pairs = pair_list(d);
    let total: u64 = 1 << pairs.len();
    const CHUNK: u64 = 1 << 12;
    let codes: BTreeSet<u64> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut local = BTreeSet::new();
            for mask in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                // connected and cyclic needs at least d edges
                if (mask.count_ones() as usize) < d {
                    continue;
                }
                let adj = masks_from_code(mask, d, &pairs);
                if connected_mask(&adj) && triangle_free_mask(&adj) {
                    local.insert(canonical_code_masks(&adj, &pairs));
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let representatives: Vec<PatternGraph> =
        codes.iter().map(|&c| graph_from_code(c, d, &pairs)).collect();
    Ok(Enumeration {
        d,
        count: representatives.len(),
        representatives,
    })
}

/// Canonical code of a graph on at most 11 vertices: the smallest adjacency
/// bit-string over all labelings consistent with the colour-refined vertex
/// partition. Two graphs are isomorphic iff their codes agree.
pub fn canonical_code(g: &PatternGraph) -> u64 {
    assert!(g.n <= 11, "canonical_code supports at most 11 vertices");
    let adj: Vec<u64> = (0..g.n)
        .map(|v| g.adj[v].iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();
    canonical_code_masks(&adj, &pair_list(g.n))
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut p = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            p.push((i, j));
        }
    }
    p
}

fn masks_from_code(code: u64, n: usize, pairs: &[(usize, usize)]) -> Vec<u64> {
    let mut adj = vec![0u64; n];
    for (bit, &(i, j)) in pairs.iter().enumerate() {
        if code >> bit & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    adj
}

fn graph_from_code(code: u64, n: usize, pairs: &[(usize, usize)]) -> PatternGraph {
    let edges: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|(bit, _)| code >> bit & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    PatternGraph::from_edges(n, &edges).unwrap()
}

fn connected_mask(adj: &[u64]) -> bool {
    let n = adj.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen & full == full
}

pub(crate) fn triangle_free_mask(adj: &[u64]) -> bool {
    for (v, &nv) in adj.iter().enumerate() {
        let mut higher = nv & !((2u64 << v) - 1);
        while higher != 0 {
            let w = higher.trailing_zeros() as usize;
            higher &= higher - 1;
            if nv & adj[w] != 0 {
                return false;
            }
        }
    }
    true
}

/// Colour refinement: returns a colour per vertex, where colours are ranks of
/// isomorphism-invariant signatures.
fn refine_colours(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut colour: Vec<usize> = adj.iter().map(|m| m.count_ones() as usize).collect();
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&w| adj[v] >> w & 1 == 1)
                    .map(|w| colour[w])
                    .collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> = signatures
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(r, s)| (s, r))
            .collect();
        let next: Vec<usize> = signatures.iter().map(|s| ranks[s]).collect();
        let classes_before = colour.iter().collect::<BTreeSet<_>>().len();
        let classes_after = ranks.len();
        colour = next;
        if classes_after == classes_before {
            return colour;
        }
    }
}

fn canonical_code_masks(adj: &[u64], pairs: &[(usize, usize)]) -> u64 {
    let n = adj.len();
    let colour = refine_colours(adj);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        cells.entry(colour[v]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let mut order: Vec<usize> = cells.iter().flatten().copied().collect();
    let mut best = u64::MAX;
    permute_cells(&cells, 0, 0, &mut order, &mut |ord| {
        let mut code = 0u64;
        for (bit, &(p, q)) in pairs.iter().enumerate() {
            if adj[ord[p]] >> ord[q] & 1 == 1 {
                code |= 1 << bit;
            }
        }
        best = best.min(code);
    });
    best
}

/// Visits every ordering of `order` that permutes vertices only within cells.
fn permute_cells(
    cells: &[Vec<usize>],
    cell: usize,
    offset: usize,
    order: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if cell == cells.len() {
        visit(order);
        return;
    }
    let len = cells[cell].len();
    heap_permutations(order, offset, len, &mut |ord: &mut Vec<usize>| {
        permute_cells(cells, cell + 1, offset + len, ord, visit)
    });
}

fn heap_permutations(
    order: &mut Vec<usize>,
    offset: usize,
    len: usize,
    visit: &mut impl FnMut(&mut Vec<usize>),
) {
    // Heap's algorithm on order[offset..offset+len]
    let mut c = vec![0usize; len];
    visit(order);
    let mut i = 1;
    while i < len {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(offset, offset + i);
            } else {
                order.swap(offset + c[i], offset + i);
            }
            visit(order);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
