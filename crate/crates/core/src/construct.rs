//! Realizations of triangle-free cyclic graphs and the certified
//! PPT-entangled family built on them.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{detect_square, Verdict};
use crate::error::{Error, Result};
use crate::graphs::{adjacency_matrix, graph_of_matrix, PatternGraph};
use crate::ldoi::{build_ldoi, ppt_triple_check, BipartiteState, LdoiTriple};
use crate::matrix::{ComplexMatrix, Tolerances, C64};
use crate::numlin::{comparison_matrix, min_eigenvalue_with, partial_transpose, psd_check};

/// `B = X Xᵀ` for the `k × (k-1)` matrix with `X_ii = 1`, `X_{i+1,i} = 1` and
/// `X_{k,i} = (-1)^{i+1}` (1-based). `B` is PSD of rank `k - 1`, its pattern
/// graph is the cycle `1 - 2 - ... - k - 1` and `M(B)` is not PSD.
pub fn cycle_realization(k: usize) -> Result<ComplexMatrix> {
    if k < 4 {
        return Err(Error::CycleTooShort(k));
    }
    let mut x = vec![vec![0.0f64; k - 1]; k];
    for i in 0..k - 1 {
        x[i][i] = 1.0;
    }
    for i in 0..k - 2 {
        x[i + 1][i] = 1.0;
        x[k - 1][i] = if i % 2 == 0 { 1.0 } else { -1.0 };
    }
    Ok(ComplexMatrix::from_fn(k, k, |r, s| {
        C64::new((0..k - 1).map(|t| x[r][t] * x[s][t]).sum(), 0.0)
    }))
}

const MAX_HALVINGS: usize = 60;
const MAX_CANCELLATION_RETRIES: usize = 50;

/// A PSD realization `B` of `g` whose comparison matrix is not PSD.
///
/// The cycle realization is placed on a shortest cycle of `g` and the
/// remaining edges are filled in by `B' + x I + y ad(g)` with
/// `y = x / (1 + |λ_min(ad g)|)`, halving `x` until `M(B_x)` leaves the PSD
/// cone.
pub fn graph_realization(g: &PatternGraph) -> Result<ComplexMatrix> {
    let tol = Tolerances::default();
    if !g.is_triangle_free() {
        return Err(Error::NotTriangleFree);
    }
    let cycle = g.shortest_cycle().ok_or(Error::Acyclic)?;
    let n = g.vertex_count();
    let k = cycle.len();
    let bk = cycle_realization(k)?;
    let mut b0 = ComplexMatrix::zeros(n, n);
    for (p, &u) in cycle.iter().enumerate() {
        for (q, &v) in cycle.iter().enumerate() {
            b0[(u, v)] = bk[(p, q)];
        }
    }
    if n == k && g.edge_count() == k {
        return Ok(b0);
    }

    let ad = adjacency_matrix(g);
    let shift = 1.0 + min_eigenvalue_with(&ad, &tol)?.abs();
    let mut x = 1.0f64;
    for _ in 0..=MAX_HALVINGS {
        let mut y = x / shift;
        for _ in 0..MAX_CANCELLATION_RETRIES {
            let bx = ComplexMatrix::from_fn(n, n, |i, j| {
                let id = if i == j { x } else { 0.0 };
                b0[(i, j)] + (id + y * ad[(i, j)].re)
            });
            if graph_of_matrix(&bx, &tol)? != *g {
                y *= 0.9;
                continue;
            }
            if psd_check(&bx, &tol)?.is_psd() && !psd_check(&comparison_matrix(&bx)?, &tol)?.is_psd()
            {
                return Ok(bx);
            }
            break;
        }
        x /= 2.0;
    }
    Err(Error::SearchFailed)
}

/// How the free entries of `A` are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ASampling {
    /// Edge entries uniform above their lower bounds, one-sided entries off
    /// edges uniform in `[0, 1]`.
    #[default]
    Uniform,
    /// Every free entry at its lower bound.
    LowerBound,
}

#[derive(Debug, Clone)]
pub struct FamilyParams {
    pub graph: PatternGraph,
    pub realization_b: ComplexMatrix,
    pub count: usize,
    pub seed: u64,
    /// Fraction in `(0, 1]` of the largest diagonally dominant scaling of `C`.
    pub c_scale: f64,
    pub a_sampling: ASampling,
    /// Divide each triple by `Σ A_ij` so the state has unit trace.
    pub normalize: bool,
    /// Draws per index before giving up.
    pub max_attempts: usize,
    pub tolerances: Tolerances,
}

impl FamilyParams {
    pub fn new(graph: PatternGraph, realization_b: ComplexMatrix) -> Self {
        FamilyParams {
            graph,
            realization_b,
            count: 1,
            seed: 0,
            c_scale: 1.0,
            a_sampling: ASampling::Uniform,
            normalize: false,
            max_attempts: 100,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = &self.tolerances;
        let g = &self.graph;
        if !g.is_triangle_free() {
            return Err(Error::NotTriangleFree);
        }
        if g.is_acyclic() {
            return Err(Error::Acyclic);
        }
        if !(self.c_scale > 0.0 && self.c_scale <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "c_scale must lie in (0, 1], got {}",
                self.c_scale
            )));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidParams("max_attempts must be positive".into()));
        }
        let b = &self.realization_b;
        if b.rows() != g.vertex_count() || !b.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "realization is {}x{} but the graph has {} vertices",
                b.rows(),
                b.cols(),
                g.vertex_count()
            )));
        }
        if !psd_check(b, tol)?.is_psd() {
            return Err(Error::InvalidParams("realization is not PSD".into()));
        }
        if graph_of_matrix(b, tol)? != *g {
            return Err(Error::InvalidParams("realization pattern differs from the graph".into()));
        }
        if psd_check(&comparison_matrix(b)?, tol)?.is_psd() {
            return Err(Error::InvalidParams("realization has a PSD comparison matrix".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FamilySample {
    pub index: usize,
    pub triple: LdoiTriple,
    pub state: BipartiteState,
    pub verdict: Verdict,
    /// Draws used, including the accepted one.
    pub attempts: usize,
}

/// Draws `count` triples `(A, B, C)` sharing the realization `B`, each
/// verified triangle-free, PPT and detected entangled. Index `i` uses its own
/// random stream, so results do not depend on scheduling.
pub fn sample_family(params: &FamilyParams) -> Result<Vec<FamilySample>> {
    params.validate()?;
    (0..params.count)
        .into_par_iter()
        .map(|index| sample_one(params, index))
        .collect()
}

fn sample_one(params: &FamilyParams, index: usize) -> Result<FamilySample> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index as u64);
    for attempt in 1..=params.max_attempts {
        let triple = draw_triple(params, &mut rng);
        if let Some((state, verdict)) = certify(params, &triple)? {
            return Ok(FamilySample {
                index,
                triple,
                state,
                verdict,
                attempts: attempt,
            });
        }
    }
    Err(Error::RejectionBudgetExceeded(params.max_attempts))
}

fn draw_triple(params: &FamilyParams, rng: &mut ChaCha8Rng) -> LdoiTriple {
    let g = &params.graph;
    let b = &params.realization_b;
    let d = g.vertex_count();

    let mut raw = ComplexMatrix::zeros(d, d);
    for (i, j) in g.edges() {
        let r = 1.0 - rng.random::<f64>();
        let z = C64::from_polar(r, TAU * rng.random::<f64>());
        raw[(i, j)] = z;
        raw[(j, i)] = z.conj();
    }
    let scale = (0..d)
        .filter_map(|i| {
            let row: f64 = raw.row(i).iter().map(|z| z.norm()).sum();
            (row > 0.0).then(|| b[(i, i)].re / row)
        })
        .fold(f64::INFINITY, f64::min);
    let scale = params.c_scale * if scale.is_finite() { scale } else { 0.0 };
    let c = ComplexMatrix::from_fn(d, d, |i, j| if i == j { b[(i, i)] } else { raw[(i, j)] * scale });

    let mut a = ComplexMatrix::from_diagonal(&b.diagonal());
    for i in 0..d {
        for j in i + 1..d {
            if g.has_edge(i, j) {
                let m = b[(i, j)].norm_sqr().max(c[(i, j)].norm_sqr());
                let lb = m.sqrt();
                let (aij, aji) = match params.a_sampling {
                    ASampling::LowerBound => (lb, lb),
                    ASampling::Uniform => {
                        let aij = rng.random_range(lb..=2.0 * lb + 1.0);
                        let lo = m / aij;
                        (aij, rng.random_range(lo..=2.0 * lo + 1.0))
                    }
                };
                a[(i, j)] = aij.into();
                a[(j, i)] = aji.into();
            } else if params.a_sampling == ASampling::Uniform {
                let v = rng.random::<f64>();
                if rng.random::<bool>() {
                    a[(i, j)] = v.into();
                } else {
                    a[(j, i)] = v.into();
                }
            }
        }
    }
    let mut triple = LdoiTriple {
        a,
        b: b.clone(),
        c,
    };
    if params.normalize {
        let total: f64 = triple.a.as_slice().iter().map(|z| z.re).sum();
        let s = 1.0 / total;
        triple = LdoiTriple {
            a: triple.a.scale(s),
            b: triple.b.scale(s),
            c: triple.c.scale(s),
        };
    }
    triple
}

fn certify(params: &FamilyParams, triple: &LdoiTriple) -> Result<Option<(BipartiteState, Verdict)>> {
    let tol = &params.tolerances;
    if triple.validate(tol).is_err()
        || graph_of_matrix(&triple.a, tol)? != params.graph
        || !ppt_triple_check(triple, tol)?
    {
        return Ok(None);
    }
    let state = build_ldoi(triple, tol)?;
    let d = triple.dim();
    if !psd_check(&partial_transpose(state.rho(), d, d)?, tol)?.is_psd() {
        return Ok(None);
    }
    let verdict = detect_square(&state, tol)?;
    Ok(verdict.is_entangled().then_some((state, verdict)))
}
