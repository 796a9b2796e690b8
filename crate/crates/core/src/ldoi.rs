//! The `(A, B, C)` calculus of local-diagonal-orthogonal-invariant states.
//!
//! For a state on `d ⊗ d` with basis `|ij> = |i> ⊗ |j>` (flat index `i·d + j`):
//!
//! ```text
//! A_ij = <ij|ρ|ij>     B_ij = <ii|ρ|jj>     C_ij = <ij|ρ|ji>
//! ```
//!
//! Averaging `ρ` over random diagonal sign matrices `O ⊗ O` keeps exactly these
//! entries and zeroes the rest; averaging over `U ⊗ Ū` with random diagonal
//! phases keeps only `A` and `B`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result, TripleViolation};
use crate::matrix::{ComplexMatrix, Tolerances, C64};
use crate::numlin::{is_psd, partial_transpose};

/// A (possibly unnormalized) density matrix on `d1 ⊗ d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d1: usize,
    d2: usize,
    rho: ComplexMatrix,
    normalized: bool,
}

impl BipartiteState {
    /// Validates shape, Hermiticity, positivity and a positive trace.
    pub fn new(rho: ComplexMatrix, d1: usize, d2: usize, tol: &Tolerances) -> Result<Self> {
        check_dims(&rho, d1, d2)?;
        let threshold = crate::numlin::psd_threshold(&rho, tol);
        let min = crate::numlin::min_eigenvalue_with(&rho, tol)?;
        if min < -threshold {
            return Err(Error::NotPsd(min));
        }
        let trace = rho.trace().re;
        if !(trace > 0.0) {
            return Err(Error::NonPositiveTrace(trace));
        }
        Ok(Self::from_matrix_unchecked(rho, d1, d2))
    }

    /// Wraps a matrix known to be a state by construction.
    pub(crate) fn from_matrix_unchecked(rho: ComplexMatrix, d1: usize, d2: usize) -> Self {
        debug_assert_eq!(rho.rows(), d1 * d2);
        let normalized = (rho.trace().re - 1.0).abs() <= 1e-12;
        BipartiteState {
            d1,
            d2,
            rho,
            normalized,
        }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rescales to unit trace.
    pub fn normalize(&self) -> Self {
        let rho = self.rho.scale(1.0 / self.trace());
        BipartiteState {
            d1: self.d1,
            d2: self.d2,
            rho,
            normalized: true,
        }
    }

    fn square_dim(&self) -> Result<usize> {
        if self.d1 != self.d2 {
            return Err(Error::DimensionMismatch(format!(
                "operation needs equal local dimensions, got {} x {}",
                self.d1, self.d2
            )));
        }
        Ok(self.d1)
    }
}

fn check_dims(rho: &ComplexMatrix, d1: usize, d2: usize) -> Result<()> {
    let n = d1 * d2;
    if n == 0 || rho.rows() != n || rho.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not an operator on {d1} x {d2}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// The three `d × d` matrices describing an LDOI state.
#[derive(Debug, Clone, PartialEq)]
pub struct LdoiTriple {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
}

impl LdoiTriple {
    /// Checks only that the three matrices are square of one size.
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        let d = a.rows();
        for m in [&a, &b, &c] {
            if m.rows() != d || m.cols() != d {
                return Err(Error::InvalidTriple(TripleViolation::ShapeMismatch));
            }
        }
        Ok(LdoiTriple { a, b, c })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    fn scale(&self) -> f64 {
        self.a.max_abs().max(self.b.max_abs()).max(self.c.max_abs())
    }

    /// Checks the conditions under which `ρ_{A,B,C}` is a state: equal
    /// diagonals, `A` entrywise non-negative, `B` PSD, `C` Hermitian and
    /// `A_ij A_ji >= |C_ij|^2`.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let d = self.dim();
        let fail = |v| Err(Error::InvalidTriple(v));
        let s = self.scale();
        let zero = tol.zero_eps * s;
        for i in 0..d {
            let ai = self.a[(i, i)];
            if (ai - self.b[(i, i)]).norm() > zero || (ai - self.c[(i, i)]).norm() > zero {
                return fail(TripleViolation::DiagonalMismatch { index: i });
            }
        }
        for i in 0..d {
            for j in 0..d {
                let z = self.a[(i, j)];
                if z.re < -tol.psd_eps * s || z.im.abs() > zero {
                    return fail(TripleViolation::ANegativeEntry { row: i, col: j });
                }
            }
        }
        if !is_psd(&self.b, tol).unwrap_or(false) {
            return fail(TripleViolation::BNotPsd);
        }
        if self.c.hermitian_defect() > tol.zero_eps * (1.0 + self.c.max_abs()) {
            return fail(TripleViolation::CNotHermitian);
        }
        if let Some((i, j)) = self.product_bound_violation(&self.c, tol) {
            return fail(TripleViolation::ProductBound { row: i, col: j });
        }
        Ok(())
    }

    fn product_bound_violation(&self, m: &ComplexMatrix, tol: &Tolerances) -> Option<(usize, usize)> {
        let d = self.dim();
        let slack = tol.psd_eps * self.scale().powi(2);
        for i in 0..d {
            for j in i + 1..d {
                let prod = self.a[(i, j)].re * self.a[(j, i)].re;
                if prod < m[(i, j)].norm_sqr() - slack {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The triple of the partial transpose: off-diagonal parts of `B` and `C`
    /// trade places.
    pub fn partial_transposed(&self) -> LdoiTriple {
        let d = self.dim();
        let pick = |from: &ComplexMatrix, diag: &ComplexMatrix| {
            ComplexMatrix::from_fn(d, d, |i, j| if i == j { diag[(i, i)] } else { from[(i, j)] })
        };
        LdoiTriple {
            a: self.a.clone(),
            b: pick(&self.c, &self.b),
            c: pick(&self.b, &self.c),
        }
    }
}

/// Reads `(A, B, C)` off a square bipartite state. Never fails on a valid state.
pub fn extract_abc(state: &BipartiteState) -> Result<LdoiTriple> {
    let d = state.square_dim()?;
    Ok(extract_from_matrix(state.rho(), d))
}

pub(crate) fn extract_from_matrix(rho: &ComplexMatrix, d: usize) -> LdoiTriple {
    let idx = |i: usize, j: usize| i * d + j;
    LdoiTriple {
        a: ComplexMatrix::from_fn(d, d, |i, j| rho[(idx(i, j), idx(i, j))]),
        b: ComplexMatrix::from_fn(d, d, |i, j| rho[(idx(i, i), idx(j, j))]),
        c: ComplexMatrix::from_fn(d, d, |i, j| rho[(idx(i, j), idx(j, i))]),
    }
}

/// `ρ_{A,B,C}` without validation. The diagonal of the result is taken from `A`.
pub fn assemble_ldoi(triple: &LdoiTriple) -> ComplexMatrix {
    let d = triple.dim();
    let mut rho = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            rho[(i * d + j, i * d + j)] = triple.a[(i, j)];
            if i != j {
                rho[(i * d + i, j * d + j)] = triple.b[(i, j)];
                rho[(i * d + j, j * d + i)] = triple.c[(i, j)];
            }
        }
    }
    rho
}

pub fn build_ldoi(triple: &LdoiTriple, tol: &Tolerances) -> Result<BipartiteState> {
    triple.validate(tol)?;
    let d = triple.dim();
    Ok(BipartiteState::from_matrix_unchecked(assemble_ldoi(triple), d, d))
}

fn diagonal_part(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&a.diagonal())
}

/// CLDUI state `ρ_{A,B}`: the LDOI state with `C = diag(A)`.
pub fn build_cldui(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<BipartiteState> {
    let triple = LdoiTriple::new(a.clone(), b.clone(), diagonal_part(a))?;
    build_ldoi(&triple, tol)
}

/// Exact twirl over diagonal orthogonal `O ⊗ O`.
pub fn project_ldoi(state: &BipartiteState) -> Result<BipartiteState> {
    let triple = extract_abc(state)?;
    let d = triple.dim();
    Ok(BipartiteState::from_matrix_unchecked(assemble_ldoi(&triple), d, d))
}

/// Exact twirl over diagonal unitary `U ⊗ Ū`.
pub fn project_cldui(state: &BipartiteState) -> Result<BipartiteState> {
    let mut triple = extract_abc(state)?;
    triple.c = diagonal_part(&triple.a);
    let d = triple.dim();
    Ok(BipartiteState::from_matrix_unchecked(assemble_ldoi(&triple), d, d))
}

/// True when every entry outside the `A`/`B` pattern is below
/// `zero_eps · max|ρ|`, i.e. the state equals its CLDUI projection.
pub fn is_cldui(state: &BipartiteState, tol: &Tolerances) -> bool {
    if state.d1 != state.d2 {
        return false;
    }
    let d = state.d1;
    let rho = state.rho();
    let threshold = tol.zero_eps * rho.max_abs();
    for r in 0..d * d {
        let (i, j) = (r / d, r % d);
        for s in 0..d * d {
            let (k, l) = (s / d, s % d);
            let in_pattern = (r == s) || (i == j && k == l);
            if !in_pattern && rho[(r, s)].norm() > threshold {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlMode {
    /// Random diagonal signs, `O ⊗ O`.
    Ldoi,
    /// Random diagonal phases, `U ⊗ Ū`.
    Cldui,
}

const MC_CHUNK: usize = 256;

/// Empirical average of `samples` random twirls of the state.
///
/// Sample `k` draws its group element from a ChaCha stream keyed by `(seed, k)`
/// and partial sums are combined pairwise in a fixed order, so the result is
/// bit-identical for a given seed regardless of thread count.
pub fn monte_carlo_project(
    state: &BipartiteState,
    mode: TwirlMode,
    samples: usize,
    seed: u64,
) -> Result<BipartiteState> {
    let d = state.square_dim()?;
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    let rho = state.rho();
    let n_chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<ComplexMatrix> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = ComplexMatrix::zeros(d * d, d * d);
            let mut factor = vec![C64::new(0.0, 0.0); d * d];
            for k in chunk * MC_CHUNK..((chunk + 1) * MC_CHUNK).min(samples) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let local: Vec<C64> = (0..d)
                    .map(|_| match mode {
                        TwirlMode::Ldoi => {
                            C64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
                        }
                        TwirlMode::Cldui => C64::from_polar(1.0, TAU * rng.random::<f64>()),
                    })
                    .collect();
                for i in 0..d {
                    for j in 0..d {
                        factor[i * d + j] = local[i] * local[j].conj();
                    }
                }
                for r in 0..d * d {
                    for s in 0..d * d {
                        acc[(r, s)] += factor[r] * rho[(r, s)] * factor[s].conj();
                    }
                }
            }
            acc
        })
        .collect();
    let total = pairwise_sum(partials);
    Ok(BipartiteState::from_matrix_unchecked(
        total.scale(1.0 / samples as f64),
        d,
        d,
    ))
}

fn pairwise_sum(mut parts: Vec<ComplexMatrix>) -> ComplexMatrix {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b).expect("equal shapes")),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop().expect("at least one partial sum")
}

pub fn is_ppt(state: &BipartiteState, tol: &Tolerances) -> Result<bool> {
    let pt = partial_transpose(state.rho(), state.d1, state.d2)?;
    is_psd(&pt, tol)
}

/// Necessary conditions for `ρ_{A,B,C}` to be PPT: `C` PSD and
/// `A_ij A_ji >= |B_ij|^2`.
pub fn ppt_triple_check(triple: &LdoiTriple, tol: &Tolerances) -> Result<bool> {
    triple.validate(tol)?;
    if !is_psd(&triple.c, tol)? {
        return Ok(false);
    }
    Ok(triple.product_bound_violation(&triple.b, tol).is_none())
}

/// Vector pairs `(v_k, w_k)` of a triplewise completely positive decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct TcpWitness {
    pairs: Vec<(Vec<C64>, Vec<C64>)>,
}

impl TcpWitness {
    pub fn new(pairs: Vec<(Vec<C64>, Vec<C64>)>) -> Result<Self> {
        let d = match pairs.first() {
            Some((v, _)) => v.len(),
            None => return Err(Error::EmptyWitness),
        };
        if d == 0 || pairs.iter().any(|(v, w)| v.len() != d || w.len() != d) {
            return Err(Error::DimensionMismatch(
                "all witness vectors must share one positive length".into(),
            ));
        }
        Ok(TcpWitness { pairs })
    }

    pub fn pairs(&self) -> &[(Vec<C64>, Vec<C64>)] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].0.len()
    }

    /// `Σ_k |v_k w_k><v_k w_k|`.
    pub fn product_mixture(&self) -> BipartiteState {
        let d = self.dim();
        let mut rho = ComplexMatrix::zeros(d * d, d * d);
        for (v, w) in &self.pairs {
            let psi: Vec<C64> = (0..d * d).map(|r| v[r / d] * w[r % d]).collect();
            for r in 0..d * d {
                for s in 0..d * d {
                    rho[(r, s)] += psi[r] * psi[s].conj();
                }
            }
        }
        BipartiteState::from_matrix_unchecked(rho, d, d)
    }
}

/// The TCP triple of a witness:
///
/// ```text
/// A = Σ |v⊙v̄><w⊙w̄|,   B = Σ |v⊙w><v⊙w|,   C = Σ |v⊙w̄><v⊙w̄|
/// ```
pub fn tcp_build(witness: &TcpWitness) -> Result<LdoiTriple> {
    if witness.pairs.is_empty() {
        return Err(Error::EmptyWitness);
    }
    let d = witness.dim();
    let mut a = ComplexMatrix::zeros(d, d);
    let mut b = ComplexMatrix::zeros(d, d);
    let mut c = ComplexMatrix::zeros(d, d);
    for (v, w) in &witness.pairs {
        let vw: Vec<C64> = v.iter().zip(w).map(|(x, y)| x * y).collect();
        let vwbar: Vec<C64> = v.iter().zip(w).map(|(x, y)| x * y.conj()).collect();
        for i in 0..d {
            for j in 0..d {
                a[(i, j)] += C64::new(v[i].norm_sqr() * w[j].norm_sqr(), 0.0);
                b[(i, j)] += vw[i] * vw[j].conj();
                c[(i, j)] += vwbar[i] * vwbar[j].conj();
            }
        }
    }
    Ok(LdoiTriple { a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn max_entangled(d: usize) -> BipartiteState {
        let mut rho = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                rho[(i * d + i, j * d + j)] = re(1.0);
            }
        }
        BipartiteState::new(rho, d, d, &Tolerances::default()).unwrap()
    }

    #[test]
    fn extract_from_maximally_entangled() {
        let t = extract_abc(&max_entangled(3)).unwrap();
        assert_eq!(t.a, ComplexMatrix::identity(3));
        assert_eq!(t.b, ComplexMatrix::from_fn(3, 3, |_, _| re(1.0)));
        assert_eq!(t.c, ComplexMatrix::identity(3));
    }

    #[test]
    fn extract_from_diagonal_state() {
        let vals = [1.0, 2.0, 3.0, 4.0];
        let rho = ComplexMatrix::from_diagonal(&vals.map(re));
        let s = BipartiteState::new(rho, 2, 2, &Tolerances::default()).unwrap();
        let t = extract_abc(&s).unwrap();
        assert_eq!(t.a, ComplexMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]));
        let diag = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 4.0]]);
        assert_eq!(t.b, diag);
        assert_eq!(t.c, diag);
    }

    #[test]
    fn identity_triple_gives_diagonal_state() {
        let i3 = ComplexMatrix::identity(3);
        let t = LdoiTriple::new(i3.clone(), i3.clone(), i3).unwrap();
        let s = build_ldoi(&t, &Tolerances::default()).unwrap();
        let mut expected = ComplexMatrix::zeros(9, 9);
        for i in 0..3 {
            expected[(i * 3 + i, i * 3 + i)] = re(1.0);
        }
        assert_eq!(s.rho(), &expected);
    }

    #[test]
    fn cldui_bell_state() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let s = build_cldui(&a, &b, &Tolerances::default()).unwrap();
        assert_eq!(s.rho(), max_entangled(2).rho());
        assert!(!is_ppt(&s, &Tolerances::default()).unwrap());
    }

    #[test]
    fn validation_reports_failing_condition() {
        let tol = Tolerances::default();
        let i2 = ComplexMatrix::identity(2);
        let mut c = i2.clone();
        c[(0, 1)] = re(0.5);
        c[(1, 0)] = re(0.5);
        // A = I has A_12 A_21 = 0 < |C_12|^2
        let t = LdoiTriple::new(i2.clone(), i2.clone(), c).unwrap();
        assert!(matches!(
            build_ldoi(&t, &tol),
            Err(Error::InvalidTriple(TripleViolation::ProductBound { row: 0, col: 1 }))
        ));
        let mut b = i2.clone();
        b[(0, 1)] = re(3.0);
        b[(1, 0)] = re(3.0);
        let t = LdoiTriple::new(i2.clone(), b, i2.clone()).unwrap();
        assert!(matches!(
            t.validate(&tol),
            Err(Error::InvalidTriple(TripleViolation::BNotPsd))
        ));
        let t = LdoiTriple::new(i2.scale(2.0), i2.clone(), i2.clone()).unwrap();
        assert!(matches!(
            t.validate(&tol),
            Err(Error::InvalidTriple(TripleViolation::DiagonalMismatch { index: 0 }))
        ));
        assert!(LdoiTriple::new(i2.clone(), i2, ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn ppt_check_cases() {
        let tol = Tolerances::default();
        let i3 = ComplexMatrix::identity(3);
        let diag = LdoiTriple::new(i3.clone(), i3.clone(), i3.clone()).unwrap();
        assert!(ppt_triple_check(&diag, &tol).unwrap());

        // C Hermitian but indefinite, A large enough to keep the triple valid.
        let a = ComplexMatrix::from_real_rows(&[[1.0, 4.0], [4.0, 1.0]]);
        let c = ComplexMatrix::from_real_rows(&[[1.0, 3.0], [3.0, 1.0]]);
        let t = LdoiTriple::new(a, ComplexMatrix::identity(2), c).unwrap();
        t.validate(&tol).unwrap();
        assert!(!ppt_triple_check(&t, &tol).unwrap());
    }

    #[test]
    fn tcp_of_basis_vectors() {
        let e = |k: usize, d: usize| (0..d).map(|i| re(if i == k { 1.0 } else { 0.0 })).collect::<Vec<_>>();
        let w = TcpWitness::new(vec![(e(0, 3), e(0, 3))]).unwrap();
        let t = tcp_build(&w).unwrap();
        let mut e11 = ComplexMatrix::zeros(3, 3);
        e11[(0, 0)] = re(1.0);
        assert_eq!((&t.a, &t.b, &t.c), (&e11, &e11, &e11));

        let w = TcpWitness::new((0..3).map(|k| (e(k, 3), e(k, 3))).collect()).unwrap();
        let t = tcp_build(&w).unwrap();
        let i3 = ComplexMatrix::identity(3);
        assert_eq!((&t.a, &t.b, &t.c), (&i3, &i3, &i3));

        assert!(matches!(TcpWitness::new(vec![]), Err(Error::EmptyWitness)));
    }

    #[test]
    fn monte_carlo_fixed_point_and_determinism() {
        let s = max_entangled(3);
        let one = monte_carlo_project(&s, TwirlMode::Ldoi, 1, 5).unwrap();
        assert_eq!(one.rho(), s.rho());
        let x = monte_carlo_project(&s, TwirlMode::Cldui, 300, 9).unwrap();
        let y = monte_carlo_project(&s, TwirlMode::Cldui, 300, 9).unwrap();
        assert_eq!(x.rho(), y.rho());
        assert!(monte_carlo_project(&s, TwirlMode::Ldoi, 0, 1).is_err());
    }

    #[test]
    fn cldui_projection_drops_c() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let c = ComplexMatrix::from_real_rows(&[[1.0, 0.5], [0.5, 1.0]]);
        let t = LdoiTriple::new(a.clone(), ComplexMatrix::identity(2), c).unwrap();
        let s = build_ldoi(&t, &Tolerances::default()).unwrap();
        assert!(!is_cldui(&s, &Tolerances::default()));
        let p = extract_abc(&project_cldui(&s).unwrap()).unwrap();
        assert_eq!(p.a, a);
        assert_eq!(p.b, ComplexMatrix::identity(2));
        assert_eq!(p.c, ComplexMatrix::identity(2));
    }
}
