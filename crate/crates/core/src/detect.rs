//! Verdicts from comparison-matrix tests on triangle-free states.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::graph_of_matrix;
use crate::ldoi::{extract_abc, is_cldui, BipartiteState, LdoiTriple};
use crate::matrix::{ComplexMatrix, Tolerances};
use crate::numlin::{comparison_matrix, partial_transpose, psd_check};

pub const VERDICT_SCHEMA: &str = "verdict-1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Entangled,
    Separable,
    Inconclusive,
}

/// The matrix whose negative eigenvalue certifies entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessMatrix {
    /// Comparison matrix of `B`.
    #[serde(rename = "B")]
    B,
    /// Comparison matrix of `C`.
    #[serde(rename = "C")]
    C,
    /// Partial transpose of the state.
    #[serde(rename = "PT")]
    PartialTranspose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NotTriangleFree,
    ComparisonMatricesPsd,
    NotPpt,
    NotCldui,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub matrix: WitnessMatrix,
    /// 0-based vertex subset; serialized 1-based.
    #[serde(with = "one_based")]
    pub subset: Vec<usize>,
    pub min_eigenvalue: f64,
    #[serde(default)]
    pub heuristic: bool,
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x + 1))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        raw.into_iter()
            .map(|x| {
                x.checked_sub(1)
                    .ok_or_else(|| serde::de::Error::custom("subset labels are 1-based"))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certificate: Option<Certificate>,
    pub reason: Option<Reason>,
}

impl Verdict {
    pub fn entangled(certificate: Certificate) -> Self {
        Verdict {
            outcome: Outcome::Entangled,
            certificate: Some(certificate),
            reason: None,
        }
    }

    pub fn inconclusive(reason: Option<Reason>) -> Self {
        Verdict {
            outcome: Outcome::Inconclusive,
            certificate: None,
            reason,
        }
    }

    pub fn is_entangled(&self) -> bool {
        self.outcome == Outcome::Entangled
    }
}

/// Provenance of a generated state, attached to sidecar certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub graph: GraphRecord,
    pub seed: u64,
    pub index: usize,
}

/// 1-based edge list of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&crate::graphs::PatternGraph> for GraphRecord {
    fn from(g: &crate::graphs::PatternGraph) -> Self {
        GraphRecord {
            n: g.vertex_count(),
            edges: g.edges().into_iter().map(|(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

/// The `verdict-1` JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
}

impl VerdictReport {
    pub fn new(verdict: Verdict, tolerances: Tolerances) -> Self {
        VerdictReport {
            schema: VERDICT_SCHEMA.to_string(),
            verdict,
            tolerances,
            generator: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// Tests `M(B)` then `M(C)`; returns a certificate for the first one whose
/// smallest eigenvalue lies strictly below `-psd_eps · (1 + ‖M‖_∞)`.
pub(crate) fn comparison_certificate(
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    subset: &[usize],
    tol: &Tolerances,
) -> Result<Option<Certificate>> {
    for (label, m) in [(WitnessMatrix::B, b), (WitnessMatrix::C, c)] {
        let check = psd_check(&comparison_matrix(m)?, tol)?;
        if !check.is_psd() {
            return Ok(Some(Certificate {
                matrix: label,
                subset: subset.to_vec(),
                min_eigenvalue: check.min_eigenvalue,
                heuristic: false,
            }));
        }
    }
    Ok(None)
}

pub(crate) fn detect_triple(triple: &LdoiTriple, tol: &Tolerances) -> Result<Verdict> {
    let g = graph_of_matrix(&triple.a, tol)?;
    if !g.is_triangle_free() {
        return Ok(Verdict::inconclusive(Some(Reason::NotTriangleFree)));
    }
    let all: Vec<usize> = (0..triple.dim()).collect();
    Ok(match comparison_certificate(&triple.b, &triple.c, &all, tol)? {
        Some(cert) => Verdict::entangled(cert),
        None => Verdict::inconclusive(Some(Reason::ComparisonMatricesPsd)),
    })
}

/// The comparison-matrix test on a `d ⊗ d` state.
///
/// Returns `Entangled` when `G(A)` is triangle-free and `M(B)` (checked first)
/// or `M(C)` is not PSD; otherwise `Inconclusive`. Only the twirl-invariant
/// entries of the state are read.
pub fn detect_square(state: &BipartiteState, tol: &Tolerances) -> Result<Verdict> {
    detect_triple(&extract_abc(state)?, tol)
}

/// `detect_square`, upgraded by the complete CLDUI decision when the state
/// itself is CLDUI. This is the only path that can return `Separable`.
pub fn analyze_square(state: &BipartiteState, tol: &Tolerances) -> Result<Verdict> {
    let verdict = detect_square(state, tol)?;
    if verdict.outcome == Outcome::Inconclusive
        && verdict.reason == Some(Reason::ComparisonMatricesPsd)
        && is_cldui(state, tol)
    {
        let triple = extract_abc(state)?;
        return cldui_decision(state, &triple, tol);
    }
    Ok(verdict)
}

/// Complete separability decision for triangle-free CLDUI states `ρ_{A,B}`.
pub fn detect_cldui(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<Verdict> {
    let state = crate::ldoi::build_cldui(a, b, tol)?;
    let triple = extract_abc(&state)?;
    if !graph_of_matrix(a, tol)?.is_triangle_free() {
        return Ok(Verdict::inconclusive(Some(Reason::NotTriangleFree)));
    }
    cldui_decision(&state, &triple, tol)
}

/// Like [`detect_cldui`] for a state given as a matrix; non-CLDUI states are
/// `Inconclusive(NotCldui)`.
pub fn detect_cldui_state(state: &BipartiteState, tol: &Tolerances) -> Result<Verdict> {
    if !is_cldui(state, tol) {
        return Ok(Verdict::inconclusive(Some(Reason::NotCldui)));
    }
    let triple = extract_abc(state)?;
    detect_cldui(&triple.a, &triple.b, tol)
}

fn cldui_decision(state: &BipartiteState, triple: &LdoiTriple, tol: &Tolerances) -> Result<Verdict> {
    let d = triple.dim();
    let all: Vec<usize> = (0..d).collect();
    let pt = psd_check(&partial_transpose(state.rho(), d, d)?, tol)?;
    if !pt.is_psd() {
        return Ok(Verdict {
            outcome: Outcome::Entangled,
            certificate: Some(Certificate {
                matrix: WitnessMatrix::PartialTranspose,
                subset: all,
                min_eigenvalue: pt.min_eigenvalue,
                heuristic: false,
            }),
            reason: Some(Reason::NotPpt),
        });
    }
    let check = psd_check(&comparison_matrix(&triple.b)?, tol)?;
    if check.is_psd() {
        Ok(Verdict {
            outcome: Outcome::Separable,
            certificate: None,
            reason: None,
        })
    } else {
        Ok(Verdict::entangled(Certificate {
            matrix: WitnessMatrix::B,
            subset: all,
            min_eigenvalue: check.min_eigenvalue,
            heuristic: false,
        }))
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn lex_combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let c = current.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for t in i + 1..k {
                    c[t] = c[t - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Comparison-matrix test for `d1 ⊗ d2` states with `d1 < d2`.
///
/// Column subsets `S` of size `d1` are scanned in lexicographic order, at most
/// `max_column_subsets` of them. Each one with a triangle-free `Ã = A[:, S]`
/// restricts the second factor to `S` and runs [`detect_square`]. The first
/// certifying subset is reported in the certificate.
pub fn detect_rectangular(
    state: &BipartiteState,
    tol: &Tolerances,
    max_column_subsets: usize,
) -> Result<Verdict> {
    let (d1, d2) = (state.d1(), state.d2());
    if d1 >= d2 {
        return Err(Error::DimensionOrder { d1, d2 });
    }
    let rho = state.rho();
    let subsets: Vec<Vec<usize>> = lex_combinations(d2, d1).take(max_column_subsets).collect();
    if subsets.is_empty() {
        return Ok(Verdict::inconclusive(None));
    }

    let restrict = |cols: &[usize]| {
        ComplexMatrix::from_fn(d1 * d1, d1 * d1, |r, s| {
            let (i, k) = (r / d1, r % d1);
            let (ip, kp) = (s / d1, s % d1);
            rho[(i * d2 + cols[k], ip * d2 + cols[kp])]
        })
    };
    let results: Vec<Result<Option<Verdict>>> = subsets
        .par_iter()
        .map(|cols| {
            let a_tilde =
                ComplexMatrix::from_fn(d1, d1, |i, k| rho[(i * d2 + cols[k], i * d2 + cols[k])]);
            if !graph_of_matrix(&a_tilde, tol)?.is_triangle_free() {
                return Ok(None);
            }
            let projected = BipartiteState::from_matrix_unchecked(restrict(cols), d1, d1);
            Ok(Some(detect_square(&projected, tol)?))
        })
        .collect();

    let mut any_triangle_free = false;
    for (cols, result) in subsets.iter().zip(results) {
        if let Some(mut verdict) = result? {
            any_triangle_free = true;
            if let Some(cert) = verdict.certificate.as_mut() {
                cert.subset = cols.clone();
                return Ok(verdict);
            }
        }
    }
    Ok(Verdict::inconclusive(Some(if any_triangle_free {
        Reason::ComparisonMatricesPsd
    } else {
        Reason::NotTriangleFree
    })))
}
