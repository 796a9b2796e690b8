//! Detection of entanglement hidden behind triangle-free zero patterns.
//!
//! A bipartite state on `d ⊗ d` is reduced to three `d × d` matrices
//! `A_ij = <ij|ρ|ij>`, `B_ij = <ii|ρ|jj>` and `C_ij = <ij|ρ|ji>`. When the
//! pattern graph of `A` has no triangles, a comparison matrix of `B` or `C`
//! that fails to be positive semi-definite certifies entanglement. The crate
//! provides that test ([`detect`]), its extension to principal submatrices
//! ([`subsearch`]), the projections onto LDOI/CLDUI states ([`ldoi`]), the
//! graph machinery behind it ([`graphs`]) and a generator for certified
//! PPT-entangled families ([`construct`]).
//!
//! Matrix indices are 0-based throughout the API. The text formats and the
//! verdict JSON use 1-based vertex labels.

pub mod construct;
pub mod detect;
pub mod error;
pub mod format;
pub mod graphs;
pub mod ldoi;
pub mod matrix;
pub mod numlin;
pub mod subsearch;

pub use construct::{
    cycle_realization, graph_realization, sample_family, ASampling, FamilyParams, FamilySample,
};
pub use detect::{
    detect_cldui, detect_rectangular, detect_square, Certificate, Outcome, Reason, Verdict,
    VerdictReport, WitnessMatrix,
};
pub use error::{Error, Result, TripleViolation};
pub use graphs::{
    adjacency_matrix, enumerate_tf_cyclic_connected, graph_of_matrix, independent_set_reduction,
    Enumeration, PatternGraph,
};
pub use ldoi::{
    build_cldui, build_ldoi, extract_abc, is_ppt, monte_carlo_project, ppt_triple_check,
    project_cldui, project_ldoi, tcp_build, BipartiteState, LdoiTriple, TwirlMode, TcpWitness,
};
pub use matrix::{ComplexMatrix, Tolerances, C64};
pub use numlin::{comparison_matrix, is_psd, min_eigenvalue, partial_transpose};
pub use subsearch::{find_certificate, reduction_roundtrip_check, SearchBudget, SearchHit};
