//! Workloads shared by the detection benchmarks.

use trifree_core::{build_cldui, cycle_realization, BipartiteState, ComplexMatrix, Tolerances, C64};

/// `m` embedded in the top-left corner of an `n × n` identity.
pub fn pad_with_identity(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let k = m.rows();
    ComplexMatrix::from_fn(n, n, |i, j| match (i < k && j < k, i == j) {
        (true, _) => m[(i, j)],
        (false, true) => C64::new(1.0, 0.0),
        (false, false) => C64::new(0.0, 0.0),
    })
}

/// PPT CLDUI state whose `B` is the cycle realization on `k` vertices and
/// whose `A` saturates the PPT bound on every edge.
pub fn cycle_state(k: usize) -> BipartiteState {
    let b = cycle_realization(k).expect("k >= 4");
    let a = ComplexMatrix::from_fn(k, k, |i, j| if i == j { b[(i, i)] } else { C64::new(b[(i, j)].norm(), 0.0) });
    build_cldui(&a, &b, &Tolerances::default()).expect("valid CLDUI pair")
}
