//! Hand-entered example matrices.

use trifree_core::ComplexMatrix;

/// PSD realization of the 4-cycle with a non-PSD comparison matrix.
pub fn c4_realization() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 1.0, 0.0, 1.0],
        [1.0, 2.0, 1.0, 0.0],
        [0.0, 1.0, 2.0, -1.0],
        [1.0, 0.0, -1.0, 2.0],
    ])
}

/// Its comparison matrix.
pub fn c4_comparison() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, -1.0, 0.0, -1.0],
        [-1.0, 2.0, -1.0, 0.0],
        [0.0, -1.0, 2.0, -1.0],
        [-1.0, 0.0, -1.0, 2.0],
    ])
}

/// A companion `A` for [`c4_realization`] with `A_ij A_ji >= |B_ij|^2`.
pub fn c4_companion_a() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 1.0, 0.0, 1.0],
        [1.0, 2.0, 1.0, 0.0],
        [0.0, 1.0, 2.0, 1.0],
        [1.0, 0.0, 1.0, 2.0],
    ])
}

/// `A` of the 6 ⊗ 6 PPT CLDUI state whose pattern graph has triangles.
pub fn hidden6_a() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [11.0, 9.0, 6.0, 6.0, 4.0, 0.0],
        [10.0, 13.0, 4.0, 1.0, 11.0, 8.0],
        [5.0, 0.0, 13.0, 4.0, 7.0, 8.0],
        [6.0, 0.0, 0.0, 13.0, 11.0, 12.0],
        [2.0, 9.0, 5.0, 14.0, 15.0, 14.0],
        [4.0, 10.0, 4.0, 10.0, 14.0, 11.0],
    ])
}

pub fn hidden6_b() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [11.0, -7.0, 1.0, -3.0, -1.0, 0.0],
        [-7.0, 13.0, 0.0, 0.0, 6.0, 7.0],
        [1.0, 0.0, 13.0, 0.0, -2.0, 3.0],
        [-3.0, 0.0, 0.0, 13.0, -9.0, -8.0],
        [-1.0, 6.0, -2.0, -9.0, 15.0, 10.0],
        [0.0, 7.0, 3.0, -8.0, 10.0, 11.0],
    ])
}

/// `A` with the fifth row and column removed.
pub fn hidden6_reduced_a() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [11.0, 9.0, 6.0, 6.0, 0.0],
        [10.0, 13.0, 4.0, 1.0, 8.0],
        [5.0, 0.0, 13.0, 4.0, 8.0],
        [6.0, 0.0, 0.0, 13.0, 12.0],
        [4.0, 10.0, 4.0, 10.0, 11.0],
    ])
}

pub fn hidden6_reduced_b() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [11.0, -7.0, 1.0, -3.0, 0.0],
        [-7.0, 13.0, 0.0, 0.0, 7.0],
        [1.0, 0.0, 13.0, 0.0, 3.0],
        [-3.0, 0.0, 0.0, 13.0, -8.0],
        [0.0, 7.0, 3.0, -8.0, 11.0],
    ])
}
