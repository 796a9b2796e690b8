//! Dense Hermitian spectra, PSD tests, comparison matrices and the partial
//! transpose.
//!
//! Eigenvalues come from a Householder reduction to real tridiagonal form
//! followed by implicit QL iterations. Every step is a fixed sequence of
//! floating-point operations, so identical input bits give identical output
//! bits.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerances, C64};

const MAX_QL_ITERATIONS: usize = 60;

fn check_hermitian(h: &ComplexMatrix, zero_eps: f64) -> Result<usize> {
    let n = h.require_square()?;
    let allowed = zero_eps * (1.0 + h.max_abs());
    let asymmetry = h.hermitian_defect();
    if asymmetry > allowed {
        return Err(Error::NonHermitian { asymmetry, allowed });
    }
    Ok(n)
}

/// All eigenvalues of a Hermitian matrix in ascending order.
///
/// The input is symmetrized before the solve; asymmetry beyond
/// `tol.zero_eps · (1 + max|H_ij|)` is an error.
pub fn hermitian_eigenvalues(h: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = check_hermitian(h, tol.zero_eps)?;
    let sym = h.hermitian_part();
    let (mut diag, mut off) = tridiagonalize(&sym, n);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Smallest eigenvalue of a Hermitian matrix, with the default Hermiticity slack.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    min_eigenvalue_with(h, &Tolerances::default())
}

pub fn min_eigenvalue_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(hermitian_eigenvalues(h, tol)?[0])
}

/// The slack `psd_eps · (1 + ‖H‖_∞)` below zero that `is_psd` still accepts.
pub fn psd_threshold(h: &ComplexMatrix, tol: &Tolerances) -> f64 {
    tol.psd_eps * (1.0 + h.inf_norm())
}

/// Smallest eigenvalue together with the acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub min_eigenvalue: f64,
    pub threshold: f64,
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= -self.threshold
    }
}

pub fn psd_check(h: &ComplexMatrix, tol: &Tolerances) -> Result<PsdCheck> {
    Ok(PsdCheck {
        min_eigenvalue: min_eigenvalue_with(h, tol)?,
        threshold: psd_threshold(h, tol),
    })
}

pub fn is_psd(h: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(psd_check(h, tol)?.is_psd())
}

/// `M(B)_ii = |B_ii|`, `M(B)_ij = -|B_ij|` for `i != j`.
pub fn comparison_matrix(b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = b.require_square()?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let m = b[(i, j)].norm();
        C64::new(if i == j { m } else { -m }, 0.0)
    }))
}

/// Transpose of the second tensor factor: `ρ^Γ[(i,j),(k,l)] = ρ[(i,l),(k,j)]`.
pub fn partial_transpose(rho: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    let n = d1 * d2;
    if rho.rows() != n || rho.cols() != n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not a state on {d1} x {d2}",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    out[(i * d2 + j, k * d2 + l)] = rho[(i * d2 + l, k * d2 + j)];
                }
            }
        }
    }
    Ok(out)
}

/// Householder reduction of a Hermitian matrix. Returns the real diagonal and
/// the magnitudes of the sub-diagonal; a diagonal unitary similarity makes the
/// complex tridiagonal form real with exactly these entries.
fn tridiagonalize(h: &ComplexMatrix, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a: Vec<C64> = h.as_slice().to_vec();
    let mut off = vec![0.0; n];
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n)
            .map(|i| a[i * n + k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if alpha == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] += phase * alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        for i in k + 1..n {
            let mut acc = zero;
            for j in k + 1..n {
                acc += a[i * n + j] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp: C64 = (k + 1..n).map(|i| v[i].conj() * p[i]).sum();
        let kk = vp.re * tau * 0.5;
        for i in k + 1..n {
            p[i] -= v[i] * kk;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] -= v[i] * p[j].conj() + p[i] * v[j].conj();
            }
        }
        off[k] = alpha;
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, off)
}

/// Implicit QL on a symmetric tridiagonal matrix; `off[i]` couples `i` and
/// `i + 1`. On return `diag` holds the (unsorted) eigenvalues.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_b() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            [1.0, 1.0, 0.0, 1.0],
            [1.0, 2.0, 1.0, 0.0],
            [0.0, 1.0, 2.0, -1.0],
            [1.0, 0.0, -1.0, 2.0],
        ])
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(min_eigenvalue(&ComplexMatrix::identity(2)).unwrap(), 1.0);
        let d = ComplexMatrix::from_real_rows(&[[3.0, 0.0], [0.0, -2.0]]);
        assert_eq!(min_eigenvalue(&d).unwrap(), -2.0);
        assert_eq!(min_eigenvalue(&ComplexMatrix::from_real_rows(&[[7.5]])).unwrap(), 7.5);
    }

    #[test]
    fn errors() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(min_eigenvalue(&rect), Err(Error::NonSquare { .. })));
        let skew = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(min_eigenvalue(&skew), Err(Error::NonHermitian { .. })));
        assert!(partial_transpose(&ComplexMatrix::zeros(4, 4), 2, 3).is_err());
    }

    #[test]
    fn c4_psd_but_comparison_not() {
        let tol = Tolerances::default();
        let b = c4_b();
        assert!(is_psd(&b, &tol).unwrap());
        let m = comparison_matrix(&b).unwrap();
        assert_eq!(
            m,
            ComplexMatrix::from_real_rows(&[
                [1.0, -1.0, 0.0, -1.0],
                [-1.0, 2.0, -1.0, 0.0],
                [0.0, -1.0, 2.0, -1.0],
                [-1.0, 0.0, -1.0, 2.0],
            ])
        );
        assert!(!is_psd(&m, &tol).unwrap());
        assert!(min_eigenvalue(&m).unwrap() < -0.3);
    }

    #[test]
    fn zero_matrix_is_psd() {
        assert!(is_psd(&ComplexMatrix::zeros(5, 5), &Tolerances::default()).unwrap());
    }

    #[test]
    fn comparison_of_small_cases() {
        let m = comparison_matrix(&ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 2.0]])).unwrap();
        assert_eq!(m, ComplexMatrix::from_real_rows(&[[2.0, -1.0], [-1.0, 2.0]]));
        let d = ComplexMatrix::from_real_rows(&[[4.0, 0.0], [0.0, 0.5]]);
        assert_eq!(comparison_matrix(&d).unwrap(), d);
        assert!(comparison_matrix(&ComplexMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn swap_from_maximally_entangled() {
        let mut rho = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                rho[(i * 2 + i, j * 2 + j)] = C64::new(1.0, 0.0);
            }
        }
        let pt = partial_transpose(&rho, 2, 2).unwrap();
        let swap = ComplexMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(pt, swap);
        assert!((min_eigenvalue(&pt).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let ev = hermitian_eigenvalues(&h, &Tolerances::default()).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_bits() {
        let h = ComplexMatrix::from_fn(9, 9, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j { 0.3 * a } else if i > j { -0.3 * a } else { 0.0 };
            C64::new((a * 1.7 + b * 0.3).sin(), im)
        });
        let first = hermitian_eigenvalues(&h, &Tolerances::default()).unwrap();
        for _ in 0..3 {
            let again = hermitian_eigenvalues(&h, &Tolerances::default()).unwrap();
            assert!(first.iter().zip(&again).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}
