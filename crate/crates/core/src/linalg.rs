//! Small dense helpers over `nalgebra` complex matrices.
//!
//! Hermitian eigendecompositions go through `faer`: nalgebra's complex
//! symmetric solver reconstructs `V D V*` only to about 1e-10, while the
//! square-root contract here needs 1e-12 under unitary conjugation.

use faer::complex_native::c64;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues below this count as zero when taking square roots.
pub const EIGEN_FLOOR: f64 = 1e-10;

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `tr(a* b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian part.
pub fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitian_part(m);
    let n = h.nrows();
    let fm = faer::Mat::<c64>::from_fn(n, n, |i, j| c64::new(h[(i, j)].re, h[(i, j)].im));
    let eig = fm.selfadjoint_eigendecomposition(faer::Side::Lower);
    let (u, s) = (eig.u(), eig.s().column_vector());
    let values = (0..n).map(|k| s.read(k).re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| {
        let z = u.read(i, j);
        Complex64::new(z.re, z.im)
    });
    (values, vectors)
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v = hermitian_eigh(m).0;
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::NAN)
}

/// Applies `f` to the spectrum of a positive definite Hermitian matrix.
fn positive_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigh(m);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if lo < EIGEN_FLOOR {
        return Err(Error::NotPositive(lo));
    }
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| Complex64::new(f(x), 0.0)),
    ));
    Ok(&vectors * d * vectors.adjoint())
}

/// Principal square root of a positive definite Hermitian matrix.
pub fn hermitian_sqrt(m: &CMatrix) -> Result<CMatrix> {
    positive_function(m, f64::sqrt)
}

pub fn hermitian_inv_sqrt(m: &CMatrix) -> Result<CMatrix> {
    positive_function(m, |x| 1.0 / x.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_squares_back() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let s = hermitian_sqrt(&m).unwrap();
        assert!(op_norm(&(&s * &s - &m)) < 1e-13);
        let r = hermitian_inv_sqrt(&m).unwrap();
        assert!(op_norm(&(&r * &s - identity(2))) < 1e-13);
    }

    #[test]
    fn indefinite_rejected() {
        let m = CMatrix::from_diagonal_element(2, 2, c(-1.0, 0.0));
        assert!(matches!(hermitian_sqrt(&m), Err(Error::NotPositive(_))));
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.0, -3.0)]));
        assert!((op_norm(&m) - 3.0).abs() < 1e-14);
    }
}
