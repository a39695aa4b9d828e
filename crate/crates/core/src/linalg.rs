//! Small dense helpers on top of nalgebra: validated gram matrices, a
//! deterministic symmetric eigen-decomposition and an SPD solver with an
//! explicit singularity floor.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{GlarsError, Result};

/// Relative eigenvalue floor below which a gram matrix counts as singular.
pub const SINGULAR_FLOOR: f64 = 1e-10;
/// Negative eigenvalues down to `-PSD_TOLERANCE * trace` are round-off.
pub const PSD_TOLERANCE: f64 = 1e-10;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// `X'X` restricted to some set of columns. Symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<f64>);

impl GramMatrix {
    /// Validates symmetry and positive semidefiniteness.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(GlarsError::DimensionMismatch(format!(
                "gram matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(1.0);
        let asymmetry = (&m - m.transpose()).amax();
        if asymmetry > SYMMETRY_TOLERANCE * scale {
            return Err(GlarsError::NotSymmetric { asymmetry });
        }
        let m = symmetrize(m);
        let trace = m.trace().abs().max(f64::MIN_POSITIVE);
        if m.nrows() > 0 {
            let min = m.clone().symmetric_eigenvalues().min();
            if min < -PSD_TOLERANCE * trace {
                return Err(GlarsError::NotPositiveSemidefinite { eigenvalue: min });
            }
        }
        Ok(Self(m))
    }

    /// `X'X`; PSD by construction so no eigen check is run.
    pub fn from_design(x: &DMatrix<f64>) -> Self {
        Self(symmetrize(x.tr_mul(x)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// `E' G E` for the column selector with the given indices.
    pub fn restrict(&self, indices: &[usize]) -> GramMatrix {
        let q = indices.len();
        GramMatrix(DMatrix::from_fn(q, q, |r, c| self.0[(indices[r], indices[c])]))
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Eigen-decomposition with eigenvalues sorted descending (stable with respect
/// to the solver's order on ties) and each eigenvector's largest-magnitude
/// entry made positive.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        let lead = col.iamax();
        if col[lead] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// Cholesky factor of a symmetric positive definite matrix, created only when
/// the smallest eigenvalue clears `SINGULAR_FLOOR` times the largest.
pub struct SpdFactor {
    chol: Cholesky<f64, Dyn>,
}

impl SpdFactor {
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        check_nonsingular(a)?;
        let chol = Cholesky::new(a.clone()).ok_or(GlarsError::SingularGram { ratio: 0.0 })?;
        Ok(Self { chol })
    }

    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    pub fn solve_mat(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(b)
    }
}

/// Errors with `SingularGram` when `min eig < SINGULAR_FLOOR * max eig`.
pub fn check_nonsingular(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() == 0 {
        return Ok(());
    }
    let vals = a.clone().symmetric_eigenvalues();
    let (min, max) = (vals.min(), vals.max());
    if max <= 0.0 || min < SINGULAR_FLOOR * max {
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        return Err(GlarsError::SingularGram { ratio });
    }
    Ok(())
}

/// Max-abs difference between two equally shaped matrices.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_and_sign_normalized() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0, 3.0]);
        let (vals, vecs) = symmetric_eigen(&m);
        assert_eq!(vals, vec![5.0, 3.0, 1.0]);
        assert_eq!(vecs.column(0).iamax(), 1);
        assert!(vecs[(1, 0)] > 0.0);
    }

    #[test]
    fn rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            GramMatrix::new(m),
            Err(GlarsError::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(GramMatrix::new(m), Err(GlarsError::NotSymmetric { .. })));
    }

    #[test]
    fn tiny_negative_eigenvalue_tolerated() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 - 1e-14]);
        assert!(GramMatrix::new(m).is_ok());
    }

    #[test]
    fn singular_floor() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(SpdFactor::new(&m), Err(GlarsError::SingularGram { .. })));
        let ok = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let f = SpdFactor::new(&ok).unwrap();
        let x = f.solve_vec(&DVector::from_vec(vec![3.0, 3.0]));
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }
}
