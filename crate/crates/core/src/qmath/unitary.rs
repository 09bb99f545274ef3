use super::ops::{orthonormalize_columns, tensor};
use super::{ComplexMatrix, C64, UNIT_TOL};
use crate::error::{Error, Result};

/// A `d×d` matrix with `‖U†U − I‖_max ≤ 1e-9`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: ComplexMatrix,
}

impl Unitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, UNIT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = matrix.unitarity_defect().ok_or(Error::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        })?;
        if defect > tol {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { matrix })
    }

    /// Gram-Schmidt polish of a nearly unitary matrix.
    pub(crate) fn from_near_unitary(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: orthonormalize_columns(&matrix),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.unitarity_defect().is_some_and(|d| d < 1e-6));
        Self { matrix }
    }

    /// `exp(iH)` for Hermitian `H`.
    pub fn from_generator(h: &ComplexMatrix) -> Self {
        Self::from_near_unitary(h.scale(C64::new(0.0, 1.0)).expm())
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `w · self · w†`.
    pub fn conjugated_by(&self, w: &Self) -> Self {
        w.compose(self).compose(&w.adjoint())
    }

    pub fn with_phase(&self, phi: f64) -> Self {
        Self {
            matrix: self.matrix.scale(C64::from_polar(1.0, phi)),
        }
    }

    /// `u ⊗ I_anc`.
    pub fn embed(&self, anc: usize) -> Self {
        if anc == 1 {
            return self.clone();
        }
        Self {
            matrix: tensor(&self.matrix, &ComplexMatrix::identity(anc)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary(_))));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(Unitary::new(r), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn generator_gives_unitary() {
        let h = ComplexMatrix::from_real(3, 3, &[4.0, 1.0, -2.0, 1.0, 0.5, 3.0, -2.0, 3.0, -7.0]);
        let u = Unitary::from_generator(&h);
        assert!(u.matrix().unitarity_defect().unwrap() < 1e-13);
    }
}
