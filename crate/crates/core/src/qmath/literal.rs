//! JSON literal format for matrices and states:
//! `{"rows": r, "cols": c, "entries": [[re, im], ...]}`, row-major.
//! States use `cols = 1`.

use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, PureState, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<ComplexMatrix> for MatrixLiteral {
    fn from(m: ComplexMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        Self {
            rows,
            cols,
            entries: m.into_vec().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixLiteral> for ComplexMatrix {
    type Error = Error;

    fn try_from(lit: MatrixLiteral) -> Result<Self> {
        let data = lit.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_vec(lit.rows, lit.cols, data)
    }
}

impl From<&PureState> for MatrixLiteral {
    fn from(s: &PureState) -> Self {
        ComplexMatrix::column(s.amplitudes()).into()
    }
}

impl MatrixLiteral {
    /// Reads the literal as a normalized state (a single column).
    pub fn to_state(&self) -> Result<PureState> {
        if self.cols != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.cols,
            });
        }
        let m = ComplexMatrix::try_from(self.clone())?;
        PureState::new(m.into_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_shape() {
        let json = r#"{"rows":2,"cols":2,"entries":[[0,0],[1,0],[1,0],[0,0]]}"#;
        let m: ComplexMatrix = serde_json::from_str(json).unwrap();
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(back, r#"{"rows":2,"cols":2,"entries":[[0.0,0.0],[1.0,0.0],[1.0,0.0],[0.0,0.0]]}"#);
    }

    #[test]
    fn rejects_bad_count() {
        let json = r#"{"rows":2,"cols":2,"entries":[[0,0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(json).is_err());
    }

    #[test]
    fn state_literal() {
        let lit = MatrixLiteral {
            rows: 2,
            cols: 1,
            entries: vec![[0.0, 0.0], [0.0, 1.0]],
        };
        let s = lit.to_state().unwrap();
        assert_eq!(s.amplitudes()[1], C64::new(0.0, 1.0));
        let unnormalized = MatrixLiteral {
            rows: 2,
            cols: 1,
            entries: vec![[1.0, 0.0], [1.0, 0.0]],
        };
        assert!(matches!(unnormalized.to_state(), Err(Error::NotNormalized(_))));
    }
}
