use super::{ComplexMatrix, Unitary, C64, UNIT_TOL};
use crate::error::{Error, Result};

/// Pure state vector. Normalized unless built with [`PureState::unnormalized`].
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    normalized: bool,
}

impl PureState {
    /// Wraps amplitudes that must already have unit norm (within 1e-9).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotNormalized((n2 - 1.0).abs()));
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalize(amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let n = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
            normalized: true,
        })
    }

    /// A vector kept at its given norm, e.g. `Σ|i⟩|i⟩` or a vectorized operator.
    pub fn unnormalized(amplitudes: Vec<C64>) -> Self {
        Self {
            amplitudes,
            normalized: false,
        }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[k] = C64::new(1.0, 0.0);
        Self {
            amplitudes,
            normalized: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self {
            amplitudes,
            normalized: self.normalized && other.normalized,
        }
    }

    pub fn evolve(&self, u: &Unitary) -> Self {
        Self {
            amplitudes: u.matrix().mul_vec(&self.amplitudes),
            normalized: self.normalized,
        }
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), other.dim(), |i, j| {
            self.amplitudes[i] * other.amplitudes[j].conj()
        })
    }

    pub fn projector(&self) -> ComplexMatrix {
        self.outer(self)
    }

    /// Applies a global phase `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        let p = C64::from_polar(1.0, phi);
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z * p).collect(),
            normalized: self.normalized,
        }
    }

    /// True when a `d_sys·d_anc` state factorizes as `|a⟩⊗|b⟩`.
    pub fn is_product(&self, d_sys: usize, d_anc: usize, tol: f64) -> bool {
        assert_eq!(d_sys * d_anc, self.dim(), "bipartite dimension");
        let m = |i: usize, k: usize| self.amplitudes[i * d_anc + k];
        // Schmidt rank one iff every 2x2 minor of the coefficient matrix vanishes.
        for i in 0..d_sys {
            for j in i + 1..d_sys {
                for k in 0..d_anc {
                    for l in k + 1..d_anc {
                        if (m(i, k) * m(j, l) - m(i, l) * m(j, k)).norm() > tol {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "inner product dimension");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_finite(v: &[C64]) -> Result<()> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Err(Error::NonFinite)
    } else {
        Ok(())
    }
}
