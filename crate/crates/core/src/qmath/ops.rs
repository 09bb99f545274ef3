use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, PureState, RngHandle, Unitary, C64};
use crate::error::{Error, Result};

/// Kronecker product: entry `((i,k),(j,l)) = A_ij · B_kl`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

fn check_bipartite(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: m.rows(),
        });
    }
    Ok(())
}

/// Traces out the second factor of an operator on `C^{d_sys} ⊗ C^{d_anc}`.
pub fn partial_trace_second(m: &ComplexMatrix, d_sys: usize, d_anc: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d_sys, d_anc)?;
    Ok(ComplexMatrix::from_fn(d_sys, d_sys, |i, j| {
        (0..d_anc).map(|k| m[(i * d_anc + k, j * d_anc + k)]).sum()
    }))
}

/// Traces out the ancilla of a `d²×d²` operator ordered `(system, ancilla)`.
pub fn partial_trace_ancilla(m: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    partial_trace_second(m, d, d)
}

/// Transpose on the first factor of `C^{d1} ⊗ C^{d2}`.
pub fn partial_transpose_first_dims(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    Ok(ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        m[(j * d2 + k, i * d2 + l)]
    }))
}

pub fn partial_transpose_first(m: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    partial_transpose_first_dims(m, d, d)
}

/// Reorders an operator on `C^{d1} ⊗ C^{d2}` into `C^{d2} ⊗ C^{d1}`.
pub fn swap_factors(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    Ok(ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (b, a) = (r / d1, r % d1);
        let (bp, ap) = (c / d1, c % d1);
        m[(a * d2 + b, ap * d2 + bp)]
    }))
}

/// SWAP on `C^d ⊗ C^d`: `S|a⟩|b⟩ = |b⟩|a⟩`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            s[(b * d + a, a * d + b)] = C64::new(1.0, 0.0);
        }
    }
    s
}

/// `|u⟩⟩ = Σ_ij ⟨j|u|i⟩ |i⟩|j⟩`, so that `⟨⟨a|b⟩⟩ = Tr(a†b)`.
pub fn vectorize(u: &ComplexMatrix) -> PureState {
    assert!(u.is_square(), "vectorize of non-square matrix");
    let d = u.rows();
    let mut amps = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            amps.push(u[(j, i)]);
        }
    }
    PureState::unnormalized(amps)
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &PureState) -> Result<ComplexMatrix> {
    let n = v.dim();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: n,
        });
    }
    let a = v.amplitudes();
    Ok(ComplexMatrix::from_fn(d, d, |j, i| a[i * d + j]))
}

/// Unnormalized maximally entangled `|Ψ⟩ = Σ_i |i⟩|i⟩`.
pub fn unnormalized_mes(d: usize) -> PureState {
    vectorize(&ComplexMatrix::identity(d))
}

/// Modified Gram-Schmidt on columns (two passes). For a Gaussian input this is
/// the Q factor of a QR decomposition with positive diagonal R.
pub(crate) fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut columns: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = columns[k]
                    .iter()
                    .zip(&columns[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (done, rest) = columns.split_at_mut(j);
                for (x, q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * q;
                }
            }
        }
        let n = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut columns[j] {
            *x /= n;
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| columns[j][i])
}

fn gaussian_matrix(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary, deterministic per handle.
pub fn haar_random_unitary(d: usize, handle: RngHandle) -> Unitary {
    haar_unitary_from(d, &mut handle.rng())
}

pub fn haar_unitary_from(d: usize, rng: &mut impl Rng) -> Unitary {
    assert!(d >= 1, "dimension must be positive");
    Unitary::from_matrix_unchecked(orthonormalize_columns(&gaussian_matrix(d, rng)))
}

/// Haar-random pure state (first column of a Haar unitary).
pub fn haar_state_from(d: usize, rng: &mut impl Rng) -> PureState {
    let u = haar_unitary_from(d, rng);
    let amps = (0..d).map(|i| u.matrix()[(i, 0)]).collect();
    PureState::new(amps).expect("column of a unitary is normalized")
}

/// Generalized Gell-Mann matrices: `d²−1` Hermitian, traceless, `Tr(G_a G_b) = 2δ_ab`.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = C64::new(1.0, 0.0);
            sym[(k, j)] = C64::new(1.0, 0.0);
            out.push(sym);
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = C64::new(0.0, -1.0);
            anti[(k, j)] = C64::new(0.0, 1.0);
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for j in 0..l {
            diag[(j, j)] = C64::new(norm, 0.0);
        }
        diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(diag);
    }
    out
}
