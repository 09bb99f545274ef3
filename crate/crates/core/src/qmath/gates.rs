//! Fixed single-qubit operators and states.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{ComplexMatrix, PureState, Unitary, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
        .expect("2x2")
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// `[I, σ_x, σ_y, σ_z]`.
pub fn paulis() -> [ComplexMatrix; 4] {
    [ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()]
}

/// `iσ_y`, the real bit flip `|0⟩ → −|1⟩`, `|1⟩ → |0⟩`.
pub fn i_sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

/// `(I − iσ_y)/√2`: maps `|0⟩ → |+⟩` and `|1⟩ → −|−⟩`.
pub fn hadamard_y() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[s, -s, s, s])
}

/// `(I + iσ_y)/√2`.
pub fn hadamard_y_dagger() -> ComplexMatrix {
    hadamard_y().adjoint()
}

/// `cos θ · I + sin θ · iσ_y`.
pub fn y_rotation(theta: f64) -> Unitary {
    let (s, co) = theta.sin_cos();
    Unitary::from_matrix_unchecked(ComplexMatrix::from_real(2, 2, &[co, s, -s, co]))
}

/// `½I + (i/2)(σ_x + σ_y + σ_z)`: unit-modulus trace against every Pauli.
pub fn pauli_unbiased_v() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        2,
        vec![c(0.5, 0.5), c(0.5, 0.5), c(-0.5, 0.5), c(0.5, -0.5)],
    )
    .expect("2x2")
}

/// `Rz(α) Ry(β) Rz(γ)` with `Rz(t) = diag(e^{-it/2}, e^{it/2})`.
pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Unitary {
    let rz = |t: f64| {
        ComplexMatrix::from_vec(
            2,
            2,
            vec![C64::from_polar(1.0, -t / 2.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, t / 2.0)],
        )
        .expect("2x2")
    };
    let (s, co) = (beta / 2.0).sin_cos();
    let ry = ComplexMatrix::from_real(2, 2, &[co, -s, s, co]);
    Unitary::from_matrix_unchecked(&(&rz(alpha) * &ry) * &rz(gamma))
}

pub fn ket0() -> PureState {
    PureState::basis(2, 0)
}

pub fn ket1() -> PureState {
    PureState::basis(2, 1)
}

pub fn ket_plus() -> PureState {
    PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).expect("normalized")
}

pub fn ket_minus() -> PureState {
    PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]).expect("normalized")
}

pub fn z_basis() -> Vec<PureState> {
    vec![ket0(), ket1()]
}

pub fn x_basis() -> Vec<PureState> {
    vec![ket_plus(), ket_minus()]
}

/// `(σ_k ⊗ I)|Φ+⟩` for `k = 0..4` with `σ = [I, σ_x, σ_y, σ_z]`.
pub fn bell_state(k: usize) -> PureState {
    assert!(k < 4, "Bell index out of range");
    op_on_phi_plus(&paulis()[k])
}

pub fn bell_basis() -> Vec<PureState> {
    (0..4).map(bell_state).collect()
}

/// `(m ⊗ I)|Φ+⟩` for a qubit unitary `m`.
pub fn op_on_phi_plus(m: &ComplexMatrix) -> PureState {
    let phi = [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)];
    let big = super::ops::tensor(m, &ComplexMatrix::identity(2));
    PureState::normalize(big.mul_vec(&phi)).expect("nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixed_operators_are_unitary() {
        for m in paulis()
            .into_iter()
            .chain([i_sigma_y(), hadamard_y(), hadamard_y_dagger(), pauli_unbiased_v()])
        {
            assert!(m.unitarity_defect().unwrap() < 1e-15);
        }
        assert!(euler_zyz(0.3, 1.1, -2.0).matrix().unitarity_defect().unwrap() < 1e-15);
    }

    #[test]
    fn hadamard_y_maps_zero_to_plus() {
        let out = hadamard_y().mul_vec(ket0().amplitudes());
        assert!(ket_plus().inner(&PureState::unnormalized(out)).norm() > 1.0 - 1e-15);
    }

    #[test]
    fn v_has_unit_traces_with_paulis() {
        let v = pauli_unbiased_v();
        for p in paulis() {
            assert!(((&p * &v).trace().norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bell_basis_orthonormal() {
        let b = bell_basis();
        for i in 0..4 {
            for j in 0..4 {
                let ip = b[i].inner(&b[j]).norm();
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }
}
