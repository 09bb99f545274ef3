//! Process-POVM form of a tester: tester elements `T_k` and Choi operators `E`
//! with `p_k = Tr[T_k E]`.
//!
//! Ordering conventions:
//!
//! - The probe state `ρ` lives on `(a, anc)`: tested system first, ancilla second.
//!   Ancilla-free testers use a one-dimensional ancilla.
//! - `T_k = Tr_anc[(P_k ⊗ I_a)(I_b ⊗ S ρ^{t_a} S)]`, built on `(b, anc, a)` and
//!   returned on `(b, a)`: output first, input copy second.
//! - `E = (u ⊗ I)|Ψ⟩⟨Ψ|(u ⊗ I)†` on `(b, a)` with the unnormalized `|Ψ⟩ = Σ|i⟩|i⟩`.
//!   In terms of [`vectorize`], `E = S|u⟩⟩⟨⟨u|S` since `|u⟩⟩ = (I ⊗ u)|Ψ⟩`.
//!
//! With these, `T_k` for the tester `(|0⟩, Z)` is `|k⟩⟨k| ⊗ |0⟩⟨0|`.

use crate::error::{Error, Result};
use crate::qmath::{
    partial_trace_second, partial_transpose_first_dims, swap_factors, swap_operator, tensor,
    vectorize, ComplexMatrix, Unitary,
};
use crate::tester::{Distribution, Tester};

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Choi operator of the channel `ρ ↦ uρu†`: PSD, rank one, trace `d`.
pub fn choi_operator(u: &Unitary) -> ChoiOperator {
    let d = u.dim();
    let v = vectorize(u.matrix());
    let s = swap_operator(d);
    let flipped = v.evolve(&Unitary::from_matrix_unchecked(s));
    ChoiOperator {
        dim: d,
        matrix: flipped.projector(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TesterElementSet {
    dim: usize,
    ancilla_dim: usize,
    elements: Vec<ComplexMatrix>,
    probe: ComplexMatrix,
}

impl TesterElementSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Probe density operator on `(a, anc)`.
    pub fn probe(&self) -> &ComplexMatrix {
        &self.probe
    }

    pub fn all_positive(&self, tol: f64) -> bool {
        self.elements.iter().all(|t| t.is_psd(tol))
    }

    /// Max-norm distance between `Σ_k T_k` and `I_b ⊗ [Tr_anc ρ]^t`.
    pub fn normalization_defect(&self) -> f64 {
        let d = self.dim;
        let sum = self
            .elements
            .iter()
            .fold(ComplexMatrix::zeros(d * d, d * d), |acc, t| &acc + t);
        let reduced = partial_trace_second(&self.probe, d, self.ancilla_dim)
            .expect("probe dimensions are consistent");
        let target = tensor(&ComplexMatrix::identity(d), &reduced.transpose());
        sum.max_abs_diff(&target)
    }
}

/// Tester elements for a pure-input tester.
pub fn tester_elements(t: &Tester) -> TesterElementSet {
    let d = t.dim();
    let anc = t.ancilla_dim();
    let rho = t.input().projector();
    let rho_t = partial_transpose_first_dims(&rho, d, anc).expect("input dimension d·anc");
    // S ρ^t S: reorder (a, anc) -> (anc, a)
    let swapped = swap_factors(&rho_t, d, anc).expect("input dimension d·anc");
    let right = tensor(&ComplexMatrix::identity(d), &swapped);
    let elements = t
        .projectors()
        .iter()
        .map(|chi| {
            let left = tensor(&chi.projector(), &ComplexMatrix::identity(d));
            let product = &left * &right;
            trace_middle(&product, d, anc, d)
        })
        .collect();
    TesterElementSet {
        dim: d,
        ancilla_dim: anc,
        elements,
        probe: rho,
    }
}

/// Trace over the middle factor of an operator on `C^{d1} ⊗ C^{d2} ⊗ C^{d3}`.
fn trace_middle(m: &ComplexMatrix, d1: usize, d2: usize, d3: usize) -> ComplexMatrix {
    let idx = |a: usize, b: usize, c: usize| (a * d2 + b) * d3 + c;
    ComplexMatrix::from_fn(d1 * d3, d1 * d3, |r, c| {
        let (a, x) = (r / d3, r % d3);
        let (ap, xp) = (c / d3, c % d3);
        (0..d2).map(|k| m[(idx(a, k, x), idx(ap, k, xp))]).sum()
    })
}

/// `p_k = Re Tr[T_k E]`, clamped to `[0, 1]`.
pub fn probability_via_choi(ts: &TesterElementSet, e: &ChoiOperator) -> Result<Distribution> {
    if ts.dim != e.dim {
        return Err(Error::DimensionMismatch {
            expected: ts.dim,
            found: e.dim,
        });
    }
    let probs = ts
        .elements
        .iter()
        .map(|t| (t * &e.matrix).trace().re.clamp(0.0, 1.0))
        .collect();
    Distribution::new(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{gates, haar_random_unitary, unnormalized_mes, RngHandle, C64};
    use crate::tester::{named_tester, outcome_distribution};

    #[test]
    fn choi_of_identity_is_mes_projector() {
        let e = choi_operator(&Unitary::identity(2));
        assert!(e.matrix().approx_eq(&unnormalized_mes(2).projector(), 0.0));
        assert!((e.matrix().trace() - C64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn choi_of_sigma_x() {
        let e = choi_operator(&Unitary::new(gates::sigma_x()).unwrap());
        let v = vectorize(&gates::sigma_x());
        assert!(e.matrix().approx_eq(&v.projector(), 0.0));
    }

    #[test]
    fn choi_is_rank_one_with_trace_d() {
        for seed in 0..10 {
            let d = 2 + (seed as usize % 2);
            let u = haar_random_unitary(d, RngHandle::new(seed));
            let e = choi_operator(&u);
            let e2 = e.matrix() * e.matrix();
            assert!(e2.approx_eq(&e.matrix().scale(C64::new(d as f64, 0.0)), 1e-12));
            assert!(e.matrix().is_psd(1e-9));
        }
    }

    #[test]
    fn choi_distinguishes_unitaries_up_to_phase() {
        let u = haar_random_unitary(3, RngHandle::new(1));
        let v = haar_random_unitary(3, RngHandle::new(2));
        assert!(choi_operator(&u).matrix().approx_eq(choi_operator(&u.with_phase(1.2)).matrix(), 1e-12));
        assert!(!choi_operator(&u).matrix().approx_eq(choi_operator(&v).matrix(), 1e-6));
    }

    #[test]
    fn t0z_closed_form() {
        let ts = tester_elements(&named_tester("0Z").unwrap());
        let p0 = gates::ket0().projector();
        for (k, el) in ts.elements().iter().enumerate() {
            let pk = crate::qmath::PureState::basis(2, k).projector();
            assert!(el.approx_eq(&tensor(&pk, &p0), 1e-15), "T_{k}");
        }
        let dist = probability_via_choi(&ts, &choi_operator(&Unitary::identity(2))).unwrap();
        assert_eq!(dist.probabilities(), &[1.0, 0.0]);
    }

    #[test]
    fn bipartite_elements_are_valid() {
        for name in ["bell:0", "bell:2", "bellv:1"] {
            let ts = tester_elements(&named_tester(name).unwrap());
            assert_eq!(ts.ancilla_dim(), 2);
            assert!(ts.all_positive(1e-9));
            assert!(ts.normalization_defect() < 1e-12);
            let u = haar_random_unitary(2, RngHandle::new(5));
            let via_choi = probability_via_choi(&ts, &choi_operator(&u)).unwrap();
            let direct = outcome_distribution(&named_tester(name).unwrap(), &u).unwrap();
            assert!(via_choi.max_abs_diff(&direct) < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let ts = tester_elements(&named_tester("0Z").unwrap());
        let e = choi_operator(&Unitary::identity(3));
        assert!(matches!(
            probability_via_choi(&ts, &e),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
