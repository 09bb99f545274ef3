//! Testers: a pure input state sent through the unitary under test, followed
//! by a projective measurement.
//!
//! Ancilla-free testers live in dimension `d`; bipartite testers in `d²` with
//! the tested unitary acting as `u ⊗ I_d` on the first factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{gates, inner, ComplexMatrix, MatrixLiteral, PureState, Unitary, UNIT_TOL};

/// Probabilities at or below this total (minus one) mark a measurement whose
/// projectors miss part of the transformed state.
pub const LEAK_TOL: f64 = 1e-6;

/// Entropy threshold (bits) for calling an outcome deterministic.
pub const ZERO_ENTROPY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TesterKind {
    AncillaFree,
    Bipartite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tester {
    label: String,
    dim: usize,
    input: PureState,
    projectors: Vec<PureState>,
}

impl Tester {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        input: PureState,
        projectors: Vec<PureState>,
    ) -> Result<Self> {
        let label = label.into();
        let n = input.dim();
        if dim == 0 || (n != dim && n != dim * dim) {
            return Err(Error::InvalidTester(format!(
                "{label}: input dimension {n} is neither d = {dim} nor d² = {}",
                dim * dim
            )));
        }
        if !input.is_normalized() {
            return Err(Error::InvalidTester(format!("{label}: input must be normalized")));
        }
        if projectors.len() != dim && projectors.len() != dim * dim {
            return Err(Error::InvalidTester(format!(
                "{label}: {} projectors, expected d or d²",
                projectors.len()
            )));
        }
        if projectors.len() > n {
            return Err(Error::InvalidTester(format!(
                "{label}: {} projectors exceed input dimension {n}",
                projectors.len()
            )));
        }
        if let Some(p) = projectors.iter().find(|p| p.dim() != n) {
            return Err(Error::InvalidTester(format!(
                "{label}: projector dimension {} differs from input dimension {n}",
                p.dim()
            )));
        }
        if !is_orthonormal(&projectors, UNIT_TOL) {
            return Err(Error::InvalidTester(format!("{label}: projectors not orthonormal")));
        }
        Ok(Self {
            label,
            dim,
            input,
            projectors,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn input(&self) -> &PureState {
        &self.input
    }

    pub fn projectors(&self) -> &[PureState] {
        &self.projectors
    }

    pub fn outcome_count(&self) -> usize {
        self.projectors.len()
    }

    pub fn kind(&self) -> TesterKind {
        if self.input.dim() == self.dim {
            TesterKind::AncillaFree
        } else {
            TesterKind::Bipartite
        }
    }

    /// 1 for ancilla-free testers, `d` for bipartite ones.
    pub fn ancilla_dim(&self) -> usize {
        self.input.dim() / self.dim
    }

    /// True when the projectors resolve the identity on the input space.
    pub fn spans_full_space(&self) -> bool {
        self.projectors.len() == self.input.dim()
    }

    /// The tested unitary as it acts on this tester's input space.
    pub fn embed(&self, u: &Unitary) -> Result<Unitary> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            });
        }
        Ok(u.embed(self.ancilla_dim()))
    }

    /// The same tester seen in a frame rotated by `w` on the system factor.
    pub fn rotated(&self, w: &Unitary) -> Result<Self> {
        let big = self.embed(w)?;
        Ok(Self {
            label: self.label.clone(),
            dim: self.dim,
            input: self.input.evolve(&big),
            projectors: self.projectors.iter().map(|p| p.evolve(&big)).collect(),
        })
    }

    /// Looks up a named tester, see [`TESTER_NAMES`].
    pub fn named(name: &str) -> Result<Self> {
        named_tester(name)
    }
}

/// Outcome distribution of a tester.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    probabilities: Vec<f64>,
    /// Set when the probabilities sum to less than one.
    leaky: bool,
}

impl Distribution {
    /// Clamps tiny negative or super-unit values and validates the total.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        let d = Self::from_raw(raw);
        let total = d.total();
        if total < 1.0 - LEAK_TOL {
            return Err(Error::LeakyMeasurement { total });
        }
        Ok(d)
    }

    pub(crate) fn from_raw(raw: Vec<f64>) -> Self {
        let probabilities: Vec<f64> = raw
            .into_iter()
            .map(|p| if (-1e-12..0.0).contains(&p) { 0.0 } else { p.min(1.0) })
            .collect();
        let total: f64 = probabilities.iter().sum();
        Self {
            probabilities,
            leaky: total < 1.0 - UNIT_TOL,
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn is_leaky(&self) -> bool {
        self.leaky
    }

    /// Index of the most likely outcome (first on ties).
    pub fn argmax(&self) -> usize {
        self.probabilities
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best })
            .0
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.probabilities.len().max(other.probabilities.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        (0..n)
            .map(|i| (get(&self.probabilities, i) - get(&other.probabilities, i)).abs())
            .fold(0.0, f64::max)
    }
}

/// `p_k = |⟨χ_k|U|ψ⟩|²`, without the leak check.
pub fn outcome_distribution_raw(t: &Tester, u: &Unitary) -> Result<Distribution> {
    let big = t.embed(u)?;
    let out = big.matrix().mul_vec(t.input.amplitudes());
    let probs = t
        .projectors
        .iter()
        .map(|chi| inner(chi.amplitudes(), &out).norm_sqr())
        .collect();
    Ok(Distribution::from_raw(probs))
}

/// Outcome statistics of tester `t` on unitary `u`.
pub fn outcome_distribution(t: &Tester, u: &Unitary) -> Result<Distribution> {
    let d = outcome_distribution_raw(t, u)?;
    let total = d.total();
    if total < 1.0 - LEAK_TOL {
        return Err(Error::LeakyMeasurement { total });
    }
    Ok(d)
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(p: &Distribution) -> f64 {
    entropy_bits(p.probabilities())
}

pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn tester_entropy(t: &Tester, u: &Unitary) -> Result<f64> {
    Ok(shannon_entropy(&outcome_distribution(t, u)?))
}

/// Testers sharing a measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct TesterSet {
    dim: usize,
    testers: Vec<Tester>,
}

impl TesterSet {
    pub fn new(testers: Vec<Tester>) -> Result<Self> {
        let first = testers
            .first()
            .ok_or_else(|| Error::InvalidTester("empty tester set".into()))?;
        let (dim, n) = (first.dim, first.input.dim());
        if let Some(t) = testers.iter().find(|t| t.dim != dim || t.input.dim() != n) {
            return Err(Error::InvalidTester(format!(
                "{} does not match the dimensions of {}",
                t.label, first.label
            )));
        }
        Ok(Self { dim, testers })
    }

    pub fn named(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|n| named_tester(n)).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn testers(&self) -> &[Tester] {
        &self.testers
    }

    pub fn len(&self) -> usize {
        self.testers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.testers.is_empty()
    }

    pub fn inputs(&self) -> Vec<PureState> {
        self.testers.iter().map(|t| t.input.clone()).collect()
    }

    pub fn rotated(&self, w: &Unitary) -> Result<Self> {
        Ok(Self {
            dim: self.dim,
            testers: self.testers.iter().map(|t| t.rotated(w)).collect::<Result<_>>()?,
        })
    }

    pub fn is_complete(&self, tol: f64) -> bool {
        is_complete_set(self, tol)
    }
}

/// Inputs orthonormal, resolving the identity, with one shared measurement.
pub fn is_complete_set(s: &TesterSet, tol: f64) -> bool {
    let Some(first) = s.testers.first() else {
        return false;
    };
    let shared = s.testers.iter().all(|t| {
        t.projectors.len() == first.projectors.len()
            && t.projectors
                .iter()
                .zip(&first.projectors)
                .all(|(a, b)| a.projector().approx_eq(&b.projector(), tol))
    });
    let inputs = s.inputs();
    // Orthonormal inputs resolve the identity exactly when there are as many as the dimension.
    shared && is_orthonormal(&inputs, tol) && inputs.len() == first.input.dim() && {
        let n = first.input.dim();
        let sum = inputs
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, s| &acc + &s.projector());
        sum.approx_eq(&ComplexMatrix::identity(n), tol)
    }
}

pub fn is_orthonormal(states: &[PureState], tol: f64) -> bool {
    states.iter().enumerate().all(|(i, a)| {
        states.iter().enumerate().skip(i).all(|(j, b)| {
            let expected = if i == j { 1.0 } else { 0.0 };
            (a.inner(b).norm() - expected).abs() <= tol
        })
    })
}

/// Equal outcome distributions as multisets (zero-padded to a common length).
pub fn are_equivalent(t1: &Tester, t2: &Tester, u: &Unitary, tol: f64) -> Result<bool> {
    Ok(outcome_bijection(t1, t2, u, tol)?.is_some())
}

/// Strict form of [`are_equivalent`]: when equivalent, returns the map from
/// each outcome of `t1` to an outcome of `t2` with the same probability.
pub fn outcome_bijection(
    t1: &Tester,
    t2: &Tester,
    u: &Unitary,
    tol: f64,
) -> Result<Option<Vec<usize>>> {
    if t1.dim != t2.dim {
        return Err(Error::DimensionMismatch {
            expected: t1.dim,
            found: t2.dim,
        });
    }
    let p = outcome_distribution(t1, u)?;
    let q = outcome_distribution(t2, u)?;
    let n = p.probabilities.len().max(q.probabilities.len());
    let padded = |d: &Distribution| {
        let mut v: Vec<(usize, f64)> = d.probabilities.iter().copied().enumerate().collect();
        v.resize_with(n, || (usize::MAX, 0.0));
        v.sort_by(|a, b| a.1.total_cmp(&b.1));
        v
    };
    let (ps, qs) = (padded(&p), padded(&q));
    if ps.iter().zip(&qs).any(|(a, b)| (a.1 - b.1).abs() > tol) {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; p.probabilities.len()];
    // Padding entries on the t2 side can only pair with zero-probability outcomes;
    // map those to any unused real outcome.
    let mut spare: Vec<usize> = qs.iter().map(|x| x.0).filter(|&j| j != usize::MAX).collect();
    for ((i, _), (j, _)) in ps.iter().zip(&qs) {
        if *i != usize::MAX && *j != usize::MAX {
            map[*i] = *j;
            spare.retain(|s| s != j);
        }
    }
    for slot in map.iter_mut().filter(|m| **m == usize::MAX) {
        *slot = spare.pop().unwrap_or(usize::MAX);
    }
    Ok(Some(map))
}

/// `op|ψ⟩ = λ|ψ⟩` for some complex `λ`, within `tol` in the 2-norm.
pub fn is_eigenoperator(op: &ComplexMatrix, state: &PureState, tol: f64) -> bool {
    assert!(op.is_square() && op.rows() == state.dim(), "operator/state dimension");
    let v = state.amplitudes();
    let w = op.mul_vec(v);
    let lambda = inner(v, &w) / state.norm_sqr();
    w.iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
        <= tol
}

/// Whether a tester that is deterministic on both `u1` and `u2` tells them apart.
///
/// Errors with [`Error::HypothesisViolated`] unless both entropies vanish, and
/// with [`Error::EntangledInput`] for bipartite testers whose input is entangled.
pub fn can_distinguish(t: &Tester, u1: &Unitary, u2: &Unitary) -> Result<bool> {
    if t.kind() == TesterKind::Bipartite && !t.input.is_product(t.dim, t.dim, 1e-9) {
        return Err(Error::EntangledInput);
    }
    let p1 = outcome_distribution(t, u1)?;
    let p2 = outcome_distribution(t, u2)?;
    for (which, p) in [("u1", &p1), ("u2", &p2)] {
        let h = shannon_entropy(p);
        if h > ZERO_ENTROPY_TOL {
            return Err(Error::HypothesisViolated(format!(
                "H({}, {which}) = {h:.3e} bits is not zero",
                t.label
            )));
        }
    }
    Ok(p1.argmax() != p2.argmax())
}

/// Names accepted by [`named_tester`]. `bell:k` and `bellv:k` take `k ∈ 0..4`.
pub const TESTER_NAMES: &[&str] = &[
    "0Z", "1Z", "+X", "-X", "0X", "1X", "+Z", "-Z", "bell:k", "bellv:k",
];

/// Qubit testers `<input><basis>` (input `0,1,+,-`; basis `Z,X`), MES-input
/// Bell testers `bell:k` measuring in the Bell basis, and `bellv:k` measuring
/// in the basis `(σ_m V ⊗ I)|Φ+⟩` with `V` from [`gates::pauli_unbiased_v`].
pub fn named_tester(name: &str) -> Result<Tester> {
    if let Some(k) = name.strip_prefix("bell:") {
        let k = bell_index(name, k)?;
        return Tester::new(name, 2, gates::bell_state(k), gates::bell_basis());
    }
    if let Some(k) = name.strip_prefix("bellv:") {
        let k = bell_index(name, k)?;
        let v = gates::pauli_unbiased_v();
        let projectors = gates::paulis()
            .iter()
            .map(|p| gates::op_on_phi_plus(&(p * &v)))
            .collect();
        return Tester::new(name, 2, gates::bell_state(k), projectors);
    }
    let mut chars = name.chars();
    let (Some(i), Some(b), None) = (chars.next(), chars.next(), chars.next()) else {
        return Err(Error::UnknownName(name.into()));
    };
    let input = match i {
        '0' => gates::ket0(),
        '1' => gates::ket1(),
        '+' => gates::ket_plus(),
        '-' => gates::ket_minus(),
        _ => return Err(Error::UnknownName(name.into())),
    };
    let basis = match b {
        'Z' => gates::z_basis(),
        'X' => gates::x_basis(),
        _ => return Err(Error::UnknownName(name.into())),
    };
    Tester::new(name, 2, input, basis)
}

fn bell_index(name: &str, k: &str) -> Result<usize> {
    k.parse::<usize>()
        .ok()
        .filter(|&k| k < 4)
        .ok_or_else(|| Error::UnknownName(name.into()))
}

/// JSON form of a tester: `{"label", "d", "input", "projectors"}` with states
/// as single-column matrix literals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterLiteral {
    #[serde(default)]
    pub label: String,
    pub d: usize,
    pub input: MatrixLiteral,
    pub projectors: Vec<MatrixLiteral>,
}

impl From<&Tester> for TesterLiteral {
    fn from(t: &Tester) -> Self {
        Self {
            label: t.label.clone(),
            d: t.dim,
            input: (&t.input).into(),
            projectors: t.projectors.iter().map(MatrixLiteral::from).collect(),
        }
    }
}

impl TryFrom<TesterLiteral> for Tester {
    type Error = Error;

    fn try_from(lit: TesterLiteral) -> Result<Self> {
        let projectors = lit.projectors.iter().map(MatrixLiteral::to_state).collect::<Result<_>>()?;
        Tester::new(lit.label, lit.d, lit.input.to_state()?, projectors)
    }
}

/// A registry name or an inline literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TesterSpec {
    Name(String),
    Literal(TesterLiteral),
}

impl TesterSpec {
    pub fn resolve(&self) -> Result<Tester> {
        match self {
            TesterSpec::Name(n) => named_tester(n),
            TesterSpec::Literal(lit) => lit.clone().try_into(),
        }
    }
}
