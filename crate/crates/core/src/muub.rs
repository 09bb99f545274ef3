//! Orthogonal unitary bases, mutually unbiased unitary bases (MUUB), and
//! numerical checks of what trivial and maximal entropic bounds imply for
//! the unitaries a pair of complete tester sets is tested on.
//!
//! Two `D`-element orthogonal unitary bases `{P_i}`, `{Q_j}` of a common
//! subspace of `M(d, C)` are MUUB when `|Tr(P_i† Q_j)|² = κ` for all `i, j`,
//! with `κ = 1` for `D = d²` and `κ = d` for `D = d`.
//!
//! The `weyl` basis uses clock and shift `X|j⟩ = |j+1 mod d⟩`,
//! `Z|j⟩ = ω^j |j⟩` with `ω = e^{2πi/d}`, ordered `X^a Z^b` at index `a·d + b`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::{minimize_over_unitaries, SearchConfig, MAXIMAL_TOL, TRIVIAL_TOL};
use crate::error::{Error, Result};
use crate::qmath::{gates, ComplexMatrix, Unitary, C64, UNIT_TOL};
use crate::tester::{
    are_equivalent, is_eigenoperator, tester_entropy, TesterSet, ZERO_ENTROPY_TOL,
};

/// Tolerance for matching overlaps against `κ`.
pub const KAPPA_TOL: f64 = 1e-6;

/// A candidate unitary basis: `d` or `d²` unitaries of equal dimension.
/// Pairwise orthogonality is checked by [`is_orthogonal_unitary_basis`] or
/// enforced by [`UnitaryBasis::orthogonal`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "BasisLiteral", try_from = "BasisLiteral")]
pub struct UnitaryBasis {
    dim: usize,
    elements: Vec<Unitary>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisLiteral {
    pub d: usize,
    pub elements: Vec<ComplexMatrix>,
}

impl From<UnitaryBasis> for BasisLiteral {
    fn from(b: UnitaryBasis) -> Self {
        Self {
            d: b.dim,
            elements: b.elements.into_iter().map(Unitary::into_matrix).collect(),
        }
    }
}

impl TryFrom<BasisLiteral> for UnitaryBasis {
    type Error = Error;

    fn try_from(lit: BasisLiteral) -> Result<Self> {
        let elements = lit.elements.into_iter().map(Unitary::new).collect::<Result<Vec<_>>>()?;
        let b = UnitaryBasis::new(elements)?;
        if b.dim != lit.d {
            return Err(Error::DimensionMismatch { expected: lit.d, found: b.dim });
        }
        Ok(b)
    }
}

/// A named basis (dimension supplied by the caller) or an inline literal.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    Name(String),
    Literal(BasisLiteral),
}

impl BasisSpec {
    pub fn resolve(&self, d: usize) -> Result<UnitaryBasis> {
        match self {
            BasisSpec::Name(n) => build_named_basis(n, d),
            BasisSpec::Literal(lit) => lit.clone().try_into(),
        }
    }
}

impl UnitaryBasis {
    pub fn new(elements: Vec<Unitary>) -> Result<Self> {
        let dim = elements
            .first()
            .map(Unitary::dim)
            .ok_or_else(|| Error::InvalidBasis("empty basis".into()))?;
        if let Some(u) = elements.iter().find(|u| u.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: u.dim() });
        }
        if elements.len() != dim && elements.len() != dim * dim {
            return Err(Error::InvalidBasis(format!(
                "{} elements; a basis has d = {dim} or d² = {} elements",
                elements.len(),
                dim * dim
            )));
        }
        Ok(Self { dim, elements })
    }

    /// Like [`UnitaryBasis::new`] but also requires pairwise HS-orthogonality.
    pub fn orthogonal(elements: Vec<Unitary>) -> Result<Self> {
        let b = Self::new(elements)?;
        if !is_orthogonal_unitary_basis(&b, UNIT_TOL) {
            return Err(Error::InvalidBasis("elements are not pairwise orthogonal".into()));
        }
        Ok(b)
    }

    pub fn from_matrices(ms: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(ms.into_iter().map(Unitary::new).collect::<Result<_>>()?)
    }

    pub fn named(name: &str, d: usize) -> Result<Self> {
        build_named_basis(name, d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `D`, the number of elements.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Unitary] {
        &self.elements
    }

    /// `{left · U_k · right}`. Preserves orthogonality and cross overlaps with
    /// any basis transformed the same way.
    pub fn transformed(&self, left: &Unitary, right: &Unitary) -> Self {
        Self {
            dim: self.dim,
            elements: self.elements.iter().map(|u| left.compose(u).compose(right)).collect(),
        }
    }

    /// `{U_k · v}`.
    pub fn right_multiplied(&self, v: &Unitary) -> Self {
        self.transformed(&Unitary::identity(self.dim), v)
    }

    /// `κ` required for a MUUB partner of this size.
    pub fn expected_kappa(&self) -> f64 {
        if self.size() == self.dim * self.dim {
            1.0
        } else {
            self.dim as f64
        }
    }
}

/// `|Tr(u†v)|²`.
pub fn hs_overlap(u: &Unitary, v: &Unitary) -> f64 {
    hs_inner(u.matrix(), v.matrix()).norm_sqr()
}

fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.conj() * y).sum()
}

pub fn is_orthogonal_unitary_basis(b: &UnitaryBasis, tol: f64) -> bool {
    let n = b.size();
    (n == b.dim || n == b.dim * b.dim)
        && (0..n).all(|i| {
            (i + 1..n).all(|j| hs_inner(b.elements[i].matrix(), b.elements[j].matrix()).norm() <= tol)
        })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuubReport {
    pub d: usize,
    #[serde(rename = "D")]
    pub size: usize,
    pub overlaps: Vec<Vec<f64>>,
    pub expected_kappa: f64,
    /// Common overlap value, `None` when the overlaps are not constant.
    pub kappa: Option<f64>,
    pub verdict: bool,
}

pub fn are_muub(a: &UnitaryBasis, b: &UnitaryBasis, tol: f64) -> Result<MuubReport> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    if a.size() != b.size() {
        return Err(Error::DimensionMismatch { expected: a.size(), found: b.size() });
    }
    let overlaps: Vec<Vec<f64>> = a
        .elements
        .iter()
        .map(|p| b.elements.iter().map(|q| hs_overlap(p, q)).collect())
        .collect();
    let first = overlaps[0][0];
    let constant = overlaps.iter().flatten().all(|&x| (x - first).abs() <= tol);
    let kappa = constant.then(|| overlaps.iter().flatten().sum::<f64>() / (a.size() * a.size()) as f64);
    let expected_kappa = a.expected_kappa();
    let verdict = overlaps.iter().flatten().all(|&x| (x - expected_kappa).abs() <= tol)
        && is_orthogonal_unitary_basis(a, UNIT_TOL)
        && is_orthogonal_unitary_basis(b, UNIT_TOL);
    Ok(MuubReport {
        d: a.dim,
        size: a.size(),
        overlaps,
        expected_kappa,
        kappa,
        verdict,
    })
}

/// Names accepted by [`build_named_basis`].
pub const BASIS_NAMES: &[&str] = &["pauli", "rotation", "hadamard-pair", "weyl", "pauli-unbiased"];

pub fn build_named_basis(name: &str, d: usize) -> Result<UnitaryBasis> {
    let qubit_only = |ms: Vec<ComplexMatrix>| -> Result<UnitaryBasis> {
        if d != 2 {
            return Err(Error::UnsupportedDimension { name: name.into(), d });
        }
        UnitaryBasis::from_matrices(ms)
    };
    match name {
        "pauli" => qubit_only(gates::paulis().to_vec()),
        "rotation" => qubit_only(vec![ComplexMatrix::identity(2), gates::i_sigma_y()]),
        "hadamard-pair" => qubit_only(vec![gates::hadamard_y(), gates::hadamard_y_dagger()]),
        "pauli-unbiased" => {
            let v = gates::pauli_unbiased_v();
            qubit_only(gates::paulis().iter().map(|p| p * &v).collect())
        }
        "weyl" => {
            if d == 0 {
                return Err(Error::UnsupportedDimension { name: name.into(), d });
            }
            weyl_basis(d)
        }
        _ => Err(Error::UnknownName(name.into())),
    }
}

pub fn weyl_shift(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn weyl_clock(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::from_polar(1.0, 2.0 * PI * i as f64 / d as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn weyl_basis(d: usize) -> Result<UnitaryBasis> {
    let x = weyl_shift(d);
    let z = weyl_clock(d);
    let pow = |m: &ComplexMatrix, k: usize| (0..k).fold(ComplexMatrix::identity(d), |acc, _| &acc * m);
    let mut ms = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            ms.push(&pow(&x, a) * &pow(&z, b));
        }
    }
    UnitaryBasis::from_matrices(ms)
}

/// `cos θ · I + sin θ · iσ_y` on an `n`-point grid over `[0, 2π)`: unitaries in
/// the span of the `rotation` basis.
pub fn rotation_family(n: usize) -> Vec<Unitary> {
    (0..n).map(|k| gates::y_rotation(2.0 * PI * k as f64 / n as f64)).collect()
}

/// `Σ_j |⟨⟨ũ|B̃_j⟩⟩|²` with normalized vectorizations; 1 for any unitary `u`
/// when `B` is an orthogonal basis of all of `M(d, C)`.
pub fn completeness_sum(u: &Unitary, b: &UnitaryBasis) -> f64 {
    let d = u.dim() as f64;
    b.elements.iter().map(|bj| hs_overlap(u, bj) / (d * d)).sum()
}

/// `(min, max)` of `|Tr(U_m† U'_n)|²` with `U = u ⊗ I_anc`.
pub fn embedded_overlap_range(a: &UnitaryBasis, b: &UnitaryBasis, anc: usize) -> (f64, f64) {
    let scale = (anc * anc) as f64;
    a.elements
        .iter()
        .flat_map(|p| b.elements.iter().map(move |q| scale * hs_overlap(p, q)))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Hypothesis bookkeeping shared by the proposition reports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub pass: bool,
    pub failures: Vec<String>,
}

impl Hypothesis {
    fn from_failures(failures: Vec<String>) -> Self {
        Self { pass: failures.is_empty(), failures }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialPropReport {
    pub hypothesis: Hypothesis,
    /// The tested unitaries are pairwise HS-orthogonal.
    pub s1_orthogonal: bool,
    /// Every cross-set tester pair is equivalent on every span sample.
    pub s2_equivalent: bool,
    pub span_samples: usize,
}

/// Checks the consequences of a trivial bound for complete sets `s1`, `s2`
/// on unitaries `us`.
///
/// Hypothesis: both sets complete; every cross-set pair has zero entropy sum
/// on every element of `us`; no `U_m†U_n` (`m ≠ n`) is an eigenoperator of
/// any input. Consequences reported: `us` pairwise orthogonal, and every
/// cross pair equivalent on each of `span_samples`.
pub fn verify_prop_trivial(
    s1: &TesterSet,
    s2: &TesterSet,
    us: &[Unitary],
    span_samples: &[Unitary],
) -> TrivialPropReport {
    let mut failures = Vec::new();
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if !s.is_complete(UNIT_TOL) {
            failures.push(format!("{name} is not a complete tester set"));
        }
    }
    for (k, u) in us.iter().enumerate() {
        for t in s1.testers().iter().chain(s2.testers()) {
            match tester_entropy(t, u) {
                Ok(h) if h <= ZERO_ENTROPY_TOL => {}
                Ok(h) => failures.push(format!("H({}, u{k}) = {h:.3e}", t.label())),
                Err(e) => failures.push(format!("H({}, u{k}): {e}", t.label())),
            }
        }
    }
    for (m, um) in us.iter().enumerate() {
        for (n, un) in us.iter().enumerate() {
            if m == n {
                continue;
            }
            for t in s1.testers().iter().chain(s2.testers()) {
                let Ok(op) = t.embed(&um.adjoint().compose(un)) else {
                    failures.push(format!("dimension mismatch for {}", t.label()));
                    continue;
                };
                if is_eigenoperator(op.matrix(), t.input(), UNIT_TOL) {
                    failures.push(format!("U{m}†U{n} is an eigenoperator of the input of {}", t.label()));
                }
            }
        }
    }

    let s1_orthogonal = us.iter().enumerate().all(|(i, a)| {
        us.iter()
            .skip(i + 1)
            .all(|b| hs_inner(a.matrix(), b.matrix()).norm() <= UNIT_TOL)
    });
    let s2_equivalent = span_samples.iter().all(|w| {
        s1.testers().iter().all(|a| {
            s2.testers()
                .iter()
                .all(|b| are_equivalent(a, b, w, UNIT_TOL).unwrap_or(false))
        })
    });
    TrivialPropReport {
        hypothesis: Hypothesis::from_failures(failures),
        s1_orthogonal,
        s2_equivalent,
        span_samples: span_samples.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalPropReport {
    pub hypothesis: Hypothesis,
    /// `0 ≤ |Tr(U_m† U'_n)|² ≤ D` on every cross pair (embedded operators).
    pub range_ok: bool,
    pub overlap_min: f64,
    pub overlap_max: f64,
    pub muub: MuubReport,
}

/// Checks that a maximal bound forces `u` and `u2` to be mutually unbiased.
///
/// Hypothesis: both sets complete; `s1` deterministic on `u` and uniform
/// (`log₂ D` bits) on `u2`; `s2` the other way round.
pub fn verify_prop_maximal(
    s1: &TesterSet,
    s2: &TesterSet,
    u: &UnitaryBasis,
    u2: &UnitaryBasis,
) -> Result<MaximalPropReport> {
    let d_count = u.size();
    let max_h = (d_count as f64).log2();
    let mut failures = Vec::new();
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if !s.is_complete(UNIT_TOL) {
            failures.push(format!("{name} is not a complete tester set"));
        }
    }
    if u2.size() != d_count {
        failures.push(format!("basis sizes differ: {} vs {}", d_count, u2.size()));
    }
    let mut check = |s: &TesterSet, basis: &UnitaryBasis, want_zero: bool, tag: &str| {
        for t in s.testers() {
            for (k, el) in basis.elements.iter().enumerate() {
                match tester_entropy(t, el) {
                    Ok(h) => {
                        let ok = if want_zero {
                            h <= TRIVIAL_TOL
                        } else {
                            h >= max_h - MAXIMAL_TOL
                        };
                        if !ok {
                            let want = if want_zero { "0" } else { "log2 D" };
                            failures.push(format!("H({}, {tag}{k}) = {h:.6} bits, want {want}", t.label()));
                        }
                    }
                    Err(e) => failures.push(format!("H({}, {tag}{k}): {e}", t.label())),
                }
            }
        }
    };
    check(s1, u, true, "U");
    check(s1, u2, false, "U'");
    check(s2, u2, true, "U'");
    check(s2, u, false, "U");

    let anc = s1.testers().first().map(|t| t.ancilla_dim()).unwrap_or(1);
    let (overlap_min, overlap_max) = embedded_overlap_range(u, u2, anc);
    let tol = 1e-9;
    let range_ok = overlap_min >= -tol && overlap_max <= d_count as f64 + tol;
    Ok(MaximalPropReport {
        hypothesis: Hypothesis::from_failures(failures),
        range_ok,
        overlap_min,
        overlap_max,
        muub: are_muub(u, u2, KAPPA_TOL)?,
    })
}

/// Searches for `V` making `{B_j V}` unbiased to `B` (`D = d²` only).
/// Returns the partner basis and the mean squared deviation of its overlaps from 1.
pub fn search_unbiased_partner(b: &UnitaryBasis, cfg: &SearchConfig) -> Result<(UnitaryBasis, f64)> {
    let d = b.dim;
    if b.size() != d * d {
        return Err(Error::InvalidBasis("partner search needs a basis of all of M(d, C)".into()));
    }
    // |Tr(B_i† B_j V)|² only depends on the products B_i† B_j.
    let products: Vec<ComplexMatrix> = b
        .elements
        .iter()
        .flat_map(|p| b.elements.iter().map(move |q| (&p.matrix().adjoint() * q.matrix()).adjoint()))
        .collect();
    let n = products.len() as f64;
    let objective = |v: &Unitary| -> Result<f64> {
        Ok(products
            .iter()
            .map(|p| (hs_inner(p, v.matrix()).norm_sqr() - 1.0).powi(2))
            .sum::<f64>()
            / n)
    };
    let out = minimize_over_unitaries(d, objective, cfg)?;
    Ok((b.right_multiplied(&out.minimizer), out.value))
}

/// Tester sets used by the worked examples and the QKD presets.
pub mod fixtures {
    use super::*;

    /// `{(|0⟩, Z), (|1⟩, Z)}`.
    pub fn z_set() -> TesterSet {
        TesterSet::named(&["0Z", "1Z"]).expect("named testers")
    }

    /// `{(|+⟩, X), (|−⟩, X)}`.
    pub fn x_set() -> TesterSet {
        TesterSet::named(&["+X", "-X"]).expect("named testers")
    }

    /// `{(|0⟩, X), (|1⟩, X)}`: same inputs as [`z_set`], X measurement.
    pub fn zx_set() -> TesterSet {
        TesterSet::named(&["0X", "1X"]).expect("named testers")
    }

    /// Bell inputs measured in the Bell basis; deterministic on the Paulis.
    pub fn bell_set() -> TesterSet {
        TesterSet::named(&["bell:0", "bell:1", "bell:2", "bell:3"]).expect("named testers")
    }

    /// Bell inputs measured in `(σ_m V ⊗ I)|Φ+⟩`; deterministic on `{σ_j V}`.
    pub fn bellv_set() -> TesterSet {
        TesterSet::named(&["bellv:0", "bellv:1", "bellv:2", "bellv:3"]).expect("named testers")
    }
}
