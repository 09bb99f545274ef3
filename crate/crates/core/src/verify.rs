//! Self-check suites run by the command-line `verify` command.
//!
//! Every suite is a pure function of its seed, so reports are reproducible.

use serde::{Deserialize, Serialize};

use crate::bounds::{entropy_sum, estimate_bound, mub_overlap_bound, SearchConfig};
use crate::error::{Error, Result};
use crate::muub::{
    are_muub, build_named_basis, completeness_sum, embedded_overlap_range, fixtures,
    is_orthogonal_unitary_basis, rotation_family, verify_prop_maximal, verify_prop_trivial,
    UnitaryBasis, KAPPA_TOL,
};
use crate::ppovm::{choi_operator, probability_via_choi, tester_elements};
use crate::qmath::{
    gates, gell_mann_basis, haar_random_unitary, haar_state_from, haar_unitary_from,
    partial_trace_second, partial_transpose_first, swap_operator, tensor, unnormalized_mes,
    vectorize, ComplexMatrix, PureState, RngHandle, Unitary, C64,
};
use crate::tester::{
    can_distinguish, entropy_bits, is_eigenoperator, named_tester, outcome_distribution,
    outcome_distribution_raw, Tester, TesterSet,
};

pub const SUITES: &[&str] = &["qmath", "tester", "ppovm", "bounds", "muub", "props"];

/// Bound of the `(0Z, +Z)` pair, fixed beforehand by a brute-force grid over
/// Euler angles.
pub const ZZ_PLUS_BOUND: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub total: usize,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            suite: suite.into(),
            total: checks.len(),
            passed,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// Runs one suite, or all of them for `"all"`.
pub fn run_suites(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    let root = RngHandle::new(seed);
    let one = |s: &str, i: u64| -> Result<SuiteReport> {
        let h = root.derive(i);
        Ok(match s {
            "qmath" => qmath_suite(h),
            "tester" => tester_suite(h)?,
            "ppovm" => ppovm_suite(h)?,
            "bounds" => bounds_suite(h)?,
            "muub" => muub_suite(h)?,
            "props" => props_suite(h)?,
            _ => return Err(Error::UnknownName(s.into())),
        })
    };
    if name == "all" {
        SUITES.iter().enumerate().map(|(i, s)| one(s, i as u64)).collect()
    } else {
        let i = SUITES
            .iter()
            .position(|s| *s == name)
            .ok_or_else(|| Error::UnknownName(name.into()))?;
        Ok(vec![one(name, i as u64)?])
    }
}

/// Ancilla-free (`bipartite = false`) or bipartite tester with a Haar input and
/// a Haar measurement basis.
pub fn random_tester(d: usize, bipartite: bool, h: RngHandle) -> Result<Tester> {
    let n = if bipartite { d * d } else { d };
    let mut rng = h.rng();
    let input = haar_state_from(n, &mut rng);
    let basis = haar_unitary_from(n, &mut rng);
    let projectors = (0..n)
        .map(|k| PureState::new((0..n).map(|i| basis.matrix()[(i, k)]).collect()))
        .collect::<Result<_>>()?;
    Tester::new("random", d, input, projectors)
}

/// A random ancilla-free tester with two unitaries it measures
/// deterministically. The two outcomes coincide about half the time.
pub fn random_deterministic_instance(d: usize, h: RngHandle) -> Result<(Tester, Unitary, Unitary)> {
    let mut rng = h.rng();
    let g = haar_unitary_from(d, &mut rng);
    let v = haar_unitary_from(d, &mut rng);
    let column = |m: &Unitary, k: usize| -> Result<PureState> {
        PureState::new((0..d).map(|i| m.matrix()[(i, k)]).collect())
    };
    let tester = Tester::new(
        "deterministic",
        d,
        column(&g, 0)?,
        (0..d).map(|k| column(&v, k)).collect::<Result<_>>()?,
    )?;
    let a = rand::Rng::random_range(&mut rng, 0..d);
    let b = if rand::Rng::random_bool(&mut rng, 0.5) {
        a
    } else {
        rand::Rng::random_range(&mut rng, 0..d)
    };
    let mut make = |target: usize| -> Unitary {
        // cyclic shift by `target` after `phase ⊕ R`: sends e_0 to phase·e_target
        let phase = C64::from_polar(1.0, rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU));
        let rest = (d > 1).then(|| haar_unitary_from(d - 1, &mut rng));
        let block = ComplexMatrix::from_fn(d, d, |i, j| match (i, j, &rest) {
            (0, 0, _) => phase,
            (0, _, _) | (_, 0, _) => C64::new(0.0, 0.0),
            (_, _, Some(r)) => r.matrix()[(i - 1, j - 1)],
            _ => unreachable!(),
        });
        let shift = ComplexMatrix::from_fn(d, d, |i, j| {
            if i == (j + target) % d {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let m = &(v.matrix() * &shift) * &block;
        Unitary::new(&m * &g.matrix().adjoint()).expect("product of unitaries")
    };
    let u1 = make(a);
    let u2 = make(b);
    Ok((tester, u1, u2))
}

fn qmath_suite(h: RngHandle) -> SuiteReport {
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let u = haar_random_unitary(2 + k % 3, h.derive(k as u64));
        worst = worst.max(u.matrix().unitarity_defect().unwrap_or(f64::INFINITY));
    }
    checks.push(check("haar unitaries are unitary", worst <= 1e-12, format!("max defect {worst:.3e}")));

    let a = haar_random_unitary(2, h.derive(100)).into_matrix();
    let b = haar_random_unitary(3, h.derive(101)).into_matrix();
    let reduced = partial_trace_second(&tensor(&a, &b), 2, 3).expect("consistent dims");
    let dev = reduced.max_abs_diff(&a.scale(b.trace()));
    checks.push(check("partial trace of a product", dev <= 1e-12, format!("deviation {dev:.3e}")));

    let pt = partial_transpose_first(&unnormalized_mes(3).projector(), 3).expect("consistent dims");
    let dev = pt.max_abs_diff(&swap_operator(3));
    checks.push(check("partial transpose of MES projector is SWAP", dev <= 1e-15, format!("deviation {dev:.3e}")));

    let inner = vectorize(&a).inner(&vectorize(&a.scale(C64::new(0.0, 1.0))));
    let want = (&a.adjoint() * &a.scale(C64::new(0.0, 1.0))).trace();
    let dev = (inner - want).norm();
    checks.push(check("vectorization inner product is Hilbert-Schmidt", dev <= 1e-12, format!("deviation {dev:.3e}")));

    let gm = gell_mann_basis(3);
    let ok = gm.len() == 8
        && gm.iter().enumerate().all(|(i, x)| {
            gm.iter().enumerate().all(|(j, y)| {
                let t = (x * y).trace();
                let want = if i == j { 2.0 } else { 0.0 };
                (t - C64::new(want, 0.0)).norm() < 1e-12
            })
        });
    checks.push(check("Gell-Mann basis is orthogonal", ok, "d = 3"));

    let gen = gm.iter().fold(ComplexMatrix::zeros(3, 3), |acc, g| &acc + &g.scale(C64::new(0.3, 0.0)));
    let defect = Unitary::from_generator(&gen).matrix().unitarity_defect().unwrap_or(f64::INFINITY);
    checks.push(check("exp(iH) is unitary", defect <= 1e-12, format!("defect {defect:.3e}")));
    SuiteReport::new("qmath", checks)
}

fn tester_suite(h: RngHandle) -> Result<SuiteReport> {
    let t = |n: &str| named_tester(n);
    let u = |m: ComplexMatrix| Unitary::new(m);
    let i2 = Unitary::identity(2);
    let mut checks = Vec::new();
    let expect = |name: &str, tester: &str, op: &Unitary, want: &[f64]| -> Result<Check> {
        let p = outcome_distribution(&t(tester)?, op)?;
        let dev = p.probabilities().iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(check(name, dev <= 1e-12, format!("{:?}", p.probabilities())))
    };
    checks.push(expect("0Z on identity", "0Z", &i2, &[1.0, 0.0])?);
    checks.push(expect("0Z on sigma_x", "0Z", &u(gates::sigma_x())?, &[0.0, 1.0])?);
    checks.push(expect("+X on sigma_y", "+X", &u(gates::sigma_y())?, &[0.0, 1.0])?);
    checks.push(expect("0X on identity", "0X", &i2, &[0.5, 0.5])?);

    let p = outcome_distribution(&t("0X")?, &i2)?;
    let hx = entropy_bits(p.probabilities());
    checks.push(check("entropy of a uniform qubit outcome", (hx - 1.0).abs() <= 1e-12, format!("{hx}")));

    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let tester = random_tester(2 + k % 2, k % 3 == 0, h.derive(k as u64))?;
        let w = haar_random_unitary(tester.dim(), h.derive(100 + k as u64));
        let p = outcome_distribution_raw(&tester, &w)?;
        worst = worst.max((p.total() - 1.0).abs());
        let q = outcome_distribution_raw(&tester, &w.with_phase(0.7))?;
        worst = worst.max(p.max_abs_diff(&q));
    }
    checks.push(check("normalization and phase invariance", worst <= 1e-9, format!("max deviation {worst:.3e}")));

    for (name, set) in [("z", fixtures::z_set()), ("x", fixtures::x_set()), ("bell", fixtures::bell_set())] {
        checks.push(check(format!("{name} set is complete"), set.is_complete(1e-9), ""));
    }
    let mixed = TesterSet::named(&["0Z", "0X"])?;
    checks.push(check("{0Z, 0X} is not complete", !mixed.is_complete(1e-9), ""));

    let sz = u(gates::sigma_z())?;
    let sx = u(gates::sigma_x())?;
    checks.push(check(
        "sigma_z is an eigenoperator of |0>",
        is_eigenoperator(sz.matrix(), &gates::ket0(), 1e-9) && !can_distinguish(&t("0Z")?, &i2, &sz)?,
        "",
    ));
    checks.push(check(
        "sigma_x is distinguishable from identity with 0Z",
        !is_eigenoperator(sx.matrix(), &gates::ket0(), 1e-9) && can_distinguish(&t("0Z")?, &i2, &sx)?,
        "",
    ));
    Ok(SuiteReport::new("tester", checks))
}

/// Largest `|Tr[T_k E(u)] − |⟨χ_k|U|ψ⟩|²|` over outcomes.
pub fn choi_deviation(t: &Tester, u: &Unitary) -> Result<f64> {
    let via_choi = probability_via_choi(&tester_elements(t), &choi_operator(u))?;
    let direct = outcome_distribution(t, u)?;
    Ok(via_choi.max_abs_diff(&direct))
}

fn ppovm_suite(h: RngHandle) -> Result<SuiteReport> {
    let checks = (0..100u64)
        .map(|k| {
            let d = if k % 2 == 0 { 2 } else { 3 };
            let bipartite = k % 4 >= 2;
            let t = random_tester(d, bipartite, h.derive(2 * k))?;
            let u = haar_random_unitary(d, h.derive(2 * k + 1));
            let dev = choi_deviation(&t, &u)?;
            let kind = if bipartite { "bipartite" } else { "ancilla-free" };
            Ok(check(format!("choi consistency #{k} (d={d}, {kind})"), dev <= 1e-9, format!("{dev:.3e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("ppovm", checks))
}

fn bounds_suite(h: RngHandle) -> Result<SuiteReport> {
    let t = |n: &str| named_tester(n);
    let cfg = SearchConfig { rng: h, ..SearchConfig::default() };
    let mut checks = Vec::new();

    let v = entropy_sum(&t("0Z")?, &t("+X")?, &Unitary::new(gates::sigma_y())?)?;
    checks.push(check("H(0Z) + H(+X) on sigma_y", v.abs() <= 1e-6, format!("{v}")));
    let v = entropy_sum(&t("0Z")?, &t("0X")?, &Unitary::new(gates::hadamard_y())?)?;
    checks.push(check("H(0Z) + H(0X) on H", (v - 1.0).abs() <= 1e-6, format!("{v}")));

    let b = estimate_bound(&t("0Z")?, &t("0X")?, &cfg)?.value;
    checks.push(check("bound(0Z, 0X) = 1", (b - 1.0).abs() <= 1e-4, format!("{b}")));
    let b = estimate_bound(&t("0Z")?, &t("+X")?, &cfg)?.value;
    checks.push(check("bound(0Z, +X) = 0", b <= 1e-6, format!("{b}")));
    let b = estimate_bound(&t("0Z")?, &t("+Z")?, &cfg)?.value;
    checks.push(check(
        "bound(0Z, +Z) matches grid value",
        b > 1e-3 && (b - ZZ_PLUS_BOUND).abs() <= 1e-3,
        format!("{b}"),
    ));

    let m = mub_overlap_bound(&gates::z_basis(), &gates::x_basis())?;
    checks.push(check("overlap bound of Z and X", (m - 1.0).abs() <= 1e-12, format!("{m}")));
    Ok(SuiteReport::new("bounds", checks))
}

fn muub_suite(h: RngHandle) -> Result<SuiteReport> {
    let b = |n: &str| build_named_basis(n, 2);
    let mut checks = Vec::new();
    let overlap_check = |name: &str, x: &UnitaryBasis, y: &UnitaryBasis, kappa: f64| -> Result<Check> {
        let r = are_muub(x, y, KAPPA_TOL)?;
        let ok = r.verdict && r.overlaps.iter().flatten().all(|o| (o - kappa).abs() <= 1e-6);
        Ok(check(name, ok, format!("kappa {:?}", r.kappa)))
    };
    checks.push(overlap_check("rotation vs hadamard-pair", &b("rotation")?, &b("hadamard-pair")?, 2.0)?);
    checks.push(overlap_check("pauli vs pauli-unbiased", &b("pauli")?, &b("pauli-unbiased")?, 1.0)?);
    let same = are_muub(&b("pauli")?, &b("pauli")?, KAPPA_TOL)?;
    checks.push(check("pauli vs itself is not unbiased", !same.verdict, ""));

    for d in 2..=4 {
        let w = build_named_basis("weyl", d)?;
        checks.push(check(format!("weyl d={d} is orthogonal"), is_orthogonal_unitary_basis(&w, 1e-9), ""));
        let u = haar_random_unitary(d, h.derive(d as u64));
        let s = completeness_sum(&u, &w);
        checks.push(check(format!("weyl d={d} completeness"), (s - 1.0).abs() <= 1e-9, format!("{s}")));
    }
    Ok(SuiteReport::new("muub", checks))
}

/// Agreement count of `can_distinguish` with the eigenoperator criterion over
/// `n` random deterministic instances (`d` cycling through 2, 3, 4).
pub fn distinguishability_agreement(n: usize, h: RngHandle) -> Result<usize> {
    let mut agree = 0;
    for k in 0..n {
        let d = 2 + k % 3;
        let (t, u1, u2) = random_deterministic_instance(d, h.derive(k as u64))?;
        let op = u2.adjoint().compose(&u1);
        if can_distinguish(&t, &u1, &u2)? != is_eigenoperator(op.matrix(), t.input(), 1e-9) {
            agree += 1;
        }
    }
    Ok(agree)
}

/// Counts of (fixture + `copies` Haar-conjugated copies) passing hypothesis,
/// orthogonality, and equivalence.
pub fn trivial_bound_copies(copies: usize, h: RngHandle) -> Result<[usize; 3]> {
    let us = [Unitary::identity(2), Unitary::new(gates::i_sigma_y())?];
    let span = rotation_family(16);
    let mut counts = [0; 3];
    for k in 0..=copies {
        let w = if k == 0 {
            Unitary::identity(2)
        } else {
            haar_random_unitary(2, h.derive(k as u64))
        };
        let r = verify_prop_trivial(
            &fixtures::z_set().rotated(&w)?,
            &fixtures::x_set().rotated(&w)?,
            &us.iter().map(|u| u.conjugated_by(&w)).collect::<Vec<_>>(),
            &span.iter().map(|u| u.conjugated_by(&w)).collect::<Vec<_>>(),
        );
        counts[0] += r.hypothesis.pass as usize;
        counts[1] += r.s1_orthogonal as usize;
        counts[2] += r.s2_equivalent as usize;
    }
    Ok(counts)
}

/// The `D = 2` and `D = 4` maximal-bound fixtures.
pub fn maximal_fixtures() -> Result<Vec<(TesterSet, TesterSet, UnitaryBasis, UnitaryBasis)>> {
    Ok(vec![
        (
            fixtures::z_set(),
            fixtures::zx_set(),
            build_named_basis("rotation", 2)?,
            build_named_basis("hadamard-pair", 2)?,
        ),
        (
            fixtures::bell_set(),
            fixtures::bellv_set(),
            build_named_basis("pauli", 2)?,
            build_named_basis("pauli-unbiased", 2)?,
        ),
    ])
}

/// Largest violation of `0 ≤ |Tr(U†U')|² ≤ D` over `pairs` random rotations
/// `{w U v}` of the maximal fixtures (half each).
pub fn overlap_range_violation(pairs: usize, h: RngHandle) -> Result<f64> {
    let fx = maximal_fixtures()?;
    let mut worst: f64 = 0.0;
    for k in 0..pairs {
        let (s1, _, a, b) = &fx[k % fx.len()];
        let mut rng = h.derive(k as u64).rng();
        let w = haar_unitary_from(2, &mut rng);
        let v = haar_unitary_from(2, &mut rng);
        let anc = s1.testers()[0].ancilla_dim();
        let (lo, hi) = embedded_overlap_range(&a.transformed(&w, &v), &b.transformed(&w, &v), anc);
        worst = worst.max(-lo).max(hi - a.size() as f64);
    }
    Ok(worst)
}

fn props_suite(h: RngHandle) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let agree = distinguishability_agreement(500, h.derive(0))?;
    checks.push(check("distinguishability matches eigenoperator criterion", agree == 500, format!("{agree}/500")));

    let [hyp, s1, s2] = trivial_bound_copies(50, h.derive(1))?;
    checks.push(check(
        "trivial bound forces orthogonality and equivalence",
        hyp == 51 && s1 == 51 && s2 == 51,
        format!("hypothesis {hyp}/51, orthogonal {s1}/51, equivalent {s2}/51"),
    ));

    for (s1, s2, a, b) in maximal_fixtures()? {
        let r = verify_prop_maximal(&s1, &s2, &a, &b)?;
        checks.push(check(
            format!("maximal bound forces unbiasedness (D={})", a.size()),
            r.hypothesis.pass && r.muub.verdict && r.range_ok,
            format!("kappa {:?}", r.muub.kappa),
        ));
    }
    let worst = overlap_range_violation(1000, h.derive(2))?;
    checks.push(check("overlap range on rotated bases", worst <= 1e-9, format!("max violation {worst:.3e}")));
    Ok(SuiteReport::new("props", checks))
}
