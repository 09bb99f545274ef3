//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use unitary_testers::bounds::{entropy_sum, estimate_bound, SearchConfig};
use unitary_testers::muub::{are_muub, build_named_basis, verify_prop_maximal, KAPPA_TOL};
use unitary_testers::qkd::{
    analytic_eve_accuracy, run_extended, run_lm05, EveStrategy, ProbePolicy, ProtocolConfig,
};
use unitary_testers::qmath::{gates, haar_random_unitary};
use unitary_testers::tester::named_tester;
use unitary_testers::verify::{
    choi_deviation, distinguishability_agreement, maximal_fixtures, overlap_range_violation,
    random_tester, trivial_bound_copies,
};
use unitary_testers::{Result, RngHandle, Unitary};

struct Verdict {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Result<Verdict>);

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

fn choi_consistency() -> Result<Verdict> {
    let start = Instant::now();
    let root = RngHandle::new(2026);
    let mut worst: f64 = 0.0;
    for d in [2usize, 3] {
        for k in 0..100u64 {
            let h = root.derive(d as u64 * 1000 + k);
            let t = random_tester(d, k % 2 == 1, h.derive(0))?;
            let u = haar_random_unitary(d, h.derive(1));
            worst = worst.max(choi_deviation(&t, &u)?);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("max deviation {worst:.2e} over 200 pairs in {elapsed:.2?}"),
    )
}

/// Minimum of `H(0Z) + H(+Z)` over a grid of Euler angles, from closed-form
/// outcome probabilities: `p(0Z) = cos²(β/2)`, `p(+Z) = (1 − sin β cos γ)/2`.
fn zz_plus_grid_oracle() -> f64 {
    let h = |p: f64| {
        [p, 1.0 - p]
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -x * x.log2())
            .sum::<f64>()
    };
    let (nb, ng) = (600, 1200);
    let mut best = f64::INFINITY;
    for i in 0..=nb {
        let beta = std::f64::consts::PI * i as f64 / nb as f64;
        for j in 0..ng {
            let gamma = std::f64::consts::TAU * j as f64 / ng as f64;
            let v = h((beta / 2.0).cos().powi(2)) + h(0.5 * (1.0 - beta.sin() * gamma.cos()));
            best = best.min(v);
        }
    }
    best
}

fn bound_fixtures() -> Result<Verdict> {
    let t = named_tester;
    let sy = Unitary::new(gates::sigma_y())?;
    let hy = Unitary::new(gates::hadamard_y())?;
    let e1 = entropy_sum(&t("0Z")?, &t("+X")?, &sy)?;
    let e2 = entropy_sum(&t("0Z")?, &t("0X")?, &hy)?;
    let cfg = SearchConfig { starts: 32, rng: RngHandle::new(1), ..SearchConfig::default() };
    let b_zx = estimate_bound(&t("0Z")?, &t("0X")?, &cfg)?.value;
    let b_zplus = estimate_bound(&t("0Z")?, &t("+X")?, &cfg)?.value;
    let b_zz = estimate_bound(&t("0Z")?, &t("+Z")?, &cfg)?.value;
    let oracle = zz_plus_grid_oracle();
    let pass = e1.abs() <= 1e-6
        && (e2 - 1.0).abs() <= 1e-6
        && (b_zx - 1.0).abs() <= 1e-4
        && b_zplus.abs() <= 1e-6
        && b_zz > 1e-3
        && (b_zz - oracle).abs() <= 1e-3;
    verdict(
        pass,
        format!(
            "sums {e1:.1e}, {e2:.9}; bounds (0Z,0X) {b_zx:.9}, (0Z,+X) {b_zplus:.1e}, (0Z,+Z) {b_zz:.9} vs grid {oracle:.9}"
        ),
    )
}

fn muub_verdicts() -> Result<Verdict> {
    let b = |n: &str| build_named_basis(n, 2);
    let r2 = are_muub(&b("rotation")?, &b("hadamard-pair")?, KAPPA_TOL)?;
    let r1 = are_muub(&b("pauli")?, &b("pauli-unbiased")?, KAPPA_TOL)?;
    let same = are_muub(&b("pauli")?, &b("pauli")?, KAPPA_TOL)?;
    let all_near = |r: &unitary_testers::muub::MuubReport, k: f64| {
        r.overlaps.iter().flatten().all(|o| (o - k).abs() <= 1e-6)
    };
    let pass = r2.verdict
        && r2.kappa.is_some_and(|k| (k - 2.0).abs() <= 1e-6)
        && all_near(&r2, 2.0)
        && r1.verdict
        && r1.overlaps.iter().flatten().count() == 16
        && all_near(&r1, 1.0)
        && !same.verdict;
    verdict(pass, format!("kappa {:?} and {:?}; self-check verdict {}", r2.kappa, r1.kappa, same.verdict))
}

fn distinguishability() -> Result<Verdict> {
    let agree = distinguishability_agreement(500, RngHandle::new(2026))?;
    verdict(agree == 500, format!("{agree}/500 instances agree"))
}

fn trivial_bound() -> Result<Verdict> {
    let [hyp, s1, s2] = trivial_bound_copies(50, RngHandle::new(2026))?;
    verdict(
        hyp == 51 && s1 == 51 && s2 == 51,
        format!("hypothesis {hyp}/51, orthogonal {s1}/51, equivalent {s2}/51"),
    )
}

fn maximal_bound() -> Result<Verdict> {
    let mut pass = true;
    let mut kappas = Vec::new();
    for (s1, s2, a, b) in maximal_fixtures()? {
        let r = verify_prop_maximal(&s1, &s2, &a, &b)?;
        pass &= r.hypothesis.pass && r.muub.verdict;
        kappas.push(r.muub.kappa);
    }
    let worst = overlap_range_violation(1000, RngHandle::new(2026))?;
    verdict(pass && worst <= 1e-9, format!("kappa {kappas:?}; max range violation {worst:.1e} over 1000 pairs"))
}

fn qkd() -> Result<Verdict> {
    let start = Instant::now();
    let rng = RngHandle::new(2026);
    let qmm = EveStrategy::Qmm { probe: ProbePolicy::Fixed { set: 0, tester: 0 } };

    let lm05 = run_lm05(&ProtocolConfig::lm05(100_000, 0.25, EveStrategy::None, rng.derive(0)))?;
    let ext = run_extended(&ProtocolConfig::extended(2, 100_000, EveStrategy::None, rng.derive(1))?)?;
    let noiseless = lm05.bob_error.count == 0
        && lm05.cm_mismatch.count == 0
        && ext.bob_error.count == 0
        && ext.sift_fraction.within_sigma(0.5, 3.0);

    let mut accuracy_ok = true;
    let mut notes = Vec::new();
    for (k, size) in [2usize, 4].into_iter().enumerate() {
        let cfg = ProtocolConfig::extended(size, 22_000, qmm, rng.derive(2 + k as u64))?;
        let s = run_extended(&cfg)?;
        let acc = s.eve_accuracy.expect("adversary present");
        let target = analytic_eve_accuracy(size);
        accuracy_ok &= s.sifted >= 10_000 && acc.within_sigma(target, 3.0);
        notes.push(format!("D={size}: {:.4} vs {target} ({} sifted)", acc.rate, s.sifted));
    }

    let cfg = ProtocolConfig::extended(4, 20_000, qmm, rng.derive(9))?;
    let a = serde_json::to_string(&run_extended(&cfg)?)?;
    let b = serde_json::to_string(&run_extended(&cfg)?)?;
    let elapsed = start.elapsed();
    verdict(
        noiseless && accuracy_ok && a == b && elapsed < Duration::from_secs(60),
        format!(
            "errors {}+{}, sift {:.4}; eve {}; reproducible {}; {elapsed:.2?}",
            lm05.bob_error.count,
            ext.bob_error.count,
            ext.sift_fraction.rate,
            notes.join(", "),
            a == b
        ),
    )
}

fn cli_determinism() -> Result<Verdict> {
    let run = || -> Option<String> {
        let out = Command::new(env!("CARGO_BIN_EXE_utester"))
            .args(["verify", "--suite", "all", "--seed", "7", "--json-only"])
            .output()
            .ok()?;
        let v: Value = serde_json::from_slice(&out.stdout).ok()?;
        (out.status.code() == Some(0)).then(|| v["payload"].to_string())
    };
    match (run(), run()) {
        (Some(a), Some(b)) => verdict(a == b, format!("payload {} bytes, identical {}", a.len(), a == b)),
        _ => verdict(false, "verify --suite all did not pass"),
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 choi and direct probabilities agree", choi_consistency),
        ("2 entropy and bound fixtures", bound_fixtures),
        ("3 unbiased basis verdicts", muub_verdicts),
        ("4 distinguishability criterion", distinguishability),
        ("5 trivial bound suite", trivial_bound),
        ("6 maximal bound suite", maximal_bound),
        ("7 qkd statistics", qkd),
        ("8 cli determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let v = f().unwrap_or_else(|e| Verdict { pass: false, detail: format!("error: {e}") });
        let tag = if v.pass { "PASS" } else { "FAIL" };
        failures += usize::from(!v.pass);
        println!("{tag} {name} ({:.2?}): {}", start.elapsed(), v.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
