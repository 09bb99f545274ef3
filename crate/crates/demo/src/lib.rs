//! Browser bindings for the demo page: an entropy landscape, bound search and
//! a QKD run. Exports return JSON strings or flat arrays; the plain `*_json`
//! and [`landscape`] functions carry the logic and also run natively.

use serde_json::json;
use unitary_testers::bounds::{entropy_sum, estimate_bound as search_bound, SearchConfig};
use unitary_testers::qkd::{simulate, EveStrategy, ProbePolicy, Protocol, ProtocolConfig};
use unitary_testers::qmath::gates::euler_zyz;
use unitary_testers::tester::named_tester;
use unitary_testers::{Error, Result, RngHandle};
use wasm_bindgen::prelude::*;

/// Largest landscape side and QKD round count the page may request.
const MAX_GRID: usize = 400;
const MAX_ROUNDS: u64 = 200_000;

/// `H(t1, u) + H(t2, u)` for `u = Rz(α) Ry(β) Rz(γ)` on an `n × n` grid,
/// `β ∈ [0, π]` along rows and `γ ∈ [0, 2π)` along columns, row-major.
pub fn landscape(t1: &str, t2: &str, alpha: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_GRID {
        return Err(Error::InvalidConfig(format!("grid size must be in 1..={MAX_GRID}")));
    }
    let (a, b) = (named_tester(t1)?, named_tester(t2)?);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let beta = std::f64::consts::PI * i as f64 / (n - 1).max(1) as f64;
        for j in 0..n {
            let gamma = std::f64::consts::TAU * j as f64 / n as f64;
            out.push(entropy_sum(&a, &b, &euler_zyz(alpha, beta, gamma))?);
        }
    }
    Ok(out)
}

pub fn bound_json(t1: &str, t2: &str, starts: usize, seed: u64) -> Result<String> {
    let (a, b) = (named_tester(t1)?, named_tester(t2)?);
    let cfg = SearchConfig { starts, rng: RngHandle::new(seed), ..SearchConfig::default() };
    let est = search_bound(&a, &b, &cfg)?;
    let finals: Vec<f64> = est.starts.iter().map(|s| s.final_value).collect();
    Ok(json!({ "value": est.value, "starts": finals }).to_string())
}

/// `protocol` is `lm05` or `extended`; `eve` is `none`, `qmm` or `intercept`.
pub fn qkd_json(protocol: &str, size: usize, rounds: u64, control_fraction: f64, eve: &str, seed: u64) -> Result<String> {
    if rounds > MAX_ROUNDS {
        return Err(Error::InvalidConfig(format!("at most {MAX_ROUNDS} rounds")));
    }
    let eve = match eve {
        "none" => EveStrategy::None,
        "qmm" => EveStrategy::Qmm { probe: ProbePolicy::default() },
        "intercept" => EveStrategy::InterceptResend,
        other => return Err(Error::UnknownName(other.into())),
    };
    let rng = RngHandle::new(seed);
    let (protocol, cfg) = match protocol {
        "lm05" => (Protocol::Lm05, ProtocolConfig::lm05(rounds, control_fraction, eve, rng)),
        "extended" => {
            let mut cfg = ProtocolConfig::extended(size, rounds, eve, rng)?;
            cfg.control_fraction = control_fraction;
            (Protocol::Extended, cfg)
        }
        other => return Err(Error::UnknownName(other.into())),
    };
    let (stats, _) = simulate(&cfg, protocol)?;
    Ok(serde_json::to_string(&stats)?)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn entropy_landscape(t1: &str, t2: &str, alpha: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
    landscape(t1, t2, alpha, n).map_err(js)
}

#[wasm_bindgen]
pub fn estimate_bound(t1: &str, t2: &str, starts: usize, seed: u64) -> std::result::Result<String, JsError> {
    bound_json(t1, t2, starts, seed).map_err(js)
}

#[wasm_bindgen]
pub fn simulate_qkd(
    protocol: &str,
    size: usize,
    rounds: u64,
    control_fraction: f64,
    eve: &str,
    seed: u64,
) -> std::result::Result<String, JsError> {
    qkd_json(protocol, size, rounds, control_fraction, eve, seed).map_err(js)
}
