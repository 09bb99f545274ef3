use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{EveStrategy, ProbePolicy, Protocol, ProtocolConfig};
use crate::error::{Error, Result};
use crate::muub::verify_prop_maximal;
use crate::qmath::{PureState, Unitary, UNIT_TOL};
use crate::tester::{outcome_distribution, Tester};

/// Probability an outcome must reach to count as deterministic when building
/// decode tables.
const DETERMINISTIC_TOL: f64 = 1e-9;

/// `count / trials` with its binomial standard error; zero when `trials = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub count: u64,
    pub trials: u64,
    pub rate: f64,
    pub std_error: f64,
}

impl Rate {
    pub fn new(count: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self { count, trials, rate: 0.0, std_error: 0.0 };
        }
        let rate = count as f64 / trials as f64;
        Self {
            count,
            trials,
            rate,
            std_error: (rate * (1.0 - rate) / trials as f64).sqrt(),
        }
    }

    /// `|rate − target| ≤ k·σ`, with `σ` the standard error at `target`.
    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        let sigma = (target * (1.0 - target) / self.trials.max(1) as f64).sqrt();
        (self.rate - target).abs() <= k * sigma
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolStats {
    pub protocol: Protocol,
    pub rounds: u64,
    pub encode_rounds: u64,
    pub control_rounds: u64,
    pub sifted: u64,
    /// Sifted over encode rounds.
    pub sift_fraction: Rate,
    /// Wrong or undecodable digits among sifted rounds.
    pub bob_error: Rate,
    /// Control rounds where Alice's set matched Bob's and her outcome differed from his input.
    pub cm_mismatch: Rate,
    /// Correct adversary guesses among sifted rounds; `None` without an adversary.
    pub eve_accuracy: Option<Rate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Encode,
    Control,
}

/// One protocol round, as written to the CSV trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub mode: Mode,
    pub bob_set: usize,
    pub bob_tester: usize,
    /// Encoding set in encode rounds, measurement set in control rounds.
    pub alice_set: usize,
    pub digit: usize,
    pub sifted: bool,
    pub bob_outcome: Option<usize>,
    pub bob_digit: Option<usize>,
    pub alice_outcome: Option<usize>,
    pub eve_set: Option<usize>,
    pub eve_tester: Option<usize>,
    pub eve_guess: Option<usize>,
}

/// Sifted-key accuracy of an equivalent-tester adversary with a fixed set
/// guess against a uniform choice between two sets: `½ + ½/D`.
pub fn analytic_eve_accuracy(size: usize) -> f64 {
    0.5 + 0.5 / size as f64
}

pub fn run_lm05(cfg: &ProtocolConfig) -> Result<ProtocolStats> {
    Ok(simulate(cfg, Protocol::Lm05)?.0)
}

pub fn run_extended(cfg: &ProtocolConfig) -> Result<ProtocolStats> {
    Ok(simulate(cfg, Protocol::Extended)?.0)
}

/// Runs every round and returns the aggregate together with the per-round records.
pub fn simulate(cfg: &ProtocolConfig, protocol: Protocol) -> Result<(ProtocolStats, Vec<RoundRecord>)> {
    let prepared = Prepared::new(cfg, protocol)?;

    #[cfg(feature = "parallel")]
    let records: Vec<RoundRecord> = {
        use rayon::prelude::*;
        (0..cfg.rounds).into_par_iter().map(|r| prepared.round(r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let records: Vec<RoundRecord> = (0..cfg.rounds).map(|r| prepared.round(r)).collect();

    Ok((aggregate(protocol, cfg.eve, &records), records))
}

pub fn aggregate(protocol: Protocol, eve: EveStrategy, records: &[RoundRecord]) -> ProtocolStats {
    let mut encode = 0;
    let mut control = 0;
    let mut sifted = 0;
    let mut errors = 0;
    let mut compared = 0;
    let mut mismatches = 0;
    let mut eve_correct = 0;
    for r in records {
        match r.mode {
            Mode::Control => {
                control += 1;
                if r.alice_set == r.bob_set {
                    compared += 1;
                    if r.alice_outcome != Some(r.bob_tester) {
                        mismatches += 1;
                    }
                }
            }
            Mode::Encode => {
                encode += 1;
                if r.sifted {
                    sifted += 1;
                    if r.bob_digit != Some(r.digit) {
                        errors += 1;
                    }
                    if r.eve_guess == Some(r.digit) {
                        eve_correct += 1;
                    }
                }
            }
        }
    }
    ProtocolStats {
        protocol,
        rounds: records.len() as u64,
        encode_rounds: encode,
        control_rounds: control,
        sifted,
        sift_fraction: Rate::new(sifted, encode),
        bob_error: Rate::new(errors, sifted),
        cm_mismatch: Rate::new(mismatches, compared),
        eve_accuracy: eve.is_present().then(|| Rate::new(eve_correct, sifted)),
    }
}

/// Validated configuration with embedded encodings and decode tables.
struct Prepared<'a> {
    cfg: &'a ProtocolConfig,
    protocol: Protocol,
    /// `[encoding set][digit]`, embedded to the tester dimension.
    encodings: [Vec<Unitary>; 2],
    /// `[tester set][tester][outcome]` → digit.
    decode: [Vec<Vec<Option<usize>>>; 2],
    inputs: [Vec<PureState>; 2],
}

impl<'a> Prepared<'a> {
    fn new(cfg: &'a ProtocolConfig, protocol: Protocol) -> Result<Self> {
        validate(cfg, protocol)?;
        let embed = |k: usize| -> Result<Vec<Unitary>> {
            let t = &cfg.tester_sets[0].testers()[0];
            cfg.encodings[k].elements().iter().map(|u| t.embed(u)).collect()
        };
        let decode_set = |s: usize| -> Result<Vec<Vec<Option<usize>>>> {
            let basis = &cfg.encodings[encoding_for(protocol, s)];
            cfg.tester_sets[s]
                .testers()
                .iter()
                .map(|t| decode_table(t, basis.elements()))
                .collect()
        };
        Ok(Self {
            cfg,
            protocol,
            encodings: [embed(0)?, embed(1)?],
            decode: [decode_set(0)?, decode_set(1)?],
            inputs: [cfg.tester_sets[0].inputs(), cfg.tester_sets[1].inputs()],
        })
    }

    fn tester(&self, set: usize, k: usize) -> &Tester {
        &self.cfg.tester_sets[set].testers()[k]
    }

    fn round(&self, round: u64) -> RoundRecord {
        let mut rng = self.cfg.rng.derive(round).rng();
        let n = self.cfg.size;
        let bob_set = rng.random_range(0..2);
        let bob_tester = rng.random_range(0..n);
        let control = rng.random::<f64>() < self.cfg.control_fraction;
        let drawn_set = rng.random_range(0..2);
        let digit = rng.random_range(0..n);
        let eve_draw = (rng.random_range(0..2), rng.random_range(0..n));
        let eve_fallback = rng.random_range(0..n);

        let alice_set = match (self.protocol, control) {
            (Protocol::Lm05, false) => 0,
            _ => drawn_set,
        };
        let mut rec = RoundRecord {
            round,
            mode: if control { Mode::Control } else { Mode::Encode },
            bob_set,
            bob_tester,
            alice_set,
            digit,
            sifted: false,
            bob_outcome: None,
            bob_digit: None,
            alice_outcome: None,
            eve_set: None,
            eve_tester: None,
            eve_guess: None,
        };

        let bob_probe = self.tester(bob_set, bob_tester).input();
        let to_alice = match self.cfg.eve {
            EveStrategy::None => bob_probe.clone(),
            EveStrategy::Qmm { probe } => {
                let (s, t) = match probe {
                    ProbePolicy::Fixed { set, tester } => (set, tester),
                    ProbePolicy::Random => eve_draw,
                };
                rec.eve_set = Some(s);
                rec.eve_tester = Some(t);
                self.tester(s, t).input().clone()
            }
            EveStrategy::InterceptResend => {
                let s = eve_draw.0;
                let j = measure(bob_probe, &self.inputs[s], &mut rng);
                rec.eve_set = Some(s);
                rec.eve_tester = Some(j);
                self.inputs[s][j].clone()
            }
        };

        if control {
            rec.alice_outcome = Some(measure(&to_alice, &self.inputs[alice_set], &mut rng));
            return rec;
        }

        let returned = to_alice.evolve(&self.encodings[encoding_for(self.protocol, alice_set)][digit]);
        let to_bob = match (rec.eve_set, rec.eve_tester) {
            (Some(es), Some(et)) => {
                let tester = self.tester(es, et);
                let o = measure(&returned, tester.projectors(), &mut rng);
                let eve_digit = self.decode[es][et][o].unwrap_or(eve_fallback);
                rec.eve_guess = Some(match self.protocol {
                    Protocol::Extended if es != alice_set => eve_fallback,
                    _ => eve_digit,
                });
                match self.cfg.eve {
                    EveStrategy::Qmm { .. } => {
                        bob_probe.evolve(&self.encodings[encoding_for(self.protocol, es)][eve_digit])
                    }
                    _ => tester.projectors()[o].clone(),
                }
            }
            _ => returned,
        };

        let o = measure(&to_bob, self.tester(bob_set, bob_tester).projectors(), &mut rng);
        rec.bob_outcome = Some(o);
        rec.bob_digit = self.decode[bob_set][bob_tester][o];
        rec.sifted = self.protocol == Protocol::Lm05 || alice_set == bob_set;
        rec
    }
}

fn encoding_for(protocol: Protocol, tester_set: usize) -> usize {
    match protocol {
        Protocol::Lm05 => 0,
        Protocol::Extended => tester_set,
    }
}

/// Samples a Born-rule outcome for `state` measured in the orthonormal `basis`.
fn measure(state: &PureState, basis: &[PureState], rng: &mut impl Rng) -> usize {
    let probs: Vec<f64> = basis.iter().map(|b| b.inner(state).norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            return k;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Outcome → digit for a tester that is deterministic on every element of `basis`.
fn decode_table(t: &Tester, basis: &[Unitary]) -> Result<Vec<Option<usize>>> {
    let mut table = vec![None; t.outcome_count()];
    for (digit, u) in basis.iter().enumerate() {
        let dist = outcome_distribution(t, u)?;
        let k = dist.argmax();
        if dist.probabilities()[k] < 1.0 - DETERMINISTIC_TOL {
            return Err(Error::HypothesisViolated(format!(
                "{} is not deterministic on encoding {digit}",
                t.label()
            )));
        }
        if let Some(other) = table[k].replace(digit) {
            return Err(Error::HypothesisViolated(format!(
                "{} cannot separate encodings {other} and {digit}",
                t.label()
            )));
        }
    }
    Ok(table)
}

fn validate(cfg: &ProtocolConfig, protocol: Protocol) -> Result<()> {
    let invalid = |msg: String| Err(Error::InvalidConfig(msg));
    if cfg.rounds == 0 {
        return invalid("rounds must be at least 1".into());
    }
    if !(0.0..=1.0).contains(&cfg.control_fraction) {
        return invalid(format!("control fraction {} outside [0, 1]", cfg.control_fraction));
    }
    if protocol == Protocol::Lm05 && (cfg.d != 2 || cfg.size != 2) {
        return invalid(format!("lm05 needs d = 2 and D = 2, got d = {} and D = {}", cfg.d, cfg.size));
    }
    for (k, s) in cfg.tester_sets.iter().enumerate() {
        if s.dim() != cfg.d {
            return invalid(format!("tester set {k} has d = {}, config has d = {}", s.dim(), cfg.d));
        }
        if s.len() != cfg.size {
            return invalid(format!("tester set {k} has {} testers, config has D = {}", s.len(), cfg.size));
        }
        if !s.is_complete(UNIT_TOL) {
            return invalid(format!("tester set {k} is not complete"));
        }
    }
    let n0 = cfg.tester_sets[0].testers()[0].input().dim();
    if cfg.tester_sets[1].testers()[0].input().dim() != n0 {
        return invalid("tester sets differ in input dimension".into());
    }
    for (k, b) in cfg.encodings.iter().enumerate() {
        if b.dim() != cfg.d || b.size() != cfg.size {
            return invalid(format!(
                "encoding set {k} is {} unitaries of dimension {}, config has D = {} and d = {}",
                b.size(),
                b.dim(),
                cfg.size,
                cfg.d
            ));
        }
    }
    if let EveStrategy::Qmm { probe: ProbePolicy::Fixed { set, tester } } = cfg.eve {
        if set >= 2 || tester >= cfg.size {
            return invalid(format!("probe tester ({set}, {tester}) out of range"));
        }
    }
    if protocol == Protocol::Extended {
        let [s1, s2] = &cfg.tester_sets;
        let [u1, u2] = &cfg.encodings;
        let report = verify_prop_maximal(s1, s2, u1, u2)?;
        if !report.hypothesis.pass {
            return Err(Error::HypothesisViolated(report.hypothesis.failures.join("; ")));
        }
        if !report.muub.verdict {
            return Err(Error::HypothesisViolated("encoding sets are not mutually unbiased".into()));
        }
    }
    Ok(())
}
