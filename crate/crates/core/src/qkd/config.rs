use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::muub::{build_named_basis, fixtures, BasisSpec, UnitaryBasis};
use crate::qmath::RngHandle;
use crate::tester::{TesterSet, TesterSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Lm05,
    Extended,
}

/// How a QMM adversary chooses the probe she sends in place of Bob's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "lowercase")]
pub enum ProbePolicy {
    /// Always the input of tester `tester` from tester set `set`.
    Fixed { set: usize, tester: usize },
    /// A uniformly random tester set and tester each round.
    Random,
}

impl Default for ProbePolicy {
    fn default() -> Self {
        ProbePolicy::Fixed { set: 0, tester: 0 }
    }
}

/// Adversary model.
///
/// - `qmm`: keeps Bob's probe, sends her own tester input to Alice, measures
///   the return with that tester, and applies the decoded encoding to Bob's
///   probe before forwarding it.
/// - `intercept-resend`: measures Bob's probe in the input basis of a random
///   tester set, resends the input she found, measures the return with the
///   matching tester, and forwards the post-measurement state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EveStrategy {
    #[default]
    None,
    Qmm {
        #[serde(default)]
        probe: ProbePolicy,
    },
    InterceptResend,
}

impl EveStrategy {
    pub fn is_present(&self) -> bool {
        !matches!(self, EveStrategy::None)
    }
}

/// Run parameters for either protocol.
///
/// Tester set `k` decodes encoding set `k` in the extended protocol. LM05
/// encodes with `encodings[0]` for both tester sets and ignores `encodings[1]`.
#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub d: usize,
    /// `D`: digits per round, equal to the size of each tester set and encoding set.
    pub size: usize,
    pub rounds: u64,
    pub control_fraction: f64,
    pub eve: EveStrategy,
    pub tester_sets: [TesterSet; 2],
    pub encodings: [UnitaryBasis; 2],
    pub rng: RngHandle,
}

impl ProtocolConfig {
    /// `𝔗_z = {0Z, 1Z}`, `𝔗_x = {+X, −X}`, encodings `{I, iσ_y}`.
    pub fn lm05(rounds: u64, control_fraction: f64, eve: EveStrategy, rng: RngHandle) -> Self {
        let rotation = build_named_basis("rotation", 2).expect("qubit basis");
        Self {
            d: 2,
            size: 2,
            rounds,
            control_fraction,
            eve,
            tester_sets: [fixtures::z_set(), fixtures::x_set()],
            encodings: [rotation.clone(), rotation],
            rng,
        }
    }

    /// Extended protocol on a qubit: `D = 2` uses `{I, iσ_y}` against
    /// `{(I∓iσ_y)/√2}`; `D = 4` uses Bell testers with the Pauli basis and its
    /// unbiased partner `{σ_j V}`.
    pub fn extended(size: usize, rounds: u64, eve: EveStrategy, rng: RngHandle) -> Result<Self> {
        let (sets, names) = match size {
            2 => ([fixtures::z_set(), fixtures::zx_set()], ["rotation", "hadamard-pair"]),
            4 => ([fixtures::bell_set(), fixtures::bellv_set()], ["pauli", "pauli-unbiased"]),
            _ => {
                return Err(Error::UnsupportedDimension { name: "extended preset".into(), d: size });
            }
        };
        Ok(Self {
            d: 2,
            size,
            rounds,
            control_fraction: 0.0,
            eve,
            tester_sets: sets,
            encodings: [build_named_basis(names[0], 2)?, build_named_basis(names[1], 2)?],
            rng,
        })
    }
}

/// JSON document form of a run: [`ProtocolConfig`] plus the protocol choice,
/// with testers and bases given by name or literal.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub protocol: Protocol,
    pub d: usize,
    #[serde(rename = "D")]
    pub size: usize,
    pub rounds: u64,
    #[serde(default)]
    pub control_fraction: f64,
    #[serde(default)]
    pub eve: EveStrategy,
    pub tester_sets: [Vec<TesterSpec>; 2],
    pub encodings: [BasisSpec; 2],
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
}

impl ConfigDoc {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn into_config(self) -> Result<(Protocol, ProtocolConfig)> {
        let set = |specs: &[TesterSpec]| -> Result<TesterSet> {
            TesterSet::new(specs.iter().map(TesterSpec::resolve).collect::<Result<_>>()?)
        };
        let cfg = ProtocolConfig {
            d: self.d,
            size: self.size,
            rounds: self.rounds,
            control_fraction: self.control_fraction,
            eve: self.eve,
            tester_sets: [set(&self.tester_sets[0])?, set(&self.tester_sets[1])?],
            encodings: [self.encodings[0].resolve(self.d)?, self.encodings[1].resolve(self.d)?],
            rng: RngHandle::with_stream(self.seed, self.stream),
        };
        Ok((self.protocol, cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eve_json_forms() {
        let cases = [
            (r#"{"kind":"none"}"#, EveStrategy::None),
            (r#"{"kind":"qmm"}"#, EveStrategy::Qmm { probe: ProbePolicy::Fixed { set: 0, tester: 0 } }),
            (r#"{"kind":"qmm","probe":{"policy":"random"}}"#, EveStrategy::Qmm { probe: ProbePolicy::Random }),
            (r#"{"kind":"intercept-resend"}"#, EveStrategy::InterceptResend),
        ];
        for (json, want) in cases {
            assert_eq!(serde_json::from_str::<EveStrategy>(json).unwrap(), want, "{json}");
        }
    }

    #[test]
    fn doc_with_names() {
        let doc = ConfigDoc::from_json(
            r#"{"protocol":"extended","d":2,"D":4,"rounds":10,
                "eve":{"kind":"qmm","probe":{"policy":"fixed","set":1,"tester":2}},
                "tester_sets":[["bell:0","bell:1","bell:2","bell:3"],["bellv:0","bellv:1","bellv:2","bellv:3"]],
                "encodings":["pauli","pauli-unbiased"],"seed":3}"#,
        )
        .unwrap();
        let (protocol, cfg) = doc.into_config().unwrap();
        assert_eq!(protocol, Protocol::Extended);
        assert_eq!(cfg.tester_sets[1].len(), 4);
        assert_eq!(cfg.rng, RngHandle::new(3));
    }

    #[test]
    fn doc_rejects_unknown_fields_and_names() {
        assert!(ConfigDoc::from_json(r#"{"protocol":"lm05","bogus":1}"#).is_err());
        let doc = ConfigDoc::from_json(
            r#"{"protocol":"lm05","d":2,"D":2,"rounds":1,
                "tester_sets":[["0Z","1Z"],["+X","nope"]],"encodings":["rotation","rotation"]}"#,
        )
        .unwrap();
        assert!(matches!(doc.into_config(), Err(Error::UnknownName(_))));
    }

    #[test]
    fn extended_preset_sizes() {
        assert!(ProtocolConfig::extended(2, 1, EveStrategy::None, RngHandle::new(0)).is_ok());
        assert!(ProtocolConfig::extended(3, 1, EveStrategy::None, RngHandle::new(0)).is_err());
    }
}
