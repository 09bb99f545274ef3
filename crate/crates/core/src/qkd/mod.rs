//! Two-way QKD simulation with testers.
//!
//! Bob sends the input of a tester drawn from one of two complete tester
//! sets; Alice either encodes a digit with a unitary or, in control rounds,
//! measures the probe in the input basis of a random tester set. Bob measures
//! the returned probe with his tester and decodes the digit from the
//! deterministic outcome. In the extended protocol Alice also picks one of two
//! mutually unbiased encoding sets and announces it; rounds where it differs
//! from Bob's tester set are discarded.
//!
//! Each round draws from its own stream `rng.derive(round)` in a fixed order:
//! Bob's set and tester, Alice's mode, set and digit, the adversary's set,
//! tester and fallback guess, then measurement outcomes.

mod config;
mod sim;

pub use config::{ConfigDoc, EveStrategy, ProbePolicy, Protocol, ProtocolConfig};
pub use sim::{
    aggregate, analytic_eve_accuracy, run_extended, run_lm05, simulate, Mode, ProtocolStats, Rate,
    RoundRecord,
};
