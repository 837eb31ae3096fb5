//! Certificateless threshold key issuing on a supersingular pairing curve.
//!
//! The crate has three layers:
//!
//! * number-theoretic foundations: prime fields and their quadratic
//!   extension ([`field`]), general Weierstrass curves with the short-form
//!   group law ([`curve`]), and a symmetric Tate pairing on the curve
//!   `y^2 = x^3 + x` ([`pairing`]);
//! * the keying scheme: pairing-verifiable Shamir sharing of the master key
//!   ([`sharing`]) and the blinded six-step private-key update protocol
//!   ([`keying`]);
//! * tooling: a deterministic multi-node simulator with replayable
//!   transcripts ([`simnet`]) and a benchmark harness with DES/IDEA/modexp
//!   baselines ([`bench`]).
//!
//! **This is a simulation and analysis artifact, not production
//! cryptography.** Nothing here is constant-time, parameters default to desk
//! scale, and simulator transcripts deliberately expose oracle data (master
//! key checks, unblinded shares) so runs can be audited offline.

pub mod bench;
pub mod curve;
pub mod field;
pub mod keying;
pub mod pairing;
pub mod sharing;
pub mod simnet;
