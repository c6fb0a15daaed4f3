//! RAMESSES: a rank-metric one-way encryption scheme built on Gabidulin codes.
//!
//! The crate provides the full stack needed to run the scheme and to reason
//! about its parameters:
//!
//! * [`linalg`] — dense linear algebra over GF(2) (bit-packed matrices, RREF,
//!   solvers, structured samplers);
//! * [`field`] — arithmetic in GF(2^n) for arbitrary n up to 256, with the
//!   extension maps between vectors over the big field and bit matrices;
//! * [`skew`] — the skew polynomial ring F_q[X;θ] (θ = squaring): evaluation,
//!   interpolation, annihilators and division;
//! * [`gabidulin`] — Gabidulin codes with a bounded-distance decoder;
//! * [`scheme`] — key generation, encryption and decryption;
//! * [`codec`] — the `RMS1` on-disk format for keys, ciphertexts, plaintexts;
//! * [`estimator`] — parameter validation and attack-cost estimation;
//! * [`sim`] — a Monte Carlo harness for the decryption-failure rate.
//!
//! With the default `parallel` feature the Monte Carlo harness shards trials
//! across threads with rayon; without it the same entry points run
//! sequentially and produce identical results.
//!
//! This is research code. It is not constant-time and has not been audited;
//! do not use it to protect real data.

pub mod codec;
pub mod estimator;
pub mod field;
pub mod gabidulin;
pub mod linalg;
pub mod scheme;
pub mod sim;
pub mod skew;

pub use field::{FieldContext, FieldElement};
pub use gabidulin::GabidulinCode;
pub use linalg::{BitMatrix, BitVec};
pub use scheme::{Ciphertext, ParameterSet, Plaintext, PrivateKey, PublicKey, Scheme};
pub use skew::SkewPoly;
