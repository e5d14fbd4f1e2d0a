//! Holographic stabilizer codes built from block-perfect seed tensors tiled
//! on hyperbolic {4,n} geometries, together with erasure decoders and
//! Monte-Carlo threshold estimation.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf2`]: bit-packed GF(2) vectors, matrices, rank and linear solving
//! - [`pauli`]: symplectic Pauli strings and the two seed codes
//! - [`tensor`]: perfection / block-perfection checks with a dense oracle
//! - [`tiling`]: the {4,n} hyperbolic tile graph to a given radius
//! - [`code`]: operator pushing and holographic code synthesis
//! - [`erasure`]: optimal, greedy and brute-force erasure deciders
//! - [`sim`]: recovery-probability curves, binomial mixing, thresholds

pub mod code;
pub mod erasure;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod sim;
pub mod tensor;
pub mod tiling;



pub use code::{CodeBundle, HolographicCode};
pub use erasure::{ErasurePattern, LogicalCriterion};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use pauli::{PauliString, SeedCode, SeedKind};
pub use sim::{DecoderKind, RecoveryCurve, SimulationConfig};
pub use tiling::Tiling;
