//! Exact symbolic engine for the completed tensor algebra of surface homology:
//! symplectic Magnus expansions, the loop invariant `L`, and the action of
//! Dehn twists expressed through it.
//!
//! All arithmetic is over the rationals and every comparison is exact.

pub mod certificate;
pub mod cyclic;
pub mod derivation;
pub mod display;
pub mod error;
pub mod expansion;
pub mod free_group;
pub mod johnson;
pub mod lie;
pub mod linalg;
pub mod omega;
pub mod parallel;
pub mod random;
pub mod rational;
pub mod suite;
pub mod tensor;

pub use certificate::{Certificate, Status};
pub use derivation::{exp_derivation, Derivation};
pub use error::{Error, Result};
pub use expansion::{build_symplectic, connecting_automorphism, Expansion, ExpansionKind};
pub use free_group::{Curve, FreeAutomorphism, GroupWord};
pub use rational::Rational;
pub use tensor::{AlgebraContext, Tensor};
