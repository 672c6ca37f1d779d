//! Permutation polynomials of F_{q^n} built from linearized decompositions
//! P(x) = f(L_g(x)) + k(L_g(x))·L_h(x), together with complete-permutation
//! variants, explicit inverses, and exhaustive brute-force verification.
//!
//! The crate works at desk scale: every criterion is backed by an
//! enumeration oracle over fields of size at most the configured bound
//! (65536 by default).

mod dense;

pub mod cyclo_factor;
pub mod error;
pub mod field_tower;
pub mod linearized;
pub mod oracle;
pub mod polyring;
pub mod pp_engine;
pub mod serial;

pub use error::{Error, Result};
pub use field_tower::{Elem, FieldTower, Level, DEFAULT_ENUM_BOUND};
pub use polyring::Poly;
