//! Exact deciders for strong cleanness and strong pi-regularity of square matrices over
//! commutative rings with finitely many idempotents.
//!
//! Rings are handled through their Pierce stalks (see [`ring`]); polynomial factorization
//! searches live in [`factor`], matrix arithmetic and brute-force oracles in [`matrix`]
//! and [`oracle`], theorem-level deciders in [`analysis`], and the `Z[sqrt(-5)]` example in
//! [`quad`].

pub mod analysis;
pub mod arith;
pub mod cert;
pub mod error;
pub mod factor;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use poly::Poly;
pub use ring::{Element, Ring, RingDescriptor};
