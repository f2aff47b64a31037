//! Exact integer-lattice computations for double covers `f: S -> T` of a
//! rational surface `T` by a K3 surface `S` with anti-symplectic involution.
//!
//! The crate decides, for a divisor class `C` on `T` and a multiplier `n`,
//! whether the numerical checklist certifying the relative Prym variety of
//! `f^*(nC)` as an irreducible symplectic variety is satisfied, and it
//! reproduces the supporting lattice computations (Smith normal forms,
//! discriminant groups, (-1)-curve enumerations, Reider-type searches,
//! monodromy of the anti-invariant homology of the covering curve).
//!
//! All arithmetic is exact: 128-bit integers with checked operations, and
//! exact rationals where denominators appear. No floating point anywhere.

pub mod ample;
pub mod catalog;
pub mod effective;
pub mod error;
pub mod homology;
pub mod lattice;
pub mod pipeline;
pub mod surface;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
