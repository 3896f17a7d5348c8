//! Numerics for Eisenstein series on hyperbolic 3-space under the Bianchi
//! groups `PSL(2, O_K)`, their Kronecker limit formula, the associated eta
//! analogue and its Dedekind-sum defect, and elliptic Dedekind sums.

pub mod cosets;
pub mod eisenstein;
pub mod elliptic;
pub mod error;
pub mod hspace;
pub mod lattice;
pub mod limit;
pub mod numfield;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use hspace::{GMatrix, HPoint, IntMatrix};
pub use numfield::{AlgInt, ImagQuadField};
