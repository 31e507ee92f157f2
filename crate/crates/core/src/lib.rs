//! Binary-dihedral covariant spin codes and the permutationally invariant
//! multiqubit codes obtained from them through the Dicke state mapping.
//!
//! The crate is organised bottom-up:
//!
//! - [`angular`]: exact Clebsch-Gordan coefficients, spherical tensor
//!   operators and the Wigner-D action of the named SU(2) gates.
//! - [`bindihedral`]: the binary dihedral groups `BD_{2b}`, their
//!   2-dimensional symplectic irreps, support lattices and multiplicities.
//! - [`klengine`]: Knill-Laflamme checks for spin codes, the reduced
//!   condition set for real covariant codes and condition counting.
//! - [`families`]: closed-form code families and the predicted-length atlas.
//! - [`searcher`]: numerical search for covariant codes by solving the
//!   reduced quadratic system on the unit sphere.
//! - [`dickemap`]: the Dicke bootstrap, dense and symmetric multiqubit
//!   verifiers and transversal gate certification.
//! - [`cli`]: the `bdcodes` command-line driver.

pub mod angular;
pub mod bindihedral;
pub mod cli;
pub mod dickemap;
mod error;
pub mod families;
pub mod format;
mod halfint;
pub mod klengine;
pub mod searcher;

pub use error::{Error, Result};
pub use halfint::HalfInt;

/// Default numerical threshold used by searches and verifiers.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
