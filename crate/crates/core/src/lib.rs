//! Exact, desk-scale computation in the sequence spaces `h_{A,p}` generated
//! by adequate families of subsets of the positive integers.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: family membership and enumeration, the norm and
//! its minimal norming sets, the dual norm by exact-rational linear
//! programming, dual extreme points, slices and delta-/Daugavet-point
//! certificates, and polyhedrality classification.
//!
//! All `p = 1` computations are exact over arbitrary-precision rationals.
//! For `p > 1` the coordinate powers are evaluated in `f64`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dual;
pub mod error;
pub mod family;
pub mod lp;
pub mod norms;
pub mod num;
pub mod points;
pub mod polyhedral;
pub mod set;
pub mod vector;

#[cfg(test)]
mod testutil;

pub use dual::{Decomposition, DecompositionOptions, Sign, SignedIndicator};
pub use error::{Error, Result};
pub use family::{Budget, FamilyRep, MaximalScope, StarSize, ValidationReport, Violation, Window};
pub use norms::NormResult;
pub use num::{Exponent, Rational, Scalar};
pub use points::{Certificate, CertificateKind, DeltaWitness, HolderCertificate, Point, Slice};
pub use polyhedral::{IvWitness, PolyhedralityReport, Provenance, Verdict};
pub use set::FiniteSet;
pub use vector::{DualVector, FsVector, SparseVector};
