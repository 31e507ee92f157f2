//! Angular-momentum kernels.
//!
//! Matrices on spin `j` are indexed by `m` descending from `+j`, so index
//! `i` corresponds to `m = j - i`. This matches the Dicke weight `w = j - m`.

mod cg;
mod gates;
mod tensor;

pub use cg::{cg, SignedSqrtRational};
pub use gates::{Gate, GateAction};
pub use tensor::{decompose_product, ProductDecomposition, SphericalTensor};

use crate::HalfInt;

/// Matrix index of magnetic number `m` inside spin `j`.
pub fn index_of(j: HalfInt, m: HalfInt) -> usize {
    debug_assert!(m.abs() <= j && (j - m).is_integral());
    ((j.twice() - m.twice()) / 2) as usize
}

/// Magnetic number at matrix index `i` inside spin `j`.
pub fn m_at(j: HalfInt, i: usize) -> HalfInt {
    HalfInt::from_twice(j.twice() - 2 * i as i64)
}
