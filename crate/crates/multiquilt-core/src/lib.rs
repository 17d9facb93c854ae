//! Combinatorics and analysis of quilted disks.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`trees`]: stable colored rooted ribbon trees, their enumeration and surgery;
//! * [`moduli`]: metric trees, admissibility relations, domain gluing and the face poset of the
//!   multiplihedra;
//! * [`surfaces`]: strip-thickened quilted surfaces built from metric trees;
//! * [`ainfty`]: A∞ relation terms, their boundary-strata labels and exact relation checkers;
//! * [`numerics`]: a flat Floer model (target ℂ, two lines through the origin) with pregluing,
//!   Newton gluing and the accompanying estimates.
#![no_std]
// `!(x >= y)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod ainfty;
pub mod moduli;
pub mod numerics;
pub mod surfaces;
pub mod trees;
