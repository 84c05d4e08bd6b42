//! Exact structure theory for finite commutative ring extensions `R ⊆ S`.
//!
//! Everything here is pure and allocation-only, so the crate builds without
//! `std`. Rings are described by additive invariants plus multiplication
//! structure constants, subrings and ideals are explicit element sets, and
//! the lattice `[R,S]` of intermediate rings is enumerated exhaustively.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod bitset;
pub mod diag;
pub mod extension;
pub mod finring;
pub mod lattice;
pub mod verify;

pub use bitset::ElemSet;
pub use extension::{
    CanonicalDecomposition, Extension, ExtensionError, ExtensionLattice, MinimalType,
    PredicateReport, PropertyFlags, SupportProfile,
};
pub use finring::{Elem, FiniteRing, Ideal, RingError, DEFAULT_CAP};
pub use lattice::{FiniteLattice, LatticeError, LatticeVerdict, Sublattice};
