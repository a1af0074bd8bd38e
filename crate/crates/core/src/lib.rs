//! Dihedral quandle colorings and cocycle invariants of closed braids, the
//! invariant multisets of torus-covering surface knots `S_m(b, Δ^n)`, and the
//! unknotting number / triple point cancelling number bounds built on them.
//!
//! All arithmetic is exact: residues mod p, mod p² where a Fermat quotient is
//! needed, and arbitrary-precision counts in multisets.

pub mod bounds;
pub mod braid;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod modp;
pub mod multiset;
pub mod oracle;
pub mod quandle;
pub mod toruscover;

pub use bounds::{bounds_report, BoundRule, BoundsReport, MinimalSupport, NuVector, QuadraticForm};
pub use braid::{full_twist, BraidWord, Letter, PowerBlockWord, Sign};
pub use cocycle::{shadow_invariant, shadow_multiset, theta, two_cocycle_invariant};
pub use error::{Error, Result};
pub use modp::{MatrixModP, Prime, Residue};
pub use multiset::InvariantMultiset;
pub use quandle::{action_matrix, coloring_space, ColoringSpace, DihedralQuandle};
pub use toruscover::{
    phi_direct, phi_power_block, phi_simplified, BasisBraid, ExponentMode, TorusCoveringKnot,
};
