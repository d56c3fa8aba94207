//! Abstract 2-dimensional cell complexes, exact cellular homology over Z and
//! Z_d, and qudit CSS code extraction from cellulations.

pub mod cell;
pub mod chain;
pub mod homology;
pub mod matrix;

pub use homology::{h0_components, homology_mod_oracle, homology_z, logical_space, HomologyDecomposition, HomologyError, LogicalSpace, OracleDecomposition};
pub use chain::{ChainComplex, ChainError, ModChainComplex};
pub use cell::{builtin, lift_classical, BoundaryCircle, CellComplex, CellError, Edge, Face, GluingSpec, OrientedCellRef, Sign};
pub use matrix::{IntMatrix, LinAlgError, ModMatrix, SmithForm};
pub use matrix::{hermite_form, image_basis, kernel_basis, reduce_mod, smith_form, solve_in_lattice};
