//! Finite-truncation verification engine for equivariant real spectral
//! triples on the two-dimensional noncommutative torus.
//!
//! The crate builds every operator of the construction on a square window of
//! the doubled eigenbasis `e_{μ,ν,±}`, evaluates each spectral-triple axiom as
//! an interior-restricted residual, computes Dirac spectra for the four spin
//! structures and decides (in)equivalence of the four real structures.
//!
//! Module map:
//!
//! * [`lattice`] - truncated basis, flat indexing, interior masks
//! * [`opalg`] - dense complex linear and antilinear operators
//! * [`triple`] - representation, grading, real structure and Dirac builders
//! * [`axioms`] - residual checks and the aggregated [`axioms::AxiomReport`]
//! * [`spectra`] - spectrum tables, eigensolver oracle, resolvent and
//!   Hochschild diagnostics
//! * [`classify`] - intertwiner search between real structures

pub mod axioms;
pub mod classify;
mod error;
pub mod lattice;
pub mod opalg;
pub mod spectra;
pub mod triple;

pub use error::{Error, Result};
pub use lattice::{BasisIndexMap, InteriorMask, Offset, SpinStructure, Truncation};
pub use opalg::{AntilinearOp, LinearOp, PhaseAngle, C64};
pub use triple::{DiracCase, DiracParams, RealStructureParams, SpectralTripleBundle, TorusPolynomial};

/// Residual tolerance used when nothing else is requested.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
