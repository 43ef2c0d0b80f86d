//! Untouchable sets in the Desarguesian projective plane PG(2,q).
//!
//! An untouchable set is a point set that no line meets in exactly one
//! point. This crate provides:
//!
//! - [`gf`]: exact GF(p^k) arithmetic with square roots and residue tests;
//! - [`plane`]: the incidence structure of PG(2,q) with canonical indexing;
//! - [`conics`]: quadratic forms, conic pencils, tangents and nuclei;
//! - [`constructions`]: untouchable sets of sizes 2q−2, 2q−1 and 2q+1 built
//!   from pairs of conics;
//! - [`verify`]: the line-intersection spectrum and the properties read off it;
//! - [`search`]: exhaustive backtracking for small planes;
//! - [`json`]: the point-set interchange format.

pub mod bitset;
pub mod conics;
pub mod constructions;
pub mod gf;
pub mod json;
pub mod plane;
pub mod search;
pub mod verify;

pub use conics::{Conic, ConicClass, ConicError, Pencil, PointClass, Quadratic};
pub use constructions::{ConstructionError, ConstructionResult, Family, Params};
pub use gf::{Elem, Field, FieldSpec, GfError};
pub use plane::{Plane, PlaneError, PointSet, ProjLine, ProjPoint};
pub use search::{Budget, SearchOptions, SearchOutcome, SearchStatus};
pub use verify::{CheckReport, SpectrumReport, Witness};
