//! Exact symbolic computation for θ-deformations of torus-graded *-algebras
//! and compact matrix quantum groups.
//!
//! Elements live on sorted words of the undeformed coordinate algebra and
//! the deformed product multiplies by the bicharacter `χ(r,s) = e^{πi r·θs}`.
//! On top of that kernel sit the Hopf structure of `SU(n)_θ`, the catalog of
//! tori, Connes–Landi spheres and quantum groups, and the coaction machinery
//! (extension criterion, fixed points, presentation matching).

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod coaction;
pub mod error;
pub mod hopf;
pub mod phase;

pub use error::{Error, Result};
