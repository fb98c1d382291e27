//! Torsion subcomplex reduction for groups acting on cell complexes, and the
//! homological invariants read off from reduced complexes: mod-ℓ Poincaré
//! series of Bianchi groups, Bredon homology with representation-ring
//! coefficients, equivariant K-homology and Chen–Ruan cohomology dimensions.

pub mod bredon;
pub mod complexes;
pub mod error;
pub mod groups;
mod linalg;
pub mod reduction;
pub mod series;

pub use bredon::{AbelianGroup, ChainComplex, IntMatrix};
pub use complexes::{ComponentType, Incidence, OrbitCell, OrbitComplex};
pub use error::{Error, Result};
pub use groups::{FiniteGroup, GroupTag, Perm};
pub use reduction::{ReductionLog, ReductionMove};
pub use series::{RationalSeries, SubgroupCensus};
