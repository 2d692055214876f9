//! Exact-arithmetic models of tame inertia acting on the torsion points and
//! Tate modules of abelian varieties.
//!
//! A topological generator of tame inertia is represented by a single
//! quasi-unipotent symplectic integer matrix `tau` acting on `Z^{2d}`. Every
//! reduction criterion is then a finite, exact computation on that matrix:
//!
//! * [`linalg`]: integer and residue-ring matrices, Smith and Howell forms,
//!   characteristic polynomials, exterior powers.
//! * [`torsion`]: the level-`n` torsion module with its alternating pairing,
//!   subgroups in canonical form, orthogonal complements, Lagrangians.
//! * [`cyclotomic`]: arithmetic in `Z[zeta_N]`, the exceptional moduli sets
//!   `N(k)` and the degree function `R`.
//! * [`inertia`]: validation of generators and the semistability criteria.
//! * [`neron`]: abelian/unipotent ranks and component groups.
//! * [`cohomology`]: exterior powers of the first cohomology and their
//!   vanishing conditions.
//! * [`harness`]: catalog, random conjugation, scenario files, reports and
//!   the property-suite driver.

pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod harness;
pub mod inertia;
pub mod linalg;
pub mod neron;
pub mod poly;
pub mod torsion;

pub use error::{Error, Result};
pub use inertia::{classify, InertiaGenerator};
pub use linalg::{IntMatrix, ModMatrix};
pub use torsion::{Polarization, Subgroup, TorsionModule};
