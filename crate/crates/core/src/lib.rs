//! Exact integral cohomology of complex abelian varieties.
//!
//! Classes live in a sparse exterior algebra over ℤ; varieties carry their
//! polarization and an optional rational complex structure. On top of that
//! sit the cohomological Fourier transform, Pontryagin products with exact
//! divided powers, Hodge lattices with Smith-form certificates, and a suite
//! of named identity checks.

pub mod error;
pub mod exterior;
pub mod formats;
pub mod fourier;
pub mod hodge;
pub mod linalg;
pub mod suite;
pub mod variety;

pub use error::{Error, Result};
pub use exterior::{Multivector, Orientation};
pub use fourier::{GroupLaw, NamedClass, PoincareContext};
pub use hodge::{HodgeLattice, HodgeParameter};
pub use linalg::{Int, IntMatrix, Rat, RatMatrix};
pub use variety::{AbelianVariety, Homomorphism, ProductStructure};
pub use suite::{run_check, run_suite, CheckDescriptor, CheckParams, CheckResult, Conventions, ParamRecord, Status, SuiteConfig, VerificationReport, REGISTRY};
