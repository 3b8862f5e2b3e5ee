//! Exact computations for the A_r T-system.

pub mod error;
pub mod hardparticle;
pub mod lattice;
pub mod laurent;
pub mod opseries;
pub mod pathmodel;
pub mod quiver;
pub mod report;
pub mod weights;
pub mod wronskian;

pub use error::{Error, Result};
pub use lattice::{LatticeState, MotzkinPath, SeedSpec};
pub use laurent::{LaurentPoly, Monomial, Ring, SeedVar};
pub use report::Check;
