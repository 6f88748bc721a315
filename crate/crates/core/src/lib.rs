//! Exact-arithmetic engine for deciding (non-)maximality of the sequential
//! topological complexity `TC_s` of closed manifolds with abelian fundamental
//! group.
//!
//! The engine computes chain-level obstructions over small free resolutions
//! of cyclic groups, decides whether the resulting classes vanish by exact
//! integer linear algebra, and combines the verdicts with closed-form
//! cohomological lower bounds into `TC_s` intervals or exact values.

pub mod binary;
pub mod chain;
pub mod error;
pub mod models;
pub mod nonorient;
pub mod orientable;
pub mod zcl;

pub use chain::{BasisLabel, ChainComplex, ChainElement, ChainMap};
pub use error::{Error, Result};
pub use models::{GroupSpec, SlotTwist, Twist};
