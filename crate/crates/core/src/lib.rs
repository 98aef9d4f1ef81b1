//! Discrete homotopy of finite uniform models.
//!
//! Builds Rips complexes of point sets at a ladder of scales, decides whether
//! two chains are homotopic relative to their endpoints (returning either a
//! replayable move sequence or a cohomological obstruction), and assembles the
//! derived uniform structures on spaces of chain classes.

pub mod error;
pub mod exactnum;
pub mod homology;
pub mod io;
pub mod audits;
pub mod chains;
pub mod derived;
pub mod paperlab;
pub mod rips;
pub mod space;
mod search;

pub use error::{Error, Result};
pub use exactnum::QuadRat;
pub use space::UniformModel;
