//! Integral and directed homology of elementary Petri nets.
//!
//! The state space of a net is turned into the semicubical set `Q(S, E, I)`,
//! whose chain complexes are reduced exactly over the integers with a Smith
//! normal form.

pub mod cli;
pub mod cubical;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod net;
pub mod netfile;
pub mod pipelines;
pub mod snf;

pub use error::{Error, ParseError, Result};
