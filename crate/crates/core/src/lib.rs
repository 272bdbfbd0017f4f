//! Matchings under weak preferences, viewed as an election.
//!
//! Every matching of a roommates instance is a candidate and every vertex is
//! a voter. This crate provides the pieces needed to reason about that
//! election exactly on small instances and approximately on larger ones:
//!
//! * [`model`]: instances with tiered (weak) rankings and matchings.
//! * [`election`]: per-vertex votes, head-to-head margins, blocking pairs.
//! * [`oracle`]: exhaustive enumeration, Copeland scores, popularity tests
//!   and uniform marginals.
//! * [`sampler`]: a lazy add/remove/slide Markov chain over matchings.
//! * [`fpras`]: the two-sample tournament for almost weak Copeland winners.
//! * [`weighted`]: weighted Copeland winners through maximum-weight perfect
//!   matching in the self-loop augmented graph, and LP dual certificates for
//!   popularity.
//! * [`reduction`]: the VERTEX COVER gadget reduction with constructive
//!   verifiers for its gadget-level claims.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, reports and
//! the command-line front end live in the `popmatch` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod election;
pub mod error;
pub mod fpras;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod reduction;
pub mod sampler;
pub mod weighted;

pub use error::Error;
pub use model::{Instance, Matching, Vertex};
pub use rational::Rational;
