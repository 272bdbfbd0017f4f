use alloc::string::String;
use core::fmt;

use crate::model::Vertex;

/// Everything that can go wrong in the core crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// `u` ranks `v` but `v` does not rank `u`.
    AsymmetricAcceptability { u: String, v: String },
    /// A vertex lists itself as a neighbour.
    SelfRanking { vertex: String },
    /// A vertex lists the same neighbour twice.
    DuplicateNeighbor { vertex: String, neighbor: String },
    /// Two vertices share a name.
    DuplicateVertex { name: String },
    /// A neighbour index or name that does not exist.
    UnknownVertex { name: String },
    /// Tier values must be positive.
    InvalidTier { vertex: String, neighbor: String },
    /// A vertex is not an acceptable partner (or the self option) for `voter`.
    NotAcceptable { voter: Vertex, candidate: Vertex },
    /// The matching does not belong to the instance.
    InvalidMatching { reason: &'static str },
    /// Enumeration would exceed the configured matching budget.
    BudgetExceeded { budget: u64 },
    /// A parameter is out of range.
    InvalidParameter { name: &'static str, reason: &'static str },
    /// Weights or marginals do not cover the instance.
    MissingCoordinate { what: &'static str },
    /// A dual certificate does not assign a value to every vertex.
    CertificateIncomplete { expected: usize, found: usize },
    /// The vertex cover instance is malformed.
    InvalidCover { reason: &'static str },
    /// A state assignment leaves an H-edge with both endpoint gadgets red.
    UncoveredEdge { i: usize, j: usize },
    /// A vertex gadget is in neither the red nor the blue configuration.
    NonCanonicalGadget { vertex: usize },
    /// The matching uses an edge between a vertex gadget and an edge gadget.
    InterGadgetEdge { u: String, v: String },
    /// The matching does not satisfy a verifier's precondition.
    Precondition { reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AsymmetricAcceptability { u, v } => {
                write!(f, "{u} ranks {v} but {v} does not rank {u}")
            }
            Error::SelfRanking { vertex } => write!(f, "{vertex} ranks itself"),
            Error::DuplicateNeighbor { vertex, neighbor } => {
                write!(f, "{vertex} ranks {neighbor} more than once")
            }
            Error::DuplicateVertex { name } => write!(f, "duplicate vertex {name}"),
            Error::UnknownVertex { name } => write!(f, "unknown vertex {name}"),
            Error::InvalidTier { vertex, neighbor } => {
                write!(f, "{vertex} gives {neighbor} a non-positive tier")
            }
            Error::NotAcceptable { voter, candidate } => {
                write!(f, "vertex {candidate} is not acceptable to vertex {voter}")
            }
            Error::InvalidMatching { reason } => write!(f, "invalid matching: {reason}"),
            Error::BudgetExceeded { budget } => {
                write!(f, "instance has more than {budget} matchings")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::MissingCoordinate { what } => write!(f, "missing {what}"),
            Error::CertificateIncomplete { expected, found } => {
                write!(f, "certificate has {found} values, expected {expected}")
            }
            Error::InvalidCover { reason } => write!(f, "invalid cover instance: {reason}"),
            Error::UncoveredEdge { i, j } => {
                write!(f, "edge ({i},{j}) has both vertex gadgets in red state")
            }
            Error::NonCanonicalGadget { vertex } => {
                write!(f, "vertex gadget {vertex} is neither red nor blue")
            }
            Error::InterGadgetEdge { u, v } => write!(f, "inter-gadget edge ({u},{v}) is matched"),
            Error::Precondition { reason } => write!(f, "precondition violated: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
