//! Analysis and simulation of fountain-code based caching for satellite
//! backhaul networks.
//!
//! A library of cache-enabled hubs is prefilled with coded symbols of each
//! file; users connected to one or more hubs decode from the cached symbols
//! and any shortfall is served over the satellite backhaul link. This crate
//! provides:
//!
//! - [`gf`]: arithmetic over GF(2^m), 1 ≤ m ≤ 8
//! - [`lrfc`]: a linear random fountain code (encoder, incremental decoder)
//!   and its closed-form failure/overhead analytics
//! - [`popularity`]: Zipf file-request popularity
//! - [`topology`]: hub-connectivity distributions, explicit or derived from
//!   a square-grid coverage geometry
//! - [`rate`]: exact and bounded evaluation of the average backhaul
//!   transmission rate, plus an MDS-code baseline
//! - [`placement`]: integer cache-placement optimization (greedy, provably
//!   optimal for the separable convex bound objective) with a brute-force
//!   oracle
//! - [`sim`]: a reproducible Monte-Carlo delivery-phase simulator built on
//!   real coded symbols
//!
//! The crate is `no_std` (with `alloc`); IO, configuration and the CLI live
//! in the companion `satcache` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod gf;
pub mod lrfc;
pub mod placement;
pub mod popularity;
pub mod rate;
pub mod sim;
pub mod topology;

use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Extension degree outside 1..=8.
    DegreeOutOfRange(u32),
    /// Multiplicative inverse of zero requested.
    ZeroInverse,
    /// A vector or matrix dimension does not match the expected size.
    DimensionMismatch { expected: usize, got: usize },
    /// Decoder asked to solve with rank < k.
    RankDeficient { rank: usize, k: usize },
    /// A probability distribution failed validation.
    InvalidDistribution(&'static str),
    /// A scalar parameter failed validation.
    InvalidParameter(&'static str),
    /// Cache budget cannot be met under the per-file cap.
    InfeasibleBudget { m_files: u32, n: usize },
    /// Brute-force enumeration refused: instance too large.
    SearchSpaceTooLarge,
    /// Connectivity distribution has positive mass at h = 0; condition on
    /// H >= 1 first (see `ConnectivityDist::condition_on_connected`).
    UnconnectedMass,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeOutOfRange(m) => {
                write!(f, "extension degree {m} outside supported range 1..=8")
            }
            Error::ZeroInverse => write!(f, "multiplicative inverse of zero"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::RankDeficient { rank, k } => {
                write!(f, "decoding failure: rank {rank} < k = {k}")
            }
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InfeasibleBudget { m_files, n } => {
                write!(f, "infeasible budget: M = {m_files} exceeds library size n = {n}")
            }
            Error::SearchSpaceTooLarge => write!(f, "brute-force search space too large"),
            Error::UnconnectedMass => {
                write!(f, "connectivity distribution has mass at h = 0")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
