//! Deterministic synchronous-round simulation of multi-scale Byzantine
//! protocols on sparse networks, plus exact and approximate computation of
//! the system assumption coverage that backs them.
//!
//! The crate is organized around the moving parts of such systems:
//!
//! * [`topology`] — the two sparse network families: base-`s` hypercubes and
//!   multi-layer expander stacks, with spectral quality checks.
//! * [`kernels`] — the small-scale building blocks run inside one clique or
//!   subnetwork: immediate BA, differential BA, one-round initiation, and the
//!   majority relay.
//! * [`adversary`] — multi-scale corruption scopes, placement validation and
//!   sampling, and the scripted Byzantine strategies.
//! * [`engine`] — the lock-step round executor: message delivery, strategy
//!   dispatch, metrics, and traces. Everything is deterministic given a seed.
//! * [`protocols`] — the composed protocols: hypercube broadcast, median
//!   agreement, and incomplete secure communication on the expander stack.
//! * [`reliability`] — exact binomial-tail arithmetic, the geometric ratio
//!   bound, Stirling-form approximations, and composite reliabilities.

pub mod adversary;
pub mod engine;
pub mod kernels;
pub mod protocols;
pub mod reliability;
pub mod topology;

/// Node identifier: an index into the topology's node set.
pub type NodeId = u32;

/// Protocol value domain: bounded integers with a designated default standing
/// in for "unset". Agreement decisions, broadcast payloads, and relay votes
/// all live here; the median step needs the total order.
pub type Value = i64;

/// Replaces an absent or undefined input value.
pub const DEFAULT_VALUE: Value = 0;

/// Sentinel carried in proposal-round messages when a node has nothing to
/// propose. Kept out of the regular value range so scripts can forge
/// proposals where an honest node would abstain.
pub const NO_PROPOSAL: Value = Value::MIN;
