//! Sparse network families and the queries the protocols need from them.

mod expander;
mod hypercube;
pub mod spectral;

pub use expander::{build_expander_stack, expansion_check, ExpanderStack, SubnetExpansion};
pub use hypercube::{build_hypercube, CliqueId, HypercubeTopology};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::NodeId;

/// Hard cap on constructed node counts; `s^L` past this is rejected.
pub const MAX_NODES: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("hypercube base must be at least 4 (kernels need s >= 3f+1 with f >= 1), got {0}")]
    BaseTooSmall(u32),
    #[error("hypercube needs at least one dimension")]
    NoDimensions,
    #[error("requested size {0} exceeds the {MAX_NODES}-node budget")]
    SizeOverflow(u128),
    #[error("contraction factor theta[{index}] = {theta} must lie in (0,1)")]
    BadTheta { index: usize, theta: f64 },
    #[error("s[{index}] = s[{prev}]/theta is not an integer ({value})")]
    NonIntegerLayerSize { index: usize, prev: usize, value: f64 },
    #[error("n = {n} is not divisible by layer size s[{index}] = {s}")]
    NonDivisible { n: usize, index: usize, s: usize },
    #[error("top layer size {top} does not reach n = {n}")]
    TopLayerMismatch { top: usize, n: usize },
    #[error("degree list must have one entry per layer ({layers}), got {got}")]
    DegreeCountMismatch { layers: usize, got: usize },
    #[error("degree d[{index}] = {d} infeasible for subnetwork size {s} (need 1 <= d < s, d*s even)")]
    InfeasibleDegree { index: usize, d: usize, s: usize },
    #[error("exhausted {attempts} regeneration attempts for a connected {d}-regular graph on {s} nodes")]
    ExhaustedAttempts { attempts: u32, d: usize, s: usize },
    #[error("dimension index {k} out of range 1..={max}")]
    BadDimension { k: u32, max: u32 },
    #[error("layer index {0} out of range")]
    BadLayer(usize),
    #[error("invalid node label {0:?}")]
    BadLabel(String),
}

/// Read access to an undirected network, as the execution engine sees it.
///
/// Implementations derive adjacency; nothing per-edge is ever stored for the
/// hypercube. Topologies are immutable after construction and safe to share
/// across concurrent executions.
pub trait Network {
    fn node_count(&self) -> usize;
    fn adjacent(&self, a: NodeId, b: NodeId) -> bool;
    fn degree(&self, v: NodeId) -> usize;
}

/// Serializable description of a topology. Adjacency is always re-derived
/// from these parameters, never written out.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologySpec {
    Hypercube {
        s: u32,
        #[serde(rename = "L")]
        dims: u32,
        n: usize,
    },
    ExpanderStack {
        s0: usize,
        theta: Vec<f64>,
        d: Vec<usize>,
        seed: u64,
        n: usize,
    },
}

impl TopologySpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("topology spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
