//! Base-`s` hypercube: `s^L` nodes labeled with `L`-digit base-`s` strings,
//! adjacent iff the labels differ in exactly one digit.
//!
//! Digit convention: dimension `k` is the `k`-th digit counted from the
//! right, so dimension 1 (the rightmost digit) is the innermost-clique digit.
//! The innermost clique of a node is the set of `s` nodes sharing its
//! leftmost `L-1` digits; node `a_L..a_2 x` sits at site `x` of the clique
//! labeled `a_L..a_2`.

use super::{Network, TopologyError, TopologySpec, MAX_NODES};
use crate::NodeId;

/// Index of an innermost clique: the node label with the dimension-1 digit
/// stripped, i.e. `node / s`.
pub type CliqueId = u32;

#[derive(Debug, Clone)]
pub struct HypercubeTopology {
    s: u32,
    dims: u32,
    n: usize,
}

/// Construct an `s`-base hypercube with `L` dimensions. Deterministic; the
/// adjacency is derived from labels on demand.
pub fn build_hypercube(s: u32, dims: u32) -> Result<HypercubeTopology, TopologyError> {
    if s < 4 {
        return Err(TopologyError::BaseTooSmall(s));
    }
    if dims == 0 {
        return Err(TopologyError::NoDimensions);
    }
    let mut n: u128 = 1;
    for _ in 0..dims {
        n *= s as u128;
        if n > MAX_NODES as u128 {
            return Err(TopologyError::SizeOverflow(n));
        }
    }
    Ok(HypercubeTopology {
        s,
        dims,
        n: n as usize,
    })
}

impl HypercubeTopology {
    pub fn base(&self) -> u32 {
        self.s
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Fault bound of the innermost-clique kernels: `floor(s/3)`.
    pub fn clique_fault_bound(&self) -> usize {
        (self.s / 3) as usize
    }

    /// Digit of `node` in dimension `k` (1-based from the right).
    pub fn digit(&self, node: NodeId, k: u32) -> u32 {
        debug_assert!(k >= 1 && k <= self.dims);
        (node / self.s.pow(k - 1)) % self.s
    }

    /// Replace the dimension-`k` digit of `node` with `digit`.
    pub fn with_digit(&self, node: NodeId, k: u32, digit: u32) -> NodeId {
        debug_assert!(digit < self.s);
        let stride = self.s.pow(k - 1);
        let old = self.digit(node, k);
        node - old * stride + digit * stride
    }

    /// `L`-digit label, leftmost digit = dimension `L`.
    pub fn label(&self, node: NodeId) -> String {
        (1..=self.dims)
            .rev()
            .map(|k| char::from_digit(self.digit(node, k), 36).expect("digit < 36"))
            .collect()
    }

    /// Parse an `L`-digit label (leading zeros may be omitted).
    pub fn parse_label(&self, label: &str) -> Result<NodeId, TopologyError> {
        let bad = || TopologyError::BadLabel(label.to_string());
        if label.is_empty() || label.len() > self.dims as usize {
            return Err(bad());
        }
        let mut node: u64 = 0;
        for ch in label.chars() {
            let digit = ch.to_digit(36).ok_or_else(bad)?;
            if digit >= self.s {
                return Err(bad());
            }
            node = node * self.s as u64 + digit as u64;
        }
        Ok(node as NodeId)
    }

    /// The `s-1` nodes differing from `node` only in dimension `k`.
    pub fn dimension_neighbors(&self, node: NodeId, k: u32) -> Result<Vec<NodeId>, TopologyError> {
        if k < 1 || k > self.dims {
            return Err(TopologyError::BadDimension { k, max: self.dims });
        }
        let own = self.digit(node, k);
        Ok((0..self.s)
            .filter(|&d| d != own)
            .map(|d| self.with_digit(node, k, d))
            .collect())
    }

    /// Closed variant: the full size-`s` set including `node` itself.
    pub fn closed_dimension_neighbors(
        &self,
        node: NodeId,
        k: u32,
    ) -> Result<Vec<NodeId>, TopologyError> {
        if k < 1 || k > self.dims {
            return Err(TopologyError::BadDimension { k, max: self.dims });
        }
        Ok((0..self.s).map(|d| self.with_digit(node, k, d)).collect())
    }

    /// Innermost clique containing `node`.
    pub fn clique_of(&self, node: NodeId) -> CliqueId {
        node / self.s
    }

    /// Members of a clique, ascending (site order: member at site `x` has
    /// dimension-1 digit `x`).
    pub fn clique_members(&self, clique: CliqueId) -> Vec<NodeId> {
        let base = clique * self.s;
        (base..base + self.s).collect()
    }

    pub fn clique_count(&self) -> usize {
        self.n / self.s as usize
    }

    /// Digit `j` (1-based from the right) of a clique label. Clique digit `j`
    /// corresponds to node dimension `j + 1`.
    pub fn clique_digit(&self, clique: CliqueId, j: u32) -> u32 {
        debug_assert!(j >= 1 && j < self.dims);
        (clique / self.s.pow(j - 1)) % self.s
    }

    pub fn clique_with_digit(&self, clique: CliqueId, j: u32, digit: u32) -> CliqueId {
        let stride = self.s.pow(j - 1);
        let old = self.clique_digit(clique, j);
        clique - old * stride + digit * stride
    }

    pub fn clique_label(&self, clique: CliqueId) -> String {
        if self.dims == 1 {
            return String::new();
        }
        (1..self.dims)
            .rev()
            .map(|j| char::from_digit(self.clique_digit(clique, j), 36).expect("digit < 36"))
            .collect()
    }

    /// Two cliques are adjacent iff their labels differ in exactly one digit;
    /// returns that digit index if so.
    pub fn cliques_adjacent(&self, a: CliqueId, b: CliqueId) -> Option<u32> {
        let mut differing = None;
        for j in 1..self.dims {
            if self.clique_digit(a, j) != self.clique_digit(b, j) {
                if differing.is_some() {
                    return None;
                }
                differing = Some(j);
            }
        }
        differing
    }
}

impl Network for HypercubeTopology {
    fn node_count(&self) -> usize {
        self.n
    }

    fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        if a == b {
            return false;
        }
        let mut differing = 0;
        for k in 1..=self.dims {
            if self.digit(a, k) != self.digit(b, k) {
                differing += 1;
                if differing > 1 {
                    return false;
                }
            }
        }
        differing == 1
    }

    fn degree(&self, _v: NodeId) -> usize {
        (self.s as usize - 1) * self.dims as usize
    }
}

impl HypercubeTopology {
    pub fn spec(&self) -> TopologySpec {
        TopologySpec::Hypercube {
            s: self.s,
            dims: self.dims,
            n: self.n,
        }
    }
}
