//! Multi-layer expander stack: one physical node set acting as `L` logical
//! layers. Layer `l` partitions the nodes into `n / s_l` subnetworks of size
//! `s_l = s_{l-1} / theta_l`, each a generated `d_l`-regular connected graph.
//!
//! Generation uses a seeded pairing (configuration) model with swap repair of
//! self-loops and duplicate edges, regenerating with a derived seed until the
//! graph comes out connected; `d = s - 1` short-circuits to the complete
//! graph. Partitions are contiguous index blocks, so every layer-(l-1)
//! subnetwork sits inside exactly one layer-l subnetwork.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use super::spectral::{adjacency_matrix, symmetric_eigenvalues};
use super::{Network, TopologyError, TopologySpec, MAX_NODES};
use crate::NodeId;

const MAX_GENERATION_ATTEMPTS: u32 = 64;

#[derive(Debug, Clone)]
pub struct ExpanderStack {
    n: usize,
    layer_sizes: Vec<usize>,
    degrees: Vec<usize>,
    theta: Vec<f64>,
    seed: u64,
    /// `adjacency[l][v]` = sorted layer-`l` neighbors of node `v`.
    adjacency: Vec<Vec<Vec<NodeId>>>,
    /// `attempts[l][r]` = seeds consumed generating subnetwork `r` of layer `l`.
    attempts: Vec<Vec<u32>>,
}

/// Per-subnetwork spectral expansion report for one layer.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SubnetExpansion {
    pub subnet: usize,
    pub lambda2_over_d: f64,
    pub flagged: bool,
}

/// Build the stack. Deterministic given `seed`; regeneration attempts per
/// subnetwork are recorded in the result.
pub fn build_expander_stack(
    n: usize,
    s0: usize,
    theta: &[f64],
    degrees: &[usize],
    seed: u64,
) -> Result<ExpanderStack, TopologyError> {
    if n > MAX_NODES {
        return Err(TopologyError::SizeOverflow(n as u128));
    }
    let mut layer_sizes = vec![s0];
    for (i, &th) in theta.iter().enumerate() {
        if !(th > 0.0 && th < 1.0) {
            return Err(TopologyError::BadTheta { index: i, theta: th });
        }
        let prev = *layer_sizes.last().expect("nonempty");
        let exact = prev as f64 / th;
        let next = exact.round() as usize;
        if (exact - next as f64).abs() > 1e-9 || next <= prev {
            return Err(TopologyError::NonIntegerLayerSize {
                index: i + 1,
                prev,
                value: exact,
            });
        }
        if next % prev != 0 {
            // nesting requires each layer to be a union of whole lower subnetworks
            return Err(TopologyError::NonIntegerLayerSize {
                index: i + 1,
                prev,
                value: exact,
            });
        }
        layer_sizes.push(next);
    }
    for (i, &s) in layer_sizes.iter().enumerate() {
        if n % s != 0 {
            return Err(TopologyError::NonDivisible { n, index: i, s });
        }
    }
    let top = *layer_sizes.last().expect("nonempty");
    if top != n {
        return Err(TopologyError::TopLayerMismatch { top, n });
    }
    if degrees.len() != layer_sizes.len() {
        return Err(TopologyError::DegreeCountMismatch {
            layers: layer_sizes.len(),
            got: degrees.len(),
        });
    }
    for (i, (&d, &s)) in degrees.iter().zip(&layer_sizes).enumerate() {
        if d < 1 || d >= s || (d * s) % 2 != 0 {
            return Err(TopologyError::InfeasibleDegree { index: i, d, s });
        }
    }

    let mut adjacency = Vec::with_capacity(layer_sizes.len());
    let mut attempts = Vec::with_capacity(layer_sizes.len());
    for (l, (&s, &d)) in layer_sizes.iter().zip(degrees).enumerate() {
        let mut layer_adj = vec![Vec::new(); n];
        let mut layer_attempts = Vec::with_capacity(n / s);
        for r in 0..n / s {
            let (local, used) = generate_regular_connected(s, d, seed, l as u64, r as u64)?;
            layer_attempts.push(used);
            let base = (r * s) as NodeId;
            for (v, nbrs) in local.iter().enumerate() {
                layer_adj[base as usize + v] =
                    nbrs.iter().map(|&u| base + u as NodeId).collect();
            }
        }
        adjacency.push(layer_adj);
        attempts.push(layer_attempts);
    }

    Ok(ExpanderStack {
        n,
        layer_sizes,
        degrees: degrees.to_vec(),
        theta: theta.to_vec(),
        seed,
        adjacency,
        attempts,
    })
}

impl ExpanderStack {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of logical layers `L`.
    pub fn layer_count(&self) -> usize {
        self.layer_sizes.len()
    }

    pub fn layer_size(&self, l: usize) -> usize {
        self.layer_sizes[l]
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn degree_of_layer(&self, l: usize) -> usize {
        self.degrees[l]
    }

    pub fn subnet_count(&self, l: usize) -> usize {
        self.n / self.layer_sizes[l]
    }

    /// Subnetwork index of `v` at layer `l`.
    pub fn subnet_of(&self, l: usize, v: NodeId) -> usize {
        v as usize / self.layer_sizes[l]
    }

    /// Members of subnetwork `r` at layer `l`, ascending.
    pub fn subnet_members(&self, l: usize, r: usize) -> Vec<NodeId> {
        let s = self.layer_sizes[l];
        ((r * s) as NodeId..((r + 1) * s) as NodeId).collect()
    }

    /// Sorted layer-`l` neighbors of `v` (all within `v`'s subnetwork).
    pub fn layer_neighbors(&self, l: usize, v: NodeId) -> &[NodeId] {
        &self.adjacency[l][v as usize]
    }

    pub fn generation_attempts(&self) -> &[Vec<u32>] {
        &self.attempts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spec(&self) -> TopologySpec {
        TopologySpec::ExpanderStack {
            s0: self.layer_sizes[0],
            theta: self.theta.clone(),
            d: self.degrees.clone(),
            seed: self.seed,
            n: self.n,
        }
    }
}

impl Network for ExpanderStack {
    fn node_count(&self) -> usize {
        self.n
    }

    fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency
            .iter()
            .any(|layer| layer[a as usize].binary_search(&b).is_ok())
    }

    fn degree(&self, v: NodeId) -> usize {
        let mut union: BTreeSet<NodeId> = BTreeSet::new();
        for layer in &self.adjacency {
            union.extend(layer[v as usize].iter().copied());
        }
        union.len()
    }
}

/// Second-eigenvalue ratio `lambda_2 / d` per subnetwork of layer `l`;
/// subnetworks with ratio above `threshold` are flagged. Reporting only.
pub fn expansion_check(
    stack: &ExpanderStack,
    l: usize,
    threshold: f64,
) -> Result<Vec<SubnetExpansion>, TopologyError> {
    if l >= stack.layer_count() {
        return Err(TopologyError::BadLayer(l));
    }
    let s = stack.layer_size(l);
    let d = stack.degree_of_layer(l) as f64;
    let mut out = Vec::with_capacity(stack.subnet_count(l));
    for r in 0..stack.subnet_count(l) {
        let base = r * s;
        let local: Vec<Vec<usize>> = (0..s)
            .map(|v| {
                stack
                    .layer_neighbors(l, (base + v) as NodeId)
                    .iter()
                    .map(|&u| u as usize - base)
                    .collect()
            })
            .collect();
        let eigs = symmetric_eigenvalues(&adjacency_matrix(&local), s);
        let ratio = eigs[1] / d;
        out.push(SubnetExpansion {
            subnet: r,
            lambda2_over_d: ratio,
            flagged: ratio > threshold,
        });
    }
    Ok(out)
}

fn derive_seed(seed: u64, layer: u64, subnet: u64, attempt: u64) -> u64 {
    // splitmix64 chain over the coordinates
    let mut x = seed;
    for y in [layer, subnet, attempt] {
        x = x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(y);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}

/// Simple connected `d`-regular graph on `s` local nodes, as sorted neighbor
/// lists, plus the number of attempts consumed.
fn generate_regular_connected(
    s: usize,
    d: usize,
    seed: u64,
    layer: u64,
    subnet: u64,
) -> Result<(Vec<Vec<usize>>, u32), TopologyError> {
    if d == s - 1 {
        let nbrs = (0..s)
            .map(|v| (0..s).filter(|&u| u != v).collect())
            .collect();
        return Ok((nbrs, 1));
    }
    for attempt in 1..=MAX_GENERATION_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, layer, subnet, attempt as u64));
        if let Some(edges) = pairing_model_simple(s, d, &mut rng) {
            let nbrs = edges_to_neighbors(s, &edges);
            if is_connected(&nbrs) {
                return Ok((nbrs, attempt));
            }
        }
    }
    Err(TopologyError::ExhaustedAttempts {
        attempts: MAX_GENERATION_ATTEMPTS,
        d,
        s,
    })
}

/// One configuration-model draw followed by swap repair. Returns None if the
/// repair budget runs out.
fn pairing_model_simple(s: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..s).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    stubs.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = stubs
        .chunks_exact(2)
        .map(|c| if c[0] <= c[1] { (c[0], c[1]) } else { (c[1], c[0]) })
        .collect();

    let m = edges.len();
    let mut budget = 400 * m;
    loop {
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut defect = None;
        for (i, &e) in edges.iter().enumerate() {
            if e.0 == e.1 || !seen.insert(e) {
                defect = Some(i);
                break;
            }
        }
        let Some(i) = defect else {
            return Some(edges);
        };
        // swap the defective edge against a random partner edge
        loop {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let j = rng.random_range(0..m);
            if j == i {
                continue;
            }
            let (u, v) = edges[i];
            let (x, y) = edges[j];
            let (a, b) = if rng.random_bool(0.5) {
                ((u, x), (v, y))
            } else {
                ((u, y), (v, x))
            };
            let norm = |(p, q): (usize, usize)| if p <= q { (p, q) } else { (q, p) };
            let (a, b) = (norm(a), norm(b));
            if a.0 == a.1 || b.0 == b.1 || a == b {
                continue;
            }
            let exists = |e: (usize, usize), skip1: usize, skip2: usize| {
                edges
                    .iter()
                    .enumerate()
                    .any(|(k, &f)| k != skip1 && k != skip2 && f == e)
            };
            if exists(a, i, j) || exists(b, i, j) {
                continue;
            }
            edges[i] = a;
            edges[j] = b;
            break;
        }
    }
}

fn edges_to_neighbors(s: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut nbrs = vec![Vec::new(); s];
    for &(u, v) in edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for list in &mut nbrs {
        list.sort_unstable();
    }
    nbrs
}

fn is_connected(nbrs: &[Vec<usize>]) -> bool {
    if nbrs.is_empty() {
        return true;
    }
    let mut visited = vec![false; nbrs.len()];
    let mut stack = vec![0usize];
    visited[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &nbrs[v] {
            if !visited[u] {
                visited[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == nbrs.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_single_layer() {
        let stack = build_expander_stack(16, 16, &[], &[6], 1).unwrap();
        assert_eq!(stack.layer_count(), 1);
        assert_eq!(stack.subnet_count(0), 1);
        for v in 0..16 {
            assert_eq!(stack.layer_neighbors(0, v).len(), 6);
        }
    }

    #[test]
    fn three_layer_shape() {
        let stack = build_expander_stack(64, 16, &[0.5, 0.5], &[6, 8, 10], 7).unwrap();
        assert_eq!(stack.layer_sizes(), &[16, 32, 64]);
        assert_eq!(stack.subnet_count(0), 4);
        assert_eq!(stack.subnet_count(1), 2);
        assert_eq!(stack.subnet_count(2), 1);
        // regularity at every layer
        for l in 0..3 {
            for v in 0..64 {
                assert_eq!(stack.layer_neighbors(l, v).len(), stack.degree_of_layer(l));
            }
        }
    }

    #[test]
    fn partitions_nest() {
        let stack = build_expander_stack(64, 16, &[0.5, 0.5], &[6, 8, 10], 3).unwrap();
        for l in 1..stack.layer_count() {
            for v in 0..64u32 {
                let lower = stack.subnet_of(l - 1, v);
                let upper = stack.subnet_of(l, v);
                for m in stack.subnet_members(l - 1, lower) {
                    assert_eq!(stack.subnet_of(l, m), upper);
                }
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = build_expander_stack(64, 16, &[0.5, 0.5], &[6, 8, 10], 42).unwrap();
        let b = build_expander_stack(64, 16, &[0.5, 0.5], &[6, 8, 10], 42).unwrap();
        for l in 0..3 {
            for v in 0..64 {
                assert_eq!(a.layer_neighbors(l, v), b.layer_neighbors(l, v));
            }
        }
    }

    #[test]
    fn adjacency_symmetric_and_irreflexive() {
        let stack = build_expander_stack(64, 16, &[0.5, 0.5], &[6, 8, 10], 5).unwrap();
        for l in 0..3 {
            for v in 0..64u32 {
                let nbrs = stack.layer_neighbors(l, v);
                assert!(!nbrs.contains(&v));
                for &u in nbrs {
                    assert!(stack.layer_neighbors(l, u).contains(&v));
                    assert_eq!(stack.subnet_of(l, u), stack.subnet_of(l, v));
                }
            }
        }
    }

    #[test]
    fn rejects_infeasible_parameters() {
        // d*s odd
        assert!(matches!(
            build_expander_stack(15, 15, &[], &[5], 1),
            Err(TopologyError::InfeasibleDegree { .. })
        ));
        // non-integer layer size
        assert!(matches!(
            build_expander_stack(48, 16, &[0.7], &[6, 8], 1),
            Err(TopologyError::NonIntegerLayerSize { .. })
        ));
        // top layer must reach n
        assert!(matches!(
            build_expander_stack(128, 16, &[0.5, 0.5], &[6, 8, 10], 1),
            Err(TopologyError::TopLayerMismatch { .. })
        ));
        assert!(matches!(
            build_expander_stack(64, 16, &[0.0], &[6, 8], 1),
            Err(TopologyError::BadTheta { .. })
        ));
    }

    #[test]
    fn complete_layer_shortcut() {
        let stack = build_expander_stack(32, 16, &[0.5], &[15, 8], 9).unwrap();
        for v in 0..32u32 {
            let nbrs = stack.layer_neighbors(0, v);
            assert_eq!(nbrs.len(), 15);
            let r = stack.subnet_of(0, v);
            for m in stack.subnet_members(0, r) {
                assert_eq!(nbrs.contains(&m), m != v);
            }
        }
    }

    #[test]
    fn expansion_check_flags() {
        let stack = build_expander_stack(16, 16, &[], &[15], 1).unwrap();
        let report = expansion_check(&stack, 0, 0.9).unwrap();
        // complete graph: lambda_2 = -1, ratio magnitude 1/15
        assert_eq!(report.len(), 1);
        assert!(report[0].lambda2_over_d.abs() <= 1.0 / 15.0 + 1e-9);
        assert!(!report[0].flagged);
        assert!(expansion_check(&stack, 3, 0.9).is_err());
    }
}
