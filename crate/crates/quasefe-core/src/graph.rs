//! Layered-graph instance model and the subgraph lattice.
//!
//! An instance is `k` edge layers over one shared vertex set `0..n`. Layers
//! are stored as sorted sets of canonical edges (smaller endpoint first), so
//! membership tests are `O(log m)` and serialization is deterministic.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Dense vertex index, stable across all layers of an instance.
pub type VertexId = u32;

/// Undirected edge with canonical endpoint order (`a < b`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    /// Canonicalizes the endpoint pair. Panics on self-loops, which are
    /// excluded from the model entirely.
    pub fn new(u: VertexId, v: VertexId) -> Self {
        assert!(u != v, "self-loops are not representable");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn source(self) -> VertexId {
        self.a
    }

    pub fn target(self) -> VertexId {
        self.b
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        if v == self.a {
            self.b
        } else {
            assert_eq!(v, self.b);
            self.a
        }
    }

    /// True when the two edges share no endpoint.
    pub fn independent(self, other: Edge) -> bool {
        self.a != other.a && self.a != other.b && self.b != other.a && self.b != other.b
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A sorted simple edge set over vertices `0..n` (the `n` lives in the
/// enclosing instance).
pub type EdgeSet = BTreeSet<Edge>;

/// Collects an iterator of endpoint pairs into a canonical edge set.
pub fn edge_set<I: IntoIterator<Item = (VertexId, VertexId)>>(iter: I) -> EdgeSet {
    iter.into_iter().map(|(u, v)| Edge::new(u, v)).collect()
}

/// Errors arising when assembling or classifying instances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GraphError {
    /// An endpoint is `>= n`.
    VertexOutOfRange { edge: (VertexId, VertexId), n: u32 },
    /// An operation required a specific layer count.
    LayerArity { expected: usize, got: usize },
    /// A named layer index does not exist.
    NoSuchLayer(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange { edge, n } => {
                write!(f, "edge ({},{}) has an endpoint >= n = {}", edge.0, edge.1, n)
            }
            GraphError::LayerArity { expected, got } => {
                write!(f, "operation requires exactly {expected} layers, instance has {got}")
            }
            GraphError::NoSuchLayer(i) => write!(f, "layer {i} does not exist"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for GraphError {}

/// A problem instance: `k` simple edge layers over the shared vertex set
/// `0..n`. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayeredGraph {
    n: u32,
    layers: Vec<EdgeSet>,
    /// Optional vertex names carried from input documents; never consulted
    /// by algorithms.
    names: Vec<String>,
}

impl LayeredGraph {
    pub fn new(n: u32, layers: Vec<EdgeSet>) -> Result<Self, GraphError> {
        for layer in &layers {
            for e in layer {
                if e.target() >= n {
                    return Err(GraphError::VertexOutOfRange {
                        edge: e.endpoints(),
                        n,
                    });
                }
            }
        }
        Ok(LayeredGraph {
            n,
            layers,
            names: Vec::new(),
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = names;
        self
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, i: usize) -> Result<&EdgeSet, GraphError> {
        self.layers.get(i).ok_or(GraphError::NoSuchLayer(i))
    }

    pub fn layers(&self) -> &[EdgeSet] {
        &self.layers
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Union of all layers as a set.
    pub fn union_edges(&self) -> EdgeSet {
        let mut u = EdgeSet::new();
        for layer in &self.layers {
            u.extend(layer.iter().copied());
        }
        u
    }

    /// Bitmask of layers containing `e` (bit `i` set iff `e ∈ E_i`).
    pub fn layer_mask(&self, e: Edge) -> u32 {
        let mut mask = 0;
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.contains(&e) {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// True iff every union edge belongs to exactly one layer or to all `k`.
    pub fn is_sunflower(&self) -> bool {
        let k = self.layers.len() as u32;
        self.union_edges().iter().all(|&e| {
            let c = self.layer_mask(e).count_ones();
            c == 1 || c == k
        })
    }
}

/// The seven-way partition of a three-layer union by layer membership:
/// exclusive parts `h1,h2,h3`, pairwise parts `h12,h13,h23`, and the common
/// part `h`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgraphLattice {
    pub h1: EdgeSet,
    pub h2: EdgeSet,
    pub h3: EdgeSet,
    pub h12: EdgeSet,
    pub h13: EdgeSet,
    pub h23: EdgeSet,
    pub h: EdgeSet,
}

impl SubgraphLattice {
    pub fn parts(&self) -> [(&'static str, &EdgeSet); 7] {
        [
            ("H1", &self.h1),
            ("H2", &self.h2),
            ("H3", &self.h3),
            ("H12", &self.h12),
            ("H13", &self.h13),
            ("H23", &self.h23),
            ("H", &self.h),
        ]
    }
}

/// Partitions a three-layer instance into the seven lattice classes.
pub fn classify_subgraphs(g: &LayeredGraph) -> Result<SubgraphLattice, GraphError> {
    if g.layer_count() != 3 {
        return Err(GraphError::LayerArity {
            expected: 3,
            got: g.layer_count(),
        });
    }
    let mut lat = SubgraphLattice {
        h1: EdgeSet::new(),
        h2: EdgeSet::new(),
        h3: EdgeSet::new(),
        h12: EdgeSet::new(),
        h13: EdgeSet::new(),
        h23: EdgeSet::new(),
        h: EdgeSet::new(),
    };
    for e in g.union_edges() {
        let part = match g.layer_mask(e) {
            0b001 => &mut lat.h1,
            0b010 => &mut lat.h2,
            0b100 => &mut lat.h3,
            0b011 => &mut lat.h12,
            0b101 => &mut lat.h13,
            0b110 => &mut lat.h23,
            0b111 => &mut lat.h,
            _ => unreachable!("union edge must lie in some layer"),
        };
        part.insert(e);
    }
    Ok(lat)
}

/// True iff `edges` form a forest (acyclic) over vertices `0..n`.
pub fn is_forest(edges: &EdgeSet, n: u32) -> bool {
    let mut parent: Vec<u32> = (0..n).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut c = x;
        while parent[c as usize] != r {
            let next = parent[c as usize];
            parent[c as usize] = r;
            c = next;
        }
        r
    }
    for e in edges {
        let (u, v) = e.endpoints();
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru as usize] = rv;
    }
    true
}

/// True iff `edges` form a forest with maximum degree 2 (a linear forest).
pub fn is_linear_forest(edges: &EdgeSet, n: u32) -> bool {
    let mut deg = alloc::vec![0u32; n as usize];
    for e in edges {
        deg[e.source() as usize] += 1;
        deg[e.target() as usize] += 1;
    }
    deg.iter().all(|&d| d <= 2) && is_forest(edges, n)
}

/// Maximum degree over `0..n`.
pub fn max_degree(edges: &EdgeSet, n: u32) -> u32 {
    let mut deg = alloc::vec![0u32; n as usize];
    for e in edges {
        deg[e.source() as usize] += 1;
        deg[e.target() as usize] += 1;
    }
    deg.into_iter().max().unwrap_or(0)
}

/// True iff `edges` form a spanning tree or forest that is in fact a single
/// tree when restricted to its covered vertices, and every component of the
/// whole vertex range is either covered or an isolated vertex.
///
/// The constructors only need acyclicity; this helper reports the stricter
/// "tree on its support" reading used by instance generators.
pub fn is_tree_on_support(edges: &EdgeSet, n: u32) -> bool {
    if !is_forest(edges, n) {
        return false;
    }
    let covered: BTreeSet<VertexId> = edges
        .iter()
        .flat_map(|e| [e.source(), e.target()])
        .collect();
    if covered.is_empty() {
        return true;
    }
    // A forest on `covered` is one tree iff |E| = |covered| - 1.
    edges.len() == covered.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layered(n: u32, layers: &[&[(u32, u32)]]) -> LayeredGraph {
        LayeredGraph::new(n, layers.iter().map(|l| edge_set(l.iter().copied())).collect()).unwrap()
    }

    #[test]
    fn classify_identical_layers() {
        let g = layered(3, &[&[(0, 1), (1, 2)], &[(0, 1), (1, 2)], &[(0, 1), (1, 2)]]);
        let lat = classify_subgraphs(&g).unwrap();
        assert_eq!(lat.h, edge_set([(0, 1), (1, 2)]));
        for (name, part) in lat.parts() {
            if name != "H" {
                assert!(part.is_empty(), "{name} should be empty");
            }
        }
    }

    #[test]
    fn classify_disjoint_layers() {
        let g = layered(6, &[&[(0, 1)], &[(2, 3)], &[(4, 5)]]);
        let lat = classify_subgraphs(&g).unwrap();
        assert_eq!(lat.h1, edge_set([(0, 1)]));
        assert_eq!(lat.h2, edge_set([(2, 3)]));
        assert_eq!(lat.h3, edge_set([(4, 5)]));
        assert!(lat.h12.is_empty() && lat.h13.is_empty() && lat.h23.is_empty() && lat.h.is_empty());
    }

    #[test]
    fn classify_pairwise_example() {
        // E1={ab,bc}, E2={bc,cd}, E3={cd,ab} with a=0,b=1,c=2,d=3.
        let g = layered(4, &[&[(0, 1), (1, 2)], &[(1, 2), (2, 3)], &[(2, 3), (0, 1)]]);
        let lat = classify_subgraphs(&g).unwrap();
        assert_eq!(lat.h12, edge_set([(1, 2)]));
        assert_eq!(lat.h23, edge_set([(2, 3)]));
        assert_eq!(lat.h13, edge_set([(0, 1)]));
        assert!(lat.h1.is_empty() && lat.h2.is_empty() && lat.h3.is_empty() && lat.h.is_empty());
    }

    #[test]
    fn classify_wrong_arity() {
        let g = layered(3, &[&[(0, 1)], &[(1, 2)]]);
        assert_eq!(
            classify_subgraphs(&g),
            Err(GraphError::LayerArity { expected: 3, got: 2 })
        );
    }

    #[test]
    fn lattice_partitions_union() {
        // Seven sets are pairwise disjoint and cover the union exactly.
        let g = layered(
            5,
            &[
                &[(0, 1), (1, 2), (2, 3), (3, 4)],
                &[(1, 2), (2, 3), (0, 4)],
                &[(2, 3), (3, 4), (0, 4), (0, 2)],
            ],
        );
        let lat = classify_subgraphs(&g).unwrap();
        let mut seen = EdgeSet::new();
        let mut total = 0;
        for (_, part) in lat.parts() {
            total += part.len();
            seen.extend(part.iter().copied());
        }
        assert_eq!(seen, g.union_edges());
        assert_eq!(total, seen.len(), "parts overlap");
    }

    #[test]
    fn sunflower_checks() {
        let disjoint = layered(6, &[&[(0, 1)], &[(2, 3)], &[(4, 5)]]);
        assert!(disjoint.is_sunflower());
        let identical = layered(3, &[&[(0, 1)], &[(0, 1)], &[(0, 1)]]);
        assert!(identical.is_sunflower());
        // One edge in exactly two of three layers violates the dichotomy.
        let mixed = layered(3, &[&[(0, 1)], &[(0, 1), (1, 2)], &[(1, 2)]]);
        assert!(!mixed.is_sunflower());
    }

    #[test]
    fn sunflower_equals_membership_count_rule() {
        // Brute-force restatement: membership count ∈ {1, k}.
        let g = layered(
            4,
            &[&[(0, 1), (1, 2)], &[(0, 1), (2, 3)], &[(0, 1), (1, 2)]],
        );
        let k = g.layer_count() as u32;
        let brute = g
            .union_edges()
            .iter()
            .all(|&e| matches!(g.layer_mask(e).count_ones(), c if c == 1 || c == k));
        assert_eq!(g.is_sunflower(), brute);
    }

    #[test]
    fn forest_predicates() {
        assert!(is_forest(&edge_set([(0, 1), (1, 2), (3, 4)]), 5));
        assert!(!is_forest(&edge_set([(0, 1), (1, 2), (0, 2)]), 3));
        assert!(is_linear_forest(&edge_set([(0, 1), (1, 2)]), 4));
        assert!(!is_linear_forest(&edge_set([(0, 1), (0, 2), (0, 3)]), 4));
        assert!(is_tree_on_support(&edge_set([(1, 2), (2, 3)]), 6));
        assert!(!is_tree_on_support(&edge_set([(0, 1), (2, 3)]), 4));
    }

    #[test]
    fn out_of_range_vertex_rejected() {
        let err = LayeredGraph::new(3, alloc::vec![edge_set([(0, 3)])]).unwrap_err();
        assert!(matches!(err, GraphError::VertexOutOfRange { .. }));
    }
}
