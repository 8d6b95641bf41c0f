//! Partially embedded planarity: the two-condition characterization
//! (rotation compatibility C.1 and cycle-interiority preservation C.2),
//! constructive extension for forest subgraphs, and an enumeration-backed
//! decision procedure for small instances.
//!
//! Interiority is outer-face relative; all checks here designate the outer
//! face with the same deterministic rule (longest boundary walk, ties by
//! smallest vertex), so the oracle and the checkers always agree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{is_forest, Edge, EdgeSet, VertexId};
use crate::planar::{
    compute_embedding, enumerate_embeddings, trace_faces, FaceSet, PlanarityError, RotationSystem,
};

/// A partial embedding: a subgraph `H`, its rotation system, and an
/// inside/outside bit per (cycle, off-cycle H-vertex) pair.
#[derive(Clone, Debug)]
pub struct PartialEmbedding {
    h: EdgeSet,
    rotation: RotationSystem,
    cycles: Vec<Vec<VertexId>>,
    inside: BTreeMap<(usize, VertexId), bool>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PepError {
    NotSubgraph(Edge),
    HostNotPlanar,
    /// Instance too large for the enumeration oracle.
    UnsupportedSize { n: u32 },
    /// No extension exists; carries the first violated vertex when known.
    Infeasible { vertex: Option<VertexId> },
}

impl fmt::Display for PepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PepError::NotSubgraph(e) => write!(f, "edge {e} of H is not in G"),
            PepError::HostNotPlanar => write!(f, "host graph is not planar"),
            PepError::UnsupportedSize { n } => {
                write!(f, "instance with n = {n} exceeds the enumeration threshold")
            }
            PepError::Infeasible { vertex: Some(v) } => {
                write!(f, "no extension exists (violated at vertex {v})")
            }
            PepError::Infeasible { vertex: None } => write!(f, "no extension exists"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for PepError {}

/// Which condition of the characterization failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Violation {
    C1 { vertex: VertexId },
    C2 { cycle: usize, vertex: VertexId },
}

/// Outcome of the PEP decision.
#[derive(Clone, Debug)]
pub struct PepVerdict {
    pub feasible: bool,
    pub witness: Option<RotationSystem>,
    /// A violation of the canonical embedding when infeasible.
    pub violated: Option<Violation>,
}

impl PartialEmbedding {
    /// Builds the partial embedding from a rotation system of `h`, deriving
    /// the interiority bits by face traversal with the deterministic outer
    /// face rule.
    pub fn from_rotation(h: EdgeSet, rotation: RotationSystem) -> Self {
        let n = rotation.vertex_count();
        let cycles = enumerate_cycles(&h, n);
        let mut inside = BTreeMap::new();
        if !cycles.is_empty() {
            if let Ok(faces) = trace_faces(&rotation) {
                let h_vertices: BTreeSet<VertexId> =
                    h.iter().flat_map(|e| [e.source(), e.target()]).collect();
                for (ci, cyc) in cycles.iter().enumerate() {
                    let on_cycle: BTreeSet<VertexId> = cyc.iter().copied().collect();
                    let sides = face_sides(&faces, cyc);
                    for &v in &h_vertices {
                        if !on_cycle.contains(&v) {
                            inside.insert((ci, v), vertex_inside(&rotation, &faces, &sides, v));
                        }
                    }
                }
            }
        }
        PartialEmbedding {
            h,
            rotation,
            cycles,
            inside,
        }
    }

    /// Partial embedding with explicitly prescribed interiority bits;
    /// missing pairs default to the rotation-derived values.
    pub fn with_bits(
        h: EdgeSet,
        rotation: RotationSystem,
        bits: BTreeMap<(usize, VertexId), bool>,
    ) -> Self {
        let mut pe = Self::from_rotation(h, rotation);
        for (k, v) in bits {
            pe.inside.insert(k, v);
        }
        pe
    }

    pub fn h(&self) -> &EdgeSet {
        &self.h
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn cycles(&self) -> &[Vec<VertexId>] {
        &self.cycles
    }

    pub fn inside_bit(&self, cycle: usize, v: VertexId) -> Option<bool> {
        self.inside.get(&(cycle, v)).copied()
    }
}

/// All simple cycles of `edges`, canonicalized: smallest vertex first,
/// second vertex smaller than the last.
pub fn enumerate_cycles(edges: &EdgeSet, n: u32) -> Vec<Vec<VertexId>> {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n as usize];
    for e in edges {
        adj[e.source() as usize].push(e.target());
        adj[e.target() as usize].push(e.source());
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut cycles = Vec::new();
    let mut path: Vec<VertexId> = Vec::new();
    let mut on_path = vec![false; n as usize];
    for s in 0..n {
        path.push(s);
        on_path[s as usize] = true;
        dfs_cycles(s, s, &adj, &mut path, &mut on_path, &mut cycles);
        on_path[s as usize] = false;
        path.pop();
    }
    cycles
}

fn dfs_cycles(
    start: VertexId,
    at: VertexId,
    adj: &[Vec<VertexId>],
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<VertexId>>,
) {
    for &w in &adj[at as usize] {
        if w == start && path.len() >= 3 {
            // Report once per direction: second vertex < last vertex.
            if path[1] < path[path.len() - 1] {
                out.push(path.clone());
            }
        } else if w > start && !on_path[w as usize] {
            path.push(w);
            on_path[w as usize] = true;
            dfs_cycles(start, w, adj, path, on_path, out);
            on_path[w as usize] = false;
            path.pop();
        }
    }
}

/// Face side classification w.r.t. a cycle: true = inside (unreachable from
/// the outer face without crossing a cycle edge).
fn face_sides(faces: &FaceSet, cycle: &[VertexId]) -> Vec<bool> {
    let cycle_edges: EdgeSet = cycle
        .iter()
        .enumerate()
        .map(|(i, &v)| Edge::new(v, cycle[(i + 1) % cycle.len()]))
        .collect();
    let nf = faces.face_count();
    let mut face_of_dart: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (fi, walk) in faces.faces().iter().enumerate() {
        for &d in walk {
            face_of_dart.insert(d, fi);
        }
    }
    let mut inside = vec![true; nf];
    let mut stack = vec![faces.outer()];
    inside[faces.outer()] = false;
    while let Some(f) = stack.pop() {
        for &(u, v) in &faces.faces()[f] {
            if cycle_edges.contains(&Edge::new(u, v)) {
                continue;
            }
            let g = face_of_dart[&(v, u)];
            if inside[g] {
                inside[g] = false;
                stack.push(g);
            }
        }
    }
    inside
}

fn vertex_inside(rot: &RotationSystem, faces: &FaceSet, sides: &[bool], v: VertexId) -> bool {
    if rot.rotation(v).is_empty() {
        return false; // never drawn; free placement defaults to outside
    }
    for (fi, walk) in faces.faces().iter().enumerate() {
        if walk.iter().any(|&(u, _)| u == v) {
            return sides[fi];
        }
    }
    false
}

/// Condition C.1: at every vertex the cyclic order of H-edges induced by
/// the host embedding equals the partial embedding's order.
pub fn check_condition_c1(
    g_embedding: &RotationSystem,
    h: &EdgeSet,
    pe: &PartialEmbedding,
) -> bool {
    first_c1_violation(g_embedding, h, pe).is_none()
}

fn first_c1_violation(
    g_embedding: &RotationSystem,
    h: &EdgeSet,
    pe: &PartialEmbedding,
) -> Option<VertexId> {
    for v in 0..g_embedding.vertex_count() {
        let induced: Vec<VertexId> = g_embedding
            .rotation(v)
            .iter()
            .copied()
            .filter(|&w| h.contains(&Edge::new(v, w)))
            .collect();
        if induced.len() < 3 {
            continue; // cyclic orders on <= 2 elements are unique
        }
        let wanted: Vec<VertexId> = pe.rotation.rotation(v).to_vec();
        if !cyclic_equal(&induced, &wanted) {
            return Some(v);
        }
    }
    None
}

fn cyclic_equal(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(shift) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    (0..a.len()).all(|i| a[i] == b[(shift + i) % b.len()])
}

/// Condition C.2: every cycle of H keeps every off-cycle H-vertex on the
/// side prescribed by the partial embedding.
pub fn check_condition_c2(
    g_embedding: &RotationSystem,
    h: &EdgeSet,
    pe: &PartialEmbedding,
) -> bool {
    first_c2_violation(g_embedding, h, pe).is_none()
}

fn first_c2_violation(
    g_embedding: &RotationSystem,
    h: &EdgeSet,
    pe: &PartialEmbedding,
) -> Option<(usize, VertexId)> {
    if pe.cycles.is_empty() {
        return None;
    }
    let Ok(faces) = trace_faces(g_embedding) else {
        return Some((0, 0));
    };
    let h_vertices: BTreeSet<VertexId> = h.iter().flat_map(|e| [e.source(), e.target()]).collect();
    for (ci, cyc) in pe.cycles.iter().enumerate() {
        let on_cycle: BTreeSet<VertexId> = cyc.iter().copied().collect();
        let sides = face_sides(&faces, cyc);
        for &v in &h_vertices {
            if on_cycle.contains(&v) {
                continue;
            }
            let got = vertex_inside(g_embedding, &faces, &sides, v);
            if let Some(want) = pe.inside_bit(ci, v) {
                if got != want {
                    return Some((ci, v));
                }
            }
        }
    }
    None
}

const ENUM_THRESHOLD: u32 = 8;
const ENUM_LIMIT: usize = 2_000_000;

/// Extends fixed cyclic orders of a forest `h` to a planar rotation system
/// of `g`. Complete when `g` is a forest; otherwise tries the canonical
/// embedding and falls back to enumeration for small `n`.
pub fn extend_forest(
    g: &EdgeSet,
    h: &EdgeSet,
    fixed: &RotationSystem,
    n: u32,
) -> Result<RotationSystem, PepError> {
    for e in h {
        if !g.contains(e) {
            return Err(PepError::NotSubgraph(*e));
        }
    }
    let pe = PartialEmbedding::from_rotation(h.clone(), fixed.clone());
    if is_forest(g, n) {
        // Interleave the free edges into the fixed gaps: any interleaving
        // of a forest is planar.
        let mut rotations: Vec<Vec<VertexId>> = Vec::with_capacity(n as usize);
        for v in 0..n {
            let mut rot: Vec<VertexId> = fixed
                .rotation(v)
                .iter()
                .copied()
                .filter(|&w| h.contains(&Edge::new(v, w)))
                .collect();
            for e in g {
                if e.touches(v) && !h.contains(e) {
                    rot.push(e.other(v));
                }
            }
            rotations.push(rot);
        }
        let rot = RotationSystem::new(rotations);
        debug_assert!(check_condition_c1(&rot, h, &pe));
        return Ok(rot);
    }
    match compute_embedding(g, n) {
        Ok(rot) if check_condition_c1(&rot, h, &pe) => return Ok(rot),
        Ok(_) => {}
        Err(PlanarityError::NonPlanar { .. }) => return Err(PepError::HostNotPlanar),
        Err(_) => return Err(PepError::HostNotPlanar),
    }
    if n > ENUM_THRESHOLD {
        return Err(PepError::UnsupportedSize { n });
    }
    let (embeddings, _) = enumerate_embeddings(g, n, ENUM_LIMIT);
    for rot in embeddings {
        if check_condition_c1(&rot, h, &pe) {
            return Ok(rot);
        }
    }
    let canonical = compute_embedding(g, n).map_err(|_| PepError::HostNotPlanar)?;
    Err(PepError::Infeasible {
        vertex: first_c1_violation(&canonical, h, &pe),
    })
}

/// Decides partially embedded planarity.
///
/// Forest subgraphs over forest hosts use the constructive path; everything
/// else goes through the enumeration oracle, which is exact up to the size
/// threshold and reports an explicit error beyond it.
pub fn decide_pep(g: &EdgeSet, partial: &PartialEmbedding, n: u32) -> Result<PepVerdict, PepError> {
    for e in partial.h() {
        if !g.contains(e) {
            return Err(PepError::NotSubgraph(*e));
        }
    }
    let h = partial.h().clone();
    if is_forest(&h, n) && is_forest(g, n) {
        let rot = extend_forest(g, &h, partial.rotation(), n)?;
        return Ok(PepVerdict {
            feasible: true,
            witness: Some(rot),
            violated: None,
        });
    }
    if n > ENUM_THRESHOLD {
        return Err(PepError::UnsupportedSize { n });
    }
    let (embeddings, truncated) = enumerate_embeddings(g, n, ENUM_LIMIT);
    if embeddings.is_empty() {
        return Err(PepError::HostNotPlanar);
    }
    for rot in &embeddings {
        if check_condition_c1(rot, &h, partial) && check_condition_c2(rot, &h, partial) {
            return Ok(PepVerdict {
                feasible: true,
                witness: Some(rot.clone()),
                violated: None,
            });
        }
    }
    if truncated {
        return Err(PepError::UnsupportedSize { n });
    }
    let canonical = &embeddings[0];
    let violated = first_c1_violation(canonical, &h, partial)
        .map(|vertex| Violation::C1 { vertex })
        .or_else(|| {
            first_c2_violation(canonical, &h, partial)
                .map(|(cycle, vertex)| Violation::C2 { cycle, vertex })
        });
    Ok(PepVerdict {
        feasible: false,
        witness: None,
        violated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_set;

    fn rot_of(edges: &EdgeSet, n: u32) -> RotationSystem {
        compute_embedding(edges, n).unwrap()
    }

    #[test]
    fn cycles_of_k4() {
        let k4 = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cycles = enumerate_cycles(&k4, 4);
        // 4 triangles + 3 four-cycles.
        assert_eq!(cycles.len(), 7);
    }

    #[test]
    fn c1_small_degree_always_holds() {
        // H of maximum degree 2: cyclic orders on <= 2 elements are unique.
        let g = edge_set([(0, 1), (0, 2), (0, 3), (1, 2)]);
        let h = edge_set([(0, 1), (0, 2)]);
        let pe = PartialEmbedding::from_rotation(h.clone(), rot_of(&h, 4));
        let (all, _) = enumerate_embeddings(&g, 4, 10_000);
        assert!(all.iter().all(|rot| check_condition_c1(rot, &h, &pe)));
    }

    #[test]
    fn c1_star_order_reversal_fails() {
        let h = edge_set([(0, 1), (0, 2), (0, 3)]);
        let pe = PartialEmbedding::from_rotation(
            h.clone(),
            RotationSystem::new(vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]),
        );
        let good = RotationSystem::new(vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]);
        let bad = RotationSystem::new(vec![vec![1, 3, 2], vec![0], vec![0], vec![0]]);
        assert!(check_condition_c1(&good, &h, &pe));
        assert!(!check_condition_c1(&bad, &h, &pe));
    }

    #[test]
    fn c2_vacuous_for_acyclic_h() {
        let g = edge_set([(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]);
        let h = edge_set([(0, 1), (1, 2)]);
        let pe = PartialEmbedding::from_rotation(h.clone(), rot_of(&h, 4));
        let (all, _) = enumerate_embeddings(&g, 4, 10_000);
        assert!(!all.is_empty());
        assert!(all.iter().all(|rot| check_condition_c2(rot, &h, &pe)));
    }

    #[test]
    fn c2_detects_side_violation() {
        // Bits demanding the endpoints of an H-edge on different sides of a
        // triangle can never be realized.
        let g = edge_set([(0, 1), (1, 2), (0, 2), (3, 4), (0, 3)]);
        let h = edge_set([(0, 1), (1, 2), (0, 2), (3, 4)]);
        let h_rot = rot_of(&h, 5);
        let mut bits = BTreeMap::new();
        bits.insert((0usize, 3u32), true);
        bits.insert((0usize, 4u32), false);
        let pe = PartialEmbedding::with_bits(h.clone(), h_rot, bits);
        let verdict = decide_pep(&g, &pe, 5).unwrap();
        assert!(!verdict.feasible);
        assert!(matches!(verdict.violated, Some(Violation::C2 { .. })));
    }

    #[test]
    fn k4_with_facial_triangle_is_feasible() {
        let g = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let h = edge_set([(0, 1), (1, 2), (0, 2)]);
        let pe = PartialEmbedding::from_rotation(h.clone(), rot_of(&h, 4));
        let verdict = decide_pep(&g, &pe, 4).unwrap();
        assert!(verdict.feasible);
        let w = verdict.witness.unwrap();
        assert!(check_condition_c1(&w, &h, &pe));
        assert!(check_condition_c2(&w, &h, &pe));
    }

    #[test]
    fn extend_forest_tree_host_always_succeeds() {
        let g = edge_set([(0, 1), (0, 2), (0, 3), (3, 4)]);
        let h = edge_set([(0, 1), (0, 2)]);
        let fixed = RotationSystem::new(vec![vec![2, 1], vec![0], vec![0], vec![], vec![]]);
        let rot = extend_forest(&g, &h, &fixed, 5).unwrap();
        let pe = PartialEmbedding::from_rotation(h.clone(), fixed);
        assert!(check_condition_c1(&rot, &h, &pe));
        assert!(crate::planar::rotation_is_planar(&rot));
    }

    #[test]
    fn extend_forest_empty_h_is_unconstrained() {
        let g = edge_set([(0, 1), (1, 2), (0, 2)]);
        let fixed = RotationSystem::new(vec![vec![]; 3]);
        let rot = extend_forest(&g, &EdgeSet::new(), &fixed, 3).unwrap();
        assert!(crate::planar::rotation_is_planar(&rot));
    }

    #[test]
    fn extend_forest_matches_enumeration_on_k4_paths() {
        let g = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let h = edge_set([(0, 1), (1, 2)]);
        let fixed = RotationSystem::new(vec![vec![1], vec![0, 2], vec![1], vec![]]);
        let rot = extend_forest(&g, &h, &fixed, 4).unwrap();
        let pe = PartialEmbedding::from_rotation(h.clone(), fixed);
        assert!(check_condition_c1(&rot, &h, &pe));
        assert!(crate::planar::rotation_is_planar(&rot));
    }

    #[test]
    fn decide_pep_agrees_with_oracle_exhaustively_n4() {
        // Miniature version of the acceptance sweep.
        let pairs = [(0u32, 1u32), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for gmask in 0u32..(1 << 6) {
            let g: EdgeSet = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| gmask & (1 << i) != 0)
                .map(|(_, &(u, v))| Edge::new(u, v))
                .collect();
            if !crate::planar::test_planarity(&g, 4) {
                continue;
            }
            let g_edges: Vec<Edge> = g.iter().copied().collect();
            for hmask in 0u32..(1 << g_edges.len()) {
                let h: EdgeSet = g_edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| hmask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let (h_embeddings, _) = enumerate_embeddings(&h, 4, 100);
                for h_rot in h_embeddings {
                    let pe = PartialEmbedding::from_rotation(h.clone(), h_rot);
                    let verdict = decide_pep(&g, &pe, 4).unwrap();
                    let (g_embeddings, _) = enumerate_embeddings(&g, 4, 10_000);
                    let brute = g_embeddings.iter().any(|rot| {
                        check_condition_c1(rot, &h, &pe) && check_condition_c2(rot, &h, &pe)
                    });
                    assert_eq!(verdict.feasible, brute, "g={g:?} h={h:?}");
                }
            }
        }
    }
}
