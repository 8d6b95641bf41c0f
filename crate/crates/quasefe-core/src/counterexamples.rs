//! The two negative results: the density counterexample against simple
//! QuaSEFEs, and the fixed-drawing matchings counterexample with its
//! exhaustive cap-bounded routing search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

use crate::arrangement::{Arrangement, CurveId, CurveKind, DartId, PrescribedCross};
use crate::geom::{import_drawing, DrawnCurve, GeomError, Point};
use crate::graph::{edge_set, Edge, EdgeSet, LayeredGraph, VertexId};

/// Exact rational `p / 2` value used by the density bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HalfInteger {
    /// Twice the value, exactly.
    pub doubled: i64,
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// Certificate that a pair of layers cannot share a simple quasiplanar
/// drawing: their union exceeds the edge bound `(13n - 40)/2`.
#[derive(Clone, Debug)]
pub struct DensityCertificate {
    pub n: u32,
    pub layers: (usize, usize),
    pub union_edge_count: usize,
    /// The bound `6.5 n - 20`, exact.
    pub bound: HalfInteger,
    pub exceeds: bool,
    /// The forced-crossing chain: edges that must participate in any
    /// violation, derived from set differences of the instance.
    pub narrative: Vec<String>,
}

/// Builds the 11-vertex negative instance: vertices `0..=9` are the clique
/// vertices, vertex `10` is the star center.
pub fn build_simple_negative_instance() -> LayeredGraph {
    let w = 10u32;
    let mut k10 = EdgeSet::new();
    for u in 0..10 {
        for v in u + 1..10 {
            k10.insert(Edge::new(u, v));
        }
    }
    let mut e1 = k10.clone();
    for v in 0..6 {
        e1.insert(Edge::new(w, v));
    }
    let mut e2 = k10.clone();
    e2.insert(Edge::new(w, 6));
    let e3: EdgeSet = (0..10).map(|v| Edge::new(w, v)).collect();
    LayeredGraph::new(11, vec![e1, e2, e3]).expect("static instance")
}

/// Exact density certification for a pair of layers: their union has more
/// edges than any simple quasiplanar graph on `n` vertices may carry.
pub fn certify_density(g: &LayeredGraph, layers: (usize, usize)) -> DensityCertificate {
    let n = g.vertex_count();
    let (i, j) = layers;
    let a = g.layer(i).expect("layer");
    let b = g.layer(j).expect("layer");
    let union: EdgeSet = a.union(b).copied().collect();
    let count = union.len();
    // 6.5 n - 20 = (13 n - 40) / 2, compared exactly as 2*count > 13n - 40.
    let bound = HalfInteger {
        doubled: 13 * n as i64 - 40,
    };
    let exceeds = 2 * count as i64 > bound.doubled;
    let mut narrative = Vec::new();
    if exceeds {
        narrative.push(format!(
            "the union of layers {i} and {j} has {count} edges, exceeding the \
             simple-quasiplanar bound {bound} for n = {n}"
        ));
        narrative.push(
            "therefore any drawing of the union with shared edges drawn once is \
             non-simple or has three mutually crossing edges"
                .into(),
        );
        let only_b: Vec<Edge> = b.difference(a).copied().collect();
        if only_b.len() <= 2 && !only_b.is_empty() {
            narrative.push(format!(
                "every violating crossing involves one of {:?} (the only edges \
                 outside layer {i})",
                only_b
            ));
            if g.layer_count() > 2 {
                // Edges that also lie in a third layer force the violation
                // into that layer.
                for k in 0..g.layer_count() {
                    if k == i || k == j {
                        continue;
                    }
                    let lk = g.layer(k).expect("layer");
                    if only_b.iter().all(|e| lk.contains(e)) {
                        narrative.push(format!(
                            "those edges belong to layer {k} as well, so the \
                             violation lands inside one layer's drawing"
                        ));
                    }
                }
            }
        }
    } else {
        narrative.push(format!(
            "the union of layers {i} and {j} has {count} edges, within the \
             bound {bound} for n = {n}; no density obstruction"
        ));
    }
    DensityCertificate {
        n,
        layers,
        union_edge_count: count,
        bound,
        exceeds,
        narrative,
    }
}

// ----------------------------------------------------------------------
// The escape arrangement
// ----------------------------------------------------------------------

/// The fixed drawing of the ten-edge matching together with the pending
/// second-matching edges and the verified structural facts.
#[derive(Clone, Debug)]
pub struct EscapeArrangement {
    pub arrangement: Arrangement,
    pub matching: LayeredGraph,
    /// The second matching's new edges: (v17,v19) and (v18,v20).
    pub pending: [Edge; 2],
    pub structure: EscapeStructure,
}

/// Programmatically verified structural facts behind the escape argument.
#[derive(Clone, Debug)]
pub struct EscapeStructure {
    /// (v1,v2) and (v3,v4) alone already separate v17 from v19: every dual
    /// path between them crosses one of the two.
    pub enclosure: bool,
    /// Quasiplanar single-crossing-per-edge escapes through (v1,v2) are
    /// forced through both (v13,v14) and (v15,v16).
    pub forced_blue: bool,
    /// Quasiplanar single-crossing-per-edge escapes through (v3,v4) are
    /// forced through both (v9,v10) and (v11,v12).
    pub forced_red: bool,
    /// (v5,v6) and (v7,v8) cross all four forced edges (and nothing else of
    /// the matching), so crossing them after a corridor closes a triple.
    pub caps_block: bool,
}

impl EscapeStructure {
    pub fn all_hold(&self) -> bool {
        self.enclosure && self.forced_blue && self.forced_red && self.caps_block
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CounterexampleError {
    Geometry(GeomError),
    /// A structural property of the construction failed verification.
    Structure(String),
}

impl fmt::Display for CounterexampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterexampleError::Geometry(e) => write!(f, "{e}"),
            CounterexampleError::Structure(s) => write!(f, "structure check failed: {s}"),
        }
    }
}

impl From<GeomError> for CounterexampleError {
    fn from(e: GeomError) -> Self {
        CounterexampleError::Geometry(e)
    }
}

#[cfg(test)]
impl std::error::Error for CounterexampleError {}

// Paper vertex v_k is index k-1. Matching edges (v_{2i-1}, v_{2i}).
const A: (u32, u32) = (0, 1); // (v1,v2)
const B: (u32, u32) = (2, 3); // (v3,v4)
const CAP1: (u32, u32) = (4, 5); // (v5,v6)
const CAP2: (u32, u32) = (6, 7); // (v7,v8)
const RED1: (u32, u32) = (8, 9); // (v9,v10)
const RED2: (u32, u32) = (10, 11); // (v11,v12)
const BLUE1: (u32, u32) = (12, 13); // (v13,v14)
const BLUE2: (u32, u32) = (14, 15); // (v15,v16)
const INNER: (u32, u32) = (16, 17); // (v17,v18)
const OUTER: (u32, u32) = (18, 19); // (v19,v20)

fn m1_edges() -> EdgeSet {
    edge_set([A, B, CAP1, CAP2, RED1, RED2, BLUE1, BLUE2, INNER, OUTER])
}

fn m2_edges() -> EdgeSet {
    // Shared matching edges plus the pending pair; (v17,v18) and (v19,v20)
    // are excluded so that M2 stays a matching.
    let mut m2 = edge_set([A, B, CAP1, CAP2, RED1, RED2, BLUE1, BLUE2]);
    m2.insert(Edge::new(16, 18));
    m2.insert(Edge::new(17, 19));
    m2
}

/// Ring `main` arc: north, east and south sides of a square of half-size
/// `s`, open on the west.
fn ring_main(s: i64) -> Vec<Point> {
    vec![(-s + 2, s), (s, s), (s, -s), (-s + 2, -s)]
}

/// Ring `seal` arc: wraps the west side, crossing the main arc twice.
fn ring_seal(s: i64) -> Vec<Point> {
    vec![
        (-s + 4, s - 2),
        (-s + 4, s + 2),
        (-s - 4, s + 2),
        (-s - 4, -s - 2),
        (-s + 4, -s - 2),
        (-s + 4, -s + 2),
    ]
}

/// Builds the fixed quasiplanar drawing of the first matching: five nested
/// two-crossing rings around v17/v18 (ring walls alternating between the
/// two gate edges and the four corridor edges), plus two cap arcs crossing
/// all four corridor edges. The drawing is quasiplanar but deliberately
/// not simple: a two-crossing ring is the only way two matching edges can
/// enclose anything.
pub fn build_escape_arrangement() -> Result<EscapeArrangement, CounterexampleError> {
    let mut positions: Vec<Point> = vec![(0, 0); 20];
    // Gate edges: A spans rings 1, 2, 4 (as main arcs); B seals ring 1 and
    // runs rings 3, 5.
    let a_points: Vec<Point> = {
        let mut p = ring_main(20); // (-18,20) .. (-18,-20)
        p.extend([(-18, -26), (-28, -26), (-28, -30)]);
        let r2: Vec<Point> = ring_main(30).into_iter().rev().collect(); // (-28,-30) .. (-28,30)
        p.extend(r2.into_iter().skip(1));
        p.extend([(-28, 44), (-48, 44), (-48, 50)]);
        let r4 = ring_main(50); // (-48,50) .. (-48,-50)
        p.extend(r4.into_iter().skip(1));
        p
    };
    let b_points: Vec<Point> = {
        let mut p = ring_seal(20); // (-16,18) .. (-16,-18)
        p.extend([(-14, -18), (-14, -34), (-38, -34), (-38, -40)]);
        let r3: Vec<Point> = ring_main(40).into_iter().rev().collect(); // (-38,-40) .. (-38,40)
        p.extend(r3.into_iter().skip(1));
        p.extend([(-38, 56), (-58, 56), (-58, 60)]);
        let r5 = ring_main(60);
        p.extend(r5.into_iter().skip(1));
        p
    };
    positions[0] = a_points[0];
    positions[1] = *a_points.last().unwrap();
    positions[2] = b_points[0];
    positions[3] = *b_points.last().unwrap();
    let b1_points = ring_seal(30);
    let r1_points = ring_seal(40);
    let b2_points = ring_seal(50);
    let r2_points = ring_seal(60);
    positions[12] = b1_points[0];
    positions[13] = *b1_points.last().unwrap();
    positions[8] = r1_points[0];
    positions[9] = *r1_points.last().unwrap();
    positions[14] = b2_points[0];
    positions[15] = *b2_points.last().unwrap();
    positions[10] = r2_points[0];
    positions[11] = *r2_points.last().unwrap();
    // Cap spokes crossing the four seal wraps at x = -34, -44, -54, -64.
    let cap1_points: Vec<Point> = vec![(-66, 0), (-25, 0)];
    let cap2_points: Vec<Point> = vec![(-66, 4), (-25, 4)];
    positions[4] = cap1_points[0];
    positions[5] = cap1_points[1];
    positions[6] = cap2_points[0];
    positions[7] = cap2_points[1];
    positions[16] = (0, 0);
    positions[17] = (4, 0);
    positions[18] = (-80, 0);
    positions[19] = (-80, 4);
    let inner_points = vec![positions[16], positions[17]];
    let outer_points = vec![positions[18], positions[19]];

    let m1 = m1_edges();
    let m2 = m2_edges();
    let mask = |u: u32, v: u32| -> u32 {
        let e = Edge::new(u, v);
        u32::from(m1.contains(&e)) | (u32::from(m2.contains(&e)) << 1)
    };
    let curve = |(u, v): (u32, u32), pts: &[Point]| -> DrawnCurve {
        // Polylines were written from the lower-index endpoint.
        DrawnCurve {
            edge: Edge::new(u, v),
            layers: mask(u, v),
            points: pts.to_vec(),
        }
    };
    let curves = [
        curve(A, &a_points),
        curve(B, &b_points),
        curve(BLUE1, &b1_points),
        curve(RED1, &r1_points),
        curve(BLUE2, &b2_points),
        curve(RED2, &r2_points),
        curve(CAP1, &cap1_points),
        curve(CAP2, &cap2_points),
        curve(INNER, &inner_points),
        curve(OUTER, &outer_points),
    ];
    let arrangement = import_drawing(20, &positions, &curves)?;

    let matching = LayeredGraph::new(20, vec![m1, m2.clone()]).expect("matching instance");

    // Γ1 must be quasiplanar; it is intentionally non-simple (enclosing
    // anything with two matching edges needs a double crossing).
    if !arrangement.check_quasiplanar(0) {
        return Err(CounterexampleError::Structure("Γ1 not quasiplanar".into()));
    }
    let structure = verify_escape_structure(&arrangement)?;
    if !structure.all_hold() {
        return Err(CounterexampleError::Structure(format!("{structure:?}")));
    }
    Ok(EscapeArrangement {
        arrangement,
        matching,
        pending: [Edge::new(16, 18), Edge::new(17, 19)],
        structure,
    })
}

fn edge_of(p: (u32, u32)) -> Edge {
    Edge::new(p.0, p.1)
}

fn verify_escape_structure(arr: &Arrangement) -> Result<EscapeStructure, CounterexampleError> {
    let (v17, v19) = (16u32, 18u32);
    // Enclosure: the two gate edges alone separate v17 from v19, so every
    // dual path between them crosses (v1,v2) or (v3,v4).
    let gate = edge_set([A, B]);
    let enclosure = !arr.vertices_connected_avoiding(v17, v19, &gate)
        && !arr.vertices_connected_avoiding(17, 19, &gate);

    // Forced corridors at crossing cap 1: an escape avoiding the gate edge
    // B must cross both blue edges (and symmetrically for red). Verified by
    // exhaustive single-edge search with the respective edges walled off.
    let forced = |banned: [(u32, u32); 2]| -> bool {
        let walls: EdgeSet = banned.iter().map(|&p| edge_of(p)).collect();
        let mut budget = 2_000_000u64;
        search_single_edge(arr, Edge::new(v17, v19), 1, &walls, 1, &mut budget).is_none()
    };
    let forced_blue = forced([B, BLUE1]) && forced([B, BLUE2]);
    let forced_red = forced([A, RED1]) && forced([A, RED2]);

    // Cap facts: each cap crosses all four corridor edges and neither gate
    // edge nor the other cap.
    let cg = arr.build_crossing_graph(0);
    let idx = |p: (u32, u32)| cg.edges.iter().position(|&e| e == edge_of(p)).unwrap();
    let crosses = |p: (u32, u32), q: (u32, u32)| {
        let (i, j) = (idx(p), idx(q));
        let key = if i < j { (i, j) } else { (j, i) };
        cg.pairs.contains_key(&key)
    };
    let caps_block = [RED1, RED2, BLUE1, BLUE2]
        .iter()
        .all(|&r| crosses(CAP1, r) && crosses(CAP2, r))
        && !crosses(CAP1, CAP2)
        && !crosses(CAP1, A)
        && !crosses(CAP1, B)
        && !crosses(CAP2, A)
        && !crosses(CAP2, B)
        && crosses(A, B);

    Ok(EscapeStructure {
        enclosure,
        forced_blue,
        forced_red,
        caps_block,
    })
}

// ----------------------------------------------------------------------
// Exhaustive cap-bounded routing search
// ----------------------------------------------------------------------

/// Result of the joint routing search.
#[derive(Clone, Debug)]
pub struct RoutingSearchResult {
    pub outcome: SearchOutcome,
    pub explored_routes: u64,
    pub cap: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SearchOutcome {
    /// A joint quasiplanar routing exists; per-edge ordered crossing lists.
    Feasible(Vec<Vec<Edge>>),
    Infeasible,
    BudgetExceeded,
}

/// Region-level routing step: crossing dart `d` moves between the two real
/// face classes on its sides.
struct StepTable {
    steps: Vec<(u32, u32, DartId, Edge)>,
    classes: Vec<u32>,
}

fn step_table(arr: &Arrangement, walls: &EdgeSet) -> StepTable {
    let classes = arr.real_face_classes();
    let mut steps = Vec::new();
    for d in 0..arr.dart_count() as DartId {
        let Some(edge) = arr.dart_edge(d) else { continue };
        if walls.contains(&edge) {
            continue;
        }
        let f = classes[arr.face_of_dart(d) as usize];
        let g = classes[arr.face_of_dart(arr.twin(d)) as usize];
        steps.push((f, g, d, edge));
    }
    StepTable { steps, classes }
}

fn corner_classes(arr: &Arrangement, table: &StepTable, v: VertexId) -> BTreeSet<u32> {
    arr.rotation(v)
        .iter()
        .map(|&d| table.classes[arr.face_of_dart(d) as usize])
        .collect()
}

/// Exhaustively decides single-edge quasiplanar routability at the given
/// per-edge crossing cap, avoiding `walls` entirely.
///
/// Search states are (region, per-curve crossing counts); a state is pruned
/// when another reached state in the same region has pointwise smaller or
/// equal counts, which is sound for reachability: the dominating state
/// allows every continuation the dominated one does. Returns the crossed
/// edges of a route when feasible, None when exhaustively infeasible.
fn search_single_edge(
    arr: &Arrangement,
    edge: Edge,
    layer: usize,
    walls: &EdgeSet,
    cap: u32,
    budget: &mut u64,
) -> Option<Vec<Edge>> {
    match single_edge_outcome(arr, edge, layer, walls, cap, budget) {
        SingleOutcome::Feasible(route) => Some(route),
        _ => None,
    }
}

enum SingleOutcome {
    Feasible(Vec<Edge>),
    Infeasible,
    Budget,
}

fn single_edge_outcome(
    arr: &Arrangement,
    edge: Edge,
    layer: usize,
    walls: &EdgeSet,
    cap: u32,
    budget: &mut u64,
) -> SingleOutcome {
    let table = step_table(arr, walls);
    let starts = corner_classes(arr, &table, edge.source());
    let targets = corner_classes(arr, &table, edge.target());
    let fatal = layer_crossing_pairs(arr, layer);
    // Compact curve indexing for count vectors.
    let mut curve_index: BTreeMap<Edge, usize> = BTreeMap::new();
    for &(_, _, _, e) in &table.steps {
        let next = curve_index.len();
        curve_index.entry(e).or_insert(next);
    }
    let m = curve_index.len();
    let bit = 1u32 << layer;
    let in_layer: Vec<bool> = {
        let mut v = vec![false; m];
        for (&e, &i) in &curve_index {
            let c = arr.curve_of_edge(e).expect("instance edge");
            v[i] = arr.curve_layers(c) & bit != 0;
        }
        v
    };
    let fatal_with: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); m];
        for &(a, b) in &fatal {
            if let (Some(&i), Some(&j)) = (curve_index.get(&a), curve_index.get(&b)) {
                v[i].push(j);
                v[j].push(i);
            }
        }
        v
    };
    let edges_by_index: Vec<Edge> = {
        let mut v = vec![edge; m];
        for (&e, &i) in &curve_index {
            v[i] = e;
        }
        v
    };

    // BFS over states with dominance pruning per region.
    let mut frontier: Vec<(u32, Vec<u8>, Vec<usize>)> = starts
        .iter()
        .map(|&s| (s, vec![0u8; m], Vec::new()))
        .collect();
    let mut seen: BTreeMap<u32, Vec<Vec<u8>>> = BTreeMap::new();
    for (s, counts, _) in &frontier {
        seen.entry(*s).or_default().push(counts.clone());
    }
    while let Some((at, counts, path)) = frontier.pop() {
        if targets.contains(&at) {
            return SingleOutcome::Feasible(path.iter().map(|&i| edges_by_index[i]).collect());
        }
        if *budget == 0 {
            return SingleOutcome::Budget;
        }
        *budget -= 1;
        for &(f, g, _, e) in &table.steps {
            if f != at {
                continue;
            }
            let i = curve_index[&e];
            if counts[i] as u32 >= cap {
                continue;
            }
            if in_layer[i] && counts[i] == 0 {
                // Crossing a new layer edge: it must not already cross a
                // layer edge we crossed (mutual triple with the new edge).
                if fatal_with[i].iter().any(|&j| in_layer[j] && counts[j] > 0) {
                    continue;
                }
            }
            let mut next = counts.clone();
            next[i] += 1;
            let entry = seen.entry(g).or_default();
            if entry
                .iter()
                .any(|old| old.iter().zip(&next).all(|(a, b)| a <= b))
            {
                continue; // dominated
            }
            entry.retain(|old| !old.iter().zip(&next).all(|(a, b)| b <= a));
            entry.push(next.clone());
            let mut p = path.clone();
            p.push(i);
            frontier.push((g, next, p));
        }
    }
    SingleOutcome::Infeasible
}

/// Pairs of instance edges (by layer) whose curves cross at least once.
fn layer_crossing_pairs(arr: &Arrangement, layer: usize) -> BTreeSet<(Edge, Edge)> {
    let cg = arr.build_crossing_graph(layer);
    cg.pairs
        .keys()
        .map(|&(i, j)| order_pair(cg.edges[i], cg.edges[j]))
        .collect()
}

fn order_pair(a: Edge, b: Edge) -> (Edge, Edge) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Exhaustively enumerates joint routings of `new_edges` into layer
/// `layer`, each crossing every existing edge at most `cap` times, and
/// accepts only combinations whose layer drawing stays quasiplanar.
///
/// The first edge's candidate routes are enumerated and materialized one at
/// a time; the second edge is then searched in the modified arrangement, so
/// interactions between the two new curves are handled exactly. `budget`
/// bounds the total number of explored search states.
pub fn search_quasiplanar_insertion(
    arr: &Arrangement,
    new_edges: &[Edge],
    layer: usize,
    cap: u32,
    budget: u64,
) -> RoutingSearchResult {
    assert!(cap >= 1, "crossing cap must be at least 1");
    let mut single_budget = budget;
    // A joint routing restricts to a routing of each edge alone, so a
    // single-edge infeasibility already settles the joint question.
    let mut hit_budget = false;
    for &e in new_edges {
        match single_edge_outcome(arr, e, layer, &EdgeSet::new(), cap, &mut single_budget) {
            SingleOutcome::Infeasible => {
                return RoutingSearchResult {
                    outcome: SearchOutcome::Infeasible,
                    explored_routes: budget - single_budget,
                    cap,
                };
            }
            SingleOutcome::Budget => hit_budget = true,
            SingleOutcome::Feasible(_) => {}
        }
    }
    if hit_budget {
        return RoutingSearchResult {
            outcome: SearchOutcome::BudgetExceeded,
            explored_routes: budget,
            cap,
        };
    }
    let remaining = Cell::new(single_budget);
    let outcome = search_joint(arr, new_edges, layer, cap, &remaining);
    RoutingSearchResult {
        outcome,
        explored_routes: budget - remaining.get(),
        cap,
    }
}

fn search_joint(
    arr: &Arrangement,
    new_edges: &[Edge],
    layer: usize,
    cap: u32,
    budget: &Cell<u64>,
) -> SearchOutcome {
    let Some((&edge, rest)) = new_edges.split_first() else {
        return SearchOutcome::Feasible(Vec::new());
    };
    let table = step_table(arr, &EdgeSet::new());
    let starts = corner_classes(arr, &table, edge.source());
    let targets = corner_classes(arr, &table, edge.target());
    let fatal = layer_crossing_pairs(arr, layer);
    // Lower bound on remaining crossings per region (uncapped BFS from the
    // targets), used to prune the length-ordered enumeration.
    let nregions = table
        .steps
        .iter()
        .flat_map(|&(f, g, _, _)| [f, g])
        .chain(starts.iter().copied())
        .chain(targets.iter().copied())
        .max()
        .unwrap_or(0) as usize
        + 1;
    let mut dist = vec![u32::MAX; nregions];
    let mut queue: alloc::collections::VecDeque<u32> = targets.iter().copied().collect();
    for &t in &targets {
        dist[t as usize] = 0;
    }
    while let Some(r) = queue.pop_front() {
        for &(f, g, _, _) in &table.steps {
            if g == r && dist[f as usize] == u32::MAX {
                dist[f as usize] = dist[r as usize] + 1;
                queue.push_back(f);
            }
        }
    }
    let max_len = table
        .steps
        .iter()
        .map(|&(_, _, _, e)| e)
        .collect::<BTreeSet<_>>()
        .len() as u32
        * cap;

    // Enumerate candidate routes for this edge ordered by total crossing
    // count; for each, materialize and recurse on the remaining edges.
    let mut found: Option<SearchOutcome> = None;
    'lengths: for target_len in 0..=max_len {
        for &s in &starts {
            let mut counts: BTreeMap<Edge, u32> = BTreeMap::new();
            let mut crossed_set: BTreeSet<Edge> = BTreeSet::new();
            let mut path: Vec<DartId> = Vec::new();
            let stopped = enumerate_routes(
                arr,
                &table,
                s,
                &targets,
                &dist,
                target_len,
                layer,
                cap,
                &fatal,
                &mut counts,
                &mut crossed_set,
                &mut path,
                budget,
                &mut |arr_route: &[DartId]| {
                    let mut trial = arr.clone();
                    if let Err(_e) = materialize(&mut trial, edge, layer, arr_route) {
                        #[cfg(test)]
                        std::eprintln!("materialize failed: {_e} for {arr_route:?}");
                        return false;
                    }
                    if !trial.check_quasiplanar(layer) {
                        return false;
                    }
                    match search_joint(&trial, rest, layer, cap, budget) {
                        SearchOutcome::Feasible(mut routes) => {
                            let crossed: Vec<Edge> = arr_route
                                .iter()
                                .map(|&d| arr.dart_edge(d).expect("real dart"))
                                .collect();
                            routes.insert(0, crossed);
                            found = Some(SearchOutcome::Feasible(routes));
                            true
                        }
                        SearchOutcome::BudgetExceeded => {
                            found = Some(SearchOutcome::BudgetExceeded);
                            true
                        }
                        SearchOutcome::Infeasible => false,
                    }
                },
            );
            if stopped || budget.get() == 0 {
                break 'lengths;
            }
        }
    }
    match found {
        Some(outcome) => outcome,
        None if budget.get() == 0 => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::Infeasible,
    }
}

/// Depth-limited DFS yielding every route with exactly `depth_left`
/// crossings remaining at the start (length-ordered enumeration across
/// calls); prunes by the distance lower bound. Stops early when `visit`
/// returns true.
#[allow(clippy::too_many_arguments)]
fn enumerate_routes(
    arr: &Arrangement,
    table: &StepTable,
    at: u32,
    targets: &BTreeSet<u32>,
    dist: &[u32],
    depth_left: u32,
    layer: usize,
    cap: u32,
    fatal: &BTreeSet<(Edge, Edge)>,
    counts: &mut BTreeMap<Edge, u32>,
    crossed_set: &mut BTreeSet<Edge>,
    path: &mut Vec<DartId>,
    budget: &Cell<u64>,
    visit: &mut dyn FnMut(&[DartId]) -> bool,
) -> bool {
    if depth_left == 0 {
        return targets.contains(&at) && visit(path);
    }
    if dist.get(at as usize).copied().unwrap_or(u32::MAX) > depth_left {
        return false;
    }
    if budget.get() == 0 {
        return false;
    }
    budget.set(budget.get() - 1);
    let bit = 1u32 << layer;
    for &(f, g, d, e) in &table.steps {
        if f != at {
            continue;
        }
        let c = counts.entry(e).or_insert(0);
        if *c >= cap {
            continue;
        }
        let e_curve = arr.curve_of_edge(e).expect("instance edge");
        let in_layer = arr.curve_layers(e_curve) & bit != 0;
        if in_layer {
            let clash = crossed_set
                .iter()
                .any(|&o| o != e && fatal.contains(&order_pair(o, e)));
            if clash {
                continue;
            }
        }
        *c += 1;
        let inserted = in_layer && crossed_set.insert(e);
        path.push(d);
        let stop = enumerate_routes(
            arr,
            table,
            g,
            targets,
            dist,
            depth_left - 1,
            layer,
            cap,
            fatal,
            counts,
            crossed_set,
            path,
            budget,
            visit,
        );
        path.pop();
        if inserted {
            crossed_set.remove(&e);
        }
        *counts.get_mut(&e).unwrap() -= 1;
        if stop {
            return true;
        }
        if budget.get() == 0 {
            return false;
        }
    }
    false
}

/// Materializes a candidate route (sequence of crossed darts at region
/// level) as a real curve so follow-up searches see its crossings.
fn materialize(
    arr: &mut Arrangement,
    edge: Edge,
    layer: usize,
    route: &[DartId],
) -> Result<(), crate::arrangement::ArrangementError> {
    // Gap ranks are live indices: earlier crossings of this same route on
    // the same partner shift later gaps. Same-gap repeats are appended in
    // route order.
    let mut prior: Vec<(CurveId, usize)> = Vec::new();
    let steps: Vec<PrescribedCross> = route
        .iter()
        .map(|&d| {
            let curve = arr.dart_curve(d);
            let fwd = if arr.curve_chain(curve).contains(&d) {
                d
            } else {
                arr.twin(d)
            };
            let r = arr.real_gap_of_chain_dart(curve, fwd);
            let bump = prior.iter().filter(|&&(c, rr)| c == curve && rr <= r).count();
            prior.push((curve, r));
            PrescribedCross {
                partner: curve,
                rank: r + bump,
                from_left: fwd == d,
            }
        })
        .collect();
    arr.insert_edge_prescribed(
        edge,
        CurveKind::Real {
            edge,
            layers: 1 << layer,
        },
        &steps,
        None,
        None,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_instance_counts() {
        let g = build_simple_negative_instance();
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.layer(0).unwrap().len(), 51); // 45 + 6
        assert_eq!(g.layer(1).unwrap().len(), 46); // 45 + 1
        assert_eq!(g.layer(2).unwrap().len(), 10);
        let union12: EdgeSet = g
            .layer(0)
            .unwrap()
            .union(g.layer(1).unwrap())
            .copied()
            .collect();
        assert_eq!(union12.len(), 52);
    }

    #[test]
    fn density_certificate_exact() {
        let g = build_simple_negative_instance();
        let cert = certify_density(&g, (0, 1));
        assert_eq!(cert.union_edge_count, 52);
        assert_eq!(cert.bound.doubled, 13 * 11 - 40); // 103 = 2 * 51.5
        assert!(cert.exceeds);
        assert_eq!(alloc::format!("{}", cert.bound), "103/2");
    }

    #[test]
    fn density_non_exceeding_cases() {
        // Two empty layers.
        let g = LayeredGraph::new(4, vec![EdgeSet::new(), EdgeSet::new()]).unwrap();
        assert!(!certify_density(&g, (0, 1)).exceeds);
        // K4 against K4: 6 edges, bound 6.5*4-20 = 6.
        let k4 = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let g = LayeredGraph::new(4, vec![k4.clone(), k4]).unwrap();
        let cert = certify_density(&g, (0, 1));
        assert_eq!(cert.union_edge_count, 6);
        assert_eq!(cert.bound.doubled, 12);
        assert!(!cert.exceeds);
    }

    #[test]
    fn escape_arrangement_builds_and_verifies() {
        let esc = build_escape_arrangement().unwrap();
        assert!(esc.structure.all_hold());
        assert!(esc.arrangement.check_quasiplanar(0));
        // The fixed drawing is intentionally non-simple.
        assert!(!esc.arrangement.check_simple(0));
        assert!(esc.arrangement.euler_real_holds());
    }

    #[test]
    fn escape_infeasible_at_cap_one() {
        let esc = build_escape_arrangement().unwrap();
        let res = search_quasiplanar_insertion(&esc.arrangement, &esc.pending, 1, 1, 10_000_000);
        assert_eq!(res.outcome, SearchOutcome::Infeasible);
    }

    #[test]
    fn escape_infeasible_at_cap_two() {
        let esc = build_escape_arrangement().unwrap();
        let res = search_quasiplanar_insertion(&esc.arrangement, &esc.pending, 1, 2, 10_000_000);
        assert_eq!(res.outcome, SearchOutcome::Infeasible);
    }

    #[test]
    fn escape_becomes_feasible_without_one_corridor_edge() {
        // Negative control: removing (v11,v12) opens the outermost ring, and
        // a cap-3 escape exists; the search must find it rather than being
        // vacuously infeasible.
        let esc = build_escape_arrangement().unwrap();
        let mut arr = esc.arrangement.clone();
        let cid = arr.curve_of_edge(Edge::new(10, 11)).unwrap();
        arr.delete_curve(cid);
        let res = search_quasiplanar_insertion(&arr, &[Edge::new(16, 18)], 1, 3, 10_000_000);
        match res.outcome {
            SearchOutcome::Feasible(routes) => {
                assert_eq!(routes.len(), 1);
                assert!(!routes[0].is_empty());
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn single_edge_on_common_face_is_feasible() {
        // Trivial feasibility: a fresh edge between co-facial vertices.
        let mut arr = Arrangement::new(4);
        let tri = edge_set([(0, 1), (1, 2), (0, 2)]);
        arr.insert_planar_part(&tri, None, &EdgeSet::new(), &|_| 0b11).unwrap();
        let res =
            search_quasiplanar_insertion(&arr, &[Edge::new(0, 3)], 1, 1, 100_000);
        match res.outcome {
            SearchOutcome::Feasible(routes) => assert!(routes[0].is_empty()),
            other => panic!("expected feasible, got {other:?}"),
        }
    }
}

#[cfg(test)]
mod debug_joint {
    use super::*;

    #[test]
    fn probe_joint() {
        let esc = build_escape_arrangement().unwrap();
        let mut arr = esc.arrangement.clone();
        let cid = arr.curve_of_edge(Edge::new(10, 11)).unwrap();
        arr.delete_curve(cid);
        // Tiny budget to see what happens fast.
        let res = search_quasiplanar_insertion(&arr, &[Edge::new(16, 18)], 1, 3, 50_000);
        std::println!("outcome {:?} explored {}", res.outcome, res.explored_routes);
    }
}
