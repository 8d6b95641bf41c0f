//! The union drawing as a combinatorial planarization.
//!
//! An [`Arrangement`] stores curves (one per union edge, carrying a layer
//! mask) as chains through degree-4 crossing nodes, together with the
//! rotation system of the crossing-augmented graph. Faces are retraced
//! after every mutation; new curves enter through dual-graph routing: a
//! walk in the face-adjacency graph whose steps cross existing segments.
//!
//! A virtual frame (a hub node joined to every vertex) keeps the
//! planarization connected at all times, so faces are single closed walks
//! and routing never has to reason about nested boundary cycles. Frame
//! curves are crossed at zero cost and are invisible in all public views:
//! reported Euler counts, crossing sequences and layer checks refer to the
//! real structure only.
//!
//! Rotations are counterclockwise and faces lie on the left of their darts;
//! the corner after rotation entry `d` (up to the ccw successor of `d`)
//! belongs to the face left of `d`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Edge, EdgeSet, LayeredGraph, VertexId};
use crate::planar::RotationSystem;

pub type NodeId = u32;
pub type DartId = u32;
pub type FaceId = u32;
pub type CurveId = u32;

const NO_FACE: FaceId = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    /// An original vertex of the instance.
    Vertex,
    /// The virtual frame hub.
    FrameHub,
    /// A crossing point of the two named curves.
    Crossing(CurveId, CurveId),
    /// Removed crossing (after curve deletion).
    Dead,
}

#[derive(Clone, Copy, Debug)]
struct DartData {
    from: NodeId,
    curve: CurveId,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurveKind {
    /// A drawn union edge with its layer membership mask.
    Real { edge: Edge, layers: u32 },
    /// Frame edge from the hub to a vertex.
    Frame,
    /// Geometric anchor used only during drawing import: blocks routing
    /// like a real curve but carries no edge identity; deleted before the
    /// import returns.
    Anchor,
}

#[derive(Clone, Debug)]
struct Curve {
    kind: CurveKind,
    /// Chain of forward darts from the first endpoint to the second.
    chain: Vec<DartId>,
}

/// A dual route: departure corner, ordered crossed darts, arrival corner.
#[derive(Clone, Debug)]
pub struct Route {
    pub start_corner: Option<DartId>,
    pub crossings: Vec<DartId>,
    pub end_corner: Option<DartId>,
}

/// One prescribed crossing for `insert_edge_prescribed`: cross `partner`
/// inside its `rank`-th gap between real crossings (counted live, at the
/// moment this step executes), from the left side when `from_left`.
#[derive(Clone, Copy, Debug)]
pub struct PrescribedCross {
    pub partner: CurveId,
    pub rank: usize,
    pub from_left: bool,
}

struct BuildState {
    cid: CurveId,
    u: NodeId,
    prev_node: NodeId,
    prev_back: Option<DartId>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ArrangementError {
    /// Routing found no admissible dual walk for an edge.
    Unroutable { edge: Edge },
    DuplicateEdge(Edge),
    BadEndpoints { u: VertexId, v: VertexId },
    /// Realized cyclic order of predrawn edges contradicts the target
    /// embedding at this vertex (condition C.1).
    RotationMismatch { vertex: VertexId },
    /// Predrawn curves of one part cross each other.
    PredrawnCrossing { a: Edge, b: Edge },
    MissingPredrawn(Edge),
    /// Arrangement does not cover exactly the instance edges.
    Coverage(String),
    /// Internal structural invariant broken; indicates a bug.
    Corrupt(&'static str),
}

impl fmt::Display for ArrangementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrangementError::Unroutable { edge } => write!(f, "no admissible route for {edge}"),
            ArrangementError::DuplicateEdge(e) => write!(f, "edge {e} already drawn"),
            ArrangementError::BadEndpoints { u, v } => write!(f, "bad endpoints {u},{v}"),
            ArrangementError::RotationMismatch { vertex } => {
                write!(f, "realized rotation contradicts target at vertex {vertex} (C.1)")
            }
            ArrangementError::PredrawnCrossing { a, b } => {
                write!(f, "predrawn edges {a} and {b} cross within one part")
            }
            ArrangementError::MissingPredrawn(e) => write!(f, "predrawn edge {e} not drawn"),
            ArrangementError::Coverage(s) => write!(f, "coverage mismatch: {s}"),
            ArrangementError::Corrupt(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for ArrangementError {}

#[derive(Clone, Debug)]
pub struct Arrangement {
    n: u32,
    nodes_kind: Vec<NodeKind>,
    rotations: Vec<Vec<DartId>>,
    darts: Vec<Option<DartData>>,
    curves: Vec<Option<Curve>>,
    by_edge: BTreeMap<Edge, CurveId>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<DartId>>,
    outer_anchor: DartId,
}

impl Arrangement {
    /// `n` isolated vertices: one real face, no crossings.
    pub fn new(n: u32) -> Self {
        let hub = n;
        let mut arr = Arrangement {
            n,
            nodes_kind: vec![NodeKind::Vertex; n as usize],
            rotations: vec![Vec::new(); n as usize + 1],
            darts: Vec::new(),
            curves: Vec::new(),
            by_edge: BTreeMap::new(),
            face_of: Vec::new(),
            faces: Vec::new(),
            outer_anchor: 0,
        };
        arr.nodes_kind.push(NodeKind::FrameHub);
        for v in 0..n {
            let cid = arr.curves.len() as CurveId;
            let (d, t) = arr.new_dart_pair(hub, v, cid);
            arr.curves.push(Some(Curve {
                kind: CurveKind::Frame,
                chain: vec![d],
            }));
            arr.rotations[hub as usize].push(d);
            arr.rotations[v as usize].push(t);
        }
        arr.retrace();
        arr
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    fn new_dart_pair(&mut self, a: NodeId, b: NodeId, curve: CurveId) -> (DartId, DartId) {
        let d = self.darts.len() as DartId;
        self.darts.push(Some(DartData { from: a, curve }));
        self.darts.push(Some(DartData { from: b, curve }));
        (d, d + 1)
    }

    #[inline]
    pub fn twin(&self, d: DartId) -> DartId {
        d ^ 1
    }

    pub fn dart_from(&self, d: DartId) -> NodeId {
        self.darts[d as usize].expect("live dart").from
    }

    pub fn dart_to(&self, d: DartId) -> NodeId {
        self.dart_from(self.twin(d))
    }

    pub fn dart_curve(&self, d: DartId) -> CurveId {
        self.darts[d as usize].expect("live dart").curve
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    /// Edge of the dart's curve when the dart is live and real.
    pub fn dart_edge(&self, d: DartId) -> Option<Edge> {
        let data = self.darts.get(d as usize)?.as_ref()?;
        self.curve_edge(data.curve)
    }

    pub fn node_count(&self) -> usize {
        self.nodes_kind.len()
    }

    pub fn node_kind(&self, x: NodeId) -> NodeKind {
        self.nodes_kind[x as usize]
    }

    pub fn rotation(&self, x: NodeId) -> &[DartId] {
        &self.rotations[x as usize]
    }

    pub fn curve_kind(&self, c: CurveId) -> CurveKind {
        self.curves[c as usize].as_ref().expect("live curve").kind
    }

    pub fn curve_is_live(&self, c: CurveId) -> bool {
        self.curves[c as usize].is_some()
    }

    pub fn curve_of_edge(&self, e: Edge) -> Option<CurveId> {
        self.by_edge.get(&e).copied()
    }

    pub fn curve_edge(&self, c: CurveId) -> Option<Edge> {
        match self.curves[c as usize].as_ref()?.kind {
            CurveKind::Real { edge, .. } => Some(edge),
            _ => None,
        }
    }

    pub fn curve_layers(&self, c: CurveId) -> u32 {
        match self.curves[c as usize].as_ref().map(|c| c.kind) {
            Some(CurveKind::Real { layers, .. }) => layers,
            _ => 0,
        }
    }

    pub fn set_curve_layers(&mut self, c: CurveId, mask: u32) {
        if let Some(curve) = self.curves[c as usize].as_mut() {
            if let CurveKind::Real { edge, .. } = curve.kind {
                curve.kind = CurveKind::Real { edge, layers: mask };
            }
        }
    }

    pub fn curve_chain(&self, c: CurveId) -> &[DartId] {
        &self.curves[c as usize].as_ref().expect("live curve").chain
    }

    /// First chain dart of the `rank`-th gap between real crossings along
    /// a curve (gap 0 precedes the first real crossing). Frame crossings
    /// subdivide gaps further; any dart inside one gap is equivalent up to
    /// isotopy across frame edges, so the first is chosen.
    pub fn chain_dart_at_real_gap(&self, curve: CurveId, rank: usize) -> DartId {
        let chain = self.curve_chain(curve).to_vec();
        let mut gap = 0usize;
        for (i, &d) in chain.iter().enumerate() {
            if i > 0 && self.is_real_crossing_node(self.dart_from(d), curve) {
                gap += 1;
            }
            if gap == rank {
                return d;
            }
        }
        panic!("gap rank {rank} beyond the curve's real crossings")
    }

    /// Which real-crossing gap a chain dart belongs to.
    pub fn real_gap_of_chain_dart(&self, curve: CurveId, dart: DartId) -> usize {
        let chain = self.curve_chain(curve);
        let mut gap = 0usize;
        for (i, &d) in chain.iter().enumerate() {
            if i > 0 && self.is_real_crossing_node(self.dart_from(d), curve) {
                gap += 1;
            }
            if d == dart {
                return gap;
            }
        }
        panic!("dart not on the curve's chain")
    }

    fn is_real_crossing_node(&self, node: NodeId, curve: CurveId) -> bool {
        match self.nodes_kind[node as usize] {
            NodeKind::Crossing(c1, c2) => {
                let partner = if c1 == curve { c2 } else { c1 };
                self.curve_blocks(partner)
            }
            _ => false,
        }
    }

    /// Crossing nodes along a real curve, ordered from its smaller endpoint,
    /// restricted to crossings with real curves.
    pub fn crossing_sequence(&self, c: CurveId) -> Vec<NodeId> {
        self.curve_chain(c)
            .iter()
            .skip(1)
            .map(|&d| self.dart_from(d))
            .filter(|&x| matches!(self.nodes_kind[x as usize], NodeKind::Crossing(a, b)
                if self.curve_is_real(a) && self.curve_is_real(b)))
            .collect()
    }

    pub fn real_curves(&self) -> impl Iterator<Item = (CurveId, Edge, u32)> + '_ {
        self.curves.iter().enumerate().filter_map(|(i, c)| {
            let c = c.as_ref()?;
            match c.kind {
                CurveKind::Real { edge, layers } => Some((i as CurveId, edge, layers)),
                _ => None,
            }
        })
    }

    fn curve_is_real(&self, c: CurveId) -> bool {
        matches!(
            self.curves[c as usize].as_ref().map(|c| c.kind),
            Some(CurveKind::Real { .. })
        )
    }

    /// Curves that act as obstacles for routing: real curves and import
    /// anchors. Frame edges are always transparent.
    fn curve_blocks(&self, c: CurveId) -> bool {
        matches!(
            self.curves[c as usize].as_ref().map(|c| c.kind),
            Some(CurveKind::Real { .. } | CurveKind::Anchor)
        )
    }

    /// Crossing nodes between two real curves.
    pub fn crossings(&self) -> impl Iterator<Item = (NodeId, CurveId, CurveId)> + '_ {
        self.nodes_kind.iter().enumerate().filter_map(|(i, k)| match *k {
            NodeKind::Crossing(a, b) if self.curve_is_real(a) && self.curve_is_real(b) => {
                Some((i as NodeId, a, b))
            }
            _ => None,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings().count()
    }

    // ------------------------------------------------------------------
    // Faces
    // ------------------------------------------------------------------

    fn rotation_pos(&self, v: NodeId, d: DartId) -> usize {
        self.rotations[v as usize]
            .iter()
            .position(|&x| x == d)
            .expect("dart present in rotation")
    }

    fn rot_prev(&self, v: NodeId, d: DartId) -> DartId {
        let rot = &self.rotations[v as usize];
        let i = self.rotation_pos(v, d);
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Next dart of the face walk, face kept on the left.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.rot_prev(self.dart_to(d), self.twin(d))
    }

    fn retrace(&mut self) {
        self.face_of = vec![NO_FACE; self.darts.len()];
        self.faces.clear();
        for d0 in 0..self.darts.len() as DartId {
            if self.darts[d0 as usize].is_none() || self.face_of[d0 as usize] != NO_FACE {
                continue;
            }
            let fid = self.faces.len() as FaceId;
            let mut walk = Vec::new();
            let mut d = d0;
            loop {
                walk.push(d);
                self.face_of[d as usize] = fid;
                d = self.face_next(d);
                if d == d0 {
                    break;
                }
            }
            self.faces.push(walk);
        }
        debug_assert!(self.euler_with_frame_holds(), "planarization lost planarity");
    }

    fn euler_with_frame_holds(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let v = self
            .nodes_kind
            .iter()
            .filter(|k| !matches!(k, NodeKind::Dead))
            .count() as i64;
        let e = self.darts.iter().filter(|d| d.is_some()).count() as i64 / 2;
        let f = self.faces.len() as i64;
        v - e + f == 2
    }

    pub fn face_of_dart(&self, d: DartId) -> FaceId {
        self.face_of[d as usize]
    }

    pub fn faces_with_frame(&self) -> &[Vec<DartId>] {
        &self.faces
    }

    /// The designated outer face: the frame hub is thought of as lying in
    /// the unbounded region, and its first corner stays on it.
    pub fn outer_face(&self) -> FaceId {
        if self.darts.is_empty() {
            return 0;
        }
        self.face_of[self.outer_anchor as usize]
    }

    /// Classes of frame-faces merged across frame/scaffold darts: the faces
    /// of the real structure. Returns a representative class id per face.
    pub fn real_face_classes(&self) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..self.faces.len() as u32).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            let mut c = x;
            while p[c as usize] != r {
                let nx = p[c as usize];
                p[c as usize] = r;
                c = nx;
            }
            r
        }
        for d in 0..self.darts.len() as DartId {
            let Some(data) = self.darts[d as usize] else { continue };
            if !self.curve_blocks(data.curve) {
                let (a, b) = (self.face_of[d as usize], self.face_of[self.twin(d) as usize]);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra as usize] = rb;
                }
            }
        }
        (0..self.faces.len() as u32).map(|f| find(&mut parent, f)).collect()
    }

    pub fn real_face_count(&self) -> usize {
        if self.faces.is_empty() {
            return 1;
        }
        self.real_face_classes().iter().collect::<BTreeSet<_>>().len()
    }

    /// Euler check on the real structure: `v - e + f = 1 + c`, faces merged
    /// across the frame so the shared outer region counts once, components
    /// counted over real edges with isolated vertices included.
    pub fn euler_real_holds(&self) -> bool {
        let v = self
            .nodes_kind
            .iter()
            .filter(|k| matches!(k, NodeKind::Vertex | NodeKind::Crossing(..)))
            .count() as i64;
        let e = self
            .darts
            .iter()
            .flatten()
            .filter(|d| self.curve_is_real(d.curve))
            .count() as i64
            / 2;
        let f = self.real_face_count() as i64;
        let c = self.real_component_count() as i64;
        // Frame-real crossing nodes are degree-2 in the real view (the real
        // curve passes through); they add one vertex and one edge each, so
        // the formula is unaffected.
        v - e + f == 1 + c
    }

    fn real_component_count(&self) -> usize {
        let total = self.nodes_kind.len();
        let mut parent: Vec<u32> = (0..total as u32).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            r
        }
        for d in (0..self.darts.len() as DartId).step_by(2) {
            let Some(data) = self.darts[d as usize] else { continue };
            if self.curve_is_real(data.curve) {
                let (a, b) = (self.dart_from(d), self.dart_to(d));
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra as usize] = rb;
                }
            }
        }
        let mut roots = BTreeSet::new();
        for x in 0..total as u32 {
            if matches!(self.nodes_kind[x as usize], NodeKind::Vertex | NodeKind::Crossing(..)) {
                roots.insert(find(&mut parent, x));
            }
        }
        roots.len()
    }

    /// Structural self-check used by tests and debug builds.
    pub fn validate(&self) -> Result<(), ArrangementError> {
        for (cid, curve) in self.curves.iter().enumerate() {
            let Some(curve) = curve else { continue };
            let chain = &curve.chain;
            if chain.is_empty() {
                return Err(ArrangementError::Corrupt("empty curve chain"));
            }
            for w in chain.windows(2) {
                if self.dart_to(w[0]) != self.dart_from(w[1]) {
                    return Err(ArrangementError::Corrupt("broken chain"));
                }
            }
            if let CurveKind::Real { edge, .. } = curve.kind {
                if self.dart_from(chain[0]) != edge.source()
                    || self.dart_to(*chain.last().unwrap()) != edge.target()
                {
                    return Err(ArrangementError::Corrupt("chain endpoints disagree with edge"));
                }
            }
            let _ = cid;
        }
        for x in 0..self.nodes_kind.len() as NodeId {
            if let NodeKind::Crossing(a, b) = self.nodes_kind[x as usize] {
                let rot = &self.rotations[x as usize];
                if rot.len() != 4 {
                    return Err(ArrangementError::Corrupt("crossing degree must be 4"));
                }
                let curves: Vec<CurveId> = rot.iter().map(|&d| self.dart_curve(d)).collect();
                if curves[0] != curves[2] || curves[1] != curves[3] || curves[0] == curves[1] {
                    return Err(ArrangementError::Corrupt("crossing branches must alternate"));
                }
                let pair = [curves[0], curves[1]];
                if !pair.contains(&a) || !pair.contains(&b) {
                    return Err(ArrangementError::Corrupt("crossing labels disagree"));
                }
            }
        }
        for (v, rot) in self.rotations.iter().enumerate() {
            for &d in rot {
                if self.darts[d as usize].is_none() || self.dart_from(d) != v as NodeId {
                    return Err(ArrangementError::Corrupt("rotation lists foreign dart"));
                }
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Routing
    // ------------------------------------------------------------------

    /// Shortest dual walk between two corner sets, counting real crossings
    /// only; frame and scaffold darts are free. `wall` bans curves. 0-1 BFS,
    /// deterministic.
    fn route_corners(
        &self,
        starts: &[DartId],
        targets: &[DartId],
        wall: &dyn Fn(CurveId) -> bool,
    ) -> Option<Route> {
        let mut target_faces: BTreeMap<FaceId, DartId> = BTreeMap::new();
        for &c in targets.iter().rev() {
            target_faces.insert(self.face_of[c as usize], c);
        }
        let nf = self.faces.len();
        let mut dist = vec![u32::MAX; nf];
        let mut parent: Vec<Option<(FaceId, DartId)>> = vec![None; nf];
        let mut seed: Vec<Option<DartId>> = vec![None; nf];
        let mut deque: VecDeque<FaceId> = VecDeque::new();
        for &c in starts {
            let f = self.face_of[c as usize] as usize;
            if dist[f] != 0 {
                dist[f] = 0;
                seed[f] = Some(c);
                deque.push_back(f as FaceId);
            }
        }
        let mut goal: Option<FaceId> = None;
        while let Some(f) = deque.pop_front() {
            if target_faces.contains_key(&f) {
                goal = Some(f);
                break;
            }
            let d_here = dist[f as usize];
            for &d in &self.faces[f as usize] {
                let curve = self.dart_curve(d);
                let blocks = self.curve_blocks(curve);
                if blocks && wall(curve) {
                    continue;
                }
                let g = self.face_of[self.twin(d) as usize] as usize;
                let nd = d_here + u32::from(blocks);
                if nd < dist[g] {
                    dist[g] = nd;
                    parent[g] = Some((f, d));
                    if blocks {
                        deque.push_back(g as FaceId);
                    } else {
                        deque.push_front(g as FaceId);
                    }
                }
            }
        }
        let goal = goal?;
        let mut crossings = Vec::new();
        let mut f = goal;
        while let Some((pf, d)) = parent[f as usize] {
            crossings.push(d);
            f = pf;
        }
        crossings.reverse();
        // Drop zero-cost frame/scaffold steps from the recorded crossings?
        // No: they subdivide curves and must be committed.
        Some(Route {
            start_corner: seed[f as usize],
            crossings,
            end_corner: Some(target_faces[&goal]),
        })
    }

    /// Starts building a curve; darts are added crossing by crossing.
    fn begin_curve(&mut self, edge: Edge, kind: CurveKind) -> BuildState {
        let cid = self.curves.len() as CurveId;
        self.curves.push(Some(Curve {
            kind,
            chain: Vec::new(),
        }));
        if let CurveKind::Real { edge, .. } = kind {
            self.by_edge.insert(edge, cid);
        }
        BuildState {
            cid,
            u: edge.source(),
            prev_node: edge.source(),
            prev_back: None,
        }
    }

    /// Extends the curve under construction through one crossing of
    /// `crossed` (entered from its left face). Dart ids in `watch` that get
    /// re-pointed by the subdivision are remapped in place. Does not
    /// retrace; the caller retraces before consulting faces again.
    fn micro_cross(
        &mut self,
        st: &mut BuildState,
        crossed: DartId,
        s_corner: &mut Option<DartId>,
        watch: &mut [&mut Vec<DartId>],
    ) {
        let b = self.dart_to(crossed);
        let other_curve = self.dart_curve(crossed);
        let x = self.nodes_kind.len() as NodeId;
        self.nodes_kind.push(NodeKind::Crossing(other_curve, st.cid));
        self.rotations.push(Vec::new());

        // Split segment a-b at x, keeping the pair ids on a's side.
        let tw = self.twin(crossed);
        self.darts[tw as usize].as_mut().unwrap().from = x;
        let (xb, bx) = self.new_dart_pair(x, b, other_curve);
        {
            let curve = self.curves[other_curve as usize].as_mut().unwrap();
            if let Some(pos) = curve.chain.iter().position(|&d| d == crossed) {
                curve.chain.insert(pos + 1, xb);
            } else {
                let pos = curve
                    .chain
                    .iter()
                    .position(|&d| d == tw)
                    .expect("crossed dart on its chain");
                curve.chain[pos] = bx;
                curve.chain.insert(pos + 1, tw);
            }
        }
        let bpos = self.rotation_pos(b, tw);
        self.rotations[b as usize][bpos] = bx;
        if *s_corner == Some(tw) {
            *s_corner = Some(bx);
        }
        for list in watch.iter_mut() {
            for entry in list.iter_mut() {
                if *entry == tw {
                    *entry = bx;
                }
            }
        }

        // New-curve darts reaching x.
        let (fwd, back) = self.new_dart_pair(st.prev_node, x, st.cid);
        self.curves[st.cid as usize].as_mut().unwrap().chain.push(fwd);
        match st.prev_back {
            None => self.insert_after_corner(st.u, fwd, *s_corner),
            Some(_) => self.rotations[st.prev_node as usize].push(fwd),
        }
        // The curve crosses from the left of `crossed` to its right: ccw at
        // x this reads [x->b, x->incoming, x->a, x->outgoing].
        self.rotations[x as usize] = vec![xb, back, tw];
        st.prev_back = Some(back);
        st.prev_node = x;
    }

    /// Lands the curve under construction at its target vertex.
    fn finish_curve(&mut self, st: BuildState, v: NodeId, s_corner: Option<DartId>, e_corner: Option<DartId>) -> CurveId {
        let (fwd, back) = self.new_dart_pair(st.prev_node, v, st.cid);
        self.curves[st.cid as usize].as_mut().unwrap().chain.push(fwd);
        match st.prev_back {
            None => self.insert_after_corner(st.u, fwd, s_corner),
            Some(_) => self.rotations[st.prev_node as usize].push(fwd),
        }
        self.insert_after_corner(v, back, e_corner);
        self.retrace();
        debug_assert_eq!(self.validate(), Ok(()));
        st.cid
    }

    /// Inserts a curve for `edge` along `route`. The route must come from
    /// `route_corners` against the current face structure; its darts are
    /// pairwise distinct, so batch committing is sound.
    fn commit_route(&mut self, edge: Edge, kind: CurveKind, route: &Route) -> CurveId {
        let v = edge.target() as NodeId;
        let mut st = self.begin_curve(edge, kind);
        let mut s_corner = route.start_corner;
        let mut e_watch: Vec<DartId> = route.end_corner.into_iter().collect();
        for &crossed in &route.crossings {
            let mut watch = [&mut e_watch];
            self.micro_cross(&mut st, crossed, &mut s_corner, &mut watch);
        }
        self.finish_curve(st, v, s_corner, e_watch.first().copied())
    }

    fn insert_after_corner(&mut self, v: NodeId, dart: DartId, corner: Option<DartId>) {
        match corner {
            Some(c) if !self.rotations[v as usize].is_empty() => {
                let pos = self.rotation_pos(v, c);
                self.rotations[v as usize].insert(pos + 1, dart);
            }
            _ => self.rotations[v as usize].push(dart),
        }
    }

    /// Routed insertion of one edge. `start_corners`/`end_corners` restrict
    /// the admissible departure/arrival gaps (None means any corner).
    pub fn insert_edge_routed(
        &mut self,
        edge: Edge,
        kind: CurveKind,
        wall: &dyn Fn(CurveId) -> bool,
        start_corners: Option<Vec<DartId>>,
        end_corners: Option<Vec<DartId>>,
    ) -> Result<CurveId, ArrangementError> {
        let (u, v) = edge.endpoints();
        if u == v || v >= self.n {
            return Err(ArrangementError::BadEndpoints { u, v });
        }
        if matches!(kind, CurveKind::Real { .. }) && self.by_edge.contains_key(&edge) {
            return Err(ArrangementError::DuplicateEdge(edge));
        }
        let starts = start_corners.unwrap_or_else(|| self.rotations[u as usize].clone());
        let targets = end_corners.unwrap_or_else(|| self.rotations[v as usize].clone());
        if starts.is_empty() || targets.is_empty() {
            return Err(ArrangementError::Corrupt("vertex without corners"));
        }
        let route = self
            .route_corners(&starts, &targets, wall)
            .ok_or(ArrangementError::Unroutable { edge })?;
        Ok(self.commit_route(edge, kind, &route))
    }

    /// Inserts an edge whose real crossings are prescribed in order (as live
    /// chain positions on partner curves); frame faces in between are
    /// bridged by zero-cost hops computed step by step against the live
    /// structure. Used by the geometric importer, where the crossing
    /// sequence comes from exact segment intersections.
    pub fn insert_edge_prescribed(
        &mut self,
        edge: Edge,
        kind: CurveKind,
        steps: &[PrescribedCross],
        start_corners: Option<Vec<DartId>>,
        end_corners: Option<Vec<DartId>>,
    ) -> Result<CurveId, ArrangementError> {
        let (u, v) = edge.endpoints();
        if u == v || v >= self.n {
            return Err(ArrangementError::BadEndpoints { u, v });
        }
        if matches!(kind, CurveKind::Real { .. }) && self.by_edge.contains_key(&edge) {
            return Err(ArrangementError::DuplicateEdge(edge));
        }
        let starts = start_corners.unwrap_or_else(|| self.rotations[u as usize].clone());
        let mut targets = end_corners.unwrap_or_else(|| self.rotations[v as usize].clone());
        let block_all = |_: CurveId| true;

        let mut st = self.begin_curve(edge, kind);
        let mut s_corner: Option<DartId> = None;
        let mut cursor: Vec<DartId> = starts;
        let mut first = true;
        for (_step_idx, step) in steps.iter().enumerate() {
            let seg_dart = self.chain_dart_at_real_gap(step.partner, step.rank);
            let d = if step.from_left {
                seg_dart
            } else {
                self.twin(seg_dart)
            };
            let hop = match self.route_corners(&cursor, &[d], &block_all) {
                Some(h) => h,
                None => {
                    #[cfg(test)]
                    {
                        std::eprintln!(
                            "prescribed insertion of {edge} stuck at step {} of {}: cursor faces {:?} target dart {} face {} (curve {:?} gap {})",
                            _step_idx,
                            steps.len(),
                            cursor.iter().map(|&c| self.face_of[c as usize]).collect::<alloc::vec::Vec<_>>(),
                            d,
                            self.face_of[d as usize],
                            self.curve_edge(step.partner),
                            step.rank,
                        );
                    }
                    self.abort_curve(st);
                    return Err(ArrangementError::Unroutable { edge });
                }
            };
            if first {
                s_corner = hop.start_corner;
                first = false;
            }
            for &f in &hop.crossings {
                let mut watch = [&mut targets];
                self.micro_cross(&mut st, f, &mut s_corner, &mut watch);
            }
            let mut watch = [&mut targets];
            self.micro_cross(&mut st, d, &mut s_corner, &mut watch);
            // Resume from the corner behind the crossing just made.
            cursor = vec![self.rotations[st.prev_node as usize][2]];
            self.retrace();
        }
        let hop = match self.route_corners(&cursor, &targets, &block_all) {
            Some(h) => h,
            None => {
                self.abort_curve(st);
                return Err(ArrangementError::Unroutable { edge });
            }
        };
        if first {
            s_corner = hop.start_corner;
        }
        let mut e_corner = hop.end_corner;
        for &f in &hop.crossings {
            let mut e_list: Vec<DartId> = e_corner.into_iter().collect();
            {
                let mut watch = [&mut e_list];
                self.micro_cross(&mut st, f, &mut s_corner, &mut watch);
            }
            e_corner = e_list.first().copied();
        }
        Ok(self.finish_curve(st, v, s_corner, e_corner))
    }

    /// Drops a half-built curve (error path of prescribed insertion).
    /// A mid-build abort leaves the arrangement unusable; callers treat the
    /// error as fatal and discard it.
    fn abort_curve(&mut self, st: BuildState) {
        if let Some(curve) = self.curves[st.cid as usize].take() {
            if let CurveKind::Real { edge, .. } = curve.kind {
                self.by_edge.remove(&edge);
            }
        }
    }

    /// Deletes a curve, un-subdividing every crossing along it.
    pub fn delete_curve(&mut self, cid: CurveId) {
        let curve = self.curves[cid as usize].take().expect("live curve");
        if let CurveKind::Real { edge, .. } = curve.kind {
            self.by_edge.remove(&edge);
        }
        let interior: Vec<NodeId> = curve
            .chain
            .iter()
            .skip(1)
            .map(|&d| self.dart_from(d))
            .collect();
        for &d in &curve.chain {
            let tw = self.twin(d);
            let from = self.dart_from(d);
            let to = self.dart_from(tw);
            self.rotations[from as usize].retain(|&x| x != d);
            self.rotations[to as usize].retain(|&x| x != tw);
            self.darts[d as usize] = None;
            self.darts[tw as usize] = None;
        }
        for x in interior {
            let rot = self.rotations[x as usize].clone();
            debug_assert_eq!(rot.len(), 2, "crossing keeps exactly the partner's darts");
            let d1 = rot[0]; // x -> a
            let d2 = rot[1]; // x -> b
            let t1 = self.twin(d1); // a -> x
            let t2 = self.twin(d2); // b -> x
            let partner = self.dart_curve(d1);
            let b = self.dart_from(t2);
            // Keep pair {d1, t1} as the merged segment a-b.
            self.darts[d1 as usize].as_mut().unwrap().from = b;
            let bpos = self.rotation_pos(b, t2);
            self.rotations[b as usize][bpos] = d1;
            {
                let pc = self.curves[partner as usize].as_mut().unwrap();
                if let Some(pos) = pc.chain.iter().position(|&cd| cd == t1) {
                    // chain runs a->x (t1) then x->b (d2): keep t1 = a->b.
                    debug_assert_eq!(pc.chain.get(pos + 1), Some(&d2));
                    pc.chain.remove(pos + 1);
                } else {
                    // chain runs b->x (t2) then x->a (d1): keep d1 = b->a.
                    let pos = pc
                        .chain
                        .iter()
                        .position(|&cd| cd == t2)
                        .expect("segment on partner chain");
                    debug_assert_eq!(pc.chain.get(pos + 1), Some(&d1));
                    pc.chain.remove(pos);
                }
            }
            self.darts[d2 as usize] = None;
            self.darts[t2 as usize] = None;
            self.rotations[x as usize].clear();
            self.nodes_kind[x as usize] = NodeKind::Dead;
        }
        self.retrace();
        debug_assert_eq!(self.validate(), Ok(()));
    }

    // ------------------------------------------------------------------
    // Corner constraints
    // ------------------------------------------------------------------

    /// Darts at `v` belonging to live real curves, in rotation order, with
    /// their edges.
    pub fn real_darts_at(&self, v: VertexId) -> Vec<(DartId, Edge)> {
        self.rotations[v as usize]
            .iter()
            .filter_map(|&d| {
                let c = self.dart_curve(d);
                self.curve_edge(c).map(|e| (d, e))
            })
            .collect()
    }

    /// Admissible corner darts at `v` for inserting `edge` so that the
    /// realized cyclic order of `ordered` edges matches `target_order`
    /// (the full target rotation at `v`, as neighbor vertices). Walls not
    /// in `ordered` do not constrain. Returns None when unconstrained.
    fn gap_corners(
        &self,
        v: VertexId,
        edge: Edge,
        part: &EdgeSet,
        target_order: &[VertexId],
    ) -> Result<Option<Vec<DartId>>, ArrangementError> {
        // Drawn part edges at v, in realized rotation order.
        let drawn: Vec<(DartId, Edge)> = self
            .real_darts_at(v)
            .into_iter()
            .filter(|(_, e)| part.contains(e))
            .collect();
        if drawn.is_empty() {
            return Ok(None);
        }
        // Target cyclic order of part edges at v, as edges.
        let tau: Vec<Edge> = target_order
            .iter()
            .map(|&w| Edge::new(v, w))
            .filter(|e| part.contains(e))
            .collect();
        let me = tau
            .iter()
            .position(|&e| e == edge)
            .ok_or(ArrangementError::Corrupt("edge missing from target order"))?;
        // Nearest drawn part edges before and after `edge` in tau (cyclic).
        let is_drawn = |e: &Edge| drawn.iter().any(|(_, de)| de == e);
        let len = tau.len();
        let mut pred = None;
        for k in 1..len {
            let e = tau[(me + len - k) % len];
            if is_drawn(&e) {
                pred = Some(e);
                break;
            }
        }
        let mut succ = None;
        for k in 1..len {
            let e = tau[(me + k) % len];
            if is_drawn(&e) {
                succ = Some(e);
                break;
            }
        }
        let (Some(pred), Some(succ)) = (pred, succ) else {
            return Ok(None);
        };
        let dart_of = |e: Edge| drawn.iter().find(|(_, de)| *de == e).unwrap().0;
        let (dp, ds) = (dart_of(pred), dart_of(succ));
        let rot = &self.rotations[v as usize];
        let start = self.rotation_pos(v, dp);
        let mut corners = Vec::new();
        let mut i = start;
        loop {
            corners.push(rot[i]);
            i = (i + 1) % rot.len();
            if rot[i] == ds {
                break;
            }
            if i == start {
                // succ never found after pred: single drawn wall edge case
                // (pred == succ) already emits the full circle above.
                break;
            }
        }
        Ok(Some(corners))
    }

    // ------------------------------------------------------------------
    // Planar part insertion (the fixed-position planar drawing step)
    // ------------------------------------------------------------------

    /// Inserts a planar `part` over the existing arrangement so that no
    /// two part edges cross each other, every part edge may cross other
    /// curves freely, and the realized rotation of the part equals the
    /// target embedding (computed here when `target` is None and the part
    /// has a cycle; forests need no target). `predrawn` edges must already
    /// be drawn and are treated as part walls; their realized cyclic orders
    /// must agree with the target (condition C.1).
    ///
    /// Edges go in spanning-forest-first: every part vertex is attached to
    /// the wall structure before any part cycle closes, which is what
    /// guarantees that each later cycle edge still finds a route.
    pub fn insert_planar_part(
        &mut self,
        part: &EdgeSet,
        target: Option<&RotationSystem>,
        predrawn: &EdgeSet,
        mask_of: &dyn Fn(Edge) -> u32,
    ) -> Result<(), ArrangementError> {
        // Predrawn checks.
        let mut part_curves = BTreeSet::new();
        for e in predrawn {
            if !part.contains(e) {
                return Err(ArrangementError::Corrupt("predrawn not a subset of part"));
            }
            let c = self
                .curve_of_edge(*e)
                .ok_or(ArrangementError::MissingPredrawn(*e))?;
            part_curves.insert(c);
        }
        for (_, c1, c2) in self.crossings() {
            if part_curves.contains(&c1) && part_curves.contains(&c2) {
                return Err(ArrangementError::PredrawnCrossing {
                    a: self.curve_edge(c1).unwrap(),
                    b: self.curve_edge(c2).unwrap(),
                });
            }
        }
        let computed;
        let target = match target {
            Some(t) => Some(t),
            None if !crate::graph::is_forest(part, self.n) => {
                computed = crate::planar::compute_embedding(part, self.n)
                    .map_err(|_| ArrangementError::Corrupt("part is not planar"))?;
                Some(&computed)
            }
            None => None,
        };
        if let Some(t) = target {
            self.check_c1(predrawn, t)?;
        }

        for e in insertion_order(part, predrawn) {
            if predrawn.contains(&e) {
                continue;
            }
            let wallset = part_curves.clone();
            let wall = move |c: CurveId| wallset.contains(&c);
            let (sc, ec) = if let Some(t) = target {
                (
                    self.gap_corners(e.source(), e, part, t.rotation(e.source()))?,
                    self.gap_corners(e.target(), e, part, t.rotation(e.target()))?,
                )
            } else {
                (None, None)
            };
            let kind = CurveKind::Real {
                edge: e,
                layers: mask_of(e),
            };
            let cid = self.insert_edge_routed(e, kind, &wall, sc, ec)?;
            part_curves.insert(cid);
        }

        // Postconditions: zero intra-part crossings, realized order = target.
        let curves_of_part: BTreeSet<CurveId> =
            part.iter().filter_map(|&e| self.curve_of_edge(e)).collect();
        for (_, c1, c2) in self.crossings() {
            if curves_of_part.contains(&c1) && curves_of_part.contains(&c2) {
                return Err(ArrangementError::Corrupt("part self-crossing after insertion"));
            }
        }
        if let Some(t) = target {
            self.check_c1(part, t)?;
        }
        Ok(())
    }

    /// Condition C.1: for every vertex, the realized cyclic order of the
    /// given edges equals their order in `target`.
    pub fn check_c1(
        &self,
        edges: &EdgeSet,
        target: &RotationSystem,
    ) -> Result<(), ArrangementError> {
        for v in 0..self.n {
            let realized: Vec<Edge> = self
                .real_darts_at(v)
                .into_iter()
                .map(|(_, e)| e)
                .filter(|e| edges.contains(e))
                .collect();
            if realized.len() < 3 {
                continue; // cyclic orders on <= 2 elements are unique
            }
            let wanted: Vec<Edge> = target
                .rotation(v)
                .iter()
                .map(|&w| Edge::new(v, w))
                .filter(|e| edges.contains(e))
                .collect();
            if !cyclic_equal(&realized, &wanted) {
                return Err(ArrangementError::RotationMismatch { vertex: v });
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Bounded routing (public route_edge with caps)
    // ------------------------------------------------------------------

    /// Dual-graph walk from `u` to `v` crossing no wall edge and no single
    /// real edge more than `cap` times. Returns the ordered list of crossed
    /// real edges, or None when no such walk exists within the budget.
    ///
    /// Implemented as iterative-deepening DFS over face walks, which is
    /// exhaustive for desk-scale arrangements; `budget` bounds explored
    /// states as a safety valve.
    pub fn route_edge_capped(
        &self,
        u: VertexId,
        v: VertexId,
        wall: &dyn Fn(Edge) -> bool,
        cap: u32,
        budget: &mut u64,
    ) -> Option<Vec<Edge>> {
        assert!(u != v && cap >= 1);
        let start_faces: BTreeSet<FaceId> = self.rotations[u as usize]
            .iter()
            .map(|&d| self.face_of[d as usize])
            .collect();
        let target_faces: BTreeSet<FaceId> = self.rotations[v as usize]
            .iter()
            .map(|&d| self.face_of[d as usize])
            .collect();
        // Treat frame-connected faces as one super-face: crossing frame or
        // scaffold darts is free and unbounded.
        let classes = self.real_face_classes();
        let start_classes: BTreeSet<u32> =
            start_faces.iter().map(|&f| classes[f as usize]).collect();
        let target_classes: BTreeSet<u32> =
            target_faces.iter().map(|&f| classes[f as usize]).collect();
        if start_classes.intersection(&target_classes).next().is_some() {
            return Some(Vec::new());
        }
        // Region adjacency via real darts.
        let mut steps: Vec<(u32, u32, Edge)> = Vec::new();
        for d in 0..self.darts.len() as DartId {
            let Some(data) = self.darts[d as usize] else { continue };
            let Some(edge) = self.curve_edge(data.curve) else { continue };
            if wall(edge) {
                continue;
            }
            let f = classes[self.face_of[d as usize] as usize];
            let g = classes[self.face_of[self.twin(d) as usize] as usize];
            steps.push((f, g, edge));
        }
        for depth in 1..=(self.real_curves().count() as u32 * cap) {
            let mut counts: BTreeMap<Edge, u32> = BTreeMap::new();
            let mut path = Vec::new();
            let mut found = None;
            for &s in &start_classes {
                if dfs_route(
                    s,
                    depth,
                    &steps,
                    &target_classes,
                    cap,
                    &mut counts,
                    &mut path,
                    budget,
                    &mut found,
                ) {
                    break;
                }
                if *budget == 0 {
                    return None;
                }
            }
            if let Some(route) = found {
                return Some(route);
            }
            if *budget == 0 {
                return None;
            }
        }
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_route(
    at: u32,
    depth_left: u32,
    steps: &[(u32, u32, Edge)],
    targets: &BTreeSet<u32>,
    cap: u32,
    counts: &mut BTreeMap<Edge, u32>,
    path: &mut Vec<Edge>,
    budget: &mut u64,
    found: &mut Option<Vec<Edge>>,
) -> bool {
    if targets.contains(&at) {
        *found = Some(path.clone());
        return true;
    }
    if depth_left == 0 {
        return false;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    for &(f, g, e) in steps {
        if f != at {
            continue;
        }
        let c = counts.entry(e).or_insert(0);
        if *c >= cap {
            continue;
        }
        *c += 1;
        path.push(e);
        let hit = dfs_route(g, depth_left - 1, steps, targets, cap, counts, path, budget, found);
        path.pop();
        *counts.get_mut(&e).unwrap() -= 1;
        if hit {
            return true;
        }
    }
    false
}

/// Insertion order for a part: a spanning forest that contains the
/// predrawn edges goes first (so no cycle ever closes before every part
/// vertex is attached), then the remaining edges. Deterministic.
fn insertion_order(part: &EdgeSet, predrawn: &EdgeSet) -> Vec<Edge> {
    let verts: Vec<VertexId> = part
        .iter()
        .flat_map(|e| [e.source(), e.target()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    let merge = |p: &mut Vec<usize>, e: &Edge| -> bool {
        let (a, b) = (index[&e.source()], index[&e.target()]);
        let (ra, rb) = (find(p, a), find(p, b));
        if ra == rb {
            false
        } else {
            p[ra] = rb;
            true
        }
    };
    for e in predrawn {
        merge(&mut parent, e);
    }
    let mut tree = Vec::new();
    let mut rest = Vec::new();
    for e in part {
        if predrawn.contains(e) {
            continue;
        }
        if merge(&mut parent, e) {
            tree.push(*e);
        } else {
            rest.push(*e);
        }
    }
    tree.into_iter().chain(rest).collect()
}

fn cyclic_equal(a: &[Edge], b: &[Edge]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(shift) = b.iter().position(|&e| e == a[0]) else {
        return false;
    };
    (0..a.len()).all(|i| a[i] == b[(shift + i) % b.len()])
}

// ----------------------------------------------------------------------
// Layer checks
// ----------------------------------------------------------------------

/// Per-layer crossing graph: nodes are the layer's edges, adjacency means
/// the two curves share at least one crossing.
#[derive(Clone, Debug)]
pub struct CrossingGraph {
    pub layer: usize,
    pub edges: Vec<Edge>,
    /// Crossing multiplicity per unordered index pair.
    pub pairs: BTreeMap<(usize, usize), u32>,
}

impl CrossingGraph {
    /// Returns a mutually crossing triple if one exists.
    pub fn find_triangle(&self) -> Option<(Edge, Edge, Edge)> {
        let n = self.edges.len();
        let mut adj = vec![BTreeSet::new(); n];
        for &(i, j) in self.pairs.keys() {
            adj[i].insert(j);
            adj[j].insert(i);
        }
        for &(i, j) in self.pairs.keys() {
            if let Some(&k) = adj[i].intersection(&adj[j]).next() {
                return Some((self.edges[i], self.edges[j], self.edges[k]));
            }
        }
        None
    }

    pub fn crossing_pair_count(&self) -> usize {
        self.pairs.len()
    }
}

impl Arrangement {
    pub fn build_crossing_graph(&self, layer: usize) -> CrossingGraph {
        let bit = 1u32 << layer;
        let edges: Vec<Edge> = self
            .real_curves()
            .filter(|&(_, _, m)| m & bit != 0)
            .map(|(_, e, _)| e)
            .collect();
        let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut pairs: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (_, c1, c2) in self.crossings() {
            let (m1, m2) = (self.curve_layers(c1), self.curve_layers(c2));
            if m1 & bit != 0 && m2 & bit != 0 {
                let (e1, e2) = (self.curve_edge(c1).unwrap(), self.curve_edge(c2).unwrap());
                let (i, j) = (index[&e1], index[&e2]);
                let key = if i < j { (i, j) } else { (j, i) };
                *pairs.entry(key).or_insert(0) += 1;
            }
        }
        CrossingGraph {
            layer,
            edges,
            pairs,
        }
    }

    /// Quasiplanarity of one layer: its crossing graph is triangle-free.
    pub fn check_quasiplanar(&self, layer: usize) -> bool {
        self.build_crossing_graph(layer).find_triangle().is_none()
    }

    /// Simplicity of one layer: independent pairs cross at most once,
    /// adjacent pairs never, and no edge crosses itself.
    pub fn check_simple(&self, layer: usize) -> bool {
        let bit = 1u32 << layer;
        for (_, c1, c2) in self.crossings() {
            if c1 == c2 && self.curve_layers(c1) & bit != 0 {
                return false;
            }
        }
        let cg = self.build_crossing_graph(layer);
        for (&(i, j), &mult) in &cg.pairs {
            let (a, b) = (cg.edges[i], cg.edges[j]);
            if !a.independent(b) || mult > 1 {
                return false;
            }
        }
        true
    }

    /// Number of intra-layer crossings (counting multiplicity).
    pub fn intra_layer_crossings(&self, layer: usize) -> u32 {
        self.build_crossing_graph(layer).pairs.values().sum()
    }
}

/// Verification report for a full instance against an arrangement.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub layers: Vec<LayerVerdict>,
    pub shared_edges_once: bool,
    pub total_crossings: usize,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct LayerVerdict {
    pub layer: usize,
    pub edge_count: usize,
    pub quasiplanar: bool,
    pub planar: bool,
    pub simple: bool,
    pub intra_crossings: u32,
    pub violating_triple: Option<(Edge, Edge, Edge)>,
}

/// Checks that `a` covers exactly the edges of `g` with correct layer masks
/// and reports per-layer quasiplanarity, planarity and simplicity.
pub fn verify_quasefe(g: &LayeredGraph, a: &Arrangement) -> Result<VerifyReport, ArrangementError> {
    let union = g.union_edges();
    let mut drawn = EdgeSet::new();
    for (_, e, mask) in a.real_curves() {
        if !drawn.insert(e) {
            return Err(ArrangementError::Coverage(format!("edge {e} drawn twice")));
        }
        if !union.contains(&e) {
            return Err(ArrangementError::Coverage(format!("extra edge {e}")));
        }
        let wanted = g.layer_mask(e);
        if mask != wanted {
            return Err(ArrangementError::Coverage(format!(
                "edge {e} has mask {mask:#b}, instance says {wanted:#b}"
            )));
        }
    }
    if drawn.len() != union.len() {
        let missing = union.difference(&drawn).next().unwrap();
        return Err(ArrangementError::Coverage(format!("edge {missing} missing")));
    }
    let mut layers = Vec::new();
    let mut pass = true;
    for layer in 0..g.layer_count() {
        let cg = a.build_crossing_graph(layer);
        let triple = cg.find_triangle();
        let quasiplanar = triple.is_none();
        let intra = a.intra_layer_crossings(layer);
        let verdict = LayerVerdict {
            layer,
            edge_count: cg.edges.len(),
            quasiplanar,
            planar: intra == 0,
            simple: a.check_simple(layer),
            intra_crossings: intra,
            violating_triple: triple,
        };
        pass &= verdict.quasiplanar;
        layers.push(verdict);
    }
    Ok(VerifyReport {
        layers,
        shared_edges_once: true,
        total_crossings: a.crossing_count(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_set;
    use crate::planar::compute_embedding;

    fn no_wall(_: CurveId) -> bool {
        false
    }

    #[test]
    fn empty_arrangement_counts() {
        let a = Arrangement::new(5);
        assert_eq!(a.real_face_count(), 1);
        assert!(a.euler_real_holds());
        assert_eq!(a.crossing_count(), 0);
        assert_eq!(a.validate(), Ok(()));
        let a0 = Arrangement::new(0);
        assert_eq!(a0.real_face_count(), 1);
    }

    #[test]
    fn single_edge_insertion() {
        let mut a = Arrangement::new(3);
        let e = Edge::new(0, 1);
        a.insert_edge_routed(e, CurveKind::Real { edge: e, layers: 1 }, &no_wall, None, None)
            .unwrap();
        assert_eq!(a.crossing_count(), 0);
        assert_eq!(a.real_face_count(), 1);
        assert!(a.euler_real_holds());
    }

    #[test]
    fn triangle_as_part_is_plane() {
        let mut a = Arrangement::new(4);
        let tri = edge_set([(0, 1), (1, 2), (0, 2)]);
        a.insert_planar_part(&tri, None, &EdgeSet::new(), &|_| 1).unwrap();
        assert_eq!(a.crossing_count(), 0);
        assert_eq!(a.real_face_count(), 2);
        assert!(a.euler_real_holds());
        assert!(a.check_quasiplanar(0));
        assert!(a.check_simple(0));
    }

    #[test]
    fn k4_part_realizes_target_embedding() {
        let k4 = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let target = compute_embedding(&k4, 4).unwrap();
        let mut a = Arrangement::new(4);
        a.insert_planar_part(&k4, Some(&target), &EdgeSet::new(), &|_| 1).unwrap();
        assert_eq!(a.crossing_count(), 0);
        assert_eq!(a.real_face_count(), 4);
        assert!(a.euler_real_holds());
        a.check_c1(&k4, &target).unwrap();
    }

    #[test]
    fn two_overlaid_triangles_stay_layer_plane() {
        // Same vertex span, two parts; the second may cross the first but
        // not itself.
        let t1 = edge_set([(0, 1), (1, 2), (0, 2)]);
        let t2 = edge_set([(0, 3), (1, 3), (2, 3)]);
        let mut a = Arrangement::new(4);
        a.insert_planar_part(&t1, None, &EdgeSet::new(), &|_| 0b01).unwrap();
        a.insert_planar_part(&t2, None, &EdgeSet::new(), &|_| 0b10).unwrap();
        assert_eq!(a.intra_layer_crossings(0), 0);
        assert_eq!(a.intra_layer_crossings(1), 0);
        assert!(a.euler_real_holds());
    }

    #[test]
    fn duplicate_edges_are_rejected() {
        let k4 = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut a = Arrangement::new(4);
        a.insert_planar_part(&k4, None, &EdgeSet::new(), &|_| 0b01).unwrap();
        let again = edge_set([(1, 2)]);
        let err = a
            .insert_planar_part(&again, None, &EdgeSet::new(), &|_| 0b10)
            .unwrap_err();
        assert!(matches!(err, ArrangementError::DuplicateEdge(_)));
    }

    #[test]
    fn predrawn_subgraph_reused() {
        // Draw K4 as layer 0, then insert a star part whose edges are all
        // already present: nothing new to route.
        let k4 = edge_set([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut a = Arrangement::new(4);
        a.insert_planar_part(&k4, None, &EdgeSet::new(), &|_| 0b01).unwrap();
        let star = edge_set([(0, 1), (0, 2), (0, 3)]);
        a.insert_planar_part(&star, None, &star.clone(), &|_| 0b11).unwrap();
        assert_eq!(a.crossing_count(), 0);
    }

    #[test]
    fn scaffold_connects_disjoint_part_components() {
        // A part of two disjoint triangles; without the scaffold the second
        // cycle could strand the first on the wrong side.
        let part = edge_set([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let mut a = Arrangement::new(6);
        a.insert_planar_part(&part, None, &EdgeSet::new(), &|_| 1).unwrap();
        assert_eq!(a.crossing_count(), 0);
        assert!(a.check_quasiplanar(0));
        assert!(a.euler_real_holds());
    }

    #[test]
    fn delete_curve_restores_structure() {
        let mut a = Arrangement::new(4);
        let tri = edge_set([(0, 1), (1, 2), (0, 2)]);
        a.insert_planar_part(&tri, None, &EdgeSet::new(), &|_| 1).unwrap();
        let e = Edge::new(3, 0);
        let cid = a
            .insert_edge_routed(e, CurveKind::Real { edge: e, layers: 2 }, &no_wall, None, None)
            .unwrap();
        a.delete_curve(cid);
        assert_eq!(a.real_face_count(), 2);
        assert_eq!(a.crossing_count(), 0);
        assert!(a.euler_real_holds());
        assert_eq!(a.validate(), Ok(()));
    }

    #[test]
    fn route_edge_same_face_is_empty() {
        let a = Arrangement::new(4);
        let mut budget = 10_000;
        let route = a.route_edge_capped(0, 3, &|_| false, 1, &mut budget).unwrap();
        assert!(route.is_empty());
    }

    #[test]
    fn verify_quasefe_coverage_and_verdicts() {
        let g = LayeredGraph::new(
            4,
            vec![
                edge_set([(0, 1), (1, 2), (0, 2)]),
                edge_set([(0, 3), (1, 3)]),
            ],
        )
        .unwrap();
        let mut a = Arrangement::new(4);
        let mask = |e: Edge| g.layer_mask(e);
        a.insert_planar_part(g.layer(0).unwrap(), None, &EdgeSet::new(), &mask).unwrap();
        a.insert_planar_part(g.layer(1).unwrap(), None, &EdgeSet::new(), &mask).unwrap();
        let report = verify_quasefe(&g, &a).unwrap();
        assert!(report.pass);
        assert!(report.layers.iter().all(|l| l.planar && l.quasiplanar && l.simple));
    }
}


impl Arrangement {
    /// True when some face incident to `u` reaches a face incident to `v`
    /// without crossing any wall edge (other curves may be crossed freely).
    pub fn vertices_connected_avoiding(
        &self,
        u: VertexId,
        v: VertexId,
        walls: &EdgeSet,
    ) -> bool {
        let mut parent: Vec<u32> = (0..self.faces.len() as u32).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            let mut c = x;
            while p[c as usize] != r {
                let nx = p[c as usize];
                p[c as usize] = r;
                c = nx;
            }
            r
        }
        for d in 0..self.darts.len() as DartId {
            let Some(data) = self.darts[d as usize] else { continue };
            if let Some(e) = self.curve_edge(data.curve) {
                if walls.contains(&e) {
                    continue;
                }
            }
            let (a, b) = (self.face_of[d as usize], self.face_of[self.twin(d) as usize]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra as usize] = rb;
            }
        }
        let us: BTreeSet<u32> = self.rotations[u as usize]
            .iter()
            .map(|&d| find(&mut parent, self.face_of[d as usize]))
            .collect();
        let vs: BTreeSet<u32> = self.rotations[v as usize]
            .iter()
            .map(|&d| find(&mut parent, self.face_of[d as usize]))
            .collect();
        us.intersection(&vs).next().is_some()
    }
}
