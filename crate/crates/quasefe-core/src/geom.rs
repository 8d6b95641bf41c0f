//! Exact integer geometry: segment predicates and the polyline importer
//! that converts a hand-specified straight-line-segment drawing into an
//! [`Arrangement`].
//!
//! All predicates use i128 arithmetic on integer coordinates; nothing here
//! is tolerance-based. The importer demands generic position: crossings are
//! proper (interior, transversal), no three segments concur, no segment
//! passes through a vertex position or a bend of another curve.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Ordering;
use core::fmt;

use crate::arrangement::{Arrangement, ArrangementError, CurveId, CurveKind, DartId, PrescribedCross};
use crate::graph::{Edge, VertexId};

pub type Point = (i64, i64);

/// Sign of the cross product (b - a) x (c - a).
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let v = (b.0 as i128 - a.0 as i128) * (c.1 as i128 - a.1 as i128)
        - (b.1 as i128 - a.1 as i128) * (c.0 as i128 - a.0 as i128);
    match v.cmp(&0) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

pub fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// How two closed segments intersect.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SegInt {
    None,
    /// Transversal crossing of both interiors.
    Proper,
    /// Exactly one shared endpoint, no other contact.
    SharedEndpoint(Point),
    /// Anything else: touching, collinear overlap, endpoint in interior.
    Degenerate,
}

pub fn segment_intersection(a1: Point, a2: Point, b1: Point, b2: Point) -> SegInt {
    let o1 = orient(a1, a2, b1);
    let o2 = orient(a1, a2, b2);
    let o3 = orient(b1, b2, a1);
    let o4 = orient(b1, b2, a2);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return SegInt::Proper;
    }
    let shared: Vec<Point> = [a1, a2]
        .iter()
        .copied()
        .filter(|p| *p == b1 || *p == b2)
        .collect();
    if shared.len() == 1 {
        let s = shared[0];
        let other_a = if s == a1 { a2 } else { a1 };
        let other_b = if s == b1 { b2 } else { b1 };
        if on_segment(b1, b2, other_a) || on_segment(a1, a2, other_b) {
            return SegInt::Degenerate;
        }
        return SegInt::SharedEndpoint(s);
    }
    if shared.len() >= 2 {
        return SegInt::Degenerate;
    }
    if on_segment(a1, a2, b1)
        || on_segment(a1, a2, b2)
        || on_segment(b1, b2, a1)
        || on_segment(b1, b2, a2)
    {
        return SegInt::Degenerate;
    }
    SegInt::None
}

/// Exact parameter of the proper intersection along segment `a1a2`, as a
/// fraction (num, den) with den > 0 and 0 < num/den < 1.
fn intersection_param(a1: Point, a2: Point, b1: Point, b2: Point) -> (i128, i128) {
    let (x1, y1) = (a1.0 as i128, a1.1 as i128);
    let (x2, y2) = (a2.0 as i128, a2.1 as i128);
    let (x3, y3) = (b1.0 as i128, b1.1 as i128);
    let (x4, y4) = (b2.0 as i128, b2.1 as i128);
    let den = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3);
    let num = (x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3);
    if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

fn frac_cmp(a: (i128, i128), b: (i128, i128)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

/// Counterclockwise angular order of direction vectors, starting from the
/// positive x axis. Exact.
pub fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    fn half(v: (i64, i64)) -> u8 {
        if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        match cross.cmp(&0) {
            Ordering::Greater => Ordering::Less, // a strictly before b ccw
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
        }
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeomError {
    BadPolyline(Edge, &'static str),
    Degenerate { a: Edge, b: Edge },
    SelfIntersection(Edge),
    ThroughVertex { edge: Edge, vertex: VertexId },
    DuplicateVertexPosition(VertexId, VertexId),
    Arrangement(ArrangementError),
    /// The imported structure disagrees with the geometric expectation.
    Mismatch(String),
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::BadPolyline(e, why) => write!(f, "polyline for {e}: {why}"),
            GeomError::Degenerate { a, b } => write!(f, "degenerate contact between {a} and {b}"),
            GeomError::SelfIntersection(e) => write!(f, "polyline for {e} self-intersects"),
            GeomError::ThroughVertex { edge, vertex } => {
                write!(f, "polyline for {edge} passes through vertex {vertex}")
            }
            GeomError::DuplicateVertexPosition(a, b) => {
                write!(f, "vertices {a} and {b} share a position")
            }
            GeomError::Arrangement(e) => write!(f, "arrangement error: {e}"),
            GeomError::Mismatch(s) => write!(f, "import mismatch: {s}"),
        }
    }
}

impl From<ArrangementError> for GeomError {
    fn from(e: ArrangementError) -> Self {
        GeomError::Arrangement(e)
    }
}

#[cfg(test)]
impl std::error::Error for GeomError {}

/// One drawn edge: its polyline runs from the position of `edge.source()`
/// to the position of `edge.target()`.
#[derive(Clone, Debug)]
pub struct DrawnCurve {
    pub edge: Edge,
    pub layers: u32,
    pub points: Vec<Point>,
}

/// One geometric crossing between two curves, with its exact position
/// (segment index, parameter) along both.
struct CrossRec {
    a: usize,
    b: usize,
    pos_a: (usize, (i128, i128)),
    pos_b: (usize, (i128, i128)),
}

impl CrossRec {
    fn pos_on(&self, curve: usize) -> (usize, (i128, i128)) {
        if curve == self.a {
            self.pos_a
        } else {
            self.pos_b
        }
    }

    fn other(&self, curve: usize) -> usize {
        if curve == self.a {
            self.b
        } else {
            self.a
        }
    }
}

fn pos_cmp(x: (usize, (i128, i128)), y: (usize, (i128, i128))) -> Ordering {
    x.0.cmp(&y.0).then_with(|| frac_cmp(x.1, y.1))
}

/// Builds an [`Arrangement`] from an explicit straight-line-segment drawing.
///
/// Untouched vertices would otherwise float freely relative to the curves,
/// so the importer first threads an x-monotone anchor path through all
/// vertex positions; every curve is then inserted with its crossings
/// against both the anchors and the earlier curves prescribed exactly, and
/// the anchors are deleted at the end. After construction the importer
/// re-checks that each curve's combinatorial crossing count matches the
/// geometric one.
pub fn import_drawing(
    n: u32,
    positions: &[Point],
    curves: &[DrawnCurve],
) -> Result<Arrangement, GeomError> {
    assert_eq!(positions.len(), n as usize);
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if positions[i] == positions[j] {
                return Err(GeomError::DuplicateVertexPosition(i as u32, j as u32));
            }
        }
    }
    for c in curves {
        validate_polyline(c, positions)?;
    }

    // Anchor path through all vertices in lexicographic position order.
    let anchors = build_anchor_path(positions, curves)?;
    // Working list: anchors first, then the real curves.
    struct Work {
        endpoints: (VertexId, VertexId),
        points: Vec<Point>,
        real: Option<(Edge, u32)>,
    }
    impl AnchorLike for Work {
        fn ends(&self) -> (VertexId, VertexId) {
            self.endpoints
        }
        fn pts(&self) -> &[Point] {
            &self.points
        }
    }
    let mut work: Vec<Work> = Vec::new();
    for a in &anchors {
        work.push(Work {
            endpoints: a.0,
            points: a.1.clone(),
            real: None,
        });
    }
    for c in curves {
        work.push(Work {
            endpoints: c.edge.endpoints(),
            points: c.points.clone(),
            real: Some((c.edge, c.layers)),
        });
    }

    // All pairwise proper crossings among work curves.
    let mut recs: Vec<CrossRec> = Vec::new();
    for a in 0..work.len() {
        for b in a + 1..work.len() {
            let (ca, cb) = (&work[a], &work[b]);
            let ea = Edge::new(ca.endpoints.0, ca.endpoints.1);
            let eb = Edge::new(cb.endpoints.0, cb.endpoints.1);
            let shares_vertex = !ea.independent(eb);
            for i in 0..ca.points.len() - 1 {
                for j in 0..cb.points.len() - 1 {
                    match segment_intersection(
                        ca.points[i],
                        ca.points[i + 1],
                        cb.points[j],
                        cb.points[j + 1],
                    ) {
                        SegInt::None => {}
                        SegInt::Proper => {
                            recs.push(CrossRec {
                                a,
                                b,
                                pos_a: (
                                    i,
                                    intersection_param(
                                        ca.points[i],
                                        ca.points[i + 1],
                                        cb.points[j],
                                        cb.points[j + 1],
                                    ),
                                ),
                                pos_b: (
                                    j,
                                    intersection_param(
                                        cb.points[j],
                                        cb.points[j + 1],
                                        ca.points[i],
                                        ca.points[i + 1],
                                    ),
                                ),
                            });
                        }
                        SegInt::SharedEndpoint(p) => {
                            let at_vertex = positions.contains(&p);
                            if !(shares_vertex && at_vertex) {
                                return Err(GeomError::Degenerate { a: ea, b: eb });
                            }
                        }
                        SegInt::Degenerate => {
                            return Err(GeomError::Degenerate { a: ea, b: eb });
                        }
                    }
                }
            }
        }
    }
    let mut along: Vec<Vec<usize>> = vec![Vec::new(); work.len()];
    for (rid, rec) in recs.iter().enumerate() {
        along[rec.a].push(rid);
        along[rec.b].push(rid);
    }
    for (c, list) in along.iter_mut().enumerate() {
        list.sort_by(|&x, &y| pos_cmp(recs[x].pos_on(c), recs[y].pos_on(c)));
    }

    let dir = |p: Point, q: Point| -> (i64, i64) { (q.0 - p.0, q.1 - p.1) };

    let mut arr = Arrangement::new(n);
    let mut cids: Vec<CurveId> = Vec::new();
    let mut anchor_cids: Vec<CurveId> = Vec::new();
    for (k, c) in work.iter().enumerate() {
        let mut steps: Vec<PrescribedCross> = Vec::new();
        for (i, &rid) in along[k].iter().enumerate() {
            let rec = &recs[rid];
            let p = rec.other(k);
            if p > k {
                continue;
            }
            let my_pos_on_p = rec.pos_on(p);
            let rank = along[p]
                .iter()
                .filter(|&&rid2| rid2 != rid)
                .filter(|&&rid2| {
                    let rec2 = &recs[rid2];
                    let o2 = rec2.other(p);
                    let materialized = o2 < k
                        || (o2 == k
                            && along[k].iter().position(|&x| x == rid2).unwrap() < i);
                    materialized && pos_cmp(rec2.pos_on(p), my_pos_on_p) == Ordering::Less
                })
                .count();
            let (pseg, _) = my_pos_on_p;
            let (kseg, _) = rec.pos_on(k);
            let w = dir(work[p].points[pseg], work[p].points[pseg + 1]);
            let u = dir(c.points[kseg], c.points[kseg + 1]);
            let cr = w.0 as i128 * u.1 as i128 - w.1 as i128 * u.0 as i128;
            steps.push(PrescribedCross {
                partner: cids[p],
                rank,
                from_left: cr < 0,
            });
        }

        let (u, v) = c.endpoints;
        let start = angular_corners(&arr, &work, &cids, k, u, dir(c.points[0], c.points[1]))?;
        let m = c.points.len();
        let end = angular_corners(&arr, &work, &cids, k, v, dir(c.points[m - 1], c.points[m - 2]))?;

        let (edge, kind) = match c.real {
            Some((edge, layers)) => (edge, CurveKind::Real { edge, layers }),
            None => (Edge::new(u, v), CurveKind::Anchor),
        };
        let cid = arr.insert_edge_prescribed(edge, kind, &steps, start, end)?;
        if c.real.is_none() {
            anchor_cids.push(cid);
        }
        cids.push(cid);
    }

    for &cid in anchor_cids.iter().rev() {
        arr.delete_curve(cid);
    }

    // Re-verify real-real crossings against the geometry.
    for (k, c) in work.iter().enumerate() {
        let Some((edge, _)) = c.real else { continue };
        let cid = arr.curve_of_edge(edge).unwrap();
        let got = arr.crossing_sequence(cid).len();
        let want = along[k]
            .iter()
            .filter(|&&rid| work[recs[rid].other(k)].real.is_some())
            .count();
        if got != want {
            return Err(GeomError::Mismatch(format!(
                "curve {edge} has {got} crossings, geometry says {want}"
            )));
        }
    }
    arr.validate()?;
    Ok(arr)
}

type AnchorLeg = ((VertexId, VertexId), Vec<Point>);

/// Chains all vertices in lexicographic position order; each leg is a
/// straight segment, bent at a generic midpoint when the straight segment
/// would collide with a vertex or overlap an existing polyline.
fn build_anchor_path(
    positions: &[Point],
    curves: &[DrawnCurve],
) -> Result<Vec<AnchorLeg>, GeomError> {
    let mut order: Vec<VertexId> = (0..positions.len() as u32).collect();
    order.sort_by_key(|&v| positions[v as usize]);
    let mut legs: Vec<AnchorLeg> = Vec::new();
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (p, q) = (positions[a as usize], positions[b as usize]);
        let mut candidates: Vec<Vec<Point>> = vec![vec![p, q]];
        let mid = ((p.0 + q.0) / 2, (p.1 + q.1) / 2);
        for off in [
            (0, 1),
            (1, 0),
            (0, -1),
            (-1, 0),
            (1, 1),
            (-1, -1),
            (1, -1),
            (-1, 1),
            (0, 2),
            (2, 0),
            (0, -2),
            (-2, 0),
        ] {
            let bend = (mid.0 + off.0, mid.1 + off.1);
            if bend != p && bend != q {
                candidates.push(vec![p, bend, q]);
            }
        }
        let mut chosen = None;
        'cand: for cand in candidates {
            if !anchor_leg_clean(&cand, positions, curves, &legs) {
                continue 'cand;
            }
            chosen = Some(cand);
            break;
        }
        let Some(mut points) = chosen else {
            return Err(GeomError::Mismatch(format!(
                "no clean anchor leg between vertices {a} and {b}"
            )));
        };
        // Store legs oriented from the smaller vertex id, matching the
        // canonical edge direction assumed by the insertion machinery.
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if a > b {
            points.reverse();
        }
        legs.push(((lo, hi), points));
    }
    Ok(legs)
}

fn anchor_leg_clean(
    points: &[Point],
    positions: &[Point],
    curves: &[DrawnCurve],
    legs: &[AnchorLeg],
) -> bool {
    let (p, q) = (points[0], *points.last().unwrap());
    for w in points.windows(2) {
        if w[0] == w[1] {
            return false;
        }
        // Through no vertex position other than the leg's own endpoints.
        for &vp in positions {
            if vp == p || vp == q {
                continue;
            }
            if on_segment(w[0], w[1], vp) {
                return false;
            }
        }
        // Interior bends must not lie on vertex positions.
        for bp in &points[1..points.len() - 1] {
            if positions.contains(bp) {
                return false;
            }
        }
        // Against every drawn curve and prior anchor leg: only disjoint,
        // proper crossings, or a shared endpoint at a shared vertex.
        let others: Vec<(&[Point], Point, Point)> = curves
            .iter()
            .map(|c| (&c.points[..], c.points[0], *c.points.last().unwrap()))
            .chain(legs.iter().map(|l| (&l.1[..], l.1[0], *l.1.last().unwrap())))
            .collect();
        for (opts, op, oq) in others {
            for ow in opts.windows(2) {
                match segment_intersection(w[0], w[1], ow[0], ow[1]) {
                    SegInt::None | SegInt::Proper => {}
                    SegInt::SharedEndpoint(s) => {
                        let shared_vertex =
                            (s == p || s == q) && (s == op || s == oq) && positions.contains(&s);
                        if !shared_vertex {
                            return false;
                        }
                    }
                    SegInt::Degenerate => return false,
                }
            }
        }
    }
    // Self-check within the leg (two segments sharing the bend).
    if points.len() == 3 {
        let s = segment_intersection(points[0], points[1], points[1], points[2]);
        if !matches!(s, SegInt::SharedEndpoint(_)) {
            return false;
        }
    }
    true
}

fn validate_polyline(c: &DrawnCurve, positions: &[Point]) -> Result<(), GeomError> {
    let (u, v) = c.edge.endpoints();
    if c.points.len() < 2 {
        return Err(GeomError::BadPolyline(c.edge, "needs at least two points"));
    }
    if c.points[0] != positions[u as usize] || *c.points.last().unwrap() != positions[v as usize] {
        return Err(GeomError::BadPolyline(c.edge, "endpoints off vertex positions"));
    }
    for w in c.points.windows(2) {
        if w[0] == w[1] {
            return Err(GeomError::BadPolyline(c.edge, "zero-length segment"));
        }
    }
    for p in &c.points[1..c.points.len() - 1] {
        if let Some(v) = positions.iter().position(|q| q == p) {
            return Err(GeomError::ThroughVertex {
                edge: c.edge,
                vertex: v as u32,
            });
        }
    }
    for i in 0..c.points.len() - 1 {
        for j in i + 1..c.points.len() - 1 {
            let s = segment_intersection(c.points[i], c.points[i + 1], c.points[j], c.points[j + 1]);
            let ok = match s {
                SegInt::None => true,
                SegInt::SharedEndpoint(_) => j == i + 1,
                _ => false,
            };
            if !ok {
                return Err(GeomError::SelfIntersection(c.edge));
            }
        }
    }
    for i in 0..c.points.len() - 1 {
        for (vi, &vp) in positions.iter().enumerate() {
            if vp == c.points[i] || vp == c.points[i + 1] {
                continue;
            }
            if on_segment(c.points[i], c.points[i + 1], vp) {
                return Err(GeomError::ThroughVertex {
                    edge: c.edge,
                    vertex: vi as u32,
                });
            }
        }
    }
    Ok(())
}

/// Corner darts at `v` bracketing the direction `d` among already-drawn
/// blocking darts (by exact angle); None when nothing is present yet.
fn angular_corners<W: AnchorLike>(
    arr: &Arrangement,
    work: &[W],
    cids: &[CurveId],
    upto: usize,
    v: VertexId,
    d: (i64, i64),
) -> Result<Option<Vec<DartId>>, GeomError> {
    // Directions of already-drawn curves incident to v.
    let mut present: Vec<(DartId, (i64, i64))> = Vec::new();
    for (k, w) in work[..upto].iter().enumerate() {
        let (a, b) = w.ends();
        let incident = a == v || b == v;
        if !incident {
            continue;
        }
        let pts = w.pts();
        let dd = if a == v {
            (pts[1].0 - pts[0].0, pts[1].1 - pts[0].1)
        } else {
            let m = pts.len();
            (pts[m - 2].0 - pts[m - 1].0, pts[m - 2].1 - pts[m - 1].1)
        };
        // The curve's dart at v is its chain end.
        let chain = arr.curve_chain(cids[k]);
        let dart = if a == v {
            chain[0]
        } else {
            arr.twin(*chain.last().unwrap())
        };
        present.push((dart, dd));
    }
    if present.is_empty() {
        return Ok(None);
    }
    present.sort_by(|x, y| angle_cmp(x.1, y.1));
    let mut pred = present.last().unwrap().0;
    for &(dart, dd) in &present {
        if angle_cmp(dd, d) == Ordering::Less {
            pred = dart;
        }
    }
    let rot = arr.rotation(v);
    let start = rot.iter().position(|&x| x == pred).unwrap();
    let mut corners = vec![rot[start]];
    let mut i = (start + 1) % rot.len();
    while i != start {
        let dart = rot[i];
        if present.iter().any(|&(p, _)| p == dart) {
            break;
        }
        corners.push(dart);
        i = (i + 1) % rot.len();
    }
    Ok(Some(corners))
}

/// Minimal view of a work item for corner computation.
trait AnchorLike {
    fn ends(&self) -> (VertexId, VertexId);
    fn pts(&self) -> &[Point];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn segment_predicates() {
        assert_eq!(
            segment_intersection((0, 0), (10, 0), (5, -5), (5, 5)),
            SegInt::Proper
        );
        assert_eq!(
            segment_intersection((0, 0), (10, 0), (0, 5), (10, 5)),
            SegInt::None
        );
        assert_eq!(
            segment_intersection((0, 0), (10, 0), (10, 0), (20, 5)),
            SegInt::SharedEndpoint((10, 0))
        );
        assert_eq!(
            segment_intersection((0, 0), (10, 0), (5, 0), (5, 5)),
            SegInt::Degenerate
        );
        assert_eq!(
            segment_intersection((0, 0), (10, 0), (5, 0), (15, 0)),
            SegInt::Degenerate
        );
    }

    #[test]
    fn angle_order_is_ccw() {
        let mut dirs = vec![(0i64, -1i64), (1, 0), (0, 1), (-1, 0), (1, 1), (-1, -1)];
        dirs.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(dirs, vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]);
    }

    #[test]
    fn import_two_crossing_segments() {
        let positions = [(0, 0), (10, 0), (5, -5), (5, 5)];
        let curves = [
            DrawnCurve {
                edge: Edge::new(0, 1),
                layers: 0b01,
                points: vec![(0, 0), (10, 0)],
            },
            DrawnCurve {
                edge: Edge::new(2, 3),
                layers: 0b10,
                points: vec![(5, -5), (5, 5)],
            },
        ];
        let arr = import_drawing(4, &positions, &curves).unwrap();
        assert_eq!(arr.crossing_count(), 1);
        assert!(arr.euler_real_holds());
        assert!(arr.check_quasiplanar(0) && arr.check_quasiplanar(1));
        assert_eq!(arr.validate(), Ok(()));
    }

    #[test]
    fn import_three_mutually_crossing_segments() {
        let positions = [(0, 0), (30, 0), (5, -10), (20, 20), (25, -10), (10, 20)];
        let curves = [
            DrawnCurve {
                edge: Edge::new(0, 1),
                layers: 1,
                points: vec![(0, 0), (30, 0)],
            },
            DrawnCurve {
                edge: Edge::new(2, 3),
                layers: 1,
                points: vec![(5, -10), (20, 20)],
            },
            DrawnCurve {
                edge: Edge::new(4, 5),
                layers: 1,
                points: vec![(25, -10), (10, 20)],
            },
        ];
        let arr = import_drawing(6, &positions, &curves).unwrap();
        assert_eq!(arr.crossing_count(), 3);
        assert!(!arr.check_quasiplanar(0));
        assert!(arr.check_simple(0));
    }

    #[test]
    fn import_rejects_degeneracies() {
        let positions = [(0, 0), (10, 0), (5, 0), (5, 5)];
        let curves = [
            DrawnCurve {
                edge: Edge::new(0, 1),
                layers: 1,
                points: vec![(0, 0), (10, 0)],
            },
            DrawnCurve {
                edge: Edge::new(2, 3),
                layers: 1,
                points: vec![(5, 0), (5, 5)],
            },
        ];
        assert!(matches!(
            import_drawing(4, &positions, &curves),
            Err(GeomError::ThroughVertex { .. })
        ));
    }

    #[test]
    fn import_double_crossing_pair_is_nonsimple_lens() {
        let positions = [(0, 0), (30, 0), (0, 10), (30, 10)];
        let curves = [
            DrawnCurve {
                edge: Edge::new(0, 1),
                layers: 1,
                points: vec![(0, 0), (10, 14), (20, 14), (30, 0)],
            },
            DrawnCurve {
                edge: Edge::new(2, 3),
                layers: 1,
                points: vec![(0, 10), (30, 10)],
            },
        ];
        let arr = import_drawing(4, &positions, &curves).unwrap();
        assert_eq!(arr.crossing_count(), 2);
        assert!(arr.check_quasiplanar(0));
        assert!(!arr.check_simple(0));
        let cid = arr.curve_of_edge(Edge::new(2, 3)).unwrap();
        assert_eq!(arr.crossing_sequence(cid).len(), 2);
    }
}
