//! Exact planar primitives on rational coordinates.
//!
//! Segment intersection, curve crossings with signs, winding numbers, signed
//! area and general-position validation, all over `BigRational`. Every
//! predicate is exact: the same input always yields the identical output,
//! and degenerate incidences (collinear overlaps, endpoint touches, triple
//! points) are reported as errors or violations, never resolved by epsilon.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used for all plane coordinates and parameters.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a nonzero quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Strict sign of a rational; `None` when zero.
    pub fn of(r: &Rat) -> Option<Sign> {
        if r.is_zero() {
            None
        } else if r.is_positive() {
            Some(Sign::Plus)
        } else {
            Some(Sign::Minus)
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Point of the rational plane. Also used as a displacement vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: Rat, y: Rat) -> Point2 {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point2 {
        Point2::new(rat(x), rat(y))
    }

    pub fn sub(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, f: &Rat) -> Point2 {
        Point2::new(f * &self.x, f * &self.y)
    }

    /// 2×2 determinant of `self` and `other` as column vectors.
    pub fn cross(&self, other: &Point2) -> Rat {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Point2) -> Rat {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Point at parameter `t` on the segment from `self` to `other`.
    pub fn lerp(&self, other: &Point2, t: &Rat) -> Point2 {
        let omt = Rat::one() - t;
        Point2::new(&omt * &self.x + t * &other.x, &omt * &self.y + t * &other.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeoError {
    #[error("polyline needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("zero-length edge at segment {0}")]
    ZeroLengthEdge(usize),
    #[error("zero-length segment")]
    ZeroLengthSegment,
    #[error("segments overlap along a common line")]
    CollinearOverlap,
    #[error("segment endpoint lies on the other segment")]
    EndpointIncidence,
    #[error("vertex of a curve is incident to another strand")]
    VertexIncidence,
    #[error("curve doubles back on itself at vertex {0}")]
    DoubledBack(usize),
    #[error("more than two strands pass through one point")]
    TriplePoint,
    #[error("curve is not simple")]
    NotSimple,
    #[error("query point lies on the curve")]
    PointOnCurve,
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("rotation pair is not on the unit circle")]
    NotARotation,
}

/// Closed oriented polyline. Traversal order of the vertices defines the
/// orientation; edge `i` runs from vertex `i` to vertex `i+1 (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Polyline, GeoError> {
        if vertices.len() < 3 {
            return Err(GeoError::TooFewVertices(vertices.len()));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeoError::ZeroLengthEdge(i));
            }
        }
        Ok(Polyline { vertices })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Polyline, GeoError> {
        Polyline::new(
            coords
                .iter()
                .map(|&(x, y)| Point2::from_ints(x, y))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Number of vertices, which equals the number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &Point2 {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    /// Direction vector of edge `i` (not normalized).
    pub fn edge_dir(&self, i: usize) -> Point2 {
        let (a, b) = self.edge(i);
        b.sub(a)
    }

    /// Point at parameter `t ∈ [0,1)` along edge `seg`.
    pub fn point_at(&self, seg: usize, t: &Rat) -> Point2 {
        let (a, b) = self.edge(seg);
        a.lerp(b, t)
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    pub fn translated(&self, dx: &Rat, dy: &Rat) -> Polyline {
        Polyline {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(&p.x + dx, &p.y + dy))
                .collect(),
        }
    }

    pub fn scaled(&self, f: &Rat) -> Result<Polyline, GeoError> {
        if !f.is_positive() {
            return Err(GeoError::NonPositiveScale);
        }
        Ok(Polyline {
            vertices: self.vertices.iter().map(|p| p.scale(f)).collect(),
        })
    }

    /// Rotation by an exact rational point (cos, sin) of the unit circle.
    pub fn rotated(&self, cos: &Rat, sin: &Rat) -> Result<Polyline, GeoError> {
        if !(cos * cos + sin * sin).is_one() {
            return Err(GeoError::NotARotation);
        }
        Ok(Polyline {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(cos * &p.x - sin * &p.y, sin * &p.x + cos * &p.y))
                .collect(),
        })
    }

    /// Insert extra vertices: `cuts[i]` holds strictly increasing parameters
    /// in (0,1) at which edge `i` is split. The traced curve is unchanged.
    pub fn subdivided(&self, cuts: &[Vec<Rat>]) -> Polyline {
        let n = self.vertices.len();
        let mut vertices = Vec::with_capacity(n + cuts.iter().map(Vec::len).sum::<usize>());
        for i in 0..n {
            vertices.push(self.vertices[i].clone());
            if let Some(ts) = cuts.get(i) {
                for t in ts {
                    vertices.push(self.point_at(i, t));
                }
            }
        }
        Polyline { vertices }
    }
}

/// Position along a polyline: (edge index, parameter in (0,1)).
pub type CurvePos = (usize, Rat);

/// Compare traversal positions along one polyline.
pub fn cmp_pos(a: &CurvePos, b: &CurvePos) -> std::cmp::Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

/// Transversal crossing of two curve strands.
///
/// `epsilon` is +1 exactly when the second curve crosses the first from its
/// right to its left, i.e. when the determinant of the two edge directions
/// (first curve's, then second curve's) is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingPoint {
    pub position: Point2,
    pub on_a: CurvePos,
    pub on_b: CurvePos,
    pub epsilon: Sign,
}

/// Interior intersection of two segments with its exact parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentHit {
    pub point: Point2,
    pub t: Rat,
    pub u: Rat,
}

enum PairIncidence {
    Disjoint,
    Crossing(SegmentHit),
    Degenerate(GeoError),
}

fn in_closed_unit(r: &Rat) -> bool {
    !r.is_negative() && r <= &Rat::one()
}

fn in_open_unit(r: &Rat) -> bool {
    r.is_positive() && r < &Rat::one()
}

fn classify_pair(p0: &Point2, p1: &Point2, q0: &Point2, q1: &Point2) -> PairIncidence {
    let d1 = p1.sub(p0);
    let d2 = q1.sub(q0);
    if (d1.x.is_zero() && d1.y.is_zero()) || (d2.x.is_zero() && d2.y.is_zero()) {
        return PairIncidence::Degenerate(GeoError::ZeroLengthSegment);
    }
    let denom = d1.cross(&d2);
    let w = q0.sub(p0);
    if denom.is_zero() {
        if !w.cross(&d1).is_zero() {
            return PairIncidence::Disjoint; // parallel, distinct lines
        }
        // Collinear: compare 1-D extents along the dominant axis of d1.
        let axis_x = d1.x.abs() >= d1.y.abs();
        let coord = |p: &Point2| if axis_x { p.x.clone() } else { p.y.clone() };
        let (mut a0, mut a1) = (coord(p0), coord(p1));
        if a0 > a1 {
            std::mem::swap(&mut a0, &mut a1);
        }
        let (mut b0, mut b1) = (coord(q0), coord(q1));
        if b0 > b1 {
            std::mem::swap(&mut b0, &mut b1);
        }
        if a1 < b0 || b1 < a0 {
            PairIncidence::Disjoint
        } else {
            PairIncidence::Degenerate(GeoError::CollinearOverlap)
        }
    } else {
        let t = w.cross(&d2) / &denom;
        let u = w.cross(&d1) / &denom;
        if !in_closed_unit(&t) || !in_closed_unit(&u) {
            PairIncidence::Disjoint
        } else if in_open_unit(&t) && in_open_unit(&u) {
            let point = p0.lerp(p1, &t);
            PairIncidence::Crossing(SegmentHit { point, t, u })
        } else {
            PairIncidence::Degenerate(GeoError::EndpointIncidence)
        }
    }
}

/// Unique transversal interior intersection of two segments, or `None` if
/// they are disjoint. Collinear overlap, endpoint touches, and zero-length
/// segments are degeneracy errors rather than absence.
pub fn segment_intersection(
    p0: &Point2,
    p1: &Point2,
    q0: &Point2,
    q1: &Point2,
) -> Result<Option<SegmentHit>, GeoError> {
    match classify_pair(p0, p1, q0, q1) {
        PairIncidence::Disjoint => Ok(None),
        PairIncidence::Crossing(hit) => Ok(Some(hit)),
        PairIncidence::Degenerate(e) => Err(e),
    }
}

fn bbox_disjoint(p0: &Point2, p1: &Point2, q0: &Point2, q1: &Point2) -> bool {
    let (axmin, axmax) = if p0.x <= p1.x { (&p0.x, &p1.x) } else { (&p1.x, &p0.x) };
    let (bxmin, bxmax) = if q0.x <= q1.x { (&q0.x, &q1.x) } else { (&q1.x, &q0.x) };
    if axmax < bxmin || bxmax < axmin {
        return true;
    }
    let (aymin, aymax) = if p0.y <= p1.y { (&p0.y, &p1.y) } else { (&p1.y, &p0.y) };
    let (bymin, bymax) = if q0.y <= q1.y { (&q0.y, &q1.y) } else { (&q1.y, &q0.y) };
    aymax < bymin || bymax < aymin
}

fn crossing_from_hit(a: &Polyline, i: usize, b: &Polyline, j: usize, hit: SegmentHit) -> CrossingPoint {
    let da = a.edge_dir(i);
    let db = b.edge_dir(j);
    let epsilon = Sign::of(&da.cross(&db)).expect("transversal crossing has nonzero determinant");
    CrossingPoint {
        position: hit.point,
        on_a: (i, hit.t),
        on_b: (j, hit.u),
        epsilon,
    }
}

fn check_no_coincident_positions(hits: &[CrossingPoint]) -> Result<(), GeoError> {
    let mut seen: HashMap<&Point2, u32> = HashMap::new();
    for h in hits {
        let c = seen.entry(&h.position).or_insert(0);
        *c += 1;
        if *c > 1 {
            return Err(GeoError::TriplePoint);
        }
    }
    Ok(())
}

/// All pairwise transversal crossings of two distinct curves, ordered by
/// traversal position along `a`.
pub fn curve_intersections(a: &Polyline, b: &Polyline) -> Result<Vec<CrossingPoint>, GeoError> {
    let mut hits = Vec::new();
    for i in 0..a.len() {
        let (p0, p1) = a.edge(i);
        for j in 0..b.len() {
            let (q0, q1) = b.edge(j);
            if bbox_disjoint(p0, p1, q0, q1) {
                continue;
            }
            match classify_pair(p0, p1, q0, q1) {
                PairIncidence::Disjoint => {}
                PairIncidence::Crossing(hit) => hits.push(crossing_from_hit(a, i, b, j, hit)),
                PairIncidence::Degenerate(GeoError::EndpointIncidence) => {
                    return Err(GeoError::VertexIncidence)
                }
                PairIncidence::Degenerate(e) => return Err(e),
            }
        }
    }
    check_no_coincident_positions(&hits)?;
    hits.sort_by(|x, y| cmp_pos(&x.on_a, &y.on_a));
    Ok(hits)
}

/// Whether edges `i < j` of an `n`-gon share a vertex.
fn adjacent_edges(i: usize, j: usize, n: usize) -> bool {
    j == i + 1 || (i == 0 && j == n - 1)
}

/// Checks that no vertex is a reversal point: consecutive collinear edges
/// must continue in the same direction, otherwise the two edges overlap.
fn check_turns(a: &Polyline) -> Result<(), GeoError> {
    let n = a.len();
    for v in 0..n {
        let prev = a.edge_dir((v + n - 1) % n);
        let next = a.edge_dir(v);
        if prev.cross(&next).is_zero() && prev.dot(&next).is_negative() {
            return Err(GeoError::DoubledBack(v));
        }
    }
    Ok(())
}

/// Self-crossings of one curve, skipping the shared vertices of adjacent
/// edges; each double point is reported once, ordered by the earlier
/// passage.
pub fn self_intersections(a: &Polyline) -> Result<Vec<CrossingPoint>, GeoError> {
    check_turns(a)?;
    let n = a.len();
    let mut hits = Vec::new();
    for i in 0..n {
        let (p0, p1) = a.edge(i);
        for j in (i + 1)..n {
            if adjacent_edges(i, j, n) {
                continue; // shared vertex; overlap is excluded by check_turns
            }
            let (q0, q1) = a.edge(j);
            if bbox_disjoint(p0, p1, q0, q1) {
                continue;
            }
            match classify_pair(p0, p1, q0, q1) {
                PairIncidence::Disjoint => {}
                PairIncidence::Crossing(hit) => hits.push(crossing_from_hit(a, i, a, j, hit)),
                PairIncidence::Degenerate(GeoError::EndpointIncidence) => {
                    return Err(GeoError::VertexIncidence)
                }
                PairIncidence::Degenerate(e) => return Err(e),
            }
        }
    }
    check_no_coincident_positions(&hits)?;
    hits.sort_by(|x, y| cmp_pos(&x.on_a, &y.on_a));
    Ok(hits)
}

/// Twice-signed shoelace sum (no division by two).
fn shoelace_double(a: &Polyline) -> Rat {
    let n = a.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let p = &a.vertices()[i];
        let q = a.vertex(i + 1);
        acc += p.cross(q);
    }
    acc
}

/// Signed area of a simple closed polyline; positive iff anticlockwise.
pub fn signed_area(a: &Polyline) -> Result<Rat, GeoError> {
    if !self_intersections(a)?.is_empty() {
        return Err(GeoError::NotSimple);
    }
    Ok(shoelace_double(a) / rat(2))
}

fn point_on_edge(p: &Point2, a: &Point2, b: &Point2) -> bool {
    let d = b.sub(a);
    let w = p.sub(a);
    if !d.cross(&w).is_zero() {
        return false;
    }
    let s = d.dot(&w);
    !s.is_negative() && s <= d.dot(&d)
}

/// Exact winding number of `a` around `p`. Errors when `p` lies on `a`.
pub fn winding_number(p: &Point2, a: &Polyline) -> Result<i64, GeoError> {
    let n = a.len();
    for i in 0..n {
        let (v0, v1) = a.edge(i);
        if point_on_edge(p, v0, v1) {
            return Err(GeoError::PointOnCurve);
        }
    }
    let mut w = 0i64;
    for i in 0..n {
        let (v0, v1) = a.edge(i);
        if v0.y <= p.y {
            if v1.y > p.y {
                let side = v1.sub(v0).cross(&p.sub(v0));
                if side.is_positive() {
                    w += 1;
                }
            }
        } else if v1.y <= p.y {
            let side = v1.sub(v0).cross(&p.sub(v0));
            if side.is_negative() {
                w -= 1;
            }
        }
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DoubledBack,
    CollinearOverlap,
    VertexIncidence,
    TriplePoint,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::DoubledBack => "doubled-back vertex",
            ViolationKind::CollinearOverlap => "collinear overlap",
            ViolationKind::VertexIncidence => "vertex incidence",
            ViolationKind::TriplePoint => "triple point",
        };
        write!(f, "{s}")
    }
}

/// One general-position violation: what, where, and which strands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Option<Point2>,
    /// (curve index, segment index) of the two strands involved.
    pub strands: ((usize, usize), (usize, usize)),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} between curve {} segment {} and curve {} segment {}",
            self.kind, self.strands.0 .0, self.strands.0 .1, self.strands.1 .0, self.strands.1 .1
        )?;
        if let Some(p) = &self.location {
            write!(f, " near {p}")?;
        }
        Ok(())
    }
}

/// Result of [`validate_general_position`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneralPositionReport {
    pub violations: Vec<Violation>,
}

impl GeneralPositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GeneralPositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "general position: ok")
        } else {
            writeln!(f, "general position: {} violation(s)", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Accepts a family of curves iff every incidence among them (including
/// self-incidences) is a transversal double point: no tangencies, no triple
/// points, no vertex-on-strand contacts. Violations are collected, not
/// raised.
pub fn validate_general_position(curves: &[Polyline]) -> GeneralPositionReport {
    let mut report = GeneralPositionReport::default();
    let mut crossings: HashMap<Point2, Vec<((usize, usize), (usize, usize))>> = HashMap::new();

    for (ci, c) in curves.iter().enumerate() {
        let n = c.len();
        for v in 0..n {
            let prev = c.edge_dir((v + n - 1) % n);
            let next = c.edge_dir(v);
            if prev.cross(&next).is_zero() && prev.dot(&next).is_negative() {
                report.violations.push(Violation {
                    kind: ViolationKind::DoubledBack,
                    location: Some(c.vertices()[v].clone()),
                    strands: ((ci, (v + n - 1) % n), (ci, v)),
                });
            }
        }
    }

    let record = |kind: ViolationKind,
                      location: Option<Point2>,
                      sa: (usize, usize),
                      sb: (usize, usize),
                      report: &mut GeneralPositionReport| {
        report.violations.push(Violation {
            kind,
            location,
            strands: (sa, sb),
        });
    };

    for ca in 0..curves.len() {
        for cb in ca..curves.len() {
            let a = &curves[ca];
            let b = &curves[cb];
            for i in 0..a.len() {
                let jstart = if ca == cb { i + 1 } else { 0 };
                for j in jstart..b.len() {
                    if ca == cb && adjacent_edges(i, j, a.len()) {
                        continue;
                    }
                    let (p0, p1) = a.edge(i);
                    let (q0, q1) = b.edge(j);
                    if bbox_disjoint(p0, p1, q0, q1) {
                        continue;
                    }
                    match classify_pair(p0, p1, q0, q1) {
                        PairIncidence::Disjoint => {}
                        PairIncidence::Crossing(hit) => crossings
                            .entry(hit.point)
                            .or_default()
                            .push(((ca, i), (cb, j))),
                        PairIncidence::Degenerate(GeoError::EndpointIncidence) => record(
                            ViolationKind::VertexIncidence,
                            None,
                            (ca, i),
                            (cb, j),
                            &mut report,
                        ),
                        PairIncidence::Degenerate(_) => record(
                            ViolationKind::CollinearOverlap,
                            None,
                            (ca, i),
                            (cb, j),
                            &mut report,
                        ),
                    }
                }
            }
        }
    }

    for (point, strands) in crossings {
        if strands.len() > 1 {
            report.violations.push(Violation {
                kind: ViolationKind::TriplePoint,
                location: Some(point),
                strands: (strands[0].0, strands[1].1),
            });
        }
    }
    report.violations.sort_by_key(|v| (v.strands, v.kind as usize));
    report
}
