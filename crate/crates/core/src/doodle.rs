//! Doodles, oriented smoothing of self-intersections, and the μ-invariant.
//!
//! A doodle is a family of closed curves in general position with no
//! over/under data. The μ-invariant of an ordered 3-component doodle
//! (C₁, C₂, C₃) is computed by smoothing all self-intersections of C₁ into
//! oriented simple closed curves C_{1,i} and summing, over every crossing p
//! of C₂ and C₃ lying inside a C_{1,i}, the crossing sign corrected by the
//! orientation of C_{1,i}:
//!
//!   μ(C₁,C₂,C₃) = Σᵢ Σ_{p ∈ C₂∩C₃ inside C_{1,i}} (−1)^{n_{C_{1,i}}} ε(p)
//!
//! "Inside" is decided by an exact nonzero winding test, so nested smoothed
//! curves count a crossing once per curve containing it.

use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::geometry::{
    self, cmp_pos, CurvePos, GeneralPositionReport, GeoError, Point2, Polyline, Sign,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DoodleError {
    #[error("doodle is not in general position: {0}")]
    NotGeneralPosition(GeneralPositionReport),
    #[error("expected a 3-component doodle, got {0} components")]
    ComponentCount(usize),
    #[error("a C2-C3 crossing lies on a smoothed curve of C1")]
    DegenerateRegionTest,
    #[error(transparent)]
    Geometry(#[from] GeoError),
}

/// Family of oriented closed polylines in general position.
#[derive(Debug, Clone, PartialEq)]
pub struct Doodle {
    components: Vec<Polyline>,
}

impl Doodle {
    /// Validates general position of the whole family.
    pub fn new(components: Vec<Polyline>) -> Result<Doodle, DoodleError> {
        let report = geometry::validate_general_position(&components);
        if !report.is_valid() {
            return Err(DoodleError::NotGeneralPosition(report));
        }
        Ok(Doodle { components })
    }

    pub fn components(&self) -> &[Polyline] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Polyline {
        &self.components[k]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn into_components(self) -> Vec<Polyline> {
        self.components
    }
}

/// Result of smoothing every self-intersection of one component:
/// oriented simple closed curves that trace the component away from its
/// double points, plus the orientation flag n_C of each curve
/// (0 anticlockwise, 1 clockwise).
#[derive(Debug, Clone)]
pub struct SmoothedFamily {
    pub source: usize,
    pub curves: Vec<Polyline>,
    pub flags: Vec<u8>,
}

impl SmoothedFamily {
    /// (−1)^{n_C} for curve `i`.
    pub fn orientation_sign(&self, i: usize) -> Sign {
        if self.flags[i] == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One traversal of the component through a double point.
struct Passage {
    pos: CurvePos,
    point: Point2,
    crossing: usize,
}

/// Splits component `k` at each self double point and reconnects the
/// strands respecting orientation: the strand arriving on one branch
/// continues along the strand leaving on the other branch. The two local
/// strands at a double point always land on different output curves, so
/// every output curve is simple; distinct curves may touch at former
/// double points.
pub fn smooth_component(d: &Doodle, k: usize) -> Result<SmoothedFamily, DoodleError> {
    let curve = d.component(k);
    let crossings = geometry::self_intersections(curve)?;
    if crossings.is_empty() {
        let flag = flag_of(curve)?;
        return Ok(SmoothedFamily {
            source: k,
            curves: vec![curve.clone()],
            flags: vec![flag],
        });
    }

    let mut passages: Vec<Passage> = Vec::with_capacity(2 * crossings.len());
    for (ci, c) in crossings.iter().enumerate() {
        passages.push(Passage {
            pos: c.on_a.clone(),
            point: c.position.clone(),
            crossing: ci,
        });
        passages.push(Passage {
            pos: c.on_b.clone(),
            point: c.position.clone(),
            crossing: ci,
        });
    }
    passages.sort_by(|a, b| cmp_pos(&a.pos, &b.pos));
    let m = passages.len();

    // Arc p runs from passage p to passage p+1; collect its vertex chain.
    let n = curve.len();
    let mut arcs: Vec<Vec<Point2>> = Vec::with_capacity(m);
    for p in 0..m {
        let start = &passages[p];
        let end = &passages[(p + 1) % m];
        let wraps = p + 1 == m; // only the last arc passes vertex 0
        let mut chain = vec![start.point.clone()];
        if start.pos.0 != end.pos.0 || wraps {
            // Walk vertex by vertex until reaching the edge holding `end`.
            let mut seg = (start.pos.0 + 1) % n;
            loop {
                chain.push(curve.vertex(seg).clone());
                if seg == end.pos.0 {
                    break;
                }
                seg = (seg + 1) % n;
            }
        }
        chain.push(end.point.clone());
        arcs.push(chain);
    }

    // Reconnection: the arc ending at one passage of a crossing continues
    // with the arc starting at the partner passage.
    let mut partner = vec![usize::MAX; m];
    for ci in 0..crossings.len() {
        let idx: Vec<usize> = (0..m).filter(|&p| passages[p].crossing == ci).collect();
        partner[idx[0]] = idx[1];
        partner[idx[1]] = idx[0];
    }
    let mut successor = vec![usize::MAX; m];
    for p in 0..m {
        // Arc (p-1) ends at passage p; it continues as the arc starting at
        // the partner passage.
        successor[(p + m - 1) % m] = partner[p];
    }

    let mut visited = vec![false; m];
    let mut curves = Vec::new();
    let mut flags = Vec::new();
    for start in 0..m {
        if visited[start] {
            continue;
        }
        let mut vertices: Vec<Point2> = Vec::new();
        let mut a = start;
        loop {
            visited[a] = true;
            // Drop the closing duplicate: each arc begins where the previous
            // one ended.
            vertices.extend_from_slice(&arcs[a][..arcs[a].len() - 1]);
            a = successor[a];
            if a == start {
                break;
            }
        }
        let poly = Polyline::new(vertices)?;
        let flag = flag_of(&poly)?;
        curves.push(poly);
        flags.push(flag);
    }

    Ok(SmoothedFamily {
        source: k,
        curves,
        flags,
    })
}

fn flag_of(curve: &Polyline) -> Result<u8, DoodleError> {
    let area = geometry::signed_area(curve)?;
    Ok(if area.is_positive() { 0 } else { 1 })
}

/// Permutation of the three component roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Perm3([usize; 3]);

impl Perm3 {
    pub fn new(p: [usize; 3]) -> Option<Perm3> {
        let mut seen = [false; 3];
        for &i in &p {
            if i > 2 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm3(p))
    }

    pub fn identity() -> Perm3 {
        Perm3([0, 1, 2])
    }

    pub fn all() -> [Perm3; 6] {
        [
            Perm3([0, 1, 2]),
            Perm3([0, 2, 1]),
            Perm3([1, 0, 2]),
            Perm3([1, 2, 0]),
            Perm3([2, 0, 1]),
            Perm3([2, 1, 0]),
        ]
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn indices(&self) -> [usize; 3] {
        self.0
    }

    pub fn sign(&self) -> i64 {
        let p = self.0;
        let mut inv = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0] + 1, self.0[1] + 1, self.0[2] + 1)
    }
}

/// μ(C_{σ1}, C_{σ2}, C_{σ3}) of a 3-component doodle.
pub fn mu_invariant(d: &Doodle, sigma: Perm3) -> Result<i64, DoodleError> {
    if d.len() != 3 {
        return Err(DoodleError::ComponentCount(d.len()));
    }
    let [s1, s2, s3] = sigma.indices();
    let family = smooth_component(d, s1)?;
    let crossings = geometry::curve_intersections(d.component(s2), d.component(s3))?;
    let mut total = 0i64;
    for p in &crossings {
        for (i, curve) in family.curves.iter().enumerate() {
            let w = match geometry::winding_number(&p.position, curve) {
                Ok(w) => w,
                Err(GeoError::PointOnCurve) => return Err(DoodleError::DegenerateRegionTest),
                Err(e) => return Err(e.into()),
            };
            if w != 0 {
                total += family.orientation_sign(i).to_i64() * p.epsilon.to_i64();
            }
        }
    }
    Ok(total)
}
