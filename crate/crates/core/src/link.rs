//! 3-component link diagrams: over/under data on a doodle projection,
//! linking numbers, Δ (gcd of pairwise linking numbers), the cyclic-height
//! construction L(D), and the over-crossing sets feeding chord diagrams.

use num_integer::Integer;
use thiserror::Error;

use crate::doodle::{Doodle, DoodleError};
use crate::geometry::{self, cmp_pos, CrossingPoint, CurvePos, Polyline, Sign};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkError {
    #[error("expected exactly 3 components, got {0}")]
    ComponentCount(usize),
    #[error(transparent)]
    Projection(#[from] DoodleError),
    #[error("odd crossing-sign sum between components {0} and {1}: corrupted diagram")]
    OddSignSum(usize, usize),
}

/// Which branch of a crossing record is the upper strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    A,
    B,
}

/// Identity of a crossing by the two segments that meet there. For
/// inter-component crossings `comp_a < comp_b`; for self-crossings
/// `comp_a == comp_b` and `seg_a < seg_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingKey {
    pub comp_a: usize,
    pub seg_a: usize,
    pub comp_b: usize,
    pub seg_b: usize,
}

/// One crossing of the diagram: exact geometry plus over/under data.
///
/// `gamma` is the standard crossing sign: +1 iff the determinant of
/// (over-branch direction, under-branch direction) is positive. It is
/// recomputable from `geometry` and `over`.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub geometry: CrossingPoint,
    pub comp_a: usize,
    pub comp_b: usize,
    pub over: Branch,
    pub gamma: Sign,
}

impl Crossing {
    pub fn is_self(&self) -> bool {
        self.comp_a == self.comp_b
    }

    pub fn over_component(&self) -> usize {
        match self.over {
            Branch::A => self.comp_a,
            Branch::B => self.comp_b,
        }
    }

    pub fn under_component(&self) -> usize {
        match self.over {
            Branch::A => self.comp_b,
            Branch::B => self.comp_a,
        }
    }

    pub fn over_position(&self) -> &CurvePos {
        match self.over {
            Branch::A => &self.geometry.on_a,
            Branch::B => &self.geometry.on_b,
        }
    }

    pub fn under_position(&self) -> &CurvePos {
        match self.over {
            Branch::A => &self.geometry.on_b,
            Branch::B => &self.geometry.on_a,
        }
    }

    pub fn key(&self) -> CrossingKey {
        CrossingKey {
            comp_a: self.comp_a,
            seg_a: self.geometry.on_a.0,
            comp_b: self.comp_b,
            seg_b: self.geometry.on_b.0,
        }
    }

    fn gamma_from(geometry: &CrossingPoint, over: Branch) -> Sign {
        match over {
            Branch::A => geometry.epsilon,
            Branch::B => -geometry.epsilon,
        }
    }
}

/// Oriented 3-component link diagram. The projection (components without
/// over/under bits) is a valid doodle; every geometric crossing carries
/// exactly one crossing record, in canonical order
/// (comp_a, comp_b, seg_a, t_a).
#[derive(Debug, Clone, PartialEq)]
pub struct LinkDiagram {
    components: Vec<Polyline>,
    crossings: Vec<Crossing>,
}

impl LinkDiagram {
    /// Builds the diagram, assigning each detected crossing's upper branch
    /// through `choose_over`.
    pub fn new(
        components: Vec<Polyline>,
        mut choose_over: impl FnMut(usize, usize, &CrossingPoint) -> Branch,
    ) -> Result<LinkDiagram, LinkError> {
        if components.len() != 3 {
            return Err(LinkError::ComponentCount(components.len()));
        }
        let doodle = Doodle::new(components)?;
        let components = doodle.into_components();

        let mut crossings = Vec::new();
        for a in 0..3 {
            for hit in geometry::self_intersections(&components[a]).map_err(DoodleError::from)? {
                let over = choose_over(a, a, &hit);
                let gamma = Crossing::gamma_from(&hit, over);
                crossings.push(Crossing {
                    geometry: hit,
                    comp_a: a,
                    comp_b: a,
                    over,
                    gamma,
                });
            }
            for b in (a + 1)..3 {
                for hit in geometry::curve_intersections(&components[a], &components[b])
                    .map_err(DoodleError::from)?
                {
                    let over = choose_over(a, b, &hit);
                    let gamma = Crossing::gamma_from(&hit, over);
                    crossings.push(Crossing {
                        geometry: hit,
                        comp_a: a,
                        comp_b: b,
                        over,
                        gamma,
                    });
                }
            }
        }
        crossings.sort_by(|x, y| {
            (x.comp_a, x.comp_b)
                .cmp(&(y.comp_a, y.comp_b))
                .then_with(|| cmp_pos(&x.geometry.on_a, &y.geometry.on_a))
        });
        Ok(LinkDiagram {
            components,
            crossings,
        })
    }

    pub fn components(&self) -> &[Polyline] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Polyline {
        &self.components[k]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OverMapError {
    #[error("crossing key ({0}, {1}, {2}, {3}) does not match any detected crossing")]
    UnknownKey(usize, usize, usize, usize),
    #[error("detected crossing ({0}, {1}, {2}, {3}) has no over/under assignment")]
    MissingKey(usize, usize, usize, usize),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Builds a diagram whose over/under bits are given per crossing key. The
/// keys must exactly cover the geometrically detected crossings.
pub fn link_from_over_map(
    components: Vec<Polyline>,
    over: &std::collections::BTreeMap<CrossingKey, Branch>,
) -> Result<LinkDiagram, OverMapError> {
    let mut link = LinkDiagram::new(components, |_, _, _| Branch::A)?;
    let mut used = std::collections::BTreeSet::new();
    for c in &mut link.crossings {
        let key = c.key();
        let Some(&branch) = over.get(&key) else {
            return Err(OverMapError::MissingKey(
                key.comp_a, key.seg_a, key.comp_b, key.seg_b,
            ));
        };
        c.over = branch;
        c.gamma = Crossing::gamma_from(&c.geometry, branch);
        used.insert(key);
    }
    for key in over.keys() {
        if !used.contains(key) {
            return Err(OverMapError::UnknownKey(
                key.comp_a, key.seg_a, key.comp_b, key.seg_b,
            ));
        }
    }
    Ok(link)
}

/// Forget the over/under bits; components keep their order.
pub fn project_to_doodle(link: &LinkDiagram) -> Doodle {
    Doodle::new(link.components.to_vec()).expect("link projection is a valid doodle")
}

/// Half the sum of crossing signs between components `i` and `j`.
pub fn linking_number(link: &LinkDiagram, i: usize, j: usize) -> Result<i64, LinkError> {
    assert!(i != j, "linking number needs two distinct components");
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let mut total = 0i64;
    for c in &link.crossings {
        if (c.comp_a, c.comp_b) == (lo, hi) {
            total += c.gamma.to_i64();
        }
    }
    if total.rem_euclid(2) != 0 {
        return Err(LinkError::OddSignSum(lo, hi));
    }
    Ok(total / 2)
}

/// The three pairwise linking numbers (lk₁₂, lk₂₃, lk₃₁).
pub fn linking_matrix(link: &LinkDiagram) -> Result<[i64; 3], LinkError> {
    Ok([
        linking_number(link, 0, 1)?,
        linking_number(link, 1, 2)?,
        linking_number(link, 2, 0)?,
    ])
}

/// gcd{|lk₁₂|, |lk₂₃|, |lk₃₁|}, with gcd{0,0,0} = 0.
pub fn delta_from_lk(lk: [i64; 3]) -> u64 {
    lk.iter()
        .map(|v| v.unsigned_abs())
        .fold(0u64, |acc, v| acc.gcd(&v))
}

/// Δ of the diagram.
pub fn delta(link: &LinkDiagram) -> Result<u64, LinkError> {
    Ok(delta_from_lk(linking_matrix(link)?))
}

/// Cyclic successor of a component index (0-based).
pub fn next_component(k: usize) -> usize {
    (k + 1) % 3
}

/// Cyclic predecessor of a component index (0-based).
pub fn prev_component(k: usize) -> usize {
    (k + 2) % 3
}

/// The link L(D) of a 3-component doodle: over/under bits chosen so that
/// C₁ is over C₂, C₂ over C₃, and C₃ over C₁ at every inter-component
/// crossing. Self-crossings take the first branch over, which does not
/// affect the link homotopy class. Any two components of L(D) are unlinked.
pub fn construct_l_of_d(d: &Doodle) -> Result<LinkDiagram, LinkError> {
    if d.len() != 3 {
        return Err(LinkError::ComponentCount(d.len()));
    }
    LinkDiagram::new(d.components().to_vec(), |a, b, _| {
        if a == b {
            Branch::A
        } else if b == next_component(a) {
            // comp_a < comp_b with b the cyclic successor: a over b.
            Branch::A
        } else {
            // (a, b) = (0, 2): C₃ over C₁.
            Branch::B
        }
    })
}

/// An over-crossing of component `k`, as seen while traversing `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverMark {
    /// Index into `LinkDiagram::crossings`.
    pub crossing: usize,
    /// Position of the over branch along component `k`.
    pub position: CurvePos,
    pub under_component: usize,
    pub gamma: Sign,
}

/// The inter-component over-crossings of one component, split by the
/// under-component and ordered along the component from vertex 0.
/// With (i, j, k) the cyclic triple ending at `component`,
/// `under_prev` holds V^a_{k,j} (under-component j = k+2 mod 3) and
/// `under_next` holds V^a_{k,i} (under-component i = k+1 mod 3).
#[derive(Debug, Clone, PartialEq)]
pub struct OverSets {
    pub component: usize,
    pub under_prev: Vec<OverMark>,
    pub under_next: Vec<OverMark>,
}

impl OverSets {
    /// All marks merged back into traversal order.
    pub fn merged(&self) -> Vec<OverMark> {
        let mut all: Vec<OverMark> = self
            .under_prev
            .iter()
            .chain(self.under_next.iter())
            .cloned()
            .collect();
        all.sort_by(|x, y| cmp_pos(&x.position, &y.position));
        all
    }
}

/// Partition of the crossings where component `k` is the over branch, by
/// under-component, each list ordered along `k` with canonical start at
/// vertex 0. Self-crossings are excluded.
pub fn over_crossing_sets(link: &LinkDiagram, k: usize) -> OverSets {
    let mut under_prev = Vec::new();
    let mut under_next = Vec::new();
    for (idx, c) in link.crossings.iter().enumerate() {
        if c.is_self() || c.over_component() != k {
            continue;
        }
        let mark = OverMark {
            crossing: idx,
            position: c.over_position().clone(),
            under_component: c.under_component(),
            gamma: c.gamma,
        };
        if c.under_component() == prev_component(k) {
            under_prev.push(mark);
        } else {
            under_next.push(mark);
        }
    }
    under_prev.sort_by(|x, y| cmp_pos(&x.position, &y.position));
    under_next.sort_by(|x, y| cmp_pos(&x.position, &y.position));
    OverSets {
        component: k,
        under_prev,
        under_next,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, ratio, Point2};

    fn square(origin: (i64, i64), size: i64) -> Polyline {
        let (x, y) = origin;
        Polyline::from_ints(&[(x, y), (x + size, y), (x + size, y + size), (x, y + size)])
            .unwrap()
    }

    fn split_unlink() -> LinkDiagram {
        LinkDiagram::new(
            vec![square((0, 0), 2), square((10, 0), 2), square((20, 0), 2)],
            |_, _, _| Branch::A,
        )
        .unwrap()
    }

    #[test]
    fn split_unlink_has_zero_linking() {
        let l = split_unlink();
        assert_eq!(linking_matrix(&l).unwrap(), [0, 0, 0]);
        assert_eq!(delta(&l).unwrap(), 0);
    }

    /// Two overlapping squares with over bits arranged so both crossing
    /// signs are +1, plus a far-away third component.
    fn hopf_plus_far_circle() -> LinkDiagram {
        let a = square((0, 0), 3);
        let b = square((0, 0), 3).translated(&ratio(3, 2), &ratio(3, 2));
        let far = square((40, 0), 2);
        // Crossings: (3, 3/2) with epsilon -1 and (3/2, 3) with epsilon +1.
        // Over = B at the first makes gamma = +1 there; over = A at the second.
        LinkDiagram::new(vec![a, b, far], |i, j, hit| {
            assert_eq!((i, j), (0, 1));
            if hit.position == Point2::new(rat(3), ratio(3, 2)) {
                Branch::B
            } else {
                Branch::A
            }
        })
        .unwrap()
    }

    #[test]
    fn hopf_half_sum_is_one() {
        let l = hopf_plus_far_circle();
        assert_eq!(linking_number(&l, 0, 1).unwrap(), 1);
        assert_eq!(linking_number(&l, 1, 0).unwrap(), 1);
        assert_eq!(linking_matrix(&l).unwrap(), [1, 0, 0]);
        assert_eq!(delta(&l).unwrap(), 1);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_from_lk([2, -2, 2]), 2);
        assert_eq!(delta_from_lk([0, 0, 0]), 0);
        assert_eq!(delta_from_lk([3, 5, 0]), 1);
    }

    #[test]
    fn gamma_recomputation_invariant() {
        let l = hopf_plus_far_circle();
        for c in l.crossings() {
            assert_eq!(c.gamma, Crossing::gamma_from(&c.geometry, c.over));
            // And against raw edge directions.
            let over_comp = c.over_component();
            let under_comp = c.under_component();
            let over_dir = l.component(over_comp).edge_dir(c.over_position().0);
            let under_dir = l.component(under_comp).edge_dir(c.under_position().0);
            assert_eq!(Sign::of(&over_dir.cross(&under_dir)), Some(c.gamma));
        }
    }

    #[test]
    fn projection_round_trip() {
        let d = crate::fixtures::venn_doodle();
        let l = construct_l_of_d(&d).unwrap();
        assert_eq!(project_to_doodle(&l), d);
    }

    #[test]
    fn l_of_d_is_pairwise_unlinked() {
        let d = crate::fixtures::venn_doodle();
        let l = construct_l_of_d(&d).unwrap();
        assert_eq!(linking_matrix(&l).unwrap(), [0, 0, 0]);
        assert_eq!(delta(&l).unwrap(), 0);
    }

    #[test]
    fn l_of_d_over_rule() {
        let d = crate::fixtures::venn_doodle();
        let l = construct_l_of_d(&d).unwrap();
        for c in l.crossings() {
            if c.is_self() {
                continue;
            }
            let (a, b) = (c.comp_a, c.comp_b);
            let expected_over = if b == next_component(a) { a } else { b };
            assert_eq!(c.over_component(), expected_over);
        }
    }

    #[test]
    fn over_sets_of_l_of_d() {
        let d = crate::fixtures::venn_doodle();
        let l = construct_l_of_d(&d).unwrap();
        // k = 0: prev component is 2 and C₃ is over C₁ everywhere, so
        // under_prev is empty; every over-crossing of C₁ is over C₂.
        let sets = over_crossing_sets(&l, 0);
        assert!(sets.under_prev.is_empty());
        assert_eq!(sets.under_next.len(), 2);
        for m in &sets.under_next {
            assert_eq!(m.under_component, 1);
        }
    }

    #[test]
    fn over_sets_of_split_unlink_are_empty() {
        let l = split_unlink();
        for k in 0..3 {
            let sets = over_crossing_sets(&l, k);
            assert!(sets.under_prev.is_empty());
            assert!(sets.under_next.is_empty());
        }
    }

    #[test]
    fn over_sets_match_direct_scan() {
        let d = crate::fixtures::venn_doodle();
        let l = construct_l_of_d(&d).unwrap();
        for k in 0..3 {
            let sets = over_crossing_sets(&l, k);
            let direct = l
                .crossings()
                .iter()
                .filter(|c| !c.is_self() && c.over_component() == k)
                .count();
            assert_eq!(sets.under_prev.len() + sets.under_next.len(), direct);
            // Merged order is strictly increasing along k.
            let merged = sets.merged();
            for w in merged.windows(2) {
                assert!(cmp_pos(&w[0].position, &w[1].position).is_lt());
            }
        }
    }

    #[test]
    fn linking_number_invariant_under_rigid_motion() {
        let l = hopf_plus_far_circle();
        let lk = linking_matrix(&l).unwrap();
        let moved: Vec<Polyline> = l
            .components()
            .iter()
            .map(|c| {
                c.rotated(&ratio(5, 13), &ratio(12, 13))
                    .unwrap()
                    .translated(&rat(3), &ratio(1, 7))
            })
            .collect();
        // Rebuild with the same over choices keyed by crossing order.
        let overs: Vec<Branch> = l.crossings().iter().map(|c| c.over).collect();
        let mut i = 0;
        let moved = LinkDiagram::new(moved, |_, _, _| {
            let b = overs[i];
            i += 1;
            b
        })
        .unwrap();
        assert_eq!(linking_matrix(&moved).unwrap(), lk);
    }
}
