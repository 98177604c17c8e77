//! Fixtures and seeded generators: the Venn-position doodle, random
//! general-position doodles and links, exact isotopy perturbations, and the
//! handcrafted forbidden-move pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::doodle::{Doodle, DoodleError};
use crate::geometry::{self, rat, ratio, Point2, Polyline, Rat};
use crate::link::{Branch, LinkDiagram, LinkError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixtureError {
    #[error("no valid instance found after {attempts} attempts")]
    GenerationExhausted { attempts: u32 },
    #[error(transparent)]
    Doodle(#[from] DoodleError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Parameters of the seeded generators. Output is deterministic per seed.
#[derive(Debug, Clone)]
pub struct GenParams {
    pub seed: u64,
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Coordinate bound of the rational grid.
    pub grid: i64,
    pub max_attempts: u32,
}

impl Default for GenParams {
    fn default() -> GenParams {
        GenParams {
            seed: 0,
            min_vertices: 8,
            max_vertices: 14,
            grid: 24,
            max_attempts: 400,
        }
    }
}

impl GenParams {
    pub fn seeded(seed: u64) -> GenParams {
        GenParams {
            seed,
            ..GenParams::default()
        }
    }
}

/// (cos, sin) of 15°·k, scaled by 4096 and rounded: a 24-gon direction
/// table used for polygonal circles.
const DIRS_24: [(i64, i64); 24] = [
    (4096, 0),
    (3956, 1060),
    (3547, 2048),
    (2896, 2896),
    (2048, 3547),
    (1060, 3956),
    (0, 4096),
    (-1060, 3956),
    (-2048, 3547),
    (-2896, 2896),
    (-3547, 2048),
    (-3956, 1060),
    (-4096, 0),
    (-3956, -1060),
    (-3547, -2048),
    (-2896, -2896),
    (-2048, -3547),
    (-1060, -3956),
    (0, -4096),
    (1060, -3956),
    (2048, -3547),
    (2896, -2896),
    (3547, -2048),
    (3956, -1060),
];

/// Exact rotations (cos, sin) from Pythagorean triples.
pub const RATIONAL_ROTATIONS: [(i64, i64, i64); 6] = [
    (3, 4, 5),
    (5, 12, 13),
    (8, 15, 17),
    (20, 21, 29),
    (7, 24, 25),
    (255, 32, 257),
];

fn polygon_circle(center: (Rat, Rat), radius: &Rat, phase: Option<(i64, i64, i64)>) -> Polyline {
    let vertices = DIRS_24
        .iter()
        .map(|&(nx, ny)| {
            let mut dx = ratio(nx, 4096);
            let mut dy = ratio(ny, 4096);
            if let Some((c, s, h)) = phase {
                // Rotate the vertex phase around the center; the traced
                // circle is unchanged up to the polygonal approximation.
                let (rc, rs) = (ratio(c, h), ratio(s, h));
                let (ox, oy) = (dx.clone(), dy.clone());
                dx = &rc * &ox - &rs * &oy;
                dy = &rs * &ox + &rc * &oy;
            }
            Point2::new(&center.0 + radius * dx, &center.1 + radius * dy)
        })
        .collect();
    Polyline::new(vertices).expect("polygonal circle is a valid polyline")
}

/// Three anticlockwise polygonal circles in Venn position: every pair
/// crosses exactly twice and the triple-overlap region is nonempty. The
/// vertex phases of the second and third circles are rotated by exact
/// rational rotations to avoid symmetric coincidences.
pub fn venn_doodle() -> Doodle {
    let radius = ratio(14, 5);
    let c1 = polygon_circle((rat(0), rat(2)), &radius, None);
    let c2 = polygon_circle((ratio(-7, 4), rat(-1)), &radius, Some((255, 32, 257)));
    let c3 = polygon_circle((ratio(7, 4), rat(-1)), &radius, Some((1023, 64, 1025)));
    Doodle::new(vec![c1, c2, c3]).expect("venn circles are in general position")
}

/// tan(θ/2) snapped to a rational with the given denominator.
fn snapped_tan_half(theta: f64, denom: i64) -> Rat {
    let t = (theta / 2.0).tan();
    ratio((t * denom as f64).round() as i64, denom)
}

/// Rational point of the unit circle at parameter t.
fn dir_at(t: &Rat) -> (Rat, Rat) {
    let t2 = t * t;
    let den = &t2 + rat(1);
    ((rat(1) - &t2) / &den, (t + t) / den)
}

/// Star-shaped polygon around `center`: strictly increasing vertex angles
/// with independently random radii. Always simple.
fn star_polygon(rng: &mut ChaCha8Rng, center: (i64, i64), params: &GenParams) -> Option<Polyline> {
    let m = rng.gen_range(params.min_vertices..=params.max_vertices);
    let phase: f64 = rng.gen_range(0.05..0.95);
    let r_lo = params.grid / 4;
    let r_hi = params.grid / 2 + params.grid / 4;
    let mut ts: Vec<Rat> = Vec::with_capacity(m);
    for v in 0..m {
        let theta = -std::f64::consts::PI
            + 2.0 * std::f64::consts::PI * (v as f64 + phase) / (m as f64);
        ts.push(snapped_tan_half(theta, 32));
    }
    for w in ts.windows(2) {
        if w[0] >= w[1] {
            return None; // snapping collapsed two angles; redraw
        }
    }
    let mut vertices = Vec::with_capacity(m);
    for t in &ts {
        let r = rat(rng.gen_range(r_lo..=r_hi));
        let (dx, dy) = dir_at(t);
        vertices.push(Point2::new(
            rat(center.0) + &r * dx,
            rat(center.1) + &r * dy,
        ));
    }
    Polyline::new(vertices).ok()
}

fn random_components(rng: &mut ChaCha8Rng, params: &GenParams) -> Option<Vec<Polyline>> {
    let spread = params.grid / 4;
    let mut components = Vec::with_capacity(3);
    for _ in 0..3 {
        let center = (
            rng.gen_range(-spread..=spread),
            rng.gen_range(-spread..=spread),
        );
        components.push(star_polygon(rng, center, params)?);
    }
    Some(components)
}

/// Rejection-sampled general-position 3-component doodle built from
/// randomly overlaid star polygons.
pub fn random_doodle(params: &GenParams) -> Result<Doodle, FixtureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.max_attempts {
        let Some(components) = random_components(&mut rng, params) else {
            continue;
        };
        if let Ok(d) = Doodle::new(components) {
            return Ok(d);
        }
    }
    Err(FixtureError::GenerationExhausted {
        attempts: params.max_attempts,
    })
}

/// Random link diagram: a random doodle with every crossing's over branch
/// drawn by a seeded coin flip.
pub fn random_link(params: &GenParams) -> Result<LinkDiagram, FixtureError> {
    let d = random_doodle(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x6f76_6572);
    let link = LinkDiagram::new(d.into_components(), |_, _, _| {
        if rng.gen_bool(0.5) {
            Branch::A
        } else {
            Branch::B
        }
    })?;
    Ok(link)
}

/// Closed polyline through random grid points, kept only when all its
/// self-incidences are transversal double points. Unlike the star
/// components this is usually immersed (self-crossing).
pub fn random_immersed_curve(params: &GenParams) -> Result<Polyline, FixtureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x6375_7276);
    for _ in 0..params.max_attempts {
        let m = rng.gen_range(6..=9);
        let pts: Vec<(i64, i64)> = (0..m)
            .map(|_| {
                (
                    rng.gen_range(-params.grid..=params.grid),
                    rng.gen_range(-params.grid..=params.grid),
                )
            })
            .collect();
        let Ok(curve) = Polyline::from_ints(&pts) else {
            continue;
        };
        if geometry::validate_general_position(std::slice::from_ref(&curve)).is_valid() {
            return Ok(curve);
        }
    }
    Err(FixtureError::GenerationExhausted {
        attempts: params.max_attempts,
    })
}

/// Doodle with one immersed component overlaid on two star polygons;
/// exercises smoothing inside the μ pipeline.
pub fn random_doodle_with_immersed(params: &GenParams) -> Result<Doodle, FixtureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x696d_6d65);
    for round in 0..params.max_attempts {
        let immersed = random_immersed_curve(&GenParams {
            seed: params.seed.wrapping_add(round as u64),
            ..params.clone()
        })?;
        let Some(mut components) = random_components(&mut rng, params) else {
            continue;
        };
        let slot = rng.gen_range(0..3);
        components[slot] = immersed;
        if let Ok(d) = Doodle::new(components) {
            return Ok(d);
        }
    }
    Err(FixtureError::GenerationExhausted {
        attempts: params.max_attempts,
    })
}

/// Which exact transformations [`perturb_isotopy`] applies.
#[derive(Debug, Clone)]
pub struct PerturbOptions {
    pub seed: u64,
    pub subdivide: bool,
    pub rotate: bool,
    pub translate: bool,
    pub scale: bool,
}

impl PerturbOptions {
    pub fn identity(seed: u64) -> PerturbOptions {
        PerturbOptions {
            seed,
            subdivide: false,
            rotate: false,
            translate: false,
            scale: false,
        }
    }

    pub fn full(seed: u64) -> PerturbOptions {
        PerturbOptions {
            seed,
            subdivide: true,
            rotate: true,
            translate: true,
            scale: true,
        }
    }
}

/// Applies exact crossing-preserving deformations: random edge
/// subdivision, a rational rotation, positive rational scaling, and a
/// translation. Affine maps preserve the incidence structure exactly;
/// subdivision proposals whose new vertices land on another strand are
/// redrawn.
pub fn perturb_isotopy(d: &Doodle, opts: &PerturbOptions) -> Result<Doodle, FixtureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut components: Vec<Polyline> = d.components().to_vec();

    if opts.subdivide {
        let mut placed = false;
        for _ in 0..24 {
            let proposal: Vec<Polyline> = components
                .iter()
                .map(|c| {
                    let cuts: Vec<Vec<Rat>> = (0..c.len())
                        .map(|_| {
                            if rng.gen_bool(1.0 / 3.0) {
                                vec![ratio(rng.gen_range(1..8), 8)]
                            } else {
                                Vec::new()
                            }
                        })
                        .collect();
                    c.subdivided(&cuts)
                })
                .collect();
            if geometry::validate_general_position(&proposal).is_valid() {
                components = proposal;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(FixtureError::GenerationExhausted { attempts: 24 });
        }
    }

    if opts.rotate {
        let (a, b, h) = RATIONAL_ROTATIONS[rng.gen_range(0..RATIONAL_ROTATIONS.len())];
        let s_sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let (c, s) = (ratio(a, h), ratio(s_sign * b, h));
        components = components
            .iter()
            .map(|p| p.rotated(&c, &s).expect("table rotations are exact"))
            .collect();
    }

    if opts.scale {
        let factors = [
            ratio(1, 2),
            ratio(2, 3),
            ratio(3, 4),
            ratio(5, 4),
            ratio(3, 2),
            rat(2),
            rat(3),
        ];
        let f = &factors[rng.gen_range(0..factors.len())];
        components = components
            .iter()
            .map(|p| p.scaled(f).expect("factors are positive"))
            .collect();
    }

    if opts.translate {
        let dx = rat(rng.gen_range(-10..=10));
        let dy = rat(rng.gen_range(-10..=10));
        components = components.iter().map(|p| p.translated(&dx, &dy)).collect();
    }

    Ok(Doodle::new(components)?)
}

/// Two handcrafted 3-component doodles identical outside a disk around the
/// origin, differing by one slide of a C₁ strand across the C₂∩C₃ crossing
/// at the origin (the move excluded from the doodle calculus). The slide
/// changes μ by exactly ±1 and preserves all pairwise crossing counts.
pub fn forbidden_move_fixture() -> (Doodle, Doodle) {
    let c2 = Polyline::from_ints(&[(-20, -12), (20, -12), (20, 0), (-20, 0)]).unwrap();
    let c3 = Polyline::from_ints(&[(0, -20), (12, -20), (12, 20), (0, 20)]).unwrap();
    let c1_above =
        Polyline::from_ints(&[(-8, -4), (-1, 3), (8, 4), (8, 40), (-40, 40), (-40, -4)]).unwrap();
    let c1_below =
        Polyline::from_ints(&[(-8, -4), (1, -3), (8, 4), (8, 40), (-40, 40), (-40, -4)]).unwrap();
    let d1 = Doodle::new(vec![c1_above, c2.clone(), c3.clone()])
        .expect("fixture is in general position");
    let d2 =
        Doodle::new(vec![c1_below, c2, c3]).expect("fixture is in general position");
    (d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doodle::{mu_invariant, Perm3};

    #[test]
    fn venn_is_valid_with_pairwise_double_crossings() {
        let d = venn_doodle();
        for a in 0..3 {
            assert!(geometry::self_intersections(d.component(a)).unwrap().is_empty());
            for b in (a + 1)..3 {
                let hits =
                    geometry::curve_intersections(d.component(a), d.component(b)).unwrap();
                assert_eq!(hits.len(), 2, "components {a} and {b}");
            }
        }
    }

    #[test]
    fn venn_mu_is_plus_one() {
        // Hand count: exactly one C₂∩C₃ crossing lies inside C₁ and its
        // sign there is +1; C₁ is anticlockwise.
        let d = venn_doodle();
        assert_eq!(mu_invariant(&d, Perm3::identity()).unwrap(), 1);
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let p = GenParams::seeded(42);
        assert_eq!(random_doodle(&p).unwrap(), random_doodle(&p).unwrap());
        assert_eq!(random_link(&p).unwrap(), random_link(&p).unwrap());
        assert_eq!(
            random_immersed_curve(&p).unwrap(),
            random_immersed_curve(&p).unwrap()
        );
        let q = GenParams::seeded(43);
        assert_ne!(random_doodle(&p).unwrap(), random_doodle(&q).unwrap());
    }

    #[test]
    fn generated_instances_are_valid() {
        for seed in 0..12 {
            let p = GenParams::seeded(seed);
            let d = random_doodle(&p).unwrap();
            assert!(geometry::validate_general_position(d.components()).is_valid());
            let l = random_link(&p).unwrap();
            assert!(geometry::validate_general_position(l.components()).is_valid());
        }
    }

    #[test]
    fn crossing_counts_vary_with_vertex_budget() {
        use std::collections::HashSet;
        let counts: HashSet<usize> = (0..8)
            .map(|seed| {
                let l = random_link(&GenParams::seeded(seed)).unwrap();
                l.crossings().len()
            })
            .collect();
        assert!(counts.len() > 1, "crossing counts should vary: {counts:?}");
    }

    #[test]
    fn perturb_identity_returns_equal_doodle() {
        let d = venn_doodle();
        let p = perturb_isotopy(&d, &PerturbOptions::identity(1)).unwrap();
        assert_eq!(p, d);
    }

    #[test]
    fn perturb_preserves_mu_and_subdivision_preserves_crossings() {
        let d = venn_doodle();
        let mu = mu_invariant(&d, Perm3::identity()).unwrap();
        for seed in 0..10 {
            let p = perturb_isotopy(&d, &PerturbOptions::full(seed)).unwrap();
            assert_eq!(mu_invariant(&p, Perm3::identity()).unwrap(), mu);
        }
        // Subdivision only: vertex count grows, crossings identical.
        let only_sub = PerturbOptions {
            subdivide: true,
            ..PerturbOptions::identity(5)
        };
        let p = perturb_isotopy(&d, &only_sub).unwrap();
        let total_before: usize = d.components().iter().map(Polyline::len).sum();
        let total_after: usize = p.components().iter().map(Polyline::len).sum();
        assert!(total_after > total_before);
        for a in 0..3 {
            for b in (a + 1)..3 {
                let before =
                    geometry::curve_intersections(d.component(a), d.component(b)).unwrap();
                let after =
                    geometry::curve_intersections(p.component(a), p.component(b)).unwrap();
                assert_eq!(before.len(), after.len());
                for (x, y) in before.iter().zip(after.iter()) {
                    assert_eq!(x.position, y.position);
                    assert_eq!(x.epsilon, y.epsilon);
                }
            }
        }
    }

    #[test]
    fn forbidden_move_changes_mu_by_one() {
        let (d1, d2) = forbidden_move_fixture();
        let m1 = mu_invariant(&d1, Perm3::identity()).unwrap();
        let m2 = mu_invariant(&d2, Perm3::identity()).unwrap();
        assert_eq!((m1 - m2).abs(), 1);
        // Crossing counts agree pairwise.
        for a in 0..3 {
            for b in (a + 1)..3 {
                let h1 = geometry::curve_intersections(d1.component(a), d1.component(b)).unwrap();
                let h2 = geometry::curve_intersections(d2.component(a), d2.component(b)).unwrap();
                assert_eq!(h1.len(), h2.len());
            }
        }
    }

    #[test]
    fn immersed_doodle_generator_produces_self_crossings() {
        let mut found = false;
        for seed in 0..6 {
            let d = random_doodle_with_immersed(&GenParams::seeded(seed)).unwrap();
            let selfs: usize = d
                .components()
                .iter()
                .map(|c| geometry::self_intersections(c).unwrap().len())
                .sum();
            if selfs > 0 {
                found = true;
            }
        }
        assert!(found, "expected at least one immersed component across seeds");
    }
}
