//! Exact-arithmetic invariants of planar curve diagrams.
//!
//! The library computes three families of quantities for closed polylines in
//! the rational plane:
//!
//! * the doodle μ-invariant of an ordered 3-component doodle, via oriented
//!   smoothing and exact winding-number region tests ([`doodle`]);
//! * generalized chord diagrams attached to the over-crossings of each link
//!   component, together with their signed pairing, evaluated both
//!   combinatorially and by exact geometric realization ([`chord`]);
//! * Milnor's triple linking number μ̄(123) of a 3-component link diagram,
//!   through a degree-2 truncated Magnus expansion of Wirtinger longitudes
//!   ([`magnus`]).
//!
//! [`congruence`] assembles the identity tying these together — μ̄(123) ≡
//! −μ(C₁,C₂,C₃) − Σ pairings (mod Δ, the gcd of pairwise linking numbers) —
//! and [`fixtures`] provides seeded generators and handcrafted diagrams used
//! by the verification harness.
//!
//! All predicates run on arbitrary-precision rationals: there are no
//! tolerances, and inputs that are not in general position are rejected
//! rather than perturbed.

#![forbid(unsafe_code)]

pub mod chord;
pub mod congruence;
pub mod doodle;
pub mod fixtures;
pub mod geometry;
pub mod link;
pub mod magnus;
