//! Assembles both sides of the main congruence and produces verdict
//! reports.
//!
//! For a 3-component link diagram L with projection doodle D:
//!
//!   μ̄(L)₁₂₃ ≡ −μ(C₁,C₂,C₃) − Σ_{(i,j,k) cyclic} ⟨◯_{j×i}, G_{L_k}⟩
//!                                                   (mod Δ_L(123))
//!
//! The left side comes from the Magnus-expansion oracle, the right side
//! from the doodle invariant and the three chord-diagram pairings. The
//! cyclic triples are enumerated explicitly as (2,3,1), (3,1,2), (1,2,3),
//! so the k-th pairing term is always the chord diagram on skeleton L_k.
//! Reports keep every intermediate quantity so that a failure can be
//! localized (linking-number cross-check, pairing route agreement, and the
//! exact L(D) identity μ̄ = −μ).

use thiserror::Error;

use crate::chord::{self, ChordError};
use crate::doodle::{self, Doodle, DoodleError, Perm3};
use crate::link::{self, LinkDiagram, LinkError};
use crate::magnus::{self, CyclicTriple, MagnusError, MagnusOptions, Residue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CongruenceError {
    #[error(transparent)]
    Doodle(#[from] DoodleError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    Chord(#[from] ChordError),
}

/// Right-hand side of the congruence with its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsParts {
    pub mu: i64,
    /// ⟨◯, G_{L_k}⟩ for k = 1, 2, 3.
    pub pairings: [i64; 3],
    pub rhs: i64,
    pub gaps_used: [usize; 3],
}

/// rhs = −μ(C₁,C₂,C₃) − Σ_k ⟨◯, G_{L_k}⟩, with an optional base-gap
/// choice per skeleton component.
pub fn rhs_theorem(
    link: &LinkDiagram,
    gap_choices: [Option<usize>; 3],
) -> Result<RhsParts, CongruenceError> {
    let d = link::project_to_doodle(link);
    let mu = doodle::mu_invariant(&d, Perm3::identity())?;
    let mut pairings = [0i64; 3];
    let mut gaps_used = [0usize; 3];
    for k in 0..3 {
        let g = chord::build_chord_diagram(link, k, gap_choices[k]);
        gaps_used[k] = g.gap;
        pairings[k] = chord::pairing_combinatorial(&g)?;
    }
    let rhs = -mu - pairings.iter().sum::<i64>();
    Ok(RhsParts {
        mu,
        pairings,
        rhs,
        gaps_used,
    })
}

/// Side checks carried by every report, used to localize a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Degree-1 Magnus coefficients equal the crossing-sign half-sums.
    pub lk_magnus_match: bool,
    /// pairing_combinatorial equals pairing_geometric, per skeleton.
    pub pairing_routes_match: [bool; 3],
}

/// Everything the congruence check computed, plus the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    /// (lk₁₂, lk₂₃, lk₃₁).
    pub lk: [i64; 3],
    pub delta: u64,
    pub mu: i64,
    pub pairings: [i64; 3],
    pub rhs: i64,
    pub rhs_residue: Residue,
    /// μ̄(123) from the Magnus oracle.
    pub lhs: Residue,
    pub verdict: bool,
    pub gap_choices: [usize; 3],
    pub diagnostics: Diagnostics,
}

/// Full congruence check with explicit re-basing choices.
pub fn check_congruence_with(
    link: &LinkDiagram,
    gap_choices: [Option<usize>; 3],
    opts: MagnusOptions,
) -> Result<CongruenceReport, CongruenceError> {
    let lk = link::linking_matrix(link)?;
    let delta = link::delta_from_lk(lk);
    let parts = rhs_theorem(link, gap_choices)?;
    let lhs = magnus::mu_bar_oracle_with(link, CyclicTriple::standard(), opts)?;
    let rhs_residue = Residue::new(parts.rhs, delta);
    let verdict = rhs_residue == lhs;

    let mut lk_magnus_match = true;
    for k in 0..3 {
        let series = magnus::longitude_expansion(link, k, opts)?;
        for i in 0..3 {
            if i != k && series.coeff_lin(i) != link::linking_number(link, i, k)? {
                lk_magnus_match = false;
            }
        }
    }
    let mut pairing_routes_match = [true; 3];
    for k in 0..3 {
        let g = chord::build_chord_diagram(link, k, gap_choices[k]);
        pairing_routes_match[k] =
            chord::pairing_combinatorial(&g)? == chord::pairing_geometric(&g)?;
    }

    Ok(CongruenceReport {
        lk,
        delta,
        mu: parts.mu,
        pairings: parts.pairings,
        rhs: parts.rhs,
        rhs_residue,
        lhs,
        verdict,
        gap_choices: parts.gaps_used,
        diagnostics: Diagnostics {
            lk_magnus_match,
            pairing_routes_match,
        },
    })
}

/// Congruence check with default gap and base choices.
pub fn check_congruence(link: &LinkDiagram) -> Result<CongruenceReport, CongruenceError> {
    check_congruence_with(link, [None; 3], MagnusOptions::default())
}

/// Report of the exact L(D) identity μ̄(L(D))₁₂₃ = −μ(C₁,C₂,C₃).
#[derive(Debug, Clone, PartialEq)]
pub struct LdReport {
    pub delta: u64,
    pub mu: i64,
    pub mu_bar: i64,
    pub pairings: [i64; 3],
    pub pass: bool,
}

/// Builds L(D) from a doodle and verifies Δ = 0, μ̄ = −μ as exact
/// integers, and that all three chord pairings vanish.
pub fn verify_ld_theorem(d: &Doodle) -> Result<LdReport, CongruenceError> {
    let l = link::construct_l_of_d(d)?;
    let delta = link::delta(&l)?;
    let mu = doodle::mu_invariant(d, Perm3::identity())?;
    let lhs = magnus::mu_bar_oracle(&l, CyclicTriple::standard())?;
    let mut pairings = [0i64; 3];
    for k in 0..3 {
        let g = chord::build_chord_diagram(&l, k, None);
        pairings[k] = chord::pairing_combinatorial(&g)?;
    }
    let pass = delta == 0 && lhs.modulus == 0 && lhs.value == -mu && pairings == [0, 0, 0];
    Ok(LdReport {
        delta,
        mu,
        mu_bar: lhs.value,
        pairings,
        pass,
    })
}
