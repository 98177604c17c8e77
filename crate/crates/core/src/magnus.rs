//! Degree-2 truncated Magnus expansion oracle for Milnor's triple linking
//! number, plus the signed word combinatorics (e_rs, m from words).
//!
//! Components are split into Wirtinger arcs at their under-crossings. Each
//! arc of component c carries a truncated series with linear part x_c;
//! walking along the component through an under-crossing beneath an
//! over-arc of component b with crossing sign s, the quadratic part changes
//! by CONJUGATION_SIGN·s·[x_b, x_c]. The longitude of component k is the
//! ordered product of (over-arc)^sign over the under-crossings of k;
//! μ̄(ijk) is read off its x_i x_j coefficient and is well defined modulo
//! Δ = gcd of the pairwise linking numbers.

use std::fmt;

use thiserror::Error;

use crate::geometry::{cmp_pos, CurvePos, Sign};
use crate::link::{self, LinkDiagram, LinkError};

/// Sign of the Wirtinger conjugation relative to the crossing sign: the
/// outgoing under-arc satisfies a' = b^{-γ·c} a b^{γ·c} with c this
/// constant. With longitude letters fixed as (over-arc)^{+γ} (required so
/// that degree-1 coefficients equal linking numbers), only c = -1 is
/// self-consistent: the opposite choice assigns a nonzero μ̄ to split
/// unlinks whose longitudes mix letters of both other components.
pub const CONJUGATION_SIGN: i64 = -1;

/// Orientation constant of the μ̄ read-out, the designated adjustment
/// point had the verification suite revealed a uniform mirror flip. With
/// CONJUGATION_SIGN = -1 the suite (μ̄(L(D)) = −μ exactly, and the main
/// congruence corpus) holds with +1.
pub const ORACLE_SIGN: i64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MagnusError {
    #[error("series has no inverse: constant term is {0}, expected 1")]
    NotInvertible(i64),
    #[error("word {word} may not use symbol {symbol}")]
    SymbolDomain { word: usize, symbol: u8 },
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Element of the degree-≤2 truncation of ℤ⟨x₁,x₂,x₃⟩: a constant, three
/// linear coefficients, and nine coefficients of the ordered products
/// x_a x_b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub c0: i64,
    pub lin: [i64; 3],
    pub quad: [[i64; 3]; 3],
}

impl TruncatedSeries {
    pub fn one() -> TruncatedSeries {
        TruncatedSeries {
            c0: 1,
            lin: [0; 3],
            quad: [[0; 3]; 3],
        }
    }

    /// 1 + x_c.
    pub fn generator(c: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::one();
        s.lin[c] = 1;
        s
    }

    pub fn coeff_lin(&self, i: usize) -> i64 {
        self.lin[i]
    }

    pub fn coeff_quad(&self, i: usize, j: usize) -> i64 {
        self.quad[i][j]
    }

    /// Ring product, discarding degree ≥ 3.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let mut out = TruncatedSeries {
            c0: self.c0 * other.c0,
            lin: [0; 3],
            quad: [[0; 3]; 3],
        };
        for a in 0..3 {
            out.lin[a] = self.c0 * other.lin[a] + self.lin[a] * other.c0;
        }
        for a in 0..3 {
            for b in 0..3 {
                out.quad[a][b] = self.c0 * other.quad[a][b]
                    + self.quad[a][b] * other.c0
                    + self.lin[a] * other.lin[b];
            }
        }
        out
    }

    /// Inverse in the truncation; requires constant term 1.
    pub fn inv(&self) -> Result<TruncatedSeries, MagnusError> {
        if self.c0 != 1 {
            return Err(MagnusError::NotInvertible(self.c0));
        }
        // (1 + A)⁻¹ = 1 − A + A² with A the positive-degree part.
        let mut out = TruncatedSeries::one();
        for a in 0..3 {
            out.lin[a] = -self.lin[a];
        }
        for a in 0..3 {
            for b in 0..3 {
                out.quad[a][b] = -self.quad[a][b] + self.lin[a] * self.lin[b];
            }
        }
        Ok(out)
    }

    /// `self` or its inverse, by sign.
    pub fn pow(&self, s: Sign) -> Result<TruncatedSeries, MagnusError> {
        match s {
            Sign::Plus => Ok(self.clone()),
            Sign::Minus => self.inv(),
        }
    }

    /// Adds s·[x_b, x_c] = s(x_b x_c − x_c x_b) to the quadratic part.
    pub fn add_commutator(&mut self, b: usize, c: usize, s: i64) {
        self.quad[b][c] += s;
        self.quad[c][b] -= s;
    }
}

/// One letter of a signed word: a symbol with exponent ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub symbol: u8,
    pub sign: Sign,
}

/// Word in the letters s^{±1}.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignedWord(pub Vec<Letter>);

impl SignedWord {
    pub fn from_pairs(pairs: &[(u8, i64)]) -> SignedWord {
        SignedWord(
            pairs
                .iter()
                .map(|&(symbol, s)| Letter {
                    symbol,
                    sign: if s >= 0 { Sign::Plus } else { Sign::Minus },
                })
                .collect(),
        )
    }

    pub fn concat(&self, other: &SignedWord) -> SignedWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        SignedWord(letters)
    }

    /// Signed count of occurrences of one symbol.
    pub fn signed_count(&self, symbol: u8) -> i64 {
        self.0
            .iter()
            .filter(|l| l.symbol == symbol)
            .map(|l| l.sign.to_i64())
            .sum()
    }
}

impl fmt::Display for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            let e = if l.sign == Sign::Plus { "+" } else { "-" };
            write!(f, "{}{}", l.symbol, e)?;
        }
        Ok(())
    }
}

/// Signed occurrence e_rs(w): the sum over index pairs i < j with
/// symbols (r, s) of the product of their exponents. Single pass with a
/// running signed count of r.
pub fn signed_occurrence(w: &SignedWord, r: u8, s: u8) -> i64 {
    let mut run_r = 0i64;
    let mut total = 0i64;
    for l in &w.0 {
        if l.symbol == s {
            total += l.sign.to_i64() * run_r;
        }
        if l.symbol == r {
            run_r += l.sign.to_i64();
        }
    }
    total
}

/// m₁₂₃ from the three surface-intersection words:
/// e₂₃(w₁) + e₃₁(w₂) + e₁₂(w₃). Word k may only use the symbols
/// {1,2,3} \ {k}.
pub fn m_from_words(
    w1: &SignedWord,
    w2: &SignedWord,
    w3: &SignedWord,
) -> Result<i64, MagnusError> {
    for (idx, (w, forbidden)) in [(w1, 1u8), (w2, 2u8), (w3, 3u8)].iter().enumerate() {
        for l in &w.0 {
            if l.symbol == *forbidden || !(1..=3).contains(&l.symbol) {
                return Err(MagnusError::SymbolDomain {
                    word: idx + 1,
                    symbol: l.symbol,
                });
            }
        }
    }
    Ok(signed_occurrence(w1, 2, 3) + signed_occurrence(w2, 3, 1) + signed_occurrence(w3, 1, 2))
}

/// Wirtinger arc: a maximal strand of one component between consecutive
/// under-crossings, with its truncated expansion.
#[derive(Debug, Clone)]
pub struct Arc {
    pub component: usize,
    /// Start and end under-passage positions; `None` when the component
    /// never passes under anything (one arc spanning the whole circle).
    pub span: Option<(CurvePos, CurvePos)>,
    pub expansion: TruncatedSeries,
}

/// One under-passage of a component, in traversal order.
#[derive(Debug, Clone)]
struct UnderPassage {
    position: CurvePos,
    /// Component of the over branch.
    over_component: usize,
    /// Position of the over branch along its component.
    over_position: CurvePos,
    gamma: Sign,
}

/// Arc decomposition of a diagram with arc-lookup by position.
#[derive(Debug, Clone)]
pub struct ArcTable {
    arcs: Vec<Arc>,
    /// Arc indices per component, in traversal order (arc m starts at
    /// under-passage m).
    per_component: [Vec<usize>; 3],
    /// Under-passage positions per component, sorted.
    boundaries: [Vec<CurvePos>; 3],
}

impl ArcTable {
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn component_arcs(&self, c: usize) -> &[usize] {
        &self.per_component[c]
    }

    /// Arc of component `c` covering traversal position `pos`. The
    /// position must not be an under-passage (crossings are distinct
    /// points in a valid diagram).
    pub fn arc_at(&self, c: usize, pos: &CurvePos) -> usize {
        let bounds = &self.boundaries[c];
        if bounds.is_empty() {
            return self.per_component[c][0];
        }
        // Number of passages at or before `pos`; arc m covers the interval
        // starting at passage m.
        let k = bounds.partition_point(|b| cmp_pos(b, pos).is_le());
        let m = (k + bounds.len() - 1) % bounds.len();
        self.per_component[c][m]
    }
}

fn under_passages(link: &LinkDiagram, c: usize) -> Vec<UnderPassage> {
    let mut passages: Vec<UnderPassage> = link
        .crossings()
        .iter()
        .filter(|x| x.under_component() == c)
        .map(|x| UnderPassage {
            position: x.under_position().clone(),
            over_component: x.over_component(),
            over_position: x.over_position().clone(),
            gamma: x.gamma,
        })
        .collect();
    passages.sort_by(|a, b| cmp_pos(&a.position, &b.position));
    passages
}

/// Splits every component at its under-crossings and computes each arc's
/// expansion by walking from a base arc. `base_offsets[c]` rotates which
/// arc of component c is the base (expansion exactly 1 + x_c); the μ̄
/// read-out is independent of this choice modulo Δ.
pub fn arc_expansions_with(link: &LinkDiagram, base_offsets: [usize; 3]) -> ArcTable {
    let mut arcs = Vec::new();
    let mut per_component: [Vec<usize>; 3] = Default::default();
    let mut boundaries: [Vec<CurvePos>; 3] = Default::default();

    for c in 0..3 {
        let passages = under_passages(link, c);
        let n = passages.len();
        if n == 0 {
            per_component[c].push(arcs.len());
            arcs.push(Arc {
                component: c,
                span: None,
                expansion: TruncatedSeries::generator(c),
            });
            continue;
        }
        boundaries[c] = passages.iter().map(|p| p.position.clone()).collect();
        let first = arcs.len();
        for m in 0..n {
            per_component[c].push(first + m);
            arcs.push(Arc {
                component: c,
                span: Some((
                    passages[m].position.clone(),
                    passages[(m + 1) % n].position.clone(),
                )),
                expansion: TruncatedSeries::generator(c),
            });
        }
        // Walk forward from the base arc; entering arc m means passing
        // under at passage m.
        let base = base_offsets[c] % n;
        let mut current = TruncatedSeries::generator(c);
        for step in 1..n {
            let m = (base + step) % n;
            let p = &passages[m];
            current.add_commutator(p.over_component, c, CONJUGATION_SIGN * p.gamma.to_i64());
            arcs[first + m].expansion = current.clone();
        }
    }

    ArcTable {
        arcs,
        per_component,
        boundaries,
    }
}

/// Arc decomposition with the default base arcs.
pub fn arc_expansions(link: &LinkDiagram) -> Vec<Arc> {
    arc_expansions_with(link, [0; 3]).arcs.clone()
}

/// Cyclic triple (i, j, k) of the three component indices (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl CyclicTriple {
    pub fn new(i: usize, j: usize, k: usize) -> Option<CyclicTriple> {
        if j == link::next_component(i) && k == link::next_component(j) {
            Some(CyclicTriple { i, j, k })
        } else {
            None
        }
    }

    /// The triple (1,2,3) in 0-based form.
    pub fn standard() -> CyclicTriple {
        CyclicTriple { i: 0, j: 1, k: 2 }
    }

    pub fn all() -> [CyclicTriple; 3] {
        [
            CyclicTriple { i: 0, j: 1, k: 2 },
            CyclicTriple { i: 1, j: 2, k: 0 },
            CyclicTriple { i: 2, j: 0, k: 1 },
        ]
    }
}

/// Choices that μ̄ must not depend on (modulo Δ): per-component base arcs
/// and the starting under-crossing of the longitude word.
#[derive(Debug, Clone, Copy, Default)]
pub struct MagnusOptions {
    pub base_arcs: [usize; 3],
    pub longitude_start: usize,
}

/// Integer residue: a value modulo `modulus`, with modulus 0 meaning
/// equality in ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue {
    pub value: i64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Residue {
        if modulus == 0 {
            Residue { value, modulus }
        } else {
            Residue {
                value: value.rem_euclid(modulus as i64),
                modulus,
            }
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} (mod {})", self.value, self.modulus)
        }
    }
}

/// Expansion of the longitude of component `k`: the ordered product over
/// its under-crossings of (over-arc expansion)^gamma, starting at the
/// `longitude_start`-th under-crossing.
pub fn longitude_expansion(
    link: &LinkDiagram,
    k: usize,
    opts: MagnusOptions,
) -> Result<TruncatedSeries, MagnusError> {
    let table = arc_expansions_with(link, opts.base_arcs);
    let passages = under_passages(link, k);
    let n = passages.len();
    let mut prod = TruncatedSeries::one();
    for step in 0..n {
        let p = &passages[(opts.longitude_start + step) % n];
        let arc = table.arc_at(p.over_component, &p.over_position);
        let factor = table.arcs[arc].expansion.pow(p.gamma)?;
        prod = prod.mul(&factor);
    }
    Ok(prod)
}

/// Milnor's triple linking number μ̄(ijk) via the Magnus expansion of the
/// k-th longitude, as a residue modulo Δ (modulus 0 when every pairwise
/// linking number vanishes, in which case the value is exact).
pub fn mu_bar_oracle_with(
    link: &LinkDiagram,
    order: CyclicTriple,
    opts: MagnusOptions,
) -> Result<Residue, MagnusError> {
    let longitude = longitude_expansion(link, order.k, opts)?;
    let coeff = longitude.coeff_quad(order.i, order.j);
    let modulus = link::delta(link)?;
    Ok(Residue::new(ORACLE_SIGN * coeff, modulus))
}

/// μ̄ with the default base and starting choices.
pub fn mu_bar_oracle(link: &LinkDiagram, order: CyclicTriple) -> Result<Residue, MagnusError> {
    mu_bar_oracle_with(link, order, MagnusOptions::default())
}
