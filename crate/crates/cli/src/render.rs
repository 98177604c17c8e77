//! Text and machine-readable views of the library's reports.

use serde_json::{json, Value};

use trilink::chord::{BaseTag, ChordRealization, GeneralizedChordDiagram, SkeletonPoint};
use trilink::congruence::{CongruenceReport, LdReport};
use trilink::geometry::Sign;
use trilink::magnus::Residue;

use crate::format::rat_to_string;

pub fn residue_json(r: &Residue) -> Value {
    json!({ "value": r.value, "modulus": r.modulus })
}

pub fn congruence_text(r: &CongruenceReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "lk matrix        lk12 = {}, lk23 = {}, lk31 = {}\n",
        r.lk[0], r.lk[1], r.lk[2]
    ));
    out.push_str(&format!("delta            {}\n", r.delta));
    out.push_str(&format!("mu(C1,C2,C3)     {}\n", r.mu));
    out.push_str(&format!(
        "pairings         G_L1 = {}, G_L2 = {}, G_L3 = {} (gaps {:?})\n",
        r.pairings[0], r.pairings[1], r.pairings[2], r.gap_choices
    ));
    out.push_str(&format!(
        "rhs              -mu - sum(pairings) = {} -> {}\n",
        r.rhs, r.rhs_residue
    ));
    out.push_str(&format!("mu_bar oracle    {}\n", r.lhs));
    out.push_str(&format!(
        "lk cross-check   {}\n",
        if r.diagnostics.lk_magnus_match {
            "ok (degree-1 coefficients match half-sums)"
        } else {
            "MISMATCH"
        }
    ));
    out.push_str(&format!(
        "pairing routes   {}\n",
        if r.diagnostics.pairing_routes_match.iter().all(|&b| b) {
            "ok (combinatorial = geometric)"
        } else {
            "MISMATCH"
        }
    ));
    out.push_str(&format!(
        "verdict          {}\n",
        if r.verdict { "PASS" } else { "FAIL" }
    ));
    out
}

pub fn congruence_json(r: &CongruenceReport) -> Value {
    json!({
        "lk": r.lk,
        "delta": r.delta,
        "mu": r.mu,
        "pairings": r.pairings,
        "rhs": r.rhs,
        "rhs_residue": residue_json(&r.rhs_residue),
        "mu_bar": residue_json(&r.lhs),
        "gap_choices": r.gap_choices,
        "diagnostics": {
            "lk_magnus_match": r.diagnostics.lk_magnus_match,
            "pairing_routes_match": r.diagnostics.pairing_routes_match,
        },
        "verdict": r.verdict,
    })
}

pub fn ld_text(r: &LdReport) -> String {
    format!(
        "delta            {}\nmu(C1,C2,C3)     {}\nmu_bar(L(D))     {}\npairings         {:?}\nverdict          {}\n",
        r.delta,
        r.mu,
        r.mu_bar,
        r.pairings,
        if r.pass { "PASS" } else { "FAIL" }
    )
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

pub fn chords_text(g: &GeneralizedChordDiagram, pairing: i64) -> String {
    let k = g.skeleton_component;
    let mut out = String::new();
    out.push_str(&format!(
        "skeleton L{} (gap {}), traversal order:\n",
        k + 1,
        g.gap
    ));
    out.push_str("  b_nc  b_c");
    for (m, mark) in g.marks.iter().enumerate() {
        let set = match g.base_of(m) {
            Ok(BaseTag::C) => "c",
            Ok(BaseTag::Nc) => "nc",
            Err(_) => "?",
        };
        let label = mark
            .label
            .map(|key| format!("({},{},{},{})", key.comp_a, key.seg_a, key.comp_b, key.seg_b))
            .unwrap_or_else(|| format!("m{m}"));
        out.push_str(&format!(
            "  {}{}->b_{}",
            label,
            sign_str(mark.gamma),
            set
        ));
    }
    out.push('\n');
    let c_set: Vec<usize> = (0..g.marks.len())
        .filter(|&m| g.base_of(m) == Ok(BaseTag::C))
        .collect();
    let nc_set: Vec<usize> = (0..g.marks.len())
        .filter(|&m| g.base_of(m) == Ok(BaseTag::Nc))
        .collect();
    out.push_str(&format!(
        "T to b_c  (under L{}): marks {:?}\n",
        trilink::link::prev_component(k) + 1,
        c_set
    ));
    out.push_str(&format!(
        "T to b_nc (under L{}): marks {:?}\n",
        trilink::link::next_component(k) + 1,
        nc_set
    ));
    out.push_str(&format!("pairing          {pairing}\n"));
    out
}

pub fn realization_json(r: &ChordRealization) -> Value {
    let points: Vec<Value> = r
        .skeleton_points
        .iter()
        .map(|(sp, p)| {
            let label = match sp {
                SkeletonPoint::BaseNc => "b_nc".to_string(),
                SkeletonPoint::BaseC => "b_c".to_string(),
                SkeletonPoint::Mark(m) => format!("m{m}"),
            };
            json!({ "label": label, "x": rat_to_string(&p.x), "y": rat_to_string(&p.y) })
        })
        .collect();
    let chords: Vec<Value> = r
        .chords
        .iter()
        .map(|c| {
            json!({
                "mark": c.mark,
                "base": match c.base { BaseTag::C => "b_c", BaseTag::Nc => "b_nc" },
                "start": [rat_to_string(&c.start.x), rat_to_string(&c.start.y)],
                "end": [rat_to_string(&c.end.x), rat_to_string(&c.end.y)],
            })
        })
        .collect();
    json!({ "skeleton": points, "chords": chords })
}
