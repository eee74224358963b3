//! Plain-text views of the JSON reports.

use std::fmt::Write as _;

use lierigid::cohomology::H1Piece;
use lierigid::grading::GradedDims;
use lierigid::linalg::format_rational;
use lierigid::repthy::IrrComponent;
use lierigid::rigidity::{OracleStatus, RigidityVerdict};
use lierigid::tableau::{InvolutivityReport, StabilizerPair};

/// `{0:1, -1:4, -2:1}`, descending degrees for modules.
pub fn dims(d: &GradedDims, ascending: bool) -> String {
    let mut items: Vec<String> = d.dims.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    if !ascending {
        items.reverse();
    }
    format!("{{{}}}", items.join(", "))
}

pub fn gperp(components: &[(IrrComponent, String)]) -> String {
    let mut out = String::from("highest weight       mult   dim\n");
    for (c, d) in components {
        let _ = writeln!(out, "{:<20} {:>4}   {}", c.highest_weight.to_string(), c.multiplicity, d);
    }
    out
}

pub fn pieces(ps: &[H1Piece], checked: bool) -> String {
    if ps.is_empty() {
        return "H¹ = 0\n".to_string();
    }
    let mut out = String::from("degree  levi highest weight   dim  node\n");
    for p in ps {
        let _ = writeln!(
            out,
            "{:>6}  {:<20} {:>4}  {}",
            format_rational(&p.degree),
            p.levi_highest_weight.to_string(),
            p.dimension,
            p.source_reflection
        );
    }
    if checked {
        out.push_str("direct computation agrees\n");
    }
    out
}

pub fn verdict(v: &RigidityVerdict) -> String {
    let mut out = String::new();
    if let Some(name) = &v.scenario.name {
        let _ = writeln!(out, "scenario: {name}");
    }
    let algebra: Vec<String> = v.scenario.algebra.iter().map(|f| f.to_string()).collect();
    let _ = writeln!(
        out,
        "algebra {}  weight {}  p = {}  threshold d >= {}",
        algebra.join("×"),
        v.scenario.highest_weight,
        v.scenario.p,
        v.threshold
    );
    let _ = writeln!(out, "g grading: {}", dims(&v.gradings.algebra, true));
    let _ = writeln!(out, "U grading: {}", dims(&v.gradings.module.shifted, false));
    out.push_str("g⊥ components:\n");
    for c in &v.components {
        let degs: Vec<String> = c.pieces.iter().map(|p| format!("{}×{}", format_rational(&p.degree), p.dimension)).collect();
        let _ = writeln!(
            out,
            "  {:<16} x{} dim {:>5}  H¹ pieces [{}]",
            c.component.highest_weight.to_string(),
            c.component.multiplicity,
            c.dimension,
            degs.join(", ")
        );
    }
    let by: Vec<String> = v.h1_by_degree.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    let _ = writeln!(out, "H¹ by degree: {{{}}}", by.join(", "));
    if let Some(o) = &v.oracle {
        let agreed = o.checks.iter().filter(|c| c.status == OracleStatus::Agreed).count();
        let _ = writeln!(out, "oracle: {agreed}/{} components checked; {}", o.checks.len(), o.summary);
    }
    if let Some(note) = &v.fubini_note {
        let _ = writeln!(out, "note: {note}");
    }
    for p in &v.offending_pieces {
        let _ = writeln!(out, "offending: degree {} dim {} weight {}", format_rational(&p.degree), p.dimension, p.levi_highest_weight);
    }
    let _ = writeln!(out, "verdict: {}", serde_json::to_value(v.verdict).expect("enum").as_str().unwrap_or("?"));
    out
}

pub fn involutivity(r: &InvolutivityReport) -> String {
    let chars: Vec<String> = r.characters.iter().map(|c| c.to_string()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "dim A: {}", r.dim_a);
    let _ = writeln!(out, "dim A_j: ({})", chars.join(", "));
    let _ = writeln!(out, "dim A(1): {}  bound: {}  involutive: {}", r.dim_prolongation, r.bound, r.involutive);
    match r.character_of_generality {
        Some(k) => {
            let _ = writeln!(out, "character of generality: {k}");
        }
        None => out.push_str("character of generality: none\n"),
    }
    out
}

pub fn stabilizer(s: &StabilizerPair) -> String {
    format!(
        "block space: {}  dim r: {}  dim r⊥: {}{}\n",
        s.block_dim,
        s.dim_r,
        s.tableau_r_perp.dim(),
        if s.r_perp_nondegenerate { "" } else { "  (trace form degenerate on r⊥)" }
    )
}
