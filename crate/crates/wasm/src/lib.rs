//! Browser bindings: build a season as JSON, draw one round as SVG, and
//! verify a pasted document. The rendering and report logic is plain Rust
//! so the natively compiled tests cover it; the `wasm_bindgen` exports
//! are thin wrappers.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use wasm_bindgen::prelude::*;

use tandem_core::{
    build_schedule, c_max, check_balance, check_bound_lemmas, check_common_orientation,
    common_fixtures, document_from_schedule, schedule_from_document, Division, Error, Mode, Role,
    Schedule, Vertex,
};

fn parse_mode(mode: &str) -> Result<Mode, Error> {
    mode.parse()
}

fn parse_division(division: u32) -> Result<Division, Error> {
    match division {
        1 => Ok(Division::One),
        2 => Ok(Division::Two),
        other => Err(Error::DocumentShape {
            reason: format!("division must be 1 or 2, got {other}"),
        }),
    }
}

/// The full season document as pretty JSON.
pub fn schedule_document_json(n: u32, mode: &str) -> Result<String, Error> {
    let schedule = build_schedule(n, parse_mode(mode)?)?;
    let doc = document_from_schedule(&schedule)?;
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn role_glyph(v: Vertex, n: u32) -> Option<&'static str> {
    match v.role(n).ok()? {
        Role::Rotating(_) => None,
        Role::MinusInf => Some("-\u{221e}"),
        Role::PlusInf => Some("\u{221e}"),
        Role::MinusIInf => Some("-i\u{221e}"),
        Role::PlusIInf => Some("i\u{221e}"),
    }
}

/// One round of one division drawn as a standalone SVG: clubs on a
/// circle, arrows pointing home to away, common fixtures emphasised.
pub fn render_round_svg(n: u32, mode: &str, division: u32, round: u32) -> Result<String, Error> {
    let mode = parse_mode(mode)?;
    let schedule = build_schedule(n, mode)?;
    let div = parse_division(division)?;
    let rounds = schedule.rounds(div);
    let total = rounds.len() as u32;
    if round == 0 || round > total {
        return Err(Error::DocumentShape {
            reason: format!("round must lie in 1..={total}, got {round}"),
        });
    }
    let doc = document_from_schedule(&schedule)?;
    let fixtures = &doc.divisions[division as usize - 1].rounds[round as usize - 1].fixtures;

    const SIZE: f64 = 520.0;
    const CX: f64 = SIZE / 2.0;
    const CY: f64 = SIZE / 2.0 + 10.0;
    const RING: f64 = 195.0;
    const NODE: f64 = 16.0;
    let vc = div.vertex_count(n);
    let position = |label: u32| -> (f64, f64) {
        let angle = TAU * f64::from(label) / f64::from(vc) - FRAC_PI_2;
        (CX + RING * angle.cos(), CY + RING * angle.sin())
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" \
         font-family=\"sans-serif\">\n\
         <defs>\n\
         <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" \
         markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">\
         <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#5a6b7a\"/></marker>\n\
         <marker id=\"arrow-common\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" \
         markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">\
         <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#b03434\"/></marker>\n\
         </defs>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{CX}\" y=\"24\" text-anchor=\"middle\" font-size=\"17\">\
         division {division}, round {round} of {total} (n = {n}, {mode})</text>"
    );

    for f in fixtures {
        let (x1, y1) = position(f.home);
        let (x2, y2) = position(f.away);
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1.0);
        let trim = NODE + 4.0;
        let (sx, sy) = (x1 + dx / len * trim, y1 + dy / len * trim);
        let (ex, ey) = (x2 - dx / len * trim, y2 - dy / len * trim);
        let (class, stroke, width, marker) = if f.common {
            ("common", "#b03434", 3.5, "arrow-common")
        } else {
            ("plain", "#5a6b7a", 2.0, "arrow")
        };
        let _ = writeln!(
            svg,
            "<line class=\"{class}\" x1=\"{sx:.1}\" y1=\"{sy:.1}\" x2=\"{ex:.1}\" y2=\"{ey:.1}\" \
             stroke=\"{stroke}\" stroke-width=\"{width}\" marker-end=\"url(#{marker})\"/>"
        );
    }

    for label in 0..vc {
        let (x, y) = position(label);
        let _ = writeln!(
            svg,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{NODE}\" fill=\"#f4f1ea\" \
             stroke=\"#3a3a3a\" stroke-width=\"1.5\"/>\n\
             <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"14\">{label}</text>",
            y + 5.0
        );
        if let Some(glyph) = role_glyph(Vertex::new(label), n) {
            let gx = CX + (RING + NODE + 16.0) * (x - CX) / RING;
            let gy = CY + (RING + NODE + 16.0) * (y - CY) / RING;
            let _ = writeln!(
                svg,
                "<text x=\"{gx:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
                 font-size=\"13\" fill=\"#7a5a24\">{glyph}</text>",
                gy + 4.0
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn check_report(schedule: &Schedule) -> serde_json::Value {
    let structure: Vec<String> = schedule.validate().iter().map(|v| v.to_string()).collect();
    let orientation: Vec<String> = check_common_orientation(schedule)
        .iter()
        .map(|v| v.to_string())
        .collect();
    let n = schedule.n;
    let div2 = check_balance(&schedule.div2_rounds, 2 * n + 2);
    let div1 = check_balance(&schedule.div1_rounds, 2 * n);
    let report = common_fixtures(
        &schedule.draw(Division::One),
        &schedule.draw(Division::Two),
        schedule.mode,
    );
    let (total, q, per_round, lemmas) = match &report {
        Ok(r) => (
            Some(r.total),
            Some(r.q),
            r.per_round_counts.clone(),
            check_bound_lemmas(r)
                .iter()
                .map(|v| v.to_string())
                .collect(),
        ),
        Err(_) => (None, None, Vec::new(), Vec::<String>::new()),
    };
    serde_json::json!({
        "n": n,
        "mode": schedule.mode.to_string(),
        "valid": structure.is_empty(),
        "total_common": total,
        "optimum": c_max(n, schedule.mode).ok(),
        "q": q,
        "per_round_counts": per_round,
        "balanced": div1.balanced && div2.balanced,
        "structure_violations": structure,
        "lemma_violations": lemmas,
        "orientation_violations": orientation,
    })
}

/// Parse a schedule document and report every check as JSON.
pub fn verification_report(document_json: &str) -> Result<String, Error> {
    let doc: tandem_core::ScheduleDocument = serde_json::from_str(document_json)?;
    let schedule = schedule_from_document(&doc)?;
    Ok(serde_json::to_string_pretty(&check_report(&schedule))?)
}

fn js_err(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Build a season and return the schedule document as JSON text.
#[wasm_bindgen]
pub fn schedule_json(n: u32, mode: &str) -> Result<String, JsError> {
    schedule_document_json(n, mode).map_err(js_err)
}

/// Render one round as an SVG string.
#[wasm_bindgen]
pub fn round_svg(n: u32, mode: &str, division: u32, round: u32) -> Result<String, JsError> {
    render_round_svg(n, mode, division, round).map_err(js_err)
}

/// Check a pasted schedule document and return a JSON report.
#[wasm_bindgen]
pub fn verify_json(document_json: &str) -> Result<String, JsError> {
    verification_report(document_json).map_err(js_err)
}
