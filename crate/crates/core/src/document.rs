//! Interchange documents: a JSON-serialisable mirror of [`Schedule`]
//! carrying per-fixture `common` flags and a season summary, plus CSV and
//! text renderings.
//!
//! JSON is the canonical format (`format_version` "1") and round-trips
//! losslessly. CSV and text are export-only. The `common` flags are
//! derived data: a division-one game in round `r` is flagged when the
//! division-two game between the same clubs lands on date `r`, and a
//! division-two game in round `r` when the clubs' division-one meeting
//! date is congruent to `r` (mod `2n - 1` in double mode, equal in
//! single). Parsing ignores the flags and recomputes them on demand.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::analysis::{check_balance, common_fixtures, congruent};
use crate::construction::{Mode, OrientedFixture, OrientedRound, Schedule};
use crate::graph::{Division, Draw, Fixture, Vertex};
use crate::Error;

pub const FORMAT_VERSION: &str = "1";

/// A full season with flags and summary, ready for serialisation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDocument {
    pub format_version: String,
    pub n: u32,
    pub mode: Mode,
    pub divisions: Vec<DivisionDocument>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionDocument {
    /// 1 or 2.
    pub division: u32,
    pub rounds: Vec<RoundDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundDocument {
    /// 1-based round number, also the date both divisions play on.
    pub round: u32,
    pub fixtures: Vec<FixtureDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureDocument {
    pub home: u32,
    pub away: u32,
    pub common: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total_common: u32,
    /// Common fixtures per date, indexed by round - 1.
    pub per_round_counts: Vec<u32>,
    /// Division-two round of the game between the two extra clubs.
    pub q: u32,
    /// Every round robin in the season has home-count spread at most 1.
    pub balanced: bool,
}

fn columns(draw: &Draw) -> HashMap<Fixture, u32> {
    let mut out = HashMap::new();
    for (i, factor) in draw.rounds().iter().enumerate() {
        for f in factor.iter() {
            out.entry(f).or_insert(i as u32 + 1);
        }
    }
    out
}

fn flag_rounds<F>(rounds: &[OrientedRound], mut is_common: F) -> Vec<RoundDocument>
where
    F: FnMut(u32, Fixture) -> bool,
{
    rounds
        .iter()
        .enumerate()
        .map(|(i, round)| {
            let r = i as u32 + 1;
            RoundDocument {
                round: r,
                fixtures: round
                    .iter()
                    .map(|of| FixtureDocument {
                        home: of.home.label(),
                        away: of.away.label(),
                        common: of.unoriented().is_some_and(|f| is_common(r, f)),
                    })
                    .collect(),
            }
        })
        .collect()
}

fn season_balanced(schedule: &Schedule) -> bool {
    let n = schedule.n;
    let leg = 2 * n as usize - 1;
    let div1 = &schedule.div1_rounds;
    let legs_ok = match schedule.mode {
        Mode::Double if div1.len() >= leg => {
            check_balance(&div1[..leg], 2 * n).balanced
                && check_balance(&div1[leg..], 2 * n).balanced
        }
        _ => check_balance(div1, 2 * n).balanced,
    };
    legs_ok && check_balance(&schedule.div2_rounds, 2 * n + 2).balanced
}

/// Build the interchange document for a schedule, computing the `common`
/// flags and summary with a fresh analysis pass.
pub fn document_from_schedule(schedule: &Schedule) -> Result<ScheduleDocument, Error> {
    let n = schedule.n;
    let draw1 = schedule.draw(Division::One);
    let draw2 = schedule.draw(Division::Two);
    let report = common_fixtures(&draw1, &draw2, schedule.mode)?;
    let col1 = columns(&draw1);
    let col2 = columns(&draw2);

    let div1 = flag_rounds(&schedule.div1_rounds, |r, f| col2.get(&f) == Some(&r));
    let div2 = flag_rounds(&schedule.div2_rounds, |r, f| {
        f.within(2 * n)
            && col1
                .get(&f)
                .is_some_and(|&c1| congruent(r, c1, n, schedule.mode))
    });

    Ok(ScheduleDocument {
        format_version: FORMAT_VERSION.to_string(),
        n,
        mode: schedule.mode,
        divisions: vec![
            DivisionDocument {
                division: 1,
                rounds: div1,
            },
            DivisionDocument {
                division: 2,
                rounds: div2,
            },
        ],
        summary: Summary {
            total_common: report.total,
            per_round_counts: report.per_round_counts,
            q: report.q,
            balanced: season_balanced(schedule),
        },
    })
}

fn shape_err(reason: impl Into<String>) -> Error {
    Error::DocumentShape {
        reason: reason.into(),
    }
}

fn rounds_from_document(doc: &DivisionDocument) -> Result<Vec<OrientedRound>, Error> {
    let mut out = Vec::with_capacity(doc.rounds.len());
    for (i, round) in doc.rounds.iter().enumerate() {
        let expected = i as u32 + 1;
        if round.round != expected {
            return Err(shape_err(format!(
                "division {}: round {} listed where round {expected} belongs",
                doc.division, round.round
            )));
        }
        out.push(
            round
                .fixtures
                .iter()
                .map(|f| OrientedFixture::new(Vertex::new(f.home), Vertex::new(f.away)))
                .collect(),
        );
    }
    Ok(out)
}

/// Rebuild a [`Schedule`] from a parsed document. Checks the format
/// version and document shape only; run [`Schedule::validate`] and the
/// analysis passes for structural verification. The stored `common` flags
/// and summary are ignored, being derived data.
pub fn schedule_from_document(doc: &ScheduleDocument) -> Result<Schedule, Error> {
    if doc.format_version != FORMAT_VERSION {
        return Err(shape_err(format!(
            "unsupported format_version {:?}, expected {FORMAT_VERSION:?}",
            doc.format_version
        )));
    }
    if doc.n == 0 {
        return Err(shape_err("n must be at least 1"));
    }
    let [d1, d2] = doc.divisions.as_slice() else {
        return Err(shape_err(format!(
            "expected 2 divisions, found {}",
            doc.divisions.len()
        )));
    };
    if d1.division != 1 || d2.division != 2 {
        return Err(shape_err(format!(
            "divisions must be listed as 1 then 2, found {} then {}",
            d1.division, d2.division
        )));
    }
    Ok(Schedule {
        n: doc.n,
        mode: doc.mode,
        div1_rounds: rounds_from_document(d1)?,
        div2_rounds: rounds_from_document(d2)?,
    })
}

/// Flat CSV rendering with columns `division,round,home,away,common`.
pub fn to_csv(doc: &ScheduleDocument) -> String {
    let mut out = String::from("division,round,home,away,common\n");
    for division in &doc.divisions {
        for round in &division.rounds {
            for f in &round.fixtures {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    division.division, round.round, f.home, f.away, f.common
                ));
            }
        }
    }
    out
}

fn club_name(label: u32, names: Option<&[String]>) -> String {
    names
        .and_then(|ns| ns.get(label as usize))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| label.to_string())
}

/// Human-readable per-round tables, common fixtures marked `*`. With
/// `names`, club labels index into the list (falling back to the label
/// where the list is short).
pub fn to_text(doc: &ScheduleDocument, names: Option<&[String]>) -> String {
    let mode = match doc.mode {
        Mode::Double => "double",
        Mode::Single => "single",
    };
    let s = &doc.summary;
    let mut out = format!(
        "n = {}, {mode} round robin in division one\n\
         common fixtures: {} (extra clubs meet in round {}, balanced: {})\n",
        doc.n, s.total_common, s.q, s.balanced
    );
    for division in &doc.divisions {
        out.push_str(&format!("\ndivision {}\n", division.division));
        for round in &division.rounds {
            let games: Vec<String> = round
                .fixtures
                .iter()
                .map(|f| {
                    let mark = if f.common { "*" } else { "" };
                    format!(
                        "{} v {}{mark}",
                        club_name(f.home, names),
                        club_name(f.away, names)
                    )
                })
                .collect();
            out.push_str(&format!(
                "  round {:>2}: {}\n",
                round.round,
                games.join(", ")
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_schedule;

    fn doc(n: u32, mode: Mode) -> ScheduleDocument {
        document_from_schedule(&build_schedule(n, mode).unwrap()).unwrap()
    }

    #[test]
    fn json_round_trips_exactly() {
        for n in [1, 2, 3, 5, 8] {
            for mode in [Mode::Double, Mode::Single] {
                let schedule = build_schedule(n, mode).unwrap();
                let d = document_from_schedule(&schedule).unwrap();
                let json = serde_json::to_string_pretty(&d).unwrap();
                let parsed: ScheduleDocument = serde_json::from_str(&json).unwrap();
                assert_eq!(parsed, d, "n={n} {mode}");
                assert_eq!(schedule_from_document(&parsed).unwrap(), schedule);
            }
        }
    }

    #[test]
    fn flags_count_the_report_total_once_per_division() {
        for (n, mode) in [(2, Mode::Double), (3, Mode::Double), (4, Mode::Single)] {
            let d = doc(n, mode);
            for division in &d.divisions {
                let marked: u32 = division
                    .rounds
                    .iter()
                    .flat_map(|r| &r.fixtures)
                    .map(|f| u32::from(f.common))
                    .sum();
                assert_eq!(
                    marked, d.summary.total_common,
                    "n={n} {mode} division {}",
                    division.division
                );
            }
        }
    }

    #[test]
    fn n2_flags_sit_on_the_known_games() {
        let d = doc(2, Mode::Double);
        let marked: Vec<(u32, u32, u32, u32)> = d
            .divisions
            .iter()
            .flat_map(|div| {
                div.rounds.iter().flat_map(move |r| {
                    r.fixtures
                        .iter()
                        .filter(|f| f.common)
                        .map(move |f| (div.division, r.round, f.home, f.away))
                })
            })
            .collect();
        // Division one picks up {0,1} and {1,3} in the second leg, where
        // division two's dates 4 and 5 fall.
        assert_eq!(
            marked,
            vec![
                (1, 1, 2, 3),
                (1, 2, 2, 0),
                (1, 3, 0, 3),
                (1, 3, 1, 2),
                (1, 4, 1, 0),
                (1, 5, 1, 3),
                (2, 1, 2, 3),
                (2, 2, 2, 0),
                (2, 3, 0, 3),
                (2, 3, 1, 2),
                (2, 4, 1, 0),
                (2, 5, 1, 3),
            ]
        );
        assert_eq!(d.summary.total_common, 6);
        assert_eq!(d.summary.q, 3);
        assert!(d.summary.balanced);
    }

    #[test]
    fn csv_has_the_expected_row_counts() {
        let n = 4u32;
        let csv = to_csv(&doc(n, Mode::Double));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "division,round,home,away,common");
        let div1 = lines.iter().filter(|l| l.starts_with("1,")).count();
        let div2 = lines.iter().filter(|l| l.starts_with("2,")).count();
        assert_eq!(div1, ((4 * n - 2) * n) as usize);
        assert_eq!(div2, ((2 * n + 1) * (n + 1)) as usize);
        assert_eq!(lines.len(), 1 + div1 + div2);

        let single = to_csv(&doc(n, Mode::Single));
        let div1 = single.lines().filter(|l| l.starts_with("1,")).count();
        assert_eq!(div1, ((2 * n - 1) * n) as usize);
    }

    #[test]
    fn text_marks_commons_and_applies_names() {
        let names: Vec<String> = ["Ash", "Birch", "Cedar", "Douglas", "Elm", "Fir"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let text = to_text(&doc(2, Mode::Double), Some(&names));
        assert!(text.contains("division 1"));
        assert!(text.contains("division 2"));
        assert!(text.contains("Cedar v Douglas*"));
        assert!(text.contains("common fixtures: 6"));
        let bare = to_text(&doc(2, Mode::Double), None);
        assert!(bare.contains("2 v 3*"));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let good = doc(2, Mode::Double);

        let mut bad = good.clone();
        bad.format_version = "2".into();
        assert!(matches!(
            schedule_from_document(&bad),
            Err(Error::DocumentShape { .. })
        ));

        let mut bad = good.clone();
        bad.divisions.pop();
        assert!(matches!(
            schedule_from_document(&bad),
            Err(Error::DocumentShape { .. })
        ));

        let mut bad = good.clone();
        bad.divisions[1].rounds[2].round = 9;
        assert!(matches!(
            schedule_from_document(&bad),
            Err(Error::DocumentShape { .. })
        ));

        let mut bad = good;
        bad.n = 0;
        assert!(matches!(
            schedule_from_document(&bad),
            Err(Error::DocumentShape { .. })
        ));
    }

    #[test]
    fn tampered_schedules_still_parse_and_fail_validation() {
        let mut d = doc(3, Mode::Double);
        let fx = &mut d.divisions[0].rounds[0].fixtures[0];
        fx.home = fx.away;
        let schedule = schedule_from_document(&d).unwrap();
        assert!(!schedule.validate().is_empty());
    }
}
