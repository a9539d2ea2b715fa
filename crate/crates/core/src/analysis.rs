//! Counting common fixtures and certifying the bound and balance claims.
//!
//! A division-one pair `{x, y}` gives a common fixture in division-two
//! round `r` when both clubs' games land on the same date: in double mode
//! this is the congruence `r = col1({x,y}) (mod 2n - 1)`, where `col1` is
//! the division-one round of the pair; in single mode the plain equality.
//! The totals are bounded by `c(n) = 2n^2 - 3n + 4` in double mode and
//! `c(n) - 2` in single mode (`n >= 2`), and the bound-lemma checks below
//! are theorems about *every* pair of draws, so a reported violation on a
//! valid pair always means an implementation bug.

use std::collections::HashMap;

use crate::construction::{Mode, OrientedRound, Schedule};
use crate::graph::{edge, Division, Draw, Fixture, Vertex};
use crate::Error;

/// Where and how often the two divisions share fixtures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureReport {
    pub n: u32,
    pub mode: Mode,
    /// Common fixtures per division-two round, indexed by round - 1;
    /// length `2n + 1`.
    pub per_round_counts: Vec<u32>,
    pub total: u32,
    /// The division-two round of the game between the two extra clubs.
    pub q: u32,
    /// Every common fixture with its division-two round, in round order.
    pub fixtures: Vec<(u32, Fixture)>,
}

pub(crate) fn congruent(r: u32, c1: u32, n: u32, mode: Mode) -> bool {
    match mode {
        Mode::Double => {
            // The date must exist in division one's double round robin:
            // r is one of c1 and c1 + (2n - 1). For n >= 2 every division
            // two round qualifies and this is the plain congruence; for
            // n = 1 division two outlasts division one by one round.
            let m = 2 * n - 1;
            r <= 4 * n - 2 && r % m == c1 % m
        }
        Mode::Single => r == c1,
    }
}

fn common_pairs(draw1: &Draw, draw2: &Draw, mode: Mode) -> Vec<(u32, Fixture)> {
    let n = draw1.n();
    let mut col1: HashMap<Fixture, u32> = HashMap::new();
    for (i, factor) in draw1.rounds().iter().enumerate() {
        for f in factor.iter() {
            col1.entry(f).or_insert(i as u32 + 1);
        }
    }
    let mut out = Vec::new();
    for (i, factor) in draw2.rounds().iter().enumerate() {
        let r = i as u32 + 1;
        for f in factor.iter() {
            if !f.within(2 * n) {
                continue;
            }
            if let Some(&c1) = col1.get(&f) {
                if congruent(r, c1, n, mode) {
                    out.push((r, f));
                }
            }
        }
    }
    out
}

/// Count the common fixtures of a pair of draws.
pub fn common_fixtures(draw1: &Draw, draw2: &Draw, mode: Mode) -> Result<FixtureReport, Error> {
    let n = draw1.n();
    if draw2.n() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: draw2.n(),
        });
    }
    let fixtures = common_pairs(draw1, draw2, mode);
    let round_count = (2 * n as usize + 1).max(draw2.rounds().len());
    let mut per_round_counts = vec![0u32; round_count];
    for &(r, _) in &fixtures {
        per_round_counts[r as usize - 1] += 1;
    }
    let q = draw2
        .round_of(edge(2 * n, 2 * n + 1))
        .ok_or(Error::MissingExtraGame)?;
    Ok(FixtureReport {
        n,
        mode,
        total: fixtures.len() as u32,
        per_round_counts,
        q,
        fixtures,
    })
}

/// The maximum number of common fixtures any pair of draws can achieve.
pub fn c_max(n: u32, mode: Mode) -> Result<u32, Error> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n == 1 {
        return Ok(1);
    }
    Ok(match mode {
        Mode::Double => 2 * n * n - 3 * n + 4,
        Mode::Single => 2 * n * n - 3 * n + 2,
    })
}

/// A failed bound check. On a report computed from *valid* draws each of
/// these is impossible; seeing one means the counting code is wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LemmaViolation {
    #[error(
        "round {round} is the extra clubs' round but has {count} > n = {limit} common fixtures"
    )]
    SpecialRoundOverfull { round: u32, count: u32, limit: u32 },
    #[error("round {round} has {count} > n - 1 = {limit} common fixtures")]
    RoundOverfull { round: u32, count: u32, limit: u32 },
    #[error("rounds 1 and 2n hold {sum} > n = {limit} common fixtures between them")]
    FirstWrapPair { sum: u32, limit: u32 },
    #[error("rounds 2 and 2n+1 hold {sum} > n = {limit} common fixtures between them")]
    SecondWrapPair { sum: u32, limit: u32 },
    #[error("total {total} exceeds the optimum {limit}")]
    TotalOverOptimum { total: u32, limit: u32 },
    #[error(
        "total meets the optimum but the extra clubs' game sits in round {q}, outside 3..=2n-1"
    )]
    OptimumWithBoundaryQ { q: u32 },
}

/// Check a report against the proved upper bounds: no round other than `q`
/// holds `n` common fixtures, `q` holds at most `n`, the wrap-around round
/// pairs (1, 2n) and (2, 2n+1) hold at most `n` between them, the total is
/// at most the optimum, and an optimal total forces `q` into rounds 3 to
/// `2n - 1` (meaningful for `n >= 2`; for `n = 1` the placement is free).
pub fn check_bound_lemmas(report: &FixtureReport) -> Vec<LemmaViolation> {
    let n = report.n;
    let f = |r: u32| -> u32 {
        report
            .per_round_counts
            .get(r as usize - 1)
            .copied()
            .unwrap_or(0)
    };
    let mut out = Vec::new();
    for (i, &count) in report.per_round_counts.iter().enumerate() {
        let round = i as u32 + 1;
        if round == report.q {
            if count > n {
                out.push(LemmaViolation::SpecialRoundOverfull {
                    round,
                    count,
                    limit: n,
                });
            }
        } else if count > n - 1 {
            out.push(LemmaViolation::RoundOverfull {
                round,
                count,
                limit: n - 1,
            });
        }
    }
    let first = f(1) + f(2 * n);
    if first > n {
        out.push(LemmaViolation::FirstWrapPair {
            sum: first,
            limit: n,
        });
    }
    let second = f(2) + f(2 * n + 1);
    if second > n {
        out.push(LemmaViolation::SecondWrapPair {
            sum: second,
            limit: n,
        });
    }
    let limit = c_max(n, report.mode).expect("report carries n >= 1");
    if report.total > limit {
        out.push(LemmaViolation::TotalOverOptimum {
            total: report.total,
            limit,
        });
    }
    if report.mode == Mode::Double
        && n >= 2
        && report.total == limit
        && !(3..=2 * n - 1).contains(&report.q)
    {
        out.push(LemmaViolation::OptimumWithBoundaryQ { q: report.q });
    }
    out
}

/// Home and away tallies for one round robin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    /// `(home_count, away_count)` indexed by club label.
    pub counts: Vec<(u32, u32)>,
    /// Largest difference in home counts between two clubs.
    pub max_spread: u32,
    pub balanced: bool,
}

/// Tally home games per club over a sequence of oriented rounds.
pub fn check_balance(rounds: &[OrientedRound], vertex_count: u32) -> BalanceReport {
    let mut counts = vec![(0u32, 0u32); vertex_count as usize];
    for round in rounds {
        for of in round {
            if let Some(c) = counts.get_mut(of.home.label() as usize) {
                c.0 += 1;
            }
            if let Some(c) = counts.get_mut(of.away.label() as usize) {
                c.1 += 1;
            }
        }
    }
    let homes = counts.iter().map(|c| c.0);
    let max_spread = match (homes.clone().max(), homes.min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => 0,
    };
    BalanceReport {
        counts,
        max_spread,
        balanced: max_spread <= 1,
    }
}

/// A common fixture whose home club differs between the divisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum OrientationViolation {
    #[error("round {round}: common fixture {fixture} is home for {div1_home} in division one but for {div2_home} in division two")]
    Mismatch {
        round: u32,
        fixture: Fixture,
        div1_home: u32,
        div2_home: u32,
    },
    #[error("round {round}: common fixture {fixture} has no division-one game that round")]
    MissingInDivisionOne { round: u32, fixture: Fixture },
}

fn home_of(round: &OrientedRound, f: Fixture) -> Option<Vertex> {
    round
        .iter()
        .find(|of| (of.home == f.a() && of.away == f.b()) || (of.home == f.b() && of.away == f.a()))
        .map(|of| of.home)
}

/// Check that every common fixture has the same home club in both
/// divisions. Both games of a common fixture fall on date `r`, so the
/// lookup is round `r` of each division, second leg included.
pub fn check_common_orientation(schedule: &Schedule) -> Vec<OrientationViolation> {
    let draw1 = schedule.draw(Division::One);
    let draw2 = schedule.draw(Division::Two);
    let mut out = Vec::new();
    for (r, fixture) in common_pairs(&draw1, &draw2, schedule.mode) {
        let Some(div2_home) = schedule
            .div2_rounds
            .get(r as usize - 1)
            .and_then(|round| home_of(round, fixture))
        else {
            continue;
        };
        match schedule
            .div1_rounds
            .get(r as usize - 1)
            .and_then(|round| home_of(round, fixture))
        {
            None => out.push(OrientationViolation::MissingInDivisionOne { round: r, fixture }),
            Some(div1_home) if div1_home != div2_home => {
                out.push(OrientationViolation::Mismatch {
                    round: r,
                    fixture,
                    div1_home: div1_home.label(),
                    div2_home: div2_home.label(),
                });
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_draws, build_schedule, Mode};
    use crate::graph::OneFactor;

    fn factor(pairs: &[(u32, u32)]) -> OneFactor {
        OneFactor::new(pairs.iter().map(|&(a, b)| edge(a, b)).collect())
    }

    #[test]
    fn n2_profile_reads_off_the_published_tables() {
        let (d1, d2) = build_draws(2).unwrap();
        let report = common_fixtures(&d1, &d2, Mode::Double).unwrap();
        assert_eq!(report.per_round_counts, vec![1, 1, 2, 1, 1]);
        assert_eq!(report.total, 6);
        assert_eq!(report.q, 3);
        assert_eq!(
            report.fixtures,
            vec![
                (1, edge(2, 3)),
                (2, edge(0, 2)),
                (3, edge(0, 3)),
                (3, edge(1, 2)),
                (4, edge(0, 1)),
                (5, edge(1, 3)),
            ]
        );
    }

    #[test]
    fn n3_profile_is_flat_then_spiked() {
        let (d1, d2) = build_draws(3).unwrap();
        let report = common_fixtures(&d1, &d2, Mode::Double).unwrap();
        assert_eq!(report.per_round_counts, vec![2, 2, 2, 2, 3, 1, 1]);
        assert_eq!(report.total, 13);
        assert_eq!(report.q, 5);

        let single = common_fixtures(&d1, &d2, Mode::Single).unwrap();
        assert_eq!(single.per_round_counts, vec![2, 2, 2, 2, 3, 0, 0]);
        assert_eq!(single.total, 11);
    }

    #[test]
    fn misaligned_rounds_share_nothing() {
        // The n=2 division-two factors rearranged so that every fixture
        // misses its congruence class.
        let (d1, _) = build_draws(2).unwrap();
        let d2 = Draw::new(
            2,
            Division::Two,
            vec![
                factor(&[(0, 2), (3, 5), (1, 4)]),
                factor(&[(2, 3), (0, 4), (1, 5)]),
                factor(&[(0, 5), (1, 3), (2, 4)]),
                factor(&[(0, 3), (1, 2), (4, 5)]),
                factor(&[(0, 1), (3, 4), (2, 5)]),
            ],
        );
        assert!(d2.validate().is_empty());
        let report = common_fixtures(&d1, &d2, Mode::Double).unwrap();
        assert_eq!(report.total, 0);
        assert!(report.fixtures.is_empty());
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let (d1, _) = build_draws(2).unwrap();
        let (_, d2) = build_draws(3).unwrap();
        assert!(matches!(
            common_fixtures(&d1, &d2, Mode::Double),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn optimum_formula() {
        assert_eq!(c_max(2, Mode::Double).unwrap(), 6);
        assert_eq!(c_max(3, Mode::Double).unwrap(), 13);
        assert_eq!(c_max(7, Mode::Single).unwrap(), 79);
        assert_eq!(c_max(1, Mode::Double).unwrap(), 1);
        assert_eq!(c_max(1, Mode::Single).unwrap(), 1);
        assert!(c_max(0, Mode::Double).is_err());
    }

    #[test]
    fn constructed_reports_pass_the_bound_lemmas() {
        for n in 2..=10 {
            let (d1, d2) = build_draws(n).unwrap();
            for mode in [Mode::Double, Mode::Single] {
                let report = common_fixtures(&d1, &d2, mode).unwrap();
                assert!(check_bound_lemmas(&report).is_empty(), "n={n} {mode}");
            }
        }
    }

    #[test]
    fn synthetic_overfull_first_round_breaks_two_lemmas() {
        let report = FixtureReport {
            n: 3,
            mode: Mode::Double,
            per_round_counts: vec![3, 0, 0, 0, 0, 1, 0],
            total: 4,
            q: 5,
            fixtures: Vec::new(),
        };
        let violations = check_bound_lemmas(&report);
        assert!(violations.contains(&LemmaViolation::RoundOverfull {
            round: 1,
            count: 3,
            limit: 2
        }));
        assert!(violations.contains(&LemmaViolation::FirstWrapPair { sum: 4, limit: 3 }));
    }

    #[test]
    fn optimal_total_with_early_extra_game_is_flagged() {
        let report = FixtureReport {
            n: 3,
            mode: Mode::Double,
            per_round_counts: vec![3, 2, 2, 2, 2, 1, 1],
            total: 13,
            q: 1,
            fixtures: Vec::new(),
        };
        let violations = check_bound_lemmas(&report);
        assert!(violations.contains(&LemmaViolation::OptimumWithBoundaryQ { q: 1 }));
        assert!(violations.contains(&LemmaViolation::FirstWrapPair { sum: 4, limit: 3 }));
    }

    #[test]
    fn all_quiet_report_is_ok() {
        let report = FixtureReport {
            n: 4,
            mode: Mode::Double,
            per_round_counts: vec![0; 9],
            total: 0,
            q: 1,
            fixtures: Vec::new(),
        };
        assert!(check_bound_lemmas(&report).is_empty());
    }

    #[test]
    fn division_two_balance_splits_the_named_clubs() {
        let s = build_schedule(3, Mode::Double).unwrap();
        let report = check_balance(&s.div2_rounds, 8);
        // Clubs {0, 1, -inf, -i} = {0, 1, 4, 6} get the extra home game.
        let highs: Vec<u32> = (0..8u32)
            .filter(|&v| report.counts[v as usize].0 == 4)
            .collect();
        assert_eq!(highs, vec![0, 1, 4, 6]);
        for &(h, a) in &report.counts {
            assert_eq!(h + a, 7);
        }
        assert_eq!(report.max_spread, 1);
        assert!(report.balanced);
    }

    #[test]
    fn n2_division_one_home_counts_are_one_or_two() {
        let s = build_schedule(2, Mode::Single).unwrap();
        let report = check_balance(&s.div1_rounds, 4);
        for &(h, _) in &report.counts {
            assert!(h == 1 || h == 2);
        }
        assert!(report.balanced);
    }

    #[test]
    fn doubled_leg_has_zero_spread() {
        let s = build_schedule(4, Mode::Double).unwrap();
        let report = check_balance(&s.div1_rounds, 8);
        for &(h, a) in &report.counts {
            assert_eq!(h, 7);
            assert_eq!(a, 7);
        }
        assert_eq!(report.max_spread, 0);
    }

    #[test]
    fn constructed_schedules_orient_commons_identically() {
        for n in 1..=8 {
            for mode in [Mode::Double, Mode::Single] {
                let s = build_schedule(n, mode).unwrap();
                assert!(check_common_orientation(&s).is_empty(), "n={n} {mode}");
            }
        }
    }

    #[test]
    fn flipping_one_division_two_game_is_caught() {
        let mut s = build_schedule(3, Mode::Double).unwrap();
        let target = s.div2_rounds[0]
            .iter_mut()
            .find(|of| {
                let (h, a) = (of.home.label(), of.away.label());
                h.max(a) == 4 && h.min(a) == 2
            })
            .unwrap();
        *target = target.reversed();
        let violations = check_common_orientation(&s);
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            OrientationViolation::Mismatch {
                round: 1,
                fixture,
                ..
            } if fixture == edge(2, 4)
        ));
    }
}
