//! Building the two divisions' draws and their home/away assignment.
//!
//! The general construction (any `n >= 3`) is rotational. Round 1 of each
//! division is a hand-picked starter factor sharing `n - 1` fixtures;
//! rounds 2 to `2n - 2` are its translates under the rotation, which keeps
//! the overlap at `n - 1` per round. Round `2n - 1` pairs clubs at cyclic
//! distance `n - 1` in both divisions and shares all `n` division-one
//! fixtures. Division two's last two rounds split the distance-1 edges
//! between them so that each picks up one more common fixture against the
//! restarted division-one draw. `n = 2` does not fit the rotational
//! pattern (the distance-1 orbit collapses) and uses fixed tables; so does
//! the degenerate `n = 1`.
//!
//! Orientations assign home clubs. Edges between rotating clubs point up
//! the cycle, edges at the four special clubs alternate with the parity of
//! the rotating endpoint, and the six special-special games follow a fixed
//! list. Division one reuses division two's orientation restricted to its
//! clubs, with the distance-1 edges reversed: those edges' common fixtures
//! fall in the second leg of the double round robin, where every other
//! orientation flips.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::graph::{edge, Division, Draw, Fixture, OneFactor, Role, Rotation, Vertex, Violation};
use crate::Error;

/// The distinguished rotating labels of the starter round:
/// `{s, t}` closes the first run of nested fixtures, `{u, v}` the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarterParams {
    pub s: u32,
    pub t: u32,
    pub u: u32,
    pub v: u32,
}

pub fn starter_params(n: u32) -> Result<StarterParams, Error> {
    if n < 3 {
        return Err(Error::SizeTooSmall { n, min: 3 });
    }
    let (s, u) = if n.is_multiple_of(2) {
        ((n - 4) / 2, (3 * n - 6) / 2)
    } else {
        ((n - 3) / 2, (3 * n - 7) / 2)
    };
    Ok(StarterParams {
        s,
        t: n - 2 - s,
        u,
        v: 3 * n - 5 - u,
    })
}

/// Round 1 of both divisions, broken into the pieces the construction is
/// reasoned about with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarterDecomposition {
    /// Nested fixtures `{x, n-2-x}` for `0 <= x <= s`.
    pub e1: Vec<Fixture>,
    /// Nested fixtures `{x, 3n-5-x}` for `n-1 <= x <= u` (empty for n = 3).
    pub e2: Vec<Fixture>,
    /// The two fixtures involving `-inf` and `+inf`.
    pub e3: Vec<Fixture>,
    /// The two fixtures involving `-i` and `+i` (division two only).
    pub e4: Vec<Fixture>,
    /// The distance-1 fixture dropped when passing to division two:
    /// `{u, v}` for even `n`, `{s, t}` for odd.
    pub removed_edge: Fixture,
    pub f1_div1: OneFactor,
    pub f1_div2: OneFactor,
}

pub fn build_starters(n: u32) -> Result<StarterDecomposition, Error> {
    let p = starter_params(n)?;
    let even = n.is_multiple_of(2);
    let minus_inf = Role::MinusInf.vertex(n)?.label();
    let plus_inf = Role::PlusInf.vertex(n)?.label();
    let minus_i = Role::MinusIInf.vertex(n)?.label();
    let plus_i = Role::PlusIInf.vertex(n)?.label();

    let e1: Vec<Fixture> = (0..=p.s).map(|x| edge(x, n - 2 - x)).collect();
    let e2: Vec<Fixture> = (n - 1..=p.u).map(|x| edge(x, 3 * n - 5 - x)).collect();
    let e3 = vec![
        edge(if even { (n - 2) / 2 } else { (3 * n - 5) / 2 }, minus_inf),
        edge(2 * n - 3, plus_inf),
    ];
    let (e4, removed_edge) = if even {
        (vec![edge(p.u, minus_i), edge(p.v, plus_i)], edge(p.u, p.v))
    } else {
        (vec![edge(p.s, minus_i), edge(p.t, plus_i)], edge(p.s, p.t))
    };

    let mut div1 = e1.clone();
    div1.extend(&e2);
    div1.extend(&e3);
    let f1_div1 = OneFactor::new(div1);

    let mut div2: Vec<Fixture> = f1_div1.iter().filter(|&f| f != removed_edge).collect();
    div2.extend(&e4);
    let f1_div2 = OneFactor::new(div2);

    Ok(StarterDecomposition {
        e1,
        e2,
        e3,
        e4,
        removed_edge,
        f1_div1,
        f1_div2,
    })
}

/// The distance-1 fixtures split across division two's final two rounds,
/// and those rounds themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailFactors {
    /// Even translates of the removed starter edge; contains it.
    pub t1: Vec<Fixture>,
    /// Odd translates, `t2 = sigma(t1)`.
    pub t2: Vec<Fixture>,
    /// Round `2n`: `t1` plus `{-inf,-i}` and `{+inf,+i}`.
    pub f2n: OneFactor,
    /// Round `2n + 1`: `t2` plus `{-inf,+i}` and `{+inf,-i}`.
    pub f2n1: OneFactor,
}

pub fn tail_factors(n: u32) -> Result<TailFactors, Error> {
    let starters = build_starters(n)?;
    let removed = starters.removed_edge;
    let mut t1 = Vec::with_capacity(n as usize - 1);
    let mut t2 = Vec::with_capacity(n as usize - 1);
    for j in 0..=n - 2 {
        t1.push(Rotation::new(n, 2 * i64::from(j)).apply_fixture(removed));
        t2.push(Rotation::new(n, 2 * i64::from(j) + 1).apply_fixture(removed));
    }
    let minus_inf = Role::MinusInf.vertex(n)?.label();
    let plus_inf = Role::PlusInf.vertex(n)?.label();
    let minus_i = Role::MinusIInf.vertex(n)?.label();
    let plus_i = Role::PlusIInf.vertex(n)?.label();

    let mut f2n = t1.clone();
    f2n.push(edge(minus_inf, minus_i));
    f2n.push(edge(plus_inf, plus_i));
    let mut f2n1 = t2.clone();
    f2n1.push(edge(minus_inf, plus_i));
    f2n1.push(edge(plus_inf, minus_i));

    Ok(TailFactors {
        t1,
        t2,
        f2n: OneFactor::new(f2n),
        f2n1: OneFactor::new(f2n1),
    })
}

/// The fixed draw tables for `n = 2`, which the rotational construction
/// cannot produce. Home club first.
const N2_DIV1: [[(u32, u32); 2]; 3] = [[(0, 1), (2, 3)], [(2, 0), (3, 1)], [(0, 3), (1, 2)]];
const N2_DIV2: [[(u32, u32); 3]; 5] = [
    [(2, 3), (4, 0), (5, 1)],
    [(2, 0), (3, 5), (4, 1)],
    [(0, 3), (1, 2), (4, 5)],
    [(1, 0), (3, 4), (5, 2)],
    [(0, 5), (1, 3), (2, 4)],
];

/// For `n = 1` division one is a single fixture. Division two is the
/// `K_4` draw below; its orientations are a convention (any balanced
/// choice agreeing with division one on the common fixture would do).
const N1_DIV1: [[(u32, u32); 1]; 1] = [[(0, 1)]];
const N1_DIV2: [[(u32, u32); 2]; 3] = [[(0, 1), (2, 3)], [(2, 0), (3, 1)], [(0, 3), (1, 2)]];

fn table_rounds(table: &[&[(u32, u32)]]) -> Vec<OrientedRound> {
    table
        .iter()
        .map(|round| {
            round
                .iter()
                .map(|&(home, away)| OrientedFixture {
                    home: Vertex::new(home),
                    away: Vertex::new(away),
                })
                .collect()
        })
        .collect()
}

fn n2_tables() -> (Vec<OrientedRound>, Vec<OrientedRound>) {
    let d1: Vec<&[(u32, u32)]> = N2_DIV1.iter().map(|r| r.as_slice()).collect();
    let d2: Vec<&[(u32, u32)]> = N2_DIV2.iter().map(|r| r.as_slice()).collect();
    (table_rounds(&d1), table_rounds(&d2))
}

fn unoriented_rounds(rounds: &[OrientedRound]) -> Vec<OneFactor> {
    rounds
        .iter()
        .map(|round| {
            OneFactor::new(
                round
                    .iter()
                    .filter_map(|of| of.unoriented())
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// The two divisions' draws: ordered one-factorisations of `K_{2n}` and
/// `K_{2n+2}` with `n - 1` fixtures in common in rounds 1 to `2n - 2`,
/// `n` in round `2n - 1`, and the remaining rounds of division two primed
/// to pick up one more each against a second leg of division one.
pub fn build_draws(n: u32) -> Result<(Draw, Draw), Error> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    if n == 2 {
        let (d1, d2) = n2_tables();
        return Ok((
            Draw::new(2, Division::One, unoriented_rounds(&d1)),
            Draw::new(2, Division::Two, unoriented_rounds(&d2)),
        ));
    }

    let starters = build_starters(n)?;
    let tail = tail_factors(n)?;

    let mut rounds1 = Vec::with_capacity(2 * n as usize - 1);
    let mut rounds2 = Vec::with_capacity(2 * n as usize + 1);
    for r in 1..=2 * n - 2 {
        let sigma = Rotation::new(n, i64::from(r) - 1);
        rounds1.push(sigma.apply_factor(&starters.f1_div1));
        rounds2.push(sigma.apply_factor(&starters.f1_div2));
    }

    let minus_inf = Role::MinusInf.vertex(n)?.label();
    let plus_inf = Role::PlusInf.vertex(n)?.label();
    let minus_i = Role::MinusIInf.vertex(n)?.label();
    let plus_i = Role::PlusIInf.vertex(n)?.label();
    let mut middle: Vec<Fixture> = (0..=n - 2).map(|x| edge(x, x + n - 1)).collect();
    middle.push(edge(minus_inf, plus_inf));
    let penultimate1 = OneFactor::new(middle.clone());
    middle.push(edge(minus_i, plus_i));
    let penultimate2 = OneFactor::new(middle);

    rounds1.push(penultimate1);
    rounds2.push(penultimate2);
    rounds2.push(tail.f2n);
    rounds2.push(tail.f2n1);

    Ok((
        Draw::new(n, Division::One, rounds1),
        Draw::new(n, Division::Two, rounds2),
    ))
}

/// A fixture with its home club decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedFixture {
    pub home: Vertex,
    pub away: Vertex,
}

impl OrientedFixture {
    pub fn new(home: Vertex, away: Vertex) -> OrientedFixture {
        OrientedFixture { home, away }
    }

    pub fn reversed(self) -> OrientedFixture {
        OrientedFixture {
            home: self.away,
            away: self.home,
        }
    }

    /// Forget who is at home. `None` for a (malformed) fixture of a club
    /// against itself.
    pub fn unoriented(self) -> Option<Fixture> {
        Fixture::new(self.home, self.away).ok()
    }
}

/// One round with home clubs assigned.
pub type OrientedRound = Vec<OrientedFixture>;

/// Division two's orientation of a single fixture for `n >= 3`.
fn orient_div2(f: Fixture, n: u32) -> OrientedFixture {
    let m = 2 * n - 2;
    let (a, b) = (f.a().label(), f.b().label());
    if b < m {
        // Both rotating: orient up the cycle by the representative
        // distance, which is at most n - 1.
        let d = b - a;
        let (home, away) = if d < n { (a, b) } else { (b, a) };
        return OrientedFixture::new(Vertex::new(home), Vertex::new(away));
    }
    if a < m {
        // Rotating club against a special one. For +inf and +i the even
        // rotating clubs are at home; for -inf and -i the odd ones.
        let positive = b == 2 * n - 1 || b == 2 * n + 1;
        let (home, away) = if (a % 2 == 0) == positive {
            (a, b)
        } else {
            (b, a)
        };
        return OrientedFixture::new(Vertex::new(home), Vertex::new(away));
    }
    // Both special: fixed list, keyed by (-inf, +inf, -i, +i) offsets.
    let (i, j) = (a - m, b - m);
    let (home, away) = match (i, j) {
        (0, 1) => (a, b), // (-inf, +inf)
        (0, 2) => (a, b), // (-inf, -i)
        (0, 3) => (b, a), // (+i, -inf)
        (1, 2) => (b, a), // (-i, +inf)
        (1, 3) => (a, b), // (+inf, +i)
        _ => (a, b),      // (-i, +i)
    };
    OrientedFixture::new(Vertex::new(home), Vertex::new(away))
}

fn is_distance_one(f: Fixture, n: u32) -> bool {
    let m = 2 * n - 2;
    if f.b().label() >= m {
        return false;
    }
    let d = f.b().label() - f.a().label();
    d == 1 || d == m - 1
}

/// Assign home clubs to both draws so that every division is balanced and
/// every common fixture is identically oriented, including the two common
/// fixtures that fall in the second leg of a doubled division one.
pub fn orient(
    n: u32,
    div1: &Draw,
    div2: &Draw,
) -> Result<(Vec<OrientedRound>, Vec<OrientedRound>), Error> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    if div1.n() != n || div2.n() != n {
        return Err(Error::SizeMismatch {
            left: div1.n(),
            right: div2.n(),
        });
    }
    if n == 2 {
        let (o1, o2) = n2_tables();
        debug_assert_eq!(unoriented_rounds(&o1), div1.rounds().to_vec());
        debug_assert_eq!(unoriented_rounds(&o2), div2.rounds().to_vec());
        return Ok((o1, o2));
    }
    let orient_round = |factor: &OneFactor, reverse_o1: bool| -> OrientedRound {
        factor
            .iter()
            .map(|f| {
                let of = orient_div2(f, n);
                if reverse_o1 && is_distance_one(f, n) {
                    of.reversed()
                } else {
                    of
                }
            })
            .collect()
    };
    let o1 = div1
        .rounds()
        .iter()
        .map(|factor| orient_round(factor, true))
        .collect();
    let o2 = div2
        .rounds()
        .iter()
        .map(|factor| orient_round(factor, false))
        .collect();
    Ok((o1, o2))
}

/// Double a single round robin: replay every round with home and away
/// swapped.
pub fn expand_double_round_robin(rounds: &[OrientedRound]) -> Vec<OrientedRound> {
    let mut out = rounds.to_vec();
    out.extend(
        rounds
            .iter()
            .map(|round| round.iter().map(|of| of.reversed()).collect::<Vec<_>>()),
    );
    out
}

/// Whether division one plays each opponent twice or once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Double,
    Single,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Double => write!(f, "double"),
            Mode::Single => write!(f, "single"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode, Error> {
        match s {
            "double" => Ok(Mode::Double),
            "single" => Ok(Mode::Single),
            _ => Err(Error::UnknownMode {
                value: s.to_string(),
            }),
        }
    }
}

/// A complete season for both divisions.
///
/// Division one has `4n - 2` rounds in double mode (`2n - 1` in single),
/// division two always `2n + 1`. Round `r` of the two divisions is played
/// on the same date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub n: u32,
    pub mode: Mode,
    pub div1_rounds: Vec<OrientedRound>,
    pub div2_rounds: Vec<OrientedRound>,
}

impl Schedule {
    pub fn rounds(&self, division: Division) -> &[OrientedRound] {
        match division {
            Division::One => &self.div1_rounds,
            Division::Two => &self.div2_rounds,
        }
    }

    /// The ordered one-factorisation underlying a division: for division
    /// one this is the first `2n - 1` rounds, the only ones that matter
    /// structurally in double mode.
    pub fn draw(&self, division: Division) -> Draw {
        let rounds = self.rounds(division);
        let take = (division.round_count(self.n) as usize).min(rounds.len());
        Draw::new(self.n, division, unoriented_rounds(&rounds[..take]))
    }

    pub fn expected_rounds(&self, division: Division) -> usize {
        match (division, self.mode) {
            (Division::One, Mode::Double) => 4 * self.n as usize - 2,
            (Division::One, Mode::Single) => 2 * self.n as usize - 1,
            (Division::Two, _) => 2 * self.n as usize + 1,
        }
    }

    /// Structural validation: round counts for the mode, both draws proper
    /// ordered one-factorisations, and in double mode the second leg of
    /// division one repeating the first with every fixture reversed.
    pub fn validate(&self) -> Vec<ScheduleViolation> {
        let mut out = Vec::new();
        for division in [Division::One, Division::Two] {
            let rounds = self.rounds(division);
            let expected = self.expected_rounds(division);
            if rounds.len() != expected {
                out.push(ScheduleViolation::RoundTotal {
                    division,
                    expected,
                    actual: rounds.len(),
                });
            }
            for (i, round) in rounds.iter().enumerate() {
                for of in round {
                    if of.home == of.away {
                        out.push(ScheduleViolation::SelfPlay {
                            division,
                            round: i as u32 + 1,
                            label: of.home.label(),
                        });
                    }
                }
            }
            for violation in self.draw(division).validate() {
                out.push(ScheduleViolation::Draw {
                    division,
                    violation,
                });
            }
        }
        if self.mode == Mode::Double {
            let leg = 2 * self.n as usize - 1;
            for r in 0..leg.min(self.div1_rounds.len()) {
                let Some(mirror) = self.div1_rounds.get(r + leg) else {
                    continue;
                };
                let base = &self.div1_rounds[r];
                let key = |round: &OrientedRound| -> BTreeSet<(u32, u32)> {
                    round
                        .iter()
                        .map(|of| {
                            let (h, a) = (of.home.label(), of.away.label());
                            (h.min(a), h.max(a))
                        })
                        .collect()
                };
                if key(base) != key(mirror) {
                    out.push(ScheduleViolation::MirrorFixtures {
                        round: r as u32 + 1,
                        mirror: (r + leg) as u32 + 1,
                    });
                    continue;
                }
                for of in base {
                    if !mirror.contains(&of.reversed()) {
                        out.push(ScheduleViolation::MirrorOrientation {
                            round: r as u32 + 1,
                            mirror: (r + leg) as u32 + 1,
                            home: of.home.label(),
                            away: of.away.label(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Why a schedule is not structurally sound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleViolation {
    #[error("{division}: {violation}")]
    Draw {
        division: Division,
        violation: Violation,
    },
    #[error("{division} has {actual} rounds, expected {expected}")]
    RoundTotal {
        division: Division,
        expected: usize,
        actual: usize,
    },
    #[error("{division} round {round}: club {label} is drawn against itself")]
    SelfPlay {
        division: Division,
        round: u32,
        label: u32,
    },
    #[error("division one rounds {round} and {mirror} do not hold the same fixtures")]
    MirrorFixtures { round: u32, mirror: u32 },
    #[error(
        "division one fixture {home}-{away} of round {round} is not reversed in round {mirror}"
    )]
    MirrorOrientation {
        round: u32,
        mirror: u32,
        home: u32,
        away: u32,
    },
}

/// Build the full season: draws, orientations, and in double mode the
/// mirrored second leg of division one.
pub fn build_schedule(n: u32, mode: Mode) -> Result<Schedule, Error> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    let (div1, div2) = if n == 1 {
        let d1: Vec<&[(u32, u32)]> = N1_DIV1.iter().map(|r| r.as_slice()).collect();
        let d2: Vec<&[(u32, u32)]> = N1_DIV2.iter().map(|r| r.as_slice()).collect();
        (table_rounds(&d1), table_rounds(&d2))
    } else {
        let (draw1, draw2) = build_draws(n)?;
        orient(n, &draw1, &draw2)?
    };
    let div1_rounds = match mode {
        Mode::Double => expand_double_round_robin(&div1),
        Mode::Single => div1,
    };
    Ok(Schedule {
        n,
        mode,
        div1_rounds,
        div2_rounds: div2,
    })
}
