//! Clubs, fixtures, rounds and draws, plus the rotation machinery the
//! construction is built on.
//!
//! For a season parameter `n` the first division has `2n` clubs and the
//! second division `2n + 2`. Clubs are integer labels. Labels `0` to
//! `2n - 3` are the *rotating* clubs; the four remaining labels are fixed
//! points of the rotation and play special roles:
//!
//! | label    | role   |
//! |----------|--------|
//! | `2n - 2` | `-inf` |
//! | `2n - 1` | `+inf` |
//! | `2n`     | `-i`   |
//! | `2n + 1` | `+i`   |
//!
//! Division one uses labels `0..2n` (the rotating clubs plus the two real
//! infinities); division two additionally uses the two imaginary ones. A
//! *draw* is an ordered one-factorisation of the complete graph on a
//! division's clubs: rounds are numbered from 1 and every pair of clubs
//! meets exactly once.

use std::collections::BTreeMap;
use std::fmt;

use crate::Error;

/// What a label means for a given season parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// One of the `2n - 2` clubs moved by the rotation.
    Rotating(u32),
    /// `-inf`, label `2n - 2`.
    MinusInf,
    /// `+inf`, label `2n - 1`.
    PlusInf,
    /// `-i`, label `2n` (division two only).
    MinusIInf,
    /// `+i`, label `2n + 1` (division two only).
    PlusIInf,
}

impl Role {
    /// The label this role carries for season parameter `n`.
    pub fn vertex(self, n: u32) -> Result<Vertex, Error> {
        if n == 0 {
            return Err(Error::SizeTooSmall { n, min: 1 });
        }
        let label = match self {
            Role::Rotating(i) => {
                if i >= 2 * n - 2 {
                    return Err(Error::RotatingOutOfRange { label: i, n });
                }
                i
            }
            Role::MinusInf => 2 * n - 2,
            Role::PlusInf => 2 * n - 1,
            Role::MinusIInf => 2 * n,
            Role::PlusIInf => 2 * n + 1,
        };
        Ok(Vertex::new(label))
    }
}

/// A club, identified by its integer label.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(u32);

impl Vertex {
    pub const fn new(label: u32) -> Vertex {
        Vertex(label)
    }

    pub const fn label(self) -> u32 {
        self.0
    }

    /// Recover the role of this label under season parameter `n`.
    pub fn role(self, n: u32) -> Result<Role, Error> {
        if n == 0 {
            return Err(Error::SizeTooSmall { n, min: 1 });
        }
        let l = self.0;
        if l + 2 < 2 * n {
            Ok(Role::Rotating(l))
        } else if l == 2 * n - 2 {
            Ok(Role::MinusInf)
        } else if l == 2 * n - 1 {
            Ok(Role::PlusInf)
        } else if l == 2 * n {
            Ok(Role::MinusIInf)
        } else if l == 2 * n + 1 {
            Ok(Role::PlusIInf)
        } else {
            Err(Error::LabelOutOfRange { label: l, n })
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// The two divisions a schedule covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Division {
    One,
    Two,
}

impl Division {
    /// Number of clubs fielding a side in this division.
    pub fn vertex_count(self, n: u32) -> u32 {
        match self {
            Division::One => 2 * n,
            Division::Two => 2 * n + 2,
        }
    }

    /// Rounds in a single round robin of this division.
    pub fn round_count(self, n: u32) -> u32 {
        match self {
            Division::One => 2 * n - 1,
            Division::Two => 2 * n + 1,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Division::One => 1,
            Division::Two => 2,
        }
    }
}

impl fmt::Display for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "division {}", self.index())
    }
}

/// An unordered pair of distinct clubs. Stored with the smaller label first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixture {
    a: Vertex,
    b: Vertex,
}

impl Fixture {
    pub fn new(x: Vertex, y: Vertex) -> Result<Fixture, Error> {
        if x == y {
            return Err(Error::LoopEdge { label: x.label() });
        }
        Ok(if x < y {
            Fixture { a: x, b: y }
        } else {
            Fixture { a: y, b: x }
        })
    }

    /// The smaller label.
    pub const fn a(self) -> Vertex {
        self.a
    }

    /// The larger label.
    pub const fn b(self) -> Vertex {
        self.b
    }

    pub fn touches(self, v: Vertex) -> bool {
        self.a == v || self.b == v
    }

    /// Both endpoints lie below `bound`.
    pub fn within(self, bound: u32) -> bool {
        self.b.label() < bound
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl fmt::Debug for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// Shorthand for building a fixture from raw labels.
///
/// Panics when the labels coincide, so reserve it for literals; fallible
/// paths should go through [`Fixture::new`].
pub fn edge(a: u32, b: u32) -> Fixture {
    Fixture::new(Vertex::new(a), Vertex::new(b)).expect("labels must differ")
}

/// A single round: a set of fixtures, kept sorted. For a valid round on
/// `2m` clubs this is a perfect matching of `K_{2m}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OneFactor {
    edges: Vec<Fixture>,
}

impl OneFactor {
    pub fn new(mut edges: Vec<Fixture>) -> OneFactor {
        edges.sort();
        OneFactor { edges }
    }

    pub fn edges(&self) -> &[Fixture] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, f: Fixture) -> bool {
        self.edges.binary_search(&f).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Fixture> + '_ {
        self.edges.iter().copied()
    }

    /// Check that this is a perfect matching on the clubs `0..vertex_count`.
    pub fn validate(&self, vertex_count: u32) -> Vec<FactorViolation> {
        let mut out = Vec::new();
        let expected = vertex_count as usize / 2;
        if self.edges.len() != expected {
            out.push(FactorViolation::WrongSize {
                expected,
                actual: self.edges.len(),
            });
        }
        let mut cover = vec![0u32; vertex_count as usize];
        for e in &self.edges {
            for v in [e.a(), e.b()] {
                match cover.get_mut(v.label() as usize) {
                    Some(c) => *c += 1,
                    None => out.push(FactorViolation::OutOfRange { vertex: v }),
                }
            }
        }
        for (label, &c) in cover.iter().enumerate() {
            let vertex = Vertex::new(label as u32);
            if c == 0 {
                out.push(FactorViolation::Uncovered { vertex });
            } else if c > 1 {
                out.push(FactorViolation::Repeated { vertex });
            }
        }
        out
    }
}

impl fmt::Debug for OneFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.edges).finish()
    }
}

/// Why a round is not a perfect matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FactorViolation {
    #[error("round has {actual} fixtures, expected {expected}")]
    WrongSize { expected: usize, actual: usize },
    #[error("club {vertex} does not belong to this division")]
    OutOfRange { vertex: Vertex },
    #[error("club {vertex} plays more than once in the round")]
    Repeated { vertex: Vertex },
    #[error("club {vertex} has no game in the round")]
    Uncovered { vertex: Vertex },
}

/// Why a draw is not an ordered one-factorisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("draw has {actual} rounds, expected {expected}")]
    RoundCount { expected: usize, actual: usize },
    #[error("round {round}: {violation}")]
    Factor {
        round: u32,
        violation: FactorViolation,
    },
    #[error("fixture {fixture} appears in rounds {} and {}", rounds.0, rounds.1)]
    DuplicateEdge {
        fixture: Fixture,
        rounds: (u32, u32),
    },
    #[error("fixture {fixture} is never played")]
    MissingEdge { fixture: Fixture },
}

/// An ordered one-factorisation of a division's complete graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Draw {
    n: u32,
    division: Division,
    rounds: Vec<OneFactor>,
}

impl Draw {
    pub fn new(n: u32, division: Division, rounds: Vec<OneFactor>) -> Draw {
        Draw {
            n,
            division,
            rounds,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn division(&self) -> Division {
        self.division
    }

    pub fn rounds(&self) -> &[OneFactor] {
        &self.rounds
    }

    /// Round `r`, numbered from 1.
    pub fn round(&self, r: u32) -> Option<&OneFactor> {
        self.rounds.get(r as usize - 1)
    }

    pub fn vertex_count(&self) -> u32 {
        self.division.vertex_count(self.n)
    }

    /// The round in which `f` is played, if any.
    pub fn round_of(&self, f: Fixture) -> Option<u32> {
        self.rounds
            .iter()
            .position(|factor| factor.contains(f))
            .map(|i| i as u32 + 1)
    }

    /// Full structural validation: right number of rounds, each round a
    /// perfect matching, and every pair of clubs meeting exactly once.
    pub fn validate(&self) -> Vec<Violation> {
        let vc = self.vertex_count();
        let expected = self.division.round_count(self.n) as usize;
        let mut out = Vec::new();
        if self.rounds.len() != expected {
            out.push(Violation::RoundCount {
                expected,
                actual: self.rounds.len(),
            });
        }
        for (i, factor) in self.rounds.iter().enumerate() {
            for violation in factor.validate(vc) {
                out.push(Violation::Factor {
                    round: i as u32 + 1,
                    violation,
                });
            }
        }
        let mut seen: BTreeMap<Fixture, u32> = BTreeMap::new();
        for (i, factor) in self.rounds.iter().enumerate() {
            let round = i as u32 + 1;
            for fixture in factor.iter() {
                if let Some(&first) = seen.get(&fixture) {
                    out.push(Violation::DuplicateEdge {
                        fixture,
                        rounds: (first, round),
                    });
                } else {
                    seen.insert(fixture, round);
                }
            }
        }
        for a in 0..vc {
            for b in a + 1..vc {
                let fixture = edge(a, b);
                if !seen.contains_key(&fixture) {
                    out.push(Violation::MissingEdge { fixture });
                }
            }
        }
        out
    }
}

/// The cyclic relabelling `x -> x + k (mod 2n - 2)` on rotating clubs,
/// fixing the four special clubs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rotation {
    n: u32,
    k: u32,
}

impl Rotation {
    /// Rotation by `k` steps; any integer exponent is reduced modulo
    /// `2n - 2`. For `n = 1` there is nothing to rotate and every exponent
    /// gives the identity.
    pub fn new(n: u32, k: i64) -> Rotation {
        let m = 2 * i64::from(n) - 2;
        let k = if m > 0 { k.rem_euclid(m) as u32 } else { 0 };
        Rotation { n, k }
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        let m = 2 * self.n - 2;
        if self.n >= 2 && v.label() < m {
            Vertex::new((v.label() + self.k) % m)
        } else {
            v
        }
    }

    pub fn apply_fixture(&self, f: Fixture) -> Fixture {
        Fixture::new(self.apply(f.a()), self.apply(f.b()))
            .expect("a rotation is injective, so images stay distinct")
    }

    pub fn apply_factor(&self, factor: &OneFactor) -> OneFactor {
        OneFactor::new(factor.iter().map(|f| self.apply_fixture(f)).collect())
    }
}

/// Names for the rotation's edge orbits on the division-two complete graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitId {
    /// Edges between rotating clubs at cyclic distance `delta`,
    /// `1 <= delta <= n - 1`.
    Delta(u32),
    /// Edges from a rotating club to `-inf`.
    MinusInf,
    /// Edges from a rotating club to `+inf`.
    PlusInf,
    /// Edges from a rotating club to `-i`.
    MinusIInf,
    /// Edges from a rotating club to `+i`.
    PlusIInf,
    /// The six edges among the four special clubs, each fixed pointwise.
    Fixed,
}

impl fmt::Display for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitId::Delta(d) => write!(f, "O_{d}"),
            OrbitId::MinusInf => write!(f, "O_-inf"),
            OrbitId::PlusInf => write!(f, "O_+inf"),
            OrbitId::MinusIInf => write!(f, "O_-i"),
            OrbitId::PlusIInf => write!(f, "O_+i"),
            OrbitId::Fixed => write!(f, "fixed"),
        }
    }
}

/// One orbit of the rotation acting on edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub id: OrbitId,
    pub edges: Vec<Fixture>,
}

/// The edges of a named orbit, sorted.
///
/// Sizes: `O_delta` has `2n - 2` edges for `delta < n - 1` and `n - 1`
/// edges for `delta = n - 1`; each infinity orbit has `2n - 2` edges; the
/// fixed class always has six.
pub fn orbit_edges(id: OrbitId, n: u32) -> Result<Orbit, Error> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    let m = 2 * n - 2;
    let mut edges: Vec<Fixture> = match id {
        OrbitId::Delta(delta) => {
            if delta == 0 || delta + 1 > n {
                return Err(Error::OrbitDistance { delta, n });
            }
            let mut set = std::collections::BTreeSet::new();
            for x in 0..m {
                set.insert(edge(x, (x + delta) % m));
            }
            set.into_iter().collect()
        }
        OrbitId::MinusInf | OrbitId::PlusInf | OrbitId::MinusIInf | OrbitId::PlusIInf => {
            let role = match id {
                OrbitId::MinusInf => Role::MinusInf,
                OrbitId::PlusInf => Role::PlusInf,
                OrbitId::MinusIInf => Role::MinusIInf,
                _ => Role::PlusIInf,
            };
            let c = role.vertex(n)?;
            (0..m).map(|x| edge(x, c.label())).collect()
        }
        OrbitId::Fixed => {
            let mut out = Vec::with_capacity(6);
            for i in 0..4 {
                for j in i + 1..4 {
                    out.push(edge(m + i, m + j));
                }
            }
            out
        }
    };
    edges.sort();
    Ok(Orbit { id, edges })
}

/// All orbits for season parameter `n`, in a fixed order. Together they
/// partition the edge set of the division-two complete graph.
pub fn all_orbits(n: u32) -> Result<Vec<Orbit>, Error> {
    let mut out = Vec::new();
    for delta in 1..n {
        out.push(orbit_edges(OrbitId::Delta(delta), n)?);
    }
    for id in [
        OrbitId::MinusInf,
        OrbitId::PlusInf,
        OrbitId::MinusIInf,
        OrbitId::PlusIInf,
        OrbitId::Fixed,
    ] {
        out.push(orbit_edges(id, n)?);
    }
    Ok(out)
}
