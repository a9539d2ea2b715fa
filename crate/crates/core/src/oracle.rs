//! Brute-force machinery, independent of the construction: enumerate
//! every ordered one-factorisation of a small complete graph, certify the
//! optimum by exhaustive search for `n <= 3`, and sample random draws for
//! the universal-lemma property tests.
//!
//! The enumerator is a plain backtracking search over perfect matchings.
//! Within a round it always extends the lowest-labelled uncovered club,
//! which visits each ordered one-factorisation exactly once and makes the
//! emission order deterministic (lexicographic in the flat edge list).
//! Clubs live in `u64` bitmasks, capping supported graphs at 64 vertices;
//! the sizes this module is for are far below that.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construction::Mode;
use crate::graph::{edge, Division, Draw, OneFactor};
use crate::Error;

/// What to enumerate: ordered one-factorisations of `K_{vertex_count}`
/// whose first rounds are the given prefix. An empty prefix means all of
/// them. Distinct prefixes yield disjoint work, which is how the search
/// is partitioned across threads.
#[derive(Debug, Clone)]
pub struct EnumerationTask {
    pub vertex_count: u32,
    pub prefix: Vec<OneFactor>,
}

impl EnumerationTask {
    pub fn new(vertex_count: u32) -> EnumerationTask {
        EnumerationTask {
            vertex_count,
            prefix: Vec::new(),
        }
    }

    pub fn with_prefix(vertex_count: u32, prefix: Vec<OneFactor>) -> EnumerationTask {
        EnumerationTask {
            vertex_count,
            prefix,
        }
    }
}

/// A borrowed view of one enumerated factorisation. The edge list is flat,
/// `edges_per_round` consecutive entries per round, each pair `(a, b)`
/// with `a < b`; nothing is allocated per emission.
#[derive(Clone, Copy)]
pub struct FactorisationView<'a> {
    flat: &'a [(u8, u8)],
    edges_per_round: usize,
}

impl<'a> FactorisationView<'a> {
    pub fn edges(&self) -> &'a [(u8, u8)] {
        self.flat
    }

    pub fn edges_per_round(&self) -> usize {
        self.edges_per_round
    }

    pub fn rounds(&self) -> impl Iterator<Item = &'a [(u8, u8)]> {
        self.flat.chunks_exact(self.edges_per_round)
    }

    pub fn to_factors(&self) -> Vec<OneFactor> {
        factors_from_flat(self.flat, self.edges_per_round)
    }
}

fn factors_from_flat(flat: &[(u8, u8)], edges_per_round: usize) -> Vec<OneFactor> {
    flat.chunks_exact(edges_per_round)
        .map(|chunk| {
            OneFactor::new(
                chunk
                    .iter()
                    .map(|&(a, b)| edge(u32::from(a), u32::from(b)))
                    .collect(),
            )
        })
        .collect()
}

struct SearchSpace {
    full: u64,
    edges_per_round: usize,
    total: usize,
    start: usize,
    used: Vec<u64>,
    flat: Vec<(u8, u8)>,
}

fn prepare(task: &EnumerationTask) -> Result<SearchSpace, Error> {
    let vc = task.vertex_count;
    if vc < 2 || !vc.is_multiple_of(2) {
        return Err(Error::BadVertexCount { vertex_count: vc });
    }
    if vc > 64 {
        return Err(Error::TooManyVertices { vertex_count: vc });
    }
    let vcu = vc as usize;
    let edges_per_round = vcu / 2;
    let rounds = vcu - 1;
    let total = edges_per_round * rounds;
    if task.prefix.len() > rounds {
        return Err(Error::BadPrefix {
            reason: format!(
                "{} rounds, but a full draw has only {rounds}",
                task.prefix.len()
            ),
        });
    }
    let full = if vcu == 64 {
        u64::MAX
    } else {
        (1u64 << vcu) - 1
    };
    let mut used = vec![0u64; vcu];
    let mut flat = vec![(0u8, 0u8); total];
    let mut k = 0;
    for (i, factor) in task.prefix.iter().enumerate() {
        if !factor.validate(vc).is_empty() {
            return Err(Error::BadPrefix {
                reason: format!("round {} is not a perfect matching", i + 1),
            });
        }
        for f in factor.iter() {
            let (a, b) = (f.a().label() as usize, f.b().label() as usize);
            if used[a] & (1 << b) != 0 {
                return Err(Error::BadPrefix {
                    reason: format!("fixture {f} appears twice"),
                });
            }
            used[a] |= 1 << b;
            used[b] |= 1 << a;
            flat[k] = (a as u8, b as u8);
            k += 1;
        }
    }
    Ok(SearchSpace {
        full,
        edges_per_round,
        total,
        start: k,
        used,
        flat,
    })
}

#[allow(clippy::too_many_arguments)]
fn search<F: FnMut(&[(u8, u8)])>(
    used: &mut [u64],
    flat: &mut [(u8, u8)],
    k: usize,
    covered: u64,
    full: u64,
    total: usize,
    visit: &mut F,
    count: &mut u64,
) {
    if covered == full {
        if k == total {
            *count += 1;
            visit(flat);
        } else {
            search(used, flat, k, 0, full, total, visit, count);
        }
        return;
    }
    let x = (!covered & full).trailing_zeros() as usize;
    // x is the lowest uncovered club, so every remaining candidate
    // partner is above it.
    let mut cand = !covered & full & !used[x] & !(1u64 << x);
    while cand != 0 {
        let y = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        used[x] |= 1 << y;
        used[y] |= 1 << x;
        flat[k] = (x as u8, y as u8);
        search(
            used,
            flat,
            k + 1,
            covered | (1 << x) | (1 << y),
            full,
            total,
            visit,
            count,
        );
        used[x] &= !(1 << y);
        used[y] &= !(1 << x);
    }
}

/// Run `visit` on every ordered one-factorisation extending the task's
/// prefix, in a fixed order, and return how many there were.
pub fn enumerate_factorisations<F>(task: &EnumerationTask, mut visit: F) -> Result<u64, Error>
where
    F: FnMut(FactorisationView<'_>),
{
    let mut s = prepare(task)?;
    let edges_per_round = s.edges_per_round;
    let mut count = 0;
    let mut inner = |flat: &[(u8, u8)]| {
        visit(FactorisationView {
            flat,
            edges_per_round,
        })
    };
    search(
        &mut s.used,
        &mut s.flat,
        s.start,
        s.full,
        s.full,
        s.total,
        &mut inner,
        &mut count,
    );
    Ok(count)
}

pub fn count_factorisations(task: &EnumerationTask) -> Result<u64, Error> {
    enumerate_factorisations(task, |_| {})
}

/// Materialise every factorisation of the task. Only sensible for the
/// small graphs this module targets.
pub fn collect_factorisations(task: &EnumerationTask) -> Result<Vec<Vec<OneFactor>>, Error> {
    let mut out = Vec::new();
    enumerate_factorisations(task, |view| out.push(view.to_factors()))?;
    Ok(out)
}

/// All perfect matchings of the complete graph, in enumeration order.
/// These are exactly the possible first rounds, hence the standard prefix
/// set for partitioned searches.
pub fn perfect_matchings(vertex_count: u32) -> Result<Vec<OneFactor>, Error> {
    let mut s = prepare(&EnumerationTask::new(vertex_count))?;
    let mut flat = vec![(0u8, 0u8); s.edges_per_round];
    let mut out = Vec::new();
    let mut count = 0;
    let epr = s.edges_per_round;
    let mut inner = |flat: &[(u8, u8)]| out.push(factors_from_flat(flat, epr).remove(0));
    search(
        &mut s.used,
        &mut flat,
        0,
        s.full,
        s.full,
        epr,
        &mut inner,
        &mut count,
    );
    Ok(out)
}

/// A valid ordered one-factorisation picked by seed-deterministic
/// randomised backtracking. Not uniformly distributed; good enough as
/// property-test fuel.
pub fn random_factorisation(vertex_count: u32, seed: u64) -> Result<Vec<OneFactor>, Error> {
    let mut s = prepare(&EnumerationTask::new(vertex_count))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    fn go(
        used: &mut [u64],
        flat: &mut [(u8, u8)],
        k: usize,
        covered: u64,
        full: u64,
        total: usize,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        if covered == full {
            if k == total {
                return true;
            }
            return go(used, flat, k, 0, full, total, rng);
        }
        let x = (!covered & full).trailing_zeros() as usize;
        let mut cand = !covered & full & !used[x] & !(1u64 << x);
        let mut ys = Vec::with_capacity(cand.count_ones() as usize);
        while cand != 0 {
            ys.push(cand.trailing_zeros() as usize);
            cand &= cand - 1;
        }
        ys.shuffle(rng);
        for y in ys {
            used[x] |= 1 << y;
            used[y] |= 1 << x;
            flat[k] = (x as u8, y as u8);
            if go(
                used,
                flat,
                k + 1,
                covered | (1 << x) | (1 << y),
                full,
                total,
                rng,
            ) {
                return true;
            }
            used[x] &= !(1 << y);
            used[y] &= !(1 << x);
        }
        false
    }

    let found = go(
        &mut s.used,
        &mut s.flat,
        0,
        s.full,
        s.full,
        s.total,
        &mut rng,
    );
    debug_assert!(found, "every complete graph on 2m vertices factorises");
    Ok(factors_from_flat(&s.flat, s.edges_per_round))
}

/// A random draw for one division, deterministic per seed.
pub fn random_draw(division: Division, n: u32, seed: u64) -> Result<Draw, Error> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    let rounds = random_factorisation(division.vertex_count(n), seed)?;
    Ok(Draw::new(n, division, rounds))
}

/// Outcome of an exhaustive search over all draw pairs.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub n: u32,
    pub mode: Mode,
    /// The certified optimum.
    pub maximum: u32,
    /// A pair of draws achieving it; deterministic (first maximiser in
    /// enumeration order, so lexicographically least).
    pub witness: (Draw, Draw),
    /// Completed division-two draws evaluated.
    pub states_explored: u64,
    /// Whether division one was pinned to a single canonical draw after
    /// verifying that relabelling acts transitively on its draws.
    pub symmetry_reduced: bool,
}

fn permutations(k: u8) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for v in 0..k {
        let mut grown = Vec::with_capacity(out.len() * (usize::from(v) + 1));
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, v);
                grown.push(q);
            }
        }
        out = grown;
    }
    out
}

fn relabel_factor(factor: &OneFactor, perm: &[u8]) -> OneFactor {
    OneFactor::new(
        factor
            .iter()
            .map(|f| {
                edge(
                    u32::from(perm[f.a().label() as usize]),
                    u32::from(perm[f.b().label() as usize]),
                )
            })
            .collect(),
    )
}

/// Check that relabelling the `2n` clubs acts transitively on the ordered
/// one-factorisations: the orbit of the first one must hit all of them.
fn relabelling_is_transitive(all: &[Vec<OneFactor>], vertex_count: u8) -> bool {
    let set: HashSet<&Vec<OneFactor>> = all.iter().collect();
    let base = &all[0];
    let mut images: HashSet<Vec<OneFactor>> = HashSet::new();
    for perm in permutations(vertex_count) {
        let image: Vec<OneFactor> = base.iter().map(|f| relabel_factor(f, &perm)).collect();
        if !set.contains(&image) {
            return false;
        }
        images.insert(image);
    }
    images.len() == all.len()
}

fn division_one_candidates(n: u32) -> Result<(Vec<Vec<OneFactor>>, bool), Error> {
    let mut all = collect_factorisations(&EnumerationTask::new(2 * n))?;
    if n >= 3 && relabelling_is_transitive(&all, 2 * n as u8) {
        let canonical = all.swap_remove(0);
        return Ok((vec![canonical], true));
    }
    Ok((all, false))
}

fn colour_table(rounds: &[OneFactor], vertex_count: u32) -> Vec<u8> {
    let vcu = vertex_count as usize;
    let mut table = vec![0u8; vcu * vcu];
    for (i, factor) in rounds.iter().enumerate() {
        for f in factor.iter() {
            let (a, b) = (f.a().label() as usize, f.b().label() as usize);
            table[a * vcu + b] = i as u8 + 1;
            table[b * vcu + a] = i as u8 + 1;
        }
    }
    table
}

struct PrefixOutcome {
    states: u64,
    best: Option<(u32, Vec<(u8, u8)>)>,
}

fn evaluate_prefix(
    matching: &OneFactor,
    n: u32,
    mode: Mode,
    col1: &[u8],
) -> Result<PrefixOutcome, Error> {
    let vc1 = 2 * n;
    let vc2 = 2 * n + 2;
    let epr = (vc2 / 2) as usize;
    let modulus = 2 * n - 1;
    let task = EnumerationTask::with_prefix(vc2, vec![matching.clone()]);
    let mut states = 0u64;
    let mut best: Option<(u32, Vec<(u8, u8)>)> = None;
    enumerate_factorisations(&task, |view| {
        states += 1;
        let mut common = 0u32;
        for (idx, &(x, y)) in view.edges().iter().enumerate() {
            if u32::from(y) < vc1 {
                let c1 = u32::from(col1[usize::from(x) * vc1 as usize + usize::from(y)]);
                if c1 != 0 {
                    let r = (idx / epr + 1) as u32;
                    // Mirrors the analysis module's date rule, including
                    // the n = 1 case where division two's last round has
                    // no division one date.
                    let hit = match mode {
                        Mode::Double => r <= 4 * n - 2 && r % modulus == c1 % modulus,
                        Mode::Single => r == c1,
                    };
                    if hit {
                        common += 1;
                    }
                }
            }
        }
        if best.as_ref().is_none_or(|(b, _)| common > *b) {
            best = Some((common, view.edges().to_vec()));
        }
    })?;
    Ok(PrefixOutcome { states, best })
}

fn run_prefixes(
    matchings: &[OneFactor],
    n: u32,
    mode: Mode,
    col1: &[u8],
    threads: usize,
) -> Result<Vec<PrefixOutcome>, Error> {
    if threads <= 1 {
        return matchings
            .iter()
            .map(|m| evaluate_prefix(m, n, mode, col1))
            .collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<PrefixOutcome, Error>>>> =
        matchings.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= matchings.len() {
                    break;
                }
                let outcome = evaluate_prefix(&matchings[i], n, mode, col1);
                *slots[i].lock().expect("no panics hold this lock") = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("no panics hold this lock")
                .expect("every prefix was evaluated")
        })
        .collect()
}

/// The true maximum number of common fixtures over *all* pairs of draws,
/// found by exhaustive search. Feasible for `n <= 3` only; for `n = 3`
/// division one is pinned to one canonical draw of `K_6` once the
/// relabelling symmetry justifying that is verified (if the verification
/// ever failed, the search would silently fall back to all division-one
/// draws, which is correct but infeasibly slow; `symmetry_reduced` on the
/// result records which path ran).
///
/// `jobs` bounds the worker threads; 0 means one per available core.
pub fn exhaustive_max_common(n: u32, mode: Mode, jobs: usize) -> Result<OracleResult, Error> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n > 3 {
        return Err(Error::OracleSize { n });
    }
    let (candidates, symmetry_reduced) = division_one_candidates(n)?;
    let matchings = perfect_matchings(2 * n + 2)?;
    let threads = if jobs == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        jobs
    }
    .min(matchings.len())
    .max(1);

    // Best so far: (count, division one draw, flat division two edges).
    type Best<'a> = (u32, &'a Vec<OneFactor>, Vec<(u8, u8)>);
    let mut best: Option<Best> = None;
    let mut states_explored = 0u64;
    for d1 in &candidates {
        let col1 = colour_table(d1, 2 * n);
        for outcome in run_prefixes(&matchings, n, mode, &col1, threads)? {
            states_explored += outcome.states;
            if let Some((count, flat)) = outcome.best {
                if best.as_ref().is_none_or(|(b, _, _)| count > *b) {
                    best = Some((count, d1, flat));
                }
            }
        }
    }
    let (maximum, d1, flat) = best.expect("complete graphs always admit draws");
    let epr = (n + 1) as usize;
    Ok(OracleResult {
        n,
        mode,
        maximum,
        witness: (
            Draw::new(n, Division::One, d1.clone()),
            Draw::new(n, Division::Two, factors_from_flat(&flat, epr)),
        ),
        states_explored,
        symmetry_reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{c_max, check_bound_lemmas, common_fixtures};

    #[test]
    fn k4_has_six_ordered_factorisations() {
        let task = EnumerationTask::new(4);
        assert_eq!(count_factorisations(&task).unwrap(), 6);
        // All six are orderings of the same unordered factorisation.
        let mut unordered = std::collections::BTreeSet::new();
        for f in collect_factorisations(&task).unwrap() {
            let mut sorted = f.clone();
            sorted.sort();
            unordered.insert(sorted);
        }
        assert_eq!(unordered.len(), 1);
    }

    #[test]
    fn k6_counts_match_the_classical_values() {
        let task = EnumerationTask::new(6);
        let all = collect_factorisations(&task).unwrap();
        assert_eq!(all.len(), 720);
        let mut unordered = std::collections::BTreeSet::new();
        for f in &all {
            let mut sorted = f.clone();
            sorted.sort();
            unordered.insert(sorted);
        }
        assert_eq!(unordered.len(), 6);
        // Every emission is a valid draw and no two are equal.
        let distinct: HashSet<&Vec<OneFactor>> = all.iter().collect();
        assert_eq!(distinct.len(), 720);
        for f in &all {
            let draw = Draw::new(3, Division::One, f.clone());
            assert!(draw.validate().is_empty());
        }
    }

    #[test]
    fn prefixes_partition_the_search() {
        let matchings = perfect_matchings(6).unwrap();
        assert_eq!(matchings.len(), 15);
        let mut sum = 0;
        for m in &matchings {
            sum += count_factorisations(&EnumerationTask::with_prefix(6, vec![m.clone()])).unwrap();
        }
        assert_eq!(sum, 720);
        assert_eq!(perfect_matchings(4).unwrap().len(), 3);
        assert_eq!(perfect_matchings(8).unwrap().len(), 105);
    }

    #[test]
    fn bad_prefixes_are_rejected() {
        let m = OneFactor::new(vec![edge(0, 1), edge(2, 3)]);
        let err =
            count_factorisations(&EnumerationTask::with_prefix(6, vec![m.clone(), m.clone()]));
        assert!(matches!(err, Err(Error::BadPrefix { .. })));
        let short = OneFactor::new(vec![edge(0, 1)]);
        assert!(matches!(
            count_factorisations(&EnumerationTask::with_prefix(6, vec![short])),
            Err(Error::BadPrefix { .. })
        ));
        assert!(matches!(
            count_factorisations(&EnumerationTask::new(5)),
            Err(Error::BadVertexCount { vertex_count: 5 })
        ));
        assert!(matches!(
            count_factorisations(&EnumerationTask::new(66)),
            Err(Error::TooManyVertices { vertex_count: 66 })
        ));
    }

    #[test]
    fn random_draws_are_valid_and_seed_deterministic() {
        for seed in 0..20 {
            for vc in [4u32, 6, 8, 12] {
                let f = random_factorisation(vc, seed).unwrap();
                assert_eq!(f.len(), vc as usize - 1);
                let n = vc / 2;
                let draw = Draw::new(n, Division::One, f.clone());
                assert!(draw.validate().is_empty(), "vc={vc} seed={seed}");
            }
        }
        assert_eq!(
            random_factorisation(6, 0).unwrap(),
            random_factorisation(6, 0).unwrap()
        );
        let d = random_draw(Division::Two, 2, 7).unwrap();
        assert_eq!(d.division(), Division::Two);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn different_seeds_eventually_differ() {
        let baseline = random_factorisation(8, 0).unwrap();
        assert!((1..50).any(|seed| random_factorisation(8, seed).unwrap() != baseline));
    }

    #[test]
    fn oracle_confirms_the_degenerate_case() {
        for mode in [Mode::Double, Mode::Single] {
            let result = exhaustive_max_common(1, mode, 1).unwrap();
            assert_eq!(result.maximum, 1);
            assert!(!result.symmetry_reduced);
            let (w1, w2) = &result.witness;
            assert!(w1.validate().is_empty());
            assert!(w2.validate().is_empty());
            let report = common_fixtures(w1, w2, mode).unwrap();
            assert_eq!(report.total, 1);
        }
    }

    #[test]
    fn oracle_confirms_n2_in_both_modes() {
        let double = exhaustive_max_common(2, Mode::Double, 2).unwrap();
        assert_eq!(double.maximum, 6);
        assert_eq!(double.maximum, c_max(2, Mode::Double).unwrap());
        // Six division-one draws, each against all 720 of K_6.
        assert_eq!(double.states_explored, 6 * 720);
        let (w1, w2) = &double.witness;
        assert!(w1.validate().is_empty() && w2.validate().is_empty());
        let report = common_fixtures(w1, w2, Mode::Double).unwrap();
        assert_eq!(report.total, 6);
        assert!(check_bound_lemmas(&report).is_empty());

        let single = exhaustive_max_common(2, Mode::Single, 2).unwrap();
        assert_eq!(single.maximum, 4);
        assert_eq!(single.maximum, c_max(2, Mode::Single).unwrap());
    }

    #[test]
    fn oracle_results_do_not_depend_on_thread_count() {
        let a = exhaustive_max_common(2, Mode::Double, 1).unwrap();
        let b = exhaustive_max_common(2, Mode::Double, 3).unwrap();
        assert_eq!(a.maximum, b.maximum);
        assert_eq!(a.states_explored, b.states_explored);
        assert_eq!(a.witness.0, b.witness.0);
        assert_eq!(a.witness.1, b.witness.1);
    }

    #[test]
    fn oracle_rejects_infeasible_sizes() {
        assert!(matches!(
            exhaustive_max_common(4, Mode::Double, 1),
            Err(Error::OracleSize { n: 4 })
        ));
        assert!(exhaustive_max_common(0, Mode::Double, 1).is_err());
    }

    #[test]
    fn relabelling_orbit_machinery_works_on_k4() {
        let all = collect_factorisations(&EnumerationTask::new(4)).unwrap();
        assert!(relabelling_is_transitive(&all, 4));
        assert_eq!(permutations(4).len(), 24);
    }
}
