//! Randomised invariants. Each property restates a claim the unit tests
//! pin at specific sizes and lets proptest hunt for counterexamples.

use proptest::prelude::*;

use tandem_core::{
    build_schedule, c_max, check_bound_lemmas, check_common_orientation, common_fixtures,
    document_from_schedule, random_draw, schedule_from_document, Division, Fixture, Mode, Rotation,
    ScheduleDocument, Vertex,
};

fn modes() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Double), Just(Mode::Single)]
}

proptest! {
    #[test]
    fn fixtures_ignore_endpoint_order(a in 0u32..200, b in 0u32..200) {
        prop_assume!(a != b);
        let (va, vb) = (Vertex::new(a), Vertex::new(b));
        let f = Fixture::new(va, vb).unwrap();
        let g = Fixture::new(vb, va).unwrap();
        prop_assert_eq!(f, g);
        prop_assert!(f.a().label() < f.b().label());
    }

    #[test]
    fn rotations_compose_additively(n in 2u32..40, i in -200i64..200, j in -200i64..200, x in 0u32..80) {
        let m = 2 * n - 2;
        prop_assume!(x < m);
        let one = Rotation::new(n, i);
        let two = Rotation::new(n, j);
        let both = Rotation::new(n, i + j);
        let v = tandem_core::Vertex::new(x);
        prop_assert_eq!(two.apply(one.apply(v)), both.apply(v));
    }

    #[test]
    fn rotations_have_period_2n_minus_2(n in 2u32..40, i in -200i64..200, x in 0u32..80) {
        prop_assume!(x < 2 * n + 2);
        let v = tandem_core::Vertex::new(x);
        let full = Rotation::new(n, i + 2 * (i64::from(n) - 1));
        prop_assert_eq!(Rotation::new(n, i).apply(v), full.apply(v));
    }

    #[test]
    fn random_draws_are_proper(n in 1u32..=8, seed in any::<u64>()) {
        for division in [Division::One, Division::Two] {
            let draw = random_draw(division, n, seed).unwrap();
            prop_assert!(draw.validate().is_empty());
        }
    }

    #[test]
    fn bound_lemmas_are_theorems(n in 2u32..=6, seed in any::<u64>(), mode in modes()) {
        let d1 = random_draw(Division::One, n, seed).unwrap();
        let d2 = random_draw(Division::Two, n, seed.wrapping_add(1)).unwrap();
        let report = common_fixtures(&d1, &d2, mode).unwrap();
        prop_assert!(check_bound_lemmas(&report).is_empty());
        prop_assert_eq!(report.per_round_counts.iter().sum::<u32>(), report.total);
        prop_assert!(report.total <= c_max(n, mode).unwrap());
        for (r, f) in &report.fixtures {
            prop_assert!((1..=2 * n + 1).contains(r));
            prop_assert!(f.within(2 * n));
        }
    }

    #[test]
    fn built_schedules_hit_the_optimum(n in 1u32..=24, mode in modes()) {
        let schedule = build_schedule(n, mode).unwrap();
        prop_assert!(schedule.validate().is_empty());
        prop_assert!(check_common_orientation(&schedule).is_empty());
        let report = common_fixtures(
            &schedule.draw(Division::One),
            &schedule.draw(Division::Two),
            mode,
        ).unwrap();
        prop_assert_eq!(report.total, c_max(n, mode).unwrap());
    }

    #[test]
    fn documents_round_trip(n in 1u32..=12, mode in modes()) {
        let schedule = build_schedule(n, mode).unwrap();
        let doc = document_from_schedule(&schedule).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ScheduleDocument = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(schedule_from_document(&parsed).unwrap(), schedule);
    }
}
