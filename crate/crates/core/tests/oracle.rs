mod common;

use common::{brute_force_makespan, max_load_under, pigeonhole_bound};
use mms_chores::oracle::makespan_lower_bound;
use mms_chores::{exact_mms, mms_profile, optimal_makespan, Instance, OracleLimits};
use proptest::prelude::*;

#[test]
fn brute_force_agrees_on_hand_cases() {
    assert_eq!(brute_force_makespan(&[3, 3, 2, 2, 2], 2), 6);
    assert_eq!(brute_force_makespan(&[5, 4, 3], 1), 12);
    assert_eq!(brute_force_makespan(&[5, 4, 3], 3), 5);
    assert_eq!(brute_force_makespan(&[], 3), 0);
}

#[test]
fn trial_fixture_profile() {
    let f = mms_chores::cli::fixtures::fixture_by_name("trial-fails").unwrap();
    let profile = mms_profile(&f.instance, &OracleLimits::default()).unwrap();
    assert_eq!(profile.values, vec![450; 4]);
    for (agent, w) in profile.witnesses.unwrap().iter().enumerate() {
        assert_eq!(max_load_under(&f.instance, agent, w), 450);
    }
}

#[test]
fn lower_bound_matches_pigeonhole() {
    for values in [
        vec![],
        vec![0, 0],
        vec![7],
        vec![9, 1, 1, 1],
        vec![3, 3, 3, 3, 3],
    ] {
        for bins in 1..5 {
            assert_eq!(
                makespan_lower_bound(&values, bins),
                pigeonhole_bound(&values, bins)
            );
        }
    }
}

fn small_instance() -> impl Strategy<Value = Instance> {
    (1usize..=4, 0usize..=8).prop_flat_map(|(n, m)| {
        proptest::collection::vec(proptest::collection::vec(0u64..=30, m), n)
            .prop_map(|rows| Instance::new(rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_matches_enumeration(inst in small_instance()) {
        let limits = OracleLimits::default();
        for agent in 0..inst.num_agents() {
            let (mms, witness) = exact_mms(&inst, agent, &limits).unwrap();
            prop_assert_eq!(mms, brute_force_makespan(inst.row(agent), inst.num_agents()));
            witness.validate(inst.num_agents(), inst.num_chores()).unwrap();
            prop_assert!(witness.is_complete());
            prop_assert_eq!(max_load_under(&inst, agent, &witness), mms);
        }
    }

    #[test]
    fn pigeonhole_sandwich(inst in small_instance()) {
        let profile = mms_profile(&inst, &OracleLimits::default()).unwrap();
        for (agent, &mms) in profile.values.iter().enumerate() {
            let l = pigeonhole_bound(inst.row(agent), inst.num_agents());
            prop_assert!(l <= mms && mms <= 2 * l);
        }
    }

    #[test]
    fn scaling_a_row_scales_the_share(
        values in proptest::collection::vec(0u64..=40, 0..=10),
        machines in 1usize..=4,
        factor in 1u64..=7,
    ) {
        let limits = OracleLimits::default();
        let base = optimal_makespan(&values, machines, &limits).unwrap();
        let scaled: Vec<u64> = values.iter().map(|v| v * factor).collect();
        prop_assert_eq!(optimal_makespan(&scaled, machines, &limits).unwrap(), factor * base);
    }

    #[test]
    fn trivial_machine_counts(values in proptest::collection::vec(0u64..=40, 1..=10)) {
        let limits = OracleLimits::default();
        let total: u64 = values.iter().sum();
        let max = *values.iter().max().unwrap();
        prop_assert_eq!(optimal_makespan(&values, 1, &limits).unwrap(), total);
        prop_assert_eq!(optimal_makespan(&values, values.len(), &limits).unwrap(), max);
    }
}

#[test]
fn default_limits_handle_the_largest_chore_count() {
    let mut rng = common::rng(99);
    use rand::Rng;
    let values: Vec<u64> = (0..24).map(|_| rng.gen_range(1..=1000)).collect();
    let inst = Instance::identical(&values, 5).unwrap();
    let (mms, witness) = exact_mms(&inst, 0, &OracleLimits::default()).unwrap();
    assert_eq!(max_load_under(&inst, 0, &witness), mms);
    assert!(mms >= pigeonhole_bound(&values, 5));
}
