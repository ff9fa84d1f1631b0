mod common;

use mms_chores::{optimal_makespan, schedule_119, schedule_lpt, OracleLimits};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn both_schedulers_meet_their_bounds(
        jobs in proptest::collection::vec(0u64..=60, 0..=12),
        machines in 1usize..=5,
    ) {
        let opt = optimal_makespan(&jobs, machines, &OracleLimits::default()).unwrap();
        if jobs.len() <= 7 {
            prop_assert_eq!(opt, common::brute_force_makespan(&jobs, machines));
        }

        let greedy = schedule_119(&jobs, machines).unwrap();
        greedy.machines.validate(machines, jobs.len()).unwrap();
        prop_assert!(greedy.machines.is_complete());
        prop_assert!(9 * greedy.makespan <= 11 * opt);
        prop_assert!(greedy.makespan <= greedy.threshold.unwrap());
        prop_assert!(greedy.threshold.unwrap() * 9 <= 11 * opt);

        let lpt = schedule_lpt(&jobs, machines).unwrap();
        lpt.machines.validate(machines, jobs.len()).unwrap();
        prop_assert!(3 * lpt.makespan <= 4 * opt);
        prop_assert_eq!(lpt.loads.iter().sum::<u64>(), jobs.iter().sum::<u64>());
    }
}

#[test]
fn non_monotone_workload() {
    let values = mms_chores::cli::fixtures::NON_MONOTONE_VALUES;
    let s = schedule_119(&values, 4).unwrap();
    assert!(s.threshold.unwrap() <= 184);
    assert!(9 * s.makespan <= 11 * 150);
    // the first passing threshold above the lower bound is the lower bound itself
    assert_eq!(s.threshold, Some(150));
}

#[test]
fn small_workload_regression() {
    let s = schedule_119(&[3, 3, 2, 2, 2], 2).unwrap();
    assert_eq!(s.threshold, Some(6));
    assert_eq!(s.makespan, 6);
    assert_eq!(s.loads, vec![6, 6]);
    assert_eq!(schedule_lpt(&[3, 3, 2, 2, 2], 2).unwrap().makespan, 7);
}
