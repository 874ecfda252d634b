mod common;

use proptest::test_runner::Config;
use repnet::estimation::image_update;

use common::invariants;

fn cases() -> Config {
    Config::with_cases(1000)
}

#[test]
fn transition_rows_are_distributions() {
    invariants::transition_rows_are_distributions(&cases()).unwrap();
}

#[test]
fn objective_transitions_ignore_reputation() {
    invariants::objective_transitions_ignore_reputation(&cases()).unwrap();
}

#[test]
fn subjective_probability_is_continuous() {
    invariants::subjective_probability_is_continuous(&cases()).unwrap();
}

#[test]
fn image_update_is_monotone_and_bounded() {
    invariants::image_update_is_monotone_and_bounded(&cases()).unwrap();
}

#[test]
fn reputation_is_bounded() {
    invariants::reputation_is_bounded(&cases()).unwrap();
}

#[test]
fn image_estimate_pins_diagonal_and_stays_bounded() {
    invariants::image_estimate_pins_diagonal_and_stays_bounded(&cases()).unwrap();
}

#[test]
fn estimation_is_pure() {
    invariants::estimation_is_pure(&cases()).unwrap();
}

#[test]
fn smoothed_estimate_rows_are_positive_distributions() {
    invariants::smoothed_estimate_rows_are_positive_distributions(&cases()).unwrap();
}

#[test]
fn unsmoothed_estimate_matches_bayes_rule() {
    invariants::unsmoothed_estimate_matches_bayes_rule(&cases()).unwrap();
}

#[test]
fn root_value_is_bounded() {
    invariants::root_value_is_bounded(&cases()).unwrap();
}

#[test]
fn planner_matches_oracle() {
    invariants::planner_matches_oracle(&cases()).unwrap();
}

#[test]
fn planning_is_deterministic() {
    invariants::planning_is_deterministic(&cases()).unwrap();
}

#[test]
fn root_self_impact_shift_keeps_argmax() {
    invariants::root_self_impact_shift_keeps_argmax(&cases()).unwrap();
}

#[test]
fn value_grows_with_discount_for_nonnegative_impacts() {
    invariants::value_grows_with_discount_for_nonnegative_impacts(&cases()).unwrap();
}

#[test]
fn episodes_conserve_probability() {
    invariants::episodes_conserve_probability(&cases()).unwrap();
}

#[test]
fn image_update_grid() {
    // 21 x 21 grid over [-1, 1] in steps of 0.1
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 / 10.0 - 1.0).collect();
    for &v in &grid {
        for &i in &grid {
            let expected = if i >= 0.0 {
                v + (1.0 - v) * i
            } else {
                v + (1.0 + v) * i
            };
            assert_eq!(image_update(v, i), expected, "v={v} i={i}");
            if i >= 0.0 {
                assert!(image_update(v, i) >= v);
            } else {
                assert!(image_update(v, i) <= v);
            }
        }
    }
}
