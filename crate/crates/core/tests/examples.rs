//! Runs every example so that none of them rots.

#[path = "../examples/batch_config.rs"]
mod batch_config;
#[path = "../examples/construct_growth.rs"]
mod construct_growth;
#[path = "../examples/four_point_returns.rs"]
mod four_point_returns;
#[path = "../examples/kochen_stone.rs"]
mod kochen_stone;
#[path = "../examples/llt_sandwich.rs"]
mod llt_sandwich;
#[path = "../examples/sample_and_charfn.rs"]
mod sample_and_charfn;
#[path = "../examples/series_criteria.rs"]
mod series_criteria;
#[path = "../examples/series_dichotomy.rs"]
mod series_dichotomy;
#[path = "../examples/simulate_threshold.rs"]
mod simulate_threshold;
#[path = "../examples/small_ball.rs"]
mod small_ball;
#[path = "../examples/window_dominance.rs"]
mod window_dominance;

#[test]
fn batch_config_runs() {
    batch_config::run_example().unwrap();
}

#[test]
fn construct_growth_runs() {
    construct_growth::run_example().unwrap();
}

#[test]
fn window_dominance_runs() {
    window_dominance::run_example().unwrap();
}

#[test]
fn kochen_stone_runs() {
    kochen_stone::run_example().unwrap();
}

#[test]
fn llt_sandwich_runs() {
    llt_sandwich::run_example().unwrap();
}

#[test]
fn four_point_returns_runs() {
    four_point_returns::run_example().unwrap();
}

#[test]
fn sample_and_charfn_runs() {
    sample_and_charfn::run_example().unwrap();
}

#[test]
fn series_criteria_runs() {
    series_criteria::run_example().unwrap();
}

#[test]
fn simulate_threshold_runs() {
    simulate_threshold::run_example().unwrap();
}

#[test]
fn small_ball_runs() {
    small_ball::run_example().unwrap();
}

#[test]
fn series_dichotomy_runs() {
    series_dichotomy::run_example().unwrap();
}
