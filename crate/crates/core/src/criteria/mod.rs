//! Series criteria for `K(gS)`: exact and numeric classification of
//! `sum 1/(a_n g_n)`, the accumulation-set prediction, the
//! `sum P(g_n |S_n| < M)` dichotomy and the Kochen–Stone bound.

mod dichotomy;
mod kochen_stone;
mod predict;
mod series;

pub use dichotomy::{dichotomy_probe, theorem1_classify, DichotomyReport, EstimatorConfig, RecurrenceVerdict};
pub use kochen_stone::{check_correlation_condition, kochen_stone_lower_bound, CorrelationCheck};
pub use predict::{predict_k, KPrediction, PredictedSet, RefusalTag, NUMERIC_HORIZON};
pub use series::{
    classify_exponent, series_verdict_numeric, series_verdict_power, Method, SeriesVerdict, Verdict, FIT_POINTS,
    HARMONIC_RATIO, SE_FLOOR,
};
