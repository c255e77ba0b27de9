use serde::{Deserialize, Serialize};

use super::series::{series_verdict_numeric, series_verdict_power, SeriesVerdict, Verdict};
use crate::distributions::DistributionSpec;
use crate::error::Result;
use crate::walk_engine::{GrowthSequence, Limit, Normalizer};

/// Horizon used when the criterion series has to be classified numerically.
pub const NUMERIC_HORIZON: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefusalTag {
    /// The step law violates Cramer's condition, outside the scope of the series criteria.
    CramerFails,
}

/// Predicted accumulation set of `g_n S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum PredictedSet {
    /// `{-inf, +inf}`.
    OnlyInfinities,
    /// The extended real line.
    FullExtendedLine,
    /// `{0} u {k h lim g : k != 0}`.
    LatticeSet {
        span: f64,
        lim_g: Limit,
    },
    /// The walk itself is transient, so `|g_n S_n| -> infinity`.
    TransientAlphaLessOne,
    Refused {
        tag: RefusalTag,
    },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KPrediction {
    pub set: PredictedSet,
    pub rationale: String,
    pub series: Option<SeriesVerdict>,
}

/// Predicts `K(gS)` for a built-in step law.
pub fn predict_k(spec: &DistributionSpec, growth: &GrowthSequence) -> Result<KPrediction> {
    spec.validate()?;
    growth.validate()?;
    match *spec {
        DistributionSpec::SimpleLattice { span_h } => Ok(KPrediction {
            set: PredictedSet::LatticeSet { span: span_h, lim_g: growth.limit() },
            rationale: "recurrent lattice walk: P(S_n = kh i.o.) = 1 for every k".into(),
            series: None,
        }),
        DistributionSpec::FourPoint { a_param } => Ok(KPrediction {
            set: PredictedSet::Refused { tag: RefusalTag::CramerFails },
            rationale: format!(
                "limsup |phi(t)| = 1 along t = 2 pi k for a = {a_param}; the series test does not apply and, \
                 e.g. for g_n = n, lim n |S_n| = +inf is false because P(S_2n = 0) ~ 1/(pi n) is not summable"
            ),
            series: None,
        }),
        DistributionSpec::SymmetricStable { alpha, .. } if alpha < 1.0 => Ok(KPrediction {
            set: PredictedSet::TransientAlphaLessOne,
            rationale: format!("alpha = {alpha} < 1: sum 1/a_n converges and the walk is transient"),
            series: None,
        }),
        DistributionSpec::SymmetricStable { alpha, .. } => {
            let series = match growth {
                GrowthSequence::PowerLog { .. } => series_verdict_power(alpha, growth)?,
                _ => {
                    let norm = Normalizer::for_spec(spec);
                    series_verdict_numeric(|n| 1.0 / (norm.a(n) * growth.value(n)), NUMERIC_HORIZON)
                }
            };
            let (set, rationale) = match series.verdict {
                Verdict::Converges => (PredictedSet::OnlyInfinities, "sum 1/(a_n g_n) converges"),
                Verdict::Diverges => (PredictedSet::FullExtendedLine, "sum 1/(a_n g_n) diverges"),
                Verdict::Undetermined => (PredictedSet::Undetermined, "sum 1/(a_n g_n) could not be classified"),
            };
            Ok(KPrediction { set, rationale: rationale.into(), series: Some(series) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_growth_on_gaussian_is_full_line() {
        let p = predict_k(&DistributionSpec::gaussian(), &GrowthSequence::tabulated(vec![1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(p.set, PredictedSet::FullExtendedLine);
    }

    #[test]
    fn lattice_limits() {
        let lat = DistributionSpec::simple_lattice(0.5).unwrap();
        let p = predict_k(&lat, &GrowthSequence::constant(3.0).unwrap()).unwrap();
        assert_eq!(p.set, PredictedSet::LatticeSet { span: 0.5, lim_g: Limit::Finite(3.0) });
        let p = predict_k(&lat, &GrowthSequence::power(0.1).unwrap()).unwrap();
        assert_eq!(p.set, PredictedSet::LatticeSet { span: 0.5, lim_g: Limit::Infinite });
    }
}
