use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Level rule of a constructed sequence. Only `sqrt(j)` levels exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LevelRule {
    #[default]
    #[serde(rename = "sqrt_j")]
    SqrtJ,
}

/// The rescaling sequence `g_n`, positive and nondecreasing for `n >= 1`.
///
/// * `PowerLog { eps, beta }`: `g_n = n^eps * ln(n + 1)^beta`.
/// * `Tabulated { values }`: `g_n = values[n - 1]`, holding the last value
///   past the end of the table.
/// * `Constructed { breakpoints }`: breakpoints `n_1 < n_2 < ... < n_J`
///   (with `n_0 = 1` implicit) and `g_n = sqrt(j)` on `[n_{j-1}, n_j)`.
///   Past `n_J` the level stays at `sqrt(J)`.
/// * `Constant { value }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", try_from = "GrowthRepr", into = "GrowthRepr")]
pub enum GrowthSequence {
    PowerLog { eps: f64, beta: f64 },
    Tabulated { values: Vec<f64> },
    Constructed { breakpoints: Vec<u64>, levels: LevelRule },
    Constant { value: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum GrowthRepr {
    PowerLog {
        eps: f64,
        #[serde(default)]
        beta: f64,
    },
    Tabulated {
        values: Vec<f64>,
    },
    Constructed {
        breakpoints: Vec<u64>,
        #[serde(default)]
        levels: LevelRule,
    },
    Constant {
        value: f64,
    },
}

impl TryFrom<GrowthRepr> for GrowthSequence {
    type Error = Error;

    fn try_from(r: GrowthRepr) -> Result<Self> {
        let g = match r {
            GrowthRepr::PowerLog { eps, beta } => Self::PowerLog { eps, beta },
            GrowthRepr::Tabulated { values } => Self::Tabulated { values },
            GrowthRepr::Constructed { breakpoints, levels } => Self::Constructed { breakpoints, levels },
            GrowthRepr::Constant { value } => Self::Constant { value },
        };
        g.validate()?;
        Ok(g)
    }
}

impl From<GrowthSequence> for GrowthRepr {
    fn from(g: GrowthSequence) -> Self {
        match g {
            GrowthSequence::PowerLog { eps, beta } => Self::PowerLog { eps, beta },
            GrowthSequence::Tabulated { values } => Self::Tabulated { values },
            GrowthSequence::Constructed { breakpoints, levels } => Self::Constructed { breakpoints, levels },
            GrowthSequence::Constant { value } => Self::Constant { value },
        }
    }
}

/// Limit of `g_n` as `n -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Finite(f64),
    Infinite,
}

impl GrowthSequence {
    pub fn power_log(eps: f64, beta: f64) -> Result<Self> {
        let g = Self::PowerLog { eps, beta };
        g.validate()?;
        Ok(g)
    }

    /// `g_n = n^eps`.
    pub fn power(eps: f64) -> Result<Self> {
        Self::power_log(eps, 0.0)
    }

    pub fn constant(value: f64) -> Result<Self> {
        let g = Self::Constant { value };
        g.validate()?;
        Ok(g)
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        let g = Self::Tabulated { values };
        g.validate()?;
        Ok(g)
    }

    pub fn constructed(breakpoints: Vec<u64>) -> Result<Self> {
        let g = Self::Constructed { breakpoints, levels: LevelRule::SqrtJ };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PowerLog { eps, beta } => {
                if !(eps.is_finite() && *eps >= 0.0 && beta.is_finite() && *beta >= 0.0) {
                    return Err(invalid(format!("power-log growth needs eps >= 0 and beta >= 0, got ({eps}, {beta})")));
                }
            }
            Self::Tabulated { values } => {
                if values.is_empty() {
                    return Err(invalid("tabulated growth needs at least one value"));
                }
                if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(invalid("tabulated growth values must be positive and finite"));
                }
                if let Some(w) = values.windows(2).position(|w| w[1] < w[0]) {
                    return Err(invalid(format!("tabulated growth decreases at n = {}", w + 2)));
                }
            }
            Self::Constructed { breakpoints, .. } => {
                if breakpoints.first().is_some_and(|&b| b <= 1) {
                    return Err(invalid("constructed breakpoints must start above n_0 = 1"));
                }
                if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("constructed breakpoints must be strictly increasing"));
                }
            }
            Self::Constant { value } => {
                if !(value.is_finite() && *value > 0.0) {
                    return Err(invalid(format!("constant growth must be positive, got {value}")));
                }
            }
        }
        Ok(())
    }

    /// `g_n` for `n >= 1`.
    pub fn value(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match self {
            Self::PowerLog { eps, beta } => {
                let nf = n as f64;
                let mut g = if *eps == 0.0 { 1.0 } else { nf.powf(*eps) };
                if *beta != 0.0 {
                    g *= (nf + 1.0).ln().powf(*beta);
                }
                g
            }
            Self::Tabulated { values } => {
                let i = (n as usize).saturating_sub(1).min(values.len() - 1);
                values[i]
            }
            Self::Constructed { breakpoints, .. } => {
                let levels = breakpoints.len().max(1);
                let passed = breakpoints.partition_point(|&b| b <= n);
                ((1 + passed).min(levels) as f64).sqrt()
            }
            Self::Constant { value } => *value,
        }
    }

    /// Writes `g_start, g_{start+1}, ...` into `out`.
    pub fn fill(&self, start: u64, out: &mut [f64]) {
        match self {
            Self::Constant { value } => out.fill(*value),
            Self::PowerLog { eps, beta } if *eps == 0.0 && *beta == 0.0 => out.fill(1.0),
            _ => {
                for (k, v) in out.iter_mut().enumerate() {
                    *v = self.value(start + k as u64);
                }
            }
        }
    }

    pub fn limit(&self) -> Limit {
        match self {
            Self::PowerLog { eps, beta } if *eps > 0.0 || *beta > 0.0 => Limit::Infinite,
            Self::PowerLog { .. } => Limit::Finite(1.0),
            Self::Tabulated { values } => Limit::Finite(*values.last().expect("validated")),
            Self::Constructed { breakpoints, .. } => Limit::Finite((breakpoints.len().max(1) as f64).sqrt()),
            Self::Constant { value } => Limit::Finite(*value),
        }
    }
}
