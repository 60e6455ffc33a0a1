//! Model variant selection.

use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;

/// Which de-preferential attachment rule drives the growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ModelVariant {
    /// Attachment probability `(1/(n-1)) * (1 - d_j / (k + m(2n-1)))`.
    Linear,
    /// Attachment probability proportional to `1/d_j`.
    Inverse,
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelVariant::Linear => write!(f, "linear"),
            ModelVariant::Inverse => write!(f, "inverse"),
        }
    }
}

impl FromStr for ModelVariant {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(ModelVariant::Linear),
            "inverse" => Ok(ModelVariant::Inverse),
            other => Err(CoreError::InvalidParameter(format!(
                "unknown model variant '{other}' (expected 'linear' or 'inverse')"
            ))),
        }
    }
}
