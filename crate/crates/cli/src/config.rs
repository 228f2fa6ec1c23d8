//! Run configuration: CLI flags and the JSON config file share these keys.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ThetaSpec {
    /// θ = e^{if} for a real angle f.
    Angle(f64),
    /// θ = ζ_n^k, verified with exact cyclotomic arithmetic.
    Exact { k: i64, n: u32 },
}

impl ThetaSpec {
    /// Parses `"0.7"` or `"exact:2/7"` (meaning ζ₇²).
    pub fn parse(s: &str) -> Result<Self, String> {
        if let Some(rest) = s.strip_prefix("exact:") {
            let (k, n) = rest
                .split_once('/')
                .ok_or_else(|| format!("expected exact:k/n, got `{s}`"))?;
            let k: i64 = k.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let n: u32 = n.trim().parse().map_err(|_| format!("bad order in `{s}`"))?;
            if n == 0 {
                return Err(format!("order must be positive in `{s}`"));
            }
            Ok(ThetaSpec::Exact { k, n })
        } else {
            s.trim()
                .parse::<f64>()
                .map(ThetaSpec::Angle)
                .map_err(|_| format!("cannot parse θ spec `{s}`"))
        }
    }

    pub fn label(&self) -> String {
        match self {
            ThetaSpec::Angle(f) => format!("{f:.4}"),
            ThetaSpec::Exact { k, n } => format!("zeta{n}^{k}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// θ samples for the representation and spectral suites.
    pub thetas: Vec<ThetaSpec>,
    /// Flat-family parameter.
    pub family_parameter: f64,
    /// Mode truncation radius for spectral assembly.
    pub modes: i64,
    /// Cutoff scale for the tube charts.
    pub kappa: f64,
    /// Random ζ samples for the genericity cross-check.
    pub genericity_samples: usize,
    /// Random sections for the non-tangency pairing.
    pub tangency_samples: usize,
    /// RNG seed, echoed in the report.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            thetas: vec![ThetaSpec::Angle(0.7)],
            family_parameter: 0.7,
            modes: 1,
            kappa: 0.25,
            genericity_samples: 1000,
            tangency_samples: 5,
            seed: 0,
        }
    }
}
