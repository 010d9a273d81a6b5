//! JSON scenario files consumed by the CLI. Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cpmm::{ArbOpportunity, PoolState, SizingRule};
use crate::engine::{ExternalPrice, FailureModel};
use crate::error::{ModelError, Result};
use crate::monte_carlo::McConfig;
use crate::stable::{FeeMode, GasCostModel, StableParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub pools: PoolsSpec,
    #[serde(default)]
    pub sizing_rule: SizingRule,
    pub failure: FailureSpec,
    pub p_ext: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable: Option<StableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolsSpec {
    pub x_a: f64,
    pub y_a: f64,
    pub x_b: f64,
    pub y_b: f64,
    pub fee: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureSpec {
    pub f_a: f64,
    pub f_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableSpec {
    pub p_y: f64,
    pub f_stable: f64,
    #[serde(default)]
    pub fee_mode: FeeMode,
    #[serde(default)]
    pub gas: GasSpec,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSpec {
    #[serde(default)]
    pub a_success: f64,
    #[serde(default)]
    pub a_fail: f64,
    #[serde(default)]
    pub b_success: f64,
    #[serde(default)]
    pub b_fail: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSpec {
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text)
            .map_err(|e| ModelError::invalid(format!("malformed scenario: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            ModelError::InvalidInput(msg) => {
                ModelError::invalid(format!("{}: {msg}", path.display()))
            }
            other => other,
        })
    }

    /// Builds every typed value once so that invariant violations surface at load time.
    pub fn validate(&self) -> Result<()> {
        self.opportunity()?;
        self.failure_model()?;
        self.external_price()?;
        if self.stable.is_some() {
            self.stable_params()?;
            self.gas_costs()?;
        }
        if let Some(mc) = &self.monte_carlo {
            McConfig::new(mc.samples, mc.seed)?;
        }
        Ok(())
    }

    pub fn opportunity(&self) -> Result<ArbOpportunity> {
        let p = &self.pools;
        ArbOpportunity::new(
            PoolState::new(p.x_a, p.y_a, p.fee)?,
            PoolState::new(p.x_b, p.y_b, p.fee)?,
        )
    }

    pub fn failure_model(&self) -> Result<FailureModel> {
        FailureModel::new(self.failure.f_a, self.failure.f_b)
    }

    pub fn external_price(&self) -> Result<ExternalPrice> {
        ExternalPrice::new(self.p_ext)
    }

    fn stable_spec(&self) -> Result<&StableSpec> {
        self.stable
            .as_ref()
            .ok_or_else(|| ModelError::invalid("scenario has no \"stable\" section"))
    }

    pub fn stable_params(&self) -> Result<StableParams> {
        let s = self.stable_spec()?;
        StableParams::new(s.p_y, s.f_stable, s.fee_mode)
    }

    pub fn gas_costs(&self) -> Result<GasCostModel> {
        let g = self.stable_spec()?.gas;
        GasCostModel::new(g.a_success, g.a_fail, g.b_success, g.b_fail)
    }
}
