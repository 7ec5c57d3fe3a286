//! The fridge and wiring model shared by the heat-flow, noise, and budget code:
//! ordered temperature stages, and the per-line wiring description.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::calibration::ResponseCoefficients;
use crate::constants::ROOM_TEMPERATURE_K;
use crate::error::{CryoError, Result};

/// One temperature-controlled plate of the dilution refrigerator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub name: String,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    /// Available cooling power at the vendor reference temperature, W.
    #[serde(rename = "cooling_power_W")]
    pub cooling_power_w: f64,
    /// Cable run from the stage above (or room temperature), m.
    pub cable_length_above_m: f64,
}

/// Stage chain plus the Still-flow cooling model for the mixing chamber.
#[derive(Debug, Clone)]
pub struct FridgeModel {
    /// Ordered warm to cold; room temperature is an implicit boundary above.
    pub stages: Vec<Stage>,
    pub room_temperature_k: f64,
    /// He3 circulation rate, mol/s.
    pub still_flow_mol_per_s: f64,
    /// kappa in P_MXC = kappa * ndot3 * T^2, W s / (mol K^2).
    pub mxc_cooling_coefficient: f64,
    pub response: Option<ResponseCoefficients>,
}

impl FridgeModel {
    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(CryoError::Config("fridge has no stages".into()));
        }
        let mut prev = self.room_temperature_k;
        for s in &self.stages {
            if s.temperature_k >= prev {
                return Err(CryoError::Config(format!(
                    "stage `{}`: temperatures must strictly decrease down the chain",
                    s.name
                )));
            }
            if s.cooling_power_w <= 0.0 || s.cable_length_above_m <= 0.0 {
                return Err(CryoError::Config(format!(
                    "stage `{}`: cooling power and cable length must be > 0",
                    s.name
                )));
            }
            prev = s.temperature_k;
        }
        if self.still_flow_mol_per_s <= 0.0 {
            return Err(CryoError::Config("still flow must be > 0".into()));
        }
        Ok(())
    }

    pub fn stage_index(&self, name: &str) -> Result<usize> {
        self.stages
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| CryoError::UnknownEntry { kind: "stage", name: name.to_string() })
    }

    pub fn stage_names(&self) -> Vec<String> {
        self.stages.iter().map(|s| s.name.clone()).collect()
    }

    /// Temperature above stage `idx`: the previous stage, or room temperature.
    pub fn temperature_above(&self, idx: usize) -> f64 {
        if idx == 0 {
            self.room_temperature_k
        } else {
            self.stages[idx - 1].temperature_k
        }
    }

    pub fn coldest_index(&self) -> usize {
        self.stages.len() - 1
    }

    /// Mixing-chamber cooling power at temperature `t_k`: kappa * ndot3 * T^2.
    pub fn cooling_power_mxc(&self, t_k: f64) -> Result<f64> {
        if t_k <= 0.0 {
            return Err(CryoError::Domain(format!("MXC temperature {t_k} K must be > 0")));
        }
        Ok(self.mxc_cooling_coefficient * self.still_flow_mol_per_s * t_k * t_k)
    }
}

impl Default for FridgeModel {
    /// Bluefors XLD400-class stage table used throughout the bundled presets.
    fn default() -> Self {
        FridgeModel {
            stages: vec![
                Stage { name: "50K".into(), temperature_k: 35.0, cooling_power_w: 30.0, cable_length_above_m: 0.200 },
                Stage { name: "4K".into(), temperature_k: 2.85, cooling_power_w: 1.5, cable_length_above_m: 0.290 },
                Stage { name: "Still".into(), temperature_k: 0.882, cooling_power_w: 40e-3, cable_length_above_m: 0.250 },
                Stage { name: "CP".into(), temperature_k: 82e-3, cooling_power_w: 200e-6, cable_length_above_m: 0.170 },
                Stage { name: "MXC".into(), temperature_k: 6e-3, cooling_power_w: 19e-6, cable_length_above_m: 0.140 },
            ],
            room_temperature_k: ROOM_TEMPERATURE_K,
            still_flow_mol_per_s: 0.69e-3,
            // calibrated so that 0.69 mmol/s gives 13 uW at 20 mK
            mxc_cooling_coefficient: 13e-6 / (0.69e-3 * 0.02 * 0.02),
            response: None,
        }
    }
}

/// How well the center conductor heat-sinks to a stage it passes.
///
/// `Full` applies where an attenuator (or an equally trusted component)
/// clamps the center; `Toggle` marks stages where thermalization is plausible
/// but unverified, producing the lower/upper bound spread; `None` marks
/// stages the center passes through untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterPolicy {
    Full,
    Toggle,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    Drive,
    Flux,
    OutputNbti,
    OutputSs,
    Pump,
    ReadIn,
}

/// Upper or lower terminus of a line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpanEnd {
    /// "RT" sentinel or a stage name.
    Named(String),
}

/// One wiring run from (usually) room temperature down to the mixing chamber.
#[derive(Debug, Clone)]
pub struct LineSpec {
    pub name: String,
    pub kind: LineKind,
    pub count: u32,
    /// Catalog cable key.
    pub cable: String,
    /// Index of the top stage the line starts below (None = room temperature),
    /// and the bottom stage it terminates on.
    pub span_top: Option<usize>,
    pub span_bottom: usize,
    /// Discrete attenuation per stage name, dB.
    pub attenuators_db: BTreeMap<String, f64>,
    /// Per-stage center-conductor thermalization policy; stages not listed
    /// default to `Full` where an attenuator sits and `None` otherwise.
    pub center_policy: BTreeMap<String, CenterPolicy>,
    /// Model the dielectric as sharing the center conductor's thermalization
    /// instead of being heat-sunk at every stage.
    pub dielectric_follows_center: bool,
    /// Optional infrared absorber at the coldest stage (6 dB at 6 GHz class).
    pub eccosorb_mxc: bool,
    /// Effective attenuator temperature overrides, K (defaults to the plate).
    pub attenuator_temperature_override_k: BTreeMap<String, f64>,
    /// Measured per-line passive loads by stage name, W (Table-style data).
    pub measured_passive_per_line_w: BTreeMap<String, f64>,
}

impl LineSpec {
    /// Indices of the stages whose feed segment belongs to this line:
    /// `span_top+1 ..= span_bottom` in fridge order.
    pub fn crossed_stages(&self, fridge: &FridgeModel) -> std::ops::RangeInclusive<usize> {
        let first = self.span_top.map_or(0, |t| t + 1);
        first..=self.span_bottom
    }

    pub fn validate(&self, fridge: &FridgeModel) -> Result<()> {
        if self.count == 0 {
            return Err(CryoError::Config(format!("line `{}`: count must be >= 1", self.name)));
        }
        if self.span_bottom >= fridge.stages.len() {
            return Err(CryoError::Topology(format!(
                "line `{}`: span bottom index {} out of range",
                self.name, self.span_bottom
            )));
        }
        if let Some(top) = self.span_top {
            if top >= self.span_bottom {
                return Err(CryoError::Topology(format!(
                    "line `{}`: span must run downward (top stage above bottom stage)",
                    self.name
                )));
            }
        }
        let coldest = fridge.coldest_index();
        let must_reach_coldest = !matches!(self.kind, LineKind::OutputSs);
        if must_reach_coldest && self.span_bottom != coldest {
            return Err(CryoError::Topology(format!(
                "line `{}` ({:?}) does not reach the coldest stage `{}`",
                self.name,
                self.kind,
                fridge.stages[coldest].name
            )));
        }
        for name in self.attenuators_db.keys().chain(self.center_policy.keys()) {
            let idx = fridge.stage_index(name)?;
            if !self.crossed_stages(fridge).contains(&idx) {
                return Err(CryoError::Topology(format!(
                    "line `{}`: stage `{name}` is outside the line span",
                    self.name
                )));
            }
        }
        if self.attenuators_db.values().any(|&db| db < 0.0) {
            return Err(CryoError::Config(format!("line `{}`: negative attenuation", self.name)));
        }
        Ok(())
    }

    pub fn attenuation_db_at(&self, stage_name: &str) -> f64 {
        self.attenuators_db.get(stage_name).copied().unwrap_or(0.0)
    }

    /// Effective center policy at a stage: explicit entry, else `Full` where an
    /// attenuator sits, else `None`.
    pub fn center_policy_at(&self, stage_name: &str) -> CenterPolicy {
        if let Some(&p) = self.center_policy.get(stage_name) {
            return p;
        }
        if self.attenuation_db_at(stage_name) > 0.0 {
            CenterPolicy::Full
        } else {
            CenterPolicy::None
        }
    }

    pub fn total_attenuation_db(&self) -> f64 {
        self.attenuators_db.values().sum()
    }
}
