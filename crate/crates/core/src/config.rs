//! Project configuration: schema-validated JSON in, validated domain model
//! out, plus the bundled preset scenarios.
//!
//! All config quantities are SI with explicit unit-suffix keys
//! (`temperature_K`, `cooling_power_W`); dB/dBm appear only in attenuation
//! and power-plan fields (`attenuators_dB`, `delivered_dBm`).

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::budget::{DrivePlan, PassiveBasis, ScenarioSpec, ShieldSpec, SignalPlan};
use crate::calibration::ResponseCoefficients;
use crate::error::{CryoError, Result};
use crate::fridge::{CenterPolicy, FridgeModel, LineKind, LineSpec, Stage};
use crate::heatflow::ShieldGeometry;
use crate::materials::Catalog;
use crate::signals::FluxBiasSpec;

pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Raw schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub description: Option<String>,
    /// Optional path to a catalog JSON replacing the bundled one.
    #[serde(default)]
    pub catalog_path: Option<String>,
    pub fridge: FridgeConfig,
    pub lines: Vec<LineConfig>,
    #[serde(default)]
    pub signal_plan: SignalPlanConfig,
    #[serde(default)]
    pub shields: Vec<ShieldConfig>,
    #[serde(default = "default_basis")]
    pub passive_basis: PassiveBasis,
    #[serde(default)]
    pub scenario: Option<ScenarioConfig>,
    #[serde(default = "default_baseline_qubits")]
    pub baseline_qubits: u64,
}

fn default_basis() -> PassiveBasis {
    PassiveBasis::PredictedMidpoint
}

fn default_baseline_qubits() -> u64 {
    50
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FridgeConfig {
    #[serde(default = "default_room_temperature", rename = "room_temperature_K")]
    pub room_temperature_k: f64,
    pub stages: Vec<Stage>,
    pub still_flow_mol_per_s: f64,
    #[serde(rename = "mxc_cooling_coefficient_W_s_per_mol_K2")]
    pub mxc_cooling_coefficient: f64,
    #[serde(default)]
    pub response: Option<ResponseCoefficients>,
}

fn default_room_temperature() -> f64 {
    crate::constants::ROOM_TEMPERATURE_K
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub name: String,
    pub kind: LineKind,
    pub count: u32,
    pub cable: String,
    /// ["RT" | stage, stage]
    pub span: (String, String),
    #[serde(default, rename = "attenuators_dB")]
    pub attenuators_db: BTreeMap<String, f64>,
    #[serde(default)]
    pub center_policy: BTreeMap<String, CenterPolicy>,
    #[serde(default)]
    pub dielectric_follows_center: bool,
    #[serde(default)]
    pub eccosorb_mxc: bool,
    #[serde(default, rename = "attenuator_temperature_override_K")]
    pub attenuator_temperature_override_k: BTreeMap<String, f64>,
    #[serde(default, rename = "measured_passive_per_line_W")]
    pub measured_passive_per_line_w: BTreeMap<String, f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalPlanConfig {
    #[serde(default)]
    pub drive: Option<DrivePlanConfig>,
    #[serde(default)]
    pub readin: Option<DrivePlanConfig>,
    #[serde(default)]
    pub pump: Option<DrivePlanConfig>,
    #[serde(default)]
    pub flux: Option<FluxPlanConfig>,
    #[serde(default = "default_true")]
    pub flux_dc_enabled: bool,
    #[serde(default = "default_still_absorption")]
    pub still_absorption: f64,
}

fn default_true() -> bool {
    true
}

fn default_still_absorption() -> f64 {
    crate::budget::STILL_ABSORPTION_DEFAULT
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrivePlanConfig {
    #[serde(rename = "delivered_dBm")]
    pub delivered_dbm: f64,
    #[serde(rename = "frequency_Hz")]
    pub frequency_hz: f64,
    #[serde(default = "default_true")]
    pub with_cable_loss: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxPlanConfig {
    pub r_eff_mxc_ohm: f64,
    pub r_eff_cp_ohm: f64,
    #[serde(rename = "i_max_A")]
    pub i_max_a: f64,
    #[serde(rename = "pulse_amplitude_A")]
    pub pulse_amplitude_a: f64,
    pub pulse_duty: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShieldConfig {
    pub stage: String,
    #[serde(rename = "outer_temperature_K")]
    pub outer_temperature_k: f64,
    pub radius_inner_m: f64,
    pub radius_outer_m: f64,
    pub height_m: f64,
    pub emissivity: f64,
    #[serde(default)]
    pub include_in_budget: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_scale")]
    pub diameter_scale: f64,
    #[serde(default)]
    pub flux_current_zeroed: bool,
    #[serde(default, rename = "cp_temperature_override_K")]
    pub cp_temperature_override_k: Option<f64>,
    #[serde(default, rename = "mxc_temperature_override_K")]
    pub mxc_temperature_override_k: Option<f64>,
}

fn default_scale() -> f64 {
    1.0
}

// ---------------------------------------------------------------------------
// Validated project
// ---------------------------------------------------------------------------

/// A fully validated modeling project: fridge, inventory, plan, catalog.
#[derive(Debug, Clone)]
pub struct Project {
    pub description: Option<String>,
    pub fridge: FridgeModel,
    pub lines: Vec<LineSpec>,
    pub plan: SignalPlan,
    pub shields: Vec<ShieldSpec>,
    pub passive_basis: PassiveBasis,
    pub scenario: Option<ScenarioSpec>,
    pub baseline_qubits: u64,
    pub catalog: Catalog,
}

impl ProjectConfig {
    pub fn parse(text: &str) -> Result<ProjectConfig> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ProjectConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| CryoError::Config(format!("{} (at {})", e.inner(), e.path())))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CryoError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn into_project(self) -> Result<Project> {
        let catalog = match &self.catalog_path {
            Some(p) => Catalog::from_json(&std::fs::read_to_string(p)?)?,
            None => Catalog::builtin().clone(),
        };
        let fridge = FridgeModel {
            stages: self.fridge.stages,
            room_temperature_k: self.fridge.room_temperature_k,
            still_flow_mol_per_s: self.fridge.still_flow_mol_per_s,
            mxc_cooling_coefficient: self.fridge.mxc_cooling_coefficient,
            response: self.fridge.response,
        };
        fridge.validate()?;
        if let Some(r) = &fridge.response {
            if r.stage_names != fridge.stage_names() {
                return Err(CryoError::Config(
                    "response coefficients stage names do not match the fridge stages".into(),
                ));
            }
        }

        let mut lines = Vec::with_capacity(self.lines.len());
        for lc in self.lines {
            let span_top = match lc.span.0.as_str() {
                "RT" => None,
                name => Some(fridge.stage_index(name)?),
            };
            let span_bottom = fridge.stage_index(&lc.span.1)?;
            let line = LineSpec {
                name: lc.name,
                kind: lc.kind,
                count: lc.count,
                cable: lc.cable,
                span_top,
                span_bottom,
                attenuators_db: lc.attenuators_db,
                center_policy: lc.center_policy,
                dielectric_follows_center: lc.dielectric_follows_center,
                eccosorb_mxc: lc.eccosorb_mxc,
                attenuator_temperature_override_k: lc.attenuator_temperature_override_k,
                measured_passive_per_line_w: lc.measured_passive_per_line_w,
            };
            line.validate(&fridge)?;
            catalog.cable(&line.cable)?;
            lines.push(line);
        }

        let plan = SignalPlan {
            drive: self.signal_plan.drive.map(|d| DrivePlan {
                delivered_dbm: d.delivered_dbm,
                frequency_hz: d.frequency_hz,
                with_cable_loss: d.with_cable_loss,
            }),
            readin: self.signal_plan.readin.map(|d| DrivePlan {
                delivered_dbm: d.delivered_dbm,
                frequency_hz: d.frequency_hz,
                with_cable_loss: d.with_cable_loss,
            }),
            pump: self.signal_plan.pump.map(|d| DrivePlan {
                delivered_dbm: d.delivered_dbm,
                frequency_hz: d.frequency_hz,
                with_cable_loss: d.with_cable_loss,
            }),
            flux: self.signal_plan.flux.map(|f| FluxBiasSpec {
                r_eff_mxc_ohm: f.r_eff_mxc_ohm,
                r_eff_cp_ohm: f.r_eff_cp_ohm,
                i_max_a: f.i_max_a,
                pulse_amplitude_a: f.pulse_amplitude_a,
                pulse_duty: f.pulse_duty,
            }),
            flux_dc_enabled: self.signal_plan.flux_dc_enabled,
            still_absorption: self.signal_plan.still_absorption,
        };

        let mut shields = Vec::with_capacity(self.shields.len());
        for sc in self.shields {
            fridge.stage_index(&sc.stage)?;
            let g = ShieldGeometry {
                radius_inner_m: sc.radius_inner_m,
                radius_outer_m: sc.radius_outer_m,
                height_m: sc.height_m,
                emissivity: sc.emissivity,
            };
            g.validate()?;
            shields.push(ShieldSpec {
                stage: sc.stage,
                outer_temperature_k: sc.outer_temperature_k,
                geometry: g,
                include_in_budget: sc.include_in_budget,
            });
        }

        let scenario = self.scenario.map(|s| ScenarioSpec {
            diameter_scale: s.diameter_scale,
            flux_current_zeroed: s.flux_current_zeroed,
            cp_temperature_override_k: s.cp_temperature_override_k,
            mxc_temperature_override_k: s.mxc_temperature_override_k,
        });

        Ok(Project {
            description: self.description,
            fridge,
            lines,
            plan,
            shields,
            passive_basis: self.passive_basis,
            scenario,
            baseline_qubits: self.baseline_qubits,
            catalog,
        })
    }
}

impl Project {
    pub fn from_config_str(text: &str) -> Result<Project> {
        ProjectConfig::parse(text)?.into_project()
    }

    /// Bundled scenario configs.
    pub fn preset(name: &str) -> Result<Project> {
        let text = preset_text(name)?;
        Project::from_config_str(text)
    }

    /// Assemble the budget, applying the project's scenario when present and
    /// attaching the qubit headroom estimate.
    pub fn budget(&self) -> Result<crate::budget::BudgetReport> {
        let mut report = match &self.scenario {
            Some(s) => crate::budget::scale_scenario(
                &self.fridge,
                &self.lines,
                &self.plan,
                &self.shields,
                &self.catalog,
                self.passive_basis,
                s,
                self.baseline_qubits,
            )?,
            None => crate::budget::total_budget(
                &self.fridge,
                &self.lines,
                &self.plan,
                &self.shields,
                &self.catalog,
                self.passive_basis,
            )?,
        };
        if report.qubit_estimate.is_none() {
            let headroom = report
                .stages
                .iter()
                .map(|st| st.cooling_power_w / st.total_w.max(1e-300))
                .fold(f64::INFINITY, f64::min);
            if headroom.is_finite() {
                report.qubit_estimate = Some((self.baseline_qubits as f64 * headroom) as u64);
            }
        }
        Ok(report)
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["asbuilt", "fig9", "outlook1000"]
}

pub fn preset_text(name: &str) -> Result<&'static str> {
    match name {
        "asbuilt" => Ok(include_str!("../presets/asbuilt.json")),
        "fig9" => Ok(include_str!("../presets/fig9.json")),
        "outlook1000" => Ok(include_str!("../presets/outlook1000.json")),
        other => Err(CryoError::UnknownEntry { kind: "preset", name: other.to_string() }),
    }
}

/// Published 60 dB drive-line attenuator distributions over
/// {50K, 4K, Still, CP, MXC}.
pub fn published_chain(name: &str) -> Option<[f64; 5]> {
    match name {
        "C1" => Some([0.0, 10.0, 0.0, 20.0, 30.0]),
        "C2" => Some([0.0, 20.0, 0.0, 10.0, 30.0]),
        "C3" => Some([0.0, 20.0, 0.0, 20.0, 20.0]),
        "C4" => Some([0.0, 20.0, 10.0, 10.0, 20.0]),
        _ => None,
    }
}

/// Standard line construction per kind, matching the bundled presets. Used
/// by tests and the `noise`/`optimize` commands when no config is given.
pub fn preset_line(kind: LineKind, name: &str, count: u32, fridge: &FridgeModel) -> Result<LineSpec> {
    let mut attens = BTreeMap::new();
    let mut policy = BTreeMap::new();
    let mut measured = BTreeMap::new();
    let coldest = fridge.coldest_index();
    let mut span_top = None;
    let mut span_bottom = coldest;
    let mut cable = "UT085-SS-SS";
    match kind {
        LineKind::Drive | LineKind::ReadIn => {
            attens.insert("4K".into(), 20.0);
            attens.insert("CP".into(), 20.0);
            attens.insert("MXC".into(), 20.0);
            policy.insert("50K".into(), CenterPolicy::Toggle);
            policy.insert("Still".into(), CenterPolicy::Toggle);
            for (s, w) in [("50K", 45e-3), ("4K", 1.0e-3), ("Still", 4e-6), ("CP", 0.4e-6), ("MXC", 0.013e-6)] {
                measured.insert(s.into(), w);
            }
        }
        LineKind::Pump => {
            // 50 dB total, 20 of which is the directional coupler at the bottom
            attens.insert("4K".into(), 20.0);
            attens.insert("CP".into(), 10.0);
            attens.insert("MXC".into(), 20.0);
            policy.insert("50K".into(), CenterPolicy::Toggle);
            policy.insert("Still".into(), CenterPolicy::Toggle);
            for (s, w) in [("50K", 45e-3), ("4K", 1.0e-3), ("Still", 4e-6), ("CP", 0.4e-6), ("MXC", 0.013e-6)] {
                measured.insert(s.into(), w);
            }
        }
        LineKind::Flux => {
            attens.insert("4K".into(), 10.0);
            policy.insert("50K".into(), CenterPolicy::Toggle);
            policy.insert("Still".into(), CenterPolicy::Toggle);
            policy.insert("CP".into(), CenterPolicy::None);
            // low-pass and absorber stack clamps the center at the bottom
            policy.insert("MXC".into(), CenterPolicy::Full);
            for (s, w) in [("50K", 56e-3), ("4K", 1.2e-3), ("Still", 2e-6), ("CP", 0.29e-6), ("MXC", 0.025e-6)] {
                measured.insert(s.into(), w);
            }
        }
        LineKind::OutputNbti => {
            cable = "UT085-NbTi";
            span_top = Some(fridge.stage_index("4K")?);
            policy.insert("Still".into(), CenterPolicy::Full);
            // unclear whether the circulator thermalizes the center
            policy.insert("CP".into(), CenterPolicy::Toggle);
            policy.insert("MXC".into(), CenterPolicy::Full);
            measured.insert("CP".into(), 0.29e-6);
            measured.insert("MXC".into(), 0.020e-6);
        }
        LineKind::OutputSs => {
            cable = "UT085-SS";
            span_bottom = fridge.stage_index("4K")?;
            policy.insert("50K".into(), CenterPolicy::Toggle);
            measured.insert("50K".into(), 45e-3);
            measured.insert("4K".into(), 1.0e-3);
        }
    }
    let line = LineSpec {
        name: name.to_string(),
        kind,
        count,
        cable: cable.to_string(),
        span_top,
        span_bottom,
        attenuators_db: attens,
        center_policy: policy,
        dielectric_follows_center: false,
        eccosorb_mxc: false,
        attenuator_temperature_override_k: BTreeMap::new(),
        measured_passive_per_line_w: measured,
    };
    line.validate(fridge)?;
    Ok(line)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for name in preset_names() {
            let p = Project::preset(name).unwrap_or_else(|e| panic!("preset {name}: {e}"));
            assert!(!p.lines.is_empty());
        }
    }

    #[test]
    fn unknown_keys_rejected_with_path() {
        let text = r#"{"schema_version": 1, "fridge": {"stages": [], "still_flow_mol_per_s": 1.0,
            "mxc_cooling_coefficient_W_s_per_mol_K2": 1.0, "bogus": 3}, "lines": []}"#;
        let err = ProjectConfig::parse(text).unwrap_err().to_string();
        assert!(err.contains("bogus") || err.contains("unknown field"), "{err}");
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let text = preset_text("fig9").unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(ProjectConfig::parse(&text).is_err());
    }

    #[test]
    fn fig9_inventory_totals() {
        let p = Project::preset("fig9").unwrap();
        let rf_lines: u32 = p
            .lines
            .iter()
            .filter(|l| l.kind != LineKind::OutputSs) // upper output sections pair with the NbTi runs
            .map(|l| l.count)
            .sum();
        assert_eq!(rf_lines, 124);
        assert_eq!(p.passive_basis, PassiveBasis::MeasuredWhereAvailable);
    }

    #[test]
    fn preset_lines_match_published_chain() {
        let fridge = FridgeModel::default();
        let d = preset_line(LineKind::Drive, "d", 1, &fridge).unwrap();
        let c3 = published_chain("C3").unwrap();
        for (i, s) in fridge.stages.iter().enumerate() {
            assert_eq!(d.attenuation_db_at(&s.name), c3[i]);
        }
        assert_eq!(d.total_attenuation_db(), 60.0);
    }
}
