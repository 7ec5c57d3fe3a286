//! Passive conduction through coax and twisted pairs, and radiative shield
//! loads.
//!
//! Per-stage conduction follows the steady-state integral
//! `P_i = sum_x A_x * int rho_x dT / L` with fixed plate temperatures. The
//! outer conductor is clamped at every plate. The dielectric is heat-sunk at
//! every plate by default. The center conductor is heat-sunk where its policy
//! says `Full`, and the lower/upper bounds of a line profile come from
//! enumerating the `Toggle` stages both ways.

use crate::error::{CryoError, Result};
use crate::fridge::{CenterPolicy, FridgeModel, LineSpec};
use crate::materials::{CableElement, CableSpec, Catalog, TwistedPairSpec};

/// Gray-body emissivity geometry of a cylindrical heat shield pair.
#[derive(Debug, Clone, Copy)]
pub struct ShieldGeometry {
    pub radius_inner_m: f64,
    pub radius_outer_m: f64,
    pub height_m: f64,
    pub emissivity: f64,
}

impl ShieldGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.emissivity > 0.0 && self.emissivity <= 1.0) {
            return Err(CryoError::Domain(format!("emissivity {} outside (0, 1]", self.emissivity)));
        }
        if self.radius_inner_m >= self.radius_outer_m || self.radius_inner_m <= 0.0 {
            return Err(CryoError::Domain("require 0 < radius_inner < radius_outer".into()));
        }
        Ok(())
    }
}

/// Conduction through selected cable elements between two plate temperatures, W.
pub fn conductive_load(
    cable: &CableSpec,
    length_m: f64,
    t_low_k: f64,
    t_high_k: f64,
    elements: &[CableElement],
) -> Result<f64> {
    if length_m <= 0.0 {
        return Err(CryoError::Domain(format!("cable length {length_m} m must be > 0")));
    }
    let mut total = 0.0;
    for &el in elements {
        let integral = cable.material(el).conductivity_integral(t_low_k, t_high_k)?;
        total += cable.area(el) * integral / length_m;
    }
    Ok(total)
}

/// Conduction through both wires of a twisted pair, W.
pub fn twisted_pair_load(
    pair: &TwistedPairSpec,
    length_m: f64,
    t_low_k: f64,
    t_high_k: f64,
) -> Result<f64> {
    if length_m <= 0.0 {
        return Err(CryoError::Domain(format!("pair length {length_m} m must be > 0")));
    }
    Ok(pair.area_total() * pair.wire_material.conductivity_integral(t_low_k, t_high_k)? / length_m)
}

/// Gray-body exchange between infinitely extended concentric cylinders, W.
pub fn radiative_load(geometry: &ShieldGeometry, t_outer_k: f64, t_inner_k: f64) -> Result<f64> {
    geometry.validate()?;
    if t_inner_k < 0.0 || t_outer_k < t_inner_k {
        return Err(CryoError::Domain(format!(
            "require T_outer >= T_inner >= 0, got {t_outer_k} / {t_inner_k}"
        )));
    }
    let a_inner = 2.0 * std::f64::consts::PI * geometry.radius_inner_m * geometry.height_m;
    let a_outer = 2.0 * std::f64::consts::PI * geometry.radius_outer_m * geometry.height_m;
    let eps = geometry.emissivity;
    let denom = 1.0 / eps + (a_inner / a_outer) * (1.0 / eps - 1.0);
    Ok(crate::constants::STEFAN_BOLTZMANN * a_inner * (t_outer_k.powi(4) - t_inner_k.powi(4))
        / denom)
}

/// Explicit thermalization assumption for a single profile evaluation:
/// which of the line's `Toggle` stages actually sink the center conductor.
#[derive(Debug, Clone, Default)]
pub struct ThermalizationAssumption {
    /// Stage indices (into the fridge stage list) where toggled center
    /// thermalization is taken as achieved.
    pub toggled_full: Vec<usize>,
}

/// Per-stage passive load bounds of one line, W. Index-aligned with the
/// fridge stage list; stages outside the line span are zero.
#[derive(Debug, Clone)]
pub struct PassiveProfile {
    pub stage_names: Vec<String>,
    pub lower_w: Vec<f64>,
    pub upper_w: Vec<f64>,
}

impl PassiveProfile {
    pub fn midpoint_w(&self) -> Vec<f64> {
        self.lower_w.iter().zip(&self.upper_w).map(|(l, u)| 0.5 * (l + u)).collect()
    }
}

/// Stages where the center conductor is heat-sunk under `assumption`,
/// including the line termini.
fn center_sink_stages(
    line: &LineSpec,
    fridge: &FridgeModel,
    assumption: &ThermalizationAssumption,
) -> Vec<usize> {
    let mut sinks = Vec::new();
    for idx in line.crossed_stages(fridge) {
        let name = &fridge.stages[idx].name;
        let sunk = match line.center_policy_at(name) {
            CenterPolicy::Full => true,
            CenterPolicy::Toggle => assumption.toggled_full.contains(&idx),
            CenterPolicy::None => false,
        };
        if sunk || idx == line.span_bottom {
            sinks.push(idx);
        }
    }
    sinks
}

/// Passive loads of one line (per installed line, not multiplied by count)
/// under a single explicit thermalization assumption.
pub fn line_passive_with_assumption(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
    assumption: &ThermalizationAssumption,
) -> Result<Vec<f64>> {
    line.validate(fridge)?;
    let cable = catalog.cable(&line.cable)?;
    let mut loads = vec![0.0; fridge.stages.len()];

    // outer conductor (and by default the dielectric): sunk at every plate
    for idx in line.crossed_stages(fridge) {
        let t_hi = fridge.temperature_above(idx);
        let t_lo = fridge.stages[idx].temperature_k;
        let len = fridge.stages[idx].cable_length_above_m;
        loads[idx] += conductive_load(cable, len, t_lo, t_hi, &[CableElement::Outer])?;
        if !line.dielectric_follows_center {
            loads[idx] += conductive_load(cable, len, t_lo, t_hi, &[CableElement::Dielectric])?;
        }
    }

    // center conductor: conducts between consecutive heat sinks
    let sinks = center_sink_stages(line, fridge, assumption);
    let mut elements = vec![CableElement::Center];
    if line.dielectric_follows_center {
        elements.push(CableElement::Dielectric);
    }
    let top_temperature = line
        .span_top
        .map_or(fridge.room_temperature_k, |t| fridge.stages[t].temperature_k);
    let mut prev_stage: Option<usize> = None;
    for &sink in &sinks {
        let t_hi = match prev_stage {
            Some(p) => fridge.stages[p].temperature_k,
            None => top_temperature,
        };
        let first = prev_stage.map_or_else(|| *line.crossed_stages(fridge).start(), |p| p + 1);
        let length: f64 =
            (first..=sink).map(|i| fridge.stages[i].cable_length_above_m).sum();
        let t_lo = fridge.stages[sink].temperature_k;
        loads[sink] += conductive_load(cable, length, t_lo, t_hi, &elements)?;
        prev_stage = Some(sink);
    }
    Ok(loads)
}

/// Lower/upper passive bounds per stage for one line, from enumerating every
/// combination of the `Toggle` stages.
pub fn line_passive_profile(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
) -> Result<PassiveProfile> {
    line.validate(fridge)?;
    let toggles: Vec<usize> = line
        .crossed_stages(fridge)
        .filter(|&i| line.center_policy_at(&fridge.stages[i].name) == CenterPolicy::Toggle)
        .collect();

    let n = fridge.stages.len();
    let mut lower = vec![f64::INFINITY; n];
    let mut upper = vec![f64::NEG_INFINITY; n];
    for mask in 0..(1u32 << toggles.len()) {
        let assumption = ThermalizationAssumption {
            toggled_full: toggles
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &idx)| idx)
                .collect(),
        };
        let loads = line_passive_with_assumption(line, fridge, catalog, &assumption)?;
        for i in 0..n {
            lower[i] = lower[i].min(loads[i]);
            upper[i] = upper[i].max(loads[i]);
        }
    }
    Ok(PassiveProfile { stage_names: fridge.stage_names(), lower_w: lower, upper_w: upper })
}
