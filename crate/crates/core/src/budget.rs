//! Per-stage budget assembly: active signal dissipation, passive conduction,
//! radiative loads, cooling-power fractions, plate-temperature prediction,
//! and cable-diameter scaling scenarios.

use serde::{Deserialize, Serialize};

use crate::calibration::apply_loads;
use crate::constants::{db_to_linear, dbm_to_w};
use crate::error::{CryoError, Result};
use crate::fridge::{FridgeModel, LineKind, LineSpec};
use crate::heatflow::{line_passive_profile, radiative_load, ShieldGeometry};
use crate::materials::Catalog;
use crate::noise::{bose_einstein, cascade_photon_number, AttenuatorChain, ChainElement};
use crate::signals::{flux_bias_average_load, flux_pulse_load, FluxBiasSpec};

/// Fraction of 4K-attenuator dissipation that is observed to surface on the
/// Still instead; an empirical correction, redistributed so energy is
/// conserved.
pub const STILL_ABSORPTION_DEFAULT: f64 = 0.004;

/// Cable segments at or below this plate temperature use the cryogenic
/// attenuation scale.
const CRYO_SEGMENT_THRESHOLD_K: f64 = 4.2;

/// RF drive plan for a line family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DrivePlan {
    /// Average power to deliver at the coldest-stage output, dBm.
    pub delivered_dbm: f64,
    pub frequency_hz: f64,
    pub with_cable_loss: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SignalPlan {
    pub drive: Option<DrivePlan>,
    pub readin: Option<DrivePlan>,
    pub pump: Option<DrivePlan>,
    #[serde(skip)]
    pub flux: Option<FluxBiasSpec>,
    /// Apply static flux offsets (turned off by the shielded scenario).
    pub flux_dc_enabled: bool,
    /// Empirical fraction of 4K dissipation surfacing at the Still.
    pub still_absorption: f64,
}

impl SignalPlan {
    pub fn plan_for(&self, kind: LineKind) -> Option<&DrivePlan> {
        match kind {
            LineKind::Drive => self.drive.as_ref(),
            LineKind::ReadIn => self.readin.as_ref(),
            LineKind::Pump => self.pump.as_ref(),
            _ => None,
        }
    }
}

/// Active-load walk of one line at a given input power.
#[derive(Debug, Clone, Serialize)]
pub struct ActiveLoadProfile {
    pub stage_names: Vec<String>,
    /// Power arriving at each stage's discrete attenuator, W.
    pub incident_w: Vec<f64>,
    /// Power dissipated on each stage (attenuators plus half of each adjacent
    /// cable run), W.
    pub dissipated_w: Vec<f64>,
    /// Power leaving the coldest element toward the sample, W.
    pub delivered_w: f64,
}

/// Walk the chain from the top: cable dissipation splits half/half between
/// the adjacent stages, attenuator dissipation lands on its plate, and the
/// remainder is delivered at the bottom.
pub fn active_loads_per_stage(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
    input_power_w: f64,
    frequency_hz: f64,
    lossless: bool,
    still_absorption: f64,
) -> Result<ActiveLoadProfile> {
    if input_power_w < 0.0 {
        return Err(CryoError::Domain(format!("input power {input_power_w} W must be >= 0")));
    }
    line.validate(fridge)?;
    let cable = catalog.cable(&line.cable)?;
    let n = fridge.stages.len();
    let mut incident = vec![0.0; n];
    let mut dissipated = vec![0.0; n];
    let mut p = input_power_w;
    let mut prev: Option<usize> = line.span_top;

    for idx in line.crossed_stages(fridge) {
        let stage = &fridge.stages[idx];
        if !lossless && p > 0.0 {
            let cryo = fridge.temperature_above(idx) <= CRYO_SEGMENT_THRESHOLD_K;
            let db = cable.attenuation_db(frequency_hz, stage.cable_length_above_m, cryo)?;
            let lost = p * (1.0 - db_to_linear(-db));
            // upper half of the topmost run leaves toward room temperature
            if let Some(pidx) = prev {
                dissipated[pidx] += lost / 2.0;
            }
            dissipated[idx] += lost / 2.0;
            p -= lost;
        }
        if line.eccosorb_mxc && idx == fridge.coldest_index() {
            let db = eccosorb_db(frequency_hz);
            let lost = p * (1.0 - db_to_linear(-db));
            dissipated[idx] += lost;
            p -= lost;
        }
        incident[idx] = p;
        let att = db_to_linear(line.attenuation_db_at(&stage.name));
        let lost = p * (1.0 - 1.0 / att);
        dissipated[idx] += lost;
        p -= lost;
        prev = Some(idx);
    }

    // empirical Still absorption of 4K dissipation (redistribution)
    if still_absorption > 0.0 {
        if let (Ok(i4), Ok(istill)) = (fridge.stage_index("4K"), fridge.stage_index("Still")) {
            let shift = still_absorption * dissipated[i4];
            dissipated[i4] -= shift;
            dissipated[istill] += shift;
        }
    }

    Ok(ActiveLoadProfile {
        stage_names: fridge.stage_names(),
        incident_w: incident,
        dissipated_w: dissipated,
        delivered_w: p,
    })
}

/// Custom IR absorber: about 6 dB at 6 GHz, roughly linear in frequency.
pub fn eccosorb_db(frequency_hz: f64) -> f64 {
    6.0 * frequency_hz / 6e9
}

/// Total chain attenuation (discrete + cables + absorber) at `frequency_hz`, dB.
pub fn line_total_attenuation_db(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
    frequency_hz: f64,
    with_cable_loss: bool,
) -> Result<f64> {
    let cable = catalog.cable(&line.cable)?;
    let mut total = line.total_attenuation_db();
    if line.eccosorb_mxc {
        total += eccosorb_db(frequency_hz);
    }
    if with_cable_loss {
        for idx in line.crossed_stages(fridge) {
            let cryo = fridge.temperature_above(idx) <= CRYO_SEGMENT_THRESHOLD_K;
            total +=
                cable.attenuation_db(frequency_hz, fridge.stages[idx].cable_length_above_m, cryo)?;
        }
    }
    Ok(total)
}

/// Input power (W) required at the line top for a delivered power target.
pub fn input_power_for_delivered(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
    plan: &DrivePlan,
) -> Result<f64> {
    let total =
        line_total_attenuation_db(line, fridge, catalog, plan.frequency_hz, plan.with_cable_loss)?;
    Ok(dbm_to_w(plan.delivered_dbm + total))
}

/// Noise chain of a line: distributed cable runs (optional) interleaved with
/// the discrete attenuators at their plate temperatures.
pub fn noise_chain(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
    frequency_hz: f64,
    with_cable_loss: bool,
) -> Result<AttenuatorChain> {
    let cable = catalog.cable(&line.cable)?;
    let mut chain = AttenuatorChain::default();
    for idx in line.crossed_stages(fridge) {
        let stage = &fridge.stages[idx];
        let t_hi = fridge.temperature_above(idx);
        if with_cable_loss {
            let cryo = t_hi <= CRYO_SEGMENT_THRESHOLD_K;
            let db = cable.attenuation_db(frequency_hz, stage.cable_length_above_m, cryo)?;
            if db > 0.0 {
                chain.elements.push(ChainElement::Distributed {
                    total_db: db,
                    t_start_k: t_hi,
                    t_end_k: stage.temperature_k,
                });
            }
        }
        if line.eccosorb_mxc && idx == fridge.coldest_index() {
            chain.push_discrete_db(eccosorb_db(frequency_hz), stage.temperature_k);
        }
        let db = line.attenuation_db_at(&stage.name);
        if db > 0.0 {
            let t_att = line
                .attenuator_temperature_override_k
                .get(&stage.name)
                .copied()
                .unwrap_or(stage.temperature_k);
            chain.push_discrete_db(db, t_att);
        }
    }
    Ok(chain)
}

/// Occupation at the coldest stage for a line, starting from the
/// room-temperature blackbody occupation.
pub fn line_n_mxc(
    line: &LineSpec,
    fridge: &FridgeModel,
    catalog: &Catalog,
    frequency_hz: f64,
    with_cable_loss: bool,
) -> Result<f64> {
    let chain = noise_chain(line, fridge, catalog, frequency_hz, with_cable_loss)?;
    let n_in = bose_einstein(fridge.room_temperature_k, frequency_hz);
    Ok(cascade_photon_number(&chain, frequency_hz, n_in)?.output())
}

/// How the headline passive number of each line is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassiveBasis {
    /// Midpoint of the predicted thermalization bounds.
    PredictedMidpoint,
    /// Measured per-line values where a line carries them, predicted midpoint
    /// otherwise.
    MeasuredWhereAvailable,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageBudget {
    pub stage: String,
    pub temperature_k: f64,
    pub cooling_power_w: f64,
    pub passive_low_w: f64,
    pub passive_high_w: f64,
    /// Headline passive number (midpoint or measured).
    pub passive_w: f64,
    pub active_w: f64,
    pub radiative_w: f64,
    pub total_w: f64,
    pub fraction_of_cooling: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport {
    pub stages: Vec<StageBudget>,
    /// Thermal occupation at the coldest stage for the drive chain, if a
    /// drive plan is present.
    pub n_mxc: Option<f64>,
    pub predicted_temperatures_k: Option<Vec<f64>>,
    /// Informational radiative loads for declared shields excluded from the
    /// fractions (vendor cooling specs already account for them).
    pub radiative_informational_w: Vec<(String, f64)>,
    pub qubit_estimate: Option<u64>,
    pub warnings: Vec<String>,
}

impl BudgetReport {
    pub fn stage(&self, name: &str) -> Option<&StageBudget> {
        self.stages.iter().find(|s| s.stage == name)
    }
}

/// A declared shield pair: radiates onto `stage`.
#[derive(Debug, Clone)]
pub struct ShieldSpec {
    pub stage: String,
    pub outer_temperature_k: f64,
    pub geometry: ShieldGeometry,
    /// Count it in the stage totals (off by default: the vendor cooling
    /// powers are specified with the shields already installed).
    pub include_in_budget: bool,
}

/// Assemble the per-stage budget for a full line inventory.
pub fn total_budget(
    fridge: &FridgeModel,
    lines: &[LineSpec],
    plan: &SignalPlan,
    shields: &[ShieldSpec],
    catalog: &Catalog,
    basis: PassiveBasis,
) -> Result<BudgetReport> {
    fridge.validate()?;
    let n = fridge.stages.len();
    let mut passive_low = vec![0.0; n];
    let mut passive_high = vec![0.0; n];
    let mut passive = vec![0.0; n];
    let mut active = vec![0.0; n];
    let mut warnings = Vec::new();

    for line in lines {
        line.validate(fridge)?;
        let count = line.count as f64;
        let prof = line_passive_profile(line, fridge, catalog)?;
        let mid = prof.midpoint_w();
        for i in 0..n {
            passive_low[i] += count * prof.lower_w[i];
            passive_high[i] += count * prof.upper_w[i];
            let headline = match basis {
                PassiveBasis::PredictedMidpoint => mid[i],
                PassiveBasis::MeasuredWhereAvailable => line
                    .measured_passive_per_line_w
                    .get(&fridge.stages[i].name)
                    .copied()
                    .unwrap_or(mid[i]),
            };
            passive[i] += count * headline;
        }

        // RF dissipation for planned line kinds
        if let Some(drive_plan) = plan.plan_for(line.kind) {
            let input = input_power_for_delivered(line, fridge, catalog, drive_plan)?;
            let prof = active_loads_per_stage(
                line,
                fridge,
                catalog,
                input,
                drive_plan.frequency_hz,
                !drive_plan.with_cable_loss,
                plan.still_absorption,
            )?;
            for i in 0..n {
                active[i] += count * prof.dissipated_w[i];
            }
            // delivered power ends on the sample at the bottom stage
            active[line.span_bottom] += count * prof.delivered_w;
        }

        // DC flux dissipation
        if line.kind == LineKind::Flux {
            if let Some(flux) = &plan.flux {
                let (im, ic) = (fridge.stage_index("MXC"), fridge.stage_index("CP"));
                if let (Ok(im), Ok(ic)) = (im, ic) {
                    if plan.flux_dc_enabled {
                        let avg = flux_bias_average_load(flux)?;
                        active[im] += count * avg.p_mxc_w;
                        active[ic] += count * avg.p_cp_w;
                    }
                    let pulse = flux_pulse_load(flux);
                    active[im] += count * pulse.p_mxc_w;
                    active[ic] += count * pulse.p_cp_w;
                } else {
                    warnings.push(format!(
                        "line `{}`: fridge lacks CP/MXC stages, flux dissipation skipped",
                        line.name
                    ));
                }
            }
        }
    }

    let mut radiative = vec![0.0; n];
    let mut informational = Vec::new();
    for sh in shields {
        let idx = fridge.stage_index(&sh.stage)?;
        let p = radiative_load(&sh.geometry, sh.outer_temperature_k, fridge.stages[idx].temperature_k)?;
        if sh.include_in_budget {
            radiative[idx] += p;
        } else {
            informational.push((sh.stage.clone(), p));
        }
    }

    let n_mxc = match (&plan.drive, lines.iter().find(|l| l.kind == LineKind::Drive)) {
        (Some(dp), Some(line)) => {
            Some(line_n_mxc(line, fridge, catalog, dp.frequency_hz, dp.with_cable_loss)?)
        }
        _ => None,
    };

    let mut stages = Vec::with_capacity(n);
    for i in 0..n {
        let s = &fridge.stages[i];
        let total = passive[i] + active[i] + radiative[i];
        stages.push(StageBudget {
            stage: s.name.clone(),
            temperature_k: s.temperature_k,
            cooling_power_w: s.cooling_power_w,
            passive_low_w: passive_low[i],
            passive_high_w: passive_high[i],
            passive_w: passive[i],
            active_w: active[i],
            radiative_w: radiative[i],
            total_w: total,
            fraction_of_cooling: total / s.cooling_power_w,
        });
    }

    let predicted = fridge.response.as_ref().map(|coeffs| {
        let baseline: Vec<f64> = fridge.stages.iter().map(|s| s.temperature_k).collect();
        let loads: Vec<f64> = stages.iter().map(|s| s.total_w).collect();
        apply_loads(&baseline, &loads, coeffs)
    });

    Ok(BudgetReport {
        stages,
        n_mxc,
        predicted_temperatures_k: predicted,
        radiative_informational_w: informational,
        qubit_estimate: None,
        warnings,
    })
}

/// Predicted plate temperatures for an assembled report (linearized response).
pub fn predict_temperatures(fridge: &FridgeModel, report: &BudgetReport) -> Result<Vec<f64>> {
    let coeffs =
        fridge.response.as_ref().ok_or(CryoError::MissingCoefficients("predict_temperatures"))?;
    let baseline: Vec<f64> = fridge.stages.iter().map(|s| s.temperature_k).collect();
    let loads: Vec<f64> = report.stages.iter().map(|s| s.total_w).collect();
    Ok(apply_loads(&baseline, &loads, coeffs))
}

/// Scenario knobs for re-budgeting with different cable diameters or plate
/// operating points.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioSpec {
    /// All cable diameters multiplied by this factor.
    pub diameter_scale: f64,
    /// Zero the static flux offsets (magnetically shielded processor).
    pub flux_current_zeroed: bool,
    pub cp_temperature_override_k: Option<f64>,
    pub mxc_temperature_override_k: Option<f64>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            diameter_scale: 1.0,
            flux_current_zeroed: false,
            cp_temperature_override_k: None,
            mxc_temperature_override_k: None,
        }
    }
}

/// Re-budget under a scenario and bound the supported processor size.
///
/// Cross sections scale as s^2, cable attenuation as 1/s, DC resistance as
/// 1/s^2. Discrete attenuation at the warmest attenuator of each planned line
/// is reduced to keep the line's total chain attenuation fixed (the drive
/// plan targets the same delivered power, so active loads stay put). The
/// qubit estimate scales the line inventory by the worst-stage headroom,
/// taking the current inventory as `baseline_qubits` qubits' worth.
pub fn scale_scenario(
    fridge: &FridgeModel,
    lines: &[LineSpec],
    plan: &SignalPlan,
    shields: &[ShieldSpec],
    catalog: &Catalog,
    basis: PassiveBasis,
    scenario: &ScenarioSpec,
    baseline_qubits: u64,
) -> Result<BudgetReport> {
    let s = scenario.diameter_scale;
    if s <= 0.0 {
        return Err(CryoError::Domain(format!("diameter scale {s} must be > 0")));
    }
    let scaled_catalog = catalog.with_scaled_cables(s);

    let mut fridge = fridge.clone();
    if let Some(t) = scenario.cp_temperature_override_k {
        let idx = fridge.stage_index("CP")?;
        fridge.stages[idx].temperature_k = t;
    }
    if let Some(t) = scenario.mxc_temperature_override_k {
        let idx = fridge.stage_index("MXC")?;
        fridge.stages[idx].temperature_k = t;
    }
    fridge.validate()?;

    let mut lines = lines.to_vec();
    if (s - 1.0).abs() > 1e-12 {
        // measured per-line conduction scales with the cross section too
        for line in &mut lines {
            for v in line.measured_passive_per_line_w.values_mut() {
                *v *= s * s;
            }
        }
        for line in &mut lines {
            if plan.plan_for(line.kind).is_none() {
                continue;
            }
            let freq = plan.plan_for(line.kind).map(|p| p.frequency_hz).unwrap_or(6e9);
            let base_cable =
                line_total_attenuation_db(line, &fridge, catalog, freq, true)?;
            let scaled_cable =
                line_total_attenuation_db(line, &fridge, &scaled_catalog, freq, true)?;
            let added = scaled_cable - base_cable;
            // take the added loss out of the warmest attenuator
            if let Some((_, db)) = line
                .attenuators_db
                .iter_mut()
                .map(|(k, v)| (fridge.stage_index(k).unwrap_or(usize::MAX), v))
                .filter(|(_, v)| **v > 0.0)
                .min_by_key(|(idx, _)| *idx)
            {
                *db = (*db - added).max(0.0);
            }
        }
    }

    let mut plan = plan.clone();
    if scenario.flux_current_zeroed {
        plan.flux_dc_enabled = false;
    }
    if let Some(flux) = plan.flux.as_mut() {
        // R_eff tracks the cable cross section
        flux.r_eff_mxc_ohm /= s * s;
        flux.r_eff_cp_ohm /= s * s;
    }

    let mut report = total_budget(&fridge, &lines, &plan, shields, &scaled_catalog, basis)?;
    let headroom = report
        .stages
        .iter()
        .map(|st| st.cooling_power_w / st.total_w.max(1e-300))
        .fold(f64::INFINITY, f64::min);
    report.qubit_estimate = Some((baseline_qubits as f64 * headroom).floor() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset_line;
    use crate::constants::w_to_dbm;
    use approx::assert_relative_eq;

    fn drive_line(fridge: &FridgeModel) -> LineSpec {
        preset_line(LineKind::Drive, "drive", 1, fridge).unwrap()
    }

    #[test]
    fn lossless_c3_walk_matches_published_triple() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = drive_line(&fridge);
        let prof = active_loads_per_stage(&line, &fridge, cat, dbm_to_w(10.0), 10e6, true, STILL_ABSORPTION_DEFAULT)
            .unwrap();
        // power entering each attenuator: 10 mW, 100 uW, 1 uW exactly
        assert_relative_eq!(prof.incident_w[1], 10e-3, max_relative = 1e-9);
        assert_relative_eq!(prof.incident_w[3], 100e-6, max_relative = 1e-9);
        assert_relative_eq!(prof.incident_w[4], 1e-6, max_relative = 1e-9);
        // energy conservation with the delivered remainder
        let sum: f64 = prof.dissipated_w.iter().sum::<f64>() + prof.delivered_w;
        assert_relative_eq!(sum, 10e-3, max_relative = 1e-9);
        // the empirical Still share of 4K dissipation
        assert_relative_eq!(prof.dissipated_w[2], 0.004 * 9.9e-3, max_relative = 1e-9);
    }

    #[test]
    fn zero_input_gives_zeros() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = drive_line(&fridge);
        let prof =
            active_loads_per_stage(&line, &fridge, cat, 0.0, 5e9, false, STILL_ABSORPTION_DEFAULT).unwrap();
        assert!(prof.dissipated_w.iter().all(|&w| w == 0.0));
        assert_eq!(prof.delivered_w, 0.0);
    }

    #[test]
    fn delivered_level_with_cable_attenuation() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = drive_line(&fridge);
        let prof = active_loads_per_stage(&line, &fridge, cat, dbm_to_w(16.0), 5e9, false, STILL_ABSORPTION_DEFAULT)
            .unwrap();
        let dbm = w_to_dbm(prof.delivered_w);
        assert!((dbm + 52.5).abs() < 1.0, "delivered {dbm} dBm");
    }

    #[test]
    fn conservation_with_cable_loss() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = drive_line(&fridge);
        let input = dbm_to_w(16.0);
        let prof =
            active_loads_per_stage(&line, &fridge, cat, input, 5e9, false, STILL_ABSORPTION_DEFAULT).unwrap();
        // half of the topmost cable run's dissipation leaves toward room temperature
        let cable = cat.cable("UT085-SS-SS").unwrap();
        let top_db = cable.attenuation_db(5e9, fridge.stages[0].cable_length_above_m, false).unwrap();
        let top_loss_outward = input * (1.0 - db_to_linear(-top_db)) / 2.0;
        let sum: f64 = prof.dissipated_w.iter().sum::<f64>() + prof.delivered_w + top_loss_outward;
        assert_relative_eq!(sum, input, max_relative = 1e-9);
    }

    #[test]
    fn input_back_propagation_round_trips() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = drive_line(&fridge);
        let plan = DrivePlan { delivered_dbm: -78.0, frequency_hz: 6e9, with_cable_loss: true };
        let input = input_power_for_delivered(&line, &fridge, cat, &plan).unwrap();
        let prof = active_loads_per_stage(&line, &fridge, cat, input, 6e9, false, 0.0).unwrap();
        assert!((w_to_dbm(prof.delivered_w) + 78.0).abs() < 1e-6);
    }

    #[test]
    fn empty_inventory_is_all_zero() {
        let fridge = FridgeModel::default();
        let report = total_budget(
            &fridge,
            &[],
            &SignalPlan { still_absorption: STILL_ABSORPTION_DEFAULT, ..Default::default() },
            &[],
            Catalog::builtin(),
            PassiveBasis::PredictedMidpoint,
        )
        .unwrap();
        assert!(report.stages.iter().all(|s| s.total_w == 0.0 && s.fraction_of_cooling == 0.0));
        assert!(report.n_mxc.is_none());
    }

    #[test]
    fn budget_additive_over_inventory_partitions() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let plan = SignalPlan {
            drive: Some(DrivePlan { delivered_dbm: -78.0, frequency_hz: 6e9, with_cable_loss: true }),
            flux: Some(FluxBiasSpec::default()),
            flux_dc_enabled: true,
            still_absorption: STILL_ABSORPTION_DEFAULT,
            ..Default::default()
        };
        let mut both = drive_line(&fridge);
        both.count = 7;
        let a = total_budget(&fridge, &[both], &plan, &[], cat, PassiveBasis::PredictedMidpoint).unwrap();
        let mut l3 = drive_line(&fridge);
        l3.count = 3;
        let mut l4 = drive_line(&fridge);
        l4.count = 4;
        let b = total_budget(&fridge, &[l3, l4], &plan, &[], cat, PassiveBasis::PredictedMidpoint).unwrap();
        for (x, y) in a.stages.iter().zip(&b.stages) {
            assert_relative_eq!(x.total_w, y.total_w, max_relative = 1e-12);
        }
    }

    #[test]
    fn scale_identity_keeps_report_fixed() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let plan = SignalPlan {
            drive: Some(DrivePlan { delivered_dbm: -78.0, frequency_hz: 6e9, with_cable_loss: true }),
            flux: Some(FluxBiasSpec::default()),
            flux_dc_enabled: true,
            still_absorption: STILL_ABSORPTION_DEFAULT,
            ..Default::default()
        };
        let lines = vec![drive_line(&fridge)];
        let base =
            total_budget(&fridge, &lines, &plan, &[], cat, PassiveBasis::PredictedMidpoint).unwrap();
        let same = scale_scenario(
            &fridge,
            &lines,
            &plan,
            &[],
            cat,
            PassiveBasis::PredictedMidpoint,
            &ScenarioSpec::default(),
            50,
        )
        .unwrap();
        for (x, y) in base.stages.iter().zip(&same.stages) {
            assert_relative_eq!(x.passive_w, y.passive_w, max_relative = 1e-12);
            assert_relative_eq!(x.active_w, y.active_w, max_relative = 1e-12);
        }
    }

    #[test]
    fn diameter_scaling_reduces_passive_by_s_squared() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let plan = SignalPlan { still_absorption: 0.0, ..Default::default() };
        let lines = vec![drive_line(&fridge)];
        let base =
            total_budget(&fridge, &lines, &plan, &[], cat, PassiveBasis::PredictedMidpoint).unwrap();
        let s: f64 = 0.047 / 0.085;
        let scen = ScenarioSpec { diameter_scale: s, ..Default::default() };
        let scaled = scale_scenario(
            &fridge,
            &lines,
            &plan,
            &[],
            cat,
            PassiveBasis::PredictedMidpoint,
            &scen,
            50,
        )
        .unwrap();
        let want = s.powi(-2);
        for (b, sc) in base.stages.iter().zip(&scaled.stages) {
            if b.passive_w > 0.0 {
                assert_relative_eq!(b.passive_w / sc.passive_w, want, max_relative = 1e-6);
            }
        }
        assert!((want - 3.2707107).abs() < 1e-6);
    }

    #[test]
    fn fractions_invariant_under_joint_scaling() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let plan = SignalPlan { still_absorption: 0.0, ..Default::default() };
        let mut line = drive_line(&fridge);
        line.count = 10;
        let base = total_budget(&fridge, &[line.clone()], &plan, &[], cat, PassiveBasis::PredictedMidpoint)
            .unwrap();
        let mut scaled_fridge = fridge.clone();
        for s in &mut scaled_fridge.stages {
            s.cooling_power_w *= 3.0;
        }
        line.count = 30;
        let scaled = total_budget(&scaled_fridge, &[line], &plan, &[], cat, PassiveBasis::PredictedMidpoint)
            .unwrap();
        for (b, s) in base.stages.iter().zip(&scaled.stages) {
            assert_relative_eq!(b.fraction_of_cooling, s.fraction_of_cooling, max_relative = 1e-12);
        }
    }

    #[test]
    fn predict_temperatures_requires_coefficients() {
        let fridge = FridgeModel::default();
        let report =
            total_budget(&fridge, &[], &SignalPlan::default(), &[], Catalog::builtin(), PassiveBasis::PredictedMidpoint)
                .unwrap();
        assert!(matches!(
            predict_temperatures(&fridge, &report),
            Err(CryoError::MissingCoefficients(_))
        ));
    }

    #[test]
    fn predict_temperatures_single_stage_definition() {
        use crate::calibration::ResponseCoefficients;
        let mut fridge = FridgeModel::default();
        fridge.response = Some(ResponseCoefficients {
            stage_names: fridge.stage_names(),
            dp_dt_w_per_k: vec![3.0, 1.1, 0.125, 3.4e-3, 6.7e-4],
            dt_dp_cross_k_per_w: vec![0.0; 5],
            fit_window_fraction: 0.3,
            residual_rms_k: vec![0.0; 5],
            warnings: vec![],
        });
        let mut report =
            total_budget(&fridge, &[], &SignalPlan::default(), &[], Catalog::builtin(), PassiveBasis::PredictedMidpoint)
                .unwrap();
        report.stages[4].total_w = 6.7e-4 * 0.002; // force dT = 2 mK
        let t = predict_temperatures(&fridge, &report).unwrap();
        assert_relative_eq!(t[4], fridge.stages[4].temperature_k + 0.002, max_relative = 1e-12);
        // zero loads leave the baseline untouched
        report.stages[4].total_w = 0.0;
        let t0 = predict_temperatures(&fridge, &report).unwrap();
        for (a, b) in t0.iter().zip(fridge.stages.iter().map(|s| s.temperature_k)) {
            assert_relative_eq!(*a, b, max_relative = 1e-12);
        }
    }
}
