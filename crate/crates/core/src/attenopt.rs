//! Exhaustive attenuator-placement search: enumerate the compositions of a
//! total attenuation over the stages, evaluate each for thermal photons and
//! per-stage active-load fractions, filter, and rank.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::budget::{active_loads_per_stage, input_power_for_delivered, line_n_mxc, DrivePlan};
use crate::error::{CryoError, Result};
use crate::fridge::{FridgeModel, LineSpec};
use crate::materials::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MinNMxc,
    MinMaxFraction,
    Pareto,
}

#[derive(Debug, Clone)]
pub struct SearchConstraints {
    pub total_db: f64,
    /// Discrete values each stage may take, dB.
    pub allowed_values_db: Vec<f64>,
    /// Per-stage cap on the active-load fraction of cooling power.
    pub max_fraction: BTreeMap<String, f64>,
    /// Optional cap on the number of nonzero attenuators per line.
    pub max_attenuators: Option<usize>,
    pub objective: Objective,
    /// Evaluate n_MXC with distributed cable loss included.
    pub with_cable_loss: bool,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            total_db: 60.0,
            allowed_values_db: vec![0.0, 3.0, 6.0, 10.0, 20.0, 30.0],
            max_fraction: BTreeMap::new(),
            max_attenuators: None,
            objective: Objective::MinNMxc,
            with_cable_loss: false,
        }
    }
}

/// Everything needed to score one candidate: the fridge, the catalog, the
/// line the attenuators go into, how many of those lines run in parallel,
/// and the power plan.
pub struct EvalContext<'a> {
    pub fridge: &'a FridgeModel,
    pub catalog: &'a Catalog,
    pub line_template: &'a LineSpec,
    pub line_count: f64,
    pub drive_plan: DrivePlan,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigCandidate {
    pub per_stage_db: Vec<f64>,
    pub n_mxc: f64,
    /// Active-load fraction of cooling power per stage, for `line_count` lines.
    pub fractions: Vec<f64>,
    pub attenuator_count: usize,
    pub feasible: bool,
}

/// Score one per-stage attenuation assignment. `n_with_cable_loss` selects
/// whether the occupation includes distributed cable loss (the quoted values
/// use the lossless convention).
pub fn evaluate_config(
    per_stage_db: &[f64],
    ctx: &EvalContext,
    n_with_cable_loss: bool,
) -> Result<ConfigCandidate> {
    let n = ctx.fridge.stages.len();
    if per_stage_db.len() != n {
        return Err(CryoError::Config(format!(
            "expected {n} per-stage attenuations, got {}",
            per_stage_db.len()
        )));
    }
    let mut line = ctx.line_template.clone();
    line.attenuators_db = ctx
        .fridge
        .stages
        .iter()
        .zip(per_stage_db)
        .filter(|(_, &db)| db != 0.0)
        .map(|(s, &db)| (s.name.clone(), db))
        .collect();

    let n_mxc =
        line_n_mxc(&line, ctx.fridge, ctx.catalog, ctx.drive_plan.frequency_hz, n_with_cable_loss)?;

    let input = input_power_for_delivered(&line, ctx.fridge, ctx.catalog, &ctx.drive_plan)?;
    let prof = active_loads_per_stage(
        &line,
        ctx.fridge,
        ctx.catalog,
        input,
        ctx.drive_plan.frequency_hz,
        !ctx.drive_plan.with_cable_loss,
        crate::budget::STILL_ABSORPTION_DEFAULT,
    )?;
    let fractions: Vec<f64> = ctx
        .fridge
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| ctx.line_count * prof.dissipated_w[i] / s.cooling_power_w)
        .collect();

    Ok(ConfigCandidate {
        per_stage_db: per_stage_db.to_vec(),
        n_mxc,
        fractions,
        attenuator_count: per_stage_db.iter().filter(|&&d| d != 0.0).count(),
        feasible: true,
    })
}

fn is_feasible(c: &ConfigCandidate, constraints: &SearchConstraints, fridge: &FridgeModel) -> bool {
    if let Some(maxn) = constraints.max_attenuators {
        if c.attenuator_count > maxn {
            return false;
        }
    }
    for (stage, cap) in &constraints.max_fraction {
        if let Ok(idx) = fridge.stage_index(stage) {
            if c.fractions[idx] > *cap {
                return false;
            }
        }
    }
    true
}

fn lex_less(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Exhaustively enumerate compositions of `total_db` from the allowed values,
/// evaluate, filter by the constraints, and sort by the objective
/// (lexicographic tie-break for determinism). Infeasible combinations are
/// kept in the list with `feasible = false` but rank after feasible ones.
pub fn enumerate(constraints: &SearchConstraints, ctx: &EvalContext) -> Result<Vec<ConfigCandidate>> {
    if constraints.allowed_values_db.is_empty() {
        return Ok(Vec::new());
    }
    let n = ctx.fridge.stages.len();
    let mut values = constraints.allowed_values_db.clone();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();

    let mut out = Vec::new();
    let mut assignment = vec![0.0; n];
    fn walk(
        values: &[f64],
        total: f64,
        assignment: &mut Vec<f64>,
        depth: usize,
        acc: f64,
        out: &mut Vec<Vec<f64>>,
    ) {
        if depth == assignment.len() {
            if (acc - total).abs() < 1e-9 {
                out.push(assignment.clone());
            }
            return;
        }
        for &v in values {
            if acc + v > total + 1e-9 {
                break;
            }
            assignment[depth] = v;
            walk(values, total, assignment, depth + 1, acc + v, out);
        }
        assignment[depth] = 0.0;
    }
    let mut raw = Vec::new();
    walk(&values, constraints.total_db, &mut assignment, 0, 0.0, &mut raw);

    for combo in raw {
        let mut cand = evaluate_config(&combo, ctx, constraints.with_cable_loss)?;
        cand.feasible = is_feasible(&cand, constraints, ctx.fridge);
        out.push(cand);
    }

    let max_fraction =
        |c: &ConfigCandidate| c.fractions.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    out.sort_by(|a, b| {
        b.feasible
            .cmp(&a.feasible)
            .then_with(|| match constraints.objective {
                Objective::MinNMxc => a.n_mxc.partial_cmp(&b.n_mxc).unwrap(),
                Objective::MinMaxFraction => {
                    max_fraction(a).partial_cmp(&max_fraction(b)).unwrap()
                }
                Objective::Pareto => {
                    // rank by domination count, then n_mxc
                    a.n_mxc.partial_cmp(&b.n_mxc).unwrap()
                }
            })
            .then_with(|| lex_less(&a.per_stage_db, &b.per_stage_db))
    });

    if constraints.objective == Objective::Pareto {
        // stable partition: non-dominated candidates first
        let dominated = |c: &ConfigCandidate| {
            out.iter().any(|o| {
                o.n_mxc <= c.n_mxc
                    && max_fraction(o) <= max_fraction(c)
                    && (o.n_mxc < c.n_mxc || max_fraction(o) < max_fraction(c))
            })
        };
        let flags: Vec<bool> = out.iter().map(dominated).collect();
        let (front, rest): (Vec<_>, Vec<_>) =
            out.into_iter().zip(flags).partition(|(_, dominated)| !dominated);
        out = front.into_iter().chain(rest).map(|(c, _)| c).collect();
    }
    Ok(out)
}

/// n_MXC as a function of one stage's attenuation with the others fixed.
pub fn sweep_single_stage(
    stage: &str,
    from_db: f64,
    to_db: f64,
    step_db: f64,
    fixed: &[f64],
    ctx: &EvalContext,
) -> Result<Vec<(f64, f64)>> {
    if step_db <= 0.0 {
        return Err(CryoError::Domain(format!("step {step_db} dB must be > 0")));
    }
    let idx = ctx.fridge.stage_index(stage)?;
    let mut curve = Vec::new();
    let mut db = from_db;
    while db <= to_db + 1e-9 {
        let mut combo = fixed.to_vec();
        combo[idx] = db;
        let cand = evaluate_config(&combo, ctx, false)?;
        curve.push((db, cand.n_mxc));
        db += step_db;
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset_line;
    use crate::fridge::LineKind;

    fn ctx<'a>(fridge: &'a FridgeModel, cat: &'a Catalog, line: &'a LineSpec) -> EvalContext<'a> {
        EvalContext {
            fridge,
            catalog: cat,
            line_template: line,
            line_count: 25.0,
            drive_plan: DrivePlan { delivered_dbm: -78.0, frequency_hz: 6e9, with_cable_loss: true },
        }
    }

    #[test]
    fn c1_large_cp_fraction_and_c3_small_mxc() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let c1 = evaluate_config(&[0.0, 10.0, 0.0, 20.0, 30.0], &cx, false).unwrap();
        assert!((c1.n_mxc - 0.0012).abs() / 0.0012 < 0.15);
        let cp = fridge.stage_index("CP").unwrap();
        assert!(c1.fractions[cp] > 0.15, "C1 CP fraction {}", c1.fractions[cp]);
        let c3 = evaluate_config(&[0.0, 20.0, 0.0, 20.0, 20.0], &cx, false).unwrap();
        let mxc = fridge.stage_index("MXC").unwrap();
        assert!(c3.fractions[mxc] < 0.01, "C3 MXC fraction {}", c3.fractions[mxc]);
        assert!(c1.fractions[mxc] > 10.0 * c3.fractions[mxc] * 0.5);
    }

    #[test]
    fn all_zero_config_passes_input_through() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 1, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let c = evaluate_config(&[0.0; 5], &cx, false).unwrap();
        let n_in = crate::noise::bose_einstein(300.0, 6e9);
        assert!((c.n_mxc - n_in).abs() / n_in < 1e-9);
    }

    #[test]
    fn enumeration_matches_brute_force_oracle() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let constraints = SearchConstraints {
            total_db: 60.0,
            allowed_values_db: vec![0.0, 10.0, 20.0, 30.0],
            ..Default::default()
        };
        let got = enumerate(&constraints, &cx).unwrap();
        // independent nested-loop oracle
        let vals = [0.0, 10.0, 20.0, 30.0];
        let mut oracle = Vec::new();
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        for e in vals {
                            if (a + b + c + d + e - 60.0).abs() < 1e-9 {
                                oracle.push(vec![a, b, c, d, e]);
                            }
                        }
                    }
                }
            }
        }
        let mut got_set: Vec<Vec<f64>> = got.iter().map(|c| c.per_stage_db.clone()).collect();
        got_set.sort_by(|a, b| lex_less(a, b));
        oracle.sort_by(|a, b| lex_less(a, b));
        assert_eq!(got_set, oracle);
    }

    #[test]
    fn published_compromise_config_ranks_first_among_three_attenuator_solutions() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let mut max_fraction = BTreeMap::new();
        max_fraction.insert("CP".to_string(), 0.05);
        max_fraction.insert("MXC".to_string(), 0.01);
        let constraints = SearchConstraints {
            total_db: 60.0,
            allowed_values_db: vec![0.0, 10.0, 20.0, 30.0],
            max_fraction,
            max_attenuators: Some(3),
            ..Default::default()
        };
        let ranked = enumerate(&constraints, &cx).unwrap();
        let top = ranked.iter().find(|c| c.feasible).expect("some feasible config");
        assert_eq!(top.per_stage_db, vec![0.0, 20.0, 0.0, 20.0, 20.0], "got {top:?}");
    }

    #[test]
    fn feasible_set_shrinks_as_constraints_tighten() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let count = |cap: f64| {
            let mut max_fraction = BTreeMap::new();
            max_fraction.insert("CP".to_string(), cap);
            let c = SearchConstraints {
                total_db: 60.0,
                allowed_values_db: vec![0.0, 10.0, 20.0, 30.0],
                max_fraction,
                ..Default::default()
            };
            enumerate(&c, &cx).unwrap().iter().filter(|x| x.feasible).count()
        };
        assert!(count(0.01) <= count(0.05));
        assert!(count(0.05) <= count(0.5));
    }

    #[test]
    fn unconstrained_minimum_puts_allowed_max_at_coldest_stage() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let constraints = SearchConstraints {
            total_db: 60.0,
            allowed_values_db: vec![0.0, 10.0, 20.0, 30.0],
            ..Default::default()
        };
        let ranked = enumerate(&constraints, &cx).unwrap();
        let coldest = fridge.coldest_index();
        let best = &ranked[0];
        assert_eq!(best.per_stage_db[coldest], 30.0, "best {best:?}");
    }

    #[test]
    fn zero_total_is_single_all_zero_candidate() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 1, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let c = SearchConstraints { total_db: 0.0, allowed_values_db: vec![0.0, 10.0], ..Default::default() };
        let ranked = enumerate(&c, &cx).unwrap();
        assert_eq!(ranked.len(), 1);
        assert!(ranked[0].per_stage_db.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn unreachable_total_gives_empty_result() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 1, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let c = SearchConstraints { total_db: 7.0, allowed_values_db: vec![0.0, 10.0], ..Default::default() };
        assert!(enumerate(&c, &cx).unwrap().is_empty());
    }

    #[test]
    fn sweep_flattens_at_4k_and_stays_loglinear_at_coldest() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let fixed = [0.0, 0.0, 0.0, 20.0, 20.0];
        let curve = sweep_single_stage("4K", 0.0, 40.0, 5.0, &fixed, &cx).unwrap();
        // once the 4K noise floor is reached, extra attenuation buys little
        let at20 = curve.iter().find(|(d, _)| *d == 20.0).unwrap().1;
        let at40 = curve.iter().find(|(d, _)| *d == 40.0).unwrap().1;
        assert!(at20 / at40 < 2.0, "flattening: {at20} vs {at40}");
        let fixed_m = [0.0, 20.0, 0.0, 20.0, 0.0];
        let mxc_curve = sweep_single_stage("MXC", 0.0, 30.0, 10.0, &fixed_m, &cx).unwrap();
        for w in mxc_curve.windows(2) {
            let ratio = w[0].1 / w[1].1;
            assert!((ratio - 10.0).abs() / 10.0 < 0.05, "log-linear decrease: {ratio}");
        }
        // zero-length range
        assert!(sweep_single_stage("4K", 10.0, 5.0, 1.0, &fixed, &cx).unwrap().is_empty());
    }

    #[test]
    fn enumeration_independent_of_allowed_value_order() {
        let fridge = FridgeModel::default();
        let cat = Catalog::builtin();
        let line = preset_line(LineKind::Drive, "drive", 25, &fridge).unwrap();
        let cx = ctx(&fridge, cat, &line);
        let mk = |vals: Vec<f64>| SearchConstraints {
            total_db: 40.0,
            allowed_values_db: vals,
            ..Default::default()
        };
        let a = enumerate(&mk(vec![0.0, 10.0, 20.0]), &cx).unwrap();
        let b = enumerate(&mk(vec![20.0, 0.0, 10.0]), &cx).unwrap();
        let da: Vec<_> = a.iter().map(|c| c.per_stage_db.clone()).collect();
        let db: Vec<_> = b.iter().map(|c| c.per_stage_db.clone()).collect();
        assert_eq!(da, db);
    }
}
