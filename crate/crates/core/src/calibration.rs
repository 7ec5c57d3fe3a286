//! Turning measured temperature data into model coefficients: reference-curve
//! fits, temperature-rise inversion with the cross-stage correction, and
//! through-origin quadratic resistance fits.

use serde::{Deserialize, Serialize};

use crate::error::{CryoError, Result};

/// One heater sweep: power applied to `heated_stage`, steady-state
/// temperatures everywhere.
#[derive(Debug, Clone)]
pub struct MeasurementSeries {
    pub heated_stage: String,
    pub stage_names: Vec<String>,
    /// Rows sorted by applied power; the first row is the zero-power baseline.
    pub rows: Vec<MeasurementRow>,
}

#[derive(Debug, Clone)]
pub struct MeasurementRow {
    pub applied_power_w: f64,
    pub temperatures_k: Vec<f64>,
}

impl MeasurementSeries {
    pub fn validate(&self) -> Result<()> {
        if self.rows.len() < 3 {
            return Err(CryoError::Fit(format!(
                "series heating `{}` needs at least 3 rows, got {}",
                self.heated_stage,
                self.rows.len()
            )));
        }
        if self.rows[0].applied_power_w != 0.0 {
            return Err(CryoError::Fit("first row must be the zero-power baseline".into()));
        }
        for w in self.rows.windows(2) {
            if w[1].applied_power_w < w[0].applied_power_w {
                return Err(CryoError::Fit("rows must be sorted by applied power".into()));
            }
        }
        if !self.stage_names.contains(&self.heated_stage) {
            return Err(CryoError::Fit(format!("unknown heated stage `{}`", self.heated_stage)));
        }
        Ok(())
    }

    fn stage_idx(&self, name: &str) -> usize {
        self.stage_names.iter().position(|s| s == name).unwrap()
    }
}

/// Linearized fridge response around the operating point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseCoefficients {
    pub stage_names: Vec<String>,
    /// Self response dP_i/dT_i, W/K.
    #[serde(rename = "dp_dt_W_per_K")]
    pub dp_dt_w_per_k: Vec<f64>,
    /// Cross response dT_i/dP_{i-1}, K/W; entry 0 (below room temperature) is 0.
    #[serde(rename = "dt_dp_cross_K_per_W")]
    pub dt_dp_cross_k_per_w: Vec<f64>,
    /// Relative temperature-rise window used for the linear fits.
    pub fit_window_fraction: f64,
    /// Fit residual RMS per stage, K.
    #[serde(rename = "residual_rms_K")]
    pub residual_rms_k: Vec<f64>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Least-squares slope of y on x through the point cloud (with intercept).
fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Extract self and cross response coefficients from heater sweeps.
///
/// The self slope of stage i comes from the series heating stage i, restricted
/// to the low-rise window `(T - T0)/T0 <= window_fraction`; the cross
/// coefficient dT_i/dP_{i-1} comes from the series heating stage i-1.
pub fn fit_reference(
    series: &[MeasurementSeries],
    stage_names: &[String],
    window_fraction: f64,
) -> Result<ResponseCoefficients> {
    if series.is_empty() {
        return Err(CryoError::Fit("no measurement series given".into()));
    }
    for s in series {
        s.validate()?;
        if s.stage_names != stage_names {
            return Err(CryoError::Fit(format!(
                "series heating `{}` has stage names {:?}, expected {:?}",
                s.heated_stage, s.stage_names, stage_names
            )));
        }
    }
    let n = stage_names.len();
    let mut dp_dt = vec![f64::NAN; n];
    let mut cross = vec![0.0; n];
    let mut rms = vec![0.0; n];
    let mut warnings = Vec::new();

    for s in series {
        let heated = s.stage_idx(&s.heated_stage);
        let t0 = s.rows[0].temperatures_k[heated];
        // window: baseline plus rows with a bounded relative rise on the heated stage
        let in_window: Vec<&MeasurementRow> = s
            .rows
            .iter()
            .filter(|r| (r.temperatures_k[heated] - t0) / t0 <= window_fraction)
            .collect();
        let rows: Vec<&MeasurementRow> =
            if in_window.len() >= 2 { in_window } else { s.rows.iter().take(2).collect() };
        if rows.len() < s.rows.len() / 2 && rows.len() < 3 {
            warnings.push(format!(
                "series `{}`: only {} rows inside the {:.0}% window",
                s.heated_stage,
                rows.len(),
                window_fraction * 100.0
            ));
        }
        let ps: Vec<f64> = rows.iter().map(|r| r.applied_power_w).collect();
        let ts: Vec<f64> = rows.iter().map(|r| r.temperatures_k[heated]).collect();
        let (slope, icpt) = ls_slope(&ps, &ts)
            .ok_or_else(|| CryoError::Fit(format!("degenerate series for `{}`", s.heated_stage)))?;
        if slope <= 0.0 {
            warnings.push(format!(
                "series `{}`: non-increasing temperature response, slope {slope}",
                s.heated_stage
            ));
        }
        dp_dt[heated] = 1.0 / slope;
        let ss: f64 = ps
            .iter()
            .zip(&ts)
            .map(|(p, t)| {
                let r = t - (icpt + slope * p);
                r * r
            })
            .sum();
        rms[heated] = (ss / ps.len() as f64).sqrt();

        // cross response of the stage directly below the heated one
        if heated + 1 < n {
            let below = heated + 1;
            let tb: Vec<f64> = rows.iter().map(|r| r.temperatures_k[below]).collect();
            if let Some((cslope, _)) = ls_slope(&ps, &tb) {
                cross[below] = cslope.max(0.0);
            }
        }
    }

    if dp_dt.iter().any(|v| v.is_nan()) {
        let missing: Vec<&str> = stage_names
            .iter()
            .zip(&dp_dt)
            .filter(|(_, v)| v.is_nan())
            .map(|(s, _)| s.as_str())
            .collect();
        return Err(CryoError::Fit(format!("no series heats stage(s) {missing:?}")));
    }
    Ok(ResponseCoefficients {
        stage_names: stage_names.to_vec(),
        dp_dt_w_per_k: dp_dt,
        dt_dp_cross_k_per_w: cross,
        fit_window_fraction: window_fraction,
        residual_rms_k: rms,
        warnings,
    })
}

#[derive(Debug, Clone)]
pub struct ExtractedLoads {
    pub per_stage_w: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Invert observed temperature rises into per-stage loads:
/// `dP_i = (dP_i/dT_i) * (dT_i - (dT_i/dP_{i-1}) * dP_{i-1})`, applied from
/// the warmest stage down so the cross correction uses the already-extracted
/// load above.
pub fn extract_passive_load(
    baseline_k: &[f64],
    loaded_k: &[f64],
    coeffs: &ResponseCoefficients,
) -> Result<ExtractedLoads> {
    let n = coeffs.stage_names.len();
    if baseline_k.len() != n || loaded_k.len() != n {
        return Err(CryoError::Fit(format!(
            "expected {n} stage temperatures, got {} / {}",
            baseline_k.len(),
            loaded_k.len()
        )));
    }
    let mut loads = vec![0.0; n];
    let mut warnings = Vec::new();
    for i in 0..n {
        let dt = loaded_k[i] - baseline_k[i];
        let corrected = dt - if i > 0 { coeffs.dt_dp_cross_k_per_w[i] * loads[i - 1] } else { 0.0 };
        if corrected < 0.0 {
            warnings.push(format!(
                "stage `{}`: corrected rise {corrected:.3e} K is negative, clamped to zero",
                coeffs.stage_names[i]
            ));
            loads[i] = 0.0;
        } else {
            loads[i] = coeffs.dp_dt_w_per_k[i] * corrected;
        }
    }
    Ok(ExtractedLoads { per_stage_w: loads, warnings })
}

/// Forward model of the same linearization: temperatures after applying
/// `loads_w`. Used by the prediction path and the round-trip tests.
pub fn apply_loads(baseline_k: &[f64], loads_w: &[f64], coeffs: &ResponseCoefficients) -> Vec<f64> {
    let n = coeffs.stage_names.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut t = baseline_k[i] + loads_w[i] / coeffs.dp_dt_w_per_k[i];
        if i > 0 {
            t += coeffs.dt_dp_cross_k_per_w[i] * loads_w[i - 1];
        }
        out.push(t);
    }
    out
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResistanceFit {
    pub r_eff_ohm: f64,
    pub std_error_ohm: f64,
}

/// Least-squares fit of P = R I^2 (through the origin, linear in I^2).
pub fn fit_effective_resistance(points: &[(f64, f64)]) -> Result<ResistanceFit> {
    if points.len() < 3 {
        return Err(CryoError::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    let sx4: f64 = points.iter().map(|(i, _)| i.powi(4)).sum();
    if sx4 == 0.0 {
        return Err(CryoError::Fit("all currents are zero".into()));
    }
    let sx2y: f64 = points.iter().map(|(i, p)| i * i * p).sum();
    let r = sx2y / sx4;
    let ss_res: f64 = points
        .iter()
        .map(|(i, p)| {
            let res = p - r * i * i;
            res * res
        })
        .sum();
    let dof = (points.len() - 1) as f64;
    let std_error = (ss_res / dof / sx4).sqrt();
    Ok(ResistanceFit { r_eff_ohm: r, std_error_ohm: std_error })
}

/// Whether CP/MXC extractions are valid at the reference circulation flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "state", content = "detail")]
pub enum FlowValidity {
    Valid,
    Invalid(String),
    Unknown,
}

/// Cold-stage extractions only hold at the reference Still temperature
/// (i.e. the reference He3 flow); this tags a dataset accordingly.
pub fn still_flow_normalize(
    still_temperature_k: Option<f64>,
    reference_k: f64,
    tolerance_k: f64,
) -> FlowValidity {
    match still_temperature_k {
        None => FlowValidity::Unknown,
        Some(t) if (t - reference_k).abs() <= tolerance_k => FlowValidity::Valid,
        Some(t) => FlowValidity::Invalid(format!(
            "Still at {t} K, CP/MXC extractions require {reference_k} +/- {tolerance_k} K; \
             reduce the Still heater to the reference flow first"
        )),
    }
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

/// Parse a heater-sweep CSV:
///
/// ```text
/// # heated_stage=4K
/// applied_power_W,T_50K,T_4K,T_Still,T_CP,T_MXC
/// 0,35,2.85,0.882,0.082,0.006
/// ```
pub fn parse_measurement_csv(text: &str) -> Result<MeasurementSeries> {
    let mut heated: Option<String> = None;
    let mut stage_names: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let human = lineno + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("heated_stage=") {
                heated = Some(v.trim().to_string());
            }
            continue;
        }
        if stage_names.is_none() {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.first() != Some(&"applied_power_W") {
                return Err(CryoError::Config(format!(
                    "line {human}: header must start with `applied_power_W`, got `{line}`"
                )));
            }
            let names: Result<Vec<String>> = cols[1..]
                .iter()
                .map(|c| {
                    c.strip_prefix("T_").map(str::to_string).ok_or_else(|| {
                        CryoError::Config(format!(
                            "line {human}: temperature column `{c}` must be named T_<stage>"
                        ))
                    })
                })
                .collect();
            stage_names = Some(names?);
            continue;
        }
        let names = stage_names.as_ref().unwrap();
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != names.len() + 1 {
            return Err(CryoError::Config(format!(
                "line {human}: expected {} fields, got {}",
                names.len() + 1,
                cols.len()
            )));
        }
        let mut vals = Vec::with_capacity(cols.len());
        for c in &cols {
            vals.push(c.parse::<f64>().map_err(|_| {
                CryoError::Config(format!("line {human}: `{c}` is not a number"))
            })?);
        }
        rows.push(MeasurementRow { applied_power_w: vals[0], temperatures_k: vals[1..].to_vec() });
    }
    let heated = heated
        .ok_or_else(|| CryoError::Config("missing `# heated_stage=<name>` metadata line".into()))?;
    let stage_names =
        stage_names.ok_or_else(|| CryoError::Config("missing CSV header row".into()))?;
    let series = MeasurementSeries { heated_stage: heated, stage_names, rows };
    series.validate()?;
    Ok(series)
}

/// Parse a current/load CSV with header `current_A,load_W`.
pub fn parse_resistance_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    let mut seen_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let human = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != "current_A,load_W" {
                return Err(CryoError::Config(format!(
                    "line {human}: header must be `current_A,load_W`, got `{line}`"
                )));
            }
            seen_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 {
            return Err(CryoError::Config(format!("line {human}: expected 2 fields")));
        }
        let i = cols[0]
            .parse::<f64>()
            .map_err(|_| CryoError::Config(format!("line {human}: `{}` is not a number", cols[0])))?;
        let p = cols[1]
            .parse::<f64>()
            .map_err(|_| CryoError::Config(format!("line {human}: `{}` is not a number", cols[1])))?;
        points.push((i, p));
    }
    if !seen_header {
        return Err(CryoError::Config("missing CSV header row".into()));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn names() -> Vec<String> {
        ["50K", "4K", "Still", "CP", "MXC"].iter().map(|s| s.to_string()).collect()
    }

    fn linear_series(heated: usize, g: f64, base: &[f64], cross: f64, n_rows: usize, p_max: f64) -> MeasurementSeries {
        let names = names();
        let rows = (0..n_rows)
            .map(|k| {
                let p = p_max * k as f64 / (n_rows - 1) as f64;
                let mut t = base.to_vec();
                t[heated] += p / g;
                if heated + 1 < t.len() {
                    t[heated + 1] += cross * p;
                }
                MeasurementRow { applied_power_w: p, temperatures_k: t }
            })
            .collect();
        MeasurementSeries { heated_stage: names[heated].clone(), stage_names: names, rows }
    }

    const BASE: [f64; 5] = [35.0, 2.85, 0.882, 0.082, 0.0061];

    #[test]
    fn exact_linear_recovery() {
        let gains = [3.0, 1.1, 0.125, 3.4e-3, 6.7e-4];
        let series: Vec<MeasurementSeries> = (0..5)
            .map(|i| linear_series(i, gains[i], &BASE, 0.0, 6, BASE[i] * 0.2 * gains[i]))
            .collect();
        let coeffs = fit_reference(&series, &names(), 0.30).unwrap();
        for i in 0..5 {
            assert_relative_eq!(coeffs.dp_dt_w_per_k[i], gains[i], max_relative = 1e-9);
        }
    }

    #[test]
    fn cross_coefficient_recovery() {
        let gains = [3.0, 1.1, 0.125, 3.4e-3, 6.7e-4];
        let series: Vec<MeasurementSeries> = (0..5)
            .map(|i| linear_series(i, gains[i], &BASE, 0.02, 6, BASE[i] * 0.2 * gains[i]))
            .collect();
        let coeffs = fit_reference(&series, &names(), 0.30).unwrap();
        for i in 1..5 {
            assert_relative_eq!(coeffs.dt_dp_cross_k_per_w[i], 0.02, max_relative = 1e-9);
        }
    }

    #[test]
    fn round_trip_forward_then_inverse() {
        let gains = [3.0, 1.1, 0.125, 3.4e-3, 6.7e-4];
        let series: Vec<MeasurementSeries> = (0..5)
            .map(|i| linear_series(i, gains[i], &BASE, 0.015, 6, BASE[i] * 0.2 * gains[i]))
            .collect();
        let coeffs = fit_reference(&series, &names(), 0.30).unwrap();
        let loads = [0.9, 0.05, 2e-5, 4e-7, 1.3e-6];
        let loaded = apply_loads(&BASE, &loads, &coeffs);
        let back = extract_passive_load(&BASE, &loaded, &coeffs).unwrap();
        for i in 0..5 {
            assert_relative_eq!(back.per_stage_w[i], loads[i], max_relative = 1e-9);
        }
        assert!(back.warnings.is_empty());
    }

    #[test]
    fn zero_rise_gives_zero_loads() {
        let gains = [3.0, 1.1, 0.125, 3.4e-3, 6.7e-4];
        let series: Vec<MeasurementSeries> =
            (0..5).map(|i| linear_series(i, gains[i], &BASE, 0.0, 5, BASE[i] * 0.2 * gains[i])).collect();
        let coeffs = fit_reference(&series, &names(), 0.30).unwrap();
        let out = extract_passive_load(&BASE, &BASE, &coeffs).unwrap();
        assert!(out.per_stage_w.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn skipping_cross_term_overstates_still_load() {
        // shaped like the published reference data: heating 4K drags the Still up
        let gains = [3.0, 1.1, 0.125, 3.4e-3, 6.7e-4];
        let mut coeffs = fit_reference(
            &(0..5)
                .map(|i| linear_series(i, gains[i], &BASE, 0.0, 5, BASE[i] * 0.2 * gains[i]))
                .collect::<Vec<_>>(),
            &names(),
            0.30,
        )
        .unwrap();
        coeffs.dt_dp_cross_k_per_w[2] = 2.0; // K/W from 4K into Still
        let true_loads = [0.0, 0.05, 1.0e-5, 0.0, 0.0];
        let loaded = apply_loads(&BASE, &true_loads, &coeffs);
        let with = extract_passive_load(&BASE, &loaded, &coeffs).unwrap().per_stage_w[2];
        let without = {
            let mut c2 = coeffs.clone();
            c2.dt_dp_cross_k_per_w = vec![0.0; 5];
            extract_passive_load(&BASE, &loaded, &c2).unwrap().per_stage_w[2]
        };
        assert_relative_eq!(with, 1.0e-5, max_relative = 1e-9);
        assert!(without > 1.2 * with, "cross-term correction must exceed 20%: {without} vs {with}");
    }

    #[test]
    fn window_shrink_converges_to_tangent() {
        // quadratic response T = T0 + aP + bP^2: shrinking windows approach slope a
        let names_v = names();
        let (a, b) = (2.0, 40.0);
        let mk = |p_max: f64| {
            let rows = (0..12)
                .map(|k| {
                    let p = p_max * k as f64 / 11.0;
                    let mut t = BASE.to_vec();
                    t[0] = BASE[0] + a * p + b * p * p;
                    MeasurementRow { applied_power_w: p, temperatures_k: t }
                })
                .collect();
            MeasurementSeries { heated_stage: "50K".into(), stage_names: names_v.clone(), rows }
        };
        // wider window -> stronger quadratic bias; narrow -> near-tangent
        let wide_rows = [mk(3.0)];
        let wide = fit_reference(&wide_rows, &names_v, 1.0).unwrap().dp_dt_w_per_k[0];
        let narrow_rows = [mk(0.05)];
        let narrow = fit_reference(&narrow_rows, &names_v, 1.0).unwrap().dp_dt_w_per_k[0];
        let tangent = 1.0 / a;
        assert!((narrow - tangent).abs() < (wide - tangent).abs());
        assert_relative_eq!(narrow, tangent, max_relative = 0.02);
    }

    #[test]
    fn linear_extraction_in_dt() {
        let gains = [3.0, 1.1, 0.125, 3.4e-3, 6.7e-4];
        let series: Vec<MeasurementSeries> =
            (0..5).map(|i| linear_series(i, gains[i], &BASE, 0.0, 5, BASE[i] * 0.2 * gains[i])).collect();
        let coeffs = fit_reference(&series, &names(), 0.30).unwrap();
        let mut t1 = BASE.to_vec();
        t1[1] += 0.01;
        let mut t2 = BASE.to_vec();
        t2[1] += 0.02;
        let p1 = extract_passive_load(&BASE, &t1, &coeffs).unwrap().per_stage_w[1];
        let p2 = extract_passive_load(&BASE, &t2, &coeffs).unwrap().per_stage_w[1];
        assert_relative_eq!(p2, 2.0 * p1, max_relative = 1e-12);
    }

    #[test]
    fn resistance_fit_goldens() {
        let mk = |r: f64| -> Vec<(f64, f64)> {
            (0..=10).map(|k| {
                let i = 4.6e-3 * k as f64 / 10.0;
                (i, r * i * i)
            }).collect()
        };
        let fit = fit_effective_resistance(&mk(0.15)).unwrap();
        assert_relative_eq!(fit.r_eff_ohm, 0.15, max_relative = 1e-12);
        assert!(fit.std_error_ohm < 1e-12);
        assert_relative_eq!(fit_effective_resistance(&mk(0.42)).unwrap().r_eff_ohm, 0.42, max_relative = 1e-12);
        // all-zero loads -> R = 0
        let zeros: Vec<(f64, f64)> = (1..=5).map(|k| (k as f64 * 1e-3, 0.0)).collect();
        assert_eq!(fit_effective_resistance(&zeros).unwrap().r_eff_ohm, 0.0);
        // degenerate: all currents zero
        assert!(fit_effective_resistance(&[(0.0, 0.0), (0.0, 1.0), (0.0, 2.0)]).is_err());
    }

    #[test]
    fn resistance_fit_order_and_duplication_invariant() {
        let pts: Vec<(f64, f64)> =
            (1..=8).map(|k| (k as f64 * 1e-3, 0.3 * (k as f64 * 1e-3).powi(2) + 1e-12)).collect();
        let a = fit_effective_resistance(&pts).unwrap().r_eff_ohm;
        let mut rev = pts.clone();
        rev.reverse();
        let b = fit_effective_resistance(&rev).unwrap().r_eff_ohm;
        assert_eq!(a, b);
        let mut dup = pts.clone();
        dup.extend_from_slice(&pts);
        let c = fit_effective_resistance(&dup).unwrap().r_eff_ohm;
        assert_relative_eq!(a, c, max_relative = 1e-12);
    }

    #[test]
    fn flow_validity_states() {
        assert_eq!(still_flow_normalize(Some(0.882), 0.882, 1e-3), FlowValidity::Valid);
        assert!(matches!(still_flow_normalize(Some(0.950), 0.882, 1e-3), FlowValidity::Invalid(_)));
        assert_eq!(still_flow_normalize(None, 0.882, 1e-3), FlowValidity::Unknown);
    }

    #[test]
    fn csv_parsing_and_errors() {
        let good = "# heated_stage=4K\napplied_power_W,T_50K,T_4K\n0,35,2.85\n0.5,35.1,3.2\n0.9,35.2,3.5\n";
        let s = parse_measurement_csv(good).unwrap();
        assert_eq!(s.heated_stage, "4K");
        assert_eq!(s.stage_names, vec!["50K".to_string(), "4K".to_string()]);
        assert_eq!(s.rows.len(), 3);

        let bad = "# heated_stage=4K\napplied_power_W,T_50K,T_4K\n0,35,2.85\n0.5,oops,3.2\n";
        let err = parse_measurement_csv(bad).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");

        let no_meta = "applied_power_W,T_50K\n0,35\n1,36\n2,37\n";
        assert!(parse_measurement_csv(no_meta).is_err());
    }
}
