//! Deterministic CSV and JSON emission. CSV follows RFC 4180 quoting with
//! `.` decimal separators and LF line endings; identical inputs produce
//! byte-identical output.

use crate::attenopt::ConfigCandidate;
use crate::budget::BudgetReport;
use crate::error::Result;
use crate::fridge::{FridgeModel, LineSpec};
use crate::heatflow::line_passive_profile;
use crate::materials::Catalog;

/// Quote a field when it contains a comma, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> CsvWriter {
        let mut w = CsvWriter { buf: String::new() };
        w.row(header);
        w
    }

    pub fn row(&mut self, fields: &[&str]) {
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Shortest round-trip float formatting (deterministic).
pub fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Stage budget CSV: `stage,quantity,value_W,fraction,bound_low,bound_high`.
pub fn budget_csv(report: &BudgetReport) -> String {
    let mut w = CsvWriter::new(&["stage", "quantity", "value_W", "fraction", "bound_low", "bound_high"]);
    for s in &report.stages {
        let frac = |v: f64| fmt(v / s.cooling_power_w);
        w.row(&[&s.stage, "passive", &fmt(s.passive_w), &frac(s.passive_w), &fmt(s.passive_low_w), &fmt(s.passive_high_w)]);
        w.row(&[&s.stage, "active", &fmt(s.active_w), &frac(s.active_w), "", ""]);
        w.row(&[&s.stage, "radiative", &fmt(s.radiative_w), &frac(s.radiative_w), "", ""]);
        w.row(&[&s.stage, "total", &fmt(s.total_w), &fmt(s.fraction_of_cooling), "", ""]);
    }
    w.finish()
}

/// Table of per-line passive loads: predicted bounds plus measured values.
pub fn passive_csv(
    lines: &[LineSpec],
    fridge: &FridgeModel,
    catalog: &Catalog,
) -> Result<String> {
    let mut w = CsvWriter::new(&[
        "line",
        "kind",
        "count",
        "stage",
        "predicted_low_W",
        "predicted_high_W",
        "measured_W",
    ]);
    for line in lines {
        let prof = line_passive_profile(line, fridge, catalog)?;
        for idx in line.crossed_stages(fridge) {
            let stage = &fridge.stages[idx].name;
            let measured = line
                .measured_passive_per_line_w
                .get(stage)
                .map(|v| fmt(*v))
                .unwrap_or_default();
            w.row(&[
                &line.name,
                &format!("{:?}", line.kind),
                &line.count.to_string(),
                stage,
                &fmt(prof.lower_w[idx]),
                &fmt(prof.upper_w[idx]),
                &measured,
            ]);
        }
    }
    Ok(w.finish())
}

/// n_MXC per named attenuator configuration, lossless and with cable loss.
pub fn noise_configs_csv(rows: &[(String, f64, f64)]) -> String {
    let mut w = CsvWriter::new(&["config", "n_mxc_lossless", "n_mxc_with_cables"]);
    for (name, lossless, lossy) in rows {
        w.row(&[name, &fmt(*lossless), &fmt(*lossy)]);
    }
    w.finish()
}

/// Photon occupation along a chain.
pub fn noise_profile_csv(labels: &[String], occupations: &[f64]) -> String {
    let mut w = CsvWriter::new(&["element", "n_after"]);
    for (l, n) in labels.iter().zip(occupations) {
        w.row(&[l, &fmt(*n)]);
    }
    w.finish()
}

/// Per-stage active fractions for each named configuration.
pub fn active_fractions_csv(stage_names: &[String], rows: &[(String, Vec<f64>)]) -> String {
    let mut header: Vec<&str> = vec!["config"];
    let names: Vec<String> = stage_names.iter().map(|s| format!("fraction_{s}")).collect();
    header.extend(names.iter().map(String::as_str));
    let mut w = CsvWriter::new(&header);
    for (name, fracs) in rows {
        let mut fields: Vec<String> = vec![name.clone()];
        fields.extend(fracs.iter().map(|f| fmt(*f)));
        let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
        w.row(&refs);
    }
    w.finish()
}

/// Per-stage active loads of a single line walk.
pub fn active_loads_csv(stage_names: &[String], incident: &[f64], dissipated: &[f64], delivered_w: f64) -> String {
    let mut w = CsvWriter::new(&["stage", "incident_W", "dissipated_W"]);
    for (i, s) in stage_names.iter().enumerate() {
        w.row(&[s, &fmt(incident[i]), &fmt(dissipated[i])]);
    }
    w.row(&["delivered", "", &fmt(delivered_w)]);
    w.finish()
}

/// Ranked candidate list from the attenuator search.
pub fn candidates_csv(stage_names: &[String], candidates: &[ConfigCandidate]) -> String {
    let mut header: Vec<String> = stage_names.iter().map(|s| format!("dB_{s}")).collect();
    header.push("n_mxc".into());
    for s in stage_names {
        header.push(format!("fraction_{s}"));
    }
    header.push("attenuators".into());
    header.push("feasible".into());
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut w = CsvWriter::new(&refs);
    for c in candidates {
        let mut fields: Vec<String> = c.per_stage_db.iter().map(|d| fmt(*d)).collect();
        fields.push(fmt(c.n_mxc));
        fields.extend(c.fractions.iter().map(|f| fmt(*f)));
        fields.push(c.attenuator_count.to_string());
        fields.push(c.feasible.to_string());
        let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
        w.row(&refs);
    }
    w.finish()
}

/// Sweep curve: attenuation versus occupation.
pub fn sweep_csv(stage: &str, curve: &[(f64, f64)]) -> String {
    let mut w = CsvWriter::new(&[&format!("dB_{stage}"), "n_mxc"]);
    for (db, n) in curve {
        w.row(&[&fmt(*db), &fmt(*n)]);
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_rules() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn lf_endings_and_determinism() {
        let mk = || {
            let mut w = CsvWriter::new(&["a", "b"]);
            w.row(&[&fmt(1.25e-6), &fmt(0.5)]);
            w.finish()
        };
        let one = mk();
        assert_eq!(one, mk());
        assert!(!one.contains('\r'));
        assert!(one.ends_with('\n'));
        assert!(one.contains("0.00000125") || one.contains("1.25e-6"), "{one}");
    }
}
