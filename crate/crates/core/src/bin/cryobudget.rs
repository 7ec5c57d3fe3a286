//! Command-line surface: config ingestion, scenario execution, CSV/JSON
//! report emission.
//!
//! Exit codes: 0 success (including empty results), 1 usage/config error,
//! 2 computation error. Errors go to stderr as one JSON object per line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cryobudget::attenopt::{enumerate, sweep_single_stage, EvalContext, Objective, SearchConstraints};
use cryobudget::budget::{active_loads_per_stage, input_power_for_delivered, line_n_mxc, DrivePlan};
use cryobudget::calibration::{
    fit_effective_resistance, fit_reference, parse_measurement_csv, parse_resistance_csv,
};
use cryobudget::config::{preset_line, preset_names, published_chain, Project};
use cryobudget::error::CryoError;
use cryobudget::fridge::LineKind;
use cryobudget::report;

#[derive(Parser)]
#[command(
    name = "cryobudget",
    about = "Dilution-refrigerator wiring heat-load and noise-budget engine",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Project config JSON path.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled preset: asbuilt, fig9, outlook1000.
    #[arg(long)]
    preset: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Project, CryoError> {
        match (&self.config, &self.preset) {
            (Some(path), None) => Project::from_config_str(&std::fs::read_to_string(path)?),
            (None, Some(name)) => Project::preset(name),
            (None, None) => Project::preset("fig9"),
            (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-line passive heat loads with thermalization bounds.
    Passive {
        #[command(flatten)]
        source: Source,
        /// Print the per-stage bounds to stdout as well.
        #[arg(long)]
        bounds: bool,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Thermal photon number through an attenuator configuration.
    Noise {
        #[command(flatten)]
        source: Source,
        /// Signal frequency, Hz.
        #[arg(long, default_value_t = 6e9)]
        freq: f64,
        /// Published configuration C1..C4, or `custom`.
        #[arg(long, default_value = "C3")]
        chain: String,
        /// Comma-separated per-stage dB for --chain custom, warm to cold.
        #[arg(long)]
        attens: Option<String>,
        /// Include distributed cable loss.
        #[arg(long)]
        with_cable_loss: bool,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Full per-stage heat budget against cooling powers.
    Budget {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Fit measurement data: reference response curves or R_eff.
    Fit {
        /// reference | resistance
        #[arg(long)]
        kind: String,
        /// Input CSV path.
        #[arg(long)]
        input: PathBuf,
        /// Output JSON path (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Relative temperature-rise window for reference fits.
        #[arg(long, default_value_t = 0.30)]
        window: f64,
    },
    /// Enumerate and rank attenuator placements.
    Optimize {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 60.0)]
        total_db: f64,
        /// Comma-separated allowed per-stage values, dB.
        #[arg(long, default_value = "0,3,6,10,20,30")]
        allowed: String,
        /// Per-stage active-fraction caps, e.g. --max-fraction CP=0.05.
        #[arg(long = "max-fraction")]
        max_fraction: Vec<String>,
        /// Cap on attenuators per line.
        #[arg(long)]
        max_attenuators: Option<usize>,
        /// min-n-mxc | min-max-fraction | pareto
        #[arg(long, default_value = "min-n-mxc")]
        objective: String,
        /// Lines sharing the configuration (for the fraction caps).
        #[arg(long, default_value_t = 25)]
        line_count: u32,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// n_MXC versus attenuation at one stage, others fixed.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Stage to sweep.
        #[arg(long)]
        stage: String,
        #[arg(long, default_value_t = 0.0)]
        from_db: f64,
        #[arg(long, default_value_t = 40.0)]
        to_db: f64,
        #[arg(long, default_value_t = 1.0)]
        step_db: f64,
        /// Comma-separated fixed per-stage dB, warm to cold.
        #[arg(long, default_value = "0,20,0,20,20")]
        fixed: String,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::json!({ "error": message, "kind": kind })
    );
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are success paths
            if e.use_stderr() {
                return fail("usage", &e.to_string(), 1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code() as u8;
            let kind = if code == 1 { "config" } else { "computation" };
            fail(kind, &e.to_string(), code)
        }
    }
}

fn write_file(outdir: &Path, name: &str, content: &str) -> Result<(), CryoError> {
    std::fs::create_dir_all(outdir)?;
    std::fs::write(outdir.join(name), content)?;
    Ok(())
}

fn parse_db_list(text: &str, expected: usize) -> Result<Vec<f64>, CryoError> {
    let vals: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|_| CryoError::Config(format!("`{text}` is not a comma-separated dB list")))?;
    if vals.len() != expected {
        return Err(CryoError::Config(format!(
            "expected {expected} per-stage values, got {} in `{text}`",
            vals.len()
        )));
    }
    Ok(vals)
}

fn run(cli: Cli) -> Result<(), CryoError> {
    match cli.command {
        Command::Passive { source, bounds, outdir } => {
            let project = source.load()?;
            let csv = report::passive_csv(&project.lines, &project.fridge, &project.catalog)?;
            write_file(&outdir, "passive.csv", &csv)?;
            if bounds {
                print!("{csv}");
            } else {
                println!("wrote {}", outdir.join("passive.csv").display());
            }
            Ok(())
        }

        Command::Noise { source, freq, chain, attens, with_cable_loss, outdir } => {
            let project = source.load()?;
            let fridge = &project.fridge;
            let per_stage = match (chain.as_str(), &attens) {
                ("custom", Some(list)) => parse_db_list(list, fridge.stages.len())?,
                ("custom", None) => {
                    return Err(CryoError::Config("--chain custom requires --attens".into()))
                }
                (name, _) => published_chain(name)
                    .ok_or_else(|| CryoError::UnknownEntry { kind: "chain", name: name.into() })?
                    .to_vec(),
            };
            let mut line = preset_line(LineKind::Drive, "noise", 1, fridge)?;
            line.attenuators_db = fridge
                .stages
                .iter()
                .zip(&per_stage)
                .filter(|(_, &db)| db != 0.0)
                .map(|(s, &db)| (s.name.clone(), db))
                .collect();
            let n = line_n_mxc(&line, fridge, &project.catalog, freq, with_cable_loss)?;
            println!("n_mxc = {n:.6e} at {freq:.3e} Hz ({chain}, cable loss: {with_cable_loss})");
            let chain_obj = cryobudget::budget::noise_chain(&line, fridge, &project.catalog, freq, with_cable_loss)?;
            let n_in = cryobudget::noise::bose_einstein(fridge.room_temperature_k, freq);
            let prof = cryobudget::noise::cascade_photon_number(&chain_obj, freq, n_in)?;
            let labels: Vec<String> = (0..prof.after_element.len()).map(|i| format!("element_{i}")).collect();
            write_file(&outdir, "noise_profile.csv", &report::noise_profile_csv(&labels, &prof.after_element))?;
            Ok(())
        }

        Command::Budget { source, outdir } => {
            let project = source.load()?;
            let rep = project.budget()?;
            let json = serde_json::to_string_pretty(&rep)
                .map_err(|e| CryoError::Config(e.to_string()))?;
            write_file(&outdir, "budget.json", &(json + "\n"))?;
            write_file(&outdir, "fig9.csv", &report::budget_csv(&rep))?;

            // companion figure datasets: configurations C1..C4
            let fridge = &project.fridge;
            let drive_plan = project.plan.drive.unwrap_or(DrivePlan {
                delivered_dbm: -78.0,
                frequency_hz: 6e9,
                with_cable_loss: true,
            });
            let mut noise_rows = Vec::new();
            let mut frac_rows = Vec::new();
            let template = preset_line(LineKind::Drive, "drive", 1, fridge)?;
            let drive_count = project
                .lines
                .iter()
                .filter(|l| l.kind == LineKind::Drive)
                .map(|l| l.count)
                .sum::<u32>()
                .max(1);
            for name in ["C1", "C2", "C3", "C4"] {
                let per_stage = published_chain(name).unwrap();
                let mut line = template.clone();
                line.attenuators_db = fridge
                    .stages
                    .iter()
                    .zip(per_stage)
                    .filter(|(_, db)| *db != 0.0)
                    .map(|(s, db)| (s.name.clone(), db))
                    .collect();
                let lossless = line_n_mxc(&line, fridge, &project.catalog, drive_plan.frequency_hz, false)?;
                let lossy = line_n_mxc(&line, fridge, &project.catalog, drive_plan.frequency_hz, true)?;
                noise_rows.push((name.to_string(), lossless, lossy));
                let input = input_power_for_delivered(&line, fridge, &project.catalog, &drive_plan)?;
                let prof = active_loads_per_stage(
                    &line,
                    fridge,
                    &project.catalog,
                    input,
                    drive_plan.frequency_hz,
                    !drive_plan.with_cable_loss,
                    project.plan.still_absorption,
                )?;
                let fracs: Vec<f64> = fridge
                    .stages
                    .iter()
                    .enumerate()
                    .map(|(i, s)| drive_count as f64 * prof.dissipated_w[i] / s.cooling_power_w)
                    .collect();
                frac_rows.push((name.to_string(), fracs));
            }
            write_file(&outdir, "fig4a.csv", &report::noise_configs_csv(&noise_rows))?;
            write_file(&outdir, "fig4b.csv", &report::active_fractions_csv(&fridge.stage_names(), &frac_rows))?;

            // single-line active walk at the plan level
            if let Some(line) = project.lines.iter().find(|l| l.kind == LineKind::Drive) {
                let input = input_power_for_delivered(line, fridge, &project.catalog, &drive_plan)?;
                let prof = active_loads_per_stage(
                    line,
                    fridge,
                    &project.catalog,
                    input,
                    drive_plan.frequency_hz,
                    !drive_plan.with_cable_loss,
                    project.plan.still_absorption,
                )?;
                write_file(
                    &outdir,
                    "fig5.csv",
                    &report::active_loads_csv(&fridge.stage_names(), &prof.incident_w, &prof.dissipated_w, prof.delivered_w),
                )?;
            }

            for s in &rep.stages {
                println!(
                    "{:>6}: total {:.4e} W of {:.4e} W cooling ({:.1}%)",
                    s.stage,
                    s.total_w,
                    s.cooling_power_w,
                    100.0 * s.fraction_of_cooling
                );
            }
            if let Some(n) = rep.n_mxc {
                println!("n_mxc = {n:.4e}");
            }
            if let Some(t) = &rep.predicted_temperatures_k {
                let pairs: Vec<String> = rep
                    .stages
                    .iter()
                    .zip(t)
                    .map(|(s, t)| format!("{} {:.4} K", s.stage, t))
                    .collect();
                println!("predicted temperatures: {}", pairs.join(", "));
            }
            if let Some(q) = rep.qubit_estimate {
                println!("qubit headroom estimate: {q}");
            }
            Ok(())
        }

        Command::Fit { kind, input, output, window } => {
            let text = std::fs::read_to_string(&input)?;
            let json = match kind.as_str() {
                "reference" => {
                    let series = parse_measurement_csv(&text)?;
                    let names = series.stage_names.clone();
                    let coeffs = fit_reference(&[series], &names, window)?;
                    serde_json::to_string_pretty(&coeffs).map_err(|e| CryoError::Fit(e.to_string()))?
                }
                "resistance" => {
                    let points = parse_resistance_csv(&text)?;
                    let fit = fit_effective_resistance(&points)?;
                    serde_json::to_string_pretty(&fit).map_err(|e| CryoError::Fit(e.to_string()))?
                }
                other => {
                    return Err(CryoError::Config(format!(
                        "--kind must be reference or resistance, got `{other}`"
                    )))
                }
            };
            match output {
                Some(path) => std::fs::write(path, json + "\n")?,
                None => println!("{json}"),
            }
            Ok(())
        }

        Command::Optimize {
            source,
            total_db,
            allowed,
            max_fraction,
            max_attenuators,
            objective,
            line_count,
            outdir,
        } => {
            let project = source.load()?;
            let allowed_values: Result<Vec<f64>, _> =
                allowed.split(',').map(|v| v.trim().parse::<f64>()).collect();
            let allowed_values = allowed_values
                .map_err(|_| CryoError::Config(format!("bad --allowed list `{allowed}`")))?;
            let mut caps = BTreeMap::new();
            for entry in &max_fraction {
                let (stage, val) = entry.split_once('=').ok_or_else(|| {
                    CryoError::Config(format!("--max-fraction wants stage=value, got `{entry}`"))
                })?;
                project.fridge.stage_index(stage)?;
                let val: f64 = val
                    .parse()
                    .map_err(|_| CryoError::Config(format!("bad fraction `{val}`")))?;
                caps.insert(stage.to_string(), val);
            }
            let objective = match objective.as_str() {
                "min-n-mxc" => Objective::MinNMxc,
                "min-max-fraction" => Objective::MinMaxFraction,
                "pareto" => Objective::Pareto,
                other => return Err(CryoError::Config(format!("unknown objective `{other}`"))),
            };
            let constraints = SearchConstraints {
                total_db,
                allowed_values_db: allowed_values,
                max_fraction: caps,
                max_attenuators,
                objective,
                with_cable_loss: false,
            };
            let template = preset_line(LineKind::Drive, "candidate", 1, &project.fridge)?;
            let ctx = EvalContext {
                fridge: &project.fridge,
                catalog: &project.catalog,
                line_template: &template,
                line_count: line_count as f64,
                drive_plan: project.plan.drive.unwrap_or(DrivePlan {
                    delivered_dbm: -78.0,
                    frequency_hz: 6e9,
                    with_cable_loss: true,
                }),
            };
            let ranked = enumerate(&constraints, &ctx)?;
            write_file(&outdir, "candidates.csv", &report::candidates_csv(&project.fridge.stage_names(), &ranked))?;
            let feasible = ranked.iter().filter(|c| c.feasible).count();
            println!("{} candidates ({} feasible); wrote {}", ranked.len(), feasible, outdir.join("candidates.csv").display());
            Ok(())
        }

        Command::Sweep { source, stage, from_db, to_db, step_db, fixed, outdir } => {
            let project = source.load()?;
            let fixed = parse_db_list(&fixed, project.fridge.stages.len())?;
            let template = preset_line(LineKind::Drive, "sweep", 1, &project.fridge)?;
            let ctx = EvalContext {
                fridge: &project.fridge,
                catalog: &project.catalog,
                line_template: &template,
                line_count: 1.0,
                drive_plan: project.plan.drive.unwrap_or(DrivePlan {
                    delivered_dbm: -78.0,
                    frequency_hz: 6e9,
                    with_cable_loss: true,
                }),
            };
            let curve = sweep_single_stage(&stage, from_db, to_db, step_db, &fixed, &ctx)?;
            write_file(&outdir, "sweep.csv", &report::sweep_csv(&stage, &curve))?;
            println!("{} points; wrote {}", curve.len(), outdir.join("sweep.csv").display());
            Ok(())
        }
    }
}

#[allow(dead_code)]
fn preset_list() -> String {
    preset_names().join(", ")
}
