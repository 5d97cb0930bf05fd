//! Command dispatch for the `maxwell-lab` binary.
//!
//! Every command writes into its own output directory: CSV/JSON artifacts plus
//! `resolved_config.toml` holding the configuration actually used.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{FitConfig, PeelConfig, ReportConfig, RunConfig, OUTPUT_ROOT_VAR};
use crate::diagnostics::{fit_exponent, peeling_scan, DecayFit, PeelingTable, RADIATION_TARGET};
use crate::evolution::{component_series, evolve, ComponentSample, LineKind, LineSeries, Trajectory};
use crate::tensorcalc::{run_identity_suite, IdentityReport};
use crate::zeroresolvent::{fuzz_campaign, FuzzReport};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "maxwell-lab", version, about = "Maxwell fields on spherically symmetric backgrounds")]
pub struct Cli {
    /// TOML (or `.json`) configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides the configuration and the environment.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one mode and record probes and null lines.
    Evolve,
    /// Fit a decay exponent to a recorded probe.
    Fit {
        /// Directory written by `evolve`.
        #[arg(long)]
        run: Option<PathBuf>,
    },
    /// Peeling slopes along an outgoing line and the radiation-field decay.
    Peel {
        #[arg(long)]
        run: Option<PathBuf>,
    },
    /// Tensor-calculus identity suite.
    Identities,
    /// Randomised fixed-time solver campaign with bound monitors.
    Resolvent,
    /// Aggregate earlier outputs into one table.
    Report {
        /// Output directories of earlier commands.
        inputs: Vec<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Fit { .. } => "fit",
            Command::Peel { .. } => "peel",
            Command::Identities => "identities",
            Command::Resolvent => "resolvent",
            Command::Report { .. } => "report",
        }
    }
}

const TRAJECTORY_FILE: &str = "trajectory.json";
const RESOLVED_FILE: &str = "resolved_config.toml";

fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("maxwell-lab-out"))
}

fn default_dir(command: &str) -> PathBuf {
    output_root().join(command)
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Parses the command line and runs it; returns the output directory.
pub fn run(cli: Cli) -> Result<PathBuf> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let name = cli.command.name();
    let out = cli.out.clone().or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| default_dir(name));
    fs::create_dir_all(&out)?;

    let mut resolved = RunConfig { output_dir: Some(out.clone()), ..Default::default() };
    match cli.command {
        Command::Evolve => {
            let ev = cfg.evolve_or_default();
            resolved.evolve = Some(ev.clone());
            write_resolved(&out, &resolved)?;
            run_evolve(&ev, &out)?;
        }
        Command::Fit { run } => {
            let mut fit = cfg.fit.take().unwrap_or_default();
            fit.run = Some(run.or(fit.run).unwrap_or_else(|| default_dir("evolve")));
            resolved.fit = Some(fit.clone());
            write_resolved(&out, &resolved)?;
            run_fit(&fit, &out)?;
        }
        Command::Peel { run } => {
            let mut peel = cfg.peel.take().unwrap_or_default();
            peel.run = Some(run.or(peel.run).unwrap_or_else(|| default_dir("evolve")));
            resolved.peel = Some(peel.clone());
            write_resolved(&out, &resolved)?;
            run_peel(&peel, &out)?;
        }
        Command::Identities => {
            let ids = cfg.identities.take().unwrap_or_default();
            resolved.identities = Some(ids.clone());
            write_resolved(&out, &resolved)?;
            let report = run_identity_suite(&ids)?;
            write_identities(&report, &out)?;
        }
        Command::Resolvent => {
            let fz = cfg.resolvent.take().unwrap_or_default();
            resolved.resolvent = Some(fz.clone());
            write_resolved(&out, &resolved)?;
            let report = fuzz_campaign(&fz)?;
            write_resolvent(&report, &out)?;
        }
        Command::Report { inputs } => {
            let mut rep = cfg.report.take().unwrap_or_default();
            if !inputs.is_empty() {
                rep.inputs = inputs;
            }
            if rep.inputs.is_empty() {
                return Err(Error::Config("report needs at least one input directory".into()));
            }
            resolved.report = Some(rep.clone());
            write_resolved(&out, &resolved)?;
            let table = run_report(&rep, &out)?;
            print!("{table}");
        }
    }
    Ok(out)
}

fn write_resolved(out: &Path, cfg: &RunConfig) -> Result<()> {
    fs::write(out.join(RESOLVED_FILE), cfg.to_toml()?)?;
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn line_label(kind: &LineKind) -> String {
    match kind {
        LineKind::Probe(x) => format!("probe_rstar_{x}"),
        LineKind::Outgoing(u) => format!("outgoing_u_{u}"),
        LineKind::Ingoing(v) => format!("ingoing_v_{v}"),
    }
}

fn components_csv(samples: &[ComponentSample], with_position: bool) -> String {
    let mut s = String::new();
    if with_position {
        s.push_str("t,u,v,r,psi,F_uv,F_AB,F_uA,F_vA\n");
    } else {
        s.push_str("t,psi,F_uv,F_AB,F_uA,F_vA\n");
    }
    for c in samples {
        let mut cols = vec![num(c.t)];
        if with_position {
            cols.extend([num(c.u), num(c.v), num(c.r)]);
        }
        cols.extend([num(c.psi), num(c.f_uv), num(c.f_ab), num(c.f_ua), num(c.f_va)]);
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Serialize, Deserialize)]
struct LineSummary {
    line: LineKind,
    file: String,
    samples: usize,
    max_abs_psi: f64,
}

fn summarise(traj: &Trajectory, series: &LineSeries, file: String) -> LineSummary {
    let comps = component_series(traj, series);
    LineSummary {
        line: series.kind,
        file,
        samples: comps.len(),
        max_abs_psi: comps.iter().map(|c| c.psi.abs()).fold(0.0, f64::max),
    }
}

pub fn run_evolve(cfg: &crate::evolution::EvolutionConfig, out: &Path) -> Result<Trajectory> {
    let traj = evolve(cfg)?;
    let mut lines = Vec::new();
    for series in &traj.probes {
        let file = format!("{}.csv", line_label(&series.kind));
        fs::write(out.join(&file), components_csv(&component_series(&traj, series), false))?;
        lines.push(summarise(&traj, series, file));
    }
    for series in &traj.null_lines {
        let file = format!("{}.csv", line_label(&series.kind));
        fs::write(out.join(&file), components_csv(&component_series(&traj, series), true))?;
        lines.push(summarise(&traj, series, file));
    }
    write_json(&out.join(TRAJECTORY_FILE), &traj)?;
    let summary = json!({
        "generated_unix": timestamp(),
        "steps": cfg.steps(&traj.grid),
        "dr": traj.grid.dr,
        "dt": traj.grid.dt,
        "energy_initial": traj.energy.first().map(|e| e.1),
        "energy_final": traj.energy.last().map(|e| e.1),
        "lines": lines,
    });
    write_json(&out.join("summary.json"), &summary)?;
    Ok(traj)
}

fn load_trajectory(dir: &Path) -> Result<Trajectory> {
    let path = dir.join(TRAJECTORY_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct FitOutput {
    generated_unix: u64,
    probe: f64,
    column: String,
    fit: DecayFit,
    target: Option<f64>,
    tolerance: f64,
    pass: Option<bool>,
}

fn run_fit(cfg: &FitConfig, out: &Path) -> Result<()> {
    let dir = cfg.run.as_deref().ok_or_else(|| Error::Config("fit needs a run directory".into()))?;
    let traj = load_trajectory(dir)?;
    let series = match cfg.probe {
        Some(x) => traj.probe(x).ok_or_else(|| Error::Input(format!("no probe recorded at r* = {x}")))?,
        None => traj.probes.first().ok_or_else(|| Error::Input("run recorded no probes".into()))?,
    };
    let LineKind::Probe(probe) = series.kind else { unreachable!() };
    let data: Vec<(f64, f64)> = component_series(&traj, series)
        .iter()
        .filter(|c| c.t > 0.0)
        .filter_map(|c| Some((c.t, c.column(&cfg.column)?)))
        .collect();
    let fit = fit_exponent(&data, &cfg.policy)?;
    let pass = cfg.target.map(|p| fit.stable && (fit.exponent - p).abs() <= cfg.tolerance);
    let mut local = String::from("t,exponent\n");
    for (t, p) in &fit.local {
        let _ = writeln!(local, "{},{}", num(*t), num(*p));
    }
    fs::write(out.join("local_exponent.csv"), local)?;
    let output = FitOutput {
        generated_unix: timestamp(),
        probe,
        column: cfg.column.clone(),
        fit,
        target: cfg.target,
        tolerance: cfg.tolerance,
        pass,
    };
    write_json(&out.join("fit.json"), &output)?;
    Ok(())
}

/// One line of the exponent table shared by `peel` and `report`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub source: String,
    pub quantity: String,
    pub measured: Option<f64>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
    pub note: String,
}

impl ExponentRow {
    fn checked(source: &str, quantity: &str, measured: f64, target: f64, tolerance: f64) -> Self {
        Self {
            source: source.into(),
            quantity: quantity.into(),
            measured: Some(measured),
            target: Some(target),
            tolerance: Some(tolerance),
            pass: Some(measured.is_finite() && (measured - target).abs() <= tolerance),
            note: String::new(),
        }
    }
}

fn peel_rows(table: &PeelingTable, tolerance: f64) -> Vec<ExponentRow> {
    let mut rows: Vec<ExponentRow> = table
        .r_slopes
        .iter()
        .map(|s| ExponentRow::checked("peel", &format!("d log|{}| / d log r", s.component), s.slope, s.target, tolerance))
        .collect();
    let quantity = "d log|r F_uA| / d log u";
    rows.push(match table.radiation_slope() {
        Some(slope) => ExponentRow::checked("peel", quantity, slope, RADIATION_TARGET, tolerance),
        None => ExponentRow {
            source: "peel".into(),
            quantity: quantity.into(),
            measured: None,
            target: Some(RADIATION_TARGET),
            tolerance: Some(tolerance),
            pass: Some(false),
            note: table.radiation_error.clone().unwrap_or_default(),
        },
    });
    rows
}

fn rows_csv(rows: &[ExponentRow]) -> String {
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut s = String::from("source,quantity,measured,target,tolerance,pass,note\n");
    for r in rows {
        let pass = r.pass.map(|p| p.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},\"{}\",{},{},{},{},\"{}\"",
            r.source,
            r.quantity,
            opt(r.measured),
            opt(r.target),
            opt(r.tolerance),
            pass,
            r.note.replace('"', "'")
        );
    }
    s
}

fn run_peel(cfg: &PeelConfig, out: &Path) -> Result<()> {
    let dir = cfg.run.as_deref().ok_or_else(|| Error::Config("peel needs a run directory".into()))?;
    let traj = load_trajectory(dir)?;
    let table = peeling_scan(&traj, &cfg.scan)?;
    let rows = peel_rows(&table, cfg.tolerance);
    fs::write(out.join("exponents.csv"), rows_csv(&rows))?;
    write_json(
        &out.join("peel.json"),
        &json!({ "generated_unix": timestamp(), "tolerance": cfg.tolerance, "table": table, "rows": rows }),
    )?;
    Ok(())
}

fn write_identities(report: &IdentityReport, out: &Path) -> Result<()> {
    let mut s = String::from("name,max_residual,tolerance,order,pass\n");
    for r in &report.results {
        let order = r.order.map(num).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{}", r.name, num(r.max_residual), num(r.tolerance), order, r.pass);
    }
    fs::write(out.join("identities.csv"), s)?;
    write_json(&out.join("identities.json"), &json!({ "generated_unix": timestamp(), "report": report }))
}

fn write_resolvent(report: &FuzzReport, out: &Path) -> Result<()> {
    let mut s = String::from("seed,residual,radial_residual,quadrature_gap,ratio0,ratio1,inf_bc_violated\n");
    for r in &report.seeds {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.seed,
            num(r.residual),
            num(r.radial_residual),
            num(r.quadrature_gap),
            num(r.bounds.ratio0),
            num(r.bounds.ratio1),
            r.bounds.inf_bc_violated
        );
    }
    fs::write(out.join("resolvent.csv"), s)?;
    write_json(&out.join("resolvent.json"), &json!({ "generated_unix": timestamp(), "report": report }))
}

fn read_json(path: &Path) -> Result<Option<Value>> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn collect_rows(dir: &Path) -> Result<Vec<ExponentRow>> {
    let mut rows = Vec::new();
    if let Some(v) = read_json(&dir.join("fit.json"))? {
        let fit: FitOutput = serde_json::from_value(v)?;
        rows.push(ExponentRow {
            source: "fit".into(),
            quantity: format!("decay exponent of {} at r* = {}", fit.column, fit.probe),
            measured: Some(fit.fit.exponent),
            target: fit.target,
            tolerance: Some(fit.tolerance),
            pass: fit.pass,
            note: format!("window [{:.1}, {:.1}], drift {:.3}", fit.fit.window[0], fit.fit.window[1], fit.fit.drift),
        });
    }
    if let Some(v) = read_json(&dir.join("peel.json"))? {
        let peel: Vec<ExponentRow> = serde_json::from_value(v["rows"].clone())?;
        rows.extend(peel);
    }
    if let Some(v) = read_json(&dir.join("identities.json"))? {
        let report: IdentityReport = serde_json::from_value(v["report"].clone())?;
        for r in report.results {
            rows.push(ExponentRow {
                source: "identities".into(),
                quantity: r.name,
                measured: Some(r.max_residual),
                target: None,
                tolerance: Some(r.tolerance),
                pass: Some(r.pass),
                note: r.order.map(|o| format!("order {o:.2}")).unwrap_or_default(),
            });
        }
    }
    if let Some(v) = read_json(&dir.join("resolvent.json"))? {
        let report: FuzzReport = serde_json::from_value(v["report"].clone())?;
        rows.push(ExponentRow {
            source: "resolvent".into(),
            quantity: "max relative residual".into(),
            measured: Some(report.max_residual),
            target: None,
            tolerance: None,
            pass: None,
            note: format!("{} seeds", report.seeds.len()),
        });
        rows.push(ExponentRow {
            source: "resolvent".into(),
            quantity: "bound constant spread".into(),
            measured: Some(report.spread1),
            target: None,
            tolerance: None,
            pass: None,
            note: format!("constants {:.3} / {:.3}", report.constant0, report.constant1),
        });
    }
    Ok(rows)
}

fn render_table(rows: &[ExponentRow]) -> String {
    let cell = |x: Option<f64>| match x {
        Some(v) if v != 0.0 && v.abs() < 1e-3 => format!("{v:.3e}"),
        Some(v) => format!("{v:.4}"),
        None => "-".into(),
    };
    let width = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(8).max(8);
    let mut s = format!("{:<11} {:<width$} {:>12} {:>10} {:>8}  {}\n", "source", "quantity", "measured", "target", "result", "note");
    for r in rows {
        let result = match r.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "-",
        };
        let _ = writeln!(
            s,
            "{:<11} {:<width$} {:>12} {:>10} {:>8}  {}",
            r.source,
            r.quantity,
            cell(r.measured),
            cell(r.target),
            result,
            r.note
        );
    }
    s
}

fn run_report(cfg: &ReportConfig, out: &Path) -> Result<String> {
    let mut rows = Vec::new();
    for dir in &cfg.inputs {
        if !dir.is_dir() {
            return Err(Error::Input(format!("{} is not a directory", dir.display())));
        }
        rows.extend(collect_rows(dir)?);
    }
    if rows.is_empty() {
        return Err(Error::Input("no fit, peel, identities or resolvent outputs found".into()));
    }
    let table = render_table(&rows);
    fs::write(out.join("report.txt"), &table)?;
    fs::write(out.join("report.csv"), rows_csv(&rows))?;
    write_json(&out.join("report.json"), &json!({ "generated_unix": timestamp(), "rows": rows }))?;
    Ok(table)
}
