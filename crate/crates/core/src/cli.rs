//! The `fdnet` command line: runs, sweeps, figure presets and topology dumps.
//!
//! Exit codes: 0 on success, 1 for usage or validation errors, 2 for I/O
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use crate::config::{load_config, Algorithm, OpaKnowledge, SimConfig, BASELINE_CONFIG_JSON};
use crate::engine::{self, sweep, SweepAxis};
use crate::error::{Error, Result};
use crate::geom::sample_topology;
use crate::report::Report;
use crate::rng::realization_rng;

#[derive(Debug, Parser)]
#[command(name = "fdnet", version, about = "Full-duplex small-cell network simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON configuration file; the shipped baseline when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Worker threads; 0 uses every available core.
    #[arg(long, global = true, value_name = "N", env = "FDNET_WORKERS")]
    pub workers: Option<usize>,

    #[arg(long, global = true, value_name = "N")]
    pub realizations: Option<usize>,

    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub algorithm: Option<u8>,

    #[arg(long, global = true, value_enum)]
    pub opa: Option<OpaArg>,

    /// Also write the topology of every realization.
    #[arg(long, global = true)]
    pub dump_topology: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one configuration.
    Run,
    /// Run one configuration at several values of a parameter.
    Sweep {
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
    },
    /// Reproduce the data behind one of the result figures.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=7))]
        id: u8,
    },
    /// Write topology CSVs without simulating.
    DumpTopology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpaArg {
    Off,
    Local,
    Genie,
}

/// Parse `args` (program name first), execute, and return the exit code.
pub fn main<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => 2,
        _ => 1,
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let config = resolve_config(cli)?;
    let workers = cli.workers.unwrap_or(0);
    let started = Instant::now();
    match &cli.command {
        Command::Run => {
            let report = engine::run(&config, workers)?;
            write_bundle(&cli.out, &report)?;
            if cli.dump_topology {
                dump_topologies(&config, config.realizations, &cli.out.join("topologies"))?;
            }
        }
        Command::Sweep { axis, values } => {
            let points = sweep(&config, *axis, values, workers)?;
            let rows: Vec<SweepRow> = points
                .iter()
                .map(|p| SweepRow {
                    axis_value: p.value,
                    report: &p.report,
                })
                .collect();
            create_dir(&cli.out)?;
            write_file(&cli.out.join("sweep.csv"), &sweep_csv(&rows))?;
        }
        Command::Figure { id } => figure(*id, &config, workers, &cli.out)?,
        Command::DumpTopology => {
            dump_topologies(&config, cli.realizations.unwrap_or(1), &cli.out)?;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    info!("done in {elapsed:.2} s");
    if !matches!(cli.command, Command::DumpTopology) {
        write_file(
            &cli.out.join("timing.json"),
            &format!("{{\n  \"runtime_s\": {elapsed}\n}}\n"),
        )?;
    }
    Ok(())
}

/// Config file (or the baseline) with command-line overrides applied.
pub fn resolve_config(cli: &Cli) -> Result<SimConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            load_config(&text)?
        }
        None => load_config(BASELINE_CONFIG_JSON)?,
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(n) = cli.realizations {
        config.realizations = n;
    }
    if let Some(a) = cli.algorithm {
        config.algorithm = Algorithm::from_number(a).expect("range-checked by clap");
    }
    match cli.opa {
        Some(OpaArg::Off) => config.opa_enabled = false,
        Some(OpaArg::Local) => {
            config.opa_enabled = true;
            config.opa_knowledge = OpaKnowledge::Local;
        }
        Some(OpaArg::Genie) => {
            config.opa_enabled = true;
            config.opa_knowledge = OpaKnowledge::Genie;
        }
        None => {}
    }
    config.validate()?;
    Ok(config)
}

pub fn opa_label(config: &SimConfig) -> &'static str {
    match (config.opa_enabled, config.opa_knowledge) {
        (false, _) => "off",
        (true, OpaKnowledge::Local) => "local",
        (true, OpaKnowledge::Genie) => "genie",
    }
}

fn fmt_dbm(v: Option<f64>) -> String {
    v.map_or_else(|| "-inf".to_string(), |x| x.to_string())
}

pub fn cdf_csv(table: &[(f64, f64)]) -> String {
    let mut s = String::from("rate_bps,cdf\n");
    for (x, p) in table {
        let _ = writeln!(s, "{x},{p}");
    }
    s
}

pub fn decomposition_csv(report: &Report) -> String {
    let mut s = String::from("term,direction,mean_dbm\n");
    for row in report.decomposition() {
        let _ = writeln!(s, "{},{},{}", row.term, row.direction, fmt_dbm(row.mean_dbm));
    }
    s
}

pub struct SweepRow<'a> {
    pub axis_value: f64,
    pub report: &'a Report,
}

pub const SWEEP_HEADER: &str =
    "axis_value,algorithm,opa,mean_ul_bps,mean_dl_bps,mean_sum_bps,se_sum_bps,fd_fraction,saturated_fraction";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("{SWEEP_HEADER}\n");
    for row in rows {
        let r = row.report;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            row.axis_value,
            r.config.algorithm.number(),
            opa_label(&r.config),
            r.ul.mean,
            r.dl.mean,
            r.sum.mean,
            r.sum.std_error,
            r.modes.fd,
            r.saturated_fraction
        );
    }
    s
}

pub fn summary_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&report.summary()).expect("summary serializes");
    s.push('\n');
    s
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// `summary.json`, the three CDF tables and `decomposition.csv`.
pub fn write_bundle(dir: &Path, report: &Report) -> Result<()> {
    create_dir(dir)?;
    write_file(&dir.join("summary.json"), &summary_json(report))?;
    write_file(&dir.join("cdf_ul.csv"), &cdf_csv(&report.ul.cdf_table()))?;
    write_file(&dir.join("cdf_dl.csv"), &cdf_csv(&report.dl.cdf_table()))?;
    write_file(&dir.join("cdf_sum.csv"), &cdf_csv(&report.sum.cdf_table()))?;
    write_file(&dir.join("decomposition.csv"), &decomposition_csv(report))?;
    Ok(())
}

pub fn dump_topologies(config: &SimConfig, count: usize, dir: &Path) -> Result<()> {
    create_dir(dir)?;
    for i in 0..count {
        let topology = sample_topology(config, &mut realization_rng(config.seed, i as u64));
        write_file(&dir.join(format!("topology_{i}.csv")), &topology.to_csv())?;
    }
    Ok(())
}

/// Every algorithm without and with power allocation.
fn variants(config: &SimConfig) -> Vec<SimConfig> {
    let mut out = Vec::new();
    for alg in Algorithm::ALL {
        for opa in [false, true] {
            out.push(SimConfig {
                algorithm: alg,
                opa_enabled: opa,
                ..config.clone()
            });
        }
    }
    out
}

fn sweep_variants(configs: &[SimConfig], axis: SweepAxis, values: &[f64], workers: usize, out: &Path) -> Result<()> {
    let mut points = Vec::new();
    for c in configs {
        points.extend(sweep(c, axis, values, workers)?);
    }
    let rows: Vec<SweepRow> = points
        .iter()
        .map(|p| SweepRow {
            axis_value: p.value,
            report: &p.report,
        })
        .collect();
    create_dir(out)?;
    write_file(&out.join("sweep.csv"), &sweep_csv(&rows))
}

/// Preset experiments around `base`.
///
/// 2–4: every variant at the base point, one bundle each.
/// 5: density sweep. 6: Alg. 3 with 1, 2 and 4 antennas, one bundle each.
/// 7: SIC sweep from 60 to 130 dB.
pub fn figure(id: u8, base: &SimConfig, workers: usize, out: &Path) -> Result<()> {
    match id {
        2..=4 => {
            let mut reports = Vec::new();
            for c in variants(base) {
                let report = engine::run(&c, workers)?;
                info!(
                    "alg={} opa={}: mean UL {:.4e} DL {:.4e} sum {:.4e} bps",
                    c.algorithm.number(),
                    opa_label(&c),
                    report.ul.mean,
                    report.dl.mean,
                    report.sum.mean
                );
                write_bundle(
                    &out.join(format!("alg{}_{}", c.algorithm.number(), opa_label(&c))),
                    &report,
                )?;
                reports.push(report);
            }
            let rows: Vec<SweepRow> = reports
                .iter()
                .map(|r| SweepRow {
                    axis_value: base.lambda_bs,
                    report: r,
                })
                .collect();
            write_file(&out.join("sweep.csv"), &sweep_csv(&rows))
        }
        5 => sweep_variants(&variants(base), SweepAxis::Density, &[1e-5, 2.5e-5, 1e-4], workers, out),
        6 => {
            let c = SimConfig {
                algorithm: Algorithm::Alg3,
                opa_enabled: false,
                ..base.clone()
            };
            let points = sweep(&c, SweepAxis::Antennas, &[1.0, 2.0, 4.0], workers)?;
            for p in &points {
                write_bundle(&out.join(format!("antennas_{}", p.value)), &p.report)?;
            }
            let rows: Vec<SweepRow> = points
                .iter()
                .map(|p| SweepRow {
                    axis_value: p.value,
                    report: &p.report,
                })
                .collect();
            write_file(&out.join("sweep.csv"), &sweep_csv(&rows))
        }
        7 => {
            let values: Vec<f64> = (6..=13).map(|k| f64::from(k) * 10.0).collect();
            sweep_variants(&variants(base), SweepAxis::Sic, &values, workers, out)
        }
        _ => Err(Error::Validation(vec![format!("unknown figure id {id}")])),
    }
}
