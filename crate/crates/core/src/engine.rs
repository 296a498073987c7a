//! Monte Carlo orchestration.
//!
//! Each realization draws from its own stream derived from
//! `(seed, realization index)`, and results are aggregated in index order.
//! A report therefore does not depend on how many workers produced it.
//! With the `parallel` feature, realizations fan out over a rayon pool;
//! without it, or with one worker, they run sequentially.

use log::info;

use crate::chan::{draw_channels, draw_interferer_beams, CVec, ChannelSet};
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::geom::{sample_topology, Topology};
use crate::phy::{compute_breakdown, rates, sinr, RatePair, SinrBreakdown, TxPowers};
use crate::report::Report;
use crate::rng::{derive_seed, realization_rng, SimRng};
use crate::sched::{candidate_metrics, opa, reschedule_after_opa, schedule, Mode, ScheduleDecision, SumRateObjective};

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult {
    pub index: u64,
    pub rates: RatePair,
    pub breakdown: SinrBreakdown,
    pub decision: ScheduleDecision,
    pub interferers: usize,
    pub saturated: bool,
}

/// One network instance with everything random already drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub topology: Topology,
    pub channels: ChannelSet,
    pub interferer_beams: Vec<CVec>,
}

impl Instance {
    pub fn draw(config: &SimConfig, rng: &mut SimRng) -> Result<Self> {
        let topology = sample_topology(config, rng);
        let channels = draw_channels(&topology, config, rng)?;
        let interferer_beams = draw_interferer_beams(topology.num_interferers(), config.n_tx, rng);
        Ok(Instance {
            topology,
            channels,
            interferer_beams,
        })
    }
}

pub fn draw_instance(config: &SimConfig, index: u64) -> Result<Instance> {
    Instance::draw(config, &mut realization_rng(config.seed, index))
}

/// Schedule, allocate power and evaluate the reference cell of `instance`.
///
/// Selection metrics use maximum powers. Interfering cells always transmit
/// at maximum power; only the reference cell runs power allocation.
pub fn evaluate(config: &SimConfig, instance: &Instance) -> Result<(ScheduleDecision, SinrBreakdown, RatePair)> {
    let channels = &instance.channels;
    let beams = &instance.interferer_beams;
    let max = TxPowers::max(config);
    let metrics = candidate_metrics(channels, config, max);
    let (u0, d0) = schedule(config.algorithm, &metrics)?;
    let mut decision = ScheduleDecision::full_duplex(u0, d0, max);

    if config.opa_enabled {
        let at_max = compute_breakdown(channels, beams, u0, d0, max, max, config)?;
        let objective = SumRateObjective::from_breakdown(&at_max, max, config.opa_knowledge, config.bandwidth);
        decision = opa(decision, max, |p_ul, p_dl| objective.eval(p_ul, p_dl));
        if decision.mode != Mode::Fd {
            decision = reschedule_after_opa(decision, &metrics)?;
        }
    }

    let breakdown = compute_breakdown(
        channels,
        beams,
        decision.u0,
        decision.d0,
        decision.powers(),
        max,
        config,
    )?;
    let (s_ul, s_dl) = sinr(&breakdown);
    Ok((decision, breakdown, rates(s_ul, s_dl, config.bandwidth)))
}

pub fn run_realization(config: &SimConfig, index: u64) -> Result<RealizationResult> {
    let instance = draw_instance(config, index)?;
    let (decision, breakdown, rates) = evaluate(config, &instance)?;
    Ok(RealizationResult {
        index,
        rates,
        breakdown,
        decision,
        interferers: instance.topology.num_interferers(),
        saturated: instance.topology.saturated,
    })
}

/// Number of worker threads to use when `requested` is 0.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run_sequential(config: &SimConfig, n: u64) -> Result<Vec<RealizationResult>> {
    (0..n).map(|i| run_realization(config, i)).collect()
}

#[cfg(feature = "parallel")]
fn run_all(config: &SimConfig, workers: usize) -> Result<Vec<RealizationResult>> {
    use rayon::prelude::*;

    let n = config.realizations as u64;
    let workers = if workers == 0 { default_workers() } else { workers };
    if workers <= 1 {
        return run_sequential(config, n);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("rayon pool");
    pool.install(|| (0..n).into_par_iter().map(|i| run_realization(config, i)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_all(config: &SimConfig, _workers: usize) -> Result<Vec<RealizationResult>> {
    run_sequential(config, config.realizations as u64)
}

/// All realizations of `config`, in index order.
pub fn run_results(config: &SimConfig, workers: usize) -> Result<Vec<RealizationResult>> {
    config.validate()?;
    run_all(config, workers)
}

pub fn run(config: &SimConfig, workers: usize) -> Result<Report> {
    let results = run_results(config, workers)?;
    Report::from_results(config, &results)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Density,
    Sic,
    Antennas,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Density => "density",
            SweepAxis::Sic => "sic",
            SweepAxis::Antennas => "antennas",
        }
    }

    fn tag(self) -> u64 {
        match self {
            SweepAxis::Density => 0x6465_6e73,
            SweepAxis::Sic => 0x0073_6963,
            SweepAxis::Antennas => 0x616e_7473,
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "density" => Ok(SweepAxis::Density),
            "sic" => Ok(SweepAxis::Sic),
            "antennas" => Ok(SweepAxis::Antennas),
            other => Err(format!(
                "unknown sweep axis '{other}' (expected density, sic or antennas)"
            )),
        }
    }
}

/// `config` moved to one sweep point.
///
/// The seed is re-derived from the axis and the value, so a point gives
/// the same result whichever sweep it belongs to, and every algorithm or
/// power-allocation variant sees the same network instances at that point.
pub fn sweep_point_config(config: &SimConfig, axis: SweepAxis, value: f64, position: usize) -> Result<SimConfig> {
    let bad = |reason: String| Error::SweepValue {
        axis: axis.name(),
        position,
        reason,
    };
    let mut c = config.clone();
    match axis {
        SweepAxis::Density => c.lambda_bs = value,
        SweepAxis::Sic => c.sic_capability = value,
        SweepAxis::Antennas => {
            if !(value >= 1.0 && value.fract() == 0.0 && value <= 1024.0) {
                return Err(bad(format!("antenna count must be a positive integer, got {value}")));
            }
            c.n_tx = value as usize;
            c.n_rx = value as usize;
        }
    }
    c.seed = derive_seed(config.seed, axis.tag() ^ value.to_bits());
    c.validate().map_err(|e| bad(e.to_string()))?;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub report: Report,
}

pub fn sweep(config: &SimConfig, axis: SweepAxis, values: &[f64], workers: usize) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::SweepValue {
            axis: axis.name(),
            position: 0,
            reason: "no values given".to_string(),
        });
    }
    let configs = values
        .iter()
        .enumerate()
        .map(|(i, &v)| sweep_point_config(config, axis, v, i))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(values.len());
    for (&value, c) in values.iter().zip(&configs) {
        let report = run(c, workers)?;
        info!(
            "{}={} alg={} opa={}: mean UL {:.4e} DL {:.4e} sum {:.4e} bps, FD {:.3}",
            axis.name(),
            value,
            c.algorithm.number(),
            c.opa_enabled,
            report.ul.mean,
            report.dl.mean,
            report.sum.mean,
            report.modes.fd
        );
        out.push(SweepPoint { value, report });
    }
    Ok(out)
}
