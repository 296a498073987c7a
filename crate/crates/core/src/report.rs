//! Aggregation of realization results: rate statistics, empirical CDFs,
//! mean power decomposition and mode frequencies.

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::engine::RealizationResult;
use crate::error::{Error, Result};
use crate::phy::{DlTerms, SinrBreakdown, UlTerms};
use crate::sched::Mode;
use crate::units::watt_to_dbm;

/// Sorted `(value, k/n)` pairs of the empirical CDF.
pub fn empirical_cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(k, x)| (x, (k + 1) as f64 / n))
        .collect())
}

/// Step-function view of a sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf<'a> {
    sorted: &'a [f64],
}

impl<'a> EmpiricalCdf<'a> {
    pub fn new(sorted: &'a [f64]) -> Result<Self> {
        if sorted.is_empty() {
            return Err(Error::EmptySamples);
        }
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        Ok(EmpiricalCdf { sorted })
    }

    /// Fraction of samples at or below `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateStats {
    /// Ascending.
    pub samples: Vec<f64>,
    pub mean: f64,
    pub std_error: f64,
}

impl RateStats {
    /// Mean and standard error are accumulated in the given order, so the
    /// result depends only on the sample sequence.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let (mean, std_error) = mean_and_se(&samples);
        let mut sorted = samples;
        sorted.sort_by(f64::total_cmp);
        Ok(RateStats {
            samples: sorted,
            mean,
            std_error,
        })
    }

    pub fn cdf(&self) -> EmpiricalCdf<'_> {
        EmpiricalCdf { sorted: &self.samples }
    }

    pub fn cdf_table(&self) -> Vec<(f64, f64)> {
        let n = self.samples.len() as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(k, &x)| (x, (k + 1) as f64 / n))
            .collect()
    }
}

/// Sample mean and standard error of the mean (n−1 variance).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeFrequencies {
    #[serde(rename = "FD")]
    pub fd: f64,
    #[serde(rename = "HD_UL")]
    pub hd_ul: f64,
    #[serde(rename = "HD_DL")]
    pub hd_dl: f64,
}

/// One row of the power decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermMean {
    pub term: String,
    pub direction: String,
    pub mean_w: f64,
    /// `None` when the mean power is zero.
    pub mean_dbm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: SimConfig,
    pub realizations: usize,
    pub ul: RateStats,
    pub dl: RateStats,
    pub sum: RateStats,
    /// Linear mean of every breakdown field.
    pub mean_breakdown: SinrBreakdown,
    pub modes: ModeFrequencies,
    pub rescheduled_fraction: f64,
    pub saturated_fraction: f64,
    pub mean_interferers: f64,
}

impl Report {
    pub fn from_results(config: &SimConfig, results: &[RealizationResult]) -> Result<Self> {
        if results.is_empty() {
            return Err(Error::EmptySamples);
        }
        let n = results.len() as f64;
        let ul = RateStats::from_samples(results.iter().map(|r| r.rates.r_ul).collect())?;
        let dl = RateStats::from_samples(results.iter().map(|r| r.rates.r_dl).collect())?;
        let sum = RateStats::from_samples(results.iter().map(|r| r.rates.r_sum).collect())?;

        let mean_of = |f: &dyn Fn(&SinrBreakdown) -> f64| results.iter().map(|r| f(&r.breakdown)).sum::<f64>() / n;
        let mean_breakdown = SinrBreakdown {
            ul: UlTerms {
                signal: mean_of(&|b| b.ul.signal),
                self_interference: mean_of(&|b| b.ul.self_interference),
                bs_interference: mean_of(&|b| b.ul.bs_interference),
                ul_mt_interference: mean_of(&|b| b.ul.ul_mt_interference),
                noise: mean_of(&|b| b.ul.noise),
            },
            dl: DlTerms {
                signal: mean_of(&|b| b.dl.signal),
                intra_mt_interference: mean_of(&|b| b.dl.intra_mt_interference),
                bs_interference: mean_of(&|b| b.dl.bs_interference),
                ul_mt_interference: mean_of(&|b| b.dl.ul_mt_interference),
                noise: mean_of(&|b| b.dl.noise),
            },
        };

        let count = |pred: &dyn Fn(&RealizationResult) -> bool| results.iter().filter(|r| pred(r)).count();
        let fd = count(&|r| r.decision.mode == Mode::Fd);
        let hd_ul = count(&|r| r.decision.mode == Mode::HdUl);
        let hd_dl = results.len() - fd - hd_ul;
        let modes = ModeFrequencies {
            fd: fd as f64 / n,
            hd_ul: hd_ul as f64 / n,
            hd_dl: hd_dl as f64 / n,
        };

        Ok(Report {
            config: config.clone(),
            realizations: results.len(),
            ul,
            dl,
            sum,
            mean_breakdown,
            modes,
            rescheduled_fraction: count(&|r| r.decision.rescheduled) as f64 / n,
            saturated_fraction: count(&|r| r.saturated) as f64 / n,
            mean_interferers: results.iter().map(|r| r.interferers as f64).sum::<f64>() / n,
        })
    }

    /// Mean power of each SINR term, UL terms first.
    pub fn decomposition(&self) -> Vec<TermMean> {
        let b = &self.mean_breakdown;
        let row = |term: &str, direction: &str, w: f64| TermMean {
            term: term.to_string(),
            direction: direction.to_string(),
            mean_w: w,
            mean_dbm: (w > 0.0).then(|| watt_to_dbm(w)),
        };
        vec![
            row("signal", "ul", b.ul.signal),
            row("self_interference", "ul", b.ul.self_interference),
            row("bs_interference", "ul", b.ul.bs_interference),
            row("ul_mt_interference", "ul", b.ul.ul_mt_interference),
            row("noise", "ul", b.ul.noise),
            row("signal", "dl", b.dl.signal),
            row("intra_mt_interference", "dl", b.dl.intra_mt_interference),
            row("bs_interference", "dl", b.dl.bs_interference),
            row("ul_mt_interference", "dl", b.dl.ul_mt_interference),
            row("noise", "dl", b.dl.noise),
        ]
    }

    pub fn summary(&self) -> Summary {
        Summary {
            config: self.config.clone(),
            realizations: self.realizations,
            mean_ul_bps: self.ul.mean,
            mean_dl_bps: self.dl.mean,
            mean_sum_bps: self.sum.mean,
            se_ul_bps: self.ul.std_error,
            se_dl_bps: self.dl.std_error,
            se_sum_bps: self.sum.std_error,
            mode_frequencies: self.modes,
            rescheduled_fraction: self.rescheduled_fraction,
            saturated_fraction: self.saturated_fraction,
            mean_interferers: self.mean_interferers,
            decomposition: self.decomposition(),
        }
    }
}

/// The `summary.json` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub config: SimConfig,
    pub realizations: usize,
    pub mean_ul_bps: f64,
    pub mean_dl_bps: f64,
    pub mean_sum_bps: f64,
    pub se_ul_bps: f64,
    pub se_dl_bps: f64,
    pub se_sum_bps: f64,
    pub mode_frequencies: ModeFrequencies,
    pub rescheduled_fraction: f64,
    pub saturated_fraction: f64,
    pub mean_interferers: f64,
    pub decomposition: Vec<TermMean>,
}
