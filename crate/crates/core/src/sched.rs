//! User scheduling and binary power allocation for the reference cell.
//!
//! Three selection rules, all using only intra-cell quantities:
//!
//! * Alg. 1 picks the UL and DL candidates with the strongest desired
//!   signal, independently.
//! * Alg. 2 picks the UL candidate as Alg. 1, then the DL candidate with the
//!   best SINR against that UL MT's interference.
//! * Alg. 3 picks the DL candidate as Alg. 1, then the UL candidate with the
//!   best signal-to-leakage-plus-noise ratio toward that DL MT.
//!
//! Power allocation then picks the best corner of the power box, which
//! decides between FD and the two HD modes. A HD outcome reschedules the
//! surviving direction with the Alg. 1 rule.

use serde::{Deserialize, Serialize};

use crate::chan::{norm_sq, ChannelSet};
use crate::config::{Algorithm, OpaKnowledge, SimConfig};
use crate::error::{Error, Result};
use crate::phy::{shannon_rate, SinrBreakdown, TxPowers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "HD_UL")]
    HdUl,
    #[serde(rename = "HD_DL")]
    HdDl,
}

impl Mode {
    /// Mode implied by a power pair; `None` when both links are silent.
    pub fn from_powers(p_ul: f64, p_dl: f64) -> Option<Mode> {
        match (p_ul > 0.0, p_dl > 0.0) {
            (true, true) => Some(Mode::Fd),
            (true, false) => Some(Mode::HdUl),
            (false, true) => Some(Mode::HdDl),
            (false, false) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDecision {
    pub u0: usize,
    pub d0: usize,
    pub p_ul: f64,
    pub p_dl: f64,
    pub mode: Mode,
    pub rescheduled: bool,
}

impl ScheduleDecision {
    /// FD at the given powers, as produced by the selection rules.
    pub fn full_duplex(u0: usize, d0: usize, limits: TxPowers) -> Self {
        ScheduleDecision {
            u0,
            d0,
            p_ul: limits.ul_w,
            p_dl: limits.dl_w,
            mode: Mode::Fd,
            rescheduled: false,
        }
    }

    pub fn powers(&self) -> TxPowers {
        TxPowers::new(self.p_ul, self.p_dl)
    }

    /// Mode and powers agree.
    pub fn is_consistent(&self) -> bool {
        Mode::from_powers(self.p_ul, self.p_dl) == Some(self.mode)
    }
}

/// Intra-cell powers available to the schedulers, in watts.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMetrics {
    /// S_{0,u} under MRC toward `u`.
    pub s_ul: Vec<f64>,
    /// S_{d,0} under MRT toward `d`.
    pub s_dl: Vec<f64>,
    /// I_{d,u}, indexed `[d][u]`.
    pub i_cross: Vec<Vec<f64>>,
    pub noise_bs: f64,
    pub noise_mt: f64,
}

pub fn candidate_metrics(channels: &ChannelSet, config: &SimConfig, powers: TxPowers) -> CandidateMetrics {
    let s_ul = channels
        .h_bs_ul
        .iter()
        .zip(&channels.g_bs_ul)
        .map(|(h, g)| powers.ul_w * g * norm_sq(h))
        .collect();
    let s_dl = channels
        .h_dl_bs
        .iter()
        .zip(&channels.g_dl_bs)
        .map(|(h, g)| powers.dl_w * g * norm_sq(h))
        .collect();
    let i_cross = channels
        .h_mt_mt
        .iter()
        .zip(&channels.g_mt_mt)
        .map(|(hs, gs)| hs.iter().zip(gs).map(|(h, g)| powers.ul_w * g * h.norm_sqr()).collect())
        .collect();
    CandidateMetrics {
        s_ul,
        s_dl,
        i_cross,
        noise_bs: config.noise_bs_w(),
        noise_mt: config.noise_mt_w(),
    }
}

/// Index of the largest score; ties go to the lowest index.
fn argmax(scores: impl Iterator<Item = f64>, what: &'static str) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.enumerate() {
        match best {
            Some((_, b)) if s.partial_cmp(&b) != Some(std::cmp::Ordering::Greater) => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i).ok_or(Error::EmptyCandidates(what))
}

fn best_ul(m: &CandidateMetrics) -> Result<usize> {
    argmax(m.s_ul.iter().copied(), "UL")
}

fn best_dl(m: &CandidateMetrics) -> Result<usize> {
    argmax(m.s_dl.iter().copied(), "DL")
}

pub fn schedule_alg1(m: &CandidateMetrics) -> Result<(usize, usize)> {
    Ok((best_ul(m)?, best_dl(m)?))
}

pub fn schedule_alg2(m: &CandidateMetrics) -> Result<(usize, usize)> {
    let u0 = best_ul(m)?;
    let d0 = argmax(
        m.s_dl.iter().zip(&m.i_cross).map(|(s, row)| s / (row[u0] + m.noise_mt)),
        "DL",
    )?;
    Ok((u0, d0))
}

/// The leakage denominator uses the BS noise power σ₀².
pub fn schedule_alg3(m: &CandidateMetrics) -> Result<(usize, usize)> {
    let d0 = best_dl(m)?;
    let leak = m.i_cross.get(d0).ok_or(Error::EmptyCandidates("DL"))?;
    let u0 = argmax(m.s_ul.iter().zip(leak).map(|(s, l)| s / (l + m.noise_bs)), "UL")?;
    Ok((u0, d0))
}

pub fn schedule(algorithm: Algorithm, m: &CandidateMetrics) -> Result<(usize, usize)> {
    match algorithm {
        Algorithm::Alg1 => schedule_alg1(m),
        Algorithm::Alg2 => schedule_alg2(m),
        Algorithm::Alg3 => schedule_alg3(m),
    }
}

/// Sum rate of the scheduled pair as a function of its two powers.
///
/// Every term of the breakdown is linear in exactly one of the reference
/// powers or independent of both, so one breakdown evaluated at known
/// powers fixes the whole function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRateObjective {
    pub ul_signal_per_w: f64,
    pub si_per_w: f64,
    pub ul_fixed: f64,
    pub dl_signal_per_w: f64,
    pub intra_per_w: f64,
    pub dl_fixed: f64,
    pub bandwidth: f64,
}

impl SumRateObjective {
    /// Build from a breakdown computed at reference powers `at` (both > 0).
    /// With [`OpaKnowledge::Local`] the inter-cell terms are dropped.
    pub fn from_breakdown(b: &SinrBreakdown, at: TxPowers, knowledge: OpaKnowledge, bandwidth: f64) -> Self {
        debug_assert!(at.ul_w > 0.0 && at.dl_w > 0.0);
        let (ul_ext, dl_ext) = match knowledge {
            OpaKnowledge::Local => (0.0, 0.0),
            OpaKnowledge::Genie => (
                b.ul.bs_interference + b.ul.ul_mt_interference,
                b.dl.bs_interference + b.dl.ul_mt_interference,
            ),
        };
        SumRateObjective {
            ul_signal_per_w: b.ul.signal / at.ul_w,
            si_per_w: b.ul.self_interference / at.dl_w,
            ul_fixed: ul_ext + b.ul.noise,
            dl_signal_per_w: b.dl.signal / at.dl_w,
            intra_per_w: b.dl.intra_mt_interference / at.ul_w,
            dl_fixed: dl_ext + b.dl.noise,
            bandwidth,
        }
    }

    pub fn eval(&self, p_ul: f64, p_dl: f64) -> f64 {
        let sinr_ul = self.ul_signal_per_w * p_ul / (self.si_per_w * p_dl + self.ul_fixed);
        let sinr_dl = self.dl_signal_per_w * p_dl / (self.intra_per_w * p_ul + self.dl_fixed);
        shannon_rate(sinr_ul, self.bandwidth) + shannon_rate(sinr_dl, self.bandwidth)
    }
}

/// Best corner of the power box `[0, P_UL] × [0, P_DL]`.
///
/// Candidates in tie-break order: FD, HD_DL, HD_UL. The idle corner has
/// zero sum rate and never wins against a non-negative objective, so it is
/// not considered.
pub fn opa<F>(decision: ScheduleDecision, limits: TxPowers, objective: F) -> ScheduleDecision
where
    F: Fn(f64, f64) -> f64,
{
    let corners = [
        (Mode::Fd, limits.ul_w, limits.dl_w),
        (Mode::HdDl, 0.0, limits.dl_w),
        (Mode::HdUl, limits.ul_w, 0.0),
    ];
    let mut best = corners[0];
    let mut best_val = objective(best.1, best.2);
    for &c in &corners[1..] {
        let v = objective(c.1, c.2);
        if v > best_val {
            best = c;
            best_val = v;
        }
    }
    ScheduleDecision {
        p_ul: best.1,
        p_dl: best.2,
        mode: best.0,
        ..decision
    }
}

/// Re-pick the active direction's MT with the Alg. 1 rule after a HD
/// outcome.
pub fn reschedule_after_opa(decision: ScheduleDecision, m: &CandidateMetrics) -> Result<ScheduleDecision> {
    let mut out = decision;
    match decision.mode {
        Mode::Fd => return Err(Error::RescheduleFullDuplex),
        Mode::HdUl => out.u0 = best_ul(m)?,
        Mode::HdDl => out.d0 = best_dl(m)?,
    }
    out.rescheduled = true;
    Ok(out)
}
