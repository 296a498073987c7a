//! Received power terms, SINRs and Shannon rates of the reference cell.

use serde::{Deserialize, Serialize};

use crate::chan::{inner, Beamformers, CVec, ChannelSet};
use crate::config::SimConfig;
use crate::error::{Error, Result};

/// Transmit powers in watts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TxPowers {
    pub ul_w: f64,
    pub dl_w: f64,
}

impl TxPowers {
    pub fn new(ul_w: f64, dl_w: f64) -> Self {
        TxPowers { ul_w, dl_w }
    }

    pub fn max(config: &SimConfig) -> Self {
        TxPowers::new(config.p_ul_max_w(), config.p_dl_max_w())
    }

    pub fn scaled(self, c: f64) -> Self {
        TxPowers::new(self.ul_w * c, self.dl_w * c)
    }
}

/// Powers at the reference BS after MRC, in watts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UlTerms {
    pub signal: f64,
    pub self_interference: f64,
    pub bs_interference: f64,
    pub ul_mt_interference: f64,
    pub noise: f64,
}

/// Powers at the scheduled DL MT, in watts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DlTerms {
    pub signal: f64,
    pub intra_mt_interference: f64,
    pub bs_interference: f64,
    pub ul_mt_interference: f64,
    pub noise: f64,
}

impl UlTerms {
    pub fn interference_plus_noise(&self) -> f64 {
        self.self_interference + self.bs_interference + self.ul_mt_interference + self.noise
    }
}

impl DlTerms {
    pub fn interference_plus_noise(&self) -> f64 {
        self.intra_mt_interference + self.bs_interference + self.ul_mt_interference + self.noise
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SinrBreakdown {
    pub ul: UlTerms,
    pub dl: DlTerms,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePair {
    pub r_ul: f64,
    pub r_dl: f64,
    pub r_sum: f64,
}

/// Every term of both SINRs for the scheduled pair `(u0, d0)`.
///
/// `reference` are the powers of BS 0 and of UL MT `u0`; `interferers` are
/// the powers of every interfering BS and of its scheduled UL MT.
#[allow(clippy::too_many_arguments)]
pub fn compute_breakdown(
    channels: &ChannelSet,
    interferer_beams: &[CVec],
    u0: usize,
    d0: usize,
    reference: TxPowers,
    interferers: TxPowers,
    config: &SimConfig,
) -> Result<SinrBreakdown> {
    let beams = Beamformers::matched(channels, u0, d0, interferer_beams.to_vec())?;
    breakdown_with(channels, &beams, u0, d0, reference, interferers, config)
}

/// As [`compute_breakdown`], with the beamformers already built for `(u0, d0)`.
#[allow(clippy::too_many_arguments)]
pub fn breakdown_with(
    channels: &ChannelSet,
    beams: &Beamformers,
    u0: usize,
    d0: usize,
    reference: TxPowers,
    interferers: TxPowers,
    config: &SimConfig,
) -> Result<SinrBreakdown> {
    if u0 >= channels.num_ul() {
        return Err(Error::IndexOutOfRange {
            what: "UL candidate",
            index: u0,
            len: channels.num_ul(),
        });
    }
    if d0 >= channels.num_dl() {
        return Err(Error::IndexOutOfRange {
            what: "DL candidate",
            index: d0,
            len: channels.num_dl(),
        });
    }
    let v0 = &beams.v0;
    let w0 = &beams.w0;

    let mut ul_bs = 0.0;
    let mut ul_mt = 0.0;
    for (b, w_b) in beams.w_int.iter().enumerate() {
        let hw = channels.h_bs_bs[b].mul_vec(w_b);
        ul_bs += channels.g_bs_bs[b] * inner(v0, &hw).norm_sqr();
        ul_mt += channels.g_bs_ulmark[b] * inner(v0, &channels.h_bs_ulmark[b]).norm_sqr();
    }

    let mut dl_bs = 0.0;
    let mut dl_mt = 0.0;
    for (b, w_b) in beams.w_int.iter().enumerate() {
        dl_bs += channels.g_dl_intbs[d0][b] * inner(&channels.h_dl_intbs[d0][b], w_b).norm_sqr();
        dl_mt += channels.g_dl_ulmark[d0][b] * channels.h_dl_ulmark[d0][b].norm_sqr();
    }

    let ul = UlTerms {
        signal: reference.ul_w * channels.g_bs_ul[u0] * inner(v0, &channels.h_bs_ul[u0]).norm_sqr(),
        self_interference: reference.dl_w / config.sic_linear(),
        bs_interference: interferers.dl_w * ul_bs,
        ul_mt_interference: interferers.ul_w * ul_mt,
        noise: config.noise_bs_w(),
    };
    let dl = DlTerms {
        signal: reference.dl_w * channels.g_dl_bs[d0] * inner(&channels.h_dl_bs[d0], w0).norm_sqr(),
        intra_mt_interference: reference.ul_w * channels.g_mt_mt[d0][u0] * channels.h_mt_mt[d0][u0].norm_sqr(),
        bs_interference: interferers.dl_w * dl_bs,
        ul_mt_interference: interferers.ul_w * dl_mt,
        noise: config.noise_mt_w(),
    };
    Ok(SinrBreakdown { ul, dl })
}

/// `(SINR_UL, SINR_DL)`.
pub fn sinr(b: &SinrBreakdown) -> (f64, f64) {
    debug_assert!(b.ul.noise > 0.0 && b.dl.noise > 0.0);
    (
        b.ul.signal / b.ul.interference_plus_noise(),
        b.dl.signal / b.dl.interference_plus_noise(),
    )
}

/// `B·log2(1 + SINR)`.
pub fn shannon_rate(sinr: f64, bandwidth: f64) -> f64 {
    bandwidth * sinr.ln_1p() / std::f64::consts::LN_2
}

pub fn rates(sinr_ul: f64, sinr_dl: f64, bandwidth: f64) -> RatePair {
    let r_ul = shannon_rate(sinr_ul, bandwidth);
    let r_dl = shannon_rate(sinr_dl, bandwidth);
    RatePair {
        r_ul,
        r_dl,
        r_sum: r_ul + r_dl,
    }
}
