//! Small-scale fading, large-scale gains and matched-filter beamformers.
//!
//! Every small-scale coefficient is i.i.d. CN(0, 1). Large-scale gains are
//! `10^((−PL(d) − X)/10)` with `X ~ N(0, σ²)` dB drawn per link, clamped to
//! at most one. The self-interference channel is never drawn: its projected
//! power is the constant `1/Ω`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::{LinkClass, SimConfig};
use crate::error::{Error, Result};
use crate::geom::{Point, Topology};

pub type CVec = Vec<Complex64>;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> CVec {
        debug_assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Hermitian inner product `aᴴ b`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// One CN(0, 1) sample.
pub fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

pub fn cn01_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    (0..n).map(|_| cn01(rng)).collect()
}

/// `h / ‖h‖`: MRC when `h` is the receive channel, MRT when it is the
/// transmit channel.
pub fn matched_filter(h: &[Complex64]) -> Result<CVec> {
    let n = norm_sq(h).sqrt();
    if n.is_nan() || n <= 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(h.iter().map(|z| z / n).collect())
}

/// Uniform draw from the complex unit sphere in `n` dimensions.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    assert!(n >= 1, "dimension must be at least 1");
    loop {
        let v = cn01_vec(n, rng);
        if let Ok(u) = matched_filter(&v) {
            return u;
        }
    }
}

/// Fading coefficients and large-scale gains for every link touching the
/// reference cell. Index conventions: `u` UL candidate, `d` DL candidate,
/// `b` interfering BS (and its UL mark).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// h_{0,u}: UL candidate → reference BS, length N_R.
    pub h_bs_ul: Vec<CVec>,
    /// h_{d,0}: reference BS → DL candidate, length N_T.
    pub h_dl_bs: Vec<CVec>,
    /// h_{d,u}: UL candidate → DL candidate, `[d][u]`.
    pub h_mt_mt: Vec<Vec<Complex64>>,
    /// H_{0,b}: interfering BS → reference BS, N_R × N_T.
    pub h_bs_bs: Vec<CMatrix>,
    /// h_{0,u_b}: interfering UL MT → reference BS, length N_R.
    pub h_bs_ulmark: Vec<CVec>,
    /// h_{d,b}: interfering BS → DL candidate, `[d][b]`, length N_T.
    pub h_dl_intbs: Vec<Vec<CVec>>,
    /// h_{d,u_b}: interfering UL MT → DL candidate, `[d][b]`.
    pub h_dl_ulmark: Vec<Vec<Complex64>>,

    pub g_bs_ul: Vec<f64>,
    pub g_dl_bs: Vec<f64>,
    pub g_mt_mt: Vec<Vec<f64>>,
    pub g_bs_bs: Vec<f64>,
    pub g_bs_ulmark: Vec<f64>,
    pub g_dl_intbs: Vec<Vec<f64>>,
    pub g_dl_ulmark: Vec<Vec<f64>>,
}

impl ChannelSet {
    pub fn num_ul(&self) -> usize {
        self.h_bs_ul.len()
    }

    pub fn num_dl(&self) -> usize {
        self.h_dl_bs.len()
    }

    pub fn num_interferers(&self) -> usize {
        self.h_bs_bs.len()
    }
}

/// Unit-norm combiner and precoders.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformers {
    /// MRC vector of the reference BS.
    pub v0: CVec,
    /// MRT vector of the reference BS.
    pub w0: CVec,
    /// Precoder of each interfering BS.
    pub w_int: Vec<CVec>,
}

impl Beamformers {
    /// Matched filters toward UL candidate `u0` and DL candidate `d0`.
    pub fn matched(channels: &ChannelSet, u0: usize, d0: usize, w_int: Vec<CVec>) -> Result<Self> {
        let h_ul = channels.h_bs_ul.get(u0).ok_or(Error::IndexOutOfRange {
            what: "UL candidate",
            index: u0,
            len: channels.num_ul(),
        })?;
        let h_dl = channels.h_dl_bs.get(d0).ok_or(Error::IndexOutOfRange {
            what: "DL candidate",
            index: d0,
            len: channels.num_dl(),
        })?;
        if w_int.len() != channels.num_interferers() {
            return Err(Error::Dimension(format!(
                "{} interferer precoders for {} interferers",
                w_int.len(),
                channels.num_interferers()
            )));
        }
        Ok(Beamformers {
            v0: matched_filter(h_ul)?,
            w0: matched_filter(h_dl)?,
            w_int,
        })
    }
}

/// Precoders of the interfering BSs. Their DL users are not modelled, so
/// each MRT vector is isotropic relative to the cross channels.
pub fn draw_interferer_beams<R: Rng + ?Sized>(count: usize, n_tx: usize, rng: &mut R) -> Vec<CVec> {
    (0..count).map(|_| random_unit_vector(n_tx, rng)).collect()
}

struct GainDrawer<'a> {
    config: &'a SimConfig,
}

impl GainDrawer<'_> {
    fn draw<R: Rng + ?Sized>(&self, class: LinkClass, a: Point, b: Point, rng: &mut R) -> f64 {
        let model = self.config.pathloss_profile.link(class);
        let z: f64 = rng.sample(StandardNormal);
        model.gain(a.dist(b), model.shadowing_sigma_db * z)
    }
}

pub fn draw_channels<R: Rng + ?Sized>(topology: &Topology, config: &SimConfig, rng: &mut R) -> Result<ChannelSet> {
    if topology.ul_candidates.len() != config.num_ul_candidates
        || topology.dl_candidates.len() != config.num_dl_candidates
    {
        return Err(Error::Dimension(format!(
            "topology has {}/{} UL/DL candidates, config expects {}/{}",
            topology.ul_candidates.len(),
            topology.dl_candidates.len(),
            config.num_ul_candidates,
            config.num_dl_candidates
        )));
    }
    if topology.interferer_ul_mt.len() != topology.interferer_bs.len() {
        return Err(Error::Dimension(format!(
            "{} interferer marks for {} interfering BSs",
            topology.interferer_ul_mt.len(),
            topology.interferer_bs.len()
        )));
    }

    let (nt, nr) = (config.n_tx, config.n_rx);
    let gains = GainDrawer { config };
    let o = Point::ORIGIN;
    let ul = &topology.ul_candidates;
    let dl = &topology.dl_candidates;
    let bs = &topology.interferer_bs;
    let marks = &topology.interferer_ul_mt;

    let h_bs_ul = ul.iter().map(|_| cn01_vec(nr, rng)).collect();
    let g_bs_ul = ul.iter().map(|&u| gains.draw(LinkClass::MtBs, u, o, rng)).collect();

    let h_dl_bs = dl.iter().map(|_| cn01_vec(nt, rng)).collect();
    let g_dl_bs = dl.iter().map(|&d| gains.draw(LinkClass::BsMt, o, d, rng)).collect();

    let h_mt_mt = dl.iter().map(|_| cn01_vec(ul.len(), rng)).collect();
    let g_mt_mt = dl
        .iter()
        .map(|&d| ul.iter().map(|&u| gains.draw(LinkClass::MtMt, u, d, rng)).collect())
        .collect();

    let h_bs_bs = bs
        .iter()
        .map(|_| CMatrix::from_rows(nr, nt, cn01_vec(nr * nt, rng)))
        .collect::<Result<Vec<_>>>()?;
    let g_bs_bs = bs.iter().map(|&b| gains.draw(LinkClass::BsBs, b, o, rng)).collect();

    let h_bs_ulmark = marks.iter().map(|_| cn01_vec(nr, rng)).collect();
    let g_bs_ulmark = marks.iter().map(|&m| gains.draw(LinkClass::MtBs, m, o, rng)).collect();

    let h_dl_intbs = dl
        .iter()
        .map(|_| bs.iter().map(|_| cn01_vec(nt, rng)).collect())
        .collect();
    let g_dl_intbs = dl
        .iter()
        .map(|&d| bs.iter().map(|&b| gains.draw(LinkClass::BsMt, b, d, rng)).collect())
        .collect();

    let h_dl_ulmark = dl.iter().map(|_| cn01_vec(marks.len(), rng)).collect();
    let g_dl_ulmark = dl
        .iter()
        .map(|&d| marks.iter().map(|&m| gains.draw(LinkClass::MtMt, m, d, rng)).collect())
        .collect();

    Ok(ChannelSet {
        h_bs_ul,
        h_dl_bs,
        h_mt_mt,
        h_bs_bs,
        h_bs_ulmark,
        h_dl_intbs,
        h_dl_ulmark,
        g_bs_ul,
        g_dl_bs,
        g_mt_mt,
        g_bs_bs,
        g_bs_ulmark,
        g_dl_intbs,
        g_dl_ulmark,
    })
}
