#![allow(dead_code)]

use fdnet::chan::{CMatrix, CVec, ChannelSet};
use fdnet::phy::{DlTerms, SinrBreakdown, UlTerms};
use fdnet::sched::CandidateMetrics;
use num_complex::Complex64;
use rand::Rng;

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the one-sample KS test.
pub fn ks_critical(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Positive value spread over several decades.
pub fn log_uniform<R: Rng>(rng: &mut R, lo_exp: f64, hi_exp: f64) -> f64 {
    10f64.powf(rng.random_range(lo_exp..hi_exp))
}

pub fn random_metrics<R: Rng>(rng: &mut R, n_ul: usize, n_dl: usize) -> CandidateMetrics {
    CandidateMetrics {
        s_ul: (0..n_ul).map(|_| log_uniform(rng, -12.0, -6.0)).collect(),
        s_dl: (0..n_dl).map(|_| log_uniform(rng, -12.0, -6.0)).collect(),
        i_cross: (0..n_dl)
            .map(|_| (0..n_ul).map(|_| log_uniform(rng, -16.0, -8.0)).collect())
            .collect(),
        noise_bs: log_uniform(rng, -14.0, -12.0),
        noise_mt: log_uniform(rng, -14.0, -12.0),
    }
}

pub fn random_breakdown<R: Rng>(rng: &mut R) -> SinrBreakdown {
    let mut p = || log_uniform(rng, -15.0, -7.0);
    SinrBreakdown {
        ul: UlTerms {
            signal: p(),
            self_interference: p(),
            bs_interference: p(),
            ul_mt_interference: p(),
            noise: p(),
        },
        dl: DlTerms {
            signal: p(),
            intra_mt_interference: p(),
            bs_interference: p(),
            ul_mt_interference: p(),
            noise: p(),
        },
    }
}

fn cn<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn cvec<R: Rng>(rng: &mut R, n: usize) -> CVec {
    (0..n).map(|_| cn(rng)).collect()
}

/// Arbitrary channel set with the given dimensions; entries are uniform in
/// the unit square rather than Gaussian, which does not matter to oracles.
pub fn random_channels<R: Rng>(
    rng: &mut R,
    n_ul: usize,
    n_dl: usize,
    n_int: usize,
    nt: usize,
    nr: usize,
) -> ChannelSet {
    let gain = |rng: &mut R| log_uniform(rng, -12.0, -6.0);
    ChannelSet {
        h_bs_ul: (0..n_ul).map(|_| cvec(rng, nr)).collect(),
        h_dl_bs: (0..n_dl).map(|_| cvec(rng, nt)).collect(),
        h_mt_mt: (0..n_dl).map(|_| cvec(rng, n_ul)).collect(),
        h_bs_bs: (0..n_int)
            .map(|_| CMatrix::from_rows(nr, nt, cvec(rng, nr * nt)).unwrap())
            .collect(),
        h_bs_ulmark: (0..n_int).map(|_| cvec(rng, nr)).collect(),
        h_dl_intbs: (0..n_dl).map(|_| (0..n_int).map(|_| cvec(rng, nt)).collect()).collect(),
        h_dl_ulmark: (0..n_dl).map(|_| cvec(rng, n_int)).collect(),
        g_bs_ul: (0..n_ul).map(|_| gain(rng)).collect(),
        g_dl_bs: (0..n_dl).map(|_| gain(rng)).collect(),
        g_mt_mt: (0..n_dl).map(|_| (0..n_ul).map(|_| gain(rng)).collect()).collect(),
        g_bs_bs: (0..n_int).map(|_| gain(rng)).collect(),
        g_bs_ulmark: (0..n_int).map(|_| gain(rng)).collect(),
        g_dl_intbs: (0..n_dl).map(|_| (0..n_int).map(|_| gain(rng)).collect()).collect(),
        g_dl_ulmark: (0..n_dl).map(|_| (0..n_int).map(|_| gain(rng)).collect()).collect(),
    }
}

pub fn unit_vectors<R: Rng>(rng: &mut R, count: usize, n: usize) -> Vec<CVec> {
    (0..count)
        .map(|_| {
            let v = cvec(rng, n);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|z| z / norm).collect()
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
