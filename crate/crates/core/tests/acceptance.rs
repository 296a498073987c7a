//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_DEVIATIONS` still prints FAIL when it fails,
//! but does not fail the process; every other failure does.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::{random_breakdown, random_metrics};
use fdnet::chan::{cn01_vec, inner, matched_filter, norm_sq, random_unit_vector};
use fdnet::engine::{self, draw_instance, run, sweep, SweepAxis};
use fdnet::geom::{min_pairwise_distance, sample_topology, Point};
use fdnet::phy::{compute_breakdown, TxPowers};
use fdnet::report::Report;
use fdnet::rng::realization_rng;
use fdnet::sched::{opa, schedule, CandidateMetrics, ScheduleDecision, SumRateObjective};
use fdnet::{Algorithm, OpaKnowledge, SimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const KNOWN_DEVIATIONS: &[u32] = &[6];

// Tolerances.
const CORNER_REL_TOL: f64 = 1e-12;
const CORNER_RUNTIME_S: f64 = 10.0;
const ORDERING_SE: f64 = 2.0;
const ORDERING_RUNTIME_S: f64 = 300.0;
const SIC_AGREEMENT: f64 = 0.05;
const MATCHED_FILTER_SLACK: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn pooled(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

fn baseline() -> SimConfig {
    SimConfig::default()
}

fn workers() -> usize {
    engine::default_workers()
}

fn mbps(x: f64) -> String {
    format!("{:.2}", x / 1e6)
}

fn c1_opa_corner() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let limits = TxPowers::max(&baseline());
    let mut passed = 0;
    let mut total = 0;
    for _ in 0..1000 {
        let b = random_breakdown(&mut rng);
        for knowledge in [OpaKnowledge::Local, OpaKnowledge::Genie] {
            total += 1;
            let obj = SumRateObjective::from_breakdown(&b, limits, knowledge, 2e7);
            let d = opa(ScheduleDecision::full_duplex(0, 0, limits), limits, |u, v| {
                obj.eval(u, v)
            });
            let corner = obj.eval(d.p_ul, d.p_dl);
            let mut grid = f64::NEG_INFINITY;
            for i in 0..=50 {
                for j in 0..=50 {
                    grid = grid.max(obj.eval(limits.ul_w * i as f64 / 50.0, limits.dl_w * j as f64 / 50.0));
                }
            }
            if corner >= grid * (1.0 - CORNER_REL_TOL) {
                passed += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        passed == total && secs < CORNER_RUNTIME_S,
        format!("{passed}/{total} instances at the grid maximum, {secs:.2} s"),
    )
}

fn scan(scores: &[f64]) -> usize {
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    scores.iter().position(|&s| s == best).unwrap()
}

fn exhaustive(alg: Algorithm, m: &CandidateMetrics) -> (usize, usize) {
    let u1 = scan(&m.s_ul);
    let d1 = scan(&m.s_dl);
    match alg {
        Algorithm::Alg1 => (u1, d1),
        Algorithm::Alg2 => {
            let s: Vec<f64> = (0..m.s_dl.len())
                .map(|d| m.s_dl[d] / (m.i_cross[d][u1] + m.noise_mt))
                .collect();
            (u1, scan(&s))
        }
        Algorithm::Alg3 => {
            let s: Vec<f64> = (0..m.s_ul.len())
                .map(|u| m.s_ul[u] / (m.i_cross[d1][u] + m.noise_bs))
                .collect();
            (scan(&s), d1)
        }
    }
}

fn c2_scheduling_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut passed = 0;
    for _ in 0..1000 {
        let m = random_metrics(&mut rng, 10, 10);
        if Algorithm::ALL
            .iter()
            .all(|&a| schedule(a, &m).unwrap() == exhaustive(a, &m))
        {
            passed += 1;
        }
    }
    outcome(
        passed == 1000,
        format!("{passed}/1000 instances match for all three algorithms"),
    )
}

struct Baseline {
    off: Vec<Report>,
    secs: f64,
}

fn baseline_runs() -> Baseline {
    let started = Instant::now();
    let off = Algorithm::ALL
        .iter()
        .map(|&a| {
            run(
                &SimConfig {
                    algorithm: a,
                    ..baseline()
                },
                workers(),
            )
            .unwrap()
        })
        .collect();
    Baseline {
        off,
        secs: started.elapsed().as_secs_f64(),
    }
}

fn c3_sum_ordering(b: &Baseline) -> Outcome {
    let [a1, a2, a3] = [&b.off[0].sum, &b.off[1].sum, &b.off[2].sum];
    let g32 = (a3.mean - a2.mean) / pooled(a3.std_error, a2.std_error);
    let g21 = (a2.mean - a1.mean) / pooled(a2.std_error, a1.std_error);
    outcome(
        g32 > ORDERING_SE && g21 > ORDERING_SE && b.secs < ORDERING_RUNTIME_S,
        format!(
            "sum Mbps A1 {} A2 {} A3 {}; gaps {g21:.1} and {g32:.1} SE; {:.1} s",
            mbps(a1.mean),
            mbps(a2.mean),
            mbps(a3.mean),
            b.secs
        ),
    )
}

fn c4_direction_ordering(b: &Baseline) -> Outcome {
    let (r1, r3) = (&b.off[0], &b.off[2]);
    let ul = (r1.ul.mean - r3.ul.mean) / pooled(r1.ul.std_error, r3.ul.std_error);
    let dl = (r3.dl.mean - r1.dl.mean) / pooled(r1.dl.std_error, r3.dl.std_error);
    outcome(
        ul > ORDERING_SE && dl > ORDERING_SE,
        format!(
            "UL A1 {} > A3 {} ({ul:.1} SE); DL A3 {} > A1 {} ({dl:.1} SE)",
            mbps(r1.ul.mean),
            mbps(r3.ul.mean),
            mbps(r3.dl.mean),
            mbps(r1.dl.mean)
        ),
    )
}

fn c5_opa_benefit(b: &Baseline) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, &alg) in Algorithm::ALL.iter().enumerate() {
        let with = run(
            &SimConfig {
                algorithm: alg,
                opa_enabled: true,
                ..baseline()
            },
            workers(),
        )
        .unwrap();
        let without = &b.off[i];
        let margin = ORDERING_SE * pooled(with.sum.std_error, without.sum.std_error);
        pass &= with.sum.mean >= without.sum.mean - margin;
        parts.push(format!(
            "A{} {} -> {}",
            alg.number(),
            mbps(without.sum.mean),
            mbps(with.sum.mean)
        ));
    }
    let at = |opa_enabled| {
        let c = SimConfig {
            algorithm: Algorithm::Alg2,
            opa_enabled,
            ..baseline()
        };
        sweep(&c, SweepAxis::Density, &[1e-5], workers())
            .unwrap()
            .remove(0)
            .report
    };
    let (off, on) = (at(false), at(true));
    let gain = on.sum.mean / off.sum.mean - 1.0;
    pass &= gain > 0.0;
    parts.push(format!("A2 gain at 1e-5: {:.2}%", 100.0 * gain));
    outcome(pass, parts.join("; "))
}

fn c6_sic_sweep() -> Outcome {
    let omegas: Vec<f64> = (6..=13).map(|k| f64::from(k) * 10.0).collect();
    let mut monotone = true;
    let mut worst_drop: f64 = f64::NEG_INFINITY;
    let mut ul_at_60 = Vec::new();
    let mut hd_dominates = true;
    for alg in Algorithm::ALL {
        for opa_enabled in [false, true] {
            let c = SimConfig {
                algorithm: alg,
                opa_enabled,
                ..baseline()
            };
            let points = sweep(&c, SweepAxis::Sic, &omegas, workers()).unwrap();
            for w in points.windows(2) {
                let (a, b) = (&w[0].report.ul, &w[1].report.ul);
                let drop = (a.mean - b.mean) / pooled(a.std_error, b.std_error);
                worst_drop = worst_drop.max(drop);
                monotone &= drop <= ORDERING_SE;
            }
            if opa_enabled {
                let r = &points[0].report;
                ul_at_60.push(r.ul.mean);
                hd_dominates &= r.modes.hd_ul + r.modes.hd_dl > r.modes.fd;
            }
        }
    }
    let hi = ul_at_60.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ul_at_60.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi;
    let agree = spread <= SIC_AGREEMENT;
    outcome(
        monotone && agree && hd_dominates,
        format!(
            "nondecreasing within 2 SE: {monotone} (worst step {worst_drop:.2} SE); \
             OPA UL at 60 dB Mbps {} spread {:.1}% (limit 5%): {agree}; HD > FD at 60 dB: {hd_dominates}",
            ul_at_60.iter().map(|&x| mbps(x)).collect::<Vec<_>>().join("/"),
            100.0 * spread
        ),
    )
}

fn c7_antennas() -> Outcome {
    let c = SimConfig {
        algorithm: Algorithm::Alg3,
        ..baseline()
    };
    let p = sweep(&c, SweepAxis::Antennas, &[1.0, 2.0], workers()).unwrap();
    let (one, two) = (&p[0].report, &p[1].report);
    let ul = (two.ul.mean - one.ul.mean) / pooled(one.ul.std_error, two.ul.std_error);
    let dl = (two.dl.mean - one.dl.mean) / pooled(one.dl.std_error, two.dl.std_error);
    outcome(
        ul > ORDERING_SE && dl > ORDERING_SE,
        format!(
            "UL {} -> {} ({ul:.1} SE), DL {} -> {} ({dl:.1} SE)",
            mbps(one.ul.mean),
            mbps(two.ul.mean),
            mbps(one.dl.mean),
            mbps(two.dl.mean)
        ),
    )
}

fn c8_hd_vanishing() -> Outcome {
    let mut checked = 0;
    let mut pass = true;
    for (nt, nr) in [(1, 1), (2, 2), (4, 2)] {
        let config = SimConfig {
            n_tx: nt,
            n_rx: nr,
            ..baseline()
        };
        let max = TxPowers::max(&config);
        for i in 0..100 {
            let inst = draw_instance(&config, i).unwrap();
            let (ch, w) = (&inst.channels, &inst.interferer_beams);
            let no_dl = TxPowers::new(max.ul_w, 0.0);
            let b = compute_breakdown(ch, w, 3, 4, no_dl, no_dl, &config).unwrap();
            pass &= b.ul.self_interference == 0.0 && b.ul.bs_interference == 0.0;
            let no_ul = TxPowers::new(0.0, max.dl_w);
            let b = compute_breakdown(ch, w, 3, 4, no_ul, no_ul, &config).unwrap();
            pass &= b.dl.intra_mt_interference == 0.0 && b.dl.ul_mt_interference == 0.0;
            checked += 1;
        }
    }
    outcome(
        pass,
        format!("{checked} instances, FD-induced terms exactly zero: {pass}"),
    )
}

fn c9_placement() -> Outcome {
    let config = baseline();
    let mut min_bs = f64::INFINITY;
    let mut max_cand: f64 = 0.0;
    for i in 0..1000 {
        let t = sample_topology(&config, &mut realization_rng(config.seed, i));
        let mut bs = vec![Point::ORIGIN];
        bs.extend(&t.interferer_bs);
        min_bs = min_bs.min(min_pairwise_distance(&bs).unwrap());
        for p in t.ul_candidates.iter().chain(&t.dl_candidates) {
            max_cand = max_cand.max(p.norm());
        }
    }
    outcome(
        min_bs >= 2.0 * config.r0 && max_cand <= config.r0,
        format!("min BS distance {min_bs:.2} m, max candidate radius {max_cand:.2} m"),
    )
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        "summary.json",
        "cdf_ul.csv",
        "cdf_dl.csv",
        "cdf_sum.csv",
        "decomposition.csv",
    ];
    let mut bundles = Vec::new();
    for w in ["1", "2", "8"] {
        let out = dir.path().join(format!("w{w}"));
        let status = Command::new(env!("CARGO_BIN_EXE_fdnet"))
            .args([
                "run",
                "--seed",
                "7",
                "--realizations",
                "2000",
                "--opa",
                "local",
                "--workers",
                w,
            ])
            .arg("--out")
            .arg(&out)
            .env("RUST_LOG", "warn")
            .status()
            .unwrap();
        if !status.success() {
            return outcome(false, format!("run with {w} workers failed"));
        }
        bundles.push(files.map(|f| std::fs::read(Path::new(&out).join(f)).unwrap()));
    }
    let same = bundles[1] == bundles[0] && bundles[2] == bundles[0];
    outcome(
        same,
        format!("{} files identical at 1, 2 and 8 workers: {same}", files.len()),
    )
}

fn c11_matched_filter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = 0;
    for k in 0..1000 {
        let n = 1 + k % 4;
        let h = cn01_vec(n, &mut rng);
        let mf = matched_filter(&h).unwrap();
        let best = inner(&mf, &h).norm_sqr();
        debug_assert!((best - norm_sq(&h)).abs() <= 1e-12 * best);
        for _ in 0..1000 {
            let u = random_unit_vector(n, &mut rng);
            if inner(&u, &h).norm_sqr() > best * (1.0 + MATCHED_FILTER_SLACK) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{violations} of 1000000 combiners beat the matched filter"),
    )
}

fn main() {
    let started = Instant::now();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |id: u32, name: &'static str, o: Outcome| {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict}  {name}: {}", o.detail);
        results.push((id, name, o));
    };

    report(1, "OPA corner optimality", c1_opa_corner());
    report(2, "scheduling oracle equivalence", c2_scheduling_oracle());
    let base = baseline_runs();
    report(3, "sum-rate ordering", c3_sum_ordering(&base));
    report(4, "UL/DL ordering", c4_direction_ordering(&base));
    report(5, "OPA benefit", c5_opa_benefit(&base));
    report(6, "SIC sweep", c6_sic_sweep());
    report(7, "antenna benefit", c7_antennas());
    report(8, "HD-vanishing terms", c8_hd_vanishing());
    report(9, "hard-core placement", c9_placement());
    report(10, "determinism across workers", c10_determinism());
    report(11, "matched-filter optimality", c11_matched_filter());

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    let unexpected: Vec<u32> = failed
        .iter()
        .copied()
        .filter(|id| !KNOWN_DEVIATIONS.contains(id))
        .collect();
    println!(
        "acceptance: {}/{} pass; documented deviations failing: {:?}; unexpected failures: {:?}; {:.1} s",
        results.len() - failed.len(),
        results.len(),
        failed
            .iter()
            .filter(|id| KNOWN_DEVIATIONS.contains(id))
            .collect::<Vec<_>>(),
        unexpected,
        started.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
