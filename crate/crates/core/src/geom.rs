//! Network layout sampling.
//!
//! The reference BS sits at the origin. Interfering BSs follow a hard-core
//! process built by sequential inhibition: a Poisson number of points is
//! requested for the window disc and placed one by one, each uniformly at
//! random and rejected while it falls within `2·r0` of the origin or of an
//! already placed BS. Each interfering BS carries one mark, its scheduled UL
//! MT. The reference cell's UL and DL candidates are uniform on the disc of
//! radius `r0`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::config::SimConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Point {
            x: radius * angle.cos(),
            y: radius * angle.sin(),
        }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// One sampled network instance around the reference BS.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub interferer_bs: Vec<Point>,
    /// `interferer_ul_mt[i]` is the scheduled UL MT of `interferer_bs[i]`.
    pub interferer_ul_mt: Vec<Point>,
    pub ul_candidates: Vec<Point>,
    pub dl_candidates: Vec<Point>,
    /// The requested interferer count could not be placed within the
    /// attempt budget.
    pub saturated: bool,
}

impl Topology {
    pub fn num_interferers(&self) -> usize {
        self.interferer_bs.len()
    }

    /// CSV dump: `kind,x_m,y_m`, reference BS first.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,x_m,y_m\n");
        let mut row = |kind: &str, p: &Point| {
            let _ = writeln!(s, "{kind},{},{}", p.x, p.y);
        };
        row("bs", &Point::ORIGIN);
        for p in &self.interferer_bs {
            row("bs", p);
        }
        for p in &self.interferer_ul_mt {
            row("ul_mark", p);
        }
        for p in &self.ul_candidates {
            row("ul_cand", p);
        }
        for p in &self.dl_candidates {
            row("dl_cand", p);
        }
        s
    }
}

/// Uniform point on the disc of the given radius (`radius·√u` trick).
pub fn uniform_in_disc<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = rng.random_range(0.0..2.0 * PI);
    Point::polar(r, phi)
}

pub fn sample_topology<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Topology {
    let exclusion_sq = (2.0 * config.r0).powi(2);
    let mean = config.lambda_bs * PI * config.window_radius * config.window_radius;
    let target = if mean > 0.0 {
        Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0)
    } else {
        0
    };

    let mut interferer_bs: Vec<Point> = Vec::with_capacity(target);
    let mut saturated = false;
    'place: for _ in 0..target {
        for _ in 0..config.attempt_budget {
            let p = uniform_in_disc(config.window_radius, rng);
            if p.dist_sq(Point::ORIGIN) < exclusion_sq {
                continue;
            }
            if interferer_bs.iter().all(|q| p.dist_sq(*q) >= exclusion_sq) {
                interferer_bs.push(p);
                continue 'place;
            }
        }
        saturated = true;
        break;
    }

    let mark_sq = config.mark_radius_sq_m2();
    let interferer_ul_mt = interferer_bs
        .iter()
        .map(|b| {
            let r = rng.random_range(0.0..=mark_sq);
            let phi = rng.random_range(0.0..2.0 * PI);
            *b + Point::polar(r.sqrt(), phi)
        })
        .collect();

    let ul_candidates = (0..config.num_ul_candidates)
        .map(|_| uniform_in_disc(config.r0, rng))
        .collect();
    let dl_candidates = (0..config.num_dl_candidates)
        .map(|_| uniform_in_disc(config.r0, rng))
        .collect();

    Topology {
        interferer_bs,
        interferer_ul_mt,
        ul_candidates,
        dl_candidates,
        saturated,
    }
}

/// Minimum Euclidean distance over all pairs.
///
/// Sweep over the points sorted by `x`, stopping each inner scan once the
/// horizontal gap alone exceeds the best distance found so far.
pub fn min_pairwise_distance(points: &[Point]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut best_sq = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let dx = sorted[j].x - sorted[i].x;
            if dx * dx >= best_sq {
                break;
            }
            best_sq = best_sq.min(sorted[i].dist_sq(sorted[j]));
        }
    }
    Ok(best_sq.sqrt())
}
