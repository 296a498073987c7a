//! Simulation parameters and the large-scale propagation profile.
//!
//! A configuration is a JSON object whose keys match the field names of
//! [`SimConfig`]. Omitted keys take the baseline defaults; unknown keys are
//! rejected. [`load_config`] validates every invariant and reports all
//! violations at once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{db_to_linear, dbm_to_watt, noise_power};

/// Shipped pathloss profile (pico-cell outdoor layout).
pub const DEFAULT_PROFILE_JSON: &str = include_str!("../data/pathloss_tr36828_outdoor_pico.json");

/// Shipped baseline configuration.
pub const BASELINE_CONFIG_JSON: &str = include_str!("../configs/baseline.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "ALG1")]
    Alg1,
    #[serde(rename = "ALG2")]
    Alg2,
    #[serde(rename = "ALG3")]
    Alg3,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg3];

    pub fn number(self) -> u8 {
        match self {
            Algorithm::Alg1 => 1,
            Algorithm::Alg2 => 2,
            Algorithm::Alg3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Algorithm::Alg1),
            2 => Some(Algorithm::Alg2),
            3 => Some(Algorithm::Alg3),
            _ => None,
        }
    }
}

/// Which interference terms the power-allocation objective may see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpaKnowledge {
    /// Intra-cell terms only; inter-cell interference is unknown to the BS.
    #[serde(rename = "LOCAL")]
    Local,
    /// Full interference, including inter-cell terms.
    #[serde(rename = "GENIE")]
    Genie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkClass {
    BsMt,
    MtBs,
    BsBs,
    MtMt,
}

/// Single- or dual-slope log-distance pathloss with log-normal shadowing.
///
/// `PL(d) = intercept + slope * log10(d / 1 km)` with `d` clamped below at
/// `min_distance_m`. When `breakpoint_m` is set, distances beyond it use the
/// `far_*` intercept and slope instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkModel {
    pub intercept_db: f64,
    pub slope_db_per_decade: f64,
    pub shadowing_sigma_db: f64,
    pub min_distance_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoint_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub far_intercept_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub far_slope_db_per_decade: Option<f64>,
}

impl LinkModel {
    pub fn single_slope(intercept_db: f64, slope: f64, sigma_db: f64, min_distance_m: f64) -> Self {
        LinkModel {
            intercept_db,
            slope_db_per_decade: slope,
            shadowing_sigma_db: sigma_db,
            min_distance_m,
            breakpoint_m: None,
            far_intercept_db: None,
            far_slope_db_per_decade: None,
        }
    }

    pub fn pathloss_db(&self, distance_m: f64) -> f64 {
        let d = distance_m.max(self.min_distance_m);
        let decades = (d / 1000.0).log10();
        match (self.breakpoint_m, self.far_intercept_db, self.far_slope_db_per_decade) {
            (Some(bp), Some(icpt), Some(slope)) if d > bp => icpt + slope * decades,
            _ => self.intercept_db + self.slope_db_per_decade * decades,
        }
    }

    /// Linear large-scale gain for a distance and a shadowing draw in dB,
    /// clamped to at most 0 dB.
    pub fn gain(&self, distance_m: f64, shadow_db: f64) -> f64 {
        db_to_linear(-self.pathloss_db(distance_m) - shadow_db).min(1.0)
    }

    fn validate(&self, name: &str, out: &mut Vec<String>) {
        if !self.intercept_db.is_finite() {
            out.push(format!("pathloss_profile.{name}.intercept_db must be finite"));
        }
        if !(self.slope_db_per_decade > 0.0 && self.slope_db_per_decade.is_finite()) {
            out.push(format!("pathloss_profile.{name}.slope_db_per_decade must be > 0"));
        }
        if !(self.shadowing_sigma_db >= 0.0 && self.shadowing_sigma_db.is_finite()) {
            out.push(format!("pathloss_profile.{name}.shadowing_sigma_db must be >= 0"));
        }
        if !(self.min_distance_m > 0.0 && self.min_distance_m.is_finite()) {
            out.push(format!("pathloss_profile.{name}.min_distance_m must be > 0"));
        }
        match (self.breakpoint_m, self.far_intercept_db, self.far_slope_db_per_decade) {
            (None, None, None) => {}
            (Some(bp), Some(icpt), Some(slope)) => {
                if !(bp > 0.0 && bp.is_finite()) {
                    out.push(format!("pathloss_profile.{name}.breakpoint_m must be > 0"));
                }
                if !icpt.is_finite() {
                    out.push(format!("pathloss_profile.{name}.far_intercept_db must be finite"));
                }
                if !(slope > 0.0 && slope.is_finite()) {
                    out.push(format!("pathloss_profile.{name}.far_slope_db_per_decade must be > 0"));
                }
            }
            _ => out.push(format!(
                "pathloss_profile.{name}: breakpoint_m, far_intercept_db and far_slope_db_per_decade must be given together"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathlossProfile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub bs_mt: LinkModel,
    pub mt_bs: LinkModel,
    pub bs_bs: LinkModel,
    pub mt_mt: LinkModel,
}

impl PathlossProfile {
    pub fn link(&self, class: LinkClass) -> &LinkModel {
        match class {
            LinkClass::BsMt => &self.bs_mt,
            LinkClass::MtBs => &self.mt_bs,
            LinkClass::BsBs => &self.bs_bs,
            LinkClass::MtMt => &self.mt_mt,
        }
    }

    /// Same model on all four link classes.
    pub fn uniform(model: LinkModel) -> Self {
        PathlossProfile {
            version: None,
            bs_mt: model.clone(),
            mt_bs: model.clone(),
            bs_bs: model.clone(),
            mt_mt: model,
        }
    }

    fn validate(&self, out: &mut Vec<String>) {
        self.bs_mt.validate("bs_mt", out);
        self.mt_bs.validate("mt_bs", out);
        self.bs_bs.validate("bs_bs", out);
        self.mt_mt.validate("mt_mt", out);
    }
}

impl Default for PathlossProfile {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_PROFILE_JSON).expect("shipped pathloss profile is valid JSON")
    }
}

/// All physical, layout and run parameters.
///
/// Powers are in dBm, the SIC capability and noise figures in dB, the
/// bandwidth in Hz, lengths in metres and the density in BSs/m².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub lambda_bs: f64,
    pub window_radius: f64,
    pub r0: f64,
    pub num_ul_candidates: usize,
    pub num_dl_candidates: usize,
    pub n_tx: usize,
    pub n_rx: usize,
    pub p_ul_max: f64,
    pub p_dl_max: f64,
    pub sic_capability: f64,
    pub bandwidth: f64,
    pub noise_figure_bs: f64,
    pub noise_figure_mt: f64,
    pub algorithm: Algorithm,
    pub opa_enabled: bool,
    pub opa_knowledge: OpaKnowledge,
    pub realizations: usize,
    pub seed: u64,
    /// Squared radius of the interfering UL-MT marks; `None` means `r0²`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mark_radius_sq: Option<f64>,
    /// Placement attempts per hard-core point before the layout saturates.
    pub attempt_budget: u32,
    pub pathloss_profile: PathlossProfile,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            lambda_bs: 2.5e-5,
            window_radius: 1000.0,
            r0: 40.0,
            num_ul_candidates: 10,
            num_dl_candidates: 10,
            n_tx: 1,
            n_rx: 1,
            p_ul_max: 23.0,
            p_dl_max: 24.0,
            sic_capability: 110.0,
            bandwidth: 20e6,
            noise_figure_bs: 5.0,
            noise_figure_mt: 9.0,
            algorithm: Algorithm::Alg1,
            opa_enabled: false,
            opa_knowledge: OpaKnowledge::Local,
            realizations: 10_000,
            seed: 1,
            mark_radius_sq: None,
            attempt_budget: 10_000,
            pathloss_profile: PathlossProfile::default(),
        }
    }
}

impl SimConfig {
    pub fn p_ul_max_w(&self) -> f64 {
        dbm_to_watt(self.p_ul_max)
    }

    pub fn p_dl_max_w(&self) -> f64 {
        dbm_to_watt(self.p_dl_max)
    }

    pub fn sic_linear(&self) -> f64 {
        db_to_linear(self.sic_capability)
    }

    /// σ₀², noise at the reference BS.
    pub fn noise_bs_w(&self) -> f64 {
        noise_power(self.bandwidth, self.noise_figure_bs)
    }

    /// σ_d², noise at a DL MT.
    pub fn noise_mt_w(&self) -> f64 {
        noise_power(self.bandwidth, self.noise_figure_mt)
    }

    pub fn mark_radius_sq_m2(&self) -> f64 {
        self.mark_radius_sq.unwrap_or(self.r0 * self.r0)
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        let positive = |name: &str, x: f64, v: &mut Vec<String>| {
            if !(x > 0.0 && x.is_finite()) {
                v.push(format!("{name} must be > 0 (got {x})"));
            }
        };
        let finite = |name: &str, x: f64, v: &mut Vec<String>| {
            if !x.is_finite() {
                v.push(format!("{name} must be finite (got {x})"));
            }
        };

        if !(self.lambda_bs >= 0.0 && self.lambda_bs.is_finite()) {
            v.push(format!("lambda_bs must be >= 0 (got {})", self.lambda_bs));
        }
        positive("window_radius", self.window_radius, &mut v);
        positive("r0", self.r0, &mut v);
        positive("bandwidth", self.bandwidth, &mut v);
        finite("p_ul_max", self.p_ul_max, &mut v);
        finite("p_dl_max", self.p_dl_max, &mut v);
        finite("noise_figure_bs", self.noise_figure_bs, &mut v);
        finite("noise_figure_mt", self.noise_figure_mt, &mut v);
        if !(self.sic_capability >= 0.0 && self.sic_capability.is_finite()) {
            v.push(format!("sic_capability must be >= 0 dB (got {})", self.sic_capability));
        }
        for (name, n) in [
            ("num_ul_candidates", self.num_ul_candidates),
            ("num_dl_candidates", self.num_dl_candidates),
            ("n_tx", self.n_tx),
            ("n_rx", self.n_rx),
            ("realizations", self.realizations),
        ] {
            if n < 1 {
                v.push(format!("{name} must be >= 1"));
            }
        }
        if self.window_radius.is_finite() && self.r0.is_finite() && self.window_radius < 4.0 * self.r0 {
            v.push(format!(
                "window_radius must be >= 4*r0 (got {} < {})",
                self.window_radius,
                4.0 * self.r0
            ));
        }
        if let Some(m) = self.mark_radius_sq {
            positive("mark_radius_sq", m, &mut v);
        }
        if self.attempt_budget < 1 {
            v.push("attempt_budget must be >= 1".to_string());
        }
        self.pathloss_profile.validate(&mut v);

        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parse and validate a JSON configuration document.
///
/// An empty (or whitespace-only) document yields the baseline defaults.
pub fn load_config(text: &str) -> Result<SimConfig> {
    let config: SimConfig = if text.trim().is_empty() {
        SimConfig::default()
    } else {
        serde_json::from_str(text)?
    };
    config.validate()?;
    Ok(config)
}
