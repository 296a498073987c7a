//! Decibel and power-unit conversions.
//!
//! Everything inside the simulator works in linear SI units (W, m, Hz).
//! These helpers are only used at the configuration and report boundaries.

/// Thermal noise power spectral density at room temperature, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

#[inline]
pub fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

#[inline]
pub fn watt_to_dbm(watt: f64) -> f64 {
    10.0 * watt.log10() + 30.0
}

/// Receiver noise floor in dBm for a bandwidth in Hz and a noise figure in dB.
pub fn noise_power_dbm(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    debug_assert!(bandwidth_hz > 0.0);
    THERMAL_NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db
}

/// Receiver noise floor in watts.
pub fn noise_power(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    dbm_to_watt(noise_power_dbm(bandwidth_hz, noise_figure_db))
}
