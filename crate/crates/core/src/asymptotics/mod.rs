//! Exponential integrals: g_m(x) = int_{-1}^{1} (1 - s^2)^{m/2} e^{xs} ds,
//! integrals of e^{v.x} over balls, and growth of e^{l_m} over truncated cones.

mod ball;
mod bessel;
mod gm;
pub mod quad;
mod region;

pub use ball::{ball_exponential_integral, shifted_cone_ball_2d, unit_ball_volume, BallIntegral, ShiftedConeBall};
pub use bessel::{bessel_i0, bessel_i1, bessel_i_scaled, ln_bessel_i, CROSSOVER as BESSEL_CROSSOVER};
pub use gm::{g_m, g_m_scaled, g_m_series_scaled, ln_g_m, series_cutoff};
pub use region::{
    cone_region_estimate, predicted_shape, region_sweep, simplex_exponential_integral, RegionEstimate,
    RegionMode, RegionSweep,
};
