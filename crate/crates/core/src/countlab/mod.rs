//! Counting experiments: exponents of height zeta functions, exhaustive
//! enumeration of rational points and horocycle lifts, and growth fits.

mod arith;
mod exponents;
mod fit;
mod flags;
mod horocycle;
mod projective;
mod xi;

pub use exponents::{counting_exponents, CountingExponents, LineBundleChar};
pub use fit::{dyadic_grid, fit_growth, fit_points, CountSeries, GrowthFit, GrowthModel, SeriesPoint};
pub use flags::{count_flags_sl3, count_flags_sl3_with, flags_series, FlagOrder};
pub use horocycle::{count_horocycle_lifts, distance_to_horocycle, horocycle_series, HorocycleSeries};
pub use projective::{count_projective, count_projective_mobius, projective_series};
pub use xi::{xi_tail_check, XiReport, XiShell, XiStatus};
