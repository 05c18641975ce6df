//! Monte Carlo probes of translated horospherical orbits: the closed
//! horocycle of the modular surface and translates of the unipotent orbit
//! of Z^3.

mod hyperbolic;
mod lattice;
mod sl3;

pub use hyperbolic::{
    cusp_area_fraction, cusp_mass, cusp_report, reduce_point, sample_horocycle_sl2, CuspReport, HPoint,
};
pub use lattice::{ball_volume, count_in_ball, det3, reduce3, LatticeSample, MAX_BALL_VOLUME, UNIPOTENT_BITS, V3};
pub use sl3::{
    concordant, escape_fraction, probe_ray, sample_translate_lattices_sl3, siegel_statistic, theta_coords,
    translate_diagonal, EmpiricalOutcome, ProbeSettings, RayProbe, SiegelStatistic,
};
