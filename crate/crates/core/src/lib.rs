//! Computable core for translated horospherical measures: exact root-datum
//! algebra, the equidistribution regime classifier, exponential-integral
//! asymptotics, height-counting experiments and Monte Carlo lattice statistics.

pub mod asymptotics;
pub mod countlab;
pub mod equisim;
pub mod error;
pub mod parallel;
pub mod rational;
pub mod regimes;
pub mod rootsys;

pub use error::{Error, Result};
pub use rational::Q;
