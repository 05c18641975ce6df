//! Experiment manifests and result records.

use serde::{Deserialize, Serialize};

use horocone::asymptotics::RegionMode;
use horocone::countlab::{GrowthModel, SeriesPoint};
use horocone::equisim::ProbeSettings;
use horocone::rational::{serde_qvec, Q};
use horocone::rootsys::{build_root_datum, CartanType, DatumSpec, ExplicitData, ParabolicIndex, RootDatum};

use crate::failure::Failure;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub command: Command,
    /// Every manifest records a seed, used or not.
    #[serde(default)]
    pub seed: u64,
    /// Both are refreshed when a manifest file is executed.
    #[serde(default)]
    pub artifact_version: String,
    #[serde(default)]
    pub timestamp: String,
}

impl ExperimentManifest {
    pub fn new(command: Command, seed: u64) -> Self {
        let mut m = ExperimentManifest { command, seed, artifact_version: String::new(), timestamp: String::new() };
        m.stamp();
        m
    }

    pub fn stamp(&mut self) {
        self.artifact_version = ARTIFACT_VERSION.to_string();
        self.timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    }
}

/// A split type by name or explicit relative root data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatumRef {
    Type(CartanType),
    Explicit(ExplicitData),
}

impl DatumRef {
    pub fn build(&self) -> Result<RootDatum, Failure> {
        let spec = match self {
            DatumRef::Type(t) => DatumSpec::Split(*t),
            DatumRef::Explicit(d) => DatumSpec::Explicit(d.clone()),
        };
        Ok(build_root_datum(&spec)?)
    }
}

/// Abscissae for a series: an explicit list, a doubling range or an
/// arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "grid", rename_all = "snake_case")]
pub enum Grid {
    List { values: Vec<f64> },
    /// min, 2 min, 4 min, ... up to max, with max appended if not reached exactly.
    Dyadic { min: f64, max: f64 },
    Linear { min: f64, max: f64, step: f64 },
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, Failure> {
        let v = match *self {
            Grid::List { ref values } => values.clone(),
            Grid::Dyadic { min, max } => {
                if !(min > 0.0 && max.is_finite()) {
                    return Err(Failure::validation("dyadic grid needs 0 < min and finite max"));
                }
                let mut v = Vec::new();
                let mut x = min;
                while x <= max {
                    v.push(x);
                    x *= 2.0;
                }
                if v.last().is_some_and(|&l| l < max) {
                    v.push(max);
                }
                v
            }
            Grid::Linear { min, max, step } => {
                if !(step > 0.0 && min.is_finite() && max.is_finite()) {
                    return Err(Failure::validation("linear grid needs step > 0 and finite bounds"));
                }
                let n = ((max - min) / step + 1e-9).floor();
                if n < 0.0 {
                    Vec::new()
                } else {
                    (0..=n as usize).map(|i| min + i as f64 * step).collect()
                }
            }
        };
        if v.is_empty() {
            return Err(Failure::validation("grid is empty"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Failure::validation("grid values must be finite"));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Failure::validation("grid values must be strictly increasing"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl3Stat {
    Siegel,
    Escape,
    Lambda1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Command {
    Rootsys {
        datum: DatumRef,
        #[serde(default)]
        parabolic: ParabolicIndex,
    },
    Classify {
        datum: DatumRef,
        #[serde(default)]
        parabolic: ParabolicIndex,
        #[serde(with = "serde_qvec")]
        cochar: Vec<Q>,
        /// Target parabolic for the absolute-continuity checklist.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<ParabolicIndex>,
    },
    Gm {
        m: i64,
        x: Grid,
    },
    Ball {
        dim: usize,
        v: Vec<f64>,
        radii: Grid,
    },
    ConeBall {
        v: [f64; 2],
        apex: [f64; 2],
        half_angle: f64,
        radii: Grid,
    },
    Region {
        m: Vec<u64>,
        c: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<Vec<f64>>,
        t: Grid,
        /// Monte Carlo sample count; grid quadrature when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<u64>,
    },
    Exponents {
        datum: DatumRef,
        #[serde(default)]
        parabolic: ParabolicIndex,
        c: Vec<u64>,
    },
    Projective {
        n: usize,
        t: Grid,
        /// Recount with the Moebius strategy and compare.
        #[serde(default)]
        verify: bool,
    },
    Flags {
        c: [u32; 2],
        t: Grid,
        #[serde(default)]
        verify: bool,
    },
    Horocycles {
        r: Grid,
    },
    Fit {
        points: Vec<SeriesPoint>,
        model: GrowthModel,
    },
    Xi {
        s: f64,
        q_max: u64,
    },
    SimHorocycle {
        y0: f64,
        #[serde(rename = "N")]
        n: usize,
        h: Vec<f64>,
    },
    SimSl3 {
        #[serde(with = "serde_qvec")]
        theta: Vec<Q>,
        t: f64,
        #[serde(rename = "N")]
        n: usize,
        stat: Sl3Stat,
        #[serde(default = "default_r")]
        r: f64,
        #[serde(default = "default_eps")]
        eps: f64,
    },
    Concordance {
        rays: usize,
        settings: ProbeSettings,
    },
}

fn default_r() -> f64 {
    1.337
}

fn default_eps() -> f64 {
    0.1
}

impl Command {
    pub fn region_mode(samples: Option<u64>, seed: u64) -> RegionMode {
        match samples {
            Some(samples) => RegionMode::MonteCarlo { samples, seed },
            None => RegionMode::Grid,
        }
    }
}

/// A quantity checked against a reference that does not come from the
/// theory being tested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub quantity: String,
    pub oracle: String,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub manifest: ExperimentManifest,
    pub outputs: serde_json::Value,
    pub provenance: Vec<Provenance>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use horocone::rational::qvec;

    #[test]
    fn grids() {
        assert_eq!(Grid::Dyadic { min: 2.0, max: 16.0 }.values().unwrap(), vec![2.0, 4.0, 8.0, 16.0]);
        assert_eq!(Grid::Dyadic { min: 16.0, max: 1e5 }.values().unwrap().last(), Some(&1e5));
        assert_eq!(Grid::Linear { min: 0.0, max: 1.0, step: 0.5 }.values().unwrap(), vec![0.0, 0.5, 1.0]);
        for bad in [
            Grid::List { values: vec![] },
            Grid::List { values: vec![2.0, 1.0] },
            Grid::Dyadic { min: 8.0, max: 4.0 },
            Grid::Dyadic { min: 0.0, max: 4.0 },
            Grid::Linear { min: 2.0, max: 1.0, step: 0.5 },
            Grid::Linear { min: 0.0, max: 1.0, step: 0.0 },
        ] {
            let e = bad.values().unwrap_err();
            assert_eq!(e.exit_code(), 1, "{bad:?}");
        }
    }

    #[test]
    fn manifests_round_trip() {
        let commands = vec![
            Command::Classify {
                datum: DatumRef::Type("A4".parse().unwrap()),
                parabolic: ParabolicIndex::empty(),
                cochar: vec![Q::new(1.into(), 3.into()), Q::from_integer((-2).into()), Q::from_integer(0.into())],
                target: Some("1,2".parse().unwrap()),
            },
            Command::Region { m: vec![2, 2], c: vec![1, 2], y: None, t: Grid::Dyadic { min: 1.0, max: 64.0 }, samples: Some(10) },
            Command::Flags { c: [2, 2], t: Grid::Dyadic { min: 16.0, max: 1e4 }, verify: true },
            Command::Fit {
                points: vec![SeriesPoint { t: 2.0, n: 4 }, SeriesPoint { t: 4.0, n: 9 }],
                model: GrowthModel::PowerLog { a: Some(1.0) },
            },
            Command::SimSl3 { theta: qvec(&[1, 0, -1]), t: 10.0, n: 100, stat: Sl3Stat::Siegel, r: 1.337, eps: 0.1 },
            Command::Concordance { rays: 3, settings: ProbeSettings::default() },
        ];
        for cmd in commands {
            let m = ExperimentManifest::new(cmd, 17);
            let text = serde_json::to_string(&m).unwrap();
            let back: ExperimentManifest = serde_json::from_str(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }

    #[test]
    fn rationals_are_strings() {
        let m = ExperimentManifest::new(
            Command::SimSl3 { theta: vec![Q::new(1.into(), 2.into())], t: 1.0, n: 1, stat: Sl3Stat::Escape, r: 1.0, eps: 0.1 },
            0,
        );
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["command"]["theta"][0], "1/2");
        assert_eq!(v["command"]["kind"], "sim_sl3");
    }
}
