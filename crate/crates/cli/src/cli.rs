//! Command-line grammar and its translation into manifests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use horocone::countlab::GrowthModel;
use horocone::equisim::ProbeSettings;
use horocone::rational::{parse_qlist, Q};
use horocone::rootsys::{CartanType, ExplicitData, ParabolicIndex};

use crate::emit::Format;
use crate::failure::Failure;
use crate::manifest::{Command, DatumRef, Grid, Sl3Stat};
use crate::run::{dyadic_or_single, read_series_csv};

#[derive(Debug, Parser)]
#[command(name = "horocone", version, about = "Regime classification, asymptotics and counting experiments for translated horospherical measures")]
pub struct Cli {
    /// Write the result here instead of stdout (atomically, never partially).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every random choice; recorded in the manifest.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DatumArgs {
    /// Split Cartan type, e.g. A4, B2, G2.
    #[arg(long = "type")]
    pub ty: Option<CartanType>,
    /// JSON file with explicit relative root data.
    #[arg(long)]
    pub explicit: Option<PathBuf>,
}

impl DatumArgs {
    fn resolve(&self) -> Result<DatumRef, Failure> {
        match (&self.ty, &self.explicit) {
            (Some(t), _) => Ok(DatumRef::Type(*t)),
            (None, Some(path)) => {
                let data: ExplicitData = serde_json::from_str(&read(path)?)?;
                Ok(DatumRef::Explicit(data))
            }
            (None, None) => Err(Failure::validation("give --type or --explicit")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Root datum, rho'_F, the integers k_a and (rank 2) the cone section.
    Rootsys {
        #[command(flatten)]
        datum: DatumArgs,
        /// Parabolic subset F, e.g. "" or "1,3".
        #[arg(long, default_value = "")]
        parabolic: ParabolicIndex,
    },
    /// Limiting behavior of theta(t) mu_{Q_E} along a rational ray.
    Classify {
        #[command(flatten)]
        datum: DatumArgs,
        /// Cocharacter in ambient coordinates; entries may be p/q.
        #[arg(long, allow_hyphen_values = true, value_parser = q_list)]
        cochar: QList,
        /// The subset E of the starting parabolic.
        #[arg(long, default_value = "")]
        parabolic: ParabolicIndex,
        /// Also run the absolute-continuity checklist with this target F.
        #[arg(long)]
        target: Option<ParabolicIndex>,
    },
    #[command(subcommand)]
    Asym(AsymCmd),
    #[command(subcommand)]
    Count(CountCmd),
    #[command(subcommand)]
    Sim(SimCmd),
    /// Execute a manifest file.
    Run {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Check a result record against the bundled schema.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionModeArg {
    Grid,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum AsymCmd {
    /// g_m(x) with its leading asymptote.
    Gm {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_parser = f64_list)]
        x: FList,
    },
    /// Exponential integral over a ball against its asymptote.
    Ball {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = f64_list)]
        v: FList,
        #[arg(long = "R", value_parser = f64_list)]
        r: FList,
    },
    /// Planar cone-in-ball integral relative to the full disc.
    Cone {
        #[arg(long, allow_hyphen_values = true, value_parser = f64_list)]
        v: FList,
        #[arg(long, allow_hyphen_values = true, value_parser = f64_list, default_value = "0,0")]
        apex: FList,
        #[arg(long)]
        half_angle: f64,
        #[arg(long = "R", value_parser = f64_list)]
        r: FList,
    },
    /// Exponential integral over the truncated cone region.
    Region {
        #[arg(long, value_parser = u64_list)]
        m: UList,
        #[arg(long, value_parser = u64_list)]
        c: UList,
        /// Shift vector; zero when omitted.
        #[arg(long, allow_hyphen_values = true, value_parser = f64_list)]
        y: Option<FList>,
        #[arg(long = "T", value_parser = f64_list)]
        t: FList,
        #[arg(long, value_enum, default_value_t = RegionModeArg::Grid)]
        mode: RegionModeArg,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CountCmd {
    /// Predicted exponents (a, b) for a line bundle on G/Q_E.
    Exponents {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value = "")]
        parabolic: ParabolicIndex,
        #[arg(long, value_parser = u64_list)]
        c: UList,
    },
    /// Rational points of P^{n-1} of height at most T.
    Projective {
        #[arg(long)]
        n: usize,
        #[arg(long = "Tmax")]
        t_max: f64,
        #[arg(long = "Tmin", default_value_t = 2.0)]
        t_min: f64,
        /// Count on Tmin, 2 Tmin, ..., Tmax instead of Tmax alone.
        #[arg(long)]
        dyadic: bool,
        /// Recount by Moebius inversion and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Flags in Q^3 with H(line)^c1 H(plane)^c2 <= T, on a dyadic grid.
    Flags {
        #[arg(long, value_parser = u64_list)]
        c: UList,
        #[arg(long = "Tmax")]
        t_max: f64,
        #[arg(long = "Tmin", default_value_t = 16.0)]
        t_min: f64,
        /// Recount with both nested loop orders and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Horocycle lifts within hyperbolic distance R of i.
    Horocycles {
        #[arg(long = "Rmax")]
        r_max: f64,
        #[arg(long = "Rmin", default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
    },
    /// Fit a growth model to a CSV series with columns T (or R) and N.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = ["power", "power_log", "exponential"])]
        model: String,
        /// Fixed power for power_log.
        #[arg(long)]
        a: Option<f64>,
    },
    /// Dyadic-shell check of the xi series at exponent s.
    Xi {
        #[arg(long)]
        s: f64,
        #[arg(long = "Qmax")]
        q_max: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SimCmd {
    /// Cusp mass of a long closed horocycle in the modular surface.
    Horocycle {
        #[arg(long)]
        y0: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_parser = f64_list)]
        h: FList,
    },
    /// Statistics of translated unipotent lattices in SL3.
    Sl3 {
        #[arg(long, allow_hyphen_values = true, value_parser = q_list)]
        theta: QList,
        #[arg(long)]
        t: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value_t = StatArg::Siegel)]
        stat: StatArg,
        #[arg(long, default_value_t = 1.337)]
        r: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Also write per-sample values to this CSV file.
        #[arg(long)]
        raw: Option<PathBuf>,
    },
    /// Compare exact verdicts with simulated behavior on random rays.
    Concordance {
        #[arg(long, default_value_t = 10)]
        rays: usize,
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        #[arg(long = "N", default_value_t = 4000)]
        n: usize,
        #[arg(long, default_value_t = 1.337)]
        r: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Siegel,
    Escape,
    Lambda1,
}

impl From<StatArg> for Sl3Stat {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Siegel => Sl3Stat::Siegel,
            StatArg::Escape => Sl3Stat::Escape,
            StatArg::Lambda1 => Sl3Stat::Lambda1,
        }
    }
}

// Newtypes keep clap from treating the lists as repeated arguments.
#[derive(Debug, Clone)]
pub struct FList(pub Vec<f64>);
#[derive(Debug, Clone)]
pub struct UList(pub Vec<u64>);
#[derive(Debug, Clone)]
pub struct QList(pub Vec<Q>);

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty())
}

fn f64_list(s: &str) -> Result<FList, String> {
    split(s).map(|p| p.parse::<f64>().map_err(|_| format!("not a number: {p:?}"))).collect::<Result<_, _>>().map(FList)
}

fn u64_list(s: &str) -> Result<UList, String> {
    split(s)
        .map(|p| p.parse::<u64>().map_err(|_| format!("not a nonnegative integer: {p:?}")))
        .collect::<Result<_, _>>()
        .map(UList)
}

fn q_list(s: &str) -> Result<QList, String> {
    parse_qlist(s).map(QList).map_err(|e| e.to_string())
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

fn pair<T: Copy>(v: &[T], what: &str) -> Result<[T; 2], Failure> {
    match v {
        [a, b] => Ok([*a, *b]),
        _ => Err(Failure::validation(format!("{what} needs exactly two entries"))),
    }
}

fn list(values: Vec<f64>) -> Grid {
    Grid::List { values }
}

impl Cmd {
    /// The manifest command for a direct invocation; `None` for run/validate.
    pub fn to_command(&self) -> Result<Option<Command>, Failure> {
        let cmd = match self {
            Cmd::Rootsys { datum, parabolic } => Command::Rootsys { datum: datum.resolve()?, parabolic: parabolic.clone() },
            Cmd::Classify { datum, cochar, parabolic, target } => Command::Classify {
                datum: datum.resolve()?,
                parabolic: parabolic.clone(),
                cochar: cochar.0.clone(),
                target: target.clone(),
            },
            Cmd::Asym(a) => match a {
                AsymCmd::Gm { m, x } => Command::Gm { m: *m, x: list(x.0.clone()) },
                AsymCmd::Ball { dim, v, r } => Command::Ball { dim: *dim, v: v.0.clone(), radii: list(r.0.clone()) },
                AsymCmd::Cone { v, apex, half_angle, r } => Command::ConeBall {
                    v: pair(&v.0, "--v")?,
                    apex: pair(&apex.0, "--apex")?,
                    half_angle: *half_angle,
                    radii: list(r.0.clone()),
                },
                AsymCmd::Region { m, c, y, t, mode, samples } => Command::Region {
                    m: m.0.clone(),
                    c: c.0.clone(),
                    y: y.as_ref().map(|y| y.0.clone()),
                    t: list(t.0.clone()),
                    samples: (*mode == RegionModeArg::Mc).then_some(*samples),
                },
            },
            Cmd::Count(c) => match c {
                CountCmd::Exponents { datum, parabolic, c } => {
                    Command::Exponents { datum: datum.resolve()?, parabolic: parabolic.clone(), c: c.0.clone() }
                }
                CountCmd::Projective { n, t_max, t_min, dyadic, verify } => {
                    Command::Projective { n: *n, t: dyadic_or_single(*t_min, *t_max, *dyadic), verify: *verify }
                }
                CountCmd::Flags { c, t_max, t_min, verify } => {
                    let [c1, c2] = pair(&c.0, "--c")?;
                    let narrow = |x: u64| u32::try_from(x).map_err(|_| Failure::validation("--c entries are too large"));
                    Command::Flags {
                        c: [narrow(c1)?, narrow(c2)?],
                        t: Grid::Dyadic { min: *t_min, max: *t_max },
                        verify: *verify,
                    }
                }
                CountCmd::Horocycles { r_max, r_min, step } => {
                    Command::Horocycles { r: Grid::Linear { min: *r_min, max: *r_max, step: *step } }
                }
                CountCmd::Fit { input, model, a } => {
                    let mut model: GrowthModel = model.parse()?;
                    if let Some(a) = a {
                        match &mut model {
                            GrowthModel::PowerLog { a: slot } => *slot = Some(*a),
                            _ => return Err(Failure::validation("--a applies to power_log only")),
                        }
                    }
                    Command::Fit { points: read_series_csv(&read(input)?)?, model }
                }
                CountCmd::Xi { s, q_max } => Command::Xi { s: *s, q_max: *q_max },
            },
            Cmd::Sim(s) => match s {
                SimCmd::Horocycle { y0, n, h } => Command::SimHorocycle { y0: *y0, n: *n, h: h.0.clone() },
                SimCmd::Sl3 { theta, t, n, stat, r, eps, .. } => Command::SimSl3 {
                    theta: theta.0.clone(),
                    t: *t,
                    n: *n,
                    stat: (*stat).into(),
                    r: *r,
                    eps: *eps,
                },
                SimCmd::Concordance { rays, t, n, r, eps } => Command::Concordance {
                    rays: *rays,
                    settings: ProbeSettings { t: *t, n: *n, r: *r, eps: *eps, ..ProbeSettings::default() },
                },
            },
            Cmd::Run { .. } | Cmd::Validate { .. } => return Ok(None),
        };
        Ok(Some(cmd))
    }

    pub fn raw_path(&self) -> Option<&PathBuf> {
        match self {
            Cmd::Sim(SimCmd::Sl3 { raw, .. }) => raw.as_ref(),
            _ => None,
        }
    }
}
