//! Maps manifests onto the library and collects the result record.

use rand::Rng;
use serde::{Deserialize, Serialize};

use horocone::asymptotics::{
    ball_exponential_integral, g_m, ln_g_m, region_sweep, series_cutoff, shifted_cone_ball_2d,
};
use horocone::countlab::{
    count_flags_sl3_with, count_projective_mobius, counting_exponents, fit_growth, flags_series,
    horocycle_series, projective_series, xi_tail_check, CountSeries, FlagOrder, GrowthModel,
    LineBundleChar, XiReport,
};
use horocone::equisim::{
    concordant, cusp_report, escape_fraction, probe_ray, sample_translate_lattices_sl3,
    siegel_statistic, CuspReport, EmpiricalOutcome, LatticeSample,
};
use horocone::parallel::{block_rng, Moments};
use horocone::rational::{serde_qvec, to_f64, Q};
use horocone::regimes::{abs_cont_check, classify_ray, AbsContChecklist, RegimeVerdict, VerdictKind};
use horocone::rootsys::{datum, k_alpha, rho_prime, CharVec, CochVec, ParabolicIndex, RootDatum};

use crate::emit::Table;
use crate::failure::Failure;
use crate::manifest::{Command, ExperimentManifest, Grid, Provenance, ResultRecord, Sl3Stat};

/// Fits are attached to series with at least this many points.
const MIN_FIT_POINTS: usize = 5;

pub struct Execution {
    pub record: ResultRecord,
    /// Per-sample statistics, produced only when asked for.
    pub raw: Option<Table>,
}

pub fn run_experiment(manifest: &ExperimentManifest) -> Result<ResultRecord, Failure> {
    Ok(execute(manifest, false)?.record)
}

pub fn execute(manifest: &ExperimentManifest, want_raw: bool) -> Result<Execution, Failure> {
    log::info!("running {}", kind_name(&manifest.command));
    let mut provenance = Vec::new();
    let mut raw = None;
    let seed = manifest.seed;
    let outputs = match &manifest.command {
        Command::Rootsys { datum, parabolic } => to_value(rootsys(&datum.build()?, parabolic)?)?,
        Command::Classify { datum, parabolic, cochar, target } => {
            let d = datum.build()?;
            let theta = CochVec::new(cochar.clone());
            let verdict = classify_ray(&d, parabolic, &theta)?;
            let abs_cont = target.as_ref().map(|f| abs_cont_check(&d, parabolic, f, &theta)).transpose()?;
            let pairings = (0..d.rank)
                .map(|a| PairingRow {
                    root: a + 1,
                    weight_pairing: verdict.weight_pairings.get(a).cloned(),
                    root_pairing: verdict.root_pairings.get(a).cloned(),
                })
                .collect();
            to_value(ClassifyOut { verdict, pairings, abs_cont })?
        }
        Command::Gm { m, x } => {
            let values = x.values()?.into_iter().map(|x| gm_row(*m, x)).collect::<Result<Vec<_>, _>>()?;
            serde_json::json!({ "values": values })
        }
        Command::Ball { dim, v, radii } => {
            let values = radii
                .values()?
                .into_iter()
                .map(|r| ball_exponential_integral(v, *dim, r))
                .collect::<Result<Vec<_>, _>>()?;
            serde_json::json!({ "values": values })
        }
        Command::ConeBall { v, apex, half_angle, radii } => {
            let values = radii
                .values()?
                .into_iter()
                .map(|r| shifted_cone_ball_2d(*v, *apex, *half_angle, r))
                .collect::<Result<Vec<_>, _>>()?;
            serde_json::json!({ "values": values })
        }
        Command::Region { m, c, y, t, samples } => {
            let y = y.clone().unwrap_or_else(|| vec![0.0; m.len()]);
            let mode = Command::region_mode(*samples, seed);
            to_value(region_sweep(m, c, &y, &t.values()?, mode)?)?
        }
        Command::Exponents { datum, parabolic, c } => {
            let d = datum.build()?;
            to_value(counting_exponents(&d, &LineBundleChar::new(parabolic.clone(), c.clone()))?)?
        }
        Command::Projective { n, t, verify } => {
            let ts = t.values()?;
            let mut series = projective_series(*n, &ts)?;
            attach_fit(&mut series, GrowthModel::Power)?;
            let verified = if *verify {
                let mut ok = true;
                for p in &series.points {
                    ok &= count_projective_mobius(*n, p.t)? == p.n;
                }
                Some(ok)
            } else {
                None
            };
            to_value(CountOut { series, exponents: None, verified })?
        }
        Command::Flags { c, t, verify } => {
            let ts = t.values()?;
            let exponents = counting_exponents(
                &datum("A2")?,
                &LineBundleChar::new(ParabolicIndex::empty(), vec![c[0] as u64, c[1] as u64]),
            )?;
            let mut series = flags_series(c[0], c[1], &ts)?;
            attach_fit(&mut series, GrowthModel::PowerLog { a: Some(to_f64(&exponents.a)) })?;
            let verified = if *verify {
                let mut ok = true;
                for p in &series.points {
                    for order in [FlagOrder::LineOuter, FlagOrder::PlaneOuter] {
                        ok &= count_flags_sl3_with(c[0], c[1], p.t, order)? == p.n;
                    }
                }
                Some(ok)
            } else {
                None
            };
            to_value(CountOut { series, exponents: Some(exponents), verified })?
        }
        Command::Horocycles { r } => to_value(horocycles(&r.values()?)?)?,
        Command::Fit { points, model } => {
            let series = CountSeries { points: points.clone(), fit: None };
            to_value(fit_growth(&series, *model)?)?
        }
        Command::Xi { s, q_max } => {
            let report = xi_tail_check(*s, *q_max)?;
            to_value(XiOut { total: report.total(), report })?
        }
        Command::SimHorocycle { y0, n, h } => {
            if h.is_empty() {
                return Err(Failure::validation("no cusp heights given"));
            }
            let reports = h.iter().map(|&h| cusp_report(*y0, *n, h)).collect::<Result<Vec<CuspReport>, _>>()?;
            for r in &reports {
                provenance.push(Provenance {
                    quantity: format!("cusp_mass(h={})", r.h),
                    oracle: r.oracle.clone(),
                    reference: r.target,
                });
            }
            serde_json::json!({ "reports": reports })
        }
        Command::SimSl3 { theta, t, n, stat, r, eps } => {
            let samples = sample_translate_lattices_sl3(&CochVec::new(theta.clone()), *t, *n, seed)?;
            let summary = match stat {
                Sl3Stat::Siegel => {
                    let st = siegel_statistic(&samples, *r)?;
                    provenance.push(Provenance {
                        quantity: "siegel_mean".into(),
                        oracle: st.oracle.clone(),
                        reference: st.haar_reference,
                    });
                    let dev = st.relative_deviation();
                    let mut v = to_value(st)?;
                    v["relative_deviation"] = dev.into();
                    v
                }
                Sl3Stat::Escape => serde_json::json!({
                    "eps": eps,
                    "N": samples.len(),
                    "escape_fraction": escape_fraction(&samples, *eps)?,
                }),
                Sl3Stat::Lambda1 => {
                    let mut m = Moments::default();
                    samples.iter().for_each(|s| m.push(s.lambda1));
                    serde_json::json!({ "N": m.n, "mean": m.mean(), "stderr": m.stderr() })
                }
            };
            if want_raw {
                raw = Some(raw_table(&samples, *stat, *r)?);
            }
            serde_json::json!({ "stat": stat, "summary": summary })
        }
        Command::Concordance { rays, settings } => {
            let out = concordance(*rays, settings, seed)?;
            for (i, row) in out.rays.iter().enumerate() {
                if let Some(st) = &row.siegel {
                    provenance.push(Provenance {
                        quantity: format!("siegel_mean(ray {i})"),
                        oracle: st.oracle.clone(),
                        reference: st.haar_reference,
                    });
                }
            }
            to_value(out)?
        }
    };
    Ok(Execution { record: ResultRecord { manifest: manifest.clone(), outputs, provenance }, raw })
}

pub fn kind_name(cmd: &Command) -> String {
    match serde_json::to_value(cmd) {
        Ok(v) => v["kind"].as_str().unwrap_or("unknown").to_string(),
        Err(_) => "unknown".into(),
    }
}

fn to_value<T: Serialize>(x: T) -> Result<serde_json::Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::runtime(format!("serializing outputs: {e}")))
}

fn attach_fit(series: &mut CountSeries, model: GrowthModel) -> Result<(), Failure> {
    if series.points.len() >= MIN_FIT_POINTS {
        series.fit = Some(fit_growth(series, model)?);
    }
    Ok(())
}

#[derive(Serialize)]
struct RootsysOut {
    datum: RootDatum,
    parabolic: ParabolicIndex,
    rho_prime: CharVec,
    #[serde(with = "serde_qvec")]
    k_alpha: Vec<Q>,
    table: Vec<RootRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cone_section: Option<ConeSection>,
}

#[derive(Serialize)]
struct RootRow {
    root: usize,
    #[serde(with = "horocone::rational::serde_q")]
    k_alpha: Q,
    /// Coefficient of rho'_F on the fundamental weight, when defined.
    rho_prime: Option<String>,
}

fn rootsys(d: &RootDatum, f: &ParabolicIndex) -> Result<RootsysOut, Failure> {
    f.check(d.rank)?;
    let rho = rho_prime(d, f)?;
    let k = (0..d.rank).map(|a| k_alpha(d, a)).collect::<Result<Vec<_>, _>>()?;
    let table = (0..d.rank)
        .map(|a| RootRow {
            root: a + 1,
            k_alpha: k[a].clone(),
            rho_prime: rho.fw_coords.as_ref().map(|c| c[a].to_string()),
        })
        .collect();
    let cone_section = if d.rank == 2 { Some(cone_section(d)) } else { None };
    Ok(RootsysOut { datum: d.clone(), parabolic: f.clone(), rho_prime: rho, k_alpha: k, table, cone_section })
}

/// The positive Weyl chamber and its dual cone, drawn in an orthonormal
/// basis of the plane spanned by the simple roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSection {
    /// Orthonormal basis of the root plane in ambient coordinates.
    pub plane: [Vec<f64>; 2],
    /// Fundamental weights lambda_1, lambda_2.
    pub chamber: [[f64; 2]; 2],
    /// Simple coroots, spanning the dual cone.
    pub dual_cone: [[f64; 2]; 2],
    /// Row i holds lambda_i in the coroot basis.
    pub chamber_in_dual: [[f64; 2]; 2],
    pub strict_containment: bool,
}

fn cone_section(d: &RootDatum) -> ConeSection {
    let (a1, a2) = (&d.simple_roots[0], &d.simple_roots[1]);
    let g11 = to_f64(&d.inner(a1, a1));
    let g12 = to_f64(&d.inner(a1, a2));
    let n2 = (to_f64(&d.inner(a2, a2)) - g12 * g12 / g11).sqrt();
    let n1 = g11.sqrt();
    let project = |v: &[Q]| -> [f64; 2] {
        let p = to_f64(&d.inner(v, a1));
        let q = to_f64(&d.inner(v, a2));
        [p / n1, (q - g12 * p / g11) / n2]
    };
    let e1: Vec<f64> = a1.iter().map(|x| to_f64(x) / n1).collect();
    let e2: Vec<f64> = a1.iter().zip(a2).map(|(x, y)| (to_f64(y) - g12 / g11 * to_f64(x)) / n2).collect();
    let chamber = [project(&d.fundamental_weight(0).coords), project(&d.fundamental_weight(1).coords)];
    let dual_cone = [project(&d.coroot(0)), project(&d.coroot(1))];
    let [u, v] = dual_cone;
    let det = u[0] * v[1] - u[1] * v[0];
    let coeffs = chamber.map(|w| [(w[0] * v[1] - w[1] * v[0]) / det, (u[0] * w[1] - u[1] * w[0]) / det]);
    let strict = coeffs.iter().flatten().all(|&c| c > 1e-12);
    ConeSection { plane: [e1, e2], chamber, dual_cone, chamber_in_dual: coeffs, strict_containment: strict }
}

#[derive(Serialize)]
struct PairingRow {
    root: usize,
    #[serde(with = "opt_q")]
    weight_pairing: Option<Q>,
    #[serde(with = "opt_q")]
    root_pairing: Option<Q>,
}

mod opt_q {
    use horocone::Q;

    pub fn serialize<S: serde::Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    verdict: RegimeVerdict,
    pairings: Vec<PairingRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_cont: Option<AbsContChecklist>,
}

#[derive(Serialize)]
struct GmRow {
    m: i64,
    x: f64,
    method: &'static str,
    exact: f64,
    ln_exact: f64,
    asymptote: f64,
    ln_asymptote: f64,
    ratio: f64,
}

/// ln Gamma(k/2 + 1) for k >= -1, by the recursion from Gamma(1) or Gamma(1/2).
fn ln_gamma_half(k: i64) -> f64 {
    let (mut acc, mut s) = if k % 2 == 0 { (0.0, 1.0) } else { (0.5 * std::f64::consts::PI.ln(), 0.5) };
    let top = k as f64 / 2.0 + 1.0;
    while s < top - 0.25 {
        acc += s.ln();
        s += 1.0;
    }
    acc
}

fn gm_row(m: i64, x: f64) -> Result<GmRow, Failure> {
    let exact = g_m(m, x)?;
    let ln_exact = ln_g_m(m, x)?;
    // g_m(x) ~ 2^{m/2} Gamma(m/2 + 1) x^{-m/2-1} e^x
    let half = m as f64 / 2.0;
    let ln_asymptote = x + half * 2f64.ln() + ln_gamma_half(m) - (half + 1.0) * x.ln();
    Ok(GmRow {
        m,
        x,
        method: if x < series_cutoff(m) { "series" } else { "recursion" },
        exact,
        ln_exact,
        asymptote: ln_asymptote.exp(),
        ln_asymptote,
        ratio: (ln_exact - ln_asymptote).exp(),
    })
}

#[derive(Serialize)]
struct CountOut {
    series: CountSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponents: Option<horocone::countlab::CountingExponents>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

#[derive(Serialize)]
struct HoroPoint {
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "N")]
    n: u64,
    normalized: f64,
}

#[derive(Serialize)]
struct HoroOut {
    points: Vec<HoroPoint>,
    limit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<horocone::countlab::GrowthFit>,
}

fn horocycles(rs: &[f64]) -> Result<HoroOut, Failure> {
    let mut points = Vec::with_capacity(rs.len());
    for &r in rs {
        // A one-point series reuses the normalization of the library.
        let s = horocycle_series(r, r, 1.0)?;
        points.push(HoroPoint { r, n: s.series.points[0].n, normalized: s.normalized[0] });
    }
    let mut series = CountSeries::new(points.iter().map(|p| (p.r, p.n)).collect());
    attach_fit(&mut series, GrowthModel::Exponential)?;
    Ok(HoroOut { points, limit: 3.0 / std::f64::consts::PI, fit: series.fit })
}

#[derive(Serialize)]
struct XiOut {
    #[serde(flatten)]
    report: XiReport,
    total: f64,
}

fn raw_table(samples: &[LatticeSample], stat: Sl3Stat, r: f64) -> Result<Table, Failure> {
    let mut columns = vec!["index".to_string(), "lambda1".to_string()];
    if stat == Sl3Stat::Siegel {
        columns.push("count".into());
    }
    let mut rows = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let mut row = vec![i.to_string(), s.lambda1.to_string()];
        if stat == Sl3Stat::Siegel {
            row.push(s.count_in_ball(r)?.to_string());
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

#[derive(Serialize)]
struct RayRow {
    theta: [i64; 3],
    verdict: VerdictKind,
    outcome: EmpiricalOutcome,
    escape_fraction: f64,
    mean_lambda1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    siegel: Option<horocone::equisim::SiegelStatistic>,
    concordant: bool,
}

#[derive(Serialize)]
struct ConcordanceOut {
    rays: Vec<RayRow>,
    all_concordant: bool,
}

/// Random rational rays (a, b, -a-b) with |a|, |b| <= 3, classified exactly
/// and probed by simulation.
fn concordance(
    count: usize,
    settings: &horocone::equisim::ProbeSettings,
    seed: u64,
) -> Result<ConcordanceOut, Failure> {
    if count == 0 {
        return Err(Failure::validation("need at least one ray"));
    }
    let d = datum("A2")?;
    let mut rng = block_rng(seed, 0);
    let mut rays = Vec::with_capacity(count);
    while rays.len() < count {
        let (a, b) = (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
        if a == 0 && b == 0 {
            continue;
        }
        let theta = [a, b, -a - b];
        let th = CochVec::new(theta.iter().map(|&x| Q::from_integer(x.into())).collect());
        let verdict = classify_ray(&d, &ParabolicIndex::empty(), &th)?.verdict;
        let probe = probe_ray(&th, settings, seed.wrapping_add(1 + rays.len() as u64))?;
        rays.push(RayRow {
            theta,
            concordant: concordant(&verdict, probe.outcome),
            verdict,
            outcome: probe.outcome,
            escape_fraction: probe.escape_fraction,
            mean_lambda1: probe.mean_lambda1,
            siegel: probe.siegel,
        });
    }
    let all_concordant = rays.iter().all(|r| r.concordant);
    Ok(ConcordanceOut { rays, all_concordant })
}

/// Reads a (T, N) series from CSV. The abscissa column may be named T or R.
pub fn read_series_csv(text: &str) -> Result<Vec<horocone::countlab::SeriesPoint>, Failure> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let find = |names: &[&str]| headers.iter().position(|h| names.contains(&h.trim()));
    let (Some(ti), Some(ni)) = (find(&["T", "R"]), find(&["N"])) else {
        return Err(Failure::validation("series CSV needs a T (or R) column and an N column"));
    };
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("").trim().to_string();
        let t: f64 = field(ti).parse().map_err(|_| Failure::validation(format!("bad abscissa {:?}", field(ti))))?;
        let n: u64 = field(ni).parse().map_err(|_| Failure::validation(format!("bad count {:?}", field(ni))))?;
        points.push(horocone::countlab::SeriesPoint { t, n });
    }
    if points.is_empty() {
        return Err(Failure::validation("series CSV has no rows"));
    }
    Ok(points)
}

/// Grid used when only an upper end is given.
pub fn dyadic_or_single(min: f64, max: f64, dyadic: bool) -> Grid {
    if dyadic {
        Grid::Dyadic { min, max }
    } else {
        Grid::List { values: vec![max] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_gamma() {
        let pi = std::f64::consts::PI;
        for (k, want) in [(-1, pi.sqrt()), (0, 1.0), (1, pi.sqrt() / 2.0), (2, 1.0), (3, 0.75 * pi.sqrt()), (6, 6.0)] {
            assert!((ln_gamma_half(k) - f64::ln(want)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn gm_asymptote_is_approached() {
        for m in [-1, 0, 1, 4] {
            let near = gm_row(m, 50.0).unwrap().ratio;
            let far = gm_row(m, 2000.0).unwrap().ratio;
            assert!((far - 1.0).abs() <= (near - 1.0).abs() && (far - 1.0).abs() < 0.01, "m={m}: {near} {far}");
        }
    }

    #[test]
    fn dual_cone_contains_chamber_in_rank_two() {
        for t in ["A2", "B2", "G2"] {
            let cs = cone_section(&datum(t).unwrap());
            assert!(cs.strict_containment, "{t}: {:?}", cs.chamber_in_dual);
            let dot: f64 = cs.plane[0].iter().zip(&cs.plane[1]).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-12);
        }
    }

    #[test]
    fn series_csv_parsing() {
        let pts = read_series_csv("R,N,normalized\n1.5,3,0.1\n2,7,0.2\n").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!((pts[1].t, pts[1].n), (2.0, 7));
        assert!(read_series_csv("x,y\n1,2\n").is_err());
        assert!(read_series_csv("T,N\n1,-2\n").is_err());
        assert!(read_series_csv("T,N\n").is_err());
    }
}
