//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};

use horocone::asymptotics::quad::adaptive_simpson;
use horocone::asymptotics::{ball_exponential_integral, bessel_i1, g_m};
use horocone::countlab::{
    count_flags_sl3, count_flags_sl3_with, count_horocycle_lifts, count_projective, count_projective_mobius,
    counting_exponents, dyadic_grid, fit_growth, horocycle_series, xi_tail_check, CountSeries, FlagOrder,
    GrowthModel, LineBundleChar, XiStatus,
};
use horocone::equisim::{
    cusp_report, escape_fraction, probe_ray, sample_translate_lattices_sl3, siegel_statistic, concordant,
    ProbeSettings,
};
use horocone::rational::{q, qvec, to_f64};
use horocone::regimes::{classify_ray, VerdictKind};
use horocone::rootsys::{datum, pair, rho_prime, split_datum, CartanType, CochVec, ParabolicIndex};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn theta(v: &[i64]) -> CochVec {
    CochVec::new(qvec(v))
}

fn c1_pairing_table() -> Check {
    let d = datum("A4").map_err(err)?;
    let th = theta(&[6, 7, -12, 9, -10]);
    let pairings: Vec<_> = (0..4).map(|a| pair(&d, &d.fundamental_weight(a), &th)).collect::<Result<_, _>>().map_err(err)?;
    ensure(pairings == qvec(&[6, 13, 1, 10]), format!("pairings {pairings:?}"))?;
    let v = classify_ray(&d, &ParabolicIndex::empty(), &th).map_err(err)?;
    ensure(v.verdict == VerdictKind::Haar, format!("verdict {:?}", v.verdict))?;
    Ok("pairings (6, 13, 1, 10), verdict Haar".into())
}

fn c2_sl3_rules() -> Check {
    let d = datum("A2").map_err(err)?;
    let e = ParabolicIndex::empty();
    for a in 0..2 {
        let th = CochVec::new(d.coroot(a));
        let v = classify_ray(&d, &e, &th).map_err(err)?;
        let want = VerdictKind::ConvergesTo([a].into_iter().collect());
        ensure(v.verdict == want, format!("coroot {}: {:?}", a + 1, v.verdict))?;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 200 {
        let th = [rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20)];
        let th = theta(&th);
        if pair(&d, &d.fundamental_weight(0), &th).map_err(err)? >= q(0) {
            continue;
        }
        let v = classify_ray(&d, &e, &th).map_err(err)?;
        ensure(v.verdict == VerdictKind::Diverges, format!("{th:?}: {:?}", v.verdict))?;
        checked += 1;
    }
    Ok("coroot rays converge to Q_{a_i}; 200 rays with (l1, theta) < 0 diverge".into())
}

fn c3_rho_positivity() -> Check {
    let mut subsets = 0;
    for t in CartanType::small_types() {
        let d = split_datum(t);
        for f in ParabolicIndex::all(d.rank) {
            let rho = rho_prime(&d, &f).map_err(err)?;
            let fw = rho.fw_coords.ok_or("missing coordinates")?;
            for a in 0..d.rank {
                let c = &fw[a];
                if f.contains(a) {
                    ensure(*c == q(0), format!("{t} F={f:?}: coefficient {a} is {c} on F"))?;
                } else {
                    ensure(c.is_integer() && *c > q(0), format!("{t} F={f:?}: coefficient {a} is {c}"))?;
                }
            }
            if f.is_empty() {
                ensure(fw.iter().all(|c| *c == q(2)), format!("{t}: rho = {fw:?}"))?;
            }
            subsets += 1;
        }
    }
    Ok(format!("{subsets} parabolic subsets over 8 types"))
}

fn c4_gm_suite() -> Check {
    let xs: Vec<f64> = (1..=60).map(|i| 0.5 * i as f64).collect();
    let mut worst_res = 0f64;
    let mut worst_quad = 0f64;
    let mut worst_g1 = 0f64;
    for &x in &xs {
        for m in -1..=10i64 {
            let g = g_m(m, x).map_err(err)?;
            // s = sin(phi): int cos^{m+1}(phi) e^{x sin phi} dphi, scaled by e^{-x}.
            let quad = adaptive_simpson(
                |p: f64| p.cos().powi((m + 1) as i32) * (x * (p.sin() - 1.0)).exp(),
                -PI / 2.0,
                PI / 2.0,
                1e-13,
            ) * x.exp();
            worst_quad = worst_quad.max(((g - quad) / quad).abs());
            if m >= 3 {
                let mf = m as f64;
                let lhs = x * x * g;
                let rhs = -mf * (mf - 1.0) * g_m(m - 2, x).map_err(err)? + mf * (mf - 2.0) * g_m(m - 4, x).map_err(err)?;
                worst_res = worst_res.max(((lhs - rhs) / lhs).abs());
            }
        }
        let g1 = g_m(1, x).map_err(err)?;
        let want = PI / x * bessel_i1(x);
        worst_g1 = worst_g1.max(((g1 - want) / want).abs());
    }
    ensure(worst_res < 1e-8, format!("recursion residual {worst_res:e}"))?;
    ensure(worst_quad < 1e-9, format!("quadrature deviation {worst_quad:e}"))?;
    ensure(worst_g1 < 1e-9, format!("g1 vs pi I1 / x deviation {worst_g1:e}"))?;
    Ok(format!("residual {worst_res:.1e}, quadrature {worst_quad:.1e}, g1 {worst_g1:.1e}"))
}

fn c5_ball_asymptotics() -> Check {
    let mut min_far = f64::INFINITY;
    for n in [2usize, 3, 5] {
        for norm in [1.0, 3.0] {
            let mut v0 = vec![0.0; n];
            v0[0] = norm * 0.6;
            v0[1] = norm * 0.8;
            let mut prev = 0.0;
            for i in 1..=400 {
                let r = 0.5 * i as f64;
                let b = ball_exponential_integral(&v0, n, r).map_err(err)?;
                ensure(b.ratio.is_finite() && b.ratio > prev, format!("n={n} |v0|={norm}: ratio not increasing at R={r}"))?;
                ensure(b.ratio < 1.0, format!("n={n} |v0|={norm}: ratio {} above 1 at R={r}", b.ratio))?;
                if norm * r >= 100.0 {
                    min_far = min_far.min(b.ratio);
                    ensure(b.ratio > 0.95, format!("n={n} |v0|={norm} R={r}: ratio {}", b.ratio))?;
                }
                prev = b.ratio;
            }
        }
    }
    Ok(format!("ratios increase to 1; min ratio past |v0|R = 100 is {min_far:.4}"))
}

fn fit_series(ts: &[f64], f: impl Fn(f64) -> Result<u64, String>) -> Result<CountSeries, String> {
    let pts = ts.iter().map(|&t| Ok((t, f(t)?))).collect::<Result<Vec<_>, String>>()?;
    Ok(CountSeries::new(pts))
}

fn c6_projective() -> Check {
    let mut report = Vec::new();
    for (n, lo, hi, want, tol) in [(2usize, 6, 12, 2.0, 0.05), (3, 3, 9, 3.0, 0.1)] {
        let ts = dyadic_grid(lo, hi);
        let s = fit_series(&ts, |t| {
            let a = count_projective(n, t).map_err(err)?;
            let b = count_projective_mobius(n, t).map_err(err)?;
            if a != b {
                return Err(format!("P^{}: strategies disagree at T={t}: {a} vs {b}", n - 1));
            }
            Ok(a)
        })?;
        let fit = fit_growth(&s, GrowthModel::Power).map_err(err)?;
        let a = fit.a.unwrap_or(f64::NAN);
        ensure((a - want).abs() <= tol, format!("P^{}: a = {a:.4}", n - 1))?;
        report.push(format!("P^{}: a = {a:.4}", n - 1));
    }
    Ok(report.join(", ") + "; enumeration strategies agree")
}

fn c7_flags() -> Check {
    let d = datum("A2").map_err(err)?;
    let anti = counting_exponents(&d, &LineBundleChar::new(ParabolicIndex::empty(), vec![2, 2])).map_err(err)?;
    let mixed = counting_exponents(&d, &LineBundleChar::new(ParabolicIndex::empty(), vec![1, 2])).map_err(err)?;
    ensure(anti.a == q(1) && anti.b == 2, format!("anticanonical exponents {anti:?}"))?;
    ensure(mixed.a == q(2) && mixed.b == 1, format!("(1,2) exponents {mixed:?}"))?;

    let mut ts = dyadic_grid(4, 16);
    ts.push(1e5);
    let s = fit_series(&ts, |t| count_flags_sl3(2, 2, t).map_err(err))?;
    let fit = fit_growth(&s, GrowthModel::PowerLog { a: Some(to_f64(&anti.a)) }).map_err(err)?;
    let b = fit.b.unwrap_or(f64::NAN);
    ensure((b - anti.b as f64).abs() <= 0.3, format!("(2,2): b = {b:.3}"))?;

    let ts = dyadic_grid(4, 12);
    let s = fit_series(&ts, |t| count_flags_sl3(1, 2, t).map_err(err))?;
    let power = fit_growth(&s, GrowthModel::Power).map_err(err)?;
    let a = power.a.unwrap_or(f64::NAN);
    ensure((a - to_f64(&mixed.a)).abs() <= 0.1, format!("(1,2): a = {a:.3}"))?;
    let log = fit_growth(&s, GrowthModel::PowerLog { a: Some(to_f64(&mixed.a)) }).map_err(err)?;
    let b12 = log.b.unwrap_or(f64::NAN);
    ensure((b12 - 1.0).abs() <= 0.3, format!("(1,2): log factor detected, b = {b12:.3}"))?;

    for (c1, c2, t) in [(2, 2, 3000.0), (1, 2, 200.0)] {
        let x = count_flags_sl3_with(c1, c2, t, FlagOrder::LineOuter).map_err(err)?;
        let y = count_flags_sl3_with(c1, c2, t, FlagOrder::PlaneOuter).map_err(err)?;
        ensure(x == y, format!("({c1},{c2}) T={t}: loop orders disagree {x} vs {y}"))?;
    }
    Ok(format!("(2,2): b = {b:.3} with a = 1; (1,2): a = {a:.3}, b = {b12:.3}"))
}

fn c8_horocycles() -> Check {
    ensure(count_horocycle_lifts(0.0).map_err(err)? == 2, "N(0) != 2")?;
    let s = horocycle_series(8.0, 14.0, 0.5).map_err(err)?;
    ensure(s.series.is_nondecreasing(), "N(R) not monotone")?;
    let fit = fit_growth(&s.series, GrowthModel::Exponential).map_err(err)?;
    let rate = fit.rate.unwrap_or(f64::NAN);
    ensure((rate - 1.0).abs() <= 0.05, format!("rate {rate:.4}"))?;
    let tail: Vec<f64> =
        s.series.points.iter().zip(&s.normalized).filter(|(p, _)| p.t >= 12.0).map(|(_, &v)| v).collect();
    let (lo, hi) = tail.iter().fold((f64::MAX, 0f64), |(a, b), &v| (a.min(v), b.max(v)));
    let change = (hi - lo) / lo;
    ensure(lo > 0.0 && change < 0.1, format!("N(R)e^-R varies by {change:.3} on [12, 14]"))?;
    Ok(format!("rate {rate:.4}; N(R)e^-R in [{lo:.4}, {hi:.4}] on [12, 14]"))
}

fn c9_equidistribution() -> Check {
    let cusp = cusp_report((-10f64).exp(), 100_000, 2.0).map_err(err)?;
    ensure((cusp.fraction - 0.477).abs() <= 0.01, format!("cusp mass {}", cusp.fraction))?;

    let haar = sample_translate_lattices_sl3(&theta(&[1, 0, -1]), 10.0, 20_000, 42).map_err(err)?;
    let st = siegel_statistic(&haar, 1.337).map_err(err)?;
    ensure(st.relative_deviation().abs() <= 0.03, format!("Siegel mean {} vs {}", st.mean, st.haar_reference))?;

    let div = sample_translate_lattices_sl3(&theta(&[-1, 0, 1]), 10.0, 20_000, 42).map_err(err)?;
    let esc = escape_fraction(&div, 0.1).map_err(err)?;
    ensure(esc >= 0.95, format!("escape fraction {esc}"))?;

    let d = datum("A2").map_err(err)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let settings = ProbeSettings::default();
    let mut kinds = Vec::new();
    let mut rays = 0;
    while rays < 10 {
        let (a, b) = (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
        if a == 0 && b == 0 {
            continue;
        }
        let th = theta(&[a, b, -a - b]);
        let v = classify_ray(&d, &ParabolicIndex::empty(), &th).map_err(err)?;
        let p = probe_ray(&th, &settings, 1000 + rays).map_err(err)?;
        ensure(concordant(&v.verdict, p.outcome), format!("ray {:?}: {:?} vs {:?}", [a, b, -a - b], v.verdict, p.outcome))?;
        kinds.push(format!("{:?}", p.outcome));
        rays += 1;
    }
    Ok(format!(
        "cusp {:.4} (target {:.4}); Siegel {:.3} +- {:.3} vs {:.3}; escape {esc:.3}; concordance {}",
        cusp.fraction,
        cusp.target,
        st.mean,
        st.stderr,
        st.haar_reference,
        kinds.join("/")
    ))
}

fn c10_xi() -> Check {
    let r2 = xi_tail_check(2.0, 1500).map_err(err)?;
    ensure(r2.status == XiStatus::Converges, format!("s=2 status {:?}", r2.status))?;
    ensure((r2.decay_ratio - r2.expected_ratio).abs() < 0.05, format!("s=2 decay ratio {}", r2.decay_ratio))?;
    let tail = r2.tail_after(20);
    ensure(tail < 1e-3, format!("tail past shell 20 is {tail:e}"))?;
    let r1 = xi_tail_check(1.0, 1500).map_err(err)?;
    ensure(r1.status == XiStatus::DivergenceExpected, format!("s=1 status {:?}", r1.status))?;
    Ok(format!("s=2 ratio {:.4}, tail {tail:.2e}; s=1 DivergenceExpected", r2.decay_ratio))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("1 SL5 pairing table", c1_pairing_table, Duration::from_secs(1)),
        ("2 SL3 rules", c2_sl3_rules, Duration::from_secs(1)),
        ("3 rho' positivity", c3_rho_positivity, Duration::from_secs(5)),
        ("4 g_m suite", c4_gm_suite, Duration::from_secs(10)),
        ("5 ball asymptotics", c5_ball_asymptotics, Duration::from_secs(10)),
        ("6 projective counts", c6_projective, Duration::from_secs(120)),
        ("7 flag counts", c7_flags, Duration::from_secs(300)),
        ("8 horocycle lifts", c8_horocycles, Duration::from_secs(120)),
        ("9 equidistribution lab", c9_equidistribution, Duration::from_secs(300)),
        ("10 xi series", c10_xi, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; runtime {took:.2?} over {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
