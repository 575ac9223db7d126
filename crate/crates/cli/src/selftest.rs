use std::time::Instant;

use hoytlab::fading::{
    squared_hoyt_cdf, squared_hoyt_mgf, squared_hoyt_pdf, CdfForm, MgfForm, PdfForm,
};
use hoytlab::metrics::{
    capacity_loss_mu, capacity_lower_bound, capacity_ora_hoyt, capacity_ora_rayleigh,
    outage_bounds, outage_probability, outage_with_interference, prob_positive_secrecy,
    secrecy_closed_form_bob_rayleigh, secrecy_outage, OutageForm, OutageScenario, SecrecyForm,
    SecrecyScenario,
};
use hoytlab::montecarlo::{estimate_metric, McMetric};
use hoytlab::quadrature::adaptive;
use hoytlab::special::{bessel_i0, exp_integral_e1, marcum_q1, rice_ie, IeRepresentation};
use hoytlab::{
    from_db, EtaMuFormat, EtaMuModel, HoytChannel, InterferenceSet, Interferer, KappaMuModel,
    QuadratureSpec,
};

use crate::args::Level;

type Outcome = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    run: Box<dyn Fn() -> Outcome>,
}

fn check(name: &'static str, f: impl Fn() -> Outcome + 'static) -> Check {
    Check {
        name,
        run: Box::new(f),
    }
}

fn e(err: hoytlab::Error) -> String {
    err.to_string()
}

fn ch(g: f64, q: f64) -> Result<HoytChannel, String> {
    HoytChannel::new(g, q).map_err(e)
}

/// Fails with a description of the worst point when `|a − b| > tol·max(1, |b|)`.
struct Worst {
    what: &'static str,
    tol: f64,
    worst: f64,
    at: String,
}

impl Worst {
    fn new(what: &'static str, tol: f64) -> Self {
        Self {
            what,
            tol,
            worst: 0.0,
            at: String::new(),
        }
    }

    fn add(&mut self, a: f64, b: f64, at: impl FnOnce() -> String) {
        let d = (a - b).abs() / b.abs().max(1.0);
        if !(d <= self.worst) {
            self.worst = d;
            self.at = format!("{} ({a} vs {b})", at());
        }
    }

    fn finish(self) -> Outcome {
        if self.worst <= self.tol {
            Ok(format!(
                "max {} {:.2e} <= {:.0e}",
                self.what, self.worst, self.tol
            ))
        } else {
            Err(format!(
                "{} {:.3e} exceeds {:.0e} at {}",
                self.what, self.worst, self.tol, self.at
            ))
        }
    }
}

fn special_values() -> Outcome {
    let mut w = Worst::new("error", 1e-12);
    w.add(bessel_i0(1.0).map_err(e)?, 1.266_065_877_752_008_4, || {
        "I0(1)".into()
    });
    w.add(
        exp_integral_e1(1.0).map_err(e)?,
        0.219_383_934_395_520_27,
        || "E1(1)".into(),
    );
    w.add(
        marcum_q1(1.0, 1.0).map_err(e)?,
        0.732_879_803_796_820_2,
        || "Q1(1,1)".into(),
    );
    w.add(marcum_q1(0.0, 2.0).map_err(e)?, (-2.0f64).exp(), || {
        "Q1(0,2)".into()
    });
    w.finish()
}

fn ie_grid() -> Outcome {
    let ks = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99];
    let xs = [0.01, 0.1, 1.0, 10.0, 100.0];
    let mut worst = 0.0f64;
    let mut max_rel = 0.0f64;
    let mut at = String::new();
    for k in ks {
        for x in xs {
            let v: Vec<f64> = IeRepresentation::ALL
                .iter()
                .map(|&r| rice_ie(k, x, r))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    let d = (v[i] - v[j]).abs();
                    if d <= 1e-12 {
                        max_rel = max_rel.max(d / v[j].abs().max(f64::MIN_POSITIVE));
                        continue;
                    }
                    let rel = d / v[j].abs();
                    max_rel = max_rel.max(rel);
                    if rel > worst {
                        worst = rel;
                        at = format!(
                            "k={k}, x={x}: {} vs {}",
                            IeRepresentation::ALL[i],
                            IeRepresentation::ALL[j]
                        );
                    }
                }
            }
        }
    }
    if worst <= 1e-8 {
        Ok(format!("max pairwise relative difference {max_rel:.2e}"))
    } else {
        Err(format!("pairwise difference {worst:.3e} > 1e-8 at {at}"))
    }
}

fn mgf_identity(quad: QuadratureSpec) -> Outcome {
    let mut w = Worst::new("relative difference", 1e-8);
    for q in [0.05, 0.1, 0.3, 0.5, 0.8, 1.0] {
        for g in [0.5, 1.0, 10.0] {
            let c = ch(g, q)?;
            for s in [-10.0, -1.0, -0.1, 0.0] {
                let a = squared_hoyt_mgf(s, &c, MgfForm::Integral, &quad).map_err(e)?;
                let b = squared_hoyt_mgf(s, &c, MgfForm::Closed, &quad).map_err(e)?;
                w.add(a / b, 1.0, || format!("q={q}, gamma_bar={g}, s={s}"));
            }
        }
    }
    w.finish()
}

fn cdf_forms(quad: QuadratureSpec) -> Outcome {
    let mut w = Worst::new("difference", 1e-7);
    for q in [0.1, 0.3, 0.5, 0.8] {
        let c = ch(1.0, q)?;
        for x in [0.01, 0.1, 1.0, 5.0] {
            let t = squared_hoyt_cdf(x, &c, CdfForm::Transform, &quad).map_err(e)?;
            let m = squared_hoyt_cdf(x, &c, CdfForm::MarcumDiff, &quad).map_err(e)?;
            let pdf = |y: f64| squared_hoyt_pdf(y, &c, PdfForm::Bessel, &quad).unwrap_or(f64::NAN);
            let direct = adaptive(pdf, 0.0, x, 1e-13, 1e-12).map_err(e)?;
            w.add(t, m, || format!("q={q}, x={x}, transform vs Marcum"));
            w.add(t, direct, || {
                format!("q={q}, x={x}, transform vs pdf quadrature")
            });
        }
    }
    w.finish()
}

fn capacity_constants(quad: QuadratureSpec) -> Outcome {
    let mut w = Worst::new("deviation", 5e-4);
    w.add(capacity_loss_mu(0.0).map_err(e)?, 1.8327, || "mu(0)".into());
    w.add(capacity_loss_mu(1.0).map_err(e)?, 0.8327, || "mu(1)".into());
    let mut a = Worst::new("asymptote gap at 40 dB", 0.01);
    for q in [0.3, 0.5, 1.0] {
        let c = ch(from_db(40.0), q)?;
        let exact = capacity_ora_hoyt(&c, &quad).map_err(e)?;
        let asym = hoytlab::metrics::capacity_high_snr_asymptote(&c).map_err(e)?;
        a.add(exact - asym, 0.0, || format!("q={q}"));
    }
    let r = w.finish()?;
    Ok(format!("{r}; {}", a.finish()?))
}

fn capacity_sandwich(quad: QuadratureSpec) -> Outcome {
    let mut n = 0;
    for q in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
        for g in [0.1, 1.0, 10.0, 100.0] {
            let c = ch(g, q)?;
            let v = capacity_ora_hoyt(&c, &quad).map_err(e)?;
            let lo = capacity_lower_bound(&c).map_err(e)?;
            let hi = capacity_ora_rayleigh(g).map_err(e)?;
            if !(lo <= v * (1.0 + 1e-12) && v <= hi * (1.0 + 1e-12)) {
                return Err(format!(
                    "q={q}, gamma_bar={g}: {lo} <= {v} <= {hi} violated"
                ));
            }
            if q == 1.0 && ((v - lo).abs() > 1e-9 || (v - hi).abs() > 1e-9) {
                return Err(format!("gamma_bar={g}: bounds not tight at q=1"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} points"))
}

/// Outage brackets where the Rayleigh outage is convex over every conditioned
/// mean, i.e. `2q²γ̄/(1+q²) ≥ γ_o/2`.
fn outage_sandwich(quad: QuadratureSpec) -> Outcome {
    let g0 = 1.0;
    let mut n = 0;
    for q in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        for g in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            let c = ch(g, q)?;
            if c.min_conditioned_mean() < g0 / 2.0 {
                continue;
            }
            let sc = OutageScenario::noise_limited(c, g0).map_err(e)?;
            let p = outage_probability(&sc, &quad, OutageForm::Transform).map_err(e)?;
            let b = outage_bounds(&c, g0).map_err(e)?;
            if !b.contains(p, 1e-12) {
                return Err(format!(
                    "q={q}, gamma_bar={g}: {p} outside [{}, {}]",
                    b.lower, b.upper
                ));
            }
            n += 1;
        }
    }
    Ok(format!("{n} points in the convex region"))
}

fn secrecy_reductions(quad: QuadratureSpec) -> Outcome {
    let mut w = Worst::new("difference", 1e-9);
    for (gb, ge, r) in [(10.0, 10.0, 0.1), (3.0, 30.0, 0.5), (100.0, 1.0, 1.0)] {
        let sc = SecrecyScenario::new(ch(gb, 1.0)?, ch(ge, 1.0)?, r).map_err(e)?;
        let f = 2f64.powf(r);
        let out = 1.0 - gb / (gb + f * ge) * (-(f - 1.0) / gb).exp();
        let pos = gb / (gb + ge);
        w.add(
            secrecy_outage(&sc, &quad, SecrecyForm::DoubleIntegral).map_err(e)?,
            out,
            || format!("Rayleigh outage gb={gb}, ge={ge}"),
        );
        w.add(prob_positive_secrecy(&sc, &quad).map_err(e)?, pos, || {
            format!("Rayleigh P(C>0) gb={gb}, ge={ge}")
        });
    }
    for qe in [0.1, 0.5] {
        let sc = SecrecyScenario::new(ch(10.0, 1.0)?, ch(5.0, qe)?, 0.2).map_err(e)?;
        let (out, _) = secrecy_closed_form_bob_rayleigh(&sc).map_err(e)?;
        w.add(
            secrecy_outage(&sc, &quad, SecrecyForm::DoubleIntegral).map_err(e)?,
            out,
            || format!("Rayleigh Bob, q_e={qe}"),
        );
    }
    let mut forms = Worst::new("single vs double", 1e-7);
    for qb in [0.2, 0.5, 0.9] {
        for qe in [0.1, 0.5, 1.0] {
            for (gb, r) in [(1.0, 0.1), (30.0, 1.0)] {
                let sc = SecrecyScenario::new(ch(gb, qb)?, ch(10.0, qe)?, r).map_err(e)?;
                let s = secrecy_outage(&sc, &quad, SecrecyForm::SingleIntegral).map_err(e)?;
                let d = secrecy_outage(&sc, &quad, SecrecyForm::DoubleIntegral).map_err(e)?;
                forms.add(s, d, || format!("q_b={qb}, q_e={qe}, gb={gb}"));
            }
        }
    }
    let r = w.finish()?;
    Ok(format!("{r}; {}", forms.finish()?))
}

fn monotonicity(quad: QuadratureSpec) -> Outcome {
    let qs = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
    for g in [0.5, 5.0, 50.0] {
        let mut prev_c = f64::NEG_INFINITY;
        let mut prev_p = f64::INFINITY;
        for q in qs {
            let c = ch(g, q)?;
            let cap = capacity_ora_hoyt(&c, &quad).map_err(e)?;
            let p = outage_probability(
                &OutageScenario::noise_limited(c, 1.0).map_err(e)?,
                &quad,
                OutageForm::Transform,
            )
            .map_err(e)?;
            if cap < prev_c - 1e-12 {
                return Err(format!("capacity decreases in q at gamma_bar={g}, q={q}"));
            }
            if g >= 1.0 && p > prev_p + 1e-12 {
                return Err(format!("outage increases in q at gamma_bar={g}, q={q}"));
            }
            prev_c = cap;
            prev_p = p;
        }
    }
    Ok("capacity nondecreasing and outage nonincreasing in q".into())
}

fn mc_pair(metric: McMetric, analytic: f64, n: u64, seed: u64) -> Outcome {
    let est = estimate_metric(&metric, n, seed).map_err(e)?;
    let z = est.z_score(analytic);
    if est.agrees_with(analytic, 3.0) {
        Ok(format!(
            "analytic {analytic:.6}, MC {:.6} ± {:.1e}, z = {z:.2}",
            est.value, est.std_error
        ))
    } else {
        Err(format!(
            "analytic {analytic}, MC {} ± {}, |z| = {:.2} > 3",
            est.value,
            est.std_error,
            z.abs()
        ))
    }
}

fn fig6_interferers() -> Result<[Interferer; 2], String> {
    let inr = from_db(5.0);
    Ok([
        Interferer::EtaMu(EtaMuModel::new(EtaMuFormat::Two, 0.04, 0.5, inr).map_err(e)?),
        Interferer::KappaMu(KappaMuModel::new(2.0, 1.5, inr).map_err(e)?),
    ])
}

fn mc_checks(quad: QuadratureSpec, n: u64, seed: u64) -> Vec<Check> {
    let mut v = Vec::new();
    for (i, q) in [0.3, 1.0].into_iter().enumerate() {
        v.push(check(
            if i == 0 {
                "mc: outage q=0.3"
            } else {
                "mc: outage q=1"
            },
            move || {
                let c = ch(10.0, q)?;
                let p = outage_probability(
                    &OutageScenario::noise_limited(c, 1.0).map_err(e)?,
                    &quad,
                    OutageForm::Transform,
                )
                .map_err(e)?;
                mc_pair(
                    McMetric::Outage {
                        channel: c,
                        threshold: 1.0,
                    },
                    p,
                    n,
                    seed + i as u64,
                )
            },
        ));
    }
    v.push(check("mc: capacity q=0.5", move || {
        let c = ch(10.0, 0.5)?;
        mc_pair(
            McMetric::CapacityOra { channel: c },
            capacity_ora_hoyt(&c, &quad).map_err(e)?,
            n,
            seed + 10,
        )
    }));
    let secrecy = || SecrecyScenario::new(ch(10.0, 0.5)?, ch(10.0, 0.3)?, 0.1).map_err(e);
    v.push(check("mc: secrecy outage q_b=0.5 q_e=0.3", move || {
        let sc = secrecy()?;
        let p = secrecy_outage(&sc, &quad, SecrecyForm::SingleIntegral).map_err(e)?;
        mc_pair(McMetric::SecrecyOutage(sc), p, n, seed + 20)
    }));
    v.push(check("mc: positive secrecy q_b=0.5 q_e=0.3", move || {
        let sc = secrecy()?;
        mc_pair(
            McMetric::ProbPositiveSecrecy(sc),
            prob_positive_secrecy(&sc, &quad).map_err(e)?,
            n,
            seed + 21,
        )
    }));
    for idx in 0..2 {
        let name = if idx == 0 {
            "mc: outage with eta-mu interference and noise"
        } else {
            "mc: outage with kappa-mu interference and noise"
        };
        v.push(check(name, move || {
            let i = fig6_interferers()?[idx];
            let desired = ch(1.0 + i.mean(), 0.5)?;
            let sc = OutageScenario::new(
                desired,
                1.0,
                Some(InterferenceSet::from_interferers(&[i])),
                true,
            )
            .map_err(e)?;
            let p = outage_with_interference(&sc, &quad).map_err(e)?;
            let m = McMetric::OpInterference {
                desired,
                threshold: 1.0,
                interferers: vec![i],
                include_noise: true,
            };
            mc_pair(m, p, n, seed + 30 + idx as u64)
        }));
    }
    v.push(check("mc: interference-limited outage", move || {
        let is = fig6_interferers()?;
        let desired = ch(10.0 * (is[0].mean() + is[1].mean()), 0.3)?;
        let sc = OutageScenario::new(
            desired,
            1.0,
            Some(InterferenceSet::from_interferers(&is)),
            false,
        )
        .map_err(e)?;
        let p = outage_with_interference(&sc, &quad).map_err(e)?;
        let m = McMetric::OpInterference {
            desired,
            threshold: 1.0,
            interferers: is.to_vec(),
            include_noise: false,
        };
        mc_pair(m, p, n, seed + 40)
    }));
    v
}

/// The checks run at `level`.
pub fn checks(
    level: Level,
    quad: QuadratureSpec,
    samples: u64,
    seed: u64,
    inject_failure: bool,
) -> Vec<Check> {
    let mut v = vec![
        check("special-function reference values", special_values),
        check("Ie representations agree", ie_grid),
        check("MGF integral equals closed form", move || {
            mgf_identity(quad)
        }),
        check("cdf forms agree", move || cdf_forms(quad)),
        check("capacity-loss constants and asymptote", move || {
            capacity_constants(quad)
        }),
        check("capacity sandwich", move || capacity_sandwich(quad)),
        check("outage sandwich", move || outage_sandwich(quad)),
        check("secrecy reductions and forms", move || {
            secrecy_reductions(quad)
        }),
        check("monotonicity in q", move || monotonicity(quad)),
    ];
    if inject_failure {
        v.push(check("injected: cdf forms at zero tolerance", move || {
            let c = ch(1.0, 0.5)?;
            let t = squared_hoyt_cdf(1.0, &c, CdfForm::Transform, &quad).map_err(e)?;
            let m = squared_hoyt_cdf(1.0, &c, CdfForm::MarcumDiff, &quad).map_err(e)?;
            let d = (t - m).abs();
            if d < 0.0 {
                Ok("unreachable".into())
            } else {
                Err(format!(
                    "difference {d:.3e} is not below the tampered tolerance 0"
                ))
            }
        }));
    }
    if level == Level::Full {
        v.extend(mc_checks(quad, samples, seed));
    }
    v
}

/// Runs `checks`, returning the report and whether all passed.
pub fn run(checks: &[Check]) -> (String, bool) {
    let mut report = String::new();
    let mut failed = 0;
    let start = Instant::now();
    for c in checks {
        let t = Instant::now();
        let (tag, detail) = match (c.run)() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        report.push_str(&format!(
            "{tag}  {}: {detail} [{:.2}s]\n",
            c.name,
            t.elapsed().as_secs_f64()
        ));
    }
    report.push_str(&format!(
        "{} checks, {} passed, {failed} failed in {:.2}s\n",
        checks.len(),
        checks.len() - failed,
        start.elapsed().as_secs_f64()
    ));
    (report, failed == 0)
}
