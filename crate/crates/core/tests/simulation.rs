//! Analytic metrics against the Monte Carlo oracle, `|analytic − MC| ≤ 3·SE`.

use hoytlab::fading::{eta_mu_mgf, kappa_mu_mgf};
use hoytlab::metrics::{
    capacity_ora_hoyt, outage_probability, outage_with_interference, prob_positive_secrecy,
    secrecy_outage, OutageForm, OutageScenario, SecrecyForm, SecrecyScenario,
};
use hoytlab::montecarlo::{estimate_mean, estimate_metric, McMetric, PowerSampler};
use hoytlab::{
    from_db, EtaMuFormat, EtaMuModel, HoytChannel, InterferenceSet, Interferer, KappaMuModel,
    McEstimate, QuadratureSpec,
};

const N: u64 = 2_000_000;

fn check(label: &str, est: McEstimate, analytic: f64) {
    assert!(
        est.agrees_with(analytic, 3.0),
        "{label}: analytic {analytic}, MC {} ± {} (z = {:.2})",
        est.value,
        est.std_error,
        est.z_score(analytic)
    );
}

fn ch(g: f64, q: f64) -> HoytChannel {
    HoytChannel::new(g, q).unwrap()
}

#[test]
fn outage_noise_limited() {
    let quad = QuadratureSpec::default();
    for (q, seed) in [(0.3, 11), (1.0, 12), (0.0, 13)] {
        let c = ch(10.0, q);
        let sc = OutageScenario::noise_limited(c, 1.0).unwrap();
        let p = outage_probability(&sc, &quad, OutageForm::Transform).unwrap();
        let mc = estimate_metric(
            &McMetric::Outage {
                channel: c,
                threshold: 1.0,
            },
            N,
            seed,
        )
        .unwrap();
        check("outage", mc, p);
    }
}

#[test]
fn capacity() {
    let quad = QuadratureSpec::default();
    let c = ch(10.0, 0.5);
    let mc = estimate_metric(&McMetric::CapacityOra { channel: c }, N, 21).unwrap();
    check("capacity", mc, capacity_ora_hoyt(&c, &quad).unwrap());
}

#[test]
fn secrecy() {
    let quad = QuadratureSpec::default();
    let sc = SecrecyScenario::new(ch(10.0, 0.5), ch(10.0, 0.3), 0.1).unwrap();
    let single = secrecy_outage(&sc, &quad, SecrecyForm::SingleIntegral).unwrap();
    let double = secrecy_outage(&sc, &quad, SecrecyForm::DoubleIntegral).unwrap();
    assert!((single - double).abs() < 1e-7);
    check(
        "secrecy outage",
        estimate_metric(&McMetric::SecrecyOutage(sc), N, 31).unwrap(),
        single,
    );
    check(
        "positive secrecy",
        estimate_metric(&McMetric::ProbPositiveSecrecy(sc), N, 32).unwrap(),
        prob_positive_secrecy(&sc, &quad).unwrap(),
    );
}

fn interferers() -> [Interferer; 2] {
    let inr = from_db(5.0);
    [
        Interferer::EtaMu(EtaMuModel::new(EtaMuFormat::Two, 0.04, 0.5, inr).unwrap()),
        Interferer::KappaMu(KappaMuModel::new(2.0, 1.5, inr).unwrap()),
    ]
}

#[test]
fn outage_with_noise_and_interference() {
    let quad = QuadratureSpec::default();
    let desired = ch(from_db(5.0) * (1.0 + from_db(5.0)), 0.5);
    for (i, seed) in interferers().into_iter().zip([41, 42]) {
        let set = InterferenceSet::from_interferers(&[i]);
        let sc = OutageScenario::new(desired, 1.0, Some(set), true).unwrap();
        let p = outage_with_interference(&sc, &quad).unwrap();
        let m = McMetric::OpInterference {
            desired,
            threshold: 1.0,
            interferers: vec![i],
            include_noise: true,
        };
        check("op with noise", estimate_metric(&m, N, seed).unwrap(), p);
    }
}

#[test]
fn outage_interference_limited() {
    let quad = QuadratureSpec::default();
    let all = interferers();
    let desired = ch(10.0 * (all[0].mean() + all[1].mean()), 0.3);
    let sc = OutageScenario::new(
        desired,
        1.0,
        Some(InterferenceSet::from_interferers(&all)),
        false,
    )
    .unwrap();
    let m = McMetric::OpInterference {
        desired,
        threshold: 1.0,
        interferers: all.to_vec(),
        include_noise: false,
    };
    check(
        "op without noise",
        estimate_metric(&m, N, 51).unwrap(),
        outage_with_interference(&sc, &quad).unwrap(),
    );
}

#[test]
fn generalized_models_match_their_mgfs() {
    let e = EtaMuModel::new(EtaMuFormat::Two, 0.04, 0.5, 1.0).unwrap();
    let k = KappaMuModel::new(2.0, 1.5, 1.0).unwrap();
    let se = PowerSampler::eta_mu(&e).unwrap();
    let sk = PowerSampler::kappa_mu(&k).unwrap();
    check(
        "eta-mu mgf",
        estimate_mean(N, 61, |r| (-se.draw(r)).exp()).unwrap(),
        eta_mu_mgf(-1.0, &e).unwrap(),
    );
    check(
        "eta-mu mean",
        estimate_mean(N, 62, |r| se.draw(r)).unwrap(),
        1.0,
    );
    check(
        "kappa-mu mgf",
        estimate_mean(N, 63, |r| (-0.5 * sk.draw(r)).exp()).unwrap(),
        kappa_mu_mgf(-0.5, &k).unwrap(),
    );
    check(
        "kappa-mu mean",
        estimate_mean(N, 64, |r| sk.draw(r)).unwrap(),
        1.0,
    );
}

#[test]
fn standard_error_scales_as_inverse_root_n() {
    let m = McMetric::Outage {
        channel: ch(5.0, 0.6),
        threshold: 1.0,
    };
    let small = estimate_metric(&m, 20_000, 71).unwrap();
    let large = estimate_metric(&m, 2_000_000, 71).unwrap();
    let ratio = small.std_error / large.std_error;
    assert!((ratio / 10.0 - 1.0).abs() < 0.2, "{ratio}");
}
