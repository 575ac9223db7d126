//! End-user link metrics under Hoyt fading: ergodic capacity with optimum
//! rate adaptation, secrecy outage, and outage probability with or without
//! co-channel interference.
//!
//! Every metric is the Hoyt transform of its Rayleigh closed form. Rates are
//! in bits per channel use (bandwidth normalized to one).

use std::f64::consts::LOG2_E;

use crate::error::{domain, Error, Result};
use crate::fading::{squared_hoyt_cdf, CdfForm, HoytChannel, InterferenceSet};
use crate::quadrature::QuadratureSpec;
use crate::special::{exp_integral_e1_scaled, EULER_GAMMA};
use crate::transform::{self, Bounds, MetricShape, RayleighMetric};

// ---------------------------------------------------------------------------
// capacity

/// ORA capacity in Rayleigh fading, `log₂(e)·e^{1/γ̄}E₁(1/γ̄)` bps/Hz.
pub fn capacity_ora_rayleigh(gamma_bar: f64) -> Result<f64> {
    if !(gamma_bar > 0.0) {
        return domain(format!("mean SNR must be positive, got {gamma_bar}"));
    }
    Ok(LOG2_E * exp_integral_e1_scaled(1.0 / gamma_bar)?)
}

/// [`capacity_ora_rayleigh`] as a transformable metric; the `γ̄ → 0⁺` limit is 0.
pub fn capacity_metric() -> RayleighMetric {
    RayleighMetric::new(MetricShape::IncreasingConcave, |g| {
        if g <= 0.0 {
            Ok(0.0)
        } else {
            capacity_ora_rayleigh(g)
        }
    })
}

/// ORA capacity in Hoyt fading.
pub fn capacity_ora_hoyt(channel: &HoytChannel, quad: &QuadratureSpec) -> Result<f64> {
    transform::transform(&capacity_metric(), channel, quad)
}

/// Closed-form lower bound: Rayleigh capacity at the scaled mean `2q²γ̄/(1+q²)`.
pub fn capacity_lower_bound(channel: &HoytChannel) -> Result<f64> {
    if channel.q() == 0.0 {
        return domain("the capacity lower bound degenerates at q = 0");
    }
    let x = 1.0 / channel.min_conditioned_mean();
    Ok(exp_integral_e1_scaled(x)? / std::f64::consts::LN_2)
}

/// High-SNR capacity loss with respect to AWGN,
/// `μ(q) = log₂(e)·[γ_e + ln(2(1+q²)/(1+q)²)]` bps/Hz.
///
/// Ranges from about 1.83 at `q = 0` to about 0.83 at `q = 1` (Rayleigh); it
/// crosses the Two-Ray fading loss near `q ≈ 0.48`.
pub fn capacity_loss_mu(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return domain(format!("Hoyt shape q must lie in [0, 1], got {q}"));
    }
    let q2 = q * q;
    Ok(LOG2_E * (EULER_GAMMA + (2.0 * (1.0 + q2) / ((1.0 + q) * (1.0 + q))).ln()))
}

/// `log₂(e)·ln γ̄ − μ(q)`.
pub fn capacity_high_snr_asymptote(channel: &HoytChannel) -> Result<f64> {
    Ok(LOG2_E * channel.gamma_bar().ln() - capacity_loss_mu(channel.q())?)
}

/// `log₂(e)·γ̄`, the same for every `q`.
pub fn capacity_low_snr_asymptote(channel: &HoytChannel) -> f64 {
    LOG2_E * channel.gamma_bar()
}

// ---------------------------------------------------------------------------
// secrecy

/// Legitimate (Bob) and eavesdropper (Eve) links plus the secrecy-rate
/// threshold `R_S` in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyScenario {
    pub bob: HoytChannel,
    pub eve: HoytChannel,
    rate_threshold: f64,
}

impl SecrecyScenario {
    pub fn new(bob: HoytChannel, eve: HoytChannel, rate_threshold: f64) -> Result<Self> {
        if !(rate_threshold >= 0.0) || !rate_threshold.is_finite() {
            return domain(format!("rate threshold must be >= 0, got {rate_threshold}"));
        }
        Ok(Self {
            bob,
            eve,
            rate_threshold,
        })
    }

    pub fn rate_threshold(&self) -> f64 {
        self.rate_threshold
    }

    pub fn with_rate_threshold(&self, rate_threshold: f64) -> Result<Self> {
        Self::new(self.bob, self.eve, rate_threshold)
    }

    fn rate_factor(&self) -> f64 {
        self.rate_threshold.exp2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecrecyForm {
    /// Inner integral over Eve's angle solved in closed form.
    #[default]
    SingleIntegral,
    /// Both angles integrated numerically.
    DoubleIntegral,
}

/// `P(C_S ≥ R_S)` for Rayleigh Bob with mean `gb` against Hoyt Eve, i.e. the
/// Rayleigh-Bob closed form with Eve's eccentricity factor.
fn secrecy_success_bob_rayleigh(gb: f64, eve: &HoytChannel, factor: f64) -> f64 {
    if gb <= 0.0 {
        return 0.0;
    }
    let ge = factor * eve.gamma_bar();
    let den = gb + ge;
    let ratio = eve.eccentricity() * ge / den;
    (-(factor - 1.0) / gb).exp() * gb / den / (1.0 - ratio * ratio).sqrt()
}

fn secrecy_success(
    scenario: &SecrecyScenario,
    quad: &QuadratureSpec,
    form: SecrecyForm,
) -> Result<f64> {
    let factor = scenario.rate_factor();
    let eve = scenario.eve;
    match form {
        SecrecyForm::SingleIntegral => {
            let metric = RayleighMetric::from_fn(MetricShape::Unknown, move |gb| {
                secrecy_success_bob_rayleigh(gb, &eve, factor)
            });
            transform::transform(&metric, &scenario.bob, quad)
        }
        SecrecyForm::DoubleIntegral => {
            let bob = scenario.bob;
            quad.average_over_half_turn(|tb| {
                let gb = bob.mean_at(tb);
                if gb <= 0.0 {
                    return Ok(0.0);
                }
                let decay = (-(factor - 1.0) / gb).exp();
                let inner =
                    quad.average_over_half_turn(|te| Ok(gb / (gb + factor * eve.mean_at(te))))?;
                Ok(decay * inner)
            })
        }
    }
}

/// Secrecy outage probability `P(C_S < R_S)`.
pub fn secrecy_outage(
    scenario: &SecrecyScenario,
    quad: &QuadratureSpec,
    form: SecrecyForm,
) -> Result<f64> {
    Ok((1.0 - secrecy_success(scenario, quad, form)?).clamp(0.0, 1.0))
}

/// Probability of strictly positive secrecy capacity, `P(C_S > 0)`.
/// The scenario's rate threshold is ignored.
pub fn prob_positive_secrecy(scenario: &SecrecyScenario, quad: &QuadratureSpec) -> Result<f64> {
    let s = scenario.with_rate_threshold(0.0)?;
    Ok(secrecy_success(&s, quad, SecrecyForm::SingleIntegral)?.clamp(0.0, 1.0))
}

/// Closed-form `(P(C_S < R_S), P(C_S > 0))` when Bob's link is Rayleigh.
/// With Eve also Rayleigh this is the classical Rayleigh result.
pub fn secrecy_closed_form_bob_rayleigh(scenario: &SecrecyScenario) -> Result<(f64, f64)> {
    if !scenario.bob.is_rayleigh() {
        return domain("closed-form secrecy metrics need q_b = 1");
    }
    let gb = scenario.bob.gamma_bar();
    let outage = 1.0 - secrecy_success_bob_rayleigh(gb, &scenario.eve, scenario.rate_factor());
    let positive = secrecy_success_bob_rayleigh(gb, &scenario.eve, 1.0);
    Ok((outage, positive))
}

// ---------------------------------------------------------------------------
// outage

/// Desired link, SINR/SIR threshold `γ_o` (linear) and optional interference.
#[derive(Debug, Clone)]
pub struct OutageScenario {
    pub desired: HoytChannel,
    threshold: f64,
    pub interference: Option<InterferenceSet>,
    pub include_noise: bool,
}

impl OutageScenario {
    /// Noise-only outage.
    pub fn noise_limited(desired: HoytChannel, threshold: f64) -> Result<Self> {
        Self::new(desired, threshold, None, true)
    }

    pub fn new(
        desired: HoytChannel,
        threshold: f64,
        interference: Option<InterferenceSet>,
        include_noise: bool,
    ) -> Result<Self> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return domain(format!(
                "outage threshold must be positive, got {threshold}"
            ));
        }
        let has_interference = interference.as_ref().is_some_and(|s| !s.is_empty());
        if !include_noise && !has_interference {
            return domain("an interference-limited scenario needs at least one interferer");
        }
        Ok(Self {
            desired,
            threshold,
            interference,
            include_noise,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    fn has_interference(&self) -> bool {
        self.interference.as_ref().is_some_and(|s| !s.is_empty())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutageForm {
    #[default]
    Transform,
    MarcumDiff,
    MarcumSingle,
}

/// Rayleigh outage `1 − e^{−γ_o/γ̄}` as a transformable metric.
///
/// Tagged decreasing-convex; convexity in `γ̄` actually holds only for
/// `γ̄ ≥ γ_o/2`, so the lower bracket of [`outage_bounds`] can fail when the
/// conditioned means reach below that.
pub fn outage_metric(threshold: f64) -> RayleighMetric {
    RayleighMetric::from_fn(MetricShape::DecreasingConvex, move |g| {
        if g <= 0.0 {
            1.0
        } else {
            -(-threshold / g).exp_m1()
        }
    })
}

/// Noise-limited outage probability `P(γ < γ_o)`.
pub fn outage_probability(
    scenario: &OutageScenario,
    quad: &QuadratureSpec,
    form: OutageForm,
) -> Result<f64> {
    if scenario.has_interference() {
        return Err(Error::Usage(
            "scenario has interferers; use outage_with_interference".into(),
        ));
    }
    let ch = &scenario.desired;
    let g0 = scenario.threshold;
    match form {
        OutageForm::Transform => transform::transform(&outage_metric(g0), ch, quad),
        OutageForm::MarcumDiff => squared_hoyt_cdf(g0, ch, CdfForm::MarcumDiff, quad),
        OutageForm::MarcumSingle => squared_hoyt_cdf(g0, ch, CdfForm::MarcumSingle, quad),
    }
}

/// Brackets `[1−e^{−γ_o/γ̄}, 1−e^{−(1+q²)γ_o/(2q²γ̄)}]` on the noise-limited
/// outage probability.
pub fn outage_bounds(channel: &HoytChannel, threshold: f64) -> Result<Bounds> {
    if !(threshold > 0.0) {
        return domain(format!(
            "outage threshold must be positive, got {threshold}"
        ));
    }
    transform::bounds(&outage_metric(threshold), channel)
}

/// Outage probability with co-channel interference, with or without noise.
///
/// With noise: `1 − (1/π)∫ e^{−γ_o/γ(θ)} φ_Y(−γ_o/γ(θ)) dθ`; without noise
/// the exponential factor is dropped.
pub fn outage_with_interference(scenario: &OutageScenario, quad: &QuadratureSpec) -> Result<f64> {
    let g0 = scenario.threshold;
    let set = scenario.interference.clone().unwrap_or_default();
    let noise = scenario.include_noise;
    let metric = RayleighMetric::new(MetricShape::Unknown, move |g| {
        if g <= 0.0 {
            return Ok(0.0);
        }
        let s = -g0 / g;
        let phi = set.mgf(s)?;
        Ok(if noise { s.exp() * phi } else { phi })
    });
    let success = transform::transform(&metric, &scenario.desired, quad)?;
    Ok((1.0 - success).clamp(0.0, 1.0))
}

/// Average SINR `γ̄_d/(1+γ̄_i)` from the SNR and the total INR.
pub fn sinr(snr: f64, total_inr: f64) -> f64 {
    snr / (1.0 + total_inr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{Interferer, KappaMuModel};

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn rayleigh_capacity_reference() {
        // log₂(e)·e·E₁(1), E₁(1) from a 30-digit oracle
        let v = capacity_ora_rayleigh(1.0).unwrap();
        assert!((v - 0.860_347_382_270_885_9).abs() < 1e-14, "{v}");
        assert!(capacity_ora_rayleigh(10.0).unwrap() > v);
        assert!(capacity_ora_rayleigh(0.0).is_err());
        let tiny = capacity_ora_rayleigh(1e-6).unwrap();
        assert!((tiny / (LOG2_E * 1e-6) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn capacity_reductions_and_bounds() {
        let r = HoytChannel::new(10.0, 1.0).unwrap();
        assert_eq!(
            capacity_ora_hoyt(&r, &quad()).unwrap(),
            capacity_ora_rayleigh(10.0).unwrap()
        );
        assert_eq!(
            capacity_lower_bound(&r).unwrap(),
            capacity_ora_rayleigh(10.0).unwrap()
        );
        let c = HoytChannel::new(10.0, 0.5).unwrap();
        let lb = capacity_lower_bound(&c).unwrap();
        assert!((lb - capacity_ora_rayleigh(4.0).unwrap()).abs() < 1e-14);
        assert!(capacity_ora_hoyt(&c, &quad()).unwrap() >= lb);
        assert!(capacity_lower_bound(&HoytChannel::new(10.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn capacity_loss_constants() {
        let m1 = capacity_loss_mu(1.0).unwrap();
        assert!((m1 - LOG2_E * EULER_GAMMA).abs() < 1e-15);
        assert!((m1 - 0.8327).abs() < 5e-4);
        let m0 = capacity_loss_mu(0.0).unwrap();
        assert!((m0 - (m1 + 1.0)).abs() < 1e-14);
        assert!(capacity_loss_mu(1.5).is_err());
    }

    #[test]
    fn low_snr_asymptote_is_q_free() {
        let a = HoytChannel::new(0.01, 0.2).unwrap();
        let b = HoytChannel::new(0.01, 0.9).unwrap();
        assert_eq!(
            capacity_low_snr_asymptote(&a),
            capacity_low_snr_asymptote(&b)
        );
        assert!((capacity_low_snr_asymptote(&a) - 0.014_426_950_408_889_634).abs() < 1e-15);
    }

    #[test]
    fn secrecy_rayleigh_closed_forms() {
        let bob = HoytChannel::new(10.0, 1.0).unwrap();
        let eve = HoytChannel::new(10.0, 1.0).unwrap();
        let s = SecrecyScenario::new(bob, eve, 0.0).unwrap();
        assert!((prob_positive_secrecy(&s, &quad()).unwrap() - 0.5).abs() < 1e-15);
        let s = SecrecyScenario::new(bob, HoytChannel::new(4.0, 1.0).unwrap(), 0.7).unwrap();
        let f = 0.7f64.exp2();
        let want = 1.0 - 10.0 / (10.0 + f * 4.0) * (-(f - 1.0) / 10.0).exp();
        let got = secrecy_outage(&s, &quad(), SecrecyForm::SingleIntegral).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!(SecrecyScenario::new(bob, eve, -0.1).is_err());
    }

    #[test]
    fn secrecy_forms_agree() {
        let bob = HoytChannel::new(10.0, 0.5).unwrap();
        let eve = HoytChannel::new(10.0, 0.3).unwrap();
        let s = SecrecyScenario::new(bob, eve, 0.1).unwrap();
        let a = secrecy_outage(&s, &quad(), SecrecyForm::SingleIntegral).unwrap();
        let b = secrecy_outage(&s, &quad(), SecrecyForm::DoubleIntegral).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        let p = prob_positive_secrecy(&s, &quad()).unwrap();
        let o0 = secrecy_outage(
            &s.with_rate_threshold(0.0).unwrap(),
            &quad(),
            SecrecyForm::SingleIntegral,
        )
        .unwrap();
        assert!((p - (1.0 - o0)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_needs_rayleigh_bob() {
        let bob = HoytChannel::new(10.0, 0.5).unwrap();
        let s = SecrecyScenario::new(bob, bob, 0.1).unwrap();
        assert!(secrecy_closed_form_bob_rayleigh(&s).is_err());
    }

    #[test]
    fn outage_examples() {
        let r = HoytChannel::new(10.0, 1.0).unwrap();
        let sc = OutageScenario::noise_limited(r, 1.0).unwrap();
        let v = outage_probability(&sc, &quad(), OutageForm::Transform).unwrap();
        assert!((v - 0.095_162_581_964_040_43).abs() < 1e-15);

        let c = HoytChannel::new(10.0, 0.5).unwrap();
        let sc = OutageScenario::noise_limited(c, 1.0).unwrap();
        let t = outage_probability(&sc, &quad(), OutageForm::Transform).unwrap();
        let m = outage_probability(&sc, &quad(), OutageForm::MarcumDiff).unwrap();
        let m1 = outage_probability(&sc, &quad(), OutageForm::MarcumSingle).unwrap();
        assert!((t - m).abs() < 1e-7 && (t - m1).abs() < 1e-7);

        let c = HoytChannel::new(5.0, 0.3).unwrap();
        let sc = OutageScenario::noise_limited(c, 2.0).unwrap();
        let v = outage_probability(&sc, &quad(), OutageForm::Transform).unwrap();
        let b = outage_bounds(&c, 2.0).unwrap();
        assert!(b.lower <= v && v <= b.upper);

        assert!(OutageScenario::noise_limited(c, 0.0).is_err());
        let z = HoytChannel::new(5.0, 0.0).unwrap();
        let sc = OutageScenario::noise_limited(z, 1.0).unwrap();
        assert!(outage_probability(&sc, &quad(), OutageForm::MarcumDiff).is_err());
        assert!(outage_probability(&sc, &quad(), OutageForm::Transform).is_ok());
    }

    #[test]
    fn interference_reductions() {
        let d = HoytChannel::new(8.0, 1.0).unwrap();
        let i = KappaMuModel::new(0.0, 1.0, 2.0).unwrap();
        let set = InterferenceSet::from_interferers(&[Interferer::KappaMu(i)]);
        let sc = OutageScenario::new(d, 1.5, Some(set), false).unwrap();
        let v = outage_with_interference(&sc, &quad()).unwrap();
        let want = 1.5 * 2.0 / (8.0 + 1.5 * 2.0);
        assert!((v - want).abs() < 1e-14);

        let c = HoytChannel::new(8.0, 0.4).unwrap();
        let empty = OutageScenario::new(c, 1.5, Some(InterferenceSet::new()), true).unwrap();
        let a = outage_with_interference(&empty, &quad()).unwrap();
        let b = outage_probability(&empty, &quad(), OutageForm::Transform).unwrap();
        assert!((a - b).abs() < 1e-15);

        assert!(OutageScenario::new(c, 1.0, None, false).is_err());
        let with = OutageScenario::new(
            c,
            1.0,
            Some(InterferenceSet::from_interferers(&[Interferer::KappaMu(i)])),
            true,
        )
        .unwrap();
        assert!(outage_probability(&with, &quad(), OutageForm::Transform).is_err());
    }

    #[test]
    fn sinr_definition() {
        assert_eq!(sinr(10.0, 4.0), 2.0);
    }
}
