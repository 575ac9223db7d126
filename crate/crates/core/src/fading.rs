//! Fading power models: squared Hoyt, η-μ and κ-μ, plus aggregate
//! interference built from per-interferer MGFs.
//!
//! All SNR quantities are linear. MGFs follow `φ(s) = E[e^{sX}]`; interference
//! is normally evaluated at negative `s`.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::special::{bessel_i0_scaled, marcum_q1, rice_ie, IeRepresentation};

/// Desired-link Hoyt (Nakagami-q) channel: mean SNR `γ̄` and shape `q = σ_y/σ_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoytChannel {
    gamma_bar: f64,
    q: f64,
}

impl HoytChannel {
    pub fn new(gamma_bar: f64, q: f64) -> Result<Self> {
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return domain(format!(
                "mean SNR must be positive and finite, got {gamma_bar}"
            ));
        }
        if !(0.0..=1.0).contains(&q) {
            return domain(format!("Hoyt shape q must lie in [0, 1], got {q}"));
        }
        Ok(Self { gamma_bar, q })
    }

    /// Rayleigh channel (`q = 1`).
    pub fn rayleigh(gamma_bar: f64) -> Result<Self> {
        Self::new(gamma_bar, 1.0)
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn with_gamma_bar(&self, gamma_bar: f64) -> Result<Self> {
        Self::new(gamma_bar, self.q)
    }

    pub fn is_rayleigh(&self) -> bool {
        self.q == 1.0
    }

    /// Squared third eccentricity `ε = (1−q²)/(1+q²)`.
    pub fn eccentricity(&self) -> f64 {
        let q2 = self.q * self.q;
        (1.0 - q2) / (1.0 + q2)
    }

    /// In-phase variance `σ_x² = γ̄/(1+q²)`.
    pub fn sigma_x2(&self) -> f64 {
        self.gamma_bar / (1.0 + self.q * self.q)
    }

    /// Quadrature variance `σ_y² = q²γ̄/(1+q²)`.
    pub fn sigma_y2(&self) -> f64 {
        let q2 = self.q * self.q;
        q2 * self.gamma_bar / (1.0 + q2)
    }

    /// Smallest conditioned mean, `γ(0,q) = 2q²γ̄/(1+q²)`.
    pub fn min_conditioned_mean(&self) -> f64 {
        let q2 = self.q * self.q;
        2.0 * q2 * self.gamma_bar / (1.0 + q2)
    }

    /// Largest conditioned mean, `γ(π,q) = 2γ̄/(1+q²)`.
    pub fn max_conditioned_mean(&self) -> f64 {
        2.0 * self.gamma_bar / (1.0 + self.q * self.q)
    }

    /// Mean SNR of the exponential component selected by `θ`:
    /// `γ(θ,q) = γ̄(1 − ε cosθ)`.
    pub fn conditioned_mean(&self, theta: f64) -> Result<f64> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return domain(format!("theta must lie in [0, pi], got {theta}"));
        }
        Ok(self.mean_at(theta))
    }

    #[inline]
    pub(crate) fn mean_at(&self, theta: f64) -> f64 {
        self.gamma_bar * (1.0 - self.eccentricity() * theta.cos())
    }

    /// Right end of the MGF validity region, `(1+q²)/(2γ̄)`.
    pub fn mgf_pole(&self) -> f64 {
        1.0 / self.max_conditioned_mean()
    }
}

/// Free-function form of [`HoytChannel::conditioned_mean`].
pub fn conditioned_mean(theta: f64, channel: &HoytChannel) -> Result<f64> {
    channel.conditioned_mean(theta)
}

/// Auxiliary constants of the closed-form Hoyt cdf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoytAux {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// `a(q), b(q), c(q), d(q)`; undefined at `q = 0`.
pub fn hoyt_aux(q: f64) -> Result<HoytAux> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::DegenerateParameter(format!(
            "closed-form Hoyt constants need 0 < q <= 1, got {q}"
        )));
    }
    let q2 = q * q;
    let root = (1.0 + q2).sqrt();
    Ok(HoytAux {
        a: (1.0 + q) / (2.0 * q) * root,
        b: (1.0 - q) / (2.0 * q) * root,
        c: (1.0 - q2 * q2) / (4.0 * q2),
        d: (1.0 + q2) * (1.0 + q2) / (4.0 * q2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdfForm {
    /// Closed form with the Bessel I₀ factor.
    Bessel,
    /// Average of exponential densities over `θ`.
    Transform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfForm {
    Transform,
    Ie,
    MarcumDiff,
    MarcumSingle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgfForm {
    Closed,
    Integral,
}

fn degenerate_q(what: &str) -> Error {
    Error::DegenerateParameter(format!(
        "{what} is undefined at q = 0; use the transform form"
    ))
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || x.is_nan() {
        return domain(format!("argument must be nonnegative, got {x}"));
    }
    Ok(())
}

/// Density of the squared Hoyt SNR at `x`.
pub fn squared_hoyt_pdf(
    x: f64,
    channel: &HoytChannel,
    form: PdfForm,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_x(x)?;
    let gb = channel.gamma_bar;
    if channel.is_rayleigh() {
        return Ok((-x / gb).exp() / gb);
    }
    match form {
        PdfForm::Bessel => {
            let q = channel.q;
            if q == 0.0 {
                return Err(degenerate_q("the Bessel-form pdf"));
            }
            let q2 = q * q;
            let aux = hoyt_aux(q)?;
            // exp(−d·x/γ̄)·I₀(c·x/γ̄) = exp(−(d−c)·x/γ̄)·[e^{−|z|}I₀(z)], d−c = (1+q²)/2
            let z = aux.c * x / gb;
            Ok((1.0 + q2) / (2.0 * q * gb)
                * (-(1.0 + q2) * x / (2.0 * gb)).exp()
                * bessel_i0_scaled(z))
        }
        PdfForm::Transform => quad.average_over_half_turn(|theta| {
            let g = channel.mean_at(theta);
            Ok(if g > 0.0 { (-x / g).exp() / g } else { 0.0 })
        }),
    }
}

/// Distribution function of the squared Hoyt SNR at `x`.
pub fn squared_hoyt_cdf(
    x: f64,
    channel: &HoytChannel,
    form: CdfForm,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_x(x)?;
    let q = channel.q;
    if q == 0.0 && form != CdfForm::Transform {
        return Err(degenerate_q("the closed-form cdf"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let gb = channel.gamma_bar;
    if channel.is_rayleigh() {
        return Ok(-(-x / gb).exp_m1());
    }
    let v = match form {
        CdfForm::Transform => quad.average_over_half_turn(|theta| {
            let g = channel.mean_at(theta);
            Ok(if g > 0.0 { -(-x / g).exp_m1() } else { 1.0 })
        })?,
        CdfForm::Ie => {
            let q2 = q * q;
            let k = channel.eccentricity();
            let arg = (1.0 + q2) * (1.0 + q2) * x / (4.0 * q2 * gb);
            2.0 * q / (1.0 + q2) * rice_ie(k, arg, IeRepresentation::default())?
        }
        CdfForm::MarcumDiff => {
            let aux = hoyt_aux(q)?;
            let r = (x / gb).sqrt();
            marcum_q1(aux.a * r, aux.b * r)? - marcum_q1(aux.b * r, aux.a * r)?
        }
        CdfForm::MarcumSingle => {
            let aux = hoyt_aux(q)?;
            let t = x / gb;
            let r = t.sqrt();
            let damped = (-(1.0 + q * q) * 0.5 * t).exp() * bessel_i0_scaled(aux.c * t);
            2.0 * marcum_q1(aux.a * r, aux.b * r)? - damped - 1.0
        }
    };
    Ok(v.clamp(0.0, 1.0))
}

/// MGF `E[e^{sR}]` of the squared Hoyt SNR, valid for `s < (1+q²)/(2γ̄)`.
pub fn squared_hoyt_mgf(
    s: f64,
    channel: &HoytChannel,
    form: MgfForm,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let pole = channel.mgf_pole();
    if !(s < pole) {
        return Err(Error::MgfDomain { s, bound: pole });
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let gb = channel.gamma_bar;
    match form {
        MgfForm::Closed => {
            let q2 = channel.q * channel.q;
            let u = 2.0 * gb * s;
            let base = 1.0 - u + q2 * u * u / ((1.0 + q2) * (1.0 + q2));
            Ok(1.0 / base.sqrt())
        }
        MgfForm::Integral => {
            if channel.is_rayleigh() {
                return Ok(1.0 / (1.0 - gb * s));
            }
            quad.average_over_half_turn(|theta| Ok(1.0 / (1.0 - channel.mean_at(theta) * s)))
        }
    }
}

/// A moment generating function with a declared validity region `s < pole()`.
pub trait Mgf: Send + Sync {
    /// `E[e^{sY}]`; fails with [`Error::MgfDomain`] when `s >= pole()`.
    fn mgf(&self, s: f64) -> Result<f64>;

    /// Supremum of the validity region.
    fn pole(&self) -> f64;

    fn describe(&self) -> String {
        "mgf".to_string()
    }
}

impl Mgf for HoytChannel {
    fn mgf(&self, s: f64) -> Result<f64> {
        squared_hoyt_mgf(s, self, MgfForm::Closed, &QuadratureSpec::default())
    }

    fn pole(&self) -> f64 {
        self.mgf_pole()
    }

    fn describe(&self) -> String {
        format!("hoyt(q={},mean={})", self.q, self.gamma_bar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMuFormat {
    /// `0 < η < ∞`, `H = (η⁻¹−η)/4`, `h = (2+η⁻¹+η)/4`.
    One,
    /// `−1 < η < 1`, `H = η/(1−η²)`, `h = 1/(1−η²)`.
    Two,
}

/// η-μ fading power model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaMuModel {
    format: EtaMuFormat,
    eta: f64,
    mu: f64,
    gamma_bar: f64,
    big_h: f64,
    small_h: f64,
}

impl EtaMuModel {
    pub fn new(format: EtaMuFormat, eta: f64, mu: f64, gamma_bar: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return domain(format!("eta-mu requires mu > 0, got {mu}"));
        }
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return domain(format!("eta-mu requires a positive mean, got {gamma_bar}"));
        }
        let (big_h, small_h) = match format {
            EtaMuFormat::One => {
                if !(eta > 0.0) || !eta.is_finite() {
                    return domain(format!("eta-mu format 1 requires 0 < eta < inf, got {eta}"));
                }
                ((1.0 / eta - eta) / 4.0, (2.0 + 1.0 / eta + eta) / 4.0)
            }
            EtaMuFormat::Two => {
                if !(eta > -1.0 && eta < 1.0) {
                    return domain(format!("eta-mu format 2 requires -1 < eta < 1, got {eta}"));
                }
                let den = 1.0 - eta * eta;
                (eta / den, 1.0 / den)
            }
        };
        Ok(Self {
            format,
            eta,
            mu,
            gamma_bar,
            big_h,
            small_h,
        })
    }

    pub fn format(&self) -> EtaMuFormat {
        self.format
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }
    /// `H` of the selected format.
    pub fn big_h(&self) -> f64 {
        self.big_h
    }
    /// `h` of the selected format.
    pub fn small_h(&self) -> f64 {
        self.small_h
    }

    /// Scales of the two gamma components whose sum has this MGF.
    pub fn gamma_scales(&self) -> (f64, f64) {
        let k = self.gamma_bar / (2.0 * self.mu);
        (
            k / (self.small_h - self.big_h),
            k / (self.small_h + self.big_h),
        )
    }
}

/// η-μ MGF `(4μ²h / ((2(h−H)μ − sγ̄)(2(h+H)μ − sγ̄)))^μ`.
pub fn eta_mu_mgf(s: f64, model: &EtaMuModel) -> Result<f64> {
    let pole = model.pole();
    if !(s < pole) {
        return Err(Error::MgfDomain { s, bound: pole });
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let (h, big_h, mu, gb) = (model.small_h, model.big_h, model.mu, model.gamma_bar);
    let d1 = 2.0 * (h - big_h) * mu - s * gb;
    let d2 = 2.0 * (h + big_h) * mu - s * gb;
    // written as a product of two ratios so large |s| does not underflow early
    let r1 = (2.0 * (h - big_h) * mu / d1).ln();
    let r2 = (2.0 * (h + big_h) * mu / d2).ln();
    let norm = (4.0 * mu * mu * h / (4.0 * mu * mu * (h * h - big_h * big_h))).ln();
    Ok((mu * (r1 + r2 + norm)).exp())
}

impl Mgf for EtaMuModel {
    fn mgf(&self, s: f64) -> Result<f64> {
        eta_mu_mgf(s, self)
    }

    fn pole(&self) -> f64 {
        2.0 * (self.small_h - self.big_h.abs()) * self.mu / self.gamma_bar
    }

    fn describe(&self) -> String {
        let f = match self.format {
            EtaMuFormat::One => 1,
            EtaMuFormat::Two => 2,
        };
        format!(
            "eta_mu(format={f},eta={},mu={},mean={})",
            self.eta, self.mu, self.gamma_bar
        )
    }
}

/// κ-μ fading power model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMuModel {
    kappa: f64,
    mu: f64,
    gamma_bar: f64,
}

impl KappaMuModel {
    pub fn new(kappa: f64, mu: f64, gamma_bar: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return domain(format!("kappa-mu requires kappa >= 0, got {kappa}"));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return domain(format!("kappa-mu requires mu > 0, got {mu}"));
        }
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return domain(format!(
                "kappa-mu requires a positive mean, got {gamma_bar}"
            ));
        }
        Ok(Self {
            kappa,
            mu,
            gamma_bar,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }
}

/// κ-μ MGF.
pub fn kappa_mu_mgf(s: f64, model: &KappaMuModel) -> Result<f64> {
    let pole = model.pole();
    if !(s < pole) {
        return Err(Error::MgfDomain { s, bound: pole });
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let (k, mu, gb) = (model.kappa, model.mu, model.gamma_bar);
    let a = mu * (1.0 + k);
    let den = a - s * gb;
    Ok(((a / den).ln() * mu + mu * mu * k * (1.0 + k) / den - mu * k).exp())
}

impl Mgf for KappaMuModel {
    fn mgf(&self, s: f64) -> Result<f64> {
        kappa_mu_mgf(s, self)
    }

    fn pole(&self) -> f64 {
        self.mu * (1.0 + self.kappa) / self.gamma_bar
    }

    fn describe(&self) -> String {
        format!(
            "kappa_mu(kappa={},mu={},mean={})",
            self.kappa, self.mu, self.gamma_bar
        )
    }
}

/// Interferer with a known fading model. Usable both analytically (through
/// [`Mgf`]) and by the Monte Carlo sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interferer {
    EtaMu(EtaMuModel),
    KappaMu(KappaMuModel),
    Hoyt(HoytChannel),
}

impl Interferer {
    pub fn mean(&self) -> f64 {
        match self {
            Interferer::EtaMu(m) => m.gamma_bar(),
            Interferer::KappaMu(m) => m.gamma_bar(),
            Interferer::Hoyt(c) => c.gamma_bar(),
        }
    }

    fn as_mgf(&self) -> &dyn Mgf {
        match self {
            Interferer::EtaMu(m) => m,
            Interferer::KappaMu(m) => m,
            Interferer::Hoyt(c) => c,
        }
    }
}

impl Mgf for Interferer {
    fn mgf(&self, s: f64) -> Result<f64> {
        self.as_mgf().mgf(s)
    }
    fn pole(&self) -> f64 {
        self.as_mgf().pole()
    }
    fn describe(&self) -> String {
        self.as_mgf().describe()
    }
}

/// User-supplied MGF closure. This is how correlated interferers enter: give
/// the MGF of their total power as one component.
pub struct FnMgf<F> {
    f: F,
    pole: f64,
    label: String,
}

impl<F> FnMgf<F>
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    pub fn new(label: impl Into<String>, pole: f64, f: F) -> Self {
        Self {
            f,
            pole,
            label: label.into(),
        }
    }
}

impl<F> Mgf for FnMgf<F>
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn mgf(&self, s: f64) -> Result<f64> {
        if !(s < self.pole) {
            return Err(Error::MgfDomain {
                s,
                bound: self.pole,
            });
        }
        let v = (self.f)(s);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(s))
        }
    }
    fn pole(&self) -> f64 {
        self.pole
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Independent interferers; the aggregate MGF is the product of the
/// components' MGFs.
#[derive(Clone, Default)]
pub struct InterferenceSet {
    components: Vec<Arc<dyn Mgf>>,
}

impl fmt::Debug for InterferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.components.iter().map(|c| c.describe()))
            .finish()
    }
}

impl InterferenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_interferers(interferers: &[Interferer]) -> Self {
        let mut set = Self::new();
        for i in interferers {
            set.push(*i);
        }
        set
    }

    pub fn push<M: Mgf + 'static>(&mut self, component: M) {
        self.components.push(Arc::new(component));
    }

    pub fn push_shared(&mut self, component: Arc<dyn Mgf>) {
        self.components.push(component);
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `min_i pole_i`; `+∞` for the empty set.
    pub fn pole(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.pole())
            .fold(f64::INFINITY, f64::min)
    }

    /// `φ_Y(s) = Π φ_i(s)`.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        let pole = self.pole();
        if !(s < pole) {
            return Err(Error::MgfDomain { s, bound: pole });
        }
        self.components
            .iter()
            .try_fold(1.0, |acc, c| Ok(acc * c.mgf(s)?))
    }

    pub fn describe(&self) -> String {
        if self.components.is_empty() {
            return "none".to_string();
        }
        self.components
            .iter()
            .map(|c| c.describe())
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn channel_validation_and_derived_quantities() {
        assert!(HoytChannel::new(0.0, 0.5).is_err());
        assert!(HoytChannel::new(1.0, -0.1).is_err());
        assert!(HoytChannel::new(1.0, 1.1).is_err());
        let c = HoytChannel::new(2.0, 1.0).unwrap();
        assert_eq!(c.eccentricity(), 0.0);
        assert_eq!(c.sigma_x2(), 1.0);
        assert_eq!(c.sigma_y2(), 1.0);
        let c = HoytChannel::new(3.0, 0.4).unwrap();
        assert!((c.sigma_x2() + c.sigma_y2() - 3.0).abs() < 1e-15);
        assert_eq!(HoytChannel::new(1.0, 0.0).unwrap().eccentricity(), 1.0);
    }

    #[test]
    fn conditioned_mean_examples() {
        let c = HoytChannel::new(5.0, 0.3).unwrap();
        assert!((c.conditioned_mean(PI / 2.0).unwrap() - 5.0).abs() < 1e-14);
        let r = HoytChannel::new(5.0, 1.0).unwrap();
        assert_eq!(r.conditioned_mean(1.234).unwrap(), 5.0);
        let z = HoytChannel::new(5.0, 0.0).unwrap();
        assert_eq!(z.conditioned_mean(0.0).unwrap(), 0.0);
        assert!(c.conditioned_mean(-0.1).is_err());
        assert!(c.conditioned_mean(3.2).is_err());
        assert!((c.conditioned_mean(0.0).unwrap() - c.min_conditioned_mean()).abs() < 1e-14);
        assert!((c.conditioned_mean(PI).unwrap() - c.max_conditioned_mean()).abs() < 1e-14);
    }

    #[test]
    fn pdf_at_origin_and_rayleigh_reduction() {
        let c = HoytChannel::new(1.0, 0.5).unwrap();
        let v = squared_hoyt_pdf(0.0, &c, PdfForm::Bessel, &quad()).unwrap();
        assert!((v - 1.25).abs() < 1e-15);
        let t = squared_hoyt_pdf(0.0, &c, PdfForm::Transform, &quad()).unwrap();
        assert!((t - 1.25).abs() < 1e-10);
        let r = HoytChannel::new(2.0, 1.0).unwrap();
        let v = squared_hoyt_pdf(1.0, &r, PdfForm::Bessel, &quad()).unwrap();
        assert!((v - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn pdf_forms_agree() {
        for q in [0.05, 0.3, 0.7, 0.95] {
            let c = HoytChannel::new(2.0, q).unwrap();
            for x in [0.01, 0.5, 2.0, 8.0] {
                let a = squared_hoyt_pdf(x, &c, PdfForm::Bessel, &quad()).unwrap();
                let b = squared_hoyt_pdf(x, &c, PdfForm::Transform, &quad()).unwrap();
                assert!(
                    (a - b).abs() <= 1e-9 * a.max(1e-12),
                    "q={q} x={x}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn degenerate_q_is_rejected_by_closed_forms() {
        let c = HoytChannel::new(1.0, 0.0).unwrap();
        assert!(matches!(
            squared_hoyt_pdf(1.0, &c, PdfForm::Bessel, &quad()),
            Err(Error::DegenerateParameter(_))
        ));
        for form in [CdfForm::Ie, CdfForm::MarcumDiff, CdfForm::MarcumSingle] {
            assert!(matches!(
                squared_hoyt_cdf(1.0, &c, form, &quad()),
                Err(Error::DegenerateParameter(_))
            ));
        }
        let v = squared_hoyt_cdf(1.0, &c, CdfForm::Transform, &quad()).unwrap();
        // one-sided Gaussian: P(X² < 1) with X ~ N(0,1)
        assert!((v - 0.682_689_492_137_085_9).abs() < 1e-9, "{v}");
    }

    #[test]
    fn cdf_forms_agree() {
        let c = HoytChannel::new(1.0, 0.5).unwrap();
        let t = squared_hoyt_cdf(1.0, &c, CdfForm::Transform, &quad()).unwrap();
        for form in [CdfForm::Ie, CdfForm::MarcumDiff, CdfForm::MarcumSingle] {
            let v = squared_hoyt_cdf(1.0, &c, form, &quad()).unwrap();
            assert!((v - t).abs() < 1e-7, "{form:?}: {v} vs {t}");
        }
        let r = HoytChannel::new(10.0, 1.0).unwrap();
        let v = squared_hoyt_cdf(1.0, &r, CdfForm::MarcumDiff, &quad()).unwrap();
        assert!((v - 0.095_162_581_964_040_4).abs() < 1e-12);
        assert_eq!(
            squared_hoyt_cdf(0.0, &c, CdfForm::Ie, &quad()).unwrap(),
            0.0
        );
        assert!(squared_hoyt_cdf(-1.0, &c, CdfForm::Ie, &quad()).is_err());
    }

    #[test]
    fn mgf_closed_and_integral() {
        let c = HoytChannel::new(2.0, 0.4).unwrap();
        assert_eq!(
            squared_hoyt_mgf(0.0, &c, MgfForm::Closed, &quad()).unwrap(),
            1.0
        );
        let a = squared_hoyt_mgf(-1.0, &c, MgfForm::Closed, &quad()).unwrap();
        let b = squared_hoyt_mgf(-1.0, &c, MgfForm::Integral, &quad()).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        let r = HoytChannel::new(3.0, 1.0).unwrap();
        let v = squared_hoyt_mgf(-0.7, &r, MgfForm::Closed, &quad()).unwrap();
        assert!((v - 1.0 / (1.0 + 0.7 * 3.0)).abs() < 1e-15);
    }

    #[test]
    fn mgf_pole_is_enforced() {
        let c = HoytChannel::new(2.0, 0.5).unwrap();
        let pole = c.mgf_pole();
        assert!((pole - 1.25 / 4.0).abs() < 1e-15);
        match squared_hoyt_mgf(pole, &c, MgfForm::Closed, &quad()) {
            Err(Error::MgfDomain { bound, .. }) => assert_eq!(bound, pole),
            other => panic!("unexpected {other:?}"),
        }
        let z = HoytChannel::new(2.0, 0.0).unwrap();
        assert!((z.mgf_pole() - 0.25).abs() < 1e-15);
        // the closed-form radicand vanishes at the pole
        let below = squared_hoyt_mgf(pole * (1.0 - 1e-9), &c, MgfForm::Closed, &quad()).unwrap();
        assert!(below > 1e3);
    }

    #[test]
    fn eta_mu_formats_and_invariants() {
        let m1 = EtaMuModel::new(EtaMuFormat::One, 0.3, 1.2, 2.0).unwrap();
        assert!(m1.small_h() > m1.big_h().abs());
        let m2 = EtaMuModel::new(EtaMuFormat::Two, -0.4, 0.7, 2.0).unwrap();
        assert!(m2.small_h() > m2.big_h().abs());
        assert!(EtaMuModel::new(EtaMuFormat::One, 0.0, 1.0, 1.0).is_err());
        assert!(EtaMuModel::new(EtaMuFormat::Two, 1.0, 1.0, 1.0).is_err());
        assert!(EtaMuModel::new(EtaMuFormat::Two, 0.2, 0.0, 1.0).is_err());
        assert_eq!(eta_mu_mgf(0.0, &m1).unwrap(), 1.0);

        let a = EtaMuModel::new(EtaMuFormat::One, 1.0, 0.5, 3.0).unwrap();
        let b = EtaMuModel::new(EtaMuFormat::Two, 0.0, 0.5, 3.0).unwrap();
        for s in [-0.1, -1.0, -10.0, 0.05] {
            let (va, vb) = (eta_mu_mgf(s, &a).unwrap(), eta_mu_mgf(s, &b).unwrap());
            assert!((va - vb).abs() < 1e-14 * va, "s={s}");
        }
        assert!(eta_mu_mgf(a.pole(), &a).is_err());
    }

    #[test]
    fn eta_mu_contains_squared_hoyt() {
        for q in [0.1, 0.4, 0.8] {
            let gb = 2.5;
            let c = HoytChannel::new(gb, q).unwrap();
            let m = EtaMuModel::new(EtaMuFormat::One, q * q, 0.5, gb).unwrap();
            assert!((m.pole() - c.mgf_pole()).abs() < 1e-12);
            for s in [-0.1, -1.0, -10.0] {
                let a = squared_hoyt_mgf(s, &c, MgfForm::Closed, &quad()).unwrap();
                let b = eta_mu_mgf(s, &m).unwrap();
                assert!((a - b).abs() < 1e-12 * a, "q={q} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn kappa_mu_reductions() {
        let m = KappaMuModel::new(0.0, 1.0, 3.0).unwrap();
        assert!((kappa_mu_mgf(-1.0, &m).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(
            kappa_mu_mgf(0.0, &KappaMuModel::new(2.0, 1.5, 1.0).unwrap()).unwrap(),
            1.0
        );
        assert!(kappa_mu_mgf(1.0 / 3.0, &m).is_err());
        assert!(KappaMuModel::new(-1.0, 1.0, 1.0).is_err());
        assert!(KappaMuModel::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn interference_set_is_a_product() {
        let mut set = InterferenceSet::new();
        assert_eq!(set.mgf(-3.0).unwrap(), 1.0);
        assert_eq!(set.pole(), f64::INFINITY);
        let a = KappaMuModel::new(1.0, 2.0, 1.5).unwrap();
        let b = EtaMuModel::new(EtaMuFormat::Two, 0.3, 0.8, 0.5).unwrap();
        set.push(a);
        set.push(b);
        set.push(FnMgf::new("rayleigh", 1.0, |s| 1.0 / (1.0 - s)));
        let s = -0.6;
        let want = kappa_mu_mgf(s, &a).unwrap() * eta_mu_mgf(s, &b).unwrap() / (1.0 - s);
        assert!((set.mgf(s).unwrap() - want).abs() < 1e-15);
        assert_eq!(set.mgf(0.0).unwrap(), 1.0);
        assert!((set.pole() - a.pole().min(b.pole()).min(1.0)).abs() < 1e-15);
        assert!(set.mgf(set.pole()).is_err());
        assert_eq!(set.len(), 3);
    }
}
