//! Quadrature rules used throughout the crate.
//!
//! Two integrators live here:
//!
//! * [`QuadratureSpec::average_over_half_turn`] computes `(1/π)∫₀^π f(θ) dθ`
//!   with Gauss–Legendre rules of doubling order. Every finite-range integral
//!   of the Hoyt transform goes through this path. The rule is open, so the
//!   endpoints `θ = 0` and `θ = π` are never evaluated.
//! * [`adaptive`] and [`adaptive_to_infinity`] are globally adaptive
//!   Gauss–Kronrod (7/15) integrators for integrands on arbitrary intervals,
//!   used by the definition-integral form of the Ie-function.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Node count, tolerance and refinement policy for finite-range integrals.
///
/// Refinement doubles the Gauss–Legendre order, starting from
/// `initial_nodes`, until two successive estimates differ by less than
/// `rel_tol * |estimate| + abs_tol`, or `max_nodes` is exceeded. A roundoff
/// floor proportional to `∫|f|` is added so integrals that cancel to zero
/// still terminate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            initial_nodes: 64,
            max_nodes: 4096,
            rel_tol: 1e-10,
            abs_tol: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(initial_nodes: usize, max_nodes: usize, rel_tol: f64) -> Result<Self> {
        let spec = Self {
            initial_nodes,
            max_nodes,
            rel_tol,
            abs_tol: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_nodes == 0 {
            return Err(Error::Domain("initial_nodes must be positive".into()));
        }
        if self.initial_nodes > self.max_nodes {
            return Err(Error::Domain(format!(
                "initial_nodes ({}) exceeds max_nodes ({})",
                self.initial_nodes, self.max_nodes
            )));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// `(1/π)∫₀^π f(θ) dθ` with node doubling.
    ///
    /// The summation order is fixed, so the result is bitwise reproducible.
    pub fn average_over_half_turn<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        self.validate()?;
        let mut n = self.initial_nodes;
        let (mut prev, _) = half_turn_mean(n, &f)?;
        let mut diff = f64::INFINITY;
        while n * 2 <= self.max_nodes {
            n *= 2;
            let (cur, mass) = half_turn_mean(n, &f)?;
            diff = (cur - prev).abs();
            if diff <= self.rel_tol * cur.abs() + self.abs_tol + ROUNDOFF * mass {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::Convergence {
            estimate: prev,
            error_bound: diff,
            nodes: n,
        })
    }
}

const ROUNDOFF: f64 = 1e-15;

/// Returns the mean and the mean of `|f|`.
fn half_turn_mean<F>(n: usize, f: &F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let rule = gauss_legendre(n);
    let mut acc = 0.0;
    let mut mass = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let theta = 0.5 * PI * (1.0 + x);
        let v = w * f(theta)?;
        acc += v;
        mass += v.abs();
    }
    // (1/π)·(π/2)·Σ wᵢ f(θᵢ)
    Ok((0.5 * acc, 0.5 * mass))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        half * acc
    }
}

/// Cached Gauss–Legendre rule of order `n`.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_gauss_legendre(n));
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(n)
        .or_insert(rule)
        .clone()
}

fn compute_gauss_legendre(n: usize) -> GaussLegendre {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussLegendre { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 1 {
        return (x, 1.0);
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let est = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (est, err)
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = kronrod15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !total.is_finite() {
            return Err(Error::NonFinite(total));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: err,
                nodes: 15 * intervals.len(),
            });
        }
        let (idx, _) =
            intervals
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, iv)| {
                    if iv.3 > best.1 {
                        (i, iv.3)
                    } else {
                        best
                    }
                });
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let m = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, m);
        let (v2, e2) = kronrod15(&f, m, hi);
        intervals.push((lo, m, v1, e1));
        intervals.push((m, hi, v2, e2));
    }
}

/// `∫_a^∞ f(t) dt` through the map `t = a + u/(1-u)`.
pub fn adaptive_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    adaptive(
        |u| {
            let one_minus = 1.0 - u;
            let t = a + u / one_minus;
            let v = f(t) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}
