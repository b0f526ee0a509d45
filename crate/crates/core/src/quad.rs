//! Quadrature primitives shared by the constants and energy engines.
//!
//! Three tools live here: fixed Gauss–Legendre rules, an adaptive
//! Gauss–Kronrod (7/15) integrator with a priority queue of subintervals,
//! and a one-dimensional fractional seminorm routine that handles the
//! diagonal singularity with dyadic panels plus a power substitution on the
//! innermost panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
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
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
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
    let p = if n == 0 { p0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_subdivisions: 4000,
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::relative(1e-10)
    }
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

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_k = fc * WGK[7];
    let mut result_g = fc * WG[3];
    let mut result_abs = result_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = result_k * half;
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    let mut error = ((result_k - result_g) * half).abs();
    if result_asc != 0.0 && error != 0.0 {
        error = result_asc * (200.0 * error / result_asc).powf(1.5).min(1.0);
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * result_abs);
    }
    Segment { a, b, value, error }
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// The subinterval with the largest error estimate is bisected until the
/// summed estimate meets `max(tol.abs, tol.rel * |I|)`. Endpoint
/// singularities are fine as long as `f` is finite at interior points.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let first = kronrod15(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    let mut total_value = first.value;
    let mut total_error = first.error;
    let mut frozen_error = 0.0;
    let mut frozen_value = 0.0;
    heap.push(first);
    let mut subdivisions = 1;
    loop {
        if !total_value.is_finite() || !total_error.is_finite() {
            return Err(Error::numeric("integrand produced a non-finite value", f64::INFINITY));
        }
        let target = tol.abs.max(tol.rel * total_value.abs());
        if total_error <= target {
            break;
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(Error::numeric(
                format!("adaptive quadrature exhausted {} subdivisions", tol.max_subdivisions),
                total_error,
            ));
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Cannot be split further in floating point; keep its contribution.
            frozen_error += worst.error;
            frozen_value += worst.value;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = kronrod15(&mut f, worst.a, mid);
        let right = kronrod15(&mut f, mid, worst.b);
        evaluations += 30;
        subdivisions += 1;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the running totals.
    let value: f64 = heap.iter().map(|s| s.value).sum::<f64>() + frozen_value;
    let error: f64 = heap.iter().map(|s| s.error).sum::<f64>() + frozen_error;
    let target = tol.abs.max(tol.rel * value.abs());
    if error > target * 10.0 {
        return Err(Error::numeric("adaptive quadrature stalled at floating-point resolution", error));
    }
    Ok(Integral {
        value,
        error,
        evaluations,
    })
}

/// Integrates a positive function over `(0, ∞)` given its logarithm.
///
/// The half line is compactified with `z = w / (1 - w)`; the half `w > 1/2`
/// is parametrised by `t = 1 - w` so that large `z` is reached without
/// cancellation, and the integrand is assembled in log space.
pub fn integrate_half_line_log<F: Fn(f64) -> f64>(log_f: F, tol: Tolerance) -> Result<Integral> {
    let near = integrate(
        |w| {
            if w <= 0.0 {
                return 0.0;
            }
            let one_minus = 1.0 - w;
            let z = w / one_minus;
            (log_f(z) - 2.0 * one_minus.ln()).exp()
        },
        0.0,
        0.5,
        tol,
    )?;
    let far = integrate(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let z = (1.0 - t) / t;
            (log_f(z) - 2.0 * t.ln()).exp()
        },
        0.0,
        0.5,
        tol,
    )?;
    Ok(Integral {
        value: near.value + far.value,
        error: near.error + far.error,
        evaluations: near.evaluations + far.evaluations,
    })
}

/// `ln(z^a (1 + z^2)^{-b})` evaluated without overflow for huge `z`.
pub fn log_algebraic(z: f64, a: f64, b: f64) -> f64 {
    let ln_z = z.ln();
    let ln_one_plus_sq = if z > 1.0 {
        2.0 * ln_z + (1.0 / (z * z)).ln_1p()
    } else {
        (z * z).ln_1p()
    };
    a * ln_z - b * ln_one_plus_sq
}

/// Number of dyadic panels used by [`seminorm_1d`] before the innermost
/// power-substituted panel.
const DYADIC_PANELS: i32 = 40;

/// `∫₀ᴸ∫₀ᴸ |g(x) − g(y)|^p / |x − y|^{1+sp} dx dy` for a Lipschitz `g`.
///
/// `slope(t, r)` must return the difference quotient `(g(t + r) − g(t)) / r`,
/// evaluated so that it stays accurate for very small `r`. With `r = y − x`
/// the double integral becomes `2∫₀ᴸ r^{p−1−sp} H(r) dr` where
/// `H(r) = ∫₀^{L−r} |slope(t, r)|^p dt`; the `r` axis is split into dyadic
/// panels toward zero and the innermost panel `[0, r₀]` is integrated after
/// the substitution `r = r₀ u^{1/(p−sp)}`, which absorbs the algebraic
/// weight exactly.
pub fn seminorm_1d<G: Fn(f64, f64) -> f64>(
    slope: G,
    length: f64,
    s: f64,
    p: f64,
    rel_tol: f64,
) -> Result<Integral> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::domain("seminorm_1d needs a positive finite length"));
    }
    let beta = p - 1.0 - s * p;
    if beta <= -1.0 {
        return Err(Error::domain("kernel is not integrable: need p(1-s) > 0"));
    }
    let inner_tol = Tolerance::relative(rel_tol * 1e-2).with_abs(1e-300);
    let h = |r: f64| -> Result<f64> {
        if r >= length {
            return Ok(0.0);
        }
        let res = integrate(|t| slope(t, r).abs().powf(p), 0.0, length - r, inner_tol)?;
        Ok(res.value)
    };
    let mut total = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut failure: Option<Error> = None;
    let outer_tol = Tolerance::relative(rel_tol * 0.1).with_abs(1e-300);
    for k in 0..DYADIC_PANELS {
        let hi = length * 0.5f64.powi(k);
        let lo = 0.5 * hi;
        let res = integrate(
            |r| match h(r) {
                Ok(v) => 2.0 * r.powf(beta) * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            lo,
            hi,
            outer_tol,
        )?;
        total += res.value;
        error += res.error;
        evaluations += res.evaluations;
    }
    let r0 = length * 0.5f64.powi(DYADIC_PANELS);
    let gamma = 1.0 / (beta + 1.0);
    let scale = gamma * r0.powf(beta + 1.0);
    let res = integrate(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let r = r0 * u.powf(gamma);
            if r <= 0.0 {
                return 0.0;
            }
            match h(r) {
                Ok(v) => 2.0 * scale * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
        outer_tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    total += res.value;
    error += res.error;
    evaluations += res.evaluations;
    Ok(Integral {
        value: total,
        error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let rule = GaussLegendre::new(6);
        // degree 11 monomial integrates exactly
        let v = rule.integrate(|x| x.powi(10) + 3.0 * x.powi(3), -1.0, 1.0);
        assert!((v - 2.0 / 11.0).abs() < 1e-14);
        let v = rule.integrate(|x| x * x, 0.0, 3.0);
        assert!((v - 9.0).abs() < 1e-13);
        let w: f64 = rule.mapped(-1.0, 1.0).map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫₀¹ x^{-1/2} = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, Tolerance::relative(1e-11)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
        let r = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, Tolerance::relative(1e-12)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_reports_divergence() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, Tolerance::relative(1e-8));
        assert!(matches!(r, Err(Error::NumericFailure { .. })));
    }

    #[test]
    fn half_line_matches_arctan() {
        // ∫₀^∞ 1/(1+z²) = π/2
        let r = integrate_half_line_log(|z| log_algebraic(z, 0.0, 1.0), Tolerance::relative(1e-12)).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn half_line_slow_tail() {
        // ∫₀^∞ z²(1+z²)^{-1.55} dz has a z^{-1.1} tail; reference from the Beta function:
        // (1/2) B(3/2, 0.05) = Γ(1.5)Γ(0.05)/(2Γ(1.55)).
        let r = integrate_half_line_log(|z| log_algebraic(z, 2.0, 1.55), Tolerance::relative(1e-11)).unwrap();
        let expected = 9.706_113_332_945_473;
        assert!(((r.value - expected) / expected).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn seminorm_1d_linear_closed_form() {
        // ⌊t⌋²_s(0,1) = 1/((1-s)(3-2s))
        for &s in &[0.1, 0.5, 0.9, 0.99] {
            let r = seminorm_1d(|_, _| 1.0, 1.0, s, 2.0, 1e-10).unwrap();
            let exact = 1.0 / ((1.0 - s) * (3.0 - 2.0 * s));
            assert!(((r.value - exact) / exact).abs() < 1e-9, "s={s}: {} vs {exact}", r.value);
        }
    }
}
