//! Limit constants of the thin-film asymptotics, each computed two ways.
//!
//! Closed forms go through a local Lanczos Gamma function. The defining
//! integrals over `R^{d-1}` are reduced to radial integrals on `(0, ∞)`,
//! compactified onto `(0, 1)` and integrated adaptively. Agreement between
//! the two routes is what [`ConstantReport`] records.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, integrate_half_line_log, log_algebraic, Tolerance};

/// Relative accuracy requested from every defining-integral quadrature.
pub const QUADRATURE_RTOL: f64 = 1e-11;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's Gamma function for positive real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma is only supported for finite x > 0, got {x}")));
    }
    if x < 0.5 {
        // reflection keeps the series in its accurate range
        return Ok(PI / ((PI * x).sin() * lanczos(1.0 - x)));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `σ_k`, the surface measure of the unit sphere `S^{k-1} ⊂ R^k`.
pub fn surface_measure(k: u32) -> Result<f64> {
    if !(1..=4).contains(&k) {
        return Err(Error::domain(format!("surface measure supported for k in 1..=4, got {k}")));
    }
    let half = k as f64 / 2.0;
    Ok(2.0 * PI.powf(half) / gamma(half)?)
}

/// `∫_{S^{k-1}} |ν₁|^p dH^{k-1}`; for `k = 1` the sphere is the two points ±1.
pub fn sphere_moment(k: u32, p: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("sphere dimension must be at least 1"));
    }
    if !(p >= 0.0) {
        return Err(Error::domain("moment exponent must be nonnegative"));
    }
    let kf = k as f64;
    Ok(2.0 * PI.powf((kf - 1.0) / 2.0) * gamma((p + 1.0) / 2.0)? / gamma((kf + p) / 2.0)?)
}

fn check_s(s: f64, allow_one: bool) -> Result<()> {
    let ok = if allow_one { s > 0.0 && s <= 1.0 } else { s > 0.0 && s < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("fractional exponent out of range: s = {s}")))
    }
}

fn check_d(d: u32) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::domain(format!("dimension must be at least 2, got {d}")))
    }
}

/// `C_{s,d} = π^{(d-1)/2} Γ(1/2 + s) / Γ(d/2 + s)`, valid for `0 < s ≤ 1`.
pub fn c_closed(s: f64, d: u32) -> Result<f64> {
    check_s(s, true)?;
    check_d(d)?;
    let df = d as f64;
    Ok(PI.powf((df - 1.0) / 2.0) * gamma(0.5 + s)? / gamma(df / 2.0 + s)?)
}

/// `J_d^s = ∫₀^∞ z^{d-2} (1+z²)^{-d/2-s} dz` by adaptive quadrature.
pub fn j_integral(s: f64, d: u32) -> Result<f64> {
    check_s(s, false)?;
    check_d(d)?;
    let df = d as f64;
    let r = integrate_half_line_log(
        |z| log_algebraic(z, df - 2.0, df / 2.0 + s),
        Tolerance::relative(QUADRATURE_RTOL),
    )?;
    Ok(r.value)
}

/// `C_{s,d} = σ_{d-1} J_d^s` from the defining integral.
pub fn c_quadrature(s: f64, d: u32) -> Result<f64> {
    Ok(surface_measure(d - 1)? * j_integral(s, d)?)
}

/// Relative residual of `J_d^s = (d-3)/(d-2+2s) · J_{d-2}^s`, both sides by quadrature.
pub fn j_recursion_residual(s: f64, d: u32) -> Result<f64> {
    if d < 4 {
        return Err(Error::domain(format!("J recursion needs d >= 4, got {d}")));
    }
    let lhs = j_integral(s, d)?;
    let rhs = (d as f64 - 3.0) / (d as f64 - 2.0 + 2.0 * s) * j_integral(s, d - 2)?;
    Ok((lhs - rhs).abs() / lhs)
}

fn check_supercritical(s: f64) -> Result<()> {
    if s > 0.5 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "K_(s,d) is finite only for 1/2 < s < 1, got s = {s}"
        )))
    }
}

/// `K_{s,d} = C_{s,d} / ((2s-1)(3-2s))`.
pub fn k_closed(s: f64, d: u32) -> Result<f64> {
    check_supercritical(s)?;
    Ok(c_closed(s, d)? / ((2.0 * s - 1.0) * (3.0 - 2.0 * s)))
}

/// `K_{s,d} = σ_{d-1} / ((3-2s)(d-1)) · ∫₀^∞ z^d (1+z²)^{-d/2-s} dz`.
pub fn k_quadrature(s: f64, d: u32) -> Result<f64> {
    check_supercritical(s)?;
    check_d(d)?;
    let df = d as f64;
    let radial = integrate_half_line_log(
        |z| log_algebraic(z, df, df / 2.0 + s),
        Tolerance::relative(QUADRATURE_RTOL),
    )?;
    Ok(surface_measure(d - 1)? * radial.value / ((3.0 - 2.0 * s) * (df - 1.0)))
}

/// `I_d^1 = ∫₀^∞ z^d (1+z²)^{-d/2-1} dz` by quadrature.
pub fn i_one_quadrature(d: u32) -> Result<f64> {
    check_d(d)?;
    let df = d as f64;
    Ok(integrate_half_line_log(
        |z| log_algebraic(z, df, df / 2.0 + 1.0),
        Tolerance::relative(QUADRATURE_RTOL),
    )?
    .value)
}

/// `I_d^1 = (d-1)/(2d) · σ_d / σ_{d-1}`.
pub fn i_one_closed(d: u32) -> Result<f64> {
    check_d(d)?;
    let df = d as f64;
    Ok((df - 1.0) / (2.0 * df) * surface_measure(d)? / surface_measure(d - 1)?)
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("integrability exponent must satisfy p >= 1, got {p}")))
    }
}

/// `C_{s,d;p} = π^{(d-1)/2} Γ((1+sp)/2) / Γ((d+sp)/2)`.
pub fn c_p(s: f64, d: u32, p: f64) -> Result<f64> {
    check_s(s, true)?;
    check_d(d)?;
    check_p(p)?;
    let df = d as f64;
    Ok(PI.powf((df - 1.0) / 2.0) * gamma((1.0 + s * p) / 2.0)? / gamma((df + s * p) / 2.0)?)
}

/// `C_{1,d;p} = σ_d/(2√π) · Γ(d/2) Γ((p+1)/2) / Γ((p+d)/2)`.
pub fn c_p_at_one(d: u32, p: f64) -> Result<f64> {
    check_d(d)?;
    check_p(p)?;
    let df = d as f64;
    Ok(surface_measure(d)? / (2.0 * PI.sqrt()) * gamma(df / 2.0)? * gamma((p + 1.0) / 2.0)?
        / gamma((p + df) / 2.0)?)
}

/// `C_{s,d;p}` from its defining integral `σ_{d-1} ∫₀^∞ z^{d-2}(1+z²)^{-(d+sp)/2} dz`.
pub fn c_p_quadrature(s: f64, d: u32, p: f64) -> Result<f64> {
    check_s(s, false)?;
    check_d(d)?;
    check_p(p)?;
    let df = d as f64;
    let radial = integrate_half_line_log(
        |z| log_algebraic(z, df - 2.0, (df + s * p) / 2.0),
        Tolerance::relative(QUADRATURE_RTOL),
    )?;
    Ok(surface_measure(d - 1)? * radial.value)
}

fn angular_cache() -> &'static Mutex<HashMap<u64, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `∫₀^{2π} |cos θ|^p dθ` by quadrature, cached per exponent.
pub fn circle_cos_moment(p: f64) -> Result<f64> {
    let key = p.to_bits();
    if let Some(v) = angular_cache().lock().expect("angular cache poisoned").get(&key) {
        return Ok(*v);
    }
    // 4 × ∫₀^{π/2} cos^p, smooth except for a cos^p endpoint zero at π/2
    let r = quad::integrate(
        |t| t.cos().max(0.0).powf(p),
        0.0,
        PI / 2.0,
        Tolerance::relative(1e-13),
    )?;
    let v = 4.0 * r.value;
    angular_cache().lock().expect("angular cache poisoned").insert(key, v);
    Ok(v)
}

fn check_kp_domain(s: f64, p: f64) -> Result<()> {
    check_s(s, false)?;
    check_p(p)?;
    if s * p <= 1.0 {
        return Err(Error::domain(format!(
            "K_(s,d;p) requires s > 1/p, got s = {s}, p = {p}"
        )));
    }
    Ok(())
}

/// `K_{s,d;p} = 2/(p(1+p-sp)) ∫_{R^{d-1}} |ξ₁|^p (1+|ξ|²)^{-(d+sp)/2} dξ` by quadrature.
///
/// For `d = 2` this is a one-dimensional radial integral; for `d = 3` the
/// integrand is written in polar form with the angular factor
/// [`circle_cos_moment`]. The radial tail decays like `r^{p-sp-2}`, so the
/// integral only converges when `p(1-s) < 1`; outside that range the
/// quadrature reports a numeric failure.
pub fn k_p(s: f64, d: u32, p: f64) -> Result<f64> {
    check_kp_domain(s, p)?;
    let df = d as f64;
    let prefactor = 2.0 / (p * (1.0 + p - s * p));
    let exponent = (df + s * p) / 2.0;
    let (angular, radial_power) = match d {
        2 => (2.0, p),
        3 => (circle_cos_moment(p)?, p + 1.0),
        _ => return Err(Error::Unsupported(format!("k_p implemented for d in {{2, 3}}, got {d}"))),
    };
    let radial = integrate_half_line_log(
        |z| log_algebraic(z, radial_power, exponent),
        Tolerance::relative(QUADRATURE_RTOL),
    )?;
    Ok(prefactor * angular * radial.value)
}

/// Beta-function form of [`k_p`]:
/// `2/(p(1+p-sp)) · A_{d-1}(p) · Γ((p+d-1)/2) Γ((1+sp-p)/2) / (2Γ((d+sp)/2))`
/// with `A_{d-1}(p)` the `|ν₁|^p` moment of `S^{d-2}`.
pub fn k_p_closed(s: f64, d: u32, p: f64) -> Result<f64> {
    check_kp_domain(s, p)?;
    check_d(d)?;
    let df = d as f64;
    let tail = 1.0 + s * p - p;
    if tail <= 0.0 {
        return Err(Error::domain(format!(
            "the K_(s,d;p) integral diverges for p(1-s) >= 1 (s = {s}, p = {p})"
        )));
    }
    let radial = gamma((p + df - 1.0) / 2.0)? * gamma(tail / 2.0)? / (2.0 * gamma((df + s * p) / 2.0)?);
    Ok(2.0 / (p * (1.0 + p - s * p)) * sphere_moment(d - 1, p)? * radial)
}

/// One row of the closed-form versus quadrature comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub name: String,
    pub s: f64,
    pub d: u32,
    pub p: f64,
    pub closed_form: f64,
    pub quadrature: Option<f64>,
    pub relative_gap: Option<f64>,
}

impl ConstantReport {
    pub fn new(name: &str, s: f64, d: u32, p: f64, closed_form: f64, quadrature: Option<f64>) -> Self {
        let relative_gap = quadrature.map(|q| relative_gap(closed_form, q));
        Self {
            name: name.to_string(),
            s,
            d,
            p,
            closed_form,
            quadrature,
            relative_gap,
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.relative_gap.is_none_or(|g| g <= tol)
    }
}

/// `|a - b| / max(|a|, 1e-30)`.
pub fn relative_gap(closed: f64, quad: f64) -> f64 {
    (closed - quad).abs() / closed.abs().max(1e-30)
}

/// Builds the comparison table over a grid of `(s, d, p)`.
///
/// For `p = 2` the rows are `C` and (where `s > 1/2`) `K`; otherwise `C_p`
/// and, where the defining integral converges, `K_p`. At `s = 1` only closed
/// forms are reported.
pub fn constants_table(s_grid: &[f64], d_set: &[u32], p_set: &[f64]) -> Result<Vec<ConstantReport>> {
    let mut rows = Vec::new();
    for &p in p_set {
        check_p(p)?;
        for &d in d_set {
            if !(2..=3).contains(&d) {
                return Err(Error::usage(format!("d must be 2 or 3, got {d}")));
            }
            for &s in s_grid {
                check_s(s, true)?;
                let at_one = s >= 1.0;
                if (p - 2.0).abs() < 1e-12 {
                    let quad = if at_one { None } else { Some(c_quadrature(s, d)?) };
                    rows.push(ConstantReport::new("C", s, d, p, c_closed(s, d)?, quad));
                    if s > 0.5 && !at_one {
                        rows.push(ConstantReport::new("K", s, d, p, k_closed(s, d)?, Some(k_quadrature(s, d)?)));
                    }
                } else {
                    let closed = if at_one { c_p_at_one(d, p)? } else { c_p(s, d, p)? };
                    let quad = if at_one { None } else { Some(c_p_quadrature(s, d, p)?) };
                    rows.push(ConstantReport::new("Cp", s, d, p, closed, quad));
                    if !at_one && s * p > 1.0 && p * (1.0 - s) < 1.0 {
                        rows.push(ConstantReport::new("Kp", s, d, p, k_p_closed(s, d, p)?, Some(k_p(s, d, p)?)));
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_reference_values() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-14);
        // high-precision references
        let table = [
            (0.1, 9.513_507_698_668_731_3),
            (0.3, 2.991_568_987_687_590_7),
            (0.8, 1.164_229_713_725_303_3),
            (2.5, 1.329_340_388_179_137),
            (3.7, 4.170_651_783_796_604),
            (4.25, 8.285_085_141_835_22),
            (7.5, 1_871.254_305_797_788_3),
        ];
        for (x, g) in table {
            assert!(rel(gamma(x).unwrap(), g) < 1e-12, "gamma({x})");
        }
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn surface_measures() {
        assert!(rel(surface_measure(1).unwrap(), 2.0) < 1e-14);
        assert!(rel(surface_measure(2).unwrap(), 2.0 * PI) < 1e-14);
        assert!(rel(surface_measure(3).unwrap(), 4.0 * PI) < 1e-14);
        assert!(surface_measure(5).is_err());
    }

    #[test]
    fn c_closed_examples() {
        assert!(rel(c_closed(0.5, 2).unwrap(), 2.0) < 1e-13);
        // C_{1/2,d} = σ_{d-1}/(d-1)
        assert!(rel(c_closed(0.5, 3).unwrap(), surface_measure(2).unwrap() / 2.0) < 1e-13);
        // C_{1,d} = σ_d/(2d)
        assert!(rel(c_closed(1.0, 2).unwrap(), PI / 2.0) < 1e-13);
        assert!(rel(c_closed(1.0, 3).unwrap(), 4.0 * PI / 6.0) < 1e-13);
        let expected = PI * gamma(0.8).unwrap() / gamma(1.8).unwrap();
        assert!(rel(c_closed(0.3, 3).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn c_quadrature_matches_closed_form() {
        for (s, d) in [(0.5, 2), (0.9, 3), (0.1, 2)] {
            let gap = relative_gap(c_closed(s, d).unwrap(), c_quadrature(s, d).unwrap());
            assert!(gap < 1e-8, "s={s} d={d}: gap {gap}");
        }
    }

    #[test]
    fn j_recursion_examples() {
        for (s, d) in [(0.5, 4), (0.25, 5), (0.75, 4)] {
            assert!(j_recursion_residual(s, d).unwrap() < 1e-8);
        }
        assert!(j_recursion_residual(0.5, 3).is_err());
    }

    #[test]
    fn k_examples() {
        assert!(rel(k_closed(0.999, 2).unwrap(), PI / 2.0) < 5e-3);
        assert!(rel((2.0 * 0.51 - 1.0) * k_closed(0.51, 2).unwrap(), 1.0) < 2e-2);
        assert!(rel(k_closed(0.75, 2).unwrap(), c_closed(0.75, 2).unwrap() / 0.75) < 1e-14);
        for (s, d) in [(0.75, 2), (0.6, 3), (0.95, 2)] {
            let gap = relative_gap(k_closed(s, d).unwrap(), k_quadrature(s, d).unwrap());
            assert!(gap < 1e-8, "s={s} d={d}: gap {gap}");
        }
        assert!(matches!(k_closed(0.5, 2), Err(Error::Domain(_))));
        assert!(matches!(k_quadrature(0.3, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn c_p_examples() {
        for s in [0.2, 0.5, 0.8] {
            assert!(rel(c_p(s, 2, 2.0).unwrap(), c_closed(s, 2).unwrap()) < 1e-14);
        }
        // σ₂/(2√π)·Γ(1)Γ(2)/Γ(5/2) = 4/3
        let at_one = c_p_at_one(2, 3.0).unwrap();
        assert!(rel(at_one, 4.0 / 3.0) < 1e-13);
        assert!(rel(c_p(1.0, 2, 3.0).unwrap(), at_one) < 1e-13);
        let gap = relative_gap(c_p(0.4, 3, 1.5).unwrap(), c_p_quadrature(0.4, 3, 1.5).unwrap());
        assert!(gap < 1e-8);
    }

    #[test]
    fn k_p_examples() {
        for s in [0.6, 0.8] {
            for d in [2, 3] {
                let gap = relative_gap(k_closed(s, d).unwrap(), k_p(s, d, 2.0).unwrap());
                assert!(gap < 1e-6, "s={s} d={d}: gap {gap}");
            }
        }
        assert!(rel(k_p(0.75, 2, 2.0).unwrap(), k_closed(0.75, 2).unwrap()) < 1e-8);
        assert!(matches!(k_p(0.2, 2, 4.0), Err(Error::Domain(_))));
    }

    #[test]
    fn k_p_diverges_when_tail_is_not_integrable() {
        // s = 0.5, p = 4: |ξ₁|^4 (1+ξ²)^{-2} does not decay, so the integral is infinite
        assert!(matches!(k_p(0.5, 2, 4.0), Err(Error::NumericFailure { .. })));
        assert!(k_p_closed(0.5, 2, 4.0).is_err());
        // inside the convergent range the two routes agree
        let gap = relative_gap(k_p_closed(0.85, 2, 4.0).unwrap(), k_p(0.85, 2, 4.0).unwrap());
        assert!(gap < 1e-8, "{gap}");
        let gap = relative_gap(k_p_closed(0.8, 3, 1.5).unwrap(), k_p(0.8, 3, 1.5).unwrap());
        assert!(gap < 1e-8, "{gap}");
    }

    #[test]
    fn sphere_moments() {
        assert!(rel(sphere_moment(1, 2.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(sphere_moment(2, 2.0).unwrap(), PI) < 1e-14);
        // ∫_{S²} ν₁² = 4π/3
        assert!(rel(sphere_moment(3, 2.0).unwrap(), 4.0 * PI / 3.0) < 1e-14);
        assert!(rel(circle_cos_moment(3.0).unwrap(), sphere_moment(2, 3.0).unwrap()) < 1e-11);
    }

    #[test]
    fn i_one_identity() {
        for d in [2, 3] {
            assert!(relative_gap(i_one_closed(d).unwrap(), i_one_quadrature(d).unwrap()) < 1e-8);
        }
    }

    #[test]
    fn table_rows_and_gaps() {
        let rows = constants_table(&[0.5, 0.75, 1.0], &[2], &[2.0]).unwrap();
        let c_half = rows.iter().find(|r| r.name == "C" && r.s == 0.5).unwrap();
        assert!(rel(c_half.closed_form, 2.0) < 1e-13);
        assert!(c_half.relative_gap.unwrap() < 1e-8);
        let at_one = rows.iter().find(|r| r.s == 1.0).unwrap();
        assert!(at_one.quadrature.is_none());
        assert!(rows.iter().all(|r| r.within(1e-8)));
        assert!(constants_table(&[0.5], &[5], &[2.0]).is_err());
    }
}
