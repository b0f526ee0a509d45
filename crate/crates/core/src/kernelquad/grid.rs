//! Deterministic quadrature for `d = 2`.
//!
//! With `ξ = y - x` the energy is `∫ |ξ|^{-2-sp} G(ξ) dξ`, where
//! `G(ξ) = ∫_{Ω ∩ (Ω-ξ)} |f(x+ξ) - f(x)|^p dx` is supported on
//! `(-L, L) × (-ε, ε)` and even in `ξ`. Each half-plane quadrant becomes the
//! rectangle `[0, L] × [0, ε]` in `(|ξ₁|, ξ₂)`, which is split into
//!
//! * the square `[0, h]²`, `h = min(L, ε)`, handled by two Duffy triangles
//!   with graded radial panels `ρ_k = h (k/N)^g`; the innermost panel uses
//!   `ρ = ρ₁ u^{1/(β+1)}`, `β = p - 1 - sp`, which removes the `ρ^β`
//!   singularity exactly;
//! * the remaining strip, cut into dyadic panels along its long side.
//!
//! `G` is integrated exactly in any variable the difference does not depend
//! on and by composite Gauss rules otherwise.

use rayon::prelude::*;

use super::{check_inputs, Engine, EnergyEstimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{FractionalParams, ThinFilm};
use crate::quad::GaussLegendre;
use crate::testfns::TestFunction;

const OUTER_ORDER: usize = 8;
const INNER_ORDER: usize = 10;

/// A node of the outer rule in `(|ξ₁|, ξ₂)`. The integrand there is
/// `weight · ∫ |Δ / scale|^p dx`.
#[derive(Clone, Copy)]
struct Node {
    a: f64,
    b: f64,
    weight: f64,
    scale: f64,
}

struct Problem<'a> {
    f: &'a TestFunction,
    /// planar and vertical members of a sum, for the `p = 2` expansion
    split: Option<(TestFunction, TestFunction)>,
    x0: f64,
    length: f64,
    eps: f64,
    p: f64,
    depends: (bool, bool),
    inner: Vec<(f64, f64)>,
}

impl Problem<'_> {
    /// `∫_{Ω ∩ (Ω - ξ)} |Δ_ξ f / scale|^p` for `ξ = (σa, b)`.
    fn overlap_integral(&self, sigma: f64, a: f64, b: f64, scale: f64) -> f64 {
        let len1 = self.length - a;
        let len2 = self.eps - b;
        if len1 <= 0.0 || len2 <= 0.0 {
            return 0.0;
        }
        let lo1 = self.x0 + if sigma < 0.0 { a } else { 0.0 };
        let xi = [sigma * a, b];
        let p = self.p;
        let q = |x1: f64, x2: f64| (self.f.difference(&[x1, x2], &xi, self.eps) / scale).abs().powf(p);
        match self.depends {
            (false, false) => q(lo1, 0.0) * len1 * len2,
            (true, false) => len2 * len1 * self.inner.iter().map(|(t, w)| w * q(lo1 + len1 * t, 0.0)).sum::<f64>(),
            (false, true) => len1 * len2 * self.inner.iter().map(|(t, w)| w * q(lo1, len2 * t)).sum::<f64>(),
            (true, true) if self.split.is_some() && p == 2.0 => {
                // |A(x₁) + B(x₂)|² integrates to len2 ∫A² + len1 ∫B² + 2 ∫A ∫B
                let (planar, vertical) = self.split.as_ref().expect("checked");
                let (mut a1, mut a2, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0);
                for (t, w) in &self.inner {
                    let a = planar.difference(&[lo1 + len1 * t, 0.0], &xi, self.eps) / scale;
                    let b = vertical.difference(&[lo1, len2 * t], &xi, self.eps) / scale;
                    a1 += w * a;
                    a2 += w * a * a;
                    b1 += w * b;
                    b2 += w * b * b;
                }
                len1 * len2 * (a2 + b2 + 2.0 * a1 * b1)
            }
            (true, true) => {
                let mut total = 0.0;
                for (t1, w1) in &self.inner {
                    let x1 = lo1 + len1 * t1;
                    let row: f64 = self.inner.iter().map(|(t2, w2)| w2 * q(x1, len2 * t2)).sum();
                    total += w1 * row;
                }
                total * len1 * len2
            }
        }
    }

    fn inner_points(&self) -> u64 {
        let m = self.inner.len() as u64;
        match self.depends {
            (false, false) => 1,
            (true, true) => m * m,
            _ => m,
        }
    }
}

/// Composite Gauss rule on `[0, 1]`.
fn composite_unit(panels: usize, order: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(order);
    (0..panels)
        .flat_map(|k| {
            let (a, b) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
            gl.mapped(a, b).collect::<Vec<_>>()
        })
        .collect()
}

fn outer_nodes(length: f64, eps: f64, s: f64, p: f64, n: usize, grading: f64) -> Vec<Node> {
    let gl = GaussLegendre::new(OUTER_ORDER);
    let sp = s * p;
    let beta = p - 1.0 - sp;
    let gamma = 1.0 / (beta + 1.0);
    let h = length.min(eps);
    let mut nodes = Vec::new();

    // near square: two Duffy triangles, (a, b) = (ρ, ρt) and (ρt, ρ), Jacobian ρ
    let angular = composite_unit((n / 4).max(2), OUTER_ORDER);
    let edge = |k: usize| h * (k as f64 / n as f64).powf(grading);
    let mut radial: Vec<(f64, f64)> = Vec::new();
    // first panel: ∫₀^{ρ₁} ρ^β φ(ρ) dρ = ρ₁^{β+1} γ ∫₀¹ φ(ρ₁ u^γ) du
    let rho1 = edge(1);
    for (u, w) in gl.mapped(0.0, 1.0) {
        // for s near 1 the map can underflow; the reduced integrand is smooth at 0
        let rho = (rho1 * u.powf(gamma)).max(1e-280);
        radial.push((rho, w * rho1.powf(beta + 1.0) * gamma));
    }
    for k in 1..n {
        for (rho, w) in gl.mapped(edge(k), edge(k + 1)) {
            radial.push((rho, w * rho.powf(beta)));
        }
    }
    for &(rho, wr) in &radial {
        for &(t, wt) in &angular {
            let weight = wr * wt * (1.0 + t * t).powf(-(2.0 + sp) / 2.0);
            nodes.push(Node { a: rho, b: rho * t, weight, scale: rho });
            nodes.push(Node { a: rho * t, b: rho, weight, scale: rho });
        }
    }

    // strip beyond the square, dyadic along the long side
    let (long, short) = (length.max(eps), length.min(eps));
    let sub = (n / 8).max(1);
    let cross = composite_unit(sub, OUTER_ORDER);
    let mut lo = h;
    while lo < long * (1.0 - 1e-15) {
        let hi = (2.0 * lo).min(long);
        let width = (hi - lo) / sub as f64;
        for j in 0..sub {
            let (pa, pb) = (lo + j as f64 * width, lo + (j + 1) as f64 * width);
            for (x_long, wl) in gl.mapped(pa, pb) {
                for &(t, wc) in &cross {
                    let x_short = short * t;
                    let (a, b) = if length >= eps { (x_long, x_short) } else { (x_short, x_long) };
                    let kernel = (a * a + b * b).powf(-(2.0 + sp) / 2.0);
                    nodes.push(Node { a, b, weight: wl * wc * short * kernel, scale: 1.0 });
                }
            }
        }
        lo = hi;
    }
    nodes
}

fn grid_energy(
    f: &TestFunction,
    film: &ThinFilm,
    params: &FractionalParams,
    n: usize,
    grading: f64,
) -> (f64, u64) {
    let length = film.base().extents()[0];
    let eps = film.thickness();
    let depends = f.difference_dependence();
    let problem = Problem {
        f,
        x0: film.base().origin()[0],
        length,
        eps,
        p: params.p,
        depends,
        split: f.planar_part().zip(f.vertical_component()),
        inner: composite_unit((n / 4).max(1), INNER_ORDER),
    };
    let nodes = outer_nodes(length, eps, params.s, params.p, n, grading);
    let contributions: Vec<f64> = nodes
        .par_iter()
        .map(|nd| {
            nd.weight
                * (problem.overlap_integral(1.0, nd.a, nd.b, nd.scale)
                    + problem.overlap_integral(-1.0, nd.a, nd.b, nd.scale))
        })
        .collect();
    // G is even in ξ: the lower half-plane doubles the upper one
    let value = 2.0 * contributions.iter().sum::<f64>();
    (value, 2 * nodes.len() as u64 * problem.inner_points())
}

/// Graded-grid evaluation of `⌊f⌋^p_s(Ω_ε)` for `d = 2`.
///
/// The error estimate is `|E(N) - E(N/2)|` for `N = panels_per_axis`.
pub fn seminorm_grid(
    f: &TestFunction,
    film: &ThinFilm,
    params: &FractionalParams,
    spec: &QuadratureSpec,
) -> Result<EnergyEstimate> {
    check_inputs(f, film, params)?;
    if params.d != 2 {
        return Err(Error::Unsupported(format!(
            "the graded grid handles d = 2 only (got d = {}); use the Monte Carlo engine",
            params.d
        )));
    }
    let spec = QuadratureSpec {
        engine: Engine::GradedGrid,
        ..spec.clone()
    };
    spec.validate()?;
    if f.is_constant() {
        return Ok(EnergyEstimate::exact_zero(Engine::GradedGrid, *params, Some(film)));
    }
    let n = spec.panels_per_axis;
    let (fine, e1) = grid_energy(f, film, params, n, spec.grading_strength);
    let (coarse, e2) = grid_energy(f, film, params, n / 2, spec.grading_strength);
    if !fine.is_finite() || !coarse.is_finite() {
        return Err(Error::numeric("graded grid produced a non-finite value", f64::NAN));
    }
    Ok(EnergyEstimate {
        value: fine,
        error: (fine - coarse).abs(),
        engine: Engine::GradedGrid,
        params: *params,
        film: Some(film.into()),
        evaluations: e1 + e2,
        low_confidence: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BaseDomain;
    use crate::testfns::{linear_seminorm_1d, Profile};

    fn film(eps: f64) -> ThinFilm {
        ThinFilm::new(BaseDomain::unit_interval(), eps).unwrap()
    }

    #[test]
    fn full_square_matches_direct_integration() {
        // ε = 1, f = x₂: brute-force nested quadrature in ξ of (1-|ξ₁|)(1-|ξ₂|) ξ₂² |ξ|^{-3}
        let params = FractionalParams::quadratic(2, 0.5).unwrap();
        let f = TestFunction::vertical(Profile::Linear);
        let e = seminorm_grid(&f, &film(1.0), &params, &QuadratureSpec::graded_grid(32)).unwrap();
        let tol = crate::quad::Tolerance::relative(1e-11);
        let inner = |a: f64| {
            crate::quad::integrate(
                |b| (1.0 - a) * (1.0 - b) * b * b * (a * a + b * b).powf(-1.5),
                0.0,
                1.0,
                tol,
            )
            .unwrap()
            .value
        };
        let direct = 4.0 * crate::quad::integrate(inner, 0.0, 1.0, tol).unwrap().value;
        assert!((e.value - direct).abs() / direct < 1e-7, "{} vs {direct}", e.value);
    }

    #[test]
    fn vertical_linear_approaches_first_scaling_value() {
        let s = 0.5;
        let params = FractionalParams::quadratic(2, s).unwrap();
        let eps = 1e-4;
        let f = TestFunction::vertical(Profile::Linear);
        let e = seminorm_grid(&f, &film(eps), &params, &QuadratureSpec::graded_grid(32)).unwrap();
        let predicted = 2.0 * linear_seminorm_1d(1.0, s, 2.0);
        let scaled = e.value * eps.powf(2.0 * s - 1.0);
        assert!((scaled - predicted).abs() / predicted < 0.01, "{scaled}");
    }

    #[test]
    fn three_dimensional_films_are_unsupported() {
        let film3 = ThinFilm::new(BaseDomain::unit_square(), 0.1).unwrap();
        let params = FractionalParams::quadratic(3, 0.5).unwrap();
        let f = TestFunction::planar_linear(vec![1.0, 0.0]);
        assert!(matches!(
            seminorm_grid(&f, &film3, &params, &QuadratureSpec::graded_grid(16)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn thick_film_over_short_base() {
        // ε > L exercises the vertical strip; compare with swapping the roles of the axes
        let params = FractionalParams::quadratic(2, 0.4).unwrap();
        let spec = QuadratureSpec::graded_grid(32);
        let short = ThinFilm::new(BaseDomain::interval(0.25).unwrap(), 1.0).unwrap();
        let wide = ThinFilm::new(BaseDomain::interval(1.0).unwrap(), 0.25).unwrap();
        let a = seminorm_grid(&TestFunction::planar_linear(vec![1.0]), &short, &params, &spec).unwrap();
        // on the wide film the vertical profile x₂/ε scaled by ε is the same function rotated
        let b = seminorm_grid(&TestFunction::vertical(Profile::Linear).scaled(0.25), &wide, &params, &spec).unwrap();
        assert!((a.value - b.value).abs() / a.value < 1e-9, "{} vs {}", a.value, b.value);
    }
}
