use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_inputs, Engine, EnergyEstimate, QuadratureSpec};
use crate::constants::surface_measure;
use crate::error::{Error, Result};
use crate::geometry::{FractionalParams, ThinFilm};
use crate::testfns::TestFunction;

/// Samples per RNG substream. Results depend on this, not on the worker count.
pub const CHUNK_SIZE: u64 = 1 << 14;

/// An axis-aligned box of dimension 1 to 3.
#[derive(Debug, Clone, PartialEq)]
pub struct McBox {
    origin: Vec<f64>,
    lengths: Vec<f64>,
}

impl McBox {
    pub fn new(origin: Vec<f64>, lengths: Vec<f64>) -> Self {
        assert_eq!(origin.len(), lengths.len());
        assert!((1..=3).contains(&lengths.len()));
        Self { origin, lengths }
    }

    pub fn from_film(film: &ThinFilm) -> Self {
        Self::new(film.corner(), film.lengths())
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    fn measure(&self) -> f64 {
        self.lengths.iter().product()
    }

    fn diameter(&self) -> f64 {
        self.lengths.iter().map(|l| l * l).sum::<f64>().sqrt()
    }

    fn contains(&self, y: &[f64]) -> bool {
        y.iter()
            .zip(&self.origin)
            .zip(&self.lengths)
            .all(|((v, o), l)| *v >= *o && *v <= o + l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

#[derive(Clone, Copy, Default)]
struct ChunkSums {
    sum: f64,
    sum_sq: f64,
    bad: bool,
}

fn direction<R: Rng>(n: usize, rng: &mut R) -> [f64; 3] {
    match n {
        1 => [if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0, 0.0],
        2 => {
            let phi = 2.0 * PI * rng.random::<f64>();
            [phi.cos(), phi.sin(), 0.0]
        }
        _ => {
            let z = 2.0 * rng.random::<f64>() - 1.0;
            let phi = 2.0 * PI * rng.random::<f64>();
            let rho = (1.0 - z * z).max(0.0).sqrt();
            [rho * phi.cos(), rho * phi.sin(), z]
        }
    }
}

/// Monte Carlo estimate of `∫_B∫_B |Δ|^p / |x-y|^{n+sp}` over a box `B`,
/// where `diff(x, h)` returns `u(x + h) - u(x)`.
///
/// Samples `x` uniformly, a uniform direction `θ`, and `r ∈ (0, diam B)` with
/// density `∝ r^α`, `α = p - 1 - sp + shift`. Both `x ± rθ` are used; a
/// point outside `B` contributes zero.
pub fn box_seminorm_mc<D>(bx: &McBox, diff: D, s: f64, p: f64, spec: &QuadratureSpec) -> Result<McResult>
where
    D: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    spec.validate()?;
    let n = bx.dim();
    let alpha = p - 1.0 - s * p + spec.radial_exponent_shift;
    if !(alpha > -1.0) {
        return Err(Error::usage(format!(
            "radial sampling exponent {alpha} must exceed -1; reduce the negative shift"
        )));
    }
    let big_r = bx.diameter();
    let inv_gamma = 1.0 / (alpha + 1.0);
    // |B| σ_n r^{-1-sp} / q(r) with q(r) = (α+1) r^α / R^{α+1}
    let prefactor = bx.measure() * surface_measure(n as u32)? * big_r.powf(alpha + 1.0) / (alpha + 1.0);
    let decay = -1.0 - s * p - alpha;

    let total = spec.samples;
    let chunks = total.div_ceil(CHUNK_SIZE);
    let run_chunk = |c: u64| -> ChunkSums {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(c);
        let count = CHUNK_SIZE.min(total - c * CHUNK_SIZE);
        let mut acc = ChunkSums::default();
        let mut x = [0.0; 3];
        let mut h = [0.0; 3];
        let mut y = [0.0; 3];
        for _ in 0..count {
            for i in 0..n {
                x[i] = bx.origin[i] + bx.lengths[i] * rng.random::<f64>();
            }
            let theta = direction(n, &mut rng);
            let u = 1.0 - rng.random::<f64>();
            let r = big_r * u.powf(inv_gamma);
            let mut pair = 0.0;
            for sign in [1.0, -1.0] {
                for i in 0..n {
                    h[i] = sign * r * theta[i];
                    y[i] = x[i] + h[i];
                }
                if bx.contains(&y[..n]) {
                    pair += diff(&x[..n], &h[..n]).abs().powf(p);
                }
            }
            let w = if pair == 0.0 { 0.0 } else { 0.5 * prefactor * r.powf(decay) * pair };
            if !w.is_finite() {
                acc.bad = true;
            }
            acc.sum += w;
            acc.sum_sq += w * w;
        }
        acc
    };
    let sums: Vec<ChunkSums> = match spec.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::usage(format!("cannot build worker pool: {e}")))?
            .install(|| (0..chunks).into_par_iter().map(run_chunk).collect()),
        None => (0..chunks).into_par_iter().map(run_chunk).collect(),
    };
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for c in &sums {
        if c.bad {
            return Err(Error::numeric("non-finite Monte Carlo sample weight", f64::NAN));
        }
        sum += c.sum;
        sum_sq += c.sum_sq;
    }
    let nf = total as f64;
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Ok(McResult {
        value: mean,
        std_error: (var / nf).sqrt(),
        samples: total,
    })
}

/// Monte Carlo estimate of `⌊f⌋^p_s(Ω_ε)` for `d ∈ {2, 3}`.
pub fn seminorm_mc(
    f: &TestFunction,
    film: &ThinFilm,
    params: &FractionalParams,
    spec: &QuadratureSpec,
) -> Result<EnergyEstimate> {
    check_inputs(f, film, params)?;
    let spec = QuadratureSpec {
        engine: Engine::MonteCarlo,
        ..spec.clone()
    };
    spec.validate()?;
    if f.is_constant() {
        return Ok(EnergyEstimate::exact_zero(Engine::MonteCarlo, *params, Some(film)));
    }
    let eps = film.thickness();
    let r = box_seminorm_mc(
        &McBox::from_film(film),
        |x, h| f.difference(x, h, eps),
        params.s,
        params.p,
        &spec,
    )?;
    Ok(EnergyEstimate {
        value: r.value,
        error: r.std_error,
        engine: Engine::MonteCarlo,
        params: *params,
        film: Some(film.into()),
        evaluations: r.samples,
        low_confidence: r.std_error > r.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BaseDomain;
    use crate::testfns::linear_seminorm_1d;

    #[test]
    fn one_dimensional_linear_matches_closed_form() {
        let bx = McBox::new(vec![0.0], vec![1.0]);
        let spec = QuadratureSpec::monte_carlo(200_000, 3);
        let r = box_seminorm_mc(&bx, |_, h| h[0], 0.4, 2.0, &spec).unwrap();
        let exact = linear_seminorm_1d(1.0, 0.4, 2.0);
        assert!((r.value - exact).abs() < 4.0 * r.std_error, "{} ± {} vs {exact}", r.value, r.std_error);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let film = ThinFilm::new(BaseDomain::unit_interval(), 0.1).unwrap();
        let f = TestFunction::planar_sine(vec![1]);
        let params = FractionalParams::quadratic(2, 0.5).unwrap();
        let spec = QuadratureSpec::monte_carlo(100_000, 11);
        let a = seminorm_mc(&f, &film, &params, &spec.clone().with_threads(1)).unwrap();
        let b = seminorm_mc(&f, &film, &params, &spec.with_threads(4)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error.to_bits(), b.error.to_bits());
    }

    #[test]
    fn constants_vanish_and_bad_shift_is_rejected() {
        let film = ThinFilm::new(BaseDomain::unit_square(), 0.1).unwrap();
        let params = FractionalParams::quadratic(3, 0.5).unwrap();
        let spec = QuadratureSpec::monte_carlo(10_000, 1);
        let zero = seminorm_mc(&TestFunction::constant(2.0), &film, &params, &spec).unwrap();
        assert_eq!(zero.value, 0.0);
        let f = TestFunction::planar_linear(vec![1.0, 0.0]);
        assert!(seminorm_mc(&f, &film, &params, &spec.with_shift(-2.0)).is_err());
    }
}
