//! Analytic test functions on `Ω_ε` and their reference seminorms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::gamma;
use crate::error::{Error, Result};
use crate::geometry::BaseDomain;
use crate::quad::{self, Tolerance};

/// Relative accuracy of oracle seminorms.
pub const ORACLE_RTOL: f64 = 1e-8;

/// Vertical profile `g` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `g(t) = t`
    Linear,
    /// `g(t) = sin(π t)`
    Sine,
}

impl Profile {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            Profile::Linear => t,
            Profile::Sine => (PI * t).sin(),
        }
    }

    /// `g(t + r) - g(t)` without cancellation for small `r`.
    pub fn increment(self, t: f64, r: f64) -> f64 {
        match self {
            Profile::Linear => r,
            Profile::Sine => sine_increment(PI, t, r),
        }
    }

    /// `(g(t + r) - g(t)) / r`.
    pub fn slope(self, t: f64, r: f64) -> f64 {
        match self {
            Profile::Linear => 1.0,
            Profile::Sine => {
                let half = 0.5 * PI * r;
                let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
                PI * (PI * (t + 0.5 * r)).cos() * sinc
            }
        }
    }

    pub fn lipschitz(self) -> f64 {
        match self {
            Profile::Linear => 1.0,
            Profile::Sine => PI,
        }
    }
}

/// `sin(w(x + h)) - sin(w x) = 2 cos(w(x + h/2)) sin(w h / 2)`.
fn sine_increment(w: f64, x: f64, h: f64) -> f64 {
    2.0 * (w * (x + 0.5 * h)).cos() * (0.5 * w * h).sin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum Family {
    Constant,
    /// `u(x) = a · x'`
    PlanarLinear { a: Vec<f64> },
    /// `u(x) = Π sin(k_i π x_i)`
    PlanarSine { k: Vec<u32> },
    /// `u(x) = g(x_d / ε)`
    Vertical { profile: Profile },
    /// planar plus vertical
    Sum {
        planar: Box<TestFunction>,
        vertical: Box<TestFunction>,
    },
}

/// `amplitude · family(x) + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub family: Family,
    pub amplitude: f64,
    pub offset: f64,
}

impl TestFunction {
    fn plain(family: Family) -> Self {
        Self {
            family,
            amplitude: 1.0,
            offset: 0.0,
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            offset: value,
            ..Self::plain(Family::Constant)
        }
    }

    pub fn planar_linear(a: Vec<f64>) -> Self {
        Self::plain(Family::PlanarLinear { a })
    }

    pub fn planar_sine(k: Vec<u32>) -> Self {
        Self::plain(Family::PlanarSine { k })
    }

    pub fn vertical(profile: Profile) -> Self {
        Self::plain(Family::Vertical { profile })
    }

    pub fn sum(planar: TestFunction, vertical: TestFunction) -> Result<Self> {
        if !planar.is_planar() || !vertical.is_vertical() {
            return Err(Error::usage("a sum needs one planar and one vertical member"));
        }
        Ok(Self::plain(Family::Sum {
            planar: Box::new(planar),
            vertical: Box::new(vertical),
        }))
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            family: self.family.clone(),
            amplitude: self.amplitude * c,
            offset: self.offset * c,
        }
    }

    /// `f + c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            offset: self.offset + c,
            ..self.clone()
        }
    }

    /// Independent of `x_d`.
    pub fn is_planar(&self) -> bool {
        matches!(
            self.family,
            Family::Constant | Family::PlanarLinear { .. } | Family::PlanarSine { .. }
        )
    }

    /// Independent of `x'`.
    pub fn is_vertical(&self) -> bool {
        matches!(self.family, Family::Constant | Family::Vertical { .. })
    }

    /// True when every difference vanishes.
    pub fn is_constant(&self) -> bool {
        self.amplitude == 0.0
            || match &self.family {
                Family::Constant => true,
                Family::PlanarLinear { a } => a.iter().all(|v| *v == 0.0),
                Family::PlanarSine { .. } | Family::Vertical { .. } => false,
                Family::Sum { planar, vertical } => planar.is_constant() && vertical.is_constant(),
            }
    }

    /// The planar component, scaled by the outer amplitude.
    pub fn planar_part(&self) -> Option<TestFunction> {
        match &self.family {
            Family::Sum { planar, .. } => Some(planar.scaled(self.amplitude)),
            _ if self.is_planar() => Some(self.clone()),
            _ => None,
        }
    }

    /// The vertical profile and its total coefficient.
    pub fn vertical_part(&self) -> Option<(Profile, f64)> {
        match &self.family {
            Family::Vertical { profile } => Some((*profile, self.amplitude)),
            Family::Sum { vertical, .. } => vertical
                .vertical_part()
                .map(|(g, c)| (g, c * self.amplitude)),
            _ => None,
        }
    }

    /// The vertical member of a sum (or the function itself), scaled by the outer amplitude.
    pub fn vertical_component(&self) -> Option<TestFunction> {
        match &self.family {
            Family::Vertical { .. } => Some(self.clone()),
            Family::Sum { vertical, .. } => Some(vertical.scaled(self.amplitude)),
            _ => None,
        }
    }

    /// Checks that planar coefficients match a base of dimension `d - 1`.
    pub fn check_dimension(&self, d: u32) -> Result<()> {
        let n = d as usize - 1;
        let got = match &self.family {
            Family::PlanarLinear { a } => Some(a.len()),
            Family::PlanarSine { k } => Some(k.len()),
            Family::Sum { planar, .. } => return planar.check_dimension(d),
            _ => None,
        };
        match got {
            Some(m) if m != n => Err(Error::usage(format!(
                "{self} has {m} planar coefficients but the base has dimension {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// `f(x)` on `Ω_ε`; the thin coordinate is the last entry of `x`.
    pub fn evaluate(&self, x: &[f64], eps: f64) -> f64 {
        let n = x.len() - 1;
        let raw = match &self.family {
            Family::Constant => 0.0,
            Family::PlanarLinear { a } => a.iter().zip(&x[..n]).map(|(ai, xi)| ai * xi).sum(),
            Family::PlanarSine { k } => k
                .iter()
                .zip(&x[..n])
                .map(|(ki, xi)| (*ki as f64 * PI * xi).sin())
                .product(),
            Family::Vertical { profile } => profile.eval(x[n] / eps),
            Family::Sum { planar, vertical } => planar.evaluate(x, eps) + vertical.evaluate(x, eps),
        };
        self.amplitude * raw + self.offset
    }

    /// `f(x + ξ) - f(x)` computed from increment identities.
    pub fn difference(&self, x: &[f64], xi: &[f64], eps: f64) -> f64 {
        let n = x.len() - 1;
        let raw = match &self.family {
            Family::Constant => 0.0,
            Family::PlanarLinear { a } => a.iter().zip(&xi[..n]).map(|(ai, h)| ai * h).sum(),
            Family::PlanarSine { k } => {
                // telescoping over factors: Π s'_i - Π s_i = Σ_i (Π_{j<i} s_j)(s'_i - s_i)(Π_{j>i} s'_j)
                let mut total = 0.0;
                for i in 0..k.len() {
                    let w = k[i] as f64 * PI;
                    let mut term = sine_increment(w, x[i], xi[i]);
                    for j in 0..i {
                        term *= (k[j] as f64 * PI * x[j]).sin();
                    }
                    for j in i + 1..k.len() {
                        term *= (k[j] as f64 * PI * (x[j] + xi[j])).sin();
                    }
                    total += term;
                }
                total
            }
            Family::Vertical { profile } => profile.increment(x[n] / eps, xi[n] / eps),
            Family::Sum { planar, vertical } => {
                planar.difference(x, xi, eps) + vertical.difference(x, xi, eps)
            }
        };
        self.amplitude * raw
    }

    /// Whether `f(x + ξ) - f(x)` depends on `x'` and on `x_d` respectively.
    pub fn difference_dependence(&self) -> (bool, bool) {
        if self.is_constant() {
            return (false, false);
        }
        match &self.family {
            Family::Constant | Family::PlanarLinear { .. } => (false, false),
            Family::PlanarSine { .. } => (true, false),
            Family::Vertical { profile } => (false, *profile == Profile::Sine),
            Family::Sum { planar, vertical } => {
                let (a, _) = planar.difference_dependence();
                let (_, b) = vertical.difference_dependence();
                (a, b)
            }
        }
    }

    /// A Lipschitz constant on `Ω̄_ε`.
    pub fn lipschitz(&self, eps: f64) -> f64 {
        let raw = match &self.family {
            Family::Constant => 0.0,
            Family::PlanarLinear { a } => a.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Family::PlanarSine { k } => PI * k.iter().map(|v| (*v as f64).powi(2)).sum::<f64>().sqrt(),
            Family::Vertical { profile } => profile.lipschitz() / eps,
            Family::Sum { planar, vertical } => planar.lipschitz(eps) + vertical.lipschitz(eps),
        };
        self.amplitude.abs() * raw
    }

    /// `∇' f(x')`.
    pub fn planar_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let raw = match &self.family {
            Family::Constant => vec![0.0; x.len()],
            Family::PlanarLinear { a } => a.clone(),
            Family::PlanarSine { k } => (0..k.len())
                .map(|i| {
                    let w = k[i] as f64 * PI;
                    (0..k.len())
                        .map(|j| {
                            let wj = k[j] as f64 * PI;
                            if i == j {
                                w * (w * x[j]).cos()
                            } else {
                                (wj * x[j]).sin()
                            }
                        })
                        .product()
                })
                .collect(),
            Family::Vertical { .. } => {
                return Err(Error::Unsupported(format!("{self} has no planar gradient")))
            }
            Family::Sum { planar, .. } => planar.planar_gradient(x)?,
        };
        Ok(raw.into_iter().map(|g| self.amplitude * g).collect())
    }

    /// `∫_ω |∇' f|^p dx'`; vertical components contribute nothing.
    pub fn dirichlet_planar(&self, base: &BaseDomain, p: f64) -> Result<f64> {
        let Some(planar) = self.planar_part() else {
            return Err(Error::Unsupported(format!("{self} has no planar component")));
        };
        planar.check_dimension(base.dim() as u32 + 1)?;
        let amp = planar.amplitude.abs().powf(p);
        match &planar.family {
            Family::Constant => Ok(0.0),
            Family::PlanarLinear { a } => {
                let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
                Ok(amp * norm.powf(p) * base.measure())
            }
            Family::PlanarSine { k } => {
                let (o, e) = (base.origin(), base.extents());
                if (p - 2.0).abs() < 1e-15 {
                    // separable: Σ_i (k_i π)² ∫cos² · Π_{j≠i} ∫sin²
                    let total: f64 = (0..k.len())
                        .map(|i| {
                            let w = k[i] as f64 * PI;
                            let mut term = w * w * cos2_integral(w, o[i], o[i] + e[i]);
                            for j in (0..k.len()).filter(|j| *j != i) {
                                let wj = k[j] as f64 * PI;
                                term *= e[j] - cos2_integral(wj, o[j], o[j] + e[j]);
                            }
                            term
                        })
                        .sum();
                    return Ok(amp * total);
                }
                if k.len() == 1 && aligned(k[0], o[0]) && aligned(k[0], o[0] + e[0]) {
                    // whole half-periods: mean of |cos|^p is Γ((p+1)/2)/(√π Γ(p/2+1))
                    let w = k[0] as f64 * PI;
                    let mean = gamma((p + 1.0) / 2.0)? / (PI.sqrt() * gamma(p / 2.0 + 1.0)?);
                    return Ok(amp * w.powf(p) * e[0] * mean);
                }
                let grad_p = |x: &[f64]| -> f64 {
                    let g = planar.planar_gradient(x).expect("planar family");
                    g.iter().map(|v| v * v).sum::<f64>().powf(p / 2.0)
                };
                integrate_box(&grad_p, o, e)
            }
            Family::Vertical { .. } | Family::Sum { .. } => unreachable!("planar_part is planar"),
        }
    }
}

fn aligned(k: u32, x: f64) -> bool {
    let v = k as f64 * x;
    (v - v.round()).abs() < 1e-12
}

/// `∫_a^b cos²(w x) dx`.
fn cos2_integral(w: f64, a: f64, b: f64) -> f64 {
    0.5 * (b - a) + ((2.0 * w * b).sin() - (2.0 * w * a).sin()) / (4.0 * w)
}

/// Adaptive (nested) quadrature over a box of dimension 1 or 2.
fn integrate_box(f: &dyn Fn(&[f64]) -> f64, origin: &[f64], extents: &[f64]) -> Result<f64> {
    let tol = Tolerance::relative(1e-10).with_abs(1e-14);
    match origin.len() {
        1 => Ok(quad::integrate(|x| f(&[x]), origin[0], origin[0] + extents[0], tol)?.value),
        2 => {
            let mut failure = None;
            let outer = quad::integrate(
                |x| match quad::integrate(|y| f(&[x, y]), origin[1], origin[1] + extents[1], tol) {
                    Ok(r) => r.value,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                origin[0],
                origin[0] + extents[0],
                tol,
            )?;
            match failure {
                Some(e) => Err(e),
                None => Ok(outer.value),
            }
        }
        n => Err(Error::domain(format!("box dimension {n} not supported"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    DirichletPlanar,
    Seminorm1D,
    SeminormPlanar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub kind: ReferenceKind,
    pub value: f64,
    pub provenance: Provenance,
    /// Zero for closed forms.
    pub error_estimate: f64,
}

/// `∫₀^L∫₀^L |x - y|^{p-1-sp}`, i.e. the seminorm of the identity on an interval of length `L`:
/// `2 L^{β+2} / ((β+1)(β+2))` with `β = p - 1 - sp`.
pub fn linear_seminorm_1d(length: f64, s: f64, p: f64) -> f64 {
    let beta = p - 1.0 - s * p;
    2.0 * length.powf(beta + 2.0) / ((beta + 1.0) * (beta + 2.0))
}

/// `⌊g⌋^p_s(0, 1)`.
///
/// The linear profile has the closed form `2/((p-sp)(1+p-sp))`, which for
/// `p = 2` is `1/((1-s)(3-2s))`. Other profiles go through the graded 1-D
/// oracle at relative accuracy [`ORACLE_RTOL`].
pub fn reference_seminorm_1d(g: Profile, s: f64, p: f64) -> Result<ReferenceValue> {
    if !(s > 0.0 && s < 1.0) || !(p >= 1.0) {
        return Err(Error::domain(format!("need 0 < s < 1 and p >= 1, got s = {s}, p = {p}")));
    }
    match g {
        Profile::Linear => Ok(ReferenceValue {
            kind: ReferenceKind::Seminorm1D,
            value: linear_seminorm_1d(1.0, s, p),
            provenance: Provenance::ClosedForm,
            error_estimate: 0.0,
        }),
        Profile::Sine => {
            let r = quad::seminorm_1d(|t, r| g.slope(t, r), 1.0, s, p, ORACLE_RTOL)?;
            Ok(ReferenceValue {
                kind: ReferenceKind::Seminorm1D,
                value: r.value,
                provenance: Provenance::Oracle,
                error_estimate: r.error,
            })
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: Vec<String>| v.join(",");
        match &self.family {
            Family::Constant => return write!(f, "constant:c={}", self.offset),
            Family::PlanarLinear { a } => {
                write!(f, "planar-linear:a={}", list(a.iter().map(|v| v.to_string()).collect()))?
            }
            Family::PlanarSine { k } => {
                write!(f, "planar-sine:k={}", list(k.iter().map(|v| v.to_string()).collect()))?
            }
            Family::Vertical { profile: Profile::Linear } => write!(f, "vertical-linear")?,
            Family::Vertical { profile: Profile::Sine } => write!(f, "vertical-sine")?,
            Family::Sum { planar, vertical } => {
                if self.amplitude != 1.0 || self.offset != 0.0 {
                    return write!(f, "{}+{}", planar.scaled(self.amplitude), vertical.scaled(self.amplitude).shifted(self.offset));
                }
                return write!(f, "{planar}+{vertical}");
            }
        }
        let sep = |f: &mut fmt::Formatter<'_>, first: bool| if first { write!(f, ":") } else { write!(f, ";") };
        let has_params = !matches!(self.family, Family::Vertical { .. });
        let mut first = !has_params;
        if self.amplitude != 1.0 {
            sep(f, first)?;
            write!(f, "c={}", self.amplitude)?;
            first = false;
        }
        if self.offset != 0.0 {
            sep(f, first)?;
            write!(f, "shift={}", self.offset)?;
        }
        Ok(())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Parses tags such as `planar-linear:a=1`, `planar-sine:k=1,2`,
    /// `vertical-sine:c=2` and `planar-linear:a=1+vertical-linear`.
    fn from_str(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        if let Some((left, right)) = tag.split_once('+') {
            let a: TestFunction = left.parse()?;
            let b: TestFunction = right.parse()?;
            return if a.is_planar() && b.is_vertical() {
                TestFunction::sum(a, b)
            } else if b.is_planar() && a.is_vertical() {
                TestFunction::sum(b, a)
            } else {
                Err(Error::Parse(format!("'{tag}': a sum needs one planar and one vertical member")))
            };
        }
        let (name, params) = tag.split_once(':').unwrap_or((tag, ""));
        let mut coeffs: Option<Vec<f64>> = None;
        let mut amplitude = None;
        let mut offset = 0.0;
        for pair in params.split(';').filter(|s| !s.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("'{pair}' is not key=value")))?;
            let number = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("'{v}' is not a number in '{tag}'")))
            };
            match key.trim() {
                "a" | "k" => coeffs = Some(value.split(',').map(number).collect::<Result<_>>()?),
                "c" => amplitude = Some(number(value)?),
                "shift" => offset = number(value)?,
                other => return Err(Error::Parse(format!("unknown parameter '{other}' in '{tag}'"))),
            }
        }
        let family = match name {
            "constant" => return Ok(TestFunction::constant(amplitude.unwrap_or(0.0) + offset)),
            "planar-linear" => Family::PlanarLinear {
                a: coeffs.unwrap_or_else(|| vec![1.0]),
            },
            "planar-sine" => {
                let k = coeffs.unwrap_or_else(|| vec![1.0]);
                if k.iter().any(|v| *v < 1.0 || v.fract() != 0.0) {
                    return Err(Error::Parse(format!("wave numbers must be positive integers in '{tag}'")));
                }
                Family::PlanarSine {
                    k: k.into_iter().map(|v| v as u32).collect(),
                }
            }
            "vertical-linear" => Family::Vertical { profile: Profile::Linear },
            "vertical-sine" => Family::Vertical { profile: Profile::Sine },
            other => return Err(Error::Parse(format!("unknown test function '{other}'"))),
        };
        Ok(TestFunction {
            family,
            amplitude: amplitude.unwrap_or(1.0),
            offset,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(tag: &str) -> TestFunction {
        tag.parse().unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let x = [0.4, 0.01];
        assert!((tf("planar-linear:a=1").evaluate(&x, 0.1) - 0.4).abs() < 1e-15);
        let y = [0.7, 0.05];
        assert!((tf("vertical-linear").evaluate(&y, 0.1) - 0.5).abs() < 1e-15);
        let sum = tf("planar-linear:a=1+vertical-linear");
        assert!((sum.evaluate(&[0.4, 0.05], 0.1) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(tf("planar-linear:a=2,1").planar_gradient(&[0.3, 0.3]).unwrap(), vec![2.0, 1.0]);
        assert!(tf("planar-sine:k=1").planar_gradient(&[0.5]).unwrap()[0].abs() < 1e-15);
        assert!((tf("planar-sine:k=1").planar_gradient(&[0.0]).unwrap()[0] - PI).abs() < 1e-15);
        assert!(matches!(
            tf("vertical-sine").planar_gradient(&[0.5]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn dirichlet_examples() {
        let line = BaseDomain::unit_interval();
        let sq = BaseDomain::unit_square();
        assert!((tf("planar-linear:a=1").dirichlet_planar(&line, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let sine = tf("planar-sine:k=1").dirichlet_planar(&line, 2.0).unwrap();
        assert!((sine - PI * PI / 2.0).abs() < 1e-13);
        assert!((tf("planar-linear:a=1,1").dirichlet_planar(&sq, 2.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dirichlet_routes_agree() {
        let line = BaseDomain::unit_interval();
        let f = tf("planar-sine:k=2");
        let closed = f.dirichlet_planar(&line, 3.0).unwrap();
        let shifted = BaseDomain::interval(1.0).unwrap().with_origin(vec![1e-9]).unwrap();
        let quad = f.dirichlet_planar(&shifted, 3.0).unwrap();
        assert!((closed - quad).abs() / closed < 1e-7, "{closed} vs {quad}");
        let sq = BaseDomain::rectangle(0.7, 1.0).unwrap();
        let g = tf("planar-sine:k=1,2");
        let sep = g.dirichlet_planar(&sq, 2.0).unwrap();
        let grad2 = |x: &[f64]| g.planar_gradient(x).unwrap().iter().map(|v| v * v).sum::<f64>();
        let nested = integrate_box(&grad2, sq.origin(), sq.extents()).unwrap();
        assert!((sep - nested).abs() / sep < 1e-9);
    }

    #[test]
    fn difference_matches_evaluation() {
        let eps = 0.2;
        let cases: [(&str, &[f64], &[f64]); 4] = [
            ("planar-sine:k=1,3", &[0.31, 0.47, 0.05], &[0.013, -0.021, 0.07]),
            ("planar-linear:a=1,-2", &[0.31, 0.47, 0.05], &[0.013, -0.021, 0.07]),
            ("vertical-sine", &[0.31, 0.05], &[0.013, 0.07]),
            ("planar-sine:k=2+vertical-sine", &[0.31, 0.05], &[0.013, 0.07]),
        ];
        for (tag, x, h) in cases {
            let f = tf(tag);
            let y: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + b).collect();
            let direct = f.evaluate(&y, eps) - f.evaluate(x, eps);
            assert!((f.difference(x, h, eps) - direct).abs() < 1e-13, "{tag}");
        }
    }

    #[test]
    fn tags_round_trip() {
        for tag in [
            "planar-linear:a=1",
            "planar-linear:a=2,1",
            "planar-sine:k=1",
            "vertical-linear",
            "vertical-sine:c=2",
            "planar-linear:a=1;c=3;shift=0.5",
            "planar-sine:k=1+vertical-linear",
            "constant:c=2",
        ] {
            let f = tf(tag);
            assert_eq!(f.to_string().parse::<TestFunction>().unwrap(), f, "{tag}");
        }
        assert!("wiggly".parse::<TestFunction>().is_err());
        assert!("planar-sine:k=0.5".parse::<TestFunction>().is_err());
        assert!("planar-linear+planar-sine".parse::<TestFunction>().is_err());
    }

    #[test]
    fn reference_linear_closed_form() {
        let r = reference_seminorm_1d(Profile::Linear, 0.5, 2.0).unwrap();
        assert_eq!(r.provenance, Provenance::ClosedForm);
        assert!((r.value - 1.0).abs() < 1e-15);
        let near_one = reference_seminorm_1d(Profile::Linear, 0.99, 2.0).unwrap().value;
        assert!((0.01 * near_one - 1.0).abs() < 0.02);
        let p3 = reference_seminorm_1d(Profile::Linear, 0.4, 3.0).unwrap().value;
        let oracle = quad::seminorm_1d(|_, _| 1.0, 1.0, 0.4, 3.0, 1e-10).unwrap().value;
        assert!((p3 - oracle).abs() / p3 < 1e-9);
    }

    #[test]
    fn reference_sine_is_oracle() {
        let r = reference_seminorm_1d(Profile::Sine, 0.3, 2.0).unwrap();
        assert_eq!(r.provenance, Provenance::Oracle);
        assert!(r.value > 0.0);
        assert!(r.error_estimate <= 1e-7 * r.value);
    }
}
