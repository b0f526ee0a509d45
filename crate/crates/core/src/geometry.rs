//! Thin-film domains `Ω_ε = ω × (0, ε)` over rectangular bases.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseShape {
    UnitInterval,
    UnitSquare,
}

/// The planar base `ω`, an axis-aligned interval or rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseDomain {
    shape: BaseShape,
    extents: Vec<f64>,
    origin: Vec<f64>,
}

impl BaseDomain {
    pub fn unit_interval() -> Self {
        Self::interval(1.0).expect("unit extent is valid")
    }

    pub fn unit_square() -> Self {
        Self::rectangle(1.0, 1.0).expect("unit extents are valid")
    }

    pub fn interval(length: f64) -> Result<Self> {
        Self::new(BaseShape::UnitInterval, vec![length])
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(BaseShape::UnitSquare, vec![a, b])
    }

    /// The unit interval for `d = 2`, the unit square for `d = 3`.
    pub fn unit_for_dimension(d: u32) -> Result<Self> {
        match d {
            2 => Ok(Self::unit_interval()),
            3 => Ok(Self::unit_square()),
            _ => Err(Error::domain(format!("d must be 2 or 3, got {d}"))),
        }
    }

    pub fn new(shape: BaseShape, extents: Vec<f64>) -> Result<Self> {
        let dim = match shape {
            BaseShape::UnitInterval => 1,
            BaseShape::UnitSquare => 2,
        };
        if extents.len() != dim {
            return Err(Error::domain(format!(
                "{shape:?} needs {dim} extents, got {}",
                extents.len()
            )));
        }
        if extents.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::domain(format!("extents must be positive and finite: {extents:?}")));
        }
        Ok(Self {
            shape,
            origin: vec![0.0; dim],
            extents,
        })
    }

    /// Translates the base so its lower corner sits at `origin`.
    pub fn with_origin(mut self, origin: Vec<f64>) -> Result<Self> {
        if origin.len() != self.dim() || origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::domain("origin must be finite with one entry per base axis"));
        }
        self.origin = origin;
        Ok(self)
    }

    pub fn shape(&self) -> BaseShape {
        self.shape
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn measure(&self) -> f64 {
        self.extents.iter().product()
    }

    pub fn diameter(&self) -> f64 {
        self.extents.iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    pub fn min_extent(&self) -> f64 {
        self.extents.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.origin)
                .zip(&self.extents)
                .all(|((xi, o), e)| *xi >= *o && *xi <= o + e)
    }

    /// `ω_τ`, the base shrunk by `tau` on every side.
    pub fn shrink(&self, tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || 2.0 * tau >= self.min_extent() {
            return Err(Error::domain(format!(
                "margin {tau} leaves an empty interior (min extent {})",
                self.min_extent()
            )));
        }
        Ok(Self {
            shape: self.shape,
            extents: self.extents.iter().map(|e| e - 2.0 * tau).collect(),
            origin: self.origin.iter().map(|o| o + tau).collect(),
        })
    }
}

/// `Ω_ε = ω × (0, ε)` together with an interior margin `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinFilm {
    base: BaseDomain,
    thickness: f64,
    margin: f64,
}

impl ThinFilm {
    pub fn new(base: BaseDomain, thickness: f64) -> Result<Self> {
        if !(thickness > 0.0 && thickness <= 1.0) {
            return Err(Error::domain(format!("thickness must lie in (0, 1], got {thickness}")));
        }
        Ok(Self {
            base,
            thickness,
            margin: 0.0,
        })
    }

    pub fn with_margin(mut self, tau: f64) -> Result<Self> {
        self.base.shrink(tau)?;
        self.margin = tau;
        Ok(self)
    }

    pub fn base(&self) -> &BaseDomain {
        &self.base
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Ambient dimension `d`.
    pub fn d(&self) -> u32 {
        self.base.dim() as u32 + 1
    }

    pub fn measure(&self) -> f64 {
        self.base.measure() * self.thickness
    }

    /// Side lengths of the box, the thin direction last.
    pub fn lengths(&self) -> Vec<f64> {
        let mut v = self.base.extents.clone();
        v.push(self.thickness);
        v
    }

    /// Lower corner of the box.
    pub fn corner(&self) -> Vec<f64> {
        let mut v = self.base.origin.clone();
        v.push(0.0);
        v
    }

    pub fn diameter(&self) -> f64 {
        self.lengths().iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let n = self.base.dim();
        x.len() == n + 1 && self.base.contains(&x[..n]) && x[n] >= 0.0 && x[n] <= self.thickness
    }

    /// `ω_τ`.
    pub fn interior_base(&self) -> BaseDomain {
        self.base.shrink(self.margin).expect("margin validated on construction")
    }

    /// `Ω_ε^τ = ω_τ × (0, ε)`.
    pub fn interior(&self) -> ThinFilm {
        ThinFilm {
            base: self.interior_base(),
            thickness: self.thickness,
            margin: 0.0,
        }
    }

    /// Same base and margin, new thickness.
    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        ThinFilm::new(self.base.clone(), thickness)?.with_margin(self.margin)
    }
}

/// Exponents `(d, s, p)` of the energy `∫∫ |u(x)-u(y)|^p / |x-y|^{d+sp}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    pub d: u32,
    pub s: f64,
    pub p: f64,
}

impl FractionalParams {
    pub fn new(d: u32, s: f64, p: f64) -> Result<Self> {
        if !(2..=3).contains(&d) {
            return Err(Error::domain(format!("d must be 2 or 3, got {d}")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain(format!("s must lie in (0, 1), got {s}")));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::domain(format!("p must be finite and >= 1, got {p}")));
        }
        Ok(Self { d, s, p })
    }

    pub fn quadratic(d: u32, s: f64) -> Result<Self> {
        Self::new(d, s, 2.0)
    }

    pub fn kernel_exponent(&self) -> f64 {
        self.d as f64 + self.s * self.p
    }

    pub fn with_s(&self, s: f64) -> Result<Self> {
        Self::new(self.d, s, self.p)
    }
}

/// A uniform point of `Ω_ε`.
pub fn sample_point<R: Rng + ?Sized>(film: &ThinFilm, rng: &mut R) -> Vec<f64> {
    film.corner()
        .iter()
        .zip(film.lengths())
        .map(|(c, l)| c + l * rng.random::<f64>())
        .collect()
}

/// `(x', x_d) ↦ (x', x_d / ε)`.
pub fn rescale_vertical(x: &[f64], film: &ThinFilm) -> Result<Vec<f64>> {
    if !film.contains(x) {
        return Err(Error::domain(format!("point {x:?} is outside the film")));
    }
    let mut y = x.to_vec();
    let last = y.len() - 1;
    y[last] /= film.thickness;
    Ok(y)
}

/// `(x', t) ↦ (x', ε t)`.
pub fn unscale_vertical(x: &[f64], film: &ThinFilm) -> Result<Vec<f64>> {
    let n = film.base.dim();
    if x.len() != n + 1 || !film.base.contains(&x[..n]) || !(0.0..=1.0).contains(&x[n]) {
        return Err(Error::domain(format!("point {x:?} is outside ω × (0, 1)")));
    }
    let mut y = x.to_vec();
    y[n] *= film.thickness;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn base_invariants() {
        assert!(BaseDomain::interval(0.0).is_err());
        assert!(BaseDomain::rectangle(1.0, f64::INFINITY).is_err());
        let sq = BaseDomain::rectangle(2.0, 0.5).unwrap();
        assert_eq!(sq.measure(), 1.0);
        assert!(sq.shrink(0.25).is_err());
        let inner = sq.shrink(0.1).unwrap();
        assert!((inner.measure() - 1.8 * 0.3).abs() < 1e-15);
        assert_eq!(inner.origin(), &[0.1, 0.1]);
    }

    #[test]
    fn film_measure_and_interior() {
        let film = ThinFilm::new(BaseDomain::unit_square(), 0.1).unwrap().with_margin(0.2).unwrap();
        assert_eq!(film.d(), 3);
        assert!((film.measure() - 0.1).abs() < 1e-15);
        assert!((film.interior().measure() - 0.036).abs() < 1e-15);
        assert!(ThinFilm::new(BaseDomain::unit_interval(), 0.0).is_err());
        assert!(ThinFilm::new(BaseDomain::unit_interval(), 1.5).is_err());
    }

    #[test]
    fn samples_are_contained() {
        let film = ThinFilm::new(BaseDomain::unit_interval(), 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = sample_point(&film, &mut rng);
            assert!(film.contains(&x));
        }
    }

    #[test]
    fn rescale_examples() {
        let film = ThinFilm::new(BaseDomain::unit_interval(), 0.1).unwrap();
        let y = rescale_vertical(&[0.3, 0.05], &film).unwrap();
        assert!((y[0] - 0.3).abs() < 1e-15 && (y[1] - 0.5).abs() < 1e-15);
        assert_eq!(rescale_vertical(&[0.3, 0.0], &film).unwrap(), vec![0.3, 0.0]);
        assert!(rescale_vertical(&[0.3, 0.2], &film).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(FractionalParams::new(4, 0.5, 2.0).is_err());
        assert!(FractionalParams::new(2, 1.0, 2.0).is_err());
        assert!(FractionalParams::new(2, 0.5, 0.5).is_err());
        let p = FractionalParams::new(3, 0.5, 3.0).unwrap();
        assert_eq!(p.kernel_exponent(), 4.5);
    }
}
