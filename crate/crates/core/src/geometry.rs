//! Model geometries: the disc with rotations, the upper half-plane with
//! translations, and the upper half-plane with dilations realised on the
//! strip `ℝ × (0, π)`.

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// One of the three model geometries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelGeometry<T> {
    /// Punctured unit disc, circle group acting by rotation, fiber `(0, ∞)`.
    Elliptic,
    /// Upper half-plane, real line acting by translation, fiber `(0, ∞)`.
    Parabolic { lambda: T },
    /// Upper half-plane, positive reals acting by dilation, fiber `(0, π)`.
    Hyperbolic { lambda: T },
}

/// Open fiber interval; `upper == None` stands for `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberDomain<T> {
    pub lower: T,
    pub upper: Option<T>,
}

impl<T: Real> FiberDomain<T> {
    pub fn contains(&self, y: T) -> bool {
        y > self.lower && self.upper.map_or(y.is_finite(), |u| y < u)
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_some()
    }
}

/// A point of the dual group: an integer for the circle, a real otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DualFrequency<T> {
    Integer(i64),
    Real(T),
}

impl<T: Real> DualFrequency<T> {
    pub fn value(&self) -> T {
        match *self {
            DualFrequency::Integer(n) => T::of_i64(n),
            DualFrequency::Real(x) => x,
        }
    }
}

fn check_lambda<T: Real>(lambda: T) -> Result<T> {
    if lambda > -T::one() && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::Domain(format!("weight exponent must exceed -1, got {lambda}")))
    }
}

impl<T: Real> ModelGeometry<T> {
    pub fn parabolic(lambda: T) -> Result<Self> {
        Ok(ModelGeometry::Parabolic { lambda: check_lambda(lambda)? })
    }

    pub fn hyperbolic(lambda: T) -> Result<Self> {
        Ok(ModelGeometry::Hyperbolic { lambda: check_lambda(lambda)? })
    }

    /// Re-checks the weight exponent of a geometry built by hand.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelGeometry::Elliptic => Ok(()),
            ModelGeometry::Parabolic { lambda } | ModelGeometry::Hyperbolic { lambda } => check_lambda(lambda).map(|_| ()),
        }
    }

    /// Weight exponent; the disc carries none and reports 0.
    pub fn lambda(&self) -> T {
        match *self {
            ModelGeometry::Elliptic => T::zero(),
            ModelGeometry::Parabolic { lambda } | ModelGeometry::Hyperbolic { lambda } => lambda,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelGeometry::Elliptic => "elliptic",
            ModelGeometry::Parabolic { .. } => "parabolic",
            ModelGeometry::Hyperbolic { .. } => "hyperbolic",
        }
    }

    pub fn fiber_domain(&self) -> FiberDomain<T> {
        match self {
            ModelGeometry::Elliptic | ModelGeometry::Parabolic { .. } => FiberDomain { lower: T::zero(), upper: None },
            ModelGeometry::Hyperbolic { .. } => FiberDomain { lower: T::zero(), upper: Some(T::PI()) },
        }
    }

    /// Whether the dual group is `ℤ` (circle) rather than `ℝ`.
    pub fn has_discrete_dual(&self) -> bool {
        matches!(self, ModelGeometry::Elliptic)
    }

    /// Exponential decay rate of the fiber density at infinity (0 when the
    /// density is not exponentially decaying or the fiber is bounded).
    pub fn density_decay_rate(&self) -> T {
        match self {
            ModelGeometry::Elliptic => T::lit(4.0) * T::PI(),
            _ => T::zero(),
        }
    }
}

/// Density of the fiber measure at an interior point `y`.
pub fn fiber_density<T: Real>(g: &ModelGeometry<T>, y: T) -> Result<T> {
    if !g.fiber_domain().contains(y) {
        return Err(Error::Domain(format!("y = {y} is outside the open fiber domain of the {} model", g.name())));
    }
    Ok(density_unchecked(g, y))
}

/// [`fiber_density`] without the domain check, for quadrature inner loops
/// whose nodes are interior by construction.
#[inline]
pub(crate) fn density_unchecked<T: Real>(g: &ModelGeometry<T>, y: T) -> T {
    let two = T::lit(2.0);
    match *g {
        ModelGeometry::Elliptic => {
            let four_pi = T::lit(4.0) * T::PI();
            four_pi * (-four_pi * y).exp()
        }
        ModelGeometry::Parabolic { lambda } => {
            if lambda == T::zero() {
                T::one()
            } else {
                (lambda + T::one()) * (two * y).powf(lambda)
            }
        }
        ModelGeometry::Hyperbolic { lambda } => {
            if lambda == T::zero() {
                T::one()
            } else {
                (lambda + T::one()) * two.powf(lambda) * y.sin().powf(lambda)
            }
        }
    }
}

/// Coordinate map from the model space `G × Y` onto the geometric domain.
pub fn map_to_domain<T: Real>(g: &ModelGeometry<T>, x: T, y: T) -> Complex<T> {
    match g {
        ModelGeometry::Elliptic => {
            let tp = T::two_pi();
            Complex::from_polar((-tp * y).exp(), tp * x)
        }
        ModelGeometry::Parabolic { .. } => Complex::new(x, y),
        ModelGeometry::Hyperbolic { .. } => Complex::from_polar(x.exp(), y),
    }
}

/// `r = e^{-2π y}`, taking the disc fiber coordinate to the radius.
pub fn radial_change<T: Real>(y: T) -> Result<T> {
    if y > T::zero() && y.is_finite() {
        Ok((-T::two_pi() * y).exp())
    } else {
        Err(Error::Domain(format!("radial change needs y > 0, got {y}")))
    }
}

/// Inverse of [`radial_change`]: `y = -ln(r) / 2π`.
pub fn radial_change_inverse<T: Real>(r: T) -> Result<T> {
    if r > T::zero() && r < T::one() {
        Ok(-r.ln() / T::two_pi())
    } else {
        Err(Error::Domain(format!("inverse radial change needs r in (0, 1), got {r}")))
    }
}

/// `T_λ f(z) = e^{(λ/2 + 1) z} f(e^z)`, pulling a half-plane function back
/// to the strip.
pub fn t_lambda_apply<T: Real, F: Fn(Complex<T>) -> Complex<T>>(f: F, lambda: T, z: Complex<T>) -> Complex<T> {
    let factor = (z * (lambda * T::lit(0.5) + T::one())).exp();
    factor * f(z.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_halfline, integrate_interval, QuadConfig};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn density_examples() {
        let e = ModelGeometry::<f64>::Elliptic;
        assert_relative_eq!(fiber_density(&e, 0.001).unwrap(), 4.0 * PI * (-0.004 * PI).exp(), max_relative = 1e-15);
        assert_relative_eq!(fiber_density(&e, 0.001).unwrap(), 12.409_5, max_relative = 1e-5);
        let p = ModelGeometry::parabolic(0.0).unwrap();
        assert_eq!(fiber_density(&p, 3.7).unwrap(), 1.0);
        let h = ModelGeometry::hyperbolic(0.0).unwrap();
        assert_eq!(fiber_density(&h, PI / 2.0).unwrap(), 1.0);
    }

    #[test]
    fn density_rejects_outside_points() {
        let h = ModelGeometry::hyperbolic(0.5).unwrap();
        assert!(fiber_density(&h, 0.0).is_err());
        assert!(fiber_density(&h, PI).is_err());
        assert!(fiber_density(&ModelGeometry::<f64>::Elliptic, -1.0).is_err());
        assert!(ModelGeometry::parabolic(-1.0).is_err());
        assert!(ModelGeometry::hyperbolic(f64::NAN).is_err());
    }

    #[test]
    fn densities_are_nonnegative() {
        for lambda in [-0.5, 0.0, 1.0, 2.5] {
            for g in [ModelGeometry::parabolic(lambda).unwrap(), ModelGeometry::hyperbolic(lambda).unwrap()] {
                for k in 1..60 {
                    let y = k as f64 * 0.05;
                    if g.fiber_domain().contains(y) {
                        assert!(fiber_density(&g, y).unwrap() >= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn elliptic_density_has_unit_mass() {
        let g = ModelGeometry::<f64>::Elliptic;
        let r = integrate_halfline(|y| Complex::new(density_unchecked(&g, y), 0.0), 4.0 * PI, &QuadConfig::default());
        assert!((r.value.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hyperbolic_density_mass_matches_beta_integral() {
        // density 4 sin y at λ = 1, mass 8
        let g = ModelGeometry::hyperbolic(1.0).unwrap();
        let r = integrate_interval(|y| Complex::new(density_unchecked(&g, y), 0.0), 0.0, PI, &QuadConfig::default());
        assert!((r.value.re - 8.0).abs() < 1e-12);
    }

    #[test]
    fn coordinate_maps() {
        let w = map_to_domain(&ModelGeometry::Elliptic, 0.0, 0.1);
        assert_relative_eq!(w.re, (-0.2 * PI).exp(), max_relative = 1e-15);
        assert!(w.im.abs() < 1e-16);
        assert_relative_eq!(w.re, 0.533_488, max_relative = 1e-5);
        let p = ModelGeometry::parabolic(0.0).unwrap();
        assert_eq!(map_to_domain(&p, 1.0, 2.0), Complex::new(1.0, 2.0));
        let h = ModelGeometry::hyperbolic(0.0).unwrap();
        let i = map_to_domain(&h, 0.0, PI / 2.0);
        assert!((i - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn radial_change_examples() {
        assert!((radial_change((2f64).ln() / (2.0 * PI)).unwrap() - 0.5).abs() < 1e-15);
        let near = radial_change(1e-6).unwrap();
        assert!(near < 1.0 && near > radial_change(2e-6).unwrap());
        assert!(radial_change(0.0).is_err());
        assert!(radial_change_inverse(1.0).is_err());
        assert!(radial_change_inverse(0.0).is_err());
    }

    #[test]
    fn radial_pushforward_of_density() {
        // ∫_0^1 r^4 2r dr = ∫_0^∞ e^{-8πy} 4π e^{-4πy} dy = 1/3
        let g = ModelGeometry::<f64>::Elliptic;
        let cfg = QuadConfig::default();
        let disc = integrate_interval(|r: f64| Complex::new(r.powi(4) * 2.0 * r, 0.0), 0.0, 1.0, &cfg);
        let fiber = integrate_halfline(
            |y| Complex::new(radial_change(y).unwrap_or(1.0).powi(4) * density_unchecked(&g, y), 0.0),
            12.0 * PI,
            &cfg,
        );
        assert!((disc.value.re - 1.0 / 3.0).abs() < 1e-14);
        assert!((fiber.value.re - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn t_lambda_examples() {
        let i = Complex::new(0.0, 1.0);
        let z = Complex::new(0.0, PI / 2.0);
        assert!((t_lambda_apply(|_| Complex::new(1.0, 0.0), 0.0, z) - i).norm() < 1e-15);
        let z2 = Complex::new(0.3, 1.1);
        assert!((t_lambda_apply(|w: Complex<f64>| w.inv(), 0.0, z2) - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let v = t_lambda_apply(|w: Complex<f64>| (i * w).exp(), 0.0, z);
        assert!((v - i * (-1f64).exp()).norm() < 1e-15);
    }

    #[test]
    fn f32_instantiation() {
        let g = ModelGeometry::<f32>::Elliptic;
        assert!((fiber_density(&g, 0.001f32).unwrap() - 12.4095).abs() < 1e-3);
    }
}
