//! Gamma function: real `ln Γ`, complex `ln Γ`, and `|Γ(z)|`.
//!
//! All routines use the 15-term Lanczos series with `g = 607/128`
//! (Godfrey's coefficient set), which is accurate to a few ulps of `f64`
//! on `Re z >= 1/2`. The left half-plane is reached through the reflection
//! formula `Γ(z) Γ(1 - z) = π / sin(π z)`.

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// Point in the complex plane at which `|Γ|` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPoint<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> ComplexPoint<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }
}

impl<T: Real> From<Complex<T>> for ComplexPoint<T> {
    fn from(z: Complex<T>) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl<T: Real> From<ComplexPoint<T>> for Complex<T> {
    fn from(z: ComplexPoint<T>) -> Self {
        Complex::new(z.re, z.im)
    }
}

/// `ln sqrt(2π)`.
fn ln_sqrt_2pi<T: Real>() -> T {
    T::lit(0.918_938_533_204_672_8)
}

/// Lanczos `ln Γ(z)` for `Re z >= 1/2`.
fn lanczos_ln_gamma_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let zm1 = z - T::one();
    let mut series = Complex::new(T::lit(LANCZOS_COEFFS[0]), T::zero());
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += Complex::new(T::lit(c), T::zero()) / (zm1 + T::of_usize(k));
    }
    let t = zm1 + T::lit(LANCZOS_G + 0.5);
    (zm1 + T::lit(0.5)) * t.ln() - t + ln_sqrt_2pi::<T>() + series.ln()
}

fn lanczos_ln_gamma_real<T: Real>(x: T) -> T {
    let xm1 = x - T::one();
    let mut series = T::lit(LANCZOS_COEFFS[0]);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += T::lit(c) / (xm1 + T::of_usize(k));
    }
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    (xm1 + T::lit(0.5)) * t.ln() - t + ln_sqrt_2pi::<T>() + series.ln()
}

fn is_pole<T: Real>(re: T, im: T) -> bool {
    if im.abs() >= T::lit(1e-14) || re > T::lit(1e-12) {
        return false;
    }
    (re - re.round()).abs() < T::lit(1e-12)
}

/// `ln |sin(π (a + ib))|`, stable for large `|b|`.
fn ln_abs_sin_pi<T: Real>(a: T, b: T) -> T {
    let pi = T::PI();
    let t = (pi * b).abs();
    let s = (pi * a).sin();
    if t > T::lit(30.0) {
        // |sin|^2 = sinh^2(t) + sin^2(πa) = e^{2t}/4 (1 + O(e^{-2t}))
        t - T::LN_2() + T::lit(0.5) * ((s * s - T::lit(0.5)) * T::lit(4.0) * (-t - t).exp()).ln_1p()
    } else {
        let sh = t.sinh();
        T::lit(0.5) * (s * s + sh * sh).ln()
    }
}

/// Natural logarithm of `Γ(x)` for real `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < T::lit(0.5) {
        // Γ(x) = π / (sin(πx) Γ(1 - x)), sin(πx) > 0 on (0, 1/2)
        let pi = T::PI();
        return Ok(pi.ln() - (pi * x).sin().ln() - lanczos_ln_gamma_real(T::one() - x));
    }
    Ok(lanczos_ln_gamma_real(x))
}

/// Principal branch of `ln Γ(z)` (up to a multiple of `2πi` in the imaginary
/// part, which does not affect `exp`).
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if is_pole(z.re, z.im) {
        return Err(Error::Pole { re: z.re.to_f64().unwrap_or(f64::NAN), im: z.im.to_f64().unwrap_or(f64::NAN) });
    }
    if z.re < T::lit(0.5) {
        let pi = T::PI();
        let s = (z * pi).sin();
        return Ok(Complex::new(pi.ln(), T::zero()) - s.ln() - lanczos_ln_gamma_complex(Complex::new(T::one(), T::zero()) - z));
    }
    Ok(lanczos_ln_gamma_complex(z))
}

/// Complex `Γ(z)`.
pub fn gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    ln_gamma_complex(z).map(|l| l.exp())
}

/// `ln |Γ(z)|`, finite wherever `z` is not a pole.
pub fn ln_abs_gamma<T: Real>(z: ComplexPoint<T>) -> Result<T> {
    if is_pole(z.re, z.im) {
        return Err(Error::Pole { re: z.re.to_f64().unwrap_or(f64::NAN), im: z.im.to_f64().unwrap_or(f64::NAN) });
    }
    if z.re < T::lit(0.5) {
        let reflected = Complex::new(T::one() - z.re, -z.im);
        return Ok(T::PI().ln() - ln_abs_sin_pi(z.re, z.im) - lanczos_ln_gamma_complex(reflected).re);
    }
    Ok(lanczos_ln_gamma_complex(Complex::new(z.re, z.im)).re)
}

/// `|Γ(z)|`.
pub fn abs_gamma<T: Real>(z: ComplexPoint<T>) -> Result<T> {
    ln_abs_gamma(z).map(T::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// `|Γ(1 + iy)| = sqrt(π y / sinh(π y))`, evaluated without any Gamma routine.
    fn abs_gamma_one_plus_iy(y: f64) -> f64 {
        if y == 0.0 {
            return 1.0;
        }
        (PI * y / (PI * y).sinh()).sqrt()
    }

    #[test]
    fn ln_gamma_trivial_values() {
        assert!(ln_gamma(1.0f64).unwrap().abs() < 1e-15);
        assert!(ln_gamma(2.0f64).unwrap().abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_half_is_ln_sqrt_pi() {
        // Γ(1/2) = sqrt(π); the quadrature cross-check lives in the integration tests.
        assert_relative_eq!(ln_gamma(0.5f64).unwrap(), 0.572_364_942_924_700_1, max_relative = 1e-14);
    }

    #[test]
    fn ln_gamma_small_argument_uses_reflection() {
        // Γ(1/4) = 3.625609908221908...
        assert_relative_eq!(ln_gamma(0.25f64).unwrap(), 3.625_609_908_221_908_f64.ln(), max_relative = 1e-13);
    }

    #[test]
    fn ln_gamma_rejects_non_positive() {
        assert!(matches!(ln_gamma(0.0f64), Err(Error::Domain(_))));
        assert!(matches!(ln_gamma(-1.5f64), Err(Error::Domain(_))));
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn factorials_match() {
        let mut fact = 1.0f64;
        for n in 1..=20u32 {
            // Γ(n) = (n-1)!
            let g = ln_gamma(n as f64).unwrap().exp();
            assert_relative_eq!(g, fact, max_relative = 1e-12);
            fact *= n as f64;
        }
    }

    #[test]
    fn ln_gamma_large_argument() {
        // ln Γ(170) = ln(169!)
        let exact: f64 = (1..170).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(ln_gamma(170.0f64).unwrap(), exact, max_relative = 1e-13);
    }

    #[test]
    fn abs_gamma_examples() {
        assert_relative_eq!(abs_gamma(ComplexPoint::new(2.0f64, 0.0)).unwrap(), 1.0, max_relative = 1e-14);
        let z = abs_gamma(ComplexPoint::new(1.0f64, 1.0)).unwrap();
        assert_relative_eq!(z, (PI / PI.sinh()).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(z, 0.521_564_046_864_939_8, max_relative = 1e-12);
        let tau = 2.0 * PI;
        let w = abs_gamma(ComplexPoint::new(1.0f64, -tau)).unwrap();
        assert_relative_eq!(w, (2.0 * PI * PI / (2.0 * PI * PI).sinh()).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn sinh_identity() {
        for &y in &[0.1, 1.0, 5.0, 2.0 * PI] {
            let g = abs_gamma(ComplexPoint::new(1.0f64, y)).unwrap();
            let r = g * g * (PI * y).sinh() / (PI * y);
            assert!((r - 1.0).abs() < 1e-9, "y={y}: {r}");
            assert_relative_eq!(g, abs_gamma_one_plus_iy(y), max_relative = 1e-10);
        }
    }

    #[test]
    fn recurrence_on_grid() {
        let mut re = 0.5f64;
        while re <= 10.0 {
            let mut im = -20.0f64;
            while im <= 20.0 {
                let lhs = abs_gamma(ComplexPoint::new(re + 1.0, im)).unwrap();
                let rhs = re.hypot(im) * abs_gamma(ComplexPoint::new(re, im)).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
                im += 1.25;
            }
            re += 0.5;
        }
    }

    #[test]
    fn reflection_branch_agrees_with_recurrence() {
        // |Γ(z)| = |Γ(z + 1)| / |z| crosses from the reflection branch into the Lanczos branch.
        for &(re, im) in &[(0.3, 0.0), (-0.7, 0.4), (-2.5, 3.0), (0.1, -12.0), (-3.2, 45.0)] {
            let lhs = abs_gamma(ComplexPoint::new(re, im)).unwrap();
            let rhs = abs_gamma(ComplexPoint::new(re + 1.0, im)).unwrap() / f64::hypot(re, im);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn large_imaginary_part_stays_accurate() {
        for &y in &[20.0, 35.0, 50.0] {
            let lhs = ln_abs_gamma(ComplexPoint::new(1.0f64, y)).unwrap();
            let rhs = 0.5 * (PI * y).ln() - 0.5 * (PI * y).sinh().ln();
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn poles_are_rejected() {
        for re in [0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(abs_gamma(ComplexPoint::new(re, 0.0f64)), Err(Error::Pole { .. })));
        }
        assert!(abs_gamma(ComplexPoint::new(-1.0f64, 1e-3)).is_ok());
    }

    #[test]
    fn complex_gamma_matches_known_value() {
        // Γ(1 + i) = 0.4980156681183560 - 0.1549498283018107 i
        let g = gamma_complex(Complex::new(1.0f64, 1.0)).unwrap();
        assert_relative_eq!(g.re, 0.498_015_668_118_356, max_relative = 1e-13);
        assert_relative_eq!(g.im, -0.154_949_828_301_810_7, max_relative = 1e-13);
    }

    #[test]
    fn single_precision_instantiation() {
        let g = abs_gamma(ComplexPoint::new(1.0f32, 1.0)).unwrap();
        assert!((g - 0.521_564_05f32).abs() < 1e-5);
    }
}
