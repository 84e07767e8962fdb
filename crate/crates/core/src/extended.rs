//! Extended non-negative reals `[0, +inf]` with an explicit infinite state.

use std::fmt;

use crate::scalar::Real;

/// A value in `[0, +inf]`.
///
/// `Infinite` is absorbing under addition and multiplication by a positive
/// factor, and `1 / Infinite == 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Extended<T> {
    /// Wraps a float, mapping non-finite values to `Infinite`.
    pub fn from_float(x: T) -> Self {
        if x.is_finite() {
            Extended::Finite(x)
        } else {
            Extended::Infinite
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    /// Lossy view as a float (`+inf` for `Infinite`).
    pub fn to_float(&self) -> T {
        match *self {
            Extended::Finite(x) => x,
            Extended::Infinite => T::infinity(),
        }
    }

    /// `1 / self` with the convention `1 / inf = 0`. Returns `None` for `1 / 0`.
    pub fn recip(&self) -> Option<T> {
        match *self {
            Extended::Infinite => Some(T::zero()),
            Extended::Finite(x) if x == T::zero() => None,
            Extended::Finite(x) => Some(x.recip()),
        }
    }

    pub fn powf(&self, e: T) -> Self {
        match *self {
            Extended::Infinite => Extended::Infinite,
            Extended::Finite(x) => Extended::from_float(x.powf(e)),
        }
    }

    /// Multiplies by a non-negative factor. `0 * inf` is taken to be `0`,
    /// matching the convention that functions vanish where the weight is infinite.
    pub fn scale(&self, factor: T) -> Self {
        match *self {
            Extended::Infinite if factor == T::zero() => Extended::Finite(T::zero()),
            Extended::Infinite => Extended::Infinite,
            Extended::Finite(x) => Extended::from_float(x * factor),
        }
    }
}

impl<T: Real> std::ops::Add for Extended<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::from_float(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl<T: Real> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_absorbing() {
        let a = Extended::Finite(2.0);
        assert!((a + Extended::Infinite).is_infinite());
        assert!(Extended::<f64>::Infinite.powf(0.5).is_infinite());
        assert_eq!(Extended::<f64>::Infinite.recip(), Some(0.0));
        assert_eq!(Extended::<f64>::Infinite.scale(0.0), Extended::Finite(0.0));
        assert_eq!(Extended::Finite(0.0f64).recip(), None);
    }

    #[test]
    fn non_finite_floats_become_infinite() {
        assert!(Extended::from_float(f64::INFINITY).is_infinite());
        assert!(Extended::from_float(f64::NAN).is_infinite());
        assert_eq!(Extended::from_float(3.0f32).finite(), Some(3.0));
    }
}
