//! Fiber norms, the weight `ρ`, mixed norms over the dual group, weighted
//! spectral norms, and the comparison of the two.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{density_unchecked, DualFrequency, ModelGeometry};
use crate::quadrature::{integrate_halfline, integrate_interval, QuadConfig};
use crate::scalar::{Complex, Real};
use crate::special::{abs_gamma, ln_gamma, ComplexPoint};
use crate::transforms::{spectral_table, FiberProfile, ModelFunction, SpectralData};

/// Fiber space `L^p(Y, ν)` of a geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XSpaceSpec<T> {
    pub p: T,
    pub geometry: ModelGeometry<T>,
}

impl<T: Real> XSpaceSpec<T> {
    pub fn new(p: T, geometry: ModelGeometry<T>) -> Result<Self> {
        let spec = Self { p, geometry };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= T::one()) || !self.p.is_finite() {
            return Err(Error::Config(format!("p must lie in [1, ∞), got {}", self.p)));
        }
        self.geometry.validate()
    }
}

/// Frequencies at which spectra are tabulated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XiWindow<T> {
    /// `n_min..=n_max` on `ℤ`.
    Integer { n_min: i64, n_max: i64 },
    /// `min, min + step, ...` up to `max` on `ℝ`.
    Grid { min: T, max: T, step: T },
}

impl<T: Real> XiWindow<T> {
    pub fn nodes(&self) -> Vec<DualFrequency<T>> {
        match *self {
            XiWindow::Integer { n_min, n_max } => (n_min..=n_max).map(DualFrequency::Integer).collect(),
            XiWindow::Grid { min, max, step } => {
                if !(max >= min) || !(step > T::zero()) {
                    return Vec::new();
                }
                let count = ((max - min) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
                (0..count)
                    .map(|k| {
                        let xi = min + step * T::of_usize(k);
                        // land exactly on zero so kinks at the origin sit on a node
                        DualFrequency::Real(if xi.abs() < T::lit(1e-12) * step { T::zero() } else { xi })
                    })
                    .collect()
            }
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, XiWindow::Integer { .. })
    }
}

/// Quadrature rule for `ξ`-integrals on a continuous window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiRule {
    Trapezoid,
    /// Composite Simpson, closing with the 3/8 rule when the node count is even.
    Simpson,
}

/// How fiber nodes are laid out for tabulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberGrading {
    Uniform,
    Geometric,
}

/// `n` interior fiber nodes. Bounded fibers get midpoints (uniform) or
/// Chebyshev-like clustering at both ends (geometric); unbounded fibers get
/// `(0, 1]` uniformly or a geometric ladder ending at 4.
pub fn fiber_grid<T: Real>(g: &ModelGeometry<T>, n: usize, grading: FiberGrading) -> Vec<T> {
    let nt = T::of_usize(n.max(1));
    let half = T::lit(0.5);
    (0..n)
        .map(|k| {
            let kt = T::of_usize(k);
            match (g.fiber_domain().upper, grading) {
                (Some(upper), FiberGrading::Uniform) => upper * (kt + half) / nt,
                (Some(upper), FiberGrading::Geometric) => upper * half * (T::one() - (T::PI() * (kt + half) / nt).cos()),
                (None, FiberGrading::Uniform) => (kt + T::one()) / nt,
                (None, FiberGrading::Geometric) => T::lit(4.0) * T::lit(2.0).powf(-(nt - T::one() - kt) * half),
            }
        })
        .collect()
}

/// Everything needed to evaluate a mixed norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceConfig<T> {
    pub x: XSpaceSpec<T>,
    pub q: T,
    pub xi_window: XiWindow<T>,
    pub xi_rule: XiRule,
    pub fiber_grid: Vec<T>,
    pub quad: QuadConfig<T>,
    /// Samples per circle for Fourier coefficients on the disc.
    pub circle_samples: usize,
}

impl<T: Real> SpaceConfig<T> {
    /// `p = q = 2` with a window suited to each geometry.
    pub fn default_for(geometry: ModelGeometry<T>) -> Self {
        let (xi_window, xi_rule) = match geometry {
            ModelGeometry::Elliptic => (XiWindow::Integer { n_min: -4, n_max: 40 }, XiRule::Trapezoid),
            ModelGeometry::Parabolic { .. } => {
                (XiWindow::Grid { min: T::lit(-0.25), max: T::lit(3.0), step: T::lit(0.005) }, XiRule::Simpson)
            }
            ModelGeometry::Hyperbolic { .. } => {
                (XiWindow::Grid { min: -T::one(), max: T::one(), step: T::lit(0.05) }, XiRule::Trapezoid)
            }
        };
        Self {
            x: XSpaceSpec { p: T::lit(2.0), geometry },
            q: T::lit(2.0),
            xi_window,
            xi_rule,
            fiber_grid: fiber_grid(&geometry, 16, FiberGrading::Uniform),
            quad: QuadConfig::default(),
            circle_samples: 128,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.quad.validate()?;
        if !(self.q >= T::one()) || !self.q.is_finite() {
            return Err(Error::Config(format!("q must lie in [1, ∞), got {}", self.q)));
        }
        match (self.xi_window, self.x.geometry.has_discrete_dual()) {
            (XiWindow::Integer { .. }, true) => {}
            (XiWindow::Grid { step, min, max }, false) => {
                if !(step > T::zero()) || !min.is_finite() || !max.is_finite() {
                    return Err(Error::Config("frequency grid needs finite bounds and a positive step".into()));
                }
            }
            (XiWindow::Integer { .. }, false) => {
                return Err(Error::Config(format!("the {} model has a continuous dual; use a real frequency grid", self.x.geometry.name())))
            }
            (XiWindow::Grid { .. }, true) => {
                return Err(Error::Config("the elliptic model has an integer dual; use an integer frequency range".into()))
            }
        }
        if self.fiber_grid.is_empty() {
            return Err(Error::Config("fiber grid must not be empty".into()));
        }
        let domain = self.x.geometry.fiber_domain();
        if self.fiber_grid.iter().any(|&y| !domain.contains(y)) || self.fiber_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("fiber grid must be strictly increasing and inside the open fiber domain".into()));
        }
        if self.circle_samples < 2 {
            return Err(Error::Config("circle_samples must be at least 2".into()));
        }
        Ok(())
    }

    /// Quadrature weights attached to the frequency nodes.
    pub fn xi_weights(&self, count: usize) -> Vec<T> {
        match self.xi_window {
            XiWindow::Integer { .. } => vec![T::one(); count],
            XiWindow::Grid { step, .. } => rule_weights(self.xi_rule, step, count),
        }
    }
}

fn rule_weights<T: Real>(rule: XiRule, h: T, n: usize) -> Vec<T> {
    let half = T::lit(0.5);
    match n {
        0 => return Vec::new(),
        1 => return vec![h],
        2 => return vec![h * half, h * half],
        _ => {}
    }
    let mut w = vec![T::zero(); n];
    match rule {
        XiRule::Trapezoid => {
            w.iter_mut().for_each(|v| *v = h);
            w[0] = h * half;
            w[n - 1] = h * half;
        }
        XiRule::Simpson => {
            // Simpson on an even number of intervals, 3/8 on the last three if needed
            let simpson_end = if (n - 1) % 2 == 0 { n - 1 } else { n - 4 };
            let third = h / T::lit(3.0);
            let mut k = 0;
            while k < simpson_end {
                w[k] += third;
                w[k + 1] += T::lit(4.0) * third;
                w[k + 2] += third;
                k += 2;
            }
            if simpson_end != n - 1 {
                let e = T::lit(3.0) * h / T::lit(8.0);
                let s = simpson_end;
                w[s] += e;
                w[s + 1] += T::lit(3.0) * e;
                w[s + 2] += T::lit(3.0) * e;
                w[s + 3] += e;
            }
        }
    }
    w
}

/// `(∫ |g|^p dν)^{1/p}` over the fiber; infinite when the integral diverges.
pub fn x_norm<T: Real>(g: &FiberProfile<T>, spec: &XSpaceSpec<T>, quad: &QuadConfig<T>) -> Extended<T> {
    let p = spec.p;
    let geometry = spec.geometry;
    let two = T::lit(2.0);
    let integrand = |y: T| {
        let v = g.eval(y);
        let mag = if p == two { v.norm_sqr() } else { v.norm().powf(p) };
        Complex::new(mag * density_unchecked(&geometry, y), T::zero())
    };
    let r = match geometry.fiber_domain().upper {
        Some(upper) => integrate_interval(integrand, T::zero(), upper, quad),
        None => {
            let rate = p * g.decay_rate().unwrap_or(T::zero()) + geometry.density_decay_rate();
            integrate_halfline(integrand, if rate > T::zero() { rate } else { T::one() }, quad)
        }
    };
    if r.diverged || !r.value.re.is_finite() {
        Extended::Infinite
    } else {
        Extended::Finite(r.value.re.max(T::zero()).powf(p.recip()))
    }
}

fn exponential_profile<T: Real>(xi: T) -> FiberProfile<T> {
    let rate = T::two_pi() * xi;
    FiberProfile::new(Arc::new(move |y: T| Complex::new((-rate * y).exp(), T::zero())), Vec::new())
        .expect("empty grid is valid")
        .with_decay_rate(rate)
}

/// `ρ(ξ) = ‖y ↦ e^{-2πξy}‖_X` by quadrature.
pub fn rho_numeric<T: Real>(xi: DualFrequency<T>, spec: &XSpaceSpec<T>, quad: &QuadConfig<T>) -> Extended<T> {
    x_norm(&exponential_profile(xi.value()), spec, quad)
}

/// `ρ` from Gamma-function identities for the same integral as
/// [`rho_numeric`].
pub fn rho_closed_form<T: Real>(xi: DualFrequency<T>, spec: &XSpaceSpec<T>) -> Result<Extended<T>> {
    let xi = xi.value();
    let p = spec.p;
    let two = T::lit(2.0);
    let pi = T::PI();
    Ok(match spec.geometry {
        ModelGeometry::Elliptic => {
            let denom = p * xi + two;
            if denom > T::zero() {
                Extended::Finite((two / denom).powf(p.recip()))
            } else {
                Extended::Infinite
            }
        }
        ModelGeometry::Parabolic { lambda } => {
            if xi > T::zero() {
                let l1 = lambda + T::one();
                let ln_pow = lambda * two.ln() + ln_gamma(lambda + two)? - l1 * (T::two_pi() * p * xi).ln();
                Extended::Finite((ln_pow / p).exp())
            } else {
                Extended::Infinite
            }
        }
        ModelGeometry::Hyperbolic { lambda } => {
            let arg = ComplexPoint::new((lambda + two) / two, -pi * p * xi);
            let ln_abs = abs_gamma(arg)?.ln();
            let ln_pow = pi.ln() + ln_gamma(lambda + two)? - p * pi * pi * xi - two * ln_abs;
            Extended::Finite((ln_pow / p).exp())
        }
    })
}

/// An alternative closed form that drops the `2π` factors of the character
/// convention. It agrees with [`rho_closed_form`] on the disc, differs by a
/// constant factor on the parabolic model, and agrees only at `ξ = 0` on the
/// hyperbolic model. Reported for comparison, never used in norms.
pub fn rho_unnormalized_form<T: Real>(xi: DualFrequency<T>, spec: &XSpaceSpec<T>) -> Result<Extended<T>> {
    let x = xi.value();
    let p = spec.p;
    let two = T::lit(2.0);
    let pi = T::PI();
    match spec.geometry {
        ModelGeometry::Elliptic => rho_closed_form(xi, spec),
        ModelGeometry::Parabolic { lambda } => {
            if x > T::zero() {
                let l1 = lambda + T::one();
                let ln_c = lambda * two.ln() + ln_gamma(lambda + two)? - l1 * p.ln();
                Ok(Extended::Finite((-(l1 / p) * x.ln() + ln_c / p).exp()))
            } else {
                Ok(Extended::Infinite)
            }
        }
        ModelGeometry::Hyperbolic { lambda } => {
            let arg = ComplexPoint::new((lambda + two) / two, p * x / two);
            let ln_v = pi.ln() + ln_gamma(lambda + two)? - abs_gamma(arg)?.ln();
            Ok(Extended::Finite((ln_v / p - pi * x / two).exp()))
        }
    }
}

/// An extended-real function `ξ ↦ ρ(ξ) ∈ (0, ∞]`.
#[derive(Clone)]
pub struct Weight<T> {
    eval: Arc<dyn Fn(DualFrequency<T>) -> Extended<T> + Send + Sync>,
}

impl<T: Real> Weight<T> {
    pub fn from_fn<F: Fn(DualFrequency<T>) -> Extended<T> + Send + Sync + 'static>(f: F) -> Self {
        Self { eval: Arc::new(f) }
    }

    /// The quadrature weight, the authoritative one.
    pub fn numeric(spec: XSpaceSpec<T>, quad: QuadConfig<T>) -> Self {
        Self::from_fn(move |xi| rho_numeric(xi, &spec, &quad))
    }

    /// The Gamma-function weight; Gamma poles (unreachable for valid specs)
    /// read as infinite.
    pub fn closed_form(spec: XSpaceSpec<T>) -> Self {
        Self::from_fn(move |xi| rho_closed_form(xi, &spec).unwrap_or(Extended::Infinite))
    }

    pub fn at(&self, xi: DualFrequency<T>) -> Extended<T> {
        (self.eval)(xi)
    }
}

impl<T> std::fmt::Debug for Weight<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Weight")
    }
}

fn q_power<T: Real>(v: T, q: T) -> T {
    if q == T::lit(2.0) { v * v } else { v.powf(q) }
}

/// `(Σ_ξ w_ξ ‖û(ξ, ·)‖_X^q)^{1/q}` with unit weights on `ℤ` and the configured
/// rule on a continuous window.
pub fn mixed_norm<T: Real>(spectral: &SpectralData<T>, cfg: &SpaceConfig<T>) -> Extended<T> {
    let norms: Vec<Extended<T>> = spectral.profiles.par_iter().map(|prof| x_norm(prof, &cfg.x, &cfg.quad)).collect();
    let weights = cfg.xi_weights(norms.len());
    let mut acc = T::zero();
    for (n, w) in norms.iter().zip(&weights) {
        match n {
            Extended::Infinite => return Extended::Infinite,
            Extended::Finite(v) => acc += *w * q_power(*v, cfg.q),
        }
    }
    if !acc.is_finite() || acc > cfg.quad.divergence_cap {
        return Extended::Infinite;
    }
    Extended::Finite(acc.max(T::zero()).powf(cfg.q.recip()))
}

/// Values of `|u₀|` below this fraction of the largest one count as zero
/// where the weight is infinite.
pub const NEGLIGIBLE_SPECTRUM: f64 = 1e-9;

/// `(Σ_ξ w_ξ |u₀(ξ)|^q ρ(ξ)^q)^{1/q}`.
///
/// Where `ρ = ∞` the term is zero if `u₀` is negligible there and makes the
/// norm infinite otherwise.
pub fn weighted_spectral_norm<T: Real, U: Fn(DualFrequency<T>) -> Complex<T> + Sync + ?Sized>(
    u0: &U,
    rho: &Weight<T>,
    cfg: &SpaceConfig<T>,
) -> Extended<T> {
    let nodes = cfg.xi_window.nodes();
    let samples: Vec<(T, Extended<T>)> = nodes.par_iter().map(|&xi| (u0(xi).norm(), rho.at(xi))).collect();
    let peak = samples.iter().fold(T::zero(), |m, (a, _)| if *a > m { *a } else { m });
    let negligible = T::lit(NEGLIGIBLE_SPECTRUM) * peak;
    let weights = cfg.xi_weights(samples.len());
    let mut acc = T::zero();
    for ((a, r), w) in samples.iter().zip(&weights) {
        if !a.is_finite() {
            return Extended::Infinite;
        }
        match r {
            Extended::Infinite if *a > negligible => return Extended::Infinite,
            Extended::Infinite => {}
            Extended::Finite(rv) => acc += *w * q_power(*a * *rv, cfg.q),
        }
    }
    if !acc.is_finite() || acc > cfg.quad.divergence_cap {
        return Extended::Infinite;
    }
    Extended::Finite(acc.powf(cfg.q.recip()))
}

/// Floor for relative errors, so identically zero cases do not divide by 0.
pub fn rel_floor<T: Real>() -> T {
    T::min_positive_value()
}

/// The two sides of a norm identity and their agreement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormReport<T> {
    pub direct: Extended<T>,
    pub via_weight: Extended<T>,
    pub rel_err: T,
    pub tolerance: T,
    pub pass: bool,
}

impl<T: Real> NormReport<T> {
    /// An infinite side yields `rel_err = ∞` and a failed comparison.
    pub fn compare(direct: Extended<T>, via_weight: Extended<T>, tolerance: T) -> Self {
        let rel_err = match (direct, via_weight) {
            (Extended::Finite(d), Extended::Finite(v)) => (d - v).abs() / d.max(rel_floor()),
            _ => T::infinity(),
        };
        Self { direct, via_weight, rel_err, tolerance, pass: rel_err <= tolerance }
    }
}

/// Mixed norm of `f` against the weighted norm of its boundary spectrum
/// `u₀`, with the truncation mass of the window added to the tolerance.
pub fn isometry_report<T: Real, U: Fn(DualFrequency<T>) -> Complex<T> + Sync + ?Sized>(
    f: &ModelFunction<T>,
    u0: &U,
    cfg: &SpaceConfig<T>,
    tolerance: T,
) -> Result<NormReport<T>> {
    let table = spectral_table(f, cfg)?;
    let direct = mixed_norm(&table, cfg);
    let via = weighted_spectral_norm(u0, &Weight::numeric(cfg.x, cfg.quad), cfg);
    let scale = direct.finite().map_or(T::one(), |d| (d * d).max(rel_floor()));
    let budget = tolerance + table.truncation_note / scale;
    Ok(NormReport::compare(direct, via, budget))
}
