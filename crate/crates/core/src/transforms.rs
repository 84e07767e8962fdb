//! Half-Fourier transforms on `𝕋 × Y` and `ℝ × Y`, the Mellin transform on
//! the positive reals, and tables of transformed fibers.
//!
//! Conventions: characters are `e^{-2πi x ξ}`; the Mellin kernel is
//! `r^{-2πi ξ + λ/2}`.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{density_unchecked, t_lambda_apply, DualFrequency, ModelGeometry};
use crate::quadrature::{integrate_fourier_tail, integrate_graded, integrate_interval, integrate_periodic, integrate_tail, QuadConfig, QuadResult};
use crate::scalar::{cis, Complex, Real};
use crate::spaces::{x_norm, SpaceConfig, XSpaceSpec, XiWindow};

/// A function of the fiber variable.
pub type FiberSampler<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// A function on the model space, `(x, y) ↦ u(x, y)`.
pub type ModelSampler<T> = Arc<dyn Fn(T, T) -> Complex<T> + Send + Sync>;

/// One fiber `y ↦ û(ξ, y)`: a sampler plus the interior nodes used when the
/// profile is tabulated.
#[derive(Clone)]
pub struct FiberProfile<T> {
    sampler: FiberSampler<T>,
    grid: Vec<T>,
    decay_rate: Option<T>,
}

impl<T: Real> FiberProfile<T> {
    pub fn new(sampler: FiberSampler<T>, grid: Vec<T>) -> Result<Self> {
        if grid.iter().any(|y| !y.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("fiber grid must be finite and strictly increasing".into()));
        }
        Ok(Self { sampler, grid, decay_rate: None })
    }

    /// Declares that `|g(y)|` decays like `e^{-rate y}` (rate may be negative).
    pub fn with_decay_rate(mut self, rate: T) -> Self {
        self.decay_rate = Some(rate);
        self
    }

    pub fn from_fn<F: Fn(T) -> Complex<T> + Send + Sync + 'static>(f: F, grid: Vec<T>) -> Result<Self> {
        Self::new(Arc::new(f), grid)
    }

    #[inline]
    pub fn eval(&self, y: T) -> Complex<T> {
        (self.sampler)(y)
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn decay_rate(&self) -> Option<T> {
        self.decay_rate
    }

    pub fn sampler(&self) -> &FiberSampler<T> {
        &self.sampler
    }
}

impl<T: std::fmt::Debug> std::fmt::Debug for FiberProfile<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiberProfile").field("grid", &self.grid).field("decay_rate", &self.decay_rate).finish()
    }
}

/// Core window `[-half_width, half_width]` for line integrals in `x`, and a
/// claimed exponential decay rate of the integrand beyond it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineWindow<T> {
    pub half_width: T,
    pub tail_decay: T,
    /// Extra half-width per unit of `y`, for functions whose `x`-scale grows
    /// with the height.
    pub growth: T,
}

impl<T: Real> LineWindow<T> {
    pub fn new(half_width: T, tail_decay: T) -> Self {
        Self { half_width, tail_decay, growth: T::zero() }
    }

    pub fn with_growth(self, growth: T) -> Self {
        Self { growth, ..self }
    }

    /// Core half-width on the slice `y`.
    pub fn at(&self, y: T) -> T {
        self.half_width + self.growth * y.abs()
    }
}

/// A function on the model space together with what the integrators need to
/// know about it.
#[derive(Clone)]
pub struct ModelFunction<T> {
    pub sampler: ModelSampler<T>,
    pub window: LineWindow<T>,
    /// Holomorphic in `z = x + iy`; fibers then decay like `e^{-2πξy}`.
    pub holomorphic: bool,
}

impl<T: Real> ModelFunction<T> {
    pub fn new<F: Fn(T, T) -> Complex<T> + Send + Sync + 'static>(f: F, window: LineWindow<T>, holomorphic: bool) -> Self {
        Self { sampler: Arc::new(f), window, holomorphic }
    }

    /// `α u + β v`, keeping the wider window and the slower tail.
    pub fn combine(alpha: Complex<T>, u: &Self, beta: Complex<T>, v: &Self) -> Self {
        let (su, sv) = (u.sampler.clone(), v.sampler.clone());
        Self {
            sampler: Arc::new(move |x, y| su(x, y) * alpha + sv(x, y) * beta),
            window: LineWindow {
                half_width: u.window.half_width.max(v.window.half_width),
                tail_decay: u.window.tail_decay.min(v.window.tail_decay),
                growth: u.window.growth.max(v.window.growth),
            },
            holomorphic: u.holomorphic && v.holomorphic,
        }
    }
}

/// The table `ξ ↦ û(ξ, ·)` over a frequency window.
#[derive(Clone, Debug)]
pub struct SpectralData<T> {
    pub frequencies: Vec<DualFrequency<T>>,
    pub profiles: Vec<FiberProfile<T>>,
    /// Estimated `L²` mass near the edges of a continuous frequency window;
    /// for an empty window, the total energy of the function.
    pub truncation_note: T,
}

impl<T: Real> SpectralData<T> {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Writes `xi,y,re,im` rows, one per frequency and fiber node.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["xi", "y", "re", "im"])?;
        for (freq, prof) in self.frequencies.iter().zip(&self.profiles) {
            for &y in prof.grid() {
                let v = prof.eval(y);
                w.write_record([fmt17(freq.value()), fmt17(y), fmt17(v.re), fmt17(v.im)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt17<T: Real>(x: T) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Fourier coefficient `∫_0^1 u(x, y) e^{-2πi x ξ} dx` on the circle.
pub fn fourier_coeff_circle<T: Real, F: Fn(T, T) -> Complex<T> + ?Sized>(
    f: &F,
    xi: i64,
    y: T,
    n_samples: usize,
) -> Result<Complex<T>> {
    let needed = 2 * xi.unsigned_abs() as usize + 2;
    if n_samples <= needed {
        return Err(Error::Nyquist { xi, samples: n_samples, needed });
    }
    let freq = T::two_pi() * T::of_i64(xi);
    Ok(integrate_periodic(|x| f(x, y) * cis(-freq * x), n_samples))
}

/// `∫_ℝ u(x, y) e^{-2πi x ξ} dx`: adaptive quadrature on the core window plus
/// accelerated tails on both sides.
pub fn fourier_slice_line<T: Real, F: Fn(T, T) -> Complex<T> + ?Sized>(
    f: &F,
    xi: T,
    y: T,
    window: LineWindow<T>,
    cfg: &QuadConfig<T>,
) -> QuadResult<T> {
    let w = window.at(y);
    let tp = T::two_pi();
    let core = integrate_interval(|x| f(x, y) * cis(-tp * xi * x), -w, w, cfg);
    let right = integrate_fourier_tail(|x| f(x, y), w, xi, window.tail_decay, cfg);
    let left = integrate_fourier_tail(|t| f(-t, y), w, -xi, window.tail_decay, cfg);
    QuadResult {
        value: core.value + right.value + left.value,
        abs_error_estimate: core.abs_error_estimate + right.abs_error_estimate + left.abs_error_estimate,
        evaluations: core.evaluations + right.evaluations + left.evaluations,
        diverged: core.diverged || right.diverged || left.diverged,
    }
}

/// `∫_0^∞ r^{-2πiξ + λ/2} f(r, y) dr`, integrated in `r` directly: graded
/// pieces toward `r = 0` and doubling windows beyond `r = 1`.
pub fn mellin_slice<T: Real, F: Fn(T, T) -> Complex<T> + ?Sized>(
    f: &F,
    xi: T,
    y: T,
    lambda: T,
    radial_decay: T,
    cfg: &QuadConfig<T>,
) -> QuadResult<T> {
    let half_lambda = lambda * T::lit(0.5);
    let tp = T::two_pi();
    let g = |r: T| {
        let lr = r.ln();
        cis(-tp * xi * lr) * (half_lambda * lr).exp() * f(r, y)
    };
    let inner = integrate_graded(g, T::zero(), T::one(), cfg);
    let outer = integrate_tail(g, T::one(), radial_decay, cfg);
    QuadResult {
        value: inner.value + outer.value,
        abs_error_estimate: inner.abs_error_estimate + outer.abs_error_estimate,
        evaluations: inner.evaluations + outer.evaluations,
        diverged: inner.diverged || outer.diverged,
    }
}

/// Both sides of the Mellin–Fourier relation at one point and their relative
/// mismatch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MellinFourierCheck<T> {
    pub mellin: Complex<T>,
    /// `e^{-iy(1+λ/2)}` times the line transform of `T_λ f`.
    pub fourier: Complex<T>,
    pub residual: T,
    pub diverged: bool,
}

/// Compares the Mellin transform of `f` on the ray at angle `y` with the
/// phase-corrected Fourier transform of `T_λ f` on the line `Im z = y`.
pub fn mellin_fourier_residual<T: Real, F: Fn(Complex<T>) -> Complex<T> + ?Sized>(
    f: &F,
    lambda: T,
    xi: T,
    y: T,
    window: LineWindow<T>,
    radial_decay: T,
    cfg: &QuadConfig<T>,
) -> MellinFourierCheck<T> {
    let mellin = mellin_slice(&|r: T, y: T| f(Complex::from_polar(r, y)), xi, y, lambda, radial_decay, cfg);
    let line = fourier_slice_line(&|x: T, y: T| t_lambda_apply(f, lambda, Complex::new(x, y)), xi, y, window, cfg);
    let fourier = cis(-y * (T::one() + lambda * T::lit(0.5))) * line.value;
    let diverged = mellin.diverged || line.diverged;
    let residual = if diverged {
        T::infinity()
    } else {
        (mellin.value - fourier).norm() / mellin.value.norm().max(T::min_positive_value())
    };
    MellinFourierCheck { mellin: mellin.value, fourier, residual, diverged }
}

fn nan<T: Real>() -> Complex<T> {
    Complex::new(T::nan(), T::nan())
}

/// Builds the table `ξ ↦ û(ξ, ·)` over the configured window.
///
/// Profiles are lazy: each evaluation at `y` runs one circle coefficient or
/// one line integral. A line integral that diverges yields `NaN`, which the
/// fiber norms report as infinite.
pub fn spectral_table<T: Real>(f: &ModelFunction<T>, cfg: &SpaceConfig<T>) -> Result<SpectralData<T>> {
    cfg.validate()?;
    let geometry = cfg.x.geometry;
    let frequencies = cfg.xi_window.nodes();
    let mut profiles = Vec::with_capacity(frequencies.len());
    for freq in &frequencies {
        let sampler = f.sampler.clone();
        let quad = cfg.quad;
        let fiber: FiberSampler<T> = match *freq {
            DualFrequency::Integer(n) => {
                let samples = cfg.circle_samples;
                // surface the sampling error now rather than inside a quadrature loop
                fourier_coeff_circle(&|_: T, _: T| Complex::new(T::zero(), T::zero()), n, T::one(), samples)?;
                Arc::new(move |y| fourier_coeff_circle(&*sampler, n, y, samples).unwrap_or_else(|_| nan()))
            }
            DualFrequency::Real(xi) => {
                let window = f.window;
                Arc::new(move |y| {
                    let r = fourier_slice_line(&*sampler, xi, y, window, &quad);
                    if r.diverged { nan() } else { r.value }
                })
            }
        };
        let mut profile = FiberProfile::new(fiber, cfg.fiber_grid.clone())?;
        if f.holomorphic {
            profile = profile.with_decay_rate(T::two_pi() * freq.value());
        }
        profiles.push(profile);
    }

    let truncation_note = if profiles.is_empty() {
        l2_energy(f, &geometry, &cfg.quad, cfg.circle_samples).to_float()
    } else {
        edge_mass(&frequencies, &profiles, cfg)
    };
    Ok(SpectralData { frequencies, profiles, truncation_note })
}

/// Trapezoid `L²` mass of the two outermost bins at each end of a continuous
/// window; zero for the discrete dual.
fn edge_mass<T: Real>(freqs: &[DualFrequency<T>], profiles: &[FiberProfile<T>], cfg: &SpaceConfig<T>) -> T {
    let step = match cfg.xi_window {
        XiWindow::Integer { .. } => return T::zero(),
        XiWindow::Grid { step, .. } => step,
    };
    let n = freqs.len();
    let spec = XSpaceSpec { p: T::lit(2.0), geometry: cfg.x.geometry };
    let mut idx: Vec<usize> = (0..n.min(3)).chain(n.saturating_sub(3)..n).collect();
    idx.sort_unstable();
    idx.dedup();
    let energies: Vec<(usize, T)> = idx
        .par_iter()
        .map(|&i| (i, x_norm(&profiles[i], &spec, &cfg.quad).to_float().powi(2)))
        .collect();
    let e = |i: usize| energies.iter().find(|(j, _)| *j == i).map_or(T::zero(), |&(_, v)| v);
    let half = T::lit(0.5);
    if n < 3 {
        return idx.iter().map(|&i| e(i)).sum::<T>() * step;
    }
    let low = step * (half * e(0) + e(1) + half * e(2));
    let high = step * (half * e(n - 3) + e(n - 2) + half * e(n - 1));
    low + high
}

/// Total energy `∫_Y ∫_G |u(x, y)|² dx dν(y)`.
pub fn l2_energy<T: Real>(f: &ModelFunction<T>, geometry: &ModelGeometry<T>, cfg: &QuadConfig<T>, circle_samples: usize) -> Extended<T> {
    let sampler = &f.sampler;
    let tail_rate = T::lit(2.0) * f.window.tail_decay;
    let inner = |y: T| -> Complex<T> {
        let w = f.window.at(y);
        let abs2 = |x: T| Complex::new(sampler(x, y).norm_sqr(), T::zero());
        match geometry {
            ModelGeometry::Elliptic => integrate_periodic(abs2, circle_samples),
            _ => {
                let core = integrate_interval(abs2, -w, w, cfg);
                let right = integrate_tail(abs2, w, tail_rate, cfg);
                let left = integrate_tail(|t: T| abs2(-t), w, tail_rate, cfg);
                if core.diverged || right.diverged || left.diverged {
                    nan()
                } else {
                    core.value + right.value + left.value
                }
            }
        }
    };
    let weighted = |y: T| inner(y) * density_unchecked(geometry, y);
    let r = match geometry.fiber_domain().upper {
        Some(upper) => integrate_interval(weighted, T::zero(), upper, cfg),
        None => {
            let rate = geometry.density_decay_rate();
            integrate_tail(weighted, T::zero(), if rate > T::zero() { rate } else { T::one() }, cfg)
        }
    };
    if r.diverged { Extended::Infinite } else { Extended::Finite(r.value.re.max(T::zero())) }
}
