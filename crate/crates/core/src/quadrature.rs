//! Deterministic quadrature: adaptive Gauss-Legendre on finite intervals,
//! doubling windows on half-lines, the uniform-mean rule on the circle, and
//! accelerated tails for Fourier-type integrals.
//!
//! Divergence is reported through [`QuadResult::diverged`] rather than as an
//! error, because an infinite integral is a legitimate outcome downstream
//! (an infinite weight, an infinite norm).

use crate::error::{Error, Result};
use crate::scalar::{cis, Complex, Real};

/// Positive half of the 15-point Gauss-Legendre rule on `[-1, 1]`.
const GL15: [(f64, f64); 8] = [
    (0.987_992_518_020_485_4, 0.030_753_241_996_117_27),
    (0.937_273_392_400_705_9, 0.070_366_047_488_108_12),
    (0.848_206_583_410_427_2, 0.107_159_220_467_171_93),
    (0.724_417_731_360_170_1, 0.139_570_677_926_154_3),
    (0.570_972_172_608_538_8, 0.166_269_205_816_993_93),
    (0.394_151_347_077_563_4, 0.186_161_000_015_562_2),
    (0.201_194_093_997_434_5, 0.198_431_485_327_111_58),
    (0.0, 0.202_578_241_925_561_27),
];

/// Panels touching an endpoint switch to geometric grading once they have
/// been bisected this many times without converging.
const GRADE_DEPTH: usize = 10;

/// Upper bound on live panels in one adaptive run.
const MAX_PANELS: usize = 4000;

/// Upper bound on geometrically graded pieces toward one endpoint.
const MAX_GRADED_PIECES: usize = 600;

/// Windows a half-line integral must cover before it may stop.
const MIN_WINDOWS: usize = 5;

/// Pieces a graded integral toward zero must cover before it may stop.
const MIN_GRADED_PIECES: usize = 8;

/// Upper bound on half-period pieces in an oscillatory tail.
const MAX_TAIL_TERMS: usize = 400;

/// Tolerances and limits shared by all integrators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Maximum bisection depth of a panel, and maximum number of window
    /// doublings on a half-line.
    pub max_depth: usize,
    /// Partial sums above this magnitude are reported as divergent.
    pub divergence_cap: T,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self { rel_tol: T::lit(1e-10), abs_tol: T::lit(1e-14), max_depth: 40, divergence_cap: T::lit(1e12) }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || !(self.abs_tol > T::zero()) {
            return Err(Error::Config(format!(
                "quadrature tolerances must be positive (rel_tol={}, abs_tol={})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::Config("quadrature max_depth must be at least 1".into()));
        }
        if !(self.divergence_cap > T::zero()) {
            return Err(Error::Config("divergence_cap must be positive".into()));
        }
        Ok(())
    }

    fn target(&self, magnitude: T) -> T {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// Outcome of one integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    pub abs_error_estimate: T,
    pub evaluations: usize,
    /// Set when the partial sums exceeded the divergence cap or the
    /// refinement budget ran out before the tolerance was met.
    pub diverged: bool,
}

impl<T: Real> QuadResult<T> {
    fn diverged(evaluations: usize) -> Self {
        Self {
            value: Complex::new(T::nan(), T::nan()),
            abs_error_estimate: T::infinity(),
            evaluations,
            diverged: true,
        }
    }

    /// The value, unless the integral diverged.
    pub fn converged(&self) -> Option<Complex<T>> {
        (!self.diverged).then_some(self.value)
    }
}

struct Evaluator<'a, T, F: Fn(T) -> Complex<T>> {
    f: &'a F,
    count: usize,
    _marker: std::marker::PhantomData<T>,
}

impl<'a, T: Real, F: Fn(T) -> Complex<T>> Evaluator<'a, T, F> {
    fn new(f: &'a F) -> Self {
        Self { f, count: 0, _marker: std::marker::PhantomData }
    }

    /// 15-point Gauss-Legendre on `[a, b]`; nodes are strictly interior.
    fn gl15(&mut self, a: T, b: T) -> Complex<T> {
        let half = (b - a) * T::lit(0.5);
        let mid = a + half;
        let (_, w0) = GL15[7];
        let mut acc = (self.f)(mid) * T::lit(w0);
        for &(x, w) in &GL15[..7] {
            let dx = half * T::lit(x);
            acc += ((self.f)(mid - dx) + (self.f)(mid + dx)) * T::lit(w);
        }
        self.count += 15;
        acc * half
    }
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    depth: usize,
    left: Complex<T>,
    right: Complex<T>,
    err: T,
}

impl<T: Real> Panel<T> {
    fn value(&self) -> Complex<T> {
        self.left + self.right
    }
}

fn make_panel<T: Real, F: Fn(T) -> Complex<T>>(
    ev: &mut Evaluator<'_, T, F>,
    a: T,
    b: T,
    depth: usize,
    whole: Complex<T>,
) -> Panel<T> {
    let mid = a + (b - a) * T::lit(0.5);
    let left = ev.gl15(a, mid);
    let right = ev.gl15(mid, b);
    let err = (whole - left - right).norm();
    Panel { a, b, depth, left, right, err }
}

fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
///
/// Returns the estimate from the highest even column together with the
/// distance to the estimate obtained without the last partial sum.
pub(crate) fn wynn_epsilon<T: Real>(seq: &[Complex<T>]) -> (Complex<T>, T) {
    fn extrapolate<T: Real>(seq: &[Complex<T>]) -> Complex<T> {
        let n = seq.len();
        if n < 3 {
            return seq[n - 1];
        }
        let mut prev: Vec<Complex<T>> = vec![Complex::new(T::zero(), T::zero()); n + 1];
        let mut cur: Vec<Complex<T>> = seq.to_vec();
        let mut best = seq[n - 1];
        let mut column = 0usize;
        while cur.len() >= 2 {
            let mut next = Vec::with_capacity(cur.len() - 1);
            for k in 0..cur.len() - 1 {
                let d = cur[k + 1] - cur[k];
                let scale = cur[k + 1].norm().max(T::min_positive_value());
                if d.norm() <= T::epsilon() * scale {
                    // the column has converged to working precision
                    return if column % 2 == 0 { cur[k + 1] } else { best };
                }
                next.push(prev[k + 1] + d.inv());
            }
            column += 1;
            prev = cur;
            cur = next;
            if column % 2 == 0 {
                if let Some(&last) = cur.last() {
                    if is_finite(last) {
                        best = last;
                    }
                }
            }
        }
        best
    }

    let estimate = extrapolate(seq);
    let previous = if seq.len() > 3 { extrapolate(&seq[..seq.len() - 1]) } else { seq[seq.len().saturating_sub(2)] };
    (estimate, (estimate - previous).norm())
}

/// Integrates toward an endpoint singularity with geometrically shrinking
/// pieces `[e + w 2^{-k-1}, e + w 2^{-k}]`, extrapolating the remainder with
/// the epsilon algorithm. `dir` is `+1` when `endpoint` is the left end.
fn graded_toward<T: Real, F: Fn(T) -> Complex<T>>(
    ev: &mut Evaluator<'_, T, F>,
    endpoint: T,
    width: T,
    dir: T,
    tol: T,
    cap: T,
) -> Option<(Complex<T>, T)> {
    let mut partials: Vec<Complex<T>> = Vec::new();
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut err_acc = T::zero();
    let mut last_mag = T::infinity();
    let mut non_decreasing = 0usize;
    let mut small_run = 0usize;
    let mut prev_est: Option<Complex<T>> = None;
    let mut stable_run = 0usize;
    let resolution = T::lit(64.0) * T::epsilon() * endpoint.abs().max(T::min_positive_value());
    let mut outer = width;
    for k in 0..MAX_GRADED_PIECES {
        let inner = outer * T::lit(0.5);
        if inner <= resolution {
            break;
        }
        let (p, q) = if dir > T::zero() { (endpoint + inner, endpoint + outer) } else { (endpoint - outer, endpoint - inner) };
        let mid = p + (q - p) * T::lit(0.5);
        let whole = ev.gl15(p, q);
        let piece = ev.gl15(p, mid) + ev.gl15(mid, q);
        err_acc += (whole - piece).norm();
        if !is_finite(piece) {
            return None;
        }
        sum += piece;
        if sum.norm() > cap {
            return None;
        }
        partials.push(sum);
        let mag = piece.norm();
        if k > 8 {
            if mag >= last_mag {
                non_decreasing += 1;
                if non_decreasing >= 4 {
                    return None;
                }
            } else {
                non_decreasing = 0;
            }
        }
        last_mag = mag;
        if mag <= tol * T::lit(0.01) {
            small_run += 1;
            if small_run >= 2 {
                return Some((sum, err_acc + mag));
            }
        } else {
            small_run = 0;
        }
        if partials.len() >= 5 {
            let (est, delta) = wynn_epsilon(&partials);
            if let Some(prev) = prev_est {
                if (est - prev).norm() <= tol * T::lit(0.1) && delta <= tol {
                    stable_run += 1;
                    if stable_run >= 2 {
                        return Some((est, err_acc + (est - prev).norm()));
                    }
                } else {
                    stable_run = 0;
                }
            }
            prev_est = Some(est);
        }
        outer = inner;
    }
    // resolution exhausted: extrapolate what we have
    if partials.len() >= 3 {
        let (est, delta) = wynn_epsilon(&partials);
        if delta <= tol.max(T::lit(1e-3) * est.norm()) {
            return Some((est, err_acc + delta));
        }
    }
    partials.last().map(|&s| (s, err_acc + last_mag))
}

/// Adaptive Gauss-Legendre quadrature of `f` over `[a, b]`.
///
/// Panels are bisected worst-first until the summed error estimate falls
/// below `max(abs_tol, rel_tol |value|)`. Panels at either endpoint that stay
/// unresolved after repeated bisection are handed to geometric grading, which
/// integrates power-type endpoint singularities `(y - a)^alpha`, `alpha > -1`.
pub fn integrate_interval<T: Real, F: Fn(T) -> Complex<T>>(f: F, a: T, b: T, cfg: &QuadConfig<T>) -> QuadResult<T> {
    if a == b {
        return QuadResult { value: Complex::new(T::zero(), T::zero()), abs_error_estimate: T::zero(), evaluations: 0, diverged: false };
    }
    if a > b {
        let mut r = integrate_interval(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    let mut ev = Evaluator::new(&f);
    let whole = ev.gl15(a, b);
    let mut live = vec![make_panel(&mut ev, a, b, 0, whole)];
    let mut settled = Complex::new(T::zero(), T::zero());
    let mut settled_err = T::zero();
    let mut exhausted = false;

    loop {
        let mut total = settled;
        let mut err = settled_err;
        for p in &live {
            total += p.value();
            err += p.err;
        }
        if !is_finite(total) || total.norm() > cfg.divergence_cap {
            return QuadResult::diverged(ev.count);
        }
        let target = cfg.target(total.norm());
        if err <= target {
            return QuadResult { value: ordered_sum(settled, &live), abs_error_estimate: err, evaluations: ev.count, diverged: false };
        }
        if live.is_empty() || exhausted {
            // refinement budget spent without meeting the tolerance
            let mut r = QuadResult { value: ordered_sum(settled, &live), abs_error_estimate: err, evaluations: ev.count, diverged: true };
            if !is_finite(r.value) {
                r.value = Complex::new(T::nan(), T::nan());
            }
            return r;
        }
        let (worst_idx, _) = live
            .iter()
            .enumerate()
            .fold((0usize, T::neg_infinity()), |(bi, be), (i, p)| if p.err > be { (i, p.err) } else { (bi, be) });
        let worst = live.swap_remove(worst_idx);
        let at_left = worst.a == a;
        let at_right = worst.b == b;
        if worst.depth >= GRADE_DEPTH && (at_left || at_right) {
            let width = worst.b - worst.a;
            let graded = if at_left {
                graded_toward(&mut ev, a, width, T::one(), target, cfg.divergence_cap)
            } else {
                graded_toward(&mut ev, b, width, -T::one(), target, cfg.divergence_cap)
            };
            match graded {
                Some((v, e)) => {
                    settled += v;
                    settled_err += e;
                }
                None => return QuadResult::diverged(ev.count),
            }
            continue;
        }
        if worst.depth >= cfg.max_depth {
            settled += worst.value();
            settled_err += worst.err;
            continue;
        }
        if live.len() + 2 > MAX_PANELS {
            live.push(worst);
            exhausted = true;
            continue;
        }
        let mid = worst.a + (worst.b - worst.a) * T::lit(0.5);
        live.push(make_panel(&mut ev, worst.a, mid, worst.depth + 1, worst.left));
        live.push(make_panel(&mut ev, mid, worst.b, worst.depth + 1, worst.right));
    }
}

/// Sums live panels in ascending position so the result does not depend on
/// the order in which panels were refined.
fn ordered_sum<T: Real>(settled: Complex<T>, live: &[Panel<T>]) -> Complex<T> {
    let mut sorted: Vec<&Panel<T>> = live.iter().collect();
    sorted.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    sorted.iter().fold(settled, |acc, p| acc + p.value())
}

/// `∫_a^b f(y) dy` for `f` that may oscillate or blow up integrably at `a`.
///
/// The interval is cut into pieces `[a + w 2^{-k-1}, a + w 2^{-k}]`, each
/// integrated adaptively; the partial sums are extrapolated with the epsilon
/// algorithm, which is exact for contributions of the form `c θ^k` with
/// complex `θ` (e.g. `r^{s-1}` with complex `s` near `r = 0`).
pub fn integrate_graded<T: Real, F: Fn(T) -> Complex<T>>(f: F, a: T, b: T, cfg: &QuadConfig<T>) -> QuadResult<T> {
    let width = b - a;
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut err = T::zero();
    let mut evaluations = 0usize;
    let mut partials: Vec<Complex<T>> = Vec::new();
    let mut small_run = 0usize;
    let mut prev_est: Option<Complex<T>> = None;
    let mut stable_run = 0usize;
    let resolution = T::lit(64.0) * T::epsilon() * a.abs().max(T::min_positive_value());
    let mut outer = width;
    for k in 0..MAX_GRADED_PIECES {
        let inner = outer * T::lit(0.5);
        if inner <= resolution {
            break;
        }
        let r = integrate_interval(&f, a + inner, a + outer, cfg);
        evaluations += r.evaluations;
        if r.diverged {
            return QuadResult::diverged(evaluations);
        }
        sum += r.value;
        err += r.abs_error_estimate;
        if !is_finite(sum) || sum.norm() > cfg.divergence_cap {
            return QuadResult::diverged(evaluations);
        }
        partials.push(sum);
        let mag = r.value.norm();
        let target = cfg.target(sum.norm());
        if mag <= target * T::lit(0.01) {
            small_run += 1;
            if small_run >= 2 && k + 1 >= MIN_GRADED_PIECES {
                return QuadResult { value: sum, abs_error_estimate: err + mag, evaluations, diverged: false };
            }
        } else {
            small_run = 0;
        }
        if partials.len() >= 5 {
            let window = if partials.len() > 40 { &partials[partials.len() - 40..] } else { &partials[..] };
            let (est, _) = wynn_epsilon(window);
            if let Some(prev) = prev_est {
                let step = (est - prev).norm();
                if step <= cfg.target(est.norm()) * T::lit(0.1) {
                    stable_run += 1;
                    if stable_run >= 2 && k + 1 >= MIN_GRADED_PIECES {
                        return QuadResult { value: est, abs_error_estimate: err + step, evaluations, diverged: false };
                    }
                } else {
                    stable_run = 0;
                }
            }
            prev_est = Some(est);
        }
        outer = inner;
    }
    QuadResult::diverged(evaluations)
}

/// `∫_0^∞ f(y) dy` by doubling windows. See [`integrate_tail`].
pub fn integrate_halfline<T: Real, F: Fn(T) -> Complex<T>>(f: F, decay_hint: T, cfg: &QuadConfig<T>) -> QuadResult<T> {
    integrate_tail(f, T::zero(), decay_hint, cfg)
}

/// `∫_start^∞ f(y) dy` over windows `[start + T_k, start + 2 T_k]` with
/// `T_0 = 1 / decay_hint`.
///
/// `decay_hint` is a claimed exponential decay rate. Convergence is declared
/// when a window contributes less than `max(abs_tol, rel_tol |sum|)`; when
/// window contributions shrink geometrically (power-law tails) the remainder
/// is extrapolated. The integral is flagged divergent when three consecutive
/// non-negligible windows at least as wide as `|start|` fail to shrink, when the sum exceeds the cap, or after
/// `max_depth` doublings.
pub fn integrate_tail<T: Real, F: Fn(T) -> Complex<T>>(f: F, start: T, decay_hint: T, cfg: &QuadConfig<T>) -> QuadResult<T> {
    let t0 = if decay_hint > T::zero() && decay_hint.is_finite() { decay_hint.recip() } else { T::one() };
    let first = integrate_interval(&f, start, start + t0, cfg);
    let mut evaluations = first.evaluations;
    if first.diverged {
        return QuadResult::diverged(evaluations);
    }
    let mut sum = first.value;
    let mut err = first.abs_error_estimate;
    let mut partials = vec![sum];
    let mut prev_mag = T::infinity();
    let mut ratios: Vec<T> = Vec::new();
    let mut non_shrinking = 0usize;
    let mut lo = start + t0;
    let mut width = t0;
    let mut prev_est: Option<Complex<T>> = None;
    let mut small_run = 0usize;
    let mut windows = 1usize;

    for _ in 0..cfg.max_depth {
        let r = integrate_interval(&f, lo, lo + width, cfg);
        evaluations += r.evaluations;
        if r.diverged {
            return QuadResult::diverged(evaluations);
        }
        let c = r.value;
        sum += c;
        err += r.abs_error_estimate;
        partials.push(sum);
        if !is_finite(sum) || sum.norm() > cfg.divergence_cap {
            return QuadResult::diverged(evaluations);
        }
        let mag = c.norm();
        // a window of zeros early on may precede the support, so demand coverage first
        if mag <= cfg.target(sum.norm()) {
            small_run += 1;
            if small_run >= 2 && windows >= MIN_WINDOWS {
                return QuadResult { value: sum, abs_error_estimate: err + mag, evaluations, diverged: false };
            }
        } else {
            small_run = 0;
        }
        windows += 1;
        // windows narrower than the offset can grow in mass even for decaying tails
        if mag >= prev_mag && mag > cfg.target(sum.norm()) && width >= start.abs() {
            non_shrinking += 1;
            if non_shrinking >= 3 {
                return QuadResult::diverged(evaluations);
            }
        } else {
            non_shrinking = 0;
        }
        if prev_mag.is_finite() && prev_mag > T::zero() {
            ratios.push(mag / prev_mag);
        }
        prev_mag = mag;

        // power-law tails: windows shrink by a steady factor, extrapolate
        let n = ratios.len();
        if n >= 3 {
            let (r1, r2, r3) = (ratios[n - 1], ratios[n - 2], ratios[n - 3]);
            let steady = (r1 - r2).abs() < T::lit(0.05) && (r2 - r3).abs() < T::lit(0.05);
            if steady && r1 < T::lit(0.95) && r1 > T::lit(0.05) {
                let (est, delta) = wynn_epsilon(&partials);
                if let Some(prev) = prev_est {
                    let step = (est - prev).norm();
                    if step <= cfg.target(est.norm()) && delta <= cfg.target(est.norm()) * T::lit(10.0) {
                        return QuadResult { value: est, abs_error_estimate: err + step, evaluations, diverged: false };
                    }
                }
                prev_est = Some(est);
            }
        }
        lo = lo + width;
        width = width + width;
    }
    QuadResult::diverged(evaluations)
}

/// Uniform-mean rule `(1/n) Σ_k f(k/n)` for a 1-periodic `f`.
///
/// Exact for trigonometric polynomials of degree below `n/2`.
pub fn integrate_periodic<T: Real, F: Fn(T) -> Complex<T>>(f: F, n: usize) -> Complex<T> {
    assert!(n >= 2, "periodic rule needs at least two samples");
    let nt = T::of_usize(n);
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..n {
        acc += f(T::of_usize(k) / nt);
    }
    acc / nt
}

/// `∫_start^∞ g(x) e^{-2πi ξ x} dx`.
///
/// For `ξ != 0` the tail is cut into half periods of the character; the
/// resulting (asymptotically alternating) series of partial sums is
/// accelerated with the epsilon algorithm, which handles slowly decaying
/// amplitudes such as `x^{-2}`. For `ξ` so small that a half period exceeds
/// `10^6`, the integrand is treated as non-oscillatory and passed to
/// [`integrate_tail`] with `decay_hint`.
pub fn integrate_fourier_tail<T: Real, G: Fn(T) -> Complex<T>>(
    g: G,
    start: T,
    xi: T,
    decay_hint: T,
    cfg: &QuadConfig<T>,
) -> QuadResult<T> {
    let two_pi = T::two_pi();
    let integrand = |x: T| g(x) * cis(-two_pi * xi * x);
    let half_period = if xi == T::zero() { T::infinity() } else { (T::lit(2.0) * xi.abs()).recip() };
    if half_period > T::lit(1e6) {
        return integrate_tail(integrand, start, decay_hint, cfg);
    }

    let mut sum = Complex::new(T::zero(), T::zero());
    let mut err = T::zero();
    let mut evaluations = 0usize;
    let mut partials: Vec<Complex<T>> = Vec::new();
    let mut mags: Vec<T> = Vec::new();
    let mut prev_est: Option<Complex<T>> = None;
    let mut stable_run = 0usize;
    let mut small_run = 0usize;

    for k in 0..MAX_TAIL_TERMS {
        let lo = start + half_period * T::of_usize(k);
        let r = integrate_interval(&integrand, lo, lo + half_period, cfg);
        evaluations += r.evaluations;
        if r.diverged {
            return QuadResult::diverged(evaluations);
        }
        sum += r.value;
        err += r.abs_error_estimate;
        if !is_finite(sum) || sum.norm() > cfg.divergence_cap {
            return QuadResult::diverged(evaluations);
        }
        partials.push(sum);
        let mag = r.value.norm();
        mags.push(mag);
        let target = cfg.target(sum.norm());
        if mag <= target * T::lit(0.1) {
            small_run += 1;
            if small_run >= 2 {
                return QuadResult { value: sum, abs_error_estimate: err + mag, evaluations, diverged: false };
            }
        } else {
            small_run = 0;
        }
        // amplitudes must eventually shrink; constant amplitude means no integral
        if k >= 12 {
            let n = mags.len();
            if mags[n - 1] >= T::lit(0.99) * mags[n - 9] && mags[n - 2] >= T::lit(0.99) * mags[n - 10] {
                return QuadResult::diverged(evaluations);
            }
        }
        let shrinking = mags.len() >= 5 && mags[mags.len() - 1] < T::lit(0.99) * mags[mags.len() - 5];
        if shrinking {
            // keep the epsilon table short; the early terms carry no information about the tail
            let window = if partials.len() > 40 { &partials[partials.len() - 40..] } else { &partials[..] };
            let (est, _) = wynn_epsilon(window);
            if let Some(prev) = prev_est {
                let step = (est - prev).norm();
                if step <= cfg.target(est.norm()) {
                    stable_run += 1;
                    if stable_run >= 2 {
                        return QuadResult { value: est, abs_error_estimate: err + step, evaluations, diverged: false };
                    }
                } else {
                    stable_run = 0;
                }
            }
            prev_est = Some(est);
        }
    }
    QuadResult::diverged(evaluations)
}
