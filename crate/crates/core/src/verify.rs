//! Verification suites: holomorphic factorization, Paley-Wiener support and
//! boundedness, Plancherel, the Mellin–Fourier relation and the isometry.
//!
//! Everything here is concrete `f64`.

pub mod catalog;

use std::f64::consts::PI;

use rayon::prelude::*;

pub use catalog::{bump, catalog, CatalogInfo, GridData, ParamInfo, TestFunction};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{radial_change, DualFrequency, ModelGeometry};
use crate::quadrature::QuadConfig;
use crate::scalar::Complex;
use crate::spaces::{isometry_report, mixed_norm, rho_numeric, x_norm, NormReport, SpaceConfig, XSpaceSpec, XiWindow};
use crate::transforms::{fourier_coeff_circle, fourier_slice_line, l2_energy, mellin_fourier_residual, spectral_table, MellinFourierCheck, ModelFunction};

type C64 = Complex<f64>;

/// Above this exponent `e^{2πξy}` is applied in log-space.
const LOG_SPACE_EXPONENT: f64 = 300.0;

/// Frequencies whose value on some slice is below this fraction of that
/// slice's peak are not compared in the factorization test.
pub const SIGNIFICANCE_FLOOR: f64 = 1e-6;

/// Reference slices used when the caller gives none.
pub fn default_slices(g: &ModelGeometry<f64>) -> Vec<f64> {
    match g {
        ModelGeometry::Elliptic => vec![0.05, 0.1, 0.2],
        ModelGeometry::Parabolic { .. } => vec![0.25, 0.5, 1.0],
        ModelGeometry::Hyperbolic { .. } => vec![PI / 4.0, PI / 2.0, 3.0 * PI / 4.0],
    }
}

/// Slice used to read off `û₀` when a single one is needed.
pub fn default_reference_slice(g: &ModelGeometry<f64>) -> f64 {
    match g {
        ModelGeometry::Elliptic => 0.01,
        ModelGeometry::Parabolic { .. } => 0.05,
        ModelGeometry::Hyperbolic { .. } => PI / 2.0,
    }
}

/// `û(ξ, y)` for one frequency and one slice.
pub fn spectral_value(model: &ModelFunction<f64>, cfg: &SpaceConfig<f64>, xi: DualFrequency<f64>, y: f64) -> Result<C64> {
    match xi {
        DualFrequency::Integer(n) => fourier_coeff_circle(&*model.sampler, n, y, cfg.circle_samples),
        DualFrequency::Real(v) => {
            let r = fourier_slice_line(&*model.sampler, v, y, model.window, &cfg.quad);
            if r.diverged {
                Err(Error::Divergence(format!("line transform at xi={v}, y={y}")))
            } else {
                Ok(r.value)
            }
        }
    }
}

/// `û e^{2πξy}`, with the exponential applied in log-space when it is large.
pub fn rescale_to_boundary(u: C64, xi: f64, y: f64) -> C64 {
    let exponent = 2.0 * PI * xi * y;
    if exponent <= LOG_SPACE_EXPONENT || u.norm() == 0.0 {
        return u * exponent.exp();
    }
    C64::from_polar((u.norm().ln() + exponent).exp(), u.arg())
}

fn check_slice(g: &ModelGeometry<f64>, y: f64) -> Result<()> {
    if g.fiber_domain().contains(y) {
        Ok(())
    } else {
        Err(Error::Config(format!("slice y={y} lies outside the open fiber domain of the {} model", g.name())))
    }
}

/// `û(ξ, y_ref) e^{2πξ y_ref}`: the boundary spectrum `û₀(ξ)` of a
/// holomorphic function, read off one slice.
pub fn extract_u0(f: &TestFunction, cfg: &SpaceConfig<f64>, xi: DualFrequency<f64>, y_ref: f64) -> Result<C64> {
    let g = cfg.x.geometry;
    check_slice(&g, y_ref)?;
    let model = f.model(&g)?;
    Ok(rescale_to_boundary(spectral_value(&model, cfg, xi, y_ref)?, xi.value(), y_ref))
}

/// Outcome of the factorization test.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub max_rel_deviation: f64,
    /// `(ξ, y_i, y_j)` where the deviation is largest.
    pub worst_pair: Option<(f64, f64, f64)>,
    pub pass: bool,
    pub tolerance: f64,
    /// `û₀` read off the first slice.
    pub u0_table: Vec<(DualFrequency<f64>, C64)>,
    pub compared: usize,
    pub skipped: usize,
}

/// Checks that `û(ξ, y) e^{2πξy}` does not depend on `y` across the slices.
pub fn factorization_test(f: &TestFunction, cfg: &SpaceConfig<f64>, y_slices: &[f64], tol: f64) -> Result<FactorizationReport> {
    cfg.validate()?;
    if y_slices.len() < 2 {
        return Err(Error::Config("the factorization test needs at least two slices".into()));
    }
    let g = cfg.x.geometry;
    for &y in y_slices {
        check_slice(&g, y)?;
    }
    let model = f.model(&g)?;
    let nodes = cfg.xi_window.nodes();
    let rows: Vec<Vec<C64>> = nodes
        .par_iter()
        .map(|&xi| y_slices.iter().map(|&y| spectral_value(&model, cfg, xi, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let floors: Vec<f64> = (0..y_slices.len())
        .map(|i| SIGNIFICANCE_FLOOR * rows.iter().fold(0.0f64, |m, row| m.max(row[i].norm())))
        .collect();
    let mut max_rel_deviation = 0.0f64;
    let mut worst_pair = None;
    let (mut compared, mut skipped) = (0, 0);
    for (xi, row) in nodes.iter().zip(&rows) {
        if row.iter().zip(&floors).any(|(v, &floor)| floor == 0.0 || v.norm() < floor) {
            skipped += 1;
            continue;
        }
        compared += 1;
        let u0: Vec<C64> = row.iter().zip(y_slices).map(|(&v, &y)| rescale_to_boundary(v, xi.value(), y)).collect();
        for i in 0..u0.len() {
            for j in i + 1..u0.len() {
                let dev = (u0[i] - u0[j]).norm() / u0[i].norm().max(u0[j].norm()).max(f64::MIN_POSITIVE);
                if dev > max_rel_deviation || worst_pair.is_none() {
                    max_rel_deviation = max_rel_deviation.max(dev);
                    worst_pair = Some((xi.value(), y_slices[i], y_slices[j]));
                }
            }
        }
    }
    let u0_table = nodes.iter().zip(&rows).map(|(&xi, row)| (xi, rescale_to_boundary(row[0], xi.value(), y_slices[0]))).collect();
    Ok(FactorizationReport {
        max_rel_deviation,
        worst_pair,
        pass: max_rel_deviation <= tol,
        tolerance: tol,
        u0_table,
        compared,
        skipped,
    })
}

/// `L²` mass of the spectrum split by the sign of the frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportReport {
    pub negative_energy_ratio: f64,
    pub negative_energy: Extended<f64>,
    pub total_energy: Extended<f64>,
    /// The spectrum vanished on the whole window; the ratio is then 0.
    pub zero_total: bool,
}

fn refuse_on_hyperbolic(g: &ModelGeometry<f64>, what: &str) -> Result<()> {
    match g {
        ModelGeometry::Hyperbolic { .. } => Err(Error::NotApplicable(format!(
            "the {what} is a Paley-Wiener property, which carries no information on the hyperbolic model"
        ))),
        _ => Ok(()),
    }
}

/// Fraction of the fiber `L²` mass carried by negative frequencies.
pub fn pw_support_test(f: &TestFunction, cfg: &SpaceConfig<f64>) -> Result<SupportReport> {
    let g = cfg.x.geometry;
    refuse_on_hyperbolic(&g, "support test")?;
    let model = f.model(&g)?;
    let table = spectral_table(&model, cfg)?;
    let spec = XSpaceSpec { p: 2.0, geometry: g };
    let energies: Vec<Extended<f64>> = table.profiles.par_iter().map(|prof| x_norm(prof, &spec, &cfg.quad).powf(2.0)).collect();
    let weights = cfg.xi_weights(energies.len());
    let (mut neg, mut total) = (Extended::Finite(0.0), Extended::Finite(0.0));
    for ((xi, e), w) in table.frequencies.iter().zip(&energies).zip(&weights) {
        let term = e.scale(*w);
        if xi.value() < 0.0 {
            neg = neg + term;
        }
        total = total + term;
    }
    let (ratio, zero_total) = match (neg, total) {
        (_, Extended::Finite(t)) if t <= 0.0 => (0.0, true),
        (Extended::Finite(n), Extended::Finite(t)) => ((n / t).clamp(0.0, 1.0), false),
        (Extended::Infinite, _) => (1.0, false),
        (Extended::Finite(_), Extended::Infinite) => (0.0, false),
    };
    Ok(SupportReport { negative_energy_ratio: ratio, negative_energy: neg, total_energy: total, zero_total })
}

/// The weight-side hypotheses of the two Paley-Wiener statements, probed on
/// finitely many frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub rho_infinite_on_negatives: bool,
    pub negative_probe: Vec<(f64, Extended<f64>)>,
    /// `sup_ξ e^{-2πy₀ξ} / ρ(ξ)` over the non-negative probes.
    pub bdd_condition_sup: Extended<f64>,
    /// Probe frequency where the supremum sits.
    pub sup_at: Option<f64>,
    pub y0: f64,
}

/// Default negative and non-negative probe frequencies.
pub fn default_probe(g: &ModelGeometry<f64>) -> Vec<f64> {
    let mut probe: Vec<f64> = if g.has_discrete_dual() { vec![-3.0, -2.0, -1.0] } else { vec![-2.0, -1.0, -0.5, -0.1] };
    probe.push(0.0);
    if g.has_discrete_dual() {
        probe.extend((1..=1024).filter(|n: &i32| *n <= 16 || n.count_ones() == 1).map(f64::from));
    } else {
        probe.extend((0..=14).map(|k| 2f64.powi(k) / 16.0));
    }
    probe
}

fn as_frequency(g: &ModelGeometry<f64>, xi: f64) -> Result<DualFrequency<f64>> {
    if !g.has_discrete_dual() {
        return Ok(DualFrequency::Real(xi));
    }
    if xi.fract() != 0.0 {
        return Err(Error::Config(format!("the elliptic model has an integer dual; probe {xi} is not an integer")));
    }
    Ok(DualFrequency::Integer(xi as i64))
}

/// Whether `ρ = ∞` at every negative probe and how large `e^{-2πy₀ξ}/ρ(ξ)`
/// gets on the others.
///
/// The supremum is reported infinite when the largest value sits at the last
/// probe and the last three values do not decrease.
pub fn pw_condition_check(spec: &XSpaceSpec<f64>, quad: &QuadConfig<f64>, probe: &[f64], y0: f64) -> Result<ConditionReport> {
    spec.validate()?;
    quad.validate()?;
    if !(y0 >= 0.0) || !y0.is_finite() {
        return Err(Error::Config(format!("y0 must be finite and non-negative, got {y0}")));
    }
    let g = spec.geometry;
    let mut probe: Vec<f64> = probe.to_vec();
    probe.sort_by(f64::total_cmp);
    probe.dedup();
    let freqs = probe.iter().map(|&xi| as_frequency(&g, xi)).collect::<Result<Vec<_>>>()?;
    let rho: Vec<Extended<f64>> = freqs.par_iter().map(|&xi| rho_numeric(xi, spec, quad)).collect();

    let negative_probe: Vec<(f64, Extended<f64>)> = probe.iter().zip(&rho).filter(|(xi, _)| **xi < 0.0).map(|(xi, r)| (*xi, *r)).collect();
    let rho_infinite_on_negatives = negative_probe.iter().all(|(_, r)| r.is_infinite());

    let values: Vec<(f64, f64)> = probe
        .iter()
        .zip(&rho)
        .filter(|(xi, _)| **xi >= 0.0)
        .map(|(&xi, r)| (xi, r.recip().map_or(0.0, |inv| (-2.0 * PI * y0 * xi).exp() * inv)))
        .collect();
    let (mut sup, mut sup_at) = (0.0f64, None);
    for (k, &(xi, v)) in values.iter().enumerate() {
        if v > sup || sup_at.is_none() {
            sup = sup.max(v);
            sup_at = Some((k, xi));
        }
    }
    let n = values.len();
    let growing_tail = n >= 3 && sup_at.map(|(k, _)| k) == Some(n - 1) && values[n - 3].1 <= values[n - 2].1 && values[n - 2].1 <= values[n - 1].1;
    let bdd_condition_sup = if growing_tail || !sup.is_finite() { Extended::Infinite } else { Extended::Finite(sup) };
    Ok(ConditionReport { rho_infinite_on_negatives, negative_probe, bdd_condition_sup, sup_at: sup_at.map(|(_, xi)| xi), y0 })
}

/// Largest `|u|` seen on a probe grid above `y1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundednessProbe {
    pub sup_probe: f64,
    pub y1: f64,
    /// `e^{-2πy₁}` on the disc.
    pub r0: Option<f64>,
    /// A known bound on `{y >= y1}` when the catalog has one.
    pub known_bound: Option<f64>,
}

/// Default probe grids: 64 points across one period (or the core window)
/// and 16 slices `y₁ + k y₁ / 4`.
pub fn default_probe_grids(model: &ModelFunction<f64>, g: &ModelGeometry<f64>, y1: f64) -> (Vec<f64>, Vec<f64>) {
    let xs = if g.has_discrete_dual() {
        (0..64).map(|k| k as f64 / 64.0).collect()
    } else {
        let w = model.window.at(y1);
        (0..64).map(|k| -w + 2.0 * w * k as f64 / 63.0).collect()
    };
    let ys = (0..16).map(|k| y1 + k as f64 * y1 / 4.0).collect();
    (xs, ys)
}

/// Empirical lower bound for `sup_{y > y₁} ‖u(·, y)‖_∞`.
pub fn pw_boundedness_probe(f: &TestFunction, g: &ModelGeometry<f64>, y1: f64, grids: Option<(&[f64], &[f64])>) -> Result<BoundednessProbe> {
    refuse_on_hyperbolic(g, "boundedness probe")?;
    if !(y1 > 0.0) || !y1.is_finite() {
        return Err(Error::Config(format!("y1 must be positive and finite, got {y1}")));
    }
    let model = f.model(g)?;
    let (xs, ys) = match grids {
        Some((xs, ys)) => (xs.to_vec(), ys.to_vec()),
        None => default_probe_grids(&model, g, y1),
    };
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Config("probe grids must not be empty".into()));
    }
    if let Some(&y) = ys.iter().find(|&&y| y < y1 || !g.fiber_domain().contains(y)) {
        return Err(Error::Config(format!("probe slice y={y} is below y1 or outside the fiber domain")));
    }
    let sup_probe = ys
        .par_iter()
        .map(|&y| xs.iter().fold(0.0f64, |m, &x| m.max((model.sampler)(x, y).norm())))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0f64, f64::max);
    let r0 = if g.has_discrete_dual() { Some(radial_change(y1)?) } else { None };
    Ok(BoundednessProbe { sup_probe, y1, r0, known_bound: f.sup_bound(g, y1) })
}

/// Combined Paley-Wiener evidence for one function and one space.
#[derive(Clone, Debug, PartialEq)]
pub struct PWReport {
    pub negative_energy_ratio: f64,
    pub zero_total: bool,
    pub rho_infinite_on_negatives: bool,
    pub bdd_condition_sup: Extended<f64>,
    pub sup_probe: f64,
    pub y0: f64,
    pub y1: f64,
    pub r0: Option<f64>,
}

pub fn paley_wiener_report(f: &TestFunction, cfg: &SpaceConfig<f64>, y0: f64, y1: f64) -> Result<PWReport> {
    if !(y1 > y0) {
        return Err(Error::Config(format!("y1 must exceed y0, got y0={y0}, y1={y1}")));
    }
    let g = cfg.x.geometry;
    let support = pw_support_test(f, cfg)?;
    let cond = pw_condition_check(&cfg.x, &cfg.quad, &default_probe(&g), y0)?;
    let probe = pw_boundedness_probe(f, &g, y1, None)?;
    Ok(PWReport {
        negative_energy_ratio: support.negative_energy_ratio,
        zero_total: support.zero_total,
        rho_infinite_on_negatives: cond.rho_infinite_on_negatives,
        bdd_condition_sup: cond.bdd_condition_sup,
        sup_probe: probe.sup_probe,
        y0,
        y1,
        r0: probe.r0,
    })
}

/// `‖f‖_{L²(μ)}` against the `L²` norm of its half-Fourier transform.
pub fn plancherel_test(f: &TestFunction, cfg: &SpaceConfig<f64>, tol: f64) -> Result<NormReport<f64>> {
    let g = cfg.x.geometry;
    let model = f.model(&g)?;
    let mut cfg = cfg.clone();
    cfg.x.p = 2.0;
    cfg.q = 2.0;
    let table = spectral_table(&model, &cfg)?;
    let spectral = mixed_norm(&table, &cfg);
    let direct = l2_energy(&model, &g, &cfg.quad, cfg.circle_samples).powf(0.5);
    let scale = direct.finite().map_or(1.0, |d| (d * d).max(f64::MIN_POSITIVE));
    Ok(NormReport::compare(direct, spectral, tol + table.truncation_note / scale))
}

/// The isometry between the mixed norm and the weighted norm of `û₀`.
///
/// `û₀` comes from the closed form when the catalog has one and is otherwise
/// read off the slice `y_ref`.
pub fn isometry_check(f: &TestFunction, cfg: &SpaceConfig<f64>, tol: f64, y_ref: Option<f64>) -> Result<NormReport<f64>> {
    let g = cfg.x.geometry;
    let model = f.model(&g)?;
    if !f.holomorphic {
        return Err(Error::NotApplicable(format!("{} is not holomorphic", f.name)));
    }
    if !f.square_integrable(&g) {
        return Err(Error::NotApplicable(format!("{} does not lie in the mixed-norm space on the {} model", f.name, g.name())));
    }
    let y_ref = y_ref.unwrap_or_else(|| default_reference_slice(&g));
    check_slice(&g, y_ref)?;
    let u0 = |xi: DualFrequency<f64>| match f.u0_oracle(&g, xi.value()) {
        Some(v) => v,
        None => spectral_value(&model, cfg, xi, y_ref)
            .map(|v| rescale_to_boundary(v, xi.value(), y_ref))
            .unwrap_or(C64::new(f64::NAN, f64::NAN)),
    };
    isometry_report(&model, &u0, cfg, tol)
}

/// Mellin–Fourier residuals on a grid of `(ξ, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MellinFourierReport {
    pub lambda: f64,
    pub checks: Vec<(f64, f64, MellinFourierCheck<f64>)>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn mellin_fourier_suite(f: &TestFunction, lambda: f64, xis: &[f64], ys: &[f64], quad: &QuadConfig<f64>, tol: f64) -> Result<MellinFourierReport> {
    quad.validate()?;
    let g = ModelGeometry::hyperbolic(lambda)?;
    let domain_fn = f
        .domain_fn()
        .filter(|_| f.supports(&g))
        .ok_or_else(|| Error::NotApplicable(format!("{} is not a function on the upper half-plane", f.name)))?;
    if xis.is_empty() || ys.is_empty() {
        return Err(Error::Config("the Mellin–Fourier grid must not be empty".into()));
    }
    for &y in ys {
        check_slice(&g, y)?;
    }
    let window = f.model(&g)?.window;
    let points: Vec<(f64, f64)> = xis.iter().flat_map(|&xi| ys.iter().map(move |&y| (xi, y))).collect();
    let checks: Vec<(f64, f64, MellinFourierCheck<f64>)> = points
        .par_iter()
        .map(|&(xi, y)| (xi, y, mellin_fourier_residual(&*domain_fn, lambda, xi, y, window, f.radial_decay(y), quad)))
        .collect();
    let max_residual = checks.iter().fold(0.0f64, |m, (_, _, c)| if c.residual.is_nan() { f64::INFINITY } else { m.max(c.residual) });
    Ok(MellinFourierReport { lambda, checks, max_residual, tolerance: tol, pass: max_residual <= tol })
}

/// Largest `|∂u/∂z̄|` relative to `max |u|` by central differences: a
/// holomorphy diagnostic, not a proof.
pub fn cauchy_riemann_residual(f: &TestFunction, g: &ModelGeometry<f64>, xs: &[f64], ys: &[f64]) -> Result<f64> {
    let model = f.model(g)?;
    let u = &model.sampler;
    let h = 1e-5;
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for &y in ys {
        check_slice(g, y - h)?;
        check_slice(g, y + h)?;
        for &x in xs {
            let dx = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
            let dy = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
            let dzbar = (dx + C64::i() * dy) * 0.5;
            worst = worst.max(dzbar.norm());
            scale = scale.max(u(x, y).norm());
        }
    }
    Ok(worst / scale.max(f64::MIN_POSITIVE))
}

/// The frequency window of a configuration, as plain numbers.
pub fn window_values(window: &XiWindow<f64>) -> Vec<f64> {
    window.nodes().iter().map(|xi| xi.value()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_for(f: &TestFunction, g: ModelGeometry<f64>) -> SpaceConfig<f64> {
        let mut cfg = SpaceConfig::default_for(g);
        let (w, r) = f.default_window(&g);
        cfg.xi_window = w;
        cfg.xi_rule = r;
        cfg
    }

    #[test]
    fn log_space_rescale_matches_direct() {
        let u = C64::from_polar(1e-200, 0.3);
        let a = rescale_to_boundary(u, 80.0, 0.8);
        let b = u * (2.0 * PI * 80.0 * 0.8f64).exp();
        assert!((a - b).norm() / b.norm() < 1e-12);
        let tiny = C64::from_polar(1e-300, -1.0);
        let c = rescale_to_boundary(tiny, 100.0, 1.0);
        assert!((c.norm().ln() - (-300.0 * 10f64.ln() + 200.0 * PI)).abs() < 1e-9);
    }

    #[test]
    fn monomial_u0_is_one() {
        let f = TestFunction::disc_monomial(3);
        let cfg = cfg_for(&f, ModelGeometry::Elliptic);
        for y in [0.05, 0.3] {
            let v = extract_u0(&f, &cfg, DualFrequency::Integer(3), y).unwrap();
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn factorization_monomial_and_antiholo() {
        let e = ModelGeometry::Elliptic;
        let f = TestFunction::disc_monomial(3);
        let r = factorization_test(&f, &cfg_for(&f, e), &[0.1, 0.5, 1.0], 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.compared, 1);
        let a = TestFunction::disc_antiholo(1).unwrap();
        let r = factorization_test(&a, &cfg_for(&a, e), &[0.1, 0.5, 1.0], 1e-6).unwrap();
        assert!(!r.pass);
        assert_eq!(r.worst_pair.unwrap().0, -1.0);
        assert!(factorization_test(&f, &cfg_for(&f, e), &[0.1], 1e-6).is_err());
    }

    #[test]
    fn support_ratios_bracket() {
        let e = ModelGeometry::Elliptic;
        let f = TestFunction::disc_monomial(4);
        let a = TestFunction::disc_antiholo(1).unwrap();
        let rf = pw_support_test(&f, &cfg_for(&f, e)).unwrap().negative_energy_ratio;
        let ra = pw_support_test(&a, &cfg_for(&a, e)).unwrap().negative_energy_ratio;
        assert!(rf < 1e-12);
        assert!(ra > 1.0 - 1e-12);
        let h = ModelGeometry::hyperbolic(0.0).unwrap();
        let k = TestFunction::halfplane_kernel(2, 1.0).unwrap();
        assert!(matches!(pw_support_test(&k, &cfg_for(&k, h)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn condition_check_examples() {
        let quad = QuadConfig::default();
        let e1 = XSpaceSpec::new(1.0, ModelGeometry::Elliptic).unwrap();
        let r = pw_condition_check(&e1, &quad, &[-1.0, 0.0, 1.0], 0.1).unwrap();
        assert!(!r.rho_infinite_on_negatives);
        assert!((r.negative_probe[0].1.to_float() - 2.0).abs() < 1e-9);

        let e2 = XSpaceSpec::new(2.0, ModelGeometry::Elliptic).unwrap();
        let probe = default_probe(&ModelGeometry::Elliptic);
        assert!(pw_condition_check(&e2, &quad, &probe, 0.0).unwrap().bdd_condition_sup.is_infinite());
        assert!(pw_condition_check(&e2, &quad, &probe, 0.1).unwrap().bdd_condition_sup.is_finite());
        assert!(pw_condition_check(&e2, &quad, &[0.5], 0.1).is_err());

        let p = XSpaceSpec::new(2.0, ModelGeometry::parabolic(0.0).unwrap()).unwrap();
        let r = pw_condition_check(&p, &quad, &default_probe(&p.geometry), 0.1).unwrap();
        assert!(r.rho_infinite_on_negatives);
        assert!(r.bdd_condition_sup.is_finite());
    }

    #[test]
    fn boundedness_probe_on_the_disc() {
        let e = ModelGeometry::Elliptic;
        let y1 = -(0.4f64).ln() / (2.0 * PI);
        let f = TestFunction::disc_geometric(0.5).unwrap();
        let r = pw_boundedness_probe(&f, &e, y1, None).unwrap();
        assert!(r.sup_probe <= 1.25 * (1.0 + 1e-9) && r.sup_probe > 1.2);
        assert!((r.r0.unwrap() - 0.4).abs() < 1e-14);
        let m = TestFunction::disc_monomial(3);
        assert!(pw_boundedness_probe(&m, &e, y1, None).unwrap().sup_probe <= 0.064 * (1.0 + 1e-12));
        let h = ModelGeometry::hyperbolic(0.0).unwrap();
        assert!(matches!(pw_boundedness_probe(&TestFunction::hyperbolic_exp(), &h, 0.5, None), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn cauchy_riemann_diagnostic_separates() {
        let e = ModelGeometry::Elliptic;
        let xs = [0.1, 0.4, 0.7];
        let ys = [0.1, 0.2];
        assert!(cauchy_riemann_residual(&TestFunction::disc_geometric(0.5).unwrap(), &e, &xs, &ys).unwrap() < 1e-6);
        assert!(cauchy_riemann_residual(&TestFunction::disc_antiholo(1).unwrap(), &e, &xs, &ys).unwrap() > 1.0);
    }

    #[test]
    fn isometry_refuses_non_members() {
        let h = ModelGeometry::hyperbolic(0.0).unwrap();
        let f = TestFunction::hyperbolic_exp();
        assert!(matches!(isometry_check(&f, &cfg_for(&f, h), 1e-6, None), Err(Error::NotApplicable(_))));
        let e = ModelGeometry::Elliptic;
        let a = TestFunction::disc_antiholo(1).unwrap();
        assert!(matches!(isometry_check(&a, &cfg_for(&a, e), 1e-6, None), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn isometry_disc_monomial() {
        let e = ModelGeometry::Elliptic;
        let f = TestFunction::disc_monomial(5);
        let r = isometry_check(&f, &cfg_for(&f, e), 1e-8, None).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.direct.to_float() - 6f64.sqrt().recip()).abs() < 1e-9);
    }
}
