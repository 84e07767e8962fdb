//! Named test functions with known spectral behaviour.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{map_to_domain, t_lambda_apply, ModelGeometry};
use crate::scalar::Complex;
use crate::spaces::{XiRule, XiWindow};
use crate::special::gamma_complex;
use crate::transforms::{LineWindow, ModelFunction};

type C64 = Complex<f64>;
type DomainFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

const I: C64 = Complex { re: 0.0, im: 1.0 };

/// Smooth bump `exp(-1 / (1 - t²))` on `|t| < 1`, zero elsewhere.
pub fn bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Values of a function on a rectangular `(x, y)` grid, interpolated
/// bilinearly and taken as zero outside the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridData {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major: `values[j * xs.len() + i]` sits at `(xs[i], ys[j])`.
    pub values: Vec<C64>,
}

impl GridData {
    /// Reads `x,y,re,im` rows covering every pair of a rectangular grid.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::Config(format!("{}: missing column {name}", path.display())))
        };
        let (cx, cy, cre, cim) = (col("x")?, col("y")?, col("re")?, col("im")?);
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let num = |c: usize| -> Result<f64> {
                record
                    .get(c)
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("{}: unparsable value in row {:?}", path.display(), record)))
            };
            rows.push((num(cx)?, num(cy)?, Complex::new(num(cre)?, num(cim)?)));
        }
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<(f64, f64, C64)>) -> Result<Self> {
        let mut xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let mut ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
        for v in [&mut xs, &mut ys] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        if xs.len() < 2 || ys.len() < 2 || rows.len() != xs.len() * ys.len() {
            return Err(Error::Config(format!(
                "grid data must cover a full rectangular grid with at least 2x2 nodes (got {} rows for {}x{} nodes)",
                rows.len(),
                xs.len(),
                ys.len()
            )));
        }
        let mut values = vec![Complex::new(f64::NAN, 0.0); rows.len()];
        for (x, y, v) in rows {
            let i = xs.binary_search_by(|p| p.total_cmp(&x)).expect("node present");
            let j = ys.binary_search_by(|p| p.total_cmp(&y)).expect("node present");
            values[j * xs.len() + i] = v;
        }
        if values.iter().any(|v| v.re.is_nan()) {
            return Err(Error::Config("grid data contains duplicate nodes".into()));
        }
        Ok(Self { xs, ys, values })
    }

    pub fn eval(&self, x: f64, y: f64) -> C64 {
        let locate = |nodes: &[f64], t: f64| -> Option<(usize, f64)> {
            if t < nodes[0] || t > nodes[nodes.len() - 1] {
                return None;
            }
            let k = nodes.partition_point(|&n| n <= t).clamp(1, nodes.len() - 1) - 1;
            Some((k, (t - nodes[k]) / (nodes[k + 1] - nodes[k])))
        };
        match (locate(&self.xs, x), locate(&self.ys, y)) {
            (Some((i, s)), Some((j, t))) => {
                let nx = self.xs.len();
                let v = |a: usize, b: usize| self.values[b * nx + a];
                v(i, j) * ((1.0 - s) * (1.0 - t)) + v(i + 1, j) * (s * (1.0 - t)) + v(i, j + 1) * ((1.0 - s) * t) + v(i + 1, j + 1) * (s * t)
            }
            _ => Complex::new(0.0, 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    DiscMonomial { n: u32 },
    DiscGeometric { a: f64 },
    DiscAntiholo { n: u32 },
    HalfplaneKernel { k: u32, b: f64 },
    GaussianBump { s: f64, c: f64, h: f64 },
    HyperbolicExp,
    AnnulusBump { r1: f64, r2: f64 },
    GridCsv { path: PathBuf, holomorphic: bool, data: Arc<GridData> },
}

/// A catalog entry: a function on one or more model geometries together
/// with what is known about its spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub name: &'static str,
    pub params: BTreeMap<String, f64>,
    pub holomorphic: bool,
    kind: Kind,
}

/// Parameter description for the catalog listing.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamInfo {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: Option<f64>,
    pub doc: &'static str,
}

/// One line of the catalog listing.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub geometries: &'static [&'static str],
    pub holomorphic: &'static str,
    pub params: Vec<ParamInfo>,
}

fn param(name: &'static str, kind: &'static str, default: Option<f64>, doc: &'static str) -> ParamInfo {
    ParamInfo { name, kind, default, doc }
}

/// All catalog entries in a fixed order.
pub fn catalog() -> Vec<CatalogInfo> {
    vec![
        CatalogInfo {
            name: "disc_monomial",
            summary: "w^n on the disc",
            geometries: &["elliptic"],
            holomorphic: "yes",
            params: vec![param("n", "integer >= 0", Some(1.0), "exponent")],
        },
        CatalogInfo {
            name: "disc_geometric",
            summary: "1 / (1 - a w) on the disc",
            geometries: &["elliptic"],
            holomorphic: "yes",
            params: vec![param("a", "real in (-1, 1)", Some(0.5), "ratio")],
        },
        CatalogInfo {
            name: "disc_antiholo",
            summary: "conj(w)^n on the disc",
            geometries: &["elliptic"],
            holomorphic: "no",
            params: vec![param("n", "integer >= 1", Some(1.0), "exponent")],
        },
        CatalogInfo {
            name: "halfplane_kernel",
            summary: "(w + i b)^(-k) on the upper half-plane",
            geometries: &["parabolic", "hyperbolic"],
            holomorphic: "yes",
            params: vec![param("k", "integer >= 2", Some(2.0), "order"), param("b", "real > 0", Some(1.0), "pole depth")],
        },
        CatalogInfo {
            name: "halfplane_gaussian_bump",
            summary: "exp(-pi x^2 / s^2) times a smooth bump in y (periodized on the circle)",
            geometries: &["elliptic", "parabolic", "hyperbolic"],
            holomorphic: "no",
            params: vec![
                param("s", "real > 0", Some(0.5), "Gaussian width"),
                param("c", "real", Some(0.6), "bump centre in y"),
                param("h", "real > 0", Some(0.4), "bump half-width in y"),
            ],
        },
        CatalogInfo {
            name: "hyperbolic_exp",
            summary: "exp(i w) on the upper half-plane, pulled back to the strip",
            geometries: &["hyperbolic"],
            holomorphic: "yes",
            params: vec![],
        },
        CatalogInfo {
            name: "annulus_bump",
            summary: "smooth bump in |w| on r1 < |w| < r2 times exp(i Re w)",
            geometries: &["parabolic", "hyperbolic"],
            holomorphic: "no",
            params: vec![param("r1", "real > 0", Some(0.5), "inner radius"), param("r2", "real > r1", Some(2.0), "outer radius")],
        },
        CatalogInfo {
            name: "grid_csv",
            summary: "tabulated samples in model coordinates, columns x,y,re,im",
            geometries: &["elliptic", "parabolic", "hyperbolic"],
            holomorphic: "per flag",
            params: vec![
                param("path", "file path", None, "CSV file"),
                param("holomorphic", "boolean", Some(0.0), "treat the samples as holomorphic"),
            ],
        },
    ]
}

fn get(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn nonneg_int(v: f64, what: &str, min: u32) -> Result<u32> {
    if v.fract() == 0.0 && v >= min as f64 && v <= 10_000.0 {
        Ok(v as u32)
    } else {
        Err(Error::Config(format!("{what} must be an integer >= {min}, got {v}")))
    }
}

impl TestFunction {
    fn new(name: &'static str, kind: Kind, holomorphic: bool, params: &[(&str, f64)]) -> Self {
        let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Self { name, params, holomorphic, kind }
    }

    pub fn disc_monomial(n: u32) -> Self {
        Self::new("disc_monomial", Kind::DiscMonomial { n }, true, &[("n", n as f64)])
    }

    pub fn disc_geometric(a: f64) -> Result<Self> {
        if !(a.abs() < 1.0) {
            return Err(Error::Config(format!("disc_geometric needs |a| < 1, got {a}")));
        }
        Ok(Self::new("disc_geometric", Kind::DiscGeometric { a }, true, &[("a", a)]))
    }

    pub fn disc_antiholo(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("disc_antiholo needs n >= 1".into()));
        }
        Ok(Self::new("disc_antiholo", Kind::DiscAntiholo { n }, false, &[("n", n as f64)]))
    }

    pub fn halfplane_kernel(k: u32, b: f64) -> Result<Self> {
        if k < 2 || !(b > 0.0) {
            return Err(Error::Config(format!("halfplane_kernel needs k >= 2 and b > 0, got k={k}, b={b}")));
        }
        Ok(Self::new("halfplane_kernel", Kind::HalfplaneKernel { k, b }, true, &[("b", b), ("k", k as f64)]))
    }

    pub fn gaussian_bump(s: f64, c: f64, h: f64) -> Result<Self> {
        if !(s > 0.0) || !(h > 0.0) || !(c - h >= 0.0) {
            return Err(Error::Config(format!("gaussian bump needs s > 0, h > 0 and c >= h, got s={s}, c={c}, h={h}")));
        }
        Ok(Self::new("halfplane_gaussian_bump", Kind::GaussianBump { s, c, h }, false, &[("c", c), ("h", h), ("s", s)]))
    }

    pub fn hyperbolic_exp() -> Self {
        Self::new("hyperbolic_exp", Kind::HyperbolicExp, true, &[])
    }

    pub fn annulus_bump(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r2 > r1 && r2.is_finite()) {
            return Err(Error::Config(format!("annulus_bump needs 0 < r1 < r2, got r1={r1}, r2={r2}")));
        }
        Ok(Self::new("annulus_bump", Kind::AnnulusBump { r1, r2 }, false, &[("r1", r1), ("r2", r2)]))
    }

    pub fn grid_csv(path: &Path, holomorphic: bool) -> Result<Self> {
        let data = GridData::from_csv(path)?;
        Ok(Self::from_grid(path.to_path_buf(), data, holomorphic))
    }

    pub fn from_grid(path: PathBuf, data: GridData, holomorphic: bool) -> Self {
        let flag = if holomorphic { 1.0 } else { 0.0 };
        Self::new("grid_csv", Kind::GridCsv { path, holomorphic, data: Arc::new(data) }, holomorphic, &[("holomorphic", flag)])
    }

    /// Looks an entry up by name; missing numeric parameters take defaults.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>, path: Option<&Path>) -> Result<Self> {
        match name {
            "disc_monomial" => Ok(Self::disc_monomial(nonneg_int(get(params, "n", 1.0), "n", 0)?)),
            "disc_geometric" => Self::disc_geometric(get(params, "a", 0.5)),
            "disc_antiholo" => Self::disc_antiholo(nonneg_int(get(params, "n", 1.0), "n", 1)?),
            "halfplane_kernel" => Self::halfplane_kernel(nonneg_int(get(params, "k", 2.0), "k", 2)?, get(params, "b", 1.0)),
            "halfplane_gaussian_bump" => Self::gaussian_bump(get(params, "s", 0.5), get(params, "c", 0.6), get(params, "h", 0.4)),
            "hyperbolic_exp" => Ok(Self::hyperbolic_exp()),
            "annulus_bump" => Self::annulus_bump(get(params, "r1", 0.5), get(params, "r2", 2.0)),
            "grid_csv" => {
                let path = path.ok_or_else(|| Error::Config("grid_csv needs a path".into()))?;
                Self::grid_csv(path, get(params, "holomorphic", 0.0) != 0.0)
            }
            other => Err(Error::Config(format!("unknown test function {other:?}; see the catalog command"))),
        }
    }

    /// Whether the entry is defined on the geometry.
    pub fn supports(&self, g: &ModelGeometry<f64>) -> bool {
        use ModelGeometry::*;
        match (&self.kind, g) {
            (Kind::DiscMonomial { .. } | Kind::DiscGeometric { .. } | Kind::DiscAntiholo { .. }, Elliptic) => true,
            (Kind::HalfplaneKernel { .. } | Kind::AnnulusBump { .. }, Parabolic { .. } | Hyperbolic { .. }) => true,
            (Kind::HyperbolicExp, Hyperbolic { .. }) => true,
            (Kind::GaussianBump { .. } | Kind::GridCsv { .. }, _) => true,
            _ => false,
        }
    }

    fn require(&self, g: &ModelGeometry<f64>) -> Result<()> {
        if self.supports(g) {
            Ok(())
        } else {
            Err(Error::NotApplicable(format!("{} is not defined on the {} model", self.name, g.name())))
        }
    }

    /// Whether the entry has finite mixed norm and `L²` norm for `p = q = 2`
    /// on the geometry.
    pub fn square_integrable(&self, g: &ModelGeometry<f64>) -> bool {
        match (&self.kind, g) {
            (Kind::HyperbolicExp, _) => false,
            (Kind::HalfplaneKernel { k, .. }, ModelGeometry::Hyperbolic { lambda }) => (*k as f64) > lambda / 2.0 + 1.0,
            _ => self.supports(g),
        }
    }

    /// The function on the geometric domain (disc or half-plane), when it is
    /// defined there rather than directly in model coordinates.
    pub fn domain_fn(&self) -> Option<DomainFn> {
        Some(match self.kind {
            Kind::DiscMonomial { n } => Arc::new(move |w: C64| w.powu(n)),
            Kind::DiscGeometric { a } => Arc::new(move |w: C64| (Complex::new(1.0, 0.0) - w * a).inv()),
            Kind::DiscAntiholo { n } => Arc::new(move |w: C64| w.conj().powu(n)),
            Kind::HalfplaneKernel { k, b } => Arc::new(move |w: C64| (w + I * b).powi(-(k as i32))),
            Kind::HyperbolicExp => Arc::new(|w: C64| (I * w).exp()),
            Kind::AnnulusBump { r1, r2 } => Arc::new(move |w: C64| {
                let t = (2.0 * w.norm() - (r1 + r2)) / (r2 - r1);
                Complex::from_polar(bump(t), w.re)
            }),
            Kind::GaussianBump { .. } | Kind::GridCsv { .. } => return None,
        })
    }

    /// The function in model coordinates `(x, y)` for the geometry.
    pub fn model(&self, g: &ModelGeometry<f64>) -> Result<ModelFunction<f64>> {
        self.require(g)?;
        let g = *g;
        let lambda = g.lambda();
        let window = self.line_window(&g);
        if let Kind::GaussianBump { s, c, h } = self.kind {
            let periodic = g.has_discrete_dual();
            let sampler = move |x: f64, y: f64| {
                let fiber = bump((y - c) / h);
                if fiber == 0.0 {
                    return Complex::new(0.0, 0.0);
                }
                let gauss = |t: f64| (-PI * t * t / (s * s)).exp();
                let g = if periodic {
                    // enough images that the periodization is exact to double precision
                    let m = (s * 7.0).ceil() as i64 + 1;
                    (-m..=m).map(|j| gauss(x + j as f64)).sum()
                } else {
                    gauss(x)
                };
                Complex::new(g * fiber, 0.0)
            };
            return Ok(ModelFunction::new(sampler, window, false));
        }
        if let Kind::GridCsv { data, holomorphic, .. } = &self.kind {
            let data = data.clone();
            let periodic = g.has_discrete_dual();
            let sampler = move |x: f64, y: f64| data.eval(if periodic { x.rem_euclid(1.0) } else { x }, y);
            return Ok(ModelFunction::new(sampler, window, *holomorphic));
        }
        let f = self.domain_fn().expect("domain function for analytic entries");
        let sampler: Arc<dyn Fn(f64, f64) -> C64 + Send + Sync> = match g {
            ModelGeometry::Elliptic | ModelGeometry::Parabolic { .. } => Arc::new(move |x, y| f(map_to_domain(&g, x, y))),
            ModelGeometry::Hyperbolic { .. } => Arc::new(move |x, y| t_lambda_apply(&*f, lambda, Complex::new(x, y))),
        };
        Ok(ModelFunction { sampler, window, holomorphic: self.holomorphic })
    }

    fn line_window(&self, g: &ModelGeometry<f64>) -> LineWindow<f64> {
        let lambda = g.lambda();
        let (half_width, tail_decay) = match (&self.kind, g) {
            (Kind::HalfplaneKernel { b, .. }, ModelGeometry::Parabolic { .. }) => {
                return LineWindow::new(8.0 * b, 1.0).with_growth(2.0);
            }
            (Kind::HalfplaneKernel { k, .. }, _) => (8.0, (lambda / 2.0 + 1.0).min(*k as f64 - lambda / 2.0 - 1.0).max(0.1)),
            (Kind::GaussianBump { s, .. }, _) => (8.0 * s, 1.0),
            (Kind::HyperbolicExp, _) => (4.0, lambda / 2.0 + 1.0),
            (Kind::AnnulusBump { r1, r2 }, ModelGeometry::Hyperbolic { .. }) => (r1.ln().abs().max(r2.ln().abs()), 1.0),
            (Kind::AnnulusBump { r2, .. }, _) => (*r2, 1.0),
            (Kind::GridCsv { data, .. }, _) => (data.xs[0].abs().max(data.xs[data.xs.len() - 1].abs()), 1.0),
            _ => (1.0, 1.0),
        };
        LineWindow::new(half_width, tail_decay)
    }

    /// Exponential decay rate of `|f(r e^{iy})|` in `r`, for Mellin integrals.
    pub fn radial_decay(&self, y: f64) -> f64 {
        match self.kind {
            Kind::HyperbolicExp => y.sin().max(1e-3),
            _ => 1.0,
        }
    }

    /// A frequency window and rule that capture the spectrum on the geometry.
    pub fn default_window(&self, g: &ModelGeometry<f64>) -> (XiWindow<f64>, XiRule) {
        match (&self.kind, g) {
            (Kind::GaussianBump { s, .. }, ModelGeometry::Elliptic) => {
                let n = (7.0 / s).ceil() as i64;
                (XiWindow::Integer { n_min: -n, n_max: n }, XiRule::Trapezoid)
            }
            (Kind::GaussianBump { s, .. }, _) => {
                let m = (4.0 / s * 20.0).ceil() / 20.0;
                (XiWindow::Grid { min: -m, max: m, step: 0.05 }, XiRule::Trapezoid)
            }
            (Kind::DiscMonomial { n }, _) => (XiWindow::Integer { n_min: -4, n_max: (*n as i64 + 4).max(8) }, XiRule::Trapezoid),
            (_, ModelGeometry::Elliptic) => (XiWindow::Integer { n_min: -4, n_max: 40 }, XiRule::Trapezoid),
            (Kind::HalfplaneKernel { k, b }, ModelGeometry::Parabolic { .. }) => {
                // û₀ ~ ξ^{k-1} e^{-2πbξ}; the squared tail beyond max is below 1e-15 of the peak
                let max = ((20.0 + *k as f64) / (2.0 * PI * b) * 4.0).ceil() / 4.0;
                (XiWindow::Grid { min: -0.25, max: max.max(1.0), step: 0.005 }, XiRule::Simpson)
            }
            (_, ModelGeometry::Parabolic { .. }) => (XiWindow::Grid { min: -2.0, max: 2.0, step: 0.02 }, XiRule::Simpson),
            (_, ModelGeometry::Hyperbolic { .. }) => (XiWindow::Grid { min: -1.0, max: 1.0, step: 0.05 }, XiRule::Trapezoid),
        }
    }

    /// Closed-form boundary spectrum `û₀(ξ)` of a holomorphic entry.
    pub fn u0_oracle(&self, g: &ModelGeometry<f64>, xi: f64) -> Option<C64> {
        if !self.supports(g) {
            return None;
        }
        let zero = Complex::new(0.0, 0.0);
        match (&self.kind, g) {
            (Kind::DiscMonomial { n }, _) => Some(if xi == *n as f64 { Complex::new(1.0, 0.0) } else { zero }),
            (Kind::DiscGeometric { a }, _) => Some(if xi >= 0.0 && xi.fract() == 0.0 { Complex::new(a.powf(xi), 0.0) } else { zero }),
            (Kind::HalfplaneKernel { k, b }, ModelGeometry::Parabolic { .. }) => {
                if xi <= 0.0 {
                    return Some(zero);
                }
                let k = *k as i32;
                let fact: f64 = (1..k).map(|j| j as f64).product();
                let ln_mag = (k - 1) as f64 * xi.ln() - 2.0 * PI * b * xi;
                Some(Complex::new(0.0, -2.0 * PI).powi(k) * (ln_mag.exp() / fact))
            }
            (Kind::HyperbolicExp, ModelGeometry::Hyperbolic { lambda }) => {
                let s = Complex::new(1.0 + lambda / 2.0, -2.0 * PI * xi);
                let gamma = gamma_complex(s).ok()?;
                Some(gamma * (I * s * (PI / 2.0)).exp())
            }
            _ => None,
        }
    }

    /// Closed-form `û(ξ, y)` where known: `û₀(ξ) e^{-2πξy}` for holomorphic
    /// entries with an oracle, and the exact fibers of the non-holomorphic
    /// disc and Gaussian entries.
    pub fn spectral_oracle(&self, g: &ModelGeometry<f64>, xi: f64, y: f64) -> Option<C64> {
        if let Some(u0) = self.u0_oracle(g, xi) {
            return Some(u0 * (-2.0 * PI * xi * y).exp());
        }
        if !self.supports(g) {
            return None;
        }
        match self.kind {
            Kind::DiscAntiholo { n } => {
                Some(Complex::new(if xi == -(n as f64) { (-2.0 * PI * n as f64 * y).exp() } else { 0.0 }, 0.0))
            }
            Kind::GaussianBump { s, c, h } => Some(Complex::new(s * (-PI * s * s * xi * xi).exp() * bump((y - c) / h), 0.0)),
            _ => None,
        }
    }

    /// A known upper bound of `|u|` on `{y >= y1}`.
    pub fn sup_bound(&self, g: &ModelGeometry<f64>, y1: f64) -> Option<f64> {
        if !self.supports(g) {
            return None;
        }
        let r0 = (-2.0 * PI * y1).exp();
        match (&self.kind, g) {
            (Kind::DiscMonomial { n }, _) | (Kind::DiscAntiholo { n }, _) => Some(r0.powi(*n as i32)),
            (Kind::DiscGeometric { a }, _) => Some(1.0 / (1.0 - a.abs() * r0)),
            (Kind::HalfplaneKernel { k, b }, ModelGeometry::Parabolic { .. }) => Some((y1 + b).powi(-(*k as i32))),
            (Kind::GaussianBump { .. }, ModelGeometry::Parabolic { .. }) => Some((-1f64).exp()),
            (Kind::AnnulusBump { .. }, ModelGeometry::Parabolic { .. }) => Some((-1f64).exp()),
            _ => None,
        }
    }
}
