//! End-to-end acceptance checks, one line of output per criterion.

use std::f64::consts::PI;
use std::process::Command;

use mfnorm::geometry::{DualFrequency, ModelGeometry};
use mfnorm::quadrature::{integrate_tail, QuadConfig};
use mfnorm::scalar::Complex;
use mfnorm::spaces::{rho_closed_form, rho_numeric, rho_unnormalized_form, SpaceConfig, XSpaceSpec, XiWindow};
use mfnorm::special::{abs_gamma, ComplexPoint};
use mfnorm::verify::*;

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn check(pass: bool, detail: String) -> Outcome {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn quad() -> QuadConfig<f64> {
    QuadConfig::default()
}

fn cfg_for(f: &TestFunction, g: ModelGeometry<f64>) -> SpaceConfig<f64> {
    let mut cfg = SpaceConfig::default_for(g);
    let (w, r) = f.default_window(&g);
    cfg.xi_window = w;
    cfg.xi_rule = r;
    cfg
}

fn elliptic_weight() -> Outcome {
    let spec = XSpaceSpec::new(2.0, ModelGeometry::Elliptic).unwrap();
    let mut worst = 0.0f64;
    for n in 0..=20i64 {
        let v = rho_numeric(DualFrequency::Integer(n), &spec, &quad()).to_float();
        let oracle = ((n + 1) as f64).sqrt().recip();
        // the same weight written over the half-line with density 4π e^{-4πy}
        let tail = integrate_tail(|y: f64| Complex::new((-4.0 * PI * y * (n + 1) as f64).exp() * 4.0 * PI, 0.0), 0.0, 4.0 * PI * (n + 1) as f64, &quad());
        worst = worst.max(rel(v, oracle)).max(rel(tail.value.re.sqrt(), oracle));
    }
    check(worst < 1e-8, format!("max rel err {worst:.3e} over 0..=20"))
}

fn parabolic_shape() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (lambda, p) in [(0.0, 2.0), (1.0, 2.0), (0.0, 1.0)] {
        let spec = XSpaceSpec::new(p, ModelGeometry::parabolic(lambda).unwrap()).unwrap();
        let xs: Vec<f64> = (0..=8).map(|k| 0.5 * 2f64.powf(k as f64 / 2.0)).collect();
        let rho: Vec<f64> = xs.iter().map(|&x| rho_numeric(DualFrequency::Real(x), &spec, &quad()).to_float()).collect();
        let expected = -(lambda + 1.0) / p;
        let slope_err = xs
            .windows(2)
            .zip(rho.windows(2))
            .map(|(x, r)| ((r[1] / r[0]).ln() / (x[1] / x[0]).ln() - expected).abs())
            .fold(0.0, f64::max);
        let ratios: Vec<f64> = xs
            .iter()
            .zip(&rho)
            .map(|(&x, &r)| r / rho_unnormalized_form(DualFrequency::Real(x), &spec).unwrap().to_float())
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        let spread = hi / lo - 1.0;
        ok &= slope_err < 1e-4 && spread < 1e-6;
        notes.push(format!("(lambda={lambda},p={p}) slope err {slope_err:.1e}, ratio to 2pi-free form {:.10} spread {spread:.1e}", ratios[0]));
    }
    check(ok, notes.join("; "))
}

fn hyperbolic_weight() -> Outcome {
    let spec = XSpaceSpec::new(2.0, ModelGeometry::hyperbolic(0.0).unwrap()).unwrap();
    let r1 = rho_numeric(DualFrequency::Real(1.0), &spec, &quad()).to_float();
    let oracle = (1.0 - (-4.0 * PI * PI).exp()) / (4.0 * PI);
    let e1 = rel(r1 * r1, oracle);
    let e2 = [0.0, 0.25, 1.0, 2.0]
        .iter()
        .map(|&x| {
            let xi = DualFrequency::Real(x);
            rel(rho_closed_form(xi, &spec).unwrap().to_float(), rho_numeric(xi, &spec, &quad()).to_float())
        })
        .fold(0.0, f64::max);
    check(e1 < 1e-8 && e2 < 1e-7, format!("rho(1)^2 rel err {e1:.2e}; closed form vs numeric {e2:.2e}"))
}

fn isometry() -> Outcome {
    let e = ModelGeometry::Elliptic;
    let f = TestFunction::disc_geometric(0.5).unwrap();
    let r = isometry_check(&f, &cfg_for(&f, e), 1e-6, None).unwrap();
    let disc_oracle = (4.0 * (4.0f64 / 3.0).ln()).sqrt();
    let (d1, v1) = (rel(r.direct.to_float(), disc_oracle), rel(r.via_weight.to_float(), disc_oracle));

    let p = ModelGeometry::parabolic(0.0).unwrap();
    let k = TestFunction::halfplane_kernel(2, 1.0).unwrap();
    let r2 = isometry_check(&k, &cfg_for(&k, p), 1e-5, None).unwrap();
    let kernel_oracle = PI.sqrt() / 2.0;
    let (d2, v2) = (rel(r2.direct.to_float(), kernel_oracle), rel(r2.via_weight.to_float(), kernel_oracle));
    check(
        r.pass && r2.pass && d1.max(v1) < 1e-6 && d2.max(v2) < r2.tolerance,
        format!(
            "disc {:.10} / {:.10} (oracle {disc_oracle:.10}); kernel {:.10} / {:.10} (oracle {kernel_oracle:.10}, budget {:.2e})",
            r.direct.to_float(),
            r.via_weight.to_float(),
            r2.direct.to_float(),
            r2.via_weight.to_float(),
            r2.tolerance
        ),
    )
}

fn factorization() -> Outcome {
    let e = ModelGeometry::Elliptic;
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [0u32, 1, 5] {
        let f = TestFunction::disc_monomial(n);
        let r = factorization_test(&f, &cfg_for(&f, e), &default_slices(&e), 1e-8).unwrap();
        ok &= r.pass;
        notes.push(format!("z^{n} {:.1e}", r.max_rel_deviation));
    }
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let h = ModelGeometry::hyperbolic(0.0).unwrap();
    for (f, g) in [(TestFunction::halfplane_kernel(2, 1.0).unwrap(), p), (TestFunction::hyperbolic_exp(), h)] {
        let r = factorization_test(&f, &cfg_for(&f, g), &default_slices(&g), 1e-6).unwrap();
        ok &= r.pass;
        notes.push(format!("{} {:.1e}", f.name, r.max_rel_deviation));
    }
    check(ok, notes.join(", "))
}

fn support() -> Outcome {
    let e = ModelGeometry::Elliptic;
    let holo = [
        TestFunction::disc_monomial(0),
        TestFunction::disc_monomial(1),
        TestFunction::disc_monomial(5),
        TestFunction::disc_geometric(0.5).unwrap(),
        TestFunction::disc_geometric(-0.7).unwrap(),
    ];
    let worst = holo.iter().map(|f| pw_support_test(f, &cfg_for(f, e)).unwrap().negative_energy_ratio).fold(0.0, f64::max);
    let conj = TestFunction::disc_antiholo(1).unwrap();
    let anti = pw_support_test(&conj, &cfg_for(&conj, e)).unwrap().negative_energy_ratio;
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let k = TestFunction::halfplane_kernel(2, 1.0).unwrap();
    let mut cfg = cfg_for(&k, p);
    cfg.xi_window = XiWindow::Grid { min: -3.0, max: 3.5, step: 0.02 };
    let kernel = pw_support_test(&k, &cfg).unwrap().negative_energy_ratio;
    check(
        worst < 1e-10 && anti > 1.0 - 1e-10 && kernel < 1e-7,
        format!("holomorphic disc max {worst:.1e}; conj(w) {anti:.12}; kernel {kernel:.1e}"),
    )
}

fn conditions() -> Outcome {
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let spec = XSpaceSpec::new(2.0, p).unwrap();
    let mut ok = true;
    let mut sups = Vec::new();
    for y0 in [0.01, 0.1, 1.0, 5.0] {
        let r = pw_condition_check(&spec, &quad(), &default_probe(&p), y0).unwrap();
        ok &= r.rho_infinite_on_negatives && r.bdd_condition_sup.is_finite();
        sups.push(format!("y0={y0}: {}", r.bdd_condition_sup));
    }
    let e = ModelGeometry::Elliptic;
    let spec1 = XSpaceSpec::new(1.0, e).unwrap();
    let r = pw_condition_check(&spec1, &quad(), &default_probe(&e), 0.1).unwrap();
    let at_minus_one = r.negative_probe.iter().find(|(x, _)| *x == -1.0).map(|(_, v)| v.to_float()).unwrap_or(f64::NAN);
    ok &= !r.rho_infinite_on_negatives && rel(at_minus_one, 2.0) < 1e-8;
    check(ok, format!("parabolic sup {}; elliptic p=1 rho(-1) = {at_minus_one:.12}", sups.join(", ")))
}

fn boundedness() -> Outcome {
    let e = ModelGeometry::Elliptic;
    let f = TestFunction::disc_geometric(0.5).unwrap();
    let y1 = -(0.4f64).ln() / (2.0 * PI);
    let r = pw_boundedness_probe(&f, &e, y1, None).unwrap();
    check(r.sup_probe <= 1.25 + 1e-6, format!("sup {:.12} at r0 = {:.6}", r.sup_probe, r.r0.unwrap_or(f64::NAN)))
}

fn plancherel() -> Outcome {
    let f = TestFunction::gaussian_bump(0.5, 0.6, 0.4).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for g in [ModelGeometry::Elliptic, ModelGeometry::parabolic(0.0).unwrap()] {
        let r = plancherel_test(&f, &cfg_for(&f, g), 1e-8).unwrap();
        ok &= r.rel_err < 1e-8;
        notes.push(format!("{} {:.1e}", g.name(), r.rel_err));
    }
    check(ok, notes.join(", "))
}

fn mellin_fourier() -> Outcome {
    let quad = QuadConfig { rel_tol: 1e-12, abs_tol: 1e-15, ..QuadConfig::default() };
    let ys = [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];
    let xis = [0.0, 0.25, 1.0];
    let mut ok = true;
    let mut notes = Vec::new();
    for lambda in [0.0, 1.0] {
        let r = mellin_fourier_suite(&TestFunction::hyperbolic_exp(), lambda, &xis, &ys, &quad, 1e-6).unwrap();
        ok &= r.pass;
        notes.push(format!("exp lambda={lambda} {:.1e}", r.max_residual));
    }
    let r = mellin_fourier_suite(&TestFunction::annulus_bump(0.5, 2.0).unwrap(), 0.0, &xis, &ys, &quad, 1e-5).unwrap();
    ok &= r.pass;
    notes.push(format!("annulus {:.1e}", r.max_residual));
    check(ok, notes.join(", "))
}

fn special_functions() -> Outcome {
    let g = abs_gamma(ComplexPoint::new(1.0, 1.0)).unwrap();
    let e1 = rel(g, (PI / PI.sinh()).sqrt());
    let mut e2 = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let (re, im) = (0.25 + 0.5 * i as f64, -10.0 + 1.0 * j as f64);
            let here = abs_gamma(ComplexPoint::new(re, im)).unwrap();
            let next = abs_gamma(ComplexPoint::new(re + 1.0, im)).unwrap();
            e2 = e2.max(rel(next, (re * re + im * im).sqrt() * here));
        }
    }
    check(e1 < 1e-10 && e2 < 1e-9, format!("|Gamma(1+i)| = {g:.16} (rel {e1:.1e}); recurrence max {e2:.1e}"))
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_mfnorm")).args(["--threads", threads, "verify", "all"]).output().expect("binary runs")
    };
    let (a, b) = (run("1"), run("8"));
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    check(
        same && a.status.code() == Some(0) && b.status.code() == Some(0),
        format!("{} bytes, identical: {same}, exits {:?}/{:?}", a.stdout.len(), a.status.code(), b.status.code()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("elliptic weight", elliptic_weight),
        ("parabolic weight shape", parabolic_shape),
        ("hyperbolic weight", hyperbolic_weight),
        ("isometry", isometry),
        ("factorization", factorization),
        ("support", support),
        ("weight conditions", conditions),
        ("boundedness probe", boundedness),
        ("plancherel", plancherel),
        ("mellin-fourier", mellin_fourier),
        ("special functions", special_functions),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
