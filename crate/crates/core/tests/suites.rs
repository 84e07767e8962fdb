use std::f64::consts::PI;

use mfnorm::geometry::{DualFrequency, ModelGeometry};
use mfnorm::quadrature::QuadConfig;
use mfnorm::spaces::{SpaceConfig, XiRule, XiWindow};
use mfnorm::verify::*;

fn cfg_for(f: &TestFunction, g: ModelGeometry<f64>) -> SpaceConfig<f64> {
    let mut cfg = SpaceConfig::default_for(g);
    let (w, r) = f.default_window(&g);
    cfg.xi_window = w;
    cfg.xi_rule = r;
    cfg
}

#[test]
fn kernel_factorization_matches_oracle() {
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let f = TestFunction::halfplane_kernel(2, 1.0).unwrap();
    let cfg = cfg_for(&f, p);
    let r = factorization_test(&f, &cfg, &default_slices(&p), 1e-6).unwrap();
    assert!(r.pass, "{} at {:?}", r.max_rel_deviation, r.worst_pair);
    assert!(r.compared > 100);
    let u0 = extract_u0(&f, &cfg, DualFrequency::Real(1.0), 0.5).unwrap();
    let oracle = f.u0_oracle(&p, 1.0).unwrap();
    assert!((u0 - oracle).norm() / oracle.norm() < 1e-6);
}

#[test]
fn hyperbolic_exp_factorization_matches_oracle() {
    let h = ModelGeometry::hyperbolic(0.0).unwrap();
    let f = TestFunction::hyperbolic_exp();
    let cfg = cfg_for(&f, h);
    let r = factorization_test(&f, &cfg, &default_slices(&h), 1e-6).unwrap();
    assert!(r.pass, "{} at {:?}", r.max_rel_deviation, r.worst_pair);
    for y in [PI / 4.0, PI / 2.0] {
        let u0 = extract_u0(&f, &cfg, DualFrequency::Real(0.25), y).unwrap();
        let oracle = f.u0_oracle(&h, 0.25).unwrap();
        assert!((u0 - oracle).norm() / oracle.norm() < 1e-6, "{u0} vs {oracle}");
    }
}

#[test]
fn kernel_support() {
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let f = TestFunction::halfplane_kernel(2, 1.0).unwrap();
    let mut cfg = cfg_for(&f, p);
    cfg.xi_window = XiWindow::Grid { min: -3.0, max: 3.5, step: 0.02 };
    let r = pw_support_test(&f, &cfg).unwrap();
    assert!(r.negative_energy_ratio < 1e-7);
}

#[test]
fn plancherel_gaussian_bumps() {
    let f = TestFunction::gaussian_bump(0.5, 0.6, 0.4).unwrap();
    for g in [ModelGeometry::Elliptic, ModelGeometry::parabolic(0.0).unwrap()] {
        let cfg = cfg_for(&f, g);
        let r = plancherel_test(&f, &cfg, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn mellin_fourier_grids() {
    let quad = QuadConfig { rel_tol: 1e-12, abs_tol: 1e-15, ..QuadConfig::default() };
    let ys = [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];
    for lambda in [0.0, 1.0] {
        let r = mellin_fourier_suite(&TestFunction::hyperbolic_exp(), lambda, &[0.0, 0.25, 1.0], &ys, &quad, 1e-6).unwrap();
        assert!(r.pass, "{}", r.max_residual);
    }
    let annulus = TestFunction::annulus_bump(0.5, 2.0).unwrap();
    let r = mellin_fourier_suite(&annulus, 0.0, &[0.0, 0.25, 1.0], &ys, &quad, 1e-5).unwrap();
    assert!(r.pass);
}

#[test]
fn non_holomorphic_entries_fail_factorization() {
    let e = ModelGeometry::Elliptic;
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let bump = TestFunction::gaussian_bump(0.5, 0.6, 0.4).unwrap();
    let mut cfg = cfg_for(&bump, p);
    cfg.xi_window = XiWindow::Grid { min: -2.0, max: 2.0, step: 0.25 };
    assert!(!factorization_test(&bump, &cfg, &[0.4, 0.6, 0.8], 1e-6).unwrap().pass);
    let anti = TestFunction::disc_antiholo(2).unwrap();
    assert!(!factorization_test(&anti, &cfg_for(&anti, e), &default_slices(&e), 1e-6).unwrap().pass);
    let annulus = TestFunction::annulus_bump(0.5, 2.0).unwrap();
    cfg.xi_window = XiWindow::Grid { min: -1.0, max: 1.0, step: 0.25 };
    assert!(!factorization_test(&annulus, &cfg, &[0.5, 1.0, 1.5], 1e-6).unwrap().pass);
}

#[test]
fn grid_csv_round_trip_through_a_file() {
    let dir = std::env::temp_dir().join(format!("mfnorm-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("samples.csv");
    let mut text = String::from("x,y,re,im\n");
    for j in 0..5 {
        for i in 0..9 {
            let (x, y) = (-2.0 + 0.5 * i as f64, 0.25 * (j + 1) as f64);
            text += &format!("{x},{y},{},0\n", (-x * x).exp() * y);
        }
    }
    std::fs::write(&path, text).unwrap();
    let f = TestFunction::grid_csv(&path, false).unwrap();
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let m = f.model(&p).unwrap();
    assert!(((m.sampler)(0.0, 0.5).re - 0.5).abs() < 1e-15);
    assert_eq!((m.sampler)(3.0, 0.5).norm(), 0.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn simpson_rule_is_available_for_windows() {
    let p = ModelGeometry::parabolic(0.0).unwrap();
    let (_, rule) = TestFunction::halfplane_kernel(2, 1.0).unwrap().default_window(&p);
    assert_eq!(rule, XiRule::Simpson);
}
