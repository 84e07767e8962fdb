//! The four subcommands. Each returns its rendered report, any files to
//! write, and an outcome that decides the exit code.

use std::path::PathBuf;

use clap::ValueEnum;
use mfnorm::extended::Extended;
use mfnorm::geometry::{DualFrequency, ModelGeometry};
use mfnorm::quadrature::QuadConfig;
use mfnorm::spaces::{mixed_norm, rho_closed_form, rho_numeric, rho_unnormalized_form, x_norm, NormReport};
use mfnorm::transforms::{fmt17, spectral_table};
use mfnorm::verify::{
    catalog, default_probe, default_slices, factorization_test, isometry_check, mellin_fourier_suite, plancherel_test, pw_boundedness_probe,
    pw_condition_check, pw_support_test, TestFunction,
};
use mfnorm::Error;
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::report::{ext, ext_cell, flatten_csv, freq_cell, int, num, object, opt, render};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    NotApplicable,
    Diverged,
    Fail,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Diverged => "diverged",
            Outcome::NotApplicable => "not-applicable",
        }
    }
}

pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub exit: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RhoForm {
    /// Closed form consistent with the character convention
    Derived,
    /// Closed form without the 2π factors
    Printed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Isometry,
    Support,
    Bounded,
    Factorization,
    Plancherel,
    MellinFourier,
    All,
}

impl Check {
    const EACH: [Check; 6] = [Check::Isometry, Check::Support, Check::Bounded, Check::Factorization, Check::Plancherel, Check::MellinFourier];

    fn name(self) -> &'static str {
        match self {
            Check::Isometry => "isometry",
            Check::Support => "support",
            Check::Bounded => "bounded",
            Check::Factorization => "factorization",
            Check::Plancherel => "plancherel",
            Check::MellinFourier => "mellin-fourier",
            Check::All => "all",
        }
    }
}

/// Frequencies for the Mellin–Fourier comparison.
const MELLIN_XIS: [f64; 3] = [0.0, 0.25, 1.0];

fn is_kernel(f: &TestFunction) -> bool {
    f.name == "halfplane_kernel"
}

fn default_tolerance(check: Check, cfg: &RunConfig) -> f64 {
    let f = &cfg.function;
    match check {
        Check::Isometry if is_kernel(f) => 1e-5,
        Check::Isometry | Check::Factorization => 1e-6,
        Check::Support if cfg.geometry().has_discrete_dual() => 1e-10,
        Check::Support => 1e-7,
        Check::Plancherel if is_kernel(f) => 1e-6,
        Check::Plancherel => 1e-8,
        Check::MellinFourier if f.name == "annulus_bump" => 1e-5,
        Check::MellinFourier => 1e-6,
        Check::Bounded | Check::All => 1e-6,
    }
}

fn geometry_value(g: &ModelGeometry<f64>) -> Value {
    object([("name", Value::String(g.name().into())), ("lambda", num(g.lambda()))])
}

fn function_value(f: &TestFunction) -> Value {
    let params = f.params.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    object([("name", Value::String(f.name.into())), ("params", Value::Object(params)), ("holomorphic", Value::Bool(f.holomorphic))])
}

fn context(cfg: &RunConfig) -> Vec<(&'static str, Value)> {
    vec![
        ("function", function_value(&cfg.function)),
        ("geometry", geometry_value(&cfg.geometry())),
        ("p", num(cfg.space.x.p)),
        ("q", num(cfg.space.q)),
    ]
}

fn norm_fields(r: &NormReport<f64>) -> Vec<(&'static str, Value)> {
    vec![
        ("direct", ext(r.direct)),
        ("via_weight", ext(r.via_weight)),
        ("rel_err", num(r.rel_err)),
        ("tolerance", num(r.tolerance)),
        ("pass", Value::Bool(r.pass)),
    ]
}

fn extend(base: Vec<(&'static str, Value)>, more: Vec<(&'static str, Value)>) -> Value {
    Value::Object(base.into_iter().chain(more).map(|(k, v)| (k.to_string(), v)).collect())
}

fn render_as(v: &Value, format: Format) -> String {
    match format {
        Format::Json => render(v),
        Format::Csv => flatten_csv(v),
    }
}

fn report_name(stem: &str, format: Format) -> String {
    match format {
        Format::Json => format!("{stem}.json"),
        Format::Csv => format!("{stem}.csv"),
    }
}

fn out_file(cfg: &RunConfig, name: &str, body: String) -> Option<(PathBuf, String)> {
    cfg.out_dir.as_ref().map(|dir| (dir.join(name), body))
}

/// Default probe frequencies for `rho`.
fn rho_frequencies(cfg: &RunConfig, explicit: Option<&[f64]>) -> Result<Vec<DualFrequency<f64>>, CliError> {
    let discrete = cfg.geometry().has_discrete_dual();
    if let Some(list) = explicit {
        return list
            .iter()
            .map(|&x| {
                if !discrete {
                    Ok(DualFrequency::Real(x))
                } else if x.fract() == 0.0 && x.is_finite() {
                    Ok(DualFrequency::Integer(x as i64))
                } else {
                    Err(CliError::Config(format!("the elliptic model has an integer dual; {x} is not an integer")))
                }
            })
            .collect();
    }
    if cfg.window_given {
        return Ok(cfg.space.xi_window.nodes());
    }
    Ok(if discrete {
        (0..=5).map(DualFrequency::Integer).collect()
    } else {
        [-1.0, 0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0].into_iter().map(DualFrequency::Real).collect()
    })
}

pub fn rho(cfg: &RunConfig, xis: Option<&[f64]>, form: RhoForm) -> Result<Output, CliError> {
    let spec = cfg.space.x;
    let freqs = rho_frequencies(cfg, xis)?;
    let mut body = String::from("xi,rho_numeric,rho_closed_form,ratio\n");
    for xi in freqs {
        let numeric = rho_numeric(xi, &spec, &cfg.space.quad);
        let closed = match form {
            RhoForm::Derived => rho_closed_form(xi, &spec)?,
            RhoForm::Printed => rho_unnormalized_form(xi, &spec)?,
        };
        let ratio = match (numeric, closed) {
            (Extended::Finite(a), Extended::Finite(b)) => fmt17(a / b),
            _ => String::new(),
        };
        body += &format!("{},{},{},{}\n", freq_cell(xi), ext_cell(numeric), ext_cell(closed), ratio);
    }
    let files = out_file(cfg, "rho.csv", body.clone()).into_iter().collect();
    Ok(Output { stdout: body, files, exit: 0 })
}

/// `xi,x_norm` for plotting the spectrum.
fn spectrum_csv(freqs: &[DualFrequency<f64>], norms: &[Extended<f64>]) -> String {
    let mut s = String::from("xi,x_norm\n");
    for (xi, n) in freqs.iter().zip(norms) {
        s += &format!("{},{}\n", freq_cell(*xi), ext_cell(*n));
    }
    s
}

pub fn norm(cfg: &RunConfig) -> Result<Output, CliError> {
    let f = &cfg.function;
    let g = cfg.geometry();
    let both_sides = f.holomorphic && f.square_integrable(&g);
    let (fields, exit) = if both_sides {
        let tol = cfg.tolerance.unwrap_or_else(|| default_tolerance(Check::Isometry, cfg));
        let r = isometry_check(f, &cfg.space, tol, None)?;
        let exit = if r.direct.is_infinite() || r.via_weight.is_infinite() {
            3
        } else if r.pass {
            0
        } else {
            1
        };
        (norm_fields(&r), exit)
    } else {
        let table = spectral_table(&f.model(&g)?, &cfg.space)?;
        let direct = mixed_norm(&table, &cfg.space);
        let fields = vec![
            ("direct", ext(direct)),
            ("via_weight", Value::Null),
            ("rel_err", Value::Null),
            ("tolerance", Value::Null),
            ("pass", Value::Null),
        ];
        (fields, if direct.is_finite() { 0 } else { 3 })
    };
    let mode = Value::String(if both_sides { "isometry" } else { "direct-only" }.into());
    let report = extend(context(cfg), [fields, vec![("mode", mode)]].concat());
    let stdout = render_as(&report, cfg.format);

    let mut files = Vec::new();
    if let Some(dir) = &cfg.out_dir {
        files.push((dir.join(report_name("norm", cfg.format)), stdout.clone()));
        let table = spectral_table(&f.model(&g)?, &cfg.space)?;
        let mut spectral = Vec::new();
        table.write_csv(&mut spectral)?;
        files.push((dir.join("spectral.csv"), String::from_utf8(spectral).expect("csv is utf-8")));
        let norms: Vec<Extended<f64>> = table.profiles.iter().map(|p| x_norm(p, &cfg.space.x, &cfg.space.quad)).collect();
        files.push((dir.join("spectrum.csv"), spectrum_csv(&table.frequencies, &norms)));
    }
    Ok(Output { stdout, files, exit })
}

struct CheckResult {
    outcome: Outcome,
    evidence: Vec<(&'static str, Value)>,
    files: Vec<(String, String)>,
}

impl CheckResult {
    fn new(outcome: Outcome, evidence: Vec<(&'static str, Value)>) -> Self {
        Self { outcome, evidence, files: Vec::new() }
    }

    fn verdict(pass: bool, evidence: Vec<(&'static str, Value)>) -> Self {
        Self::new(if pass { Outcome::Pass } else { Outcome::Fail }, evidence)
    }
}

fn run_check(check: Check, cfg: &RunConfig) -> Result<CheckResult, Error> {
    let f = &cfg.function;
    let g = cfg.geometry();
    let tol = cfg.tolerance.unwrap_or_else(|| default_tolerance(check, cfg));
    match check {
        Check::Isometry => {
            let r = isometry_check(f, &cfg.space, tol, None)?;
            let outcome = match (r.direct.is_infinite() || r.via_weight.is_infinite(), r.pass) {
                (true, _) => Outcome::Diverged,
                (false, true) => Outcome::Pass,
                (false, false) => Outcome::Fail,
            };
            Ok(CheckResult::new(outcome, norm_fields(&r)))
        }
        Check::Support => {
            if matches!(g, ModelGeometry::Hyperbolic { .. }) {
                return Err(Error::NotApplicable("the hyperbolic dual has no positive cone".into()));
            }
            let s = pw_support_test(f, &cfg.space)?;
            let cond = pw_condition_check(&cfg.space.x, &cfg.space.quad, &default_probe(&g), cfg.y0)?;
            let pass = !s.zero_total && s.negative_energy_ratio < tol;
            Ok(CheckResult::verdict(
                pass,
                vec![
                    ("negative_energy_ratio", num(s.negative_energy_ratio)),
                    ("negative_energy", ext(s.negative_energy)),
                    ("total_energy", ext(s.total_energy)),
                    ("zero_total", Value::Bool(s.zero_total)),
                    ("rho_infinite_on_negatives", Value::Bool(cond.rho_infinite_on_negatives)),
                    ("tolerance", num(tol)),
                ],
            ))
        }
        Check::Bounded => {
            let b = pw_boundedness_probe(f, &g, cfg.y1, None)?;
            let cond = pw_condition_check(&cfg.space.x, &cfg.space.quad, &default_probe(&g), cfg.y0)?;
            let within = b.known_bound.map_or(true, |k| b.sup_probe <= k + tol);
            let pass = b.sup_probe.is_finite() && within && cond.bdd_condition_sup.is_finite();
            Ok(CheckResult::verdict(
                pass,
                vec![
                    ("sup_probe", num(b.sup_probe)),
                    ("known_bound", opt(b.known_bound)),
                    ("y1", num(b.y1)),
                    ("r0", opt(b.r0)),
                    ("y0", num(cond.y0)),
                    ("bdd_condition_sup", ext(cond.bdd_condition_sup)),
                    ("bdd_condition_sup_at", opt(cond.sup_at)),
                    ("tolerance", num(tol)),
                ],
            ))
        }
        Check::Factorization => {
            let r = factorization_test(f, &cfg.space, &cfg.y_slices, tol)?;
            let worst = r.worst_pair.map_or(Value::Null, |(xi, a, b)| object([("xi", num(xi)), ("y_a", num(a)), ("y_b", num(b))]));
            let mut u0 = String::from("xi,re,im\n");
            for (xi, v) in &r.u0_table {
                u0 += &format!("{},{},{}\n", freq_cell(*xi), fmt17(v.re), fmt17(v.im));
            }
            let slices = Value::Array(cfg.y_slices.iter().map(|&y| num(y)).collect());
            let mut out = CheckResult::verdict(
                r.pass,
                vec![
                    ("max_rel_deviation", num(r.max_rel_deviation)),
                    ("worst_pair", worst),
                    ("compared", int(r.compared as i64)),
                    ("skipped", int(r.skipped as i64)),
                    ("y_slices", slices),
                    ("tolerance", num(tol)),
                ],
            );
            out.files.push(("u0.csv".into(), u0));
            Ok(out)
        }
        Check::Plancherel => {
            if !f.square_integrable(&g) {
                return Err(Error::NotApplicable(format!("{} is not square-integrable on the {} model", f.name, g.name())));
            }
            let r = plancherel_test(f, &cfg.space, tol)?;
            let diverged = r.direct.is_infinite() || r.via_weight.is_infinite();
            let mut ev = norm_fields(&r);
            ev[1].0 = "spectral";
            Ok(CheckResult::new(if diverged { Outcome::Diverged } else if r.pass { Outcome::Pass } else { Outcome::Fail }, ev))
        }
        Check::MellinFourier => {
            let lambda = g.lambda();
            let ys = match g {
                ModelGeometry::Hyperbolic { .. } => cfg.y_slices.clone(),
                _ => default_slices(&ModelGeometry::hyperbolic(lambda)?),
            };
            let quad = QuadConfig { rel_tol: cfg.space.quad.rel_tol.min(1e-12), abs_tol: cfg.space.quad.abs_tol.min(1e-15), ..cfg.space.quad };
            let r = mellin_fourier_suite(f, lambda, &MELLIN_XIS, &ys, &quad, tol)?;
            let points = r
                .checks
                .iter()
                .map(|(xi, y, c)| object([("xi", num(*xi)), ("y", num(*y)), ("residual", num(c.residual)), ("diverged", Value::Bool(c.diverged))]))
                .collect();
            let diverged = r.checks.iter().any(|(_, _, c)| c.diverged);
            let outcome = if diverged { Outcome::Diverged } else if r.pass { Outcome::Pass } else { Outcome::Fail };
            Ok(CheckResult::new(
                outcome,
                vec![("lambda", num(r.lambda)), ("max_residual", num(r.max_residual)), ("points", Value::Array(points)), ("tolerance", num(tol))],
            ))
        }
        Check::All => unreachable!("expanded by the caller"),
    }
}

pub fn verify(cfg: &RunConfig, which: Check) -> Result<Output, CliError> {
    let checks: Vec<Check> = if which == Check::All { Check::EACH.to_vec() } else { vec![which] };
    let mut entries = Vec::new();
    let mut outcomes = Vec::new();
    let mut extra_files = Vec::new();
    for check in checks {
        let (outcome, mut evidence, files) = match run_check(check, cfg) {
            Ok(r) => (r.outcome, r.evidence, r.files),
            Err(Error::NotApplicable(why)) => (Outcome::NotApplicable, vec![("reason", Value::String(why))], Vec::new()),
            Err(Error::Divergence(why)) => (Outcome::Diverged, vec![("reason", Value::String(why))], Vec::new()),
            Err(e) => return Err(e.into()),
        };
        evidence.push(("check", Value::String(check.name().into())));
        evidence.push(("status", Value::String(outcome.label().into())));
        entries.push(extend(evidence, Vec::new()));
        outcomes.push(outcome);
        extra_files.extend(files);
    }

    let exit = if which == Check::All {
        if outcomes.contains(&Outcome::Fail) {
            1
        } else if outcomes.contains(&Outcome::Diverged) {
            3
        } else {
            0
        }
    } else {
        match outcomes[0] {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Diverged => 3,
            Outcome::NotApplicable => 4,
        }
    };
    let overall = match exit {
        0 => "pass",
        1 => "fail",
        3 => "diverged",
        _ => "not-applicable",
    };
    let report = extend(
        context(cfg),
        vec![("checks", Value::Array(entries)), ("status", Value::String(overall.into())), ("y0", num(cfg.y0)), ("y1", num(cfg.y1))],
    );
    let stdout = render_as(&report, cfg.format);
    let mut files = Vec::new();
    if let Some(dir) = &cfg.out_dir {
        files.push((dir.join(report_name("verify", cfg.format)), stdout.clone()));
        files.extend(extra_files.into_iter().map(|(name, body)| (dir.join(name), body)));
    }
    Ok(Output { stdout, files, exit })
}

pub fn catalog_listing(json: bool) -> Output {
    let entries = catalog();
    let stdout = if json {
        let list = entries
            .iter()
            .map(|e| {
                let params = e
                    .params
                    .iter()
                    .map(|p| {
                        object([
                            ("name", Value::String(p.name.into())),
                            ("type", Value::String(p.kind.into())),
                            ("default", opt(p.default)),
                            ("doc", Value::String(p.doc.into())),
                        ])
                    })
                    .collect();
                let geometries = e.geometries.iter().map(|g| Value::String((*g).into())).collect();
                object([
                    ("name", Value::String(e.name.into())),
                    ("summary", Value::String(e.summary.into())),
                    ("geometries", Value::Array(geometries)),
                    ("holomorphic", Value::String(e.holomorphic.into())),
                    ("params", Value::Array(params)),
                ])
            })
            .collect();
        render(&object([("functions", Value::Array(list))]))
    } else {
        let mut s = String::new();
        for e in &entries {
            s += &format!("{}  [{}; holomorphic: {}]\n    {}\n", e.name, e.geometries.join(", "), e.holomorphic, e.summary);
            for p in &e.params {
                let default = p.default.map_or_else(|| "required".to_string(), |d| format!("default {d}"));
                s += &format!("    {} ({}, {}): {}\n", p.name, p.kind, default, p.doc);
            }
        }
        s
    };
    Output { stdout, files: Vec::new(), exit: 0 }
}
