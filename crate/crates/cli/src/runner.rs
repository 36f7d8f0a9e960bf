//! Executes validated scenarios and assembles the run report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rapidec::asymptotics::{classify, fit_profile, MembershipVerdict};
use rapidec::characterize::{
    check_fourier, check_intersection, check_null_with, taylor_sweep, BoundReport, CheckConfig, TheoremReport,
};
use rapidec::fourier::{fourier_sweep, transform, SpectralSamples};
use rapidec::nets::seminorm_sweep;
use rapidec::regular_sets::{project_col_zero, project_row_zero, verify_axioms, AxiomReport, RegularSetSpec};
use rapidec::{Arity, AxiomStatus, ExponentProfile, ScaleKind};
use serde::Serialize;

use crate::config::{Check, RunConfig, ScenarioConfig};
use crate::error::CliError;
use crate::output;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
/// Window size and trial count for the axiom check of `classify`.
pub const AXIOM_WINDOW: usize = 8;
pub const AXIOM_TRIALS: usize = 100;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// `None` suppresses the `# generated:` CSV line, the JSON `generated`
    /// field and timings.
    pub timestamp: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaylorSummary {
    pub reports: usize,
    pub worst_violation: f64,
    pub worst_relative_violation: f64,
    pub failing: Vec<BoundReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub net: String,
    pub spec: String,
    pub checks: Vec<Check>,
    pub profiles: BTreeMap<&'static str, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<String>,
    pub verdicts: Vec<MembershipVerdict<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport<f64>>,
    pub theorems: Vec<TheoremReport<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor: Option<TaylorSummary>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    pub pass: bool,
    #[serde(skip)]
    pub fits: BTreeMap<&'static str, ExponentProfile>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub source: String,
    pub description: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<String>,
    pub scenarios: Vec<ScenarioReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn check_config(s: &ScenarioConfig) -> CheckConfig<f64> {
    CheckConfig {
        eps_grid: s.eps_grid,
        max_q: s.max_q,
        max_l: s.max_l,
        grid: s.grid,
        fit: s.fit,
        fourier: s.fourier,
        margin: s.margin,
        half_boxes: s.half_boxes,
        ..CheckConfig::default()
    }
}

/// Set each single scale is classified against.
fn scale_spec(spec: &RegularSetSpec<f64>, scale: ScaleKind) -> rapidec::Result<RegularSetSpec<f64>> {
    match (spec.arity(), scale) {
        (Arity::Single, _) => Ok(spec.clone()),
        (Arity::Double, ScaleKind::Mixed) => Ok(spec.clone()),
        (Arity::Double, ScaleKind::Weight) => project_col_zero(spec),
        (Arity::Double, _) => project_row_zero(spec),
    }
}

fn run_scenario(s: &ScenarioConfig, seed: u64, opts: &RunOptions) -> Result<ScenarioReport, CliError> {
    let started = Instant::now();
    let mut report = ScenarioReport {
        name: s.name.clone(),
        net: s.net.label(),
        spec: s.spec.label(),
        checks: s.checks.clone(),
        profiles: BTreeMap::new(),
        spectrum: None,
        verdicts: Vec::new(),
        axioms: None,
        theorems: Vec::new(),
        taylor: None,
        failures: Vec::new(),
        elapsed_ms: None,
        pass: true,
        fits: BTreeMap::new(),
    };
    if let Err(e) = run_checks(s, seed, opts, &mut report) {
        match e {
            Failure::Core(e) => report.failures.push(format!("numerical error: {e}")),
            Failure::Cli(e) => return Err(e),
        }
    }
    report.pass = report.failures.is_empty();
    if opts.timestamp.is_some() {
        report.elapsed_ms = Some(started.elapsed().as_millis());
    }
    Ok(report)
}

enum Failure {
    Core(rapidec::Error),
    Cli(CliError),
}

impl From<rapidec::Error> for Failure {
    fn from(e: rapidec::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Cli(e)
    }
}

fn run_checks(s: &ScenarioConfig, seed: u64, opts: &RunOptions, report: &mut ScenarioReport) -> Result<(), Failure> {
    let cfg = check_config(s);
    let stamp = opts.timestamp.as_deref();
    let whole = s.net.domain().is_whole_space();
    if s.runs(Check::Sweep) || s.runs(Check::Classify) {
        let mixed = seminorm_sweep(&s.net, &s.eps_grid, s.max_q, s.max_l, &s.grid)?;
        let mut profiles = vec![
            (ScaleKind::Mixed, mixed.clone()),
            (ScaleKind::Derivative, mixed.restrict(ScaleKind::Derivative)?),
            (ScaleKind::Weight, mixed.restrict(ScaleKind::Weight)?),
        ];
        if whole {
            profiles.push((
                ScaleKind::FourierWeight,
                fourier_sweep(&s.net, &s.eps_grid, s.max_l, &s.grid, &s.fourier)?,
            ));
        }
        for (scale, profile) in profiles {
            let fit = fit_profile(&profile, &s.fit)?;
            if s.runs(Check::Sweep) {
                let file = format!("{}.{}.csv", s.output, scale.label());
                output::write_profile(&opts.out_dir.join(&file), &fit, stamp)?;
                report.profiles.insert(scale.label(), file);
            }
            if s.runs(Check::Classify) && (scale != ScaleKind::Mixed || s.spec.arity() == Arity::Double) {
                let verdict = classify(&fit, &scale_spec(&s.spec, scale)?, &s.fit)?;
                if verdict.indeterminate {
                    report.failures.push(format!("classify {}: indeterminate", scale.label()));
                }
                report.verdicts.push(verdict);
            }
            report.fits.insert(scale.label(), fit);
        }
        if let (true, Some(expect)) = (s.runs(Check::Classify), s.expect) {
            let first = report.verdicts.first().and_then(MembershipVerdict::key);
            if first != Some((expect.moderate, expect.negligible)) {
                report.failures.push(format!(
                    "classify: expected moderate={} negligible={}, found {:?}",
                    expect.moderate, expect.negligible, first
                ));
            }
        }
        if s.runs(Check::Classify) {
            let axioms = verify_axioms(&s.spec, AXIOM_WINDOW, AXIOM_TRIALS, seed)?;
            for o in &axioms.outcomes {
                if o.status == AxiomStatus::Fail {
                    report.failures.push(format!("axiom {:?} fails for {}", o.axiom, s.spec.label()));
                }
            }
            report.axioms = Some(axioms);
        }
    }
    if s.runs(Check::Sweep) && !s.spectrum_eps.is_empty() {
        let spectra = s
            .spectrum_eps
            .iter()
            .map(|&eps| transform(&s.net, eps, &s.net.grid(eps, &s.grid, 0, 0)?, &s.fourier))
            .collect::<rapidec::Result<Vec<SpectralSamples<f64>>>>()?;
        let file = format!("{}.spectrum.csv", s.output);
        output::write_spectra(&opts.out_dir.join(&file), &spectra, stamp)?;
        report.spectrum = Some(file);
    }
    let mut theorems = Vec::new();
    if s.runs(Check::Intersection) {
        theorems.push(check_intersection(&s.net, &s.spec, &cfg)?);
    }
    if s.runs(Check::Fourier) {
        theorems.push(check_fourier(&s.net, &s.spec, &cfg)?);
    }
    if s.runs(Check::Null) {
        for &scale in &s.null_scales {
            theorems.push(check_null_with(&s.net, scale, &scale_spec(&s.spec, scale)?, &cfg)?);
        }
    }
    for t in &theorems {
        if !t.pass() {
            report.failures.push(format!("{}: {:?}", t.theorem.label(), t.status));
        }
    }
    report.theorems = theorems;
    if s.runs(Check::Taylor) {
        let bounds = taylor_sweep(&s.net, &cfg, &s.taylor_m)?;
        let summary = TaylorSummary {
            reports: bounds.len(),
            worst_violation: bounds.iter().map(|b| b.max_violation).fold(0.0, f64::max),
            worst_relative_violation: bounds.iter().map(|b| b.max_relative_violation).fold(0.0, f64::max),
            pass: bounds.iter().all(BoundReport::pass),
            failing: bounds.into_iter().filter(|b| !b.pass()).collect(),
        };
        if !summary.pass {
            report.failures.push(format!(
                "taylor: {} bound(s) fail, worst violation {:e}",
                summary.failing.len(),
                summary.worst_violation
            ));
        }
        report.taylor = Some(summary);
    }
    Ok(())
}

pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<RunReport, CliError> {
    fs::create_dir_all(&opts.out_dir).map_err(|source| CliError::Io {
        path: opts.out_dir.clone(),
        source,
    })?;
    let scenarios = config
        .scenarios
        .iter()
        .map(|s| run_scenario(s, config.seed, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let report = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        source: config.source.clone(),
        description: config.description.clone(),
        seed: config.seed,
        generated: opts.timestamp.clone(),
        pass: scenarios.iter().all(|s| s.pass),
        scenarios,
    };
    output::write_json(&report_path(&opts.out_dir), &report)?;
    Ok(report)
}

pub fn report_path(out_dir: &Path) -> PathBuf {
    out_dir.join("report.json")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn exponent_cell(fit: Option<&ExponentProfile>, q: usize, l: usize) -> String {
    match fit.and_then(|f| f.fit(q, l)) {
        Some(f) if f.decay_class.is_negligible() => f.decay_class.label().to_string(),
        Some(f) => format!("{:.2}", f.exponent),
        None => "-".into(),
    }
}

/// Plain-text summary: one row per classified scale and per theorem check.
pub fn summary_table(report: &RunReport) -> String {
    let mut rows: Vec<[String; 6]> = vec![[
        "scenario".into(),
        "scale/check".into(),
        "moderate".into(),
        "negligible".into(),
        "N[0,0]  N[max]".into(),
        "result".into(),
    ]];
    for s in &report.scenarios {
        for v in &s.verdicts {
            let fit = s.fits.get(v.scale.label());
            let (q, l) = fit.map_or((0, 0), |f| match v.scale {
                ScaleKind::Mixed => (f.max_q, f.max_l),
                ScaleKind::Derivative => (f.max_q, 0),
                _ => (0, f.max_l),
            });
            rows.push([
                s.name.clone(),
                v.scale.label().into(),
                yes_no(v.moderate).into(),
                yes_no(v.negligible).into(),
                format!("{:>6}  {:>6}", exponent_cell(fit, 0, 0), exponent_cell(fit, q, l)),
                if v.indeterminate { "indeterminate".into() } else { "classified".into() },
            ]);
        }
        for t in &s.theorems {
            let (m, n) = t.lhs.as_ref().or(t.rhs.first()).map_or(("-", "-"), |v| (yes_no(v.moderate), yes_no(v.negligible)));
            let result = match t.directions {
                Some(d) => format!("{:?} (zeroth={}, all={})", t.status, d.zeroth_negligible, d.all_negligible),
                None => format!("{:?} agree={}", t.status, t.agree),
            };
            rows.push([s.name.clone(), t.theorem.label().into(), m.into(), n.into(), String::new(), result]);
        }
        if let Some(t) = &s.taylor {
            rows.push([
                s.name.clone(),
                "taylor".into(),
                String::new(),
                String::new(),
                format!("worst {:.2e}", t.worst_violation),
                if t.pass { "Pass".into() } else { "Fail".into() },
            ]);
        }
        for f in &s.failures {
            rows.push([s.name.clone(), "failure".into(), String::new(), String::new(), String::new(), f.clone()]);
        }
    }
    let widths: Vec<usize> = (0..6).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
        if i == 0 {
            out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
            out.push('\n');
        }
    }
    out.push_str(if report.pass { "overall: PASS\n" } else { "overall: FAIL\n" });
    out
}
