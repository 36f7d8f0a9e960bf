//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rapidec::asymptotics::{fit_exponent, fit_profile};
use rapidec::characterize::{check_fourier, check_intersection, check_null_with, measure_spatial, taylor_sweep};
use rapidec::fourier::{parseval_defect, roundtrip_error, transform};
use rapidec::nets::{compositions, seminorm_sweep};
use rapidec::regular_sets::{affine_envelope, verify_axioms};
use rapidec::{RegularSetSpec, SeqWindow};
use rapidec::suite::{builtin_suite, suite_net, whole_space_suite};
use rapidec::{Arity, AxiomStatus, CheckConfig, DecayClass, EpsilonGrid, Family, FitConfig, GridPolicy, Net, ScaleKind};

const POWER_LAW_TOL: f64 = 1e-9;
const DELTA_TABLE_TOL: f64 = 0.1;
const OSCILLATORY_DUALITY_TOL: f64 = 0.15;
const NULL_M_MAX: f64 = 8.0;
const TAYLOR_TOL: f64 = 1e-9;
const SELF_DUALITY_TOL: f64 = 1e-8;
const ROUNDTRIP_TOL: f64 = 1e-6;
const PARSEVAL_TOL: f64 = 1e-6;
const AXIOM_WINDOW: usize = 8;
const AXIOM_TRIALS: usize = 100;
const ENVELOPE_WINDOWS: usize = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn specs() -> [RegularSetSpec; 2] {
    [RegularSetSpec::all(Arity::Double), RegularSetSpec::bounded(Arity::Double)]
}

fn power_law_recovery() -> Outcome {
    let grid = EpsilonGrid::default();
    let cfg = FitConfig::default();
    let mut worst = 0.0f64;
    for p in [0.0, 0.5, 1.0, 2.0, 3.7] {
        for c in [1e-3, 1.0, 1e3] {
            let series: Vec<f64> = grid.values().iter().map(|e| c * e.powf(-p)).collect();
            let fit = fit_exponent(&series, &grid, &cfg).map_err(|e| e.to_string())?;
            worst = worst.max((fit.exponent - p).abs());
        }
    }
    check(worst <= POWER_LAW_TOL, format!("worst |p_hat - p| = {worst:.2e} (tol {POWER_LAW_TOL:e})"))
}

fn delta_table() -> Outcome {
    let net = Net::on_real_line(Family::DeltaNet { p: 1.0 }).map_err(|e| e.to_string())?;
    let profile = seminorm_sweep(&net, &EpsilonGrid::default(), 3, 3, &GridPolicy::default()).map_err(|e| e.to_string())?;
    let fits = fit_profile(&profile, &FitConfig::default()).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut misclassified = Vec::new();
    for q in 0..=3 {
        for l in 0..=3 {
            let f = fits.fit(q, l).ok_or(format!("cell ({q},{l}) has no fit"))?;
            let oracle = 1.0 + q as f64 - l as f64;
            worst = worst.max((f.exponent - oracle).abs());
            if f.decay_class != DecayClass::Polynomial {
                misclassified.push((q, l));
            }
        }
    }
    check(
        worst <= DELTA_TABLE_TOL && misclassified.is_empty(),
        format!("worst |N_hat - (1+q-l)| = {worst:.2e} (tol {DELTA_TABLE_TOL}), misclassified {misclassified:?}"),
    )
}

fn intersection_agreement() -> Outcome {
    let cfg = CheckConfig::default();
    let mut total = 0;
    let mut bad = Vec::new();
    for s in builtin_suite::<f64>().map_err(|e| e.to_string())? {
        for spec in specs() {
            total += 1;
            let r = check_intersection(&s.net, &spec, &cfg).map_err(|e| format!("{}: {e}", s.name))?;
            if !r.agree || !r.pass() {
                bad.push(format!("{}/{} {:?} {:?}", s.name, spec.label(), r.status, r.notes));
            }
        }
    }
    check(bad.is_empty(), format!("{}/{total} (net, spec) pairs agree {bad:?}", total - bad.len()))
}

fn fourier_agreement() -> Outcome {
    let cfg = CheckConfig::default();
    let mut total = 0;
    let mut bad = Vec::new();
    for s in whole_space_suite::<f64>().map_err(|e| e.to_string())? {
        for spec in specs() {
            total += 1;
            let r = check_fourier(&s.net, &spec, &cfg).map_err(|e| format!("{}: {e}", s.name))?;
            if !r.agree || !r.pass() {
                bad.push(format!("{}/{} {:?} {:?}", s.name, spec.label(), r.status, r.notes));
            }
        }
    }
    let osc = suite_net::<f64>("oscillatory").unwrap().map_err(|e| e.to_string())?;
    let spatial = measure_spatial(&osc, &cfg).map_err(|e| e.to_string())?;
    let fourier = rapidec::characterize::measure_fourier(&osc, &cfg).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for q in 0..=3 {
        let d = spatial.derivative.fit(q, 0).ok_or("missing derivative cell")?.exponent;
        let f = fourier.fit(0, q).ok_or("missing Fourier cell")?.exponent;
        worst = worst.max((d - f).abs());
    }
    check(
        bad.is_empty() && worst <= OSCILLATORY_DUALITY_TOL,
        format!(
            "{}/{total} pairs agree {bad:?}; oscillatory max |N_q - F_q| over q<=3 = {worst:.3} (tol {OSCILLATORY_DUALITY_TOL})",
            total - bad.len()
        ),
    )
}

fn null_characterizations() -> Outcome {
    let mut cfg = CheckConfig::default();
    cfg.fit.m_max = NULL_M_MAX;
    let scales = [ScaleKind::Derivative, ScaleKind::Weight, ScaleKind::FourierWeight];
    let single_specs = [
        RegularSetSpec::all(Arity::Single),
        RegularSetSpec::bounded(Arity::Single),
        RegularSetSpec::affine(),
    ];
    let mut problems = Vec::new();
    for (name, negligible) in [("super_small", true), ("gaussian_peak", false)] {
        let net = suite_net::<f64>(name).unwrap().map_err(|e| e.to_string())?;
        for scale in scales {
            let mut seen = BTreeMap::new();
            for spec in &single_specs {
                let r = check_null_with(&net, scale, spec, &cfg).map_err(|e| e.to_string())?;
                let Some(d) = r.directions else {
                    problems.push(format!("{name}/{}/{}: {:?}", scale.label(), spec.label(), r.status));
                    continue;
                };
                if !(d.forward_holds && d.converse_holds)
                    || d.zeroth_negligible != negligible
                    || d.all_negligible != negligible
                {
                    problems.push(format!("{name}/{}/{}: {d:?}", scale.label(), spec.label()));
                }
                seen.insert(spec.label(), (d.zeroth_negligible, d.all_negligible));
            }
            let distinct: std::collections::BTreeSet<_> = seen.values().collect();
            if distinct.len() > 1 {
                problems.push(format!("{name}/{}: verdict depends on the set {seen:?}", scale.label()));
            }
        }
    }
    check(
        problems.is_empty(),
        format!("super_small null in 3 scales, gaussian_peak(1) non-null in both directions, 3 sets each {problems:?}"),
    )
}

fn taylor_bound() -> Outcome {
    let cfg = CheckConfig {
        taylor_tol: TAYLOR_TOL,
        ..CheckConfig::default()
    };
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut bad = Vec::new();
    for s in builtin_suite::<f64>().map_err(|e| e.to_string())? {
        for b in taylor_sweep(&s.net, &cfg, &[1, 2]).map_err(|e| format!("{}: {e}", s.name))? {
            count += 1;
            worst = worst.max(b.max_violation);
            if !b.pass() {
                bad.push(format!("{} eps={} axis={} m={} {:?}", s.name, b.eps, b.axis, b.m, b.status));
            }
        }
    }
    check(
        bad.is_empty(),
        format!("{count} (net, eps, axis, m) runs, worst violation {worst:.2e} (tol {TAYLOR_TOL:e}) {bad:?}"),
    )
}

fn fourier_numerics() -> Outcome {
    let policy = GridPolicy::default();
    let cfg = rapidec::fourier::FourierConfig::default();
    let gauss = Net::on_real_line(Family::GaussianPeak { p: 1.0 }).map_err(|e| e.to_string())?;
    let mut duality = 0.0f64;
    for eps in EpsilonGrid::default().values() {
        let grid = gauss.grid(eps, &policy, 0, 0).map_err(|e| e.to_string())?;
        let s = transform(&gauss, eps, &grid, &cfg).map_err(|e| e.to_string())?;
        for (xi, v) in s.axes[0].xi.iter().zip(&s.axes[0].values) {
            let exact = (-xi * xi / 4.0).exp() / (2f64.sqrt() * eps);
            duality = duality.max((v * s.amplitude - exact).norm());
        }
    }
    let mut roundtrip = 0.0f64;
    let mut parseval = 0.0f64;
    for s in whole_space_suite::<f64>().map_err(|e| e.to_string())? {
        for eps in EpsilonGrid::default().values() {
            let grid = s.net.grid(eps, &policy, 0, 0).map_err(|e| e.to_string())?;
            roundtrip = roundtrip.max(roundtrip_error(&s.net, eps, &grid, &cfg).map_err(|e| e.to_string())?.absolute);
            parseval = parseval.max(parseval_defect(&s.net, eps, &grid, &cfg).map_err(|e| e.to_string())?);
        }
    }
    check(
        duality <= SELF_DUALITY_TOL && roundtrip <= ROUNDTRIP_TOL && parseval <= PARSEVAL_TOL,
        format!(
            "self-duality {duality:.2e} (tol {SELF_DUALITY_TOL:e}), roundtrip {roundtrip:.2e} (tol {ROUNDTRIP_TOL:e}), Parseval {parseval:.2e} (tol {PARSEVAL_TOL:e})"
        ),
    )
}

fn interpolation_invariant() -> Outcome {
    let policy = GridPolicy::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in builtin_suite::<f64>().map_err(|e| e.to_string())? {
        let dims = s.net.dims();
        let zero = vec![0; dims];
        for eps in EpsilonGrid::default().values() {
            let grid = s.net.grid(eps, &policy, 0, 4).map_err(|e| e.to_string())?;
            let sem = |beta: &[usize]| s.net.seminorm(eps, &zero, beta, &grid, &policy).map(|v| v.value);
            let s0 = sem(&zero).map_err(|e| e.to_string())?;
            for total in 0..=2 {
                for beta in compositions(total, dims) {
                    let double: Vec<usize> = beta.iter().map(|b| 2 * b).collect();
                    let a = sem(&beta).map_err(|e| e.to_string())?;
                    let b = sem(&double).map_err(|e| e.to_string())?;
                    checked += 1;
                    if a * a > b * s0 {
                        bad.push(format!("{} eps={eps} beta={beta:?}: {:e} > {:e}", s.name, a * a, b * s0));
                    }
                }
            }
        }
    }
    check(bad.is_empty(), format!("{checked} inequalities, {} violated {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn regular_set_algebra() -> Outcome {
    let sets = [
        RegularSetSpec::all(Arity::Single),
        RegularSetSpec::all(Arity::Double),
        RegularSetSpec::bounded(Arity::Single),
        RegularSetSpec::bounded(Arity::Double),
        RegularSetSpec::affine(),
    ];
    let mut bad = Vec::new();
    for (i, spec) in sets.iter().enumerate() {
        let r = verify_axioms(spec, AXIOM_WINDOW, AXIOM_TRIALS, 100 + i as u64).map_err(|e| e.to_string())?;
        for o in &r.outcomes {
            if o.status != AxiomStatus::Pass {
                bad.push(format!("{} {:?} {:?}", spec.label(), o.axiom, o.status));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_gap = 0.0f64;
    for _ in 0..ENVELOPE_WINDOWS {
        let len = rng.gen_range(2..=AXIOM_WINDOW);
        let values: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..20.0)).collect();
        let (a, b) = affine_envelope(&SeqWindow::new(values.clone()).map_err(|e| e.to_string())?);
        // Line search: smallest intercept forced by m = 0, then the smallest
        // slope on a 1e-5 lattice that majorizes the window.
        let b_min = values[0].max(rapidec::regular_sets::MIN_AFFINE_INTERCEPT);
        let majorizes = |slope: f64, icpt: f64| values.iter().enumerate().all(|(m, &v)| slope * m as f64 + icpt >= v);
        let step = 1e-5;
        let mut k = 0u64;
        while !majorizes(k as f64 * step, b_min) {
            k += 1;
        }
        let brute = k as f64 * step;
        if !majorizes(a, b) || (b - b_min).abs() > 1e-12 || a > brute + 1e-12 || a < brute - step - 1e-12 {
            bad.push(format!("window {values:?}: envelope ({a}, {b}) vs brute ({brute}, {b_min})"));
        }
        worst_gap = worst_gap.max(brute - a);
    }
    check(
        bad.is_empty(),
        format!(
            "axioms R1-R3 pass for 5 sets (window {AXIOM_WINDOW}, {AXIOM_TRIALS} trials); {ENVELOPE_WINDOWS} affine envelopes optimal (max lattice gap {worst_gap:.1e}) {bad:?}"
        ),
    )
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .map(|rd| {
            rd.filter_map(Result::ok)
                .map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut trees = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_rapidec"))
            .args(["run", "suite_gs.cfg", "--no-timestamp", "--out", out.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if status.status.code() != Some(0) {
            return Err(format!("run {run} exited {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
        }
        trees.push(read_tree(&out));
    }
    let files = trees[0].len();
    let csv = trees[0].keys().filter(|k| k.ends_with(".csv")).count();
    check(
        files > 0 && trees[0] == trees[1] && trees[0].contains_key("report.json"),
        format!("{files} files ({csv} CSV + report.json) byte-identical across two runs"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact power-law recovery", power_law_recovery),
        ("DeltaNet exponent table", delta_table),
        ("intersection theorem agreement", intersection_agreement),
        ("Fourier theorem agreement", fourier_agreement),
        ("null characterizations", null_characterizations),
        ("Taylor derivative bound", taylor_bound),
        ("Fourier numerics", fourier_numerics),
        ("interpolation invariant", interpolation_invariant),
        ("regular-set algebra", regular_set_algebra),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2} {name}: {detail} ({:.1}s)", i + 1, started.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
