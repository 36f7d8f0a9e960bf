//! Scenario files: TOML with a `[defaults]` table merged into every
//! `[[scenario]]`. Validation collects every problem with its field path
//! before anything runs.

use std::fmt;
use std::path::{Path, PathBuf};

use rapidec::fourier::FourierConfig;
use rapidec::nets::{Amplitude, BoxDomain, DerivativeMode, EpsilonGrid, Factor, Family, Interval, Net, TabulatedNet};
use rapidec::regular_sets::{DoubleSeqWindow, RegularSetSpec, SeqWindow, Window};
use rapidec::{Arity, FitConfig, GridPolicy, ScaleKind};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

const TOP_KEYS: &[&str] = &["schema_version", "description", "seed", "out_dir", "defaults", "scenario"];
const SCENARIO_KEYS: &[&str] = &[
    "name",
    "net",
    "spec",
    "eps_grid",
    "max_q",
    "max_l",
    "grid",
    "fit",
    "fourier",
    "margin",
    "half_boxes",
    "checks",
    "null_scales",
    "taylor_m",
    "spectrum_eps",
    "expect",
    "output",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Sweep,
    Classify,
    Intersection,
    Fourier,
    Null,
    Taylor,
}

impl Check {
    pub fn label(self) -> &'static str {
        match self {
            Check::Sweep => "sweep",
            Check::Classify => "classify",
            Check::Intersection => "intersection",
            Check::Fourier => "fourier",
            Check::Null => "null",
            Check::Taylor => "taylor",
        }
    }
}

/// Expected mixed-scale verdict for the `classify` check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub moderate: bool,
    pub negligible: bool,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub name: String,
    pub net: Net<f64>,
    pub spec: RegularSetSpec<f64>,
    pub eps_grid: EpsilonGrid<f64>,
    pub max_q: usize,
    pub max_l: usize,
    pub grid: GridPolicy,
    pub fit: FitConfig,
    pub fourier: FourierConfig,
    pub margin: f64,
    pub half_boxes: bool,
    pub checks: Vec<Check>,
    pub null_scales: Vec<ScaleKind>,
    pub taylor_m: Vec<u32>,
    pub spectrum_eps: Vec<f64>,
    pub expect: Option<Expectation>,
    pub output: String,
}

impl ScenarioConfig {
    pub fn runs(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: String,
    pub description: String,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub scenarios: Vec<ScenarioConfig>,
}

/// Every schema problem found in one file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} configuration error(s):", self.0.len())?;
        for e in &self.0 {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

struct Errors(Vec<String>);

impl Errors {
    fn push(&mut self, path: &str, msg: impl fmt::Display) {
        self.0.push(format!("{path}: {msg}"));
    }

    fn parse<T: DeserializeOwned>(&mut self, path: &str, value: &Value) -> Option<T> {
        match value.clone().try_into::<T>() {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(path, e.to_string().trim());
                None
            }
        }
    }
}

fn merge(base: &Table, over: &Table) -> Table {
    let mut out = base.clone();
    for (k, v) in over {
        match (out.get(k), v) {
            (Some(Value::Table(a)), Value::Table(b)) => {
                let merged = merge(a, b);
                out.insert(k.clone(), Value::Table(merged));
            }
            _ => {
                out.insert(k.clone(), v.clone());
            }
        }
    }
    out
}

/// Parses and validates `text`; relative tabulated-data paths resolve
/// against `base_dir`.
pub fn parse_config(text: &str, source: &str, base_dir: &Path) -> Result<RunConfig, ConfigErrors> {
    let root: Table = toml::from_str(text).map_err(|e| ConfigErrors(vec![format!("{source}: {}", e.to_string().trim())]))?;
    let mut errs = Errors(Vec::new());
    for key in root.keys() {
        if !TOP_KEYS.contains(&key.as_str()) {
            errs.push(key, "unknown field");
        }
    }
    match root.get("schema_version") {
        None => errs.push("schema_version", "required field missing"),
        Some(Value::Integer(SCHEMA_VERSION)) => {}
        Some(v) => errs.push("schema_version", format!("expected {SCHEMA_VERSION}, found {v}")),
    }
    let description = match root.get("description") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            errs.push("description", "expected a string");
            String::new()
        }
    };
    let seed = match root.get("seed") {
        None => 0,
        Some(Value::Integer(n)) if *n >= 0 => *n as u64,
        Some(_) => {
            errs.push("seed", "expected a non-negative integer");
            0
        }
    };
    let out_dir = match root.get("out_dir") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => {
            errs.push("out_dir", "expected a string");
            None
        }
    };
    let defaults = match root.get("defaults") {
        None => Table::new(),
        Some(Value::Table(t)) => {
            for key in t.keys() {
                if key == "name" || key == "output" {
                    errs.push(&format!("defaults.{key}"), "must be set per scenario");
                } else if !SCENARIO_KEYS.contains(&key.as_str()) {
                    errs.push(&format!("defaults.{key}"), "unknown field");
                }
            }
            t.clone()
        }
        Some(_) => {
            errs.push("defaults", "expected a table");
            Table::new()
        }
    };
    let mut scenarios = Vec::new();
    match root.get("scenario") {
        None => errs.push("scenario", "required field missing (at least one [[scenario]])"),
        Some(Value::Array(items)) if items.is_empty() => errs.push("scenario", "at least one scenario is required"),
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                let path = format!("scenario[{i}]");
                let Value::Table(t) = item else {
                    errs.push(&path, "expected a table");
                    continue;
                };
                if let Some(s) = scenario(&path, &merge(&defaults, t), base_dir, &mut errs) {
                    scenarios.push(s);
                }
            }
        }
        Some(_) => errs.push("scenario", "expected an array of tables"),
    }
    let mut seen = std::collections::BTreeSet::new();
    for (i, s) in scenarios.iter().enumerate() {
        if !seen.insert(s.output.clone()) {
            errs.push(&format!("scenario[{i}].output"), format!("duplicate output prefix `{}`", s.output));
        }
    }
    if errs.0.is_empty() {
        Ok(RunConfig {
            source: source.to_string(),
            description,
            seed,
            out_dir,
            scenarios,
        })
    } else {
        Err(ConfigErrors(errs.0))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EpsGridRaw {
    eps0: f64,
    ratio: f64,
    count: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DomainRaw {
    Named(String),
    Intervals(Vec<[f64; 2]>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetRaw {
    family: String,
    name: Option<String>,
    p: Option<f64>,
    d: Option<u32>,
    amplitude: Option<Amplitude<f64>>,
    factors: Option<Vec<Factor<f64>>>,
    path: Option<String>,
    domain: Option<DomainRaw>,
    dims: Option<usize>,
    mode: Option<DerivativeMode>,
    #[serde(default)]
    reflected: bool,
    max_order: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorRaw {
    Single(Vec<f64>),
    Double(Vec<Vec<f64>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRaw {
    kind: String,
    arity: Option<Arity>,
    closure_depth: Option<usize>,
    generators: Option<Vec<GeneratorRaw>>,
}

fn scenario(path: &str, t: &Table, base_dir: &Path, errs: &mut Errors) -> Option<ScenarioConfig> {
    let before = errs.0.len();
    for key in t.keys() {
        if !SCENARIO_KEYS.contains(&key.as_str()) {
            errs.push(&format!("{path}.{key}"), "unknown field");
        }
    }
    for key in ["name", "net", "eps_grid", "checks"] {
        if !t.contains_key(key) {
            errs.push(&format!("{path}.{key}"), "required field missing");
        }
    }
    let field = |key: &str| format!("{path}.{key}");

    let name: Option<String> = t.get("name").cloned().and_then(|v| errs.parse(&field("name"), &v));
    if let Some(n) = &name {
        if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            errs.push(&field("name"), "use letters, digits, `_` or `-`");
        }
    }
    let output: Option<String> = match t.get("output").cloned() {
        Some(v) => errs.parse(&field("output"), &v),
        None => name.clone(),
    };
    let eps_grid = t.get("eps_grid").cloned()
        .and_then(|v| errs.parse::<EpsGridRaw>(&field("eps_grid"), &v))
        .and_then(|r| match EpsilonGrid::new(r.eps0, r.ratio, r.count) {
            Ok(g) => Some(g),
            Err(e) => {
                errs.push(&field("eps_grid"), e);
                None
            }
        });
    let uint = |errs: &mut Errors, key: &str, default: usize| -> usize {
        t.get(key).cloned().and_then(|v| errs.parse(&field(key), &v)).unwrap_or(default)
    };
    let max_q = uint(errs, "max_q", 4);
    let max_l = uint(errs, "max_l", 4);
    if max_q > rapidec::nets::ANALYTIC_ORDER_CAP {
        errs.push(&field("max_q"), format!("must not exceed {}", rapidec::nets::ANALYTIC_ORDER_CAP));
    }
    let grid: GridPolicy = match t.get("grid").cloned() {
        Some(v) => errs.parse(&field("grid"), &v).unwrap_or_default(),
        None => GridPolicy::default(),
    };
    if let Err(e) = grid.validate() {
        errs.push(&field("grid"), e);
    }
    let fit: FitConfig = match t.get("fit").cloned() {
        Some(v) => errs.parse(&field("fit"), &v).unwrap_or_default(),
        None => FitConfig::default(),
    };
    if let Err(e) = fit.validate() {
        errs.push(&field("fit"), e);
    }
    let fourier: FourierConfig = match t.get("fourier").cloned() {
        Some(v) => errs.parse(&field("fourier"), &v).unwrap_or_default(),
        None => FourierConfig::default(),
    };
    let margin: f64 = t.get("margin").cloned().and_then(|v| errs.parse(&field("margin"), &v)).unwrap_or(0.15);
    if !(margin >= 0.0 && margin.is_finite()) {
        errs.push(&field("margin"), "must be finite and non-negative");
    }
    let half_boxes: bool = t.get("half_boxes").cloned().and_then(|v| errs.parse(&field("half_boxes"), &v)).unwrap_or(true);
    let checks: Vec<Check> = t.get("checks").cloned().and_then(|v| errs.parse(&field("checks"), &v)).unwrap_or_default();
    if t.contains_key("checks") && checks.is_empty() && errs.0.len() == before {
        errs.push(&field("checks"), "list at least one check");
    }
    let taylor_m: Vec<u32> = t.get("taylor_m").cloned().and_then(|v| errs.parse(&field("taylor_m"), &v)).unwrap_or(vec![1, 2]);
    if taylor_m.is_empty() || taylor_m.contains(&0) {
        errs.push(&field("taylor_m"), "list positive integers");
    }
    let spectrum_eps: Vec<f64> =
        t.get("spectrum_eps").cloned().and_then(|v| errs.parse(&field("spectrum_eps"), &v)).unwrap_or_default();
    let expect: Option<Expectation> = t.get("expect").cloned().and_then(|v| errs.parse(&field("expect"), &v));
    let net = t.get("net").cloned()
        .and_then(|v| errs.parse::<NetRaw>(&field("net"), &v))
        .and_then(|raw| build_net(&field("net"), raw, base_dir, errs));
    let spec = match t.get("spec").cloned() {
        Some(v) => errs
            .parse::<SpecRaw>(&field("spec"), &v)
            .and_then(|raw| build_spec(&field("spec"), raw, errs)),
        None => Some(RegularSetSpec::all(Arity::Double)),
    };
    for &eps in &spectrum_eps {
        if let Err(e) = rapidec::nets::check_eps(eps) {
            errs.push(&field("spectrum_eps"), e);
        }
    }
    let whole_space = net.as_ref().map(|n| n.domain().is_whole_space());
    let null_scales: Vec<ScaleKind> = match t.get("null_scales").cloned() {
        Some(v) => errs.parse(&field("null_scales"), &v).unwrap_or_default(),
        None => ScaleKind::ALL
            .into_iter()
            .filter(|s| *s != ScaleKind::FourierWeight || whole_space != Some(false))
            .filter(|s| *s != ScaleKind::Mixed || spec.as_ref().is_none_or(|s| s.arity() == Arity::Double))
            .collect(),
    };

    if let (Some(net), Some(spec)) = (&net, &spec) {
        let whole = net.domain().is_whole_space();
        if checks.contains(&Check::Fourier) && !whole {
            errs.push(&field("checks"), "`fourier` requires a net on the whole space R^n");
        }
        if !spectrum_eps.is_empty() && (!whole || net.dims() != 1) {
            errs.push(&field("spectrum_eps"), "spectrum export needs a one-dimensional net on R");
        }
        if spec.arity() == Arity::Single {
            for c in [Check::Intersection, Check::Fourier] {
                if checks.contains(&c) {
                    errs.push(&field("checks"), format!("`{}` needs a double-sequence spec", c.label()));
                }
            }
        }
        if checks.contains(&Check::Null) {
            for s in &null_scales {
                if *s == ScaleKind::FourierWeight && !whole {
                    errs.push(&field("null_scales"), "`fourier_weight` requires a net on the whole space R^n");
                }
                if *s == ScaleKind::Mixed && spec.arity() == Arity::Single {
                    errs.push(&field("null_scales"), "`mixed` needs a double-sequence spec");
                }
            }
        }
        if checks.contains(&Check::Taylor) && net.is_tabulated() {
            errs.push(&field("checks"), "`taylor` needs closed-form derivatives; tabulated nets are not supported");
        }
        let need_q = if checks.contains(&Check::Taylor) { max_q.max(3) } else { max_q };
        if need_q > net.max_order() {
            errs.push(
                &field("max_q"),
                format!("exceeds the net's derivative order cap {} (set net.max_order)", net.max_order()),
            );
        }
    }
    if errs.0.len() != before {
        return None;
    }
    Some(ScenarioConfig {
        name: name?,
        net: net?,
        spec: spec?,
        eps_grid: eps_grid?,
        max_q,
        max_l,
        grid,
        fit,
        fourier,
        margin,
        half_boxes,
        checks,
        null_scales,
        taylor_m,
        spectrum_eps,
        expect,
        output: output?,
    })
}

fn build_net(path: &str, raw: NetRaw, base_dir: &Path, errs: &mut Errors) -> Option<Net<f64>> {
    let before = errs.0.len();
    let mut allowed: Vec<&str> = vec!["domain", "dims", "mode", "reflected", "max_order"];
    let family = match raw.family.as_str() {
        "suite" => {
            allowed.push("name");
            None
        }
        "gaussian_peak" | "delta_net" => {
            allowed.push("p");
            let p = raw.p.unwrap_or_else(|| {
                errs.push(&format!("{path}.p"), "required field missing");
                0.0
            });
            Some(if raw.family == "gaussian_peak" {
                Family::GaussianPeak { p }
            } else {
                Family::DeltaNet { p }
            })
        }
        "oscillatory" => Some(Family::Oscillatory),
        "super_small" => Some(Family::SuperSmall),
        "poly_weight" => {
            allowed.extend(["p", "d"]);
            for (k, present) in [("p", raw.p.is_some()), ("d", raw.d.is_some())] {
                if !present {
                    errs.push(&format!("{path}.{k}"), "required field missing");
                }
            }
            Some(Family::PolyWeight {
                p: raw.p.unwrap_or(0.0),
                d: raw.d.unwrap_or(0),
            })
        }
        "product" => {
            allowed.extend(["amplitude", "factors"]);
            for (k, present) in [("amplitude", raw.amplitude.is_some()), ("factors", raw.factors.is_some())] {
                if !present {
                    errs.push(&format!("{path}.{k}"), "required field missing");
                }
            }
            Some(Family::Product {
                amplitude: raw.amplitude.unwrap_or(Amplitude::power(0.0)),
                factors: raw.factors.clone().unwrap_or_default(),
            })
        }
        "tabulated" => {
            allowed.push("path");
            match &raw.path {
                None => {
                    errs.push(&format!("{path}.path"), "required field missing");
                    None
                }
                Some(p) => match TabulatedNet::read_csv(&base_dir.join(p)) {
                    Ok(t) => Some(Family::Tabulated(t)),
                    Err(e) => {
                        errs.push(&format!("{path}.path"), e);
                        None
                    }
                },
            }
        }
        other => {
            errs.push(
                &format!("{path}.family"),
                format!(
                    "unknown family `{other}` (expected suite, gaussian_peak, delta_net, oscillatory, super_small, poly_weight, product or tabulated)"
                ),
            );
            None
        }
    };
    let provided = [
        ("name", raw.name.is_some()),
        ("p", raw.p.is_some()),
        ("d", raw.d.is_some()),
        ("amplitude", raw.amplitude.is_some()),
        ("factors", raw.factors.is_some()),
        ("path", raw.path.is_some()),
    ];
    for (k, present) in provided {
        if present && !allowed.contains(&k) {
            errs.push(&format!("{path}.{k}"), format!("not used by family `{}`", raw.family));
        }
    }
    let dims = raw.dims.unwrap_or(match &raw.family {
        f if f == "product" => raw.factors.as_ref().map_or(1, |f| f.len().max(1)),
        _ => 1,
    });
    let domain = match &raw.domain {
        None => None,
        Some(DomainRaw::Named(n)) => {
            let interval = match n.as_str() {
                "real_line" | "whole_space" => Some(Interval::real_line()),
                "positive_half_line" => Some(Interval::positive_half_line()),
                other => {
                    errs.push(
                        &format!("{path}.domain"),
                        format!("unknown domain `{other}` (expected real_line, whole_space, positive_half_line or a list of [lo, hi] pairs)"),
                    );
                    None
                }
            };
            interval.and_then(|i| match BoxDomain::new(vec![i; dims]) {
                Ok(d) => Some(d),
                Err(e) => {
                    errs.push(&format!("{path}.domain"), e);
                    None
                }
            })
        }
        Some(DomainRaw::Intervals(pairs)) => {
            if raw.dims.is_some_and(|d| d != pairs.len()) {
                errs.push(&format!("{path}.dims"), "disagrees with the number of domain intervals");
            }
            match pairs
                .iter()
                .map(|[lo, hi]| Interval::new(*lo, *hi))
                .collect::<Result<Vec<_>, _>>()
                .and_then(BoxDomain::new)
            {
                Ok(d) => Some(d),
                Err(e) => {
                    errs.push(&format!("{path}.domain"), e);
                    None
                }
            }
        }
    };
    if errs.0.len() != before {
        return None;
    }
    let mode = raw.mode.unwrap_or(if raw.family == "tabulated" {
        DerivativeMode::FiniteDifference
    } else {
        DerivativeMode::Analytic
    });
    let built = match family {
        None => {
            let Some(name) = &raw.name else {
                errs.push(&format!("{path}.name"), "required field missing");
                return None;
            };
            let Some(net) = rapidec::suite::suite_net::<f64>(name) else {
                errs.push(
                    &format!("{path}.name"),
                    format!("unknown suite net `{name}` (expected one of {})", rapidec::suite::SUITE_NAMES.join(", ")),
                );
                return None;
            };
            net.and_then(|n| match domain {
                Some(d) => n.with_domain(d),
                None => Ok(n),
            })
            .and_then(|n| if raw.mode.is_some() { n.with_mode(mode) } else { Ok(n) })
        }
        Some(f) => {
            let domain = match domain {
                Some(d) => Ok(d),
                None => BoxDomain::whole_space(dims),
            };
            domain.and_then(|d| Net::new(f, d, mode))
        }
    };
    let built = built
        .and_then(|n| match raw.max_order {
            Some(k) => n.with_max_order(k),
            None => Ok(n),
        })
        .and_then(|n| if raw.reflected { n.reflected() } else { Ok(n) });
    match built {
        Ok(n) => Some(n),
        Err(e) => {
            errs.push(path, e);
            None
        }
    }
}

fn build_spec(path: &str, raw: SpecRaw, errs: &mut Errors) -> Option<RegularSetSpec<f64>> {
    let with_depth = |s: RegularSetSpec<f64>| match raw.closure_depth {
        Some(d) => s.with_closure_depth(d),
        None => s,
    };
    if raw.generators.is_some() && raw.kind != "custom" {
        errs.push(&format!("{path}.generators"), format!("not used by kind `{}`", raw.kind));
        return None;
    }
    let result = match raw.kind.as_str() {
        "all" => Ok(RegularSetSpec::all(raw.arity.unwrap_or(Arity::Double))),
        "bounded" => Ok(RegularSetSpec::bounded(raw.arity.unwrap_or(Arity::Double))),
        "affine" => match raw.arity {
            Some(Arity::Double) => {
                errs.push(&format!("{path}.arity"), "the affine family is defined for single sequences only");
                return None;
            }
            _ => Ok(RegularSetSpec::affine()),
        },
        "custom" => {
            let Some(gens) = raw.generators else {
                errs.push(&format!("{path}.generators"), "required field missing");
                return None;
            };
            let mut windows = Vec::new();
            for (i, g) in gens.into_iter().enumerate() {
                let w = match g {
                    GeneratorRaw::Single(v) => SeqWindow::new(v).map(Window::Single),
                    GeneratorRaw::Double(rows) => {
                        let max_l = rows.first().map_or(0, |r| r.len().saturating_sub(1));
                        if rows.iter().any(|r| r.len() != max_l + 1) {
                            errs.push(&format!("{path}.generators[{i}]"), "rows must have equal length");
                            continue;
                        }
                        let max_q = rows.len().saturating_sub(1);
                        DoubleSeqWindow::new(max_q, max_l, rows.concat()).map(Window::Double)
                    }
                };
                match w {
                    Ok(w) => windows.push(w),
                    Err(e) => errs.push(&format!("{path}.generators[{i}]"), e),
                }
            }
            if let Some(a) = raw.arity {
                if windows.iter().any(|w| w.arity() != a) {
                    errs.push(&format!("{path}.arity"), "disagrees with the generator shapes");
                    return None;
                }
            }
            RegularSetSpec::custom(windows, raw.closure_depth.unwrap_or(rapidec::regular_sets::DEFAULT_CLOSURE_DEPTH))
        }
        other => {
            errs.push(
                &format!("{path}.kind"),
                format!("unknown kind `{other}` (expected all, bounded, affine or custom)"),
            );
            return None;
        }
    };
    match result {
        Ok(s) => Some(with_depth(s)),
        Err(e) => {
            errs.push(path, e);
            None
        }
    }
}
