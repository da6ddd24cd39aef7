//! Named experiments behind the command line: configuration, the individual
//! commands and the suite of reproducible checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::{
    hermite_function, make_bandlimited, make_bump, twisted_laplacian_grid, twisted_laplacian_residual, CorpusEntry,
    TestFunctionSpec, DEFAULT_KAPPA,
};
use crate::estimators::{
    derivative_growth_sequence, extrapolate_limit, gabor_moment_sequence, pw_profile_growth, pw_seminorm_check,
    wigner_field_for, wigner_moment_sequence_from_field, MomentAxis, RadiusEstimate, RadiusSequence, DEFAULT_N_MAX_1D,
    DEFAULT_N_MAX_2D,
};
use crate::io::{read_function, write_csv, write_field, write_heatmap, write_table};
use crate::polyops::{
    apply_symbol_power, poly_iterate_sequence, random_symbol, sublevel_set_box, sup_abs_on_support, verify_decomposition,
    PolySymbol, SymbolTerm,
};
use crate::report::{write_timings, Check, EstimateRecord, Report};
use crate::signal::{GridSpec, SampledFunction, SUPPORT_TAU};
use crate::transforms::identities::{
    ambiguity_stft_error, field_error_vs, moyal_error, plancherel_error, stft_fundamental_error, wigner_fourier_error,
    wigner_marginal_errors, wigner_stft_error,
};
use crate::transforms::{ambiguity, reflect, stft, translate, wigner};
use crate::weights::{check_weight_conditions, default_condition_grid, WeightFunction, WeightKind};
use crate::{Error, Result, C64};

/// Suite entries in execution order.
pub const SUITE_ENTRIES: [&str; 10] =
    ["th3A1", "prop2", "corWig1", "corWig2", "th22AD", "cor-AND", "rem2", "hermite", "identities", "young"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Estimate,
    Transform,
    WeightsCheck,
    Suite,
    Poly,
    Hermite,
}

impl Experiment {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string())).map_err(|_| Error::Config(format!("unknown experiment `{s}`")))
    }

    pub fn name(&self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    Derivative,
    WignerXi,
    WignerX,
    Gabor,
    Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Stft,
    Wigner,
    Ambiguity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub kind: WeightKind,
    #[serde(default)]
    pub a: Option<f64>,
}

impl WeightSpec {
    pub fn build(&self) -> Result<WeightFunction> {
        match self.kind {
            WeightKind::Log => Ok(WeightFunction::log()),
            WeightKind::Power => {
                let a = self.a.ok_or_else(|| Error::Config("power weight needs an exponent `a`".into()))?;
                WeightFunction::power(a).map_err(|e| Error::Config(e.to_string()))
            }
        }
    }
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { kind: WeightKind::Log, a: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SublevelSpec {
    pub radius: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    400
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSpec {
    pub k: Vec<u32>,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub half_width: f64,
    pub points: usize,
}

/// Run configuration, read from JSON; command-line flags override its fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub function: Option<String>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub window: Option<String>,
    #[serde(default)]
    pub method: Option<EstimateMethod>,
    #[serde(default)]
    pub weight: WeightSpec,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_p")]
    pub q: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub n_max: Option<u32>,
    #[serde(default)]
    pub symbol: Option<Vec<SymbolTerm>>,
    #[serde(default)]
    pub sublevel: Option<SublevelSpec>,
    #[serde(default)]
    pub decomposition: Option<DecompositionSpec>,
    #[serde(default)]
    pub transform: Option<TransformKind>,
    /// Hermite index for the hermite experiment.
    #[serde(default)]
    pub index: Option<usize>,
    /// Suite entries to run; all of [`SUITE_ENTRIES`] when absent.
    #[serde(default)]
    pub entries: Option<Vec<String>>,
    /// Relative tolerances `{"ratio": …, "root": …}` for a single estimate.
    #[serde(default)]
    pub tolerance: Option<BTreeMap<String, f64>>,
    /// Replacement tolerances keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_p() -> f64 {
    2.0
}

fn default_out() -> PathBuf {
    PathBuf::from("pwlab-out")
}

fn default_emit() -> Vec<Emit> {
    vec![Emit::Json, Emit::Csv]
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        serde_json::from_value(json!({ "experiment": experiment })).expect("defaults deserialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks enums, numeric ranges and referenced files before anything runs.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.p >= 1.0) || !(self.q >= 1.0) {
            return bad(format!("exponents p = {}, q = {} must be ≥ 1", self.p, self.q));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) || !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad("lambda and mu must be finite and non-negative".into());
        }
        self.weight.build()?;
        if let Some(n) = self.n_max {
            if n < 8 {
                return bad(format!("n_max = {n} leaves too few entries"));
            }
        }
        if let Some(f) = &self.function {
            let spec = TestFunctionSpec::parse(f, self.grid_spec()?)?;
            if let Some(p) = &spec.path {
                if !Path::new(p).exists() {
                    return bad(format!("function file `{p}` does not exist"));
                }
            }
        }
        if let Some(entries) = &self.entries {
            for e in entries {
                if !SUITE_ENTRIES.contains(&e.as_str()) {
                    return bad(format!("unknown suite entry `{e}`"));
                }
            }
        }
        for (k, v) in &self.tolerances {
            if !v.is_finite() {
                return bad(format!("tolerance for `{k}` is not finite"));
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        match self.experiment {
            Experiment::Estimate if self.function.is_none() => bad("estimate needs a function".into()),
            Experiment::Poly if self.symbol.is_none() => bad("poly needs a symbol".into()),
            Experiment::Transform if self.function.is_none() => bad("transform needs a function".into()),
            _ => Ok(()),
        }
    }

    fn grid_spec(&self) -> Result<Option<GridSpec>> {
        self.grid
            .as_ref()
            .map(|g| GridSpec::new(g.dim, g.half_width, g.points).map_err(|e| Error::Config(e.to_string())))
            .transpose()
    }

    fn emits(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }
}

/// Result of a run: the report and the wall-clock timings kept beside it.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub timings: Vec<(String, f64)>,
}

impl Outcome {
    /// 0 when every check passes, 3 when a numerical guard fired, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.guard_failure().is_some() {
            3
        } else if self.report.all_pass() {
            0
        } else {
            1
        }
    }
}

/// Exit code of a configuration error.
pub const EXIT_CONFIG: i32 = 2;

struct Ctx<'a> {
    cfg: &'a RunConfig,
    report: Report,
    timings: Vec<(String, f64)>,
}

impl Ctx<'_> {
    fn check(&mut self, c: Check) {
        let c = match self.cfg.tolerances.get(&c.name) {
            Some(&t) => c.with_tolerance(t),
            None => c,
        };
        self.report.check(c);
    }

    fn estimate(&mut self, name: &str, seq: &RadiusSequence, oracle: Option<f64>) -> Result<RadiusEstimate> {
        let est = extrapolate_limit(seq, oracle)?;
        if self.cfg.emits(Emit::Csv) {
            seq.write_csv(&self.cfg.out.join(format!("{}.csv", file_stem(name))))?;
        }
        self.report.estimates.push(EstimateRecord { name: name.to_string(), estimate: est.clone() });
        Ok(est)
    }

    fn grid(&mut self, name: &str, g: GridSpec) {
        self.report.grids.insert(name.to_string(), g);
    }

    fn data(&mut self, key: &str, v: Value) {
        self.report.data.insert(key.to_string(), v);
    }
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' }).collect()
}

/// Runs the configured experiment and writes `report.json`, `timings.json`
/// and the CSV artifacts into the output directory.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out)?;
    // where the files go and how many workers ran do not change the results
    let mut echo = serde_json::to_value(cfg)?;
    if let Some(m) = echo.as_object_mut() {
        m.remove("out");
        m.remove("threads");
    }
    let mut ctx = Ctx { cfg, report: Report::new(&cfg.experiment.name(), echo), timings: Vec::new() };
    let start = Instant::now();
    let res = match cfg.experiment {
        Experiment::Estimate => cmd_estimate(&mut ctx),
        Experiment::Transform => cmd_transform(&mut ctx),
        Experiment::WeightsCheck => cmd_weights_check(&mut ctx),
        Experiment::Suite => cmd_suite(&mut ctx),
        Experiment::Poly => cmd_poly(&mut ctx),
        Experiment::Hermite => cmd_hermite(&mut ctx),
    };
    match res {
        Err(e @ (Error::Config(_) | Error::Parameter(_))) => return Err(Error::Config(e.to_string())),
        Err(e) => ctx.report.fail(&cfg.experiment.name(), &e),
        Ok(()) => {}
    }
    ctx.timings.push(("total".into(), start.elapsed().as_secs_f64()));
    if cfg.emits(Emit::Json) {
        ctx.report.write(&cfg.out.join("report.json"))?;
        write_timings(&cfg.out.join("timings.json"), &ctx.timings)?;
    }
    Ok(Outcome { report: ctx.report, timings: ctx.timings })
}

fn load_function(cfg: &RunConfig) -> Result<CorpusEntry> {
    let name = cfg.function.as_deref().ok_or_else(|| Error::Config("no function configured".into()))?;
    let spec = TestFunctionSpec::parse(name, cfg.grid_spec()?)?;
    match &spec.path {
        Some(p) => Ok(CorpusEntry { name: name.to_string(), function: read_function(Path::new(p))?, radius: None }),
        None => spec.generate(),
    }
}

fn load_window(cfg: &RunConfig, f: &SampledFunction) -> Result<SampledFunction> {
    match cfg.window.as_deref() {
        None | Some("reflect") => Ok(reflect(f)),
        Some("self") => Ok(f.clone()),
        Some(name) => {
            let spec = TestFunctionSpec::parse(name, Some(f.grid))?;
            match &spec.path {
                Some(p) => read_function(Path::new(p)),
                None => Ok(spec.generate()?.function),
            }
        }
    }
}

fn default_n_max(cfg: &RunConfig, dim: usize) -> u32 {
    cfg.n_max.unwrap_or(if dim == 1 { DEFAULT_N_MAX_1D } else { DEFAULT_N_MAX_2D })
}

/// `max |x|_∞` over samples with `|f| ≥ τ max|f|`.
pub fn spatial_support_radius(f: &SampledFunction, tau: f64) -> f64 {
    let peak = f.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let g = f.grid;
    f.samples()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() >= tau * peak)
        .map(|(i, _)| {
            let p = g.point(i);
            p[..g.dim].iter().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .fold(0.0, f64::max)
}

fn spectral_radius(f: &SampledFunction) -> Result<f64> {
    Ok(f.forward_ft()?.support_radius_sup_norm(SUPPORT_TAU))
}

fn symbol_from(cfg: &RunConfig, dim: usize) -> Result<PolySymbol<f64>> {
    let terms = cfg.symbol.as_ref().ok_or_else(|| Error::Config("no symbol configured".into()))?;
    let p = PolySymbol::from_literal(dim, terms).map_err(|e| Error::Config(e.to_string()))?;
    p.operator_degree().map_err(|e| Error::Config(e.to_string()))?;
    Ok(p)
}

fn relative_checks(ctx: &mut Ctx, name: &str, est: &RadiusEstimate) {
    let tol = ctx.cfg.tolerance.clone().unwrap_or_default();
    if let (Some(t), Some(e)) = (tol.get("ratio"), est.rel_err_ratio) {
        ctx.check(Check::le(format!("{name}.ratio_rel_err"), e, *t));
    }
    if let (Some(t), Some(e)) = (tol.get("root"), est.rel_err_root) {
        ctx.check(Check::le(format!("{name}.root_rel_err"), e, *t));
    }
}

fn cmd_estimate(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let entry = load_function(cfg)?;
    let f = &entry.function;
    ctx.grid("function", f.grid);
    let w = cfg.weight.build()?;
    let n_max = default_n_max(cfg, f.grid.dim);
    let method = cfg.method.unwrap_or(EstimateMethod::Derivative);
    let (seq, oracle) = match method {
        EstimateMethod::Derivative => {
            (derivative_growth_sequence(f, &w, cfg.lambda, cfg.p, n_max)?, spectral_radius(f)?)
        }
        EstimateMethod::WignerXi | EstimateMethod::WignerX => {
            let axis = if method == EstimateMethod::WignerXi { MomentAxis::Xi } else { MomentAxis::X };
            let field = wigner_field_for(f, axis)?;
            let seq = wigner_moment_sequence_from_field(f, &field, axis, &w, cfg.lambda, cfg.mu, cfg.p, cfg.q, n_max)?;
            let oracle = if axis == MomentAxis::Xi { spectral_radius(f)? } else { spatial_support_radius(f, SUPPORT_TAU) };
            (seq, oracle)
        }
        EstimateMethod::Gabor => {
            let win = load_window(cfg, f)?;
            let oracle = spectral_radius(f)? + spectral_radius(&win)?;
            (gabor_moment_sequence(f, &win, &w, cfg.lambda, cfg.mu, cfg.p, cfg.q, n_max)?, oracle)
        }
        EstimateMethod::Poly => {
            let p = symbol_from(cfg, f.grid.dim)?;
            let oracle = sup_abs_on_support(&f.forward_ft()?, &p, SUPPORT_TAU);
            (poly_iterate_sequence(f, &p, &w, cfg.lambda, cfg.p, n_max)?, oracle)
        }
    };
    let est = ctx.estimate("sequence", &seq, Some(oracle))?;
    ctx.data("function", json!(entry.name));
    ctx.data("nominal_radius", json!(entry.radius));
    relative_checks(ctx, "sequence", &est);
    Ok(())
}

fn cmd_poly(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dim = cfg.grid.as_ref().map(|g| g.dim).unwrap_or_else(|| {
        cfg.symbol.as_ref().and_then(|s| s.first()).map(|t| t.index.len()).unwrap_or(1)
    });
    let p = symbol_from(cfg, dim)?;
    ctx.data("symbol", json!(p.to_string()));
    if cfg.function.is_some() {
        let entry = load_function(cfg)?;
        let f = &entry.function;
        if f.grid.dim != dim {
            return Err(Error::Config("symbol and function dimensions differ".into()));
        }
        ctx.grid("function", f.grid);
        let w = cfg.weight.build()?;
        let oracle = sup_abs_on_support(&f.forward_ft()?, &p, SUPPORT_TAU);
        let seq = poly_iterate_sequence(f, &p, &w, cfg.lambda, cfg.p, default_n_max(cfg, dim))?;
        let est = ctx.estimate("poly_iterate", &seq, Some(oracle))?;
        relative_checks(ctx, "poly_iterate", &est);
    }
    if let Some(s) = &cfg.sublevel {
        let r = sublevel_set_box(&p, s.radius, &s.lower, &s.upper, s.resolution)?;
        if cfg.emits(Emit::Csv) {
            let header: Vec<String> = (1..=dim).map(|j| format!("xi{j}")).collect();
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = r.in_set.iter().map(|p| p.iter().map(|v| crate::io::fmt_f64(*v)).collect()).collect();
            write_csv(&cfg.out.join("sublevel.csv"), &h, &rows)?;
        }
        ctx.data(
            "sublevel",
            json!({"bounded": r.bounded, "bounding_box": r.bounding_box, "escape_witness": r.escape_witness, "cell": r.cell}),
        );
    }
    if let Some(d) = &cfg.decomposition {
        let exact = integral_symbol(&p).ok_or_else(|| Error::Config("decomposition check needs integer coefficients".into()))?;
        let chk = verify_decomposition(&exact, &d.k, d.n)?;
        ctx.check(Check::holds("decomposition.identity", chk.identity_holds));
        ctx.check(Check::holds("decomposition.degree_bound", chk.degree_bound_holds));
    }
    Ok(())
}

/// The symbol with `i128` coefficients when all of them are integers of moderate size.
fn integral_symbol(p: &PolySymbol<f64>) -> Option<PolySymbol<i128>> {
    let ok = |v: f64| v.fract() == 0.0 && v.abs() < 1e12;
    let terms: Option<Vec<(Vec<u32>, Complex<i128>)>> = p
        .terms()
        .map(|(k, c)| if ok(c.re) && ok(c.im) { Some((k.clone(), Complex::new(c.re as i128, c.im as i128))) } else { None })
        .collect();
    PolySymbol::from_terms(p.dim(), terms?).ok()
}

fn cmd_transform(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let entry = load_function(cfg)?;
    let f = &entry.function;
    ctx.grid("function", f.grid);
    let kind = cfg.transform.unwrap_or(TransformKind::Wigner);
    let field = match kind {
        TransformKind::Stft => {
            let win = match cfg.window.as_deref() {
                None => f.clone(),
                Some(_) => load_window(cfg, f)?,
            };
            stft(f, &win)?
        }
        TransformKind::Wigner => wigner(f, f)?,
        TransformKind::Ambiguity => ambiguity(f)?,
    };
    ctx.grid("field_x", field.x_grid);
    ctx.grid("field_xi", field.xi_grid);
    write_field(&cfg.out.join("field.bin"), &field)?;
    if cfg.emits(Emit::Csv) {
        write_heatmap(&cfg.out.join("field.csv"), &field)?;
    }
    identity_checks(ctx, "transform", f)?;
    Ok(())
}

fn identity_checks(ctx: &mut Ctx, prefix: &str, f: &SampledFunction) -> Result<()> {
    ctx.check(Check::le(format!("{prefix}.plancherel"), plancherel_error(f)?, 1e-8));
    let (xi_marg, x_marg) = wigner_marginal_errors(f)?;
    ctx.check(Check::le(format!("{prefix}.marginal_xi"), xi_marg, 1e-6));
    ctx.check(Check::le(format!("{prefix}.marginal_x"), x_marg, 1e-6));
    ctx.check(Check::le(format!("{prefix}.moyal"), moyal_error(f)?, 1e-6));
    let g = SampledFunction::from_real_fn(f.grid, |x| (-(x[0] + 1.0).powi(2)).exp());
    ctx.check(Check::le(format!("{prefix}.stft_fundamental"), stft_fundamental_error(f, &g)?, 1e-8));
    ctx.check(Check::le(format!("{prefix}.wigner_stft"), wigner_stft_error(f)?, 1e-8));
    ctx.check(Check::le(format!("{prefix}.wigner_fourier"), wigner_fourier_error(f)?, 1e-8));
    ctx.check(Check::le(format!("{prefix}.ambiguity_stft"), ambiguity_stft_error(f)?, 1e-8));
    Ok(())
}

fn cmd_weights_check(ctx: &mut Ctx) -> Result<()> {
    let w = ctx.cfg.weight.build()?;
    weight_checks(ctx, "weights", &w)
}

/// `φ*(s) = 2s log(2s) − 2s` for `ω(t) = t^{1/2}` and `2s ≥ 1`.
pub fn sqrt_weight_conjugate(s: f64) -> f64 {
    2.0 * s * (2.0 * s).ln() - 2.0 * s
}

/// Sample grid of the conjugate checks.
pub fn conjugate_samples() -> Vec<f64> {
    (0..200).map(|i| 0.5 * 1.03f64.powi(i)).collect()
}

fn weight_checks(ctx: &mut Ctx, prefix: &str, w: &WeightFunction) -> Result<()> {
    let rep = check_weight_conditions(w, &default_condition_grid())?;
    ctx.check(Check::holds(format!("{prefix}.axioms"), rep.axioms_hold()));
    ctx.data(&format!("{prefix}.conditions"), serde_json::to_value(&rep)?);
    // the log weight has φ* = +∞ beyond slope 1
    let ss: Vec<f64> = conjugate_samples().into_iter().filter(|s| w.kind == WeightKind::Power || *s < 1.0).collect();
    let vals: Vec<f64> = ss.iter().map(|&s| w.young_conjugate(s)).collect();
    ctx.check(Check::le(format!("{prefix}.superadditivity"), superadditivity_gap(w, &ss), 1e-8));
    let quot: Vec<f64> = ss.iter().zip(&vals).map(|(s, v)| v / s).collect();
    let worst = quot.windows(2).map(|q| (q[0] - q[1]) / (1.0 + q[0].abs())).fold(f64::NEG_INFINITY, f64::max);
    ctx.check(Check::le(format!("{prefix}.conjugate_quotient_monotone"), worst.max(0.0), 1e-10));
    if w.kind == WeightKind::Power && w.a_pow == Some(0.5) {
        let err = ss
            .iter()
            .zip(&vals)
            .map(|(&s, v)| (v - sqrt_weight_conjugate(s)).abs() / (1.0 + sqrt_weight_conjugate(s).abs()))
            .fold(0.0, f64::max);
        ctx.check(Check::le(format!("{prefix}.sqrt_closed_form"), err, 1e-6));
    }
    Ok(())
}

/// `max (φ*(s) + φ*(t) − φ*(s+t)) / (1 + |φ*(s+t)|)` over sample pairs.
pub fn superadditivity_gap(w: &WeightFunction, ss: &[f64]) -> f64 {
    let mut gap = f64::NEG_INFINITY;
    for (i, &s) in ss.iter().enumerate().step_by(7) {
        for &t in ss[i..].iter().step_by(7) {
            let (a, b, c) = (w.young_conjugate(s), w.young_conjugate(t), w.young_conjugate(s + t));
            if c.is_finite() {
                gap = gap.max((a + b - c) / (1.0 + c.abs()));
            }
        }
    }
    gap
}

fn cmd_hermite(ctx: &mut Ctx) -> Result<()> {
    let k = ctx.cfg.index.unwrap_or(3);
    hermite_checks(ctx, "hermite", k)
}

fn cmd_suite(ctx: &mut Ctx) -> Result<()> {
    let entries: Vec<String> =
        ctx.cfg.entries.clone().unwrap_or_else(|| SUITE_ENTRIES.iter().map(|s| s.to_string()).collect());
    for e in entries {
        let t = Instant::now();
        let res = match e.as_str() {
            "th3A1" => suite_derivative(ctx),
            "prop2" => suite_gabor(ctx),
            "corWig1" => suite_weighted_wigner(ctx),
            "corWig2" => suite_wigner_moments(ctx),
            "th22AD" => suite_decomposition(ctx),
            "cor-AND" => suite_poly_limits(ctx),
            "rem2" => suite_sublevel(ctx),
            "hermite" => hermite_checks(ctx, "hermite", 3),
            "identities" => suite_identities(ctx),
            "young" => weight_checks(ctx, "young", &WeightFunction::power(0.5)?),
            other => Err(Error::Config(format!("unknown suite entry `{other}`"))),
        };
        match res {
            Err(err @ (Error::Config(_) | Error::Parameter(_))) => return Err(err),
            Err(err) => ctx.report.fail(&e, &err),
            Ok(()) => {}
        }
        ctx.timings.push((e, t.elapsed().as_secs_f64()));
    }
    Ok(())
}

/// Grid of the time-frequency suite entries (`dξ = 1/32`, `Ξ = 4`).
pub fn tf_grid() -> GridSpec {
    GridSpec::new(1, 32.0 * PI, 256).expect("valid grid")
}

/// Grid of the `x`-moment entry.
pub fn spatial_grid() -> GridSpec {
    GridSpec::new(1, 4.0, 512).expect("valid grid")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn max_pairwise(v: &[f64], scale: f64) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            m = m.max((v[i] - v[j]).abs() / scale);
        }
    }
    m
}

fn suite_derivative(ctx: &mut Ctx) -> Result<()> {
    let g = GridSpec::default_1d();
    ctx.grid("th3A1", g);
    let f = make_bandlimited(g, &[-1.0], &[1.0], DEFAULT_KAPPA)?.function;
    let oracle = spectral_radius(&f)?;
    let log = WeightFunction::log();
    let mut ratios = Vec::new();
    for lambda in [0.0, 0.5, 1.0] {
        for p in [1.0, 2.0] {
            let name = format!("th3A1.derivative.p{p}.lambda{lambda}");
            let est = ctx.estimate(&name, &derivative_growth_sequence(&f, &log, lambda, p, 40)?, Some(oracle))?;
            if p == 1.0 {
                ctx.check(Check::le(format!("{name}.ratio_rel_err"), est.rel_err_ratio.unwrap(), 0.01));
                ctx.check(Check::le(format!("{name}.root_rel_err"), est.rel_err_root.unwrap(), 0.03));
                ratios.push(est.ratio_limit);
            }
        }
    }
    ctx.check(Check::le("th3A1.lambda_agreement", max_pairwise(&ratios, oracle), 0.02));
    let pw = WeightFunction::power(0.5)?;
    let est = ctx.estimate("th3A1.derivative.power.p1.lambda1", &derivative_growth_sequence(&f, &pw, 1.0, 1.0, 40)?, Some(oracle))?;
    ctx.check(Check::le("th3A1.weight_agreement", (est.ratio_limit - ratios[2]).abs() / oracle, 0.02));

    for (radius, label) in [(1.1, "R1.1"), (0.8, "R0.8")] {
        let table = pw_seminorm_check(&f, radius, &log, &[0.0, 1.0], 64)?;
        if ctx.cfg.emits(Emit::Csv) {
            write_table(&ctx.cfg.out.join(format!("th3A1.pw.{label}.csv")), &table)?;
        }
        for lambda in [0.0, 1.0] {
            let growth = pw_profile_growth(&table, lambda).unwrap_or(f64::NAN);
            let name = format!("th3A1.pw.{label}.lambda{lambda}.log_growth");
            if radius > 1.0 {
                ctx.check(Check::le(name, growth, 10f64.ln()));
            } else {
                ctx.check(Check::ge(name, growth, 1e3f64.ln()));
            }
        }
    }
    Ok(())
}

fn max_root(seq: &RadiusSequence, tail: usize) -> f64 {
    let r = seq.roots();
    r.iter().skip(r.len().saturating_sub(tail)).map(|x| x.1).fold(f64::NEG_INFINITY, f64::max)
}

fn suite_gabor(ctx: &mut Ctx) -> Result<()> {
    let g = tf_grid();
    ctx.grid("prop2", g);
    let log = WeightFunction::log();
    let f = make_bandlimited(g, &[-1.0], &[1.0], DEFAULT_KAPPA)?.function;
    let rf = spectral_radius(&f)?;
    let win = reflect(&f);
    let seq = gabor_moment_sequence(&f, &win, &log, 0.0, 0.0, 2.0, 2.0, 40)?;
    let est = ctx.estimate("prop2.self_window", &seq, Some(2.0 * rf))?;
    ctx.check(Check::le("prop2.self_window.ratio_rel_err", est.rel_err_ratio.unwrap(), 0.05));

    let h = make_bandlimited(g, &[0.8], &[1.0], DEFAULT_KAPPA)?.function;
    let seq = gabor_moment_sequence(&h, &h, &log, 0.0, 0.0, 2.0, 2.0, 40)?;
    let rh = spectral_radius(&h)?;
    ctx.estimate("prop2.strict", &seq, Some(2.0 * rh))?;
    ctx.check(Check::le("prop2.strict.limsup_root", max_root(&seq, 10), 0.25));

    let wg = make_bandlimited(g, &[-0.5], &[0.5], DEFAULT_KAPPA)?.function;
    let seq = gabor_moment_sequence(&f, &wg, &log, 0.0, 0.0, 2.0, 2.0, 40)?;
    ctx.estimate("prop2.upper_bound", &seq, Some(rf + spectral_radius(&wg)?))?;
    ctx.check(Check::le("prop2.upper_bound.max_root", max_root(&seq, usize::MAX), 1.55));
    Ok(())
}

fn suite_weighted_wigner(ctx: &mut Ctx) -> Result<()> {
    let g = tf_grid();
    ctx.grid("corWig1", g);
    let f = make_bandlimited(g, &[-1.0], &[1.0], DEFAULT_KAPPA)?.function;
    let oracle = spectral_radius(&f)?;
    let field = wigner_field_for(&f, MomentAxis::Xi)?;
    let log = WeightFunction::log();
    let mut ratios = Vec::new();
    for (lambda, mu) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
        let seq = wigner_moment_sequence_from_field(&f, &field, MomentAxis::Xi, &log, lambda, mu, 2.0, 2.0, 40)?;
        let est = ctx.estimate(&format!("corWig1.lambda{lambda}.mu{mu}"), &seq, Some(oracle))?;
        ratios.push(est.ratio_limit);
    }
    ctx.check(Check::le("corWig1.weight_agreement", max_pairwise(&ratios, oracle), 0.02));
    Ok(())
}

fn suite_wigner_moments(ctx: &mut Ctx) -> Result<()> {
    let g = tf_grid();
    ctx.grid("corWig2.xi", g);
    let log = WeightFunction::log();
    let f = make_bandlimited(g, &[-1.0], &[1.0], DEFAULT_KAPPA)?.function;
    let field = wigner_field_for(&f, MomentAxis::Xi)?;
    let seq = wigner_moment_sequence_from_field(&f, &field, MomentAxis::Xi, &log, 0.0, 0.0, 2.0, 2.0, 40)?;
    let est = ctx.estimate("corWig2.xi_moment", &seq, Some(spectral_radius(&f)?))?;
    ctx.check(Check::le("corWig2.xi_moment.ratio_rel_err", est.rel_err_ratio.unwrap(), 0.05));

    let gs = spatial_grid();
    ctx.grid("corWig2.x", gs);
    let b = make_bump(gs, &[-2.0], &[2.0], DEFAULT_KAPPA)?;
    let field = wigner_field_for(&b, MomentAxis::X)?;
    let seq = wigner_moment_sequence_from_field(&b, &field, MomentAxis::X, &log, 0.0, 0.0, 2.0, 2.0, 40)?;
    let est = ctx.estimate("corWig2.x_moment", &seq, Some(spatial_support_radius(&b, SUPPORT_TAU)))?;
    ctx.check(Check::le("corWig2.x_moment.ratio_rel_err", est.rel_err_ratio.unwrap(), 0.05));
    Ok(())
}

/// Randomized `(P, k, n)` cases: `d ≤ 2`, `m ≤ 3`, `|k| ≤ 4`, `|k| ≤ n ≤ 6`.
pub fn decomposition_cases(seed: u64, count: usize) -> Vec<(PolySymbol<i128>, Vec<u32>, u32)> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.gen_range(1..=2);
            let m = rng.gen_range(1..=3);
            let p = random_symbol(&mut rng, dim, m, 3);
            let total = rng.gen_range(0..=4u32);
            let k = if dim == 1 {
                vec![total]
            } else {
                let a = rng.gen_range(0..=total);
                vec![a, total - a]
            };
            let n = rng.gen_range(total.max(1)..=6);
            (p, k, n)
        })
        .collect()
}

fn suite_decomposition(ctx: &mut Ctx) -> Result<()> {
    let cases = decomposition_cases(ctx.cfg.seed, 50);
    let (mut identity, mut degree) = (0usize, 0usize);
    for (p, k, n) in &cases {
        let c = verify_decomposition(p, k, *n)?;
        identity += c.identity_holds as usize;
        degree += c.degree_bound_holds as usize;
    }
    ctx.check(Check::ge("th22AD.identity_cases", identity as f64, cases.len() as f64));
    ctx.check(Check::ge("th22AD.degree_bound_cases", degree as f64, cases.len() as f64));

    let g = GridSpec::new(1, 32.0, 256)?;
    let f = SampledFunction::from_real_fn(g, |x| (-x[0] * x[0] / 2.0).exp());
    let sq = PolySymbol::<f64>::variable(1, 0).mul(&PolySymbol::variable(1, 0))?;
    let three = apply_symbol_power(&f, &sq, 3)?;
    let composed = apply_symbol_power(&apply_symbol_power(&f, &sq, 1)?, &sq, 2)?;
    let scale = three.max_abs();
    let err = three.samples().iter().zip(composed.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
    ctx.check(Check::le("th22AD.multiplier_composition", err, 1e-8));
    Ok(())
}

/// `ξ₁² − ξ₂² + iξ₂`, or without the imaginary term.
pub fn sublevel_example(with_imaginary: bool) -> PolySymbol<f64> {
    let mut t = vec![(vec![2, 0], C64::new(1.0, 0.0)), (vec![0, 2], C64::new(-1.0, 0.0))];
    if with_imaginary {
        t.push((vec![0, 1], C64::new(0.0, 1.0)));
    }
    PolySymbol::from_terms(2, t).expect("valid symbol")
}

fn suite_poly_limits(ctx: &mut Ctx) -> Result<()> {
    let log = WeightFunction::log();
    let g1 = GridSpec::default_1d();
    ctx.grid("cor-AND.d1", g1);
    let f = make_bandlimited(g1, &[-1.0], &[1.0], DEFAULT_KAPPA)?.function;
    let sq = PolySymbol::<f64>::variable(1, 0).mul(&PolySymbol::variable(1, 0))?;
    let oracle = sup_abs_on_support(&f.forward_ft()?, &sq, SUPPORT_TAU);
    let est = ctx.estimate("cor-AND.square", &poly_iterate_sequence(&f, &sq, &log, 0.0, 2.0, 40)?, Some(oracle))?;
    ctx.check(Check::le("cor-AND.square.ratio_rel_err", est.rel_err_ratio.unwrap(), 0.05));
    let shifted = translate(&f, &[8.0 * g1.spacing()])?;
    let est_t = ctx.estimate("cor-AND.square_translated", &poly_iterate_sequence(&shifted, &sq, &log, 0.0, 2.0, 40)?, Some(oracle))?;
    ctx.check(Check::le("cor-AND.translation_invariance", rel(est_t.ratio_limit, est.ratio_limit), 0.02));

    let g2 = GridSpec::default_2d();
    ctx.grid("cor-AND.d2", g2);
    let f2 = make_bandlimited(g2, &[-1.0, -0.5], &[1.0, 0.5], DEFAULT_KAPPA)?.function;
    let p2 = sublevel_example(true);
    let oracle2 = sup_abs_on_support(&f2.forward_ft()?, &p2, SUPPORT_TAU);
    let est = ctx.estimate("cor-AND.example_2d", &poly_iterate_sequence(&f2, &p2, &log, 0.0, 1.0, 24)?, Some(oracle2))?;
    ctx.check(Check::le("cor-AND.example_2d.ratio_rel_err", est.rel_err_ratio.unwrap(), 0.10));
    Ok(())
}

fn suite_sublevel(ctx: &mut Ctx) -> Result<()> {
    let r = sublevel_set_box(&sublevel_example(true), 1.0, &[-3.0, -3.0], &[3.0, 3.0], 600)?;
    ctx.check(Check::holds("rem2.bounded", r.bounded));
    if let Some((lo, hi)) = &r.bounding_box {
        // excess over the box [−√(R²+R), √(R²+R)] × [−R, R], in cells
        let b = [2f64.sqrt(), 1.0];
        let excess = (0..2).map(|ax| ((hi[ax] - b[ax]).max(-b[ax] - lo[ax])) / r.cell[ax]).fold(f64::NEG_INFINITY, f64::max);
        ctx.check(Check::le("rem2.box_excess_cells", excess, 1.0));
        let xi2 = ((hi[1] - 1.0).abs().max((lo[1] + 1.0).abs())) / r.cell[1];
        ctx.check(Check::le("rem2.xi2_extent_cells", xi2, 1.0));
    }
    if ctx.cfg.emits(Emit::Csv) {
        let rows: Vec<Vec<String>> = r.in_set.iter().map(|p| p.iter().map(|v| crate::io::fmt_f64(*v)).collect()).collect();
        write_csv(&ctx.cfg.out.join("rem2.sublevel.csv"), &["xi1", "xi2"], &rows)?;
    }
    ctx.data("rem2.bounding_box", json!(r.bounding_box));
    let u = sublevel_set_box(&sublevel_example(false), 1.0, &[-3.0, -3.0], &[3.0, 3.0], 600)?;
    ctx.check(Check::holds("rem2.modified_unbounded", !u.bounded && u.escape_witness.is_some()));
    ctx.data("rem2.escape_witness", json!(u.escape_witness));
    Ok(())
}

fn hermite_checks(ctx: &mut Ctx, prefix: &str, k: usize) -> Result<()> {
    let g = GridSpec::default_1d();
    ctx.grid(prefix, g);
    let e = hermite_function(k, g)?;
    let seq = derivative_growth_sequence(&e, &WeightFunction::log(), 0.0, 2.0, 40)?;
    let est = ctx.estimate(&format!("{prefix}.e{k}.derivative"), &seq, None)?;
    ctx.check(Check::holds(format!("{prefix}.e{k}.divergent"), est.divergent));
    let roots: BTreeMap<u32, f64> = seq.roots().into_iter().collect();
    if let (Some(a10), Some(a40)) = (roots.get(&10), roots.get(&40)) {
        ctx.check(Check::ge(format!("{prefix}.e{k}.root_growth_40_over_10"), a40 / a10, 3.0));
    }

    let gw = GridSpec::new(1, 16.0, 256)?;
    let e0 = hermite_function(0, gw)?;
    let w = wigner(&e0, &e0)?;
    let err = field_error_vs(&w, |x, xi| C64::new(2.0 * (-x * x - xi * xi).exp(), 0.0)) * w.max_abs();
    ctx.check(Check::le(format!("{prefix}.wigner_e0_max_err"), err, 1e-6));

    let gt = twisted_laplacian_grid();
    let mut worst: f64 = 0.0;
    for j in 0..=3 {
        for kk in 0..=3 {
            worst = worst.max(twisted_laplacian_residual(j, kk, gt)?);
        }
    }
    ctx.check(Check::le(format!("{prefix}.twisted_laplacian_residual"), worst, 1e-4));
    Ok(())
}

fn suite_identities(ctx: &mut Ctx) -> Result<()> {
    let g = GridSpec::new(1, 16.0, 256)?;
    ctx.grid("identities", g);
    let chirped = SampledFunction::from_fn(g, |x| {
        let t = x[0] - 0.75;
        C64::from_polar((-t * t / 1.5).exp(), 0.8 * x[0] + 0.1 * t * t)
    });
    for (name, f) in [("e0", hermite_function(0, g)?), ("e3", hermite_function(3, g)?), ("chirp", chirped)] {
        identity_checks(ctx, &format!("identities.{name}"), &f)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_validation() {
        let c = RunConfig::from_json(r#"{"experiment": "estimate", "function": "bandlimited:[-1,1]", "lambda": 1}"#).unwrap();
        assert_eq!(c.experiment, Experiment::Estimate);
        c.validate().unwrap();
        assert!(RunConfig::from_json(r#"{"experiment": "nope"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"experiment": "suite", "bogus": 1}"#).is_err());
        let bad = RunConfig::from_json(r#"{"experiment": "suite", "entries": ["nothing"]}"#).unwrap();
        assert!(bad.validate().is_err());
        let missing = RunConfig::from_json(r#"{"experiment": "estimate", "function": "file:/no/such.bin"}"#).unwrap();
        assert!(missing.validate().is_err());
        let w = RunConfig::from_json(r#"{"experiment": "weights-check", "weight": {"kind": "power", "a": 0.5}}"#).unwrap();
        assert_eq!(w.weight.build().unwrap().id(), "power(0.5)");
        assert_eq!(Experiment::parse("weights-check").unwrap(), Experiment::WeightsCheck);
    }

    #[test]
    fn decomposition_cases_are_reproducible() {
        let a = decomposition_cases(7, 5);
        let b = decomposition_cases(7, 5);
        assert_eq!(a, b);
        for (p, k, n) in a {
            assert!(k.iter().sum::<u32>() <= n && p.degree() >= 1);
        }
    }

    #[test]
    fn spatial_oracle() {
        let g = spatial_grid();
        let b = make_bump(g, &[-2.0], &[2.0], DEFAULT_KAPPA).unwrap();
        let r = spatial_support_radius(&b, SUPPORT_TAU);
        assert!((r - 2.0).abs() <= g.spacing());
    }

    #[test]
    fn closed_form_conjugate_at_two() {
        assert!((sqrt_weight_conjugate(2.0) - (4.0 * 4f64.ln() - 4.0)).abs() < 1e-15);
        let w = WeightFunction::power(0.5).unwrap();
        assert!((w.young_conjugate(2.0) - 1.545177444479562).abs() < 1e-6);
    }
}
