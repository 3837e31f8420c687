use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bfc::bks::{gamma_search_in, parameters_for_epsilon, reduce_w1, Branch, HistogramBin};
use bfc::enumeration::{default_catalog_dir, enumerate_with, Catalog, Mode, Strategy};
use bfc::exact::parse_rational;
use bfc::hypercube::{degree_weight, wht, FourierSpectrum, Level, TruthTable};
use bfc::khintchine::{
    dist_to_extremal, dist_to_w_star, ell_moments, is_canonical, khintchine_constant, robust_scan, write_csv,
    ScanConfig, MAX_MOMENT_DIM,
};
use bfc::ltf::{make_proper, Ltf, WeightVector};
use bfc::tomaszewski::{t_exact, t_in, t_out, t_sphere_in, reduce_dimension_t, DimensionBranch};
use bfc::verify::{all_passed, check_keys, run_suite, VerifyConfig};
use bfc::{Error, HypercubeFunction};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bfc", version, about = "Fourier analysis and extremal constants of linear threshold functions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Catalog cache directory.
    #[arg(long, global = true, env = "BFC_CATALOG_DIR")]
    catalog: Option<PathBuf>,
    /// Output format (default: json, or a text matrix for `verify`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier spectrum of a threshold function or a stored table.
    Fourier(FourierArgs),
    /// Khintchine constant, distance to the extremal vectors, and moments of |w·x|.
    Khintchine {
        /// Comma-separated weights, e.g. "1/2,1/2,1/2,1/2".
        #[arg(long)]
        w: String,
    },
    /// Empirical robustness constant over a grid of proper unit vectors.
    ScanRobust(ScanArgs),
    /// Enumerate threshold functions up to variable permutation and negation.
    Enumerate(EnumerateArgs),
    /// Minimum degree-≤1 Fourier weight over zero-threshold LTFs.
    Bks(BksArgs),
    /// Tail probabilities Pr[|w·x| ≤ a] and the sphere constant.
    Tom(TomArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FourierArgs {
    /// Threshold function "w1,...,wn[;theta]".
    #[arg(long, conflicts_with_all = ["table", "spectrum"])]
    ltf: Option<String>,
    /// Truth table file (JSON or binary container).
    #[arg(long, conflicts_with = "spectrum")]
    table: Option<PathBuf>,
    /// Spectrum file (JSON or binary container); prints the inverse transform.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Read weights and threshold as exact rationals.
    #[arg(long)]
    exact: bool,
    /// Include every coefficient (n ≤ 10).
    #[arg(long)]
    coefficients: bool,
    /// Write the spectrum to this file in the binary container format.
    #[arg(long)]
    write_spectrum: Option<PathBuf>,
    /// Write the truth table to this file in the binary container format.
    #[arg(long)]
    write_table: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Dimensions to scan.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    n: Vec<usize>,
    /// Grid denominator (0 disables the grid).
    #[arg(long, default_value_t = 8)]
    den: u32,
    #[arg(long, default_value_t = 0.1)]
    d_min: f64,
    /// Uniform sphere samples per dimension.
    #[arg(long, default_value_t = 0)]
    sphere: usize,
    /// Radii of perturbations around (1/√2, 1/√2, 0, …).
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    per_radius: usize,
    /// Write every sample as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// all | zero-threshold
    #[arg(long, default_value = "all")]
    mode: String,
    /// Comma-separated strategies to run and cross-check; default uses the cache.
    #[arg(long, value_delimiter = ',', value_enum)]
    strategies: Vec<StrategyArg>,
    /// Include every record (n ≤ 4).
    #[arg(long)]
    records: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Scan,
    Vertex,
    Walk,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Scan => Strategy::Scan,
            StrategyArg::Vertex => Strategy::Vertex,
            StrategyArg::Walk => Strategy::Walk,
        }
    }
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct BksArgs {
    #[command(subcommand)]
    action: Option<BksAction>,
    /// Number of variables K.
    #[arg(long)]
    k: Option<usize>,
    /// Print the advisory ε-to-(K, M) map instead of searching.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Subcommand)]
enum BksAction {
    /// Trace the variable-reduction pipeline on one weight vector.
    Reduce {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        delta: f64,
        /// Number of Booleanized tail coordinates.
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct TomArgs {
    #[command(subcommand)]
    action: Option<TomAction>,
    /// Comma-separated weights.
    #[arg(long)]
    w: Option<String>,
    /// Tail threshold a.
    #[arg(long, default_value = "1")]
    a: String,
    /// Exact rational evaluation.
    #[arg(long)]
    exact: bool,
    /// With --exact, scale w to unit norm symbolically.
    #[arg(long)]
    normalize: bool,
}

#[derive(Subcommand)]
enum TomAction {
    /// T(𝕊^{m−1}) from the separable sets of the m-dimensional cube.
    Sphere {
        #[arg(long)]
        m: usize,
    },
    /// Dimension reduction preserving T up to ε.
    Reduce {
        #[arg(long)]
        w: String,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these checks.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// List check keys and exit.
    #[arg(long)]
    list: bool,
}

/// Failure modes, each with its own exit code.
enum Failure {
    Usage(String),
    Indeterminate(String),
    Verification,
    Runtime(String),
}

impl Failure {
    fn flag(flag: &str, e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Domain(_) | Error::DimensionOverflow { .. } | Error::DimensionMismatch(..) => {
                Failure::Usage(format!("invalid value for {flag}: {e}"))
            }
            e => e.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Indeterminate(m) => Failure::Indeterminate(m),
            e @ (Error::Parse(_) | Error::Domain(_) | Error::DimensionOverflow { .. } | Error::DimensionMismatch(..)) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Indeterminate(m)) => {
            eprintln!("error: numerically indeterminate: {m}");
            eprintln!("hint: pass exact rational weights with --exact (e.g. --w \"3/5,4/5\" --exact)");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let catalog_dir = g.catalog.clone().unwrap_or_else(default_catalog_dir);
    let report = match &cli.command {
        Command::Fourier(a) => fourier(a)?,
        Command::Khintchine { w } => khintchine(w)?,
        Command::ScanRobust(a) => scan_robust(a, g.seed)?,
        Command::Enumerate(a) => enumerate(a, &catalog_dir)?,
        Command::Bks(a) => bks(a, &catalog_dir)?,
        Command::Tom(a) => tom(a, &catalog_dir)?,
        Command::Verify(a) => return verify(a, g, &catalog_dir),
    };
    emit(&report, g.format.unwrap_or(Format::Json));
    Ok(())
}

fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("values serialize")),
        Format::Text => {
            if let Value::Object(map) = v {
                for (k, val) in map {
                    match val {
                        Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
        }
    }
}

fn rat(r: &BigRational) -> String {
    r.to_string()
}

fn parse_weights(flag: &str, s: &str, exact: bool) -> Result<WeightVector, Failure> {
    WeightVector::parse(s, exact).map_err(|e| Failure::flag(flag, e))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    BufReader::new(File::open(path).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?)
        .read_to_end(&mut buf)?;
    Ok(buf)
}

fn is_json(bytes: &[u8]) -> bool {
    bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{')
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> bfc::Result<()>) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn spectrum_summary(spec: &FourierSpectrum, with_coeffs: bool) -> Result<Value, Failure> {
    let n = spec.n();
    let levels: Vec<f64> = (0..=n).map(|k| degree_weight(spec, Level::Exactly(k))).collect();
    let mut v = json!({
        "n": n,
        "mean": spec.coeff(0),
        "degree1": (0..n).map(|i| spec.degree1(i)).collect::<Vec<_>>(),
        "level_weights": levels,
        "w_le1": degree_weight(spec, Level::AtMost(1)),
        "total_weight": spec.total_weight(),
        "influences": (0..n).map(|i| spec.influence(i)).collect::<Vec<_>>(),
        "total_influence": spec.total_influence(),
    });
    if with_coeffs {
        if n > bfc::hypercube::MAX_JSON_DIM {
            return Err(Failure::Usage(format!(
                "--coefficients supports n ≤ {}, got {n}",
                bfc::hypercube::MAX_JSON_DIM
            )));
        }
        v["coefficients"] = json!(spec.coeffs());
    }
    Ok(v)
}

fn fourier(a: &FourierArgs) -> Outcome {
    if let Some(path) = &a.spectrum {
        let bytes = read_file(path)?;
        let spec = if is_json(&bytes) {
            FourierSpectrum::from_json(&String::from_utf8_lossy(&bytes))
        } else {
            FourierSpectrum::read_from(&bytes[..])
        }
        .map_err(|e| Failure::flag("--spectrum", e))?;
        let real = spec.inverse();
        if let Some(out) = &a.write_table {
            let bits = spec.inverse_bits()?;
            write_with(out, |w| bits.write_to(w))?;
        }
        let mut v = json!({ "schema": "bfc.inverse.v1", "n": spec.n(), "mean": real.mean() });
        if a.coefficients {
            v["values"] = json!(real.values());
        }
        return Ok(v);
    }
    let (table, source) = match (&a.ltf, &a.table) {
        (Some(s), _) => {
            let f = Ltf::parse(s, a.exact).map_err(|e| Failure::flag("--ltf", e))?;
            (f.to_truth_table()?, json!(s))
        }
        (None, Some(path)) => {
            let bytes = read_file(path)?;
            let t = if is_json(&bytes) {
                TruthTable::from_json(&String::from_utf8_lossy(&bytes))
            } else {
                TruthTable::read_from(&bytes[..])
            }
            .map_err(|e| Failure::flag("--table", e))?;
            (t, json!(path.display().to_string()))
        }
        (None, None) => return Err(Failure::Usage("one of --ltf, --table or --spectrum is required".into())),
    };
    let spec = wht(&table);
    if let Some(out) = &a.write_spectrum {
        write_with(out, |w| spec.write_to(w))?;
    }
    if let Some(out) = &a.write_table {
        write_with(out, |w| table.write_to(w))?;
    }
    let mut v = spectrum_summary(&spec, a.coefficients)?;
    v["schema"] = json!("bfc.fourier.v1");
    v["source"] = source;
    v["dim"] = json!(table.dim());
    Ok(v)
}

fn khintchine(w: &str) -> Outcome {
    let wv = parse_weights("--w", w, false)?;
    let unit = wv.normalized();
    let u = unit.values();
    let k = khintchine_constant(u).map_err(|e| Failure::flag("--w", e))?;
    let proper = make_proper(&unit).weights;
    let mut v = json!({
        "schema": "bfc.khintchine.v1",
        "n": u.len(),
        "normalized": u,
        "k": k,
        "d": dist_to_extremal(u),
        "dist_to_w_star": dist_to_w_star(proper.values()),
        "canonical": is_canonical(proper.values()),
    });
    if u.len() <= MAX_MOMENT_DIM {
        let m = ell_moments(u)?;
        v["ell"] = json!({
            "mean": m.mean,
            "variance": m.variance,
            "influences": m.influences,
            "weight_ge4": m.weight_ge4,
        });
    }
    Ok(v)
}

fn scan_robust(a: &ScanArgs, seed: u64) -> Outcome {
    let cfg = ScanConfig {
        n_values: a.n.clone(),
        grid_denominator: (a.den > 0).then_some(a.den),
        sphere_samples: a.sphere,
        perturbation_radii: a.radii.clone(),
        perturbations_per_radius: a.per_radius,
        d_min: a.d_min,
        seed,
    };
    let (report, samples) = robust_scan(&cfg)?;
    if let Some(path) = &a.csv {
        write_with(path, |w| write_csv(&samples, w))?;
    }
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["schema"] = json!("bfc.scan-robust.v1");
    v["config"] = serde_json::to_value(&cfg).expect("config serializes");
    Ok(v)
}

fn parse_mode(s: &str) -> Result<Mode, Failure> {
    s.parse().map_err(|e| Failure::flag("--mode", e))
}

fn enumerate(a: &EnumerateArgs, dir: &Path) -> Outcome {
    let mode = parse_mode(&a.mode)?;
    let catalog = if a.strategies.is_empty() {
        Catalog::load_or_build(a.n, mode, dir)?
    } else {
        let s: Vec<Strategy> = a.strategies.iter().map(|&s| s.into()).collect();
        enumerate_with(a.n, mode, &s)?
    };
    if a.records {
        let v: Value = serde_json::from_str(&catalog.to_json().map_err(|e| Failure::flag("--records", e))?)
            .expect("catalog JSON parses");
        return Ok(v);
    }
    Ok(json!({
        "schema": "bfc.enumerate.v1",
        "n": catalog.n,
        "mode": catalog.mode,
        "strategies": catalog.strategies(),
        "representatives": catalog.representative_count(),
        "full_count": catalog.full_count(),
        "sha256": catalog.checksum_hex(),
    }))
}

fn histogram_json(h: &[HistogramBin]) -> Value {
    h.iter()
        .map(|b| json!({ "w1": rat(&b.w1), "representatives": b.representatives, "functions": b.functions }))
        .collect()
}

fn bks(a: &BksArgs, dir: &Path) -> Outcome {
    if let Some(BksAction::Reduce { weights, delta, m }) = &a.action {
        return bks_reduce(weights, *delta, *m);
    }
    if let Some(eps) = a.eps {
        let p = parameters_for_epsilon(eps).map_err(|e| Failure::flag("--eps", e))?;
        eprintln!(
            "warning: K = M = ε^-24 = {:.3e} is far beyond exhaustive reach; nothing was run. Pass --k, or use `bks reduce` with explicit --delta and --m.",
            p.k
        );
        return Ok(json!({
            "schema": "bfc.bks-advisory.v1",
            "epsilon": p.epsilon,
            "k": p.k,
            "m": p.m,
            "executed": false,
        }));
    }
    let k = a.k.ok_or_else(|| Failure::Usage("--k is required (or --eps for the advisory map)".into()))?;
    let r = gamma_search_in(k, Some(dir)).map_err(|e| Failure::flag("--k", e))?;
    Ok(json!({
        "schema": "bfc.bks.v1",
        "K": r.k,
        "gamma": r.gamma_f64(),
        "gamma_exact": rat(&r.gamma),
        "argmin_weights": r.argmin.weights,
        "argmin_threshold": r.argmin.threshold,
        "argmin_table": r.argmin.table.signs(),
        "histogram": histogram_json(&r.histogram),
        "representatives": r.representatives,
        "full_count": r.full_count,
    }))
}

fn bks_reduce(weights: &str, delta: f64, m: usize) -> Outcome {
    let w = parse_weights("--weights", weights, false)?;
    let t = reduce_w1(&w, delta, m)?;
    let branch = match &t.branch {
        Branch::Junta { head_len, hamming_dist } => json!({
            "case": "junta",
            "head_len": head_len,
            "hamming_dist": hamming_dist,
        }),
        Branch::HeadTail { head_len, tail_norm, m } => json!({
            "case": "head-tail",
            "head_len": head_len,
            "tail_norm": tail_norm,
            "m": m,
        }),
    };
    Ok(json!({
        "schema": "bfc.bks-reduce.v1",
        "input": t.input.values(),
        "proper": t.proper.weights.values(),
        "delta": t.delta,
        "cutoff": t.cutoff,
        "critical_index": t.critical_index,
        "branch": branch,
        "w1_f": t.w1_f,
        "w1_gaussianized": t.w1_gaussianized,
        "w1_collapsed": t.w1_collapsed,
        "w1_g": t.w1_g,
        "g_head": t.g_head,
        "step2_error": t.step2_error(),
        "booleanization_error": t.booleanization_error(),
    }))
}

fn tom(a: &TomArgs, dir: &Path) -> Outcome {
    match &a.action {
        Some(TomAction::Sphere { m }) => {
            let r = t_sphere_in(*m, Some(dir)).map_err(|e| Failure::flag("--m", e))?;
            Ok(json!({
                "schema": "bfc.tom-sphere.v1",
                "m": r.m,
                "value": rat(&r.value),
                "value_f64": r.value_f64(),
                "max_separable_size": r.max_separable_size,
                "separable_set": r.separable_set,
                "witness": r.witness.iter().map(rat).collect::<Vec<_>>(),
                "witness_unit": r.witness_unit,
                "stats": {
                    "candidates": r.stats.candidates,
                    "antipodal": r.stats.antipodal,
                    "oracle_calls": r.stats.oracle_calls,
                    "exhaustive_fallbacks": r.stats.exhaustive_fallbacks,
                },
            }))
        }
        Some(TomAction::Reduce { w, eps }) => tom_reduce(w, *eps),
        None => {
            let w = a.w.as_deref().ok_or_else(|| Failure::Usage("--w is required".into()))?;
            tom_point(w, &a.a, a.exact, a.normalize)
        }
    }
}

fn tom_point(w: &str, a: &str, exact: bool, normalize: bool) -> Outcome {
    let wv = parse_weights("--w", w, exact)?;
    if exact {
        let av = parse_rational(a).map_err(|e| Failure::flag("--a", e))?;
        let t = t_exact(&wv, &av, normalize)?;
        return Ok(json!({
            "schema": "bfc.tom.v1",
            "precision": "exact",
            "n": wv.len(),
            "a": rat(&av),
            "t_in": rat(&t.t_in),
            "t_out": rat(&t.t_out),
            "below": t.counts.below,
            "equal": t.counts.equal,
            "above": t.counts.above,
        }));
    }
    let av: f64 = match a.parse() {
        Ok(x) => x,
        Err(_) => bfc::exact::to_f64(&parse_rational(a).map_err(|e| Failure::flag("--a", e))?),
    };
    let u = wv.normalized();
    Ok(json!({
        "schema": "bfc.tom.v1",
        "precision": "float",
        "n": u.len(),
        "a": av,
        "t_in": t_in(u.values(), av)?,
        "t_out": t_out(u.values(), av)?,
    }))
}

fn tom_reduce(w: &str, eps: f64) -> Outcome {
    let wv = parse_weights("--w", w, false)?.normalized();
    let r = reduce_dimension_t(&wv, eps).map_err(|e| Failure::flag("--eps", e))?;
    let t_of = |v: &WeightVector| -> Value {
        match t_in(v.values(), 1.0) {
            Ok(t) => json!(t),
            Err(_) => Value::Null,
        }
    };
    let branch = match r.branch {
        DimensionBranch::Identity => "identity",
        DimensionBranch::LargeCriticalIndex => "large-critical-index",
        DimensionBranch::SmallCriticalIndex => "small-critical-index",
    };
    Ok(json!({
        "schema": "bfc.tom-reduce.v1",
        "epsilon": eps,
        "eta": r.params.eta,
        "t": r.params.t,
        "K": r.params.k,
        "lambda": r.params.lambda,
        "critical_index": r.critical_index,
        "branch": branch,
        "dim": r.v.len(),
        "v": if r.v.len() <= 64 { json!(r.v.values()) } else { Value::Null },
        "t_w": t_of(&wv),
        "t_v": t_of(&r.v),
    }))
}

fn verify(a: &VerifyArgs, g: &Global, dir: &Path) -> Result<(), Failure> {
    let keys = check_keys();
    if a.list {
        for k in keys {
            println!("{k}");
        }
        return Ok(());
    }
    if let Some(bad) = a.only.iter().find(|k| !keys.contains(&k.as_str())) {
        return Err(Failure::Usage(format!("invalid value for --only: unknown check {bad:?}")));
    }
    let cfg = VerifyConfig {
        seed: g.seed,
        catalog_dir: dir.to_path_buf(),
        ..VerifyConfig::default()
    };
    let results = run_suite(&cfg, |k| a.only.is_empty() || a.only.iter().any(|o| o == k));
    match g.format.unwrap_or(Format::Text) {
        Format::Text => {
            let width = results.iter().map(|r| r.key.len()).max().unwrap_or(0);
            for r in &results {
                let mark = match (r.passed, r.gating) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "WARN",
                };
                println!("{mark}  {:<width$}  {:>7.2}s  {}", r.key, r.seconds, r.detail);
            }
        }
        Format::Json => {
            let checks: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "key": r.key,
                        "statement": r.statement,
                        "passed": r.passed,
                        "gating": r.gating,
                        "detail": r.detail,
                    })
                })
                .collect();
            emit(
                &json!({ "schema": "bfc.verify.v1", "seed": g.seed, "passed": all_passed(&results), "checks": checks }),
                Format::Json,
            );
        }
    }
    if all_passed(&results) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
