//! Argument parsing and the subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use flowpoly_core::appendix;
use flowpoly_core::assemble::{assemble, assemble_raw, validate, AssembledFlow, Method, ValidationReport};
use flowpoly_core::combinatorics::{alpha, beta, gamma, partitions};
use flowpoly_core::graph::{flow_poly_bruteforce, GPGraph, DEFAULT_EDGE_BUDGET};
use flowpoly_core::roots::{all_roots, certify_real_root};
use flowpoly_core::spectra::{
    classify_sample, find_qc, leading_eigs, scan_qc, trace_curve, ClassifyOptions, EigOptions, FeatureKind, QcResult, Selection, SpectralModel, Window,
};
use flowpoly_core::IntPoly;

use crate::cache::{default_dir, PlanOverride, TraceStore};
use crate::formats::{factored_text, parse_coeff_list, read_json, to_json, write_curve_csv, write_roots_csv, FlowFile, GraphFile};
use crate::suite;
use crate::svg::{self, Plane};

#[derive(Parser, Debug)]
#[command(name = "flowpoly", version, about = "Flow polynomials of generalised Petersen graphs and their zeros")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Trace cache directory (default: $FLOWPOLY_CACHE, then ~/.cache/flowpoly).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Keep traces in memory only.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Number of primes per evaluation point, replacing the computed budget.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(2..))]
    pub primes: Option<u32>,
    /// Number of evaluation points Q = 1..N per trace (at least degree + 2).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub points: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Complete,
    Raw,
    Brute,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Flow polynomial of G(n,k).
    Flowpoly(FlowArgs),
    /// All complex zeros of a polynomial, as CSV.
    Roots(RootsArgs),
    /// Largest real crossing Q_c(k) of the limiting curve.
    Qc(QcArgs),
    /// Limiting curves inside a window of the complex Q plane.
    Curve(CurveArgs),
    /// Leading eigenvalues of every sector at one Q.
    Spectrum(SpectrumArgs),
    /// Amplitude polynomials α, β and γ.
    Amplitudes(AmplitudesArgs),
    /// Runs the acceptance suite and prints a scoreboard.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Complete)]
    pub method: MethodArg,
    /// Multigraph JSON for the brute-force method.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the factored text view here.
    #[arg(long)]
    pub text: Option<PathBuf>,
    /// Also write the graph JSON here.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
    /// Edge budget of the brute-force expansion.
    #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
    pub budget: usize,
}

#[derive(Args, Debug)]
pub struct RootsArgs {
    /// Flow JSON file.
    pub input: Option<PathBuf>,
    /// Comma-separated integer coefficients, ascending.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub coeffs: Option<String>,
    /// Shipped polynomial instead of a file.
    #[arg(long, value_enum, conflicts_with_all = ["input", "coeffs"])]
    pub fixture: Option<Fixture>,
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
    /// Exact sign check on lo,hi (rationals such as 5.00001 or 7/3); repeatable.
    #[arg(long)]
    pub certify: Vec<String>,
    /// Also count roots in each certify interval with a Sturm sequence.
    #[arg(long)]
    pub sturm: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// Φ of G(119,7).
    G119_7,
}

#[derive(Args, Debug)]
pub struct QcArgs {
    #[arg(long)]
    pub k: usize,
    /// Bisect between two dominance regimes at lo,hi.
    #[arg(long)]
    pub bracket: Option<String>,
    /// Scan from,to,step for the last dominance change.
    #[arg(long, default_value = "1.5,6,0.1")]
    pub scan: String,
    /// Restrict to λ = (ℓ) sectors (default for k >= 6).
    #[arg(long)]
    pub symmetric: bool,
    /// Use every λ even for k >= 6.
    #[arg(long, conflicts_with = "symmetric")]
    pub all_sectors: bool,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long)]
    pub k: usize,
    /// re0,re1,im0,im1
    #[arg(long, allow_hyphen_values = true, default_value = "-1,5,-3,3")]
    pub window: String,
    #[arg(long, default_value_t = 40)]
    pub res: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Plane::Both)]
    pub plane: Plane,
    /// Overlay the zeros of Φ for G(nk,k) with this n.
    #[arg(long)]
    pub zeros_n: Option<usize>,
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub k: usize,
    /// Q as re or re,im.
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Args, Debug)]
pub struct AmplitudesArgs {
    /// Largest ℓ for α and β; γ is printed for 1..=k (as γ_{k+1}).
    #[arg(long, default_value_t = 7)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// small-oracle, fast, structure, roots, spectra, full, or ids like 1,3,9.
    #[arg(long, default_value = "fast")]
    pub suite: String,
}

/// Parses and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn store_for(cfg: &RunConfig) -> Result<TraceStore> {
    let mut store = if cfg.no_cache {
        TraceStore::in_memory()
    } else {
        match cfg.cache_dir.clone().or_else(default_dir) {
            Some(d) => TraceStore::with_dir(d)?,
            None => TraceStore::in_memory(),
        }
    };
    store.overrides = PlanOverride { primes: cfg.primes.map(|x| x as usize), points: cfg.points.map(|x| x as usize) };
    Ok(store)
}

pub fn run(cli: &Cli) -> Result<i32> {
    if let Some(j) = cli.config.jobs {
        // Fails only if a pool already exists, which keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global();
    }
    let cfg = &cli.config;
    match &cli.command {
        Command::Flowpoly(a) => cmd_flowpoly(cfg, a),
        Command::Roots(a) => cmd_roots(a),
        Command::Qc(a) => cmd_qc(cfg, a),
        Command::Curve(a) => cmd_curve(cfg, a),
        Command::Spectrum(a) => cmd_spectrum(cfg, a),
        Command::Amplitudes(a) => cmd_amplitudes(cfg, a),
        Command::Verify(a) => cmd_verify(cfg, a),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn report_text(r: &ValidationReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let tag = if !c.applicable { "SKIP" } else if c.passed { "ok" } else { "FAIL" };
        s.push_str(&format!("  {tag:<4} {}: {}\n", c.name, c.detail));
    }
    s
}

/// The flow of G(n,k) by the requested method, with its validation report.
pub fn flow_for(store: &TraceStore, n: usize, k: usize, method: MethodArg, budget: usize) -> Result<(AssembledFlow, ValidationReport)> {
    let flow = match method {
        MethodArg::Brute => {
            let graph = GPGraph::build(n, k)?;
            let poly = flow_poly_bruteforce(graph.multigraph(), budget)?;
            AssembledFlow { graph, poly, provenance: Vec::new(), method: Method::BruteForce }
        }
        m => {
            if k == 0 || !n.is_multiple_of(k) {
                bail!("transfer methods need k | n (got n = {n}, k = {k}); use --method brute for other graphs");
            }
            if m == MethodArg::Raw {
                assemble_raw(k, n / k, store)?
            } else {
                let (f, warning) = assemble(k, n / k, store)?;
                if let Some(w) = warning {
                    eprintln!("warning: {w}");
                }
                f
            }
        }
    };
    let report = validate(&flow);
    Ok((flow, report))
}

fn cmd_flowpoly(cfg: &RunConfig, a: &FlowArgs) -> Result<i32> {
    let store = store_for(cfg)?;
    if let Some(path) = &a.graph {
        if a.method != MethodArg::Brute {
            bail!("--graph needs --method brute");
        }
        let gf: GraphFile = read_json(path)?;
        if let (Some(n), Some(k)) = (gf.n, gf.k) {
            gf.to_multigraph()?;
            return finish_flow(cfg, a, flow_for(&store, n, k, MethodArg::Brute, a.budget)?);
        }
        let m = gf.to_multigraph()?;
        let poly = flow_poly_bruteforce(&m, a.budget)?;
        let out = match cfg.format {
            Format::Json => to_json(&FlowFile::from_poly(&poly))?,
            Format::Text => factored_text(&poly),
        };
        emit(a.output.as_deref(), &out)?;
        return Ok(0);
    }
    let (Some(n), Some(k)) = (a.n, a.k) else { bail!("give --n and --k, or --graph FILE") };
    finish_flow(cfg, a, flow_for(&store, n, k, a.method, a.budget)?)
}

fn finish_flow(cfg: &RunConfig, a: &FlowArgs, (flow, report): (AssembledFlow, ValidationReport)) -> Result<i32> {
    let json = to_json(&FlowFile::from_flow(&flow, Some(&report)))?;
    let text = factored_text(&flow.poly);
    // The JSON file is the primary output; stdout gets text unless asked otherwise.
    match (&a.output, cfg.format) {
        (Some(p), _) => emit(Some(p), &json)?,
        (None, Format::Json) => emit(None, &json)?,
        (None, Format::Text) => emit(None, &text)?,
    }
    if let Some(p) = &a.text {
        emit(Some(p), &text)?;
    }
    if let Some(p) = &a.graph_out {
        emit(Some(p), &to_json(&GraphFile::from_gp(&flow.graph))?)?;
    }
    if report.passed() {
        Ok(0)
    } else {
        eprintln!("validation failed for G({},{}):\n{}", flow.graph.n, flow.graph.k, report_text(&report));
        Ok(3)
    }
}

/// "5.00001", "-3", "7/3".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        return Ok(BigRational::new(n.trim().parse()?, d.trim().parse()?));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        bail!("not a decimal or fraction: {s:?}");
    }
    let digits: num_bigint::BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac).parse()?;
    let r = BigRational::new(digits, num_bigint::BigInt::from(10u32).pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

fn load_poly(a: &RootsArgs) -> Result<IntPoly> {
    if let Some(Fixture::G119_7) = a.fixture {
        return Ok(appendix::flow_g119_7());
    }
    if let Some(c) = &a.coeffs {
        return parse_coeff_list(c);
    }
    let Some(p) = &a.input else { bail!("give an input file, --coeffs or --fixture") };
    let f: FlowFile = read_json(p)?;
    f.poly()
}

fn cmd_roots(a: &RootsArgs) -> Result<i32> {
    let poly = load_poly(a)?;
    let rs = all_roots(&poly, a.digits)?;
    let mut buf = Vec::new();
    write_roots_csv(&mut buf, &rs)?;
    emit(a.output.as_deref(), std::str::from_utf8(&buf)?)?;
    let mut code = 0;
    for iv in &a.certify {
        let (lo, hi) = iv.split_once(',').with_context(|| format!("--certify expects lo,hi, got {iv:?}"))?;
        let c = certify_real_root(&poly, &parse_rational(lo)?, &parse_rational(hi)?, a.sturm)?;
        let sign = |x: &BigRational| if x.numer().sign() == num_bigint::Sign::Minus { "-" } else if x.numer().sign() == num_bigint::Sign::NoSign { "0" } else { "+" };
        eprintln!(
            "certify ({lo}, {hi}): signs {} {} -> {}{}",
            sign(&c.value_lo),
            sign(&c.value_hi),
            if c.certified { "root certified" } else { "no sign change" },
            c.sturm.map(|s| format!(", {s} distinct roots by Sturm")).unwrap_or_default()
        );
        if !c.certified {
            code = 4;
        }
    }
    Ok(code)
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().with_context(|| format!("{what}: {s:?}"))?;
    if v.len() != n {
        bail!("{what} needs {n} comma-separated numbers, got {s:?}");
    }
    Ok(v)
}

fn selection(k: usize, symmetric: bool, all: bool) -> Selection {
    if symmetric || (k >= 6 && !all) {
        Selection::Symmetric
    } else {
        Selection::All
    }
}

#[derive(Serialize)]
struct QcJson {
    k: usize,
    qc: f64,
    bracket: [f64; 2],
    sectors: [String; 2],
    mu: [[f64; 2]; 2],
    amplitudes: [f64; 2],
    parity: Option<String>,
    selection: String,
}

/// Runs the scan or bisection requested by `a`.
pub fn qc_search(a: &QcArgs) -> Result<(QcResult, Selection)> {
    let sel = selection(a.k, a.symmetric, a.all_sectors);
    let model = SpectralModel::build(a.k, sel)?;
    let opts = EigOptions::default();
    let r = match &a.bracket {
        Some(b) => {
            let v = parse_floats(b, 2, "--bracket")?;
            find_qc(&model, v[0], v[1], &opts)?
        }
        None => {
            let v = parse_floats(&a.scan, 3, "--scan")?;
            scan_qc(&model, v[0], v[1], v[2], &opts)?
        }
    };
    Ok((r, sel))
}

fn cmd_qc(cfg: &RunConfig, a: &QcArgs) -> Result<i32> {
    let (r, sel) = qc_search(a)?;
    let parity = r.parity.map(|p| p.to_string());
    match cfg.format {
        Format::Json => {
            let j = QcJson {
                k: a.k,
                qc: r.qc,
                bracket: [r.lo, r.hi],
                sectors: [r.sectors.0.to_string(), r.sectors.1.to_string()],
                mu: [[r.mu.0.re, r.mu.0.im], [r.mu.1.re, r.mu.1.im]],
                amplitudes: [r.amplitudes.0, r.amplitudes.1],
                parity,
                selection: format!("{sel:?}").to_lowercase(),
            };
            emit(None, &to_json(&j)?)?;
        }
        Format::Text => {
            println!("Q_c({}) = {:.10}", a.k, r.qc);
            println!("  sectors {} / {}, mu {:.6} / {:.6}, |mu| {:.8}", r.sectors.0, r.sectors.1, r.mu.0, r.mu.1, r.mu.0.norm());
            println!("  amplitudes {:.6} / {:.6}, parity {}", r.amplitudes.0, r.amplitudes.1, parity.as_deref().unwrap_or("n/a"));
        }
    }
    Ok(0)
}

fn cmd_curve(cfg: &RunConfig, a: &CurveArgs) -> Result<i32> {
    let window: Window = a.window.parse()?;
    let model = SpectralModel::build(a.k, selection(a.k, a.symmetric, false))?;
    let curve = trace_curve(&model, window, a.res, &EigOptions::default())?;
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &curve)?;
    emit(a.csv.as_deref(), std::str::from_utf8(&buf)?)?;
    let crossings = curve.real_crossings(1e-9);
    eprintln!(
        "{} polylines, {} points, real crossings {:?}, {} unresolved cells",
        curve.polylines.len(),
        curve.points().count(),
        crossings,
        curve.unresolved.len()
    );
    if let Some(path) = &a.svg {
        let zeros: Vec<Complex64> = match a.zeros_n {
            Some(n) => {
                let store = store_for(cfg)?;
                let (f, _) = assemble(a.k, n, &store)?;
                all_roots(&f.poly, 6)?.roots.iter().map(|r| Complex64::new(r.re_f64(), r.im_f64())).collect()
            }
            None => Vec::new(),
        };
        emit(Some(path), &svg::render(&curve, &zeros, &window, a.plane, &format!("k = {}", a.k)))?;
    }
    Ok(0)
}

fn parse_q(s: &str) -> Result<Complex64> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().with_context(|| format!("--q {s:?}"))?;
    match v.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => bail!("--q expects re or re,im"),
    }
}

#[derive(Serialize)]
struct SectorJson {
    sector: String,
    mu1: [f64; 2],
    mu2: Option<[f64; 2]>,
    amplitude: [f64; 2],
    converged: bool,
}

fn cmd_spectrum(cfg: &RunConfig, a: &SpectrumArgs) -> Result<i32> {
    let q = parse_q(&a.q)?;
    let model = SpectralModel::build(a.k, selection(a.k, a.symmetric, false))?;
    let s = leading_eigs(&model, q, &EigOptions::default())?;
    let mut rows: Vec<SectorJson> = s
        .sectors
        .iter()
        .map(|r| {
            let amp = model.amplitude_at(&r.id, q).unwrap();
            SectorJson { sector: r.id.to_string(), mu1: [r.mu1.re, r.mu1.im], mu2: r.mu2.map(|m| [m.re, m.im]), amplitude: [amp.re, amp.im], converged: r.converged }
        })
        .collect();
    rows.sort_by(|x, y| (y.mu1[0].hypot(y.mu1[1])).partial_cmp(&x.mu1[0].hypot(x.mu1[1])).unwrap());
    let feature = classify_sample(&model, &s, &ClassifyOptions::default())?;
    let verdict = match &feature {
        None => "regular point".to_string(),
        Some(f) => {
            let kind = if f.kind == FeatureKind::IsolatedA { "isolated limiting point" } else { "on a limiting curve" };
            let w: Vec<String> = f.witnesses.iter().map(|w| w.to_string()).collect();
            format!("{kind} ({}){}", w.join(" / "), f.parity.map(|p| format!(", parity {p}")).unwrap_or_default())
        }
    };
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                k: usize,
                q: [f64; 2],
                sectors: &'a [SectorJson],
                classification: String,
            }
            emit(None, &to_json(&Out { k: a.k, q: [q.re, q.im], sectors: &rows, classification: verdict })?)?;
        }
        Format::Text => {
            println!("k = {}, Q = {q}", a.k);
            println!("{:<12} {:>30} {:>30} {:>24}", "sector", "mu1", "mu2", "amplitude");
            for r in &rows {
                let c = |z: [f64; 2]| format!("{:.8}{:+.8}i", z[0], z[1]);
                println!("{:<12} {:>30} {:>30} {:>24}", r.sector, c(r.mu1), r.mu2.map(c).unwrap_or_default(), c(r.amplitude));
            }
            println!("{verdict}");
        }
    }
    Ok(0)
}

fn cmd_amplitudes(cfg: &RunConfig, a: &AmplitudesArgs) -> Result<i32> {
    let mut alphas = Vec::new();
    for l in 0..=a.k {
        for lam in partitions(l) {
            alphas.push((format!("({l},{lam})"), alpha(l, &lam)?.to_string()));
        }
    }
    let betas: Vec<(String, String)> = (0..=a.k).map(|l| (format!("beta_{l}"), beta(l).to_string())).collect();
    let gammas: Vec<(String, String)> = (1..=a.k).map(|k| (format!("gamma_{}", k + 1), gamma(k).to_string())).collect();
    match cfg.format {
        Format::Json => {
            let m = |v: &[(String, String)]| v.iter().cloned().collect::<std::collections::BTreeMap<_, _>>();
            #[derive(Serialize)]
            struct Out {
                alpha: std::collections::BTreeMap<String, String>,
                beta: std::collections::BTreeMap<String, String>,
                gamma: std::collections::BTreeMap<String, String>,
            }
            emit(None, &to_json(&Out { alpha: m(&alphas), beta: m(&betas), gamma: m(&gammas) })?)?;
        }
        Format::Text => {
            for (name, p) in alphas.iter().map(|(n, p)| (format!("alpha_{n}"), p)).chain(betas.iter().chain(&gammas).map(|(n, p)| (n.clone(), p))) {
                println!("{name:<16} {p}");
            }
        }
    }
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<i32> {
    let ids = suite::suite_ids(&a.suite)?;
    let ctx = suite::Context::new(store_for(cfg)?);
    let results = suite::run(&ids, &ctx, |o| {
        if cfg.format == Format::Text {
            println!("{}", o.line());
        }
    });
    let passed = results.iter().filter(|o| o.passed).count();
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                id: usize,
                name: &'a str,
                passed: bool,
                seconds: f64,
                detail: &'a str,
            }
            let rows: Vec<Row> = results.iter().map(|o| Row { id: o.id, name: o.name, passed: o.passed, seconds: o.seconds, detail: &o.detail }).collect();
            emit(None, &to_json(&rows)?)?;
        }
        Format::Text => println!("{passed}/{} criteria passed", results.len()),
    }
    Ok(if passed == results.len() { 0 } else { 5 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("5.00001").unwrap(), BigRational::new(500001.into(), 100000.into()));
        assert_eq!(parse_rational("-7/3").unwrap(), BigRational::new((-7).into(), 3.into()));
        assert_eq!(parse_rational("-.5").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1e5").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn parses_commands() {
        let c = Cli::try_parse_from(["flowpoly", "--no-cache", "flowpoly", "--n", "28", "--k", "4"]).unwrap();
        assert!(matches!(c.command, Command::Flowpoly(FlowArgs { n: Some(28), k: Some(4), method: MethodArg::Complete, .. })));
        let c = Cli::try_parse_from(["flowpoly", "curve", "--k", "2", "--window", "-1,5,-3,3", "--res", "10", "--jobs", "1"]).unwrap();
        assert_eq!(c.config.jobs, Some(1));
        assert!(Cli::try_parse_from(["flowpoly", "--jobs", "0", "verify"]).is_err());
        assert!(Cli::try_parse_from(["flowpoly", "roots", "x.json", "--fixture", "g119-7"]).is_err());
    }
}
