//! `bilinear-kernels`: verification runs, count tables, tensor certification,
//! stability reports and the group-algebra kernels.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 usage or I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bilinear_kernels::arith::{CountContext, TrackedScalar};
use bilinear_kernels::group::simultaneous::{blocked_flip, flip_f, flip_g};
use bilinear_kernels::group::{
    blocked_simultaneous, cu_matmul, d4_simultaneous, quotient_tpp_check, tpp_check, tpp_preset, x8_simultaneous,
    Variant,
};
use bilinear_kernels::harness::{self, random_pattern, relative_error, values};
use bilinear_kernels::kernels::{extract_decomposition, extract_tph_reduced, Matrix2};
use bilinear_kernels::structures::{Kind, Level};
use bilinear_kernels::suite::{self, count_row, equivalence_trials, tolerance_for, CountRow, Sampler};
use bilinear_kernels::tensor::decomposition::presets;
use bilinear_kernels::tensor::{
    build_structure_tensor, complex_mul_tensor, flattening_ranks, ottaviani_test, parse_decomposition,
    serialize_decomposition, stability_measure, structured_tensor, verify_decomposition, Tensor3, TensorDecomposition,
    TensorSpec, DEFAULT_RANK_TOLERANCE,
};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

const TOL_ENV: &str = "BILINEAR_KERNELS_TOL";
/// Sparse patterns drawn by the CLI keep each position with this probability.
const SPARSE_DENSITY: f64 = 0.5;
/// Largest Toeplitz level size in the count table's BTTB rows.
const BTTB_MAX_LEVEL: usize = 5;
/// Tolerance for decomposition checks and the group kernels.
const DECOMPOSITION_TOL: f64 = 1e-8;
const GROUP_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Library(#[from] bilinear_kernels::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(bilinear_kernels::Error::SelfCheck(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult = Result<bool, CliError>;

#[derive(Parser, Debug)]
#[command(name = "bilinear-kernels", version, about = "Minimum-multiplication structured kernels and their certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fast kernel against the naive product on seeded random inputs.
    Verify(VerifyArgs),
    /// CSV of fast, naive and closed-form counts for every kind up to --max-n.
    CountTable(TableArgs),
    /// Structure tensor certification: decomposition, flattening ranks, Ottaviani test.
    Tensor(TensorArgs),
    /// Coefficient sum of a named or stored decomposition.
    Stability(StabilityArgs),
    /// Triple product property of a preset triple, plus seeded matrix products through it.
    Tpp(TppArgs),
    /// Eight-multiplication simultaneous 2x2 products against dense products.
    Simul(SimulArgs),
}

#[derive(Args, Debug, Clone)]
struct KindArgs {
    /// Structure kind, e.g. toeplitz, tph, f_circulant, multilevel, sparse.
    #[arg(long)]
    kind: Option<String>,
    /// Matrix order (multilevel orders come from --levels).
    #[arg(long)]
    n: Option<usize>,
    /// Multilevel levels: `toeplitz:3,hankel:2`, or `3x2` for Toeplitz levels.
    #[arg(long)]
    levels: Option<String>,
    /// f for f-circulants, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    kind: KindArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative error tolerance; overrides the per-kind default and the environment.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// f for the f-circulant rows.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Replace the BTTB rows by this single multilevel structure.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TensorArgs {
    #[command(flatten)]
    kind: KindArgs,
    /// Named map: complex_mul, so3, commutator_beta, skew3, matmul:m,n,p.
    #[arg(long, conflicts_with = "kind")]
    builder: Option<String>,
    /// Also run the Ottaviani border-rank test (3x3x3 tensors only).
    #[arg(long)]
    ottaviani: bool,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the certifying decomposition as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    /// usual, gauss or cube.
    #[arg(long, required_unless_present = "input")]
    preset: Option<String>,
    /// Decomposition JSON file instead of a preset.
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TppArgs {
    /// d4-222, cyclic-1n1 or c2-full.
    #[arg(long)]
    preset: String,
    /// Group order for cyclic-1n1.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SimulArgs {
    /// f (dihedral, AB and AB^f) or g (cyclic of order 8, AB and AB^g).
    #[arg(long, default_value = "f")]
    variant: String,
    /// Number of 2x2 column blocks in B.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a),
        Command::CountTable(a) => cmd_count_table(&a),
        Command::Tensor(a) => cmd_tensor(&a),
        Command::Stability(a) => cmd_stability(&a),
        Command::Tpp(a) => cmd_tpp(&a),
        Command::Simul(a) => cmd_simul(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// `--tol`, then the environment variable, then `fallback`.
fn tolerance(flag: Option<f64>, fallback: f64) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Config(format!("{TOL_ENV}=\"{s}\" is not a number")))?,
            Err(_) => fallback,
        },
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Config(format!("tolerance must be positive, got {tol}")))
    }
}

fn parse_f(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| CliError::Config(format!("bad --f value \"{s}\"")));
    match parts[..] {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Config(format!("bad --f value \"{s}\", expected re or re,im"))),
    }
}

fn parse_single_kind(name: &str, f: Option<Complex64>) -> Result<Kind, CliError> {
    Ok(match name {
        "circulant" => Kind::Circulant,
        "f_circulant" | "f-circulant" => {
            Kind::FCirculant { f: f.ok_or_else(|| CliError::Config("f_circulant needs --f".into()))? }
        }
        "toeplitz" => Kind::Toeplitz,
        "hankel" => Kind::Hankel,
        "upper_triangular_toeplitz" | "triangular_toeplitz" => Kind::UpperTriangularToeplitz,
        "toeplitz_plus_hankel" | "tph" => Kind::ToeplitzPlusHankel,
        "symmetric" => Kind::Symmetric,
        "skew_symmetric" | "skew" => Kind::SkewSymmetric,
        other => return Err(CliError::Config(format!("unknown kind \"{other}\""))),
    })
}

fn parse_levels(spec: &str, f: Option<Complex64>) -> Result<Vec<Level>, CliError> {
    let bad = || CliError::Config(format!("bad --levels \"{spec}\""));
    if spec.contains('x') && !spec.contains(':') {
        return spec
            .split('x')
            .map(|k| {
                let k = k.trim().parse::<usize>().map_err(|_| bad())?;
                Ok(Level::new(Kind::Toeplitz, k)?)
            })
            .collect();
    }
    spec.split(',')
        .map(|part| {
            let (name, k) = part.split_once(':').ok_or_else(bad)?;
            let k = k.trim().parse::<usize>().map_err(|_| bad())?;
            Ok(Level::new(parse_single_kind(name.trim(), f)?, k)?)
        })
        .collect()
}

/// Resolves the kind flags to a kind and its order. Sparse patterns are
/// drawn from `seed`.
fn resolve_kind(args: &KindArgs, seed: u64) -> Result<(Kind, usize), CliError> {
    let f = args.f.as_deref().map(parse_f).transpose()?;
    let name = args.kind.as_deref().ok_or_else(|| CliError::Config("--kind is required".into()))?;
    if matches!(name, "multilevel" | "bttb") || args.levels.is_some() {
        let spec = args.levels.as_deref().ok_or_else(|| CliError::Config(format!("{name} needs --levels")))?;
        let levels = parse_levels(spec, f)?;
        let n: usize = levels.iter().map(|l| l.n).product();
        if args.n.is_some_and(|given| given != n) {
            return Err(CliError::Config(format!("--n must equal the product of the level sizes ({n})")));
        }
        return Ok((Kind::Multilevel(levels), n));
    }
    let n = args.n.ok_or_else(|| CliError::Config("--n is required".into()))?;
    if n == 0 {
        return Err(CliError::Config("--n must be positive".into()));
    }
    if name == "sparse" {
        let pattern = random_pattern(&mut harness::rng(seed), n, SPARSE_DENSITY);
        return Ok((Kind::Sparse(pattern), n));
    }
    Ok((parse_single_kind(name, f)?, n))
}

fn cmd_verify(args: &VerifyArgs) -> CliResult {
    if args.trials == 0 {
        return Err(CliError::Config("--trials must be positive".into()));
    }
    let (kind, n) = resolve_kind(&args.kind, args.seed)?;
    let tol = tolerance(args.tol, tolerance_for(&kind))?;
    let report = equivalence_trials(&kind, n, args.trials, args.seed, Sampler::Box)?;
    let row = count_row(&kind, n, args.seed)?;
    let pass = report.passes(tol);
    println!("kind={} n={} trials={} seed={}", suite::table_name(&kind), suite::size_label(&kind, n), args.trials, args.seed);
    println!("max relative error = {:.3e} (tolerance {tol:e})", report.max_relative_error);
    println!("fast count = {}, naive count = {}, formula count = {}", row.fast_mults, row.naive_mults, row.formula);
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

fn table_rows(args: &TableArgs) -> Result<Vec<CountRow>, CliError> {
    if args.max_n == 0 {
        return Err(CliError::Config("--max-n must be positive".into()));
    }
    let f = args.f.as_deref().map(parse_f).transpose()?.unwrap_or(Complex64::new(-1.0, 0.0));
    let kinds = [
        Kind::Circulant,
        Kind::FCirculant { f },
        Kind::Toeplitz,
        Kind::Hankel,
        Kind::UpperTriangularToeplitz,
        Kind::ToeplitzPlusHankel,
        Kind::Symmetric,
        Kind::SkewSymmetric,
    ];
    let mut rows = Vec::new();
    for kind in &kinds {
        let start = if *kind == Kind::SkewSymmetric { 2 } else { 1 };
        for n in start..=args.max_n {
            rows.push(count_row(kind, n, args.seed)?);
        }
    }
    for n in 1..=args.max_n {
        let pattern = random_pattern(&mut harness::rng(args.seed.wrapping_add(n as u64)), n, SPARSE_DENSITY);
        rows.push(count_row(&Kind::Sparse(pattern), n, args.seed)?);
    }
    match &args.levels {
        Some(spec) => {
            let levels = parse_levels(spec, Some(f))?;
            let n = levels.iter().map(|l| l.n).product();
            rows.push(count_row(&Kind::Multilevel(levels), n, args.seed)?);
        }
        None => {
            let top = args.max_n.min(BTTB_MAX_LEVEL);
            for k1 in 1..=top {
                for k2 in 1..=top {
                    let levels = vec![Level::new(Kind::Toeplitz, k1)?, Level::new(Kind::Toeplitz, k2)?];
                    rows.push(count_row(&Kind::Multilevel(levels), k1 * k2, args.seed)?);
                }
            }
        }
    }
    Ok(rows)
}

fn cmd_count_table(args: &TableArgs) -> CliResult {
    let rows = table_rows(args)?;
    let mut csv = String::from(CountRow::CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.csv_line());
        csv.push('\n');
    }
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    let mismatched = rows.iter().filter(|r| !r.matches()).count();
    if mismatched > 0 {
        eprintln!("{mismatched} of {} rows do not match the closed form", rows.len());
    }
    Ok(mismatched == 0)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn print_ranks(t: &Tensor3) -> usize {
    let (r1, r2, r3) = flattening_ranks(t, DEFAULT_RANK_TOLERANCE);
    let (d1, d2, d3) = t.dims();
    println!("dims = ({d1},{d2},{d3})");
    println!("flattening ranks = ({r1},{r2},{r3})");
    r1.max(r2).max(r3)
}

fn run_ottaviani(t: &Tensor3) -> Result<bool, CliError> {
    let report = ottaviani_test(t)?;
    match report.border_rank_bound() {
        Some(b) => println!("Ottaviani matrix nonsingular (|det| {:.3e}): border rank ≥ {b}", report.det_magnitude),
        None => println!("Ottaviani matrix singular (|det| {:.3e}): no bound beyond the flattenings", report.det_magnitude),
    }
    Ok(report.nonsingular)
}

/// Checks `d` against `t`; a decomposition with as many terms as the
/// flattening lower bound certifies the rank.
fn certify(t: &Tensor3, d: &TensorDecomposition, lower: usize, tol: f64, label: &str) -> Result<bool, CliError> {
    let report = verify_decomposition(t, d, tol)?;
    println!(
        "{label}: {} terms, max entry error {:.3e} ({})",
        d.len(),
        report.max_abs_error,
        if report.pass { "verified" } else { "NOT verified" }
    );
    Ok(report.pass && d.len() == lower)
}

fn cmd_tensor(args: &TensorArgs) -> CliResult {
    let tol = tolerance(args.tol, DECOMPOSITION_TOL)?;
    if let Some(name) = &args.builder {
        let t = build_structure_tensor(&TensorSpec::parse(name).map_err(|e| CliError::Config(e.to_string()))?)?;
        let lower = print_ranks(&t);
        println!("rank ≥ {lower}");
        return if args.ottaviani { run_ottaviani(&t) } else { Ok(true) };
    }
    let (kind, n) = resolve_kind(&args.kind, 0)?;
    let t = structured_tensor(&kind, n)?;
    let lower = print_ranks(&t);
    if args.ottaviani && !run_ottaviani(&t)? {
        return Ok(false);
    }
    if matches!(kind, Kind::Multilevel(_)) {
        println!("rank ≥ {lower}; decompositions are extracted for single-level kinds only");
        return Ok(false);
    }
    let d = extract_decomposition(&kind, n)?;
    let mut certified = certify(&t, &d, lower, tol, "kernel decomposition")?.then_some(d);
    if certified.is_none() && kind == Kind::ToeplitzPlusHankel {
        println!("kernel term count exceeds the flattening bound {lower}; trying the 4n-4 kernel");
        let reduced = extract_tph_reduced(n)?;
        certified = certify(&t, &reduced, lower, tol, "4n-4 kernel decomposition")?.then_some(reduced);
    }
    match certified {
        Some(d) => {
            println!("rank certified = {lower}");
            if let Some(path) = &args.out {
                write_file(path, &serialize_decomposition(&d))?;
            }
            Ok(true)
        }
        None => {
            println!("rank not certified: {lower} ≤ rank");
            Ok(false)
        }
    }
}

fn cmd_stability(args: &StabilityArgs) -> CliResult {
    let (label, d) = match (&args.preset, &args.input) {
        (Some(name), _) => {
            let d = presets::by_name(name)
                .ok_or_else(|| CliError::Config(format!("unknown preset \"{name}\" (usual, gauss, cube)")))?;
            (name.clone(), d)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            (path.display().to_string(), parse_decomposition(&text)?)
        }
        (None, None) => return Err(CliError::Config("--preset or --input is required".into())),
    };
    let measure = stability_measure(&d)?;
    println!("{label}: {} terms, stability = {measure:.10}", d.len());
    if args.preset.is_some() {
        let report = verify_decomposition(&complex_mul_tensor(), &d, DECOMPOSITION_TOL)?;
        println!("complex multiplication tensor: max entry error {:.3e}", report.max_abs_error);
        return Ok(report.pass);
    }
    Ok(true)
}

fn random_rows(rng: &mut impl rand::Rng, rows: usize, cols: usize) -> Vec<Vec<TrackedScalar>> {
    (0..rows).map(|_| harness::box_variables(rng, cols)).collect()
}

fn dense_product(a: &[Vec<TrackedScalar>], b: &[Vec<TrackedScalar>]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for row in a {
        for k in 0..b[0].len() {
            out.push((0..b.len()).map(|j| row[j].value * b[j][k].value).sum());
        }
    }
    out
}

fn flat(m: &[Vec<TrackedScalar>]) -> Vec<Complex64> {
    m.iter().flat_map(|r| values(r)).collect()
}

fn cmd_tpp(args: &TppArgs) -> CliResult {
    let tol = tolerance(args.tol, GROUP_TOL)?;
    let p = tpp_preset(&args.preset, args.n).map_err(|e| CliError::Config(e.to_string()))?;
    let holds = tpp_check(&p.group, &p.s, &p.t, &p.u)?;
    let quotient = quotient_tpp_check(&p.group, &p.s, &p.t, &p.u)?;
    println!("tpp_check({}) = {holds}", args.preset);
    println!("quotient form: {quotient}");
    if !(holds && quotient) {
        return Ok(true);
    }
    let mut rng = harness::rng(args.seed);
    let (m, k, q) = (p.s.len(), p.t.len(), p.u.len());
    let mut worst: f64 = 0.0;
    for _ in 0..args.trials {
        let a = random_rows(&mut rng, m, k);
        let b = random_rows(&mut rng, k, q);
        let out = cu_matmul(&p.group, &p.s, &p.t, &p.u, &a, &b, &mut CountContext::new())?;
        worst = worst.max(relative_error(&flat(&out), &dense_product(&a, &b)));
    }
    println!(
        "group-algebra product of {m}x{k} by {k}x{q}: {} trials, worst relative error {worst:.3e}",
        args.trials
    );
    Ok(worst < tol)
}

fn rows2(m: &Matrix2) -> Vec<Vec<TrackedScalar>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn cmd_simul(args: &SimulArgs) -> CliResult {
    let variant: Variant = args.variant.parse().map_err(|_| CliError::Config(format!("unknown variant \"{}\"", args.variant)))?;
    if args.n == 0 || args.trials == 0 {
        return Err(CliError::Config("--n and --trials must be positive".into()));
    }
    let tol = tolerance(args.tol, GROUP_TOL)?;
    let mut rng = harness::rng(args.seed);
    let mut worst: f64 = 0.0;
    let mut counts = Vec::new();
    for _ in 0..args.trials {
        let a_rows = random_rows(&mut rng, 2, 2);
        let a: Matrix2 = [[a_rows[0][0], a_rows[0][1]], [a_rows[1][0], a_rows[1][1]]];
        let b = random_rows(&mut rng, 2, 2 * args.n);
        let mut ctx = CountContext::new();
        let (ab, other, flipped) = if args.n == 1 {
            let b2: Matrix2 = [[b[0][0], b[0][1]], [b[1][0], b[1][1]]];
            let (x, y, f) = match variant {
                Variant::F => {
                    let (x, y) = d4_simultaneous(&a, &b2, &mut ctx)?;
                    (x, y, flip_f(&b2))
                }
                Variant::G => {
                    let (x, y) = x8_simultaneous(&a, &b2, &mut ctx)?;
                    (x, y, flip_g(&b2))
                }
            };
            (rows2(&x), rows2(&y), rows2(&f))
        } else {
            let (x, y) = blocked_simultaneous(&a, &b, variant, &mut ctx)?;
            (x, y, blocked_flip(&b, variant))
        };
        counts.push(ctx.bilinear_mults());
        let a_full = rows2(&a);
        worst = worst.max(relative_error(&flat(&ab), &dense_product(&a_full, &b)));
        worst = worst.max(relative_error(&flat(&other), &dense_product(&a_full, &flipped)));
    }
    let expected = 8 * args.n as u64;
    let counts_ok = counts.iter().all(|&c| c == expected);
    let count = counts[0];
    println!("variant {} n={} trials={} seed={}", args.variant, args.n, args.trials, args.seed);
    println!("count = {count} (expected {expected}{})", if counts_ok { "" } else { ", varies across trials" });
    println!("worst relative error = {worst:.3e} (tolerance {tol:e})");
    Ok(counts_ok && worst < tol)
}
