//! Acceptance suite: one PASS/FAIL line per criterion. Runs under
//! `cargo test` with a custom harness.
//!
//! A failure is either documented or unexpected. A documented failure is a
//! criterion that cannot hold as stated, and it is reported with its exact
//! shape; the process exits non-zero on any unexpected failure, including a
//! documented criterion failing in some other way.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bilinear_kernels::arith::{CountContext, TrackedScalar};
use bilinear_kernels::group::simultaneous::{blocked_flip, flip_f, flip_g};
use bilinear_kernels::group::{
    blocked_simultaneous, cu_matmul, d4_simultaneous, tpp_check, tpp_preset, x8_simultaneous, Variant,
};
use bilinear_kernels::harness::{self, relative_error, values};
use bilinear_kernels::kernels::{
    commutator_2x2, extract_decomposition, extract_tph_reduced, f_circulant_inverse, formula_count, gauss_complex_mul, toeplitz_matmul,
    toeplitz_matmul_count, Matrix2,
};
use bilinear_kernels::structures::{dimension, Kind, Level};
use bilinear_kernels::suite::{
    count_row, equivalence_trials, inverse_residual, tolerance_for, Sampler, DEFAULT_TOLERANCE,
};
use bilinear_kernels::tensor::decomposition::presets;
use bilinear_kernels::tensor::{
    commutator_beta_tensor, complex_mul_tensor, flattening_ranks, ottaviani_test, stability_measure, structured_tensor,
    verify_decomposition, Tensor3, TensorDecomposition, Term, DEFAULT_RANK_TOLERANCE,
};
use num_complex::Complex64;

#[derive(Debug)]
enum Failure {
    Documented(String),
    Unexpected(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Unexpected(s)
    }
}

type Outcome = Result<String, Failure>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: bilinear_kernels::Error) -> String {
    e.to_string()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn single_level_kinds() -> Vec<(Kind, usize)> {
    // (kind, smallest n)
    vec![
        (Kind::Circulant, 1),
        (Kind::FCirculant { f: c(-1.0) }, 1),
        (Kind::FCirculant { f: c(2.0) }, 1),
        (Kind::FCirculant { f: Complex64::new(0.0, 1.0) }, 1),
        (Kind::Toeplitz, 1),
        (Kind::Hankel, 1),
        (Kind::UpperTriangularToeplitz, 1),
        (Kind::ToeplitzPlusHankel, 1),
        (Kind::Symmetric, 1),
        (Kind::SkewSymmetric, 2),
    ]
}

fn multilevel(sizes: &[usize]) -> (Kind, usize) {
    let levels = sizes.iter().map(|&k| Level::new(Kind::Toeplitz, k).unwrap()).collect();
    (Kind::Multilevel(levels), sizes.iter().product())
}

fn matrix2(v: &[TrackedScalar]) -> Matrix2 {
    [[v[0], v[1]], [v[2], v[3]]]
}

fn rows(m: &Matrix2) -> Vec<Vec<TrackedScalar>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn dense(a: &[Vec<TrackedScalar>], b: &[Vec<TrackedScalar>]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for row in a {
        for k in 0..b[0].len() {
            out.push((0..b.len()).map(|j| row[j].value * b[j][k].value).sum());
        }
    }
    out
}

fn flat(m: &[Vec<TrackedScalar>]) -> Vec<Complex64> {
    m.iter().flatten().map(|x| x.value).collect()
}

fn criterion_1() -> Outcome {
    let mut checked = 0usize;
    let mut check = |kind: &Kind, n: usize, expect: u64, seed: u64| -> Result<(), String> {
        let row = count_row(kind, n, seed).map_err(err)?;
        checked += 1;
        ensure(row.fast_mults == expect && row.formula == expect, || {
            format!("{} n={}: fast {} formula {} expected {}", row.structure, row.size, row.fast_mults, row.formula, expect)
        })
    };
    for n in 1..=16usize {
        let m = n as u64;
        for (kind, min_n) in single_level_kinds() {
            if n < min_n {
                continue;
            }
            let expect = match kind {
                Kind::Circulant | Kind::FCirculant { .. } => m,
                Kind::Toeplitz | Kind::Hankel | Kind::UpperTriangularToeplitz => 2 * m - 1,
                Kind::ToeplitzPlusHankel => 4 * m - 3,
                Kind::Symmetric => m * (m + 1) / 2,
                Kind::SkewSymmetric => m * m - m - (m - 1).div_ceil(2) + 1,
                _ => unreachable!(),
            };
            // Two seeds: counts must not depend on the input values.
            check(&kind, n, expect, n as u64)?;
            check(&kind, n, expect, 1000 + n as u64)?;
        }
    }
    let mut rng = harness::rng(99);
    for i in 0..20 {
        let n = 1 + i % 8;
        let pattern = harness::random_pattern(&mut rng, n, 0.35);
        let expect = pattern.len() as u64;
        check(&Kind::Sparse(pattern), n, expect, i as u64)?;
    }
    for a in 1..=5usize {
        for b in 1..=5usize {
            let (kind, n) = multilevel(&[a, b]);
            check(&kind, n, ((2 * a - 1) * (2 * b - 1)) as u64, (a * 10 + b) as u64)?;
        }
    }
    for a in 1..=3usize {
        for b in 1..=3usize {
            for d in 1..=3usize {
                let (kind, n) = multilevel(&[a, b, d]);
                check(&kind, n, ((2 * a - 1) * (2 * b - 1) * (2 * d - 1)) as u64, 7)?;
            }
        }
    }
    let mut rng = harness::rng(5);
    for n in 1..=16usize {
        let t = harness::box_variables(&mut rng, 2 * n - 1);
        let y: Vec<Vec<TrackedScalar>> = (0..n).map(|_| harness::box_variables(&mut rng, n)).collect();
        let mut ctx = CountContext::new();
        toeplitz_matmul(&t, &y, &mut ctx).map_err(err)?;
        ensure(ctx.bilinear_mults() == (n * (2 * n - 1)) as u64 && toeplitz_matmul_count(n) == ctx.bilinear_mults(), || {
            format!("toeplitz matmul n={n}: {}", ctx.bilinear_mults())
        })?;
    }
    let v = harness::box_variables(&mut rng, 8);
    let mut ctx = CountContext::new();
    commutator_2x2(&matrix2(&v[..4]), &matrix2(&v[4..]), &mut ctx);
    ensure(ctx.bilinear_mults() == 6, || format!("commutator {}", ctx.bilinear_mults()))?;
    let mut ctx = CountContext::new();
    gauss_complex_mul(v[0], v[1], v[2], v[3], &mut ctx);
    ensure(ctx.bilinear_mults() == 3, || format!("gauss {}", ctx.bilinear_mults()))?;
    let mut ctx = CountContext::new();
    d4_simultaneous(&matrix2(&v[..4]), &matrix2(&v[4..]), &mut ctx).map_err(err)?;
    ensure(ctx.bilinear_mults() == 8, || format!("d4_simultaneous {}", ctx.bilinear_mults()))?;
    let mut ctx = CountContext::new();
    x8_simultaneous(&matrix2(&v[..4]), &matrix2(&v[4..]), &mut ctx).map_err(err)?;
    ensure(ctx.bilinear_mults() == 8, || format!("x8_simultaneous {}", ctx.bilinear_mults()))?;
    for n in 1..=4usize {
        for variant in [Variant::F, Variant::G] {
            let b: Vec<Vec<TrackedScalar>> = (0..2).map(|_| harness::box_variables(&mut rng, 2 * n)).collect();
            let mut ctx = CountContext::new();
            blocked_simultaneous(&matrix2(&v[..4]), &b, variant, &mut ctx).map_err(err)?;
            ensure(ctx.bilinear_mults() == 8 * n as u64, || format!("blocked {variant:?} n={n}: {}", ctx.bilinear_mults()))?;
        }
    }
    Ok(format!("{checked} structured cells plus matmul, commutator, Gauss and simultaneous counts exact"))
}

fn criterion_2() -> Outcome {
    const TRIALS: usize = 200;
    let mut worst: f64 = 0.0;
    let mut cells = 0usize;
    let mut run = |kind: &Kind, n: usize, seed: u64| -> Result<(), String> {
        let tol = tolerance_for(kind);
        let r = equivalence_trials(kind, n, TRIALS, seed, Sampler::Disk).map_err(err)?;
        cells += 1;
        worst = worst.max(r.max_relative_error);
        ensure(r.passes(tol), || {
            format!("{} n={n}: max relative error {:.3e} (tol {tol:e}), counts match {}", kind.name(), r.max_relative_error, r.counts_match)
        })
    };
    let mut kinds = single_level_kinds();
    kinds.push((Kind::FCirculant { f: c(20.0) }, 1));
    kinds.push((Kind::FCirculant { f: Complex64::new(0.0, 0.05) }, 1));
    for n in 1..=16usize {
        for (kind, min_n) in &kinds {
            if n >= *min_n {
                run(kind, n, 17 * n as u64)?;
            }
        }
    }
    let mut rng = harness::rng(41);
    for n in 1..=16usize {
        let pattern = harness::random_pattern(&mut rng, n, 0.3);
        run(&Kind::Sparse(pattern), n, n as u64)?;
    }
    for sizes in [[2, 3], [3, 3], [4, 2], [5, 5]] {
        let (kind, n) = multilevel(&sizes);
        run(&kind, n, 3)?;
    }
    let (kind, n) = multilevel(&[2, 3, 2]);
    run(&kind, n, 4)?;
    let mixed = Kind::Multilevel(vec![
        Level::new(Kind::Circulant, 3).unwrap(),
        Level::new(Kind::ToeplitzPlusHankel, 2).unwrap(),
        Level::new(Kind::Symmetric, 2).unwrap(),
    ]);
    run(&mixed, 12, 5)?;

    // Kernels outside the structured family.
    let mut rng = harness::rng(43);
    for n in 1..=8usize {
        for _ in 0..TRIALS / 8 {
            let t = harness::disk_variables(&mut rng, 2 * n - 1);
            let y: Vec<Vec<TrackedScalar>> = (0..n).map(|_| harness::disk_variables(&mut rng, n)).collect();
            let out = toeplitz_matmul(&t, &y, &mut CountContext::new()).map_err(err)?;
            let tm = bilinear_kernels::structures::StructuredMatrix::new(Kind::Toeplitz, n, t.clone()).map_err(err)?;
            let e = relative_error(&flat(&out), &dense(&tm.densify().map_err(err)?, &y));
            worst = worst.max(e);
            ensure(e < DEFAULT_TOLERANCE, || format!("toeplitz matmul n={n}: {e:.3e}"))?;
        }
    }
    for _ in 0..TRIALS {
        let v = harness::disk_variables(&mut rng, 8);
        let (a, x) = (matrix2(&v[..4]), matrix2(&v[4..]));
        let out = commutator_2x2(&a, &x, &mut CountContext::new());
        let ax = dense(&rows(&a), &rows(&x));
        let xa = dense(&rows(&x), &rows(&a));
        let want: Vec<Complex64> = ax.iter().zip(&xa).map(|(p, q)| p - q).collect();
        let e = relative_error(&flat(&rows(&out)), &want);
        worst = worst.max(e);
        ensure(e < DEFAULT_TOLERANCE, || format!("commutator: {e:.3e}"))?;
        let (re, im) = gauss_complex_mul(v[0], v[1], v[2], v[3], &mut CountContext::new());
        let want = [v[0].value * v[2].value - v[1].value * v[3].value, v[0].value * v[3].value + v[1].value * v[2].value];
        let e = relative_error(&[re.value, im.value], &want);
        worst = worst.max(e);
        ensure(e < DEFAULT_TOLERANCE, || format!("gauss: {e:.3e}"))?;
    }
    Ok(format!("{cells} kernel/size cells x {TRIALS} trials, worst relative error {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let kinds = [Kind::Circulant, Kind::Toeplitz, Kind::Hankel, Kind::ToeplitzPlusHankel, Kind::Symmetric];
    let mut worst: f64 = 0.0;
    // (n, term count, flattening rank) where the rank falls short of the count.
    let mut gaps = Vec::new();
    for kind in &kinds {
        for n in 1..=8usize {
            let d = extract_decomposition(kind, n).map_err(err)?;
            let formula = formula_count(kind, n);
            ensure(d.len() as u64 == formula, || format!("{} n={n}: {} terms, formula {formula}", kind.name(), d.len()))?;
            let t = structured_tensor(kind, n).map_err(err)?;
            let report = verify_decomposition(&t, &d, 1e-8).map_err(err)?;
            worst = worst.max(report.max_abs_error);
            ensure(report.pass, || format!("{} n={n}: decomposition error {:.3e}", kind.name(), report.max_abs_error))?;
            let (r1, _, _) = flattening_ranks(&t, DEFAULT_RANK_TOLERANCE);
            ensure(r1 == dimension(kind, n), || {
                format!("{} n={n}: flattening rank {r1}, dimension {}", kind.name(), dimension(kind, n))
            })?;
            if r1 as u64 == formula {
                continue;
            }
            ensure(*kind == Kind::ToeplitzPlusHankel, || {
                format!("{} n={n}: flattening rank {r1}, formula {formula}", kind.name())
            })?;
            // The term count is only an upper bound here; the 4n − 4 kernel
            // has to close the gap for the failure to be the documented one.
            let reduced = extract_tph_reduced(n).map_err(err)?;
            let check = verify_decomposition(&t, &reduced, 1e-8).map_err(err)?;
            worst = worst.max(check.max_abs_error);
            ensure(check.pass && reduced.len() == r1, || {
                format!("tph n={n}: reduced kernel has {} terms, error {:.3e}", reduced.len(), check.max_abs_error)
            })?;
            gaps.push((n, formula, r1));
        }
    }
    if gaps.is_empty() {
        return Ok(format!("5 kinds x n=1..8: rank = term count = dimension, worst entry error {worst:.2e}"));
    }
    let expected: Vec<(usize, u64, usize)> = (2..=8).map(|n| (n, 4 * n as u64 - 3, 4 * n - 4)).collect();
    let listed = gaps.iter().map(|(n, f, r)| format!("n={n}: {f} vs {r}")).collect::<Vec<_>>().join(", ");
    if gaps != expected {
        return Err(Failure::Unexpected(format!("tph term count exceeds flattening rank: {listed}")));
    }
    Err(Failure::Documented(format!(
        "tph term count 4n-3 exceeds the flattening rank 4n-4 = dimension for n=2..8 ({listed}); \
         the 4n-4 kernel certifies rank 4n-4 there. circulant, toeplitz, hankel and symmetric certified \
         for n=1..8, worst entry error {worst:.2e}"
    )))
}

fn random_rank_four(seed: u64) -> Result<Tensor3, String> {
    let mut rng = harness::rng(seed);
    let terms = (0..4)
        .map(|_| {
            Term::new(
                c(1.0),
                harness::disk_values(&mut rng, 3),
                harness::disk_values(&mut rng, 3),
                harness::disk_values(&mut rng, 3),
            )
        })
        .collect();
    TensorDecomposition::new((3, 3, 3), terms).and_then(|d| d.to_tensor()).map_err(err)
}

fn criterion_4() -> Outcome {
    let skew = ottaviani_test(&structured_tensor(&Kind::SkewSymmetric, 3).map_err(err)?).map_err(err)?;
    ensure(skew.nonsingular, || format!("3x3 skew matvec tensor singular (|det| {:.3e})", skew.det_magnitude))?;
    let beta = ottaviani_test(&commutator_beta_tensor()).map_err(err)?;
    ensure(beta.nonsingular, || format!("commutator tensor singular (|det| {:.3e})", beta.det_magnitude))?;
    let mut largest: f64 = 0.0;
    for seed in 0..50 {
        let r = ottaviani_test(&random_rank_four(seed)?).map_err(err)?;
        largest = largest.max(r.det_magnitude);
        ensure(!r.nonsingular, || format!("rank-4 synthetic {seed} reported nonsingular (|det| {:.3e})", r.det_magnitude))?;
    }
    Ok(format!(
        "skew |det| {:.3}, commutator |det| {:.3}, 50 rank-4 synthetics singular (max |det| {largest:.1e})",
        skew.det_magnitude, beta.det_magnitude
    ))
}

fn criterion_5() -> Outcome {
    let usual = stability_measure(&presets::usual()).map_err(err)?;
    ensure((usual - 4.0).abs() <= 1e-9, || format!("usual {usual}"))?;
    let gauss = stability_measure(&presets::gauss()).map_err(err)?;
    ensure((gauss - 2.0 * (1.0 + 2f64.sqrt())).abs() <= 1e-9, || format!("gauss {gauss}"))?;
    let cube = presets::cube();
    let v = verify_decomposition(&complex_mul_tensor(), &cube, 1e-9).map_err(err)?;
    ensure(v.pass, || format!("cube does not verify: {:.3e}", v.max_abs_error))?;
    let cm = stability_measure(&cube).map_err(err)?;
    ensure((cm - 4.0).abs() <= 1e-7, || format!("cube {cm}"))?;
    Ok(format!("usual {usual:.9}, gauss {gauss:.9}, cube {cm:.9} (verified, error {:.1e})", v.max_abs_error))
}

fn criterion_6() -> Outcome {
    let mut rng = harness::rng(6);
    let fs = [c(1.0), c(-1.0), c(2.0), Complex64::new(0.0, 1.0), Complex64::new(0.3, -0.4)];
    let mut worst: f64 = 0.0;
    for trial in 0..50usize {
        let n = 1 + trial % 16;
        let f = fs[trial % fs.len()];
        let mut params = harness::disk_values(&mut rng, n);
        params[0] += c(n as f64 + 1.0);
        let vars: Vec<TrackedScalar> = params.iter().map(|&z| TrackedScalar::variable(z)).collect();
        let mut ctx = CountContext::new();
        let inv = f_circulant_inverse(&vars, f, &mut ctx).map_err(err)?;
        ensure(ctx.divisions() == n as u64 && ctx.bilinear_mults() == 0, || {
            format!("n={n} f={f}: {} divisions, {} bilinear", ctx.divisions(), ctx.bilinear_mults())
        })?;
        let kind = if f == c(1.0) { Kind::Circulant } else { Kind::FCirculant { f } };
        let res = inverse_residual(&kind, &params, &values(&inv)).map_err(err)?;
        worst = worst.max(res);
        ensure(res < 1e-8, || format!("n={n} f={f}: residual {res:.3e}"))?;
    }
    Ok(format!("50 instances, n divisions and 0 products each, worst residual {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    for (name, n, expect) in [("d4-222", 0, true), ("cyclic-1n1", 6, true), ("c2-full", 0, false)] {
        let p = tpp_preset(name, n).map_err(err)?;
        let got = tpp_check(&p.group, &p.s, &p.t, &p.u).map_err(err)?;
        ensure(got == expect, || format!("{name}: tpp_check {got}"))?;
    }
    let mut rng = harness::rng(7);
    let mut worst: f64 = 0.0;
    for (name, n) in [("d4-222", 0), ("cyclic-1n1", 5)] {
        let p = tpp_preset(name, n).map_err(err)?;
        for _ in 0..100 {
            let a: Vec<Vec<TrackedScalar>> = (0..p.s.len()).map(|_| harness::disk_variables(&mut rng, p.t.len())).collect();
            let b: Vec<Vec<TrackedScalar>> = (0..p.t.len()).map(|_| harness::disk_variables(&mut rng, p.u.len())).collect();
            let out = cu_matmul(&p.group, &p.s, &p.t, &p.u, &a, &b, &mut CountContext::new()).map_err(err)?;
            let e = relative_error(&flat(&out), &dense(&a, &b));
            worst = worst.max(e);
            ensure(e < 1e-9, || format!("cu_matmul {name}: {e:.3e}"))?;
        }
    }
    for _ in 0..100 {
        let v = harness::disk_variables(&mut rng, 8);
        let (a, b) = (matrix2(&v[..4]), matrix2(&v[4..]));
        let (ab, abf) = d4_simultaneous(&a, &b, &mut CountContext::new()).map_err(err)?;
        let (ab2, abg) = x8_simultaneous(&a, &b, &mut CountContext::new()).map_err(err)?;
        let want_ab = dense(&rows(&a), &rows(&b));
        for (got, want) in [
            (flat(&rows(&ab)), want_ab.clone()),
            (flat(&rows(&ab2)), want_ab),
            (flat(&rows(&abf)), dense(&rows(&a), &rows(&flip_f(&b)))),
            (flat(&rows(&abg)), dense(&rows(&a), &rows(&flip_g(&b)))),
        ] {
            let e = relative_error(&got, &want);
            worst = worst.max(e);
            ensure(e < 1e-9, || format!("simultaneous kernel error {e:.3e}"))?;
        }
    }
    for n in 1..=4usize {
        for variant in [Variant::F, Variant::G] {
            let a = matrix2(&harness::disk_variables(&mut rng, 4));
            let b: Vec<Vec<TrackedScalar>> = (0..2).map(|_| harness::disk_variables(&mut rng, 2 * n)).collect();
            let (ab, other) = blocked_simultaneous(&a, &b, variant, &mut CountContext::new()).map_err(err)?;
            let e1 = relative_error(&flat(&ab), &dense(&rows(&a), &b));
            let e2 = relative_error(&flat(&other), &dense(&rows(&a), &blocked_flip(&b, variant)));
            worst = worst.max(e1).max(e2);
            ensure(e1 < 1e-9 && e2 < 1e-9, || format!("blocked {variant:?} n={n}: {e1:.3e} {e2:.3e}"))?;
        }
    }
    Ok(format!("triple presets as expected, 100 trials each agree with dense products (worst {worst:.2e})"))
}

fn main() -> ExitCode {
    // A name filter that does not match this suite skips it.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }

    let criteria: [Criterion; 7] = [
        (1, "exact multiplication counts", Duration::from_secs(30), criterion_1),
        (2, "fast vs naive correctness", Duration::from_secs(60), criterion_2),
        (3, "rank certification", Duration::from_secs(30), criterion_3),
        (4, "border-rank lower bounds", Duration::from_secs(5), criterion_4),
        (5, "stability values", Duration::from_secs(1), criterion_5),
        (6, "inverses", Duration::from_secs(5), criterion_6),
        (7, "group module", Duration::from_secs(10), criterion_7),
    ];
    let (mut passed, mut documented, mut unexpected) = (0, 0, 0);
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let secs = elapsed.as_secs_f64();
        let line = match outcome {
            Ok(detail) if elapsed <= budget => {
                passed += 1;
                format!("PASS criterion {id} ({title}): {detail} [{secs:.2}s]")
            }
            Ok(detail) => {
                unexpected += 1;
                format!("FAIL criterion {id} ({title}): over time budget {:.0}s: {detail} [{secs:.2}s]", budget.as_secs_f64())
            }
            Err(Failure::Documented(why)) => {
                documented += 1;
                format!("FAIL criterion {id} ({title}): {why} [{secs:.2}s] (documented)")
            }
            Err(Failure::Unexpected(why)) => {
                unexpected += 1;
                format!("FAIL criterion {id} ({title}): {why} [{secs:.2}s]")
            }
        };
        println!("{line}");
    }
    println!(
        "SKIP criterion 8 (declared out of reach): rank-5 algorithms for the 3x3 skew-symmetric matvec and the 2x2 \
         commutator, and the asymptotic matrix multiplication exponent, are not tested"
    );
    println!("acceptance: {passed} passed, {documented} failed (documented), {unexpected} failed (unexpected), 1 declared");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
