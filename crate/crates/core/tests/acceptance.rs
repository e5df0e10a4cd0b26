//! Acceptance suite. Runs every criterion in sequence, prints one PASS/FAIL
//! line per criterion with its runtime against the time limit, and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fatpoints::field::{trial_rng, FieldSpec, PrimeField};
use fatpoints::hilbert::{
    binomial, conditions_matrix, full_conditions_matrix, hilbert_values_mod, theorem1_table,
};
use fatpoints::verify::{
    partitions, seed_list, verify_ah_achieved, verify_cdr_generic, verify_eq1_identity,
    verify_first_half, verify_s11_minimality, verify_theorem_1_1, VerificationReport,
    VerifyContext,
};
use fatpoints::{
    build_c_dr, double, hilbert_function, hilbert_function_exact, rank_modp, DenseMatrix,
    FatPointScheme, HilbertFunction, ProjectivePoint,
};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    let passes: usize = reports.iter().map(|r| r.passes).sum();
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} {:?}", r.statement_id, r.params))
        .collect();
    Outcome::new(
        failing.is_empty(),
        if failing.is_empty() {
            format!("{passes}/{trials} trials")
        } else {
            format!("{passes}/{trials} trials; failing: {}", failing.join("; "))
        },
    )
}

const GOLDEN: [usize; 10] = [1, 3, 6, 10, 15, 21, 26, 31, 32, 33];
const GOLDEN_DIFF: [i64; 11] = [1, 2, 3, 4, 5, 6, 5, 5, 1, 1, 0];

fn golden_table(ctx: &VerifyContext) -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..10 {
        let x = build_c_dr(5, 1, FieldSpec::Rational, seed).expect("C_{5,1}");
        match hilbert_function(&double(&x).unwrap(), &ctx.primes) {
            Ok(h)
                if h.values == GOLDEN
                    && h.difference().values == GOLDEN_DIFF
                    && h.value(40) == 33 => {}
            Ok(h) => bad.push(format!("seed {seed}: {h}")),
            Err(e) => bad.push(format!("seed {seed}: {e}")),
        }
    }
    Outcome::new(bad.is_empty(), format!("10 seeds x 3 primes {bad:?}"))
}

fn line_arrangements(ctx: &VerifyContext) -> Outcome {
    let reports: Vec<_> = (3..=7)
        .map(|d| verify_theorem_1_1(d, &seed_list(0, 10), ctx))
        .collect();
    let tables: Vec<String> = (3..=7)
        .map(|d| format!("d={d}: {}", theorem1_table(d)))
        .collect();
    let mut o = summarize(&reports);
    o.detail = format!("{}; {}", o.detail, tables.join("; "));
    o
}

fn generic_support(ctx: &VerifyContext) -> Outcome {
    let reports: Vec<_> = (2..=6)
        .map(|d| verify_cdr_generic(d, &(0..=d).collect::<Vec<_>>(), &seed_list(0, 3), ctx))
        .collect();
    summarize(&reports)
}

fn first_half(ctx: &VerifyContext) -> Outcome {
    let reports: Vec<_> = (3..=6).map(|d| verify_first_half(d, 200, 0, ctx)).collect();
    let redraws: u64 = reports.iter().filter_map(|r| r.stats.get("redraws")).sum();
    let mut o = summarize(&reports);
    o.detail = format!("{} (+ C_{{d,1}} each), {redraws} redraws", o.detail);
    o
}

fn minimality(ctx: &VerifyContext) -> Outcome {
    let report = verify_s11_minimality(1000, 0, true, ctx);
    let fired: Vec<String> = report
        .stats
        .iter()
        .filter(|(k, _)| k.starts_with("h6=") || k.starts_with("c51:h6="))
        .map(|(k, v)| format!("{k}:{v}"))
        .collect();
    let mut o = summarize(std::slice::from_ref(&report));
    o.detail = format!("{}; {}", o.detail, fired.join(" "));
    o
}

fn partition_identity() -> Outcome {
    let report = verify_eq1_identity(12);
    let expected: usize = (2..=12).map(|d| partitions(d).len()).sum();
    let mut o = summarize(std::slice::from_ref(&report));
    o.passed &= report.trials == expected;
    o
}

fn ah_cap(ctx: &VerifyContext) -> Outcome {
    let s11 = verify_ah_achieved(11, 500, 0, ctx);
    let achieved = s11.stats.get("achieved").copied().unwrap_or(0);
    let s5 = verify_ah_achieved(5, 100, 0, ctx);
    let deficits = s5.stats.get("deficit_at_4").copied().unwrap_or(0);
    Outcome::new(
        s11.passed() && achieved * 100 >= 99 * 500 && s5.passed() && deficits == 100,
        format!(
            "s=11 cap met in {achieved}/500; s=5 H(4)=14 < 15 in {deficits}/100 (H(2)=6 meets the cap)"
        ),
    )
}

/// A scheme with at most 4 points, coordinates in 0..=9, multiplicities 1 or 2.
fn small_scheme(rng: &mut impl Rng) -> FatPointScheme {
    loop {
        let n = rng.gen_range(1..=4);
        let points: Option<Vec<ProjectivePoint>> = (0..n)
            .map(|_| {
                let c: Vec<i64> = (0..3).map(|_| rng.gen_range(0..=9)).collect();
                ProjectivePoint::from_i64(FieldSpec::Rational, &c).ok()
            })
            .collect();
        let mults = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        if let Some(z) = points.and_then(|p| FatPointScheme::new(p, mults).ok()) {
            return z;
        }
    }
}

fn oracle_equivalence(ctx: &VerifyContext) -> Outcome {
    let mut bad = Vec::new();
    for i in 0..100 {
        let z = small_scheme(&mut trial_rng(8, i));
        let exact = hilbert_function_exact(&z).expect("exact").values;
        for &p in &ctx.primes {
            let modular = hilbert_values_mod(&z, p).expect("modular");
            if modular != exact {
                bad.push(format!(
                    "case {i} mod {}: {modular:?} vs {exact:?}",
                    p.modulus()
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("100 schemes, exact vs 3 primes {bad:?}"),
    )
}

/// A scheme with 1 to 6 points, coordinates in 0..=9 (so special position is
/// common), multiplicities 1 to 3.
fn property_scheme(rng: &mut impl Rng) -> FatPointScheme {
    loop {
        let n = rng.gen_range(1..=6);
        let points: Option<Vec<ProjectivePoint>> = (0..n)
            .map(|_| {
                let c: Vec<i64> = (0..3).map(|_| rng.gen_range(0..=9)).collect();
                ProjectivePoint::from_i64(FieldSpec::Rational, &c).ok()
            })
            .collect();
        let mults = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        if let Some(z) = points.and_then(|p| FatPointScheme::new(p, mults).ok()) {
            return z;
        }
    }
}

fn invertible(rng: &mut impl Rng) -> DenseMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let m = DenseMatrix::from_i64_rows(FieldSpec::Rational, &rows).unwrap();
        if m.rank().unwrap() == 3 {
            return m;
        }
    }
}

fn shape_violations(h: &HilbertFunction, z: &FatPointScheme) -> Vec<String> {
    let mut v = Vec::new();
    let mult_sum: usize = z.multiplicities().iter().map(|&m| m as usize).sum();
    if h.degree != z.degree() || h.values.last() != Some(&z.degree()) {
        v.push("does not stabilize at the degree".into());
    }
    if h.values.windows(2).any(|w| w[1] < w[0]) {
        v.push("decreases".into());
    }
    if h.values
        .iter()
        .enumerate()
        .any(|(t, &x)| x > binomial(t + 2, 2))
    {
        v.push("exceeds the monomial count".into());
    }
    if h.stabilization_index + 1 > mult_sum.max(1) {
        v.push(format!(
            "stabilizes at {} > sum(m) - 1",
            h.stabilization_index
        ));
    }
    if h.difference().values.last() != Some(&0) {
        v.push("difference does not end in 0".into());
    }
    v
}

fn property_suite(ctx: &VerifyContext) -> Outcome {
    let p0 = ctx.primes[0];
    let mut violations = Vec::new();
    let mut coordinate_changes = 0;
    for case in 0..200u64 {
        let rng = &mut trial_rng(9, case);
        let z = property_scheme(rng);
        let h = match hilbert_function(&z, &ctx.primes) {
            Ok(h) => h,
            Err(e) => {
                violations.push(format!("case {case}: {e}"));
                continue;
            }
        };
        for v in shape_violations(&h, &z) {
            violations.push(format!("case {case}: {v}"));
        }
        if case % 4 == 0 {
            coordinate_changes += 1;
            let moved = z.transformed(&invertible(rng)).unwrap();
            match hilbert_function(&moved, &ctx.primes) {
                Ok(hm) if hm.values == h.values => {}
                other => violations.push(format!("case {case}: coordinate change gave {other:?}")),
            }
        }
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(0..=9)).collect();
        if let Ok(q) = ProjectivePoint::from_i64(FieldSpec::Rational, &c) {
            if let Ok(bigger) = z.with_point(q, rng.gen_range(1..=3)) {
                let hb = hilbert_function(&bigger, &ctx.primes).unwrap();
                if (0..=hb.stabilization_index).any(|t| hb.value(t) < h.value(t)) {
                    violations.push(format!("case {case}: adding a point lowered H"));
                }
            }
        }
        for t in 0..=h.stabilization_index + 1 {
            let top = rank_modp(&conditions_matrix(&z, t, FieldSpec::Prime(p0)).unwrap()).unwrap();
            let full =
                rank_modp(&full_conditions_matrix(&z, t, FieldSpec::Prime(p0)).unwrap()).unwrap();
            if top != full {
                violations.push(format!(
                    "case {case}, t = {t}: top-order rank {top} != {full}"
                ));
            }
        }
    }
    Outcome::new(
        violations.is_empty() && coordinate_changes == 50,
        format!("200 cases, {coordinate_changes} coordinate changes, violations {violations:?}"),
    )
}

fn main() -> ExitCode {
    let ctx = VerifyContext::with_primes(PrimeField::defaults());
    type Criterion<'a> = (&'a str, u64, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            "1 golden 2C_{5,1} table",
            1,
            Box::new(|| golden_table(&ctx)),
        ),
        (
            "2 2C_d closed form, d=3..7",
            10,
            Box::new(|| line_arrangements(&ctx)),
        ),
        (
            "3 C_d, C_{d,r} generic support, d<=6",
            10,
            Box::new(|| generic_support(&ctx)),
        ),
        (
            "4 first half, d=3..6 x 200",
            60,
            Box::new(|| first_half(&ctx)),
        ),
        (
            "5 s=11 minimality, 1000 + families",
            120,
            Box::new(|| minimality(&ctx)),
        ),
        (
            "6 partition identity, d<=12",
            1,
            Box::new(partition_identity),
        ),
        (
            "7 double-point cap, s=11 and s=5",
            120,
            Box::new(|| ah_cap(&ctx)),
        ),
        (
            "8 exact vs modular oracles",
            30,
            Box::new(|| oracle_equivalence(&ctx)),
        ),
        (
            "9 property suite, 200 cases",
            120,
            Box::new(|| property_suite(&ctx)),
        ),
    ];
    let mut all = true;
    for (name, limit, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let ok = outcome.passed && in_time;
        all &= ok;
        println!(
            "{} criterion {name}: {:.2}s (limit {limit}s) {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    println!("{}", fatpoints::verify::CAVEAT);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
