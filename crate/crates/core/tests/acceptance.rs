//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use quadric_steenrod::arith::{binom_exact, binom_mod2};
use quadric_steenrod::formal_coeffs::{residual_mod, Modulus};
use quadric_steenrod::harness::{
    lemma_2_2_pushforward, lemma_2_2_target, sweep, verify_chern, verify_coefficient_sum,
    verify_wu_consistency, CheckKind, HarnessOptions, Mutation, SweepConfig, VerificationReport,
};
use quadric_steenrod::quadric_chow::{
    chern_neg_tangent, steenrod_sq_cycle, MiddleSquare, QuadricCycle, QuadricRing, SteenrodRule,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn run_checks(checks: &[CheckKind], options: HarnessOptions) -> Vec<VerificationReport> {
    let config = SweepConfig {
        n_range: 1..=24,
        j_range: 0..=8,
        m_max: 20,
        checks: checks.to_vec(),
        options,
        ..SweepConfig::default()
    };
    sweep(&config).expect("sweep runs").reports
}

fn all_pass(reports: &[VerificationReport], what: &str) -> Outcome {
    match reports.iter().find(|r| !r.passed()) {
        None if reports.is_empty() => Err(format!("{what}: no tuples")),
        None => Ok(format!("{} {what} tuples", reports.len())),
        Some(r) => Err(format!(
            "{what} fails at n={} m={} j={}: {:?}",
            r.params.n, r.params.m, r.params.j, r.residual
        )),
    }
}

fn expected_tuple_count() -> usize {
    let mut count = 0;
    for n in 1..=24u32 {
        for m in 0..=20u32 {
            for j in 0..=m {
                if 2 * m < n + 2 * j {
                    count += 1;
                }
            }
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let reports = run_checks(&[CheckKind::Thm1], HarnessOptions::default());
    let elapsed = start.elapsed();
    if reports.len() != expected_tuple_count() {
        return Err(format!(
            "{} tuples, expected {}",
            reports.len(),
            expected_tuple_count()
        ));
    }
    let msg = all_pass(&reports, "mod-4")?;
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{msg} in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let reports = run_checks(&[CheckKind::Lemma13], HarnessOptions::default());
    if reports.len() != expected_tuple_count() {
        return Err("tuple set differs".into());
    }
    all_pass(&reports, "exact-zero")
}

fn criterion_3() -> Outcome {
    let reports = run_checks(
        &[CheckKind::Prop21, CheckKind::Lemma22],
        HarnessOptions::default(),
    );
    if reports.len() != 2 * 24 * 9 {
        return Err(format!("{} reports", reports.len()));
    }
    let msg = all_pass(&reports, "proposition/lemma")?;
    for n in 1..=24u32 {
        for j in 0..=8u32 {
            let m = n.div_ceil(2) + j;
            let even = (m - j) % 2 == 0;
            let push =
                lemma_2_2_pushforward(n, j, MiddleSquare::Forced).map_err(|e| e.to_string())?;
            for branch in [true, false] {
                let target = lemma_2_2_target(n, j, branch).map_err(|e| e.to_string())?;
                let holds = residual_mod(&push, &target, Modulus::Four)
                    .map_err(|e| e.to_string())?
                    .is_zero();
                if holds != (branch == even) {
                    return Err(format!(
                        "case split wrong at n={n} j={j} branch even={branch}"
                    ));
                }
            }
        }
    }
    Ok(format!("{msg}; case split exact"))
}

fn criterion_4() -> Outcome {
    let reports = run_checks(&[CheckKind::Thm24], HarnessOptions::default());
    all_pass(&reports, "z^j mod 2")
}

fn criterion_5() -> Outcome {
    for d in [1u32, 3, 7, 15, 31] {
        let classes = chern_neg_tangent(d).map_err(|e| e.to_string())?;
        let a = -(d as i64) - 2;
        for c in &classes {
            let i = c.degree as u64;
            // (1 + 2h)(1 + h)^{-(d+2)}
            let mut oracle = binom_exact(a, i);
            if i >= 1 {
                oracle += binom_exact(a, i - 1) * 2;
            }
            if c.coefficient != oracle {
                return Err(format!("d={d} c_{i}: {} vs {oracle}", c.coefficient));
            }
            if !c.coefficient.is_odd() {
                return Err(format!("d={d} c_{i} even"));
            }
            if u8::from(c.coefficient.is_odd()) != binom_mod2(a, i) {
                return Err(format!("d={d} c_{i} parity"));
            }
        }
        if !verify_chern(d).map_err(|e| e.to_string())?.passed() {
            return Err(format!("chern check d={d}"));
        }
    }
    Ok("d in {1,3,7,15,31}".into())
}

fn criterion_6() -> Outcome {
    for k in 0..=10u32 {
        for d in [31u32, 63] {
            for j in 0..=3u32 {
                for m in (2 * k + j)..=(2 * k + j + 4).min(d + j) {
                    let mut sum = BigInt::zero();
                    for i in (d + j - m)..=d {
                        if d - i >= k {
                            sum += binom_exact(k as i64, (d - i - k) as u64);
                        }
                    }
                    if sum != BigInt::from(1u64 << k) {
                        return Err(format!("k={k} d={d} m={m} j={j}: sum {sum}"));
                    }
                    if (&sum * 2u32 % 4u32).is_zero() != (k >= 1) {
                        return Err(format!("divisibility at k={k}"));
                    }
                    let r = verify_coefficient_sum(k, d, m, j).map_err(|e| e.to_string())?;
                    if !r.passed() {
                        return Err(format!("coeffsum check k={k} d={d} m={m} j={j}"));
                    }
                }
            }
        }
    }
    Ok("k <= 10".into())
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for d in 1..=7 {
        for r in 0..=10 {
            let report = verify_wu_consistency(d, r, &HarnessOptions::default())
                .map_err(|e| e.to_string())?;
            if !report.passed() {
                return Err(format!("d={d} r={r}: {:?}", report.residual));
            }
            count += 1;
        }
    }
    Ok(format!("{count} (d, r) pairs"))
}

fn sq(a: u32, x: &QuadricCycle) -> QuadricCycle {
    steenrod_sq_cycle(SteenrodRule::Standard, a, x)
}

fn criterion_8() -> Outcome {
    for n in 1..=12u32 {
        let ring = QuadricRing::new(n).map_err(|e| e.to_string())?;
        let basis: Vec<QuadricCycle> = ring
            .basis()
            .map(|b| QuadricCycle::basis(ring, b).unwrap())
            .collect();
        for x in &basis {
            if sq(0, x) != x.reduce_mod(2) {
                return Err(format!("n={n}: S^0 {x}"));
            }
            let c = x.codim();
            if sq(c, x) != x.mul(x).unwrap().reduce_mod(2) {
                return Err(format!("n={n}: top square of {x}"));
            }
            if (c + 1..=n + 1).any(|a| !sq(a, x).is_zero()) {
                return Err(format!("n={n}: instability at {x}"));
            }
            for y in &basis {
                let xy = x.mul(y).unwrap();
                if xy != y.mul(x).unwrap() {
                    return Err(format!("n={n}: {x} {y} do not commute"));
                }
                for z in &basis {
                    if xy.mul(z).unwrap() != x.mul(&y.mul(z).unwrap()).unwrap() {
                        return Err(format!("n={n}: associativity at {x} {y} {z}"));
                    }
                }
                for r in 0..=n {
                    let mut rhs = QuadricCycle::zero(ring, xy.codim() + r);
                    for a in 0..=r {
                        rhs = rhs.add(&sq(a, x).mul(&sq(r - a, y)).unwrap()).unwrap();
                    }
                    if sq(r, &xy) != rhs.reduce_mod(2) {
                        return Err(format!("n={n}: Cartan S^{r}({x} {y})"));
                    }
                }
            }
        }
    }
    for a in -64i64..=64 {
        for k in 0..=64u64 {
            if u8::from(binom_exact(a, k).is_odd()) != binom_mod2(a, k) {
                return Err(format!("Lucas at binom({a},{k})"));
            }
        }
    }
    Ok("n <= 12 exhaustive; Lucas |a|, k <= 64".into())
}

fn criterion_9() -> Outcome {
    let checks = [
        CheckKind::Thm1,
        CheckKind::Lemma13,
        CheckKind::Prop21,
        CheckKind::Lemma22,
        CheckKind::Thm24,
    ];
    let verdicts = |ms| {
        run_checks(&checks, HarnessOptions::default().with_middle_square(ms))
            .into_iter()
            .map(|r| (r.sort_key(), r.status))
            .collect::<Vec<_>>()
    };
    if verdicts(MiddleSquare::Forced) != verdicts(MiddleSquare::Opposite) {
        return Err("verdicts depend on the middle-square convention".into());
    }
    let mut failing = Vec::new();
    for mutation in [Mutation::FlippedBinomial, Mutation::SwappedKunnethBlock] {
        let opts = HarnessOptions::default().with_mutation(Some(mutation));
        let failed = run_checks(&checks, opts)
            .iter()
            .filter(|r| !r.passed())
            .count();
        if failed == 0 {
            return Err(format!("{mutation:?} is not detected"));
        }
        failing.push(format!("{mutation:?}: {failed} failures"));
    }
    Ok(format!("conventions agree; {}", failing.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("generic congruence mod 4", criterion_1),
        ("vanishing lemma exact", criterion_2),
        ("boundary proposition and lemma", criterion_3),
        ("middle pushforward mod 2", criterion_4),
        ("Chern parity", criterion_5),
        ("coefficient sum", criterion_6),
        ("Wu consistency", criterion_7),
        ("axiom suite", criterion_8),
        ("conventions and mutation", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS ({name}: {detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL ({name}: {detail})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
