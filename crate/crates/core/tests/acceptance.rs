//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion, and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use stackwords::asymptotics::{
    bound_nth_root, closed_form_x_star, g, g_unsimplified, maximize_g, summand_nth_root,
};
use stackwords::enumerate::{
    binomial, brute_force_histogram, brute_force_w3_by_image_descents, brute_force_wt, catalan,
    lemma_bound, w2, w2_by_descents, FactorialTable,
};
use stackwords::machine::{is_t_stack_sortable, iterate_sort, run_series_machine, stack_sort};
use stackwords::perm::{all_permutations, Permutation};
use stackwords::words::{
    count_factor, decode, encode, enumerate_a_placements, forbidden_factor_violations, project_v,
};

const LIMIT: usize = 10;
const PUBLISHED_X_STAR: f64 = 0.2883918927;
const PUBLISHED_G_STAR: f64 = 12.53296;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn perms_up_to(n: usize) -> impl Iterator<Item = Permutation> {
    (1..=n).flat_map(|m| all_permutations(m, LIMIT).unwrap())
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn criterion_1() -> Outcome {
    let expected = [1u64, 2, 5, 14, 42, 132, 429, 1430];
    for (i, &e) in expected.iter().enumerate() {
        let n = i + 1;
        let brute = brute_force_wt(n, 1, LIMIT).unwrap();
        ensure(brute == big(e), || format!("W_1({n}) brute = {brute}, expected {e}"))?;
        ensure(catalan(n as u64) == big(e), || format!("catalan({n}) != {e}"))?;
    }
    Ok("W_1(n) = C_n for n = 1..8".into())
}

fn criterion_2() -> Outcome {
    for n in 1..=8 {
        let brute = brute_force_wt(n, 2, LIMIT).unwrap();
        let formula = w2(n as u64);
        ensure(brute == formula, || format!("n={n}: brute {brute} vs formula {formula}"))?;
    }
    ensure(w2(4) == big(22), || format!("w2(4) = {}", w2(4)))?;
    Ok("W_2(n) brute = formula for n = 1..8, w2(4) = 22".into())
}

fn criterion_3() -> Outcome {
    for n in 1..=7usize {
        let hist: BTreeMap<usize, BigUint> = brute_force_histogram(n, LIMIT, |p| {
            is_t_stack_sortable(p, 2).then(|| p.descent_count())
        })
        .unwrap();
        for d in 0..n {
            let brute = hist.get(&d).cloned().unwrap_or_default();
            let formula = w2_by_descents(n as u64, d as u64);
            ensure(brute == formula, || format!("n={n} d={d}: brute {brute} vs {formula}"))?;
        }
    }
    for n in 1..=300u64 {
        let table = FactorialTable::new(2 * n);
        let sum: BigUint = (0..n).map(|d| table.w2_by_descents(n, d)).sum();
        ensure(sum == w2(n), || format!("descent sum differs from W_2({n})"))?;
    }
    Ok("descent refinement matches brute force (n <= 7) and sums to W_2(n) (n <= 300)".into())
}

fn criterion_4() -> Outcome {
    for n in 1..=9usize {
        let hist = brute_force_w3_by_image_descents(n, LIMIT).unwrap();
        let nn = n as u64;
        for d in 0..n {
            let count = hist.get(&d).cloned().unwrap_or_default();
            let cap = w2_by_descents(nn, d as u64) * binomial(2 * nn - 2 * (d as u64 + 1), nn as i64 - 1);
            ensure(count <= cap, || format!("n={n} d={d}: {count} > {cap}"))?;
        }
        let total = brute_force_wt(n, 3, LIMIT).unwrap();
        let bound = lemma_bound(nn);
        ensure(total <= bound, || format!("n={n}: W_3 = {total} > bound {bound}"))?;
    }
    Ok("per-summand and aggregate bounds hold for n = 1..9".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for p in perms_up_to(7) {
        let w = encode(&p, 3).unwrap();
        let v = forbidden_factor_violations(&w).unwrap();
        ensure(v.is_empty(), || format!("p={p} word={w}: {:?}", v[0]))?;
        checked += 1;
    }
    Ok(format!("no forbidden factor in {checked} words"))
}

fn criterion_6() -> Outcome {
    let mut roundtrips = 0;
    let mut projections = 0;
    for p in perms_up_to(7) {
        for t in 1..=3 {
            if is_t_stack_sortable(&p, t) {
                let w = encode(&p, t).unwrap();
                ensure(decode(&w) == p, || format!("decode(encode({p}, {t})) != p"))?;
                roundtrips += 1;
            }
        }
        if is_t_stack_sortable(&p, 3) {
            let v = project_v(&encode(&p, 3).unwrap()).unwrap();
            let expected = encode(&stack_sort(&p), 2).unwrap();
            ensure(v.letters() == expected.letters(), || {
                format!("p={p}: v = {v}, word of s(p) = {expected}")
            })?;
            projections += 1;
        }
    }
    Ok(format!("{roundtrips} roundtrips, {projections} projections"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for p in perms_up_to(7) {
        for t in 1..=4 {
            let out = run_series_machine(&p, t).unwrap().output;
            ensure(out == iterate_sort(&p, t), || format!("p={p} t={t}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, t) pairs agree"))
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    for p in perms_up_to(7).filter(|p| is_t_stack_sortable(p, 3)) {
        let n = p.len();
        let w = encode(&p, 3).unwrap();
        let v = project_v(&w).unwrap();
        let k = count_factor(&v, "BB") + 1;
        let words: Vec<_> = enumerate_a_placements(&v, n)
            .map_err(|e| format!("p={p}: {e}"))?
            .collect();
        let expected = binomial(2 * (n - k) as u64, n as i64 - 1);
        ensure(big(words.len() as u64) == expected, || {
            format!("p={p}: {} placements, expected {expected}", words.len())
        })?;
        ensure(words.contains(&w), || format!("p={p}: {w} not among placements of {v}"))?;
        checked += 1;
    }
    Ok(format!("{checked} sortable permutations injected"))
}

fn criterion_9() -> Outcome {
    let closed = closed_form_x_star();
    let r = maximize_g(1e-10).map_err(|e| e.to_string())?;
    ensure((r.x_star - closed).abs() < 1e-7, || format!("x_star {} vs {closed}", r.x_star))?;
    ensure((closed - PUBLISHED_X_STAR).abs() < 1e-8, || format!("closed form {closed}"))?;
    ensure((r.g_star - PUBLISHED_G_STAR).abs() < 5e-5, || format!("g_star {}", r.g_star))?;
    for i in 0..999 {
        let x = 0.0005 + 0.499 * i as f64 / 998.0;
        let a = g(x).unwrap();
        let b = g_unsimplified(x).unwrap();
        ensure(((a - b) / a).abs() < 1e-11, || format!("x={x}: {a} vs {b}"))?;
    }
    let half = g(0.5).unwrap();
    ensure((half - 6.75).abs() < 1e-9, || format!("g(1/2) = {half}"))?;
    Ok(format!("x_star = {:.10}, g_star = {:.7}", r.x_star, r.g_star))
}

fn criterion_10() -> Outcome {
    let g_star = maximize_g(1e-10).map_err(|e| e.to_string())?.g_star;
    let ns = [10u64, 50, 200, 1000, 2000];
    let roots: Vec<f64> = ns.iter().map(|&n| bound_nth_root(n)).collect();
    ensure(roots.windows(2).all(|w| w[0] < w[1]), || format!("not increasing: {roots:?}"))?;
    let r2000 = roots[4];
    ensure((11.5..=12.6).contains(&r2000), || format!("bound_nth_root(2000) = {r2000}"))?;

    let s = summand_nth_root(1000, closed_form_x_star()).map_err(|e| e.to_string())?;
    let rel = (s - g_star).abs() / g_star;
    ensure(rel < 0.02, || {
        format!("summand_nth_root(1000, x*) = {s:.5}, {:.2}% from g_star {g_star:.5} (limit 2%)", 100.0 * rel)
    })?;
    Ok(format!("bound_nth_root(2000) = {r2000:.5}, summand root at 1000 = {s:.5}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 Catalan oracle", criterion_1, Duration::from_secs(10)),
        ("2 W_2 formula oracle", criterion_2, Duration::from_secs(30)),
        ("3 descent refinement oracle", criterion_3, Duration::from_secs(30)),
        ("4 3-stack bound", criterion_4, Duration::from_secs(300)),
        ("5 forbidden factors", criterion_5, Duration::from_secs(120)),
        ("6 codec roundtrip and projection", criterion_6, Duration::from_secs(120)),
        ("7 series/iterate equivalence", criterion_7, Duration::from_secs(120)),
        ("8 A-placement injection", criterion_8, Duration::from_secs(120)),
        ("9 growth-rate maximum", criterion_9, Duration::from_secs(1)),
        ("10 exact-to-asymptotic bridge", criterion_10, Duration::from_secs(30)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed > budget {
                Err(format!("{msg}; took {elapsed:?}, budget {budget:?}"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("[PASS] criterion {name} ({elapsed:.2?}): {msg}"),
            Err(msg) => {
                failures += 1;
                println!("[FAIL] criterion {name} ({elapsed:.2?}): {msg}");
            }
        }
    }
    println!("{} criteria, {failures} failed", criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
