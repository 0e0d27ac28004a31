//! Exhaustive property suite over small permutations, formulas and the
//! growth-rate computation. Each family reports how many cases it checked
//! and the first counterexample it found.

use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::asymptotics::{
    bound_nth_root, closed_form_x_star, g, g_unsimplified, ln_g_slope, maximize_g, summand_nth_root,
    FD_STEP,
};
use crate::enumerate::{
    binomial, brute_force_histogram, catalan, lemma_bound, lemma_summand, trivial_bound, w2, w2_by_descents,
    FactorialTable,
};
use crate::machine::run_series_machine;
use crate::perm::{all_permutations, Permutation};
use crate::words::{
    count_factor, decode, encode, enumerate_a_placements, forbidden_factor_violations, project_v,
    validate_word,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

/// Size bounds for one run of the suite.
#[derive(Clone, Copy, Debug)]
pub struct Sizes {
    /// Exhaustive permutation properties.
    pub perm_n: usize,
    /// Formula-vs-brute-force checks for `t = 1, 2` and the trivial bound.
    pub formula_n: usize,
    /// Bound checks for `t = 3`.
    pub lemma_n: usize,
    /// Big-integer identities.
    pub identity_n: u64,
}

impl Level {
    pub fn sizes(self) -> Sizes {
        match self {
            Level::Quick => Sizes { perm_n: 6, formula_n: 6, lemma_n: 6, identity_n: 60 },
            Level::Full => Sizes { perm_n: 7, formula_n: 8, lemma_n: 9, identity_n: 300 },
        }
    }
}

/// The stack-sorting map the suite checks everything against. Swapping it
/// out is how the failure path is exercised.
pub type SortFn = fn(&Permutation) -> Permutation;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub level: Level,
    pub passed: bool,
    pub properties: Vec<PropertyOutcome>,
}

struct Suite {
    sort: SortFn,
    sizes: Sizes,
    out: Vec<PropertyOutcome>,
}

/// Accumulates checks for one property family.
#[derive(Default)]
struct Tally {
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

impl Suite {
    fn run(&mut self, name: &'static str, body: impl FnOnce(&Suite, &mut Tally)) {
        let start = Instant::now();
        let mut tally = Tally::default();
        body(self, &mut tally);
        self.out.push(PropertyOutcome {
            name,
            passed: tally.witness.is_none(),
            checked: tally.checked,
            witness: tally.witness,
            millis: start.elapsed().as_millis(),
        });
    }

    fn iterate(&self, p: &Permutation, t: usize) -> Permutation {
        let mut cur = p.clone();
        for _ in 0..t {
            cur = (self.sort)(&cur);
        }
        cur
    }

    fn sortable(&self, p: &Permutation, t: usize) -> bool {
        self.iterate(p, t).is_identity()
    }

    fn perms(&self, max_n: usize) -> impl Iterator<Item = Permutation> {
        (0..=max_n).flat_map(|n| all_permutations(n, n).expect("n within its own limit"))
    }

    fn count_sortable(&self, n: usize, t: usize) -> BigUint {
        let sort = self.sort;
        brute_force_histogram(n, n, move |p| {
            let mut cur = p.clone();
            for _ in 0..t {
                cur = sort(&cur);
            }
            cur.is_identity().then_some(0)
        })
        .expect("n within its own limit")
        .remove(&0)
        .unwrap_or_default()
    }
}

pub fn run_suite(level: Level) -> Report {
    run_suite_with(level, crate::machine::stack_sort)
}

pub fn run_suite_with(level: Level, sort: SortFn) -> Report {
    let mut suite = Suite { sort, sizes: level.sizes(), out: Vec::new() };
    let Sizes { perm_n, formula_n, lemma_n, identity_n } = suite.sizes;
    let pat231: Permutation = Permutation::rotated_identity(3);

    suite.run("series machine output equals s^t", |s, tally| {
        for p in s.perms(perm_n) {
            for t in 1..=4 {
                let out = run_series_machine(&p, t).expect("t in range").output;
                tally.check(out == s.iterate(&p, t), || format!("p={p} t={t}"));
            }
        }
    });

    suite.run("1-stack sortable iff 231-avoiding", |s, tally| {
        for p in s.perms(formula_n) {
            tally.check(s.sortable(&p, 1) != p.contains_pattern(&pat231), || format!("p={p}"));
        }
    });

    suite.run("sortability is monotone in t", |s, tally| {
        for p in s.perms(perm_n) {
            for t in 1..=4 {
                let ok = !s.sortable(&p, t) || s.sortable(&p, t + 1);
                tally.check(ok, || format!("p={p} t={t}"));
            }
        }
    });

    suite.run("every permutation is (n-1)-stack sortable", |s, tally| {
        for p in s.perms(perm_n).filter(|p| !p.is_empty()) {
            tally.check(s.sortable(&p, p.len() - 1), || format!("p={p}"));
        }
    });

    suite.run("t-stack sortable avoids 23..(t+2)1", |s, tally| {
        for p in s.perms(perm_n) {
            for t in 1..=3 {
                let pattern = Permutation::rotated_identity(t + 2);
                let ok = !s.sortable(&p, t) || !p.contains_pattern(&pattern);
                tally.check(ok, || format!("p={p} t={t}"));
            }
        }
    });

    suite.run("descents of p and its reverse sum to n-1", |s, tally| {
        for p in s.perms(perm_n).filter(|p| !p.is_empty()) {
            let sum = p.descent_count() + p.reverse().descent_count();
            tally.check(sum == p.len() - 1, || format!("p={p}"));
        }
    });

    suite.run("W_1(n) equals the Catalan number", |s, tally| {
        for n in 1..=formula_n {
            let brute = s.count_sortable(n, 1);
            let formula = catalan(n as u64);
            tally.check(brute == formula, || format!("n={n} brute={brute} formula={formula}"));
        }
    });

    suite.run("W_2(n) matches its closed formula", |s, tally| {
        for n in 1..=formula_n {
            let brute = s.count_sortable(n, 2);
            let formula = w2(n as u64);
            tally.check(brute == formula, || format!("n={n} brute={brute} formula={formula}"));
        }
    });

    suite.run("2-stack sortable counts by descents", |s, tally| {
        let sort = s.sort;
        for n in 1..=perm_n {
            let hist = brute_force_histogram(n, n, |p| {
                let image = sort(&sort(p));
                image.is_identity().then(|| p.descent_count())
            })
            .expect("n within its own limit");
            for d in 0..n {
                let brute = hist.get(&d).cloned().unwrap_or_default();
                let formula = w2_by_descents(n as u64, d as u64);
                tally.check(brute == formula, || {
                    format!("n={n} d={d} brute={brute} formula={formula}")
                });
            }
        }
    });

    suite.run("descent refinement sums to W_2(n) and is symmetric", |_, tally| {
        for n in 1..=identity_n {
            let table = FactorialTable::new(2 * n);
            let terms: Vec<BigUint> = (0..n).map(|d| table.w2_by_descents(n, d)).collect();
            let sum: BigUint = terms.iter().sum();
            tally.check(sum == w2(n), || format!("n={n} sum={sum}"));
            for d in 0..n as usize {
                let mirrored = &terms[n as usize - 1 - d];
                tally.check(&terms[d] == mirrored, || format!("n={n} d={d}"));
            }
        }
    });

    suite.run("trivial bound (t+1)^(2n)", |s, tally| {
        for n in 1..=formula_n {
            for t in 1..=3 {
                let brute = s.count_sortable(n, t);
                let bound = trivial_bound(n as u64, t as u64);
                tally.check(brute <= bound, || format!("n={n} t={t} brute={brute}"));
            }
        }
    });

    suite.run("3-stack bound per descent class and in total", |s, tally| {
        let sort = s.sort;
        for n in 1..=lemma_n {
            let hist = brute_force_histogram(n, n, |p| {
                let image = sort(p);
                let sortable = sort(&sort(&image)).is_identity();
                sortable.then(|| image.descent_count())
            })
            .expect("n within its own limit");
            let nn = n as u64;
            let mut total = BigUint::default();
            for (&d, count) in &hist {
                let cap = lemma_summand(nn, d as u64 + 1);
                tally.check(count <= &cap, || format!("n={n} d={d} count={count} cap={cap}"));
                total += count;
            }
            let bound = lemma_bound(nn);
            tally.check(total <= bound, || format!("n={n} W_3={total} bound={bound}"));
        }
    });

    suite.run("1-stack ballot words are counted by Catalan numbers", |_, tally| {
        for n in 1..=formula_n {
            let valid = (0u32..1 << (2 * n))
                .filter(|bits| {
                    let text: String = (0..2 * n)
                        .map(|i| if bits >> i & 1 == 0 { 'A' } else { 'B' })
                        .collect();
                    validate_word(&text, 1).is_ok()
                })
                .count();
            let expected = catalan(n as u64);
            tally.check(BigUint::from(valid) == expected, || format!("n={n} words={valid}"));
        }
    });

    suite.run("decode inverts encode on t-stack sortable permutations", |s, tally| {
        for p in s.perms(perm_n) {
            for t in 1..=3 {
                if s.sortable(&p, t) {
                    let w = encode(&p, t).expect("t in range");
                    tally.check(decode(&w) == p, || format!("p={p} t={t} word={w}"));
                }
            }
        }
    });

    suite.run("3-stack words have no forbidden factors", |s, tally| {
        for p in s.perms(perm_n) {
            let w = encode(&p, 3).expect("t in range");
            let v = forbidden_factor_violations(&w).expect("t = 3");
            tally.check(v.is_empty(), || {
                format!("p={p} word={w} first={}@{}", v[0].rule.name(), v[0].index)
            });
        }
    });

    suite.run("AA factors count descents", |s, tally| {
        for p in s.perms(perm_n) {
            for t in 1..=3 {
                let w = encode(&p, t).expect("t in range");
                tally.check(count_factor(&w, "AA") == p.descent_count(), || {
                    format!("p={p} t={t} word={w}")
                });
            }
        }
    });

    suite.run("v(w) is the 2-stack word of s(p)", |s, tally| {
        for p in s.perms(perm_n).filter(|p| s.sortable(p, 3)) {
            let v = project_v(&encode(&p, 3).expect("t = 3")).expect("t = 3");
            let image = (s.sort)(&p);
            let expected = encode(&image, 2).expect("t = 2");
            tally.check(v.letters() == expected.letters(), || {
                format!("p={p} v={v} word(s(p))={expected}")
            });
            tally.check(count_factor(&v, "BB") == image.descent_count(), || {
                format!("p={p} v={v}")
            });
        }
    });

    suite.run("stack words lie among the A-placements of v", |s, tally| {
        for p in s.perms(perm_n).filter(|p| !p.is_empty() && s.sortable(p, 3)) {
            let n = p.len();
            let w = encode(&p, 3).expect("t = 3");
            let v = project_v(&w).expect("t = 3");
            let k = count_factor(&v, "BB") + 1;
            let words: Vec<_> = match enumerate_a_placements(&v, n) {
                Ok(it) => it.collect(),
                Err(e) => {
                    tally.check(false, || format!("p={p} v={v}: {e}"));
                    continue;
                }
            };
            let expected = binomial(2 * (n - k) as u64, n as i64 - 1);
            tally.check(BigUint::from(words.len()) == expected, || {
                format!("p={p} v={v} placements={}", words.len())
            });
            tally.check(words.contains(&w), || format!("p={p} word={w}"));
        }
    });

    suite.run("growth-rate maximum", |_, tally| {
        let closed = closed_form_x_star();
        match maximize_g(1e-10) {
            Ok(r) => {
                tally.check((r.x_star - closed).abs() < 1e-7, || format!("x_star={}", r.x_star));
                tally.check((r.g_star - 12.53296).abs() < 5e-5, || format!("g_star={}", r.g_star));
            }
            Err(e) => tally.check(false, || e.to_string()),
        }
        let slope = ln_g_slope(closed, FD_STEP).unwrap_or(f64::NAN);
        tally.check(slope.abs() < 1e-5, || format!("slope={slope}"));
        for i in 1..=999 {
            let x = 0.0005 + 0.499 * (i - 1) as f64 / 998.0;
            let a = g(x).unwrap_or(f64::NAN);
            let b = g_unsimplified(x).unwrap_or(f64::NAN);
            tally.check(((a - b) / a).abs() < 1e-11, || format!("x={x} g={a} unsimplified={b}"));
        }
        let half = g(0.5).unwrap_or(f64::NAN);
        tally.check((half - 6.75).abs() < 1e-9, || format!("g(1/2)={half}"));
    });

    suite.run("exact bound approaches the growth rate", |_, tally| {
        let g_star = g(closed_form_x_star()).unwrap_or(f64::NAN);
        let ns: &[u64] = if level == Level::Full { &[10, 50, 200, 1000] } else { &[10, 50, 200] };
        let roots: Vec<f64> = ns.iter().map(|&n| bound_nth_root(n)).collect();
        for (i, (&n, &r)) in ns.iter().zip(&roots).enumerate() {
            let envelope = g_star * (n as f64).powf(2.0 / n as f64);
            tally.check(r < envelope, || format!("n={n} root={r} envelope={envelope}"));
            if i > 0 {
                tally.check(roots[i - 1] < r, || format!("root decreased at n={n}"));
            }
        }
        // The k = xn summand is ~ n^{-7/2} g(x)^n.
        let n = if level == Level::Full { 1000 } else { 300 };
        for x in [0.1, 0.2, 0.2884, 0.4] {
            let s = summand_nth_root(n, x).unwrap_or(f64::NAN);
            let corrected = s * (n as f64).powf(3.5 / n as f64);
            let gx = g(x).unwrap_or(f64::NAN);
            tally.check((corrected - gx).abs() / gx < 0.01, || {
                format!("n={n} x={x} corrected root={corrected} g={gx}")
            });
        }
    });

    let passed = suite.out.iter().all(|o| o.passed);
    Report { level, passed, properties: suite.out }
}
