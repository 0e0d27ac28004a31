//! Exact big-integer formulas for stack-sortable counts, the upper bound for
//! 3-stack sortable permutations, and the brute-force counters that check
//! them.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::machine::{is_t_stack_sortable, stack_sort};
use crate::perm::{factorial_u128, Permutation, Permutations};

/// `C(a, b)`, zero outside `0 <= b <= a`.
pub fn binomial(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        // C(a, i) * (a - i) = C(a, i + 1) * (i + 1)
        acc /= i + 1;
    }
    acc
}

pub fn factorial(m: u64) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, i| acc * i)
}

fn exact_div(num: BigUint, den: &BigUint, what: &str) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division in {what}");
    q
}

/// `C(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    exact_div(binomial(2 * n, n as i64), &BigUint::from(n + 1), "catalan")
}

/// Number of 2-stack sortable permutations of length `n`: `2 C(3n, n) / ((n+1)(2n+1))`.
pub fn w2(n: u64) -> BigUint {
    let num = binomial(3 * n, n as i64) * 2u32;
    exact_div(num, &BigUint::from((n + 1) * (2 * n + 1)), "w2")
}

/// 2-stack sortable permutations of length `n` with `d` descents.
///
/// With `k = d + 1`, this is
/// `(n+k-1)! (2n-k)! / (k! (n+1-k)! (2k-1)! (2n-2k+1)!)` for `1 <= k <= n`.
pub fn w2_by_descents(n: u64, d: u64) -> BigUint {
    if d >= n {
        return BigUint::zero();
    }
    FactorialTable::new(2 * n).w2_by_descents(n, d)
}

/// The `k`-th summand of the bound: `W_2(n, k-1) * C(2n - 2k, n - 1)`.
pub fn lemma_summand(n: u64, k: u64) -> BigUint {
    FactorialTable::new(2 * n).lemma_summand(n, k)
}

/// Upper bound on the number of 3-stack sortable permutations of length `n`:
/// the sum of [`lemma_summand`] over `1 <= k <= (n + 1) / 2`.
pub fn lemma_bound(n: u64) -> BigUint {
    let table = FactorialTable::new(2 * n);
    (1..=n.div_ceil(2)).map(|k| table.lemma_summand(n, k)).sum()
}

/// `0!, 1!, ..., max!`, for evaluating many factorial ratios at once.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    facts: Vec<BigUint>,
}

impl FactorialTable {
    pub fn new(max: u64) -> Self {
        let mut facts = Vec::with_capacity(max as usize + 1);
        facts.push(BigUint::one());
        for i in 1..=max {
            let next = &facts[i as usize - 1] * i;
            facts.push(next);
        }
        Self { facts }
    }

    pub fn get(&self, m: u64) -> &BigUint {
        &self.facts[m as usize]
    }

    pub fn binomial(&self, a: u64, b: i64) -> BigUint {
        if b < 0 || b as u64 > a {
            return BigUint::zero();
        }
        let b = b as u64;
        exact_div(self.get(a).clone(), &(self.get(b) * self.get(a - b)), "binomial")
    }

    pub fn w2_by_descents(&self, n: u64, d: u64) -> BigUint {
        let k = d + 1;
        if k > n {
            return BigUint::zero();
        }
        let num = self.get(n + k - 1) * self.get(2 * n - k);
        let den = self.get(k) * self.get(n + 1 - k) * self.get(2 * k - 1) * self.get(2 * n - 2 * k + 1);
        exact_div(num, &den, "w2_by_descents")
    }

    pub fn lemma_summand(&self, n: u64, k: u64) -> BigUint {
        if k == 0 || k > n {
            return BigUint::zero();
        }
        self.w2_by_descents(n, k - 1) * self.binomial(2 * n - 2 * k, n as i64 - 1)
    }
}

/// `(t + 1)^(2n)`.
pub fn trivial_bound(n: u64, t: u64) -> BigUint {
    num_traits::pow(BigUint::from(t + 1), 2 * n as usize)
}

// Contiguous lexicographic rank chunks; chunk sums are added in rank order.
const CHUNK: u128 = 5040;

fn chunks(n: usize) -> Vec<(u128, u128)> {
    let total = factorial_u128(n);
    (0..total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect()
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    Ok(())
}

/// Counts permutations of length `n` satisfying `pred`, in parallel over
/// lexicographic chunks.
pub fn brute_force_count<F>(n: usize, limit: usize, pred: F) -> Result<BigUint>
where
    F: Fn(&Permutation) -> bool + Sync,
{
    check_limit(n, limit)?;
    let total: u64 = chunks(n)
        .into_par_iter()
        .map(|(lo, hi)| Permutations::range(n, lo, hi).filter(|p| pred(p)).count() as u64)
        .sum();
    Ok(BigUint::from(total))
}

/// Histogram of `key(p)` over permutations with `key(p) = Some(_)`.
pub fn brute_force_histogram<F>(n: usize, limit: usize, key: F) -> Result<BTreeMap<usize, BigUint>>
where
    F: Fn(&Permutation) -> Option<usize> + Sync,
{
    check_limit(n, limit)?;
    let partial: Vec<BTreeMap<usize, u64>> = chunks(n)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut m = BTreeMap::new();
            for p in Permutations::range(n, lo, hi) {
                if let Some(d) = key(&p) {
                    *m.entry(d).or_insert(0) += 1;
                }
            }
            m
        })
        .collect();
    let mut out = BTreeMap::new();
    for m in partial {
        for (d, c) in m {
            *out.entry(d).or_insert_with(BigUint::zero) += c;
        }
    }
    Ok(out)
}

/// `W_t(n)` by exhaustive enumeration.
pub fn brute_force_wt(n: usize, t: usize, limit: usize) -> Result<BigUint> {
    brute_force_count(n, limit, |p| is_t_stack_sortable(p, t))
}

/// 2-stack sortable permutations of length `n`, keyed by their descent count.
pub fn brute_force_w2_by_descents(n: usize, limit: usize) -> Result<BTreeMap<usize, BigUint>> {
    brute_force_histogram(n, limit, |p| {
        is_t_stack_sortable(p, 2).then(|| p.descent_count())
    })
}

/// 3-stack sortable permutations of length `n`, keyed by the descent count
/// of their stack-sorted image.
pub fn brute_force_w3_by_image_descents(n: usize, limit: usize) -> Result<BTreeMap<usize, BigUint>> {
    brute_force_histogram(n, limit, |p| {
        is_t_stack_sortable(p, 3).then(|| stack_sort(p).descent_count())
    })
}

/// Plain-text CSV cache of computed counts keyed by `(n, t)`.
#[derive(Debug, Default, Clone)]
pub struct CountCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(u64, u64), BigUint>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CacheRow {
    n: u64,
    t: u64,
    count: String,
}

impl CountCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists; a missing file gives an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        if path.exists() {
            let mut reader = csv::Reader::from_path(&path).map_err(|e| Error::Cache(e.to_string()))?;
            for row in reader.deserialize() {
                let row: CacheRow = row.map_err(|e| Error::Cache(e.to_string()))?;
                let count = row
                    .count
                    .parse::<BigUint>()
                    .map_err(|e| Error::Cache(format!("bad count {:?}: {e}", row.count)))?;
                entries.insert((row.n, row.t), count);
            }
        }
        Ok(Self { path: Some(path), entries })
    }

    pub fn get(&self, n: u64, t: u64) -> Option<&BigUint> {
        self.entries.get(&(n, t))
    }

    pub fn insert(&mut self, n: u64, t: u64, count: BigUint) {
        self.entries.insert((n, t), count);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes all rows, sorted by `(n, t)`, with header `n,t,count`.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let file = File::create(path).map_err(|e| Error::Cache(e.to_string()))?;
        let mut writer = csv::Writer::from_writer(file);
        for (&(n, t), count) in &self.entries {
            writer
                .serialize(CacheRow { n, t, count: count.to_string() })
                .map_err(|e| Error::Cache(e.to_string()))?;
        }
        writer.flush().map_err(|e| Error::Cache(e.to_string()))
    }

    /// Cached `W_t(n)`, computing and recording it on a miss.
    pub fn brute_force_wt(&mut self, n: usize, t: usize, limit: usize) -> Result<BigUint> {
        if let Some(c) = self.get(n as u64, t as u64) {
            return Ok(c.clone());
        }
        let c = brute_force_wt(n, t, limit)?;
        self.insert(n as u64, t as u64, c.clone());
        Ok(c)
    }
}
