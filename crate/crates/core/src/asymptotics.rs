//! Growth rate of the summands of the 3-stack bound.
//!
//! With `k = x n`, the n-th root of the k-th summand tends to
//!
//! ```text
//! g(x) = (1+x) (2-x)^(2-x) x^(-3x) (1-x)^(x-1) (1-2x)^(2x-1) ((x+1)/4)^x
//! ```
//!
//! on `[0, 1/2]`. Everything here is evaluated in log space.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::enumerate::{lemma_bound, FactorialTable};
use crate::error::{Error, Result};

/// Grid size used for the unimodality scan and the maximum sanity check.
pub const GRID_POINTS: usize = 10_000;

/// Search interval for the maximizer.
pub const SEARCH_LO: f64 = 1e-9;
pub const SEARCH_HI: f64 = 0.5 - 1e-9;

/// Step of the central difference used for stationarity.
pub const FD_STEP: f64 = 1e-6;

/// `m ln m`, continuously extended by 0 at `m = 0`.
fn xlnx(m: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m * m.ln()
    }
}

/// `ln g(x)` on `[0, 1/2]`.
pub fn ln_g(x: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    // (2x - 1) ln(1 - 2x) = -(1 - 2x) ln(1 - 2x)
    Ok((1.0 + x).ln() + xlnx(2.0 - x) - 3.0 * xlnx(x) - xlnx(1.0 - x) - xlnx(1.0 - 2.0 * x)
        + x * ((x + 1.0) / 4.0).ln())
}

pub fn g(x: f64) -> Result<f64> {
    ln_g(x).map(f64::exp)
}

/// The same growth rate written as a ratio of powers before cancelling the
/// common `(2-2x)^(2-2x)` factor. Defined on the open interval only.
pub fn g_unsimplified(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::OutOfDomain(x));
    }
    let numerator = xlnx(1.0 + x) + xlnx(2.0 - x) + xlnx(2.0 - 2.0 * x);
    let denominator = xlnx(x)
        + xlnx(1.0 - x)
        + xlnx(2.0 * x)
        + xlnx(2.0 - 2.0 * x)
        + xlnx(1.0 - 2.0 * x);
    Ok((numerator - denominator).exp())
}

/// Root of `g'(x) = 0` in closed form.
pub fn closed_form_x_star() -> f64 {
    let c = (27.0 + 12.0 * 417f64.sqrt()).cbrt();
    c / 12.0 - 13.0 / (4.0 * c) + 0.25
}

/// Central difference of `ln g` at `x`.
pub fn ln_g_slope(x: f64, h: f64) -> Result<f64> {
    Ok((ln_g(x + h)? - ln_g(x - h)?) / (2.0 * h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GoldenSection,
    DerivativeBisection,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticsResult {
    pub x_star: f64,
    pub g_star: f64,
    pub method: Method,
    pub iterations: usize,
    pub tolerance: f64,
}

/// Locations of strict interior local maxima of `g` on a uniform grid of
/// `points` interior nodes of `(0, 1/2)`.
pub fn grid_local_maxima(points: usize) -> Vec<f64> {
    let xs: Vec<f64> = (1..=points).map(|i| 0.5 * i as f64 / (points + 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| ln_g(x).expect("grid inside domain")).collect();
    (1..points - 1)
        .filter(|&i| vals[i] > vals[i - 1] && vals[i] > vals[i + 1])
        .map(|i| xs[i])
        .collect()
}

/// Maximum of `g` over the uniform grid, lowest index on ties.
pub fn grid_max(points: usize) -> (f64, f64) {
    (1..=points)
        .map(|i| {
            let x = 0.5 * i as f64 / (points + 1) as f64;
            (x, g(x).expect("grid inside domain"))
        })
        .fold((f64::NAN, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Locates the maximizer of `g` on `(0, 1/2)` to within `tolerance`.
pub fn maximize_g(tolerance: f64) -> Result<AsymptoticsResult> {
    maximize_g_with(tolerance, Method::GoldenSection)
}

pub fn maximize_g_with(tolerance: f64, method: Method) -> Result<AsymptoticsResult> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::BadTolerance(tolerance));
    }
    let maxima = grid_local_maxima(GRID_POINTS);
    if maxima.len() > 1 {
        return Err(Error::NotUnimodal(maxima));
    }
    let (x_star, iterations) = match method {
        Method::GoldenSection => golden_section(SEARCH_LO, SEARCH_HI, tolerance),
        Method::DerivativeBisection => slope_bisection(SEARCH_LO + FD_STEP, SEARCH_HI - FD_STEP, tolerance)?,
    };
    Ok(AsymptoticsResult {
        x_star,
        g_star: g(x_star)?,
        method,
        iterations,
        tolerance,
    })
}

fn golden_section(mut a: f64, mut b: f64, tolerance: f64) -> (f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |x: f64| ln_g(x).expect("bracket inside domain");
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while b - a > tolerance {
        iterations += 1;
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (0.5 * (a + b), iterations)
}

fn slope_bisection(mut a: f64, mut b: f64, tolerance: f64) -> Result<(f64, usize)> {
    let mut iterations = 0;
    // ln g increases then decreases, so the slope changes sign once.
    while b - a > tolerance {
        iterations += 1;
        let mid = 0.5 * (a + b);
        if ln_g_slope(mid, FD_STEP)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b), iterations))
}

/// Natural log of a positive big integer from its bit length and top 64 bits.
pub fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("top 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// n-th root of the exact summand at `k = round(x n)`.
pub fn summand_nth_root(n: u64, x: f64) -> Result<f64> {
    let k = (x * n as f64).round() as i64;
    let max = n.div_ceil(2) as usize;
    if k < 1 || k as usize > max || n == 0 {
        return Err(Error::SummandIndex { k, n: n as usize, max });
    }
    let summand = FactorialTable::new(2 * n).lemma_summand(n, k as u64);
    Ok((ln_big(&summand) / n as f64).exp())
}

/// n-th root of the exact bound on the number of 3-stack sortable
/// permutations of length `n`.
pub fn bound_nth_root(n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (ln_big(&lemma_bound(n)) / n as f64).exp()
}

/// `(n, bound_nth_root(n))` rows.
pub fn convergence_table(ns: &[u64]) -> Vec<(u64, f64)> {
    ns.iter().map(|&n| (n, bound_nth_root(n))).collect()
}
