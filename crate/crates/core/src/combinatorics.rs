//! Exact counting over GF(q): Gaussian binomials, the Delsarte rank
//! distribution of MRD codes, and rank-restricted matrix counts.
//!
//! Everything here is integer arithmetic on `BigUint`/`BigInt`; no value
//! passes through floating point.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

fn invalid(msg: impl Into<String>) -> CountError {
    CountError::InvalidParameter(msg.into())
}

/// `q^e` as a big integer.
pub fn big_pow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// The Gaussian binomial coefficient `[n choose k]_q`, the number of
/// `k`-dimensional subspaces of `F_q^n`. Zero when `k < 0` or `k > n`.
pub fn gaussian_binomial(n: i64, k: i64, q: u64) -> Result<BigUint, CountError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if n < 0 {
        return Err(invalid(format!("n = {n} must be nonnegative")));
    }
    if k < 0 || k > n {
        return Ok(BigUint::zero());
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let one = BigUint::one();
    let mut acc = BigUint::one();
    // [n, j+1] = [n, j] (q^(n-j) - 1) / (q^(j+1) - 1), each step an integer
    for j in 0..k {
        let num = &acc * (big_pow(q, n - j) - &one);
        let den = big_pow(q, j + 1) - &one;
        let (quot, rem) = num.div_rem(&den);
        if !rem.is_zero() {
            return Err(CountError::Internal(format!(
                "inexact division computing [{n} choose {}]_{q}",
                j + 1
            )));
        }
        acc = quot;
    }
    Ok(acc)
}

/// Number of `rows x cols` matrices over GF(q) of rank exactly `r`.
pub fn count_rank_matrices(q: u64, rows: u64, cols: u64, r: u64) -> Result<BigUint, CountError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if r > rows.min(cols) {
        return Err(invalid(format!("rank {r} exceeds min({rows}, {cols})")));
    }
    let mut acc = gaussian_binomial(cols as i64, r as i64, q)?;
    let q_rows = big_pow(q, rows);
    for i in 0..r {
        acc *= &q_rows - big_pow(q, i);
    }
    Ok(acc)
}

/// Rank distribution of an MRD code of `m x nmin` matrices (`m >= nmin`)
/// with minimum rank distance `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDistribution {
    pub q: u64,
    pub m: u64,
    pub nmin: u64,
    pub d: u64,
    counts: BTreeMap<u64, BigUint>,
}

impl RankDistribution {
    /// `A_r`; zero for ranks outside `{0} ∪ [d, nmin]`.
    pub fn get(&self, r: u64) -> BigUint {
        self.counts.get(&r).cloned().unwrap_or_default()
    }

    pub fn counts(&self) -> &BTreeMap<u64, BigUint> {
        &self.counts
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `sum_{r = lo}^{hi} A_r`; zero for an empty range.
    pub fn range_sum(&self, lo: u64, hi: u64) -> BigUint {
        if lo > hi {
            return BigUint::zero();
        }
        self.counts.range(lo..=hi).map(|(_, v)| v).sum()
    }

    /// Cardinality of the full MRD code, `q^(m (nmin - d + 1))`.
    pub fn cardinality(&self) -> BigUint {
        big_pow(self.q, self.m * (self.nmin - self.d + 1))
    }
}

/// Delsarte's closed form for the number of rank-`r` codewords in an MRD
/// code of `m x nmin` matrices with minimum rank distance `d`:
///
/// `A_r = [nmin, r]_q * sum_{i=0}^{r-d} (-1)^i q^(i(i-1)/2) [r, i]_q (q^(m(r-i-d+1)) - 1)`.
pub fn delsarte_rank_distribution(q: u64, m: u64, nmin: u64, d: u64) -> Result<RankDistribution, CountError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if !(m >= nmin && nmin >= d && d >= 1) {
        return Err(invalid(format!(
            "need m >= nmin >= d >= 1, got m = {m}, nmin = {nmin}, d = {d}"
        )));
    }
    let mut counts = BTreeMap::new();
    counts.insert(0, BigUint::one());
    for r in d..=nmin {
        let mut sum = BigInt::zero();
        for i in 0..=(r - d) {
            // the power quotient collapses to q^(m(r-i-d+1)) since r - i >= d
            let inner = BigInt::from(big_pow(q, m * (r - i - d + 1))) - 1;
            let term = BigInt::from(big_pow(q, i * i.saturating_sub(1) / 2))
                * BigInt::from(gaussian_binomial(r as i64, i as i64, q)?)
                * inner;
            if i % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let a_r = BigInt::from(gaussian_binomial(nmin as i64, r as i64, q)?) * sum;
        if a_r.is_negative() {
            return Err(CountError::Internal(format!(
                "negative count A_{r} for (q, m, nmin, d) = ({q}, {m}, {nmin}, {d})"
            )));
        }
        let (_, mag) = a_r.into_parts();
        counts.insert(r, mag);
    }
    let dist = RankDistribution {
        q,
        m,
        nmin,
        d,
        counts,
    };
    if dist.total() != dist.cardinality() {
        return Err(CountError::Internal(format!(
            "rank distribution for (q, m, nmin, d) = ({q}, {m}, {nmin}, {d}) does not sum to the code size"
        )));
    }
    Ok(dist)
}

/// `sum_{r = r_lo}^{r_hi} A_r` for the MRD code with parameters `(q, m, nmin, d)`.
pub fn truncated_rank_sum(q: u64, m: u64, nmin: u64, d: u64, r_lo: u64, r_hi: u64) -> Result<BigUint, CountError> {
    let dist = delsarte_rank_distribution(q, m, nmin, d)?;
    if r_lo > r_hi {
        return Ok(BigUint::zero());
    }
    if r_lo < d || r_hi > nmin {
        return Err(invalid(format!(
            "rank range [{r_lo}, {r_hi}] outside [{d}, {nmin}]"
        )));
    }
    Ok(dist.range_sum(r_lo, r_hi))
}
