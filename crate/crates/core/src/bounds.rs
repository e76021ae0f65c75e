//! Exact lower and upper bounds on `A_q(N, d, k)`, the largest size of a
//! constant-dimension code of `k`-subspaces of `F_q^N` with minimum
//! subspace distance `d`.
//!
//! Lower bounds come from the lifted MRD code and the parallel
//! construction; upper bounds are the Johnson-type bound and its iterated
//! form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::combinatorics::{big_pow, gaussian_binomial, truncated_rank_sum, CountError};

/// Reference rows shipped with the crate: `q,N,d,k,new,old`.
pub const REFERENCE_DATA: &str = include_str!("../data/reference_bounds.csv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("reference data line {line}: {msg}")]
    Data { line: usize, msg: String },
}

fn invalid(msg: impl Into<String>) -> BoundError {
    BoundError::InvalidParameter(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    LiftedMrd,
    /// Two parallel lifted MRD codes.
    #[serde(rename = "thm2")]
    TwoBlock,
    /// `s + 2` parallel blocks.
    #[serde(rename = "thm3")]
    Parallel,
    #[serde(rename = "johnson1")]
    Johnson,
    #[serde(rename = "johnson2")]
    IteratedJohnson,
}

impl Formula {
    pub fn is_lower_bound(self) -> bool {
        matches!(self, Formula::LiftedMrd | Formula::TwoBlock | Formula::Parallel)
    }

    pub fn label(self) -> &'static str {
        match self {
            Formula::LiftedMrd => "lifted-mrd",
            Formula::TwoBlock => "thm2",
            Formula::Parallel => "thm3",
            Formula::Johnson => "johnson1",
            Formula::IteratedJohnson => "johnson2",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Parameters of `A_q(N, d, k)`, plus the construction shape when the bound
/// comes from a parallel construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CdcParams {
    pub q: u64,
    #[serde(rename = "N")]
    pub ambient: u64,
    pub d: u64,
    pub k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reference {
    pub label: String,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub params: CdcParams,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    pub formula: Formula,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

impl BoundResult {
    /// Whether this bound is strictly larger than the attached reference.
    pub fn exceeds_reference(&self) -> Option<bool> {
        self.reference.as_ref().map(|r| self.value > r.value)
    }
}

/// `q^(n (k - d_rank + 1))`, the size of a lifted MRD code of `k x n`
/// matrices with rank distance `d_rank`.
pub fn lifted_mrd_size(q: u64, n: u64, k: u64, d_rank: u64) -> Result<BigUint, BoundError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if !(n >= k && k >= d_rank && d_rank >= 1) {
        return Err(invalid(format!(
            "need n >= k >= d_rank >= 1, got n = {n}, k = {k}, d_rank = {d_rank}"
        )));
    }
    Ok(big_pow(q, n * (k - d_rank + 1)))
}

fn check_construction(q: u64, n: u64, k: u64, d: u64) -> Result<(), BoundError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if d == 0 || d % 2 != 0 {
        return Err(invalid(format!("d = {d} must be even and positive")));
    }
    if !(n >= k && k >= d) {
        return Err(invalid(format!("need n >= k >= d, got n = {n}, k = {k}, d = {d}")));
    }
    Ok(())
}

/// Number of nonzero `k x n` codewords of rank at most `k - d/2` in an MRD
/// code with rank distance `d/2`.
fn restricted_count(q: u64, n: u64, k: u64, d: u64) -> Result<BigUint, BoundError> {
    let delta = d / 2;
    Ok(truncated_rank_sum(q, n, k, delta, delta, k - delta)?)
}

/// Lower bound on `A_q(n + k, d, k)` from a lifted MRD code `[I_k | A]`
/// joined with right lifts `[B | I_k]` of its low-rank codewords:
/// `q^(n (k - d/2 + 1)) + sum_{r=d/2}^{k-d/2} A_r`.
pub fn two_block_bound(q: u64, n: u64, k: u64, d: u64) -> Result<BoundResult, BoundError> {
    check_construction(q, n, k, d)?;
    let value = lifted_mrd_size(q, n, k, d / 2)? + restricted_count(q, n, k, d)?;
    Ok(BoundResult {
        params: CdcParams {
            q,
            ambient: n + k,
            d,
            k,
            n: Some(n),
            s: Some(0),
        },
        value,
        formula: Formula::TwoBlock,
        reference: None,
    })
}

/// Lower bound on `A_q((s+1)k + n, d, k)` from `s + 2` parallel blocks:
///
/// `sum_{j=0}^{s} q^(((s-j)k + n)(k - d/2 + 1)) S_k^j + S_n S_k^s`
///
/// where `S_k`, `S_n` count the nonzero codewords of rank at most `k - d/2`
/// in the square and `k x n` MRD codes. Block `j + 1` contributes the `j`-th
/// summand; the last block contributes `S_n S_k^s`.
pub fn parallel_bound(q: u64, n: u64, k: u64, d: u64, s: u64) -> Result<BoundResult, BoundError> {
    check_construction(q, n, k, d)?;
    let delta = d / 2;
    let s_k = restricted_count(q, k, k, d)?;
    let s_n = restricted_count(q, n, k, d)?;
    let mut value = BigUint::zero();
    let mut s_k_pow = BigUint::one();
    for j in 0..=s {
        value += big_pow(q, ((s - j) * k + n) * (k - delta + 1)) * &s_k_pow;
        if j < s {
            s_k_pow *= &s_k;
        }
    }
    value += s_n * s_k_pow;
    Ok(BoundResult {
        params: CdcParams {
            q,
            ambient: (s + 1) * k + n,
            d,
            k,
            n: Some(n),
            s: Some(s),
        },
        value,
        formula: Formula::Parallel,
        reference: None,
    })
}

/// Johnson-type upper bound on `A_q(n, 2 delta, k)`:
/// `floor([n, k - delta + 1]_q / [k, k - delta + 1]_q)`.
pub fn johnson_upper(q: u64, n: u64, k: u64, delta: u64) -> Result<BoundResult, BoundError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if !(n >= k && k >= delta && delta >= 1) {
        return Err(invalid(format!(
            "need n >= k >= delta >= 1, got n = {n}, k = {k}, delta = {delta}"
        )));
    }
    let t = (k - delta + 1) as i64;
    let value = gaussian_binomial(n as i64, t, q)? / gaussian_binomial(k as i64, t, q)?;
    Ok(BoundResult {
        params: CdcParams {
            q,
            ambient: n,
            d: 2 * delta,
            k,
            n: None,
            s: None,
        },
        value,
        formula: Formula::Johnson,
        reference: None,
    })
}

/// Iterated Johnson upper bound on `A_q(n, d, k)`:
///
/// `floor((q^n-1)/(q^k-1) floor((q^(n-1)-1)/(q^(k-1)-1) ... floor((q^(n'+1)-1)/(q^(d/2+1)-1) B)))`
///
/// with `n' = n - k + d/2` and `B` an upper bound on the partial-spread
/// number `A_q(n', d, d/2)`. Without `base`, `B = floor((q^n' - 1)/(q^(d/2) - 1))`.
pub fn iterated_johnson_upper(q: u64, n: u64, d: u64, k: u64, base: Option<BigUint>) -> Result<BoundResult, BoundError> {
    if q < 2 {
        return Err(invalid(format!("q = {q} must be at least 2")));
    }
    if d == 0 || d % 2 != 0 {
        return Err(invalid(format!("d = {d} must be even and positive")));
    }
    let half = d / 2;
    if !(n >= k && k >= half) {
        return Err(invalid(format!("need n >= k >= d/2, got n = {n}, k = {k}, d = {d}")));
    }
    let reduced = n - k + half;
    let one = BigUint::one();
    let mut value = base.unwrap_or_else(|| (big_pow(q, reduced) - &one) / (big_pow(q, half) - &one));
    for j in 1..=(k - half) {
        value = (big_pow(q, reduced + j) - &one) * value / (big_pow(q, half + j) - &one);
    }
    Ok(BoundResult {
        params: CdcParams {
            q,
            ambient: n,
            d,
            k,
            n: None,
            s: None,
        },
        value,
        formula: Formula::IteratedJohnson,
        reference: None,
    })
}

/// A row of the shipped reference data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceRow {
    pub q: u64,
    #[serde(rename = "N")]
    pub ambient: u64,
    pub d: u64,
    pub k: u64,
    #[serde(serialize_with = "ser_big")]
    pub new: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub old: BigUint,
}

/// Parses `q,N,d,k,new,old` lines; blank lines and `#` comments are skipped.
pub fn parse_reference_data(text: &str) -> Result<Vec<ReferenceRow>, BoundError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| BoundError::Data { line: i + 1, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let small = |s: &str| u64::from_str(s).map_err(|e| err(format!("{s:?}: {e}")));
        let big = |s: &str| BigUint::from_str(s).map_err(|e| err(format!("{s:?}: {e}")));
        rows.push(ReferenceRow {
            q: small(fields[0])?,
            ambient: small(fields[1])?,
            d: small(fields[2])?,
            k: small(fields[3])?,
            new: big(fields[4])?,
            old: big(fields[5])?,
        });
    }
    Ok(rows)
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    parse_reference_data(REFERENCE_DATA).expect("shipped reference data parses")
}

/// One row of a bound table: construction parameters and an optional
/// reference value to compare against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub s: u64,
    pub reference: Option<Reference>,
}

impl TableRow {
    /// The `s = 1` construction reaching ambient dimension `N = 2k + n`,
    /// compared against the previous best value.
    pub fn from_reference(row: &ReferenceRow) -> Result<Self, BoundError> {
        let n = row
            .ambient
            .checked_sub(2 * row.k)
            .ok_or_else(|| invalid(format!("N = {} < 2k = {}", row.ambient, 2 * row.k)))?;
        Ok(TableRow {
            q: row.q,
            n,
            k: row.k,
            d: row.d,
            s: 1,
            reference: Some(Reference {
                label: "old".into(),
                value: row.old.clone(),
            }),
        })
    }
}

/// Evaluates [`parallel_bound`] for every row, in input order. Failures are
/// reported per row.
pub fn build_table(rows: &[TableRow]) -> Vec<Result<BoundResult, BoundError>> {
    rows.par_iter()
        .map(|row| {
            let mut result = parallel_bound(row.q, row.n, row.k, row.d, row.s)?;
            result.reference = row.reference.clone();
            Ok(result)
        })
        .collect()
}

/// A reproduced reference row.
#[derive(Debug, Clone, Serialize)]
pub struct ReproducedRow {
    #[serde(flatten)]
    pub reference: ReferenceRow,
    #[serde(serialize_with = "ser_big")]
    pub computed: BigUint,
    pub matches_new: bool,
    pub new_exceeds_old: bool,
}

/// Recomputes the `new` column of every reference row.
pub fn reproduce(rows: &[ReferenceRow]) -> Result<Vec<ReproducedRow>, BoundError> {
    let table: Vec<TableRow> = rows.iter().map(TableRow::from_reference).collect::<Result<_, _>>()?;
    build_table(&table)
        .into_iter()
        .zip(rows)
        .map(|(res, row)| {
            let computed = res?.value;
            Ok(ReproducedRow {
                matches_new: computed == row.new,
                new_exceeds_old: row.new > row.old,
                computed,
                reference: row.clone(),
            })
        })
        .collect()
}
