//! Minimum-distance checks for constant-dimension codes.
//!
//! Distances use the stacked-generator rank:
//! `d_S(U, W) = 2 rank[U; W] - dim U - dim W`.
//!
//! Sampled mode draws pairs from [`PairSampler`], a 64-bit linear
//! congruential generator with a fixed output mix:
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! z = state
//! z = (z ^ (z >> 33)) * 0xff51afd7ed558ccd
//! z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53
//! out = z ^ (z >> 33)
//! ```
//!
//! The initial state is the seed. A value below `n` is the high word of
//! `out * n` (128-bit), redrawing while the low word is below `2^64 mod n`.
//! An unordered pair from `len` members draws `i < len`, then `j < len - 1`
//! and bumps `j` by one when `j >= i`. Cross-block pairs draw two distinct
//! blocks the same way, then one member uniformly from each.

use std::fmt;
use std::ops::Range;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::BoundResult;
use crate::cdc::{Cdc, Subspace, SubspaceCode};
use crate::finite_field::Matrix;

/// Default cap on the number of pairs in exhaustive mode.
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("subspaces live in different spaces (q = {0} vs {1}, N = {2} vs {3})")]
    IncompatibleSpaces(u32, u32, usize, usize),
    #[error("{pairs} pairs exceed the exhaustive budget of {budget}; use sampled mode")]
    PairBudgetExceeded { pairs: u128, budget: u64 },
}

/// Subspace distance `dim(U + W) - dim(U ∩ W)`.
pub fn subspace_distance(u: &Subspace, w: &Subspace) -> Result<usize, VerifyError> {
    if u.q() != w.q() || u.ambient() != w.ambient() {
        return Err(VerifyError::IncompatibleSpaces(u.q(), w.q(), u.ambient(), w.ambient()));
    }
    let stacked = Matrix::vstack(&[u.generator(), w.generator()]).expect("same field and width");
    Ok(2 * stacked.rank() - u.dim() - w.dim())
}

/// Subspaces over GF(2) with rows packed into machine words.
struct PackedBinary {
    rows: Vec<u64>,
    dim: usize,
}

impl PackedBinary {
    fn new(s: &Subspace) -> Self {
        let g = s.generator();
        let rows = (0..g.rows())
            .map(|r| {
                g.row(r)
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (c, e)| acc | ((e.index() as u64) << c))
            })
            .collect();
        PackedBinary { rows, dim: g.rows() }
    }

    fn distance(&self, other: &PackedBinary) -> usize {
        let mut buf = [0u64; 128];
        let total = self.rows.len() + other.rows.len();
        buf[..self.rows.len()].copy_from_slice(&self.rows);
        buf[self.rows.len()..total].copy_from_slice(&other.rows);
        let rows = &mut buf[..total];
        let mut rank = 0;
        for i in 0..total {
            let pivot = rows[i];
            if pivot == 0 {
                continue;
            }
            rank += 1;
            let low = pivot & pivot.wrapping_neg();
            for r in rows[i + 1..].iter_mut() {
                if *r & low != 0 {
                    *r ^= pivot;
                }
            }
        }
        2 * rank - self.dim - other.dim
    }
}

/// Distance oracle over a fixed member list, with a bit-packed path for
/// binary codes of ambient dimension at most 64.
enum Members {
    Binary(Vec<PackedBinary>),
    General(Vec<Subspace>),
}

impl Members {
    fn new(members: Vec<Subspace>) -> Self {
        let binary = members
            .iter()
            .all(|m| m.q() == 2 && m.ambient() <= 64 && m.dim() <= 64);
        if binary && !members.is_empty() {
            Members::Binary(members.iter().map(PackedBinary::new).collect())
        } else {
            Members::General(members)
        }
    }

    fn distance(&self, i: usize, j: usize) -> usize {
        match self {
            Members::Binary(v) => v[i].distance(&v[j]),
            Members::General(v) => subspace_distance(&v[i], &v[j]).expect("members share a space"),
        }
    }
}

fn pair_distance(a: &Subspace, b: &Subspace) -> usize {
    if a.q() == 2 && a.ambient() <= 64 && a.dim() + b.dim() <= 128 {
        PackedBinary::new(a).distance(&PackedBinary::new(b))
    } else {
        subspace_distance(a, b).expect("members share a space")
    }
}

/// Minimum over a set of pairs, with the lexicographically first pair
/// attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistanceSummary {
    /// `None` when there are no pairs.
    pub min_distance: Option<usize>,
    pub witness: Option<(u64, u64)>,
    pub pairs_checked: u64,
    pub cross_block_pairs: u64,
}

fn combine(a: Option<(usize, u64, u64)>, b: Option<(usize, u64, u64)>) -> Option<(usize, u64, u64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn block_of(blocks: &[Range<u64>], i: u64) -> usize {
    blocks.iter().position(|r| r.contains(&i)).unwrap_or(0)
}

/// Exact minimum pairwise distance.
pub fn min_distance_exhaustive<C: SubspaceCode + ?Sized>(code: &C, pair_budget: u64) -> Result<DistanceSummary, VerifyError> {
    let len = code.len();
    let pairs = len as u128 * len.saturating_sub(1) as u128 / 2;
    if pairs > pair_budget as u128 {
        return Err(VerifyError::PairBudgetExceeded {
            pairs,
            budget: pair_budget,
        });
    }
    let members: Vec<Subspace> = (0..len).into_par_iter().map(|i| code.member(i)).collect();
    let blocks = code.blocks();
    let members = Members::new(members);
    let best = (0..len as usize)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<(usize, u64, u64)> = None;
            for j in i + 1..len as usize {
                let d = members.distance(i, j);
                if best.map_or(true, |(b, _, _)| d < b) {
                    best = Some((d, i as u64, j as u64));
                }
            }
            best
        })
        .reduce(|| None, combine);
    let cross = if blocks.len() > 1 {
        let sizes: Vec<u128> = blocks.iter().map(|r| (r.end - r.start) as u128).collect();
        let total: u128 = sizes.iter().sum();
        let within: u128 = sizes.iter().map(|s| s * s.saturating_sub(1) / 2).sum();
        (total * total.saturating_sub(1) / 2 - within) as u64
    } else {
        0
    };
    Ok(DistanceSummary {
        min_distance: best.map(|b| b.0),
        witness: best.map(|b| (b.1, b.2)),
        pairs_checked: pairs as u64,
        cross_block_pairs: cross,
    })
}

/// Deterministic pair generator; see the module docs for the exact recipe.
#[derive(Debug, Clone)]
pub struct PairSampler {
    state: u64,
}

impl PairSampler {
    pub fn new(seed: u64) -> Self {
        PairSampler { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut z = self.state;
        z = (z ^ (z >> 33)).wrapping_mul(0xff51afd7ed558ccd);
        z = (z ^ (z >> 33)).wrapping_mul(0xc4ceb9fe1a85ec53);
        z ^ (z >> 33)
    }

    /// Uniform value in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = self.next_u64() as u128 * n as u128;
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Two distinct values in `0..n`, smaller first; `n >= 2`.
    pub fn distinct_pair(&mut self, n: u64) -> (u64, u64) {
        let i = self.below(n);
        let mut j = self.below(n - 1);
        if j >= i {
            j += 1;
        }
        (i.min(j), i.max(j))
    }
}

/// Minimum distance over `samples` uniform pairs plus `ceil(samples / 10)`
/// pairs forced across distinct blocks. Falls back to the exhaustive check
/// when `samples` covers every pair.
pub fn min_distance_sampled<C: SubspaceCode + ?Sized>(code: &C, samples: u64, seed: u64) -> DistanceSummary {
    let len = code.len();
    let all_pairs = len as u128 * len.saturating_sub(1) as u128 / 2;
    if samples as u128 >= all_pairs {
        return min_distance_exhaustive(code, u64::MAX).expect("no budget");
    }
    let blocks: Vec<Range<u64>> = code.blocks().into_iter().filter(|r| r.start < r.end).collect();
    let mut rng = PairSampler::new(seed);
    let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(samples as usize + samples as usize / 10 + 1);
    for _ in 0..samples {
        pairs.push(rng.distinct_pair(len));
    }
    let mut cross = 0u64;
    if blocks.len() > 1 {
        let forced = samples.div_ceil(10);
        for _ in 0..forced {
            let (a, b) = rng.distinct_pair(blocks.len() as u64);
            let (ra, rb) = (&blocks[a as usize], &blocks[b as usize]);
            let i = ra.start + rng.below(ra.end - ra.start);
            let j = rb.start + rng.below(rb.end - rb.start);
            pairs.push((i, j));
        }
    }
    cross += pairs
        .iter()
        .filter(|&&(i, j)| block_of(&blocks, i) != block_of(&blocks, j))
        .count() as u64;
    let best = pairs
        .par_iter()
        .map(|&(i, j)| Some((pair_distance(&code.member(i), &code.member(j)), i, j)))
        .reduce(|| None, combine);
    DistanceSummary {
        min_distance: best.map(|b| b.0),
        witness: best.map(|b| (b.1, b.2)),
        pairs_checked: pairs.len() as u64,
        cross_block_pairs: cross,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive { pair_budget: u64 },
    Sampled { samples: u64, seed: u64 },
}

impl CheckMode {
    pub fn name(&self) -> &'static str {
        match self {
            CheckMode::Exhaustive { .. } => "exhaustive",
            CheckMode::Sampled { .. } => "sampled",
        }
    }
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub code: String,
    pub q: u32,
    #[serde(rename = "N")]
    pub ambient: usize,
    pub k: usize,
    pub claimed_distance: usize,
    pub observed_count: u64,
    #[serde(serialize_with = "ser_big")]
    pub predicted_count: BigUint,
    /// Whether `observed_count` counts distinct canonical forms.
    pub distinct_counted: bool,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub min_distance: Option<usize>,
    pub witness: Option<(u64, u64)>,
    pub pairs_checked: u64,
    pub cross_block_pairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
    pub runtime_ms: u128,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code:            {}", self.code)?;
        writeln!(f, "space:           G_{}({}, {})", self.q, self.ambient, self.k)?;
        writeln!(
            f,
            "members:         {} observed{}, {} predicted",
            self.observed_count,
            if self.distinct_counted { " distinct" } else { "" },
            self.predicted_count
        )?;
        match self.mode {
            "sampled" => writeln!(
                f,
                "mode:            sampled ({} samples, seed {})",
                self.samples.unwrap_or(0),
                self.seed.unwrap_or(0)
            )?,
            m => writeln!(f, "mode:            {m}")?,
        }
        writeln!(
            f,
            "pairs checked:   {} ({} cross-block)",
            self.pairs_checked, self.cross_block_pairs
        )?;
        match (self.min_distance, self.witness) {
            (Some(d), Some((i, j))) => writeln!(
                f,
                "min distance:    {d} (members {i}, {j}; claimed {})",
                self.claimed_distance
            )?,
            _ => writeln!(f, "min distance:    no pairs")?,
        }
        if let Some(e) = &self.error {
            writeln!(f, "error:           {e}")?;
        }
        writeln!(f, "runtime:         {} ms", self.runtime_ms)?;
        write!(f, "verdict:         {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Compares a code against a predicted size and checks its minimum
/// distance against `claimed_distance`.
pub fn reconcile<C: SubspaceCode + ?Sized>(
    code: &C,
    label: &str,
    claimed_distance: usize,
    predicted: &BigUint,
    distinct_count: Option<u64>,
    mode: CheckMode,
) -> VerificationReport {
    let start = Instant::now();
    let (summary, error) = match mode {
        CheckMode::Exhaustive { pair_budget } => match min_distance_exhaustive(code, pair_budget) {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        },
        CheckMode::Sampled { samples, seed } => (Some(min_distance_sampled(code, samples, seed)), None),
    };
    let observed = distinct_count.unwrap_or(code.len());
    let distance_ok = summary
        .as_ref()
        .is_some_and(|s| s.min_distance.map_or(true, |d| d >= claimed_distance));
    let pass = error.is_none() && BigUint::from(observed) == *predicted && observed == code.len() && distance_ok;
    let (samples, seed) = match mode {
        CheckMode::Sampled { samples, seed } => (Some(samples), Some(seed)),
        CheckMode::Exhaustive { .. } => (None, None),
    };
    VerificationReport {
        code: label.to_string(),
        q: code.q(),
        ambient: code.ambient(),
        k: code.dim(),
        claimed_distance,
        observed_count: observed,
        predicted_count: predicted.clone(),
        distinct_counted: distinct_count.is_some(),
        mode: mode.name(),
        samples,
        seed,
        min_distance: summary.and_then(|s| s.min_distance),
        witness: summary.and_then(|s| s.witness),
        pairs_checked: summary.map_or(0, |s| s.pairs_checked),
        cross_block_pairs: summary.map_or(0, |s| s.cross_block_pairs),
        error,
        pass,
        runtime_ms: start.elapsed().as_millis(),
    }
}

/// [`reconcile`] for an explicit code against a bound, counting distinct
/// members.
pub fn reconcile_explicit(code: &Cdc, predicted: &BoundResult, mode: CheckMode) -> VerificationReport {
    let label = format!(
        "{} q={} N={} d={} k={}",
        predicted.formula, predicted.params.q, predicted.params.ambient, predicted.params.d, predicted.params.k
    );
    reconcile(
        code,
        &label,
        predicted.params.d as usize,
        &predicted.value,
        Some(code.distinct_len() as u64),
        mode,
    )
}
