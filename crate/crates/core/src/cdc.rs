//! Subspaces, lifting of rank-metric codewords, and the parallel
//! construction of constant-dimension codes.
//!
//! A parallel code on `F_q^N`, `N = (s+1)k + n`, is the union of `s + 2`
//! blocks. Blocks `1..=s+1` consist of `s + 1` square slots of width `k`
//! followed by one slot of width `n`; block `j` puts `I_k` in square slot
//! `j`, rank-restricted square matrices before it, full square MRD
//! matrices after it, and a full `k x n` MRD matrix in the last slot. The
//! final block is `[SQ_k, ..., SQ_k, SQ_n, I_k]` with `s` square slots.
//! Rank-restricted means nonzero with rank at most `k - d/2`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{Elem, Field, FieldError, Matrix};
use crate::mrd::{self, MrdError, RankCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdcError {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("generator has rank {rank}, expected {rows} independent rows")]
    RankDeficient { rows: usize, rank: usize },
    #[error("construction of {size} members exceeds the budget of {budget}")]
    TooLarge { size: u128, budget: u64 },
    #[error(transparent)]
    Mrd(#[from] MrdError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A subspace of `F_q^N` held as its canonical RREF generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    generator: Matrix,
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.generator.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({:?})", self.generator)
    }
}

impl Subspace {
    pub fn q(&self) -> u32 {
        self.generator.field().order()
    }

    pub fn ambient(&self) -> usize {
        self.generator.cols()
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn field(&self) -> &Arc<Field> {
        self.generator.field()
    }

    /// Wraps a generator that is already in RREF with full row rank.
    pub(crate) fn from_rref_unchecked(generator: Matrix) -> Self {
        debug_assert!(generator.is_rref());
        Subspace { generator }
    }
}

/// Canonical form of the row space of `generator`; the rows must be
/// linearly independent.
pub fn canonicalize(generator: &Matrix) -> Result<Subspace, CdcError> {
    let rref = generator.rref();
    if rref.rows() != generator.rows() {
        return Err(CdcError::RankDeficient {
            rows: generator.rows(),
            rank: rref.rows(),
        });
    }
    Ok(Subspace { generator: rref })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `[I_k | A]`
    Left,
    /// `[A | I_k]`
    Right,
}

/// Row space of `[I_k | A]` or `[A | I_k]`.
pub fn lift(a: &Matrix, side: Side) -> Subspace {
    let id = Matrix::identity(Arc::clone(a.field()), a.rows());
    match side {
        Side::Left => {
            let g = Matrix::hstack(&[&id, a]).expect("same row count");
            Subspace::from_rref_unchecked(g)
        }
        Side::Right => {
            let g = Matrix::hstack(&[a, &id]).expect("same row count");
            Subspace::from_rref_unchecked(g.rref())
        }
    }
}

/// Parameters of a parallel construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ParallelParams {
    pub q: u32,
    /// Width of the final slot.
    pub n: usize,
    pub k: usize,
    /// Minimum subspace distance (even).
    pub d: usize,
    /// Parallel depth.
    pub s: usize,
}

impl ParallelParams {
    pub fn new(q: u32, n: usize, k: usize, d: usize, s: usize) -> Result<Self, CdcError> {
        if d == 0 || d % 2 != 0 {
            return Err(CdcError::InvalidParameter(format!("d = {d} must be even and positive")));
        }
        if !(n >= k && k >= d) {
            return Err(CdcError::InvalidParameter(format!(
                "need n >= k >= d, got n = {n}, k = {k}, d = {d}"
            )));
        }
        Ok(ParallelParams { q, n, k, d, s })
    }

    pub fn ambient(&self) -> usize {
        (self.s + 1) * self.k + self.n
    }

    /// Rank distance of the component MRD codes, `d / 2`.
    pub fn delta(&self) -> usize {
        self.d / 2
    }
}

/// Which component code fills a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Identity,
    FullSquare,
    RestrictedSquare,
    FullWide,
    RestrictedWide,
}

/// Anything that can hand out indexed members for verification.
pub trait SubspaceCode: Sync {
    fn q(&self) -> u32;
    fn ambient(&self) -> usize;
    fn dim(&self) -> usize;
    fn len(&self) -> u64;
    fn member(&self, index: u64) -> Subspace;
    /// Contiguous member ranges, one per block. A single range when the code
    /// has no block structure.
    fn blocks(&self) -> Vec<Range<u64>> {
        vec![0..self.len()]
    }
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// An explicitly stored constant-dimension code.
#[derive(Debug, Clone)]
pub struct Cdc {
    q: u32,
    ambient: usize,
    dim: usize,
    pub claimed_distance: usize,
    members: Vec<Subspace>,
    blocks: Vec<Range<u64>>,
    pub params: Option<ParallelParams>,
}

impl Cdc {
    pub fn new(q: u32, ambient: usize, dim: usize, claimed_distance: usize, members: Vec<Subspace>) -> Result<Self, CdcError> {
        if let Some(bad) = members
            .iter()
            .find(|m| m.q() != q || m.ambient() != ambient || m.dim() != dim)
        {
            return Err(CdcError::InvalidParameter(format!(
                "member {:?} does not live in G_{q}({ambient}, {dim})",
                bad
            )));
        }
        let blocks = vec![0..members.len() as u64];
        Ok(Cdc {
            q,
            ambient,
            dim,
            claimed_distance,
            members,
            blocks,
            params: None,
        })
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }

    pub fn with_blocks(mut self, blocks: Vec<Range<u64>>) -> Self {
        self.blocks = blocks;
        self
    }

    pub fn push(&mut self, s: Subspace) {
        self.members.push(s);
        if let Some(last) = self.blocks.last_mut() {
            last.end += 1;
        }
    }

    /// Number of pairwise distinct members.
    pub fn distinct_len(&self) -> usize {
        let set: std::collections::HashSet<&Subspace> = self.members.iter().collect();
        set.len()
    }
}

impl SubspaceCode for Cdc {
    fn q(&self) -> u32 {
        self.q
    }
    fn ambient(&self) -> usize {
        self.ambient
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn len(&self) -> u64 {
        self.members.len() as u64
    }
    fn member(&self, index: u64) -> Subspace {
        self.members[index as usize].clone()
    }
    fn blocks(&self) -> Vec<Range<u64>> {
        self.blocks.clone()
    }
}

/// The parallel construction with members generated on demand.
///
/// Member order: blocks in order; within a block, a mixed-radix index over
/// the non-identity slots with the leftmost slot most significant, each slot
/// enumerating its component code in message order.
pub struct ParallelCode {
    params: ParallelParams,
    field: Arc<Field>,
    square: RankCode,
    square_sq: RankCode,
    wide: RankCode,
    wide_sq: RankCode,
    layouts: Vec<Vec<Slot>>,
    offsets: Vec<u128>,
}

impl ParallelCode {
    pub fn params(&self) -> ParallelParams {
        self.params
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn code_for(&self, slot: Slot) -> Option<&RankCode> {
        match slot {
            Slot::Identity => None,
            Slot::FullSquare => Some(&self.square),
            Slot::RestrictedSquare => Some(&self.square_sq),
            Slot::FullWide => Some(&self.wide),
            Slot::RestrictedWide => Some(&self.wide_sq),
        }
    }

    fn block_size(&self, layout: &[Slot]) -> u128 {
        layout
            .iter()
            .filter_map(|&s| self.code_for(s))
            .map(|c| c.len() as u128)
            .product()
    }

    /// Total member count; may exceed `u64` only for parameters far beyond
    /// anything the component enumeration would accept.
    pub fn size(&self) -> u128 {
        *self.offsets.last().expect("at least one block")
    }

    pub fn block_sizes(&self) -> Vec<u128> {
        self.layouts.iter().map(|l| self.block_size(l)).collect()
    }

    /// Unreduced generator `k x N` of a member.
    pub fn raw_generator(&self, index: u64) -> Matrix {
        let idx = index as u128;
        let block = self.offsets.partition_point(|&o| o <= idx) - 1;
        let mut local = idx - self.offsets[block];
        let layout = &self.layouts[block];
        let k = self.params.k;

        let mut picks: Vec<Option<&Matrix>> = vec![None; layout.len()];
        for (pos, &slot) in layout.iter().enumerate().rev() {
            if let Some(code) = self.code_for(slot) {
                let len = code.len() as u128;
                picks[pos] = Some(code.get((local % len) as usize));
                local /= len;
            }
        }
        let id = Matrix::identity(Arc::clone(&self.field), k);
        let parts: Vec<&Matrix> = picks.iter().map(|p| p.unwrap_or(&id)).collect();
        Matrix::hstack(&parts).expect("all slots have k rows")
    }

    /// Materializes every member, refusing above `budget`.
    pub fn materialize(&self, budget: u64) -> Result<Cdc, CdcError> {
        let size = self.size();
        if size > budget as u128 {
            return Err(CdcError::TooLarge { size, budget });
        }
        let members: Vec<Subspace> = (0..size as u64).into_par_iter().map(|i| self.member(i)).collect();
        let mut cdc = Cdc::new(
            self.field.order(),
            self.params.ambient(),
            self.params.k,
            self.params.d,
            members,
        )?
        .with_blocks(SubspaceCode::blocks(self));
        cdc.params = Some(self.params);
        Ok(cdc)
    }
}

impl SubspaceCode for ParallelCode {
    fn q(&self) -> u32 {
        self.field.order()
    }
    fn ambient(&self) -> usize {
        self.params.ambient()
    }
    fn dim(&self) -> usize {
        self.params.k
    }
    fn len(&self) -> u64 {
        u64::try_from(self.size()).unwrap_or(u64::MAX)
    }
    fn member(&self, index: u64) -> Subspace {
        Subspace::from_rref_unchecked(self.raw_generator(index).rref())
    }
    fn blocks(&self) -> Vec<Range<u64>> {
        self.offsets
            .windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| w[0] as u64..w[1] as u64)
            .collect()
    }
}

fn layouts(s: usize) -> Vec<Vec<Slot>> {
    let mut out = Vec::with_capacity(s + 2);
    for j in 0..=s {
        let mut layout: Vec<Slot> = (0..=s)
            .map(|pos| match pos.cmp(&j) {
                std::cmp::Ordering::Less => Slot::RestrictedSquare,
                std::cmp::Ordering::Equal => Slot::Identity,
                std::cmp::Ordering::Greater => Slot::FullSquare,
            })
            .collect();
        layout.push(Slot::FullWide);
        out.push(layout);
    }
    let mut last = vec![Slot::RestrictedSquare; s];
    last.push(Slot::RestrictedWide);
    last.push(Slot::Identity);
    out.push(last);
    out
}

/// Builds the parallel construction on `F_q^((s+1)k + n)`.
///
/// Only the component MRD codes are enumerated here (each must fit the
/// enumeration budget); members are generated on demand. Use
/// [`ParallelCode::materialize`] for an explicit member list.
pub fn assemble_parallel(q: u32, n: usize, k: usize, d: usize, s: usize) -> Result<ParallelCode, CdcError> {
    assemble_parallel_with_budget(q, n, k, d, s, crate::enumeration_budget())
}

pub fn assemble_parallel_with_budget(
    q: u32,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
    budget: u64,
) -> Result<ParallelCode, CdcError> {
    let params = ParallelParams::new(q, n, k, d, s)?;
    let field = Field::code_alphabet(q)?;
    let delta = params.delta();
    let max_rank = k - delta;

    let wide = mrd::gabidulin_enumerate_with_budget(q, n, k, delta, budget)?;
    let wide_sq = mrd::sq_filter(&wide, max_rank, false);
    let (square, square_sq) = if n == k {
        (wide.clone(), wide_sq.clone())
    } else {
        let sq = mrd::gabidulin_enumerate_with_budget(q, k, k, delta, budget)?;
        let sq_r = mrd::sq_filter(&sq, max_rank, false);
        (sq, sq_r)
    };

    let mut code = ParallelCode {
        params,
        field,
        square,
        square_sq,
        wide,
        wide_sq,
        layouts: layouts(s),
        offsets: Vec::new(),
    };
    let mut offsets = vec![0u128];
    for l in &code.layouts {
        let next = offsets.last().unwrap() + code.block_size(l);
        offsets.push(next);
    }
    code.offsets = offsets;
    Ok(code)
}

/// Every `k x N` generator of `ambient`-dimensional space: used by tests to
/// enumerate Grassmannians.
#[doc(hidden)]
pub fn all_subspaces(field: &Arc<Field>, ambient: usize, k: usize) -> Vec<Subspace> {
    let q = field.order() as u64;
    let cells = ambient * k;
    let mut seen = std::collections::HashSet::new();
    for mut idx in 0..q.pow(cells as u32) {
        let data: Vec<Elem> = (0..cells)
            .map(|_| {
                let v = (idx % q) as u32;
                idx /= q;
                field.elem(v).expect("digit < q")
            })
            .collect();
        let m = Matrix::new(Arc::clone(field), k, ambient, data).expect("shape");
        if let Ok(s) = canonicalize(&m) {
            seen.insert(s);
        }
    }
    let mut out: Vec<Subspace> = seen.into_iter().collect();
    out.sort_by(|a, b| a.generator().data().cmp(b.generator().data()));
    out
}
