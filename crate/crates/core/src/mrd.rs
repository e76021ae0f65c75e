//! Gabidulin MRD codes enumerated as explicit `k x n` matrices over GF(q).

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::finite_field::{Elem, Extension, Field, FieldError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MrdError {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("enumeration of {size} codewords exceeds the budget of {budget}")]
    TooLarge { size: u128, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Shape and distance of a rank-metric code of `rows x cols` matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankCodeSpec {
    pub q: u32,
    /// Number of rows `k`.
    pub rows: usize,
    /// Number of columns `n >= k`.
    pub cols: usize,
    /// Minimum rank distance.
    pub delta: usize,
}

impl RankCodeSpec {
    pub fn new(q: u32, cols: usize, rows: usize, delta: usize) -> Result<Self, MrdError> {
        if !(1 <= delta && delta <= rows && rows <= cols) {
            return Err(MrdError::InvalidParameter(format!(
                "need 1 <= delta <= k <= n, got n = {cols}, k = {rows}, delta = {delta}"
            )));
        }
        Ok(RankCodeSpec {
            q,
            rows,
            cols,
            delta,
        })
    }

    /// MRD cardinality `q^(n (k - delta + 1))`, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u128> {
        let exp = (self.cols * (self.rows - self.delta + 1)) as u32;
        (self.q as u128).checked_pow(exp)
    }
}

/// An explicit list of codeword matrices.
#[derive(Debug, Clone)]
pub struct RankCode {
    pub spec: RankCodeSpec,
    field: Arc<Field>,
    codewords: Vec<Matrix>,
}

impl RankCode {
    pub fn from_codewords(spec: RankCodeSpec, field: Arc<Field>, codewords: Vec<Matrix>) -> Self {
        RankCode {
            spec,
            field,
            codewords,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn codewords(&self) -> &[Matrix] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.codewords[i]
    }
}

/// Maps message vectors to codewords of the Gabidulin code `Q_q(n, k, delta)`.
///
/// A message `(f_0, ..., f_{k-delta})` over GF(q^n) defines the linearized
/// polynomial `f(x) = sum_j f_j x^(q^j)`; row `i` of the codeword is the
/// GF(q)-coordinate vector of `f(g_i)`, where `g_1, ..., g_k` are the first
/// `k` elements of the power basis of GF(q^n).
pub struct GabidulinEncoder {
    spec: RankCodeSpec,
    ext: Extension,
    /// `frob[i][j] = g_i^(q^j)`.
    frob: Vec<Vec<Elem>>,
}

impl GabidulinEncoder {
    pub fn new(q: u32, n: usize, k: usize, delta: usize) -> Result<Self, MrdError> {
        let spec = RankCodeSpec::new(q, n, k, delta)?;
        Field::code_alphabet(q)?;
        let ext = Extension::new(q, n as u32)?;
        Ok(Self::with_extension(spec, ext))
    }

    /// Uses the given extension (and therefore its coordinate basis).
    pub fn with_extension(spec: RankCodeSpec, ext: Extension) -> Self {
        let big = ext.big();
        let q = ext.base().order() as u64;
        let frob = (0..spec.rows)
            .map(|i| {
                let g = big.exp(i as u64);
                let mut cur = g;
                (0..=spec.rows - spec.delta)
                    .map(|_| {
                        let v = cur;
                        cur = big.pow(cur, q);
                        v
                    })
                    .collect()
            })
            .collect();
        GabidulinEncoder { spec, ext, frob }
    }

    pub fn spec(&self) -> RankCodeSpec {
        self.spec
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    /// Number of message symbols `k - delta + 1` over GF(q^n).
    pub fn message_len(&self) -> usize {
        self.spec.rows - self.spec.delta + 1
    }

    /// Codeword for a message given as elements of GF(q^n).
    pub fn encode(&self, message: &[Elem]) -> Matrix {
        let big = self.ext.big();
        let (k, n) = (self.spec.rows, self.spec.cols);
        let mut data = Vec::with_capacity(k * n);
        for row in &self.frob {
            let value = message
                .iter()
                .zip(row)
                .fold(Elem::ZERO, |acc, (&f, &g)| big.add(acc, big.mul(f, g)));
            data.extend_from_slice(self.ext.coordinates(value));
        }
        Matrix::from_parts(Arc::clone(self.ext.base()), k, n, data)
    }

    /// Codeword number `index` in lexicographic message order (`f_0` most
    /// significant digit, base `q^n`).
    pub fn encode_index(&self, mut index: u64) -> Matrix {
        let base = self.ext.big().order() as u64;
        let len = self.message_len();
        let mut message = vec![Elem::ZERO; len];
        for slot in message.iter_mut().rev() {
            *slot = self.ext.big().elem((index % base) as u32).expect("digit < order");
            index /= base;
        }
        self.encode(&message)
    }
}

/// Enumerates every codeword of the Gabidulin code `Q_q(n, k, delta)` as a
/// `k x n` matrix, in lexicographic message order.
pub fn gabidulin_enumerate(q: u32, n: usize, k: usize, delta: usize) -> Result<RankCode, MrdError> {
    gabidulin_enumerate_with_budget(q, n, k, delta, crate::enumeration_budget())
}

pub fn gabidulin_enumerate_with_budget(
    q: u32,
    n: usize,
    k: usize,
    delta: usize,
    budget: u64,
) -> Result<RankCode, MrdError> {
    let spec = RankCodeSpec::new(q, n, k, delta)?;
    check_budget(&spec, budget)?;
    let encoder = GabidulinEncoder::new(q, n, k, delta)?;
    Ok(enumerate(&encoder))
}

fn check_budget(spec: &RankCodeSpec, budget: u64) -> Result<u64, MrdError> {
    match spec.cardinality() {
        Some(size) if size <= budget as u128 => Ok(size as u64),
        Some(size) => Err(MrdError::TooLarge { size, budget }),
        None => Err(MrdError::TooLarge {
            size: u128::MAX,
            budget,
        }),
    }
}

pub fn enumerate(encoder: &GabidulinEncoder) -> RankCode {
    let spec = encoder.spec();
    let size = spec.cardinality().expect("checked by caller") as u64;
    let codewords = (0..size).into_par_iter().map(|i| encoder.encode_index(i)).collect();
    RankCode::from_codewords(spec, Arc::clone(encoder.extension().base()), codewords)
}

/// Codewords with `1 <= rank <= max_rank`, plus the zero codeword when
/// `include_zero` is set. Order is preserved.
pub fn sq_filter(code: &RankCode, max_rank: usize, include_zero: bool) -> RankCode {
    let codewords = code
        .codewords
        .par_iter()
        .filter(|c| {
            let r = c.rank();
            (r == 0 && include_zero) || (r >= 1 && r <= max_rank)
        })
        .cloned()
        .collect();
    RankCode::from_codewords(code.spec, Arc::clone(&code.field), codewords)
}

/// Number of codewords of each rank.
pub fn empirical_rank_distribution(code: &RankCode) -> BTreeMap<usize, u64> {
    code.codewords
        .par_iter()
        .fold(BTreeMap::new, |mut acc, c| {
            *acc.entry(c.rank()).or_insert(0u64) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (r, c) in b {
                *a.entry(r).or_insert(0) += c;
            }
            a
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn tiny_code_all_nonzero_full_rank() {
        let code = gabidulin_enumerate(2, 2, 2, 2).unwrap();
        assert_eq!(code.len(), 4);
        assert!(code.get(0).is_zero());
        for c in &code.codewords()[1..] {
            assert_eq!(c.rank(), 2);
        }
        let dist = empirical_rank_distribution(&code);
        assert_eq!(dist, BTreeMap::from([(0, 1), (2, 3)]));
    }

    #[test]
    fn delta_one_is_full_space() {
        let code = gabidulin_enumerate(2, 2, 2, 1).unwrap();
        assert_eq!(code.len(), 16);
        let distinct: HashSet<_> = code.codewords().iter().collect();
        assert_eq!(distinct.len(), 16);
        assert_eq!(sq_filter(&code, 1, false).len(), 9);
        assert_eq!(sq_filter(&code, 1, true).len(), 10);
        assert!(sq_filter(&code, 0, false).is_empty());
    }

    #[test]
    fn rectangular_shape() {
        let code = gabidulin_enumerate(2, 3, 2, 1).unwrap();
        assert_eq!(code.len(), 64);
        assert_eq!((code.get(5).rows(), code.get(5).cols()), (2, 3));
    }

    #[test]
    fn linear_closure() {
        let code = gabidulin_enumerate(3, 3, 2, 2).unwrap();
        let set: HashSet<_> = code.codewords().iter().cloned().collect();
        let f = code.field().clone();
        let two = f.elem(2).unwrap();
        for i in (0..code.len()).step_by(3) {
            for j in (0..code.len()).step_by(5) {
                let s = code.get(i).add(code.get(j)).unwrap();
                assert!(set.contains(&s));
            }
            assert!(set.contains(&code.get(i).scale(two)));
        }
    }

    #[test]
    fn min_rank_equals_delta() {
        for (q, n, k, delta) in [(2, 3, 3, 2), (2, 4, 3, 2), (3, 2, 2, 2), (4, 2, 2, 1), (2, 4, 4, 3)] {
            let code = gabidulin_enumerate(q, n, k, delta).unwrap();
            let min = code.codewords()[1..].iter().map(Matrix::rank).min().unwrap();
            assert_eq!(min, delta, "{q} {n} {k} {delta}");
        }
    }

    #[test]
    fn budget_and_parameter_errors() {
        assert!(matches!(
            gabidulin_enumerate_with_budget(2, 4, 4, 2, 100),
            Err(MrdError::TooLarge { size: 4096, budget: 100 })
        ));
        assert!(matches!(
            gabidulin_enumerate(2, 3, 4, 2),
            Err(MrdError::InvalidParameter(_))
        ));
        assert!(matches!(
            gabidulin_enumerate(2, 3, 3, 0),
            Err(MrdError::InvalidParameter(_))
        ));
        assert!(matches!(
            gabidulin_enumerate(11, 2, 2, 2),
            Err(MrdError::Field(FieldError::UnsupportedAlphabet(11)))
        ));
    }
}
