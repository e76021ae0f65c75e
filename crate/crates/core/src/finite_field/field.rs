use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::conway;
use super::FieldError;

/// Largest field order for which arithmetic tables are built.
pub const MAX_FIELD_ORDER: u32 = 1024;

/// Alphabet sizes accepted for code construction.
pub const SUPPORTED_CODE_ALPHABETS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

/// An element of some [`Field`], stored as its index.
///
/// The index is the base-`p` digit encoding of the coefficient vector of the
/// representing polynomial: `index = c_0 + c_1 p + ... + c_{e-1} p^{e-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field GF(p^e) defined by the Conway polynomial of degree `e`
/// over GF(p).
///
/// All arithmetic goes through precomputed tables, so a `Field` is immutable
/// once built and is shared behind an `Arc`.
pub struct Field {
    p: u32,
    e: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u16>,
    log: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.e)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e
    }
}

impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits `q` as `p^e`, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, e))
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Field>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// Returns GF(p^e). Identical `(p, e)` always yields the same field.
    pub fn new(p: u32, e: u32) -> Result<Arc<Field>, FieldError> {
        if !is_prime(p) || e == 0 {
            return Err(FieldError::NotPrimePower(p.saturating_pow(e)));
        }
        let order = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(FieldError::Unsupported { p, e })?;
        let modulus = conway::lookup(p, e).ok_or(FieldError::Unsupported { p, e })?;
        debug_assert!(order > 1);

        let mut guard = cache().lock().expect("field cache poisoned");
        if let Some(f) = guard.get(&(p, e)) {
            return Ok(Arc::clone(f));
        }
        let field = Arc::new(Self::build(p, e, order, modulus)?);
        guard.insert((p, e), Arc::clone(&field));
        Ok(field)
    }

    /// Returns the field with `q` elements.
    pub fn with_order(q: u32) -> Result<Arc<Field>, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    /// Returns the field with `q` elements, restricted to the code alphabets
    /// in [`SUPPORTED_CODE_ALPHABETS`].
    pub fn code_alphabet(q: u32) -> Result<Arc<Field>, FieldError> {
        if !SUPPORTED_CODE_ALPHABETS.contains(&q) {
            return Err(FieldError::UnsupportedAlphabet(q));
        }
        Self::with_order(q)
    }

    fn build(p: u32, e: u32, order: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        let e_us = e as usize;
        let q = order as usize;

        let digits = |mut idx: usize| -> Vec<u32> {
            (0..e_us)
                .map(|_| {
                    let d = (idx % p as usize) as u32;
                    idx /= p as usize;
                    d
                })
                .collect()
        };
        let encode = |coeffs: &[u32]| -> u16 {
            coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c) as u16
        };

        let mut add = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
            }
        }
        let neg: Vec<u16> = (0..q)
            .map(|a| {
                let n: Vec<u32> = digits(a).iter().map(|&c| (p - c) % p).collect();
                encode(&n)
            })
            .collect();

        // powers of x, reducing x^e = -(c_0 + ... + c_{e-1} x^{e-1})
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u16::MAX; q];
        let mut cur = vec![0u32; e_us];
        cur[0] = 1;
        for i in 0..q - 1 {
            let idx = encode(&cur);
            if log[idx as usize] != u16::MAX {
                return Err(FieldError::NotPrimitive { p, e });
            }
            log[idx as usize] = i as u16;
            exp.push(idx);
            let top = cur[e_us - 1];
            for j in (1..e_us).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for (j, c) in cur.iter_mut().enumerate() {
                *c = (*c + top * (p - modulus[j] % p)) % p;
            }
        }
        if encode(&cur) != 1 {
            return Err(FieldError::NotPrimitive { p, e });
        }

        Ok(Field {
            p,
            e,
            order,
            modulus: modulus.to_vec(),
            exp,
            log,
            add,
            neg,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Number of elements `q = p^e`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Validates an element index.
    pub fn elem(&self, index: u32) -> Result<Elem, FieldError> {
        if index < self.order {
            Ok(Elem(index as u16))
        } else {
            Err(FieldError::InvalidElement {
                index,
                order: self.order,
            })
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.index() < self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(|i| Elem(i as u16))
    }

    /// The class of `x`, a generator of the multiplicative group.
    pub fn generator(&self) -> Elem {
        Elem(self.exp[1 % self.exp.len()])
    }

    /// Base-`p` coefficient vector of `a`, constant term first.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let mut idx = a.index();
        (0..self.e)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.0 as usize * self.order as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.exp.len();
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Elem(self.exp[if s >= n { s - n } else { s }])
    }

    /// Multiplies two elements given by raw index, validating both.
    pub fn try_mul(&self, a: u32, b: u32) -> Result<Elem, FieldError> {
        Ok(self.mul(self.elem(a)?, self.elem(b)?))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if !self.contains(a) {
            return Err(FieldError::InvalidElement {
                index: a.index(),
                order: self.order,
            });
        }
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.exp.len();
        let l = self.log[a.0 as usize] as usize;
        Ok(Elem(self.exp[(n - l) % n]))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = self.exp.len() as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[((l * (k % n)) % n) as usize])
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % self.exp.len() as u64) as usize])
    }

    /// Discrete logarithm to base [`Field::generator`]; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as u32)
    }

    /// Embeds an element of the prime field GF(p).
    pub fn from_prime(&self, c: u32) -> Elem {
        Elem((c % self.p) as u16)
    }
}
