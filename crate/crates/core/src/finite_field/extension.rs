use std::sync::Arc;

use super::{Elem, Field, FieldError};

/// GF(q^m) viewed as an `m`-dimensional vector space over GF(q).
///
/// The big field is the Conway field GF(p^{e m}); GF(q) sits inside it as
/// the subfield generated by `w^((q^m - 1)/(q - 1))` where `w` is the big
/// field's generator. Coordinates are taken with respect to a fixed
/// GF(q)-basis, by default the power basis `1, w, ..., w^{m-1}`.
#[derive(Debug, Clone)]
pub struct Extension {
    base: Arc<Field>,
    big: Arc<Field>,
    degree: usize,
    basis: Vec<Elem>,
    embed: Vec<Elem>,
    coords: Vec<Vec<Elem>>,
}

impl Extension {
    pub fn new(q: u32, m: u32) -> Result<Self, FieldError> {
        let base = Field::with_order(q)?;
        let big = Field::new(base.characteristic(), base.degree() * m)?;
        let basis = (0..m as u64).map(|i| big.exp(i)).collect();
        Self::with_basis(base, big, basis)
    }

    /// Uses a caller-supplied GF(q)-basis of the big field.
    pub fn with_custom_basis(q: u32, m: u32, basis: Vec<Elem>) -> Result<Self, FieldError> {
        let base = Field::with_order(q)?;
        let big = Field::new(base.characteristic(), base.degree() * m)?;
        Self::with_basis(base, big, basis)
    }

    fn with_basis(base: Arc<Field>, big: Arc<Field>, basis: Vec<Elem>) -> Result<Self, FieldError> {
        let q = base.order() as u64;
        let m = basis.len();
        if (big.degree() as usize) != base.degree() as usize * m {
            return Err(FieldError::IncompatibleField);
        }
        if basis.iter().any(|&b| !big.contains(b)) {
            return Err(FieldError::IncompatibleField);
        }

        let step = (big.order() as u64 - 1) / (q - 1);
        let y = big.exp(step);
        let root_check = base
            .modulus()
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| big.add(big.mul(acc, y), big.from_prime(c)));
        if !root_check.is_zero() {
            return Err(FieldError::IncompatibleField);
        }
        let embed: Vec<Elem> = base
            .elements()
            .map(|a| match base.log(a) {
                None => Elem::ZERO,
                Some(l) => big.exp(l as u64 * step),
            })
            .collect();

        // invert the coordinate map by enumerating all combinations
        let total = big.order() as usize;
        let mut coords: Vec<Option<Vec<Elem>>> = vec![None; total];
        let mut digits = vec![Elem::ZERO; m];
        for mut idx in 0..total as u64 {
            for d in digits.iter_mut() {
                *d = Elem((idx % q) as u16);
                idx /= q;
            }
            let value = digits.iter().zip(&basis).fold(Elem::ZERO, |acc, (&c, &b)| {
                big.add(acc, big.mul(embed[c.0 as usize], b))
            });
            let slot = &mut coords[value.0 as usize];
            if slot.is_some() {
                return Err(FieldError::DependentBasis);
            }
            *slot = Some(digits.clone());
        }
        let coords = coords.into_iter().map(|c| c.expect("bijective")).collect();

        Ok(Extension {
            base,
            big,
            degree: m,
            basis,
            embed,
            coords,
        })
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn big(&self) -> &Arc<Field> {
        &self.big
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    /// Image of a GF(q) element in GF(q^m).
    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a.0 as usize]
    }

    /// Coordinates of `x` over GF(q) in the chosen basis.
    pub fn coordinates(&self, x: Elem) -> &[Elem] {
        &self.coords[x.0 as usize]
    }

    /// `x^q`, the Frobenius automorphism over GF(q).
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.big.pow(x, self.base.order() as u64)
    }
}
