use super::{Elem, Field, FieldError};

/// Evaluates the linearized polynomial `sum_i coeffs[i] * x^(q^i)` in `field`.
///
/// `q` must be the order of a subfield of `field`; the map is then
/// GF(q)-linear in `x`.
pub fn linearized_eval(field: &Field, coeffs: &[Elem], x: Elem, q: u32) -> Result<Elem, FieldError> {
    let (p, e) = super::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    if p != field.characteristic() || field.degree() % e != 0 {
        return Err(FieldError::IncompatibleField);
    }
    if coeffs.is_empty() {
        return Err(FieldError::EmptyPolynomial);
    }
    for &c in coeffs.iter().chain(std::iter::once(&x)) {
        field.elem(c.index())?;
    }
    let mut acc = Elem::ZERO;
    let mut frob = x;
    for &c in coeffs {
        acc = field.add(acc, field.mul(c, frob));
        frob = field.pow(frob, q as u64);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_polynomial() {
        let f = Field::with_order(16).unwrap();
        for x in f.elements() {
            assert_eq!(linearized_eval(&f, &[Elem::ONE], x, 2).unwrap(), x);
        }
    }

    #[test]
    fn frobenius_in_gf4() {
        let f = Field::with_order(4).unwrap();
        let alpha = f.elem(2).unwrap();
        let got = linearized_eval(&f, &[Elem::ZERO, Elem::ONE], alpha, 2).unwrap();
        assert_eq!(got, f.elem(3).unwrap());
    }

    #[test]
    fn linear_over_subfield() {
        let f = Field::with_order(81).unwrap();
        let coeffs = [f.elem(17).unwrap(), f.elem(5).unwrap(), f.elem(60).unwrap()];
        let sub = Field::with_order(9).unwrap();
        let ext = super::super::Extension::new(9, 2).unwrap();
        for a in f.elements().step_by(7) {
            for b in f.elements().step_by(5) {
                let lhs = linearized_eval(&f, &coeffs, f.add(a, b), 9).unwrap();
                let rhs = f.add(
                    linearized_eval(&f, &coeffs, a, 9).unwrap(),
                    linearized_eval(&f, &coeffs, b, 9).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
            for c in sub.elements() {
                let lam = ext.embed(c);
                let lhs = linearized_eval(&f, &coeffs, f.mul(lam, a), 9).unwrap();
                let rhs = f.mul(lam, linearized_eval(&f, &coeffs, a, 9).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn errors() {
        let f = Field::with_order(16).unwrap();
        assert_eq!(
            linearized_eval(&f, &[Elem::ONE], Elem::ONE, 3),
            Err(FieldError::IncompatibleField)
        );
        assert_eq!(
            linearized_eval(&f, &[Elem::ONE], Elem::ONE, 8),
            Err(FieldError::IncompatibleField)
        );
        assert_eq!(
            linearized_eval(&f, &[], Elem::ONE, 2),
            Err(FieldError::EmptyPolynomial)
        );
        assert!(matches!(
            linearized_eval(&f, &[Elem(16)], Elem::ONE, 2),
            Err(FieldError::InvalidElement { .. })
        ));
    }
}
