//! Poincare-lemma homotopy operator on polynomial forms over affine space.
//!
//! The cone contraction at the origin satisfies `d.kappa + kappa.d = id` in
//! degree >= 1, which makes exactness of closed polynomial forms decidable
//! and produces explicit primitives. Log poles are refused: residue
//! pipelines restrict to the divisor first, which is again affine.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::scalar::{Monomial, Poly, Rational};

use num_traits::One;

/// A primitive together with the form it integrates.
///
/// Invariant (checked at construction): `d(primitive) = target` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveWitness {
    pub primitive: Form,
    pub target: Form,
}

/// Outcome of a primitive search on a possibly non-closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimitiveOutcome {
    Witness(PrimitiveWitness),
    /// The input was not closed; carries its differential.
    NotClosed { differential: Form },
}

/// The homotopy operator.
///
/// For a term `f * dx_{i1} ^ ... ^ dx_{ik}` it produces
/// `sum_j (-1)^{j-1} x_{ij} * [integral_0^1 t^{k-1} f(t x) dt] * (frame without slot j)`,
/// extended linearly. The radial integral is evaluated exactly per total
/// degree of the coefficient.
pub fn poincare_kappa(w: &Form) -> Result<Form> {
    let mut acc = Form::zero();
    for (frame, p) in w.terms() {
        if frame.is_empty() {
            return Err(Error::DegreeZeroInput);
        }
        if let Some(v) = first_pole_var(p) {
            return Err(Error::PoleInCoefficient(v));
        }
        let k = frame.len();
        // integral_0^1 t^{k-1} f(tx) dt, one exact rational per degree slot
        let radial = p
            .grade_by_total_degree()
            .shift(k - 1)
            .integrate_unit()
            .unwrap_or_else(Poly::zero);
        for (j, &v) in frame.vars().iter().enumerate() {
            let coeff = radial.mul(&Poly::monomial(Monomial::var(v), Rational::one()));
            let coeff = if j % 2 == 0 { coeff } else { coeff.neg() };
            acc = acc.add(&Form::term(frame.remove_at(j), coeff));
        }
    }
    Ok(acc)
}

fn first_pole_var(p: &Poly) -> Option<u32> {
    for (m, _) in p.terms() {
        for &(v, e) in m.exponents() {
            if e < 0 {
                return Some(v);
            }
        }
    }
    None
}

/// Constructive primitive: `kappa(w)` when `w` is closed, with the
/// re-differentiation check performed before the witness is returned.
pub fn primitive(w: &Form) -> Result<PrimitiveOutcome> {
    let dw = w.d();
    if !dw.is_zero() {
        return Ok(PrimitiveOutcome::NotClosed { differential: dw });
    }
    let prim = poincare_kappa(w)?;
    if prim.d() != *w {
        return Err(Error::NoPrimitive);
    }
    Ok(PrimitiveOutcome::Witness(PrimitiveWitness {
        primitive: prim,
        target: w.clone(),
    }))
}

/// Exactness decision for polynomial forms of positive degree over affine
/// space, where closed implies exact. The witness is produced and re-checked
/// even though the decision only needs closedness.
pub fn is_exact(w: &Form) -> Result<bool> {
    match primitive(w)? {
        PrimitiveOutcome::Witness(_) => Ok(true),
        PrimitiveOutcome::NotClosed { .. } => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{const_term, poly_term};
    use crate::scalar::{rat, rat_int};

    const X: u32 = 0;
    const Y: u32 = 1;

    #[test]
    fn kappa_of_dx() {
        let out = poincare_kappa(&Form::dvar(X)).unwrap();
        assert_eq!(out, Form::var(X));
        assert_eq!(out.d(), Form::dvar(X));
    }

    #[test]
    fn kappa_of_dx_dy() {
        // kappa(dx^dy) = (1/2)(x dy - y dx)
        let w = const_term(rat_int(1), &[X, Y]);
        let out = poincare_kappa(&w).unwrap();
        let expect = poly_term(Poly::var(X).scale(&rat(1, 2)), &[Y])
            .add(&poly_term(Poly::var(Y).scale(&rat(-1, 2)), &[X]));
        assert_eq!(out, expect);
        assert_eq!(out.d(), w);
    }

    #[test]
    fn kappa_of_y_dx_dy() {
        // kappa(y dx^dy) = (xy/3) dy - (y^2/3) dx
        let w = poly_term(Poly::var(Y), &[X, Y]);
        let out = poincare_kappa(&w).unwrap();
        let expect = poly_term(Poly::var(X).mul(&Poly::var(Y)).scale(&rat(1, 3)), &[Y]).add(
            &poly_term(Poly::var(Y).mul(&Poly::var(Y)).scale(&rat(-1, 3)), &[X]),
        );
        assert_eq!(out, expect);
        assert_eq!(out.d(), w);
    }

    #[test]
    fn kappa_rejects_degree_zero_and_poles() {
        assert_eq!(poincare_kappa(&Form::var(X)), Err(Error::DegreeZeroInput));
        let w = Form::dlog(X);
        assert_eq!(poincare_kappa(&w), Err(Error::PoleInCoefficient(X)));
    }

    #[test]
    fn primitive_of_x_dx() {
        let w = poly_term(Poly::var(X), &[X]);
        match primitive(&w).unwrap() {
            PrimitiveOutcome::Witness(wit) => {
                let expect = Form::from_poly(Poly::var(X).mul(&Poly::var(X)).scale(&rat(1, 2)));
                assert_eq!(wit.primitive, expect);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn primitive_reports_not_closed() {
        let w = poly_term(Poly::var(X), &[Y]); // x dy
        match primitive(&w).unwrap() {
            PrimitiveOutcome::NotClosed { differential } => {
                assert_eq!(differential, const_term(rat_int(1), &[X, Y]));
            }
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn exactness_decisions() {
        assert!(is_exact(&const_term(rat_int(1), &[X, Y])).unwrap());
        assert!(!is_exact(&poly_term(Poly::var(X), &[Y])).unwrap());
        // the zero form is exact
        assert!(is_exact(&Form::zero()).unwrap());
    }
}
