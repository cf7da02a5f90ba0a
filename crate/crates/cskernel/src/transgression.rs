//! The Chern-Simons transgression `TP(A)` and the classes built from it.
//!
//! For the power sum `p_l` the transgression is
//! `l * integral_0^1 Tr(A ^ phi_t^{l-1}) dt` with
//! `phi_t = t F(A) - (1/2)(t^2 - t)[A, A]`; general invariants are handled
//! monomial by monomial, with the leading generator carrying the
//! transgression and the remaining generators evaluated at the curvature.
//! Every result is checked against its differential contract on the spot.

use crate::error::{Error, Result};
use crate::exterior::{DegreeTag, Form};
use crate::invariants::{chern_weil, elementary, newton_eval, InvPoly};
use crate::matform::{bracket, curvature, mat_mul_raw, FormMatrix};
use crate::scalar::{rat, rat_int, Rational, TPoly, UniPoly};

/// A transgression form together with its cached differential.
///
/// Invariant (checked at construction): `differential = d(form)` and equals
/// the Chern-Weil form of the invariant used.
#[derive(Clone, Debug, PartialEq)]
pub struct TransgressionResult {
    /// The transgressed (2n-1)-form.
    pub form: Form,
    /// Its exterior derivative, a closed 2n-form.
    pub differential: Form,
    /// The invariant polynomial that was transgressed.
    pub invariant: InvPoly,
    /// Size of the connection matrix.
    pub size: usize,
}

/// The curvature path `phi_t = t F(A) - (1/2)(t^2 - t)[A, A]` as a
/// matrix-valued polynomial in `t`. Equivalently `t dA - t^2 A^2`.
pub fn phi_t(a: &FormMatrix) -> Result<TPoly<FormMatrix>> {
    let f = curvature(a)?;
    let br = bracket(a, a)?;
    let half_br = br.scale(&rat(1, 2));
    let zero = FormMatrix::zero(a.size());
    Ok(TPoly::new(vec![zero, f.add(&half_br), half_br.neg()]))
}

/// Transgression of the power sum `p_l`.
///
/// `l = 1` is the degenerate leading slot used by the monomial rule and
/// gives `Tr(A)` outright. The differential contract
/// `d(result) = Tr(F(A)^l)` is asserted before returning.
pub fn transgress_newton(a: &FormMatrix, l: u32) -> Result<TransgressionResult> {
    assert!(l >= 1, "transgress_newton needs l >= 1");
    let form = if l == 1 {
        crate::matform::trace(a)
    } else {
        let phi = phi_t(a)?;
        let a_slot = TPoly::new(vec![a.clone()]);
        let integrand = a_slot.mul_with(&phi.pow_with(l - 1, mat_mul_raw), mat_mul_raw);
        let traced = integrand.map(crate::matform::trace);
        traced
            .scale(&rat_int(l as i64))
            .integrate_unit()
            .unwrap_or_else(Form::zero)
    };
    let differential = form.d();
    let expected = newton_eval(l, &curvature(a)?)?;
    if differential != expected {
        return Err(Error::InternalIdentityFailure(format!(
            "d TP(A) != Tr(F^{l}) for the power sum p{l}"
        )));
    }
    Ok(TransgressionResult {
        form,
        differential,
        invariant: InvPoly::newton(l),
        size: a.size(),
    })
}

/// Transgression of a homogeneous invariant polynomial of degree >= 2.
///
/// Monomial rule: `c * p_{i1} ... p_{ik}` (indices ascending) contributes
/// `c * TP_{i1}(A) ^ Tr(F^{i2}) ^ ... ^ Tr(F^{ik})`, extended linearly.
pub fn transgress(a: &FormMatrix, p: &InvPoly) -> Result<TransgressionResult> {
    match p.degree_tag() {
        DegreeTag::Homogeneous(n) if n >= 2 => {}
        DegreeTag::Zero | DegreeTag::Homogeneous(_) => {
            return Err(Error::DegreeError(
                "transgress expects a homogeneous invariant of degree >= 2".into(),
            ))
        }
        DegreeTag::Mixed => {
            return Err(Error::InhomogeneousOperand(
                "transgress expects a homogeneous invariant".into(),
            ))
        }
    }
    let f = curvature(a)?;
    let mut form = Form::zero();
    for (mono, c) in p.terms() {
        let idx = mono.indices();
        let lead = idx[0];
        let mut term = transgress_newton(a, lead)?.form;
        for &l in &idx[1..] {
            term = term.wedge(&newton_eval(l, &f)?);
        }
        form = form.add(&term.scale(c));
    }
    let differential = form.d();
    let expected = chern_weil(a, p)?;
    if differential != expected {
        return Err(Error::InternalIdentityFailure(
            "d TP(A) != P(F(A)) for the requested invariant".into(),
        ));
    }
    Ok(TransgressionResult {
        form,
        differential,
        invariant: p.clone(),
        size: a.size(),
    })
}

/// The class `w_n`: transgression of the n-th elementary symmetric
/// invariant.
pub fn cs_class(a: &FormMatrix, n: u32) -> Result<TransgressionResult> {
    transgress(a, &elementary(n))
}

/// Check the univariate identity
/// `n(t-t^2)^{n-1} - (n-1)t^2(t-t^2)^{n-2} = (t(t-t^2)^{n-1})'`
/// by exact polynomial expansion.
pub fn rigidity_identity_check(n: u32) -> bool {
    assert!(n >= 2);
    fn upow(p: &UniPoly, k: u32) -> UniPoly {
        if k == 0 {
            return UniPoly::new(vec![rat_int(1)]);
        }
        p.pow_with(k, |a: &Rational, b: &Rational| a * b)
    }
    let mul = |a: &UniPoly, b: &UniPoly| a.mul_with(b, |x: &Rational, y: &Rational| x * y);
    let t = UniPoly::new(vec![rat_int(0), rat_int(1)]);
    let t2 = UniPoly::new(vec![rat_int(0), rat_int(0), rat_int(1)]);
    let base = UniPoly::new(vec![rat_int(0), rat_int(1), rat_int(-1)]); // t - t^2
    let lhs = upow(&base, n - 1)
        .scale(&rat_int(n as i64))
        .add(&mul(&t2, &upow(&base, n - 2)).scale(&rat_int(-((n - 1) as i64))));
    let rhs = mul(&t, &upow(&base, n - 1)).derivative_t();
    lhs.normalized() == rhs.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::poly_term;
    use crate::matform::{gauge, mat_mul, trace};
    use crate::scalar::Poly;

    const X: u32 = 0;
    const Y: u32 = 1;
    const Z: u32 = 2;

    fn small_connection() -> FormMatrix {
        // N=2 over 3 variables, polynomial degree-1 coefficients
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, poly_term(Poly::var(X), &[Y]));
        a.set(0, 1, poly_term(Poly::var(Y), &[Z]).add(&Form::dvar(X)));
        a.set(1, 0, poly_term(Poly::var(Z), &[X]));
        a.set(1, 1, poly_term(Poly::var(X), &[Z]).neg());
        a
    }

    fn flat_shear() -> FormMatrix {
        let mut g = FormMatrix::identity(2);
        g.set(0, 1, Form::var(X));
        let mut ginv = FormMatrix::identity(2);
        ginv.set(0, 1, Form::var(X).neg());
        gauge(&FormMatrix::zero(2), &g, &ginv).unwrap()
    }

    #[test]
    fn phi_t_slots() {
        let a = small_connection();
        let phi = phi_t(&a).unwrap();
        assert!(phi.coeff(0).unwrap().is_zero());
        assert_eq!(phi.coeff(1).unwrap(), &a.d());
        assert_eq!(phi.coeff(2).unwrap(), &mat_mul(&a, &a).unwrap().neg());
        // t = 1 recovers the curvature
        let at_one = phi.coeff(1).unwrap().add(phi.coeff(2).unwrap());
        assert_eq!(at_one, curvature(&a).unwrap());
    }

    #[test]
    fn phi_t_of_zero() {
        let phi = phi_t(&FormMatrix::zero(2)).unwrap();
        assert!(phi.is_zero());
    }

    #[test]
    fn transgress_newton_matches_closed_form_l2() {
        // TP(A) = Tr(A dA - (2/3) A^3)
        let a = small_connection();
        let tp = transgress_newton(&a, 2).unwrap();
        let a_da = trace(&mat_mul(&a, &a.d()).unwrap());
        let a3 = trace(&mat_mul(&mat_mul(&a, &a).unwrap(), &a).unwrap());
        let expect = a_da.sub(&a3.scale(&rat(2, 3)));
        assert_eq!(tp.form, expect);
    }

    #[test]
    fn transgress_newton_zero_connection() {
        let tp = transgress_newton(&FormMatrix::zero(2), 2).unwrap();
        assert!(tp.form.is_zero());
        assert!(tp.differential.is_zero());
    }

    #[test]
    fn transgress_newton_rank_one_example() {
        // N=1, A = x dy + y dz: TP_2 = y dx^dy^dz
        let mut a = FormMatrix::zero(1);
        a.set(
            0,
            0,
            poly_term(Poly::var(X), &[Y]).add(&poly_term(Poly::var(Y), &[Z])),
        );
        let tp = transgress_newton(&a, 2).unwrap();
        assert_eq!(tp.form, poly_term(Poly::var(Y), &[X, Y, Z]));
    }

    #[test]
    fn transgress_single_generator_reduces_to_newton() {
        let a = small_connection();
        let via_p = transgress(&a, &InvPoly::newton(2)).unwrap();
        let direct = transgress_newton(&a, 2).unwrap();
        assert_eq!(via_p.form, direct.form);
    }

    #[test]
    fn transgress_p1p1_vanishes_on_flat() {
        let a = flat_shear();
        let p11 = InvPoly::newton(1).mul(&InvPoly::newton(1));
        let out = transgress(&a, &p11).unwrap();
        assert!(out.form.is_zero());
    }

    #[test]
    fn transgress_differential_contract() {
        let a = small_connection();
        for p in [
            InvPoly::newton(2),
            InvPoly::newton(3),
            elementary(2),
            elementary(3),
            InvPoly::newton(1).mul(&InvPoly::newton(2)),
        ] {
            let out = transgress(&a, &p).unwrap();
            assert_eq!(out.differential, chern_weil(&a, &p).unwrap());
            assert_eq!(out.form.d(), out.differential);
        }
    }

    #[test]
    fn transgress_rejects_low_or_mixed_degree() {
        let a = small_connection();
        assert!(matches!(
            transgress(&a, &InvPoly::newton(1)),
            Err(Error::DegreeError(_))
        ));
        let mixed = InvPoly::newton(1).add(&InvPoly::newton(2));
        assert!(matches!(
            transgress(&a, &mixed),
            Err(Error::InhomogeneousOperand(_))
        ));
    }

    #[test]
    fn cs_class_flat_is_closed() {
        let a = flat_shear();
        let w = cs_class(&a, 2).unwrap();
        assert!(w.form.d().is_zero());
    }

    #[test]
    fn rigidity_small_n() {
        // n = 2 by hand: 2(t-t^2) - t^2 = 2t - 3t^2 = d/dt (t^2 - t^3)
        assert!(rigidity_identity_check(2));
        assert!(rigidity_identity_check(3));
        assert!(rigidity_identity_check(8));
    }
}
