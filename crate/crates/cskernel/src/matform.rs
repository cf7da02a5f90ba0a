//! Square matrices of differential forms.
//!
//! Houses connection matrices, curvature, the graded bracket, gauge
//! transformations and the flatness test. Matrix products always mean the
//! wedge-matrix product.

use crate::error::{Error, Result};
use crate::exterior::{DegreeTag, Form};
use crate::scalar::{rat, Rational, TCoeff};

/// N x N matrix of forms, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormMatrix {
    n: usize,
    entries: Vec<Form>,
}

impl FormMatrix {
    pub fn zero(n: usize) -> Self {
        FormMatrix {
            n,
            entries: vec![Form::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FormMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Form::one());
        }
        m
    }

    /// From row-major entries; panics unless `entries.len() == n*n`.
    pub fn from_entries(n: usize, entries: Vec<Form>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        FormMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.entries[i * self.n + j] = f;
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> FormMatrix {
        FormMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Fallible entrywise map.
    pub fn try_map(&self, f: impl Fn(&Form) -> Result<Form>) -> Result<FormMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        Ok(FormMatrix {
            n: self.n,
            entries,
        })
    }

    /// Entrywise sum; panics on size mismatch (internal invariant).
    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        FormMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormMatrix {
        self.map(|f| f.neg())
    }

    pub fn scale(&self, r: &Rational) -> FormMatrix {
        self.map(|f| f.scale(r))
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> FormMatrix {
        self.map(|f| f.d())
    }

    /// Common degree of all entries (zero entries are wildcards).
    pub fn degree_tag(&self) -> DegreeTag {
        let mut tag = DegreeTag::Zero;
        for e in &self.entries {
            tag = tag.merge(e.degree_tag());
            if tag == DegreeTag::Mixed {
                break;
            }
        }
        tag
    }

    /// True when every entry is zero or homogeneous of degree 1.
    pub fn is_one_form_matrix(&self) -> bool {
        matches!(
            self.degree_tag(),
            DegreeTag::Zero | DegreeTag::Homogeneous(1)
        )
    }

    pub fn is_zero_form_matrix(&self) -> bool {
        matches!(
            self.degree_tag(),
            DegreeTag::Zero | DegreeTag::Homogeneous(0)
        )
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.entries.iter().any(|f| f.has_negative_exponent())
    }
}

impl TCoeff for FormMatrix {
    fn tc_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn tc_scale(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn tc_zero_like(&self) -> Self {
        FormMatrix::zero(self.n)
    }
    fn tc_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Wedge-matrix product: entry (i,j) is the sum over l of `a_il ^ b_lj`.
pub fn mat_mul(a: &FormMatrix, b: &FormMatrix) -> Result<FormMatrix> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    Ok(mat_mul_raw(a, b))
}

/// Unchecked product for internal callers that know the sizes agree.
pub(crate) fn mat_mul_raw(a: &FormMatrix, b: &FormMatrix) -> FormMatrix {
    assert_eq!(a.n, b.n);
    let n = a.n;
    let mut out = FormMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Form::zero();
            for l in 0..n {
                acc = acc.add(&a.get(i, l).wedge(b.get(l, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Matrix power with `k = 0` giving the identity.
pub fn mat_pow(a: &FormMatrix, k: u32) -> FormMatrix {
    let mut acc = FormMatrix::identity(a.n);
    for _ in 0..k {
        acc = mat_mul_raw(&acc, a);
    }
    acc
}

/// Sum of the diagonal entries.
pub fn trace(a: &FormMatrix) -> Form {
    let mut acc = Form::zero();
    for i in 0..a.n {
        acc = acc.add(a.get(i, i));
    }
    acc
}

fn homogeneous_degree_for_bracket(m: &FormMatrix) -> Result<Option<usize>> {
    match m.degree_tag() {
        DegreeTag::Zero => Ok(None),
        DegreeTag::Homogeneous(d) => Ok(Some(d)),
        DegreeTag::Mixed => Err(Error::InhomogeneousOperand(
            "bracket operands must be homogeneous matrices".into(),
        )),
    }
}

/// Graded matrix commutator `[A,B] = AB - (-1)^{rr'} BA` for homogeneous
/// matrices of degrees r and r'. Normalized so that `[A,A] = 2 A^2` for
/// 1-form matrices.
pub fn bracket(a: &FormMatrix, b: &FormMatrix) -> Result<FormMatrix> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    let ra = homogeneous_degree_for_bracket(a)?;
    let rb = homogeneous_degree_for_bracket(b)?;
    let (ra, rb) = match (ra, rb) {
        (None, _) | (_, None) => return Ok(FormMatrix::zero(a.n)),
        (Some(x), Some(y)) => (x, y),
    };
    let ab = mat_mul_raw(a, b);
    let ba = mat_mul_raw(b, a);
    Ok(if (ra * rb) % 2 == 0 {
        ab.sub(&ba)
    } else {
        ab.add(&ba)
    })
}

/// Curvature `F(A) = dA - A^2` of a 1-form connection matrix.
pub fn curvature(a: &FormMatrix) -> Result<FormMatrix> {
    if !a.is_one_form_matrix() {
        return Err(Error::DegreeError(
            "curvature expects a matrix of 1-forms".into(),
        ));
    }
    Ok(a.d().sub(&mat_mul_raw(a, a)))
}

/// `true` iff `F(A) = 0`.
pub fn is_flat(a: &FormMatrix) -> Result<bool> {
    Ok(curvature(a)?.is_zero())
}

/// Gauge transform `A -> dg.g^{-1} + g A g^{-1}`.
///
/// The caller supplies the inverse explicitly; the pair is checked. Both
/// gauge matrices must be degree 0.
pub fn gauge(a: &FormMatrix, g: &FormMatrix, g_inv: &FormMatrix) -> Result<FormMatrix> {
    if a.n != g.n {
        return Err(Error::SizeMismatch(a.n, g.n));
    }
    if g.n != g_inv.n {
        return Err(Error::SizeMismatch(g.n, g_inv.n));
    }
    check_inverse_pair(g, g_inv)?;
    let dg_ginv = mat_mul_raw(&g.d(), g_inv);
    let conj = mat_mul_raw(&mat_mul_raw(g, a), g_inv);
    Ok(dg_ginv.add(&conj))
}

/// Validate a degree-0 inverse pair: `g . g_inv = 1`.
pub fn check_inverse_pair(g: &FormMatrix, g_inv: &FormMatrix) -> Result<()> {
    if g.n != g_inv.n {
        return Err(Error::SizeMismatch(g.n, g_inv.n));
    }
    if !g.is_zero_form_matrix() || !g_inv.is_zero_form_matrix() {
        return Err(Error::NotInversePair);
    }
    if mat_mul_raw(g, g_inv) != FormMatrix::identity(g.n) {
        return Err(Error::NotInversePair);
    }
    Ok(())
}

/// `(-1)^{ab}` as a rational.
pub fn koszul_sign(a: usize, b: usize) -> Rational {
    if (a * b) % 2 == 0 {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{const_term, poly_term, Frame};
    use crate::scalar::{rat_int, Poly};

    const X: u32 = 0;
    const Y: u32 = 1;

    fn nilpotent_x_dy() -> FormMatrix {
        // [[0, x dy], [0, 0]]
        let mut a = FormMatrix::zero(2);
        a.set(0, 1, Form::term(Frame::new(vec![Y]), Poly::var(X)));
        a
    }

    #[test]
    fn identity_is_neutral() {
        let a = nilpotent_x_dy();
        let id = FormMatrix::identity(2);
        assert_eq!(mat_mul(&a, &id).unwrap(), a);
        assert_eq!(mat_mul(&id, &a).unwrap(), a);
    }

    #[test]
    fn strictly_triangular_squares_to_zero() {
        let a = nilpotent_x_dy();
        assert!(mat_mul(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn size_mismatch_detected() {
        let a = FormMatrix::zero(2);
        let b = FormMatrix::zero(3);
        assert_eq!(mat_mul(&a, &b), Err(Error::SizeMismatch(2, 3)));
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(
            trace(&FormMatrix::identity(3)),
            Form::constant(rat_int(3))
        );
    }

    #[test]
    fn traceless_by_construction() {
        // [[a, b],[c, -a]] has zero trace
        let mut m = FormMatrix::zero(2);
        m.set(0, 0, Form::dvar(X));
        m.set(0, 1, Form::dvar(Y));
        m.set(1, 0, Form::dvar(X).add(&Form::dvar(Y)));
        m.set(1, 1, Form::dvar(X).neg());
        assert!(trace(&m).is_zero());
    }

    #[test]
    fn curvature_of_zero_and_rank_one() {
        assert!(curvature(&FormMatrix::zero(2)).unwrap().is_zero());
        // N=1, A = x dy: F = dx^dy
        let mut a = FormMatrix::zero(1);
        a.set(0, 0, Form::term(Frame::new(vec![Y]), Poly::var(X)));
        let f = curvature(&a).unwrap();
        assert_eq!(f.get(0, 0), &const_term(rat_int(1), &[X, Y]));
        assert!(!is_flat(&a).unwrap());
    }

    #[test]
    fn curvature_of_nilpotent() {
        let a = nilpotent_x_dy();
        let f = curvature(&a).unwrap();
        let mut expect = FormMatrix::zero(2);
        expect.set(0, 1, const_term(rat_int(1), &[X, Y]));
        assert_eq!(f, expect);
    }

    #[test]
    fn gauge_identity_is_neutral() {
        let a = nilpotent_x_dy();
        let id = FormMatrix::identity(2);
        assert_eq!(gauge(&a, &id, &id).unwrap(), a);
    }

    #[test]
    fn gauge_of_zero_by_shear() {
        // g = [[1, x],[0,1]], ginv = [[1, -x],[0,1]], A = 0 -> [[0, dx],[0,0]]
        let mut g = FormMatrix::identity(2);
        g.set(0, 1, Form::var(X));
        let mut ginv = FormMatrix::identity(2);
        ginv.set(0, 1, Form::var(X).neg());
        let out = gauge(&FormMatrix::zero(2), &g, &ginv).unwrap();
        let mut expect = FormMatrix::zero(2);
        expect.set(0, 1, Form::dvar(X));
        assert_eq!(out, expect);
        // and dg.g^{-1} is flat
        assert!(is_flat(&out).unwrap());
    }

    #[test]
    fn gauge_rejects_bad_pair() {
        let mut g = FormMatrix::identity(2);
        g.set(0, 1, Form::var(X));
        let claimed_inv = FormMatrix::identity(2);
        assert_eq!(
            gauge(&FormMatrix::zero(2), &g, &claimed_inv),
            Err(Error::NotInversePair)
        );
    }

    #[test]
    fn bracket_of_one_form_matrix_with_itself() {
        // [A, A] = 2 A^2 for generic-ish 1-form matrices
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, Form::dvar(X));
        a.set(0, 1, poly_term(Poly::var(Y), &[Y]));
        a.set(1, 0, Form::dvar(Y));
        a.set(1, 1, Form::dvar(X).neg());
        let br = bracket(&a, &a).unwrap();
        let sq = mat_mul(&a, &a).unwrap();
        assert_eq!(br, sq.scale(&rat_int(2)));
    }

    #[test]
    fn bracket_of_commuting_scalars_vanishes() {
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, Form::var(X));
        a.set(1, 1, Form::var(X));
        let mut b = FormMatrix::zero(2);
        b.set(0, 0, Form::var(Y));
        b.set(1, 1, Form::var(Y));
        assert!(bracket(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn bracket_rejects_mixed_degree() {
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, Form::var(X).add(&Form::dvar(X)));
        let b = FormMatrix::identity(2);
        assert!(matches!(
            bracket(&a, &b),
            Err(Error::InhomogeneousOperand(_))
        ));
    }
}
