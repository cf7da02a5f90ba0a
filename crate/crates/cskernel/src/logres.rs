//! Logarithmic-pole support: validation and splitting of log connections,
//! Poincare residues, the residue-exactness pipeline, and the Newton/Chern
//! classes of residue matrices.
//!
//! Divisors are the coordinate hyperplanes `{x_s = 0}` of the declared log
//! variables, so normal crossings is automatic. A form is log-shape valid
//! when every negative exponent is -1, sits on a log variable, and its term's
//! frame carries the matching differential -- exactly the `B dx/x + C` local
//! shape.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::{DegreeTag, Form};
use crate::homotopy::{primitive, PrimitiveOutcome, PrimitiveWitness};
use crate::invariants::elementary;
use crate::matform::{check_inverse_pair, is_flat, mat_mul_raw, trace, FormMatrix};
use crate::scalar::{rat, Monomial, Poly, Rational, Var};
use crate::transgression::transgress_newton;

/// Verify the log shape of a single form against a set of log variables.
pub fn log_shape_check(form: &Form, logvars: &BTreeSet<Var>) -> Result<()> {
    for (frame, p) in form.terms() {
        for (m, _) in p.terms() {
            for &(v, e) in m.exponents() {
                if e >= 0 {
                    continue;
                }
                if !logvars.contains(&v) {
                    return Err(Error::NotLogShape(format!(
                        "pole in non-log variable #{v} (term {m} on frame of degree {})",
                        frame.len()
                    )));
                }
                if e < -1 {
                    return Err(Error::NotLogShape(format!(
                        "exponent {e} of log variable #{v} in term {m}"
                    )));
                }
                if !frame.contains(v) {
                    return Err(Error::NotLogShape(format!(
                        "pole in #{v} without the matching differential (term {m})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A validated connection with logarithmic poles.
#[derive(Clone, Debug, PartialEq)]
pub struct LogConnection {
    num_vars: u32,
    logvars: Vec<Var>,
    matrix: FormMatrix,
    gauge: Option<(FormMatrix, FormMatrix)>,
}

impl LogConnection {
    /// Validate and build. `logvars` keeps its declared order (it fixes the
    /// divisor order for the Gamma classes); the matrix must consist of
    /// log-shape valid 1-forms, and a gauge pair, when present, must be a
    /// checked degree-0 inverse pair.
    pub fn new(
        num_vars: u32,
        logvars: Vec<Var>,
        matrix: FormMatrix,
        gauge: Option<(FormMatrix, FormMatrix)>,
    ) -> Result<Self> {
        assert!(logvars.iter().all(|&v| v < num_vars));
        if !matrix.is_one_form_matrix() {
            return Err(Error::DegreeError(
                "connection matrix entries must be 1-forms".into(),
            ));
        }
        let set: BTreeSet<Var> = logvars.iter().copied().collect();
        for e in matrix.entries() {
            log_shape_check(e, &set)?;
        }
        if let Some((g, ginv)) = &gauge {
            if g.size() != matrix.size() {
                return Err(Error::SizeMismatch(g.size(), matrix.size()));
            }
            check_inverse_pair(g, ginv)?;
        }
        Ok(LogConnection {
            num_vars,
            logvars,
            matrix,
            gauge,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn logvars(&self) -> &[Var] {
        &self.logvars
    }

    pub fn is_logvar(&self, v: Var) -> bool {
        self.logvars.contains(&v)
    }

    pub fn matrix(&self) -> &FormMatrix {
        &self.matrix
    }

    pub fn gauge(&self) -> Option<&(FormMatrix, FormMatrix)> {
        self.gauge.as_ref()
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }
}

/// Split one log-shape valid form as `(dx_s/x_s) ^ alpha + beta`.
///
/// The `dx_s/x_s` factor of each polar term is moved to the front of the
/// frame, absorbing the permutation sign. Returns `(alpha, beta)`; `alpha`
/// is pole-free in `x_s` and its frames avoid `dx_s`, `beta` has no
/// `dx_s/x_s` part.
pub fn log_split_form(form: &Form, s: Var) -> Result<(Form, Form)> {
    let mut alpha = Form::zero();
    let mut beta = Form::zero();
    for (frame, p) in form.terms() {
        for (m, c) in p.terms() {
            let e = m.exponent(s);
            if e < -1 {
                return Err(Error::NotLogShape(format!(
                    "exponent {e} of log variable #{s} in term {m}"
                )));
            }
            if e == -1 {
                let pos = match frame.position(s) {
                    Some(pos) => pos,
                    None => {
                        return Err(Error::NotLogShape(format!(
                            "pole in #{s} without the matching differential (term {m})"
                        )))
                    }
                };
                let cleared = m.mul(&Monomial::var(s)); // exponent -1 -> 0
                let coeff = if pos % 2 == 0 { c.clone() } else { -c.clone() };
                alpha = alpha.add(&Form::term(
                    frame.remove_at(pos),
                    Poly::monomial(cleared, coeff),
                ));
            } else {
                beta = beta.add(&Form::term(frame.clone(), Poly::monomial(m.clone(), c.clone())));
            }
        }
    }
    Ok((alpha, beta))
}

/// Split a connection matrix as `A = B_s dx_s/x_s + remainder` entrywise.
pub fn log_split(a: &FormMatrix, s: Var) -> Result<(FormMatrix, FormMatrix)> {
    let mut bs = FormMatrix::zero(a.size());
    let mut rem = FormMatrix::zero(a.size());
    for i in 0..a.size() {
        for j in 0..a.size() {
            let (alpha, beta) = log_split_form(a.get(i, j), s)?;
            bs.set(i, j, alpha);
            rem.set(i, j, beta);
        }
    }
    Ok((bs, rem))
}

/// Poincare residue along `{x_s = 0}`: the `dx_s/x_s` coefficient under the
/// frame-front convention, restricted to the divisor.
pub fn residue(form: &Form, s: Var) -> Result<Form> {
    let (alpha, _) = log_split_form(form, s)?;
    alpha.restrict(s)
}

/// Entrywise residue of the connection matrix: the matrix `Gamma_s`.
pub fn residue_matrix(l: &LogConnection, s: Var) -> Result<FormMatrix> {
    if !l.is_logvar(s) {
        return Err(Error::NotLogVariable(s));
    }
    l.matrix().try_map(|e| residue(e, s))
}

/// Residue matrices of all declared divisors, in declared order.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSet {
    pub divisors: Vec<(Var, FormMatrix)>,
}

impl GammaSet {
    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }
}

/// Collect the residue matrix of every declared log variable.
pub fn gamma_set(l: &LogConnection) -> Result<GammaSet> {
    let mut divisors = Vec::with_capacity(l.logvars().len());
    for &s in l.logvars() {
        divisors.push((s, residue_matrix(l, s)?));
    }
    Ok(GammaSet { divisors })
}

/// The residue-exactness pipeline: for a flat log connection, transgress
/// the power sum `p_n`, take the residue along `{x_s = 0}` and produce a
/// verified primitive on the divisor.
///
/// A non-closed residue or a failing witness would falsify the kernel and is
/// surfaced as an error, never swallowed.
pub fn cs_residue_check(l: &LogConnection, n: u32, s: Var) -> Result<PrimitiveWitness> {
    if !l.is_logvar(s) {
        return Err(Error::NotLogVariable(s));
    }
    if !is_flat(l.matrix())? {
        return Err(Error::NotFlat);
    }
    let w = transgress_newton(l.matrix(), n)?.form;
    let res = residue(&w, s)?;
    if res.is_zero() {
        return Ok(PrimitiveWitness {
            primitive: Form::zero(),
            target: Form::zero(),
        });
    }
    match primitive(&res)? {
        PrimitiveOutcome::Witness(wit) => Ok(wit),
        PrimitiveOutcome::NotClosed { .. } => Err(Error::ResidueNotClosed(format!(
            "residue of the degree-{n} transgression along #{s}"
        ))),
    }
}

/// Formal polynomial in divisor symbols with polynomial coefficients.
///
/// Keys are exponent vectors over the declared divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePoly {
    num_divisors: usize,
    terms: BTreeMap<Vec<u32>, Poly>,
}

impl CyclePoly {
    pub fn zero(num_divisors: usize) -> Self {
        CyclePoly {
            num_divisors,
            terms: BTreeMap::new(),
        }
    }

    pub fn num_divisors(&self) -> usize {
        self.num_divisors
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Poly)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, exps: Vec<u32>, coeff: Poly) {
        debug_assert_eq!(exps.len(), self.num_divisors);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &CyclePoly) -> CyclePoly {
        assert_eq!(self.num_divisors, other.num_divisors);
        let mut out = self.clone();
        for (e, p) in &other.terms {
            out.insert(e.clone(), p.clone());
        }
        out
    }

    pub fn mul(&self, other: &CyclePoly) -> CyclePoly {
        assert_eq!(self.num_divisors, other.num_divisors);
        let mut out = CyclePoly::zero(self.num_divisors);
        for (e1, p1) in &self.terms {
            for (e2, p2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exps, p1.mul(p2));
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> CyclePoly {
        let mut out = CyclePoly::zero(self.num_divisors);
        for (e, p) in &self.terms {
            out.insert(e.clone(), p.scale(r));
        }
        out
    }
}

impl fmt::Display for CyclePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, p)| format!("({p})*D^{e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_degree_zero(gamma: &GammaSet) -> Result<()> {
    for (s, m) in &gamma.divisors {
        if !m.is_zero_form_matrix() {
            return Err(Error::DegreeError(format!(
                "residue matrix along #{s} is not degree 0"
            )));
        }
    }
    Ok(())
}

fn multinomial(total: u32, parts: &[u32]) -> Rational {
    let mut num = BigInt::one();
    for k in 2..=total {
        num *= k;
    }
    let mut den = BigInt::one();
    for &p in parts {
        for k in 2..=p {
            den *= k;
        }
    }
    Rational::new(num, den)
}

fn compositions(total: u32, slots: usize) -> Vec<Vec<u32>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, slots - 1) {
            let mut c = Vec::with_capacity(slots);
            c.push(first);
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

/// The Newton class of the residue set:
/// `N_i(Gamma) = (-1)^i sum_{|alpha| = i} multinomial(i; alpha)
///  Tr(Gamma_1^{a_1} ... Gamma_S^{a_S}) [D_1]^{a_1} ... [D_S]^{a_S}`,
/// matrix powers composed in declared divisor order.
pub fn gamma_newton(gamma: &GammaSet, i: u32) -> Result<CyclePoly> {
    assert!(i >= 1);
    check_degree_zero(gamma)?;
    let s = gamma.len();
    let mut out = CyclePoly::zero(s);
    let n = gamma
        .divisors
        .first()
        .map(|(_, m)| m.size())
        .unwrap_or(0);
    let sign = if i % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
    for alpha in compositions(i, s) {
        let mut prod = FormMatrix::identity(n);
        for (slot, &(_, ref m)) in gamma.divisors.iter().enumerate() {
            for _ in 0..alpha[slot] {
                prod = mat_mul_raw(&prod, m);
            }
        }
        let tr = trace(&prod)
            .as_poly()
            .expect("trace of a degree-0 matrix is a 0-form");
        let coeff = multinomial(i, &alpha) * &sign;
        out.insert(alpha, tr.scale(&coeff));
    }
    Ok(out)
}

/// Which formula to use for the Chern classes of the residues.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChernConvention {
    /// Elementary symmetric functions of the Newton classes.
    Standard,
    /// The literal displayed degree-2 formula; other degrees are refused.
    Paper,
}

/// Chern class of the residue set in the chosen convention.
pub fn gamma_chern(gamma: &GammaSet, i: u32, convention: ChernConvention) -> Result<CyclePoly> {
    assert!(i >= 1);
    check_degree_zero(gamma)?;
    match convention {
        ChernConvention::Standard => {
            // e_i with p_l replaced by N_l(Gamma)
            let e = elementary(i);
            let mut newtons: BTreeMap<u32, CyclePoly> = BTreeMap::new();
            let mut out = CyclePoly::zero(gamma.len());
            for (mono, c) in e.terms() {
                let mut factor: Option<CyclePoly> = None;
                for &l in mono.indices() {
                    if !newtons.contains_key(&l) {
                        newtons.insert(l, gamma_newton(gamma, l)?);
                    }
                    let n_l = &newtons[&l];
                    factor = Some(match factor {
                        None => n_l.clone(),
                        Some(f) => f.mul(n_l),
                    });
                }
                let factor = factor.expect("e_i has no constant monomial for i >= 1");
                out = out.add(&factor.scale(c));
            }
            Ok(out)
        }
        ChernConvention::Paper => {
            if i != 2 {
                return Err(Error::UnsupportedDegree(i));
            }
            let s = gamma.len();
            // (1/2) [ (sum_s Tr(G_s) D_s)^2
            //         - 2 ( sum_s Tr(G_s^2) D_s^2 + 2 sum_{s<t} Tr(G_s G_t) D_s D_t ) ]
            let mut first = CyclePoly::zero(s);
            for (slot, (_, m)) in gamma.divisors.iter().enumerate() {
                let mut exps = vec![0u32; s];
                exps[slot] = 1;
                first.insert(exps, trace(m).as_poly().unwrap());
            }
            let first_sq = first.mul(&first);
            let mut second = CyclePoly::zero(s);
            for (slot, (_, m)) in gamma.divisors.iter().enumerate() {
                let mut exps = vec![0u32; s];
                exps[slot] = 2;
                second.insert(exps, trace(&mat_mul_raw(m, m)).as_poly().unwrap());
            }
            for (sl1, (_, m1)) in gamma.divisors.iter().enumerate() {
                for (sl2, (_, m2)) in gamma.divisors.iter().enumerate().skip(sl1 + 1) {
                    let mut exps = vec![0u32; s];
                    exps[sl1] = 1;
                    exps[sl2] = 1;
                    second.insert(
                        exps,
                        trace(&mat_mul_raw(m1, m2)).as_poly().unwrap().scale(&rat(2, 1)),
                    );
                }
            }
            Ok(first_sq.add(&second.scale(&rat(-2, 1))).scale(&rat(1, 2)))
        }
    }
}

/// The log 1-form `dx_s/x_s` wedged onto every entry from the right.
pub fn wedge_dlog(m: &FormMatrix, s: Var) -> FormMatrix {
    let dlog = Form::dlog(s);
    m.map(|e| e.wedge(&dlog))
}

/// Degree tag helper for tests: residues of 1-form matrices are functions.
pub fn is_degree_zero(m: &FormMatrix) -> bool {
    matches!(m.degree_tag(), DegreeTag::Zero | DegreeTag::Homogeneous(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Frame;
    use crate::matform::gauge;
    use crate::scalar::rat_int;

    const X: u32 = 0;
    const Y: u32 = 1;

    fn dlog_x() -> Form {
        Form::dlog(X)
    }

    #[test]
    fn log_split_pure_pole() {
        // A = [[dx/x, 0],[0,0]] -> B = [[1,0],[0,0]], remainder = 0
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, dlog_x());
        let (b, rem) = log_split(&a, X).unwrap();
        assert_eq!(b.get(0, 0), &Form::one());
        assert!(rem.is_zero());
    }

    #[test]
    fn log_split_mixed_entry() {
        // A = [[y dx/x + dy, 0],[0,0]] -> B = [[y,...]], remainder = [[dy,...]]
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, dlog_x().scale_poly(&Poly::var(Y)).add(&Form::dvar(Y)));
        let (b, rem) = log_split(&a, X).unwrap();
        assert_eq!(b.get(0, 0), &Form::from_poly(Poly::var(Y)));
        assert_eq!(rem.get(0, 0), &Form::dvar(Y));
        // reconstruction: A = B dx/x + remainder
        let rebuilt = wedge_dlog(&b, X).add(&rem);
        assert_eq!(rebuilt, a);
    }

    #[test]
    fn log_split_rejects_double_pole() {
        let mut a = FormMatrix::zero(1);
        let m = Monomial::from_pairs([(X as u32, -2)]);
        a.set(
            0,
            0,
            Form::term(Frame::new(vec![X]), Poly::monomial(m, rat_int(1))),
        );
        assert!(matches!(log_split(&a, X), Err(Error::NotLogShape(_))));
    }

    #[test]
    fn residue_examples() {
        // residue(f dx/x, x) = f|_{x=0}
        let f = Poly::var(Y).add(&Poly::var(X));
        let w = dlog_x().scale_poly(&f);
        assert_eq!(residue(&w, X).unwrap(), Form::from_poly(Poly::var(Y)));
        // residue(dy, x) = 0
        assert!(residue(&Form::dvar(Y), X).unwrap().is_zero());
        // residue((dx/x)^(y dy), x) = y dy
        let w = dlog_x().wedge(&Form::term(Frame::new(vec![Y]), Poly::var(Y)));
        assert_eq!(
            residue(&w, X).unwrap(),
            Form::term(Frame::new(vec![Y]), Poly::var(Y))
        );
    }

    #[test]
    fn residue_matrix_of_diagonal_log() {
        // A = diag(dx/x, 0) -> Gamma = diag(1, 0)
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, dlog_x());
        let l = LogConnection::new(2, vec![X], a, None).unwrap();
        let g = residue_matrix(&l, X).unwrap();
        assert_eq!(g.get(0, 0), &Form::one());
        assert!(g.get(1, 1).is_zero());
        // pole-free connection has zero residue matrix
        let mut b = FormMatrix::zero(2);
        b.set(0, 1, Form::dvar(Y));
        let l2 = LogConnection::new(2, vec![X], b, None).unwrap();
        assert!(residue_matrix(&l2, X).unwrap().is_zero());
    }

    #[test]
    fn residue_matrix_of_monomial_gauge() {
        // g = diag(x, 1): dg g^{-1} = diag(dx/x, 0), Gamma = diag(1, 0)
        let mut g = FormMatrix::identity(2);
        g.set(0, 0, Form::var(X));
        let mut ginv = FormMatrix::identity(2);
        ginv.set(
            0,
            0,
            Form::from_poly(Poly::monomial(Monomial::from_pairs([(X, -1)]), rat(1, 1))),
        );
        let a = gauge(&FormMatrix::zero(2), &g, &ginv).unwrap();
        let l = LogConnection::new(2, vec![X], a, Some((g, ginv))).unwrap();
        let gamma = residue_matrix(&l, X).unwrap();
        assert_eq!(gamma.get(0, 0), &Form::one());
        assert!(gamma.get(1, 1).is_zero());
    }

    #[test]
    fn pure_pole_connection_has_zero_class() {
        // A = B dx/x with constant B is flat; w_2 = 0, residue 0, witness 0
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, dlog_x().scale(&rat_int(3)));
        a.set(0, 1, dlog_x());
        let l = LogConnection::new(1, vec![X], a, None).unwrap();
        let wit = cs_residue_check(&l, 2, X).unwrap();
        assert!(wit.primitive.is_zero());
        assert!(wit.target.is_zero());
    }

    #[test]
    fn gamma_newton_single_divisor_diagonal() {
        // Gamma = diag(a, b): N_1 = -(a+b)[D], N_2 = (a^2+b^2)[D]^2
        let a = Poly::var(2);
        let b = Poly::var(3);
        let mut m = FormMatrix::zero(2);
        m.set(0, 0, Form::from_poly(a.clone()));
        m.set(1, 1, Form::from_poly(b.clone()));
        let gamma = GammaSet {
            divisors: vec![(X, m)],
        };
        let n1 = gamma_newton(&gamma, 1).unwrap();
        let mut expect1 = CyclePoly::zero(1);
        expect1.insert(vec![1], a.add(&b).neg());
        assert_eq!(n1, expect1);
        let n2 = gamma_newton(&gamma, 2).unwrap();
        let mut expect2 = CyclePoly::zero(1);
        expect2.insert(vec![2], a.mul(&a).add(&b.mul(&b)));
        assert_eq!(n2, expect2);
    }

    #[test]
    fn gamma_newton_two_scalar_divisors() {
        // Gamma_1 = Gamma_2 = (1): N_2 = [D1]^2 + 2[D1][D2] + [D2]^2
        let one = FormMatrix::identity(1);
        let gamma = GammaSet {
            divisors: vec![(X, one.clone()), (Y, one)],
        };
        let n2 = gamma_newton(&gamma, 2).unwrap();
        let mut expect = CyclePoly::zero(2);
        expect.insert(vec![2, 0], Poly::one());
        expect.insert(vec![1, 1], Poly::int(2));
        expect.insert(vec![0, 2], Poly::one());
        assert_eq!(n2, expect);
    }

    #[test]
    fn gamma_classes_vanish_on_nilpotent_residues() {
        let mut m1 = FormMatrix::zero(3);
        m1.set(0, 1, Form::from_poly(Poly::var(2)));
        m1.set(1, 2, Form::from_poly(Poly::var(3)));
        let mut m2 = FormMatrix::zero(3);
        m2.set(0, 2, Form::one());
        let gamma = GammaSet {
            divisors: vec![(X, m1), (Y, m2)],
        };
        for i in 1..=4 {
            assert!(gamma_newton(&gamma, i).unwrap().is_zero());
        }
        for i in 1..=3 {
            assert!(gamma_chern(&gamma, i, ChernConvention::Standard)
                .unwrap()
                .is_zero());
        }
        assert!(gamma_chern(&gamma, 2, ChernConvention::Paper)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn gamma_chern_conventions_differ_on_diagonal() {
        let a = Poly::var(2);
        let b = Poly::var(3);
        let mut m = FormMatrix::zero(2);
        m.set(0, 0, Form::from_poly(a.clone()));
        m.set(1, 1, Form::from_poly(b.clone()));
        let gamma = GammaSet {
            divisors: vec![(X, m)],
        };
        // paper convention: -(1/2)(a-b)^2 [D]^2
        let paper = gamma_chern(&gamma, 2, ChernConvention::Paper).unwrap();
        let mut expect = CyclePoly::zero(1);
        let diff = a.sub(&b);
        expect.insert(vec![2], diff.mul(&diff).scale(&rat(-1, 2)));
        assert_eq!(paper, expect);
        // standard convention: e_2 of the Newton classes = ab [D]^2
        let std = gamma_chern(&gamma, 2, ChernConvention::Standard).unwrap();
        let mut expect = CyclePoly::zero(1);
        expect.insert(vec![2], a.mul(&b));
        assert_eq!(std, expect);
        assert_ne!(paper, std);
    }

    #[test]
    fn gamma_chern_paper_rejects_other_degrees() {
        let gamma = GammaSet {
            divisors: vec![(X, FormMatrix::identity(2))],
        };
        assert_eq!(
            gamma_chern(&gamma, 3, ChernConvention::Paper),
            Err(Error::UnsupportedDegree(3))
        );
    }

    #[test]
    fn log_connection_rejects_bad_shapes() {
        // pole without differential
        let mut a = FormMatrix::zero(1);
        a.set(
            0,
            0,
            Form::term(
                Frame::new(vec![Y]),
                Poly::monomial(Monomial::from_pairs([(X, -1)]), rat_int(1)),
            ),
        );
        assert!(matches!(
            LogConnection::new(2, vec![X], a, None),
            Err(Error::NotLogShape(_))
        ));
        // pole in a non-log variable
        let mut a = FormMatrix::zero(1);
        a.set(0, 0, Form::dlog(Y));
        assert!(matches!(
            LogConnection::new(2, vec![X], a, None),
            Err(Error::NotLogShape(_))
        ));
        // 2-form entry
        let mut a = FormMatrix::zero(1);
        a.set(0, 0, crate::exterior::const_term(rat_int(1), &[X, Y]));
        assert!(matches!(
            LogConnection::new(2, vec![X], a, None),
            Err(Error::DegreeError(_))
        ));
    }
}
