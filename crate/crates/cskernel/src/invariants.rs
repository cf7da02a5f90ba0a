//! Invariant polynomials in the Newton (power-sum trace) basis.
//!
//! The generator `p_l` stands for the map `M -> Tr(M^l)`. Elementary
//! symmetric invariants are produced through Newton's identities, and
//! evaluation at a curvature matrix yields Chern-Weil forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{DegreeTag, Form};
use crate::matform::{curvature, mat_mul_raw, mat_pow, trace, FormMatrix};
use crate::scalar::{rat, rat_int, Poly, Rational};

/// Multiset of Newton generator indices, sorted ascending.
/// The empty multiset is the constant monomial.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PowerMono(Vec<u32>);

impl PowerMono {
    pub fn one() -> Self {
        PowerMono(Vec::new())
    }

    pub fn newton(l: u32) -> Self {
        assert!(l >= 1);
        PowerMono(vec![l])
    }

    pub fn from_indices(mut idx: Vec<u32>) -> Self {
        debug_assert!(idx.iter().all(|&l| l >= 1));
        idx.sort_unstable();
        PowerMono(idx)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// Sum of the generator indices.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &PowerMono) -> PowerMono {
        let mut idx = self.0.clone();
        idx.extend_from_slice(&other.0);
        PowerMono::from_indices(idx)
    }
}

impl Ord for PowerMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PowerMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PowerMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("p{l}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Invariant polynomial: rational combination of Newton monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct InvPoly {
    terms: BTreeMap<PowerMono, Rational>,
}

impl InvPoly {
    pub fn zero() -> Self {
        InvPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        InvPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(PowerMono::one(), c);
        }
        InvPoly { terms }
    }

    /// The generator `p_l`.
    pub fn newton(l: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(PowerMono::newton(l), Rational::one());
        InvPoly { terms }
    }

    pub fn monomial(m: PowerMono, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        InvPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PowerMono, &Rational)> {
        self.terms.iter()
    }

    fn insert_term(terms: &mut BTreeMap<PowerMono, Rational>, m: PowerMono, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &InvPoly) -> InvPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        InvPoly { terms }
    }

    pub fn neg(&self) -> InvPoly {
        InvPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &InvPoly) -> InvPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &InvPoly) -> InvPoly {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                Self::insert_term(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        InvPoly { terms }
    }

    pub fn scale(&self, r: &Rational) -> InvPoly {
        if r.is_zero() {
            return InvPoly::zero();
        }
        InvPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    /// Common total degree of all monomials, if homogeneous.
    pub fn degree_tag(&self) -> DegreeTag {
        let mut tag = DegreeTag::Zero;
        for m in self.terms.keys() {
            tag = tag.merge(DegreeTag::Homogeneous(m.degree() as usize));
            if tag == DegreeTag::Mixed {
                break;
            }
        }
        tag
    }
}

impl fmt::Display for InvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("({c})*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Tr(M^l)`: evaluation of the Newton generator at a homogeneous matrix of
/// even degree.
pub fn newton_eval(l: u32, m: &FormMatrix) -> Result<Form> {
    if l == 0 {
        return Ok(Form::constant(rat_int(m.size() as i64)));
    }
    if !m.degree_tag().is_even() {
        return Err(Error::DegreeError(
            "newton_eval expects a homogeneous matrix of even degree".into(),
        ));
    }
    Ok(trace(&mat_pow(m, l)))
}

/// The elementary symmetric invariant `e_n` in the Newton basis, via
/// Newton's identities `e_n = (1/n) * sum_{i=1..n} (-1)^{i-1} e_{n-i} p_i`.
pub fn elementary(n: u32) -> InvPoly {
    let mut es: Vec<InvPoly> = vec![InvPoly::one()];
    for k in 1..=n {
        let mut acc = InvPoly::zero();
        for i in 1..=k {
            let term = es[(k - i) as usize].mul(&InvPoly::newton(i));
            acc = if i % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        es.push(acc.scale(&rat(1, k as i64)));
    }
    es.pop().unwrap()
}

/// Chern-Weil form `P(F(A))`: each Newton monomial contributes the wedge
/// product of its trace-power factors evaluated at the curvature.
pub fn chern_weil(a: &FormMatrix, p: &InvPoly) -> Result<Form> {
    let f = curvature(a)?;
    eval_at_matrix(p, &f)
}

/// Evaluate an invariant polynomial at a single (even-degree) matrix.
pub fn eval_at_matrix(p: &InvPoly, m: &FormMatrix) -> Result<Form> {
    let mut acc = Form::zero();
    for (mono, c) in p.terms() {
        let mut factor = Form::constant(c.clone());
        for &l in mono.indices() {
            factor = factor.wedge(&newton_eval(l, m)?);
        }
        acc = acc.add(&factor);
    }
    Ok(acc)
}

/// Substitute `p_l -> sum_i entries[i]^l` (evaluation on a diagonal matrix).
pub fn eval_on_diagonal(p: &InvPoly, entries: &[Poly]) -> Poly {
    let mut acc = Poly::zero();
    for (mono, c) in p.terms() {
        let mut factor = Poly::constant(c.clone());
        for &l in mono.indices() {
            let mut power_sum = Poly::zero();
            for e in entries {
                power_sum = power_sum.add(&e.pow(l));
            }
            factor = factor.mul(&power_sum);
        }
        acc = acc.add(&factor);
    }
    acc
}

/// Symmetrized trace evaluation of the degree-`l` power sum on one matrix
/// per tensor slot: the average over all slot permutations of the trace of
/// the product, each weighted with the Koszul sign of the permutation on the
/// arguments' form degrees. All arguments must be homogeneous.
pub fn sym_trace_eval(args: &[FormMatrix]) -> Result<Form> {
    let l = args.len();
    if l == 0 {
        return Ok(Form::zero());
    }
    let mut degs = Vec::with_capacity(l);
    for a in args {
        match a.degree_tag() {
            DegreeTag::Zero => degs.push(0usize),
            DegreeTag::Homogeneous(d) => degs.push(d),
            DegreeTag::Mixed => {
                return Err(Error::InhomogeneousOperand(
                    "sym_trace_eval needs homogeneous slots".into(),
                ))
            }
        }
    }
    let mut acc = Form::zero();
    let mut perm: Vec<usize> = (0..l).collect();
    permute_and_sum(&mut perm, 0, args, &degs, &mut acc);
    let mut factorial = 1i64;
    for k in 2..=l as i64 {
        factorial *= k;
    }
    Ok(acc.scale(&rat(1, factorial)))
}

fn permute_and_sum(
    perm: &mut Vec<usize>,
    k: usize,
    args: &[FormMatrix],
    degs: &[usize],
    acc: &mut Form,
) {
    let l = perm.len();
    if k == l {
        // Koszul sign: product over inversion pairs of (-1)^{d_i d_j}
        let mut sign = 1i64;
        for a in 0..l {
            for b in (a + 1)..l {
                if perm[a] > perm[b] && degs[perm[a]] % 2 == 1 && degs[perm[b]] % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        let mut prod = args[perm[0]].clone();
        for &idx in &perm[1..] {
            prod = mat_mul_raw(&prod, &args[idx]);
        }
        let t = trace(&prod);
        *acc = acc.add(&t.scale(&rat_int(sign)));
        return;
    }
    for i in k..l {
        perm.swap(k, i);
        permute_and_sum(perm, k + 1, args, degs, acc);
        perm.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Frame;
    use crate::matform::is_flat;
    use crate::scalar::rat_int;

    #[test]
    fn elementary_small_cases() {
        // e1 = p1
        assert_eq!(elementary(1), InvPoly::newton(1));
        // e2 = (1/2) p1^2 - (1/2) p2
        let e2 = elementary(2);
        let expect = InvPoly::monomial(PowerMono::from_indices(vec![1, 1]), rat(1, 2))
            .add(&InvPoly::monomial(PowerMono::newton(2), rat(-1, 2)));
        assert_eq!(e2, expect);
        // e3 = (1/6) p1^3 - (1/2) p1 p2 + (1/3) p3
        let e3 = elementary(3);
        let expect = InvPoly::monomial(PowerMono::from_indices(vec![1, 1, 1]), rat(1, 6))
            .add(&InvPoly::monomial(
                PowerMono::from_indices(vec![1, 2]),
                rat(-1, 2),
            ))
            .add(&InvPoly::monomial(PowerMono::newton(3), rat(1, 3)));
        assert_eq!(e3, expect);
    }

    #[test]
    fn eval_on_diagonal_defining_property() {
        let a = Poly::var(0);
        let b = Poly::var(1);
        let c = Poly::var(2);
        // e2(a, b) = ab
        assert_eq!(
            eval_on_diagonal(&elementary(2), &[a.clone(), b.clone()]),
            a.mul(&b)
        );
        // p2(a, b) = a^2 + b^2
        assert_eq!(
            eval_on_diagonal(&InvPoly::newton(2), &[a.clone(), b.clone()]),
            a.mul(&a).add(&b.mul(&b))
        );
        // e3(a, b, c) = abc
        assert_eq!(
            eval_on_diagonal(&elementary(3), &[a.clone(), b.clone(), c.clone()]),
            a.mul(&b).mul(&c)
        );
    }

    #[test]
    fn newton_eval_basics() {
        assert!(newton_eval(1, &FormMatrix::zero(2)).unwrap().is_zero());
        // strictly triangular curvature has zero trace
        let mut a = FormMatrix::zero(2);
        a.set(0, 1, Form::term(Frame::new(vec![1]), Poly::var(0)));
        let f = curvature(&a).unwrap();
        assert!(newton_eval(1, &f).unwrap().is_zero());
    }

    #[test]
    fn newton_eval_squares_of_degenerate_frames_vanish() {
        // A = diag(x dy, z dy) in 3 variables: Tr F^2 = (dx^dy)^2 + (dz^dy)^2 = 0
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, Form::term(Frame::new(vec![1]), Poly::var(0)));
        a.set(1, 1, Form::term(Frame::new(vec![1]), Poly::var(2)));
        let f = curvature(&a).unwrap();
        assert!(newton_eval(2, &f).unwrap().is_zero());
    }

    #[test]
    fn newton_eval_rejects_odd_degree() {
        let mut a = FormMatrix::zero(2);
        a.set(0, 0, Form::dvar(0));
        assert!(matches!(newton_eval(2, &a), Err(Error::DegreeError(_))));
    }

    #[test]
    fn chern_weil_flat_vanishes() {
        // dg.g^{-1} for a shear is flat, so every constant-free P kills it
        let mut g = FormMatrix::identity(2);
        g.set(0, 1, Form::var(0));
        let mut ginv = FormMatrix::identity(2);
        ginv.set(0, 1, Form::var(0).neg());
        let a = crate::matform::gauge(&FormMatrix::zero(2), &g, &ginv).unwrap();
        assert!(is_flat(&a).unwrap());
        for p in [InvPoly::newton(2), elementary(2), elementary(3)] {
            assert!(chern_weil(&a, &p).unwrap().is_zero());
        }
    }

    #[test]
    fn chern_weil_rank_one() {
        // N=1, A = x dy, P = p1 -> dx^dy
        let mut a = FormMatrix::zero(1);
        a.set(0, 0, Form::term(Frame::new(vec![1]), Poly::var(0)));
        let out = chern_weil(&a, &InvPoly::newton(1)).unwrap();
        assert_eq!(out, crate::exterior::const_term(rat_int(1), &[0, 1]));
    }
}
