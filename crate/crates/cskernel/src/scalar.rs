//! Exact scalars and sparse multivariate polynomials.
//!
//! Coefficients are arbitrary-precision rationals. Monomials map variable
//! indices to integer exponents; negative exponents are structurally allowed
//! so that the single pole shape `dx/x` (and the Laurent-monomial gauge
//! inverses that produce it) can be represented. Which negative exponents are
//! *legal* is decided by the callers that own the contracts (`exterior::Form`
//! restriction, `logres` log-shape validation, `homotopy` pole rejection).
//!
//! The module also provides polynomials in the formal transgression parameter
//! `t` ([`TPoly`]) with exact integration over the unit interval.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar; always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Variable index into the declared variable order.
pub type Var = u32;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sparse exponent vector: sorted by variable index, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(Var, i32)>,
}

impl Monomial {
    /// The empty monomial (constant 1).
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// Single variable to the first power.
    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Build from arbitrary (variable, exponent) pairs; merges duplicates,
    /// drops zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut map: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            let slot = map.entry(v).or_insert(0);
            *slot += e;
        }
        Monomial {
            exps: map.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(Var, i32)] {
        &self.exps
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.exps
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Sum of exponents (negative exponents count negatively).
    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.exps.iter().any(|&(_, e)| e < 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.exps.iter().chain(other.exps.iter()).copied())
    }

    /// Raise every exponent to the `k`-th multiple (Laurent power).
    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }
}

/// Graded-lexicographic order in the declared variable order: total degree
/// first, then the first variable where the exponents differ decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut i = 0;
        let mut j = 0;
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        // self has an exponent at an earlier variable
                        return ea.cmp(&0);
                    } else {
                        return 0.cmp(&eb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("#{v}")
                } else {
                    format!("#{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Canonical form: no zero coefficients, terms ordered graded-lex. Equality
/// is structural equality of the canonical form.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat_int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded-lex ascending) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The unique term if this polynomial is a (nonzero) monomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The constant value if this polynomial has no variable part.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|m| m.has_negative_exponent())
    }

    /// Smallest exponent with which `v` occurs (0 if absent).
    pub fn min_exponent(&self, v: Var) -> i32 {
        self.terms
            .keys()
            .map(|m| m.exponent(v))
            .min()
            .unwrap_or(0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) != 0)
    }

    /// Largest variable index occurring (for sizing contexts).
    pub fn max_var(&self) -> Option<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|&(v, _)| v))
            .max()
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
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

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                Self::insert_term(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        Poly { terms }
    }

    pub fn scale(&self, r: &Rational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `v` (Laurent rule `d x^k = k x^{k-1}`).
    pub fn derivative(&self, v: Var) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let dm = Monomial::from_pairs(
                m.exponents()
                    .iter()
                    .copied()
                    .map(|(w, ew)| if w == v { (w, ew - 1) } else { (w, ew) }),
            );
            Self::insert_term(&mut terms, dm, c * rat_int(e as i64));
        }
        Poly { terms }
    }

    /// Substitute polynomials for variables; unbound variables pass through.
    ///
    /// A variable occurring with negative exponent may only be bound to a
    /// nonzero monomial (the result must stay inside the Laurent ring).
    pub fn substitute(&self, bindings: &BTreeMap<Var, Poly>) -> Result<Poly> {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut passthrough: Vec<(Var, i32)> = Vec::new();
            let mut factor = Poly::constant(c.clone());
            for &(v, e) in m.exponents() {
                match bindings.get(&v) {
                    None => passthrough.push((v, e)),
                    Some(b) => {
                        if e >= 0 {
                            factor = factor.mul(&b.pow(e as u32));
                        } else if b.is_zero() {
                            return Err(Error::PoleAtSubstitution(v));
                        } else if let Some((bm, bc)) = b.as_monomial() {
                            let part = Poly::monomial(bm.pow(e), bc.clone().pow(e));
                            factor = factor.mul(&part);
                        } else {
                            return Err(Error::NonInvertibleSubstitution(v));
                        }
                    }
                }
            }
            let carried = Poly::monomial(Monomial::from_pairs(passthrough), Rational::one());
            acc = acc.add(&factor.mul(&carried));
        }
        Ok(acc)
    }

    /// Substitute zero for one variable.
    pub fn substitute_zero(&self, v: Var) -> Result<Poly> {
        let mut bindings = BTreeMap::new();
        bindings.insert(v, Poly::zero());
        self.substitute(&bindings)
    }

    /// Split into a `t`-polynomial by total degree: slot `k` holds the sum of
    /// the degree-`k` terms. Semantically this is the scaling substitution
    /// `x_i -> t*x_i` for every variable. Requires a pole-free polynomial.
    pub fn grade_by_total_degree(&self) -> TPoly<Poly> {
        debug_assert!(!self.has_negative_exponent());
        let mut slots: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.total_degree().max(0) as usize;
            if slots.len() <= d {
                slots.resize(d + 1, Poly::zero());
            }
            slots[d] = slots[d].add(&Poly::monomial(m.clone(), c.clone()));
        }
        TPoly::new(slots)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{c}")
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coefficient of a [`TPoly`]: anything that can be added, scaled and zeroed
/// in its own shape.
pub trait TCoeff: Clone {
    fn tc_add(&self, other: &Self) -> Self;
    fn tc_scale(&self, r: &Rational) -> Self;
    fn tc_zero_like(&self) -> Self;
    fn tc_is_zero(&self) -> bool;
}

impl TCoeff for Rational {
    fn tc_add(&self, other: &Self) -> Self {
        self + other
    }
    fn tc_scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn tc_zero_like(&self) -> Self {
        Rational::zero()
    }
    fn tc_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl TCoeff for Poly {
    fn tc_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn tc_scale(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn tc_zero_like(&self) -> Self {
        Poly::zero()
    }
    fn tc_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Polynomial in the formal parameter `t`, dense by `t`-degree.
///
/// The parameter never appears inside coefficient values; it exists only as
/// the slot index. Used for the transgression integrand and the homotopy
/// operator's radial scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly<T> {
    coeffs: Vec<T>,
}

impl<T: TCoeff> TPoly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        TPoly { coeffs }
    }

    /// The zero polynomial (no slots).
    pub fn empty() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.tc_is_zero())
    }

    /// Drop trailing zero slots (canonical form for comparisons).
    pub fn normalized(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().map(|c| c.tc_is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let coeffs = long
            .iter()
            .enumerate()
            .map(|(k, c)| match short.get(k) {
                Some(d) => c.tc_add(d),
                None => c.clone(),
            })
            .collect();
        TPoly { coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| c.tc_scale(r)).collect(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return Self::empty();
        }
        let zero = self.coeffs[0].tc_zero_like();
        let mut coeffs = vec![zero; k];
        coeffs.extend(self.coeffs.iter().cloned());
        TPoly { coeffs }
    }

    /// Convolution product with a caller-supplied coefficient product.
    pub fn mul_with(&self, other: &Self, mul: impl Fn(&T, &T) -> T) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::empty();
        }
        let deg = self.coeffs.len() + other.coeffs.len() - 2;
        let mut coeffs: Vec<Option<T>> = vec![None; deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = mul(a, b);
                coeffs[i + j] = Some(match coeffs[i + j].take() {
                    Some(acc) => acc.tc_add(&p),
                    None => p,
                });
            }
        }
        TPoly {
            coeffs: coeffs.into_iter().map(|c| c.unwrap()).collect(),
        }
    }

    /// `k`-th power under `mul_with`; `k = 0` is not representable here, so
    /// callers handle the empty product themselves.
    pub fn pow_with(&self, k: u32, mul: impl Fn(&T, &T) -> T) -> Self {
        assert!(k >= 1, "pow_with requires k >= 1");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul_with(self, &mul);
        }
        acc
    }

    pub fn map<U: TCoeff>(&self, f: impl Fn(&T) -> U) -> TPoly<U> {
        TPoly {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Exact integral over the unit interval: sum of `coeff_k / (k+1)`.
    /// `None` when there are no slots at all.
    pub fn integrate_unit(&self) -> Option<T> {
        let mut acc: Option<T> = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            let scaled = c.tc_scale(&rat(1, k as i64 + 1));
            acc = Some(match acc {
                Some(a) => a.tc_add(&scaled),
                None => scaled,
            });
        }
        acc
    }

    /// Formal derivative in `t`.
    pub fn derivative_t(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::empty();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.tc_scale(&rat_int(k as i64)))
            .collect();
        TPoly { coeffs }
    }
}

/// Univariate rational polynomial in `t`.
pub type UniPoly = TPoly<Rational>;

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn ring_identity_difference_of_squares() {
        let lhs = x().add(&y()).mul(&x().sub(&y()));
        let rhs = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fraction_arithmetic() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
    }

    #[test]
    fn localization_identity() {
        // x * x^{-1} = 1 for a log-flagged variable
        let xinv = Poly::monomial(Monomial::from_pairs([(0, -1)]), Rational::one());
        assert_eq!(x().mul(&xinv), Poly::one());
    }

    #[test]
    fn substitute_zero_kills_positive_powers() {
        let p = x().mul(&x()).mul(&y()); // x^2 y
        assert_eq!(p.substitute_zero(0).unwrap(), Poly::zero());
    }

    #[test]
    fn substitute_homogeneous_scaling() {
        // xy with x -> t*x, y -> t*y gives t^2 xy; use variable 9 as "t"
        let t = Poly::var(9);
        let mut b = BTreeMap::new();
        b.insert(0, t.mul(&x()));
        b.insert(1, t.mul(&y()));
        let out = x().mul(&y()).substitute(&b).unwrap();
        assert_eq!(out, t.mul(&t).mul(&x()).mul(&y()));
    }

    #[test]
    fn substitute_pole_is_rejected() {
        let p = Poly::monomial(Monomial::from_pairs([(0, -1), (1, 1)]), Rational::one());
        assert_eq!(p.substitute_zero(0), Err(Error::PoleAtSubstitution(0)));
    }

    #[test]
    fn substitute_unbound_passthrough() {
        let p = x().mul(&y());
        let mut b = BTreeMap::new();
        b.insert(0, Poly::int(2));
        assert_eq!(p.substitute(&b).unwrap(), y().scale(&rat_int(2)));
    }

    #[test]
    fn substitute_negative_exponent_monomial_binding() {
        // x^{-1} with x -> 2y gives (1/2) y^{-1}
        let p = Poly::monomial(Monomial::from_pairs([(0, -1)]), Rational::one());
        let mut b = BTreeMap::new();
        b.insert(0, y().scale(&rat_int(2)));
        let expect = Poly::monomial(Monomial::from_pairs([(1, -1)]), rat(1, 2));
        assert_eq!(p.substitute(&b).unwrap(), expect);
        // non-monomial binding is rejected
        let mut b2 = BTreeMap::new();
        b2.insert(0, x().add(&y()));
        assert_eq!(
            p.substitute(&b2),
            Err(Error::NonInvertibleSubstitution(0))
        );
    }

    #[test]
    fn integrate_unit_basics() {
        let one = UniPoly::new(vec![Rational::one()]);
        assert_eq!(one.integrate_unit(), Some(rat_int(1)));
        let t = UniPoly::new(vec![Rational::zero(), Rational::one()]);
        assert_eq!(t.integrate_unit(), Some(rat(1, 2)));
        // t - t^2 integrates to 1/6 (antiderivative t^2/2 - t^3/3 at 1)
        let p = UniPoly::new(vec![Rational::zero(), Rational::one(), -Rational::one()]);
        assert_eq!(p.integrate_unit(), Some(rat(1, 6)));
    }

    #[test]
    fn grlex_order_examples() {
        let x2 = Monomial::from_pairs([(0, 2)]);
        let xy = Monomial::from_pairs([(0, 1), (1, 1)]);
        let y2 = Monomial::from_pairs([(1, 2)]);
        let one = Monomial::one();
        assert!(x2 > xy && xy > y2 && y2 > one);
        // degree dominates
        let x3 = Monomial::from_pairs([(0, 3)]);
        assert!(x3 > x2);
    }

    #[test]
    fn grade_by_total_degree_slots() {
        let p = Poly::one().add(&x()).add(&x().mul(&y())); // 1 + x + xy
        let tp = p.grade_by_total_degree();
        assert_eq!(tp.coeffs().len(), 3);
        assert_eq!(tp.coeff(0).unwrap(), &Poly::one());
        assert_eq!(tp.coeff(1).unwrap(), &x());
        assert_eq!(tp.coeff(2).unwrap(), &x().mul(&y()));
    }
}
