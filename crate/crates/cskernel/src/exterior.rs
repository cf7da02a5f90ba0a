//! Differential forms over the sparse polynomial ring.
//!
//! A form is a sum of `coefficient * dx_{i1} ^ ... ^ dx_{ik}` terms. Frames
//! are stored strictly increasing with the permutation sign absorbed into the
//! coefficient at construction, so equality of forms is structural equality.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Monomial, Poly, Rational, TCoeff, Var};

/// Strictly increasing sequence of variable indices, one per differential.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Frame(Vec<Var>);

impl Frame {
    pub fn empty() -> Self {
        Frame(Vec::new())
    }

    /// From an already sorted, duplicate-free list.
    pub fn new(vars: Vec<Var>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        Frame(vars)
    }

    /// Sort an arbitrary index list, returning the canonical frame and the
    /// permutation sign; `None` when an index repeats.
    pub fn from_unsorted(vars: &[Var]) -> Option<(Frame, i32)> {
        let mut v = vars.to_vec();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Frame(v), sign))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Position of `v` in the frame, if present.
    pub fn position(&self, v: Var) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    /// Frame with slot `j` removed.
    pub fn remove_at(&self, j: usize) -> Frame {
        let mut v = self.0.clone();
        v.remove(j);
        Frame(v)
    }

    /// Merge two frames, counting crossings; `None` on a repeated index.
    pub fn wedge(&self, other: &Frame) -> Option<(Frame, i32)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut sign = 1;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                // b[j] crosses the remaining entries of a
                if (a.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((Frame(out), sign))
    }
}

/// Degree-graded lexicographic order; drives canonical printing.
impl Ord for Frame {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Frame {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneity classification of a form or matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DegreeTag {
    /// Identically zero: compatible with every degree.
    Zero,
    /// All terms share this degree.
    Homogeneous(usize),
    /// Terms of several degrees.
    Mixed,
}

impl DegreeTag {
    pub fn merge(self, other: DegreeTag) -> DegreeTag {
        match (self, other) {
            (DegreeTag::Zero, t) | (t, DegreeTag::Zero) => t,
            (DegreeTag::Mixed, _) | (_, DegreeTag::Mixed) => DegreeTag::Mixed,
            (DegreeTag::Homogeneous(a), DegreeTag::Homogeneous(b)) => {
                if a == b {
                    DegreeTag::Homogeneous(a)
                } else {
                    DegreeTag::Mixed
                }
            }
        }
    }

    pub fn is_even(self) -> bool {
        match self {
            DegreeTag::Zero => true,
            DegreeTag::Homogeneous(d) => d % 2 == 0,
            DegreeTag::Mixed => false,
        }
    }
}

/// Differential form: polynomial coefficients attached to frames.
///
/// Mixed-degree sums are legal values; operations whose contract needs
/// homogeneity check the [`DegreeTag`] first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Form {
    terms: BTreeMap<Frame, Poly>,
}

impl Form {
    pub fn zero() -> Self {
        Form {
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn from_poly(p: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(Frame::empty(), p);
        }
        Form { terms }
    }

    pub fn constant(c: Rational) -> Self {
        Form::from_poly(Poly::constant(c))
    }

    pub fn one() -> Self {
        Form::from_poly(Poly::one())
    }

    /// The coordinate function `x_v` as a 0-form.
    pub fn var(v: Var) -> Self {
        Form::from_poly(Poly::var(v))
    }

    /// The differential `dx_v`.
    pub fn dvar(v: Var) -> Self {
        Form::term(Frame::new(vec![v]), Poly::one())
    }

    /// The log 1-form `dx_v / x_v`.
    pub fn dlog(v: Var) -> Self {
        Form::term(
            Frame::new(vec![v]),
            Poly::monomial(Monomial::from_pairs([(v, -1)]), Rational::one()),
        )
    }

    pub fn term(frame: Frame, coeff: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(frame, coeff);
        }
        Form { terms }
    }

    pub fn from_map(terms: BTreeMap<Frame, Poly>) -> Self {
        Form {
            terms: terms.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Frame, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.values().map(|p| p.num_terms()).sum()
    }

    pub fn coeff(&self, frame: &Frame) -> Option<&Poly> {
        self.terms.get(frame)
    }

    /// The underlying polynomial when this is a pure 0-form.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.terms.len() == 1 {
            if let Some(p) = self.terms.get(&Frame::empty()) {
                return Some(p.clone());
            }
        }
        None
    }

    pub fn degree_tag(&self) -> DegreeTag {
        let mut tag = DegreeTag::Zero;
        for frame in self.terms.keys() {
            tag = tag.merge(DegreeTag::Homogeneous(frame.len()));
            if tag == DegreeTag::Mixed {
                break;
            }
        }
        tag
    }

    /// The component of homogeneous degree `k`.
    pub fn component(&self, k: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(f, _)| f.len() == k)
                .map(|(f, p)| (f.clone(), p.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|f| f.len()).max().unwrap_or(0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.values().any(|p| p.has_negative_exponent())
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms
            .iter()
            .flat_map(|(f, p)| f.vars().iter().copied().max().into_iter().chain(p.max_var()))
            .max()
    }

    fn insert_term(terms: &mut BTreeMap<Frame, Poly>, frame: Frame, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(frame) {
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

    pub fn add(&self, other: &Form) -> Form {
        let mut terms = self.terms.clone();
        for (f, p) in &other.terms {
            Self::insert_term(&mut terms, f.clone(), p.clone());
        }
        Form { terms }
    }

    pub fn neg(&self) -> Form {
        Form {
            terms: self.terms.iter().map(|(f, p)| (f.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Form {
        if r.is_zero() {
            return Form::zero();
        }
        Form {
            terms: self
                .terms
                .iter()
                .map(|(f, p)| (f.clone(), p.scale(r)))
                .collect(),
        }
    }

    pub fn scale_poly(&self, q: &Poly) -> Form {
        if q.is_zero() {
            return Form::zero();
        }
        Form::from_map(
            self.terms
                .iter()
                .map(|(f, p)| (f.clone(), p.mul(q)))
                .collect(),
        )
    }

    /// Wedge product. Bilinear; the frame merge carries the sign.
    pub fn wedge(&self, other: &Form) -> Form {
        let mut terms = BTreeMap::new();
        for (f1, p1) in &self.terms {
            for (f2, p2) in &other.terms {
                if let Some((frame, sign)) = f1.wedge(f2) {
                    let mut p = p1.mul(p2);
                    if sign < 0 {
                        p = p.neg();
                    }
                    Self::insert_term(&mut terms, frame, p);
                }
            }
        }
        Form { terms }
    }

    /// Exterior derivative.
    ///
    /// Acts by the Leibniz rule on each coefficient; the Laurent rule
    /// `d(x^{-1}) = -x^{-2} dx` combined with frame annihilation gives
    /// `d(f dx/x) = df ^ dx/x` on log terms for free.
    pub fn d(&self) -> Form {
        let mut terms = BTreeMap::new();
        for (frame, p) in &self.terms {
            // variables appearing in the coefficient are the only candidates
            let mut vars: Vec<Var> = p
                .terms()
                .flat_map(|(m, _)| m.exponents().iter().map(|&(v, _)| v))
                .collect();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                if frame.contains(v) {
                    continue; // dv ^ frame = 0
                }
                let dp = p.derivative(v);
                if dp.is_zero() {
                    continue;
                }
                let (new_frame, sign) = Frame::new(vec![v])
                    .wedge(frame)
                    .expect("v not in frame by construction");
                let coeff = if sign < 0 { dp.neg() } else { dp };
                Self::insert_term(&mut terms, new_frame, coeff);
            }
        }
        Form { terms }
    }

    /// Restriction to the hyperplane `x_s = 0`.
    ///
    /// Rejects terms whose frame carries `dx_s` and coefficients with a pole
    /// in `x_s`; other log variables pass through untouched.
    pub fn restrict(&self, s: Var) -> Result<Form> {
        for (frame, p) in &self.terms {
            if frame.contains(s) {
                return Err(Error::FrameContainsDifferential(s));
            }
            if p.min_exponent(s) < 0 {
                return Err(Error::PoleAtSubstitution(s));
            }
        }
        let mut terms = BTreeMap::new();
        for (frame, p) in &self.terms {
            Self::insert_term(&mut terms, frame.clone(), p.substitute_zero(s)?);
        }
        Ok(Form { terms })
    }

    /// Substitute polynomials for variables in every coefficient.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Poly>) -> Result<Form> {
        let mut terms = BTreeMap::new();
        for (frame, p) in &self.terms {
            Self::insert_term(&mut terms, frame.clone(), p.substitute(bindings)?);
        }
        Ok(Form { terms })
    }
}

impl TCoeff for Form {
    fn tc_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn tc_scale(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn tc_zero_like(&self) -> Self {
        Form::zero()
    }
    fn tc_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(frame, p)| {
                if frame.is_empty() {
                    format!("({p})")
                } else {
                    let d: Vec<String> =
                        frame.vars().iter().map(|v| format!("d#{v}")).collect();
                    format!("({p})*{}", d.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Convenience: `c * dx_{v1} ^ ... ^ dx_{vk}` with a rational coefficient.
pub fn const_term(c: Rational, vars: &[Var]) -> Form {
    match Frame::from_unsorted(vars) {
        None => Form::zero(),
        Some((frame, sign)) => {
            let c = if sign < 0 { -c } else { c };
            Form::term(frame, Poly::constant(c))
        }
    }
}

/// Convenience: monomial coefficient times a frame.
pub fn poly_term(p: Poly, vars: &[Var]) -> Form {
    match Frame::from_unsorted(vars) {
        None => Form::zero(),
        Some((frame, sign)) => {
            let p = if sign < 0 { p.neg() } else { p };
            Form::term(frame, p)
        }
    }
}

impl Form {
    /// `self == other` up to nothing: structural equality already canonical.
    pub fn equals(&self, other: &Form) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    const X: Var = 0;
    const Y: Var = 1;
    const Z: Var = 2;

    #[test]
    fn wedge_self_is_zero() {
        let dx = Form::dvar(X);
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn wedge_antisymmetry_on_one_forms() {
        let dx = Form::dvar(X);
        let dy = Form::dvar(Y);
        assert_eq!(dx.wedge(&dy), dy.wedge(&dx).neg());
    }

    #[test]
    fn wedge_sorts_frames_with_sign() {
        // (x dy) ^ (y dx) = -xy dx^dy
        let a = Form::term(Frame::new(vec![Y]), Poly::var(X));
        let b = Form::term(Frame::new(vec![X]), Poly::var(Y));
        let expect = Form::term(
            Frame::new(vec![X, Y]),
            Poly::var(X).mul(&Poly::var(Y)).neg(),
        );
        assert_eq!(a.wedge(&b), expect);
    }

    #[test]
    fn d_of_coordinate() {
        assert_eq!(Form::var(X).d(), Form::dvar(X));
    }

    #[test]
    fn d_of_x_dy() {
        let w = Form::term(Frame::new(vec![Y]), Poly::var(X));
        assert_eq!(w.d(), const_term(rat_int(1), &[X, Y]));
    }

    #[test]
    fn d_leibniz_expansion() {
        // d(xy dz) = y dx^dz + x dy^dz
        let w = Form::term(Frame::new(vec![Z]), Poly::var(X).mul(&Poly::var(Y)));
        let expect = poly_term(Poly::var(Y), &[X, Z]).add(&poly_term(Poly::var(X), &[Y, Z]));
        assert_eq!(w.d(), expect);
    }

    #[test]
    fn d_squared_zero_on_log_shape() {
        // d(f dx/x) = df ^ dx/x and d of that is zero
        let f = Poly::var(Y).mul(&Poly::var(Y)); // y^2
        let w = Form::dlog(X).scale_poly(&f);
        let dw = w.d();
        let expect = Form::from_poly(f).d().wedge(&Form::dlog(X));
        assert_eq!(dw, expect);
        assert!(dw.d().is_zero());
    }

    #[test]
    fn restrict_rejects_frame_differential() {
        let w = Form::term(Frame::new(vec![X]), Poly::var(Y))
            .add(&Form::term(Frame::new(vec![Y]), Poly::var(X)));
        assert_eq!(w.restrict(X), Err(Error::FrameContainsDifferential(X)));
    }

    #[test]
    fn restrict_examples() {
        // restrict(xy dy, x) = 0
        let w = Form::term(Frame::new(vec![Y]), Poly::var(X).mul(&Poly::var(Y)));
        assert!(w.restrict(X).unwrap().is_zero());
        // restrict((x+y) dz, x) = y dz
        let w = Form::term(Frame::new(vec![Z]), Poly::var(X).add(&Poly::var(Y)));
        assert_eq!(
            w.restrict(X).unwrap(),
            Form::term(Frame::new(vec![Z]), Poly::var(Y))
        );
    }

    #[test]
    fn degree_tags() {
        assert_eq!(Form::zero().degree_tag(), DegreeTag::Zero);
        assert_eq!(Form::dvar(X).degree_tag(), DegreeTag::Homogeneous(1));
        let mixed = Form::dvar(X).add(&Form::one());
        assert_eq!(mixed.degree_tag(), DegreeTag::Mixed);
    }
}
