//! Seeded random generation of polynomials, forms, connection matrices,
//! gauge pairs and flat families.
//!
//! Everything is driven by an explicit ChaCha stream so identical seeds give
//! identical values on every platform. Flat instances are generated, not
//! sought: `A = dg.g^{-1}` with `g` assembled from elementary and
//! diagonal-monomial factors whose inverses are built alongside.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exterior::{Form, Frame};
use crate::logres::LogConnection;
use crate::matform::{gauge, mat_mul_raw, FormMatrix};
use crate::scalar::{rat, Monomial, Poly, Rational, Var};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters for random polynomials and forms.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub vars: u32,
    pub max_coeff_degree: u32,
    pub max_terms: usize,
}

impl GenParams {
    pub fn new(vars: u32, max_coeff_degree: u32, max_terms: usize) -> Self {
        GenParams {
            vars,
            max_coeff_degree,
            max_terms,
        }
    }
}

/// Small nonzero rational, denominators 1..=3.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            break n;
        }
    };
    let d = rng.gen_range(1i64..=3);
    rat(n, d)
}

pub fn random_monomial(rng: &mut ChaCha8Rng, p: &GenParams) -> Monomial {
    let deg = rng.gen_range(0..=p.max_coeff_degree);
    let mut pairs = Vec::new();
    for _ in 0..deg {
        pairs.push((rng.gen_range(0..p.vars), 1));
    }
    Monomial::from_pairs(pairs)
}

pub fn random_poly(rng: &mut ChaCha8Rng, p: &GenParams) -> Poly {
    let terms = rng.gen_range(1..=p.max_terms.max(1));
    let mut out = Poly::zero();
    for _ in 0..terms {
        out = out.add(&Poly::monomial(random_monomial(rng, p), random_rational(rng)));
    }
    out
}

/// Homogeneous form of the given degree.
pub fn random_form(rng: &mut ChaCha8Rng, degree: usize, p: &GenParams) -> Form {
    assert!(degree as u32 <= p.vars);
    let pieces = rng.gen_range(1..=2);
    let mut out = Form::zero();
    for _ in 0..pieces {
        let mut idx: Vec<Var> = (0..p.vars).collect();
        // partial Fisher-Yates: first `degree` entries become the frame
        for i in 0..degree {
            let j = rng.gen_range(i..idx.len());
            idx.swap(i, j);
        }
        let mut frame_vars: Vec<Var> = idx[..degree].to_vec();
        frame_vars.sort_unstable();
        out = out.add(&Form::term(Frame::new(frame_vars), random_poly(rng, p)));
    }
    out
}

/// Homogeneous matrix of forms of one degree.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, degree: usize, p: &GenParams) -> FormMatrix {
    let mut m = FormMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, random_form(rng, degree, p));
        }
    }
    m
}

/// Random connection matrix (1-form entries).
pub fn random_connection(rng: &mut ChaCha8Rng, n: usize, p: &GenParams) -> FormMatrix {
    random_matrix(rng, n, 1, p)
}

/// One elementary shear `E_{ij}(q)` with its inverse `E_{ij}(-q)`.
pub fn random_elementary_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: &GenParams,
) -> (FormMatrix, FormMatrix) {
    let i = rng.gen_range(0..n);
    let j = loop {
        let j = rng.gen_range(0..n);
        if j != i {
            break j;
        }
    };
    let q = random_poly(rng, p);
    let mut g = FormMatrix::identity(n);
    g.set(i, j, Form::from_poly(q.clone()));
    let mut ginv = FormMatrix::identity(n);
    ginv.set(i, j, Form::from_poly(q.neg()));
    (g, ginv)
}

/// Product of `factors` elementary shears; polynomial in both directions.
pub fn random_gauge_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    factors: usize,
    p: &GenParams,
) -> (FormMatrix, FormMatrix) {
    let mut g = FormMatrix::identity(n);
    let mut ginv = FormMatrix::identity(n);
    for _ in 0..factors {
        let (f, finv) = random_elementary_pair(rng, n, p);
        g = mat_mul_raw(&g, &f);
        ginv = mat_mul_raw(&finv, &ginv);
    }
    (g, ginv)
}

/// Gauge-trivial flat connection `dg.g^{-1}` with polynomial gauge.
pub fn flat_connection(
    rng: &mut ChaCha8Rng,
    n: usize,
    factors: usize,
    p: &GenParams,
) -> (FormMatrix, FormMatrix, FormMatrix) {
    let (g, ginv) = random_gauge_pair(rng, n, factors, p);
    let a = gauge(&FormMatrix::zero(n), &g, &ginv).expect("generated pair is valid");
    (a, g, ginv)
}

/// Gauge pair for a rank-2 flat log family along `{x_s = 0}`:
/// `g = L_1..L_a . diag-monomial . U_1..U_b` where the factors right of the
/// diagonal stay on the side that conjugation by `x_s^{k}` keeps polynomial.
pub fn random_log_gauge_pair(
    rng: &mut ChaCha8Rng,
    s: Var,
    p: &GenParams,
) -> (FormMatrix, FormMatrix) {
    let n = 2;
    let k = rng.gen_range(0..=2u32);
    let upper_slot = rng.gen_bool(0.5);
    let mut g = FormMatrix::identity(n);
    let mut ginv = FormMatrix::identity(n);
    let push = |g: &mut FormMatrix, ginv: &mut FormMatrix, f: FormMatrix, finv: FormMatrix| {
        *g = mat_mul_raw(g, &f);
        *ginv = mat_mul_raw(&finv, ginv);
    };
    // left factors: unrestricted elementary shears
    for _ in 0..rng.gen_range(0..=2) {
        let (f, finv) = random_elementary_pair(rng, n, p);
        push(&mut g, &mut ginv, f, finv);
    }
    // diagonal monomial factor diag(c x^k, 1) or diag(1, c x^k)
    {
        let c = random_rational(rng);
        let slot = if upper_slot { 0 } else { 1 };
        let mono = Poly::monomial(Monomial::from_pairs([(s, k as i32)]), c.clone());
        let mono_inv = Poly::monomial(
            Monomial::from_pairs([(s, -(k as i32))]),
            Rational::from_integer(1.into()) / c,
        );
        let mut d = FormMatrix::identity(n);
        d.set(slot, slot, Form::from_poly(mono));
        let mut dinv = FormMatrix::identity(n);
        dinv.set(slot, slot, Form::from_poly(mono_inv));
        push(&mut g, &mut ginv, d, dinv);
    }
    // right factors: triangular on the safe side for conjugation by the
    // diagonal monomial (upper when the monomial sits in slot 0)
    for _ in 0..rng.gen_range(0..=2) {
        let q = random_poly(rng, p);
        let (i, j) = if upper_slot { (0, 1) } else { (1, 0) };
        let mut f = FormMatrix::identity(n);
        f.set(i, j, Form::from_poly(q.clone()));
        let mut finv = FormMatrix::identity(n);
        finv.set(i, j, Form::from_poly(q.neg()));
        push(&mut g, &mut ginv, f, finv);
    }
    (g, ginv)
}

/// Generated flat rank-2 log connection along `{x_s = 0}`, gauge pair kept.
pub fn flat_log_connection(rng: &mut ChaCha8Rng, s: Var, p: &GenParams) -> LogConnection {
    let (g, ginv) = random_log_gauge_pair(rng, s, p);
    let a = gauge(&FormMatrix::zero(2), &g, &ginv).expect("generated pair is valid");
    LogConnection::new(p.vars, vec![s], a, Some((g, ginv)))
        .expect("generated connection is log-shape valid")
}

/// Homogeneous log-shaped form: a polynomial form plus `dx_s/x_s ^ (random)`
/// pieces with pole-free coefficients.
pub fn random_log_form(
    rng: &mut ChaCha8Rng,
    s: Var,
    degree: usize,
    p: &GenParams,
) -> Form {
    let mut out = random_form(rng, degree, p);
    if degree >= 1 {
        let rest = random_form(rng, degree - 1, p);
        // keep only frames avoiding dx_s, then attach the log factor
        let mut polar = Form::zero();
        for (frame, coeff) in rest.terms() {
            if frame.contains(s) {
                continue;
            }
            polar = polar.add(&Form::term(frame.clone(), coeff.clone()));
        }
        out = out.add(&Form::dlog(s).wedge(&polar));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logres::log_shape_check;
    use crate::matform::is_flat;

    #[test]
    fn deterministic_under_seed() {
        let p = GenParams::new(4, 2, 3);
        let a = random_poly(&mut rng_from_seed(7), &p);
        let b = random_poly(&mut rng_from_seed(7), &p);
        assert_eq!(a, b);
    }

    #[test]
    fn flat_connections_are_flat() {
        let p = GenParams::new(4, 2, 2);
        let mut rng = rng_from_seed(11);
        for _ in 0..10 {
            let (a, _, _) = flat_connection(&mut rng, 2, 3, &p);
            assert!(is_flat(&a).unwrap());
        }
    }

    #[test]
    fn flat_log_connections_valid_and_flat() {
        let p = GenParams::new(3, 2, 2);
        let mut rng = rng_from_seed(13);
        for _ in 0..10 {
            let l = flat_log_connection(&mut rng, 0, &p);
            assert!(is_flat(l.matrix()).unwrap());
        }
    }

    #[test]
    fn random_log_forms_are_log_shaped() {
        let p = GenParams::new(4, 2, 2);
        let mut rng = rng_from_seed(17);
        let logvars: std::collections::BTreeSet<Var> = [0u32].into_iter().collect();
        for _ in 0..10 {
            let w = random_log_form(&mut rng, 0, 2, &p);
            log_shape_check(&w, &logvars).unwrap();
        }
    }
}
