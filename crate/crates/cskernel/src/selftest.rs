//! Seeded identity suites covering every module's algebraic contracts.
//!
//! Each suite runs a fixed number of cases derived from the caller's seed
//! and case budget; identical inputs give byte-identical reports. The suites
//! are also the backing for the `selftest` CLI subcommand.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exterior::{DegreeTag, Form};
use crate::frontend::{parse::parse_form_expr, print::print_form, VarTable};
use crate::generate::{
    flat_connection, flat_log_connection, random_form, random_gauge_pair, random_log_form,
    random_matrix, random_poly, random_rational, rng_from_seed, GenParams,
};
use crate::homotopy::{poincare_kappa, primitive, PrimitiveOutcome};
use crate::invariants::{
    chern_weil, elementary, eval_on_diagonal, sym_trace_eval, InvPoly,
};
use crate::logres::{
    cs_residue_check, log_split, log_split_form, residue, wedge_dlog, ChernConvention,
    CyclePoly, GammaSet,
};
use crate::matform::{
    bracket, curvature, gauge, is_flat, mat_mul_raw, trace, FormMatrix,
};
use crate::scalar::{rat_int, Poly, TPoly, UniPoly, Var};
use crate::transgression::{
    cs_class, phi_t, rigidity_identity_check, transgress, transgress_newton,
};

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub error: Option<String>,
}

/// Full selftest report.
#[derive(Clone, Debug)]
pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(|s| s.error.is_none())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            match &s.error {
                None => out.push_str(&format!("{}: ok ({} cases)\n", s.name, s.cases)),
                Some(e) => out.push_str(&format!("{}: FAIL: {e}\n", s.name)),
            }
        }
        out
    }
}

type SuiteFn = fn(&mut ChaCha8Rng, usize) -> Result<usize, String>;

/// Fixed suite list; order is part of the output contract.
fn suites() -> Vec<(&'static str, SuiteFn, bool)> {
    // (name, runner, heavy) -- heavy suites get a quarter of the case budget
    vec![
        ("scalar/ring-axioms", suite_ring_axioms, false),
        ("scalar/substitute-hom", suite_substitute_hom, false),
        ("scalar/integrate-unit", suite_integrate_unit, false),
        ("exterior/d-squared", suite_d_squared, false),
        ("exterior/leibniz", suite_leibniz, false),
        ("exterior/graded-commutativity", suite_graded_comm, false),
        ("matform/trace-graded-cyclic", suite_trace_cyclic, false),
        ("matform/bracket-antisymmetry", suite_bracket_antisym, false),
        ("matform/bracket-jacobi", suite_bracket_jacobi, false),
        ("matform/bracket-leibniz", suite_bracket_leibniz, false),
        ("matform/square-half-bracket", suite_square_half_bracket, false),
        ("matform/bianchi", suite_bianchi, false),
        ("matform/gauge-curvature", suite_gauge_curvature, true),
        ("invariants/elementary-diagonal", suite_elementary_diagonal, false),
        ("invariants/invariance", suite_invariance, true),
        ("invariants/chern-weil-closed", suite_cw_closed, true),
        ("transgression/eq-2-2-11", suite_tp2_closed_form, true),
        ("transgression/differential-contract", suite_tp_differential, true),
        ("transgression/phi-identity", suite_phi_identity, false),
        ("transgression/rank2-closed-form", suite_rank2_closed_form, false),
        ("transgression/gauge-difference", suite_gauge_difference, true),
        ("transgression/flat-family", suite_flat_family, true),
        ("transgression/rigidity", suite_rigidity, false),
        ("homotopy/contraction", suite_homotopy_contraction, false),
        ("homotopy/witness", suite_homotopy_witness, false),
        ("homotopy/linearity", suite_homotopy_linear, false),
        ("logres/split-reconstruction", suite_log_split, false),
        ("logres/residue-anticommutes-d", suite_residue_d, false),
        ("logres/integrability-consequences", suite_log_integrability, true),
        ("logres/cs-residue", suite_cs_residue, true),
        ("logres/gamma-classes", suite_gamma_classes, false),
        ("frontend/round-trip", suite_round_trip, false),
    ]
}

/// Run every suite with its own seed-derived stream.
pub fn run(seed: u64, cases: usize) -> Report {
    let mut suites_out = Vec::new();
    for (idx, (name, f, heavy)) in suites().into_iter().enumerate() {
        let mut rng = rng_from_seed(seed.wrapping_add(idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let budget = if heavy { cases.div_ceil(4).max(1) } else { cases.max(1) };
        let (cases_run, error) = match f(&mut rng, budget) {
            Ok(n) => (n, None),
            Err(e) => (0, Some(e)),
        };
        suites_out.push(SuiteResult {
            name,
            cases: cases_run,
            error,
        });
    }
    Report { suites: suites_out }
}

fn ensure(cond: bool, case: usize, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("case {case}: {msg}"))
    }
}

fn err_str(case: usize, e: &Error) -> String {
    format!("case {case}: unexpected error: {e}")
}

// ---------------------------------------------------------------- scalar

fn suite_ring_axioms(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 3, 3);
    for case in 0..cases {
        let a = random_poly(rng, &p);
        let b = random_poly(rng, &p);
        let c = random_poly(rng, &p);
        ensure(a.add(&b).add(&c) == a.add(&b.add(&c)), case, "+ assoc")?;
        ensure(a.add(&b) == b.add(&a), case, "+ comm")?;
        ensure(a.mul(&b) == b.mul(&a), case, "* comm")?;
        ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), case, "* assoc")?;
        ensure(
            a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)),
            case,
            "distributivity",
        )?;
    }
    Ok(cases)
}

fn suite_substitute_hom(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 3);
    for case in 0..cases {
        let a = random_poly(rng, &p);
        let b = random_poly(rng, &p);
        let mut bindings = BTreeMap::new();
        for v in 0..2u32 {
            if rng.gen_bool(0.7) {
                bindings.insert(v as Var, random_poly(rng, &p));
            }
        }
        let lhs = a.mul(&b).substitute(&bindings).map_err(|e| err_str(case, &e))?;
        let rhs = a
            .substitute(&bindings)
            .and_then(|x| Ok(x.mul(&b.substitute(&bindings)?)))
            .map_err(|e| err_str(case, &e))?;
        ensure(lhs == rhs, case, "substitute is multiplicative")?;
        let lhs = a.add(&b).substitute(&bindings).map_err(|e| err_str(case, &e))?;
        let rhs = a
            .substitute(&bindings)
            .and_then(|x| Ok(x.add(&b.substitute(&bindings)?)))
            .map_err(|e| err_str(case, &e))?;
        ensure(lhs == rhs, case, "substitute is additive")?;
    }
    Ok(cases)
}

fn suite_integrate_unit(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    for case in 0..cases {
        let deg = rng.gen_range(0..=5usize);
        let coeffs: Vec<_> = (0..=deg).map(|_| random_rational(rng)).collect();
        let p = UniPoly::new(coeffs.clone());
        let q = UniPoly::new((0..=deg).map(|_| random_rational(rng)).collect());
        let a = random_rational(rng);
        // linearity
        let lhs = p.scale(&a).add(&q).integrate_unit().unwrap();
        let rhs = p.integrate_unit().unwrap() * &a + q.integrate_unit().unwrap();
        ensure(lhs == rhs, case, "integrate_unit is linear")?;
        // closed form per slot: integral of c t^k is c/(k+1)
        let total = p.integrate_unit().unwrap();
        let expect = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * crate::scalar::rat(1, k as i64 + 1))
            .fold(crate::scalar::rat_int(0), |acc, x| acc + x);
        ensure(total == expect, case, "integrate_unit closed form")?;
    }
    Ok(cases)
}

// ---------------------------------------------------------------- exterior

fn suite_d_squared(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(5, 2, 3);
    for case in 0..cases {
        let deg = rng.gen_range(0..=3usize);
        let w = if rng.gen_bool(0.3) && deg >= 1 {
            random_log_form(rng, 0, deg, &p)
        } else {
            random_form(rng, deg, &p)
        };
        ensure(w.d().d().is_zero(), case, "d(d(w)) = 0")?;
    }
    Ok(cases)
}

fn suite_leibniz(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(5, 2, 2);
    for case in 0..cases {
        let r = rng.gen_range(0..=2usize);
        let s = rng.gen_range(0..=2usize);
        let w = random_form(rng, r, &p);
        let e = random_form(rng, s, &p);
        let lhs = w.wedge(&e).d();
        let mut rhs = w.d().wedge(&e);
        let second = w.wedge(&e.d());
        rhs = if r % 2 == 0 {
            rhs.add(&second)
        } else {
            rhs.sub(&second)
        };
        ensure(lhs == rhs, case, "graded Leibniz rule")?;
    }
    Ok(cases)
}

fn suite_graded_comm(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(5, 2, 2);
    for case in 0..cases {
        let r = rng.gen_range(0..=3usize);
        let s = rng.gen_range(0..=3usize);
        let w = random_form(rng, r, &p);
        let e = random_form(rng, s, &p);
        let rhs = if (r * s) % 2 == 0 {
            e.wedge(&w)
        } else {
            e.wedge(&w).neg()
        };
        ensure(w.wedge(&e) == rhs, case, "graded commutativity")?;
    }
    Ok(cases)
}

// ---------------------------------------------------------------- matform

fn suite_trace_cyclic(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a_deg = rng.gen_range(0..=2usize);
        let b_deg = rng.gen_range(0..=2usize);
        let a = random_matrix(rng, n, a_deg, &p);
        let b = random_matrix(rng, n, b_deg, &p);
        let lhs = trace(&mat_mul_raw(&a, &b));
        let tr_ba = trace(&mat_mul_raw(&b, &a));
        let rhs = if (a_deg * b_deg) % 2 == 0 {
            tr_ba
        } else {
            tr_ba.neg()
        };
        ensure(lhs == rhs, case, "Tr(AB) = (-1)^{ab} Tr(BA)")?;
    }
    Ok(cases)
}

fn suite_bracket_antisym(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let r = rng.gen_range(1..=2usize);
        let s = rng.gen_range(1..=2usize);
        let a = random_matrix(rng, n, r, &p);
        let b = random_matrix(rng, n, s, &p);
        let lhs = bracket(&a, &b).map_err(|e| err_str(case, &e))?;
        let ba = bracket(&b, &a).map_err(|e| err_str(case, &e))?;
        let rhs = if (r * s + 1) % 2 == 0 { ba } else { ba.neg() };
        ensure(lhs == rhs, case, "[a,b] = (-1)^{rs+1}[b,a]")?;
    }
    Ok(cases)
}

fn suite_bracket_jacobi(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let br = bracket(&a, &a).map_err(|e| err_str(case, &e))?;
        let out = bracket(&br, &a).map_err(|e| err_str(case, &e))?;
        ensure(out.is_zero(), case, "[[a,a],a] = 0")?;
    }
    Ok(cases)
}

fn suite_bracket_leibniz(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let r = rng.gen_range(1..=2usize);
        let s = rng.gen_range(1..=2usize);
        let a = random_matrix(rng, n, r, &p);
        let b = random_matrix(rng, n, s, &p);
        let lhs = bracket(&a, &b).map_err(|e| err_str(case, &e))?.d();
        let first = bracket(&a.d(), &b).map_err(|e| err_str(case, &e))?;
        let second = bracket(&a, &b.d()).map_err(|e| err_str(case, &e))?;
        let rhs = if r % 2 == 0 {
            first.add(&second)
        } else {
            first.sub(&second)
        };
        ensure(lhs == rhs, case, "d[a,b] = [da,b] + (-1)^r [a,db]")?;
    }
    Ok(cases)
}

fn suite_square_half_bracket(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let sq = mat_mul_raw(&a, &a);
        let br = bracket(&a, &a).map_err(|e| err_str(case, &e))?;
        ensure(sq.scale(&rat_int(2)) == br, case, "[A,A] = 2 A^2")?;
    }
    Ok(cases)
}

fn suite_bianchi(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let f = curvature(&a).map_err(|e| err_str(case, &e))?;
        let lhs = f.d();
        let rhs = mat_mul_raw(&a, &f).sub(&mat_mul_raw(&f, &a));
        ensure(lhs == rhs, case, "dF = AF - FA")?;
    }
    Ok(cases)
}

fn suite_gauge_curvature(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let factors = rng.gen_range(1..=2);
        let (g, ginv) = random_gauge_pair(rng, n, factors, &p);
        let transformed = gauge(&a, &g, &ginv).map_err(|e| err_str(case, &e))?;
        let lhs = curvature(&transformed).map_err(|e| err_str(case, &e))?;
        let f = curvature(&a).map_err(|e| err_str(case, &e))?;
        let rhs = mat_mul_raw(&mat_mul_raw(&g, &f), &ginv);
        ensure(lhs == rhs, case, "F(gauge) = g F g^{-1}")?;
    }
    Ok(cases)
}

// ------------------------------------------------------------- invariants

fn suite_elementary_diagonal(_rng: &mut ChaCha8Rng, _cases: usize) -> Result<usize, String> {
    let mut count = 0;
    for n_vars in 1..=5u32 {
        let entries: Vec<Poly> = (0..n_vars).map(Poly::var).collect();
        for n in 1..=n_vars {
            let lhs = eval_on_diagonal(&elementary(n), &entries);
            // independent oracle: enumerate all n-subsets directly
            let mut rhs = Poly::zero();
            let mut subset: Vec<u32> = Vec::new();
            enumerate_subsets(n_vars, n, 0, &mut subset, &mut rhs);
            if lhs != rhs {
                return Err(format!("e_{n} on {n_vars} variables diverges"));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn enumerate_subsets(n_vars: u32, want: u32, from: u32, acc: &mut Vec<u32>, out: &mut Poly) {
    if acc.len() == want as usize {
        let mut prod = Poly::one();
        for &v in acc.iter() {
            prod = prod.mul(&Poly::var(v));
        }
        *out = out.add(&prod);
        return;
    }
    for v in from..n_vars {
        acc.push(v);
        enumerate_subsets(n_vars, want, v + 1, acc, out);
        acc.pop();
    }
}

fn suite_invariance(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 1);
    for case in 0..cases {
        let n = 2;
        let l = rng.gen_range(2..=3usize);
        let degs: Vec<usize> = (0..l).map(|_| rng.gen_range(1..=2usize)).collect();
        let phis: Vec<FormMatrix> = degs.iter().map(|&d| random_matrix(rng, n, d, &p)).collect();
        let psi = random_matrix(rng, n, 1, &p);
        let mut acc = Form::zero();
        let mut partial = 0usize;
        for i in 0..l {
            partial += degs[i];
            let mut slots = phis.clone();
            slots[i] = bracket(&phis[i], &psi).map_err(|e| err_str(case, &e))?;
            let val = sym_trace_eval(&slots).map_err(|e| err_str(case, &e))?;
            let signed = if partial % 2 == 0 { val } else { val.neg() };
            acc = acc.add(&signed);
        }
        ensure(acc.is_zero(), case, "invariance identity for the trace form")?;
    }
    Ok(cases)
}

fn suite_cw_closed(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(5, 2, 2);
    let ps = [
        InvPoly::newton(2),
        elementary(2),
        InvPoly::newton(1).mul(&InvPoly::newton(2)),
    ];
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let inv = &ps[case % ps.len()];
        let cw = chern_weil(&a, inv).map_err(|e| err_str(case, &e))?;
        ensure(cw.d().is_zero(), case, "Chern-Weil forms are closed")?;
    }
    Ok(cases)
}

// ----------------------------------------------------------- transgression

fn suite_tp2_closed_form(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let tp = transgress_newton(&a, 2).map_err(|e| err_str(case, &e))?;
        let a_da = trace(&mat_mul_raw(&a, &a.d()));
        let a3 = trace(&mat_mul_raw(&mat_mul_raw(&a, &a), &a));
        let expect = a_da.sub(&a3.scale(&crate::scalar::rat(2, 3)));
        ensure(tp.form == expect, case, "TP(A) = Tr(A dA - (2/3) A^3)")?;
    }
    Ok(cases)
}

fn suite_tp_differential(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let params = GenParams::new(5, 2, 2);
    let ps = [
        InvPoly::newton(2),
        InvPoly::newton(3),
        elementary(2),
        elementary(3),
        InvPoly::newton(1).mul(&InvPoly::newton(2)),
    ];
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &params);
        let inv = &ps[case % ps.len()];
        let out = transgress(&a, inv).map_err(|e| err_str(case, &e))?;
        let expect = chern_weil(&a, inv).map_err(|e| err_str(case, &e))?;
        ensure(out.form.d() == expect, case, "d TP(A) = P(F(A))")?;
        ensure(out.differential == expect, case, "cached differential")?;
    }
    Ok(cases)
}

fn suite_phi_identity(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 2);
    for case in 0..cases {
        let n = rng.gen_range(2..=3);
        let a = random_matrix(rng, n, 1, &p);
        let phi = phi_t(&a).map_err(|e| err_str(case, &e))?;
        let expect = TPoly::new(vec![
            FormMatrix::zero(n),
            a.d(),
            mat_mul_raw(&a, &a).neg(),
        ]);
        ensure(
            phi.normalized() == expect.normalized(),
            case,
            "phi_t = t dA - t^2 A^2",
        )?;
    }
    Ok(cases)
}

/// Variable layout for the generic rank-2 realization: base x1 x2 x3 are
/// 0..2, the coefficient slots of alpha, beta, gamma are 3..11.
pub fn rank2_generic_connection() -> (FormMatrix, Form, Form, Form) {
    let generic_one_form = |c0: Var| -> Form {
        let mut acc = Form::zero();
        for k in 0..3u32 {
            acc = acc.add(&Form::dvar(k).scale_poly(&Poly::var(c0 + k)));
        }
        acc
    };
    let alpha = generic_one_form(3);
    let beta = generic_one_form(6);
    let gamma = generic_one_form(9);
    let mut a = FormMatrix::zero(2);
    a.set(0, 0, alpha.clone());
    a.set(0, 1, beta.clone());
    a.set(1, 0, gamma.clone());
    a.set(1, 1, alpha.neg());
    (a, alpha, beta, gamma)
}

/// The expanded rank-2 closed form `2 a^da - 4 a^b^c + b^dc + c^db`.
pub fn rank2_expected_form() -> Form {
    let (_, alpha, beta, gamma) = rank2_generic_connection();
    alpha
        .wedge(&alpha.d())
        .scale(&rat_int(2))
        .add(&alpha.wedge(&beta).wedge(&gamma).scale(&rat_int(-4)))
        .add(&beta.wedge(&gamma.d()))
        .add(&gamma.wedge(&beta.d()))
}

fn suite_rank2_closed_form(_rng: &mut ChaCha8Rng, _cases: usize) -> Result<usize, String> {
    let (a, _, _, _) = rank2_generic_connection();
    let tp = transgress_newton(&a, 2).map_err(|e| err_str(0, &e))?;
    if tp.form != rank2_expected_form() {
        return Err("rank-2 transgression diverges from the closed form".into());
    }
    Ok(1)
}

fn suite_gauge_difference(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 1, 1);
    for case in 0..cases {
        let n = 2;
        let a = random_matrix(rng, n, 1, &p);
        let factors = rng.gen_range(1..=2);
        let (g, ginv) = random_gauge_pair(rng, n, factors, &p);
        let transformed = gauge(&a, &g, &ginv).map_err(|e| err_str(case, &e))?;
        let tp_a = transgress_newton(&a, 2).map_err(|e| err_str(case, &e))?;
        let tp_g = transgress_newton(&transformed, 2).map_err(|e| err_str(case, &e))?;
        let diff = tp_g.form.sub(&tp_a.form);
        ensure(diff.d().is_zero(), case, "gauge difference is closed")?;
        match primitive(&diff).map_err(|e| err_str(case, &e))? {
            PrimitiveOutcome::Witness(w) => {
                ensure(w.primitive.d() == diff, case, "witness re-differentiates")?;
            }
            PrimitiveOutcome::NotClosed { .. } => {
                return Err(format!("case {case}: gauge difference not closed"));
            }
        }
    }
    Ok(cases)
}

fn suite_flat_family(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 1);
    for case in 0..cases {
        let n = 2;
        let factors = rng.gen_range(1..=3);
        let (a, _, _) = flat_connection(rng, n, factors, &p);
        ensure(
            is_flat(&a).map_err(|e| err_str(case, &e))?,
            case,
            "generated connection is flat",
        )?;
        let w2 = cs_class(&a, 2).map_err(|e| err_str(case, &e))?;
        ensure(w2.form.d().is_zero(), case, "w2 is closed on flat input")?;
        match primitive(&w2.form).map_err(|e| err_str(case, &e))? {
            PrimitiveOutcome::Witness(w) => {
                ensure(w.primitive.d() == w2.form, case, "w2 witness verified")?;
            }
            PrimitiveOutcome::NotClosed { .. } => {
                return Err(format!("case {case}: w2 not closed on flat input"));
            }
        }
        let p11 = InvPoly::newton(1).mul(&InvPoly::newton(1));
        let t = transgress(&a, &p11).map_err(|e| err_str(case, &e))?;
        ensure(
            crate::homotopy::is_exact(&t.form).map_err(|e| err_str(case, &e))?,
            case,
            "T(p1 p1) is exact on flat input",
        )?;
    }
    Ok(cases)
}

fn suite_rigidity(_rng: &mut ChaCha8Rng, _cases: usize) -> Result<usize, String> {
    for n in 2..=8 {
        if !rigidity_identity_check(n) {
            return Err(format!("rigidity identity fails for n = {n}"));
        }
    }
    Ok(7)
}

// --------------------------------------------------------------- homotopy

fn suite_homotopy_contraction(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(6, 3, 3);
    for case in 0..cases {
        let deg = rng.gen_range(1..=4usize);
        let w = random_form(rng, deg, &p);
        let lhs = poincare_kappa(&w)
            .map_err(|e| err_str(case, &e))?
            .d()
            .add(&poincare_kappa(&w.d()).map_err(|e| err_str(case, &e))?);
        ensure(lhs == w, case, "d kappa + kappa d = id")?;
    }
    Ok(cases)
}

fn suite_homotopy_witness(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(5, 2, 2);
    for case in 0..cases {
        let deg = rng.gen_range(1..=3usize);
        let w = random_form(rng, deg, &p).d();
        match primitive(&w).map_err(|e| err_str(case, &e))? {
            PrimitiveOutcome::Witness(wit) => {
                ensure(wit.primitive.d() == w, case, "witness re-differentiates")?;
                ensure(wit.target == w, case, "witness target matches")?;
            }
            PrimitiveOutcome::NotClosed { .. } => {
                return Err(format!("case {case}: exact form reported as not closed"));
            }
        }
    }
    Ok(cases)
}

fn suite_homotopy_linear(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(5, 2, 2);
    for case in 0..cases {
        let deg = rng.gen_range(1..=3usize);
        let w = random_form(rng, deg, &p);
        let e = random_form(rng, deg, &p);
        let a = random_rational(rng);
        let lhs = poincare_kappa(&w.scale(&a).add(&e)).map_err(|e| err_str(case, &e))?;
        let rhs = poincare_kappa(&w)
            .map_err(|e| err_str(case, &e))?
            .scale(&a)
            .add(&poincare_kappa(&e).map_err(|e| err_str(case, &e))?);
        ensure(lhs == rhs, case, "kappa is linear")?;
    }
    Ok(cases)
}

// ----------------------------------------------------------------- logres

fn suite_log_split(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 2);
    for case in 0..cases {
        let deg = rng.gen_range(1..=3usize);
        let w = random_log_form(rng, 0, deg, &p);
        let (alpha, beta) = log_split_form(&w, 0).map_err(|e| err_str(case, &e))?;
        let rebuilt = Form::dlog(0).wedge(&alpha).add(&beta);
        ensure(rebuilt == w, case, "w = dlog ^ alpha + beta")?;
        ensure(
            !alpha.terms().any(|(f, _)| f.contains(0)),
            case,
            "alpha avoids the log differential",
        )?;
        ensure(
            alpha.terms().all(|(_, c)| c.min_exponent(0) >= 0),
            case,
            "alpha is pole-free",
        )?;
    }
    Ok(cases)
}

fn suite_residue_d(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(4, 2, 2);
    for case in 0..cases {
        let deg = rng.gen_range(1..=3usize);
        let w = random_log_form(rng, 0, deg, &p);
        let lhs = residue(&w.d(), 0).map_err(|e| err_str(case, &e))?;
        let rhs = residue(&w, 0).map_err(|e| err_str(case, &e))?.d().neg();
        ensure(lhs == rhs, case, "residue(dw) = -d(residue(w))")?;
    }
    Ok(cases)
}

fn suite_log_integrability(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(3, 2, 1);
    for case in 0..cases {
        let l = flat_log_connection(rng, 0, &p);
        let (b, c) = log_split(l.matrix(), 0).map_err(|e| err_str(case, &e))?;
        // dC dx/x = C^2 dx/x
        let dc = c.d();
        let c2 = mat_mul_raw(&c, &c);
        let lhs = wedge_dlog(&dc, 0);
        let rhs = wedge_dlog(&c2, 0);
        ensure(lhs == rhs, case, "dC dx/x = C^2 dx/x on flat instances")?;
        // Res (dB - (CB - BC)) dx/x = 0
        let db = b.d();
        let cb = mat_mul_raw(&c, &b);
        let bc = mat_mul_raw(&b, &c);
        let inner = db.sub(&cb.sub(&bc));
        let polar = wedge_dlog(&inner, 0);
        let res = polar
            .try_map(|e| residue(e, 0))
            .map_err(|e| err_str(case, &e))?;
        ensure(res.is_zero(), case, "Res(dB - [C,B]) dx/x = 0")?;
    }
    Ok(cases)
}

fn suite_cs_residue(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let p = GenParams::new(3, 2, 1);
    for case in 0..cases {
        let l = flat_log_connection(rng, 0, &p);
        let wit = cs_residue_check(&l, 2, 0).map_err(|e| err_str(case, &e))?;
        ensure(
            wit.primitive.d() == wit.target,
            case,
            "residue witness re-differentiates",
        )?;
        let w2 = transgress_newton(l.matrix(), 2).map_err(|e| err_str(case, &e))?;
        let res = residue(&w2.form, 0).map_err(|e| err_str(case, &e))?;
        ensure(wit.target == res, case, "witness target is the residue")?;
    }
    Ok(cases)
}

fn suite_gamma_classes(_rng: &mut ChaCha8Rng, _cases: usize) -> Result<usize, String> {
    // nilpotent residues kill every class
    let mut m1 = FormMatrix::zero(2);
    m1.set(0, 1, Form::from_poly(Poly::var(2)));
    let mut m2 = FormMatrix::zero(2);
    m2.set(0, 1, Form::one());
    let gamma = GammaSet {
        divisors: vec![(0, m1), (1, m2)],
    };
    for i in 1..=3 {
        if !crate::logres::gamma_newton(&gamma, i)
            .map_err(|e| err_str(0, &e))?
            .is_zero()
        {
            return Err(format!("N_{i} nonzero on nilpotent residues"));
        }
        if !crate::logres::gamma_chern(&gamma, i, ChernConvention::Standard)
            .map_err(|e| err_str(0, &e))?
            .is_zero()
        {
            return Err(format!("c_{i} (standard) nonzero on nilpotent residues"));
        }
    }
    if !crate::logres::gamma_chern(&gamma, 2, ChernConvention::Paper)
        .map_err(|e| err_str(0, &e))?
        .is_zero()
    {
        return Err("c_2 (paper) nonzero on nilpotent residues".into());
    }
    // single divisor diag(a, b): the two conventions differ as documented
    let a = Poly::var(2);
    let b = Poly::var(3);
    let mut m = FormMatrix::zero(2);
    m.set(0, 0, Form::from_poly(a.clone()));
    m.set(1, 1, Form::from_poly(b.clone()));
    let gamma = GammaSet {
        divisors: vec![(0, m)],
    };
    let paper = crate::logres::gamma_chern(&gamma, 2, ChernConvention::Paper)
        .map_err(|e| err_str(0, &e))?;
    let mut expect = CyclePoly::zero(1);
    let diff = a.sub(&b);
    expect.insert(vec![2], diff.mul(&diff).scale(&crate::scalar::rat(-1, 2)));
    if paper != expect {
        return Err("paper-convention c_2 diverges from -(1/2)(a-b)^2".into());
    }
    let standard = crate::logres::gamma_chern(&gamma, 2, ChernConvention::Standard)
        .map_err(|e| err_str(0, &e))?;
    let mut expect = CyclePoly::zero(1);
    expect.insert(vec![2], a.mul(&b));
    if standard != expect {
        return Err("standard-convention c_2 diverges from ab".into());
    }
    Ok(3)
}

// --------------------------------------------------------------- frontend

fn suite_round_trip(rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let table = VarTable::synthetic(6, vec![0, 1]);
    let p = GenParams::new(6, 3, 3);
    for case in 0..cases {
        let deg = rng.gen_range(0..=3usize);
        let w = if rng.gen_bool(0.4) && deg >= 1 {
            {
                let s = rng.gen_range(0..2);
                random_log_form(rng, s, deg, &p)
            }
        } else {
            random_form(rng, deg, &p)
        };
        let printed = print_form(&w, &table);
        let reparsed = parse_form_expr(&printed, &table, 1, 1)
            .map_err(|e| format!("case {case}: reparse failed on '{printed}': {e}"))?;
        ensure(reparsed == w, case, "parse(print(w)) = w")?;
        let reprinted = print_form(&reparsed, &table);
        ensure(reprinted == printed, case, "print is a fixed point")?;
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_selftest_small_budget() {
        let report = run(42, 8);
        assert!(report.ok(), "selftest failed:\n{}", report.render());
    }

    #[test]
    fn selftest_deterministic() {
        let a = run(7, 4).render();
        let b = run(7, 4).render();
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_degree_forms_are_flagged() {
        let w = Form::one().add(&Form::dvar(0));
        assert_eq!(w.degree_tag(), DegreeTag::Mixed);
    }
}
