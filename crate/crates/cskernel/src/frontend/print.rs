//! Canonical, deterministic text rendering.
//!
//! Ordering rules: homogeneous components in ascending degree; within a
//! component, terms sorted by frame (lexicographic index sequence), then by
//! coefficient monomial in descending graded-lex order. Differentials are
//! joined with `^`, unit coefficients are elided, poles print as trailing
//! divisions, and zero prints `0`. `print(parse(print(w))) = print(w)`.

use num_traits::{One, Signed};

use super::VarTable;
use crate::exterior::{Form, Frame};
use crate::logres::CyclePoly;
use crate::matform::FormMatrix;
use crate::scalar::{Monomial, Poly, Rational};

/// Standalone rational: `5`, `-3`, `1/2`.
pub fn print_rational(r: &Rational) -> String {
    r.to_string()
}

/// Coefficient in front of a `*`: integers bare, fractions parenthesized.
fn coeff_prefix(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("({r})")
    }
}

/// Body of one term: positive monomial part, optional frame, trailing
/// divisions for the Laurent part. `abs_coeff` must be positive.
fn term_body(
    abs_coeff: &Rational,
    mono: &Monomial,
    frame: Option<&Frame>,
    extra: Option<&str>,
    table: &VarTable,
) -> String {
    let mut segs: Vec<String> = Vec::new();
    for &(v, e) in mono.exponents() {
        if e > 0 {
            if e == 1 {
                segs.push(table.name(v).to_string());
            } else {
                segs.push(format!("{}**{e}", table.name(v)));
            }
        }
    }
    if let Some(f) = frame {
        if !f.is_empty() {
            let ds: Vec<String> = f.vars().iter().map(|&v| format!("d{}", table.name(v))).collect();
            segs.push(ds.join("^"));
        }
    }
    if let Some(x) = extra {
        segs.push(x.to_string());
    }
    let mut out = if segs.is_empty() {
        print_rational(abs_coeff)
    } else if abs_coeff.is_one() {
        segs.join("*")
    } else {
        format!("{}*{}", coeff_prefix(abs_coeff), segs.join("*"))
    };
    for &(v, e) in mono.exponents() {
        if e < 0 {
            if e == -1 {
                out.push_str(&format!("/{}", table.name(v)));
            } else {
                out.push_str(&format!("/{}**{}", table.name(v), -e));
            }
        }
    }
    out
}

fn assemble(pieces: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in pieces.into_iter().enumerate() {
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

/// Canonical text of a form.
pub fn print_form(w: &Form, table: &VarTable) -> String {
    if w.is_zero() {
        return "0".into();
    }
    let mut pieces = Vec::new();
    for (frame, p) in w.terms() {
        for (mono, c) in p.terms().rev() {
            pieces.push((
                c.is_negative(),
                term_body(&c.abs(), mono, Some(frame), None, table),
            ));
        }
    }
    assemble(pieces)
}

/// Canonical text of a polynomial (0-form coefficients, Gamma entries).
pub fn print_poly(p: &Poly, table: &VarTable) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut pieces = Vec::new();
    for (mono, c) in p.terms().rev() {
        pieces.push((c.is_negative(), term_body(&c.abs(), mono, None, None, table)));
    }
    assemble(pieces)
}

/// All entries of a matrix, one line each: `label[i][j] = ...`.
pub fn print_matrix(label: &str, m: &FormMatrix, table: &VarTable) -> String {
    let mut lines = Vec::new();
    for i in 0..m.size() {
        for j in 0..m.size() {
            lines.push(format!("{label}[{i}][{j}] = {}", print_form(m.get(i, j), table)));
        }
    }
    lines.join("\n")
}

/// Canonical text of a cycle polynomial in divisor symbols `[name]`.
///
/// `divisors` maps symbol slots to variable indices (the declared log
/// variables, in order). Symbol monomials print in descending
/// lexicographic order.
pub fn print_cycle(c: &CyclePoly, divisors: &[u32], table: &VarTable) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut pieces = Vec::new();
    let terms: Vec<_> = c.terms().collect();
    for (exps, p) in terms.into_iter().rev() {
        let mut syms: Vec<String> = Vec::new();
        for (slot, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = table.name(divisors[slot]);
            if e == 1 {
                syms.push(format!("[{name}]"));
            } else {
                syms.push(format!("[{name}]**{e}"));
            }
        }
        let sym = syms.join("*");
        if let Some((mono, coeff)) = p.as_monomial() {
            let extra = if sym.is_empty() { None } else { Some(sym.as_str()) };
            pieces.push((
                coeff.is_negative(),
                term_body(&coeff.abs(), mono, None, extra, table),
            ));
        } else {
            let body = if sym.is_empty() {
                format!("({})", print_poly(p, table))
            } else {
                format!("({})*{sym}", print_poly(p, table))
            };
            pieces.push((false, body));
        }
    }
    assemble(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::poly_term;
    use crate::frontend::parse::parse_form_expr;
    use crate::scalar::{rat, rat_int};

    fn table() -> VarTable {
        VarTable::new(
            vec!["x".into(), "y".into(), "z".into()],
            &["x".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn zero_prints_zero() {
        assert_eq!(print_form(&Form::zero(), &table()), "0");
    }

    #[test]
    fn kappa_witness_shape() {
        // (1/2)(x dy - y dx) prints with the dx term first (frame order)
        let w = poly_term(Poly::var(0).scale(&rat(1, 2)), &[1])
            .add(&poly_term(Poly::var(1).scale(&rat(-1, 2)), &[0]));
        assert_eq!(print_form(&w, &table()), "-(1/2)*y*dx + (1/2)*x*dy");
    }

    #[test]
    fn log_terms_print_as_divisions() {
        let w = Form::dlog(0).scale_poly(&Poly::var(1));
        assert_eq!(print_form(&w, &table()), "y*dx/x");
        let v = Form::dlog(0).scale(&rat(1, 2));
        assert_eq!(print_form(&v, &table()), "(1/2)*dx/x");
    }

    #[test]
    fn constants_and_units() {
        assert_eq!(print_form(&Form::constant(rat(1, 2)), &table()), "1/2");
        assert_eq!(print_form(&Form::constant(rat_int(-3)), &table()), "-3");
        assert_eq!(print_form(&Form::dvar(1), &table()), "dy");
        assert_eq!(
            print_form(&Form::dvar(0).wedge(&Form::dvar(1)).neg(), &table()),
            "-dx^dy"
        );
    }

    #[test]
    fn print_parse_print_fixed_point() {
        let t = table();
        let w = poly_term(Poly::var(0).mul(&Poly::var(0)).scale(&rat(3, 4)), &[1, 2])
            .add(&poly_term(Poly::var(2), &[0, 1]))
            .add(&Form::dlog(0).scale_poly(&Poly::var(1)))
            .add(&Form::from_poly(Poly::var(2).scale(&rat(-5, 3))));
        let s1 = print_form(&w, &t);
        let reparsed = parse_form_expr(&s1, &t, 1, 1).unwrap();
        assert_eq!(reparsed, w);
        assert_eq!(print_form(&reparsed, &t), s1);
    }
}
