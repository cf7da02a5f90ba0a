//! Recursive-descent parser for form expressions, invariant-polynomial
//! specs, and the line-oriented connection file format.
//!
//! Expression grammar:
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor (('*'|'^'|'/') factor)*
//! factor  := '-' factor | primary
//! primary := atom ('**' nonneg-int)?
//! atom    := integer | name | 'd' name | '(' expr ')'
//! ```
//!
//! `*` and `^` both denote the wedge/scalar product (the canonical printer
//! joins differentials with `^`). Division is restricted: the divisor must
//! be a nonzero integer or a monomial in log variables, so `dx/x` and
//! `(1/x)*dx` are the only pole shapes expressible. `**` requires a
//! degree-0 base.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ConnectionSpec, ParseError, VarTable};
use crate::exterior::Form;
use crate::invariants::{elementary, InvPoly};
use crate::logres::LogConnection;
use crate::matform::FormMatrix;
use crate::scalar::{Poly, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    DoubleStar,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = col0 + i;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, col });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, col });
                i += 1;
            }
            '*' => {
                if bytes.get(i + 1) == Some(&'*') {
                    out.push(Spanned {
                        tok: Tok::DoubleStar,
                        col,
                    });
                    i += 2;
                } else {
                    out.push(Spanned { tok: Tok::Star, col });
                    i += 1;
                }
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, col });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, col });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = bytes[start..i].iter().collect();
                let n = digits.parse::<BigInt>().expect("digits parse");
                out.push(Spanned { tok: Tok::Int(n), col });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                let name: String = bytes[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    col,
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    table: &'a VarTable,
    line: usize,
    end_col: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Form, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Form, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) | Some(Tok::Caret) => {
                    self.bump();
                    acc = acc.wedge(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let col = self.col();
                    let divisor = self.factor()?;
                    acc = self.divide(acc, divisor, col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, acc: Form, divisor: Form, col: usize) -> Result<Form, ParseError> {
        let err = |msg: &str| {
            Err(ParseError::Syntax {
                line: self.line,
                col,
                msg: msg.into(),
            })
        };
        let p = match divisor.as_poly() {
            Some(p) => p,
            None => return err("divisor must be degree 0"),
        };
        if p.is_zero() {
            return err("division by zero");
        }
        let (mono, coeff) = match p.as_monomial() {
            Some(mc) => mc,
            None => return err("divisor must be an integer or a log-variable monomial"),
        };
        for &(v, e) in mono.exponents() {
            if !self.table.is_logvar(v) {
                return err(&format!(
                    "division by '{}' is only allowed for log variables",
                    self.table.name(v)
                ));
            }
            if e < 0 {
                return err("divisor must have nonnegative exponents");
            }
        }
        let inv = Poly::monomial(mono.pow(-1), Rational::one() / coeff);
        Ok(acc.scale_poly(&inv))
    }

    fn factor(&mut self) -> Result<Form, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Form, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::DoubleStar)) {
            let col = self.col();
            self.bump();
            let exp = match self.bump() {
                Some(Spanned {
                    tok: Tok::Int(n), ..
                }) => n,
                _ => return self.syntax("'**' needs a nonnegative integer exponent"),
            };
            let p = match base.as_poly() {
                Some(p) => p,
                None => {
                    return Err(ParseError::Syntax {
                        line: self.line,
                        col,
                        msg: "'**' is only legal on degree-0 expressions".into(),
                    })
                }
            };
            let k = u32::try_from(&exp).map_err(|_| ParseError::Syntax {
                line: self.line,
                col,
                msg: "exponent out of range".into(),
            })?;
            return Ok(Form::from_poly(p.pow(k)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Form, ParseError> {
        let col = self.col();
        match self.bump().map(|s| s.tok) {
            Some(Tok::Int(n)) => Ok(Form::constant(Rational::from_integer(n))),
            Some(Tok::Ident(name)) => self.resolve(&name, col),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump().map(|s| s.tok) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => self.syntax("expected ')'"),
                }
            }
            Some(other) => self.syntax(format!("unexpected token {other:?}")),
            None => self.syntax("unexpected end of expression"),
        }
    }

    fn resolve(&self, name: &str, col: usize) -> Result<Form, ParseError> {
        if let Some(v) = self.table.index_of(name) {
            return Ok(Form::var(v));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(v) = self.table.index_of(rest) {
                return Ok(Form::dvar(v));
            }
        }
        Err(ParseError::UnknownVariable {
            name: name.to_string(),
            line: self.line,
            col,
        })
    }
}

/// Parse one form expression against a variable table.
pub fn parse_form_expr(
    src: &str,
    table: &VarTable,
    line: usize,
    col0: usize,
) -> Result<Form, ParseError> {
    let toks = lex(src, line, col0)?;
    let end_col = col0 + src.chars().count();
    let mut p = ExprParser {
        toks,
        pos: 0,
        table,
        line,
        end_col,
    };
    let form = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("trailing input after expression");
    }
    Ok(form)
}

/// Parse an invariant-polynomial spec such as `p2`, `e2` or
/// `1/2*p1*p1 - 1/2*p2`.
pub fn parse_invpoly(src: &str) -> Result<InvPoly, ParseError> {
    let toks = lex(src, 1, 1)?;
    let mut p = InvParser {
        toks,
        pos: 0,
        end_col: 1 + src.chars().count(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("trailing input after invariant spec");
    }
    Ok(out)
}

struct InvParser {
    toks: Vec<Spanned>,
    pos: usize,
    end_col: usize,
}

impl InvParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: 1,
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<InvPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<InvPoly, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<InvPoly, ParseError> {
        match self.bump().map(|s| s.tok) {
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::Int(n)) => {
                // optional '/denominator'
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump().map(|s| s.tok) {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            Ok(InvPoly::constant(Rational::new(n, d)))
                        }
                        _ => self.syntax("expected a nonzero integer denominator"),
                    }
                } else {
                    Ok(InvPoly::constant(Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                let (head, digits) = name.split_at(1);
                let k: u32 = match digits.parse() {
                    Ok(k) if k >= 1 => k,
                    _ => return self.syntax(format!("bad invariant generator '{name}'")),
                };
                match head {
                    "p" => Ok(InvPoly::newton(k)),
                    "e" => Ok(elementary(k)),
                    _ => self.syntax(format!("bad invariant generator '{name}'")),
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump().map(|s| s.tok) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => self.syntax("expected ')'"),
                }
            }
            _ => self.syntax("expected an invariant term"),
        }
    }
}

/// Parse a connection file.
///
/// Line-oriented with `#` comments: `vars <name>+`, optional
/// `logvars <name>*`, `rank <N>`, then entry lines `A[i][j] = <expr>`
/// (missing entries default to 0) and optionally matching `g`/`ginv`
/// entries. Validation (log shape, gauge inverse) happens at load time.
pub fn parse_connection(text: &str) -> Result<ConnectionSpec, ParseError> {
    let mut table: Option<VarTable> = None;
    let mut lognames: Vec<String> = Vec::new();
    let mut saw_logvars = false;
    let mut rank: Option<usize> = None;
    let mut entries: Vec<(String, usize, usize, Form, usize)> = Vec::new();
    let mut var_names: Option<Vec<String>> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = stripped.len() - stripped.trim_start().len();
        let (head, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (trimmed, ""),
        };
        match head {
            "vars" => {
                if var_names.is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "'vars' declared twice".into(),
                    });
                }
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if names.is_empty() {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "'vars' needs at least one name".into(),
                    });
                }
                for n in &names {
                    check_name(n, line)?;
                }
                var_names = Some(names);
            }
            "logvars" => {
                if var_names.is_none() || saw_logvars || rank.is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "'logvars' must follow 'vars' and precede 'rank'".into(),
                    });
                }
                saw_logvars = true;
                lognames = rest.split_whitespace().map(String::from).collect();
            }
            "rank" => {
                if var_names.is_none() {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "'rank' must follow 'vars'".into(),
                    });
                }
                if rank.is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "'rank' declared twice".into(),
                    });
                }
                let n: usize = rest.parse().map_err(|_| ParseError::Syntax {
                    line,
                    col: 1,
                    msg: "'rank' needs a positive integer".into(),
                })?;
                if n == 0 {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "'rank' must be at least 1".into(),
                    });
                }
                let names = var_names.clone().unwrap();
                table = Some(
                    VarTable::new(names, &lognames).map_err(|msg| ParseError::Syntax {
                        line,
                        col: 1,
                        msg,
                    })?,
                );
                rank = Some(n);
            }
            _ => {
                let (table, rank) = match (&table, rank) {
                    (Some(t), Some(r)) => (t, r),
                    _ => {
                        return Err(ParseError::Syntax {
                            line,
                            col: 1,
                            msg: "entries must follow 'vars' and 'rank'".into(),
                        })
                    }
                };
                let (name, i, j, expr_src, expr_col) =
                    split_entry_line(trimmed, line, indent + 1)?;
                if !matches!(name.as_str(), "A" | "g" | "ginv") {
                    return Err(ParseError::Syntax {
                        line,
                        col: indent + 1,
                        msg: format!("unknown entry matrix '{name}' (expected A, g or ginv)"),
                    });
                }
                if i >= rank || j >= rank {
                    return Err(ParseError::RankMismatch {
                        line,
                        msg: format!("entry {name}[{i}][{j}] is outside rank {rank}"),
                    });
                }
                if entries
                    .iter()
                    .any(|(n, a, b, _, _)| n == &name && *a == i && *b == j)
                {
                    return Err(ParseError::Syntax {
                        line,
                        col: indent + 1,
                        msg: format!("duplicate entry {name}[{i}][{j}]"),
                    });
                }
                let form = parse_form_expr(expr_src, table, line, expr_col)?;
                entries.push((name, i, j, form, line));
            }
        }
    }

    let table = match (table, rank) {
        (Some(t), Some(_)) => t,
        _ => {
            return Err(ParseError::Syntax {
                line: text.lines().count() + 1,
                col: 1,
                msg: "file must declare 'vars' and 'rank'".into(),
            })
        }
    };
    let n = rank.unwrap();

    let mut a = FormMatrix::zero(n);
    let mut g: Option<FormMatrix> = None;
    let mut ginv: Option<FormMatrix> = None;
    for (name, i, j, form, _) in entries {
        match name.as_str() {
            "A" => a.set(i, j, form),
            "g" => {
                let m = g.get_or_insert_with(|| FormMatrix::identity(n));
                m.set(i, j, form);
            }
            "ginv" => {
                let m = ginv.get_or_insert_with(|| FormMatrix::identity(n));
                m.set(i, j, form);
            }
            _ => unreachable!(),
        }
    }
    let gauge = match (g, ginv) {
        (None, None) => None,
        (Some(g), Some(gi)) => Some((g, gi)),
        _ => {
            return Err(ParseError::Syntax {
                line: text.lines().count(),
                col: 1,
                msg: "'g' and 'ginv' must both be given or both omitted".into(),
            })
        }
    };

    let connection =
        LogConnection::new(table.num_vars(), table.logvars().to_vec(), a, gauge)?;
    Ok(ConnectionSpec { table, connection })
}

fn check_name(n: &str, line: usize) -> Result<(), ParseError> {
    let mut chars = n.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ParseError::Syntax {
            line,
            col: 1,
            msg: format!("bad variable name '{n}'"),
        })
    }
}

/// Split `name[i][j] = expr`, returning the expression source and its
/// 1-based starting column within the original line.
fn split_entry_line(
    trimmed: &str,
    line: usize,
    col0: usize,
) -> Result<(String, usize, usize, &str, usize), ParseError> {
    let syntax = |col: usize, msg: &str| ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    };
    let eq = trimmed
        .find('=')
        .ok_or_else(|| syntax(col0, "entry line needs '='"))?;
    let lhs = trimmed[..eq].trim();
    let expr_src = trimmed[eq + 1..].trim();
    let expr_col = col0 + eq + 1 + (trimmed[eq + 1..].len() - trimmed[eq + 1..].trim_start().len());
    let open1 = lhs
        .find('[')
        .ok_or_else(|| syntax(col0, "entry needs '[row][col]' indices"))?;
    let name = lhs[..open1].trim().to_string();
    let rest = &lhs[open1..];
    let parts: Vec<&str> = rest.split(']').collect();
    if parts.len() != 3 || !parts[2].trim().is_empty() {
        return Err(syntax(col0, "entry needs exactly '[row][col]' indices"));
    }
    let i: usize = parts[0]
        .trim_start_matches('[')
        .trim()
        .parse()
        .map_err(|_| syntax(col0, "bad row index"))?;
    let j: usize = parts[1]
        .trim()
        .trim_start_matches('[')
        .trim()
        .parse()
        .map_err(|_| syntax(col0, "bad column index"))?;
    Ok((name, i, j, expr_src, expr_col))
}
