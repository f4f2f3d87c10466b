//! A small text syntax for differential polynomials.
//!
//! ```text
//! w^2 + 1/2*v_x^2 + a*w_t*v_xx - 1/2*b*v_xx^2 + 1/3*v_x^3
//! ```
//!
//! Jet coordinates are written `field_suffix` where the suffix is a string
//! of base-coordinate names (`v_tx` and `v_xt` are the same coordinate).
//! Multiplication is always explicit, `^` takes a positive integer and a
//! divisor must be a nonzero constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::kernel::{DiffPoly, JetSpace, MultiIndex, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            col += 1;
            continue;
        }
        let start_col = col;
        if c.is_ascii_digit() {
            let mut s = String::new();
            while k < chars.len() && chars[k].is_ascii_digit() {
                s.push(chars[k]);
                k += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Num(s.parse().expect("digits")),
                line,
                column: start_col,
            });
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                s.push(chars[k]);
                k += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line,
                column: start_col,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                tok: Tok::Op(c),
                line,
                column: start_col,
            });
            k += 1;
            col += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    space: &'a JetSpace,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Op('+') => {
                    self.next();
                    acc += &self.term()?;
                }
                Tok::Op('-') => {
                    self.next();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Op('*') => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    let at = self.next();
                    let divisor = self.unary()?;
                    if divisor.is_zero() {
                        return Err(Error::DivisionByZero(format!("line {}, column {}", at.line, at.column)));
                    }
                    let inv = divisor
                        .as_coefficient()
                        .and_then(|c| c.inverse())
                        .ok_or_else(|| syntax(at.line, at.column, "divisor must be a constant"))?;
                    acc = acc.mul_coefficient(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<DiffPoly> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match t.tok {
            Tok::Num(e) if e.is_positive() => {
                let e: u32 = e
                    .try_into()
                    .map_err(|_| syntax(t.line, t.column, "exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => Err(syntax(t.line, t.column, "`^` takes a positive integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        let t = self.next();
        match t.tok {
            Tok::Num(n) => Ok(DiffPoly::constant(BigRational::from_integer(n))),
            Tok::Ident(name) => self.symbol(&name),
            Tok::Op('(') => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::Op(')') {
                    return Err(syntax(close.line, close.column, "expected `)`"));
                }
                Ok(inner)
            }
            Tok::End => Err(syntax(t.line, t.column, "unexpected end of input")),
            Tok::Op(c) => Err(syntax(t.line, t.column, format!("unexpected `{c}`"))),
        }
    }

    fn symbol(&self, name: &str) -> Result<DiffPoly> {
        let space = self.space;
        let Some((head, suffix)) = name.split_once('_') else {
            if let Some(i) = space.base_index(name) {
                return Ok(DiffPoly::base(i));
            }
            if let Some(s) = space.field_index(name) {
                return Ok(DiffPoly::field(s));
            }
            if let Some(p) = space.param_index(name) {
                return Ok(DiffPoly::param(p));
            }
            return Err(Error::UnknownSymbol(name.to_string()));
        };
        let field = space
            .field_index(head)
            .ok_or_else(|| Error::UnknownSymbol(head.to_string()))?;
        let index = parse_suffix(space, suffix).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if index.len() > space.order() {
            return Err(Error::DepthExceeded {
                symbol: name.to_string(),
                depth: index.len(),
                order: space.order(),
            });
        }
        Ok(DiffPoly::jet(field, index))
    }
}

/// Splits a jet suffix into base-coordinate names, longest name first.
fn parse_suffix(space: &JetSpace, suffix: &str) -> Option<MultiIndex> {
    if suffix.is_empty() {
        return None;
    }
    let mut names: Vec<(usize, &str)> = space.base_names().iter().map(String::as_str).enumerate().collect();
    names.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));
    let mut rest = suffix;
    let mut idx = Vec::new();
    while !rest.is_empty() {
        let (i, s) = names.iter().find(|(_, s)| rest.starts_with(*s))?;
        idx.push(*i);
        rest = &rest[s.len()..];
    }
    Some(MultiIndex::from_indices(&idx))
}

/// Parses a differential polynomial over `space`.
///
/// Jets deeper than `space.order()` are rejected with `DepthExceeded`.
pub fn parse_lagrangian(src: &str, space: &JetSpace) -> Result<DiffPoly> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        space,
    };
    let out = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(t.line, t.column, "expected an operator (multiplication must be explicit)"));
    }
    Ok(out)
}

/// `v_tx`-style name of a jet coordinate.
pub fn jet_name(space: &JetSpace, field: usize, index: &MultiIndex) -> String {
    let mut s = space.field_name(field).to_string();
    if !index.is_empty() {
        s.push('_');
        for i in index.entries() {
            s.push_str(space.base_name(i));
        }
    }
    s
}

pub fn var_name(space: &JetSpace, v: &Var) -> String {
    match v {
        Var::Base(i) => space.base_name(*i).to_string(),
        Var::Jet { field, index } => jet_name(space, *field, index),
    }
}

/// Prints `f` in the input syntax; the output parses back to `f`.
pub fn pretty_print(space: &JetSpace, f: &DiffPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let negative = c.is_negative();
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let c = c.abs();
        let mut factors: Vec<String> = Vec::new();
        let mut divisors: Vec<String> = Vec::new();
        for &(p, e) in m.params() {
            let name = space.param_name(p);
            let pw = |e: i32| if e == 1 { name.to_string() } else { format!("{name}^{e}") };
            if e > 0 {
                factors.push(pw(e));
            } else {
                divisors.push(pw(-e));
            }
        }
        for (v, e) in m.vars() {
            let name = var_name(space, v);
            factors.push(if *e == 1 { name } else { format!("{name}^{e}") });
        }
        let mut body = if c.numer() == &BigInt::from(1) && !factors.is_empty() {
            String::new()
        } else {
            c.numer().to_string()
        };
        for fac in factors {
            if !body.is_empty() {
                body.push('*');
            }
            body.push_str(&fac);
        }
        if !c.is_integer() {
            body.push('/');
            body.push_str(&c.denom().to_string());
        }
        for d in divisors {
            body.push('/');
            body.push_str(&d);
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn space() -> JetSpace {
        JetSpace::new(&["t", "x", "y"], &["v", "w"], &["a", "b", "beta"], 2).unwrap()
    }

    #[test]
    fn parses_fixture_density() {
        let s = space();
        let l = parse_lagrangian(
            "w^2 + 1/2*v_x^2 + a*w_t*v_xx - 1/2*a*v_tt*v_xx - 1/2*b*v_xx^2 + 1/3*v_x^3 + 1/2*beta*v_y^2",
            &s,
        )
        .unwrap();
        assert_eq!(l.len(), 7);
        let wt = MultiIndex::single(0);
        assert_eq!(l.jet_partial(1, &wt), parse_lagrangian("a*v_xx", &s).unwrap());
    }

    #[test]
    fn suffix_order_is_normalized() {
        assert!(parse_lagrangian("v_xt - v_tx", &space()).unwrap().is_zero());
    }

    #[test]
    fn unknown_symbols() {
        let s = space();
        assert_eq!(parse_lagrangian("1/2*q*v", &s), Err(Error::UnknownSymbol("q".into())));
        assert!(matches!(parse_lagrangian("v_z", &s), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_lagrangian("a_x", &s), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn depth_is_checked() {
        let err = parse_lagrangian("v_xxx", &space()).unwrap_err();
        assert_eq!(
            err,
            Error::DepthExceeded {
                symbol: "v_xxx".into(),
                depth: 3,
                order: 2
            }
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let s = space();
        match parse_lagrangian("v +\n 2 v_x", &s) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_lagrangian("v^0", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_lagrangian("v/v_x", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_lagrangian("(v", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_lagrangian("v # 2", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_lagrangian("v/0", &s), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn division_by_parameters() {
        let s = space();
        let f = parse_lagrangian("v/a*a", &s).unwrap();
        assert_eq!(f, DiffPoly::field(0));
    }

    #[test]
    fn round_trip() {
        let s = space();
        for src in [
            "0",
            "-v",
            "3/2*a^2*v_tt*w - v_x/beta^2 + 7",
            "-1/3*t*x*v_y^3 + beta*w_tx",
            "(v + w)^3 - 2*a*b/beta",
        ] {
            let f = parse_lagrangian(src, &s).unwrap();
            let printed = pretty_print(&s, &f);
            assert_eq!(parse_lagrangian(&printed, &s).unwrap(), f, "{src} -> {printed}");
        }
    }

    #[test]
    fn prints_canonical_names() {
        let s = space();
        let f = parse_lagrangian("1/2*v_xt", &s).unwrap();
        assert_eq!(pretty_print(&s, &f), "v_tx/2");
        assert_eq!(f, DiffPoly::jet(0, MultiIndex::from_indices(&[0, 1])).scale(&rat(1, 2)));
    }
}
