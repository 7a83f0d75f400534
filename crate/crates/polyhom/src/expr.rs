//! The text grammar for cell expressions.
//!
//! ```text
//! expr := name | "id(" expr "," n ")" | "(" expr " *k " expr ")"
//! ```
//!
//! Parentheses are mandatory around every composite; there is no
//! precedence. Names are runs of characters other than whitespace, `(`,
//! `)` and `,`. This is the format `CellExpr` prints with `Display`.

use std::collections::BTreeMap;

use polyhom_core::CellExpr;

use crate::error::Error;

/// An expression whose generator names are not yet resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawExpr {
    Name(String),
    Unit(Box<RawExpr>, usize),
    Comp(usize, Box<RawExpr>, Box<RawExpr>),
}

impl RawExpr {
    /// Looks every name up in `dims`. Unknown names are reported with the
    /// name itself.
    pub fn resolve(&self, dims: &BTreeMap<String, usize>) -> Result<CellExpr, String> {
        Ok(match self {
            RawExpr::Name(n) => CellExpr::gen(n.clone(), *dims.get(n).ok_or_else(|| n.clone())?),
            RawExpr::Unit(b, d) => CellExpr::unit(b.resolve(dims)?, *d),
            RawExpr::Comp(k, l, r) => CellExpr::comp(*k, l.resolve(dims)?, r.resolve(dims)?),
        })
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',')
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn err<T>(&self, what: &str) -> Result<T, Error> {
        Err(Error::parse(format!("expression `{}` at offset {}: {what}", self.src, self.pos)))
    }

    fn expect(&mut self, s: &str) -> Result<(), Error> {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            self.err(&format!("expected `{s}`"))
        }
    }

    fn number(&mut self) -> Result<usize, Error> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return self.err("expected a number");
        }
        self.pos += digits.len();
        digits.parse().or_else(|_| self.err("number out of range"))
    }

    fn expr(&mut self) -> Result<RawExpr, Error> {
        self.skip_ws();
        let r = self.rest();
        if r.starts_with('(') {
            self.pos += 1;
            let left = self.expr()?;
            self.expect("*")?;
            // `*k` has no space between the star and the digits
            if !self.rest().starts_with(|c: char| c.is_ascii_digit()) {
                return self.err("expected a digit after `*`");
            }
            let k = self.number()?;
            let right = self.expr()?;
            self.expect(")")?;
            return Ok(RawExpr::Comp(k, Box::new(left), Box::new(right)));
        }
        if r.starts_with("id(") {
            self.pos += 3;
            let base = self.expr()?;
            self.expect(",")?;
            let dim = self.number()?;
            self.expect(")")?;
            return Ok(RawExpr::Unit(Box::new(base), dim));
        }
        let name: String = r.chars().take_while(|&c| is_name_char(c)).collect();
        if name.is_empty() {
            return self.err("expected a generator name");
        }
        self.pos += name.len();
        Ok(RawExpr::Name(name))
    }
}

pub fn parse_expr(src: &str) -> Result<RawExpr, Error> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return p.err("trailing input");
    }
    Ok(e)
}
