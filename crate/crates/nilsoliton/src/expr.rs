//! Arithmetic expression strings for structure constants.
//!
//! The grammar is deliberately tiny: numbers, named parameters, parentheses,
//! unary minus, `+ - * /` and `sqrt(...)`. Everything a table constant like
//! `-sqrt(6)/12` or `(s-1)/(2*sqrt(s*s-s+1))` needs, and nothing more.

use crate::error::Error;
use std::collections::BTreeMap;

/// Evaluate an expression with the given parameter bindings.
pub fn eval(src: &str, params: &BTreeMap<String, f64>) -> Result<f64, Error> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, params };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Expr(format!("unexpected trailing input at byte {} in '{src}'", p.pos)));
    }
    if !v.is_finite() {
        return Err(Error::Expr(format!("'{src}' does not evaluate to a finite number")));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    params: &'a BTreeMap<String, f64>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<f64, Error> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc /= self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, Error> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Expr("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            other => Err(Error::Expr(format!("unexpected token {:?}", other.map(|c| c as char)))),
        }
    }

    fn number(&mut self) -> Result<f64, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // optional exponent
        if self.pos < self.src.len() && (self.src[self.pos] | 32) == b'e' {
            let mut p = self.pos + 1;
            if p < self.src.len() && (self.src[p] == b'+' || self.src[p] == b'-') {
                p += 1;
            }
            if p < self.src.len() && self.src[p].is_ascii_digit() {
                self.pos = p;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|_| Error::Expr(format!("bad number literal '{text}'")))
    }

    fn ident(&mut self) -> Result<f64, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        if name == "sqrt" {
            if self.peek() != Some(b'(') {
                return Err(Error::Expr("sqrt needs parentheses".into()));
            }
            self.pos += 1;
            let v = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(Error::Expr("missing closing parenthesis after sqrt".into()));
            }
            self.pos += 1;
            if v < 0.0 {
                return Err(Error::Expr(format!("sqrt of negative value {v}")));
            }
            return Ok(v.sqrt());
        }
        self.params
            .get(&name)
            .copied()
            .ok_or_else(|| Error::Expr(format!("unknown parameter '{name}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> f64 {
        eval(s, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn table_constants() {
        assert!((ev("sqrt(2)/4") - 2.0f64.sqrt() / 4.0).abs() < 1e-16);
        assert!((ev("-sqrt(6)/12") + 6.0f64.sqrt() / 12.0).abs() < 1e-16);
        assert!((ev("3*sqrt(11)/22") - 3.0 * 11.0f64.sqrt() / 22.0).abs() < 1e-16);
        assert!((ev("1/2") - 0.5).abs() < 1e-16);
        assert!((ev("-(1+2)*3") + 9.0).abs() < 1e-16);
        assert!((ev("2e-3") - 0.002).abs() < 1e-18);
    }

    #[test]
    fn parameters() {
        let mut p = BTreeMap::new();
        p.insert("s".to_string(), 2.0);
        assert!(
            (eval("(s-1)/(2*sqrt(s*s-s+1))", &p).unwrap() - 1.0 / (2.0 * 3.0f64.sqrt())).abs()
                < 1e-15
        );
        assert!(eval("t", &p).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(eval("1 +", &BTreeMap::new()).is_err());
        assert!(eval("sqrt(-1)", &BTreeMap::new()).is_err());
        assert!(eval("2 ** 3", &BTreeMap::new()).is_err());
        assert!(eval("1/0", &BTreeMap::new()).is_err());
        assert!(eval("(1", &BTreeMap::new()).is_err());
    }
}
