//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expression := ['+'|'-'] term (('+'|'-') term)*
//! term       := factor ('*' factor)*
//! factor     := number | var ['^' uint] | '(' expression ')' ['^' uint]
//! var        := 'x' uint        (1-based)
//! ```
//!
//! Numbers accept an optional fraction and decimal exponent (`2.5e-3`).

use super::{PolyError, Polynomial};

/// Parses a single polynomial expression in `nvars` variables.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial, PolyError> {
    parse_at_line(text, nvars, 1)
}

pub(crate) fn parse_at_line(text: &str, nvars: usize, line: usize) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        nvars,
        line,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let poly = p.expression()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected character '{}'", p.chars[p.pos])));
    }
    Ok(poly)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
    line: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> PolyError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: &str) -> PolyError {
        PolyError::Parse {
            line: self.line,
            column: pos + 1,
            message: message.to_string(),
        }
    }

    fn expression(&mut self) -> Result<Polynomial, PolyError> {
        self.skip_ws();
        let mut sign = 1.0;
        match self.peek() {
            Some('-') => {
                sign = -1.0;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?.scale(sign);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some('x') => {
                let start = self.pos;
                self.pos += 1;
                let index = self.uint("variable index")?;
                if index == 0 {
                    return Err(self.error_at(start, "variables are numbered from x1"));
                }
                if index as usize > self.nvars {
                    return Err(PolyError::Index {
                        index: index as usize,
                        nvars: self.nvars,
                        line: self.line,
                        column: start + 1,
                    });
                }
                let base = Polynomial::variable(self.nvars, index as usize - 1);
                let k = self.power()?;
                Ok(base.pow(k))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expression()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                let k = self.power()?;
                Ok(inner.pow(k))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let c = self.number()?;
                Ok(Polynomial::constant(self.nvars, c))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn power(&mut self) -> Result<u32, PolyError> {
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            self.uint("exponent")
        } else {
            Ok(1)
        }
    }

    fn uint(&mut self, what: &str) -> Result<u32, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(&format!("expected {}", what)));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| self.error_at(start, &format!("{} out of range", what)))
    }

    fn number(&mut self) -> Result<f64, PolyError> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            let s = p.pos;
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some('.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(self.error_at(start, "malformed number"));
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error_at(save, "malformed exponent"));
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let v: f64 = s
            .parse()
            .map_err(|_| self.error_at(start, "malformed number"))?;
        if !v.is_finite() {
            return Err(self.error_at(start, "number is not finite"));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_error_reports_position() {
        match parse_polynomial("x1 + x3", 2) {
            Err(PolyError::Index { index, nvars, column, .. }) => {
                assert_eq!((index, nvars, column), (3, 2, 6));
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "x1 +", "x", "x0", "2**x1", "x1^", "(x1", "x1 x2", "e5", "1e"] {
            let r = parse_polynomial(bad, 2);
            assert!(matches!(r, Err(PolyError::Parse { .. })), "{:?} -> {:?}", bad, r);
        }
    }

    #[test]
    fn parenthesised_powers_expand() {
        let p = parse_polynomial("(x1*x2 - 1)^2", 2).unwrap();
        assert_eq!(p.coefficient(&[2, 2]), 1.0);
        assert_eq!(p.coefficient(&[1, 1]), -2.0);
        assert_eq!(p.coefficient(&[0, 0]), 1.0);
    }

    #[test]
    fn numbers_with_exponents() {
        let p = parse_polynomial("-2.5e-1*x1 + 1E2", 1).unwrap();
        assert_eq!(p.coefficient(&[1]), -0.25);
        assert_eq!(p.coefficient(&[0]), 100.0);
    }
}
