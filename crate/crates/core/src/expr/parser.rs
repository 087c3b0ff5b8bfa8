use std::collections::BTreeMap;
use std::fmt;

use super::{Constant, Expr, Func};

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownIdentifier(String),
}

/// A parse failure with the byte offset at which it was detected.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(
                f,
                "syntax error at offset {}: expected {}, found {}",
                self.offset,
                expected.join(" or "),
                found
            ),
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier '{name}' at offset {}", self.offset)
            }
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse_expr_with(text, &BTreeMap::new())
}

/// Parses with named numeric constants substituted for identifiers.
pub fn parse_expr_with(text: &str, constants: &BTreeMap<String, f64>) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        constants,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(&["operator", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    constants: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, expected: &[&str]) -> ParseError {
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("'{}'", c as char),
            None => "end of input".to_string(),
        };
        ParseError {
            offset: self.pos,
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found,
            },
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            let s = (c as char).to_string();
            Err(self.syntax(&[s.as_str()]))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := primary ('^' unary)?   (right-associative through unary)
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            _ => Err(self.syntax(&["number", "identifier", "("])),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.syntax(&["number"]));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // not an exponent; leave 'e' for the caller
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>().map(Expr::Num).map_err(|_| ParseError {
            offset: start,
            kind: ParseErrorKind::Syntax {
                expected: vec!["number".into()],
                found: format!("'{text}'"),
            },
        })
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        if let Some(func) = Func::from_name(name) {
            self.expect(b'(')?;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        match name {
            "t" => Ok(Expr::Param),
            "pi" => Ok(Expr::Const(Constant::Pi)),
            "e" => Ok(Expr::Const(Constant::E)),
            _ => match self.constants.get(name) {
                Some(&v) => Ok(Expr::Num(v)),
                None => Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unbalanced_parenthesis() {
        let err = parse_expr("sin(t").unwrap_err();
        assert_eq!(err.offset, 5);
        match err.kind {
            ParseErrorKind::Syntax { expected, .. } => assert_eq!(expected, vec![")".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_named() {
        let err = parse_expr("2 * foo + t").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("foo".into()));
    }

    #[test]
    fn constants_substitute() {
        let mut c = BTreeMap::new();
        c.insert("a0".to_string(), 0.6);
        let e = parse_expr_with("a0 * cosh(t)", &c).unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 0.6);
    }

    #[test]
    fn numbers_and_whitespace() {
        assert_eq!(parse_expr(" 1.5e2 ").unwrap(), Expr::Num(150.0));
        assert_eq!(parse_expr(".5").unwrap(), Expr::Num(0.5));
        // "2e" is the number 2 followed by the constant e: rejected, no operator
        assert!(parse_expr("2e").is_err());
        assert!((parse_expr("2*e").unwrap().eval(0.0).unwrap() - 2.0 * std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn trailing_garbage_and_empty() {
        assert_eq!(parse_expr("t )").unwrap_err().offset, 2);
        assert_eq!(parse_expr("").unwrap_err().offset, 0);
        assert!(parse_expr("sin t").is_err());
        assert!(parse_expr("t +").is_err());
    }
}
