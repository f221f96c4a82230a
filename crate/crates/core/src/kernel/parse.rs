//! Text parser for polynomial-weighted linear combinations.
//!
//! The grammar is the usual one for sums of products:
//!
//! ```text
//! expr    := [+|-] term { (+|-) term }
//! term    := factor { (*|/) factor }
//! factor  := primary [ ^ integer ]
//! primary := number | name | name[...] | |...> | ( expr )
//! ```
//!
//! Parameter names resolve to [`ParamPoly`] variables; any other name is
//! handed to a caller-supplied resolver that turns it into a basis symbol.
//! Each product may contain at most one basis symbol, and `/` only divides
//! by nonzero rational constants.

use std::collections::BTreeMap;

use super::{KernelError, Param, ParamPoly, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Token>, KernelError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::LParen);
                i += 1
            }
            ')' => {
                out.push(Token::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(text.parse()?));
            }
            '|' => {
                let start = i;
                while i < chars.len() && chars[i] != '>' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(KernelError::Parse(format!("unterminated `|...>` in `{s}`")));
                }
                i += 1;
                out.push(Token::Name(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '[' {
                    while i < chars.len() && chars[i] != ']' {
                        i += 1;
                    }
                    if i == chars.len() {
                        return Err(KernelError::Parse(format!("unterminated `[` in `{s}`")));
                    }
                    i += 1;
                }
                out.push(Token::Name(chars[start..i].iter().collect()));
            }
            other => {
                return Err(KernelError::Parse(format!(
                    "unexpected character `{other}` in `{s}`"
                )))
            }
        }
    }
    Ok(out)
}

/// A parsed combination: a pure-scalar part plus basis symbols with
/// polynomial weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear<K: Ord> {
    pub scalar: ParamPoly,
    pub basis: BTreeMap<K, ParamPoly>,
}

impl<K: Ord + Clone> Linear<K> {
    fn scalar(p: ParamPoly) -> Self {
        Linear {
            scalar: p,
            basis: BTreeMap::new(),
        }
    }

    fn is_scalar(&self) -> bool {
        self.basis.is_empty()
    }

    fn add(mut self, other: Linear<K>, sign: i64) -> Self {
        let s = Rational::from_int(sign);
        self.scalar.add_scaled(&other.scalar, &s);
        for (k, c) in other.basis {
            let e = self.basis.entry(k.clone()).or_default();
            e.add_scaled(&c, &s);
            if e.is_zero() {
                self.basis.remove(&k);
            }
        }
        self
    }

    fn scale(self, c: &ParamPoly) -> Self {
        Linear {
            scalar: &self.scalar * c,
            basis: self
                .basis
                .into_iter()
                .map(|(k, x)| (k, &x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }
}

struct Parser<'a, K> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
    resolve: &'a dyn Fn(&str) -> Option<K>,
}

impl<'a, K: Ord + Clone> Parser<'a, K> {
    fn err(&self, what: &str) -> KernelError {
        KernelError::Parse(format!("{what} in `{}`", self.src))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Linear<K>, KernelError> {
        let mut sign = 1;
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                sign = -1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = Linear::scalar(ParamPoly::zero()).add(self.term()?, sign);
        loop {
            let sign = match self.peek() {
                Some(Token::Plus) => 1,
                Some(Token::Minus) => -1,
                _ => break,
            };
            self.pos += 1;
            acc = acc.add(self.term()?, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Linear<K>, KernelError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = match (acc.is_scalar(), rhs.is_scalar()) {
                        (true, _) => rhs.scale(&acc.scalar),
                        (false, true) => acc.scale(&rhs.scalar),
                        (false, false) => return Err(self.err("product of two basis symbols")),
                    };
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let d = rhs
                        .is_scalar()
                        .then(|| rhs.scalar.as_constant())
                        .flatten()
                        .and_then(|d| d.recip())
                        .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                    acc = acc.scale(&ParamPoly::constant(d));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Linear<K>, KernelError> {
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.next() {
                Some(Token::Num(n)) => n.to_i64().filter(|&e| (0..=u16::MAX as i64).contains(&e)),
                _ => None,
            }
            .ok_or_else(|| self.err("exponent must be a nonnegative integer"))?;
            if !base.is_scalar() {
                return Err(self.err("power of a basis symbol"));
            }
            return Ok(Linear::scalar(base.scalar.pow(e as u32)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Linear<K>, KernelError> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Linear::scalar(ParamPoly::constant(n))),
            Some(Token::Name(name)) => {
                if let Some(p) = Param::from_name(&name) {
                    return Ok(Linear::scalar(ParamPoly::var(p)));
                }
                match (self.resolve)(&name) {
                    Some(k) => {
                        let mut basis = BTreeMap::new();
                        basis.insert(k, ParamPoly::one());
                        Ok(Linear {
                            scalar: ParamPoly::zero(),
                            basis,
                        })
                    }
                    None => Err(self.err(&format!("unknown symbol `{name}`"))),
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.err("missing `)`")),
                }
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

/// Parses a linear combination whose non-parameter names are resolved by
/// `resolve`.
pub fn parse_linear<K: Ord + Clone>(
    s: &str,
    resolve: &dyn Fn(&str) -> Option<K>,
) -> Result<Linear<K>, KernelError> {
    let tokens = lex(s)?;
    if tokens.is_empty() {
        return Err(KernelError::Parse("empty expression".into()));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        src: s,
        resolve,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

pub fn parse_poly(s: &str) -> Result<ParamPoly, KernelError> {
    let none = |_: &str| -> Option<()> { None };
    Ok(parse_linear(s, &none)?.scalar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly("l1/2").unwrap().to_string(), "1/2*l1");
        assert_eq!(
            parse_poly("-(h - 1)^2").unwrap().to_string(),
            "-h^2 + 2*h - 1"
        );
        assert_eq!(parse_poly("3/4").unwrap().to_string(), "3/4");
        assert!(parse_poly("l1 +").is_err());
        assert!(parse_poly("x1").is_err());
        assert!(parse_poly("l1/l3").is_err());
        assert!(parse_poly("(l1").is_err());
    }

    #[test]
    fn linear_combinations() {
        let resolve = |s: &str| (s == "e" || s.starts_with("E[")).then(|| s.to_string());
        let lin = parse_linear("2*E[1] - l1*e + (h + 1)*E[1]", &resolve).unwrap();
        assert!(lin.scalar.is_zero());
        assert_eq!(lin.basis["E[1]"].to_string(), "h + 3");
        assert_eq!(lin.basis["e"].to_string(), "-l1");
        assert!(parse_linear("e*e", &resolve).is_err());
        assert!(parse_linear("e^2", &resolve).is_err());
    }
}
