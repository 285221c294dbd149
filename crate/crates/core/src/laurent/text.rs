//! Canonical text form.
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := [integer '*']? factor ('*' factor)*  |  integer
//! factor := var ['^' integer]
//! var    := name | 'tau' '[' t ';' n1 ',' ... ',' nd ']'
//! ```
//!
//! Serialization emits terms in graded-lex descending order, factors in
//! variable-id order, and exactly one space around binary `+` and `-`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{LaurentPoly, Monomial, VarId, VarName, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: expected {expected}, found {found}")]
pub struct ParseError {
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

pub fn serialize(p: &LaurentPoly, table: &VarTable) -> String {
    serialize_with(p, &|v| match table.name(v) {
        Some(n) => n.to_string(),
        None => v.to_string(),
    })
}

pub(crate) fn serialize_with(p: &LaurentPoly, name: &dyn Fn(VarId) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        if m.is_one() {
            out.push_str(&abs.to_string());
            continue;
        }
        if !abs.is_one() {
            out.push_str(&abs.to_string());
            out.push('*');
        }
        for (j, &(v, e)) in m.exponents().iter().enumerate() {
            if j > 0 {
                out.push('*');
            }
            out.push_str(&name(v));
            if e != 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
    out
}

/// Parses `text`, registering unseen variable names in `table`.
pub fn parse(text: &str, table: &mut VarTable) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        table,
    };
    let poly = p.poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("'+', '-' or end of input"));
    }
    Ok(poly)
}

struct Parser<'a, 't> {
    src: &'a [u8],
    pos: usize,
    table: &'t mut VarTable,
}

impl Parser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.src.get(self.pos) {
            Some(&b) => format!("'{}'", b as char),
            None => "end of input".to_string(),
        };
        ParseError {
            pos: self.pos,
            expected: expected.to_string(),
            found,
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", b as char)))
        }
    }

    fn poly(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut terms = Vec::new();
        let mut negative = self.eat(b'-');
        loop {
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            terms.push((m, c));
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(Monomial, BigInt), ParseError> {
        let mut coeff = BigInt::one();
        let mut factors = Vec::new();
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                coeff = self.unsigned()?;
                if !self.eat(b'*') {
                    return Ok((Monomial::one(), coeff));
                }
                factors.push(self.factor()?);
            }
            Some(b) if is_name_start(b) => factors.push(self.factor()?),
            _ => return Err(self.error("integer or variable")),
        }
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok((Monomial::from_pairs(factors), coeff))
    }

    fn factor(&mut self) -> Result<(VarId, i32), ParseError> {
        let name = self.var()?;
        let id = self.table.intern(name);
        let e = if self.eat(b'^') {
            let e = self.signed()?;
            i32::try_from(&e).map_err(|_| ParseError {
                pos: self.pos,
                expected: "exponent within 32-bit range".into(),
                found: e.to_string(),
            })?
        } else {
            1
        };
        Ok((id, e))
    }

    fn var(&mut self) -> Result<VarName, ParseError> {
        match self.peek() {
            Some(b) if is_name_start(b) => {}
            _ => return Err(self.error("variable name")),
        }
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        if name == "tau" && self.peek() == Some(b'[') {
            self.pos += 1;
            let t = self.small_int()?;
            self.expect(b';')?;
            let mut point = vec![self.small_int()?];
            while self.eat(b',') {
                point.push(self.small_int()?);
            }
            self.expect(b']')?;
            return Ok(VarName::Tau { t, point });
        }
        Ok(VarName::Symbol(name))
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let v = self.signed()?;
        i64::try_from(&v).map_err(|_| ParseError {
            pos: self.pos,
            expected: "index within 64-bit range".into(),
            found: v.to_string(),
        })
    }

    fn signed(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let v = self.unsigned()?;
        Ok(if neg { -v } else { v })
    }

    fn unsigned(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("decimal digits"))
    }
}

fn is_name_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialize_examples() {
        let mut t = VarTable::new();
        let x = LaurentPoly::var(t.symbol("x"));
        assert_eq!(serialize(&(&(&x * &x) - &LaurentPoly::one()), &t), "x^2 - 1");
        assert_eq!(serialize(&LaurentPoly::zero(), &t), "0");
        assert_eq!(serialize(&x.neg(), &t), "-x");

        let mut t = VarTable::new();
        let a = t.tau(1, &[0, 1]);
        let b = t.tau(0, &[2, 0]);
        let m = Monomial::from_pairs([(a, 3), (b, -1)]);
        assert_eq!(serialize(&LaurentPoly::term(m, 2), &t), "2*tau[1;0,1]^3*tau[0;2,0]^-1");
    }

    #[test]
    fn parse_examples() {
        let mut t = VarTable::new();
        let p = parse("x^2 - 1", &mut t).unwrap();
        assert_eq!(serialize(&p, &t), "x^2 - 1");
        let p = parse(" -3 * a'^-2*tau[2;-1,0] +a'-a'", &mut t).unwrap();
        assert_eq!(serialize(&p, &t), "-3*a'^-2*tau[2;-1,0]");
        // factor order follows registration order, not spelling
        let mut t = VarTable::new();
        let p = parse("b*a + a*b", &mut t).unwrap();
        assert_eq!(serialize(&p, &t), "2*b*a");
    }

    #[test]
    fn parse_reports_position() {
        let mut t = VarTable::new();
        let e = parse("x + * y", &mut t).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(e.expected.contains("integer or variable"));
        let e = parse("tau[1;2", &mut t).unwrap_err();
        assert_eq!(e.found, "end of input");
        assert!(parse("x y", &mut t).is_err());
        assert!(parse("", &mut t).is_err());
    }
}
