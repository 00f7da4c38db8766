//! Text parser for scalars: the inverse of `Display`, plus ordinary
//! arithmetic syntax (`a^2 - b/2`, `2*pi*i*alpha3`, `(1/2-3i)*c`).

use num_bigint::BigInt;

use super::{qi, ExactError, ExactScalar, Var, Q};

pub(super) fn parse_scalar(s: &str) -> Result<ExactScalar, ExactError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ExactScalar, ExactError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExactScalar, ExactError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|e| ExactError::Parse { pos: at, msg: e.to_string() })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExactScalar, ExactError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ExactScalar, ExactError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let n = self.integer()?;
            let n: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
            let p = base.pow(n);
            return if neg { p.inv().map_err(|e| self.err(&e.to_string())) } else { Ok(p) };
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("integer overflow"))
    }

    fn atom(&mut self) -> Result<ExactScalar, ExactError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                let r = Q::from_integer(n);
                if self.src.get(self.pos) == Some(&b'i') && !self.ident_continues(self.pos + 1) {
                    self.pos += 1;
                    return Ok(ExactScalar::gauss(qi(0), r));
                }
                Ok(ExactScalar::from_rational(r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.ident_continues(self.pos) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "i" {
                    return Ok(ExactScalar::i());
                }
                Var::from_name(name)
                    .map(ExactScalar::var)
                    .ok_or(ExactError::Parse { pos: start, msg: format!("unknown indeterminate `{name}`") })
            }
            _ => Err(self.err("expected a number, indeterminate or `(`")),
        }
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.src.get(at).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn parses_display_output() {
        let s = "(2i)*pi^1*alpha6 + (-1/2)*a^2*c^-1";
        let x = ExactScalar::parse(s).unwrap();
        assert_eq!(ExactScalar::parse(&x.to_string()).unwrap(), x);
        let y = ExactScalar::parse("(1/2-3i)*b").unwrap();
        assert_eq!(y.to_string(), "(1/2-3i)*b");
    }

    #[test]
    fn arithmetic_syntax() {
        let x = ExactScalar::parse("a^2 - (b + c)*(b - c) - a*a + b^2").unwrap();
        assert_eq!(x, ExactScalar::parse("c^2").unwrap());
        assert!(ExactScalar::parse("a/(b+c)").is_err());
        assert!(ExactScalar::parse("zeta").is_err());
        assert_eq!(ExactScalar::parse("1/a").unwrap(), ExactScalar::var(Var::A).inv().unwrap());
    }
}
