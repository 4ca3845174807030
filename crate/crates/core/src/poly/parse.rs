//! Infix polynomial parser: `"1 - x^2 - 3.5*x*y + (x - y)^2"`.
//!
//! Variables are `x`, `y`, `z` (the first `nvars` of them). Juxtaposition
//! multiplies (`2xy`). Exponents are non-negative integer literals; division
//! is by nonzero constants only.

use super::{PolyError, Polynomial};
use crate::scalar::Scalar;

const VARIABLES: [char; 3] = ['x', 'y', 'z'];

pub fn parse_polynomial<T: Scalar>(text: &str, nvars: usize) -> Result<Polynomial<T>, PolyError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        nvars,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr<T: Scalar>(&mut self) -> Result<Polynomial<T>, PolyError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term<T: Scalar>(&mut self) -> Result<Polynomial<T>, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.power()?;
                    let c = f.coeff(&vec![0; self.nvars]);
                    if f.degree() > 0 || c == T::zero() {
                        return Err(PolyError::Parse {
                            pos: at,
                            msg: "divisor must be a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(T::one() / c);
                }
                Some(c) if c == '(' || c.is_ascii_digit() || c == '.' || VARIABLES.contains(&c) => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<T: Scalar>(&mut self) -> Result<Polynomial<T>, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let k: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| PolyError::Parse {
                    pos: start,
                    msg: "exponent too large".into(),
                })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom<T: Scalar>(&mut self) -> Result<Polynomial<T>, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if VARIABLES.contains(&c) => {
                let i = VARIABLES.iter().position(|&v| v == c).expect("listed");
                if i >= self.nvars {
                    return Err(self.error(&format!("variable '{c}' not available with {} variables", self.nvars)));
                }
                self.pos += 1;
                Ok(Polynomial::var(self.nvars, i))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number<T: Scalar>(&mut self) -> Result<Polynomial<T>, PolyError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit() || *c == '.') {
                p.pos += 1;
            }
        };
        digits(self);
        // Scientific notation, only when followed by a digit or sign+digit.
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mut look = self.pos + 1;
            if matches!(self.chars.get(look), Some('+' | '-')) {
                look += 1;
            }
            if self.chars.get(look).is_some_and(char::is_ascii_digit) {
                self.pos = look;
                digits(self);
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let value: f64 = s.parse().map_err(|_| PolyError::Parse {
            pos: start,
            msg: format!("bad number '{s}'"),
        })?;
        Ok(Polynomial::constant(self.nvars, T::from_f64_lossy(value)))
    }
}
