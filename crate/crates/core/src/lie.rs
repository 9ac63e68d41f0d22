//! Lie operations in the truncated tensor algebra: brackets, the Dynkin
//! bracketing map, exponential, logarithm and BCH composition.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tensor::{AlgebraContext, Monomial, Tensor};

pub fn bracket(u: &Tensor, v: &Tensor) -> Tensor {
    &(u * v) - &(v * u)
}

/// Right-nested bracketing of a monomial: `X1..Xn -> [X1,[X2,...[X_{n-1},X_n]]]`,
/// with integer coefficients.
pub fn phi_monomial(w: &[u8]) -> Vec<(Monomial, i64)> {
    match w.len() {
        0 => Vec::new(),
        1 => vec![(Monomial::from_slice(w), 1)],
        _ => {
            let inner = phi_monomial(&w[1..]);
            let x = w[0];
            let mut out = Vec::with_capacity(2 * inner.len());
            for (m, c) in &inner {
                let mut left = Monomial::with_capacity(w.len());
                left.push(x);
                left.extend_from_slice(m);
                out.push((left, *c));
                let mut right = m.clone();
                right.push(x);
                out.push((right, -*c));
            }
            out
        }
    }
}

/// Linear extension of [`phi_monomial`]. Errors on a nonzero constant term.
pub fn phi(t: &Tensor) -> Result<Tensor> {
    if !t.constant().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let mut out = Tensor::zero(t.ctx());
    for (m, c) in t.terms() {
        for (w, k) in phi_monomial(m) {
            out.add_term(w, c * &Rational::from_int(k));
        }
    }
    Ok(out)
}

/// Dynkin-Specht-Wever test: `u` is Lie iff it has no constant term and
/// `phi(u_n) = n u_n` in every degree.
pub fn is_lie(t: &Tensor) -> bool {
    first_non_lie_degree(t).is_none()
}

pub fn first_non_lie_degree(t: &Tensor) -> Option<usize> {
    if !t.constant().is_zero() {
        return Some(0);
    }
    let p = phi(t).expect("constant checked");
    let weighted = Tensor::from_terms(
        t.ctx(),
        t.terms()
            .map(|(m, c)| (m.clone(), c * &Rational::from_int(m.len() as i64))),
    );
    let diff = &p - &weighted;
    diff.min_degree()
}

/// `exp(u) = sum u^n / n!` for `u` without constant term.
pub fn exp(u: &Tensor) -> Result<Tensor> {
    if !u.constant().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let ctx = u.ctx();
    let mut out = Tensor::one(ctx);
    let mut power = Tensor::one(ctx);
    for n in 1..=ctx.truncation() {
        power = &power * u;
        if power.is_zero() {
            break;
        }
        out.add_scaled(&power, &Rational::inv_factorial(n as u32));
    }
    Ok(out)
}

/// `log(u) = sum (-1)^(n-1)/n (u-1)^n` for `u` with constant term one.
pub fn log(u: &Tensor) -> Result<Tensor> {
    if !u.constant().is_one() {
        return Err(Error::ConstantNotOne);
    }
    let ctx = u.ctx();
    let x = u - &Tensor::one(ctx);
    let mut out = Tensor::zero(ctx);
    let mut power = Tensor::one(ctx);
    for n in 1..=ctx.truncation() {
        power = &power * &x;
        if power.is_zero() {
            break;
        }
        let sign = if n % 2 == 1 { 1 } else { -1 };
        out.add_scaled(&power, &Rational::new(sign, n as i64));
    }
    Ok(out)
}

/// `log(exp(u) exp(v))`.
pub fn bch(u: &Tensor, v: &Tensor) -> Result<Tensor> {
    u.ctx().check_same(&v.ctx())?;
    log(&(&exp(u)? * &exp(v)?))
}

/// A tensor certified to be a Lie element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieElement(Tensor);

impl LieElement {
    pub fn new(t: Tensor) -> Result<Self> {
        match first_non_lie_degree(&t) {
            None => Ok(LieElement(t)),
            Some(0) => Err(Error::NonzeroConstant),
            Some(degree) => Err(Error::NotLie { degree }),
        }
    }

    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor {
        self.0
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        LieElement(bracket(&self.0, &other.0))
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::display::format_lie(&self.0))
    }
}

/// Parses sums of rational multiples of products of letters (`A1`, `B2`, ...),
/// brackets `[x,y]` and parenthesized expressions, evaluated in `ctx`.
pub fn parse_expression(ctx: AlgebraContext, s: &str) -> Result<Tensor> {
    let mut p = ExprParser {
        ctx,
        src: s.as_bytes(),
        pos: 0,
    };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

struct ExprParser<'a> {
    ctx: AlgebraContext,
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
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

    fn expr(&mut self) -> Result<Tensor> {
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut out = self.term()?.scale(&Rational::from_int(sign));
        loop {
            let s = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => break,
            };
            self.pos += 1;
            out.add_scaled(&self.term()?, &Rational::from_int(s));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Tensor> {
        let mut coeff = Rational::one();
        let mut have_coeff = false;
        if let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                coeff = self.rational()?;
                have_coeff = true;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
            }
        }
        let mut product: Option<Tensor> = None;
        while let Some(c) = self.peek() {
            if !(c == b'[' || c == b'(' || c == b'A' || c == b'B') {
                break;
            }
            let f = self.factor()?;
            product = Some(match product {
                None => f,
                Some(p) => &p * &f,
            });
        }
        match product {
            Some(p) => Ok(p.scale(&coeff)),
            None if have_coeff => Ok(Tensor::scalar(self.ctx, coeff)),
            None => Err(self.err("expected a term")),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("invalid coefficient `{text}`"),
        })
    }

    fn factor(&mut self) -> Result<Tensor> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b',') {
                    return Err(self.err("expected `,`"));
                }
                self.pos += 1;
                let y = self.expr()?;
                if self.peek() != Some(b']') {
                    return Err(self.err("expected `]`"));
                }
                self.pos += 1;
                Ok(bracket(&x, &y))
            }
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(x)
            }
            Some(c @ (b'A' | b'B')) => {
                let start = self.pos;
                self.pos += 1;
                let ds = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let i: usize = std::str::from_utf8(&self.src[ds..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::Parse {
                        position: start,
                        message: "expected handle number after letter".into(),
                    })?;
                if i == 0 || i > self.ctx.genus() {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("handle {i} out of range for genus {}", self.ctx.genus()),
                    });
                }
                let idx = 2 * (i - 1) + usize::from(c == b'B');
                Ok(Tensor::basis(self.ctx, idx))
            }
            _ => Err(self.err("expected a letter, `[` or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: usize, n: usize) -> AlgebraContext {
        AlgebraContext::new(g, n).unwrap()
    }

    #[test]
    fn phi_of_degree_two() {
        let c = ctx(1, 3);
        let ab = Tensor::monomial(c, &[0, 1], Rational::one());
        let expected = parse_expression(c, "A1 B1 - B1 A1").unwrap();
        assert_eq!(phi(&ab).unwrap(), expected);
        assert!(phi(&Tensor::one(c)).is_err());
    }

    #[test]
    fn lie_detection() {
        let c = ctx(2, 4);
        let u = parse_expression(c, "[A1,[A2,B1]] + 1/3 [B2,A1]").unwrap();
        assert!(is_lie(&u));
        let v = parse_expression(c, "A1 A1").unwrap();
        assert!(!is_lie(&v));
        assert!(!is_lie(&Tensor::one(c)));
    }

    #[test]
    fn exp_log_inverse() {
        let c = ctx(1, 5);
        let u = parse_expression(c, "A1 + 1/2 [A1,B1] - 2 B1 A1 A1").unwrap();
        assert_eq!(log(&exp(&u).unwrap()).unwrap(), u);
        assert!(matches!(log(&u), Err(Error::ConstantNotOne)));
        assert!(matches!(exp(&Tensor::one(c)), Err(Error::NonzeroConstant)));
    }

    #[test]
    fn bch_low_degrees() {
        let c = ctx(1, 3);
        let a = Tensor::basis(c, 0);
        let b = Tensor::basis(c, 1);
        let expected = parse_expression(
            c,
            "A1 + B1 + 1/2 [A1,B1] + 1/12 [A1,[A1,B1]] + 1/12 [B1,[B1,A1]]",
        )
        .unwrap();
        assert_eq!(bch(&a, &b).unwrap(), expected);
    }

    #[test]
    fn parse_errors_report_position() {
        let c = ctx(1, 3);
        match parse_expression(c, "A1 + [A1 B1]") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 11),
            other => panic!("{other:?}"),
        }
        assert!(parse_expression(c, "A2").is_err());
    }
}
