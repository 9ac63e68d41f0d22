//! Cyclic rotation, cyclic symmetrization and the necklace bracket.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tensor::{intersection, Monomial, Tensor};

fn rotate(m: &[u8], k: usize) -> Monomial {
    let mut w = Monomial::with_capacity(m.len());
    w.extend_from_slice(&m[k..]);
    w.extend_from_slice(&m[..k]);
    w
}

/// `nu(X1 X2 ... Xp) = X2 ... Xp X1`, identity in degree zero.
pub fn nu(t: &Tensor) -> Tensor {
    t.map_monomials(|m| if m.is_empty() { m.clone() } else { rotate(m, 1) })
}

/// `N = sum_{m<p} nu^m` in degree `p`, and zero in degree zero.
pub fn cyclic_sum(t: &Tensor) -> Tensor {
    let mut out = Tensor::zero(t.ctx());
    for (m, c) in t.terms() {
        for k in 0..m.len() {
            out.add_term(rotate(m, k), c.clone());
        }
    }
    out
}

/// `N / p` in degree `p`.
pub fn normalized_cyclic_sum(t: &Tensor) -> Tensor {
    let mut out = Tensor::zero(t.ctx());
    for (m, c) in t.terms() {
        let w = c * &Rational::new(1, m.len().max(1) as i64);
        for k in 0..m.len() {
            out.add_term(rotate(m, k), w.clone());
        }
    }
    out
}

pub fn first_non_invariant_degree(t: &Tensor) -> Option<usize> {
    (t - &nu(t)).min_degree()
}

pub fn is_nu_invariant(t: &Tensor) -> bool {
    first_non_invariant_degree(t).is_none()
}

/// Totally antisymmetric tensors: each adjacent transposition flips the sign.
/// In degree three this is the image of the third exterior power.
pub fn is_alternating(t: &Tensor) -> bool {
    t.terms().all(|(m, c)| {
        (0..m.len().saturating_sub(1)).all(|i| {
            let mut w = m.clone();
            w.swap(i, i + 1);
            t.coeff(&w) == -c
        })
    })
}

/// Bracket of two cyclic monomials:
/// `[N(X), N(Y)] = -sum_{i,j} (X_i . Y_j) N(X_{i+1}..X_{i-1} Y_{j+1}..Y_{j-1})`.
fn necklace_monomials(x: &[u8], y: &[u8], c: &Rational, out: &mut Tensor) {
    for i in 0..x.len() {
        for j in 0..y.len() {
            let s = intersection(x[i] as usize, y[j] as usize);
            if s == 0 {
                continue;
            }
            let mut w = Monomial::with_capacity(x.len() + y.len() - 2);
            w.extend_from_slice(&x[i + 1..]);
            w.extend_from_slice(&x[..i]);
            w.extend_from_slice(&y[j + 1..]);
            w.extend_from_slice(&y[..j]);
            let coeff = c * &Rational::from_int(-s);
            if w.is_empty() {
                continue;
            }
            for k in 0..w.len() {
                out.add_term(rotate(&w, k), coeff.clone());
            }
        }
    }
}

/// Necklace bracket of two rotation-invariant tensors without constant term.
/// A degree-`n` invariant `u` equals `N(u/n)`, so the monomial formula is
/// distributed over all monomial pairs with weight `1/(nm)`.
pub fn necklace_bracket(u: &Tensor, v: &Tensor) -> Result<Tensor> {
    u.ctx().check_same(&v.ctx())?;
    for t in [u, v] {
        if !t.constant().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        if let Some(degree) = first_non_invariant_degree(t) {
            return Err(Error::NotCyclicInvariant { degree });
        }
    }
    let mut out = Tensor::zero(u.ctx());
    for (x, a) in u.terms() {
        for (y, b) in v.terms() {
            if x.len() + y.len() - 2 > u.truncation() {
                continue;
            }
            let w = a * b * Rational::new(1, (x.len() * y.len()) as i64);
            necklace_monomials(x, y, &w, &mut out);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_expression;
    use crate::tensor::AlgebraContext;

    #[test]
    fn rotation_and_sum() {
        let c = AlgebraContext::new(1, 3).unwrap();
        let t = parse_expression(c, "A1 A1 B1").unwrap();
        assert_eq!(nu(&t), parse_expression(c, "A1 B1 A1").unwrap());
        let n = cyclic_sum(&t);
        assert_eq!(n, parse_expression(c, "A1 A1 B1 + A1 B1 A1 + B1 A1 A1").unwrap());
        assert!(is_nu_invariant(&n));
        assert!(cyclic_sum(&Tensor::one(c)).is_zero());
    }

    #[test]
    fn small_necklace_bracket() {
        let c = AlgebraContext::new(1, 3).unwrap();
        let x = cyclic_sum(&parse_expression(c, "A1 B1").unwrap());
        let y = parse_expression(c, "B1").unwrap();
        assert_eq!(necklace_bracket(&x, &y).unwrap(), parse_expression(c, "-B1").unwrap());
        let bad = parse_expression(c, "A1 B1").unwrap();
        assert!(matches!(
            necklace_bracket(&bad, &y),
            Err(Error::NotCyclicInvariant { degree: 2 })
        ));
    }

    #[test]
    fn alternating_detection() {
        let c = AlgebraContext::new(2, 3).unwrap();
        let w = crate::tensor::wedge_embed(
            c,
            &[Tensor::basis(c, 0), Tensor::basis(c, 1), Tensor::basis(c, 2)],
        )
        .unwrap();
        assert!(is_alternating(&w));
        assert!(!is_alternating(&cyclic_sum(&parse_expression(c, "A1 A1 B1").unwrap())));
    }
}
