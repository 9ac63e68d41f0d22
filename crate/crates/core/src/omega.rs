//! The closed two-sided ideal generated by `omega`, as a per-degree row
//! echelon basis, for exact reduction modulo the ideal.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::linalg::EchelonBasis;
use crate::parallel;
use crate::rational::Rational;
use crate::tensor::{symplectic_form, AlgebraContext, Monomial, Tensor};

fn words(rank: usize, len: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..rank as u8).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn to_map(t: &Tensor) -> BTreeMap<Monomial, Rational> {
    t.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

#[derive(Clone, Debug)]
pub struct OmegaIdealContext {
    ctx: AlgebraContext,
    /// Indexed by degree; degrees below two are empty.
    bases: Vec<EchelonBasis<Monomial>>,
}

impl OmegaIdealContext {
    /// Spans `u omega v` over all monomials `u`, `v` in each degree up to the truncation.
    pub fn new(ctx: AlgebraContext) -> Self {
        let omega = symplectic_form(ctx);
        let degrees: Vec<usize> = (0..=ctx.truncation()).collect();
        let bases = parallel::map(&degrees, |&n| {
            let mut basis = EchelonBasis::new();
            if n < 2 {
                return basis;
            }
            for a in 0..=n - 2 {
                for u in words(ctx.rank(), a) {
                    for v in words(ctx.rank(), n - 2 - a) {
                        let mut row = BTreeMap::new();
                        for (m, c) in omega.terms() {
                            let mut w = u.clone();
                            w.extend_from_slice(m);
                            w.extend_from_slice(&v);
                            row.insert(w, c.clone());
                        }
                        basis.insert(&row);
                    }
                }
            }
            basis
        });
        OmegaIdealContext { ctx, bases }
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    /// Dimension of the ideal in degree `n`.
    pub fn dim(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, |b| b.dim())
    }

    /// Canonical representative modulo the ideal.
    pub fn reduce(&self, t: &Tensor) -> Result<Tensor> {
        self.ctx.check_same(&t.ctx())?;
        let mut out = Tensor::zero(self.ctx);
        for (n, basis) in self.bases.iter().enumerate() {
            let part = t.graded(n);
            if part.is_zero() {
                continue;
            }
            for (m, c) in basis.reduce(&to_map(&part)) {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, t: &Tensor) -> Result<bool> {
        Ok(self.reduce(t)?.is_zero())
    }

    pub fn equal(&self, a: &Tensor, b: &Tensor) -> Result<bool> {
        self.contains(&a.checked_sub(b)?)
    }

    /// Spanning rows of the ideal in degree `n`, for invariance checks.
    pub fn spanning_elements(&self, n: usize) -> Vec<Tensor> {
        if n < 2 || n > self.ctx.truncation() {
            return Vec::new();
        }
        let omega = symplectic_form(self.ctx);
        let mut out = Vec::new();
        for a in 0..=n - 2 {
            for u in words(self.ctx.rank(), a) {
                for v in words(self.ctx.rank(), n - 2 - a) {
                    let left = Tensor::monomial(self.ctx, &u, Rational::one());
                    let right = Tensor::monomial(self.ctx, &v, Rational::one());
                    out.push(&(&left * &omega) * &right);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_expression;

    #[test]
    fn genus_one_dimensions() {
        let ctx = AlgebraContext::new(1, 4).unwrap();
        let ideal = OmegaIdealContext::new(ctx);
        assert_eq!(ideal.dim(2), 1);
        assert_eq!(ideal.dim(3), 4);
        // In genus one the quotient is the polynomial ring in two variables.
        assert_eq!(ideal.dim(4), 16 - 5);
    }

    #[test]
    fn commutators_vanish_in_genus_one() {
        let ctx = AlgebraContext::new(1, 4).unwrap();
        let ideal = OmegaIdealContext::new(ctx);
        let t = parse_expression(ctx, "A1 [A1,B1] B1 + 3 A1").unwrap();
        assert_eq!(ideal.reduce(&t).unwrap(), parse_expression(ctx, "3 A1").unwrap());
        assert!(ideal.equal(&parse_expression(ctx, "A1 B1 A1").unwrap(), &parse_expression(ctx, "A1 A1 B1").unwrap()).unwrap());
    }
}
