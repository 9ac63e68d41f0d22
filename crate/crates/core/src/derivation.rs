//! Continuous derivations of the completed tensor algebra determined by their
//! values on homology, and their tensor view in `H (x) T`.
//!
//! The tensor `X (x) u` acts as `Y -> (Y . X) u`; conversely a derivation `D`
//! has tensor view `sum_i B_i (x) D(A_i) - A_i (x) D(B_i)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tensor::{symplectic_form, AlgebraContext, BasisVector, Monomial, Tensor, TensorJson};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    ctx: AlgebraContext,
    values: Vec<Tensor>,
}

impl Derivation {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Derivation {
            ctx,
            values: vec![Tensor::zero(ctx); ctx.rank()],
        }
    }

    pub fn from_values(ctx: AlgebraContext, values: Vec<Tensor>) -> Result<Self> {
        if values.len() != ctx.rank() {
            return Err(Error::InvalidGenus(ctx.genus()));
        }
        for v in &values {
            ctx.check_same(&v.ctx())?;
        }
        Ok(Derivation { ctx, values })
    }

    /// Derivation with tensor view `t`, in the context of `t`.
    pub fn from_tensor(t: &Tensor) -> Result<Self> {
        Derivation::from_tensor_in(t, t.ctx())
    }

    /// Derivation with tensor view `t`, values read in `ctx`. Passing `t`
    /// one degree above `ctx` keeps the top degree of every value.
    pub fn from_tensor_in(t: &Tensor, ctx: AlgebraContext) -> Result<Self> {
        if t.genus() != ctx.genus() {
            return Err(Error::ContextMismatch {
                left_genus: t.genus(),
                left_n: t.truncation(),
                right_genus: ctx.genus(),
                right_n: ctx.truncation(),
            });
        }
        if !t.constant().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let parts = t.split_first_letter();
        let values = (0..ctx.rank())
            .map(|j| {
                let p = parts[j ^ 1].with_truncation(ctx.truncation());
                if j % 2 == 0 {
                    p
                } else {
                    -p
                }
            })
            .collect();
        Ok(Derivation { ctx, values })
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    /// `D(X_j)` for every basis vector.
    pub fn values(&self) -> &[Tensor] {
        &self.values
    }

    pub fn value(&self, j: usize) -> &Tensor {
        &self.values[j]
    }

    /// Tensor view; values of degree `N` do not fit and are dropped.
    pub fn to_tensor(&self) -> Tensor {
        let mut out = Tensor::zero(self.ctx);
        for (j, v) in self.values.iter().enumerate() {
            let (first, sign) = if j % 2 == 0 { (j + 1, 1) } else { (j - 1, -1) };
            let s = Rational::from_int(sign);
            for (m, c) in v.terms() {
                let mut w = Monomial::with_capacity(m.len() + 1);
                w.push(first as u8);
                w.extend_from_slice(m);
                out.add_term(w, c * &s);
            }
        }
        out
    }

    /// Homogeneous piece whose tensor view has degree `m` (values of degree `m - 1`).
    pub fn graded(&self, m: usize) -> Derivation {
        Derivation {
            ctx: self.ctx,
            values: self.values.iter().map(|v| v.graded(m.saturating_sub(1))).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            ctx: self.ctx,
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        Derivation {
            ctx: self.ctx,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Derivation {
        self.scale(&-Rational::one())
    }

    fn apply_term(&self, acc: &mut HashMap<Monomial, Rational>, m: &Monomial, c: &Rational) {
        let n = self.ctx.truncation();
        for j in 0..m.len() {
            let v = &self.values[m[j] as usize];
            for (vm, vc) in v.terms() {
                if m.len() - 1 + vm.len() > n {
                    continue;
                }
                let mut w = Monomial::with_capacity(m.len() - 1 + vm.len());
                w.extend_from_slice(&m[..j]);
                w.extend_from_slice(vm);
                w.extend_from_slice(&m[j + 1..]);
                let p = c * vc;
                acc.entry(w).and_modify(|x| *x += &p).or_insert(p);
            }
        }
    }

    /// Leibniz extension to the whole algebra.
    pub fn apply(&self, t: &Tensor) -> Tensor {
        assert_eq!(self.ctx, t.ctx(), "context mismatch");
        #[cfg(feature = "parallel")]
        {
            if t.len() >= 512 {
                return self.apply_parallel(t);
            }
        }
        self.apply_sequential(t)
    }

    pub fn apply_sequential(&self, t: &Tensor) -> Tensor {
        let mut acc = HashMap::new();
        for (m, c) in t.terms() {
            self.apply_term(&mut acc, m, c);
        }
        Tensor::from_terms(self.ctx, acc)
    }

    #[cfg(feature = "parallel")]
    pub fn apply_parallel(&self, t: &Tensor) -> Tensor {
        use rayon::prelude::*;
        let terms: Vec<_> = t.terms().collect();
        let acc = terms
            .par_chunks(64)
            .fold(HashMap::new, |mut acc, chunk| {
                for (m, c) in chunk {
                    self.apply_term(&mut acc, m, c);
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (m, c) in b {
                    a.entry(m).and_modify(|x| *x += &c).or_insert(c);
                }
                a
            });
        Tensor::from_terms(self.ctx, acc)
    }

    /// `D1 D2 - D2 D1`, computed on basis vectors.
    pub fn commutator(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        Derivation {
            ctx: self.ctx,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| &self.apply(b) - &other.apply(a))
                .collect(),
        }
    }

    /// `D(omega) = 0`.
    pub fn kills_omega(&self) -> bool {
        self.apply(&symplectic_form(self.ctx)).is_zero()
    }

    pub fn default_max_terms(&self) -> usize {
        let n = self.ctx.truncation();
        (n + 1) * (n + 2)
    }

    /// `sum_k D^k(t) / k!`, stopping at the first exactly vanishing term.
    pub fn exp_apply(&self, t: &Tensor, max_terms: Option<usize>) -> Result<Tensor> {
        let max = max_terms.unwrap_or_else(|| self.default_max_terms());
        let mut out = t.clone();
        let mut term = t.clone();
        for k in 1..=max {
            term = self.apply(&term).scale(&Rational::new(1, k as i64));
            if term.is_zero() {
                return Ok(out);
            }
            out = &out + &term;
        }
        Err(Error::NonTermination { terms: max })
    }

    pub fn to_json(&self) -> DerivationJson {
        DerivationJson {
            view: "tensor".to_string(),
            tensor: self.to_tensor().to_json(),
        }
    }

    pub fn from_json(j: &DerivationJson) -> Result<Self> {
        if j.view != "tensor" {
            return Err(Error::Json(format!("unsupported derivation view `{}`", j.view)));
        }
        Derivation::from_tensor(&Tensor::from_json(&j.tensor)?)
    }
}

/// `exp(D)` applied to `t`.
pub fn exp_derivation(d: &Derivation, t: &Tensor, max_terms: Option<usize>) -> Result<Tensor> {
    d.exp_apply(t, max_terms)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DerivationJson {
    pub view: String,
    #[serde(flatten)]
    pub tensor: TensorJson,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, v) in self.values.iter().enumerate() {
            writeln!(f, "{} -> {}", BasisVector(j as u8).name(), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{cyclic_sum, is_nu_invariant};
    use crate::lie::parse_expression;

    fn ctx(g: usize, n: usize) -> AlgebraContext {
        AlgebraContext::new(g, n).unwrap()
    }

    #[test]
    fn tensor_roundtrip() {
        let c = ctx(2, 4);
        let t = parse_expression(c, "A1 B2 A2 - 1/3 B1 A1 + A2").unwrap();
        assert_eq!(Derivation::from_tensor(&t).unwrap().to_tensor(), t);
    }

    #[test]
    fn functional_view_signs() {
        let c = ctx(1, 3);
        let d = Derivation::from_tensor(&parse_expression(c, "A1 B1").unwrap()).unwrap();
        assert!(d.value(0).is_zero());
        assert_eq!(d.value(1), &parse_expression(c, "-B1").unwrap());
    }

    #[test]
    fn symplectic_iff_invariant() {
        let c = ctx(2, 4);
        let inv = cyclic_sum(&parse_expression(c, "A1 B1 A2 + B2 B2").unwrap());
        assert!(is_nu_invariant(&inv));
        assert!(Derivation::from_tensor(&inv).unwrap().kills_omega());
        let not = parse_expression(c, "A1 B1 A2").unwrap();
        assert!(!Derivation::from_tensor(&not).unwrap().kills_omega());
    }

    #[test]
    fn exp_of_nilpotent() {
        let c = ctx(1, 3);
        let d = Derivation::from_tensor(&parse_expression(c, "A1 A1").unwrap()).unwrap();
        let b = Tensor::basis(c, 1);
        assert_eq!(d.exp_apply(&b, None).unwrap(), parse_expression(c, "B1 - A1").unwrap());
        let scaling = Derivation::from_tensor(&parse_expression(c, "A1 B1").unwrap()).unwrap();
        assert!(matches!(
            scaling.exp_apply(&b, Some(5)),
            Err(Error::NonTermination { terms: 5 })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let c = ctx(1, 3);
        let d = Derivation::from_tensor(&parse_expression(c, "A1 A1 B1").unwrap()).unwrap();
        let s = serde_json::to_string(&d.to_json()).unwrap();
        assert!(s.contains("\"view\":\"tensor\""));
        let j: DerivationJson = serde_json::from_str(&s).unwrap();
        assert_eq!(Derivation::from_json(&j).unwrap(), d);
    }
}
