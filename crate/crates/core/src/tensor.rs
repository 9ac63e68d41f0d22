//! Truncated tensor algebra over the first homology of a surface.
//!
//! Basis index `2i` is `A_{i+1}` and `2i+1` is `B_{i+1}`. A [`Tensor`] is a
//! sparse map from monomials (index words) to exact rationals; no zero
//! coefficient is ever stored and no monomial exceeds the truncation degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
#[cfg(feature = "parallel")]
use crate::parallel;
use crate::rational::Rational;

pub type Monomial = SmallVec<[u8; 16]>;

/// Genus and truncation degree shared by every tensor of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    genus: usize,
    truncation: usize,
}

impl AlgebraContext {
    pub fn new(genus: usize, truncation: usize) -> Result<Self> {
        if genus == 0 || genus > 64 {
            return Err(Error::InvalidGenus(genus));
        }
        Ok(AlgebraContext { genus, truncation })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Rank of homology, `2g`.
    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        AlgebraContext {
            genus: self.genus,
            truncation,
        }
    }

    pub fn check_same(&self, other: &AlgebraContext) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                left_genus: self.genus,
                left_n: self.truncation,
                right_genus: other.genus,
                right_n: other.truncation,
            });
        }
        Ok(())
    }
}

/// A basis vector of homology, stored as its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisVector(pub u8);

impl BasisVector {
    /// `A_i`, with `i` starting at 1.
    pub fn a(i: usize) -> Self {
        BasisVector((2 * i - 2) as u8)
    }

    /// `B_i`, with `i` starting at 1.
    pub fn b(i: usize) -> Self {
        BasisVector((2 * i - 1) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn handle(self) -> usize {
        self.0 as usize / 2 + 1
    }

    pub fn is_a(self) -> bool {
        self.0 % 2 == 0
    }

    /// The symplectic partner: `A_i <-> B_i`.
    pub fn dual(self) -> Self {
        BasisVector(self.0 ^ 1)
    }

    pub fn name(self) -> String {
        format!("{}{}", if self.is_a() { 'A' } else { 'B' }, self.handle())
    }
}

/// Intersection pairing of two basis vectors: `(A_i . B_i) = 1`, `(B_i . A_i) = -1`.
pub fn intersection(x: usize, y: usize) -> i64 {
    if x / 2 != y / 2 || x == y {
        0
    } else if x % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    ctx: AlgebraContext,
    terms: BTreeMap<Monomial, Rational>,
}

impl Tensor {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Tensor {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(ctx: AlgebraContext, c: Rational) -> Self {
        let mut t = Tensor::zero(ctx);
        t.add_term(Monomial::new(), c);
        t
    }

    pub fn one(ctx: AlgebraContext) -> Self {
        Tensor::scalar(ctx, Rational::one())
    }

    pub fn basis(ctx: AlgebraContext, index: usize) -> Self {
        assert!(index < ctx.rank(), "basis index out of range");
        Tensor::monomial(ctx, &[index as u8], Rational::one())
    }

    pub fn checked_basis(ctx: AlgebraContext, index: usize) -> Result<Self> {
        if index >= ctx.rank() {
            return Err(Error::BasisOutOfRange {
                index,
                genus: ctx.genus(),
            });
        }
        Ok(Tensor::basis(ctx, index))
    }

    pub fn monomial(ctx: AlgebraContext, mono: &[u8], c: Rational) -> Self {
        let mut t = Tensor::zero(ctx);
        t.add_term(Monomial::from_slice(mono), c);
        t
    }

    /// Builds a tensor from arbitrary terms, summing repeats and dropping
    /// zeros and monomials above the truncation.
    pub fn from_terms<I>(ctx: AlgebraContext, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut t = Tensor::zero(ctx);
        for (m, c) in terms {
            t.add_term(m, c);
        }
        t
    }

    fn from_map(ctx: AlgebraContext, map: HashMap<Monomial, Rational>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Tensor { ctx, terms }
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn genus(&self) -> usize {
        self.ctx.genus
    }

    pub fn truncation(&self) -> usize {
        self.ctx.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[u8]) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn constant(&self) -> Rational {
        self.coeff(&[])
    }

    /// Adds `c * mono` in place. Monomials above the truncation are ignored.
    pub fn add_term(&mut self, mono: Monomial, c: Rational) {
        if mono.len() > self.ctx.truncation || c.is_zero() {
            return;
        }
        debug_assert!(mono.iter().all(|&x| (x as usize) < self.ctx.rank()));
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).max()
    }

    /// Homogeneous part of degree `n`.
    pub fn graded(&self, n: usize) -> Tensor {
        self.filter(|m| m.len() == n)
    }

    /// Part with degrees in `lo..=hi`.
    pub fn degree_range(&self, lo: usize, hi: usize) -> Tensor {
        self.filter(|m| m.len() >= lo && m.len() <= hi)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Tensor {
        Tensor {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same element read in another truncation: terms above `n` are dropped.
    pub fn with_truncation(&self, n: usize) -> Tensor {
        let ctx = self.ctx.with_truncation(n);
        Tensor {
            ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.len() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.ctx);
        }
        Tensor {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Applies a linear map on monomials.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> Monomial) -> Tensor {
        Tensor::from_terms(self.ctx, self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    pub fn checked_add(&self, other: &Tensor) -> Result<Tensor> {
        self.ctx.check_same(&other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.ctx.check_same(&other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Rational) {
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    /// Truncated product.
    pub fn checked_mul(&self, other: &Tensor) -> Result<Tensor> {
        self.ctx.check_same(&other.ctx)?;
        #[cfg(feature = "parallel")]
        {
            if self.len() * other.len() >= parallel::MUL_THRESHOLD {
                return Ok(self.mul_parallel(other));
            }
        }
        Ok(self.mul_sequential(other))
    }

    fn rhs_by_degree(&self) -> Vec<Vec<(&Monomial, &Rational)>> {
        let mut by = vec![Vec::new(); self.ctx.truncation + 1];
        for (m, c) in &self.terms {
            by[m.len()].push((m, c));
        }
        by
    }

    fn mul_into(
        acc: &mut HashMap<Monomial, Rational>,
        m: &Monomial,
        c: &Rational,
        rhs: &[Vec<(&Monomial, &Rational)>],
        n: usize,
    ) {
        for bucket in rhs.iter().take(n + 1 - m.len()) {
            for (m2, c2) in bucket {
                let mut w = m.clone();
                w.extend_from_slice(m2);
                let p = c * *c2;
                acc.entry(w)
                    .and_modify(|x| *x += &p)
                    .or_insert(p);
            }
        }
    }

    pub fn mul_sequential(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        let n = self.ctx.truncation;
        let rhs = other.rhs_by_degree();
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            Self::mul_into(&mut acc, m, c, &rhs, n);
        }
        Tensor::from_map(self.ctx, acc)
    }

    #[cfg(feature = "parallel")]
    pub fn mul_parallel(&self, other: &Tensor) -> Tensor {
        use rayon::prelude::*;
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        let n = self.ctx.truncation;
        let rhs = other.rhs_by_degree();
        let lhs: Vec<_> = self.terms.iter().collect();
        let acc = lhs
            .par_chunks(64)
            .fold(HashMap::new, |mut acc, chunk| {
                for (m, c) in chunk {
                    Self::mul_into(&mut acc, m, c, &rhs, n);
                }
                acc
            })
            .reduce(HashMap::new, merge_maps);
        Tensor::from_map(self.ctx, acc)
    }

    pub fn pow(&self, k: usize) -> Tensor {
        let mut out = Tensor::one(self.ctx);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Algebra endomorphism determined by the images of the basis vectors.
    pub fn substitute(&self, images: &[Tensor]) -> Tensor {
        assert_eq!(images.len(), self.ctx.rank());
        let mut out = Tensor::scalar(self.ctx, self.constant());
        for (j, img) in images.iter().enumerate() {
            let tail = Tensor::from_terms(
                self.ctx,
                self.terms
                    .range(Monomial::from_slice(&[j as u8])..)
                    .take_while(|(m, _)| m[0] == j as u8)
                    .map(|(m, c)| (Monomial::from_slice(&m[1..]), c.clone())),
            );
            if !tail.is_zero() {
                out = &out + &(img * &tail.substitute(images));
            }
        }
        out
    }

    /// Splits `t` in `T_1` as `sum_j X_j (x) t_j`: returns `t_j` for every basis index.
    pub fn split_first_letter(&self) -> Vec<Tensor> {
        let mut parts = vec![Tensor::zero(self.ctx); self.ctx.rank()];
        for (m, c) in &self.terms {
            if let Some((&first, rest)) = m.split_first() {
                parts[first as usize].add_term(Monomial::from_slice(rest), c.clone());
            }
        }
        parts
    }

    /// Coefficient vector of a degree-one tensor.
    pub fn degree_one_coords(&self) -> Result<Vec<Rational>> {
        if self.terms.keys().any(|m| m.len() != 1) {
            return Err(Error::NotDegreeOne);
        }
        let mut v = vec![Rational::zero(); self.ctx.rank()];
        for (m, c) in &self.terms {
            v[m[0] as usize] = c.clone();
        }
        Ok(v)
    }

    pub fn from_degree_one_coords(ctx: AlgebraContext, coords: &[Rational]) -> Tensor {
        Tensor::from_terms(
            ctx,
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::from_slice(&[i as u8]), c.clone())),
        )
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            genus: self.ctx.genus,
            truncation: self.ctx.truncation,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    mono: m.to_vec(),
                    coeff: c.to_canonical_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TensorJson) -> Result<Tensor> {
        let ctx = AlgebraContext::new(j.genus, j.truncation)?;
        let mut t = Tensor::zero(ctx);
        for term in &j.terms {
            if term.mono.len() > ctx.truncation {
                return Err(Error::Json(format!(
                    "monomial {:?} exceeds truncation {}",
                    term.mono, ctx.truncation
                )));
            }
            if let Some(&x) = term.mono.iter().find(|&&x| x as usize >= ctx.rank()) {
                return Err(Error::BasisOutOfRange {
                    index: x as usize,
                    genus: ctx.genus,
                });
            }
            t.add_term(Monomial::from_slice(&term.mono), term.coeff.parse()?);
        }
        Ok(t)
    }
}

#[cfg(feature = "parallel")]
fn merge_maps(
    mut a: HashMap<Monomial, Rational>,
    b: HashMap<Monomial, Rational>,
) -> HashMap<Monomial, Rational> {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (m, c) in b {
        a.entry(m).and_modify(|x| *x += &c).or_insert(c);
    }
    a
}

/// Serialized form: monomials in lexicographic order, coefficients as `p/q`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorJson {
    pub genus: usize,
    pub truncation: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub mono: Vec<u8>,
    pub coeff: String,
}

impl Serialize for Tensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TensorJson::deserialize(d)?;
        Tensor::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor(g={}, N={}: {})", self.ctx.genus, self.ctx.truncation, self)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::display::format_tensor(self))
    }
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        self.checked_add(rhs).expect("tensor addition")
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        self.checked_sub(rhs).expect("tensor subtraction")
    }
}

impl Mul for &Tensor {
    type Output = Tensor;
    fn mul(self, rhs: &Tensor) -> Tensor {
        self.checked_mul(rhs).expect("tensor product")
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        Tensor {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Tensor {
    type Output = Tensor;
    fn add(self, rhs: Tensor) -> Tensor {
        &self + &rhs
    }
}

impl Sub for Tensor {
    type Output = Tensor;
    fn sub(self, rhs: Tensor) -> Tensor {
        &self - &rhs
    }
}

impl Mul for Tensor {
    type Output = Tensor;
    fn mul(self, rhs: Tensor) -> Tensor {
        &self * &rhs
    }
}

impl Neg for Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        -&self
    }
}

/// `omega = sum_i A_i B_i - B_i A_i`.
pub fn symplectic_form(ctx: AlgebraContext) -> Tensor {
    let mut t = Tensor::zero(ctx);
    for i in 0..ctx.genus() {
        let (a, b) = (2 * i as u8, 2 * i as u8 + 1);
        t.add_term(Monomial::from_slice(&[a, b]), Rational::one());
        t.add_term(Monomial::from_slice(&[b, a]), -Rational::one());
    }
    t
}

/// Bilinear intersection pairing of two degree-one tensors.
pub fn intersection_pairing(x: &Tensor, y: &Tensor) -> Result<Rational> {
    x.ctx.check_same(&y.ctx)?;
    let u = x.degree_one_coords()?;
    let v = y.degree_one_coords()?;
    let mut s = Rational::zero();
    for (i, a) in u.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let j = i ^ 1;
        let w = intersection(i, j);
        if !v[j].is_zero() {
            s += &(a * &v[j] * Rational::from_int(w));
        }
    }
    Ok(s)
}

/// `v_1 ^ ... ^ v_k = sum_sigma sgn(sigma) v_sigma(1) ... v_sigma(k)`.
pub fn wedge_embed(ctx: AlgebraContext, vectors: &[Tensor]) -> Result<Tensor> {
    for v in vectors {
        ctx.check_same(&v.ctx)?;
        v.degree_one_coords()?;
    }
    let k = vectors.len();
    let mut out = Tensor::zero(ctx);
    let mut perm: Vec<usize> = (0..k).collect();
    for_each_permutation(&mut perm, 0, 1, &mut |p, sign| {
        let mut t = Tensor::one(ctx);
        for &i in p {
            t = &t * &vectors[i];
        }
        out.add_scaled(&t, &Rational::from_int(sign));
    });
    Ok(out)
}

pub(crate) fn for_each_permutation(
    perm: &mut [usize],
    start: usize,
    sign: i64,
    f: &mut impl FnMut(&[usize], i64),
) {
    if start == perm.len() {
        f(perm, sign);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        let s = if i == start { sign } else { -sign };
        for_each_permutation(perm, start + 1, s, f);
        perm.swap(start, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: usize, n: usize) -> AlgebraContext {
        AlgebraContext::new(g, n).unwrap()
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let c = ctx(1, 2);
        let a = Tensor::basis(c, 0);
        let b = Tensor::basis(c, 1);
        let ab = &a * &b;
        assert_eq!(ab.coeff(&[0, 1]), Rational::one());
        assert!((&ab * &a).is_zero());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Tensor::basis(ctx(1, 2), 0);
        let b = Tensor::basis(ctx(1, 3), 0);
        assert!(matches!(a.checked_mul(&b), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn intersection_form() {
        let c = ctx(2, 2);
        let a1 = Tensor::basis(c, 0);
        let b1 = Tensor::basis(c, 1);
        let a2 = Tensor::basis(c, 2);
        assert_eq!(intersection_pairing(&a1, &b1).unwrap(), Rational::one());
        assert_eq!(intersection_pairing(&b1, &a1).unwrap(), -Rational::one());
        assert!(intersection_pairing(&a1, &a2).unwrap().is_zero());
    }

    #[test]
    fn wedge_of_two() {
        let c = ctx(1, 3);
        let w = wedge_embed(c, &[Tensor::basis(c, 0), Tensor::basis(c, 1)]).unwrap();
        assert_eq!(w, symplectic_form(c));
        let w3 = wedge_embed(c, &[Tensor::basis(c, 0), Tensor::basis(c, 0), Tensor::basis(c, 1)]).unwrap();
        assert!(w3.is_zero());
    }

    #[test]
    fn substitute_identity() {
        let c = ctx(2, 3);
        let images: Vec<_> = (0..4).map(|i| Tensor::basis(c, i)).collect();
        let t = &(&Tensor::basis(c, 0) * &Tensor::basis(c, 3)) + &Tensor::scalar(c, Rational::new(1, 2));
        assert_eq!(t.substitute(&images), t);
    }

    #[test]
    fn json_is_canonical() {
        let c = ctx(1, 2);
        let t = &Tensor::basis(c, 1) + &Tensor::monomial(c, &[0, 1], Rational::new(-2, 4));
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"genus":1,"truncation":2,"terms":[{"mono":[0,1],"coeff":"-1/2"},{"mono":[1],"coeff":"1/1"}]}"#
        );
        let back: Tensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
