//! Human-readable rendering: raw monomial sums and Lyndon bracket form.

use std::collections::BTreeMap;

use crate::lie::bracket;
use crate::rational::Rational;
use crate::tensor::{BasisVector, Monomial, Tensor};

pub fn monomial_name(m: &[u8]) -> String {
    if m.is_empty() {
        return "1".to_string();
    }
    m.iter().map(|&x| BasisVector(x).name()).collect()
}

fn push_term(out: &mut String, c: &Rational, body: &str, is_unit: bool) {
    let neg = c.is_negative();
    let a = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if is_unit {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(body);
    } else {
        out.push_str(&format!("{a} {body}"));
    }
}

/// Sum of monomials ordered by degree, then lexicographically.
pub fn format_tensor(t: &Tensor) -> String {
    let mut terms: Vec<_> = t.terms().collect();
    terms.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then(a.cmp(b)));
    let mut out = String::new();
    for (m, c) in terms {
        push_term(&mut out, c, &monomial_name(m), m.is_empty());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
fn standard_factorization(w: &[u8]) -> (&[u8], &[u8]) {
    let i = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("length at least two");
    (&w[..i], &w[i..])
}

fn lyndon_bracketing(t: &Tensor, w: &[u8]) -> (Tensor, String) {
    if w.len() == 1 {
        return (Tensor::basis(t.ctx(), w[0] as usize), BasisVector(w[0]).name());
    }
    let (u, v) = standard_factorization(w);
    let (pu, su) = lyndon_bracketing(t, u);
    let (pv, sv) = lyndon_bracketing(t, v);
    (bracket(&pu, &pv), format!("[{su},{sv}]"))
}

/// Coordinates of a Lie element in the Lyndon basis with standard
/// bracketing, or `None` if the element is not Lie.
pub fn lyndon_coordinates(t: &Tensor) -> Option<BTreeMap<Monomial, (Rational, String)>> {
    let mut rest = t.clone();
    let mut out = BTreeMap::new();
    while let Some((m, c)) = rest
        .terms()
        .min_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then(a.cmp(b)))
        .map(|(m, c)| (m.clone(), c.clone()))
    {
        if !is_lyndon(&m) {
            return None;
        }
        let (p, name) = lyndon_bracketing(t, &m);
        rest.add_scaled(&p, &-&c);
        out.insert(m, (c, name));
    }
    Some(out)
}

/// Bracket notation for Lie elements, raw monomials otherwise.
pub fn format_lie(t: &Tensor) -> String {
    let Some(coords) = lyndon_coordinates(t) else {
        return format_tensor(t);
    };
    let mut entries: Vec<_> = coords.into_iter().collect();
    entries.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then(a.cmp(b)));
    let mut out = String::new();
    for (_, (c, name)) in entries {
        push_term(&mut out, &c, &name, false);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_expression;
    use crate::tensor::AlgebraContext;

    #[test]
    fn raw_format() {
        let c = AlgebraContext::new(1, 2).unwrap();
        let t = parse_expression(c, "1 + A1 - 1/2 A1 B1").unwrap();
        assert_eq!(format_tensor(&t), "1 + A1 - 1/2 A1B1");
    }

    #[test]
    fn lyndon_roundtrip() {
        let c = AlgebraContext::new(2, 5).unwrap();
        let t = parse_expression(c, "A1 + 1/2 [A1,B1] - 1/12 [B1,[A1,B1]] + 1/7 [[A2,B1],[A1,[A1,B2]]]").unwrap();
        let coords = lyndon_coordinates(&t).unwrap();
        let mut back = Tensor::zero(c);
        for (m, (coef, _)) in &coords {
            let (p, _) = lyndon_bracketing(&t, m);
            back.add_scaled(&p, coef);
        }
        assert_eq!(back, t);
        assert_eq!(format_lie(&parse_expression(c, "[B1,A1]").unwrap()), "-[A1,B1]");
    }
}
