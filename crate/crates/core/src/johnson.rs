//! The invariant `L(x) = 1/2 N(log theta(x)^2)`, total Johnson maps, Johnson
//! components and the verifiers for the Dehn twist formulas.

use std::fmt;

use crate::certificate::Certificate;
use crate::cyclic::cyclic_sum;
use crate::derivation::Derivation;
use crate::display::monomial_name;
use crate::error::{Error, Result};
use crate::expansion::{generator_names, solve_substitution, Expansion};
use crate::free_group::{Curve, FreeAutomorphism, GroupWord};
use crate::linalg;
use crate::omega::OmegaIdealContext;
use crate::rational::Rational;
use crate::tensor::{intersection, symplectic_form, BasisVector, Tensor};

/// Lowest degree where `a` and `b` differ, with the differing coefficient of
/// the first such monomial.
pub fn first_difference(a: &Tensor, b: &Tensor) -> Option<String> {
    let d = a - b;
    let deg = d.min_degree()?;
    let (m, c) = d.terms().find(|(m, _)| m.len() == deg).expect("degree present");
    Some(format!("degree {deg}, monomial {} off by {c}", monomial_name(m)))
}

/// `log theta(w)` read one degree higher (the top degree is zero there).
fn lifted_log(theta: &Expansion, w: &GroupWord) -> Tensor {
    theta.log_evaluate(w).with_truncation(theta.truncation() + 1)
}

/// `L(w) = 1/2 N(l(w) l(w))` as a tensor modulo degree `N + 2`. The degree
/// `N + 1` part only involves `l(w)` up to degree `N`, so it is exact.
pub fn l_invariant_tensor(theta: &Expansion, w: &GroupWord) -> Tensor {
    let l = lifted_log(theta, w);
    cyclic_sum(&(&l * &l)).scale(&Rational::new(1, 2))
}

/// `L(w)` as a derivation; its values on homology are exact up to degree `N`.
pub fn l_invariant(theta: &Expansion, w: &GroupWord) -> Derivation {
    Derivation::from_tensor_in(&l_invariant_tensor(theta, w), theta.ctx()).expect("same genus")
}

/// A loop argument of the action `sigma`: a word, or a power of its logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopArg {
    Word(GroupWord),
    LogPower { word: GroupWord, power: usize },
}

impl LoopArg {
    /// Parses a word, `log w`, or `(log w)^k`.
    pub fn parse(genus: usize, s: &str) -> Result<LoopArg> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("(log") {
            let (inner, power) = rest.rsplit_once(")^").ok_or_else(|| Error::Parse {
                position: 0,
                message: "expected `(log w)^k`".into(),
            })?;
            let power: usize = power.trim().parse().map_err(|_| Error::Parse {
                position: s.len() - power.len(),
                message: format!("invalid power `{power}`"),
            })?;
            return Ok(LoopArg::LogPower {
                word: GroupWord::parse(genus, inner)?,
                power,
            });
        }
        if let Some(rest) = s.strip_prefix("log ") {
            return Ok(LoopArg::LogPower {
                word: GroupWord::parse(genus, rest)?,
                power: 1,
            });
        }
        Ok(LoopArg::Word(GroupWord::parse(genus, s)?))
    }
}

/// `theta(sigma(u) v) = -lambda(u) theta(v)` with `lambda(u) = N theta(u)`
/// acting as a derivation. When `lambda(u)` has a degree-one part it lowers
/// degrees, and the top degree of the result is not determined: it is dropped.
pub fn sigma_act(theta: &Expansion, u: &LoopArg, v: &GroupWord) -> Tensor {
    let n = theta.truncation();
    let lambda = match u {
        LoopArg::Word(w) => cyclic_sum(&(&theta.evaluate(w) - &Tensor::one(theta.ctx()))),
        LoopArg::LogPower { word, power } => {
            let l = lifted_log(theta, word);
            match power {
                0 => Tensor::zero(theta.ctx()),
                1 => cyclic_sum(&l.with_truncation(n)),
                p => cyclic_sum(&l.pow(*p)),
            }
        }
    };
    let d = Derivation::from_tensor_in(&lambda, theta.ctx()).expect("same genus");
    let out = -d.apply(&theta.evaluate(v));
    if lambda.graded(1).is_zero() {
        out
    } else {
        out.degree_range(0, n - 1)
    }
}

/// `T(phi)` with `T(phi) . theta = theta . phi`, determined on homology.
#[derive(Clone, Debug)]
pub struct TotalJohnsonMap {
    images: Vec<Tensor>,
    on_h: Vec<Tensor>,
    homology: Vec<Vec<i64>>,
}

pub fn total_johnson(theta: &Expansion, phi: &FreeAutomorphism) -> Result<TotalJohnsonMap> {
    if phi.genus() != theta.genus() {
        return Err(Error::InvalidGenus(phi.genus()));
    }
    let images: Vec<Tensor> = phi.images().iter().map(|w| theta.evaluate(w)).collect();
    let sources: Vec<Tensor> = (0..theta.ctx().rank()).map(|i| theta.theta(i).clone()).collect();
    let on_h = solve_substitution(&sources, &images)?;
    Ok(TotalJohnsonMap {
        images,
        on_h,
        homology: phi.homology_matrix(),
    })
}

impl TotalJohnsonMap {
    /// `theta(phi(x_i))`.
    pub fn generator_image(&self, i: usize) -> &Tensor {
        &self.images[i]
    }

    /// `T(phi)(X_j)`.
    pub fn on_h(&self) -> &[Tensor] {
        &self.on_h
    }

    pub fn apply(&self, t: &Tensor) -> Tensor {
        t.substitute(&self.on_h)
    }

    pub fn homology_matrix(&self) -> &[Vec<i64>] {
        &self.homology
    }

    /// `tau(phi) = T(phi) . |phi|^-1` on homology.
    pub fn tau_on_h(&self) -> Result<Vec<Tensor>> {
        let m: Vec<Vec<Rational>> = self
            .homology
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        let inv = linalg::inverse(&m).ok_or(Error::NotInvertibleOnHomology)?;
        let ctx = self.on_h[0].ctx();
        Ok((0..ctx.rank())
            .map(|j| {
                let mut v = Tensor::zero(ctx);
                for (l, t) in self.on_h.iter().enumerate() {
                    v.add_scaled(t, &inv[l][j]);
                }
                v
            })
            .collect())
    }
}

/// `tau_k`: a linear map `H -> H^{(x) k+1}`, stored by its values on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JohnsonComponent {
    pub k: usize,
    pub values: Vec<Tensor>,
}

impl JohnsonComponent {
    pub fn from_values(k: usize, values: Vec<Tensor>) -> Self {
        JohnsonComponent {
            k,
            values: values.iter().map(|v| v.graded(k + 1)).collect(),
        }
    }

    pub fn first_difference(&self, other: &JohnsonComponent) -> Option<String> {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .find_map(|(j, (a, b))| {
                first_difference(a, b).map(|d| format!("on {}: {d}", BasisVector(j as u8).name()))
            })
    }

    /// The same values viewed as a derivation, which gives the tensor in `H (x) H^{(x) k+1}`.
    pub fn as_derivation(&self) -> Derivation {
        let ctx = self.values[0].ctx();
        Derivation::from_values(ctx, self.values.clone()).expect("rank matches")
    }
}

impl fmt::Display for JohnsonComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, v) in self.values.iter().enumerate() {
            writeln!(f, "tau_{}({}) = {}", self.k, BasisVector(j as u8).name(), v)?;
        }
        Ok(())
    }
}

pub fn johnson_component(theta: &Expansion, phi: &FreeAutomorphism, k: usize) -> Result<JohnsonComponent> {
    let tau = total_johnson(theta, phi)?.tau_on_h()?;
    Ok(JohnsonComponent::from_values(k, tau))
}

/// Applies `d_1 d_2 ... d_r` (rightmost first) to every basis vector.
fn compose_on_h(ds: &[&Derivation]) -> Vec<Tensor> {
    let ctx = ds[0].ctx();
    (0..ctx.rank())
        .map(|j| {
            let mut v = Tensor::basis(ctx, j);
            for d in ds.iter().rev() {
                v = d.apply(&v);
            }
            v
        })
        .collect()
}

fn lin_comb(parts: &[(Rational, Vec<Tensor>)]) -> Vec<Tensor> {
    let ctx = parts[0].1[0].ctx();
    (0..ctx.rank())
        .map(|j| {
            let mut v = Tensor::zero(ctx);
            for (c, vals) in parts {
                v.add_scaled(&vals[j], c);
            }
            v
        })
        .collect()
}

/// `-L_3`, the predicted `tau_1` of a twist along a non-separating curve.
pub fn nonseparating_tau1_formula(theta: &Expansion, c: &GroupWord) -> JohnsonComponent {
    let l = l_invariant(theta, c);
    let l3 = l.graded(3);
    JohnsonComponent::from_values(1, lin_comb(&[(-Rational::one(), compose_on_h(&[&l3]))]))
}

/// `-L_4 + 1/2 [L_2, L_4] + 1/2 L_3^2`.
pub fn nonseparating_tau2_formula(theta: &Expansion, c: &GroupWord) -> JohnsonComponent {
    let l = l_invariant(theta, c);
    let (l2, l3, l4) = (l.graded(2), l.graded(3), l.graded(4));
    let half = Rational::new(1, 2);
    JohnsonComponent::from_values(
        2,
        lin_comb(&[
            (-Rational::one(), compose_on_h(&[&l4])),
            (half.clone(), compose_on_h(&[&l2, &l4])),
            (-&half, compose_on_h(&[&l4, &l2])),
            (half, compose_on_h(&[&l3, &l3])),
        ]),
    )
}

/// Ordered tuples `(m_1..m_n)` with every `m_i >= 4` and the given sum.
fn compositions(n: usize, sum: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if sum == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 4..=sum {
        for mut rest in compositions(n - 1, sum - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `tau_k = sum_{1 <= n <= k/2} (-1)^n/n! sum_{m_i >= 4, sum m_i = 2n+k} L_{m_1} ... L_{m_n}`
/// for the twist along `gamma_h`.
pub fn separating_tau_formula(theta: &Expansion, h: usize, k: usize) -> Result<JohnsonComponent> {
    let g = theta.genus();
    let c = Curve::Separating(h).word(g)?;
    let l = l_invariant(theta, &c);
    let mut parts = vec![(Rational::zero(), vec![Tensor::zero(theta.ctx()); theta.ctx().rank()])];
    for n in 1..=k / 2 {
        let sign = if n % 2 == 1 { -1 } else { 1 };
        let coeff = &Rational::from_int(sign) * &Rational::inv_factorial(n as u32);
        for ms in compositions(n, 2 * n + k) {
            let ds: Vec<Derivation> = ms.iter().map(|&m| l.graded(m)).collect();
            let refs: Vec<&Derivation> = ds.iter().collect();
            parts.push((coeff.clone(), compose_on_h(&refs)));
        }
    }
    Ok(JohnsonComponent::from_values(k, lin_comb(&parts)))
}

fn require_symplectic(theta: &Expansion) -> Result<()> {
    match theta.symplectic_failure() {
        None => Ok(()),
        Some(msg) => Err(Error::NotSymplectic(msg)),
    }
}

fn base_params(cert: Certificate, theta: &Expansion) -> Certificate {
    cert.param("genus", theta.genus())
        .param("truncation", theta.truncation())
        .param("expansion", theta.kind().to_string())
}

/// `T(t_C) = exp(-L(C))` on every generator value `theta(x_i)`.
pub fn verify_dehn_twist_formula(theta: &Expansion, curve: &Curve) -> Result<Certificate> {
    require_symplectic(theta)?;
    let g = theta.genus();
    let word = curve.word(g)?;
    let twist = curve.twist(g)?;
    let minus_l = l_invariant(theta, &word).neg();
    let mut cert = base_params(Certificate::new("dehn_twist_formula"), theta).param("curve", word.to_string());
    let names = generator_names(g);
    for (i, name) in names.iter().enumerate() {
        let lhs = minus_l.exp_apply(theta.theta(i), None)?;
        let rhs = theta.evaluate(&twist.apply(&GroupWord::generator(g, i)));
        if let Some(d) = first_difference(&lhs, &rhs) {
            cert.fail(format!("generator {name}: {d}"));
        }
    }
    Ok(cert)
}

/// `|t_C|(X) = X - (X . [C]) [C]` on every basis vector.
pub fn verify_transvection(genus: usize, curve: &Curve) -> Result<Certificate> {
    let word = curve.word(genus)?;
    let c = word.homology_class();
    let m = curve.twist(genus)?.homology_matrix();
    let mut cert = Certificate::new("homology_transvection")
        .param("genus", genus)
        .param("curve", word.to_string());
    for j in 0..2 * genus {
        let pairing: i64 = (0..2 * genus).map(|l| c[l] * intersection(j, l)).sum();
        for r in 0..2 * genus {
            let expected = i64::from(r == j) - pairing * c[r];
            if m[r][j] != expected {
                cert.fail(format!(
                    "image of {} has coefficient {} on {}, expected {expected}",
                    BasisVector(j as u8).name(),
                    m[r][j],
                    BasisVector(r as u8).name()
                ));
            }
        }
    }
    Ok(cert)
}

/// `tau_1 = -L_3` and `tau_2 = -L_4 + 1/2 [L_2, L_4] + 1/2 L_3^2` for a non-separating curve.
pub fn verify_nonseparating_tau(theta: &Expansion, curve: &Curve) -> Result<Certificate> {
    require_symplectic(theta)?;
    if curve.is_separating() {
        return Err(Error::Parse {
            position: 0,
            message: "curve must be non-separating".into(),
        });
    }
    let g = theta.genus();
    let word = curve.word(g)?;
    let t = total_johnson(theta, &curve.twist(g)?)?.tau_on_h()?;
    let mut cert = base_params(Certificate::new("nonseparating_tau"), theta).param("curve", word.to_string());
    let tau1 = JohnsonComponent::from_values(1, t.clone());
    if let Some(d) = tau1.first_difference(&nonseparating_tau1_formula(theta, &word)) {
        cert.fail(format!("tau_1: {d}"));
    }
    if theta.truncation() >= 3 {
        let tau2 = JohnsonComponent::from_values(2, t);
        if let Some(d) = tau2.first_difference(&nonseparating_tau2_formula(theta, &word)) {
            cert.fail(format!("tau_2: {d}"));
        }
    }
    Ok(cert)
}

/// `tau_k(t_{gamma_h})` against the separating formula for `k = 1..=max_k`.
pub fn verify_separating_tau(theta: &Expansion, h: usize, max_k: usize) -> Result<Certificate> {
    require_symplectic(theta)?;
    let g = theta.genus();
    let twist = Curve::Separating(h).twist(g)?;
    let tau = total_johnson(theta, &twist)?.tau_on_h()?;
    let mut cert = base_params(Certificate::new("separating_tau"), theta)
        .param("h", h)
        .param("max_k", max_k);
    for k in 1..=max_k {
        let lhs = JohnsonComponent::from_values(k, tau.clone());
        let rhs = separating_tau_formula(theta, h, k)?;
        if let Some(d) = lhs.first_difference(&rhs) {
            cert.fail(format!("tau_{k}: {d}"));
        }
    }
    Ok(cert)
}

/// `L_i(w1) = L_i(w2)` for `2 <= i <= k + 1`.
pub fn verify_nilpotent_dependence(theta: &Expansion, w1: &GroupWord, w2: &GroupWord, k: usize) -> Certificate {
    let a = l_invariant_tensor(theta, w1);
    let b = l_invariant_tensor(theta, w2);
    let mut cert = base_params(Certificate::new("nilpotent_dependence"), theta)
        .param("w1", w1.to_string())
        .param("w2", w2.to_string())
        .param("k", k);
    for i in 2..=(k + 1).min(theta.truncation() + 1) {
        if let Some(d) = first_difference(&a.graded(i), &b.graded(i)) {
            cert.fail(format!("L_{i}: {d}"));
            break;
        }
    }
    cert
}

/// For a non-separating curve: `L_2^2 = L_2 L_3 = L_3 L_2 = 0`,
/// `L_2^3 L_4 = L_2^2 L_4 L_2 = 0` and `2 L_2 L_4 L_2 = L_2^2 L_4` on homology.
pub fn verify_operator_identities(theta: &Expansion, curve: &Curve) -> Result<Certificate> {
    require_symplectic(theta)?;
    let word = curve.word(theta.genus())?;
    let l = l_invariant(theta, &word);
    let (l2, l3, l4) = (l.graded(2), l.graded(3), l.graded(4));
    let mut cert = base_params(Certificate::new("operator_identities"), theta).param("curve", word.to_string());
    let zero_checks: [(&str, Vec<&Derivation>); 5] = [
        ("L2 L2", vec![&l2, &l2]),
        ("L2 L3", vec![&l2, &l3]),
        ("L3 L2", vec![&l3, &l2]),
        ("L2 L2 L2 L4", vec![&l2, &l2, &l2, &l4]),
        ("L2 L2 L4 L2", vec![&l2, &l2, &l4, &l2]),
    ];
    for (name, ds) in zero_checks {
        let vals = compose_on_h(&ds);
        if let Some((j, v)) = vals.iter().enumerate().find(|(_, v)| !v.is_zero()) {
            cert.fail(format!("{name} on {} = {v}", BasisVector(j as u8).name()));
        }
    }
    let lhs = compose_on_h(&[&l2, &l4, &l2]);
    let rhs = compose_on_h(&[&l2, &l2, &l4]);
    for (j, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
        if let Some(d) = first_difference(&a.scale(&Rational::from_int(2)), b) {
            cert.fail(format!("2 L2 L4 L2 vs L2 L2 L4 on {}: {d}", BasisVector(j as u8).name()));
        }
    }
    Ok(cert)
}

/// `L(C)` kills `omega`, preserves the omega-ideal, and `exp(-L)` matches the
/// twist on generator values modulo the ideal.
pub fn verify_omega_quotient(theta: &Expansion, curve: &Curve, ideal: &OmegaIdealContext) -> Result<Certificate> {
    require_symplectic(theta)?;
    let g = theta.genus();
    let word = curve.word(g)?;
    let twist = curve.twist(g)?;
    let l = l_invariant(theta, &word);
    let mut cert = base_params(Certificate::new("omega_quotient"), theta).param("curve", word.to_string());
    let lo = l.apply(&symplectic_form(theta.ctx()));
    cert.require(lo.is_zero(), || format!("L(omega) = {lo}"));
    'outer: for n in 2..=theta.truncation() {
        for r in ideal.spanning_elements(n) {
            if !ideal.contains(&l.apply(&r))? {
                cert.fail(format!("L does not preserve the ideal at {r}"));
                break 'outer;
            }
        }
    }
    let minus_l = l.neg();
    for (i, name) in generator_names(g).iter().enumerate() {
        let lhs = minus_l.exp_apply(theta.theta(i), None)?;
        let rhs = theta.evaluate(&twist.apply(&GroupWord::generator(g, i)));
        if !ideal.equal(&lhs, &rhs)? {
            cert.fail(format!("generator {name} differs modulo the ideal"));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ExpansionKind;
    use crate::lie::parse_expression;

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(1, 4), vec![vec![4]]);
        assert_eq!(compositions(2, 9), vec![vec![4, 5], vec![5, 4]]);
        assert!(compositions(2, 7).is_empty());
    }

    #[test]
    fn genus_one_fixture_low_l() {
        let theta = Expansion::fixture(ExpansionKind::FixtureGenus1, 1, 5).unwrap();
        let l = l_invariant_tensor(&theta, &GroupWord::alpha(1, 1));
        let c = l.ctx();
        assert_eq!(l.graded(2), parse_expression(c, "A1 A1").unwrap());
        assert!(l.graded(3).is_zero());
        let ab = parse_expression(c, "[A1,B1]").unwrap();
        assert_eq!(l.graded(4), cyclic_sum(&(&ab * &ab)).scale(&Rational::new(1, 24)));
    }

    #[test]
    fn loop_arg_syntax() {
        assert_eq!(
            LoopArg::parse(1, "(log a1)^2").unwrap(),
            LoopArg::LogPower { word: GroupWord::alpha(1, 1), power: 2 }
        );
        assert_eq!(LoopArg::parse(1, "a1 b1").unwrap(), LoopArg::Word(GroupWord::parse(1, "a1 b1").unwrap()));
    }
}
