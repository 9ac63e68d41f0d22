//! Magnus expansions of the surface group: evaluation on words, symplecticity
//! checks, fixtures, the degree-by-degree symplectic builder and the
//! automorphism connecting two expansions.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclic::is_alternating;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::free_group::{boundary_word, GroupWord};
use crate::lie::{self, exp, is_lie, log, phi_monomial};
use crate::rational::Rational;
use crate::tensor::{symplectic_form, AlgebraContext, Tensor, TensorJson};

const GENUS1: &str = include_str!("../data/genus1.expansion");
const GENUS2: &str = include_str!("../data/genus2.expansion");
const MASSUYEAU: &str = include_str!("../data/massuyeau_partial.expansion");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionKind {
    /// `theta(x) = 1 + [x]`; not group-like.
    Standard,
    /// `theta(x) = exp([x])`; group-like, symplectic only modulo degree three.
    Exponential,
    FixtureGenus1,
    FixtureGenus2,
    FixtureMassuyeauPartial,
    Built,
    User,
}

impl ExpansionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExpansionKind::Standard => "standard",
            ExpansionKind::Exponential => "exponential",
            ExpansionKind::FixtureGenus1 => "fixture-genus1",
            ExpansionKind::FixtureGenus2 => "fixture-genus2",
            ExpansionKind::FixtureMassuyeauPartial => "fixture-massuyeau-partial",
            ExpansionKind::Built => "built",
            ExpansionKind::User => "user",
        }
    }

    /// Largest truncation at which fixture data is known.
    pub fn trusted_truncation(&self) -> Option<usize> {
        match self {
            ExpansionKind::FixtureGenus1 => Some(5),
            ExpansionKind::FixtureGenus2 | ExpansionKind::FixtureMassuyeauPartial => Some(4),
            _ => None,
        }
    }

    fn fixture_text(&self) -> Option<(&'static str, &'static str)> {
        match self {
            ExpansionKind::FixtureGenus1 => Some(("genus1.expansion", GENUS1)),
            ExpansionKind::FixtureGenus2 => Some(("genus2.expansion", GENUS2)),
            ExpansionKind::FixtureMassuyeauPartial => Some(("massuyeau_partial.expansion", MASSUYEAU)),
            _ => None,
        }
    }
}

impl fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExpansionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "standard" => ExpansionKind::Standard,
            "exponential" => ExpansionKind::Exponential,
            "fixture-genus1" => ExpansionKind::FixtureGenus1,
            "fixture-genus2" => ExpansionKind::FixtureGenus2,
            "fixture-massuyeau-partial" => ExpansionKind::FixtureMassuyeauPartial,
            "built" => ExpansionKind::Built,
            "user" => ExpansionKind::User,
            _ => {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("unknown expansion kind `{s}`"),
                })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Values {
    /// `log theta(x_i)`.
    Log(Vec<Tensor>),
    /// `theta(x_i) - 1`, for expansions that are not group-like.
    Raw(Vec<Tensor>),
}

#[derive(Clone, Debug)]
pub struct Expansion {
    ctx: AlgebraContext,
    kind: ExpansionKind,
    values: Values,
    theta: Vec<Tensor>,
    theta_inv: Vec<Tensor>,
}

impl PartialEq for Expansion {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.theta == other.theta
    }
}

fn check_leading(ctx: AlgebraContext, values: &[Tensor]) -> Result<()> {
    if values.len() != ctx.rank() {
        return Err(Error::InvalidGenus(ctx.genus()));
    }
    for (i, v) in values.iter().enumerate() {
        ctx.check_same(&v.ctx())?;
        if !v.constant().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        if v.graded(1) != Tensor::basis(ctx, i) {
            return Err(Error::Parse {
                position: i,
                message: format!("degree-one part of generator {i} is not its homology class"),
            });
        }
    }
    Ok(())
}

/// `(1 + v)^-1 = sum (-v)^k`.
fn inverse_of_one_plus(v: &Tensor) -> Tensor {
    let ctx = v.ctx();
    let mut out = Tensor::one(ctx);
    let mut p = Tensor::one(ctx);
    let m = -v;
    for _ in 0..ctx.truncation() {
        p = &p * &m;
        if p.is_zero() {
            break;
        }
        out = &out + &p;
    }
    out
}

impl Expansion {
    /// Group-like style: values given as logarithms with degree-one part `X_i`.
    pub fn from_logs(ctx: AlgebraContext, kind: ExpansionKind, logs: Vec<Tensor>) -> Result<Self> {
        check_leading(ctx, &logs)?;
        let theta = logs.iter().map(exp).collect::<Result<Vec<_>>>()?;
        let theta_inv = logs.iter().map(|l| exp(&-l)).collect::<Result<Vec<_>>>()?;
        Ok(Expansion {
            ctx,
            kind,
            values: Values::Log(logs),
            theta,
            theta_inv,
        })
    }

    /// Raw style: values given as `theta(x_i) - 1`.
    pub fn from_raw(ctx: AlgebraContext, kind: ExpansionKind, raw: Vec<Tensor>) -> Result<Self> {
        check_leading(ctx, &raw)?;
        let one = Tensor::one(ctx);
        let theta = raw.iter().map(|v| &one + v).collect();
        let theta_inv = raw.iter().map(inverse_of_one_plus).collect();
        Ok(Expansion {
            ctx,
            kind,
            values: Values::Raw(raw),
            theta,
            theta_inv,
        })
    }

    pub fn standard(ctx: AlgebraContext) -> Self {
        let raw = (0..ctx.rank()).map(|i| Tensor::basis(ctx, i)).collect();
        Expansion::from_raw(ctx, ExpansionKind::Standard, raw).expect("valid")
    }

    pub fn exponential(ctx: AlgebraContext) -> Self {
        let logs = (0..ctx.rank()).map(|i| Tensor::basis(ctx, i)).collect();
        Expansion::from_logs(ctx, ExpansionKind::Exponential, logs).expect("valid")
    }

    /// Loads a shipped fixture at the given genus and truncation.
    pub fn fixture(kind: ExpansionKind, genus: usize, truncation: usize) -> Result<Self> {
        let (_, text) = kind
            .fixture_text()
            .ok_or_else(|| Error::FixtureUnavailable(kind.to_string()))?;
        Expansion::from_fixture_text(text, genus, truncation)
    }

    /// Like [`Expansion::fixture`] but reads the data file from `dir`.
    pub fn fixture_from_dir(dir: &Path, kind: ExpansionKind, genus: usize, truncation: usize) -> Result<Self> {
        let (name, _) = kind
            .fixture_text()
            .ok_or_else(|| Error::FixtureUnavailable(kind.to_string()))?;
        let text = std::fs::read_to_string(dir.join(name))
            .map_err(|e| Error::Json(format!("{}: {e}", dir.join(name).display())))?;
        Expansion::from_fixture_text(&text, genus, truncation)
    }

    /// Parses the fixture text format: `key value` header lines and
    /// `name = bracket expression` entries, with continuation lines and `#` comments.
    pub fn from_fixture_text(text: &str, genus: usize, truncation: usize) -> Result<Self> {
        let mut file_genus = None;
        let mut trusted = None;
        let mut kind = ExpansionKind::User;
        let mut entries: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                position: lineno + 1,
                message,
            };
            if let Some((name, expr)) = line.split_once('=') {
                entries.push((name.trim().to_string(), expr.trim().to_string()));
            } else if line.starts_with('+') || line.starts_with('-') {
                let last = entries
                    .last_mut()
                    .ok_or_else(|| parse_err("continuation without entry".into()))?;
                last.1.push(' ');
                last.1.push_str(line);
            } else {
                let (key, value) = line
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(format!("malformed line `{line}`")))?;
                let value = value.trim();
                match key {
                    "genus" => file_genus = Some(value.parse::<usize>().map_err(|_| parse_err("bad genus".into()))?),
                    "truncation" => trusted = Some(value.parse::<usize>().map_err(|_| parse_err("bad truncation".into()))?),
                    "kind" => kind = value.parse()?,
                    _ => return Err(parse_err(format!("unknown key `{key}`"))),
                }
            }
        }
        let file_genus = file_genus.ok_or_else(|| Error::Parse {
            position: 0,
            message: "missing genus".into(),
        })?;
        let trusted = trusted.ok_or_else(|| Error::Parse {
            position: 0,
            message: "missing truncation".into(),
        })?;
        if truncation > trusted {
            return Err(Error::FixtureDegreeExceeded {
                fixture: kind.to_string(),
                requested: truncation,
                trusted,
            });
        }
        let partial = kind == ExpansionKind::FixtureMassuyeauPartial;
        if genus != file_genus && !(partial && genus >= file_genus) {
            return Err(Error::FixtureUnavailable(format!("{kind} in genus {genus}")));
        }
        let ctx = AlgebraContext::new(genus, truncation)?;
        let mut logs: Vec<Tensor> = (0..ctx.rank()).map(|i| Tensor::basis(ctx, i)).collect();
        let mut seen = vec![false; ctx.rank()];
        for (name, expr) in &entries {
            let w = GroupWord::parse(genus, name)?;
            let idx = match w.letters() {
                [l] if !l.inverse => l.generator as usize,
                _ => {
                    return Err(Error::Parse {
                        position: 0,
                        message: format!("entry name `{name}` is not a generator"),
                    })
                }
            };
            logs[idx] = lie::parse_expression(ctx, expr)?;
            seen[idx] = true;
        }
        if !partial && seen.iter().any(|s| !s) {
            return Err(Error::Parse {
                position: 0,
                message: "fixture does not define every generator".into(),
            });
        }
        Expansion::from_logs(ctx, kind, logs)
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn genus(&self) -> usize {
        self.ctx.genus()
    }

    pub fn truncation(&self) -> usize {
        self.ctx.truncation()
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: ExpansionKind) -> Self {
        self.kind = kind;
        self
    }

    /// `theta(x_i)`.
    pub fn theta(&self, i: usize) -> &Tensor {
        &self.theta[i]
    }

    pub fn theta_inverse(&self, i: usize) -> &Tensor {
        &self.theta_inv[i]
    }

    /// `log theta(x_i)`.
    pub fn generator_log(&self, i: usize) -> Tensor {
        match &self.values {
            Values::Log(l) => l[i].clone(),
            Values::Raw(_) => log(&self.theta[i]).expect("constant term one"),
        }
    }

    pub fn generator_logs(&self) -> Vec<Tensor> {
        (0..self.ctx.rank()).map(|i| self.generator_log(i)).collect()
    }

    pub fn is_raw(&self) -> bool {
        matches!(self.values, Values::Raw(_))
    }

    /// The same expansion read modulo a lower (or padded to a higher) degree.
    pub fn with_truncation(&self, n: usize) -> Self {
        let ctx = self.ctx.with_truncation(n);
        match &self.values {
            Values::Log(l) => Expansion::from_logs(ctx, self.kind, l.iter().map(|t| t.with_truncation(n)).collect()),
            Values::Raw(r) => Expansion::from_raw(ctx, self.kind, r.iter().map(|t| t.with_truncation(n)).collect()),
        }
        .expect("leading terms preserved")
    }

    /// `theta(w)`, the product of generator values and their inverses.
    pub fn evaluate(&self, w: &GroupWord) -> Tensor {
        assert_eq!(w.genus(), self.genus(), "genus mismatch");
        let mut out = Tensor::one(self.ctx);
        for l in w.letters() {
            let f = if l.inverse {
                &self.theta_inv[l.generator as usize]
            } else {
                &self.theta[l.generator as usize]
            };
            out = &out * f;
        }
        out
    }

    /// `log theta(w)`.
    pub fn log_evaluate(&self, w: &GroupWord) -> Tensor {
        log(&self.evaluate(w)).expect("constant term one")
    }

    /// `log theta(w)` by folding BCH over the letters; agrees with
    /// [`Expansion::log_evaluate`] and serves as its cross-check.
    pub fn log_evaluate_bch(&self, w: &GroupWord) -> Tensor {
        let logs = self.generator_logs();
        let mut acc = Tensor::zero(self.ctx);
        for l in w.letters() {
            let x = &logs[l.generator as usize];
            let x = if l.inverse { -x } else { x.clone() };
            acc = lie::bch(&acc, &x).expect("no constant term");
        }
        acc
    }

    pub fn is_group_like(&self) -> bool {
        (0..self.ctx.rank()).all(|i| is_lie(&self.generator_log(i)))
    }

    /// `log theta(zeta) - omega`.
    pub fn boundary_defect(&self) -> Tensor {
        &self.log_evaluate(&boundary_word(self.genus())) - &symplectic_form(self.ctx)
    }

    pub fn is_symplectic(&self) -> bool {
        self.is_group_like() && self.boundary_defect().is_zero()
    }

    /// Lowest degree where the expansion fails to be symplectic, if any.
    pub fn symplectic_failure(&self) -> Option<String> {
        for i in 0..self.ctx.rank() {
            if let Some(d) = lie::first_non_lie_degree(&self.generator_log(i)) {
                return Some(format!("generator {i} log is not Lie in degree {d}"));
            }
        }
        self.boundary_defect()
            .min_degree()
            .map(|d| format!("log theta(zeta) differs from omega in degree {d}"))
    }

    pub fn to_json(&self) -> ExpansionJson {
        let names = generator_names(self.genus());
        let generators = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| match &self.values {
                Values::Log(l) => GeneratorJson {
                    name,
                    log: Some(l[i].to_json()),
                    value: None,
                },
                Values::Raw(r) => GeneratorJson {
                    name,
                    log: None,
                    value: Some(r[i].to_json()),
                },
            })
            .collect();
        ExpansionJson {
            genus: self.genus(),
            truncation: self.truncation(),
            kind: self.kind.to_string(),
            generators,
        }
    }

    pub fn from_json(j: &ExpansionJson) -> Result<Self> {
        let ctx = AlgebraContext::new(j.genus, j.truncation)?;
        let kind: ExpansionKind = j.kind.parse()?;
        if let Some(t) = kind.trusted_truncation() {
            if j.truncation > t {
                return Err(Error::FixtureDegreeExceeded {
                    fixture: kind.to_string(),
                    requested: j.truncation,
                    trusted: t,
                });
            }
        }
        let names = generator_names(j.genus);
        if j.generators.len() != names.len() {
            return Err(Error::Json(format!("expected {} generators", names.len())));
        }
        let mut logs = Vec::new();
        let mut raws = Vec::new();
        for (g, name) in j.generators.iter().zip(&names) {
            if &g.name != name {
                return Err(Error::Json(format!("expected generator `{name}`, found `{}`", g.name)));
            }
            match (&g.log, &g.value) {
                (Some(l), None) => logs.push(Tensor::from_json(l)?),
                (None, Some(v)) => raws.push(Tensor::from_json(v)?),
                _ => return Err(Error::Json(format!("generator `{name}` needs exactly one of `log`, `value`"))),
            }
        }
        for t in logs.iter().chain(raws.iter()) {
            ctx.check_same(&t.ctx())?;
        }
        match (logs.is_empty(), raws.is_empty()) {
            (false, true) => Expansion::from_logs(ctx, kind, logs),
            (true, false) => Expansion::from_raw(ctx, kind, raws),
            _ => Err(Error::Json("mixed `log` and `value` generators".into())),
        }
    }
}

pub fn generator_names(genus: usize) -> Vec<String> {
    (1..=genus)
        .flat_map(|i| [format!("a{i}"), format!("b{i}")])
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExpansionJson {
    pub genus: usize,
    pub truncation: usize,
    pub kind: String,
    pub generators: Vec<GeneratorJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorJson {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log: Option<TensorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<TensorJson>,
}

/// Corrects a group-like seed degree by degree until `log theta(zeta) = omega`
/// holds modulo degree `truncation + 1`.
///
/// At step `m` the defect `delta` (degree `m`, Lie) is written as
/// `(1/m) sum_w c_w [w_1, phi(w_2..w_m)]`; a term starting with `A_i` is
/// absorbed into `log theta(beta_i)`, one starting with `B_i` into
/// `log theta(alpha_i)`, both in degree `m - 1`.
pub fn build_symplectic(genus: usize, truncation: usize, seed: Option<&Expansion>) -> Result<Expansion> {
    let ctx = AlgebraContext::new(genus, truncation)?;
    let seed = match seed {
        Some(s) => {
            if s.genus() != genus {
                return Err(Error::InvalidGenus(s.genus()));
            }
            s.with_truncation(truncation + 1)
        }
        None => Expansion::exponential(ctx.with_truncation(truncation + 1)),
    };
    for i in 0..ctx.rank() {
        if let Some(degree) = lie::first_non_lie_degree(&seed.generator_log(i)) {
            return Err(Error::NotLie { degree });
        }
    }
    let mut logs = seed.generator_logs();
    let zeta = boundary_word(genus);
    // One degree past the target, so that the top degree is the truncation
    // of a genuinely symplectic expansion and not an arbitrary completion.
    for m in 3..=truncation + 1 {
        let sub = ctx.with_truncation(m);
        let partial = Expansion::from_logs(
            sub,
            ExpansionKind::Built,
            logs.iter().map(|l| l.with_truncation(m)).collect(),
        )?;
        let defect = &partial.log_evaluate(&zeta) - &symplectic_form(sub);
        if let Some(d) = defect.min_degree() {
            if d < m {
                return Err(Error::NotSymplectic(format!(
                    "seed defect in degree {d} below the correction degree {m}"
                )));
            }
        }
        let mut corrections = vec![Tensor::zero(ctx.with_truncation(truncation + 1)); ctx.rank()];
        let weight = Rational::new(1, m as i64);
        for (w, c) in defect.terms() {
            let x = w[0] as usize;
            let scale = c * &weight;
            let (target, sign) = if x % 2 == 0 { (x + 1, -1) } else { (x - 1, 1) };
            let s = &scale * &Rational::from_int(sign);
            for (mono, k) in phi_monomial(&w[1..]) {
                corrections[target].add_term(mono, &s * &Rational::from_int(k));
            }
        }
        for (l, c) in logs.iter_mut().zip(&corrections) {
            *l = &*l + c;
        }
    }
    let lifted = Expansion::from_logs(ctx.with_truncation(truncation + 1), ExpansionKind::Built, logs)?;
    if let Some(msg) = lifted.symplectic_failure() {
        return Err(Error::NotSymplectic(msg));
    }
    let built = lifted.with_truncation(truncation);
    match built.symplectic_failure() {
        None => Ok(built),
        Some(msg) => Err(Error::NotSymplectic(msg)),
    }
}

/// The filtration-preserving algebra automorphism `U` with `U . theta = theta'`.
#[derive(Clone, Debug)]
pub struct ConnectingAutomorphism {
    ctx: AlgebraContext,
    /// `U(X_j)` for each basis vector.
    values: Vec<Tensor>,
}

/// Solves `U(sources_i) = targets_i` for an algebra endomorphism `U`,
/// one degree at a time. Each source is `1 + X_i + ...`; the degree-one parts
/// of the targets fix `U` on homology to first order.
pub(crate) fn solve_substitution(sources: &[Tensor], targets: &[Tensor]) -> Result<Vec<Tensor>> {
    let ctx = sources[0].ctx();
    let n = ctx.truncation();
    let mut values: Vec<Tensor> = targets.iter().map(|t| t.graded(1)).collect();
    for k in 1..n {
        let mut updates = Vec::with_capacity(ctx.rank());
        for (s, t) in sources.iter().zip(targets) {
            let r = t - &s.substitute(&values);
            if let Some(d) = r.min_degree() {
                if d <= k {
                    return Err(Error::InconsistentSystem { degree: d });
                }
            }
            updates.push(r.graded(k + 1));
        }
        for (v, u) in values.iter_mut().zip(&updates) {
            *v = &*v + u;
        }
    }
    for (s, t) in sources.iter().zip(targets) {
        if let Some(d) = (t - &s.substitute(&values)).min_degree() {
            return Err(Error::InconsistentSystem { degree: d });
        }
    }
    Ok(values)
}

/// The automorphism `U` with `U . theta = theta'`, so that `U|_H = 1 + u_1 + u_2 + ...`.
pub fn connecting_automorphism(theta: &Expansion, theta_prime: &Expansion) -> Result<ConnectingAutomorphism> {
    let ctx = theta.ctx();
    ctx.check_same(&theta_prime.ctx())?;
    let values = solve_substitution(&theta.theta, &theta_prime.theta)?;
    Ok(ConnectingAutomorphism { ctx, values })
}

impl ConnectingAutomorphism {
    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    /// `U(X_j)`.
    pub fn values(&self) -> &[Tensor] {
        &self.values
    }

    pub fn apply(&self, t: &Tensor) -> Tensor {
        t.substitute(&self.values)
    }

    /// `u_k`: the degree `k+1` part of `U|_H`.
    pub fn component(&self, k: usize) -> Vec<Tensor> {
        self.values.iter().map(|v| v.graded(k + 1)).collect()
    }

    /// `(log U)|_H`, from `log U = sum (-1)^(n-1)/n (U - 1)^n`.
    pub fn log_on_h(&self) -> Derivation {
        let n = self.ctx.truncation();
        let values = (0..self.ctx.rank())
            .map(|j| {
                let mut v = Tensor::basis(self.ctx, j);
                let mut out = Tensor::zero(self.ctx);
                for k in 1..=n {
                    v = &self.apply(&v) - &v;
                    if v.is_zero() {
                        break;
                    }
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    out.add_scaled(&v, &Rational::new(sign, k as i64));
                }
                out
            })
            .collect();
        Derivation::from_values(self.ctx, values).expect("rank matches")
    }

    /// `u_1`, viewed in `H^{(x)3}` through Poincare duality, is alternating.
    pub fn u1_is_alternating(&self) -> bool {
        let d = Derivation::from_values(self.ctx, self.component(1)).expect("rank matches");
        is_alternating(&d.to_tensor())
    }

    /// `(log U)|_H` takes Lie values and its tensor view lies in the kernel of the bracket.
    pub fn log_in_bracket_kernel(&self) -> bool {
        let d = self.log_on_h();
        d.values().iter().all(is_lie) && d.kills_omega()
    }
}

impl fmt::Display for ConnectingAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, v) in self.values.iter().enumerate() {
            writeln!(f, "U({}) = {}", crate::tensor::BasisVector(j as u8).name(), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_not_group_like() {
        let ctx = AlgebraContext::new(1, 3).unwrap();
        let s = Expansion::standard(ctx);
        assert!(!s.is_group_like());
        let w = GroupWord::parse(1, "a1 A1").unwrap();
        assert_eq!(s.evaluate(&w), Tensor::one(ctx));
        let x = GroupWord::parse(1, "A1").unwrap();
        assert_eq!(&s.evaluate(&x) * s.theta(0), Tensor::one(ctx));
    }

    #[test]
    fn exponential_is_symplectic_only_to_degree_two() {
        let ctx = AlgebraContext::new(1, 2).unwrap();
        assert!(Expansion::exponential(ctx).is_symplectic());
        let ctx = AlgebraContext::new(1, 3).unwrap();
        assert!(!Expansion::exponential(ctx).is_symplectic());
    }

    #[test]
    fn fixture_degree_limit() {
        assert!(matches!(
            Expansion::fixture(ExpansionKind::FixtureGenus1, 1, 6),
            Err(Error::FixtureDegreeExceeded { .. })
        ));
        assert!(Expansion::fixture(ExpansionKind::FixtureGenus2, 1, 3).is_err());
    }

    #[test]
    fn builder_is_idempotent_on_symplectic_seed() {
        let built = build_symplectic(1, 4, None).unwrap();
        let again = build_symplectic(1, 4, Some(&built)).unwrap();
        assert_eq!(built, again);
    }

    #[test]
    fn log_evaluate_matches_bch_fold() {
        let ctx = AlgebraContext::new(2, 4).unwrap();
        let e = Expansion::fixture(ExpansionKind::FixtureGenus2, 2, 4).unwrap();
        let w = GroupWord::parse(2, "a1 B2 b1 a2 A1").unwrap();
        assert_eq!(e.log_evaluate(&w), e.log_evaluate_bch(&w));
        assert_eq!(e.ctx(), ctx);
    }

    #[test]
    fn json_roundtrip() {
        let ctx = AlgebraContext::new(1, 3).unwrap();
        for e in [Expansion::standard(ctx), build_symplectic(1, 3, None).unwrap()] {
            let s = serde_json::to_string(&e.to_json()).unwrap();
            let j: ExpansionJson = serde_json::from_str(&s).unwrap();
            let back = Expansion::from_json(&j).unwrap();
            assert_eq!(back, e);
            assert_eq!(back.kind(), e.kind());
        }
    }

    #[test]
    fn connecting_identity() {
        let e = build_symplectic(1, 4, None).unwrap();
        let u = connecting_automorphism(&e, &e).unwrap();
        for (j, v) in u.values().iter().enumerate() {
            assert_eq!(v, &Tensor::basis(e.ctx(), j));
        }
    }

    #[test]
    fn boundary_word_is_degree_two_omega() {
        let ctx = AlgebraContext::new(2, 2).unwrap();
        let e = Expansion::exponential(ctx);
        assert!(e.boundary_defect().is_zero());
    }
}
