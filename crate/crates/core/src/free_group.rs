//! Reduced words in the free group on `alpha_1, beta_1, ..., alpha_g, beta_g`,
//! substitution automorphisms and Dehn twists.
//!
//! Generator `2i-2` is `alpha_i` and `2i-1` is `beta_i`, matching the homology
//! basis. In text, `a1`/`b1` are generators and `A1`/`B1` their inverses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupWord {
    genus: usize,
    letters: Vec<Letter>,
}

impl GroupWord {
    /// Freely reduces `letters`.
    pub fn new(genus: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.generator as usize >= 2 * genus {
                return Err(Error::BasisOutOfRange {
                    index: l.generator as usize,
                    genus,
                });
            }
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(GroupWord {
            genus,
            letters: out,
        })
    }

    pub fn identity(genus: usize) -> Self {
        GroupWord {
            genus,
            letters: Vec::new(),
        }
    }

    pub fn generator(genus: usize, index: usize) -> Self {
        assert!(index < 2 * genus, "generator out of range");
        GroupWord {
            genus,
            letters: vec![Letter {
                generator: index as u8,
                inverse: false,
            }],
        }
    }

    /// `alpha_i`, 1-based.
    pub fn alpha(genus: usize, i: usize) -> Self {
        GroupWord::generator(genus, 2 * i - 2)
    }

    /// `beta_i`, 1-based.
    pub fn beta(genus: usize, i: usize) -> Self {
        GroupWord::generator(genus, 2 * i - 1)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            genus: self.genus,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &GroupWord) -> Self {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        GroupWord::new(
            self.genus,
            self.letters.iter().chain(other.letters.iter()).copied(),
        )
        .expect("letters already validated")
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity(self.genus);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// `y^-1 x y`.
    pub fn conjugate_by(&self, y: &GroupWord) -> Self {
        y.inverse().mul(self).mul(y)
    }

    /// Exponent sums: the homology class in the basis `A_1, B_1, ...`.
    pub fn homology_class(&self) -> Vec<i64> {
        let mut v = vec![0; 2 * self.genus];
        for l in &self.letters {
            v[l.generator as usize] += if l.inverse { -1 } else { 1 };
        }
        v
    }

    pub fn parse(genus: usize, s: &str) -> Result<Self> {
        let b = s.as_bytes();
        let mut letters = Vec::new();
        let mut pos = 0;
        let err = |position: usize, message: String| Error::Parse { position, message };
        while pos < b.len() {
            let c = b[pos];
            if c.is_ascii_whitespace() || c == b'*' || c == b'.' {
                pos += 1;
                continue;
            }
            if c == b'1' && (pos + 1 == b.len() || !b[pos + 1].is_ascii_digit()) {
                pos += 1;
                continue;
            }
            let (is_beta, inverse) = match c {
                b'a' => (false, false),
                b'b' => (true, false),
                b'A' => (false, true),
                b'B' => (true, true),
                _ => return Err(err(pos, format!("unexpected character `{}`", c as char))),
            };
            let start = pos;
            pos += 1;
            let ds = pos;
            while pos < b.len() && b[pos].is_ascii_digit() {
                pos += 1;
            }
            let i: usize = s[ds..pos]
                .parse()
                .map_err(|_| err(start, "expected handle number".into()))?;
            if i == 0 || i > genus {
                return Err(err(start, format!("handle {i} out of range for genus {genus}")));
            }
            letters.push(Letter {
                generator: (2 * (i - 1) + usize::from(is_beta)) as u8,
                inverse,
            });
        }
        GroupWord::new(genus, letters)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let c = match (l.generator % 2 == 1, l.inverse) {
                    (false, false) => 'a',
                    (true, false) => 'b',
                    (false, true) => 'A',
                    (true, true) => 'B',
                };
                format!("{c}{}", l.generator / 2 + 1)
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `zeta = prod_i [alpha_i, beta_i]`, the boundary word.
pub fn boundary_word(genus: usize) -> GroupWord {
    separating_word(genus, genus)
}

/// `gamma_h = prod_{i<=h} [alpha_i, beta_i]`.
pub fn separating_word(genus: usize, h: usize) -> GroupWord {
    let mut w = GroupWord::identity(genus);
    for i in 1..=h {
        w = w.mul(&GroupWord::commutator(
            &GroupWord::alpha(genus, i),
            &GroupWord::beta(genus, i),
        ));
    }
    w
}

/// Dehn twists available as factorization atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistKind {
    /// Twist along `alpha_i`: `beta_i -> beta_i alpha_i`.
    Alpha(usize),
    /// Twist along `beta_i`: `alpha_i -> alpha_i beta_i^-1`.
    Beta(usize),
    /// Twist along `gamma_h`: conjugation by `gamma_h` on the first `h` handles.
    Separating(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwistFactor {
    pub kind: TwistKind,
    pub inverse: bool,
}

impl TwistFactor {
    pub fn new(kind: TwistKind) -> Self {
        TwistFactor {
            kind,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        TwistFactor {
            kind: self.kind,
            inverse: !self.inverse,
        }
    }

    fn validate(&self, genus: usize) -> Result<()> {
        let ok = match self.kind {
            TwistKind::Alpha(i) | TwistKind::Beta(i) => i >= 1 && i <= genus,
            TwistKind::Separating(h) => h >= 1 && h <= genus,
        };
        if ok {
            Ok(())
        } else {
            let h = match self.kind {
                TwistKind::Alpha(i) | TwistKind::Beta(i) | TwistKind::Separating(i) => i,
            };
            Err(Error::TwistOutOfRange { h, genus })
        }
    }

    fn images(&self, genus: usize) -> Vec<GroupWord> {
        let mut images: Vec<GroupWord> = (0..2 * genus).map(|i| GroupWord::generator(genus, i)).collect();
        let e = if self.inverse { -1 } else { 1 };
        match self.kind {
            TwistKind::Alpha(i) => {
                images[2 * i - 1] = GroupWord::beta(genus, i).mul(&GroupWord::alpha(genus, i).pow(e));
            }
            TwistKind::Beta(i) => {
                images[2 * i - 2] = GroupWord::alpha(genus, i).mul(&GroupWord::beta(genus, i).pow(-e));
            }
            TwistKind::Separating(h) => {
                let g = separating_word(genus, h).pow(e);
                for img in images.iter_mut().take(2 * h) {
                    *img = img.conjugate_by(&g);
                }
            }
        }
        images
    }
}

impl fmt::Display for TwistFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TwistKind::Alpha(i) => write!(f, "alpha:{i}")?,
            TwistKind::Beta(i) => write!(f, "beta:{i}")?,
            TwistKind::Separating(h) => write!(f, "sep:{h}")?,
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl FromStr for TwistFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let bad = || Error::Parse {
            position: 0,
            message: format!("invalid twist `{s}`"),
        };
        let kind = if body == "nonsep" {
            TwistKind::Alpha(1)
        } else {
            let (name, n) = body.split_once(':').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            match name {
                "alpha" => TwistKind::Alpha(n),
                "beta" => TwistKind::Beta(n),
                "sep" => TwistKind::Separating(n),
                _ => return Err(bad()),
            }
        };
        Ok(TwistFactor { kind, inverse })
    }
}

/// An endomorphism of the free group given by generator images, optionally
/// with a factorization into twists (leftmost factor applied last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    genus: usize,
    images: Vec<GroupWord>,
    factorization: Option<Vec<TwistFactor>>,
}

impl FreeAutomorphism {
    pub fn identity(genus: usize) -> Self {
        FreeAutomorphism {
            genus,
            images: (0..2 * genus).map(|i| GroupWord::generator(genus, i)).collect(),
            factorization: Some(Vec::new()),
        }
    }

    /// Images without a factorization; inverse is then unavailable.
    pub fn from_images(genus: usize, images: Vec<GroupWord>) -> Result<Self> {
        if images.len() != 2 * genus || images.iter().any(|w| w.genus != genus) {
            return Err(Error::InvalidGenus(genus));
        }
        Ok(FreeAutomorphism {
            genus,
            images,
            factorization: None,
        })
    }

    pub fn twist(genus: usize, factor: TwistFactor) -> Result<Self> {
        factor.validate(genus)?;
        Ok(FreeAutomorphism {
            genus,
            images: factor.images(genus),
            factorization: Some(vec![factor]),
        })
    }

    /// The twist along `alpha_1`.
    pub fn twist_nonseparating(genus: usize) -> Self {
        FreeAutomorphism::twist(genus, TwistFactor::new(TwistKind::Alpha(1))).expect("genus >= 1")
    }

    /// The twist along `gamma_h`; `h = genus` is the boundary-parallel case.
    pub fn twist_separating(genus: usize, h: usize) -> Result<Self> {
        FreeAutomorphism::twist(genus, TwistFactor::new(TwistKind::Separating(h)))
    }

    pub fn from_factorization(genus: usize, factors: &[TwistFactor]) -> Result<Self> {
        let mut out = FreeAutomorphism::identity(genus);
        for f in factors {
            out = out.compose(&FreeAutomorphism::twist(genus, *f)?);
        }
        Ok(out)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn factorization(&self) -> Option<&[TwistFactor]> {
        self.factorization.as_deref()
    }

    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        assert_eq!(w.genus, self.genus, "genus mismatch");
        let mut letters = Vec::new();
        for l in &w.letters {
            let img = &self.images[l.generator as usize];
            if l.inverse {
                letters.extend(img.letters.iter().rev().map(|x| x.inv()));
            } else {
                letters.extend_from_slice(&img.letters);
            }
        }
        GroupWord::new(self.genus, letters).expect("letters already validated")
    }

    /// `self . other`: first `other`, then `self`.
    pub fn compose(&self, other: &FreeAutomorphism) -> FreeAutomorphism {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        let factorization = match (&self.factorization, &other.factorization) {
            (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).copied().collect()),
            _ => None,
        };
        FreeAutomorphism {
            genus: self.genus,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            factorization,
        }
    }

    /// Inverse through the recorded twist factorization.
    pub fn inverse(&self) -> Result<FreeAutomorphism> {
        let f = self.factorization.as_ref().ok_or(Error::NoFactorization)?;
        let inv: Vec<TwistFactor> = f.iter().rev().map(|t| t.inv()).collect();
        FreeAutomorphism::from_factorization(self.genus, &inv)
    }

    pub fn is_boundary_preserving(&self) -> bool {
        let z = boundary_word(self.genus);
        self.apply(&z) == z
    }

    /// Induced map on homology: column `i` is the class of the image of generator `i`.
    pub fn homology_matrix(&self) -> Vec<Vec<i64>> {
        let n = 2 * self.genus;
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.homology_class()).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect()
    }

    pub fn is_invertible_on_homology(&self) -> bool {
        let m: Vec<Vec<Rational>> = self
            .homology_matrix()
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        linalg::inverse(&m).is_some()
    }

    pub fn to_json(&self) -> AutomorphismJson {
        AutomorphismJson {
            genus: self.genus,
            images: self.images.iter().map(|w| w.to_string()).collect(),
            factorization: self
                .factorization
                .as_ref()
                .map(|f| f.iter().map(|t| t.to_string()).collect()),
        }
    }

    pub fn from_json(j: &AutomorphismJson) -> Result<Self> {
        let factorization = match &j.factorization {
            Some(f) => Some(f.iter().map(|s| s.parse()).collect::<Result<Vec<TwistFactor>>>()?),
            None => None,
        };
        if let Some(f) = &factorization {
            let built = FreeAutomorphism::from_factorization(j.genus, f)?;
            if !j.images.is_empty() {
                let images = j
                    .images
                    .iter()
                    .map(|s| GroupWord::parse(j.genus, s))
                    .collect::<Result<Vec<_>>>()?;
                if images != built.images {
                    return Err(Error::Json("images do not match the factorization".into()));
                }
            }
            return Ok(built);
        }
        let images = j
            .images
            .iter()
            .map(|s| GroupWord::parse(j.genus, s))
            .collect::<Result<Vec<_>>>()?;
        FreeAutomorphism::from_images(j.genus, images)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AutomorphismJson {
    pub genus: usize,
    #[serde(default)]
    pub images: Vec<String>,
    #[serde(default)]
    pub factorization: Option<Vec<String>>,
}

/// A simple closed curve: an adapted representative or a twist image of one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curve {
    /// The curve `alpha_1`.
    NonSeparating,
    /// The curve `gamma_h`.
    Separating(usize),
    /// `phi(C)` for a mapping class `phi` with a twist factorization.
    Conjugated {
        by: FreeAutomorphism,
        base: Box<Curve>,
    },
}

impl Curve {
    pub fn conjugated(by: FreeAutomorphism, base: Curve) -> Curve {
        Curve::Conjugated {
            by,
            base: Box::new(base),
        }
    }

    /// A based loop representing the curve.
    pub fn word(&self, genus: usize) -> Result<GroupWord> {
        match self {
            Curve::NonSeparating => Ok(GroupWord::alpha(genus, 1)),
            Curve::Separating(h) => {
                if *h == 0 || *h > genus {
                    return Err(Error::TwistOutOfRange { h: *h, genus });
                }
                Ok(separating_word(genus, *h))
            }
            Curve::Conjugated { by, base } => Ok(by.apply(&base.word(genus)?)),
        }
    }

    /// The right-handed Dehn twist along the curve.
    pub fn twist(&self, genus: usize) -> Result<FreeAutomorphism> {
        match self {
            Curve::NonSeparating => Ok(FreeAutomorphism::twist_nonseparating(genus)),
            Curve::Separating(h) => FreeAutomorphism::twist_separating(genus, *h),
            Curve::Conjugated { by, base } => {
                Ok(by.compose(&base.twist(genus)?).compose(&by.inverse()?))
            }
        }
    }

    pub fn is_separating(&self) -> bool {
        match self {
            Curve::NonSeparating => false,
            Curve::Separating(_) => true,
            Curve::Conjugated { base, .. } => base.is_separating(),
        }
    }

    /// Parses `nonsep`, `sep:h`, or `conj(t1 t2 ...; base)` with twist atoms
    /// such as `alpha:1`, `beta:2^-1`, `sep:1`.
    pub fn parse(genus: usize, s: &str) -> Result<Curve> {
        let s = s.trim();
        if s == "nonsep" {
            return Ok(Curve::NonSeparating);
        }
        if let Some(h) = s.strip_prefix("sep:") {
            let h: usize = h.trim().parse().map_err(|_| Error::Parse {
                position: 4,
                message: format!("invalid separating index `{h}`"),
            })?;
            if h == 0 || h > genus {
                return Err(Error::TwistOutOfRange { h, genus });
            }
            return Ok(Curve::Separating(h));
        }
        if let Some(inner) = s.strip_prefix("conj(").and_then(|r| r.strip_suffix(')')) {
            let (factors, base) = inner.split_once(';').unwrap_or((inner, "nonsep"));
            let factors = factors
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<Vec<TwistFactor>>>()?;
            let by = FreeAutomorphism::from_factorization(genus, &factors)?;
            return Ok(Curve::conjugated(by, Curve::parse(genus, base)?));
        }
        Err(Error::Parse {
            position: 0,
            message: format!("unknown curve `{s}`"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        let w = GroupWord::parse(2, "a1 b1 B1 A1 a2").unwrap();
        assert_eq!(w.to_string(), "a2");
        assert_eq!(GroupWord::parse(1, "a1b1A1B1").unwrap().to_string(), "a1 b1 A1 B1");
        assert!(GroupWord::parse(1, "a2").is_err());
        assert!(GroupWord::parse(1, "").unwrap().is_empty());
    }

    #[test]
    fn separating_twist_example() {
        let t = FreeAutomorphism::twist_separating(2, 1).unwrap();
        let img = t.apply(&GroupWord::alpha(2, 1));
        let gamma = separating_word(2, 1);
        assert_eq!(img, GroupWord::alpha(2, 1).conjugate_by(&gamma));
        assert_eq!(img.to_string(), "b1 a1 B1 a1 b1 A1 B1");
        assert!(matches!(
            FreeAutomorphism::twist_separating(2, 3),
            Err(Error::TwistOutOfRange { .. })
        ));
    }

    #[test]
    fn twists_fix_boundary() {
        for g in 1..=3 {
            for i in 1..=g {
                for kind in [TwistKind::Alpha(i), TwistKind::Beta(i), TwistKind::Separating(i)] {
                    let t = FreeAutomorphism::twist(g, TwistFactor::new(kind)).unwrap();
                    assert!(t.is_boundary_preserving(), "{kind:?}");
                    let inv = t.inverse().unwrap();
                    assert_eq!(t.compose(&inv), FreeAutomorphism::from_factorization(g, &[TwistFactor::new(kind), TwistFactor::new(kind).inv()]).unwrap());
                    for x in 0..2 * g {
                        let w = GroupWord::generator(g, x);
                        assert_eq!(inv.apply(&t.apply(&w)), w);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_needs_factorization() {
        let f = FreeAutomorphism::from_images(1, vec![GroupWord::alpha(1, 1), GroupWord::beta(1, 1)]).unwrap();
        assert_eq!(f.inverse(), Err(Error::NoFactorization));
    }

    #[test]
    fn twist_product_moves_alpha_to_beta() {
        let phi = FreeAutomorphism::from_factorization(
            1,
            &["alpha:1".parse().unwrap(), "beta:1".parse().unwrap()],
        )
        .unwrap();
        assert_eq!(phi.apply(&GroupWord::alpha(1, 1)), GroupWord::beta(1, 1).inverse());
    }

    #[test]
    fn json_roundtrip() {
        let c = Curve::parse(2, "conj(beta:1 sep:1^-1; nonsep)").unwrap();
        let Curve::Conjugated { by, .. } = &c else { panic!() };
        let j = serde_json::to_string(&by.to_json()).unwrap();
        let back: AutomorphismJson = serde_json::from_str(&j).unwrap();
        assert_eq!(&FreeAutomorphism::from_json(&back).unwrap(), by);
    }
}
