//! Presented subalgebras: words in named generators, their realizations as
//! operators, and anti-isomorphisms between two presented algebras.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ore::{OreOperator, OreRule};
use crate::scalar::{Scalar, Symbol};
use crate::twist::{exp_ad, AdExp};

/// Linear combination of generator words. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GenWord {
    terms: BTreeMap<Vec<Symbol>, Scalar>,
}

impl GenWord {
    pub fn zero() -> GenWord {
        GenWord::default()
    }

    pub fn one() -> GenWord {
        GenWord::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> GenWord {
        GenWord::term(Vec::new(), c)
    }

    pub fn gen(name: impl Into<Symbol>) -> GenWord {
        GenWord::term(vec![name.into()], Scalar::one())
    }

    pub fn word(letters: &[&str]) -> GenWord {
        GenWord::term(
            letters.iter().map(|s| Symbol::new(s)).collect(),
            Scalar::one(),
        )
    }

    pub fn term(word: Vec<Symbol>, c: Scalar) -> GenWord {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        GenWord { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Symbol], &Scalar)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every generator symbol occurring in some word.
    pub fn generators(&self) -> std::collections::BTreeSet<Symbol> {
        self.terms.keys().flatten().copied().collect()
    }

    fn add_term(&mut self, w: Vec<Symbol>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &GenWord) -> GenWord {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &GenWord) -> GenWord {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GenWord {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> GenWord {
        let mut out = GenWord::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), &(a * c));
        }
        out
    }

    /// Concatenation product.
    pub fn mul(&self, other: &GenWord) -> GenWord {
        let mut out = GenWord::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> GenWord {
        (0..n).fold(GenWord::one(), |acc, _| acc.mul(self))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<GenWord> {
        let mut out = GenWord::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// Each word reversed, coefficients unchanged.
    pub fn reversed(&self) -> GenWord {
        let mut out = GenWord::zero();
        for (w, c) in &self.terms {
            out.add_term(w.iter().rev().copied().collect(), c);
        }
        out
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let letters = w.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("*");
            let text = if letters.is_empty() {
                c.to_string()
            } else if c.is_one() {
                letters
            } else if (-c).is_one() {
                format!("-{letters}")
            } else if c.is_sum() {
                format!("({c})*{letters}")
            } else {
                format!("{c}*{letters}")
            };
            match (i, text.strip_prefix('-')) {
                (0, _) => f.write_str(&text)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenWord({self})")
    }
}

/// Generator symbols realized as operators in one Ore algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    rule: OreRule,
    images: BTreeMap<Symbol, OreOperator>,
}

impl Realization {
    pub fn new(rule: OreRule) -> Realization {
        Realization {
            rule,
            images: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, op: OreOperator) -> Result<Realization> {
        self.insert(Symbol::new(name), op)?;
        Ok(self)
    }

    pub fn insert(&mut self, name: Symbol, op: OreOperator) -> Result<()> {
        if op.rule() != &self.rule {
            return Err(Error::RuleMismatch {
                left: self.rule.to_string(),
                right: op.rule().to_string(),
            });
        }
        self.images.insert(name, op);
        Ok(())
    }

    pub fn rule(&self) -> &OreRule {
        &self.rule
    }

    pub fn generators(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.images.keys().copied()
    }

    pub fn image(&self, g: Symbol) -> Result<&OreOperator> {
        self.images
            .get(&g)
            .ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }

    pub fn contains(&self, g: Symbol) -> bool {
        self.images.contains_key(&g)
    }

    /// Substitute parameters (in order) in the rule and every image.
    pub fn substitute(&self, subs: &[(Symbol, Scalar)]) -> Result<Realization> {
        let mut rule = self.rule.clone();
        for (s, v) in subs {
            rule = rule.substitute(*s, v)?;
        }
        let mut out = Realization::new(rule);
        for (g, op) in &self.images {
            out.insert(*g, substitute_op(op, subs)?)?;
        }
        Ok(out)
    }

    /// Linear extension of word products.
    pub fn realize(&self, w: &GenWord) -> Result<OreOperator> {
        realize_with(&self.rule, w, |g| self.image(g))
    }
}

fn realize_with<'a>(
    rule: &OreRule,
    w: &GenWord,
    image: impl Fn(Symbol) -> Result<&'a OreOperator>,
) -> Result<OreOperator> {
    let mut acc = OreOperator::zero(rule);
    for (word, c) in w.terms() {
        let mut prod = OreOperator::scalar(rule, c.clone());
        for g in word {
            prod = prod.mul(image(*g)?)?;
        }
        acc = acc.add(&prod)?;
    }
    Ok(acc)
}

pub(crate) fn substitute_op(op: &OreOperator, subs: &[(Symbol, Scalar)]) -> Result<OreOperator> {
    let mut out = op.clone();
    for (s, v) in subs {
        out = out.substitute(*s, v)?;
    }
    Ok(out)
}

pub(crate) fn substitute_scalar(c: &Scalar, subs: &[(Symbol, Scalar)]) -> Result<Scalar> {
    let mut out = c.clone();
    for (s, v) in subs {
        out = out.substitute(*s, v)?;
    }
    Ok(out)
}

/// Anti-isomorphism given on generators, optionally followed by a sequence of
/// target-side twists `e^{c ad L'}` applied in order.
#[derive(Clone, Debug)]
pub struct AntiIso {
    source: Realization,
    target: Realization,
    images: BTreeMap<Symbol, GenWord>,
    twists: Vec<AdExp>,
    relations: Vec<(GenWord, GenWord)>,
    effective: BTreeMap<Symbol, OreOperator>,
}

impl AntiIso {
    pub fn new(
        source: Realization,
        target: Realization,
        images: BTreeMap<Symbol, GenWord>,
    ) -> Result<AntiIso> {
        for g in source.generators() {
            let img = images
                .get(&g)
                .ok_or_else(|| Error::UnknownGenerator(format!("no image for {g}")))?;
            for t in img.generators() {
                target.image(t)?;
            }
        }
        let mut effective = BTreeMap::new();
        for g in source.generators() {
            effective.insert(g, target.realize(&images[&g])?);
        }
        Ok(AntiIso {
            source,
            target,
            images,
            twists: Vec::new(),
            relations: Vec::new(),
            effective,
        })
    }

    pub fn source(&self) -> &Realization {
        &self.source
    }

    pub fn target(&self) -> &Realization {
        &self.target
    }

    pub fn image_word(&self, g: Symbol) -> Result<&GenWord> {
        self.images
            .get(&g)
            .ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }

    pub fn twists(&self) -> &[AdExp] {
        &self.twists
    }

    pub fn relations(&self) -> &[(GenWord, GenWord)] {
        &self.relations
    }

    /// Realized image of a source generator, twists included.
    pub fn generator_image(&self, g: Symbol) -> Result<&OreOperator> {
        self.effective
            .get(&g)
            .ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }

    /// Reverse each word, map letters through `b`, realize in the target and
    /// apply the twists. Linear in `w`.
    pub fn apply(&self, w: &GenWord) -> Result<OreOperator> {
        realize_with(self.target.rule(), &w.reversed(), |g| {
            self.generator_image(g)
        })
    }

    /// Both presentations agree: `lhs = rhs` in the source and `b(lhs) = b(rhs)` in the target.
    pub fn check_relation(&self, lhs: &GenWord, rhs: &GenWord) -> Result<bool> {
        if self.source.realize(lhs)? != self.source.realize(rhs)? {
            return Ok(false);
        }
        Ok(self.apply(lhs)? == self.apply(rhs)?)
    }

    /// Register a defining relation after checking it.
    pub fn add_relation(&mut self, lhs: GenWord, rhs: GenWord) -> Result<()> {
        if !self.check_relation(&lhs, &rhs)? {
            return Err(Error::RelationFailed(format!("{lhs} = {rhs}")));
        }
        self.relations.push((lhs, rhs));
        Ok(())
    }

    /// Index of the first registered relation that fails, if any.
    pub fn verify_relations(&self) -> Result<Option<usize>> {
        for (i, (l, r)) in self.relations.iter().enumerate() {
            if !self.check_relation(l, r)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Substitute parameters everywhere; relations and twists are re-applied
    /// and re-checked.
    pub fn substitute(&self, subs: &[(Symbol, Scalar)]) -> Result<AntiIso> {
        let sub_word = |w: &GenWord| w.map_coeffs(|c| substitute_scalar(c, subs));
        let mut images = BTreeMap::new();
        for (g, w) in &self.images {
            images.insert(*g, sub_word(w)?);
        }
        let mut out = AntiIso::new(
            self.source.substitute(subs)?,
            self.target.substitute(subs)?,
            images,
        )?;
        for (l, r) in &self.relations {
            out.add_relation(sub_word(l)?, sub_word(r)?)?;
        }
        for t in &self.twists {
            let g = substitute_op(t.generator(), subs)?;
            let c = substitute_scalar(t.scale(), subs)?;
            out = out.push_twist(AdExp::new(g, c).with_max_iter(t.max_iter()))?;
        }
        Ok(out)
    }

    /// Compose with a target-side twist; effective images are recomputed and
    /// relations re-checked.
    pub fn push_twist(&self, t: AdExp) -> Result<AntiIso> {
        if t.generator().rule() != self.target.rule() {
            return Err(Error::RuleMismatch {
                left: self.target.rule().to_string(),
                right: t.generator().rule().to_string(),
            });
        }
        let mut out = self.clone();
        for op in out.effective.values_mut() {
            *op = exp_ad(&t, op)?;
        }
        out.twists.push(t);
        if let Some(i) = out.verify_relations()? {
            let (l, r) = &out.relations[i];
            return Err(Error::RelationFailed(format!("{l} = {r} after twist")));
        }
        Ok(out)
    }
}

/// An anti-isomorphism with designated witnesses: `theta` in the source and
/// `f` in the target, both of operator degree zero, and a source element
/// `spectral` with `b(spectral) = f`.
#[derive(Clone, Debug)]
pub struct BispectralTriple {
    pub name: String,
    pub b: AntiIso,
    pub theta: GenWord,
    pub f: GenWord,
    pub spectral: GenWord,
}

impl BispectralTriple {
    pub fn new(
        name: &str,
        b: AntiIso,
        theta: GenWord,
        f: GenWord,
        spectral: GenWord,
    ) -> Result<BispectralTriple> {
        let t = BispectralTriple {
            name: name.to_string(),
            b,
            theta,
            f,
            spectral,
        };
        t.check()?;
        Ok(t)
    }

    /// Witness checks: degrees of `theta` and `f`, and `b(spectral) = f`.
    pub fn check(&self) -> Result<()> {
        let theta = self.b.source().realize(&self.theta)?;
        if theta.is_zero() || !theta.is_scalar() {
            return Err(Error::RelationFailed(format!(
                "theta = {theta} is not a nonzero function"
            )));
        }
        let f = self.b.target().realize(&self.f)?;
        if f.is_zero() || !f.is_scalar() {
            return Err(Error::RelationFailed(format!(
                "f = {f} is not a nonzero function"
            )));
        }
        let image = self.b.apply(&self.spectral)?;
        if image != f {
            return Err(Error::SpectralMismatch(format!(
                "b({}) = {image}, expected {f}",
                self.spectral
            )));
        }
        Ok(())
    }

    pub fn substitute(&self, name: &str, subs: &[(Symbol, Scalar)]) -> Result<BispectralTriple> {
        let sub_word = |w: &GenWord| w.map_coeffs(|c| substitute_scalar(c, subs));
        BispectralTriple::new(
            name,
            self.b.substitute(subs)?,
            sub_word(&self.theta)?,
            sub_word(&self.f)?,
            sub_word(&self.spectral)?,
        )
    }

    pub fn theta_op(&self) -> Result<OreOperator> {
        self.b.source().realize(&self.theta)
    }

    pub fn f_op(&self) -> Result<OreOperator> {
        self.b.target().realize(&self.f)
    }

    pub fn spectral_op(&self) -> Result<OreOperator> {
        self.b.source().realize(&self.spectral)
    }

    /// `Lambda = b(theta)`.
    pub fn lambda(&self) -> Result<OreOperator> {
        self.b.apply(&self.theta)
    }
}
