//! Iterated commutators and exponentials of locally nilpotent `ad L`.

use crate::error::{Error, Result};
use crate::ore::{commutator, OreOperator};
use crate::presented::{AntiIso, GenWord};
use crate::scalar::{Scalar, Q};

pub const DEFAULT_MAX_ITER: usize = 64;

/// `e^{c ad L}` with an iteration bound.
#[derive(Clone, Debug, PartialEq)]
pub struct AdExp {
    generator: OreOperator,
    scale: Scalar,
    max_iter: usize,
}

impl AdExp {
    pub fn new(generator: OreOperator, scale: Scalar) -> AdExp {
        AdExp {
            generator,
            scale,
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    /// `max_iter` is clamped to at least 1.
    pub fn with_max_iter(mut self, max_iter: usize) -> AdExp {
        self.max_iter = max_iter.max(1);
        self
    }

    pub fn generator(&self) -> &OreOperator {
        &self.generator
    }

    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn inverse(&self) -> AdExp {
        AdExp {
            generator: self.generator.clone(),
            scale: -&self.scale,
            max_iter: self.max_iter,
        }
    }
}

/// `(ad L)^n M`.
pub fn ad_power(l: &OreOperator, m: &OreOperator, n: usize) -> Result<OreOperator> {
    let mut cur = m.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = commutator(l, &cur)?;
    }
    Ok(cur)
}

/// `sum_n c^n (ad L)^n M / n!`, stopping at the first vanishing term.
pub fn exp_ad(t: &AdExp, m: &OreOperator) -> Result<OreOperator> {
    if t.scale.is_zero() || t.generator.is_zero() {
        return Ok(m.clone());
    }
    let mut acc = m.clone();
    let mut term = m.clone();
    let mut coeff = Scalar::one();
    for n in 1..=t.max_iter {
        term = commutator(&t.generator, &term)?;
        if term.is_zero() {
            return Ok(acc);
        }
        coeff = (&coeff * &t.scale).scale_q(&Q::new(1.into(), (n as i64).into()));
        acc = acc.add(&term.scale(&coeff))?;
    }
    Err(Error::NilpotencyExceeded { bound: t.max_iter })
}

/// `e^{c ad L'} o b` for `L'` in the target algebra.
pub fn twist_target(b: &AntiIso, t: AdExp) -> Result<AntiIso> {
    b.push_twist(t)
}

/// `b o e^{c ad L}` for a source element `L`, through
/// `b o e^{c ad L} = e^{-c ad b(L)} o b`.
pub fn twist_source(b: &AntiIso, l_word: &GenWord, c: &Scalar) -> Result<AntiIso> {
    let l_image = b.apply(l_word)?;
    twist_target(b, AdExp::new(l_image, -c))
}

/// For each probe, the first `n` with `(ad L)^n M = 0`, or `None` within `max_iter`.
pub fn check_local_nilpotency(
    l: &OreOperator,
    probes: &[OreOperator],
    max_iter: usize,
) -> Result<Vec<Option<usize>>> {
    let mut out = Vec::with_capacity(probes.len());
    for m in probes {
        let mut cur = m.clone();
        let mut found = None;
        if cur.is_zero() {
            found = Some(0);
        } else {
            for n in 1..=max_iter {
                cur = commutator(l, &cur)?;
                if cur.is_zero() {
                    found = Some(n);
                    break;
                }
            }
        }
        out.push(found);
    }
    Ok(out)
}
