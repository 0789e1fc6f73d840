//! Euler-operator bases.
//!
//! Every operator over the differential or dilation rule can be written as
//! `sum_m b_m(x) E^m` with `E = x d` (respectively `E = Dq`). Splitting the
//! `b_m` by x-degree gives the graded form `sum_d x^d p_d(E)`, which is how
//! Bessel-type operators are usually displayed.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::families::euler;
use super::{OreKind, OreOperator, OreRule};

/// Polynomial in the Euler operator with scalar coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DPoly {
    coeffs: Vec<Scalar>,
}

impl DPoly {
    pub fn zero() -> DPoly {
        DPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> DPoly {
        DPoly::from_coeffs(vec![c])
    }

    /// `E - r`.
    pub fn linear(r: Scalar) -> DPoly {
        DPoly::from_coeffs(vec![-r, Scalar::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> DPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &DPoly) -> DPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        DPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &DPoly) -> DPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DPoly {
        DPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> DPoly {
        DPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &DPoly) -> DPoly {
        if self.is_zero() || other.is_zero() {
            return DPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        DPoly::from_coeffs(out)
    }

    /// Euclidean division over the scalar field.
    pub fn div_rem(&self, d: &DPoly) -> Result<(DPoly, DPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lead_inv;
            for (j, b) in d.coeffs.iter().enumerate() {
                rem[j + k] = &rem[j + k] - &(&c * b);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((DPoly::from_coeffs(quot), DPoly::from_coeffs(rem)))
    }

    /// `p(E + s)`.
    pub fn shift_arg(&self, s: &Scalar) -> DPoly {
        let lin = DPoly::from_coeffs(vec![s.clone(), Scalar::one()]);
        let mut acc = DPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&DPoly::constant(c.clone()));
        }
        acc
    }

    /// `p(l E)`.
    pub fn scale_arg(&self, l: &Scalar) -> Result<DPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c * &l.pow(i as i64)?);
        }
        Ok(DPoly::from_coeffs(out))
    }

    /// Realize as an operator in the rule's Euler operator.
    pub fn to_operator(&self, rule: &OreRule) -> Result<OreOperator> {
        let e = euler(rule)?;
        let mut acc = OreOperator::zero(rule);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&e)?.add(&OreOperator::scalar(rule, c.clone()))?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPoly{:?}", self.coeffs)
    }
}

/// `f(E) x^s = x^s f'(E)`: returns `f'`, i.e. `f(E + s)` or `f(q^s E)`.
pub fn move_past_power(rule: &OreRule, f: &DPoly, s: i64) -> Result<DPoly> {
    match rule.kind() {
        OreKind::Differential => Ok(f.shift_arg(&Scalar::from_int(s))),
        OreKind::QDilation { q } => f.scale_arg(&q.pow(s)?),
        OreKind::Shift => Err(Error::InvalidOperator(
            "no Euler basis for the shift rule".into(),
        )),
    }
}

/// Coefficients `b_m` with `A = sum_m b_m E^m`.
pub fn to_d_basis(a: &OreOperator) -> Result<BTreeMap<u32, Scalar>> {
    let rule = a.rule();
    let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
    match rule.kind() {
        OreKind::QDilation { .. } => {
            for (k, c) in a.terms() {
                out.insert(k as u32, c.clone());
            }
        }
        OreKind::Differential => {
            // x^k d^k = E (E - 1) ... (E - k + 1).
            let x = Scalar::var(rule.var());
            let mut falling = DPoly::constant(Scalar::one());
            let mut k_done = 0i64;
            for (k, c) in a.terms() {
                while k_done < k {
                    falling = falling.mul(&DPoly::linear(Scalar::from_int(k_done)));
                    k_done += 1;
                }
                let ck = c * &x.pow(-k)?;
                for (m, s) in falling.coeffs().iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let e = out.entry(m as u32).or_default();
                    *e = &*e + &(&ck * s);
                }
            }
            out.retain(|_, c| !c.is_zero());
        }
        OreKind::Shift => {
            return Err(Error::InvalidOperator(
                "no Euler basis for the shift rule".into(),
            ))
        }
    }
    Ok(out)
}

pub fn from_d_basis(rule: &OreRule, coeffs: &BTreeMap<u32, Scalar>) -> Result<OreOperator> {
    let e = euler(rule)?;
    let mut acc = OreOperator::zero(rule);
    for (m, c) in coeffs {
        acc = acc.add(&e.pow(*m)?.scale(c))?;
    }
    Ok(acc)
}

/// Split a scalar into `sum_d c_d x^d` with `c_d` free of `x`.
/// Fails when the denominator has a factor involving `x` other than a power of `x`.
pub fn laurent_components(c: &Scalar, x: crate::scalar::Symbol) -> Result<BTreeMap<i64, Scalar>> {
    let den_parts = c.den().coeffs_in(x);
    let mut nonzero = den_parts.iter().enumerate().filter(|(_, p)| !p.is_zero());
    let (s, rest) = match (nonzero.next(), nonzero.next()) {
        (Some((s, p)), None) => (s as i64, p.clone()),
        _ => {
            return Err(Error::InvalidOperator(format!(
                "coefficient {c} is not a Laurent polynomial in {x}"
            )))
        }
    };
    let mut out = BTreeMap::new();
    for (e, p) in c.num().coeffs_in(x).into_iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        out.insert(e as i64 - s, Scalar::from_parts(p, rest.clone())?);
    }
    Ok(out)
}

/// Graded form `A = sum_d x^d p_d(E)`.
pub fn graded(a: &OreOperator) -> Result<BTreeMap<i64, DPoly>> {
    let x = a.rule().var();
    let mut parts: BTreeMap<i64, BTreeMap<usize, Scalar>> = BTreeMap::new();
    for (m, b) in to_d_basis(a)? {
        for (d, c) in laurent_components(&b, x)? {
            parts.entry(d).or_default().insert(m as usize, c);
        }
    }
    Ok(parts
        .into_iter()
        .map(|(d, cs)| {
            let top = cs.keys().next_back().copied().unwrap_or(0);
            let v = (0..=top)
                .map(|m| cs.get(&m).cloned().unwrap_or_default())
                .collect();
            (d, DPoly::from_coeffs(v))
        })
        .filter(|(_, p)| !p.is_zero())
        .collect())
}

pub fn from_graded(rule: &OreRule, parts: &BTreeMap<i64, DPoly>) -> Result<OreOperator> {
    let x = Scalar::var(rule.var());
    let mut acc = OreOperator::zero(rule);
    for (d, p) in parts {
        acc = acc.add(&p.to_operator(rule)?.scale(&x.pow(*d)?))?;
    }
    Ok(acc)
}

/// `A = sum_j c_j(E) L^j + sum_d x^d r_d(E)` for an operator `L` homogeneous of
/// negative x-degree. `powers` is ordered by descending `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Collected {
    pub powers: Vec<(u32, DPoly)>,
    pub rest: BTreeMap<i64, DPoly>,
}

pub fn collect_powers(a: &OreOperator, l: &OreOperator) -> Result<Collected> {
    let rule = a.rule();
    let lg = graded(l)?;
    let (weight, _) = match (lg.len(), lg.iter().next()) {
        (1, Some((d, p))) if *d < 0 => (-*d, p.clone()),
        _ => {
            return Err(Error::InvalidOperator(
                "collected form needs an operator homogeneous of negative degree".into(),
            ))
        }
    };
    let mut powers = Vec::new();
    let mut rest = BTreeMap::new();
    for (d, p) in graded(a)? {
        if d < 0 && d % weight == 0 {
            let j = (-d / weight) as u32;
            let lj = graded(&l.pow(j)?)?
                .remove(&d)
                .expect("power of a homogeneous operator");
            let (quot, rem) = p.div_rem(&lj)?;
            // c(E) x^d = x^d c'(E) with c' = quot, so c = quot moved back past x^-d.
            let c = move_past_power(rule, &quot, -d)?;
            if !c.is_zero() {
                powers.push((j, c));
            }
            if !rem.is_zero() {
                rest.insert(d, rem);
            }
        } else {
            rest.insert(d, p);
        }
    }
    Ok(Collected { powers, rest })
}

/// Rebuild an operator from its collected form.
pub fn from_collected(rule: &OreRule, l: &OreOperator, c: &Collected) -> Result<OreOperator> {
    let mut acc = from_graded(rule, &c.rest)?;
    for (j, p) in &c.powers {
        acc = acc.add(&p.to_operator(rule)?.mul(&l.pow(*j)?)?)?;
    }
    Ok(acc)
}

/// `(E - r_1) ... (E - r_k)`.
pub fn dpoly_from_roots(roots: &[Scalar]) -> DPoly {
    roots.iter().fold(DPoly::constant(Scalar::one()), |acc, r| {
        acc.mul(&DPoly::linear(r.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::families::{build_named, Family};

    #[test]
    fn euler_plus_one() {
        let r = OreRule::differential("x");
        let op = euler(&r).unwrap().add(&OreOperator::one(&r)).unwrap();
        let b = to_d_basis(&op).unwrap();
        assert_eq!(b.get(&1), Some(&Scalar::one()));
        assert_eq!(b.get(&0), Some(&Scalar::one()));
        assert_eq!(from_d_basis(&r, &b).unwrap(), op);
    }

    #[test]
    fn graded_round_trip() {
        let r = OreRule::differential("x");
        let beta: Vec<Scalar> = ["b1", "b2"].iter().map(|s| Scalar::sym(s)).collect();
        let l = build_named(
            &Family::Bessel {
                order: 2,
                beta: beta.clone(),
            },
            &r,
        )
        .unwrap();
        let op = l.add(&OreOperator::main_var(&r)).unwrap();
        let g = graded(&op).unwrap();
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![-2, 1]);
        assert_eq!(g[&-2], dpoly_from_roots(&beta));
        assert_eq!(from_graded(&r, &g).unwrap(), op);
    }

    #[test]
    fn collect_recovers_powers() {
        let r = OreRule::differential("x");
        let beta: Vec<Scalar> = ["b1", "b2", "b3"].iter().map(|s| Scalar::sym(s)).collect();
        let l = build_named(&Family::Bessel { order: 3, beta }, &r).unwrap();
        let e = euler(&r).unwrap();
        let c1 = e
            .scale(&Scalar::from_int(3))
            .sub(&OreOperator::scalar(&r, Scalar::sym("s")))
            .unwrap();
        let op = l
            .pow(2)
            .unwrap()
            .neg()
            .add(&c1.mul(&l).unwrap())
            .unwrap()
            .add(&e)
            .unwrap();
        let col = collect_powers(&op, &l).unwrap();
        assert_eq!(col.powers.len(), 2);
        assert_eq!(col.powers[0], (2, DPoly::constant(Scalar::from_int(-1))));
        assert_eq!(col.powers[1].0, 1);
        assert_eq!(col.powers[1].1.to_operator(&r).unwrap(), c1);
        assert_eq!(from_collected(&r, &l, &col).unwrap(), op);
    }

    #[test]
    fn q_graded() {
        let q = Scalar::sym("q");
        let r = OreRule::q_dilation("x", q.clone());
        let l = build_named(
            &Family::QBessel {
                order: 2,
                u: vec![Scalar::sym("u"), q.clone()],
            },
            &r,
        )
        .unwrap();
        let col = collect_powers(&l.pow(2).unwrap(), &l).unwrap();
        assert_eq!(col.powers, vec![(2, DPoly::constant(Scalar::one()))]);
        assert!(col.rest.is_empty());
    }
}
