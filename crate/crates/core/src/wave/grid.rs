//! Bivariate truncated series `x^mu z^nu sum c_{ij} x^i z^j`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol, Q};

/// Exponent offset of one variable. `value` is needed by derivatives,
/// `qpow = q^value` by dilations; either may be formal (absent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Offset {
    pub value: Option<Q>,
    pub qpow: Option<Q>,
}

impl Offset {
    pub fn zero() -> Offset {
        Offset {
            value: Some(Q::zero()),
            qpow: Some(Q::one()),
        }
    }

    pub fn rational(v: Q) -> Offset {
        if v.is_zero() {
            return Offset::zero();
        }
        Offset {
            value: Some(v),
            qpow: None,
        }
    }

    /// Only `q^offset` is known.
    pub fn formal(qpow: Q) -> Offset {
        Offset {
            value: None,
            qpow: Some(qpow),
        }
    }

    fn q_factor(&self, q: &Q) -> Result<Q> {
        if let Some(p) = &self.qpow {
            return Ok(p.clone());
        }
        match &self.value {
            Some(v) if v.is_integer() => {
                let e: i64 = v
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Wave("offset too large".into()))?;
                Ok(pow_q(q, e)?)
            }
            _ => Err(Error::Wave("dilation needs q^offset".into())),
        }
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.value, &self.qpow) {
            (Some(v), _) => write!(f, "{}", crate::scalar::Scalar::from_q(v.clone())),
            (None, Some(p)) => write!(f, "log_q({})", crate::scalar::Scalar::from_q(p.clone())),
            (None, None) => f.write_str("?"),
        }
    }
}

pub(crate) fn pow_q(q: &Q, e: i64) -> Result<Q> {
    if e < 0 {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(num_traits::pow(q.recip(), e.unsigned_abs() as usize));
    }
    Ok(num_traits::pow(q.clone(), e as usize))
}

/// Downward-closed index set `{a i + b j <= c}` (all `a, b >= 0`), plus the
/// exact support bound: coefficients with `i < lo.0` or `j < lo.1` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: (i64, i64),
    pub cons: Vec<(i64, i64, i64)>,
}

impl Window {
    pub fn boxed(imax: i64, jmax: i64) -> Window {
        Window {
            lo: (0, 0),
            cons: vec![(1, 0, imax), (0, 1, jmax)],
        }
    }

    pub fn triangle(total: i64) -> Window {
        Window {
            lo: (0, 0),
            cons: vec![(1, 1, total)],
        }
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.cons.iter().all(|(a, b, c)| a * i + b * j <= *c)
    }

    /// Known: either in the window or below the support.
    pub fn known(&self, i: i64, j: i64) -> bool {
        i < self.lo.0 || j < self.lo.1 || self.contains(i, j)
    }

    /// Window of the grid after moving every index by `(di, dj)`.
    pub fn shifted(&self, di: i64, dj: i64) -> Window {
        Window {
            lo: (self.lo.0 + di, self.lo.1 + dj),
            cons: self
                .cons
                .iter()
                .map(|(a, b, c)| (*a, *b, c + a * di + b * dj))
                .collect(),
        }
    }

    pub fn transposed(&self) -> Window {
        Window {
            lo: (self.lo.1, self.lo.0),
            cons: self.cons.iter().map(|(a, b, c)| (*b, *a, *c)).collect(),
        }
    }

    /// Conservative intersection of two known regions.
    pub fn intersect(&self, other: &Window) -> Window {
        let mut cons = self.cons.clone();
        for c in &other.cons {
            if !cons.contains(c) {
                cons.push(*c);
            }
        }
        cons.sort();
        Window {
            lo: (self.lo.0.min(other.lo.0), self.lo.1.min(other.lo.1)),
            cons,
        }
    }

    /// Largest `i` and `j` of window points on or above the support bound.
    pub fn bounds(&self) -> Result<(i64, i64)> {
        let mut imax: Option<i64> = None;
        let mut jmax: Option<i64> = None;
        for (a, b, c) in &self.cons {
            if *a > 0 {
                let v = (c - b * self.lo.1).div_euclid(*a);
                imax = Some(imax.map_or(v, |m| m.min(v)));
            }
            if *b > 0 {
                let v = (c - a * self.lo.0).div_euclid(*b);
                jmax = Some(jmax.map_or(v, |m| m.min(v)));
            }
        }
        match (imax, jmax) {
            (Some(i), Some(j)) => Ok((i, j)),
            _ => Err(Error::Wave("unbounded window".into())),
        }
    }

    /// Window points on or above the support bound, in index order.
    pub fn points(&self) -> Result<Vec<(i64, i64)>> {
        let (imax, jmax) = self.bounds()?;
        let mut out = Vec::new();
        for i in self.lo.0..=imax {
            for j in self.lo.1..=jmax {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![format!("i>={}", self.lo.0), format!("j>={}", self.lo.1)];
        for (a, b, c) in &self.cons {
            let lhs = match (a, b) {
                (0, 1) => "j".to_string(),
                (1, 0) => "i".to_string(),
                (1, 1) => "i+j".to_string(),
                _ => format!("{a}i+{b}j"),
            };
            parts.push(format!("{lhs}<={c}"));
        }
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub x: Symbol,
    pub z: Symbol,
    pub mu: Offset,
    pub nu: Offset,
    coeffs: BTreeMap<(i64, i64), Q>,
    window: Window,
}

/// Laurent expansion at 0 of a rational function of one variable:
/// valuation and the first `terms` coefficients.
fn laurent_series(g: &Scalar, var: Symbol, terms: usize) -> Result<(i64, Vec<Q>)> {
    for s in g.vars() {
        if s != var {
            return Err(Error::Wave(format!(
                "coefficient {g} depends on {s}; instantiate parameters first"
            )));
        }
    }
    let dense = |p: &crate::scalar::Poly| -> Vec<Q> {
        let deg = p.degree_in(var) as usize;
        let mut v = vec![Q::zero(); deg + 1];
        for (m, c) in p.terms() {
            v[m.exp(var) as usize] = c.clone();
        }
        v
    };
    let num = dense(g.num());
    let den = dense(g.den());
    let t = num.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let s = den
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero denominator");
    let n = &num[t..];
    let r = &den[s..];
    let mut out: Vec<Q> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = n.get(k).cloned().unwrap_or_else(Q::zero);
        for l in 1..=k.min(r.len() - 1) {
            acc -= &r[l] * &out[k - l];
        }
        out.push(acc / &r[0]);
    }
    Ok((t as i64 - s as i64, out))
}

impl Grid {
    pub fn new(
        x: Symbol,
        z: Symbol,
        mu: Offset,
        nu: Offset,
        coeffs: BTreeMap<(i64, i64), Q>,
        window: Window,
    ) -> Grid {
        let mut g = Grid {
            x,
            z,
            mu,
            nu,
            coeffs,
            window,
        };
        g.prune();
        g
    }

    fn prune(&mut self) {
        let w = &self.window;
        self.coeffs
            .retain(|(i, j), c| !c.is_zero() && *i >= w.lo.0 && *j >= w.lo.1 && w.contains(*i, *j));
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Coefficient of `x^(mu+i) z^(nu+j)`, or `None` outside the reliable window.
    pub fn coeff(&self, i: i64, j: i64) -> Option<Q> {
        if !self.window.known(i, j) {
            return None;
        }
        Some(self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Q::zero))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(i64, i64), &Q)> {
        self.coeffs.iter()
    }

    pub fn transposed(&self) -> Grid {
        Grid {
            x: self.z,
            z: self.x,
            mu: self.nu.clone(),
            nu: self.mu.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|((i, j), c)| ((*j, *i), c.clone()))
                .collect(),
            window: self.window.transposed(),
        }
    }

    fn same_space(&self, other: &Grid) -> Result<()> {
        if self.x != other.x || self.z != other.z || self.mu != other.mu || self.nu != other.nu {
            return Err(Error::Wave(
                "grids with different variables or offsets".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Grid) -> Result<Grid> {
        self.same_space(other)?;
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let e = coeffs.entry(*k).or_insert_with(Q::zero);
            *e += c;
        }
        Ok(Grid::new(
            self.x,
            self.z,
            self.mu.clone(),
            self.nu.clone(),
            coeffs,
            self.window.intersect(&other.window),
        ))
    }

    pub fn sub(&self, other: &Grid) -> Result<Grid> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Grid {
        let coeffs = self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect();
        Grid::new(
            self.x,
            self.z,
            self.mu.clone(),
            self.nu.clone(),
            coeffs,
            self.window.clone(),
        )
    }

    /// Multiply by a rational function of `x` regular or with a pole at 0 only
    /// through a power of `x`.
    pub fn mul_function(&self, g: &Scalar) -> Result<Grid> {
        if g.is_zero() {
            let mut out = self.clone();
            out.coeffs.clear();
            return Ok(out);
        }
        let (v, _) = laurent_series(g, self.x, 1)?;
        let window = self.window.shifted(v, 0);
        let (imax, _) = window.bounds()?;
        let needed = (imax - window.lo.0 + 1).max(1) as usize;
        let (_, series) = laurent_series(g, self.x, needed)?;
        let mut coeffs: BTreeMap<(i64, i64), Q> = BTreeMap::new();
        for ((i0, j), c) in &self.coeffs {
            for (k, gk) in series.iter().enumerate() {
                let i = i0 + v + k as i64;
                if !window.contains(i, *j) {
                    break;
                }
                if gk.is_zero() {
                    continue;
                }
                let e = coeffs.entry((i, *j)).or_insert_with(Q::zero);
                *e += gk * c;
            }
        }
        Ok(Grid::new(
            self.x,
            self.z,
            self.mu.clone(),
            self.nu.clone(),
            coeffs,
            window,
        ))
    }

    /// `d/dx`.
    pub fn derivative(&self) -> Result<Grid> {
        let mu = self
            .mu
            .value
            .clone()
            .ok_or_else(|| Error::Wave("derivative needs a numeric offset".into()))?;
        let mut window = self.window.shifted(-1, 0);
        if (&mu + Q::from_integer(self.window.lo.0.into())).is_zero() {
            // The lowest power is a constant and is annihilated.
            window.lo.0 += 1;
        }
        let mut coeffs = BTreeMap::new();
        for ((i, j), c) in &self.coeffs {
            let f = &mu + Q::from_integer((*i).into());
            if !f.is_zero() {
                coeffs.insert((i - 1, *j), c * f);
            }
        }
        Ok(Grid::new(
            self.x,
            self.z,
            self.mu.clone(),
            self.nu.clone(),
            coeffs,
            window,
        ))
    }

    /// `f(x) -> f(q x)`.
    pub fn dilate(&self, q: &Q, k: i64) -> Result<Grid> {
        let base = pow_q(&self.mu.q_factor(q)?, k)?;
        let qk = pow_q(q, k)?;
        let mut coeffs = BTreeMap::new();
        for ((i, j), c) in &self.coeffs {
            coeffs.insert((*i, *j), c * &base * pow_q(&qk, *i)?);
        }
        Ok(Grid::new(
            self.x,
            self.z,
            self.mu.clone(),
            self.nu.clone(),
            coeffs,
            self.window.clone(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_frac;

    #[test]
    fn series_of_simple_fraction() {
        let x = Symbol::new("x");
        let g = Scalar::from_int(1)
            .checked_div(&(&Scalar::one() - &Scalar::var(x)))
            .unwrap();
        let (v, s) = laurent_series(&g, x, 4).unwrap();
        assert_eq!(v, 0);
        assert!(s.iter().all(|c| c.is_one()));
        let g = (&Scalar::var(x) + &Scalar::from_int(2))
            .checked_div(&Scalar::var(x).pow(2).unwrap())
            .unwrap();
        let (v, s) = laurent_series(&g, x, 3).unwrap();
        assert_eq!(v, -2);
        assert_eq!(s, vec![q_frac(2, 1), q_frac(1, 1), Q::zero()]);
    }

    #[test]
    fn window_shapes() {
        let w = Window::boxed(3, 2);
        assert_eq!(w.points().unwrap().len(), 12);
        assert!(w.known(-1, 7));
        assert!(!w.known(4, 0));
        let t = Window::triangle(2);
        assert_eq!(t.points().unwrap().len(), 6);
        assert_eq!(t.transposed(), t);
    }
}
