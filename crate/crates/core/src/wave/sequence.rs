//! Index-sequences of exact functions `psi_n(x)`, `n` an integer.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ore::OreOperator;
use crate::scalar::{Scalar, Symbol, Q};

/// `psi_n` is known for `n <= hi`, zero for `n < lo`; checks start at `first`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    pub x: Symbol,
    pub n: Symbol,
    values: BTreeMap<i64, Scalar>,
    pub lo: i64,
    pub hi: i64,
    pub first: i64,
}

impl Sequence {
    pub fn new(
        x: Symbol,
        n: Symbol,
        values: BTreeMap<i64, Scalar>,
        lo: i64,
        hi: i64,
        first: i64,
    ) -> Sequence {
        let values = values
            .into_iter()
            .filter(|(k, v)| *k >= lo && *k <= hi && !v.is_zero())
            .collect();
        Sequence {
            x,
            n,
            values,
            lo,
            hi,
            first,
        }
    }

    /// `psi_n`, or `None` when `n` is beyond the known range.
    pub fn get(&self, n: i64) -> Option<Scalar> {
        if n > self.hi {
            return None;
        }
        Some(self.values.get(&n).cloned().unwrap_or_default())
    }

    pub fn same_space(&self, other: &Sequence) -> Result<()> {
        if self.x != other.x || self.n != other.n {
            return Err(Error::Wave("sequences over different variables".into()));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Sequence) -> Result<Sequence> {
        self.same_space(other)?;
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let values = (lo..=hi)
            .map(|k| {
                (
                    k,
                    &self.get(k).unwrap_or_default() - &other.get(k).unwrap_or_default(),
                )
            })
            .collect();
        Ok(Sequence::new(
            self.x,
            self.n,
            values,
            lo,
            hi,
            self.first.max(other.first),
        ))
    }

    /// Operator in `x` acting on every term.
    pub fn act_x(&self, op: &OreOperator) -> Result<Sequence> {
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            values.insert(*k, op.apply_to(v)?);
        }
        Ok(Sequence::new(
            self.x, self.n, values, self.lo, self.hi, self.first,
        ))
    }

    /// Shift-algebra operator `sum a_k(n) T^k` acting on the index.
    pub fn act_n(&self, op: &OreOperator) -> Result<Sequence> {
        let kmax = op.degree().unwrap_or(0).max(0);
        let lo = self.lo - kmax;
        let hi = self.hi - kmax;
        let mut values = BTreeMap::new();
        for m in lo..=hi {
            let mut acc = Scalar::zero();
            for (k, a) in op.terms() {
                let v = self.get(m + k).expect("index inside the known range");
                if v.is_zero() {
                    continue;
                }
                let coeff = a.instantiate(&[(self.n, Q::from_integer(m.into()))])?;
                acc = &acc + &(&coeff * &v);
            }
            values.insert(m, acc);
        }
        Ok(Sequence::new(self.x, self.n, values, lo, hi, self.first))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }
}
