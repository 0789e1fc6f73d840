use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol, Q};

use super::grid::{pow_q, Grid, Offset, Window};
use super::sequence::Sequence;
use super::Wave;

/// Wave families with all parameters given as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub enum WaveFamily {
    /// `e^{xz}`.
    ExpXZ,
    /// `exp_q(xz) = sum (xz)^n / (q;q)_n`.
    QExpXZ { q: Q },
    /// `Phi(x + z)` with `L_alpha Phi = 0`, `Phi(0) = 1`, next `N - 1` Taylor coefficients zero.
    Airy { order: usize, alpha: Vec<Q> },
    /// `Phi(xz)` with `L_beta Phi = Phi`, `Phi = t^{beta_k} (1 + ...)`.
    Bessel {
        order: usize,
        beta: Vec<Q>,
        k: usize,
    },
    /// q-analogue: `u_i = q^{beta_i}`, exponent `beta_k` kept formal.
    QBessel {
        order: usize,
        q: Q,
        u: Vec<Q>,
        k: usize,
    },
    /// `psi_n(x) = 2^-n H_n(x)`, zero for `n < 0`.
    Hermite,
}

impl WaveFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WaveFamily::ExpXZ => "exp_xz",
            WaveFamily::QExpXZ { .. } => "q_exp_xz",
            WaveFamily::Airy { .. } => "airy",
            WaveFamily::Bessel { .. } => "bessel",
            WaveFamily::QBessel { .. } => "q_bessel",
            WaveFamily::Hermite => "hermite",
        }
    }
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn falling(n: i64, k: i64) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * qi(n - i))
}

fn diagonal(x: Symbol, z: Symbol, offset: Offset, a: &[Q]) -> Grid {
    let order = a.len() as i64 - 1;
    let coeffs = a
        .iter()
        .enumerate()
        .map(|(j, c)| ((j as i64, j as i64), c.clone()))
        .collect();
    Grid::new(
        x,
        z,
        offset.clone(),
        offset,
        coeffs,
        Window::boxed(order, order),
    )
}

/// Solve `p(j) a_j = a_{j-N}` with `a_0 = 1`; `a_j = 0` for `0 < j < N`.
fn indicial_recursion(order: usize, n: usize, p: impl Fn(i64) -> Q) -> Result<Vec<Q>> {
    let mut a = vec![Q::zero(); order + 1];
    a[0] = Q::one();
    for j in n..=order {
        let rhs = a[j - n].clone();
        let pivot = p(j as i64);
        if pivot.is_zero() {
            if !rhs.is_zero() {
                return Err(Error::RecursionPivot { index: j as i64 });
            }
            continue;
        }
        a[j] = rhs / pivot;
    }
    Ok(a)
}

pub fn make_wave(family: &WaveFamily, order: usize) -> Result<Wave> {
    let (x, z) = match family {
        WaveFamily::Hermite => (Symbol::new("x"), Symbol::new("n")),
        _ => (Symbol::new("x"), Symbol::new("z")),
    };
    make_wave_in(family, x, z, order)
}

pub fn make_wave_in(family: &WaveFamily, x: Symbol, z: Symbol, order: usize) -> Result<Wave> {
    if order < 1 {
        return Err(Error::Wave("order must be at least 1".into()));
    }
    Ok(match family {
        WaveFamily::ExpXZ => {
            let mut a = vec![Q::one()];
            for k in 1..=order as i64 {
                let next = a.last().unwrap() / qi(k);
                a.push(next);
            }
            Wave::Grid(diagonal(x, z, Offset::zero(), &a))
        }
        WaveFamily::QExpXZ { q } => {
            let mut a = vec![Q::one()];
            for k in 1..=order as i64 {
                let pivot = Q::one() - pow_q(q, k)?;
                if pivot.is_zero() {
                    return Err(Error::RecursionPivot { index: k });
                }
                let next = a.last().unwrap() / pivot;
                a.push(next);
            }
            Wave::Grid(diagonal(x, z, Offset::zero(), &a))
        }
        WaveFamily::Airy { order: n, alpha } => {
            let n = *n;
            if n < 2 || alpha.len() != n - 2 {
                return Err(Error::Wave(format!(
                    "airy({n}) needs {} alpha values",
                    n.saturating_sub(2)
                )));
            }
            let n = n as i64;
            let m_max = order as i64;
            let mut phi = vec![Q::zero(); (m_max + 1) as usize];
            phi[0] = Q::one();
            // Coefficient of t^m in L Phi = 0:
            // (m+N)!/m! phi_{m+N} + sum_i alpha_i (m+N-i)!/m! phi_{m+N-i} - phi_{m-1} = 0.
            for m in 0..=(m_max - n) {
                let mut rhs = if m >= 1 {
                    phi[(m - 1) as usize].clone()
                } else {
                    Q::zero()
                };
                for (idx, al) in alpha.iter().enumerate() {
                    let i = idx as i64 + 2;
                    rhs -= al * falling(m + n - i, n - i) * &phi[(m + n - i) as usize];
                }
                phi[(m + n) as usize] = rhs / falling(m + n, n);
            }
            let mut coeffs = BTreeMap::new();
            for t in 0..=m_max {
                let mut binom = Q::one();
                for i in 0..=t {
                    if i > 0 {
                        binom = binom * qi(t - i + 1) / qi(i);
                    }
                    if !phi[t as usize].is_zero() {
                        coeffs.insert((i, t - i), &phi[t as usize] * &binom);
                    }
                }
            }
            Wave::Grid(Grid::new(
                x,
                z,
                Offset::zero(),
                Offset::zero(),
                coeffs,
                Window::triangle(m_max),
            ))
        }
        WaveFamily::Bessel { order: n, beta, k } => {
            if beta.len() != *n || *k >= *n {
                return Err(Error::Wave(
                    "bessel wave needs N exponents and k < N".into(),
                ));
            }
            let bk = beta[*k].clone();
            let a = indicial_recursion(order, *n, |j| {
                beta.iter().fold(Q::one(), |acc, b| acc * (&bk + qi(j) - b))
            })?;
            Wave::Grid(diagonal(x, z, Offset::rational(bk), &a))
        }
        WaveFamily::QBessel { order: n, q, u, k } => {
            if u.len() != *n || *k >= *n {
                return Err(Error::Wave("q_bessel wave needs N values and k < N".into()));
            }
            let uk = u[*k].clone();
            let mut qpows = Vec::with_capacity(order + 1);
            for j in 0..=order as i64 {
                qpows.push(pow_q(q, j)?);
            }
            let a = indicial_recursion(order, *n, |j| {
                let lead = &uk * &qpows[j as usize];
                u.iter().fold(Q::one(), |acc, ui| acc * (&lead - ui))
            })?;
            Wave::Grid(diagonal(x, z, Offset::formal(uk), &a))
        }
        WaveFamily::Hermite => {
            let xs = Scalar::var(x);
            let two = Scalar::from_int(2);
            let mut h = vec![Scalar::one(), &two * &xs];
            for m in 1..order as i64 {
                let next =
                    &(&(&two * &xs) * &h[m as usize]) - &h[(m - 1) as usize].scale_q(&qi(2 * m));
                h.push(next);
            }
            h.truncate(order + 1);
            let mut values = BTreeMap::new();
            for (m, hm) in h.into_iter().enumerate() {
                values.insert(m as i64, hm.scale_q(&pow_q(&qi(2), -(m as i64))?));
            }
            Wave::Sequence(Sequence::new(x, z, values, 0, order as i64, 0))
        }
    })
}
