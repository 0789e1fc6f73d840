//! One-line wave descriptions: `FAMILY key=value ...`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::wave::{make_wave, Wave, WaveFamily};

#[derive(Clone, Debug, PartialEq)]
pub struct WaveSpec {
    pub family: WaveFamily,
    pub order: usize,
}

fn rational(key: &str, text: &str) -> Result<Q> {
    text.trim()
        .parse::<Q>()
        .map_err(|_| Error::Format(format!("{key}: '{text}' is not a rational number")))
}

fn rationals(key: &str, text: &str) -> Result<Vec<Q>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| rational(key, t)).collect()
}

fn count(key: &str, text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::Format(format!("{key}: '{text}' is not a count")))
}

fn list(v: &[Q]) -> String {
    v.iter()
        .map(|c| Scalar::from_q(c.clone()).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl WaveSpec {
    pub fn parse(text: &str) -> Result<WaveSpec> {
        let mut words = text.split_whitespace();
        let name = words
            .next()
            .ok_or_else(|| Error::Format("empty wave description".into()))?;
        let mut kv = BTreeMap::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("expected key=value, got '{w}'")))?;
            if kv.insert(k, v).is_some() {
                return Err(Error::Format(format!("duplicate key '{k}'")));
            }
        }
        let mut take = |k: &str| kv.remove(k);
        let order = take("order")
            .map(|v| count("order", v))
            .transpose()?
            .unwrap_or(20);
        fn need<'a>(name: &str, k: &str, v: Option<&'a str>) -> Result<&'a str> {
            v.ok_or_else(|| Error::Format(format!("{name} needs {k}=")))
        }
        let family = match name {
            "exp_xz" => WaveFamily::ExpXZ,
            "q_exp_xz" => WaveFamily::QExpXZ {
                q: rational("q", need(name, "q", take("q"))?)?,
            },
            "airy" => {
                let n = take("N").map(|v| count("N", v)).transpose()?.unwrap_or(2);
                let alpha = take("alpha")
                    .map(|v| rationals("alpha", v))
                    .transpose()?
                    .unwrap_or_default();
                WaveFamily::Airy { order: n, alpha }
            }
            "bessel" => {
                let beta = rationals("beta", need(name, "beta", take("beta"))?)?;
                let k = take("k").map(|v| count("k", v)).transpose()?.unwrap_or(0);
                WaveFamily::Bessel {
                    order: beta.len(),
                    beta,
                    k,
                }
            }
            "q_bessel" => {
                let q = rational("q", need(name, "q", take("q"))?)?;
                let u = rationals("u", need(name, "u", take("u"))?)?;
                let k = take("k").map(|v| count("k", v)).transpose()?.unwrap_or(0);
                WaveFamily::QBessel {
                    order: u.len(),
                    q,
                    u,
                    k,
                }
            }
            "hermite" => WaveFamily::Hermite,
            other => return Err(Error::Format(format!("unknown wave family '{other}'"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::Format(format!("{name} does not take {k}=")));
        }
        Ok(WaveSpec { family, order })
    }

    pub fn build(&self) -> Result<Wave> {
        make_wave(&self.family, self.order)
    }
}

impl fmt::Display for WaveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |c: &Q| Scalar::from_q(c.clone()).to_string();
        f.write_str(self.family.name())?;
        match &self.family {
            WaveFamily::ExpXZ | WaveFamily::Hermite => {}
            WaveFamily::QExpXZ { q: qq } => write!(f, " q={}", q(qq))?,
            WaveFamily::Airy { order, alpha } => {
                write!(f, " N={order}")?;
                if !alpha.is_empty() {
                    write!(f, " alpha={}", list(alpha))?;
                }
            }
            WaveFamily::Bessel { beta, k, .. } => write!(f, " beta={} k={k}", list(beta))?,
            WaveFamily::QBessel { q: qq, u, k, .. } => {
                write!(f, " q={} u={} k={k}", q(qq), list(u))?
            }
        }
        write!(f, " order={}", self.order)
    }
}
