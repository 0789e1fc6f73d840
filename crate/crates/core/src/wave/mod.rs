//! Truncated joint eigenfunctions and exact residual checks.
//!
//! A wave is either a bivariate grid `x^mu z^nu sum c_ij x^i z^j` or a
//! sequence `psi_n(x)`. Each carries a reliable window: the indices whose
//! coefficients are fully determined. Operators shrink or move the window;
//! residuals are only asserted inside it.

pub mod families;
pub mod grid;
pub mod sequence;

use std::fmt;

use crate::darboux::DarbouxResult;
use crate::error::{Error, Result};
use crate::ore::{OreKind, OreOperator};
use crate::scalar::{Scalar, Q};

pub use families::{make_wave, make_wave_in, WaveFamily};
pub use grid::{Grid, Offset, Window};
pub use sequence::Sequence;

/// Few waves live at once, so the grid stays inline.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq)]
pub enum Wave {
    Grid(Grid),
    Sequence(Sequence),
}

impl Wave {
    pub fn describe(&self) -> String {
        match self {
            Wave::Grid(g) => format!(
                "grid in {},{} offsets ({}, {}) window {}",
                g.x,
                g.z,
                g.mu,
                g.nu,
                g.window()
            ),
            Wave::Sequence(s) => format!(
                "sequence in {} over {} known for {} <= {}",
                s.x, s.n, s.n, s.hi
            ),
        }
    }
}

fn rational_q(op: &OreOperator) -> Result<Option<Q>> {
    match op.rule().kind() {
        OreKind::QDilation { q } => q
            .as_q()
            .map(Some)
            .ok_or_else(|| Error::Wave(format!("q = {q} must be a rational number"))),
        _ => Ok(None),
    }
}

/// Operator in the grid's first variable.
fn act_grid_x(op: &OreOperator, g: &Grid) -> Result<Grid> {
    let q = rational_q(op)?;
    let mut acc: Option<Grid> = None;
    let mut power = g.clone();
    let mut current = 0i64;
    for (k, a) in op.terms() {
        if k < 0 {
            return Err(Error::Wave("negative powers do not act on grids".into()));
        }
        match op.rule().kind() {
            OreKind::Differential => {
                while current < k {
                    power = power.derivative()?;
                    current += 1;
                }
            }
            OreKind::QDilation { .. } => {
                power = g.dilate(q.as_ref().expect("rational q"), k)?;
            }
            OreKind::Shift => return Err(Error::Wave("shift operators act on sequences".into())),
        }
        let term = power.mul_function(a)?;
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term)?,
        });
    }
    match acc {
        Some(s) => Ok(s),
        None => g.mul_function(&Scalar::zero()),
    }
}

/// Act with `op` on the side named by its main variable.
pub fn act(op: &OreOperator, w: &Wave) -> Result<Wave> {
    let v = op.rule().var();
    match w {
        Wave::Grid(g) => {
            if v == g.x {
                Ok(Wave::Grid(act_grid_x(op, g)?))
            } else if v == g.z {
                Ok(Wave::Grid(act_grid_x(op, &g.transposed())?.transposed()))
            } else {
                Err(Error::Wave(format!(
                    "operator in {v} does not act on this wave"
                )))
            }
        }
        Wave::Sequence(s) => {
            if v == s.x && !matches!(op.rule().kind(), OreKind::Shift) {
                Ok(Wave::Sequence(s.act_x(op)?))
            } else if v == s.n && matches!(op.rule().kind(), OreKind::Shift) {
                Ok(Wave::Sequence(s.act_n(op)?))
            } else {
                Err(Error::Wave(format!(
                    "operator in {v} does not act on this wave"
                )))
            }
        }
    }
}

/// Apply operators right to left: `ops[0] (ops[1] (... w))`.
pub fn act_chain(ops: &[&OreOperator], w: &Wave) -> Result<Wave> {
    let mut cur = w.clone();
    for op in ops.iter().rev() {
        cur = act(op, &cur)?;
    }
    Ok(cur)
}

/// Exact comparison of two waves on their common reliable window.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub label: String,
    pub window: String,
    pub checked: usize,
    /// Position and value of every nonzero residual coefficient.
    pub nonzero: Vec<(String, String)>,
}

impl Residual {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.nonzero.is_empty()
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} coefficients, {})",
            self.label,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.window
        )?;
        for (pos, val) in &self.nonzero {
            write!(f, "\n  {pos} -> {val}")?;
        }
        Ok(())
    }
}

pub fn compare(label: &str, lhs: &Wave, rhs: &Wave) -> Result<Residual> {
    match (lhs, rhs) {
        (Wave::Grid(a), Wave::Grid(b)) => {
            let d = a.sub(b)?;
            let points = d.window().points()?;
            if points.is_empty() {
                return Err(Error::EmptyWindow(label.to_string()));
            }
            let nonzero = d
                .nonzero()
                .map(|((i, j), c)| (format!("({i},{j})"), Scalar::from_q(c.clone()).to_string()))
                .collect();
            Ok(Residual {
                label: label.to_string(),
                window: d.window().to_string(),
                checked: points.len(),
                nonzero,
            })
        }
        (Wave::Sequence(a), Wave::Sequence(b)) => {
            let d = a.sub(b)?;
            let from = d.first.max(d.lo);
            if d.hi < from {
                return Err(Error::EmptyWindow(label.to_string()));
            }
            let nonzero = d
                .terms()
                .filter(|(n, _)| *n >= from)
                .map(|(n, v)| (format!("n={n}"), v.to_string()))
                .collect();
            Ok(Residual {
                label: label.to_string(),
                window: format!("{} in [{from}, {}]", d.n, d.hi),
                checked: (d.hi - from + 1) as usize,
                nonzero,
            })
        }
        _ => Err(Error::Wave("cannot compare a grid with a sequence".into())),
    }
}

/// `A psi = B psi`, each side acting on its own variable.
pub fn check_relation(label: &str, w: &Wave, a: &OreOperator, b: &OreOperator) -> Result<Residual> {
    compare(label, &act(a, w)?, &act(b, w)?)
}

/// `L psi = f psi` and `Lambda psi = theta psi`.
pub fn check_pair(
    l: &OreOperator,
    f: &OreOperator,
    lambda: &OreOperator,
    theta: &OreOperator,
    w: &Wave,
) -> Result<[Residual; 2]> {
    Ok([
        check_relation("L psi = f psi", w, l, f)?,
        check_relation("Lambda psi = theta psi", w, lambda, theta)?,
    ])
}

/// `psibar = P psi`, then `Lbar psibar = f psibar` and, when available,
/// `Lambdabar psibar = theta psibar`.
pub fn check_darboux_wave(
    result: &DarbouxResult,
    p: &OreOperator,
    f: &OreOperator,
    theta: &OreOperator,
    w: &Wave,
) -> Result<(Wave, Vec<Residual>)> {
    let psi_bar = act(p, w)?;
    let mut out = vec![check_relation(
        "Lbar psibar = f psibar",
        &psi_bar,
        &result.l_bar,
        f,
    )?];
    if let Some(lb) = &result.lambda_bar {
        out.push(check_relation(
            "Lambdabar psibar = theta psibar",
            &psi_bar,
            lb,
            theta,
        )?);
    }
    Ok((psi_bar, out))
}
