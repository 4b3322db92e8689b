//! l_p distances and the comparison tolerance shared by every solver.

use std::fmt;

use super::ElectionError;

/// Relative tolerance used for every tie test on real-valued quantities.
pub const TAU: f64 = 1e-9;

fn scale(a: f64, b: f64) -> f64 {
    TAU * a.abs().max(b.abs()).max(1.0)
}

/// `a == b` up to [`TAU`].
pub fn approx_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if a.is_infinite() || b.is_infinite() {
        return false;
    }
    (a - b).abs() <= scale(a, b)
}

/// `a <= b` up to [`TAU`].
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b || approx_eq(a, b)
}

/// `a < b` by more than the tolerance.
pub fn definitely_lt(a: f64, b: f64) -> bool {
    !approx_le(b, a)
}

/// The norm used both for voter preferences and for the manipulation budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    /// l_p with integer `p >= 1`.
    L(u32),
    /// l_infinity.
    Inf,
}

impl Norm {
    pub fn lp(p: u32) -> Result<Norm, ElectionError> {
        if p == 0 {
            return Err(ElectionError::InvalidNorm);
        }
        Ok(Norm::L(p))
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Norm::Inf)
    }

    /// Finite exponent, `None` for l_infinity.
    pub fn p(self) -> Option<u32> {
        match self {
            Norm::L(p) => Some(p),
            Norm::Inf => None,
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::L(p) => write!(f, "l{p}"),
            Norm::Inf => write!(f, "linf"),
        }
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<(), ElectionError> {
    if x.len() != y.len() {
        return Err(ElectionError::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(())
}

/// `||x - y||_p`.
pub fn distance(x: &[f64], y: &[f64], norm: Norm) -> Result<f64, ElectionError> {
    check_dims(x, y)?;
    Ok(distance_unchecked(x, y, norm))
}

/// `sum_k |x_k - y_k|^p`, the p-th power form. For binary vectors this is the
/// Hamming distance for every finite `p`.
pub fn distance_pow(x: &[f64], y: &[f64], p: u32) -> Result<f64, ElectionError> {
    check_dims(x, y)?;
    Ok(x.iter().zip(y).map(|(a, b)| (a - b).abs().powi(p as i32)).sum())
}

pub(crate) fn distance_unchecked(x: &[f64], y: &[f64], norm: Norm) -> f64 {
    match norm {
        Norm::Inf => x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
        Norm::L(1) => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
        Norm::L(2) => x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt(),
        Norm::L(p) => x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b).abs().powi(p as i32))
            .sum::<f64>()
            .powf(1.0 / p as f64),
    }
}

/// Number of coordinates on which two binary positions differ.
pub fn hamming(x: &[f64], y: &[f64]) -> u64 {
    x.iter().zip(y).filter(|(a, b)| a != b).count() as u64
}

/// Largest number of issue flips affordable with budget `epsilon` under finite
/// `p`, i.e. `floor(epsilon^p)`. Values within tolerance of an integer snap to
/// it, so `((d-1)^(1/p))^p` counts as `d - 1`.
pub fn flip_budget(epsilon: f64, p: u32) -> u64 {
    let e = epsilon.powi(p as i32);
    let r = e.round();
    if approx_eq(e, r) {
        r.max(0.0) as u64
    } else {
        e.floor().max(0.0) as u64
    }
}

/// Distance key used for rankings. Binary instances compare exact integers
/// (Hamming counts, or 0/1 under l_infinity); real instances compare l_p
/// distances with tolerance [`TAU`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metric {
    pub norm: Norm,
    pub binary: bool,
}

impl Metric {
    pub fn key(&self, x: &[f64], y: &[f64]) -> f64 {
        if self.binary {
            let h = hamming(x, y);
            match self.norm {
                Norm::Inf => (h > 0) as u64 as f64,
                Norm::L(_) => h as f64,
            }
        } else {
            distance_unchecked(x, y, self.norm)
        }
    }
}
