//! Orthogonal-polynomial kernels: Gegenbauer and Legendre recurrences, axial
//! spherical harmonics, and log-factorials.

use alloc::vec::Vec;

use crate::math::{exp, ln, sqrt, PI};
use crate::{Error, Result};

/// Largest `n` accepted by [`log_factorial`] and the default size of a
/// [`LogFactorialTable`].
pub const LOG_FACTORIAL_LIMIT: usize = 4096;

/// Rescaling threshold for the Gegenbauer recurrence; values are renormalised
/// once they exceed it and the removed magnitude is tracked in log form.
const RESCALE: f64 = 1e150;

fn check_unit_interval(what: &'static str, x: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x })
    }
}

/// A value stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(self) -> f64 {
        if self.log_scale == 0.0 {
            self.mantissa
        } else {
            self.mantissa * exp(self.log_scale)
        }
    }
}

/// Successive Gegenbauer polynomials `C_0^(a)(x), C_1^(a)(x), ...` from the
/// upward three-term recurrence. Large degrees and orders overflow a double,
/// so the iterator yields [`Scaled`] values.
#[derive(Debug, Clone)]
pub struct GegenbauerSeq {
    alpha: f64,
    x: f64,
    next_degree: usize,
    prev: f64,
    curr: f64,
    log_scale: f64,
}

impl GegenbauerSeq {
    pub fn new(alpha: f64, x: f64) -> Result<Self> {
        check_unit_interval("gegenbauer argument", x)?;
        if !(alpha > 0.0) {
            return Err(Error::Domain {
                what: "gegenbauer order alpha",
                value: alpha,
            });
        }
        Ok(Self {
            alpha,
            x,
            next_degree: 0,
            prev: 0.0,
            curr: 0.0,
            log_scale: 0.0,
        })
    }
}

impl Iterator for GegenbauerSeq {
    type Item = Scaled;

    fn next(&mut self) -> Option<Scaled> {
        let k = self.next_degree;
        let value = match k {
            0 => 1.0,
            1 => 2.0 * self.alpha * self.x,
            _ => {
                let kf = k as f64;
                (2.0 * self.x * (kf + self.alpha - 1.0) * self.curr
                    - (kf + 2.0 * self.alpha - 2.0) * self.prev)
                    / kf
            }
        };
        self.prev = self.curr;
        self.curr = value;
        if self.curr.abs() > RESCALE {
            self.curr /= RESCALE;
            self.prev /= RESCALE;
            self.log_scale += ln(RESCALE);
        }
        self.next_degree += 1;
        Some(Scaled {
            mantissa: self.curr,
            log_scale: self.log_scale,
        })
    }
}

/// `C_degree^(alpha)(x)`.
pub fn gegenbauer(degree: usize, alpha: f64, x: f64) -> Result<f64> {
    let scaled = GegenbauerSeq::new(alpha, x)?
        .nth(degree)
        .expect("the Gegenbauer sequence is unbounded");
    let log_magnitude = ln(scaled.mantissa.abs()) + scaled.log_scale;
    if log_magnitude > ln(f64::MAX) {
        return Err(Error::Overflow {
            what: "Gegenbauer polynomial",
            log_magnitude,
        });
    }
    Ok(scaled.value())
}

/// Legendre polynomial `P_l(x)` by Bonnet's recurrence.
pub fn legendre_p(l: usize, x: f64) -> Result<f64> {
    check_unit_interval("legendre argument", x)?;
    let (mut p_prev, mut p) = (1.0, x);
    if l == 0 {
        return Ok(1.0);
    }
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    Ok(p)
}

/// Axially symmetric spherical harmonic `Y_l^0` as a function of `cos(theta)`.
pub fn y_l0(l: usize, cos_theta: f64) -> Result<f64> {
    let p = legendre_p(l, cos_theta)?;
    Ok(sqrt((2.0 * l as f64 + 1.0) / (4.0 * PI)) * p)
}

/// `ln(n!)` by direct summation; `n` above [`LOG_FACTORIAL_LIMIT`] is rejected.
pub fn log_factorial(n: usize) -> Result<f64> {
    if n > LOG_FACTORIAL_LIMIT {
        return Err(Error::FactorialRange {
            n,
            max: LOG_FACTORIAL_LIMIT,
        });
    }
    Ok((2..=n).map(|k| ln(k as f64)).sum())
}

/// Cached cumulative table of `ln(k!)` for `k <= max`.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    table: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for k in 1..=max {
            acc += ln(k as f64);
            table.push(acc);
        }
        Self { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<f64> {
        self.table.get(n).copied().ok_or(Error::FactorialRange {
            n,
            max: self.max(),
        })
    }
}

impl Default for LogFactorialTable {
    fn default() -> Self {
        Self::new(LOG_FACTORIAL_LIMIT)
    }
}
