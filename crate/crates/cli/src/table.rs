//! The triangle every command reads from, with an optional single-entry
//! perturbation for mutation testing of the verify suites.

use std::fmt;
use std::str::FromStr;

use genbell::exact::rational_pow;
use genbell::stirling::{stirling, triangle};
use genbell::{Params, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `r,s,n,k`: add one to `S_{r,s}(n,k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub r: u32,
    pub s: u32,
    pub n: u32,
    pub k: u32,
}

impl FromStr for Perturbation {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let parts = text
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        match parts[..] {
            [r, s, n, k] => Ok(Perturbation { r, s, n, k }),
            _ => Err(format!("expected r,s,n,k, got {text:?}")),
        }
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.r, self.s, self.n, self.k)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    perturb: Option<Perturbation>,
}

impl Table {
    pub fn new(perturb: Option<Perturbation>) -> genbell::Result<Self> {
        if let Some(m) = perturb {
            let p = Params::new(m.r, m.s)?;
            if m.n == 0 || !p.band(m.n).contains(&m.k) {
                return Err(genbell::Error::InvalidParams(format!(
                    "perturbation {m} lies outside the triangle"
                )));
            }
        }
        Ok(Table { perturb })
    }

    fn bump(&self, p: Params, n: u32, k: u32) -> bool {
        self.perturb
            .is_some_and(|m| (m.r, m.s, m.n, m.k) == (p.r(), p.s(), n, k))
    }

    pub fn entry(&self, p: Params, n: u32, k: u32) -> genbell::Result<BigInt> {
        let v = stirling(p, n, k)?;
        Ok(if self.bump(p, n, k) { v + 1 } else { v })
    }

    /// `(k, S_{r,s}(n,k))` across the band of row `n >= 1`.
    pub fn row(&self, p: Params, n: u32) -> genbell::Result<Vec<(u32, BigInt)>> {
        let mut row = triangle(p, n)?.row(n);
        for (k, v) in &mut row {
            if self.bump(p, n, *k) {
                *v += 1;
            }
        }
        Ok(row)
    }

    pub fn bell(&self, p: Params, n: u32) -> genbell::Result<BigInt> {
        if n == 0 {
            return Ok(BigInt::one());
        }
        Ok(self.row(p, n)?.into_iter().map(|(_, v)| v).sum())
    }

    pub fn bell_poly(&self, p: Params, n: u32, t: &Rational) -> genbell::Result<Rational> {
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut acc = Rational::zero();
        for (k, v) in self.row(p, n)? {
            acc += Rational::from_integer(v) * rational_pow(t, k as u64);
        }
        Ok(acc)
    }
}
